// Driving the command layer from a saved run configuration.

use pcfkit::cli::{run, CommandKind, OutputFormat, RunConfig};
use std::error::Error;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let mut config = RunConfig::new(CommandKind::Eval);
    config.entry = Some("four-over-pi".into());
    config.depth = Some(500);
    let saved = serde_json::to_string(&config)?;

    let restored: RunConfig = serde_json::from_str(&saved)?;
    let out = run(&restored)?;
    print!("{}", out.body);
    assert!(out.warnings.is_empty());

    let mut search = RunConfig::new(CommandKind::Search);
    search.b = Some("n^2+3n+2".into());
    search.search_box = Some("1..5,1..5".into());
    search.format = Some(OutputFormat::Csv);
    print!("{}", run(&search)?.body);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
