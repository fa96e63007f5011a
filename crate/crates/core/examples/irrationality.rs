// Irrationality measure of Apéry's continued fraction for 6/ζ(3).

use pcfkit::irrationality::{delta_formula, report, Reference, ReportOptions};
use pcfkit::pcf::Pcf;
use std::error::Error;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    // α = 17 + 12√2, |B| = 1, λ = e⁻³
    let alpha = 17.0 + 12.0 * 2f64.sqrt();
    let closed = delta_formula(alpha, 1.0, (-3f64).exp())?;
    println!("δ from the formula: {closed}");

    let apery = Pcf::from_coeffs(&[5, 27, 51, 34], &[0, 0, 0, 0, 0, 0, -1]);
    let rep = report("apery", &apery, 800, Some(Reference::Expr("6/zeta3")), &ReportOptions::default())?;
    println!("measured λ = {:.4} (e⁻³ = {:.4})", rep.lambda.unwrap_or(f64::NAN), (-3f64).exp());
    if let Some(d) = &rep.delta_formula {
        println!("δ with measured λ: {d}");
    }
    if let Some(e) = &rep.delta_empirical {
        println!("empirical δ: {:.3}", e.delta);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
