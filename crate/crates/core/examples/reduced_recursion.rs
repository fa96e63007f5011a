// A reduced recursion for PCF[n, 2n²+n] with GCD_n = n!/2^n, and fast evaluation.

use pcfkit::gcd::GcdForm;
use pcfkit::pcf::Pcf;
use pcfkit::reduction::{bench_csv, build_reduced, exact_agreement, fast_eval, integrality_test};
use std::error::Error;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let pcf = Pcf::from_coeffs(&[0, 1], &[0, 1, 2]);
    let rr = build_reduced(&pcf, &GcdForm::parse("n!/2^n")?)?;
    println!("{rr}");
    assert!(exact_agreement(&rr, 200)?);

    let verdict = integrality_test(&rr, 5, 600, 7);
    println!("integral from random starts: {}", verdict.passed);

    let fe = fast_eval(&rr, &verdict, 1200, 256, 4)?;
    println!("limit ≈ {}", fe.interval.mid_string(20));
    print!("{}", bench_csv(&fe.rows));
    println!("bit ratio at the final depth: {:.3}", fe.bit_ratio);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
