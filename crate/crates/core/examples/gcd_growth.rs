// GCD growth of convergents: λ, the factorial-reduction verdict, and a closed form.

use pcfkit::gcd::{fit_closed_form, gcd_series, lambda_estimate, FitOptions, FrThresholds};
use pcfkit::pcf::{convergents, Pcf};
use std::error::Error;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let thr = FrThresholds::default();
    for (a, b) in [(&[2, 3][..], &[0, -2, 4][..]), (&[0, 1], &[1, 0, 1])] {
        let pcf = Pcf::from_coeffs(a, b);
        let series = gcd_series(&convergents(&pcf, 1500)?)?;
        let est = lambda_estimate(&series, pcf.deg_a(), 1.0 / 3.0, &thr)?;
        println!("{pcf}: λ = {:.4}, {:?}", est.lambda, est.fr_verdict);

        let fit = fit_closed_form(&series, &pcf, &FitOptions::default());
        match &fit.form {
            Some(form) => println!("  GCD_n ≐ {form}"),
            None => println!("  no closed form ({:?})", fit.reading),
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
