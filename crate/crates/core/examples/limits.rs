// Rigorous limit enclosures, checked against named constants.

use pcfkit::constants::eval_expr;
use pcfkit::pcf::{classify, convergents, determinant_check, limit_estimate, Pcf};
use std::error::Error;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let cases = [
        (Pcf::from_coeffs(&[1], &[1]), "phi"),
        (Pcf::from_coeffs(&[1, 2], &[0, 0, 1]), "4/pi"),
        (Pcf::from_coeffs(&[2, 4], &[1]), "(e+1)/(e-1)"),
    ];
    for (pcf, expr) in cases {
        let class = classify(&pcf);
        let iv = limit_estimate(&pcf, 400, 256)?;
        let want = eval_expr(expr, iv.lo.prec() + 64)?;
        println!("{pcf:<24} {:?}  {} ≈ {}  ({} digits)", class.kind, expr, iv.mid_string(30), iv.agreeing_digits());
        assert!(iv.contains(&want), "{expr} outside the enclosure");

        let table = convergents(&pcf, 200)?;
        assert!(determinant_check(&table));
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
