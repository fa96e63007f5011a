// Parsing, factoring and splitting partial numerators.

use pcfkit::poly::{equal_degree_split, factor_over_q, parse_poly, rational_roots};
use std::error::Error;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let b = parse_poly("(2n+1)(n-3)*4")?.to_int().ok_or("not integral")?;
    println!("b = {b}");

    let f = factor_over_q(&b)?;
    for (g, m) in &f.factors {
        println!("  factor {g} ^{m}");
    }
    assert_eq!(f.expand(), b.to_rat());

    let roots = rational_roots(&b);
    println!("rational roots: {roots:?}");

    // quadratic b splits into two monic linear factors
    let split = equal_degree_split(&b)?.ok_or("b should split")?;
    println!("split: {} · ({}) · ({})", split.scale, split.left, split.right);
    assert_eq!(split.reconstruct(), b.to_rat());

    let irreducible = parse_poly("n^2+n+1")?.to_int().ok_or("not integral")?;
    assert!(equal_degree_split(&irreducible)?.is_none());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
