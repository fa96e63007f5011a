// Inflating a continued fraction by c(n) and recovering it by deflation.

use pcfkit::pcf::Pcf;
use pcfkit::poly::{IntPoly, RatPoly};
use pcfkit::transforms::{deflate, inflate_pcf, scaling_check};
use std::error::Error;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let golden = Pcf::from_coeffs(&[1], &[1]);
    let c = RatPoly::new([1, 3]);
    let inflated = inflate_pcf(&golden, &c)?.to_pcf().ok_or("integral inflation")?;
    println!("{golden} inflated by 3n+1: {inflated}");

    let d = deflate(&inflated)?;
    println!("deflated: {} with c = {}", d.pcf, d.c);
    assert_eq!(d.pcf, golden);
    assert_eq!(d.c, IntPoly::new([1, 3]));

    let check = scaling_check(&(&golden).into(), &c, 150)?;
    println!("scaling identities to depth {}: {}", check.depth, check.holds());
    assert!(check.holds());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
