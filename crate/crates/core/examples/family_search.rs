// Searching partial denominators with factorial reduction and naming their family.

use pcfkit::family_search::{match_family, pythagorean_sets, search_a_for_fr, splittable, SearchBox};
use pcfkit::poly::IntPoly;
use std::error::Error;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let b = IntPoly::new([2, 3, 1]); // (n+1)(n+2)
    assert!(splittable(&b));
    let hits = search_a_for_fr(&b, &SearchBox::uniform(1, 1, 5))?;
    for h in &hits {
        let fam = h.family.as_ref().map(|f| f.to_string()).unwrap_or_else(|| "?".into());
        println!("a = {:<8} λ = {:.3}  {fam}", h.a.to_string(), h.lambda);
    }
    assert!(!hits.is_empty());

    let b4 = IntPoly::new([0, 0, 0, 0, -1]);
    let a = IntPoly::new([1, 2, 2]);
    println!("{a} with {b4}: {:?}", match_family(&a, &b4).map(|f| f.to_string()));

    for x in [1, 2] {
        let s = pythagorean_sets(x, 100);
        println!("x = {x}: z ∈ {:?}", s.all_y);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
