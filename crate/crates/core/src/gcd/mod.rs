//! GCD growth of convergent numerators and denominators.

mod fit;
mod form;
mod lambda;
mod primes;

pub use fit::{fit_closed_form, tail_criterion, ClosedFormFit, FitOptions, FloorReading, TailCheck};
pub use form::{Exponent, FactorialPart, FormParseError, GcdForm, PrimePower};
pub use lambda::{lambda_estimate, FrThresholds, FrVerdict, LambdaEstimate, SlopeModel};
pub use primes::{coprime_prime_count, prime_profile, PrimeClass, PrimeProfile, PrimeSeries};

use crate::numth::{ln_abs, ln_factorial_table};
use crate::pcf::ConvergentTable;
use rug::{Complete, Integer};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GcdError {
    #[error("convergent table is degenerate: {0}")]
    Degenerate(String),
    #[error("series too short: {len} terms, need at least {need}")]
    TooShort { len: usize, need: usize },
}

/// gcd(p_n, q_n) and gcd(p_n, q_n, p_{n−1}, q_{n−1}) for n = 0..=depth.
#[derive(Debug, Clone)]
pub struct GcdSeries {
    gcd: Vec<Integer>,
    gcd2: Vec<Integer>,
}

impl GcdSeries {
    pub fn len(&self) -> usize {
        self.gcd.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gcd.is_empty()
    }

    pub fn depth(&self) -> usize {
        self.gcd.len() - 1
    }

    pub fn gcd(&self, n: usize) -> &Integer {
        &self.gcd[n]
    }

    pub fn gcd2(&self, n: usize) -> &Integer {
        &self.gcd2[n]
    }

    pub fn gcds(&self) -> &[Integer] {
        &self.gcd
    }

    pub fn gcd2s(&self) -> &[Integer] {
        &self.gcd2
    }

    /// ln GCD_n (or ln GCD2_n) for every n.
    pub fn ln_values(&self, use_gcd2: bool) -> Vec<f64> {
        let src = if use_gcd2 { &self.gcd2 } else { &self.gcd };
        src.iter().map(ln_abs).collect()
    }

    /// f(n) = ln GCD_n − d·ln n!.
    pub fn reduced_log(&self, d: usize) -> Vec<f64> {
        let lnf = ln_factorial_table(self.depth());
        self.gcd.iter().enumerate().map(|(n, g)| ln_abs(g) - d as f64 * lnf[n]).collect()
    }
}

/// Exact GCD and GCD2 sequences. The table's recursion is re-verified and the GCD2
/// divisibility chain is asserted while building.
pub fn gcd_series(table: &ConvergentTable) -> Result<GcdSeries, GcdError> {
    if let Some(n) = table.truncated_at() {
        return Err(GcdError::Degenerate(format!("b({n}) = 0, fraction terminates")));
    }
    if let Some(n) = table.recursion_violation() {
        return Err(GcdError::Degenerate(format!("recursion fails at n = {n}")));
    }
    let depth = table.depth();
    let mut gcd = Vec::with_capacity(depth + 1);
    let mut gcd2 = Vec::with_capacity(depth + 1);
    // n = 0: gcd(p_0, 1) = 1 and GCD2_0 includes q_{−1} = 0, p_{−1} = 1.
    gcd.push(Integer::from(table.p(0).gcd_ref(table.q(0))));
    gcd2.push(Integer::from(1));
    for n in 1..=depth {
        let (p, q) = (table.p(n as i64), table.q(n as i64));
        let known = &gcd2[n - 1];
        // GCD2_{n−1} divides both p_n and q_n; strip it before the gcd
        if !p.is_divisible(known) || !q.is_divisible(known) {
            return Err(GcdError::Degenerate(format!("GCD2 chain broken at n = {n}")));
        }
        let g = if *known == 1 {
            p.gcd_ref(q).complete()
        } else {
            let pr = p.div_exact_ref(known).complete();
            let qr = q.div_exact_ref(known).complete();
            pr.gcd(&qr) * known
        };
        let g2 = g.gcd_ref(&gcd[n - 1]).complete();
        if !g2.is_divisible(known) {
            return Err(GcdError::Degenerate(format!("GCD2 chain broken at n = {n}")));
        }
        gcd.push(g);
        gcd2.push(g2);
    }
    Ok(GcdSeries { gcd, gcd2 })
}

/// True when (1/n)·|ln(GCD_n/GCD2_n)| is below `tol` at the end of the table and not
/// trending upward.
pub fn gcd2_equivalence_check(series: &GcdSeries) -> bool {
    gcd2_equivalence_detail(series, 0.05).pass
}

pub fn gcd2_equivalence_detail(series: &GcdSeries, tol: f64) -> TailCheck {
    let g = series.ln_values(false);
    let g2 = series.ln_values(true);
    let diff: Vec<f64> = g.iter().zip(&g2).map(|(a, b)| a - b).collect();
    tail_criterion(&diff, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pcf::{convergents, Pcf};

    #[test]
    fn fibonacci_gcds_are_one() {
        let t = convergents(&Pcf::from_coeffs(&[1], &[1]), 200).unwrap();
        let s = gcd_series(&t).unwrap();
        assert!(s.gcds().iter().all(|g| *g == 1));
        assert!(gcd2_equivalence_check(&s));
    }

    #[test]
    fn chain_and_divisibility() {
        let t = convergents(&Pcf::from_coeffs(&[0, 1], &[0, 1, 2]), 400).unwrap();
        let s = gcd_series(&t).unwrap();
        for n in 0..=400 {
            assert!(s.gcd(n).is_divisible(s.gcd2(n)));
            assert_eq!(*s.gcd(n), Integer::from(t.p(n as i64).gcd_ref(t.q(n as i64))));
            if n > 0 {
                assert!(s.gcd2(n).is_divisible(s.gcd2(n - 1)));
            }
        }
    }

    #[test]
    fn section_example_gcd_is_factorial_over_power_of_two() {
        // a = n, b = 2n²+n: (1/n)·ln(GCD·2ⁿ/n!) → 0
        let depth = 1500;
        let t = convergents(&Pcf::from_coeffs(&[0, 1], &[0, 1, 2]), depth).unwrap();
        let s = gcd_series(&t).unwrap();
        let f = s.reduced_log(1);
        let v = (f[depth] + depth as f64 * 2f64.ln()) / depth as f64;
        assert!(v.abs() < 0.01, "{v}");
    }

    #[test]
    fn corrupted_table_is_rejected() {
        let pcf = Pcf::from_coeffs(&[0, 1], &[0, 1, 2]);
        let t = convergents(&pcf, 50).unwrap();
        let mut p: Vec<Integer> = (-1..=50).map(|n| t.p(n).clone()).collect();
        let q: Vec<Integer> = (-1..=50).map(|n| t.q(n).clone()).collect();
        p[30] *= 3;
        let bad = ConvergentTable::from_parts(pcf, p, q);
        assert!(matches!(gcd_series(&bad), Err(GcdError::Degenerate(_))));
        let trunc = convergents(&Pcf::from_coeffs(&[1, 1], &[-3, 1]), 10).unwrap();
        assert!(matches!(gcd_series(&trunc), Err(GcdError::Degenerate(_))));
    }
}
