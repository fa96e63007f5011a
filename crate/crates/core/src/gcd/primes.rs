use super::GcdSeries;
use crate::lsq;
use crate::numth::{primes_upto, valuation};
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub enum PrimeClass {
    /// v_p(GCD_n) grows sub-linearly
    ExponentiallyCoprime,
    /// v_p(GCD_n) ≈ multiplier·⌊n/(p−1)⌋, the share of (n!)^multiplier
    FloorPattern { multiplier: u32 },
    /// v_p(GCD_n) ≈ rate·n + multiplier·⌊n/(p−1)⌋ with a half-integer rate
    LinearRate { rate: f64, multiplier: u32 },
    Unclassified { slope: f64 },
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct PrimeSeries {
    pub prime: u64,
    pub exponents: Vec<u32>,
    /// regression slope of v_p(GCD_n) against n over the second half of the table
    pub slope: f64,
    pub class: PrimeClass,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct PrimeProfile {
    pub primes: BTreeMap<u64, PrimeSeries>,
}

impl PrimeProfile {
    /// Slope of v_p(GCD_n) minus the slope of d·v_p(n!) over the same window.
    pub fn deficit_vs_factorial(&self, p: u64, d: usize) -> Option<f64> {
        let s = self.primes.get(&p)?;
        let depth = s.exponents.len() - 1;
        let (xs, _) = tail_window(depth);
        let fact: Vec<f64> = xs.iter().map(|&n| d as f64 * legendre(n as u64, p) as f64).collect();
        Some(s.slope - lsq::slope(&xs, &fact))
    }

    pub fn coprime_primes(&self) -> Vec<u64> {
        self.primes.values().filter(|s| s.class == PrimeClass::ExponentiallyCoprime).map(|s| s.prime).collect()
    }

    pub fn has_unclassified(&self) -> bool {
        self.primes.values().any(|s| matches!(s.class, PrimeClass::Unclassified { .. }))
    }
}

/// v_p(n!).
pub fn legendre(n: u64, p: u64) -> u64 {
    let mut s = 0;
    let mut m = n;
    while m > 0 {
        m /= p;
        s += m;
    }
    s
}

fn tail_window(depth: usize) -> (Vec<f64>, usize) {
    let lo = depth / 2;
    ((lo..=depth).map(|n| n as f64).collect(), lo)
}

/// Tolerance on slopes; tighter for large p where the floor pattern 1/(p−1) is small.
pub(crate) fn slope_tol(p: u64) -> f64 {
    (0.3 / (p - 1) as f64).min(0.03)
}

pub(crate) fn classify_slope(p: u64, s: f64) -> PrimeClass {
    let tol = slope_tol(p);
    if s.abs() < tol {
        return PrimeClass::ExponentiallyCoprime;
    }
    let unit = 1.0 / (p - 1) as f64;
    for m in 1..=6u32 {
        if (s - m as f64 * unit).abs() < tol {
            return PrimeClass::FloorPattern { multiplier: m };
        }
    }
    for m in 0..=6u32 {
        for k in 1..=4 {
            let rate = k as f64 / 2.0;
            if (s - rate - m as f64 * unit).abs() < tol {
                return PrimeClass::LinearRate { rate, multiplier: m };
            }
        }
    }
    PrimeClass::Unclassified { slope: s }
}

/// v_p(GCD_n) for all primes p ≤ prime_bound, each classified from its tail regression.
pub fn prime_profile(series: &GcdSeries, prime_bound: u64) -> PrimeProfile {
    let depth = series.depth();
    let (xs, lo) = tail_window(depth);
    let mut primes = BTreeMap::new();
    for p in primes_upto(prime_bound) {
        let exponents: Vec<u32> = series.gcds().iter().map(|g| valuation(g, p)).collect();
        let ys: Vec<f64> = exponents[lo..].iter().map(|&v| v as f64).collect();
        let slope = lsq::slope(&xs, &ys);
        let class = classify_slope(p, slope);
        primes.insert(p, PrimeSeries { prime: p, exponents, slope, class });
    }
    PrimeProfile { primes }
}

/// Number of primes p ≤ n whose exponent in GCD_n is below half their share of n!^d.
pub fn coprime_prime_count(series: &GcdSeries, n: usize, d: usize) -> usize {
    let g = series.gcd(n);
    primes_upto(n as u64)
        .into_iter()
        .filter(|&p| 2 * (valuation(g, p) as u64) < d as u64 * legendre(n as u64, p))
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gcd::gcd_series;
    use crate::pcf::{convergents, Pcf};

    #[test]
    fn legendre_small() {
        assert_eq!(legendre(10, 2), 8);
        assert_eq!(legendre(100, 5), 24);
    }

    #[test]
    fn classify_known_slopes() {
        assert_eq!(classify_slope(3, 0.001), PrimeClass::ExponentiallyCoprime);
        assert_eq!(classify_slope(5, 0.25), PrimeClass::FloorPattern { multiplier: 1 });
        assert_eq!(classify_slope(7, 1.0 + 1.0 / 6.0), PrimeClass::LinearRate { rate: 1.0, multiplier: 1 });
        assert!(matches!(classify_slope(7, 0.37), PrimeClass::Unclassified { .. }));
    }

    #[test]
    fn power_of_two_deficit() {
        let pcf = Pcf::from_coeffs(&[0, 1], &[0, 1, 2]);
        let s = gcd_series(&convergents(&pcf, 1200).unwrap()).unwrap();
        let prof = prime_profile(&s, 31);
        let d = prof.deficit_vs_factorial(2, 1).unwrap();
        assert!((d + 1.0).abs() < 0.03, "{d}");
        assert_eq!(prof.primes[&3].class, PrimeClass::FloorPattern { multiplier: 1 });
    }
}
