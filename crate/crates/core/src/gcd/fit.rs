//! Search over factorial × prime-power × LCM forms for one that matches GCD_n up to a
//! sub-exponential factor.

use super::form::{Exponent, FactorialPart, GcdForm, PrimePower};
use super::primes::{prime_profile, slope_tol};
use super::GcdSeries;
use crate::lsq;
use crate::numth::valuation;
use crate::pcf::Pcf;
use crate::poly::multifactorial;
use rug::Integer;

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct FitOptions {
    /// bound on |(1/n)·ln(GCD_n/candidate_n)| at the deepest point
    pub tol: f64,
    pub prime_bound: u64,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions { tol: 0.02, prime_bound: 101 }
    }
}

/// How the exponent of denominator primes ⌊n/(p−1)⌋ combines with deg a.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum FloorReading {
    /// no floor-pattern primes in the accepted form
    NotApplicable,
    /// deg a = 1: both readings coincide
    Indistinguishable,
    /// p^{deg a · ⌊n/(p−1)⌋} matched
    Multiplier,
    /// p^{⌊n/(p−1)⌋^{deg a}} matched
    Power,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct TailCheck {
    /// |r_N|/N at the deepest point
    pub at_depth: f64,
    /// mean of |r_n|/n over [N/2, 3N/4)
    pub early_mean: f64,
    /// mean of |r_n|/n over [3N/4, N]
    pub late_mean: f64,
    pub pass: bool,
}

/// Given r_n = ln(GCD_n / candidate_n) for n = 0..=N, checks |r_N|/N < tol with a
/// non-increasing trend of |r_n|/n across the second half.
pub fn tail_criterion(log_ratio: &[f64], tol: f64) -> TailCheck {
    let depth = log_ratio.len() - 1;
    let t = |n: usize| log_ratio[n].abs() / n.max(1) as f64;
    let (h, q3) = (depth / 2, 3 * depth / 4);
    let mean = |lo: usize, hi: usize| (lo..hi).map(t).sum::<f64>() / (hi - lo).max(1) as f64;
    let early_mean = mean(h, q3);
    let late_mean = mean(q3, depth + 1);
    let at_depth = t(depth);
    let pass = at_depth < tol && late_mean <= early_mean + 0.002;
    TailCheck { at_depth, early_mean, late_mean, pass }
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct ClosedFormFit {
    pub form: Option<GcdForm>,
    pub residual_flag: bool,
    pub reading: FloorReading,
    /// closest candidate examined, whether or not it was accepted
    pub best: Option<(GcdForm, TailCheck)>,
    /// primes whose exponent rate fit no allowed pattern for the best candidate
    pub unclassified_primes: Vec<u64>,
}

struct Candidate {
    forms: Vec<(GcdForm, FloorReading)>,
    unclassified: Vec<u64>,
}

fn build_candidates(u: u32, v: i64, d: usize, slopes: &[(u64, f64)], tail: &[f64], lo: usize, depth: usize) -> Candidate {
    let power = d.max(1) as u32;
    let mut numer = Vec::new();
    let mut floor_primes = Vec::new();
    let mut unclassified = Vec::new();
    for &(p, s) in slopes {
        // slope of power·v_p(F(n)) over the same window
        let mut acc = valuation(&multifactorial(v, u), p) as f64;
        let mut vf = Vec::with_capacity(depth + 1);
        for n in 0..=depth {
            if n > 0 {
                let k = u as i64 * n as i64 + v;
                if k >= 1 {
                    acc += valuation(&Integer::from(k), p) as f64;
                } else {
                    acc = 0.0;
                }
            }
            vf.push(power as f64 * acc);
        }
        let fs = lsq::slope(tail, &vf[lo..]);
        let e = s - fs;
        let tol = slope_tol(p);
        if e.abs() < tol {
            continue;
        }
        if (e + power as f64 / (p - 1) as f64).abs() < tol {
            floor_primes.push(p);
            continue;
        }
        let k = (2.0 * e).round();
        if (1.0..=4.0).contains(&k) && (e - k / 2.0).abs() < tol {
            numer.push(PrimePower { prime: p, exponent: Exponent::Linear { num: k as u32, den: 2 } });
            continue;
        }
        unclassified.push(p);
    }
    let base = GcdForm {
        factorial: Some(FactorialPart { u, v, power }),
        numerator_primes: numer,
        denominator_primes: Vec::new(),
        lcm: None,
        residual: false,
    };
    let mut forms = Vec::new();
    if floor_primes.is_empty() {
        forms.push((base, FloorReading::NotApplicable));
    } else {
        let mult = floor_primes
            .iter()
            .map(|&p| PrimePower { prime: p, exponent: Exponent::Linear { num: power, den: p as u32 - 1 } })
            .collect();
        let reading = if power == 1 { FloorReading::Indistinguishable } else { FloorReading::Multiplier };
        forms.push((GcdForm { denominator_primes: mult, ..base.clone() }, reading));
        if power > 1 {
            let pw = floor_primes
                .iter()
                .map(|&p| PrimePower { prime: p, exponent: Exponent::FloorPower { den: p as u32 - 1, power } })
                .collect();
            forms.push((GcdForm { denominator_primes: pw, ..base }, FloorReading::Power));
        }
    }
    Candidate { forms, unclassified }
}

/// Searches factorial parts (u·n+v)!^{(u)} with u ≤ 3·deg a and 0 ≤ v ≤ u, per-prime
/// corrections inferred from exponent slopes, and LCM[f·n] for f ≤ 3. The first candidate
/// (in that order) passing the tail criterion is returned. Intended for series with
/// factorial reduction or from PCFs with deg b < 2·deg a.
pub fn fit_closed_form(series: &GcdSeries, pcf: &Pcf, opts: &FitOptions) -> ClosedFormFit {
    let depth = series.depth();
    let d = pcf.deg_a();
    let ln_g = series.ln_values(false);
    let profile = prime_profile(series, opts.prime_bound);
    let slopes: Vec<(u64, f64)> = profile.primes.values().map(|s| (s.prime, s.slope)).collect();
    let lo = depth / 2;
    let tail: Vec<f64> = (lo..=depth).map(|n| n as f64).collect();

    let mut best: Option<(GcdForm, TailCheck, Vec<u64>)> = None;
    let mut accepted: Option<(GcdForm, FloorReading)> = None;
    let mut readings_passed: Vec<FloorReading> = Vec::new();
    'search: for u in 1..=(3 * d.max(1)) as u32 {
        for v in 0..=u as i64 {
            let cand = build_candidates(u, v, d, &slopes, &tail, lo, depth);
            let mut passed_here = Vec::new();
            for (form, reading) in &cand.forms {
                let mut local_best: Option<(GcdForm, TailCheck)> = None;
                for f in [None, Some(1), Some(2), Some(3)] {
                    let trial = GcdForm { lcm: f, ..form.clone() };
                    let lc = trial.ln_values(depth);
                    let r: Vec<f64> = ln_g.iter().zip(&lc).map(|(a, b)| a - b).collect();
                    let check = tail_criterion(&r, opts.tol);
                    if local_best.as_ref().is_none_or(|(_, c)| check.at_depth < c.at_depth) {
                        local_best = Some((trial, check));
                    }
                }
                let (trial, check) = local_best.expect("at least one LCM option");
                if best.as_ref().is_none_or(|(_, c, _)| check.at_depth < c.at_depth) {
                    best = Some((trial.clone(), check, cand.unclassified.clone()));
                }
                if check.pass && cand.unclassified.is_empty() {
                    passed_here.push((trial, *reading));
                }
            }
            if let Some(first) = passed_here.first().cloned() {
                readings_passed = passed_here.iter().map(|p| p.1).collect();
                accepted = Some(first);
                break 'search;
            }
        }
    }
    let reading = match (accepted.as_ref().map(|a| a.1), readings_passed.len()) {
        (None, _) => FloorReading::NotApplicable,
        (Some(FloorReading::Multiplier), 2) => FloorReading::Both,
        (Some(r), _) => r,
    };
    let residual_flag = accepted.is_none();
    let unclassified_primes = best.as_ref().map(|b| b.2.clone()).unwrap_or_default();
    ClosedFormFit {
        form: accepted.map(|a| a.0),
        residual_flag,
        reading,
        best: best.map(|(f, c, _)| (f, c)),
        unclassified_primes,
    }
}
