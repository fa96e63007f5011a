//! Effective irrationality measure δ of the convergent sequence: the closed formula in α,
//! B, λ, a measured δ against a reference limit, and the unbalanced-degree formulas.

use crate::gcd::{
    gcd2_equivalence_check, gcd_series, lambda_estimate, FrThresholds, FrVerdict, GcdError, GcdSeries, LambdaEstimate,
};
use crate::lsq;
use crate::numth::ln_abs;
use crate::pcf::{alpha, classify, convergents, limit_estimate, Convergence, ConvergentTable, Pcf, PcfClass, PcfError, PcfKind};
use rug::Float;
use std::f64::consts::LN_2;

/// |ln α − ln λ| below this is treated as λ = α.
pub const LIOUVILLE_TOL: f64 = 1e-3;
/// ln λ may exceed ln α by this much (finite-depth noise) before the input is rejected.
pub const LAMBDA_EXCESS_TOL: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DeltaValue {
    Finite(f64),
    Unbounded,
}

impl DeltaValue {
    pub fn finite(&self) -> Option<f64> {
        match self {
            DeltaValue::Finite(v) => Some(*v),
            DeltaValue::Unbounded => None,
        }
    }
}

impl std::fmt::Display for DeltaValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DeltaValue::Finite(v) => write!(f, "{v:.4}"),
            DeltaValue::Unbounded => f.write_str("unbounded"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DeltaError {
    #[error("λ = {lambda} exceeds α = {alpha}")]
    Domain { alpha: f64, lambda: f64 },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("formula applies to deg b < 2 deg a only, got {0:?}")]
    WrongKind(PcfKind),
    #[error("reference has {have} bits, the depth needs {need}")]
    InsufficientPrecision { have: u32, need: u32 },
    #[error(transparent)]
    Pcf(#[from] PcfError),
    #[error(transparent)]
    Gcd(#[from] GcdError),
}

/// δ = (ln α − ln|B| + ln λ)/(ln α − ln λ).
pub fn delta_formula(alpha: f64, b_abs: f64, lambda: f64) -> Result<DeltaValue, DeltaError> {
    if !(alpha > 0.0 && b_abs > 0.0 && lambda > 0.0) {
        return Err(DeltaError::InvalidInput(format!("α = {alpha}, |B| = {b_abs}, λ = {lambda} must be positive")));
    }
    let (la, lb, ll) = (alpha.ln(), b_abs.ln(), lambda.ln());
    if ll - la > LAMBDA_EXCESS_TOL {
        return Err(DeltaError::Domain { alpha, lambda });
    }
    if (la - ll).abs() < LIOUVILLE_TOL {
        return Ok(DeltaValue::Unbounded);
    }
    Ok(DeltaValue::Finite((la - lb + ll) / (la - ll)))
}

/// (d_a − d_b + r)/(d_a − r) for deg b < 2 deg a, r the factorial power of the GCD
/// (0 without reduction).
pub fn unbalanced_delta(pcf: &Pcf, r: Option<f64>) -> Result<DeltaValue, DeltaError> {
    let class = classify(pcf);
    if class.kind != PcfKind::UnbalancedLow {
        return Err(DeltaError::WrongKind(class.kind));
    }
    let (da, db) = (pcf.deg_a() as f64, pcf.deg_b() as f64);
    let r = r.unwrap_or(0.0);
    if (da - r).abs() < 1e-9 {
        return Ok(DeltaValue::Unbounded);
    }
    Ok(DeltaValue::Finite((da - db + r) / (da - r)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum GrowthBasis {
    /// ln(q/G) has an n·ln n term: no factorial reduction
    Factorial,
    /// ln(q/G) is exponential in n
    Exponential,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct EmpiricalDelta {
    /// ratio of the leading growth terms of −ln|e_n| and ln(q_n/G_n), minus one
    pub delta: f64,
    /// δ over the second half of the window minus δ over the whole window
    pub drift: f64,
    /// −ln|e_N| / ln(q_N/G_N) − 1 at the deepest point
    pub pointwise: f64,
    pub basis: GrowthBasis,
    pub used_gcd2: bool,
    pub window: (usize, usize),
}

const SAMPLES: usize = 240;

fn ln_float_abs(x: &Float) -> f64 {
    let (m, e) = x.to_f64_exp();
    m.abs().ln() + e as f64 * LN_2
}

fn leading_ratio(ns: &[f64], xs: &[f64], ys: &[f64], forced: Option<GrowthBasis>) -> (f64, GrowthBasis) {
    let full = |n: f64| vec![n * n.ln(), n, n.ln(), 1.0];
    let cy = lsq::fit(ns, ys, full);
    let factorial = match forced {
        Some(b) => b == GrowthBasis::Factorial,
        None => cy[0] > 0.25,
    };
    if factorial {
        let cx = lsq::fit(ns, xs, full);
        return (cx[0] / cy[0] - 1.0, GrowthBasis::Factorial);
    }
    let exp = |n: f64| vec![n, n.ln(), 1.0];
    let cx = lsq::fit(ns, xs, exp);
    let cy = lsq::fit(ns, ys, exp);
    (cx[0] / cy[0] - 1.0, GrowthBasis::Exponential)
}

/// Measured δ from e_n = p_n/q_n − L against the reduced denominators q_n/G_n over the last
/// three quarters of the table. `reference` must carry at least 64 bits beyond |e_N|.
pub fn empirical_delta(
    table: &ConvergentTable,
    series: &GcdSeries,
    reference: &Float,
    use_gcd2: bool,
) -> Result<EmpiricalDelta, DeltaError> {
    let depth = table.depth().min(series.depth());
    if depth < 40 {
        return Err(DeltaError::InvalidInput(format!("depth {depth} too small")));
    }
    let prec = reference.prec();
    let lo = (depth / 4).max(2);
    let step = ((depth - lo) / SAMPLES).max(1);
    let mut ns = Vec::new();
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut n = depth;
    loop {
        let (p, q) = (table.p(n as i64), table.q(n as i64));
        let mut e = Float::with_val(prec, p) / Float::with_val(prec, q);
        e -= reference;
        let ln_q = ln_abs(q);
        let ln_mag = (ln_abs(p) - ln_q).max(0.0);
        let lost = ((ln_mag - if e.is_zero() { f64::NEG_INFINITY } else { ln_float_abs(&e) }) / LN_2) as i64;
        if e.is_zero() || lost + 64 > prec as i64 {
            let need = if e.is_zero() { prec.saturating_mul(2) } else { (lost + 64) as u32 };
            return Err(DeltaError::InsufficientPrecision { have: prec, need });
        }
        let g = if use_gcd2 { series.gcd2(n) } else { series.gcd(n) };
        ns.push(n as f64);
        xs.push(-ln_float_abs(&e));
        ys.push(ln_q - ln_abs(g));
        if n < lo + step {
            break;
        }
        n -= step;
    }
    ns.reverse();
    xs.reverse();
    ys.reverse();
    let (delta, basis) = leading_ratio(&ns, &xs, &ys, None);
    let half = ns.len() / 2;
    let (late, _) = leading_ratio(&ns[half..], &xs[half..], &ys[half..], Some(basis));
    let last = ns.len() - 1;
    Ok(EmpiricalDelta {
        delta,
        drift: late - delta,
        pointwise: xs[last] / ys[last] - 1.0,
        basis,
        used_gcd2: use_gcd2,
        window: (lo, depth),
    })
}

/// Bits needed to resolve e_N at the given depth, from the size of the next error term.
fn error_bits(table: &ConvergentTable) -> u32 {
    let n = table.depth() as i64 - 1;
    let ln_t = ln_abs(table.bprod(n as usize + 1)) - ln_abs(table.q(n)) - ln_abs(table.q(n + 1));
    let mag = (ln_abs(table.p(n)) - ln_abs(table.q(n))).max(0.0);
    ((mag - ln_t) / LN_2).max(0.0) as u32
}

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct DeltaReport {
    pub name: String,
    pub pcf: Pcf,
    pub class: PcfClass,
    pub depth: usize,
    pub alpha: Option<f64>,
    #[serde(rename = "B")]
    pub big_b: String,
    pub lambda: Option<f64>,
    pub fr_verdict: Option<FrVerdict>,
    pub lambda_detail: Option<LambdaEstimate>,
    pub delta_formula: Option<DeltaValue>,
    /// why the formula value is absent or trivial
    pub note: String,
    pub delta_empirical: Option<EmpiricalDelta>,
    /// where the limit used for the empirical δ came from
    pub reference: Option<String>,
    pub liouville_flag: bool,
    pub used_gcd2: bool,
    pub gcd2_equivalent: Option<bool>,
}

#[derive(Debug, Clone)]
pub struct ReportOptions {
    pub thresholds: FrThresholds,
    /// tail fraction for the λ window
    pub window: f64,
    /// compute the empirical δ (against `reference` or a deeper evaluation of the PCF)
    pub empirical: bool,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions { thresholds: FrThresholds::default(), window: 1.0 / 3.0, empirical: true }
    }
}

/// Where the limit for the empirical δ comes from.
pub enum Reference<'a> {
    /// a named or computed constant, with a label for the report
    Value(&'a Float, &'a str),
    /// an expression over named constants ("6/zeta3"), evaluated at the needed precision
    /// and checked against the deepest convergent
    Expr(&'a str),
    /// evaluate the PCF itself at twice the depth
    SelfDeep,
}

/// Factorial power of the GCD from the n·ln n coefficient of ln GCD_n, snapped to an
/// integer when within 0.15.
pub fn factorial_power(series: &GcdSeries) -> f64 {
    let depth = series.depth();
    let lo = depth / 2;
    let ln = series.ln_values(false);
    let ns: Vec<f64> = (lo.max(2)..=depth).map(|n| n as f64).collect();
    let ys: Vec<f64> = (lo.max(2)..=depth).map(|n| ln[n]).collect();
    let c = lsq::fit(&ns, &ys, |n| vec![n * n.ln(), n, n.ln(), 1.0])[0];
    if (c - c.round()).abs() < 0.15 {
        c.round()
    } else {
        c
    }
}

/// Classification, convergents, GCD series, λ and both δ estimates for one PCF.
pub fn report(name: &str, pcf: &Pcf, depth: usize, reference: Option<Reference<'_>>, opts: &ReportOptions) -> Result<DeltaReport, DeltaError> {
    let class = classify(pcf);
    let table = convergents(pcf, depth)?;
    let series = gcd_series(&table)?;
    let gcd2_equivalent = (series.len() >= 100).then(|| gcd2_equivalence_check(&series));
    let used_gcd2 = gcd2_equivalent == Some(true);
    let est = if series.len() >= 100 {
        Some(lambda_estimate(&series, pcf.deg_a(), opts.window, &opts.thresholds)?)
    } else {
        None
    };
    let alpha_val = alpha(pcf, 128).ok().map(|a| a.to_f64().abs());
    let b_abs = pcf.lead_b().to_f64().abs();

    let mut note = String::new();
    let delta_formula = match class.kind {
        PcfKind::Balanced => match (alpha_val, &est) {
            (None, _) => {
                note = "no real α with distinct moduli".into();
                None
            }
            (_, _) if class.verdict != Convergence::Converges => {
                note = "B ≤ −A²/4 is outside the formula's range".into();
                None
            }
            (_, None) => {
                note = "table too short for λ".into();
                None
            }
            (Some(a), Some(e)) => match e.fr_verdict {
                FrVerdict::NoFR => {
                    note = "no factorial reduction: trivial δ".into();
                    Some(DeltaValue::Finite(-1.0))
                }
                v => {
                    if v == FrVerdict::Inconclusive {
                        note = "FR verdict inconclusive; formula evaluated with measured λ".into();
                    }
                    match delta_formula(a, b_abs, e.lambda) {
                        Ok(d) => Some(d),
                        Err(err) => {
                            note = err.to_string();
                            None
                        }
                    }
                }
            },
        },
        PcfKind::UnbalancedLow => {
            let r = factorial_power(&series);
            note = format!("factorial power of the GCD r = {r:.3}");
            Some(unbalanced_delta(pcf, Some(r))?)
        }
        PcfKind::UnbalancedHigh => {
            note = "deg b > 2 deg a: needs GCD ≐ q_n, no closed formula".into();
            None
        }
    };

    let mut delta_empirical = None;
    let mut reference_label = None;
    if opts.empirical && depth >= 40 {
        let need = error_bits(&table) + 96;
        match reference {
            Some(Reference::Value(v, label)) => {
                delta_empirical = Some(empirical_delta(&table, &series, v, used_gcd2)?);
                reference_label = Some(label.to_string());
            }
            Some(Reference::Expr(expr)) => {
                let v = crate::constants::eval_expr(expr, need.max(128))
                    .map_err(|e| DeltaError::InvalidInput(e.to_string()))?;
                let n = table.depth() as i64;
                let conv = Float::with_val(128, table.p(n)) / Float::with_val(128, table.q(n));
                let gap = Float::with_val(128, &v - &conv).abs().to_f64();
                let tol = 2f64.powi(-(need.min(1000) as i32 / 2).min(40));
                if gap <= tol.max(conv.to_f64().abs() * 1e-12) {
                    delta_empirical = Some(empirical_delta(&table, &series, &v, used_gcd2)?);
                    reference_label = Some(expr.to_string());
                } else if note.is_empty() {
                    note = format!("reference {expr} does not match the limit (gap {gap:.3e})");
                } else {
                    note.push_str(&format!("; reference {expr} does not match the limit (gap {gap:.3e})"));
                }
            }
            Some(Reference::SelfDeep) if class.verdict == Convergence::Converges => {
                match limit_estimate(pcf, 2 * depth, need) {
                    Ok(iv) => {
                        let w = iv.width();
                        let ok = w.is_zero() || w.get_exp().is_some_and(|e| -(e as i64) > need as i64 - 32);
                        if ok {
                            delta_empirical = Some(empirical_delta(&table, &series, &iv.mid(), used_gcd2)?);
                            reference_label = Some(format!("self at depth {}", 2 * depth));
                        } else if note.is_empty() {
                            note = "deeper evaluation too coarse for the empirical δ".into();
                        }
                    }
                    Err(e) => {
                        if note.is_empty() {
                            note = format!("no self reference: {e}");
                        }
                    }
                }
            }
            _ => {}
        }
    }

    Ok(DeltaReport {
        name: name.to_string(),
        pcf: pcf.clone(),
        class,
        depth,
        alpha: alpha_val,
        big_b: pcf.lead_b().to_string(),
        lambda: est.as_ref().map(|e| e.lambda),
        fr_verdict: est.as_ref().map(|e| e.fr_verdict),
        lambda_detail: est,
        liouville_flag: delta_formula == Some(DeltaValue::Unbounded),
        delta_formula,
        note,
        delta_empirical,
        reference: reference_label,
        used_gcd2,
        gcd2_equivalent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::eval_expr;

    fn sqrt(x: f64) -> f64 {
        x.sqrt()
    }

    #[test]
    fn apery_formula() {
        let d = delta_formula(17.0 + 12.0 * sqrt(2.0), 1.0, (-3f64).exp()).unwrap().finite().unwrap();
        assert!((d - 0.0805).abs() < 0.0005, "{d}");
        let k3 = delta_formula(3.0 + 2.0 * sqrt(2.0), 1.0, 1.0 / (2.0 * std::f64::consts::E)).unwrap().finite().unwrap();
        assert!((k3 - 0.0201).abs() < 0.0005, "{k3}");
        assert_eq!(delta_formula(5.0, 2.0, 5.0).unwrap(), DeltaValue::Unbounded);
        assert!(matches!(delta_formula(5.0, 2.0, 6.0), Err(DeltaError::Domain { .. })));
        assert!(matches!(delta_formula(5.0, 2.0, 0.0), Err(DeltaError::InvalidInput(_))));
    }

    #[test]
    fn zero_at_b_over_alpha() {
        let (a, b) = (33.97, 7.0);
        let d = delta_formula(a, b, b / a).unwrap().finite().unwrap();
        assert!(d.abs() < 1e-12);
    }

    #[test]
    fn unbalanced_cases() {
        assert_eq!(unbalanced_delta(&Pcf::from_coeffs(&[2, 4], &[1]), None).unwrap(), DeltaValue::Finite(1.0));
        assert_eq!(unbalanced_delta(&Pcf::from_coeffs(&[0, 0, 1], &[0, 1]), Some(0.0)).unwrap(), DeltaValue::Finite(0.5));
        assert_eq!(unbalanced_delta(&Pcf::from_coeffs(&[0, 0, 1], &[0, 1]), Some(2.0)).unwrap(), DeltaValue::Unbounded);
        assert!(matches!(unbalanced_delta(&Pcf::from_coeffs(&[1, 2], &[0, 0, 1]), None), Err(DeltaError::WrongKind(_))));
    }

    #[test]
    fn golden_inflation_empirical() {
        let pcf = Pcf::from_coeffs(&[1, 3], &[-2, -3, 9]);
        let table = convergents(&pcf, 600).unwrap();
        let series = gcd_series(&table).unwrap();
        let phi = eval_expr("phi", 2000).unwrap();
        let e = empirical_delta(&table, &series, &phi, false).unwrap();
        assert_eq!(e.basis, GrowthBasis::Exponential);
        assert!((e.delta - 1.0).abs() < 0.05, "{e:?}");
        let low = eval_expr("phi", 200).unwrap();
        assert!(matches!(empirical_delta(&table, &series, &low, false), Err(DeltaError::InsufficientPrecision { .. })));
    }

    #[test]
    fn no_fr_report_is_trivial() {
        let pcf = Pcf::from_coeffs(&[0, 1], &[1, 0, 1]);
        let r = report("n,n^2+1", &pcf, 800, Some(Reference::SelfDeep), &ReportOptions::default()).unwrap();
        assert_eq!(r.fr_verdict, Some(FrVerdict::NoFR));
        assert_eq!(r.delta_formula, Some(DeltaValue::Finite(-1.0)));
        let emp = r.delta_empirical.unwrap();
        assert_eq!(emp.basis, GrowthBasis::Factorial);
        assert!((emp.delta + 1.0).abs() < 0.05, "{emp:?}");
    }

    #[test]
    fn unbalanced_low_report() {
        let pcf = Pcf::from_coeffs(&[2, 4], &[1]);
        let e = eval_expr("(e+1)/(e-1)", 16000).unwrap();
        let r = report("e-family", &pcf, 300, Some(Reference::Value(&e, "(e+1)/(e-1)")), &ReportOptions::default()).unwrap();
        assert_eq!(r.delta_formula, Some(DeltaValue::Finite(1.0)));
        let emp = r.delta_empirical.unwrap();
        assert!((emp.delta - 1.0).abs() < 0.1, "{emp:?}");
    }
}
