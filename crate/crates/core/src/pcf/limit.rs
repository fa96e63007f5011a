use super::{classify, convergents, Convergence, Pcf, PcfError};
use crate::numth::ln_abs;
use rug::float::Round;
use rug::ops::{AddAssignRound, SubAssignRound};
use rug::{Float, Integer, Rational};

/// Closed interval with directed-rounded endpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct Interval {
    pub lo: Float,
    pub hi: Float,
}

impl Interval {
    pub fn width(&self) -> Float {
        Float::with_val(self.hi.prec(), &self.hi - &self.lo)
    }

    pub fn mid(&self) -> Float {
        let prec = self.lo.prec().max(self.hi.prec());
        Float::with_val(prec, &self.lo + &self.hi) / 2u32
    }

    pub fn contains(&self, x: &Float) -> bool {
        self.lo <= *x && *x <= self.hi
    }

    pub fn contains_rational(&self, x: &Rational) -> bool {
        self.lo <= *x && *x <= self.hi
    }

    pub fn overlaps(&self, other: &Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    /// Whether `other` lies inside self after widening self by one ulp on each side.
    pub fn contains_interval_ulp(&self, other: &Interval) -> bool {
        let mut lo = self.lo.clone();
        lo.next_down();
        let mut hi = self.hi.clone();
        hi.next_up();
        lo <= other.lo && other.hi <= hi
    }

    /// Decimal digits after the point that both endpoints agree on (bounded by 10^6).
    pub fn agreeing_digits(&self) -> usize {
        let w = self.width();
        if w == 0 {
            return usize::MAX;
        }
        let l10 = Float::with_val(64, w.log10_ref()).to_f64();
        if l10 >= 0.0 {
            0
        } else {
            (-l10).floor() as usize
        }
    }

    pub fn mid_string(&self, digits: usize) -> String {
        self.mid().to_string_radix(10, Some(digits))
    }
}

/// Encloses the limit using the depth-N convergent and the alternating tail of error terms
/// t_m = |∏_{i≤m+1} b(i)| / |q_m q_{m+1}|, bounded geometrically from their observed ratio.
pub fn limit_estimate(pcf: &Pcf, depth: usize, precision_bits: u32) -> Result<Interval, PcfError> {
    let class = classify(pcf);
    if class.verdict != Convergence::Converges {
        return Err(PcfError::NotConvergent(class.verdict));
    }
    let depth = depth.max(10);
    let table = convergents(pcf, depth + 1)?;
    let n = depth as i64;
    let value = Rational::from((table.p(n).clone(), table.q(n).clone()));
    if let Some(t) = table.truncated_at() {
        if t <= depth + 1 {
            // terminating fraction: the value is exact from depth t−1 onward
            let (lo, _) = Float::with_val_round(precision_bits, &value, Round::Down);
            let (hi, _) = Float::with_val_round(precision_bits, &value, Round::Up);
            return Ok(Interval { lo, hi });
        }
    }
    let ln_term = |m: i64| -> Option<f64> {
        let (qm, qm1) = (table.q(m), table.q(m + 1));
        if *qm == 0 || *qm1 == 0 {
            return None;
        }
        Some(ln_abs(table.bprod((m + 1) as usize)) - ln_abs(qm) - ln_abs(qm1))
    };
    let window = 8.min(depth as i64 - 2);
    let mut terms = Vec::with_capacity(window as usize + 1);
    for m in (n - window)..=n {
        terms.push(ln_term(m).ok_or(PcfError::TailEstimateUnreliable(f64::INFINITY))?);
    }
    enclose(table.p(n), table.q(n), &terms, precision_bits)
}

/// Interval around p/q from the logs of the last few error terms t_m (oldest first, the
/// last one belonging to the depth of p/q), assuming the tail decays at least as fast as
/// the worst observed ratio.
pub fn enclose(p: &Integer, q: &Integer, ln_terms: &[f64], precision_bits: u32) -> Result<Interval, PcfError> {
    let value = Rational::from((p.clone(), q.clone()));
    let mut worst_ratio = f64::NEG_INFINITY;
    for w in ln_terms.windows(2) {
        worst_ratio = worst_ratio.max((w[1] - w[0]).exp());
    }
    if worst_ratio >= 1.0 || !worst_ratio.is_finite() {
        return Err(PcfError::TailEstimateUnreliable(worst_ratio));
    }
    let ln_tn = *ln_terms.last().expect("nonempty");
    // safety factor 2 on the geometric tail sum
    let ln_eps = ln_tn + std::f64::consts::LN_2 - (1.0 - worst_ratio).ln();
    let (mut eps, _) = Float::with_val_round(64, ln_eps + 1e-9 * ln_eps.abs().max(1.0), Round::Up);
    eps.exp_round(Round::Up);

    let eps_log2 = ln_eps / std::f64::consts::LN_2;
    let mag_log2 = ln_abs(p) / std::f64::consts::LN_2 - ln_abs(q) / std::f64::consts::LN_2;
    let mut prec = precision_bits.max(64);
    // rounding contribution ≈ 2^(mag − prec) must fall below 2^−10 of eps
    while (mag_log2 - prec as f64) > eps_log2 - 10.0 {
        prec *= 2;
    }
    let (mut lo, _) = Float::with_val_round(prec, &value, Round::Down);
    let (mut hi, _) = Float::with_val_round(prec, &value, Round::Up);
    lo.sub_assign_round(&eps, Round::Down);
    hi.add_assign_round(&eps, Round::Up);
    Ok(Interval { lo, hi })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_ratio() {
        let iv = limit_estimate(&Pcf::from_coeffs(&[1], &[1]), 40, 128).unwrap();
        let phi = (Float::with_val(200, 5u32).sqrt() + 1u32) / 2u32;
        assert!(iv.contains(&phi));
        assert!(iv.width() < 1e-15);
    }

    #[test]
    fn rejects_unknown_convergence() {
        let e = limit_estimate(&Pcf::from_coeffs(&[0, 2], &[0, 0, -1]), 50, 64).unwrap_err();
        assert_eq!(e, PcfError::NotConvergent(Convergence::Unknown));
    }

    #[test]
    fn terminating_fraction_is_exact() {
        // b(2) = 0: value is p_1/q_1
        let pcf = Pcf::from_coeffs(&[1, 1], &[-2, 1]);
        let iv = limit_estimate(&pcf, 20, 64).unwrap();
        let t = convergents(&pcf, 1).unwrap();
        assert!(iv.contains_rational(&Rational::from((t.p(1).clone(), t.q(1).clone()))));
    }

    #[test]
    fn deeper_interval_nests() {
        let pcf = Pcf::from_coeffs(&[1, 2], &[0, 0, 1]);
        let a = limit_estimate(&pcf, 60, 128).unwrap();
        let b = limit_estimate(&pcf, 120, 128).unwrap();
        assert!(a.contains_interval_ulp(&b));
        assert!(b.width() < a.width());
    }
}
