use super::{alpha, classify, ConvergentTable, Pcf, PcfKind};
use crate::numth::{ln_abs, ln_factorial_table};

/// Normalized residual g_n = (ln|q_n| − ln(reference_n))/n against the expected growth law.
#[derive(Debug, Clone, serde::Serialize)]
pub struct GrowthCheck {
    pub kind: PcfKind,
    /// Human-readable reference, e.g. "alpha^n * n!^3".
    pub reference: String,
    pub residuals: Vec<(usize, f64)>,
    pub tail_mean: f64,
    pub pass: bool,
}

const TOLERANCE: f64 = 0.05;

/// Checks q_n against α^n·n!^{d_a} (balanced), |B|^{n/2}·n!^{d_b/2} (deg b > 2 deg a) or
/// |A|^n·n!^{d_a} (deg b < 2 deg a).
pub fn q_growth_check(pcf: &Pcf, table: &ConvergentTable) -> GrowthCheck {
    let kind = classify(pcf).kind;
    let da = pcf.deg_a() as f64;
    let db = pcf.deg_b() as f64;
    let (rate, fact_power, reference) = match kind {
        PcfKind::Balanced => match alpha(pcf, 64) {
            Ok(al) => {
                let al = al.to_f64().abs();
                (al.ln(), da, format!("{al:.6}^n * n!^{da}"))
            }
            Err(_) => {
                return GrowthCheck {
                    kind,
                    reference: "alpha undefined".into(),
                    residuals: Vec::new(),
                    tail_mean: f64::NAN,
                    pass: false,
                }
            }
        },
        PcfKind::UnbalancedHigh => {
            let b = ln_abs(&pcf.lead_b());
            (b / 2.0, db / 2.0, format!("|B|^(n/2) * n!^({db}/2)"))
        }
        PcfKind::UnbalancedLow => {
            let a = ln_abs(&pcf.lead_a());
            (a, da, format!("|A|^n * n!^{da}"))
        }
    };
    let depth = table.depth();
    let lnf = ln_factorial_table(depth);
    let residuals: Vec<(usize, f64)> = (1..=depth)
        .filter(|&n| *table.q(n as i64) != 0)
        .map(|n| {
            let g = (ln_abs(table.q(n as i64)) - fact_power * lnf[n] - n as f64 * rate) / n as f64;
            (n, g)
        })
        .collect();
    let tail: Vec<f64> = residuals.iter().filter(|(n, _)| *n >= 3 * depth / 4).map(|r| r.1).collect();
    let tail_mean = if tail.is_empty() { f64::NAN } else { tail.iter().sum::<f64>() / tail.len() as f64 };
    GrowthCheck { kind, reference, residuals, tail_mean, pass: tail_mean.abs() < TOLERANCE }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pcf::convergents;

    #[test]
    fn apery_growth() {
        let pcf = Pcf::from_coeffs(&[5, 27, 51, 34], &[0, 0, 0, 0, 0, 0, -1]);
        let t = convergents(&pcf, 500).unwrap();
        let g = q_growth_check(&pcf, &t);
        assert!(g.pass, "tail mean {}", g.tail_mean);
        assert_eq!(g.kind, PcfKind::Balanced);
    }

    #[test]
    fn fibonacci_and_unbalanced() {
        let pcf = Pcf::from_coeffs(&[1], &[1]);
        let g = q_growth_check(&pcf, &convergents(&pcf, 300).unwrap());
        assert!(g.pass && g.tail_mean.abs() < 0.01);
        let pcf = Pcf::from_coeffs(&[2, 4], &[1]);
        let g = q_growth_check(&pcf, &convergents(&pcf, 300).unwrap());
        assert_eq!(g.kind, PcfKind::UnbalancedLow);
        assert!(g.pass, "tail mean {}", g.tail_mean);
        let pcf = Pcf::from_coeffs(&[2], &[1, -4, 4]);
        let g = q_growth_check(&pcf, &convergents(&pcf, 200).unwrap());
        assert_eq!(g.kind, PcfKind::UnbalancedHigh);
        assert!(g.pass, "tail mean {}", g.tail_mean);
    }
}
