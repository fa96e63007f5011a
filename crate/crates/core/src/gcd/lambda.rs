use super::{GcdError, GcdSeries};
use crate::lsq;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum FrVerdict {
    FR,
    NoFR,
    Inconclusive,
}

/// f(n) ≈ μ·n − ρ·n·ln n + c, fitted to the upper envelope of f(n)/n.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SlopeModel {
    pub mu: f64,
    pub rho: f64,
    pub c: f64,
}

/// Decision thresholds for the FR verdict.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct FrThresholds {
    /// FR requires ρ below this
    pub rho_fr: f64,
    /// NoFR when ρ exceeds this
    pub rho_no_fr: f64,
    /// max f(n)/n on the last third and on the middle third must agree this closely for FR,
    /// per unit of deg a
    pub stable_tol: f64,
}

impl Default for FrThresholds {
    fn default() -> Self {
        FrThresholds { rho_fr: 0.1, rho_no_fr: 0.25, stable_tol: 0.05 }
    }
}

impl FrThresholds {
    /// Loose first-stage thresholds for shallow (≈200) tables.
    pub fn shallow() -> Self {
        FrThresholds { rho_fr: 0.3, rho_no_fr: 0.3, stable_tol: 0.25 }
    }
}

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct LambdaEstimate {
    pub lambda: f64,
    /// max of f(n)/n over the window, i.e. ln λ
    pub limsup_proxy: f64,
    pub window: (usize, usize),
    pub slope_model: SlopeModel,
    /// |max f/n over the last third − max over the middle third|
    pub stability_gap: f64,
    pub fr_verdict: FrVerdict,
}

const ENVELOPE_BLOCKS: usize = 40;

fn window_max(h: &[f64], lo: usize, hi: usize) -> f64 {
    h[lo..=hi].iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

/// λ = exp(max f(n)/n over the final `window` fraction), with f(n) = ln GCD_n − d_a·ln n!.
pub fn lambda_estimate(series: &GcdSeries, d_a: usize, window: f64, thresholds: &FrThresholds) -> Result<LambdaEstimate, GcdError> {
    let len = series.len();
    if len < 100 {
        return Err(GcdError::TooShort { len, need: 100 });
    }
    let depth = series.depth();
    let f = series.reduced_log(d_a);
    let h: Vec<f64> = (0..=depth).map(|n| if n == 0 { 0.0 } else { f[n] / n as f64 }).collect();
    let window = window.clamp(0.05, 0.9);
    let lo = ((1.0 - window) * depth as f64).round() as usize;
    let limsup_proxy = window_max(&h, lo.max(1), depth);

    // upper envelope of h over [0.1N, N] by block maxima
    let start = (depth / 10).max(5);
    let block = ((depth - start) / ENVELOPE_BLOCKS).max(1);
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut b0 = start;
    while b0 <= depth {
        let b1 = (b0 + block - 1).min(depth);
        let (mut arg, mut best) = (b0, f64::NEG_INFINITY);
        for (n, &v) in h.iter().enumerate().take(b1 + 1).skip(b0) {
            if v > best {
                best = v;
                arg = n;
            }
        }
        xs.push(arg as f64);
        ys.push(best);
        b0 = b1 + 1;
    }
    let beta = lsq::fit(&xs, &ys, |n| vec![1.0, -n.ln(), 1.0 / n]);
    let slope_model = SlopeModel { mu: beta[0], rho: beta[1], c: beta[2] };

    let third = depth / 3;
    let last = window_max(&h, 2 * third, depth);
    let middle = window_max(&h, third.max(1), 2 * third);
    let stability_gap = (last - middle).abs();

    let rho = slope_model.rho;
    let fr_verdict = if rho < thresholds.rho_fr && stability_gap < thresholds.stable_tol * d_a.max(1) as f64 {
        FrVerdict::FR
    } else if rho > thresholds.rho_no_fr {
        FrVerdict::NoFR
    } else {
        FrVerdict::Inconclusive
    };
    Ok(LambdaEstimate {
        lambda: limsup_proxy.exp(),
        limsup_proxy,
        window: (lo, depth),
        slope_model,
        stability_gap,
        fr_verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gcd::gcd_series;
    use crate::pcf::{convergents, Pcf};

    fn est(a: &[i64], b: &[i64], depth: usize) -> LambdaEstimate {
        let pcf = Pcf::from_coeffs(a, b);
        let s = gcd_series(&convergents(&pcf, depth).unwrap()).unwrap();
        lambda_estimate(&s, pcf.deg_a(), 1.0 / 3.0, &FrThresholds::default()).unwrap()
    }

    #[test]
    fn golden_inflation_has_lambda_three() {
        let e = est(&[1, 3], &[-2, -3, 9], 1000);
        assert_eq!(e.fr_verdict, FrVerdict::FR);
        assert!((e.lambda - 3.0).abs() < 0.05, "{e:?}");
    }

    #[test]
    fn no_reduction_detected() {
        let e = est(&[0, 1], &[1, 0, 1], 1000);
        assert_eq!(e.fr_verdict, FrVerdict::NoFR, "{e:?}");
    }

    #[test]
    fn too_short() {
        let pcf = Pcf::from_coeffs(&[1], &[1]);
        let s = gcd_series(&convergents(&pcf, 50).unwrap()).unwrap();
        assert!(matches!(lambda_estimate(&s, 0, 0.33, &FrThresholds::default()), Err(GcdError::TooShort { .. })));
    }
}
