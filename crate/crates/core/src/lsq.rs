//! Small dense least-squares fits.

use nalgebra::{DMatrix, DVector};

/// Solves min ‖X·β − y‖₂ where each row of X is produced by `basis(x)`.
/// Columns are rescaled to unit max-norm before the SVD solve.
pub fn fit<F>(xs: &[f64], ys: &[f64], basis: F) -> Vec<f64>
where
    F: Fn(f64) -> Vec<f64>,
{
    assert_eq!(xs.len(), ys.len());
    assert!(!xs.is_empty(), "no samples to fit");
    let rows: Vec<Vec<f64>> = xs.iter().map(|&x| basis(x)).collect();
    let k = rows[0].len();
    let mut scale = vec![0.0f64; k];
    for r in &rows {
        for (j, v) in r.iter().enumerate() {
            scale[j] = scale[j].max(v.abs());
        }
    }
    for s in scale.iter_mut() {
        if *s == 0.0 {
            *s = 1.0;
        }
    }
    let m = DMatrix::from_fn(rows.len(), k, |i, j| rows[i][j] / scale[j]);
    let y = DVector::from_column_slice(ys);
    let svd = m.svd(true, true);
    let beta = svd.solve(&y, 1e-12).expect("SVD solve with both factors");
    beta.iter().zip(&scale).map(|(b, s)| b / s).collect()
}

/// Ordinary slope of y against x.
pub fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
    }
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_exact_model() {
        let xs: Vec<f64> = (100..400).map(|n| n as f64).collect();
        let ys: Vec<f64> = xs.iter().map(|&n| 0.3 * n - 1.25 * n * n.ln() + 7.0).collect();
        let b = fit(&xs, &ys, |n| vec![n, n * n.ln(), 1.0]);
        assert!((b[0] - 0.3).abs() < 1e-8 && (b[1] + 1.25).abs() < 1e-9 && (b[2] - 7.0).abs() < 1e-5);
        assert!((slope(&xs, &xs.iter().map(|x| 2.0 * x + 1.0).collect::<Vec<_>>()) - 2.0).abs() < 1e-12);
    }
}
