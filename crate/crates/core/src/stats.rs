//! Small statistics helpers: running means, standard errors, least squares.

use serde::Serialize;

/// Sample mean and standard error accumulated from sums.
#[derive(Debug, Clone, Copy, Default, Serialize)]
pub struct MeanStderr {
    pub mean: f64,
    pub stderr: f64,
    pub n: u64,
}

impl MeanStderr {
    /// From a sum and a sum of squares over `n` samples.
    pub fn from_sums(sum: f64, sumsq: f64, n: u64) -> Self {
        let nf = n as f64;
        let mean = sum / nf;
        let var = (sumsq / nf - mean * mean).max(0.0);
        let stderr = if n > 1 { (var / (nf - 1.0)).sqrt() } else { 0.0 };
        MeanStderr { mean, stderr, n }
    }
}

/// Least-squares line `y = slope*x + intercept`; residual is the RMS error.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub residual: f64,
}

pub fn least_squares(points: &[(f64, f64)]) -> LineFit {
    let n = points.len() as f64;
    assert!(points.len() >= 2, "need at least two points to fit a line");
    let sx: f64 = points.iter().map(|p| p.0).sum();
    let sy: f64 = points.iter().map(|p| p.1).sum();
    let sxx: f64 = points.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = points.iter().map(|p| p.0 * p.1).sum();
    let denom = n * sxx - sx * sx;
    let slope = (n * sxy - sx * sy) / denom;
    let intercept = (sy - slope * sx) / n;
    let ss: f64 = points
        .iter()
        .map(|&(x, y)| {
            let e = y - (slope * x + intercept);
            e * e
        })
        .sum();
    LineFit {
        slope,
        intercept,
        residual: (ss / n).sqrt(),
    }
}

/// Slope of log(y) against log(x), skipping nonpositive values.
pub fn log_log_fit(points: &[(f64, f64)]) -> LineFit {
    let logged: Vec<(f64, f64)> = points
        .iter()
        .filter(|&&(x, y)| x > 0.0 && y > 0.0)
        .map(|&(x, y)| (x.ln(), y.ln()))
        .collect();
    least_squares(&logged)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fits_exact_line() {
        let pts: Vec<(f64, f64)> = (1..10).map(|i| (i as f64, 3.0 * i as f64 - 2.0)).collect();
        let fit = least_squares(&pts);
        assert!((fit.slope - 3.0).abs() < 1e-12);
        assert!((fit.intercept + 2.0).abs() < 1e-12);
        assert!(fit.residual < 1e-12);
    }

    #[test]
    fn loglog_recovers_power() {
        let pts: Vec<(f64, f64)> = (1..20).map(|i| (i as f64, (i as f64).powf(0.5))).collect();
        let fit = log_log_fit(&pts);
        assert!((fit.slope - 0.5).abs() < 1e-12);
    }

    #[test]
    fn stderr_of_constant_is_zero() {
        let m = MeanStderr::from_sums(50.0, 250.0, 10);
        assert_eq!(m.mean, 5.0);
        assert!(m.stderr.abs() < 1e-9);
    }
}
