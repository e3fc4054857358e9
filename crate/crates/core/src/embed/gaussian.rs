//! Gaussian rotational-invariance check behind the lift from l_2 to L_p:
//! sum a_j g_j has the law of ||a||_2 g_1, so (E|sum a_j g_j|^p)^{1/p} /
//! ||a||_2 must not depend on a. Real Gaussians stand in for the complex
//! ones; the proportionality phenomenon is identical.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rng::SplitMix64;

#[derive(Debug, Clone, Copy, Serialize)]
pub struct GaussianLiftReport {
    pub ratio: f64,
    pub stderr: f64,
    pub trials: u64,
}

pub fn gaussian_lift_check(a: &[f64], p: f64, trials: u64, seed: u64) -> Result<GaussianLiftReport> {
    if p < 1.0 {
        return Err(Error::OutOfRange(format!("p must be >= 1, got {p}")));
    }
    let norm: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm == 0.0 || a.is_empty() {
        return Err(Error::ZeroVector);
    }
    if trials == 0 {
        return Err(Error::InvalidParams("trials must be >= 1".into()));
    }
    let mut sum = 0.0;
    let mut sumsq = 0.0;
    for trial in 0..trials {
        let mut rng = SplitMix64::for_trial(seed, trial);
        let x: f64 = a.iter().map(|&c| c * rng.normal()).sum();
        let v = x.abs().powf(p);
        sum += v;
        sumsq += v * v;
    }
    let m = crate::stats::MeanStderr::from_sums(sum, sumsq, trials);
    let ratio = m.mean.powf(1.0 / p) / norm;
    // delta method: d(m^{1/p})/dm = m^{1/p - 1} / p
    let stderr = m.mean.powf(1.0 / p - 1.0) / p * m.stderr / norm;
    Ok(GaussianLiftReport {
        ratio,
        stderr,
        trials,
    })
}

/// (E|g|^p)^{1/p} for a standard real Gaussian:
/// E|g|^p = 2^{p/2} Gamma((p+1)/2) / sqrt(pi).
pub fn gaussian_abs_moment(p: f64) -> f64 {
    (2f64.powf(p / 2.0) * gamma((p + 1.0) / 2.0) / std::f64::consts::PI.sqrt()).powf(1.0 / p)
}

/// Lanczos approximation, good to ~1e-13 on the positive half line.
fn gamma(x: f64) -> f64 {
    const G: f64 = 7.0;
    #[allow(clippy::excessive_precision)]
    const C: [f64; 9] = [
        0.999_999_999_999_809_93,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_1,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        std::f64::consts::PI / ((std::f64::consts::PI * x).sin() * gamma(1.0 - x))
    } else {
        let x = x - 1.0;
        let mut a = C[0];
        let t = x + G + 0.5;
        for (i, &c) in C.iter().enumerate().skip(1) {
            a += c / (x + i as f64);
        }
        (2.0 * std::f64::consts::PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * a
    }
}
