//! Numerical verification deck for the smoothness, martingale, cocycle,
//! Enflo-type, and Markov-type inequalities. Exact-arithmetic checks carry
//! zero or 1e-9 tolerances; Monte Carlo checks carry 3-stderr bands.

use serde::Serialize;

use crate::embed::{cube_to_zwrz, reduce_concat, tree_embedding, tree_translate, zwrz};
use crate::error::{Error, Result};
use crate::metric::wreath_distance_exact;
use crate::rng::{mix64, SplitMix64};
use crate::sparse::SparseVec;
use crate::stats::MeanStderr;

/// Exponent pair (p, q): check vectors live in l_q, the inequality is at
/// power p. Supported: q = p in (1, 2] with constant 1, and p = 2, q >= 2
/// with constant sqrt(q - 1).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SmoothnessParams {
    pub p: f64,
    pub q: f64,
}

impl SmoothnessParams {
    pub fn new(p: f64, q: f64) -> Result<Self> {
        let params = SmoothnessParams { p, q };
        params.smoothness_constant()?;
        Ok(params)
    }

    /// S_p of the ambient space.
    pub fn smoothness_constant(&self) -> Result<f64> {
        if (self.q - self.p).abs() < 1e-12 && self.p > 1.0 && self.p <= 2.0 {
            Ok(1.0)
        } else if (self.p - 2.0).abs() < 1e-12 && self.q >= 2.0 {
            Ok((self.q - 1.0).sqrt())
        } else {
            Err(Error::InvalidParams(format!(
                "supported pairs: q = p in (1,2] or p = 2 <= q; got p={}, q={}",
                self.p, self.q
            )))
        }
    }

    /// C_p = 2^{2p} S_p^p / (2^{p-1} - 1), the cocycle growth constant.
    pub fn growth_constant(&self) -> Result<f64> {
        let s = self.smoothness_constant()?;
        Ok(2f64.powf(2.0 * self.p) * s.powf(self.p) / (2f64.powf(self.p - 1.0) - 1.0))
    }
}

fn norm_q(x: &[f64], q: f64) -> f64 {
    x.iter().map(|v| v.abs().powf(q)).sum::<f64>().powf(1.0 / q)
}

// ---------------------------------------------------------------------------
// two-point smoothness
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct ViolationReport {
    pub max_violation: f64,
    pub trials: u64,
}

/// max over random pairs of (||x+y||^p + ||x-y||^p - 2||x||^p - 2 S^p ||y||^p),
/// scaled by the right-hand side. Nonpositive up to roundoff when S is the
/// smoothness constant.
pub fn two_point_smoothness(
    params: &SmoothnessParams,
    dim: usize,
    trials: u64,
    seed: u64,
) -> Result<ViolationReport> {
    if trials == 0 || dim == 0 {
        return Err(Error::InvalidParams("need trials >= 1 and dim >= 1".into()));
    }
    let s = params.smoothness_constant()?;
    let (p, q) = (params.p, params.q);
    let mut max_violation = f64::NEG_INFINITY;
    for trial in 0..trials {
        let mut rng = SplitMix64::for_trial(seed, trial);
        // random scales spread over several orders; y = 0 hit explicitly
        let scale_x = (3.0 * (rng.uniform_f64() * 2.0 - 1.0)).exp();
        let scale_y = if trial % 17 == 0 {
            0.0
        } else {
            (3.0 * (rng.uniform_f64() * 2.0 - 1.0)).exp()
        };
        let x: Vec<f64> = (0..dim).map(|_| scale_x * rng.normal()).collect();
        let y: Vec<f64> = (0..dim).map(|_| scale_y * rng.normal()).collect();
        let xpy: Vec<f64> = x.iter().zip(&y).map(|(a, b)| a + b).collect();
        let xmy: Vec<f64> = x.iter().zip(&y).map(|(a, b)| a - b).collect();
        let lhs = norm_q(&xpy, q).powf(p) + norm_q(&xmy, q).powf(p);
        let rhs = 2.0 * norm_q(&x, q).powf(p) + 2.0 * s.powf(p) * norm_q(&y, q).powf(p);
        let violation = (lhs - rhs) / rhs.max(1.0);
        max_violation = max_violation.max(violation);
    }
    Ok(ViolationReport {
        max_violation,
        trials,
    })
}

// ---------------------------------------------------------------------------
// Pisier martingale inequality
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct PisierReport {
    /// per-family LHS/RHS ratios
    pub ratios: Vec<MeanStderr>,
    pub max_ratio: f64,
    pub max_ratio_stderr: f64,
    pub n: usize,
    pub families: usize,
}

/// Dyadic martingales M_k = sum of xi_j v_j(history) with fair signs xi and
/// predictable directions v_j drawn per family. Checks
/// E||M_n - M_0||^p <= S^p/(2^{p-1}-1) sum_k E||M_{k+1}-M_k||^p
/// by shared-sample Monte Carlo, one ratio per family.
pub fn pisier_martingale_check(
    params: &SmoothnessParams,
    n: usize,
    dim: usize,
    trials: u64,
    families: usize,
    seed: u64,
) -> Result<PisierReport> {
    if n == 0 || dim == 0 || trials == 0 || families == 0 {
        return Err(Error::InvalidParams(
            "need n, dim, trials, families >= 1".into(),
        ));
    }
    let s = params.smoothness_constant()?;
    let (p, q) = (params.p, params.q);
    let constant = s.powf(p) / (2f64.powf(p - 1.0) - 1.0);
    let mut ratios = Vec::with_capacity(families);
    let mut max_ratio = f64::NEG_INFINITY;
    let mut max_se = 0.0;
    for family in 0..families {
        let fam_seed = mix64(seed, 0x300 + family as u64);
        // predictable direction: a deterministic function of the history
        // bits and the step index
        let direction = |k: usize, history: u64| -> Vec<f64> {
            let mut h = SplitMix64::new(mix64(fam_seed, (k as u64) << 32 | history));
            let mag = (h.uniform_f64() * 2.0 - 1.0).exp();
            (0..dim).map(|_| mag * h.normal()).collect()
        };
        let mut lhs_sum = 0.0;
        let mut lhs_sumsq = 0.0;
        let mut rhs_sum = 0.0;
        let mut rhs_sumsq = 0.0;
        for trial in 0..trials {
            let mut rng = SplitMix64::for_trial(fam_seed, trial);
            let mut m = vec![0.0f64; dim];
            let mut history = 0u64;
            let mut increments = 0.0;
            for k in 0..n {
                let v = direction(k, history);
                let sign = if rng.bernoulli() { 1.0 } else { -1.0 };
                if sign > 0.0 {
                    history |= 1 << (k % 64);
                }
                for (mi, vi) in m.iter_mut().zip(&v) {
                    *mi += sign * vi;
                }
                increments += norm_q(&v, q).powf(p);
            }
            let lhs = norm_q(&m, q).powf(p);
            lhs_sum += lhs;
            lhs_sumsq += lhs * lhs;
            let rhs = constant * increments;
            rhs_sum += rhs;
            rhs_sumsq += rhs * rhs;
        }
        let lhs = MeanStderr::from_sums(lhs_sum, lhs_sumsq, trials);
        let rhs = MeanStderr::from_sums(rhs_sum, rhs_sumsq, trials);
        let ratio = lhs.mean / rhs.mean;
        // first-order error propagation for the quotient
        let se = ratio
            * ((lhs.stderr / lhs.mean).powi(2) + (rhs.stderr / rhs.mean).powi(2)).sqrt();
        ratios.push(MeanStderr {
            mean: ratio,
            stderr: se,
            n: trials,
        });
        if ratio > max_ratio {
            max_ratio = ratio;
            max_se = se;
        }
    }
    Ok(PisierReport {
        ratios,
        max_ratio,
        max_ratio_stderr: max_se,
        n,
        families,
    })
}

// ---------------------------------------------------------------------------
// cocycle checks on the free-group tree embedding
// ---------------------------------------------------------------------------

const F2_GENS: [i8; 4] = [1, -1, 2, -2];

fn f2_letter(rng: &mut SplitMix64) -> i8 {
    F2_GENS[rng.uniform(4)]
}

#[derive(Debug, Clone, Serialize)]
pub struct CocycleIdentityReport {
    pub max_discrepancy: f64,
    pub trials: u64,
    pub t: usize,
}

/// 2 f(W_t) = sum_j pi(W_{j-1}) f(sigma_j) - sum_j pi(W_j) f(sigma_j^{-1}),
/// evaluated exactly in integer coordinates.
pub fn cocycle_identity_check(t: usize, trials: u64, seed: u64) -> Result<CocycleIdentityReport> {
    if trials == 0 {
        return Err(Error::InvalidParams("trials must be >= 1".into()));
    }
    let mut max_discrepancy = 0.0f64;
    for trial in 0..trials {
        let mut rng = SplitMix64::for_trial(seed, trial);
        let sigmas: Vec<i8> = (0..t).map(|_| f2_letter(&mut rng)).collect();
        let mut prefix: Vec<Vec<i8>> = Vec::with_capacity(t + 1);
        prefix.push(Vec::new());
        for &s in &sigmas {
            prefix.push(reduce_concat(prefix.last().unwrap(), &[s]));
        }
        let lhs = tree_embedding(&prefix[t]).scale(2.0);
        let mut rhs = SparseVec::new();
        for j in 1..=t {
            let f_sigma = tree_embedding(&[sigmas[j - 1]]);
            rhs = rhs.add(&tree_translate(&prefix[j - 1], &f_sigma)?);
            let f_sigma_inv = tree_embedding(&[-sigmas[j - 1]]);
            rhs = rhs.sub(&tree_translate(&prefix[j], &f_sigma_inv)?);
        }
        let diff = lhs.sub(&rhs);
        let worst = diff.iter().map(|(_, v)| v.abs()).fold(0.0, f64::max);
        max_discrepancy = max_discrepancy.max(worst);
    }
    Ok(CocycleIdentityReport {
        max_discrepancy,
        trials,
        t,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct GrowthPoint {
    pub t: u64,
    /// E||f(W_t)||^p / (C_p t E||f(W_1)||^p)
    pub ratio: f64,
    pub ratio_stderr: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct GrowthReport {
    pub points: Vec<GrowthPoint>,
    pub all_below_one: bool,
}

/// Growth of the tree cocycle along the free-group walk. The walk maintains
/// f(W_t) incrementally (one signed edge per step), so the tie
/// ||f(W_t)||_p^p = d(W_t, e) is checked exactly at every checkpoint of
/// every trial; E||f(W_1)||^p = 1 exactly.
pub fn cocycle_growth_check(
    params: &SmoothnessParams,
    t_grid: &[u64],
    trials: u64,
    seed: u64,
) -> Result<GrowthReport> {
    if trials == 0 || t_grid.is_empty() {
        return Err(Error::InvalidParams("need trials and a grid".into()));
    }
    let c_p = params.growth_constant()?;
    let p = params.p;
    let mut sums = vec![(0.0f64, 0.0f64); t_grid.len()];
    for trial in 0..trials {
        let mut rng = SplitMix64::for_trial(seed, trial);
        let mut word: Vec<i8> = Vec::new();
        let mut f = SparseVec::new();
        let mut t = 0u64;
        for (i, &cp) in t_grid.iter().enumerate() {
            while t < cp {
                let sigma = f2_letter(&mut rng);
                // f(W_{t+1}) = f(W_t) + pi(W_t) f(sigma): the translated
                // single-edge vector is +e_{W_t sigma} when the word extends
                // and -e_{W_t} when it backtracks
                if word.last() == Some(&-sigma) {
                    f.add_to(
                        crate::sparse::CoordKey::TreeEdge { word: word.clone() },
                        -1.0,
                    );
                    word.pop();
                } else {
                    word.push(sigma);
                    f.add_to(
                        crate::sparse::CoordKey::TreeEdge { word: word.clone() },
                        1.0,
                    );
                }
                t += 1;
            }
            let norm_pow = f.norm_p_pow(p);
            if norm_pow != word.len() as f64 {
                return Err(Error::InvalidParams(format!(
                    "cocycle norm {} disagrees with word length {} at t={t}",
                    norm_pow,
                    word.len()
                )));
            }
            let v = norm_pow; // since each coordinate is +-1
            sums[i].0 += v;
            sums[i].1 += v * v;
        }
    }
    let mut points = Vec::with_capacity(t_grid.len());
    let mut all_below = true;
    for (&t, &(s, sq)) in t_grid.iter().zip(&sums) {
        let m = MeanStderr::from_sums(s, sq, trials);
        let denom = c_p * t as f64; // E||f(W_1)||^p = 1
        let ratio = m.mean / denom;
        let se = m.stderr / denom;
        if ratio > 1.0 + 3.0 * se {
            all_below = false;
        }
        points.push(GrowthPoint {
            t,
            ratio,
            ratio_stderr: se,
        });
    }
    Ok(GrowthReport {
        points,
        all_below_one: all_below,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct DoublingPoint {
    pub t: u64,
    /// E||f(W_{2t})||^2 / (2 E||f(W_t)||^2)
    pub ratio: f64,
    pub ratio_stderr: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct DoublingReport {
    pub points: Vec<DoublingPoint>,
    pub all_below_one: bool,
}

/// Hilbert-space doubling: E||f(W_{2t})||^2 <= 2 E||f(W_t)||^2 for the tree
/// cocycle, where ||f(W_t)||^2 = d(W_t, e) exactly.
pub fn hilbert_doubling_check(t_grid: &[u64], trials: u64, seed: u64) -> Result<DoublingReport> {
    if trials == 0 || t_grid.is_empty() {
        return Err(Error::InvalidParams("need trials and a grid".into()));
    }
    let t_max = 2 * t_grid.last().unwrap();
    // distances at t and 2t accumulated along shared paths
    let mut sums = vec![[0.0f64; 4]; t_grid.len()];
    for trial in 0..trials {
        let mut rng = SplitMix64::for_trial(seed, trial);
        let mut dist = 0u64; // birth-death chain of the word length
        let mut t = 0u64;
        let mut at: Vec<(usize, u64)> = Vec::new(); // (grid index, value at t)
        while t < t_max {
            let step_away = if dist == 0 {
                true
            } else {
                // 3 of 4 letters extend a nonempty reduced word
                rng.uniform(4) != 0
            };
            dist = if step_away { dist + 1 } else { dist - 1 };
            t += 1;
            for (i, &cp) in t_grid.iter().enumerate() {
                if t == cp {
                    at.push((i, dist));
                }
                if t == 2 * cp {
                    let d2 = dist as f64;
                    let d1 = at
                        .iter()
                        .find(|(j, _)| *j == i)
                        .map(|(_, d)| *d as f64)
                        .expect("t precedes 2t");
                    sums[i][0] += d1;
                    sums[i][1] += d1 * d1;
                    sums[i][2] += d2;
                    sums[i][3] += d2 * d2;
                }
            }
        }
    }
    let mut points = Vec::with_capacity(t_grid.len());
    let mut all_below = true;
    for (&t, s) in t_grid.iter().zip(&sums) {
        let m1 = MeanStderr::from_sums(s[0], s[1], trials);
        let m2 = MeanStderr::from_sums(s[2], s[3], trials);
        let ratio = m2.mean / (2.0 * m1.mean);
        let se = ratio
            * ((m2.stderr / m2.mean).powi(2) + (m1.stderr / m1.mean).powi(2)).sqrt();
        if ratio > 1.0 + 3.0 * se {
            all_below = false;
        }
        points.push(DoublingPoint {
            t,
            ratio,
            ratio_stderr: se,
        });
    }
    Ok(DoublingReport {
        points,
        all_below_one: all_below,
    })
}

// ---------------------------------------------------------------------------
// Enflo cube ratios with exact wreath distances
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct EnfloPoint {
    pub n: usize,
    /// E d(f(eps), f(-eps))^p / sum_j E d_j^p
    pub ratio: f64,
    pub diagonal: u64,
    pub edges: Vec<u64>,
}

/// The cube map into Z wr Z has antipodal and edge distances independent of
/// the corner, so every expectation in the ratio is a constant and the
/// evaluation is exact at any dimension: no corner enumeration or sampling.
pub fn enflo_ratio(n_grid: &[usize], p: f64) -> Result<Vec<EnfloPoint>> {
    if p < 1.0 {
        return Err(Error::OutOfRange(format!("p must be >= 1, got {p}")));
    }
    let g = zwrz();
    let mut out = Vec::with_capacity(n_grid.len());
    for &n in n_grid {
        if n == 0 || n > 32 {
            return Err(Error::OutOfRange(
                "cube dimension must be 1..=32".into(),
            ));
        }
        let plus: Vec<i8> = vec![1; n];
        let minus: Vec<i8> = vec![-1; n];
        let diagonal = wreath_distance_exact(&g, &cube_to_zwrz(&plus)?, &cube_to_zwrz(&minus)?)?;
        let mut edges = Vec::with_capacity(n);
        for j in 0..n {
            let mut flipped = plus.clone();
            flipped[j] = -1;
            edges.push(wreath_distance_exact(
                &g,
                &cube_to_zwrz(&plus)?,
                &cube_to_zwrz(&flipped)?,
            )?);
        }
        let num = (diagonal as f64).powf(p);
        let den: f64 = edges.iter().map(|&e| (e as f64).powf(p)).sum();
        out.push(EnfloPoint {
            n,
            ratio: num / den,
            diagonal,
            edges,
        });
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Markov-type ratio for the lazy cube walk through the cube map
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct MarkovPoint {
    pub t: u64,
    /// K(t)^p = E d^p(f(Z_t), f(Z_0)) / (t E d^p(f(Z_1), f(Z_0)))
    pub ratio: f64,
    pub ratio_stderr: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct MarkovReport {
    pub n: usize,
    pub p: f64,
    pub points: Vec<MarkovPoint>,
    pub sup_ratio: f64,
    /// E d^p(f(Z_1), f(Z_0)) estimated from the chain
    pub step_moment: MeanStderr,
    /// the same moment from the uniform edge average (closed form)
    pub step_moment_direct: f64,
}

/// Lazy simple walk on {-1,1}^n started uniform, pushed through the cube
/// map; distances are exact. p >= 2 is outside the claim this illustrates.
pub fn markov_ratio(
    n: usize,
    p: f64,
    t_grid: &[u64],
    trials: u64,
    seed: u64,
) -> Result<MarkovReport> {
    if p >= 2.0 {
        return Err(Error::OutOfRange(format!(
            "markov ratio experiment is for p < 2, got {p}"
        )));
    }
    if p < 1.0 {
        return Err(Error::OutOfRange(format!("p must be >= 1, got {p}")));
    }
    if n == 0 || n > 20 {
        return Err(Error::OutOfRange("cube dimension must be 1..=20".into()));
    }
    if trials == 0 || t_grid.is_empty() {
        return Err(Error::InvalidParams("need trials and a grid".into()));
    }
    // d(f(z), f(z')) depends only on the differing coordinate set:
    // 2n per differing lamp plus the sweep to the farthest one
    let dist_pow = |diff: u64| -> f64 {
        if diff == 0 {
            return 0.0;
        }
        let count = diff.count_ones() as u64;
        let far = 63 - diff.leading_zeros() as u64; // max set bit index (0-based)
        let d = 2 * (n as u64) * count + 2 * ((n as u64) + far + 1);
        (d as f64).powf(p)
    };
    let t_max = *t_grid.last().unwrap();
    let mut sums = vec![(0.0f64, 0.0f64); t_grid.len()];
    let mut step_sum = 0.0;
    let mut step_sumsq = 0.0;
    for trial in 0..trials {
        let mut rng = SplitMix64::for_trial(seed, trial);
        // uniform stationary start; track only the xor with Z_0
        let _z0: u64 = rng.next_u64() & ((1 << n) - 1);
        let mut diff = 0u64;
        let mut t = 0u64;
        while t < t_max {
            // lazy: stay with probability 1/2
            if rng.bernoulli() {
                diff ^= 1 << rng.uniform(n);
            }
            t += 1;
            if t == 1 {
                let first_step = dist_pow(diff);
                step_sum += first_step;
                step_sumsq += first_step * first_step;
            }
            for (i, &cp) in t_grid.iter().enumerate() {
                if t == cp {
                    let v = dist_pow(diff);
                    sums[i].0 += v;
                    sums[i].1 += v * v;
                }
            }
        }
    }
    let step_moment = MeanStderr::from_sums(step_sum, step_sumsq, trials);
    let step_moment_direct = (0..n)
        .map(|j| {
            let d = 2 * n as u64 + 2 * (n as u64 + j as u64 + 1);
            (d as f64).powf(p)
        })
        .sum::<f64>()
        / (2.0 * n as f64);
    let mut points = Vec::with_capacity(t_grid.len());
    let mut sup_ratio = 0.0f64;
    for (&t, &(s, sq)) in t_grid.iter().zip(&sums) {
        let m = MeanStderr::from_sums(s, sq, trials);
        let denom = t as f64 * step_moment.mean;
        let ratio = m.mean / denom;
        let se = if m.mean > 0.0 {
            ratio * ((m.stderr / m.mean).powi(2) + (step_moment.stderr / step_moment.mean).powi(2)).sqrt()
        } else {
            0.0
        };
        sup_ratio = sup_ratio.max(ratio);
        points.push(MarkovPoint {
            t,
            ratio,
            ratio_stderr: se,
        });
    }
    Ok(MarkovReport {
        n,
        p,
        points,
        sup_ratio,
        step_moment,
        step_moment_direct,
    })
}

/// One named verdict for the smoothness suite JSON output.
#[derive(Debug, Clone, Serialize)]
pub struct Verdict {
    pub name: String,
    pub max_violation: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Verdict {
    pub fn new(name: &str, max_violation: f64, tolerance: f64) -> Self {
        Verdict {
            name: name.into(),
            max_violation,
            tolerance,
            pass: max_violation <= tolerance,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_point_parallelogram_is_tight() {
        let params = SmoothnessParams::new(2.0, 2.0).unwrap();
        let rep = two_point_smoothness(&params, 8, 20_000, 1).unwrap();
        // equality up to roundoff
        assert!(rep.max_violation.abs() <= 1e-9, "{}", rep.max_violation);
        assert!(rep.max_violation >= -1e-9);
    }

    #[test]
    fn two_point_holds_for_lp_paths() {
        let params = SmoothnessParams::new(1.5, 1.5).unwrap();
        let rep = two_point_smoothness(&params, 8, 100_000, 2).unwrap();
        assert!(rep.max_violation <= 1e-9, "{}", rep.max_violation);
        let params = SmoothnessParams::new(2.0, 4.0).unwrap();
        let rep = two_point_smoothness(&params, 8, 100_000, 3).unwrap();
        assert!(rep.max_violation <= 1e-9, "{}", rep.max_violation);
    }

    #[test]
    fn two_point_with_zero_y_is_equality() {
        // y = 0: both sides are 2||x||^p
        let params = SmoothnessParams::new(1.5, 1.5).unwrap();
        let s = params.smoothness_constant().unwrap();
        let x = [1.0f64, -2.0, 0.5];
        let lhs = 2.0 * norm_q(&x, 1.5).powf(1.5);
        let rhs = 2.0 * norm_q(&x, 1.5).powf(1.5) + 2.0 * s.powf(1.5) * 0.0;
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn invalid_smoothness_pairs_rejected() {
        assert!(SmoothnessParams::new(1.0, 1.0).is_err());
        assert!(SmoothnessParams::new(2.5, 2.5).is_err());
        assert!(SmoothnessParams::new(1.5, 2.0).is_err());
    }

    #[test]
    fn pisier_iid_increments_at_p2_have_unit_ratio() {
        // exact enumeration at n = 4: E||sum xi v||^2 = n ||v||^2, so the
        // ratio against S^2/(2-1) sum ||v||^2 is exactly 1
        let n = 4;
        let v = [1.0, 2.0, -0.5];
        let mut lhs = 0.0;
        for signs in 0..(1u32 << n) {
            let mut m = [0.0f64; 3];
            for k in 0..n {
                let s = if signs >> k & 1 == 1 { 1.0 } else { -1.0 };
                for (mi, vi) in m.iter_mut().zip(&v) {
                    *mi += s * vi;
                }
            }
            lhs += m.iter().map(|x| x * x).sum::<f64>();
        }
        lhs /= (1u32 << n) as f64;
        let vnorm: f64 = v.iter().map(|x| x * x).sum();
        let rhs = n as f64 * vnorm; // constant = 1 at p = q = 2
        assert!((lhs - rhs).abs() < 1e-9);
    }

    #[test]
    fn pisier_monte_carlo_sweep_stays_below_one() {
        let params = SmoothnessParams::new(1.5, 1.5).unwrap();
        let rep = pisier_martingale_check(&params, 16, 8, 2_000, 8, 11).unwrap();
        assert!(
            rep.max_ratio <= 1.0 + 3.0 * rep.max_ratio_stderr,
            "max ratio {}",
            rep.max_ratio
        );
    }

    #[test]
    fn constant_martingale_degenerates_to_zero() {
        // with one step and the trivial sign the ratio is LHS/RHS of equal
        // things; spot check that zero increments produce zero sides rather
        // than NaN blowups in the report path
        let params = SmoothnessParams::new(1.5, 1.5).unwrap();
        let rep = pisier_martingale_check(&params, 1, 2, 50, 1, 5).unwrap();
        assert!(rep.max_ratio.is_finite());
    }

    #[test]
    fn cocycle_identity_is_exact() {
        // t = 1 case reduces to f(x) = -pi(x) f(x^{-1})
        let rep = cocycle_identity_check(1, 50, 3).unwrap();
        assert_eq!(rep.max_discrepancy, 0.0);
        // t = 0: both sides empty
        let rep = cocycle_identity_check(0, 5, 3).unwrap();
        assert_eq!(rep.max_discrepancy, 0.0);
        let rep = cocycle_identity_check(20, 100, 42).unwrap();
        assert_eq!(rep.max_discrepancy, 0.0);
    }

    #[test]
    fn growth_ratio_below_one_on_dyadic_grid() {
        let params = SmoothnessParams::new(2.0, 2.0).unwrap();
        let grid: Vec<u64> = (1..=6).map(|k| 1 << k).collect();
        let rep = cocycle_growth_check(&params, &grid, 2_000, 9).unwrap();
        assert!(rep.all_below_one);
        // t = 1 would give exactly 1/C_p
        let rep1 = cocycle_growth_check(&params, &[1], 500, 9).unwrap();
        let c = params.growth_constant().unwrap();
        assert!((rep1.points[0].ratio - 1.0 / c).abs() < 1e-12);
    }

    #[test]
    fn growth_doubling_consistency() {
        // ratio at 2t stays within twice the ratio at t (up to noise)
        let params = SmoothnessParams::new(1.5, 1.5).unwrap();
        let grid: Vec<u64> = vec![8, 16, 32, 64];
        let rep = cocycle_growth_check(&params, &grid, 4_000, 21).unwrap();
        for w in rep.points.windows(2) {
            assert!(
                w[1].ratio <= 2.0 * w[0].ratio + 3.0 * (w[1].ratio_stderr + w[0].ratio_stderr),
                "{} then {}",
                w[0].ratio,
                w[1].ratio
            );
        }
    }

    #[test]
    fn doubling_t1_matches_enumeration() {
        // E d(W_2, e) = 1.5 by enumerating the 16 two-step words; the
        // doubling ratio at t=1 is 1.5 / (2 * 1) = 0.75
        let rep = hilbert_doubling_check(&[1], 60_000, 7).unwrap();
        let p = &rep.points[0];
        assert!(
            (p.ratio - 0.75).abs() <= 3.0 * p.ratio_stderr,
            "{} vs 0.75",
            p.ratio
        );
    }

    #[test]
    fn doubling_stays_below_one() {
        let grid: Vec<u64> = (0..=9).map(|k| 1 << k).collect();
        let rep = hilbert_doubling_check(&grid, 3_000, 19).unwrap();
        assert!(rep.all_below_one);
    }

    #[test]
    fn enflo_exact_values() {
        let pts = enflo_ratio(&[2, 4, 8], 2.0).unwrap();
        assert_eq!(pts[0].diagonal, 16); // 2n^2 + 4n at n = 2
        assert_eq!(pts[1].diagonal, 48);
        assert_eq!(pts[2].diagonal, 160);
        for pt in &pts {
            for (j, &e) in pt.edges.iter().enumerate() {
                assert_eq!(e as usize, 2 * pt.n + 2 * (pt.n + j + 1));
            }
        }
        // exact ratio values R(n,2) = (2n^2+4n)^2 / sum (4n+2j)^2
        assert!((pts[1].ratio - 2304.0 / 1784.0).abs() < 1e-12);
        assert!((pts[2].ratio - 25600.0 / 13616.0).abs() < 1e-12);
    }

    #[test]
    fn markov_ratio_validations() {
        assert!(markov_ratio(8, 2.0, &[1], 10, 1).is_err());
        assert!(markov_ratio(8, 0.5, &[1], 10, 1).is_err());
        let rep = markov_ratio(4, 1.25, &[1, 2, 4], 4_000, 5).unwrap();
        // t = 1 compares an estimate to itself
        assert!((rep.points[0].ratio - 1.0).abs() < 1e-12);
        // stationary start: chain step moment matches the direct edge average
        let gap = (rep.step_moment.mean - rep.step_moment_direct).abs();
        assert!(
            gap <= 3.0 * rep.step_moment.stderr,
            "{} vs {}",
            rep.step_moment.mean,
            rep.step_moment_direct
        );
    }

    #[test]
    fn markov_ratio_flat_in_t() {
        let grid: Vec<u64> = (0..=8).map(|k| 1 << k).collect();
        let rep = markov_ratio(8, 1.25, &grid, 3_000, 23).unwrap();
        assert!(rep.sup_ratio.is_finite());
        // saturation makes the ratio decay for large t
        let last = rep.points.last().unwrap();
        assert!(last.ratio <= rep.sup_ratio);
    }
}
