//! Simple-random-walk simulation and statistics: speed exponents, return
//! probabilities, visit counts and range, and the lamp/local-time structure
//! of wreath-product walks.
//!
//! Every Monte Carlo routine here is deterministic given its seed and
//! independent of worker count: trial r draws from the stream seeded by
//! mix64(seed, r), trials are accumulated sequentially inside fixed-size
//! chunks, and chunks are reduced in index order.

mod walker;

use std::collections::HashMap;
use std::collections::HashSet;

use rayon::prelude::*;
use serde::Serialize;

pub use walker::{bipartite_walk, generator_count, Walker};

use crate::error::{Error, Result};
use crate::group::{Element, GroupSpec};
use crate::metric::{closed_form_norm, distance};
use crate::rng::{mix64, SplitMix64};
use crate::stats::{log_log_fit, LineFit, MeanStderr};

/// Fixed accumulation chunk; results do not depend on how chunks are
/// scheduled over threads.
const TRIAL_CHUNK: u64 = 256;

/// Checkpoints smaller than this are excluded from exponent fits, where
/// additive constants dominate.
const FIT_MIN_T: u64 = 16;

#[derive(Debug, Clone, Serialize)]
pub struct WalkConfig {
    pub group: GroupSpec,
    pub t_max: u64,
    pub trials: u64,
    pub seed: u64,
    pub checkpoints: Vec<u64>,
    /// cap on BFS states when no closed-form distance exists
    pub distance_budget: usize,
}

impl WalkConfig {
    pub fn new(group: GroupSpec, t_max: u64, trials: u64, seed: u64) -> Self {
        WalkConfig {
            checkpoints: default_checkpoints(t_max),
            group,
            t_max,
            trials,
            seed,
            distance_budget: 2_000_000,
        }
    }

    pub fn with_checkpoints(mut self, checkpoints: Vec<u64>) -> Self {
        self.checkpoints = checkpoints;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidParams("trials must be >= 1".into()));
        }
        if self.checkpoints.is_empty() {
            return Err(Error::InvalidParams("need at least one checkpoint".into()));
        }
        if self.checkpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParams(
                "checkpoints must be strictly increasing".into(),
            ));
        }
        if *self.checkpoints.last().unwrap() > self.t_max {
            return Err(Error::InvalidParams("checkpoints exceed t_max".into()));
        }
        Ok(())
    }
}

/// Powers of two up to t_max, always ending at t_max; [0] when t_max = 0.
pub fn default_checkpoints(t_max: u64) -> Vec<u64> {
    if t_max == 0 {
        return vec![0];
    }
    let mut out = Vec::new();
    let mut t = 1u64;
    while t <= t_max {
        out.push(t);
        t = t.saturating_mul(2);
    }
    if *out.last().unwrap() != t_max {
        out.push(t_max);
    }
    out
}

/// Elements of one walk trial at the configured checkpoints.
pub fn simulate_walk(cfg: &WalkConfig, trial: u64) -> Result<Vec<Element>> {
    cfg.validate()?;
    let mut walker = Walker::new(cfg.group.clone())?;
    let gens = walker.generator_count();
    let mut rng = SplitMix64::for_trial(cfg.seed, trial);
    let mut out = Vec::with_capacity(cfg.checkpoints.len());
    let mut t = 0u64;
    for &cp in &cfg.checkpoints {
        while t < cp {
            walker.step(rng.uniform(gens));
            t += 1;
        }
        out.push(walker.element());
    }
    Ok(out)
}

/// Distance to the identity: closed form where one exists, BFS otherwise.
pub fn norm_with_budget(g: &GroupSpec, e: &Element, budget: usize) -> Result<u64> {
    if let Some(d) = closed_form_norm(g, e) {
        return Ok(d);
    }
    distance(g, e, &g.identity(), budget)
}

fn run_chunked<T, F>(trials: u64, per_chunk: F) -> Vec<T>
where
    T: Send,
    F: Fn(std::ops::Range<u64>) -> T + Sync,
{
    let nchunks = trials.div_ceil(TRIAL_CHUNK);
    (0..nchunks)
        .into_par_iter()
        .map(|c| {
            let lo = c * TRIAL_CHUNK;
            let hi = ((c + 1) * TRIAL_CHUNK).min(trials);
            per_chunk(lo..hi)
        })
        .collect()
}

// ---------------------------------------------------------------------------
// speed
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct SpeedEstimate {
    pub checkpoints: Vec<u64>,
    pub means: Vec<MeanStderr>,
    /// log-log slope over checkpoints >= 16
    pub beta_hat: f64,
    pub residual: f64,
}

impl SpeedEstimate {
    pub fn csv_rows(&self) -> Vec<Vec<String>> {
        self.checkpoints
            .iter()
            .zip(&self.means)
            .map(|(t, m)| {
                vec![
                    t.to_string(),
                    format!("{}", m.mean),
                    format!("{}", m.stderr),
                    m.n.to_string(),
                ]
            })
            .collect()
    }
}

pub fn estimate_speed(cfg: &WalkConfig) -> Result<SpeedEstimate> {
    cfg.validate()?;
    let ncp = cfg.checkpoints.len();
    let chunks: Vec<Result<Vec<(f64, f64)>>> = run_chunked(cfg.trials, |range| {
        let mut acc = vec![(0.0f64, 0.0f64); ncp];
        for trial in range {
            let mut walker = Walker::new(cfg.group.clone())?;
            let gens = walker.generator_count();
            let mut rng = SplitMix64::for_trial(cfg.seed, trial);
            let mut t = 0u64;
            for (i, &cp) in cfg.checkpoints.iter().enumerate() {
                while t < cp {
                    walker.step(rng.uniform(gens));
                    t += 1;
                }
                let d = norm_with_budget(&cfg.group, &walker.element(), cfg.distance_budget)?
                    as f64;
                acc[i].0 += d;
                acc[i].1 += d * d;
            }
        }
        Ok(acc)
    });
    let mut total = vec![(0.0f64, 0.0f64); ncp];
    for chunk in chunks {
        let chunk = chunk?;
        for (t, c) in total.iter_mut().zip(chunk) {
            t.0 += c.0;
            t.1 += c.1;
        }
    }
    let means: Vec<MeanStderr> = total
        .into_iter()
        .map(|(s, sq)| MeanStderr::from_sums(s, sq, cfg.trials))
        .collect();
    let fit = fit_over_checkpoints(&cfg.checkpoints, &means);
    Ok(SpeedEstimate {
        checkpoints: cfg.checkpoints.clone(),
        means,
        beta_hat: fit.slope,
        residual: fit.residual,
    })
}

fn fit_over_checkpoints(checkpoints: &[u64], means: &[MeanStderr]) -> LineFit {
    let pts: Vec<(f64, f64)> = checkpoints
        .iter()
        .zip(means)
        .filter(|(&t, m)| t >= FIT_MIN_T && m.mean > 0.0)
        .map(|(&t, m)| (t as f64, m.mean))
        .collect();
    if pts.len() < 2 {
        return LineFit {
            slope: f64::NAN,
            intercept: f64::NAN,
            residual: f64::NAN,
        };
    }
    log_log_fit(&pts)
}

// ---------------------------------------------------------------------------
// return probabilities
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct ReturnPoint {
    pub t: u64,
    pub p_t: f64,
    pub p_t_next: f64,
    /// lazy-paired probability Pr[W_t = e] + Pr[W_{t+1} = e]
    pub paired: MeanStderr,
    pub reliable: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReturnCurve {
    pub points: Vec<ReturnPoint>,
    /// slope of log(paired) over log(t) across reliable checkpoints >= 16
    pub slope: f64,
    pub slope_residual: f64,
    /// linearity diagnostic of log(paired) against t^{1/3} (log t)^{2/3},
    /// the stretched-exponential shape; reported only, never asserted
    pub stretched_slope: f64,
    pub stretched_residual: f64,
}

impl ReturnCurve {
    pub fn csv_rows(&self) -> Vec<Vec<String>> {
        self.points
            .iter()
            .map(|p| {
                vec![
                    p.t.to_string(),
                    format!("{}", p.p_t),
                    format!("{}", p.p_t_next),
                    format!("{}", p.paired.mean),
                    format!("{}", p.paired.stderr),
                    p.reliable.to_string(),
                ]
            })
            .collect()
    }
}

const RELIABLE_MIN_HITS: u64 = 10;

pub fn estimate_return(cfg: &WalkConfig) -> Result<ReturnCurve> {
    cfg.validate()?;
    let ncp = cfg.checkpoints.len();
    let chunks: Vec<Result<Vec<[u64; 3]>>> = run_chunked(cfg.trials, |range| {
        let mut acc = vec![[0u64; 3]; ncp];
        for trial in range {
            let mut walker = Walker::new(cfg.group.clone())?;
            let gens = walker.generator_count();
            let mut rng = SplitMix64::for_trial(cfg.seed, trial);
            let mut t = 0u64;
            for (i, &cp) in cfg.checkpoints.iter().enumerate() {
                while t < cp {
                    walker.step(rng.uniform(gens));
                    t += 1;
                }
                let at_t = walker.at_identity();
                // peek one step ahead, then continue from t+1
                walker.step(rng.uniform(gens));
                t += 1;
                let at_t1 = walker.at_identity();
                acc[i][0] += u64::from(at_t);
                acc[i][1] += u64::from(at_t1);
                acc[i][2] += u64::from(at_t && at_t1);
            }
        }
        Ok(acc)
    });
    let mut total = vec![[0u64; 3]; ncp];
    for chunk in chunks {
        let chunk = chunk?;
        for (t, c) in total.iter_mut().zip(chunk) {
            t[0] += c[0];
            t[1] += c[1];
            t[2] += c[2];
        }
    }
    let n = cfg.trials as f64;
    let points: Vec<ReturnPoint> = cfg
        .checkpoints
        .iter()
        .zip(&total)
        .map(|(&t, counts)| {
            let sum = (counts[0] + counts[1]) as f64;
            // X = I_t + I_{t+1} in {0,1,2}: E X^2 = p_t + p_{t+1} + 2 p_both
            let sumsq = sum + 2.0 * counts[2] as f64;
            ReturnPoint {
                t,
                p_t: counts[0] as f64 / n,
                p_t_next: counts[1] as f64 / n,
                paired: MeanStderr::from_sums(sum, sumsq, cfg.trials),
                reliable: counts[0] + counts[1] >= RELIABLE_MIN_HITS,
            }
        })
        .collect();
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|p| p.reliable && p.t >= FIT_MIN_T && p.paired.mean > 0.0)
        .map(|p| (p.t as f64, p.paired.mean))
        .collect();
    let nan_fit = LineFit {
        slope: f64::NAN,
        intercept: f64::NAN,
        residual: f64::NAN,
    };
    let fit = if pts.len() >= 2 { log_log_fit(&pts) } else { nan_fit };
    let stretched_pts: Vec<(f64, f64)> = pts
        .iter()
        .map(|&(t, p)| (t.powf(1.0 / 3.0) * t.ln().powf(2.0 / 3.0), p.ln()))
        .collect();
    let stretched = if stretched_pts.len() >= 2 {
        crate::stats::least_squares(&stretched_pts)
    } else {
        nan_fit
    };
    Ok(ReturnCurve {
        points,
        slope: fit.slope,
        slope_residual: fit.residual,
        stretched_slope: stretched.slope,
        stretched_residual: stretched.residual,
    })
}

// ---------------------------------------------------------------------------
// visit counts and range
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct VisitRangeStats {
    pub n: u64,
    pub beta: f64,
    /// E[X_n], X_n = #\{0 <= k <= n : W_k = e\}
    pub visits: MeanStderr,
    /// E[X_n^beta]
    pub visits_pow: MeanStderr,
    /// E[|{W_0..W_n}|]
    pub range: MeanStderr,
    /// sqrt(n), 1 + log n, or 1 according to the growth regime
    pub psi: f64,
}

enum RangeTracker {
    Line { lo: i64, hi: i64, pos: i64 },
    Plane { seen: HashSet<(i64, i64)>, pos: (i64, i64) },
    Tree { stack: Vec<u64>, seen: HashSet<u64> },
}

impl RangeTracker {
    fn new(g: &GroupSpec) -> Result<Self> {
        match g {
            GroupSpec::Integers => Ok(RangeTracker::Line { lo: 0, hi: 0, pos: 0 }),
            GroupSpec::Lattice { dim: 2 } => {
                let mut seen = HashSet::new();
                seen.insert((0, 0));
                Ok(RangeTracker::Plane { seen, pos: (0, 0) })
            }
            GroupSpec::Free { rank: 2 } => {
                let mut seen = HashSet::new();
                seen.insert(0);
                Ok(RangeTracker::Tree {
                    stack: vec![0],
                    seen,
                })
            }
            _ => Err(Error::UnsupportedShape(format!(
                "visit/range statistics support z, z2, f2; got {}",
                g.name()
            ))),
        }
    }

    /// Advance by generator index (same order as `GroupSpec::generators`).
    fn step(&mut self, idx: usize) -> bool {
        match self {
            RangeTracker::Line { lo, hi, pos } => {
                *pos += if idx == 0 { 1 } else { -1 };
                *lo = (*lo).min(*pos);
                *hi = (*hi).max(*pos);
                *pos == 0
            }
            RangeTracker::Plane { seen, pos } => {
                match idx {
                    0 => pos.0 += 1,
                    1 => pos.0 -= 1,
                    2 => pos.1 += 1,
                    _ => pos.1 -= 1,
                }
                seen.insert(*pos);
                *pos == (0, 0)
            }
            RangeTracker::Tree { stack, seen } => {
                let letter = (idx / 2 + 1) as i8 * if idx.is_multiple_of(2) { 1 } else { -1 };
                // maintain prefix hashes; a backtracking step pops
                let depth = stack.len();
                if depth >= 2 {
                    let parent = stack[depth - 2];
                    let rehash = mix64(parent, letter as u64 ^ 0x5bd1e995);
                    if rehash == stack[depth - 1] {
                        stack.pop();
                        return stack.len() == 1;
                    }
                }
                let top = *stack.last().unwrap();
                let h = mix64(top, letter as u64 ^ 0x5bd1e995);
                stack.push(h);
                seen.insert(h);
                stack.len() == 1
            }
        }
    }

    fn range(&self) -> u64 {
        match self {
            RangeTracker::Line { lo, hi, .. } => (hi - lo + 1) as u64,
            RangeTracker::Plane { seen, .. } => seen.len() as u64,
            RangeTracker::Tree { seen, .. } => seen.len() as u64,
        }
    }
}

pub fn psi_growth(g: &GroupSpec, n: u64) -> Result<f64> {
    match g {
        GroupSpec::Integers => Ok((n as f64).sqrt()),
        GroupSpec::Lattice { dim: 2 } => Ok(1.0 + (n as f64).ln()),
        GroupSpec::Free { rank: 2 } => Ok(1.0),
        _ => Err(Error::UnsupportedShape(g.name())),
    }
}

pub fn visits_and_range(cfg: &WalkConfig, beta: f64) -> Result<VisitRangeStats> {
    cfg.validate()?;
    RangeTracker::new(&cfg.group)?;
    let gens = generator_count(&cfg.group)?;
    let n = cfg.t_max;
    let chunks: Vec<[f64; 6]> = run_chunked(cfg.trials, |range| {
        let mut acc = [0.0f64; 6];
        for trial in range {
            let mut tracker = RangeTracker::new(&cfg.group).expect("validated");
            let mut rng = SplitMix64::for_trial(cfg.seed, trial);
            let mut visits = 1u64; // time 0 counts
            for _ in 0..n {
                if tracker.step(rng.uniform(gens)) {
                    visits += 1;
                }
            }
            let x = visits as f64;
            let xb = x.powf(beta);
            let r = tracker.range() as f64;
            acc[0] += x;
            acc[1] += x * x;
            acc[2] += xb;
            acc[3] += xb * xb;
            acc[4] += r;
            acc[5] += r * r;
        }
        acc
    });
    let mut total = [0.0f64; 6];
    for c in chunks {
        for (t, v) in total.iter_mut().zip(c) {
            *t += v;
        }
    }
    Ok(VisitRangeStats {
        n,
        beta,
        visits: MeanStderr::from_sums(total[0], total[1], cfg.trials),
        visits_pow: MeanStderr::from_sums(total[2], total[3], cfg.trials),
        range: MeanStderr::from_sums(total[4], total[5], cfg.trials),
        psi: psi_growth(&cfg.group, n)?,
    })
}

// ---------------------------------------------------------------------------
// wreath walk lamp statistics
// ---------------------------------------------------------------------------

/// Walk on G wr H with the doubled-lamp generating multiset: one step
/// multiplies the lamp at the current position by a uniform g1 in S_G,
/// moves the cursor by a uniform h in S_H, and multiplies the lamp at the
/// new position by an independent uniform g2 in S_G.
pub struct DoubledLampWalker {
    base: GroupSpec,
    base_gen_count: usize,
    shape_gen_count: usize,
    cursor: Walker,
    lamps: HashMap<Element, Walker>,
}

impl DoubledLampWalker {
    pub fn new(base: &GroupSpec, shape: &GroupSpec) -> Result<Self> {
        match shape {
            GroupSpec::Integers | GroupSpec::Cyclic { .. } => {}
            _ => return Err(Error::UnsupportedShape(shape.name())),
        }
        Ok(DoubledLampWalker {
            base_gen_count: generator_count(base)?,
            shape_gen_count: generator_count(shape)?,
            cursor: Walker::new(shape.clone())?,
            lamps: HashMap::new(),
            base: base.clone(),
        })
    }

    pub fn step(&mut self, rng: &mut SplitMix64) -> Result<()> {
        let g1 = rng.uniform(self.base_gen_count);
        let h = rng.uniform(self.shape_gen_count);
        let g2 = rng.uniform(self.base_gen_count);
        let at = self.cursor.element();
        self.lamp_step(at, g1)?;
        self.cursor.step(h);
        let at = self.cursor.element();
        self.lamp_step(at, g2)?;
        Ok(())
    }

    fn lamp_step(&mut self, at: Element, gen: usize) -> Result<()> {
        let walker = match self.lamps.entry(at) {
            std::collections::hash_map::Entry::Occupied(e) => e.into_mut(),
            std::collections::hash_map::Entry::Vacant(v) => {
                v.insert(Walker::new(self.base.clone())?)
            }
        };
        walker.step(gen);
        Ok(())
    }

    pub fn cursor_element(&self) -> Element {
        self.cursor.element()
    }

    pub fn lamp_element(&self, site: &Element) -> Element {
        self.lamps
            .get(site)
            .map(|w| w.element())
            .unwrap_or_else(|| self.base.identity())
    }

    pub fn element(&self) -> Element {
        let entries: Vec<(Element, Element)> = self
            .lamps
            .iter()
            .map(|(k, w)| (k.clone(), w.element()))
            .collect();
        Element::Wreath(Box::new(crate::group::WreathElement::new(
            entries,
            self.cursor.element(),
            &self.base,
        )))
    }
}

/// Mean displacement of the doubled-lamp walk on G wr H, measured in the
/// canonical word metric, with the usual log-log exponent fit.
pub fn estimate_speed_doubled(base: &GroupSpec, shape: &GroupSpec, cfg: &WalkConfig) -> Result<SpeedEstimate> {
    cfg.validate()?;
    let group = GroupSpec::wreath(base.clone(), shape.clone());
    let ncp = cfg.checkpoints.len();
    let chunks: Vec<Result<Vec<(f64, f64)>>> = run_chunked(cfg.trials, |range| {
        let mut acc = vec![(0.0f64, 0.0f64); ncp];
        for trial in range {
            let mut rng = SplitMix64::for_trial(cfg.seed, trial);
            let mut walker = DoubledLampWalker::new(base, shape)?;
            let mut t = 0u64;
            for (i, &cp) in cfg.checkpoints.iter().enumerate() {
                while t < cp {
                    walker.step(&mut rng)?;
                    t += 1;
                }
                let d = norm_with_budget(&group, &walker.element(), cfg.distance_budget)? as f64;
                acc[i].0 += d;
                acc[i].1 += d * d;
            }
        }
        Ok(acc)
    });
    let mut total = vec![(0.0f64, 0.0f64); ncp];
    for chunk in chunks {
        let chunk = chunk?;
        for (t, c) in total.iter_mut().zip(chunk) {
            t.0 += c.0;
            t.1 += c.1;
        }
    }
    let means: Vec<MeanStderr> = total
        .into_iter()
        .map(|(s, sq)| MeanStderr::from_sums(s, sq, cfg.trials))
        .collect();
    let fit = fit_over_checkpoints(&cfg.checkpoints, &means);
    Ok(SpeedEstimate {
        checkpoints: cfg.checkpoints.clone(),
        means,
        beta_hat: fit.slope,
        residual: fit.residual,
    })
}

/// Comparison of the wreath walk's cursor projection and origin lamp
/// against their predicted laws: a direct shape-group walk, and a base
/// walk of length resampled from the lamp-update counts.
#[derive(Debug, Clone, Serialize)]
pub struct LampStats {
    pub n: u64,
    pub trials: u64,
    /// E d_H(cursor_n, e) from the wreath walk
    pub cursor_mean_dist: MeanStderr,
    /// E d_H(W_n, e) from an independent direct walk on H
    pub direct_mean_dist: MeanStderr,
    pub chi_square: f64,
    pub chi_square_bins: usize,
    /// E d_G(lamp at the origin, e) at time n
    pub lamp_mean_dist: MeanStderr,
    /// E d_G(W^G_M, e) with M resampled from the empirical update counts
    pub resampled_mean_dist: MeanStderr,
    pub relative_gap: f64,
}

/// The doubled-lamp generating multiset: each step multiplies the lamp at
/// the current position by g1, moves the cursor by h, and multiplies the
/// lamp at the new position by g2, for uniform independent g1, g2 in S_G
/// and h in S_H.
pub fn wreath_lamp_statistics(
    base: &GroupSpec,
    shape: &GroupSpec,
    n: u64,
    trials: u64,
    seed: u64,
) -> Result<LampStats> {
    match shape {
        GroupSpec::Integers | GroupSpec::Cyclic { .. } => {}
        _ => return Err(Error::UnsupportedShape(shape.name())),
    }
    if trials == 0 {
        return Err(Error::InvalidParams("trials must be >= 1".into()));
    }
    let base_gen_count = generator_count(base)?;
    let shape_gen_count = generator_count(shape)?;
    let shape_id = shape.identity();

    let wreath_seed = mix64(seed, 1);
    let direct_seed = mix64(seed, 2);
    let resample_seed = mix64(seed, 3);

    struct TrialOut {
        cursor_dist: f64,
        cursor_pos: i64,
        lamp_dist: f64,
        update_count: u64,
    }

    let per_trial: Vec<Result<Vec<TrialOut>>> = run_chunked(trials, |range| {
        let mut out = Vec::with_capacity((range.end - range.start) as usize);
        for trial in range {
            let mut rng = SplitMix64::for_trial(wreath_seed, trial);
            let mut walker = DoubledLampWalker::new(base, shape)?;
            let mut origin_visits = 1u64;
            for _ in 0..n {
                walker.step(&mut rng)?;
                if walker.cursor_element() == shape_id {
                    origin_visits += 1;
                }
            }
            let cursor_el = walker.cursor_element();
            let cursor_dist =
                closed_form_norm(shape, &cursor_el).expect("line or cycle shape") as f64;
            let cursor_pos = match &cursor_el {
                Element::Int(v) => *v,
                Element::Cyclic(v) => i64::from(*v),
                _ => unreachable!(),
            };
            let lamp_el = walker.lamp_element(&shape_id);
            let lamp_dist = closed_form_norm(base, &lamp_el)
                .ok_or_else(|| Error::UnsupportedShape(base.name()))?
                as f64;
            // each visit contributes one update on arrival and one on
            // departure; times 0 and n each lose one
            let at_origin_now = u64::from(cursor_el == shape_id);
            let update_count = (2 * origin_visits).saturating_sub(1 + at_origin_now);
            out.push(TrialOut {
                cursor_dist,
                cursor_pos,
                lamp_dist,
                update_count,
            });
        }
        Ok(out)
    });
    let mut trials_out: Vec<TrialOut> = Vec::with_capacity(trials as usize);
    for chunk in per_trial {
        trials_out.extend(chunk?);
    }

    // direct walk on the shape group, same horizon
    let direct: Vec<(f64, i64)> = {
        let chunks: Vec<Result<Vec<(f64, i64)>>> = run_chunked(trials, |range| {
            let mut out = Vec::with_capacity((range.end - range.start) as usize);
            for trial in range {
                let mut rng = SplitMix64::for_trial(direct_seed, trial);
                let mut w = Walker::new(shape.clone())?;
                for _ in 0..n {
                    w.step(rng.uniform(shape_gen_count));
                }
                let e = w.element();
                let d = closed_form_norm(shape, &e).expect("line or cycle shape") as f64;
                let pos = match &e {
                    Element::Int(v) => *v,
                    Element::Cyclic(v) => i64::from(*v),
                    _ => unreachable!(),
                };
                out.push((d, pos));
            }
            Ok(out)
        });
        let mut all = Vec::with_capacity(trials as usize);
        for chunk in chunks {
            all.extend(chunk?);
        }
        all
    };

    // resample base walks at the observed update counts
    let resampled: Vec<f64> = {
        let counts: Vec<u64> = trials_out.iter().map(|t| t.update_count).collect();
        let chunks: Vec<Result<Vec<f64>>> = run_chunked(trials, |range| {
            let mut out = Vec::with_capacity((range.end - range.start) as usize);
            for trial in range {
                let mut rng = SplitMix64::for_trial(resample_seed, trial);
                let mut w = Walker::new(base.clone())?;
                for _ in 0..counts[trial as usize] {
                    w.step(rng.uniform(base_gen_count));
                }
                let d = closed_form_norm(base, &w.element())
                    .ok_or_else(|| Error::UnsupportedShape(base.name()))?;
                out.push(d as f64);
            }
            Ok(out)
        });
        let mut all = Vec::with_capacity(trials as usize);
        for chunk in chunks {
            all.extend(chunk?);
        }
        all
    };

    let summarize = |values: &mut dyn Iterator<Item = f64>| -> MeanStderr {
        let mut sum = 0.0;
        let mut sumsq = 0.0;
        let mut count = 0u64;
        for v in values {
            sum += v;
            sumsq += v * v;
            count += 1;
        }
        MeanStderr::from_sums(sum, sumsq, count)
    };

    let cursor_mean_dist = summarize(&mut trials_out.iter().map(|t| t.cursor_dist));
    let direct_mean_dist = summarize(&mut direct.iter().map(|d| d.0));
    let lamp_mean_dist = summarize(&mut trials_out.iter().map(|t| t.lamp_dist));
    let resampled_mean_dist = summarize(&mut resampled.iter().copied());

    let (chi_square, chi_square_bins) = chi_square_two_sample(
        shape,
        n,
        &trials_out.iter().map(|t| t.cursor_pos).collect::<Vec<_>>(),
        &direct.iter().map(|d| d.1).collect::<Vec<_>>(),
    );

    let denom = resampled_mean_dist.mean.abs().max(f64::MIN_POSITIVE);
    let relative_gap = if lamp_mean_dist.mean == resampled_mean_dist.mean {
        0.0
    } else {
        (lamp_mean_dist.mean - resampled_mean_dist.mean).abs() / denom
    };

    Ok(LampStats {
        n,
        trials,
        cursor_mean_dist,
        direct_mean_dist,
        chi_square,
        chi_square_bins,
        lamp_mean_dist,
        resampled_mean_dist,
        relative_gap,
    })
}

/// Two-sample chi-square statistic over position bins (equal sample sizes).
fn chi_square_two_sample(
    shape: &GroupSpec,
    n: u64,
    a: &[i64],
    b: &[i64],
) -> (f64, usize) {
    let assign: Box<dyn Fn(i64) -> usize> = match shape {
        GroupSpec::Cyclic { n } => {
            let m = *n as usize;
            Box::new(move |p: i64| p.rem_euclid(m as i64) as usize)
        }
        _ => {
            // fixed-width bins of sigma/2 covering +-4 sigma
            let sigma = (n as f64).sqrt().max(1.0);
            Box::new(move |p: i64| {
                let z = p as f64 / sigma;
                let k = ((z + 4.0) / 0.5).floor();
                (k.clamp(-1.0, 16.0) + 1.0) as usize
            })
        }
    };
    let bins = match shape {
        GroupSpec::Cyclic { n } => *n as usize,
        _ => 18,
    };
    let mut ca = vec![0u64; bins];
    let mut cb = vec![0u64; bins];
    for &p in a {
        ca[assign(p)] += 1;
    }
    for &p in b {
        cb[assign(p)] += 1;
    }
    let mut stat = 0.0;
    let mut used = 0usize;
    for (x, y) in ca.iter().zip(&cb) {
        let s = x + y;
        if s > 0 {
            let d = *x as f64 - *y as f64;
            stat += d * d / s as f64;
            used += 1;
        }
    }
    (stat, used)
}
