//! Word metrics: exact BFS balls, closed-form wreath distances over Z and
//! C_n, the approximate lamp-metric formula with measured equivalence
//! constants, and the Dirichlet-Poincare constants J(r).

use std::collections::HashMap;
use std::collections::VecDeque;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{compare_elements, display_element, Element, GroupSpec, WreathElement};
use crate::stats::{log_log_fit, LineFit};

/// Exact distances from a center out to a radius.
#[derive(Debug, Clone)]
pub struct DistanceTable {
    pub center: Element,
    pub radius: u64,
    pub dist: HashMap<Element, u64>,
}

impl DistanceTable {
    pub fn get(&self, e: &Element) -> Option<u64> {
        self.dist.get(e).copied()
    }

    /// Entries sorted by (distance, element order) for deterministic output.
    pub fn sorted(&self) -> Vec<(Element, u64)> {
        let mut rows: Vec<(Element, u64)> = self.dist.iter().map(|(k, &v)| (k.clone(), v)).collect();
        rows.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| compare_elements(&a.0, &b.0)));
        rows
    }

    pub fn csv_rows(&self) -> Vec<Vec<String>> {
        self.sorted()
            .into_iter()
            .map(|(e, d)| vec![display_element(&e), d.to_string()])
            .collect()
    }
}

/// Exact ball of radius `r` around the identity. Errors out (with no partial
/// table) if more than `budget` states would be visited.
pub fn bfs_ball(g: &GroupSpec, r: u64, budget: usize) -> Result<DistanceTable> {
    let gens = g.generators()?;
    let center = g.identity();
    let mut dist: HashMap<Element, u64> = HashMap::new();
    let mut queue: VecDeque<Element> = VecDeque::new();
    dist.insert(center.clone(), 0);
    queue.push_back(center.clone());
    while let Some(x) = queue.pop_front() {
        let d = dist[&x];
        if d == r {
            continue;
        }
        for s in &gens {
            let y = g.multiply_unchecked(&x, s);
            if !dist.contains_key(&y) {
                if dist.len() >= budget {
                    return Err(Error::BudgetExceeded { visited: dist.len() });
                }
                dist.insert(y.clone(), d + 1);
                queue.push_back(y);
            }
        }
    }
    Ok(DistanceTable {
        center,
        radius: r,
        dist,
    })
}

/// Word distance d(a, b) = |a^{-1} b| by breadth-first search from the
/// identity, visiting at most `budget` states.
pub fn distance(g: &GroupSpec, a: &Element, b: &Element, budget: usize) -> Result<u64> {
    let target = g.multiply(&g.inverse(a)?, b)?;
    let gens = g.generators()?;
    let e = g.identity();
    if target == e {
        return Ok(0);
    }
    let mut dist: HashMap<Element, u64> = HashMap::new();
    let mut queue: VecDeque<Element> = VecDeque::new();
    dist.insert(e.clone(), 0);
    queue.push_back(e);
    while let Some(x) = queue.pop_front() {
        let d = dist[&x];
        for s in &gens {
            let y = g.multiply_unchecked(&x, s);
            if !dist.contains_key(&y) {
                if y == target {
                    return Ok(d + 1);
                }
                if dist.len() >= budget {
                    return Err(Error::BudgetExceeded { visited: dist.len() });
                }
                dist.insert(y.clone(), d + 1);
                queue.push_back(y);
            }
        }
    }
    Err(Error::BudgetExceeded { visited: dist.len() })
}

/// Closed-form distance-to-identity for groups where one exists; `None`
/// when only BFS would do.
pub fn closed_form_norm(g: &GroupSpec, e: &Element) -> Option<u64> {
    match (g, e) {
        (GroupSpec::Cyclic { n }, Element::Cyclic(v)) => Some(u64::from((*v).min(n - v))),
        (GroupSpec::Integers, Element::Int(v)) => Some(v.unsigned_abs()),
        (GroupSpec::Lattice { .. }, Element::Lattice(v)) => {
            Some(v.iter().map(|x| x.unsigned_abs()).sum())
        }
        (GroupSpec::Free { .. }, Element::Word(w)) => Some(w.len() as u64),
        (GroupSpec::Wreath { .. } | GroupSpec::LampMetric { .. }, Element::Wreath(_)) => {
            wreath_norm_exact(g, e).ok()
        }
        _ => None,
    }
}

/// Signed position of a shape element for travel planning.
fn signed_pos(shape: &GroupSpec, e: &Element) -> Result<i64> {
    match (shape, e) {
        (GroupSpec::Integers, Element::Int(v)) => Ok(*v),
        (GroupSpec::Cyclic { .. }, Element::Cyclic(v)) => Ok(i64::from(*v)),
        _ => Err(Error::UnsupportedShape(shape.name())),
    }
}

/// Cost of one lamp value for the exact wreath distance: the base word
/// norm for `Wreath`, and 1 per non-identity lamp for `LampMetric`.
fn lamp_cost(g: &GroupSpec, base: &GroupSpec, v: &Element) -> Result<u64> {
    match g {
        GroupSpec::LampMetric { .. } => Ok(1),
        _ => closed_form_norm(base, v)
            .ok_or_else(|| Error::UnsupportedShape(format!("no base distance for {}", base.name()))),
    }
}

/// Minimal length of a walk on Z that starts at 0, visits every point of
/// `must_visit`, and ends at `target`.
fn line_travel(must_visit: &[i64], target: i64) -> u64 {
    let mut lo = 0.min(target);
    let mut hi = 0.max(target);
    for &p in must_visit {
        lo = lo.min(p);
        hi = hi.max(p);
    }
    // visit the left end first, or the right end first
    let left_first = -lo + (hi - lo) + (hi - target);
    let right_first = hi + (hi - lo) + (target - lo);
    left_first.min(right_first) as u64
}

/// Minimal length of a walk on C_n starting at 0, visiting all of `sites`,
/// ending at `cursor`. Walks are unrolled to Z: enumerate the clockwise
/// extent `hi` in [0, n] and counterclockwise extent `lo` in [-n, 0]; a site
/// s is covered iff s <= hi or s >= n + lo, and the walk may stop at any
/// unrolled representative t of the cursor inside [lo, hi]. Touching both
/// ends before stopping at t costs (hi - lo) + min(hi - t - lo, t - lo + hi).
/// Taking extents out to +-n includes the fully wrapping itineraries.
fn cycle_travel(n: u32, sites: &[u32], cursor: u32) -> u64 {
    let n = i64::from(n);
    let cursor = i64::from(cursor);
    let mut best = u64::MAX;
    for hi in 0..=n {
        'lo: for lo in (-n..=0).rev() {
            for &s in sites {
                let s = i64::from(s);
                if !(s <= hi || s >= n + lo) {
                    continue 'lo;
                }
            }
            for t in [cursor - n, cursor, cursor + n] {
                if t < lo || t > hi {
                    continue;
                }
                let left_first = -lo + (hi - lo) + (hi - t);
                let right_first = hi + (hi - lo) + (t - lo);
                best = best.min(left_first.min(right_first) as u64);
            }
        }
    }
    best
}

/// Exact word distance of a wreath element to the identity, for shape Z or
/// C_n: total lamp cost plus the minimal covering travel.
pub fn wreath_norm_exact(g: &GroupSpec, e: &Element) -> Result<u64> {
    let (base, shape) = g
        .wreath_parts()
        .ok_or_else(|| Error::UnsupportedShape(g.name()))?;
    let u = match e {
        Element::Wreath(u) => u,
        _ => return Err(Error::KindMismatch("expected wreath element".into())),
    };
    let mut lamp_total = 0u64;
    match shape {
        GroupSpec::Integers => {
            let mut sites: Vec<i64> = Vec::with_capacity(u.lamps.len());
            for (k, v) in &u.lamps {
                sites.push(signed_pos(shape, k)?);
                lamp_total += lamp_cost(g, base, v)?;
            }
            let target = signed_pos(shape, &u.cursor)?;
            Ok(lamp_total + line_travel(&sites, target))
        }
        GroupSpec::Cyclic { n } => {
            let mut sites: Vec<u32> = Vec::with_capacity(u.lamps.len());
            for (k, v) in &u.lamps {
                match k {
                    Element::Cyclic(c) => sites.push(*c),
                    _ => return Err(Error::KindMismatch("cyclic key expected".into())),
                }
                lamp_total += lamp_cost(g, base, v)?;
            }
            let cursor = match &u.cursor {
                Element::Cyclic(c) => *c,
                _ => return Err(Error::KindMismatch("cyclic cursor expected".into())),
            };
            Ok(lamp_total + cycle_travel(*n, &sites, cursor))
        }
        _ => Err(Error::UnsupportedShape(shape.name())),
    }
}

/// Exact wreath distance between two elements (left-invariant reduction).
pub fn wreath_distance_exact(g: &GroupSpec, a: &Element, b: &Element) -> Result<u64> {
    let rel = g.multiply(&g.inverse(a)?, b)?;
    wreath_norm_exact(g, &rel)
}

/// The two-sided lamp-metric formula: cursor distance plus the farthest
/// differing lamp's distance-from-origin plus one; the max over an empty
/// difference set is 0.
pub fn lamp_metric_formula(g: &GroupSpec, a: &Element, b: &Element) -> Result<u64> {
    let (_, shape) = g
        .wreath_parts()
        .ok_or_else(|| Error::UnsupportedShape(g.name()))?;
    let (u, v) = match (a, b) {
        (Element::Wreath(u), Element::Wreath(v)) => (u, v),
        _ => return Err(Error::KindMismatch("expected wreath elements".into())),
    };
    let cursor_term = match shape {
        GroupSpec::Integers => {
            (signed_pos(shape, &u.cursor)? - signed_pos(shape, &v.cursor)?).unsigned_abs()
        }
        GroupSpec::Cyclic { n } => {
            let x = signed_pos(shape, &u.cursor)?;
            let y = signed_pos(shape, &v.cursor)?;
            let d = (x - y).rem_euclid(i64::from(*n));
            d.min(i64::from(*n) - d) as u64
        }
        _ => return Err(Error::UnsupportedShape(shape.name())),
    };
    let mut lamp_term = 0u64;
    for key in difference_keys(u, v) {
        let site_norm = match shape {
            GroupSpec::Integers => signed_pos(shape, key)?.unsigned_abs(),
            GroupSpec::Cyclic { n } => {
                let p = signed_pos(shape, key)?;
                p.min(i64::from(*n) - p) as u64
            }
            _ => unreachable!(),
        };
        lamp_term = lamp_term.max(site_norm + 1);
    }
    Ok(cursor_term + lamp_term)
}

/// Keys where the two lamp configurations differ.
fn difference_keys<'a>(u: &'a WreathElement, v: &'a WreathElement) -> Vec<&'a Element> {
    let mut out = Vec::new();
    for (k, val) in &u.lamps {
        if v.lamp_at(k) != Some(val) {
            out.push(k);
        }
    }
    for (k, _) in &v.lamps {
        if u.lamp_at(k).is_none() {
            out.push(k);
        }
    }
    out
}

/// Number of lamps where the two configurations differ.
pub fn support_difference(u: &Element, v: &Element) -> Result<usize> {
    match (u, v) {
        (Element::Wreath(a), Element::Wreath(b)) => Ok(difference_keys(a, b).len()),
        _ => Err(Error::KindMismatch("expected wreath elements".into())),
    }
}

/// Per-pair record for metric-equivalence reports.
#[derive(Debug, Clone, Serialize)]
pub struct RatioRecord {
    pub pair: String,
    pub exact: u64,
    pub formula: u64,
    pub ratio: f64,
}

/// Comparison of an exact metric against a formula over a whole ball.
#[derive(Debug, Clone, Serialize)]
pub struct RatioReport {
    pub sample_size: usize,
    pub min_ratio: f64,
    pub max_ratio: f64,
    pub records: Vec<RatioRecord>,
    /// |{z : f(z) != e}| <= d held for every element checked.
    pub support_bound_ok: bool,
}

impl RatioReport {
    pub fn csv_rows(&self) -> Vec<Vec<String>> {
        self.records
            .iter()
            .map(|r| {
                vec![
                    r.pair.clone(),
                    r.exact.to_string(),
                    r.formula.to_string(),
                    format!("{}", r.ratio),
                ]
            })
            .collect()
    }
}

/// Compare the exact distance-to-identity with the lamp-metric formula over
/// the full ball B(e, r); ratios are exact/formula, zero-distance pairs are
/// excluded; the support-size bound is asserted for every element.
pub fn check_metric_equivalence(g: &GroupSpec, r: u64, budget: usize) -> Result<RatioReport> {
    let ball = bfs_ball(g, r, budget)?;
    let e = g.identity();
    let mut records = Vec::new();
    let mut min_ratio = f64::INFINITY;
    let mut max_ratio: f64 = 0.0;
    let mut support_bound_ok = true;
    for (x, d) in ball.sorted() {
        if let Element::Wreath(_) = &x {
            let supp = support_difference(&x, &e)?;
            if supp as u64 > d {
                support_bound_ok = false;
            }
        }
        if d == 0 {
            continue;
        }
        let formula = lamp_metric_formula(g, &x, &e)?;
        let ratio = d as f64 / formula as f64;
        min_ratio = min_ratio.min(ratio);
        max_ratio = max_ratio.max(ratio);
        records.push(RatioRecord {
            pair: format!("{}|{}", display_element(&x), display_element(&e)),
            exact: d,
            formula,
            ratio,
        });
    }
    Ok(RatioReport {
        sample_size: records.len(),
        min_ratio,
        max_ratio,
        records,
        support_bound_ok,
    })
}

/// Dirichlet-Poincare constants J(r) and the fitted growth exponent.
#[derive(Debug, Clone, Serialize)]
pub struct PoincareReport {
    pub radii: Vec<u64>,
    pub j_values: Vec<f64>,
    pub alpha_hat: f64,
    pub residual: f64,
}

impl PoincareReport {
    pub fn csv_rows(&self) -> Vec<Vec<String>> {
        self.radii
            .iter()
            .zip(&self.j_values)
            .map(|(r, j)| vec![r.to_string(), format!("{j}")])
            .collect()
    }
}

/// J(r) = lambda_min^{-1/2} for the quadratic form
/// sum_{x in G} sum_{s in S} |f(sx) - f(x)|^2 over functions supported on
/// B(e, r). On the ball the form is 2(|S| I - M) with M the in-ball
/// adjacency counts, so the smallest eigenvalue comes from the Perron value
/// of the nonnegative shifted matrix 2|S| I + 2M, found by power iteration
/// from the normalized all-ones vector.
pub fn poincare_j(g: &GroupSpec, radii: &[u64], tol: f64, budget: usize) -> Result<PoincareReport> {
    if tol <= 0.0 {
        return Err(Error::InvalidParams("tol must be positive".into()));
    }
    let mut j_values = Vec::with_capacity(radii.len());
    for &r in radii {
        j_values.push(poincare_j_single(g, r, tol, budget)?);
    }
    let pts: Vec<(f64, f64)> = radii
        .iter()
        .zip(&j_values)
        .filter(|(r, _)| **r >= 1)
        .map(|(&r, &j)| (r as f64, j))
        .collect();
    let fit = if pts.len() >= 2 {
        log_log_fit(&pts)
    } else {
        LineFit {
            slope: f64::NAN,
            intercept: f64::NAN,
            residual: f64::NAN,
        }
    };
    Ok(PoincareReport {
        radii: radii.to_vec(),
        j_values,
        alpha_hat: fit.slope,
        residual: fit.residual,
    })
}

const POWER_ITERATION_CAP: usize = 100_000;

fn poincare_j_single(g: &GroupSpec, r: u64, tol: f64, budget: usize) -> Result<f64> {
    let ball = bfs_ball(g, r, budget)?;
    let elems: Vec<Element> = {
        let mut v: Vec<Element> = ball.dist.keys().cloned().collect();
        v.sort_by(compare_elements);
        v
    };
    let index: HashMap<&Element, usize> = elems.iter().enumerate().map(|(i, e)| (e, i)).collect();
    let gens = g.generators()?;
    let deg = gens.len() as f64;
    // adjacency with multiplicity, restricted to the ball
    let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); elems.len()];
    for (i, x) in elems.iter().enumerate() {
        let mut counts: HashMap<usize, f64> = HashMap::new();
        for s in &gens {
            let y = g.multiply_unchecked(x, s);
            if let Some(&j) = index.get(&y) {
                *counts.entry(j).or_insert(0.0) += 1.0;
            }
        }
        let mut row: Vec<(usize, f64)> = counts.into_iter().collect();
        row.sort_by_key(|&(j, _)| j);
        rows[i] = row;
    }
    // shifted operator B = 2|S| I + 2M; lambda_min(A) = 4|S| - lambda_max(B)
    let shift = 2.0 * deg;
    let n = elems.len();
    let mut v = vec![1.0 / (n as f64).sqrt(); n];
    let mut w = vec![0.0; n];
    let mut mu_prev = f64::NAN;
    let mut diff_prev = f64::NAN;
    for it in 0..POWER_ITERATION_CAP {
        for (i, row) in rows.iter().enumerate() {
            let mut acc = shift * v[i];
            for &(j, m) in row {
                acc += 2.0 * m * v[j];
            }
            w[i] = acc;
        }
        let mu: f64 = v.iter().zip(&w).map(|(a, b)| a * b).sum();
        let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        for (vi, wi) in v.iter_mut().zip(&w) {
            *vi = wi / norm;
        }
        if it > 0 {
            let diff = (mu - mu_prev).abs();
            let lambda_min = (2.0 * shift - mu).max(f64::MIN_POSITIVE);
            // geometric tail estimate of the remaining error
            let rho = if diff_prev > 0.0 { (diff / diff_prev).min(0.999_999) } else { 0.0 };
            let err = if rho > 0.0 { diff * rho / (1.0 - rho) } else { diff };
            if diff == 0.0 || err < tol * lambda_min {
                return Ok(1.0 / lambda_min.sqrt());
            }
            diff_prev = diff;
        } else {
            diff_prev = f64::NAN;
        }
        mu_prev = mu;
    }
    Err(Error::NonConvergence(POWER_ITERATION_CAP))
}

/// Closed-form J(r) for the integers: the ball is a path of 2r+1 interior
/// points with grounded boundary, and each edge is counted once per
/// generator direction.
pub fn poincare_j_closed_form_z(r: u64) -> f64 {
    let m = 2.0 * r as f64 + 2.0;
    let lambda = 4.0 * (1.0 - (std::f64::consts::PI / m).cos());
    1.0 / lambda.sqrt()
}
