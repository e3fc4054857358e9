//! The three explicit embeddings of the cyclic lamplighter C_2 wr C_n:
//! two bi-Lipschitz maps into l_1 and an l_2 family with compression
//! exponent s for s in (1/2, 1).
//!
//! Lamp configurations are n-bit masks (bit k = lamp on at site k) and the
//! cursor is a residue mod n.

use crate::error::{Error, Result};
use crate::group::{Element, GroupSpec};
use crate::sparse::{CoordKey, SparseVec};

/// Which of the three cycle embeddings to evaluate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CycleEmbedding {
    /// Arc/subset sign pattern with weights 1 inside the arc and n outside,
    /// normalized by n^2 2^{floor(n/3)}; an l_1 embedding.
    First,
    /// Complex scalar block n e^{2 pi i j / n} plus unit vectors v_{J, x cap J}
    /// over all proper nonempty arcs J with j outside the interior of J,
    /// weighted 1/n; an l_1 embedding.
    Second,
    /// Arc/subset sign pattern with weights 1 inside the arc and
    /// sqrt(n) d(k+j, I)^{s - 1/2} outside, normalized by n 2^{floor(n/3)/2};
    /// an l_2 embedding with compression exponent s.
    L2 { s: f64 },
}

impl CycleEmbedding {
    /// The sequence-space exponent this embedding's norms use.
    pub fn p(&self) -> f64 {
        match self {
            CycleEmbedding::First | CycleEmbedding::Second => 1.0,
            CycleEmbedding::L2 { .. } => 2.0,
        }
    }

    pub fn check_params(&self, n: u32) -> Result<()> {
        match self {
            CycleEmbedding::First => {
                if !(3..=36).contains(&n) {
                    return Err(Error::OutOfRange(format!(
                        "first cycle embedding supports 3 <= n <= 36, got {n}"
                    )));
                }
            }
            CycleEmbedding::Second => {
                if !(3..=64).contains(&n) {
                    return Err(Error::OutOfRange(format!(
                        "second cycle embedding supports 3 <= n <= 64, got {n}"
                    )));
                }
            }
            CycleEmbedding::L2 { s } => {
                if *s <= 0.5 || *s >= 1.0 {
                    return Err(Error::OutOfRange(format!(
                        "l2 cycle embedding needs s in (1/2, 1), got {s}"
                    )));
                }
                if !(3..=36).contains(&n) {
                    return Err(Error::OutOfRange(format!(
                        "l2 cycle embedding supports 3 <= n <= 36, got {n}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Full sparse vector of the embedded point.
    pub fn eval(&self, x: u64, j: u32, n: u32) -> Result<SparseVec> {
        self.check_params(n)?;
        let j = j % n;
        let x = x & mask_n(n);
        Ok(match self {
            CycleEmbedding::First => eval_arcs(x, j, n, &ArcWeights::first(n), false),
            CycleEmbedding::L2 { s } => eval_arcs(x, j, n, &ArcWeights::l2(n, *s), true),
            CycleEmbedding::Second => eval_second(x, j, n),
        })
    }

    /// ||f(x,j) - f(0,0)||_p computed without materializing the vectors.
    /// Agrees with `eval` + subtraction; used for exhaustive sweeps.
    pub fn dist_to_base(&self, x: u64, j: u32, n: u32) -> Result<f64> {
        self.check_params(n)?;
        let j = j % n;
        let x = x & mask_n(n);
        Ok(match self {
            CycleEmbedding::First => dist_arcs(x, j, n, &ArcWeights::first(n), 1.0),
            CycleEmbedding::L2 { s } => dist_arcs(x, j, n, &ArcWeights::l2(n, *s), 2.0).sqrt(),
            CycleEmbedding::Second => dist_second(x, j, n),
        })
    }

    /// Embed a group element of C_2 wr C_n (or of L_G(C_n) after a lamp
    /// relabeling to bits).
    pub fn eval_element(&self, g: &GroupSpec, e: &Element) -> Result<SparseVec> {
        let (x, j, n) = lamplighter_coords(g, e)?;
        self.eval(x, j, n)
    }
}

pub(crate) fn mask_n(n: u32) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// (lamp mask, cursor, n) of a C_2 wr C_n element.
pub fn lamplighter_coords(g: &GroupSpec, e: &Element) -> Result<(u64, u32, u32)> {
    let (base, shape) = g
        .wreath_parts()
        .ok_or_else(|| Error::KindMismatch("expected a wreath group".into()))?;
    let n = match shape {
        GroupSpec::Cyclic { n } => *n,
        _ => return Err(Error::UnsupportedShape(shape.name())),
    };
    if !matches!(base, GroupSpec::Cyclic { n: 2 }) {
        return Err(Error::KindMismatch("expected base C_2".into()));
    }
    let u = match e {
        Element::Wreath(u) => u,
        _ => return Err(Error::KindMismatch("expected a wreath element".into())),
    };
    let mut x = 0u64;
    for (k, _) in &u.lamps {
        match k {
            Element::Cyclic(c) => x |= 1 << c,
            _ => return Err(Error::KindMismatch("cyclic lamp key expected".into())),
        }
    }
    let j = match &u.cursor {
        Element::Cyclic(c) => *c,
        _ => return Err(Error::KindMismatch("cyclic cursor expected".into())),
    };
    Ok((x, j, n))
}

/// Weight profiles shared by the first and l2 embeddings: arcs of length
/// floor(n/3), site weight w(a, site) depending only on the distance from
/// the site to the arc.
struct ArcWeights {
    n: u32,
    arc_len: u32,
    /// weight by cyclic distance from the arc (index 0 = inside)
    by_dist: Vec<f64>,
    norm: f64,
}

impl ArcWeights {
    fn first(n: u32) -> Self {
        let arc_len = n / 3;
        let mut by_dist = vec![f64::from(n); (n as usize) + 1];
        by_dist[0] = 1.0;
        ArcWeights {
            n,
            arc_len,
            by_dist,
            norm: f64::from(n) * f64::from(n) * (1u64 << arc_len) as f64,
        }
    }

    fn l2(n: u32, s: f64) -> Self {
        let arc_len = n / 3;
        let root_n = f64::from(n).sqrt();
        let by_dist: Vec<f64> = (0..=n as usize)
            .map(|d| {
                if d == 0 {
                    1.0
                } else {
                    root_n * (d as f64).powf(s - 0.5)
                }
            })
            .collect();
        ArcWeights {
            n,
            arc_len,
            by_dist,
            norm: f64::from(n) * ((1u64 << arc_len) as f64).sqrt(),
        }
    }

    /// cyclic distance from `site` to the arc starting at `a`
    fn dist_to_arc(&self, a: u32, site: u32) -> usize {
        let n = self.n;
        let rel = (site + n - a) % n; // position relative to arc start
        if rel < self.arc_len {
            0
        } else {
            let after = rel - self.arc_len + 1;
            let before = n - rel;
            after.min(before) as usize
        }
    }

    fn weight(&self, a: u32, site: u32) -> f64 {
        self.by_dist[self.dist_to_arc(a, site)]
    }
}

/// Bits of the arc window [a, a+m) hit by the shifted lamp set x + k.
#[inline]
fn window_bits(x: u64, a: u32, k: u32, n: u32, m: u32) -> u64 {
    let mut w = 0u64;
    for o in 0..m {
        let site = (a + o) % n;
        let src = (site + n - (k % n)) % n;
        if x >> src & 1 == 1 {
            w |= 1 << o;
        }
    }
    w
}

fn eval_arcs(x: u64, j: u32, n: u32, wts: &ArcWeights, l2: bool) -> SparseVec {
    let m = wts.arc_len;
    let mut v = SparseVec::new();
    for a in 0..n {
        for k in 0..n {
            let w = wts.weight(a, (k + j) % n) / wts.norm;
            let bits = window_bits(x, a, k, n, m);
            for subset in 0..(1u64 << m) {
                let sign = if (subset & bits).count_ones() % 2 == 1 {
                    -1.0
                } else {
                    1.0
                };
                let key = if l2 {
                    CoordKey::ArcL2 {
                        arc: a as u16,
                        subset,
                        site: k as u16,
                    }
                } else {
                    CoordKey::Arc1 {
                        arc: a as u16,
                        subset,
                        site: k as u16,
                    }
                };
                v.set(key, sign * w);
            }
        }
    }
    v
}

/// Distance to the base point, folded over subsets: with W the window bits,
/// half the subsets flip sign when W is nonempty, so per (arc, site) the
/// subset sum reduces to a two-term expression.
fn dist_arcs(x: u64, j: u32, n: u32, wts: &ArcWeights, p: f64) -> f64 {
    let m = wts.arc_len;
    let subsets = (1u64 << m) as f64;
    let mut total = 0.0;
    for a in 0..n {
        for k in 0..n {
            let w_j = wts.weight(a, (k + j) % n) / wts.norm;
            let w_0 = wts.weight(a, k) / wts.norm;
            let bits = window_bits(x, a, k, n, m);
            let (even, odd) = if bits == 0 {
                (subsets, 0.0)
            } else {
                (subsets / 2.0, subsets / 2.0)
            };
            if p == 1.0 {
                total += even * (w_j - w_0).abs() + odd * (w_j + w_0).abs();
            } else {
                total += even * (w_j - w_0) * (w_j - w_0) + odd * (w_j + w_0) * (w_j + w_0);
            }
        }
    }
    total
}

const SECOND_SCALAR_BLOCK: u8 = 0;

fn second_scalar(j: u32, n: u32) -> (f64, f64) {
    let theta = 2.0 * std::f64::consts::PI * f64::from(j) / f64::from(n);
    (f64::from(n) * theta.cos(), f64::from(n) * theta.sin())
}

/// Interior of a proper nonempty arc of C_n (start in [0,n), length in
/// [1, n-1]): both endpoints dropped, so arcs of length <= 2 have none.
#[inline]
fn in_interior(site: u32, start: u32, len: u32, n: u32) -> bool {
    if len <= 2 {
        return false;
    }
    let rel = (site + n - start) % n;
    rel >= 1 && rel < len - 1
}

fn eval_second(x: u64, j: u32, n: u32) -> SparseVec {
    let mut v = SparseVec::new();
    let (re, im) = second_scalar(j, n);
    v.set(
        CoordKey::Euclid {
            block: SECOND_SCALAR_BLOCK,
            axis: 0,
        },
        re,
    );
    v.set(
        CoordKey::Euclid {
            block: SECOND_SCALAR_BLOCK,
            axis: 1,
        },
        im,
    );
    let inv_n = 1.0 / f64::from(n);
    for start in 0..n {
        for len in 1..n {
            if in_interior(j, start, len, n) {
                continue;
            }
            let mut subset = 0u64;
            for o in 0..len {
                let site = (start + o) % n;
                if x >> site & 1 == 1 {
                    subset |= 1 << site;
                }
            }
            v.set(
                CoordKey::Arc2 {
                    start: start as u16,
                    len: len as u16,
                    subset,
                },
                inv_n,
            );
        }
    }
    v
}

fn dist_second(x: u64, j: u32, n: u32) -> f64 {
    let (re, im) = second_scalar(j, n);
    let (re0, im0) = second_scalar(0, n);
    let mut total = ((re - re0).powi(2) + (im - im0).powi(2)).sqrt();
    let inv_n = 1.0 / f64::from(n);
    for start in 0..n {
        for len in 1..n {
            let ind_u = !in_interior(j, start, len, n);
            let ind_v = !in_interior(0, start, len, n);
            let x_cap_j = arc_mask(start, len, n) & x;
            if x_cap_j == 0 {
                // same unit vector on both sides
                if ind_u != ind_v {
                    total += inv_n;
                }
            } else {
                // distinct unit vectors
                total += inv_n * (f64::from(u8::from(ind_u)) + f64::from(u8::from(ind_v)));
            }
        }
    }
    total
}

fn arc_mask(start: u32, len: u32, n: u32) -> u64 {
    let mut m = 0u64;
    for o in 0..len {
        m |= 1 << ((start + o) % n);
    }
    m
}
