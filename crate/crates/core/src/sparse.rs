//! Finitely supported real vectors over symbolic coordinate keys.
//!
//! Every embedding in this crate produces a `SparseVec`. Keys carry the
//! embedding family they came from, so vectors from different constructions
//! never collide, and direct sums are just key-disjoint additions.
//!
//! `Euclid` keys are special: all axes sharing the same block id form one
//! Euclidean block whose modulus enters the l_p sum as a single summand.
//! That is how a complex scalar (2 real axes) or an R^2 cursor block lives
//! inside an l_1 or l_2 direct sum.

use std::collections::BTreeMap;
use std::fmt;

/// Symbolic coordinate key, ordered and hashable.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CoordKey {
    /// First cycle embedding: (arc index, subset mask of the arc, site).
    Arc1 { arc: u16, subset: u64, site: u16 },
    /// l_2 cycle embedding, same index scheme as `Arc1`.
    ArcL2 { arc: u16, subset: u64, site: u16 },
    /// Second cycle embedding: unit vector v_{J,A} for an arc J and A = x cap J.
    Arc2 { start: u16, len: u16, subset: u64 },
    /// Axis `axis` of the Euclidean block `block`.
    Euclid { block: u8, axis: u8 },
    /// Half-line unit vector for the line embedding; `neg` selects the
    /// (-inf, k] family, `trace` is the lamp set intersected with the half-line.
    HalfLine { neg: bool, k: i64, trace: Vec<i64> },
    /// Window unit vector v_{y,r,pattern} for the plane embedding; `pattern`
    /// is the exact set of on-lamps inside the window (absolute positions).
    Window {
        y: (i64, i64),
        r: u32,
        pattern: Vec<(i64, i64)>,
    },
    /// Edge of the free-group Cayley tree, labeled by the endpoint word
    /// farther from the identity.
    TreeEdge { word: Vec<i8> },
    /// Direct-sum namespace wrapper.
    Block { id: u32, inner: Box<CoordKey> },
    /// Per-site namespace for element-wise embeddings of lamp values.
    Site { site: String, inner: Box<CoordKey> },
}

impl CoordKey {
    pub fn into_block(self, id: u32) -> CoordKey {
        CoordKey::Block {
            id,
            inner: Box::new(self),
        }
    }

    pub fn into_site(self, site: String) -> CoordKey {
        CoordKey::Site {
            site,
            inner: Box::new(self),
        }
    }

    /// Key identifying the Euclidean block this coordinate belongs to, if
    /// any: the key with its axis zeroed.
    fn euclid_group(&self) -> Option<CoordKey> {
        match self {
            CoordKey::Euclid { block, .. } => Some(CoordKey::Euclid {
                block: *block,
                axis: 0,
            }),
            CoordKey::Block { id, inner } => inner.euclid_group().map(|g| g.into_block(*id)),
            CoordKey::Site { site, inner } => {
                inner.euclid_group().map(|g| g.into_site(site.clone()))
            }
            _ => None,
        }
    }
}

impl fmt::Display for CoordKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoordKey::Arc1 { arc, subset, site } => write!(f, "arc1[{arc};{subset:x};{site}]"),
            CoordKey::ArcL2 { arc, subset, site } => write!(f, "arcl2[{arc};{subset:x};{site}]"),
            CoordKey::Arc2 { start, len, subset } => write!(f, "arc2[{start};{len};{subset:x}]"),
            CoordKey::Euclid { block, axis } => write!(f, "e[{block};{axis}]"),
            CoordKey::HalfLine { neg, k, trace } => {
                let side = if *neg { "L" } else { "R" };
                let t: Vec<String> = trace.iter().map(|v| v.to_string()).collect();
                write!(f, "half[{side};{k};{}]", t.join(" "))
            }
            CoordKey::Window { y, r, pattern } => {
                let p: Vec<String> = pattern.iter().map(|(a, b)| format!("{a} {b}")).collect();
                write!(f, "win[{},{};{r};{}]", y.0, y.1, p.join(","))
            }
            CoordKey::TreeEdge { word } => {
                let w: String = word
                    .iter()
                    .map(|&l| {
                        let c = (b'a' + (l.unsigned_abs() - 1)) as char;
                        if l > 0 {
                            c
                        } else {
                            c.to_ascii_uppercase()
                        }
                    })
                    .collect();
                write!(f, "edge[{w}]")
            }
            CoordKey::Block { id, inner } => write!(f, "b{id}/{inner}"),
            CoordKey::Site { site, inner } => write!(f, "site[{site}]/{inner}"),
        }
    }
}

/// Finitely supported vector; stored zeros are dropped eagerly.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SparseVec {
    entries: BTreeMap<CoordKey, f64>,
}

impl SparseVec {
    pub fn new() -> Self {
        SparseVec::default()
    }

    pub fn set(&mut self, key: CoordKey, value: f64) {
        if value == 0.0 {
            self.entries.remove(&key);
        } else {
            self.entries.insert(key, value);
        }
    }

    pub fn add_to(&mut self, key: CoordKey, delta: f64) {
        let v = self.entries.entry(key.clone()).or_insert(0.0);
        *v += delta;
        if *v == 0.0 {
            self.entries.remove(&key);
        }
    }

    pub fn get(&self, key: &CoordKey) -> f64 {
        self.entries.get(key).copied().unwrap_or(0.0)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&CoordKey, f64)> {
        self.entries.iter().map(|(k, &v)| (k, v))
    }

    pub fn scale(&self, c: f64) -> SparseVec {
        let mut out = SparseVec::new();
        for (k, v) in self.iter() {
            out.set(k.clone(), c * v);
        }
        out
    }

    pub fn add(&self, other: &SparseVec) -> SparseVec {
        let mut out = self.clone();
        for (k, v) in other.iter() {
            out.add_to(k.clone(), v);
        }
        out
    }

    pub fn sub(&self, other: &SparseVec) -> SparseVec {
        let mut out = self.clone();
        for (k, v) in other.iter() {
            out.add_to(k.clone(), -v);
        }
        out
    }

    /// Sum of |v|^p with Euclidean blocks contributing |block modulus|^p.
    pub fn norm_p_pow(&self, p: f64) -> f64 {
        let mut total = 0.0;
        let mut blocks: BTreeMap<CoordKey, f64> = BTreeMap::new();
        for (k, v) in self.iter() {
            match k.euclid_group() {
                Some(g) => *blocks.entry(g).or_insert(0.0) += v * v,
                None => total += pow_abs(v, p),
            }
        }
        for (_, sumsq) in blocks {
            total += pow_abs(sumsq.sqrt(), p);
        }
        total
    }

    pub fn norm_p(&self, p: f64) -> f64 {
        self.norm_p_pow(p).powf(1.0 / p)
    }

    /// Namespace every key, for direct sums.
    pub fn into_block(self, id: u32) -> SparseVec {
        let mut out = SparseVec::new();
        for (k, v) in self.entries {
            out.set(k.into_block(id), v);
        }
        out
    }

    pub fn into_site(self, site: String) -> SparseVec {
        let mut out = SparseVec::new();
        for (k, v) in self.entries {
            out.set(k.into_site(site.clone()), v);
        }
        out
    }

    /// Distance in the p-norm.
    pub fn dist_p(&self, other: &SparseVec, p: f64) -> f64 {
        self.sub(other).norm_p(p)
    }

    /// Serialize as a list of {key, value} pairs in key order.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.iter()
                .map(|(k, v)| serde_json::json!({"key": k.to_string(), "value": v}))
                .collect(),
        )
    }
}

#[inline]
fn pow_abs(v: f64, p: f64) -> f64 {
    let a = v.abs();
    if p == 1.0 {
        a
    } else if p == 2.0 {
        a * a
    } else {
        a.powf(p)
    }
}
