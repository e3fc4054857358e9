//! Geodesic edge-indicator embedding of a free group into l_p, and the
//! left-translation action on tree-edge coordinates that makes it a
//! 1-cocycle: f(xy) = pi(x) f(y) + f(x) exactly, in integer arithmetic.
//!
//! Each undirected tree edge {u, us} is keyed by its endpoint farther from
//! the identity and carries the reference orientation pointing away from it.
//! Translating an edge may reverse that orientation, which flips the sign.

use crate::error::{Error, Result};
use crate::sparse::{CoordKey, SparseVec};

/// Reduced concatenation of two words.
pub fn reduce_concat(x: &[i8], y: &[i8]) -> Vec<i8> {
    let mut out: Vec<i8> = Vec::with_capacity(x.len() + y.len());
    for &l in x.iter().chain(y.iter()) {
        if out.last() == Some(&-l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

/// f(w): +1 on every edge of the geodesic from the identity to w.
pub fn tree_embedding(w: &[i8]) -> SparseVec {
    let mut v = SparseVec::new();
    for len in 1..=w.len() {
        v.set(
            CoordKey::TreeEdge {
                word: w[..len].to_vec(),
            },
            1.0,
        );
    }
    v
}

/// pi(x) applied to a vector supported on tree edges: relabel each edge
/// {q', q} to {xq', xq} and flip the sign when translation reverses the
/// away-from-root orientation.
pub fn tree_translate(x: &[i8], v: &SparseVec) -> Result<SparseVec> {
    let mut out = SparseVec::new();
    for (key, c) in v.iter() {
        let q = match key {
            CoordKey::TreeEdge { word } => word,
            _ => {
                return Err(Error::KindMismatch(
                    "tree translation applies only to tree-edge coordinates".into(),
                ))
            }
        };
        if q.is_empty() {
            return Err(Error::KindMismatch("empty word cannot label an edge".into()));
        }
        let parent = &q[..q.len() - 1];
        let xq = reduce_concat(x, q);
        let xparent = reduce_concat(x, parent);
        if xq.len() > xparent.len() {
            out.add_to(CoordKey::TreeEdge { word: xq }, c);
        } else {
            out.add_to(CoordKey::TreeEdge { word: xparent }, -c);
        }
    }
    Ok(out)
}

/// Tree distance between two words: |x| + |y| - 2 |common prefix|.
pub fn tree_distance(x: &[i8], y: &[i8]) -> u64 {
    let common = x.iter().zip(y.iter()).take_while(|(a, b)| a == b).count();
    (x.len() + y.len() - 2 * common) as u64
}
