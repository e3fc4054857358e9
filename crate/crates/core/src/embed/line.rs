//! The half-line l_1 embedding of C_2 wr Z: one scalar block carrying the
//! cursor plus unit vectors indexed by half-lines [k, inf) and (-inf, k]
//! together with the lamp trace on them. Only differences from the base
//! point (empty lamps, cursor 0) are representable, and those are finite.

use crate::sparse::{CoordKey, SparseVec};

const LINE_SCALAR_BLOCK: u8 = 16;

/// F(x, j) - F(empty, 0), with x the set of lit lamps.
pub fn embed_line_l1(x: &[i64], j: i64) -> SparseVec {
    let mut lamps: Vec<i64> = x.to_vec();
    lamps.sort_unstable();
    lamps.dedup();
    let mut v = SparseVec::new();
    v.set(
        CoordKey::Euclid {
            block: LINE_SCALAR_BLOCK,
            axis: 0,
        },
        j as f64,
    );

    // right half-lines [k, inf): present for k >= j, base term for k >= 0
    let lo = j.min(0);
    let hi_r = {
        let ind_hi = j.max(0) - 1;
        match lamps.last() {
            Some(&mx) => ind_hi.max(mx),
            None => ind_hi,
        }
    };
    for k in lo..=hi_r {
        let trace: Vec<i64> = lamps.iter().copied().filter(|&z| z >= k).collect();
        if k >= j {
            v.add_to(
                CoordKey::HalfLine {
                    neg: false,
                    k,
                    trace,
                },
                1.0,
            );
        }
        if k >= 0 {
            v.add_to(
                CoordKey::HalfLine {
                    neg: false,
                    k,
                    trace: Vec::new(),
                },
                -1.0,
            );
        }
    }

    // left half-lines (-inf, k]: present for k <= j, base term for k <= 0
    let hi = j.max(0);
    let lo_l = {
        let ind_lo = j.min(0) + 1;
        match lamps.first() {
            Some(&mn) => ind_lo.min(mn),
            None => ind_lo,
        }
    };
    for k in lo_l..=hi {
        let trace: Vec<i64> = lamps.iter().copied().filter(|&z| z <= k).collect();
        if k <= j {
            v.add_to(
                CoordKey::HalfLine {
                    neg: true,
                    k,
                    trace,
                },
                1.0,
            );
        }
        if k <= 0 {
            v.add_to(
                CoordKey::HalfLine {
                    neg: true,
                    k,
                    trace: Vec::new(),
                },
                -1.0,
            );
        }
    }
    v
}
