//! Embedding of C_2 wr Z^2 into R^2 (+) l_2: the cursor block plus window
//! unit vectors v_{y, r, pattern} weighted by
//! max(1 - 2r/D, 0) / D^{3/2 - 2 alpha} with D = ||x - y||_inf. Terms vanish
//! once D >= 2(||x||_inf + max_supp + 1), which keeps the sum finite.

use crate::error::{Error, Result};
use crate::sparse::{CoordKey, SparseVec};

const PLANE_CURSOR_BLOCK: u8 = 32;

pub fn embed_z2(lamps: &[(i64, i64)], x: (i64, i64), alpha: f64) -> Result<SparseVec> {
    if !(alpha > 0.0 && alpha < 0.5) {
        return Err(Error::OutOfRange(format!(
            "plane embedding needs alpha in (0, 1/2), got {alpha}"
        )));
    }
    let mut supp: Vec<(i64, i64)> = lamps.to_vec();
    supp.sort_unstable();
    supp.dedup();

    let mut v = SparseVec::new();
    v.set(
        CoordKey::Euclid {
            block: PLANE_CURSOR_BLOCK,
            axis: 0,
        },
        x.0 as f64,
    );
    v.set(
        CoordKey::Euclid {
            block: PLANE_CURSOR_BLOCK,
            axis: 1,
        },
        x.1 as f64,
    );
    if supp.is_empty() {
        return Ok(v);
    }

    let norm_x = x.0.abs().max(x.1.abs());
    let max_supp = supp
        .iter()
        .map(|&(a, b)| a.abs().max(b.abs()))
        .max()
        .unwrap_or(0);
    let r_star = 2 * (norm_x + max_supp + 1);
    let exponent = 1.5 - 2.0 * alpha;

    for dy0 in -r_star..=r_star {
        for dy1 in -r_star..=r_star {
            if dy0 == 0 && dy1 == 0 {
                continue;
            }
            let y = (x.0 + dy0, x.1 + dy1);
            let d_inf = dy0.abs().max(dy1.abs());
            let r_min = supp
                .iter()
                .map(|&(a, b)| (a - y.0).abs().max((b - y.1).abs()))
                .min()
                .unwrap();
            // weight max(1 - 2r/D, 0) is positive only for 2r < D
            let r_max = (d_inf - 1) / 2;
            for r in r_min..=r_max {
                let pattern: Vec<(i64, i64)> = supp
                    .iter()
                    .copied()
                    .filter(|&(a, b)| (a - y.0).abs().max((b - y.1).abs()) <= r)
                    .collect();
                let weight = (1.0 - 2.0 * r as f64 / d_inf as f64) / (d_inf as f64).powf(exponent);
                v.set(
                    CoordKey::Window {
                        y,
                        r: r as u32,
                        pattern,
                    },
                    weight,
                );
            }
        }
    }
    Ok(v)
}
