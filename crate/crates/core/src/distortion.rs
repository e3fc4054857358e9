//! Distortion measurements for (point sample, embedding) pairs: Lipschitz
//! constant, compression constant, their ratio, and a fitted lower-envelope
//! compression exponent. Exact brute force on small cyclic lamplighters.

use serde::Serialize;

use crate::embed::CycleEmbedding;
use crate::error::{Error, Result};
use crate::group::{display_element, Element, GroupSpec, WreathElement};
use crate::metric::wreath_norm_exact;
use crate::rng::mix64;
use crate::sparse::SparseVec;
use crate::stats::least_squares;

/// Above this many pairs, a deterministic subsample is used.
const PAIR_CAP: usize = 100_000;

#[derive(Debug, Clone, Serialize)]
pub struct DistortionReport {
    pub pair_count: usize,
    /// max ||f(u) - f(v)|| / d(u, v)
    pub lipschitz: f64,
    /// min ||f(u) - f(v)|| / d(u, v)
    pub compression: f64,
    pub distortion: f64,
    /// lower-envelope exponent from the bin-min fit
    pub alpha_hat: f64,
    pub bins: usize,
    pub residual: f64,
    /// (distance, embedded distance) rows for CSV output
    #[serde(skip)]
    pub samples: Vec<(String, f64, f64)>,
}

impl DistortionReport {
    pub fn csv_rows(&self) -> Vec<Vec<String>> {
        self.samples
            .iter()
            .map(|(id, d, ed)| vec![id.clone(), format!("{d}"), format!("{ed}")])
            .collect()
    }
}

/// Lower-envelope exponent: bin distances >= 2 by floor(log2), take the
/// minimal embedded distance per bin, and fit log(min) against log(distance
/// at the minimum). Needs at least 3 nonempty bins.
pub fn compression_exponent_fit(samples: &[(f64, f64)]) -> Result<(f64, f64)> {
    let mut bins: std::collections::BTreeMap<i32, (f64, f64)> = std::collections::BTreeMap::new();
    for &(d, ed) in samples {
        if d < 2.0 || ed <= 0.0 {
            continue;
        }
        let b = d.log2().floor() as i32;
        let entry = bins.entry(b).or_insert((d, ed));
        if ed < entry.1 {
            *entry = (d, ed);
        }
    }
    if bins.len() < 3 {
        return Err(Error::TooFewBins {
            needed: 3,
            got: bins.len(),
        });
    }
    let pts: Vec<(f64, f64)> = bins.values().map(|&(d, ed)| (d.ln(), ed.ln())).collect();
    let fit = least_squares(&pts);
    Ok((fit.slope, fit.residual))
}

fn finish_report(samples: Vec<(String, f64, f64)>) -> Result<DistortionReport> {
    let mut lipschitz: f64 = 0.0;
    let mut compression = f64::INFINITY;
    for &(_, d, ed) in &samples {
        if d > 0.0 {
            let ratio = ed / d;
            lipschitz = lipschitz.max(ratio);
            compression = compression.min(ratio);
        }
    }
    if !lipschitz.is_finite() || lipschitz == 0.0 {
        return Err(Error::DegenerateSample);
    }
    let fit_input: Vec<(f64, f64)> = samples.iter().map(|&(_, d, ed)| (d, ed)).collect();
    let (alpha_hat, residual, bins) = match compression_exponent_fit(&fit_input) {
        Ok((a, r)) => {
            let nbins = fit_input
                .iter()
                .filter(|(d, ed)| *d >= 2.0 && *ed > 0.0)
                .map(|(d, _)| d.log2().floor() as i32)
                .collect::<std::collections::BTreeSet<_>>()
                .len();
            (a, r, nbins)
        }
        Err(_) => (f64::NAN, f64::NAN, 0),
    };
    Ok(DistortionReport {
        pair_count: samples.len(),
        lipschitz,
        compression,
        distortion: lipschitz / compression,
        alpha_hat,
        bins,
        residual,
        samples,
    })
}

/// Report over all unordered pairs of `points` (deterministically
/// subsampled by pair-content hash past the cap). Pairs at distance zero
/// between distinct points are rejected only through the degenerate-sample
/// check; zero-distance pairs are excluded from the ratio statistics.
pub fn pairwise_report(
    points: &[Element],
    dist: &dyn Fn(&Element, &Element) -> Result<f64>,
    emb: &dyn Fn(&Element) -> Result<SparseVec>,
    p: f64,
    seed: u64,
) -> Result<DistortionReport> {
    if points.len() < 2 {
        return Err(Error::DegenerateSample);
    }
    let total_pairs = points.len() * (points.len() - 1) / 2;
    let keep_num = PAIR_CAP.min(total_pairs) as u64;
    let keep_den = total_pairs as u64;

    let embedded: Vec<SparseVec> = points.iter().map(emb).collect::<Result<_>>()?;
    let names: Vec<String> = points.iter().map(display_element).collect();

    let mut samples = Vec::new();
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            if keep_num < keep_den {
                // deterministic content hash, invariant under input order
                let (a, b) = if names[i] <= names[j] {
                    (&names[i], &names[j])
                } else {
                    (&names[j], &names[i])
                };
                let h = mix64(seed, string_hash(a).wrapping_mul(3).wrapping_add(string_hash(b)));
                if h % keep_den >= keep_num {
                    continue;
                }
            }
            let d = dist(&points[i], &points[j])?;
            if d == 0.0 {
                continue;
            }
            let ed = embedded[i].dist_p(&embedded[j], p);
            samples.push((format!("{}|{}", names[i], names[j]), d, ed));
        }
    }
    finish_report(samples)
}

fn string_hash(s: &str) -> u64 {
    let mut h = 0xcbf29ce484222325u64;
    for b in s.as_bytes() {
        h ^= u64::from(*b);
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

/// Exact distortion of a cycle embedding over the whole group C_2 wr C_n,
/// using the invariance reduction: only pairs (u, identity) are evaluated.
pub fn exact_distortion_small(n: u32, which: &CycleEmbedding) -> Result<DistortionReport> {
    if n > 12 {
        return Err(Error::OutOfRange(format!(
            "full enumeration supports n <= 12, got {n}"
        )));
    }
    which.check_params(n)?;
    let g = GroupSpec::wreath(GroupSpec::cyclic(2), GroupSpec::cyclic(n));
    let mut samples = Vec::with_capacity(((1u64 << n) as usize) * n as usize);
    for x in 0..(1u64 << n) {
        for j in 0..n {
            if x == 0 && j == 0 {
                continue;
            }
            let lamps: Vec<(Element, Element)> = (0..n)
                .filter(|k| x >> k & 1 == 1)
                .map(|k| (Element::Cyclic(k), Element::Cyclic(1)))
                .collect();
            let u = Element::Wreath(Box::new(WreathElement::new(
                lamps,
                Element::Cyclic(j),
                &GroupSpec::cyclic(2),
            )));
            let rho = wreath_norm_exact(&g, &u)? as f64;
            let ed = which.dist_to_base(x, j, n)?;
            samples.push((format!("{}|e", display_element(&u)), rho, ed));
        }
    }
    finish_report(samples)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    #[test]
    fn identity_embedding_of_z_is_isometric() {
        let points: Vec<Element> = (-40i64..=40).map(Element::Int).collect();
        let dist = |a: &Element, b: &Element| -> Result<f64> {
            match (a, b) {
                (Element::Int(x), Element::Int(y)) => Ok((x - y).abs() as f64),
                _ => unreachable!(),
            }
        };
        let emb = |a: &Element| -> Result<SparseVec> {
            crate::embed::identity_line_embedding(a)
        };
        let rep = pairwise_report(&points, &dist, &emb, 1.0, 7).unwrap();
        assert!((rep.distortion - 1.0).abs() < 1e-12);
        assert!((rep.alpha_hat - 1.0).abs() < 1e-12);
        assert!((rep.lipschitz - 1.0).abs() < 1e-12);
    }

    #[test]
    fn fit_recovers_exact_power_laws() {
        let linear: Vec<(f64, f64)> = (2..1026).map(|i| (i as f64, i as f64)).collect();
        let (slope, _) = compression_exponent_fit(&linear).unwrap();
        assert!((slope - 1.0).abs() < 1e-12);

        let sqrt: Vec<(f64, f64)> = (2..1026).map(|i| (i as f64, (i as f64).sqrt())).collect();
        let (slope, _) = compression_exponent_fit(&sqrt).unwrap();
        assert!((slope - 0.5).abs() < 0.02);
    }

    #[test]
    fn fit_needs_three_bins() {
        let narrow: Vec<(f64, f64)> = (2..4).map(|i| (i as f64, i as f64)).collect();
        assert!(matches!(
            compression_exponent_fit(&narrow),
            Err(Error::TooFewBins { .. })
        ));
    }

    #[test]
    fn free_group_tree_samples_fit_square_root() {
        // walk samples in F_2 embedded by the tree map at p = 2:
        // ||f(x) - f(y)||_2 = d^{1/2}, so the envelope slope is 1/2
        let mut rng = SplitMix64::new(17);
        let mut samples = Vec::new();
        for _ in 0..400 {
            let mut w: Vec<i8> = Vec::new();
            let len = rng.uniform(64) + 2;
            for _ in 0..len {
                let mut l = (rng.uniform(2) + 1) as i8;
                if rng.bernoulli() {
                    l = -l;
                }
                if w.last() == Some(&-l) {
                    w.pop();
                } else {
                    w.push(l);
                }
            }
            let d = w.len() as f64;
            if d < 1.0 {
                continue;
            }
            let ed = crate::embed::tree_embedding(&w).norm_p(2.0);
            samples.push((d, ed));
        }
        let (slope, _) = compression_exponent_fit(&samples).unwrap();
        assert!((slope - 0.5).abs() <= 0.05, "slope {slope}");
    }

    #[test]
    fn exact_distortion_of_first_embedding_small_n() {
        let rep = exact_distortion_small(6, &CycleEmbedding::First).unwrap();
        assert_eq!(rep.pair_count, 6 * (1 << 6) - 1);
        assert!(rep.distortion <= 16.0, "distortion {}", rep.distortion);
        // degenerate smallest n still produces a report
        let rep3 = exact_distortion_small(3, &CycleEmbedding::First).unwrap();
        assert!(rep3.distortion.is_finite());
    }

    #[test]
    fn l2_embedding_envelope_exponent() {
        // frozen from the exhaustive sweep: at n = 6, s = 0.75 the bin-min
        // envelope fit gives 0.4296 (three log2 bins; the diameter region
        // saturates the top bin, so the measurable slope sits well below s).
        let rep = exact_distortion_small(6, &CycleEmbedding::L2 { s: 0.75 }).unwrap();
        assert!(
            (rep.alpha_hat - 0.4296).abs() < 1e-3,
            "alpha_hat {}",
            rep.alpha_hat
        );
        assert!(rep.alpha_hat > 0.0 && rep.alpha_hat < 1.2);
        // Lipschitz side stays bounded across n
        let rep9 = exact_distortion_small(9, &CycleEmbedding::L2 { s: 0.75 }).unwrap();
        assert!(rep9.lipschitz.is_finite());
        assert!(rep9.lipschitz / rep.lipschitz < 2.0 && rep.lipschitz / rep9.lipschitz < 2.0);
    }

    #[test]
    fn report_invariant_under_permutation() {
        let points: Vec<Element> = (-15i64..=15).map(Element::Int).collect();
        let mut shuffled = points.clone();
        shuffled.reverse();
        shuffled.swap(3, 17);
        let dist = |a: &Element, b: &Element| -> Result<f64> {
            match (a, b) {
                (Element::Int(x), Element::Int(y)) => Ok((x - y).abs() as f64),
                _ => unreachable!(),
            }
        };
        let emb = |a: &Element| -> Result<SparseVec> {
            match a {
                Element::Int(v) => {
                    let mut out = SparseVec::new();
                    out.set(crate::sparse::CoordKey::Euclid { block: 0, axis: 0 }, 2.0 * *v as f64);
                    Ok(out)
                }
                _ => unreachable!(),
            }
        };
        let r1 = pairwise_report(&points, &dist, &emb, 2.0, 3).unwrap();
        let r2 = pairwise_report(&shuffled, &dist, &emb, 2.0, 3).unwrap();
        assert_eq!(r1.pair_count, r2.pair_count);
        assert_eq!(r1.lipschitz, r2.lipschitz);
        assert_eq!(r1.compression, r2.compression);
        assert_eq!(r1.alpha_hat, r2.alpha_hat);
    }

    #[test]
    fn scaling_doubles_constants_but_not_shape() {
        let points: Vec<Element> = (-20i64..=20).map(Element::Int).collect();
        let dist = |a: &Element, b: &Element| -> Result<f64> {
            match (a, b) {
                (Element::Int(x), Element::Int(y)) => Ok((x - y).abs() as f64),
                _ => unreachable!(),
            }
        };
        let emb1 = |a: &Element| crate::embed::identity_line_embedding(a);
        let emb2 = |a: &Element| -> Result<SparseVec> {
            Ok(crate::embed::identity_line_embedding(a)?.scale(2.0))
        };
        let r1 = pairwise_report(&points, &dist, &emb1, 1.0, 9).unwrap();
        let r2 = pairwise_report(&points, &dist, &emb2, 1.0, 9).unwrap();
        assert!((r2.lipschitz - 2.0 * r1.lipschitz).abs() < 1e-12);
        assert!((r2.compression - 2.0 * r1.compression).abs() < 1e-12);
        assert!((r2.distortion - r1.distortion).abs() < 1e-12);
        assert!((r2.alpha_hat - r1.alpha_hat).abs() < 1e-12);
    }

    #[test]
    fn all_identical_points_is_an_error() {
        let points = vec![Element::Int(5), Element::Int(5), Element::Int(5)];
        let dist = |_: &Element, _: &Element| -> Result<f64> { Ok(0.0) };
        let emb = |a: &Element| crate::embed::identity_line_embedding(a);
        assert!(pairwise_report(&points, &dist, &emb, 1.0, 1).is_err());
    }
}
