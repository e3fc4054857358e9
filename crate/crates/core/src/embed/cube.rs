//! The Hamming cube inside Z wr Z: a sign vector of length n maps to lamps
//! of value +-n at positions n+1..2n with the cursor at 0. Antipodal pairs
//! sit at distance 2n^2 + 4n and single-coordinate flips at 2n + 2(n+j),
//! both exact in the wreath word metric.

use crate::error::{Error, Result};
use crate::group::{Element, GroupSpec, WreathElement};

pub fn cube_to_zwrz(eps: &[i8]) -> Result<Element> {
    if eps.iter().any(|&e| e != 1 && e != -1) {
        return Err(Error::OutOfRange("cube coordinates must be +-1".into()));
    }
    let n = eps.len() as i64;
    let lamps: Vec<(Element, Element)> = eps
        .iter()
        .enumerate()
        .map(|(j, &e)| {
            (
                Element::Int(n + 1 + j as i64),
                Element::Int(i64::from(e) * n),
            )
        })
        .collect();
    Ok(Element::Wreath(Box::new(WreathElement::new(
        lamps,
        Element::Int(0),
        &GroupSpec::Integers,
    ))))
}

pub fn zwrz() -> GroupSpec {
    GroupSpec::wreath(GroupSpec::Integers, GroupSpec::Integers)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::wreath_distance_exact;

    #[test]
    fn small_cube_image() {
        let e = cube_to_zwrz(&[1, 1]).unwrap();
        let g = zwrz();
        let expect = crate::group::parse_element(&g, "wreath{3:2,4:2|cursor=0}").unwrap();
        assert_eq!(e, expect);
    }

    #[test]
    fn rejects_non_signs() {
        assert!(cube_to_zwrz(&[1, 0]).is_err());
    }

    #[test]
    fn diagonal_distance_exact() {
        let g = zwrz();
        for n in [2usize, 4, 8, 12] {
            let eps: Vec<i8> = vec![1; n];
            let neg: Vec<i8> = vec![-1; n];
            let d = wreath_distance_exact(
                &g,
                &cube_to_zwrz(&eps).unwrap(),
                &cube_to_zwrz(&neg).unwrap(),
            )
            .unwrap();
            assert_eq!(d, (2 * n * n + 4 * n) as u64, "n={n}");
        }
    }

    #[test]
    fn edge_distances_exact() {
        let g = zwrz();
        for n in [2usize, 4, 8, 12] {
            let eps: Vec<i8> = vec![1; n];
            for j in 1..=n {
                let mut flipped = eps.clone();
                flipped[j - 1] = -1;
                let d = wreath_distance_exact(
                    &g,
                    &cube_to_zwrz(&eps).unwrap(),
                    &cube_to_zwrz(&flipped).unwrap(),
                )
                .unwrap();
                assert_eq!(d, (2 * n + 2 * (n + j)) as u64, "n={n} j={j}");
                assert!(d >= (4 * n + 2) as u64 && d <= (6 * n) as u64);
            }
        }
    }
}
