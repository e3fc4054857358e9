//! Direct-sum assembly of a wreath-product embedding: an outer embedding of
//! the lamp-metric quotient combined with an element-wise embedding of each
//! lamp value, F(f, x) = phi(f, x) (+) (psi o f). Block p-norms add as
//! ||u (+) v||_p^p = ||u||_p^p + ||v||_p^p.

use crate::error::{Error, Result};
use crate::group::{display_element, Element};
use crate::sparse::SparseVec;

const PHI_BLOCK: u32 = 0;
const PSI_BLOCK: u32 = 1;

/// An element-wise embedding of base-group values, tagged with the exponent
/// its norms are meant for.
pub struct SiteEmbedding<'a> {
    pub p: f64,
    pub map: &'a dyn Fn(&Element) -> Result<SparseVec>,
}

pub fn combine_wreath_embedding(
    phi_out: &SparseVec,
    phi_p: f64,
    psi: &SiteEmbedding<'_>,
    u: &Element,
    p: f64,
) -> Result<SparseVec> {
    if (phi_p - p).abs() > 1e-12 || (psi.p - p).abs() > 1e-12 {
        return Err(Error::InvalidParams(format!(
            "block exponents disagree: phi at {phi_p}, psi at {}, direct sum at {p}",
            psi.p
        )));
    }
    let w = match u {
        Element::Wreath(w) => w,
        _ => return Err(Error::KindMismatch("expected a wreath element".into())),
    };
    let mut out = phi_out.clone().into_block(PHI_BLOCK);
    for (site, value) in &w.lamps {
        let embedded = (psi.map)(value)?;
        let tagged = embedded
            .into_site(display_element(site))
            .into_block(PSI_BLOCK);
        out = out.add(&tagged);
    }
    Ok(out)
}

/// psi = identity embedding of Z into a single scalar coordinate.
pub fn identity_line_embedding(e: &Element) -> Result<SparseVec> {
    match e {
        Element::Int(v) => {
            let mut out = SparseVec::new();
            out.set(
                crate::sparse::CoordKey::Euclid { block: 48, axis: 0 },
                *v as f64,
            );
            Ok(out)
        }
        _ => Err(Error::KindMismatch("identity line embedding wants integers".into())),
    }
}
