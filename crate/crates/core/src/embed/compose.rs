//! Compression-exponent algebra for wreath products: given proxies
//! a (base exponent), b (lamp-metric exponent), and p, the wreath product's
//! exponent is min{a, b} when min{a, b} p <= 1, and otherwise
//! min{b, a b p / (a p + b p - 1)}. Iterating from a = b = 1 at p = 2
//! produces 1, 2/3, 4/7, 8/15, ...

use num_rational::Ratio;
use num_traits::One;

use crate::error::{Error, Result};

pub fn compression_composition(a: f64, b: f64, p: f64) -> f64 {
    let m = a.min(b);
    if m * p <= 1.0 {
        m
    } else {
        b.min(a * b * p / (a * p + b * p - 1.0))
    }
}

pub type Rat = Ratio<i64>;

pub fn compression_composition_rat(a: Rat, b: Rat, p: Rat) -> Rat {
    let m = a.min(b);
    if m * p <= Rat::one() {
        m
    } else {
        let combined = a * b * p / (a * p + b * p - Rat::one());
        b.min(combined)
    }
}

/// alpha*(Z_(k)) by iterating the composition with b = 1, p = 2 from
/// alpha*(Z) = 1; equals 1/(2 - 2^{1-k}).
pub fn iterated_line_alpha(k: u32) -> Result<Rat> {
    if k == 0 {
        return Err(Error::OutOfRange("iterated wreath depth must be >= 1".into()));
    }
    let mut alpha = Rat::one();
    for _ in 1..k {
        alpha = compression_composition_rat(alpha, Rat::one(), Rat::from_integer(2));
    }
    Ok(alpha)
}

/// Parse "2/3", "1", or "0.5" into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rat> {
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let n: i64 = num
            .trim()
            .parse()
            .map_err(|e| Error::Parse(format!("bad numerator {num:?}: {e}")))?;
        let d: i64 = den
            .trim()
            .parse()
            .map_err(|e| Error::Parse(format!("bad denominator {den:?}: {e}")))?;
        if d == 0 {
            return Err(Error::Parse("zero denominator".into()));
        }
        return Ok(Rat::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let scale = 10i64
            .checked_pow(frac.len() as u32)
            .ok_or_else(|| Error::Parse("too many decimal digits".into()))?;
        let i: i64 = if int.is_empty() {
            0
        } else {
            int.parse()
                .map_err(|e| Error::Parse(format!("bad number {s:?}: {e}")))?
        };
        let f: i64 = frac
            .parse()
            .map_err(|e| Error::Parse(format!("bad number {s:?}: {e}")))?;
        let sign = if s.starts_with('-') { -1 } else { 1 };
        return Ok(Rat::new(i * scale + sign * f, scale));
    }
    let n: i64 = s
        .parse()
        .map_err(|e| Error::Parse(format!("bad number {s:?}: {e}")))?;
    Ok(Rat::from_integer(n))
}

pub fn validate_params(a: f64, b: f64, p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&a) || !(0.0..=1.0).contains(&b) {
        return Err(Error::OutOfRange(format!(
            "exponents must lie in [0,1], got a={a}, b={b}"
        )));
    }
    if p < 1.0 {
        return Err(Error::OutOfRange(format!("p must be >= 1, got {p}")));
    }
    Ok(())
}
