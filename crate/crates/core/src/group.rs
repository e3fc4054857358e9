//! Group elements and arithmetic for the concrete groups used everywhere
//! else: cyclic groups, the integers, integer lattices, free groups, and
//! wreath products built from them.
//!
//! Elements are immutable values in canonical form (reduced words, lamp maps
//! with normalized support sorted by a total order on shape elements), so
//! they hash and compare consistently and are safe to deduplicate in BFS.

use std::cmp::Ordering;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// A finitely generated group with its fixed symmetric generating multiset.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub enum GroupSpec {
    /// Z/nZ with generators {1, n-1}.
    Cyclic { n: u32 },
    /// Z with generators {+1, -1}.
    Integers,
    /// Z^d with generators {±e_i}.
    Lattice { dim: usize },
    /// Free group on `rank` letters with the 2*rank standard generators.
    Free { rank: usize },
    /// G wr H with the canonical generators: shape moves and single-lamp
    /// multiplications by base generators at the cursor.
    Wreath {
        base: Box<GroupSpec>,
        shape: Box<GroupSpec>,
    },
    /// G wr H where the base generating set is all of G \ {e}; every lamp
    /// change costs one step. Requires a finite base.
    LampMetric {
        base: Box<GroupSpec>,
        shape: Box<GroupSpec>,
    },
}

/// A group element; the variant must match the owning `GroupSpec`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub enum Element {
    Cyclic(u32),
    Int(i64),
    Lattice(Vec<i64>),
    /// Reduced word; letter k>0 is generator a_k, letter -k its inverse.
    Word(Vec<i8>),
    Wreath(Box<WreathElement>),
}

/// Lamp configuration plus cursor. Lamps are stored as an association list
/// sorted by the total order on shape elements and never map to the base
/// identity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct WreathElement {
    pub lamps: Vec<(Element, Element)>,
    pub cursor: Element,
}

impl WreathElement {
    pub fn new(mut lamps: Vec<(Element, Element)>, cursor: Element, base: &GroupSpec) -> Self {
        let id = base.identity();
        lamps.retain(|(_, v)| *v != id);
        lamps.sort_by(|a, b| compare_elements(&a.0, &b.0));
        lamps.dedup_by(|a, b| a.0 == b.0);
        WreathElement { lamps, cursor }
    }

    pub fn lamp_at(&self, key: &Element) -> Option<&Element> {
        self.lamps
            .binary_search_by(|probe| compare_elements(&probe.0, key))
            .ok()
            .map(|i| &self.lamps[i].1)
    }

    pub fn support(&self) -> impl Iterator<Item = &Element> {
        self.lamps.iter().map(|(k, _)| k)
    }
}

/// Total order on elements: variant, then value (words ordered by length
/// first). Used to keep lamp maps sorted deterministically.
pub fn compare_elements(a: &Element, b: &Element) -> Ordering {
    use Element::*;
    match (a, b) {
        (Cyclic(x), Cyclic(y)) => x.cmp(y),
        (Int(x), Int(y)) => x.cmp(y),
        (Lattice(x), Lattice(y)) => x.cmp(y),
        (Word(x), Word(y)) => x.len().cmp(&y.len()).then_with(|| x.cmp(y)),
        (Wreath(x), Wreath(y)) => compare_elements(&x.cursor, &y.cursor)
            .then_with(|| x.lamps.len().cmp(&y.lamps.len()))
            .then_with(|| {
                for ((ka, va), (kb, vb)) in x.lamps.iter().zip(y.lamps.iter()) {
                    let c = compare_elements(ka, kb).then_with(|| compare_elements(va, vb));
                    if c != Ordering::Equal {
                        return c;
                    }
                }
                Ordering::Equal
            }),
        _ => variant_rank(a).cmp(&variant_rank(b)),
    }
}

fn variant_rank(e: &Element) -> u8 {
    match e {
        Element::Cyclic(_) => 0,
        Element::Int(_) => 1,
        Element::Lattice(_) => 2,
        Element::Word(_) => 3,
        Element::Wreath(_) => 4,
    }
}

impl GroupSpec {
    pub fn cyclic(n: u32) -> Self {
        GroupSpec::Cyclic { n }
    }

    pub fn lattice(dim: usize) -> Self {
        GroupSpec::Lattice { dim }
    }

    pub fn free(rank: usize) -> Self {
        GroupSpec::Free { rank }
    }

    pub fn wreath(base: GroupSpec, shape: GroupSpec) -> Self {
        GroupSpec::Wreath {
            base: Box::new(base),
            shape: Box::new(shape),
        }
    }

    pub fn lamp_metric(base: GroupSpec, shape: GroupSpec) -> Self {
        GroupSpec::LampMetric {
            base: Box::new(base),
            shape: Box::new(shape),
        }
    }

    pub fn identity(&self) -> Element {
        match self {
            GroupSpec::Cyclic { .. } => Element::Cyclic(0),
            GroupSpec::Integers => Element::Int(0),
            GroupSpec::Lattice { dim } => Element::Lattice(vec![0; *dim]),
            GroupSpec::Free { .. } => Element::Word(Vec::new()),
            GroupSpec::Wreath { base, shape } | GroupSpec::LampMetric { base, shape } => {
                Element::Wreath(Box::new(WreathElement::new(
                    Vec::new(),
                    shape.identity(),
                    base,
                )))
            }
        }
    }

    pub fn wreath_parts(&self) -> Option<(&GroupSpec, &GroupSpec)> {
        match self {
            GroupSpec::Wreath { base, shape } | GroupSpec::LampMetric { base, shape } => {
                Some((base, shape))
            }
            _ => None,
        }
    }

    /// Number of elements, if finite.
    pub fn order(&self) -> Option<u64> {
        match self {
            GroupSpec::Cyclic { n } => Some(u64::from(*n)),
            GroupSpec::Integers | GroupSpec::Lattice { .. } => None,
            GroupSpec::Free { rank } => {
                if *rank == 0 {
                    Some(1)
                } else {
                    None
                }
            }
            GroupSpec::Wreath { base, shape } | GroupSpec::LampMetric { base, shape } => {
                let b = base.order()?;
                let s = shape.order()?;
                b.checked_pow(u32::try_from(s).ok()?).map(|x| x * s)
            }
        }
    }

    /// All elements of a finite group, in canonical order.
    pub fn elements(&self) -> Result<Vec<Element>> {
        match self {
            GroupSpec::Cyclic { n } => Ok((0..*n).map(Element::Cyclic).collect()),
            GroupSpec::Wreath { base, shape } | GroupSpec::LampMetric { base, shape } => {
                let shape_elems = shape.elements()?;
                let base_elems = base.elements()?;
                let id = base.identity();
                let mut out = Vec::new();
                // odometer over base^shape
                let k = shape_elems.len();
                let b = base_elems.len();
                let mut idx = vec![0usize; k];
                loop {
                    for cursor in &shape_elems {
                        let lamps: Vec<(Element, Element)> = shape_elems
                            .iter()
                            .zip(idx.iter())
                            .filter(|(_, &i)| base_elems[i] != id)
                            .map(|(kk, &i)| (kk.clone(), base_elems[i].clone()))
                            .collect();
                        out.push(Element::Wreath(Box::new(WreathElement::new(
                            lamps,
                            cursor.clone(),
                            base,
                        ))));
                    }
                    let mut carry = 0;
                    while carry < k {
                        idx[carry] += 1;
                        if idx[carry] < b {
                            break;
                        }
                        idx[carry] = 0;
                        carry += 1;
                    }
                    if carry == k {
                        break;
                    }
                }
                Ok(out)
            }
            _ => Err(Error::UnsupportedShape(format!(
                "cannot enumerate infinite group {}",
                self.name()
            ))),
        }
    }

    /// The fixed symmetric generating multiset.
    pub fn generators(&self) -> Result<Vec<Element>> {
        match self {
            GroupSpec::Cyclic { n } => match n {
                0 | 1 => Ok(Vec::new()),
                2 => Ok(vec![Element::Cyclic(1)]),
                _ => Ok(vec![Element::Cyclic(1), Element::Cyclic(n - 1)]),
            },
            GroupSpec::Integers => Ok(vec![Element::Int(1), Element::Int(-1)]),
            GroupSpec::Lattice { dim } => {
                let mut out = Vec::with_capacity(2 * dim);
                for i in 0..*dim {
                    for sign in [1i64, -1] {
                        let mut v = vec![0; *dim];
                        v[i] = sign;
                        out.push(Element::Lattice(v));
                    }
                }
                Ok(out)
            }
            GroupSpec::Free { rank } => {
                let mut out = Vec::with_capacity(2 * rank);
                for k in 1..=*rank {
                    out.push(Element::Word(vec![k as i8]));
                    out.push(Element::Word(vec![-(k as i8)]));
                }
                Ok(out)
            }
            GroupSpec::Wreath { base, shape } => {
                wreath_generators(base, shape, &base.generators()?)
            }
            GroupSpec::LampMetric { base, shape } => {
                if base.order().is_none() {
                    return Err(Error::InfiniteBase);
                }
                let id = base.identity();
                let non_identity: Vec<Element> =
                    base.elements()?.into_iter().filter(|e| *e != id).collect();
                wreath_generators(base, shape, &non_identity)
            }
        }
    }

    /// Does the element structurally belong to this group?
    pub fn contains(&self, e: &Element) -> bool {
        match (self, e) {
            (GroupSpec::Cyclic { n }, Element::Cyclic(v)) => v < n,
            (GroupSpec::Integers, Element::Int(_)) => true,
            (GroupSpec::Lattice { dim }, Element::Lattice(v)) => v.len() == *dim,
            (GroupSpec::Free { rank }, Element::Word(w)) => {
                w.iter().all(|&l| l != 0 && (l.unsigned_abs() as usize) <= *rank)
                    && reduced(w)
            }
            (GroupSpec::Wreath { base, shape }, Element::Wreath(w))
            | (GroupSpec::LampMetric { base, shape }, Element::Wreath(w)) => {
                shape.contains(&w.cursor)
                    && w.lamps.iter().all(|(k, v)| {
                        shape.contains(k) && base.contains(v) && *v != base.identity()
                    })
            }
            _ => false,
        }
    }

    fn check(&self, e: &Element) -> Result<()> {
        if self.contains(e) {
            Ok(())
        } else {
            Err(Error::KindMismatch(format!(
                "element {} does not belong to {}",
                display_element(e),
                self.name()
            )))
        }
    }

    /// Group product a*b in canonical form.
    pub fn multiply(&self, a: &Element, b: &Element) -> Result<Element> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.multiply_unchecked(a, b))
    }

    pub(crate) fn multiply_unchecked(&self, a: &Element, b: &Element) -> Element {
        match (self, a, b) {
            (GroupSpec::Cyclic { n }, Element::Cyclic(x), Element::Cyclic(y)) => {
                Element::Cyclic((x + y) % n)
            }
            (GroupSpec::Integers, Element::Int(x), Element::Int(y)) => Element::Int(x + y),
            (GroupSpec::Lattice { .. }, Element::Lattice(x), Element::Lattice(y)) => {
                Element::Lattice(x.iter().zip(y).map(|(p, q)| p + q).collect())
            }
            (GroupSpec::Free { .. }, Element::Word(x), Element::Word(y)) => {
                Element::Word(concat_reduce(x, y))
            }
            (
                GroupSpec::Wreath { base, shape } | GroupSpec::LampMetric { base, shape },
                Element::Wreath(u),
                Element::Wreath(v),
            ) => {
                // (f,x)(g,y) = (z -> f(z) g(x^{-1} z), x y)
                let mut lamps = u.lamps.clone();
                let base_id = base.identity();
                for (k, gv) in &v.lamps {
                    let z = shape.multiply_unchecked(&u.cursor, k);
                    let existing = u.lamp_at(&z).cloned().unwrap_or_else(|| base_id.clone());
                    let merged = base.multiply_unchecked(&existing, gv);
                    match lamps.binary_search_by(|probe| compare_elements(&probe.0, &z)) {
                        Ok(i) => {
                            if merged == base_id {
                                lamps.remove(i);
                            } else {
                                lamps[i].1 = merged;
                            }
                        }
                        Err(i) => {
                            if merged != base_id {
                                lamps.insert(i, (z, merged));
                            }
                        }
                    }
                }
                let cursor = shape.multiply_unchecked(&u.cursor, &v.cursor);
                Element::Wreath(Box::new(WreathElement { lamps, cursor }))
            }
            _ => unreachable!("kinds checked by caller"),
        }
    }

    pub fn inverse(&self, a: &Element) -> Result<Element> {
        self.check(a)?;
        Ok(self.inverse_unchecked(a))
    }

    pub(crate) fn inverse_unchecked(&self, a: &Element) -> Element {
        match (self, a) {
            (GroupSpec::Cyclic { n }, Element::Cyclic(x)) => {
                Element::Cyclic(if *x == 0 { 0 } else { n - x })
            }
            (GroupSpec::Integers, Element::Int(x)) => Element::Int(-x),
            (GroupSpec::Lattice { .. }, Element::Lattice(x)) => {
                Element::Lattice(x.iter().map(|v| -v).collect())
            }
            (GroupSpec::Free { .. }, Element::Word(x)) => {
                Element::Word(x.iter().rev().map(|l| -l).collect())
            }
            (
                GroupSpec::Wreath { base, shape } | GroupSpec::LampMetric { base, shape },
                Element::Wreath(u),
            ) => {
                // (f,x)^{-1} = (z -> f(xz)^{-1}, x^{-1})
                let xinv = shape.inverse_unchecked(&u.cursor);
                let lamps = u
                    .lamps
                    .iter()
                    .map(|(k, v)| {
                        (
                            shape.multiply_unchecked(&xinv, k),
                            base.inverse_unchecked(v),
                        )
                    })
                    .collect();
                Element::Wreath(Box::new(WreathElement::new(lamps, xinv, base)))
            }
            _ => unreachable!("kinds checked by caller"),
        }
    }

    /// Re-normalize a structurally well-formed element (idempotent).
    pub fn canonicalize(&self, a: &Element) -> Element {
        match (self, a) {
            (GroupSpec::Cyclic { n }, Element::Cyclic(x)) => Element::Cyclic(x % n.max(&1)),
            (GroupSpec::Free { .. }, Element::Word(w)) => {
                Element::Word(concat_reduce(&[], w))
            }
            (
                GroupSpec::Wreath { base, shape } | GroupSpec::LampMetric { base, shape },
                Element::Wreath(u),
            ) => {
                let lamps = u
                    .lamps
                    .iter()
                    .map(|(k, v)| (shape.canonicalize(k), base.canonicalize(v)))
                    .collect();
                Element::Wreath(Box::new(WreathElement::new(
                    lamps,
                    shape.canonicalize(&u.cursor),
                    base,
                )))
            }
            _ => a.clone(),
        }
    }

    /// Short registry-style name used in error messages and manifests.
    pub fn name(&self) -> String {
        match self {
            GroupSpec::Cyclic { n } => format!("c{n}"),
            GroupSpec::Integers => "z".into(),
            GroupSpec::Lattice { dim } => format!("z{dim}"),
            GroupSpec::Free { rank } => format!("f{rank}"),
            GroupSpec::Wreath { base, shape } => format!("{}wr{}", base.name(), shape.name()),
            GroupSpec::LampMetric { base, shape } => {
                format!("l[{}]wr{}", base.name(), shape.name())
            }
        }
    }
}

fn wreath_generators(
    base: &GroupSpec,
    shape: &GroupSpec,
    base_gens: &[Element],
) -> Result<Vec<Element>> {
    let mut out = Vec::new();
    for t in shape.generators()? {
        out.push(Element::Wreath(Box::new(WreathElement::new(
            Vec::new(),
            t,
            base,
        ))));
    }
    let e_shape = shape.identity();
    for s in base_gens {
        out.push(Element::Wreath(Box::new(WreathElement::new(
            vec![(e_shape.clone(), s.clone())],
            e_shape.clone(),
            base,
        ))));
    }
    Ok(out)
}

fn reduced(w: &[i8]) -> bool {
    w.windows(2).all(|p| p[0] != -p[1])
}

fn concat_reduce(x: &[i8], y: &[i8]) -> Vec<i8> {
    let mut out: Vec<i8> = Vec::with_capacity(x.len() + y.len());
    for &l in x.iter().chain(y.iter()) {
        if l == 0 {
            continue;
        }
        if out.last() == Some(&-l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

// ---------------------------------------------------------------------------
// textual element syntax
//
//   z:-4            integer
//   c:3             cyclic residue
//   vec:(1,-2)      lattice point
//   word:abA        free word, capitals are inverses, empty word = identity
//   wreath{2:1,5:1|cursor=3}
//                   lamp map and cursor, keys/values in bare form
//
// Printer and parser round-trip exactly.
// ---------------------------------------------------------------------------

pub fn display_element(e: &Element) -> String {
    match e {
        Element::Cyclic(v) => format!("c:{v}"),
        Element::Int(v) => format!("z:{v}"),
        Element::Lattice(_) => format!("vec:{}", bare(e)),
        Element::Word(_) => format!("word:{}", bare(e)),
        Element::Wreath(_) => format!("wreath{}", bare(e)),
    }
}

fn bare(e: &Element) -> String {
    match e {
        Element::Cyclic(v) => v.to_string(),
        Element::Int(v) => v.to_string(),
        Element::Lattice(v) => {
            let inner: Vec<String> = v.iter().map(|x| x.to_string()).collect();
            format!("({})", inner.join(","))
        }
        Element::Word(w) => w
            .iter()
            .map(|&l| {
                let c = (b'a' + (l.unsigned_abs() - 1)) as char;
                if l > 0 {
                    c
                } else {
                    c.to_ascii_uppercase()
                }
            })
            .collect(),
        Element::Wreath(u) => {
            let lamps: Vec<String> = u
                .lamps
                .iter()
                .map(|(k, v)| format!("{}:{}", bare(k), bare(v)))
                .collect();
            format!("{{{}|cursor={}}}", lamps.join(","), bare(&u.cursor))
        }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&display_element(self))
    }
}

pub fn parse_element(g: &GroupSpec, s: &str) -> Result<Element> {
    let s = s.trim();
    let body = match g {
        GroupSpec::Cyclic { .. } => s
            .strip_prefix("c:")
            .ok_or_else(|| Error::Parse(format!("expected c:<residue>, got {s:?}")))?,
        GroupSpec::Integers => s
            .strip_prefix("z:")
            .ok_or_else(|| Error::Parse(format!("expected z:<int>, got {s:?}")))?,
        GroupSpec::Lattice { .. } => s
            .strip_prefix("vec:")
            .ok_or_else(|| Error::Parse(format!("expected vec:(..), got {s:?}")))?,
        GroupSpec::Free { .. } => s
            .strip_prefix("word:")
            .ok_or_else(|| Error::Parse(format!("expected word:<letters>, got {s:?}")))?,
        GroupSpec::Wreath { .. } | GroupSpec::LampMetric { .. } => s
            .strip_prefix("wreath")
            .ok_or_else(|| Error::Parse(format!("expected wreath{{..}}, got {s:?}")))?,
    };
    let e = parse_bare(g, body)?;
    g.check(&e)?;
    Ok(e)
}

fn parse_bare(g: &GroupSpec, s: &str) -> Result<Element> {
    match g {
        GroupSpec::Cyclic { .. } => Ok(Element::Cyclic(
            s.parse::<u32>()
                .map_err(|e| Error::Parse(format!("bad residue {s:?}: {e}")))?,
        )),
        GroupSpec::Integers => Ok(Element::Int(
            s.parse::<i64>()
                .map_err(|e| Error::Parse(format!("bad integer {s:?}: {e}")))?,
        )),
        GroupSpec::Lattice { dim } => {
            let inner = s
                .strip_prefix('(')
                .and_then(|t| t.strip_suffix(')'))
                .ok_or_else(|| Error::Parse(format!("bad tuple {s:?}")))?;
            let parts: Vec<i64> = if inner.is_empty() {
                Vec::new()
            } else {
                inner
                    .split(',')
                    .map(|p| {
                        p.trim()
                            .parse::<i64>()
                            .map_err(|e| Error::Parse(format!("bad coordinate {p:?}: {e}")))
                    })
                    .collect::<Result<_>>()?
            };
            if parts.len() != *dim {
                return Err(Error::Parse(format!(
                    "expected {dim} coordinates, got {}",
                    parts.len()
                )));
            }
            Ok(Element::Lattice(parts))
        }
        GroupSpec::Free { rank } => {
            let mut w = Vec::with_capacity(s.len());
            for c in s.chars() {
                let (base, sign) = if c.is_ascii_lowercase() {
                    (c as u8 - b'a', 1i8)
                } else if c.is_ascii_uppercase() {
                    (c as u8 - b'A', -1i8)
                } else {
                    return Err(Error::Parse(format!("bad letter {c:?} in word")));
                };
                let idx = base as usize + 1;
                if idx > *rank {
                    return Err(Error::Parse(format!(
                        "letter {c:?} outside rank-{rank} alphabet"
                    )));
                }
                w.push(sign * idx as i8);
            }
            Ok(Element::Word(concat_reduce(&[], &w)))
        }
        GroupSpec::Wreath { base, shape } | GroupSpec::LampMetric { base, shape } => {
            let inner = s
                .strip_prefix('{')
                .and_then(|t| t.strip_suffix('}'))
                .ok_or_else(|| Error::Parse(format!("bad wreath literal {s:?}")))?;
            let (lamp_part, cursor_part) = inner
                .rsplit_once('|')
                .ok_or_else(|| Error::Parse("wreath literal needs |cursor=...".into()))?;
            let cursor_str = cursor_part
                .strip_prefix("cursor=")
                .ok_or_else(|| Error::Parse("wreath literal needs cursor=".into()))?;
            let cursor = parse_bare(shape, cursor_str)?;
            let mut lamps = Vec::new();
            for item in split_top_level(lamp_part) {
                let item = item.trim();
                if item.is_empty() {
                    continue;
                }
                let (k, v) = split_lamp_entry(item)
                    .ok_or_else(|| Error::Parse(format!("bad lamp entry {item:?}")))?;
                lamps.push((parse_bare(shape, k)?, parse_bare(base, v)?));
            }
            Ok(Element::Wreath(Box::new(WreathElement::new(
                lamps, cursor, base,
            ))))
        }
    }
}

/// Fixed registry of group names for the CLI and FFI surface:
/// z, z2, cn:<n>, f2, c2wrz, zwrz, c2wrcn:<n>, zwrz2, iterated:<k>, plus
/// lamp-metric variants lcnwrz:<m> and lcnwrcn:<m>:<n>.
pub fn group_from_name(name: &str) -> Result<GroupSpec> {
    let parts: Vec<&str> = name.split(':').collect();
    let parse_u32 = |s: &str| -> Result<u32> {
        s.parse()
            .map_err(|e| Error::Parse(format!("bad number {s:?} in group name: {e}")))
    };
    match parts.as_slice() {
        ["z"] => Ok(GroupSpec::Integers),
        ["z2"] => Ok(GroupSpec::lattice(2)),
        ["f2"] => Ok(GroupSpec::free(2)),
        ["cn", n] => Ok(GroupSpec::cyclic(parse_u32(n)?)),
        ["c2wrz"] => Ok(GroupSpec::wreath(GroupSpec::cyclic(2), GroupSpec::Integers)),
        ["zwrz"] => Ok(GroupSpec::wreath(GroupSpec::Integers, GroupSpec::Integers)),
        ["c2wrcn", n] => Ok(GroupSpec::wreath(
            GroupSpec::cyclic(2),
            GroupSpec::cyclic(parse_u32(n)?),
        )),
        ["zwrz2"] => Ok(GroupSpec::wreath(GroupSpec::Integers, GroupSpec::lattice(2))),
        ["iterated", k] => {
            let k = parse_u32(k)?;
            if k == 0 || k > 8 {
                return Err(Error::Parse("iterated depth must be 1..=8".into()));
            }
            let mut g = GroupSpec::Integers;
            for _ in 1..k {
                g = GroupSpec::wreath(g, GroupSpec::Integers);
            }
            Ok(g)
        }
        ["lcnwrz", m] => Ok(GroupSpec::lamp_metric(
            GroupSpec::cyclic(parse_u32(m)?),
            GroupSpec::Integers,
        )),
        ["lcnwrcn", m, n] => Ok(GroupSpec::lamp_metric(
            GroupSpec::cyclic(parse_u32(m)?),
            GroupSpec::cyclic(parse_u32(n)?),
        )),
        _ => Err(Error::Parse(format!(
            "unknown group {name:?}; known: z, z2, cn:<n>, f2, c2wrz, zwrz, c2wrcn:<n>, zwrz2, iterated:<k>, lcnwrz:<m>, lcnwrcn:<m>:<n>"
        ))),
    }
}

/// Split a lamp list on commas that are not nested inside () or {}.
fn split_top_level(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0usize;
    for (i, c) in s.char_indices() {
        match c {
            '(' | '{' => depth += 1,
            ')' | '}' => depth -= 1,
            ',' if depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

/// Split `key:value` on the first top-level colon.
fn split_lamp_entry(s: &str) -> Option<(&str, &str)> {
    let mut depth = 0i32;
    for (i, c) in s.char_indices() {
        match c {
            '(' | '{' => depth += 1,
            ')' | '}' => depth -= 1,
            ':' if depth == 0 => return Some((&s[..i], &s[i + 1..])),
            _ => {}
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    fn c2_wr_c4() -> GroupSpec {
        GroupSpec::wreath(GroupSpec::cyclic(2), GroupSpec::cyclic(4))
    }

    fn z_wr_z() -> GroupSpec {
        GroupSpec::wreath(GroupSpec::Integers, GroupSpec::Integers)
    }

    #[test]
    fn identity_is_neutral_everywhere() {
        for g in [
            GroupSpec::Integers,
            GroupSpec::cyclic(5),
            GroupSpec::lattice(3),
            GroupSpec::free(2),
            c2_wr_c4(),
            z_wr_z(),
        ] {
            let e = g.identity();
            assert_eq!(g.multiply(&e, &e).unwrap(), e);
            for s in g.generators().unwrap() {
                assert_eq!(g.multiply(&e, &s).unwrap(), s);
                assert_eq!(g.multiply(&s, &e).unwrap(), s);
            }
        }
    }

    #[test]
    fn wreath_law_hand_example() {
        // ({lamp 0 -> 1}, cursor 1)^2 = ({0 -> 1, 1 -> 1}, 2) in C2 wr C4
        let g = c2_wr_c4();
        let a = parse_element(&g, "wreath{0:1|cursor=1}").unwrap();
        let sq = g.multiply(&a, &a).unwrap();
        assert_eq!(sq, parse_element(&g, "wreath{0:1,1:1|cursor=2}").unwrap());
    }

    #[test]
    fn free_reduction_example() {
        let g = GroupSpec::free(2);
        let x = parse_element(&g, "word:abA").unwrap();
        let y = parse_element(&g, "word:aB").unwrap();
        assert_eq!(g.multiply(&x, &y).unwrap(), parse_element(&g, "word:a").unwrap());
    }

    #[test]
    fn zwrz_inverse_hand_example() {
        // (3*delta_2, 5)^{-1} = (-3*delta_{-3}, -5)
        let g = z_wr_z();
        let a = parse_element(&g, "wreath{2:3|cursor=5}").unwrap();
        let inv = g.inverse(&a).unwrap();
        assert_eq!(inv, parse_element(&g, "wreath{-3:-3|cursor=-5}").unwrap());
        assert_eq!(g.multiply(&a, &inv).unwrap(), g.identity());
    }

    #[test]
    fn generator_sets_match_expectations() {
        assert_eq!(
            GroupSpec::Integers.generators().unwrap(),
            vec![Element::Int(1), Element::Int(-1)]
        );
        // C2 wr Z has exactly three generators: move +-1, toggle at cursor.
        let g = GroupSpec::wreath(GroupSpec::cyclic(2), GroupSpec::Integers);
        let gens = g.generators().unwrap();
        assert_eq!(gens.len(), 3);
        // C2 wr Cn for n > 2 also has exactly three.
        let g = GroupSpec::wreath(GroupSpec::cyclic(2), GroupSpec::cyclic(6));
        assert_eq!(g.generators().unwrap().len(), 3);
        // lamp-metric base part: every non-identity element of the base at the cursor.
        let g = GroupSpec::lamp_metric(GroupSpec::cyclic(3), GroupSpec::cyclic(5));
        let gens = g.generators().unwrap();
        assert_eq!(gens.len(), 2 + 2);
        let e_shape = Element::Cyclic(0);
        let lamp_gens: Vec<&Element> = gens
            .iter()
            .filter(|e| match e {
                Element::Wreath(w) => !w.lamps.is_empty(),
                _ => false,
            })
            .collect();
        assert_eq!(lamp_gens.len(), 2);
        for lg in lamp_gens {
            match lg {
                Element::Wreath(w) => {
                    assert_eq!(w.cursor, e_shape);
                    assert_eq!(w.lamps.len(), 1);
                    assert_eq!(w.lamps[0].0, e_shape);
                }
                _ => unreachable!(),
            }
        }
    }

    #[test]
    fn lamp_metric_rejects_infinite_base() {
        let g = GroupSpec::lamp_metric(GroupSpec::Integers, GroupSpec::Integers);
        assert!(matches!(g.generators(), Err(Error::InfiniteBase)));
    }

    #[test]
    fn generators_closed_under_inverse() {
        for g in [
            GroupSpec::Integers,
            GroupSpec::cyclic(2),
            GroupSpec::cyclic(7),
            GroupSpec::lattice(2),
            GroupSpec::free(2),
            c2_wr_c4(),
            z_wr_z(),
            GroupSpec::lamp_metric(GroupSpec::cyclic(4), GroupSpec::Integers),
        ] {
            let gens = g.generators().unwrap();
            for s in &gens {
                let inv = g.inverse(s).unwrap();
                assert!(gens.contains(&inv), "{} not closed in {}", s, g.name());
            }
        }
    }

    fn random_element(g: &GroupSpec, rng: &mut SplitMix64, len: usize) -> Element {
        let gens = g.generators().unwrap();
        let mut e = g.identity();
        for _ in 0..len {
            e = g.multiply_unchecked(&e, &gens[rng.uniform(gens.len())]);
        }
        e
    }

    #[test]
    fn associativity_and_inverses_on_random_triples() {
        // 10^4 random triples spread over the group zoo.
        let groups = [
            GroupSpec::Integers,
            GroupSpec::cyclic(6),
            GroupSpec::lattice(2),
            GroupSpec::free(2),
            c2_wr_c4(),
            z_wr_z(),
            GroupSpec::wreath(z_wr_z(), GroupSpec::Integers),
            GroupSpec::lamp_metric(GroupSpec::cyclic(3), GroupSpec::cyclic(9)),
        ];
        let mut rng = SplitMix64::new(0xA55A);
        for round in 0..10_000 {
            let g = &groups[round % groups.len()];
            let a = random_element(g, &mut rng, 6);
            let b = random_element(g, &mut rng, 6);
            let c = random_element(g, &mut rng, 6);
            let ab_c = g
                .multiply(&g.multiply(&a, &b).unwrap(), &c)
                .unwrap();
            let a_bc = g
                .multiply(&a, &g.multiply(&b, &c).unwrap())
                .unwrap();
            assert_eq!(ab_c, a_bc);
            let ainv = g.inverse(&a).unwrap();
            assert_eq!(g.multiply(&a, &ainv).unwrap(), g.identity());
            assert_eq!(g.inverse(&ainv).unwrap(), a);
        }
    }

    #[test]
    fn canonicalize_is_idempotent_and_drops_identity_lamps() {
        let g = c2_wr_c4();
        let raw = Element::Wreath(Box::new(WreathElement {
            lamps: vec![(Element::Cyclic(2), Element::Cyclic(0))],
            cursor: Element::Cyclic(1),
        }));
        let canon = g.canonicalize(&raw);
        assert_eq!(canon, parse_element(&g, "wreath{|cursor=1}").unwrap());
        assert_eq!(g.canonicalize(&canon), canon);
        let f = GroupSpec::free(2);
        let w = Element::Word(vec![1, -1, 2]);
        assert_eq!(f.canonicalize(&w), Element::Word(vec![2]));
    }

    #[test]
    fn kind_mismatch_is_an_error() {
        let g = GroupSpec::Integers;
        assert!(matches!(
            g.multiply(&Element::Int(1), &Element::Cyclic(1)),
            Err(Error::KindMismatch(_))
        ));
    }

    #[test]
    fn enumeration_matches_order() {
        let g = GroupSpec::wreath(GroupSpec::cyclic(2), GroupSpec::cyclic(4));
        let all = g.elements().unwrap();
        assert_eq!(all.len() as u64, g.order().unwrap());
        assert_eq!(all.len(), 64);
        let mut dedup = all.clone();
        dedup.sort_by(compare_elements);
        dedup.dedup();
        assert_eq!(dedup.len(), all.len());
    }

    #[test]
    fn parse_print_round_trip() {
        let cases: Vec<(GroupSpec, &str)> = vec![
            (GroupSpec::Integers, "z:-4"),
            (GroupSpec::cyclic(9), "c:7"),
            (GroupSpec::lattice(2), "vec:(1,-2)"),
            (GroupSpec::free(2), "word:abA"),
            (GroupSpec::free(2), "word:"),
            (z_wr_z(), "wreath{2:1,5:1|cursor=3}"),
            (z_wr_z(), "wreath{|cursor=0}"),
            (
                GroupSpec::wreath(z_wr_z(), GroupSpec::Integers),
                "wreath{0:{1:2|cursor=-1}|cursor=4}",
            ),
        ];
        for (g, s) in cases {
            let e = parse_element(&g, s).unwrap();
            assert_eq!(display_element(&e), s, "round trip for {s}");
        }
    }

    #[test]
    fn parser_rejects_garbage() {
        assert!(parse_element(&GroupSpec::Integers, "zz:1").is_err());
        assert!(parse_element(&GroupSpec::free(2), "word:xyz").is_err());
        assert!(parse_element(&z_wr_z(), "wreath{1:1}").is_err());
        assert!(parse_element(&GroupSpec::cyclic(4), "c:9").is_err());
    }

    #[test]
    fn registry_names_resolve() {
        for name in [
            "z", "z2", "f2", "cn:6", "c2wrz", "zwrz", "c2wrcn:8", "zwrz2", "iterated:3",
            "lcnwrz:2", "lcnwrcn:3:9",
        ] {
            group_from_name(name).unwrap();
        }
        assert_eq!(
            group_from_name("iterated:3").unwrap(),
            GroupSpec::wreath(z_wr_z(), GroupSpec::Integers)
        );
        assert!(group_from_name("q8").is_err());
    }

    proptest::proptest! {
        /// print-then-parse is the identity on arbitrary products of
        /// generators, across the group zoo
        #[test]
        fn print_parse_round_trips_random_elements(
            seed in 0u64..1_000_000,
            len in 0usize..12,
            pick in 0usize..6,
        ) {
            let groups = [
                GroupSpec::Integers,
                GroupSpec::cyclic(7),
                GroupSpec::lattice(2),
                GroupSpec::free(2),
                GroupSpec::wreath(GroupSpec::cyclic(2), GroupSpec::cyclic(6)),
                GroupSpec::wreath(z_wr_z(), GroupSpec::Integers),
            ];
            let g = &groups[pick];
            let mut rng = SplitMix64::new(seed);
            let e = random_element(g, &mut rng, len);
            let text = display_element(&e);
            let back = parse_element(g, &text).unwrap();
            proptest::prop_assert_eq!(back, e);
        }
    }
}
