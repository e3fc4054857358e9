//! Mutable walk state. Group elements are immutable values, which is right
//! for BFS and hashing but too slow to rebuild every step of a 2^16-step
//! walk; the walker mutates a compact state in place and converts to an
//! `Element` only at checkpoints.
//!
//! Generator indices agree with `GroupSpec::generators()` order.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::group::{Element, GroupSpec, WreathElement};

#[derive(Debug, Clone)]
pub enum State {
    Int(i64),
    Cyc(u32),
    Lattice(Vec<i64>),
    Word(Vec<i8>),
    Wreath {
        cursor: Box<State>,
        lamps: HashMap<Element, State>,
    },
    /// lamp-metric lamps hold whole base elements; stepping multiplies by
    /// the i-th non-identity base element
    LampWreath {
        cursor: Box<State>,
        lamps: HashMap<Element, Element>,
    },
}

pub struct Walker {
    spec: GroupSpec,
    state: State,
}

/// Size of the generating multiset without materializing it.
pub fn generator_count(g: &GroupSpec) -> Result<usize> {
    Ok(match g {
        GroupSpec::Cyclic { n } => match n {
            0 | 1 => 0,
            2 => 1,
            _ => 2,
        },
        GroupSpec::Integers => 2,
        GroupSpec::Lattice { dim } => 2 * dim,
        GroupSpec::Free { rank } => 2 * rank,
        GroupSpec::Wreath { base, shape } => generator_count(shape)? + generator_count(base)?,
        GroupSpec::LampMetric { base, shape } => {
            let order = base.order().ok_or(Error::InfiniteBase)?;
            generator_count(shape)? + (order as usize - 1)
        }
    })
}

/// Does the canonical walk live on a bipartite Cayley graph? True exactly
/// when some homomorphism to C_2 sends every generator to the nontrivial
/// element: all of Z, Z^d, free groups, even cycles, and wreath products of
/// such (a lamp-metric base qualifies only when it is C_2 itself).
pub fn bipartite_walk(g: &GroupSpec) -> bool {
    match g {
        GroupSpec::Cyclic { n } => *n >= 2 && n % 2 == 0,
        GroupSpec::Integers | GroupSpec::Lattice { .. } | GroupSpec::Free { .. } => true,
        GroupSpec::Wreath { base, shape } => bipartite_walk(base) && bipartite_walk(shape),
        GroupSpec::LampMetric { base, shape } => {
            base.order() == Some(2) && bipartite_walk(base) && bipartite_walk(shape)
        }
    }
}

fn identity_state(g: &GroupSpec) -> State {
    match g {
        GroupSpec::Cyclic { .. } => State::Cyc(0),
        GroupSpec::Integers => State::Int(0),
        GroupSpec::Lattice { dim } => State::Lattice(vec![0; *dim]),
        GroupSpec::Free { .. } => State::Word(Vec::new()),
        GroupSpec::Wreath { shape, .. } => State::Wreath {
            cursor: Box::new(identity_state(shape)),
            lamps: HashMap::new(),
        },
        GroupSpec::LampMetric { shape, .. } => State::LampWreath {
            cursor: Box::new(identity_state(shape)),
            lamps: HashMap::new(),
        },
    }
}

fn is_identity(st: &State) -> bool {
    match st {
        State::Int(v) => *v == 0,
        State::Cyc(v) => *v == 0,
        State::Lattice(v) => v.iter().all(|&x| x == 0),
        State::Word(w) => w.is_empty(),
        State::Wreath { cursor, lamps } => lamps.is_empty() && is_identity(cursor),
        State::LampWreath { cursor, lamps } => lamps.is_empty() && is_identity(cursor),
    }
}

/// Right-multiply the state by generator `idx`.
fn step(g: &GroupSpec, st: &mut State, idx: usize) {
    match (g, st) {
        (GroupSpec::Integers, State::Int(v)) => *v += if idx == 0 { 1 } else { -1 },
        (GroupSpec::Cyclic { n }, State::Cyc(v)) => {
            *v = if idx == 0 { (*v + 1) % n } else { (*v + n - 1) % n };
        }
        (GroupSpec::Lattice { .. }, State::Lattice(v)) => {
            let coord = idx / 2;
            v[coord] += if idx.is_multiple_of(2) { 1 } else { -1 };
        }
        (GroupSpec::Free { .. }, State::Word(w)) => {
            let letter = (idx / 2 + 1) as i8 * if idx.is_multiple_of(2) { 1 } else { -1 };
            if w.last() == Some(&-letter) {
                w.pop();
            } else {
                w.push(letter);
            }
        }
        (GroupSpec::Wreath { base, shape }, State::Wreath { cursor, lamps }) => {
            let shape_count = generator_count(shape).expect("finite generator count");
            if idx < shape_count {
                step(shape, cursor, idx);
            } else {
                let key = to_element(shape, cursor);
                let lamp = lamps.entry(key).or_insert_with(|| identity_state(base));
                step(base, lamp, idx - shape_count);
                if is_identity(lamp) {
                    let key = to_element(shape, cursor);
                    lamps.remove(&key);
                }
            }
        }
        (GroupSpec::LampMetric { base, shape }, State::LampWreath { cursor, lamps }) => {
            let shape_count = generator_count(shape).expect("finite generator count");
            if idx < shape_count {
                step(shape, cursor, idx);
            } else {
                let s = lamp_metric_generator(base, idx - shape_count);
                let key = to_element(shape, cursor);
                let id = base.identity();
                let current = lamps.remove(&key).unwrap_or_else(|| id.clone());
                let merged = base.multiply_unchecked(&current, &s);
                if merged != id {
                    lamps.insert(key, merged);
                }
            }
        }
        _ => unreachable!("walker state matches its spec"),
    }
}

/// The i-th non-identity element of a finite base, in enumeration order.
fn lamp_metric_generator(base: &GroupSpec, i: usize) -> Element {
    match base {
        GroupSpec::Cyclic { .. } => Element::Cyclic(i as u32 + 1),
        _ => {
            let id = base.identity();
            base.elements()
                .expect("finite base")
                .into_iter()
                .filter(|e| *e != id)
                .nth(i)
                .expect("generator index in range")
        }
    }
}

fn to_element(g: &GroupSpec, st: &State) -> Element {
    match (g, st) {
        (GroupSpec::Integers, State::Int(v)) => Element::Int(*v),
        (GroupSpec::Cyclic { .. }, State::Cyc(v)) => Element::Cyclic(*v),
        (GroupSpec::Lattice { .. }, State::Lattice(v)) => Element::Lattice(v.clone()),
        (GroupSpec::Free { .. }, State::Word(w)) => Element::Word(w.clone()),
        (GroupSpec::Wreath { base, shape }, State::Wreath { cursor, lamps }) => {
            let entries: Vec<(Element, Element)> = lamps
                .iter()
                .map(|(k, v)| (k.clone(), to_element(base, v)))
                .collect();
            Element::Wreath(Box::new(WreathElement::new(
                entries,
                to_element(shape, cursor),
                base,
            )))
        }
        (GroupSpec::LampMetric { base, shape }, State::LampWreath { cursor, lamps }) => {
            let entries: Vec<(Element, Element)> =
                lamps.iter().map(|(k, v)| (k.clone(), v.clone())).collect();
            Element::Wreath(Box::new(WreathElement::new(
                entries,
                to_element(shape, cursor),
                base,
            )))
        }
        _ => unreachable!("walker state matches its spec"),
    }
}

impl Walker {
    pub fn new(spec: GroupSpec) -> Result<Self> {
        let n = generator_count(&spec)?;
        if n == 0 {
            return Err(Error::InvalidParams(format!(
                "{} has no generators to walk on",
                spec.name()
            )));
        }
        Ok(Walker {
            state: identity_state(&spec),
            spec,
        })
    }

    pub fn generator_count(&self) -> usize {
        generator_count(&self.spec).expect("validated at construction")
    }

    #[inline]
    pub fn step(&mut self, gen_index: usize) {
        step(&self.spec, &mut self.state, gen_index);
    }

    pub fn element(&self) -> Element {
        to_element(&self.spec, &self.state)
    }

    pub fn at_identity(&self) -> bool {
        is_identity(&self.state)
    }

    /// Cursor of a wreath walker as an element of the shape group.
    pub fn cursor_element(&self) -> Result<Element> {
        match (&self.spec, &self.state) {
            (GroupSpec::Wreath { shape, .. }, State::Wreath { cursor, .. })
            | (GroupSpec::LampMetric { shape, .. }, State::LampWreath { cursor, .. }) => {
                Ok(to_element(shape, cursor))
            }
            _ => Err(Error::KindMismatch("not a wreath walker".into())),
        }
    }
}
