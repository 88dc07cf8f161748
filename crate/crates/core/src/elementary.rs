//! Kemperman's elementary pairs and arithmetic progressions.
//!
//! A pair `(A,B)` is elementary when at least one of four configurations
//! applies: (I) a singleton side; (II) progressions with a common difference
//! of large order; (III) a punctured-subgroup partition with a unique
//! representation; (IV) an aperiodic partition of a subgroup with `mu >= 2`.
//! [`classify_elementary`] searches for every witness; [`check_elementary_witness`]
//! re-validates one witness from first principles.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::group::{FiniteAbelianGroup, GroupElement};
use crate::json::{self, ElementWire, SetWire};
use crate::subgroup::{all_subgroups, Subgroup};
use crate::subset::GroupSubset;
use crate::sumset::{is_aperiodic, min_rep, rep_counts, shift};

/// The progression `{g+d, g+2d, ..., g+kd}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ApWitness {
    pub start: GroupElement,
    pub difference: GroupElement,
    pub length: usize,
}

impl ApWitness {
    pub fn members(&self, g: &FiniteAbelianGroup) -> GroupSubset {
        let mut out = GroupSubset::empty(g);
        let mut x = self.start;
        for _ in 0..self.length {
            x = g.add(x, self.difference);
            out.insert(x);
        }
        out
    }

    fn key(&self) -> (GroupElement, GroupElement) {
        (self.start, self.difference)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    A,
    B,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ElementaryWitness {
    TypeI {
        singleton: Side,
    },
    TypeII {
        ap_a: ApWitness,
        ap_b: ApWitness,
    },
    /// `A = g1 + (H1 u {0})`, `B = g2 - (H2 u {0})`.
    TypeIII {
        g1: GroupElement,
        g2: GroupElement,
        h: Subgroup,
        h1: GroupSubset,
        h2: GroupSubset,
    },
    /// `A = g1 + H1`, `B = g2 - H2`.
    TypeIV {
        g1: GroupElement,
        g2: GroupElement,
        h: Subgroup,
        h1: GroupSubset,
        h2: GroupSubset,
    },
}

impl ElementaryWitness {
    pub fn type_number(&self) -> u8 {
        match self {
            ElementaryWitness::TypeI { .. } => 1,
            ElementaryWitness::TypeII { .. } => 2,
            ElementaryWitness::TypeIII { .. } => 3,
            ElementaryWitness::TypeIV { .. } => 4,
        }
    }

    pub fn type_name(&self) -> &'static str {
        ["I", "II", "III", "IV"][self.type_number() as usize - 1]
    }

    fn cmp_data(&self, other: &Self) -> Ordering {
        use ElementaryWitness::*;
        match (self, other) {
            (TypeI { singleton: a }, TypeI { singleton: b }) => (*a as u8).cmp(&(*b as u8)),
            (TypeII { ap_a, ap_b }, TypeII { ap_a: c, ap_b: d }) => {
                (ap_a.key(), ap_b.key()).cmp(&(c.key(), d.key()))
            }
            (
                TypeIII { g1, g2, h, .. } | TypeIV { g1, g2, h, .. },
                TypeIII {
                    g1: x1,
                    g2: x2,
                    h: k,
                    ..
                }
                | TypeIV {
                    g1: x1,
                    g2: x2,
                    h: k,
                    ..
                },
            ) => h
                .as_set()
                .cmp_canonical(k.as_set())
                .then_with(|| (g1, g2).cmp(&(x1, x2))),
            _ => Ordering::Equal,
        }
    }

    /// Canonical order: by type number, then by the witness data.
    pub fn cmp_canonical(&self, other: &Self) -> Ordering {
        self.type_number()
            .cmp(&other.type_number())
            .then_with(|| self.cmp_data(other))
    }

    pub fn to_wire(&self, g: &FiniteAbelianGroup) -> WitnessWire {
        let ap = |w: &ApWitness| ApWire {
            g: json::elem(g, w.start),
            d: json::elem(g, w.difference),
            k: w.length,
        };
        match self {
            ElementaryWitness::TypeI { singleton } => WitnessWire::I {
                singleton: *singleton,
            },
            ElementaryWitness::TypeII { ap_a, ap_b } => WitnessWire::II {
                a: ap(ap_a),
                b: ap(ap_b),
            },
            ElementaryWitness::TypeIII { g1, g2, h, h1, h2 } => WitnessWire::III(PartitionWire {
                g1: json::elem(g, *g1),
                g2: json::elem(g, *g2),
                h: json::sub(h),
                h1: json::set(h1),
                h2: json::set(h2),
            }),
            ElementaryWitness::TypeIV { g1, g2, h, h1, h2 } => WitnessWire::IV(PartitionWire {
                g1: json::elem(g, *g1),
                g2: json::elem(g, *g2),
                h: json::sub(h),
                h1: json::set(h1),
                h2: json::set(h2),
            }),
        }
    }

    pub fn to_json(&self, g: &FiniteAbelianGroup) -> serde_json::Value {
        serde_json::to_value(self.to_wire(g)).expect("witness serializes")
    }

    pub fn from_wire(g: &FiniteAbelianGroup, w: &WitnessWire) -> Result<Self> {
        let ap = |w: &ApWire| -> Result<ApWitness> {
            Ok(ApWitness {
                start: json::parse_elem(g, &w.g)?,
                difference: json::parse_elem(g, &w.d)?,
                length: w.k,
            })
        };
        Ok(match w {
            WitnessWire::I { singleton } => ElementaryWitness::TypeI {
                singleton: *singleton,
            },
            WitnessWire::II { a, b } => ElementaryWitness::TypeII {
                ap_a: ap(a)?,
                ap_b: ap(b)?,
            },
            WitnessWire::III(p) => ElementaryWitness::TypeIII {
                g1: json::parse_elem(g, &p.g1)?,
                g2: json::parse_elem(g, &p.g2)?,
                h: json::parse_subgroup(g, &p.h)?,
                h1: json::parse_set(g, &p.h1)?,
                h2: json::parse_set(g, &p.h2)?,
            },
            WitnessWire::IV(p) => ElementaryWitness::TypeIV {
                g1: json::parse_elem(g, &p.g1)?,
                g2: json::parse_elem(g, &p.g2)?,
                h: json::parse_subgroup(g, &p.h)?,
                h1: json::parse_set(g, &p.h1)?,
                h2: json::parse_set(g, &p.h2)?,
            },
        })
    }

    pub fn from_json(g: &FiniteAbelianGroup, v: &serde_json::Value) -> Result<Self> {
        Self::from_wire(g, &json::from_value(v)?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApWire {
    pub g: ElementWire,
    pub d: ElementWire,
    pub k: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionWire {
    pub g1: ElementWire,
    pub g2: ElementWire,
    #[serde(rename = "H")]
    pub h: SetWire,
    #[serde(rename = "H1")]
    pub h1: SetWire,
    #[serde(rename = "H2")]
    pub h2: SetWire,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type")]
pub enum WitnessWire {
    I {
        singleton: Side,
    },
    II {
        #[serde(rename = "A")]
        a: ApWire,
        #[serde(rename = "B")]
        b: ApWire,
    },
    III(PartitionWire),
    IV(PartitionWire),
}

/// Every `(g, d)` with `{g+d, ..., g+|A|d} = A`, sorted by `(g, d)`.
pub fn ap_witnesses(a: &GroupSubset) -> Vec<ApWitness> {
    let g = a.group();
    let k = a.len();
    let mut out = Vec::new();
    if k == 0 {
        return out;
    }
    for d in g.elements() {
        let ord = g.element_order(d).expect("element of the group") as usize;
        if ord < k {
            continue;
        }
        for first in a.elements() {
            let w = ApWitness {
                start: g.sub(first, d),
                difference: d,
                length: k,
            };
            if k == 1 || progression_fills(g, a, first, d, k) {
                out.push(w);
            }
        }
    }
    out.sort_by_key(ApWitness::key);
    out.dedup();
    out
}

fn progression_fills(
    g: &FiniteAbelianGroup,
    a: &GroupSubset,
    first: GroupElement,
    d: GroupElement,
    k: usize,
) -> bool {
    let mut x = first;
    for _ in 1..k {
        x = g.add(x, d);
        if !a.contains(x) || x == first {
            return false;
        }
    }
    true
}

pub fn is_arithmetic_progression(a: &GroupSubset) -> bool {
    let g = a.group();
    let k = a.len();
    if k == 0 {
        return false;
    }
    if k == 1 {
        return true;
    }
    g.elements().any(|d| {
        g.element_order(d).map(|o| o as usize >= k).unwrap_or(false)
            && a.elements().any(|first| progression_fills(g, a, first, d, k))
    })
}

/// All witnesses of every type, sorted canonically; empty iff the pair is
/// not elementary.
pub fn classify_elementary(a: &GroupSubset, b: &GroupSubset) -> Result<Vec<ElementaryWitness>> {
    a.check_same_group(b)?;
    let mut out = Vec::new();
    if a.is_empty() || b.is_empty() {
        return Ok(out);
    }
    if a.len() == 1 {
        out.push(ElementaryWitness::TypeI { singleton: Side::A });
    }
    if b.len() == 1 {
        out.push(ElementaryWitness::TypeI { singleton: Side::B });
    }
    out.extend(type_ii(a, b));
    out.extend(type_iii(a, b)?);
    out.extend(type_iv(a, b)?);
    out.sort_by(ElementaryWitness::cmp_canonical);
    Ok(out)
}

/// Lowest applicable type number, if the pair is elementary.
pub fn canonical_type(witnesses: &[ElementaryWitness]) -> Option<u8> {
    witnesses.iter().map(ElementaryWitness::type_number).min()
}

pub fn is_elementary(a: &GroupSubset, b: &GroupSubset) -> Result<bool> {
    a.check_same_group(b)?;
    if a.is_empty() || b.is_empty() {
        return Ok(false);
    }
    if a.len() == 1 || b.len() == 1 {
        return Ok(true);
    }
    Ok(!type_ii(a, b).is_empty() || !type_iii(a, b)?.is_empty() || !type_iv(a, b)?.is_empty())
}

fn type_ii(a: &GroupSubset, b: &GroupSubset) -> Vec<ElementaryWitness> {
    let g = a.group();
    let need = (a.len() + b.len() - 1) as u64;
    let wa = ap_witnesses(a);
    let wb = ap_witnesses(b);
    let mut out = Vec::new();
    for x in &wa {
        if g.element_order(x.difference).unwrap_or(0) < need {
            continue;
        }
        for y in wb.iter().filter(|y| y.difference == x.difference) {
            out.push(ElementaryWitness::TypeII { ap_a: *x, ap_b: *y });
        }
    }
    out
}

/// Subgroups of the given order containing `S - s0`.
fn containing_subgroups(s: &GroupSubset, order: usize) -> Result<Vec<Subgroup>> {
    let g = s.group();
    let s0 = s.min().expect("non-empty");
    let diffs = shift(s, g.neg(s0));
    Ok(all_subgroups(g)?
        .into_iter()
        .filter(|h| h.order() == order && diffs.is_subset(h.as_set()))
        .collect())
}

fn type_iii(a: &GroupSubset, b: &GroupSubset) -> Result<Vec<ElementaryWitness>> {
    let g = a.group();
    let n = a.len() + b.len() - 1;
    let mut out = Vec::new();
    if n < 3 || n > g.order() || !g.order().is_multiple_of(n) {
        return Ok(out);
    }
    let counts = rep_counts(a, b)?;
    let ones: Vec<usize> = (0..counts.len()).filter(|&c| counts[c] == 1).collect();
    if ones.len() != 1 {
        return Ok(out);
    }
    let c = GroupElement::from_rank(ones[0]);
    for h in containing_subgroups(a, n)? {
        for g1 in a.elements() {
            let g2 = g.sub(c, g1);
            if !b.contains(g2) {
                continue;
            }
            let mut h1 = shift(a, g.neg(g1));
            h1.remove(g.identity());
            let mut h2 = shift(&crate::sumset::negate(b), g2);
            h2.remove(g.identity());
            let hs = h.as_set();
            if h1.is_empty()
                || h2.is_empty()
                || !h1.is_subset(hs)
                || !h2.is_subset(hs)
                || !h1.is_disjoint(&h2)
                || h1.len() + h2.len() + 1 != h.order()
            {
                continue;
            }
            out.push(ElementaryWitness::TypeIII { g1, g2, h: h.clone(), h1, h2 });
        }
    }
    Ok(out)
}

fn type_iv(a: &GroupSubset, b: &GroupSubset) -> Result<Vec<ElementaryWitness>> {
    let g = a.group();
    let n = a.len() + b.len();
    let mut out = Vec::new();
    if n > g.order() || !g.order().is_multiple_of(n) || min_rep(a, b)? < 2 {
        return Ok(out);
    }
    let a0 = a.min().expect("non-empty");
    let b0 = b.min().expect("non-empty");
    for h in containing_subgroups(a, n)? {
        let hs = h.as_set();
        // Every g1 in the coset A + H is a candidate, including g1 outside A.
        for t in h.elements() {
            let g1 = g.add(a0, t);
            let h1 = shift(a, g.neg(g1));
            if !h1.is_subset(hs) || !is_aperiodic(&h1) {
                continue;
            }
            let h2 = hs.difference(&h1);
            if h2.is_empty() || !is_aperiodic(&h2) {
                continue;
            }
            let neg_h2 = crate::sumset::negate(&h2);
            for u in h.elements() {
                let g2 = g.add(b0, u);
                if shift(&neg_h2, g2) == *b {
                    out.push(ElementaryWitness::TypeIV {
                        g1,
                        g2,
                        h: h.clone(),
                        h1: h1.clone(),
                        h2: h2.clone(),
                    });
                }
            }
        }
    }
    Ok(out)
}

/// Re-checks every defining clause of the claimed type from scratch.
/// Malformed or foreign witnesses yield `false`.
pub fn check_elementary_witness(a: &GroupSubset, b: &GroupSubset, w: &ElementaryWitness) -> bool {
    if a.group() != b.group() || a.is_empty() || b.is_empty() {
        return false;
    }
    let g = a.group();
    match w {
        ElementaryWitness::TypeI { singleton } => match singleton {
            Side::A => a.len() == 1,
            Side::B => b.len() == 1,
        },
        ElementaryWitness::TypeII { ap_a, ap_b } => {
            let d = ap_a.difference;
            if ap_b.difference != d || !g.contains(d) || !g.contains(ap_a.start) || !g.contains(ap_b.start) {
                return false;
            }
            let ord = naive_order(g, d);
            ord >= a.len() + b.len() - 1
                && ap_a.length <= ord
                && ap_b.length <= ord
                && naive_progression(g, ap_a) == Some(to_sorted(a))
                && naive_progression(g, ap_b) == Some(to_sorted(b))
        }
        ElementaryWitness::TypeIII { g1, g2, h, h1, h2 } => {
            let Some(hv) = checked_subgroup(g, h) else {
                return false;
            };
            if !partition_ok(g, &hv, h1, h2, true) {
                return false;
            }
            let mut a_exp: Vec<GroupElement> = h1.elements().map(|x| g.add(*g1, x)).collect();
            a_exp.push(*g1);
            let mut b_exp: Vec<GroupElement> = h2.elements().map(|x| g.sub(*g2, x)).collect();
            b_exp.push(*g2);
            if sorted(a_exp) != to_sorted(a) || sorted(b_exp) != to_sorted(b) {
                return false;
            }
            let c = g.add(*g1, *g2);
            let nu = naive_counts(a, b);
            nu[c.rank()] == 1 && nu.iter().enumerate().all(|(x, &n)| n != 1 || x == c.rank())
        }
        ElementaryWitness::TypeIV { g1, g2, h, h1, h2 } => {
            let Some(hv) = checked_subgroup(g, h) else {
                return false;
            };
            if !partition_ok(g, &hv, h1, h2, false) || !naive_aperiodic(h1) || !naive_aperiodic(h2) {
                return false;
            }
            let a_exp: Vec<GroupElement> = h1.elements().map(|x| g.add(*g1, x)).collect();
            let b_exp: Vec<GroupElement> = h2.elements().map(|x| g.sub(*g2, x)).collect();
            if sorted(a_exp) != to_sorted(a) || sorted(b_exp) != to_sorted(b) {
                return false;
            }
            naive_counts(a, b).iter().all(|&n| n == 0 || n >= 2)
        }
    }
}

fn sorted(mut v: Vec<GroupElement>) -> Vec<GroupElement> {
    v.sort();
    v.dedup();
    v
}

fn to_sorted(s: &GroupSubset) -> Vec<GroupElement> {
    s.elements().collect()
}

fn naive_order(g: &FiniteAbelianGroup, d: GroupElement) -> usize {
    let mut k = 1;
    let mut x = d;
    while !x.is_identity() {
        x = g.add(x, d);
        k += 1;
    }
    k
}

/// The listed progression, or `None` if its terms repeat.
fn naive_progression(g: &FiniteAbelianGroup, w: &ApWitness) -> Option<Vec<GroupElement>> {
    let mut terms = Vec::with_capacity(w.length);
    let mut x = w.start;
    for _ in 0..w.length {
        x = g.add(x, w.difference);
        terms.push(x);
    }
    let n = terms.len();
    let terms = sorted(terms);
    (terms.len() == n && n > 0).then_some(terms)
}

fn naive_counts(a: &GroupSubset, b: &GroupSubset) -> Vec<usize> {
    let g = a.group();
    let mut nu = vec![0; g.order()];
    for x in a.elements() {
        for y in b.elements() {
            nu[g.add(x, y).rank()] += 1;
        }
    }
    nu
}

fn naive_aperiodic(s: &GroupSubset) -> bool {
    let g = s.group();
    g.elements()
        .filter(|t| !t.is_identity())
        .all(|t| !s.elements().all(|x| s.contains(g.add(x, t))))
}

/// The subgroup's elements, if it really is a subgroup of `g`.
fn checked_subgroup(g: &FiniteAbelianGroup, h: &Subgroup) -> Option<Vec<GroupElement>> {
    if h.group() != g {
        return None;
    }
    let hv: Vec<GroupElement> = h.elements().collect();
    let closed = hv.contains(&g.identity())
        && hv
            .iter()
            .all(|&x| hv.iter().all(|&y| h.contains(g.sub(x, y))));
    closed.then_some(hv)
}

/// `H = H1 u H2` (with `{0}` as a third block when `punctured`) as a
/// partition into non-empty parts.
fn partition_ok(
    g: &FiniteAbelianGroup,
    hv: &[GroupElement],
    h1: &GroupSubset,
    h2: &GroupSubset,
    punctured: bool,
) -> bool {
    if h1.group() != g || h2.group() != g || h1.is_empty() || h2.is_empty() {
        return false;
    }
    let mut seen = vec![0u8; g.order()];
    for x in h1.elements().chain(h2.elements()) {
        seen[x.rank()] += 1;
    }
    if punctured {
        seen[0] += 1;
    }
    hv.iter().all(|x| seen[x.rank()] == 1) && seen.iter().sum::<u8>() as usize == hv.len()
}
