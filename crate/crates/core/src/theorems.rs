//! Verifiers for the classical sumset theorems and their applications:
//! thick components, the Hamidoune-Plagne structure, and the coset and
//! punctured-coset partitions behind elementary pairs of types III and IV.

use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::decompose::{kemperman_condition, small_sumset};
use crate::elementary::{ap_witnesses, is_arithmetic_progression, ApWitness};
use crate::error::{Error, Hypothesis, Result};
use crate::group::{FiniteAbelianGroup, GroupElement};
use crate::json::{self, ElementWire, SetWire};
use crate::subgroup::{all_subgroups, quotient, Subgroup};
use crate::subset::GroupSubset;
use crate::sumset::{
    add_subgroup, is_aperiodic, is_union_of_cosets, min_rep, negate, period_unchecked,
    rep_counts, shift, sumset, sumset_unchecked,
};

/// Default ceiling on the group order for the brute-force thickness check.
pub const DEFAULT_THICK_CAP: usize = 20;

/// Self-contained outcome of checking one theorem on one input.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub theorem_id: String,
    pub hypotheses_hold: bool,
    pub conclusion_holds: bool,
    pub witness: serde_json::Value,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TheoremId {
    Kneser,
    KempermanScherk,
    CorollaryHalf,
    EqualityClaim,
}

impl TheoremId {
    pub const ALL: [TheoremId; 4] = [
        TheoremId::Kneser,
        TheoremId::KempermanScherk,
        TheoremId::CorollaryHalf,
        TheoremId::EqualityClaim,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TheoremId::Kneser => "kneser",
            TheoremId::KempermanScherk => "kemperman_scherk",
            TheoremId::CorollaryHalf => "corollary_half",
            TheoremId::EqualityClaim => "equality_claim",
        }
    }
}

impl FromStr for TheoremId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TheoremId::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| {
                Error::Usage(format!(
                    "unknown theorem `{s}`; expected one of kneser, kemperman_scherk, corollary_half, equality_claim"
                ))
            })
    }
}

/// Checks the named statement's hypotheses and conclusion exactly.
pub fn verify_theorem(id: TheoremId, a: &GroupSubset, b: &GroupSubset) -> Result<VerificationReport> {
    let ab = sumset(a, b)?;
    let (na, nb, ns) = (a.len(), b.len(), ab.len());
    let report = |hyp: bool, concl: bool, witness: serde_json::Value| VerificationReport {
        theorem_id: id.name().to_string(),
        hypotheses_hold: hyp,
        conclusion_holds: concl,
        witness,
    };
    Ok(match id {
        TheoremId::Kneser => {
            let h = period_unchecked(&ab);
            let ah = add_subgroup(a, &h).len();
            let bh = add_subgroup(b, &h).len();
            report(
                ns < na + nb,
                ns + h.order() == ah + bh,
                json!({"H": json::sub(&h), "sumset_size": ns, "A_plus_H": ah, "B_plus_H": bh}),
            )
        }
        TheoremId::KempermanScherk => {
            let mu = min_rep(a, b)?;
            report(true, ns + mu >= na + nb, json!({"sumset_size": ns, "mu": mu}))
        }
        TheoremId::CorollaryHalf => {
            let h = period_unchecked(&ab);
            report(
                2 * ns < na + 2 * nb,
                add_subgroup(a, &h).len() == h.order(),
                json!({"H": json::sub(&h), "sumset_size": ns}),
            )
        }
        TheoremId::EqualityClaim => report(
            ns < na + nb && kemperman_condition(a, b),
            ns + 1 == na + nb,
            json!({"sumset_size": ns}),
        ),
    })
}

/// Whether every `B` with `|B| >= 2` has `|A+B| >= |A|+|B|` or `|A|+|B| >= |G|-1`,
/// decided by enumerating every such `B`.
pub fn is_thick_component(a: &GroupSubset) -> Result<bool> {
    is_thick_component_with_cap(a, DEFAULT_THICK_CAP)
}

pub fn is_thick_component_with_cap(a: &GroupSubset, cap: usize) -> Result<bool> {
    if a.is_empty() {
        return Err(Error::Domain("set must be non-empty".into()));
    }
    let g = a.group();
    let n = g.order();
    if n > cap.min(30) {
        return Err(Error::Resource(format!(
            "thickness check enumerates all subsets; group order {n} exceeds the cap {}",
            cap.min(30)
        )));
    }
    // translate[x] is the mask of A + x.
    let translate: Vec<u32> = g
        .elements()
        .map(|x| a.elements().fold(0u32, |m, y| m | 1 << g.add(x, y).rank()))
        .collect();
    let k = a.len();
    for mask in 0u32..(1u32 << n) {
        let size = mask.count_ones() as usize;
        if size < 2 || k + size + 1 >= n {
            continue;
        }
        let mut sum = 0u32;
        let mut rest = mask;
        while rest != 0 {
            sum |= translate[rest.trailing_zeros() as usize];
            rest &= rest - 1;
        }
        if (sum.count_ones() as usize) < k + size {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ThickBranch {
    Ap,
    Thick,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThickReduction {
    pub h: Subgroup,
    pub branch: ThickBranch,
}

impl ThickReduction {
    pub fn to_json(&self) -> serde_json::Value {
        json!({"H": json::sub(&self.h), "branch": self.branch})
    }
}

fn dense_and_proper(a: &GroupSubset, h: &Subgroup) -> bool {
    let ah = add_subgroup(a, h);
    ah.len() < a.len() + h.order() && !ah.is_full()
}

/// A subgroup `H` with `|A+H|-|A| <= |H|-1` and `A+H != G` whose quotient
/// image is an arithmetic progression or a thick component. If `A` lies in a
/// coset of a proper subgroup, the least such subgroup is returned;
/// otherwise the smallest qualifying `H`, preferring the progression branch.
pub fn thick_reduction(a: &GroupSubset) -> Result<ThickReduction> {
    let g = a.group();
    if a.is_empty() {
        return Err(Error::precondition(Hypothesis::NonEmpty, "A must be non-empty"));
    }
    if 2 * a.len() > g.order() {
        return Err(Error::precondition(
            Hypothesis::AtMostHalf,
            format!("|A| = {} exceeds |G|/2 = {}", a.len(), g.order() as f64 / 2.0),
        ));
    }
    let span = Subgroup::difference_span(a);
    if !span.is_whole() {
        return Ok(ThickReduction {
            h: span,
            branch: ThickBranch::Ap,
        });
    }
    for h in all_subgroups(g)? {
        if !dense_and_proper(a, &h) {
            continue;
        }
        let image = quotient(&h).image(a);
        if is_arithmetic_progression(&image) {
            return Ok(ThickReduction { h, branch: ThickBranch::Ap });
        }
        if is_thick_component(&image)? {
            return Ok(ThickReduction { h, branch: ThickBranch::Thick });
        }
    }
    Err(Error::Invariant(format!("no thick reduction found for A = {a:?}")))
}

/// Re-validates a thick reduction, deciding thickness by brute force.
pub fn check_thick_reduction(a: &GroupSubset, r: &ThickReduction) -> Result<bool> {
    if r.h.group() != a.group() || !dense_and_proper(a, &r.h) {
        return Ok(false);
    }
    let image = quotient(&r.h).image(a);
    Ok(match r.branch {
        ThickBranch::Ap => !ap_witnesses(&image).is_empty(),
        ThickBranch::Thick => is_thick_component(&image)?,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HamplaWitness {
    /// Non-zero `H` with `|A+H|-|A| <= |H|-1` and `A+H != G`.
    BranchI { h: Subgroup },
    /// `A = A0 u (g_1+H) u ... u (g_{n-1}+H)` with `A0` a progression.
    BranchII {
        h: Subgroup,
        cosets: Vec<GroupElement>,
        a0: GroupSubset,
        progression: ApWitness,
    },
}

impl HamplaWitness {
    pub fn branch(&self) -> &'static str {
        match self {
            HamplaWitness::BranchI { .. } => "(i)",
            HamplaWitness::BranchII { .. } => "(ii)",
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            HamplaWitness::BranchI { h } => json!({"branch": "(i)", "H": json::sub(h)}),
            HamplaWitness::BranchII {
                h,
                cosets,
                a0,
                progression,
            } => {
                let g = h.group();
                json!({
                    "branch": "(ii)",
                    "H": json::sub(h),
                    "index": h.index(),
                    "g": cosets.iter().map(|&x| g.coords(x)).collect::<Vec<_>>(),
                    "A0": json::set(a0),
                    "progression": {"g": g.coords(progression.start), "d": g.coords(progression.difference), "k": progression.length},
                })
            }
        }
    }

    /// Re-checks the witness against `A` from its own data.
    pub fn check(&self, a: &GroupSubset) -> bool {
        match self {
            HamplaWitness::BranchI { h } => {
                h.group() == a.group() && !h.is_trivial() && !h.is_whole() && dense_and_proper(a, h)
            }
            HamplaWitness::BranchII {
                h,
                cosets,
                a0,
                progression,
            } => {
                if h.group() != a.group() || h.is_trivial() || cosets.len() + 1 != h.index() {
                    return false;
                }
                let g = a.group();
                let mut union = a0.clone();
                let mut total = a0.len();
                for &x in cosets {
                    let c = h.coset(x);
                    total += c.len();
                    union = union.union(&c);
                }
                let ord = g.element_order(progression.difference).unwrap_or(0) as usize;
                !a0.is_empty()
                    && union == *a
                    && total == a.len()
                    && progression.length == a0.len()
                    && progression.length <= ord
                    && progression.members(g) == *a0
            }
        }
    }
}

/// Finds a witness for one of the two branches, preferring branch (i) with the
/// smallest subgroup.
pub fn hampla_structure(a: &GroupSubset, b: &GroupSubset) -> Result<HamplaWitness> {
    a.check_same_group(b)?;
    let g = a.group();
    if a.is_empty() {
        return Err(Error::precondition(Hypothesis::NonEmpty, "A must be non-empty"));
    }
    if b.len() < 2 {
        return Err(Error::precondition(
            Hypothesis::SecondAtLeastTwo,
            format!("|B| = {} is below 2", b.len()),
        ));
    }
    let ab = sumset_unchecked(a, b);
    if ab.len() >= a.len() + b.len() {
        return Err(Error::precondition(
            Hypothesis::SmallSumset,
            format!("|A+B| = {} exceeds |A|+|B|-1 = {}", ab.len(), a.len() + b.len() - 1),
        ));
    }
    if ab.len() + 2 > g.order() {
        return Err(Error::precondition(
            Hypothesis::SumsetMissesTwo,
            format!("|A+B| = {} exceeds |G|-2 = {}", ab.len(), g.order() as i64 - 2),
        ));
    }
    let subgroups = all_subgroups(g)?;
    if let Some(h) = subgroups
        .iter()
        .find(|h| !h.is_trivial() && !h.is_whole() && dense_and_proper(a, h))
    {
        return Ok(HamplaWitness::BranchI { h: h.clone() });
    }
    for h in subgroups.iter().filter(|h| !h.is_trivial()) {
        let q = quotient(h);
        let mut cosets = Vec::new();
        let mut a0 = a.clone();
        for id in q.image(a).elements() {
            let coset = q.preimage(&GroupSubset::singleton(q.target(), id));
            if coset.is_subset(a) {
                cosets.push(q.representative(id));
                a0 = a0.difference(&coset);
            }
        }
        if cosets.len() + 1 != h.index() || a0.is_empty() {
            continue;
        }
        if let Some(&progression) = ap_witnesses(&a0).first() {
            return Ok(HamplaWitness::BranchII {
                h: h.clone(),
                cosets,
                a0,
                progression,
            });
        }
    }
    Err(Error::Invariant(format!(
        "no structure witness found for A = {a:?}, B = {b:?}"
    )))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PartitionKind {
    /// `A+B` is an `H`-coset.
    Coset,
    /// `A+B` is an `H`-coset with one element removed.
    PuncturedCoset,
}

/// `A = g1 + (H1 u {0})`, `B = g2 - (H2 u {0})` for [`PartitionKind::Coset`];
/// `A = g1 + H1`, `B = g2 - H2` for [`PartitionKind::PuncturedCoset`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionWitness {
    pub kind: PartitionKind,
    pub g1: GroupElement,
    pub g2: GroupElement,
    pub h: Subgroup,
    pub h1: GroupSubset,
    pub h2: GroupSubset,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionWire {
    pub kind: PartitionKind,
    pub g1: ElementWire,
    pub g2: ElementWire,
    #[serde(rename = "H")]
    pub h: SetWire,
    #[serde(rename = "H1")]
    pub h1: SetWire,
    #[serde(rename = "H2")]
    pub h2: SetWire,
}

impl PartitionWitness {
    /// The pair `(A, B)` described by the witness.
    pub fn reconstruct(&self) -> (GroupSubset, GroupSubset) {
        let g = self.h.group();
        let (mut p1, mut p2) = (self.h1.clone(), self.h2.clone());
        if self.kind == PartitionKind::Coset {
            p1.insert(g.identity());
            p2.insert(g.identity());
        }
        (shift(&p1, self.g1), shift(&negate(&p2), self.g2))
    }

    /// The partition invariants of the witness's kind.
    pub fn is_valid(&self) -> bool {
        let g = self.h.group();
        let hs = self.h.as_set();
        if self.h1.group() != g || self.h2.group() != g {
            return false;
        }
        let disjoint_parts = !self.h1.is_empty()
            && !self.h2.is_empty()
            && self.h1.is_subset(hs)
            && self.h2.is_subset(hs)
            && self.h1.is_disjoint(&self.h2);
        match self.kind {
            PartitionKind::Coset => {
                disjoint_parts
                    && !self.h1.contains(g.identity())
                    && !self.h2.contains(g.identity())
                    && self.h1.len() + self.h2.len() + 1 == self.h.order()
            }
            PartitionKind::PuncturedCoset => {
                disjoint_parts
                    && self.h1.len() + self.h2.len() == self.h.order()
                    && is_aperiodic(&self.h1)
                    && is_aperiodic(&self.h2)
            }
        }
    }

    pub fn to_wire(&self) -> PartitionWire {
        let g = self.h.group();
        PartitionWire {
            kind: self.kind,
            g1: json::elem(g, self.g1),
            g2: json::elem(g, self.g2),
            h: json::sub(&self.h),
            h1: json::set(&self.h1),
            h2: json::set(&self.h2),
        }
    }

    pub fn from_wire(g: &FiniteAbelianGroup, w: &PartitionWire) -> Result<Self> {
        Ok(PartitionWitness {
            kind: w.kind,
            g1: json::parse_elem(g, &w.g1)?,
            g2: json::parse_elem(g, &w.g2)?,
            h: json::parse_subgroup(g, &w.h)?,
            h1: json::parse_set(g, &w.h1)?,
            h2: json::parse_set(g, &w.h2)?,
        })
    }
}

/// Recovers the partition of `H` behind a pair whose sumset is an `H`-coset
/// (possibly with one element removed).
pub fn recover_partition(a: &GroupSubset, b: &GroupSubset, h: &Subgroup) -> Result<PartitionWitness> {
    a.check_same_group(b)?;
    a.check_same_group(h.as_set())?;
    if a.is_empty() || b.is_empty() {
        return Err(Error::precondition(Hypothesis::NonEmpty, "both sets must be non-empty"));
    }
    if !small_sumset(a, b) {
        return Err(Error::precondition(Hypothesis::SmallSumset, "|A+B| exceeds |A|+|B|-1"));
    }
    if !kemperman_condition(a, b) {
        return Err(Error::precondition(
            Hypothesis::KempermanCondition,
            "A+B is periodic and every element has two representations",
        ));
    }
    let g = a.group();
    let ab = sumset_unchecked(a, b);
    let closure = add_subgroup(&ab, h);
    let witness = if closure.len() == h.order() && ab.len() == h.order() {
        if a.len() < 2 || b.len() < 2 {
            return Err(Error::precondition(
                Hypothesis::CosetShapedSumset,
                "the coset shape needs min(|A|,|B|) >= 2",
            ));
        }
        let counts = rep_counts(a, b)?;
        let c = (0..counts.len()).find(|&c| counts[c] == 1).ok_or_else(|| {
            Error::Invariant("coset-shaped sumset without a uniquely represented element".into())
        })?;
        let c = GroupElement::from_rank(c);
        let g1 = a
            .elements()
            .find(|&x| b.contains(g.sub(c, x)))
            .expect("c lies in A+B");
        let g2 = g.sub(c, g1);
        let mut h1 = shift(a, g.neg(g1));
        h1.remove(g.identity());
        let mut h2 = shift(&negate(b), g2);
        h2.remove(g.identity());
        PartitionWitness {
            kind: PartitionKind::Coset,
            g1,
            g2,
            h: h.clone(),
            h1,
            h2,
        }
    } else if closure.len() == h.order() && ab.len() + 1 == h.order() {
        let y = closure.difference(&ab).min().expect("one element missing");
        let g1 = a.min().expect("non-empty");
        let g2 = g.sub(y, g1);
        PartitionWitness {
            kind: PartitionKind::PuncturedCoset,
            g1,
            g2,
            h: h.clone(),
            h1: shift(a, g.neg(g1)),
            h2: shift(&negate(b), g2),
        }
    } else {
        return Err(Error::precondition(
            Hypothesis::CosetShapedSumset,
            format!("A+B = {ab:?} is neither an H-coset nor an H-coset minus one element"),
        ));
    };
    if !witness.is_valid() || witness.reconstruct() != (a.clone(), b.clone()) {
        return Err(Error::Invariant(format!(
            "recovered partition does not validate for A = {a:?}, B = {b:?}"
        )));
    }
    Ok(witness)
}

/// Facts about the refinement by `F = <c - g1 - g2>`; each flag records
/// whether the corresponding assertion holds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RefinementResult {
    pub f: GroupElement,
    pub subgroup_f: Subgroup,
    pub a0: GroupSubset,
    pub b0: GroupSubset,
    /// `A \ A0` and `B \ B0` are unions of `F`-cosets.
    pub complements_saturated: bool,
    /// `A0` and `B0` are progressions with difference `f`.
    pub residuals_progressions: bool,
    /// `|Abar+Bbar| = |Abar|+|Bbar|-1` in `G/F`.
    pub quotient_tight: bool,
    /// `Abar+Bbar` is a coset of `H/F`.
    pub quotient_coset: bool,
    /// `|A0+B0| = |A0|+|B0|-1`.
    pub residual_tight: bool,
    /// `A0+B0` is an `F`-coset (coset kind) or an `F`-coset minus one element.
    pub residual_shape: bool,
    /// `mu(A0,B0) = 1`; asserted for the coset kind only.
    pub residual_min_rep_one: Option<bool>,
    /// `A0+B0+F` has a unique representation in `Abar+Bbar`.
    pub residual_unique: bool,
}

impl RefinementResult {
    pub fn all_hold(&self) -> bool {
        self.complements_saturated
            && self.residuals_progressions
            && self.quotient_tight
            && self.quotient_coset
            && self.residual_tight
            && self.residual_shape
            && self.residual_min_rep_one.unwrap_or(true)
            && self.residual_unique
    }

    pub fn to_json(&self) -> serde_json::Value {
        let g = self.subgroup_f.group();
        json!({
            "f": g.coords(self.f),
            "F": json::sub(&self.subgroup_f),
            "A0": json::set(&self.a0),
            "B0": json::set(&self.b0),
            "complements_saturated": self.complements_saturated,
            "residuals_progressions": self.residuals_progressions,
            "quotient_tight": self.quotient_tight,
            "quotient_coset": self.quotient_coset,
            "residual_tight": self.residual_tight,
            "residual_shape": self.residual_shape,
            "residual_min_rep_one": self.residual_min_rep_one,
            "residual_unique": self.residual_unique,
        })
    }
}

/// The part of `S` left after removing every full `F`-coset: the single
/// partial coset, or the coset through `anchor` if `S` is a union of cosets.
fn residual_part(s: &GroupSubset, f: &Subgroup, anchor: GroupElement) -> GroupSubset {
    let full = GroupSubset::from_elements(
        s.group(),
        s.elements().filter(|&x| f.coset(x).is_subset(s)),
    );
    let partial = s.difference(&full);
    if partial.is_empty() {
        f.coset(anchor)
    } else {
        partial
    }
}

/// Refines a partition witness along the subgroup generated by
/// `f = c - g1 - g2` for a uniquely represented `c`.
pub fn refine_partition(w: &PartitionWitness, c: GroupElement) -> Result<RefinementResult> {
    let g = w.h.group();
    if !g.contains(c) {
        return Err(Error::Domain("c lies outside the ambient group".into()));
    }
    let (a, b) = w.reconstruct();
    let counts = rep_counts(&a, &b)?;
    if counts[c.rank()] != 1 {
        return Err(Error::precondition(
            Hypothesis::UniqueRepresentation,
            format!("nu_c(A,B) = {}, expected 1", counts[c.rank()]),
        ));
    }
    let sum_g = g.add(w.g1, w.g2);
    if w.kind == PartitionKind::Coset && c == sum_g {
        return Err(Error::precondition(
            Hypothesis::UniqueRepresentation,
            "c must differ from g1+g2 for the coset kind",
        ));
    }
    let f = g.sub(c, sum_g);
    let sf = Subgroup::generated_by(g, &[f]);
    let a_rep = a.elements().find(|&x| b.contains(g.sub(c, x))).expect("nu_c = 1");
    let b_rep = g.sub(c, a_rep);
    let a0 = residual_part(&a, &sf, a_rep);
    let b0 = residual_part(&b, &sf, b_rep);

    let complements_saturated = a0.is_subset(&a)
        && b0.is_subset(&b)
        && is_union_of_cosets(&a.difference(&a0), &sf)
        && is_union_of_cosets(&b.difference(&b0), &sf)
        && add_subgroup(&a0, &sf).len() == sf.order()
        && add_subgroup(&b0, &sf).len() == sf.order();
    let with_difference_f = |s: &GroupSubset| ap_witnesses(s).iter().any(|p| p.difference == f);
    let residuals_progressions = with_difference_f(&a0) && with_difference_f(&b0);

    let q = quotient(&sf);
    let abar = q.image(&a);
    let bbar = q.image(&b);
    let sum_bar = sumset_unchecked(&abar, &bbar);
    let quotient_tight = sum_bar.len() + 1 == abar.len() + bbar.len();
    let lifted = q.preimage(&sum_bar);
    let quotient_coset = lifted.len() == w.h.order() && add_subgroup(&lifted, &w.h) == lifted;

    let res = sumset_unchecked(&a0, &b0);
    let residual_tight = res.len() + 1 == a0.len() + b0.len();
    let res_closure = add_subgroup(&res, &sf);
    let residual_shape = res_closure.len() == sf.order()
        && match w.kind {
            PartitionKind::Coset => res.len() == sf.order(),
            PartitionKind::PuncturedCoset => res.len() + 1 == sf.order(),
        };
    let residual_min_rep_one = match w.kind {
        PartitionKind::Coset => Some(min_rep(&a0, &b0)? == 1),
        PartitionKind::PuncturedCoset => None,
    };
    let target = q.target().add(q.apply(a0.min().expect("non-empty")), q.apply(b0.min().expect("non-empty")));
    let residual_unique = rep_counts(&abar, &bbar)?[target.rank()] == 1;

    Ok(RefinementResult {
        f,
        subgroup_f: sf,
        a0,
        b0,
        complements_saturated,
        residuals_progressions,
        quotient_tight,
        quotient_coset,
        residual_tight,
        residual_shape,
        residual_min_rep_one,
        residual_unique,
    })
}

/// Elements `c` at which [`refine_partition`] applies.
pub fn admissible_refinements(w: &PartitionWitness) -> Vec<GroupElement> {
    let g = w.h.group();
    let (a, b) = w.reconstruct();
    let counts = rep_counts(&a, &b).expect("same group");
    let excluded = (w.kind == PartitionKind::Coset).then(|| g.add(w.g1, w.g2));
    g.elements()
        .filter(|&c| counts[c.rank()] == 1 && Some(c) != excluded)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::parse_group;

    fn set(g: &FiniteAbelianGroup, r: &[u32]) -> GroupSubset {
        GroupSubset::from_residues(g, r).unwrap()
    }

    fn sub(g: &FiniteAbelianGroup, r: &[u32]) -> Subgroup {
        Subgroup::from_subset(&set(g, r)).unwrap()
    }

    fn e(r: usize) -> GroupElement {
        GroupElement::from_rank(r)
    }

    #[test]
    fn verify_examples() {
        let z6 = parse_group("Z6").unwrap();
        let s = set(&z6, &[0, 1, 5]);
        let r = verify_theorem(TheoremId::Kneser, &s, &s).unwrap();
        assert!(r.hypotheses_hold && r.conclusion_holds);
        assert_eq!(r.witness["H"], json!([[0]]));

        let r = verify_theorem(TheoremId::CorollaryHalf, &set(&z6, &[0, 3]), &set(&z6, &[0, 1, 3, 4])).unwrap();
        assert!(r.hypotheses_hold && r.conclusion_holds);

        let r = verify_theorem(TheoremId::EqualityClaim, &set(&z6, &[0, 1, 4]), &set(&z6, &[0, 1, 3, 4])).unwrap();
        assert!(r.hypotheses_hold && r.conclusion_holds);

        assert!(matches!("cauchy".parse::<TheoremId>(), Err(Error::Usage(_))));
    }

    #[test]
    fn thick_examples() {
        assert!(is_thick_component(&set(&parse_group("Z7").unwrap(), &[0, 1, 3])).unwrap());
        assert!(!is_thick_component(&set(&parse_group("Z8").unwrap(), &[0, 2])).unwrap());
        assert!(is_thick_component(&set(&parse_group("Z3").unwrap(), &[0])).unwrap());
        let big = parse_group("Z21").unwrap();
        assert!(matches!(is_thick_component(&set(&big, &[0])), Err(Error::Resource(_))));
    }

    #[test]
    fn thick_matches_generic_sumset_oracle() {
        let g = parse_group("Z2xZ4").unwrap();
        for ma in 1u64..256 {
            let a = GroupSubset::from_mask(&g, ma);
            let oracle = (1u64..256).all(|mb| {
                let b = GroupSubset::from_mask(&g, mb);
                b.len() < 2
                    || sumset(&a, &b).unwrap().len() >= a.len() + b.len()
                    || a.len() + b.len() + 1 >= g.order()
            });
            assert_eq!(is_thick_component(&a).unwrap(), oracle);
        }
    }

    #[test]
    fn thick_reduction_examples() {
        let z6 = parse_group("Z6").unwrap();
        let r = thick_reduction(&set(&z6, &[0, 3])).unwrap();
        assert_eq!((r.h.as_set(), r.branch), (&set(&z6, &[0, 3]), ThickBranch::Ap));
        let z8 = parse_group("Z8").unwrap();
        let r = thick_reduction(&set(&z8, &[0, 1, 2])).unwrap();
        assert!(r.h.is_trivial() && r.branch == ThickBranch::Ap);
        let z7 = parse_group("Z7").unwrap();
        let a = set(&z7, &[0, 1, 3]);
        let r = thick_reduction(&a).unwrap();
        assert!(r.h.is_trivial() && r.branch == ThickBranch::Thick);
        assert!(check_thick_reduction(&a, &r).unwrap());
        assert!(matches!(
            thick_reduction(&set(&z7, &[0, 1, 2, 3])),
            Err(Error::Precondition { hypothesis: Hypothesis::AtMostHalf, .. })
        ));
    }

    #[test]
    fn hampla_examples() {
        let z8 = parse_group("Z8").unwrap();
        let a = set(&z8, &[0, 1, 4, 5]);
        let w = hampla_structure(&a, &set(&z8, &[0, 4])).unwrap();
        assert_eq!(w, HamplaWitness::BranchI { h: sub(&z8, &[0, 4]) });
        assert!(w.check(&a));

        let a = set(&z8, &[0, 1]);
        let w = hampla_structure(&a, &set(&z8, &[0, 1, 2])).unwrap();
        match &w {
            HamplaWitness::BranchII { h, cosets, a0, .. } => {
                assert!(h.is_whole() && cosets.is_empty());
                assert_eq!(a0, &a);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(w.check(&a));

        let z6 = parse_group("Z6").unwrap();
        assert!(matches!(
            hampla_structure(&set(&z6, &[0, 1, 4]), &set(&z6, &[0, 1, 3, 4])),
            Err(Error::Precondition { hypothesis: Hypothesis::SumsetMissesTwo, .. })
        ));
    }

    #[test]
    fn recover_coset_example() {
        let z5 = parse_group("Z5").unwrap();
        let (a, b) = (set(&z5, &[0, 1, 4]), set(&z5, &[0, 2, 3]));
        let w = recover_partition(&a, &b, &Subgroup::whole(&z5)).unwrap();
        assert_eq!(w.kind, PartitionKind::Coset);
        assert!(w.g1.is_identity() && w.g2.is_identity());
        assert_eq!(w.h1, set(&z5, &[1, 4]));
        assert_eq!(w.h2, set(&z5, &[2, 3]));
    }

    #[test]
    fn recover_punctured_example() {
        let g = parse_group("Z2xZ2xZ2").unwrap();
        let a = GroupSubset::from_coords(&g, &[[0, 0, 0], [0, 1, 0], [1, 0, 0], [1, 1, 1]]).unwrap();
        let w = recover_partition(&a, &a, &Subgroup::whole(&g)).unwrap();
        let t = g.element(&[0, 0, 1]).unwrap();
        assert_eq!(w.kind, PartitionKind::PuncturedCoset);
        assert_eq!((w.g1, w.g2), (g.identity(), t));
        assert_eq!(w.h1, a);
        assert_eq!(w.h2, shift(&a, t));
    }

    #[test]
    fn recover_rejects_other_shapes() {
        let z6 = parse_group("Z6").unwrap();
        let s = set(&z6, &[0, 1]);
        for h in all_subgroups(&z6).unwrap() {
            assert!(matches!(
                recover_partition(&s, &s, &h),
                Err(Error::Precondition { hypothesis: Hypothesis::CosetShapedSumset, .. })
            ));
        }
    }

    #[test]
    fn refine_coset_example() {
        let z5 = parse_group("Z5").unwrap();
        let w = PartitionWitness {
            kind: PartitionKind::Coset,
            g1: e(0),
            g2: e(0),
            h: Subgroup::whole(&z5),
            h1: set(&z5, &[1, 2]),
            h2: set(&z5, &[3, 4]),
        };
        let (a, b) = w.reconstruct();
        assert_eq!((a.clone(), b.clone()), (set(&z5, &[0, 1, 2]), set(&z5, &[0, 1, 2])));
        let r = refine_partition(&w, e(4)).unwrap();
        assert_eq!(r.f, e(4));
        assert!(r.subgroup_f.is_whole());
        assert_eq!((r.a0.clone(), r.b0.clone()), (a, b));
        assert!(r.all_hold(), "{r:?}");
        assert_eq!(r.residual_min_rep_one, Some(true));
    }

    #[test]
    fn refine_punctured_example() {
        let z6 = parse_group("Z6").unwrap();
        let w = PartitionWitness {
            kind: PartitionKind::PuncturedCoset,
            g1: e(0),
            g2: e(0),
            h: Subgroup::whole(&z6),
            h1: set(&z6, &[0, 1, 2]),
            h2: set(&z6, &[3, 4, 5]),
        };
        assert_eq!(w.reconstruct(), (set(&z6, &[0, 1, 2]), set(&z6, &[1, 2, 3])));
        let r = refine_partition(&w, e(1)).unwrap();
        assert_eq!(r.f, e(1));
        assert!(r.subgroup_f.is_whole());
        assert!(r.all_hold(), "{r:?}");
        assert_eq!(sumset(&r.a0, &r.b0).unwrap(), set(&z6, &[1, 2, 3, 4, 5]));
    }

    #[test]
    fn refine_rejects_repeated_representation() {
        let z5 = parse_group("Z5").unwrap();
        let w = PartitionWitness {
            kind: PartitionKind::Coset,
            g1: e(0),
            g2: e(0),
            h: Subgroup::whole(&z5),
            h1: set(&z5, &[1, 2]),
            h2: set(&z5, &[3, 4]),
        };
        // nu_2({0,1,2},{0,1,2}) = 3 and nu_1 = 2.
        for c in [e(1), e(2)] {
            assert!(matches!(
                refine_partition(&w, c),
                Err(Error::Precondition { hypothesis: Hypothesis::UniqueRepresentation, .. })
            ));
        }
    }
}
