//! Small doubling in elementary abelian 2-groups: antisymmetric subsets,
//! self-pairs, the two-case structure of sets with `|2A| < 2|A|`, its
//! converse, and the earlier bounds it sharpens.

use num_rational::Ratio;
use serde_json::json;

use crate::error::{Error, Hypothesis, Result};
use crate::group::{FiniteAbelianGroup, GroupElement};
use crate::json::{self, RationalWire};
use crate::subgroup::{quotient, Subgroup};
use crate::subset::GroupSubset;
use crate::sumset::{add_subgroup, is_aperiodic, period_unchecked, shift, sumset_unchecked};
use crate::theorems::VerificationReport;

fn require_exponent_two(g: &FiniteAbelianGroup) -> Result<()> {
    if g.has_exponent_two() {
        Ok(())
    } else {
        Err(Error::Domain(format!("group {g} does not have exponent 2")))
    }
}

/// `S` is `h0`-antisymmetric in `H` when `H = S u (h0+S)` disjointly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AntisymWitness {
    pub h: Subgroup,
    pub h0: GroupElement,
    pub s: GroupSubset,
}

impl AntisymWitness {
    pub fn is_valid(&self) -> bool {
        let g = self.h.group();
        !self.h0.is_identity()
            && self.h.contains(self.h0)
            && self.s.is_subset(self.h.as_set())
            && 2 * self.s.len() == self.h.order()
            && self.s.union(&shift(&self.s, self.h0)) == *self.h.as_set()
            && g.has_exponent_two()
    }
}

/// Every non-zero `h0` in `H` for which `S` is `h0`-antisymmetric.
pub fn antisym_witnesses(s: &GroupSubset, h: &Subgroup) -> Result<Vec<GroupElement>> {
    s.check_same_group(h.as_set())?;
    require_exponent_two(s.group())?;
    if !s.is_subset(h.as_set()) {
        return Err(Error::Domain("S must lie in H".into()));
    }
    if 2 * s.len() != h.order() {
        return Ok(Vec::new());
    }
    Ok(h.elements()
        .filter(|&h0| !h0.is_identity() && shift(s, h0).is_disjoint(s))
        .collect())
}

/// `A = g + S` with `S` an aperiodic `h0`-antisymmetric subset of `H`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelfPairWitness {
    pub g: GroupElement,
    pub antisym: AntisymWitness,
}

impl SelfPairWitness {
    pub fn check(&self, a: &GroupSubset) -> bool {
        self.antisym.is_valid()
            && is_aperiodic(&self.antisym.s)
            && shift(&self.antisym.s, self.g) == *a
    }

    pub fn to_json(&self) -> serde_json::Value {
        let grp = self.antisym.h.group();
        json!({
            "g": grp.coords(self.g),
            "H": json::sub(&self.antisym.h),
            "h0": grp.coords(self.antisym.h0),
            "S": json::set(&self.antisym.s),
        })
    }
}

/// The least two-element subgroup: generated by the first unit vector of a
/// direct product, otherwise by the least non-zero element.
fn canonical_two_element(g: &FiniteAbelianGroup) -> Option<Subgroup> {
    let unit = g.moduli().and_then(|m| {
        let mut coords = vec![0u32; m.len()];
        *coords.first_mut()? = 1;
        g.element(&coords).ok()
    });
    let x = unit.or_else(|| g.elements().find(|x| !x.is_identity()))?;
    Some(Subgroup::generated_by(g, &[x]))
}

/// A shift of an aperiodic antisymmetric subset equal to `A`, if one exists;
/// `g` is the least element of `A`.
pub fn selfpair_witness(a: &GroupSubset) -> Result<Option<SelfPairWitness>> {
    let grp = a.group();
    require_exponent_two(grp)?;
    let g = a
        .min()
        .ok_or_else(|| Error::precondition(Hypothesis::NonEmpty, "A must be non-empty"))?;
    let s = shift(a, g);
    if s.len() == 1 {
        return Ok(canonical_two_element(grp).map(|h| {
            let h0 = h.elements().find(|x| !x.is_identity()).expect("order two");
            SelfPairWitness {
                g,
                antisym: AntisymWitness { h, h0, s },
            }
        }));
    }
    if !is_aperiodic(&s) {
        return Ok(None);
    }
    let h = Subgroup::difference_span(&s);
    if h.order() != 2 * s.len() {
        return Ok(None);
    }
    Ok(antisym_witnesses(&s, &h)?.first().map(|&h0| SelfPairWitness {
        g,
        antisym: AntisymWitness { h, h0, s },
    }))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StructClassification {
    /// `A` lies in an `H`-coset and `|A| > |H|/2`.
    CaseI { h: Subgroup },
    /// `A = (shift + S + H) \ removed` with `S` aperiodic antisymmetric in `F`.
    CaseII {
        f: Subgroup,
        h: Subgroup,
        s: GroupSubset,
        shift: GroupElement,
        removed: GroupSubset,
    },
}

impl StructClassification {
    pub fn case(&self) -> &'static str {
        match self {
            StructClassification::CaseI { .. } => "I",
            StructClassification::CaseII { .. } => "II",
        }
    }

    /// Re-checks every invariant of the case against `A`.
    pub fn check(&self, a: &GroupSubset) -> bool {
        let grp = a.group();
        if !grp.has_exponent_two() || a.is_empty() {
            return false;
        }
        match self {
            StructClassification::CaseI { h } => {
                h.group() == grp && add_subgroup(a, h).len() == h.order() && 2 * a.len() > h.order()
            }
            StructClassification::CaseII {
                f,
                h,
                s,
                shift: t,
                removed,
            } => {
                if f.group() != grp || h.group() != grp || s.group() != grp || removed.group() != grp {
                    return false;
                }
                let full = shift(&add_subgroup(s, h), *t);
                let antisym = s.is_subset(f.as_set())
                    && antisym_witnesses(s, f).map(|w| !w.is_empty()).unwrap_or(false);
                f.order() >= 8
                    && f.intersection(h).is_trivial()
                    && antisym
                    && is_aperiodic(s)
                    && removed.is_subset(&full)
                    && 2 * removed.len() < h.order()
                    && full.difference(removed) == *a
                    && sumset_unchecked(a, a).len() == (f.order() - 1) * h.order()
            }
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            StructClassification::CaseI { h } => json!({"case": "I", "H": json::sub(h)}),
            StructClassification::CaseII {
                f,
                h,
                s,
                shift,
                removed,
            } => json!({
                "case": "II",
                "F": json::sub(f),
                "H": json::sub(h),
                "S": json::set(s),
                "shift": f.group().coords(*shift),
                "removed": json::set(removed),
                "doubling": (f.order() - 1) * h.order(),
            }),
        }
    }
}

fn require_small_doubling(a: &GroupSubset) -> Result<GroupSubset> {
    require_exponent_two(a.group())?;
    if a.is_empty() {
        return Err(Error::precondition(Hypothesis::NonEmpty, "A must be non-empty"));
    }
    let two_a = sumset_unchecked(a, a);
    if two_a.len() >= 2 * a.len() {
        return Err(Error::precondition(
            Hypothesis::SmallDoubling,
            format!("|2A| = {} is not below 2|A| = {}", two_a.len(), 2 * a.len()),
        ));
    }
    Ok(two_a)
}

/// A subgroup `F` with `F + H = target` and `F n H = {0}`, built by adding
/// elements of `target` in rank order.
fn greedy_complement(target: &GroupSubset, h: &Subgroup) -> Subgroup {
    let grp = h.group();
    let mut gens = Vec::new();
    let mut f = Subgroup::trivial(grp);
    for x in target.elements() {
        if f.order() * h.order() == target.len() {
            break;
        }
        if !add_subgroup(f.as_set(), h).contains(x) {
            gens.push(x);
            f = Subgroup::generated_by(grp, &gens);
        }
    }
    f
}

/// Places `A` into case (i) or (ii) of the structure theorem, via the
/// quotient by `H = pi(2A)`.
pub fn struct_classify(a: &GroupSubset) -> Result<StructClassification> {
    let two_a = require_small_doubling(a)?;
    let grp = a.group();
    let h = period_unchecked(&two_a);
    if two_a.len() == h.order() {
        return Ok(StructClassification::CaseI { h });
    }
    let q = quotient(&h);
    let abar = q.image(a);
    let pair = selfpair_witness(&abar)?.ok_or_else(|| {
        Error::Invariant(format!("quotient image of {a:?} is not a shifted antisymmetric set"))
    })?;
    let fbar = &pair.antisym.h;
    let f = greedy_complement(&q.preimage(fbar.as_set()), &h);
    let s = GroupSubset::from_elements(
        grp,
        f.elements().filter(|&x| pair.antisym.s.contains(q.apply(x))),
    );
    let t = q.representative(pair.g);
    let removed = shift(&add_subgroup(&s, &h), t).difference(a);
    let cls = StructClassification::CaseII {
        f,
        h,
        s,
        shift: t,
        removed,
    };
    if !cls.check(a) {
        return Err(Error::Invariant(format!("classification of {a:?} does not validate")));
    }
    Ok(cls)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SynthesizedSet {
    pub a: GroupSubset,
    pub predicted_doubling: usize,
}

/// Builds `A = (shift + S + H) \ removed` and its predicted doubling
/// `(|F| - |pi(S)|) |H|`.
pub fn struct_synthesize(
    f: &Subgroup,
    h: &Subgroup,
    s: &GroupSubset,
    t: GroupElement,
    removed: &GroupSubset,
) -> Result<SynthesizedSet> {
    let grp = f.group();
    let contract = |msg: &str| Err(Error::Contract(msg.to_string()));
    if h.group() != grp || s.group() != grp || removed.group() != grp || !grp.contains(t) {
        return contract("all inputs must share one group");
    }
    if !grp.has_exponent_two() {
        return contract("exponent_two: the group must have exponent 2");
    }
    if f.is_trivial() {
        return contract("F_nonzero: F must be non-trivial");
    }
    if !f.intersection(h).is_trivial() {
        return contract("F_meet_H_trivial: F and H must intersect trivially");
    }
    if !s.is_subset(f.as_set()) || antisym_witnesses(s, f)?.is_empty() {
        return contract("S_antisymmetric: S must be an antisymmetric subset of F");
    }
    let full = shift(&add_subgroup(s, h), t);
    if !removed.is_subset(&full) {
        return contract("removed_inside: removed elements must lie in shift+S+H");
    }
    if 2 * removed.len() >= h.order() {
        return contract("removal_budget: fewer than |H|/2 elements may be removed");
    }
    let a = full.difference(removed);
    let predicted_doubling = (f.order() - period_unchecked(s).order()) * h.order();
    let actual = sumset_unchecked(&a, &a).len();
    if actual != predicted_doubling || actual >= 2 * a.len() {
        return Err(Error::Invariant(format!(
            "|2A| = {actual}, predicted {predicted_doubling}, 2|A| = {}",
            2 * a.len()
        )));
    }
    Ok(SynthesizedSet { a, predicted_doubling })
}

/// `u(c) = (3c - 1 - c^2) / (2c - 1)`.
pub fn density_bound(c: Ratio<i64>) -> Ratio<i64> {
    let one = Ratio::from_integer(1);
    (Ratio::from_integer(3) * c - one - c * c) / (Ratio::from_integer(2) * c - one)
}

/// Checks the two earlier structure results for a set with `|2A| < 2|A|`:
/// the shape of `2A` inside the least subgroup `H` with `A` in an `H`-coset,
/// and the density `|A| >= u(c)|H|`.
pub fn verify_prior_bounds(a: &GroupSubset) -> Result<VerificationReport> {
    let two_a = require_small_doubling(a)?;
    let grp = a.group();
    let c = Ratio::new(two_a.len() as i64, a.len() as i64);

    let h = Subgroup::difference_span(a);
    let missing = h.as_set().difference(&two_a);
    let seven_quarters = Ratio::new(7, 4);
    let (hnp_holds, hnp_witness) = if missing.is_empty() {
        (true, json!({"branch": "2A=H", "H": json::sub(&h)}))
    } else {
        let h0 = missing.min().expect("non-empty");
        let f_set = shift(&missing, h0);
        let f = Subgroup::from_subset(&f_set).ok();
        let holds = c >= seven_quarters
            && f.as_ref().is_some_and(|f| 8 * f.order() <= h.order() && two_a.is_subset(h.as_set()));
        (
            holds,
            json!({"branch": "2A=H\\(h0+F)", "H": json::sub(&h), "h0": grp.coords(h0), "F": json::set(&f_set)}),
        )
    };

    // Doubling is translation invariant, so the density is measured in the
    // least subgroup containing a translate of A.
    let u = density_bound(c);
    let dhp_holds = Ratio::from_integer(a.len() as i64) >= u * Ratio::from_integer(h.order() as i64);

    Ok(VerificationReport {
        theorem_id: "prior_bounds".into(),
        hypotheses_hold: true,
        conclusion_holds: hnp_holds && dhp_holds,
        witness: json!({
            "c": RationalWire::from(c),
            "doubling_shape": {"holds": hnp_holds, "witness": hnp_witness},
            "density": {"holds": dhp_holds, "H": json::sub(&h), "shift": grp.coords(a.min().expect("non-empty")), "u": RationalWire::from(u)},
        }),
    })
}
