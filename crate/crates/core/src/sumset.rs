//! Sumsets, periods, representation counts, and coset saturation.

use crate::bitset::Bits;
use crate::error::{Error, Result};
use crate::group::GroupElement;
use crate::subgroup::{QuotientMap, Subgroup};
use crate::subset::GroupSubset;

fn nonempty(s: &GroupSubset, what: &str) -> Result<()> {
    if s.is_empty() {
        Err(Error::Domain(format!("{what} must be non-empty")))
    } else {
        Ok(())
    }
}

/// `A + B`. Both operands must be non-empty and share an ambient group.
pub fn sumset(a: &GroupSubset, b: &GroupSubset) -> Result<GroupSubset> {
    a.check_same_group(b)?;
    nonempty(a, "first summand")?;
    nonempty(b, "second summand")?;
    Ok(sumset_unchecked(a, b))
}

pub(crate) fn sumset_unchecked(a: &GroupSubset, b: &GroupSubset) -> GroupSubset {
    let g = a.group();
    let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    let lb: Vec<usize> = large.bits().ones().collect();
    let mut out = Bits::new(g.order());
    for x in small.bits().ones() {
        for &y in &lb {
            out.insert(g.add_rank(x, y));
        }
    }
    GroupSubset::from_bits(g, out)
}

/// `-A`.
pub fn negate(a: &GroupSubset) -> GroupSubset {
    let g = a.group();
    GroupSubset::from_elements(g, a.elements().map(|x| g.neg(x)))
}

/// `A + {t}`.
pub fn shift(a: &GroupSubset, t: GroupElement) -> GroupSubset {
    let g = a.group();
    GroupSubset::from_elements(g, a.elements().map(|x| g.add(x, t)))
}

/// `C + H`.
pub fn add_subgroup(c: &GroupSubset, h: &Subgroup) -> GroupSubset {
    sumset_unchecked(c, h.as_set())
}

/// The stabilizer `{g : S + g = S}`.
pub fn period(s: &GroupSubset) -> Result<Subgroup> {
    nonempty(s, "set")?;
    Ok(period_unchecked(s))
}

pub(crate) fn period_unchecked(s: &GroupSubset) -> Subgroup {
    let g = s.group();
    let base = s.min().expect("non-empty");
    // Any period t maps base into S, so t lies in S - base.
    let mut stab = Bits::new(g.order());
    for x in s.elements() {
        let t = g.sub(x, base);
        if s.elements().all(|y| s.contains(g.add(y, t))) {
            stab.insert(t.rank());
        }
    }
    Subgroup::from_closed(GroupSubset::from_bits(g, stab))
}

pub fn is_aperiodic(s: &GroupSubset) -> bool {
    !s.is_empty() && period_unchecked(s).is_trivial()
}

/// Representation counts `nu_c(A,B)` for every `c`, indexed by rank.
pub fn rep_counts(a: &GroupSubset, b: &GroupSubset) -> Result<Vec<usize>> {
    a.check_same_group(b)?;
    let g = a.group();
    let mut counts = vec![0usize; g.order()];
    let lb: Vec<usize> = b.bits().ones().collect();
    for x in a.bits().ones() {
        for &y in &lb {
            counts[g.add_rank(x, y)] += 1;
        }
    }
    Ok(counts)
}

/// Number of ordered pairs `(a,b)` in `A x B` with `a + b = c`.
pub fn rep_count(c: GroupElement, a: &GroupSubset, b: &GroupSubset) -> Result<usize> {
    a.check_same_group(b)?;
    let g = a.group();
    if !g.contains(c) {
        return Err(Error::Domain("element outside the ambient group".into()));
    }
    Ok(a.elements().filter(|&x| b.contains(g.sub(c, x))).count())
}

/// `mu(A,B)`: the least representation count over `A + B`.
pub fn min_rep(a: &GroupSubset, b: &GroupSubset) -> Result<usize> {
    a.check_same_group(b)?;
    nonempty(a, "first summand")?;
    nonempty(b, "second summand")?;
    let counts = rep_counts(a, b)?;
    Ok(counts.into_iter().filter(|&n| n > 0).min().unwrap_or(0))
}

/// `|C + H| - |C|`; zero iff `C` is a union of `H`-cosets.
pub fn saturation_defect(c: &GroupSubset, h: &Subgroup) -> Result<usize> {
    nonempty(c, "set")?;
    c.check_same_group(h.as_set())?;
    Ok(add_subgroup(c, h).len() - c.len())
}

pub fn is_union_of_cosets(c: &GroupSubset, h: &Subgroup) -> bool {
    add_subgroup(c, h).len() == c.len()
}

/// Lifts a quotient pair with `|Abar + Bbar| = |Abar| + |Bbar| - 1` to
/// `(preimage(Abar) \ del_a, preimage(Bbar) \ del_b)`, provided fewer than
/// `|H|` elements are deleted in total.
pub fn lift_pair(
    q: &QuotientMap,
    abar: &GroupSubset,
    bbar: &GroupSubset,
    del_a: &GroupSubset,
    del_b: &GroupSubset,
) -> Result<(GroupSubset, GroupSubset)> {
    if abar.group() != q.target() || bbar.group() != q.target() {
        return Err(Error::Contract(
            "quotient sets must live in the quotient group".into(),
        ));
    }
    if del_a.group() != q.source() || del_b.group() != q.source() {
        return Err(Error::Contract(
            "deletion sets must live in the source group".into(),
        ));
    }
    if abar.is_empty() || bbar.is_empty() {
        return Err(Error::Contract("quotient sets must be non-empty".into()));
    }
    let sum = sumset_unchecked(abar, bbar);
    if sum.len() + 1 != abar.len() + bbar.len() {
        return Err(Error::Contract(format!(
            "quotient pair has |Abar+Bbar| = {}, expected |Abar|+|Bbar|-1 = {}",
            sum.len(),
            abar.len() + bbar.len() - 1
        )));
    }
    let budget = del_a.len() + del_b.len();
    if budget >= q.kernel().order() {
        return Err(Error::Contract(format!(
            "deletion budget {budget} must be below |H| = {}",
            q.kernel().order()
        )));
    }
    let full_a = q.preimage(abar);
    let full_b = q.preimage(bbar);
    if !del_a.is_subset(&full_a) || !del_b.is_subset(&full_b) {
        return Err(Error::Contract(
            "deletions must lie inside the lifted sets".into(),
        ));
    }
    Ok((full_a.difference(del_a), full_b.difference(del_b)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{parse_group, FiniteAbelianGroup};
    use crate::subgroup::{all_subgroups, quotient_by_set};

    fn g(spec: &str) -> FiniteAbelianGroup {
        parse_group(spec).unwrap()
    }

    fn set(grp: &FiniteAbelianGroup, r: &[u32]) -> GroupSubset {
        GroupSubset::from_residues(grp, r).unwrap()
    }

    fn e(r: usize) -> GroupElement {
        GroupElement::from_rank(r)
    }

    /// Oracle: sumset by listing every pair through coordinates.
    fn naive_sumset(a: &GroupSubset, b: &GroupSubset) -> Vec<Vec<u32>> {
        let grp = a.group();
        let m = grp.moduli().unwrap();
        let mut out: Vec<Vec<u32>> = Vec::new();
        for x in a.coords() {
            for y in b.coords() {
                let s: Vec<u32> = x
                    .iter()
                    .zip(&y)
                    .zip(m)
                    .map(|((p, q), mm)| (p + q) % mm)
                    .collect();
                out.push(s);
            }
        }
        out.sort();
        out.dedup();
        out
    }

    #[test]
    fn sumset_examples() {
        let z5 = g("Z5");
        assert_eq!(sumset(&set(&z5, &[0, 1]), &set(&z5, &[0, 2])).unwrap(), set(&z5, &[0, 1, 2, 3]));
        let z6 = g("Z6");
        assert!(sumset(&set(&z6, &[0, 1, 4]), &set(&z6, &[0, 1, 3, 4])).unwrap().is_full());
        let c = g("Z2xZ2xZ2");
        let s = GroupSubset::from_coords(&c, &[[0, 0, 0], [0, 1, 0], [1, 0, 0], [1, 1, 1]]).unwrap();
        let ss = sumset(&s, &s).unwrap();
        assert_eq!(ss.len(), 7);
        assert!(!ss.contains(c.element(&[0, 0, 1]).unwrap()));
    }

    #[test]
    fn sumset_rejects_empty_and_mixed_groups() {
        let z5 = g("Z5");
        assert!(matches!(sumset(&GroupSubset::empty(&z5), &set(&z5, &[0])), Err(Error::Domain(_))));
        assert!(sumset(&set(&g("Z6"), &[0]), &set(&z5, &[0])).is_err());
    }

    #[test]
    fn sumset_matches_coordinate_oracle() {
        for spec in ["Z7", "Z2xZ4", "Z3xZ3"] {
            let grp = g(spec);
            let n = grp.order();
            for ma in (1u64..(1 << n)).step_by(7) {
                for mb in (1u64..(1 << n)).step_by(11) {
                    let a = GroupSubset::from_mask(&grp, ma);
                    let b = GroupSubset::from_mask(&grp, mb);
                    assert_eq!(sumset(&a, &b).unwrap().coords(), naive_sumset(&a, &b));
                }
            }
        }
    }

    #[test]
    fn negate_and_shift() {
        let z6 = g("Z6");
        assert_eq!(negate(&set(&z6, &[0, 1, 4])), set(&z6, &[0, 5, 2]));
        assert_eq!(shift(&set(&z6, &[0, 1, 4]), e(3)), set(&z6, &[3, 4, 1]));
    }

    #[test]
    fn period_examples() {
        let z6 = g("Z6");
        assert_eq!(period(&set(&z6, &[0, 2, 4])).unwrap().as_set(), &set(&z6, &[0, 2, 4]));
        assert!(period(&set(&g("Z5"), &[0, 1])).unwrap().is_trivial());
        assert_eq!(period(&set(&z6, &[0, 1, 3, 4])).unwrap().as_set(), &set(&z6, &[0, 3]));
        assert!(period(&GroupSubset::empty(&z6)).is_err());
    }

    #[test]
    fn period_matches_all_shift_oracle() {
        let grp = g("Z2xZ4");
        for mask in 1u64..256 {
            let s = GroupSubset::from_mask(&grp, mask);
            let oracle: Vec<GroupElement> =
                grp.elements().filter(|&t| shift(&s, t) == s).collect();
            assert_eq!(period(&s).unwrap().elements().collect::<Vec<_>>(), oracle);
        }
    }

    #[test]
    fn rep_count_examples() {
        let z6 = g("Z6");
        let a = set(&z6, &[0, 1, 4]);
        let b = set(&z6, &[0, 1, 3, 4]);
        assert_eq!(rep_count(e(3), &a, &b).unwrap(), 1);
        let z4 = g("Z4");
        let s = set(&z4, &[0, 1]);
        assert_eq!(rep_count(e(1), &s, &s).unwrap(), 2);
        assert_eq!(rep_count(e(3), &s, &s).unwrap(), 0);
    }

    #[test]
    fn min_rep_examples() {
        let z4 = g("Z4");
        assert_eq!(min_rep(&set(&z4, &[0, 1]), &set(&z4, &[0, 1])).unwrap(), 1);
        let z6 = g("Z6");
        assert_eq!(min_rep(&set(&z6, &[0, 3]), &set(&z6, &[0, 3])).unwrap(), 2);
        assert_eq!(min_rep(&set(&z6, &[0, 1, 4]), &set(&z6, &[0, 1, 3, 4])).unwrap(), 1);
        assert!(min_rep(&GroupSubset::empty(&z6), &set(&z6, &[0])).is_err());
    }

    #[test]
    fn saturation_defect_examples() {
        let z6 = g("Z6");
        let subs = all_subgroups(&z6).unwrap();
        let h2 = &subs[1];
        let h3 = &subs[2];
        assert_eq!(saturation_defect(&set(&z6, &[0, 1, 4]), h2).unwrap(), 1);
        assert_eq!(saturation_defect(&set(&z6, &[0, 3]), h2).unwrap(), 0);
        assert_eq!(saturation_defect(&set(&z6, &[1]), h3).unwrap(), 2);
    }

    #[test]
    fn lift_pair_examples() {
        let z6 = g("Z6");
        let q = quotient_by_set(&set(&z6, &[0, 3])).unwrap();
        let bar = q.image(&set(&z6, &[0, 1]));
        let none = GroupSubset::empty(&z6);
        assert!(matches!(
            lift_pair(&q, &bar, &bar, &set(&z6, &[3, 4]), &none),
            Err(Error::Contract(_))
        ));
        let (a, b) = lift_pair(&q, &bar, &bar, &set(&z6, &[3]), &none).unwrap();
        assert_eq!(a, set(&z6, &[0, 1, 4]));
        assert_eq!(b, set(&z6, &[0, 1, 3, 4]));
        assert_eq!(sumset(&a, &b).unwrap().len(), 6);
        let (a, b) = lift_pair(&q, &bar, &bar, &none, &none).unwrap();
        assert_eq!(a, set(&z6, &[0, 1, 3, 4]));
        assert!(sumset(&a, &b).unwrap().len() < a.len() + b.len());
    }

    #[test]
    fn lift_pair_rejects_large_quotient_sumset() {
        let z6 = g("Z6");
        let q = quotient_by_set(&set(&z6, &[0, 2, 4])).unwrap();
        let bar = GroupSubset::full(q.target());
        // |Abar+Bbar| = 2 but |Abar|+|Bbar|-1 = 3.
        let none = GroupSubset::empty(&z6);
        assert!(matches!(lift_pair(&q, &bar, &bar, &none, &none), Err(Error::Contract(_))));
    }
}
