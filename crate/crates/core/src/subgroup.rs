//! Subgroups, subgroup lattice enumeration, and quotient maps.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use crate::bitset::Bits;
use crate::error::{Error, Result};
use crate::group::{FiniteAbelianGroup, GroupElement, Kind};
use crate::subset::GroupSubset;

/// Default ceiling on the group order for [`all_subgroups`].
pub const DEFAULT_SUBGROUP_CAP: usize = 512;

/// Environment variable overriding [`DEFAULT_SUBGROUP_CAP`].
pub const MAX_ORDER_ENV: &str = "SUMSET_KIT_MAX_ORDER";

/// The enumeration cap in effect: `SUMSET_KIT_MAX_ORDER` if set and valid,
/// otherwise the default.
pub fn subgroup_cap() -> usize {
    std::env::var(MAX_ORDER_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&c| c >= 1)
        .unwrap_or(DEFAULT_SUBGROUP_CAP)
}

/// Equality and hashing look only at the element set.
#[derive(Clone)]
pub struct Subgroup {
    set: GroupSubset,
    generators: Vec<GroupElement>,
}

impl Subgroup {
    /// Checks closure and wraps `set` as a subgroup.
    pub fn from_subset(set: &GroupSubset) -> Result<Subgroup> {
        let g = set.group();
        if !set.contains(g.identity()) {
            return Err(Error::Domain("subgroup must contain the identity".into()));
        }
        for a in set.elements() {
            if !set.contains(g.neg(a)) {
                return Err(Error::Domain("set is not closed under negation".into()));
            }
            for b in set.elements() {
                if !set.contains(g.add(a, b)) {
                    return Err(Error::Domain("set is not closed under addition".into()));
                }
            }
        }
        Ok(Self::from_closed(set.clone()))
    }

    /// Wraps a set already known to be closed; generators are picked greedily.
    pub(crate) fn from_closed(set: GroupSubset) -> Subgroup {
        let g = set.group().clone();
        let mut span = Bits::new(g.order());
        span.insert(0);
        let mut generators = Vec::new();
        for x in set.elements() {
            if !span.contains(x.rank()) {
                generators.push(x);
                span = join_bits(&g, &span, x);
            }
        }
        Subgroup { set, generators }
    }

    pub fn trivial(group: &FiniteAbelianGroup) -> Subgroup {
        Subgroup {
            set: GroupSubset::singleton(group, group.identity()),
            generators: Vec::new(),
        }
    }

    pub fn whole(group: &FiniteAbelianGroup) -> Subgroup {
        Self::from_closed(GroupSubset::full(group))
    }

    /// The subgroup generated by `gens`.
    pub fn generated_by(group: &FiniteAbelianGroup, gens: &[GroupElement]) -> Subgroup {
        let mut span = Bits::new(group.order());
        span.insert(0);
        for &x in gens {
            if !span.contains(x.rank()) {
                span = join_bits(group, &span, x);
            }
        }
        Self::from_closed(GroupSubset::from_bits(group, span))
    }

    /// Smallest subgroup containing `S - S`: the smallest `H` with `S` inside one `H`-coset.
    pub fn difference_span(set: &GroupSubset) -> Subgroup {
        let g = set.group();
        let Some(base) = set.min() else {
            return Subgroup::trivial(g);
        };
        let diffs: Vec<GroupElement> = set.elements().map(|x| g.sub(x, base)).collect();
        Self::generated_by(g, &diffs)
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        self.set.group()
    }

    pub fn as_set(&self) -> &GroupSubset {
        &self.set
    }

    pub fn generators(&self) -> &[GroupElement] {
        &self.generators
    }

    pub fn order(&self) -> usize {
        self.set.len()
    }

    pub fn index(&self) -> usize {
        self.group().order() / self.order()
    }

    pub fn contains(&self, g: GroupElement) -> bool {
        self.set.contains(g)
    }

    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        self.set.elements()
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }

    pub fn is_whole(&self) -> bool {
        self.order() == self.group().order()
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.set.is_subset(&other.set)
    }

    pub fn intersection(&self, other: &Subgroup) -> Subgroup {
        Self::from_closed(self.set.intersection(&other.set))
    }

    /// `H + K`.
    pub fn join(&self, other: &Subgroup) -> Subgroup {
        let mut gens = self.generators.clone();
        gens.extend_from_slice(&other.generators);
        Self::generated_by(self.group(), &gens)
    }

    /// The coset `g + H`.
    pub fn coset(&self, g: GroupElement) -> GroupSubset {
        let grp = self.group();
        GroupSubset::from_elements(grp, self.set.elements().map(|h| grp.add(g, h)))
    }

    /// This subgroup as a group in its own right; element ranks follow the
    /// parent's canonical order.
    pub fn as_group(&self) -> FiniteAbelianGroup {
        FiniteAbelianGroup::embedded_in(self.group(), self.set.bits())
    }

    /// Maps a subset of [`as_group`](Self::as_group) back into the parent.
    pub fn embed(&self, inner: &GroupSubset) -> Result<GroupSubset> {
        match inner.group().kind() {
            Kind::Embedded {
                parent, members, ..
            } if parent == self.group() && members.len() == self.order() => {
                Ok(GroupSubset::from_elements(
                    parent,
                    inner
                        .elements()
                        .map(|x| GroupElement::from_rank(members[x.rank()] as usize)),
                ))
            }
            _ => Err(Error::Domain(
                "set does not live in this subgroup's own group".into(),
            )),
        }
    }

    /// Views a subset of the parent lying inside this subgroup as a subset of
    /// [`as_group`](Self::as_group).
    pub fn restrict(&self, inner_group: &FiniteAbelianGroup, outer: &GroupSubset) -> Result<GroupSubset> {
        outer.check_same_group(&self.set)?;
        if !outer.is_subset(&self.set) {
            return Err(Error::Domain("set is not contained in the subgroup".into()));
        }
        match inner_group.kind() {
            Kind::Embedded {
                parent, index_of, ..
            } if parent == self.group() => Ok(GroupSubset::from_elements(
                inner_group,
                outer
                    .elements()
                    .map(|x| GroupElement::from_rank(index_of[x.rank()] as usize)),
            )),
            _ => Err(Error::Domain("group is not this subgroup's own group".into())),
        }
    }
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.set == other.set
    }
}

impl Eq for Subgroup {}

impl std::hash::Hash for Subgroup {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.set.hash(state);
    }
}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subgroup{:?}", self.set)
    }
}

/// Closure of `span` and `x`: the union of `span + k x` over all `k`.
fn join_bits(g: &FiniteAbelianGroup, span: &Bits, x: GroupElement) -> Bits {
    let members: Vec<usize> = span.ones().collect();
    let mut out = span.clone();
    let mut shift = x.rank();
    while !span.contains(shift) {
        for &m in &members {
            out.insert(g.add_rank(m, shift));
        }
        shift = g.add_rank(shift, x.rank());
    }
    out
}

/// Every subgroup of `group`, each exactly once, sorted by order and then by
/// canonical element list. Fails if the group order exceeds [`subgroup_cap`].
pub fn all_subgroups(group: &FiniteAbelianGroup) -> Result<Vec<Subgroup>> {
    all_subgroups_with_cap(group, subgroup_cap())
}

pub fn all_subgroups_with_cap(group: &FiniteAbelianGroup, cap: usize) -> Result<Vec<Subgroup>> {
    if group.order() > cap {
        return Err(Error::Resource(format!(
            "group {group} has order {} above the subgroup enumeration cap {cap}; \
             raise it with --max-order or {MAX_ORDER_ENV}",
            group.order()
        )));
    }
    let cached = group
        .subgroup_cache()
        .get_or_init(|| enumerate_subgroups(group));
    Ok(cached
        .iter()
        .map(|(bits, gens)| Subgroup {
            set: GroupSubset::from_bits(group, bits.clone()),
            generators: gens.clone(),
        })
        .collect())
}

/// Breadth-first closure from the trivial subgroup: every known subgroup is
/// extended by one new element at a time.
fn enumerate_subgroups(group: &FiniteAbelianGroup) -> Vec<(Bits, Vec<GroupElement>)> {
    let n = group.order();
    let mut trivial = Bits::new(n);
    trivial.insert(0);
    let mut seen: HashSet<Bits> = HashSet::new();
    seen.insert(trivial.clone());
    let mut found = vec![(trivial.clone(), Vec::new())];
    let mut queue = VecDeque::from([(trivial, Vec::<GroupElement>::new())]);
    while let Some((span, gens)) = queue.pop_front() {
        // g and g + h give the same extension for h in span.
        let mut covered = span.clone();
        for x in 0..n {
            if covered.contains(x) {
                continue;
            }
            for h in span.ones() {
                covered.insert(group.add_rank(x, h));
            }
            let ext = join_bits(group, &span, GroupElement::from_rank(x));
            if seen.insert(ext.clone()) {
                let mut g2 = gens.clone();
                g2.push(GroupElement::from_rank(x));
                found.push((ext.clone(), g2.clone()));
                queue.push_back((ext, g2));
            }
        }
    }
    found.sort_by(|a, b| {
        a.0.count()
            .cmp(&b.0.count())
            .then_with(|| a.0.cmp_members(&b.0))
    });
    found
}

/// The canonical homomorphism onto `source / kernel`, with its full inverse image.
#[derive(Clone)]
pub struct QuotientMap {
    kernel: Subgroup,
    target: FiniteAbelianGroup,
}

/// Builds the quotient map for a subgroup given as a plain set; fails if
/// the set is not closed.
pub fn quotient_by_set(kernel: &GroupSubset) -> Result<QuotientMap> {
    let h = Subgroup::from_subset(kernel)?;
    Ok(quotient(&h))
}

pub fn quotient(kernel: &Subgroup) -> QuotientMap {
    let target = FiniteAbelianGroup::quotient_of(kernel.group(), kernel.as_set().bits());
    QuotientMap {
        kernel: kernel.clone(),
        target,
    }
}

impl QuotientMap {
    pub fn source(&self) -> &FiniteAbelianGroup {
        self.kernel.group()
    }

    pub fn kernel(&self) -> &Subgroup {
        &self.kernel
    }

    /// The quotient group; coset identifiers are its element ranks.
    pub fn target(&self) -> &FiniteAbelianGroup {
        &self.target
    }

    pub fn index(&self) -> usize {
        self.target.order()
    }

    fn class_of(&self) -> &[u32] {
        match self.target.kind() {
            Kind::Quotient { class_of, .. } => class_of,
            _ => unreachable!("quotient target is always a quotient group"),
        }
    }

    /// Least representative of the coset `id`.
    pub fn representative(&self, id: GroupElement) -> GroupElement {
        match self.target.kind() {
            Kind::Quotient { reps, .. } => GroupElement::from_rank(reps[id.rank()] as usize),
            _ => unreachable!("quotient target is always a quotient group"),
        }
    }

    pub fn apply(&self, g: GroupElement) -> GroupElement {
        GroupElement::from_rank(self.class_of()[g.rank()] as usize)
    }

    pub fn image(&self, s: &GroupSubset) -> GroupSubset {
        let class_of = self.class_of();
        GroupSubset::from_elements(
            &self.target,
            s.elements()
                .map(|g| GroupElement::from_rank(class_of[g.rank()] as usize)),
        )
    }

    pub fn preimage(&self, ids: &GroupSubset) -> GroupSubset {
        let class_of = self.class_of();
        GroupSubset::from_elements(
            self.source(),
            (0..class_of.len())
                .filter(|&x| ids.contains(GroupElement::from_rank(class_of[x] as usize)))
                .map(GroupElement::from_rank),
        )
    }
}

impl fmt::Debug for QuotientMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QuotientMap({} / {:?})", self.source(), self.kernel)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::parse_group;

    fn set(g: &FiniteAbelianGroup, r: &[u32]) -> GroupSubset {
        GroupSubset::from_residues(g, r).unwrap()
    }

    /// Independent oracle: the set of all cyclic subgroups closed under joins,
    /// computed by brute-force closure of every subset of generators.
    fn oracle_subgroups(g: &FiniteAbelianGroup) -> HashSet<Vec<usize>> {
        let n = g.order();
        let mut out = HashSet::new();
        for mask in 0u64..(1 << n) {
            let members: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
            if !members.contains(&0) {
                continue;
            }
            let closed = members
                .iter()
                .all(|&a| members.iter().all(|&b| members.contains(&g.add_rank(a, b))));
            if closed {
                out.insert(members);
            }
        }
        out
    }

    #[test]
    fn subgroup_counts() {
        let z4 = parse_group("Z4").unwrap();
        let subs = all_subgroups(&z4).unwrap();
        assert_eq!(subs.len(), 3);
        assert_eq!(subs[1].as_set(), &set(&z4, &[0, 2]));
        assert_eq!(all_subgroups(&parse_group("Z2xZ2").unwrap()).unwrap().len(), 5);
        let z6 = parse_group("Z6").unwrap();
        let subs = all_subgroups(&z6).unwrap();
        let lists: Vec<Vec<u32>> = subs
            .iter()
            .map(|h| h.elements().map(|x| x.rank() as u32).collect())
            .collect();
        assert_eq!(lists, vec![vec![0], vec![0, 3], vec![0, 2, 4], vec![0, 1, 2, 3, 4, 5]]);
    }

    #[test]
    fn enumeration_matches_brute_force_closure() {
        for spec in ["Z8", "Z2xZ4", "Z2xZ2xZ2", "Z3xZ3", "Z12", "Z2xZ6", "Z2xZ2xZ2xZ2"] {
            let g = parse_group(spec).unwrap();
            let ours: HashSet<Vec<usize>> = all_subgroups(&g)
                .unwrap()
                .iter()
                .map(|h| h.elements().map(GroupElement::rank).collect())
                .collect();
            assert_eq!(ours, oracle_subgroups(&g), "{spec}");
        }
    }

    #[test]
    fn lattice_closed_under_intersection_and_lagrange() {
        for spec in ["Z12", "Z2xZ4", "Z2xZ2xZ2", "Z3xZ3"] {
            let g = parse_group(spec).unwrap();
            let subs = all_subgroups(&g).unwrap();
            for h in &subs {
                assert_eq!(g.order() % h.order(), 0);
                for k in &subs {
                    let meet = h.intersection(k);
                    assert!(subs.contains(&meet));
                }
            }
        }
    }

    #[test]
    fn cap_is_enforced() {
        let g = parse_group("Z2xZ2xZ2xZ2").unwrap();
        assert!(matches!(all_subgroups_with_cap(&g, 8), Err(Error::Resource(_))));
        assert!(all_subgroups_with_cap(&g, 16).is_ok());
    }

    #[test]
    fn generators_span_the_subgroup() {
        let g = parse_group("Z2xZ4").unwrap();
        for h in all_subgroups(&g).unwrap() {
            assert_eq!(Subgroup::generated_by(&g, h.generators()), h);
            assert!(h.generators().len() <= 2);
        }
    }

    #[test]
    fn non_closed_sets_rejected() {
        let z6 = parse_group("Z6").unwrap();
        assert!(Subgroup::from_subset(&set(&z6, &[0, 1])).is_err());
        assert!(Subgroup::from_subset(&set(&z6, &[1, 3])).is_err());
        assert!(quotient_by_set(&set(&z6, &[0, 2])).is_err());
    }

    #[test]
    fn quotient_examples() {
        let z6 = parse_group("Z6").unwrap();
        let q = quotient_by_set(&set(&z6, &[0, 3])).unwrap();
        let e = |r| GroupElement::from_rank(r);
        assert_eq!(q.index(), 3);
        assert_eq!(q.apply(e(1)), q.apply(e(4)));
        let zero = GroupSubset::singleton(q.target(), q.apply(e(0)));
        assert_eq!(q.preimage(&zero), set(&z6, &[0, 3]));

        let q1 = quotient(&Subgroup::trivial(&z6));
        assert_eq!(q1.index(), 6);
        let images: HashSet<_> = z6.elements().map(|x| q1.apply(x)).collect();
        assert_eq!(images.len(), 6);

        let g = parse_group("Z4xZ2").unwrap();
        let h = GroupSubset::from_coords(&g, &[[0, 0], [2, 0]]).unwrap();
        assert_eq!(quotient_by_set(&h).unwrap().index(), 4);
    }

    #[test]
    fn quotient_is_a_homomorphism_with_uniform_fibres() {
        for spec in ["Z8", "Z2xZ4", "Z2xZ2xZ2", "Z3xZ3", "Z4xZ4", "Z2xZ2xZ2xZ2"] {
            let g = parse_group(spec).unwrap();
            for h in all_subgroups(&g).unwrap() {
                let q = quotient(&h);
                assert_eq!(q.index() * h.order(), g.order());
                let mut sizes = vec![0usize; q.index()];
                for a in g.elements() {
                    sizes[q.apply(a).rank()] += 1;
                    for b in g.elements() {
                        let same = q.apply(a) == q.apply(b);
                        assert_eq!(same, h.contains(g.sub(a, b)));
                        assert_eq!(q.apply(g.add(a, b)), q.target().add(q.apply(a), q.apply(b)));
                    }
                }
                assert!(sizes.iter().all(|&s| s == h.order()));
            }
        }
    }

    #[test]
    fn preimage_of_image_is_saturation() {
        let g = parse_group("Z2xZ4").unwrap();
        for h in all_subgroups(&g).unwrap() {
            let q = quotient(&h);
            for mask in 1u64..256 {
                let s = GroupSubset::from_mask(&g, mask);
                let mut sat = GroupSubset::empty(&g);
                for x in s.elements() {
                    sat = sat.union(&h.coset(x));
                }
                assert_eq!(q.preimage(&q.image(&s)), sat);
            }
        }
    }

    #[test]
    fn embedded_subgroup_round_trip() {
        let g = parse_group("Z2xZ4").unwrap();
        let h = Subgroup::generated_by(&g, &[g.element(&[1, 2]).unwrap()]);
        let inner = h.as_group();
        assert_eq!(inner.order(), 2);
        let s = h.restrict(&inner, h.as_set()).unwrap();
        assert!(s.is_full());
        assert_eq!(&h.embed(&s).unwrap(), h.as_set());
        assert_eq!(inner.coords(GroupElement::from_rank(1)), vec![1, 2]);
    }

    #[test]
    fn nested_quotients_compose() {
        let g = parse_group("Z8").unwrap();
        let h = Subgroup::generated_by(&g, &[GroupElement::from_rank(4)]);
        let q = quotient(&h);
        let qq = quotient(&Subgroup::generated_by(q.target(), &[q.apply(GroupElement::from_rank(2))]));
        assert_eq!(qq.index(), 2);
        let x = qq.apply(q.apply(GroupElement::from_rank(3)));
        assert_eq!(qq.target().coords(x), vec![1]);
    }
}
