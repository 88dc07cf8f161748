//! Random and exhaustive generators: elementary pairs, pairs assembled from
//! a quotient pair and a residual pair, and instances of the converse
//! structure construction in elementary abelian 2-groups.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

use crate::boolean::antisym_witnesses;
use crate::decompose::{check_certificate, kemperman_condition, small_sumset, Certificate, DualCertificate, KempermanCertificate};
use crate::elementary::is_elementary;
use crate::error::{Error, Result};
use crate::group::{FiniteAbelianGroup, GroupElement};
use crate::subgroup::{all_subgroups, quotient, Subgroup};
use crate::subset::GroupSubset;
use crate::sumset::{add_subgroup, lift_pair, negate, rep_counts, shift};

const MAX_ATTEMPTS: usize = 10_000;

/// A generator seeded by `seed`, on the independent stream `stream`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn random_element<R: Rng>(rng: &mut R, g: &FiniteAbelianGroup) -> GroupElement {
    GroupElement::from_rank(rng.gen_range(0..g.order()))
}

fn random_nonempty_subset<R: Rng>(rng: &mut R, g: &FiniteAbelianGroup) -> GroupSubset {
    loop {
        let s = GroupSubset::from_elements(g, g.elements().filter(|_| rng.gen_bool(0.5)));
        if !s.is_empty() {
            return s;
        }
    }
}

/// Splits `parts` at random into two non-empty sets, if it has two elements.
fn random_split<R: Rng>(rng: &mut R, parts: &GroupSubset) -> Option<(GroupSubset, GroupSubset)> {
    if parts.len() < 2 {
        return None;
    }
    loop {
        let left = GroupSubset::from_elements(parts.group(), parts.elements().filter(|_| rng.gen_bool(0.5)));
        let right = parts.difference(&left);
        if !left.is_empty() && !right.is_empty() {
            return Some((left, right));
        }
    }
}

/// One attempt at an elementary pair of the given type; `None` when the
/// recipe does not apply or the result fails the classifier.
fn try_elementary<R: Rng>(
    rng: &mut R,
    g: &FiniteAbelianGroup,
    kind: u8,
    subgroups: &[Subgroup],
) -> Result<Option<(GroupSubset, GroupSubset)>> {
    let pair = match kind {
        1 => {
            let single = GroupSubset::singleton(g, random_element(rng, g));
            let other = random_nonempty_subset(rng, g);
            if rng.gen_bool(0.5) {
                (single, other)
            } else {
                (other, single)
            }
        }
        2 => {
            let d = random_element(rng, g);
            let m = g.element_order(d)? as usize;
            if m < 2 {
                return Ok(None);
            }
            let k = rng.gen_range(1..=m);
            let l = rng.gen_range(1..=m + 1 - k);
            let progression = |start: GroupElement, len: usize| {
                GroupSubset::from_elements(g, (1..=len as u64).map(|i| g.add(start, g.mul(i, d))))
            };
            (
                progression(random_element(rng, g), k),
                progression(random_element(rng, g), l),
            )
        }
        3 | 4 => {
            let h = subgroups.choose(rng).expect("subgroups are listed");
            let mut parts = h.as_set().clone();
            if kind == 3 {
                parts.remove(g.identity());
            }
            let Some((h1, h2)) = random_split(rng, &parts) else {
                return Ok(None);
            };
            let (mut p1, mut p2) = (h1, h2);
            if kind == 3 {
                p1.insert(g.identity());
                p2.insert(g.identity());
            }
            (
                shift(&p1, random_element(rng, g)),
                shift(&negate(&p2), random_element(rng, g)),
            )
        }
        _ => return Err(Error::Domain(format!("no elementary type {kind}"))),
    };
    Ok(is_elementary(&pair.0, &pair.1)?.then_some(pair))
}

/// A random elementary pair whose witnessing type is drawn from `kinds`.
pub fn random_elementary_pair<R: Rng>(
    rng: &mut R,
    g: &FiniteAbelianGroup,
    kinds: &[u8],
) -> Result<(GroupSubset, GroupSubset)> {
    let subgroups = all_subgroups(g)?;
    for _ in 0..MAX_ATTEMPTS {
        let kind = *kinds.choose(rng).ok_or_else(|| Error::Domain("no types to draw from".into()))?;
        if let Some(pair) = try_elementary(rng, g, kind, &subgroups)? {
            return Ok(pair);
        }
    }
    Err(Error::Invariant(format!("no elementary pair drawn in {g}")))
}

/// A pair assembled from an elementary quotient pair with a uniquely
/// represented element and an elementary residual pair on that element's
/// cosets.
#[derive(Debug, Clone)]
pub struct AssembledPair {
    pub h: Subgroup,
    pub abar: GroupSubset,
    pub bbar: GroupSubset,
    pub a0: GroupSubset,
    pub b0: GroupSubset,
    pub a: GroupSubset,
    pub b: GroupSubset,
    /// Whether the deletion budget allowed a cross-check against [`lift_pair`].
    pub lifted: bool,
}

/// Draws one assembled pair in `g` over a random non-zero proper subgroup.
pub fn assemble_pair<R: Rng>(rng: &mut R, g: &FiniteAbelianGroup) -> Result<AssembledPair> {
    let candidates: Vec<Subgroup> = all_subgroups(g)?
        .into_iter()
        .filter(|h| !h.is_trivial() && !h.is_whole())
        .collect();
    let h = candidates
        .choose(rng)
        .ok_or_else(|| Error::Domain(format!("{g} has no non-zero proper subgroup")))?
        .clone();
    let q = quotient(&h);
    let target = q.target();
    let (abar, bbar, abar0, bbar0) = (0..MAX_ATTEMPTS)
        .find_map(|_| {
            let (abar, bbar) = match random_elementary_pair(rng, target, &[1, 2, 3]) {
                Ok(p) => p,
                Err(e) => return Some(Err(e)),
            };
            let counts = rep_counts(&abar, &bbar).expect("same group");
            let unique: Vec<usize> = (0..counts.len()).filter(|&c| counts[c] == 1).collect();
            let c = GroupElement::from_rank(*unique.choose(rng)?);
            let x = abar.elements().find(|&x| bbar.contains(target.sub(c, x))).expect("nu_c = 1");
            Some(Ok((abar, bbar, x, target.sub(c, x))))
        })
        .ok_or_else(|| Error::Invariant("no quotient pair with a unique representation".into()))??;

    let inner = h.as_group();
    let (ra, rb) = random_elementary_pair(rng, &inner, &[1, 2, 3, 4])?;
    let offset = |rng: &mut R, id: GroupElement| {
        let t = h.elements().collect::<Vec<_>>();
        g.add(q.representative(id), *t.choose(rng).expect("non-empty"))
    };
    let ta = offset(rng, abar0);
    let tb = offset(rng, bbar0);
    let a0 = shift(&h.embed(&ra)?, ta);
    let b0 = shift(&h.embed(&rb)?, tb);
    let del_a = h.coset(ta).difference(&a0);
    let del_b = h.coset(tb).difference(&b0);
    let a = q.preimage(&abar).difference(&del_a);
    let b = q.preimage(&bbar).difference(&del_b);

    let lifted = del_a.len() + del_b.len() < h.order();
    if lifted && lift_pair(&q, &abar, &bbar, &del_a, &del_b)? != (a.clone(), b.clone()) {
        return Err(Error::Invariant("lift_pair disagrees with direct assembly".into()));
    }
    Ok(AssembledPair {
        h,
        abar,
        bbar,
        a0,
        b0,
        a,
        b,
        lifted,
    })
}

impl AssembledPair {
    /// Failed assertions: the pair must satisfy both hypotheses and both
    /// certificates built from the assembly data must validate.
    pub fn failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !small_sumset(&self.a, &self.b) {
            out.push("small_sumset fails".to_string());
        }
        if !kemperman_condition(&self.a, &self.b) {
            out.push("kemperman_condition fails".to_string());
        }
        let kem = Certificate::Kemperman(KempermanCertificate {
            h: self.h.clone(),
            a0: self.a0.clone(),
            b0: self.b0.clone(),
        });
        let dual = Certificate::Dual(DualCertificate::Split {
            h: self.h.clone(),
            a0: self.a0.clone(),
            b0: self.b0.clone(),
        });
        for cert in [kem, dual] {
            let check = check_certificate(&self.a, &self.b, &cert);
            if !check.valid {
                out.push(format!("{} certificate fails {:?}", cert.kind(), check.failing()));
            }
        }
        out
    }
}

/// Input to the converse structure construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructInstance {
    pub f: Subgroup,
    pub h: Subgroup,
    pub s: GroupSubset,
    pub shift: GroupElement,
    pub removed: GroupSubset,
}

#[derive(Debug, Clone)]
struct Frame {
    f: Subgroup,
    h: Subgroup,
    s: GroupSubset,
    shifts: Vec<GroupElement>,
    deletions: Vec<u64>,
}

impl Frame {
    fn len(&self) -> usize {
        self.shifts.len() * self.deletions.len()
    }

    fn instance(&self, i: usize) -> StructInstance {
        let t = self.shifts[i / self.deletions.len()];
        let mask = self.deletions[i % self.deletions.len()];
        let full = shift(&add_subgroup(&self.s, &self.h), t);
        let removed = GroupSubset::from_elements(
            full.group(),
            full.elements().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, x)| x),
        );
        StructInstance {
            f: self.f.clone(),
            h: self.h.clone(),
            s: self.s.clone(),
            shift: t,
            removed,
        }
    }
}

/// Every valid `(F, H, S)` with one shift per coset of `F + H` and every
/// deletion pattern within the budget.
fn struct_frames(g: &FiniteAbelianGroup) -> Result<Vec<Frame>> {
    let subgroups = all_subgroups(g)?;
    let mut frames = Vec::new();
    for f in subgroups.iter().filter(|f| !f.is_trivial()) {
        let fe: Vec<GroupElement> = f.elements().collect();
        for h in subgroups.iter().filter(|h| f.intersection(h).is_trivial()) {
            let fh = f.join(h);
            let shifts: Vec<GroupElement> =
                g.elements().filter(|&x| fh.coset(x).min() == Some(x)).collect();
            let size = f.order() / 2 * h.order();
            let deletions: Vec<u64> = (0u64..1 << size)
                .filter(|m| 2 * (m.count_ones() as usize) < h.order())
                .collect();
            for mask in 0u64..1 << fe.len() {
                if mask.count_ones() as usize * 2 != fe.len() {
                    continue;
                }
                let s = GroupSubset::from_elements(
                    g,
                    fe.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &x)| x),
                );
                if !antisym_witnesses(&s, f)?.is_empty() {
                    frames.push(Frame {
                        f: f.clone(),
                        h: h.clone(),
                        s,
                        shifts: shifts.clone(),
                        deletions: deletions.clone(),
                    });
                }
            }
        }
    }
    Ok(frames)
}

/// Size of the full instance space of the converse construction.
pub fn struct_instance_count(g: &FiniteAbelianGroup) -> Result<usize> {
    Ok(struct_frames(g)?.iter().map(Frame::len).sum())
}

/// All instances when there are at most `limit`, otherwise `limit` instances
/// drawn uniformly with replacement, the `i`-th from stream `i` of `seed`.
pub fn struct_instances(g: &FiniteAbelianGroup, limit: usize, seed: u64) -> Result<Vec<StructInstance>> {
    let frames = struct_frames(g)?;
    let mut starts = Vec::with_capacity(frames.len());
    let mut total = 0usize;
    for fr in &frames {
        starts.push(total);
        total += fr.len();
    }
    let at = |i: usize| {
        let k = starts.partition_point(|&s| s <= i) - 1;
        frames[k].instance(i - starts[k])
    };
    if total <= limit {
        return Ok((0..total).map(at).collect());
    }
    Ok((0..limit as u64)
        .map(|i| at(stream_rng(seed, i).gen_range(0..total)))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolean::struct_synthesize;
    use crate::group::parse_group;

    #[test]
    fn random_elementary_pairs_are_elementary() {
        for spec in ["Z6", "Z2xZ4", "Z3xZ3", "Z16"] {
            let g = parse_group(spec).unwrap();
            for i in 0..50 {
                let mut rng = stream_rng(7, i);
                let (a, b) = random_elementary_pair(&mut rng, &g, &[1, 2, 3, 4]).unwrap();
                assert!(is_elementary(&a, &b).unwrap());
            }
        }
    }

    #[test]
    fn assembled_pairs_satisfy_both_hypotheses() {
        for spec in ["Z4", "Z12", "Z2xZ8", "Z2xZ2xZ2xZ2"] {
            let g = parse_group(spec).unwrap();
            for i in 0..40 {
                let p = assemble_pair(&mut stream_rng(3, i), &g).unwrap();
                assert!(p.failures().is_empty(), "{spec} {:?}", p.failures());
            }
        }
        assert!(matches!(
            assemble_pair(&mut stream_rng(0, 0), &parse_group("Z5").unwrap()),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn same_stream_same_pair() {
        let g = parse_group("Z12").unwrap();
        let p = assemble_pair(&mut stream_rng(11, 5), &g).unwrap();
        let q = assemble_pair(&mut stream_rng(11, 5), &g).unwrap();
        assert_eq!((p.a, p.b), (q.a, q.b));
    }

    #[test]
    fn struct_instances_in_small_groups_are_exhaustive_and_valid() {
        let g = parse_group("Z2xZ2xZ2").unwrap();
        let total = struct_instance_count(&g).unwrap();
        let all = struct_instances(&g, usize::MAX, 0).unwrap();
        assert_eq!(all.len(), total);
        for inst in &all {
            struct_synthesize(&inst.f, &inst.h, &inst.s, inst.shift, &inst.removed).unwrap();
        }
    }
}
