use proptest::prelude::*;

use sumset_kit::boolean::{struct_classify, struct_synthesize, StructClassification};
use sumset_kit::decompose::{
    check_certificate, decomposition_tree, dual_decompose, kemperman_condition, kemperman_decompose,
    me_decompose, small_sumset, Certificate, TreeMode,
};
use sumset_kit::elementary::{check_elementary_witness, classify_elementary, is_elementary};
use sumset_kit::group::{parse_group, FiniteAbelianGroup, GroupElement};
use sumset_kit::subgroup::{all_subgroups, quotient};
use sumset_kit::subset::GroupSubset;
use sumset_kit::sumset::{add_subgroup, min_rep, period, rep_counts, shift, sumset};
use sumset_kit::synth::{stream_rng, struct_instances};
use sumset_kit::theorems::{check_thick_reduction, thick_reduction};

const GROUPS: &[&str] = &[
    "Z5", "Z6", "Z8", "Z2xZ4", "Z9", "Z3xZ3", "Z10", "Z12", "Z2xZ6", "Z14", "Z15", "Z16", "Z2xZ8", "Z4xZ4",
    "Z2xZ2xZ4",
];

fn group() -> impl Strategy<Value = FiniteAbelianGroup> {
    prop::sample::select(GROUPS).prop_map(|s| parse_group(s).unwrap())
}

fn nonempty(g: &FiniteAbelianGroup, mask: u64) -> GroupSubset {
    let full = (1u64 << g.order()) - 1;
    let m = mask & full;
    GroupSubset::from_mask(g, if m == 0 { 1 } else { m })
}

fn group_and_pair() -> impl Strategy<Value = (FiniteAbelianGroup, GroupSubset, GroupSubset)> {
    (group(), any::<u64>(), any::<u64>()).prop_map(|(g, x, y)| {
        let a = nonempty(&g, x);
        let b = nonempty(&g, y);
        (g, a, b)
    })
}

/// Sparse pairs hit the small-sumset hypothesis far more often.
fn sparse_pair() -> impl Strategy<Value = (FiniteAbelianGroup, GroupSubset, GroupSubset)> {
    (group(), any::<u64>(), any::<u64>(), any::<u64>(), any::<u64>()).prop_map(|(g, x, y, u, v)| {
        let a = nonempty(&g, x & u & (u >> 3));
        let b = nonempty(&g, y & v & (v >> 5));
        (g, a, b)
    })
}

fn naive_sumset(a: &GroupSubset, b: &GroupSubset) -> GroupSubset {
    let g = a.group();
    let mut out = GroupSubset::empty(g);
    for x in a.elements() {
        for y in b.elements() {
            out.insert(g.add(x, y));
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn sumset_matches_pairwise_oracle((_g, a, b) in group_and_pair()) {
        let s = sumset(&a, &b).unwrap();
        prop_assert_eq!(&s, &naive_sumset(&a, &b));
        prop_assert_eq!(&s, &sumset(&b, &a).unwrap());
    }

    #[test]
    fn period_is_the_full_stabilizer((g, a, _b) in group_and_pair()) {
        let p = period(&a).unwrap();
        let stabilizer: Vec<GroupElement> = g.elements().filter(|&x| shift(&a, x) == a).collect();
        prop_assert_eq!(p.elements().collect::<Vec<_>>(), stabilizer);
        prop_assert_eq!(add_subgroup(&a, &p), a);
    }

    #[test]
    fn kneser_and_kemperman_scherk_bounds((_g, a, b) in group_and_pair()) {
        let s = sumset(&a, &b).unwrap();
        let h = period(&s).unwrap();
        prop_assert!(s.len() + h.order() >= add_subgroup(&a, &h).len() + add_subgroup(&b, &h).len());
        prop_assert!(s.len() + min_rep(&a, &b).unwrap() >= a.len() + b.len());
        prop_assert_eq!(rep_counts(&a, &b).unwrap().iter().sum::<usize>(), a.len() * b.len());
    }

    #[test]
    fn quotient_maps_sumsets_to_sumsets((g, a, b) in group_and_pair(), k in any::<prop::sample::Index>()) {
        let subgroups = all_subgroups(&g).unwrap();
        let h = &subgroups[k.index(subgroups.len())];
        let q = quotient(h);
        let lhs = q.image(&sumset(&a, &b).unwrap());
        let rhs = sumset(&q.image(&a), &q.image(&b)).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(q.preimage(&q.image(&a)), add_subgroup(&a, h));
    }

    #[test]
    fn elementary_witnesses_validate_and_imply_both_hypotheses((_g, a, b) in sparse_pair()) {
        let ws = classify_elementary(&a, &b).unwrap();
        for w in &ws {
            prop_assert!(check_elementary_witness(&a, &b, w));
        }
        if !ws.is_empty() {
            prop_assert_eq!(sumset(&a, &b).unwrap().len() + 1, a.len() + b.len());
            prop_assert!(kemperman_condition(&a, &b));
        }
    }

    #[test]
    fn elementary_is_translation_invariant((g, a, b) in sparse_pair(), x in any::<u16>(), y in any::<u16>()) {
        let tx = g.elements().nth(x as usize % g.order()).unwrap();
        let ty = g.elements().nth(y as usize % g.order()).unwrap();
        prop_assert_eq!(
            is_elementary(&a, &b).unwrap(),
            is_elementary(&shift(&a, tx), &shift(&b, ty)).unwrap()
        );
    }

    #[test]
    fn elementary_is_stable_under_subgroup_containment(
        (g, x, y) in (group(), any::<u64>(), any::<u64>()),
        k in any::<prop::sample::Index>(),
    ) {
        let subgroups: Vec<_> = all_subgroups(&g).unwrap().into_iter().filter(|h| !h.is_trivial()).collect();
        let k = &subgroups[k.index(subgroups.len())];
        let inner = k.as_group();
        let ai = nonempty(&inner, x & (x >> 7));
        let bi = nonempty(&inner, y & (y >> 11));
        let a = k.embed(&ai).unwrap();
        let b = k.embed(&bi).unwrap();
        prop_assert_eq!(is_elementary(&a, &b).unwrap(), is_elementary(&ai, &bi).unwrap());
        prop_assert_eq!(k.restrict(&inner, &a).unwrap(), ai);
    }

    #[test]
    fn certificates_validate_beyond_the_exhaustive_range((_g, a, b) in sparse_pair()) {
        prop_assume!(small_sumset(&a, &b));
        if kemperman_condition(&a, &b) {
            let k = Certificate::Kemperman(kemperman_decompose(&a, &b).unwrap());
            prop_assert!(check_certificate(&a, &b, &k).valid);
            let d = Certificate::Dual(dual_decompose(&a, &b).unwrap());
            prop_assert!(check_certificate(&a, &b, &d).valid);
            for mode in [TreeMode::Kemperman, TreeMode::Dual] {
                let t = decomposition_tree(&a, &b, mode).unwrap();
                prop_assert_eq!(t.reassemble().unwrap(), (a.clone(), b.clone()));
            }
        }
        let s = sumset(&a, &b).unwrap();
        if !s.is_full() || min_rep(&a, &b).unwrap() == 1 {
            let m = Certificate::Me(me_decompose(&a, &b).unwrap());
            prop_assert!(check_certificate(&a, &b, &m).valid);
        }
    }

    #[test]
    fn certificates_survive_json((_g, a, b) in sparse_pair()) {
        prop_assume!(small_sumset(&a, &b) && kemperman_condition(&a, &b));
        let g = a.group();
        for cert in [
            Certificate::Kemperman(kemperman_decompose(&a, &b).unwrap()),
            Certificate::Dual(dual_decompose(&a, &b).unwrap()),
        ] {
            let text = cert.to_json(g).to_string();
            let back = Certificate::from_json(g, &serde_json::from_str(&text).unwrap()).unwrap();
            prop_assert_eq!(back, cert);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn small_doubling_sets_classify(mask in 1u64..(1 << 16)) {
        let g = parse_group("Z2xZ2xZ2xZ2").unwrap();
        let a = GroupSubset::from_mask(&g, mask);
        let two = sumset(&a, &a).unwrap();
        match struct_classify(&a) {
            Ok(cls) => {
                prop_assert!(two.len() < 2 * a.len());
                prop_assert!(cls.check(&a));
            }
            Err(_) => prop_assert!(two.len() >= 2 * a.len()),
        }
    }

    #[test]
    fn synthesized_sets_classify_with_matching_doubling(i in 0u64..1_000_000) {
        let g = parse_group("Z2xZ2xZ2xZ2").unwrap();
        let inst = struct_instances(&g, 1, i).unwrap().remove(0);
        let out = struct_synthesize(&inst.f, &inst.h, &inst.s, inst.shift, &inst.removed).unwrap();
        let cls = struct_classify(&out.a).unwrap();
        prop_assert!(cls.check(&out.a));
        let doubling = match &cls {
            StructClassification::CaseI { h } => h.order(),
            StructClassification::CaseII { f, h, .. } => (f.order() - 1) * h.order(),
        };
        prop_assert_eq!(doubling, out.predicted_doubling);
    }

    #[test]
    fn thick_reductions_validate(g in group(), mask in any::<u64>()) {
        let a = nonempty(&g, mask & (mask >> 9) & (mask >> 17));
        prop_assume!(2 * a.len() <= g.order());
        let r = thick_reduction(&a).unwrap();
        prop_assert!(check_thick_reduction(&a, &r).unwrap());
    }
}

#[test]
fn seeded_streams_are_reproducible() {
    use rand::Rng;
    let x: Vec<u32> = (0..4).map(|_| stream_rng(9, 3).gen()).collect();
    assert!(x.windows(2).all(|w| w[0] == w[1]));
    assert_ne!(stream_rng(9, 3).gen::<u64>(), stream_rng(9, 4).gen::<u64>());
}
