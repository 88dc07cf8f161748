use serde_json::json;

use sumset_kit::elementary::{classify_elementary, ElementaryWitness};
use sumset_kit::group::{parse_group, FiniteAbelianGroup};
use sumset_kit::subgroup::all_subgroups;
use sumset_kit::subset::GroupSubset;
use sumset_kit::theorems::{recover_partition, verify_theorem, PartitionWire, PartitionWitness, TheoremId, VerificationReport};

fn all_nonempty(g: &FiniteAbelianGroup) -> impl Iterator<Item = GroupSubset> + '_ {
    (1u64..1 << g.order()).map(move |m| GroupSubset::from_mask(g, m))
}

#[test]
fn groups_and_subsets_roundtrip() {
    for name in ["Z6", "Z2xZ4", "Z3xZ3"] {
        let g = parse_group(name).unwrap();
        assert_eq!(FiniteAbelianGroup::from_json(&g.to_json()).unwrap(), g);
        for a in all_nonempty(&g) {
            let text = a.to_json().to_string();
            assert_eq!(GroupSubset::parse(&g, &text).unwrap(), a);
        }
    }
}

#[test]
fn elementary_witnesses_roundtrip() {
    let mut seen = 0;
    for name in ["Z6", "Z2xZ4", "Z2xZ2xZ2"] {
        let g = parse_group(name).unwrap();
        for a in all_nonempty(&g) {
            for b in all_nonempty(&g) {
                for w in classify_elementary(&a, &b).unwrap() {
                    let text = w.to_json(&g).to_string();
                    let back = ElementaryWitness::from_json(&g, &serde_json::from_str(&text).unwrap()).unwrap();
                    assert_eq!(back, w);
                    seen += 1;
                }
            }
        }
    }
    assert!(seen > 0);
}

#[test]
fn partition_witnesses_roundtrip() {
    let mut seen = 0;
    for name in ["Z6", "Z2xZ4"] {
        let g = parse_group(name).unwrap();
        let subgroups = all_subgroups(&g).unwrap();
        for a in all_nonempty(&g) {
            for b in all_nonempty(&g) {
                for h in &subgroups {
                    let Ok(w) = recover_partition(&a, &b, h) else { continue };
                    let text = serde_json::to_string(&w.to_wire()).unwrap();
                    let wire: PartitionWire = serde_json::from_str(&text).unwrap();
                    let back = PartitionWitness::from_wire(&g, &wire).unwrap();
                    assert_eq!(back, w);
                    assert_eq!(back.reconstruct(), (a.clone(), b.clone()));
                    seen += 1;
                }
            }
        }
    }
    assert!(seen > 0);
}

#[test]
fn verification_reports_roundtrip() {
    let g = parse_group("Z6").unwrap();
    let a = GroupSubset::parse(&g, "0,1,5").unwrap();
    for id in TheoremId::ALL {
        let r = verify_theorem(id, &a, &a).unwrap();
        let back: VerificationReport = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
        assert_eq!(back, r);
    }
}

#[test]
fn partition_wire_keys_are_stable() {
    let g = parse_group("Z4").unwrap();
    let a = GroupSubset::parse(&g, "0,1,2").unwrap();
    let b = GroupSubset::parse(&g, "0,1").unwrap();
    let h = all_subgroups(&g).unwrap().into_iter().find(|h| h.order() == 4).unwrap();
    let v = serde_json::to_value(recover_partition(&a, &b, &h).unwrap().to_wire()).unwrap();
    let keys: Vec<_> = v.as_object().unwrap().keys().cloned().collect();
    assert_eq!(keys, ["kind", "g1", "g2", "H", "H1", "H2"]);
    assert_eq!(v["kind"], json!("coset"));
}
