//! The catalog of small finite abelian groups used by the scans.

use crate::error::Result;
use crate::group::{parse_group, FiniteAbelianGroup};

/// Every non-trivial abelian group of order at most 16, one per isomorphism
/// class, in invariant-factor form and ordered by group order.
pub const SMALL_GROUPS: &[&str] = &[
    "Z2", "Z3", "Z4", "Z2xZ2", "Z5", "Z6", "Z7", "Z8", "Z2xZ4", "Z2xZ2xZ2", "Z9", "Z3xZ3", "Z10",
    "Z11", "Z12", "Z2xZ6", "Z13", "Z14", "Z15", "Z16", "Z2xZ8", "Z4xZ4", "Z2xZ2xZ4",
    "Z2xZ2xZ2xZ2",
];

/// A named group from a catalog list.
#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: String,
    pub group: FiniteAbelianGroup,
}

/// Parses a comma-separated list of group specs, keeping the given order.
pub fn parse_catalog(text: &str) -> Result<Vec<CatalogEntry>> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|name| {
            Ok(CatalogEntry {
                name: name.to_string(),
                group: parse_group(name)?,
            })
        })
        .collect()
}

pub fn default_catalog() -> Vec<CatalogEntry> {
    parse_catalog(&SMALL_GROUPS.join(",")).expect("catalog specs parse")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subgroup::all_subgroups;

    #[test]
    fn one_group_per_isomorphism_class() {
        let cat = default_catalog();
        // Number of abelian groups of order n, for n = 2..=16.
        let expected = [1, 1, 2, 1, 1, 1, 3, 2, 1, 1, 2, 1, 1, 1, 5];
        for (n, &count) in (2..=16).zip(&expected) {
            assert_eq!(cat.iter().filter(|e| e.group.order() == n).count(), count, "order {n}");
        }
        // Subgroup-count profiles separate the classes of equal order.
        let mut profiles: Vec<(usize, Vec<usize>)> = cat
            .iter()
            .map(|e| {
                let mut sizes: Vec<usize> =
                    all_subgroups(&e.group).unwrap().iter().map(|h| h.order()).collect();
                sizes.sort();
                (e.group.order(), sizes)
            })
            .collect();
        let before = profiles.len();
        profiles.sort();
        profiles.dedup();
        assert_eq!(profiles.len(), before);
    }

    #[test]
    fn parse_keeps_order_and_rejects_garbage() {
        let cat = parse_catalog("Z3, Z2xZ2 ,Z5").unwrap();
        let names: Vec<&str> = cat.iter().map(|e| e.name.as_str()).collect();
        assert_eq!(names, ["Z3", "Z2xZ2", "Z5"]);
        assert!(parse_catalog("Z3,Q8").is_err());
    }
}
