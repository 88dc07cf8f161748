use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use serde_json::Value;

use crate::bitset::Bits;
use crate::error::{Error, Result};
use crate::group::{FiniteAbelianGroup, GroupElement};

/// A finite set of elements of one ambient group, kept in canonical order.
#[derive(Clone)]
pub struct GroupSubset {
    group: FiniteAbelianGroup,
    bits: Bits,
}

impl GroupSubset {
    pub fn empty(group: &FiniteAbelianGroup) -> Self {
        GroupSubset {
            group: group.clone(),
            bits: Bits::new(group.order()),
        }
    }

    pub fn full(group: &FiniteAbelianGroup) -> Self {
        GroupSubset {
            group: group.clone(),
            bits: Bits::full(group.order()),
        }
    }

    pub fn singleton(group: &FiniteAbelianGroup, g: GroupElement) -> Self {
        let mut s = Self::empty(group);
        s.insert(g);
        s
    }

    pub fn from_elements(
        group: &FiniteAbelianGroup,
        elements: impl IntoIterator<Item = GroupElement>,
    ) -> Self {
        let mut s = Self::empty(group);
        for g in elements {
            s.insert(g);
        }
        s
    }

    /// Builds a subset from residue vectors, e.g. `[[0],[1],[4]]`.
    pub fn from_coords<C: AsRef<[u32]>>(group: &FiniteAbelianGroup, coords: &[C]) -> Result<Self> {
        let mut s = Self::empty(group);
        for c in coords {
            s.insert(group.element(c.as_ref())?);
        }
        Ok(s)
    }

    /// Shorthand for subsets of rank-1 groups: ranks are residues.
    pub fn from_residues(group: &FiniteAbelianGroup, residues: &[u32]) -> Result<Self> {
        let coords: Vec<[u32; 1]> = residues.iter().map(|&r| [r]).collect();
        Self::from_coords(group, &coords)
    }

    /// Subset of a group of order at most 64 given by a rank bitmask.
    pub fn from_mask(group: &FiniteAbelianGroup, mask: u64) -> Self {
        GroupSubset {
            group: group.clone(),
            bits: Bits::from_mask(group.order(), mask),
        }
    }

    pub(crate) fn from_bits(group: &FiniteAbelianGroup, bits: Bits) -> Self {
        debug_assert_eq!(bits.universe(), group.order());
        GroupSubset {
            group: group.clone(),
            bits,
        }
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub(crate) fn bits(&self) -> &Bits {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.count()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn contains(&self, g: GroupElement) -> bool {
        self.bits.contains(g.rank())
    }

    pub fn insert(&mut self, g: GroupElement) {
        assert!(self.group.contains(g), "element outside the ambient group");
        self.bits.insert(g.rank());
    }

    pub fn remove(&mut self, g: GroupElement) {
        if self.group.contains(g) {
            self.bits.remove(g.rank());
        }
    }

    /// Elements in canonical order.
    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        self.bits.ones().map(GroupElement::from_rank)
    }

    pub fn to_vec(&self) -> Vec<GroupElement> {
        self.elements().collect()
    }

    pub fn min(&self) -> Option<GroupElement> {
        self.bits.first().map(GroupElement::from_rank)
    }

    pub fn is_full(&self) -> bool {
        self.len() == self.group.order()
    }

    pub fn check_same_group(&self, other: &GroupSubset) -> Result<()> {
        if self.group == other.group {
            Ok(())
        } else {
            Err(Error::Domain(format!(
                "sets live in different groups ({} vs {})",
                self.group, other.group
            )))
        }
    }

    pub fn union(&self, other: &GroupSubset) -> GroupSubset {
        let mut bits = self.bits.clone();
        bits.union_with(&other.bits);
        Self::from_bits(&self.group, bits)
    }

    pub fn intersection(&self, other: &GroupSubset) -> GroupSubset {
        let mut bits = self.bits.clone();
        bits.intersect_with(&other.bits);
        Self::from_bits(&self.group, bits)
    }

    pub fn difference(&self, other: &GroupSubset) -> GroupSubset {
        let mut bits = self.bits.clone();
        bits.difference_with(&other.bits);
        Self::from_bits(&self.group, bits)
    }

    pub fn complement(&self) -> GroupSubset {
        GroupSubset::full(&self.group).difference(self)
    }

    pub fn is_subset(&self, other: &GroupSubset) -> bool {
        self.bits.is_subset(&other.bits)
    }

    pub fn is_disjoint(&self, other: &GroupSubset) -> bool {
        self.bits.is_disjoint(&other.bits)
    }

    /// Lexicographic order on the canonical element lists.
    pub fn cmp_canonical(&self, other: &GroupSubset) -> Ordering {
        self.bits.cmp_members(&other.bits)
    }

    pub fn coords(&self) -> Vec<Vec<u32>> {
        self.elements().map(|g| self.group.coords(g)).collect()
    }

    pub fn to_json(&self) -> Value {
        Value::from(self.coords())
    }

    pub fn from_json(group: &FiniteAbelianGroup, value: &Value) -> Result<Self> {
        let items = value.as_array().ok_or_else(|| Error::Parse {
            token: value.to_string(),
            reason: "expected an array of element arrays".into(),
        })?;
        let mut s = Self::empty(group);
        for item in items {
            let coords = element_coords(item)?;
            s.insert(group.element(&coords)?);
        }
        Ok(s)
    }

    /// Accepts a JSON array of coordinate arrays, or `0,1,4` for rank-1 groups.
    pub fn parse(group: &FiniteAbelianGroup, text: &str) -> Result<Self> {
        let text = text.trim();
        if text.starts_with('[') {
            let value: Value = serde_json::from_str(text).map_err(|e| Error::Parse {
                token: text.to_string(),
                reason: e.to_string(),
            })?;
            return Self::from_json(group, &value);
        }
        if group.moduli().map(<[u32]>::len) != Some(1) {
            return Err(Error::Parse {
                token: text.to_string(),
                reason: "the comma shorthand only applies to cyclic groups".into(),
            });
        }
        let mut residues = Vec::new();
        for tok in text.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            residues.push(tok.parse::<u32>().map_err(|_| Error::Parse {
                token: tok.to_string(),
                reason: "expected a residue".into(),
            })?);
        }
        Self::from_residues(group, &residues)
    }
}

pub(crate) fn element_coords(item: &Value) -> Result<Vec<u32>> {
    let arr = item.as_array().ok_or_else(|| Error::Parse {
        token: item.to_string(),
        reason: "element must be an array of integers".into(),
    })?;
    arr.iter()
        .map(|c| {
            c.as_u64()
                .and_then(|c| u32::try_from(c).ok())
                .ok_or_else(|| Error::Parse {
                    token: c.to_string(),
                    reason: "coordinate must be a non-negative integer".into(),
                })
        })
        .collect()
}

impl PartialEq for GroupSubset {
    fn eq(&self, other: &Self) -> bool {
        self.bits == other.bits && self.group == other.group
    }
}

impl Eq for GroupSubset {}

impl Hash for GroupSubset {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.bits.hash(state);
    }
}

impl fmt::Debug for GroupSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut set = f.debug_set();
        for g in self.elements() {
            let c = self.group.coords(g);
            if c.len() == 1 {
                set.entry(&c[0]);
            } else {
                set.entry(&c);
            }
        }
        set.finish()
    }
}
