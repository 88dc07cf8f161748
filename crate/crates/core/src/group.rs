//! Finite abelian groups and their elements.
//!
//! Elements are addressed by their *rank*: the position of the element in the
//! canonical order of the group. For a direct product of cyclic groups the
//! canonical order is lexicographic on residue vectors, so the rank is the
//! mixed-radix reading of the coordinates with the first factor most
//! significant. Quotient groups and subgroups viewed as groups in their own
//! right keep the same rank machinery: a coset is ranked by its least
//! representative, a subgroup element by its rank in the parent.

use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock};

use serde_json::{json, Value};

use crate::bitset::Bits;
use crate::error::{Error, Result};

/// Groups above this order compute sums from coordinates instead of a table.
const TABLE_LIMIT: usize = 1024;

/// Hard ceiling on the order of any group this crate materializes.
pub const MAX_GROUP_ORDER: usize = 1 << 24;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct GroupElement(u32);

impl GroupElement {
    pub const IDENTITY: GroupElement = GroupElement(0);

    #[inline]
    pub fn rank(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub(crate) fn from_rank(rank: usize) -> Self {
        GroupElement(rank as u32)
    }

    pub fn is_identity(self) -> bool {
        self.0 == 0
    }
}

#[derive(Clone)]
pub struct FiniteAbelianGroup {
    inner: Arc<GroupData>,
}

struct GroupData {
    order: usize,
    kind: Kind,
    table: Option<Vec<u32>>,
    neg: Vec<u32>,
    subgroups: OnceLock<Vec<(Bits, Vec<GroupElement>)>>,
}

pub(crate) enum Kind {
    Product {
        moduli: Vec<u32>,
        strides: Vec<usize>,
    },
    Quotient {
        source: FiniteAbelianGroup,
        kernel: Bits,
        class_of: Vec<u32>,
        reps: Vec<u32>,
    },
    Embedded {
        parent: FiniteAbelianGroup,
        members: Vec<u32>,
        index_of: Vec<u32>,
    },
}

impl FiniteAbelianGroup {
    /// Direct product `Z_{m_1} x ... x Z_{m_k}`, factor order kept as given.
    pub fn product(moduli: &[u32]) -> Result<Self> {
        if moduli.is_empty() {
            return Err(Error::Parse {
                token: String::new(),
                reason: "a group needs at least one cyclic factor".into(),
            });
        }
        let mut order: usize = 1;
        for &m in moduli {
            if m == 0 {
                return Err(Error::Parse {
                    token: format!("Z{m}"),
                    reason: "modulus must be at least 1".into(),
                });
            }
            order = order
                .checked_mul(m as usize)
                .filter(|&o| o <= MAX_GROUP_ORDER)
                .ok_or_else(|| {
                    Error::Resource(format!("group order exceeds {MAX_GROUP_ORDER}"))
                })?;
        }
        let mut strides = vec![1usize; moduli.len()];
        for i in (0..moduli.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * moduli[i + 1] as usize;
        }
        Ok(Self::build(
            order,
            Kind::Product {
                moduli: moduli.to_vec(),
                strides,
            },
        ))
    }

    /// Cyclic group `Z_n`.
    pub fn cyclic(n: u32) -> Result<Self> {
        Self::product(&[n])
    }

    /// Builds `source / kernel`. `kernel` must already be known to be a subgroup.
    pub(crate) fn quotient_of(source: &FiniteAbelianGroup, kernel: &Bits) -> Self {
        let n = source.order();
        let mut class_of = vec![u32::MAX; n];
        let mut reps = Vec::with_capacity(n / kernel.count().max(1));
        let kernel_elems: Vec<usize> = kernel.ones().collect();
        for x in 0..n {
            if class_of[x] != u32::MAX {
                continue;
            }
            let id = reps.len() as u32;
            reps.push(x as u32);
            for &h in &kernel_elems {
                let y = source.add_rank(x, h);
                class_of[y] = id;
            }
        }
        let order = reps.len();
        Self::build(
            order,
            Kind::Quotient {
                source: source.clone(),
                kernel: kernel.clone(),
                class_of,
                reps,
            },
        )
    }

    /// Views the subgroup `members` of `parent` as a group in its own right.
    pub(crate) fn embedded_in(parent: &FiniteAbelianGroup, members: &Bits) -> Self {
        let members: Vec<u32> = members.ones().map(|x| x as u32).collect();
        let mut index_of = vec![u32::MAX; parent.order()];
        for (i, &m) in members.iter().enumerate() {
            index_of[m as usize] = i as u32;
        }
        Self::build(
            members.len(),
            Kind::Embedded {
                parent: parent.clone(),
                members,
                index_of,
            },
        )
    }

    fn build(order: usize, kind: Kind) -> Self {
        let mut data = GroupData {
            order,
            kind,
            table: None,
            neg: Vec::new(),
            subgroups: OnceLock::new(),
        };
        data.neg = (0..order).map(|x| data.neg_slow(x) as u32).collect();
        if order <= TABLE_LIMIT {
            let mut table = vec![0u32; order * order];
            for a in 0..order {
                for b in a..order {
                    let s = data.add_slow(a, b) as u32;
                    table[a * order + b] = s;
                    table[b * order + a] = s;
                }
            }
            data.table = Some(table);
        }
        FiniteAbelianGroup {
            inner: Arc::new(data),
        }
    }

    pub(crate) fn kind(&self) -> &Kind {
        &self.inner.kind
    }

    pub(crate) fn subgroup_cache(&self) -> &OnceLock<Vec<(Bits, Vec<GroupElement>)>> {
        &self.inner.subgroups
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.inner.order
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }

    /// The cyclic moduli, for groups given as a direct product.
    pub fn moduli(&self) -> Option<&[u32]> {
        match &self.inner.kind {
            Kind::Product { moduli, .. } => Some(moduli),
            _ => None,
        }
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement::IDENTITY
    }

    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.order()).map(GroupElement::from_rank)
    }

    #[inline]
    pub(crate) fn add_rank(&self, a: usize, b: usize) -> usize {
        match &self.inner.table {
            Some(t) => t[a * self.inner.order + b] as usize,
            None => self.inner.add_slow(a, b),
        }
    }

    #[inline]
    pub(crate) fn neg_rank(&self, a: usize) -> usize {
        self.inner.neg[a] as usize
    }

    #[inline]
    pub fn add(&self, a: GroupElement, b: GroupElement) -> GroupElement {
        GroupElement::from_rank(self.add_rank(a.rank(), b.rank()))
    }

    #[inline]
    pub fn neg(&self, a: GroupElement) -> GroupElement {
        GroupElement::from_rank(self.neg_rank(a.rank()))
    }

    #[inline]
    pub fn sub(&self, a: GroupElement, b: GroupElement) -> GroupElement {
        self.add(a, self.neg(b))
    }

    /// `k * a` for a non-negative multiplier.
    pub fn mul(&self, k: u64, a: GroupElement) -> GroupElement {
        let mut acc = self.identity();
        let mut base = a;
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(acc, base);
            }
            base = self.add(base, base);
            k >>= 1;
        }
        acc
    }

    pub fn contains(&self, g: GroupElement) -> bool {
        g.rank() < self.order()
    }

    /// Least `k >= 1` with `k * g = 0`.
    pub fn element_order(&self, g: GroupElement) -> Result<u64> {
        if !self.contains(g) {
            return Err(Error::Domain(format!(
                "element rank {} outside group of order {}",
                g.rank(),
                self.order()
            )));
        }
        if let Kind::Product { moduli, .. } = &self.inner.kind {
            let coords = self.coords(g);
            let mut l: u64 = 1;
            for (&m, &c) in moduli.iter().zip(coords.iter()) {
                let m = m as u64;
                let part = m / gcd(m, c as u64);
                l = lcm(l, part);
            }
            return Ok(l);
        }
        let mut k = 1u64;
        let mut x = g;
        while !x.is_identity() {
            x = self.add(x, g);
            k += 1;
        }
        Ok(k)
    }

    /// Every element satisfies `2g = 0`.
    pub fn has_exponent_two(&self) -> bool {
        match &self.inner.kind {
            Kind::Product { moduli, .. } => moduli.iter().all(|&m| m <= 2),
            _ => self.elements().all(|g| self.add(g, g).is_identity()),
        }
    }

    /// Display coordinates: the residue vector for direct products, the
    /// coordinates of the least representative (in the root group) otherwise.
    pub fn coords(&self, g: GroupElement) -> Vec<u32> {
        match &self.inner.kind {
            Kind::Product { moduli, strides } => {
                let r = g.rank();
                moduli
                    .iter()
                    .zip(strides.iter())
                    .map(|(&m, &s)| ((r / s) % m as usize) as u32)
                    .collect()
            }
            Kind::Quotient { source, reps, .. } => {
                source.coords(GroupElement(reps[g.rank()]))
            }
            Kind::Embedded {
                parent, members, ..
            } => parent.coords(GroupElement(members[g.rank()])),
        }
    }

    /// Inverse of [`coords`](Self::coords). For quotients any representative is
    /// accepted; for embedded subgroups the element must lie in the subgroup.
    pub fn element(&self, coords: &[u32]) -> Result<GroupElement> {
        match &self.inner.kind {
            Kind::Product { moduli, strides } => {
                if coords.len() != moduli.len() {
                    return Err(Error::Domain(format!(
                        "element {coords:?} has {} coordinates, group {} needs {}",
                        coords.len(),
                        self,
                        moduli.len()
                    )));
                }
                let mut r = 0usize;
                for ((&c, &m), &s) in coords.iter().zip(moduli).zip(strides) {
                    if c >= m {
                        return Err(Error::Domain(format!(
                            "coordinate {c} out of range for Z{m} in element {coords:?}"
                        )));
                    }
                    r += c as usize * s;
                }
                Ok(GroupElement::from_rank(r))
            }
            Kind::Quotient {
                source, class_of, ..
            } => {
                let x = source.element(coords)?;
                Ok(GroupElement(class_of[x.rank()]))
            }
            Kind::Embedded {
                parent, index_of, ..
            } => {
                let x = parent.element(coords)?;
                match index_of[x.rank()] {
                    u32::MAX => Err(Error::Domain(format!(
                        "element {coords:?} is not in the subgroup"
                    ))),
                    i => Ok(GroupElement(i)),
                }
            }
        }
    }

    pub fn to_json(&self) -> Value {
        match &self.inner.kind {
            Kind::Product { moduli, .. } => json!({ "moduli": moduli }),
            Kind::Quotient { source, kernel, .. } => json!({
                "quotient_of": source.to_json(),
                "kernel": kernel.ones().map(|x| source.coords(GroupElement::from_rank(x))).collect::<Vec<_>>(),
            }),
            Kind::Embedded {
                parent, members, ..
            } => json!({
                "subgroup_of": parent.to_json(),
                "elements": members.iter().map(|&x| parent.coords(GroupElement(x))).collect::<Vec<_>>(),
            }),
        }
    }

    /// Parses `{"moduli":[...]}`.
    pub fn from_json(value: &Value) -> Result<Self> {
        let moduli = value
            .get("moduli")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse {
                token: value.to_string(),
                reason: "expected {\"moduli\": [...]}".into(),
            })?;
        let moduli = moduli
            .iter()
            .map(|m| {
                m.as_u64()
                    .and_then(|m| u32::try_from(m).ok())
                    .ok_or_else(|| Error::Parse {
                        token: m.to_string(),
                        reason: "modulus must be a non-negative integer".into(),
                    })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::product(&moduli)
    }

    pub fn ptr_eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
    }
}

impl GroupData {
    fn add_slow(&self, a: usize, b: usize) -> usize {
        match &self.kind {
            Kind::Product { moduli, strides } => {
                let mut r = 0;
                for (&m, &s) in moduli.iter().zip(strides) {
                    let m = m as usize;
                    let x = (a / s) % m;
                    let y = (b / s) % m;
                    r += ((x + y) % m) * s;
                }
                r
            }
            Kind::Quotient {
                source,
                class_of,
                reps,
                ..
            } => class_of[source.add_rank(reps[a] as usize, reps[b] as usize)] as usize,
            Kind::Embedded {
                parent,
                members,
                index_of,
            } => index_of[parent.add_rank(members[a] as usize, members[b] as usize)] as usize,
        }
    }

    fn neg_slow(&self, a: usize) -> usize {
        match &self.kind {
            Kind::Product { moduli, strides } => {
                let mut r = 0;
                for (&m, &s) in moduli.iter().zip(strides) {
                    let m = m as usize;
                    let x = (a / s) % m;
                    r += ((m - x) % m) * s;
                }
                r
            }
            Kind::Quotient {
                source,
                class_of,
                reps,
                ..
            } => class_of[source.neg_rank(reps[a] as usize)] as usize,
            Kind::Embedded {
                parent,
                members,
                index_of,
            } => index_of[parent.neg_rank(members[a] as usize)] as usize,
        }
    }
}

impl PartialEq for FiniteAbelianGroup {
    fn eq(&self, other: &Self) -> bool {
        if self.ptr_eq(other) {
            return true;
        }
        if self.order() != other.order() {
            return false;
        }
        match (&self.inner.kind, &other.inner.kind) {
            (Kind::Product { moduli: a, .. }, Kind::Product { moduli: b, .. }) => a == b,
            (
                Kind::Quotient {
                    source: s1,
                    kernel: k1,
                    ..
                },
                Kind::Quotient {
                    source: s2,
                    kernel: k2,
                    ..
                },
            ) => k1 == k2 && s1 == s2,
            (
                Kind::Embedded {
                    parent: p1,
                    members: m1,
                    ..
                },
                Kind::Embedded {
                    parent: p2,
                    members: m2,
                    ..
                },
            ) => m1 == m2 && p1 == p2,
            _ => false,
        }
    }
}

impl Eq for FiniteAbelianGroup {}

impl fmt::Display for FiniteAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.inner.kind {
            Kind::Product { moduli, .. } => {
                let parts: Vec<String> = moduli.iter().map(|m| format!("Z{m}")).collect();
                f.write_str(&parts.join("x"))
            }
            Kind::Quotient { source, kernel, .. } => {
                write!(f, "({source})/<order {}>", kernel.count())
            }
            Kind::Embedded {
                parent, members, ..
            } => write!(f, "<order {} in {parent}>", members.len()),
        }
    }
}

impl fmt::Debug for FiniteAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteAbelianGroup({self})")
    }
}

impl FromStr for FiniteAbelianGroup {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_group(s)
    }
}

/// Parses `Z<n>(xZ<n>)*`, e.g. `Z2xZ4`. Factor order is preserved.
pub fn parse_group(spec: &str) -> Result<FiniteAbelianGroup> {
    let spec = spec.trim();
    if spec.is_empty() {
        return Err(Error::Parse {
            token: String::new(),
            reason: "empty group spec".into(),
        });
    }
    let mut moduli = Vec::new();
    for token in spec.split('x') {
        let token = token.trim();
        let digits = token.strip_prefix('Z').ok_or_else(|| Error::Parse {
            token: token.to_string(),
            reason: "expected a factor of the form Z<n>".into(),
        })?;
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::Parse {
                token: token.to_string(),
                reason: "modulus must be a decimal integer".into(),
            });
        }
        let n: u32 = digits.parse().map_err(|_| Error::Parse {
            token: token.to_string(),
            reason: "modulus too large".into(),
        })?;
        if n == 0 {
            return Err(Error::Parse {
                token: token.to_string(),
                reason: "modulus must be at least 1".into(),
            });
        }
        moduli.push(n);
    }
    FiniteAbelianGroup::product(&moduli)
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}
