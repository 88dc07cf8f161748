//! Structure certificates for pairs with a small sumset.
//!
//! Three engines produce certificates: [`kemperman_decompose`] (a residual
//! elementary pair inside one coset, lifted from a tight quotient pair),
//! [`dual_decompose`] (an elementary quotient pair over a tight residual), and
//! [`me_decompose`] (a subgroup whose quotient pair is elementary). The
//! checker [`check_certificate`] re-validates any certificate clause by
//! clause, and [`decomposition_tree`] recurses until only elementary pairs
//! remain.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Hypothesis, Result};
use crate::elementary::{classify_elementary, is_elementary, ElementaryWitness, WitnessWire};
use crate::group::FiniteAbelianGroup;
use crate::json::{self, SetWire};
use crate::subgroup::{all_subgroups, quotient, QuotientMap, Subgroup};
use crate::subset::GroupSubset;
use crate::sumset::{
    add_subgroup, is_union_of_cosets, min_rep, period_unchecked, rep_counts, saturation_defect,
    shift, sumset_unchecked,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KempermanCertificate {
    pub h: Subgroup,
    pub a0: GroupSubset,
    pub b0: GroupSubset,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DualCertificate {
    Elementary {
        witness: ElementaryWitness,
    },
    Split {
        h: Subgroup,
        a0: GroupSubset,
        b0: GroupSubset,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeCertificate {
    pub h: Subgroup,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    Kemperman(KempermanCertificate),
    Dual(DualCertificate),
    Me(MeCertificate),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum CertificateWire {
    Kemperman {
        #[serde(rename = "H")]
        h: SetWire,
        #[serde(rename = "A0")]
        a0: SetWire,
        #[serde(rename = "B0")]
        b0: SetWire,
    },
    Dual(DualWire),
    Me {
        #[serde(rename = "H")]
        h: SetWire,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "lowercase")]
pub enum DualWire {
    Split {
        #[serde(rename = "H")]
        h: SetWire,
        #[serde(rename = "A0")]
        a0: SetWire,
        #[serde(rename = "B0")]
        b0: SetWire,
    },
    Elementary {
        witness: WitnessWire,
    },
}

impl Certificate {
    pub fn kind(&self) -> &'static str {
        match self {
            Certificate::Kemperman(_) => "kemperman",
            Certificate::Dual(_) => "dual",
            Certificate::Me(_) => "me",
        }
    }

    pub fn to_wire(&self, g: &FiniteAbelianGroup) -> CertificateWire {
        match self {
            Certificate::Kemperman(c) => CertificateWire::Kemperman {
                h: json::sub(&c.h),
                a0: json::set(&c.a0),
                b0: json::set(&c.b0),
            },
            Certificate::Dual(DualCertificate::Split { h, a0, b0 }) => {
                CertificateWire::Dual(DualWire::Split {
                    h: json::sub(h),
                    a0: json::set(a0),
                    b0: json::set(b0),
                })
            }
            Certificate::Dual(DualCertificate::Elementary { witness }) => {
                CertificateWire::Dual(DualWire::Elementary {
                    witness: witness.to_wire(g),
                })
            }
            Certificate::Me(c) => CertificateWire::Me { h: json::sub(&c.h) },
        }
    }

    pub fn from_wire(g: &FiniteAbelianGroup, w: &CertificateWire) -> Result<Self> {
        Ok(match w {
            CertificateWire::Kemperman { h, a0, b0 } => Certificate::Kemperman(KempermanCertificate {
                h: json::parse_subgroup(g, h)?,
                a0: json::parse_set(g, a0)?,
                b0: json::parse_set(g, b0)?,
            }),
            CertificateWire::Dual(DualWire::Split { h, a0, b0 }) => {
                Certificate::Dual(DualCertificate::Split {
                    h: json::parse_subgroup(g, h)?,
                    a0: json::parse_set(g, a0)?,
                    b0: json::parse_set(g, b0)?,
                })
            }
            CertificateWire::Dual(DualWire::Elementary { witness }) => {
                Certificate::Dual(DualCertificate::Elementary {
                    witness: ElementaryWitness::from_wire(g, witness)?,
                })
            }
            CertificateWire::Me { h } => Certificate::Me(MeCertificate {
                h: json::parse_subgroup(g, h)?,
            }),
        })
    }

    pub fn to_json(&self, g: &FiniteAbelianGroup) -> serde_json::Value {
        serde_json::to_value(self.to_wire(g)).expect("certificate serializes")
    }

    pub fn from_json(g: &FiniteAbelianGroup, v: &serde_json::Value) -> Result<Self> {
        Self::from_wire(g, &json::from_value(v)?)
    }
}

/// One clause of a certificate check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClauseReport {
    pub clause: String,
    pub holds: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateCheck {
    pub valid: bool,
    pub clauses: Vec<ClauseReport>,
}

impl CertificateCheck {
    fn from_clauses(clauses: Vec<ClauseReport>) -> Self {
        CertificateCheck {
            valid: clauses.iter().all(|c| c.holds),
            clauses,
        }
    }

    fn malformed(detail: impl Into<String>) -> Self {
        CertificateCheck {
            valid: false,
            clauses: vec![ClauseReport {
                clause: "well-formed".into(),
                holds: false,
                detail: detail.into(),
            }],
        }
    }

    /// Names of the clauses that fail.
    pub fn failing(&self) -> Vec<&str> {
        self.clauses
            .iter()
            .filter(|c| !c.holds)
            .map(|c| c.clause.as_str())
            .collect()
    }
}

fn clause(name: &str, problems: Vec<String>) -> ClauseReport {
    ClauseReport {
        clause: name.into(),
        holds: problems.is_empty(),
        detail: if problems.is_empty() {
            "holds".into()
        } else {
            problems.join("; ")
        },
    }
}

/// `|A+B| <= |A|+|B|-1`.
pub fn small_sumset(a: &GroupSubset, b: &GroupSubset) -> bool {
    sumset_unchecked(a, b).len() < a.len() + b.len()
}

/// `pi(A+B) = {0}` or `mu(A,B) = 1`.
pub fn kemperman_condition(a: &GroupSubset, b: &GroupSubset) -> bool {
    let counts = rep_counts(a, b).expect("same group");
    counts.contains(&1) || period_unchecked(&sumset_unchecked(a, b)).is_trivial()
}

fn require_nonempty(a: &GroupSubset, b: &GroupSubset) -> Result<()> {
    a.check_same_group(b)?;
    if a.is_empty() || b.is_empty() {
        return Err(Error::precondition(Hypothesis::NonEmpty, "both sets must be non-empty"));
    }
    Ok(())
}

fn require_small_sumset(a: &GroupSubset, b: &GroupSubset) -> Result<()> {
    let s = sumset_unchecked(a, b).len();
    if s >= a.len() + b.len() {
        return Err(Error::precondition(
            Hypothesis::SmallSumset,
            format!("|A+B| = {s} exceeds |A|+|B|-1 = {}", a.len() + b.len() - 1),
        ));
    }
    Ok(())
}

fn require_kemperman_condition(a: &GroupSubset, b: &GroupSubset) -> Result<()> {
    if !kemperman_condition(a, b) {
        let p = period_unchecked(&sumset_unchecked(a, b));
        return Err(Error::precondition(
            Hypothesis::KempermanCondition,
            format!(
                "pi(A+B) = {:?} is non-zero and mu(A,B) = {}",
                p.as_set(),
                min_rep(a, b)?
            ),
        ));
    }
    Ok(())
}

fn require_nontrivial(g: &FiniteAbelianGroup) -> Result<()> {
    if g.is_trivial() {
        return Err(Error::precondition(Hypothesis::NonTrivialGroup, "the group has one element"));
    }
    Ok(())
}

/// Checks the hypotheses shared by Kemperman's theorem and the dual
/// theorem: non-empty sets, a small sumset, and Kemperman's condition.
pub fn require_kemperman_hypotheses(a: &GroupSubset, b: &GroupSubset) -> Result<()> {
    require_nonempty(a, b)?;
    require_small_sumset(a, b)?;
    require_kemperman_condition(a, b)
}

/// Candidate residual parts of `S` for the quotient `q`: `S` meets at most one
/// coset partially, and the residual is its intersection with that coset; if
/// `S` is a union of cosets any of them may serve.
fn residual_candidates(s: &GroupSubset, q: &QuotientMap) -> Vec<GroupSubset> {
    let ids = q.image(s);
    let h = q.kernel().order();
    let mut full = Vec::new();
    let mut partial = Vec::new();
    for x in ids.elements() {
        let part = s.intersection(&q.preimage(&GroupSubset::singleton(q.target(), x)));
        if part.len() == h {
            full.push(part);
        } else {
            partial.push(part);
        }
    }
    match partial.len() {
        0 => full,
        1 => partial,
        _ => Vec::new(),
    }
}

fn ordered_pairs(ca: Vec<GroupSubset>, cb: Vec<GroupSubset>) -> Vec<(GroupSubset, GroupSubset)> {
    let mut pairs: Vec<(GroupSubset, GroupSubset)> = ca
        .iter()
        .flat_map(|x| cb.iter().map(move |y| (x.clone(), y.clone())))
        .collect();
    pairs.sort_by(|(a0, b0), (a1, b1)| {
        (a0.len() + b0.len())
            .cmp(&(a1.len() + b1.len()))
            .then_with(|| a0.cmp_canonical(a1))
            .then_with(|| b0.cmp_canonical(b1))
    });
    pairs
}

/// Whether the coset of `A0 + B0` has exactly one representation in `Abar + Bbar`.
fn unique_residual_coset(
    q: &QuotientMap,
    abar: &GroupSubset,
    bbar: &GroupSubset,
    a0: &GroupSubset,
    b0: &GroupSubset,
) -> bool {
    let (Some(x), Some(y)) = (a0.min(), b0.min()) else {
        return false;
    };
    let target = q.target().add(q.apply(x), q.apply(y));
    rep_counts(abar, bbar).expect("same group")[target.rank()] == 1
}

/// Kemperman's structure theorem: finds `(H, A0, B0)` with the smallest `H`
/// and then the smallest residual pair.
pub fn kemperman_decompose(a: &GroupSubset, b: &GroupSubset) -> Result<KempermanCertificate> {
    require_nonempty(a, b)?;
    require_nontrivial(a.group())?;
    require_small_sumset(a, b)?;
    require_kemperman_condition(a, b)?;
    for h in all_subgroups(a.group())? {
        if h.is_trivial() {
            continue;
        }
        let q = quotient(&h);
        let abar = q.image(a);
        let bbar = q.image(b);
        if sumset_unchecked(&abar, &bbar).len() + 1 != abar.len() + bbar.len() {
            continue;
        }
        for (a0, b0) in ordered_pairs(residual_candidates(a, &q), residual_candidates(b, &q)) {
            if unique_residual_coset(&q, &abar, &bbar, &a0, &b0) && is_elementary(&a0, &b0)? {
                return Ok(KempermanCertificate { h, a0, b0 });
            }
        }
    }
    Err(Error::Invariant(format!(
        "no Kemperman certificate found for A = {a:?}, B = {b:?}"
    )))
}

/// The dual theorem: either the pair is elementary, or a proper non-zero
/// `H` splits off a tight residual pair over an elementary quotient pair.
pub fn dual_decompose(a: &GroupSubset, b: &GroupSubset) -> Result<DualCertificate> {
    require_kemperman_hypotheses(a, b)?;
    if let Some(witness) = classify_elementary(a, b)?.into_iter().next() {
        return Ok(DualCertificate::Elementary { witness });
    }
    for h in all_subgroups(a.group())? {
        if h.is_trivial() || h.is_whole() {
            continue;
        }
        let q = quotient(&h);
        let abar = q.image(a);
        let bbar = q.image(b);
        if !is_elementary(&abar, &bbar)? {
            continue;
        }
        for (a0, b0) in ordered_pairs(residual_candidates(a, &q), residual_candidates(b, &q)) {
            if unique_residual_coset(&q, &abar, &bbar, &a0, &b0)
                && sumset_unchecked(&a0, &b0).len() + 1 == a0.len() + b0.len()
                && kemperman_condition(&a0, &b0)
            {
                return Ok(DualCertificate::Split { h, a0, b0 });
            }
        }
    }
    Err(Error::Invariant(format!(
        "no dual certificate found for non-elementary A = {a:?}, B = {b:?}"
    )))
}

fn defects_ok(sets: &[&GroupSubset], h: &Subgroup) -> bool {
    sets.iter()
        .all(|c| add_subgroup(c, h).len() < c.len() + h.order())
}

/// Finds a proper `H` with every defect below `|H|` and an elementary
/// quotient pair, ascending from `{0}` through strictly larger subgroups.
pub fn me_decompose(a: &GroupSubset, b: &GroupSubset) -> Result<MeCertificate> {
    require_nonempty(a, b)?;
    let g = a.group();
    require_nontrivial(g)?;
    require_small_sumset(a, b)?;
    let ab = sumset_unchecked(a, b);
    if ab.is_full() && min_rep(a, b)? != 1 {
        return Err(Error::precondition(
            Hypothesis::SparseElement,
            format!("A+B = G and mu(A,B) = {}", min_rep(a, b)?),
        ));
    }
    let subgroups = all_subgroups(g)?;
    // A subgroup at least as large as A+B that nearly saturates it holds all of A+B.
    if let Some(h) = subgroups.iter().find(|h| {
        !h.is_whole() && h.order() >= ab.len() && defects_ok(&[&ab], h)
    }) {
        return Ok(MeCertificate { h: h.clone() });
    }
    let mut h = Subgroup::trivial(g);
    loop {
        let q = quotient(&h);
        let abar = q.image(a);
        let bbar = q.image(b);
        if is_elementary(&abar, &bbar)? {
            return Ok(MeCertificate { h });
        }
        let fbar = if kemperman_condition(&abar, &bbar) {
            kemperman_decompose(&abar, &bbar)?.h
        } else {
            period_unchecked(&sumset_unchecked(&abar, &bbar))
        };
        let f = Subgroup::from_closed(q.preimage(fbar.as_set()));
        let qf = quotient(&f);
        let fa = qf.image(a);
        let fb = qf.image(b);
        let sum_f = sumset_unchecked(&fa, &fb);
        let persists = f.order() > h.order()
            && !f.is_whole()
            && defects_ok(&[a, b, &ab], &f)
            && (!sum_f.is_full() || min_rep(&fa, &fb)? == 1)
            && sum_f.len() < fa.len() + fb.len();
        if !persists {
            return Err(Error::Invariant(format!(
                "subgroup ascent stalled at H = {:?} for A = {a:?}, B = {b:?}",
                h.as_set()
            )));
        }
        h = f;
    }
}

fn in_one_coset(s: &GroupSubset, h: &Subgroup) -> bool {
    add_subgroup(s, h).len() == h.order()
}

/// Validates a certificate against its theorem's clauses using only sumset
/// primitives and the elementary-pair classifier.
pub fn check_certificate(a: &GroupSubset, b: &GroupSubset, cert: &Certificate) -> CertificateCheck {
    if a.group() != b.group() {
        return CertificateCheck::malformed("A and B live in different groups");
    }
    if a.is_empty() || b.is_empty() {
        return CertificateCheck::malformed("A and B must be non-empty");
    }
    let g = a.group();
    let foreign = |s: &GroupSubset| s.group() != g;
    match cert {
        Certificate::Kemperman(KempermanCertificate { h, a0, b0 })
        | Certificate::Dual(DualCertificate::Split { h, a0, b0 }) => {
            if foreign(h.as_set()) || foreign(a0) || foreign(b0) {
                return CertificateCheck::malformed("certificate data lives in another group");
            }
            let dual = matches!(cert, Certificate::Dual(_));
            check_split(a, b, h, a0, b0, dual)
        }
        Certificate::Dual(DualCertificate::Elementary { witness }) => {
            let holds = crate::elementary::check_elementary_witness(a, b, witness);
            CertificateCheck::from_clauses(vec![clause(
                "elementary",
                if holds {
                    vec![]
                } else {
                    vec![format!("type {} witness does not validate", witness.type_name())]
                },
            )])
        }
        Certificate::Me(MeCertificate { h }) => {
            if foreign(h.as_set()) {
                return CertificateCheck::malformed("certificate data lives in another group");
            }
            let mut i = Vec::new();
            if h.is_whole() {
                i.push("H is not a proper subgroup".to_string());
            }
            let ab = sumset_unchecked(a, b);
            for (name, c) in [("A", a), ("B", b), ("A+B", &ab)] {
                let d = saturation_defect(c, h).expect("non-empty");
                if d + 1 > h.order() {
                    i.push(format!(
                        "defect |{name}+H|-|{name}| = {d} exceeds |H|-1 = {}",
                        h.order() - 1
                    ));
                }
            }
            let q = quotient(h);
            let mut ii = Vec::new();
            if !is_elementary(&q.image(a), &q.image(b)).unwrap_or(false) {
                ii.push("quotient pair is not elementary".to_string());
            }
            CertificateCheck::from_clauses(vec![clause("(i)", i), clause("(ii)", ii)])
        }
    }
}

fn check_split(
    a: &GroupSubset,
    b: &GroupSubset,
    h: &Subgroup,
    a0: &GroupSubset,
    b0: &GroupSubset,
    dual: bool,
) -> CertificateCheck {
    let q = quotient(h);
    let abar = q.image(a);
    let bbar = q.image(b);
    let sum_bar = sumset_unchecked(&abar, &bbar);

    let mut i = Vec::new();
    if h.is_trivial() {
        i.push("H is the zero subgroup".to_string());
    }
    if dual && h.is_whole() {
        i.push("H is not a proper subgroup".to_string());
    }
    let shapes_ok = !a0.is_empty() && !b0.is_empty() && a0.is_subset(a) && b0.is_subset(b);
    if !shapes_ok {
        i.push("A0, B0 must be non-empty subsets of A, B".to_string());
    } else {
        if !in_one_coset(a0, h) {
            i.push("A0 is not inside one H-coset".to_string());
        }
        if !in_one_coset(b0, h) {
            i.push("B0 is not inside one H-coset".to_string());
        }
        if dual {
            if sumset_unchecked(a0, b0).len() + 1 != a0.len() + b0.len() {
                i.push("|A0+B0| differs from |A0|+|B0|-1".to_string());
            }
            if !kemperman_condition(a0, b0) {
                i.push("(A0,B0) violates Kemperman's condition".to_string());
            }
        } else if !is_elementary(a0, b0).unwrap_or(false) {
            i.push("(A0,B0) is not elementary".to_string());
        }
    }

    let mut ii = Vec::new();
    if !is_union_of_cosets(&a.difference(a0), h) {
        ii.push("A \\ A0 is not a union of H-cosets".to_string());
    }
    if !is_union_of_cosets(&b.difference(b0), h) {
        ii.push("B \\ B0 is not a union of H-cosets".to_string());
    }

    let mut iii = Vec::new();
    if sum_bar.len() + 1 != abar.len() + bbar.len() {
        iii.push(format!(
            "|Abar+Bbar| = {} but |Abar|+|Bbar|-1 = {}",
            sum_bar.len(),
            abar.len() + bbar.len() - 1
        ));
    }
    let unique = shapes_ok && unique_residual_coset(&q, &abar, &bbar, a0, b0);
    let mut iv = Vec::new();
    if !unique {
        iv.push("the coset A0+B0+H is not uniquely represented in Abar+Bbar".to_string());
    }

    if dual {
        let mut iii = Vec::new();
        if !is_elementary(&abar, &bbar).unwrap_or(false) {
            iii.push("quotient pair is not elementary".to_string());
        }
        iii.extend(iv);
        CertificateCheck::from_clauses(vec![clause("(i)", i), clause("(ii)", ii), clause("(iii)", iii)])
    } else {
        CertificateCheck::from_clauses(vec![
            clause("(i)", i),
            clause("(ii)", ii),
            clause("(iii)", iii),
            clause("(iv)", iv),
        ])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TreeMode {
    Kemperman,
    Dual,
}

impl std::str::FromStr for TreeMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "kemperman" => Ok(TreeMode::Kemperman),
            "dual" => Ok(TreeMode::Dual),
            other => Err(Error::Usage(format!("unknown tree mode `{other}`"))),
        }
    }
}

/// Recursive decomposition down to elementary pairs.
#[derive(Debug, Clone)]
pub enum DecompositionTree {
    Leaf {
        a: GroupSubset,
        b: GroupSubset,
        witness: ElementaryWitness,
    },
    /// Residual `(A0, B0)` is elementary; the child is the quotient pair in `G/H`.
    Kemperman {
        cert: KempermanCertificate,
        child: Box<DecompositionTree>,
    },
    /// The child is the residual pair translated into `H` and viewed in `H`.
    Split {
        h: Subgroup,
        abar: GroupSubset,
        bbar: GroupSubset,
        shift_a: crate::group::GroupElement,
        shift_b: crate::group::GroupElement,
        child: Box<DecompositionTree>,
    },
}

pub fn decomposition_tree(a: &GroupSubset, b: &GroupSubset, mode: TreeMode) -> Result<DecompositionTree> {
    match mode {
        TreeMode::Kemperman => {
            require_nonempty(a, b)?;
            require_nontrivial(a.group())?;
        }
        TreeMode::Dual => {}
    }
    require_kemperman_hypotheses(a, b)?;
    build_tree(a, b, mode)
}

fn build_tree(a: &GroupSubset, b: &GroupSubset, mode: TreeMode) -> Result<DecompositionTree> {
    if let Some(witness) = classify_elementary(a, b)?.into_iter().next() {
        return Ok(DecompositionTree::Leaf {
            a: a.clone(),
            b: b.clone(),
            witness,
        });
    }
    match mode {
        TreeMode::Kemperman => {
            let cert = kemperman_decompose(a, b)?;
            let q = quotient(&cert.h);
            let child = build_tree(&q.image(a), &q.image(b), mode)?;
            Ok(DecompositionTree::Kemperman {
                cert,
                child: Box::new(child),
            })
        }
        TreeMode::Dual => match dual_decompose(a, b)? {
            DualCertificate::Elementary { .. } => {
                unreachable!("non-elementary pairs never get an elementary certificate")
            }
            DualCertificate::Split { h, a0, b0 } => {
                let g = a.group();
                let shift_a = a0.min().expect("non-empty");
                let shift_b = b0.min().expect("non-empty");
                let inner = h.as_group();
                let ra = h.restrict(&inner, &shift(&a0, g.neg(shift_a)))?;
                let rb = h.restrict(&inner, &shift(&b0, g.neg(shift_b)))?;
                let child = build_tree(&ra, &rb, mode)?;
                let q = quotient(&h);
                Ok(DecompositionTree::Split {
                    abar: q.image(a),
                    bbar: q.image(b),
                    h,
                    shift_a,
                    shift_b,
                    child: Box::new(child),
                })
            }
        },
    }
}

impl DecompositionTree {
    pub fn depth(&self) -> usize {
        match self {
            DecompositionTree::Leaf { .. } => 1,
            DecompositionTree::Kemperman { child, .. } | DecompositionTree::Split { child, .. } => {
                1 + child.depth()
            }
        }
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            DecompositionTree::Leaf { .. } => 1,
            DecompositionTree::Kemperman { child, .. } | DecompositionTree::Split { child, .. } => {
                child.leaf_count()
            }
        }
    }

    /// Rebuilds `(A, B)` bottom-up from node data alone.
    pub fn reassemble(&self) -> Result<(GroupSubset, GroupSubset)> {
        match self {
            DecompositionTree::Leaf { a, b, .. } => Ok((a.clone(), b.clone())),
            DecompositionTree::Kemperman { cert, child } => {
                let (abar, bbar) = child.reassemble()?;
                let q = quotient(&cert.h);
                let a = cert
                    .a0
                    .union(&q.preimage(&abar).difference(&add_subgroup(&cert.a0, &cert.h)));
                let b = cert
                    .b0
                    .union(&q.preimage(&bbar).difference(&add_subgroup(&cert.b0, &cert.h)));
                Ok((a, b))
            }
            DecompositionTree::Split {
                h,
                abar,
                bbar,
                shift_a,
                shift_b,
                child,
            } => {
                let (ra, rb) = child.reassemble()?;
                let a0 = shift(&h.embed(&ra)?, *shift_a);
                let b0 = shift(&h.embed(&rb)?, *shift_b);
                let q = quotient(h);
                let a = a0.union(&q.preimage(abar).difference(&add_subgroup(&a0, h)));
                let b = b0.union(&q.preimage(bbar).difference(&add_subgroup(&b0, h)));
                Ok((a, b))
            }
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        use serde_json::json;
        match self {
            DecompositionTree::Leaf { a, b, witness } => json!({
                "node": "leaf",
                "group": a.group().to_json(),
                "A": json::set(a),
                "B": json::set(b),
                "witness": witness.to_json(a.group()),
            }),
            DecompositionTree::Kemperman { cert, child } => json!({
                "node": "kemperman",
                "H": json::sub(&cert.h),
                "A0": json::set(&cert.a0),
                "B0": json::set(&cert.b0),
                "child": child.to_json(),
            }),
            DecompositionTree::Split {
                h,
                abar,
                bbar,
                shift_a,
                shift_b,
                child,
            } => json!({
                "node": "split",
                "H": json::sub(h),
                "Abar": json::set(abar),
                "Bbar": json::set(bbar),
                "shift_A": json::elem(h.group(), *shift_a),
                "shift_B": json::elem(h.group(), *shift_b),
                "child": child.to_json(),
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::parse_group;

    fn set(g: &FiniteAbelianGroup, r: &[u32]) -> GroupSubset {
        GroupSubset::from_residues(g, r).unwrap()
    }

    fn z6_pair() -> (FiniteAbelianGroup, GroupSubset, GroupSubset) {
        let z6 = parse_group("Z6").unwrap();
        let a = set(&z6, &[0, 1, 4]);
        let b = set(&z6, &[0, 1, 3, 4]);
        (z6, a, b)
    }

    fn precondition_of(r: Result<impl std::fmt::Debug>) -> Hypothesis {
        match r {
            Err(Error::Precondition { hypothesis, .. }) => hypothesis,
            other => panic!("expected a precondition error, got {other:?}"),
        }
    }

    #[test]
    fn kemperman_examples() {
        let (z6, a, b) = z6_pair();
        let c = kemperman_decompose(&a, &b).unwrap();
        assert_eq!(c.h.as_set(), &set(&z6, &[0, 3]));
        assert_eq!(c.a0, set(&z6, &[0]));
        assert_eq!(c.b0, set(&z6, &[0, 3]));
        assert!(check_certificate(&a, &b, &Certificate::Kemperman(c)).valid);

        let z7 = parse_group("Z7").unwrap();
        let a = set(&z7, &[0, 1, 2]);
        let b = set(&z7, &[2, 3]);
        let c = kemperman_decompose(&a, &b).unwrap();
        assert!(c.h.is_whole());
        assert_eq!((c.a0, c.b0), (a, b));

        let z4 = parse_group("Z4").unwrap();
        let s = set(&z4, &[0, 2]);
        assert_eq!(precondition_of(kemperman_decompose(&s, &s)), Hypothesis::KempermanCondition);
    }

    #[test]
    fn tampered_certificate_names_the_clause() {
        let (z6, a, b) = z6_pair();
        let mut c = kemperman_decompose(&a, &b).unwrap();
        c.b0 = set(&z6, &[0]);
        let check = check_certificate(&a, &b, &Certificate::Kemperman(c));
        assert!(!check.valid);
        assert_eq!(check.failing(), vec!["(ii)"]);
    }

    #[test]
    fn dual_examples() {
        let (z6, a, b) = z6_pair();
        match dual_decompose(&a, &b).unwrap() {
            DualCertificate::Split { h, a0, b0 } => {
                assert_eq!(h.as_set(), &set(&z6, &[0, 3]));
                assert_eq!(a0, set(&z6, &[0]));
                assert_eq!(b0, set(&z6, &[0, 3]));
            }
            other => panic!("unexpected {other:?}"),
        }
        let z5 = parse_group("Z5").unwrap();
        match dual_decompose(&set(&z5, &[0, 1, 4]), &set(&z5, &[0, 2, 3])).unwrap() {
            DualCertificate::Elementary { witness } => assert_eq!(witness.type_number(), 3),
            other => panic!("unexpected {other:?}"),
        }
        let s = set(&z6, &[0, 2, 4]);
        assert_eq!(precondition_of(dual_decompose(&s, &s)), Hypothesis::KempermanCondition);
    }

    #[test]
    fn me_examples() {
        let (z6, a, b) = z6_pair();
        let c = me_decompose(&a, &b).unwrap();
        assert_eq!(c.h.as_set(), &set(&z6, &[0, 3]));
        let z5 = parse_group("Z5").unwrap();
        let s = set(&z5, &[0, 1]);
        assert!(me_decompose(&s, &s).unwrap().h.is_trivial());
        let z4 = parse_group("Z4").unwrap();
        let full = GroupSubset::full(&z4);
        assert_eq!(precondition_of(me_decompose(&full, &full)), Hypothesis::SparseElement);
    }

    #[test]
    fn me_certificate_with_large_h_fails_clause_i() {
        let (z6, a, b) = z6_pair();
        let h = Subgroup::from_subset(&set(&z6, &[0, 2, 4])).unwrap();
        let check = check_certificate(&a, &b, &Certificate::Me(MeCertificate { h }));
        assert!(!check.valid);
        assert!(check.failing().contains(&"(i)"));
        assert!(check.clauses[0].detail.contains("|A+H|-|A| = 3"));
    }

    #[test]
    fn certificate_json_round_trip() {
        let (z6, a, b) = z6_pair();
        let k = Certificate::Kemperman(kemperman_decompose(&a, &b).unwrap());
        assert_eq!(
            k.to_json(&z6).to_string(),
            r#"{"kind":"kemperman","H":[[0],[3]],"A0":[[0]],"B0":[[0],[3]]}"#
        );
        let d = Certificate::Dual(dual_decompose(&a, &b).unwrap());
        let m = Certificate::Me(me_decompose(&a, &b).unwrap());
        let z5 = parse_group("Z5").unwrap();
        let e = Certificate::Dual(dual_decompose(&set(&z5, &[0, 1, 4]), &set(&z5, &[0, 2, 3])).unwrap());
        for (g, c) in [(&z6, k), (&z6, d), (&z6, m), (&z5, e)] {
            let text = c.to_json(g).to_string();
            let back = Certificate::from_json(g, &serde_json::from_str(&text).unwrap()).unwrap();
            assert_eq!(back, c);
            assert_eq!(back.to_json(g).to_string(), text);
        }
    }

    #[test]
    fn kemperman_tree_example() {
        let (_, a, b) = z6_pair();
        let t = decomposition_tree(&a, &b, TreeMode::Kemperman).unwrap();
        assert_eq!(t.depth(), 2);
        match &t {
            DecompositionTree::Kemperman { child, .. } => match child.as_ref() {
                DecompositionTree::Leaf { a, witness, .. } => {
                    assert_eq!(a.group().order(), 3);
                    assert_eq!(witness.type_number(), 2);
                }
                other => panic!("unexpected {other:?}"),
            },
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(t.reassemble().unwrap(), (a, b));
    }

    #[test]
    fn dual_tree_example() {
        let (_, a, b) = z6_pair();
        let t = decomposition_tree(&a, &b, TreeMode::Dual).unwrap();
        assert_eq!(t.depth(), 2);
        match &t {
            DecompositionTree::Split { child, .. } => match child.as_ref() {
                DecompositionTree::Leaf { witness, a, b } => {
                    assert_eq!(witness.type_number(), 1);
                    assert_eq!((a.len(), b.len()), (1, 2));
                }
                other => panic!("unexpected {other:?}"),
            },
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(t.reassemble().unwrap(), (a, b));
    }

    #[test]
    fn elementary_pair_is_a_single_leaf() {
        let z5 = parse_group("Z5").unwrap();
        let (a, b) = (set(&z5, &[0, 1, 4]), set(&z5, &[0, 2, 3]));
        for mode in [TreeMode::Kemperman, TreeMode::Dual] {
            let t = decomposition_tree(&a, &b, mode).unwrap();
            assert_eq!((t.depth(), t.leaf_count()), (1, 1));
        }
    }
}
