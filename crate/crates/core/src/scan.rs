//! Exhaustive and seeded scans over a group catalog. Work is split into
//! items, checked in parallel and merged in item order, so the output does not
//! depend on the number of workers.

use std::collections::BTreeMap;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::boolean::{antisym_witnesses, selfpair_witness, struct_classify, struct_synthesize, verify_prior_bounds};
use crate::catalog::{default_catalog, CatalogEntry};
use crate::decompose::{
    check_certificate, decomposition_tree, dual_decompose, kemperman_condition, kemperman_decompose,
    me_decompose, small_sumset, Certificate, TreeMode,
};
use crate::elementary::is_elementary;
use crate::error::{Error, Result};
use crate::group::FiniteAbelianGroup;
use crate::subgroup::{all_subgroups, Subgroup, DEFAULT_SUBGROUP_CAP};
use crate::subset::GroupSubset;
use crate::sumset::{add_subgroup, is_aperiodic, min_rep, period, shift, sumset};
use crate::synth::{assemble_pair, stream_rng, struct_instances, StructInstance};
use crate::theorems::{
    admissible_refinements, check_thick_reduction, hampla_structure, recover_partition, refine_partition,
    thick_reduction, verify_theorem, PartitionKind, TheoremId,
};

/// Default number of assembled pairs in the sufficiency suite.
pub const DEFAULT_SAMPLES: usize = 10_000;
/// Instance spaces above this size are sampled rather than enumerated.
pub const DEFAULT_SYNTH_LIMIT: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Suite {
    Kneser,
    KempermanScherk,
    Kemperman,
    Sufficiency,
    Dual,
    Me,
    Struct,
    Lemmas,
    Thick,
    Hampla,
    Appendix,
    PriorBounds,
}

impl Suite {
    pub const ALL: [Suite; 12] = [
        Suite::Kneser,
        Suite::KempermanScherk,
        Suite::Kemperman,
        Suite::Sufficiency,
        Suite::Dual,
        Suite::Me,
        Suite::Struct,
        Suite::Lemmas,
        Suite::Thick,
        Suite::Hampla,
        Suite::Appendix,
        Suite::PriorBounds,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Kneser => "kneser",
            Suite::KempermanScherk => "kemperman_scherk",
            Suite::Kemperman => "kemperman",
            Suite::Sufficiency => "sufficiency",
            Suite::Dual => "dual",
            Suite::Me => "me",
            Suite::Struct => "struct",
            Suite::Lemmas => "lemmas",
            Suite::Thick => "thick",
            Suite::Hampla => "hampla",
            Suite::Appendix => "appendix",
            Suite::PriorBounds => "prior_bounds",
        }
    }

    fn checks(self) -> &'static [Check] {
        match self {
            Suite::Kneser => &[Check::Kneser],
            Suite::KempermanScherk => &[Check::KempermanScherk],
            Suite::Kemperman => &[Check::Kemperman],
            Suite::Sufficiency => &[Check::Sufficiency],
            Suite::Dual => &[Check::Dual],
            Suite::Me => &[Check::Me],
            Suite::Struct => &[Check::StructClassify, Check::StructSynthesize],
            Suite::Lemmas => &[Check::LemmaAntisym, Check::LemmaSmdbel, Check::LemmaElemstr, Check::SelfPairMu],
            Suite::Thick => &[Check::Thick],
            Suite::Hampla => &[Check::Hampla],
            Suite::Appendix => &[Check::AppendixRecover, Check::AppendixRefine],
            Suite::PriorBounds => &[Check::PriorBounds],
        }
    }
}

/// Parses `all` or a comma-separated list of suite names.
pub fn parse_suites(text: &str) -> Result<Vec<Suite>> {
    let mut out = Vec::new();
    for tok in text.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        if tok == "all" {
            out.extend(Suite::ALL);
        } else {
            out.push(tok.parse()?);
        }
    }
    if out.is_empty() {
        return Err(Error::Usage("no suite selected".into()));
    }
    out.sort();
    out.dedup();
    Ok(out)
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| {
            let names: Vec<&str> = Suite::ALL.iter().map(|x| x.name()).collect();
            Error::Usage(format!("unknown suite `{s}`; expected all or one of {}", names.join(", ")))
        })
    }
}

/// One recorded property, checked per catalog group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Check {
    Kneser,
    KempermanScherk,
    Kemperman,
    Sufficiency,
    Dual,
    Me,
    StructClassify,
    StructSynthesize,
    LemmaAntisym,
    LemmaSmdbel,
    LemmaElemstr,
    SelfPairMu,
    Thick,
    Hampla,
    AppendixRecover,
    AppendixRefine,
    PriorBounds,
}

impl Check {
    fn name(self) -> &'static str {
        match self {
            Check::Kneser => "kneser",
            Check::KempermanScherk => "kemperman_scherk",
            Check::Kemperman => "kemperman",
            Check::Sufficiency => "sufficiency",
            Check::Dual => "dual",
            Check::Me => "me",
            Check::StructClassify => "struct_classify",
            Check::StructSynthesize => "struct_synthesize",
            Check::LemmaAntisym => "lemma_antisym",
            Check::LemmaSmdbel => "lemma_smdbel",
            Check::LemmaElemstr => "lemma_elemstr",
            Check::SelfPairMu => "self_pair_mu",
            Check::Thick => "thick",
            Check::Hampla => "hampla",
            Check::AppendixRecover => "appendix_recover",
            Check::AppendixRefine => "appendix_refine",
            Check::PriorBounds => "prior_bounds",
        }
    }

    /// Largest group order at which the check runs.
    fn max_order(self) -> usize {
        match self {
            Check::Kneser | Check::KempermanScherk => 9,
            Check::Kemperman | Check::Dual | Check::Me | Check::Hampla => 8,
            Check::AppendixRecover | Check::AppendixRefine | Check::LemmaAntisym => 8,
            Check::Thick => 10,
            _ => 16,
        }
    }

    fn boolean_only(self) -> bool {
        matches!(
            self,
            Check::StructClassify
                | Check::StructSynthesize
                | Check::LemmaAntisym
                | Check::LemmaSmdbel
                | Check::LemmaElemstr
                | Check::SelfPairMu
                | Check::PriorBounds
        )
    }
}

/// Bounds on the sizes of the enumerated sets `A` and `B`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SizeFilter {
    pub min: usize,
    pub max: Option<usize>,
}

impl Default for SizeFilter {
    fn default() -> Self {
        SizeFilter { min: 1, max: None }
    }
}

impl SizeFilter {
    pub fn validate(&self) -> Result<()> {
        match self.max {
            _ if self.min == 0 => Err(Error::Usage("--min-size must be at least 1".into())),
            Some(max) if max < self.min => Err(Error::Usage(format!("--max-size {max} is below --min-size {}", self.min))),
            _ => Ok(()),
        }
    }

    fn admits(&self, s: &GroupSubset) -> bool {
        s.len() >= self.min && self.max.is_none_or(|m| s.len() <= m)
    }
}

#[derive(Debug, Clone)]
pub struct ScanConfig {
    pub catalog: Vec<CatalogEntry>,
    pub suites: Vec<Suite>,
    /// Further cap on group order; at most the subgroup-enumeration cap.
    pub max_order: Option<usize>,
    pub seed: u64,
    pub jobs: usize,
    pub samples: usize,
    pub synth_limit: usize,
    /// Applies to the exhaustively enumerated sets; sampled and synthesized
    /// items are not filtered.
    pub sizes: SizeFilter,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig {
            catalog: default_catalog(),
            suites: Suite::ALL.to_vec(),
            max_order: None,
            seed: 0,
            jobs: 1,
            samples: DEFAULT_SAMPLES,
            synth_limit: DEFAULT_SYNTH_LIMIT,
            sizes: SizeFilter::default(),
        }
    }
}

/// Outcome of one check on one group.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanRecord {
    pub group: String,
    pub theorem: String,
    pub checked: u64,
    pub violations: u64,
    pub first_violation: Option<Value>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct TheoremTally {
    pub checked: u64,
    pub violations: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanSummary {
    pub groups: usize,
    pub records: usize,
    pub checked: u64,
    pub violations: u64,
    pub seed: u64,
    pub theorems: BTreeMap<String, TheoremTally>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanOutcome {
    pub records: Vec<ScanRecord>,
    pub summary: ScanSummary,
}

impl ScanOutcome {
    /// One JSON line per record, then the summary line.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            let mut v = serde_json::Map::new();
            v.insert("record".into(), json!("check"));
            if let Value::Object(fields) = serde_json::to_value(r).expect("serializable") {
                v.extend(fields);
            }
            out.push_str(&Value::Object(v).to_string());
            out.push('\n');
        }
        out.push_str(&self.summary_line());
        out.push('\n');
        out
    }

    pub fn summary_line(&self) -> String {
        json!({"record": "summary", "summary": self.summary}).to_string()
    }
}

#[derive(Debug, Default)]
struct Tally {
    checked: u64,
    violations: u64,
    first: Option<Value>,
}

impl Tally {
    fn expect(&mut self, holds: bool, detail: impl FnOnce() -> Value) {
        self.checked += 1;
        if !holds {
            self.fail(detail());
        }
    }

    fn fail(&mut self, detail: Value) {
        self.violations += 1;
        if self.first.is_none() {
            self.first = Some(detail);
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.checked += other.checked;
        self.violations += other.violations;
        if self.first.is_none() {
            self.first = other.first;
        }
        self
    }
}

/// Shared per-group data for a check.
enum Items {
    /// Item `i` is the subset with mask `i + 1`.
    Subsets(usize),
    Subgroups(Vec<Subgroup>),
    Samples(Vec<u64>),
    Instances(Vec<StructInstance>),
}

impl Items {
    fn len(&self) -> usize {
        match self {
            Items::Subsets(n) => *n,
            Items::Subgroups(v) => v.len(),
            Items::Samples(v) => v.len(),
            Items::Instances(v) => v.len(),
        }
    }
}

fn pair_json(a: &GroupSubset, b: &GroupSubset, detail: impl Into<String>) -> Value {
    json!({"A": a.to_json(), "B": b.to_json(), "detail": detail.into()})
}

fn set_json(a: &GroupSubset, detail: impl Into<String>) -> Value {
    json!({"A": a.to_json(), "detail": detail.into()})
}

fn subset(g: &FiniteAbelianGroup, i: usize) -> GroupSubset {
    GroupSubset::from_mask(g, i as u64 + 1)
}

fn each_b(g: &FiniteAbelianGroup, sizes: &SizeFilter, mut f: impl FnMut(GroupSubset)) {
    for m in 1u64..(1u64 << g.order()) {
        let b = GroupSubset::from_mask(g, m);
        if sizes.admits(&b) {
            f(b);
        }
    }
}

fn unexpected(a: &GroupSubset, b: &GroupSubset, e: &Error) -> Value {
    pair_json(a, b, format!("unexpected error: {e}"))
}

/// Runs `check` on item `i` of group `g`.
fn run_item(check: Check, g: &FiniteAbelianGroup, items: &Items, i: usize, cfg: &ScanConfig) -> Tally {
    let mut t = Tally::default();
    let (seed, sizes) = (cfg.seed, &cfg.sizes);
    if matches!(items, Items::Subsets(_)) && !sizes.admits(&subset(g, i)) {
        return t;
    }
    match check {
        Check::Kneser => {
            let a = subset(g, i);
            each_b(g, sizes, |b| {
                if !small_sumset(&a, &b) {
                    return;
                }
                match verify_theorem(TheoremId::Kneser, &a, &b) {
                    Ok(r) => t.expect(r.conclusion_holds, || pair_json(&a, &b, r.witness.to_string())),
                    Err(e) => t.fail(unexpected(&a, &b, &e)),
                }
            });
        }
        Check::KempermanScherk => {
            let a = subset(g, i);
            each_b(g, sizes, |b| match verify_theorem(TheoremId::KempermanScherk, &a, &b) {
                Ok(r) => t.expect(r.conclusion_holds, || pair_json(&a, &b, r.witness.to_string())),
                Err(e) => t.fail(unexpected(&a, &b, &e)),
            });
        }
        Check::Kemperman | Check::Dual => {
            let a = subset(g, i);
            each_b(g, sizes, |b| {
                if !small_sumset(&a, &b) || !kemperman_condition(&a, &b) {
                    return;
                }
                let (cert, mode) = if check == Check::Kemperman {
                    (kemperman_decompose(&a, &b).map(Certificate::Kemperman), TreeMode::Kemperman)
                } else {
                    (dual_decompose(&a, &b).map(Certificate::Dual), TreeMode::Dual)
                };
                let cert = match cert {
                    Ok(c) => c,
                    Err(e) => return t.fail(unexpected(&a, &b, &e)),
                };
                let report = check_certificate(&a, &b, &cert);
                if !report.valid {
                    return t.fail(pair_json(&a, &b, format!("failing clauses {:?}", report.failing())));
                }
                let tight = sumset(&a, &b).map(|s| s.len() + 1 == a.len() + b.len()).unwrap_or(false);
                if check == Check::Kemperman && !tight {
                    return t.fail(pair_json(&a, &b, "|A+B| differs from |A|+|B|-1"));
                }
                match decomposition_tree(&a, &b, mode).and_then(|tree| tree.reassemble()) {
                    Ok(pair) => t.expect(pair == (a.clone(), b.clone()), || pair_json(&a, &b, "tree does not reassemble")),
                    Err(e) => t.fail(unexpected(&a, &b, &e)),
                }
            });
        }
        Check::Me => {
            let a = subset(g, i);
            each_b(g, sizes, |b| {
                if !small_sumset(&a, &b) {
                    return;
                }
                let ab = sumset(&a, &b).expect("same group");
                if ab.is_full() && min_rep(&a, &b).expect("same group") != 1 {
                    return;
                }
                match me_decompose(&a, &b) {
                    Ok(c) => {
                        let report = check_certificate(&a, &b, &Certificate::Me(c));
                        t.expect(report.valid, || pair_json(&a, &b, format!("failing clauses {:?}", report.failing())));
                    }
                    Err(e) => t.fail(unexpected(&a, &b, &e)),
                }
            });
        }
        Check::Sufficiency => {
            let Items::Samples(streams) = items else { unreachable!() };
            let stream = streams[i];
            match assemble_pair(&mut stream_rng(seed, stream), g) {
                Ok(p) => {
                    let failures = p.failures();
                    t.expect(failures.is_empty(), || {
                        json!({"stream": stream, "A": p.a.to_json(), "B": p.b.to_json(), "detail": failures.join("; ")})
                    });
                }
                Err(e) => t.fail(json!({"stream": stream, "detail": e.to_string()})),
            }
        }
        Check::StructClassify => {
            let a = subset(g, i);
            let two = sumset(&a, &a).expect("same group");
            if two.len() < 2 * a.len() {
                match struct_classify(&a) {
                    Ok(c) => t.expect(c.check(&a), || set_json(&a, c.to_json().to_string())),
                    Err(e) => t.fail(set_json(&a, e.to_string())),
                }
            }
        }
        Check::StructSynthesize => {
            let Items::Instances(list) = items else { unreachable!() };
            let inst = &list[i];
            match struct_synthesize(&inst.f, &inst.h, &inst.s, inst.shift, &inst.removed) {
                Ok(out) => {
                    let actual = sumset(&out.a, &out.a).expect("same group").len();
                    let ok = actual == out.predicted_doubling && actual < 2 * out.a.len();
                    t.expect(ok, || set_json(&out.a, format!("|2A| = {actual}, predicted {}", out.predicted_doubling)));
                }
                Err(e) => t.fail(json!({"S": inst.s.to_json(), "detail": e.to_string()})),
            }
        }
        Check::LemmaAntisym => {
            let Items::Subgroups(list) = items else { unreachable!() };
            let h = &list[i];
            let elems: Vec<_> = h.elements().collect();
            for mask in 0u64..1 << elems.len() {
                let s = GroupSubset::from_elements(
                    g,
                    elems.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &x)| x),
                );
                let witnesses = antisym_witnesses(&s, h).unwrap_or_default();
                for h0 in witnesses {
                    let pi = period(&s).expect("non-empty");
                    let expected = h.as_set().difference(&shift(pi.as_set(), h0));
                    let two = sumset(&s, &s).expect("same group");
                    t.expect(two == expected, || set_json(&s, format!("h0 = {:?}", g.coords(h0))));
                }
            }
        }
        Check::LemmaSmdbel => {
            let a = subset(g, i);
            let two = sumset(&a, &a).expect("same group");
            if is_aperiodic(&two) {
                let elementary = is_elementary(&a, &a).unwrap_or(false);
                t.expect((two.len() < 2 * a.len()) == elementary, || set_json(&a, format!("elementary = {elementary}")));
            }
        }
        Check::LemmaElemstr => {
            let a = subset(g, i);
            let elementary = is_elementary(&a, &a).unwrap_or(false);
            match selfpair_witness(&a) {
                Ok(w) => {
                    let ok = w.is_some() == elementary && w.as_ref().is_none_or(|w| w.check(&a));
                    t.expect(ok, || set_json(&a, format!("elementary = {elementary}")));
                }
                Err(e) => t.fail(set_json(&a, e.to_string())),
            }
        }
        Check::SelfPairMu => {
            let a = subset(g, i);
            if a.len() >= 2 {
                let mu = min_rep(&a, &a).expect("same group");
                t.expect(mu >= 2, || set_json(&a, format!("mu = {mu}")));
            }
        }
        Check::Thick => {
            let a = subset(g, i);
            if 2 * a.len() <= g.order() {
                match thick_reduction(&a).and_then(|r| check_thick_reduction(&a, &r).map(|ok| (r, ok))) {
                    Ok((r, ok)) => t.expect(ok, || set_json(&a, r.to_json().to_string())),
                    Err(e) => t.fail(set_json(&a, e.to_string())),
                }
            }
        }
        Check::Hampla => {
            let a = subset(g, i);
            each_b(g, sizes, |b| {
                if b.len() < 2 || !small_sumset(&a, &b) {
                    return;
                }
                if sumset(&a, &b).expect("same group").len() + 2 > g.order() {
                    return;
                }
                match hampla_structure(&a, &b) {
                    Ok(w) => t.expect(w.check(&a), || pair_json(&a, &b, w.to_json().to_string())),
                    Err(e) => t.fail(unexpected(&a, &b, &e)),
                }
            });
        }
        Check::AppendixRecover | Check::AppendixRefine => {
            let a = subset(g, i);
            let subgroups = all_subgroups(g).expect("catalog orders are small");
            each_b(g, sizes, |b| {
                if !small_sumset(&a, &b) || !kemperman_condition(&a, &b) {
                    return;
                }
                let ab = sumset(&a, &b).expect("same group");
                for h in &subgroups {
                    let closure = add_subgroup(&ab, h);
                    let coset = closure.len() == h.order() && ab.len() == h.order() && a.len() >= 2 && b.len() >= 2;
                    let punctured = closure.len() == h.order() && ab.len() + 1 == h.order();
                    if !coset && !punctured {
                        continue;
                    }
                    let w = match recover_partition(&a, &b, h) {
                        Ok(w) => w,
                        Err(e) => {
                            t.fail(unexpected(&a, &b, &e));
                            continue;
                        }
                    };
                    if check == Check::AppendixRecover {
                        let kind = if coset { PartitionKind::Coset } else { PartitionKind::PuncturedCoset };
                        let ok = w.kind == kind && w.is_valid() && w.reconstruct() == (a.clone(), b.clone());
                        t.expect(ok, || pair_json(&a, &b, "partition does not reconstruct the pair"));
                        continue;
                    }
                    for c in admissible_refinements(&w) {
                        match refine_partition(&w, c) {
                            Ok(r) => t.expect(r.all_hold(), || pair_json(&a, &b, r.to_json().to_string())),
                            Err(e) => t.fail(unexpected(&a, &b, &e)),
                        }
                    }
                }
            });
        }
        Check::PriorBounds => {
            let a = subset(g, i);
            if sumset(&a, &a).expect("same group").len() < 2 * a.len() {
                match verify_prior_bounds(&a) {
                    Ok(r) => t.expect(r.conclusion_holds, || set_json(&a, r.witness.to_string())),
                    Err(e) => t.fail(set_json(&a, e.to_string())),
                }
            }
        }
    }
    t
}

fn applies(check: Check, g: &FiniteAbelianGroup, cap: usize) -> bool {
    let n = g.order();
    n <= check.max_order().min(cap) && (!check.boolean_only() || g.has_exponent_two())
}

fn prepare(check: Check, entry: &CatalogEntry, cfg: &ScanConfig, sample_streams: &[u64]) -> Result<Items> {
    let g = &entry.group;
    Ok(match check {
        Check::Sufficiency => Items::Samples(sample_streams.to_vec()),
        Check::StructSynthesize => Items::Instances(struct_instances(g, cfg.synth_limit, cfg.seed)?),
        Check::LemmaAntisym => Items::Subgroups(all_subgroups(g)?),
        _ => Items::Subsets((1usize << g.order()) - 1),
    })
}

/// Runs the configured suites over the catalog.
pub fn run_scan(cfg: &ScanConfig) -> Result<ScanOutcome> {
    let cap = cfg.max_order.unwrap_or(DEFAULT_SUBGROUP_CAP);
    if cap > DEFAULT_SUBGROUP_CAP {
        return Err(Error::Usage(format!("--max-order {cap} exceeds the hard cap {DEFAULT_SUBGROUP_CAP}")));
    }
    cfg.sizes.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs.max(1))
        .build()
        .map_err(|e| Error::Resource(e.to_string()))?;

    let mut checks: Vec<Check> = cfg.suites.iter().flat_map(|s| s.checks().iter().copied()).collect();
    checks.sort();
    checks.dedup();

    // Sufficiency samples go round-robin to the eligible groups.
    let eligible: Vec<usize> = cfg
        .catalog
        .iter()
        .enumerate()
        .filter(|(_, e)| applies(Check::Sufficiency, &e.group, cap) && !e.group.is_trivial())
        .filter(|(_, e)| all_subgroups(&e.group).map(|s| s.len() > 2).unwrap_or(false))
        .map(|(k, _)| k)
        .collect();
    let mut streams: Vec<Vec<u64>> = vec![Vec::new(); cfg.catalog.len()];
    if !eligible.is_empty() {
        for s in 0..cfg.samples as u64 {
            streams[eligible[s as usize % eligible.len()]].push(s);
        }
    }

    let mut records = Vec::new();
    for (k, entry) in cfg.catalog.iter().enumerate() {
        for &check in &checks {
            if !applies(check, &entry.group, cap) || (check == Check::Sufficiency && !eligible.contains(&k)) {
                continue;
            }
            let items = prepare(check, entry, cfg, &streams[k])?;
            let tally = pool.install(|| {
                (0..items.len())
                    .into_par_iter()
                    .map(|i| run_item(check, &entry.group, &items, i, cfg))
                    .collect::<Vec<_>>()
            });
            let tally = tally.into_iter().fold(Tally::default(), Tally::merge);
            records.push(ScanRecord {
                group: entry.name.clone(),
                theorem: check.name().to_string(),
                checked: tally.checked,
                violations: tally.violations,
                first_violation: tally.first,
            });
        }
    }

    let mut theorems: BTreeMap<String, TheoremTally> = BTreeMap::new();
    for r in &records {
        let e = theorems.entry(r.theorem.clone()).or_default();
        e.checked += r.checked;
        e.violations += r.violations;
    }
    let summary = ScanSummary {
        groups: cfg.catalog.len(),
        records: records.len(),
        checked: records.iter().map(|r| r.checked).sum(),
        violations: records.iter().map(|r| r.violations).sum(),
        seed: cfg.seed,
        theorems,
    };
    Ok(ScanOutcome { records, summary })
}
