//! Command-line front end. Every subcommand prints exactly one JSON document
//! (or JSON lines for `scan`) on standard output.

use std::fs;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::boolean::{selfpair_witness, struct_classify, struct_synthesize, verify_prior_bounds};
use crate::catalog::{default_catalog, parse_catalog};
use crate::decompose::{
    check_certificate, decomposition_tree, dual_decompose, kemperman_condition, kemperman_decompose,
    me_decompose, small_sumset, Certificate, TreeMode,
};
use crate::elementary::{canonical_type, classify_elementary};
use crate::error::{Error, Result};
use crate::group::{parse_group, FiniteAbelianGroup};
use crate::scan::{parse_suites, run_scan, ScanConfig, SizeFilter, DEFAULT_SAMPLES, DEFAULT_SYNTH_LIMIT};
use crate::subgroup::{Subgroup, DEFAULT_SUBGROUP_CAP};
use crate::subset::GroupSubset;
use crate::sumset::{min_rep, period, sumset};
use crate::theorems::{
    hampla_structure, is_thick_component, thick_reduction, verify_theorem, TheoremId, VerificationReport,
};

#[derive(Debug, Parser)]
#[command(name = "sumset-kit", version, about = "Sumsets and structure certificates in finite abelian groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct PairArgs {
    /// Group spec such as Z6 or Z2xZ4.
    #[arg(long)]
    group: String,
    /// Set as JSON coordinate arrays, or `0,1,4` in a cyclic group.
    #[arg(long = "A")]
    a: String,
    #[arg(long = "B")]
    b: Option<String>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sumset statistics, elementary witnesses, certificates and theorem checks.
    Analyze {
        #[command(flatten)]
        pair: PairArgs,
        /// Comma-separated certificate kinds: kemperman, dual, me.
        #[arg(long, default_value = "kemperman,dual,me")]
        decompose: String,
    },
    /// Elementary-pair types with --B; the small-doubling structure without.
    Classify {
        #[command(flatten)]
        pair: PairArgs,
    },
    /// One certificate, optionally with the full decomposition tree.
    Decompose {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, default_value = "kemperman")]
        mode: String,
        #[arg(long)]
        tree: bool,
    },
    /// Checks one statement on the given sets.
    Verify {
        #[command(flatten)]
        pair: PairArgs,
        /// kneser, kemperman_scherk, corollary_half, equality_claim, thick,
        /// thick_reduction, hampla, prior_bounds.
        #[arg(long)]
        theorem: String,
    },
    /// Validates a certificate file (or inline JSON) clause by clause.
    CheckCert {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long)]
        cert: String,
    },
    /// Runs the exhaustive and seeded suites over a group catalog.
    Scan {
        /// Comma-separated group specs; defaults to every group of order at most 16.
        #[arg(long)]
        catalog: Option<String>,
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long = "max-order")]
        max_order: Option<usize>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
        /// Smallest enumerated set size.
        #[arg(long = "min-size", default_value_t = 1)]
        min_size: usize,
        /// Largest enumerated set size.
        #[arg(long = "max-size")]
        max_size: Option<usize>,
        /// Write JSON lines here; standard output then carries the summary only.
        #[arg(long)]
        out: Option<String>,
    },
    /// Builds `(shift + S + H) \ removed` and its predicted doubling.
    Synth {
        #[arg(long)]
        group: String,
        #[arg(long = "F")]
        f: String,
        #[arg(long = "H")]
        h: String,
        #[arg(long = "S")]
        s: String,
        /// Element as a JSON coordinate array; defaults to zero.
        #[arg(long)]
        shift: Option<String>,
        #[arg(long, default_value = "[]")]
        removed: String,
    },
}

/// Exit status and standard output of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliOutput {
    pub code: i32,
    pub stdout: String,
}

fn error_json(e: &Error) -> Value {
    let mut body = json!({"kind": e.kind(), "message": e.to_string()});
    if let Error::Precondition { hypothesis, .. } = e {
        body["hypothesis"] = json!(hypothesis.name());
    }
    json!({"error": body})
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Usage(_) | Error::Parse { .. } => 2,
        _ => 1,
    }
}

/// Runs the command line `args` (program name first).
pub fn run_cli<I, T>(args: I) -> CliOutput
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => CliOutput {
                    code: 0,
                    stdout: e.to_string(),
                },
                _ => CliOutput {
                    code: 2,
                    stdout: format!("{}\n", error_json(&Error::Usage(e.to_string().trim().to_string()))),
                },
            };
        }
    };
    match dispatch(cli.command) {
        Ok((code, text)) => CliOutput { code, stdout: text },
        Err(e) => CliOutput {
            code: exit_code(&e),
            stdout: format!("{}\n", error_json(&e)),
        },
    }
}

fn load_pair(p: &PairArgs) -> Result<(FiniteAbelianGroup, GroupSubset, Option<GroupSubset>)> {
    let g = parse_group(&p.group)?;
    let a = GroupSubset::parse(&g, &p.a)?;
    let b = p.b.as_deref().map(|b| GroupSubset::parse(&g, b)).transpose()?;
    Ok((g, a, b))
}

fn need_b(b: Option<GroupSubset>) -> Result<GroupSubset> {
    b.ok_or_else(|| Error::Usage("--B is required for this command".into()))
}

fn doc(code: i32, v: Value) -> Result<(i32, String)> {
    Ok((code, format!("{v}\n")))
}

fn report_code(r: &VerificationReport) -> i32 {
    if r.hypotheses_hold && !r.conclusion_holds {
        1
    } else {
        0
    }
}

fn dispatch(cmd: Command) -> Result<(i32, String)> {
    match cmd {
        Command::Analyze { pair, decompose } => analyze(&pair, &decompose),
        Command::Classify { pair } => {
            let (g, a, b) = load_pair(&pair)?;
            match b {
                Some(b) => {
                    let ws = classify_elementary(&a, &b)?;
                    doc(
                        0,
                        json!({
                            "elementary": !ws.is_empty(),
                            "canonical_type": canonical_type(&ws),
                            "witnesses": ws.iter().map(|w| w.to_json(&g)).collect::<Vec<_>>(),
                        }),
                    )
                }
                None => {
                    let cls = struct_classify(&a)?;
                    let selfpair = selfpair_witness(&a)?.map(|w| w.to_json());
                    doc(0, json!({"structure": cls.to_json(), "valid": cls.check(&a), "selfpair": selfpair}))
                }
            }
        }
        Command::Decompose { pair, mode, tree } => {
            let (g, a, b) = load_pair(&pair)?;
            let b = need_b(b)?;
            let cert = certificate(&a, &b, &mode)?;
            let mut out = json!({"certificate": cert.to_json(&g)});
            if tree {
                let mode: TreeMode = mode.parse()?;
                let t = decomposition_tree(&a, &b, mode)?;
                out["tree"] = t.to_json();
                out["depth"] = json!(t.depth());
                out["leaves"] = json!(t.leaf_count());
            }
            doc(0, out)
        }
        Command::Verify { pair, theorem } => {
            let (_, a, b) = load_pair(&pair)?;
            let report = match theorem.as_str() {
                "thick" => {
                    let holds = is_thick_component(&a)?;
                    VerificationReport {
                        theorem_id: theorem.clone(),
                        hypotheses_hold: true,
                        conclusion_holds: holds,
                        witness: json!({"thick": holds}),
                    }
                }
                "thick_reduction" => {
                    let r = thick_reduction(&a)?;
                    VerificationReport {
                        theorem_id: theorem.clone(),
                        hypotheses_hold: true,
                        conclusion_holds: crate::theorems::check_thick_reduction(&a, &r)?,
                        witness: r.to_json(),
                    }
                }
                "hampla" => {
                    let w = hampla_structure(&a, &need_b(b)?)?;
                    VerificationReport {
                        theorem_id: theorem.clone(),
                        hypotheses_hold: true,
                        conclusion_holds: w.check(&a),
                        witness: w.to_json(),
                    }
                }
                "prior_bounds" => verify_prior_bounds(&a)?,
                other => verify_theorem(other.parse::<TheoremId>()?, &a, &need_b(b)?)?,
            };
            doc(report_code(&report), serde_json::to_value(&report).expect("serializable"))
        }
        Command::CheckCert { pair, cert } => {
            let (g, a, b) = load_pair(&pair)?;
            let b = need_b(b)?;
            let text = if cert.trim_start().starts_with('{') {
                cert
            } else {
                fs::read_to_string(&cert).map_err(|e| Error::Usage(format!("cannot read {cert}: {e}")))?
            };
            let value: Value = serde_json::from_str(&text).map_err(|e| Error::Parse {
                token: text.trim().chars().take(80).collect(),
                reason: e.to_string(),
            })?;
            // Accept either a bare certificate or the output of `decompose`.
            let value = value.get("certificate").cloned().unwrap_or(value);
            let cert = Certificate::from_json(&g, &value)?;
            let check = check_certificate(&a, &b, &cert);
            let out = json!({
                "kind": cert.kind(),
                "valid": check.valid,
                "failing": check.failing(),
                "clauses": check.clauses,
            });
            doc(if check.valid { 0 } else { 1 }, out)
        }
        Command::Scan {
            catalog,
            suite,
            seed,
            max_order,
            jobs,
            samples,
            min_size,
            max_size,
            out,
        } => {
            if let Some(m) = max_order {
                if m > DEFAULT_SUBGROUP_CAP {
                    return Err(Error::Usage(format!("--max-order {m} exceeds the hard cap {DEFAULT_SUBGROUP_CAP}")));
                }
            }
            let cfg = ScanConfig {
                catalog: match catalog {
                    Some(c) => parse_catalog(&c)?,
                    None => default_catalog(),
                },
                suites: parse_suites(&suite)?,
                max_order,
                seed,
                jobs: jobs.max(1),
                samples,
                synth_limit: DEFAULT_SYNTH_LIMIT,
                sizes: SizeFilter {
                    min: min_size,
                    max: max_size,
                },
            };
            let outcome = run_scan(&cfg)?;
            let code = if outcome.summary.violations == 0 { 0 } else { 1 };
            match out {
                Some(path) => {
                    fs::write(&path, outcome.to_jsonl())
                        .map_err(|e| Error::Resource(format!("cannot write {path}: {e}")))?;
                    Ok((code, format!("{}\n", outcome.summary_line())))
                }
                None => Ok((code, outcome.to_jsonl())),
            }
        }
        Command::Synth {
            group,
            f,
            h,
            s,
            shift,
            removed,
        } => {
            let g = parse_group(&group)?;
            let subgroup = |text: &str| -> Result<Subgroup> {
                Subgroup::from_subset(&GroupSubset::parse(&g, text)?)
                    .map_err(|e| Error::Contract(format!("not a subgroup: {e}")))
            };
            let f = subgroup(&f)?;
            let h = subgroup(&h)?;
            let s = GroupSubset::parse(&g, &s)?;
            let t = match shift {
                Some(text) => {
                    let coords: Vec<u32> = serde_json::from_str(&text).map_err(|e| Error::Parse {
                        token: text.clone(),
                        reason: e.to_string(),
                    })?;
                    g.element(&coords)?
                }
                None => g.identity(),
            };
            let removed = GroupSubset::parse(&g, &removed)?;
            let out = struct_synthesize(&f, &h, &s, t, &removed)?;
            let actual = sumset(&out.a, &out.a)?.len();
            doc(
                0,
                json!({
                    "A": out.a.to_json(),
                    "size": out.a.len(),
                    "predicted_doubling": out.predicted_doubling,
                    "doubling": actual,
                }),
            )
        }
    }
}

fn certificate(a: &GroupSubset, b: &GroupSubset, mode: &str) -> Result<Certificate> {
    match mode {
        "kemperman" => Ok(Certificate::Kemperman(kemperman_decompose(a, b)?)),
        "dual" => Ok(Certificate::Dual(dual_decompose(a, b)?)),
        "me" => Ok(Certificate::Me(me_decompose(a, b)?)),
        other => Err(Error::Usage(format!("unknown certificate kind `{other}`; expected kemperman, dual or me"))),
    }
}

fn analyze(pair: &PairArgs, modes: &str) -> Result<(i32, String)> {
    let start = Instant::now();
    let (g, a, b) = load_pair(pair)?;
    let b = need_b(b)?;
    let modes: Vec<&str> = modes.split(',').map(str::trim).filter(|m| !m.is_empty()).collect();
    for m in &modes {
        if !["kemperman", "dual", "me"].contains(m) {
            return Err(Error::Usage(format!("unknown certificate kind `{m}`")));
        }
    }
    let ab = sumset(&a, &b)?;
    let witnesses = classify_elementary(&a, &b)?;
    let mut certificates = serde_json::Map::new();
    for m in modes {
        let entry = match certificate(&a, &b, m) {
            Ok(cert) => {
                let check = check_certificate(&a, &b, &cert);
                json!({"certificate": cert.to_json(&g), "valid": check.valid})
            }
            Err(e) => error_json(&e),
        };
        certificates.insert(m.to_string(), entry);
    }
    let verification: Vec<Value> = TheoremId::ALL
        .iter()
        .map(|&id| serde_json::to_value(verify_theorem(id, &a, &b).expect("checked above")).expect("serializable"))
        .collect();
    let out = json!({
        "group": g.to_json(),
        "A": a.to_json(),
        "B": b.to_json(),
        "sumset": ab.to_json(),
        "sizes": {"A": a.len(), "B": b.len(), "sumset": ab.len()},
        "period": period(&ab)?.as_set().to_json(),
        "mu": min_rep(&a, &b)?,
        "small_sumset": small_sumset(&a, &b),
        "kemperman_condition": kemperman_condition(&a, &b),
        "elementary": {
            "canonical_type": canonical_type(&witnesses),
            "witnesses": witnesses.iter().map(|w| w.to_json(&g)).collect::<Vec<_>>(),
        },
        "certificates": certificates,
        "verification": verification,
        "duration_ms": start.elapsed().as_secs_f64() * 1000.0,
    });
    doc(0, out)
}
