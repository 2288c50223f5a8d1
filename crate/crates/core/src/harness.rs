//! Claims manifests, catalog sweeps and their reports.
//!
//! A manifest is line oriented: `kind | name | input | expected`, with `#`
//! starting a comment. Reports are canonical: records are sorted by name
//! and timings are left out unless asked for, so equal inputs give
//! byte-identical output.

use std::fmt::{self, Write as _};
use std::str::FromStr;
use std::time::Instant;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::Serialize;

use crate::blocks::{block_action_kernel, minimal_block_systems};
use crate::classes::class_count_with_limit;
use crate::constructions::parse_group_spec;
use crate::error::{Error, Result};
use crate::partitions::partition_number;
use crate::report::{big_as_string, kv_value};
use crate::verify::{
    chain_verdict, count_catalog, filtration_check, greedy_chain, l3_over, lemma_ineq_check,
    main_bound_check, quarter_power_check, BoundVerdict, L3_PRODUCT_SAMPLES,
};

/// The manifest shipped with the library.
pub const BUILTIN_MANIFEST: &str = include_str!("../manifests/claims.txt");

/// Largest degree for which the sweep runs chain and filtration checks.
pub const FILTRATION_MAX_DEGREE: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ClaimKind {
    ClassCount,
    PartitionValue,
    WreathValue,
    BoundHolds,
}

impl FromStr for ClaimKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "ClassCount" => Ok(Self::ClassCount),
            "PartitionValue" => Ok(Self::PartitionValue),
            "WreathValue" => Ok(Self::WreathValue),
            "BoundHolds" => Ok(Self::BoundHolds),
            other => Err(format!("unknown claim kind {other:?}")),
        }
    }
}

impl fmt::Display for ClaimKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundExpectation {
    Holds,
    /// Holds with equality.
    Tight,
    Fails,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expected {
    Value(BigUint),
    Bound(BoundExpectation),
}

impl fmt::Display for Expected {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expected::Value(v) => write!(f, "{v}"),
            Expected::Bound(BoundExpectation::Holds) => f.write_str("holds"),
            Expected::Bound(BoundExpectation::Tight) => f.write_str("tight"),
            Expected::Bound(BoundExpectation::Fails) => f.write_str("fails"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Claim {
    pub kind: ClaimKind,
    pub name: String,
    pub input: String,
    pub expected: Expected,
    /// Text of the trailing `#` comment, if any.
    pub comment: Option<String>,
    pub line: usize,
}

/// Parses manifest text. Blank lines and lines starting with `#` are ignored.
pub fn parse_manifest(text: &str) -> Result<Vec<Claim>> {
    let mut claims = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let (body, comment) = match raw.split_once('#') {
            Some((body, c)) => (body, Some(c.trim().to_string())),
            None => (raw, None),
        };
        if body.trim().is_empty() {
            continue;
        }
        let err = |message: String| Error::Manifest { line, message };
        let fields: Vec<&str> = body.split('|').map(str::trim).collect();
        let [kind, name, input, expected] = fields[..] else {
            return Err(err(format!(
                "expected 4 fields separated by '|', found {}",
                fields.len()
            )));
        };
        let kind: ClaimKind = kind.parse().map_err(err)?;
        if name.is_empty() {
            return Err(err("empty claim name".into()));
        }
        let expected = if kind == ClaimKind::BoundHolds {
            Expected::Bound(match expected {
                "holds" => BoundExpectation::Holds,
                "tight" => BoundExpectation::Tight,
                "fails" => BoundExpectation::Fails,
                other => {
                    return Err(err(format!(
                        "expected holds, tight or fails, found {other:?}"
                    )))
                }
            })
        } else {
            Expected::Value(expected.parse().map_err(|_| {
                err(format!(
                    "expected a nonnegative integer, found {expected:?}"
                ))
            })?)
        };
        claims.push(Claim {
            kind,
            name: name.to_string(),
            input: input.to_string(),
            expected,
            comment,
            line,
        });
    }
    Ok(claims)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ClaimRecord {
    pub name: String,
    pub kind: ClaimKind,
    pub input: String,
    pub expected: String,
    pub computed: Option<String>,
    pub method: Option<String>,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerdictRecord {
    /// The group or parameters the verdict is about.
    pub subject: String,
    pub claim_id: String,
    pub context: String,
    #[serde(serialize_with = "big_as_string")]
    pub lhs: BigUint,
    pub relation: String,
    #[serde(serialize_with = "big_as_string")]
    pub rhs: BigUint,
    pub holds: bool,
    pub tight: bool,
}

impl VerdictRecord {
    pub fn new(subject: impl Into<String>, v: BoundVerdict) -> Self {
        Self {
            subject: subject.into(),
            tight: v.is_tight(),
            claim_id: v.claim_id,
            context: v.context,
            relation: v.relation.to_string(),
            holds: v.holds,
            lhs: v.lhs,
            rhs: v.rhs,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SkipRecord {
    pub subject: String,
    pub reason: String,
}

/// Per-`claim_id` totals over the verdicts of a run.
#[derive(Clone, Debug, Serialize)]
pub struct TableRow {
    pub claim_id: String,
    pub total: usize,
    pub holds: usize,
    pub tight: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub tool: String,
    pub version: String,
    pub seed: u64,
    pub limit: u64,
    pub claims: Vec<ClaimRecord>,
    pub verdicts: Vec<VerdictRecord>,
    pub skipped: Vec<SkipRecord>,
    pub table: Vec<TableRow>,
    pub status: Status,
}

impl RunReport {
    fn assemble(
        seed: u64,
        limit: u64,
        mut claims: Vec<ClaimRecord>,
        mut verdicts: Vec<VerdictRecord>,
        mut skipped: Vec<SkipRecord>,
    ) -> Self {
        claims.sort_by(|a, b| a.name.cmp(&b.name));
        verdicts.sort_by(|a, b| {
            (&a.subject, &a.claim_id, &a.context).cmp(&(&b.subject, &b.claim_id, &b.context))
        });
        skipped.sort_by(|a, b| a.subject.cmp(&b.subject));
        let mut table: Vec<TableRow> = Vec::new();
        let mut ids: Vec<&str> = verdicts.iter().map(|v| v.claim_id.as_str()).collect();
        ids.sort_unstable();
        ids.dedup();
        for id in ids {
            let rows = verdicts.iter().filter(|v| v.claim_id == id);
            table.push(TableRow {
                claim_id: id.to_string(),
                total: rows.clone().count(),
                holds: rows.clone().filter(|v| v.holds).count(),
                tight: rows.filter(|v| v.tight).count(),
            });
        }
        let failed =
            claims.iter().any(|c| c.status == Status::Fail) || verdicts.iter().any(|v| !v.holds);
        Self {
            tool: "permclass".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            seed,
            limit,
            claims,
            verdicts,
            skipped,
            table,
            status: if failed { Status::Fail } else { Status::Pass },
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// Claims or entries that were skipped for exceeding the limit.
    pub fn skipped_count(&self) -> usize {
        self.claims
            .iter()
            .filter(|c| c.status == Status::Skipped)
            .count()
            + self.skipped.len()
    }

    pub fn failures(&self) -> usize {
        self.claims
            .iter()
            .filter(|c| c.status == Status::Fail)
            .count()
            + self.verdicts.iter().filter(|v| !v.holds).count()
    }

    /// Line-delimited `key=value` form.
    pub fn to_lines(&self) -> String {
        let mut out = String::new();
        let opt = |v: &Option<String>| v.as_deref().map(kv_value).unwrap_or_else(|| "-".into());
        let _ = writeln!(
            out,
            "report tool={} version={} seed={} limit={}",
            self.tool, self.version, self.seed, self.limit
        );
        for c in &self.claims {
            let _ = write!(
                out,
                "claim name={} kind={} input={} expected={} computed={} method={} status={}",
                kv_value(&c.name),
                c.kind,
                kv_value(&c.input),
                kv_value(&c.expected),
                opt(&c.computed),
                opt(&c.method),
                c.status
            );
            if let Some(reason) = &c.reason {
                let _ = write!(out, " reason={}", kv_value(reason));
            }
            if let Some(ms) = c.wall_ms {
                let _ = write!(out, " wall_ms={ms}");
            }
            out.push('\n');
        }
        for v in &self.verdicts {
            let _ = writeln!(
                out,
                "verdict subject={} claim_id={} lhs={} relation={} rhs={} holds={} tight={} context={}",
                kv_value(&v.subject),
                v.claim_id,
                v.lhs,
                v.relation,
                v.rhs,
                v.holds,
                v.tight,
                kv_value(&v.context)
            );
        }
        for s in &self.skipped {
            let _ = writeln!(
                out,
                "skipped subject={} reason={}",
                kv_value(&s.subject),
                kv_value(&s.reason)
            );
        }
        for row in &self.table {
            let _ = writeln!(
                out,
                "table claim_id={} total={} holds={} tight={}",
                row.claim_id, row.total, row.holds, row.tight
            );
        }
        let _ = writeln!(
            out,
            "summary claims={} verdicts={} failures={} skipped={} status={}",
            self.claims.len(),
            self.verdicts.len(),
            self.failures(),
            self.skipped_count(),
            self.status
        );
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[derive(Clone, Copy, Debug)]
pub struct RunOptions {
    pub seed: u64,
    pub limit: u64,
    /// Include per-claim wall-clock times (breaks byte-identical output).
    pub timings: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            seed: 0,
            limit: crate::classes::DEFAULT_ENUMERATION_LIMIT,
            timings: false,
        }
    }
}

struct Evaluated {
    computed: String,
    method: String,
    pass: bool,
}

fn parse_options(tokens: &[&str]) -> Result<Vec<(String, String)>> {
    tokens
        .iter()
        .map(|t| {
            t.split_once('=')
                .map(|(k, v)| (k.to_string(), v.to_string()))
                .ok_or_else(|| Error::ParamOutOfRange(format!("expected key=value, found {t:?}")))
        })
        .collect()
}

fn option<'a>(opts: &'a [(String, String)], key: &str) -> Option<&'a str> {
    opts.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
}

fn required<'a>(opts: &'a [(String, String)], key: &str) -> Result<&'a str> {
    option(opts, key).ok_or_else(|| Error::ParamOutOfRange(format!("missing {key}=")))
}

fn parse_number<T: FromStr>(key: &str, text: &str) -> Result<T> {
    text.parse()
        .map_err(|_| Error::ParamOutOfRange(format!("{key}={text:?} is not a nonnegative integer")))
}

/// `k` and `n` either given directly or read off `group=<spec>`.
fn k_and_n(opts: &[(String, String)], limit: u64) -> Result<(BigUint, usize)> {
    if let Some(spec) = option(opts, "group") {
        let g = parse_group_spec(spec)?;
        let k = class_count_with_limit(&g, limit)?.count;
        let n = match option(opts, "n") {
            Some(n) => parse_number("n", n)?,
            None => g.degree(),
        };
        Ok((k, n))
    } else {
        Ok((
            parse_number("k", required(opts, "k")?)?,
            parse_number("n", required(opts, "n")?)?,
        ))
    }
}

/// Evaluates a `BoundHolds` input such as `main k=5 n=4` or
/// `index-lower group=<spec> sub=<spec>`.
pub fn evaluate_bound(input: &str, limit: u64) -> Result<BoundVerdict> {
    let tokens: Vec<&str> = input.split_whitespace().collect();
    let Some((&check, rest)) = tokens.split_first() else {
        return Err(Error::ParamOutOfRange("empty bound input".into()));
    };
    let opts = parse_options(rest)?;
    match check {
        "main" => {
            let (k, n) = k_and_n(&opts, limit)?;
            main_bound_check(&k, n)
        }
        "l3" => {
            let (k, n) = k_and_n(&opts, limit)?;
            Ok(quarter_power_check(&k, n, format!("n={n} k={k}")))
        }
        "chain" => {
            let g = parse_group_spec(required(&opts, "group")?)?;
            let indices = greedy_chain(&g)?;
            let k = class_count_with_limit(&g, limit)?.count;
            Ok(chain_verdict(&indices, &k))
        }
        "index-lower" | "index-upper" | "square-root" | "quotient" => {
            let g = parse_group_spec(required(&opts, "group")?)?;
            let h = parse_group_spec(required(&opts, "sub")?)?;
            let checks = lemma_ineq_check(&g, &h, check == "quotient", limit)?;
            match check {
                "index-lower" => Ok(checks.index_lower),
                "index-upper" => Ok(checks.index_upper),
                "square-root" => Ok(checks.square_root),
                _ => checks.quotient.ok_or_else(|| {
                    Error::ParamOutOfRange(checks.quotient_skipped.unwrap_or_default())
                }),
            }
        }
        other => Err(Error::ParamOutOfRange(format!(
            "unknown bound check {other:?}"
        ))),
    }
}

fn evaluate(claim: &Claim, limit: u64) -> Result<Evaluated> {
    let value = |computed: BigUint, method: String| {
        let pass = claim.expected == Expected::Value(computed.clone());
        Evaluated {
            computed: computed.to_string(),
            method,
            pass,
        }
    };
    match claim.kind {
        ClaimKind::ClassCount | ClaimKind::WreathValue => {
            let g = parse_group_spec(&claim.input)?;
            let r = class_count_with_limit(&g, limit)?;
            Ok(value(r.count, format!("{:?}", r.method)))
        }
        ClaimKind::PartitionValue => {
            let n: usize = parse_number("n", claim.input.trim())?;
            Ok(value(partition_number(n), "PentagonalRecurrence".into()))
        }
        ClaimKind::BoundHolds => {
            let v = evaluate_bound(&claim.input, limit)?;
            let pass = match claim.expected {
                Expected::Bound(BoundExpectation::Holds) => v.holds,
                Expected::Bound(BoundExpectation::Tight) => v.is_tight(),
                Expected::Bound(BoundExpectation::Fails) => !v.holds,
                Expected::Value(_) => false,
            };
            let outcome = if v.is_tight() {
                "tight"
            } else if v.holds {
                "holds"
            } else {
                "fails"
            };
            Ok(Evaluated {
                computed: format!("{outcome}: {} {} {}", v.lhs, v.relation, v.rhs),
                method: v.claim_id,
                pass,
            })
        }
    }
}

fn run_claim(claim: &Claim, options: RunOptions) -> ClaimRecord {
    let start = Instant::now();
    let outcome = evaluate(claim, options.limit);
    let wall_ms = options.timings.then(|| start.elapsed().as_millis() as u64);
    let mut record = ClaimRecord {
        name: claim.name.clone(),
        kind: claim.kind,
        input: claim.input.clone(),
        expected: claim.expected.to_string(),
        computed: None,
        method: None,
        status: Status::Fail,
        reason: None,
        wall_ms,
    };
    match outcome {
        Ok(e) => {
            record.computed = Some(e.computed);
            record.method = Some(e.method);
            record.status = if e.pass { Status::Pass } else { Status::Fail };
        }
        Err(e) if e.is_resource_limit() => {
            record.status = Status::Skipped;
            record.reason = Some(e.to_string());
        }
        Err(e) => record.reason = Some(e.to_string()),
    }
    record
}

/// Evaluates every claim (concurrently) and returns the canonical report.
pub fn run_claims(claims: &[Claim], options: RunOptions) -> RunReport {
    let records: Vec<ClaimRecord> = claims.par_iter().map(|c| run_claim(c, options)).collect();
    RunReport::assemble(options.seed, options.limit, records, Vec::new(), Vec::new())
}

/// Runs the built-in manifest.
pub fn run_builtin_claims(options: RunOptions) -> RunReport {
    let claims = parse_manifest(BUILTIN_MANIFEST).expect("built-in manifest parses");
    run_claims(&claims, options)
}

/// Checks the catalog of degree `4..=max_degree`: the main bound and the
/// orbit-length bound on every countable transitive entry, seeded direct
/// products, and for imprimitive entries up to degree 16 the chain bound,
/// the filtration checks and the quotient inequality for each minimal block
/// system.
pub fn catalog_sweep(max_degree: usize, seed: u64, limit: u64) -> Result<RunReport> {
    if !(4..=24).contains(&max_degree) {
        return Err(Error::ParamOutOfRange(format!(
            "sweep needs 4 ≤ max_degree ≤ 24, got {max_degree}"
        )));
    }
    let counted = count_catalog(1, max_degree, limit)?;
    let mut verdicts = Vec::new();
    let mut skipped = Vec::new();

    for entry in counted.iter().filter(|e| e.transitive && e.degree >= 4) {
        if let Ok(k) = &entry.count {
            verdicts.push(VerdictRecord::new(
                &entry.name,
                main_bound_check(k, entry.degree)?,
            ));
        }
    }
    let l3 = l3_over(&counted, max_degree, seed, L3_PRODUCT_SAMPLES, limit)?;
    verdicts.extend(
        l3.verdicts
            .into_iter()
            .map(|(s, v)| VerdictRecord::new(s, v)),
    );
    skipped.extend(
        l3.skipped
            .into_iter()
            .map(|(subject, reason)| SkipRecord { subject, reason }),
    );

    let structural: Vec<Result<(Vec<VerdictRecord>, Vec<SkipRecord>)>> = counted
        .par_iter()
        .filter(|e| e.transitive && e.degree >= 4 && e.degree <= FILTRATION_MAX_DEGREE)
        .filter_map(|e| e.count.as_ref().ok().map(|k| (e, k)))
        .map(|(entry, k)| imprimitive_checks(&entry.name, &entry.group, k, limit))
        .collect();
    for item in structural {
        let (v, s) = item?;
        verdicts.extend(v);
        skipped.extend(s);
    }
    Ok(RunReport::assemble(
        seed,
        limit,
        Vec::new(),
        verdicts,
        skipped,
    ))
}

fn imprimitive_checks(
    name: &str,
    group: &crate::group::PermGroup,
    k: &BigUint,
    limit: u64,
) -> Result<(Vec<VerdictRecord>, Vec<SkipRecord>)> {
    let systems = minimal_block_systems(group)?;
    let mut verdicts = Vec::new();
    let mut skipped = Vec::new();
    if systems.is_empty() {
        return Ok((verdicts, skipped));
    }
    verdicts.push(VerdictRecord::new(
        name,
        chain_verdict(&greedy_chain(group)?, k),
    ));
    for system in &systems {
        let label = format!(
            "{name} blocks={}x{}",
            system.block_count(),
            system.block_size()
        );
        let mut record = |r: Result<Vec<BoundVerdict>>| -> Result<()> {
            match r {
                Ok(vs) => verdicts.extend(vs.into_iter().map(|v| VerdictRecord::new(&label, v))),
                Err(e) if e.is_resource_limit() => skipped.push(SkipRecord {
                    subject: label.clone(),
                    reason: e.to_string(),
                }),
                Err(e) => return Err(e),
            }
            Ok(())
        };
        record(filtration_check(group, system, limit))?;
        let kernel = block_action_kernel(group, system)?;
        record(
            lemma_ineq_check(group, &kernel, true, limit).map(|c| c.quotient.into_iter().collect()),
        )?;
    }
    Ok((verdicts, skipped))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn manifest_parsing() {
        let claims = parse_manifest("# c\n\nClassCount | k(S4) | S(4) | 5 # note\n").unwrap();
        assert_eq!(claims.len(), 1);
        assert_eq!(claims[0].comment.as_deref(), Some("note"));
        assert_eq!(claims[0].line, 3);
        assert!(parse_manifest("").unwrap().is_empty());
        for bad in [
            "ClassCount | x | S(4)",
            "Foo | x | S(4) | 5",
            "ClassCount | x | S(4) | five",
            "BoundHolds | x | main k=1 n=4 | yes",
        ] {
            assert!(
                matches!(parse_manifest(bad), Err(Error::Manifest { line: 1, .. })),
                "{bad}"
            );
        }
    }

    #[test]
    fn builtin_manifest_has_sources() {
        let claims = parse_manifest(BUILTIN_MANIFEST).unwrap();
        assert_eq!(claims.len(), 14);
        for c in &claims {
            let comment = c.comment.as_deref().unwrap_or("");
            assert!(
                comment.starts_with("provenance:"),
                "line {} lacks provenance",
                c.line
            );
        }
    }

    #[test]
    fn wrong_value_fails() {
        let claims = parse_manifest("ClassCount | k(A12) | A(12) | 44").unwrap();
        let r = run_claims(&claims, RunOptions::default());
        assert_eq!(r.status, Status::Fail);
        assert_eq!(r.claims[0].computed.as_deref(), Some("43"));
    }

    #[test]
    fn limits_skip() {
        let claims = parse_manifest("ClassCount | big | prod(S(12),C(2)) | 1").unwrap();
        let r = run_claims(&claims, RunOptions::default());
        assert_eq!(r.claims[0].status, Status::Skipped);
        assert!(r.passed());
        assert_eq!(r.skipped_count(), 1);
    }

    #[test]
    fn bound_inputs() {
        let v = evaluate_bound("main k=5 n=4", 1000).unwrap();
        assert!(v.is_tight());
        let v = evaluate_bound("l3 group=prod(S(4),S(4))", 10_000).unwrap();
        assert!(v.is_tight());
        let v = evaluate_bound("chain group=wr(S(2),S(4))", 10_000).unwrap();
        assert_eq!(v.rhs, BigUint::from(80u32));
        let v = evaluate_bound(
            "quotient group=wr(S(2),S(3)) sub=gens{degree=6;(1,2);(3,4);(5,6)}",
            10_000,
        )
        .unwrap();
        assert!(v.holds);
        assert!(evaluate_bound("nope k=1", 10).is_err());
        assert!(evaluate_bound("main k=1", 10).is_err());
    }

    #[test]
    fn sweep_rejects_degree() {
        assert!(catalog_sweep(3, 0, 10).is_err());
        assert!(catalog_sweep(25, 0, 10).is_err());
    }
}
