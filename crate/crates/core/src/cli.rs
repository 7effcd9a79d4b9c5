//! Command implementations behind the `cactus` binary.
//!
//! Every command returns a [`RunManifest`]: parameters, configuration,
//! results and one verdict per checked claim. JSON is the canonical
//! rendering; [`RunManifest::render_text`] is a derived view.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::cosets::{group_order, todd_coxeter, CosetTable, EnumConfig, EnumError};
use crate::groups::{wreath_group, FiniteGroupTable, GroupError, Perm};
use crate::homs::{
    dihedral_factorization, hom_check, hom_count, phi_d4, phi_inf, pi, psi_d8, qn_consequence_check, surjectivity_check,
    theta, theta_lambda, CheckReport, HomError, Source, HOM_COUNT_BUDGET,
};
use crate::permstruct::{isomorphic, lower_central_series, regular_bsgs, PermError};
use crate::presentations::{
    abelianization, class_truncate, counts_closed_form, minimal_cactus, standard_cactus, thmd_quotient, Presentation,
    PresentationError, PresentationJson,
};
use crate::words::Word;

/// Published ranks of `Γ_i(J_n)/Γ_{i+1}(J_n)` for `i = 1..=10`, kept as
/// claimed data to compare against, never as an oracle.
pub const RANK_TABLE: [(u32, [u32; 10]); 3] = [
    (4, [3, 2, 3, 3, 4, 4, 6, 7, 10, 13]),
    (5, [4, 2, 3, 4, 6, 8, 12, 17, 25, 36]),
    (6, [5, 3, 4, 6, 10, 15, 26, 40, 70, 114]),
];

pub const RANK_TABLE_SOURCE: &str = "published rank table";
const LAYER2_SOURCE: &str = "layer-2 rank formula floor(n/2)";
const LAYER3_SOURCE: &str = "layer-3 rank formula 2*floor(n/2)-1";
const ORDER_SOURCE: &str = "quotient order formula 2^(floor(n/2)+n-1)";

pub fn table_rank(n: u32, i: u32) -> Option<u32> {
    let row = RANK_TABLE.iter().find(|(m, _)| *m == n)?;
    row.1.get(i.checked_sub(1)? as usize).copied()
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error(transparent)]
    Enumeration(#[from] EnumError),
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error(transparent)]
    Hom(#[from] HomError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    /// Process exit code: 2 for resource exhaustion, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Enumeration(EnumError::Capped { .. }) | CliError::Perm(PermError::Enumeration(EnumError::Capped { .. })) => 2,
            CliError::Hom(HomError::Budget(_)) => 2,
            _ => 1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum VerdictStatus {
    Pass,
    Fail,
    /// The computed value settles a conflict between two published statements.
    Adjudication,
    /// Not computed, for instance because the coset cap was reached.
    Skipped,
}

impl fmt::Display for VerdictStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VerdictStatus::Pass => "PASS",
            VerdictStatus::Fail => "FAIL",
            VerdictStatus::Adjudication => "ADJUDICATION",
            VerdictStatus::Skipped => "SKIPPED",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verdict {
    pub claim: String,
    pub source: String,
    pub computed: Value,
    pub expected: Value,
    pub status: VerdictStatus,
    /// Required verdicts decide the exit code.
    pub required: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Verdict {
    /// Passes iff `computed` and `expected` serialise identically.
    pub fn check(claim: impl Into<String>, source: &str, computed: impl Serialize, expected: impl Serialize) -> Verdict {
        let computed = serde_json::to_value(computed).expect("serialisable");
        let expected = serde_json::to_value(expected).expect("serialisable");
        let status = if computed == expected { VerdictStatus::Pass } else { VerdictStatus::Fail };
        Verdict { claim: claim.into(), source: source.into(), computed, expected, status, required: true, note: None }
    }

    pub fn skipped(claim: impl Into<String>, source: &str, expected: impl Serialize, reason: impl Into<String>) -> Verdict {
        Verdict {
            claim: claim.into(),
            source: source.into(),
            computed: Value::Null,
            expected: serde_json::to_value(expected).expect("serialisable"),
            status: VerdictStatus::Skipped,
            required: true,
            note: Some(reason.into()),
        }
    }

    pub fn optional(mut self) -> Verdict {
        self.required = false;
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Verdict {
        self.note = Some(note.into());
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConfigSummary {
    pub max_cosets: usize,
    pub strategy: String,
    pub compaction_threshold: f64,
    pub threads: usize,
}

impl From<&EnumConfig> for ConfigSummary {
    fn from(cfg: &EnumConfig) -> ConfigSummary {
        ConfigSummary {
            max_cosets: cfg.max_cosets,
            strategy: cfg.strategy.to_string(),
            compaction_threshold: cfg.compaction_threshold,
            threads: rayon::current_num_threads(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub build: String,
    pub parameters: Value,
    pub config: ConfigSummary,
    pub results: Value,
    pub wall_time_s: f64,
    pub verdicts: Vec<Verdict>,
    #[serde(skip)]
    pub summary: Vec<String>,
}

impl RunManifest {
    fn new(command: &str, parameters: Value, cfg: &EnumConfig) -> RunManifest {
        RunManifest {
            command: command.to_string(),
            build: concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION")).to_string(),
            parameters,
            config: cfg.into(),
            results: Value::Null,
            wall_time_s: 0.0,
            verdicts: Vec::new(),
            summary: Vec::new(),
        }
    }

    fn finish(mut self, start: Instant) -> RunManifest {
        self.wall_time_s = start.elapsed().as_secs_f64();
        self
    }

    /// 1 on a failed required claim, else 2 on a skipped required claim, else 0.
    pub fn exit_code(&self) -> i32 {
        let required = || self.verdicts.iter().filter(|v| v.required);
        if required().any(|v| v.status == VerdictStatus::Fail) {
            1
        } else if required().any(|v| v.status == VerdictStatus::Skipped) {
            2
        } else {
            0
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serialises")
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for line in &self.summary {
            out.push_str(line);
            out.push('\n');
        }
        for v in &self.verdicts {
            let tag = if v.required { "" } else { " (optional)" };
            out.push_str(&format!(
                "{:<12} {}{}: computed {} expected {} [{}]",
                v.status.to_string(),
                v.claim,
                tag,
                v.computed,
                v.expected,
                v.source
            ));
            if let Some(note) = &v.note {
                out.push_str(&format!(" ({note})"));
            }
            out.push('\n');
        }
        if !self.verdicts.is_empty() {
            let count = |s| self.verdicts.iter().filter(|v| v.status == s).count();
            out.push_str(&format!(
                "{} pass, {} fail, {} adjudication, {} skipped in {:.2}s\n",
                count(VerdictStatus::Pass),
                count(VerdictStatus::Fail),
                count(VerdictStatus::Adjudication),
                count(VerdictStatus::Skipped),
                self.wall_time_s
            ));
        }
        out
    }
}

/// Presentation families selectable on the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PresKind {
    Standard,
    Minimal,
    Thmd,
    Trunc,
}

impl FromStr for PresKind {
    type Err = CliError;

    fn from_str(s: &str) -> Result<PresKind, CliError> {
        match s {
            "standard" => Ok(PresKind::Standard),
            "minimal" => Ok(PresKind::Minimal),
            "thmd" => Ok(PresKind::Thmd),
            "trunc" => Ok(PresKind::Trunc),
            _ => Err(CliError::Usage(format!("unknown presentation {s:?}; use standard, minimal, thmd or trunc"))),
        }
    }
}

/// `trunc` truncates the minimal presentation at `class` (required).
pub fn build_presentation(kind: PresKind, n: u32, class: Option<u32>) -> Result<Presentation, CliError> {
    Ok(match kind {
        PresKind::Standard => standard_cactus(n)?,
        PresKind::Minimal => minimal_cactus(n)?,
        PresKind::Thmd => thmd_quotient(n)?,
        PresKind::Trunc => {
            let c = class.ok_or_else(|| CliError::Usage("--class is required with --pres trunc".into()))?;
            class_truncate(&minimal_cactus(n)?, c)?
        }
    })
}

/// `kind:n` or `trunc:n:class`.
pub fn parse_pres_spec(s: &str) -> Result<Presentation, CliError> {
    let parts: Vec<&str> = s.split(':').collect();
    let num = |t: &str| t.parse::<u32>().map_err(|_| CliError::Usage(format!("bad number in {s:?}")));
    match parts.as_slice() {
        [kind, n] => build_presentation(kind.parse()?, num(n)?, None),
        [kind, n, c] => build_presentation(kind.parse()?, num(n)?, Some(num(c)?)),
        _ => Err(CliError::Usage(format!("expected kind:n or trunc:n:class, got {s:?}"))),
    }
}

/// Named finite groups, or any presentation spec via its regular representation.
pub fn parse_group_spec(s: &str, cfg: &EnumConfig) -> Result<FiniteGroupTable, CliError> {
    let num = |t: &str| t.parse::<u64>().map_err(|_| CliError::Usage(format!("bad number in {s:?}")));
    let (head, tail) = s.split_once(':').unwrap_or((s, ""));
    Ok(match head {
        "wreath" => wreath_group(),
        "z2xwreath" => FiniteGroupTable::cyclic(2).direct_product(&wreath_group()),
        "quaternion" => FiniteGroupTable::quaternion(),
        "dihedral" => FiniteGroupTable::dihedral(num(tail)?.max(1)),
        "cyclic" => FiniteGroupTable::cyclic(num(tail)?.max(1) as usize),
        "symmetric" => FiniteGroupTable::symmetric(num(tail)? as usize),
        _ => {
            let p = parse_pres_spec(s)?;
            let (_, b) = regular_bsgs(&p, cfg)?;
            FiniteGroupTable::from_regular(b.degree(), b.strong_generators().to_vec())?
        }
    })
}

fn floor_half(n: u32) -> u32 {
    n / 2
}

fn thmd_order(n: u32) -> u64 {
    1u64 << (floor_half(n) + n - 1)
}

pub fn cmd_present(kind: PresKind, n: u32, class: Option<u32>, cfg: &EnumConfig) -> Result<RunManifest, CliError> {
    let start = Instant::now();
    let p = build_presentation(kind, n, class)?;
    let mut m = RunManifest::new("present", json!({"pres": kind, "n": n, "class": class}), cfg);
    m.results = json!({"text": p.to_string(), "presentation": PresentationJson::from(&p)});
    m.summary.push(p.to_string());
    Ok(m.finish(start))
}

pub fn cmd_counts(n_from: u32, n_to: u32, cfg: &EnumConfig) -> Result<RunManifest, CliError> {
    let start = Instant::now();
    let mut m = RunManifest::new("counts", json!({"n_from": n_from, "n_to": n_to}), cfg);
    let reports = (n_from..=n_to).map(counts_closed_form).collect::<Result<Vec<_>, _>>()?;
    for r in &reports {
        m.verdicts.push(Verdict::check(
            format!("counts-n{}", r.n),
            "closed-form generator and relator counts",
            [r.enumerated_standard_gens, r.enumerated_standard_relators, r.enumerated_minimal_gens, r.enumerated_minimal_relators],
            [r.standard_gens, r.standard_relators, r.minimal_gens, r.minimal_relators],
        ));
    }
    m.summary.push("n  G_n  R_n  G~_n  R~_n".into());
    m.summary.extend(reports.iter().map(|r| {
        format!("{}  {}  {}  {}  {}", r.n, r.enumerated_standard_gens, r.enumerated_standard_relators, r.enumerated_minimal_gens, r.enumerated_minimal_relators)
    }));
    m.results = serde_json::to_value(&reports).expect("serialisable");
    Ok(m.finish(start))
}

/// Maps understood by `hom check`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MapName {
    Pi,
    PhiD4,
    PsiD8,
    PhiInf,
    Theta,
    ThetaLambda,
    Qn,
    Dihedral,
}

impl FromStr for MapName {
    type Err = CliError;

    fn from_str(s: &str) -> Result<MapName, CliError> {
        Ok(match s {
            "pi" => MapName::Pi,
            "phi-d4" => MapName::PhiD4,
            "psi-d8" => MapName::PsiD8,
            "phi-inf" => MapName::PhiInf,
            "theta" => MapName::Theta,
            "theta-lambda" => MapName::ThetaLambda,
            "qn" => MapName::Qn,
            "dihedral" => MapName::Dihedral,
            _ => return Err(CliError::Usage(format!("unknown map {s:?}"))),
        })
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct HomParams {
    pub n: u32,
    pub pivot: Option<u32>,
    pub target_m: Option<u64>,
    pub standard: bool,
}

/// The map, its check report and (where decidable) surjectivity.
pub fn run_hom_check(map: MapName, params: &HomParams) -> Result<(CheckReport, Option<bool>), CliError> {
    let n = params.n;
    let mut h = match map {
        MapName::Qn => return Ok((qn_consequence_check(n)?, None)),
        MapName::Pi => pi(n, if params.standard { Source::Standard } else { Source::Minimal })?,
        MapName::PhiD4 => phi_d4(n)?,
        MapName::PsiD8 => psi_d8(n, params.pivot)?,
        MapName::PhiInf => phi_inf(n, params.pivot)?,
        MapName::Theta => theta()?,
        MapName::ThetaLambda => theta_lambda(n)?,
        MapName::Dihedral => {
            let m = params.target_m.ok_or_else(|| CliError::Usage("--target-m is required for the dihedral map".into()))?;
            dihedral_factorization(n, m)?
        }
    };
    let report = hom_check(&mut h);
    let onto = if report.passed { surjectivity_check(&h) } else { None };
    Ok((report, onto))
}

/// Whether the map is expected to pass `hom_check`.
fn hom_expected(map: MapName, params: &HomParams) -> bool {
    let n = params.n;
    match map {
        MapName::PsiD8 => n % 4 != 2,
        // Below floor(n/2)+1, g_n and g_(n/2) both map to reflections.
        MapName::PhiInf => params.pivot.is_none_or(|p| p > n / 2),
        _ => true,
    }
}

pub fn cmd_hom_check(map: MapName, params: &HomParams, cfg: &EnumConfig) -> Result<RunManifest, CliError> {
    let start = Instant::now();
    let mut m = RunManifest::new("hom check", json!({"map": map, "params": params}), cfg);
    let (report, onto) = run_hom_check(map, params)?;
    let name = serde_json::to_value(map).expect("serialisable");
    let name = name.as_str().expect("string");
    m.verdicts.push(Verdict::check(format!("hom-{name}-n{}", params.n), "homomorphism relator check", report.passed, hom_expected(map, params)));
    m.summary.push(format!("{name} n={}: {}", params.n, if report.passed { "all relators map to 1" } else { "relators fail" }));
    for f in &report.failures {
        m.summary.push(format!("  {} -> {}", f.relator, f.image));
    }
    m.results = json!({"report": report, "surjective": onto});
    Ok(m.finish(start))
}

pub fn cmd_hom_count(p: &Presentation, target: &FiniteGroupTable, surjective_only: bool, cfg: &EnumConfig) -> Result<RunManifest, CliError> {
    let start = Instant::now();
    let mut m = RunManifest::new("hom count", json!({"presentation": p.family().to_string(), "target_order": target.order(), "surjective_only": surjective_only}), cfg);
    let count = hom_count(p, target, surjective_only, HOM_COUNT_BUDGET)?;
    m.summary.push(format!("{count} homomorphisms"));
    m.results = json!({"count": count});
    Ok(m.finish(start))
}

/// Order by enumeration; returns the table for CSV dumps.
pub fn cmd_order(kind: PresKind, n: u32, class: Option<u32>, cfg: &EnumConfig) -> Result<(RunManifest, Option<CosetTable>), CliError> {
    let start = Instant::now();
    let p = build_presentation(kind, n, class)?;
    let mut m = RunManifest::new("order", json!({"pres": kind, "n": n, "class": class}), cfg);
    let t = todd_coxeter(&p, &[], cfg)?;
    let claim = format!("{}-order-n{n}", serde_json::to_value(kind).expect("serialisable").as_str().expect("string"));
    m.results = json!({"status": t.status(), "order": t.is_complete().then_some(t.index()), "stats": t.stats()});
    if t.is_complete() {
        m.summary.push(format!("order {}", t.index()));
        if kind == PresKind::Thmd {
            m.verdicts.push(Verdict::check(claim, ORDER_SOURCE, t.index() as u64, thmd_order(n)));
        }
        Ok((m.finish(start), Some(t)))
    } else {
        m.summary.push(format!("capped: {}", t.stats()));
        let expected = if kind == PresKind::Thmd { json!(thmd_order(n)) } else { Value::Null };
        m.verdicts.push(Verdict::skipped(claim, "coset enumeration", expected, format!("cap {} reached: {}", cfg.max_cosets, t.stats())));
        Ok((m.finish(start), None))
    }
}

pub fn cmd_lcs(kind: PresKind, n: u32, class: Option<u32>, cfg: &EnumConfig) -> Result<RunManifest, CliError> {
    let start = Instant::now();
    let p = build_presentation(kind, n, class)?;
    let mut m = RunManifest::new("lcs", json!({"pres": kind, "n": n, "class": class}), cfg);
    let (_, b) = regular_bsgs(&p, cfg)?;
    let report = lower_central_series(&b);
    m.summary.push(format!("orders {:?}", report.orders));
    m.summary.push(format!("ranks {:?}", report.ranks.iter().map(|r| r.map_or("-".into(), |x| x.to_string())).collect::<Vec<_>>()));
    m.results = serde_json::to_value(&report).expect("serialisable");
    Ok(m.finish(start))
}

fn witness_json(p: &Presentation, images: &[Perm]) -> Value {
    let map: serde_json::Map<String, Value> =
        p.gens().into_iter().zip(images).map(|(g, img)| (p.alphabet().format_gen(g), json!(img.to_string()))).collect();
    Value::Object(map)
}

pub fn cmd_iso(left: &str, right: &str, cfg: &EnumConfig) -> Result<RunManifest, CliError> {
    let start = Instant::now();
    let p = parse_pres_spec(left)?;
    let h = parse_group_spec(right, cfg)?;
    let mut m = RunManifest::new("iso", json!({"left": left, "right": right}), cfg);
    let witness = isomorphic(&p, &h, cfg)?;
    match &witness {
        Some(images) => {
            m.summary.push(format!("{left} is isomorphic to {right}"));
            for (g, img) in p.gens().into_iter().zip(images) {
                m.summary.push(format!("  {} -> {}", p.alphabet().format_gen(g), img));
            }
        }
        None => m.summary.push(format!("{left} is not isomorphic to {right}")),
    }
    m.results = json!({"isomorphic": witness.is_some(), "witness": witness.as_ref().map(|w| witness_json(&p, w))});
    Ok(m.finish(start))
}

pub fn cmd_abelianize(kind: PresKind, n: u32, class: Option<u32>, cfg: &EnumConfig) -> Result<RunManifest, CliError> {
    let start = Instant::now();
    let p = build_presentation(kind, n, class)?;
    let mut m = RunManifest::new("abelianize", json!({"pres": kind, "n": n, "class": class}), cfg);
    let inv = abelianization(&p);
    if matches!(kind, PresKind::Standard | PresKind::Minimal) {
        m.verdicts.push(Verdict::check(format!("abelianization-n{n}"), "abelianization Z2^(n-1)", inv.elementary_two_rank(), Some(n as usize - 1)));
    }
    m.summary.push(inv.to_string());
    m.results = json!({"invariants": inv.to_string(), "torsion": inv.torsion.iter().map(|t| t.to_string()).collect::<Vec<_>>(), "free_rank": inv.free_rank});
    Ok(m.finish(start))
}

/// Layer ranks of `J_n` read off the largest class-truncated quotient
/// (class at most `max_class`) that the coset cap allows.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RankRow {
    pub n: u32,
    pub requested_class: u32,
    /// Class of the quotient actually enumerated; 0 if none completed.
    pub class: u32,
    /// `|J_n / Γ_(i+1)|` for `i = 1..=class`.
    pub quotient_orders: Vec<u64>,
    pub ranks: Vec<u32>,
    pub elementary: Vec<bool>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub capped: Vec<String>,
}

pub fn rank_row(n: u32, max_class: u32, cfg: &EnumConfig) -> Result<RankRow, CliError> {
    let mut row = RankRow { n, requested_class: max_class, class: 0, quotient_orders: vec![], ranks: vec![], elementary: vec![], capped: vec![] };
    let base = minimal_cactus(n)?;
    for c in (1..=max_class).rev() {
        let p = class_truncate(&base, c)?;
        match regular_bsgs(&p, cfg) {
            Ok((_, b)) => {
                let r = lower_central_series(&b);
                let mut order = 1u64;
                for i in 0..c as usize {
                    let index = match (r.orders.get(i), r.orders.get(i + 1)) {
                        (Some(a), Some(b)) => a / b,
                        _ => 1,
                    };
                    order *= index;
                    row.quotient_orders.push(order);
                    row.ranks.push(index.trailing_zeros());
                    row.elementary.push(index.is_power_of_two() && r.elementary.get(i).copied().unwrap_or(true));
                }
                row.class = c;
                return Ok(row);
            }
            Err(EnumError::Capped { stats, .. }) => row.capped.push(format!("class {c}: {stats}")),
            Err(e) => return Err(e.into()),
        }
    }
    Ok(row)
}

fn required_cell(n: u32, i: u32) -> bool {
    i <= 2 || (i == 3 && n <= 5)
}

/// Verdicts for one row of the rank table plus the layer formulas.
fn rank_verdicts(row: &RankRow, cells: u32) -> Vec<Verdict> {
    let n = row.n;
    let mut out = Vec::new();
    for i in 1..=cells {
        let claim = format!("table-J{n}-i{i}");
        let expected = table_rank(n, i);
        let v = match row.ranks.get(i as usize - 1) {
            Some(&r) if row.elementary[i as usize - 1] => {
                Verdict::check(claim, RANK_TABLE_SOURCE, r, expected).with_note(format!("quotient order {}", row.quotient_orders[i as usize - 1]))
            }
            Some(_) => Verdict::check(claim, RANK_TABLE_SOURCE, "non-elementary layer", expected),
            None => Verdict::skipped(claim, RANK_TABLE_SOURCE, expected, row.capped.join("; ")),
        };
        out.push(if required_cell(n, i) { v } else { v.optional() });
    }
    out.extend(formula_verdicts(row, cells));
    out
}

/// Compares layers 2 and 3 with the rank formulas; where the formula and
/// the table disagree the computed value adjudicates.
fn formula_verdicts(row: &RankRow, cells: u32) -> Vec<Verdict> {
    let n = row.n;
    let mut out = Vec::new();
    let formulas = [(2u32, floor_half(n), LAYER2_SOURCE), (3, 2 * floor_half(n) - 1, LAYER3_SOURCE)];
    for (i, formula, source) in formulas {
        if i > cells {
            continue;
        }
        let claim = format!("rank-formula-J{n}-i{i}");
        let Some(&r) = row.ranks.get(i as usize - 1) else {
            out.push(Verdict::skipped(claim, source, formula, row.capped.join("; ")));
            continue;
        };
        match table_rank(n, i) {
            Some(t) if t != formula => {
                let agrees = |x: u32| if r == x { "agrees with" } else { "contradicts" };
                out.push(Verdict {
                    claim,
                    source: format!("{source} vs {RANK_TABLE_SOURCE}"),
                    computed: json!(r),
                    expected: json!({"formula": formula, "table": t}),
                    status: VerdictStatus::Adjudication,
                    required: false,
                    note: Some(format!("computed rank {r} {} the table and {} the formula", agrees(t), agrees(formula))),
                });
                if r != t && r != formula {
                    out.push(Verdict::check(format!("rank-J{n}-i{i}-matches-a-published-value"), source, r, formula));
                }
            }
            _ => out.push(Verdict::check(claim, source, r, formula)),
        }
    }
    out
}

pub fn cmd_table(ns: &[u32], max_class: u32, cfg: &EnumConfig) -> Result<RunManifest, CliError> {
    let start = Instant::now();
    let mut m = RunManifest::new("table", json!({"n": ns, "max_class": max_class}), cfg);
    let rows = ns.par_iter().map(|&n| rank_row(n, max_class, cfg)).collect::<Result<Vec<_>, _>>()?;
    for row in &rows {
        m.verdicts.extend(rank_verdicts(row, max_class));
        let cells: Vec<String> = (1..=max_class)
            .map(|i| match row.ranks.get(i as usize - 1) {
                Some(r) => format!("{r}"),
                None => "skipped".into(),
            })
            .collect();
        let published: Vec<String> = (1..=max_class).map(|i| table_rank(row.n, i).map_or("-".into(), |t| t.to_string())).collect();
        m.summary.push(format!("J{}: computed {}   table {}", row.n, cells.join(" "), published.join(" ")));
    }
    m.results = json!({"rows": rows});
    Ok(m.finish(start))
}

type Job<'a> = Box<dyn Fn() -> Result<Vec<Verdict>, CliError> + Send + Sync + 'a>;

fn hom_range_verdict(label: &str, map: MapName, range: impl Iterator<Item = u32>, params: impl Fn(u32) -> HomParams) -> Result<Vec<Verdict>, CliError> {
    let mut out = Vec::new();
    for n in range {
        let (report, onto) = run_hom_check(map, &params(n))?;
        let expected = hom_expected(map, &params(n));
        let mut v = Verdict::check(format!("hom-{label}-n{n}"), "homomorphism relator check", report.passed, expected);
        if map == MapName::PsiD8 && !expected {
            // The failure must come from a relator between g_n and g_(n/2).
            let witnessed = report.failures.iter().any(|f| {
                f.relator.parse::<Word>().is_ok_and(|w| {
                    let gens: Vec<u32> = w.letters().iter().map(|l| l.gen.0).collect();
                    gens.contains(&n) && gens.contains(&(n / 2))
                })
            });
            v = Verdict::check(format!("hom-{label}-n{n}"), "homomorphism fails iff m = 2 mod 4, witnessed by g_m and g_(m/2)", (report.passed, witnessed), (false, true));
        }
        out.push(v);
        if matches!(map, MapName::Pi | MapName::PhiD4 | MapName::PhiInf) {
            out.push(Verdict::check(format!("onto-{label}-n{n}"), "surjectivity", onto, Some(true)));
        }
    }
    Ok(out)
}

fn verify_jobs<'a>(n_max: u32, cfg: &'a EnumConfig) -> Vec<Job<'a>> {
    let mut jobs: Vec<Job<'a>> = Vec::new();
    jobs.push(Box::new(|| Ok(cmd_counts(2, 12, cfg)?.verdicts)));
    jobs.push(Box::new(|| {
        let mut out = Vec::new();
        for n in 2..=8u32 {
            for (name, p) in [("standard", standard_cactus(n)?), ("minimal", minimal_cactus(n)?)] {
                out.push(Verdict::check(format!("abelianization-{name}-n{n}"), "abelianization Z2^(n-1)", abelianization(&p).elementary_two_rank(), Some(n as usize - 1)));
            }
        }
        Ok(out)
    }));
    jobs.push(Box::new(|| hom_range_verdict("pi-standard", MapName::Pi, 2..=12, |n| HomParams { n, standard: true, ..Default::default() })));
    jobs.push(Box::new(|| hom_range_verdict("pi-minimal", MapName::Pi, 2..=12, |n| HomParams { n, ..Default::default() })));
    jobs.push(Box::new(|| hom_range_verdict("phi-d4", MapName::PhiD4, 3..=12, |n| HomParams { n, ..Default::default() })));
    jobs.push(Box::new(|| hom_range_verdict("phi-inf", MapName::PhiInf, 3..=12, |n| HomParams { n, ..Default::default() })));
    jobs.push(Box::new(|| {
        // The pivot ceil(n/2) only works for odd n.
        let mut out = Vec::new();
        for n in 3..=12u32 {
            let (report, _) = run_hom_check(MapName::PhiInf, &HomParams { n, pivot: Some(n.div_ceil(2)), ..Default::default() })?;
            out.push(Verdict::check(format!("phi-inf-pivot-ceil-n{n}"), "phi-inf with pivot ceil(n/2) is a homomorphism iff n is odd", report.passed, n % 2 == 1));
        }
        Ok(out)
    }));
    jobs.push(Box::new(|| hom_range_verdict("psi-d8", MapName::PsiD8, 3..=14, |n| HomParams { n, ..Default::default() })));
    jobs.push(Box::new(|| hom_range_verdict("theta-lambda", MapName::ThetaLambda, 4..=10, |n| HomParams { n, ..Default::default() })));
    jobs.push(Box::new(|| {
        let (report, onto) = run_hom_check(MapName::Theta, &HomParams { n: 4, ..Default::default() })?;
        Ok(vec![Verdict::check("hom-theta", "homomorphism relator check", (report.passed, onto), (true, Some(true)))])
    }));
    jobs.push(Box::new(|| {
        (4..=10u32)
            .map(|n| Ok(Verdict::check(format!("qn-consequence-n{n}"), "relators map to relators under strand forgetting", qn_consequence_check(n)?.passed, true)))
            .collect()
    }));
    jobs.push(Box::new(|| {
        let mut bad = Vec::new();
        for n in 3..=8u32 {
            for m in 1..=64u64 {
                let h = dihedral_factorization(n, m)?;
                if !(h.is_checked() && surjectivity_check(&h) == Some(true)) {
                    bad.push(format!("n={n} m={m}"));
                }
            }
        }
        Ok(vec![Verdict::check("dihedral-factorization-n3-8-m1-64", "every dihedral group is a quotient", bad, Vec::<String>::new())])
    }));
    for n in 3..=8u32 {
        jobs.push(Box::new(move || {
            let claim = format!("thmd-order-n{n}");
            Ok(vec![match group_order(&thmd_quotient(n)?, cfg) {
                Ok(o) => Verdict::check(claim, ORDER_SOURCE, o, thmd_order(n)),
                Err(e) => Verdict::skipped(claim, ORDER_SOURCE, thmd_order(n), e.to_string()),
            }])
        }));
    }
    for n in 3..=7u32 {
        jobs.push(Box::new(move || {
            let claim = format!("class2-order-n{n}");
            let source = "class-2 quotient equals the order-formula quotient";
            let t = class_truncate(&minimal_cactus(n)?, 2)?;
            Ok(vec![match (group_order(&t, cfg), group_order(&thmd_quotient(n)?, cfg)) {
                (Ok(a), Ok(b)) => Verdict::check(claim, source, a, b),
                (Err(e), _) | (_, Err(e)) => Verdict::skipped(claim, source, Value::Null, e.to_string()),
            }])
        }));
    }
    for (n, right) in [(4u32, "wreath"), (5, "z2xwreath")] {
        jobs.push(Box::new(move || {
            let m = cmd_iso(&format!("thmd:{n}"), right, cfg)?;
            let found = m.results["isomorphic"].as_bool() == Some(true);
            let v = Verdict::check(format!("iso-thmd{n}-{right}"), "isomorphism type of the class-2 quotient", found, true);
            Ok(vec![v.with_note(m.results["witness"].to_string())])
        }));
    }
    // Rank rows: J3..J7 feed the layer-2 formula, J4..J6 the table.
    for (n, class) in [(3u32, 2u32), (4, 5), (5, 4), (6, 3), (7, 3)] {
        jobs.push(Box::new(move || {
            let row = rank_row(n, class, cfg)?;
            let mut out = Vec::new();
            let claim = format!("layer2-rank-J{n}");
            out.push(match row.ranks.get(1) {
                Some(&r) if row.elementary[1] => Verdict::check(claim, LAYER2_SOURCE, r, floor_half(n)),
                Some(_) => Verdict::check(claim, LAYER2_SOURCE, "non-elementary layer", floor_half(n)),
                None => Verdict::skipped(claim, LAYER2_SOURCE, floor_half(n), row.capped.join("; ")),
            });
            if (4..=6).contains(&n) && n <= n_max {
                out.extend(rank_verdicts(&row, class).into_iter().filter(|v| !v.claim.starts_with("rank-formula") || v.claim.ends_with("i3")));
                if n <= 5 {
                    let orders = row.quotient_orders.get(2).copied();
                    out.push(Verdict::check(format!("class3-quotient-order-J{n}"), "layer ranks 1..3", orders, Some(if n == 4 { 256u64 } else { 512 })));
                }
                for i in 2..=row.class.min(4) {
                    out.push(Verdict::check(format!("layer-nontrivial-J{n}-i{i}"), "the lower central series does not stop", row.ranks[i as usize - 1] > 0, true));
                }
            }
            Ok(out)
        }));
    }
    jobs
}

/// Runs every acceptance claim. `n_max` bounds the rank-table rows.
pub fn cmd_verify_all(n_max: u32, cfg: &EnumConfig) -> Result<RunManifest, CliError> {
    let start = Instant::now();
    let mut m = RunManifest::new("verify-all", json!({"n_max": n_max}), cfg);
    let jobs = verify_jobs(n_max, cfg);
    let results: Vec<Result<Vec<Verdict>, CliError>> = jobs.par_iter().map(|job| job()).collect();
    for r in results {
        m.verdicts.extend(r?);
    }
    let required = m.verdicts.iter().filter(|v| v.required).count();
    m.results = json!({"claims": m.verdicts.len(), "required": required});
    Ok(m.finish(start))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_lookup() {
        assert_eq!(table_rank(4, 1), Some(3));
        assert_eq!(table_rank(6, 3), Some(4));
        assert_eq!(table_rank(6, 11), None);
        assert_eq!(table_rank(7, 1), None);
        assert_eq!(table_rank(4, 0), None);
    }

    #[test]
    fn verdict_status() {
        assert_eq!(Verdict::check("x", "s", 3, 3).status, VerdictStatus::Pass);
        assert_eq!(Verdict::check("x", "s", 3, 4).status, VerdictStatus::Fail);
        let m = RunManifest {
            verdicts: vec![Verdict::skipped("x", "s", 1, "cap")],
            ..RunManifest::new("t", Value::Null, &EnumConfig::default())
        };
        assert_eq!(m.exit_code(), 2);
    }

    #[test]
    fn phi_inf_expectation_matches_every_pivot() {
        for n in 3..=10 {
            for p in 2..=n {
                let params = HomParams { n, pivot: Some(p), ..Default::default() };
                let (report, _) = run_hom_check(MapName::PhiInf, &params).unwrap();
                assert_eq!(report.passed, hom_expected(MapName::PhiInf, &params), "n={n} pivot={p}");
            }
        }
    }

    #[test]
    fn specs_parse() {
        let cfg = EnumConfig::default();
        assert_eq!(parse_pres_spec("thmd:4").unwrap().ngens(), 3);
        assert_eq!(parse_pres_spec("trunc:4:2").unwrap().ngens(), 3);
        assert!(parse_pres_spec("trunc:4").is_err());
        assert_eq!(parse_group_spec("dihedral:4", &cfg).unwrap().order(), 8);
        assert_eq!(parse_group_spec("thmd:4", &cfg).unwrap().order(), 32);
        assert!(parse_group_spec("nonsense", &cfg).is_err());
    }

    #[test]
    fn small_table_row() {
        let m = cmd_table(&[4], 2, &EnumConfig::default()).unwrap();
        assert_eq!(m.exit_code(), 0);
        assert!(m.verdicts.iter().any(|v| v.claim == "table-J4-i2" && v.status == VerdictStatus::Pass));
    }

    #[test]
    fn capped_order_exits_two() {
        let cfg = EnumConfig::default().with_max_cosets(16);
        let (m, t) = cmd_order(PresKind::Thmd, 5, None, &cfg).unwrap();
        assert!(t.is_none());
        assert_eq!(m.exit_code(), 2);
    }
}
