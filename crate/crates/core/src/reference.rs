//! Bundled transcriptions of published tensor tables and soliton systems,
//! and their comparison against the computed values.
//!
//! Files live under `data/reference/<group>/` and use the polynomial
//! grammar with the group's shorthands bound:
//!
//! * `<kind>-ricci.txt`, `<kind>-lie.txt`: lines `(j,k) = expr`;
//!   an optional `infer NAME from (j,k)` line solves an otherwise undefined
//!   shorthand from the computed entry.
//! * `<kind>-ricci-delta.txt`: the entries of a perturbed Ricci tensor that
//!   differ from the unperturbed one; unlisted entries must coincide.
//! * `<kind>-system.txt`: one equation per line, `lhs = rhs` or `expr`; a
//!   suffix `| printed: ...` records a misprinted original next to the
//!   corrected line.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::connection::{Connections, ConnectionKind};
use crate::curvature::{rho_tilde, SymTensor, UPPER};
use crate::lie::{builtin, GroupId, LiePresentation};
use crate::poly::{parse_poly_with, Bindings, ParseError, Poly, Var};
use crate::soliton::{lie_derivative_metric, match_paper_system, MatchReport, SolitonSystem};

macro_rules! reference_files {
    ($($g:literal: [$($f:literal),*]),* $(,)?) => {
        &[$($((
            concat!($g, "/", $f),
            include_str!(concat!("../data/reference/", $g, "/", $f, ".txt")),
        ),)*)*]
    };
}

const ALL_FILES: [&str; 10] = [
    "C0-ricci", "C1-ricci", "C0-lie", "C1-lie", "C0-system", "C1-system",
    "C2-ricci-delta", "C3-ricci-delta", "C2-system", "C3-system",
];

static FILES: &[(&str, &str)] = reference_files! {
    "G1": ["C0-ricci", "C1-ricci", "C0-lie", "C1-lie", "C0-system", "C1-system", "C2-ricci-delta", "C3-ricci-delta", "C2-system", "C3-system"],
    "G2": ["C0-ricci", "C1-ricci", "C0-lie", "C1-lie", "C0-system", "C1-system", "C2-ricci-delta", "C3-ricci-delta", "C2-system", "C3-system"],
    "G3": ["C0-ricci", "C1-ricci", "C0-lie", "C1-lie", "C0-system", "C1-system", "C2-ricci-delta", "C3-ricci-delta", "C2-system", "C3-system"],
    "G4": ["C0-ricci", "C1-ricci", "C0-lie", "C1-lie", "C0-system", "C1-system", "C2-ricci-delta", "C3-ricci-delta", "C2-system", "C3-system"],
    "G5": ["C0-ricci", "C1-ricci", "C0-lie", "C1-lie", "C0-system", "C1-system", "C2-ricci-delta", "C3-ricci-delta", "C2-system", "C3-system"],
    "G6": ["C0-ricci", "C1-ricci", "C0-lie", "C1-lie", "C0-system", "C1-system", "C2-ricci-delta", "C3-ricci-delta", "C2-system", "C3-system"],
    "G7": ["C0-ricci", "C1-ricci", "C0-lie", "C1-lie", "C0-system", "C1-system", "C2-ricci-delta", "C3-ricci-delta", "C2-system", "C3-system"],
};

/// Raw text of a bundled reference file such as `"G3/C1-ricci"`.
pub fn reference_text(name: &str) -> Option<&'static str> {
    FILES.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

/// Names of all bundled reference files.
pub fn reference_names() -> impl Iterator<Item = &'static str> {
    debug_assert_eq!(FILES.len(), 7 * ALL_FILES.len());
    FILES.iter().map(|(n, _)| *n)
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum ReferenceError {
    #[error("no reference file `{0}`")]
    Missing(String),
    #[error("{file}:{line}: {message}")]
    Malformed { file: String, line: usize, message: String },
    #[error("{file}: {source}")]
    Parse { file: String, source: ParseError },
    #[error("{file}: cannot solve for `{name}` from entry ({j},{k})")]
    Inference { file: String, name: String, j: usize, k: usize },
}

/// A polynomial expression with the position it was read from.
#[derive(Clone, Debug, PartialEq)]
pub struct SourceExpr {
    pub text: String,
    pub line: usize,
    pub column: usize,
}

impl SourceExpr {
    fn parse(&self, file: &str, env: &Bindings) -> Result<Poly, ReferenceError> {
        crate::poly::parse::parse_poly_at(&self.text, env, self.line, self.column)
            .map_err(|source| ReferenceError::Parse { file: file.to_string(), source })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TableFile {
    pub name: String,
    /// Zero-based `(j, k)` with the expression text.
    pub entries: Vec<((usize, usize), SourceExpr)>,
    pub infer: Option<(String, (usize, usize))>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SystemLine {
    pub corrected: SourceExpr,
    pub printed: Option<SourceExpr>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SystemFile {
    pub name: String,
    pub lines: Vec<SystemLine>,
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(n, l)| (n + 1, l))
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
}

fn parse_index(s: &str) -> Option<(usize, usize)> {
    let inner = s.trim().strip_prefix('(')?.strip_suffix(')')?;
    let (a, b) = inner.split_once(',')?;
    let (a, b): (usize, usize) = (a.trim().parse().ok()?, b.trim().parse().ok()?);
    ((1..=3).contains(&a) && (1..=3).contains(&b)).then(|| (a.min(b) - 1, a.max(b) - 1))
}

/// Turns `lhs = rhs` into `lhs - (rhs)`, keeping positions for messages.
fn equation_expr(text: &str, line: usize, column: usize) -> SourceExpr {
    match text.split_once('=') {
        Some((lhs, rhs)) if rhs.trim() == "0" => SourceExpr { text: lhs.to_string(), line, column },
        Some((lhs, rhs)) => SourceExpr { text: format!("{lhs} - ({rhs})"), line, column },
        None => SourceExpr { text: text.to_string(), line, column },
    }
}

pub fn load_table(name: &str) -> Result<TableFile, ReferenceError> {
    let text = reference_text(name).ok_or_else(|| ReferenceError::Missing(name.to_string()))?;
    parse_table(name, text)
}

pub fn parse_table(name: &str, text: &str) -> Result<TableFile, ReferenceError> {
    let malformed = |line, message: &str| ReferenceError::Malformed {
        file: name.to_string(),
        line,
        message: message.to_string(),
    };
    let mut table = TableFile { name: name.to_string(), entries: Vec::new(), infer: None };
    for (n, l) in content_lines(text) {
        if let Some(rest) = l.trim().strip_prefix("infer ") {
            let (sym, idx) = rest.split_once(" from ").ok_or_else(|| malformed(n, "expected `infer NAME from (j,k)`"))?;
            let idx = parse_index(idx).ok_or_else(|| malformed(n, "bad index"))?;
            table.infer = Some((sym.trim().to_string(), idx));
            continue;
        }
        let (idx, expr) = l.split_once('=').ok_or_else(|| malformed(n, "expected `(j,k) = expr`"))?;
        let idx = parse_index(idx).ok_or_else(|| malformed(n, "bad index"))?;
        if table.entries.iter().any(|(i, _)| *i == idx) {
            return Err(malformed(n, "duplicate entry"));
        }
        let column = l.find('=').unwrap() + 2;
        table.entries.push((idx, SourceExpr { text: expr.to_string(), line: n, column }));
    }
    Ok(table)
}

pub fn load_system(name: &str) -> Result<SystemFile, ReferenceError> {
    let text = reference_text(name).ok_or_else(|| ReferenceError::Missing(name.to_string()))?;
    Ok(parse_system(name, text))
}

pub fn parse_system(name: &str, text: &str) -> SystemFile {
    let lines = content_lines(text)
        .map(|(n, l)| match l.split_once("| printed:") {
            Some((fixed, printed)) => SystemLine {
                corrected: equation_expr(fixed, n, 1),
                printed: Some(equation_expr(printed, n, fixed.len() + 11)),
            },
            None => SystemLine { corrected: equation_expr(l, n, 1), printed: None },
        })
        .collect();
    SystemFile { name: name.to_string(), lines }
}

/// A shorthand recovered by solving a table entry against the computation.
#[derive(Clone, Debug, PartialEq)]
pub struct Inference {
    pub group: GroupId,
    pub name: String,
    pub value: Poly,
    pub source: String,
}

/// Shorthand bindings for a group: the presentation's own plus any the
/// reference tables ask to infer.
pub fn group_bindings(group: GroupId) -> Result<(Bindings, Vec<Inference>), ReferenceError> {
    let lie = builtin(group);
    let mut env: Bindings = lie.shorthands.iter().cloned().collect();
    let conns = Connections::of(&lie);
    let mut inferred = Vec::new();
    for kind in [ConnectionKind::C0, ConnectionKind::C1] {
        let name = format!("{group}/{kind}-ricci");
        let table = load_table(&name)?;
        let Some((sym, (j, k))) = &table.infer else { continue };
        let computed = rho_tilde(conns.get(kind), &lie);
        let value = solve_for(&name, &table, sym, (*j, *k), &env, &computed.entries[*j][*k])?;
        env.insert(sym.clone(), value.clone());
        inferred.push(Inference { group, name: sym.clone(), value, source: name });
    }
    Ok((env, inferred))
}

/// Placeholder variable standing for a symbol being solved for.
fn placeholder() -> Var {
    Var::aux(50)
}

fn solve_for(
    file: &str,
    table: &TableFile,
    sym: &str,
    idx: (usize, usize),
    env: &Bindings,
    computed: &Poly,
) -> Result<Poly, ReferenceError> {
    let fail = || ReferenceError::Inference { file: file.to_string(), name: sym.to_string(), j: idx.0 + 1, k: idx.1 + 1 };
    let (_, expr) = table.entries.iter().find(|(i, _)| *i == idx).ok_or_else(fail)?;
    let mut env = env.clone();
    env.insert(sym.to_string(), Poly::var(placeholder()));
    let printed = expr.parse(file, &env)?;
    let coeffs = printed.coefficients_in(placeholder());
    if coeffs.len() != 2 || coeffs[1].is_zero() {
        return Err(fail());
    }
    (computed - &coeffs[0]).div_exact(&coeffs[1]).ok_or_else(fail)
}

/// Comparison of one table entry.
#[derive(Clone, Debug, PartialEq)]
pub struct EntryComparison {
    pub index: (usize, usize),
    pub text: String,
    pub printed: Poly,
    pub computed: Poly,
    /// Single-symbol substitutions in the printed text that reproduce the
    /// computed value, as `(printed symbol, replacement)`.
    pub readings: Vec<(String, String)>,
}

impl EntryComparison {
    pub fn matches(&self) -> bool {
        self.printed == self.computed
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TableComparison {
    pub name: String,
    pub entries: Vec<EntryComparison>,
    /// Indices of entries the table does not list.
    pub missing: Vec<(usize, usize)>,
}

impl TableComparison {
    pub fn mismatches(&self) -> impl Iterator<Item = &EntryComparison> {
        self.entries.iter().filter(|e| !e.matches())
    }

    pub fn is_exact(&self) -> bool {
        self.missing.is_empty() && self.mismatches().next().is_none()
    }
}

/// Identifier tokens of an expression with their byte ranges.
fn identifiers(text: &str) -> Vec<(usize, usize)> {
    let b = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < b.len() {
        if b[i].is_ascii_alphabetic() || b[i] == b'_' {
            let s = i;
            while i < b.len() && (b[i].is_ascii_alphanumeric() || b[i] == b'_') {
                i += 1;
            }
            out.push((s, i));
        } else {
            i += 1;
        }
    }
    out
}

/// Single-symbol replacements in `text` that make it evaluate to `target`.
pub fn diagnose_misprint(text: &str, candidates: &[String], env: &Bindings, target: &Poly) -> Vec<(String, String)> {
    let mut out = Vec::new();
    for (s, e) in identifiers(text) {
        let original = &text[s..e];
        for c in candidates {
            if c == original {
                continue;
            }
            let fixed = format!("{}{}{}", &text[..s], c, &text[e..]);
            if parse_poly_with(&fixed, env).is_ok_and(|p| &p == target) {
                let pair = (original.to_string(), c.clone());
                if !out.contains(&pair) {
                    out.push(pair);
                }
            }
        }
    }
    out
}

fn candidate_symbols(lie: &LiePresentation, env: &Bindings) -> Vec<String> {
    let mut v: Vec<String> = lie.params.iter().map(|p| p.name()).collect();
    v.extend(["lam", "lbar", "l1", "l2", "l3"].map(String::from));
    v.extend(env.keys().cloned());
    v
}

/// Compares every listed entry of a table with a computed tensor.
pub fn compare_table(
    table: &TableFile,
    computed: &SymTensor,
    lie: &LiePresentation,
    env: &Bindings,
) -> Result<TableComparison, ReferenceError> {
    let candidates = candidate_symbols(lie, env);
    let mut entries = Vec::new();
    for ((j, k), expr) in &table.entries {
        let printed = expr.parse(&table.name, env)?;
        let value = computed.entries[*j][*k].clone();
        let readings = if printed == value {
            Vec::new()
        } else {
            diagnose_misprint(&expr.text, &candidates, env, &value)
        };
        entries.push(EntryComparison { index: (*j, *k), text: expr.text.trim().to_string(), printed, computed: value, readings });
    }
    let missing = UPPER.iter().copied().filter(|idx| !table.entries.iter().any(|(i, _)| i == idx)).collect();
    Ok(TableComparison { name: table.name.clone(), entries, missing })
}

/// Ricci or Lie-derivative table check for one group and unperturbed kind.
pub fn check_table(group: GroupId, kind: ConnectionKind, what: TableKind) -> Result<TableComparison, ReferenceError> {
    let lie = builtin(group);
    let (env, _) = group_bindings(group)?;
    let c = Connections::of(&lie);
    let computed = match what {
        TableKind::Ricci => rho_tilde(c.get(kind), &lie),
        TableKind::LieDerivative => lie_derivative_metric(c.get(kind)),
    };
    let table = load_table(&format!("{group}/{kind}-{}", what.suffix()))?;
    compare_table(&table, &computed, &lie, &env)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableKind {
    Ricci,
    LieDerivative,
}

impl TableKind {
    fn suffix(self) -> &'static str {
        match self {
            TableKind::Ricci => "ricci",
            TableKind::LieDerivative => "lie",
        }
    }
}

/// Outcome of checking a perturbed Ricci tensor against its listed changes.
#[derive(Clone, Debug, PartialEq)]
pub struct DeltaComparison {
    pub name: String,
    /// Listed entries compared with the computed perturbed tensor.
    pub listed: TableComparison,
    /// Entries where perturbed and unperturbed differ.
    pub changed: Vec<(usize, usize)>,
    /// `changed` equals the set of listed entries.
    pub support_matches: bool,
}

impl DeltaComparison {
    pub fn is_exact(&self) -> bool {
        self.support_matches && self.listed.mismatches().next().is_none()
    }
}

pub fn check_delta(group: GroupId, kind: ConnectionKind) -> Result<DeltaComparison, ReferenceError> {
    assert!(kind.is_perturbed(), "deltas are defined for perturbed kinds");
    let lie = builtin(group);
    let (env, _) = group_bindings(group)?;
    let c = Connections::of(&lie);
    let pert = rho_tilde(c.get(kind), &lie);
    let base = rho_tilde(c.get(kind.base()), &lie);
    let name = format!("{group}/{kind}-ricci-delta");
    let table = load_table(&name)?;
    let listed = compare_table(&table, &pert, &lie, &env)?;
    let d = pert.sub(&base);
    let changed: Vec<(usize, usize)> = UPPER.iter().copied().filter(|&(j, k)| !d.entries[j][k].is_zero()).collect();
    let mut listed_idx: Vec<(usize, usize)> = table.entries.iter().map(|(i, _)| *i).collect();
    listed_idx.sort();
    Ok(DeltaComparison { name, support_matches: changed == listed_idx, changed, listed })
}

/// A reference system parsed under the group's bindings.
#[derive(Clone, Debug, PartialEq)]
pub struct ReferenceSystem {
    pub name: String,
    pub equations: Vec<Poly>,
    /// `(line index, printed polynomial)` for corrected lines.
    pub errata: Vec<(usize, Poly, String)>,
}

pub fn reference_system(group: GroupId, kind: ConnectionKind) -> Result<ReferenceSystem, ReferenceError> {
    let (env, _) = group_bindings(group)?;
    let name = format!("{group}/{kind}-system");
    let file = load_system(&name)?;
    let mut equations = Vec::new();
    let mut errata = Vec::new();
    for (n, line) in file.lines.iter().enumerate() {
        equations.push(line.corrected.parse(&name, &env)?);
        if let Some(p) = &line.printed {
            errata.push((n, p.parse(&name, &env)?, p.text.trim().to_string()));
        }
    }
    Ok(ReferenceSystem { name, equations, errata })
}

/// Result of matching one assembled system against its transcription.
#[derive(Clone, Debug)]
pub struct SystemCheck {
    pub group: GroupId,
    pub kind: ConnectionKind,
    pub system: SolitonSystem,
    pub reference: ReferenceSystem,
    pub report: MatchReport,
    /// For each erratum line: whether the printed form would also match.
    pub printed_matches: Vec<(usize, bool)>,
}

pub fn check_system(group: GroupId, kind: ConnectionKind) -> Result<SystemCheck, ReferenceError> {
    let system = SolitonSystem::build(&builtin(group), kind);
    let reference = reference_system(group, kind)?;
    let report = match_paper_system(&system.equations, &reference.equations);
    let printed_matches = reference
        .errata
        .iter()
        .map(|(n, printed, _)| {
            let mut eqs = reference.equations.clone();
            eqs[*n] = printed.clone();
            (*n, match_paper_system(&system.equations, &eqs).is_bijection())
        })
        .collect();
    Ok(SystemCheck { group, kind, system, reference, report, printed_matches })
}

/// A difference between a transcription and the computation.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Discrepancy {
    /// Stable identifier, e.g. `G3/C0-ricci`.
    pub key: String,
    pub detail: String,
}

/// Discrepancies found in all tables and systems.
pub fn collect_discrepancies() -> Result<Vec<Discrepancy>, ReferenceError> {
    let mut out = Vec::new();
    for group in GroupId::ALL {
        for kind in [ConnectionKind::C0, ConnectionKind::C1] {
            for what in [TableKind::Ricci, TableKind::LieDerivative] {
                let cmp = check_table(group, kind, what)?;
                out.extend(table_discrepancy(&cmp));
            }
        }
        for kind in [ConnectionKind::C2, ConnectionKind::C3] {
            let d = check_delta(group, kind)?;
            if !d.is_exact() {
                let mut detail = table_discrepancy(&d.listed).map(|x| x.detail).unwrap_or_default();
                if !d.support_matches {
                    detail.push_str(&format!("changed entries {:?} differ from the listed ones", one_based(&d.changed)));
                }
                out.push(Discrepancy { key: d.name, detail });
            }
        }
        for kind in ConnectionKind::SOLITON {
            let s = check_system(group, kind)?;
            if !s.report.is_bijection() {
                out.push(Discrepancy {
                    key: s.reference.name.clone(),
                    detail: format!(
                        "unmatched reference lines {:?}, unmatched assembled entries {:?}",
                        s.report.unmatched_reference.iter().map(|i| i + 1).collect::<Vec<_>>(),
                        s.report.unmatched_assembled.iter().map(|&i| crate::soliton::EQUATION_LABELS[i]).collect::<Vec<_>>()
                    ),
                });
            }
            for (n, printed, text) in &s.reference.errata {
                let _ = printed;
                let still = s.printed_matches.iter().any(|(m, ok)| m == n && *ok);
                out.push(Discrepancy {
                    key: format!("{}:{}", s.reference.name, n + 1),
                    detail: format!(
                        "printed `{text}`; the printed line {} the assembled system",
                        if still { "also matches" } else { "does not match" }
                    ),
                });
            }
        }
    }
    out.sort();
    Ok(out)
}

fn one_based(v: &[(usize, usize)]) -> Vec<(usize, usize)> {
    v.iter().map(|(a, b)| (a + 1, b + 1)).collect()
}

fn table_discrepancy(cmp: &TableComparison) -> Option<Discrepancy> {
    if cmp.is_exact() {
        return None;
    }
    let mut parts = Vec::new();
    for e in cmp.mismatches() {
        let mut s = format!(
            "({},{}) printed `{}` = {}, computed {}",
            e.index.0 + 1,
            e.index.1 + 1,
            e.text,
            e.printed.to_text(),
            e.computed.to_text()
        );
        for (from, to) in &e.readings {
            s.push_str(&format!("; reading `{to}` for `{from}` matches"));
        }
        parts.push(s);
    }
    if !cmp.missing.is_empty() {
        parts.push(format!("entries {:?} not listed", one_based(&cmp.missing)));
    }
    Some(Discrepancy { key: cmp.name.clone(), detail: parts.join("; ") })
}

/// All inferred shorthand definitions across groups.
pub fn all_inferences() -> Result<Vec<Inference>, ReferenceError> {
    let mut out = Vec::new();
    for g in GroupId::ALL {
        out.extend(group_bindings(g)?.1);
    }
    Ok(out)
}

/// Reference tables indexed by name, parsed but unevaluated.
pub fn all_tables() -> Result<BTreeMap<String, TableFile>, ReferenceError> {
    reference_names()
        .filter(|n| !n.ends_with("-system"))
        .map(|n| load_table(n).map(|t| (n.to_string(), t)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::poly;

    fn g(n: u8) -> GroupId {
        GroupId::new(n).unwrap()
    }

    #[test]
    fn every_file_parses() {
        assert_eq!(reference_names().count(), 70);
        for n in reference_names() {
            if n.ends_with("-system") {
                assert!(!load_system(n).unwrap().lines.is_empty(), "{n}");
            } else {
                load_table(n).unwrap();
            }
        }
    }

    #[test]
    fn a2_is_inferred() {
        let inf = all_inferences().unwrap();
        assert_eq!(inf.len(), 1);
        assert_eq!(inf[0].name, "a2");
        assert_eq!(inf[0].value, poly("(alpha - beta + gamma)/2"));
    }

    #[test]
    fn misprint_diagnosis_finds_single_swap() {
        let mut env = Bindings::new();
        env.insert("a3".into(), poly("(alpha + beta - gamma)/2"));
        let target = poly("-gamma*(alpha + beta - gamma)/2");
        let c = ["alpha", "beta", "gamma", "lam"].map(String::from);
        assert_eq!(diagnose_misprint("-lam*a3", &c, &env, &target), vec![("lam".to_string(), "gamma".to_string())]);
    }

    #[test]
    fn g1_tables_match() {
        for kind in [ConnectionKind::C0, ConnectionKind::C1] {
            assert!(check_table(g(1), kind, TableKind::Ricci).unwrap().is_exact());
            assert!(check_table(g(1), kind, TableKind::LieDerivative).unwrap().is_exact());
        }
    }

    #[test]
    fn malformed_table_reports_line() {
        let err = parse_table("x", "(1,1) = 0\n(4,1) = 1\n").unwrap_err();
        assert!(matches!(err, ReferenceError::Malformed { line: 2, .. }));
    }
}
