//! The `.liealg` text format.
//!
//! ```text
//! # comments start with '#'
//! name: G1
//! [params]
//! alpha beta
//! [brackets]
//! [e1,e2] = (alpha, 0, -beta)
//! [e1,e3] = (-alpha, -beta, 0)
//! [e2,e3] = (beta, alpha, alpha)
//! [constraints]
//! [inequations]
//! alpha
//! [cases]
//! [shorthands]
//! ```
//!
//! Bracket right-hand sides are coefficient triples on `(e1, e2, e3)`;
//! unspecified brackets are zero.  `[cases]` lines read `eta = 1 | -1`.
//! `[shorthands]` lines read `name = poly` and may use earlier shorthands.
//! Every symbol in brackets, constraints and inequations must be a declared
//! parameter.

use thiserror::Error;

use super::presentation::LiePresentation;
use crate::poly::{parse_poly_with, Bindings, ParseError, Poly, PolyVec, Rational, Var, VarSet};

#[derive(Debug, Error, PartialEq)]
pub enum LieFormatError {
    #[error("parse error at {0}")]
    Parse(#[from] ParseError),
    #[error("{line}:1: {message}")]
    Malformed { line: usize, message: String },
    #[error("{line}:1: symbol '{symbol}' in {context} is not a declared parameter")]
    OutsideParams { line: usize, symbol: String, context: &'static str },
}

#[derive(Clone, Copy, PartialEq)]
enum Section {
    Header,
    Params,
    Brackets,
    Constraints,
    Inequations,
    Cases,
    Shorthands,
}

fn section_of(line: &str) -> Option<Section> {
    Some(match line {
        "[params]" => Section::Params,
        "[brackets]" => Section::Brackets,
        "[constraints]" => Section::Constraints,
        "[inequations]" => Section::Inequations,
        "[cases]" => Section::Cases,
        "[shorthands]" => Section::Shorthands,
        _ => return None,
    })
}

fn malformed<T>(line: usize, message: impl Into<String>) -> Result<T, LieFormatError> {
    Err(LieFormatError::Malformed { line, message: message.into() })
}

fn check_params(p: &Poly, params: VarSet, line: usize, context: &'static str) -> Result<(), LieFormatError> {
    match p.vars().iter().find(|v| !params.contains(*v)) {
        Some(v) => Err(LieFormatError::OutsideParams { line, symbol: v.name(), context }),
        None => Ok(()),
    }
}

/// Column (1-based) where `needle` starts inside `raw`.
fn col(raw: &str, needle: &str) -> usize {
    let base = raw.as_ptr() as usize;
    let at = needle.as_ptr() as usize;
    raw[..at.saturating_sub(base).min(raw.len())].chars().count() + 1
}

pub fn parse_liealg(src: &str) -> Result<LiePresentation, LieFormatError> {
    let mut section = Section::Header;
    let mut name: Option<String> = None;
    let mut pres = LiePresentation::new("", Vec::new());
    let mut params = VarSet::empty();
    let mut seen = [[false; 3]; 3];
    let mut env = Bindings::new();

    for (idx, raw) in src.lines().enumerate() {
        let lno = idx + 1;
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        if let Some(s) = section_of(line) {
            section = s;
            continue;
        }
        match section {
            Section::Header => match line.strip_prefix("name:") {
                Some(n) if !n.trim().is_empty() => name = Some(n.trim().to_string()),
                _ => return malformed(lno, "expected 'name: <name>' before the first section"),
            },
            Section::Params => {
                for tok in line.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty()) {
                    let v = match Var::from_name(tok) {
                        Some(v) if !v.is_aux() => v,
                        _ => return malformed(lno, format!("'{tok}' is not a base symbol")),
                    };
                    if params.contains(v) {
                        return malformed(lno, format!("parameter '{tok}' declared twice"));
                    }
                    params.insert(v);
                    pres.params.push(v);
                }
            }
            Section::Brackets => {
                let (lhs, rhs) = match line.split_once('=') {
                    Some(x) => x,
                    None => return malformed(lno, "expected '[ei,ej] = (c1, c2, c3)'"),
                };
                let (i, j) = parse_pair(lhs.trim()).ok_or(LieFormatError::Malformed {
                    line: lno,
                    message: format!("bad bracket '{}'", lhs.trim()),
                })?;
                let body = rhs.trim();
                let inner = match body.strip_prefix('(').and_then(|b| b.strip_suffix(')')) {
                    Some(b) => b,
                    None => return malformed(lno, "bracket value must be '(c1, c2, c3)'"),
                };
                let parts: Vec<&str> = inner.split(',').collect();
                if parts.len() != 3 {
                    return malformed(lno, "bracket value needs three coefficients");
                }
                let mut v: PolyVec = crate::poly::zero_vec();
                for (k, part) in parts.iter().enumerate() {
                    let p = parse_poly_with(part, &env).map_err(|mut e| {
                        e.line = lno;
                        e.column += col(raw, part) - 1;
                        e
                    })?;
                    check_params(&p, params, lno, "brackets")?;
                    v[k] = p;
                }
                if i == j {
                    if v.iter().any(|c| !c.is_zero()) {
                        return malformed(lno, "[ei,ei] must be zero");
                    }
                    continue;
                }
                let (a, b, v) = if i < j { (i, j, v) } else { (j, i, [-&v[0], -&v[1], -&v[2]]) };
                if seen[a][b] {
                    return malformed(lno, format!("bracket [e{},e{}] given twice", a + 1, b + 1));
                }
                seen[a][b] = true;
                pres.set_bracket(a, b, v);
            }
            Section::Constraints | Section::Inequations => {
                let p = parse_poly_with(line, &env).map_err(|mut e| {
                    e.line = lno;
                    e.column += col(raw, line) - 1;
                    e
                })?;
                let ctx = if section == Section::Constraints { "constraints" } else { "inequations" };
                check_params(&p, params, lno, ctx)?;
                if section == Section::Constraints {
                    pres.constraints.push(p);
                } else {
                    pres.inequations.push(p);
                }
            }
            Section::Cases => {
                let (lhs, rhs) = match line.split_once('=') {
                    Some(x) => x,
                    None => return malformed(lno, "expected 'param = v1 | v2 ...'"),
                };
                let v = match Var::from_name(lhs.trim()) {
                    Some(v) if params.contains(v) => v,
                    _ => {
                        return Err(LieFormatError::OutsideParams {
                            line: lno,
                            symbol: lhs.trim().to_string(),
                            context: "cases",
                        })
                    }
                };
                let mut values = Vec::new();
                for alt in rhs.split('|') {
                    let p = parse_poly_with(alt, &Bindings::new()).map_err(|mut e| {
                        e.line = lno;
                        e
                    })?;
                    match p.as_constant() {
                        Some(c) => values.push(c),
                        None => return malformed(lno, "case values must be rational constants"),
                    }
                }
                pres.cases.push((v, values));
            }
            Section::Shorthands => {
                let (lhs, rhs) = match line.split_once('=') {
                    Some(x) => x,
                    None => return malformed(lno, "expected 'name = poly'"),
                };
                let key = lhs.trim();
                if key.is_empty()
                    || !key.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
                    || Var::from_name(key).is_some()
                {
                    return malformed(lno, format!("bad shorthand name '{key}'"));
                }
                let p = parse_poly_with(rhs, &env).map_err(|mut e| {
                    e.line = lno;
                    e.column += col(raw, rhs) - 1;
                    e
                })?;
                check_params(&p, params, lno, "shorthands")?;
                env.insert(key.to_string(), p.clone());
                pres.shorthands.push((key.to_string(), p));
            }
        }
    }
    pres.name = match name {
        Some(n) => n,
        None => return malformed(1, "missing 'name:' header"),
    };
    Ok(pres)
}

fn parse_pair(s: &str) -> Option<(usize, usize)> {
    let inner = s.strip_prefix('[')?.strip_suffix(']')?;
    let (a, b) = inner.split_once(',')?;
    let idx = |t: &str| -> Option<usize> {
        match t.trim() {
            "e1" => Some(0),
            "e2" => Some(1),
            "e3" => Some(2),
            _ => None,
        }
    };
    Some((idx(a)?, idx(b)?))
}

fn rational_text(c: &Rational) -> String {
    c.to_string()
}

/// Canonical text; parsing it back yields an equal presentation.
pub fn print_liealg(p: &LiePresentation) -> String {
    let mut s = format!("name: {}\n[params]\n", p.name);
    let names: Vec<String> = p.params.iter().map(|v| v.name()).collect();
    if !names.is_empty() {
        s.push_str(&names.join(" "));
        s.push('\n');
    }
    s.push_str("[brackets]\n");
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        let v = p.structure(i, j);
        s.push_str(&format!(
            "[e{},e{}] = ({}, {}, {})\n",
            i + 1,
            j + 1,
            v[0],
            v[1],
            v[2]
        ));
    }
    s.push_str("[constraints]\n");
    for c in &p.constraints {
        s.push_str(&format!("{c}\n"));
    }
    s.push_str("[inequations]\n");
    for c in &p.inequations {
        s.push_str(&format!("{c}\n"));
    }
    s.push_str("[cases]\n");
    for (v, values) in &p.cases {
        let vals: Vec<String> = values.iter().map(rational_text).collect();
        s.push_str(&format!("{v} = {}\n", vals.join(" | ")));
    }
    s.push_str("[shorthands]\n");
    for (n, q) in &p.shorthands {
        s.push_str(&format!("{n} = {q}\n"));
    }
    s
}
