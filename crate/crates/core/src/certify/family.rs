//! Verification of solution families against soliton systems.
//!
//! A family fixes some symbols by rational functions of the others and
//! restricts the rest by polynomial equalities and inequations.  It is
//! accepted when (a) every equation of the system vanishes on the family,
//! shown exactly by reduction modulo the equalities or, failing that, by a
//! Nullstellensatz certificate that uses the inequations, and (b) an exact
//! point of the family satisfying every side condition is found.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use super::qsqrt::QSqrt;
use crate::groebner::{groebner_basis, GroebnerLimits};
use crate::poly::{parse_poly_with, parse_ratfn, reduce, Bindings, MonomialOrder, Poly, RatFn, Rational, Var, VarSet};
use crate::soliton::{SolitonSystem, EQUATION_LABELS};

#[derive(Clone, Debug, PartialEq)]
pub struct SolutionFamily {
    pub label: String,
    /// `var := value`, triangular after substitution closure.
    pub assignments: Vec<(Var, RatFn)>,
    /// Polynomials required to vanish.
    pub equalities: Vec<Poly>,
    /// Polynomials required to be nonzero.
    pub inequations: Vec<Poly>,
}

#[derive(Clone, Debug, Error, PartialEq)]
pub enum FamilyError {
    #[error("family {label}: cannot parse `{text}`: {message}")]
    Parse { label: String, text: String, message: String },
    #[error("family {label}: `{var}` is assigned twice")]
    Reassigned { label: String, var: Var },
    #[error("family {label}: assignments are cyclic through `{var}`")]
    Cyclic { label: String, var: Var },
    #[error("family {label}: `{var}` is not a symbol of the system")]
    Foreign { label: String, var: Var },
}

impl SolutionFamily {
    /// Builds a family from text: assignments `var = expr`, equalities
    /// `lhs = rhs` (or `expr`, meaning `expr = 0`) and nonzero expressions.
    pub fn parse(label: &str, assign: &[String], equal: &[String], nonzero: &[String], env: &Bindings) -> Result<Self, FamilyError> {
        let err = |text: &str, message: String| FamilyError::Parse { label: label.to_string(), text: text.to_string(), message };
        let poly = |text: &str| -> Result<Poly, FamilyError> {
            let src = match text.split_once('=') {
                Some((l, r)) => format!("({l}) - ({r})"),
                None => text.to_string(),
            };
            parse_poly_with(&src, env).map_err(|e| err(text, e.to_string()))
        };
        let mut assignments: Vec<(Var, RatFn)> = Vec::new();
        for a in assign {
            let (lhs, rhs) = a.split_once('=').ok_or_else(|| err(a, "expected `var = expr`".into()))?;
            let var = Var::from_name(lhs.trim()).ok_or_else(|| err(a, format!("`{}` is not a symbol", lhs.trim())))?;
            if assignments.iter().any(|(v, _)| *v == var) {
                return Err(FamilyError::Reassigned { label: label.to_string(), var });
            }
            let value = parse_ratfn(rhs, env).map_err(|e| err(a, e.to_string()))?;
            assignments.push((var, value));
        }
        Ok(SolutionFamily {
            label: label.to_string(),
            assignments,
            equalities: equal.iter().map(|e| poly(e)).collect::<Result<_, _>>()?,
            inequations: nonzero.iter().map(|e| poly(e)).collect::<Result<_, _>>()?,
        })
    }

    pub fn assigned(&self) -> VarSet {
        self.assignments.iter().map(|(v, _)| *v).collect()
    }

    /// Substitutes fixed values of case parameters everywhere.
    pub fn fix(&self, fix: &[(Var, Rational)]) -> SolutionFamily {
        let b: HashMap<Var, Poly> = fix.iter().map(|(v, c)| (*v, Poly::constant(c.clone()))).collect();
        let rf = |r: &RatFn| RatFn::new(r.num.substitute(&b), r.den.substitute(&b));
        SolutionFamily {
            label: self.label.clone(),
            assignments: self.assignments.iter().map(|(v, r)| (*v, rf(r))).collect(),
            equalities: self.equalities.iter().map(|p| p.substitute(&b)).filter(|p| !p.is_zero()).collect(),
            inequations: self.inequations.iter().map(|p| p.substitute(&b)).collect(),
        }
    }

    /// Assignments with every assigned symbol eliminated from the values.
    pub fn resolved(&self) -> Result<Vec<(Var, RatFn)>, FamilyError> {
        let assigned = self.assigned();
        let mut values: Vec<(Var, RatFn)> = self.assignments.clone();
        for _ in 0..=values.len() {
            let done = values.iter().all(|(_, r)| VarSet(r.num.vars().union(r.den.vars()).0 & assigned.0).is_empty());
            if done {
                return Ok(values);
            }
            let snapshot = values.clone();
            for (_, r) in values.iter_mut() {
                for (v, val) in &snapshot {
                    *r = r.substitute(*v, val);
                }
            }
        }
        let var = values
            .iter()
            .find(|(_, r)| !VarSet(r.num.vars().union(r.den.vars()).0 & assigned.0).is_empty())
            .map(|(v, _)| *v)
            .expect("unresolved assignment exists");
        Err(FamilyError::Cyclic { label: self.label.clone(), var })
    }
}

/// Applies resolved assignments to a polynomial.
pub fn substitute_family(p: &Poly, resolved: &[(Var, RatFn)]) -> RatFn {
    resolved.iter().fold(RatFn::from_poly(p.clone()), |r, (v, val)| r.substitute(*v, val))
}

/// How an equation's residual was shown to vanish on the family.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ResidualMethod {
    /// Zero after substitution alone.
    Identically,
    /// Reduces to zero modulo a Gröbner basis of the equalities.
    Reduction,
    /// `1 ∈ ⟨equalities, 1 - t·(product of inequations), 1 - s·residual⟩`.
    Nullstellensatz,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EquationCheck {
    pub entry: &'static str,
    /// Numerator of the equation after substitution.
    pub residual: Poly,
    /// Normal form modulo the equalities.
    pub normal_form: Poly,
    /// `None` when the residual could not be shown to vanish.
    pub method: Option<ResidualMethod>,
}

/// A point of the family, with exact coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    pub point: Vec<(Var, QSqrt)>,
}

impl Witness {
    pub fn value(&self, v: Var) -> Option<&QSqrt> {
        self.point.iter().find(|(w, _)| *w == v).map(|(_, x)| x)
    }

    pub fn is_rational(&self) -> bool {
        self.point.iter().all(|(_, x)| x.is_rational())
    }

    pub fn to_text(&self) -> String {
        self.point.iter().map(|(v, x)| format!("{v}={x}")).collect::<Vec<_>>().join(", ")
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FamilyReport {
    pub label: String,
    pub checks: Vec<EquationCheck>,
    /// Denominators that are not products of declared nonzero polynomials.
    pub bad_denominators: Vec<Poly>,
    pub witness: Option<Witness>,
    /// Structural problem that prevented checking.
    pub error: Option<String>,
}

impl FamilyReport {
    pub fn residuals_vanish(&self) -> bool {
        self.error.is_none() && self.bad_denominators.is_empty() && self.checks.iter().all(|c| c.method.is_some())
    }

    pub fn passed(&self) -> bool {
        self.residuals_vanish() && self.witness.is_some()
    }

    /// Description of the first failed check.
    pub fn first_failure(&self) -> Option<String> {
        if let Some(e) = &self.error {
            return Some(e.clone());
        }
        if let Some(d) = self.bad_denominators.first() {
            return Some(format!("denominator `{}` is not declared nonzero", d.to_text()));
        }
        if let Some(c) = self.checks.iter().find(|c| c.method.is_none()) {
            return Some(format!("entry {} leaves residual `{}`", c.entry, c.normal_form.to_text()));
        }
        self.witness.is_none().then(|| "no witness point found".to_string())
    }
}

/// Settings of the witness search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WitnessSearch {
    pub seed: u64,
    pub attempts: usize,
    /// Numerators are drawn from `[-max_num, max_num]`.
    pub max_num: i64,
    /// Denominators are drawn from `[1, max_den]`.
    pub max_den: i64,
}

impl Default for WitnessSearch {
    fn default() -> Self {
        WitnessSearch { seed: 20_240_601, attempts: 10_000, max_num: 10, max_den: 10 }
    }
}

/// `d` is a constant or a product of members of `allowed`.
fn is_declared_product(d: &Poly, allowed: &[Poly]) -> bool {
    let mut d = d.clone();
    'outer: loop {
        if d.as_constant().is_some() {
            return true;
        }
        for q in allowed.iter().filter(|q| q.as_constant().is_none()) {
            if let Some(x) = d.div_exact(q) {
                d = x;
                continue 'outer;
            }
        }
        return false;
    }
}

fn fresh_vars(used: VarSet, k: usize) -> Vec<Var> {
    (1..).map(Var::aux).filter(|v| !used.contains(*v)).take(k).collect()
}

pub fn verify_family(system: &SolitonSystem, family: &SolutionFamily, search: WitnessSearch, limits: GroebnerLimits) -> FamilyReport {
    let mut report = FamilyReport {
        label: family.label.clone(),
        checks: Vec::new(),
        bad_denominators: Vec::new(),
        witness: None,
        error: None,
    };
    let symbols = system.symbols();
    let mentioned = family
        .assignments
        .iter()
        .flat_map(|(v, r)| [VarSet::from_iter([*v]), r.num.vars(), r.den.vars()])
        .chain(family.equalities.iter().chain(&family.inequations).map(Poly::vars))
        .fold(VarSet::empty(), VarSet::union);
    if let Some(var) = mentioned.iter().find(|v| !symbols.contains(*v)) {
        report.error = Some(FamilyError::Foreign { label: family.label.clone(), var }.to_string());
        return report;
    }
    let resolved = match family.resolved() {
        Ok(r) => r,
        Err(e) => {
            report.error = Some(e.to_string());
            return report;
        }
    };
    let sub = |p: &Poly| substitute_family(p, &resolved);
    // side conditions restated in the free symbols
    let mut allowed: Vec<Poly> = Vec::new();
    for q in family.inequations.iter().chain(&system.inequations) {
        let r = sub(q);
        allowed.push(r.num.clone());
    }
    let mut equalities: Vec<Poly> = family.equalities.iter().chain(&system.constraints).map(|p| sub(p).num).filter(|p| !p.is_zero()).collect();
    equalities.dedup();
    for (_, r) in &resolved {
        if !is_declared_product(&r.den, &allowed) {
            report.bad_denominators.push(r.den.clone());
        }
    }
    let basis = match groebner_basis(&equalities, MonomialOrder::Grevlex, limits) {
        Ok(b) => b,
        Err(e) => {
            report.error = Some(e.to_string());
            return report;
        }
    };
    if basis == [Poly::one()] {
        report.error = Some("the equalities are inconsistent".into());
        return report;
    }
    let product = allowed.iter().fold(Poly::one(), |acc, q| &acc * q);
    for (entry, e) in EQUATION_LABELS.iter().zip(&system.equations) {
        let r = sub(e);
        if !is_declared_product(&r.den, &allowed) && !report.bad_denominators.contains(&r.den) {
            report.bad_denominators.push(r.den.clone());
        }
        let normal_form = reduce(&r.num, &basis, MonomialOrder::Grevlex);
        let method = if r.num.is_zero() {
            Some(ResidualMethod::Identically)
        } else if normal_form.is_zero() {
            Some(ResidualMethod::Reduction)
        } else {
            let used = equalities.iter().chain([&product, &r.num]).fold(VarSet::empty(), |s, p| s.union(p.vars()));
            let ts = fresh_vars(used, 2);
            let mut gens = equalities.clone();
            gens.push(&Poly::one() - &(&Poly::var(ts[0]) * &product));
            gens.push(&Poly::one() - &(&Poly::var(ts[1]) * &r.num));
            match groebner_basis(&gens, MonomialOrder::Grevlex, limits) {
                Ok(b) if b == [Poly::one()] => Some(ResidualMethod::Nullstellensatz),
                _ => None,
            }
        };
        report.checks.push(EquationCheck { entry, residual: r.num, normal_form, method });
    }
    if report.residuals_vanish() {
        report.witness = find_witness(system, family, &resolved, &equalities, search);
    }
    report
}

/// Witness search on its own, without the residual checks.
pub fn find_witness_for(system: &SolitonSystem, family: &SolutionFamily, search: WitnessSearch) -> Result<Option<Witness>, FamilyError> {
    let resolved = family.resolved()?;
    let mut equalities: Vec<Poly> = family
        .equalities
        .iter()
        .chain(&system.constraints)
        .map(|p| substitute_family(p, &resolved).num)
        .filter(|p| !p.is_zero())
        .collect();
    equalities.dedup();
    Ok(find_witness(system, family, &resolved, &equalities, search))
}

fn is_rational_square(r: &Rational) -> bool {
    use num_traits::Signed;
    let sq = |n: &num_bigint::BigInt| !n.is_negative() && n.sqrt().pow(2) == *n;
    sq(r.numer()) && sq(r.denom())
}

/// Exact reason why a family has no rational point, if one of two simple
/// certificates applies: a binary quadratic form `a x^2 + b xy + c y^2` in
/// the ideal of the equalities, with `x` declared nonzero and `b^2 - 4ac`
/// not a rational square.  Then `y/x` is a root of an irreducible
/// quadratic.
pub fn rational_obstruction(system: &SolitonSystem, family: &SolutionFamily, limits: GroebnerLimits) -> Option<String> {
    let resolved = family.resolved().ok()?;
    let sub = |p: &Poly| substitute_family(p, &resolved).num;
    let equalities: Vec<Poly> = family.equalities.iter().chain(&system.constraints).map(sub).filter(|p| !p.is_zero()).collect();
    let nonzero: Vec<Var> = family
        .inequations
        .iter()
        .chain(&system.inequations)
        .map(sub)
        .filter_map(|q| {
            let vars: Vec<Var> = q.vars().iter().collect();
            (vars.len() == 1 && q.is_form_of_degree(q.vars(), 1)).then(|| vars[0])
        })
        .collect();
    let basis = groebner_basis(&equalities, MonomialOrder::Grevlex, limits).ok()?;
    for g in basis.iter().chain(&equalities) {
        let vars: Vec<Var> = g.vars().iter().collect();
        if vars.len() != 2 || !g.is_form_of_degree(g.vars(), 2) {
            continue;
        }
        let (x, y) = (vars[0], vars[1]);
        let m = |a: u16, b: u16| {
            let mut e = vec![0u16; x.index().max(y.index()) + 1];
            e[x.index()] = a;
            e[y.index()] = b;
            g.coefficient(&crate::poly::Monomial::from_exponents(e))
        };
        let (a, b, c) = (m(2, 0), m(1, 1), m(0, 2));
        let disc = &b * &b - Rational::from_integer(4.into()) * &a * &c;
        if is_rational_square(&disc) {
            continue;
        }
        if let Some(v) = nonzero.iter().find(|v| **v == x || **v == y) {
            let w = if *v == x { y } else { x };
            return Some(format!(
                "`{} = 0` with {v} != 0 makes {w}/{v} a root of a quadratic with discriminant {disc}, which is not a rational square",
                g.to_text()
            ));
        }
    }
    None
}

fn eval(p: &Poly, values: &HashMap<Var, QSqrt>) -> Option<QSqrt> {
    if p.vars().iter().any(|v| !values.contains_key(&v)) {
        return None;
    }
    Some(p.eval(|v| values[&v].clone()))
}

fn random_rational(rng: &mut ChaCha8Rng, s: &WitnessSearch) -> Rational {
    Rational::new(rng.gen_range(-s.max_num..=s.max_num).into(), rng.gen_range(1..=s.max_den).into())
}

/// Seeded search for an exact point of the family.
///
/// The first half of the attempts only accepts rational points.  Free symbols are visited in random order; a symbol is solved for when
/// some equality has become univariate in it (linear, or quadratic with
/// rational coefficients), and sampled otherwise.
pub fn find_witness(
    system: &SolitonSystem,
    family: &SolutionFamily,
    resolved: &[(Var, RatFn)],
    equalities: &[Poly],
    search: WitnessSearch,
) -> Option<Witness> {
    let label_seed = family.label.bytes().fold(0u64, |h, b| h.wrapping_mul(31).wrapping_add(b as u64));
    let mut rng = ChaCha8Rng::seed_from_u64(search.seed ^ label_seed);
    let assigned = family.assigned();
    let free: Vec<Var> = system.symbols().iter().filter(|v| !assigned.contains(*v)).collect();
    // rational points first; one quadratic extension only if none is found
    let phases = search.attempts.div_ceil(2);
    'attempt: for n in 0..search.attempts {
        let rational_only = n < phases;
        let mut order = free.clone();
        order.shuffle(&mut rng);
        let mut values: HashMap<Var, QSqrt> = HashMap::new();
        let mut ext = 0i64;
        for &x in &order {
            let mut chosen: Option<QSqrt> = None;
            for e in equalities.iter().filter(|e| e.vars().contains(x)) {
                if e.vars().iter().any(|v| v != x && !values.contains_key(&v)) {
                    continue;
                }
                let mut c: Vec<QSqrt> = e.coefficients_in(x).iter().map(|p| eval(p, &values)).collect::<Option<_>>()?;
                while c.last().is_some_and(num_traits::Zero::is_zero) {
                    c.pop();
                }
                let root = match c.len() {
                    0 => continue,
                    1 => continue 'attempt,
                    2 => -(c[0].clone() * c[1].recip()?),
                    3 if c.iter().all(QSqrt::is_rational) => {
                        let roots = QSqrt::quadratic_roots(&c[2].a, &c[1].a, &c[0].a);
                        let Some(roots) = roots else { continue 'attempt };
                        let r = roots[rng.gen_range(0..2)].clone();
                        if r.d != 0 && (rational_only || (ext != 0 && r.d != ext)) {
                            continue 'attempt;
                        }
                        r
                    }
                    _ => continue 'attempt,
                };
                chosen = Some(root);
                break;
            }
            let value = chosen.unwrap_or_else(|| QSqrt::rational(random_rational(&mut rng, &search)));
            if value.d != 0 {
                ext = value.d;
            }
            values.insert(x, value);
            // prune on equalities that are now fully evaluated
            for e in equalities {
                if let Some(v) = eval(e, &values) {
                    if !num_traits::Zero::is_zero(&v) {
                        continue 'attempt;
                    }
                }
            }
        }
        for (v, r) in resolved {
            let den = eval(&r.den, &values)?.recip();
            let Some(den) = den else { continue 'attempt };
            values.insert(*v, eval(&r.num, &values)? * den);
        }
        let zero = |p: &Poly| eval(p, &values).is_some_and(|x| num_traits::Zero::is_zero(&x));
        let nonzero = |p: &Poly| eval(p, &values).is_some_and(|x| !num_traits::Zero::is_zero(&x));
        let ok = system.equations.iter().all(zero)
            && system.constraints.iter().all(zero)
            && family.equalities.iter().all(zero)
            && family.inequations.iter().chain(&system.inequations).all(nonzero);
        if ok {
            let mut point: Vec<(Var, QSqrt)> = values.into_iter().collect();
            point.sort_by_key(|(v, _)| *v);
            return Some(Witness { point });
        }
    }
    None
}
