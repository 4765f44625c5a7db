use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::monomial::{Monomial, MonomialOrder};
use super::var::{Var, VarSet};
use super::Rational;

/// Sparse multivariate polynomial with exact rational coefficients.
///
/// Terms are kept in a map keyed by monomial with zero coefficients never
/// stored, so structural equality is mathematical equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Rational>,
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::term(c, Monomial::one())
    }

    pub fn int(n: i64) -> Self {
        Self::constant(int(n))
    }

    pub fn var(v: Var) -> Self {
        Self::term(Rational::one(), Monomial::var(v))
    }

    pub fn term(c: Rational, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rational)>>(iter: I) -> Self {
        let mut p = Poly::zero();
        for (m, c) in iter {
            p.add_term(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The value of a constant polynomial (zero included).
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Terms sorted descending under `order`.
    pub fn sorted_terms(&self, order: MonomialOrder) -> Vec<(Monomial, Rational)> {
        let mut v: Vec<_> = self.terms.iter().map(|(m, c)| (m.clone(), c.clone())).collect();
        v.sort_by(|a, b| order.cmp(&b.0, &a.0));
        v
    }

    pub fn leading_term(&self, order: MonomialOrder) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().max_by(|a, b| order.cmp(a.0, b.0))
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::total_degree).max().unwrap_or(0)
    }

    pub fn degree_in(&self, v: Var) -> u16 {
        self.terms.keys().map(|m| m.exponent(v)).max().unwrap_or(0)
    }

    pub fn vars(&self) -> VarSet {
        self.terms.keys().fold(VarSet::empty(), |s, m| s.union(m.vars()))
    }

    /// True when every term has total degree `d` in the variables of `set`
    /// and no other variables occur.
    pub fn is_form_of_degree(&self, set: VarSet, d: u32) -> bool {
        !self.is_zero()
            && self.vars().is_subset(set)
            && self.terms.keys().all(|m| m.total_degree() == d)
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    pub fn mul_term(&self, c: &Rational, m: &Monomial) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(k, x)| (k.mul(m), x * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Rescales so the leading coefficient under `order` is one.
    pub fn monic(&self, order: MonomialOrder) -> Poly {
        match self.leading_term(order) {
            None => Poly::zero(),
            Some((_, c)) => self.scale(&c.recip()),
        }
    }

    /// Simultaneous substitution of symbols by polynomials.
    pub fn substitute(&self, bindings: &HashMap<Var, Poly>) -> Poly {
        if bindings.is_empty() {
            return self.clone();
        }
        let mut powers: HashMap<(Var, u16), Poly> = HashMap::new();
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut rest = Vec::with_capacity(m.exponents().len());
            let mut factor = Poly::constant(c.clone());
            for (i, &e) in m.exponents().iter().enumerate() {
                let v = Var(i as u16);
                match bindings.get(&v) {
                    Some(value) if e > 0 => {
                        let pw = powers.entry((v, e)).or_insert_with(|| value.pow(e as u32));
                        factor = &factor * pw;
                        rest.push(0);
                    }
                    _ => rest.push(e),
                }
            }
            out = &out + &factor.mul_term(&Rational::one(), &Monomial::from_exponents(rest));
        }
        out
    }

    pub fn substitute_one(&self, v: Var, value: &Poly) -> Poly {
        self.substitute(&HashMap::from([(v, value.clone())]))
    }

    /// Decomposes as `sum_k coeffs[k] * v^k`.
    pub fn coefficients_in(&self, v: Var) -> Vec<Poly> {
        let mut out = vec![Poly::zero(); self.degree_in(v) as usize + 1];
        for (m, c) in &self.terms {
            let (e, rest) = m.split_var(v);
            out[e as usize].add_term(rest, c.clone());
        }
        out
    }

    pub fn eval<T, F>(&self, mut value: F) -> T
    where
        T: Clone + Zero + One + Add<Output = T> + Mul<Output = T>,
        F: FnMut(Var) -> T,
        T: From<Rational>,
    {
        let mut acc = T::zero();
        for (m, c) in &self.terms {
            let mut t = T::from(c.clone());
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let x = value(Var(i as u16));
                for _ in 0..e {
                    t = t * x.clone();
                }
            }
            acc = acc + t;
        }
        acc
    }

    pub fn eval_f64(&self, value: impl Fn(Var) -> f64) -> f64 {
        use num_traits::ToPrimitive;
        self.terms
            .iter()
            .map(|(m, c)| {
                let mut t = c.to_f64().unwrap_or(f64::NAN);
                for (i, &e) in m.exponents().iter().enumerate() {
                    if e > 0 {
                        t *= value(Var(i as u16)).powi(e as i32);
                    }
                }
                t
            })
            .sum()
    }

    /// `Some(c)` with `self == c * other`, `c != 0`.  Two zeros compare with
    /// scalar one.
    pub fn equal_up_to_scalar(&self, other: &Poly) -> Option<Rational> {
        if self.is_zero() || other.is_zero() {
            return (self.is_zero() && other.is_zero()).then(Rational::one);
        }
        if self.terms.len() != other.terms.len() {
            return None;
        }
        let (m0, a0) = self.terms.iter().next().unwrap();
        let b0 = other.terms.get(m0)?;
        let c = a0 / b0;
        for (m, a) in &self.terms {
            let b = other.terms.get(m)?;
            if *a != &c * b {
                return None;
            }
        }
        Some(c)
    }

    /// Exact division by a single divisor; `None` if `d` does not divide.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        let (q, r) = super::reduce::divide(self, std::slice::from_ref(d), MonomialOrder::Grevlex);
        r.is_zero().then(|| q.into_iter().next().unwrap())
    }

    /// Canonical text in the crate grammar with terms in grevlex-descending order.
    pub fn to_text(&self) -> String {
        self.to_text_in(MonomialOrder::Grevlex)
    }

    pub fn to_text_in(&self, order: MonomialOrder) -> String {
        let terms = self.sorted_terms(order);
        if terms.is_empty() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (k, (m, c)) in terms.iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if k == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let mono = monomial_text(m);
            match (mono.is_empty(), a.is_one()) {
                (true, _) => s.push_str(&a.to_string()),
                (false, true) => s.push_str(&mono),
                (false, false) => {
                    s.push_str(&a.to_string());
                    s.push('*');
                    s.push_str(&mono);
                }
            }
        }
        s
    }
}

fn monomial_text(m: &Monomial) -> String {
    let mut parts = Vec::new();
    for (i, &e) in m.exponents().iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(Var(i as u16).name()),
            _ => parts.push(format!("{}^{}", Var(i as u16).name(), e)),
        }
    }
    parts.join("*")
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({})", self.to_text())
    }
}

impl From<Var> for Poly {
    fn from(v: Var) -> Self {
        Poly::var(v)
    }
}

impl From<Rational> for Poly {
    fn from(c: Rational) -> Self {
        Poly::constant(c)
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let (mut out, other) = if self.terms.len() >= rhs.terms.len() {
            (self.clone(), rhs)
        } else {
            (rhs.clone(), self)
        };
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $f:ident),*) => {$(
        impl $tr<Poly> for Poly {
            type Output = Poly;
            fn $f(self, rhs: Poly) -> Poly { (&self).$f(&rhs) }
        }
        impl<'a> $tr<&'a Poly> for Poly {
            type Output = Poly;
            fn $f(self, rhs: &Poly) -> Poly { (&self).$f(rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

impl Zero for Poly {
    fn zero() -> Self {
        Poly::zero()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for Poly {
    fn one() -> Self {
        Poly::one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a() -> Poly {
        Poly::var(Var::ALPHA)
    }
    fn b() -> Poly {
        Poly::var(Var::BETA)
    }

    #[test]
    fn cancellation_and_difference_of_squares() {
        assert_eq!(&(&a() + &b()) + &(&a() - &b()), a().scale(&int(2)));
        assert_eq!(&(&a() + &b()) * &(&a() - &b()), &a().pow(2) - &b().pow(2));
    }

    #[test]
    fn substitution() {
        let lbar = Poly::var(Var::LBAR);
        let p = &(&a().pow(2) + &(&lbar * &a())) + &lbar.pow(2);
        let r = p.substitute(&HashMap::from([(Var::ALPHA, -&lbar)]));
        assert_eq!(r, lbar.pow(2));
        assert_eq!(p.substitute(&HashMap::new()), p);
        // simultaneous, not sequential
        let swap = HashMap::from([(Var::ALPHA, b()), (Var::BETA, a())]);
        assert_eq!((&a() - &b()).substitute(&swap), &b() - &a());
    }

    #[test]
    fn scalar_equivalence() {
        let al2 = &a() * &Poly::var(Var::L2);
        let half = al2.scale(&rat(-1, 2));
        assert_eq!(half.equal_up_to_scalar(&al2), Some(rat(-1, 2)));
        assert_eq!(Poly::zero().equal_up_to_scalar(&a()), None);
        assert_eq!(a().scale(&int(2)).equal_up_to_scalar(&a()), Some(int(2)));
        assert_eq!(Poly::zero().equal_up_to_scalar(&Poly::zero()), Some(int(1)));
        assert_eq!((&a() + &b()).equal_up_to_scalar(&(&a() - &b())), None);
    }

    #[test]
    fn printing() {
        let p = &(&a().pow(2).scale(&int(-2)) - &b().pow(2)) + &Poly::var(Var::LAM).scale(&int(2));
        assert_eq!(p.to_text(), "-2*alpha^2 - beta^2 + 2*lam");
        assert_eq!(Poly::zero().to_text(), "0");
        assert_eq!(Poly::constant(rat(-3, 4)).to_text(), "-3/4");
        assert_eq!(a().scale(&rat(1, 2)).to_text(), "1/2*alpha");
    }

    #[test]
    fn exact_division() {
        let p = &(&a() * &b()) * &(&a() + &b());
        assert_eq!(p.div_exact(&(&a() + &b())), Some(&a() * &b()));
        assert_eq!(p.div_exact(&(&a() - &b())), None);
    }

    #[test]
    fn univariate_coefficients() {
        let p = &(&a().pow(2) * &b()) + &(&b().scale(&int(3)) + &a());
        let cs = p.coefficients_in(Var::ALPHA);
        assert_eq!(cs, vec![b().scale(&int(3)), Poly::one(), b()]);
    }
}
