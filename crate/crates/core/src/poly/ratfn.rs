use std::collections::HashMap;
use std::fmt;

use super::poly::Poly;
use super::var::Var;
use super::Rational;

/// A quotient of polynomials, kept unsimplified.
///
/// Only used for solution families and parsed expressions with symbolic
/// denominators; no gcd cancellation is attempted.
#[derive(Clone, PartialEq, Eq)]
pub struct RatFn {
    pub num: Poly,
    pub den: Poly,
}

impl RatFn {
    pub fn from_poly(p: Poly) -> Self {
        RatFn { num: p, den: Poly::one() }
    }

    pub fn new(num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let mut r = RatFn { num, den };
        r.normalize();
        r
    }

    fn normalize(&mut self) {
        if let Some(c) = self.den.as_constant() {
            self.num = self.num.scale(&c.recip());
            self.den = Poly::one();
        } else if self.num.is_zero() {
            self.den = Poly::one();
        } else if let Some(q) = self.num.div_exact(&self.den) {
            self.num = q;
            self.den = Poly::one();
        }
    }

    /// The polynomial value when the denominator is constant.
    pub fn as_poly(&self) -> Option<Poly> {
        self.den.as_constant().map(|c| self.num.scale(&c.recip()))
    }

    pub fn add(&self, o: &RatFn) -> RatFn {
        if self.den == o.den {
            return RatFn::new(&self.num + &o.num, self.den.clone());
        }
        RatFn::new(&(&self.num * &o.den) + &(&o.num * &self.den), &self.den * &o.den)
    }

    pub fn neg(&self) -> RatFn {
        RatFn { num: -&self.num, den: self.den.clone() }
    }

    pub fn sub(&self, o: &RatFn) -> RatFn {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &RatFn) -> RatFn {
        RatFn::new(&self.num * &o.num, &self.den * &o.den)
    }

    pub fn div(&self, o: &RatFn) -> Option<RatFn> {
        if o.num.is_zero() {
            return None;
        }
        Some(RatFn::new(&self.num * &o.den, &self.den * &o.num))
    }

    pub fn pow(&self, e: u32) -> RatFn {
        RatFn::new(self.num.pow(e), self.den.pow(e))
    }

    pub fn scale(&self, c: &Rational) -> RatFn {
        RatFn::new(self.num.scale(c), self.den.clone())
    }

    /// Substitutes `v := value` into both numerator and denominator.
    pub fn substitute(&self, v: Var, value: &RatFn) -> RatFn {
        let num = substitute_poly(&self.num, v, value);
        let den = substitute_poly(&self.den, v, value);
        num.div(&den).expect("denominator vanished under substitution")
    }
}

/// Substitutes a rational function into a polynomial: `p(v := n/d)`.
pub fn substitute_poly(p: &Poly, v: Var, value: &RatFn) -> RatFn {
    let coeffs = p.coefficients_in(v);
    let d = coeffs.len().saturating_sub(1) as u32;
    if d == 0 {
        return RatFn::from_poly(p.clone());
    }
    let mut num = Poly::zero();
    for (k, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let k = k as u32;
        num = &num + &(&(c * &value.num.pow(k)) * &value.den.pow(d - k));
    }
    RatFn::new(num, value.den.pow(d))
}

/// Substitutes several polynomials at once into a rational function.
pub fn substitute_all(r: &RatFn, bindings: &HashMap<Var, Poly>) -> RatFn {
    let num = r.num.substitute(bindings);
    let den = r.den.substitute(bindings);
    RatFn::new(num, den)
}

impl fmt::Display for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFn({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::int;

    #[test]
    fn composition_clears_denominators() {
        let b = Poly::var(Var::BETA);
        let d = Poly::var(Var::DELTA);
        // gamma := beta*(beta^2 + delta^2)/delta^2
        let gamma = RatFn::new(&b * &(&b.pow(2) + &d.pow(2)), d.pow(2));
        // gamma*delta^2/beta - beta^2 - delta^2 == 0
        let expr = RatFn::new(
            &(&Poly::var(Var::GAMMA) * &d.pow(2)) - &(&b.pow(3) + &(&b * &d.pow(2))),
            b.clone(),
        );
        let r = expr.substitute(Var::GAMMA, &gamma);
        assert!(r.num.is_zero());
    }

    #[test]
    fn constant_denominators_fold() {
        let r = RatFn::new(Poly::var(Var::ALPHA), Poly::int(2));
        assert_eq!(r.as_poly(), Some(Poly::var(Var::ALPHA).scale(&crate::poly::rat(1, 2))));
        let s = RatFn::new(Poly::var(Var::ALPHA).scale(&int(3)), Poly::var(Var::ALPHA));
        assert_eq!(s.as_poly(), Some(Poly::int(3)));
    }
}
