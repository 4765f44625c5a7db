//! Exact numbers `a + b·√d` with rational `a`, `b` and squarefree `d`.
//!
//! Witness points for families such as `alpha^2 = beta^2/2` have no
//! rational coordinates; one quadratic extension suffices for all of them.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::poly::Rational;

/// `a + b·√d`; `d == 0` marks a rational number (and then `b == 0`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSqrt {
    pub a: Rational,
    pub b: Rational,
    pub d: i64,
}

impl QSqrt {
    pub fn rational(a: Rational) -> Self {
        QSqrt { a, b: Rational::zero(), d: 0 }
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    fn normalized(mut self) -> Self {
        if self.b.is_zero() {
            self.d = 0;
        }
        self
    }

    /// The common extension of two operands.
    fn field(&self, o: &QSqrt) -> i64 {
        match (self.d, o.d) {
            (0, d) | (d, 0) => d,
            (d, e) => {
                assert_eq!(d, e, "mixed quadratic extensions");
                d
            }
        }
    }

    pub fn recip(&self) -> Option<QSqrt> {
        let norm = &self.a * &self.a - &self.b * &self.b * Rational::from_integer(self.d.into());
        if norm.is_zero() {
            return None;
        }
        Some(QSqrt { a: &self.a / &norm, b: -&self.b / &norm, d: self.d }.normalized())
    }

    /// Sign, exact: `a + b√d` compared with zero.
    pub fn signum(&self) -> i32 {
        let sa = sign(&self.a);
        let sb = sign(&self.b);
        if sb == 0 || sa == sb {
            return if sa != 0 { sa } else { sb };
        }
        if sa == 0 {
            return sb;
        }
        // opposite signs: compare a^2 with b^2 d
        let lhs = &self.a * &self.a;
        let rhs = &self.b * &self.b * Rational::from_integer(self.d.into());
        if lhs > rhs {
            sa
        } else {
            sb
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.a.to_f64().unwrap_or(f64::NAN) + self.b.to_f64().unwrap_or(f64::NAN) * (self.d as f64).sqrt()
    }

    /// Both roots of `c2 x^2 + c1 x + c0` with rational coefficients and
    /// `c2 != 0`, or `None` if they are not real or need too large a radicand.
    pub fn quadratic_roots(c2: &Rational, c1: &Rational, c0: &Rational) -> Option<[QSqrt; 2]> {
        let four = Rational::from_integer(4.into());
        let disc = c1 * c1 - four * c2 * c0;
        if disc.is_negative() {
            return None;
        }
        let two_a = c2 * Rational::from_integer(2.into());
        if disc.is_zero() {
            let x = QSqrt::rational(-c1 / &two_a);
            return Some([x.clone(), x]);
        }
        // sqrt(p/q) = sqrt(p q) / q = s sqrt(f) / q
        let pq = disc.numer() * disc.denom();
        let (s, f) = square_split(&pq)?;
        let root = Rational::new(s, disc.denom().clone());
        let base = -c1 / &two_a;
        let (scale, d) = if f == 1 { (Rational::zero(), 0) } else { (&root / &two_a, f) };
        let shift = if f == 1 { &root / &two_a } else { Rational::zero() };
        Some([
            QSqrt { a: &base + &shift, b: scale.clone(), d }.normalized(),
            QSqrt { a: &base - &shift, b: -scale, d }.normalized(),
        ])
    }
}

fn sign(r: &Rational) -> i32 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}

/// `n = s^2 f` with `f` squarefree, by trial division; `None` for very
/// large `n`.
fn square_split(n: &BigInt) -> Option<(BigInt, i64)> {
    let mut n = n.to_i64().filter(|n| *n < 1 << 40)?;
    let mut s = 1i64;
    let mut p = 2i64;
    while p * p <= n {
        while n % (p * p) == 0 {
            n /= p * p;
            s *= p;
        }
        p += 1;
    }
    Some((s.into(), n))
}

impl From<Rational> for QSqrt {
    fn from(a: Rational) -> Self {
        QSqrt::rational(a)
    }
}

impl Add for QSqrt {
    type Output = QSqrt;
    fn add(self, o: QSqrt) -> QSqrt {
        let d = self.field(&o);
        QSqrt { a: self.a + o.a, b: self.b + o.b, d }.normalized()
    }
}

impl Neg for QSqrt {
    type Output = QSqrt;
    fn neg(self) -> QSqrt {
        QSqrt { a: -self.a, b: -self.b, d: self.d }
    }
}

impl Sub for QSqrt {
    type Output = QSqrt;
    fn sub(self, o: QSqrt) -> QSqrt {
        self + (-o)
    }
}

impl Mul for QSqrt {
    type Output = QSqrt;
    fn mul(self, o: QSqrt) -> QSqrt {
        let d = self.field(&o);
        let dd = Rational::from_integer(d.into());
        QSqrt {
            a: &self.a * &o.a + &self.b * &o.b * dd,
            b: &self.a * &o.b + &self.b * &o.a,
            d,
        }
        .normalized()
    }
}

impl Zero for QSqrt {
    fn zero() -> Self {
        QSqrt::rational(Rational::zero())
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

impl One for QSqrt {
    fn one() -> Self {
        QSqrt::rational(Rational::one())
    }
}

impl fmt::Display for QSqrt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        if !self.a.is_zero() {
            write!(f, "{} + ", self.a)?;
        }
        write!(f, "{}*sqrt({})", self.b, self.d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    fn r(n: i64, d: i64) -> QSqrt {
        QSqrt::rational(rat(n, d))
    }

    #[test]
    fn roots_of_x2_minus_half() {
        let [x, y] = QSqrt::quadratic_roots(&rat(1, 1), &rat(0, 1), &rat(-1, 2)).unwrap();
        assert_eq!(x.d, 2);
        assert_eq!(x.clone() * x.clone(), r(1, 2));
        assert_eq!(x.clone() + y, r(0, 1));
        assert!((x.to_f64() - 0.5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn rational_roots_stay_rational() {
        let [x, y] = QSqrt::quadratic_roots(&rat(1, 1), &rat(-3, 1), &rat(2, 1)).unwrap();
        assert_eq!((x, y), (r(2, 1), r(1, 1)));
        assert!(QSqrt::quadratic_roots(&rat(1, 1), &rat(0, 1), &rat(1, 1)).is_none());
    }

    #[test]
    fn inverse_and_sign() {
        let x = QSqrt { a: rat(1, 1), b: rat(-1, 1), d: 2 };
        assert_eq!(x.clone() * x.recip().unwrap(), r(1, 1));
        assert_eq!(x.signum(), -1);
        assert_eq!(QSqrt { a: rat(2, 1), b: rat(-1, 1), d: 3 }.signum(), 1);
        assert!(r(0, 1).recip().is_none());
    }
}
