//! Exact arithmetic in the number field Q(i, sqrt2).
//!
//! An element is stored as `a + b*i + c*sqrt2 + d*i*sqrt2` with arbitrary
//! precision rational coordinates. The field is a degree-4 Galois extension
//! of Q; the three nontrivial conjugations (i -> -i, sqrt2 -> -sqrt2, and
//! their composition) give exact inversion through the rational norm, and
//! real elements a + c*sqrt2 admit an exact sign test without any floating
//! point approximation.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub use num_rational::BigRational as Rational;

/// Exact rational from a machine integer.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Exact rational `n/d`. Panics if `d == 0`.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

fn rational_sign(r: &Rational) -> i8 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

/// Render a rational as `p` or `p/q` (never `p/1`).
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Element of Q(i, sqrt2): `a + b*i + c*sqrt2 + d*i*sqrt2`.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct FieldElem {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
    pub d: Rational,
}

impl FieldElem {
    pub fn new(a: Rational, b: Rational, c: Rational, d: Rational) -> Self {
        FieldElem { a, b, c, d }
    }

    pub fn zero() -> Self {
        FieldElem::default()
    }

    pub fn one() -> Self {
        FieldElem::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        FieldElem::from_rational(rat(n))
    }

    pub fn from_rational(a: Rational) -> Self {
        FieldElem { a, ..FieldElem::default() }
    }

    /// The imaginary unit i.
    pub fn i() -> Self {
        FieldElem { b: rat(1), ..FieldElem::default() }
    }

    /// The real quadratic generator sqrt2.
    pub fn sqrt2() -> Self {
        FieldElem { c: rat(1), ..FieldElem::default() }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero() && self.c.is_zero() && self.d.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero() && self.c.is_zero() && self.d.is_zero()
    }

    /// Conjugation i -> -i (fixes sqrt2).
    pub fn conj_i(&self) -> Self {
        FieldElem {
            a: self.a.clone(),
            b: -self.b.clone(),
            c: self.c.clone(),
            d: -self.d.clone(),
        }
    }

    /// Conjugation sqrt2 -> -sqrt2 (fixes i).
    pub fn conj_sqrt2(&self) -> Self {
        FieldElem {
            a: self.a.clone(),
            b: self.b.clone(),
            c: -self.c.clone(),
            d: -self.d.clone(),
        }
    }

    /// The composite conjugation i -> -i, sqrt2 -> -sqrt2.
    pub fn conj_both(&self) -> Self {
        FieldElem {
            a: self.a.clone(),
            b: -self.b.clone(),
            c: -self.c.clone(),
            d: self.d.clone(),
        }
    }

    /// Field norm down to Q: the product of all four Galois conjugates.
    pub fn norm(&self) -> Rational {
        let p = &(&(self * &self.conj_i()) * &self.conj_sqrt2()) * &self.conj_both();
        debug_assert!(p.b.is_zero() && p.c.is_zero() && p.d.is_zero());
        p.a
    }

    /// Multiplicative inverse, or an error on zero.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        // 1/x = (product of the three nontrivial conjugates) / norm(x).
        let p = &(&self.conj_i() * &self.conj_sqrt2()) * &self.conj_both();
        let n = &(self * &p);
        debug_assert!(n.b.is_zero() && n.c.is_zero() && n.d.is_zero() && !n.a.is_zero());
        Ok(p.scale(&n.a.recip()))
    }

    /// Exact division, or an error when `rhs` is zero.
    pub fn checked_div(&self, rhs: &FieldElem) -> Result<Self> {
        Ok(self * &rhs.inv()?)
    }

    /// Multiply by a rational scalar.
    pub fn scale(&self, k: &Rational) -> Self {
        FieldElem {
            a: &self.a * k,
            b: &self.b * k,
            c: &self.c * k,
            d: &self.d * k,
        }
    }

    /// Nonnegative integer power by repeated squaring.
    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = FieldElem::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// True when the element lies in R, i.e. has the shape a + c*sqrt2.
    pub fn is_real(&self) -> bool {
        self.b.is_zero() && self.d.is_zero()
    }

    /// Exact sign of a real element; error when the element is not real.
    pub fn real_sign(&self) -> Result<i8> {
        if !self.is_real() {
            return Err(Error::domain(format!("real_sign of non-real element {self}")));
        }
        Ok(sign_a_plus_c_sqrt2(&self.a, &self.c))
    }

    /// Full classification used by the residue conditions.
    pub fn classify(&self) -> Classification {
        let is_real = self.is_real();
        let is_rational = is_real && self.c.is_zero();
        let is_positive_real = is_real && sign_a_plus_c_sqrt2(&self.a, &self.c) > 0;
        let integer_value = if is_rational && self.a.denom().is_one() {
            Some(self.a.numer().clone())
        } else {
            None
        };
        Classification {
            is_zero: self.is_zero(),
            is_real,
            is_rational,
            is_positive_real,
            integer_value,
        }
    }
}

/// Exact sign of a + c*sqrt2 for rational a, c.
fn sign_a_plus_c_sqrt2(a: &Rational, c: &Rational) -> i8 {
    let sa = rational_sign(a);
    let sc = rational_sign(c);
    if sa >= 0 && sc >= 0 {
        return if sa == 0 && sc == 0 { 0 } else { 1 };
    }
    if sa <= 0 && sc <= 0 {
        return -1;
    }
    // Strictly mixed signs: |a| vs |c|*sqrt2 reduces to a^2 vs 2c^2, which
    // never ties (sqrt2 is irrational and a, c are nonzero here).
    let diff = a * a - rat(2) * c * c;
    sa * rational_sign(&diff)
}

/// Classification flags for a field element, as used by the genericity
/// conditions: membership in R, Q, the positive reals, and the integers
/// (with the exact integer exposed so thresholds `>= q` can be tested).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub is_zero: bool,
    pub is_real: bool,
    pub is_rational: bool,
    pub is_positive_real: bool,
    pub integer_value: Option<BigInt>,
}

impl Classification {
    /// Membership in I_q = {integers n : n >= q}.
    pub fn in_iq(&self, q: i64) -> bool {
        match &self.integer_value {
            Some(n) => *n >= BigInt::from(q),
            None => false,
        }
    }
}

impl Add for &FieldElem {
    type Output = FieldElem;
    fn add(self, rhs: &FieldElem) -> FieldElem {
        FieldElem {
            a: &self.a + &rhs.a,
            b: &self.b + &rhs.b,
            c: &self.c + &rhs.c,
            d: &self.d + &rhs.d,
        }
    }
}

impl Sub for &FieldElem {
    type Output = FieldElem;
    fn sub(self, rhs: &FieldElem) -> FieldElem {
        FieldElem {
            a: &self.a - &rhs.a,
            b: &self.b - &rhs.b,
            c: &self.c - &rhs.c,
            d: &self.d - &rhs.d,
        }
    }
}

impl Neg for &FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        FieldElem {
            a: -self.a.clone(),
            b: -self.b.clone(),
            c: -self.c.clone(),
            d: -self.d.clone(),
        }
    }
}

impl Mul for &FieldElem {
    type Output = FieldElem;
    fn mul(self, rhs: &FieldElem) -> FieldElem {
        // (a + bi + c s + d i s)(a' + b'i + c's + d'i s) with s^2 = 2,
        // i^2 = -1, collecting on the basis {1, i, s, i s}.
        let two = rat(2);
        FieldElem {
            a: &self.a * &rhs.a - &self.b * &rhs.b
                + &two * (&self.c * &rhs.c)
                - &two * (&self.d * &rhs.d),
            b: &self.a * &rhs.b
                + &self.b * &rhs.a
                + &two * (&self.c * &rhs.d)
                + &two * (&self.d * &rhs.c),
            c: &self.a * &rhs.c + &self.c * &rhs.a - &self.b * &rhs.d - &self.d * &rhs.b,
            d: &self.a * &rhs.d + &self.d * &rhs.a + &self.b * &rhs.c + &self.c * &rhs.b,
        }
    }
}

impl Add for FieldElem {
    type Output = FieldElem;
    fn add(self, rhs: FieldElem) -> FieldElem {
        &self + &rhs
    }
}

impl Sub for FieldElem {
    type Output = FieldElem;
    fn sub(self, rhs: FieldElem) -> FieldElem {
        &self - &rhs
    }
}

impl Mul for FieldElem {
    type Output = FieldElem;
    fn mul(self, rhs: FieldElem) -> FieldElem {
        &self * &rhs
    }
}

impl Neg for FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        -&self
    }
}

impl AddAssign<&FieldElem> for FieldElem {
    fn add_assign(&mut self, rhs: &FieldElem) {
        self.a += &rhs.a;
        self.b += &rhs.b;
        self.c += &rhs.c;
        self.d += &rhs.d;
    }
}

impl fmt::Display for FieldElem {
    /// Canonical form `a + b*i + c*sqrt2 + d*i*sqrt2` with zero terms
    /// omitted, unit coefficients folded into the symbol, and signs folded
    /// into the separators. Zero renders as `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: [(&Rational, &str); 4] = [
            (&self.a, ""),
            (&self.b, "i"),
            (&self.c, "sqrt2"),
            (&self.d, "i*sqrt2"),
        ];
        let mut out = String::new();
        for (coef, sym) in parts {
            if coef.is_zero() {
                continue;
            }
            let negative = coef.is_negative();
            if out.is_empty() {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let mag = coef.abs();
            if sym.is_empty() {
                out.push_str(&format_rational(&mag));
            } else if mag.is_one() {
                out.push_str(sym);
            } else {
                out.push_str(&format_rational(&mag));
                out.push('*');
                out.push_str(sym);
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        f.write_str(&out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fe(a: Rational, b: Rational, c: Rational, d: Rational) -> FieldElem {
        FieldElem::new(a, b, c, d)
    }

    #[test]
    fn multiplication_of_conjugate_pair() {
        let x = FieldElem::i() + FieldElem::sqrt2();
        let y = FieldElem::sqrt2() - FieldElem::i();
        assert_eq!(&x * &y, FieldElem::from_int(3));
    }

    #[test]
    fn inverse_against_conjugate_oracle() {
        let x = FieldElem::i() + FieldElem::sqrt2();
        let inv = x.inv().unwrap();
        assert_eq!(inv, fe(rat(0), ratio(-1, 3), ratio(1, 3), rat(0)));
        assert_eq!(&x * &inv, FieldElem::one());
        assert_eq!(x.norm(), rat(9));
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert_eq!(FieldElem::one().checked_div(&FieldElem::zero()), Err(Error::DivisionByZero));
        assert_eq!(FieldElem::zero().inv(), Err(Error::DivisionByZero));
    }

    #[test]
    fn eigenvalue_sum_example() {
        // 4i + (-i - sqrt2) + 1 = 1 + 3i - sqrt2
        let sum = fe(rat(0), rat(4), rat(0), rat(0))
            + fe(rat(0), rat(-1), rat(-1), rat(0))
            + FieldElem::one();
        assert_eq!(sum, fe(rat(1), rat(3), rat(-1), rat(0)));
        assert_eq!(sum.to_string(), "1 + 3*i - sqrt2");
    }

    #[test]
    fn sign_of_real_elements() {
        // 3 - 2*sqrt2 > 0 because 9 > 8.
        let x = fe(rat(3), rat(0), rat(-2), rat(0));
        assert_eq!(x.real_sign().unwrap(), 1);
        assert!(x.classify().is_positive_real);
        // 3 - 3*sqrt2 < 0 because 9 < 18.
        let y = fe(rat(3), rat(0), rat(-3), rat(0));
        assert_eq!(y.real_sign().unwrap(), -1);
        // -3 + 2*sqrt2 < 0, mirrored case.
        let z = fe(rat(-3), rat(0), rat(2), rat(0));
        assert_eq!(z.real_sign().unwrap(), -1);
        assert_eq!(FieldElem::zero().real_sign().unwrap(), 0);
        assert!(FieldElem::i().real_sign().is_err());
    }

    #[test]
    fn classification_thresholds() {
        let four = FieldElem::from_int(4).classify();
        assert!(four.in_iq(1) && four.in_iq(4) && !four.in_iq(5));
        let half = FieldElem::from_rational(ratio(1, 2)).classify();
        assert!(half.is_rational && half.integer_value.is_none() && !half.in_iq(1));
        let complex = fe(rat(0), rat(3), rat(-1), rat(0)).classify();
        assert!(!complex.is_real && !complex.is_positive_real && !complex.in_iq(1));
        let neg = FieldElem::from_int(-2).classify();
        assert!(neg.in_iq(-2) && !neg.in_iq(1));
    }

    #[test]
    fn canonical_rendering() {
        assert_eq!(FieldElem::zero().to_string(), "0");
        assert_eq!(FieldElem::one().to_string(), "1");
        assert_eq!((-FieldElem::sqrt2()).to_string(), "-sqrt2");
        assert_eq!(fe(ratio(-4, 3), rat(0), rat(0), ratio(-4, 3)).to_string(), "-4/3 - 4/3*i*sqrt2");
        assert_eq!(fe(rat(0), rat(1), rat(0), rat(1)).to_string(), "i + i*sqrt2");
        assert_eq!(fe(ratio(1, 4), ratio(-19, 4), rat(-1), ratio(-1, 4)).to_string(), "1/4 - 19/4*i - sqrt2 - 1/4*i*sqrt2");
    }

    #[test]
    fn conjugations_are_involutive_automorphisms() {
        let x = fe(rat(1), ratio(2, 3), rat(-1), ratio(5, 7));
        assert_eq!(x.conj_i().conj_i(), x);
        assert_eq!(x.conj_sqrt2().conj_sqrt2(), x);
        assert_eq!(x.conj_i().conj_sqrt2(), x.conj_both());
        let y = fe(rat(-2), rat(1), ratio(1, 2), rat(0));
        assert_eq!((&x * &y).conj_i(), &x.conj_i() * &y.conj_i());
        assert_eq!((&x + &y).conj_sqrt2(), &x.conj_sqrt2() + &y.conj_sqrt2());
    }

    #[test]
    fn norm_is_multiplicative() {
        let x = fe(rat(1), rat(2), rat(0), rat(-1));
        let y = fe(rat(0), ratio(1, 2), rat(3), rat(1));
        assert_eq!((&x * &y).norm(), x.norm() * y.norm());
    }
}
