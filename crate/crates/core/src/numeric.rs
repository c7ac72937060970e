//! Exact rationals and elements of a single real quadratic field `Q(sqrt d)`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary precision rational, always kept in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Exact square root of a rational, if it has one.
pub fn rational_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &n * &n == *r.numer() && &d * &d == *r.denom() {
        Some(Rational::new(n, d))
    } else {
        None
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            return false;
        }
        p += 1;
    }
    true
}

pub fn is_squarefree(n: u64) -> bool {
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p * p) {
            return false;
        }
        p += 1;
    }
    true
}

/// Primes `<= bound` in increasing order.
pub fn primes_up_to(bound: u64) -> Vec<u64> {
    (2..=bound).filter(|&n| is_prime(n)).collect()
}

pub fn next_prime(after: u64) -> u64 {
    let mut n = after + 1;
    while !is_prime(n) {
        n += 1;
    }
    n
}

/// The `n`-th odd prime, counting from `n = 1` (3, 5, 7, ...).
pub fn nth_odd_prime(n: u64) -> u64 {
    let mut p = 2;
    for _ in 0..n {
        p = next_prime(p);
    }
    p
}

/// An element `u + v*sqrt(d)` of `Q(sqrt d)`. With `d = None` the value is a
/// plain rational and `v` is always zero.
#[derive(Debug, Clone)]
pub struct QuadExt {
    d: Option<u64>,
    u: Rational,
    v: Rational,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl QuadExt {
    pub fn new(d: u64, u: Rational, v: Rational) -> Result<Self> {
        if d < 2 || !is_squarefree(d) {
            return Err(Error::InvalidRadicand(d));
        }
        Ok(QuadExt { d: Some(d), u, v })
    }

    pub fn rational(u: Rational) -> Self {
        QuadExt {
            d: None,
            u,
            v: Rational::zero(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::rational(int(n))
    }

    /// `sqrt(d)` itself.
    pub fn sqrt_of(d: u64) -> Result<Self> {
        Self::new(d, Rational::zero(), Rational::one())
    }

    pub fn zero() -> Self {
        Self::rational(Rational::zero())
    }

    pub fn one() -> Self {
        Self::rational(Rational::one())
    }

    pub fn radicand(&self) -> Option<u64> {
        self.d
    }

    pub fn rational_part(&self) -> &Rational {
        &self.u
    }

    pub fn irrational_part(&self) -> &Rational {
        &self.v
    }

    pub fn is_zero(&self) -> bool {
        self.u.is_zero() && self.v.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.v.is_zero()
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.is_rational().then_some(&self.u)
    }

    /// Re-tag the value as living in `Q(sqrt d)`; rationals embed in every
    /// quadratic field.
    pub fn with_radicand(mut self, d: Option<u64>) -> Result<Self> {
        match (self.d, d) {
            (Some(a), Some(b)) if a != b && !self.v.is_zero() => {
                return Err(Error::MismatchedRadicand(a, b))
            }
            (_, None) if !self.v.is_zero() => {
                return Err(Error::MismatchedRadicand(self.d.unwrap_or(0), 0))
            }
            _ => {}
        }
        self.d = d;
        Ok(self)
    }

    fn common_radicand(&self, other: &Self) -> Result<Option<u64>> {
        match (self.d, other.d) {
            (Some(a), Some(b)) if a != b => Err(Error::MismatchedRadicand(a, b)),
            (a, b) => Ok(a.or(b)),
        }
    }

    fn d_rational(d: Option<u64>) -> Rational {
        Rational::from_integer(BigInt::from(d.unwrap_or(0)))
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        let d = self.common_radicand(other)?;
        Ok(QuadExt {
            d,
            u: &self.u + &other.u,
            v: &self.v + &other.v,
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&-other)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        let d = self.common_radicand(other)?;
        let dd = Self::d_rational(d);
        Ok(QuadExt {
            d,
            u: &self.u * &other.u + &self.v * &other.v * dd,
            v: &self.u * &other.v + &self.v * &other.u,
        })
    }

    /// Norm `u^2 - d v^2`; nonzero for nonzero elements since `sqrt d` is
    /// irrational.
    pub fn norm(&self) -> Rational {
        &self.u * &self.u - &self.v * &self.v * Self::d_rational(self.d)
    }

    pub fn checked_inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.norm();
        Ok(QuadExt {
            d: self.d,
            u: &self.u / &n,
            v: -&self.v / &n,
        })
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        self.checked_mul(&other.checked_inv()?)
    }

    /// Exact sign of the real number `u + v*sqrt(d)`.
    pub fn sign(&self) -> i8 {
        let su = sign_of(&self.u);
        let sv = sign_of(&self.v);
        if sv == 0 {
            return su;
        }
        if su == 0 || su == sv {
            return sv;
        }
        // opposite signs: compare u^2 against v^2 d
        let lhs = &self.u * &self.u;
        let rhs = &self.v * &self.v * Self::d_rational(self.d);
        if lhs > rhs {
            su
        } else {
            sv
        }
    }

    pub fn abs(&self) -> Self {
        if self.sign() < 0 {
            -self
        } else {
            self.clone()
        }
    }

    /// Non-negative square root inside the same field, when one exists.
    pub fn sqrt_if_square(&self) -> Option<Self> {
        if self.sign() < 0 {
            return None;
        }
        if self.is_zero() {
            return Some(QuadExt {
                d: self.d,
                ..Self::zero()
            });
        }
        let d = self.d;
        let dd = Self::d_rational(d);
        let two = int(2);
        let root = if self.v.is_zero() {
            if let Some(p) = rational_sqrt(&self.u) {
                QuadExt {
                    d,
                    u: p,
                    v: Rational::zero(),
                }
            } else {
                d?;
                let q = rational_sqrt(&(&self.u / &dd))?;
                QuadExt {
                    d,
                    u: Rational::zero(),
                    v: q,
                }
            }
        } else {
            // (p + q sqrt d)^2 = p^2 + d q^2 + 2pq sqrt d
            let disc = rational_sqrt(&self.norm())?;
            let candidates = [(&self.u + &disc) / &two, (&self.u - &disc) / &two];
            let p = candidates
                .iter()
                .find_map(|c| rational_sqrt(c).filter(|p| !p.is_zero()))?;
            let q = &self.v / (&two * &p);
            QuadExt { d, u: p, v: q }
        };
        debug_assert!(root.checked_mul(&root).ok()? == *self);
        Some(root.abs())
    }

    /// Largest integer `n` with `n <= self`.
    pub fn floor(&self) -> BigInt {
        let d = BigInt::from(self.d.unwrap_or(0));
        let bound = (self.u.abs() + self.v.abs() * Rational::from_integer(d)).ceil();
        let mut lo = -bound.to_integer() - BigInt::one();
        let mut hi = bound.to_integer() + BigInt::one();
        // invariant: lo <= self < hi
        while &hi - &lo > BigInt::one() {
            let mid: BigInt = (&lo + &hi).div_floor(&BigInt::from(2));
            let diff = self - &QuadExt::rational(Rational::from_integer(mid.clone()));
            if diff.sign() >= 0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    }

    pub fn cmp_value(&self, other: &Self) -> Result<Ordering> {
        Ok(match self.checked_sub(other)?.sign() {
            -1 => Ordering::Less,
            0 => Ordering::Equal,
            _ => Ordering::Greater,
        })
    }
}

fn sign_of(r: &Rational) -> i8 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

pub fn qext_arith(x: &QuadExt, y: &QuadExt, op: ArithOp) -> Result<QuadExt> {
    match op {
        ArithOp::Add => x.checked_add(y),
        ArithOp::Sub => x.checked_sub(y),
        ArithOp::Mul => x.checked_mul(y),
        ArithOp::Div => x.checked_div(y),
    }
}

/// A rational strictly between `lo` and `hi`, found by bisection from integer
/// bounds. Deterministic for fixed inputs.
pub fn rational_in_interval(lo: &QuadExt, hi: &QuadExt) -> Result<Rational> {
    if hi.checked_sub(lo)?.sign() <= 0 {
        return Err(Error::EmptyInterval);
    }
    let mut a = Rational::from_integer(lo.floor());
    let mut b = Rational::from_integer(hi.floor() + BigInt::one());
    let half = rat(1, 2);
    loop {
        let m = (&a + &b) * &half;
        let mq = QuadExt::rational(m.clone());
        let above_lo = (&mq - lo).sign() > 0;
        let below_hi = (hi - &mq).sign() > 0;
        match (above_lo, below_hi) {
            (true, true) => return Ok(m),
            (false, _) => a = m,
            (true, false) => b = m,
        }
    }
}

impl PartialEq for QuadExt {
    fn eq(&self, other: &Self) -> bool {
        self.u == other.u && self.v == other.v && (self.v.is_zero() || self.d == other.d)
    }
}

impl Eq for QuadExt {}

// Operator forms panic on mismatched radicands; use the checked methods when
// operands may come from different fields.
impl<'a> Add<&'a QuadExt> for &'a QuadExt {
    type Output = QuadExt;
    fn add(self, rhs: &'a QuadExt) -> QuadExt {
        self.checked_add(rhs).expect("radicand mismatch")
    }
}

impl<'a> Sub<&'a QuadExt> for &'a QuadExt {
    type Output = QuadExt;
    fn sub(self, rhs: &'a QuadExt) -> QuadExt {
        self.checked_sub(rhs).expect("radicand mismatch")
    }
}

impl<'a> Mul<&'a QuadExt> for &'a QuadExt {
    type Output = QuadExt;
    fn mul(self, rhs: &'a QuadExt) -> QuadExt {
        self.checked_mul(rhs).expect("radicand mismatch")
    }
}

impl Neg for &QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        QuadExt {
            d: self.d,
            u: -&self.u,
            v: -&self.v,
        }
    }
}

impl Neg for QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        -&self
    }
}

impl fmt::Display for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.d {
            Some(d) if !self.v.is_zero() => {
                if self.u.is_zero() {
                    write!(f, "{}*sqrt({})", self.v, d)
                } else {
                    write!(f, "{} + {}*sqrt({})", self.u, self.v, d)
                }
            }
            _ => write!(f, "{}", self.u),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q2(u: Rational, v: Rational) -> QuadExt {
        QuadExt::new(2, u, v).unwrap()
    }

    #[test]
    fn norm_identity() {
        let a = q2(int(1), int(1));
        let b = q2(int(1), int(-1));
        assert_eq!(
            qext_arith(&a, &b, ArithOp::Mul).unwrap(),
            QuadExt::from_int(-1)
        );
    }

    #[test]
    fn defining_relation() {
        let s = QuadExt::sqrt_of(2).unwrap();
        assert_eq!(&s * &s, QuadExt::from_int(2));
    }

    #[test]
    fn self_division_is_one() {
        let a = q2(int(1), int(1));
        assert_eq!(qext_arith(&a, &a, ArithOp::Div).unwrap(), QuadExt::one());
    }

    #[test]
    fn division_by_zero_and_mismatch() {
        let a = q2(int(1), int(1));
        assert_eq!(a.checked_div(&QuadExt::zero()), Err(Error::DivisionByZero));
        let b = QuadExt::sqrt_of(3).unwrap();
        assert_eq!(a.checked_add(&b), Err(Error::MismatchedRadicand(2, 3)));
    }

    #[test]
    fn radicand_must_be_squarefree() {
        assert!(QuadExt::new(4, int(0), int(1)).is_err());
        assert!(QuadExt::new(1, int(0), int(1)).is_err());
        assert!(QuadExt::new(6, int(0), int(1)).is_ok());
    }

    #[test]
    fn signs() {
        assert_eq!(q2(int(1), int(-1)).sign(), -1);
        assert_eq!(QuadExt::zero().sign(), 0);
        // 9 > 8
        assert_eq!(q2(int(3), int(-2)).sign(), 1);
        assert_eq!(q2(int(-3), int(2)).sign(), -1);
    }

    #[test]
    fn square_roots() {
        let x = q2(int(3), int(2));
        assert_eq!(x.sqrt_if_square(), Some(q2(int(1), int(1))));
        let two = QuadExt::from_int(2).with_radicand(Some(2)).unwrap();
        assert_eq!(two.sqrt_if_square(), Some(QuadExt::sqrt_of(2).unwrap()));
        assert_eq!(QuadExt::from_int(2).sqrt_if_square(), None);
        assert_eq!(QuadExt::from_int(-4).sqrt_if_square(), None);
        assert_eq!(
            QuadExt::rational(rat(9, 4)).sqrt_if_square(),
            Some(QuadExt::rational(rat(3, 2)))
        );
        // 3 - 2 sqrt 2 = (sqrt 2 - 1)^2, root must be the positive one
        let y = q2(int(3), int(-2)).sqrt_if_square().unwrap();
        assert_eq!(y, q2(int(-1), int(1)));
        assert_eq!(q2(int(3), int(0)).sqrt_if_square(), None);
    }

    #[test]
    fn floors() {
        assert_eq!(QuadExt::sqrt_of(2).unwrap().floor(), BigInt::from(1));
        assert_eq!((-QuadExt::sqrt_of(2).unwrap()).floor(), BigInt::from(-2));
        assert_eq!(QuadExt::rational(rat(-1, 2)).floor(), BigInt::from(-1));
        assert_eq!(QuadExt::from_int(3).floor(), BigInt::from(3));
    }

    #[test]
    fn rationals_in_intervals() {
        let s = QuadExt::sqrt_of(2).unwrap();
        let lo = &s - &QuadExt::rational(rat(1, 2));
        let r = rational_in_interval(&lo, &s).unwrap();
        let rq = QuadExt::rational(r.clone());
        assert!((&rq - &lo).sign() > 0 && (&s - &rq).sign() > 0);
        assert_eq!(
            rational_in_interval(&QuadExt::zero(), &QuadExt::one()).unwrap(),
            rat(1, 2)
        );
        assert_eq!(
            rational_in_interval(&QuadExt::one(), &QuadExt::one()),
            Err(Error::EmptyInterval)
        );
    }

    #[test]
    fn display() {
        assert_eq!(q2(int(1), rat(-1, 2)).to_string(), "1 + -1/2*sqrt(2)");
        assert_eq!(q2(int(0), int(3)).to_string(), "3*sqrt(2)");
        assert_eq!(QuadExt::rational(rat(6, 4)).to_string(), "3/2");
    }

    #[test]
    fn prime_helpers() {
        assert_eq!(primes_up_to(20), vec![2, 3, 5, 7, 11, 13, 17, 19]);
        assert_eq!(nth_odd_prime(1), 3);
        assert_eq!(nth_odd_prime(4), 11);
        assert!(!is_squarefree(12));
    }
}
