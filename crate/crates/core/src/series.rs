//! Finitely supported Hahn series `sum c_g t^g` over a coefficient field `k`
//! and a group `G`, ordered by the sign of the leading coefficient.
//!
//! Inverses and square roots are infinite in general, so both are truncated
//! by term count. Writing `x = c t^g u` with `u = 1 + r` and `r` supported on
//! positive exponents, the terms of `u^-1` and `u^(1/2)` are produced in
//! increasing order by repeatedly reading off the leading term of the
//! remainder: `1 - u z` for the inverse, `(u - z^2) / 2` for the root. A
//! vanishing remainder means the expansion is finite and already complete.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::groups::{divide_by, GroupDescriptor, GroupElement, HullElement, Val};
use crate::numeric::{int, QuadExt};

/// Upper bound on monoid elements visited by one truncated expansion.

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum CoefficientField {
    PlainRationals,
    QuadraticExt(u64),
    /// Treated as real closed for classification; arithmetic uses the base.
    DeclaredRealClosed(Box<CoefficientField>),
}

impl CoefficientField {
    pub fn quadratic(d: u64) -> Result<Self> {
        QuadExt::sqrt_of(d)?;
        Ok(CoefficientField::QuadraticExt(d))
    }

    pub fn declared_real_closed(base: CoefficientField) -> Self {
        match base {
            CoefficientField::DeclaredRealClosed(_) => base,
            b => CoefficientField::DeclaredRealClosed(Box::new(b)),
        }
    }

    /// The field that actually carries arithmetic.
    pub fn base(&self) -> &CoefficientField {
        match self {
            CoefficientField::DeclaredRealClosed(b) => b.base(),
            other => other,
        }
    }

    pub fn radicand(&self) -> Option<u64> {
        match self.base() {
            CoefficientField::QuadraticExt(d) => Some(*d),
            _ => None,
        }
    }

    pub fn is_declared_real_closed(&self) -> bool {
        matches!(self, CoefficientField::DeclaredRealClosed(_))
    }

    pub fn contains(&self, c: &QuadExt) -> bool {
        c.is_rational() || c.radicand() == self.radicand()
    }

    /// Moves `c` into this field's representation.
    pub fn coerce(&self, c: QuadExt) -> Result<QuadExt> {
        if !self.contains(&c) {
            return Err(Error::DescriptorMismatch(format!("{c} is not in {self}")));
        }
        c.with_radicand(self.radicand())
    }
}

impl fmt::Display for CoefficientField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoefficientField::PlainRationals => write!(f, "Q"),
            CoefficientField::QuadraticExt(d) => write!(f, "Q(sqrt({d}))"),
            CoefficientField::DeclaredRealClosed(b) => write!(f, "RC({b})"),
        }
    }
}

impl Serialize for CoefficientField {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Series {
    field: CoefficientField,
    group: GroupDescriptor,
    terms: Vec<(HullElement, QuadExt)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesOp {
    Add,
    Neg,
    Mul,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedResult {
    pub terms: Series,
    pub guarantee: GroupElement,
}

impl Series {
    pub fn zero(field: &CoefficientField, group: &GroupDescriptor) -> Self {
        Series {
            field: field.clone(),
            group: group.clone(),
            terms: Vec::new(),
        }
    }

    pub fn from_terms(
        field: &CoefficientField,
        group: &GroupDescriptor,
        terms: impl IntoIterator<Item = (HullElement, QuadExt)>,
    ) -> Result<Self> {
        let mut acc: BTreeMap<HullElement, QuadExt> = BTreeMap::new();
        for (e, c) in terms {
            GroupElement::new(e.clone(), group)?;
            let c = field.coerce(c)?;
            let slot = acc
                .entry(e)
                .or_insert_with(|| QuadExt::zero().with_radicand(field.radicand()).unwrap());
            *slot = slot.checked_add(&c)?;
        }
        Ok(Self::from_map(field, group, acc))
    }

    fn from_map(
        field: &CoefficientField,
        group: &GroupDescriptor,
        acc: BTreeMap<HullElement, QuadExt>,
    ) -> Self {
        Series {
            field: field.clone(),
            group: group.clone(),
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn constant(field: &CoefficientField, group: &GroupDescriptor, c: QuadExt) -> Result<Self> {
        Self::from_terms(field, group, [(HullElement::zero(), c)])
    }

    pub fn one(field: &CoefficientField, group: &GroupDescriptor) -> Self {
        Self::constant(field, group, QuadExt::one()).expect("1 lies in every field")
    }

    pub fn monomial(
        field: &CoefficientField,
        group: &GroupDescriptor,
        c: QuadExt,
        exponent: HullElement,
    ) -> Result<Self> {
        Self::from_terms(field, group, [(exponent, c)])
    }

    pub fn field(&self) -> &CoefficientField {
        &self.field
    }

    pub fn group(&self) -> &GroupDescriptor {
        &self.group
    }

    /// Terms in increasing exponent order.
    pub fn terms(&self) -> &[(HullElement, QuadExt)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    pub fn leading(&self) -> Option<&(HullElement, QuadExt)> {
        self.terms.first()
    }

    pub fn coefficient(&self, e: &HullElement) -> QuadExt {
        self.terms
            .iter()
            .find(|(x, _)| x == e)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(QuadExt::zero)
    }

    pub fn sign(&self) -> i8 {
        self.leading().map_or(0, |(_, c)| c.sign())
    }

    pub fn vmin(&self) -> Val<HullElement> {
        s_vmin(self)
    }

    pub fn ensure_compatible(&self, other: &Series) -> Result<()> {
        if self.field != other.field || self.group != other.group {
            return Err(Error::DescriptorMismatch(format!(
                "({}, {}) vs ({}, {})",
                self.field, self.group, other.field, other.group
            )));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Series) -> Result<Series> {
        self.ensure_compatible(other)?;
        let mut acc: BTreeMap<HullElement, QuadExt> = self.terms.iter().cloned().collect();
        for (e, c) in &other.terms {
            match acc.get_mut(e) {
                Some(slot) => *slot = slot.checked_add(c)?,
                None => {
                    acc.insert(e.clone(), c.clone());
                }
            }
        }
        Ok(Self::from_map(&self.field, &self.group, acc))
    }

    pub fn checked_sub(&self, other: &Series) -> Result<Series> {
        self.checked_add(&other.neg())
    }

    pub fn neg(&self) -> Series {
        Series {
            field: self.field.clone(),
            group: self.group.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn checked_mul(&self, other: &Series) -> Result<Series> {
        self.ensure_compatible(other)?;
        let mut acc: BTreeMap<HullElement, QuadExt> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e = e1 + e2;
                let c = c1.checked_mul(c2)?;
                match acc.get_mut(&e) {
                    Some(slot) => *slot = slot.checked_add(&c)?,
                    None => {
                        acc.insert(e, c);
                    }
                }
            }
        }
        Ok(Self::from_map(&self.field, &self.group, acc))
    }

    /// Multiplies every coefficient by `c` and shifts every exponent by `e`.
    pub fn scale(&self, c: &QuadExt, e: &HullElement) -> Result<Series> {
        let c = self.field.coerce(c.clone())?;
        let terms = self
            .terms
            .iter()
            .map(|(x, a)| Ok((x + e, a.checked_mul(&c)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::from_terms(&self.field, &self.group, terms)
    }

    /// Keeps the first `n` terms.
    pub fn take(&self, n: usize) -> Series {
        Series {
            field: self.field.clone(),
            group: self.group.clone(),
            terms: self.terms.iter().take(n).cloned().collect(),
        }
    }
}

pub fn s_ring_ops(x: &Series, y: &Series, op: SeriesOp) -> Result<Series> {
    match op {
        SeriesOp::Add => x.checked_add(y),
        SeriesOp::Neg => Ok(x.neg()),
        SeriesOp::Mul => x.checked_mul(y),
    }
}

pub fn s_cmp(x: &Series, y: &Series) -> Result<Ordering> {
    Ok(x.checked_sub(y)?.sign().cmp(&0))
}

pub fn s_vmin(x: &Series) -> Val<HullElement> {
    match x.leading() {
        Some((e, _)) => Val::Finite(e.clone()),
        None => Val::Infinity,
    }
}

pub fn s_residue(x: &Series) -> Result<QuadExt> {
    match s_vmin(x) {
        Val::Finite(v) if v.sign() < 0 => Err(Error::NotInValuationRing),
        _ => Ok(x.coefficient(&HullElement::zero())),
    }
}

/// `x = c t^g u` with `u` a unit of leading term `1`; returns `(c, g, u)`.
fn normalize(x: &Series) -> Result<(QuadExt, HullElement, Series)> {
    let (g, c) = x.leading().ok_or(Error::DivisionByZero)?.clone();
    let u = x
        .terms
        .iter()
        .map(|(e, a)| Ok((e - &g, a.checked_div(&c)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok((c, g, Series::from_terms(x.field(), x.group(), u)?))
}

/// Builds `z` one term at a time: the next term is `scale` times the leading
/// term of `remainder(z)`. Stops after `n_terms` terms or when the remainder
/// vanishes. Returns `z` and the exponent of its last term.
fn peel(
    one: Series,
    n_terms: usize,
    scale: &QuadExt,
    remainder: impl Fn(&Series) -> Result<Series>,
) -> Result<(Series, HullElement)> {
    let mut z = one;
    let mut last = HullElement::zero();
    while z.len() < n_terms {
        let r = remainder(&z)?;
        let Some((e, c)) = r.leading().cloned() else {
            break;
        };
        z = z.checked_add(&Series::monomial(
            z.field(),
            z.group(),
            c.checked_mul(scale)?,
            e.clone(),
        )?)?;
        last = e;
    }
    Ok((z, last))
}

/// The first `n_terms` terms of `1/x`. The guarantee `G` satisfies
/// `vmin(x * terms - 1) > G`.
pub fn trunc_inverse(x: &Series, n_terms: usize) -> Result<TruncatedResult> {
    if n_terms == 0 {
        return Err(Error::Precondition("n_terms must be positive".into()));
    }
    let (c, g, u) = normalize(x)?;
    let one = Series::one(x.field(), x.group());
    let (z, last) = peel(one.clone(), n_terms, &QuadExt::one(), |z| {
        one.checked_sub(&u.checked_mul(z)?)
    })?;
    let terms = z.scale(&c.checked_inv()?, &-&g)?;
    let out = TruncatedResult {
        terms,
        guarantee: GroupElement::new(last, x.group())?,
    };
    debug_assert!(verify_inverse(x, &out).unwrap_or(false));
    Ok(out)
}

/// The first `n_terms` terms of the positive square root of `x > 0`. The
/// guarantee `G` satisfies `vmin(x - terms^2) > G`.
pub fn trunc_sqrt(x: &Series, n_terms: usize) -> Result<TruncatedResult> {
    if n_terms == 0 {
        return Err(Error::Precondition("n_terms must be positive".into()));
    }
    if x.sign() <= 0 {
        return Err(Error::NotPositive);
    }
    let (c, g, u) = normalize(x)?;
    let half_g = divide_by(&GroupElement::new(g.clone(), x.group())?, 2)
        .ok_or_else(|| Error::ExponentNotDivisible(g.to_string()))?;
    let root_c = c
        .sqrt_if_square()
        .ok_or_else(|| Error::CoefficientNotSquare(c.to_string()))?;
    let half = QuadExt::rational(crate::numeric::rat(1, 2));
    let one = Series::one(x.field(), x.group());
    let (z, last) = peel(one, n_terms, &half, |z| u.checked_sub(&z.checked_mul(z)?))?;
    let terms = z.scale(&root_c, half_g.value())?;
    let out = TruncatedResult {
        terms,
        guarantee: GroupElement::new(&g + &last, x.group())?,
    };
    debug_assert!(verify_sqrt(x, &out).unwrap_or(false));
    Ok(out)
}

fn beyond(v: Val<HullElement>, bound: &HullElement) -> bool {
    match v {
        Val::Infinity => true,
        Val::Finite(e) => &e > bound,
    }
}

/// Exact back-multiplication check of an inverse contract.
pub fn verify_inverse(x: &Series, res: &TruncatedResult) -> Result<bool> {
    let rem = x
        .checked_mul(&res.terms)?
        .checked_sub(&Series::one(x.field(), x.group()))?;
    Ok(beyond(rem.vmin(), res.guarantee.value()))
}

/// Exact back-multiplication check of a square root contract.
pub fn verify_sqrt(x: &Series, res: &TruncatedResult) -> Result<bool> {
    let rem = x.checked_sub(&res.terms.checked_mul(&res.terms)?)?;
    Ok(beyond(rem.vmin(), res.guarantee.value()) && res.terms.sign() > 0)
}

fn fmt_coefficient(c: &QuadExt) -> String {
    let s = c.to_string();
    if s.contains(' ') {
        format!("({s})")
    } else {
        s
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| format!("{}*t^({})", fmt_coefficient(c), e))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl Serialize for Series {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// `c` as a coefficient, for building test and sample data.
pub fn coeff(n: i64) -> QuadExt {
    QuadExt::rational(int(n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{Index, RationalSubgroup};
    use crate::numeric::{rat, Rational};

    fn q() -> CoefficientField {
        CoefficientField::PlainRationals
    }
    fn gz() -> GroupDescriptor {
        GroupDescriptor::single(RationalSubgroup::integers())
    }
    fn gq() -> GroupDescriptor {
        GroupDescriptor::single(RationalSubgroup::rationals())
    }
    fn e1(r: Rational) -> HullElement {
        HullElement::monomial(Index::At(1), r)
    }
    fn poly(g: &GroupDescriptor, terms: &[(Rational, Rational)]) -> Series {
        Series::from_terms(
            &q(),
            g,
            terms
                .iter()
                .map(|(e, c)| (e1(e.clone()), QuadExt::rational(c.clone()))),
        )
        .unwrap()
    }

    #[test]
    fn ring_examples() {
        let t1 = poly(&gz(), &[(int(1), int(1))]);
        let t2 = poly(&gz(), &[(int(2), int(1))]);
        assert_eq!(
            t1.checked_mul(&t2).unwrap(),
            poly(&gz(), &[(int(3), int(1))])
        );
        let a = poly(&gz(), &[(int(0), int(1)), (int(1), int(1))]);
        let b = poly(&gz(), &[(int(0), int(1)), (int(1), int(-1))]);
        assert_eq!(
            a.checked_mul(&b).unwrap(),
            poly(&gz(), &[(int(0), int(1)), (int(2), int(-1))])
        );
        assert!(a.checked_add(&a.neg()).unwrap().is_zero());
    }

    #[test]
    fn ordering_examples() {
        let inv_t = poly(&gz(), &[(int(-1), int(1))]);
        let big = poly(&gz(), &[(int(0), int(1_000_000))]);
        assert_eq!(s_cmp(&inv_t, &big).unwrap(), Ordering::Greater);
        let t1 = poly(&gz(), &[(int(1), int(1))]);
        let t2 = poly(&gz(), &[(int(2), int(1))]);
        assert_eq!(s_cmp(&t1, &t2).unwrap(), Ordering::Greater);
        let two_t = poly(&gz(), &[(int(0), int(2)), (int(1), int(1))]);
        let two = poly(&gz(), &[(int(0), int(2))]);
        assert_eq!(s_cmp(&two_t, &two).unwrap(), Ordering::Greater);
    }

    #[test]
    fn valuation_and_residue() {
        let x = poly(&gq(), &[(rat(1, 2), int(3)), (int(2), int(1))]);
        assert_eq!(s_vmin(&x), Val::Finite(e1(rat(1, 2))));
        assert_eq!(s_vmin(&Series::zero(&q(), &gq())), Val::Infinity);
        assert_eq!(
            s_vmin(&poly(&gq(), &[(int(0), int(7))])),
            Val::Finite(HullElement::zero())
        );
        let y = poly(&gz(), &[(int(0), int(2)), (int(1), int(3))]);
        assert_eq!(s_residue(&y).unwrap(), coeff(2));
        assert_eq!(
            s_residue(&poly(&gz(), &[(int(1), int(1))])).unwrap(),
            coeff(0)
        );
        assert_eq!(
            s_residue(&poly(&gz(), &[(int(-1), int(1))])),
            Err(Error::NotInValuationRing)
        );
    }

    #[test]
    fn geometric_inverse() {
        let x = poly(&gz(), &[(int(0), int(1)), (int(1), int(-1))]);
        let res = trunc_inverse(&x, 3).unwrap();
        assert_eq!(
            res.terms,
            poly(
                &gz(),
                &[(int(0), int(1)), (int(1), int(1)), (int(2), int(1))]
            )
        );
        assert_eq!(res.guarantee.value(), &e1(int(2)));
        let rem = x
            .checked_mul(&res.terms)
            .unwrap()
            .checked_sub(&Series::one(&q(), &gz()))
            .unwrap();
        assert_eq!(rem, poly(&gz(), &[(int(3), int(-1))]));
    }

    #[test]
    fn monomial_inverse() {
        let x = poly(&gz(), &[(int(-1), int(2))]);
        let res = trunc_inverse(&x, 1).unwrap();
        assert_eq!(res.terms, poly(&gz(), &[(int(1), rat(1, 2))]));
    }

    #[test]
    fn inverse_in_rank_two() {
        let zz = GroupDescriptor::FiniteLex(vec![RationalSubgroup::integers(); 2]);
        let e01 = HullElement::monomial(Index::At(2), int(1));
        let x = Series::from_terms(
            &q(),
            &zz,
            [(HullElement::zero(), coeff(1)), (e01.clone(), coeff(1))],
        )
        .unwrap();
        let res = trunc_inverse(&x, 2).unwrap();
        let expect = Series::from_terms(
            &q(),
            &zz,
            [(HullElement::zero(), coeff(1)), (e01, coeff(-1))],
        )
        .unwrap();
        assert_eq!(res.terms, expect);
        let rem = x
            .checked_mul(&res.terms)
            .unwrap()
            .checked_sub(&Series::one(&q(), &zz))
            .unwrap();
        assert_eq!(
            s_vmin(&rem),
            Val::Finite(HullElement::monomial(Index::At(2), int(2)))
        );
    }

    #[test]
    fn square_roots() {
        let x = poly(&gz(), &[(int(2), int(4))]);
        assert_eq!(
            trunc_sqrt(&x, 1).unwrap().terms,
            poly(&gz(), &[(int(1), int(2))])
        );
        let y = poly(&gz(), &[(int(0), int(1)), (int(1), int(1))]);
        let res = trunc_sqrt(&y, 3).unwrap();
        assert_eq!(
            res.terms,
            poly(
                &gz(),
                &[(int(0), int(1)), (int(1), rat(1, 2)), (int(2), rat(-1, 8))]
            )
        );
        let rem = y
            .checked_sub(&res.terms.checked_mul(&res.terms).unwrap())
            .unwrap();
        assert_eq!(s_vmin(&rem), Val::Finite(e1(int(3))));
        let t = poly(&gz(), &[(int(1), int(1))]);
        assert!(matches!(
            trunc_sqrt(&t, 1),
            Err(Error::ExponentNotDivisible(_))
        ));
        let two = poly(&gz(), &[(int(0), int(2))]);
        assert!(matches!(
            trunc_sqrt(&two, 1),
            Err(Error::CoefficientNotSquare(_))
        ));
    }

    #[test]
    fn quadratic_coefficients() {
        let k = CoefficientField::quadratic(2).unwrap();
        let x = Series::monomial(&k, &gq(), coeff(2), e1(rat(1, 3))).unwrap();
        let res = trunc_sqrt(&x, 1).unwrap();
        let expect =
            Series::monomial(&k, &gq(), QuadExt::sqrt_of(2).unwrap(), e1(rat(1, 6))).unwrap();
        assert_eq!(res.terms, expect);
    }

    #[test]
    fn mismatch_is_an_error() {
        let a = Series::one(&q(), &gz());
        let b = Series::one(&q(), &gq());
        assert!(matches!(
            a.checked_add(&b),
            Err(Error::DescriptorMismatch(_))
        ));
    }

    #[test]
    fn canonical_printing() {
        let x = poly(&gq(), &[(int(2), int(1)), (rat(1, 2), int(3))]);
        assert_eq!(x.to_string(), "3*t^({1: 1/2}) + 1*t^({1: 2})");
        assert_eq!(Series::zero(&q(), &gq()).to_string(), "0");
    }
}
