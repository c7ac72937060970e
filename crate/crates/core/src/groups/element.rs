use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Serialize, Serializer};

use super::descriptor::{GroupDescriptor, Index};
use crate::error::{Error, Result};
use crate::numeric::Rational;

/// A value that may be the distinguished top element `Infinity` (the
/// valuation of zero). Finite values order below it.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Val<T> {
    Finite(T),
    Infinity,
}

impl<T> Val<T> {
    pub fn finite(self) -> Option<T> {
        match self {
            Val::Finite(t) => Some(t),
            Val::Infinity => None,
        }
    }

    pub fn as_finite(&self) -> Option<&T> {
        match self {
            Val::Finite(t) => Some(t),
            Val::Infinity => None,
        }
    }
}

impl<T: fmt::Display> fmt::Display for Val<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Val::Finite(t) => write!(f, "{t}"),
            Val::Infinity => write!(f, "inf"),
        }
    }
}

/// Finitely supported map from indices to rationals: an element of the
/// divisible hull. Support is sorted by index with no zero entries.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct HullElement {
    support: Vec<(Index, Rational)>,
}

impl HullElement {
    pub fn zero() -> Self {
        HullElement::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (Index, Rational)>) -> Self {
        let mut v: Vec<(Index, Rational)> = pairs.into_iter().collect();
        v.sort_by_key(|a| a.0);
        let mut out: Vec<(Index, Rational)> = Vec::with_capacity(v.len());
        for (i, r) in v {
            match out.last_mut() {
                Some((j, acc)) if *j == i => *acc += r,
                _ => out.push((i, r)),
            }
        }
        out.retain(|(_, r)| !r.is_zero());
        HullElement { support: out }
    }

    /// `r * 1_i`.
    pub fn monomial(i: Index, r: Rational) -> Self {
        Self::from_pairs([(i, r)])
    }

    pub fn unit(i: Index) -> Self {
        Self::monomial(i, Rational::from_integer(BigInt::from(1)))
    }

    pub fn support(&self) -> &[(Index, Rational)] {
        &self.support
    }

    pub fn indices(&self) -> impl Iterator<Item = Index> + '_ {
        self.support.iter().map(|(i, _)| *i)
    }

    pub fn coefficient(&self, i: Index) -> Rational {
        self.support
            .binary_search_by(|(j, _)| j.cmp(&i))
            .map(|k| self.support[k].1.clone())
            .unwrap_or_else(|_| Rational::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.support.is_empty()
    }

    /// Natural valuation: least occupied index, `Infinity` for zero.
    pub fn nat_valuation(&self) -> Val<Index> {
        match self.support.first() {
            Some((i, _)) => Val::Finite(*i),
            None => Val::Infinity,
        }
    }

    pub fn sign(&self) -> i8 {
        match self.support.first() {
            None => 0,
            Some((_, r)) if r.is_positive() => 1,
            Some(_) => -1,
        }
    }

    pub fn scale(&self, r: &Rational) -> Self {
        Self::from_pairs(self.support.iter().map(|(i, c)| (*i, c * r)))
    }

    /// Coordinates strictly below `i`.
    pub fn truncate_below(&self, i: Index) -> Self {
        HullElement {
            support: self
                .support
                .iter()
                .filter(|(j, _)| *j < i)
                .cloned()
                .collect(),
        }
    }

    pub fn abs(&self) -> Self {
        if self.sign() < 0 {
            -self
        } else {
            self.clone()
        }
    }

    /// Common multiple of coordinate denominators: `self * n` has integer
    /// coordinates.
    pub fn denominator_lcm(&self) -> BigInt {
        use num_integer::Integer;
        self.support
            .iter()
            .fold(BigInt::from(1), |acc, (_, r)| acc.lcm(r.denom()))
    }
}

impl Ord for HullElement {
    fn cmp(&self, other: &Self) -> Ordering {
        // lexicographic: the leading coordinate of the difference decides
        let (mut a, mut b) = (
            self.support.iter().peekable(),
            other.support.iter().peekable(),
        );
        loop {
            match (a.peek(), b.peek()) {
                (None, None) => return Ordering::Equal,
                (Some((_, x)), None) => return x.cmp(&Rational::zero()),
                (None, Some((_, y))) => return Rational::zero().cmp(y),
                (Some((i, x)), Some((j, y))) => match i.cmp(j) {
                    Ordering::Less => return x.cmp(&Rational::zero()),
                    Ordering::Greater => return Rational::zero().cmp(y),
                    Ordering::Equal => {
                        let c = x.cmp(y);
                        if c != Ordering::Equal {
                            return c;
                        }
                        a.next();
                        b.next();
                    }
                },
            }
        }
    }
}

impl PartialOrd for HullElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for &HullElement {
    type Output = HullElement;
    fn add(self, rhs: &HullElement) -> HullElement {
        HullElement::from_pairs(self.support.iter().chain(rhs.support.iter()).cloned())
    }
}

impl Sub for &HullElement {
    type Output = HullElement;
    fn sub(self, rhs: &HullElement) -> HullElement {
        self + &(-rhs)
    }
}

impl Neg for &HullElement {
    type Output = HullElement;
    fn neg(self) -> HullElement {
        HullElement {
            support: self.support.iter().map(|(i, r)| (*i, -r)).collect(),
        }
    }
}

impl fmt::Display for HullElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, (i, r)) in self.support.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{i}: {r}")?;
        }
        write!(f, "}}")
    }
}

impl Serialize for HullElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupOp {
    Add,
    Neg,
    Cmp,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupOpResult {
    Element(HullElement),
    Ordering(Ordering),
}

/// Coordinatewise addition/negation or lexicographic comparison. `y` is
/// ignored by `Neg`.
pub fn g_ops(x: &HullElement, y: &HullElement, op: GroupOp) -> GroupOpResult {
    match op {
        GroupOp::Add => GroupOpResult::Element(x + y),
        GroupOp::Neg => GroupOpResult::Element(-x),
        GroupOp::Cmp => GroupOpResult::Ordering(x.cmp(y)),
    }
}

/// Whether every coordinate lies in its component subgroup.
pub fn g_member(x: &HullElement, g: &GroupDescriptor) -> Result<bool> {
    for (i, r) in x.support() {
        let c = g
            .component(*i)
            .ok_or_else(|| Error::IndexOutOfRange(i.to_string()))?;
        if !c.contains(r) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Least index whose coordinate leaves its component, if any.
pub fn first_failure(x: &HullElement, g: &GroupDescriptor) -> Result<Option<Index>> {
    for (i, r) in x.support() {
        let c = g
            .component(*i)
            .ok_or_else(|| Error::IndexOutOfRange(i.to_string()))?;
        if !c.contains(r) {
            return Ok(Some(*i));
        }
    }
    Ok(None)
}

/// An element of a concrete group; membership is checked on construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupElement {
    value: HullElement,
    group: GroupDescriptor,
}

impl GroupElement {
    pub fn new(value: HullElement, group: &GroupDescriptor) -> Result<Self> {
        if !g_member(&value, group)? {
            return Err(Error::NotInGroup(value.to_string()));
        }
        Ok(GroupElement {
            value,
            group: group.clone(),
        })
    }

    pub fn zero(group: &GroupDescriptor) -> Self {
        GroupElement {
            value: HullElement::zero(),
            group: group.clone(),
        }
    }

    pub fn value(&self) -> &HullElement {
        &self.value
    }

    pub fn group(&self) -> &GroupDescriptor {
        &self.group
    }

    pub fn into_value(self) -> HullElement {
        self.value
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.value.fmt(f)
    }
}

/// `y` with `n * y = x` inside the group, if it exists.
pub fn divide_by(x: &GroupElement, n: u64) -> Option<GroupElement> {
    if n == 0 {
        return None;
    }
    let y = x
        .value
        .scale(&Rational::new(BigInt::from(1), BigInt::from(n)));
    GroupElement::new(y, &x.group).ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::subgroup::RationalSubgroup;
    use crate::numeric::{int, rat};

    fn e(pairs: &[(u64, Rational)]) -> HullElement {
        HullElement::from_pairs(pairs.iter().map(|(i, r)| (Index::At(*i), r.clone())))
    }

    fn aa() -> GroupDescriptor {
        let a = RationalSubgroup::localization(vec![2]).unwrap();
        GroupDescriptor::FiniteLex(vec![a.clone(), a])
    }

    #[test]
    fn membership() {
        let a = GroupDescriptor::single(RationalSubgroup::localization(vec![2]).unwrap());
        assert!(g_member(&e(&[(1, rat(1, 2))]), &a).unwrap());
        assert!(!g_member(&e(&[(1, rat(1, 3))]), &aa()).unwrap());
        let b = GroupDescriptor::single(RationalSubgroup::at_least(3).unwrap());
        assert!(!g_member(&e(&[(1, rat(5, 6))]), &b).unwrap());
        assert!(matches!(
            g_member(&e(&[(3, int(1))]), &aa()),
            Err(Error::IndexOutOfRange(_))
        ));
    }

    #[test]
    fn lexicographic_order() {
        let x = e(&[(1, int(1))]);
        let y = e(&[(2, int(100))]);
        assert_eq!(
            g_ops(&x, &y, GroupOp::Cmp),
            GroupOpResult::Ordering(Ordering::Greater)
        );
        assert!(HullElement::zero() < y);
        assert!(-&x < HullElement::zero());
        assert!(e(&[(1, int(1)), (2, int(-5))]) < x);
    }

    #[test]
    fn addition_normalizes() {
        let x = e(&[(1, rat(1, 3)), (2, int(5))]);
        assert!((&x + &(-&x)).is_zero());
        let h = e(&[(1, rat(1, 2))]);
        assert_eq!(&h + &h, e(&[(1, int(1))]));
    }

    #[test]
    fn valuations() {
        assert_eq!(
            e(&[(2, rat(1, 3))]).nat_valuation(),
            Val::Finite(Index::At(2))
        );
        assert_eq!(HullElement::zero().nat_valuation(), Val::Infinity);
        assert_eq!(
            e(&[(1, int(5)), (2, int(-1))]).nat_valuation(),
            Val::Finite(Index::At(1))
        );
    }

    #[test]
    fn division_in_group() {
        let z = GroupDescriptor::single(RationalSubgroup::integers());
        let one = GroupElement::new(e(&[(1, int(1))]), &z).unwrap();
        assert!(divide_by(&one, 2).is_none());
        let a = GroupDescriptor::single(RationalSubgroup::localization(vec![2]).unwrap());
        let one = GroupElement::new(e(&[(1, int(1))]), &a).unwrap();
        assert_eq!(divide_by(&one, 4).unwrap().value(), &e(&[(1, rat(1, 4))]));
        let b = GroupDescriptor::single(RationalSubgroup::at_least(3).unwrap());
        let x = GroupElement::new(e(&[(1, rat(3, 5))]), &b).unwrap();
        assert_eq!(divide_by(&x, 5).unwrap().value(), &e(&[(1, rat(3, 25))]));
    }

    #[test]
    fn construction_rejects_non_members() {
        assert!(matches!(
            GroupElement::new(e(&[(1, rat(1, 3))]), &aa()),
            Err(Error::NotInGroup(_))
        ));
    }
}
