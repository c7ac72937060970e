use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::{is_prime, Rational};

/// Set of primes allowed in reduced denominators.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub enum PrimeSet {
    Empty,
    Finite(Vec<u64>),
    AllAtLeast(u64),
    All,
}

impl PrimeSet {
    /// Canonical constructor: sorts, dedups, rejects non-primes and folds
    /// degenerate forms (`Finite([])` is `Empty`, `AllAtLeast(2)` is `All`).
    pub fn finite(mut primes: Vec<u64>) -> Result<Self> {
        if let Some(&bad) = primes.iter().find(|&&p| !is_prime(p)) {
            return Err(Error::Precondition(format!("{bad} is not prime")));
        }
        primes.sort_unstable();
        primes.dedup();
        Ok(if primes.is_empty() {
            PrimeSet::Empty
        } else {
            PrimeSet::Finite(primes)
        })
    }

    pub fn at_least(bound: u64) -> Result<Self> {
        if !is_prime(bound) {
            return Err(Error::Precondition(format!("{bound} is not prime")));
        }
        Ok(if bound == 2 {
            PrimeSet::All
        } else {
            PrimeSet::AllAtLeast(bound)
        })
    }

    pub fn contains(&self, p: u64) -> bool {
        match self {
            PrimeSet::Empty => false,
            PrimeSet::Finite(ps) => ps.binary_search(&p).is_ok(),
            PrimeSet::AllAtLeast(b) => p >= *b,
            PrimeSet::All => true,
        }
    }

    /// Smallest prime not in the set, if any.
    pub fn least_excluded(&self) -> Option<u64> {
        match self {
            PrimeSet::All => None,
            PrimeSet::AllAtLeast(_) | PrimeSet::Empty => Some(2),
            PrimeSet::Finite(ps) => {
                let mut p = 2;
                while ps.binary_search(&p).is_ok() {
                    p = crate::numeric::next_prime(p);
                }
                Some(p)
            }
        }
    }

    /// Whether every prime factor of `n` lies in the set.
    pub fn admits(&self, n: &BigInt) -> bool {
        let one = BigInt::one();
        let mut m = n.clone();
        if m < BigInt::zero() {
            m = -m;
        }
        match self {
            PrimeSet::All => true,
            PrimeSet::Empty => m == one,
            PrimeSet::Finite(ps) => {
                for &p in ps {
                    let bp = BigInt::from(p);
                    while m.is_multiple_of(&bp) {
                        m /= &bp;
                    }
                }
                m == one
            }
            PrimeSet::AllAtLeast(b) => {
                let mut p = 2u64;
                while p < *b {
                    if m.is_multiple_of(&BigInt::from(p)) {
                        return false;
                    }
                    p = crate::numeric::next_prime(p);
                }
                true
            }
        }
    }
}

/// The subgroup of `Q` of rationals whose reduced denominator factors over an
/// allowed prime set. `Empty` is `Z`, `All` is `Q`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct RationalSubgroup {
    pub allowed: PrimeSet,
}

impl RationalSubgroup {
    pub fn integers() -> Self {
        RationalSubgroup {
            allowed: PrimeSet::Empty,
        }
    }

    pub fn rationals() -> Self {
        RationalSubgroup {
            allowed: PrimeSet::All,
        }
    }

    pub fn localization(primes: Vec<u64>) -> Result<Self> {
        Ok(RationalSubgroup {
            allowed: PrimeSet::finite(primes)?,
        })
    }

    pub fn at_least(bound: u64) -> Result<Self> {
        Ok(RationalSubgroup {
            allowed: PrimeSet::at_least(bound)?,
        })
    }

    pub fn contains(&self, r: &Rational) -> bool {
        self.allowed.admits(r.denom())
    }

    pub fn is_dense(&self) -> bool {
        self.allowed != PrimeSet::Empty
    }

    pub fn is_divisible(&self) -> bool {
        self.allowed == PrimeSet::All
    }

    pub fn is_p_divisible(&self, p: u64) -> bool {
        self.allowed.contains(p)
    }

    /// Whether `n * y = r` has a solution `y` in the subgroup, i.e. `r / n`
    /// is a member.
    pub fn divides(&self, r: &Rational, n: u64) -> bool {
        self.contains(&(r / Rational::from_integer(BigInt::from(n))))
    }

    /// A prime `p` that is not allowed, chosen as the smallest one.
    pub fn non_divisible_prime(&self) -> Option<u64> {
        self.allowed.least_excluded()
    }

    /// Some prime the subgroup is divisible by, for approximation searches.
    pub fn some_allowed_prime(&self) -> Option<u64> {
        match &self.allowed {
            PrimeSet::Empty => None,
            PrimeSet::Finite(ps) => ps.first().copied(),
            PrimeSet::AllAtLeast(b) => Some(*b),
            PrimeSet::All => Some(2),
        }
    }

    /// Member strictly inside `(x, x + width)`, found by refining the
    /// denominator `p^k` of an allowed prime. For `Z` only integers are tried.
    pub fn approximate_above(&self, x: &Rational, width: &Rational) -> Option<Rational> {
        self.refine(
            |scale| (x * scale).floor() + Rational::one(),
            |c| c < &(x + width),
        )
    }

    /// Member strictly inside `(x - width, x)`.
    pub fn approximate_below(&self, x: &Rational, width: &Rational) -> Option<Rational> {
        self.refine(
            |scale| (x * scale).ceil() - Rational::one(),
            |c| c > &(x - width),
        )
    }

    fn refine(
        &self,
        step: impl Fn(&Rational) -> Rational,
        accept: impl Fn(&Rational) -> bool,
    ) -> Option<Rational> {
        let Some(p) = self.some_allowed_prime() else {
            let c = step(&Rational::one());
            return accept(&c).then_some(c);
        };
        let p = Rational::from_integer(BigInt::from(p));
        let mut scale = p.clone();
        // the step shrinks geometrically, so this terminates for width > 0
        loop {
            let c = step(&scale) / &scale;
            if accept(&c) {
                return Some(c);
            }
            scale *= &p;
        }
    }

    /// All admissible denominators up to `max`, in increasing order.
    pub fn denominators_up_to(&self, max: u64) -> Vec<u64> {
        (1..=max.max(1))
            .filter(|&q| self.allowed.admits(&BigInt::from(q)))
            .collect()
    }
}

impl fmt::Display for RationalSubgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.allowed {
            PrimeSet::Empty => write!(f, "Z"),
            PrimeSet::All => write!(f, "Q"),
            PrimeSet::AllAtLeast(b) => write!(f, "loc{{>={b}}}"),
            PrimeSet::Finite(ps) => {
                let list: Vec<String> = ps.iter().map(|p| p.to_string()).collect();
                write!(f, "loc{{{}}}", list.join(","))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rat;

    #[test]
    fn membership_by_denominator() {
        let a = RationalSubgroup::localization(vec![2]).unwrap();
        assert!(a.contains(&rat(1, 2)));
        assert!(a.contains(&rat(-7, 64)));
        assert!(!a.contains(&rat(1, 3)));
        let b = RationalSubgroup::at_least(3).unwrap();
        assert!(!b.contains(&rat(5, 6)));
        assert!(b.contains(&rat(3, 25)));
        assert!(RationalSubgroup::integers().contains(&rat(4, 2)));
        assert!(!RationalSubgroup::integers().contains(&rat(1, 2)));
    }

    #[test]
    fn canonical_prime_sets() {
        assert_eq!(
            PrimeSet::finite(vec![5, 3, 3]).unwrap(),
            PrimeSet::Finite(vec![3, 5])
        );
        assert_eq!(PrimeSet::finite(vec![]).unwrap(), PrimeSet::Empty);
        assert_eq!(PrimeSet::at_least(2).unwrap(), PrimeSet::All);
        assert!(PrimeSet::finite(vec![4]).is_err());
        assert!(PrimeSet::at_least(9).is_err());
    }

    #[test]
    fn excluded_primes() {
        assert_eq!(
            PrimeSet::finite(vec![2, 3, 7]).unwrap().least_excluded(),
            Some(5)
        );
        assert_eq!(PrimeSet::AllAtLeast(3).least_excluded(), Some(2));
        assert_eq!(PrimeSet::All.least_excluded(), None);
    }

    #[test]
    fn divisibility() {
        let a = RationalSubgroup::localization(vec![2]).unwrap();
        assert!(a.divides(&rat(1, 1), 4));
        assert!(!a.divides(&rat(1, 1), 3));
        assert!(a.is_p_divisible(2));
        assert_eq!(a.denominators_up_to(10), vec![1, 2, 4, 8]);
    }

    #[test]
    fn approximation_by_refinement() {
        let a = RationalSubgroup::localization(vec![2]).unwrap();
        assert_eq!(a.approximate_above(&rat(1, 3), &rat(1, 1)), Some(rat(1, 2)));
        assert_eq!(
            a.approximate_above(&rat(1, 3), &rat(1, 100)),
            Some(rat(43, 128))
        );
        assert_eq!(
            a.approximate_below(&rat(1, 3), &rat(1, 10)),
            Some(rat(1, 4))
        );
        let z = RationalSubgroup::integers();
        assert_eq!(z.approximate_above(&rat(1, 2), &rat(1, 1)), Some(rat(1, 1)));
        assert_eq!(z.approximate_above(&rat(1, 2), &rat(1, 4)), None);
    }
}
