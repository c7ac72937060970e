use std::fmt;

use serde::Serialize;

use super::subgroup::{PrimeSet, RationalSubgroup};
use crate::numeric::nth_odd_prime;

/// Position in the index set. Finite positions count from 1; `Top` is the
/// final index of an `omega + 1` presentation. Smaller indices carry larger
/// archimedean classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Index {
    At(u64),
    Top,
}

impl fmt::Display for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Index::At(n) => write!(f, "{n}"),
            Index::Top => write!(f, "top"),
        }
    }
}

/// Uniform description of the components of an `omega`-indexed sum.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub enum Rule {
    Constant(RationalSubgroup),
    /// Component `n` is the localization at the first `n + skip` odd primes.
    /// `skip = 0` is the classic scheme; nonzero skips arise as convex
    /// subgroups of it.
    PrefixPrimes {
        skip: u64,
    },
}

impl Rule {
    pub fn component(&self, n: u64) -> RationalSubgroup {
        match self {
            Rule::Constant(c) => c.clone(),
            Rule::PrefixPrimes { skip } => {
                let primes = (1..=n + skip).map(nth_odd_prime).collect();
                RationalSubgroup {
                    allowed: PrimeSet::Finite(primes),
                }
            }
        }
    }

    /// The rule describing the components at indices `k+1, k+2, ...`.
    pub fn shifted(&self, k: u64) -> Rule {
        match self {
            Rule::Constant(c) => Rule::Constant(c.clone()),
            Rule::PrefixPrimes { skip } => Rule::PrefixPrimes { skip: skip + k },
        }
    }

    /// Whether every component from index `from` on is `p`-divisible, and
    /// otherwise the last index below which divisibility fails.
    pub(crate) fn p_divisible_from(&self, p: u64) -> Option<u64> {
        match self {
            Rule::Constant(c) => c.is_p_divisible(p).then_some(1),
            Rule::PrefixPrimes { skip } => {
                if p == 2 {
                    return None;
                }
                // p is the i-th odd prime; component n contains it iff n + skip >= i
                let mut i = 1;
                while nth_odd_prime(i) < p {
                    i += 1;
                }
                Some(i.saturating_sub(*skip).max(1))
            }
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::Constant(c) => write!(f, "const({c})"),
            Rule::PrefixPrimes { skip: 0 } => write!(f, "prefixprimes"),
            Rule::PrefixPrimes { skip } => write!(f, "prefixprimes({skip})"),
        }
    }
}

/// An ordered abelian group presented as a Hahn sum of rational subgroups.
/// An empty `FiniteLex` is the trivial group.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub enum GroupDescriptor {
    FiniteLex(Vec<RationalSubgroup>),
    OmegaLex(Rule),
    OmegaPlusOneLex(Rule, RationalSubgroup),
}

impl GroupDescriptor {
    pub fn single(c: RationalSubgroup) -> Self {
        GroupDescriptor::FiniteLex(vec![c])
    }

    pub fn trivial() -> Self {
        GroupDescriptor::FiniteLex(Vec::new())
    }

    pub fn is_trivial(&self) -> bool {
        matches!(self, GroupDescriptor::FiniteLex(cs) if cs.is_empty())
    }

    pub fn contains_index(&self, i: Index) -> bool {
        match (self, i) {
            (GroupDescriptor::FiniteLex(cs), Index::At(n)) => n >= 1 && n as usize <= cs.len(),
            (GroupDescriptor::FiniteLex(_), Index::Top) => false,
            (GroupDescriptor::OmegaLex(_), Index::At(n)) => n >= 1,
            (GroupDescriptor::OmegaLex(_), Index::Top) => false,
            (GroupDescriptor::OmegaPlusOneLex(..), Index::At(n)) => n >= 1,
            (GroupDescriptor::OmegaPlusOneLex(..), Index::Top) => true,
        }
    }

    pub fn component(&self, i: Index) -> Option<RationalSubgroup> {
        if !self.contains_index(i) {
            return None;
        }
        Some(match (self, i) {
            (GroupDescriptor::FiniteLex(cs), Index::At(n)) => cs[n as usize - 1].clone(),
            (GroupDescriptor::OmegaLex(r), Index::At(n)) => r.component(n),
            (GroupDescriptor::OmegaPlusOneLex(r, _), Index::At(n)) => r.component(n),
            (GroupDescriptor::OmegaPlusOneLex(_, top), Index::Top) => top.clone(),
            _ => unreachable!(),
        })
    }

    pub fn first_index(&self) -> Option<Index> {
        (!self.is_trivial()).then_some(Index::At(1))
    }

    /// The maximal index, if the index set has one.
    pub fn last_index(&self) -> Option<Index> {
        match self {
            GroupDescriptor::FiniteLex(cs) if cs.is_empty() => None,
            GroupDescriptor::FiniteLex(cs) => Some(Index::At(cs.len() as u64)),
            GroupDescriptor::OmegaLex(_) => None,
            GroupDescriptor::OmegaPlusOneLex(..) => Some(Index::Top),
        }
    }

    pub fn last_component(&self) -> Option<RationalSubgroup> {
        self.last_index().and_then(|i| self.component(i))
    }

    pub fn successor(&self, i: Index) -> Option<Index> {
        match i {
            Index::At(n) => {
                let next = Index::At(n + 1);
                if self.contains_index(next) {
                    Some(next)
                } else {
                    None
                }
            }
            Index::Top => None,
        }
    }

    /// Immediate predecessor; `Top` has none.
    pub fn predecessor(&self, i: Index) -> Option<Index> {
        match i {
            Index::At(n) if n > 1 => Some(Index::At(n - 1)),
            _ => None,
        }
    }

    /// Number of finite-position components, `None` when infinite.
    pub fn rank(&self) -> Option<usize> {
        match self {
            GroupDescriptor::FiniteLex(cs) => Some(cs.len()),
            _ => None,
        }
    }
}

impl fmt::Display for GroupDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupDescriptor::FiniteLex(cs) => match cs.len() {
                0 => write!(f, "0"),
                1 => write!(f, "{}", cs[0]),
                _ => {
                    let parts: Vec<String> = cs.iter().map(|c| c.to_string()).collect();
                    write!(f, "lex({})", parts.join(", "))
                }
            },
            GroupDescriptor::OmegaLex(r) => write!(f, "omega({r})"),
            GroupDescriptor::OmegaPlusOneLex(r, top) => write!(f, "omegaplus1({r}, {top})"),
        }
    }
}

/// A convex subgroup, described by the final segment of the index set it
/// occupies: `{g : v(g) > index}`, the whole group, the top component alone,
/// or `{0}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum FinalSegment {
    WholeGroup,
    FromIndexExclusive(Index),
    /// `{g : v(g) = top}` in an `omega + 1` presentation; no finite index
    /// bounds this segment from below.
    TopOnly,
    Trivial,
}

/// First index contained in a segment, ordered so that later starts mean
/// smaller segments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum SegmentStart {
    At(u64),
    Top,
    Nothing,
}

impl FinalSegment {
    /// Canonical segment of indices strictly above `i`.
    pub fn after(g: &GroupDescriptor, i: Index) -> FinalSegment {
        match i {
            Index::At(0) => FinalSegment::WholeGroup,
            Index::Top => FinalSegment::Trivial,
            Index::At(n) => match g {
                GroupDescriptor::FiniteLex(cs) if n as usize >= cs.len() => FinalSegment::Trivial,
                _ => FinalSegment::FromIndexExclusive(Index::At(n)),
            },
        }
    }

    fn start(&self) -> SegmentStart {
        match self {
            FinalSegment::WholeGroup => SegmentStart::At(1),
            FinalSegment::FromIndexExclusive(Index::At(n)) => SegmentStart::At(n + 1),
            FinalSegment::FromIndexExclusive(Index::Top) | FinalSegment::Trivial => {
                SegmentStart::Nothing
            }
            FinalSegment::TopOnly => SegmentStart::Top,
        }
    }

    pub fn contains_index(&self, i: Index) -> bool {
        match (self.start(), i) {
            (SegmentStart::At(s), Index::At(n)) => n >= s,
            (SegmentStart::At(_), Index::Top) => true,
            (SegmentStart::Top, Index::Top) => true,
            _ => false,
        }
    }

    pub fn is_subset_of(&self, other: &FinalSegment) -> bool {
        self.start() >= other.start()
    }

    /// Intersection of two convex subgroups (final segments are nested).
    pub fn meet(self, other: FinalSegment) -> FinalSegment {
        if self.is_subset_of(&other) {
            self
        } else {
            other
        }
    }

    /// `G / S`, keeping the components at indices outside the segment.
    pub fn quotient(&self, g: &GroupDescriptor) -> GroupDescriptor {
        match (self, g) {
            (FinalSegment::Trivial, _) | (FinalSegment::FromIndexExclusive(Index::Top), _) => {
                g.clone()
            }
            (FinalSegment::WholeGroup, _) => GroupDescriptor::trivial(),
            (FinalSegment::TopOnly, GroupDescriptor::OmegaPlusOneLex(r, _)) => {
                GroupDescriptor::OmegaLex(r.clone())
            }
            (FinalSegment::TopOnly, _) => g.clone(),
            (FinalSegment::FromIndexExclusive(Index::At(k)), _) => GroupDescriptor::FiniteLex(
                (1..=*k).filter_map(|n| g.component(Index::At(n))).collect(),
            ),
        }
    }

    /// The convex subgroup itself as a group, re-indexed from 1.
    pub fn subgroup(&self, g: &GroupDescriptor) -> GroupDescriptor {
        match (self, g) {
            (FinalSegment::Trivial, _) | (FinalSegment::FromIndexExclusive(Index::Top), _) => {
                GroupDescriptor::trivial()
            }
            (FinalSegment::WholeGroup, _) => g.clone(),
            (FinalSegment::TopOnly, GroupDescriptor::OmegaPlusOneLex(_, top)) => {
                GroupDescriptor::single(top.clone())
            }
            (FinalSegment::TopOnly, _) => GroupDescriptor::trivial(),
            (FinalSegment::FromIndexExclusive(Index::At(k)), GroupDescriptor::FiniteLex(cs)) => {
                GroupDescriptor::FiniteLex(cs.iter().skip(*k as usize).cloned().collect())
            }
            (FinalSegment::FromIndexExclusive(Index::At(k)), GroupDescriptor::OmegaLex(r)) => {
                GroupDescriptor::OmegaLex(r.shifted(*k))
            }
            (
                FinalSegment::FromIndexExclusive(Index::At(k)),
                GroupDescriptor::OmegaPlusOneLex(r, top),
            ) => GroupDescriptor::OmegaPlusOneLex(r.shifted(*k), top.clone()),
        }
    }
}

impl fmt::Display for FinalSegment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FinalSegment::WholeGroup => write!(f, "whole"),
            FinalSegment::FromIndexExclusive(i) => write!(f, "after({i})"),
            FinalSegment::TopOnly => write!(f, "top"),
            FinalSegment::Trivial => write!(f, "trivial"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z() -> RationalSubgroup {
        RationalSubgroup::integers()
    }

    fn a() -> RationalSubgroup {
        RationalSubgroup::localization(vec![2]).unwrap()
    }

    #[test]
    fn prefix_primes_components() {
        let r = Rule::PrefixPrimes { skip: 0 };
        assert_eq!(r.component(1).to_string(), "loc{3}");
        assert_eq!(r.component(3).to_string(), "loc{3,5,7}");
        assert_eq!(r.shifted(2).component(1), r.component(3));
    }

    #[test]
    fn quotients_truncate() {
        let zz = GroupDescriptor::FiniteLex(vec![z(), z()]);
        let s = FinalSegment::FromIndexExclusive(Index::At(1));
        assert_eq!(s.quotient(&zz), GroupDescriptor::single(z()));
        assert_eq!(FinalSegment::Trivial.quotient(&zz), zz);
        assert_eq!(
            FinalSegment::WholeGroup.quotient(&zz),
            GroupDescriptor::trivial()
        );
        let g = GroupDescriptor::OmegaPlusOneLex(Rule::Constant(z()), a());
        assert_eq!(
            FinalSegment::TopOnly.quotient(&g),
            GroupDescriptor::OmegaLex(Rule::Constant(z()))
        );
        assert_eq!(
            FinalSegment::TopOnly.subgroup(&g),
            GroupDescriptor::single(a())
        );
    }

    #[test]
    fn segment_order() {
        let s1 = FinalSegment::FromIndexExclusive(Index::At(1));
        let s3 = FinalSegment::FromIndexExclusive(Index::At(3));
        assert!(s3.is_subset_of(&s1));
        assert!(FinalSegment::TopOnly.is_subset_of(&s3));
        assert!(FinalSegment::Trivial.is_subset_of(&FinalSegment::TopOnly));
        assert_eq!(s1.meet(FinalSegment::WholeGroup), s1);
        assert!(s1.contains_index(Index::Top));
        assert!(!s1.contains_index(Index::At(1)));
        assert!(FinalSegment::TopOnly.contains_index(Index::Top));
    }

    #[test]
    fn display_is_canonical() {
        let g = GroupDescriptor::FiniteLex(vec![RationalSubgroup::rationals(), a()]);
        assert_eq!(g.to_string(), "lex(Q, loc{2})");
        assert_eq!(
            GroupDescriptor::OmegaLex(Rule::PrefixPrimes { skip: 0 }).to_string(),
            "omega(prefixprimes)"
        );
    }
}
