//! Decision procedures on group presentations.
//!
//! Convex subgroups of a Hahn sum are exactly the sums over final segments of
//! the index set, so every property below reduces to a statement about which
//! components are dense, divisible or `p`-divisible and where they sit.

use super::descriptor::{FinalSegment, GroupDescriptor, Index, Rule};
use super::element::{first_failure, HullElement};
use super::subgroup::RationalSubgroup;
use crate::error::{Error, Result};
use crate::numeric::Rational;

fn rule_all(rule: &Rule, pred: impl Fn(&RationalSubgroup) -> bool) -> bool {
    match rule {
        Rule::Constant(c) => pred(c),
        // prefix components are never Z and never Q
        Rule::PrefixPrimes { .. } => pred(&rule.component(1)) && pred(&rule.component(2)),
    }
}

/// Whether every component of the group satisfies `pred`. For prefix rules
/// `pred` must be one of the structural predicates used in this module
/// (divisible, dense, is-Z), which agree on all prefix components.
fn all_components(g: &GroupDescriptor, pred: impl Fn(&RationalSubgroup) -> bool) -> bool {
    match g {
        GroupDescriptor::FiniteLex(cs) => cs.iter().all(pred),
        GroupDescriptor::OmegaLex(r) => rule_all(r, pred),
        GroupDescriptor::OmegaPlusOneLex(r, top) => pred(top) && rule_all(r, pred),
    }
}

/// Components at every non-maximal index satisfy `pred`.
fn non_maximal_components(g: &GroupDescriptor, pred: impl Fn(&RationalSubgroup) -> bool) -> bool {
    match g {
        GroupDescriptor::FiniteLex(cs) => cs.iter().rev().skip(1).all(pred),
        GroupDescriptor::OmegaLex(r) | GroupDescriptor::OmegaPlusOneLex(r, _) => rule_all(r, pred),
    }
}

pub fn is_densely_ordered(g: &GroupDescriptor) -> bool {
    match g.last_index() {
        None => !g.is_trivial(),
        Some(_) => g.last_component().is_some_and(|c| c.is_dense()),
    }
}

/// `Z` is a convex subgroup: there is a last index and its component is `Z`.
pub fn is_discretely_ordered(g: &GroupDescriptor) -> bool {
    g.last_component().is_some_and(|c| !c.is_dense())
}

/// Every quotient by a nontrivial convex subgroup is divisible.
pub fn is_regular(g: &GroupDescriptor) -> bool {
    non_maximal_components(g, RationalSubgroup::is_divisible)
}

pub fn is_dense_in_hull(g: &GroupDescriptor) -> bool {
    is_regular(g) && is_densely_ordered(g)
}

/// All archimedean components divisible, i.e. `G -> div G` is immediate.
pub fn is_immediate_in_hull(g: &GroupDescriptor) -> bool {
    all_components(g, RationalSubgroup::is_divisible)
}

pub fn is_divisible(g: &GroupDescriptor) -> bool {
    is_immediate_in_hull(g)
}

/// Whether `x` is a limit point of `G` in `div G` (from at least one side).
///
/// Members are limit points exactly when `G` is densely ordered. A non-member
/// must agree exactly with some element of `G` before its first failing
/// index `N`, so the achievable approximation is never finer than level `N`;
/// it is a limit point iff `N` is the last index with a dense component.
pub fn is_limit_point(x: &HullElement, g: &GroupDescriptor) -> Result<bool> {
    match first_failure(x, g)? {
        None => Ok(is_densely_ordered(g)),
        Some(n) => Ok(g.last_index() == Some(n) && g.component(n).is_some_and(|c| c.is_dense())),
    }
}

/// No limit points in `div G \ G`.
pub fn is_closed_in_hull(g: &GroupDescriptor) -> bool {
    !g.last_component()
        .is_some_and(|c| c.is_dense() && !c.is_divisible())
}

/// The largest convex subgroup all of whose components are `p`-divisible.
pub fn largest_p_divisible_convex(g: &GroupDescriptor, p: u64) -> FinalSegment {
    largest_convex_with(g, |c| c.is_p_divisible(p), |r| r.p_divisible_from(p))
}

/// The largest divisible convex subgroup.
pub fn largest_divisible_convex(g: &GroupDescriptor) -> FinalSegment {
    largest_convex_with(g, RationalSubgroup::is_divisible, |r| match r {
        Rule::Constant(c) => c.is_divisible().then_some(1),
        Rule::PrefixPrimes { .. } => None,
    })
}

fn largest_convex_with(
    g: &GroupDescriptor,
    pred: impl Fn(&RationalSubgroup) -> bool,
    rule_from: impl Fn(&Rule) -> Option<u64>,
) -> FinalSegment {
    match g {
        GroupDescriptor::FiniteLex(cs) => {
            let good_tail = cs.iter().rev().take_while(|c| pred(c)).count();
            if good_tail == 0 {
                FinalSegment::Trivial
            } else {
                FinalSegment::after(g, Index::At((cs.len() - good_tail) as u64))
            }
        }
        GroupDescriptor::OmegaLex(r) => match rule_from(r) {
            Some(from) => FinalSegment::after(g, Index::At(from - 1)),
            None => FinalSegment::Trivial,
        },
        GroupDescriptor::OmegaPlusOneLex(r, top) => {
            if !pred(top) {
                FinalSegment::Trivial
            } else {
                match rule_from(r) {
                    Some(from) => FinalSegment::after(g, Index::At(from - 1)),
                    None => FinalSegment::TopOnly,
                }
            }
        }
    }
}

/// `G / S`: the components outside the segment.
pub fn convex_quotient(g: &GroupDescriptor, s: FinalSegment) -> GroupDescriptor {
    s.quotient(g)
}

/// `g0 = (1/q) * 1_N` for the least non-maximal index `N` whose component is
/// not divisible, `q` the least prime outside that component. `g0` lies in
/// `div G` but not in the closure of `G`, and its valuation is not maximal.
pub fn find_nondense_witness(g: &GroupDescriptor) -> Result<HullElement> {
    if !is_densely_ordered(g) {
        return Err(Error::Precondition(format!("{g} is not densely ordered")));
    }
    if is_dense_in_hull(g) {
        return Err(Error::Precondition(format!(
            "{g} is dense in its divisible hull"
        )));
    }
    let candidates: Box<dyn Iterator<Item = Index>> = match g {
        GroupDescriptor::FiniteLex(cs) => Box::new((1..cs.len() as u64).map(Index::At)),
        _ => Box::new((1..).map(Index::At)),
    };
    for i in candidates {
        let c = g.component(i).expect("index in range");
        if let Some(q) = c.non_divisible_prime() {
            let r = Rational::new(1.into(), q.into());
            return Ok(HullElement::monomial(i, r));
        }
    }
    unreachable!("non-regular presentations have a non-divisible non-maximal component")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{int, rat};

    fn z() -> RationalSubgroup {
        RationalSubgroup::integers()
    }
    fn q() -> RationalSubgroup {
        RationalSubgroup::rationals()
    }
    fn a() -> RationalSubgroup {
        RationalSubgroup::localization(vec![2]).unwrap()
    }
    fn b() -> RationalSubgroup {
        RationalSubgroup::at_least(3).unwrap()
    }
    fn lex(cs: Vec<RationalSubgroup>) -> GroupDescriptor {
        GroupDescriptor::FiniteLex(cs)
    }
    fn ex316() -> GroupDescriptor {
        GroupDescriptor::OmegaLex(Rule::PrefixPrimes { skip: 0 })
    }
    fn e(pairs: &[(u64, Rational)]) -> HullElement {
        HullElement::from_pairs(pairs.iter().map(|(i, r)| (Index::At(*i), r.clone())))
    }

    #[test]
    fn density() {
        assert!(!is_densely_ordered(&lex(vec![z()])));
        assert!(!is_densely_ordered(&lex(vec![a(), z()])));
        assert!(is_densely_ordered(&GroupDescriptor::OmegaLex(
            Rule::Constant(z())
        )));
    }

    #[test]
    fn discreteness() {
        assert!(is_discretely_ordered(&lex(vec![z(), z()])));
        assert!(!is_discretely_ordered(&lex(vec![q()])));
        assert!(!is_discretely_ordered(&GroupDescriptor::OmegaLex(
            Rule::Constant(z())
        )));
    }

    #[test]
    fn regularity() {
        assert!(!is_regular(&lex(vec![z(), z()])));
        assert!(!is_regular(&lex(vec![a(), a()])));
        assert!(is_regular(&lex(vec![q(), a()])));
        assert!(is_regular(&lex(vec![z()])));
        assert!(!is_regular(&ex316()));
    }

    #[test]
    fn density_in_hull() {
        assert!(is_dense_in_hull(&lex(vec![a()])));
        assert!(!is_dense_in_hull(&lex(vec![a(), a()])));
        assert!(is_dense_in_hull(&lex(vec![q(), a()])));
    }

    #[test]
    fn immediacy() {
        assert!(!is_immediate_in_hull(&lex(vec![q(), a()])));
        assert!(is_immediate_in_hull(&lex(vec![q(), q()])));
        assert!(!is_immediate_in_hull(&GroupDescriptor::OmegaLex(
            Rule::Constant(a())
        )));
    }

    #[test]
    fn limit_points() {
        let g = lex(vec![a(), a()]);
        assert!(is_limit_point(&e(&[(2, rat(1, 3))]), &g).unwrap());
        assert!(!is_limit_point(&e(&[(1, rat(1, 3))]), &g).unwrap());
        // first failure at index 2 of the prefix-prime group (1/2 is never allowed)
        let s = e(&[(1, rat(1, 3)), (2, rat(1, 2)), (3, int(4))]);
        assert!(!is_limit_point(&s, &ex316()).unwrap());
    }

    #[test]
    fn closedness() {
        assert!(is_closed_in_hull(&ex316()));
        assert!(!is_closed_in_hull(&lex(vec![a(), a()])));
        assert!(is_closed_in_hull(&lex(vec![b(), q()])));
    }

    #[test]
    fn p_divisible_convex_subgroups() {
        let g = ex316();
        assert_eq!(largest_p_divisible_convex(&g, 2), FinalSegment::Trivial);
        assert_eq!(largest_p_divisible_convex(&g, 3), FinalSegment::WholeGroup);
        assert_eq!(
            largest_p_divisible_convex(&g, 7),
            FinalSegment::FromIndexExclusive(Index::At(2))
        );
        assert_eq!(
            largest_p_divisible_convex(&lex(vec![q()]), 5),
            FinalSegment::WholeGroup
        );
        assert_eq!(
            largest_p_divisible_convex(&lex(vec![b(), q()]), 2),
            FinalSegment::FromIndexExclusive(Index::At(1))
        );
        let top = GroupDescriptor::OmegaPlusOneLex(Rule::PrefixPrimes { skip: 0 }, q());
        assert_eq!(largest_p_divisible_convex(&top, 2), FinalSegment::TopOnly);
    }

    #[test]
    fn quotients() {
        let zz = lex(vec![z(), z()]);
        assert_eq!(
            convex_quotient(&zz, FinalSegment::FromIndexExclusive(Index::At(1))),
            lex(vec![z()])
        );
        assert_eq!(convex_quotient(&zz, FinalSegment::Trivial), zz);
        assert_eq!(
            convex_quotient(
                &lex(vec![b(), q()]),
                FinalSegment::FromIndexExclusive(Index::At(1))
            ),
            lex(vec![b()])
        );
    }

    #[test]
    fn nondense_witness() {
        assert_eq!(
            find_nondense_witness(&lex(vec![a(), a()])).unwrap(),
            e(&[(1, rat(1, 3))])
        );
        assert!(find_nondense_witness(&lex(vec![z(), z()])).is_err());
        assert!(find_nondense_witness(&lex(vec![q(), a()])).is_err());
        assert_eq!(
            find_nondense_witness(&ex316()).unwrap(),
            e(&[(1, rat(1, 2))])
        );
    }
}
