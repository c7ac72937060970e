//! The one-parameter definable convex subgroup of a densely ordered group
//! that is not dense in its divisible hull.
//!
//! With `g0` outside the closure of `G`:
//! `D = {g >= 0 : g < g0}`, `A = {g >= 0 : g + D ⊆ D}`, `H = -A ∪ A`.
//! If `N` is the first index where `g0` leaves `G`, every `d ∈ D` already
//! falls below `g0` at some coordinate `<= N`, so adding anything of
//! valuation `> N` keeps it in `D`; anything positive of valuation `<= N`
//! can be pushed past `g0`. Hence `A = {g >= 0 : v(g) > N}` and `H = G_N`.

use serde::Serialize;

use super::decide::is_densely_ordered;
use super::descriptor::{FinalSegment, GroupDescriptor, Index};
use super::element::{first_failure, GroupElement, HullElement, Val};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DefinableSet {
    D,
    A,
    H,
}

/// Checks that `g0` is a valid parameter and returns its first failing index.
pub fn parameter_level(g: &GroupDescriptor, g0: &HullElement) -> Result<Index> {
    if !is_densely_ordered(g) {
        return Err(Error::Precondition(format!("{g} is not densely ordered")));
    }
    if g0.sign() <= 0 {
        return Err(Error::Precondition(format!(
            "parameter {g0} must be positive"
        )));
    }
    let n = first_failure(g0, g)?
        .ok_or_else(|| Error::Precondition(format!("parameter {g0} lies in the group")))?;
    if g.last_index() == Some(n) {
        return Err(Error::Precondition(format!(
            "parameter {g0} first leaves the group at the last index"
        )));
    }
    Ok(n)
}

pub fn defsubgroup_member(
    g: &GroupDescriptor,
    g0: &HullElement,
    x: &GroupElement,
    which: DefinableSet,
) -> Result<bool> {
    if x.group() != g {
        return Err(Error::DescriptorMismatch(format!("{} vs {g}", x.group())));
    }
    let n = parameter_level(g, g0)?;
    let v = x.value();
    let above = v.nat_valuation() > Val::Finite(n);
    Ok(match which {
        DefinableSet::D => v.sign() >= 0 && v < g0,
        DefinableSet::A => v.sign() >= 0 && above,
        DefinableSet::H => above,
    })
}

/// The convex subgroup `H` as a final segment.
pub fn defsubgroup_segment(g: &GroupDescriptor, g0: &HullElement) -> Result<FinalSegment> {
    Ok(FinalSegment::after(g, parameter_level(g, g0)?))
}

/// For `x >= 0` outside `A`, some `d ∈ D` with `x + d ∉ D`.
pub fn a_violation_witness(
    g: &GroupDescriptor,
    g0: &HullElement,
    x: &GroupElement,
) -> Result<GroupElement> {
    let n = parameter_level(g, g0)?;
    let v = x.value();
    if v.sign() <= 0 || v.nat_valuation() > Val::Finite(n) {
        return Err(Error::NoViolation);
    }
    let c = g.component(n).expect("failure index is in range");
    let target = g0.coefficient(n);
    let prefix = g0.truncate_below(n);
    let coord = if v.nat_valuation() == Val::Finite(n) {
        // need d_N in (g0_N - x_N, g0_N) ∩ C_N
        c.approximate_below(&target, &v.coefficient(n))
            .ok_or(Error::NoViolation)?
    } else {
        target.floor()
    };
    let d = &prefix + &HullElement::monomial(n, coord);
    GroupElement::new(d, g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::subgroup::RationalSubgroup;
    use crate::numeric::{int, rat, Rational};

    fn e(pairs: &[(u64, Rational)]) -> HullElement {
        HullElement::from_pairs(pairs.iter().map(|(i, r)| (Index::At(*i), r.clone())))
    }

    fn aa() -> GroupDescriptor {
        let a = RationalSubgroup::localization(vec![2]).unwrap();
        GroupDescriptor::FiniteLex(vec![a.clone(), a])
    }

    fn member(pairs: &[(u64, Rational)]) -> GroupElement {
        GroupElement::new(e(pairs), &aa()).unwrap()
    }

    #[test]
    fn h_contains_lower_levels() {
        let g0 = e(&[(1, rat(1, 3))]);
        assert!(defsubgroup_member(&aa(), &g0, &member(&[(2, int(5))]), DefinableSet::H).unwrap());
        assert!(
            !defsubgroup_member(&aa(), &g0, &member(&[(1, rat(1, 2))]), DefinableSet::A).unwrap()
        );
        assert!(
            defsubgroup_member(&aa(), &g0, &GroupElement::zero(&aa()), DefinableSet::A).unwrap()
        );
        assert!(
            defsubgroup_member(&aa(), &g0, &member(&[(1, rat(1, 4))]), DefinableSet::D).unwrap()
        );
        assert!(
            !defsubgroup_member(&aa(), &g0, &member(&[(1, rat(1, 2))]), DefinableSet::D).unwrap()
        );
    }

    #[test]
    fn a_failure_has_witness() {
        let g0 = e(&[(1, rat(1, 3))]);
        let x = member(&[(1, rat(1, 2))]);
        let d = a_violation_witness(&aa(), &g0, &x).unwrap();
        assert!(defsubgroup_member(&aa(), &g0, &d, DefinableSet::D).unwrap());
        let sum = GroupElement::new(x.value() + d.value(), &aa()).unwrap();
        assert!(!defsubgroup_member(&aa(), &g0, &sum, DefinableSet::D).unwrap());
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(parameter_level(&aa(), &e(&[(2, rat(1, 3))])).is_err());
        assert!(parameter_level(&aa(), &e(&[(1, rat(-1, 3))])).is_err());
        assert!(parameter_level(&aa(), &e(&[(1, rat(1, 2))])).is_err());
    }
}
