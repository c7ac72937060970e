//! Defining the valuation ring `k[[G>=0]]` of a Hahn field from a cut.
//!
//! A [`CutPoint::GroupCut`] uses `s = t^g0` with `g0` in `div G \ G`; then
//! `D' = {x >= 0 : x < t^g0}` is exactly `{x >= 0 : v(x) > g0}` and
//! `O = {x : |x| D' ⊆ D'}`. This recovers `v(x) >= 0` precisely when `g0`
//! first leaves `G` at the last index of the index set: either the last
//! component is `Z` (there is a least group element above `g0`) or it is
//! dense (`g0` is a limit point). Any other `g0` gives a coarser ring, so such
//! cuts are rejected.
//!
//! A [`CutPoint::ResidueCut`] uses an irrational `a` over `k = Q` with
//! `D' = {x : a - 1 < x < a}`; then `A' = {x >= 0 : x + D' ⊆ D'}` is the
//! non-negative part of the maximal ideal and `O = {x : x M ⊆ M}`.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::groups::{
    first_failure, is_closed_in_hull, is_discretely_ordered, GroupDescriptor, HullElement, Val,
};
use crate::numeric::{rat, rational_in_interval, QuadExt, Rational};
use crate::series::{s_residue, trunc_sqrt, CoefficientField, Series, TruncatedResult};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CutPoint {
    GroupCut { g0: HullElement },
    ResidueCut { a: QuadExt },
}

impl fmt::Display for CutPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CutPoint::GroupCut { g0 } => write!(f, "group {g0}"),
            CutPoint::ResidueCut { a } => write!(f, "residue {a}"),
        }
    }
}

impl Serialize for CutPoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum CaseTag {
    Discrete,
    GroupLimitPoint,
    ResidueLimitPoint,
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CaseTag::Discrete => "discrete",
            CaseTag::GroupLimitPoint => "group-limit-point",
            CaseTag::ResidueLimitPoint => "residue-limit-point",
        })
    }
}

/// Whether the hypothesis of a case holds for `k((G))`.
pub fn case_applies(field: &CoefficientField, group: &GroupDescriptor, case: CaseTag) -> bool {
    match case {
        CaseTag::Discrete => is_discretely_ordered(group),
        CaseTag::GroupLimitPoint => !is_closed_in_hull(group),
        // archimedean fields are dense in their real closure
        CaseTag::ResidueLimitPoint => !field.is_declared_real_closed(),
    }
}

pub fn applicable_cases(field: &CoefficientField, group: &GroupDescriptor) -> BTreeSet<CaseTag> {
    [
        CaseTag::Discrete,
        CaseTag::GroupLimitPoint,
        CaseTag::ResidueLimitPoint,
    ]
    .into_iter()
    .filter(|c| case_applies(field, group, *c))
    .collect()
}

/// Builds the cut for `case`. `radicand` picks `a = sqrt(d)` for the residue
/// case and defaults to 2.
pub fn make_cut(
    field: &CoefficientField,
    group: &GroupDescriptor,
    case: CaseTag,
    radicand: Option<u64>,
) -> Result<CutPoint> {
    if !case_applies(field, group, case) {
        return Err(Error::CaseUnavailable(format!(
            "{case} for ({field}, {group})"
        )));
    }
    let cut = match case {
        CaseTag::Discrete => {
            let last = group
                .last_index()
                .expect("discrete groups have a last index");
            CutPoint::GroupCut {
                g0: HullElement::monomial(last, rat(1, 2)),
            }
        }
        CaseTag::GroupLimitPoint => {
            let last = group
                .last_index()
                .expect("non-closed groups have a last index");
            let q = group
                .last_component()
                .and_then(|c| c.non_divisible_prime())
                .expect("last component is not divisible");
            CutPoint::GroupCut {
                g0: HullElement::monomial(last, Rational::new(1.into(), q.into())),
            }
        }
        CaseTag::ResidueLimitPoint => {
            if field.base() != &CoefficientField::PlainRationals {
                return Err(Error::CaseUnavailable(format!(
                    "residue cut over {field} needs a second quadratic extension"
                )));
            }
            CutPoint::ResidueCut {
                a: QuadExt::sqrt_of(radicand.unwrap_or(2))?,
            }
        }
    };
    Ok(cut)
}

/// Checks that `cut` defines the valuation ring of `k((G))`.
pub fn validate_cut(
    field: &CoefficientField,
    group: &GroupDescriptor,
    cut: &CutPoint,
) -> Result<()> {
    match cut {
        CutPoint::GroupCut { g0 } => {
            let n = first_failure(g0, group)?
                .ok_or_else(|| Error::Precondition(format!("{g0} lies in {group}")))?;
            if group.last_index() != Some(n) {
                return Err(Error::Precondition(format!(
                    "{g0} must first leave {group} at its last index"
                )));
            }
            Ok(())
        }
        CutPoint::ResidueCut { a } => {
            if field.base() != &CoefficientField::PlainRationals {
                return Err(Error::CaseUnavailable(format!("residue cut over {field}")));
            }
            if a.is_rational() {
                return Err(Error::Precondition(format!(
                    "{a} lies in the coefficient field"
                )));
            }
            Ok(())
        }
    }
}

fn validate_for(x: &Series, cut: &CutPoint) -> Result<()> {
    validate_cut(x.field(), x.group(), cut)
}

fn vmin_above(v: &Val<HullElement>, bound: &HullElement) -> bool {
    match v {
        Val::Infinity => true,
        Val::Finite(e) => e > bound,
    }
}

/// `N` and `h` with `g0 = h / N`, `N` the least common denominator.
pub fn cut_fraction(g0: &HullElement) -> (Rational, HullElement) {
    let n = Rational::from_integer(g0.denominator_lcm());
    let h = g0.scale(&n);
    (n, h)
}

/// Membership in `D'` (the lower cut set).
#[allow(non_snake_case)]
pub fn member_Ds(x: &Series, cut: &CutPoint) -> Result<bool> {
    validate_for(x, cut)?;
    match cut {
        CutPoint::GroupCut { g0 } => {
            if x.is_zero() {
                return Ok(true);
            }
            let (n, h) = cut_fraction(g0);
            Ok(x.sign() > 0 && x.vmin().finite().is_some_and(|v| v.scale(&n) > h))
        }
        CutPoint::ResidueCut { a } => {
            let Ok(c) = s_residue(x) else {
                return Ok(false);
            };
            let c = c.with_radicand(a.radicand())?;
            let below_a = a.checked_sub(&c)?.sign() > 0;
            let above_a_minus_1 = c.checked_sub(&a.checked_sub(&QuadExt::one())?)?.sign() > 0;
            Ok(below_a && above_a_minus_1)
        }
    }
}

/// Membership in the defined valuation ring.
#[allow(non_snake_case)]
pub fn member_Os(x: &Series, cut: &CutPoint) -> Result<bool> {
    validate_for(x, cut)?;
    Ok(match x.vmin() {
        Val::Infinity => true,
        Val::Finite(v) => v.sign() >= 0,
    })
}

/// Evidence that `x` is not in the defined ring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// `y ∈ D'` with `|x| y ∉ D'`.
    Multiplier { y: Series },
    /// `m` in the maximal ideal with `|x m|` outside it, shown by `b ∈ D'`
    /// with `|x m| + b ∉ D'`. `m = 1` when `x` itself is a unit.
    ResidueShift { multiplier: Series, shift: Rational },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Multiplier { y } => write!(f, "y = {y}"),
            Violation::ResidueShift { multiplier, shift } => {
                write!(f, "m = {multiplier}, b = {shift}")
            }
        }
    }
}

pub fn os_violation_witness(x: &Series, cut: &CutPoint) -> Result<Violation> {
    validate_for(x, cut)?;
    let Val::Finite(v) = x.vmin() else {
        return Err(Error::NoViolation);
    };
    match cut {
        CutPoint::GroupCut { g0 } => {
            if v.sign() >= 0 {
                return Err(Error::NoViolation);
            }
            let group = x.group();
            let last = group.last_index().expect("validated cut has a last index");
            let c = group.component(last).expect("last index is in range");
            let gap = -&v;
            let width = if gap.nat_valuation() == Val::Finite(last) {
                gap.coefficient(last)
            } else {
                Rational::from_integer(1.into())
            };
            let coord = c
                .approximate_above(&g0.coefficient(last), &width)
                .ok_or(Error::NoViolation)?;
            let g1 = &g0.truncate_below(last) + &HullElement::monomial(last, coord);
            let y = Series::monomial(x.field(), group, QuadExt::one(), g1)?;
            Ok(Violation::Multiplier { y })
        }
        CutPoint::ResidueCut { a } => {
            if v.sign() > 0 {
                return Err(Error::NoViolation);
            }
            let multiplier = Series::monomial(x.field(), x.group(), QuadExt::one(), -&v)?;
            let unit = abs(&x.checked_mul(&multiplier)?);
            let c = s_residue(&unit)?.with_radicand(a.radicand())?;
            let one = QuadExt::one();
            let lo = if c.checked_sub(&one)?.sign() >= 0 {
                a.checked_sub(&one)?
            } else {
                a.checked_sub(&c)?
            };
            let shift = rational_in_interval(&lo, a)?;
            Ok(Violation::ResidueShift { multiplier, shift })
        }
    }
}

fn abs(x: &Series) -> Series {
    if x.sign() < 0 {
        x.neg()
    } else {
        x.clone()
    }
}

/// Whether `v(x) + v(y) > g0`. Requires `y ∈ D'`.
pub fn check_condition41(x: &Series, y: &Series, g0: &HullElement) -> Result<bool> {
    let cut = CutPoint::GroupCut { g0: g0.clone() };
    if !member_Ds(y, &cut)? {
        return Err(Error::Precondition(format!("{y} is not in the cut set")));
    }
    x.ensure_compatible(y)?;
    Ok(match (x.vmin(), y.vmin()) {
        (Val::Finite(a), Val::Finite(b)) => &(&a + &b) > g0,
        _ => true,
    })
}

/// Re-checks a violation from scratch.
pub fn verify_violation(x: &Series, cut: &CutPoint, w: &Violation) -> Result<bool> {
    match (cut, w) {
        (CutPoint::GroupCut { g0 }, Violation::Multiplier { y }) => {
            let in_d = member_Ds(y, cut)?;
            let product_out = !member_Ds(&abs(x).checked_mul(y)?, cut)?;
            Ok(in_d && product_out && !check_condition41(x, y, g0)?)
        }
        (CutPoint::ResidueCut { .. }, Violation::ResidueShift { multiplier, shift }) => {
            let m_in_ideal = match multiplier.vmin() {
                Val::Finite(v) => v.sign() > 0 || multiplier == &Series::one(x.field(), x.group()),
                Val::Infinity => false,
            };
            let unit = abs(&x.checked_mul(multiplier)?);
            let b = Series::constant(x.field(), x.group(), QuadExt::rational(shift.clone()))?;
            let b_in = member_Ds(&b, cut)?;
            let shifted_out = !member_Ds(&unit.checked_add(&b)?, cut)?;
            Ok(m_in_ideal && b_in && shifted_out)
        }
        _ => Ok(false),
    }
}

/// `x = 0 ∨ ∃y v(x - y^2) > v(x)`, decided on the leading term.
pub fn phi_holds(x: &Series) -> bool {
    let Some((g, c)) = x.leading() else {
        return true;
    };
    let half = g.scale(&rat(1, 2));
    c.sqrt_if_square().is_some() && crate::groups::g_member(&half, x.group()).unwrap_or(false)
}

pub fn phi_witness(x: &Series, n_terms: usize) -> Result<TruncatedResult> {
    if x.is_zero() || !phi_holds(x) {
        return Err(Error::Precondition(format!(
            "phi does not hold nontrivially at {x}"
        )));
    }
    let res = trunc_sqrt(x, n_terms)?;
    let rem = x.checked_sub(&res.terms.checked_mul(&res.terms)?)?;
    let vx = x.vmin().finite().expect("x is nonzero");
    debug_assert!(vmin_above(&rem.vmin(), &vx));
    Ok(res)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{Index, RationalSubgroup};
    use crate::numeric::int;

    fn q() -> CoefficientField {
        CoefficientField::PlainRationals
    }
    fn rc() -> CoefficientField {
        CoefficientField::declared_real_closed(q())
    }
    fn gz() -> GroupDescriptor {
        GroupDescriptor::single(RationalSubgroup::integers())
    }
    fn aa() -> GroupDescriptor {
        let a = RationalSubgroup::localization(vec![2]).unwrap();
        GroupDescriptor::FiniteLex(vec![a.clone(), a])
    }
    fn at(i: u64, r: Rational) -> HullElement {
        HullElement::monomial(Index::At(i), r)
    }
    fn mono(k: &CoefficientField, g: &GroupDescriptor, c: Rational, e: HullElement) -> Series {
        Series::monomial(k, g, QuadExt::rational(c), e).unwrap()
    }

    /// `x >= 0 ∧ x^N < t^h`, evaluated by exact multiplication.
    fn ds_by_power(x: &Series, g0: &HullElement) -> bool {
        if x.sign() < 0 {
            return false;
        }
        let (n, h) = cut_fraction(g0);
        let n: u64 = n.to_integer().try_into().unwrap();
        let mut p = Series::one(x.field(), x.group());
        for _ in 0..n {
            p = p.checked_mul(x).unwrap();
        }
        let th = Series::monomial(x.field(), x.group(), QuadExt::one(), h).unwrap();
        crate::series::s_cmp(&p, &th).unwrap().is_lt()
    }

    #[test]
    fn cuts_for_each_case() {
        assert_eq!(
            make_cut(&q(), &gz(), CaseTag::Discrete, None).unwrap(),
            CutPoint::GroupCut {
                g0: at(1, rat(1, 2))
            }
        );
        assert_eq!(
            make_cut(&rc(), &aa(), CaseTag::GroupLimitPoint, None).unwrap(),
            CutPoint::GroupCut {
                g0: at(2, rat(1, 3))
            }
        );
        assert_eq!(
            make_cut(&q(), &gz(), CaseTag::ResidueLimitPoint, Some(2)).unwrap(),
            CutPoint::ResidueCut {
                a: QuadExt::sqrt_of(2).unwrap()
            }
        );
        assert!(make_cut(&rc(), &gz(), CaseTag::ResidueLimitPoint, None).is_err());
        assert!(make_cut(&q(), &aa(), CaseTag::Discrete, None).is_err());
    }

    #[test]
    fn lower_cut_set() {
        let cut = CutPoint::GroupCut {
            g0: at(1, rat(1, 2)),
        };
        let t = mono(&q(), &gz(), int(1), at(1, int(1)));
        assert!(member_Ds(&t, &cut).unwrap());
        assert!(!member_Ds(&Series::one(&q(), &gz()), &cut).unwrap());
        let x = Series::from_terms(
            &q(),
            &gz(),
            [
                (HullElement::zero(), QuadExt::one()),
                (at(1, int(1)), QuadExt::one()),
            ],
        )
        .unwrap();
        let rcut = CutPoint::ResidueCut {
            a: QuadExt::sqrt_of(2).unwrap(),
        };
        assert!(member_Ds(&x, &rcut).unwrap());
    }

    #[test]
    fn lower_cut_agrees_with_power_formula() {
        let g0 = at(2, rat(1, 3));
        let cut = CutPoint::GroupCut { g0: g0.clone() };
        let k = rc();
        for (e, c) in [
            (at(2, rat(1, 2)), int(1)),
            (at(2, rat(1, 4)), int(3)),
            (at(1, int(1)), int(-1)),
            (at(1, rat(-1, 2)), int(5)),
            (HullElement::zero(), int(1)),
        ] {
            let x = mono(&k, &aa(), c, e);
            assert_eq!(member_Ds(&x, &cut).unwrap(), ds_by_power(&x, &g0), "{x}");
        }
    }

    #[test]
    fn ring_membership() {
        let cut = make_cut(&q(), &gz(), CaseTag::Discrete, None).unwrap();
        let x = Series::from_terms(
            &q(),
            &gz(),
            [
                (HullElement::zero(), QuadExt::from_int(3)),
                (at(1, int(1)), QuadExt::one()),
            ],
        )
        .unwrap();
        assert!(member_Os(&x, &cut).unwrap());
        assert!(!member_Os(&mono(&q(), &gz(), int(1), at(1, int(-1))), &cut).unwrap());
        assert!(member_Os(&Series::zero(&q(), &gz()), &cut).unwrap());
    }

    #[test]
    fn discrete_witness() {
        let cut = make_cut(&q(), &gz(), CaseTag::Discrete, None).unwrap();
        let x = mono(&q(), &gz(), int(1), at(1, int(-1)));
        let w = os_violation_witness(&x, &cut).unwrap();
        assert_eq!(
            w,
            Violation::Multiplier {
                y: mono(&q(), &gz(), int(1), at(1, int(1)))
            }
        );
        assert!(verify_violation(&x, &cut, &w).unwrap());
    }

    #[test]
    fn limit_point_witness() {
        let cut = make_cut(&rc(), &aa(), CaseTag::GroupLimitPoint, None).unwrap();
        let x = mono(&rc(), &aa(), int(1), at(2, int(-1)));
        let w = os_violation_witness(&x, &cut).unwrap();
        assert_eq!(
            w,
            Violation::Multiplier {
                y: mono(&rc(), &aa(), int(1), at(2, rat(1, 2)))
            }
        );
        assert!(verify_violation(&x, &cut, &w).unwrap());
    }

    #[test]
    fn residue_witness() {
        let cut = CutPoint::ResidueCut {
            a: QuadExt::sqrt_of(2).unwrap(),
        };
        let x = Series::constant(&q(), &gz(), QuadExt::rational(rat(1, 2))).unwrap();
        let Violation::ResidueShift { multiplier, shift } = os_violation_witness(&x, &cut).unwrap()
        else {
            panic!("expected a residue shift");
        };
        assert_eq!(multiplier, Series::one(&q(), &gz()));
        let root2 = QuadExt::sqrt_of(2).unwrap();
        let b = QuadExt::rational(shift.clone())
            .with_radicand(Some(2))
            .unwrap();
        assert!(
            root2
                .checked_sub(&QuadExt::rational(rat(1, 2)))
                .unwrap()
                .checked_sub(&b)
                .unwrap()
                .sign()
                < 0
        );
        assert!(root2.checked_sub(&b).unwrap().sign() > 0);
        let w = Violation::ResidueShift { multiplier, shift };
        assert!(verify_violation(&x, &cut, &w).unwrap());
        let y = mono(&q(), &gz(), int(3), at(1, int(-2)));
        let w = os_violation_witness(&y, &cut).unwrap();
        assert!(verify_violation(&y, &cut, &w).unwrap());
    }

    #[test]
    fn condition41() {
        let g0 = at(1, rat(1, 2));
        let t = mono(&q(), &gz(), int(1), at(1, int(1)));
        assert!(check_condition41(&Series::one(&q(), &gz()), &t, &g0).unwrap());
        assert!(!check_condition41(&mono(&q(), &gz(), int(1), at(1, int(-1))), &t, &g0).unwrap());
        assert!(check_condition41(&Series::zero(&q(), &gz()), &t, &g0).unwrap());
        assert!(check_condition41(&t, &Series::one(&q(), &gz()), &g0).is_err());
    }

    #[test]
    fn rejects_coarse_group_cuts() {
        let zz = GroupDescriptor::FiniteLex(vec![RationalSubgroup::integers(); 2]);
        let bad = CutPoint::GroupCut {
            g0: at(1, rat(1, 2)),
        };
        assert!(validate_cut(&q(), &zz, &bad).is_err());
    }

    #[test]
    fn phi_examples() {
        let k2 = CoefficientField::quadratic(2).unwrap();
        let gq = GroupDescriptor::single(RationalSubgroup::rationals());
        let x = mono(&k2, &gq, int(2), at(1, rat(1, 3)));
        assert!(phi_holds(&x));
        let y = phi_witness(&x, 1).unwrap();
        assert_eq!(
            y.terms,
            Series::monomial(&k2, &gq, QuadExt::sqrt_of(2).unwrap(), at(1, rat(1, 6))).unwrap()
        );
        assert!(!phi_holds(
            &Series::constant(&q(), &gq, QuadExt::from_int(2)).unwrap()
        ));
        assert!(phi_holds(&Series::zero(&q(), &gq)));
        let four = mono(&q(), &gz(), int(4), at(1, int(2)));
        assert_eq!(
            phi_witness(&four, 1).unwrap().terms,
            mono(&q(), &gz(), int(2), at(1, int(1)))
        );
        let one_t = Series::from_terms(
            &k2,
            &gq,
            [
                (HullElement::zero(), QuadExt::one()),
                (at(1, int(1)), QuadExt::one()),
            ],
        )
        .unwrap();
        let w = phi_witness(&one_t, 2).unwrap();
        let expect = Series::from_terms(
            &k2,
            &gq,
            [
                (HullElement::zero(), QuadExt::one()),
                (at(1, int(1)), QuadExt::rational(rat(1, 2))),
            ],
        )
        .unwrap();
        assert_eq!(w.terms, expect);
        let rem = one_t
            .checked_sub(&w.terms.checked_mul(&w.terms).unwrap())
            .unwrap();
        assert_eq!(rem, mono(&k2, &gq, rat(-1, 4), at(1, int(2))));
    }
}
