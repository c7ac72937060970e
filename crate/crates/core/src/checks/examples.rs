use std::collections::BTreeSet;

use crate::classify::{
    arc_v0_collapse, classify_report, lr_definable_regular, non_singular, strongly_nip_witnessed,
    thm45_cases, v0_descriptor, v0_lr_definable, StronglyNip,
};
use crate::defval::{make_cut, CaseTag, CutPoint};
use crate::dsl::{parse_element, parse_group_expr};
use crate::groups::{
    find_nondense_witness, g_member, is_closed_in_hull, is_dense_in_hull, is_discretely_ordered,
    is_divisible, is_immediate_in_hull, is_limit_point, is_regular, largest_p_divisible_convex,
    oracle_between, FinalSegment, HullElement, Index,
};
use crate::numeric::nth_odd_prime;
use crate::series::CoefficientField;

use super::{CheckConfig, SuiteOutcome, Tally};

#[derive(Debug, Clone)]
pub struct ExampleCheck {
    pub name: &'static str,
    pub passed: bool,
}

fn g(text: &str) -> crate::GroupDescriptor {
    parse_group_expr(text).expect("example group parses")
}

fn e(text: &str) -> HullElement {
    parse_element(text).expect("example element parses")
}

fn rc() -> CoefficientField {
    CoefficientField::declared_real_closed(CoefficientField::PlainRationals)
}

type Row<'a> = Box<dyn Fn() -> bool + 'a>;

/// The fixed table of worked examples, each a conjunction of exact facts.
pub fn example_table() -> Vec<ExampleCheck> {
    let zz = g("lex(Z, Z)");
    let a = g("loc{2}");
    let aa = g("lex(loc{2}, loc{2})");
    let qa = g("lex(Q, loc{2})");
    let prefix = g("omega(prefixprimes)");
    let b = g("loc{>=3}");
    let bq = g("lex(loc{>=3}, Q)");
    let z = g("Z");

    let rows: Vec<(&'static str, Row)> = vec![
        (
            "Z+Z is discretely ordered",
            Box::new(|| is_discretely_ordered(&zz)),
        ),
        (
            "Z+Z is not regular and has no non-dense witness",
            Box::new(|| {
                !is_regular(&zz)
                    && find_nondense_witness(&zz).is_err()
                    && !lr_definable_regular(&zz)
            }),
        ),
        (
            "the dyadic rationals are dense in their hull",
            Box::new(|| is_dense_in_hull(&a)),
        ),
        (
            "A+A is neither regular nor dense in its hull",
            Box::new(|| !is_regular(&aa) && !is_dense_in_hull(&aa)),
        ),
        (
            "nothing of A+A lies between (1/3, 0) and (1/3, 1)",
            Box::new(|| {
                let lo = e("{1: 1/3}");
                let hi = e("{1: 1/3, 2: 1}");
                !g_member(&lo, &aa).unwrap()
                    && !is_limit_point(&lo, &aa).unwrap()
                    && oracle_between(&aa, &lo, &hi, 64).is_none()
            }),
        ),
        (
            "(0, 1/3) is a limit point of A+A and defines its cut",
            Box::new(|| {
                let g0 = e("{2: 1/3}");
                is_limit_point(&g0, &aa).unwrap()
                    && !is_closed_in_hull(&aa)
                    && arc_v0_collapse(&aa)
                    && make_cut(&rc(), &aa, CaseTag::GroupLimitPoint, None).ok()
                        == Some(CutPoint::GroupCut { g0 })
                    && thm45_cases(&rc(), &aa) == BTreeSet::from([CaseTag::GroupLimitPoint])
            }),
        ),
        (
            "Q+A is dense in its hull, regular and not immediate",
            Box::new(|| {
                is_dense_in_hull(&qa)
                    && is_regular(&qa)
                    && !is_immediate_in_hull(&qa)
                    && find_nondense_witness(&qa).is_err()
            }),
        ),
        (
            "the prefix-prime sum is p_i-divisible exactly from index i and never 2-divisible",
            Box::new(|| {
                (1..=6).all(|i| {
                    largest_p_divisible_convex(&prefix, nth_odd_prime(i))
                        == FinalSegment::after(&prefix, Index::At(i - 1))
                }) && largest_p_divisible_convex(&prefix, 2) == FinalSegment::Trivial
            }),
        ),
        (
            "the prefix-prime sum is closed in its hull",
            Box::new(|| {
                let s = e("{1: 1/2}");
                let width = HullElement::unit(Index::At(2));
                is_closed_in_hull(&prefix)
                    && !g_member(&s, &prefix).unwrap()
                    && !is_limit_point(&s, &prefix).unwrap()
                    && oracle_between(&prefix, &(&s - &width), &(&s + &width), 64).is_none()
            }),
        ),
        (
            "the prefix-prime sum has trivial v0, definable at the prime 2",
            Box::new(|| {
                let v0 = v0_descriptor(&prefix);
                let lr = v0_lr_definable(&prefix, 50);
                v0.segment == FinalSegment::Trivial
                    && v0.value_group == prefix
                    && lr.definable
                    && lr.witness_prime == Some(2)
            }),
        ),
        (
            "the prefix-prime sum over a real closed field meets no case",
            Box::new(|| {
                let r = classify_report(&rc(), &prefix, 50);
                thm45_cases(&rc(), &prefix).is_empty()
                    && r.thm45_cases.is_empty()
                    && r.v0_lr_definable.definable
                    && r.v0_lr_definable.witness_prime == Some(2)
            }),
        ),
        (
            "Z is non-singular",
            Box::new(|| non_singular(&z) && is_discretely_ordered(&z)),
        ),
        (
            "B is strongly NIP, dense in its hull and not divisible",
            Box::new(|| {
                strongly_nip_witnessed(&b) == StronglyNip::Witnessed
                    && is_dense_in_hull(&b)
                    && !is_divisible(&b)
            }),
        ),
        (
            "B+Q is strongly NIP and closed in its hull",
            Box::new(|| {
                strongly_nip_witnessed(&bq) == StronglyNip::Witnessed
                    && is_closed_in_hull(&bq)
                    && !arc_v0_collapse(&bq)
            }),
        ),
    ];
    rows.into_iter()
        .map(|(name, f)| ExampleCheck { name, passed: f() })
        .collect()
}

pub(crate) fn run(_cfg: &CheckConfig) -> SuiteOutcome {
    let mut t = Tally::new("examples");
    for row in example_table() {
        t.check(row.passed, || row.name.to_string());
    }
    t.finish()
}
