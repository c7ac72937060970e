//! Classification of `k((G))` for presented groups: the canonical valuations
//! `v0` and `v_p`, their definability criteria, which cut constructions apply,
//! and presentation-level tameness checks.
//!
//! For `K = R((G))` the coarsenings of the natural valuation correspond to
//! convex subgroups `H` of `G`: the coarsening has value group `G/H` and
//! residue field `R((H))`, which is real closed iff `H` is divisible and
//! `p`-euclidean iff `H` is `p`-divisible. So `v0` and `v_p` are the quotients
//! by the largest divisible and `p`-divisible convex subgroups.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::defval::{applicable_cases, CaseTag};
use crate::groups::{
    is_closed_in_hull, is_dense_in_hull, is_densely_ordered, is_discretely_ordered, is_divisible,
    is_immediate_in_hull, is_regular, largest_divisible_convex, largest_p_divisible_convex,
    FinalSegment, GroupDescriptor, Rule,
};
use crate::numeric::primes_up_to;
use crate::series::CoefficientField;

fn display<T: fmt::Display, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValuationDescriptor {
    #[serde(serialize_with = "display")]
    pub segment: FinalSegment,
    #[serde(serialize_with = "display")]
    pub value_group: GroupDescriptor,
    #[serde(serialize_with = "display")]
    pub residue_group: GroupDescriptor,
}

impl ValuationDescriptor {
    pub fn from_segment(g: &GroupDescriptor, segment: FinalSegment) -> Self {
        ValuationDescriptor {
            value_group: segment.quotient(g),
            residue_group: segment.subgroup(g),
            segment,
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.value_group.is_trivial()
    }
}

pub fn v0_descriptor(g: &GroupDescriptor) -> ValuationDescriptor {
    ValuationDescriptor::from_segment(g, largest_divisible_convex(g))
}

pub fn vp_descriptor(g: &GroupDescriptor, p: u64) -> ValuationDescriptor {
    ValuationDescriptor::from_segment(g, largest_p_divisible_convex(g, p))
}

/// Primes at which the structure of `g` can change: all primes up to `bound`
/// together with the least prime missing from each component.
pub fn relevant_primes(g: &GroupDescriptor, bound: u64) -> Vec<u64> {
    let mut ps: BTreeSet<u64> = primes_up_to(bound).into_iter().collect();
    let rule_components = |r: &Rule| [r.component(1), r.component(2)];
    let comps = match g {
        GroupDescriptor::FiniteLex(cs) => cs.clone(),
        GroupDescriptor::OmegaLex(r) => rule_components(r).to_vec(),
        GroupDescriptor::OmegaPlusOneLex(r, top) => {
            let mut v = rule_components(r).to_vec();
            v.push(top.clone());
            v
        }
    };
    ps.extend(comps.iter().filter_map(|c| c.non_divisible_prime()));
    ps.into_iter().collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LrDefinability {
    pub definable: bool,
    pub witness_prime: Option<u64>,
    pub clause: &'static str,
}

/// `v0` is definable in the ring language iff some prime `p` leaves no
/// nontrivial `p`-divisible convex subgroup in the value group of `v0`.
pub fn v0_lr_definable(g: &GroupDescriptor, prime_bound: u64) -> LrDefinability {
    let clause = "v0 value group has no nontrivial p-divisible convex subgroup";
    let vg = v0_descriptor(g).value_group;
    let witness_prime = if vg.is_trivial() {
        None
    } else {
        relevant_primes(&vg, prime_bound)
            .into_iter()
            .find(|&p| largest_p_divisible_convex(&vg, p) == FinalSegment::Trivial)
    };
    LrDefinability {
        definable: witness_prime.is_some(),
        witness_prime,
        clause,
    }
}

pub fn thm45_cases(k: &CoefficientField, g: &GroupDescriptor) -> BTreeSet<CaseTag> {
    applicable_cases(k, g)
}

/// Regular and not divisible.
pub fn lr_definable_regular(g: &GroupDescriptor) -> bool {
    is_regular(g) && !is_divisible(g)
}

/// Discretely ordered or not closed in the divisible hull; then the natural
/// valuation is `v0` and it is definable.
pub fn arc_v0_collapse(g: &GroupDescriptor) -> bool {
    is_discretely_ordered(g) || !is_closed_in_hull(g)
}

/// `G/pG` finite for every prime: each component contributes `Z/p` or
/// nothing, so this asks that only finitely many components fail to be
/// `p`-divisible.
pub fn non_singular(g: &GroupDescriptor) -> bool {
    let rule_ok = |r: &Rule| match r {
        Rule::Constant(c) => c.is_divisible(),
        // 2 is never inverted
        Rule::PrefixPrimes { .. } => false,
    };
    match g {
        GroupDescriptor::FiniteLex(_) => true,
        GroupDescriptor::OmegaLex(r) | GroupDescriptor::OmegaPlusOneLex(r, _) => rule_ok(r),
    }
}

/// The same question answered by inspection at a far index: rule components
/// are either `p`-divisible from some index on or never, so it suffices to
/// look at index `bound` for every relevant prime.
pub fn non_singular_bounded(g: &GroupDescriptor, bound: u64) -> bool {
    let r = match g {
        GroupDescriptor::FiniteLex(_) => return true,
        GroupDescriptor::OmegaLex(r) | GroupDescriptor::OmegaPlusOneLex(r, _) => r,
    };
    relevant_primes(g, bound).into_iter().all(|p| {
        let tail = r.component(bound.max(2));
        tail.is_p_divisible(p)
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum StronglyNip {
    Witnessed,
    NotWitnessedByPresentation,
}

impl fmt::Display for StronglyNip {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StronglyNip::Witnessed => "witnessed",
            StronglyNip::NotWitnessedByPresentation => "not-witnessed-by-presentation",
        })
    }
}

/// Whether the presentation itself is a lexicographic sum meeting the
/// finiteness conditions. The index condition `[C : pC] <= p` holds for every
/// subgroup of `Q`, so only the first condition can fail.
pub fn strongly_nip_witnessed(g: &GroupDescriptor) -> StronglyNip {
    if non_singular(g) {
        StronglyNip::Witnessed
    } else {
        StronglyNip::NotWitnessedByPresentation
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ArchimedeanModel {
    Candidate,
    None,
}

impl fmt::Display for ArchimedeanModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ArchimedeanModel::Candidate => "candidate",
            ArchimedeanModel::None => "none",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupFlags {
    pub densely_ordered: bool,
    pub discretely_ordered: bool,
    pub regular: bool,
    pub dense_in_hull: bool,
    pub immediate_in_hull: bool,
    pub closed_in_hull: bool,
    #[serde(serialize_with = "display")]
    pub has_archimedean_model_candidate: ArchimedeanModel,
}

pub fn group_flags(g: &GroupDescriptor) -> GroupFlags {
    GroupFlags {
        densely_ordered: is_densely_ordered(g),
        discretely_ordered: is_discretely_ordered(g),
        regular: is_regular(g),
        dense_in_hull: is_dense_in_hull(g),
        immediate_in_hull: is_immediate_in_hull(g),
        closed_in_hull: is_closed_in_hull(g),
        has_archimedean_model_candidate: if is_regular(g) {
            ArchimedeanModel::Candidate
        } else {
            ArchimedeanModel::None
        },
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VpEntry {
    pub prime: u64,
    pub valuation: ValuationDescriptor,
}

fn vp_map<S: Serializer>(v: &[VpEntry], s: S) -> Result<S::Ok, S::Error> {
    s.collect_map(v.iter().map(|e| (e.prime.to_string(), &e.valuation)))
}

fn case_list<S: Serializer>(v: &BTreeSet<CaseTag>, s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|c| c.to_string()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassificationReport {
    #[serde(serialize_with = "display")]
    pub field: CoefficientField,
    #[serde(serialize_with = "display")]
    pub group: GroupDescriptor,
    pub group_flags: GroupFlags,
    pub v0: ValuationDescriptor,
    pub v0_lr_definable: LrDefinability,
    #[serde(serialize_with = "vp_map")]
    pub vp_table: Vec<VpEntry>,
    #[serde(serialize_with = "case_list")]
    pub thm45_cases: BTreeSet<CaseTag>,
    pub lr_definable_regular: bool,
    pub arc_v0_collapse: bool,
    pub non_singular_presentation_level: bool,
    #[serde(serialize_with = "display")]
    pub strongly_nip_witnessed: StronglyNip,
    pub field_dense_in_rc: bool,
}

pub fn classify_report(
    k: &CoefficientField,
    g: &GroupDescriptor,
    prime_bound: u64,
) -> ClassificationReport {
    ClassificationReport {
        field: k.clone(),
        group: g.clone(),
        group_flags: group_flags(g),
        v0: v0_descriptor(g),
        v0_lr_definable: v0_lr_definable(g, prime_bound),
        vp_table: primes_up_to(prime_bound)
            .into_iter()
            .map(|p| VpEntry {
                prime: p,
                valuation: vp_descriptor(g, p),
            })
            .collect(),
        thm45_cases: thm45_cases(k, g),
        lr_definable_regular: lr_definable_regular(g),
        arc_v0_collapse: arc_v0_collapse(g),
        non_singular_presentation_level: non_singular(g),
        strongly_nip_witnessed: strongly_nip_witnessed(g),
        // a Hahn field that is not real closed is not dense in its real closure
        field_dense_in_rc: k.is_declared_real_closed() && is_divisible(g),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{Index, RationalSubgroup};

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
    fn rc() -> CoefficientField {
        CoefficientField::declared_real_closed(CoefficientField::PlainRationals)
    }

    #[test]
    fn v0_examples() {
        let v = v0_descriptor(&lex(vec![b(), q()]));
        assert_eq!(v.segment, FinalSegment::FromIndexExclusive(Index::At(1)));
        assert_eq!(v.value_group, lex(vec![b()]));
        assert_eq!(v.residue_group, lex(vec![q()]));
        let v = v0_descriptor(&lex(vec![q()]));
        assert_eq!(v.segment, FinalSegment::WholeGroup);
        assert!(v.is_trivial());
        let v = v0_descriptor(&ex316());
        assert_eq!(v.segment, FinalSegment::Trivial);
        assert_eq!(v.value_group, ex316());
    }

    #[test]
    fn v0_definability() {
        let d = v0_lr_definable(&ex316(), 50);
        assert_eq!((d.definable, d.witness_prime), (true, Some(2)));
        let d = v0_lr_definable(&lex(vec![b(), q()]), 50);
        assert_eq!((d.definable, d.witness_prime), (true, Some(2)));
        let d = v0_lr_definable(&lex(vec![q(), q()]), 50);
        assert_eq!((d.definable, d.witness_prime), (false, None));
        let d = v0_lr_definable(
            &lex(vec![RationalSubgroup::localization(vec![2, 3, 5]).unwrap()]),
            2,
        );
        assert_eq!(d.witness_prime, Some(7));
    }

    #[test]
    fn vp_examples() {
        let v = vp_descriptor(&ex316(), 5);
        assert_eq!(v.segment, FinalSegment::FromIndexExclusive(Index::At(1)));
        assert_eq!(
            vp_descriptor(&lex(vec![z(), z()]), 2).segment,
            FinalSegment::Trivial
        );
        assert_eq!(
            vp_descriptor(&lex(vec![q()]), 7).segment,
            FinalSegment::WholeGroup
        );
    }

    #[test]
    fn case_sets() {
        let k = CoefficientField::PlainRationals;
        assert_eq!(
            thm45_cases(&k, &lex(vec![z()])),
            BTreeSet::from([CaseTag::Discrete, CaseTag::ResidueLimitPoint])
        );
        assert_eq!(
            thm45_cases(&rc(), &lex(vec![a(), a()])),
            BTreeSet::from([CaseTag::GroupLimitPoint])
        );
        assert!(thm45_cases(&rc(), &ex316()).is_empty());
    }

    #[test]
    fn regular_definability() {
        assert!(lr_definable_regular(&lex(vec![z()])));
        assert!(!lr_definable_regular(&lex(vec![z(), z()])));
        assert!(!lr_definable_regular(&lex(vec![q()])));
    }

    #[test]
    fn collapse() {
        assert!(arc_v0_collapse(&lex(vec![z(), z()])));
        assert!(arc_v0_collapse(&lex(vec![a(), a()])));
        assert!(!arc_v0_collapse(&lex(vec![b(), q()])));
    }

    #[test]
    fn tameness() {
        assert!(non_singular(&lex(vec![z()])));
        assert!(!non_singular(&GroupDescriptor::OmegaLex(Rule::Constant(
            z()
        ))));
        assert!(non_singular(&lex(vec![q()])));
        assert_eq!(
            strongly_nip_witnessed(&lex(vec![b()])),
            StronglyNip::Witnessed
        );
        assert_eq!(
            strongly_nip_witnessed(&lex(vec![b(), q()])),
            StronglyNip::Witnessed
        );
        assert_eq!(
            strongly_nip_witnessed(&ex316()),
            StronglyNip::NotWitnessedByPresentation
        );
        for g in [
            ex316(),
            GroupDescriptor::OmegaLex(Rule::Constant(q())),
            lex(vec![z()]),
        ] {
            assert_eq!(non_singular(&g), non_singular_bounded(&g, 50));
        }
    }

    #[test]
    fn reports() {
        let r = classify_report(&rc(), &lex(vec![q()]), 13);
        assert!(r.field_dense_in_rc);
        assert!(r.v0.is_trivial());
        let r = classify_report(&CoefficientField::PlainRationals, &lex(vec![z()]), 13);
        assert!(!r.field_dense_in_rc);
        assert_eq!(
            r.thm45_cases,
            BTreeSet::from([CaseTag::Discrete, CaseTag::ResidueLimitPoint])
        );
        let r = classify_report(&rc(), &ex316(), 13);
        assert!(r.thm45_cases.is_empty());
        assert_eq!(r.v0_lr_definable.witness_prime, Some(2));
    }
}
