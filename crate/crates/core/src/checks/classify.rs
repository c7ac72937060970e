use crate::catalog::catalog;
use crate::classify::{
    arc_v0_collapse, classify_report, lr_definable_regular, non_singular, non_singular_bounded,
    relevant_primes, strongly_nip_witnessed, v0_descriptor, v0_lr_definable, vp_descriptor,
    StronglyNip,
};
use crate::groups::{
    is_dense_in_hull, is_divisible, largest_divisible_convex, FinalSegment, GroupDescriptor, Rule,
};
use crate::numeric::is_prime;
use crate::series::CoefficientField;

use super::{CheckConfig, SuiteOutcome, Tally};

pub(crate) fn run(cfg: &CheckConfig) -> SuiteOutcome {
    let mut t = Tally::new("classify");
    let bound = cfg.prime_bound;
    for (name, g) in catalog() {
        let v0 = v0_descriptor(&g);
        let lr = v0_lr_definable(&g, bound);
        if arc_v0_collapse(&g) {
            t.check(v0.segment == FinalSegment::Trivial && lr.definable, || {
                format!(
                    "{name}: collapse holds but v0 = {:?}, definable = {}",
                    v0.segment, lr.definable
                )
            });
        }
        let meet = meet_over_all_primes(&mut t, name, &g, bound);
        t.check(meet == v0.segment, || {
            format!(
                "{name}: v0 segment {:?} differs from the meet {meet:?}",
                v0.segment
            )
        });
        for p in relevant_primes(&g, bound) {
            let vp = vp_descriptor(&g, p);
            t.check(v0.segment.is_subset_of(&vp.segment), || {
                format!("{name}: v0 is not finer than v_{p}")
            });
            t.check(
                vp.residue_group.is_trivial() || vp_residue_divisible(&vp.residue_group, p),
                || format!("{name}: residue group of v_{p} is not {p}-divisible"),
            );
        }
        t.check(
            largest_divisible_convex(&v0.value_group) == FinalSegment::Trivial,
            || {
                format!(
                    "{name}: v0 value group {} keeps a divisible convex part",
                    v0.value_group
                )
            },
        );
        t.check(is_divisible(&v0.residue_group), || {
            format!("{name}: v0 residue group not divisible")
        });
        if is_dense_in_hull(&g) && !is_divisible(&g) {
            t.check(lr_definable_regular(&g), || {
                format!("{name}: regular, not divisible, not definable")
            });
        }
        t.check(non_singular(&g) == non_singular_bounded(&g, bound), || {
            format!("{name}: non-singularity depends on the prime bound")
        });
        if matches!(g, GroupDescriptor::FiniteLex(_)) {
            t.check(
                non_singular(&g) && strongly_nip_witnessed(&g) == StronglyNip::Witnessed,
                || format!("{name}: finite sums are non-singular and strongly NIP"),
            );
        }
        for field in [
            CoefficientField::PlainRationals,
            CoefficientField::declared_real_closed(CoefficientField::PlainRationals),
        ] {
            let r = classify_report(&field, &g, bound);
            t.check(
                r.v0 == v0
                    && r.v0_lr_definable == lr
                    && r.arc_v0_collapse == arc_v0_collapse(&g)
                    && r.field_dense_in_rc == (field.is_declared_real_closed() && is_divisible(&g))
                    && r.vp_table
                        .iter()
                        .all(|e| e.valuation == vp_descriptor(&g, e.prime) && is_prime(e.prime)),
                || format!("{name}: report over {field} disagrees with the direct computations"),
            );
        }
    }
    t.finish()
}

fn vp_residue_divisible(h: &GroupDescriptor, p: u64) -> bool {
    crate::groups::largest_p_divisible_convex(h, p) == FinalSegment::WholeGroup
}

/// The intersection of `v_p` segments over every prime. Primes up to `bound`
/// and the least prime missing from each component are met directly; for a
/// prefix-prime rule the `p`-divisible part starts strictly later for each
/// larger odd prime, so the full intersection drops below every rule index.
fn meet_over_all_primes(
    t: &mut Tally,
    name: &str,
    g: &GroupDescriptor,
    bound: u64,
) -> FinalSegment {
    let primes = relevant_primes(g, bound);
    let mut meet = primes
        .iter()
        .map(|&p| vp_descriptor(g, p).segment)
        .fold(FinalSegment::WholeGroup, FinalSegment::meet);
    let limit = match g {
        GroupDescriptor::OmegaLex(Rule::PrefixPrimes { .. }) => Some(FinalSegment::Trivial),
        GroupDescriptor::OmegaPlusOneLex(Rule::PrefixPrimes { .. }, _) => {
            Some(FinalSegment::TopOnly)
        }
        _ => None,
    };
    if let Some(limit) = limit {
        let odd: Vec<u64> = primes.iter().copied().filter(|&p| p > 2).collect();
        for w in odd.windows(2) {
            let (a, b) = (
                vp_descriptor(g, w[0]).segment,
                vp_descriptor(g, w[1]).segment,
            );
            t.check(
                b.is_subset_of(&a) && (a != b || a == FinalSegment::Trivial),
                || {
                    format!(
                        "{name}: v_{} and v_{} segments do not strictly shrink",
                        w[0], w[1]
                    )
                },
            );
        }
        meet = meet.meet(limit);
    }
    meet
}
