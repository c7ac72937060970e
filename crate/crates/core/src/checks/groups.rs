use crate::catalog::catalog;
use crate::classify::relevant_primes;
use crate::groups::{
    find_nondense_witness, g_member, is_closed_in_hull, is_dense_in_hull, is_densely_ordered,
    is_discretely_ordered, is_divisible, is_immediate_in_hull, is_limit_point, is_regular,
    largest_divisible_convex, largest_p_divisible_convex, oracle_between, oracle_closed,
    FinalSegment, GroupDescriptor, GroupElement, HullElement, Rule,
};
use crate::numeric::rat;
use crate::sample::Sampler;

use super::{CheckConfig, SuiteOutcome, Tally};

pub(crate) const ORACLE_BOUND: u64 = 64;
const WIDE_BOUND: u64 = 64 * 64 * 8;

/// Bounded search, retried once at a much larger denominator bound.
pub(crate) fn find_between(
    g: &GroupDescriptor,
    a: &HullElement,
    b: &HullElement,
) -> Option<GroupElement> {
    oracle_between(g, a, b, ORACLE_BOUND).or_else(|| oracle_between(g, a, b, WIDE_BOUND))
}

pub(crate) fn run(cfg: &CheckConfig) -> SuiteOutcome {
    let mut t = Tally::new("groups");
    let mut s = Sampler::new(cfg.seed);
    let pairs = (cfg.trials / 20).max(50);
    for (name, g) in catalog() {
        axioms(&mut t, &mut s, name, &g, cfg.trials);
        order_density(&mut t, &mut s, name, &g, pairs);
        hull_density(&mut t, &mut s, name, &g, pairs);
        divisible_intervals(&mut t, &mut s, name, &g, pairs);
        limit_points(&mut t, &mut s, name, &g, pairs);
        structure(&mut t, name, &g, cfg.prime_bound);
    }
    t.finish()
}

fn axioms(t: &mut Tally, s: &mut Sampler, name: &str, g: &GroupDescriptor, trials: usize) {
    for _ in 0..trials {
        let (x, y, z) = (s.group_element(g), s.group_element(g), s.group_element(g));
        let sum = &x + &y;
        t.check(
            g_member(&sum, g).unwrap_or(false) && g_member(&-&x, g).unwrap_or(false),
            || format!("{name}: not closed at {x}, {y}"),
        );
        t.check(&sum + &z == &x + &(&y + &z), || {
            format!("{name}: + not associative at {x}, {y}, {z}")
        });
        t.check(sum == &y + &x, || {
            format!("{name}: + not commutative at {x}, {y}")
        });
        t.check((&x + &-&x).is_zero(), || {
            format!("{name}: x - x != 0 at {x}")
        });
        if x < y {
            t.check(&x + &z < &y + &z, || {
                format!("{name}: order not translation invariant at {x}, {y}, {z}")
            });
        }
        t.check(
            sum.nat_valuation() >= x.nat_valuation().min(y.nat_valuation()),
            || format!("{name}: valuation of {x} + {y} drops"),
        );
    }
}

/// Densely ordered iff `(0, x)` meets `G` for every `x > 0`.
fn order_density(t: &mut Tally, s: &mut Sampler, name: &str, g: &GroupDescriptor, pairs: usize) {
    let zero = HullElement::zero();
    if is_densely_ordered(g) {
        for _ in 0..pairs {
            let x = s.positive_group_element(g);
            t.check(find_between(g, &zero, &x).is_some(), || {
                format!("{name}: densely ordered but nothing found in (0, {x})")
            });
        }
    } else {
        let least = HullElement::unit(g.last_index().expect("discrete groups have a last index"));
        t.check(
            oracle_between(g, &zero, &least, ORACLE_BOUND).is_none(),
            || format!("{name}: discretely ordered but (0, {least}) is inhabited"),
        );
        for _ in 0..pairs {
            let x = s.positive_group_element(g);
            t.check(x >= least, || {
                format!("{name}: {x} lies below the least positive {least}")
            });
        }
    }
}

/// Dense in the hull iff every nonempty interval of `div G` meets `G`.
fn hull_density(t: &mut Tally, s: &mut Sampler, name: &str, g: &GroupDescriptor, pairs: usize) {
    if is_dense_in_hull(g) {
        for _ in 0..pairs {
            let a = s.hull_element(g);
            let gap = loop {
                let d = s.hull_element(g).abs();
                if !d.is_zero() {
                    break d;
                }
            };
            let b = &a + &gap;
            t.check(find_between(g, &a, &b).is_some(), || {
                format!("{name}: dense in hull but nothing found in ({a}, {b})")
            });
        }
        return;
    }
    let (a, b) = if !is_densely_ordered(g) {
        (
            HullElement::zero(),
            HullElement::unit(g.last_index().expect("last index")),
        )
    } else {
        let Some(g0) = t.ok(find_nondense_witness(g), || format!("{name}: witness")) else {
            return;
        };
        let n = g0.nat_valuation().finite().expect("witness is nonzero");
        let next = g.successor(n).expect("witness index is not maximal");
        t.check(!g_member(&g0, g).unwrap_or(true), || {
            format!("{name}: witness {g0} is a member")
        });
        t.check(!is_limit_point(&g0, g).unwrap_or(true), || {
            format!("{name}: witness {g0} is a limit point")
        });
        let b = &g0 + &HullElement::unit(next);
        (g0, b)
    };
    t.check(oracle_between(g, &a, &b, ORACLE_BOUND).is_none(), || {
        format!("{name}: not dense in hull but ({a}, {b}) is inhabited")
    });
}

/// In a regular group any interval holding `n` elements holds an `n`-th multiple.
fn divisible_intervals(
    t: &mut Tally,
    s: &mut Sampler,
    name: &str,
    g: &GroupDescriptor,
    pairs: usize,
) {
    if !is_regular(g) {
        return;
    }
    for _ in 0..pairs {
        let n = *s.pick(&[2i64, 3, 5]);
        let mut pts: Vec<HullElement> = (0..n).map(|_| s.group_element(g)).collect();
        pts.sort();
        pts.dedup();
        if pts.len() < n as usize {
            continue;
        }
        let lo = pts[0].scale(&rat(1, n));
        let hi = pts[pts.len() - 1].scale(&rat(1, n));
        let found = oracle_closed(g, &lo, &hi, ORACLE_BOUND)
            .or_else(|| oracle_closed(g, &lo, &hi, WIDE_BOUND));
        t.check(found.is_some(), || {
            format!(
                "{name}: regular but no {n}-th part of [{}, {}]",
                pts[0],
                pts[pts.len() - 1]
            )
        });
    }
}

fn limit_points(t: &mut Tally, s: &mut Sampler, name: &str, g: &GroupDescriptor, pairs: usize) {
    let last = g.last_index();
    for _ in 0..pairs {
        let x = s.hull_element(g);
        let Some(limit) = t.ok(is_limit_point(&x, g), || {
            format!("{name}: limit point of {x}")
        }) else {
            continue;
        };
        if g_member(&x, g).unwrap_or(false) {
            t.check(limit == is_densely_ordered(g), || {
                format!("{name}: member {x} misclassified")
            });
            continue;
        }
        if limit {
            let eps =
                HullElement::monomial(last.expect("limit points need a last index"), rat(1, 64));
            t.check(find_between(g, &x, &(&x + &eps)).is_some(), || {
                format!("{name}: {x} is a limit point but nothing found within {eps}")
            });
        } else {
            let n = crate::groups::first_failure(&x, g)
                .ok()
                .flatten()
                .expect("non-member");
            let eps = match g.successor(n) {
                Some(next) => HullElement::unit(next),
                None => HullElement::monomial(n, rat(1, 64)),
            };
            let lower = &x - &eps;
            let upper = &x + &eps;
            t.check(
                oracle_between(g, &lower, &x, ORACLE_BOUND).is_none()
                    && oracle_between(g, &x, &upper, ORACLE_BOUND).is_none(),
                || format!("{name}: {x} is isolated but an element lies within {eps}"),
            );
        }
    }
    let candidate = last.zip(g.last_component().and_then(|c| c.non_divisible_prime()));
    if let (true, Some((l, q))) = (is_closed_in_hull(g), candidate) {
        let g0 = HullElement::monomial(l, rat(1, q as i64));
        let eps = HullElement::monomial(l, rat(1, 64));
        t.check(
            oracle_between(g, &(&g0 - &eps), &(&g0 + &eps), ORACLE_BOUND).is_none(),
            || format!("{name}: closed in hull but {g0} is approached within {eps}"),
        );
    }
    if !is_closed_in_hull(g) {
        let l = last.expect("non-closed groups have a last index");
        let q = g
            .last_component()
            .and_then(|c| c.non_divisible_prime())
            .expect("not divisible");
        let g0 = HullElement::monomial(l, rat(1, q as i64));
        t.check(
            is_limit_point(&g0, g).unwrap_or(false) && !g_member(&g0, g).unwrap_or(true),
            || format!("{name}: {g0} should be a limit point outside the group"),
        );
        for k in 1..=6 {
            let eps = HullElement::monomial(l, rat(1, 1 << k));
            t.check(find_between(g, &g0, &(&g0 + &eps)).is_some(), || {
                format!("{name}: nothing found within {eps} of {g0}")
            });
        }
    }
}

fn structure(t: &mut Tally, name: &str, g: &GroupDescriptor, prime_bound: u64) {
    let dense = is_dense_in_hull(g);
    t.check(!dense || is_densely_ordered(g), || {
        format!("{name}: dense in hull but not densely ordered")
    });
    t.check(is_discretely_ordered(g) != is_densely_ordered(g), || {
        format!("{name}: order type")
    });
    if dense && g.last_index().is_none() {
        t.check(is_immediate_in_hull(g), || {
            format!("{name}: dense in hull, no last index, not immediate")
        });
    }
    if is_immediate_in_hull(g) {
        t.check(dense, || format!("{name}: immediate but not dense in hull"));
    }
    let primes = relevant_primes(g, prime_bound);
    let segments: Vec<FinalSegment> = primes
        .iter()
        .map(|&p| largest_p_divisible_convex(g, p))
        .collect();
    if segments.iter().all(|s| *s != FinalSegment::Trivial) {
        t.check(is_closed_in_hull(g), || {
            format!("{name}: every p-divisible part nontrivial but not closed")
        });
    }
    let div = largest_divisible_convex(g);
    for (p, seg) in primes.iter().zip(&segments) {
        t.check(div.is_subset_of(seg), || {
            format!("{name}: divisible part exceeds the {p}-divisible part")
        });
    }
    let meet = segments
        .iter()
        .fold(FinalSegment::WholeGroup, |acc, s| acc.meet(*s));
    let prefix_rule = matches!(
        g,
        GroupDescriptor::OmegaLex(Rule::PrefixPrimes { .. })
            | GroupDescriptor::OmegaPlusOneLex(Rule::PrefixPrimes { .. }, _)
    );
    t.check(prefix_rule || meet == div, || {
        format!("{name}: divisible part {div:?} differs from the meet {meet:?}")
    });
    if is_divisible(g) {
        t.check(div == FinalSegment::WholeGroup, || {
            format!("{name}: divisible group has a proper divisible part")
        });
    }
}
