//! Bounded brute-force search for group elements in an interval of the
//! divisible hull. Used to cross-check the structural decision rules; it
//! never consults them.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::One;

use super::descriptor::{GroupDescriptor, Index};
use super::element::{GroupElement, HullElement};
use super::subgroup::RationalSubgroup;
use crate::numeric::Rational;

/// Indices a candidate may occupy: the supports of both endpoints, their
/// neighbours, and the first index.
fn candidate_indices(g: &GroupDescriptor, a: &HullElement, b: &HullElement) -> Vec<Index> {
    let mut set = BTreeSet::new();
    if let Some(first) = g.first_index() {
        set.insert(first);
    }
    for i in a.indices().chain(b.indices()) {
        set.insert(i);
        if let Some(p) = g.predecessor(i) {
            set.insert(p);
        }
        if let Some(s) = g.successor(i) {
            set.insert(s);
        }
    }
    set.into_iter().filter(|i| g.contains_index(*i)).collect()
}

/// Some member of `c` with denominator `<= bound` strictly inside `(lo, hi)`
/// (`None` bounds are infinite).
fn strictly_between(
    c: &RationalSubgroup,
    lo: Option<&Rational>,
    hi: Option<&Rational>,
    bound: u64,
) -> Option<Rational> {
    match (lo, hi) {
        (None, None) => Some(Rational::one()),
        (Some(l), None) => Some(l.floor() + Rational::one()),
        (None, Some(h)) => Some(h.ceil() - Rational::one()),
        (Some(l), Some(h)) => {
            if l >= h {
                return None;
            }
            for q in c.denominators_up_to(bound) {
                let qb = BigInt::from(q);
                let p = (l * Rational::from_integer(qb.clone()))
                    .floor()
                    .to_integer()
                    + 1;
                let cand = Rational::new(p, qb);
                if &cand < h {
                    return Some(cand);
                }
            }
            None
        }
    }
}

fn search(
    g: &GroupDescriptor,
    idx: &[Index],
    pos: usize,
    lo: Option<&HullElement>,
    hi: Option<&HullElement>,
    bound: u64,
) -> Option<Vec<(Index, Rational)>> {
    let &i = idx.get(pos)?;
    let c = g.component(i)?;
    let l = lo.map(|x| x.coefficient(i));
    let h = hi.map(|x| x.coefficient(i));
    if let Some(x) = strictly_between(&c, l.as_ref(), h.as_ref(), bound) {
        return Some(vec![(i, x)]);
    }
    let tie = l.is_some() && l == h;
    let mut tries: Vec<(Rational, Option<&HullElement>, Option<&HullElement>)> = Vec::new();
    if let Some(lv) = &l {
        tries.push((lv.clone(), lo, if tie { hi } else { None }));
    }
    if let Some(hv) = &h {
        if !tie {
            tries.push((hv.clone(), None, hi));
        }
    }
    for (x, lo2, hi2) in tries {
        if !c.contains(&x) || x.denom() > &BigInt::from(bound) {
            continue;
        }
        if let Some(mut rest) = search(g, idx, pos + 1, lo2, hi2, bound) {
            rest.insert(0, (i, x));
            return Some(rest);
        }
    }
    None
}

/// Exhaustive bounded search for an element of `G` strictly between `a` and
/// `b`, with coordinates at the candidate indices and denominators at most
/// `denom_bound`. `None` only means nothing was found at this bound.
pub fn oracle_between(
    g: &GroupDescriptor,
    a: &HullElement,
    b: &HullElement,
    denom_bound: u64,
) -> Option<GroupElement> {
    if a >= b {
        return None;
    }
    let idx = candidate_indices(g, a, b);
    let coords = search(g, &idx, 0, Some(a), Some(b), denom_bound.max(1))?;
    let c = HullElement::from_pairs(coords);
    debug_assert!(a < &c && &c < b);
    GroupElement::new(c, g).ok()
}

/// Element `c` of `G` with `lo <= c <= hi`, endpoints included.
pub fn oracle_closed(
    g: &GroupDescriptor,
    lo: &HullElement,
    hi: &HullElement,
    denom_bound: u64,
) -> Option<GroupElement> {
    if lo > hi {
        return None;
    }
    for end in [lo, hi] {
        if let Ok(e) = GroupElement::new(end.clone(), g) {
            return Some(e);
        }
    }
    oracle_between(g, lo, hi, denom_bound)
}
