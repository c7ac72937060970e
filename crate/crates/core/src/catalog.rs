//! Named group presentations used by the check suites and benchmarks.

use crate::dsl::parse_group_expr;
use crate::groups::GroupDescriptor;

pub const CATALOG: &[(&str, &str)] = &[
    ("integers", "Z"),
    ("rationals", "Q"),
    ("dyadic", "loc{2}"),
    ("odd-denominators", "loc{>=3}"),
    ("loc-2-3", "loc{2,3}"),
    ("z-z", "lex(Z, Z)"),
    ("a-a", "lex(loc{2}, loc{2})"),
    ("q-a", "lex(Q, loc{2})"),
    ("b-q", "lex(loc{>=3}, Q)"),
    ("q-q", "lex(Q, Q)"),
    ("a-z", "lex(loc{2}, Z)"),
    ("z-q", "lex(Z, Q)"),
    ("q-q-z", "lex(Q, Q, Z)"),
    ("loc35-a-q", "lex(loc{3,5}, loc{2}, Q)"),
    ("q-loc23", "lex(Q, loc{2,3})"),
    ("z-b", "lex(Z, loc{>=3})"),
    ("b-b", "lex(loc{>=3}, loc{>=3})"),
    ("omega-z", "omega(const(Z))"),
    ("omega-q", "omega(const(Q))"),
    ("omega-a", "omega(const(loc{2}))"),
    ("prefix-primes", "omega(prefixprimes)"),
    ("omega1-q-z", "omegaplus1(const(Q), Z)"),
    ("omega1-prefix-a", "omegaplus1(prefixprimes, loc{2})"),
    ("omega1-a-q", "omegaplus1(const(loc{2}), Q)"),
    ("omega1-q-b5", "omegaplus1(const(Q), loc{>=5})"),
];

pub fn catalog() -> Vec<(&'static str, GroupDescriptor)> {
    CATALOG
        .iter()
        .map(|(name, expr)| {
            (
                *name,
                parse_group_expr(expr).expect("catalog entries parse"),
            )
        })
        .collect()
}

pub fn by_name(name: &str) -> Option<GroupDescriptor> {
    CATALOG
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, e)| parse_group_expr(e).expect("catalog entries parse"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_is_large_and_canonical() {
        let all = catalog();
        assert!(all.len() >= 20);
        for (name, g) in &all {
            assert_eq!(parse_group_expr(&g.to_string()).unwrap(), *g, "{name}");
        }
    }
}
