use crate::catalog::catalog;
use crate::dsl::{
    canonical, parse_element, parse_field, parse_group_expr, parse_series_expr, SyntaxKind,
};
use crate::error::Error;
use crate::groups::GroupDescriptor;
use crate::sample::Sampler;
use crate::series::CoefficientField;

use super::series::CONTEXTS;
use super::{CheckConfig, SuiteOutcome, Tally};

const FUZZED: usize = 200;

/// Inputs that must be rejected with a position. Series entries are read
/// over `Q` and `Z`.
pub fn malformed_corpus() -> Vec<(SyntaxKind, &'static str)> {
    use SyntaxKind::*;
    vec![
        (Group, ""),
        (Group, "lex("),
        (Group, "lex()"),
        (Group, "lex(Z,,Q)"),
        (Group, "lex(Z, Q"),
        (Group, "loc{4}"),
        (Group, "loc{}"),
        (Group, "loc{2,}"),
        (Group, "loc{>=4}"),
        (Group, "loc{2"),
        (Group, "loc{99999999999999999999999}"),
        (Group, "omega(Z)"),
        (Group, "omega(const(lex(Z, Z)))"),
        (Group, "omegaplus1(const(Q))"),
        (Group, "omegaplus1(prefixprimes, lex(Z, Q))"),
        (Group, "omega(prefixprimes(x))"),
        (Group, "lex(omega(const(Z)), Z)"),
        (Group, "Q Q"),
        (Group, "Z)"),
        (Group, "R"),
        (Element, "{1: 1/0}"),
        (Element, "{0: 1}"),
        (Element, "{1 1}"),
        (Element, "{1: 1"),
        (Element, "{top: }"),
        (Element, "{1: a}"),
        (Element, "1: 1"),
        (Field, "Q(sqrt(4))"),
        (Field, "Q(sqrt(1))"),
        (Field, "Q(sqrt(2)"),
        (Field, "R"),
        (Field, "RC(Z)"),
        (Coefficient, "1 +"),
        (Coefficient, "sqrt(2) + sqrt(3)"),
        (Coefficient, "2*t^({1: 1})"),
        (Coefficient, "(1"),
        (Series, "2*t^({1: 1/2})"),
        (Series, "2*"),
        (Series, "t^(1)"),
        (Series, "sqrt(2)*t^({1: 1})"),
        (Series, "1 + + 2"),
        (Series, "3*t^({2: 1})"),
        (Cut, "group"),
        (Cut, "residue"),
        (Cut, "group {1: }"),
        (Cut, "residue sqrt("),
        (Cut, "residue 1/0"),
        (Cut, "residue t^({1: 1})"),
    ]
}

fn ws(s: &mut Sampler) -> &'static str {
    s.pick(&["", "", " ", "  ", "\t", "\n "])
}

fn leaf(s: &mut Sampler) -> String {
    match s.below(4) {
        0 => "Z".into(),
        1 => "Q".into(),
        2 => {
            let n = s.range(1, 3);
            let ps: Vec<String> = (0..n)
                .map(|_| s.pick(&[2u64, 3, 5, 7, 11, 13]).to_string())
                .collect();
            let sep = format!("{},{}", ws(s), ws(s));
            format!("loc{}{{{}{}{}}}", ws(s), ws(s), ps.join(&sep), ws(s))
        }
        _ => format!(
            "loc{{{}>={}{}}}",
            ws(s),
            s.pick(&[2u64, 3, 5, 7, 11]),
            ws(s)
        ),
    }
}

fn finite(s: &mut Sampler, depth: u32) -> String {
    if depth == 0 || s.chance(0.4) {
        return leaf(s);
    }
    let n = s.range(1, 3);
    let parts: Vec<String> = (0..n).map(|_| finite(s, depth - 1)).collect();
    let sep = format!("{},{}", ws(s), ws(s));
    format!("lex{}({}{}{})", ws(s), ws(s), parts.join(&sep), ws(s))
}

fn rule(s: &mut Sampler) -> String {
    match s.below(3) {
        0 => format!("const({}{}{})", ws(s), leaf(s), ws(s)),
        1 => "prefixprimes".into(),
        _ => format!("prefixprimes({}{}{})", ws(s), s.range(0, 4), ws(s)),
    }
}

/// A random well-formed group expression with random spacing, nesting and
/// prime-list order.
pub fn random_group_expr(s: &mut Sampler) -> String {
    let body = match s.below(4) {
        0 | 1 => finite(s, 3),
        2 => format!("omega({}{}{})", ws(s), rule(s), ws(s)),
        _ => format!(
            "omegaplus1({}{},{}{}{})",
            ws(s),
            rule(s),
            ws(s),
            leaf(s),
            ws(s)
        ),
    };
    format!("{}{}{}", ws(s), body, ws(s))
}

fn round_trip_group(t: &mut Tally, text: &str) {
    match parse_group_expr(text) {
        Ok(g) => {
            let printed = g.to_string();
            let again = parse_group_expr(&printed);
            t.check(again.as_ref() == Ok(&g), || {
                format!("{text:?} -> {printed} does not parse back")
            });
            t.check(
                again.map(|h| h.to_string()).as_deref() == Ok(printed.as_str()),
                || format!("printing {printed} is not stable"),
            );
        }
        Err(e) => t.check(false, || format!("well-formed {text:?} rejected: {e}")),
    }
}

pub(crate) fn run(cfg: &CheckConfig) -> SuiteOutcome {
    let mut t = Tally::new("parser");
    let mut s = Sampler::new(cfg.seed);
    for (_, g) in catalog() {
        round_trip_group(&mut t, &g.to_string());
    }
    for _ in 0..FUZZED {
        let text = random_group_expr(&mut s);
        round_trip_group(&mut t, &text);
    }
    for field in ["Q", "Q(sqrt(2))", "Q(sqrt(15))", "RC", "RC(Q(sqrt(3)))"] {
        let f = parse_field(field).expect("field parses");
        t.check(parse_field(&f.to_string()).as_ref() == Ok(&f), || {
            format!("field {f} does not round trip")
        });
    }
    for (k, g) in CONTEXTS {
        let field = parse_field(k).expect("field parses");
        let group = parse_group_expr(g).expect("group parses");
        for _ in 0..FUZZED {
            let e = s.hull_element(&group);
            t.check(parse_element(&e.to_string()).as_ref() == Ok(&e), || {
                format!("element {e} does not round trip")
            });
            let x = s.series(&field, &group, 4);
            let back = parse_series_expr(&x.to_string(), &field, &group);
            t.check(back.as_ref() == Ok(&x), || {
                format!("series {x} over ({k}, {g}) does not round trip")
            });
        }
    }
    let (q, z) = (
        CoefficientField::PlainRationals,
        GroupDescriptor::single(crate::groups::RationalSubgroup::integers()),
    );
    for (kind, text) in malformed_corpus() {
        let r = canonical(kind, text, &q, &z);
        t.check(
            matches!(r, Err(Error::Parse { offset, .. }) if offset <= text.len()),
            || format!("malformed {} {text:?} gave {r:?}", kind.name()),
        );
    }
    t.finish()
}
