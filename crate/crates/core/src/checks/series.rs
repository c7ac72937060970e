use std::cmp::Ordering;

use crate::dsl::{parse_field, parse_group_expr};
use crate::error::Result;
use crate::groups::{GroupDescriptor, Val};
use crate::sample::Sampler;
use crate::series::{
    s_cmp, trunc_inverse, trunc_sqrt, verify_inverse, verify_sqrt, CoefficientField, Series,
};

use super::{CheckConfig, SuiteOutcome, Tally};

pub(crate) const CONTEXTS: &[(&str, &str)] = &[
    ("Q", "Z"),
    ("Q", "Q"),
    ("Q(sqrt(2))", "Q"),
    ("Q", "lex(Z, Z)"),
    ("Q(sqrt(2))", "lex(loc{2}, loc{2})"),
    ("Q", "omegaplus1(const(Q), Z)"),
];

const MAX_TERMS: usize = 4;
const CONTRACT_INPUTS: usize = 500;

pub(crate) fn run(cfg: &CheckConfig) -> SuiteOutcome {
    let mut t = Tally::new("series");
    let mut s = Sampler::new(cfg.seed);
    for (k, g) in CONTEXTS {
        let field = parse_field(k).expect("context field parses");
        let group = parse_group_expr(g).expect("context group parses");
        let label = format!("({k}, {g})");
        for _ in 0..cfg.trials {
            let x = s.series(&field, &group, MAX_TERMS);
            let y = s.series(&field, &group, MAX_TERMS);
            let z = s.series(&field, &group, MAX_TERMS);
            law(&mut t, &label, ring_violation(&x, &y, &z));
            law(&mut t, &label, order_violation(&x, &y, &z));
        }
        for _ in 0..CONTRACT_INPUTS.min(cfg.trials) {
            law(&mut t, &label, inverse_violation(&mut s, &field, &group));
            law(&mut t, &label, sqrt_violation(&mut s, &field, &group));
        }
    }
    t.finish()
}

pub(crate) fn law(t: &mut Tally, label: &str, r: Result<Option<String>>) {
    match r {
        Ok(None) => t.check(true, String::new),
        Ok(Some(msg)) => t.check(false, || format!("{label}: {msg}")),
        Err(e) => t.check(false, || format!("{label}: unexpected error {e}")),
    }
}

fn first_failure(laws: Vec<(bool, String)>) -> Option<String> {
    laws.into_iter().find(|(ok, _)| !ok).map(|(_, msg)| msg)
}

fn ring_violation(x: &Series, y: &Series, z: &Series) -> Result<Option<String>> {
    let one = Series::one(x.field(), x.group());
    let xy = x.checked_mul(y)?;
    let at = || format!("at x = {x}, y = {y}, z = {z}");
    Ok(first_failure(vec![
        (
            x.checked_add(y)?.checked_add(z)? == x.checked_add(&y.checked_add(z)?)?,
            format!("+ not associative {}", at()),
        ),
        (
            x.checked_add(y)? == y.checked_add(x)?,
            format!("+ not commutative {}", at()),
        ),
        (
            xy.checked_mul(z)? == x.checked_mul(&y.checked_mul(z)?)?,
            format!("* not associative {}", at()),
        ),
        (
            xy == y.checked_mul(x)?,
            format!("* not commutative {}", at()),
        ),
        (
            x.checked_mul(&y.checked_add(z)?)? == xy.checked_add(&x.checked_mul(z)?)?,
            format!("* does not distribute {}", at()),
        ),
        (
            x.checked_add(&x.neg())?.is_zero(),
            format!("x - x != 0 {}", at()),
        ),
        (
            &x.checked_mul(&one)? == x,
            format!("1 is not neutral {}", at()),
        ),
    ]))
}

fn lt(a: &Series, b: &Series) -> Result<bool> {
    Ok(s_cmp(a, b)? == Ordering::Less)
}

fn abs(x: &Series) -> Series {
    if x.sign() < 0 {
        x.neg()
    } else {
        x.clone()
    }
}

fn order_violation(x: &Series, y: &Series, z: &Series) -> Result<Option<String>> {
    let at = || format!("at x = {x}, y = {y}, z = {z}");
    let mut laws = vec![(
        s_cmp(x, y)? == x.checked_sub(y)?.sign().cmp(&0),
        format!("comparison disagrees with the sign of x - y {}", at()),
    )];
    if lt(x, y)? {
        laws.push((
            lt(&x.checked_add(z)?, &y.checked_add(z)?)?,
            format!("+ not monotone {}", at()),
        ));
        if z.sign() > 0 {
            laws.push((
                lt(&x.checked_mul(z)?, &y.checked_mul(z)?)?,
                format!("* by z > 0 not monotone {}", at()),
            ));
        }
    }
    let (ax, ay) = (abs(x), abs(y));
    if !x.is_zero() && !y.is_zero() {
        laws.push((
            ax.checked_mul(&ay)?.sign() > 0,
            format!("product of positives not positive {}", at()),
        ));
        let (vx, vy) = (x.vmin().finite().unwrap(), y.vmin().finite().unwrap());
        laws.push((
            x.checked_mul(y)?.vmin() == Val::Finite(&vx + &vy),
            format!("vmin not additive {}", at()),
        ));
    }
    laws.push((
        x.checked_add(y)?.vmin() >= x.vmin().min(y.vmin()),
        format!("vmin of a sum drops {}", at()),
    ));
    let nonneg = |v: Val<_>| match v {
        Val::Infinity => true,
        Val::Finite(e) => crate::groups::HullElement::sign(&e) >= 0,
    };
    if lt(&ax, &ay)? && nonneg(ay.vmin()) {
        laws.push((
            nonneg(ax.vmin()),
            format!("valuation ring not convex {}", at()),
        ));
    }
    Ok(first_failure(laws))
}

fn inverse_violation(
    s: &mut Sampler,
    field: &CoefficientField,
    group: &GroupDescriptor,
) -> Result<Option<String>> {
    let x = s.nonzero_series(field, group, MAX_TERMS);
    let n = s.range(1, 5) as usize;
    let res = trunc_inverse(&x, n)?;
    Ok((!verify_inverse(&x, &res)?)
        .then(|| format!("inverse of {x} to {n} terms fails its guarantee")))
}

/// A positive input with a square leading coefficient and even leading exponent:
/// `w^2` plus a perturbation of strictly higher valuation.
fn sqrt_input(
    s: &mut Sampler,
    field: &CoefficientField,
    group: &GroupDescriptor,
) -> Result<Series> {
    let w = s.nonzero_series(field, group, 3);
    let sq = w.checked_mul(&w)?;
    let lead = sq.vmin().finite().expect("w is nonzero");
    let noise = s.series(field, group, 3);
    let higher: Vec<_> = noise
        .terms()
        .iter()
        .filter(|(e, _)| e > &lead)
        .cloned()
        .collect();
    sq.checked_add(&Series::from_terms(field, group, higher)?)
}

fn sqrt_violation(
    s: &mut Sampler,
    field: &CoefficientField,
    group: &GroupDescriptor,
) -> Result<Option<String>> {
    let x = sqrt_input(s, field, group)?;
    let n = s.range(1, 5) as usize;
    let res = trunc_sqrt(&x, n)?;
    Ok((!verify_sqrt(&x, &res)?)
        .then(|| format!("square root of {x} to {n} terms fails its guarantee")))
}
