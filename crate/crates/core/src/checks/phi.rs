use crate::defval::{phi_holds, phi_witness};
use crate::dsl::{parse_field, parse_group_expr};
use crate::error::Result;
use crate::groups::{GroupDescriptor, Val};
use crate::numeric::{int, QuadExt};
use crate::sample::Sampler;
use crate::series::{CoefficientField, Series};

use super::series::law;
use super::{CheckConfig, SuiteOutcome, Tally};

pub(crate) fn run(cfg: &CheckConfig) -> SuiteOutcome {
    let mut t = Tally::new("phi");
    let mut s = Sampler::new(cfg.seed);
    let field = parse_field("Q(sqrt(2))").expect("field parses");
    let q = parse_group_expr("Q").expect("group parses");
    for _ in 0..cfg.trials {
        law(&mut t, "(Q(sqrt(2)), Q)", square_led(&mut s, &field, &q));
    }

    let plain = CoefficientField::PlainRationals;
    let two = Series::constant(&plain, &q, QuadExt::from_int(2)).expect("constant");
    t.check(!phi_holds(&two) && two.sign() > 0, || {
        "(Q, Q): 2 is positive but should fail the square condition".to_string()
    });

    let z = parse_group_expr("Z").expect("group parses");
    let odd = Series::monomial(
        &plain,
        &z,
        QuadExt::one(),
        crate::groups::HullElement::unit(z.first_index().expect("Z has an index")),
    )
    .expect("monomial");
    t.check(!phi_holds(&odd) && odd.sign() > 0, || {
        "(Q, Z): t is positive but has no square root of its leading term".to_string()
    });
    t.finish()
}

/// `x = ±c^2 t^g (1 + r)`: the condition holds exactly for the positive sign.
fn square_led(
    s: &mut Sampler,
    field: &CoefficientField,
    group: &GroupDescriptor,
) -> Result<Option<String>> {
    let c = s.coefficient(field);
    let lead = c.checked_mul(&c)?;
    let negative = s.chance(0.5);
    let lead = if negative {
        QuadExt::zero().checked_sub(&lead)?
    } else {
        lead
    };
    let g = s.group_element(group);
    let mut x = Series::monomial(field, group, lead, g.clone())?;
    for (e, a) in s.series(field, group, 3).terms() {
        if e > &g {
            x = x.checked_add(&Series::monomial(field, group, a.clone(), e.clone())?)?;
        }
    }
    let holds = phi_holds(&x);
    if holds != (x.sign() >= 0) {
        return Ok(Some(format!("condition is {holds} at {x}")));
    }
    let vx = x.vmin().finite().expect("nonzero");
    if holds {
        let n = s.range(1, 5) as usize;
        let y = phi_witness(&x, n)?.terms;
        let rem = x.checked_sub(&y.checked_mul(&y)?)?;
        let beyond = match rem.vmin() {
            Val::Infinity => true,
            Val::Finite(v) => v > vx,
        };
        if !beyond {
            return Ok(Some(format!("witness {y} leaves {rem} at {x}")));
        }
    } else {
        for _ in 0..4 {
            let y0 = s.nonzero_series(field, group, 3);
            let half = vx.scale(&crate::numeric::rat(1, 2));
            let y = if s.chance(0.5) {
                let v = y0.vmin().finite().expect("nonzero");
                y0.scale(&QuadExt::rational(int(1)), &(&half - &v))?
            } else {
                y0
            };
            let rem = x.checked_sub(&y.checked_mul(&y)?)?;
            if rem.vmin() > Val::Finite(vx.clone()) {
                return Ok(Some(format!(
                    "{y} approximates {x} although the condition fails"
                )));
            }
        }
    }
    Ok(None)
}
