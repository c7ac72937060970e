use std::cmp::Ordering;

use crate::defval::{
    check_condition41, cut_fraction, make_cut, member_Ds, member_Os, os_violation_witness,
    validate_cut, verify_violation, CaseTag, CutPoint,
};
use crate::dsl::{parse_field, parse_group_expr};
use crate::error::Result;
use crate::groups::{GroupDescriptor, HullElement, Val};
use crate::numeric::{rat, rational_in_interval, QuadExt};
use crate::sample::Sampler;
use crate::series::{s_cmp, trunc_inverse, CoefficientField, Series};

use super::series::law;
use super::{CheckConfig, SuiteOutcome, Tally};

pub(crate) const CONTEXTS: &[(&str, &str, CaseTag)] = &[
    ("Q", "Z", CaseTag::Discrete),
    ("RC(Q)", "lex(loc{2}, loc{2})", CaseTag::GroupLimitPoint),
    ("Q", "Z", CaseTag::ResidueLimitPoint),
    ("Q(sqrt(3))", "lex(Z, Z)", CaseTag::Discrete),
    ("RC(Q)", "lex(Q, loc{>=3})", CaseTag::GroupLimitPoint),
    ("Q", "Q", CaseTag::ResidueLimitPoint),
];

const MAX_TERMS: usize = 4;
const PROBES: usize = 8;

pub(crate) fn run(cfg: &CheckConfig) -> SuiteOutcome {
    let mut t = Tally::new("cuts");
    let mut s = Sampler::new(cfg.seed);
    for (k, g, case) in CONTEXTS {
        let field = parse_field(k).expect("context field parses");
        let group = parse_group_expr(g).expect("context group parses");
        let label = format!("({case}, {k}, {g})");
        let Some(cut) = t.ok(make_cut(&field, &group, *case, None), || {
            format!("{label}: make_cut")
        }) else {
            continue;
        };
        t.check(validate_cut(&field, &group, &cut).is_ok(), || {
            format!("{label}: cut {cut} rejected")
        });
        let ctx = Ctx {
            field: &field,
            group: &group,
            cut: &cut,
        };
        for _ in 0..cfg.trials {
            let x = s.series(&field, &group, MAX_TERMS);
            law(&mut t, &label, ctx.membership(&mut s, &x));
            let y = s.series(&field, &group, MAX_TERMS);
            law(&mut t, &label, ctx.ring_axioms(&mut s, &x, &y));
        }
    }
    t.finish()
}

struct Ctx<'a> {
    field: &'a CoefficientField,
    group: &'a GroupDescriptor,
    cut: &'a CutPoint,
}

fn abs(x: &Series) -> Series {
    if x.sign() < 0 {
        x.neg()
    } else {
        x.clone()
    }
}

fn nonneg(v: Val<HullElement>) -> bool {
    match v {
        Val::Infinity => true,
        Val::Finite(e) => e.sign() >= 0,
    }
}

fn positive(v: Val<HullElement>) -> bool {
    match v {
        Val::Infinity => true,
        Val::Finite(e) => e.sign() > 0,
    }
}

impl Ctx<'_> {
    fn in_d(&self, x: &Series) -> Result<bool> {
        member_Ds(x, self.cut)
    }

    fn in_o(&self, x: &Series) -> Result<bool> {
        member_Os(x, self.cut)
    }

    /// `D'` decided without the closed form: `x^N < t^h` for a group cut,
    /// comparison with `a` and `a - 1` inside `k(a)((G))` for a residue cut.
    fn d_oracle(&self, x: &Series) -> Result<bool> {
        match self.cut {
            CutPoint::GroupCut { g0 } => {
                if x.is_zero() {
                    return Ok(true);
                }
                let (n, h) = cut_fraction(g0);
                let n = n.to_integer().try_into().expect("small denominator");
                let mut p = Series::one(self.field, self.group);
                for _ in 0..n {
                    p = p.checked_mul(x)?;
                }
                let bound = Series::monomial(self.field, self.group, QuadExt::one(), h)?;
                Ok(x.sign() > 0 && s_cmp(&p, &bound)? == Ordering::Less)
            }
            CutPoint::ResidueCut { a } => {
                let wide = CoefficientField::quadratic(a.radicand().expect("irrational cut"))?;
                let lift = Series::from_terms(&wide, self.group, x.terms().to_vec())?;
                let c = |q: QuadExt| Series::constant(&wide, self.group, q);
                let hi = c(a.clone())?;
                let lo = c(a.checked_sub(&QuadExt::one())?)?;
                Ok(s_cmp(&lift, &hi)? == Ordering::Less && s_cmp(&lift, &lo)? == Ordering::Greater)
            }
        }
    }

    /// `x t^e` shifted so that its valuation is exactly `target`.
    fn shift_to(&self, x: &Series, target: &HullElement) -> Result<Series> {
        let v = x.vmin().finite().expect("nonzero");
        x.scale(&QuadExt::one(), &(target - &v))
    }

    /// A positive element of the maximal ideal.
    fn sample_ideal(&self, s: &mut Sampler) -> Result<Series> {
        let w = s.nonzero_series(self.field, self.group, 3);
        let e = s.positive_group_element(self.group);
        Ok(abs(&self.shift_to(&w, &e)?))
    }

    /// A sampled element of `D'`.
    fn sample_d(&self, s: &mut Sampler) -> Result<Series> {
        match self.cut {
            CutPoint::GroupCut { g0 } => {
                let last = self.group.last_index().expect("cut has a last index");
                let comp = self.group.component(last).expect("in range");
                let width = rat(1, 1 << s.range(0, 6));
                let target = g0.coefficient(last);
                let coord = comp
                    .approximate_above(&target, &width)
                    .unwrap_or_else(|| target.floor() + rat(1, 1));
                let g1 = &g0.truncate_below(last) + &HullElement::monomial(last, coord);
                let lead = &g1 + &s.group_element(self.group).abs();
                let w = s.nonzero_series(self.field, self.group, 3);
                Ok(abs(&self.shift_to(&w, &lead)?))
            }
            CutPoint::ResidueCut { a } => {
                let lo = a.checked_sub(&QuadExt::one())?;
                let mid = QuadExt::rational(rational_in_interval(&lo, a)?);
                let r = rat(s.range(-8, 8), 64);
                let candidate = mid.checked_add(&QuadExt::rational(r))?;
                let base = if candidate.checked_sub(&lo)?.sign() > 0
                    && a.checked_sub(&candidate)?.sign() > 0
                {
                    candidate
                } else {
                    mid
                };
                let b = Series::constant(self.field, self.group, base)?;
                let tail = if s.chance(0.5) {
                    self.sample_ideal(s)?
                } else {
                    Series::zero(self.field, self.group)
                };
                let tail = if s.chance(0.5) { tail.neg() } else { tail };
                b.checked_add(&tail)
            }
        }
    }

    fn membership(&self, s: &mut Sampler, x: &Series) -> Result<Option<String>> {
        let in_o = self.in_o(x)?;
        if in_o != nonneg(x.vmin()) {
            return Ok(Some(format!(
                "membership of {x} disagrees with its valuation"
            )));
        }
        if self.in_d(x)? != self.d_oracle(x)? {
            return Ok(Some(format!(
                "cut-set membership of {x} disagrees with the direct comparison"
            )));
        }
        let ax = abs(x);
        if in_o {
            for _ in 0..PROBES {
                let d = self.sample_d(s)?;
                if !self.in_d(&d)? {
                    return Ok(Some(format!("sampled {d} is not in the cut set")));
                }
                match self.cut {
                    CutPoint::GroupCut { g0 } => {
                        if !check_condition41(x, &d, g0)? || !self.in_d(&ax.checked_mul(&d)?)? {
                            return Ok(Some(format!(
                                "{x} is in the ring but |x| * {d} leaves the cut set"
                            )));
                        }
                    }
                    CutPoint::ResidueCut { .. } => {
                        let m = self.sample_ideal(s)?;
                        if !self.in_d(&m.checked_add(&d)?)? {
                            return Ok(Some(format!(
                                "{m} is in the ideal but {m} + {d} leaves the cut set"
                            )));
                        }
                        let xm = abs(&ax.checked_mul(&m)?);
                        if !self.in_d(&xm.checked_add(&d)?)? {
                            return Ok(Some(format!(
                                "{x} is in the ring but |x m| + {d} leaves the cut set"
                            )));
                        }
                    }
                }
            }
            return Ok(None);
        }
        let w = os_violation_witness(x, self.cut)?;
        if !verify_violation(x, self.cut, &w)? {
            return Ok(Some(format!("witness {w} for {x} does not verify")));
        }
        if let (CutPoint::GroupCut { g0 }, crate::defval::Violation::Multiplier { y }) =
            (self.cut, &w)
        {
            if check_condition41(x, y, g0)? {
                return Ok(Some(format!(
                    "witness {y} for {x} satisfies the valuation condition"
                )));
            }
        }
        Ok(None)
    }

    fn ring_axioms(&self, s: &mut Sampler, x: &Series, y: &Series) -> Result<Option<String>> {
        let (ox, oy) = (self.in_o(x)?, self.in_o(y)?);
        if ox && oy && !(self.in_o(&x.checked_add(y)?)? && self.in_o(&x.checked_mul(y)?)?) {
            return Ok(Some(format!("ring not closed at {x}, {y}")));
        }
        if !x.is_zero() && !ox {
            let inv = trunc_inverse(x, 3)?;
            if !inv.terms.terms().iter().all(|(e, _)| e.sign() >= 0) {
                return Ok(Some(format!(
                    "neither {x} nor its inverse lies in the ring"
                )));
            }
        }
        let (ax, ay) = (abs(x), abs(y));
        if s_cmp(&ax, &ay)? == Ordering::Less && self.in_o(&ay)? && !self.in_o(&ax)? {
            return Ok(Some(format!("ring not convex at {ax} < {ay}")));
        }
        let g = s.positive_group_element(self.group);
        let small = Series::monomial(self.field, self.group, QuadExt::one(), g.clone())?;
        let large = Series::monomial(self.field, self.group, QuadExt::one(), -&g)?;
        if !self.in_o(&small)? || !positive(small.vmin()) || self.in_o(&large)? {
            return Ok(Some(format!("t^(+-{g}) misplaced")));
        }
        Ok(None)
    }
}
