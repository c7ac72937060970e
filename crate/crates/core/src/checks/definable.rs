use crate::catalog::catalog;
use crate::groups::{
    a_violation_witness, defsubgroup_member, defsubgroup_segment, find_nondense_witness,
    is_dense_in_hull, is_densely_ordered, DefinableSet, GroupDescriptor, GroupElement, HullElement,
    Index, Val,
};
use crate::numeric::{rat, Rational};
use crate::sample::Sampler;

use super::{CheckConfig, SuiteOutcome, Tally};

pub(crate) fn run(cfg: &CheckConfig) -> SuiteOutcome {
    let mut t = Tally::new("definable");
    let mut s = Sampler::new(cfg.seed);
    for (name, g) in catalog() {
        if !is_densely_ordered(&g) || is_dense_in_hull(&g) {
            continue;
        }
        let Some(g0) = t.ok(find_nondense_witness(&g), || format!("{name}: witness")) else {
            continue;
        };
        let n = g0.nat_valuation().finite().expect("witness is nonzero");
        let Some(seg) = t.ok(defsubgroup_segment(&g, &g0), || format!("{name}: segment")) else {
            continue;
        };
        let h_group = seg.subgroup(&g);
        t.check(!h_group.is_trivial(), || format!("{name}: H is trivial"));
        let lead = GroupElement::new(HullElement::unit(n), &g).expect("1 lies in every component");
        t.check(!member(&g, &g0, &lead, DefinableSet::H), || {
            format!("{name}: H is all of G")
        });
        let ctx = Ctx {
            name,
            g: &g,
            g0: &g0,
            n,
        };
        for _ in 0..cfg.trials {
            ctx.subgroup_axioms(&mut t, &mut s);
            ctx.a_closed_form(&mut t, &mut s);
        }
    }
    t.finish()
}

fn member(g: &GroupDescriptor, g0: &HullElement, x: &GroupElement, which: DefinableSet) -> bool {
    defsubgroup_member(g, g0, x, which).expect("parameter was validated")
}

struct Ctx<'a> {
    name: &'a str,
    g: &'a GroupDescriptor,
    g0: &'a HullElement,
    n: Index,
}

impl Ctx<'_> {
    fn elem(&self, v: HullElement) -> GroupElement {
        GroupElement::new(v, self.g).expect("sample stays in the group")
    }

    /// A sampled element with every coordinate at or below `n` removed.
    fn sample_h(&self, s: &mut Sampler) -> GroupElement {
        let x = s.group_element(self.g);
        let tail = x.support().iter().filter(|(i, _)| *i > self.n).cloned();
        self.elem(HullElement::from_pairs(tail))
    }

    fn sample_outside_h(&self, s: &mut Sampler) -> GroupElement {
        let x = s.group_element(self.g);
        let c = s.nonzero_member_of(&self.g.component(self.n).expect("in range"), 16);
        let pairs = x
            .support()
            .iter()
            .filter(|(i, _)| *i > self.n)
            .cloned()
            .chain(std::iter::once((self.n, c)));
        let head = x.truncate_below(self.n);
        self.elem(&head + &HullElement::from_pairs(pairs))
    }

    fn subgroup_axioms(&self, t: &mut Tally, s: &mut Sampler) {
        let name = self.name;
        let (x, y) = (self.sample_h(s), self.sample_h(s));
        let h = |e: &GroupElement| member(self.g, self.g0, e, DefinableSet::H);
        t.check(h(&x) && h(&y), || {
            format!("{name}: sampled tail {x:?} not in H")
        });
        let sum = self.elem(x.value() + y.value());
        let neg = self.elem(-x.value());
        t.check(h(&sum) && h(&neg), || {
            format!("{name}: H not closed at {}, {}", x.value(), y.value())
        });
        let out = self.sample_outside_h(s);
        t.check(!h(&out), || {
            format!("{name}: {} should lie outside H", out.value())
        });
        t.check(x.value().abs() < out.value().abs(), || {
            format!("{name}: |{}| not below |{}|", x.value(), out.value())
        });
        // anything between 0 and a positive element of H lies in H
        let top = x.value().abs();
        if let Some((i, c)) = top.support().first().cloned() {
            let scale: Rational = rat(s.range(0, 8), 8);
            let comp = self.g.component(i).expect("in range");
            let lead = &c * &scale;
            if comp.contains(&lead) {
                let below = &top.truncate_below(i) + &HullElement::monomial(i, lead);
                let below = &below
                    + &HullElement::from_pairs(
                        s.group_element(self.g)
                            .support()
                            .iter()
                            .filter(|(j, _)| *j > i)
                            .cloned(),
                    );
                if below.sign() >= 0 && below <= top {
                    let b = self.elem(below);
                    t.check(h(&b), || {
                        format!("{name}: H not convex at {} <= {top}", b.value())
                    });
                }
            }
        }
    }

    /// `g ∈ A` iff `g + D ⊆ D`, with `d ∈ D` sampled and witnesses checked.
    fn a_closed_form(&self, t: &mut Tally, s: &mut Sampler) {
        let name = self.name;
        let x = if s.chance(0.5) {
            self.sample_h(s).value().abs()
        } else {
            s.group_element(self.g).abs()
        };
        let x = self.elem(x);
        let in_a = member(self.g, self.g0, &x, DefinableSet::A);
        t.check(
            in_a == (x.value().nat_valuation() > Val::Finite(self.n)),
            || {
                format!(
                    "{name}: A membership of {} disagrees with its valuation",
                    x.value()
                )
            },
        );
        if in_a {
            let d = self.sample_d(s);
            let shifted = self.elem(x.value() + d.value());
            t.check(member(self.g, self.g0, &shifted, DefinableSet::D), || {
                format!(
                    "{name}: {} in A but {} + {} leaves D",
                    x.value(),
                    x.value(),
                    d.value()
                )
            });
        } else {
            match a_violation_witness(self.g, self.g0, &x) {
                Ok(d) => {
                    let shifted = self.elem(x.value() + d.value());
                    t.check(
                        member(self.g, self.g0, &d, DefinableSet::D)
                            && !member(self.g, self.g0, &shifted, DefinableSet::D),
                        || format!("{name}: bad witness {} for {}", d.value(), x.value()),
                    );
                }
                Err(e) => t.check(false, || {
                    format!("{name}: no witness for {}: {e}", x.value())
                }),
            }
        }
    }

    /// An element of `D = [0, g0)`.
    fn sample_d(&self, s: &mut Sampler) -> GroupElement {
        loop {
            let d = if s.chance(0.5) {
                self.sample_h(s).value().abs()
            } else {
                let comp = self.g.component(self.n).expect("in range");
                let target = self.g0.coefficient(self.n);
                let c = comp
                    .approximate_below(&target, &rat(1, 1 + s.range(0, 7)))
                    .unwrap_or_else(|| target.floor());
                let tail = self.sample_h(s);
                &(&self.g0.truncate_below(self.n) + &HullElement::monomial(self.n, c))
                    + tail.value()
            };
            if d.sign() >= 0 && &d < self.g0 {
                return self.elem(d);
            }
        }
    }
}
