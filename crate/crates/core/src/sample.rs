//! Seeded random generation of rationals, group and hull elements,
//! coefficients and series. Every draw comes from one ChaCha stream, so a
//! seed fixes the whole sequence.

use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::groups::{GroupDescriptor, HullElement, Index, RationalSubgroup};
use crate::numeric::{QuadExt, Rational};
use crate::series::{CoefficientField, Series};

pub const DEFAULT_SEED: u64 = 0x5EED;
pub const MAX_DENOMINATOR: u64 = 64;
pub const MAX_COEFFICIENT: i64 = 1 << 10;
pub const MAX_SUPPORT: usize = 3;
pub const MAX_EXPONENT_NUMERATOR: i64 = 16;

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// An independent stream derived from this one.
    pub fn fork(&mut self) -> Sampler {
        Sampler::new(self.rng.gen())
    }

    pub fn range(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.gen_range(lo..=hi)
    }

    pub fn below(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }

    pub fn chance(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p)
    }

    pub fn pick<'a, T>(&mut self, items: &'a [T]) -> &'a T {
        &items[self.below(items.len())]
    }

    pub fn rational(&mut self, max_num: i64, max_den: u64) -> Rational {
        let n = self.range(-max_num, max_num);
        let d = self.rng.gen_range(1..=max_den);
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    pub fn nonzero_rational(&mut self, max_num: i64, max_den: u64) -> Rational {
        loop {
            let r = self.rational(max_num, max_den);
            if !r.is_zero() {
                return r;
            }
        }
    }

    /// A member of `c` with an admissible denominator `<= 64`.
    pub fn member_of(&mut self, c: &RationalSubgroup, max_num: i64) -> Rational {
        let dens = c.denominators_up_to(MAX_DENOMINATOR);
        let d = *self.pick(&dens);
        let n = self.range(-max_num, max_num);
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    pub fn nonzero_member_of(&mut self, c: &RationalSubgroup, max_num: i64) -> Rational {
        loop {
            let r = self.member_of(c, max_num);
            if !r.is_zero() {
                return r;
            }
        }
    }

    pub fn index(&mut self, g: &GroupDescriptor) -> Option<Index> {
        match g {
            GroupDescriptor::FiniteLex(cs) if cs.is_empty() => None,
            GroupDescriptor::FiniteLex(cs) => {
                Some(Index::At(self.range(1, cs.len() as i64) as u64))
            }
            GroupDescriptor::OmegaLex(_) => Some(Index::At(self.range(1, 6) as u64)),
            GroupDescriptor::OmegaPlusOneLex(..) => Some(if self.chance(0.25) {
                Index::Top
            } else {
                Index::At(self.range(1, 5) as u64)
            }),
        }
    }

    /// Up to `k` distinct indices, sorted.
    pub fn indices(&mut self, g: &GroupDescriptor, k: usize) -> Vec<Index> {
        let n = self.below(k + 1);
        let mut v: Vec<Index> = (0..n).filter_map(|_| self.index(g)).collect();
        v.sort();
        v.dedup();
        v
    }

    pub fn group_element(&mut self, g: &GroupDescriptor) -> HullElement {
        let idx = self.indices(g, MAX_SUPPORT);
        HullElement::from_pairs(idx.into_iter().map(|i| {
            let c = g.component(i).expect("sampled index is in range");
            (i, self.member_of(&c, MAX_EXPONENT_NUMERATOR))
        }))
    }

    pub fn nonzero_group_element(&mut self, g: &GroupDescriptor) -> HullElement {
        loop {
            let e = self.group_element(g);
            if !e.is_zero() || g.is_trivial() {
                return e;
            }
        }
    }

    pub fn positive_group_element(&mut self, g: &GroupDescriptor) -> HullElement {
        self.nonzero_group_element(g).abs()
    }

    /// An element of the divisible hull with denominators `<= 64`.
    pub fn hull_element(&mut self, g: &GroupDescriptor) -> HullElement {
        let idx = self.indices(g, MAX_SUPPORT);
        HullElement::from_pairs(
            idx.into_iter()
                .map(|i| (i, self.rational(MAX_EXPONENT_NUMERATOR, MAX_DENOMINATOR))),
        )
    }

    /// A nonzero coefficient with numerators and denominators `<= 2^10`.
    pub fn coefficient(&mut self, field: &CoefficientField) -> QuadExt {
        loop {
            let u = self.rational(MAX_COEFFICIENT, MAX_COEFFICIENT as u64);
            let c = match field.radicand() {
                Some(d) if self.chance(0.5) => {
                    let v = self.rational(MAX_COEFFICIENT, MAX_COEFFICIENT as u64);
                    QuadExt::new(d, u, v).expect("field radicand is valid")
                }
                d => QuadExt::rational(u)
                    .with_radicand(d)
                    .expect("rationals embed"),
            };
            if !c.is_zero() {
                return c;
            }
        }
    }

    /// A series with at most `max_terms` terms.
    pub fn series(
        &mut self,
        field: &CoefficientField,
        group: &GroupDescriptor,
        max_terms: usize,
    ) -> Series {
        let n = self.below(max_terms + 1);
        let terms: Vec<_> = (0..n)
            .map(|_| (self.group_element(group), self.coefficient(field)))
            .collect();
        Series::from_terms(field, group, terms).expect("sampled terms are valid")
    }

    pub fn nonzero_series(
        &mut self,
        field: &CoefficientField,
        group: &GroupDescriptor,
        max_terms: usize,
    ) -> Series {
        loop {
            let s = self.series(field, group, max_terms.max(1));
            if !s.is_zero() {
                return s;
            }
        }
    }
}
