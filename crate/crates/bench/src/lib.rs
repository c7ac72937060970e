//! Input fixtures shared by the benchmarks.
//!
//! Every fixture is built from a fixed seed, so timings compare like with like
//! across runs.

use ordval_core::catalog::catalog;
use ordval_core::dsl::{parse_field, parse_group_expr};
use ordval_core::sample::{Sampler, DEFAULT_SEED};
use ordval_core::{CoefficientField, GroupDescriptor, Series};

/// Field and group for the series kernels.
pub fn series_context() -> (CoefficientField, GroupDescriptor) {
    (
        parse_field("Q(sqrt(2))").expect("field parses"),
        parse_group_expr("lex(loc{2}, Q)").expect("group parses"),
    )
}

/// `count` nonzero series of at most `max_terms` terms each.
pub fn series_batch(count: usize, max_terms: usize) -> Vec<Series> {
    let (field, group) = series_context();
    let mut s = Sampler::new(DEFAULT_SEED);
    (0..count)
        .map(|_| s.nonzero_series(&field, &group, max_terms))
        .collect()
}

/// Squares of sampled series, which always have square roots.
pub fn square_batch(count: usize, max_terms: usize) -> Vec<Series> {
    series_batch(count, max_terms)
        .into_iter()
        .map(|w| w.checked_mul(&w).expect("same context"))
        .collect()
}

pub fn catalog_groups() -> Vec<GroupDescriptor> {
    catalog().into_iter().map(|(_, g)| g).collect()
}

/// Canonical text of every catalog group.
pub fn catalog_texts() -> Vec<String> {
    catalog_groups().iter().map(|g| g.to_string()).collect()
}
