//! Benchmark fixtures shared by the criterion targets in `benches/`.

use landau_rel::{Rational, Scalar};

/// Frequency ratios used across the benchmarks.
pub fn w_grid() -> Vec<Rational> {
    [(1, 4), (1, 2), (1, 1), (2, 1)]
        .iter()
        .map(|&(n, d)| Rational::ratio(n, d))
        .collect()
}
