//! Inputs shared by the benchmarks under `benches/`.

use std::sync::Arc;

use morita_core::algebra::{element, Algebra};
use morita_core::context::{corner_context, MoritaContext};
use morita_core::exactlin::{Field, Matrix};

/// Deterministic dense matrix with entries from a linear congruential stream.
pub fn pseudo_random(field: Field, rows: usize, cols: usize, seed: u64) -> Matrix {
    let mut state = seed
        .wrapping_mul(6364136223846793005)
        .wrapping_add(1442695040888963407);
    Matrix::from_fn(field, rows, cols, |_, _| {
        state = state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        field.from_i64(((state >> 33) % 7) as i64 - 3)
    })
}

/// Upper triangular 2x2 matrices over GF(2) and the corner context at `e22`.
pub fn t2_corner() -> MoritaContext {
    let a = Arc::new(Algebra::upper_triangular(Field::gf2()));
    let e = element(&a, &[0, 0, 1]);
    corner_context(a, &e).expect("e22 is idempotent")
}

/// 2x2 matrices over GF(2) and the corner context at `e11`.
pub fn m2_corner() -> MoritaContext {
    let a = Arc::new(Algebra::matrix_algebra(Field::gf2(), 2));
    let e = element(&a, &[1, 0, 0, 0]);
    corner_context(a, &e).expect("e11 is idempotent")
}
