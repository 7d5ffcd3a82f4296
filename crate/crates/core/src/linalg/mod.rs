//! Exact integer and rational linear algebra.

mod int_matrix;
mod normal_form;
mod rat_matrix;
mod subspace;

pub use int_matrix::IntMatrix;
pub use normal_form::{
    ext_gcd, hnf, invariant_factors, is_saturated, is_surjective, kernel_basis_int, lattice_basis, lattice_contains,
    saturate, snf, solve_int, unimodular_inverse,
};
pub use rat_matrix::{rank_of_vectors, rat, rat_vec, RatMatrix};
pub use subspace::{is_direct_modulo, is_direct_sum, RationalSubspace};

use num_bigint::BigInt;

/// Convenience conversion for tests and fixtures.
pub fn ints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}
