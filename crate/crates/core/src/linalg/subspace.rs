use num_rational::BigRational;

use super::int_matrix::IntMatrix;
use super::normal_form::saturate;
use super::rat_matrix::RatMatrix;

/// A subspace of `Q^ambient_dim`, stored by its reduced row echelon basis so
/// that equal subspaces compare equal.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RationalSubspace {
    ambient_dim: usize,
    basis: RatMatrix,
}

impl RationalSubspace {
    pub fn zero(ambient_dim: usize) -> Self {
        RationalSubspace { ambient_dim, basis: RatMatrix::zeros(0, ambient_dim) }
    }

    pub fn full(ambient_dim: usize) -> Self {
        RationalSubspace { ambient_dim, basis: RatMatrix::identity(ambient_dim) }
    }

    pub fn span(generators: &RatMatrix) -> Self {
        let (r, pivots) = generators.rref();
        let basis = r.select_rows(&(0..pivots.len()).collect::<Vec<_>>());
        RationalSubspace { ambient_dim: generators.cols(), basis }
    }

    pub fn span_int(generators: &IntMatrix) -> Self {
        Self::span(&generators.to_rat())
    }

    pub fn span_vectors(ambient_dim: usize, vectors: &[Vec<BigRational>]) -> Self {
        Self::span(&RatMatrix::from_rows(ambient_dim, vectors.to_vec()))
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis(&self) -> &RatMatrix {
        &self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn sum(&self, other: &RationalSubspace) -> RationalSubspace {
        assert_eq!(self.ambient_dim, other.ambient_dim);
        Self::span(&self.basis.vstack(&other.basis))
    }

    pub fn sum_all<'a>(ambient_dim: usize, spaces: impl IntoIterator<Item = &'a RationalSubspace>) -> RationalSubspace {
        let mut gens = RatMatrix::zeros(0, ambient_dim);
        for s in spaces {
            gens = gens.vstack(&s.basis);
        }
        Self::span(&gens)
    }

    pub fn contains_vector(&self, v: &[BigRational]) -> bool {
        let ext = self.basis.vstack(&RatMatrix::from_rows(self.ambient_dim, vec![v.to_vec()]));
        ext.rank() == self.dim()
    }

    pub fn is_subspace_of(&self, other: &RationalSubspace) -> bool {
        self.sum(other).dim() == other.dim()
    }

    /// Image under the linear map `x ↦ m·x`, where `m` is `out × ambient`.
    pub fn image(&self, m: &RatMatrix) -> RationalSubspace {
        assert_eq!(m.cols(), self.ambient_dim);
        Self::span(&self.basis.mul(&m.transpose()))
    }

    /// Orthogonal complement with respect to the standard pairing.
    pub fn orthogonal_complement(&self) -> RationalSubspace {
        RationalSubspace { ambient_dim: self.ambient_dim, basis: self.basis.kernel() }
    }

    pub fn intersection(&self, other: &RationalSubspace) -> RationalSubspace {
        self.orthogonal_complement().sum(&other.orthogonal_complement()).orthogonal_complement()
    }

    /// Basis of the saturated lattice `self ∩ Z^ambient`.
    pub fn lattice(&self) -> IntMatrix {
        saturate(&self.basis.primitive_int_rows())
    }
}

/// Whether the sum of the given subspaces is direct: `dim Σ Vᵢ = Σ dim Vᵢ`.
pub fn is_direct_sum(ambient_dim: usize, spaces: &[RationalSubspace]) -> bool {
    let total: usize = spaces.iter().map(RationalSubspace::dim).sum();
    RationalSubspace::sum_all(ambient_dim, spaces).dim() == total
}

/// Whether the images of `spaces` in `V / quotient_by` sum directly.
pub fn is_direct_modulo(ambient_dim: usize, spaces: &[RationalSubspace], quotient_by: &RationalSubspace) -> bool {
    let w = quotient_by.dim();
    let images: usize = spaces.iter().map(|s| s.sum(quotient_by).dim() - w).sum();
    let total = RationalSubspace::sum_all(ambient_dim, spaces.iter().chain(std::iter::once(quotient_by))).dim() - w;
    total == images
}
