use num_bigint::BigInt;
use num_traits::Zero;

use crate::linalg::{is_surjective, kernel_basis_int, unimodular_inverse, IntMatrix};

/// A Z-affine map `x ↦ matrix·x + translation` between lattices. The matrix is
/// `codomain_rank × domain_rank` and acts on column vectors.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupHom {
    matrix: IntMatrix,
    translation: Option<Vec<BigInt>>,
}

impl GroupHom {
    pub fn linear(matrix: IntMatrix) -> Self {
        GroupHom { matrix, translation: None }
    }

    pub fn affine(matrix: IntMatrix, translation: Vec<BigInt>) -> Self {
        assert_eq!(matrix.rows(), translation.len(), "translation length must equal codomain rank");
        let translation = if translation.iter().all(Zero::is_zero) { None } else { Some(translation) };
        GroupHom { matrix, translation }
    }

    pub fn identity(n: usize) -> Self {
        Self::linear(IntMatrix::identity(n))
    }

    /// The zero map `Z^n → Z^0`.
    pub fn to_zero(n: usize) -> Self {
        Self::linear(IntMatrix::zeros(0, n))
    }

    pub fn translation_by(t: Vec<BigInt>) -> Self {
        Self::affine(IntMatrix::identity(t.len()), t)
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn translation(&self) -> Option<&[BigInt]> {
        self.translation.as_deref()
    }

    pub fn translation_or_zero(&self) -> Vec<BigInt> {
        self.translation.clone().unwrap_or_else(|| vec![BigInt::zero(); self.codomain_rank()])
    }

    pub fn domain_rank(&self) -> usize {
        self.matrix.cols()
    }

    pub fn codomain_rank(&self) -> usize {
        self.matrix.rows()
    }

    pub fn is_linear(&self) -> bool {
        self.translation.is_none()
    }

    pub fn linear_part(&self) -> GroupHom {
        Self::linear(self.matrix.clone())
    }

    pub fn apply(&self, x: &[BigInt]) -> Vec<BigInt> {
        let mut y = self.matrix.mul_vec(x);
        if let Some(t) = &self.translation {
            for (yi, ti) in y.iter_mut().zip(t) {
                *yi += ti;
            }
        }
        y
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &GroupHom) -> GroupHom {
        assert_eq!(self.domain_rank(), inner.codomain_rank(), "composition rank mismatch");
        let matrix = self.matrix.mul(&inner.matrix);
        let t = self.apply(&inner.translation_or_zero());
        Self::affine(matrix, t)
    }

    /// Saturated basis (rows) of the kernel of the linear part.
    pub fn kernel(&self) -> IntMatrix {
        kernel_basis_int(&self.matrix)
    }

    pub fn is_surjective(&self) -> bool {
        is_surjective(&self.matrix)
    }

    pub fn is_isomorphism(&self) -> bool {
        self.matrix.is_unimodular()
    }

    pub fn inverse(&self) -> Option<GroupHom> {
        let inv = unimodular_inverse(&self.matrix)?;
        let t = inv.mul_vec(&self.translation_or_zero());
        Some(Self::affine(inv, t.into_iter().map(|x| -x).collect()))
    }
}
