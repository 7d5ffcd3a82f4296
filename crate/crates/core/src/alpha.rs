//! The α invariant of a family of subspaces `V₀, …, V_r ⊂ V` and the minimal
//! quotient of `V` in which their images sum directly.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::linalg::{is_direct_modulo, rank_of_vectors, rat_vec, IntMatrix, RatMatrix, RationalSubspace};
use crate::sampling::{random_combination, SamplingParams, ESCALATIONS};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlphaError {
    #[error("summand {index} lives in Q^{found}, expected Q^{expected}")]
    DimensionMismatch { index: usize, expected: usize, found: usize },
    #[error("summand {0} is not contained in the ambient space")]
    NotContained(usize),
    #[error("genericity failure: {0}")]
    GenericityFailure(String),
}

#[derive(Clone, Debug)]
pub struct AlphaProblem {
    pub ambient: RationalSubspace,
    pub summands: Vec<RationalSubspace>,
    /// Basis of `K = ker(V₀ ⊕ ⋯ ⊕ V_r → V)`, in coordinates relative to the
    /// concatenated bases of the summands.
    pub k_basis: RatMatrix,
    pub params: SamplingParams,
    k_int: IntMatrix,
}

impl AlphaProblem {
    pub fn new(
        ambient: RationalSubspace,
        summands: Vec<RationalSubspace>,
        params: SamplingParams,
    ) -> Result<Self, AlphaError> {
        let m = ambient.ambient_dim();
        for (index, v) in summands.iter().enumerate() {
            if v.ambient_dim() != m {
                return Err(AlphaError::DimensionMismatch { index, expected: m, found: v.ambient_dim() });
            }
            if !v.is_subspace_of(&ambient) {
                return Err(AlphaError::NotContained(index));
            }
        }
        let k_basis = k_space(&summands);
        let k_int = k_basis.primitive_int_rows();
        Ok(AlphaProblem { ambient, summands, k_basis, params, k_int })
    }

    /// Summands inside the whole of `Q^dim`.
    pub fn in_full_space(dim: usize, summands: Vec<RationalSubspace>, params: SamplingParams) -> Result<Self, AlphaError> {
        Self::new(RationalSubspace::full(dim), summands, params)
    }

    pub fn dim(&self) -> usize {
        self.ambient.ambient_dim()
    }

    /// The components `(m₀, …, m_r)` of an element of `K` given in summand
    /// coordinates.
    pub fn components(&self, element: &[BigRational]) -> Vec<Vec<BigRational>> {
        let m = self.dim();
        let mut out = Vec::with_capacity(self.summands.len());
        let mut offset = 0;
        for v in &self.summands {
            let mut c = vec![BigRational::zero(); m];
            for k in 0..v.dim() {
                let coef = &element[offset + k];
                if coef.is_zero() {
                    continue;
                }
                for (x, b) in c.iter_mut().zip(v.basis().row(k)) {
                    *x += coef * b;
                }
            }
            offset += v.dim();
            out.push(c);
        }
        out
    }

    fn sample(&self, rng: &mut ChaCha8Rng, bound: u64) -> Vec<Vec<BigRational>> {
        let c: Vec<BigInt> = random_combination(rng, &self.k_int, bound);
        self.components(&rat_vec(&c))
    }

    fn span_rank(&self, vectors: &[Vec<BigRational>]) -> usize {
        rank_of_vectors(self.dim(), vectors)
    }
}

/// Basis of `K`: coefficient vectors `c` over the concatenated summand bases
/// with `Σ cₖ·bₖ = 0`.
pub fn k_space(summands: &[RationalSubspace]) -> RatMatrix {
    let Some(first) = summands.first() else { return RatMatrix::zeros(0, 0) };
    let m = first.ambient_dim();
    let total: usize = summands.iter().map(RationalSubspace::dim).sum();
    let mut rows = Vec::with_capacity(total);
    for v in summands {
        rows.extend(v.basis().row_vecs());
    }
    RatMatrix::from_rows(m, rows).transpose().kernel()
}

/// Generic dimension of `⟨m₀, …, m_r⟩` over `(mᵢ) ∈ K`.
pub fn alpha(p: &AlphaProblem) -> usize {
    if p.k_basis.rows() == 0 {
        return 0;
    }
    let mut rng = p.params.rng(0);
    (0..p.params.trials).map(|_| p.span_rank(&p.sample(&mut rng, p.params.bound))).max().unwrap_or(0)
}

/// `V′ = ⟨m₀, …, m_r⟩` for a generic element of `K`, checked to make the
/// images of the summands in `V/V′` independent.
pub fn vprime(p: &AlphaProblem) -> Result<RationalSubspace, AlphaError> {
    let m = p.dim();
    if p.k_basis.rows() == 0 {
        return Ok(RationalSubspace::zero(m));
    }
    let a = alpha(p);
    for attempt in 0..=ESCALATIONS {
        let params = p.params.escalated(attempt);
        let mut rng = params.rng(attempt);
        let best = (0..params.trials)
            .map(|_| p.sample(&mut rng, params.bound))
            .max_by_key(|comps| p.span_rank(comps))
            .expect("at least one trial");
        let v = RationalSubspace::span_vectors(m, &best);
        if v.dim() >= a && is_direct_modulo(m, &p.summands, &v) {
            return Ok(v);
        }
        log::debug!("V' candidate of dimension {} rejected at bound {}", v.dim(), params.bound);
    }
    Err(AlphaError::GenericityFailure("no sampled V' makes the summands direct".into()))
}

/// Whether removing any two of the generic components leaves their span
/// unchanged.
pub fn check_star(p: &AlphaProblem) -> Result<bool, AlphaError> {
    if p.k_basis.rows() == 0 {
        return Ok(true);
    }
    for attempt in 0..=ESCALATIONS {
        let params = p.params.escalated(attempt);
        let mut rng = params.rng(attempt);
        let samples: Vec<(usize, Vec<Vec<BigRational>>)> = (0..params.trials)
            .map(|_| {
                let comps = p.sample(&mut rng, params.bound);
                (p.span_rank(&comps), comps)
            })
            .collect();
        let top = samples.iter().map(|(r, _)| *r).max().unwrap_or(0);
        let verdicts: Vec<bool> = samples
            .iter()
            .filter(|(r, _)| *r == top)
            .map(|(r, comps)| star_holds(p, comps, *r))
            .collect();
        if verdicts.iter().all(|&v| v == verdicts[0]) {
            return Ok(verdicts[0]);
        }
    }
    Err(AlphaError::GenericityFailure("condition (*) verdict differs across samples".into()))
}

fn star_holds(p: &AlphaProblem, comps: &[Vec<BigRational>], full: usize) -> bool {
    let k = comps.len();
    if k < 2 {
        return full == 0;
    }
    for i in 0..k {
        for j in i + 1..k {
            let rest: Vec<Vec<BigRational>> =
                comps.iter().enumerate().filter(|(l, _)| *l != i && *l != j).map(|(_, v)| v.clone()).collect();
            if p.span_rank(&rest) != full {
                return false;
            }
        }
    }
    true
}

/// The smallest `W ⊂ Q^dim` such that the images of the summands in
/// `Q^dim / W` sum directly. Any such `W` must contain every component of
/// every element of `ker(⊕ Vᵢ → Q^dim / W)`, so iterating that closure from
/// `W = 0` reaches it.
pub fn minimal_direct_quotient(dim: usize, summands: &[RationalSubspace]) -> RationalSubspace {
    let mut w = RationalSubspace::zero(dim);
    loop {
        let mut rows = Vec::new();
        for v in summands {
            rows.extend(v.basis().row_vecs());
        }
        let own = rows.len();
        rows.extend(w.basis().row_vecs());
        let kernel = RatMatrix::from_rows(dim, rows.clone()).transpose().kernel();
        let mut comps = w.basis().row_vecs();
        for k in kernel.row_vecs() {
            let mut offset = 0;
            for v in summands {
                let mut c = vec![BigRational::zero(); dim];
                for j in 0..v.dim() {
                    if k[offset + j].is_zero() {
                        continue;
                    }
                    for (x, b) in c.iter_mut().zip(&rows[offset + j]) {
                        *x += &k[offset + j] * b;
                    }
                }
                offset += v.dim();
                comps.push(c);
            }
            debug_assert_eq!(offset, own);
        }
        let next = RationalSubspace::span_vectors(dim, &comps);
        if next.dim() == w.dim() {
            return w;
        }
        w = next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{rat, IntMatrix};

    fn line(dim: usize, v: &[i64]) -> RationalSubspace {
        RationalSubspace::span_int(&IntMatrix::from_i64(dim, &[v]))
    }

    fn problem(dim: usize, summands: Vec<RationalSubspace>) -> AlphaProblem {
        AlphaProblem::in_full_space(dim, summands, SamplingParams::default()).unwrap()
    }

    fn two_lines_two_planes() -> Vec<RationalSubspace> {
        vec![line(2, &[1, 0]), line(2, &[0, 1]), RationalSubspace::full(2), RationalSubspace::full(2)]
    }

    #[test]
    fn k_space_examples() {
        let q = RationalSubspace::full(1);
        let k = k_space(&[q.clone(), q]);
        assert_eq!(k.rows(), 1);
        assert_eq!(k.row(0)[0].clone() + k.row(0)[1].clone(), rat(0));
        assert_eq!(k_space(&[line(2, &[1, 0]), line(2, &[0, 1])]).rows(), 0);
        assert_eq!(k_space(&two_lines_two_planes()).rows(), 4);
    }

    #[test]
    fn k_rows_sum_to_zero() {
        let p = problem(2, two_lines_two_planes());
        for row in p.k_basis.row_vecs() {
            let comps = p.components(&row);
            for coord in 0..2 {
                let s = comps.iter().fold(rat(0), |acc, c| acc + &c[coord]);
                assert_eq!(s, rat(0));
            }
        }
    }

    #[test]
    fn alpha_examples() {
        assert_eq!(alpha(&problem(2, two_lines_two_planes())), 2);
        assert_eq!(alpha(&problem(2, vec![line(2, &[1, 0]), line(2, &[0, 1])])), 0);
        let q = RationalSubspace::full(1);
        assert_eq!(alpha(&problem(1, vec![q.clone(), q])), 1);
    }

    #[test]
    fn vprime_examples() {
        assert_eq!(vprime(&problem(2, two_lines_two_planes())).unwrap(), RationalSubspace::full(2));
        let direct = problem(2, vec![line(2, &[1, 0]), line(2, &[0, 1])]);
        assert!(vprime(&direct).unwrap().is_zero());
        let q = RationalSubspace::full(1);
        assert_eq!(vprime(&problem(1, vec![q.clone(), q])).unwrap(), RationalSubspace::full(1));
    }

    #[test]
    fn check_star_examples() {
        let q = RationalSubspace::full(1);
        assert!(check_star(&problem(1, vec![q.clone(), q.clone(), q.clone()])).unwrap());
        assert!(!check_star(&problem(1, vec![q.clone(), q])).unwrap());
        let z = RationalSubspace::zero(3);
        assert!(check_star(&problem(3, vec![z.clone(), z.clone(), z])).unwrap());
    }

    #[test]
    fn summands_must_lie_in_ambient() {
        let amb = line(2, &[1, 0]);
        let err = AlphaProblem::new(amb, vec![line(2, &[0, 1])], SamplingParams::default());
        assert!(matches!(err, Err(AlphaError::NotContained(0))));
    }

    #[test]
    fn minimal_quotient_examples() {
        assert_eq!(minimal_direct_quotient(2, &two_lines_two_planes()), RationalSubspace::full(2));
        assert!(minimal_direct_quotient(2, &[line(2, &[1, 0]), line(2, &[0, 1])]).is_zero());
        // V0 = <e1>, V1 = <e1 + e2>, V2 = <e2>: the components of K span Q^2
        let three = vec![line(2, &[1, 0]), line(2, &[1, 1]), line(2, &[0, 1])];
        assert_eq!(minimal_direct_quotient(2, &three), RationalSubspace::full(2));
        let w = minimal_direct_quotient(3, &[line(3, &[1, 0, 0]), line(3, &[1, 0, 0]), line(3, &[0, 1, 0])]);
        assert_eq!(w, line(3, &[1, 0, 0]));
    }

    #[test]
    fn alpha_is_invariant_under_change_of_basis() {
        let g = IntMatrix::from_i64(2, &[&[2, 1], &[1, 1]]).to_rat();
        let moved: Vec<RationalSubspace> = two_lines_two_planes().iter().map(|v| v.image(&g)).collect();
        assert_eq!(alpha(&problem(2, moved)), 2);
    }
}
