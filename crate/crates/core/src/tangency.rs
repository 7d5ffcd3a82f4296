//! Hyperplanes tangent to `X_A` at the identity of the torus, the Hessian of
//! such a hyperplane section, and what its generic kernel tells us: the dual
//! defect and the grouping of the points by the contact plane.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::cayley::{cayley_sum, CayleyError};
use crate::config::PointConfig;
use crate::linalg::{rank_of_vectors, rat_vec, IntMatrix, RatMatrix, RationalSubspace};
use crate::sampling::{random_combination, SamplingParams, ESCALATIONS};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TangencyError {
    #[error("expected {expected} coefficients, found {found}")]
    Arity { expected: usize, found: usize },
    #[error("no hyperplane is tangent at the identity, so the dual variety is empty")]
    EmptyDual,
    #[error("genericity failure: {0}")]
    GenericityFailure(String),
    #[error(transparent)]
    Cayley(#[from] CayleyError),
}

/// Tangent hyperplanes at the identity for a configuration, together with the
/// sampling parameters used to pick generic ones.
#[derive(Clone, Debug)]
pub struct TangencyProblem {
    pub config: PointConfig,
    pub tangency_basis: RatMatrix,
    pub params: SamplingParams,
    int_basis: IntMatrix,
}

impl TangencyProblem {
    pub fn new(config: PointConfig, params: SamplingParams) -> Self {
        let tangency_basis = tangency_space(&config);
        let int_basis = tangency_basis.primitive_int_rows();
        TangencyProblem { config, tangency_basis, params, int_basis }
    }

    pub fn dim_l(&self) -> usize {
        self.tangency_basis.rows()
    }

    /// A random element of `L` with integer entries.
    fn sample(&self, rng: &mut rand_chacha::ChaCha8Rng, bound: u64) -> Vec<BigInt> {
        random_combination(rng, &self.int_basis, bound)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DefectStatus {
    Computed(usize),
    EmptyDual,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DefectResult {
    pub status: DefectStatus,
    /// The sampled coefficient vector that attained the maximal Hessian rank.
    pub rank_witness: Vec<BigInt>,
    pub samples_used: usize,
}

impl DefectResult {
    pub fn delta(&self) -> Option<usize> {
        match self.status {
            DefectStatus::Computed(d) => Some(d),
            DefectStatus::EmptyDual => None,
        }
    }

    pub fn is_empty_dual(&self) -> bool {
        self.status == DefectStatus::EmptyDual
    }
}

/// The `(n+1) × #A` matrix whose kernel is `L`: a row of ones and the rows of
/// coordinates.
pub fn tangency_conditions(a: &PointConfig) -> IntMatrix {
    let n = a.dim();
    let mut rows = vec![vec![BigInt::one(); a.len()]];
    for k in 0..n {
        rows.push(a.points().iter().map(|u| u[k].clone()).collect());
    }
    IntMatrix::from_rows(a.len(), rows)
}

/// Basis of `L = {a : Σ a_u = 0, Σ a_u·u = 0}`.
pub fn tangency_space(a: &PointConfig) -> RatMatrix {
    tangency_conditions(a).to_rat().kernel()
}

/// `Σ a_u · u·uᵀ` over the rationals.
pub fn hessian(a: &PointConfig, coeffs: &[BigRational]) -> Result<RatMatrix, TangencyError> {
    if coeffs.len() != a.len() {
        return Err(TangencyError::Arity { expected: a.len(), found: coeffs.len() });
    }
    let n = a.dim();
    let mut h = RatMatrix::zeros(n, n);
    for (u, c) in a.points().iter().zip(coeffs) {
        if c.is_zero() {
            continue;
        }
        for i in 0..n {
            let ci = c * BigRational::from_integer(u[i].clone());
            for j in 0..n {
                h[(i, j)] += &ci * BigRational::from_integer(u[j].clone());
            }
        }
    }
    Ok(h)
}

/// Integer version of [`hessian`].
pub fn hessian_int(a: &PointConfig, coeffs: &[BigInt]) -> IntMatrix {
    assert_eq!(coeffs.len(), a.len());
    let n = a.dim();
    let mut h = IntMatrix::zeros(n, n);
    for (u, c) in a.points().iter().zip(coeffs) {
        if c.is_zero() {
            continue;
        }
        for i in 0..n {
            let ci = c * &u[i];
            for j in 0..n {
                h[(i, j)] += &ci * &u[j];
            }
        }
    }
    h
}

/// `δ = n − max rank` of the Hessian over `trials` random tangent hyperplanes.
pub fn defect_oracle(p: &TangencyProblem) -> DefectResult {
    if p.dim_l() == 0 {
        return DefectResult { status: DefectStatus::EmptyDual, rank_witness: Vec::new(), samples_used: 0 };
    }
    let mut rng = p.params.rng(0);
    let mut best: Option<(usize, Vec<BigInt>)> = None;
    for _ in 0..p.params.trials {
        let coeffs = p.sample(&mut rng, p.params.bound);
        let rank = hessian_int(&p.config, &coeffs).rank();
        if best.as_ref().is_none_or(|(r, _)| rank > *r) {
            best = Some((rank, coeffs));
        }
    }
    let (rank, witness) = best.expect("at least one trial");
    DefectResult {
        status: DefectStatus::Computed(p.config.dim() - rank),
        rank_witness: witness,
        samples_used: p.params.trials,
    }
}

/// Points grouped by the contact plane of a generic tangent hyperplane.
#[derive(Clone, Debug)]
pub struct ContactGrouping {
    /// Parts ordered by smallest point index.
    pub parts: Vec<Vec<usize>>,
    /// Kernel of the generic Hessian (the tangent space of the contact plane).
    pub kernel: RationalSubspace,
    pub rank: usize,
    /// Escalation round that produced the result (0 = first try).
    pub attempt: usize,
}

/// Groups `u ~ u′` when `⟨u − u′, v⟩ = 0` for every `v` in the kernel of a
/// generic Hessian. All trials must agree on rank and partition.
pub fn contact_grouping(p: &TangencyProblem) -> Result<ContactGrouping, TangencyError> {
    if p.dim_l() == 0 {
        return Err(TangencyError::EmptyDual);
    }
    for attempt in 0..=ESCALATIONS {
        let params = p.params.escalated(attempt);
        let mut rng = params.rng(attempt);
        let mut results: Vec<(usize, Vec<Vec<usize>>, RatMatrix)> = Vec::new();
        for _ in 0..params.trials {
            let coeffs = p.sample(&mut rng, params.bound);
            let h = hessian_int(&p.config, &coeffs).to_rat();
            let kernel = h.kernel();
            let rank = p.config.dim() - kernel.rows();
            results.push((rank, group_by_kernel(&p.config, &kernel), kernel));
        }
        let (rank0, parts0, kernel0) = &results[0];
        if results.iter().all(|(r, parts, _)| r == rank0 && parts == parts0) {
            return Ok(ContactGrouping {
                parts: parts0.clone(),
                kernel: RationalSubspace::span(kernel0),
                rank: *rank0,
                attempt,
            });
        }
        log::debug!("contact grouping disagreed across trials at bound {}", params.bound);
    }
    Err(TangencyError::GenericityFailure(format!(
        "contact grouping did not stabilize after {} escalations",
        ESCALATIONS
    )))
}

fn group_by_kernel(a: &PointConfig, kernel: &RatMatrix) -> Vec<Vec<usize>> {
    let signatures: Vec<Vec<BigRational>> = a.points().iter().map(|u| kernel.mul_vec(&rat_vec(u))).collect();
    let mut parts: Vec<Vec<usize>> = Vec::new();
    let mut reps: Vec<usize> = Vec::new();
    for (i, sig) in signatures.iter().enumerate() {
        match reps.iter().position(|&j| signatures[j] == *sig) {
            Some(k) => parts[k].push(i),
            None => {
                reps.push(i);
                parts.push(vec![i]);
            }
        }
    }
    parts
}

/// `r − dim⟨m₀, …, m_r⟩` for a generic tangent hyperplane of the Cayley sum,
/// where `mᵢ = Σⱼ a_{ij}·u_{ij}` collects the contribution of fiber `i`.
pub fn slice_contact_dim(fibers: &[PointConfig], params: SamplingParams) -> Result<usize, TangencyError> {
    let sum = cayley_sum(fibers)?;
    let r = fibers.len() - 1;
    let m = fibers[0].dim();
    let problem = TangencyProblem::new(sum, params);
    if problem.dim_l() == 0 {
        return Ok(r);
    }
    let labels: Vec<usize> = problem
        .config
        .points()
        .iter()
        .map(|u| (0..r).find(|&j| u[m + j].is_one()).map_or(0, |j| j + 1))
        .collect();
    let mut rng = params.rng(0);
    let mut best = 0;
    for _ in 0..params.trials {
        let coeffs = problem.sample(&mut rng, params.bound);
        let mut ms = vec![vec![BigInt::zero(); m]; r + 1];
        for ((u, c), &lab) in problem.config.points().iter().zip(&coeffs).zip(&labels) {
            for k in 0..m {
                ms[lab][k] += c * &u[k];
            }
        }
        let rows: Vec<Vec<BigRational>> = ms.iter().map(|v| rat_vec(v)).collect();
        best = best.max(rank_of_vectors(m, &rows));
    }
    Ok(r - best)
}
