//! The structure pipeline: minimal simplex projection `π` containing the
//! contact locus, its factorization `π = π₂ ∘ π₁` through the α-quotient, and
//! a certificate with `δ = r − c`.

mod json;
mod verify;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::alpha::{alpha, check_star, vprime, AlphaError, AlphaProblem};
use crate::cayley::{
    decompose_along, is_join_type, join_type_wrt, projection_from_partition, CayleyError, CayleyStructure,
};
use crate::config::{apply_affine, normalize, ConfigError, GroupHom, PointConfig};
use crate::linalg::{kernel_basis_int, rat_vec, solve_int, IntMatrix, RationalSubspace};
use crate::sampling::SamplingParams;
use crate::tangency::{contact_grouping, defect_oracle, DefectResult, TangencyError, TangencyProblem};

pub use json::{certificate_from_json, certificate_to_json};
pub use verify::{verify_certificate, VerifyReport};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StructureError {
    #[error("the configuration must have full difference lattice; normalize it first")]
    NotNormalized,
    #[error("certification failed: {0}")]
    Certification(String),
    #[error("malformed certificate: {0}")]
    Malformed(String),
    #[error(transparent)]
    Tangency(#[from] TangencyError),
    #[error(transparent)]
    Alpha(#[from] AlphaError),
    #[error(transparent)]
    Cayley(#[from] CayleyError),
    #[error(transparent)]
    Config(#[from] ConfigError),
}

#[derive(Clone, Debug)]
pub struct StructureCertificate {
    pub n: usize,
    pub r: usize,
    pub c: usize,
    pub delta: usize,
    /// Point indices grouped by their image under `π₂ ∘ π₁`.
    pub grouping: Vec<Vec<usize>>,
    /// `Zⁿ → Z^{n−c}`, surjective, with saturated kernel of rank `c`.
    pub pi1: GroupHom,
    /// `Z^{n−c} → Z^r`.
    pub pi2: GroupHom,
    /// `Z^{n−r} ≅ ker π → ker π₂ ≅ Z^{n−r−c}`.
    pub p: GroupHom,
    /// The fibers `Aᵢ ⊂ Z^{n−r}` of `π₂ ∘ π₁`, in the coordinates `p` acts on.
    pub fibers: Vec<PointConfig>,
    pub params: SamplingParams,
    pub oracle: DefectResult,
    pub checks: Vec<(String, bool)>,
}

impl StructureCertificate {
    pub fn pi(&self) -> GroupHom {
        self.pi2.compose(&self.pi1)
    }

    pub fn all_checks_pass(&self) -> bool {
        self.checks.iter().all(|(_, ok)| *ok)
    }

    pub fn check(&self, name: &str) -> Option<bool> {
        self.checks.iter().find(|(n, _)| n == name).map(|(_, ok)| *ok)
    }
}

/// The projection found from the contact locus, with its decomposition.
#[derive(Clone, Debug)]
pub struct MinProjection {
    pub structure: CayleyStructure,
    pub oracle: DefectResult,
}

impl MinProjection {
    pub fn pi(&self) -> &GroupHom {
        &self.structure.pi
    }

    pub fn grouping(&self) -> &[Vec<usize>] {
        &self.structure.parts
    }
}

/// The smallest projection with simplex image whose plane contains the
/// contact locus of a generic tangent hyperplane. Returns the zero map to
/// `Z⁰` when the dual is empty or not defective.
pub fn find_min_projection(a: &PointConfig, params: SamplingParams) -> Result<MinProjection, StructureError> {
    if !a.is_normalized() {
        return Err(StructureError::NotNormalized);
    }
    let problem = TangencyProblem::new(a.clone(), params);
    let oracle = defect_oracle(&problem);
    let trivial = || decompose_along(a, &GroupHom::to_zero(a.dim()));
    match oracle.delta() {
        None | Some(0) => return Ok(MinProjection { structure: trivial()?, oracle }),
        Some(_) => {}
    }
    let grouping = contact_grouping(&problem)?;
    let structure = projection_from_partition(a, &grouping.parts).ok_or_else(|| {
        StructureError::Certification(format!("contact grouping {:?} does not come from a projection", grouping.parts))
    })?;
    if a.dim() - grouping.rank != oracle.delta().unwrap_or(0) {
        return Err(StructureError::Certification(format!(
            "contact kernel has dimension {} but the oracle reports {}",
            a.dim() - grouping.rank,
            oracle.delta().unwrap_or(0)
        )));
    }
    Ok(MinProjection { structure, oracle })
}

/// Full certificate for a normalized configuration.
pub fn structure_certificate(a: &PointConfig, params: SamplingParams) -> Result<StructureCertificate, StructureError> {
    let min = find_min_projection(a, params)?;
    let n = a.dim();
    let cs = min.structure;
    if cs.r == 0 {
        return Ok(trivial_certificate(a, cs, params, min.oracle));
    }
    let r = cs.r;
    let kernel_pi = RationalSubspace::span_int(&cs.kernel());
    let problem = AlphaProblem::new(kernel_pi, cs.part_spans(), params)?;
    let c = alpha(&problem);
    let vp = vprime(&problem)?;
    let star = check_star(&problem)?;
    let components_in_vprime = problem
        .k_basis
        .row_vecs()
        .iter()
        .all(|row| problem.components(row).iter().all(|m| vp.contains_vector(m)));

    // π₁: rows spanning the lattice orthogonal to V′, so ker π₁ = V′ ∩ Zⁿ
    let pi1_mat = kernel_basis_int(&vp.lattice());
    let pi1 = GroupHom::linear(pi1_mat.clone());
    // π₂ = π ∘ S with S a right inverse of π₁
    let right_inverse = right_inverse(&pi1_mat)
        .ok_or_else(|| StructureError::Certification("π₁ has no integral right inverse".into()))?;
    let pi2 = GroupHom::linear(cs.pi.matrix().mul(&right_inverse));
    let factors = pi2.compose(&pi1).matrix() == cs.pi.matrix();

    let p = fiber_map(&cs, &pi1, &pi2)?;
    let delta = r.checked_sub(c).ok_or_else(|| StructureError::Certification(format!("c = {c} exceeds r = {r}")))?;
    if min.oracle.delta() != Some(delta) {
        return Err(StructureError::Certification(format!(
            "oracle reports δ = {:?} but r − c = {r} − {c} = {delta}",
            min.oracle.delta()
        )));
    }

    let simplex = decompose_along(a, &pi2.compose(&pi1)).map(|d| d.parts == cs.parts).unwrap_or(false);
    let join = join_type_wrt(a, &pi1, &pi2)?;
    let checks = vec![
        ("delta_eq_r_minus_c".to_string(), true),
        ("oracle_agrees".to_string(), true),
        ("pi1_surjective".to_string(), pi1.is_surjective()),
        ("pi1_kernel_rank".to_string(), pi1.codomain_rank() == n - c && vp.dim() == c),
        ("pi_factors".to_string(), factors),
        ("simplex_image".to_string(), simplex),
        ("join_type_wrt".to_string(), join),
        ("star".to_string(), star),
        ("components_in_vprime".to_string(), components_in_vprime),
        ("p_surjective".to_string(), p.is_surjective()),
    ];
    Ok(StructureCertificate {
        n,
        r,
        c,
        delta,
        grouping: cs.parts.clone(),
        pi1,
        pi2,
        p,
        fibers: cs.fibers.clone(),
        params,
        oracle: min.oracle,
        checks,
    })
}

fn trivial_certificate(
    a: &PointConfig,
    cs: CayleyStructure,
    params: SamplingParams,
    oracle: DefectResult,
) -> StructureCertificate {
    let n = a.dim();
    StructureCertificate {
        n,
        r: 0,
        c: 0,
        delta: 0,
        grouping: cs.parts,
        pi1: GroupHom::identity(n),
        pi2: GroupHom::to_zero(n),
        p: GroupHom::identity(n),
        fibers: cs.fibers,
        params,
        oracle,
        checks: vec![
            ("delta_eq_r_minus_c".to_string(), true),
            ("oracle_agrees".to_string(), true),
            ("pi1_surjective".to_string(), true),
            ("pi1_kernel_rank".to_string(), true),
            ("pi_factors".to_string(), true),
            ("simplex_image".to_string(), true),
            ("join_type_wrt".to_string(), true),
        ],
    }
}

/// Integer `S` with `m·S = I`, for surjective `m`.
pub(crate) fn right_inverse(m: &IntMatrix) -> Option<IntMatrix> {
    let k = m.rows();
    let mut cols = Vec::with_capacity(k);
    for j in 0..k {
        let e: Vec<BigInt> = (0..k).map(|i| if i == j { BigInt::one() } else { BigInt::zero() }).collect();
        cols.push(solve_int(m, &e)?);
    }
    Some(IntMatrix::from_rows(m.cols(), cols).transpose())
}

/// The map `p` induced by `π₁` from `ker π` (in fiber coordinates) to `ker π₂`
/// (in its HNF basis).
pub(crate) fn fiber_map(cs: &CayleyStructure, pi1: &GroupHom, pi2: &GroupHom) -> Result<GroupHom, StructureError> {
    let k = cs.fiber_basis();
    let k2 = kernel_basis_int(pi2.matrix());
    let k2t = k2.transpose();
    let images = pi1.matrix().mul(&k.transpose());
    let mut cols = Vec::with_capacity(images.cols());
    for j in 0..images.cols() {
        cols.push(solve_int(&k2t, &images.column(j)).ok_or_else(|| {
            StructureError::Certification("π₁ does not map ker π into ker π₂".into())
        })?);
    }
    Ok(GroupHom::linear(IntMatrix::from_rows(k2.rows(), cols).transpose()))
}

/// The factors `p(A₀), …, p(A_r)`. Checks that their Cayley sum is of join
/// type and that each factor is non-defective (or a point).
pub fn join_factors(cert: &StructureCertificate) -> Result<Vec<PointConfig>, StructureError> {
    let mut factors = Vec::with_capacity(cert.fibers.len());
    for fiber in &cert.fibers {
        factors.push(apply_affine(fiber, &cert.p, true)?);
    }
    if !is_join_type(&factors) {
        return Err(StructureError::Certification("the factors p(Aᵢ) are not of join type".into()));
    }
    for (i, f) in factors.iter().enumerate() {
        let normalized = normalize(f).config;
        let res = defect_oracle(&TangencyProblem::new(normalized, cert.params));
        if let Some(d) = res.delta() {
            if d != 0 {
                return Err(StructureError::Certification(format!("factor {i} has dual defect {d}")));
            }
        }
    }
    Ok(factors)
}

/// `ker` of a linear map as a rational subspace.
pub(crate) fn kernel_space(f: &GroupHom) -> RationalSubspace {
    RationalSubspace::span_int(&f.kernel())
}

/// Whether every row of `rows` lies in `space`.
pub(crate) fn rows_in(rows: &IntMatrix, space: &RationalSubspace) -> bool {
    (0..rows.rows()).all(|i| space.contains_vector(&rat_vec(rows.row(i))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{four_fibers, nine_points, segre, segre_product, simplex};

    fn params() -> SamplingParams {
        SamplingParams::default()
    }

    #[test]
    fn segre_square_is_trivial() {
        let cert = structure_certificate(&segre(), params()).unwrap();
        assert_eq!((cert.r, cert.c, cert.delta), (0, 0, 0));
        assert_eq!(cert.grouping, vec![vec![0, 1, 2, 3]]);
        assert_eq!(cert.pi1, GroupHom::identity(2));
        assert_eq!(cert.pi2.codomain_rank(), 0);
        assert_eq!(join_factors(&cert).unwrap(), vec![segre()]);
    }

    #[test]
    fn four_fiber_certificate() {
        let a = four_fibers();
        let cert = structure_certificate(&a, params()).unwrap();
        assert_eq!((cert.r, cert.c, cert.delta), (3, 2, 1));
        assert!(cert.all_checks_pass(), "{:?}", cert.checks);
        // ker π₁ = Z² × {0}
        assert_eq!(cert.pi1.kernel(), IntMatrix::from_i64(5, &[&[1, 0, 0, 0, 0], &[0, 1, 0, 0, 0]]));
        let mut sizes: Vec<usize> = cert.grouping.iter().map(Vec::len).collect();
        sizes.sort();
        assert_eq!(sizes, vec![3, 3, 4, 4]);
        let factors = join_factors(&cert).unwrap();
        assert_eq!(factors.len(), 4);
        assert!(factors.iter().all(|f| f.len() == 1 && f.dim() == 0));
    }

    #[test]
    fn nine_point_certificate() {
        let a = nine_points();
        let cert = structure_certificate(&a, params()).unwrap();
        assert_eq!((cert.r, cert.c, cert.delta), (2, 1, 1));
        assert!(cert.all_checks_pass(), "{:?}", cert.checks);
        let expected_pi1 = IntMatrix::from_i64(
            6,
            &[&[1, 0, 0, 0, 0, 0], &[0, 1, 0, 0, 0, 0], &[0, 0, 1, 0, 0, 0], &[0, 0, 0, 1, 0, 0], &[0, 0, 0, 0, 1, 2]],
        );
        assert_eq!(cert.pi1.matrix(), &expected_pi1);
        let reference_pi = GroupHom::linear(IntMatrix::from_i64(6, &[&[1, 1, 0, 0, 0, 0], &[0, 0, 1, 1, 0, 0]]));
        assert_eq!(cert.pi().kernel(), reference_pi.kernel());
        let factors = join_factors(&cert).unwrap();
        assert_eq!(factors.len(), 3);
    }

    #[test]
    fn simplex_has_empty_dual() {
        let cert = structure_certificate(&simplex(3), params()).unwrap();
        assert!(cert.oracle.is_empty_dual());
        assert_eq!((cert.r, cert.c, cert.delta), (0, 0, 0));
    }

    #[test]
    fn segre_products_have_defect_b_minus_a() {
        for a in 1..=3 {
            for b in a..=3 {
                let cert = structure_certificate(&segre_product(a, b), params()).unwrap();
                assert_eq!(cert.delta, b - a, "P^{a} x P^{b}");
                assert_eq!(cert.oracle.delta(), Some(b - a));
            }
        }
    }

    #[test]
    fn find_min_projection_examples() {
        let m = find_min_projection(&nine_points(), params()).unwrap();
        assert_eq!(m.structure.r, 2);
        let reference_pi = GroupHom::linear(IntMatrix::from_i64(6, &[&[1, 1, 0, 0, 0, 0], &[0, 0, 1, 1, 0, 0]]));
        assert_eq!(m.pi().kernel(), reference_pi.kernel());
        assert_eq!(find_min_projection(&segre(), params()).unwrap().structure.r, 0);
        let m = find_min_projection(&four_fibers(), params()).unwrap();
        assert_eq!(m.structure.r, 3);
        assert_eq!(m.pi().kernel(), IntMatrix::from_i64(5, &[&[1, 0, 0, 0, 0], &[0, 1, 0, 0, 0]]));
    }

    #[test]
    fn rejects_unnormalized_input() {
        let a = PointConfig::from_i64(1, &[&[0], &[2], &[4]]).unwrap();
        assert!(matches!(structure_certificate(&a, params()), Err(StructureError::NotNormalized)));
    }

    #[test]
    fn right_inverse_works() {
        let m = IntMatrix::from_i64(3, &[&[1, 1, 0], &[0, 1, 1]]);
        let s = right_inverse(&m).unwrap();
        assert_eq!(m.mul(&s), IntMatrix::identity(2));
        assert!(right_inverse(&IntMatrix::from_i64(1, &[&[2]])).is_none());
    }
}
