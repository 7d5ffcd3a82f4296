//! Cayley sums `A₀ * ⋯ * A_r`, decomposition of a configuration along a
//! projection with simplex image, join-type tests and exhaustive enumeration
//! of all such projections.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::config::{ConfigError, GroupHom, Point, PointConfig};
use crate::linalg::{is_direct_sum, kernel_basis_int, solve_int, unimodular_inverse, IntMatrix, RationalSubspace};
use crate::tangency::tangency_space;

pub const DEFAULT_ENUMERATION_LIMIT: usize = 12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CayleyError {
    #[error("fiber {index} lives in Z^{found}, expected Z^{expected}")]
    DimensionMismatch { index: usize, expected: usize, found: usize },
    #[error("a Cayley sum needs at least one fiber")]
    NoFibers,
    #[error("projection has domain rank {found} but the configuration lives in Z^{expected}")]
    DomainMismatch { expected: usize, found: usize },
    #[error("image of the configuration is not a unimodular simplex: {0}")]
    NotSimplexImage(String),
    #[error("the difference lattice of the configuration is not the full lattice")]
    NotNormalized,
    #[error("{len} points exceed the enumeration limit {limit}")]
    TooLarge { len: usize, limit: usize },
    #[error(transparent)]
    Config(#[from] ConfigError),
}

/// A configuration together with a projection `π : Zⁿ → Z^r` whose image is a
/// unimodular simplex, and the resulting Cayley decomposition.
#[derive(Clone, Debug)]
pub struct CayleyStructure {
    pub base: PointConfig,
    pub r: usize,
    /// Point indices of `base`, grouped by their image; ordered by smallest index.
    pub parts: Vec<Vec<usize>>,
    pub pi: GroupHom,
    /// The `Aᵢ ⊂ Z^{n−r}`.
    pub fibers: Vec<PointConfig>,
    /// Isomorphism `f : Zⁿ → Z^{n−r} × Z^r` with `f(base) = cayley_sum(fibers)`.
    pub section_frame: GroupHom,
    /// Isomorphism `g : Z^r → Z^r` sending the image of part `i` to `eᵢ` (`e₀ = 0`).
    /// The last `r` coordinates of `section_frame` equal `g ∘ π`.
    pub simplex_frame: GroupHom,
}

impl CayleyStructure {
    /// `Vᵢ = ⟨part_i − part_i⟩_Q ⊂ Qⁿ`.
    pub fn part_spans(&self) -> Vec<RationalSubspace> {
        part_spans(&self.base, &self.parts)
    }

    /// Saturated kernel of `π`.
    pub fn kernel(&self) -> IntMatrix {
        self.pi.kernel()
    }

    /// Basis (rows) of `ker π` in which the fibers are written: `x ∈ ker π`
    /// has fiber coordinates `y` with `x = Σ yⱼ·rowⱼ`.
    pub fn fiber_basis(&self) -> IntMatrix {
        kernel_basis_int(self.simplex_frame.compose(&self.pi).matrix())
    }

    /// Label of each point (index of its part).
    pub fn labels(&self) -> Vec<usize> {
        labels_of(&self.parts, self.base.len())
    }
}

pub fn labels_of(parts: &[Vec<usize>], len: usize) -> Vec<usize> {
    let mut labels = vec![0; len];
    for (j, part) in parts.iter().enumerate() {
        for &i in part {
            labels[i] = j;
        }
    }
    labels
}

/// Spans of in-part differences.
pub fn part_spans(a: &PointConfig, parts: &[Vec<usize>]) -> Vec<RationalSubspace> {
    parts
        .iter()
        .map(|part| {
            let base = a.point(part[0]);
            let rows: Vec<Vec<BigInt>> = part
                .iter()
                .skip(1)
                .map(|&i| a.point(i).iter().zip(base).map(|(x, y)| x - y).collect())
                .collect();
            RationalSubspace::span_int(&IntMatrix::from_rows(a.dim(), rows))
        })
        .collect()
}

fn difference_span(a: &PointConfig) -> RationalSubspace {
    let all: Vec<usize> = (0..a.len()).collect();
    part_spans(a, &[all]).pop().expect("one part")
}

/// `(A₀×{0}) ∪ (A₁×{e₁}) ∪ ⋯ ∪ (A_r×{e_r}) ⊂ Z^{m} × Z^r`.
pub fn cayley_sum(fibers: &[PointConfig]) -> Result<PointConfig, CayleyError> {
    let first = fibers.first().ok_or(CayleyError::NoFibers)?;
    let m = first.dim();
    let r = fibers.len() - 1;
    let mut points = Vec::new();
    for (i, f) in fibers.iter().enumerate() {
        if f.dim() != m {
            return Err(CayleyError::DimensionMismatch { index: i, expected: m, found: f.dim() });
        }
        for p in f.points() {
            let mut q = p.clone();
            q.extend((1..=r).map(|j| if j == i { BigInt::one() } else { BigInt::zero() }));
            points.push(q);
        }
    }
    Ok(PointConfig::new(m + r, points)?)
}

/// Whether the difference spaces of the fibers sum directly.
pub fn is_join_type(fibers: &[PointConfig]) -> bool {
    let Some(first) = fibers.first() else { return true };
    let spans: Vec<RationalSubspace> = fibers.iter().map(difference_span).collect();
    is_direct_sum(first.dim(), &spans)
}

/// Decomposes `a` along `pi`, whose image must be Z-affinely equivalent to
/// `{0, e₁, …, e_r}`.
pub fn decompose_along(a: &PointConfig, pi: &GroupHom) -> Result<CayleyStructure, CayleyError> {
    if pi.domain_rank() != a.dim() {
        return Err(CayleyError::DomainMismatch { expected: a.dim(), found: pi.domain_rank() });
    }
    let n = a.dim();
    let r = pi.codomain_rank();
    let mut values: Vec<Point> = Vec::new();
    let mut parts: Vec<Vec<usize>> = Vec::new();
    for (i, u) in a.points().iter().enumerate() {
        let v = pi.apply(u);
        match values.iter().position(|w| *w == v) {
            Some(j) => parts[j].push(i),
            None => {
                values.push(v);
                parts.push(vec![i]);
            }
        }
    }
    if parts.len() != r + 1 {
        return Err(CayleyError::NotSimplexImage(format!("{} distinct images in Z^{r}", parts.len())));
    }
    // g(y) = G·(y − v₀) with G·(vᵢ − v₀) = eᵢ
    let d = IntMatrix::from_rows(
        r,
        values[1..].iter().map(|v| v.iter().zip(&values[0]).map(|(x, y)| x - y).collect()).collect(),
    );
    let g_mat = unimodular_inverse(&d.transpose())
        .ok_or_else(|| CayleyError::NotSimplexImage("image vertices do not form a lattice basis".into()))?;
    let g_shift: Vec<BigInt> = g_mat.mul_vec(&values[0]).into_iter().map(|x| -x).collect();
    let g = GroupHom::affine(g_mat, g_shift);
    let gp = g.compose(pi);
    let p = gp.matrix();

    // section s with p·s = I, and Zⁿ = ker p ⊕ s(Z^r)
    let mut s_cols = Vec::with_capacity(r);
    for j in 0..r {
        let e: Vec<BigInt> = (0..r).map(|i| if i == j { BigInt::one() } else { BigInt::zero() }).collect();
        s_cols.push(
            solve_int(p, &e).ok_or_else(|| CayleyError::NotSimplexImage("projection is not surjective".into()))?,
        );
    }
    let k = kernel_basis_int(p);
    let frame = k.vstack(&IntMatrix::from_rows(n, s_cols)).transpose();
    let f_mat = unimodular_inverse(&frame).ok_or(CayleyError::NotNormalized)?;
    let anchor = a.point(0);
    let f_shift: Vec<BigInt> = f_mat.mul_vec(anchor).into_iter().map(|x| -x).collect();
    let section_frame = GroupHom::affine(f_mat, f_shift);

    let m = n - r;
    let mut fibers = Vec::with_capacity(r + 1);
    for part in &parts {
        let pts: Vec<Point> = part.iter().map(|&i| section_frame.apply(a.point(i))[..m].to_vec()).collect();
        fibers.push(PointConfig::new(m, pts)?);
    }
    debug_assert!(parts.iter().enumerate().all(|(j, part)| part.iter().all(|&i| {
        let img = section_frame.apply(a.point(i));
        (0..r).all(|l| img[m + l] == if l + 1 == j { BigInt::one() } else { BigInt::zero() })
    })));
    Ok(CayleyStructure {
        base: a.clone(),
        r,
        parts,
        pi: pi.clone(),
        fibers,
        section_frame,
        simplex_frame: g,
    })
}

/// Whether the images `π₁(Mᵢ)` of the difference spaces of the parts of
/// `π₂ ∘ π₁` sum directly.
pub fn join_type_wrt(a: &PointConfig, pi1: &GroupHom, pi2: &GroupHom) -> Result<bool, CayleyError> {
    if pi2.domain_rank() != pi1.codomain_rank() {
        return Err(CayleyError::DomainMismatch { expected: pi1.codomain_rank(), found: pi2.domain_rank() });
    }
    let cs = decompose_along(a, &pi2.compose(pi1))?;
    let m1 = pi1.matrix().to_rat();
    let images: Vec<RationalSubspace> = cs.part_spans().iter().map(|v| v.image(&m1)).collect();
    Ok(is_direct_sum(pi1.codomain_rank(), &images))
}

/// Builds the projection attached to a partition of the points: the linear
/// `P` with `P·(u − u₀) = e_{part(u)}` (part 0 goes to 0). `None` when no
/// integral `P` exists.
pub fn projection_from_partition(a: &PointConfig, parts: &[Vec<usize>]) -> Option<CayleyStructure> {
    let r = parts.len().checked_sub(1)?;
    let labels = labels_of(parts, a.len());
    if labels[0] != 0 {
        return None;
    }
    let d = a.difference_rows();
    let mut rows = Vec::with_capacity(r);
    for j in 1..=r {
        let target: Vec<BigInt> =
            labels.iter().map(|&l| if l == j { BigInt::one() } else { BigInt::zero() }).collect();
        rows.push(solve_int(&d, &target)?);
    }
    let pi = GroupHom::linear(IntMatrix::from_rows(a.dim(), rows));
    let cs = decompose_along(a, &pi).ok()?;
    (cs.parts == parts).then_some(cs)
}

/// Every projection of `a` with unimodular simplex image, one per set
/// partition of the points that it induces.
pub fn enumerate_simplex_projections(a: &PointConfig, limit: usize) -> Result<Vec<CayleyStructure>, CayleyError> {
    if a.len() > limit {
        return Err(CayleyError::TooLarge { len: a.len(), limit });
    }
    if !a.is_normalized() {
        return Err(CayleyError::NotNormalized);
    }
    let out: Vec<CayleyStructure> = valid_partitions(a)
        .into_iter()
        .map(|parts| projection_from_partition(a, &parts).expect("tangency-orthogonal partitions are realizable"))
        .collect();
    Ok(out)
}

const PRIME: u64 = (1 << 61) - 1;

fn mod_prime(x: &BigInt) -> u64 {
    let p = BigInt::from(PRIME);
    let r = ((x % &p) + &p) % &p;
    u64::try_from(r).expect("reduced residue fits")
}

/// Set partitions (at most `n + 1` parts) whose part indicators are
/// orthogonal to the tangency space. For normalized `a` these are exactly the
/// partitions induced by projections with simplex image.
pub fn valid_partitions(a: &PointConfig) -> Vec<Vec<Vec<usize>>> {
    let l = tangency_space(a).primitive_int_rows();
    let residues: Vec<Vec<u64>> = l.row_vecs().iter().map(|row| row.iter().map(mod_prime).collect()).collect();
    let mut walker = PartitionWalker {
        len: a.len(),
        max_parts: a.dim() + 1,
        residues,
        labels: vec![0; a.len()],
        sums: Vec::new(),
        found: Vec::new(),
    };
    walker.sums = vec![vec![0; walker.max_parts]; walker.residues.len()];
    walker.walk(0, 0);
    walker
        .found
        .into_iter()
        .filter(|labels| exact_orthogonal(&l, labels))
        .map(|labels| parts_of(&labels))
        .collect()
}

fn exact_orthogonal(l: &IntMatrix, labels: &[usize]) -> bool {
    let parts = labels.iter().max().map_or(0, |m| m + 1);
    (0..l.rows()).all(|k| {
        let mut sums = vec![BigInt::zero(); parts];
        for (i, &lab) in labels.iter().enumerate() {
            sums[lab] += &l[(k, i)];
        }
        sums.iter().all(Zero::is_zero)
    })
}

pub fn parts_of(labels: &[usize]) -> Vec<Vec<usize>> {
    let count = labels.iter().max().map_or(0, |m| m + 1);
    let mut parts = vec![Vec::new(); count];
    for (i, &lab) in labels.iter().enumerate() {
        parts[lab].push(i);
    }
    parts
}

struct PartitionWalker {
    len: usize,
    max_parts: usize,
    residues: Vec<Vec<u64>>,
    labels: Vec<usize>,
    sums: Vec<Vec<u64>>,
    found: Vec<Vec<usize>>,
}

impl PartitionWalker {
    fn walk(&mut self, i: usize, used: usize) {
        if i == self.len {
            let ok = self.sums.iter().all(|row| row[..used].iter().all(|&s| s == 0));
            if ok {
                self.found.push(self.labels.clone());
            }
            return;
        }
        let upper = (used + 1).min(self.max_parts);
        for lab in 0..upper {
            self.labels[i] = lab;
            for (row, res) in self.sums.iter_mut().zip(&self.residues) {
                row[lab] = (row[lab] + res[i]) % PRIME;
            }
            self.walk(i + 1, used.max(lab + 1));
            for (row, res) in self.sums.iter_mut().zip(&self.residues) {
                row[lab] = (row[lab] + PRIME - res[i]) % PRIME;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{nine_points, segre};
    use crate::linalg::ints;

    fn unit_interval() -> PointConfig {
        PointConfig::from_i64(1, &[&[0], &[1]]).unwrap()
    }

    #[test]
    fn cayley_sum_of_two_intervals_is_the_square() {
        let s = cayley_sum(&[unit_interval(), unit_interval()]).unwrap();
        assert_eq!(s, segre());
    }

    #[test]
    fn cayley_sum_single_fiber_is_identity() {
        assert_eq!(cayley_sum(&[segre()]).unwrap(), segre());
    }

    #[test]
    fn cayley_sum_rejects_mixed_dimensions() {
        assert!(matches!(
            cayley_sum(&[unit_interval(), segre()]),
            Err(CayleyError::DimensionMismatch { index: 1, .. })
        ));
    }

    #[test]
    fn four_fiber_sum_has_fourteen_points() {
        let a0 = PointConfig::from_i64(2, &[&[0, 0], &[1, 0], &[2, 0]]).unwrap();
        let a1 = PointConfig::from_i64(2, &[&[0, 0], &[0, 1], &[0, 2]]).unwrap();
        let sq = segre();
        let s = cayley_sum(&[a0, a1, sq.clone(), sq]).unwrap();
        assert_eq!(s.len(), 14);
        assert_eq!(s.dim(), 5);
    }

    #[test]
    fn join_type_examples() {
        assert!(!is_join_type(&[unit_interval(), unit_interval()]));
        let pt = PointConfig::from_i64(1, &[&[3]]).unwrap();
        assert!(is_join_type(&[pt.clone(), pt.clone(), pt]));
        let pt2 = PointConfig::from_i64(2, &[&[0, 0]]).unwrap();
        let x = PointConfig::from_i64(2, &[&[0, 0], &[1, 0]]).unwrap();
        let y = PointConfig::from_i64(2, &[&[0, 0], &[0, 1]]).unwrap();
        assert!(is_join_type(&[pt2, x, y]));
    }

    #[test]
    fn decompose_segre_along_second_coordinate() {
        let pr2 = GroupHom::linear(IntMatrix::from_i64(2, &[&[0, 1]]));
        let cs = decompose_along(&segre(), &pr2).unwrap();
        assert_eq!(cs.r, 1);
        assert_eq!(cs.parts, vec![vec![0, 2], vec![1, 3]]);
        assert_eq!(cs.fibers, vec![unit_interval(), unit_interval()]);
        let img = crate::config::apply_affine(&segre(), &cs.section_frame, false).unwrap();
        assert_eq!(img, cayley_sum(&cs.fibers).unwrap());
    }

    #[test]
    fn decompose_along_zero_map() {
        let cs = decompose_along(&segre(), &GroupHom::to_zero(2)).unwrap();
        assert_eq!(cs.r, 0);
        assert_eq!(cs.parts, vec![vec![0, 1, 2, 3]]);
        assert_eq!(cs.fibers, vec![segre()]);
    }

    #[test]
    fn decompose_nine_points() {
        let a = nine_points();
        let pi = GroupHom::linear(IntMatrix::from_i64(6, &[&[1, 1, 0, 0, 0, 0], &[0, 0, 1, 1, 0, 0]]));
        let cs = decompose_along(&a, &pi).unwrap();
        let names: Vec<Vec<Point>> =
            cs.parts.iter().map(|p| p.iter().map(|&i| a.point(i).clone()).collect()).collect();
        let e = |i: usize| {
            let mut v = vec![0i64; 6];
            v[i - 1] = 1;
            ints(&v)
        };
        let has = |group: &[Point], pts: &[Vec<BigInt>]| pts.iter().all(|p| group.contains(p)) && group.len() == 3;
        assert!(names.iter().any(|g| has(g, &[ints(&[0; 6]), e(5), e(6)])));
        assert!(names.iter().any(|g| has(g, &[e(1), e(2), ints(&[-1, 2, 0, 0, -2, 1])])));
        assert!(names.iter().any(|g| has(g, &[e(3), e(4), ints(&[0, 0, -1, 2, -2, 1])])));
    }

    #[test]
    fn decompose_rejects_non_simplex_images() {
        let line = PointConfig::from_i64(1, &[&[0], &[1], &[2]]).unwrap();
        assert!(matches!(
            decompose_along(&line, &GroupHom::identity(1)),
            Err(CayleyError::NotSimplexImage(_))
        ));
        let twice = GroupHom::linear(IntMatrix::from_i64(1, &[&[2]]));
        assert!(decompose_along(&unit_interval(), &twice).is_err());
    }

    #[test]
    fn join_type_wrt_examples() {
        let a = nine_points();
        let pi1 = GroupHom::linear(IntMatrix::from_i64(
            6,
            &[&[1, 0, 0, 0, 0, 0], &[0, 1, 0, 0, 0, 0], &[0, 0, 1, 0, 0, 0], &[0, 0, 0, 1, 0, 0], &[0, 0, 0, 0, 1, 2]],
        ));
        let pi2 = GroupHom::linear(IntMatrix::from_i64(5, &[&[1, 1, 0, 0, 0], &[0, 0, 1, 1, 0]]));
        assert!(join_type_wrt(&a, &pi1, &pi2).unwrap());
        // without the quotient the parts are not direct
        let pi = pi2.compose(&pi1);
        assert!(!join_type_wrt(&a, &GroupHom::identity(6), &pi).unwrap());
        assert!(join_type_wrt(&segre(), &GroupHom::identity(2), &GroupHom::to_zero(2)).unwrap());
    }

    #[test]
    fn enumerate_interval() {
        let all = enumerate_simplex_projections(&unit_interval(), 12).unwrap();
        let rs: Vec<usize> = all.iter().map(|c| c.r).collect();
        assert_eq!(rs, vec![0, 1]);
    }

    #[test]
    fn enumerate_point() {
        let pt = PointConfig::new(0, vec![vec![]]).unwrap();
        let all = enumerate_simplex_projections(&pt, 12).unwrap();
        assert_eq!(all.len(), 1);
        assert_eq!(all[0].r, 0);
    }

    #[test]
    fn enumerate_segre() {
        let all = enumerate_simplex_projections(&segre(), 12).unwrap();
        let mut parts: Vec<Vec<Vec<usize>>> = all.iter().map(|c| c.parts.clone()).collect();
        parts.sort();
        assert_eq!(parts, vec![vec![vec![0, 1], vec![2, 3]], vec![vec![0, 1, 2, 3]], vec![vec![0, 2], vec![1, 3]]]);
    }

    #[test]
    fn enumerate_guards() {
        assert!(matches!(
            enumerate_simplex_projections(&segre(), 3),
            Err(CayleyError::TooLarge { len: 4, limit: 3 })
        ));
        let two = PointConfig::from_i64(1, &[&[0], &[2]]).unwrap();
        assert!(matches!(enumerate_simplex_projections(&two, 12), Err(CayleyError::NotNormalized)));
    }

    #[test]
    fn every_enumerated_structure_round_trips() {
        for cs in enumerate_simplex_projections(&nine_points(), 12).unwrap() {
            let again = decompose_along(&cs.base, &cs.pi).unwrap();
            assert_eq!(again.parts, cs.parts);
            let img = crate::config::apply_affine(&cs.base, &cs.section_frame, false).unwrap();
            assert_eq!(img, cayley_sum(&cs.fibers).unwrap());
        }
    }

    #[test]
    fn cayley_round_trip_recovers_fibers() {
        let a0 = PointConfig::from_i64(2, &[&[0, 0], &[1, 0], &[2, 0]]).unwrap();
        let a1 = PointConfig::from_i64(2, &[&[0, 0], &[0, 1]]).unwrap();
        let s = cayley_sum(&[a0.clone(), a1.clone()]).unwrap();
        let pr = GroupHom::linear(IntMatrix::from_i64(3, &[&[0, 0, 1]]));
        let cs = decompose_along(&s, &pr).unwrap();
        assert_eq!(cs.fibers.len(), 2);
        assert!(crate::config::affine_equivalent(&cs.fibers[0], &a0).is_some());
        assert!(crate::config::affine_equivalent(&cs.fibers[1], &a1).is_some());
    }
}
