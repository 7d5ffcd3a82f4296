//! Seeded generators for test corpora: random configurations, random
//! unimodular twists and join-type Cayley sums of non-defective factors.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::cayley::cayley_sum;
use crate::config::{apply_affine, normalize, GroupHom, Point, PointConfig};
use crate::linalg::IntMatrix;
use crate::sampling::SamplingParams;
use crate::tangency::{defect_oracle, TangencyProblem};

/// A configuration of `len` distinct points with coordinates in
/// `[-coord, coord]ⁿ`, moved into its own lattice so that it is normalized.
/// `len` is clamped to the number of available lattice points.
pub fn random_config(rng: &mut ChaCha8Rng, n: usize, len: usize, coord: i64) -> PointConfig {
    let side = (2 * coord + 1) as u128;
    let available = side.checked_pow(n as u32).unwrap_or(u128::MAX);
    let len = (len as u128).min(available).max(1) as usize;
    let mut points: Vec<Point> = Vec::with_capacity(len);
    while points.len() < len {
        let p: Point = (0..n).map(|_| BigInt::from(rng.gen_range(-coord..=coord))).collect();
        if !points.contains(&p) {
            points.push(p);
        }
    }
    normalize(&PointConfig::new(n, points).expect("distinct points")).config
}

/// A random element of `GL_n(Z)` built from `steps` elementary operations.
pub fn random_unimodular(rng: &mut ChaCha8Rng, n: usize, steps: usize, max_mult: i64) -> IntMatrix {
    let mut m = IntMatrix::identity(n);
    if n == 0 {
        return m;
    }
    for _ in 0..steps {
        match rng.gen_range(0..3) {
            0 if n > 1 => {
                let i = rng.gen_range(0..n);
                let mut j = rng.gen_range(0..n - 1);
                if j >= i {
                    j += 1;
                }
                let k = BigInt::from(rng.gen_range(-max_mult..=max_mult));
                m.add_row_multiple(i, j, &k);
            }
            1 if n > 1 => {
                let i = rng.gen_range(0..n);
                let j = rng.gen_range(0..n);
                m.swap_rows(i, j);
            }
            _ => {
                let i = rng.gen_range(0..n);
                m.negate_row(i);
            }
        }
    }
    m
}

/// Applies a random unimodular map and translation. Returns the image and the
/// map used.
pub fn twist(rng: &mut ChaCha8Rng, a: &PointConfig) -> (PointConfig, GroupHom) {
    let n = a.dim();
    let u = random_unimodular(rng, n, 3 * n + 2, 2);
    let t: Vec<BigInt> = (0..n).map(|_| BigInt::from(rng.gen_range(-5i64..=5))).collect();
    let f = GroupHom::affine(u, t);
    let b = apply_affine(a, &f, false).expect("unimodular maps are injective");
    (b, f)
}

/// A join-type Cayley sum with `r + 1` fibers. Each fiber is a single point
/// or a normalized configuration with dual defect 0 in its own block of
/// coordinates; the blocks are translated and then mixed by one unimodular
/// map. The first fiber is never a point. The expected dual defect is `r`.
pub fn join_type_cayley(rng: &mut ChaCha8Rng, r: usize, max_fiber_dim: usize, params: SamplingParams) -> JoinInstance {
    let max_fiber_dim = max_fiber_dim.max(1);
    let mut blocks: Vec<PointConfig> = Vec::with_capacity(r + 1);
    for i in 0..=r {
        let min_dim = usize::from(i == 0);
        blocks.push(non_defective_factor(rng, min_dim, max_fiber_dim, params));
    }
    let m: usize = blocks.iter().map(PointConfig::dim).sum();
    let mix = random_unimodular(rng, m, 2 * m + 1, 1);
    let mut fibers = Vec::with_capacity(r + 1);
    let mut offset = 0;
    for block in &blocks {
        let shift: Vec<BigInt> = (0..m).map(|_| BigInt::from(rng.gen_range(-2i64..=2))).collect();
        let pts: Vec<Point> = block
            .points()
            .iter()
            .map(|p| {
                let mut v = vec![BigInt::zero(); m];
                for (k, x) in p.iter().enumerate() {
                    v[offset + k] = x.clone();
                }
                let mut w = mix.mul_vec(&v);
                for (wi, si) in w.iter_mut().zip(&shift) {
                    *wi += si;
                }
                w
            })
            .collect();
        offset += block.dim();
        fibers.push(PointConfig::new(m, pts).expect("injective image"));
    }
    let config = cayley_sum(&fibers).expect("common dimension");
    JoinInstance { config, fibers, expected_delta: r }
}

#[derive(Clone, Debug)]
pub struct JoinInstance {
    pub config: PointConfig,
    pub fibers: Vec<PointConfig>,
    pub expected_delta: usize,
}

fn non_defective_factor(rng: &mut ChaCha8Rng, min_dim: usize, max_dim: usize, params: SamplingParams) -> PointConfig {
    let d = rng.gen_range(min_dim..=max_dim);
    if d == 0 {
        return PointConfig::new(0, vec![vec![]]).expect("a point");
    }
    loop {
        let extra = rng.gen_range(1..=2);
        let a = random_config(rng, d, d + 1 + extra, 2);
        if a.dim() != d {
            continue;
        }
        let res = defect_oracle(&TangencyProblem::new(a.clone(), params));
        if res.delta() == Some(0) {
            return a;
        }
    }
}

/// Segre configuration `{0, e₁, …, e_a} × {0, e₁, …, e_b}`.
pub fn segre_product(a: usize, b: usize) -> PointConfig {
    let unit = |n: usize| -> Vec<Point> {
        let mut pts = vec![vec![BigInt::zero(); n]];
        for i in 0..n {
            let mut e = vec![BigInt::zero(); n];
            e[i] = BigInt::one();
            pts.push(e);
        }
        pts
    };
    let mut pts = Vec::new();
    for p in unit(a) {
        for q in unit(b) {
            let mut v = p.clone();
            v.extend(q);
            pts.push(v);
        }
    }
    PointConfig::new(a + b, pts).expect("distinct").with_name(format!("segre_{a}_{b}"))
}

/// Unit simplex `{0, e₁, …, e_n}`.
pub fn unit_simplex(n: usize) -> PointConfig {
    let mut pts = vec![vec![BigInt::zero(); n]];
    for i in 0..n {
        let mut e = vec![BigInt::zero(); n];
        e[i] = BigInt::one();
        pts.push(e);
    }
    PointConfig::new(n, pts).expect("distinct").with_name(format!("simplex{n}"))
}

/// Picks `k` distinct indices out of `0..n` in random order.
pub fn sample_indices(rng: &mut ChaCha8Rng, n: usize, k: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(rng);
    idx.truncate(k);
    idx
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_configs_are_normalized() {
        let mut rng = SamplingParams::default().rng(0);
        for _ in 0..20 {
            let a = random_config(&mut rng, 3, 6, 4);
            assert!(a.is_normalized());
        }
    }

    #[test]
    fn unimodular_matrices_are_unimodular() {
        let mut rng = SamplingParams::default().rng(1);
        for n in 0..5 {
            assert!(random_unimodular(&mut rng, n, 10, 3).is_unimodular());
        }
    }

    #[test]
    fn join_instances_are_join_type_and_normalized() {
        let params = SamplingParams::default();
        let mut rng = params.rng(2);
        for r in 1..3 {
            let inst = join_type_cayley(&mut rng, r, 2, params);
            assert!(crate::cayley::is_join_type(&inst.fibers));
            assert!(inst.config.is_normalized());
        }
    }

    #[test]
    fn clamps_to_available_points() {
        let mut rng = SamplingParams::default().rng(3);
        let a = random_config(&mut rng, 1, 50, 1);
        assert_eq!(a.len(), 3);
    }
}
