use std::collections::HashSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{GroupHom, Point, PointConfig};
use crate::linalg::{rat_vec, saturate, snf, solve_int, unimodular_inverse, IntMatrix, RatMatrix};

/// Finds a Z-affine automorphism of the ambient lattice carrying `a` onto `b`.
///
/// Both configurations are first expressed in a basis of the saturation of
/// their difference lattices; a witness there is found by exhaustive search
/// over images of an affine frame and then extended to the whole lattice.
pub fn affine_equivalent(a: &PointConfig, b: &PointConfig) -> Option<GroupHom> {
    if a.dim() != b.dim() || a.len() != b.len() {
        return None;
    }
    let sa = saturate(&a.difference_rows());
    let sb = saturate(&b.difference_rows());
    if sa.rows() != sb.rows() {
        return None;
    }
    let a_coords = frame_coords(a, &sa);
    let b_coords = frame_coords(b, &sb);
    let (m, t) = search_full_rank(&a_coords, &b_coords, sa.rows())?;

    let n = a.dim();
    let k = sa.rows();
    let ua = complete_to_unimodular(&sa);
    let ub = complete_to_unimodular(&sb);
    let mut block = IntMatrix::identity(n);
    for i in 0..k {
        for j in 0..k {
            block[(i, j)] = m[(i, j)].clone();
        }
    }
    // x = uaᵀ·c, and c ↦ ubᵀ·block·c
    let ua_t_inv = unimodular_inverse(&ua.transpose()).expect("completion is unimodular");
    let lin = ub.transpose().mul(&block).mul(&ua_t_inv);
    let a0 = &a.points()[0];
    let b0 = &b.points()[0];
    let shift = sb.transpose().mul_vec(&t);
    let lin_a0 = lin.mul_vec(a0);
    let translation: Vec<BigInt> = (0..n).map(|i| &b0[i] + &shift[i] - &lin_a0[i]).collect();
    let f = GroupHom::affine(lin, translation);
    debug_assert!(a.points().iter().all(|p| b.index_of(&f.apply(p)).is_some()));
    Some(f)
}

/// Coordinates of `u − u₀` in the basis given by the rows of `basis`.
fn frame_coords(a: &PointConfig, basis: &IntMatrix) -> Vec<Point> {
    let bt = basis.transpose();
    let base = &a.points()[0];
    a.points()
        .iter()
        .map(|u| {
            let d: Vec<BigInt> = u.iter().zip(base).map(|(x, y)| x - y).collect();
            solve_int(&bt, &d).expect("difference lies in the saturated lattice")
        })
        .collect()
}

/// Extends a saturated basis (rows) to a unimodular matrix whose first rows are
/// the given ones.
fn complete_to_unimodular(s: &IntMatrix) -> IntMatrix {
    let n = s.cols();
    let k = s.rows();
    // u·s·v = [I 0], so s = u⁻¹·(first k rows of v⁻¹)
    let (_, _, v) = snf(s);
    let v_inv = unimodular_inverse(&v).expect("snf transform is unimodular");
    let tail = v_inv.select_rows(&(k..n).collect::<Vec<_>>());
    let out = s.vstack(&tail);
    debug_assert!(out.is_unimodular());
    out
}

/// Search for `M ∈ GL_k(Z)` and `t ∈ Z^k` with `M·a + t = b` as sets, where both
/// configurations affinely span `Q^k`.
fn search_full_rank(a: &[Point], b: &[Point], k: usize) -> Option<(IntMatrix, Vec<BigInt>)> {
    if k == 0 {
        return Some((IntMatrix::identity(0), vec![]));
    }
    // pick an affine frame of a: a[0] and k points with independent differences
    let mut frame = Vec::new();
    let mut rows: Vec<Vec<BigRational>> = Vec::new();
    for (i, p) in a.iter().enumerate().skip(1) {
        let mut candidate = rows.clone();
        candidate.push(rat_vec(p));
        if RatMatrix::from_rows(k, candidate.clone()).rank() == candidate.len() {
            rows = candidate;
            frame.push(i);
            if frame.len() == k {
                break;
            }
        }
    }
    if frame.len() < k {
        return None;
    }
    // columns of p_mat are the frame differences (a[0] is the origin)
    let p_mat = RatMatrix::from_rows(k, rows).transpose();
    let p_inv = invert(&p_mat)?;
    let target: HashSet<&Point> = b.iter().collect();

    let mut chosen = Vec::with_capacity(k);
    for anchor in 0..b.len() {
        let mut used = vec![false; b.len()];
        used[anchor] = true;
        if let Some(found) = extend(a, b, &target, &p_inv, anchor, &mut used, &mut chosen, k) {
            return Some(found);
        }
    }
    None
}

#[allow(clippy::too_many_arguments)]
fn extend(
    a: &[Point],
    b: &[Point],
    target: &HashSet<&Point>,
    p_inv: &RatMatrix,
    anchor: usize,
    used: &mut [bool],
    chosen: &mut Vec<usize>,
    k: usize,
) -> Option<(IntMatrix, Vec<BigInt>)> {
    if chosen.len() == k {
        return check_candidate(a, b, target, p_inv, anchor, chosen, k);
    }
    for j in 0..b.len() {
        if used[j] {
            continue;
        }
        used[j] = true;
        chosen.push(j);
        let r = extend(a, b, target, p_inv, anchor, used, chosen, k);
        chosen.pop();
        used[j] = false;
        if r.is_some() {
            return r;
        }
    }
    None
}

fn check_candidate(
    a: &[Point],
    b: &[Point],
    target: &HashSet<&Point>,
    p_inv: &RatMatrix,
    anchor: usize,
    chosen: &[usize],
    k: usize,
) -> Option<(IntMatrix, Vec<BigInt>)> {
    let b0 = &b[anchor];
    let cols: Vec<Vec<BigRational>> = chosen
        .iter()
        .map(|&j| b[j].iter().zip(b0).map(|(x, y)| BigRational::from_integer(x - y)).collect())
        .collect();
    let q = RatMatrix::from_rows(k, cols).transpose();
    let m_rat = q.mul(p_inv);
    let mut m = IntMatrix::zeros(k, k);
    for i in 0..k {
        for j in 0..k {
            let x = &m_rat[(i, j)];
            if !x.is_integer() {
                return None;
            }
            m[(i, j)] = x.to_integer();
        }
    }
    if !m.is_unimodular() {
        return None;
    }
    // a[0] is the origin of a's coordinates, so t = b0
    let t = b0.clone();
    for p in a {
        let mut img = m.mul_vec(p);
        for (x, ti) in img.iter_mut().zip(&t) {
            *x += ti;
        }
        if !target.contains(&img) {
            return None;
        }
    }
    Some((m, t))
}

fn invert(m: &RatMatrix) -> Option<RatMatrix> {
    let n = m.rows();
    let mut aug = RatMatrix::zeros(n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            aug[(i, j)] = m[(i, j)].clone();
        }
        aug[(i, n + i)] = BigRational::one();
    }
    let (r, pivots) = aug.rref();
    if pivots.len() < n || pivots[n - 1] >= n {
        return None;
    }
    let mut inv = RatMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            inv[(i, j)] = r[(i, n + j)].clone();
        }
    }
    debug_assert!(inv.mul(m).row_vecs().iter().enumerate().all(|(i, row)| row
        .iter()
        .enumerate()
        .all(|(j, x)| if i == j { x.is_one() } else { x.is_zero() })));
    Some(inv)
}
