//! Hermite and Smith normal forms and the lattice operations built on them.
//!
//! Everything here uses the row convention: `hnf` returns `(h, u)` with
//! `u · m = h`, and lattices are spanned by matrix rows.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::int_matrix::IntMatrix;

/// Extended gcd `(g, x, y)` with `x·a + y·b = g` and `g ≥ 0`.
pub fn ext_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let (mut old_r, mut r) = (a.clone(), b.clone());
    let (mut old_s, mut s) = (BigInt::one(), BigInt::zero());
    let (mut old_t, mut t) = (BigInt::zero(), BigInt::one());
    while !r.is_zero() {
        let q = old_r.div_floor(&r);
        let nr = &old_r - &q * &r;
        old_r = std::mem::replace(&mut r, nr);
        let ns = &old_s - &q * &s;
        old_s = std::mem::replace(&mut s, ns);
        let nt = &old_t - &q * &t;
        old_t = std::mem::replace(&mut t, nt);
    }
    if old_r.is_negative() {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

/// Row-style Hermite normal form.
///
/// Returns `(h, u)` with `u` unimodular and `u · m = h`. `h` is in staircase
/// form with zero rows at the bottom, positive pivots, zeros below each pivot,
/// and entries above each pivot reduced into `[0, pivot)`.
pub fn hnf(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let rows = m.rows();
    let cols = m.cols();
    let mut h = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut pr = 0;
    for col in 0..cols {
        if pr == rows {
            break;
        }
        for i in pr + 1..rows {
            if h[(i, col)].is_zero() {
                continue;
            }
            let a = h[(pr, col)].clone();
            let b = h[(i, col)].clone();
            let (g, x, y) = ext_gcd(&a, &b);
            let z = -(&b / &g);
            let w = &a / &g;
            h.combine_rows(pr, i, &x, &y, &z, &w);
            u.combine_rows(pr, i, &x, &y, &z, &w);
        }
        if h[(pr, col)].is_zero() {
            continue;
        }
        if h[(pr, col)].is_negative() {
            h.negate_row(pr);
            u.negate_row(pr);
        }
        let pivot = h[(pr, col)].clone();
        for i in 0..pr {
            let q = h[(i, col)].div_floor(&pivot);
            if !q.is_zero() {
                let nq = -q;
                h.add_row_multiple(i, pr, &nq);
                u.add_row_multiple(i, pr, &nq);
            }
        }
        pr += 1;
    }
    (h, u)
}

/// Number of nonzero rows of a matrix already in echelon form.
fn echelon_rank(h: &IntMatrix) -> usize {
    (0..h.rows()).take_while(|&i| h.row(i).iter().any(|x| !x.is_zero())).count()
}

/// Smith normal form `(s, u, v)` with `u · m · v = s`, `u` and `v` unimodular,
/// `s` diagonal with nonnegative entries `d₁ | d₂ | …`.
pub fn snf(m: &IntMatrix) -> (IntMatrix, IntMatrix, IntMatrix) {
    let rows = m.rows();
    let cols = m.cols();
    let mut s = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    for t in 0..rows.min(cols) {
        loop {
            // smallest nonzero entry of the trailing block becomes the pivot
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if s[(i, j)].is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| s[(i, j)].abs() < s[(bi, bj)].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else {
                return finish_snf(s, u, v);
            };
            s.swap_rows(t, bi);
            u.swap_rows(t, bi);
            s.swap_cols(t, bj);
            v.swap_cols(t, bj);

            let mut clean = true;
            for i in t + 1..rows {
                if s[(i, t)].is_zero() {
                    continue;
                }
                let q = -(&s[(i, t)] / &s[(t, t)]);
                s.add_row_multiple(i, t, &q);
                u.add_row_multiple(i, t, &q);
                if !s[(i, t)].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                if s[(t, j)].is_zero() {
                    continue;
                }
                let q = -(&s[(t, j)] / &s[(t, t)]);
                s.add_col_multiple(j, t, &q);
                v.add_col_multiple(j, t, &q);
                if !s[(t, j)].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            let pivot = s[(t, t)].clone();
            let offender = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !s[(i, j)].is_multiple_of(&pivot)));
            match offender {
                Some(i) => {
                    let one = BigInt::one();
                    s.add_row_multiple(t, i, &one);
                    u.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }
        if s[(t, t)].is_negative() {
            s.negate_row(t);
            u.negate_row(t);
        }
    }
    finish_snf(s, u, v)
}

fn finish_snf(mut s: IntMatrix, mut u: IntMatrix, v: IntMatrix) -> (IntMatrix, IntMatrix, IntMatrix) {
    for t in 0..s.rows().min(s.cols()) {
        if s[(t, t)].is_negative() {
            s.negate_row(t);
            u.negate_row(t);
        }
    }
    (s, u, v)
}

/// Diagonal of the Smith normal form, including zeros, of length `min(rows, cols)`.
pub fn invariant_factors(m: &IntMatrix) -> Vec<BigInt> {
    let (s, _, _) = snf(m);
    (0..m.rows().min(m.cols())).map(|i| s[(i, i)].clone()).collect()
}

/// Basis (as rows) of the lattice `{x ∈ Z^cols : m · xᵀ = 0}`, in Hermite
/// normal form. The result is saturated and has `cols − rank(m)` rows.
pub fn kernel_basis_int(m: &IntMatrix) -> IntMatrix {
    let (h, u) = hnf(&m.transpose());
    let rank = echelon_rank(&h);
    let kernel = u.select_rows(&(rank..u.rows()).collect::<Vec<_>>());
    hnf(&kernel).0
}

/// Basis (as rows, Hermite normal form) of `span_Q(gens) ∩ Z^cols`.
pub fn saturate(gens: &IntMatrix) -> IntMatrix {
    // The double orthogonal complement of a lattice is its saturation.
    kernel_basis_int(&kernel_basis_int(gens))
}

/// HNF basis of the lattice spanned by the rows of `gens`, zero rows dropped.
pub fn lattice_basis(gens: &IntMatrix) -> IntMatrix {
    let (h, _) = hnf(gens);
    let rank = echelon_rank(&h);
    h.select_rows(&(0..rank).collect::<Vec<_>>())
}

/// Integer solution of `m · x = b`, if any exists.
pub fn solve_int(m: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(m.rows(), b.len(), "right-hand side length must equal row count");
    // u · mᵀ = h, so m · uᵀ = hᵀ; solve hᵀ · y = b and set x = uᵀ · y.
    let (h, u) = hnf(&m.transpose());
    let rank = echelon_rank(&h);
    let mut y = vec![BigInt::zero(); u.rows()];
    for j in 0..rank {
        let pc = (0..h.cols()).find(|&c| !h[(j, c)].is_zero()).expect("echelon row has a pivot");
        let mut rhs = b[pc].clone();
        for (jj, yj) in y.iter().enumerate().take(j) {
            rhs -= &h[(jj, pc)] * yj;
        }
        let (q, r) = rhs.div_rem(&h[(j, pc)]);
        if !r.is_zero() {
            return None;
        }
        y[j] = q;
    }
    let x = u.transpose().mul_vec(&y);
    if m.mul_vec(&x) == b {
        Some(x)
    } else {
        None
    }
}

/// Inverse of a unimodular matrix.
pub fn unimodular_inverse(m: &IntMatrix) -> Option<IntMatrix> {
    if !m.is_square() {
        return None;
    }
    let (h, u) = hnf(m);
    if h == IntMatrix::identity(m.rows()) {
        Some(u)
    } else {
        None
    }
}

/// True when the row lattice of `m` is saturated (equivalently the quotient
/// `Z^cols / rowspace` is torsion-free).
pub fn is_saturated(m: &IntMatrix) -> bool {
    invariant_factors(m).iter().all(|d| d.is_zero() || d.is_one())
}

/// True when `x ↦ m·x` maps `Z^cols` onto `Z^rows`.
pub fn is_surjective(m: &IntMatrix) -> bool {
    if m.rows() > m.cols() {
        return false;
    }
    invariant_factors(m).iter().all(One::is_one)
}

/// Row-lattice containment: every row of `a` lies in the Z-span of the rows of `b`.
pub fn lattice_contains(b: &IntMatrix, a: &IntMatrix) -> bool {
    let bt = b.transpose();
    (0..a.rows()).all(|i| solve_int(&bt, a.row(i)).is_some())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(cols: usize, rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_i64(cols, rows)
    }

    #[test]
    fn hnf_identity_is_fixed_point() {
        let id = IntMatrix::identity(3);
        let (h, u) = hnf(&id);
        assert_eq!(h, id);
        assert_eq!(u, id);
    }

    #[test]
    fn hnf_column_two_four() {
        let a = m(1, &[&[2], &[4]]);
        let (h, u) = hnf(&a);
        assert_eq!(h, m(1, &[&[2], &[0]]));
        assert_eq!(u.mul(&a), h);
        assert!(u.is_unimodular());
    }

    #[test]
    fn hnf_zero_matrix() {
        let z = IntMatrix::zeros(2, 3);
        let (h, u) = hnf(&z);
        assert_eq!(h, z);
        assert_eq!(u, IntMatrix::identity(2));
    }

    #[test]
    fn hnf_reduces_above_pivot() {
        let a = m(2, &[&[1, 5], &[0, 3]]);
        let (h, _) = hnf(&a);
        assert_eq!(h, m(2, &[&[1, 2], &[0, 3]]));
    }

    #[test]
    fn snf_examples() {
        assert_eq!(snf(&IntMatrix::identity(2)).0, IntMatrix::identity(2));
        let d = m(2, &[&[2, 0], &[0, 3]]);
        let (s, u, v) = snf(&d);
        assert_eq!(s, m(2, &[&[1, 0], &[0, 6]]));
        assert_eq!(u.mul(&d).mul(&v), s);
        assert_eq!(snf(&m(1, &[&[0]])).0, m(1, &[&[0]]));
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(kernel_basis_int(&m(2, &[&[2, -2]])), m(2, &[&[1, 1]]));
        assert_eq!(kernel_basis_int(&IntMatrix::identity(3)).rows(), 0);
        let k = kernel_basis_int(&m(3, &[&[1, 1, 1]]));
        assert_eq!(k.rows(), 2);
        for i in 0..2 {
            assert_eq!(k.row(i).iter().sum::<BigInt>(), BigInt::zero());
        }
        // unimodularly equivalent to {(1,-1,0),(0,1,-1)}: same lattice both ways
        let other = m(3, &[&[1, -1, 0], &[0, 1, -1]]);
        assert!(lattice_contains(&k, &other));
        assert!(lattice_contains(&other, &k));
    }

    #[test]
    fn saturate_examples() {
        assert_eq!(saturate(&m(2, &[&[2, 0]])), m(2, &[&[1, 0]]));
        assert_eq!(saturate(&IntMatrix::identity(2)), IntMatrix::identity(2));
        assert_eq!(saturate(&m(2, &[&[2, 2]])), m(2, &[&[1, 1]]));
    }

    #[test]
    fn solve_examples() {
        let b: Vec<BigInt> = vec![3.into(), (-7).into()];
        assert_eq!(solve_int(&IntMatrix::identity(2), &b), Some(b.clone()));
        assert_eq!(solve_int(&m(1, &[&[2]]), &[4.into()]), Some(vec![2.into()]));
        assert_eq!(solve_int(&m(1, &[&[2]]), &[3.into()]), None);
    }

    #[test]
    fn solve_inconsistent_system() {
        let a = m(1, &[&[1], &[1]]);
        assert_eq!(solve_int(&a, &[1.into(), 2.into()]), None);
    }

    #[test]
    fn empty_shapes() {
        let a = IntMatrix::zeros(0, 3);
        assert_eq!(kernel_basis_int(&a), IntMatrix::identity(3));
        assert_eq!(saturate(&a).rows(), 0);
        let b = IntMatrix::zeros(2, 0);
        assert_eq!(solve_int(&b, &[0.into(), 0.into()]), Some(vec![]));
        assert_eq!(solve_int(&b, &[1.into(), 0.into()]), None);
    }

    #[test]
    fn surjectivity() {
        assert!(is_surjective(&m(2, &[&[1, 1]])));
        assert!(!is_surjective(&m(2, &[&[2, 2]])));
        assert!(is_surjective(&IntMatrix::zeros(0, 4)));
    }
}
