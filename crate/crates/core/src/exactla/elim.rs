use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::matrix::{RMatrix, Rational};
use crate::error::{Error, Result};

/// Clears denominators row by row. Returns the integer rows and the product of the
/// row multipliers, so that `det(m) = det(int_rows) / scale`.
fn integer_rows(m: &RMatrix) -> (Vec<Vec<BigInt>>, BigInt) {
    let mut scale = BigInt::one();
    let rows = (0..m.rows())
        .map(|i| {
            let row = m.row(i);
            let l = row
                .iter()
                .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            scale *= &l;
            row.iter()
                .map(|x| x.numer() * (&l / x.denom()))
                .collect()
        })
        .collect();
    (rows, scale)
}

/// Exact determinant by fraction-free (Bareiss) elimination.
///
/// Pivots are chosen within the current column by smallest bit length.
pub fn det(m: &RMatrix) -> Result<Rational> {
    if !m.is_square() {
        return Err(Error::dim(format!(
            "determinant of a non-square {}x{} matrix",
            m.rows(),
            m.cols()
        )));
    }
    let n = m.rows();
    if n == 0 {
        return Ok(Rational::one());
    }
    let (mut a, scale) = integer_rows(m);
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n {
        let pivot = (k..n)
            .filter(|&i| !a[i][k].is_zero())
            .min_by_key(|&i| a[i][k].bits());
        let Some(p) = pivot else {
            return Ok(Rational::zero());
        };
        if p != k {
            a.swap(p, k);
            negate = !negate;
        }
        let (head, tail) = a.split_at_mut(k + 1);
        let prow = &head[k];
        for row in tail.iter_mut() {
            for j in k + 1..n {
                let v = &row[j] * &prow[k] - &row[k] * &prow[j];
                row[j] = v / &prev;
            }
            row[k] = BigInt::zero();
        }
        prev = prow[k].clone();
    }
    let d = Rational::new(a[n - 1][n - 1].clone(), scale);
    Ok(if negate { -d } else { d })
}

/// Exact rank by fraction-free elimination with full pivoting on smallest bit length.
pub fn rank(m: &RMatrix) -> usize {
    let (mut a, _) = integer_rows(m);
    let (rows, cols) = m.shape();
    let mut col_idx: Vec<usize> = (0..cols).collect();
    let mut prev = BigInt::one();
    let mut r = 0;
    while r < rows && r < cols {
        let mut best: Option<(usize, usize, u64)> = None;
        for (i, row) in a.iter().enumerate().skip(r) {
            for (jj, &j) in col_idx.iter().enumerate().skip(r) {
                let x = &row[j];
                if !x.is_zero() {
                    let b = x.bits();
                    if best.is_none_or(|(_, _, bb)| b < bb) {
                        best = Some((i, jj, b));
                    }
                }
            }
        }
        let Some((pi, pj, _)) = best else { break };
        a.swap(r, pi);
        col_idx.swap(r, pj);
        let pc = col_idx[r];
        let (head, tail) = a.split_at_mut(r + 1);
        let prow = &head[r];
        for row in tail.iter_mut() {
            for &j in &col_idx[r + 1..] {
                let v = &row[j] * &prow[pc] - &row[pc] * &prow[j];
                row[j] = v / &prev;
            }
            row[pc] = BigInt::zero();
        }
        prev = prow[pc].clone();
        r += 1;
    }
    r
}

/// Reduced row echelon form and the pivot column of each nonzero row.
pub fn rref(m: &RMatrix) -> (RMatrix, Vec<usize>) {
    let (rows, cols) = m.shape();
    let mut a = m.row_vecs();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r][c..].iter_mut() {
            *x *= &inv;
        }
        let prow = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row[c..].iter_mut().zip(&prow[c..]) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let out = RMatrix::from_rows(a, cols).expect("rref keeps the shape");
    (out, pivots)
}

/// Basis of the right kernel `{v : M v = 0}` as the columns of a `cols x (cols - rank)` matrix.
///
/// One basis vector per free column of the reduced row echelon form, with a 1 in that position.
pub fn kernel_basis(m: &RMatrix) -> RMatrix {
    let (r, pivots) = rref(m);
    let n = m.cols();
    let mut is_pivot = vec![false; n];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let free: Vec<usize> = (0..n).filter(|&j| !is_pivot[j]).collect();
    let mut k = RMatrix::zeros(n, free.len());
    for (t, &f) in free.iter().enumerate() {
        k[(f, t)] = Rational::one();
        for (row, &p) in pivots.iter().enumerate() {
            k[(p, t)] = -r[(row, f)].clone();
        }
    }
    k
}

/// A full-row-rank `P` with `P M = 0` whose rows span the left kernel of `M`.
///
/// The representative is the reduced row echelon form of the left kernel, so it is deterministic.
pub fn coker_projection(m: &RMatrix) -> RMatrix {
    let left = kernel_basis(&m.transpose()).transpose();
    let (r, pivots) = rref(&left);
    r.block(0, 0, pivots.len(), r.cols())
}

/// Inverse of a square matrix; errors when singular.
pub fn inverse(m: &RMatrix) -> Result<RMatrix> {
    if !m.is_square() {
        return Err(Error::dim("inverse of a non-square matrix"));
    }
    let n = m.rows();
    let aug = RMatrix::hstack(n, &[m, &RMatrix::identity(n)])?;
    let (r, pivots) = rref(&aug);
    if pivots.len() < n || pivots.last().is_some_and(|&p| p != n - 1) {
        return Err(Error::DivisionByZero("matrix is singular".into()));
    }
    Ok(r.block(0, n, n, n))
}

/// Solves `A X = B`. Returns `None` when the system is inconsistent; when it is
/// underdetermined the free variables are set to zero.
pub fn solve(a: &RMatrix, b: &RMatrix) -> Result<Option<RMatrix>> {
    if a.rows() != b.rows() {
        return Err(Error::dim("solve: right-hand side row count differs"));
    }
    let n = a.cols();
    let aug = RMatrix::hstack(a.rows(), &[a, b])?;
    let (r, pivots) = rref(&aug);
    if pivots.iter().any(|&p| p >= n) {
        return Ok(None);
    }
    let mut x = RMatrix::zeros(n, b.cols());
    for (row, &p) in pivots.iter().enumerate() {
        for j in 0..b.cols() {
            x[(p, j)] = r[(row, n + j)].clone();
        }
    }
    Ok(Some(x))
}

/// True when square and of full rank.
pub fn is_invertible(m: &RMatrix) -> bool {
    m.is_square() && rank(m) == m.rows()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::matrix::{rat, ratio};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn laplace(m: &RMatrix) -> Rational {
        let n = m.rows();
        if n == 0 {
            return Rational::one();
        }
        let mut acc = Rational::zero();
        for j in 0..n {
            if m[(0, j)].is_zero() {
                continue;
            }
            let cols: Vec<usize> = (0..n).filter(|&c| c != j).collect();
            let rows: Vec<usize> = (1..n).collect();
            let minor = m.select_rows(&rows).select_columns(&cols);
            let term = &m[(0, j)] * laplace(&minor);
            if j % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        acc
    }

    fn random_matrix(rng: &mut ChaCha8Rng, r: usize, c: usize, b: i64) -> RMatrix {
        RMatrix::from_fn(r, c, |_, _| rat(rng.gen_range(-b..=b)))
    }

    #[test]
    fn det_small_cases() {
        assert_eq!(det(&RMatrix::identity(3)).unwrap(), rat(1));
        assert_eq!(det(&RMatrix::from_i64(&[&[0, 1], &[1, 0]])).unwrap(), rat(-1));
        assert_eq!(det(&RMatrix::zeros(0, 0)).unwrap(), rat(1));
        assert!(det(&RMatrix::zeros(2, 3)).is_err());
        let m = RMatrix::from_fn(2, 2, |i, j| ratio(1 + i as i64, 2 + j as i64));
        // 1/2*2/3 - 1/3*2/2 = 0
        assert_eq!(det(&m).unwrap(), rat(0));
    }

    #[test]
    fn det_matches_laplace_expansion() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let n = rng.gen_range(1..=4);
            let m = random_matrix(&mut rng, n, n, 3);
            assert_eq!(det(&m).unwrap(), laplace(&m), "{m}");
        }
        for _ in 0..50 {
            let n = rng.gen_range(1..=4);
            let m = RMatrix::from_fn(n, n, |_, _| ratio(rng.gen_range(-5..=5), rng.gen_range(1..=4)));
            assert_eq!(det(&m).unwrap(), laplace(&m), "{m}");
        }
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&RMatrix::zeros(2, 3)), 0);
        assert_eq!(rank(&RMatrix::identity(5)), 5);
        // Λ₃ pencil [[y,-z,0],[-x,0,z],[0,x,-y]] at (1,0,0)
        let m = RMatrix::from_i64(&[&[0, 0, 0], &[-1, 0, 0], &[0, 1, 0]]);
        assert_eq!(rank(&m), 2);
        assert_eq!(rank(&RMatrix::zeros(0, 4)), 0);
    }

    #[test]
    fn kernel_examples() {
        let k = kernel_basis(&RMatrix::from_i64(&[&[1, 0, 0]]));
        assert_eq!(k.shape(), (3, 2));
        assert_eq!(k, RMatrix::from_i64(&[&[0, 0], &[1, 0], &[0, 1]]));
        assert_eq!(kernel_basis(&RMatrix::identity(3)).shape(), (3, 0));
        let k = kernel_basis(&RMatrix::from_i64(&[&[1, 1], &[2, 2]]));
        assert_eq!(k, RMatrix::from_i64(&[&[-1], &[1]]));
    }

    #[test]
    fn coker_examples() {
        let p = coker_projection(&RMatrix::from_i64(&[&[1], &[0], &[0]]));
        assert_eq!(p, RMatrix::from_i64(&[&[0, 1, 0], &[0, 0, 1]]));
        assert_eq!(coker_projection(&RMatrix::identity(3)).shape(), (0, 3));
        let p = coker_projection(&RMatrix::from_i64(&[&[1], &[2]]));
        // proportional to (2, -1)
        assert_eq!(p, RMatrix::new(1, 2, vec![rat(1), ratio(-1, 2)]).unwrap());
    }

    #[test]
    fn rank_nullity_on_random_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let r = rng.gen_range(0..=5);
            let c = rng.gen_range(0..=5);
            // low-rank products to get nontrivial kernels
            let inner = rng.gen_range(0..=3);
            let m = &random_matrix(&mut rng, r, inner, 2) * &random_matrix(&mut rng, inner, c, 2);
            let rk = rank(&m);
            assert_eq!(rk, rref(&m).1.len());
            let k = kernel_basis(&m);
            assert_eq!(k.cols(), c - rk);
            assert!((&m * &k).is_zero());
            assert_eq!(rank(&k), c - rk);
            let p = coker_projection(&m);
            assert_eq!(p.rows(), r - rk);
            assert!((&p * &m).is_zero());
            assert_eq!(rank(&p), r - rk);
        }
    }

    #[test]
    fn inverse_and_solve() {
        let m = RMatrix::from_i64(&[&[2, 1], &[1, 1]]);
        let inv = inverse(&m).unwrap();
        assert_eq!(&m * &inv, RMatrix::identity(2));
        assert!(inverse(&RMatrix::from_i64(&[&[1, 1], &[1, 1]])).is_err());
        let b = RMatrix::from_i64(&[&[3], &[2]]);
        let x = solve(&m, &b).unwrap().unwrap();
        assert_eq!(&m * &x, b);
        let sing = RMatrix::from_i64(&[&[1, 1], &[1, 1]]);
        assert!(solve(&sing, &RMatrix::from_i64(&[&[1], &[2]])).unwrap().is_none());
    }
}
