use num_complex::Complex64;

use super::ComplexMatrix;
use crate::error::{Error, Result};

/// Pivots smaller than this multiple of the largest entry of `A` are treated
/// as zero.
const PIVOT_REL_THRESHOLD: f64 = 1e-14;

/// Solves `A X = B`: forward substitution when `A` is lower triangular, LU
/// factorization with partial pivoting otherwise.
pub fn solve(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !a.is_square() {
        return Err(Error::Dimension(format!(
            "solve needs a square matrix, got {}×{}",
            a.rows(),
            a.cols()
        )));
    }
    if b.rows() != a.rows() {
        return Err(Error::Dimension(format!(
            "right-hand side has {} rows, matrix has {}",
            b.rows(),
            a.rows()
        )));
    }
    let n = a.rows();
    let m = b.cols();
    let scale = a.max_abs();
    let threshold = if scale > 0.0 { PIVOT_REL_THRESHOLD * scale } else { f64::MIN_POSITIVE };

    if a.is_lower_triangular() {
        return forward_substitution(a, b, threshold);
    }

    let mut lu: Vec<Complex64> = a.as_slice().to_vec();
    let mut x: Vec<Complex64> = b.as_slice().to_vec();

    for col in 0..n {
        let (pivot_row, pivot_mag) = (col..n)
            .map(|r| (r, lu[r * n + col].norm()))
            .fold((col, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        if pivot_mag <= threshold {
            return Err(Error::Singular {
                pivot: pivot_mag,
                column: col,
            });
        }
        if pivot_row != col {
            for j in 0..n {
                lu.swap(col * n + j, pivot_row * n + j);
            }
            for j in 0..m {
                x.swap(col * m + j, pivot_row * m + j);
            }
        }
        let pivot = lu[col * n + col];
        for r in col + 1..n {
            let factor = lu[r * n + col] / pivot;
            if factor == Complex64::new(0.0, 0.0) {
                continue;
            }
            lu[r * n + col] = factor;
            for j in col + 1..n {
                let u = lu[col * n + j];
                lu[r * n + j] -= factor * u;
            }
            for j in 0..m {
                let xv = x[col * m + j];
                x[r * m + j] -= factor * xv;
            }
        }
    }

    // back substitution on U
    for row in (0..n).rev() {
        let pivot = lu[row * n + row];
        for j in 0..m {
            let mut acc = x[row * m + j];
            for k in row + 1..n {
                acc -= lu[row * n + k] * x[k * m + j];
            }
            x[row * m + j] = acc / pivot;
        }
    }
    ComplexMatrix::from_row_major(n, m, x)
}

fn forward_substitution(a: &ComplexMatrix, b: &ComplexMatrix, threshold: f64) -> Result<ComplexMatrix> {
    let n = a.rows();
    let m = b.cols();
    if let Some((column, pivot)) = (0..n)
        .map(|i| (i, a[(i, i)].norm()))
        .find(|&(_, p)| p <= threshold)
    {
        return Err(Error::Singular { pivot, column });
    }
    let mut x: Vec<Complex64> = b.as_slice().to_vec();
    for row in 0..n {
        let pivot = a[(row, row)];
        for j in 0..m {
            let mut acc = x[row * m + j];
            for k in 0..row {
                acc -= a[(row, k)] * x[k * m + j];
            }
            x[row * m + j] = acc / pivot;
        }
    }
    ComplexMatrix::from_row_major(n, m, x)
}

/// `A⁻¹`, via [`solve`] against the identity.
pub fn inverse(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    solve(a, &ComplexMatrix::identity(a.rows()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_system_returns_rhs() {
        let b = ComplexMatrix::from_fn(3, 2, |i, j| Complex64::new(i as f64, j as f64 - 0.5));
        assert_eq!(solve(&ComplexMatrix::identity(3), &b).unwrap(), b);
    }

    #[test]
    fn triangular_inverse() {
        let a = ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[2.0, 1.0]]).unwrap();
        let inv = inverse(&a).unwrap();
        let expected = ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[-2.0, 1.0]]).unwrap();
        assert_eq!(inv, expected);
    }

    #[test]
    fn shift_resolvent_at_two() {
        // 2I − (nilpotent shift)
        let a = ComplexMatrix::from_real_rows(&[&[2.0, 0.0], &[-1.0, 2.0]]).unwrap();
        let inv = inverse(&a).unwrap();
        let expected = ComplexMatrix::from_real_rows(&[&[0.5, 0.0], &[0.25, 0.5]]).unwrap();
        assert!(inv.max_abs_diff(&expected).unwrap() < 1e-16);
    }

    #[test]
    fn needs_pivoting() {
        let a = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap();
        assert_eq!(inverse(&a).unwrap(), a);
    }

    #[test]
    fn singular_matrix_is_reported() {
        let a = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[2.0, 4.0]]).unwrap();
        match inverse(&a) {
            Err(Error::Singular { column, .. }) => assert_eq!(column, 1),
            other => panic!("expected singularity, got {other:?}"),
        }
    }

    #[test]
    fn lower_triangular_path() {
        let l = ComplexMatrix::from_fn(5, 5, |i, j| {
            if i >= j {
                Complex64::new(1.0 + i as f64 - 0.3 * j as f64, 0.2 * j as f64)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        let inv = inverse(&l).unwrap();
        assert!(inv.is_lower_triangular());
        let residual = (&l * &inv).max_abs_diff(&ComplexMatrix::identity(5)).unwrap();
        assert!(residual < 1e-14);

        let mut singular = l.clone();
        singular[(3, 3)] = Complex64::new(0.0, 0.0);
        assert!(matches!(inverse(&singular), Err(Error::Singular { column: 3, .. })));
    }

    #[test]
    fn shape_errors() {
        let a = ComplexMatrix::zeros(2, 3);
        assert!(matches!(inverse(&a), Err(Error::Dimension(_))));
        let sq = ComplexMatrix::identity(2);
        assert!(matches!(solve(&sq, &ComplexMatrix::identity(3)), Err(Error::Dimension(_))));
    }
}
