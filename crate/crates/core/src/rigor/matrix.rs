//! Dense ball matrices: determinant enclosures and linear solves.

use thiserror::Error;

use super::BallReal;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("no pivot ball excluding zero in column {0}")]
    PivotContainsZero(usize),
    #[error("matrix is not square or sizes disagree")]
    Shape,
}

/// Determinant enclosure together with the elimination trace.
#[derive(Debug, Clone)]
pub struct DetResult {
    pub det: BallReal,
    /// Row chosen as pivot at each elimination step (original indices).
    pub pivot_rows: Vec<usize>,
}

fn check_square(m: &[Vec<BallReal>]) -> Result<usize, MatrixError> {
    let n = m.len();
    if m.iter().any(|r| r.len() != n) {
        return Err(MatrixError::Shape);
    }
    Ok(n)
}

/// Pick the row (from `rows`, restricted to candidates whose ball in column
/// `col` excludes zero) with the largest midpoint magnitude.
fn choose_pivot(a: &[Vec<BallReal>], rows: &[usize], col: usize) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (pos, &r) in rows.iter().enumerate() {
        let e = &a[r][col];
        if e.contains_zero() {
            continue;
        }
        let lo = e.abs_lower().log2();
        if best.map_or(true, |(_, b)| lo > b) {
            best = Some((pos, lo));
        }
    }
    best.map(|(p, _)| p)
}

/// Interval Gaussian elimination with magnitude pivoting.
///
/// The returned ball contains the determinant of every point matrix inside
/// the ball matrix `m`.
pub fn det_gauss(m: &[Vec<BallReal>]) -> Result<DetResult, MatrixError> {
    let n = check_square(m)?;
    let prec = m
        .iter()
        .flatten()
        .map(|x| x.prec())
        .max()
        .unwrap_or(64);
    let mut a: Vec<Vec<BallReal>> = m.to_vec();
    let mut rows: Vec<usize> = (0..n).collect();
    let mut det = BallReal::one(prec);
    let mut pivots = Vec::with_capacity(n);
    for col in 0..n {
        let pos = choose_pivot(&a, &rows, col).ok_or(MatrixError::PivotContainsZero(col))?;
        // sign of the permutation: moving rows[pos] to the front of `rows`
        if pos % 2 == 1 {
            det = -det;
        }
        let pr = rows.remove(pos);
        pivots.push(pr);
        let piv = a[pr][col].clone();
        det = det * &piv;
        for &r in &rows {
            let f = a[r][col].div(&piv).map_err(|_| MatrixError::PivotContainsZero(col))?;
            for c in (col + 1)..n {
                let t = &f * &a[pr][c];
                a[r][c] = &a[r][c] - &t;
            }
        }
    }
    Ok(DetResult {
        det,
        pivot_rows: pivots,
    })
}

/// Cofactor (Laplace) expansion along the first row; intended for `n <= 4`.
pub fn det_cofactor(m: &[Vec<BallReal>]) -> Result<BallReal, MatrixError> {
    let n = check_square(m)?;
    Ok(cofactor_rec(m, &(0..n).collect::<Vec<_>>(), 0))
}

fn cofactor_rec(m: &[Vec<BallReal>], cols: &[usize], row: usize) -> BallReal {
    let prec = m[0][0].prec();
    if cols.is_empty() {
        return BallReal::one(prec);
    }
    if cols.len() == 1 {
        return m[row][cols[0]].clone();
    }
    let mut acc = BallReal::zero(prec);
    for (i, &c) in cols.iter().enumerate() {
        let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let t = &m[row][c] * &cofactor_rec(m, &rest, row + 1);
        acc = if i % 2 == 0 { acc + t } else { acc - t };
    }
    acc
}

/// Determinant enclosure: cofactor expansion for `n <= 4`, elimination
/// otherwise.
pub fn det(m: &[Vec<BallReal>]) -> Result<DetResult, MatrixError> {
    let n = check_square(m)?;
    if n == 0 {
        return Ok(DetResult {
            det: BallReal::one(64),
            pivot_rows: vec![],
        });
    }
    if n <= 4 {
        return Ok(DetResult {
            det: det_cofactor(m)?,
            pivot_rows: (0..n).collect(),
        });
    }
    det_gauss(m)
}

/// Solve `m x = b` by interval elimination; every point system inside the
/// balls has its solution inside the returned enclosure.
pub fn solve(m: &[Vec<BallReal>], b: &[BallReal]) -> Result<Vec<BallReal>, MatrixError> {
    let n = check_square(m)?;
    if b.len() != n {
        return Err(MatrixError::Shape);
    }
    let mut a: Vec<Vec<BallReal>> = m
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let mut rows: Vec<usize> = (0..n).collect();
    let mut order = Vec::with_capacity(n);
    for col in 0..n {
        let pos = choose_pivot(&a, &rows, col).ok_or(MatrixError::PivotContainsZero(col))?;
        let pr = rows.remove(pos);
        order.push(pr);
        let piv = a[pr][col].clone();
        for &r in &rows {
            let f = a[r][col].div(&piv).map_err(|_| MatrixError::PivotContainsZero(col))?;
            for c in (col + 1)..=n {
                let t = &f * &a[pr][c];
                a[r][c] = &a[r][c] - &t;
            }
        }
    }
    let prec = a[order[0]][0].prec();
    let mut x = vec![BallReal::zero(prec); n];
    for col in (0..n).rev() {
        let pr = order[col];
        let mut s = a[pr][n].clone();
        for c in (col + 1)..n {
            s = &s - &(&a[pr][c] * &x[c]);
        }
        x[col] = s.div(&a[pr][col]).map_err(|_| MatrixError::PivotContainsZero(col))?;
    }
    Ok(x)
}

/// Matrix-vector product.
pub fn mul_vec(m: &[Vec<BallReal>], v: &[BallReal]) -> Vec<BallReal> {
    m.iter()
        .map(|row| {
            let mut acc = BallReal::zero(v.first().map_or(64, |x| x.prec()));
            for (a, b) in row.iter().zip(v) {
                acc = &acc + &(a * b);
            }
            acc
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::super::Mag;
    use super::*;

    fn mat(v: &[&[i64]]) -> Vec<Vec<BallReal>> {
        v.iter()
            .map(|r| r.iter().map(|&x| BallReal::from_int(x, 128)).collect())
            .collect()
    }

    #[test]
    fn identity_det() {
        let m = mat(&[&[1, 0, 0, 0, 0], &[0, 1, 0, 0, 0], &[0, 0, 1, 0, 0], &[0, 0, 0, 1, 0], &[0, 0, 0, 0, 1]]);
        let d = det_gauss(&m).unwrap();
        assert!(d.det.contains_int(1));
    }

    #[test]
    fn diagonal_with_radius() {
        let r = Mag::from_f64_up(0.1);
        let m = vec![
            vec![BallReal::from_int(2, 64).add_error(r), BallReal::zero(64)],
            vec![BallReal::zero(64), BallReal::from_int(3, 64).add_error(r)],
        ];
        let d = det(&m).unwrap().det;
        assert!(d.lower().to_f64() >= 1.9 * 2.9 - 1e-8);
        assert!(d.upper().to_f64() <= 2.1 * 3.1 + 1e-8);
    }

    #[test]
    fn permuted_rows_sign() {
        let m = mat(&[&[0, 1, 2, 0, 0], &[3, 0, 1, 0, 0], &[1, 1, 1, 0, 0], &[0, 0, 0, 2, 1], &[0, 0, 0, 1, 1]]);
        // det of the 3x3 block: 0(0-1) - 1(3-1) + 2(3-0) = 4; 2x2 block: 1
        let d = det_gauss(&m).unwrap();
        assert!(d.det.contains_int(4), "{:?}", d.det);
    }

    #[test]
    fn solve_small() {
        let m = mat(&[&[2, 1], &[1, 3]]);
        let b = vec![BallReal::from_int(3, 128), BallReal::from_int(5, 128)];
        let x = solve(&m, &b).unwrap();
        // x = (4/5, 7/5)
        assert!(x[0].contains_rational(&num_rational::BigRational::new(4.into(), 5.into())));
        assert!(x[1].contains_rational(&num_rational::BigRational::new(7.into(), 5.into())));
    }

    #[test]
    fn singular_contains_zero() {
        let m = mat(&[&[1, 2], &[2, 4]]);
        assert!(det(&m).unwrap().det.contains_zero());
    }
}
