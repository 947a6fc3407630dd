use super::{clear_denominators, Field, LinAlgError, Rat};
use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Dense rational matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct MatQ {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl MatQ {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        MatQ { rows, cols, data: vec![Rat::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rat::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Result<Self, LinAlgError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(LinAlgError::DimensionMismatch("ragged rows".into()));
        }
        Ok(MatQ { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Result<Self, LinAlgError> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Rat::from_integer(BigInt::from(x))).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rat {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rat) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Rat>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn mul_vec(&self, x: &[Rat]) -> Result<Vec<Rat>, LinAlgError> {
        if x.len() != self.cols {
            return Err(LinAlgError::DimensionMismatch(format!(
                "{} columns against a vector of length {}",
                self.cols,
                x.len()
            )));
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect())
    }

    pub fn transpose(&self) -> MatQ {
        let mut t = MatQ::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }
}

/// Fraction-free elimination on integer rows. Returns the rank and, for square
/// input, the determinant up to the sign of the row swaps performed.
fn bareiss(mut a: Vec<Vec<BigInt>>, cols: usize) -> (usize, BigInt, bool) {
    let rows = a.len();
    let mut prev = BigInt::one();
    let mut r = 0;
    let mut odd_swaps = false;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        if p != r {
            a.swap(p, r);
            odd_swaps = !odd_swaps;
        }
        let (top, rest) = a.split_at_mut(r + 1);
        let pivot_row = &top[r];
        for row in rest.iter_mut() {
            let f = row[c].clone();
            for j in c + 1..cols {
                let v = &pivot_row[c] * &row[j] - &f * &pivot_row[j];
                // exact: every entry is a minor of the input
                row[j] = v / &prev;
            }
            row[c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        r += 1;
    }
    (r, prev, odd_swaps)
}

/// Rank over Q, by fraction-free elimination after clearing row denominators.
pub fn rank_q(m: &MatQ) -> usize {
    let rows: Vec<Vec<BigInt>> = (0..m.rows).map(|i| clear_denominators(m.row(i))).collect();
    bareiss(rows, m.cols).0
}

/// Exact determinant of an integer matrix.
pub fn det_z(m: &[Vec<BigInt>]) -> Result<BigInt, LinAlgError> {
    let n = m.len();
    if m.iter().any(|r| r.len() != n) {
        return Err(LinAlgError::DimensionMismatch("determinant needs a square matrix".into()));
    }
    if n == 0 {
        return Ok(BigInt::one());
    }
    let (rank, last, odd) = bareiss(m.to_vec(), n);
    if rank < n {
        return Ok(BigInt::zero());
    }
    Ok(if odd { -last } else { last })
}

/// Unique solution of a nonsingular square system.
pub fn solve_q(m: &MatQ, b: &[Rat]) -> Result<Vec<Rat>, LinAlgError> {
    let n = m.rows;
    if m.cols != n || b.len() != n {
        return Err(LinAlgError::DimensionMismatch("solve needs a square system".into()));
    }
    let mut aug: Vec<Vec<Rat>> = (0..n)
        .map(|i| {
            let mut r = m.row(i).to_vec();
            r.push(b[i].clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug, n);
    if pivots.len() < n {
        return Err(LinAlgError::SingularMatrix);
    }
    Ok(aug.into_iter().map(|r| r[n].clone()).collect())
}

/// Reduced row echelon form over any field, in place, restricted to the first
/// `cols` columns for pivoting. Returns the pivot columns; the rows after the
/// last pivot are zero on those columns.
pub fn rref<F: Field>(a: &mut [Vec<F>], cols: usize) -> Vec<usize> {
    let rows = a.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].fis_zero()) else {
            continue;
        };
        a.swap(p, r);
        let inv = a[r][c].inv().expect("pivot is nonzero");
        for x in a[r].iter_mut() {
            *x = x.mul(&inv);
        }
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == r || row[c].fis_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row).skip(c) {
                if !p.fis_zero() {
                    *x = x.sub(&f.mul(p));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Rank over an arbitrary field by plain elimination.
pub fn rank_field<F: Field>(mut rows: Vec<Vec<F>>, cols: usize) -> usize {
    // forward elimination only; cheaper than a full rref
    let n = rows.len();
    let mut r = 0;
    for c in 0..cols {
        if r == n {
            break;
        }
        let Some(p) = (r..n).find(|&i| !rows[i][c].fis_zero()) else {
            continue;
        };
        rows.swap(p, r);
        let inv = rows[r][c].inv().expect("pivot is nonzero");
        let (top, rest) = rows.split_at_mut(r + 1);
        let pivot_row = &top[r];
        for row in rest.iter_mut() {
            if row[c].fis_zero() {
                continue;
            }
            let f = row[c].mul(&inv);
            for j in c..cols {
                if !pivot_row[j].fis_zero() {
                    row[j] = row[j].sub(&f.mul(&pivot_row[j]));
                }
            }
        }
        r += 1;
    }
    r
}

/// Basis of `{x : A x = 0}` for `A` given by rows with `cols` columns.
pub fn nullspace<F: Field>(rows: &[Vec<F>], cols: usize) -> Vec<Vec<F>> {
    let mut a = rows.to_vec();
    let pivots = rref(&mut a, cols);
    let mut out = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![F::fzero(); cols];
        v[free] = F::fone();
        for (i, &pc) in pivots.iter().enumerate() {
            v[pc] = a[i][free].neg();
        }
        out.push(v);
    }
    out
}

/// Continuant `D(k_1..k_r) = k_1 D(k_2..k_r) - D(k_3..k_r)` with `D() = 1`;
/// the determinant of the tridiagonal matrix with diagonal `ks` and -1 beside it.
pub fn tridiag_det(ks: &[i64]) -> Result<BigInt, LinAlgError> {
    if let Some(&bad) = ks.iter().find(|&&k| k < 2) {
        return Err(LinAlgError::InvalidChain(bad));
    }
    // evaluate from the right end: (D(k_{i+1}..), D(k_{i+2}..))
    let mut next = BigInt::one();
    let mut after = BigInt::zero();
    for &k in ks.iter().rev() {
        let cur = BigInt::from(k) * &next - &after;
        after = next;
        next = cur;
    }
    Ok(next)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::{rat, ratio, Fp61};

    fn big(rows: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    #[test]
    fn ranks_of_small_matrices() {
        assert_eq!(rank_q(&MatQ::identity(3)), 3);
        assert_eq!(rank_q(&MatQ::zeros(2, 2)), 0);
        assert_eq!(rank_q(&MatQ::from_i64(&[vec![5, -1], vec![-1, 2]]).unwrap()), 2);
        assert_eq!(rank_q(&MatQ::from_i64(&[vec![1, 2, 3], vec![2, 4, 6], vec![0, 0, 1]]).unwrap()), 2);
    }

    #[test]
    fn solves_two_by_two() {
        let m = MatQ::from_i64(&[vec![5, -1], vec![-1, 2]]).unwrap();
        assert_eq!(solve_q(&m, &[rat(1), rat(0)]).unwrap(), vec![ratio(2, 9), ratio(1, 9)]);
        let m = MatQ::from_i64(&[vec![4]]).unwrap();
        assert_eq!(solve_q(&m, &[rat(1)]).unwrap(), vec![ratio(1, 4)]);
        let sing = MatQ::from_i64(&[vec![1, 2], vec![2, 4]]).unwrap();
        assert_eq!(solve_q(&sing, &[rat(1), rat(0)]), Err(LinAlgError::SingularMatrix));
    }

    #[test]
    fn determinants() {
        assert_eq!(det_z(&big(&[vec![5, -1], vec![-1, 2]])).unwrap(), BigInt::from(9));
        let mut d = vec![vec![0i64; 10]; 10];
        for (i, row) in d.iter_mut().enumerate() {
            row[i] = if i < 9 { -1 } else { 1 };
        }
        assert_eq!(det_z(&big(&d)).unwrap(), BigInt::from(-1));
        // a swap is needed here
        assert_eq!(det_z(&big(&[vec![0, 1], vec![1, 0]])).unwrap(), BigInt::from(-1));
    }

    #[test]
    fn continuants() {
        assert_eq!(tridiag_det(&[5, 2]).unwrap(), BigInt::from(9));
        assert_eq!(tridiag_det(&[4]).unwrap(), BigInt::from(4));
        assert_eq!(tridiag_det(&[2, 2, 6]).unwrap(), BigInt::from(16));
        assert_eq!(tridiag_det(&[]).unwrap(), BigInt::from(1));
        assert_eq!(tridiag_det(&[3, 1]), Err(LinAlgError::InvalidChain(1)));
    }

    #[test]
    fn nullspace_and_modular_rank_agree() {
        let rows = vec![vec![rat(1), rat(2), rat(3)], vec![rat(2), rat(4), rat(6)]];
        let ns = nullspace(&rows, 3);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            for r in &rows {
                let s: Rat = r.iter().zip(v).map(|(a, b)| a * b).sum();
                assert!(s.is_zero());
            }
        }
        let modp: Vec<Vec<Fp61>> = vec![
            vec![Fp61::from_i64(1), Fp61::from_i64(2), Fp61::from_i64(3)],
            vec![Fp61::from_i64(2), Fp61::from_i64(4), Fp61::from_i64(6)],
        ];
        assert_eq!(rank_field(modp, 3), 1);
    }
}
