//! Exact integer matrix algebra: Smith and Hermite normal forms, Bareiss
//! determinants, and rational inverses.
//!
//! All entries are arbitrary-precision integers. Pivot choices follow fixed
//! deterministic rules so decompositions are reproducible across runs: the
//! Smith reduction always picks the entry of smallest nonzero absolute value,
//! scanning rows before columns and breaking ties toward the lowest index.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, Signed, Zero};
use num::Integer;
use std::fmt;

use crate::error::{Error, Result};

/// Dense integer matrix, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        IntMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Self {
        IntMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.rows.min(self.cols))
            .map(|i| self.at(i, i).clone())
            .collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.at(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in mul");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = a * other.at(k, j);
                    let cur = out.at(i, j) + prod;
                    out.set(i, j, cur);
                }
            }
        }
        out
    }

    /// Matrix-vector product with the all-ones column: the vector of row sums.
    pub fn row_sums(&self) -> Vec<BigInt> {
        (0..self.rows)
            .map(|i| self.row(i).iter().sum())
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[target] -= q * row[source]
    fn row_submul(&mut self, target: usize, source: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let delta = q * self.at(source, j);
            let v = self.at(target, j) - delta;
            self.set(target, j, v);
        }
    }

    /// col[target] -= q * col[source]
    fn col_submul(&mut self, target: usize, source: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let delta = q * self.at(i, source);
            let v = self.at(i, target) - delta;
            self.set(i, target, v);
        }
    }

    /// row[target] += row[source]
    fn row_add(&mut self, target: usize, source: usize) {
        for j in 0..self.cols {
            let v = self.at(target, j) + self.at(source, j);
            self.set(target, j, v);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -self.at(i, j);
            self.set(i, j, v);
        }
    }

    /// Fraction-free Bareiss determinant. Panics on non-square input.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a.at(k, k).is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !a.at(i, k).is_zero()) else {
                    return BigInt::zero();
                };
                a.swap_rows(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = a.at(i, j) * a.at(k, k) - a.at(i, k) * a.at(k, j);
                    // exact by the Bareiss identity
                    a.set(i, j, &num / &prev);
                }
            }
            for i in k + 1..n {
                a.set(i, k, BigInt::zero());
            }
            prev = a.at(k, k).clone();
        }
        sign * a.at(n - 1, n - 1).clone()
    }

    pub fn is_unimodular(&self) -> bool {
        self.rows == self.cols && self.det().abs().is_one()
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// U * M * V = D with U, V unimodular and D diagonal with a divisor chain.
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SmithDecomposition {
    /// Nonnegative diagonal entries d_1 | d_2 | ... (zeros trail).
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        self.d.diagonal()
    }
}

/// Entry of smallest nonzero absolute value in the trailing submatrix, rows
/// scanned before columns, ties to the lowest index.
fn smith_pivot(a: &IntMatrix, k: usize) -> Option<(usize, usize)> {
    let mut best: Option<(BigInt, usize, usize)> = None;
    for i in k..a.rows() {
        for j in k..a.cols() {
            let v = a.at(i, j);
            if v.is_zero() {
                continue;
            }
            let abs = v.abs();
            match &best {
                Some((b, _, _)) if *b <= abs => {}
                _ => best = Some((abs, i, j)),
            }
        }
    }
    best.map(|(_, i, j)| (i, j))
}

/// Smith normal form over the integers.
pub fn smith_normal_form(m: &IntMatrix) -> SmithDecomposition {
    let mut a = m.clone();
    let mut u = IntMatrix::identity(m.rows());
    let mut v = IntMatrix::identity(m.cols());
    let r = m.rows().min(m.cols());

    for k in 0..r {
        'reduce: loop {
            let Some((pi, pj)) = smith_pivot(&a, k) else {
                break 'reduce;
            };
            a.swap_rows(k, pi);
            u.swap_rows(k, pi);
            a.swap_cols(k, pj);
            v.swap_cols(k, pj);

            let mut clean = true;
            for i in k + 1..a.rows() {
                if !a.at(i, k).is_zero() {
                    let q = a.at(i, k) / a.at(k, k);
                    a.row_submul(i, k, &q);
                    u.row_submul(i, k, &q);
                    if !a.at(i, k).is_zero() {
                        clean = false;
                    }
                }
            }
            if !clean {
                continue 'reduce;
            }
            for j in k + 1..a.cols() {
                if !a.at(k, j).is_zero() {
                    let q = a.at(k, j) / a.at(k, k);
                    a.col_submul(j, k, &q);
                    v.col_submul(j, k, &q);
                    if !a.at(k, j).is_zero() {
                        clean = false;
                    }
                }
            }
            if !clean {
                continue 'reduce;
            }
            // pivot divides the rest of the submatrix, or we fold the
            // offending row in and keep reducing
            let pivot = a.at(k, k).clone();
            let mut offender = None;
            'scan: for i in k + 1..a.rows() {
                for j in k + 1..a.cols() {
                    if !(a.at(i, j) % &pivot).is_zero() {
                        offender = Some(i);
                        break 'scan;
                    }
                }
            }
            match offender {
                Some(i) => {
                    a.row_add(k, i);
                    u.row_add(k, i);
                }
                None => break 'reduce,
            }
        }
        if a.at(k, k).is_negative() {
            a.negate_row(k);
            u.negate_row(k);
        }
    }

    SmithDecomposition { u, d: a, v }
}

/// U * M = H with U unimodular and H lower-triangular: pivots sit on the
/// right-aligned diagonal with positive sign, and every entry below a pivot
/// is reduced into [0, pivot).
#[derive(Debug)]
pub struct HermiteDecomposition {
    pub h: IntMatrix,
    pub u: IntMatrix,
}

/// Row echelon by unimodular row operations, pivoting columns right to left
/// into the bottom rows. Returns (H, U, rank); the top `rows - rank` rows of
/// H are zero.
pub(crate) fn echelon_lower(m: &IntMatrix) -> (IntMatrix, IntMatrix, usize) {
    let mut h = m.clone();
    let mut u = IntMatrix::identity(m.rows());
    // rows below `free` already hold pivots
    let mut free = m.rows();

    for j in (0..m.cols()).rev() {
        if free == 0 {
            break;
        }
        loop {
            let mut best: Option<(BigInt, usize)> = None;
            for i in 0..free {
                let v = h.at(i, j);
                if v.is_zero() {
                    continue;
                }
                let abs = v.abs();
                match &best {
                    Some((b, _)) if *b <= abs => {}
                    _ => best = Some((abs, i)),
                }
            }
            let Some((_, pi)) = best else {
                break;
            };
            h.swap_rows(pi, free - 1);
            u.swap_rows(pi, free - 1);
            let mut clean = true;
            for i in 0..free - 1 {
                if !h.at(i, j).is_zero() {
                    let q = h.at(i, j) / h.at(free - 1, j);
                    h.row_submul(i, free - 1, &q);
                    u.row_submul(i, free - 1, &q);
                    if !h.at(i, j).is_zero() {
                        clean = false;
                    }
                }
            }
            if clean {
                break;
            }
        }
        if h.at(free - 1, j).is_zero() {
            continue; // column carries no pivot among the unassigned rows
        }
        if h.at(free - 1, j).is_negative() {
            h.negate_row(free - 1);
            u.negate_row(free - 1);
        }
        // entries below the new pivot reduce into [0, pivot)
        let pivot = h.at(free - 1, j).clone();
        for i in free..m.rows() {
            let q = h.at(i, j).div_floor(&pivot);
            h.row_submul(i, free - 1, &q);
            u.row_submul(i, free - 1, &q);
        }
        free -= 1;
    }

    let rank = m.rows() - free;
    (h, u, rank)
}

/// Hermite normal form of a full-row-rank integer matrix.
pub fn hermite_normal_form(m: &IntMatrix) -> Result<HermiteDecomposition> {
    let (h, u, rank) = echelon_lower(m);
    if rank < m.rows() {
        return Err(Error::RankDeficient {
            rank,
            rows: m.rows(),
        });
    }
    Ok(HermiteDecomposition { h, u })
}

/// Square basis of the row lattice of `m`, which must have full column rank;
/// rows of the result are a lattice basis in lower-triangular form.
pub(crate) fn row_lattice_basis(m: &IntMatrix) -> Result<IntMatrix> {
    let (h, _, rank) = echelon_lower(m);
    if rank != m.cols() {
        return Err(Error::RankDeficient {
            rank,
            rows: m.cols(),
        });
    }
    let mut rows = Vec::with_capacity(rank);
    for i in m.rows() - rank..m.rows() {
        rows.push(h.row(i).to_vec());
    }
    Ok(IntMatrix::from_rows(rows))
}

/// Unimodular W with W * w = gcd(w) * e_last (column convention).
pub(crate) fn column_to_last_unit(w: &[BigInt]) -> IntMatrix {
    let col = IntMatrix::from_rows(w.iter().map(|x| vec![x.clone()]).collect());
    let (_, u, _) = echelon_lower(&col);
    u
}

/// Exact inverse over the rationals; None when the matrix is singular.
pub(crate) fn rational_inverse(m: &IntMatrix) -> Option<Vec<Vec<BigRational>>> {
    assert_eq!(m.rows(), m.cols(), "inverse of non-square matrix");
    let n = m.rows();
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| BigRational::from_integer(m.at(i, j).clone()))
                .collect()
        })
        .collect();
    let mut inv: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                })
                .collect()
        })
        .collect();

    for k in 0..n {
        let p = (k..n).find(|&i| !a[i][k].is_zero())?;
        a.swap(k, p);
        inv.swap(k, p);
        let pivot = a[k][k].clone();
        for j in 0..n {
            a[k][j] /= &pivot;
            inv[k][j] /= &pivot;
        }
        for i in 0..n {
            if i == k || a[i][k].is_zero() {
                continue;
            }
            let f = a[i][k].clone();
            for j in 0..n {
                let d = &f * &a[k][j];
                a[i][j] -= d;
                let d = &f * &inv[k][j];
                inv[i][j] -= d;
            }
        }
    }
    Some(inv)
}

/// det(m) together with the adjugate, so that m * adj = det * I.
pub(crate) fn det_and_adjugate(m: &IntMatrix) -> Option<(BigInt, IntMatrix)> {
    let det = m.det();
    if det.is_zero() {
        return None;
    }
    let inv = rational_inverse(m)?;
    let det_rat = BigRational::from_integer(det.clone());
    let mut adj = IntMatrix::zeros(m.rows(), m.cols());
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            let v = &inv[i][j] * &det_rat;
            debug_assert!(v.is_integer(), "adjugate entry not integral");
            adj.set(i, j, v.to_integer());
        }
    }
    Some((det, adj))
}
