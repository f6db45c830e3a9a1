//! Generator matrices over prime fields, in particular the constant-weight
//! code whose columns list the lines of F_p^r once each.

use crate::error::{Error, Result};

/// Dense matrix over F_p, entries reduced into [0, p).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FpMatrix {
    p: u64,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl FpMatrix {
    pub fn from_rows(p: u64, rows: Vec<Vec<u64>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        FpMatrix {
            p,
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().map(|x| x % p).collect(),
        }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// One representative per line of F_p^r: the vector whose first nonzero
/// coordinate (reading coordinate 0 first) equals 1.
fn line_representatives(p: u64, r: u32) -> Result<Vec<Vec<u64>>> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if r == 0 {
        return Err(Error::RangeViolated {
            name: "r",
            value: 0,
            range: "1..".into(),
        });
    }
    let total = p
        .checked_pow(r)
        .ok_or_else(|| Error::Overflow(format!("{p}^{r} exceeds u64")))?;
    let mut reps = Vec::new();
    for v in 1..total {
        let digits: Vec<u64> = (0..r)
            .scan(v, |rest, _| {
                let d = *rest % p;
                *rest /= p;
                Some(d)
            })
            .collect();
        let first_nonzero = digits.iter().find(|&&d| d != 0).copied();
        if first_nonzero == Some(1) {
            reps.push(digits);
        }
    }
    debug_assert_eq!(reps.len() as u64, (total - 1) / (p - 1));
    Ok(reps)
}

fn matrix_with_columns(p: u64, r: u32, columns: Vec<Vec<u64>>) -> FpMatrix {
    let rows = (0..r as usize)
        .map(|i| columns.iter().map(|c| c[i]).collect())
        .collect();
    FpMatrix::from_rows(p, rows)
}

/// Generator matrix whose columns are the line representatives of F_p^r in
/// ascending lexicographic order (coordinate 0 most significant). Every
/// nonzero codeword of the row space has weight p^(r-1).
pub fn simplex_code_generator(p: u64, r: u32) -> Result<FpMatrix> {
    let mut reps = line_representatives(p, r)?;
    reps.sort_unstable();
    Ok(matrix_with_columns(p, r, reps))
}

/// Same columns ordered by ascending numeric value with coordinate 0 as the
/// least significant digit; the layout the trinomial code families use.
pub(crate) fn simplex_code_generator_value_order(p: u64, r: u32) -> Result<FpMatrix> {
    let reps = line_representatives(p, r)?;
    Ok(matrix_with_columns(p, r, reps))
}
