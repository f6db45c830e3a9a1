//! Lattice simplices and exact Ehrhart counting.
//!
//! Counting lattice points in a dilate never scans a bounding box. The
//! barycentric inequalities are projected variable by variable once per
//! simplex; counting a dilate then walks the nested integer intervals and
//! sums the innermost interval lengths directly. Arithmetic runs in i128
//! with checked operations and falls back to big integers on any overflow.

use num::bigint::BigInt;
use num::traits::{Signed, ToPrimitive, Zero};
use num::Integer;
use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::linalg::{det_and_adjugate, IntMatrix};
use crate::polynomial::HStarPolynomial;

/// Full-dimensional lattice simplex: dim + 1 vertices in Z^dim.
#[derive(Clone, Debug)]
pub struct LatticeSimplex {
    dim: usize,
    vertices: Vec<Vec<i64>>,
    /// adjugate of the homogeneous vertex matrix times the sign of its
    /// determinant; (z, t) lies in t * simplex iff (z, t) * adj_signed >= 0
    adj_signed: IntMatrix,
    volume: BigInt,
}

impl PartialEq for LatticeSimplex {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices
    }
}

impl Eq for LatticeSimplex {}

impl LatticeSimplex {
    pub fn new(vertices: Vec<Vec<i64>>) -> Result<Self> {
        if vertices.len() < 2 {
            return Err(Error::DimensionMismatch(
                "a simplex needs at least two vertices".into(),
            ));
        }
        let dim = vertices.len() - 1;
        if let Some(bad) = vertices.iter().find(|v| v.len() != dim) {
            return Err(Error::DimensionMismatch(format!(
                "vertex has {} coordinates, expected {dim}",
                bad.len()
            )));
        }
        let homog = homogeneous(&vertices);
        let Some((det, adj)) = det_and_adjugate(&homog) else {
            return Err(Error::Degenerate);
        };
        let mut adj_signed = adj;
        if det.is_negative() {
            for i in 0..adj_signed.rows() {
                for j in 0..adj_signed.cols() {
                    let v = -adj_signed.at(i, j);
                    adj_signed.set(i, j, v);
                }
            }
        }
        Ok(LatticeSimplex {
            dim,
            vertices,
            adj_signed,
            volume: det.abs(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vec<i64>] {
        &self.vertices
    }

    /// Rows (v_i, 1), one per vertex.
    pub fn homogeneous_matrix(&self) -> IntMatrix {
        homogeneous(&self.vertices)
    }

    /// Absolute determinant of the homogeneous vertex matrix.
    pub fn normalized_volume(&self) -> &BigInt {
        &self.volume
    }

    /// Membership of an integer point in the t-th dilate.
    pub fn contains_dilated(&self, point: &[i64], t: u64) -> bool {
        assert_eq!(point.len(), self.dim);
        let n = self.dim + 1;
        (0..n).all(|i| {
            let mut acc = BigInt::from(t) * self.adj_signed.at(self.dim, i);
            for (j, &z) in point.iter().enumerate() {
                acc += BigInt::from(z) * self.adj_signed.at(j, i);
            }
            !acc.is_negative()
        })
    }

    /// Number of lattice points in the t-th dilate.
    pub fn count_lattice_points(&self, t: u64) -> u128 {
        let cascade = self.build_cascade();
        cascade.count(t)
    }

    /// h*-coefficients from lattice point counts of the first dim dilates.
    pub fn hstar_by_counting(&self) -> Result<HStarPolynomial> {
        let d = self.dim;
        let cascade = self.build_cascade();
        let counts: Vec<BigInt> = (0..=d as u64)
            .map(|t| BigInt::from(cascade.count(t)))
            .collect();
        let mut coeffs = Vec::with_capacity(d + 1);
        for i in 0..=d {
            let mut h = BigInt::zero();
            for j in 0..=i {
                let term = binomial(d as u64 + 1, (i - j) as u64) * &counts[j];
                if (i - j) % 2 == 0 {
                    h += term;
                } else {
                    h -= term;
                }
            }
            if h.is_negative() {
                return Err(Error::NegativeCoefficient {
                    index: i,
                    value: h.to_string(),
                });
            }
            let Some(c) = h.to_u64() else {
                return Err(Error::Overflow(format!(
                    "h*-coefficient {h} at index {i} exceeds u64"
                )));
            };
            coeffs.push(c);
        }
        Ok(HStarPolynomial::new(coeffs))
    }

    fn build_cascade(&self) -> Cascade {
        let d = self.dim;
        // one inequality per adjugate column, variables (z_1..z_d, t)
        let mut top: Vec<Vec<BigInt>> = Vec::with_capacity(d + 1);
        for i in 0..=d {
            let row: Vec<BigInt> = (0..=d).map(|j| self.adj_signed.at(j, i).clone()).collect();
            top.push(row);
        }
        let mut levels = vec![normalize_rows(top)];
        for width in (2..=d).rev() {
            let next = eliminate_last_z(levels.last().unwrap());
            levels.push(next);
            debug_assert_eq!(levels.last().unwrap().first().map(Vec::len), Some(width));
        }
        levels.reverse();
        Cascade { levels }
    }
}

fn homogeneous(vertices: &[Vec<i64>]) -> IntMatrix {
    let rows: Vec<Vec<BigInt>> = vertices
        .iter()
        .map(|v| {
            v.iter()
                .map(|&x| BigInt::from(x))
                .chain(std::iter::once(BigInt::from(1)))
                .collect()
        })
        .collect();
    IntMatrix::from_rows(rows)
}

pub(crate) fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::from(1);
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Divide each row by the gcd of its entries, drop rows that hold for every
/// t >= 0 regardless of z, and deduplicate.
fn normalize_rows(rows: Vec<Vec<BigInt>>) -> Vec<Vec<BigInt>> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for mut row in rows {
        let mut g = BigInt::zero();
        for c in &row {
            g = g.gcd(c);
        }
        if g.is_zero() {
            continue;
        }
        for c in &mut row {
            *c = &*c / &g;
        }
        let width = row.len();
        if row[..width - 1].iter().all(Zero::is_zero) && !row[width - 1].is_negative() {
            continue;
        }
        if seen.insert(row.clone()) {
            out.push(row);
        }
    }
    out
}

/// Project out the last z variable (t stays the final coordinate).
fn eliminate_last_z(rows: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let width = rows[0].len();
    let e = width - 2;
    let drop_e = |row: &[BigInt]| -> Vec<BigInt> {
        row.iter()
            .enumerate()
            .filter(|&(j, _)| j != e)
            .map(|(_, c)| c.clone())
            .collect()
    };
    let mut out = Vec::new();
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    for row in rows {
        match row[e].sign() {
            num::bigint::Sign::Plus => pos.push(row),
            num::bigint::Sign::Minus => neg.push(row),
            num::bigint::Sign::NoSign => out.push(drop_e(row)),
        }
    }
    for p in &pos {
        for n in &neg {
            let a = &p[e];
            let b = -&n[e];
            let combined: Vec<BigInt> = (0..width)
                .filter(|&j| j != e)
                .map(|j| &b * &p[j] + a * &n[j])
                .collect();
            out.push(combined);
        }
    }
    normalize_rows(out)
}

/// Projections of the barycentric system: levels[k-1] constrains
/// (z_1..z_k, t), and every original inequality is enforced at the level of
/// its last nonzero z coefficient.
struct Cascade {
    levels: Vec<Vec<Vec<BigInt>>>,
}

impl Cascade {
    fn count(&self, t: u64) -> u128 {
        if let Some(small) = self.to_i128() {
            if let Some(n) = count_fixed_i128(&small, t as i128) {
                return n;
            }
        }
        count_fixed_big(&self.levels, &BigInt::from(t))
            .to_u128()
            .expect("lattice point count exceeds u128")
    }

    fn to_i128(&self) -> Option<Vec<Vec<Vec<i128>>>> {
        self.levels
            .iter()
            .map(|rows| {
                rows.iter()
                    .map(|row| row.iter().map(BigInt::to_i128).collect())
                    .collect()
            })
            .collect()
    }
}

fn fdiv_i128(a: i128, b: i128) -> i128 {
    debug_assert!(b > 0);
    a.div_euclid(b)
}

fn cdiv_i128(a: i128, b: i128) -> Option<i128> {
    debug_assert!(b > 0);
    Some(a.checked_add(b - 1)?.div_euclid(b))
}

/// None signals i128 overflow; the caller reruns in big integers.
fn count_fixed_i128(levels: &[Vec<Vec<i128>>], t: i128) -> Option<u128> {
    for row in &levels[0] {
        if row[0] == 0 && row[1].checked_mul(t)? < 0 {
            return Some(0);
        }
    }
    fn rec(levels: &[Vec<Vec<i128>>], k: usize, prefix: &mut Vec<i128>, t: i128) -> Option<u128> {
        let dim = levels.len();
        let mut lo: Option<i128> = None;
        let mut hi: Option<i128> = None;
        for row in &levels[k - 1] {
            let a = row[k - 1];
            if a == 0 {
                continue;
            }
            let mut rest = row[k].checked_mul(t)?;
            for j in 0..k - 1 {
                rest = rest.checked_add(row[j].checked_mul(prefix[j])?)?;
            }
            if a > 0 {
                let bound = cdiv_i128(rest.checked_neg()?, a)?;
                lo = Some(lo.map_or(bound, |x| x.max(bound)));
            } else {
                let bound = fdiv_i128(rest, a.checked_neg()?);
                hi = Some(hi.map_or(bound, |x| x.min(bound)));
            }
        }
        let lo = lo.expect("dilate unbounded below");
        let hi = hi.expect("dilate unbounded above");
        if hi < lo {
            return Some(0);
        }
        if k == dim {
            return Some((hi - lo + 1) as u128);
        }
        let mut total: u128 = 0;
        prefix.push(lo);
        for z in lo..=hi {
            *prefix.last_mut().unwrap() = z;
            total += rec(levels, k + 1, prefix, t)?;
        }
        prefix.pop();
        Some(total)
    }
    rec(levels, 1, &mut Vec::new(), t)
}

fn count_fixed_big(levels: &[Vec<Vec<BigInt>>], t: &BigInt) -> BigInt {
    for row in &levels[0] {
        if row[0].is_zero() && (&row[1] * t).is_negative() {
            return BigInt::zero();
        }
    }
    fn rec(levels: &[Vec<Vec<BigInt>>], k: usize, prefix: &mut Vec<BigInt>, t: &BigInt) -> BigInt {
        let dim = levels.len();
        let mut lo: Option<BigInt> = None;
        let mut hi: Option<BigInt> = None;
        for row in &levels[k - 1] {
            let a = &row[k - 1];
            if a.is_zero() {
                continue;
            }
            let mut rest = &row[k] * t;
            for j in 0..k - 1 {
                rest += &row[j] * &prefix[j];
            }
            if a.is_positive() {
                // ceil(-rest / a)
                let bound = -rest.div_floor(a);
                lo = Some(lo.map_or(bound.clone(), |x| x.max(bound)));
            } else {
                let bound = rest.div_floor(&-a);
                hi = Some(hi.map_or(bound.clone(), |x| x.min(bound)));
            }
        }
        let lo = lo.expect("dilate unbounded below");
        let hi = hi.expect("dilate unbounded above");
        if hi < lo {
            return BigInt::zero();
        }
        if k == dim {
            return hi - lo + 1;
        }
        let mut total = BigInt::zero();
        let mut z = lo.clone();
        prefix.push(lo);
        while z <= hi {
            *prefix.last_mut().unwrap() = z.clone();
            total += rec(levels, k + 1, prefix, t);
            z += 1;
        }
        prefix.pop();
        total
    }
    rec(levels, 1, &mut Vec::new(), t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn simplex(vertices: &[&[i64]]) -> LatticeSimplex {
        LatticeSimplex::new(vertices.iter().map(|v| v.to_vec()).collect()).unwrap()
    }

    fn count_by_box_scan(s: &LatticeSimplex, t: u64) -> u128 {
        let d = s.dim();
        let mut lo = vec![i64::MAX; d];
        let mut hi = vec![i64::MIN; d];
        for v in s.vertices() {
            for c in 0..d {
                lo[c] = lo[c].min(v[c] * t as i64);
                hi[c] = hi[c].max(v[c] * t as i64);
            }
        }
        let mut z: Vec<i64> = lo.clone();
        let mut count = 0u128;
        loop {
            if s.contains_dilated(&z, t) {
                count += 1;
            }
            let mut c = 0;
            loop {
                if c == d {
                    return count;
                }
                z[c] += 1;
                if z[c] <= hi[c] {
                    break;
                }
                z[c] = lo[c];
                c += 1;
            }
        }
    }

    #[test]
    fn unit_triangle_counts() {
        let s = simplex(&[&[0, 0], &[1, 0], &[0, 1]]);
        assert_eq!(s.count_lattice_points(0), 1);
        assert_eq!(s.count_lattice_points(1), 3);
        assert_eq!(s.count_lattice_points(2), 6);
        assert_eq!(*s.normalized_volume(), BigInt::from(1));
        assert_eq!(s.hstar_by_counting().unwrap().coeffs(), &[1]);
    }

    #[test]
    fn thrice_unit_triangle() {
        let s = simplex(&[&[0, 0], &[3, 0], &[0, 3]]);
        assert_eq!(s.count_lattice_points(1), 10);
        let h = s.hstar_by_counting().unwrap();
        assert_eq!(h.coeffs(), &[1, 7, 1]);
        assert_eq!(h.normalized_volume(), 9);
        assert_eq!(h.to_string(), "1 + 7t + t^2");
    }

    #[test]
    fn segment_of_length_three() {
        let s = simplex(&[&[0], &[3]]);
        assert_eq!(s.count_lattice_points(1), 4);
        assert_eq!(s.hstar_by_counting().unwrap().coeffs(), &[1, 2]);
    }

    #[test]
    fn skewed_tetrahedron_concentrates_at_height_two() {
        let s = simplex(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[1, 1, 2]]);
        let h = s.hstar_by_counting().unwrap();
        assert_eq!(h.coeffs(), &[1, 0, 1]);
        assert_eq!(*s.normalized_volume(), BigInt::from(2));
    }

    #[test]
    fn translation_invariance() {
        let a = simplex(&[&[0, 0], &[3, 0], &[0, 3]]);
        let b = simplex(&[&[-5, 7], &[-2, 7], &[-5, 10]]);
        assert_eq!(
            a.hstar_by_counting().unwrap(),
            b.hstar_by_counting().unwrap()
        );
    }

    #[test]
    fn degenerate_rejected() {
        let r = LatticeSimplex::new(vec![vec![0, 0], vec![1, 0], vec![2, 0]]);
        assert!(matches!(r, Err(Error::Degenerate)));
    }

    #[test]
    fn ragged_vertex_rejected() {
        let r = LatticeSimplex::new(vec![vec![0, 0], vec![1], vec![0, 1]]);
        assert!(matches!(r, Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn counts_match_box_scan_on_reflex_example() {
        // contains points with negative coordinates
        let s = simplex(&[&[-2, 1], &[3, -1], &[0, 2]]);
        for t in 0..=3 {
            assert_eq!(s.count_lattice_points(t), count_by_box_scan(&s, t));
        }
    }

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(4, 2), BigInt::from(6));
        assert_eq!(binomial(6, 0), BigInt::from(1));
        assert_eq!(binomial(6, 6), BigInt::from(1));
        assert_eq!(binomial(3, 5), BigInt::from(0));
        assert_eq!(binomial(50, 25), "126410606437752".parse().unwrap());
    }

    fn arb_simplex(dim: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
        proptest::collection::vec(
            proptest::collection::vec(-3i64..=3, dim),
            dim + 1,
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn hstar_sums_to_volume(verts in arb_simplex(3)) {
            let Ok(s) = LatticeSimplex::new(verts) else {
                return Ok(());
            };
            let h = s.hstar_by_counting().unwrap();
            prop_assert_eq!(BigInt::from(h.normalized_volume()), s.normalized_volume().clone());
            prop_assert_eq!(h.coeff(0), 1);
        }

        #[test]
        fn cascade_count_agrees_with_box_scan(verts in arb_simplex(2), t in 0u64..=3) {
            let Ok(s) = LatticeSimplex::new(verts) else {
                return Ok(());
            };
            prop_assert_eq!(s.count_lattice_points(t), count_by_box_scan(&s, t));
        }

        #[test]
        fn cascade_count_agrees_in_dim_three(verts in arb_simplex(3), t in 0u64..=2) {
            let Ok(s) = LatticeSimplex::new(verts) else {
                return Ok(());
            };
            prop_assert_eq!(s.count_lattice_points(t), count_by_box_scan(&s, t));
        }
    }
}
