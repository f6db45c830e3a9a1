//! Finite abelian subgroups of (Q/Z)^n and the two-way correspondence with
//! lattice simplices.
//!
//! A full-dimensional lattice simplex with vertex rows v_0..v_d determines
//! the group of residues x in [0,1)^{d+1} whose weighted vertex sum
//! sum x_i (v_i, 1) is integral. Heights (coordinate sums) of such residues
//! are automatically integers, the group order equals the normalized volume,
//! and the h*-coefficient at i counts elements of height i. Conversely a
//! finite subgroup whose elements all have integer coordinate sums arises
//! this way, and the simplex is recovered here so that the round trip
//! reproduces the subgroup with the same coordinate order.

use num::bigint::BigInt;
use num::traits::{ToPrimitive, Zero};
use num::Integer;

use crate::canonical;
use crate::error::{Error, Result};
use crate::linalg::{
    column_to_last_unit, rational_inverse, row_lattice_basis, smith_normal_form, IntMatrix,
};
use crate::polynomial::HStarPolynomial;
use crate::simplex::LatticeSimplex;

/// Default cap on group order before construction refuses to enumerate.
pub const DEFAULT_ORDER_CAP: u64 = 1_000_000;

/// Element of (Q/Z)^n with a fixed denominator: coordinates are numerators
/// in [0, den).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct GroupElement {
    den: u64,
    coords: Vec<u64>,
}

impl GroupElement {
    pub fn new(den: u64, coords: Vec<u64>) -> Self {
        assert!(den >= 1, "denominator must be positive");
        let coords = coords.into_iter().map(|c| c % den).collect();
        GroupElement { den, coords }
    }

    pub fn zero(den: u64, len: usize) -> Self {
        GroupElement {
            den,
            coords: vec![0; len],
        }
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    pub fn coords(&self) -> &[u64] {
        &self.coords
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    /// Order in (Q/Z)^n.
    pub fn order(&self) -> u64 {
        let g = self.coords.iter().fold(self.den, |acc, &c| acc.gcd(&c));
        self.den / g
    }

    /// Coordinate sum when it is an integer.
    pub fn height(&self) -> Option<u64> {
        let sum: u128 = self.coords.iter().map(|&c| c as u128).sum();
        if sum % self.den as u128 == 0 {
            Some((sum / self.den as u128) as u64)
        } else {
            None
        }
    }

    /// Number of nonzero coordinates.
    pub fn support(&self) -> usize {
        self.coords.iter().filter(|&&c| c != 0).count()
    }

    pub fn negate(&self) -> Self {
        GroupElement {
            den: self.den,
            coords: self
                .coords
                .iter()
                .map(|&c| if c == 0 { 0 } else { self.den - c })
                .collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.den, other.den, "denominator mismatch");
        assert_eq!(self.coords.len(), other.coords.len(), "length mismatch");
        GroupElement {
            den: self.den,
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(&a, &b)| (a + b) % self.den)
                .collect(),
        }
    }

    pub fn multiple(&self, k: u64) -> Self {
        let k = k % self.den;
        GroupElement {
            den: self.den,
            coords: self
                .coords
                .iter()
                .map(|&c| ((c as u128 * k as u128) % self.den as u128) as u64)
                .collect(),
        }
    }

    /// Same residue expressed over a denominator that a multiple of the
    /// element's order divides; None when the coordinates do not rescale
    /// integrally.
    fn rescale(&self, den: u64) -> Option<Self> {
        let coords = self
            .coords
            .iter()
            .map(|&c| {
                let num = c as u128 * den as u128;
                if num % self.den as u128 == 0 {
                    Some((num / self.den as u128) as u64)
                } else {
                    None
                }
            })
            .collect::<Option<Vec<u64>>>()?;
        Some(GroupElement { den, coords })
    }
}

/// Finite subgroup of (Q/Z)^n, all elements of integer height, stored in
/// full with denominator equal to the group exponent.
#[derive(Clone, Debug)]
pub struct SimplexGroup {
    len: usize,
    den: u64,
    elements: Vec<GroupElement>,
    generators: Vec<GroupElement>,
    invariant_factors: Vec<u64>,
}

impl PartialEq for SimplexGroup {
    fn eq(&self, other: &Self) -> bool {
        self.len == other.len && self.den == other.den && self.elements == other.elements
    }
}

impl Eq for SimplexGroup {}

impl SimplexGroup {
    /// The subgroup {0} of (Q/Z)^len.
    pub fn trivial(len: usize) -> Self {
        assert!(len >= 1, "ambient power must be positive");
        SimplexGroup {
            len,
            den: 1,
            elements: vec![GroupElement::zero(1, len)],
            generators: Vec::new(),
            invariant_factors: Vec::new(),
        }
    }

    /// Subgroup generated by rows of numerators over a common denominator.
    pub fn from_generators(den: u64, gens: &[Vec<u64>]) -> Result<Self> {
        Self::from_generators_with_cap(den, gens, DEFAULT_ORDER_CAP)
    }

    pub fn from_generators_with_cap(den: u64, gens: &[Vec<u64>], cap: u64) -> Result<Self> {
        if den == 0 {
            return Err(Error::RangeViolated {
                name: "denominator",
                value: 0,
                range: "1..".into(),
            });
        }
        let Some(first) = gens.first() else {
            return Err(Error::DimensionMismatch(
                "at least one generator row is required".into(),
            ));
        };
        let n = first.len();
        if n == 0 {
            return Err(Error::DimensionMismatch(
                "generators need at least one coordinate".into(),
            ));
        }
        if let Some(bad) = gens.iter().find(|g| g.len() != n) {
            return Err(Error::DimensionMismatch(format!(
                "generator has {} coordinates, expected {n}",
                bad.len()
            )));
        }
        let gens: Vec<GroupElement> = gens
            .iter()
            .map(|g| GroupElement::new(den, g.clone()))
            .collect();
        for g in &gens {
            if g.height().is_none() {
                let sum: u128 = g.coords.iter().map(|&c| c as u128).sum();
                return Err(Error::NonIntegerHeight {
                    num: (sum % den as u128) as i64,
                    den: den as i64,
                });
            }
        }

        // lattice generated by Z^n and the generator residues, scaled by den
        let mut rows: Vec<Vec<BigInt>> = gens
            .iter()
            .map(|g| g.coords.iter().map(|&c| BigInt::from(c)).collect())
            .collect();
        for i in 0..n {
            let mut r = vec![BigInt::zero(); n];
            r[i] = BigInt::from(den);
            rows.push(r);
        }
        let bq = row_lattice_basis(&IntMatrix::from_rows(rows))
            .expect("stack contains a scaled identity, so full column rank");
        let basis_det: BigInt = bq.diagonal().iter().product();
        let den_pow = (0..n).fold(BigInt::from(1), |acc, _| acc * den);
        let order_big = &den_pow / &basis_det;
        debug_assert!((&den_pow % &basis_det).is_zero());
        let order = order_big.to_u128().unwrap_or(u128::MAX);
        if order > cap as u128 {
            return Err(Error::GroupTooLarge { order, cap });
        }

        // index matrix of den * Z^n inside the lattice; its Smith form gives
        // the quotient structure
        let inv = rational_inverse(&bq).expect("triangular basis with positive diagonal");
        let mut c = IntMatrix::zeros(n, n);
        let den_big = BigInt::from(den);
        for i in 0..n {
            for j in 0..n {
                let v = &inv[i][j] * &den_big;
                debug_assert!(v.is_integer(), "scaled identity not inside the lattice");
                c.set(i, j, v.to_integer());
            }
        }
        let snf = smith_normal_form(&c);
        let factors: Vec<u64> = snf
            .d
            .diagonal()
            .iter()
            .map(|d| d.to_u64().expect("invariant factor exceeds the order cap"))
            .collect();
        let exponent = factors.iter().copied().max().unwrap_or(1).max(1);

        let v_inv_rat = rational_inverse(&snf.v).expect("unimodular");
        let mut derived: Vec<(GroupElement, u64)> = Vec::new();
        for (i, &f) in factors.iter().enumerate() {
            if f <= 1 {
                continue;
            }
            let coords: Vec<u64> = (0..n)
                .map(|j| {
                    let mut acc = BigInt::zero();
                    for k in 0..n {
                        debug_assert!(v_inv_rat[i][k].is_integer());
                        acc += v_inv_rat[i][k].to_integer() * bq.at(k, j);
                    }
                    let r = acc.mod_floor(&den_big);
                    r.to_u64().expect("residue below den")
                })
                .collect();
            let g = GroupElement::new(den, coords)
                .rescale(exponent)
                .expect("element order divides the exponent");
            derived.push((g, f));
        }

        let elements = span_elements(n, exponent, &derived);
        debug_assert_eq!(elements.len() as u128, order);

        let invariant_factors: Vec<u64> = derived.iter().map(|(_, f)| *f).collect();
        let generators = if gens.len() == invariant_factors.len() {
            gens.iter()
                .map(|g| {
                    g.rescale(exponent)
                        .expect("group element order divides the exponent")
                })
                .collect()
        } else {
            derived.into_iter().map(|(g, _)| g).collect()
        };

        Ok(SimplexGroup {
            len: n,
            den: exponent,
            elements,
            generators,
            invariant_factors,
        })
    }

    /// Build from structure already known: generators independent with the
    /// given orders, denominators already equal to the exponent.
    pub(crate) fn from_structure(
        len: usize,
        den: u64,
        generators: Vec<GroupElement>,
        invariant_factors: Vec<u64>,
    ) -> Self {
        debug_assert_eq!(generators.len(), invariant_factors.len());
        debug_assert!(generators.iter().all(|g| g.den() == den && g.len() == len));
        debug_assert!(generators
            .iter()
            .zip(&invariant_factors)
            .all(|(g, &f)| g.order() == f));
        let pairs: Vec<(GroupElement, u64)> = generators
            .iter()
            .cloned()
            .zip(invariant_factors.iter().copied())
            .collect();
        let elements = span_elements(len, den, &pairs);
        debug_assert_eq!(
            elements.len() as u128,
            invariant_factors.iter().map(|&f| f as u128).product(),
            "generators are not independent"
        );
        SimplexGroup {
            len,
            den,
            elements,
            generators,
            invariant_factors,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn order(&self) -> u64 {
        self.elements.len() as u64
    }

    /// Largest element order; also the common denominator of stored
    /// coordinates.
    pub fn exponent(&self) -> u64 {
        self.den
    }

    /// Minimal number of generators.
    pub fn rank(&self) -> usize {
        self.invariant_factors.len()
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn generators(&self) -> &[GroupElement] {
        &self.generators
    }

    /// Nontrivial invariant factors, each dividing the next.
    pub fn invariant_factors(&self) -> &[u64] {
        &self.invariant_factors
    }

    pub fn contains(&self, e: &GroupElement) -> bool {
        e.den == self.den && self.elements.binary_search(e).is_ok()
    }

    /// h*-coefficients of the corresponding simplex: coefficient i counts
    /// elements of height i.
    pub fn hstar(&self) -> HStarPolynomial {
        let mut counts = vec![0u64; self.len];
        for e in &self.elements {
            let h = e.height().expect("group elements have integer heights");
            counts[h as usize] += 1;
        }
        HStarPolynomial::new(counts)
    }

    /// Coordinates that vanish on every element.
    pub fn vanishing_coordinates(&self) -> Vec<usize> {
        (0..self.len)
            .filter(|&j| self.elements.iter().all(|e| e.coords[j] == 0))
            .collect()
    }

    /// The corresponding simplex is a lattice pyramid exactly when some
    /// coordinate vanishes on the whole group.
    pub fn is_pyramid(&self) -> bool {
        !self.vanishing_coordinates().is_empty()
    }

    pub fn element_matrix(&self) -> Vec<Vec<u64>> {
        self.elements.iter().map(|e| e.coords.clone()).collect()
    }

    /// Same subgroup with coordinates permuted into canonical order.
    pub fn canonical_form(&self) -> Result<SimplexGroup> {
        let (perm, _) = canonical::canonical_permutation(
            &self.element_matrix(),
            canonical::DEFAULT_BUDGET,
        )?;
        let apply = |e: &GroupElement| {
            GroupElement::new(self.den, perm.iter().map(|&j| e.coords[j]).collect())
        };
        let mut elements: Vec<GroupElement> = self.elements.iter().map(apply).collect();
        elements.sort_unstable();
        Ok(SimplexGroup {
            len: self.len,
            den: self.den,
            elements,
            generators: self.generators.iter().map(apply).collect(),
            invariant_factors: self.invariant_factors.clone(),
        })
    }

    /// Total order invariant under coordinate permutation; equal keys mean
    /// the groups agree up to permuting coordinates.
    pub fn canonical_key(&self) -> Result<Vec<u64>> {
        let (_, key) = canonical::canonical_permutation(
            &self.element_matrix(),
            canonical::DEFAULT_BUDGET,
        )?;
        Ok(key)
    }
}

/// All sums of multiples of independent generators, sorted.
fn span_elements(len: usize, den: u64, gens: &[(GroupElement, u64)]) -> Vec<GroupElement> {
    let mut elems = vec![GroupElement::zero(den, len)];
    for (g, ord) in gens {
        let mut next = Vec::with_capacity(elems.len() * *ord as usize);
        let mut shift = GroupElement::zero(den, len);
        for k in 0..*ord {
            if k > 0 {
                shift = shift.add(g);
            }
            for e in &elems {
                next.push(e.add(&shift));
            }
        }
        elems = next;
    }
    elems.sort_unstable();
    debug_assert!(
        elems.windows(2).all(|w| w[0] != w[1]),
        "span produced repeated elements"
    );
    elems
}

/// Quotient group attached to a simplex.
pub fn group_of_simplex(s: &LatticeSimplex) -> Result<SimplexGroup> {
    group_of_simplex_with_cap(s, DEFAULT_ORDER_CAP)
}

pub fn group_of_simplex_with_cap(s: &LatticeSimplex, cap: u64) -> Result<SimplexGroup> {
    let n = s.dim() + 1;
    let vol = s.normalized_volume();
    let order = vol.to_u128().unwrap_or(u128::MAX);
    if order > cap as u128 {
        return Err(Error::GroupTooLarge { order, cap });
    }

    // Solutions of x * M integral form the lattice spanned by rows of
    // D^{-1} U; reducing mod 1 realizes the quotient with generator i of
    // order d_i.
    let m = s.homogeneous_matrix();
    let snf = smith_normal_form(&m);
    let factors: Vec<u64> = snf
        .d
        .diagonal()
        .iter()
        .map(|d| d.to_u64().expect("invariant factor exceeds the order cap"))
        .collect();
    debug_assert!(factors.iter().all(|&f| f >= 1), "simplex is nondegenerate");
    let exponent = factors.iter().copied().max().unwrap_or(1);
    let exp_big = BigInt::from(exponent);

    let mut derived: Vec<(GroupElement, u64)> = Vec::new();
    for (i, &f) in factors.iter().enumerate() {
        if f <= 1 {
            continue;
        }
        let scale = BigInt::from(exponent / f);
        let coords: Vec<u64> = (0..n)
            .map(|j| {
                let r = (snf.u.at(i, j) * &scale).mod_floor(&exp_big);
                r.to_u64().expect("residue below the exponent")
            })
            .collect();
        let g = GroupElement::new(exponent, coords);
        debug_assert!(g.height().is_some(), "heights are integers by closure");
        derived.push((g, f));
    }

    let elements = span_elements(n, exponent, &derived);
    debug_assert_eq!(BigInt::from(elements.len()), vol.clone());

    let invariant_factors: Vec<u64> = derived.iter().map(|(_, f)| *f).collect();
    let generators: Vec<GroupElement> = derived.into_iter().map(|(g, _)| g).collect();
    Ok(SimplexGroup {
        len: n,
        den: exponent,
        elements,
        generators,
        invariant_factors,
    })
}

/// Simplex whose quotient group is exactly the given subgroup, with the same
/// coordinate order, so composing with [`group_of_simplex`] is the identity.
pub fn simplex_of_group(g: &SimplexGroup) -> Result<LatticeSimplex> {
    let n = g.len();
    if n < 2 {
        return Err(Error::DimensionMismatch(
            "a simplex needs the group to sit in at least (Q/Z)^2".into(),
        ));
    }
    let q = g.exponent();

    // scaled lattice generated by q * Z^n and the generator numerators
    let mut rows: Vec<Vec<BigInt>> = g
        .generators
        .iter()
        .map(|e| e.coords.iter().map(|&c| BigInt::from(c)).collect())
        .collect();
    for i in 0..n {
        let mut r = vec![BigInt::zero(); n];
        r[i] = BigInt::from(q);
        rows.push(r);
    }
    let bq = row_lattice_basis(&IntMatrix::from_rows(rows))
        .expect("stack contains a scaled identity, so full column rank");

    // row sums are q times the basis heights; their gcd is q because the
    // heights are integers with unit gcd
    let sums = bq.row_sums();
    let u0 = column_to_last_unit(&sums);
    let b2 = u0.mul(&bq);
    debug_assert!({
        let s2 = b2.row_sums();
        s2[..n - 1].iter().all(Zero::is_zero) && s2[n - 1] == BigInt::from(q)
    });

    // homogeneous vertex matrix: q * inverse of the adjusted basis
    let inv = rational_inverse(&b2).expect("unimodular image of a full-rank basis");
    let q_big = BigInt::from(q);
    let mut vertices: Vec<Vec<i64>> = Vec::with_capacity(n);
    for row in inv.iter().take(n) {
        let mut v: Vec<i64> = Vec::with_capacity(n - 1);
        for (j, entry) in row.iter().enumerate() {
            let scaled = entry * &q_big;
            debug_assert!(scaled.is_integer(), "scaled identity not inside the lattice");
            let value = scaled.to_integer();
            if j + 1 == n {
                debug_assert!(value == BigInt::from(1), "height column must be ones");
            } else {
                v.push(value.to_i64().ok_or_else(|| {
                    Error::Overflow(format!("vertex coordinate {value} exceeds i64"))
                })?);
            }
        }
        vertices.push(v);
    }
    LatticeSimplex::new(vertices)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn simplex(vertices: &[&[i64]]) -> LatticeSimplex {
        LatticeSimplex::new(vertices.iter().map(|v| v.to_vec()).collect()).unwrap()
    }

    /// All residues x with denominator dividing `den` satisfying the
    /// integrality condition, found by exhaustive scan.
    fn brute_force_group(s: &LatticeSimplex, den: u64) -> Vec<Vec<u64>> {
        let n = s.dim() + 1;
        let m = s.homogeneous_matrix();
        let mut found = Vec::new();
        let mut x = vec![0u64; n];
        loop {
            let integral = (0..n).all(|j| {
                let mut acc = BigInt::zero();
                for i in 0..n {
                    acc += BigInt::from(x[i]) * m.at(i, j);
                }
                (acc % BigInt::from(den)).is_zero()
            });
            if integral {
                found.push(x.clone());
            }
            let mut c = 0;
            loop {
                if c == n {
                    return found;
                }
                x[c] += 1;
                if x[c] < den {
                    break;
                }
                x[c] = 0;
                c += 1;
            }
        }
    }

    #[test]
    fn element_operations() {
        let e = GroupElement::new(6, vec![3, 2]);
        assert_eq!(e.negate().coords(), &[3, 4]);
        assert_eq!(e.order(), 6);
        assert_eq!(e.height(), None);
        let f = GroupElement::new(6, vec![3, 3]);
        assert_eq!(f.height(), Some(1));
        assert_eq!(f.order(), 2);
        assert_eq!(f.support(), 2);
        assert_eq!(e.add(&f).coords(), &[0, 5]);
        assert_eq!(e.multiple(2).coords(), &[0, 4]);
        assert_eq!(GroupElement::new(6, vec![2, 4]).order(), 3);
        assert!(GroupElement::zero(6, 2).is_zero());
        assert_eq!(GroupElement::zero(6, 2).order(), 1);
    }

    #[test]
    fn skewed_tetrahedron_group_is_diagonal_half() {
        let s = simplex(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[1, 1, 2]]);
        let g = group_of_simplex(&s).unwrap();
        assert_eq!(g.order(), 2);
        assert_eq!(g.exponent(), 2);
        assert_eq!(g.invariant_factors(), &[2]);
        assert_eq!(g.element_matrix(), vec![vec![0, 0, 0, 0], vec![1, 1, 1, 1]]);
        assert!(!g.is_pyramid());
        assert_eq!(g.hstar().coeffs(), &[1, 0, 1]);

        let mut brute = brute_force_group(&s, 2);
        brute.sort_unstable();
        assert_eq!(g.element_matrix(), brute);
    }

    #[test]
    fn dilated_triangle_group_matches_brute_force() {
        let s = simplex(&[&[0, 0], &[3, 0], &[0, 3]]);
        let g = group_of_simplex(&s).unwrap();
        assert_eq!(g.order(), 9);
        assert_eq!(g.exponent(), 3);
        assert_eq!(g.invariant_factors(), &[3, 3]);
        assert_eq!(g.hstar().coeffs(), &[1, 7, 1]);
        let mut brute = brute_force_group(&s, 3);
        brute.sort_unstable();
        assert_eq!(g.element_matrix(), brute);
    }

    #[test]
    fn pyramid_has_vanishing_apex_coordinate() {
        let s = simplex(&[&[0, 0, 0], &[3, 0, 0], &[0, 3, 0], &[0, 0, 1]]);
        let g = group_of_simplex(&s).unwrap();
        assert_eq!(g.order(), 9);
        assert!(g.is_pyramid());
        assert_eq!(g.vanishing_coordinates(), vec![3]);
        assert_eq!(g.hstar().coeffs(), &[1, 7, 1]);
    }

    #[test]
    fn group_hstar_matches_counting_hstar() {
        for vertices in [
            vec![vec![0, 0], vec![3, 0], vec![0, 3]],
            vec![vec![0, 0, 0], vec![1, 0, 0], vec![0, 1, 0], vec![1, 1, 2]],
            vec![vec![1, 1], vec![-2, 3], vec![0, -1]],
        ] {
            let s = LatticeSimplex::new(vertices).unwrap();
            let g = group_of_simplex(&s).unwrap();
            assert_eq!(g.hstar(), s.hstar_by_counting().unwrap());
            assert_eq!(BigInt::from(g.order()), s.normalized_volume().clone());
        }
    }

    #[test]
    fn from_generators_diagonal_half() {
        let g = SimplexGroup::from_generators(2, &[vec![1, 1, 1, 1]]).unwrap();
        assert_eq!(g.order(), 2);
        assert_eq!(g.invariant_factors(), &[2]);
        assert_eq!(g.hstar().coeffs(), &[1, 0, 1]);
        assert_eq!(g.generators().len(), 1);
        assert_eq!(g.generators()[0].coords(), &[1, 1, 1, 1]);
    }

    #[test]
    fn from_generators_rejects_fractional_height() {
        match SimplexGroup::from_generators(2, &[vec![1, 0]]) {
            Err(Error::NonIntegerHeight { num: 1, den: 2 }) => {}
            other => panic!("expected NonIntegerHeight, got {other:?}"),
        }
    }

    #[test]
    fn denominator_normalizes_to_exponent() {
        let g = SimplexGroup::from_generators(4, &[vec![2, 2, 2, 2]]).unwrap();
        assert_eq!(g.exponent(), 2);
        assert_eq!(g.order(), 2);
        assert_eq!(g.element_matrix(), vec![vec![0, 0, 0, 0], vec![1, 1, 1, 1]]);
    }

    #[test]
    fn rank_two_group_keeps_minimal_user_generators() {
        let g = SimplexGroup::from_generators(2, &[vec![1, 1, 0, 0], vec![0, 0, 1, 1]]).unwrap();
        assert_eq!(g.order(), 4);
        assert_eq!(g.invariant_factors(), &[2, 2]);
        assert_eq!(g.rank(), 2);
        assert_eq!(
            g.element_matrix(),
            vec![
                vec![0, 0, 0, 0],
                vec![0, 0, 1, 1],
                vec![1, 1, 0, 0],
                vec![1, 1, 1, 1],
            ]
        );
        let gen_rows: Vec<&[u64]> = g.generators().iter().map(|e| e.coords()).collect();
        assert_eq!(gen_rows, vec![&[1, 1, 0, 0][..], &[0, 0, 1, 1][..]]);
        assert_eq!(g.hstar().coeffs(), &[1, 2, 1]);
    }

    #[test]
    fn redundant_generators_reduce_to_minimal_set() {
        let g =
            SimplexGroup::from_generators(2, &[vec![1, 1, 0, 0], vec![0, 0, 1, 1], vec![1, 1, 1, 1]])
                .unwrap();
        assert_eq!(g.order(), 4);
        assert_eq!(g.rank(), 2);
        assert_eq!(g.generators().len(), 2);
        for gen in g.generators() {
            assert!(g.contains(gen));
        }
    }

    #[test]
    fn order_cap_is_enforced() {
        match SimplexGroup::from_generators_with_cap(2, &[vec![1, 1, 0, 0], vec![0, 0, 1, 1]], 3) {
            Err(Error::GroupTooLarge { order: 4, cap: 3 }) => {}
            other => panic!("expected GroupTooLarge, got {other:?}"),
        }
        let s = simplex(&[&[0, 0], &[3, 0], &[0, 3]]);
        assert!(matches!(
            group_of_simplex_with_cap(&s, 8),
            Err(Error::GroupTooLarge { order: 9, cap: 8 })
        ));
    }

    #[test]
    fn trivial_group_and_its_simplex() {
        let g = SimplexGroup::trivial(3);
        assert_eq!(g.order(), 1);
        assert_eq!(g.rank(), 0);
        assert_eq!(g.hstar().coeffs(), &[1]);
        assert!(g.is_pyramid());
        let s = simplex_of_group(&g).unwrap();
        assert_eq!(s.dim(), 2);
        assert_eq!(*s.normalized_volume(), BigInt::from(1));
        assert_eq!(s.hstar_by_counting().unwrap().coeffs(), &[1]);
    }

    #[test]
    fn round_trip_preserves_coordinates() {
        let g = SimplexGroup::from_generators(2, &[vec![1, 1, 1, 1]]).unwrap();
        let s = simplex_of_group(&g).unwrap();
        assert_eq!(BigInt::from(g.order()), s.normalized_volume().clone());
        let g2 = group_of_simplex(&s).unwrap();
        assert_eq!(g, g2);
    }

    #[test]
    fn support_splits_into_heights() {
        let g = SimplexGroup::from_generators(6, &[vec![1, 2, 3, 0, 0, 0]]).unwrap();
        for e in g.elements() {
            let ht = e.height().unwrap();
            let neg_ht = e.negate().height().unwrap();
            assert_eq!(e.support() as u64, ht + neg_ht);
        }
    }

    #[test]
    fn canonical_form_identifies_permuted_groups() {
        let a = SimplexGroup::from_generators(2, &[vec![1, 1, 0, 0], vec![0, 0, 1, 1]]).unwrap();
        let b = SimplexGroup::from_generators(2, &[vec![0, 1, 1, 0], vec![1, 0, 0, 1]]).unwrap();
        assert_ne!(a, b);
        assert_eq!(a.canonical_key().unwrap(), b.canonical_key().unwrap());
        assert_eq!(a.canonical_form().unwrap(), b.canonical_form().unwrap());

        let c = SimplexGroup::from_generators(2, &[vec![1, 1, 1, 1]]).unwrap();
        assert_ne!(a.canonical_key().unwrap(), c.canonical_key().unwrap());
    }

    #[test]
    fn canonical_form_is_idempotent() {
        let g = SimplexGroup::from_generators(4, &[vec![1, 0, 3, 0], vec![0, 2, 2, 0]]).unwrap();
        let c1 = g.canonical_form().unwrap();
        let c2 = c1.canonical_form().unwrap();
        assert_eq!(c1, c2);
        assert_eq!(g.hstar(), c1.hstar());
        assert_eq!(g.invariant_factors(), c1.invariant_factors());
    }

    /// Random generators with the last coordinate adjusted to integer height.
    fn arb_generators() -> impl Strategy<Value = (u64, Vec<Vec<u64>>)> {
        (2u64..=6, 2usize..=4, 1usize..=2).prop_flat_map(|(den, n, k)| {
            let gen_row = proptest::collection::vec(0u64..den, n - 1).prop_map(move |mut row| {
                let sum: u64 = row.iter().sum();
                row.push((den - sum % den) % den);
                row
            });
            (Just(den), proptest::collection::vec(gen_row, k))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn round_trip_and_dual_hstar((den, rows) in arb_generators()) {
            let g = SimplexGroup::from_generators(den, &rows).unwrap();
            prop_assert_eq!(
                g.order() as u128,
                g.invariant_factors().iter().map(|&f| f as u128).product::<u128>()
            );
            let s = simplex_of_group(&g).unwrap();
            prop_assert_eq!(BigInt::from(g.order()), s.normalized_volume().clone());
            let g2 = group_of_simplex(&s).unwrap();
            prop_assert_eq!(&g, &g2);
            prop_assert_eq!(g.hstar(), s.hstar_by_counting().unwrap());
        }

        #[test]
        fn closure_and_identities((den, rows) in arb_generators()) {
            let g = SimplexGroup::from_generators(den, &rows).unwrap();
            let elems = g.elements();
            // closed under negation and addition of the first two elements
            for e in elems.iter().take(6) {
                prop_assert!(g.contains(&e.negate()));
                prop_assert!(g.contains(&e.add(&elems[0])));
                let ht = e.height().expect("integer height");
                prop_assert_eq!(e.support() as u64, ht + e.negate().height().unwrap());
                prop_assert!(e.multiple(e.order()).is_zero());
            }
            if elems.len() >= 2 {
                prop_assert!(g.contains(&elems[1].add(&elems[elems.len() - 1])));
            }
        }

        #[test]
        fn canonical_key_invariant_under_coordinate_rotation((den, rows) in arb_generators()) {
            let g = SimplexGroup::from_generators(den, &rows).unwrap();
            let rotated: Vec<Vec<u64>> = rows
                .iter()
                .map(|r| {
                    let mut r2 = r.clone();
                    r2.rotate_left(1);
                    r2
                })
                .collect();
            let g2 = SimplexGroup::from_generators(den, &rotated).unwrap();
            prop_assert_eq!(g.canonical_key().unwrap(), g2.canonical_key().unwrap());
        }
    }
}
