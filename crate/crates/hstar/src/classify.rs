//! Realizability predicates for h*-polynomials with few terms, an exhaustive
//! canonical subgroup enumerator, the classification verifier for palindromic
//! trinomials, and the volume-bound scan for general trinomials.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use itertools::Itertools;
use rayon::prelude::*;
use serde::Serialize;

use crate::codes::is_prime;
use crate::error::{Error, Result};
use crate::families::{trinomial_family, FamilySpec};
use crate::group::{GroupElement, SimplexGroup, DEFAULT_ORDER_CAP};

/// h* of a lattice polygon: 1 + at + bt^2 occurs in dimension two exactly
/// under these clauses.
pub fn scott_feasible(a: u64, b: u64) -> bool {
    scott_clause(a, b).is_some()
}

/// The matched clause of the dimension-two condition list, if any.
pub fn scott_clause(a: u64, b: u64) -> Option<&'static str> {
    if b == 0 {
        Some("b = 0")
    } else if b == 1 && a == 7 {
        Some("b = 1 and a = 7")
    } else if u128::from(b) <= u128::from(a) && u128::from(a) <= 3 * u128::from(b) + 3 {
        Some("1 <= b <= a <= 3b + 3")
    } else {
        None
    }
}

/// h* of some lattice polytope of degree at most two, any dimension: the
/// lower bound b <= a of the polygon case disappears.
pub fn degree2_feasible(a: u64, b: u64) -> bool {
    degree2_clause(a, b).is_some()
}

/// The matched clause of the degree-two condition list, if any.
pub fn degree2_clause(a: u64, b: u64) -> Option<&'static str> {
    if b == 0 {
        Some("b = 0")
    } else if b == 1 && a == 7 {
        Some("b = 1 and a = 7")
    } else if u128::from(a) <= 3 * u128::from(b) + 3 {
        Some("b >= 1 and a <= 3b + 3")
    } else {
        None
    }
}

/// 1 + at^k (k >= 2, a >= 1) as the h* of a d-dimensional polytope that is
/// not a lattice pyramid: d = 2k - 1 admits every a; for 2k <= d <= 4k - 2
/// the pair (d, a) must fit the prime-power shape below; nothing else.
pub fn binomial_feasible(k: u64, d: u64, a: u64) -> bool {
    binomial_clause(k, d, a).is_some()
}

/// The matched clause of the binomial condition, if any.
pub fn binomial_clause(k: u64, d: u64, a: u64) -> Option<String> {
    if k < 2 || a == 0 {
        return None;
    }
    if d + 1 < 2 * k {
        return None;
    }
    if d + 1 == 2 * k {
        return Some("d = 2k - 1 (every a >= 1 occurs)".into());
    }
    if d > 4 * k - 2 {
        return None;
    }
    let span = i128::from(d) + 1 - 2 * i128::from(k);
    for p in 2..=d {
        if !is_prime(p) {
            continue;
        }
        let den = i128::from(d) + 1 - i128::from(p) * span;
        if den < 1 {
            break;
        }
        let den = den as u64;
        if (2 * k) % den != 0 {
            continue;
        }
        let q = 2 * k / den;
        if !is_positive_power_of(q, p) {
            continue;
        }
        if a + 1 == q * p {
            return Some(format!(
                "2k / (d + 1 - p(d + 1 - 2k)) = {q} is a power of the prime p = {p} \
                 and a = 2kp / (d + 1 - p(d + 1 - 2k)) - 1"
            ));
        }
    }
    None
}

fn is_positive_power_of(mut q: u64, p: u64) -> bool {
    if q < p {
        return false;
    }
    while q % p == 0 {
        q /= p;
    }
    q == 1
}

/// 1 + (m - 2)t + t^2 as the h* of a d-dimensional non-pyramid: the finite
/// degree-two table.
pub fn gorenstein_deg2_feasible(m: u64, d: u64) -> bool {
    gorenstein_deg2_clause(m, d).is_some()
}

/// The matched row of the degree-two table, if any.
pub fn gorenstein_deg2_clause(m: u64, d: u64) -> Option<&'static str> {
    if m < 2 {
        return None;
    }
    match d {
        2 if (3..=9).contains(&m) => Some("d = 2 and 3 <= m <= 9"),
        3 if (2..=8).contains(&m) => Some("d = 3 and 2 <= m <= 8"),
        4 if (3..=6).contains(&m) => Some("d = 4 and 3 <= m <= 6"),
        5 if m == 4 => Some("d = 5 and m = 4"),
        _ => None,
    }
}

fn power_exponent(m: u64, base: u64) -> Option<u32> {
    let mut m = m;
    let mut e = 0;
    while m > 1 && m % base == 0 {
        m /= base;
        e += 1;
    }
    if m == 1 && e >= 1 {
        Some(e)
    } else {
        None
    }
}

/// 1 + (m - 2)t^k + t^(2k) as the h* of a d-dimensional lattice polytope.
/// This is the parameter set derived from the constructions: the five-clause
/// list below plus the two clauses that the shorter printed list misses
/// (m = 9 from the ternary code series at depth two, and m = 2 where the
/// middle term vanishes and the binomial theory applies).
pub fn trinomial_palindromic_feasible(k: u64, m: u64, d: u64) -> bool {
    trinomial_clause(k, m, d).is_some()
}

/// The five-clause condition list exactly as usually quoted; differs from
/// the derived set on m = 9 and on m = 2 with k >= 2.
pub fn trinomial_palindromic_feasible_as_printed(k: u64, m: u64, d: u64) -> bool {
    match trinomial_clause(k, m, d) {
        Some(clause) => !is_extended_clause(clause),
        None => false,
    }
}

/// True where the derived parameter set and the five-clause list disagree.
pub fn trinomial_condition_divergence(k: u64, m: u64, d: u64) -> bool {
    trinomial_palindromic_feasible(k, m, d) != trinomial_palindromic_feasible_as_printed(k, m, d)
}

const EXTENDED_M9: &str = "k >= 2, m = 9 and d >= 3k - 1";
const EXTENDED_M2: &str = "k >= 2, m = 2 and d >= 4k - 1";

fn is_extended_clause(clause: &str) -> bool {
    clause == EXTENDED_M9 || clause == EXTENDED_M2
}

/// The matched clause of the trinomial condition list, if any.
pub fn trinomial_clause(k: u64, m: u64, d: u64) -> Option<&'static str> {
    if k == 0 || m < 2 {
        return None;
    }
    let d = u128::from(d);
    let k128 = u128::from(k);
    if k == 1 && d == 2 && (3..=9).contains(&m) {
        return Some("k = 1, 3 <= m <= 9 and d = 2");
    }
    if k == 1 && d >= 3 && (2..=9).contains(&m) {
        return Some("k = 1, 2 <= m <= 9 and d >= 3");
    }
    if k >= 2 {
        if matches!(m, 3 | 4 | 6 | 8) && d + 1 >= 3 * k128 {
            return Some("k >= 2, m in {3, 4, 6, 8} and d >= 3k - 1");
        }
        if let Some(l) = power_exponent(m, 2) {
            if l >= 4 && k % 2u64.pow(l - 3) == 0 && d + 1 >= 4 * k128 {
                return Some("k = 2^(l-3) a, m = 2^l and d >= 4k - 1 with a >= 1, l >= 4");
            }
        }
        if let Some(l) = power_exponent(m, 3) {
            if l >= 3 && k % 3u64.pow(l - 2) == 0 && d + 1 >= 3 * k128 {
                return Some("k = 3^(l-2) a, m = 3^l and d >= 3k - 1 with a >= 1, l >= 3");
            }
        }
        if m == 9 && d + 1 >= 3 * k128 {
            return Some(EXTENDED_M9);
        }
        if m == 2 && d + 1 >= 4 * k128 {
            return Some(EXTENDED_M2);
        }
    }
    None
}

fn candidate_specs(k: u64, m: u64, d: u64) -> Vec<FamilySpec> {
    let mut out = Vec::new();
    if d + 1 == 3 * k {
        match m {
            3 => out.push(FamilySpec::A3 { k }),
            4 => out.push(FamilySpec::A4Dim3k { k }),
            6 => out.push(FamilySpec::A6 { k }),
            8 => out.push(FamilySpec::A8 { k }),
            _ => {}
        }
        if let Some(l) = power_exponent(m, 3) {
            if l >= 2 {
                let width = 3u64.pow(l - 2);
                if k % width == 0 {
                    out.push(FamilySpec::C { k, a: k / width, l });
                }
            }
        }
    }
    if d + 1 == 4 * k {
        if m == 4 {
            out.push(FamilySpec::A4Dim4k { k });
        }
        if let Some(l) = power_exponent(m, 2) {
            if l >= 3 {
                let width = 2u64.pow(l - 3);
                if k % width == 0 {
                    out.push(FamilySpec::B { k, a: k / width, l });
                }
            }
        }
    }
    out.retain(|spec| spec.validate().is_ok());
    out
}

/// Match a non-pyramid group whose h* is 1 + (m - 2)t^k + t^(2k) with k >= 2
/// against the constructed families, comparing canonical forms. None when
/// the h* has a different shape or no family matches.
pub fn classify_trinomial_group(g: &SimplexGroup) -> Result<Option<FamilySpec>> {
    if g.is_pyramid() {
        return Ok(None);
    }
    let h = g.hstar();
    let support = h.support();
    if support.len() != 3 || support[0] != 0 {
        return Ok(None);
    }
    let k = support[1];
    if support[2] != 2 * k || k < 2 {
        return Ok(None);
    }
    if h.coeff(0) != 1 || h.coeff(2 * k) != 1 {
        return Ok(None);
    }
    let m = h.coeff(k) + 2;
    debug_assert_eq!(g.order(), m);
    let d = (g.len() - 1) as u64;
    let key = g.canonical_key()?;
    for spec in candidate_specs(k as u64, m, d) {
        let family = trinomial_family(&spec)?;
        if family.canonical_key()? == key {
            return Ok(Some(spec));
        }
    }
    Ok(None)
}

/// Search space for the subgroup census.
#[derive(Clone, Debug)]
pub struct EnumerationBounds {
    /// Number of coordinates, n = d + 1.
    pub len: usize,
    /// Element orders permitted in a group: every nontrivial element order
    /// must lie in this set. Ignored when `elementary` is set.
    pub orders: BTreeSet<u64>,
    /// Upper bound on the group order.
    pub max_order: u64,
    /// Upper bound on the generator rank.
    pub max_rank: usize,
    /// When set to a prime p, census exactly the elementary abelian
    /// p-subgroups of rank <= max_rank instead of the general lanes.
    pub elementary: Option<u64>,
    /// Keep only groups all of whose element heights are integers, the
    /// groups that arise from lattice simplices. Default true.
    pub integer_heights_only: bool,
    /// Abort after this many candidate generator tuples.
    pub budget: Option<u64>,
}

impl EnumerationBounds {
    pub fn new(len: usize, max_order: u64, max_rank: usize) -> Self {
        EnumerationBounds {
            len,
            orders: (2..=max_order).collect(),
            max_order,
            max_rank,
            elementary: None,
            integer_heights_only: true,
            budget: None,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.len == 0 {
            return Err(Error::RangeViolated {
                name: "len",
                value: 0,
                range: "1..".into(),
            });
        }
        if self.max_order == 0 {
            return Err(Error::RangeViolated {
                name: "max_order",
                value: 0,
                range: "1..".into(),
            });
        }
        if self.max_order > DEFAULT_ORDER_CAP {
            return Err(Error::RangeViolated {
                name: "max_order",
                value: self.max_order as i64,
                range: format!("1..={DEFAULT_ORDER_CAP}"),
            });
        }
        if self.max_rank == 0 {
            return Err(Error::RangeViolated {
                name: "max_rank",
                value: 0,
                range: "1..".into(),
            });
        }
        if let Some(p) = self.elementary {
            if !is_prime(p) {
                return Err(Error::NotPrime(p));
            }
        }
        Ok(())
    }

    /// What the census covers and what it knowingly leaves out.
    pub fn coverage_note(&self) -> String {
        let heights = if self.integer_heights_only {
            "integer-height subgroups"
        } else {
            "all subgroups"
        };
        match self.elementary {
            Some(p) => format!(
                "{heights}: elementary abelian {p}-subgroups of rank <= {} \
                 in {} coordinates, order <= {}",
                self.max_rank, self.len, self.max_order
            ),
            None => {
                let mut note = format!(
                    "{heights}: cyclic and rank-2 subgroups with element orders in \
                     {:?}, order <= {}",
                    self.orders, self.max_order
                );
                if self.max_rank >= 3 {
                    note.push_str(&format!(
                        ", plus elementary abelian p-subgroups of rank 3..={}",
                        self.max_rank
                    ));
                    if self.max_order < 16 {
                        note.push_str(
                            "; exhaustive, since every group of order < 16 \
                             and rank >= 3 is elementary abelian",
                        );
                    } else {
                        note.push_str(
                            "; non-elementary subgroups of rank >= 3 \
                             (smallest order 16) are outside this census",
                        );
                    }
                } else {
                    note.push_str("; subgroups of rank >= 3 are outside this census");
                }
                note
            }
        }
    }
}

enum Partition {
    Cyclic { q: u64 },
    RankTwo { m1: u64, m2: u64 },
    Elementary { p: u64, rank: usize, pivots: Vec<usize> },
}

struct Census<'a> {
    len: usize,
    heights: bool,
    budget: Option<u64>,
    scanned: &'a AtomicU64,
    stop: &'a AtomicBool,
}

impl Census<'_> {
    /// Charge one candidate against the budget; false aborts the partition.
    fn admit(&self) -> Result<bool> {
        if self.stop.load(Ordering::Relaxed) {
            return Ok(false);
        }
        let seen = self.scanned.fetch_add(1, Ordering::Relaxed) + 1;
        if let Some(budget) = self.budget {
            if seen > budget {
                self.stop.store(true, Ordering::Relaxed);
                return Err(Error::BudgetExceeded { scanned: seen });
            }
        }
        Ok(true)
    }
}

fn divisor_closed(q: u64, orders: &BTreeSet<u64>) -> bool {
    (2..=q).filter(|e| q % e == 0).all(|e| orders.contains(&e))
}

/// Visit non-decreasing vectors over {0, .., alphabet - 1} in ascending
/// order; the visitor returns false to stop early.
fn for_each_nondecreasing<F>(len: usize, alphabet: u64, mut visit: F) -> Result<()>
where
    F: FnMut(&[u64]) -> Result<bool>,
{
    if alphabet == 0 {
        return Ok(());
    }
    let mut v = vec![0u64; len];
    loop {
        if !visit(&v)? {
            return Ok(());
        }
        let mut i = len;
        loop {
            if i == 0 {
                return Ok(());
            }
            i -= 1;
            if v[i] + 1 < alphabet {
                let next = v[i] + 1;
                for x in &mut v[i..] {
                    *x = next;
                }
                break;
            }
        }
    }
}

/// Visit every reduced-row-echelon generator matrix over F_p with the given
/// pivot columns; free entries run through all values.
fn for_each_echelon<F>(
    len: usize,
    p: u64,
    pivots: &[usize],
    mut visit: F,
) -> Result<()>
where
    F: FnMut(&[Vec<u64>]) -> Result<bool>,
{
    let rank = pivots.len();
    let free: Vec<(usize, usize)> = (0..rank)
        .flat_map(|i| {
            (pivots[i] + 1..len)
                .filter(|j| !pivots.contains(j))
                .map(move |j| (i, j))
        })
        .collect();
    let mut vals = vec![0u64; free.len()];
    let mut rows = vec![vec![0u64; len]; rank];
    for (i, &col) in pivots.iter().enumerate() {
        rows[i][col] = 1;
    }
    loop {
        for (&(i, j), &v) in free.iter().zip(&vals) {
            rows[i][j] = v;
        }
        if !visit(&rows)? {
            return Ok(());
        }
        let mut t = 0;
        loop {
            if t == vals.len() {
                return Ok(());
            }
            vals[t] += 1;
            if vals[t] < p {
                break;
            }
            vals[t] = 0;
            t += 1;
        }
    }
}

/// Den-prefixed column-major reading of the canonical element matrix; equal
/// exactly for groups that agree up to coordinate permutation.
fn merge_key(form: &SimplexGroup) -> Vec<u64> {
    let matrix = form.element_matrix();
    let mut key = Vec::with_capacity(1 + matrix.len() * form.len());
    key.push(form.exponent());
    for j in 0..form.len() {
        key.extend(matrix.iter().map(|row| row[j]));
    }
    key
}

fn run_partition(
    part: &Partition,
    census: &Census<'_>,
) -> Result<Vec<(Vec<u64>, SimplexGroup)>> {
    let n = census.len;
    let mut out = Vec::new();
    let mut keep = |group: SimplexGroup| -> Result<()> {
        let form = group.canonical_form()?;
        out.push((merge_key(&form), form));
        Ok(())
    };
    match *part {
        Partition::Cyclic { q } => {
            for_each_nondecreasing(n, q, |coords| {
                if !census.admit()? {
                    return Ok(false);
                }
                let g = GroupElement::new(q, coords.to_vec());
                if g.is_zero() || g.order() != q {
                    return Ok(true);
                }
                if census.heights && g.height().is_none() {
                    return Ok(true);
                }
                keep(SimplexGroup::from_structure(n, q, vec![g], vec![q]))?;
                Ok(true)
            })?;
        }
        Partition::RankTwo { m1, m2 } => {
            let step = m2 / m1;
            for_each_nondecreasing(n, m1 * m2, |cols| {
                if !census.admit()? {
                    return Ok(false);
                }
                let g1 = GroupElement::new(
                    m2,
                    cols.iter().map(|&c| (c / m2) * step).collect(),
                );
                let g2 = GroupElement::new(m2, cols.iter().map(|&c| c % m2).collect());
                if g1.order() != m1 || g2.order() != m2 {
                    return Ok(true);
                }
                if census.heights && (g1.height().is_none() || g2.height().is_none()) {
                    return Ok(true);
                }
                let mut span = BTreeSet::new();
                for i in 0..m1 {
                    let part = g1.multiple(i);
                    for j in 0..m2 {
                        span.insert(part.add(&g2.multiple(j)));
                    }
                }
                if span.len() as u64 != m1 * m2 {
                    return Ok(true);
                }
                keep(SimplexGroup::from_structure(
                    n,
                    m2,
                    vec![g1, g2],
                    vec![m1, m2],
                ))?;
                Ok(true)
            })?;
        }
        Partition::Elementary { p, rank, ref pivots } => {
            for_each_echelon(n, p, pivots, |rows| {
                if !census.admit()? {
                    return Ok(false);
                }
                if census.heights
                    && rows.iter().any(|r| r.iter().sum::<u64>() % p != 0)
                {
                    return Ok(true);
                }
                let gens: Vec<GroupElement> = rows
                    .iter()
                    .map(|r| GroupElement::new(p, r.clone()))
                    .collect();
                keep(SimplexGroup::from_structure(n, p, gens, vec![p; rank]))?;
                Ok(true)
            })?;
        }
    }
    Ok(out)
}

/// Every subgroup of (Q/Z)^len within the bounds, exactly once up to
/// coordinate permutation, in canonical coordinate order, sorted; the
/// trivial group is always included. Returns the groups together with the
/// number of candidate generator tuples examined.
pub fn enumerate_groups_with_count(
    bounds: &EnumerationBounds,
) -> Result<(Vec<SimplexGroup>, u64)> {
    bounds.validate()?;
    let n = bounds.len;
    let mut parts: Vec<Partition> = Vec::new();
    match bounds.elementary {
        Some(p) => {
            for rank in 1..=bounds.max_rank.min(n) {
                match p.checked_pow(rank as u32) {
                    Some(order) if order <= bounds.max_order => {}
                    _ => break,
                }
                for pivots in (0..n).combinations(rank) {
                    parts.push(Partition::Elementary { p, rank, pivots });
                }
            }
        }
        None => {
            for q in 2..=bounds.max_order {
                if divisor_closed(q, &bounds.orders) {
                    parts.push(Partition::Cyclic { q });
                }
            }
            if bounds.max_rank >= 2 {
                for m2 in 2..=bounds.max_order {
                    if !divisor_closed(m2, &bounds.orders) {
                        continue;
                    }
                    for m1 in 2..=m2 {
                        if m2 % m1 != 0 {
                            continue;
                        }
                        match m1.checked_mul(m2) {
                            Some(order) if order <= bounds.max_order => {
                                parts.push(Partition::RankTwo { m1, m2 });
                            }
                            _ => {}
                        }
                    }
                }
            }
            if bounds.max_rank >= 3 {
                for p in 2..=bounds.max_order {
                    if !is_prime(p) || !bounds.orders.contains(&p) {
                        continue;
                    }
                    for rank in 3..=bounds.max_rank.min(n) {
                        match p.checked_pow(rank as u32) {
                            Some(order) if order <= bounds.max_order => {}
                            _ => break,
                        }
                        for pivots in (0..n).combinations(rank) {
                            parts.push(Partition::Elementary { p, rank, pivots });
                        }
                    }
                }
            }
        }
    }

    let scanned = AtomicU64::new(0);
    let stop = AtomicBool::new(false);
    let census = Census {
        len: n,
        heights: bounds.integer_heights_only,
        budget: bounds.budget,
        scanned: &scanned,
        stop: &stop,
    };
    let found: Result<Vec<Vec<(Vec<u64>, SimplexGroup)>>> = parts
        .par_iter()
        .map(|part| run_partition(part, &census))
        .collect();
    let found = found?;

    let mut merged: BTreeMap<Vec<u64>, SimplexGroup> = BTreeMap::new();
    let trivial = SimplexGroup::trivial(n).canonical_form()?;
    merged.insert(merge_key(&trivial), trivial);
    for batch in found {
        for (key, group) in batch {
            match merged.entry(key) {
                std::collections::btree_map::Entry::Vacant(e) => {
                    e.insert(group);
                }
                std::collections::btree_map::Entry::Occupied(mut e) => {
                    // same orbit either way; pick the smaller generator
                    // list so the survivor is schedule-independent
                    let old: Vec<&[u64]> =
                        e.get().generators().iter().map(|g| g.coords()).collect();
                    let new: Vec<&[u64]> =
                        group.generators().iter().map(|g| g.coords()).collect();
                    if new < old {
                        e.insert(group);
                    }
                }
            }
        }
    }
    Ok((
        merged.into_values().collect(),
        scanned.load(Ordering::Relaxed),
    ))
}

/// See enumerate_groups_with_count; drops the candidate count.
pub fn enumerate_groups(bounds: &EnumerationBounds) -> Result<Vec<SimplexGroup>> {
    Ok(enumerate_groups_with_count(bounds)?.0)
}

/// One census group whose h* is a palindromic trinomial 1 + (m-2)t^k + t^(2k).
#[derive(Clone, Debug, Serialize)]
pub struct GroupFinding {
    /// Common denominator of the generator rows below.
    pub den: u64,
    /// Generator rows in canonical coordinate order; enough to rebuild the
    /// group exactly.
    pub generators: Vec<Vec<u64>>,
    pub dim: u64,
    pub order: u64,
    pub hstar: Vec<u64>,
    pub k: u64,
    pub m: u64,
    pub pyramid: bool,
    /// The constructed family this group equals up to coordinate
    /// permutation, if any.
    pub matched_case: Option<String>,
    pub unexpected: bool,
}

/// Outcome of a classification census at fixed (k, d).
#[derive(Clone, Debug, Serialize)]
pub struct ClassificationReport {
    pub k: u64,
    pub dim: u64,
    pub coverage: String,
    /// Candidate generator tuples examined.
    pub candidates: u64,
    /// Distinct canonical groups in the census.
    pub groups_scanned: u64,
    pub findings: Vec<GroupFinding>,
    pub unexpected: usize,
    /// How many canonical groups realized each m; uniqueness means every
    /// multiplicity is one.
    pub m_multiplicities: BTreeMap<u64, usize>,
}

impl ClassificationReport {
    pub fn m_values(&self) -> BTreeSet<u64> {
        self.m_multiplicities.keys().copied().collect()
    }

    pub fn is_unique_per_m(&self) -> bool {
        self.m_multiplicities.values().all(|&c| c == 1)
    }

    /// One finding per line as JSON.
    pub fn to_jsonl(&self) -> Result<String> {
        let mut lines = Vec::with_capacity(self.findings.len());
        for f in &self.findings {
            lines.push(serde_json::to_string(f)?);
        }
        Ok(lines.join("\n"))
    }

    pub fn summary(&self) -> String {
        let mut out = format!(
            "census k={} d={}: {} candidates, {} canonical groups, \
             {} trinomial non-pyramid findings, {} unexpected\n",
            self.k,
            self.dim,
            self.candidates,
            self.groups_scanned,
            self.findings.len(),
            self.unexpected
        );
        out.push_str(&format!("coverage: {}\n", self.coverage));
        for f in &self.findings {
            let verdict = match &f.matched_case {
                Some(case) => format!("matches {case}"),
                None => "UNEXPECTED".into(),
            };
            out.push_str(&format!(
                "m={} h*={:?} generators {:?} over 1/{}: {verdict}\n",
                f.m, f.hstar, f.generators, f.den
            ));
        }
        for (m, count) in &self.m_multiplicities {
            if *count > 1 {
                out.push_str(&format!(
                    "uniqueness violated: m={m} realized by {count} groups\n"
                ));
            }
        }
        out
    }
}

/// Census all groups within bounds at n = d + 1 coordinates, keep the
/// non-pyramid ones whose h* is 1 + (m-2)t^k + t^(2k) for the given k, and
/// match each against the constructed families.
pub fn verify_classification(
    k: u64,
    d: u64,
    bounds: &EnumerationBounds,
) -> Result<ClassificationReport> {
    if k < 2 {
        return Err(Error::RangeViolated {
            name: "k",
            value: k as i64,
            range: "2..".into(),
        });
    }
    if u128::from(d) + 1 < 2 * u128::from(k) {
        return Err(Error::NumericalConditionViolated {
            relation: "2k <= d + 1".into(),
            detail: format!("k={k} d={d}"),
        });
    }
    if bounds.len as u64 != d + 1 {
        return Err(Error::InvalidSpec(format!(
            "bounds cover {} coordinates but d = {d} needs {}",
            bounds.len,
            d + 1
        )));
    }
    let (groups, candidates) = enumerate_groups_with_count(bounds)?;
    let mut findings = Vec::new();
    let mut m_multiplicities: BTreeMap<u64, usize> = BTreeMap::new();
    for g in &groups {
        if g.is_pyramid() || g.elements().iter().any(|e| e.height().is_none()) {
            continue;
        }
        let h = g.hstar();
        let support = h.support();
        if support.len() != 3 || support[0] != 0 {
            continue;
        }
        if support[1] != k as usize || support[2] != 2 * k as usize {
            continue;
        }
        if h.coeff(0) != 1 || h.coeff(2 * k as usize) != 1 {
            continue;
        }
        let m = h.coeff(k as usize) + 2;
        let matched = classify_trinomial_group(g)?;
        *m_multiplicities.entry(m).or_insert(0) += 1;
        findings.push(GroupFinding {
            den: g.exponent(),
            generators: g.generators().iter().map(|e| e.coords().to_vec()).collect(),
            dim: d,
            order: g.order(),
            hstar: h.coeffs().to_vec(),
            k,
            m,
            pyramid: false,
            matched_case: matched.map(|spec| spec.to_string()),
            unexpected: matched.is_none(),
        });
    }
    let unexpected = findings.iter().filter(|f| f.unexpected).count();
    Ok(ClassificationReport {
        k,
        dim: d,
        coverage: bounds.coverage_note(),
        candidates,
        groups_scanned: groups.len() as u64,
        findings,
        unexpected,
        m_multiplicities,
    })
}

/// A census group violating the volume bound for trinomial h*-polynomials.
#[derive(Clone, Debug, Serialize)]
pub struct ConjectureWitness {
    pub den: u64,
    pub generators: Vec<Vec<u64>>,
    pub hstar: Vec<u64>,
    pub k: usize,
    pub a: u64,
    pub b: u64,
}

/// Outcome of scanning for violations of vol <= (2b + 2) deg over groups
/// with h* = 1 + a t^k + b t^(2k), b >= 2.
#[derive(Clone, Debug, Serialize)]
pub struct ConjectureScan {
    /// Canonical groups examined.
    pub scanned: u64,
    /// Groups whose h* had the scanned trinomial shape with b >= 2.
    pub matching: u64,
    pub counterexample: Option<ConjectureWitness>,
}

/// Scan the census for a group with h* = 1 + a t^k + b t^(2k), b >= 2, and
/// a + b + 1 > (4b + 4)k. Completing with None is finite evidence for the
/// bound, not a proof. Palindromicity is not assumed.
pub fn conjecture_scan(bounds: &EnumerationBounds) -> Result<ConjectureScan> {
    let groups = enumerate_groups(bounds)?;
    let mut matching = 0u64;
    let mut counterexample = None;
    for g in &groups {
        if g.elements().iter().any(|e| e.height().is_none()) {
            continue;
        }
        let h = g.hstar();
        let deg = h.degree();
        if deg == 0 || deg % 2 != 0 {
            continue;
        }
        let k = deg / 2;
        if h.support().iter().any(|&i| i != 0 && i != k && i != deg) {
            continue;
        }
        assert_eq!(h.coeff(0), 1, "height zero counts only the identity");
        let a = h.coeff(k);
        let b = h.coeff(deg);
        if b == 1 && h.normalized_volume() == 9 * k as u64 {
            assert_eq!(k, 1, "volume (9/2) deg forces exponent one");
        }
        if b < 2 {
            continue;
        }
        matching += 1;
        if u128::from(a) + u128::from(b) + 1 > (4 * u128::from(b) + 4) * k as u128 {
            counterexample = Some(ConjectureWitness {
                den: g.exponent(),
                generators: g.generators().iter().map(|e| e.coords().to_vec()).collect(),
                hstar: h.coeffs().to_vec(),
                k,
                a,
                b,
            });
            break;
        }
    }
    Ok(ConjectureScan {
        scanned: groups.len() as u64,
        matching,
        counterexample,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::white_cayley_group;

    #[test]
    fn polygon_clauses() {
        assert!(scott_feasible(7, 1));
        assert_eq!(scott_clause(7, 1), Some("b = 1 and a = 7"));
        assert!(!scott_feasible(0, 2));
        assert!(scott_feasible(6, 1));
        assert!(scott_feasible(5, 0));
        assert!(!scott_feasible(8, 1));
        assert!(!scott_feasible(1, 2));
    }

    #[test]
    fn degree_two_clauses() {
        assert!(degree2_feasible(0, 5));
        assert!(degree2_feasible(5, 0));
        assert!(degree2_feasible(2, 1));
        assert!(degree2_feasible(1, 2));
        assert!(!degree2_feasible(8, 1));
        assert_eq!(degree2_clause(7, 1), Some("b = 1 and a = 7"));
    }

    #[test]
    fn polygon_condition_implies_degree_two_condition() {
        for a in 0..=100 {
            for b in 0..=100 {
                if scott_feasible(a, b) {
                    assert!(degree2_feasible(a, b), "a={a} b={b}");
                }
            }
        }
    }

    #[test]
    fn binomial_condition() {
        // d = 2k - 1 admits every coefficient
        assert!(binomial_feasible(2, 3, 4));
        assert!(binomial_feasible(2, 3, 10));
        // prime-power regime
        assert!(binomial_feasible(2, 6, 7));
        assert!(!binomial_feasible(2, 6, 6));
        assert!(binomial_feasible(2, 5, 3));
        assert!(!binomial_feasible(2, 5, 4));
        assert!(binomial_feasible(3, 8, 3));
        // dimension out of range
        assert!(!binomial_feasible(2, 2, 1));
        assert!(!binomial_feasible(2, 7, 1));
        // parameters the families realize
        assert!(binomial_feasible(3, 5, 1));
        assert!(binomial_feasible(3, 8, 3));
        assert!(binomial_feasible(2, 3, 2));
    }

    #[test]
    fn degree_two_palindromic_table() {
        assert!(gorenstein_deg2_feasible(4, 5));
        assert!(gorenstein_deg2_feasible(9, 2));
        assert!(!gorenstein_deg2_feasible(9, 3));
        assert!(gorenstein_deg2_feasible(2, 3));
        assert!(!gorenstein_deg2_feasible(2, 2));
        assert!(gorenstein_deg2_feasible(6, 4));
        assert!(!gorenstein_deg2_feasible(7, 4));
        assert!(!gorenstein_deg2_feasible(4, 6));
        assert_eq!(gorenstein_deg2_clause(4, 5), Some("d = 5 and m = 4"));
    }

    #[test]
    fn trinomial_condition_and_divergence() {
        assert!(trinomial_palindromic_feasible(1, 9, 2));
        assert!(!trinomial_palindromic_feasible(1, 2, 2));
        assert!(trinomial_palindromic_feasible(1, 2, 3));
        assert!(trinomial_palindromic_feasible(2, 6, 5));
        assert!(!trinomial_palindromic_feasible(2, 6, 4));
        assert!(trinomial_palindromic_feasible(2, 8, 5));
        assert!(trinomial_palindromic_feasible(2, 16, 7));
        assert!(!trinomial_palindromic_feasible(2, 16, 6));
        assert!(trinomial_palindromic_feasible(3, 27, 8));
        assert!(!trinomial_palindromic_feasible(2, 27, 7));
        assert!(!trinomial_palindromic_feasible(2, 5, 5));

        // the two parameter lines the five-clause list misses
        assert!(trinomial_palindromic_feasible(2, 9, 5));
        assert!(!trinomial_palindromic_feasible_as_printed(2, 9, 5));
        assert!(trinomial_condition_divergence(2, 9, 5));
        assert!(trinomial_palindromic_feasible(2, 2, 7));
        assert!(!trinomial_palindromic_feasible_as_printed(2, 2, 7));
        assert!(trinomial_condition_divergence(2, 2, 7));
        assert!(!trinomial_palindromic_feasible(2, 2, 6));
        assert!(trinomial_condition_divergence(3, 9, 8));

        assert!(!trinomial_condition_divergence(2, 6, 5));
        assert!(!trinomial_condition_divergence(1, 9, 2));
        assert!(!trinomial_condition_divergence(2, 8, 7));
    }

    #[test]
    fn every_family_satisfies_the_trinomial_condition() {
        for text in [
            "a3:2", "a4-3k:2", "a4-4k:2", "a6:2", "a8:2", "b:2:2:3", "b:2:1:4",
            "b:4:4:3", "c:2:2:2", "c:3:1:3", "c:3:3:2",
        ] {
            let spec: FamilySpec = text.parse().unwrap();
            let (k, m, d) = (spec.k(), spec.m().unwrap(), spec.dim().unwrap());
            assert!(trinomial_palindromic_feasible(k, m, d), "{text}");
        }
    }

    #[test]
    fn classify_recovers_each_family() {
        for text in [
            "a3:2", "a4-3k:2", "a4-4k:2", "a6:2", "a8:2", "b:2:2:3", "b:2:1:4",
            "c:2:2:2", "c:3:1:3",
        ] {
            let spec: FamilySpec = text.parse().unwrap();
            let g = trinomial_family(&spec).unwrap();
            assert_eq!(classify_trinomial_group(&g).unwrap(), Some(spec), "{text}");
        }
    }

    #[test]
    fn classify_is_permutation_invariant() {
        let spec: FamilySpec = "b:2:2:3".parse().unwrap();
        let g = trinomial_family(&spec).unwrap();
        let perm = [5usize, 2, 7, 0, 3, 6, 1, 4];
        let rows: Vec<Vec<u64>> = g
            .generators()
            .iter()
            .map(|e| perm.iter().map(|&j| e.coords()[j]).collect())
            .collect();
        let permuted = SimplexGroup::from_generators(2, &rows).unwrap();
        assert_eq!(classify_trinomial_group(&permuted).unwrap(), Some(spec));
    }

    #[test]
    fn classify_rejects_binomials_and_pyramids() {
        let white = white_cayley_group(2, 5, &[1, 2]).unwrap();
        assert_eq!(classify_trinomial_group(&white).unwrap(), None);

        // trinomial heights but a vanishing coordinate
        let pyramid = SimplexGroup::from_generators(3, &[vec![1, 1, 1, 1, 1, 1, 0]]).unwrap();
        assert_eq!(pyramid.hstar().coeffs(), &[1, 0, 1, 0, 1]);
        assert!(pyramid.is_pyramid());
        assert_eq!(classify_trinomial_group(&pyramid).unwrap(), None);
    }

    #[test]
    fn single_coordinate_census_is_trivial() {
        let bounds = EnumerationBounds::new(1, 12, 2);
        let groups = enumerate_groups(&bounds).unwrap();
        assert_eq!(groups.len(), 1);
        assert_eq!(groups[0].order(), 1);
    }

    #[test]
    fn two_coordinate_exponent_two_census() {
        let mut bounds = EnumerationBounds::new(2, 2, 1);
        bounds.integer_heights_only = false;
        let groups = enumerate_groups(&bounds).unwrap();
        let matrices: BTreeSet<Vec<Vec<u64>>> =
            groups.iter().map(|g| g.element_matrix()).collect();
        let expected: BTreeSet<Vec<Vec<u64>>> = [
            vec![vec![0, 0]],
            vec![vec![0, 0], vec![0, 1]],
            vec![vec![0, 0], vec![1, 1]],
        ]
        .into_iter()
        .collect();
        assert_eq!(matrices, expected);

        bounds.integer_heights_only = true;
        let groups = enumerate_groups(&bounds).unwrap();
        let matrices: BTreeSet<Vec<Vec<u64>>> =
            groups.iter().map(|g| g.element_matrix()).collect();
        let expected: BTreeSet<Vec<Vec<u64>>> =
            [vec![vec![0, 0]], vec![vec![0, 0], vec![1, 1]]]
                .into_iter()
                .collect();
        assert_eq!(matrices, expected);
    }

    /// Canonical keys of all subspaces of F_2^4, minimized by hand over the
    /// 24 coordinate permutations, to cross-check the census lanes.
    fn brute_force_exponent_two_orbits(even_heights: bool) -> BTreeSet<Vec<u64>> {
        let vectors: Vec<Vec<u64>> = (0..16u64)
            .map(|mask| (0..4).map(|i| (mask >> i) & 1).collect())
            .collect();
        let add = |x: &[u64], y: &[u64]| -> Vec<u64> {
            x.iter().zip(y).map(|(a, b)| (a + b) % 2).collect()
        };
        let mut subspaces: BTreeSet<Vec<Vec<u64>>> = BTreeSet::new();
        subspaces.insert(vec![vectors[0].clone()]);
        for v in &vectors[1..] {
            subspaces.insert(vec![vectors[0].clone(), v.clone()]);
        }
        for v in &vectors[1..] {
            for w in &vectors[1..] {
                let elems: BTreeSet<Vec<u64>> =
                    [vectors[0].clone(), v.clone(), w.clone(), add(v, w)]
                        .into_iter()
                        .collect();
                if elems.len() == 4 {
                    subspaces.insert(elems.into_iter().collect());
                }
            }
        }
        assert_eq!(subspaces.len(), 1 + 15 + 35);
        subspaces
            .into_iter()
            .filter(|s| {
                !even_heights || s.iter().all(|v| v.iter().sum::<u64>() % 2 == 0)
            })
            .map(|s| {
                (0..4usize)
                    .permutations(4)
                    .map(|perm| {
                        let rows: Vec<Vec<u64>> = s
                            .iter()
                            .map(|v| perm.iter().map(|&j| v[j]).collect::<Vec<u64>>())
                            .sorted()
                            .collect();
                        (0..4)
                            .flat_map(|j| rows.iter().map(move |r| r[j]))
                            .collect::<Vec<u64>>()
                    })
                    .min()
                    .unwrap()
            })
            .collect()
    }

    #[test]
    fn census_matches_brute_force_orbits() {
        for even_heights in [false, true] {
            let mut bounds = EnumerationBounds::new(4, 4, 2);
            bounds.orders = [2].into_iter().collect();
            bounds.integer_heights_only = even_heights;
            let groups = enumerate_groups(&bounds).unwrap();
            let orbits = brute_force_exponent_two_orbits(even_heights);
            assert_eq!(groups.len(), orbits.len(), "heights={even_heights}");
            let census_keys: BTreeSet<Vec<u64>> = groups
                .iter()
                .map(|g| g.canonical_key().unwrap())
                .collect();
            assert_eq!(census_keys, orbits, "heights={even_heights}");
        }
    }

    #[test]
    fn census_is_duplicate_free_and_deterministic() {
        let mut bounds = EnumerationBounds::new(4, 8, 2);
        bounds.orders = [2, 4].into_iter().collect();
        let groups = enumerate_groups(&bounds).unwrap();
        let keys: BTreeSet<Vec<u64>> = groups
            .iter()
            .map(|g| g.canonical_key().unwrap())
            .collect();
        assert_eq!(keys.len(), groups.len());

        let again = enumerate_groups(&bounds).unwrap();
        assert_eq!(groups.len(), again.len());
        for (a, b) in groups.iter().zip(&again) {
            assert_eq!(a, b);
            assert_eq!(
                a.generators().iter().map(|e| e.coords()).collect::<Vec<_>>(),
                b.generators().iter().map(|e| e.coords()).collect::<Vec<_>>()
            );
        }
    }

    #[test]
    fn census_budget_is_enforced() {
        let mut bounds = EnumerationBounds::new(5, 9, 2);
        bounds.budget = Some(5);
        match enumerate_groups(&bounds) {
            Err(Error::BudgetExceeded { scanned }) => assert!(scanned >= 5),
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    #[test]
    fn verification_at_dimension_five() {
        let mut bounds = EnumerationBounds::new(6, 9, 2);
        bounds.orders = [2, 3, 4, 6, 9].into_iter().collect();
        let report = verify_classification(2, 5, &bounds).unwrap();
        assert_eq!(report.unexpected, 0);
        assert_eq!(
            report.m_values(),
            [3, 4, 6, 8, 9].into_iter().collect::<BTreeSet<u64>>()
        );
        assert!(report.is_unique_per_m());
        let matched: BTreeSet<String> = report
            .findings
            .iter()
            .filter_map(|f| f.matched_case.clone())
            .collect();
        let expected: BTreeSet<String> =
            ["a3:2", "a4-3k:2", "a6:2", "a8:2", "c:2:2:2"]
                .into_iter()
                .map(String::from)
                .collect();
        assert_eq!(matched, expected);
        assert!(report.to_jsonl().unwrap().lines().count() == report.findings.len());
    }

    #[test]
    fn verification_at_dimension_four_finds_nothing() {
        let bounds = EnumerationBounds::new(5, 12, 2);
        let report = verify_classification(2, 4, &bounds).unwrap();
        assert!(report.findings.is_empty());
        assert!(report.groups_scanned > 0);
    }

    #[test]
    fn verification_rejects_inconsistent_parameters() {
        let bounds = EnumerationBounds::new(6, 9, 2);
        assert!(matches!(
            verify_classification(1, 5, &bounds),
            Err(Error::RangeViolated { name: "k", .. })
        ));
        assert!(matches!(
            verify_classification(2, 2, &bounds),
            Err(Error::NumericalConditionViolated { .. })
        ));
        assert!(matches!(
            verify_classification(2, 7, &bounds),
            Err(Error::InvalidSpec(_))
        ));
    }

    #[test]
    fn small_conjecture_scan_finds_no_counterexample() {
        for n in 1..=4 {
            let bounds = EnumerationBounds::new(n, 8, 3);
            let scan = conjecture_scan(&bounds).unwrap();
            assert!(scan.counterexample.is_none(), "n={n}");
            assert!(scan.scanned >= 1);
            if n >= 3 {
                // the cyclic order-5 group with coordinates (1,2,2)/5 has
                // h* = 1 + 2t + 2t^2
                assert!(scan.matching >= 1, "n={n}");
            }
        }
    }

    #[test]
    fn elementary_census_covers_rank_three() {
        let mut bounds = EnumerationBounds::new(4, 8, 3);
        bounds.elementary = Some(2);
        let (groups, candidates) = enumerate_groups_with_count(&bounds).unwrap();
        // subspaces of F_2^4 of rank <= 3
        assert_eq!(candidates, 15 + 35 + 15);
        assert!(groups.iter().any(|g| g.rank() == 3));
        assert!(groups.iter().all(|g| g
            .elements()
            .iter()
            .all(|e| e.height().is_some())));
        let a4 = trinomial_family(&"a4-4k:1".parse().unwrap()).unwrap();
        let key = a4.canonical_key().unwrap();
        assert!(groups
            .iter()
            .any(|g| g.canonical_key().unwrap() == key));
    }
}
