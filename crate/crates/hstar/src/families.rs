//! Constructions that realize prescribed h*-polynomials: pyramids, Cayley
//! polytopes of segments, cyclic groups with paired coordinates, the
//! binomial families 1 + (p^r - 1) t^k, and the seven trinomial families
//! 1 + (m - 2) t^k + t^(2k).

use std::fmt;
use std::str::FromStr;

use crate::codes::{is_prime, simplex_code_generator_value_order};
use crate::error::{Error, Result};
use crate::group::{GroupElement, SimplexGroup};
use crate::polynomial::HStarPolynomial;
use crate::simplex::LatticeSimplex;

/// Pyramid over a simplex: the base lifted into a hyperplane plus a new apex
/// one step off it. Volume and h*-polynomial are unchanged; the quotient
/// group gains one vanishing coordinate.
pub fn lattice_pyramid(s: &LatticeSimplex) -> LatticeSimplex {
    let d = s.dim();
    let mut vertices: Vec<Vec<i64>> = s
        .vertices()
        .iter()
        .map(|v| {
            let mut w = v.clone();
            w.push(0);
            w
        })
        .collect();
    let mut apex = vec![0; d + 1];
    apex[d] = 1;
    vertices.push(apex);
    LatticeSimplex::new(vertices).expect("an apex off the base hyperplane keeps full dimension")
}

/// Joint embedding of several polytopes into separated parallel slices: the
/// i-th factor is placed at the i-th vertex of a standard simplex, with the
/// first slice coordinate dropped so the result stays full-dimensional.
#[derive(Clone, Debug)]
pub struct CayleyPolytope {
    vertices: Vec<Vec<i64>>,
    dim: usize,
}

impl CayleyPolytope {
    pub fn vertices(&self) -> &[Vec<i64>] {
        &self.vertices
    }

    /// Dimension of the ambient space.
    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    /// Reinterpret as a simplex; requires exactly ambient_dim + 1 vertices
    /// in general position.
    pub fn into_simplex(self) -> Result<LatticeSimplex> {
        if self.vertices.len() != self.dim + 1 {
            return Err(Error::DimensionMismatch(format!(
                "{} vertices cannot form a {}-simplex",
                self.vertices.len(),
                self.dim
            )));
        }
        LatticeSimplex::new(self.vertices)
    }
}

pub fn cayley(factors: &[Vec<Vec<i64>>]) -> Result<CayleyPolytope> {
    let t = factors.len();
    if t == 0 {
        return Err(Error::DimensionMismatch("no factors given".into()));
    }
    let Some(first_vertex) = factors[0].first() else {
        return Err(Error::DimensionMismatch("factor 0 has no vertices".into()));
    };
    let n = first_vertex.len();
    for (i, f) in factors.iter().enumerate() {
        if f.is_empty() {
            return Err(Error::DimensionMismatch(format!(
                "factor {i} has no vertices"
            )));
        }
        if let Some(bad) = f.iter().find(|v| v.len() != n) {
            return Err(Error::DimensionMismatch(format!(
                "factor {i} has a vertex with {} coordinates, expected {n}",
                bad.len()
            )));
        }
    }
    let mut vertices = Vec::new();
    for (i, f) in factors.iter().enumerate() {
        for v in f {
            let mut w = vec![0i64; t - 1];
            if i >= 1 {
                w[i - 1] = 1;
            }
            w.extend_from_slice(v);
            vertices.push(w);
        }
    }
    Ok(CayleyPolytope {
        vertices,
        dim: t - 1 + n,
    })
}

/// Cyclic group of order m in (Q/Z)^(2k) whose generator pairs a_i/m with
/// (m - a_i)/m, so every nonzero element has height exactly k and the
/// h*-polynomial is 1 + (m - 1) t^k. Entries are normalized into (0, m/2]
/// and must be coprime to m.
pub fn white_cayley_group(k: u64, m: u64, entries: &[u64]) -> Result<SimplexGroup> {
    if m < 2 {
        return Err(Error::RangeViolated {
            name: "m",
            value: m as i64,
            range: "2..".into(),
        });
    }
    if k == 0 {
        return Err(Error::RangeViolated {
            name: "k",
            value: 0,
            range: "1..".into(),
        });
    }
    if entries.len() as u64 != k {
        return Err(Error::InvalidSpec(format!(
            "expected {k} pair entries, got {}",
            entries.len()
        )));
    }
    let mut coords = Vec::with_capacity(2 * entries.len());
    for &raw in entries {
        let a = raw % m;
        if num::integer::gcd(a, m) != 1 {
            return Err(Error::NotCoprime {
                value: raw as i64,
                modulus: m as i64,
            });
        }
        let a = if 2 * a > m { m - a } else { a };
        coords.push(a);
        coords.push(m - a);
    }
    let gen = GroupElement::new(m, coords);
    debug_assert_eq!(gen.order(), m);
    Ok(SimplexGroup::from_structure(
        2 * entries.len(),
        m,
        vec![gen],
        vec![m],
    ))
}

/// Elementary p-group of rank r in (Q/Z)^(d+1) with h* = 1 + (p^r - 1) t^k:
/// the constant-weight code generator, doubled against its negative for odd
/// p, tiles the d + 1 coordinates.
pub fn binomial_family(p: u64, r: u32, k: u64, d: u64) -> Result<SimplexGroup> {
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
    if k == 0 {
        return Err(Error::RangeViolated {
            name: "k",
            value: 0,
            range: "1..".into(),
        });
    }
    if d == 0 {
        return Err(Error::RangeViolated {
            name: "d",
            value: 0,
            range: "1..".into(),
        });
    }
    let p_r = p
        .checked_pow(r)
        .ok_or_else(|| Error::Overflow(format!("{p}^{r} exceeds u64")))?;
    let p_r1 = p_r / p;
    let lhs = (p_r - p_r1)
        .checked_mul(d + 1)
        .ok_or_else(|| Error::Overflow("family relation exceeds u64".into()))?;
    let rhs = (2 * k)
        .checked_mul(p_r - 1)
        .ok_or_else(|| Error::Overflow("family relation exceeds u64".into()))?;
    if lhs != rhs {
        return Err(Error::NumericalConditionViolated {
            relation: "(p^r - p^(r-1)) (d + 1) = 2 k (p^r - 1)".into(),
            detail: format!("p={p} r={r} k={k} d={d} gives {lhs} != {rhs}"),
        });
    }
    let code = simplex_code_generator_value_order(p, r)?;
    let block = if p == 2 {
        code.cols() as u64
    } else {
        2 * code.cols() as u64
    };
    if (d + 1) % block != 0 {
        return Err(Error::DivisibilityViolated(format!(
            "block width {block} does not divide d + 1 = {}",
            d + 1
        )));
    }
    let reps = ((d + 1) / block) as usize;

    let mut gens = Vec::with_capacity(r as usize);
    for i in 0..r as usize {
        let mut row = Vec::with_capacity((d + 1) as usize);
        for _ in 0..reps {
            row.extend_from_slice(code.row(i));
            if p > 2 {
                row.extend(code.row(i).iter().map(|&c| (p - c) % p));
            }
        }
        let g = GroupElement::new(p, row);
        debug_assert_eq!(g.order(), p);
        debug_assert_eq!(g.height(), Some(k));
        gens.push(g);
    }
    Ok(SimplexGroup::from_structure(
        (d + 1) as usize,
        p,
        gens,
        vec![p; r as usize],
    ))
}

/// The classified families with h* = 1 + (m - 2) t^k + t^(2k). The five
/// fixed-exponent cases cover m in {3, 4, 6, 8}; the two code-based series
/// cover m = 2^l and m = 3^l.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum FamilySpec {
    /// m = 3: one generator of order 3, d = 3k - 1.
    A3 { k: u64 },
    /// m = 4: one generator of order 4, d = 3k - 1.
    A4Dim3k { k: u64 },
    /// m = 4: two generators of order 2, d = 4k - 1.
    A4Dim4k { k: u64 },
    /// m = 6: one generator of order 6, d = 3k - 1.
    A6 { k: u64 },
    /// m = 8: generators of orders 2 and 4, d = 3k - 1.
    A8 { k: u64 },
    /// m = 2^l: elementary 2-group from the binary constant-weight code,
    /// k = 2^(l-3) a, d = 2^(l-1) a - 1.
    B { k: u64, a: u64, l: u32 },
    /// m = 3^l: elementary 3-group from the ternary constant-weight code,
    /// k = 3^(l-2) a, d = 3^(l-1) a - 1.
    C { k: u64, a: u64, l: u32 },
}

impl FamilySpec {
    pub fn k(&self) -> u64 {
        match *self {
            FamilySpec::A3 { k }
            | FamilySpec::A4Dim3k { k }
            | FamilySpec::A4Dim4k { k }
            | FamilySpec::A6 { k }
            | FamilySpec::A8 { k }
            | FamilySpec::B { k, .. }
            | FamilySpec::C { k, .. } => k,
        }
    }

    /// Group order; the middle h*-coefficient is m - 2.
    pub fn m(&self) -> Result<u64> {
        Ok(match *self {
            FamilySpec::A3 { .. } => 3,
            FamilySpec::A4Dim3k { .. } | FamilySpec::A4Dim4k { .. } => 4,
            FamilySpec::A6 { .. } => 6,
            FamilySpec::A8 { .. } => 8,
            FamilySpec::B { l, .. } => 2u64
                .checked_pow(l)
                .ok_or_else(|| Error::Overflow(format!("2^{l} exceeds u64")))?,
            FamilySpec::C { l, .. } => 3u64
                .checked_pow(l)
                .ok_or_else(|| Error::Overflow(format!("3^{l} exceeds u64")))?,
        })
    }

    /// Dimension of the constructed simplex.
    pub fn dim(&self) -> Result<u64> {
        let times = |f: u64, k: u64| {
            f.checked_mul(k)
                .and_then(|n| n.checked_sub(1))
                .ok_or_else(|| Error::Overflow("dimension exceeds u64".into()))
        };
        match *self {
            FamilySpec::A3 { k }
            | FamilySpec::A4Dim3k { k }
            | FamilySpec::A6 { k }
            | FamilySpec::A8 { k } => times(3, k),
            FamilySpec::A4Dim4k { k } => times(4, k),
            FamilySpec::B { a, l, .. } => {
                let half = 2u64
                    .checked_pow(l - 1)
                    .ok_or_else(|| Error::Overflow(format!("2^{} exceeds u64", l - 1)))?;
                times(half, a)
            }
            FamilySpec::C { a, l, .. } => {
                let third = 3u64
                    .checked_pow(l - 1)
                    .ok_or_else(|| Error::Overflow(format!("3^{} exceeds u64", l - 1)))?;
                times(third, a)
            }
        }
    }

    pub fn expected_hstar(&self) -> Result<HStarPolynomial> {
        let k = self.k() as usize;
        let m = self.m()?;
        let mut coeffs = vec![0u64; 2 * k + 1];
        coeffs[0] = 1;
        coeffs[k] = m - 2;
        coeffs[2 * k] += 1;
        Ok(HStarPolynomial::new(coeffs))
    }

    pub fn validate(&self) -> Result<()> {
        if self.k() == 0 {
            return Err(Error::RangeViolated {
                name: "k",
                value: 0,
                range: "1..".into(),
            });
        }
        match *self {
            FamilySpec::B { k, a, l } => {
                if l < 3 {
                    return Err(Error::RangeViolated {
                        name: "l",
                        value: l as i64,
                        range: "3..".into(),
                    });
                }
                if a == 0 {
                    return Err(Error::RangeViolated {
                        name: "a",
                        value: 0,
                        range: "1..".into(),
                    });
                }
                if (a, l) == (1, 3) {
                    return Err(Error::InvalidSpec(
                        "the b family excludes (a, l) = (1, 3)".into(),
                    ));
                }
                let expect = 2u64
                    .checked_pow(l - 3)
                    .and_then(|f| f.checked_mul(a))
                    .ok_or_else(|| Error::Overflow("2^(l-3) a exceeds u64".into()))?;
                if k != expect {
                    return Err(Error::NumericalConditionViolated {
                        relation: "k = 2^(l-3) a".into(),
                        detail: format!("a={a} l={l} requires k={expect}, got {k}"),
                    });
                }
            }
            FamilySpec::C { k, a, l } => {
                if l < 2 {
                    return Err(Error::RangeViolated {
                        name: "l",
                        value: l as i64,
                        range: "2..".into(),
                    });
                }
                if a == 0 {
                    return Err(Error::RangeViolated {
                        name: "a",
                        value: 0,
                        range: "1..".into(),
                    });
                }
                if (a, l) == (1, 2) {
                    return Err(Error::InvalidSpec(
                        "the c family excludes (a, l) = (1, 2)".into(),
                    ));
                }
                let expect = 3u64
                    .checked_pow(l - 2)
                    .and_then(|f| f.checked_mul(a))
                    .ok_or_else(|| Error::Overflow("3^(l-2) a exceeds u64".into()))?;
                if k != expect {
                    return Err(Error::NumericalConditionViolated {
                        relation: "k = 3^(l-2) a".into(),
                        detail: format!("a={a} l={l} requires k={expect}, got {k}"),
                    });
                }
            }
            _ => {}
        }
        Ok(())
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            FamilySpec::A3 { k } => write!(f, "a3:{k}"),
            FamilySpec::A4Dim3k { k } => write!(f, "a4-3k:{k}"),
            FamilySpec::A4Dim4k { k } => write!(f, "a4-4k:{k}"),
            FamilySpec::A6 { k } => write!(f, "a6:{k}"),
            FamilySpec::A8 { k } => write!(f, "a8:{k}"),
            FamilySpec::B { k, a, l } => write!(f, "b:{k}:{a}:{l}"),
            FamilySpec::C { k, a, l } => write!(f, "c:{k}:{a}:{l}"),
        }
    }
}

impl FromStr for FamilySpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let num = |text: &str| -> Result<u64> {
            text.parse::<u64>()
                .map_err(|_| Error::Parse(format!("expected an integer, got {text:?}")))
        };
        let one_arg = |parts: &[&str]| -> Result<u64> {
            if parts.len() != 2 {
                return Err(Error::InvalidSpec(format!(
                    "{} takes exactly one parameter k",
                    parts[0]
                )));
            }
            num(parts[1])
        };
        let three_args = |parts: &[&str]| -> Result<(u64, u64, u32)> {
            if parts.len() != 4 {
                return Err(Error::InvalidSpec(format!(
                    "{} takes parameters k:a:l",
                    parts[0]
                )));
            }
            let l = num(parts[3])?;
            let l = u32::try_from(l).map_err(|_| Error::Parse(format!("l = {l} too large")))?;
            Ok((num(parts[1])?, num(parts[2])?, l))
        };
        let spec = match parts[0] {
            "a3" => FamilySpec::A3 { k: one_arg(&parts)? },
            "a4-3k" => FamilySpec::A4Dim3k { k: one_arg(&parts)? },
            "a4-4k" => FamilySpec::A4Dim4k { k: one_arg(&parts)? },
            "a6" => FamilySpec::A6 { k: one_arg(&parts)? },
            "a8" => FamilySpec::A8 { k: one_arg(&parts)? },
            "b" => {
                let (k, a, l) = three_args(&parts)?;
                FamilySpec::B { k, a, l }
            }
            "c" => {
                let (k, a, l) = three_args(&parts)?;
                FamilySpec::C { k, a, l }
            }
            other => return Err(Error::UnknownKind(other.to_string())),
        };
        spec.validate()?;
        Ok(spec)
    }
}

fn blocks(parts: &[(u64, u64)]) -> Vec<u64> {
    let mut out = Vec::new();
    for &(value, count) in parts {
        out.extend(std::iter::repeat(value).take(count as usize));
    }
    out
}

/// Group whose simplex has h* = 1 + (m - 2) t^k + t^(2k).
pub fn trinomial_family(spec: &FamilySpec) -> Result<SimplexGroup> {
    spec.validate()?;
    let n = (spec.dim()? + 1) as usize;
    let group = match *spec {
        FamilySpec::A3 { k } => SimplexGroup::from_structure(
            n,
            3,
            vec![GroupElement::new(3, blocks(&[(1, 3 * k)]))],
            vec![3],
        ),
        FamilySpec::A4Dim3k { k } => SimplexGroup::from_structure(
            n,
            4,
            vec![GroupElement::new(4, blocks(&[(1, 2 * k), (2, k)]))],
            vec![4],
        ),
        FamilySpec::A4Dim4k { k } => SimplexGroup::from_structure(
            n,
            2,
            vec![
                GroupElement::new(2, blocks(&[(1, 2 * k), (0, 2 * k)])),
                GroupElement::new(2, blocks(&[(1, 4 * k)])),
            ],
            vec![2, 2],
        ),
        FamilySpec::A6 { k } => SimplexGroup::from_structure(
            n,
            6,
            vec![GroupElement::new(6, blocks(&[(1, k), (2, k), (3, k)]))],
            vec![6],
        ),
        FamilySpec::A8 { k } => SimplexGroup::from_structure(
            n,
            4,
            vec![
                GroupElement::new(4, blocks(&[(2, k), (0, k), (2, k)])),
                GroupElement::new(4, blocks(&[(1, k), (1, k), (2, k)])),
            ],
            vec![2, 4],
        ),
        FamilySpec::B { a, l, .. } => {
            let code = simplex_code_generator_value_order(2, l - 1)?;
            let mut gens = Vec::with_capacity(l as usize);
            for i in 0..code.rows() {
                let mut row = Vec::with_capacity(n);
                for _ in 0..a {
                    row.extend_from_slice(code.row(i));
                    row.push(0);
                }
                gens.push(GroupElement::new(2, row));
            }
            gens.push(GroupElement::new(2, vec![1; n]));
            SimplexGroup::from_structure(n, 2, gens, vec![2; l as usize])
        }
        FamilySpec::C { a, l, .. } => {
            let code = simplex_code_generator_value_order(3, l - 1)?;
            let mut gens = Vec::with_capacity(l as usize);
            for i in 0..code.rows() {
                let mut row = Vec::with_capacity(n);
                for _ in 0..a {
                    row.extend_from_slice(code.row(i));
                    row.extend(code.row(i).iter().map(|&c| (3 - c) % 3));
                    row.push(0);
                }
                gens.push(GroupElement::new(3, row));
            }
            gens.push(GroupElement::new(3, vec![1; n]));
            SimplexGroup::from_structure(n, 3, gens, vec![3; l as usize])
        }
    };
    debug_assert_eq!(group.hstar(), spec.expected_hstar()?);
    Ok(group)
}
