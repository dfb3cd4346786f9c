//! Restricted root systems in fixed textbook coordinates.
//!
//! `A_r` lives in the trace-zero hyperplane of `R^{r+1}`; `B_r`, `C_r`,
//! `D_r` and `BC_r` live in `R^r`. Products concatenate coordinates and
//! simple roots in factor order.

mod weights;
mod weyl;

use std::fmt;

use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, dot, q, zeros, QMat, QVec, Q};

pub use weights::{ChamberMembership, OmegaCoordinates};
pub use weyl::{WeylElement, DEFAULT_WEYL_CAP};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    BC,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::A => "A",
            Family::B => "B",
            Family::C => "C",
            Family::D => "D",
            Family::BC => "BC",
        };
        f.write_str(s)
    }
}

/// Root-space dimensions by root shape: `pm` for `e_i ± e_j` (and the
/// `e_i - e_j` of type A), `single` for `e_i`, `double` for `2e_i`.
/// Entries for shapes absent from a family are ignored.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MultiplicityProfile {
    pub pm: u32,
    pub single: u32,
    pub double: u32,
}

impl MultiplicityProfile {
    pub const fn new(pm: u32, single: u32, double: u32) -> Self {
        Self { pm, single, double }
    }

    pub const fn uniform(m: u32) -> Self {
        Self { pm: m, single: m, double: m }
    }

    fn check(&self, family: Family) -> Result<()> {
        let need = |v: u32, what: &str| {
            if v == 0 {
                Err(Error::InvalidMultiplicity(format!("{family}: {what} multiplicity must be positive")))
            } else {
                Ok(())
            }
        };
        need(self.pm, "e_i ± e_j")?;
        match family {
            Family::A | Family::D => Ok(()),
            Family::B => need(self.single, "e_i"),
            Family::C => need(self.double, "2e_i"),
            Family::BC => {
                need(self.single, "e_i")?;
                need(self.double, "2e_i")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorType {
    pub family: Family,
    pub rank: usize,
    pub multiplicities: MultiplicityProfile,
}

impl FactorType {
    pub fn new(family: Family, rank: usize, multiplicities: MultiplicityProfile) -> Self {
        Self { family, rank, multiplicities }
    }

    fn ambient_dim(&self) -> usize {
        match self.family {
            Family::A => self.rank + 1,
            _ => self.rank,
        }
    }
}

impl fmt::Display for FactorType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family, self.rank)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Root {
    pub vector: QVec,
    pub multiplicity: u32,
    /// Coefficients in the simple-root basis (nonnegative integers).
    pub simple_coeffs: Vec<i64>,
}

#[derive(Debug, Clone)]
pub struct RootSystem {
    factors: Vec<FactorType>,
    /// Coordinate offset of each factor.
    offsets: Vec<usize>,
    ambient_dim: usize,
    simple_roots: Vec<QVec>,
    positive_roots: Vec<Root>,
    /// Linear forms whose common kernel is `a` inside the ambient space.
    a_equations: Vec<QVec>,
    gram: QMat,
    gram_inv: QMat,
}

impl PartialEq for RootSystem {
    fn eq(&self, other: &Self) -> bool {
        self.factors == other.factors
    }
}

/// Builds the standard realization of an irreducible restricted root system.
pub fn build_root_system(family: Family, rank: usize, multiplicities: MultiplicityProfile) -> Result<RootSystem> {
    RootSystem::product(&[FactorType::new(family, rank, multiplicities)])
}

impl RootSystem {
    pub fn new(family: Family, rank: usize, multiplicities: MultiplicityProfile) -> Result<Self> {
        build_root_system(family, rank, multiplicities)
    }

    /// All multiplicities equal to one.
    pub fn reduced(family: Family, rank: usize) -> Result<Self> {
        build_root_system(family, rank, MultiplicityProfile::uniform(1))
    }

    pub fn product(factors: &[FactorType]) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidRootSystem("no factors".into()));
        }
        for f in factors {
            let min_rank = if f.family == Family::D { 3 } else { 1 };
            if f.rank < min_rank {
                return Err(Error::InvalidRootSystem(format!(
                    "{} requires rank >= {min_rank}, got {}",
                    f.family, f.rank
                )));
            }
            f.multiplicities.check(f.family)?;
        }
        let ambient_dim: usize = factors.iter().map(FactorType::ambient_dim).sum();
        let mut offsets = Vec::new();
        let mut simple_roots = Vec::new();
        let mut positive = Vec::new();
        let mut a_equations = Vec::new();
        let mut off = 0;
        for f in factors {
            offsets.push(off);
            let (simple, pos) = factor_roots(f);
            let embed = |v: &[Q]| {
                let mut w = zeros(ambient_dim);
                w[off..off + v.len()].clone_from_slice(v);
                w
            };
            simple_roots.extend(simple.iter().map(|v| embed(v)));
            positive.extend(pos.iter().map(|(v, m)| (embed(v), *m)));
            if f.family == Family::A {
                a_equations.push(embed(&vec![Q::one(); f.rank + 1]));
            }
            off += f.ambient_dim();
        }
        let gram: QMat = simple_roots.iter().map(|a| simple_roots.iter().map(|b| dot(a, b)).collect()).collect();
        let gram_inv = rational::inverse(&gram).ok_or(Error::SingularGram)?;
        let mut sys = Self {
            factors: factors.to_vec(),
            offsets,
            ambient_dim,
            simple_roots,
            positive_roots: Vec::new(),
            a_equations,
            gram,
            gram_inv,
        };
        let mut roots = Vec::with_capacity(positive.len());
        for (v, m) in positive {
            let c = sys.simple_coefficients(&v).ok_or(Error::SingularGram)?;
            let simple_coeffs = c
                .iter()
                .map(|x| {
                    if x.is_integer() && !x.is_negative() {
                        Ok(num::ToPrimitive::to_i64(&x.to_integer()).unwrap_or(i64::MAX))
                    } else {
                        Err(Error::InvalidRootSystem("positive root is not a nonnegative integer combination".into()))
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            roots.push(Root { vector: v, multiplicity: m, simple_coeffs });
        }
        // Height, then lexicographic simple coefficients, for a stable order.
        roots.sort_by(|a, b| {
            let ha: i64 = a.simple_coeffs.iter().sum();
            let hb: i64 = b.simple_coeffs.iter().sum();
            ha.cmp(&hb).then_with(|| b.simple_coeffs.cmp(&a.simple_coeffs))
        });
        sys.positive_roots = roots;
        Ok(sys)
    }

    pub fn factors(&self) -> &[FactorType] {
        &self.factors
    }

    pub fn is_irreducible(&self) -> bool {
        self.factors.len() == 1
    }

    /// Family of an irreducible system.
    pub fn family(&self) -> Option<Family> {
        self.is_irreducible().then(|| self.factors[0].family)
    }

    pub fn rank(&self) -> usize {
        self.simple_roots.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    /// Coordinate ranges of each factor inside the ambient space.
    pub fn factor_ranges(&self) -> Vec<std::ops::Range<usize>> {
        self.factors
            .iter()
            .zip(&self.offsets)
            .map(|(f, &o)| o..o + f.ambient_dim())
            .collect()
    }

    /// Simple-root index range of each factor.
    pub fn factor_root_ranges(&self) -> Vec<std::ops::Range<usize>> {
        let mut start = 0;
        self.factors
            .iter()
            .map(|f| {
                let r = start..start + f.rank;
                start += f.rank;
                r
            })
            .collect()
    }

    pub fn simple_roots(&self) -> &[QVec] {
        &self.simple_roots
    }

    pub fn simple_root(&self, i: usize) -> Result<&QVec> {
        self.simple_roots.get(i).ok_or(Error::NotSimpleRoot)
    }

    /// Index of `alpha` among the simple roots.
    pub fn simple_index(&self, alpha: &[Q]) -> Result<usize> {
        self.simple_roots.iter().position(|a| a.as_slice() == alpha).ok_or(Error::NotSimpleRoot)
    }

    pub fn positive_roots(&self) -> &[Root] {
        &self.positive_roots
    }

    pub fn a_equations(&self) -> &[QVec] {
        &self.a_equations
    }

    pub fn gram(&self) -> &QMat {
        &self.gram
    }

    pub fn in_a(&self, v: &[Q]) -> bool {
        v.len() == self.ambient_dim && self.a_equations.iter().all(|e| dot(e, v).is_zero())
    }

    /// Orthogonal projection of an ambient vector onto `a`.
    pub fn project_to_a(&self, v: &[Q]) -> QVec {
        rational::project(&self.simple_roots, v)
    }

    /// Coefficients `c` with `v = Σ c_i α_i`, or `None` if `v ∉ span(Δ)`.
    pub fn simple_coefficients(&self, v: &[Q]) -> Option<QVec> {
        let rhs: QVec = self.simple_roots.iter().map(|a| dot(a, v)).collect();
        let c = rational::mat_vec(&self.gram_inv, &rhs);
        let back = self.combine(&c);
        (back.as_slice() == v).then_some(c)
    }

    /// `Σ c_i α_i`.
    pub fn combine(&self, c: &[Q]) -> QVec {
        let mut out = zeros(self.ambient_dim);
        for (ci, a) in c.iter().zip(&self.simple_roots) {
            if ci.is_zero() {
                continue;
            }
            for (o, x) in out.iter_mut().zip(a) {
                *o += ci * x;
            }
        }
        out
    }

    /// Sum of positive roots (without multiplicity): a regular dominant
    /// vector, positive on `a⁺ \ {0}`.
    pub fn rho2(&self) -> QVec {
        let mut out = zeros(self.ambient_dim);
        for r in &self.positive_roots {
            for (o, x) in out.iter_mut().zip(&r.vector) {
                *o += x;
            }
        }
        out
    }

    /// Number of roots in Σ⁺ (ignoring multiplicity).
    pub fn num_positive_roots(&self) -> usize {
        self.positive_roots.len()
    }

    /// `dim(G/K) = rank + Σ_{Σ⁺} mult`.
    pub fn symmetric_space_dim(&self) -> u64 {
        self.rank() as u64 + self.positive_roots.iter().map(|r| r.multiplicity as u64).sum::<u64>()
    }

    /// `s_α · φ = φ − 2 (φ,α)/(α,α) α` for a simple root `α`.
    pub fn simple_reflection(&self, alpha: &[Q], phi: &[Q]) -> Result<QVec> {
        let i = self.simple_index(alpha)?;
        Ok(self.reflect(i, phi))
    }

    /// Reflection in the `i`-th simple root.
    pub fn reflect(&self, i: usize, phi: &[Q]) -> QVec {
        let a = &self.simple_roots[i];
        let c = q(2) * dot(phi, a) / &self.gram[i][i];
        phi.iter().zip(a).map(|(p, x)| p - &c * x).collect()
    }

    /// Ambient matrix of the `i`-th simple reflection.
    pub fn reflection_matrix(&self, i: usize) -> QMat {
        let n = self.ambient_dim;
        let cols: QMat = (0..n).map(|j| self.reflect(i, &rational::unit(n, j))).collect();
        rational::transpose(&cols)
    }

    /// `div(X_a) = Σ_{α∈Σ} mult(α)·min(α(a), 0) = −Σ_{Σ⁺} mult(α)|α(a)|`.
    pub fn div_xa(&self, a: &[Q]) -> Q {
        -self
            .positive_roots
            .iter()
            .map(|r| q(r.multiplicity as i64) * dot(&r.vector, a).abs())
            .fold(Q::zero(), |acc, x| acc + x)
    }

    pub fn div_xa_f64(&self, a: &[f64]) -> f64 {
        -self
            .positive_roots
            .iter()
            .map(|r| {
                let v: f64 = r.vector.iter().zip(a).map(|(x, y)| rational::to_f64(x) * y).sum();
                r.multiplicity as f64 * v.abs()
            })
            .sum::<f64>()
    }

    /// Float copies of the simple roots.
    pub fn simple_roots_f64(&self) -> Vec<Vec<f64>> {
        self.simple_roots.iter().map(|v| rational::to_f64_vec(v)).collect()
    }

    pub fn label(&self) -> String {
        self.factors.iter().map(ToString::to_string).collect::<Vec<_>>().join("x")
    }
}

/// Simple roots and positive roots (with multiplicities) of one factor in
/// its own coordinates.
fn factor_roots(f: &FactorType) -> (Vec<QVec>, Vec<(QVec, u32)>) {
    let n = f.ambient_dim();
    let r = f.rank;
    let m = f.multiplicities;
    let e = |i: usize| rational::unit(n, i);
    let comb = |i: usize, si: i64, j: usize, sj: i64| {
        let mut v = zeros(n);
        v[i] = q(si);
        v[j] += q(sj);
        v
    };
    let mut simple = Vec::new();
    let mut pos = Vec::new();
    match f.family {
        Family::A => {
            for i in 0..r {
                simple.push(comb(i, 1, i + 1, -1));
            }
            for i in 0..n {
                for j in i + 1..n {
                    pos.push((comb(i, 1, j, -1), m.pm));
                }
            }
        }
        Family::B | Family::C | Family::BC | Family::D => {
            for i in 0..r.saturating_sub(1) {
                simple.push(comb(i, 1, i + 1, -1));
            }
            match f.family {
                Family::B | Family::BC => simple.push(e(r - 1)),
                Family::C => simple.push(rational::scale(&q(2), &e(r - 1))),
                Family::D => simple.push(comb(r - 2, 1, r - 1, 1)),
                Family::A => unreachable!(),
            }
            for i in 0..r {
                for j in i + 1..r {
                    pos.push((comb(i, 1, j, -1), m.pm));
                    pos.push((comb(i, 1, j, 1), m.pm));
                }
            }
            for i in 0..r {
                if matches!(f.family, Family::B | Family::BC) {
                    pos.push((e(i), m.single));
                }
                if matches!(f.family, Family::C | Family::BC) {
                    pos.push((rational::scale(&q(2), &e(i)), m.double));
                }
            }
        }
    }
    (simple, pos)
}

/// Parses `alpha3` / `a3` / `3` into a zero-based simple-root index.
pub fn parse_simple_root_label(label: &str, rank: usize) -> Result<usize> {
    let t = label.trim();
    let digits = t.trim_start_matches(|c: char| c.is_ascii_alphabetic() || c == '_');
    let i: usize = digits.parse().map_err(|_| Error::Parse(format!("bad simple root label {label:?}")))?;
    if i == 0 || i > rank {
        return Err(Error::Parse(format!("simple root label {label:?} out of range 1..={rank}")));
    }
    Ok(i - 1)
}

pub fn simple_root_label(i: usize) -> String {
    format!("alpha{}", i + 1)
}
