//! Dimension data of the real groups that appear in the obstruction catalog.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rootsys::{Family, FactorType, MultiplicityProfile, RootSystem};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Scalars {
    R,
    C,
    H,
}

impl Scalars {
    pub fn real_dim(self) -> u64 {
        match self {
            Scalars::R => 1,
            Scalars::C => 2,
            Scalars::H => 4,
        }
    }
}

/// A real Lie group by family and parameters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum GroupDescriptor {
    Sl { n: u64, field: Scalars },
    So { p: u64, q: u64 },
    /// Same dimensions and root data as `So`.
    Spin { p: u64, q: u64 },
    Su { p: u64, q: u64 },
    U { p: u64, q: u64 },
    Sp { p: u64, q: u64 },
    /// `Sp(2ℓ, R)`.
    SpReal { ell: u64 },
    /// `Sp(2ℓ, C)`.
    SpComplex { ell: u64 },
    SoComplex { n: u64 },
    /// `SO*(2n)`.
    SoStar { n: u64 },
    G2Split,
    F4Minus20,
    E6Minus14,
    E6Minus26,
    Compact { name: String, dim: u64 },
    Product { factors: Vec<GroupDescriptor> },
}

impl fmt::Display for GroupDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use GroupDescriptor::*;
        match self {
            Sl { n, field } => write!(f, "SL({n},{field:?})"),
            So { p, q } => write!(f, "SO({p},{q})"),
            Spin { p, q } => write!(f, "Spin({p},{q})"),
            Su { p, q } => write!(f, "SU({p},{q})"),
            U { p, q } => write!(f, "U({p},{q})"),
            Sp { p, q } => write!(f, "Sp({p},{q})"),
            SpReal { ell } => write!(f, "Sp({},R)", 2 * ell),
            SpComplex { ell } => write!(f, "Sp({},C)", 2 * ell),
            SoComplex { n } => write!(f, "SO({n},C)"),
            SoStar { n } => write!(f, "SO*({})", 2 * n),
            G2Split => f.write_str("G2(2)"),
            F4Minus20 => f.write_str("F4(-20)"),
            E6Minus14 => f.write_str("E6(-14)"),
            E6Minus26 => f.write_str("E6(-26)"),
            Compact { name, .. } => f.write_str(name),
            Product { factors } => {
                let parts: Vec<String> = factors.iter().map(ToString::to_string).collect();
                f.write_str(&parts.join(" x "))
            }
        }
    }
}

/// One simple factor of a restricted root system.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RootFactor {
    Classical(FactorType),
    /// A factor outside the realized families; only its rank and the
    /// multiplicities of its positive roots are recorded.
    Exceptional { label: String, rank: u64, multiplicities: Vec<u32> },
}

/// `(dim_K V, dim_R K, real rank)` for automorphism groups of forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct StandardRep {
    pub dim_v: u64,
    pub field_dim: u64,
    pub real_rank: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassicalGroupData {
    pub label: String,
    pub dim_g: u64,
    pub dim_k: u64,
    pub dim_sym: u64,
    /// Empty for compact groups.
    pub roots: Vec<RootFactor>,
    pub standard_rep: Option<StandardRep>,
}

impl ClassicalGroupData {
    /// The realized restricted root system (exceptional factors are not
    /// supported).
    pub fn root_system(&self) -> Result<RootSystem> {
        let mut factors = Vec::new();
        for r in &self.roots {
            match r {
                RootFactor::Classical(f) => factors.push(f.clone()),
                RootFactor::Exceptional { label, .. } => {
                    return Err(Error::UnsupportedGroup(format!("{}: {label} root system is not realized", self.label)))
                }
            }
        }
        if factors.is_empty() {
            return Err(Error::UnsupportedGroup(format!("{} is compact", self.label)));
        }
        RootSystem::product(&factors)
    }

    /// `(rank, Σ_{Σ⁺} mult)` from the root data.
    pub fn rank_and_root_dims(&self) -> Result<(u64, u64)> {
        let mut rank = 0;
        let mut sum = 0;
        for r in &self.roots {
            match r {
                RootFactor::Classical(f) => {
                    let sys = RootSystem::product(std::slice::from_ref(f))?;
                    rank += sys.rank() as u64;
                    sum += sys.positive_roots().iter().map(|x| x.multiplicity as u64).sum::<u64>();
                }
                RootFactor::Exceptional { rank: k, multiplicities, .. } => {
                    rank += k;
                    sum += multiplicities.iter().map(|&m| m as u64).sum::<u64>();
                }
            }
        }
        Ok((rank, sum))
    }

    pub fn real_rank(&self) -> Result<u64> {
        Ok(self.rank_and_root_dims()?.0)
    }
}

/// `dim(G/K)` from the closed-form table.
pub fn dim_symmetric_space(g: &GroupDescriptor) -> Result<u64> {
    use GroupDescriptor::*;
    Ok(match g {
        Sl { n, field } => match field {
            Scalars::R => (n * n + n).saturating_sub(2) / 2,
            Scalars::C => (n * n).saturating_sub(1),
            Scalars::H => n.saturating_sub(1) * (2 * n + 1),
        },
        So { p, q } | Spin { p, q } => p * q,
        Su { p, q } | U { p, q } => 2 * p * q,
        Sp { p, q } => 4 * p * q,
        SpReal { ell } => ell * (ell + 1),
        SpComplex { ell } => ell * (2 * ell + 1),
        SoComplex { n } => n * n.saturating_sub(1) / 2,
        SoStar { n } => n * n.saturating_sub(1),
        G2Split => 8,
        F4Minus20 => 16,
        E6Minus14 => 32,
        E6Minus26 => 26,
        Compact { .. } => 0,
        Product { factors } => factors.iter().map(dim_symmetric_space).sum::<Result<u64>>()?,
    })
}

fn classical(family: Family, rank: u64, m: MultiplicityProfile) -> Vec<RootFactor> {
    vec![RootFactor::Classical(FactorType::new(family, rank as usize, m))]
}

fn a1_squared(m: u32) -> Vec<RootFactor> {
    let f = RootFactor::Classical(FactorType::new(Family::A, 1, MultiplicityProfile::uniform(m)));
    vec![f.clone(), f]
}

/// Restricted roots of the automorphism group of a form of index `b` with
/// `a − b` extra anisotropic directions (`a ≥ b`), root-space dimensions
/// `pm`, `single` per extra direction and `double`.
fn form_group_roots(a: u64, b: u64, pm: u32, single_per: u32, double: u32) -> Vec<RootFactor> {
    if a == b {
        classical(Family::C, b, MultiplicityProfile::new(pm, 0, double))
    } else {
        classical(Family::BC, b, MultiplicityProfile::new(pm, single_per * (a - b) as u32, double))
    }
}

fn ordered(p: u64, q: u64) -> (u64, u64) {
    (p.max(q), p.min(q))
}

/// Dimensions, restricted root data and standard representation.
pub fn group_data(g: &GroupDescriptor) -> Result<ClassicalGroupData> {
    use GroupDescriptor::*;
    let label = g.to_string();
    let unsupported = |why: &str| Err(Error::UnsupportedGroup(format!("{label}: {why}")));
    let rep = |dim_v: u64, field_dim: u64, real_rank: u64| Some(StandardRep { dim_v, field_dim, real_rank });
    let (dim_g, dim_k, roots, standard_rep) = match g {
        Sl { n, field } => {
            if *n == 0 {
                return unsupported("n must be positive");
            }
            let d = field.real_dim();
            let (dim_g, dim_k) = match field {
                Scalars::R => (n * n - 1, n * (n - 1) / 2),
                Scalars::C => (2 * (n * n - 1), n * n - 1),
                Scalars::H => (4 * n * n - 1, n * (2 * n + 1)),
            };
            let roots = if *n == 1 { vec![] } else { classical(Family::A, n - 1, MultiplicityProfile::uniform(d as u32)) };
            (dim_g, dim_k, roots, None)
        }
        So { p, q } | Spin { p, q } => {
            let (a, b) = ordered(*p, *q);
            let roots = if b == 0 {
                vec![]
            } else if a == b {
                match b {
                    1 => return unsupported("SO(1,1) is abelian"),
                    2 => a1_squared(1),
                    _ => classical(Family::D, b, MultiplicityProfile::uniform(1)),
                }
            } else {
                classical(Family::B, b, MultiplicityProfile::new(1, (a - b) as u32, 1))
            };
            let n = p + q;
            (n * n.saturating_sub(1) / 2, p * p.saturating_sub(1) / 2 + q * q.saturating_sub(1) / 2, roots, rep(n, 1, b))
        }
        Su { p, q } | U { p, q } => {
            let (a, b) = ordered(*p, *q);
            let roots = if b == 0 { vec![] } else { form_group_roots(a, b, 2, 2, 1) };
            let n = p + q;
            let centre = matches!(g, U { .. }) as u64;
            if n == 0 {
                return unsupported("empty form");
            }
            (n * n - 1 + centre, p * p + q * q - 1 + centre, roots, rep(n, 2, b))
        }
        Sp { p, q } => {
            let (a, b) = ordered(*p, *q);
            let roots = if b == 0 { vec![] } else { form_group_roots(a, b, 4, 4, 3) };
            let n = p + q;
            (n * (2 * n + 1), p * (2 * p + 1) + q * (2 * q + 1), roots, rep(n, 4, b))
        }
        SpReal { ell } => {
            (ell * (2 * ell + 1), ell * ell, classical(Family::C, *ell, MultiplicityProfile::uniform(1)), rep(2 * ell, 1, *ell))
        }
        SpComplex { ell } => (
            2 * ell * (2 * ell + 1),
            ell * (2 * ell + 1),
            classical(Family::C, *ell, MultiplicityProfile::uniform(2)),
            rep(2 * ell, 2, *ell),
        ),
        SoComplex { n } => {
            let m = n / 2;
            let roots = if n % 2 == 1 {
                if m == 0 {
                    vec![]
                } else {
                    classical(Family::B, m, MultiplicityProfile::uniform(2))
                }
            } else {
                match m {
                    0 => vec![],
                    1 => return unsupported("SO(2,C) is abelian"),
                    2 => a1_squared(2),
                    _ => classical(Family::D, m, MultiplicityProfile::uniform(2)),
                }
            };
            (n * n.saturating_sub(1), n * n.saturating_sub(1) / 2, roots, rep(*n, 2, m))
        }
        SoStar { n } => {
            let m = n / 2;
            let roots = if m == 0 {
                vec![]
            } else if n % 2 == 0 {
                classical(Family::C, m, MultiplicityProfile::new(4, 0, 1))
            } else {
                classical(Family::BC, m, MultiplicityProfile::new(4, 4, 1))
            };
            (n * (2 * n).saturating_sub(1), n * n, roots, rep(*n, 4, m))
        }
        G2Split => (14, 6, vec![RootFactor::Exceptional { label: "G2".into(), rank: 2, multiplicities: vec![1; 6] }], None),
        F4Minus20 => (52, 36, classical(Family::BC, 1, MultiplicityProfile::new(1, 8, 7)), None),
        E6Minus14 => (78, 46, classical(Family::BC, 2, MultiplicityProfile::new(6, 8, 1)), None),
        E6Minus26 => (78, 52, classical(Family::A, 2, MultiplicityProfile::uniform(8)), None),
        Compact { dim, .. } => (*dim, *dim, vec![], None),
        Product { factors } => {
            if factors.is_empty() {
                return unsupported("empty product");
            }
            let parts = factors.iter().map(group_data).collect::<Result<Vec<_>>>()?;
            let dim_g = parts.iter().map(|d| d.dim_g).sum();
            let dim_k = parts.iter().map(|d| d.dim_k).sum();
            let roots = parts.iter().flat_map(|d| d.roots.iter().cloned()).collect();
            (dim_g, dim_k, roots, None)
        }
    };
    let dim_sym = dim_symmetric_space(g)?;
    if dim_g != dim_k + dim_sym {
        return Err(Error::InvalidMultiplicity(format!("{label}: dim G = {dim_g} but dim K + dim G/K = {}", dim_k + dim_sym)));
    }
    Ok(ClassicalGroupData { label, dim_g, dim_k, dim_sym, roots, standard_rep })
}

/// Checks `dim(G/K) = rank + Σ_{Σ⁺} mult(α)` for the group.
pub fn check_multiplicities(data: &ClassicalGroupData) -> Result<()> {
    let (rank, sum) = data.rank_and_root_dims()?;
    if rank + sum != data.dim_sym {
        return Err(Error::InvalidMultiplicity(format!(
            "{}: rank {rank} + root dimensions {sum} != dim(G/K) = {}",
            data.label, data.dim_sym
        )));
    }
    Ok(())
}

/// `dim(G/K) − dim(H/K_H)`.
pub fn required_vcd(g: &GroupDescriptor, h: &GroupDescriptor) -> Result<u64> {
    let (a, b) = (dim_symmetric_space(g)? as i64, dim_symmetric_space(h)? as i64);
    if a < b {
        return Err(Error::NegativeRequiredDimension(a - b));
    }
    Ok((a - b) as u64)
}
