//! Upper bounds on the virtual cohomological dimension of groups admitting
//! a `P`-Anosov representation.

use serde::{Deserialize, Serialize};

use super::groups::{ClassicalGroupData, GroupDescriptor};
use crate::error::{Error, Result};
use crate::rootsys::{parse_simple_root_label, RootSystem};

/// Which bound to use for a forced Anosov root.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case", deny_unknown_fields)]
pub enum BoundRule {
    /// `SL(2ℓ, K)` with the middle Grassmannian: boundary dimension at most
    /// `ℓ·dim_R K`.
    MiddleGrassmannian,
    /// Automorphism group of a form on `K^n` of real rank `r`, parabolic of
    /// an isotropic line or a maximal isotropic subspace: vcd at most
    /// `(n − r)·dim_R K`.
    IsotropicFlag,
    /// A pair of standard parabolics `P_θ`, `P_θ′` whose relative position
    /// has one closed and one open orbit: boundary dimension at most the
    /// sum of root-space dimensions over
    /// `Σ⁺ ∖ (span(Δ∖θ) ∪ span(Δ∖θ′))`.
    ParabolicPair { theta: Vec<String>, theta_prime: Vec<String> },
}

impl BoundRule {
    pub fn name(&self) -> &'static str {
        match self {
            BoundRule::MiddleGrassmannian => "middle_grassmannian",
            BoundRule::IsotropicFlag => "isotropic_flag",
            BoundRule::ParabolicPair { .. } => "parabolic_pair",
        }
    }
}

/// A bound on the Gromov boundary's covering dimension and the resulting
/// vcd bound, which is one more.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VcdBound {
    pub rule: String,
    pub boundary_dim: u64,
    pub vcd: u64,
}

impl VcdBound {
    fn from_boundary(rule: &BoundRule, boundary_dim: u64) -> Self {
        Self { rule: rule.name().into(), boundary_dim, vcd: boundary_dim + 1 }
    }

    fn from_vcd(rule: &BoundRule, vcd: u64) -> Result<Self> {
        if vcd == 0 {
            return Err(Error::RuleMismatch(format!("{} gives vcd bound 0", rule.name())));
        }
        Ok(Self { rule: rule.name().into(), boundary_dim: vcd - 1, vcd })
    }

    /// The two stored numbers differ by exactly one.
    pub fn offset_holds(&self) -> bool {
        self.vcd == self.boundary_dim + 1
    }
}

/// Sum of root-space dimensions over positive roots outside both
/// `span(Δ∖θ)` and `span(Δ∖θ′)`. A root lies in `span(Δ∖θ)` exactly when its
/// simple-root coefficients vanish on `θ`.
pub fn parabolic_pair_dimension(sys: &RootSystem, theta: &[usize], theta_prime: &[usize]) -> Result<u64> {
    let r = sys.rank();
    for set in [theta, theta_prime] {
        if set.is_empty() {
            return Err(Error::RuleMismatch("parabolic subsets must be nonempty (proper parabolics)".into()));
        }
        if let Some(&j) = set.iter().find(|&&j| j >= r) {
            return Err(Error::RuleMismatch(format!("simple root index {j} out of range for rank {r}")));
        }
    }
    let in_levi = |coeffs: &[i64], set: &[usize]| set.iter().all(|&j| coeffs[j] == 0);
    Ok(sys
        .positive_roots()
        .iter()
        .filter(|root| !in_levi(&root.simple_coeffs, theta) && !in_levi(&root.simple_coeffs, theta_prime))
        .map(|root| root.multiplicity as u64)
        .sum())
}

/// Evaluates `rule` for the group `g`.
pub fn anosov_vcd_bound(rule: &BoundRule, g: &GroupDescriptor, data: &ClassicalGroupData) -> Result<VcdBound> {
    match rule {
        BoundRule::MiddleGrassmannian => match g {
            GroupDescriptor::Sl { n, field } if n % 2 == 0 && *n >= 2 => {
                Ok(VcdBound::from_boundary(rule, (n / 2) * field.real_dim()))
            }
            _ => Err(Error::RuleMismatch(format!("middle_grassmannian needs SL(2l, K), got {}", data.label))),
        },
        BoundRule::IsotropicFlag => {
            let rep = data
                .standard_rep
                .ok_or_else(|| Error::RuleMismatch(format!("{} has no standard form data", data.label)))?;
            if rep.real_rank == 0 || rep.real_rank > rep.dim_v {
                return Err(Error::RuleMismatch(format!("{}: real rank {} is not usable", data.label, rep.real_rank)));
            }
            VcdBound::from_vcd(rule, (rep.dim_v - rep.real_rank) * rep.field_dim)
        }
        BoundRule::ParabolicPair { theta, theta_prime } => {
            let sys = data.root_system()?;
            let parse = |ls: &[String]| ls.iter().map(|l| parse_simple_root_label(l, sys.rank())).collect::<Result<Vec<_>>>();
            let dim = parabolic_pair_dimension(&sys, &parse(theta)?, &parse(theta_prime)?)?;
            Ok(VcdBound::from_boundary(rule, dim))
        }
    }
}
