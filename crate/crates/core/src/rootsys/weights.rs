use num::{Signed, Zero};

use super::RootSystem;
use crate::error::{Error, Result};
use crate::rational::{self, dot, q, sub, QVec, Q};

/// Coefficients `t_i` of a weight in the fundamental-weight basis,
/// `t_i = 2(φ, α_i)/(α_i, α_i)`.
pub type OmegaCoordinates = QVec;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ChamberMembership {
    Interior,
    /// Indices of the simple roots vanishing on the vector.
    Boundary(Vec<usize>),
    /// Indices of the simple roots negative on the vector.
    Outside(Vec<usize>),
}

impl RootSystem {
    /// `ω_i ∈ span(Δ)` with `2(ω_i, α_j)/(α_j, α_j) = δ_ij`.
    pub fn fundamental_weights(&self) -> Result<Vec<QVec>> {
        let r = self.rank();
        let gram = self.gram();
        (0..r)
            .map(|i| {
                let mut rhs = rational::zeros(r);
                rhs[i] = &gram[i][i] / q(2);
                let c = rational::solve(gram, &rhs).ok_or(Error::SingularGram)?;
                Ok(self.combine(&c))
            })
            .collect()
    }

    pub fn omega_coordinates(&self, phi: &[Q]) -> OmegaCoordinates {
        let gram = self.gram();
        self.simple_roots()
            .iter()
            .enumerate()
            .map(|(i, a)| q(2) * dot(phi, a) / &gram[i][i])
            .collect()
    }

    /// `Σ t_i ω_i`.
    pub fn from_omega_coordinates(&self, t: &[Q]) -> Result<QVec> {
        let omegas = self.fundamental_weights()?;
        let mut out = rational::zeros(self.ambient_dim());
        for (ti, w) in t.iter().zip(&omegas) {
            for (o, x) in out.iter_mut().zip(w) {
                *o += ti * x;
            }
        }
        Ok(out)
    }

    /// Whether `φ` lies in the weight lattice (all ω-coordinates integral).
    pub fn is_weight(&self, phi: &[Q]) -> bool {
        self.omega_coordinates(phi).iter().all(|t| t.is_integer())
    }

    /// `ν ≤ ν′` in the dominance order: `ν′ − ν` is a nonnegative
    /// combination of simple roots.
    pub fn dominates(&self, nu: &[Q], nu_prime: &[Q]) -> bool {
        match self.simple_coefficients(&sub(nu_prime, nu)) {
            Some(c) => c.iter().all(|x| !x.is_negative()),
            None => false,
        }
    }

    pub fn chamber_membership(&self, v: &[Q]) -> ChamberMembership {
        let vals: Vec<Q> = self.simple_roots().iter().map(|a| dot(a, v)).collect();
        let neg: Vec<usize> = (0..vals.len()).filter(|&i| vals[i].is_negative()).collect();
        if !neg.is_empty() {
            return ChamberMembership::Outside(neg);
        }
        let zero: Vec<usize> = (0..vals.len()).filter(|&i| vals[i].is_zero()).collect();
        if zero.is_empty() {
            ChamberMembership::Interior
        } else {
            ChamberMembership::Boundary(zero)
        }
    }

    /// Smallest simple-root value on `v` (float), used for tolerance checks.
    pub fn min_simple_value_f64(&self, v: &[f64]) -> f64 {
        self.simple_roots_f64()
            .iter()
            .map(|a| a.iter().zip(v).map(|(x, y)| x * y).sum::<f64>())
            .fold(f64::INFINITY, f64::min)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{qf, qvec};
    use crate::rootsys::Family;

    #[test]
    fn a2_fundamental_weights() {
        let sys = RootSystem::reduced(Family::A, 2).unwrap();
        let w = sys.fundamental_weights().unwrap();
        assert_eq!(w[0], vec![qf(2, 3), qf(-1, 3), qf(-1, 3)]);
        assert_eq!(w[1], vec![qf(1, 3), qf(1, 3), qf(-2, 3)]);
    }

    #[test]
    fn b2_fundamental_weights() {
        let sys = RootSystem::reduced(Family::B, 2).unwrap();
        let w = sys.fundamental_weights().unwrap();
        assert_eq!(w[0], qvec(&[1, 0]));
        assert_eq!(w[1], vec![qf(1, 2), qf(1, 2)]);
    }

    #[test]
    fn dominance_examples() {
        let sys = RootSystem::reduced(Family::A, 2).unwrap();
        let w = sys.fundamental_weights().unwrap();
        let zero = qvec(&[0, 0, 0]);
        assert!(sys.dominates(&zero, &w[0]));
        assert!(!sys.dominates(&w[0], &zero));
        assert!(sys.dominates(&w[1], &w[1]));
        assert_eq!(sys.simple_coefficients(&w[0]).unwrap(), vec![qf(2, 3), qf(1, 3)]);
    }

    #[test]
    fn membership() {
        let sys = RootSystem::reduced(Family::A, 2).unwrap();
        assert_eq!(sys.chamber_membership(&qvec(&[0, 0, 0])), ChamberMembership::Boundary(vec![0, 1]));
        assert_eq!(sys.chamber_membership(&qvec(&[2, 0, -2])), ChamberMembership::Interior);
        assert_eq!(sys.chamber_membership(&qvec(&[1, 1, -2])), ChamberMembership::Boundary(vec![0]));
        assert_eq!(sys.chamber_membership(&qvec(&[0, 1, -1])), ChamberMembership::Outside(vec![0]));
    }
}
