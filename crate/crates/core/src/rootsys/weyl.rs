use std::cmp::Ordering;
use std::collections::HashSet;

use num::{Signed, Zero};

use super::RootSystem;
use crate::error::{Error, Result};
use crate::rational::{self, dot, neg, QMat, QVec, Q};

pub const DEFAULT_WEYL_CAP: usize = 1_000_000;

/// An element of the Weyl group acting on ambient coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeylElement {
    pub matrix: QMat,
    /// A reduced word in simple reflections (zero-based indices), applied
    /// right to left: `word = [i, j]` means `s_i s_j`.
    pub word: Vec<usize>,
}

impl WeylElement {
    pub fn identity(n: usize) -> Self {
        Self { matrix: rational::identity(n), word: Vec::new() }
    }

    pub fn apply(&self, v: &[Q]) -> QVec {
        rational::mat_vec(&self.matrix, v)
    }

    pub fn length(&self) -> usize {
        self.word.len()
    }

    /// Row-major lexicographic order on matrix entries.
    pub fn cmp_matrix(&self, other: &Self) -> Ordering {
        self.matrix.iter().flatten().cmp(other.matrix.iter().flatten())
    }
}

impl RootSystem {
    /// All Weyl group elements in breadth-first order (by word length, then
    /// generator order), each with a minimal word.
    pub fn weyl_group(&self) -> Result<Vec<WeylElement>> {
        self.weyl_group_capped(DEFAULT_WEYL_CAP)
    }

    pub fn weyl_group_capped(&self, cap: usize) -> Result<Vec<WeylElement>> {
        let gens: Vec<QMat> = (0..self.rank()).map(|i| self.reflection_matrix(i)).collect();
        let id = WeylElement::identity(self.ambient_dim());
        let mut seen: HashSet<QMat> = HashSet::new();
        seen.insert(id.matrix.clone());
        let mut all = vec![id];
        let mut frontier_start = 0;
        while frontier_start < all.len() {
            let frontier_end = all.len();
            for k in frontier_start..frontier_end {
                for (i, s) in gens.iter().enumerate() {
                    let m = rational::mat_mul(s, &all[k].matrix);
                    if seen.contains(&m) {
                        continue;
                    }
                    if all.len() >= cap {
                        return Err(Error::WeylCapExceeded { cap });
                    }
                    seen.insert(m.clone());
                    let mut word = Vec::with_capacity(all[k].word.len() + 1);
                    word.push(i);
                    word.extend_from_slice(&all[k].word);
                    all.push(WeylElement { matrix: m, word });
                }
            }
            frontier_start = frontier_end;
        }
        Ok(all)
    }

    /// Moves `v` into the closed positive chamber; returns the dominant
    /// representative and the word `w` with `w·v` dominant.
    pub fn to_dominant(&self, v: &[Q]) -> (QVec, Vec<usize>) {
        let mut v = v.to_vec();
        let mut word = Vec::new();
        while let Some(i) = (0..self.rank()).find(|&i| dot(&self.simple_roots()[i], &v).is_negative()) {
            v = self.reflect(i, &v);
            word.insert(0, i);
        }
        (v, word)
    }

    /// Matrix of the product of simple reflections `word` (right to left).
    pub fn word_matrix(&self, word: &[usize]) -> QMat {
        let mut m = rational::identity(self.ambient_dim());
        for &i in word.iter().rev() {
            m = rational::mat_mul(&self.reflection_matrix(i), &m);
        }
        m
    }

    /// The longest element `w₀`, found by folding `−ρ` into the chamber.
    pub fn longest_element(&self) -> WeylElement {
        let (_, word) = self.to_dominant(&neg(&self.rho2()));
        // w(−ρ) = ρ, so w maps −a⁺ onto a⁺ and w₀ = w⁻¹ = w.
        let rev: Vec<usize> = word.iter().rev().copied().collect();
        WeylElement { matrix: self.word_matrix(&rev), word: rev }
    }

    /// `ι = −w₀` as an ambient matrix.
    pub fn opposition_involution(&self) -> QMat {
        self.longest_element().matrix.iter().map(|row| neg(row)).collect()
    }

    pub fn iota(&self, v: &[Q]) -> QVec {
        neg(&self.longest_element().apply(v))
    }

    /// The permutation `π` of simple-root indices with `ι(α_i) = α_{π(i)}`.
    pub fn iota_permutation(&self) -> Vec<usize> {
        let iota = self.opposition_involution();
        self.simple_roots()
            .iter()
            .map(|a| {
                let img = rational::mat_vec(&iota, a);
                self.simple_index(&img).expect("ι permutes the simple roots")
            })
            .collect()
    }

    pub fn iota_f64(&self) -> Vec<Vec<f64>> {
        self.opposition_involution().iter().map(|r| rational::to_f64_vec(r)).collect()
    }

    /// Whether `w` permutes Σ and preserves multiplicities.
    pub fn preserves_roots(&self, w: &WeylElement) -> bool {
        self.positive_roots().iter().all(|r| {
            let img = w.apply(&r.vector);
            self.positive_roots().iter().any(|s| {
                s.multiplicity == r.multiplicity && (s.vector == img || s.vector.iter().zip(&img).all(|(a, b)| (a + b).is_zero()))
            })
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::{Family, MultiplicityProfile};

    #[test]
    fn group_orders() {
        let cases = [
            (Family::A, 1, 2),
            (Family::A, 2, 6),
            (Family::A, 3, 24),
            (Family::B, 2, 8),
            (Family::B, 3, 48),
            (Family::C, 3, 48),
            (Family::D, 4, 192),
            (Family::BC, 2, 8),
        ];
        for (f, r, order) in cases {
            let sys = RootSystem::new(f, r, MultiplicityProfile::uniform(1)).unwrap();
            assert_eq!(sys.weyl_group().unwrap().len(), order, "{f}{r}");
        }
    }

    #[test]
    fn cap_is_enforced() {
        let sys = RootSystem::reduced(Family::B, 3).unwrap();
        assert_eq!(sys.weyl_group_capped(10), Err(Error::WeylCapExceeded { cap: 10 }));
    }

    #[test]
    fn longest_element_has_maximal_length() {
        for (f, r) in [(Family::A, 3), (Family::B, 3), (Family::D, 4)] {
            let sys = RootSystem::reduced(f, r).unwrap();
            let w0 = sys.longest_element();
            assert_eq!(w0.length(), sys.num_positive_roots());
            let max = sys.weyl_group().unwrap().iter().map(WeylElement::length).max().unwrap();
            assert_eq!(max, w0.length());
        }
    }
}
