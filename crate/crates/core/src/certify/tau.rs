//! Weight-level first-gap functional of the representation attached to a
//! chamber, and its comparison with wall distance.

use num::Signed;
use serde::Serialize;

use super::ball::WordBall;
use super::scan::{check_systems, judge, wall_distances, Envelope, ScanConfig, Verdict};
use crate::arrangement::Component;
use crate::error::{Error, Result};
use crate::rational::{self, dot, QVec, Q};
use crate::rootsys::RootSystem;

pub const DEFAULT_TAU_TOL: f64 = 1e-9;

/// Facet forms `F_C` of a chamber and, for each, `Δ_φ⁺ = {α ∈ Δ : (φ, α) > 0}`.
#[derive(Debug, Clone, PartialEq)]
pub struct TauGapData {
    pub facet_forms: Vec<QVec>,
    pub delta_plus: Vec<Vec<usize>>,
}

impl TauGapData {
    pub fn new(sys: &RootSystem, facet_forms: Vec<QVec>) -> Result<Self> {
        if facet_forms.is_empty() {
            return Err(Error::Empty("facet forms".into()));
        }
        let mut delta_plus = Vec::with_capacity(facet_forms.len());
        for (i, phi) in facet_forms.iter().enumerate() {
            let pos: Vec<usize> =
                (0..sys.rank()).filter(|&j| dot(phi, &sys.simple_roots()[j]).is_positive()).collect();
            if pos.is_empty() {
                return Err(Error::Empty(format!("no simple root pairs positively with facet form {i}")));
            }
            delta_plus.push(pos);
        }
        Ok(Self { facet_forms, delta_plus })
    }

    pub fn from_component(sys: &RootSystem, comp: &Component) -> Result<Self> {
        Self::new(sys, comp.facet_forms.clone())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TauGap<T> {
    pub value: T,
    /// Whether `u` lies in the closed chamber, where the identity holds.
    pub in_chamber: bool,
}

/// `min_{φ∈F_C} min(⟨φ, u⟩, min_{α∈Δ_φ⁺} ⟨α, u⟩)`, exactly.
pub fn tau_gap_exact(sys: &RootSystem, data: &TauGapData, u: &[Q]) -> Result<TauGap<Q>> {
    if !sys.in_a(u) {
        return Err(Error::Shape("point is not in a".into()));
    }
    if let Some(a) = sys.simple_roots().iter().find(|a| dot(a, u).is_negative()) {
        return Err(Error::OutsideChamber { min_value: rational::to_f64(&dot(a, u)) });
    }
    let mut best: Option<Q> = None;
    let mut in_chamber = true;
    for (phi, pos) in data.facet_forms.iter().zip(&data.delta_plus) {
        let p = dot(phi, u);
        if p.is_negative() {
            in_chamber = false;
        }
        let m = pos.iter().map(|&j| dot(&sys.simple_roots()[j], u)).fold(p, |m, x| if x < m { x } else { m });
        best = Some(match best {
            Some(b) if b <= m => b,
            _ => m,
        });
    }
    Ok(TauGap { value: best.expect("facet forms are nonempty"), in_chamber })
}

/// Float counterpart of [`tau_gap_exact`]; `u` must lie in `a⁺` up to `tol`.
pub fn tau_gap(sys: &RootSystem, data: &TauGapData, u: &[f64], tol: f64) -> Result<TauGap<f64>> {
    let scale = u.iter().map(|x| x * x).sum::<f64>().sqrt().max(1.0);
    let min_value = sys.min_simple_value_f64(u);
    if min_value < -tol * scale || !min_value.is_finite() {
        return Err(Error::OutsideChamber { min_value });
    }
    let roots = sys.simple_roots_f64();
    let pair = |v: &[Q]| v.iter().zip(u).map(|(a, b)| rational::to_f64(a) * b).sum::<f64>();
    let mut best = f64::INFINITY;
    let mut in_chamber = true;
    for (phi, pos) in data.facet_forms.iter().zip(&data.delta_plus) {
        let p = pair(phi);
        if p < -tol * scale {
            in_chamber = false;
        }
        let m = pos.iter().map(|&j| roots[j].iter().zip(u).map(|(a, b)| a * b).sum::<f64>()).fold(p, f64::min);
        best = best.min(m);
    }
    Ok(TauGap { value: best, in_chamber })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CrossSample {
    pub length: u32,
    pub norm: f64,
    pub distance: f64,
    pub tau: f64,
    /// Index into the supplied chamber list.
    pub chamber: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrosscheckReport {
    #[serde(skip)]
    pub samples: Vec<CrossSample>,
    /// Entries where exactly one of `τ` gap and wall distance vanishes.
    pub mismatches: Vec<usize>,
    /// Range of `τ / d` over entries where both are positive.
    pub ratio_min: Option<f64>,
    pub ratio_max: Option<f64>,
    pub sharpness_verdict: Verdict,
    pub tau_verdict: Verdict,
    pub distance_fit: Option<Envelope>,
    pub tau_fit: Option<Envelope>,
    pub agree: bool,
}

/// Compares the `τ` gap with the wall distance on every ball entry. Each
/// `μ(γ)` is evaluated with the first chamber whose closure holds it; the
/// list is typically a chamber and its `ι`-image.
pub fn sharpness_anosov_crosscheck(
    ball: &WordBall,
    sys: &RootSystem,
    arr: &crate::arrangement::WallArrangement,
    chambers: &[TauGapData],
    cfg: &ScanConfig,
) -> Result<CrosscheckReport> {
    check_systems(ball, sys, Some(arr))?;
    if chambers.is_empty() {
        return Err(Error::Empty("chamber list".into()));
    }
    let dist = wall_distances(ball, sys, arr)?;
    let mut samples = Vec::with_capacity(ball.entries.len());
    for (i, (e, &d)) in ball.entries.iter().zip(&dist).enumerate() {
        let mut found = None;
        for (k, data) in chambers.iter().enumerate() {
            let t = tau_gap(sys, data, &e.mu.coords, DEFAULT_TAU_TOL)?;
            if t.in_chamber {
                found = Some((k, t.value));
                break;
            }
        }
        let (chamber, tau) = found.ok_or_else(|| Error::OutsideChambers(format!("ball entry {i}")))?;
        samples.push(CrossSample { length: e.length, norm: e.mu.norm(), distance: d, tau, chamber });
    }
    let zero = |x: f64, norm: f64| x <= cfg.zero_tol * norm.max(1.0);
    let mismatches: Vec<usize> = samples
        .iter()
        .enumerate()
        .filter(|(_, s)| zero(s.tau, s.norm) != zero(s.distance, s.norm))
        .map(|(i, _)| i)
        .collect();
    let ratios: Vec<f64> = samples
        .iter()
        .filter(|s| !zero(s.tau, s.norm) && !zero(s.distance, s.norm))
        .map(|s| s.tau / s.distance)
        .collect();
    let ratio_min = ratios.iter().copied().reduce(f64::min);
    let ratio_max = ratios.iter().copied().reduce(f64::max);
    let by_dist: Vec<_> = samples.iter().map(|s| (s.length, s.norm, s.norm, s.distance)).collect();
    let by_tau: Vec<_> = samples.iter().map(|s| (s.length, s.norm, s.norm, s.tau)).collect();
    let dj = judge(&by_dist, ball.radius, cfg, 0);
    let tj = judge(&by_tau, ball.radius, cfg, 0);
    let agree = mismatches.is_empty() && dj.verdict == tj.verdict;
    Ok(CrosscheckReport {
        samples,
        mismatches,
        ratio_min,
        ratio_max,
        sharpness_verdict: dj.verdict,
        tau_verdict: tj.verdict,
        distance_fit: dj.fit,
        tau_fit: tj.fit,
        agree,
    })
}
