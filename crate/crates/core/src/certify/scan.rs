//! Linear-envelope fits over word balls: sharpness and Anosov gaps.

use serde::Serialize;

use super::ball::WordBall;
use crate::arrangement::{dist_to_muh, WallArrangement};
use crate::error::{Error, Result};
use crate::rational;
use crate::rootsys::{simple_root_label, RootSystem};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    /// The inequality holds on the ball with a slope that is stable over the
    /// outer half of the radii. A finite-radius statement only.
    CertifiedOnBall,
    Violation,
    Inconclusive,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::CertifiedOnBall => "CERTIFIED_ON_BALL",
            Verdict::Violation => "VIOLATION",
            Verdict::Inconclusive => "INCONCLUSIVE",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanConfig {
    /// Largest intercept `c′` the envelope may use.
    pub intercept_cap: f64,
    /// Samples with `‖μ‖` at or below this never count as violations.
    pub norm_floor: f64,
    /// A value at or below `zero_tol · ‖μ‖` counts as zero.
    pub zero_tol: f64,
    /// Slopes at or below this are not certified.
    pub slope_floor: f64,
    /// Certification needs the smallest window slope to be at least
    /// `(1 − stability_rel)` times the largest.
    pub stability_rel: f64,
    /// Distance thresholds for the growth diagnostic.
    pub distance_thresholds: Vec<f64>,
}

impl Default for ScanConfig {
    fn default() -> Self {
        Self {
            intercept_cap: 0.0,
            norm_floor: 1e-6,
            zero_tol: 1e-9,
            slope_floor: 1e-6,
            stability_rel: 0.25,
            distance_thresholds: vec![0.5, 1.0, 2.0, 4.0, 8.0],
        }
    }
}

/// `y ≥ slope · x − intercept`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Envelope {
    pub slope: f64,
    pub intercept: f64,
}

impl Envelope {
    /// Exact test of the inequality at the given floats; the float
    /// expression alone can round in the envelope's favour.
    pub fn holds(&self, x: f64, y: f64) -> bool {
        let slack = y - self.slope * x + self.intercept;
        let scale = y.abs().max((self.slope * x).abs()).max(self.intercept.abs());
        if slack.abs() > 1e-12 * scale {
            return slack > 0.0;
        }
        match [x, y, self.slope, self.intercept].map(rational::from_f64) {
            [Ok(x), Ok(y), Ok(c), Ok(c0)] => y >= c * x - c0,
            _ => false,
        }
    }
}

/// Largest slope `c` with `y_i ≥ c·x_i − c′` for all points, `0 ≤ c′ ≤ cap`.
/// The optimum always takes `c′ = cap`, so the 2-variable LP collapses to
/// `c = min_{x_i>0} (y_i + cap)/x_i`. `None` when no point has `x > 0` or a
/// point with `x = 0` is below `−cap`. The returned constants satisfy every
/// inequality in exact arithmetic.
pub fn fit_envelope(points: &[(f64, f64)], cap: f64) -> Option<Envelope> {
    if points.iter().any(|&(x, y)| x <= 0.0 && y < -cap) {
        return None;
    }
    let mut slope = points.iter().filter(|p| p.0 > 0.0).map(|&(x, y)| (y + cap) / x).reduce(f64::min)?;
    // rounding in the quotient can overshoot by an ulp
    loop {
        let env = Envelope { slope, intercept: cap };
        if points.iter().all(|&(x, y)| env.holds(x, y)) {
            return Some(env);
        }
        slope = slope.next_down();
    }
}

/// Slope of the fit restricted to word length at most `radius`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WindowFit {
    pub radius: u32,
    pub slope: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Judgement {
    pub fit: Option<Envelope>,
    pub window: Vec<WindowFit>,
    pub verdict: Verdict,
    /// Sample indices that are violations.
    pub violations: Vec<usize>,
}

/// Shared verdict logic. Each sample is `(length, ‖μ‖, x, y)`.
pub(crate) fn judge(samples: &[(u32, f64, f64, f64)], radius: u32, cfg: &ScanConfig, min_length: u32) -> Judgement {
    let violations: Vec<usize> = samples
        .iter()
        .enumerate()
        .filter(|(_, &(len, norm, _, y))| len >= min_length && norm > cfg.norm_floor && y <= cfg.zero_tol * norm)
        .map(|(i, _)| i)
        .collect();
    let fit_upto = |r: u32| {
        let pts: Vec<(f64, f64)> = samples.iter().filter(|s| s.0 <= r).map(|s| (s.2, s.3)).collect();
        fit_envelope(&pts, cfg.intercept_cap)
    };
    let fit = fit_upto(radius);
    let window: Vec<WindowFit> =
        (radius.div_ceil(2).max(1)..=radius).map(|r| WindowFit { radius: r, slope: fit_upto(r).map(|e| e.slope) }).collect();
    let verdict = if !violations.is_empty() {
        Verdict::Violation
    } else {
        let slopes: Option<Vec<f64>> = window.iter().map(|w| w.slope).collect();
        let stable = match slopes {
            Some(s) if !s.is_empty() => {
                let lo = s.iter().copied().fold(f64::INFINITY, f64::min);
                let hi = s.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                lo > cfg.slope_floor && lo >= (1.0 - cfg.stability_rel) * hi
            }
            _ => false,
        };
        if stable && fit.is_some_and(|f| f.slope > cfg.slope_floor) {
            Verdict::CertifiedOnBall
        } else {
            Verdict::Inconclusive
        }
    };
    Judgement { fit, window, verdict, violations }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SharpnessSample {
    pub length: u32,
    pub norm: f64,
    pub distance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthRow {
    pub threshold: f64,
    /// Number of elements with distance at most `threshold`, per radius
    /// `0..=R`.
    pub counts: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SharpnessReport {
    #[serde(skip)]
    pub samples: Vec<SharpnessSample>,
    /// `d ≥ c‖μ(γ)‖ − c′`.
    pub norm: Judgement,
    /// `d ≥ C|γ|_S − C′`.
    pub word: Judgement,
    /// The verdict for `d ≥ c‖μ(γ)‖ − c′`.
    pub verdict: Verdict,
    pub growth: Vec<GrowthRow>,
    pub config: ScanConfig,
}

pub(crate) fn check_systems(ball: &WordBall, sys: &RootSystem, arr: Option<&WallArrangement>) -> Result<()> {
    let ball_label = ball.spec.root_system()?.label();
    if ball_label != sys.label() {
        return Err(Error::SystemMismatch(format!("ball is over {ball_label}, system is {}", sys.label())));
    }
    if let Some(arr) = arr {
        if arr.system_label != sys.label() {
            return Err(Error::SystemMismatch(format!("arrangement is over {}, system is {}", arr.system_label, sys.label())));
        }
    }
    Ok(())
}

pub(crate) fn wall_distances(ball: &WordBall, sys: &RootSystem, arr: &WallArrangement) -> Result<Vec<f64>> {
    ball.entries.iter().map(|e| dist_to_muh(sys, arr, &e.mu.coords)).collect()
}

pub fn sharpness_scan(ball: &WordBall, sys: &RootSystem, arr: &WallArrangement, cfg: &ScanConfig) -> Result<SharpnessReport> {
    check_systems(ball, sys, Some(arr))?;
    if ball.entries.is_empty() {
        return Err(Error::Empty("word ball".into()));
    }
    let dist = wall_distances(ball, sys, arr)?;
    let samples: Vec<SharpnessSample> = ball
        .entries
        .iter()
        .zip(&dist)
        .map(|(e, &d)| SharpnessSample { length: e.length, norm: e.mu.norm(), distance: d })
        .collect();
    let by_norm: Vec<_> = samples.iter().map(|s| (s.length, s.norm, s.norm, s.distance)).collect();
    let by_word: Vec<_> = samples.iter().map(|s| (s.length, s.norm, s.length as f64, s.distance)).collect();
    let norm = judge(&by_norm, ball.radius, cfg, 0);
    let word = judge(&by_word, ball.radius, cfg, 0);
    let growth = cfg
        .distance_thresholds
        .iter()
        .map(|&t| GrowthRow {
            threshold: t,
            counts: (0..=ball.radius).map(|r| samples.iter().filter(|s| s.length <= r && s.distance <= t).count()).collect(),
        })
        .collect();
    let verdict = norm.verdict;
    Ok(SharpnessReport { samples, norm, word, verdict, growth, config: cfg.clone() })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RootScan {
    pub root: usize,
    pub label: String,
    /// `(|γ|_S, ⟨α, μ(γ)⟩)` per ball entry.
    #[serde(skip)]
    pub samples: Vec<(u32, f64)>,
    pub judgement: Judgement,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnosovReport {
    pub roots: Vec<RootScan>,
    /// VIOLATION if any root violates, CERTIFIED_ON_BALL if all certify.
    pub verdict: Verdict,
    pub config: ScanConfig,
}

/// Per-root fits of `⟨α, μ(γ)⟩ ≥ C|γ|_S − C′` for `α ∈ θ`.
pub fn anosov_scan(ball: &WordBall, sys: &RootSystem, theta: &[usize], cfg: &ScanConfig) -> Result<AnosovReport> {
    check_systems(ball, sys, None)?;
    if ball.entries.is_empty() {
        return Err(Error::Empty("word ball".into()));
    }
    if theta.is_empty() {
        return Err(Error::Empty("root subset".into()));
    }
    let roots = sys.simple_roots_f64();
    let mut scans = Vec::with_capacity(theta.len());
    for &j in theta {
        let alpha = roots.get(j).ok_or(Error::NotSimpleRoot)?;
        let samples: Vec<(u32, f64)> = ball.entries.iter().map(|e| (e.length, e.mu.dot(alpha))).collect();
        let rows: Vec<_> =
            ball.entries.iter().zip(&samples).map(|(e, &(len, gap))| (len, e.mu.norm(), len as f64, gap)).collect();
        let judgement = judge(&rows, ball.radius, cfg, 1);
        scans.push(RootScan { root: j, label: simple_root_label(j), samples, judgement });
    }
    let verdict = if scans.iter().any(|s| s.judgement.verdict == Verdict::Violation) {
        Verdict::Violation
    } else if scans.iter().all(|s| s.judgement.verdict == Verdict::CertifiedOnBall) {
        Verdict::CertifiedOnBall
    } else {
        Verdict::Inconclusive
    };
    Ok(AnosovReport { roots: scans, verdict, config: cfg.clone() })
}
