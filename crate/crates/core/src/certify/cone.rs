//! Direction clouds of Cartan data and the single-chamber check.

use serde::Serialize;

use super::ball::WordBall;
use super::scan::check_systems;
use crate::arrangement::{dist_to_muh, ChamberDecomposition, IotaAction, Location, WallArrangement};
use crate::cartan;
use crate::error::{Error, Result};
use crate::rootsys::RootSystem;

pub const DIRECTION_MERGE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LimitConeEstimate {
    pub cutoff: f64,
    /// Distinct unit directions `μ(γ)/‖μ(γ)‖` with `‖μ(γ)‖ ≥ cutoff`, in ball
    /// order of first appearance.
    pub directions: Vec<Vec<f64>>,
    /// How many ball entries share each direction.
    pub counts: Vec<usize>,
    /// `min` over directions of the distance to `μ(H)`, when an arrangement
    /// is supplied.
    pub margin: Option<f64>,
    /// Hausdorff distance between the cloud and its image under `ι`.
    pub iota_hausdorff: f64,
    /// Directions of Jordan projections, when requested.
    pub jordan_directions: Option<Vec<Vec<f64>>>,
    /// Hausdorff distance between the Cartan and Jordan clouds.
    pub mu_lambda_hausdorff: Option<f64>,
}

fn unit(v: &[f64]) -> Vec<f64> {
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter().map(|x| x / n).collect()
}

fn merge_directions(dirs: impl Iterator<Item = Vec<f64>>) -> (Vec<Vec<f64>>, Vec<usize>) {
    let mut out: Vec<Vec<f64>> = Vec::new();
    let mut counts = Vec::new();
    for d in dirs {
        match out.iter().position(|o| o.iter().zip(&d).all(|(a, b)| (a - b).abs() <= DIRECTION_MERGE_TOL)) {
            Some(i) => counts[i] += 1,
            None => {
                out.push(d);
                counts.push(1);
            }
        }
    }
    (out, counts)
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}

/// Hausdorff distance between two finite point sets.
pub fn hausdorff(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    let one_way = |p: &[Vec<f64>], q: &[Vec<f64>]| {
        p.iter().map(|x| q.iter().map(|y| dist(x, y)).fold(f64::INFINITY, f64::min)).fold(0.0, f64::max)
    };
    if a.is_empty() && b.is_empty() {
        return 0.0;
    }
    one_way(a, b).max(one_way(b, a))
}

/// Finite-radius estimate of the limit cone.
pub fn limit_cone(
    ball: &WordBall,
    sys: &RootSystem,
    cutoff: f64,
    arr: Option<&WallArrangement>,
    jordan: bool,
) -> Result<LimitConeEstimate> {
    check_systems(ball, sys, arr)?;
    if !(cutoff > 0.0) {
        return Err(Error::Validation { relation: "cutoff > 0".into(), residual: cutoff, tolerance: 0.0 });
    }
    let far: Vec<_> = ball.entries.iter().filter(|e| e.mu.norm() >= cutoff).collect();
    if far.is_empty() {
        return Err(Error::Empty(format!("no ball element has ‖μ‖ ≥ {cutoff}")));
    }
    let (directions, counts) = merge_directions(far.iter().map(|e| unit(&e.mu.coords)));
    let margin = match arr {
        Some(arr) => Some(
            directions
                .iter()
                .map(|d| dist_to_muh(sys, arr, d))
                .collect::<Result<Vec<f64>>>()?
                .into_iter()
                .fold(f64::INFINITY, f64::min),
        ),
        None => None,
    };
    let iota = sys.iota_f64();
    let mirrored: Vec<Vec<f64>> =
        directions.iter().map(|d| iota.iter().map(|row| row.iter().zip(d).map(|(a, b)| a * b).sum()).collect()).collect();
    let iota_hausdorff = hausdorff(&directions, &mirrored);
    let (jordan_directions, mu_lambda_hausdorff) = if jordan {
        let mut lambdas = Vec::new();
        for e in &far {
            let l = match &e.lambda {
                Some(l) => l.clone(),
                None => cartan::jordan(&ball.spec, &e.element)?,
            };
            if l.norm() > DIRECTION_MERGE_TOL * e.mu.norm() {
                lambdas.push(unit(&l.coords));
            }
        }
        let (jd, _) = merge_directions(lambdas.into_iter());
        let h = hausdorff(&directions, &jd);
        (Some(jd), Some(h))
    } else {
        (None, None)
    };
    Ok(LimitConeEstimate { cutoff, directions, counts, margin, iota_hausdorff, jordan_directions, mu_lambda_hausdorff })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConsistencyReport {
    pub floor: f64,
    /// `(entry, component)` for every entry above the floor off the walls.
    pub assignments: Vec<(usize, usize)>,
    /// Entries above the floor within tolerance of a wall.
    pub on_wall: Vec<usize>,
    /// The `ι`-orbit holding the most assigned entries.
    pub orbit: Option<Vec<usize>>,
    /// Assigned entries outside that orbit.
    pub exceptions: Vec<usize>,
    pub pass: bool,
}

/// Checks that all `μ(γ)` with `‖μ(γ)‖ > floor` lie in one `ι`-orbit of
/// components.
pub fn component_consistency(
    ball: &WordBall,
    sys: &RootSystem,
    arr: &WallArrangement,
    dec: &ChamberDecomposition,
    iota: &IotaAction,
    floor: f64,
    tol: f64,
) -> Result<ConsistencyReport> {
    check_systems(ball, sys, Some(arr))?;
    let mut assignments = Vec::new();
    let mut on_wall = Vec::new();
    for (i, e) in ball.entries.iter().enumerate() {
        if e.mu.norm() <= floor {
            continue;
        }
        match dec.locate_f64(sys, arr, &e.mu.coords, tol) {
            Location::Component(c) => assignments.push((i, c)),
            Location::OnWall(_) | Location::Outside => on_wall.push(i),
        }
    }
    let orbit_of = |c: usize| iota.orbits.iter().position(|o| o.contains(&c)).expect("orbits cover components");
    let mut tally = vec![0usize; iota.orbits.len()];
    for &(_, c) in &assignments {
        tally[orbit_of(c)] += 1;
    }
    let best = (0..tally.len()).filter(|&k| tally[k] > 0).max_by(|&a, &b| tally[a].cmp(&tally[b]).then(b.cmp(&a)));
    let exceptions: Vec<usize> = match best {
        Some(k) => assignments.iter().filter(|&&(_, c)| orbit_of(c) != k).map(|&(i, _)| i).collect(),
        None => vec![],
    };
    Ok(ConsistencyReport {
        floor,
        pass: exceptions.is_empty(),
        orbit: best.map(|k| iota.orbits[k].clone()),
        assignments,
        on_wall,
        exceptions,
    })
}
