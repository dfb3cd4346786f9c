//! Wall arrangements `μ(H) = a⁺ ∩ ⋃_w w·a_H` and the chambers of their
//! complement in `a⁺`.
//!
//! All combinatorics is exact: walls are rational subspaces, and every
//! feasibility question is an exact LP over the closed chamber.

mod input;

use std::collections::HashMap;

use num::{Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lp::ConeQuery;
use crate::rational::{self, dot, neg, QMat, QVec, Q};
use crate::rootsys::{RootSystem, WeylElement};

pub use input::{IsotropyInput, RationalInput};

#[derive(Debug, Clone, PartialEq)]
pub enum FormSpec {
    /// Coefficients in the fundamental-weight basis.
    OmegaCoeffs(QVec),
    /// Coefficients in the simple-root basis.
    RootCoeffs(QVec),
    /// Ambient coordinates (projected onto `a`).
    Coords(QVec),
}

#[derive(Debug, Clone, PartialEq)]
pub enum IsotropySpec {
    /// `μ(H) = a⁺ ∩ ⋃_{α∈θ} Ker α`, simple roots by zero-based index.
    WallUnion(Vec<usize>),
    /// `μ(H) = a⁺ ∩ ⋃_w Ker(w·φ₀)`.
    Hyperplane(FormSpec),
    /// `μ(H) = a⁺ ∩ ⋃_w w·a_H`, with `a_H` spanned by the given vectors.
    Subspace(QMat),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Wall {
    /// Canonical (reduced echelon) basis of the subspace.
    pub basis: QMat,
    /// Basis of the orthogonal complement of the subspace inside `a`.
    pub complement: QMat,
    /// Orthonormal float basis of the same complement.
    pub complement_f64: Vec<Vec<f64>>,
    /// Defining form for hyperplanes (`w·φ₀`, or the root for wall unions).
    pub form: Option<QVec>,
    /// Lexicographically smallest Weyl matrix carrying `a_H` onto this wall.
    pub weyl: QMat,
}

impl Wall {
    pub fn is_hyperplane(&self) -> bool {
        self.form.is_some()
    }

    /// Distance from `u` to the full subspace.
    pub fn distance(&self, u: &[f64]) -> f64 {
        self.complement_f64
            .iter()
            .map(|c| {
                let p: f64 = c.iter().zip(u).map(|(a, b)| a * b).sum();
                p * p
            })
            .sum::<f64>()
            .sqrt()
    }

    /// Exact squared distance from a rational point.
    pub fn distance2_exact(&self, u: &[Q]) -> Q {
        let p = rational::project(&self.complement, u);
        dot(&p, &p)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WallArrangement {
    pub source: IsotropySpec,
    pub walls: Vec<Wall>,
    /// The base form `φ₀` (hyperplane specs) in ambient coordinates.
    pub base_form: Option<QVec>,
    pub system_label: String,
}

fn orthonormalize(basis: &[QVec]) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = Vec::new();
    for b in basis {
        let mut v = rational::to_f64_vec(b);
        for _ in 0..2 {
            for o in &out {
                let p: f64 = o.iter().zip(&v).map(|(a, b)| a * b).sum();
                v.iter_mut().zip(o).for_each(|(x, y)| *x -= p * y);
            }
        }
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        out.push(v.iter().map(|x| x / n).collect());
    }
    out
}

/// Subspace data for a wall given by a spanning set inside `a`.
fn make_wall(sys: &RootSystem, span: &[QVec], form: Option<QVec>, weyl: QMat) -> Wall {
    let basis = rational::row_space(span);
    let mut eqs = basis.clone();
    eqs.extend(sys.a_equations().iter().cloned());
    let complement = rational::row_space(&rational::nullspace(&eqs, sys.ambient_dim()));
    let complement_f64 = orthonormalize(&complement);
    Wall { basis, complement, complement_f64, form, weyl }
}

/// `{x ∈ a : φ(x) = 0}`.
fn kernel_in_a(sys: &RootSystem, phi: &[Q]) -> QMat {
    let mut eqs = vec![phi.to_vec()];
    eqs.extend(sys.a_equations().iter().cloned());
    rational::nullspace(&eqs, sys.ambient_dim())
}

fn resolve_form(sys: &RootSystem, form: &FormSpec) -> Result<QVec> {
    let r = sys.rank();
    let check_len = |v: &QVec, n: usize, what: &str| {
        if v.len() == n {
            Ok(())
        } else {
            Err(Error::InvalidIsotropy(format!("{what} needs {n} entries, got {}", v.len())))
        }
    };
    let phi = match form {
        FormSpec::OmegaCoeffs(t) => {
            check_len(t, r, "omega_coeffs")?;
            sys.from_omega_coordinates(t)?
        }
        FormSpec::RootCoeffs(c) => {
            check_len(c, r, "root_coeffs")?;
            sys.combine(c)
        }
        FormSpec::Coords(v) => {
            check_len(v, sys.ambient_dim(), "coords")?;
            sys.project_to_a(v)
        }
    };
    if rational::is_zero_vec(&phi) {
        return Err(Error::InvalidIsotropy("the form vanishes on a".into()));
    }
    Ok(phi)
}

/// Builds the deduplicated `W`-orbit of walls.
pub fn build_arrangement(sys: &RootSystem, spec: &IsotropySpec) -> Result<WallArrangement> {
    let n = sys.ambient_dim();
    let identity = rational::identity(n);
    let mut base_form = None;
    let walls = match spec {
        IsotropySpec::WallUnion(theta) => {
            if theta.is_empty() {
                return Err(Error::InvalidIsotropy("θ is empty".into()));
            }
            let mut idx = theta.clone();
            idx.sort_unstable();
            idx.dedup();
            idx.iter()
                .map(|&i| {
                    let alpha = sys.simple_root(i).map_err(|_| {
                        Error::InvalidIsotropy(format!("simple root index {} out of range", i + 1))
                    })?;
                    let ker = kernel_in_a(sys, alpha);
                    Ok(make_wall(sys, &ker, Some(alpha.clone()), identity.clone()))
                })
                .collect::<Result<Vec<_>>>()?
        }
        IsotropySpec::Hyperplane(form) => {
            let phi = resolve_form(sys, form)?;
            base_form = Some(phi.clone());
            let weyl = sys.weyl_group()?;
            let mut order: Vec<QMat> = Vec::new();
            let mut best: HashMap<QMat, (QVec, WeylElement)> = HashMap::new();
            for w in &weyl {
                let img = w.apply(&phi);
                let key = canonical_line(&img);
                match best.get_mut(&key) {
                    None => {
                        order.push(key.clone());
                        best.insert(key, (img, w.clone()));
                    }
                    Some(slot) => {
                        if w.cmp_matrix(&slot.1).is_lt() {
                            *slot = (img, w.clone());
                        }
                    }
                }
            }
            order
                .into_iter()
                .map(|key| {
                    let (form, w) = best.remove(&key).expect("key recorded");
                    let ker = kernel_in_a(sys, &form);
                    make_wall(sys, &ker, Some(form), w.matrix)
                })
                .collect()
        }
        IsotropySpec::Subspace(basis) => {
            if basis.is_empty() {
                return Err(Error::InvalidIsotropy("a_H needs at least one basis vector".into()));
            }
            for b in basis {
                if b.len() != n || !sys.in_a(b) {
                    return Err(Error::InvalidIsotropy("a_H basis vector outside a".into()));
                }
            }
            let dim = rational::rank(basis);
            if dim >= sys.rank() {
                return Err(Error::InvalidIsotropy("a_H must be a proper subspace of a".into()));
            }
            let weyl = sys.weyl_group()?;
            let mut order: Vec<QMat> = Vec::new();
            let mut best: HashMap<QMat, WeylElement> = HashMap::new();
            for w in &weyl {
                let img: QMat = basis.iter().map(|b| w.apply(b)).collect();
                let key = rational::row_space(&img);
                match best.get_mut(&key) {
                    None => {
                        order.push(key.clone());
                        best.insert(key, w.clone());
                    }
                    Some(slot) => {
                        if w.cmp_matrix(slot).is_lt() {
                            *slot = w.clone();
                        }
                    }
                }
            }
            order
                .into_iter()
                .map(|key| {
                    let w = best.remove(&key).expect("key recorded");
                    let mut wall = make_wall(sys, &key, None, w.matrix);
                    if dim + 1 == sys.rank() {
                        wall.form = Some(wall.complement[0].clone());
                    }
                    wall
                })
                .collect()
        }
    };
    Ok(WallArrangement { source: spec.clone(), walls, base_form, system_label: sys.label() })
}

/// Line through `v` as a canonical one-row echelon matrix.
fn canonical_line(v: &[Q]) -> QMat {
    rational::row_space(&[v.to_vec()])
}

fn check_in_chamber(sys: &RootSystem, u: &[f64], tol: f64) -> Result<()> {
    let scale = u.iter().map(|x| x * x).sum::<f64>().sqrt().max(1.0);
    let min_value = sys.min_simple_value_f64(u);
    if min_value < -tol * scale || !min_value.is_finite() {
        return Err(Error::OutsideChamber { min_value });
    }
    Ok(())
}

pub const DEFAULT_CHAMBER_TOL: f64 = 1e-9;

/// `d_a(u, μ(H)) = min_w d_a(u, w·a_H)` for `u ∈ a⁺`.
pub fn dist_to_muh(sys: &RootSystem, arr: &WallArrangement, u: &[f64]) -> Result<f64> {
    dist_to_muh_tol(sys, arr, u, DEFAULT_CHAMBER_TOL)
}

pub fn dist_to_muh_tol(sys: &RootSystem, arr: &WallArrangement, u: &[f64], tol: f64) -> Result<f64> {
    check_in_chamber(sys, u, tol)?;
    Ok(arr.walls.iter().map(|w| w.distance(u)).fold(f64::INFINITY, f64::min))
}

#[derive(Debug, Clone, PartialEq)]
pub struct WallSplit {
    /// Component orthogonal to the chosen wall; `‖b‖` is the wall distance.
    pub b: Vec<f64>,
    /// Component inside the chosen wall.
    pub a: Vec<f64>,
    pub wall: usize,
    pub weyl: QMat,
}

/// `v = b + a` against the nearest wall; ties (within `1e-12` relative) go
/// to the lexicographically smallest Weyl matrix.
pub fn split_wall_distance(arr: &WallArrangement, v: &[f64]) -> Result<WallSplit> {
    if arr.walls.is_empty() {
        return Err(Error::DegenerateArrangement("no walls".into()));
    }
    let d: Vec<f64> = arr.walls.iter().map(|w| w.distance(v)).collect();
    let min = d.iter().copied().fold(f64::INFINITY, f64::min);
    let scale = v.iter().map(|x| x * x).sum::<f64>().sqrt().max(1.0);
    let wall = (0..d.len())
        .filter(|&i| d[i] <= min + 1e-12 * scale)
        .min_by(|&i, &j| {
            let (a, b) = (&arr.walls[i].weyl, &arr.walls[j].weyl);
            a.iter().flatten().cmp(b.iter().flatten()).then(i.cmp(&j))
        })
        .expect("nonempty");
    let w = &arr.walls[wall];
    let mut b = vec![0.0; v.len()];
    for c in &w.complement_f64 {
        let p: f64 = c.iter().zip(v).map(|(x, y)| x * y).sum();
        b.iter_mut().zip(c).for_each(|(bi, ci)| *bi += p * ci);
    }
    let a = v.iter().zip(&b).map(|(x, y)| x - y).collect();
    Ok(WallSplit { b, a, wall, weyl: w.weyl.clone() })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Component {
    /// Sign (+1 / −1) of every hyperplane wall form on the component.
    pub sign_vector: Vec<i8>,
    pub interior_point: QVec,
    /// `F_C`: signed forms of walls positive on `C` whose kernels meet `C̄`
    /// away from the origin.
    pub facet_forms: Vec<QVec>,
    pub facet_walls: Vec<usize>,
}

impl Component {
    /// Whether `u` satisfies `a⁺ ∩ ⋂_{φ∈F_C} {φ > 0}` (exact).
    pub fn contains(&self, sys: &RootSystem, u: &[Q]) -> bool {
        sys.in_a(u)
            && sys.simple_roots().iter().all(|a| !dot(a, u).is_negative())
            && self.facet_forms.iter().all(|f| dot(f, u).is_positive())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChamberDecomposition {
    /// Hyperplane walls meeting the interior of `a⁺`.
    pub effective_walls: Vec<usize>,
    pub components: Vec<Component>,
}

fn chamber_query(sys: &RootSystem) -> ConeQuery {
    let mut cq = ConeQuery::new(sys.ambient_dim());
    cq.equalities = sys.a_equations().to_vec();
    cq
}

fn signed(form: &[Q], s: i8) -> QVec {
    if s > 0 {
        form.to_vec()
    } else {
        neg(form)
    }
}

/// Enumerates the connected components of `a⁺ ∖ μ(H)`.
pub fn components(sys: &RootSystem, arr: &WallArrangement) -> Result<ChamberDecomposition> {
    let forms: Vec<(usize, &QVec)> =
        arr.walls.iter().enumerate().filter_map(|(i, w)| w.form.as_ref().map(|f| (i, f))).collect();
    let meets: Vec<bool> = forms
        .par_iter()
        .map(|&(_, f)| {
            let mut cq = chamber_query(sys);
            cq.strict = sys.simple_roots().to_vec();
            cq.equalities.push(f.clone());
            cq.feasible()
        })
        .collect::<Result<_>>()?;
    let effective: Vec<usize> = forms.iter().zip(&meets).filter(|(_, &m)| m).map(|(&(i, _), _)| i).collect();
    let eff_forms: Vec<&QVec> = effective.iter().map(|&i| arr.walls[i].form.as_ref().expect("hyperplane")).collect();

    // depth-first sign assignment, + before −, pruned by exact feasibility;
    // a child whose sign agrees with the parent's point reuses that point
    let mut cells: Vec<(Vec<i8>, QVec)> = Vec::new();
    let mut stack: Vec<(Vec<i8>, Option<QVec>)> = vec![(vec![], None)];
    while let Some((signs, known)) = stack.pop() {
        let point = match known {
            Some(p) => p,
            None => {
                let mut cq = chamber_query(sys);
                cq.strict = sys.simple_roots().to_vec();
                cq.strict.extend(signs.iter().zip(&eff_forms).map(|(&s, f)| signed(f, s)));
                match cq.solve()? {
                    Some(p) => p,
                    None => continue,
                }
            }
        };
        if signs.len() == eff_forms.len() {
            cells.push((signs, point));
            continue;
        }
        let here = dot(eff_forms[signs.len()], &point);
        for s in [-1i8, 1] {
            let mut next = signs.clone();
            next.push(s);
            let agrees = (s > 0 && here.is_positive()) || (s < 0 && here.is_negative());
            stack.push((next, agrees.then(|| point.clone())));
        }
    }
    cells.sort_by(|a, b| a.0.iter().map(|&s| -s).cmp(b.0.iter().map(|&s| -s)));

    let rho = sys.rho2();
    // a wall whose kernel meets a⁺ only at 0 bounds no component
    let touches: Vec<bool> = forms
        .par_iter()
        .map(|&(_, f)| {
            let mut cq = chamber_query(sys);
            cq.nonneg = sys.simple_roots().to_vec();
            cq.equalities.push(f.clone());
            cq.normalization = Some(rho.clone());
            cq.feasible()
        })
        .collect::<Result<_>>()?;
    let comps = cells
        .into_par_iter()
        .map(|(_, point)| {
            let sign_vector: Vec<i8> = forms
                .iter()
                .map(|(_, f)| if dot(f, &point).is_positive() { 1 } else { -1 })
                .collect();
            // boundary walls of a⁺ count too: a⁺ ∖ Ker α is not all of a⁺
            let closure: Vec<QVec> = forms.iter().zip(&sign_vector).map(|((_, g), &s)| signed(g, s)).collect();
            let mut facet_forms = Vec::new();
            let mut facet_walls = Vec::new();
            for (k, &(i, f)) in forms.iter().enumerate() {
                if !touches[k] {
                    continue;
                }
                let mut cq = chamber_query(sys);
                cq.nonneg = sys.simple_roots().to_vec();
                cq.nonneg.extend(closure.iter().cloned());
                cq.equalities.push(f.clone());
                cq.normalization = Some(rho.clone());
                if cq.feasible()? {
                    facet_forms.push(closure[k].clone());
                    facet_walls.push(i);
                }
            }
            Ok(Component { sign_vector, interior_point: point, facet_forms, facet_walls })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ChamberDecomposition { effective_walls: effective, components: comps })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Location {
    Component(usize),
    OnWall(usize),
    /// Not in the closed chamber (float locations only).
    Outside,
}

impl ChamberDecomposition {
    /// Exact location of a point of `a⁺`.
    pub fn locate(&self, arr: &WallArrangement, u: &[Q]) -> Location {
        if let Some(i) = arr.walls.iter().position(|w| w.distance2_exact(u).is_zero()) {
            return Location::OnWall(i);
        }
        self.locate_by_signs(arr, |f| {
            let v = dot(f, u);
            if v.is_positive() {
                1
            } else {
                -1
            }
        })
    }

    /// Float location: within `tol·max(1, ‖u‖)` of a wall counts as on it.
    pub fn locate_f64(&self, sys: &RootSystem, arr: &WallArrangement, u: &[f64], tol: f64) -> Location {
        if check_in_chamber(sys, u, tol).is_err() {
            return Location::Outside;
        }
        let scale = u.iter().map(|x| x * x).sum::<f64>().sqrt().max(1.0);
        if let Some(i) = arr.walls.iter().position(|w| w.distance(u) <= tol * scale) {
            return Location::OnWall(i);
        }
        self.locate_by_signs(arr, |f| {
            let v: f64 = f.iter().zip(u).map(|(a, b)| rational::to_f64(a) * b).sum();
            if v > 0.0 {
                1
            } else {
                -1
            }
        })
    }

    fn locate_by_signs(&self, arr: &WallArrangement, mut sign: impl FnMut(&QVec) -> i8) -> Location {
        let signs: Vec<i8> = self
            .effective_walls
            .iter()
            .map(|&i| sign(arr.walls[i].form.as_ref().expect("hyperplane")))
            .collect();
        let hyper: Vec<usize> = (0..arr.walls.len()).filter(|&i| arr.walls[i].is_hyperplane()).collect();
        let pos = |wall: usize| hyper.iter().position(|&h| h == wall).expect("effective walls are hyperplanes");
        self.components
            .iter()
            .position(|c| self.effective_walls.iter().zip(&signs).all(|(&w, &s)| c.sign_vector[pos(w)] == s))
            .map_or(Location::Outside, Location::Component)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IotaAction {
    /// `permutation[i]` is the component containing `ι(C_i)`.
    pub permutation: Vec<usize>,
    pub fixed: Vec<usize>,
    /// `ι`-orbits (singletons and pairs), sorted.
    pub orbits: Vec<Vec<usize>>,
}

pub fn iota_action(sys: &RootSystem, arr: &WallArrangement, dec: &ChamberDecomposition) -> Result<IotaAction> {
    let mut permutation = Vec::with_capacity(dec.components.len());
    for (i, c) in dec.components.iter().enumerate() {
        let img = sys.iota(&c.interior_point);
        match dec.locate(arr, &img) {
            Location::Component(j) => permutation.push(j),
            _ => return Err(Error::IotaOnWall { component: i }),
        }
    }
    let fixed = (0..permutation.len()).filter(|&i| permutation[i] == i).collect();
    let mut orbits: Vec<Vec<usize>> = Vec::new();
    for (i, &j) in permutation.iter().enumerate() {
        if i <= j {
            orbits.push(if i == j { vec![i] } else { vec![i, j] });
        }
    }
    Ok(IotaAction { permutation, fixed, orbits })
}

/// Simple roots `α` with `C ∩ Ker α = ∅` (the chamber taken closed in `a⁺`,
/// open across walls).
pub fn avoided_simple_roots(sys: &RootSystem, comp: &Component) -> Result<Vec<usize>> {
    let rho = sys.rho2();
    let mut out = Vec::new();
    for (j, alpha) in sys.simple_roots().iter().enumerate() {
        let mut cq = chamber_query(sys);
        cq.equalities.push(alpha.clone());
        cq.nonneg = sys.simple_roots().to_vec();
        cq.strict = comp.facet_forms.clone();
        cq.normalization = Some(rho.clone());
        if !cq.feasible()? {
            out.push(j);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Integerized {
    /// Least positive integer making every orbit element integral.
    pub scale: num::BigInt,
    /// `ω`-coordinates of the scaled `w·φ₀`, deduplicated, in Weyl order.
    pub orbit: Vec<QVec>,
}

/// Scales `φ₀` (given in `ω`-coordinates) so the whole `W`-orbit has
/// integral `ω`-coordinates.
pub fn integerize(sys: &RootSystem, omega_coeffs: &[Q]) -> Result<Integerized> {
    let phi = sys.from_omega_coordinates(omega_coeffs)?;
    let mut orbit: Vec<QVec> = Vec::new();
    for w in sys.weyl_group()? {
        let t = sys.omega_coordinates(&w.apply(&phi));
        if !orbit.contains(&t) {
            orbit.push(t);
        }
    }
    let scale = rational::lcm_of_denominators(orbit.iter().flatten());
    let k = Q::from_integer(scale.clone());
    let orbit = orbit.into_iter().map(|t| rational::scale(&k, &t)).collect::<Vec<_>>();
    debug_assert!(orbit.iter().flatten().all(|x| x.is_integer()));
    Ok(Integerized { scale, orbit })
}
