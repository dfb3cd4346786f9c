//! Cartan and Jordan projections of explicit matrices.
//!
//! Supported groups: `SL(n,R)`, `SL(n,C)`, `SL(n,H)` (as complex `2n × 2n`
//! matrices of the form `[[A, B], [−B̄, Ā]]`), `SO(p,q)` with `p > q ≥ 1`
//! (type `B_q`) or `p = q ≥ 3` (type `D_q`), and finite products of these.

use nalgebra::{ComplexField, DMatrix};
use num::{Complex, One, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, QMat, Q};
use crate::rootsys::{FactorType, Family, MultiplicityProfile, RootSystem};

pub type C64 = Complex<f64>;

pub const DEFAULT_VALIDATION_TOL: f64 = 1e-8;
/// Singular values whose ratio to the largest is below this are considered
/// unresolved at double precision.
const RELIABLE_RATIO: f64 = 1e-7;
const SVD_MAX_ITER: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Field {
    R,
    C,
    H,
}

impl Field {
    pub fn real_dim(self) -> u32 {
        match self {
            Field::R => 1,
            Field::C => 2,
            Field::H => 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GroupSpec {
    SL { n: usize, field: Field },
    SO { p: usize, q: usize },
    Product(Vec<GroupSpec>),
}

impl GroupSpec {
    pub fn sl(n: usize, field: Field) -> Self {
        GroupSpec::SL { n, field }
    }

    pub fn so(p: usize, q: usize) -> Self {
        GroupSpec::SO { p, q }
    }

    /// Non-product factors in order.
    pub fn leaves(&self) -> Vec<&GroupSpec> {
        match self {
            GroupSpec::Product(fs) => fs.iter().flat_map(GroupSpec::leaves).collect(),
            other => vec![other],
        }
    }

    fn check(&self) -> Result<()> {
        for leaf in self.leaves() {
            match *leaf {
                GroupSpec::SL { n, .. } if n < 2 => {
                    return Err(Error::UnsupportedGroup(format!("SL({n}) needs n >= 2")));
                }
                GroupSpec::SO { p, q } if q == 0 || p < q || (p == q && p < 3) => {
                    return Err(Error::UnsupportedGroup(format!(
                        "SO({p},{q}): supported are p > q >= 1 and p = q >= 3"
                    )));
                }
                _ => {}
            }
        }
        if self.leaves().is_empty() {
            return Err(Error::UnsupportedGroup("empty product".into()));
        }
        Ok(())
    }

    fn factor_type(leaf: &GroupSpec) -> FactorType {
        match *leaf {
            GroupSpec::SL { n, field } => FactorType::new(Family::A, n - 1, MultiplicityProfile::uniform(field.real_dim())),
            GroupSpec::SO { p, q } if p == q => FactorType::new(Family::D, q, MultiplicityProfile::uniform(1)),
            GroupSpec::SO { p, q } => FactorType::new(Family::B, q, MultiplicityProfile::new(1, (p - q) as u32, 1)),
            GroupSpec::Product(_) => unreachable!("leaves are never products"),
        }
    }

    pub fn root_system(&self) -> Result<RootSystem> {
        self.check()?;
        let factors: Vec<FactorType> = self.leaves().into_iter().map(Self::factor_type).collect();
        RootSystem::product(&factors)
    }

    /// Matrix size and whether entries are complex, per leaf.
    pub fn block_shapes(&self) -> Vec<(usize, bool)> {
        self.leaves()
            .into_iter()
            .map(|leaf| match *leaf {
                GroupSpec::SL { n, field: Field::R } => (n, false),
                GroupSpec::SL { n, field: Field::C } => (n, true),
                GroupSpec::SL { n, field: Field::H } => (2 * n, true),
                GroupSpec::SO { p, q } => (p + q, false),
                GroupSpec::Product(_) => unreachable!(),
            })
            .collect()
    }

    pub fn name(&self) -> String {
        match self {
            GroupSpec::SL { n, field } => format!("SL({n},{field:?})"),
            GroupSpec::SO { p, q } => format!("SO({p},{q})"),
            GroupSpec::Product(fs) => fs.iter().map(GroupSpec::name).collect::<Vec<_>>().join(" x "),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Block {
    Real(DMatrix<f64>),
    Complex(DMatrix<C64>),
}

impl Block {
    pub fn size(&self) -> usize {
        match self {
            Block::Real(m) => m.nrows(),
            Block::Complex(m) => m.nrows(),
        }
    }

    pub fn is_square(&self) -> bool {
        match self {
            Block::Real(m) => m.is_square(),
            Block::Complex(m) => m.is_square(),
        }
    }

    pub fn is_complex(&self) -> bool {
        matches!(self, Block::Complex(_))
    }

    pub fn is_finite(&self) -> bool {
        match self {
            Block::Real(m) => m.iter().all(|x| x.is_finite()),
            Block::Complex(m) => m.iter().all(|x| x.re.is_finite() && x.im.is_finite()),
        }
    }

    pub fn mul(&self, other: &Block) -> Block {
        match (self, other) {
            (Block::Real(a), Block::Real(b)) => Block::Real(a * b),
            (a, b) => Block::Complex(a.to_complex() * b.to_complex()),
        }
    }

    pub fn to_complex(&self) -> DMatrix<C64> {
        match self {
            Block::Real(m) => m.map(|x| C64::new(x, 0.0)),
            Block::Complex(m) => m.clone(),
        }
    }

    pub fn identity_like(&self) -> Block {
        let n = self.size();
        match self {
            Block::Real(_) => Block::Real(DMatrix::identity(n, n)),
            Block::Complex(_) => Block::Complex(DMatrix::identity(n, n)),
        }
    }

    /// Row-major entries; complex entries contribute `re, im` pairs.
    pub fn entries(&self) -> Vec<f64> {
        match self {
            Block::Real(m) => m.transpose().iter().copied().collect(),
            Block::Complex(m) => m.transpose().iter().flat_map(|z| [z.re, z.im]).collect(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        match self {
            Block::Real(m) => m.iter().fold(0.0, |a, x| a.max(x.abs())),
            Block::Complex(m) => m.iter().fold(0.0, |a, x| a.max(x.norm())),
        }
    }

    fn try_inverse(&self) -> Option<Block> {
        match self {
            Block::Real(m) => m.clone().try_inverse().map(Block::Real),
            Block::Complex(m) => m.clone().try_inverse().map(Block::Complex),
        }
    }
}

/// Exact counterpart of [`Block`], kept when generators are rational.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ExactBlock {
    Real(QMat),
    Complex(Vec<Vec<Complex<Q>>>),
}

impl ExactBlock {
    pub fn mul(&self, other: &ExactBlock) -> ExactBlock {
        match (self, other) {
            (ExactBlock::Real(a), ExactBlock::Real(b)) => ExactBlock::Real(rational::mat_mul(a, b)),
            (a, b) => {
                let (a, b) = (a.to_complex(), b.to_complex());
                let n = b.first().map_or(0, Vec::len);
                ExactBlock::Complex(
                    a.iter()
                        .map(|row| {
                            (0..n)
                                .map(|j| {
                                    row.iter().zip(&b).fold(Complex::new(Q::zero(), Q::zero()), |acc, (x, brow)| {
                                        acc + x.clone() * brow[j].clone()
                                    })
                                })
                                .collect()
                        })
                        .collect(),
                )
            }
        }
    }

    fn to_complex(&self) -> Vec<Vec<Complex<Q>>> {
        match self {
            ExactBlock::Real(m) => {
                m.iter().map(|r| r.iter().map(|x| Complex::new(x.clone(), Q::zero())).collect()).collect()
            }
            ExactBlock::Complex(m) => m.clone(),
        }
    }

    pub fn to_float(&self) -> Block {
        match self {
            ExactBlock::Real(m) => {
                let n = m.len();
                let c = m.first().map_or(0, Vec::len);
                Block::Real(DMatrix::from_fn(n, c, |i, j| rational::to_f64(&m[i][j])))
            }
            ExactBlock::Complex(m) => {
                let n = m.len();
                let c = m.first().map_or(0, Vec::len);
                Block::Complex(DMatrix::from_fn(n, c, |i, j| {
                    C64::new(rational::to_f64(&m[i][j].re), rational::to_f64(&m[i][j].im))
                }))
            }
        }
    }

    pub fn inverse(&self) -> Option<ExactBlock> {
        match self {
            ExactBlock::Real(m) => rational::inverse(m).map(ExactBlock::Real),
            ExactBlock::Complex(m) => {
                // realify: A + iB ↦ [[A, −B], [B, A]]
                let n = m.len();
                let mut r = vec![rational::zeros(2 * n); 2 * n];
                for i in 0..n {
                    for j in 0..n {
                        let (a, b) = (&m[i][j].re, &m[i][j].im);
                        r[i][j] = a.clone();
                        r[i][j + n] = -b.clone();
                        r[i + n][j] = b.clone();
                        r[i + n][j + n] = a.clone();
                    }
                }
                let inv = rational::inverse(&r)?;
                Some(ExactBlock::Complex(
                    (0..n)
                        .map(|i| (0..n).map(|j| Complex::new(inv[i][j].clone(), inv[i + n][j].clone())).collect())
                        .collect(),
                ))
            }
        }
    }

    pub fn identity_like(&self) -> ExactBlock {
        let n = match self {
            ExactBlock::Real(m) => m.len(),
            ExactBlock::Complex(m) => m.len(),
        };
        match self {
            ExactBlock::Real(_) => ExactBlock::Real(rational::identity(n)),
            ExactBlock::Complex(_) => ExactBlock::Complex(
                (0..n)
                    .map(|i| {
                        (0..n)
                            .map(|j| Complex::new(if i == j { Q::one() } else { Q::zero() }, Q::zero()))
                            .collect()
                    })
                    .collect(),
            ),
        }
    }
}

/// A group element as one matrix block per factor of its [`GroupSpec`].
#[derive(Debug, Clone, PartialEq)]
pub struct GroupElement {
    pub blocks: Vec<Block>,
    pub exact: Option<Vec<ExactBlock>>,
    /// Tolerance the defining relations were validated under.
    pub tolerance: f64,
}

impl GroupElement {
    /// Validates float blocks against the group's defining relations.
    pub fn new(spec: &GroupSpec, blocks: Vec<Block>, tolerance: f64) -> Result<Self> {
        let el = Self { blocks, exact: None, tolerance };
        validate(spec, &el.blocks, tolerance)?;
        Ok(el)
    }

    /// Validates exact blocks; keeps both exact and float copies.
    pub fn from_exact(spec: &GroupSpec, exact: Vec<ExactBlock>, tolerance: f64) -> Result<Self> {
        let blocks: Vec<Block> = exact.iter().map(ExactBlock::to_float).collect();
        validate(spec, &blocks, tolerance)?;
        Ok(Self { blocks, exact: Some(exact), tolerance })
    }

    /// Convenience for a single real block.
    pub fn real(spec: &GroupSpec, m: DMatrix<f64>) -> Result<Self> {
        Self::new(spec, vec![Block::Real(m)], DEFAULT_VALIDATION_TOL)
    }

    /// Diagonal element of a single-block real group.
    pub fn diag(spec: &GroupSpec, d: &[f64]) -> Result<Self> {
        Self::real(spec, DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(d)))
    }

    /// Exact rational matrix for a single-block real group.
    pub fn rational(spec: &GroupSpec, m: QMat) -> Result<Self> {
        Self::from_exact(spec, vec![ExactBlock::Real(m)], DEFAULT_VALIDATION_TOL)
    }

    pub fn identity(spec: &GroupSpec) -> Self {
        let blocks: Vec<Block> = spec
            .block_shapes()
            .into_iter()
            .map(|(n, c)| if c { Block::Complex(DMatrix::identity(n, n)) } else { Block::Real(DMatrix::identity(n, n)) })
            .collect();
        let exact = blocks
            .iter()
            .map(|b| {
                let id = ExactBlock::Real(rational::identity(b.size()));
                if b.is_complex() {
                    ExactBlock::Complex(id.to_complex())
                } else {
                    id
                }
            })
            .collect();
        Self { blocks, exact: Some(exact), tolerance: DEFAULT_VALIDATION_TOL }
    }

    /// Product `self · other` without revalidation. Exact products round
    /// their float copy once instead of accumulating float error.
    pub fn mul(&self, other: &GroupElement) -> GroupElement {
        let tolerance = self.tolerance.max(other.tolerance);
        if let (Some(a), Some(b)) = (&self.exact, &other.exact) {
            let exact: Vec<ExactBlock> = a.iter().zip(b).map(|(x, y)| x.mul(y)).collect();
            let blocks = exact.iter().map(ExactBlock::to_float).collect();
            return GroupElement { blocks, exact: Some(exact), tolerance };
        }
        let blocks = self.blocks.iter().zip(&other.blocks).map(|(a, b)| a.mul(b)).collect();
        GroupElement { blocks, exact: None, tolerance }
    }

    /// Inverse: exact when available, `J gᵀ J` for `SO(p,q)`, LU otherwise.
    pub fn inverse(&self, spec: &GroupSpec) -> Result<GroupElement> {
        if let Some(exact) = &self.exact {
            let inv: Option<Vec<ExactBlock>> = exact.iter().map(ExactBlock::inverse).collect();
            let inv = inv.ok_or(Error::Singular)?;
            let blocks = inv.iter().map(ExactBlock::to_float).collect();
            return Ok(GroupElement { blocks, exact: Some(inv), tolerance: self.tolerance });
        }
        let mut blocks = Vec::with_capacity(self.blocks.len());
        for (leaf, b) in spec.leaves().into_iter().zip(&self.blocks) {
            let inv = match (leaf, b) {
                (GroupSpec::SO { p, q }, Block::Real(m)) => {
                    let j = so_form(*p, *q);
                    Block::Real(&j * m.transpose() * &j)
                }
                _ => b.try_inverse().ok_or(Error::Singular)?,
            };
            if !inv.is_finite() {
                return Err(Error::Singular);
            }
            blocks.push(inv);
        }
        Ok(GroupElement { blocks, exact: None, tolerance: self.tolerance })
    }

    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }

    pub fn entries(&self) -> Vec<f64> {
        self.blocks.iter().flat_map(Block::entries).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.blocks.iter().fold(0.0, |a, b| a.max(b.max_abs()))
    }
}

/// Diagonal form with `p` plus signs followed by `q` minus signs.
pub fn so_form(p: usize, q: usize) -> DMatrix<f64> {
    DMatrix::from_fn(p + q, p + q, |i, j| if i != j { 0.0 } else if i < p { 1.0 } else { -1.0 })
}

fn validate(spec: &GroupSpec, blocks: &[Block], tol: f64) -> Result<()> {
    spec.check()?;
    let shapes = spec.block_shapes();
    if shapes.len() != blocks.len() {
        return Err(Error::Shape(format!("expected {} blocks, got {}", shapes.len(), blocks.len())));
    }
    for ((leaf, (n, complex)), b) in spec.leaves().into_iter().zip(shapes).zip(blocks) {
        if !b.is_square() || b.size() != n {
            return Err(Error::Shape(format!("{}: expected a {n}x{n} matrix", leaf.name())));
        }
        if b.is_complex() && !complex {
            return Err(Error::Shape(format!("{}: expected real entries", leaf.name())));
        }
        if !b.is_finite() {
            return Err(Error::NonFinite);
        }
        let fail = |relation: &str, residual: f64| -> Result<()> {
            if residual > tol || residual.is_nan() {
                Err(Error::Validation { relation: format!("{}: {relation}", leaf.name()), residual, tolerance: tol })
            } else {
                Ok(())
            }
        };
        let det = match b {
            Block::Real(m) => C64::new(m.determinant(), 0.0),
            Block::Complex(m) => m.determinant(),
        };
        fail("|det - 1|", (det - C64::new(1.0, 0.0)).norm())?;
        match (leaf, b) {
            (GroupSpec::SO { p, q }, Block::Real(m)) => {
                let j = so_form(*p, *q);
                fail("||g^T J g - J||", (m.transpose() * &j * m - &j).norm())?;
            }
            (GroupSpec::SL { field: Field::H, .. }, b) => {
                let m = b.to_complex();
                let k = m.nrows() / 2;
                let mut residual: f64 = 0.0;
                for i in 0..k {
                    for j in 0..k {
                        residual = residual.max((m[(i + k, j + k)] - m[(i, j)].conj()).norm());
                        residual = residual.max((m[(i + k, j)] + m[(i, j + k)].conj()).norm());
                    }
                }
                fail("quaternionic block structure", residual)?;
            }
            _ => {}
        }
    }
    Ok(())
}

/// A point of `a⁺` in the ambient coordinates of the group's root system.
#[derive(Debug, Clone, PartialEq)]
pub struct CartanVector {
    pub coords: Vec<f64>,
}

impl CartanVector {
    pub fn new(coords: Vec<f64>) -> Self {
        Self { coords }
    }

    pub fn zero(n: usize) -> Self {
        Self { coords: vec![0.0; n] }
    }

    pub fn norm(&self) -> f64 {
        self.coords.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn dot(&self, v: &[f64]) -> f64 {
        self.coords.iter().zip(v).map(|(a, b)| a * b).sum()
    }

    pub fn sub(&self, other: &CartanVector) -> CartanVector {
        CartanVector::new(self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect())
    }

    pub fn scaled(&self, s: f64) -> CartanVector {
        CartanVector::new(self.coords.iter().map(|x| x * s).collect())
    }

    pub fn dist(&self, other: &CartanVector) -> f64 {
        self.sub(other).norm()
    }
}

fn singular_values<T: ComplexField<RealField = f64>>(m: &DMatrix<T>) -> Result<Vec<f64>> {
    let svd = nalgebra::SVD::try_new(m.clone(), false, false, f64::EPSILON, SVD_MAX_ITER).ok_or(Error::Eigen)?;
    let mut s: Vec<f64> = svd.singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    Ok(s)
}

fn block_singular_values(b: &Block) -> Result<Vec<f64>> {
    match b {
        Block::Real(m) => singular_values(m),
        Block::Complex(m) => singular_values(m),
    }
}

/// Log singular values (descending) combining `g` and `g⁻¹`: each index is
/// taken from whichever side resolves it better. Returns values and the
/// achieved reliability ratio per index.
fn combined_log_sv(b: &Block, binv: Option<&Block>) -> Result<(Vec<f64>, Vec<f64>)> {
    let s = block_singular_values(b)?;
    let n = s.len();
    let mut logs: Vec<f64> = s.iter().map(|x| x.ln()).collect();
    let mut rel: Vec<f64> = s.iter().map(|x| x / s[0]).collect();
    if let Some(binv) = binv {
        let t = block_singular_values(binv)?;
        for i in 0..n {
            let ti = t[n - 1 - i];
            let r = ti / t[0];
            if r > rel[i] {
                rel[i] = r;
                logs[i] = -ti.ln();
            }
        }
    }
    Ok((logs, rel))
}

fn finish_sl(mut logs: Vec<f64>, mut rel: Vec<f64>, field: Field) -> Vec<f64> {
    if field == Field::H {
        logs = logs.iter().step_by(2).copied().collect();
        rel = rel.iter().step_by(2).copied().collect();
    }
    let unreliable: Vec<usize> = (0..logs.len()).filter(|&i| !(rel[i] >= RELIABLE_RATIO)).collect();
    if unreliable.len() == 1 {
        // |det| = 1: the lone unresolved value is fixed by the others.
        let k = unreliable[0];
        logs[k] = -logs.iter().enumerate().filter(|&(i, _)| i != k).map(|(_, x)| x).sum::<f64>();
    }
    let mean = logs.iter().sum::<f64>() / logs.len() as f64;
    let mut out: Vec<f64> = logs.iter().map(|x| x - mean).collect();
    out.sort_by(|a, b| b.total_cmp(a));
    out
}

/// The `q` largest log singular values, clamped at zero. For `p = q` this
/// fixes the last coordinate nonnegative by convention.
fn finish_so(logs: &[f64], q: usize) -> Vec<f64> {
    let mut top: Vec<f64> = logs.iter().take(q).map(|x| x.max(0.0)).collect();
    top.sort_by(|a, b| b.total_cmp(a));
    top
}

/// Cartan projection `μ(g)`.
pub fn mu(spec: &GroupSpec, g: &GroupElement) -> Result<CartanVector> {
    let inv = g.inverse(spec).ok();
    mu_with_inverse(spec, g, inv.as_ref())
}

/// `μ(g)` when `g⁻¹` is already known (as in word balls).
pub fn mu_with_inverse(spec: &GroupSpec, g: &GroupElement, ginv: Option<&GroupElement>) -> Result<CartanVector> {
    let leaves = spec.leaves();
    if leaves.len() != g.blocks.len() {
        return Err(Error::Shape(format!("expected {} blocks, got {}", leaves.len(), g.blocks.len())));
    }
    let mut coords = Vec::new();
    for (k, (leaf, b)) in leaves.into_iter().zip(&g.blocks).enumerate() {
        if !b.is_finite() {
            return Err(Error::NonFinite);
        }
        let binv = ginv.map(|h| &h.blocks[k]).filter(|x| x.is_finite());
        let (logs, rel) = combined_log_sv(b, binv)?;
        match *leaf {
            GroupSpec::SL { field, .. } => coords.extend(finish_sl(logs, rel, field)),
            GroupSpec::SO { q, .. } => coords.extend(finish_so(&logs, q)),
            GroupSpec::Product(_) => unreachable!(),
        }
    }
    Ok(CartanVector::new(coords))
}

/// `μ(g⁻¹ g′)`.
pub fn vec_distance(spec: &GroupSpec, g: &GroupElement, g_prime: &GroupElement) -> Result<CartanVector> {
    let ginv = g.inverse(spec)?;
    let h = ginv.mul(g_prime);
    let hinv = g_prime.inverse(spec)?.mul(g);
    mu_with_inverse(spec, &h, Some(&hinv))
}

fn sorted_log_moduli(eigs: impl Iterator<Item = f64>) -> Vec<f64> {
    let mut v: Vec<f64> = eigs.map(|m| m.ln()).collect();
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

fn block_eigen_log_moduli(b: &Block) -> Option<Vec<f64>> {
    let eps = f64::EPSILON;
    let v = match b {
        Block::Real(m) => {
            let s = nalgebra::Schur::try_new(m.clone(), eps, SVD_MAX_ITER)?;
            sorted_log_moduli(s.complex_eigenvalues().iter().map(|z| z.norm()))
        }
        Block::Complex(m) => {
            let s = nalgebra::Schur::try_new(m.clone(), eps, SVD_MAX_ITER)?;
            let (_, t) = s.unpack();
            sorted_log_moduli((0..t.nrows()).map(|i| t[(i, i)].norm()))
        }
    };
    v.iter().all(|x| x.is_finite()).then_some(v)
}

/// Result of [`jordan`]: the projection plus a power-sequence cross-check.
#[derive(Debug, Clone, PartialEq)]
pub struct JordanProjection {
    pub lambda: CartanVector,
    /// `true` when the eigenvalue route failed and the power method was used.
    pub power_fallback: bool,
    /// `(k, ‖μ(g^{2^k})/2^k − λ‖)` for `k = 0..=max_power_exp`.
    pub residuals: Vec<(u32, f64)>,
}

pub const DEFAULT_JORDAN_POWER_EXP: u32 = 8;

/// Jordan projection `λ(g)` from eigenvalue moduli.
pub fn jordan(spec: &GroupSpec, g: &GroupElement) -> Result<CartanVector> {
    Ok(jordan_checked(spec, g, 0)?.lambda)
}

/// Jordan projection with the `μ(g^{2^k})/2^k` cross-check up to `max_exp`.
pub fn jordan_checked(spec: &GroupSpec, g: &GroupElement, max_exp: u32) -> Result<JordanProjection> {
    let leaves = spec.leaves();
    let mut coords = Vec::new();
    let mut fallback = false;
    for (leaf, b) in leaves.iter().zip(&g.blocks) {
        if !b.is_finite() {
            return Err(Error::NonFinite);
        }
        let logs = match block_eigen_log_moduli(b) {
            Some(l) => l,
            None => {
                fallback = true;
                let big = 1u64 << 20;
                let m = mu_power_leaf(leaf, b, big)?;
                coords.extend(m.iter().map(|x| x / big as f64));
                continue;
            }
        };
        match **leaf {
            GroupSpec::SL { field, .. } => {
                let ones = vec![1.0; logs.len()];
                coords.extend(finish_sl(logs, ones, field));
            }
            GroupSpec::SO { q, .. } => coords.extend(finish_so(&logs, q)),
            GroupSpec::Product(_) => unreachable!(),
        }
    }
    let lambda = CartanVector::new(coords);
    let mut residuals = Vec::new();
    if max_exp > 0 {
        for k in 0..=max_exp {
            let n = 1u64 << k;
            let m = mu_power(spec, g, n)?;
            residuals.push((k, m.scaled(1.0 / n as f64).dist(&lambda)));
        }
    }
    Ok(JordanProjection { lambda, power_fallback: fallback, residuals })
}

/// `μ(gⁿ)` through exterior powers: `μ_1 + … + μ_k = log σ₁(Λᵏ gⁿ)`, each
/// top singular value obtained by normalized repeated squaring. Stays
/// accurate far beyond the range where `gⁿ` itself is representable.
pub fn mu_power(spec: &GroupSpec, g: &GroupElement, n: u64) -> Result<CartanVector> {
    let mut coords = Vec::new();
    for (leaf, b) in spec.leaves().into_iter().zip(&g.blocks) {
        if !b.is_finite() {
            return Err(Error::NonFinite);
        }
        coords.extend(mu_power_leaf(leaf, b, n)?);
    }
    Ok(CartanVector::new(coords))
}

fn mu_power_leaf(leaf: &GroupSpec, b: &Block, n: u64) -> Result<Vec<f64>> {
    let size = b.size();
    let top_k = match *leaf {
        GroupSpec::SO { q, .. } => q,
        _ => size,
    };
    let mut partial = vec![0.0];
    for k in 1..=top_k {
        let l = match b {
            Block::Real(m) => log_top_sv_power(&compound(m, k), n)?,
            Block::Complex(m) => log_top_sv_power(&compound(m, k), n)?,
        };
        partial.push(l);
    }
    let logs: Vec<f64> = partial.windows(2).map(|w| w[1] - w[0]).collect();
    Ok(match *leaf {
        GroupSpec::SL { field, .. } => {
            let ones = vec![1.0; logs.len()];
            finish_sl(logs, ones, field)
        }
        GroupSpec::SO { q, .. } => finish_so(&logs, q),
        GroupSpec::Product(_) => unreachable!(),
    })
}

/// `k`-th compound matrix (all `k × k` minors, subsets in lexicographic order).
pub fn compound<T: ComplexField<RealField = f64>>(m: &DMatrix<T>, k: usize) -> DMatrix<T> {
    let n = m.nrows();
    let subsets = k_subsets(n, k);
    let s = subsets.len();
    DMatrix::from_fn(s, s, |i, j| {
        let sub = DMatrix::from_fn(k, k, |a, b| m[(subsets[i][a], subsets[j][b])].clone());
        sub.determinant()
    })
}

fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// `log σ₁(mⁿ)` by binary powering with per-step normalization.
fn log_top_sv_power<T: ComplexField<RealField = f64>>(m: &DMatrix<T>, n: u64) -> Result<f64> {
    fn normalize<T: ComplexField<RealField = f64>>(m: &mut DMatrix<T>, log_scale: &mut f64) -> Result<()> {
        let f = m.norm();
        if !(f > 0.0 && f.is_finite()) {
            return Err(Error::Singular);
        }
        m.unscale_mut(f);
        *log_scale += f.ln();
        Ok(())
    }
    let mut base = m.clone();
    let mut base_log = 0.0;
    normalize(&mut base, &mut base_log)?;
    let mut acc: Option<(DMatrix<T>, f64)> = None;
    let mut e = n;
    while e > 0 {
        if e & 1 == 1 {
            acc = Some(match acc {
                None => (base.clone(), base_log),
                Some((a, s)) => {
                    let mut p = &a * &base;
                    let mut sp = s + base_log;
                    normalize(&mut p, &mut sp)?;
                    (p, sp)
                }
            });
        }
        e >>= 1;
        if e > 0 {
            let mut sq = &base * &base;
            base_log *= 2.0;
            normalize(&mut sq, &mut base_log)?;
            base = sq;
        }
    }
    match acc {
        None => Ok(0.0),
        Some((a, s)) => Ok(s + singular_values(&a)?[0].ln()),
    }
}

/// Deterministic random elements, driven by a caller-supplied uniform
/// `[0, 1)` source so the library stays independent of any RNG crate.
pub mod sample {
    use super::*;

    fn uniform(u: &mut dyn FnMut() -> f64, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * u()
    }

    /// Entries uniform in `[−r, r]`, rescaled to determinant one.
    pub fn sl_real(n: usize, r: f64, u: &mut dyn FnMut() -> f64) -> DMatrix<f64> {
        loop {
            let mut m = DMatrix::from_fn(n, n, |_, _| uniform(u, -r, r));
            let det = m.determinant();
            if det.abs() < 1e-3 {
                continue;
            }
            if det < 0.0 {
                m.row_mut(0).neg_mut();
            }
            let s = det.abs().powf(1.0 / n as f64);
            return m / s;
        }
    }

    pub fn sl_complex(n: usize, r: f64, u: &mut dyn FnMut() -> f64) -> DMatrix<C64> {
        loop {
            let m = DMatrix::from_fn(n, n, |_, _| C64::new(uniform(u, -r, r), uniform(u, -r, r)));
            let det = m.determinant();
            if det.norm() < 1e-3 {
                continue;
            }
            // divide by an n-th root of det
            let root = C64::from_polar(det.norm().powf(1.0 / n as f64), det.arg() / n as f64);
            return m.map(|z| z / root);
        }
    }

    /// A quaternionic matrix in complex form, scaled to determinant one.
    pub fn sl_quaternion(n: usize, r: f64, u: &mut dyn FnMut() -> f64) -> DMatrix<C64> {
        loop {
            let a = DMatrix::from_fn(n, n, |_, _| C64::new(uniform(u, -r, r), uniform(u, -r, r)));
            let b = DMatrix::from_fn(n, n, |_, _| C64::new(uniform(u, -r, r), uniform(u, -r, r)));
            let m = DMatrix::from_fn(2 * n, 2 * n, |i, j| match (i < n, j < n) {
                (true, true) => a[(i, j)],
                (true, false) => b[(i, j - n)],
                (false, true) => -b[(i - n, j)].conj(),
                (false, false) => a[(i - n, j - n)].conj(),
            });
            // the determinant of such a matrix is real and nonnegative
            let det = m.determinant().re;
            if det < 1e-3 {
                continue;
            }
            return m.map(|z| z / det.powf(1.0 / (2 * n) as f64));
        }
    }

    /// Product of random rotations and boosts preserving `so_form(p, q)`.
    pub fn so(p: usize, q: usize, steps: usize, r: f64, u: &mut dyn FnMut() -> f64) -> DMatrix<f64> {
        let n = p + q;
        let mut m = DMatrix::<f64>::identity(n, n);
        for _ in 0..steps {
            let i = ((u() * n as f64) as usize).min(n - 1);
            let mut j = ((u() * (n - 1) as f64) as usize).min(n - 2);
            if j >= i {
                j += 1;
            }
            let (i, j) = (i.min(j), i.max(j));
            let t = uniform(u, -r, r);
            let mut g = DMatrix::<f64>::identity(n, n);
            if (i < p) == (j < p) {
                let (c, s) = (t.cos(), t.sin());
                g[(i, i)] = c;
                g[(j, j)] = c;
                g[(i, j)] = -s;
                g[(j, i)] = s;
            } else {
                let (c, s) = (t.cosh(), t.sinh());
                g[(i, i)] = c;
                g[(j, j)] = c;
                g[(i, j)] = s;
                g[(j, i)] = s;
            }
            m = g * m;
        }
        m
    }

    /// `P D P⁻¹` with `det = 1`, real eigenvalues whose log-moduli lie in
    /// `[−2, 2]` with consecutive gaps of at least `1/2`, and a conjugator of
    /// condition number at most 100.
    pub fn diagonalizable_sl_real(n: usize, u: &mut dyn FnMut() -> f64) -> DMatrix<f64> {
        loop {
            let p = sl_real(n, 2.0, u);
            let sv = p.singular_values();
            if sv[0] / sv[n - 1] > 100.0 {
                continue;
            }
            let Some(pinv) = p.clone().try_inverse() else { continue };
            let mut logs: Vec<f64> = (0..n).map(|_| uniform(u, -2.0, 2.0)).collect();
            let mean = logs.iter().sum::<f64>() / n as f64;
            logs.iter_mut().for_each(|x| *x -= mean);
            let mut sorted = logs.clone();
            sorted.sort_by(|a, b| b.total_cmp(a));
            if sorted.windows(2).any(|w| w[0] - w[1] < 0.5) {
                continue;
            }
            // an even number of negative eigenvalues keeps det = 1
            let flip = u() < 0.5;
            let d = DMatrix::from_fn(n, n, |i, j| {
                let sign = if flip && i < 2 { -1.0 } else { 1.0 };
                if i == j { sign * logs[i].exp() } else { 0.0 }
            });
            return &p * d * pinv;
        }
    }
}
