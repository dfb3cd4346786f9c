//! Exact rational linear programming (two-phase dense simplex, Bland's rule).
//!
//! Problems here are tiny (a handful of variables, a few dozen rows), so a
//! dense tableau over `BigRational` is plenty and keeps every feasibility
//! answer tolerance-free.

use num::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{dot, zeros, QVec, Q};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone)]
pub struct Constraint {
    pub coeffs: QVec,
    pub relation: Relation,
    pub rhs: Q,
}

impl Constraint {
    pub fn new(coeffs: QVec, relation: Relation, rhs: Q) -> Self {
        Self { coeffs, relation, rhs }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal { value: Q, x: QVec },
    Infeasible,
    Unbounded,
}

/// Maximizes `objective · x` over free variables `x` subject to `constraints`.
pub fn maximize(objective: &[Q], constraints: &[Constraint]) -> Result<LpOutcome> {
    let n = objective.len();
    if let Some(c) = constraints.iter().find(|c| c.coeffs.len() != n) {
        return Err(Error::Lp(format!("constraint has {} coefficients, expected {n}", c.coeffs.len())));
    }
    // x = p - q with p, q >= 0.
    let split = |v: &[Q]| -> QVec { v.iter().cloned().chain(v.iter().map(|x| -x)).collect() };
    let rows: Vec<(QVec, Relation, Q)> = constraints
        .iter()
        .map(|c| {
            let mut coeffs = split(&c.coeffs);
            let mut rel = c.relation;
            let mut rhs = c.rhs.clone();
            // flipping a zero-rhs `>=` row lets its slack start in the basis
            if rhs.is_negative() || (rhs.is_zero() && rel == Relation::Ge) {
                coeffs.iter_mut().for_each(|x| *x = -x.clone());
                rhs = -rhs;
                rel = match rel {
                    Relation::Le => Relation::Ge,
                    Relation::Ge => Relation::Le,
                    Relation::Eq => Relation::Eq,
                };
            }
            (coeffs, rel, rhs)
        })
        .collect();
    let obj = split(objective);
    let mut tab = Tableau::build(&rows, 2 * n);
    match tab.run(&obj)? {
        None => Ok(LpOutcome::Infeasible),
        Some(Phase2::Unbounded) => Ok(LpOutcome::Unbounded),
        Some(Phase2::Optimal(y)) => {
            let x: QVec = (0..n).map(|i| &y[i] - &y[n + i]).collect();
            let value = dot(objective, &x);
            Ok(LpOutcome::Optimal { value, x })
        }
    }
}

enum Phase2 {
    Optimal(QVec),
    Unbounded,
}

struct Tableau {
    /// rows x (cols + 1); last column is the right-hand side.
    a: Vec<QVec>,
    basis: Vec<usize>,
    n_struct: usize,
    cols: usize,
    artificial: Vec<bool>,
}

impl Tableau {
    fn build(rows: &[(QVec, Relation, Q)], n_struct: usize) -> Self {
        let n_slack = rows.iter().filter(|r| r.1 != Relation::Eq).count();
        let n_art = rows.iter().filter(|r| r.1 != Relation::Le).count();
        let cols = n_struct + n_slack + n_art;
        let mut a = Vec::with_capacity(rows.len());
        let mut basis = Vec::with_capacity(rows.len());
        let mut artificial = vec![false; cols];
        let (mut s, mut t) = (n_struct, n_struct + n_slack);
        for (coeffs, rel, rhs) in rows {
            let mut row = zeros(cols + 1);
            row[..n_struct].clone_from_slice(coeffs);
            row[cols] = rhs.clone();
            match rel {
                Relation::Le => {
                    row[s] = Q::one();
                    basis.push(s);
                    s += 1;
                }
                Relation::Ge => {
                    row[s] = -Q::one();
                    s += 1;
                    row[t] = Q::one();
                    artificial[t] = true;
                    basis.push(t);
                    t += 1;
                }
                Relation::Eq => {
                    row[t] = Q::one();
                    artificial[t] = true;
                    basis.push(t);
                    t += 1;
                }
            }
            a.push(row);
        }
        Self { a, basis, n_struct, cols, artificial }
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.a[r][c].recip();
        for x in self.a[r].iter_mut() {
            *x = &*x * &inv;
        }
        let prow = self.a[r].clone();
        for (i, row) in self.a.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        }
        self.basis[r] = c;
    }

    /// Simplex iterations maximizing `cost` over the allowed columns.
    /// Returns false when unbounded.
    fn optimize(&mut self, cost: &[Q], allowed: &dyn Fn(usize) -> bool) -> bool {
        // reduced costs r_j = c_j - c_B B^-1 A_j, kept up to date by pivots
        let mut red: QVec = cost.to_vec();
        red.push(Q::zero());
        for (row, &b) in self.a.iter().zip(&self.basis) {
            if cost[b].is_zero() {
                continue;
            }
            for (r, x) in red.iter_mut().zip(row) {
                if !x.is_zero() {
                    *r -= &cost[b] * x;
                }
            }
        }
        loop {
            let entering = (0..self.cols).find(|&j| allowed(j) && red[j].is_positive());
            let Some(j) = entering else { return true };
            let mut best: Option<(usize, Q)> = None;
            for (i, row) in self.a.iter().enumerate() {
                if row[j].is_positive() {
                    let ratio = &row[self.cols] / &row[j];
                    let better = match &best {
                        None => true,
                        Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                    };
                    if better {
                        best = Some((i, ratio));
                    }
                }
            }
            let Some((r, _)) = best else { return false };
            self.pivot(r, j);
            let f = red[j].clone();
            for (x, p) in red.iter_mut().zip(&self.a[r]) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        }
    }

    fn run(&mut self, objective: &[Q]) -> Result<Option<Phase2>> {
        if self.artificial.iter().any(|&x| x) {
            let cost: QVec = (0..self.cols).map(|j| if self.artificial[j] { -Q::one() } else { Q::zero() }).collect();
            if !self.optimize(&cost, &|_| true) {
                return Err(Error::Lp("phase one unbounded".into()));
            }
            let infeas = self
                .a
                .iter()
                .zip(&self.basis)
                .any(|(row, &b)| self.artificial[b] && !row[self.cols].is_zero());
            if infeas {
                return Ok(None);
            }
            // Drive zero-level artificials out of the basis, dropping redundant rows.
            let mut i = 0;
            while i < self.a.len() {
                if self.artificial[self.basis[i]] {
                    match (0..self.cols).find(|&j| !self.artificial[j] && !self.a[i][j].is_zero()) {
                        Some(j) => self.pivot(i, j),
                        None => {
                            self.a.remove(i);
                            self.basis.remove(i);
                            continue;
                        }
                    }
                }
                i += 1;
            }
        }
        let mut cost = zeros(self.cols);
        cost[..self.n_struct].clone_from_slice(objective);
        let art = self.artificial.clone();
        if !self.optimize(&cost, &|j| !art[j]) {
            return Ok(Some(Phase2::Unbounded));
        }
        let mut y = zeros(self.n_struct);
        for (row, &b) in self.a.iter().zip(&self.basis) {
            if b < self.n_struct {
                y[b] = row[self.cols].clone();
            }
        }
        Ok(Some(Phase2::Optimal(y)))
    }
}

/// A polyhedral cone query: find `x` with `eq·x = 0`, `nonneg·x >= 0`,
/// `strict·x > 0`, and (when given) `normalization·x = 1`.
#[derive(Debug, Clone, Default)]
pub struct ConeQuery {
    pub dim: usize,
    pub equalities: Vec<QVec>,
    pub nonneg: Vec<QVec>,
    pub strict: Vec<QVec>,
    pub normalization: Option<QVec>,
}

impl ConeQuery {
    pub fn new(dim: usize) -> Self {
        Self { dim, ..Default::default() }
    }

    /// A point satisfying every constraint, or `None` if there is none.
    ///
    /// Without a normalization the search is boxed to `|x_j| <= 1`, which is
    /// harmless for cones.
    pub fn solve(&self) -> Result<Option<QVec>> {
        let n = self.dim;
        // variables: x (n), t
        let ext = |v: &QVec, t: Q| -> QVec {
            let mut r = v.clone();
            r.push(t);
            r
        };
        let mut cons = Vec::new();
        for e in &self.equalities {
            cons.push(Constraint::new(ext(e, Q::zero()), Relation::Eq, Q::zero()));
        }
        for g in &self.nonneg {
            cons.push(Constraint::new(ext(g, Q::zero()), Relation::Ge, Q::zero()));
        }
        for s in &self.strict {
            // s·x - t >= 0
            cons.push(Constraint::new(ext(s, -Q::one()), Relation::Ge, Q::zero()));
        }
        match &self.normalization {
            Some(rho) => cons.push(Constraint::new(ext(rho, Q::zero()), Relation::Eq, Q::one())),
            None => {
                for j in 0..n {
                    let mut e = zeros(n + 1);
                    e[j] = Q::one();
                    cons.push(Constraint::new(e.clone(), Relation::Le, Q::one()));
                    cons.push(Constraint::new(e, Relation::Ge, -Q::one()));
                }
            }
        }
        let mut tcap = zeros(n + 1);
        tcap[n] = Q::one();
        cons.push(Constraint::new(tcap.clone(), Relation::Le, Q::one()));
        match maximize(&tcap, &cons)? {
            LpOutcome::Infeasible => Ok(None),
            LpOutcome::Unbounded => Err(Error::Lp("bounded cone query reported unbounded".into())),
            LpOutcome::Optimal { value, mut x } => {
                if !self.strict.is_empty() && !value.is_positive() {
                    return Ok(None);
                }
                x.truncate(n);
                Ok(Some(x))
            }
        }
    }

    pub fn feasible(&self) -> Result<bool> {
        Ok(self.solve()?.is_some())
    }
}
