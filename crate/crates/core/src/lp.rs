//! Dense revised simplex for small covering/packing LPs.
//!
//! Solves `min c·x` subject to rows `a_i·x >= b_i` or `a_i·x <= b_i` and
//! `x >= 0`. Columns are sparse; the basis inverse is kept dense and updated
//! by elementary row operations, with periodic refactorization. Columns may
//! be appended between solves and the previous basis is reused.

use thiserror::Error;

const PIVOT_TOL: f64 = 1e-9;
const COST_TOL: f64 = 1e-9;
const FEAS_TOL: f64 = 1e-9;
const REFACTOR_EVERY: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowKind {
    Ge,
    Le,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SparseColumn {
    pub cost: f64,
    pub entries: Vec<(usize, f64)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LpError {
    #[error("LP is infeasible")]
    Infeasible,
    #[error("LP is unbounded")]
    Unbounded,
    #[error("numeric failure: {0}")]
    Numeric(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Var {
    Col(usize),
    Slack(usize),
    Art(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpOutcome {
    pub objective: f64,
    pub primal: Vec<f64>,
    /// One per row; `>= 0` on `Ge` rows and `<= 0` on `Le` rows.
    pub duals: Vec<f64>,
    pub iterations: usize,
}

#[derive(Debug, Clone)]
pub struct Simplex {
    kinds: Vec<RowKind>,
    rhs: Vec<f64>,
    cols: Vec<SparseColumn>,
    basis: Vec<Var>,
    binv: Vec<Vec<f64>>,
    xb: Vec<f64>,
    /// Degenerate-pivot budget before switching to Bland's rule.
    degenerate_limit: usize,
    pub max_iterations: usize,
}

impl Simplex {
    pub fn new(rows: Vec<(RowKind, f64)>) -> Self {
        let m = rows.len();
        let (kinds, rhs): (Vec<_>, Vec<_>) = rows.into_iter().unzip();
        let mut s = Simplex {
            kinds,
            rhs,
            cols: Vec::new(),
            basis: Vec::new(),
            binv: Vec::new(),
            xb: Vec::new(),
            degenerate_limit: 10 * m.max(1),
            max_iterations: 1_000_000,
        };
        s.reset_basis();
        s
    }

    pub fn num_rows(&self) -> usize {
        self.rhs.len()
    }

    pub fn num_cols(&self) -> usize {
        self.cols.len()
    }

    pub fn add_column(&mut self, col: SparseColumn) -> usize {
        debug_assert!(col.entries.iter().all(|&(r, _)| r < self.num_rows()));
        self.cols.push(col);
        self.cols.len() - 1
    }

    /// Changes the objective coefficient of column `j`; the basis is kept.
    pub fn set_cost(&mut self, j: usize, cost: f64) {
        self.cols[j].cost = cost;
    }

    pub fn column(&self, j: usize) -> &SparseColumn {
        &self.cols[j]
    }

    /// Slack basis where feasible, artificials elsewhere.
    fn reset_basis(&mut self) {
        let m = self.num_rows();
        self.basis = (0..m)
            .map(|i| match self.kinds[i] {
                RowKind::Le if self.rhs[i] >= 0.0 => Var::Slack(i),
                RowKind::Ge if self.rhs[i] <= 0.0 => Var::Slack(i),
                _ => Var::Art(i),
            })
            .collect();
        self.binv = identity(m);
        // basic slack of a Ge row has coefficient -1
        for i in 0..m {
            if self.basis[i] == Var::Slack(i) && self.kinds[i] == RowKind::Ge {
                self.binv[i][i] = -1.0;
            }
        }
        self.xb = self.apply_binv(&self.rhs);
    }

    fn cost(&self, v: Var, phase1: bool) -> f64 {
        match (v, phase1) {
            (Var::Art(_), true) => 1.0,
            (Var::Art(_), false) => 0.0,
            (_, true) => 0.0,
            (Var::Col(j), false) => self.cols[j].cost,
            (Var::Slack(_), false) => 0.0,
        }
    }

    fn sparse_of(&self, v: Var) -> Vec<(usize, f64)> {
        match v {
            Var::Col(j) => self.cols[j].entries.clone(),
            Var::Slack(i) => vec![(
                i,
                if self.kinds[i] == RowKind::Ge {
                    -1.0
                } else {
                    1.0
                },
            )],
            Var::Art(i) => vec![(i, 1.0)],
        }
    }

    fn apply_binv(&self, dense: &[f64]) -> Vec<f64> {
        self.binv
            .iter()
            .map(|row| row.iter().zip(dense).map(|(a, b)| a * b).sum())
            .collect()
    }

    fn binv_times_sparse(&self, entries: &[(usize, f64)]) -> Vec<f64> {
        self.binv
            .iter()
            .map(|row| entries.iter().map(|&(r, a)| row[r] * a).sum())
            .collect()
    }

    fn duals(&self, phase1: bool) -> Vec<f64> {
        let m = self.num_rows();
        let mut y = vec![0.0; m];
        for (i, &v) in self.basis.iter().enumerate() {
            let c = self.cost(v, phase1);
            if c != 0.0 {
                for (yk, b) in y.iter_mut().zip(&self.binv[i]) {
                    *yk += c * b;
                }
            }
        }
        y
    }

    fn reduced_cost(&self, v: Var, y: &[f64], phase1: bool) -> f64 {
        let mut d = self.cost(v, phase1);
        for (r, a) in self.sparse_of(v) {
            d -= y[r] * a;
        }
        d
    }

    /// Recomputes the basis inverse from scratch by Gauss-Jordan elimination.
    fn refactor(&mut self) -> Result<(), LpError> {
        let m = self.num_rows();
        let mut a = vec![vec![0.0; m]; m];
        for (k, &v) in self.basis.iter().enumerate() {
            for (r, val) in self.sparse_of(v) {
                a[r][k] = val;
            }
        }
        let mut inv = identity(m);
        for col in 0..m {
            let piv = (col..m)
                .max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs()))
                .unwrap();
            if a[piv][col].abs() < 1e-12 {
                return Err(LpError::Numeric("singular basis".into()));
            }
            a.swap(col, piv);
            inv.swap(col, piv);
            let p = a[col][col];
            for k in 0..m {
                a[col][k] /= p;
                inv[col][k] /= p;
            }
            for r in 0..m {
                if r != col && a[r][col] != 0.0 {
                    let f = a[r][col];
                    for k in 0..m {
                        a[r][k] -= f * a[col][k];
                        inv[r][k] -= f * inv[col][k];
                    }
                }
            }
        }
        // `inv` is the inverse of the matrix whose column k is basis[k]; row k
        // of the inverse yields the value of basis[k].
        self.binv = inv;
        self.xb = self.apply_binv(&self.rhs);
        for x in &mut self.xb {
            if x.abs() < FEAS_TOL {
                *x = 0.0;
            }
        }
        Ok(())
    }

    fn pivot(&mut self, r: usize, alpha: &[f64], entering: Var) {
        let m = self.num_rows();
        let ar = alpha[r];
        let theta = self.xb[r] / ar;
        for i in 0..m {
            if i != r {
                self.xb[i] -= theta * alpha[i];
                if self.xb[i].abs() < FEAS_TOL {
                    self.xb[i] = 0.0;
                }
            }
        }
        self.xb[r] = theta;
        let row_r: Vec<f64> = self.binv[r].iter().map(|x| x / ar).collect();
        for i in 0..m {
            if i != r && alpha[i] != 0.0 {
                let f = alpha[i];
                for (x, y) in self.binv[i].iter_mut().zip(&row_r) {
                    *x -= f * y;
                }
            }
        }
        self.binv[r] = row_r;
        self.basis[r] = entering;
    }

    /// Entering candidates; artificials never re-enter.
    fn candidates(&self) -> impl Iterator<Item = Var> + '_ {
        (0..self.cols.len())
            .map(Var::Col)
            .chain((0..self.num_rows()).map(Var::Slack))
    }

    fn run_phase(&mut self, phase1: bool, iterations: &mut usize) -> Result<(), LpError> {
        let mut in_basis = vec![false; self.cols.len()];
        let mut slack_basic = vec![false; self.num_rows()];
        let mut art_basic = vec![false; self.num_rows()];
        for &v in &self.basis {
            match v {
                Var::Col(j) => in_basis[j] = true,
                Var::Slack(i) => slack_basic[i] = true,
                Var::Art(i) => art_basic[i] = true,
            }
        }
        let mut degenerate = 0usize;
        let mut since_refactor = 0usize;
        loop {
            if *iterations >= self.max_iterations {
                return Err(LpError::Numeric("iteration limit".into()));
            }
            let bland = degenerate >= self.degenerate_limit;
            let y = self.duals(phase1);
            let mut entering: Option<(Var, f64)> = None;
            for v in self.candidates() {
                let basic = match v {
                    Var::Col(j) => in_basis[j],
                    Var::Slack(i) => slack_basic[i],
                    Var::Art(i) => art_basic[i],
                };
                if basic {
                    continue;
                }
                let d = self.reduced_cost(v, &y, phase1);
                if d < -COST_TOL {
                    if bland {
                        entering = Some((v, d));
                        break;
                    }
                    if entering.is_none_or(|(_, best)| d < best) {
                        entering = Some((v, d));
                    }
                }
            }
            let Some((q, _)) = entering else {
                return Ok(());
            };
            let alpha = self.binv_times_sparse(&self.sparse_of(q));

            // Ratio test; ties by largest pivot, or smallest basis position
            // under Bland's rule.
            let mut leave: Option<(usize, f64)> = None;
            for i in 0..alpha.len() {
                let forced_out =
                    !phase1 && matches!(self.basis[i], Var::Art(_)) && alpha[i].abs() > PIVOT_TOL;
                if alpha[i] > PIVOT_TOL || forced_out {
                    let ratio = if forced_out {
                        0.0
                    } else {
                        self.xb[i].max(0.0) / alpha[i]
                    };
                    let better = match leave {
                        None => true,
                        Some((r, best)) => {
                            if ratio < best - FEAS_TOL {
                                true
                            } else if ratio <= best + FEAS_TOL {
                                if bland {
                                    var_order(self.basis[i]) < var_order(self.basis[r])
                                } else {
                                    alpha[i].abs() > alpha[r].abs()
                                }
                            } else {
                                false
                            }
                        }
                    };
                    if better {
                        leave = Some((i, ratio));
                    }
                }
            }
            let Some((r, ratio)) = leave else {
                return Err(if phase1 {
                    LpError::Numeric("unbounded phase 1".into())
                } else {
                    LpError::Unbounded
                });
            };
            if ratio <= FEAS_TOL {
                degenerate += 1;
            } else {
                degenerate = 0;
            }
            match self.basis[r] {
                Var::Col(j) => in_basis[j] = false,
                Var::Slack(i) => slack_basic[i] = false,
                Var::Art(i) => art_basic[i] = false,
            }
            match q {
                Var::Col(j) => in_basis[j] = true,
                Var::Slack(i) => slack_basic[i] = true,
                Var::Art(i) => art_basic[i] = true,
            }
            self.pivot(r, &alpha, q);
            *iterations += 1;
            since_refactor += 1;
            if since_refactor >= REFACTOR_EVERY {
                self.refactor()?;
                since_refactor = 0;
            }
        }
    }

    /// Solves from the current basis. Appended columns enter as nonbasic.
    pub fn solve(&mut self) -> Result<LpOutcome, LpError> {
        let mut iterations = 0;
        if self.refactor().is_err() || self.xb.iter().any(|&x| x < -FEAS_TOL) {
            self.reset_basis();
        }
        let needs_phase1 = self
            .basis
            .iter()
            .zip(&self.xb)
            .any(|(&v, &x)| matches!(v, Var::Art(_)) && x > FEAS_TOL);
        if needs_phase1 {
            self.run_phase(true, &mut iterations)?;
            let infeas: f64 = self
                .basis
                .iter()
                .zip(&self.xb)
                .filter(|(v, _)| matches!(v, Var::Art(_)))
                .map(|(_, x)| *x)
                .sum();
            if infeas > 1e-7 {
                return Err(LpError::Infeasible);
            }
        }
        self.run_phase(false, &mut iterations)?;
        self.refactor()?;

        let mut primal = vec![0.0; self.cols.len()];
        for (&v, &x) in self.basis.iter().zip(&self.xb) {
            if let Var::Col(j) = v {
                primal[j] = x.max(0.0);
            }
        }
        let objective = primal.iter().zip(&self.cols).map(|(x, c)| x * c.cost).sum();
        let duals = self.duals(false);
        Ok(LpOutcome {
            objective,
            primal,
            duals,
            iterations,
        })
    }
}

fn var_order(v: Var) -> (usize, usize) {
    match v {
        Var::Col(j) => (0, j),
        Var::Slack(i) => (1, i),
        Var::Art(i) => (2, i),
    }
}

fn identity(m: usize) -> Vec<Vec<f64>> {
    (0..m)
        .map(|i| {
            let mut r = vec![0.0; m];
            r[i] = 1.0;
            r
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::rng_from_seed;
    use rand::Rng;

    fn col(cost: f64, entries: &[(usize, f64)]) -> SparseColumn {
        SparseColumn {
            cost,
            entries: entries.to_vec(),
        }
    }

    /// Optimum by enumerating every basis of the standard-form system
    /// `[A | ±I] (x, s) = b`. Independent of the simplex path.
    fn vertex_enumeration(rows: &[(RowKind, f64)], cols: &[SparseColumn]) -> Option<f64> {
        let m = rows.len();
        let n = cols.len();
        let total = n + m;
        let column = |k: usize| -> Vec<f64> {
            let mut v = vec![0.0; m];
            if k < n {
                for &(r, a) in &cols[k].entries {
                    v[r] = a;
                }
            } else {
                let i = k - n;
                v[i] = if rows[i].0 == RowKind::Ge { -1.0 } else { 1.0 };
            }
            v
        };
        let mut best: Option<f64> = None;
        let mut subset: Vec<usize> = (0..m).collect();
        loop {
            // solve B z = b by Gaussian elimination
            let mut a: Vec<Vec<f64>> = (0..m)
                .map(|r| {
                    let mut row: Vec<f64> = subset.iter().map(|&k| column(k)[r]).collect();
                    row.push(rows[r].1);
                    row
                })
                .collect();
            let mut ok = true;
            for c in 0..m {
                let p = (c..m)
                    .max_by(|&x, &y| a[x][c].abs().total_cmp(&a[y][c].abs()))
                    .unwrap();
                if a[p][c].abs() < 1e-10 {
                    ok = false;
                    break;
                }
                a.swap(c, p);
                for r in 0..m {
                    if r != c {
                        let f = a[r][c] / a[c][c];
                        for k in c..=m {
                            a[r][k] -= f * a[c][k];
                        }
                    }
                }
            }
            if ok {
                let z: Vec<f64> = (0..m).map(|r| a[r][m] / a[r][r]).collect();
                if z.iter().all(|&x| x >= -1e-9) {
                    let obj: f64 = subset
                        .iter()
                        .zip(&z)
                        .filter(|(&k, _)| k < n)
                        .map(|(&k, x)| cols[k].cost * x)
                        .sum();
                    best = Some(best.map_or(obj, |b: f64| b.min(obj)));
                }
            }
            // next combination
            let mut i = m;
            loop {
                if i == 0 {
                    return best;
                }
                i -= 1;
                if subset[i] < total - m + i {
                    subset[i] += 1;
                    for j in i + 1..m {
                        subset[j] = subset[j - 1] + 1;
                    }
                    break;
                }
            }
        }
    }

    #[test]
    fn triangle_covering() {
        // K_3 coloring LP: singletons, one Le row with m = 3
        let mut lp = Simplex::new(vec![
            (RowKind::Ge, 1.0),
            (RowKind::Ge, 1.0),
            (RowKind::Ge, 1.0),
            (RowKind::Le, 3.0),
        ]);
        for v in 0..3 {
            lp.add_column(col(1.0, &[(v, 1.0), (3, 1.0)]));
        }
        let out = lp.solve().unwrap();
        assert!((out.objective - 3.0).abs() < 1e-9);
        assert!(out.duals[..3].iter().all(|&y| y >= -1e-9));
        assert!(out.duals[3] <= 1e-9);
    }

    #[test]
    fn infeasible_is_reported() {
        let mut lp = Simplex::new(vec![(RowKind::Ge, 2.0), (RowKind::Le, 1.0)]);
        lp.add_column(col(1.0, &[(0, 1.0), (1, 1.0)]));
        assert_eq!(lp.solve(), Err(LpError::Infeasible));
    }

    #[test]
    fn warm_start_after_adding_columns() {
        let mut lp = Simplex::new(vec![(RowKind::Ge, 1.0), (RowKind::Ge, 1.0)]);
        lp.add_column(col(10.0, &[(0, 1.0)]));
        lp.add_column(col(10.0, &[(1, 1.0)]));
        assert!((lp.solve().unwrap().objective - 20.0).abs() < 1e-9);
        lp.add_column(col(1.0, &[(0, 1.0), (1, 1.0)]));
        let out = lp.solve().unwrap();
        assert!((out.objective - 1.0).abs() < 1e-9);
        assert!((out.primal[2] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn matches_vertex_enumeration_with_valid_duals() {
        for seed in 0..150 {
            let mut rng = rng_from_seed(seed);
            let m = rng.gen_range(1..=4);
            let n = rng.gen_range(1..=5);
            let rows: Vec<(RowKind, f64)> = (0..m)
                .map(|_| {
                    if rng.gen_bool(0.7) {
                        (RowKind::Ge, rng.gen_range(0..=2) as f64)
                    } else {
                        (RowKind::Le, rng.gen_range(0..=3) as f64)
                    }
                })
                .collect();
            let cols: Vec<SparseColumn> = (0..n)
                .map(|_| {
                    let mut entries: Vec<(usize, f64)> = Vec::new();
                    for r in 0..m {
                        if rng.gen_bool(0.6) {
                            entries.push((r, rng.gen_range(1..=2) as f64));
                        }
                    }
                    col(rng.gen_range(0..=5) as f64, &entries)
                })
                .collect();
            let expected = vertex_enumeration(&rows, &cols);
            let mut lp = Simplex::new(rows.clone());
            for c in &cols {
                lp.add_column(c.clone());
            }
            match (lp.solve(), expected) {
                (Ok(out), Some(best)) => {
                    assert!(
                        (out.objective - best).abs() < 1e-7,
                        "seed {seed}: {} vs {best}",
                        out.objective
                    );
                    // dual feasibility and strong duality
                    for (i, &(kind, _)) in rows.iter().enumerate() {
                        match kind {
                            RowKind::Ge => assert!(out.duals[i] >= -1e-7),
                            RowKind::Le => assert!(out.duals[i] <= 1e-7),
                        }
                    }
                    for c in &cols {
                        let d = c.cost
                            - c.entries
                                .iter()
                                .map(|&(r, a)| out.duals[r] * a)
                                .sum::<f64>();
                        assert!(d >= -1e-7, "seed {seed}: negative reduced cost {d}");
                    }
                    let dual_obj: f64 = rows.iter().zip(&out.duals).map(|((_, b), y)| b * y).sum();
                    assert!(
                        (dual_obj - best).abs() < 1e-7,
                        "seed {seed}: dual {dual_obj} vs {best}"
                    );
                }
                (Err(LpError::Infeasible), None) => {}
                (got, want) => panic!("seed {seed}: got {got:?}, expected {want:?}"),
            }
        }
    }
}
