//! Restricted master LP of the set covering formulation.
//!
//! Rows: one covering row per vertex (`Σ_{S∋v} x ≥ 1`) and one color row per
//! class with `m(k) < |V_k|` (`Σ_S x^k_S ≤ m(k)`). Classes with
//! `m(k) ≥ |V_k|` have no row; their dual is reported as 0. Every vertex
//! also owns a dummy column `({v}, k_v)` of cost `M`, so the LP is always
//! feasible.
//!
//! Dual convention: `π_v ≥ 0` on covering rows and `γ_k ≥ 0` on the color
//! rows written as `−Σ x ≥ −m(k)`, so that the reduced cost of `(S, k)` is
//! `w_k − (Σ_{v∈S} π_v − γ_k)`.

use std::collections::HashSet;

use num_bigint::BigUint;
use thiserror::Error;

use crate::lp::{LpError, RowKind, Simplex, SparseColumn};
use crate::model::{CanonicalInstance, Color, Vertex};

/// Primal feasibility and complementary slackness tolerance.
pub const EPS_FEAS: f64 = 1e-6;
/// Integrality and dummy-mass tolerance.
pub const EPS_INT: f64 = 1e-6;
pub const DEFAULT_BIG_M: f64 = 1000.0;

/// A variable `x^k_S`: stable set `S` of `G_k`, or a dummy `({v}, k_v)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Column {
    /// Sorted vertex ids.
    pub stable_set: Vec<Vertex>,
    /// Representative color of the class; `None` for dummy columns.
    pub class_rep: Option<Color>,
}

impl Column {
    pub fn new(mut stable_set: Vec<Vertex>, class_rep: Color) -> Self {
        stable_set.sort_unstable();
        stable_set.dedup();
        Column {
            stable_set,
            class_rep: Some(class_rep),
        }
    }

    pub fn dummy(v: Vertex) -> Self {
        Column {
            stable_set: vec![v],
            class_rep: None,
        }
    }

    pub fn is_dummy(&self) -> bool {
        self.class_rep.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MasterError {
    #[error("invalid column: {0}")]
    InvalidColumn(String),
    #[error("numeric failure: {0}")]
    NumericFailure(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub objective: f64,
    /// One value per pooled column, in pool order (dummies included).
    pub primal: Vec<f64>,
    /// `π`, one per vertex.
    pub pi: Vec<f64>,
    /// `γ`, one per class; 0 for classes without a color row.
    pub gamma: Vec<f64>,
    pub dummy_mass: f64,
    pub simplex_iterations: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RootClass {
    Feasible,
    Infeasible,
    Inconclusive,
}

pub struct MasterState<'a> {
    canon: &'a CanonicalInstance,
    columns: Vec<Column>,
    index: HashSet<Column>,
    big_m: f64,
    color_row: Vec<Option<usize>>,
    lp: Simplex,
    last: Option<LpSolution>,
}

impl<'a> MasterState<'a> {
    /// Master with only the dummy columns.
    pub fn new(canon: &'a CanonicalInstance, big_m: f64) -> Self {
        Self::with_color_rows(canon, big_m, true)
    }

    /// As [`MasterState::new`]; with `omit_redundant = false` every class
    /// gets a color row, even when `m(k) ≥ |V_k|`.
    pub fn with_color_rows(canon: &'a CanonicalInstance, big_m: f64, omit_redundant: bool) -> Self {
        assert!(big_m > 0.0, "big M must be positive");
        let n = canon.n();
        let mut rows: Vec<(RowKind, f64)> = vec![(RowKind::Ge, 1.0); n];
        let mut color_row = Vec::with_capacity(canon.num_classes());
        for k in 0..canon.num_classes() {
            let m = canon.multiplicity(k);
            if omit_redundant && m >= canon.vertex_set(k).len() {
                color_row.push(None);
            } else {
                color_row.push(Some(rows.len()));
                rows.push((RowKind::Le, m as f64));
            }
        }
        let mut ms = MasterState {
            canon,
            columns: Vec::new(),
            index: HashSet::new(),
            big_m,
            color_row,
            lp: Simplex::new(rows),
            last: None,
        };
        for v in 0..n {
            ms.push(Column::dummy(v));
        }
        ms
    }

    pub fn canon(&self) -> &'a CanonicalInstance {
        self.canon
    }

    pub fn columns(&self) -> &[Column] {
        &self.columns
    }

    pub fn big_m(&self) -> f64 {
        self.big_m
    }

    pub fn last_solution(&self) -> Option<&LpSolution> {
        self.last.as_ref()
    }

    pub fn num_color_rows(&self) -> usize {
        self.color_row.iter().flatten().count()
    }

    fn lp_column(&self, col: &Column) -> SparseColumn {
        let mut entries: Vec<(usize, f64)> = col.stable_set.iter().map(|&v| (v, 1.0)).collect();
        let cost = match col.class_rep {
            None => self.big_m,
            Some(rep) => {
                let k = self.canon.class_of_representative(rep).expect("validated");
                if let Some(r) = self.color_row[k] {
                    entries.push((r, 1.0));
                }
                self.canon.class_weight(k) as f64
            }
        };
        SparseColumn { cost, entries }
    }

    fn push(&mut self, col: Column) {
        let lp_col = self.lp_column(&col);
        self.lp.add_column(lp_col);
        self.index.insert(col.clone());
        self.columns.push(col);
    }

    /// Checks that `col` is a non-empty stable set of its color graph.
    pub fn validate(&self, col: &Column) -> Result<(), MasterError> {
        let Some(rep) = col.class_rep else {
            return Err(MasterError::InvalidColumn(
                "dummy columns are managed by the master".into(),
            ));
        };
        let k = self
            .canon
            .class_of_representative(rep)
            .map_err(|e| MasterError::InvalidColumn(e.to_string()))?;
        validate_column(self.canon, &col.stable_set, k).map_err(MasterError::InvalidColumn)
    }

    /// Inserts `col` unless an identical column is already pooled.
    pub fn add_column(&mut self, col: Column) -> Result<bool, MasterError> {
        self.validate(&col)?;
        if self.index.contains(&col) {
            return Ok(false);
        }
        self.push(col);
        Ok(true)
    }

    /// Changes the dummy cost `M` for subsequent solves.
    pub fn set_big_m(&mut self, big_m: f64) {
        assert!(big_m > 0.0);
        self.big_m = big_m;
        for (j, col) in self.columns.iter().enumerate() {
            if col.is_dummy() {
                self.lp.set_cost(j, big_m);
            }
        }
    }

    pub fn solve_lp(&mut self) -> Result<LpSolution, MasterError> {
        let out = self.lp.solve().map_err(|e| match e {
            LpError::Numeric(msg) => MasterError::NumericFailure(msg),
            other => MasterError::NumericFailure(other.to_string()),
        })?;
        let n = self.canon.n();
        let pi = out.duals[..n].to_vec();
        let gamma = self
            .color_row
            .iter()
            .map(|r| r.map_or(0.0, |r| -out.duals[r]))
            .collect();
        let dummy_mass = self
            .columns
            .iter()
            .zip(&out.primal)
            .filter(|(c, _)| c.is_dummy())
            .map(|(_, x)| x)
            .sum();
        let sol = LpSolution {
            objective: out.objective,
            primal: out.primal,
            pi,
            gamma,
            dummy_mass,
            simplex_iterations: out.iterations,
        };
        self.check_contract(&sol)?;
        self.last = Some(sol.clone());
        Ok(sol)
    }

    /// Primal feasibility, dual signs and nonnegative reduced costs of every
    /// pooled column, all within `EPS_FEAS`.
    fn check_contract(&self, sol: &LpSolution) -> Result<(), MasterError> {
        let fail = |msg: String| Err(MasterError::NumericFailure(msg));
        let n = self.canon.n();
        let mut cover = vec![0.0; n];
        let mut per_class = vec![0.0; self.canon.num_classes()];
        for (col, &x) in self.columns.iter().zip(&sol.primal) {
            if x < -EPS_FEAS {
                return fail(format!("negative primal value {x}"));
            }
            for &v in &col.stable_set {
                cover[v] += x;
            }
            if let Some(rep) = col.class_rep {
                per_class[self.canon.class_of_representative(rep).unwrap()] += x;
            }
        }
        if let Some(v) = (0..n).find(|&v| cover[v] < 1.0 - EPS_FEAS) {
            return fail(format!("vertex {v} covered {}", cover[v]));
        }
        for (k, row) in self.color_row.iter().enumerate() {
            if row.is_some() && per_class[k] > self.canon.multiplicity(k) as f64 + EPS_FEAS {
                return fail(format!("class {k} used {}", per_class[k]));
            }
        }
        if sol.pi.iter().chain(&sol.gamma).any(|&y| y < -EPS_FEAS) {
            return fail("dual sign violated".into());
        }
        for col in &self.columns {
            let c = self.column_reduced_cost(sol, col);
            if c < -EPS_FEAS * (1.0 + self.big_m) {
                return fail(format!("pooled column {col:?} prices at {c}"));
            }
        }
        Ok(())
    }

    fn column_reduced_cost(&self, sol: &LpSolution, col: &Column) -> f64 {
        match col.class_rep {
            None => self.big_m - sol.pi[col.stable_set[0]],
            Some(rep) => {
                let k = self.canon.class_of_representative(rep).unwrap();
                reduced_cost(self.canon, sol, &col.stable_set, k)
            }
        }
    }
}

pub(crate) fn validate_column(
    canon: &CanonicalInstance,
    set: &[Vertex],
    class: usize,
) -> Result<(), String> {
    if set.is_empty() {
        return Err("empty stable set".into());
    }
    if !set.windows(2).all(|w| w[0] < w[1]) {
        return Err("vertex ids must be strictly increasing".into());
    }
    if let Some(&v) = set
        .iter()
        .find(|&&v| v >= canon.n() || !canon.in_class_set(class, v))
    {
        return Err(format!(
            "vertex {v} not in V_k of class {}",
            canon.representative(class)
        ));
    }
    if !canon.graph().is_stable(set) {
        return Err("set is not stable".into());
    }
    Ok(())
}

/// `c^k_S = w_k − (Σ_{v∈S} π_v − γ_k)` for class index `class`.
pub fn reduced_cost(
    canon: &CanonicalInstance,
    sol: &LpSolution,
    set: &[Vertex],
    class: usize,
) -> f64 {
    let pi_sum: f64 = set.iter().map(|&v| sol.pi[v]).sum();
    canon.class_weight(class) as f64 - (pi_sum - sol.gamma[class])
}

/// `⌈n^{n/2}⌉ · (W + 1)`: a big-M for which dummy columns vanish from some
/// optimal basis exactly when the relaxation is feasible.
pub fn theoretical_big_m(n: u32, weight_bound: u64) -> BigUint {
    let n_pow_n = BigUint::from(n).pow(n);
    let root = n_pow_n.sqrt();
    let hadamard = if &root * &root == n_pow_n {
        root
    } else {
        root + 1u32
    };
    hadamard * (BigUint::from(weight_bound) + 1u32)
}

/// Classifies an optimal restricted LP with dummy columns: feasible when no
/// dummy mass remains, infeasible when the objective exceeds `W`.
pub fn classify_root(sol: &LpSolution, weight_bound: u64) -> RootClass {
    if sol.dummy_mass <= EPS_INT {
        RootClass::Feasible
    } else if sol.objective > weight_bound as f64 + EPS_FEAS {
        RootClass::Infeasible
    } else {
        RootClass::Inconclusive
    }
}
