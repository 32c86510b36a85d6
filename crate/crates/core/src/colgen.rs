//! Column generation for the linear relaxation at one node.

use std::time::Instant;

use log::{debug, warn};
use thiserror::Error;

use crate::master::{
    classify_root, Column, LpSolution, MasterError, MasterState, RootClass, DEFAULT_BIG_M,
};
use crate::model::CanonicalInstance;
use crate::pricing::{price_all, DEFAULT_BETA};

#[derive(Debug, Clone, PartialEq)]
pub struct ColgenConfig {
    pub big_m: f64,
    pub beta: f64,
    /// Factor applied to `M` when the dummy test is inconclusive.
    pub escalation: f64,
    pub max_escalations: u32,
    pub pricing_budget: Option<u64>,
    pub deadline: Option<Instant>,
}

impl Default for ColgenConfig {
    fn default() -> Self {
        ColgenConfig {
            big_m: DEFAULT_BIG_M,
            beta: DEFAULT_BETA,
            escalation: 100.0,
            max_escalations: 3,
            pricing_budget: None,
            deadline: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ColgenError {
    #[error(transparent)]
    Master(#[from] MasterError),
    #[error("dummy columns stay in the basis after {0} big-M escalations")]
    NumericFailure(u32),
    #[error("time limit reached")]
    TimeLimit,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Relaxation {
    pub objective: f64,
    /// Non-dummy columns of the final master, in insertion order.
    pub columns: Vec<Column>,
    /// Values of `columns` in the final LP.
    pub primal: Vec<f64>,
    pub solution: LpSolution,
}

#[derive(Debug, Clone, PartialEq)]
pub enum RelaxStatus {
    Optimal(Relaxation),
    Infeasible,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ColgenStats {
    pub lp_solves: usize,
    pub columns_added: usize,
    pub escalations: u32,
    /// LP objective after each solve.
    pub objectives: Vec<f64>,
}

/// Solves the relaxation of `canon` by column generation, starting from the
/// valid members of `pool` (invalid ones are dropped). Columns generated are
/// appended to `pool`.
pub fn solve_relaxation(
    canon: &CanonicalInstance,
    pool: &mut Vec<Column>,
    cfg: &ColgenConfig,
) -> Result<(RelaxStatus, ColgenStats), ColgenError> {
    let mut stats = ColgenStats::default();
    let mut master = MasterState::new(canon, cfg.big_m);
    pool.retain(|c| master.validate(c).is_ok());
    for c in pool.iter() {
        master.add_column(c.clone())?;
    }
    let weight_bound = canon.weight_bound();
    loop {
        let sol = column_generation(&mut master, cfg, &mut stats, pool)?;
        match classify_root(&sol, weight_bound) {
            RootClass::Feasible => {
                let (columns, primal) = master
                    .columns()
                    .iter()
                    .zip(&sol.primal)
                    .filter(|(c, _)| !c.is_dummy())
                    .map(|(c, &x)| (c.clone(), x))
                    .unzip();
                let relax = Relaxation {
                    objective: sol.objective,
                    columns,
                    primal,
                    solution: sol,
                };
                return Ok((RelaxStatus::Optimal(relax), stats));
            }
            RootClass::Infeasible => return Ok((RelaxStatus::Infeasible, stats)),
            RootClass::Inconclusive => {
                if stats.escalations == cfg.max_escalations {
                    return Err(ColgenError::NumericFailure(stats.escalations));
                }
                stats.escalations += 1;
                let m = master.big_m() * cfg.escalation;
                debug!(
                    "dummy mass {} with objective {}: raising M to {m}",
                    sol.dummy_mass, sol.objective
                );
                master.set_big_m(m);
            }
        }
    }
}

fn column_generation(
    master: &mut MasterState<'_>,
    cfg: &ColgenConfig,
    stats: &mut ColgenStats,
    pool: &mut Vec<Column>,
) -> Result<LpSolution, ColgenError> {
    loop {
        if cfg.deadline.is_some_and(|d| Instant::now() >= d) {
            return Err(ColgenError::TimeLimit);
        }
        let sol = master.solve_lp()?;
        stats.lp_solves += 1;
        stats.objectives.push(sol.objective);
        let round = price_all(master.canon(), &sol, cfg.beta, cfg.pricing_budget);
        if round.columns.is_empty() {
            return Ok(sol);
        }
        let mut added = 0;
        for col in round.columns {
            if master.add_column(col.clone())? {
                pool.push(col);
                added += 1;
            }
        }
        if added == 0 {
            warn!("pricing only produced pooled columns; treating the LP as optimal");
            return Ok(sol);
        }
        stats.columns_added += added;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::master::EPS_FEAS;
    use crate::model::fixtures::{cycle4, k24_infeasible};
    use crate::model::{canonicalize, Graph, Instance};
    use crate::oracle::{brute_force, DEFAULT_MAX_ASSIGNMENTS};
    use crate::testkit::random_instance;
    use proptest::prelude::*;

    fn relax(inst: Instance) -> (RelaxStatus, ColgenStats) {
        let canon = canonicalize(inst);
        solve_relaxation(&canon, &mut Vec::new(), &ColgenConfig::default()).unwrap()
    }

    #[test]
    fn cycle4_relaxation() {
        let (status, _) = relax(cycle4());
        let RelaxStatus::Optimal(r) = status else {
            panic!("expected optimal")
        };
        assert!((r.objective - 2.0).abs() < 1e-6);
    }

    #[test]
    fn k24_relaxation_is_fractional() {
        // No list coloring exists, but every class can be split in halves
        // over two stable sets, so the relaxation is feasible with value 4.
        let (status, _) = relax(k24_infeasible());
        let RelaxStatus::Optimal(r) = status else {
            panic!("expected optimal")
        };
        assert!((r.objective - 4.0).abs() < 1e-6);
        assert!(r.primal.iter().any(|&x| x > 1e-6 && x < 1.0 - 1e-6));
    }

    #[test]
    fn triangle_with_two_colors_is_infeasible() {
        let g = Graph::from_edges(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        let (status, _) = relax(Instance::new(g, vec![vec![0, 1]; 3], vec![1; 2]).unwrap());
        assert_eq!(status, RelaxStatus::Infeasible);
    }

    #[test]
    fn triangle_gcp() {
        let g = Graph::from_edges(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        let (status, _) = relax(Instance::new(g, vec![vec![0, 1, 2]; 3], vec![1; 3]).unwrap());
        let RelaxStatus::Optimal(r) = status else {
            panic!("expected optimal")
        };
        assert!((r.objective - 3.0).abs() < 1e-6);
    }

    #[test]
    fn pool_is_reused_and_filtered() {
        let canon = canonicalize(cycle4());
        let mut pool = vec![Column::new(vec![0, 3], 0), Column::new(vec![0, 1], 0)];
        let (_, stats) = solve_relaxation(&canon, &mut pool, &ColgenConfig::default()).unwrap();
        assert!(!pool.contains(&Column::new(vec![0, 1], 0)));
        assert!(pool.contains(&Column::new(vec![0, 3], 0)));
        let before = pool.len();
        let (_, again) = solve_relaxation(&canon, &mut pool, &ColgenConfig::default()).unwrap();
        assert_eq!(pool.len(), before);
        assert_eq!(again.columns_added, 0);
        assert!(stats.columns_added > 0);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn lower_bound_and_monotone(seed in any::<u64>()) {
            let inst = random_instance(seed, 7, 4);
            let opt = brute_force(&inst, DEFAULT_MAX_ASSIGNMENTS).unwrap().value();
            let (status, stats) = relax(inst);
            for w in stats.objectives.windows(2) {
                // within one value of M the objective never increases
                if stats.escalations == 0 {
                    prop_assert!(w[1] <= w[0] + EPS_FEAS);
                }
            }
            match (status, opt) {
                (RelaxStatus::Optimal(r), Some(z)) => prop_assert!(r.objective <= z as f64 + 1e-6),
                (RelaxStatus::Optimal(_), None) => {}
                (RelaxStatus::Infeasible, z) => prop_assert_eq!(z, None),
            }
        }
    }
}
