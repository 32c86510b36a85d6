//! Exhaustive WLCP solver used to check everything else at desk scale.

use thiserror::Error;

use crate::model::{assignment_weight, Color, Instance, ListColoring, Vertex};

pub const DEFAULT_MAX_ASSIGNMENTS: u128 = 100_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleResult {
    Optimal(ListColoring),
    Infeasible,
}

impl OracleResult {
    pub fn value(&self) -> Option<u64> {
        match self {
            OracleResult::Optimal(c) => Some(c.weight),
            OracleResult::Infeasible => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("search space of {size} assignments exceeds limit {limit}")]
pub struct LimitExceeded {
    pub size: u128,
    pub limit: u128,
}

/// `Π |L(v)|`, saturating.
pub fn search_space(inst: &Instance) -> u128 {
    inst.lists()
        .iter()
        .fold(1u128, |acc, l| acc.saturating_mul(l.len() as u128))
}

/// Depth-first search over vertices in descending degree order, pruning on
/// edge conflicts and on the active-color weight reaching the incumbent.
pub fn brute_force(inst: &Instance, max_assignments: u128) -> Result<OracleResult, LimitExceeded> {
    let size = search_space(inst);
    if size > max_assignments {
        return Err(LimitExceeded {
            size,
            limit: max_assignments,
        });
    }
    let mut order: Vec<Vertex> = (0..inst.n()).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(inst.graph().degree(v)), v));

    let mut search = Search {
        inst,
        order: &order,
        assignment: vec![usize::MAX; inst.n()],
        uses: vec![0; inst.color_capacity()],
        weight: 0,
        best: None,
    };
    search.descend(0);
    Ok(match search.best {
        Some((weight, assignment)) => OracleResult::Optimal(ListColoring { assignment, weight }),
        None => OracleResult::Infeasible,
    })
}

struct Search<'a> {
    inst: &'a Instance,
    order: &'a [Vertex],
    assignment: Vec<Color>,
    uses: Vec<usize>,
    weight: u64,
    best: Option<(u64, Vec<Color>)>,
}

impl Search<'_> {
    fn descend(&mut self, depth: usize) {
        if let Some((best, _)) = &self.best {
            if self.weight >= *best {
                return;
            }
        }
        if depth == self.order.len() {
            self.best = Some((self.weight, self.assignment.clone()));
            return;
        }
        let v = self.order[depth];
        for &c in self.inst.list(v) {
            if self
                .inst
                .graph()
                .neighbors(v)
                .iter()
                .any(|&u| self.assignment[u] == c)
            {
                continue;
            }
            self.assignment[v] = c;
            self.uses[c] += 1;
            if self.uses[c] == 1 {
                self.weight += self.inst.weight(c);
            }
            self.descend(depth + 1);
            if self.uses[c] == 1 {
                self.weight -= self.inst.weight(c);
            }
            self.uses[c] -= 1;
            self.assignment[v] = usize::MAX;
        }
    }
}

/// Every proper list coloring, by plain odometer enumeration of the
/// cartesian product of the lists. No pruning of any kind.
pub fn enumerate_colorings(inst: &Instance) -> Vec<Vec<Color>> {
    let n = inst.n();
    let mut out = Vec::new();
    if n == 0 {
        out.push(Vec::new());
        return out;
    }
    let mut idx = vec![0usize; n];
    loop {
        let f: Vec<Color> = (0..n).map(|v| inst.list(v)[idx[v]]).collect();
        if inst.graph().edges().all(|(u, v)| f[u] != f[v]) {
            out.push(f);
        }
        let mut pos = 0;
        loop {
            if pos == n {
                return out;
            }
            idx[pos] += 1;
            if idx[pos] < inst.list(pos).len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// Optimum from [`enumerate_colorings`]; the independent cross-check for
/// [`brute_force`].
pub fn brute_force_plain(inst: &Instance) -> Option<u64> {
    enumerate_colorings(inst)
        .iter()
        .map(|f| assignment_weight(inst, f))
        .min()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::fixtures::{cycle4, k24_infeasible};
    use crate::model::{remove_irrelevant_edges, verify_coloring, Graph};
    use crate::testkit::random_instance;
    use proptest::prelude::*;
    use std::collections::BTreeSet;

    #[test]
    fn cycle4_optimum_is_two() {
        // The 4-cycle is bipartite: v1, v4 share color 1 and v2, v3 share color 2.
        let inst = cycle4();
        let res = brute_force(&inst, DEFAULT_MAX_ASSIGNMENTS).unwrap();
        assert_eq!(res.value(), Some(2));
        assert_eq!(brute_force_plain(&inst), Some(2));
        assert_eq!(verify_coloring(&inst, &[0, 1, 1, 0]).unwrap().weight, 2);
        if let OracleResult::Optimal(c) = res {
            assert_eq!(verify_coloring(&inst, &c.assignment).unwrap().weight, 2);
        }
    }

    #[test]
    fn k24_is_infeasible() {
        let inst = k24_infeasible();
        assert_eq!(
            brute_force(&inst, DEFAULT_MAX_ASSIGNMENTS).unwrap(),
            OracleResult::Infeasible
        );
        assert!(enumerate_colorings(&inst).is_empty());
    }

    #[test]
    fn single_vertex() {
        let inst = Instance::new(Graph::empty(1), vec![vec![0]], vec![2]).unwrap();
        assert_eq!(brute_force(&inst, 10).unwrap().value(), Some(2));
    }

    #[test]
    fn limit_is_enforced() {
        let inst = cycle4();
        let err = brute_force(&inst, 10).unwrap_err();
        assert_eq!(err.size, 7 * 6 * 6 * 2);
    }

    #[test]
    fn irrelevant_edge_removal_keeps_triangle_colorings() {
        let g = Graph::from_edges(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        let inst = Instance::new(g, vec![vec![0], vec![1], vec![0, 1]], vec![1, 1]).unwrap();
        let reduced = remove_irrelevant_edges(&inst);
        assert_eq!(enumerate_colorings(&inst), enumerate_colorings(&reduced));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn pruned_and_plain_enumerators_agree(seed in any::<u64>()) {
            let inst = random_instance(seed, 7, 5);
            prop_assume!(search_space(&inst) <= 100_000);
            let pruned = brute_force(&inst, DEFAULT_MAX_ASSIGNMENTS).unwrap();
            prop_assert_eq!(pruned.value(), brute_force_plain(&inst));
            if let OracleResult::Optimal(c) = pruned {
                prop_assert_eq!(verify_coloring(&inst, &c.assignment).unwrap().weight, c.weight);
            }
        }

        #[test]
        fn verify_matches_enumeration(seed in any::<u64>()) {
            let inst = random_instance(seed, 6, 4);
            let feasible: BTreeSet<Vec<Color>> = enumerate_colorings(&inst).into_iter().collect();
            // every assignment drawn from the lists
            let all = enumerate_all_assignments(&inst);
            for f in all {
                prop_assert_eq!(verify_coloring(&inst, &f).is_ok(), feasible.contains(&f));
            }
        }

        #[test]
        fn irrelevant_edges_preserve_colorings(seed in any::<u64>()) {
            let inst = random_instance(seed, 8, 5);
            prop_assume!(search_space(&inst) <= 200_000);
            let reduced = remove_irrelevant_edges(&inst);
            prop_assert_eq!(enumerate_colorings(&inst), enumerate_colorings(&reduced));
        }

        #[test]
        fn optimum_invariant_under_relabeling(seed in any::<u64>(), rot in 1usize..7) {
            let inst = random_instance(seed, 7, 5);
            prop_assume!(search_space(&inst) <= 100_000);
            let n = inst.n();
            let perm = |v: usize| (v + rot) % n;
            let g = Graph::from_edges(n, inst.graph().edges().map(|(u, v)| (perm(u), perm(v)))).unwrap();
            let mut lists = vec![Vec::new(); n];
            for v in 0..n {
                lists[perm(v)] = inst.list(v).to_vec();
            }
            let relabeled = Instance::new(g, lists, inst.weights().to_vec()).unwrap();
            prop_assert_eq!(
                brute_force(&inst, DEFAULT_MAX_ASSIGNMENTS).unwrap().value(),
                brute_force(&relabeled, DEFAULT_MAX_ASSIGNMENTS).unwrap().value()
            );
        }
    }

    fn enumerate_all_assignments(inst: &Instance) -> Vec<Vec<Color>> {
        let mut out: Vec<Vec<Color>> = vec![Vec::new()];
        for v in 0..inst.n() {
            out = out
                .into_iter()
                .flat_map(|f| {
                    inst.list(v).iter().map(move |&c| {
                        let mut g = f.clone();
                        g.push(c);
                        g
                    })
                })
                .collect();
        }
        out
    }
}
