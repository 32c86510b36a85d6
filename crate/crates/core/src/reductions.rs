//! Polynomial special cases: instances whose color graphs are all complete
//! (an assignment problem), and the set covering correspondence.

use thiserror::Error;

use crate::model::{verify_coloring, Color, Graph, Instance, ListColoring, ModelError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("color {color} has non-adjacent vertices {u} and {v}")]
    NotCompleteCase { color: Color, u: usize, v: usize },
    #[error("element {0} is covered by no subset")]
    UncoveredElement(usize),
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    pub weight: u64,
    /// Right vertex matched to each left vertex.
    pub mate: Vec<usize>,
}

/// Minimum weight matching saturating the left side of a bipartite graph,
/// by shortest augmenting paths with vertex potentials. `None` when no such
/// matching exists.
pub fn min_weight_perfect_matching(
    left: usize,
    right: usize,
    edges: &[(usize, usize, u64)],
) -> Option<Matching> {
    if left == 0 {
        return Some(Matching {
            weight: 0,
            mate: Vec::new(),
        });
    }
    if left > right {
        return None;
    }
    // A missing edge costs more than any real matching.
    let total: i128 = edges.iter().map(|&(_, _, w)| w as i128).sum();
    let absent = total + 1;
    let mut cost = vec![vec![absent; right]; left];
    for &(l, r, w) in edges {
        cost[l][r] = cost[l][r].min(w as i128);
    }

    // 1-based arrays; column 0 is the virtual root.
    let inf = i128::MAX / 4;
    let mut u = vec![0i128; left + 1];
    let mut v = vec![0i128; right + 1];
    let mut owner = vec![0usize; right + 1];
    let mut way = vec![0usize; right + 1];
    for i in 1..=left {
        owner[0] = i;
        let mut j0 = 0;
        let mut minv = vec![inf; right + 1];
        let mut used = vec![false; right + 1];
        loop {
            used[j0] = true;
            let i0 = owner[j0];
            let mut delta = inf;
            let mut j1 = 0;
            for j in 1..=right {
                if !used[j] {
                    let cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=right {
                if used[j] {
                    u[owner[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if owner[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            owner[j0] = owner[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut mate = vec![0; left];
    for j in 1..=right {
        if owner[j] != 0 {
            mate[owner[j] - 1] = j - 1;
        }
    }
    let mut weight: i128 = 0;
    for (l, &r) in mate.iter().enumerate() {
        if cost[l][r] >= absent {
            return None;
        }
        weight += cost[l][r];
    }
    Some(Matching {
        weight: weight as u64,
        mate,
    })
}

/// Solves an instance in which every color graph is complete, so that a
/// coloring is an injective choice of one list color per vertex.
/// `Ok(None)` means infeasible.
pub fn solve_complete_case(inst: &Instance) -> Result<Option<ListColoring>, ReductionError> {
    let sets = inst.color_vertex_sets();
    for (color, set) in sets.iter().enumerate() {
        for (i, &a) in set.iter().enumerate() {
            if let Some(&b) = set[i + 1..].iter().find(|&&b| !inst.graph().has_edge(a, b)) {
                return Err(ReductionError::NotCompleteCase { color, u: a, v: b });
            }
        }
    }
    let colors = inst.colors();
    let index = |c: Color| {
        colors
            .binary_search(&c)
            .expect("list colors are in the universe")
    };
    let edges: Vec<(usize, usize, u64)> = (0..inst.n())
        .flat_map(|v| inst.list(v).iter().map(move |&c| (v, c)))
        .map(|(v, c)| (v, index(c), inst.weight(c)))
        .collect();
    let Some(m) = min_weight_perfect_matching(inst.n(), colors.len(), &edges) else {
        return Ok(None);
    };
    let f: Vec<Color> = m.mate.iter().map(|&r| colors[r]).collect();
    let coloring = verify_coloring(inst, &f).expect("a saturating matching is a list coloring");
    debug_assert_eq!(coloring.weight, m.weight);
    Ok(Some(coloring))
}

/// The WLCP image of a set covering instance: an edgeless graph on the
/// elements, one color per subset, `L(e)` = subsets containing `e`.
pub fn setcover_to_wlcp(
    universe: usize,
    subsets: &[Vec<usize>],
    costs: &[u64],
) -> Result<Instance, ReductionError> {
    assert_eq!(subsets.len(), costs.len(), "one cost per subset");
    let mut lists = vec![Vec::new(); universe];
    for (j, s) in subsets.iter().enumerate() {
        for &e in s {
            if e >= universe {
                return Err(ModelError::VertexOutOfRange {
                    vertex: e,
                    n: universe,
                }
                .into());
            }
            lists[e].push(j);
        }
    }
    if let Some(e) = lists.iter().position(Vec::is_empty) {
        return Err(ReductionError::UncoveredElement(e));
    }
    Ok(Instance::new(
        Graph::empty(universe),
        lists,
        costs.to_vec(),
    )?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::rng_from_seed;
    use crate::oracle::{brute_force, DEFAULT_MAX_ASSIGNMENTS};
    use crate::testkit::random_complete_case;
    use rand::Rng;

    fn permutations(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in permutations(n - 1) {
            for i in 0..=p.len() {
                let mut q = p.clone();
                q.insert(i, n - 1);
                out.push(q);
            }
        }
        out
    }

    #[test]
    fn tiny_matchings() {
        let m = min_weight_perfect_matching(2, 2, &[(0, 0, 1), (0, 1, 2), (1, 0, 2), (1, 1, 1)])
            .unwrap();
        assert_eq!(m.weight, 2);
        assert_eq!(m.mate, vec![0, 1]);
        assert_eq!(
            min_weight_perfect_matching(2, 2, &[(0, 0, 1), (0, 1, 1)]),
            None
        );
        assert_eq!(min_weight_perfect_matching(3, 2, &[]), None);
    }

    #[test]
    fn matches_permutation_enumeration() {
        let perms = permutations(6);
        for seed in 0..30 {
            let mut rng = rng_from_seed(seed);
            let mut w = [[None; 6]; 6];
            let mut edges = Vec::new();
            for (l, row) in w.iter_mut().enumerate() {
                for (r, cell) in row.iter_mut().enumerate() {
                    if rng.gen_bool(0.6) {
                        let x = rng.gen_range(0..50u64);
                        *cell = Some(x);
                        edges.push((l, r, x));
                    }
                }
            }
            let best = perms
                .iter()
                .filter_map(|p| (0..6).map(|l| w[l][p[l]]).sum::<Option<u64>>())
                .min();
            let got = min_weight_perfect_matching(6, 6, &edges);
            assert_eq!(got.as_ref().map(|m| m.weight), best, "seed {seed}");
            if let Some(m) = got {
                let sum: u64 = (0..6).map(|l| w[l][m.mate[l]].unwrap()).sum();
                assert_eq!(sum, m.weight);
            }
        }
    }

    #[test]
    fn complete_case_examples() {
        let g = Graph::from_edges(2, [(0, 1)]).unwrap();
        let inst = Instance::new(g, vec![vec![0, 1], vec![0]], vec![1, 5]).unwrap();
        let c = solve_complete_case(&inst).unwrap().unwrap();
        assert_eq!(c.assignment, vec![1, 0]);
        assert_eq!(c.weight, 6);

        let k3 = Graph::from_edges(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        let inst = Instance::new(k3, vec![vec![0, 1]; 3], vec![1, 1]).unwrap();
        assert_eq!(solve_complete_case(&inst).unwrap(), None);

        let single = Instance::new(Graph::empty(1), vec![vec![0]], vec![4]).unwrap();
        assert_eq!(solve_complete_case(&single).unwrap().unwrap().weight, 4);

        let path = Instance::new(Graph::empty(2), vec![vec![0], vec![0]], vec![1]).unwrap();
        assert!(matches!(
            solve_complete_case(&path),
            Err(ReductionError::NotCompleteCase { .. })
        ));
    }

    #[test]
    fn complete_case_against_oracle() {
        for seed in 0..60 {
            let inst = random_complete_case(seed, 8);
            let oracle = brute_force(&inst, DEFAULT_MAX_ASSIGNMENTS).unwrap().value();
            assert_eq!(
                solve_complete_case(&inst).unwrap().map(|c| c.weight),
                oracle,
                "seed {seed}"
            );
        }
    }

    #[test]
    fn set_cover_examples() {
        let inst = setcover_to_wlcp(3, &[vec![0, 1], vec![1, 2], vec![0, 2]], &[1, 1, 1]).unwrap();
        assert_eq!(
            brute_force(&inst, DEFAULT_MAX_ASSIGNMENTS).unwrap().value(),
            Some(2)
        );
        let inst = setcover_to_wlcp(3, &[vec![0, 1, 2], vec![0]], &[7, 1]).unwrap();
        assert_eq!(
            brute_force(&inst, DEFAULT_MAX_ASSIGNMENTS).unwrap().value(),
            Some(7)
        );
        assert_eq!(
            setcover_to_wlcp(2, &[vec![0]], &[1]),
            Err(ReductionError::UncoveredElement(1))
        );
    }
}
