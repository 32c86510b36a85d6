//! Random instance families.
//!
//! All generators draw from xoshiro256++ seeded with `seed_from_u64(seed)`
//! (SplitMix64 state expansion, as implemented by `rand_xoshiro`). Draw
//! order is part of the contract: edges first, pairs `(u, v)` with `u < v`
//! in lexicographic order; then color-vertex memberships by `(k, v)`; then
//! any repair or multiplicity draws.

use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use serde::{Deserialize, Serialize};

use super::{clique::max_clique, gcp_instance};
use crate::model::{Color, Graph, Instance, Vertex};

pub fn rng_from_seed(seed: u64) -> Xoshiro256PlusPlus {
    Xoshiro256PlusPlus::seed_from_u64(seed)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenParamsSet1 {
    pub n: usize,
    pub p: f64,
    pub num_classes: usize,
    pub mult: usize,
    /// One weight per class, or a single weight applied to every class.
    pub weights: Vec<u64>,
    pub q: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenParamsSet2 {
    pub n: usize,
    pub p: f64,
    pub num_classes: usize,
    pub t: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenParamsSet3 {
    pub n: usize,
    pub p: f64,
    pub seed: u64,
}

fn random_graph<R: Rng>(rng: &mut R, n: usize, p: f64) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges).expect("lexicographic pairs are simple")
}

/// Emits each class `k` with vertex set `sets[k]` as `mult[k]` identical
/// colors of weight `weights[k]`.
fn expand_classes(graph: Graph, sets: &[Vec<Vertex>], mult: &[usize], weights: &[u64]) -> Instance {
    let n = graph.n();
    let mut lists: Vec<Vec<Color>> = vec![Vec::new(); n];
    let mut color_weights = Vec::new();
    for (k, set) in sets.iter().enumerate() {
        for _ in 0..mult[k] {
            let c = color_weights.len();
            color_weights.push(weights[k]);
            for &v in set {
                lists[v].push(c);
            }
        }
    }
    Instance::new(graph, lists, color_weights).expect("generator keeps lists non-empty")
}

fn check_probability(x: f64, what: &str) {
    assert!(x > 0.0 && x < 1.0, "{what} must lie in (0, 1), got {x}");
}

/// Uniform vertex-color sets. Returns the instance and the vertices that
/// landed in no `V_k` and were given one uniformly chosen class.
pub fn gen_set1_with_report(params: &GenParamsSet1) -> (Instance, Vec<Vertex>) {
    check_probability(params.p, "p");
    check_probability(params.q, "q");
    assert!(params.n >= 1 && params.num_classes >= 1 && params.mult >= 1);
    let weights: Vec<u64> = match params.weights.len() {
        1 => vec![params.weights[0]; params.num_classes],
        len if len == params.num_classes => params.weights.clone(),
        len => panic!("expected 1 or {} weights, got {len}", params.num_classes),
    };

    let mut rng = rng_from_seed(params.seed);
    let graph = random_graph(&mut rng, params.n, params.p);
    let mut sets = vec![Vec::new(); params.num_classes];
    let mut covered = vec![false; params.n];
    for set in sets.iter_mut() {
        for v in 0..params.n {
            if rng.gen::<f64>() < params.q {
                set.push(v);
                covered[v] = true;
            }
        }
    }
    let mut repaired = Vec::new();
    for v in 0..params.n {
        if !covered[v] {
            let k = rng.gen_range(0..params.num_classes);
            let pos = sets[k].binary_search(&v).unwrap_err();
            sets[k].insert(pos, v);
            repaired.push(v);
        }
    }
    let mult = vec![params.mult; params.num_classes];
    (expand_classes(graph, &sets, &mult, &weights), repaired)
}

pub fn gen_set1(params: &GenParamsSet1) -> Instance {
    gen_set1_with_report(params).0
}

/// Nested vertex-color sets `V_1 = V ⊇ V_2 ⊇ …` for μ-coloring style
/// instances. `m(1) = ω(G)`, later multiplicities uniform in `1..=5`, unit
/// weights. Classes that end up empty are dropped.
pub fn gen_set2(params: &GenParamsSet2) -> Instance {
    check_probability(params.p, "p");
    check_probability(params.t, "t");
    assert!(params.n >= 1 && params.num_classes >= 1);

    let mut rng = rng_from_seed(params.seed);
    let graph = random_graph(&mut rng, params.n, params.p);
    let mut sets: Vec<Vec<Vertex>> = vec![(0..params.n).collect()];
    for _ in 1..params.num_classes {
        let prev = sets.last().unwrap();
        let next: Vec<Vertex> = prev
            .iter()
            .copied()
            .filter(|_| rng.gen::<f64>() < 1.0 - params.t)
            .collect();
        if next.is_empty() {
            break;
        }
        sets.push(next);
    }
    let mut mult = vec![max_clique(&graph).len()];
    for _ in 1..sets.len() {
        mult.push(rng.gen_range(1..=5));
    }
    let weights = vec![1; sets.len()];
    expand_classes(graph, &sets, &mult, &weights)
}

/// Random graph coloring instance `G(n, p)` encoded with `Δ(G)+1` unit
/// weight colors.
pub fn gen_set3(params: &GenParamsSet3) -> Instance {
    check_probability(params.p, "p");
    let mut rng = rng_from_seed(params.seed);
    let graph = random_graph(&mut rng, params.n, params.p);
    gcp_instance(graph, 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::canonicalize;

    fn set1(n: usize, p: f64, k: usize, mult: usize, q: f64, seed: u64) -> GenParamsSet1 {
        GenParamsSet1 {
            n,
            p,
            num_classes: k,
            mult,
            weights: vec![1],
            q,
            seed,
        }
    }

    #[test]
    fn set1_statistics_match_q() {
        let mut total_vk = 0.0;
        let mut total_kv = 0.0;
        let seeds = 30;
        for seed in 0..seeds {
            let inst = gen_set1(&set1(60, 0.25, 60, 1, 0.25, seed));
            let sets = inst.color_vertex_sets();
            total_vk += sets.iter().map(Vec::len).sum::<usize>() as f64 / 60.0;
            total_kv += inst.lists().iter().map(Vec::len).sum::<usize>() as f64 / 60.0;
        }
        let mean_vk = total_vk / seeds as f64;
        let mean_kv = total_kv / seeds as f64;
        assert!((mean_vk - 15.0).abs() <= 3.0, "mean |V_k| = {mean_vk}");
        assert!((mean_kv - 15.0).abs() <= 3.0, "mean k(v) = {mean_kv}");
    }

    #[test]
    fn set1_is_deterministic_and_repaired() {
        let p = set1(10, 0.5, 5, 2, 0.5, 99);
        assert_eq!(gen_set1(&p), gen_set1(&p));
        for seed in 0..50 {
            let (inst, _) = gen_set1_with_report(&set1(10, 0.5, 5, 1, 0.5, seed));
            assert!(inst.lists().iter().all(|l| !l.is_empty()));
        }
        // q small enough that repairs happen
        let (inst, repaired) = gen_set1_with_report(&set1(30, 0.3, 3, 1, 0.05, 4));
        assert!(!repaired.is_empty());
        for v in repaired {
            assert_eq!(inst.list(v).len(), 1);
        }
    }

    #[test]
    fn set1_multiplicity_is_recovered() {
        let inst = gen_set1(&set1(12, 0.3, 4, 3, 0.6, 5));
        let canon = canonicalize(inst);
        for k in 0..canon.num_classes() {
            assert_eq!(canon.multiplicity(k) % 3, 0);
        }
    }

    #[test]
    fn set2_sets_are_nested() {
        for seed in 0..10 {
            let inst = gen_set2(&GenParamsSet2 {
                n: 20,
                p: 0.5,
                num_classes: 10,
                t: 0.2,
                seed,
            });
            let sets: Vec<Vec<Vertex>> = inst
                .color_vertex_sets()
                .into_iter()
                .filter(|s| !s.is_empty())
                .collect();
            assert_eq!(sets[0].len(), 20);
            for w in sets.windows(2) {
                assert!(w[1].iter().all(|v| w[0].contains(v)), "not nested");
                assert!(w[1].len() <= w[0].len());
            }
            let omega = max_clique(inst.graph()).len();
            assert!(sets.iter().filter(|s| s.len() == 20).count() >= omega);
        }
        let p = GenParamsSet2 {
            n: 20,
            p: 0.5,
            num_classes: 10,
            t: 0.2,
            seed: 3,
        };
        assert_eq!(gen_set2(&p), gen_set2(&p));
    }

    #[test]
    fn set2_extreme_t_keeps_few_classes() {
        let inst = gen_set2(&GenParamsSet2 {
            n: 20,
            p: 0.5,
            num_classes: 10,
            t: 0.99,
            seed: 1,
        });
        let canon = canonicalize(inst);
        assert!(canon.num_classes() <= 2, "{} classes", canon.num_classes());
    }

    #[test]
    fn set3_is_gcp() {
        let p = GenParamsSet3 {
            n: 10,
            p: 0.5,
            seed: 8,
        };
        let inst = gen_set3(&p);
        assert_eq!(inst, gen_set3(&p));
        let delta = inst.graph().max_degree();
        assert_eq!(inst.colors().len(), delta + 1);
        let canon = canonicalize(inst);
        assert_eq!(canon.num_classes(), 1);
        assert_eq!(canon.multiplicity(0), delta + 1);
    }
}
