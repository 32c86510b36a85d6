//! Random small instances for property tests. Not part of the solver.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::io::rng_from_seed;
use crate::model::{Color, Graph, Instance};

/// A random instance with `1..=max_n` vertices and at most `max_colors`
/// colors; weights in `0..=3`.
pub fn random_instance(seed: u64, max_n: usize, max_colors: usize) -> Instance {
    let mut rng = rng_from_seed(seed);
    let n = rng.gen_range(1..=max_n);
    let c = rng.gen_range(1..=max_colors);
    let p = [0.3, 0.5, 0.7][rng.gen_range(0..3)];
    random_instance_with(&mut rng, n, c, p, 0..=3)
}

pub fn random_instance_with<R: Rng>(
    rng: &mut R,
    n: usize,
    colors: usize,
    p: f64,
    weights: std::ops::RangeInclusive<u64>,
) -> Instance {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    let g = Graph::from_edges(n, edges).unwrap();
    let palette: Vec<Color> = (0..colors).collect();
    let lists = (0..n)
        .map(|_| {
            let len = rng.gen_range(1..=colors);
            let mut l: Vec<Color> = palette.choose_multiple(rng, len).copied().collect();
            l.sort_unstable();
            l
        })
        .collect();
    let w = (0..colors)
        .map(|_| rng.gen_range(weights.clone()))
        .collect();
    Instance::new(g, lists, w).unwrap()
}

/// A random instance in which every color graph is complete: vertices are
/// dealt into groups, each group is a clique, and a color may only be listed
/// by vertices of one group.
pub fn random_complete_case(seed: u64, max_n: usize) -> Instance {
    let mut rng = rng_from_seed(seed);
    let n = rng.gen_range(1..=max_n);
    let groups = rng.gen_range(1..=n.min(3));
    let group_of: Vec<usize> = (0..n).map(|_| rng.gen_range(0..groups)).collect();
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if group_of[u] == group_of[v] || rng.gen::<f64>() < 0.3 {
                edges.push((u, v));
            }
        }
    }
    let g = Graph::from_edges(n, edges).unwrap();
    // colors 3g, 3g+1, 3g+2 belong to group g
    let lists = (0..n)
        .map(|v| {
            let base = 3 * group_of[v];
            let mut l: Vec<Color> = (base..base + 3).filter(|_| rng.gen_bool(0.6)).collect();
            if l.is_empty() {
                l.push(base + rng.gen_range(0..3));
            }
            l
        })
        .collect();
    let w = (0..3 * groups).map(|_| rng.gen_range(0..=4)).collect();
    Instance::new(g, lists, w).unwrap()
}
