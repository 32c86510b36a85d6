use crate::bitset::BitSet;
use crate::model::{Graph, Vertex};

/// Exact maximum clique by branch and bound with a greedy coloring bound.
/// Intended for generator-scale graphs.
pub fn max_clique(g: &Graph) -> Vec<Vertex> {
    let n = g.n();
    let adj: Vec<BitSet> = (0..n)
        .map(|v| {
            let mut s = BitSet::new(n);
            for &u in g.neighbors(v) {
                s.insert(u);
            }
            s
        })
        .collect();
    let mut best = Vec::new();
    let mut current = Vec::new();
    expand(&adj, BitSet::full(n), &mut current, &mut best);
    best.sort_unstable();
    best
}

/// Greedy sequential coloring of `cand`; returns vertices in color order
/// with the color number of each.
fn color_sort(adj: &[BitSet], cand: &BitSet) -> Vec<(Vertex, usize)> {
    let mut out = Vec::with_capacity(cand.len());
    let mut uncolored = cand.clone();
    let mut color = 0;
    while !uncolored.is_empty() {
        color += 1;
        let mut avail = uncolored.clone();
        while let Some(v) = avail.first() {
            avail.remove(v);
            avail = avail.and_not(&adj[v]);
            uncolored.remove(v);
            out.push((v, color));
        }
    }
    out
}

fn expand(adj: &[BitSet], mut cand: BitSet, current: &mut Vec<Vertex>, best: &mut Vec<Vertex>) {
    let order = color_sort(adj, &cand);
    for &(v, color) in order.iter().rev() {
        if current.len() + color <= best.len() {
            return;
        }
        current.push(v);
        let next = cand.and(&adj[v]);
        if next.is_empty() {
            if current.len() > best.len() {
                *best = current.clone();
            }
        } else {
            expand(adj, next, current, best);
        }
        current.pop();
        cand.remove(v);
    }
}
