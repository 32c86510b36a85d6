//! Pricing: one maximum weight stable set problem per color class.

use thiserror::Error;

use crate::bitset::BitSet;
use crate::master::{Column, LpSolution, EPS_FEAS};
use crate::model::{CanonicalInstance, Graph, Vertex};

pub const DEFAULT_BETA: f64 = 1.1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("stable set search exceeded {budget} nodes")]
pub struct BudgetExceeded {
    pub budget: u64,
    /// Class index, when raised from class pricing.
    pub class: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StableSet {
    /// Sorted vertex ids.
    pub vertices: Vec<Vertex>,
    pub weight: f64,
    /// The search stopped at the first set heavier than the threshold.
    pub early_exit: bool,
    pub nodes: u64,
}

/// Maximum weight stable set of `g`, stopping as soon as a set of weight
/// strictly above `threshold` is found. Pass `f64::INFINITY` for a proven
/// optimum. Vertices of nonpositive weight never improve a set and are left
/// out of the search.
pub fn mwss(
    g: &Graph,
    weights: &[f64],
    threshold: f64,
    budget: Option<u64>,
) -> Result<StableSet, BudgetExceeded> {
    assert_eq!(weights.len(), g.n());
    let mut order: Vec<Vertex> = (0..g.n()).filter(|&v| weights[v] > 0.0).collect();
    order.sort_by(|&a, &b| weights[b].total_cmp(&weights[a]).then(a.cmp(&b)));
    let n = order.len();
    let mut rank = vec![usize::MAX; g.n()];
    for (i, &v) in order.iter().enumerate() {
        rank[v] = i;
    }
    let adj: Vec<BitSet> = order
        .iter()
        .map(|&v| {
            let mut s = BitSet::new(n);
            for &u in g.neighbors(v) {
                if rank[u] != usize::MAX {
                    s.insert(rank[u]);
                }
            }
            s
        })
        .collect();
    let w: Vec<f64> = order.iter().map(|&v| weights[v]).collect();

    let mut search = Search {
        adj: &adj,
        w: &w,
        threshold,
        budget,
        nodes: 0,
        best: Vec::new(),
        best_weight: 0.0,
        current: Vec::new(),
    };
    // Greedy start in weight order.
    let mut avail = BitSet::full(n);
    while let Some(i) = avail.first() {
        search.best.push(i);
        search.best_weight += w[i];
        avail.remove(i);
        avail = avail.and_not(&adj[i]);
    }
    let mut early_exit = search.best_weight > threshold;
    if !early_exit {
        early_exit = search.expand(BitSet::full(n), 0.0)?;
    }
    let mut vertices: Vec<Vertex> = search.best.iter().map(|&i| order[i]).collect();
    vertices.sort_unstable();
    Ok(StableSet {
        vertices,
        weight: search.best_weight,
        early_exit,
        nodes: search.nodes,
    })
}

struct Search<'a> {
    adj: &'a [BitSet],
    w: &'a [f64],
    threshold: f64,
    budget: Option<u64>,
    nodes: u64,
    best: Vec<usize>,
    best_weight: f64,
    current: Vec<usize>,
}

impl Search<'_> {
    /// Greedy clique cover of `cand` in weight order. Returns the candidates
    /// in cover order with, for every prefix, the sum of the clique maxima
    /// (an upper bound on any stable set inside that prefix, never above the
    /// plain weight sum).
    fn cover(&self, cand: &BitSet) -> (Vec<usize>, Vec<f64>) {
        let mut cliques: Vec<BitSet> = Vec::new();
        let mut members: Vec<Vec<usize>> = Vec::new();
        for v in cand.iter() {
            match cliques.iter().position(|common| common.contains(v)) {
                Some(c) => {
                    cliques[c] = cliques[c].and(&self.adj[v]);
                    members[c].push(v);
                }
                None => {
                    cliques.push(self.adj[v].clone());
                    members.push(vec![v]);
                }
            }
        }
        // Heads first so that every prefix bound counts each clique once.
        let mut seq = Vec::with_capacity(cand.len());
        let mut bound = Vec::with_capacity(cand.len());
        let mut acc = 0.0;
        for m in &members {
            acc += self.w[m[0]];
            for &v in m {
                seq.push(v);
                bound.push(acc);
            }
        }
        (seq, bound)
    }

    /// Returns `true` on early exit.
    fn expand(&mut self, cand: BitSet, cur: f64) -> Result<bool, BudgetExceeded> {
        self.nodes += 1;
        if let Some(b) = self.budget {
            if self.nodes > b {
                return Err(BudgetExceeded {
                    budget: b,
                    class: None,
                });
            }
        }
        let (seq, bound) = self.cover(&cand);
        let mut cand = cand;
        for i in (0..seq.len()).rev() {
            if cur + bound[i] <= self.best_weight {
                return Ok(false);
            }
            let v = seq[i];
            cand.remove(v);
            let next = cand.and_not(&self.adj[v]);
            let nw = cur + self.w[v];
            self.current.push(v);
            if nw > self.best_weight {
                self.best_weight = nw;
                self.best = self.current.clone();
                if nw > self.threshold {
                    self.current.pop();
                    return Ok(true);
                }
            }
            if !next.is_empty() && self.expand(next, nw)? {
                self.current.pop();
                return Ok(true);
            }
            self.current.pop();
        }
        Ok(false)
    }
}

/// Grows a stable set of `g` to a maximal one, adding vertices by
/// descending weight, then ascending id.
pub fn expand_maximal(g: &Graph, weights: &[f64], set: &[Vertex]) -> Vec<Vertex> {
    let mut inside = vec![false; g.n()];
    let mut blocked = vec![false; g.n()];
    for &v in set {
        inside[v] = true;
        for &u in g.neighbors(v) {
            blocked[u] = true;
        }
    }
    let mut order: Vec<Vertex> = (0..g.n()).collect();
    order.sort_by(|&a, &b| weights[b].total_cmp(&weights[a]).then(a.cmp(&b)));
    for v in order {
        if !inside[v] && !blocked[v] {
            inside[v] = true;
            for &u in g.neighbors(v) {
                blocked[u] = true;
            }
        }
    }
    (0..g.n()).filter(|&v| inside[v]).collect()
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct PricingRound {
    /// At most one column per class, in class order.
    pub columns: Vec<Column>,
    pub classes_skipped: usize,
    pub classes_rescanned: usize,
    pub nodes: u64,
}

/// Searches every class for a column of negative reduced cost.
///
/// A class is skipped when even all of `V_k` cannot beat `w_k + γ_k`.
/// Otherwise its stable set search stops at weight `β(w_k + γ_k)`, and an
/// improving set is grown to a maximal one before becoming a column. When a
/// node `budget` cuts some classes short and nothing else is found, those
/// classes are searched again without a budget.
pub fn price_all(
    canon: &CanonicalInstance,
    sol: &LpSolution,
    beta: f64,
    budget: Option<u64>,
) -> PricingRound {
    let mut round = PricingRound::default();
    let mut aborted = Vec::new();
    for k in 0..canon.num_classes() {
        match price_class(canon, sol, k, beta, budget) {
            Ok(ClassPrice::Skipped) => round.classes_skipped += 1,
            Ok(ClassPrice::None(nodes)) => round.nodes += nodes,
            Ok(ClassPrice::Column(col, nodes)) => {
                round.nodes += nodes;
                round.columns.push(col);
            }
            Err(e) => {
                round.nodes += e.budget;
                aborted.push(k);
            }
        }
    }
    if round.columns.is_empty() {
        for k in aborted {
            round.classes_rescanned += 1;
            match price_class(canon, sol, k, beta, None).expect("no budget") {
                ClassPrice::Column(col, nodes) => {
                    round.nodes += nodes;
                    round.columns.push(col);
                }
                ClassPrice::None(nodes) => round.nodes += nodes,
                ClassPrice::Skipped => unreachable!("skip test precedes the budgeted search"),
            }
        }
    }
    round
}

#[derive(Debug, Clone, PartialEq)]
pub enum ClassPrice {
    Skipped,
    None(u64),
    Column(Column, u64),
}

/// Prices a single class. The returned column, if any, has reduced cost
/// below `−EPS_FEAS`.
pub fn price_class(
    canon: &CanonicalInstance,
    sol: &LpSolution,
    class: usize,
    beta: f64,
    budget: Option<u64>,
) -> Result<ClassPrice, BudgetExceeded> {
    let vs = canon.vertex_set(class);
    let target = canon.class_weight(class) as f64 + sol.gamma[class];
    let pi: Vec<f64> = vs.iter().map(|&v| sol.pi[v]).collect();
    if pi.iter().filter(|&&p| p > 0.0).sum::<f64>() <= target + EPS_FEAS {
        return Ok(ClassPrice::Skipped);
    }
    let g = canon.color_graph(class);
    let found = mwss(&g, &pi, beta * target, budget).map_err(|e| BudgetExceeded {
        class: Some(class),
        ..e
    })?;
    if found.weight <= target + EPS_FEAS {
        return Ok(ClassPrice::None(found.nodes));
    }
    let local = expand_maximal(&g, &pi, &found.vertices);
    let set = local.into_iter().map(|i| vs[i]).collect();
    Ok(ClassPrice::Column(
        Column::new(set, canon.representative(class)),
        found.nodes,
    ))
}
