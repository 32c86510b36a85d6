//! Depth-first branch and price over WLCP subproblems.
//!
//! Every node is itself a WLCP instance. Edge branching either collapses two
//! vertices (same color) or joins them by an edge (different colors); color
//! branching either restricts a vertex to one class or removes that class
//! from its list. Colors keep their original ids throughout the tree, so a
//! node coloring lifts to the input by expanding collapsed vertices and
//! adding the colors fixed by per-node preprocessing.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use log::debug;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::colgen::{solve_relaxation, ColgenConfig, ColgenError, RelaxStatus};
use crate::master::{Column, DEFAULT_BIG_M, EPS_FEAS, EPS_INT};
use crate::model::{
    canonicalize, verify_coloring, CanonicalInstance, Color, Graph, Instance, ListColoring, Vertex,
};
use crate::preprocess::{reduce, Reduction};
use crate::pricing::DEFAULT_BETA;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BranchKind {
    Edge,
    Color,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SelectRule {
    Std,
    /// Edge branching only.
    Alt,
    /// Color branching only.
    Alt1,
    /// Color branching only.
    Alt2,
}

impl SelectRule {
    pub fn valid_for(self, kind: BranchKind) -> bool {
        matches!(
            (kind, self),
            (_, SelectRule::Std)
                | (BranchKind::Edge, SelectRule::Alt)
                | (BranchKind::Color, SelectRule::Alt1 | SelectRule::Alt2)
        )
    }
}

/// The five strategies, as `(kind, rule)`.
pub const STRATEGIES: [(BranchKind, SelectRule); 5] = [
    (BranchKind::Edge, SelectRule::Std),
    (BranchKind::Edge, SelectRule::Alt),
    (BranchKind::Color, SelectRule::Std),
    (BranchKind::Color, SelectRule::Alt1),
    (BranchKind::Color, SelectRule::Alt2),
];

pub fn strategy_name(kind: BranchKind, rule: SelectRule) -> String {
    let k = match kind {
        BranchKind::Edge => "Edg",
        BranchKind::Color => "Clr",
    };
    let r = match rule {
        SelectRule::Std => "Std",
        SelectRule::Alt => "Alt",
        SelectRule::Alt1 => "Alt1",
        SelectRule::Alt2 => "Alt2",
    };
    format!("{k}-{r}")
}

impl FromStr for BranchKind {
    type Err = BranchError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "edge" => Ok(BranchKind::Edge),
            "color" => Ok(BranchKind::Color),
            _ => Err(BranchError::InvalidConfig(format!(
                "unknown branch kind {s:?}"
            ))),
        }
    }
}

impl FromStr for SelectRule {
    type Err = BranchError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "std" => Ok(SelectRule::Std),
            "alt" => Ok(SelectRule::Alt),
            "alt1" => Ok(SelectRule::Alt1),
            "alt2" => Ok(SelectRule::Alt2),
            _ => Err(BranchError::InvalidConfig(format!(
                "unknown selection rule {s:?}"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub branch_kind: BranchKind,
    pub select_rule: SelectRule,
    pub time_limit: Option<Duration>,
    pub big_m: f64,
    pub beta: f64,
    /// Reserved for randomized components; the search itself is deterministic.
    pub seed: u64,
    /// Per-node preprocessing. Color branching always preprocesses, since
    /// its selection rules assume `k(v) ≥ 2` everywhere.
    pub preprocess: bool,
    pub pricing_budget: Option<u64>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            branch_kind: BranchKind::Color,
            select_rule: SelectRule::Alt2,
            time_limit: None,
            big_m: DEFAULT_BIG_M,
            beta: DEFAULT_BETA,
            seed: 0,
            preprocess: true,
            pricing_budget: None,
        }
    }
}

impl SolverConfig {
    pub fn new(branch_kind: BranchKind, select_rule: SelectRule) -> Result<Self, BranchError> {
        let cfg = SolverConfig {
            branch_kind,
            select_rule,
            ..Default::default()
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), BranchError> {
        if !self.select_rule.valid_for(self.branch_kind) {
            return Err(BranchError::InvalidConfig(format!(
                "rule {:?} does not apply to {:?} branching",
                self.select_rule, self.branch_kind
            )));
        }
        if self.big_m.is_nan() || self.big_m <= 0.0 || self.beta.is_nan() || self.beta < 1.0 {
            return Err(BranchError::InvalidConfig(
                "big M must be positive and beta at least 1".into(),
            ));
        }
        Ok(())
    }

    pub fn preprocessing(&self) -> bool {
        self.preprocess || self.branch_kind == BranchKind::Color
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BranchError {
    #[error("no branching candidate: the solution is integral")]
    NoCandidate,
    #[error("invalid branching pair: {0}")]
    InvalidPair(String),
    #[error("class {class} selected {selected} times but has multiplicity {multiplicity}")]
    MultiplicityViolation {
        class: usize,
        selected: usize,
        multiplicity: usize,
    },
    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),
    #[error("numeric failure: {0}")]
    NumericFailure(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl From<ColgenError> for BranchError {
    fn from(e: ColgenError) -> Self {
        BranchError::NumericFailure(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Optimal,
    Infeasible,
    TimeLimit,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Optimal => "optimal",
            Status::Infeasible => "infeasible",
            Status::TimeLimit => "timelimit",
        })
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct SearchStats {
    pub nodes: usize,
    pub lp_solves: usize,
    pub columns: usize,
    pub max_depth: usize,
    pub pruned: usize,
    pub root_bound: Option<f64>,
    /// Fractional nodes without a fractional column of size at least two.
    pub pairless_nodes: usize,
    pub time_s: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub status: Status,
    pub best: Option<ListColoring>,
    /// Lower bound on the optimum; the optimum itself when proven,
    /// infinite when infeasible.
    pub bound: f64,
    pub stats: SearchStats,
}

impl Outcome {
    pub fn value(&self) -> Option<u64> {
        match self.status {
            Status::Optimal => self.best.as_ref().map(|c| c.weight),
            _ => None,
        }
    }
}

/// A pooled column carried to a child, in the child's vertex ids and with
/// the concrete colors of its class, to be matched against the child's
/// classes once the child has been preprocessed.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct Seed {
    set: Vec<Vertex>,
    colors: Vec<Color>,
}

#[derive(Debug, Clone)]
pub struct SearchNode {
    pub instance: CanonicalInstance,
    pub depth: usize,
    /// Input vertices each node vertex stands for.
    origin: Vec<Vec<Vertex>>,
    /// `(input vertex, color)` fixed by preprocessing above this node.
    fixed: Vec<(Vertex, Color)>,
    pub weight_offset: u64,
    seeds: Vec<Seed>,
    parent_bound: f64,
}

fn is_fractional(x: f64) -> bool {
    x > EPS_INT && x < 1.0 - EPS_INT
}

fn class_of_column(canon: &CanonicalInstance, col: &Column) -> usize {
    canon
        .class_of_representative(col.class_rep.expect("non-dummy column"))
        .expect("column belongs to this instance")
}

/// Fractional columns ordered most fractional first; ties by class id, then
/// lexicographically by stable set.
fn fractional_order<'c>(
    canon: &CanonicalInstance,
    columns: &'c [Column],
    primal: &[f64],
) -> Vec<(&'c Column, f64)> {
    let mut out: Vec<(&Column, f64)> = columns
        .iter()
        .zip(primal)
        .filter(|(c, &x)| !c.is_dummy() && is_fractional(x))
        .map(|(c, &x)| (c, x))
        .collect();
    out.sort_by(|(a, xa), (b, xb)| {
        (xa - 0.5)
            .abs()
            .total_cmp(&(xb - 0.5).abs())
            .then(class_of_column(canon, a).cmp(&class_of_column(canon, b)))
            .then(a.stable_set.cmp(&b.stable_set))
    });
    out
}

/// Whether some fractional column covers at least two vertices.
pub fn has_fractional_pair_column(columns: &[Column], primal: &[f64]) -> bool {
    columns
        .iter()
        .zip(primal)
        .any(|(c, &x)| !c.is_dummy() && c.stable_set.len() >= 2 && is_fractional(x))
}

pub fn select_branch_edge(
    canon: &CanonicalInstance,
    columns: &[Column],
    primal: &[f64],
    rule: SelectRule,
) -> Result<(Vertex, Vertex), BranchError> {
    let frac = fractional_order(canon, columns, primal);
    match rule {
        SelectRule::Std => {
            let &(s, _) = frac
                .iter()
                .find(|(c, _)| c.stable_set.len() >= 2)
                .ok_or(BranchError::NoCandidate)?;
            let u = s.stable_set[0];
            let others: Vec<&Column> = columns
                .iter()
                .zip(primal)
                .filter(|(c, &x)| {
                    x > EPS_INT
                        && !c.is_dummy()
                        && *c != s
                        && c.stable_set.binary_search(&u).is_ok()
                })
                .map(|(c, _)| c)
                .collect();
            let hat = others.iter().find(|c| c.stable_set != s.stable_set);
            let v = match hat {
                Some(h) => symmetric_difference(&s.stable_set, &h.stable_set)[0],
                None => s.stable_set[1],
            };
            Ok((u.min(v), u.max(v)))
        }
        SelectRule::Alt => {
            let mut best: Option<(usize, Vertex, Vertex)> = None;
            for (c, _) in &frac {
                let s = &c.stable_set;
                for (i, &u) in s.iter().enumerate() {
                    for &v in &s[i + 1..] {
                        let score = canon.k_count(u) + canon.k_count(v);
                        let better = match best {
                            None => true,
                            Some((b, bu, bv)) => score > b || (score == b && (u, v) < (bu, bv)),
                        };
                        if better {
                            best = Some((score, u, v));
                        }
                    }
                }
            }
            best.map(|(_, u, v)| (u, v)).ok_or(BranchError::NoCandidate)
        }
        _ => Err(BranchError::InvalidConfig(format!(
            "{rule:?} is not an edge rule"
        ))),
    }
}

fn symmetric_difference(a: &[Vertex], b: &[Vertex]) -> Vec<Vertex> {
    let sa: BTreeSet<_> = a.iter().collect();
    let sb: BTreeSet<_> = b.iter().collect();
    sa.symmetric_difference(&sb).map(|&&v| v).collect()
}

/// Returns `(v, class index)`.
pub fn select_branch_color(
    canon: &CanonicalInstance,
    columns: &[Column],
    primal: &[f64],
    rule: SelectRule,
) -> Result<(Vertex, usize), BranchError> {
    let frac = fractional_order(canon, columns, primal);
    match rule {
        SelectRule::Std => frac
            .iter()
            .find_map(|(c, _)| {
                let k = class_of_column(canon, c);
                c.stable_set
                    .iter()
                    .find(|&&v| canon.k_count(v) >= 2)
                    .map(|&v| (v, k))
            })
            .ok_or(BranchError::NoCandidate),
        SelectRule::Alt1 | SelectRule::Alt2 => {
            let mut cands: BTreeSet<(Vertex, usize)> = BTreeSet::new();
            for (c, _) in &frac {
                let k = class_of_column(canon, c);
                for &v in &c.stable_set {
                    if canon.k_count(v) >= 2 {
                        cands.insert((v, k));
                    }
                }
            }
            // Smaller key wins; (v, k) order breaks remaining ties.
            let key = |&(v, k): &(Vertex, usize)| {
                let deg = -(canon.class_degree(k, v) as i64);
                let kv = canon.k_count(v) as i64;
                let m = canon.multiplicity(k);
                if rule == SelectRule::Alt1 {
                    (deg, kv, m)
                } else {
                    (kv, deg, m)
                }
            };
            cands
                .into_iter()
                .min_by_key(|c| (key(c), *c))
                .ok_or(BranchError::NoCandidate)
        }
        SelectRule::Alt => Err(BranchError::InvalidConfig("Alt is not a color rule".into())),
    }
}

/// Vertex map of the collapse of `u` and `v`: the merged vertex takes the
/// place of the smaller one and later ids shift down by one.
pub fn collapse_map(n: usize, u: Vertex, v: Vertex) -> Vec<Vertex> {
    let (a, b) = (u.min(v), u.max(v));
    (0..n)
        .map(|x| match x {
            x if x == b => a,
            x if x > b => x - 1,
            x => x,
        })
        .collect()
}

fn check_pair(inst: &Instance, u: Vertex, v: Vertex) -> Result<(), BranchError> {
    if u == v || u >= inst.n() || v >= inst.n() {
        return Err(BranchError::InvalidPair(format!(
            "({u}, {v}) are not two distinct vertices"
        )));
    }
    if inst.graph().has_edge(u, v) {
        return Err(BranchError::InvalidPair(format!(
            "{u} and {v} are adjacent"
        )));
    }
    if !inst.lists_intersect(u, v) {
        return Err(BranchError::InvalidPair(format!(
            "lists of {u} and {v} are disjoint"
        )));
    }
    Ok(())
}

fn collapse(inst: &Instance, u: Vertex, v: Vertex) -> (Instance, Vec<Vertex>) {
    let map = collapse_map(inst.n(), u, v);
    let graph = Graph::from_edges_dedup(
        inst.n() - 1,
        inst.graph().edges().map(|(a, b)| (map[a], map[b])),
    )
    .expect("u and v are not adjacent");
    let (a, b) = (u.min(v), u.max(v));
    let mut lists: Vec<Vec<Color>> = (0..inst.n())
        .filter(|&x| x != b)
        .map(|x| inst.list(x).to_vec())
        .collect();
    lists[a] = crate::model::sorted_intersection(inst.list(a), inst.list(b));
    (
        Instance::from_parts_unchecked(graph, lists, inst.weights().to_vec()),
        map,
    )
}

/// `(same, diff)`: `u` and `v` collapsed, and `u`, `v` joined by an edge.
/// The collapsed vertex sits at `min(u, v)`, see [`collapse_map`].
pub fn branch_edge(
    canon: &CanonicalInstance,
    u: Vertex,
    v: Vertex,
) -> Result<(CanonicalInstance, CanonicalInstance), BranchError> {
    let inst = canon.base();
    check_pair(inst, u, v)?;
    let (same, _) = collapse(inst, u, v);
    let diff = inst.with_graph(inst.graph().with_edge(u, v));
    Ok((canonicalize(same), canonicalize(diff)))
}

/// `(assign, forbid)`: `L(v) = C_k` and `L(v) \ C_k` for class index `class`.
pub fn branch_color(
    canon: &CanonicalInstance,
    v: Vertex,
    class: usize,
) -> Result<(CanonicalInstance, CanonicalInstance), BranchError> {
    if v >= canon.n() || class >= canon.num_classes() || !canon.in_class_set(class, v) {
        return Err(BranchError::InvalidPair(format!(
            "vertex {v} is not in the vertex set of class {class}"
        )));
    }
    if canon.k_count(v) < 2 {
        return Err(BranchError::InvalidPair(format!(
            "vertex {v} has a single class"
        )));
    }
    let members = canon.members(class);
    let inst = canon.base();
    let assign = inst.with_list(v, members.to_vec());
    let forbid_list: Vec<Color> = inst
        .list(v)
        .iter()
        .copied()
        .filter(|c| !members.contains(c))
        .collect();
    let forbid = inst.with_list(v, forbid_list);
    Ok((canonicalize(assign), canonicalize(forbid)))
}

/// Turns an integral LP solution into a coloring: the `i`-th selected column
/// of a class gets the `i`-th color of that class, and a vertex covered more
/// than once keeps the color of its first column (by class id, then column
/// order).
pub fn extract_coloring(
    canon: &CanonicalInstance,
    columns: &[Column],
    primal: &[f64],
) -> Result<ListColoring, BranchError> {
    let mut selected: Vec<(usize, usize)> = columns
        .iter()
        .zip(primal)
        .enumerate()
        .filter(|(_, (c, &x))| !c.is_dummy() && x > 1.0 - EPS_INT)
        .map(|(j, (c, _))| (class_of_column(canon, c), j))
        .collect();
    selected.sort_unstable();
    let mut f = vec![usize::MAX; canon.n()];
    let mut used = vec![0usize; canon.num_classes()];
    for (k, j) in selected {
        let m = canon.multiplicity(k);
        if used[k] == m {
            return Err(BranchError::MultiplicityViolation {
                class: k,
                selected: m + 1,
                multiplicity: m,
            });
        }
        let color = canon.members(k)[used[k]];
        used[k] += 1;
        for &v in &columns[j].stable_set {
            if f[v] == usize::MAX {
                f[v] = color;
            }
        }
    }
    verify_coloring(canon.base(), &f).map_err(|e| {
        BranchError::Internal(format!(
            "extracted coloring is invalid: {}",
            e.iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join("; ")
        ))
    })
}

impl SearchNode {
    fn root(inst: &Instance) -> Self {
        SearchNode {
            instance: canonicalize(inst.clone()),
            depth: 0,
            origin: (0..inst.n()).map(|v| vec![v]).collect(),
            fixed: Vec::new(),
            weight_offset: 0,
            seeds: Vec::new(),
            parent_bound: f64::NEG_INFINITY,
        }
    }

    /// Applies per-node preprocessing; `None` when it proves infeasibility.
    fn reduced(self, preprocess: bool) -> Option<SearchNode> {
        if !preprocess {
            return Some(self);
        }
        let (canon, log) = match reduce(&self.instance) {
            Reduction::Infeasible => return None,
            Reduction::Reduced(c, log) => (c, log),
        };
        let mut fixed = self.fixed;
        for (v, c) in log.fixed() {
            fixed.extend(self.origin[v].iter().map(|&o| (o, c)));
        }
        let mut new_id = vec![usize::MAX; self.instance.n()];
        for (i, &v) in log.kept.iter().enumerate() {
            new_id[v] = i;
        }
        let seeds = self
            .seeds
            .into_iter()
            .map(|s| Seed {
                set: s
                    .set
                    .iter()
                    .filter_map(|&v| Some(new_id[v]).filter(|&x| x != usize::MAX))
                    .collect(),
                colors: s.colors,
            })
            .filter(|s| !s.set.is_empty())
            .collect();
        Some(SearchNode {
            instance: canon,
            depth: self.depth,
            origin: log.kept.iter().map(|&v| self.origin[v].clone()).collect(),
            fixed,
            weight_offset: self.weight_offset + log.weight_offset,
            seeds,
            parent_bound: self.parent_bound,
        })
    }

    fn pool(&self) -> Vec<Column> {
        let canon = &self.instance;
        let mut out = BTreeSet::new();
        for s in &self.seeds {
            let classes: BTreeSet<usize> =
                s.colors.iter().filter_map(|&c| canon.class_of(c)).collect();
            for k in classes {
                let set: Vec<Vertex> = s
                    .set
                    .iter()
                    .copied()
                    .filter(|&v| canon.in_class_set(k, v))
                    .collect();
                if !set.is_empty() && canon.graph().is_stable(&set) {
                    out.insert(Column::new(set, canon.representative(k)));
                }
            }
        }
        out.into_iter().collect()
    }

    fn lift(&self, f: &[Color], original: &Instance) -> Result<ListColoring, BranchError> {
        let mut g = vec![usize::MAX; original.n()];
        for (v, &c) in f.iter().enumerate() {
            for &o in &self.origin[v] {
                g[o] = c;
            }
        }
        for &(o, c) in &self.fixed {
            g[o] = c;
        }
        verify_coloring(original, &g).map_err(|e| {
            BranchError::Internal(format!(
                "lifted coloring is invalid: {}",
                e.iter()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>()
                    .join("; ")
            ))
        })
    }

    fn child(
        &self,
        instance: CanonicalInstance,
        map: &[Vertex],
        pool: &[Column],
        bound: f64,
    ) -> SearchNode {
        let mut origin = vec![Vec::new(); instance.n()];
        for (v, &x) in map.iter().enumerate() {
            origin[x].extend(self.origin[v].iter().copied());
        }
        for o in &mut origin {
            o.sort_unstable();
        }
        let seeds = pool
            .iter()
            .map(|c| {
                let mut set: Vec<Vertex> = c.stable_set.iter().map(|&v| map[v]).collect();
                set.sort_unstable();
                set.dedup();
                Seed {
                    set,
                    colors: self
                        .instance
                        .members(class_of_column(&self.instance, c))
                        .to_vec(),
                }
            })
            .collect();
        SearchNode {
            instance,
            depth: self.depth + 1,
            origin,
            fixed: self.fixed.clone(),
            weight_offset: self.weight_offset,
            seeds,
            parent_bound: bound,
        }
    }
}

fn prunes(bound: f64, incumbent: Option<&ListColoring>) -> bool {
    incumbent.is_some_and(|inc| (bound - EPS_FEAS).ceil() >= inc.weight as f64)
}

/// Exact branch and price with depth-first search.
pub fn bp_solve(inst: &Instance, cfg: &SolverConfig) -> Result<Outcome, BranchError> {
    cfg.validate()?;
    let start = Instant::now();
    let deadline = cfg.time_limit.map(|t| start + t);
    let colgen_cfg = ColgenConfig {
        big_m: cfg.big_m,
        beta: cfg.beta,
        pricing_budget: cfg.pricing_budget,
        deadline,
        ..ColgenConfig::default()
    };
    let preprocess = cfg.preprocessing();
    let mut stats = SearchStats::default();
    let mut incumbent: Option<ListColoring> = None;
    let mut stack = vec![SearchNode::root(inst)];
    let mut timed_out = false;

    while let Some(node) = stack.pop() {
        if deadline.is_some_and(|d| Instant::now() >= d) {
            stack.push(node);
            timed_out = true;
            break;
        }
        if prunes(node.parent_bound, incumbent.as_ref()) {
            stats.pruned += 1;
            continue;
        }
        stats.nodes += 1;
        stats.max_depth = stats.max_depth.max(node.depth);
        let backup = node.clone();
        let Some(node) = node.reduced(preprocess) else {
            continue;
        };
        let canon = &node.instance;
        let offset = node.weight_offset as f64;

        if canon.n() == 0 {
            let c = node.lift(&[], inst)?;
            if incumbent.as_ref().is_none_or(|i| c.weight < i.weight) {
                incumbent = Some(c);
            }
            continue;
        }

        let mut pool = node.pool();
        let (status, cg) = match solve_relaxation(canon, &mut pool, &colgen_cfg) {
            Err(ColgenError::TimeLimit) => {
                stack.push(backup);
                timed_out = true;
                break;
            }
            other => other?,
        };
        stats.lp_solves += cg.lp_solves;
        stats.columns += cg.columns_added;
        let relax = match status {
            RelaxStatus::Infeasible => {
                if node.depth == 0 {
                    stats.root_bound = Some(f64::INFINITY);
                }
                continue;
            }
            RelaxStatus::Optimal(r) => r,
        };
        let bound = relax.objective + offset;
        if node.depth == 0 {
            stats.root_bound = Some(bound);
        }
        if prunes(bound, incumbent.as_ref()) {
            stats.pruned += 1;
            continue;
        }

        if !relax.primal.iter().any(|&x| is_fractional(x)) {
            let local = extract_coloring(canon, &relax.columns, &relax.primal)?;
            let c = node.lift(&local.assignment, inst)?;
            debug!(
                "integral node at depth {} with weight {}",
                node.depth, c.weight
            );
            if incumbent.as_ref().is_none_or(|i| c.weight < i.weight) {
                incumbent = Some(c);
            }
            continue;
        }

        if !has_fractional_pair_column(&relax.columns, &relax.primal) {
            stats.pairless_nodes += 1;
        }
        let (first, second) = match cfg.branch_kind {
            BranchKind::Edge => {
                let (u, v) =
                    select_branch_edge(canon, &relax.columns, &relax.primal, cfg.select_rule)?;
                let (same, diff) = branch_edge(canon, u, v)?;
                let map = collapse_map(canon.n(), u, v);
                let ident: Vec<Vertex> = (0..canon.n()).collect();
                let same_node = node.child(same, &map, &pool, bound);
                let diff_node = node.child(diff, &ident, &pool, bound);
                (same_node, diff_node)
            }
            BranchKind::Color => {
                let (v, k) =
                    select_branch_color(canon, &relax.columns, &relax.primal, cfg.select_rule)?;
                let (assign, forbid) = branch_color(canon, v, k)?;
                let ident: Vec<Vertex> = (0..canon.n()).collect();
                (
                    node.child(assign, &ident, &pool, bound),
                    node.child(forbid, &ident, &pool, bound),
                )
            }
        };
        stack.push(second);
        stack.push(first);
    }

    stats.time_s = start.elapsed().as_secs_f64();
    let outcome = if timed_out {
        let open = stack
            .iter()
            .map(|n| n.parent_bound)
            .fold(f64::INFINITY, f64::min);
        let best = incumbent
            .as_ref()
            .map_or(f64::INFINITY, |c| c.weight as f64);
        Outcome {
            status: Status::TimeLimit,
            bound: open.min(best),
            best: incumbent,
            stats,
        }
    } else {
        match incumbent {
            Some(c) => Outcome {
                status: Status::Optimal,
                bound: c.weight as f64,
                best: Some(c),
                stats,
            },
            None => Outcome {
                status: Status::Infeasible,
                bound: f64::INFINITY,
                best: None,
                stats,
            },
        }
    };
    Ok(outcome)
}
