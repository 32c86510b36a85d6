//! Reduction by precoloring cliques of forced vertices.
//!
//! A vertex is forced when only one class of indistinguishable colors is
//! available to it (`k(v) = 1`). For such a class `j`, a maximal clique `Q`
//! of forced vertices in `G_j` can be given `|Q|` distinct colors of `C_j`
//! up front. Those colors then cost nothing for the rest of the instance,
//! their neighbours lose them, and vertices of `G_j` whose neighbourhood is
//! a proper subset of `Q` can reuse one of them and disappear as well.
//! The step is repeated until no forced vertex remains.

use thiserror::Error;

use crate::model::{
    assignment_weight, canonicalize, verify_coloring, CanonicalInstance, Color, Graph, Instance,
    ListColoring, Vertex,
};

/// One application of the clique precoloring. Vertex ids refer to the
/// instance passed to [`reduce`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrecolorStep {
    pub class_rep: Color,
    pub clique: Vec<Vertex>,
    /// `g`: clique vertex and the color it receives.
    pub assignment: Vec<(Vertex, Color)>,
    /// Vertices of `G_j` whose neighbourhood is a proper subset of the
    /// clique, with the color chosen for them.
    pub absorbed: Vec<(Vertex, Color)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ReductionLog {
    pub steps: Vec<PrecolorStep>,
    pub weight_offset: u64,
    pub zeroed_colors: Vec<Color>,
    /// Vertex `i` of the reduced instance is vertex `kept[i]` of the input.
    pub kept: Vec<Vertex>,
}

impl ReductionLog {
    pub fn identity(n: usize) -> Self {
        ReductionLog {
            kept: (0..n).collect(),
            ..Default::default()
        }
    }

    /// Colors fixed by the reduction, as `(input vertex, color)`.
    pub fn fixed(&self) -> impl Iterator<Item = (Vertex, Color)> + '_ {
        self.steps
            .iter()
            .flat_map(|s| s.assignment.iter().chain(&s.absorbed).copied())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Reduction {
    Reduced(CanonicalInstance, ReductionLog),
    Infeasible,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LiftError {
    #[error("reduced solution covers {got} vertices, reduced instance has {expected}")]
    Length { expected: usize, got: usize },
    #[error("lifted coloring is invalid: {0}")]
    InternalInconsistency(String),
}

/// Working copy in input vertex ids; removed vertices have `alive = false`.
struct State<'a> {
    graph: &'a Graph,
    alive: Vec<bool>,
    lists: Vec<Vec<Color>>,
    weights: Vec<u64>,
}

impl State<'_> {
    fn kept(&self) -> Vec<Vertex> {
        (0..self.alive.len()).filter(|&v| self.alive[v]).collect()
    }

    fn instance(&self, kept: &[Vertex]) -> Instance {
        let graph = self.graph.induced(kept);
        let lists = kept.iter().map(|&v| self.lists[v].clone()).collect();
        Instance::from_parts_unchecked(graph, lists, self.weights.clone())
    }
}

pub enum StepOutcome {
    /// No class has a forced vertex.
    Fixpoint,
    Applied(PrecolorStep),
    Infeasible,
}

/// Builds a maximal clique among `forced` (local ids of `g`): start from the
/// forced vertex of largest degree, then repeatedly add the adjacent
/// candidate of largest degree. Ties go to the smallest id.
fn greedy_clique(g: &Graph, forced: &[usize]) -> Vec<usize> {
    let pick = |cands: &[usize]| -> Option<usize> {
        cands
            .iter()
            .copied()
            .max_by_key(|&v| (g.degree(v), std::cmp::Reverse(v)))
    };
    let Some(seed) = pick(forced) else {
        return Vec::new();
    };
    let mut clique = vec![seed];
    let mut cands: Vec<usize> = forced
        .iter()
        .copied()
        .filter(|&u| g.has_edge(seed, u))
        .collect();
    while let Some(next) = pick(&cands) {
        clique.push(next);
        cands.retain(|&u| u != next && g.has_edge(next, u));
    }
    clique.sort_unstable();
    clique
}

fn step(state: &mut State<'_>) -> StepOutcome {
    let kept = state.kept();
    if kept.is_empty() {
        return StepOutcome::Fixpoint;
    }
    let canon = canonicalize(state.instance(&kept));
    let Some(class) = (0..canon.num_classes())
        .find(|&k| canon.vertex_set(k).iter().any(|&v| canon.k_count(v) == 1))
    else {
        return StepOutcome::Fixpoint;
    };

    let vset = canon.vertex_set(class);
    let gj = canon.color_graph(class);
    let forced: Vec<usize> = (0..vset.len())
        .filter(|&i| canon.k_count(vset[i]) == 1)
        .collect();
    let clique_local = greedy_clique(&gj, &forced);
    if clique_local.len() > canon.multiplicity(class) {
        return StepOutcome::Infeasible;
    }

    let to_input = |i: usize| kept[vset[i]];
    let colors = canon.members(class);
    let assignment: Vec<(Vertex, Color)> = clique_local
        .iter()
        .zip(colors)
        .map(|(&i, &c)| (to_input(i), c))
        .collect();

    let in_clique = |i: usize| clique_local.binary_search(&i).is_ok();
    let mut absorbed = Vec::new();
    for i in 0..vset.len() {
        if in_clique(i) {
            continue;
        }
        let nbrs = gj.neighbors(i);
        if nbrs.len() < clique_local.len() && nbrs.iter().all(|&u| in_clique(u)) {
            let color = clique_local
                .iter()
                .zip(colors)
                .find(|(q, _)| nbrs.binary_search(q).is_err())
                .map(|(_, &c)| c)
                .expect("neighbourhood is a proper subset of the clique");
            absorbed.push((to_input(i), color));
        }
    }

    for &(q, c) in &assignment {
        for &u in state.graph.neighbors(q) {
            if state.alive[u] {
                state.lists[u].retain(|&x| x != c);
            }
        }
        state.weights[c] = 0;
    }
    for &(v, _) in assignment.iter().chain(&absorbed) {
        state.alive[v] = false;
    }
    let class_rep = canon.representative(class);
    let clique = assignment.iter().map(|&(v, _)| v).collect();
    if (0..state.alive.len()).any(|v| state.alive[v] && state.lists[v].is_empty()) {
        return StepOutcome::Infeasible;
    }
    StepOutcome::Applied(PrecolorStep {
        class_rep,
        clique,
        assignment,
        absorbed,
    })
}

/// Applies the precoloring step until every remaining vertex has at least
/// two representative colors, or reports infeasibility.
pub fn reduce(canon: &CanonicalInstance) -> Reduction {
    let base = canon.base();
    let mut state = State {
        graph: base.graph(),
        alive: vec![true; base.n()],
        lists: base.lists().to_vec(),
        weights: base.weights().to_vec(),
    };
    let mut log = ReductionLog::default();
    loop {
        let weights_before = state.weights.clone();
        match step(&mut state) {
            StepOutcome::Fixpoint => break,
            StepOutcome::Infeasible => return Reduction::Infeasible,
            StepOutcome::Applied(s) => {
                let rep_weight = weights_before[s.class_rep];
                log.weight_offset += rep_weight * s.clique.len() as u64;
                for &(_, c) in &s.assignment {
                    if weights_before[c] != 0 {
                        log.zeroed_colors.push(c);
                    }
                }
                log.steps.push(s);
            }
        }
    }
    log.kept = state.kept();
    let reduced = canonicalize(state.instance(&log.kept));
    Reduction::Reduced(reduced, log)
}

/// Runs a single precoloring step and returns the resulting instance
/// (vertex ids per `ReductionLog::kept`).
pub fn reduce_once(canon: &CanonicalInstance) -> Reduction {
    let base = canon.base();
    let mut state = State {
        graph: base.graph(),
        alive: vec![true; base.n()],
        lists: base.lists().to_vec(),
        weights: base.weights().to_vec(),
    };
    let mut log = ReductionLog::default();
    match step(&mut state) {
        StepOutcome::Infeasible => return Reduction::Infeasible,
        StepOutcome::Fixpoint => {}
        StepOutcome::Applied(s) => {
            log.weight_offset = base.weight(s.class_rep) * s.clique.len() as u64;
            log.zeroed_colors = s
                .assignment
                .iter()
                .map(|&(_, c)| c)
                .filter(|&c| base.weight(c) != 0)
                .collect();
            log.steps.push(s);
        }
    }
    log.kept = state.kept();
    Reduction::Reduced(canonicalize(state.instance(&log.kept)), log)
}

/// Extends a coloring of the reduced instance to the instance the log was
/// produced from.
pub fn lift(
    reduced: &[Color],
    log: &ReductionLog,
    original: &Instance,
) -> Result<ListColoring, LiftError> {
    if reduced.len() != log.kept.len() {
        return Err(LiftError::Length {
            expected: log.kept.len(),
            got: reduced.len(),
        });
    }
    let mut f = vec![usize::MAX; original.n()];
    for (i, &v) in log.kept.iter().enumerate() {
        f[v] = reduced[i];
    }
    for (v, c) in log.fixed() {
        f[v] = c;
    }
    verify_coloring(original, &f).map_err(|violations| {
        let msg: Vec<String> = violations.iter().map(ToString::to_string).collect();
        LiftError::InternalInconsistency(msg.join("; "))
    })
}

/// Weight of a reduced coloring in the reduced instance plus the offset; the
/// weight its lift has in the original instance.
pub fn lifted_weight(reduced_inst: &Instance, reduced: &[Color], log: &ReductionLog) -> u64 {
    assignment_weight(reduced_inst, reduced) + log.weight_offset
}
