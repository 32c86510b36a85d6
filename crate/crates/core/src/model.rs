//! Instances of the weighted list coloring problem, their canonical form
//! (classes of indistinguishable colors) and coloring verification.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

pub type Vertex = usize;
pub type Color = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("vertex {0} has an empty color list")]
    EmptyList(Vertex),
    #[error("color {0} has no weight")]
    MissingWeight(Color),
    #[error("self-loop on vertex {0}")]
    SelfLoop(Vertex),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(Vertex, Vertex),
    #[error("vertex {vertex} out of range (n = {n})")]
    VertexOutOfRange { vertex: Vertex, n: usize },
    #[error("expected {expected} color lists, got {got}")]
    ListCount { expected: usize, got: usize },
    #[error("unknown color class {0}")]
    UnknownColor(Color),
}

/// Simple undirected graph on vertices `0..n` with sorted adjacency lists.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: Vec<Vec<Vertex>>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
        }
    }

    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, ModelError>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let mut g = Graph::empty(n);
        for (u, v) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(ModelError::VertexOutOfRange { vertex: x, n });
                }
            }
            if u == v {
                return Err(ModelError::SelfLoop(u));
            }
            if g.has_edge(u, v) {
                return Err(ModelError::DuplicateEdge(u.min(v), u.max(v)));
            }
            g.insert_edge(u, v);
        }
        Ok(g)
    }

    /// Builds a graph from possibly repeated edge pairs; duplicates are merged.
    pub fn from_edges_dedup<I>(n: usize, edges: I) -> Result<Self, ModelError>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let set: BTreeSet<(Vertex, Vertex)> = edges
            .into_iter()
            .map(|(u, v)| (u.min(v), u.max(v)))
            .collect();
        Graph::from_edges(n, set)
    }

    fn insert_edge(&mut self, u: Vertex, v: Vertex) {
        let pos = self.adj[u].binary_search(&v).unwrap_err();
        self.adj[u].insert(pos, v);
        let pos = self.adj[v].binary_search(&u).unwrap_err();
        self.adj[v].insert(pos, u);
    }

    pub(crate) fn with_edge(&self, u: Vertex, v: Vertex) -> Graph {
        let mut g = self.clone();
        if u != v && !g.has_edge(u, v) {
            g.insert_edge(u, v);
        }
        g
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, ns)| ns.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    /// Subgraph induced by `vertices`, relabelled so that `vertices[i]` becomes `i`.
    pub fn induced(&self, vertices: &[Vertex]) -> Graph {
        let mut local = vec![usize::MAX; self.n()];
        for (i, &v) in vertices.iter().enumerate() {
            local[v] = i;
        }
        let adj = vertices
            .iter()
            .map(|&v| {
                let mut ns: Vec<Vertex> = self.adj[v]
                    .iter()
                    .filter_map(|&u| (local[u] != usize::MAX).then_some(local[u]))
                    .collect();
                ns.sort_unstable();
                ns
            })
            .collect();
        Graph { adj }
    }

    pub fn is_stable(&self, set: &[Vertex]) -> bool {
        set.iter()
            .enumerate()
            .all(|(i, &u)| set[i + 1..].iter().all(|&v| u != v && !self.has_edge(u, v)))
    }

    pub fn is_clique(&self, set: &[Vertex]) -> bool {
        set.iter()
            .enumerate()
            .all(|(i, &u)| set[i + 1..].iter().all(|&v| self.has_edge(u, v)))
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n())
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

/// A WLCP instance `(G, L, w)`.
///
/// Colors are dense ids indexing `weights`. The color universe is the union of
/// the lists; an entry of `weights` whose color appears in no list is carried
/// along (so files round-trip) but plays no role.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Instance {
    graph: Graph,
    lists: Vec<Vec<Color>>,
    weights: Vec<u64>,
}

impl Instance {
    /// Validating constructor; lists are sorted and deduplicated.
    pub fn new(
        graph: Graph,
        lists: Vec<Vec<Color>>,
        weights: Vec<u64>,
    ) -> Result<Self, ModelError> {
        if lists.len() != graph.n() {
            return Err(ModelError::ListCount {
                expected: graph.n(),
                got: lists.len(),
            });
        }
        let mut sorted = Vec::with_capacity(lists.len());
        for (v, mut list) in lists.into_iter().enumerate() {
            if list.is_empty() {
                return Err(ModelError::EmptyList(v));
            }
            list.sort_unstable();
            list.dedup();
            if let Some(&c) = list.iter().find(|&&c| c >= weights.len()) {
                return Err(ModelError::MissingWeight(c));
            }
            sorted.push(list);
        }
        Ok(Instance {
            graph,
            lists: sorted,
            weights,
        })
    }

    /// Builds an instance from a sparse weight map. Colors that only appear in
    /// `weights` are dropped from the universe.
    pub fn build(
        graph: Graph,
        lists: Vec<Vec<Color>>,
        weights: &BTreeMap<Color, u64>,
    ) -> Result<Self, ModelError> {
        let mut dense = Vec::new();
        for list in &lists {
            for &c in list {
                let w = *weights.get(&c).ok_or(ModelError::MissingWeight(c))?;
                if dense.len() <= c {
                    dense.resize(c + 1, 0);
                }
                dense[c] = w;
            }
        }
        Instance::new(graph, lists, dense)
    }

    pub(crate) fn from_parts_unchecked(
        graph: Graph,
        lists: Vec<Vec<Color>>,
        weights: Vec<u64>,
    ) -> Self {
        debug_assert_eq!(graph.n(), lists.len());
        debug_assert!(lists
            .iter()
            .all(|l| !l.is_empty() && l.windows(2).all(|w| w[0] < w[1])));
        Instance {
            graph,
            lists,
            weights,
        }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn list(&self, v: Vertex) -> &[Color] {
        &self.lists[v]
    }

    pub fn lists(&self) -> &[Vec<Color>] {
        &self.lists
    }

    pub fn weight(&self, c: Color) -> u64 {
        self.weights[c]
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    /// Size of the color id space (`weights.len()`).
    pub fn color_capacity(&self) -> usize {
        self.weights.len()
    }

    /// The color universe `C`: every color appearing in some list, ascending.
    pub fn colors(&self) -> Vec<Color> {
        let mut seen = vec![false; self.weights.len()];
        for list in &self.lists {
            for &c in list {
                seen[c] = true;
            }
        }
        (0..seen.len()).filter(|&c| seen[c]).collect()
    }

    /// `V_c` for every color id (empty for colors outside the universe).
    pub fn color_vertex_sets(&self) -> Vec<Vec<Vertex>> {
        let mut sets = vec![Vec::new(); self.weights.len()];
        for (v, list) in self.lists.iter().enumerate() {
            for &c in list {
                sets[c].push(v);
            }
        }
        sets
    }

    pub fn lists_intersect(&self, u: Vertex, v: Vertex) -> bool {
        sorted_intersects(&self.lists[u], &self.lists[v])
    }

    /// Sum of the weights of all colors in the universe; an upper bound on
    /// the weight of any list coloring.
    pub fn total_weight(&self) -> u64 {
        self.colors().into_iter().map(|c| self.weights[c]).sum()
    }

    /// Same instance with `weights` replaced.
    pub(crate) fn with_graph(&self, graph: Graph) -> Instance {
        Instance {
            graph,
            lists: self.lists.clone(),
            weights: self.weights.clone(),
        }
    }

    pub(crate) fn with_list(&self, v: Vertex, list: Vec<Color>) -> Instance {
        let mut lists = self.lists.clone();
        lists[v] = list;
        Instance {
            graph: self.graph.clone(),
            lists,
            weights: self.weights.clone(),
        }
    }
}

pub(crate) fn sorted_intersects(a: &[usize], b: &[usize]) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return true,
        }
    }
    false
}

pub(crate) fn sorted_intersection(a: &[usize], b: &[usize]) -> Vec<usize> {
    let bs: BTreeSet<usize> = b.iter().copied().collect();
    a.iter().copied().filter(|x| bs.contains(x)).collect()
}

/// An instance together with its partition of colors into classes of
/// indistinguishable colors (same color-vertex set, same weight).
///
/// Classes are indexed `0..num_classes()` in ascending order of their
/// representative, which is the smallest color id of the class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalInstance {
    base: Instance,
    representatives: Vec<Color>,
    members: Vec<Vec<Color>>,
    class_of: Vec<Option<usize>>,
    vertex_sets: Vec<Vec<Vertex>>,
    vertex_classes: Vec<Vec<usize>>,
}

impl CanonicalInstance {
    pub fn new(base: Instance) -> Self {
        let sets = base.color_vertex_sets();
        let mut groups: BTreeMap<(&[Vertex], u64), Vec<Color>> = BTreeMap::new();
        for (c, set) in sets.iter().enumerate() {
            if !set.is_empty() {
                groups
                    .entry((set.as_slice(), base.weights[c]))
                    .or_default()
                    .push(c);
            }
        }
        let mut classes: Vec<(Vec<Color>, Vec<Vertex>)> = groups
            .into_iter()
            .map(|((set, _), cs)| (cs, set.to_vec()))
            .collect();
        classes.sort_by_key(|(cs, _)| cs[0]);

        let mut class_of = vec![None; base.weights.len()];
        let mut vertex_classes = vec![Vec::new(); base.n()];
        let mut representatives = Vec::with_capacity(classes.len());
        let mut members = Vec::with_capacity(classes.len());
        let mut vertex_sets = Vec::with_capacity(classes.len());
        for (idx, (cs, set)) in classes.into_iter().enumerate() {
            for &c in &cs {
                class_of[c] = Some(idx);
            }
            for &v in &set {
                vertex_classes[v].push(idx);
            }
            representatives.push(cs[0]);
            members.push(cs);
            vertex_sets.push(set);
        }
        CanonicalInstance {
            base,
            representatives,
            members,
            class_of,
            vertex_sets,
            vertex_classes,
        }
    }

    pub fn base(&self) -> &Instance {
        &self.base
    }

    pub fn into_base(self) -> Instance {
        self.base
    }

    pub fn graph(&self) -> &Graph {
        &self.base.graph
    }

    pub fn n(&self) -> usize {
        self.base.n()
    }

    pub fn num_classes(&self) -> usize {
        self.representatives.len()
    }

    pub fn representatives(&self) -> &[Color] {
        &self.representatives
    }

    pub fn representative(&self, class: usize) -> Color {
        self.representatives[class]
    }

    /// Class index of a color, if the color is in the universe.
    pub fn class_of(&self, c: Color) -> Option<usize> {
        self.class_of.get(c).copied().flatten()
    }

    pub fn class_of_representative(&self, rep: Color) -> Result<usize, ModelError> {
        self.representatives
            .binary_search(&rep)
            .map_err(|_| ModelError::UnknownColor(rep))
    }

    pub fn members(&self, class: usize) -> &[Color] {
        &self.members[class]
    }

    pub fn multiplicity(&self, class: usize) -> usize {
        self.members[class].len()
    }

    pub fn class_weight(&self, class: usize) -> u64 {
        self.base.weights[self.representatives[class]]
    }

    pub fn vertex_set(&self, class: usize) -> &[Vertex] {
        &self.vertex_sets[class]
    }

    pub fn in_class_set(&self, class: usize, v: Vertex) -> bool {
        self.vertex_sets[class].binary_search(&v).is_ok()
    }

    /// Classes whose colors appear in `L(v)`, ascending.
    pub fn vertex_classes(&self, v: Vertex) -> &[usize] {
        &self.vertex_classes[v]
    }

    /// `k(v)`: number of representative colors available to `v`.
    pub fn k_count(&self, v: Vertex) -> usize {
        self.vertex_classes[v].len()
    }

    pub fn k_counts(&self) -> Vec<usize> {
        self.vertex_classes.iter().map(Vec::len).collect()
    }

    /// `W = Σ_k w_k m(k)`, an upper bound on any feasible solution value.
    pub fn weight_bound(&self) -> u64 {
        (0..self.num_classes())
            .map(|k| self.class_weight(k) * self.multiplicity(k) as u64)
            .sum()
    }

    /// The color graph `G_k`: subgraph induced by `V_k`. Local vertex `i`
    /// is `vertex_set(class)[i]`.
    pub fn color_graph(&self, class: usize) -> Graph {
        self.base.graph.induced(&self.vertex_sets[class])
    }

    /// Color graph looked up by representative color id.
    pub fn color_graph_of(&self, rep: Color) -> Result<Graph, ModelError> {
        Ok(self.color_graph(self.class_of_representative(rep)?))
    }

    /// Number of neighbours of `v` inside `V_k`, i.e. `|N_{G_k}(v)|`.
    pub fn class_degree(&self, class: usize, v: Vertex) -> usize {
        self.base
            .graph
            .neighbors(v)
            .iter()
            .filter(|&&u| self.in_class_set(class, u))
            .count()
    }
}

pub fn canonicalize(inst: Instance) -> CanonicalInstance {
    CanonicalInstance::new(inst)
}

/// A verified list coloring and its weight.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ListColoring {
    pub assignment: Vec<Color>,
    pub weight: u64,
}

impl ListColoring {
    /// Active colors, ascending.
    pub fn active_colors(&self) -> Vec<Color> {
        let set: BTreeSet<Color> = self.assignment.iter().copied().collect();
        set.into_iter().collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    WrongLength { expected: usize, got: usize },
    NotInList { vertex: Vertex, color: Color },
    EdgeConflict { u: Vertex, v: Vertex, color: Color },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::WrongLength { expected, got } => {
                write!(f, "assignment covers {got} vertices, expected {expected}")
            }
            Violation::NotInList { vertex, color } => {
                write!(f, "color {color} not in list of vertex {vertex}")
            }
            Violation::EdgeConflict { u, v, color } => {
                write!(f, "edge ({u}, {v}) has both endpoints colored {color}")
            }
        }
    }
}

/// Weight of the set of active colors in `assignment`, without validation.
pub fn assignment_weight(inst: &Instance, assignment: &[Color]) -> u64 {
    let set: BTreeSet<Color> = assignment.iter().copied().collect();
    set.into_iter()
        .map(|c| inst.weights.get(c).copied().unwrap_or(0))
        .sum()
}

/// Checks `assignment` against `inst` and reports every violation found.
pub fn verify_coloring(
    inst: &Instance,
    assignment: &[Color],
) -> Result<ListColoring, Vec<Violation>> {
    if assignment.len() != inst.n() {
        return Err(vec![Violation::WrongLength {
            expected: inst.n(),
            got: assignment.len(),
        }]);
    }
    let mut violations = Vec::new();
    for (v, &c) in assignment.iter().enumerate() {
        if inst.lists[v].binary_search(&c).is_err() {
            violations.push(Violation::NotInList {
                vertex: v,
                color: c,
            });
        }
    }
    for (u, v) in inst.graph.edges() {
        if assignment[u] == assignment[v] {
            violations.push(Violation::EdgeConflict {
                u,
                v,
                color: assignment[u],
            });
        }
    }
    if violations.is_empty() {
        Ok(ListColoring {
            assignment: assignment.to_vec(),
            weight: assignment_weight(inst, assignment),
        })
    } else {
        Err(violations)
    }
}

/// Drops every edge whose endpoints have disjoint lists; such edges never
/// constrain a list coloring.
pub fn remove_irrelevant_edges(inst: &Instance) -> Instance {
    let kept: Vec<(Vertex, Vertex)> = inst
        .graph
        .edges()
        .filter(|&(u, v)| inst.lists_intersect(u, v))
        .collect();
    let graph = Graph::from_edges(inst.n(), kept).expect("subset of a simple graph");
    inst.with_graph(graph)
}
