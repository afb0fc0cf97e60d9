//! Simple directed graphs with dense vertex ids and stable edge indices.
//!
//! Every other module works on [`DirectedGraph`]. Edge `i` of a parsed graph is
//! the `i`-th edge line of its input, and solutions are reported as
//! [`EdgeSet`]s over those indices.

use std::collections::{BTreeMap, HashSet, VecDeque};
use std::fmt::{self, Write as _};

use fixedbitset::FixedBitSet;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for a graph with {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {0} -> {1}")]
    DuplicateEdge(usize, usize),
}

/// Errors from [`parse_edge_list`]. Line numbers are 1-based and count
/// comment lines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("missing header line \"n m\"")]
    MissingHeader,
    #[error("line {line}: malformed {what}: {text:?}")]
    Malformed {
        line: usize,
        what: &'static str,
        text: String,
    },
    #[error("line {line}: vertex {vertex} out of range (n = {n})")]
    VertexOutOfRange { line: usize, vertex: usize, n: usize },
    #[error("line {line}: self-loop at vertex {vertex}")]
    SelfLoop { line: usize, vertex: usize },
    #[error("line {line}: duplicate edge {tail} -> {head}")]
    DuplicateEdge { line: usize, tail: usize, head: usize },
    #[error("header announces {expected} edges but {found} were given")]
    EdgeCountMismatch { expected: usize, found: usize },
}

/// A simple directed graph on vertices `0..n`.
///
/// Immutable once built. Adjacency lists hold edge indices in ascending order,
/// so every traversal visits neighbours in edge-index order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectedGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
    out_edges: Vec<Vec<usize>>,
    in_edges: Vec<Vec<usize>>,
    labels: Option<Vec<String>>,
    metadata: BTreeMap<String, String>,
}

impl DirectedGraph {
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self, GraphError> {
        let mut seen = HashSet::with_capacity(edges.len());
        let mut out_edges = vec![Vec::new(); n];
        let mut in_edges = vec![Vec::new(); n];
        for (i, &(u, v)) in edges.iter().enumerate() {
            for x in [u, v] {
                if x >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: x, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            if !seen.insert((u, v)) {
                return Err(GraphError::DuplicateEdge(u, v));
            }
            out_edges[u].push(i);
            in_edges[v].push(i);
        }
        Ok(DirectedGraph {
            n,
            edges,
            out_edges,
            in_edges,
            labels: None,
            metadata: BTreeMap::new(),
        })
    }

    /// Attaches per-vertex labels. Labels are provenance only and never used
    /// as identity.
    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.n, "one label per vertex");
        self.labels = Some(labels);
        self
    }

    pub fn with_metadata(mut self, key: impl Into<String>, value: impl ToString) -> Self {
        self.metadata.insert(key.into(), value.to_string());
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> (usize, usize) {
        self.edges[e]
    }

    pub fn out_edges(&self, v: usize) -> &[usize] {
        &self.out_edges[v]
    }

    pub fn in_edges(&self, v: usize) -> &[usize] {
        &self.in_edges[v]
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.out_edges[v].len()
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.in_edges[v].len()
    }

    /// Index of the edge `u -> v`, if present.
    pub fn find_edge(&self, u: usize, v: usize) -> Option<usize> {
        self.out_edges
            .get(u)?
            .iter()
            .copied()
            .find(|&e| self.edges[e].1 == v)
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, v: usize) -> Option<&str> {
        self.labels.as_ref().map(|l| l[v].as_str())
    }

    pub fn metadata(&self) -> &BTreeMap<String, String> {
        &self.metadata
    }

    pub fn full_edge_set(&self) -> EdgeSet {
        EdgeSet::full(self.m())
    }

    pub fn empty_edge_set(&self) -> EdgeSet {
        EdgeSet::empty(self.m())
    }

    /// Vertices reachable from `u` (including `u`).
    pub fn reachable_from(&self, u: usize) -> FixedBitSet {
        self.reach(u, None, Direction::Forward)
    }

    /// Vertices from which `v` is reachable (including `v`).
    pub fn reaching(&self, v: usize) -> FixedBitSet {
        self.reach(v, None, Direction::Backward)
    }

    /// Reachability restricted to the edges of `within`.
    pub fn reachable_from_within(&self, u: usize, within: &EdgeSet) -> FixedBitSet {
        self.reach(u, Some(within), Direction::Forward)
    }

    fn reach(&self, start: usize, within: Option<&EdgeSet>, dir: Direction) -> FixedBitSet {
        let mut seen = FixedBitSet::with_capacity(self.n);
        let mut queue = VecDeque::from([start]);
        seen.insert(start);
        while let Some(x) = queue.pop_front() {
            let adj = match dir {
                Direction::Forward => &self.out_edges[x],
                Direction::Backward => &self.in_edges[x],
            };
            for &e in adj {
                if within.is_some_and(|w| !w.contains(e)) {
                    continue;
                }
                let y = match dir {
                    Direction::Forward => self.edges[e].1,
                    Direction::Backward => self.edges[e].0,
                };
                if !seen.put(y) {
                    queue.push_back(y);
                }
            }
        }
        seen
    }

    /// `G' = (V, E')`. Edge `i` of the result is the `i`-th smallest index of
    /// `selected`; the returned vector maps new indices back to old ones.
    pub fn spanning_subgraph(&self, selected: &EdgeSet) -> (DirectedGraph, Vec<usize>) {
        let kept: Vec<usize> = selected.iter().collect();
        let edges = kept.iter().map(|&e| self.edges[e]).collect();
        let mut sub = DirectedGraph::new(self.n, edges).expect("subgraph of a simple graph");
        sub.labels = self.labels.clone();
        (sub, kept)
    }

    /// The subgraph formed by `selected` on only the vertices it touches.
    /// Returns the graph, the new-to-old vertex map and the new-to-old edge
    /// map. Both maps are increasing.
    pub fn edge_induced(&self, selected: &EdgeSet) -> (DirectedGraph, Vec<usize>, Vec<usize>) {
        let kept: Vec<usize> = selected.iter().collect();
        let mut touched = FixedBitSet::with_capacity(self.n);
        for &e in &kept {
            let (u, v) = self.edges[e];
            touched.insert(u);
            touched.insert(v);
        }
        let vertices: Vec<usize> = touched.ones().collect();
        let mut old_to_new = vec![usize::MAX; self.n];
        for (i, &x) in vertices.iter().enumerate() {
            old_to_new[x] = i;
        }
        let edges = kept
            .iter()
            .map(|&e| {
                let (u, v) = self.edges[e];
                (old_to_new[u], old_to_new[v])
            })
            .collect();
        let sub = DirectedGraph::new(vertices.len(), edges).expect("subgraph of a simple graph");
        (sub, vertices, kept)
    }

    pub fn sources(&self) -> Vec<usize> {
        (0..self.n).filter(|&v| self.in_edges[v].is_empty()).collect()
    }

    pub fn sinks(&self) -> Vec<usize> {
        (0..self.n).filter(|&v| self.out_edges[v].is_empty()).collect()
    }

    pub fn is_acyclic(&self) -> bool {
        self.topological_order().is_some()
    }

    /// Kahn's algorithm with a min-heap so the order is canonical.
    pub fn topological_order(&self) -> Option<Vec<usize>> {
        use std::cmp::Reverse;
        use std::collections::BinaryHeap;
        let mut indeg: Vec<usize> = (0..self.n).map(|v| self.in_degree(v)).collect();
        let mut ready: BinaryHeap<Reverse<usize>> =
            (0..self.n).filter(|&v| indeg[v] == 0).map(Reverse).collect();
        let mut order = Vec::with_capacity(self.n);
        while let Some(Reverse(v)) = ready.pop() {
            order.push(v);
            for &e in &self.out_edges[v] {
                let w = self.edges[e].1;
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    ready.push(Reverse(w));
                }
            }
        }
        (order.len() == self.n).then_some(order)
    }

    /// Some directed cycle as a list of edge indices, if one exists.
    pub fn find_cycle(&self) -> Option<Vec<usize>> {
        // 0 = unvisited, 1 = on stack, 2 = done
        let mut state = vec![0u8; self.n];
        let mut via = vec![usize::MAX; self.n];
        for root in 0..self.n {
            if state[root] != 0 {
                continue;
            }
            let mut stack = vec![(root, 0usize)];
            state[root] = 1;
            while let Some(&mut (x, ref mut pos)) = stack.last_mut() {
                if let Some(&e) = self.out_edges[x].get(*pos) {
                    *pos += 1;
                    let y = self.edges[e].1;
                    match state[y] {
                        0 => {
                            state[y] = 1;
                            via[y] = e;
                            stack.push((y, 0));
                        }
                        1 => {
                            let mut cycle = vec![e];
                            let mut z = x;
                            while z != y {
                                cycle.push(via[z]);
                                z = self.edges[via[z]].0;
                            }
                            cycle.reverse();
                            return Some(cycle);
                        }
                        _ => {}
                    }
                } else {
                    state[x] = 2;
                    stack.pop();
                }
            }
        }
        None
    }

    /// Strongly connected component id per vertex. Ids are assigned in
    /// reverse topological order of the condensation (sinks first).
    pub fn strongly_connected_components(&self) -> (Vec<usize>, usize) {
        // Iterative Tarjan.
        let n = self.n;
        let mut index = vec![usize::MAX; n];
        let mut low = vec![0usize; n];
        let mut on_stack = vec![false; n];
        let mut comp = vec![usize::MAX; n];
        let mut stack = Vec::new();
        let mut counter = 0;
        let mut n_comp = 0;
        for root in 0..n {
            if index[root] != usize::MAX {
                continue;
            }
            let mut call = vec![(root, 0usize)];
            index[root] = counter;
            low[root] = counter;
            counter += 1;
            stack.push(root);
            on_stack[root] = true;
            while let Some(&mut (x, ref mut pos)) = call.last_mut() {
                if let Some(&e) = self.out_edges[x].get(*pos) {
                    *pos += 1;
                    let y = self.edges[e].1;
                    if index[y] == usize::MAX {
                        index[y] = counter;
                        low[y] = counter;
                        counter += 1;
                        stack.push(y);
                        on_stack[y] = true;
                        call.push((y, 0));
                    } else if on_stack[y] {
                        low[x] = low[x].min(index[y]);
                    }
                } else {
                    call.pop();
                    if let Some(&(parent, _)) = call.last() {
                        low[parent] = low[parent].min(low[x]);
                    }
                    if low[x] == index[x] {
                        loop {
                            let y = stack.pop().expect("tarjan stack");
                            on_stack[y] = false;
                            comp[y] = n_comp;
                            if y == x {
                                break;
                            }
                        }
                        n_comp += 1;
                    }
                }
            }
        }
        (comp, n_comp)
    }

    pub fn is_strongly_connected(&self) -> bool {
        self.n <= 1 || self.strongly_connected_components().1 == 1
    }

    /// Connectivity of the shadow (orientation ignored).
    pub fn is_weakly_connected(&self) -> bool {
        if self.n <= 1 {
            return true;
        }
        let mut seen = FixedBitSet::with_capacity(self.n);
        let mut stack = vec![0];
        seen.insert(0);
        while let Some(x) = stack.pop() {
            let nbrs = self.out_edges[x]
                .iter()
                .map(|&e| self.edges[e].1)
                .chain(self.in_edges[x].iter().map(|&e| self.edges[e].0));
            for y in nbrs {
                if !seen.put(y) {
                    stack.push(y);
                }
            }
        }
        seen.count_ones(..) == self.n
    }

    /// Biconnected components of the shadow, as a block id per edge.
    /// Antiparallel edge pairs always share a block.
    pub fn edge_blocks(&self) -> (Vec<usize>, usize) {
        let n = self.n;
        let m = self.m();
        let mut disc = vec![usize::MAX; n];
        let mut low = vec![0usize; n];
        let mut block = vec![usize::MAX; m];
        let mut edge_stack: Vec<usize> = Vec::new();
        let mut timer = 0;
        let mut n_blocks = 0;
        let incident = |x: usize| -> Vec<(usize, usize)> {
            let mut inc: Vec<(usize, usize)> = self.out_edges[x]
                .iter()
                .map(|&e| (e, self.edges[e].1))
                .chain(self.in_edges[x].iter().map(|&e| (e, self.edges[e].0)))
                .collect();
            inc.sort_unstable();
            inc
        };
        for root in 0..n {
            if disc[root] != usize::MAX {
                continue;
            }
            disc[root] = timer;
            low[root] = timer;
            timer += 1;
            // (vertex, edge used to enter, incident list, position)
            let mut call: Vec<(usize, usize, Vec<(usize, usize)>, usize)> =
                vec![(root, usize::MAX, incident(root), 0)];
            while let Some(frame) = call.last_mut() {
                let (x, parent_edge) = (frame.0, frame.1);
                if frame.3 < frame.2.len() {
                    let (e, y) = frame.2[frame.3];
                    frame.3 += 1;
                    if e == parent_edge {
                        continue;
                    }
                    if disc[y] == usize::MAX {
                        edge_stack.push(e);
                        disc[y] = timer;
                        low[y] = timer;
                        timer += 1;
                        let inc = incident(y);
                        call.push((y, e, inc, 0));
                    } else if disc[y] < disc[x] {
                        edge_stack.push(e);
                        low[x] = low[x].min(disc[y]);
                    }
                } else {
                    call.pop();
                    if let Some(parent) = call.last() {
                        let p = parent.0;
                        low[p] = low[p].min(low[x]);
                        if low[x] >= disc[p] {
                            while let Some(f) = edge_stack.pop() {
                                block[f] = n_blocks;
                                if f == parent_edge {
                                    break;
                                }
                            }
                            n_blocks += 1;
                        }
                    }
                }
            }
        }
        (block, n_blocks)
    }
}

#[derive(Clone, Copy)]
enum Direction {
    Forward,
    Backward,
}

/// A set of edge indices of one particular graph.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct EdgeSet {
    bits: FixedBitSet,
}

impl EdgeSet {
    pub fn empty(m: usize) -> Self {
        EdgeSet {
            bits: FixedBitSet::with_capacity(m),
        }
    }

    pub fn full(m: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(m);
        bits.insert_range(..);
        EdgeSet { bits }
    }

    /// Panics if an index is `>= m`.
    pub fn from_indices(m: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut set = Self::empty(m);
        for e in indices {
            set.insert(e);
        }
        set
    }

    /// Size of the host graph's edge universe.
    pub fn universe(&self) -> usize {
        self.bits.len()
    }

    pub fn insert(&mut self, e: usize) {
        self.bits.insert(e);
    }

    pub fn remove(&mut self, e: usize) {
        self.bits.set(e, false);
    }

    pub fn contains(&self, e: usize) -> bool {
        self.bits.contains(e)
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    /// Ascending edge indices.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.ones()
    }

    pub fn is_subset(&self, other: &EdgeSet) -> bool {
        self.bits.is_subset(&other.bits)
    }

    pub fn is_disjoint(&self, other: &EdgeSet) -> bool {
        self.bits.is_disjoint(&other.bits)
    }

    pub fn intersection(&self, other: &EdgeSet) -> EdgeSet {
        EdgeSet {
            bits: &self.bits & &other.bits,
        }
    }

    pub fn union(&self, other: &EdgeSet) -> EdgeSet {
        EdgeSet {
            bits: &self.bits | &other.bits,
        }
    }

    pub fn difference(&self, other: &EdgeSet) -> EdgeSet {
        let mut bits = self.bits.clone();
        bits.difference_with(&other.bits);
        EdgeSet { bits }
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl fmt::Debug for EdgeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Parses the edge-list format: a header `n m`, then `m` lines `tail head`.
/// Lines starting with `#` are ignored.
pub fn parse_edge_list(text: &str) -> Result<DirectedGraph, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end_matches('\r')))
        .filter(|(_, l)| !l.starts_with('#'));

    let (hline, header) = lines.next().ok_or(ParseError::MissingHeader)?;
    let (n, m) = parse_pair(header).ok_or_else(|| ParseError::Malformed {
        line: hline,
        what: "header",
        text: header.to_string(),
    })?;

    let mut edges = Vec::with_capacity(m);
    let mut seen = HashSet::with_capacity(m);
    for (line, text) in lines {
        if text.is_empty() {
            continue;
        }
        let (u, v) = parse_pair(text).ok_or_else(|| ParseError::Malformed {
            line,
            what: "edge",
            text: text.to_string(),
        })?;
        for vertex in [u, v] {
            if vertex >= n {
                return Err(ParseError::VertexOutOfRange { line, vertex, n });
            }
        }
        if u == v {
            return Err(ParseError::SelfLoop { line, vertex: u });
        }
        if !seen.insert((u, v)) {
            return Err(ParseError::DuplicateEdge {
                line,
                tail: u,
                head: v,
            });
        }
        edges.push((u, v));
    }
    if edges.len() != m {
        return Err(ParseError::EdgeCountMismatch {
            expected: m,
            found: edges.len(),
        });
    }
    Ok(DirectedGraph::new(n, edges).expect("validated while parsing"))
}

fn parse_pair(text: &str) -> Option<(usize, usize)> {
    let mut parts = text.split(' ');
    let a = parse_decimal(parts.next()?)?;
    let b = parse_decimal(parts.next()?)?;
    parts.next().is_none().then_some((a, b))
}

fn parse_decimal(s: &str) -> Option<usize> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

/// Inverse of [`parse_edge_list`].
pub fn to_edge_list(g: &DirectedGraph) -> String {
    let mut out = String::with_capacity(8 * (g.m() + 1));
    writeln!(out, "{} {}", g.n(), g.m()).unwrap();
    for &(u, v) in g.edges() {
        writeln!(out, "{u} {v}").unwrap();
    }
    out
}

/// DOT rendering with the `highlight` edges drawn in red. Vertices first,
/// then one edge statement per line in edge-index order.
pub fn to_dot(g: &DirectedGraph, highlight: &EdgeSet) -> String {
    let mut out = String::from("digraph G {\n");
    for v in 0..g.n() {
        match g.label(v) {
            Some(label) => writeln!(out, "  {v} [label=\"{}\"];", escape_dot(label)).unwrap(),
            None => writeln!(out, "  {v};").unwrap(),
        }
    }
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        if highlight.contains(e) {
            writeln!(out, "  {u} -> {v} [color=red, penwidth=2];").unwrap();
        } else {
            writeln!(out, "  {u} -> {v};").unwrap();
        }
    }
    out.push_str("}\n");
    out
}

fn escape_dot(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}
