//! Two-terminal directed series-parallel graphs: recognition by series and
//! parallel reductions, binary decomposition trees, the clean-tree transform
//! and capacity folding.

use std::collections::{BTreeSet, HashMap};
use std::fmt::{self, Write as _};

use fixedbitset::FixedBitSet;
use thiserror::Error;

use crate::graph::{DirectedGraph, EdgeSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeKind {
    Leaf(usize),
    Series(usize, usize),
    Parallel(usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeNode {
    pub kind: NodeKind,
    pub source: usize,
    pub sink: usize,
    /// Capacity between the node's terminals using every leaf below it.
    pub cap_full: u64,
}

/// Binary S/P decomposition tree of a two-terminal DSP. Leaves are in
/// bijection with the host graph's edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecompositionTree {
    nodes: Vec<TreeNode>,
    parent: Vec<Option<usize>>,
    root: usize,
    leaf_of_edge: Vec<usize>,
}

/// Five internally vertex-disjoint directed paths forming a subdivision of
/// `W`: branch vertices `a, b, c, d` and paths `a⇝b, a⇝c, b⇝c, b⇝d, c⇝d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WSubdivision {
    pub branch: [usize; 4],
    /// Edge indices of each path, in the order `ab, ac, bc, bd, cd`.
    pub paths: [Vec<usize>; 5],
}

/// Which branch vertices each path of a [`WSubdivision`] connects.
pub const W_PATH_ENDS: [(usize, usize); 5] = [(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)];

impl WSubdivision {
    pub fn edges(&self, m: usize) -> EdgeSet {
        EdgeSet::from_indices(m, self.paths.iter().flatten().copied())
    }

    /// Checks that the paths are directed, connect the right branch vertices,
    /// and meet only at their ends.
    pub fn is_valid_in(&self, g: &DirectedGraph) -> bool {
        let mut seen = vec![false; g.n()];
        for &x in &self.branch {
            if x >= g.n() || std::mem::replace(&mut seen[x], true) {
                return false;
            }
        }
        for (path, &(i, j)) in self.paths.iter().zip(&W_PATH_ENDS) {
            let mut at = self.branch[i];
            for (k, &e) in path.iter().enumerate() {
                if e >= g.m() || g.edge(e).0 != at {
                    return false;
                }
                at = g.edge(e).1;
                let last = k + 1 == path.len();
                if !last && std::mem::replace(&mut seen[at], true) {
                    return false;
                }
            }
            if path.is_empty() || at != self.branch[j] {
                return false;
            }
        }
        true
    }

    /// Re-expresses the witness in a host graph, given the maps from this
    /// witness's graph into it.
    pub fn map_into(&self, vertex_map: &[usize], edge_map: &[usize]) -> WSubdivision {
        WSubdivision {
            branch: self.branch.map(|x| vertex_map[x]),
            paths: self
                .paths
                .clone()
                .map(|p| p.into_iter().map(|e| edge_map[e]).collect()),
        }
    }
}

impl fmt::Display for WSubdivision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.branch;
        write!(f, "branch {a} {b} {c} {d}; paths")?;
        for p in &self.paths {
            let list: Vec<String> = p.iter().map(|e| e.to_string()).collect();
            write!(f, " [{}]", list.join(","))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NotDspWitness {
    /// Edge indices of a directed cycle.
    Cyclic(Vec<usize>),
    MultipleSources(Vec<usize>),
    MultipleSinks(Vec<usize>),
    /// The reductions got stuck. The subdivision is extracted best-effort and
    /// may be missing on large inputs.
    WSubdivision(Option<WSubdivision>),
}

impl fmt::Display for NotDspWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[usize]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
        match self {
            NotDspWitness::Cyclic(c) => write!(f, "cyclic: edges {}", join(c)),
            NotDspWitness::MultipleSources(s) => write!(f, "multiple sources: {}", join(s)),
            NotDspWitness::MultipleSinks(s) => write!(f, "multiple sinks: {}", join(s)),
            NotDspWitness::WSubdivision(Some(w)) => write!(f, "W-subdivision: {w}"),
            NotDspWitness::WSubdivision(None) => write!(f, "W-subdivision: not extracted"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DspError {
    #[error("graph has no edges")]
    Edgeless,
    #[error("not a directed series-parallel graph ({0})")]
    NotDsp(NotDspWitness),
}

/// Graphs with more edges than this get no W-subdivision in a rejection.
const WITNESS_EDGE_LIMIT: usize = 2_000;
const WITNESS_STEP_BUDGET: u64 = 5_000_000;

/// Recognizes a two-terminal DSP and returns its decomposition tree.
///
/// Inner vertices with in- and out-degree one are contracted in ascending id
/// order; parallel edges are merged as soon as they appear, the older one
/// becoming the left child.
pub fn recognize_dsp(g: &DirectedGraph) -> Result<DecompositionTree, DspError> {
    if g.m() == 0 {
        return Err(DspError::Edgeless);
    }
    if let Some(cycle) = g.find_cycle() {
        return Err(DspError::NotDsp(NotDspWitness::Cyclic(cycle)));
    }
    let sources = g.sources();
    if sources.len() > 1 {
        return Err(DspError::NotDsp(NotDspWitness::MultipleSources(sources)));
    }
    let sinks = g.sinks();
    if sinks.len() > 1 {
        return Err(DspError::NotDsp(NotDspWitness::MultipleSinks(sinks)));
    }
    let (source, sink) = (sources[0], sinks[0]);

    let mut work = Reduction::new(g);
    let mut queue: BTreeSet<usize> = (0..g.n())
        .filter(|&v| v != source && v != sink && work.indeg[v] == 1 && work.outdeg[v] == 1)
        .collect();
    while let Some(x) = queue.pop_first() {
        if work.indeg[x] != 1 || work.outdeg[x] != 1 {
            continue;
        }
        let (y, z) = work.contract(x);
        for v in [y, z] {
            if v != source && v != sink && work.indeg[v] == 1 && work.outdeg[v] == 1 {
                queue.insert(v);
            }
        }
    }
    if work.alive != 1 {
        let witness = if g.m() <= WITNESS_EDGE_LIMIT {
            search_w_subdivision(g, WITNESS_STEP_BUDGET).ok().flatten()
        } else {
            None
        };
        return Err(DspError::NotDsp(NotDspWitness::WSubdivision(witness)));
    }
    let root = work.nodes.len() - 1;
    debug_assert_eq!((work.nodes[root].source, work.nodes[root].sink), (source, sink));
    Ok(DecompositionTree::from_nodes(work.nodes, root, g.m()))
}

/// Multigraph workspace for the reductions. Virtual edges carry the tree
/// node they stand for.
struct Reduction {
    nodes: Vec<TreeNode>,
    // (tail, head, node, alive)
    vedges: Vec<(usize, usize, usize, bool)>,
    out_list: Vec<Vec<usize>>,
    in_list: Vec<Vec<usize>>,
    indeg: Vec<usize>,
    outdeg: Vec<usize>,
    between: HashMap<(usize, usize), usize>,
    alive: usize,
}

impl Reduction {
    fn new(g: &DirectedGraph) -> Self {
        let mut work = Reduction {
            nodes: Vec::with_capacity(2 * g.m()),
            vedges: Vec::with_capacity(2 * g.m()),
            out_list: vec![Vec::new(); g.n()],
            in_list: vec![Vec::new(); g.n()],
            indeg: vec![0; g.n()],
            outdeg: vec![0; g.n()],
            between: HashMap::with_capacity(g.m()),
            alive: 0,
        };
        for (e, &(u, v)) in g.edges().iter().enumerate() {
            let node = work.push_node(NodeKind::Leaf(e), u, v, 1);
            work.add_vedge(u, v, node);
        }
        work
    }

    fn push_node(&mut self, kind: NodeKind, source: usize, sink: usize, cap_full: u64) -> usize {
        self.nodes.push(TreeNode {
            kind,
            source,
            sink,
            cap_full,
        });
        self.nodes.len() - 1
    }

    fn add_vedge(&mut self, u: usize, v: usize, node: usize) {
        let id = self.vedges.len();
        self.vedges.push((u, v, node, true));
        self.out_list[u].push(id);
        self.in_list[v].push(id);
        self.outdeg[u] += 1;
        self.indeg[v] += 1;
        self.alive += 1;
        self.between.insert((u, v), id);
    }

    fn kill(&mut self, id: usize) {
        let (u, v, _, _) = self.vedges[id];
        self.vedges[id].3 = false;
        self.outdeg[u] -= 1;
        self.indeg[v] -= 1;
        self.alive -= 1;
        if self.between.get(&(u, v)) == Some(&id) {
            self.between.remove(&(u, v));
        }
    }

    /// Series-contracts `x` and merges the result with an existing parallel
    /// edge. Returns the new edge's endpoints.
    fn contract(&mut self, x: usize) -> (usize, usize) {
        let a = *self.in_list[x].iter().find(|&&i| self.vedges[i].3).unwrap();
        let b = *self.out_list[x].iter().find(|&&i| self.vedges[i].3).unwrap();
        let (y, _, left, _) = self.vedges[a];
        let (_, z, right, _) = self.vedges[b];
        self.kill(a);
        self.kill(b);
        let cap = self.nodes[left].cap_full.min(self.nodes[right].cap_full);
        let mut node = self.push_node(NodeKind::Series(left, right), y, z, cap);
        if let Some(&old) = self.between.get(&(y, z)) {
            let older = self.vedges[old].2;
            self.kill(old);
            let cap = self.nodes[older].cap_full + self.nodes[node].cap_full;
            node = self.push_node(NodeKind::Parallel(older, node), y, z, cap);
        }
        self.add_vedge(y, z, node);
        (y, z)
    }
}

impl DecompositionTree {
    fn from_nodes(nodes: Vec<TreeNode>, root: usize, m: usize) -> Self {
        let mut parent = vec![None; nodes.len()];
        let mut leaf_of_edge = vec![usize::MAX; m];
        for (i, node) in nodes.iter().enumerate() {
            match node.kind {
                NodeKind::Leaf(e) => leaf_of_edge[e] = i,
                NodeKind::Series(l, r) | NodeKind::Parallel(l, r) => {
                    parent[l] = Some(i);
                    parent[r] = Some(i);
                }
            }
        }
        DecompositionTree {
            nodes,
            parent,
            root,
            leaf_of_edge,
        }
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn node(&self, i: usize) -> &TreeNode {
        &self.nodes[i]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn parent(&self, i: usize) -> Option<usize> {
        self.parent[i]
    }

    pub fn leaf_of_edge(&self, e: usize) -> usize {
        self.leaf_of_edge[e]
    }

    pub fn terminals(&self) -> (usize, usize) {
        let r = &self.nodes[self.root];
        (r.source, r.sink)
    }

    pub fn children(&self, i: usize) -> Option<(usize, usize)> {
        match self.nodes[i].kind {
            NodeKind::Leaf(_) => None,
            NodeKind::Series(l, r) | NodeKind::Parallel(l, r) => Some((l, r)),
        }
    }

    /// Children before parents.
    pub fn post_order(&self) -> Vec<usize> {
        let mut order = Vec::with_capacity(self.nodes.len());
        let mut stack = vec![(self.root, false)];
        while let Some((i, expanded)) = stack.pop() {
            match self.children(i) {
                Some((l, r)) if !expanded => {
                    stack.push((i, true));
                    stack.push((r, false));
                    stack.push((l, false));
                }
                _ => order.push(i),
            }
        }
        order
    }

    /// Edge indices of the leaves below `i`, left to right.
    pub fn leaves_under(&self, i: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![i];
        while let Some(x) = stack.pop() {
            match self.nodes[x].kind {
                NodeKind::Leaf(e) => out.push(e),
                NodeKind::Series(l, r) | NodeKind::Parallel(l, r) => {
                    stack.push(r);
                    stack.push(l);
                }
            }
        }
        out
    }

    /// Checks the structural invariants against the host graph.
    pub fn validate(&self, g: &DirectedGraph) -> Result<(), String> {
        let mut seen_leaf = vec![false; g.m()];
        for i in self.post_order() {
            let n = &self.nodes[i];
            match n.kind {
                NodeKind::Leaf(e) => {
                    if g.edge(e) != (n.source, n.sink) || n.cap_full != 1 {
                        return Err(format!("leaf {i} does not match edge {e}"));
                    }
                    if std::mem::replace(&mut seen_leaf[e], true) {
                        return Err(format!("edge {e} appears twice"));
                    }
                }
                NodeKind::Series(l, r) => {
                    let (a, b) = (&self.nodes[l], &self.nodes[r]);
                    if a.source != n.source || a.sink != b.source || b.sink != n.sink {
                        return Err(format!("series node {i} has mismatched terminals"));
                    }
                    if n.cap_full != a.cap_full.min(b.cap_full) {
                        return Err(format!("series node {i} has wrong capacity"));
                    }
                }
                NodeKind::Parallel(l, r) => {
                    let (a, b) = (&self.nodes[l], &self.nodes[r]);
                    if (a.source, a.sink) != (n.source, n.sink) || (b.source, b.sink) != (n.source, n.sink) {
                        return Err(format!("parallel node {i} has mismatched terminals"));
                    }
                    if n.cap_full != a.cap_full + b.cap_full {
                        return Err(format!("parallel node {i} has wrong capacity"));
                    }
                }
            }
        }
        if seen_leaf.iter().any(|&s| !s) {
            return Err("some edge has no leaf".into());
        }
        Ok(())
    }

    /// The leaf child of a parallel node whose edge joins the node's own
    /// terminals, if any.
    pub fn terminal_leaf_child(&self, i: usize) -> Option<usize> {
        let n = &self.nodes[i];
        let NodeKind::Parallel(l, r) = n.kind else {
            return None;
        };
        [l, r].into_iter().find(|&c| matches!(self.nodes[c].kind, NodeKind::Leaf(_)))
    }

    /// True when every terminal edge sits directly below the topmost node of
    /// its chain of parallel compositions.
    pub fn is_clean(&self) -> bool {
        (0..self.nodes.len()).all(|i| {
            !matches!(self.nodes[i].kind, NodeKind::Leaf(_))
                || self.topmost_parallel(i).is_none_or(|top| self.parent[i] == Some(top))
        })
    }

    fn topmost_parallel(&self, leaf: usize) -> Option<usize> {
        let mut top = None;
        let mut x = leaf;
        while let Some(p) = self.parent[x] {
            if !matches!(self.nodes[p].kind, NodeKind::Parallel(..)) {
                break;
            }
            top = Some(p);
            x = p;
        }
        top
    }

    /// Moves every leaf that sits in a chain of parallel compositions up to
    /// the topmost node of that chain, swapping it with the sibling subtree
    /// found there.
    pub fn make_clean(&self) -> DecompositionTree {
        let mut t = self.clone();
        for i in self.post_order() {
            if !matches!(t.nodes[i].kind, NodeKind::Leaf(_)) {
                continue;
            }
            let Some(top) = t.topmost_parallel(i) else {
                continue;
            };
            let p = t.parent[i].unwrap();
            if p == top {
                continue;
            }
            // the child of `top` on the way up from the leaf
            let mut on_path = p;
            while t.parent[on_path] != Some(top) {
                on_path = t.parent[on_path].unwrap();
            }
            let (tl, tr) = t.children(top).unwrap();
            let gamma = if tl == on_path { tr } else { tl };
            t.replace_child(top, gamma, i);
            t.replace_child(p, i, gamma);
            let mut x = p;
            while x != top {
                let (l, r) = t.children(x).unwrap();
                t.nodes[x].cap_full = t.nodes[l].cap_full + t.nodes[r].cap_full;
                x = t.parent[x].unwrap();
            }
        }
        t
    }

    fn replace_child(&mut self, at: usize, old: usize, new: usize) {
        let swap = |c: &mut usize| {
            if *c == old {
                *c = new;
            }
        };
        match &mut self.nodes[at].kind {
            NodeKind::Series(l, r) | NodeKind::Parallel(l, r) => {
                swap(l);
                swap(r);
            }
            NodeKind::Leaf(_) => unreachable!("leaves have no children"),
        }
        self.parent[new] = Some(at);
    }

    /// Capacity of every node using only the `selected` leaves: leaf 1 or 0,
    /// series minimum, parallel sum. Indexed like the nodes.
    pub fn fold_capacity(&self, selected: &EdgeSet) -> Vec<u64> {
        let mut cap = vec![0u64; self.nodes.len()];
        for i in self.post_order() {
            cap[i] = match self.nodes[i].kind {
                NodeKind::Leaf(e) => selected.contains(e) as u64,
                NodeKind::Series(l, r) => cap[l].min(cap[r]),
                NodeKind::Parallel(l, r) => cap[l] + cap[r],
            };
        }
        cap
    }

    /// Indented text dump, one node per line.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        let mut stack = vec![(self.root, 0usize)];
        while let Some((i, depth)) = stack.pop() {
            let n = &self.nodes[i];
            let indent = "  ".repeat(depth);
            let kind = match n.kind {
                NodeKind::Leaf(e) => format!("edge {e}"),
                NodeKind::Series(..) => "S".to_string(),
                NodeKind::Parallel(..) => "P".to_string(),
            };
            writeln!(out, "{indent}{kind} {}->{} cap={}", n.source, n.sink, n.cap_full).unwrap();
            if let Some((l, r)) = self.children(i) {
                stack.push((r, depth + 1));
                stack.push((l, depth + 1));
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("search budget of {0} steps exhausted")]
pub struct BudgetExceeded(pub u64);

/// Exhaustive search for a subdivision of `W`. Branch quadruples are tried in
/// lexicographic order and the first one that admits a path system wins.
pub fn search_w_subdivision(
    g: &DirectedGraph,
    budget: u64,
) -> Result<Option<WSubdivision>, BudgetExceeded> {
    let reach: Vec<FixedBitSet> = (0..g.n()).map(|v| g.reachable_from(v)).collect();
    let mut search = WSearch {
        g,
        reach: &reach,
        used: vec![false; g.n()],
        paths: Default::default(),
        steps: 0,
        budget,
    };
    let n = g.n();
    let out = |v: usize| g.out_degree(v);
    let inn = |v: usize| g.in_degree(v);
    for a in (0..n).filter(|&a| out(a) >= 2) {
        for b in reach[a].ones().filter(|&b| b != a && out(b) >= 2) {
            for c in reach[b].ones().filter(|&c| c != b && c != a && inn(c) >= 2 && out(c) >= 1) {
                if !reach[a].contains(c) {
                    continue;
                }
                for d in reach[c].ones().filter(|&d| d != a && d != b && d != c && inn(d) >= 2) {
                    if !reach[b].contains(d) {
                        continue;
                    }
                    let quad = [a, b, c, d];
                    for x in quad {
                        search.used[x] = true;
                    }
                    let found = search.route(0, quad)?;
                    for x in quad {
                        search.used[x] = false;
                    }
                    if found {
                        return Ok(Some(WSubdivision {
                            branch: quad,
                            paths: search.paths,
                        }));
                    }
                }
            }
        }
    }
    Ok(None)
}

struct WSearch<'a> {
    g: &'a DirectedGraph,
    reach: &'a [FixedBitSet],
    used: Vec<bool>,
    paths: [Vec<usize>; 5],
    steps: u64,
    budget: u64,
}

impl WSearch<'_> {
    fn route(&mut self, k: usize, quad: [usize; 4]) -> Result<bool, BudgetExceeded> {
        if k == 5 {
            return Ok(true);
        }
        let (i, j) = W_PATH_ENDS[k];
        self.extend(k, quad[i], quad[j], quad)
    }

    fn extend(&mut self, k: usize, at: usize, to: usize, quad: [usize; 4]) -> Result<bool, BudgetExceeded> {
        let g = self.g;
        for &e in g.out_edges(at) {
            self.steps += 1;
            if self.steps > self.budget {
                return Err(BudgetExceeded(self.budget));
            }
            let w = g.edge(e).1;
            if w == to {
                self.paths[k].push(e);
                if self.route(k + 1, quad)? {
                    return Ok(true);
                }
                self.paths[k].pop();
                continue;
            }
            if self.used[w] || !self.reach[w].contains(to) {
                continue;
            }
            self.used[w] = true;
            self.paths[k].push(e);
            if self.extend(k, w, to, quad)? {
                return Ok(true);
            }
            self.paths[k].pop();
            self.used[w] = false;
        }
        Ok(false)
    }
}
