//! Laminar series-parallel graphs.
//!
//! `P_G(u, v)` is the set of edges lying on at least one simple `u`-`v` path.
//! A graph is an LSP when every nonempty `P_G(s, t)` is an `s`-`t` DSP (P1)
//! and the sets `P_G(e)` over all edges form a laminar family (P2).
//!
//! Most work is done per biconnected block of the shadow: the edge-apex set of
//! an edge never leaves the edge's block, and a simple path between two
//! vertices of one block never leaves that block.

use std::collections::VecDeque;

use rayon::prelude::*;
use thiserror::Error;

use crate::graph::{DirectedGraph, EdgeSet};
pub use crate::spdecomp::BudgetExceeded;
use crate::spdecomp::{recognize_dsp, search_w_subdivision, WSubdivision};

/// Default step budget for simple-path searches.
pub const DEFAULT_STEP_BUDGET: u64 = 50_000_000;

/// A P1 violation forces an id-order rescan of the whole graph to report the
/// first failing pair; above this many vertices the first failing pair inside
/// a block is reported instead.
const FULL_RESCAN_LIMIT: usize = 200;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LspVerdict {
    pub is_lsp: bool,
    /// First `(s, t)` whose path-induced subgraph is nonempty and not a DSP.
    pub p1_witness: Option<(usize, usize)>,
    /// First edge pair whose apex sets overlap without nesting.
    pub p2_witness: Option<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LspError {
    #[error("not a laminar series-parallel graph (P1 witness {:?}, P2 witness {:?})", .0.p1_witness, .0.p2_witness)]
    NotLsp(LspVerdict),
    #[error(transparent)]
    Budget(#[from] BudgetExceeded),
}

/// `P_G(u, v)`; empty when `u == v` or `v` is unreachable.
pub fn path_induced(g: &DirectedGraph, u: usize, v: usize) -> Result<EdgeSet, BudgetExceeded> {
    path_induced_with_budget(g, u, v, DEFAULT_STEP_BUDGET)
}

/// Exact `P_G(u, v)`.
///
/// An edge between two strongly connected components is on a simple `u`-`v`
/// path iff its tail is reachable from `u` and `v` is reachable from its head.
/// Edges inside a component are found by enumerating simple paths inside the
/// component from its entry points to its exit points.
pub fn path_induced_with_budget(
    g: &DirectedGraph,
    u: usize,
    v: usize,
    budget: u64,
) -> Result<EdgeSet, BudgetExceeded> {
    let mut out = g.empty_edge_set();
    if u == v {
        return Ok(out);
    }
    let fwd = g.reachable_from(u);
    if !fwd.contains(v) {
        return Ok(out);
    }
    let bwd = g.reaching(v);
    let (comp, n_comp) = g.strongly_connected_components();
    let mut members = vec![Vec::new(); n_comp];
    for x in 0..g.n() {
        members[comp[x]].push(x);
    }
    for (e, &(x, y)) in g.edges().iter().enumerate() {
        if comp[x] != comp[y] && fwd.contains(x) && bwd.contains(y) {
            out.insert(e);
        }
    }
    let mut walker = InnerWalker::new(g, &comp, budget);
    for (c, verts) in members.iter().enumerate() {
        let x = verts[0];
        if verts.len() < 2 || !fwd.contains(x) || !bwd.contains(x) {
            continue;
        }
        let entries: Vec<usize> = if comp[u] == c {
            vec![u]
        } else {
            verts
                .iter()
                .copied()
                .filter(|&p| {
                    g.in_edges(p).iter().any(|&e| {
                        let w = g.edge(e).0;
                        comp[w] != c && fwd.contains(w)
                    })
                })
                .collect()
        };
        let exits: Vec<usize> = if comp[v] == c {
            vec![v]
        } else {
            verts
                .iter()
                .copied()
                .filter(|&q| {
                    g.out_edges(q).iter().any(|&e| {
                        let w = g.edge(e).1;
                        comp[w] != c && bwd.contains(w)
                    })
                })
                .collect()
        };
        walker.mark_component(c, verts, &entries, &exits, &mut out)?;
    }
    Ok(out)
}

/// Simple-path enumeration restricted to one strongly connected component.
struct InnerWalker<'a> {
    g: &'a DirectedGraph,
    comp: &'a [usize],
    on_path: Vec<bool>,
    is_exit: Vec<bool>,
    seen: Vec<u32>,
    stamp: u32,
    steps: u64,
    budget: u64,
}

impl<'a> InnerWalker<'a> {
    fn new(g: &'a DirectedGraph, comp: &'a [usize], budget: u64) -> Self {
        InnerWalker {
            g,
            comp,
            on_path: vec![false; g.n()],
            is_exit: vec![false; g.n()],
            seen: vec![0; g.n()],
            stamp: 0,
            steps: 0,
            budget,
        }
    }

    fn mark_component(
        &mut self,
        c: usize,
        verts: &[usize],
        entries: &[usize],
        exits: &[usize],
        out: &mut EdgeSet,
    ) -> Result<(), BudgetExceeded> {
        let g = self.g;
        let inner = |e: usize| {
            let (x, y) = g.edge(e);
            self.comp[x] == c && self.comp[y] == c
        };
        let mut unmarked = verts
            .iter()
            .flat_map(|&x| g.out_edges(x))
            .filter(|&&e| inner(e) && !out.contains(e))
            .count();
        for &q in exits {
            self.is_exit[q] = true;
        }
        let mut path: Vec<usize> = Vec::new();
        for &p in entries {
            if unmarked == 0 {
                break;
            }
            self.on_path[p] = true;
            let mut frames = vec![(p, 0usize)];
            while let Some(&mut (x, ref mut pos)) = frames.last_mut() {
                let Some(&e) = g.out_edges(x).get(*pos) else {
                    frames.pop();
                    self.on_path[x] = false;
                    path.pop();
                    continue;
                };
                *pos += 1;
                let y = g.edge(e).1;
                if self.comp[y] != c || self.on_path[y] {
                    continue;
                }
                self.steps += 1;
                if self.steps > self.budget {
                    return Err(BudgetExceeded(self.budget));
                }
                let carried = !out.contains(e) || path.iter().rev().any(|&f| !out.contains(f));
                if !self.promising(c, y, carried, out) {
                    continue;
                }
                self.on_path[y] = true;
                path.push(e);
                frames.push((y, 0));
                if self.is_exit[y] {
                    for &f in &path {
                        if !out.contains(f) {
                            out.insert(f);
                            unmarked -= 1;
                        }
                    }
                    if unmarked == 0 {
                        for &(z, _) in &frames {
                            self.on_path[z] = false;
                        }
                        path.clear();
                        break;
                    }
                }
            }
        }
        for &q in exits {
            self.is_exit[q] = false;
        }
        Ok(())
    }

    /// Whether stepping into `y` can still reach an exit and mark something
    /// new; `carried` says the path so far, including the step, already has
    /// an unmarked edge.
    fn promising(&mut self, c: usize, y: usize, carried: bool, out: &EdgeSet) -> bool {
        let g = self.g;
        self.stamp = self.stamp.wrapping_add(1);
        if self.stamp == 0 {
            self.seen.fill(0);
            self.stamp = 1;
        }
        let stamp = self.stamp;
        let mut queue = VecDeque::from([y]);
        self.seen[y] = stamp;
        let mut exit_found = false;
        let mut fresh = carried;
        while let Some(x) = queue.pop_front() {
            exit_found |= self.is_exit[x];
            for &f in g.out_edges(x) {
                let z = g.edge(f).1;
                if self.comp[z] != c || self.on_path[z] {
                    continue;
                }
                fresh |= !out.contains(f);
                if self.seen[z] != stamp {
                    self.seen[z] = stamp;
                    queue.push_back(z);
                }
            }
            if exit_found && fresh {
                return true;
            }
        }
        exit_found && fresh
    }
}

/// `μ(e) = |P_G(e)|`.
pub fn mu(g: &DirectedGraph, e: usize) -> Result<usize, BudgetExceeded> {
    let (u, v) = g.edge(e);
    Ok(path_induced(g, u, v)?.len())
}

/// A biconnected block of the shadow as a standalone graph.
pub(crate) struct Block {
    pub graph: DirectedGraph,
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
}

/// Blocks ordered by smallest edge index.
pub(crate) fn blocks(g: &DirectedGraph) -> Vec<Block> {
    let (block_of, n_blocks) = g.edge_blocks();
    let mut members = vec![Vec::new(); n_blocks];
    for (e, &b) in block_of.iter().enumerate() {
        members[b].push(e);
    }
    members.sort_by_key(|edges| edges[0]);
    members
        .into_iter()
        .map(|edges| {
            let (graph, vertices, edges) = g.edge_induced(&EdgeSet::from_indices(g.m(), edges));
            Block {
                graph,
                vertices,
                edges,
            }
        })
        .collect()
}

fn lift(block: &Block, local: &EdgeSet, m: usize) -> EdgeSet {
    EdgeSet::from_indices(m, local.iter().map(|e| block.edges[e]))
}

/// `P_G(e)` and `μ(e)` for every edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EasFamily {
    pub sets: Vec<EdgeSet>,
    pub mu: Vec<usize>,
}

impl EasFamily {
    pub fn compute(g: &DirectedGraph) -> Result<Self, BudgetExceeded> {
        let per_block: Vec<Result<Vec<(usize, EdgeSet)>, BudgetExceeded>> = blocks(g)
            .par_iter()
            .map(|b| {
                (0..b.graph.m())
                    .map(|le| {
                        let (x, y) = b.graph.edge(le);
                        let local = path_induced(&b.graph, x, y)?;
                        Ok((b.edges[le], lift(b, &local, g.m())))
                    })
                    .collect()
            })
            .collect();
        let mut sets = vec![g.empty_edge_set(); g.m()];
        for block in per_block {
            for (e, set) in block? {
                sets[e] = set;
            }
        }
        let mu = sets.iter().map(EdgeSet::len).collect();
        Ok(EasFamily { sets, mu })
    }

    /// First pair `(e1, e2)`, `e1 < e2`, whose sets are neither nested nor
    /// disjoint.
    pub fn first_overlap(&self) -> Option<(usize, usize)> {
        let m = self.sets.len();
        // only sets sharing an edge can overlap
        let mut containing = vec![Vec::new(); m];
        for (a, set) in self.sets.iter().enumerate() {
            for f in set.iter() {
                containing[f].push(a);
            }
        }
        (0..m)
            .into_par_iter()
            .filter_map(|a| {
                let mut candidates: Vec<usize> = self.sets[a]
                    .iter()
                    .flat_map(|f| containing[f].iter().copied())
                    .filter(|&b| b > a)
                    .collect();
                candidates.sort_unstable();
                candidates.dedup();
                candidates
                    .into_iter()
                    .find(|&b| !laminar_pair(&self.sets[a], &self.sets[b]))
                    .map(|b| (a, b))
            })
            .min()
    }
}

fn laminar_pair(a: &EdgeSet, b: &EdgeSet) -> bool {
    a.is_disjoint(b) || a.is_subset(b) || b.is_subset(a)
}

/// Whether `P_G(s, t)` is empty or an `s`-`t` DSP.
fn pair_ok(g: &DirectedGraph, s: usize, t: usize) -> Result<bool, BudgetExceeded> {
    let set = path_induced(g, s, t)?;
    if set.is_empty() {
        return Ok(true);
    }
    let (sub, vertices, _) = g.edge_induced(&set);
    Ok(match recognize_dsp(&sub) {
        Ok(tree) => {
            let (a, b) = tree.terminals();
            debug_assert_eq!((vertices[a], vertices[b]), (s, t));
            true
        }
        Err(_) => false,
    })
}

/// First failing pair of `g` scanning all ordered pairs in id order.
fn first_p1_failure(g: &DirectedGraph) -> Result<Option<(usize, usize)>, BudgetExceeded> {
    for s in 0..g.n() {
        for t in g.reachable_from(s).ones() {
            if t != s && !pair_ok(g, s, t)? {
                return Ok(Some((s, t)));
            }
        }
    }
    Ok(None)
}

/// Property P1. Returns the first failing pair, if any.
pub fn check_p1(g: &DirectedGraph) -> Result<Option<(usize, usize)>, BudgetExceeded> {
    let per_block: Vec<Result<Option<(usize, usize)>, BudgetExceeded>> = blocks(g)
        .par_iter()
        .map(|b| Ok(first_p1_failure(&b.graph)?.map(|(s, t)| (b.vertices[s], b.vertices[t]))))
        .collect();
    let mut first = None;
    for r in per_block {
        first = match (first, r?) {
            (None, x) | (x, None) => x,
            (Some(a), Some(b)) => Some(a.min(b)),
        };
    }
    if first.is_some() && g.n() <= FULL_RESCAN_LIMIT {
        return first_p1_failure(g);
    }
    Ok(first)
}

/// Property P2. Returns the first overlapping edge pair, if any.
pub fn check_p2(g: &DirectedGraph) -> Result<Option<(usize, usize)>, BudgetExceeded> {
    Ok(EasFamily::compute(g)?.first_overlap())
}

pub fn is_lsp(g: &DirectedGraph) -> Result<LspVerdict, BudgetExceeded> {
    Ok(analyze(g)?.0)
}

/// The verdict together with the apex-set family it was computed from.
pub fn analyze(g: &DirectedGraph) -> Result<(LspVerdict, EasFamily), BudgetExceeded> {
    let p1_witness = check_p1(g)?;
    let family = EasFamily::compute(g)?;
    let p2_witness = family.first_overlap();
    let verdict = LspVerdict {
        is_lsp: p1_witness.is_none() && p2_witness.is_none(),
        p1_witness,
        p2_witness,
    };
    Ok((verdict, family))
}

/// The maximal edge-apex sets, ordered by smallest edge index.
pub fn meas_partition(g: &DirectedGraph) -> Result<Vec<EdgeSet>, LspError> {
    let (verdict, family) = analyze(g)?;
    if !verdict.is_lsp {
        return Err(LspError::NotLsp(verdict));
    }
    Ok(maximal_sets(&family))
}

pub(crate) fn maximal_sets(family: &EasFamily) -> Vec<EdgeSet> {
    let m = family.sets.len();
    let mut out: Vec<EdgeSet> = (0..m)
        .filter(|&a| {
            let sa = &family.sets[a];
            !(0..m).any(|b| {
                let sb = &family.sets[b];
                b != a && sa.is_subset(sb) && (sa != sb || b < a)
            })
        })
        .map(|a| family.sets[a].clone())
        .collect();
    out.sort_by_key(|s| s.iter().next());
    out
}

/// Replaces edge `i = (u, v)` by `(u, n + i)` and `(n + i, v)`, at indices
/// `2i` and `2i + 1`.
pub fn subdivide(g: &DirectedGraph) -> DirectedGraph {
    let n = g.n();
    let edges = g
        .edges()
        .iter()
        .enumerate()
        .flat_map(|(i, &(u, v))| [(u, n + i), (n + i, v)])
        .collect();
    DirectedGraph::new(n + g.m(), edges).expect("subdivision of a simple graph is simple")
}

/// Searches every block for a subdivision of `W`; the lexicographically
/// smallest branch quadruple over all blocks wins.
pub fn find_w_subdivision(g: &DirectedGraph) -> Result<Option<WSubdivision>, BudgetExceeded> {
    find_w_subdivision_with_budget(g, DEFAULT_STEP_BUDGET)
}

pub fn find_w_subdivision_with_budget(
    g: &DirectedGraph,
    budget: u64,
) -> Result<Option<WSubdivision>, BudgetExceeded> {
    let found: Vec<Result<Option<WSubdivision>, BudgetExceeded>> = blocks(g)
        .par_iter()
        .map(|b| Ok(search_w_subdivision(&b.graph, budget)?.map(|w| w.map_into(&b.vertices, &b.edges))))
        .collect();
    let mut best: Option<WSubdivision> = None;
    for w in found {
        if let Some(w) = w? {
            if best.as_ref().is_none_or(|b| w.branch < b.branch) {
                best = Some(w);
            }
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_edge_list;

    #[test]
    fn path_reaching_the_exit_over_a_marked_edge() {
        // 2-4-1-3-0-5 ends on 0->5, already marked by 2-0-5
        let g = DirectedGraph::new(
            6,
            vec![(2, 0), (4, 1), (5, 2), (1, 3), (2, 5), (0, 2), (2, 4), (3, 0), (4, 2), (0, 5)],
        )
        .unwrap();
        assert_eq!(path_induced(&g, 2, 5).unwrap().to_vec(), vec![0, 1, 3, 4, 6, 7, 9]);
        assert_eq!(check_p1(&g).unwrap(), Some((4, 5)));
    }

    fn w_graph() -> DirectedGraph {
        parse_edge_list("4 5\n0 1\n0 2\n1 3\n2 3\n1 2").unwrap()
    }

    fn cycle(n: usize) -> DirectedGraph {
        DirectedGraph::new(n, (0..n).map(|i| (i, (i + 1) % n)).collect()).unwrap()
    }

    fn triangle_chord() -> DirectedGraph {
        DirectedGraph::new(3, vec![(0, 1), (1, 2), (0, 2)]).unwrap()
    }

    fn w_extended() -> DirectedGraph {
        DirectedGraph::new(
            6,
            vec![(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (0, 2), (0, 3), (2, 5), (3, 5)],
        )
        .unwrap()
    }

    #[test]
    fn path_induced_examples() {
        assert_eq!(path_induced(&cycle(4), 0, 2).unwrap().to_vec(), vec![0, 1]);
        assert_eq!(path_induced(&w_graph(), 0, 3).unwrap().len(), 5);
        assert_eq!(path_induced(&triangle_chord(), 0, 2).unwrap().len(), 3);
        assert!(path_induced(&triangle_chord(), 2, 0).unwrap().is_empty());
    }

    #[test]
    fn mu_examples() {
        let c = cycle(5);
        for e in 0..5 {
            assert_eq!(mu(&c, e).unwrap(), 1);
        }
        assert_eq!(mu(&triangle_chord(), 2).unwrap(), 3);
        // s -> t on the extended W: the only simple s-t path is the edge
        assert_eq!(mu(&w_extended(), 2).unwrap(), 1);
    }

    #[test]
    fn p1_examples() {
        assert_eq!(check_p1(&w_graph()).unwrap(), Some((0, 3)));
        assert_eq!(check_p1(&triangle_chord()).unwrap(), None);
        assert_eq!(check_p1(&cycle(4)).unwrap(), None);
        assert_eq!(check_p1(&w_extended()).unwrap(), Some((0, 5)));
    }

    #[test]
    fn p2_examples() {
        assert_eq!(check_p2(&subdivide(&w_graph())).unwrap(), None);
        // W: P(0->2) = {0->2, 0->1, 1->2} overlaps P(1->3) = {1->3, 1->2, 2->3}
        assert_eq!(check_p2(&w_graph()).unwrap(), Some((1, 2)));
    }

    #[test]
    fn verdicts() {
        let v = is_lsp(&w_graph()).unwrap();
        assert!(!v.is_lsp);
        assert!(v.p1_witness.is_some());
        let v = is_lsp(&triangle_chord()).unwrap();
        assert_eq!(
            v,
            LspVerdict {
                is_lsp: true,
                p1_witness: None,
                p2_witness: None
            }
        );
    }

    #[test]
    fn meas_examples() {
        let dsp = meas_partition(&triangle_chord()).unwrap();
        assert_eq!(dsp.len(), 1);
        assert_eq!(dsp[0].len(), 3);
        let c = meas_partition(&cycle(4)).unwrap();
        assert_eq!(c.iter().map(|s| s.to_vec()).collect::<Vec<_>>(), vec![vec![0], vec![1], vec![2], vec![3]]);
        assert!(matches!(meas_partition(&w_graph()), Err(LspError::NotLsp(_))));
    }

    #[test]
    fn subdivide_examples() {
        let single = subdivide(&parse_edge_list("2 1\n0 1").unwrap());
        assert_eq!(single.edges(), &[(0, 2), (2, 1)]);
        let w = subdivide(&w_graph());
        assert_eq!((w.n(), w.m()), (9, 10));
        let hex = subdivide(&cycle(3));
        assert_eq!((hex.n(), hex.m()), (6, 6));
        assert!(hex.is_strongly_connected());
    }

    #[test]
    fn w_search_examples() {
        let w = find_w_subdivision(&w_graph()).unwrap().unwrap();
        assert_eq!(w.branch, [0, 1, 2, 3]);
        assert_eq!(w.edges(5).len(), 5);
        assert!(find_w_subdivision(&triangle_chord()).unwrap().is_none());
        let f = w_extended();
        let w = find_w_subdivision(&f).unwrap().unwrap();
        assert!(w.is_valid_in(&f));
    }

    #[test]
    fn path_induced_with_cycle_inside() {
        // 0 -> 1 <-> 2 -> 3 plus 1 -> 3: the 2-cycle sits between the ends,
        // but 2 -> 1 never lies on a simple 0-3 path
        let g = DirectedGraph::new(4, vec![(0, 1), (1, 2), (2, 1), (2, 3), (1, 3)]).unwrap();
        assert_eq!(path_induced(&g, 0, 3).unwrap().to_vec(), vec![0, 1, 3, 4]);
        // from 2 to 3: 2 -> 3 and 2 -> 1 -> 3
        assert_eq!(path_induced(&g, 2, 3).unwrap().to_vec(), vec![2, 3, 4]);
        // from 1 to 2 only the edge itself
        assert_eq!(path_induced(&g, 1, 2).unwrap().to_vec(), vec![1]);
    }
}
