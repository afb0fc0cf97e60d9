//! Instance generators: the Set-Cover reduction, random DSPs and LSPs, and the
//! named fixtures.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::flow::{check_all_pairs, max_flow_value, RetentionRatio};
use crate::graph::{DirectedGraph, EdgeSet};
use crate::lsp::is_lsp;
use crate::oracle::brute_force_set_cover;
use crate::spdecomp::recognize_dsp;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("set {0} is empty")]
    EmptySet(usize),
    #[error("set {set} contains item {item} outside the universe")]
    ItemOutOfRange { set: usize, item: usize },
    #[error("item {0} is in no set")]
    Uncovered(usize),
    #[error("p must be at least 1")]
    ZeroP,
    #[error("set index {0} out of range")]
    NoSuchSet(usize),
    #[error("the chosen sets miss item {0}")]
    NotACover(usize),
    #[error("edge set is not feasible for the reduction graph")]
    Infeasible,
}

/// A Set-Cover instance over items `0..universe`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetCoverInstance {
    universe: usize,
    sets: Vec<Vec<usize>>,
}

impl SetCoverInstance {
    /// Sets are sorted and deduplicated. Every set must be nonempty and every
    /// item must occur somewhere.
    pub fn new(universe: usize, sets: Vec<Vec<usize>>) -> Result<Self, ReductionError> {
        let mut clean = Vec::with_capacity(sets.len());
        for (i, mut s) in sets.into_iter().enumerate() {
            s.sort_unstable();
            s.dedup();
            if s.is_empty() {
                return Err(ReductionError::EmptySet(i));
            }
            if let Some(&item) = s.iter().find(|&&u| u >= universe) {
                return Err(ReductionError::ItemOutOfRange { set: i, item });
            }
            clean.push(s);
        }
        let sc = SetCoverInstance {
            universe,
            sets: clean,
        };
        if let Some(u) = sc.frequencies().iter().position(|&f| f == 0) {
            return Err(ReductionError::Uncovered(u));
        }
        Ok(sc)
    }

    /// `U = {a, b, c, d}`, `S = {{a, b, c}, {c, d}, {b, c}}`.
    pub fn four_items() -> Self {
        SetCoverInstance::new(4, vec![vec![0, 1, 2], vec![2, 3], vec![1, 2]]).unwrap()
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn sets(&self) -> &[Vec<usize>] {
        &self.sets
    }

    /// `f(u)`: number of sets containing `u`.
    pub fn frequencies(&self) -> Vec<usize> {
        let mut f = vec![0; self.universe];
        for s in &self.sets {
            for &u in s {
                f[u] += 1;
            }
        }
        f
    }

    pub fn max_frequency(&self) -> usize {
        self.frequencies().into_iter().max().unwrap_or(0)
    }

    /// Total number of (item, set) incidences.
    pub fn incidences(&self) -> usize {
        self.sets.iter().map(Vec::len).sum()
    }

    pub fn is_cover(&self, chosen: &[usize]) -> Result<(), ReductionError> {
        let mut covered = vec![false; self.universe];
        for &i in chosen {
            let s = self.sets.get(i).ok_or(ReductionError::NoSuchSet(i))?;
            s.iter().for_each(|&u| covered[u] = true);
        }
        match covered.iter().position(|&c| !c) {
            Some(u) => Err(ReductionError::NotACover(u)),
            None => Ok(()),
        }
    }

    /// A minimum cover, lexicographically first among minimum ones.
    pub fn brute_force_optimum(&self) -> Vec<usize> {
        brute_force_set_cover(self.universe, &self.sets).expect("validated instances have a cover")
    }

    /// Parses `"0,1,2;2,3;1,2"`.
    pub fn parse_sets(universe: usize, text: &str) -> Result<Self, String> {
        let sets = text
            .split(';')
            .map(|part| {
                part.split(',')
                    .map(|x| x.trim().parse::<usize>().map_err(|_| format!("bad item {x:?}")))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        SetCoverInstance::new(universe, sets).map_err(|e| e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VertexRole {
    Item(usize),
    /// Interior vertex of the `copy`-th length-2 path from an item to a set.
    Split { item: usize, set: usize, copy: usize },
    Set(usize),
    /// Interior vertex of the `copy`-th length-2 path from a set to the sink.
    SetSplit { set: usize, copy: usize },
    Sink,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeRole {
    /// On an item-to-set path.
    Universe,
    /// On a set-to-sink path of length two.
    SetToSink,
    /// `v_S t`.
    Green(usize),
    /// `v_u t`.
    Red(usize),
}

impl fmt::Display for EdgeRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EdgeRole::Universe => write!(f, "universe"),
            EdgeRole::SetToSink => write!(f, "set"),
            EdgeRole::Green(s) => write!(f, "green:{s}"),
            EdgeRole::Red(u) => write!(f, "red:{u}"),
        }
    }
}

/// The reduction graph with its role annotations.
#[derive(Debug, Clone)]
pub struct ReductionArtifact {
    pub instance: SetCoverInstance,
    pub p: usize,
    pub graph: DirectedGraph,
    pub alpha: RetentionRatio,
    pub vertex_roles: Vec<VertexRole>,
    pub edge_roles: Vec<EdgeRole>,
    pub item_vertex: Vec<usize>,
    pub set_vertex: Vec<usize>,
    pub sink: usize,
    /// Green edge of each set.
    pub green: Vec<usize>,
    /// Red edge of each item.
    pub red: Vec<usize>,
}

fn item_name(u: usize) -> String {
    if u < 26 {
        ((b'a' + u as u8) as char).to_string()
    } else {
        format!("u{u}")
    }
}

/// Builds the reduction graph for `α = p/(p+1)`: `p+1` length-2 paths from
/// each item to each set containing it, `p` length-2 paths plus a green edge
/// from each set to the sink, and a red edge from each item to the sink.
pub fn build_reduction(sc: &SetCoverInstance, p: usize) -> Result<ReductionArtifact, ReductionError> {
    if p == 0 {
        return Err(ReductionError::ZeroP);
    }
    let mut roles = Vec::new();
    let mut labels = Vec::new();
    let item_vertex: Vec<usize> = (0..sc.universe)
        .map(|u| {
            roles.push(VertexRole::Item(u));
            labels.push(format!("v_{}", item_name(u)));
            roles.len() - 1
        })
        .collect();
    // split vertices per incidence, allocated before the set vertices
    let mut splits = Vec::new();
    for (s, members) in sc.sets.iter().enumerate() {
        for &u in members {
            let ids: Vec<usize> = (0..=p)
                .map(|copy| {
                    roles.push(VertexRole::Split { item: u, set: s, copy });
                    labels.push(format!("x{copy}_{}_S{}", item_name(u), s + 1));
                    roles.len() - 1
                })
                .collect();
            splits.push((u, s, ids));
        }
    }
    let set_vertex: Vec<usize> = (0..sc.sets.len())
        .map(|s| {
            roles.push(VertexRole::Set(s));
            labels.push(format!("v_S{}", s + 1));
            roles.len() - 1
        })
        .collect();
    let set_splits: Vec<Vec<usize>> = (0..sc.sets.len())
        .map(|s| {
            (0..p)
                .map(|copy| {
                    roles.push(VertexRole::SetSplit { set: s, copy });
                    labels.push(format!("z{copy}_S{}", s + 1));
                    roles.len() - 1
                })
                .collect()
        })
        .collect();
    roles.push(VertexRole::Sink);
    labels.push("t".to_string());
    let sink = roles.len() - 1;

    let mut edges = Vec::new();
    let mut edge_roles = Vec::new();
    for (u, s, ids) in &splits {
        for &x in ids {
            edges.push((item_vertex[*u], x));
            edges.push((x, set_vertex[*s]));
            edge_roles.extend([EdgeRole::Universe; 2]);
        }
    }
    for (s, zs) in set_splits.iter().enumerate() {
        for &z in zs {
            edges.push((set_vertex[s], z));
            edges.push((z, sink));
            edge_roles.extend([EdgeRole::SetToSink; 2]);
        }
    }
    let mut green = Vec::new();
    for (s, &vs) in set_vertex.iter().enumerate() {
        green.push(edges.len());
        edges.push((vs, sink));
        edge_roles.push(EdgeRole::Green(s));
    }
    let mut red = Vec::new();
    for (u, &vu) in item_vertex.iter().enumerate() {
        red.push(edges.len());
        edges.push((vu, sink));
        edge_roles.push(EdgeRole::Red(u));
    }

    let n_sets = sc.sets.len();
    let incidences = sc.incidences();
    let graph = DirectedGraph::new(roles.len(), edges)
        .expect("reduction graph is simple")
        .with_labels(labels)
        .with_metadata("generator", "setcover")
        .with_metadata("p", p);
    assert_eq!(graph.n(), sc.universe + (p + 1) * incidences + n_sets + p * n_sets + 1);
    assert_eq!(graph.m(), 2 * (p + 1) * incidences + 2 * p * n_sets + n_sets + sc.universe);
    assert!(graph.is_acyclic());
    assert!(longest_path(&graph) <= 4);
    if p == 1 {
        let f = sc.frequencies();
        for u in 0..sc.universe {
            assert_eq!(max_flow_value(&graph, item_vertex[u], sink), 2 * f[u] as u64 + 1);
        }
    }
    Ok(ReductionArtifact {
        instance: sc.clone(),
        p,
        graph,
        alpha: RetentionRatio::new(p as u64, p as u64 + 1).unwrap(),
        vertex_roles: roles,
        edge_roles,
        item_vertex,
        set_vertex,
        sink,
        green,
        red,
    })
}

/// Number of edges on a longest path of a DAG.
pub fn longest_path(g: &DirectedGraph) -> usize {
    let order = g.topological_order().expect("longest path needs a DAG");
    let mut len = vec![0usize; g.n()];
    for v in order {
        for &e in g.out_edges(v) {
            let w = g.edge(e).1;
            len[w] = len[w].max(len[v] + 1);
        }
    }
    len.into_iter().max().unwrap_or(0)
}

impl ReductionArtifact {
    /// `E_U ∪ E_S`, the unique MED of the reduction graph.
    pub fn med_edges(&self) -> EdgeSet {
        EdgeSet::from_indices(
            self.graph.m(),
            self.edge_roles
                .iter()
                .enumerate()
                .filter(|(_, r)| matches!(r, EdgeRole::Universe | EdgeRole::SetToSink))
                .map(|(e, _)| e),
        )
    }

    /// The MED plus the green edge of every chosen set.
    pub fn sc_to_mcps_solution(&self, cover: &[usize]) -> Result<EdgeSet, ReductionError> {
        self.instance.is_cover(cover)?;
        let mut edges = self.med_edges();
        for &s in cover {
            edges.insert(self.green[s]);
        }
        assert!(check_all_pairs(&self.graph, &edges, self.alpha).feasible);
        Ok(edges)
    }

    /// Reads a cover off a feasible solution: its green edges, plus, for each
    /// red edge whose item is still uncovered, the smallest-index set
    /// containing that item.
    pub fn mcps_to_sc_solution(&self, selected: &EdgeSet) -> Result<Vec<usize>, ReductionError> {
        if !check_all_pairs(&self.graph, selected, self.alpha).feasible {
            return Err(ReductionError::Infeasible);
        }
        let mut chosen: Vec<bool> = self.green.iter().map(|&e| selected.contains(e)).collect();
        for (u, &e) in self.red.iter().enumerate() {
            if !selected.contains(e) {
                continue;
            }
            let covered = (0..chosen.len()).any(|s| chosen[s] && self.instance.sets[s].contains(&u));
            if !covered {
                let s = (0..chosen.len())
                    .find(|&s| self.instance.sets[s].contains(&u))
                    .expect("validated instances cover every item");
                chosen[s] = true;
            }
        }
        let cover: Vec<usize> = (0..chosen.len()).filter(|&s| chosen[s]).collect();
        self.instance.is_cover(&cover)?;
        Ok(cover)
    }
}

/// Seed of block `i` of a random LSP; block 0 uses the seed itself.
fn block_seed(seed: u64, i: usize) -> u64 {
    if i == 0 {
        seed
    } else {
        seed ^ (i as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15).rotate_left(17)
    }
}

/// A random two-terminal DSP with exactly `target` edges.
///
/// Grows from a single edge by subdividing an edge, adding a direct edge
/// between the terminals of some composition, or adding a parallel path of
/// length two. Vertex ids and edge order are shuffled at the end.
pub fn gen_random_dsp(seed: u64, target: usize) -> DirectedGraph {
    assert!(target >= 1, "a DSP has at least one edge");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut n = 2;
    let mut edges = vec![(0usize, 1usize)];
    let mut present: HashSet<(usize, usize)> = HashSet::from([(0, 1)]);
    let mut pairs = vec![(0usize, 1usize)];
    let mut known: HashSet<(usize, usize)> = HashSet::from([(0, 1)]);
    let mut note = |pair: (usize, usize), pairs: &mut Vec<(usize, usize)>| {
        if known.insert(pair) {
            pairs.push(pair);
        }
    };
    while edges.len() < target {
        let room = target - edges.len();
        let roll: f64 = rng.gen();
        if roll < 0.3 {
            let pair = pairs[rng.gen_range(0..pairs.len())];
            if !present.contains(&pair) {
                present.insert(pair);
                edges.push(pair);
                continue;
            }
        } else if roll < 0.6 && room >= 2 {
            let (x, y) = pairs[rng.gen_range(0..pairs.len())];
            let w = n;
            n += 1;
            edges.extend([(x, w), (w, y)]);
            present.extend([(x, w), (w, y)]);
            note((x, w), &mut pairs);
            note((w, y), &mut pairs);
            continue;
        }
        let i = rng.gen_range(0..edges.len());
        let (u, v) = edges[i];
        let w = n;
        n += 1;
        present.remove(&(u, v));
        edges[i] = (u, w);
        edges.push((w, v));
        present.extend([(u, w), (w, v)]);
        note((u, w), &mut pairs);
        note((w, v), &mut pairs);
    }
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(&mut rng);
    let mut edges: Vec<(usize, usize)> = edges.into_iter().map(|(u, v)| (perm[u], perm[v])).collect();
    edges.shuffle(&mut rng);
    let g = DirectedGraph::new(n, edges)
        .expect("generator keeps the graph simple")
        .with_metadata("generator", "dsp")
        .with_metadata("seed", seed)
        .with_metadata("edges", target);
    assert!(recognize_dsp(&g).is_ok(), "generated graph must be a DSP");
    g
}

#[derive(Debug, Clone, PartialEq)]
pub struct LspParams {
    pub blocks: usize,
    pub min_block_edges: usize,
    pub max_block_edges: usize,
    /// Chance that a block is a DSP whose source and sink are identified.
    pub cyclic_prob: f64,
    /// Chance that a block is a complete bipartite orientation with every arc
    /// replaced by a small DSP.
    pub bipartite_prob: f64,
}

impl Default for LspParams {
    fn default() -> Self {
        LspParams {
            blocks: 4,
            min_block_edges: 2,
            max_block_edges: 8,
            cyclic_prob: 0.4,
            bipartite_prob: 0.1,
        }
    }
}

/// Local graph of one block: vertex count and edges.
type Piece = (usize, Vec<(usize, usize)>);

fn dsp_piece(seed: u64, m: usize) -> (Piece, usize, usize) {
    let g = gen_random_dsp(seed, m);
    let s = g.sources()[0];
    let t = g.sinks()[0];
    ((g.n(), g.edges().to_vec()), s, t)
}

/// Series composition of two DSPs, then its sink glued onto its source.
fn cyclic_piece(seed: u64, m: usize) -> Piece {
    let m = m.max(2);
    let first = 1 + (seed as usize % (m - 1));
    let ((n1, e1), s1, t1) = dsp_piece(seed.wrapping_add(1), first);
    let ((n2, e2), s2, t2) = dsp_piece(seed.wrapping_add(2), m - first);
    // second piece: its source becomes t1, its sink becomes s1
    let mut map = vec![usize::MAX; n2];
    let mut n = n1;
    for (x, slot) in map.iter_mut().enumerate() {
        *slot = if x == s2 {
            t1
        } else if x == t2 {
            s1
        } else {
            n += 1;
            n - 1
        };
    }
    let mut edges = e1;
    edges.extend(e2.into_iter().map(|(u, v)| (map[u], map[v])));
    (n, edges)
}

/// Gluing can let simple paths wrap around through the glued terminal and
/// break laminarity, so candidates are checked and redrawn a few times.
fn lsp_cyclic_piece(seed: u64, m: usize) -> Option<Piece> {
    (0..16u64).find_map(|attempt| {
        let (n, edges) = cyclic_piece(seed.wrapping_add(attempt.wrapping_mul(0x1_0000_0001)), m);
        let g = DirectedGraph::new(n, edges.clone()).ok()?;
        is_lsp(&g).ok()?.is_lsp.then_some((n, edges))
    })
}

/// `K_{a,b}` oriented from the `a` side to the `b` side, each arc replaced by
/// a small DSP.
fn bipartite_piece(rng: &mut ChaCha8Rng, seed: u64) -> Piece {
    let a = rng.gen_range(2..=3);
    let b = rng.gen_range(2..=3);
    let mut n = a + b;
    let mut edges = Vec::new();
    for x in 0..a {
        for y in 0..b {
            let size = rng.gen_range(1..=3);
            let ((pn, pe), s, t) = dsp_piece(seed.wrapping_add((x * b + y) as u64 + 1), size);
            let mut map = vec![usize::MAX; pn];
            for (z, slot) in map.iter_mut().enumerate() {
                *slot = if z == s {
                    x
                } else if z == t {
                    a + y
                } else {
                    n += 1;
                    n - 1
                };
            }
            edges.extend(pe.into_iter().map(|(u, v)| (map[u], map[v])));
        }
    }
    (n, edges)
}

/// A random LSP assembled from DSP blocks, cyclic-DSP blocks and bipartite
/// blocks glued together at single vertices.
pub fn gen_random_lsp(seed: u64, params: &LspParams) -> DirectedGraph {
    assert!(params.blocks >= 1 && params.min_block_edges >= 1);
    assert!(params.min_block_edges <= params.max_block_edges);
    let mut n = 0;
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for i in 0..params.blocks {
        let bseed = block_seed(seed, i);
        let mut rng = ChaCha8Rng::seed_from_u64(bseed ^ 0x5DEE_CE66);
        let size = rng.gen_range(params.min_block_edges..=params.max_block_edges);
        let roll: f64 = rng.gen();
        let (pn, pe) = if roll < params.cyclic_prob && size >= 2 {
            lsp_cyclic_piece(bseed, size).unwrap_or_else(|| dsp_piece(bseed, size).0)
        } else if roll < params.cyclic_prob + params.bipartite_prob {
            bipartite_piece(&mut rng, bseed)
        } else {
            dsp_piece(bseed, size).0
        };
        if i == 0 {
            n = pn;
            edges = pe;
            continue;
        }
        let anchor = rng.gen_range(0..n);
        let joint = rng.gen_range(0..pn);
        let map: Vec<usize> = (0..pn)
            .map(|x| match x.cmp(&joint) {
                std::cmp::Ordering::Equal => anchor,
                std::cmp::Ordering::Less => n + x,
                std::cmp::Ordering::Greater => n + x - 1,
            })
            .collect();
        n += pn - 1;
        edges.extend(pe.into_iter().map(|(u, v)| (map[u], map[v])));
    }
    let g = DirectedGraph::new(n, edges)
        .expect("blocks share single vertices only")
        .with_metadata("generator", "lsp")
        .with_metadata("seed", seed)
        .with_metadata("blocks", params.blocks)
        .with_metadata("min_block_edges", params.min_block_edges)
        .with_metadata("max_block_edges", params.max_block_edges)
        .with_metadata("cyclic_prob", params.cyclic_prob)
        .with_metadata("bipartite_prob", params.bipartite_prob);
    assert!(
        is_lsp(&g).map(|v| v.is_lsp).unwrap_or(false),
        "generated graph must be an LSP"
    );
    g
}

fn named(n: usize, names: &[&str], edges: &[(&str, &str)]) -> DirectedGraph {
    assert_eq!(n, names.len());
    let id = |x: &str| names.iter().position(|&y| y == x).unwrap();
    let edges = edges.iter().map(|&(u, v)| (id(u), id(v))).collect();
    DirectedGraph::new(n, edges)
        .unwrap()
        .with_labels(names.iter().map(|s| s.to_string()).collect())
}

fn cycle(n: usize) -> DirectedGraph {
    DirectedGraph::new(n, (0..n).map(|i| (i, (i + 1) % n)).collect()).unwrap()
}

fn bidirected_cycle(n: usize) -> DirectedGraph {
    let mut edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    edges.extend((0..n).map(|i| ((i + 1) % n, i)));
    DirectedGraph::new(n, edges).unwrap()
}

fn bidirected_complete(n: usize) -> DirectedGraph {
    let edges = (0..n)
        .flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v)))
        .collect();
    DirectedGraph::new(n, edges).unwrap()
}

/// The named fixtures.
pub fn fixtures() -> BTreeMap<&'static str, DirectedGraph> {
    let mut f = BTreeMap::new();
    f.insert("W", DirectedGraph::new(4, vec![(0, 1), (0, 2), (1, 3), (2, 3), (1, 2)]).unwrap());
    f.insert(
        "w_extended",
        named(
            6,
            &["u", "b", "s", "t", "e", "v"],
            &[
                ("u", "b"),
                ("b", "s"),
                ("s", "t"),
                ("t", "e"),
                ("e", "v"),
                ("u", "s"),
                ("u", "t"),
                ("s", "v"),
                ("t", "v"),
            ],
        ),
    );
    f.insert("C3", cycle(3));
    f.insert("C4", cycle(4));
    f.insert("C5", cycle(5));
    f.insert("C6", cycle(6));
    f.insert("bidirected_C6", bidirected_cycle(6));
    f.insert("bidirected_K4", bidirected_complete(4));
    f.insert("setcover_reduction", build_reduction(&SetCoverInstance::four_items(), 1).unwrap().graph);
    f.insert(
        "cyclic_chain",
        named(
            11,
            &["a", "b", "c", "c1", "d", "e", "f", "g", "g2", "h1", "h2"],
            &[
                ("a", "b"),
                ("c", "b"),
                ("b", "c"),
                ("c1", "c"),
                ("c1", "f"),
                ("f", "d"),
                ("d", "e"),
                ("e", "c1"),
                ("g", "b"),
                ("g", "a"),
                ("g2", "g"),
                ("c", "h1"),
                ("c1", "h2"),
            ],
        ),
    );
    f.insert(
        "biconnected_mesh",
        named(
            11,
            &["a", "b", "c", "d", "e", "f", "g", "h", "i", "k", "l"],
            &[
                ("a", "c"),
                ("a", "d"),
                ("d", "e"),
                ("e", "c"),
                ("f", "d"),
                ("e", "h"),
                ("f", "g"),
                ("g", "h"),
                ("b", "c"),
                ("b", "i"),
                ("h", "k"),
                ("i", "k"),
                ("k", "i"),
                ("b", "h"),
                ("b", "l"),
                ("k", "l"),
            ],
        ),
    );
    f.insert(
        "k33",
        DirectedGraph::new(6, (0..3).flat_map(|a| (3..6).map(move |b| (a, b))).collect()).unwrap(),
    );
    f.insert(
        "cyclic_dsp",
        named(
            4,
            &["x", "a", "b", "c"],
            &[("x", "a"), ("a", "b"), ("x", "b"), ("b", "x"), ("x", "c"), ("c", "x")],
        ),
    );
    f.insert(
        "chord_cycle",
        named(3, &["x", "a", "b"], &[("x", "a"), ("a", "b"), ("b", "x"), ("x", "b")]),
    );
    f.insert("diamond", DirectedGraph::new(4, vec![(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap());
    f.insert(
        "triangle_chord",
        named(3, &["s", "x", "t"], &[("s", "x"), ("x", "t"), ("s", "t")]),
    );
    f.insert("single_edge", DirectedGraph::new(2, vec![(0, 1)]).unwrap());
    f
}
