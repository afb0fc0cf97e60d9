//! Exponential-time reference solvers. Deliberately naive so that they can be
//! checked by eye; budgets are hard errors.

use fixedbitset::FixedBitSet;
use rayon::prelude::*;
use thiserror::Error;

use crate::flow::{Demand, FlowSolver, RetentionRatio};
use crate::graph::{DirectedGraph, EdgeSet};
use crate::solver::{Algorithm, Solution};
pub use crate::spdecomp::BudgetExceeded;

/// Default edge limit for subset enumeration.
pub const DEFAULT_EDGE_BUDGET: usize = 16;
/// Default step limit for path enumeration.
pub const DEFAULT_PATH_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("graph has {m} edges, oracle limit is {limit}")]
    TooLarge { m: usize, limit: usize },
    #[error(transparent)]
    Budget(#[from] BudgetExceeded),
}

/// Union of the edges of all simple `u`-`v` paths, by plain depth-first
/// enumeration.
pub fn enumerate_simple_path_edges(
    g: &DirectedGraph,
    u: usize,
    v: usize,
    budget: u64,
) -> Result<EdgeSet, BudgetExceeded> {
    let mut out = g.empty_edge_set();
    if u == v {
        return Ok(out);
    }
    for_each_simple_path(g, u, v, budget, |path| {
        for &e in path {
            out.insert(e);
        }
    })?;
    Ok(out)
}

fn for_each_simple_path(
    g: &DirectedGraph,
    u: usize,
    v: usize,
    budget: u64,
    mut visit: impl FnMut(&[usize]),
) -> Result<(), BudgetExceeded> {
    fn go(
        g: &DirectedGraph,
        x: usize,
        v: usize,
        on_path: &mut [bool],
        path: &mut Vec<usize>,
        steps: &mut u64,
        budget: u64,
        visit: &mut dyn FnMut(&[usize]),
    ) -> Result<(), BudgetExceeded> {
        for &e in g.out_edges(x) {
            *steps += 1;
            if *steps > budget {
                return Err(BudgetExceeded(budget));
            }
            let y = g.edge(e).1;
            if on_path[y] {
                continue;
            }
            path.push(e);
            if y == v {
                visit(path);
            } else {
                on_path[y] = true;
                go(g, y, v, on_path, path, steps, budget, visit)?;
                on_path[y] = false;
            }
            path.pop();
        }
        Ok(())
    }
    let mut on_path = vec![false; g.n()];
    on_path[u] = true;
    let mut steps = 0;
    go(g, u, v, &mut on_path, &mut Vec::new(), &mut steps, budget, &mut visit)
}

/// Largest number of pairwise edge-disjoint simple `s`-`t` paths, by
/// enumerating all simple paths and searching over path systems.
pub fn edge_disjoint_paths_count(
    g: &DirectedGraph,
    s: usize,
    t: usize,
    budget: u64,
) -> Result<u64, BudgetExceeded> {
    if s == t {
        return Ok(0);
    }
    let mut paths: Vec<FixedBitSet> = Vec::new();
    for_each_simple_path(g, s, t, budget, |p| {
        let mut bits = FixedBitSet::with_capacity(g.m());
        p.iter().for_each(|&e| bits.insert(e));
        paths.push(bits);
    })?;
    paths.sort_by_key(|p| p.count_ones(..));

    fn pack(
        paths: &[FixedBitSet],
        i: usize,
        used: &mut FixedBitSet,
        count: u64,
        best: &mut u64,
        steps: &mut u64,
        budget: u64,
    ) -> Result<(), BudgetExceeded> {
        *steps += 1;
        if *steps > budget {
            return Err(BudgetExceeded(budget));
        }
        *best = (*best).max(count);
        if i == paths.len() || count + (paths.len() - i) as u64 <= *best {
            return Ok(());
        }
        if paths[i].is_disjoint(used) {
            used.union_with(&paths[i]);
            pack(paths, i + 1, used, count + 1, best, steps, budget)?;
            used.difference_with(&paths[i]);
        }
        pack(paths, i + 1, used, count, best, steps, budget)
    }
    let mut best = 0;
    let mut steps = 0;
    pack(
        &paths,
        0,
        &mut FixedBitSet::with_capacity(g.m()),
        0,
        &mut best,
        &mut steps,
        budget,
    )?;
    Ok(best)
}

/// Edges `(u, v)` that are the only simple `u`-`v` path. Every feasible
/// subgraph keeps them.
fn mandatory_edges(g: &DirectedGraph) -> Result<EdgeSet, BudgetExceeded> {
    let mut out = g.empty_edge_set();
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        if enumerate_simple_path_edges(g, u, v, DEFAULT_PATH_BUDGET)?.len() == 1 {
            out.insert(e);
        }
    }
    Ok(out)
}

/// Smallest superset of the mandatory edges satisfying `feasible`, trying
/// sizes in increasing order and, within a size, edge-index sets in
/// lexicographic order.
fn smallest_superset<S: Send>(
    g: &DirectedGraph,
    mandatory: &EdgeSet,
    init: impl Fn() -> S + Sync + Send,
    feasible: impl Fn(&mut S, &EdgeSet) -> bool + Sync + Send,
) -> EdgeSet {
    let optional: Vec<usize> = (0..g.m()).filter(|&e| !mandatory.contains(e)).collect();
    for k in 0..=optional.len() {
        let candidates: Vec<EdgeSet> = combinations(optional.len(), k)
            .into_iter()
            .map(|combo| {
                let mut set = mandatory.clone();
                combo.into_iter().for_each(|i| set.insert(optional[i]));
                set
            })
            .collect();
        let hit = candidates
            .par_iter()
            .map_init(&init, |state, set| feasible(state, set))
            .position_first(|ok| ok);
        if let Some(i) = hit {
            return candidates[i].clone();
        }
    }
    unreachable!("the full edge set is always feasible")
}

/// All `k`-subsets of `0..r` in lexicographic order.
fn combinations(r: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut combo: Vec<usize> = (0..k).collect();
    if k > r {
        return out;
    }
    loop {
        out.push(combo.clone());
        let Some(i) = (0..k).rev().find(|&i| combo[i] != i + r - k) else {
            return out;
        };
        combo[i] += 1;
        for j in i + 1..k {
            combo[j] = combo[j - 1] + 1;
        }
    }
}

/// Minimum-cardinality feasible subgraph for `α`, ties broken by the
/// lexicographically smallest edge-index set.
pub fn brute_force_mcps(
    g: &DirectedGraph,
    alpha: RetentionRatio,
    budget: usize,
) -> Result<Solution, OracleError> {
    let edges = brute_force_with(g, Demand::Ratio(alpha), budget)?;
    Ok(Solution::new(edges, Algorithm::Oracle, alpha.as_ratio()))
}

pub(crate) fn brute_force_with(
    g: &DirectedGraph,
    demand: Demand,
    budget: usize,
) -> Result<EdgeSet, OracleError> {
    if g.m() > budget {
        return Err(OracleError::TooLarge {
            m: g.m(),
            limit: budget,
        });
    }
    // (s, t, requirement) for every pair with a nonzero requirement
    let mut flows = FlowSolver::new(g);
    let mut demands = Vec::new();
    for s in 0..g.n() {
        for t in 0..g.n() {
            let need = demand.required(flows.max_flow(s, t, None, u64::MAX));
            if need > 0 {
                demands.push((s, t, need));
            }
        }
    }
    let mandatory = mandatory_edges(g)?;
    Ok(smallest_superset(
        g,
        &mandatory,
        || (FlowSolver::new(g), 0usize),
        |(flows, last_fail), set| {
            // try the pair that failed last time first
            let k = demands.len();
            for i in (0..k).map(|j| (j + *last_fail) % k) {
                let (s, t, need) = demands[i];
                if flows.max_flow(s, t, Some(set), need) < need {
                    *last_fail = i;
                    return false;
                }
            }
            true
        },
    ))
}

/// Minimum subgraph with the same reachability relation.
pub fn brute_force_med(g: &DirectedGraph, budget: usize) -> Result<EdgeSet, OracleError> {
    if g.m() > budget {
        return Err(OracleError::TooLarge {
            m: g.m(),
            limit: budget,
        });
    }
    let target: Vec<FixedBitSet> = (0..g.n()).map(|v| g.reachable_from(v)).collect();
    let mandatory = mandatory_edges(g)?;
    Ok(smallest_superset(
        g,
        &mandatory,
        || (),
        |_, set| (0..g.n()).all(|v| g.reachable_from_within(v, set) == target[v]),
    ))
}

/// Solves the set-cover instance `sets` over `0..universe` exactly, returning
/// the lexicographically first cover of minimum size.
pub fn brute_force_set_cover(universe: usize, sets: &[Vec<usize>]) -> Option<Vec<usize>> {
    let mut full = FixedBitSet::with_capacity(universe);
    full.insert_range(..);
    for k in 0..=sets.len() {
        for combo in combinations(sets.len(), k) {
            let mut covered = FixedBitSet::with_capacity(universe);
            for &i in &combo {
                sets[i].iter().for_each(|&u| covered.insert(u));
            }
            if covered == full {
                return Some(combo);
            }
        }
    }
    None
}
