//! Exact MCPS solvers for DSPs and LSPs, the derived MED/MSCS solvers, and
//! the dispatching entry point.

use num_rational::Ratio;
use serde::Serialize;
use thiserror::Error;

use crate::flow::{check_all_pairs_with, max_pair_capacity, serialize_ratio, CoverageReport, Demand, FlowSolver, RetentionRatio};
use crate::graph::{DirectedGraph, EdgeSet};
use crate::lsp::{self, EasFamily, LspError};
use crate::oracle::{self, OracleError};
use crate::spdecomp::{recognize_dsp, BudgetExceeded, DspError, NodeKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Dsp,
    Lsp,
    Oracle,
    Med,
}

impl Algorithm {
    pub fn as_str(&self) -> &'static str {
        match self {
            Algorithm::Dsp => "dsp",
            Algorithm::Lsp => "lsp",
            Algorithm::Oracle => "oracle",
            Algorithm::Med => "med",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub edges: EdgeSet,
    pub algorithm: Algorithm,
    /// The retention ratio solved for. MED solutions carry `1/Λ` with `Λ` the
    /// largest pair capacity, which is `1/1` when `Λ <= 1`.
    pub alpha: Ratio<u64>,
    /// `|E'| - m_MED`, when known.
    pub mcps_star: Option<i64>,
}

impl Solution {
    pub fn new(edges: EdgeSet, algorithm: Algorithm, alpha: Ratio<u64>) -> Self {
        Solution {
            edges,
            algorithm,
            alpha,
            mcps_star: None,
        }
    }

    pub fn objective(&self) -> usize {
        self.edges.len()
    }

    /// The serializable form, with edges as `[tail, head]` in index order.
    pub fn report(&self, g: &DirectedGraph) -> SolutionReport {
        SolutionReport {
            algorithm: self.algorithm,
            alpha: self.alpha,
            objective: self.objective(),
            mcps_star: self.mcps_star,
            edges: self.edges.iter().map(|e| g.edge(e)).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SolutionReport {
    pub algorithm: Algorithm,
    #[serde(serialize_with = "serialize_ratio")]
    pub alpha: Ratio<u64>,
    pub objective: usize,
    pub mcps_star: Option<i64>,
    pub edges: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error(transparent)]
    NotDsp(#[from] DspError),
    #[error(transparent)]
    NotLsp(#[from] LspError),
    #[error("graph is neither an LSP nor a DAG")]
    NotLspOrDag(lsp::LspVerdict),
    #[error("instance too large for the oracle ({m} edges, limit {limit}) and not an LSP")]
    TooLarge { m: usize, limit: usize },
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Budget(#[from] BudgetExceeded),
    #[error("solver output failed the coverage check")]
    SelfCheck(CoverageReport),
}

/// Exact MCPS on a DSP via its clean decomposition tree.
pub fn solve_dsp(g: &DirectedGraph, alpha: RetentionRatio) -> Result<Solution, SolveError> {
    let edges = dsp_edges(g, Demand::Ratio(alpha))?;
    Ok(Solution::new(edges, Algorithm::Dsp, alpha.as_ratio()))
}

/// Bottom-up over the clean decomposition tree, starting from all edges: at a
/// parallel node with a terminal edge `st`, drop `st` when the other child
/// alone already meets the node's requirement.
fn dsp_edges(g: &DirectedGraph, demand: Demand) -> Result<EdgeSet, SolveError> {
    let tree = recognize_dsp(g)?.make_clean();
    let mut selected = g.full_edge_set();
    let mut cap = vec![0u64; tree.len()];
    for i in tree.post_order() {
        cap[i] = match tree.node(i).kind {
            NodeKind::Leaf(_) => 1,
            NodeKind::Series(l, r) => cap[l].min(cap[r]),
            NodeKind::Parallel(l, r) => match tree.terminal_leaf_child(i) {
                Some(leaf) => {
                    let rest = if leaf == l { r } else { l };
                    if cap[rest] >= demand.required(tree.node(i).cap_full) {
                        let NodeKind::Leaf(e) = tree.node(leaf).kind else {
                            unreachable!()
                        };
                        selected.remove(e);
                        cap[rest]
                    } else {
                        cap[rest] + 1
                    }
                }
                None => cap[l] + cap[r],
            },
        };
    }
    Ok(selected)
}

/// Exact MCPS on an LSP.
pub fn solve_lsp(g: &DirectedGraph, alpha: RetentionRatio) -> Result<Solution, SolveError> {
    let family = checked_family(g)?;
    let edges = lsp_edges(g, &family, Demand::Ratio(alpha));
    Ok(Solution::new(edges, Algorithm::Lsp, alpha.as_ratio()))
}

fn checked_family(g: &DirectedGraph) -> Result<EasFamily, LspError> {
    let (verdict, family) = lsp::analyze(g)?;
    if verdict.is_lsp {
        Ok(family)
    } else {
        Err(LspError::NotLsp(verdict))
    }
}

/// Edges by ascending `μ` (ties by index); an edge is taken when the current
/// selection inside its apex set does not cover its endpoints.
fn lsp_edges(g: &DirectedGraph, family: &EasFamily, demand: Demand) -> EdgeSet {
    let mut order: Vec<usize> = (0..g.m()).collect();
    order.sort_by_key(|&e| (family.mu[e], e));
    let mut selected = g.empty_edge_set();
    let mut flows = FlowSolver::new(g);
    for e in order {
        let (u, v) = g.edge(e);
        let apex = &family.sets[e];
        let need = demand.required(flows.max_flow(u, v, Some(apex), u64::MAX));
        let within = selected.intersection(apex);
        if flows.max_flow(u, v, Some(&within), need) < need {
            selected.insert(e);
        }
    }
    selected
}

/// Minimum equivalent digraph of an LSP or a DAG.
///
/// On an LSP this is the apex-set solver with every reachable pair requiring
/// capacity one. A DAG that is not an LSP gets its unique MED directly: the
/// edges `uv` with no other `u`-`v` path.
pub fn solve_med(g: &DirectedGraph) -> Result<Solution, SolveError> {
    let (verdict, family) = lsp::analyze(g)?;
    let edges = if verdict.is_lsp {
        lsp_edges(g, &family, Demand::Reachability)
    } else if g.is_acyclic() {
        EdgeSet::from_indices(g.m(), (0..g.m()).filter(|&e| family.mu[e] == 1))
    } else {
        return Err(SolveError::NotLspOrDag(verdict));
    };
    let widest = max_pair_capacity(g).max(1);
    let mut sol = Solution::new(edges, Algorithm::Med, Ratio::new(1, widest));
    sol.mcps_star = Some(0);
    Ok(sol)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    NotStronglyConnected,
    Mscs,
    HamiltonianCycle,
}

/// MED of an LSP, classified: on a strongly connected input it is a minimum
/// spanning strong subgraph, and when that is a single cycle through every
/// vertex, a Hamiltonian cycle.
pub fn extract_mscs_or_hamiltonian(g: &DirectedGraph) -> Result<(Solution, Classification), SolveError> {
    let family = checked_family(g)?;
    let edges = lsp_edges(g, &family, Demand::Reachability);
    let widest = max_pair_capacity(g).max(1);
    let mut sol = Solution::new(edges, Algorithm::Med, Ratio::new(1, widest));
    sol.mcps_star = Some(0);
    let class = if g.n() < 2 || !g.is_strongly_connected() {
        Classification::NotStronglyConnected
    } else if sol.objective() == g.n() {
        // n edges, every vertex entered and left: one spanning cycle
        Classification::HamiltonianCycle
    } else {
        Classification::Mscs
    };
    Ok((sol, class))
}

/// `m_MED`, when some route can compute it.
pub fn med_size(g: &DirectedGraph) -> Option<usize> {
    match solve_med(g) {
        Ok(sol) => Some(sol.objective()),
        Err(_) if g.m() <= oracle::DEFAULT_EDGE_BUDGET => {
            oracle::brute_force_med(g, oracle::DEFAULT_EDGE_BUDGET).ok().map(|s| s.len())
        }
        Err(_) => None,
    }
}

/// `|E'| - m_MED`.
pub fn mcps_star_value(g: &DirectedGraph, sol: &Solution) -> Option<i64> {
    med_size(g).map(|med| sol.objective() as i64 - med as i64)
}

/// `m/(n-1)` for a weakly connected graph with at least two vertices: any
/// feasible edge set is at most this factor larger than an optimal one.
pub fn approximation_bound(g: &DirectedGraph) -> Option<Ratio<u64>> {
    (g.n() >= 2 && g.is_weakly_connected()).then(|| Ratio::new(g.m() as u64, g.n() as u64 - 1))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Auto,
    Dsp,
    Lsp,
    Oracle,
}

/// Dispatches to the right solver, re-checks every ordered pair and fills in
/// the MCPS* value.
pub fn solve(g: &DirectedGraph, alpha: RetentionRatio, mode: Mode) -> Result<Solution, SolveError> {
    let limit = oracle::DEFAULT_EDGE_BUDGET;
    let mut sol = match mode {
        Mode::Dsp => solve_dsp(g, alpha)?,
        Mode::Lsp => solve_lsp(g, alpha)?,
        Mode::Oracle => oracle::brute_force_mcps(g, alpha, limit)?,
        Mode::Auto => {
            if g.m() == 0 {
                Solution::new(g.empty_edge_set(), Algorithm::Oracle, alpha.as_ratio())
            } else if recognize_dsp(g).is_ok() {
                solve_dsp(g, alpha)?
            } else {
                match solve_lsp(g, alpha) {
                    Ok(sol) => sol,
                    Err(SolveError::NotLsp(LspError::NotLsp(_))) if g.m() <= limit => {
                        oracle::brute_force_mcps(g, alpha, limit)?
                    }
                    Err(SolveError::NotLsp(LspError::NotLsp(_))) => {
                        return Err(SolveError::TooLarge { m: g.m(), limit })
                    }
                    Err(other) => return Err(other),
                }
            }
        }
    };
    let report = check_all_pairs_with(g, &sol.edges, Demand::Ratio(alpha));
    if !report.feasible {
        return Err(SolveError::SelfCheck(report));
    }
    sol.mcps_star = mcps_star_value(g, &sol);
    Ok(sol)
}
