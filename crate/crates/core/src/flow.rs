//! Unit-capacity maximum flow and the coverage predicates built on it.
//!
//! With every edge of capacity one, the value of a maximum `s`-`t` flow is the
//! number of pairwise edge-disjoint `s`-`t` paths. All thresholds are exact
//! integers; nothing here touches floating point.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::graph::{DirectedGraph, EdgeSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RatioError {
    #[error("retention ratio must be written as p/q, got {0:?}")]
    Syntax(String),
    #[error("retention ratio {p}/{q} is not strictly between 0 and 1")]
    OutOfRange { p: u64, q: u64 },
}

/// An exact retention ratio `p/q` with `0 < p < q`, kept in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RetentionRatio(Ratio<u64>);

impl RetentionRatio {
    pub fn new(p: u64, q: u64) -> Result<Self, RatioError> {
        if p == 0 || q == 0 || p >= q {
            return Err(RatioError::OutOfRange { p, q });
        }
        Ok(RetentionRatio(Ratio::new(p, q)))
    }

    pub fn numer(&self) -> u64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> u64 {
        *self.0.denom()
    }

    pub fn as_ratio(&self) -> Ratio<u64> {
        self.0
    }
}

impl fmt::Display for RetentionRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

impl FromStr for RetentionRatio {
    type Err = RatioError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let syntax = || RatioError::Syntax(s.to_string());
        let (p, q) = s.split_once('/').ok_or_else(syntax)?;
        let digits = |x: &str| !x.is_empty() && x.bytes().all(|b| b.is_ascii_digit());
        if !digits(p) || !digits(q) {
            return Err(syntax());
        }
        let p: u64 = p.parse().map_err(|_| syntax())?;
        let q: u64 = q.parse().map_err(|_| syntax())?;
        RetentionRatio::new(p, q)
    }
}

impl Serialize for RetentionRatio {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        ser.collect_str(self)
    }
}

/// `⌈p·λ/q⌉`.
pub fn required_capacity(alpha: RetentionRatio, lambda: u64) -> u64 {
    let p = alpha.numer() as u128;
    let q = alpha.denom() as u128;
    (p * lambda as u128).div_ceil(q) as u64
}

/// What a subgraph has to keep for a pair of capacity `λ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Demand {
    /// `⌈α·λ⌉`.
    Ratio(RetentionRatio),
    /// `min(λ, 1)`: keep every reachable pair reachable.
    Reachability,
}

impl Demand {
    pub fn required(&self, lambda: u64) -> u64 {
        match *self {
            Demand::Ratio(alpha) => required_capacity(alpha, lambda),
            Demand::Reachability => lambda.min(1),
        }
    }
}

impl From<RetentionRatio> for Demand {
    fn from(alpha: RetentionRatio) -> Self {
        Demand::Ratio(alpha)
    }
}

/// Scratch space for repeated unit-capacity max-flow computations on one
/// graph. Shortest augmenting paths, found by breadth-first search over the
/// residual network.
pub struct FlowSolver<'g> {
    g: &'g DirectedGraph,
    used: Vec<bool>,
    used_list: Vec<usize>,
    // (stamp, edge by which the vertex was reached, forward?)
    seen: Vec<u32>,
    stamp: u32,
    via: Vec<(usize, bool)>,
    queue: VecDeque<usize>,
}

impl<'g> FlowSolver<'g> {
    pub fn new(g: &'g DirectedGraph) -> Self {
        FlowSolver {
            g,
            used: vec![false; g.m()],
            used_list: Vec::new(),
            seen: vec![0; g.n()],
            stamp: 0,
            via: vec![(usize::MAX, true); g.n()],
            queue: VecDeque::new(),
        }
    }

    /// Maximum `s`-`t` flow using only edges in `within` (all edges when
    /// `None`), stopping early once `limit` is reached. `s == t` yields 0.
    pub fn max_flow(
        &mut self,
        s: usize,
        t: usize,
        within: Option<&EdgeSet>,
        limit: u64,
    ) -> u64 {
        for e in self.used_list.drain(..) {
            self.used[e] = false;
        }
        if s == t {
            return 0;
        }
        let mut value = 0;
        while value < limit && self.augment(s, t, within) {
            value += 1;
        }
        value
    }

    fn augment(&mut self, s: usize, t: usize, within: Option<&EdgeSet>) -> bool {
        self.stamp = self.stamp.wrapping_add(1);
        if self.stamp == 0 {
            self.seen.fill(0);
            self.stamp = 1;
        }
        let stamp = self.stamp;
        let g = self.g;
        self.queue.clear();
        self.queue.push_back(s);
        self.seen[s] = stamp;
        'search: while let Some(x) = self.queue.pop_front() {
            for &e in g.out_edges(x) {
                if self.used[e] || within.is_some_and(|w| !w.contains(e)) {
                    continue;
                }
                let y = g.edge(e).1;
                if self.seen[y] != stamp {
                    self.seen[y] = stamp;
                    self.via[y] = (e, true);
                    if y == t {
                        break 'search;
                    }
                    self.queue.push_back(y);
                }
            }
            for &e in g.in_edges(x) {
                if !self.used[e] {
                    continue;
                }
                let y = g.edge(e).0;
                if self.seen[y] != stamp {
                    self.seen[y] = stamp;
                    self.via[y] = (e, false);
                    self.queue.push_back(y);
                }
            }
        }
        if self.seen[t] != stamp {
            return false;
        }
        let mut y = t;
        while y != s {
            let (e, forward) = self.via[y];
            let (tail, head) = g.edge(e);
            if forward {
                self.used[e] = true;
                self.used_list.push(e);
                y = tail;
            } else {
                self.used[e] = false;
                y = head;
            }
        }
        true
    }
}

/// `λ_G(s, t)`. Defined as 0 when `s == t`.
pub fn max_flow_value(g: &DirectedGraph, s: usize, t: usize) -> u64 {
    FlowSolver::new(g).max_flow(s, t, None, u64::MAX)
}

/// `λ` of the spanning subgraph `(V, within)` between `s` and `t`.
pub fn max_flow_within(g: &DirectedGraph, within: &EdgeSet, s: usize, t: usize) -> u64 {
    FlowSolver::new(g).max_flow(s, t, Some(within), u64::MAX)
}

pub fn is_covered(
    g: &DirectedGraph,
    selected: &EdgeSet,
    s: usize,
    t: usize,
    alpha: RetentionRatio,
) -> bool {
    let mut flows = FlowSolver::new(g);
    let need = required_capacity(alpha, flows.max_flow(s, t, None, u64::MAX));
    flows.max_flow(s, t, Some(selected), need) >= need
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub s: usize,
    pub t: usize,
    /// `λ_G(s, t)`
    pub capacity: u64,
    /// `λ_G'(s, t)`
    pub retained: u64,
    pub required: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoverageReport {
    pub feasible: bool,
    pub first_violation: Option<Violation>,
    #[serde(serialize_with = "serialize_ratio")]
    pub worst_ratio: Ratio<u64>,
}

pub(crate) fn serialize_ratio<S: Serializer>(r: &Ratio<u64>, ser: S) -> Result<S::Ok, S::Error> {
    ser.collect_str(&format_args!("{}/{}", r.numer(), r.denom()))
}

/// Checks every ordered pair `s != t`, scanning in ascending `(s, t)` order.
pub fn check_all_pairs(
    g: &DirectedGraph,
    selected: &EdgeSet,
    alpha: RetentionRatio,
) -> CoverageReport {
    check_all_pairs_with(g, selected, Demand::Ratio(alpha))
}

pub fn check_all_pairs_with(g: &DirectedGraph, selected: &EdgeSet, demand: Demand) -> CoverageReport {
    // Per source: (first violation, worst ratio). Sources are independent.
    let per_source: Vec<(Option<Violation>, Ratio<u64>)> = (0..g.n())
        .into_par_iter()
        .map(|s| scan_source(g, selected, demand, s))
        .collect();
    let first_violation = per_source.iter().find_map(|(v, _)| *v);
    let worst_ratio = per_source
        .iter()
        .map(|&(_, r)| r)
        .min()
        .unwrap_or_else(|| Ratio::from_integer(1));
    CoverageReport {
        feasible: first_violation.is_none(),
        first_violation,
        worst_ratio,
    }
}

fn scan_source(
    g: &DirectedGraph,
    selected: &EdgeSet,
    demand: Demand,
    s: usize,
) -> (Option<Violation>, Ratio<u64>) {
    let one = Ratio::from_integer(1);
    let reach = g.reachable_from(s);
    let mut flows = FlowSolver::new(g);
    let mut first = None;
    let mut worst = one;
    for t in reach.ones() {
        if t == s {
            continue;
        }
        let capacity = flows.max_flow(s, t, None, u64::MAX);
        if capacity == 0 {
            continue;
        }
        let retained = flows.max_flow(s, t, Some(selected), capacity);
        let required = demand.required(capacity);
        if retained < required && first.is_none() {
            first = Some(Violation {
                s,
                t,
                capacity,
                retained,
                required,
            });
        }
        worst = worst.min(Ratio::new(retained, capacity));
    }
    (first, worst)
}

/// Min over pairs with `λ_G > 0` of `λ_G' / λ_G`; 1 when there is no such pair.
pub fn retention_ratio(g: &DirectedGraph, selected: &EdgeSet) -> Ratio<u64> {
    check_all_pairs_with(g, selected, Demand::Reachability).worst_ratio
}

/// The first edge `(u, v)` in index order whose endpoint pair is not covered.
pub fn first_uncovered_edge(g: &DirectedGraph, selected: &EdgeSet, demand: Demand) -> Option<usize> {
    let mut flows = FlowSolver::new(g);
    (0..g.m()).find(|&e| {
        let (u, v) = g.edge(e);
        let need = demand.required(flows.max_flow(u, v, None, u64::MAX));
        flows.max_flow(u, v, Some(selected), need) < need
    })
}

/// Largest `λ_G(s, t)` over all ordered pairs.
pub fn max_pair_capacity(g: &DirectedGraph) -> u64 {
    (0..g.n())
        .into_par_iter()
        .map(|s| {
            let mut flows = FlowSolver::new(g);
            let bound = g.out_degree(s) as u64;
            g.reachable_from(s)
                .ones()
                .filter(|&t| t != s)
                .map(|t| flows.max_flow(s, t, None, bound.min(g.in_degree(t) as u64)))
                .max()
                .unwrap_or(0)
        })
        .max()
        .unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_edge_list;

    fn w_graph() -> DirectedGraph {
        parse_edge_list("4 5\n0 1\n0 2\n1 3\n2 3\n1 2").unwrap()
    }

    // u=0 b=1 s=2 t=3 e=4 v=5
    fn w_extended() -> DirectedGraph {
        DirectedGraph::new(
            6,
            vec![(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (0, 2), (0, 3), (2, 5), (3, 5)],
        )
        .unwrap()
    }

    fn ratio(p: u64, q: u64) -> RetentionRatio {
        RetentionRatio::new(p, q).unwrap()
    }

    #[test]
    fn flow_examples() {
        assert_eq!(max_flow_value(&w_graph(), 0, 3), 2);
        assert_eq!(max_flow_value(&w_extended(), 0, 5), 3);
        let single = parse_edge_list("2 1\n0 1").unwrap();
        assert_eq!(max_flow_value(&single, 1, 0), 0);
        assert_eq!(max_flow_value(&single, 0, 0), 0);
    }

    #[test]
    fn required_capacity_examples() {
        assert_eq!(required_capacity(ratio(1, 2), 7), 4);
        assert_eq!(required_capacity(ratio(1, 2), 0), 0);
        assert_eq!(required_capacity(ratio(2, 3), 3), 2);
    }

    #[test]
    fn ratio_parsing() {
        assert_eq!("2/4".parse::<RetentionRatio>().unwrap(), ratio(1, 2));
        assert_eq!(ratio(2, 4).to_string(), "1/2");
        assert!("1/1".parse::<RetentionRatio>().is_err());
        assert!("0/3".parse::<RetentionRatio>().is_err());
        assert!("3/2".parse::<RetentionRatio>().is_err());
        assert!("1 /2".parse::<RetentionRatio>().is_err());
        assert!("-1/2".parse::<RetentionRatio>().is_err());
        assert!("1/0".parse::<RetentionRatio>().is_err());
    }

    #[test]
    fn coverage_examples() {
        let g = w_extended();
        let med = EdgeSet::from_indices(9, 0..5);
        assert!(!is_covered(&g, &med, 0, 5, ratio(1, 2)));
        assert!(is_covered(&g, &g.full_edge_set(), 0, 5, ratio(1, 2)));
        let w = w_graph();
        assert!(is_covered(&w, &EdgeSet::from_indices(5, [0, 2]), 0, 3, ratio(1, 2)));
    }

    #[test]
    fn all_pairs_on_w_extended() {
        let g = w_extended();
        let med = EdgeSet::from_indices(9, 0..5);
        let report = check_all_pairs(&g, &med, ratio(1, 2));
        assert!(!report.feasible);
        let v = report.first_violation.unwrap();
        assert_eq!((v.s, v.t, v.capacity, v.retained, v.required), (0, 5, 3, 1, 2));
        assert_eq!(report.worst_ratio, Ratio::new(1, 3));
        assert_eq!(retention_ratio(&g, &med), Ratio::new(1, 3));
        // every edge is covered nonetheless
        assert_eq!(first_uncovered_edge(&g, &med, ratio(1, 2).into()), None);
    }

    #[test]
    fn all_pairs_on_cycle_and_bidirected_k4() {
        let c5 = DirectedGraph::new(5, (0..5).map(|i| (i, (i + 1) % 5)).collect()).unwrap();
        let report = check_all_pairs(&c5, &c5.full_edge_set(), ratio(1, 2));
        assert!(report.feasible);
        assert_eq!(report.worst_ratio, Ratio::from_integer(1));

        let mut arcs = Vec::new();
        for u in 0..4 {
            for v in 0..4 {
                if u != v {
                    arcs.push((u, v));
                }
            }
        }
        let k4 = DirectedGraph::new(4, arcs).unwrap();
        let star = EdgeSet::from_indices(
            12,
            (0..12).filter(|&e| {
                let (u, v) = k4.edge(e);
                u == 0 || v == 0
            }),
        );
        let report = check_all_pairs(&k4, &star, ratio(1, 3));
        assert!(report.feasible);
        assert_eq!(report.worst_ratio, Ratio::new(1, 3));
    }

    #[test]
    fn bidirected_cycle_keeps_half() {
        let n = 6;
        let mut edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        edges.extend((0..n).map(|i| ((i + 1) % n, i)));
        let g = DirectedGraph::new(n, edges).unwrap();
        let one_way = EdgeSet::from_indices(2 * n, 0..n);
        assert_eq!(retention_ratio(&g, &one_way), Ratio::new(1, 2));
    }

    #[test]
    fn report_json_shape() {
        let g = w_extended();
        let report = check_all_pairs(&g, &EdgeSet::from_indices(9, 0..5), ratio(1, 2));
        let json = serde_json::to_string(&report).unwrap();
        assert_eq!(
            json,
            r#"{"feasible":false,"first_violation":{"s":0,"t":5,"capacity":3,"retained":1,"required":2},"worst_ratio":"1/3"}"#
        );
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_graph() -> impl Strategy<Value = DirectedGraph> {
            (2usize..7).prop_flat_map(|n| {
                proptest::collection::btree_set((0..n, 0..n), 0..16).prop_map(move |pairs| {
                    let edges = pairs.into_iter().filter(|(u, v)| u != v).collect();
                    DirectedGraph::new(n, edges).unwrap()
                })
            })
        }

        fn arb_ratio() -> impl Strategy<Value = RetentionRatio> {
            (2u64..9).prop_flat_map(|q| (1..q).prop_map(move |p| RetentionRatio::new(p, q).unwrap()))
        }

        fn subset(m: usize, mask: u64) -> EdgeSet {
            EdgeSet::from_indices(m, (0..m).filter(|i| mask >> (i % 64) & 1 == 1))
        }

        proptest! {
            #[test]
            fn full_set_always_feasible(g in arb_graph(), a in arb_ratio()) {
                let report = check_all_pairs(&g, &g.full_edge_set(), a);
                prop_assert!(report.feasible);
                prop_assert!(report.worst_ratio >= a.as_ratio());
            }

            #[test]
            fn feasible_iff_worst_ratio_reaches_alpha(g in arb_graph(), a in arb_ratio(), mask in any::<u64>()) {
                let sel = subset(g.m(), mask);
                let report = check_all_pairs(&g, &sel, a);
                prop_assert_eq!(report.feasible, report.worst_ratio >= a.as_ratio());
                prop_assert_eq!(report.feasible, report.first_violation.is_none());
            }

            #[test]
            fn flow_monotone_under_edge_addition(g in arb_graph(), mask in any::<u64>(), extra in any::<usize>()) {
                let small = subset(g.m(), mask);
                let mut big = small.clone();
                if g.m() > 0 {
                    big.insert(extra % g.m());
                }
                for s in 0..g.n() {
                    for t in 0..g.n() {
                        prop_assert!(max_flow_within(&g, &small, s, t) <= max_flow_within(&g, &big, s, t));
                    }
                }
            }

            #[test]
            fn coverage_monotone_in_set_and_antitone_in_alpha(
                g in arb_graph(), a in arb_ratio(), b in arb_ratio(), mask in any::<u64>(), extra in any::<u64>()
            ) {
                let small = subset(g.m(), mask);
                let big = small.union(&subset(g.m(), extra));
                let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
                for s in 0..g.n() {
                    for t in 0..g.n() {
                        if is_covered(&g, &small, s, t, hi) {
                            prop_assert!(is_covered(&g, &big, s, t, hi));
                            prop_assert!(is_covered(&g, &small, s, t, lo));
                        }
                    }
                }
            }

            #[test]
            fn required_capacity_bounds(a in arb_ratio(), lambda in 0u64..10_000) {
                let r = required_capacity(a, lambda);
                prop_assert!(r <= lambda);
                if lambda >= 1 {
                    prop_assert!(r >= 1);
                }
            }
        }
    }
}
