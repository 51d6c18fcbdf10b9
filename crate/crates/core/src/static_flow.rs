//! Fixed-`λ` flow kernel on the time-expanded network: feasibility with
//! lower bounds, augmenting-path maximum flow and minimum flow.
//!
//! The parametric solver only uses [`feasible_flow`] for initialization;
//! [`min_flow`] is the independent oracle the verification sweep compares
//! against.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::expand::{Ntp, TimeExpandedNetwork};
use crate::rational::Rational;

/// Flow value per expanded arc, indexed like `TimeExpandedNetwork::arcs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StaticFlow {
    pub values: Vec<Rational>,
}

impl StaticFlow {
    pub fn zero(tnet: &TimeExpandedNetwork) -> Self {
        StaticFlow {
            values: vec![Rational::zero(); tnet.arcs.len()],
        }
    }

    /// Outflow minus inflow for every NTP, by dense NTP index.
    pub fn imbalances(&self, tnet: &TimeExpandedNetwork) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); tnet.ntp_count()];
        for (a, f) in tnet.arcs.iter().zip(&self.values) {
            out[tnet.ntp_index(a.tail)] += f;
            out[tnet.ntp_index(a.head)] -= f;
        }
        out
    }

    /// Net outflow summed over all source copies.
    pub fn value(&self, tnet: &TimeExpandedNetwork) -> Rational {
        let imb = self.imbalances(tnet);
        tnet.sources().map(|v| &imb[tnet.ntp_index(v)]).sum()
    }

    /// Conservation at non-terminal NTPs and `l ≤ f ≤ u` on every arc.
    pub fn check_feasible(&self, tnet: &TimeExpandedNetwork) -> std::result::Result<(), String> {
        if self.values.len() != tnet.arcs.len() {
            return Err("flow vector length mismatch".into());
        }
        for (a, f) in tnet.arcs.iter().zip(&self.values) {
            if f < &a.lower || f > &a.upper {
                return Err(format!(
                    "arc {}->{} carries {f} outside [{}, {}]",
                    a.tail, a.head, a.lower, a.upper
                ));
            }
        }
        for (i, x) in self.imbalances(tnet).iter().enumerate() {
            let v = tnet.ntp_at(i);
            if !tnet.is_terminal(v) && !x.is_zero() {
                return Err(format!("imbalance {x} at {v}"));
            }
        }
        Ok(())
    }
}

/// Order in which a vertex's incident arcs are scanned during the
/// breadth-first augmenting path search.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum SearchOrder {
    #[default]
    Forward,
    Reverse,
}

struct Edge {
    from: usize,
    to: usize,
    lower: Rational,
    upper: Rational,
    flow: Rational,
}

/// Plain edge-list network used by the augmenting path routines.
struct FlowGraph {
    edges: Vec<Edge>,
    incident: Vec<Vec<usize>>,
}

impl FlowGraph {
    fn new(vertices: usize) -> Self {
        FlowGraph {
            edges: Vec::new(),
            incident: vec![Vec::new(); vertices],
        }
    }

    fn add_edge(
        &mut self,
        from: usize,
        to: usize,
        lower: Rational,
        upper: Rational,
        flow: Rational,
    ) -> usize {
        let id = self.edges.len();
        self.edges.push(Edge {
            from,
            to,
            lower,
            upper,
            flow,
        });
        self.incident[from].push(id);
        self.incident[to].push(id);
        id
    }

    /// Residual capacity of `e` when leaving `at`.
    fn residual_from(&self, e: usize, at: usize) -> Rational {
        let edge = &self.edges[e];
        if edge.from == at {
            &edge.upper - &edge.flow
        } else {
            &edge.flow - &edge.lower
        }
    }

    /// Edmonds–Karp from any vertex in `from` to any vertex in `to`.
    /// Returns the amount pushed.
    fn augment_all(&mut self, from: &[usize], to: &[usize], order: SearchOrder) -> Rational {
        let n = self.incident.len();
        let mut is_target = vec![false; n];
        for &v in to {
            is_target[v] = true;
        }
        let mut total = Rational::zero();
        loop {
            let mut parent: Vec<Option<usize>> = vec![None; n];
            let mut visited = vec![false; n];
            let mut queue = VecDeque::new();
            for &v in from {
                if !visited[v] {
                    visited[v] = true;
                    queue.push_back(v);
                }
            }
            let mut reached = None;
            'bfs: while let Some(v) = queue.pop_front() {
                let scan: Box<dyn Iterator<Item = &usize>> = match order {
                    SearchOrder::Forward => Box::new(self.incident[v].iter()),
                    SearchOrder::Reverse => Box::new(self.incident[v].iter().rev()),
                };
                for &e in scan {
                    let edge = &self.edges[e];
                    let w = if edge.from == v { edge.to } else { edge.from };
                    if visited[w] || !self.residual_from(e, v).is_positive() {
                        continue;
                    }
                    visited[w] = true;
                    parent[w] = Some(e);
                    if is_target[w] {
                        reached = Some(w);
                        break 'bfs;
                    }
                    queue.push_back(w);
                }
            }
            let Some(end) = reached else { break };

            let mut path = Vec::new();
            let mut v = end;
            while let Some(e) = parent[v] {
                let edge = &self.edges[e];
                let prev = if edge.to == v { edge.from } else { edge.to };
                path.push((e, prev));
                v = prev;
            }
            let delta = path
                .iter()
                .map(|&(e, at)| self.residual_from(e, at))
                .min()
                .expect("augmenting path has at least one edge");
            for &(e, at) in &path {
                let edge = &mut self.edges[e];
                if edge.from == at {
                    edge.flow += &delta;
                } else {
                    edge.flow -= &delta;
                }
            }
            total += delta;
        }
        total
    }
}

fn big_capacity(tnet: &TimeExpandedNetwork) -> Rational {
    tnet.arcs
        .iter()
        .map(|a| &a.upper + a.lower.abs())
        .sum::<Rational>()
        + Rational::one()
}

/// Finds some flow satisfying `l ≤ f ≤ u` with conservation at every
/// non-terminal NTP, or reports `Error::Infeasible`.
pub fn feasible_flow(tnet: &TimeExpandedNetwork) -> Result<StaticFlow> {
    if tnet.arcs.iter().any(|a| a.lower > a.upper) {
        return Err(Error::Infeasible);
    }
    let n = tnet.ntp_count();
    let (hub, super_source, super_sink) = (n, n + 1, n + 2);
    let mut g = FlowGraph::new(n + 3);
    for a in &tnet.arcs {
        g.add_edge(
            tnet.ntp_index(a.tail),
            tnet.ntp_index(a.head),
            Rational::zero(),
            &a.upper - &a.lower,
            Rational::zero(),
        );
    }
    // Terminal copies may hold any imbalance; route it through a hub.
    let big = big_capacity(tnet);
    for v in tnet.sources().chain(tnet.sinks()) {
        let i = tnet.ntp_index(v);
        g.add_edge(hub, i, Rational::zero(), big.clone(), Rational::zero());
        g.add_edge(i, hub, Rational::zero(), big.clone(), Rational::zero());
    }
    let mut excess = vec![Rational::zero(); n];
    for a in &tnet.arcs {
        excess[tnet.ntp_index(a.head)] += &a.lower;
        excess[tnet.ntp_index(a.tail)] -= &a.lower;
    }
    let mut required = Rational::zero();
    for (i, e) in excess.iter().enumerate() {
        if e.is_positive() {
            g.add_edge(
                super_source,
                i,
                Rational::zero(),
                e.clone(),
                Rational::zero(),
            );
            required += e;
        } else if e.is_negative() {
            g.add_edge(i, super_sink, Rational::zero(), -e, Rational::zero());
        }
    }
    let pushed = g.augment_all(&[super_source], &[super_sink], SearchOrder::Forward);
    if pushed != required {
        return Err(Error::Infeasible);
    }
    let values = tnet
        .arcs
        .iter()
        .zip(&g.edges)
        .map(|(a, e)| &a.lower + &e.flow)
        .collect();
    Ok(StaticFlow { values })
}

/// Pushes as much flow as possible from the NTP set `from` to the set `to`,
/// starting at `start` and respecting both bounds of every arc.
pub fn max_flow(
    tnet: &TimeExpandedNetwork,
    from: &[Ntp],
    to: &[Ntp],
    start: &StaticFlow,
) -> StaticFlow {
    max_flow_ordered(tnet, from, to, start, SearchOrder::Forward)
}

pub fn max_flow_ordered(
    tnet: &TimeExpandedNetwork,
    from: &[Ntp],
    to: &[Ntp],
    start: &StaticFlow,
    order: SearchOrder,
) -> StaticFlow {
    let mut g = FlowGraph::new(tnet.ntp_count());
    for (a, f) in tnet.arcs.iter().zip(&start.values) {
        // Start values are allowed to sit below `lower`; never push them further down.
        let lower = a.lower.clone().min(f.clone());
        g.add_edge(
            tnet.ntp_index(a.tail),
            tnet.ntp_index(a.head),
            lower,
            a.upper.clone(),
            f.clone(),
        );
    }
    let from: Vec<usize> = from.iter().map(|&v| tnet.ntp_index(v)).collect();
    let to: Vec<usize> = to.iter().map(|&v| tnet.ntp_index(v)).collect();
    g.augment_all(&from, &to, order);
    StaticFlow {
        values: g.edges.into_iter().map(|e| e.flow).collect(),
    }
}

/// Minimum total source outflow over all feasible flows.
///
/// Starts from [`feasible_flow`] and then sends a maximum flow from the
/// sink copies back to the source copies, which lowers the value by the
/// amount pushed.
pub fn min_flow(tnet: &TimeExpandedNetwork) -> Result<(Rational, StaticFlow)> {
    min_flow_ordered(tnet, SearchOrder::Forward)
}

pub fn min_flow_ordered(
    tnet: &TimeExpandedNetwork,
    order: SearchOrder,
) -> Result<(Rational, StaticFlow)> {
    let start = feasible_flow(tnet)?;
    let sinks: Vec<Ntp> = tnet.sinks().collect();
    let sources: Vec<Ntp> = tnet.sources().collect();
    let flow = max_flow_ordered(tnet, &sinks, &sources, &start, order);
    Ok((flow.value(tnet), flow))
}
