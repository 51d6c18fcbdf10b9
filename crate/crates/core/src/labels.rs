//! Quickest dynamic path labels.
//!
//! Labels `τ(i, θ)` hold the least signed transit time of a residual path
//! from `(i, θ)` to any sink copy; they are computed backward from the sink
//! copies. Reverse residual arcs carry negative transit times, so a popped
//! NTP can still improve later and is then re-queued (label correcting).
//! Every residual cycle has total transit zero, so labels are bounded below
//! and the search terminates.
//!
//! Candidates with equal labels leave the queue in the order they were
//! (re)inserted.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::expand::Ntp;
use crate::network::{DynamicNetwork, NodeId};
use crate::residual::{DynPath, Hop, ResidualState};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelState {
    horizon: usize,
    source: NodeId,
    sink: NodeId,
    /// `None` is an infinite label.
    tau: Vec<Option<i64>>,
    succ: Vec<Option<Hop>>,
    /// Least source-copy label `τ̄`.
    pub best: Option<i64>,
    /// Earliest source copy attaining `best`.
    pub entry: Option<usize>,
}

impl LabelState {
    fn index(&self, v: Ntp) -> usize {
        (v.node.0 - 1) * (self.horizon + 1) + v.theta
    }

    pub fn tau(&self, v: Ntp) -> Option<i64> {
        self.tau[self.index(v)]
    }

    /// First hop of the quickest path from `v`, if labeled.
    pub fn successor(&self, v: Ntp) -> Option<&Hop> {
        self.succ[self.index(v)].as_ref()
    }

    /// Whether some source copy reaches a sink copy.
    pub fn reachable(&self) -> bool {
        self.best.is_some()
    }
}

/// Runs the label search on the current residual network.
pub fn ls(state: &ResidualState, net: &DynamicNetwork) -> LabelState {
    let steps = net.time_steps();
    let count = net.node_count * steps;
    let idx = |v: Ntp| (v.node.0 - 1) * steps + v.theta;

    let mut tau: Vec<Option<i64>> = vec![None; count];
    let mut succ: Vec<Option<Hop>> = vec![None; count];
    let mut seq_of = vec![0u64; count];
    let mut queued = vec![false; count];
    let mut heap = BinaryHeap::new();
    let mut seq = 0u64;

    for theta in 0..steps {
        let v = Ntp {
            node: net.sink,
            theta,
        };
        tau[idx(v)] = Some(0);
        seq += 1;
        seq_of[idx(v)] = seq;
        queued[idx(v)] = true;
        heap.push(Reverse((0i64, seq, idx(v))));
    }

    while let Some(Reverse((label, s, j))) = heap.pop() {
        if !queued[j] || seq_of[j] != s {
            continue;
        }
        queued[j] = false;
        let head = Ntp::new(j / steps + 1, j % steps);
        state.for_each_arc_into(net, head.node, head.theta, |arc| {
            // Sink copies end every path; their labels stay at zero.
            if arc.tail.node == net.sink {
                return;
            }
            let transit = head.theta as i64 - arc.tail.theta as i64;
            let candidate = label + transit;
            let i = idx(arc.tail);
            if tau[i].is_none_or(|t| candidate < t) {
                tau[i] = Some(candidate);
                succ[i] = Some(Hop {
                    tail: arc.tail,
                    head,
                    direction: arc.direction,
                    origin: arc.origin,
                });
                seq += 1;
                seq_of[i] = seq;
                queued[i] = true;
                heap.push(Reverse((candidate, seq, i)));
            }
        });
    }

    let mut best = None;
    let mut entry = None;
    for theta in 0..steps {
        if let Some(t) = tau[idx(Ntp {
            node: net.source,
            theta,
        })] {
            if best.is_none_or(|b| t < b) {
                best = Some(t);
                entry = Some(theta);
            }
        }
    }
    LabelState {
        horizon: net.horizon,
        source: net.source,
        sink: net.sink,
        tau,
        succ,
        best,
        entry,
    }
}

/// Follows successors from the entry source copy to the first sink copy.
pub fn extract_path(labels: &LabelState) -> Result<DynPath> {
    let theta = labels
        .entry
        .ok_or_else(|| Error::Internal("no source copy reaches a sink copy".into()))?;
    let mut v = Ntp {
        node: labels.source,
        theta,
    };
    let mut hops = Vec::new();
    let limit = labels.tau.len();
    while v.node != labels.sink {
        let hop = *labels
            .successor(v)
            .ok_or_else(|| Error::Internal(format!("successor chain broken at {v}")))?;
        hops.push(hop);
        if hops.len() > limit {
            return Err(Error::Internal("successor chain is cyclic".into()));
        }
        v = hop.head;
    }
    Ok(DynPath { hops })
}
