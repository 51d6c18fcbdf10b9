//! Static time-space expansion of a dynamic network at a fixed `λ`.

use crate::network::{ArcTime, DynamicNetwork, NodeId};
use crate::rational::Rational;

/// Node-time pair `(i, θ)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ntp {
    pub node: NodeId,
    pub theta: usize,
}

impl Ntp {
    pub fn new(node: usize, theta: usize) -> Self {
        Ntp {
            node: NodeId(node),
            theta,
        }
    }
}

impl std::fmt::Display for Ntp {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{})", self.node, self.theta)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpandedArc {
    pub tail: Ntp,
    pub head: Ntp,
    pub upper: Rational,
    pub lower: Rational,
    pub origin: ArcTime,
}

#[derive(Clone, Debug)]
pub struct TimeExpandedNetwork {
    pub node_count: usize,
    pub horizon: usize,
    pub source: NodeId,
    pub sink: NodeId,
    pub arcs: Vec<ExpandedArc>,
}

impl TimeExpandedNetwork {
    pub fn ntp_count(&self) -> usize {
        self.node_count * (self.horizon + 1)
    }

    /// Dense index `(node - 1)·(T + 1) + θ`.
    pub fn ntp_index(&self, v: Ntp) -> usize {
        (v.node.0 - 1) * (self.horizon + 1) + v.theta
    }

    pub fn ntp_at(&self, index: usize) -> Ntp {
        Ntp::new(index / (self.horizon + 1) + 1, index % (self.horizon + 1))
    }

    pub fn ntps(&self) -> impl Iterator<Item = Ntp> + '_ {
        (0..self.ntp_count()).map(|i| self.ntp_at(i))
    }

    pub fn sources(&self) -> impl Iterator<Item = Ntp> + '_ {
        (0..=self.horizon).map(|t| Ntp {
            node: self.source,
            theta: t,
        })
    }

    pub fn sinks(&self) -> impl Iterator<Item = Ntp> + '_ {
        (0..=self.horizon).map(|t| Ntp {
            node: self.sink,
            theta: t,
        })
    }

    pub fn is_terminal(&self, v: Ntp) -> bool {
        v.node == self.source || v.node == self.sink
    }
}

/// Builds the time-space network with lower bounds evaluated at `lambda`.
/// Departures whose arrival would exceed the horizon are left out.
pub fn expand(net: &DynamicNetwork, lambda: &Rational) -> TimeExpandedNetwork {
    let arcs = net
        .departures()
        .map(|at| {
            let spec = &net.arcs[at.arc];
            ExpandedArc {
                tail: Ntp {
                    node: spec.from,
                    theta: at.theta,
                },
                head: Ntp {
                    node: spec.to,
                    theta: net.arrival(at),
                },
                upper: spec.capacity[at.theta].clone(),
                lower: spec.lower_bound(at.theta, lambda),
                origin: at,
            }
        })
        .collect();
    TimeExpandedNetwork {
        node_count: net.node_count,
        horizon: net.horizon,
        source: net.source,
        sink: net.sink,
        arcs,
    }
}
