//! A small four-node instance with horizon `T = 3` and `Λ = 1`, together
//! with a hand-built feasible flow for it. Used by tests, the CLI fixtures
//! and the README.

use crate::network::{ArcSpec, ArcTimeMap, DynamicNetwork, NodeId};
use crate::rational::Rational;

fn ints(v: [i64; 4]) -> Vec<Rational> {
    v.iter().map(|&x| Rational::from(x)).collect()
}

fn arc(from: usize, to: usize, h: [usize; 4], l0: [i64; 4], lpar: [i64; 4]) -> ArcSpec {
    ArcSpec {
        from: NodeId(from),
        to: NodeId(to),
        transit: h.to_vec(),
        capacity: ints([5; 4]),
        base_lower: ints(l0),
        param_lower: ints(lpar),
    }
}

/// Source 1, sink 4, arcs (1,2), (1,3), (2,3), (2,4), (3,4) in that order.
pub fn four_node_network() -> DynamicNetwork {
    DynamicNetwork {
        node_count: 4,
        arcs: vec![
            arc(1, 2, [1, 2, 2, 2], [3, 0, 0, 0], [-2, 0, 0, 0]),
            arc(1, 3, [1, 1, 2, 2], [1, 1, 0, 0], [4, 1, 0, 0]),
            arc(2, 3, [1, 1, 1, 1], [0, 0, 0, 0], [0, 3, 0, 0]),
            arc(2, 4, [1, 1, 2, 2], [0, 0, 0, 0], [0, 0, 0, 0]),
            arc(3, 4, [2, 2, 1, 1], [0, 2, 2, 0], [0, 0, -2, 0]),
        ],
        source: NodeId(1),
        sink: NodeId(4),
        horizon: 3,
        lambda_max: Rational::one(),
    }
}

/// Per-arc flow tables matching the arc order of [`four_node_network`].
pub const FOUR_NODE_BASE_FLOW: [[i64; 4]; 5] = [
    [5, 0, 0, 0],
    [5, 2, 0, 0],
    [0, 3, 0, 0],
    [0, 2, 0, 0],
    [0, 5, 5, 0],
];

/// Feasible flow of value 12, valid against the tightest lower bounds.
pub fn four_node_base_flow() -> ArcTimeMap<Rational> {
    let net = four_node_network();
    ArcTimeMap::new(&net, |at| {
        Rational::from(FOUR_NODE_BASE_FLOW[at.arc][at.theta])
    })
}
