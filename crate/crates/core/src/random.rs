//! Seeded random instances that are feasible by construction.
//!
//! A random flow is routed along random source-to-sink walks in the
//! time-expanded network first; capacities and lower bounds are then drawn
//! around it so that `l′ ≤ f ≤ u` holds on every departure.

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use crate::network::{ArcSpec, ArcTime, ArcTimeMap, DynamicNetwork, NodeId};
use crate::rational::Rational;

#[derive(Clone, Debug)]
pub struct RandomParams {
    pub max_nodes: usize,
    pub max_arcs: usize,
    pub max_horizon: usize,
    pub max_transit: usize,
    /// Upper end for capacities, lower bounds and flows.
    pub max_value: i64,
    pub max_walks: usize,
    /// Largest gap between a capacity and the flow under it.
    pub capacity_slack: i64,
    /// Chance that the tightest lower bound equals the flow.
    pub tight_probability: f64,
}

impl Default for RandomParams {
    fn default() -> Self {
        RandomParams {
            max_nodes: 6,
            max_arcs: 10,
            max_horizon: 5,
            max_transit: 2,
            max_value: 5,
            max_walks: 12,
            capacity_slack: 1,
            tight_probability: 0.8,
        }
    }
}

#[derive(Clone, Debug)]
pub struct RandomInstance {
    pub network: DynamicNetwork,
    /// The flow the bounds were drawn around.
    pub base_flow: ArcTimeMap<Rational>,
}

pub fn random_instance(seed: u64, params: &RandomParams) -> RandomInstance {
    let mut rng = StdRng::seed_from_u64(seed);
    let rng = &mut rng;
    let p = params;
    let n = rng.gen_range(3..=p.max_nodes.max(3));
    let horizon = rng.gen_range(1..=p.max_horizon.max(1));
    let steps = horizon + 1;

    let mut pairs: Vec<(usize, usize)> = (1..=n)
        .flat_map(|i| ((i + 1)..=n).map(move |j| (i, j)))
        .collect();
    pairs.shuffle(rng);
    let m = rng.gen_range(2..=p.max_arcs.max(2)).min(pairs.len());
    let mut ends = Vec::with_capacity(m);
    let mut transit = Vec::with_capacity(m);
    for &(i, j) in &pairs[..m] {
        ends.push(if rng.gen_bool(0.3) { (j, i) } else { (i, j) });
        transit.push(
            (0..steps)
                .map(|_| rng.gen_range(0..=p.max_transit))
                .collect::<Vec<_>>(),
        );
    }
    let (source, sink) = (1, n);
    let in_horizon =
        |k: usize, theta: usize, transit: &Vec<Vec<usize>>| theta + transit[k][theta] <= horizon;

    let mut flow = vec![vec![0i64; steps]; m];
    for _ in 0..rng.gen_range(1..=p.max_walks.max(1)) {
        let mut cur = (source, rng.gen_range(0..steps));
        let mut seen = vec![cur];
        let mut walk = Vec::new();
        for _ in 0..20 {
            if cur.0 == sink {
                break;
            }
            let options: Vec<usize> = (0..m)
                .filter(|&k| ends[k].0 == cur.0 && in_horizon(k, cur.1, &transit))
                .filter(|&k| !seen.contains(&(ends[k].1, cur.1 + transit[k][cur.1])))
                .collect();
            let Some(&k) = options.choose(rng) else { break };
            walk.push((k, cur.1));
            cur = (ends[k].1, cur.1 + transit[k][cur.1]);
            seen.push(cur);
        }
        if cur.0 == sink && !walk.is_empty() {
            let amount = rng.gen_range(1..=3);
            if walk
                .iter()
                .all(|&(k, theta)| flow[k][theta] + amount <= p.max_value)
            {
                for (k, theta) in walk {
                    flow[k][theta] += amount;
                }
            }
        }
    }

    let mut arcs = Vec::with_capacity(m);
    for k in 0..m {
        let mut spec = ArcSpec {
            from: NodeId(ends[k].0),
            to: NodeId(ends[k].1),
            transit: transit[k].clone(),
            capacity: Vec::with_capacity(steps),
            base_lower: Vec::with_capacity(steps),
            param_lower: Vec::with_capacity(steps),
        };
        for &f in &flow[k] {
            let u = (f + rng.gen_range(0..=p.capacity_slack)).min(p.max_value);
            // Tightest lower bound over λ ∈ [0, 1]; bounds close to the flow
            // make competing cuts, and hence breakpoints, likely.
            let tight = if rng.gen_bool(p.tight_probability) {
                f
            } else {
                rng.gen_range(0..=f)
            };
            let (l0, lpar) = if rng.gen_bool(0.5) {
                (tight, -rng.gen_range(0..=tight))
            } else {
                let lpar = rng.gen_range(0..=tight);
                (tight - lpar, lpar)
            };
            spec.capacity.push(Rational::from(u));
            spec.base_lower.push(Rational::from(l0));
            spec.param_lower.push(Rational::from(lpar));
        }
        arcs.push(spec);
    }
    let network = DynamicNetwork {
        node_count: n,
        arcs,
        source: NodeId(source),
        sink: NodeId(sink),
        horizon,
        lambda_max: Rational::one(),
    };
    let base_flow = ArcTimeMap::new(&network, |at: ArcTime| {
        Rational::from(flow[at.arc][at.theta])
    });
    RandomInstance { network, base_flow }
}
