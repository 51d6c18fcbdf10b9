//! The parametric discrete-time dynamic network.
//!
//! Every arc carries dense per-time-step tables of length `T + 1` for its
//! transit time, capacity, and the two parts of its affine lower bound
//! `l0 + λ·lpar`, with `λ ∈ [0, Λ]`.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// 1-based node identifier.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NodeId(pub usize);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// An arc departure: arc index `arc` entered at time step `theta`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ArcTime {
    pub arc: usize,
    pub theta: usize,
}

impl ArcTime {
    pub fn new(arc: usize, theta: usize) -> Self {
        ArcTime { arc, theta }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArcSpec {
    pub from: NodeId,
    pub to: NodeId,
    /// Transit time per departure step.
    pub transit: Vec<usize>,
    pub capacity: Vec<Rational>,
    /// Lower bound at `λ = 0`.
    pub base_lower: Vec<Rational>,
    /// Coefficient of `λ` in the lower bound.
    pub param_lower: Vec<Rational>,
}

impl ArcSpec {
    /// `l0[θ] + λ·lpar[θ]`, without range checks.
    pub fn lower_bound(&self, theta: usize, lambda: &Rational) -> Rational {
        &self.base_lower[theta] + lambda * &self.param_lower[theta]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DynamicNetwork {
    pub node_count: usize,
    pub arcs: Vec<ArcSpec>,
    pub source: NodeId,
    pub sink: NodeId,
    /// Last time step `T`; time steps are `0..=T`.
    pub horizon: usize,
    /// Upper end `Λ` of the parameter interval.
    pub lambda_max: Rational,
}

/// One broken rule found by [`DynamicNetwork::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    NonPositiveLambdaMax,
    NoNodes,
    TerminalOutOfRange {
        node: NodeId,
    },
    SourceIsSink,
    NodeOutOfRange {
        arc: usize,
        node: NodeId,
    },
    SelfLoop {
        arc: usize,
    },
    ParallelArcs {
        first: usize,
        second: usize,
    },
    OppositeArcs {
        first: usize,
        second: usize,
    },
    TableLength {
        arc: usize,
        table: &'static str,
        expected: usize,
        found: usize,
    },
    CapacityBelowBaseLower {
        arc: usize,
        theta: usize,
    },
    ParamLowerTooLarge {
        arc: usize,
        theta: usize,
    },
    NegativeLowerBound {
        arc: usize,
        theta: usize,
        lambda: Rational,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Violation::*;
        match self {
            NonPositiveLambdaMax => write!(f, "lambda_max must be positive"),
            NoNodes => write!(f, "network has no nodes"),
            TerminalOutOfRange { node } => write!(f, "terminal node {node} out of range"),
            SourceIsSink => write!(f, "source and sink coincide"),
            NodeOutOfRange { arc, node } => write!(f, "arc {arc}: node {node} out of range"),
            SelfLoop { arc } => write!(f, "arc {arc}: self loop"),
            ParallelArcs { first, second } => write!(f, "parallel arcs {first} and {second}"),
            OppositeArcs { first, second } => write!(f, "opposite arcs {first} and {second}"),
            TableLength {
                arc,
                table,
                expected,
                found,
            } => {
                write!(
                    f,
                    "arc {arc}: table {table} has length {found}, expected {expected}"
                )
            }
            CapacityBelowBaseLower { arc, theta } => {
                write!(f, "arc {arc} at θ={theta}: u below l0")
            }
            ParamLowerTooLarge { arc, theta } => {
                write!(f, "arc {arc} at θ={theta}: Lpar exceeds (u-l0)/Λ")
            }
            NegativeLowerBound { arc, theta, lambda } => {
                write!(
                    f,
                    "arc {arc} at θ={theta}: lower bound negative at λ={lambda}"
                )
            }
        }
    }
}

impl DynamicNetwork {
    pub fn time_steps(&self) -> usize {
        self.horizon + 1
    }

    /// Whether flow entering `arc` at `theta` arrives within the horizon.
    pub fn within_horizon(&self, at: ArcTime) -> bool {
        at.theta + self.arcs[at.arc].transit[at.theta] <= self.horizon
    }

    pub fn arrival(&self, at: ArcTime) -> usize {
        at.theta + self.arcs[at.arc].transit[at.theta]
    }

    /// All departures `(arc, θ)` with `θ + h ≤ T`, arc-major.
    pub fn departures(&self) -> impl Iterator<Item = ArcTime> + '_ {
        (0..self.arcs.len()).flat_map(move |arc| {
            (0..=self.horizon)
                .map(move |theta| ArcTime::new(arc, theta))
                .filter(move |&at| self.within_horizon(at))
        })
    }

    /// Checks every structural and numeric rule; an empty result means valid.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if !self.lambda_max.is_positive() {
            out.push(Violation::NonPositiveLambdaMax);
        }
        if self.node_count == 0 {
            out.push(Violation::NoNodes);
        }
        let node_ok = |v: NodeId| v.0 >= 1 && v.0 <= self.node_count;
        for node in [self.source, self.sink] {
            if !node_ok(node) {
                out.push(Violation::TerminalOutOfRange { node });
            }
        }
        if self.source == self.sink {
            out.push(Violation::SourceIsSink);
        }

        let mut seen: HashMap<(NodeId, NodeId), usize> = HashMap::new();
        for (k, arc) in self.arcs.iter().enumerate() {
            for node in [arc.from, arc.to] {
                if !node_ok(node) {
                    out.push(Violation::NodeOutOfRange { arc: k, node });
                }
            }
            if arc.from == arc.to {
                out.push(Violation::SelfLoop { arc: k });
            }
            if let Some(&first) = seen.get(&(arc.from, arc.to)) {
                out.push(Violation::ParallelArcs { first, second: k });
            } else if let Some(&first) = seen.get(&(arc.to, arc.from)) {
                out.push(Violation::OppositeArcs { first, second: k });
            }
            seen.entry((arc.from, arc.to)).or_insert(k);

            let expected = self.time_steps();
            let lengths = [
                ("h", arc.transit.len()),
                ("u", arc.capacity.len()),
                ("l0", arc.base_lower.len()),
                ("L", arc.param_lower.len()),
            ];
            let mut lengths_ok = true;
            for (table, found) in lengths {
                if found != expected {
                    lengths_ok = false;
                    out.push(Violation::TableLength {
                        arc: k,
                        table,
                        expected,
                        found,
                    });
                }
            }
            if !lengths_ok || !self.lambda_max.is_positive() {
                continue;
            }
            for theta in 0..expected {
                let u = &arc.capacity[theta];
                let l0 = &arc.base_lower[theta];
                if u < l0 {
                    out.push(Violation::CapacityBelowBaseLower { arc: k, theta });
                }
                if arc.param_lower[theta] > (u - l0) / &self.lambda_max {
                    out.push(Violation::ParamLowerTooLarge { arc: k, theta });
                }
                for lambda in [Rational::zero(), self.lambda_max.clone()] {
                    if arc.lower_bound(theta, &lambda).is_negative() {
                        out.push(Violation::NegativeLowerBound {
                            arc: k,
                            theta,
                            lambda,
                        });
                    }
                }
            }
        }
        out
    }

    pub fn ensure_valid(&self) -> Result<()> {
        let v = self.validate();
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidNetwork(v))
        }
    }

    /// Parametric lower bound `l0 + λ·lpar` of `arc` at `theta`.
    pub fn lower_bound_at(&self, arc: usize, theta: usize, lambda: &Rational) -> Result<Rational> {
        let spec = self
            .arcs
            .get(arc)
            .ok_or_else(|| Error::Input(format!("arc index {arc} out of range")))?;
        if theta > self.horizon {
            return Err(Error::Input(format!(
                "θ={theta} exceeds horizon {}",
                self.horizon
            )));
        }
        self.check_lambda(lambda)?;
        Ok(spec.lower_bound(theta, lambda))
    }

    pub fn check_lambda(&self, lambda: &Rational) -> Result<()> {
        if lambda.is_negative() || lambda > &self.lambda_max {
            return Err(Error::Input(format!(
                "λ={lambda} outside [0, {}]",
                self.lambda_max
            )));
        }
        Ok(())
    }

    pub fn arc_index(&self, from: NodeId, to: NodeId) -> Option<usize> {
        self.arcs.iter().position(|a| a.from == from && a.to == to)
    }
}

/// Dense map over arc departures; slots with `θ + h > T` are always empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArcTimeMap<V> {
    steps: usize,
    slots: Vec<Option<V>>,
}

impl<V> ArcTimeMap<V> {
    pub fn new(net: &DynamicNetwork, mut init: impl FnMut(ArcTime) -> V) -> Self {
        let steps = net.time_steps();
        let mut slots = Vec::with_capacity(net.arcs.len() * steps);
        for arc in 0..net.arcs.len() {
            for theta in 0..steps {
                let at = ArcTime::new(arc, theta);
                slots.push(net.within_horizon(at).then(|| init(at)));
            }
        }
        ArcTimeMap { steps, slots }
    }

    pub fn try_new<E>(
        net: &DynamicNetwork,
        mut init: impl FnMut(ArcTime) -> std::result::Result<V, E>,
    ) -> std::result::Result<Self, E> {
        let steps = net.time_steps();
        let mut slots = Vec::with_capacity(net.arcs.len() * steps);
        for arc in 0..net.arcs.len() {
            for theta in 0..steps {
                let at = ArcTime::new(arc, theta);
                slots.push(if net.within_horizon(at) {
                    Some(init(at)?)
                } else {
                    None
                });
            }
        }
        Ok(ArcTimeMap { steps, slots })
    }

    fn index(&self, at: ArcTime) -> usize {
        at.arc * self.steps + at.theta
    }

    pub fn get(&self, at: ArcTime) -> Option<&V> {
        if at.theta >= self.steps {
            return None;
        }
        self.slots.get(self.index(at)).and_then(Option::as_ref)
    }

    pub fn get_mut(&mut self, at: ArcTime) -> Option<&mut V> {
        if at.theta >= self.steps {
            return None;
        }
        let i = self.index(at);
        self.slots.get_mut(i).and_then(Option::as_mut)
    }

    pub fn iter(&self) -> impl Iterator<Item = (ArcTime, &V)> + '_ {
        let steps = self.steps;
        self.slots
            .iter()
            .enumerate()
            .filter_map(move |(i, v)| v.as_ref().map(|v| (ArcTime::new(i / steps, i % steps), v)))
    }

    pub fn len(&self) -> usize {
        self.slots.iter().filter(|s| s.is_some()).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn map<W>(&self, mut f: impl FnMut(ArcTime, &V) -> W) -> ArcTimeMap<W> {
        let steps = self.steps;
        ArcTimeMap {
            steps,
            slots: self
                .slots
                .iter()
                .enumerate()
                .map(|(i, v)| v.as_ref().map(|v| f(ArcTime::new(i / steps, i % steps), v)))
                .collect(),
        }
    }
}

impl<V> std::ops::Index<ArcTime> for ArcTimeMap<V> {
    type Output = V;
    fn index(&self, at: ArcTime) -> &V {
        self.get(at).unwrap_or_else(|| panic!("no slot for {at:?}"))
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(n: i64) -> Rational {
        Rational::from(n)
    }

    fn one_arc(u: i64, l0: i64, lpar: i64) -> DynamicNetwork {
        DynamicNetwork {
            node_count: 2,
            arcs: vec![ArcSpec {
                from: NodeId(1),
                to: NodeId(2),
                transit: vec![1],
                capacity: vec![r(u)],
                base_lower: vec![r(l0)],
                param_lower: vec![r(lpar)],
            }],
            source: NodeId(1),
            sink: NodeId(2),
            horizon: 0,
            lambda_max: r(1),
        }
    }

    #[test]
    fn four_node_network_is_valid() {
        assert!(crate::example::four_node_network().validate().is_empty());
    }

    #[test]
    fn param_part_too_large() {
        let v = one_arc(5, 3, 3).validate();
        assert_eq!(v, vec![Violation::ParamLowerTooLarge { arc: 0, theta: 0 }]);
        assert!(v[0].to_string().contains("Lpar exceeds (u-l0)/Λ"));
    }

    #[test]
    fn opposite_and_parallel_arcs() {
        let mut net = crate::example::four_node_network();
        let mut back = net.arcs[0].clone();
        std::mem::swap(&mut back.from, &mut back.to);
        net.arcs.push(back);
        net.arcs.push(net.arcs[1].clone());
        let v = net.validate();
        assert!(v.contains(&Violation::OppositeArcs {
            first: 0,
            second: 5
        }));
        assert!(v.contains(&Violation::ParallelArcs {
            first: 1,
            second: 6
        }));
    }

    #[test]
    fn negative_lower_bound_and_capacity() {
        let v = one_arc(2, 1, -3).validate();
        assert_eq!(
            v,
            vec![Violation::NegativeLowerBound {
                arc: 0,
                theta: 0,
                lambda: r(1)
            }]
        );
        let v = one_arc(1, 2, 0).validate();
        assert!(v.contains(&Violation::CapacityBelowBaseLower { arc: 0, theta: 0 }));
    }

    #[test]
    fn structural_violations() {
        let mut net = one_arc(1, 0, 0);
        net.sink = NodeId(1);
        net.arcs[0].capacity.push(r(1));
        net.lambda_max = r(0);
        let v = net.validate();
        assert!(v.contains(&Violation::SourceIsSink));
        assert!(v.contains(&Violation::NonPositiveLambdaMax));
        assert!(v.contains(&Violation::TableLength {
            arc: 0,
            table: "u",
            expected: 1,
            found: 2
        }));
    }

    #[test]
    fn lower_bound_examples() {
        let net = crate::example::four_node_network();
        let a13 = net.arc_index(NodeId(1), NodeId(3)).unwrap();
        let a12 = net.arc_index(NodeId(1), NodeId(2)).unwrap();
        assert_eq!(
            net.lower_bound_at(a13, 0, &Rational::new(1, 2)).unwrap(),
            r(3)
        );
        assert_eq!(net.lower_bound_at(a12, 0, &r(1)).unwrap(), r(1));
        for (k, arc) in net.arcs.iter().enumerate() {
            for theta in 0..=net.horizon {
                assert_eq!(
                    net.lower_bound_at(k, theta, &r(0)).unwrap(),
                    arc.base_lower[theta]
                );
            }
        }
        assert!(net.lower_bound_at(a13, 4, &r(0)).is_err());
        assert!(net.lower_bound_at(a13, 0, &r(2)).is_err());
        assert!(net.lower_bound_at(a13, 0, &r(-1)).is_err());
    }

    #[test]
    fn bounds_hold_at_both_endpoints() {
        let net = crate::example::four_node_network();
        for arc in &net.arcs {
            for theta in 0..=net.horizon {
                for lambda in [r(0), net.lambda_max.clone()] {
                    assert!(arc.lower_bound(theta, &lambda) <= arc.capacity[theta]);
                }
            }
        }
    }

    proptest! {
        #[test]
        fn lower_bound_is_affine(a in 0i64..=1000, b in 0i64..=1000, arc in 0usize..5, theta in 0usize..4) {
            let net = crate::example::four_node_network();
            let l1 = Rational::new(a, 1000);
            let l2 = Rational::new(b, 1000);
            let mid = (&l1 + &l2) / Rational::from(2);
            let lhs = net.lower_bound_at(arc, theta, &l1).unwrap() + net.lower_bound_at(arc, theta, &l2).unwrap();
            let rhs = Rational::from(2) * net.lower_bound_at(arc, theta, &mid).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
