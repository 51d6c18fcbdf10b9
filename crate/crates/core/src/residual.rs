//! Parametric residual network for flow decreases.
//!
//! On the current subinterval `[λ_k, λ_{k+1}]` every residual capacity is an
//! affine function `α + β·(λ − λ_k)`. For each in-horizon departure
//! `(arc, θ)` of an original arc `(i, j)` the state keeps
//!
//! * a forward residual `(i, θ) → (j, θ + h)`: how far the flow may still be
//!   decreased, `f − l(λ)`;
//! * a reverse residual `(j, θ + h) → (i, θ)`: how far it may be increased,
//!   `u − f`, traversed with transit time `−h`;
//! * the flow itself, `f + F·(λ − λ_k)`.

use std::fmt;

use crate::error::{Error, Result};
use crate::expand::Ntp;
use crate::network::{ArcTime, ArcTimeMap, DynamicNetwork, NodeId};
use crate::rational::Rational;

/// Affine function `alpha + beta·(λ − λ_k)`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Affine {
    pub alpha: Rational,
    pub beta: Rational,
}

impl Affine {
    pub fn new(alpha: Rational, beta: Rational) -> Self {
        Affine { alpha, beta }
    }

    pub fn at(&self, lambda: &Rational, lambda_k: &Rational) -> Rational {
        &self.alpha + &self.beta * (lambda - lambda_k)
    }

    /// Positive just to the right of `λ_k`: `α > 0`, or `α = 0` and `β > 0`.
    pub fn is_lex_positive(&self) -> bool {
        self.alpha.is_positive() || (self.alpha.is_zero() && self.beta.is_positive())
    }

    /// Same function written as `c + d·λ`.
    pub fn rebased(&self, lambda_k: &Rational) -> (Rational, Rational) {
        (&self.alpha - &self.beta * lambda_k, self.beta.clone())
    }
}

impl fmt::Display for Affine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}·(λ−λk)", self.alpha, self.beta)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    Forward,
    Reverse,
}

/// One step of a dynamic path.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Hop {
    pub tail: Ntp,
    pub head: Ntp,
    pub direction: Direction,
    /// Underlying original arc and its departure step.
    pub origin: ArcTime,
}

impl Hop {
    /// Signed transit time: `h` forward, `−h` reverse.
    pub fn transit(&self) -> i64 {
        self.head.theta as i64 - self.tail.theta as i64
    }
}

/// A source-to-sink path in the residual network.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct DynPath {
    pub hops: Vec<Hop>,
}

impl DynPath {
    pub fn ntps(&self) -> Vec<Ntp> {
        let mut out: Vec<Ntp> = self.hops.first().map(|h| h.tail).into_iter().collect();
        out.extend(self.hops.iter().map(|h| h.head));
        out
    }

    /// NTPs as `(node, θ)` pairs.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.ntps().iter().map(|v| (v.node.0, v.theta)).collect()
    }

    pub fn transit(&self) -> i64 {
        self.hops.iter().map(Hop::transit).sum()
    }
}

impl fmt::Display for DynPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.ntps().iter().map(|v| v.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Slot {
    pub forward: Affine,
    pub reverse: Affine,
    /// `f_k + F_k·(λ − λ_k)`.
    pub flow: Affine,
}

/// Residual coefficients for every in-horizon departure, plus the
/// incidence lists the label search walks.
#[derive(Clone, Debug)]
pub struct ResidualState {
    pub lambda_k: Rational,
    pub slots: ArcTimeMap<Slot>,
    /// `into[j][ϑ]`: departures `(arc, θ)` of arcs entering `j` with arrival `ϑ`.
    into: Vec<Vec<Vec<ArcTime>>>,
    /// `out_of[j]`: arcs leaving `j`.
    out_of: Vec<Vec<usize>>,
}

/// Initializes coefficients from a base flow:
/// forward `α = f − l0 − λ_k·lpar`, `β = −lpar`; reverse `α = u − f`, `β = 0`.
pub fn build_residual(
    net: &DynamicNetwork,
    base_flow: &ArcTimeMap<Rational>,
    lambda_k: &Rational,
) -> Result<ResidualState> {
    let flow = ArcTimeMap::try_new(net, |at| {
        base_flow
            .get(at)
            .map(|f| Affine::new(f.clone(), Rational::zero()))
            .ok_or_else(|| {
                Error::Input(format!(
                    "base flow missing arc {} at θ={}",
                    at.arc, at.theta
                ))
            })
    })?;
    residual_of(net, &flow, lambda_k)
}

/// Residual network of a parametric flow `f + F·(λ − λ_k)`:
/// forward `α = f − l(λ_k)`, `β = F − lpar`; reverse `α = u − f`, `β = −F`.
pub fn residual_of(
    net: &DynamicNetwork,
    flow: &ArcTimeMap<Affine>,
    lambda_k: &Rational,
) -> Result<ResidualState> {
    let slots = ArcTimeMap::try_new(net, |at| {
        let spec = &net.arcs[at.arc];
        let f = flow.get(at).ok_or_else(|| {
            Error::Input(format!("flow missing arc {} at θ={}", at.arc, at.theta))
        })?;
        let forward = Affine::new(
            &f.alpha - &spec.base_lower[at.theta] - lambda_k * &spec.param_lower[at.theta],
            &f.beta - &spec.param_lower[at.theta],
        );
        if forward.alpha.is_negative() {
            return Err(Error::Internal(format!(
                "infeasible base flow at λ_k={lambda_k}: arc {} θ={} below its lower bound",
                at.arc, at.theta
            )));
        }
        Ok(Slot {
            forward,
            reverse: Affine::new(&spec.capacity[at.theta] - &f.alpha, -&f.beta),
            flow: f.clone(),
        })
    })?;

    let steps = net.time_steps();
    let mut into = vec![vec![Vec::new(); steps]; net.node_count + 1];
    let mut out_of = vec![Vec::new(); net.node_count + 1];
    for at in net.departures() {
        into[net.arcs[at.arc].to.0][net.arrival(at)].push(at);
    }
    for (k, spec) in net.arcs.iter().enumerate() {
        out_of[spec.from.0].push(k);
    }
    Ok(ResidualState {
        lambda_k: lambda_k.clone(),
        slots,
        into,
        out_of,
    })
}

/// A residual arc entering some NTP, as seen from that NTP.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IncomingArc {
    pub tail: Ntp,
    pub direction: Direction,
    pub origin: ArcTime,
    pub coeff: Affine,
}

impl ResidualState {
    pub fn slot(&self, at: ArcTime) -> Option<&Slot> {
        self.slots.get(at)
    }

    pub fn coeff(&self, at: ArcTime, dir: Direction) -> &Affine {
        let slot = &self.slots[at];
        match dir {
            Direction::Forward => &slot.forward,
            Direction::Reverse => &slot.reverse,
        }
    }

    /// Residual arcs `(i, θ) → (j, ϑ)` currently traversable, i.e. with a
    /// lexicographically positive coefficient pair.
    pub fn residual_arcs_into(
        &self,
        net: &DynamicNetwork,
        j: NodeId,
        vartheta: usize,
    ) -> Vec<IncomingArc> {
        let mut out = Vec::new();
        self.for_each_arc_into(net, j, vartheta, |a| out.push(a.clone()));
        out
    }

    /// Visits forward arcs first (grouped by original arc in input order,
    /// then by departure θ), then reverse arcs in input order.
    pub(crate) fn for_each_arc_into(
        &self,
        net: &DynamicNetwork,
        j: NodeId,
        vartheta: usize,
        mut visit: impl FnMut(&IncomingArc),
    ) {
        let Some(layers) = self.into.get(j.0) else {
            return;
        };
        if let Some(list) = layers.get(vartheta) {
            for &at in list {
                let slot = &self.slots[at];
                if slot.forward.is_lex_positive() {
                    visit(&IncomingArc {
                        tail: Ntp {
                            node: net.arcs[at.arc].from,
                            theta: at.theta,
                        },
                        direction: Direction::Forward,
                        origin: at,
                        coeff: slot.forward.clone(),
                    });
                }
            }
        }
        for &k in &self.out_of[j.0] {
            let at = ArcTime::new(k, vartheta);
            let Some(slot) = self.slots.get(at) else {
                continue;
            };
            if slot.reverse.is_lex_positive() {
                visit(&IncomingArc {
                    tail: Ntp {
                        node: net.arcs[k].to,
                        theta: net.arrival(at),
                    },
                    direction: Direction::Reverse,
                    origin: at,
                    coeff: slot.reverse.clone(),
                });
            }
        }
    }

    /// Decreases flow along `path` by `alpha + beta·(λ − λ_k)`.
    ///
    /// Each traversed residual loses `(alpha, beta)` and its mate gains it.
    /// Forward hops lower the underlying flow, reverse hops raise it.
    pub fn augment(&mut self, path: &DynPath, alpha: &Rational, beta: &Rational) -> Result<()> {
        for hop in &path.hops {
            let slot = self.slots.get_mut(hop.origin).ok_or_else(|| {
                Error::Internal(format!("path uses unknown departure {:?}", hop.origin))
            })?;
            let (used, mate) = match hop.direction {
                Direction::Forward => (&mut slot.forward, &mut slot.reverse),
                Direction::Reverse => (&mut slot.reverse, &mut slot.forward),
            };
            used.alpha -= alpha;
            used.beta -= beta;
            mate.alpha += alpha;
            mate.beta += beta;
            if used.alpha.is_negative() {
                return Err(Error::Internal(format!(
                    "negative residual after augmentation on {:?}",
                    hop.origin
                )));
            }
            match hop.direction {
                Direction::Forward => {
                    slot.flow.alpha -= alpha;
                    slot.flow.beta -= beta;
                }
                Direction::Reverse => {
                    slot.flow.alpha += alpha;
                    slot.flow.beta += beta;
                }
            }
        }
        Ok(())
    }

    /// Current parametric flow per departure.
    pub fn flow(&self) -> ArcTimeMap<Affine> {
        self.slots.map(|_, s| s.flow.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::example::{four_node_base_flow, four_node_network};

    fn r(n: i64) -> Rational {
        Rational::from(n)
    }

    fn arc(net: &DynamicNetwork, i: usize, j: usize) -> usize {
        net.arc_index(NodeId(i), NodeId(j)).unwrap()
    }

    fn state() -> (DynamicNetwork, ResidualState) {
        let net = four_node_network();
        let st = build_residual(&net, &four_node_base_flow(), &r(0)).unwrap();
        (net, st)
    }

    fn hop(net: &DynamicNetwork, dir: Direction, i: usize, j: usize, theta: usize) -> Hop {
        let at = ArcTime::new(arc(net, i, j), theta);
        let (from, to) = (
            Ntp {
                node: net.arcs[at.arc].from,
                theta,
            },
            Ntp {
                node: net.arcs[at.arc].to,
                theta: net.arrival(at),
            },
        );
        match dir {
            Direction::Forward => Hop {
                tail: from,
                head: to,
                direction: dir,
                origin: at,
            },
            Direction::Reverse => Hop {
                tail: to,
                head: from,
                direction: dir,
                origin: at,
            },
        }
    }

    #[test]
    fn initial_coefficients() {
        let (net, st) = state();
        let a13 = ArcTime::new(arc(&net, 1, 3), 0);
        assert_eq!(st.coeff(a13, Direction::Forward), &Affine::new(r(4), r(-4)));
        assert_eq!(st.coeff(a13, Direction::Reverse), &Affine::new(r(0), r(0)));
        let a34 = ArcTime::new(arc(&net, 3, 4), 1);
        assert_eq!(st.coeff(a34, Direction::Forward), &Affine::new(r(3), r(0)));
    }

    #[test]
    fn saturated_lower_bound_is_absent() {
        let (net, st) = state();
        // (2,4) at θ=0 carries f = l0 = 0 with lpar = 0.
        let at = ArcTime::new(arc(&net, 2, 4), 0);
        assert_eq!(st.coeff(at, Direction::Forward), &Affine::default());
        let into = st.residual_arcs_into(&net, NodeId(4), 1);
        assert!(into
            .iter()
            .all(|a| a.origin != at || a.direction != Direction::Forward));
    }

    #[test]
    fn build_rejects_infeasible_base_flow() {
        let net = four_node_network();
        let mut f = four_node_base_flow();
        *f.get_mut(ArcTime::new(0, 0)).unwrap() = r(2);
        assert!(matches!(
            build_residual(&net, &f, &r(0)),
            Err(Error::Internal(_))
        ));
    }

    #[test]
    fn arcs_into_examples() {
        let (net, st) = state();
        let into = st.residual_arcs_into(&net, NodeId(3), 2);
        let a13 = ArcTime::new(arc(&net, 1, 3), 1);
        let found = into
            .iter()
            .find(|a| a.origin == a13 && a.direction == Direction::Forward)
            .unwrap();
        assert_eq!(found.tail, Ntp::new(1, 1));
        assert_eq!(found.coeff.alpha, r(1));

        // Node 1 has no incoming arcs, and its outgoing reverse residuals at
        // θ=3 fall outside the horizon.
        assert!(st.residual_arcs_into(&net, NodeId(1), 3).is_empty());
    }

    #[test]
    fn zero_alpha_positive_beta_is_traversable() {
        let (net, mut st) = state();
        let at = ArcTime::new(arc(&net, 2, 4), 0);
        st.slots.get_mut(at).unwrap().forward = Affine::new(r(0), r(1));
        let into = st.residual_arcs_into(&net, NodeId(4), 1);
        assert!(into
            .iter()
            .any(|a| a.origin == at && a.direction == Direction::Forward));
        st.slots.get_mut(at).unwrap().forward = Affine::new(r(0), r(-1));
        let into = st.residual_arcs_into(&net, NodeId(4), 1);
        assert!(!into
            .iter()
            .any(|a| a.origin == at && a.direction == Direction::Forward));
    }

    #[test]
    fn first_augmentation() {
        let (net, mut st) = state();
        let path = DynPath {
            hops: vec![
                hop(&net, Direction::Forward, 1, 3, 1),
                hop(&net, Direction::Reverse, 2, 3, 1),
                hop(&net, Direction::Forward, 2, 4, 1),
            ],
        };
        assert_eq!(path.pairs(), vec![(1, 1), (3, 2), (2, 1), (4, 2)]);
        assert_eq!(path.transit(), 1);
        st.augment(&path, &r(1), &r(-1)).unwrap();
        let a13 = ArcTime::new(arc(&net, 1, 3), 1);
        assert_eq!(st.slot(a13).unwrap().flow, Affine::new(r(1), r(1)));
        let a23 = ArcTime::new(arc(&net, 2, 3), 1);
        assert_eq!(st.slot(a23).unwrap().flow, Affine::new(r(4), r(-1)));
        assert_eq!(st.coeff(a23, Direction::Forward), &Affine::new(r(4), r(-4)));
    }

    #[test]
    fn identity_augmentation() {
        let (net, mut st) = state();
        let before = st.slots.clone();
        let path = DynPath {
            hops: vec![
                hop(&net, Direction::Forward, 1, 2, 0),
                hop(&net, Direction::Forward, 2, 4, 1),
            ],
        };
        st.augment(&path, &r(0), &r(0)).unwrap();
        assert_eq!(st.slots, before);
    }

    #[test]
    fn over_augmentation_is_an_error() {
        let (net, mut st) = state();
        let path = DynPath {
            hops: vec![
                hop(&net, Direction::Forward, 1, 2, 0),
                hop(&net, Direction::Forward, 2, 4, 1),
            ],
        };
        assert!(st.augment(&path, &r(3), &r(0)).is_err());
    }

    #[test]
    fn mate_identity_holds_after_augmentations() {
        let (net, mut st) = state();
        let path = DynPath {
            hops: vec![
                hop(&net, Direction::Forward, 1, 2, 0),
                hop(&net, Direction::Forward, 2, 4, 1),
            ],
        };
        st.augment(&path, &r(1), &r(1)).unwrap();
        for (at, slot) in st.slots.iter() {
            let spec = &net.arcs[at.arc];
            let alpha = &slot.forward.alpha + &slot.reverse.alpha;
            let beta = &slot.forward.beta + &slot.reverse.beta;
            assert_eq!(
                alpha,
                &spec.capacity[at.theta] - spec.lower_bound(at.theta, &st.lambda_k)
            );
            assert_eq!(beta, -&spec.param_lower[at.theta]);
        }
    }
}
