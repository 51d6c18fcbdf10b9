//! Parametric minimum flow over the whole parameter range.
//!
//! A single base flow feasible for every `λ ∈ [0, Λ]` is found against the
//! tightest lower bounds `l′ = max(l0, l0 + Λ·lpar)`. Each subinterval then
//! restarts from that base flow at its own left end `λ_k`, decreases flow
//! until no quickest path remains, and records where the resulting
//! parametric flow stops being valid.

use crate::error::{Error, Result};
use crate::expand::{expand, TimeExpandedNetwork};
use crate::network::{ArcTimeMap, DynamicNetwork};
use crate::qdp::{qdp, IntervalResult};
use crate::rational::Rational;
use crate::residual::Affine;
use crate::static_flow::{feasible_flow, StaticFlow};

/// `v(λ) = value + slope·(λ − lambda_lo)` on `[lambda_lo, lambda_hi]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValuePiece {
    pub lambda_lo: Rational,
    pub lambda_hi: Rational,
    pub value: Rational,
    pub slope: Rational,
}

impl ValuePiece {
    pub fn at(&self, lambda: &Rational) -> Rational {
        &self.value + &self.slope * (lambda - &self.lambda_lo)
    }

    pub fn contains(&self, lambda: &Rational) -> bool {
        &self.lambda_lo <= lambda && lambda <= &self.lambda_hi
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParametricSolution {
    /// Strictly increasing, from 0 to `Λ`.
    pub breakpoints: Vec<Rational>,
    pub intervals: Vec<IntervalResult>,
    pub pieces: Vec<ValuePiece>,
}

impl ParametricSolution {
    /// Number of subintervals `K`.
    pub fn interval_count(&self) -> usize {
        self.intervals.len()
    }

    pub fn lambda_max(&self) -> &Rational {
        self.breakpoints.last().expect("at least one breakpoint")
    }

    /// Index of the first piece containing `lambda`.
    pub fn piece_index(&self, lambda: &Rational) -> Result<usize> {
        self.pieces
            .iter()
            .position(|p| p.contains(lambda))
            .ok_or_else(|| Error::Input(format!("λ={lambda} outside [0, {}]", self.lambda_max())))
    }

    pub fn evaluate(&self, lambda: &Rational) -> Result<Rational> {
        Ok(self.pieces[self.piece_index(lambda)?].at(lambda))
    }

    /// Flow of interval `k` evaluated at `lambda`.
    pub fn flow_at(&self, k: usize, lambda: &Rational) -> ArcTimeMap<Rational> {
        let interval = &self.intervals[k];
        interval.flow.map(|_, f| f.at(lambda, &interval.lambda_lo))
    }
}

/// Minimum flow value at `lambda`, read off the piecewise-linear function.
pub fn evaluate_value(sol: &ParametricSolution, lambda: &Rational) -> Result<Rational> {
    sol.evaluate(lambda)
}

/// `l′` per arc and time step: `l0` where `lpar ≤ 0`, else `l0 + Λ·lpar`.
pub fn tight_lower_bounds(net: &DynamicNetwork) -> Vec<Vec<Rational>> {
    net.arcs
        .iter()
        .map(|arc| {
            (0..net.time_steps())
                .map(|theta| {
                    if arc.param_lower[theta].is_positive() {
                        arc.lower_bound(theta, &net.lambda_max)
                    } else {
                        arc.base_lower[theta].clone()
                    }
                })
                .collect()
        })
        .collect()
}

/// Time-expanded network whose lower bounds are the tightest ones `l′`.
pub fn tight_expansion(net: &DynamicNetwork) -> TimeExpandedNetwork {
    let tight = tight_lower_bounds(net);
    let mut tnet = expand(net, &Rational::zero());
    for arc in &mut tnet.arcs {
        arc.lower = tight[arc.origin.arc][arc.origin.theta].clone();
    }
    tnet
}

/// Solves with a base flow found by the static feasibility routine.
pub fn solve(net: &DynamicNetwork) -> Result<ParametricSolution> {
    net.ensure_valid()?;
    let tnet = tight_expansion(net);
    let flow = feasible_flow(&tnet)?;
    let mut base = ArcTimeMap::new(net, |_| Rational::zero());
    for (arc, value) in tnet.arcs.iter().zip(flow.values) {
        *base
            .get_mut(arc.origin)
            .expect("expanded arcs are in horizon") = value;
    }
    run(net, &base)
}

/// Solves starting from a caller-supplied base flow, which must conserve
/// flow at non-terminal NTPs and satisfy `l′ ≤ f ≤ u`.
pub fn solve_with_base_flow(
    net: &DynamicNetwork,
    base_flow: &ArcTimeMap<Rational>,
) -> Result<ParametricSolution> {
    net.ensure_valid()?;
    let tnet = tight_expansion(net);
    let values = tnet
        .arcs
        .iter()
        .map(|a| {
            base_flow.get(a.origin).cloned().ok_or_else(|| {
                Error::InvalidBaseFlow(format!(
                    "missing arc {} at θ={}",
                    a.origin.arc, a.origin.theta
                ))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    StaticFlow { values }
        .check_feasible(&tnet)
        .map_err(Error::InvalidBaseFlow)?;
    run(net, base_flow)
}

/// Upper limit on the number of subintervals before giving up.
pub fn interval_cap(net: &DynamicNetwork) -> usize {
    let slots = net.arcs.len() * net.time_steps() + 1;
    1000 * slots * slots
}

fn run(net: &DynamicNetwork, base: &ArcTimeMap<Rational>) -> Result<ParametricSolution> {
    let cap = interval_cap(net);
    let mut breakpoints = vec![Rational::zero()];
    let mut intervals = Vec::new();
    let mut pieces = Vec::new();
    let mut lambda_k = Rational::zero();
    while lambda_k < net.lambda_max {
        if intervals.len() >= cap {
            return Err(Error::Internal(format!("more than {cap} subintervals")));
        }
        let interval = qdp(net, base, &lambda_k)?;
        if interval.lambda_hi <= lambda_k {
            return Err(Error::Internal(format!("no progress past λ={lambda_k}")));
        }
        let (value, slope) = source_value(net, &interval.flow);
        pieces.push(ValuePiece {
            lambda_lo: interval.lambda_lo.clone(),
            lambda_hi: interval.lambda_hi.clone(),
            value,
            slope,
        });
        lambda_k = interval.lambda_hi.clone();
        breakpoints.push(lambda_k.clone());
        intervals.push(interval);
    }
    Ok(ParametricSolution {
        breakpoints,
        intervals,
        pieces,
    })
}

/// Net source outflow summed over time, as `(value at λ_lo, slope)`.
pub fn source_value(net: &DynamicNetwork, flow: &ArcTimeMap<Affine>) -> (Rational, Rational) {
    let mut value = Rational::zero();
    let mut slope = Rational::zero();
    for (at, f) in flow.iter() {
        let spec = &net.arcs[at.arc];
        if spec.from == net.source {
            value += &f.alpha;
            slope += &f.beta;
        }
        if spec.to == net.source {
            value -= &f.alpha;
            slope -= &f.beta;
        }
    }
    (value, slope)
}
