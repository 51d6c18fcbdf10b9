//! On-disk documents: network files, injected base flows and solutions.
//!
//! Every number is exact. Rationals are written as `"p/q"` strings, or as
//! bare integers when `q = 1`; integers and strings are both accepted on
//! input.

use paraflow::qdp::Augmentation;
use paraflow::{
    ArcSpec, ArcTime, ArcTimeMap, DynamicNetwork, NodeId, ParametricSolution, Rational, ValuePiece,
};
use paraflow::{Sample, VerificationReport};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkFile {
    pub n: usize,
    pub source: usize,
    pub sink: usize,
    #[serde(rename = "T")]
    pub horizon: usize,
    pub lambda_max: Rational,
    pub arcs: Vec<ArcEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArcEntry {
    pub from: usize,
    pub to: usize,
    pub h: Vec<usize>,
    pub u: Vec<Rational>,
    pub l0: Vec<Rational>,
    #[serde(rename = "L")]
    pub lpar: Vec<Rational>,
}

impl NetworkFile {
    /// The network as described; call [`DynamicNetwork::validate`] on it.
    pub fn to_network(&self) -> DynamicNetwork {
        DynamicNetwork {
            node_count: self.n,
            arcs: self
                .arcs
                .iter()
                .map(|a| ArcSpec {
                    from: NodeId(a.from),
                    to: NodeId(a.to),
                    transit: a.h.clone(),
                    capacity: a.u.clone(),
                    base_lower: a.l0.clone(),
                    param_lower: a.lpar.clone(),
                })
                .collect(),
            source: NodeId(self.source),
            sink: NodeId(self.sink),
            horizon: self.horizon,
            lambda_max: self.lambda_max.clone(),
        }
    }

    pub fn from_network(net: &DynamicNetwork) -> Self {
        NetworkFile {
            n: net.node_count,
            source: net.source.0,
            sink: net.sink.0,
            horizon: net.horizon,
            lambda_max: net.lambda_max.clone(),
            arcs: net
                .arcs
                .iter()
                .map(|a| ArcEntry {
                    from: a.from.0,
                    to: a.to.0,
                    h: a.transit.clone(),
                    u: a.capacity.clone(),
                    l0: a.base_lower.clone(),
                    lpar: a.param_lower.clone(),
                })
                .collect(),
        }
    }
}

/// A base flow: one `f` table of length `T + 1` per arc. Arcs left out
/// carry no flow.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlowFile {
    pub arcs: Vec<FlowEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlowEntry {
    pub from: usize,
    pub to: usize,
    pub f: Vec<Rational>,
}

impl FlowFile {
    /// Flow per in-horizon departure. Departures past the horizon must
    /// carry zero.
    pub fn to_flow(&self, net: &DynamicNetwork) -> Result<ArcTimeMap<Rational>, String> {
        let mut flow = ArcTimeMap::new(net, |_| Rational::zero());
        let mut seen = vec![false; net.arcs.len()];
        for entry in &self.arcs {
            let arc = net
                .arc_index(NodeId(entry.from), NodeId(entry.to))
                .ok_or_else(|| {
                    format!(
                        "flow given for ({},{}), which is not an arc",
                        entry.from, entry.to
                    )
                })?;
            if std::mem::replace(&mut seen[arc], true) {
                return Err(format!(
                    "flow for ({},{}) given twice",
                    entry.from, entry.to
                ));
            }
            if entry.f.len() != net.time_steps() {
                return Err(format!(
                    "flow for ({},{}) has length {}, expected {}",
                    entry.from,
                    entry.to,
                    entry.f.len(),
                    net.time_steps()
                ));
            }
            for (theta, value) in entry.f.iter().enumerate() {
                match flow.get_mut(ArcTime::new(arc, theta)) {
                    Some(slot) => *slot = value.clone(),
                    None if value.is_zero() => {}
                    None => {
                        return Err(format!(
                            "flow on ({},{}) at θ={theta} would arrive after the horizon",
                            entry.from, entry.to
                        ))
                    }
                }
            }
        }
        Ok(flow)
    }

    pub fn from_flow(net: &DynamicNetwork, flow: &ArcTimeMap<Rational>) -> Self {
        let arcs = net
            .arcs
            .iter()
            .enumerate()
            .map(|(k, a)| FlowEntry {
                from: a.from.0,
                to: a.to.0,
                f: (0..net.time_steps())
                    .map(|theta| {
                        flow.get(ArcTime::new(k, theta))
                            .cloned()
                            .unwrap_or_else(Rational::zero)
                    })
                    .collect(),
            })
            .collect();
        FlowFile { arcs }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionDoc {
    pub breakpoints: Vec<Rational>,
    pub pieces: Vec<PieceDoc>,
    #[serde(default)]
    pub intervals: Vec<IntervalDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verification: Option<ReportDoc>,
}

/// `v(λ) = v + V·(λ − lambda_lo)` on `[lambda_lo, lambda_hi]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PieceDoc {
    pub lambda_lo: Rational,
    pub lambda_hi: Rational,
    pub v: Rational,
    #[serde(rename = "V")]
    pub slope: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntervalDoc {
    pub lambda_lo: Rational,
    pub lambda_hi: Rational,
    /// `f + F·(λ − lambda_lo)` per departure.
    pub flows: Vec<FlowPairDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub augmentations: Option<Vec<AugmentationDoc>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlowPairDoc {
    pub from: usize,
    pub to: usize,
    pub theta: usize,
    pub f: Rational,
    #[serde(rename = "F")]
    pub slope: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AugmentationDoc {
    /// Visited `(node, θ)` pairs from source to sink.
    pub path: Vec<(usize, usize)>,
    pub alpha: Rational,
    pub beta: Rational,
    /// Capacity `c + d·λ`.
    pub c: Rational,
    pub d: Rational,
    pub bound_after: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportDoc {
    pub all_match: bool,
    pub samples: Vec<SampleDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleDoc {
    pub lambda: Rational,
    pub piece: usize,
    pub parametric: Rational,
    /// `null` when the static solve found no feasible flow.
    pub oracle: Option<Rational>,
    pub matches: bool,
}

impl SolutionDoc {
    pub fn new(net: &DynamicNetwork, sol: &ParametricSolution, trace: bool) -> Self {
        let pieces = sol
            .pieces
            .iter()
            .map(|p| PieceDoc {
                lambda_lo: p.lambda_lo.clone(),
                lambda_hi: p.lambda_hi.clone(),
                v: p.value.clone(),
                slope: p.slope.clone(),
            })
            .collect();
        let intervals = sol
            .intervals
            .iter()
            .map(|iv| IntervalDoc {
                lambda_lo: iv.lambda_lo.clone(),
                lambda_hi: iv.lambda_hi.clone(),
                flows: iv
                    .flow
                    .iter()
                    .map(|(at, f)| FlowPairDoc {
                        from: net.arcs[at.arc].from.0,
                        to: net.arcs[at.arc].to.0,
                        theta: at.theta,
                        f: f.alpha.clone(),
                        slope: f.beta.clone(),
                    })
                    .collect(),
                augmentations: trace.then(|| {
                    iv.augmentations
                        .iter()
                        .map(|a| augmentation_doc(a, &iv.lambda_lo))
                        .collect()
                }),
            })
            .collect();
        SolutionDoc {
            breakpoints: sol.breakpoints.clone(),
            pieces,
            intervals,
            verification: None,
        }
    }

    pub fn value_pieces(&self) -> Vec<ValuePiece> {
        self.pieces
            .iter()
            .map(|p| ValuePiece {
                lambda_lo: p.lambda_lo.clone(),
                lambda_hi: p.lambda_hi.clone(),
                value: p.v.clone(),
                slope: p.slope.clone(),
            })
            .collect()
    }
}

fn augmentation_doc(a: &Augmentation, lambda_k: &Rational) -> AugmentationDoc {
    let (c, d) = a.capacity(lambda_k);
    AugmentationDoc {
        path: a.path.pairs(),
        alpha: a.alpha.clone(),
        beta: a.beta.clone(),
        c,
        d,
        bound_after: a.bound_after.clone(),
    }
}

impl From<&Sample> for SampleDoc {
    fn from(s: &Sample) -> Self {
        SampleDoc {
            lambda: s.lambda.clone(),
            piece: s.piece,
            parametric: s.parametric.clone(),
            oracle: s.oracle.clone(),
            matches: s.matches,
        }
    }
}

impl From<&VerificationReport> for ReportDoc {
    fn from(r: &VerificationReport) -> Self {
        ReportDoc {
            all_match: r.all_match,
            samples: r.samples.iter().map(SampleDoc::from).collect(),
        }
    }
}
