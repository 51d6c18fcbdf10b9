//! Successive quickest-path flow decreases on one parameter subinterval.

use crate::error::{Error, Result};
use crate::labels::{extract_path, ls};
use crate::network::{ArcTimeMap, DynamicNetwork};
use crate::rational::Rational;
use crate::residual::{build_residual, Affine, DynPath, ResidualState};

/// One flow decrease: the path, its capacity `alpha + beta·(λ − λ_k)` and
/// the upper end of the subinterval right after it was applied.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Augmentation {
    pub path: DynPath,
    pub alpha: Rational,
    pub beta: Rational,
    pub bound_after: Rational,
}

impl Augmentation {
    /// Capacity as `c + d·λ`.
    pub fn capacity(&self, lambda_k: &Rational) -> (Rational, Rational) {
        Affine::new(self.alpha.clone(), self.beta.clone()).rebased(lambda_k)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntervalResult {
    pub lambda_lo: Rational,
    pub lambda_hi: Rational,
    /// `f_k + F_k·(λ − λ_lo)` per in-horizon departure.
    pub flow: ArcTimeMap<Affine>,
    pub augmentations: Vec<Augmentation>,
}

/// Path capacity: `α` is the least `α_k` along the path and `β` the least
/// `β_k` among the arcs attaining it.
pub fn path_coefficients(path: &DynPath, state: &ResidualState) -> Result<(Rational, Rational)> {
    let coeffs: Vec<&Affine> = path
        .hops
        .iter()
        .map(|h| state.coeff(h.origin, h.direction))
        .collect();
    let alpha = coeffs
        .iter()
        .map(|c| &c.alpha)
        .min()
        .cloned()
        .ok_or_else(|| Error::Input("empty path".into()))?;
    let beta = coeffs
        .iter()
        .filter(|c| c.alpha == alpha)
        .map(|c| &c.beta)
        .min()
        .cloned()
        .expect("some arc attains the minimum");
    Ok((alpha, beta))
}

/// Lowers `current` to the first `λ` at which some path arc's residual,
/// after subtracting the path capacity, would turn negative.
///
/// Only arcs with `β_k < β` can cross; they all have `α_k > α`, so the
/// result stays strictly above `λ_k`.
pub fn breakpoint_candidate(
    path: &DynPath,
    state: &ResidualState,
    alpha: &Rational,
    beta: &Rational,
    current: &Rational,
) -> Rational {
    let mut bound = current.clone();
    for hop in &path.hops {
        let c = state.coeff(hop.origin, hop.direction);
        if &c.beta < beta {
            let crossing = &state.lambda_k + (&c.alpha - alpha) / (beta - &c.beta);
            bound = bound.min(crossing);
        }
    }
    bound
}

/// Upper limit on flow decreases per subinterval before giving up.
pub fn augmentation_cap(net: &DynamicNetwork) -> usize {
    let slots = net.arcs.len() * net.time_steps() + 1;
    1000 * slots * slots
}

/// Decreases flow along quickest residual paths until none remains at
/// `λ_k`, starting from `base_flow` (which must respect the tightest lower
/// bounds over the whole parameter range).
pub fn qdp(
    net: &DynamicNetwork,
    base_flow: &ArcTimeMap<Rational>,
    lambda_k: &Rational,
) -> Result<IntervalResult> {
    if lambda_k >= &net.lambda_max {
        return Err(Error::Input(format!(
            "λ_k={lambda_k} must be below Λ={}",
            net.lambda_max
        )));
    }
    let mut state = build_residual(net, base_flow, lambda_k)?;
    let mut bound = net.lambda_max.clone();
    let mut augmentations = Vec::new();
    let cap = augmentation_cap(net);

    let mut labels = ls(&state, net);
    while labels.reachable() {
        if augmentations.len() >= cap {
            return Err(Error::Internal(format!(
                "more than {cap} flow decreases on one subinterval"
            )));
        }
        let path = extract_path(&labels)?;
        let (alpha, beta) = path_coefficients(&path, &state)?;
        bound = breakpoint_candidate(&path, &state, &alpha, &beta, &bound);
        if &bound <= lambda_k {
            return Err(Error::Internal(format!(
                "subinterval collapsed at λ={bound}"
            )));
        }
        state.augment(&path, &alpha, &beta)?;
        augmentations.push(Augmentation {
            path,
            alpha,
            beta,
            bound_after: bound.clone(),
        });
        labels = ls(&state, net);
    }

    Ok(IntervalResult {
        lambda_lo: lambda_k.clone(),
        lambda_hi: bound,
        flow: state.flow(),
        augmentations,
    })
}
