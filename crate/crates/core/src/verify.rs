//! Cross-checks a parametric solution against fixed-`λ` static minimum
//! flow solves. Agreement must be exact.

use std::collections::BTreeMap;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::expand::expand;
use crate::network::DynamicNetwork;
use crate::rational::Rational;
use crate::solver::{ParametricSolution, ValuePiece};
use crate::static_flow::min_flow;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sample {
    pub lambda: Rational,
    /// Piece the parametric value was read from.
    pub piece: usize,
    pub parametric: Rational,
    /// `None` when the static solve found no feasible flow.
    pub oracle: Option<Rational>,
    pub matches: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub samples: Vec<Sample>,
    pub mismatches: Vec<Sample>,
    pub all_match: bool,
}

/// Evaluates every piece at both of its ends, its midpoint and
/// `extra_samples_per_interval` seeded random interior points, and compares
/// each value with the static oracle at the same `λ`.
pub fn verify(
    sol: &ParametricSolution,
    net: &DynamicNetwork,
    extra_samples_per_interval: usize,
    seed: u64,
) -> VerificationReport {
    verify_pieces(&sol.pieces, net, extra_samples_per_interval, seed)
}

/// Same check on bare value pieces, e.g. read back from a solution file.
pub fn verify_pieces(
    pieces: &[ValuePiece],
    net: &DynamicNetwork,
    extra_samples_per_interval: usize,
    seed: u64,
) -> VerificationReport {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut oracle_cache: BTreeMap<Rational, Option<Rational>> = BTreeMap::new();
    let mut samples = Vec::new();
    let two = Rational::from(2);

    for (k, piece) in pieces.iter().enumerate() {
        let mut points = vec![
            piece.lambda_lo.clone(),
            (&piece.lambda_lo + &piece.lambda_hi) / &two,
            piece.lambda_hi.clone(),
        ];
        for _ in 0..extra_samples_per_interval {
            points.push(random_between(&mut rng, &piece.lambda_lo, &piece.lambda_hi));
        }
        for lambda in points {
            let oracle = oracle_cache
                .entry(lambda.clone())
                .or_insert_with(|| min_flow(&expand(net, &lambda)).ok().map(|(v, _)| v))
                .clone();
            let parametric = piece.at(&lambda);
            let matches = oracle.as_ref() == Some(&parametric);
            samples.push(Sample {
                lambda,
                piece: k,
                parametric,
                oracle,
                matches,
            });
        }
    }
    let mismatches: Vec<Sample> = samples.iter().filter(|s| !s.matches).cloned().collect();
    VerificationReport {
        all_match: mismatches.is_empty(),
        samples,
        mismatches,
    }
}

/// Random rational strictly inside `(lo, hi)` with denominator at most 1000;
/// falls back to the midpoint when no such rational is found quickly.
fn random_between(rng: &mut StdRng, lo: &Rational, hi: &Rational) -> Rational {
    for _ in 0..32 {
        let q: i64 = rng.gen_range(2..=1000);
        let qr = Rational::from(q);
        let first = (lo * &qr).floor() + Rational::one();
        let last = (hi * &qr).ceil() - Rational::one();
        if first > last {
            continue;
        }
        let span = (&last - &first).numer().clone();
        let span: i64 = i64::try_from(span).unwrap_or(i64::MAX - 1);
        let offset = rng.gen_range(0..=span);
        let numer = first + Rational::from(offset);
        return numer / qr;
    }
    (lo + hi) / Rational::from(2)
}
