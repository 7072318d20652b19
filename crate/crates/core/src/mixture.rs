//! Bell expectations when the loss pattern itself is random.
//!
//! The state is `(1 − p)·φ + p·Σ_k q_k ρ_{L_k}` for a fixed distribution
//! `{q_k, L_k}` over loss sets. Every expectation is affine in `p`, so two
//! samples determine it exactly and the crossover between operators is the
//! root of a linear equation over `Q[√2]`.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::loss::{mixture_expectation, operator_bound, operator_quantum_bound, LossDistribution, MixtureOperator};
use crate::quad::{Quad, Rational};

/// One point of the p-grid.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MixtureSample {
    #[serde(serialize_with = "crate::quad::serialize_rational")]
    pub p: Rational,
    pub full: Quad,
    pub induced: Quad,
    pub margin_full: Quad,
    pub margin_induced: Quad,
}

impl MixtureSample {
    pub fn full_ahead(&self) -> bool {
        self.margin_full > self.margin_induced
    }
}

/// A margin `m(p) = m0 + slope·p`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AffineMargin {
    pub at_zero: Quad,
    pub slope: Quad,
}

impl AffineMargin {
    pub fn at(&self, p: &Rational) -> Quad {
        &self.at_zero + &self.slope.scale(p)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MixtureAnalysis {
    pub bound_full: Quad,
    pub bound_induced: Quad,
    pub quantum_full: Quad,
    pub quantum_induced: Quad,
    pub margin_full: AffineMargin,
    pub margin_induced: AffineMargin,
    pub samples: Vec<MixtureSample>,
    /// `p` at which both margins are equal, if the lines are not parallel.
    /// May lie outside `[0, 1]`.
    pub equal_margin_p: Option<Quad>,
    /// `equal_margin_p` when it lies in `[0, 1]`.
    pub crossover: Option<Quad>,
    /// Smallest grid `p` at which the full-graph margin is strictly larger.
    #[serde(serialize_with = "crate::quad::serialize_rational_opt")]
    pub first_full_ahead: Option<Rational>,
}

/// `points` evenly spaced values `upper·k/points`, `k = 0..points`.
pub fn uniform_grid(points: usize, upper: &Rational) -> Vec<Rational> {
    (0..points)
        .map(|k| upper * Rational::new(k.into(), points.into()))
        .collect()
}

/// Evaluates both operators on `(1 − p)·δ_∅ + p·dist` for every `p` in `grid`.
pub fn analyze_mixture(
    g: &Graph,
    dist: &LossDistribution,
    full: &MixtureOperator,
    induced: &MixtureOperator,
    grid: &[Rational],
) -> Result<MixtureAnalysis> {
    for p in grid {
        if *p < Rational::zero() || *p > Rational::one() {
            return Err(Error::NegativeProbability(crate::quad::format_rational(p)));
        }
    }
    let bound_full = operator_bound(g, full)?;
    let bound_induced = operator_bound(g, induced)?;
    let margin = |op: &MixtureOperator, bound: &Quad| -> Result<AffineMargin> {
        let zero = mixture_expectation(g, &dist.diluted(&Rational::zero())?, op)? - bound;
        let one = mixture_expectation(g, dist, op)? - bound;
        Ok(AffineMargin {
            slope: &one - &zero,
            at_zero: zero,
        })
    };
    let margin_full = margin(full, &bound_full)?;
    let margin_induced = margin(induced, &bound_induced)?;

    let samples: Vec<MixtureSample> = grid
        .iter()
        .map(|p| {
            let mf = margin_full.at(p);
            let mi = margin_induced.at(p);
            MixtureSample {
                p: p.clone(),
                full: &mf + &bound_full,
                induced: &mi + &bound_induced,
                margin_full: mf,
                margin_induced: mi,
            }
        })
        .collect();

    let gap0 = &margin_induced.at_zero - &margin_full.at_zero;
    let slope = &margin_full.slope - &margin_induced.slope;
    let equal_margin_p = slope.recip().map(|s| gap0 * s);
    let crossover = equal_margin_p
        .clone()
        .filter(|p| !p.signum().is_lt() && *p <= Quad::one());
    let first_full_ahead = samples.iter().find(|s| s.full_ahead()).map(|s| s.p.clone());

    Ok(MixtureAnalysis {
        quantum_full: operator_quantum_bound(g, full)?,
        quantum_induced: operator_quantum_bound(g, induced)?,
        bound_full,
        bound_induced,
        margin_full,
        margin_induced,
        samples,
        equal_margin_p,
        crossover,
        first_full_ahead,
    })
}
