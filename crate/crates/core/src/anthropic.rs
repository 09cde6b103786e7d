//! Anthropic weighting: turning gross (conditional) perception probabilities
//! into net probabilities by attaching a weight to each observer.
//!
//! Three schemes are supported. The weak scheme gives every observer the same
//! weight `1/N`. The proper scheme weights by lifetime, `τ / (⟨τ⟩ N)`. The
//! entropic (micro-anthropic) scheme weights by the information capacity
//! `S_e = log 𝒩_e` of the observer's perception observable, normalized so the
//! weights total one.

use crate::error::{Error, Result};
use crate::observable::Observable;

/// Gross probabilities per observer must sum to one within this.
pub const GROSS_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LogBase {
    /// Shannon bits.
    #[default]
    Two,
    /// Natural units.
    Natural,
}

impl LogBase {
    pub fn log(self, x: f64) -> f64 {
        match self {
            LogBase::Two => x.log2(),
            LogBase::Natural => x.ln(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AnthropicScheme {
    Weak,
    Proper,
    Entropic { log_base: LogBase },
}

impl AnthropicScheme {
    pub fn name(&self) -> &'static str {
        match self {
            AnthropicScheme::Weak => "weak",
            AnthropicScheme::Proper => "proper",
            AnthropicScheme::Entropic { .. } => "entropic",
        }
    }
}

/// `S_e = log 𝒩 − log R_e`, the information capacity of a perception drawn
/// from a complete set of rank-`R_e` eventualities in dimension `𝒩`.
pub fn entropy_capacity(space_dim: usize, channel_rank: usize, base: LogBase) -> Result<f64> {
    if channel_rank == 0 {
        return Err(Error::NonPositive {
            quantity: "channel rank",
            value: 0.0,
        });
    }
    if channel_rank > space_dim {
        return Err(Error::RankExceedsDimension {
            rank: channel_rank,
            dim: space_dim,
        });
    }
    if space_dim.is_multiple_of(channel_rank) {
        // equal channel counts give bitwise equal capacities
        Ok(base.log((space_dim / channel_rank) as f64))
    } else {
        Ok(base.log(space_dim as f64) - base.log(channel_rank as f64))
    }
}

/// Shannon entropy `−Σ P_i log P_i`, with `0 log 0 = 0`.
pub fn shannon_entropy(probabilities: &[f64], base: LogBase) -> f64 {
    -probabilities
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| p * base.log(p))
        .sum::<f64>()
}

/// An observer and its perception observable, reduced to what the weighting
/// schemes need.
#[derive(Debug, Clone, PartialEq)]
pub struct ObserverModel {
    pub id: String,
    /// `𝒩 = tr{I}` of the observer's own space.
    pub space_dim: usize,
    /// Common channel rank `R_e`.
    pub channel_rank: usize,
    /// Proper lifetime τ (seconds).
    pub lifetime: f64,
    /// Duration of one perception Δ_eτ (seconds).
    pub perception_duration: f64,
}

impl ObserverModel {
    pub fn new(
        id: impl Into<String>,
        space_dim: usize,
        channel_rank: usize,
        lifetime: f64,
        perception_duration: f64,
    ) -> Result<Self> {
        positive("lifetime", lifetime)?;
        positive("perception duration", perception_duration)?;
        entropy_capacity(space_dim, channel_rank, LogBase::Two)?;
        Ok(Self {
            id: id.into(),
            space_dim,
            channel_rank,
            lifetime,
            perception_duration,
        })
    }

    /// Builds the model from a perception observable whose channels must all
    /// share one rank.
    pub fn from_observable(
        id: impl Into<String>,
        perception: &Observable,
        lifetime: f64,
        perception_duration: f64,
    ) -> Result<Self> {
        let ranks = perception.ranks();
        let rank = ranks[0];
        if ranks.iter().any(|&r| r != rank) {
            return Err(Error::MixedRank { ranks });
        }
        Self::new(
            id,
            perception.space().dim(),
            rank,
            lifetime,
            perception_duration,
        )
    }

    /// Branch-channel count `𝒩_e = 𝒩 / R_e`.
    pub fn channel_count(&self) -> usize {
        self.space_dim / self.channel_rank
    }

    pub fn capacity(&self, base: LogBase) -> f64 {
        entropy_capacity(self.space_dim, self.channel_rank, base)
            .expect("validated at construction")
    }
}

fn positive(quantity: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::NonPositive { quantity, value })
    }
}

/// Weak scheme: `𝒫 = 1/N` for each of `n` observers.
pub fn weights_weak(n: usize) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::EmptyPopulation);
    }
    Ok(vec![1.0 / n as f64; n])
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProperWeights {
    pub weights: Vec<f64>,
    pub mean_lifetime: f64,
    /// The universal rate `𝒫̇ = 1/(⟨τ⟩ N)`.
    pub rate: f64,
}

/// Proper scheme: `𝒫 = τ / (⟨τ⟩ N)`.
pub fn weights_proper(lifetimes: &[f64]) -> Result<ProperWeights> {
    if lifetimes.is_empty() {
        return Err(Error::EmptyPopulation);
    }
    for &t in lifetimes {
        positive("lifetime", t)?;
    }
    let n = lifetimes.len() as f64;
    let total: f64 = lifetimes.iter().sum();
    let mean_lifetime = total / n;
    Ok(ProperWeights {
        // τ/(⟨τ⟩N) with ⟨τ⟩N = Στ
        weights: lifetimes.iter().map(|t| t / total).collect(),
        mean_lifetime,
        rate: 1.0 / (mean_lifetime * n),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct EntropicWeights {
    pub weights: Vec<f64>,
    pub capacities: Vec<f64>,
    /// Proportionality factor α = 1 / Σ S_e.
    pub alpha: f64,
}

/// Entropic scheme: `𝒫_e = α S_e` with α fixed by normalization.
pub fn weights_entropic(observers: &[ObserverModel], base: LogBase) -> Result<EntropicWeights> {
    if observers.is_empty() {
        return Err(Error::EmptyPopulation);
    }
    let capacities: Vec<f64> = observers.iter().map(|o| o.capacity(base)).collect();
    let total: f64 = capacities.iter().sum();
    if total <= 0.0 {
        return Err(Error::ZeroCapacity);
    }
    let alpha = 1.0 / total;
    let weights = if capacities.iter().all(|s| *s == capacities[0]) {
        weights_weak(capacities.len())?
    } else {
        capacities.iter().map(|s| s / total).collect()
    };
    Ok(EntropicWeights {
        weights,
        capacities,
        alpha,
    })
}

/// Per-observer weights and perception rates under one scheme.
#[derive(Debug, Clone, PartialEq)]
pub struct Weighting {
    pub scheme: AnthropicScheme,
    pub weights: Vec<f64>,
    /// Rate `𝒫̇` per observer, so that `𝒫̇ Δ_eτ` is the per-perception share.
    pub rates: Vec<f64>,
    pub alpha: Option<f64>,
    pub capacities: Option<Vec<f64>>,
    pub mean_lifetime: Option<f64>,
}

impl AnthropicScheme {
    pub fn weigh(&self, observers: &[ObserverModel]) -> Result<Weighting> {
        match *self {
            AnthropicScheme::Weak => {
                let weights = weights_weak(observers.len())?;
                let rates = observers
                    .iter()
                    .zip(&weights)
                    .map(|(o, w)| w / o.perception_duration)
                    .collect();
                Ok(Weighting {
                    scheme: *self,
                    weights,
                    rates,
                    alpha: None,
                    capacities: None,
                    mean_lifetime: None,
                })
            }
            AnthropicScheme::Proper => {
                let lifetimes: Vec<f64> = observers.iter().map(|o| o.lifetime).collect();
                let p = weights_proper(&lifetimes)?;
                Ok(Weighting {
                    scheme: *self,
                    rates: vec![p.rate; observers.len()],
                    weights: p.weights,
                    alpha: None,
                    capacities: None,
                    mean_lifetime: Some(p.mean_lifetime),
                })
            }
            AnthropicScheme::Entropic { log_base } => {
                let e = weights_entropic(observers, log_base)?;
                let rates = observers
                    .iter()
                    .zip(&e.capacities)
                    .map(|(o, s)| e.alpha * s / o.perception_duration)
                    .collect();
                Ok(Weighting {
                    scheme: *self,
                    weights: e.weights,
                    rates,
                    alpha: Some(e.alpha),
                    capacities: Some(e.capacities),
                    mean_lifetime: None,
                })
            }
        }
    }
}

/// The perception rate `𝒫̇` of observer `index` within `observers`.
pub fn perception_rate(
    scheme: AnthropicScheme,
    observers: &[ObserverModel],
    index: usize,
) -> Result<f64> {
    let w = scheme.weigh(observers)?;
    w.rates.get(index).copied().ok_or(Error::DimensionMismatch {
        expected: observers.len(),
        got: index + 1,
    })
}

/// Net probabilities `P{e_i} = 𝒫_e · P_[O]{e_i}` for every observer channel.
#[derive(Debug, Clone, PartialEq)]
pub struct NetTable {
    pub weighting: Weighting,
    pub gross: Vec<Vec<f64>>,
    pub net: Vec<Vec<f64>>,
}

impl NetTable {
    pub fn total(&self) -> f64 {
        self.net.iter().flatten().sum()
    }
}

pub fn net_table(
    scheme: AnthropicScheme,
    observers: &[ObserverModel],
    gross: &[Vec<f64>],
) -> Result<NetTable> {
    if gross.len() != observers.len() {
        return Err(Error::DimensionMismatch {
            expected: observers.len(),
            got: gross.len(),
        });
    }
    for (observer, g) in gross.iter().enumerate() {
        let sum: f64 = g.iter().sum();
        if (sum - 1.0).abs() > GROSS_TOL {
            return Err(Error::UnnormalizedGross { observer, sum });
        }
    }
    let weighting = scheme.weigh(observers)?;
    let net = gross
        .iter()
        .zip(&weighting.weights)
        .map(|(g, w)| g.iter().map(|p| w * p).collect())
        .collect();
    Ok(NetTable {
        weighting,
        gross: gross.to_vec(),
        net,
    })
}

/// One piecewise-constant stretch of a lifetime.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub duration: f64,
    /// Information capacity `S_e` during the segment.
    pub capacity: f64,
    /// Perception duration `Δ_eτ` during the segment.
    pub perception_duration: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LifetimeProfile {
    segments: Vec<Segment>,
}

impl LifetimeProfile {
    pub fn new(segments: Vec<Segment>) -> Result<Self> {
        for (index, s) in segments.iter().enumerate() {
            if !(s.duration > 0.0 && s.duration.is_finite()) {
                return Err(Error::InvalidSegment {
                    index,
                    reason: "duration must be positive",
                });
            }
            if !(s.capacity >= 0.0 && s.capacity.is_finite()) {
                return Err(Error::InvalidSegment {
                    index,
                    reason: "capacity must be non-negative",
                });
            }
            if !(s.perception_duration > 0.0 && s.perception_duration.is_finite()) {
                return Err(Error::InvalidSegment {
                    index,
                    reason: "perception duration must be positive",
                });
            }
        }
        Ok(Self { segments })
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LifetimeDistribution {
    /// Probability per unit time in each segment, `∝ S_e / Δ_eτ`.
    pub density: Vec<f64>,
    /// Probability mass of each segment; sums to one.
    pub masses: Vec<f64>,
    pub cumulative: Vec<f64>,
    /// Segment of highest density (earliest on ties).
    pub argmax: usize,
}

/// Integrates the entropic rate `𝒫̇ ∝ S_e / Δ_eτ` over a profile.
pub fn lifetime_distribution(profile: &LifetimeProfile) -> Result<LifetimeDistribution> {
    let rates: Vec<f64> = profile
        .segments
        .iter()
        .map(|s| s.capacity / s.perception_duration)
        .collect();
    let raw: Vec<f64> = profile
        .segments
        .iter()
        .zip(&rates)
        .map(|(s, r)| s.duration * r)
        .collect();
    let total: f64 = raw.iter().sum();
    if total.is_nan() || total <= 0.0 {
        return Err(Error::ZeroMass);
    }
    let masses: Vec<f64> = raw.iter().map(|m| m / total).collect();
    let cumulative = masses
        .iter()
        .scan(0.0, |acc, m| {
            *acc += m;
            Some(*acc)
        })
        .collect();
    let density: Vec<f64> = rates.iter().map(|r| r / total).collect();
    let mut argmax = 0;
    for (k, d) in density.iter().enumerate() {
        if *d > density[argmax] {
            argmax = k;
        }
    }
    Ok(LifetimeDistribution {
        density,
        masses,
        cumulative,
        argmax,
    })
}
