//! Bias distributions for codeword generation.
//!
//! Three discrete families (Gauss-Legendre, discrete arcsine, Chebyshev-Gauss)
//! and the continuous arcsine law with an optional symmetric cutoff. All of
//! them are symmetric about 1/2.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::legendre::legendre_roots;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DiscreteFamily {
    GaussLegendre,
    DiscreteArcsine,
    ChebyshevGauss,
}

impl DiscreteFamily {
    pub const ALL: [DiscreteFamily; 3] = [
        DiscreteFamily::GaussLegendre,
        DiscreteFamily::DiscreteArcsine,
        DiscreteFamily::ChebyshevGauss,
    ];

    pub fn name(self) -> &'static str {
        match self {
            DiscreteFamily::GaussLegendre => "gauss_legendre",
            DiscreteFamily::DiscreteArcsine => "discrete_arcsine",
            DiscreteFamily::ChebyshevGauss => "chebyshev_gauss",
        }
    }

    pub fn build(self, point_count: usize) -> Result<DiscreteBiasDistribution> {
        match self {
            DiscreteFamily::GaussLegendre => gauss_legendre_distribution(point_count),
            DiscreteFamily::DiscreteArcsine => discrete_arcsine_distribution(point_count),
            DiscreteFamily::ChebyshevGauss => chebyshev_gauss_distribution(point_count),
        }
    }
}

impl fmt::Display for DiscreteFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Number of points a discrete family needs to be designed against
/// `colluders` pirates: the c-point rule covers 2c - 1 and 2c colluders.
pub fn points_for_colluders(colluders: usize) -> usize {
    colluders.div_ceil(2).max(1)
}

/// A finite bias distribution with atoms strictly inside (0, 1).
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteBiasDistribution {
    family: DiscreteFamily,
    points: Vec<f64>,
    probabilities: Vec<f64>,
    raw_normalizer: f64,
    cumulative: Vec<f64>,
}

impl DiscreteBiasDistribution {
    fn new(
        family: DiscreteFamily,
        points: Vec<f64>,
        raw_weights: Vec<f64>,
        raw_normalizer: f64,
    ) -> Self {
        let probabilities: Vec<f64> = raw_weights.iter().map(|w| w / raw_normalizer).collect();
        let mut cumulative = Vec::with_capacity(points.len());
        let mut acc = 0.0;
        for p in &probabilities {
            acc += p;
            cumulative.push(acc);
        }
        // the last entry is 1 by definition; rounding must not leave a gap
        if let Some(last) = cumulative.last_mut() {
            *last = 1.0;
        }
        Self {
            family,
            points,
            probabilities,
            raw_normalizer,
            cumulative,
        }
    }

    pub fn family(&self) -> DiscreteFamily {
        self.family
    }

    pub fn point_count(&self) -> usize {
        self.points.len()
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    /// Sum of the unnormalized weights (pi by construction for the two
    /// sine-based families).
    pub fn raw_normalizer(&self) -> f64 {
        self.raw_normalizer
    }

    /// Right-continuous step CDF: an atom's mass is counted at its point.
    pub fn cdf(&self, p: f64) -> f64 {
        let below = self.points.partition_point(|&x| x <= p);
        if below == 0 {
            0.0
        } else {
            self.cumulative[below - 1]
        }
    }

    /// Draw one bias by inverse CDF over the cumulative table.
    pub fn sample_one<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u: f64 = rng.gen();
        let idx = self.cumulative.partition_point(|&c| c <= u);
        self.points[idx.min(self.points.len() - 1)]
    }

    /// Rows `(k, point, probability)` with 1-based k.
    pub fn table(&self) -> impl Iterator<Item = (usize, f64, f64)> + '_ {
        self.points
            .iter()
            .zip(&self.probabilities)
            .enumerate()
            .map(|(i, (&p, &w))| (i + 1, p, w))
    }
}

/// The optimal discrete distribution: atoms at `(x_k + 1) / 2` for the roots
/// `x_k` of `P_c`, with weights proportional to `2 / ((1 - x^2)^{3/2} P_c'(x)^2)`.
pub fn gauss_legendre_distribution(point_count: usize) -> Result<DiscreteBiasDistribution> {
    if point_count == 0 {
        return Err(Error::EmptyDistribution);
    }
    let roots = legendre_roots(point_count)?;
    let points = roots.roots().iter().map(|&x| (1.0 + x) / 2.0).collect();
    let weights = roots.modified_weights();
    let normalizer = weights.iter().sum();
    Ok(DiscreteBiasDistribution::new(
        DiscreteFamily::GaussLegendre,
        points,
        weights,
        normalizer,
    ))
}

fn sine_squared_family(
    family: DiscreteFamily,
    point_count: usize,
    angle: impl Fn(f64) -> f64,
) -> Result<DiscreteBiasDistribution> {
    if point_count == 0 {
        return Err(Error::EmptyDistribution);
    }
    let points = (1..=point_count)
        .map(|k| angle(k as f64).sin().powi(2))
        .collect();
    let weights = vec![PI / point_count as f64; point_count];
    Ok(DiscreteBiasDistribution::new(family, points, weights, PI))
}

/// Uniform weights on `sin^2((4k - 1) pi / (8c + 4))`, k = 1..c.
pub fn discrete_arcsine_distribution(point_count: usize) -> Result<DiscreteBiasDistribution> {
    let denom = 8.0 * point_count as f64 + 4.0;
    sine_squared_family(DiscreteFamily::DiscreteArcsine, point_count, |k| {
        (4.0 * k - 1.0) * PI / denom
    })
}

/// Uniform weights on the Chebyshev-Gauss nodes `sin^2((4k - 2) pi / (8c))`.
pub fn chebyshev_gauss_distribution(point_count: usize) -> Result<DiscreteBiasDistribution> {
    let denom = 8.0 * point_count as f64;
    sine_squared_family(DiscreteFamily::ChebyshevGauss, point_count, |k| {
        (4.0 * k - 2.0) * PI / denom
    })
}

/// Arcsine law restricted to `[cutoff, 1 - cutoff]`.
///
/// Sampling draws an angle uniformly from `[asin(sqrt(cutoff)), pi/2 -
/// asin(sqrt(cutoff))]` and returns its squared sine.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContinuousArcsine {
    cutoff: f64,
    angle_lo: f64,
    angle_hi: f64,
}

impl ContinuousArcsine {
    pub fn new(cutoff: f64) -> Result<Self> {
        if !(0.0..0.5).contains(&cutoff) {
            return Err(Error::InvalidCutoff(cutoff));
        }
        let angle_lo = cutoff.sqrt().asin();
        Ok(Self {
            cutoff,
            angle_lo,
            angle_hi: FRAC_PI_2 - angle_lo,
        })
    }

    pub fn cutoff(&self) -> f64 {
        self.cutoff
    }

    /// The `(lo, hi)` angle range sampled uniformly.
    pub fn angle_bounds(&self) -> (f64, f64) {
        (self.angle_lo, self.angle_hi)
    }

    pub fn cdf(&self, p: f64) -> f64 {
        if p <= self.cutoff {
            return 0.0;
        }
        if p >= 1.0 - self.cutoff {
            return 1.0;
        }
        let r = p.sqrt().asin();
        ((r - self.angle_lo) / (self.angle_hi - self.angle_lo)).clamp(0.0, 1.0)
    }

    /// Draws landing exactly on 0 or 1 (possible only at cutoff 0, from
    /// rounding) are redrawn so every bias stays inside (0, 1).
    pub fn sample_one<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        loop {
            let u: f64 = rng.gen();
            let r = self.angle_lo + (self.angle_hi - self.angle_lo) * u;
            let p = r.sin().powi(2);
            if p > 0.0 && p < 1.0 {
                return p;
            }
        }
    }
}

/// The arcsine CDF `(2/pi) asin(sqrt(p))` on [0, 1].
pub fn arcsine_cdf(p: f64) -> f64 {
    2.0 / PI * p.clamp(0.0, 1.0).sqrt().asin()
}

/// Any of the supported bias distributions.
#[derive(Debug, Clone, PartialEq)]
pub enum BiasDistribution {
    Discrete(DiscreteBiasDistribution),
    Continuous(ContinuousArcsine),
}

impl BiasDistribution {
    pub fn cdf(&self, p: f64) -> f64 {
        match self {
            BiasDistribution::Discrete(d) => d.cdf(p),
            BiasDistribution::Continuous(c) => c.cdf(p),
        }
    }

    pub fn sample_one<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            BiasDistribution::Discrete(d) => d.sample_one(rng),
            BiasDistribution::Continuous(c) => c.sample_one(rng),
        }
    }

    /// `count` i.i.d. biases from `rng`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R, count: usize) -> Vec<f64> {
        (0..count).map(|_| self.sample_one(rng)).collect()
    }

    /// Short family label used in reports.
    pub fn family_name(&self) -> &'static str {
        match self {
            BiasDistribution::Discrete(d) => d.family().name(),
            BiasDistribution::Continuous(_) => "arcsine",
        }
    }

    /// Number of atoms for discrete distributions.
    pub fn point_count(&self) -> Option<usize> {
        match self {
            BiasDistribution::Discrete(d) => Some(d.point_count()),
            BiasDistribution::Continuous(_) => None,
        }
    }
}

impl From<DiscreteBiasDistribution> for BiasDistribution {
    fn from(d: DiscreteBiasDistribution) -> Self {
        BiasDistribution::Discrete(d)
    }
}

impl From<ContinuousArcsine> for BiasDistribution {
    fn from(c: ContinuousArcsine) -> Self {
        BiasDistribution::Continuous(c)
    }
}

/// Heuristic cutoff schedules `c -> delta_c` for the continuous family.
///
/// None of these is tied to a security proof; they only fix a reproducible
/// choice for sweeps. `power43` is pinned to `delta_10 = 0.003`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CutoffSchedule {
    /// No truncation: the plain arcsine law.
    None,
    /// `0.003 * (10 / c)^{4/3}`.
    Power43,
}

impl CutoffSchedule {
    pub const DEFAULT: CutoffSchedule = CutoffSchedule::Power43;

    pub fn name(self) -> &'static str {
        match self {
            CutoffSchedule::None => "none",
            CutoffSchedule::Power43 => "power43",
        }
    }

    pub fn cutoff(self, colluders: usize) -> f64 {
        match self {
            CutoffSchedule::None => 0.0,
            CutoffSchedule::Power43 => {
                let c = colluders.max(1) as f64;
                0.003 * (10.0 / c).powf(4.0 / 3.0)
            }
        }
    }
}

impl Default for CutoffSchedule {
    fn default() -> Self {
        Self::DEFAULT
    }
}

impl FromStr for CutoffSchedule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(CutoffSchedule::None),
            "power43" | "default" => Ok(CutoffSchedule::Power43),
            other => Err(Error::InvalidParameter(format!(
                "unknown cutoff schedule `{other}` (expected none or power43)"
            ))),
        }
    }
}
