//! Exact expected coalition score, code-length constants, convergence
//! diagnostics for the Gauss-Legendre family, and Monte Carlo validation.
//!
//! The expected coalition score per segment is
//!
//! ```text
//! mu = E_p sum_sigma C(c, sigma) p^sigma q^(c - sigma) (2 theta[sigma] - 1) A(sigma, p)
//! A(sigma, p) = sigma sqrt(q/p) - (c - sigma) sqrt(p/q)
//! ```
//!
//! i.e. the total score of all `c` pirates in one segment, not the average
//! per pirate. With this normalization `d_l = 2 / mu^2`.

use std::f64::consts::PI;
use std::io::Write;
use std::ops::RangeInclusive;
use std::str::FromStr;
use std::sync::OnceLock;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::attacks::{attack_column, minimizing_profile, profile_of, Strategy, StrategyProfile};
use crate::distributions::{
    arcsine_cdf, gauss_legendre_distribution, points_for_colluders, BiasDistribution,
    ContinuousArcsine, CutoffSchedule, DiscreteFamily,
};
use crate::error::{Error, Result};
use crate::format::sig17;
use crate::legendre::legendre_roots;
use crate::scheme::{accuse, generate_code, SchemeParameters};

/// Asymptotic code-length constant of the arcsine distribution.
pub const ARCSINE_DL: f64 = PI * PI / 2.0;

/// Binomial coefficients are exact products up to this coalition size and
/// log-space beyond it.
const DIRECT_BINOMIAL_MAX: usize = 30;

/// Binomial probabilities `C(c, sigma) p^sigma q^(c - sigma)` for a fixed `c`.
#[derive(Debug, Clone)]
pub struct BinomialTable {
    n: usize,
    coefficients: Vec<f64>,
    log_coefficients: Vec<f64>,
}

impl BinomialTable {
    pub fn new(n: usize) -> Self {
        if n <= DIRECT_BINOMIAL_MAX {
            let mut coefficients = vec![1.0; n + 1];
            for k in 1..=n {
                coefficients[k] = coefficients[k - 1] * (n - k + 1) as f64 / k as f64;
            }
            for c in &mut coefficients {
                *c = c.round();
            }
            Self {
                n,
                coefficients,
                log_coefficients: Vec::new(),
            }
        } else {
            let mut log_fact = vec![0.0; n + 1];
            for k in 1..=n {
                log_fact[k] = log_fact[k - 1] + (k as f64).ln();
            }
            let log_coefficients = (0..=n)
                .map(|k| log_fact[n] - log_fact[k] - log_fact[n - k])
                .collect();
            Self {
                n,
                coefficients: Vec::new(),
                log_coefficients,
            }
        }
    }

    pub fn pmf(&self, k: usize, p: f64) -> f64 {
        let q = 1.0 - p;
        if self.n <= DIRECT_BINOMIAL_MAX {
            self.coefficients[k] * p.powi(k as i32) * q.powi((self.n - k) as i32)
        } else {
            let mut log = self.log_coefficients[k];
            if k > 0 {
                log += k as f64 * p.ln();
            }
            if k < self.n {
                log += (self.n - k) as f64 * (-p).ln_1p();
            }
            log.exp()
        }
    }
}

/// Total coalition score in a segment where `sigma` of `c` pirates hold a 1
/// and the output is 1. Outputting 0 scores exactly the negation.
pub fn coalition_score_if_one(sigma: usize, c: usize, p: f64) -> f64 {
    let q = 1.0 - p;
    let mut a = 0.0;
    if sigma > 0 {
        a += sigma as f64 * (q / p).sqrt();
    }
    if sigma < c {
        a -= (c - sigma) as f64 * (p / q).sqrt();
    }
    a
}

const PANEL_NODES: usize = 20;
const MAX_PANELS: usize = 4096;
/// Relative error target for continuous expectations.
pub const INTEGRATION_TOLERANCE: f64 = 1e-11;

fn panel_rule() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| {
        let roots = legendre_roots(PANEL_NODES).expect("fixed low degree");
        (roots.roots().to_vec(), roots.standard_weights())
    })
}

fn composite_angle_mean<F>(lo: f64, hi: f64, panels: usize, dim: usize, f: &F) -> Vec<f64>
where
    F: Fn(f64, &mut [f64]),
{
    let (nodes, weights) = panel_rule();
    let width = (hi - lo) / panels as f64;
    let mut total = vec![0.0; dim];
    let mut buf = vec![0.0; dim];
    for m in 0..panels {
        let mid = lo + (m as f64 + 0.5) * width;
        for (&x, &w) in nodes.iter().zip(weights) {
            let r = mid + 0.5 * width * x;
            buf.iter_mut().for_each(|v| *v = 0.0);
            f(r.sin().powi(2), &mut buf);
            for (t, v) in total.iter_mut().zip(&buf) {
                *t += w * v;
            }
        }
    }
    // mean over [lo, hi]: (width / 2) * sum / (hi - lo)
    let scale = 0.5 / panels as f64;
    total.iter_mut().for_each(|t| *t *= scale);
    total
}

/// `E_p[f(p)]` for a vector-valued `f` that fills its output slice.
///
/// Discrete distributions are summed exactly. For the continuous arcsine law
/// the substitution `p = sin^2 r` makes `r` uniform, and the smooth integrand
/// is handled with composite 20-point Gauss-Legendre panels, doubled until two
/// successive estimates agree to [`INTEGRATION_TOLERANCE`] relative to the
/// largest component.
pub fn expectation<F>(distribution: &BiasDistribution, dim: usize, f: F) -> Result<Vec<f64>>
where
    F: Fn(f64, &mut [f64]),
{
    match distribution {
        BiasDistribution::Discrete(d) => {
            let mut total = vec![0.0; dim];
            let mut buf = vec![0.0; dim];
            for (&p, &w) in d.points().iter().zip(d.probabilities()) {
                buf.iter_mut().for_each(|v| *v = 0.0);
                f(p, &mut buf);
                for (t, v) in total.iter_mut().zip(&buf) {
                    *t += w * v;
                }
            }
            Ok(total)
        }
        BiasDistribution::Continuous(c) => {
            let (lo, hi) = c.angle_bounds();
            let mut panels = 4;
            let mut prev = composite_angle_mean(lo, hi, panels, dim, &f);
            loop {
                panels *= 2;
                let next = composite_angle_mean(lo, hi, panels, dim, &f);
                let scale = next.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1e-300);
                let err = prev
                    .iter()
                    .zip(&next)
                    .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
                if err <= INTEGRATION_TOLERANCE * scale {
                    return Ok(next);
                }
                if panels >= MAX_PANELS {
                    return Err(Error::IntegrationFailed {
                        estimate: err / scale,
                    });
                }
                prev = next;
            }
        }
    }
}

/// Expected coalition score per segment and the derived code-length constant.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MuReport {
    pub family: String,
    pub c_tilde: usize,
    pub points: Option<usize>,
    pub cutoff: Option<f64>,
    pub strategy: String,
    pub mu: f64,
    pub dl: f64,
    /// `E[S^2]` of the per-segment coalition score; independent of the profile.
    pub score_second_moment: f64,
}

/// Expected coalition score of `coalition_size` pirates following `profile`.
pub fn coalition_mean(
    distribution: &BiasDistribution,
    coalition_size: usize,
    profile: &StrategyProfile,
) -> Result<MuReport> {
    if coalition_size == 0 {
        return Err(Error::InvalidParameter(
            "coalition size must be at least 1".into(),
        ));
    }
    if profile.coalition_size() != coalition_size {
        return Err(Error::LengthMismatch {
            what: "strategy profile",
            expected: coalition_size + 1,
            actual: profile.theta().len(),
        });
    }
    let c = coalition_size;
    let binom = BinomialTable::new(c);
    let theta = profile.theta();
    let moments = expectation(distribution, 2, |p, out| {
        for (sigma, &t) in theta.iter().enumerate() {
            let weight = binom.pmf(sigma, p);
            let a = coalition_score_if_one(sigma, c, p);
            out[0] += weight * (2.0 * t - 1.0) * a;
            out[1] += weight * a * a;
        }
    })?;
    let mu = moments[0];
    if mu == 0.0 || !mu.is_finite() {
        return Err(Error::DegenerateMean { mu });
    }
    let cutoff = match distribution {
        BiasDistribution::Continuous(a) => Some(a.cutoff()),
        BiasDistribution::Discrete(_) => None,
    };
    Ok(MuReport {
        family: distribution.family_name().to_string(),
        c_tilde: c,
        points: distribution.point_count(),
        cutoff,
        strategy: "custom".to_string(),
        mu,
        dl: 2.0 / (mu * mu),
        score_second_moment: moments[1],
    })
}

/// `mu` under the score-minimizing attack: the worst case for the tracer.
pub fn minimum_coalition_mean(
    distribution: &BiasDistribution,
    coalition_size: usize,
) -> Result<MuReport> {
    let profile = minimizing_profile(distribution, coalition_size)?;
    let mut report = coalition_mean(distribution, coalition_size, &profile)?;
    report.strategy = "minimizing".to_string();
    Ok(report)
}

/// How the pirates respond in an analysis run.
#[derive(Debug, Clone, PartialEq)]
pub enum StrategyChoice {
    Named(Strategy),
    Minimizing,
    Custom(StrategyProfile),
}

impl StrategyChoice {
    pub fn label(&self) -> String {
        match self {
            StrategyChoice::Named(s) => s.name().to_string(),
            StrategyChoice::Minimizing => "minimizing".to_string(),
            StrategyChoice::Custom(_) => "custom".to_string(),
        }
    }

    pub fn profile(
        &self,
        distribution: &BiasDistribution,
        coalition_size: usize,
    ) -> Result<StrategyProfile> {
        match self {
            StrategyChoice::Named(s) => profile_of(*s, coalition_size),
            StrategyChoice::Minimizing => minimizing_profile(distribution, coalition_size),
            StrategyChoice::Custom(p) => Ok(p.clone()),
        }
    }

    /// Labelled [`coalition_mean`] under this choice.
    pub fn evaluate(
        &self,
        distribution: &BiasDistribution,
        coalition_size: usize,
    ) -> Result<MuReport> {
        let profile = self.profile(distribution, coalition_size)?;
        let mut report = coalition_mean(distribution, coalition_size, &profile)?;
        report.strategy = self.label();
        Ok(report)
    }
}

impl FromStr for StrategyChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "minimizing" | "min" => Ok(StrategyChoice::Minimizing),
            other => Ok(StrategyChoice::Named(other.parse()?)),
        }
    }
}

/// A distribution family as it appears in sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FamilyKind {
    Discrete(DiscreteFamily),
    Arcsine,
}

impl FamilyKind {
    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::Discrete(f) => f.name(),
            FamilyKind::Arcsine => "arcsine",
        }
    }

    /// The member of this family designed for `colluders` pirates: discrete
    /// families use `ceil(c/2)` points, the continuous one the schedule's
    /// cutoff.
    pub fn for_colluders(
        self,
        colluders: usize,
        schedule: CutoffSchedule,
    ) -> Result<BiasDistribution> {
        Ok(match self {
            FamilyKind::Discrete(f) => f.build(points_for_colluders(colluders))?.into(),
            FamilyKind::Arcsine => ContinuousArcsine::new(schedule.cutoff(colluders))?.into(),
        })
    }
}

impl FromStr for FamilyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "gl" | "gauss_legendre" | "gauss-legendre" => {
                FamilyKind::Discrete(DiscreteFamily::GaussLegendre)
            }
            "darcsine" | "discrete_arcsine" | "discrete-arcsine" => {
                FamilyKind::Discrete(DiscreteFamily::DiscreteArcsine)
            }
            "cheb" | "chebyshev_gauss" | "chebyshev-gauss" => {
                FamilyKind::Discrete(DiscreteFamily::ChebyshevGauss)
            }
            "arcsine" => FamilyKind::Arcsine,
            other => {
                return Err(Error::InvalidParameter(format!(
                    "unknown family `{other}` (expected gl, darcsine, cheb or arcsine)"
                )))
            }
        })
    }
}

/// Reference row label for the asymptotic arcsine constant.
pub const REFERENCE_FAMILY: &str = "arcsine_limit";

/// `d_l` for every `(family, c)` pair, ordered by family then `c`, followed by
/// one reference row per `c` carrying `mu = 2/pi`, `d_l = pi^2 / 2`.
///
/// Tasks run on the current rayon pool; the output order does not depend on
/// the number of threads.
pub fn dl_sweep(
    families: &[FamilyKind],
    colluders: RangeInclusive<usize>,
    strategy: &StrategyChoice,
    schedule: CutoffSchedule,
) -> Result<Vec<MuReport>> {
    if families.is_empty() || colluders.is_empty() || *colluders.start() == 0 {
        return Err(Error::InvalidParameter(
            "sweep needs at least one family and a coalition range starting at 1 or more".into(),
        ));
    }
    let tasks: Vec<(FamilyKind, usize)> = families
        .iter()
        .flat_map(|&f| colluders.clone().map(move |c| (f, c)))
        .collect();
    let mut rows = tasks
        .par_iter()
        .map(|&(family, c)| {
            let dist = family.for_colluders(c, schedule)?;
            strategy.evaluate(&dist, c)
        })
        .collect::<Result<Vec<_>>>()?;
    rows.extend(colluders.map(|c| MuReport {
        family: REFERENCE_FAMILY.to_string(),
        c_tilde: c,
        points: None,
        cutoff: Some(0.0),
        strategy: "asymptotic".to_string(),
        mu: 2.0 / PI,
        dl: ARCSINE_DL,
        score_second_moment: f64::NAN,
    }));
    Ok(rows)
}

/// CSV with columns `family,c_tilde,points,strategy,mu,dl`.
pub fn write_sweep_csv<W: Write>(rows: &[MuReport], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["family", "c_tilde", "points", "strategy", "mu", "dl"])?;
    for r in rows {
        w.write_record([
            r.family.clone(),
            r.c_tilde.to_string(),
            r.points.map(|p| p.to_string()).unwrap_or_default(),
            r.strategy.clone(),
            sig17(r.mu),
            sig17(r.dl),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Distance between the exact Gauss-Legendre parameters for `c` points and
/// their large-`c` forms, over the middle indices `alpha c < k < (1 - alpha) c`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub c: usize,
    pub alpha: f64,
    /// `max |p_k - sin^2(pi k / 2c)|`
    pub max_point_error: f64,
    /// `max |p_k - sin^2((4k - 1) pi / (8c + 4))|`
    pub max_refined_point_error: f64,
    /// `max |w_k - pi/c|` with unnormalized weights
    pub max_weight_error: f64,
    /// `c` times `max_weight_error`
    pub max_weight_error_scaled: f64,
    /// `pi - N_c`
    pub normalizer_gap: f64,
    /// sup over `p = 0.01, ..., 0.99` of `|F(p) - F_arcsine(p)|`
    pub cdf_sup_error: f64,
}

/// Grid `0.01, 0.02, ..., 0.99` used for CDF comparisons.
pub fn cdf_grid() -> impl Iterator<Item = f64> {
    (1..100).map(|i| i as f64 / 100.0)
}

/// Sup over [`cdf_grid`] of `|F(p) - F_arcsine(p)|` for the `c`-point
/// Gauss-Legendre distribution.
pub fn gauss_legendre_cdf_gap(c: usize) -> Result<f64> {
    let d = gauss_legendre_distribution(c)?;
    Ok(cdf_grid()
        .map(|p| (d.cdf(p) - arcsine_cdf(p)).abs())
        .fold(0.0, f64::max))
}

pub fn convergence_report(c: usize, alpha: f64) -> Result<ConvergenceReport> {
    if c < 2 {
        return Err(Error::InvalidParameter(
            "convergence report needs c >= 2".into(),
        ));
    }
    if !(alpha > 0.0 && alpha < 0.5) {
        return Err(Error::InvalidParameter(format!(
            "alpha must lie in (0, 1/2), got {alpha}"
        )));
    }
    let cf = c as f64;
    let ks: Vec<usize> = (1..=c)
        .filter(|&k| alpha * cf < k as f64 && (k as f64) < (1.0 - alpha) * cf)
        .collect();
    if ks.is_empty() {
        return Err(Error::InvalidParameter(format!(
            "no index k satisfies {alpha} * {c} < k < (1 - {alpha}) * {c}"
        )));
    }

    let roots = legendre_roots(c)?;
    let weights = roots.modified_weights();
    let points: Vec<f64> = roots.roots().iter().map(|&x| (1.0 + x) / 2.0).collect();
    let normalizer: f64 = weights.iter().sum();

    let mut max_point_error = 0.0f64;
    let mut max_refined_point_error = 0.0f64;
    let mut max_weight_error = 0.0f64;
    for &k in &ks {
        let kf = k as f64;
        let p = points[k - 1];
        let leading = (PI * kf / (2.0 * cf)).sin().powi(2);
        let refined = ((4.0 * kf - 1.0) * PI / (8.0 * cf + 4.0)).sin().powi(2);
        max_point_error = max_point_error.max((p - leading).abs());
        max_refined_point_error = max_refined_point_error.max((p - refined).abs());
        max_weight_error = max_weight_error.max((weights[k - 1] - PI / cf).abs());
    }

    Ok(ConvergenceReport {
        c,
        alpha,
        max_point_error,
        max_refined_point_error,
        max_weight_error,
        max_weight_error_scaled: cf * max_weight_error,
        normalizer_gap: PI - normalizer,
        cdf_sup_error: gauss_legendre_cdf_gap(c)?,
    })
}

/// CSV with columns
/// `c,alpha,max_point_err,max_weight_err_scaled,normalizer_gap,cdf_sup_err`.
pub fn write_convergence_csv<W: Write>(rows: &[ConvergenceReport], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "c",
        "alpha",
        "max_point_err",
        "max_weight_err_scaled",
        "normalizer_gap",
        "cdf_sup_err",
    ])?;
    for r in rows {
        w.write_record([
            r.c.to_string(),
            sig17(r.alpha),
            sig17(r.max_point_error),
            sig17(r.max_weight_error_scaled),
            sig17(r.normalizer_gap),
            sig17(r.cdf_sup_error),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Pirate behaviour during simulation.
#[derive(Debug, Clone, PartialEq)]
pub enum Attack {
    Named(Strategy),
    Profile(StrategyProfile),
}

impl Attack {
    pub fn label(&self) -> String {
        match self {
            Attack::Named(s) => s.name().to_string(),
            Attack::Profile(_) => "profile".to_string(),
        }
    }

    fn respond(&self, column: &[bool], rng: &mut ChaCha8Rng) -> Result<bool> {
        match self {
            Attack::Named(s) => attack_column(*s, column, rng),
            Attack::Profile(p) => p.respond(column, rng),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulationReport {
    pub params: SchemeParameters,
    pub distribution: String,
    pub strategy: String,
    pub coalition: Vec<usize>,
    /// Fraction of trials accusing at least one innocent user.
    pub fp_rate: f64,
    /// Fraction of trials accusing no pirate.
    pub fn_rate: f64,
    /// Mean over trials of the coalition's summed total score.
    pub mean_pirate_score: f64,
    /// Standard error of `mean_pirate_score`.
    pub pirate_score_std_error: f64,
    /// Mean over trials of the highest single-pirate score.
    pub mean_top_pirate_score: f64,
    pub trials: usize,
    pub seed: u64,
}

struct TrialOutcome {
    innocent_accused: bool,
    pirate_accused: bool,
    coalition_total: f64,
    top_pirate: f64,
}

fn run_trial(
    params: &SchemeParameters,
    distribution: &BiasDistribution,
    attack: &Attack,
    coalition: &[usize],
    seed: u64,
    trial: u64,
) -> Result<TrialOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);

    let biases = distribution.sample(&mut rng, params.code_length);
    let code = generate_code(params.users, &biases, &mut rng)?;
    let mut column = vec![false; coalition.len()];
    let mut output = Vec::with_capacity(params.code_length);
    for i in 0..params.code_length {
        for (slot, &j) in column.iter_mut().zip(coalition) {
            *slot = code.get(j, i);
        }
        output.push(attack.respond(&column, &mut rng)?);
    }

    let result = accuse(&code, &output, params.threshold)?;
    let is_pirate = |j: usize| coalition.contains(&j);
    Ok(TrialOutcome {
        innocent_accused: result.accused.iter().any(|&j| !is_pirate(j)),
        pirate_accused: result.accused.iter().any(|&j| is_pirate(j)),
        coalition_total: coalition.iter().map(|&j| result.scores[j]).sum(),
        top_pirate: coalition
            .iter()
            .map(|&j| result.scores[j])
            .fold(f64::NEG_INFINITY, f64::max),
    })
}

/// Run `trials` independent rounds of generate, attack, accuse.
///
/// Trial `t` draws everything from `ChaCha8Rng::seed_from_u64(seed)` on stream
/// `t`, so the report is identical for any number of worker threads.
pub fn simulate(
    params: &SchemeParameters,
    distribution: &BiasDistribution,
    attack: &Attack,
    coalition: &[usize],
    trials: usize,
    seed: u64,
) -> Result<SimulationReport> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    if coalition.is_empty() || coalition.len() > params.users {
        return Err(Error::InvalidParameter(format!(
            "coalition size {} must lie in 1..={}",
            coalition.len(),
            params.users
        )));
    }
    let mut sorted = coalition.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != coalition.len() {
        return Err(Error::InvalidParameter(
            "coalition lists a user twice".into(),
        ));
    }
    if let Some(&j) = sorted.last().filter(|&&j| j >= params.users) {
        return Err(Error::InvalidParameter(format!(
            "coalition member {j} is not among the {} users",
            params.users
        )));
    }
    if let Attack::Profile(p) = attack {
        if p.coalition_size() != coalition.len() {
            return Err(Error::LengthMismatch {
                what: "strategy profile",
                expected: coalition.len() + 1,
                actual: p.theta().len(),
            });
        }
    }

    let outcomes = (0..trials as u64)
        .into_par_iter()
        .map(|t| run_trial(params, distribution, attack, coalition, seed, t))
        .collect::<Result<Vec<_>>>()?;

    let n = trials as f64;
    let fp = outcomes.iter().filter(|o| o.innocent_accused).count() as f64;
    let missed = outcomes.iter().filter(|o| !o.pirate_accused).count() as f64;
    let mean = outcomes.iter().map(|o| o.coalition_total).sum::<f64>() / n;
    let var = if trials > 1 {
        outcomes
            .iter()
            .map(|o| (o.coalition_total - mean).powi(2))
            .sum::<f64>()
            / (n - 1.0)
    } else {
        0.0
    };
    let top = outcomes.iter().map(|o| o.top_pirate).sum::<f64>() / n;

    Ok(SimulationReport {
        params: params.clone(),
        distribution: distribution.family_name().to_string(),
        strategy: attack.label(),
        coalition: coalition.to_vec(),
        fp_rate: fp / n,
        fn_rate: missed / n,
        mean_pirate_score: mean,
        pirate_score_std_error: (var / n).sqrt(),
        mean_top_pirate_score: top,
        trials,
        seed,
    })
}

/// The `c`-point discrete arcsine angles are midpoints of `c` equal cells
/// covering `[pi / (8c + 4), pi/2 - pi / (8c + 4)]`; this is the continuous
/// cutoff with the same angle range.
pub fn discrete_arcsine_equivalent_cutoff(point_count: usize) -> f64 {
    (PI / (8.0 * point_count as f64 + 4.0)).sin().powi(2)
}
