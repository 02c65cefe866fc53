//! Pirate strategies under the marking assumption.
//!
//! Each strategy exists in two forms: an executable rule that maps the
//! coalition's symbols in one segment to an output bit, and a response
//! profile `theta[sigma] = Pr[y = 1 | sigma ones]` used by the exact analysis.

use std::fmt;
use std::io::Read;
use std::str::FromStr;

use rand::Rng;

use crate::analysis::{coalition_score_if_one, expectation, BinomialTable};
use crate::distributions::BiasDistribution;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Strategy {
    /// Copy the symbol of a uniformly chosen pirate.
    Interleaving,
    /// Most common symbol, fair coin on ties.
    Majority,
    /// Least common symbol, fair coin on ties.
    Minority,
    /// Fair coin between the distinct symbols seen.
    CoinFlip,
}

impl Strategy {
    pub const ALL: [Strategy; 4] = [
        Strategy::Interleaving,
        Strategy::Majority,
        Strategy::Minority,
        Strategy::CoinFlip,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::Interleaving => "interleaving",
            Strategy::Majority => "majority",
            Strategy::Minority => "minority",
            Strategy::CoinFlip => "coin-flip",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "interleaving" => Ok(Strategy::Interleaving),
            "majority" => Ok(Strategy::Majority),
            "minority" => Ok(Strategy::Minority),
            "coin-flip" | "coinflip" | "coin_flip" => Ok(Strategy::CoinFlip),
            other => Err(Error::UnknownStrategy(other.to_string())),
        }
    }
}

/// Output bit for one segment given the coalition's symbols.
///
/// Unanimous columns are echoed by every strategy.
pub fn attack_column<R: Rng + ?Sized>(
    strategy: Strategy,
    pirate_symbols: &[bool],
    rng: &mut R,
) -> Result<bool> {
    if pirate_symbols.is_empty() {
        return Err(Error::InvalidParameter("empty pirate column".into()));
    }
    let ones = pirate_symbols.iter().filter(|&&b| b).count();
    let zeros = pirate_symbols.len() - ones;
    if ones == 0 || zeros == 0 {
        return Ok(ones > 0);
    }
    Ok(match strategy {
        Strategy::Interleaving => pirate_symbols[rng.gen_range(0..pirate_symbols.len())],
        Strategy::Majority if ones == zeros => rng.gen(),
        Strategy::Majority => ones > zeros,
        Strategy::Minority if ones == zeros => rng.gen(),
        Strategy::Minority => ones < zeros,
        Strategy::CoinFlip => rng.gen(),
    })
}

/// `theta[sigma] = Pr[y = 1 | sigma of the c pirates hold a 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct StrategyProfile {
    theta: Vec<f64>,
}

impl StrategyProfile {
    /// Validates length >= 2, forced endpoints `theta[0] = 0` and
    /// `theta[c] = 1`, and every entry in [0, 1].
    pub fn new(theta: Vec<f64>) -> Result<Self> {
        if theta.len() < 2 {
            return Err(Error::InvalidProfile(
                "a profile needs entries for sigma = 0..=c with c >= 1".into(),
            ));
        }
        if let Some((s, t)) = theta
            .iter()
            .enumerate()
            .find(|(_, &t)| !(0.0..=1.0).contains(&t))
        {
            return Err(Error::InvalidProfile(format!(
                "theta[{s}] = {t} is outside [0, 1]"
            )));
        }
        let c = theta.len() - 1;
        if theta[0] != 0.0 || theta[c] != 1.0 {
            return Err(Error::InvalidProfile(format!(
                "marking assumption requires theta[0] = 0 and theta[{c}] = 1"
            )));
        }
        Ok(Self { theta })
    }

    pub fn coalition_size(&self) -> usize {
        self.theta.len() - 1
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    /// Execute the profile on one column: output 1 with probability
    /// `theta[sigma]`.
    pub fn respond<R: Rng + ?Sized>(&self, pirate_symbols: &[bool], rng: &mut R) -> Result<bool> {
        if pirate_symbols.len() != self.coalition_size() {
            return Err(Error::LengthMismatch {
                what: "pirate column",
                expected: self.coalition_size(),
                actual: pirate_symbols.len(),
            });
        }
        let sigma = pirate_symbols.iter().filter(|&&b| b).count();
        let t = self.theta[sigma];
        Ok(if t == 0.0 || t == 1.0 {
            t == 1.0
        } else {
            rng.gen::<f64>() < t
        })
    }

    /// Read `(sigma, theta)` rows from CSV with a `sigma,theta` header.
    /// Every sigma in `0..=c` must appear exactly once.
    pub fn from_csv<R: Read>(input: R) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(input);
        let mut rows: Vec<(usize, f64)> = Vec::new();
        for record in reader.deserialize() {
            let (sigma, theta): (usize, f64) = record?;
            rows.push((sigma, theta));
        }
        if rows.is_empty() {
            return Err(Error::InvalidProfile("profile file has no rows".into()));
        }
        rows.sort_by_key(|&(s, _)| s);
        for (expected, &(sigma, _)) in rows.iter().enumerate() {
            if sigma != expected {
                return Err(Error::InvalidProfile(format!(
                    "sigma values must be exactly 0..=c, found {sigma} where {expected} was expected"
                )));
            }
        }
        Self::new(rows.into_iter().map(|(_, t)| t).collect())
    }
}

/// Closed-form response profile of a named strategy.
pub fn profile_of(strategy: Strategy, coalition_size: usize) -> Result<StrategyProfile> {
    if coalition_size == 0 {
        return Err(Error::InvalidParameter(
            "coalition size must be at least 1".into(),
        ));
    }
    let c = coalition_size;
    let theta = (0..=c)
        .map(|sigma| {
            if sigma == 0 {
                return 0.0;
            }
            if sigma == c {
                return 1.0;
            }
            let (ones, zeros) = (sigma, c - sigma);
            match strategy {
                Strategy::Interleaving => sigma as f64 / c as f64,
                Strategy::CoinFlip => 0.5,
                _ if ones == zeros => 0.5,
                Strategy::Majority => f64::from(u8::from(ones > zeros)),
                Strategy::Minority => f64::from(u8::from(ones < zeros)),
            }
        })
        .collect();
    StrategyProfile::new(theta)
}

/// The deterministic profile that minimizes the expected coalition score.
///
/// Outputting 1 with `sigma` ones earns `A(sigma, p)` and outputting 0 earns
/// `-A`, so the minimizer picks 1 exactly when `E_p[Pr(sigma | p) A(sigma, p)]`
/// is negative. Expectations within a relative `1e-12` of zero count as ties;
/// a tie sets `theta[sigma] = 0` when `sigma <= c - sigma` and 1 otherwise, so
/// the mirror pair of a symmetric distribution stays complementary.
pub fn minimizing_profile(
    distribution: &BiasDistribution,
    coalition_size: usize,
) -> Result<StrategyProfile> {
    if coalition_size == 0 {
        return Err(Error::InvalidParameter(
            "coalition size must be at least 1".into(),
        ));
    }
    let c = coalition_size;
    let binom = BinomialTable::new(c);
    // slots [0..=c] hold E[pmf * A]; slots [c+1..] hold the same with both
    // terms of A counted positively, a smooth magnitude scale for ties
    let moments = expectation(distribution, 2 * (c + 1), |p, out| {
        let q = 1.0 - p;
        let (up, down) = ((q / p).sqrt(), (p / q).sqrt());
        for sigma in 0..=c {
            let weight = binom.pmf(sigma, p);
            let (ones, zeros) = (sigma as f64, (c - sigma) as f64);
            out[sigma] = weight * coalition_score_if_one(sigma, c, p);
            out[c + 1 + sigma] = weight * (ones * up + zeros * down);
        }
    })?;

    let mut theta = vec![0.0; c + 1];
    theta[c] = 1.0;
    for sigma in 1..c {
        let signed = moments[sigma];
        let scale = moments[c + 1 + sigma];
        let tie = signed.abs() <= 1e-12 * scale;
        theta[sigma] = if tie {
            if sigma <= c - sigma {
                0.0
            } else {
                1.0
            }
        } else if signed < 0.0 {
            1.0
        } else {
            0.0
        };
    }
    StrategyProfile::new(theta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::{discrete_arcsine_distribution, gauss_legendre_distribution};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn unanimous_columns_are_forced() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for s in Strategy::ALL {
            for _ in 0..50 {
                assert!(attack_column(s, &[true, true, true], &mut rng).unwrap());
                assert!(!attack_column(s, &[false, false], &mut rng).unwrap());
            }
        }
        assert!(attack_column(Strategy::Majority, &[], &mut rng).is_err());
    }

    #[test]
    fn majority_and_minority() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let col = [true, false, true];
        assert!(attack_column(Strategy::Majority, &col, &mut rng).unwrap());
        assert!(!attack_column(Strategy::Minority, &col, &mut rng).unwrap());
    }

    #[test]
    fn interleaving_frequency() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let trials = 100_000;
        let ones = (0..trials)
            .filter(|_| {
                attack_column(Strategy::Interleaving, &[true, false, true], &mut rng).unwrap()
            })
            .count();
        assert!((ones as f64 / trials as f64 - 2.0 / 3.0).abs() <= 0.005);
    }

    #[test]
    fn strategy_names() {
        for s in Strategy::ALL {
            assert_eq!(s.name().parse::<Strategy>().unwrap(), s);
        }
        assert!(matches!(
            "random".parse::<Strategy>(),
            Err(Error::UnknownStrategy(_))
        ));
    }

    #[test]
    fn closed_form_profiles() {
        let t = profile_of(Strategy::Interleaving, 3).unwrap();
        assert_eq!(t.theta(), &[0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0]);
        let t = profile_of(Strategy::Majority, 4).unwrap();
        assert_eq!(t.theta(), &[0.0, 0.0, 0.5, 1.0, 1.0]);
        let t = profile_of(Strategy::Minority, 4).unwrap();
        assert_eq!(t.theta(), &[0.0, 1.0, 0.5, 0.0, 1.0]);
        let t = profile_of(Strategy::CoinFlip, 2).unwrap();
        assert_eq!(t.theta(), &[0.0, 0.5, 1.0]);
        let t = profile_of(Strategy::Majority, 1).unwrap();
        assert_eq!(t.theta(), &[0.0, 1.0]);
        assert!(profile_of(Strategy::Majority, 0).is_err());
    }

    #[test]
    fn profile_validation() {
        assert!(StrategyProfile::new(vec![0.0]).is_err());
        assert!(StrategyProfile::new(vec![0.1, 1.0]).is_err());
        assert!(StrategyProfile::new(vec![0.0, 0.9]).is_err());
        assert!(StrategyProfile::new(vec![0.0, 1.2, 1.0]).is_err());
        assert!(StrategyProfile::new(vec![0.0, 0.3, 1.0]).is_ok());
    }

    #[test]
    fn profile_csv() {
        let p = StrategyProfile::from_csv("sigma,theta\n2,1\n0,0\n1,0.25\n".as_bytes()).unwrap();
        assert_eq!(p.theta(), &[0.0, 0.25, 1.0]);
        assert!(StrategyProfile::from_csv("sigma,theta\n0,0\n2,1\n".as_bytes()).is_err());
        assert!(StrategyProfile::from_csv("sigma,theta\n".as_bytes()).is_err());
        assert!(StrategyProfile::from_csv("sigma,theta\n0,zero\n1,1\n".as_bytes()).is_err());
    }

    #[test]
    fn profile_execution_matches_theta() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let p = StrategyProfile::new(vec![0.0, 0.25, 1.0]).unwrap();
        let n = 40_000;
        let ones = (0..n)
            .filter(|_| p.respond(&[true, false], &mut rng).unwrap())
            .count() as f64;
        let sd = (0.25 * 0.75 / n as f64).sqrt();
        assert!((ones / n as f64 - 0.25).abs() <= 3.0 * sd);
        assert!(p.respond(&[true], &mut rng).is_err());
    }

    #[test]
    fn single_point_minimizer_ties_to_zero() {
        let d: BiasDistribution = gauss_legendre_distribution(1).unwrap().into();
        let t = minimizing_profile(&d, 2).unwrap();
        assert_eq!(t.theta(), &[0.0, 0.0, 1.0]);
    }

    #[test]
    fn minimizer_is_complementary_on_symmetric_distributions() {
        for c in 2..=9 {
            for d in [
                BiasDistribution::from(discrete_arcsine_distribution(3).unwrap()),
                BiasDistribution::from(gauss_legendre_distribution(2).unwrap()),
            ] {
                let t = minimizing_profile(&d, c).unwrap();
                for sigma in 1..c {
                    if 2 * sigma != c {
                        assert_eq!(t.theta()[sigma] + t.theta()[c - sigma], 1.0, "c={c}");
                    }
                }
            }
        }
    }
}
