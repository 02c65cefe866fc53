//! Codeword generation, the symbol-symmetric score, accusation, and
//! heuristic choice of code length and threshold.

use std::io::{BufRead, Write};

use rand::Rng;
use serde::Serialize;

use crate::analysis::minimum_coalition_mean;
use crate::distributions::BiasDistribution;
use crate::error::{Error, Result};
use crate::format::sig17;

fn check_bias(p: f64) -> Result<f64> {
    if p > 0.0 && p < 1.0 {
        Ok(p)
    } else {
        Err(Error::InvalidBias(p))
    }
}

/// Per-segment score of a user holding `symbol` when the pirates output
/// `output` in a segment with bias `bias`.
///
/// Agreement is rewarded by `sqrt(q/p)` on a 1 and `sqrt(p/q)` on a 0, and
/// disagreement penalized by the same amounts.
pub fn score(symbol: bool, output: bool, bias: f64) -> Result<f64> {
    let p = check_bias(bias)?;
    Ok(score_unchecked(symbol, output, p))
}

#[inline]
fn score_unchecked(symbol: bool, output: bool, p: f64) -> f64 {
    let q = 1.0 - p;
    match (symbol, output) {
        (true, true) => (q / p).sqrt(),
        (true, false) => -(q / p).sqrt(),
        (false, true) => -(p / q).sqrt(),
        (false, false) => (p / q).sqrt(),
    }
}

/// The `n x l` binary code with the bias used for each column.
///
/// Rows are bit-packed into `u64` words, least significant bit first.
#[derive(Debug, Clone, PartialEq)]
pub struct CodeMatrix {
    users: usize,
    length: usize,
    words_per_row: usize,
    bits: Vec<u64>,
    biases: Vec<f64>,
}

impl CodeMatrix {
    /// An all-zero matrix for the given biases.
    pub fn zeros(users: usize, biases: Vec<f64>) -> Result<Self> {
        if users == 0 {
            return Err(Error::InvalidParameter(
                "code needs at least one user".into(),
            ));
        }
        if biases.is_empty() {
            return Err(Error::InvalidParameter(
                "code needs at least one segment".into(),
            ));
        }
        for &p in &biases {
            check_bias(p)?;
        }
        let length = biases.len();
        let words_per_row = length.div_ceil(64);
        Ok(Self {
            users,
            length,
            words_per_row,
            bits: vec![0; users * words_per_row],
            biases,
        })
    }

    pub fn users(&self) -> usize {
        self.users
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn biases(&self) -> &[f64] {
        &self.biases
    }

    #[inline]
    pub fn get(&self, user: usize, segment: usize) -> bool {
        let word = self.bits[user * self.words_per_row + segment / 64];
        (word >> (segment % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, user: usize, segment: usize, bit: bool) {
        let word = &mut self.bits[user * self.words_per_row + segment / 64];
        let mask = 1u64 << (segment % 64);
        if bit {
            *word |= mask;
        } else {
            *word &= !mask;
        }
    }

    /// The codeword of one user.
    pub fn row(&self, user: usize) -> Vec<bool> {
        (0..self.length).map(|i| self.get(user, i)).collect()
    }

    /// Write the textual form: a `n l` header, the biases on one line, then
    /// one line of `0`/`1` characters per user.
    pub fn write_text<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "{} {}", self.users, self.length)?;
        let biases: Vec<String> = self.biases.iter().map(|&p| sig17(p)).collect();
        writeln!(out, "{}", biases.join(" "))?;
        let mut line = String::with_capacity(self.length);
        for j in 0..self.users {
            line.clear();
            line.extend((0..self.length).map(|i| if self.get(j, i) { '1' } else { '0' }));
            writeln!(out, "{line}")?;
        }
        Ok(())
    }

    /// Parse the textual form written by [`CodeMatrix::write_text`].
    ///
    /// Biases may span several lines; each codeword must be a single line.
    pub fn read_text<R: BufRead>(input: R) -> Result<Self> {
        let mut lines = input.lines();
        let header = next_nonempty(&mut lines)?
            .ok_or_else(|| Error::Parse("missing `n l` header".into()))?;
        let dims: Vec<usize> = header
            .split_whitespace()
            .map(|t| {
                t.parse()
                    .map_err(|_| Error::Parse(format!("bad header token `{t}`")))
            })
            .collect::<Result<_>>()?;
        let [users, length] = dims[..] else {
            return Err(Error::Parse(format!(
                "header must be `n l`, got `{header}`"
            )));
        };

        let mut biases = Vec::with_capacity(length);
        while biases.len() < length {
            let line = next_nonempty(&mut lines)?
                .ok_or_else(|| Error::Parse("file ends inside the bias list".into()))?;
            for tok in line.split_whitespace() {
                let p: f64 = tok
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad bias `{tok}`")))?;
                biases.push(p);
            }
        }
        if biases.len() != length {
            return Err(Error::LengthMismatch {
                what: "bias list",
                expected: length,
                actual: biases.len(),
            });
        }

        let mut code = CodeMatrix::zeros(users, biases)?;
        for j in 0..users {
            let line = next_nonempty(&mut lines)?
                .ok_or_else(|| Error::Parse(format!("missing codeword for user {j}")))?;
            let line = line.trim();
            if line.len() != length {
                return Err(Error::LengthMismatch {
                    what: "codeword",
                    expected: length,
                    actual: line.len(),
                });
            }
            for (i, ch) in line.chars().enumerate() {
                match ch {
                    '0' => {}
                    '1' => code.set(j, i, true),
                    other => return Err(Error::Parse(format!("invalid symbol `{other}`"))),
                }
            }
        }
        if next_nonempty(&mut lines)?.is_some() {
            return Err(Error::Parse("trailing data after the last codeword".into()));
        }
        Ok(code)
    }
}

fn next_nonempty<I>(lines: &mut I) -> Result<Option<String>>
where
    I: Iterator<Item = std::io::Result<String>>,
{
    for line in lines {
        let line = line?;
        if !line.trim().is_empty() {
            return Ok(Some(line));
        }
    }
    Ok(None)
}

/// Draw every `X[j][i] ~ Bernoulli(biases[i])` from `rng`, user by user.
pub fn generate_code<R: Rng + ?Sized>(
    users: usize,
    biases: &[f64],
    rng: &mut R,
) -> Result<CodeMatrix> {
    let mut code = CodeMatrix::zeros(users, biases.to_vec())?;
    for j in 0..users {
        for (i, &p) in biases.iter().enumerate() {
            if rng.gen::<f64>() < p {
                code.set(j, i, true);
            }
        }
    }
    Ok(code)
}

#[derive(Debug, Clone, PartialEq)]
pub struct AccusationResult {
    pub scores: Vec<f64>,
    pub threshold: f64,
    pub accused: Vec<usize>,
}

impl AccusationResult {
    pub fn is_accused(&self, user: usize) -> bool {
        self.accused.binary_search(&user).is_ok()
    }

    /// CSV with columns `user,score,accused`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["user", "score", "accused"])?;
        for (j, &s) in self.scores.iter().enumerate() {
            let accused = if s > self.threshold { "true" } else { "false" };
            w.write_record([j.to_string(), sig17(s), accused.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Total score of every user against `pirate_output`; users strictly above
/// `threshold` are accused.
pub fn accuse(
    code: &CodeMatrix,
    pirate_output: &[bool],
    threshold: f64,
) -> Result<AccusationResult> {
    if pirate_output.len() != code.length() {
        return Err(Error::LengthMismatch {
            what: "pirate output",
            expected: code.length(),
            actual: pirate_output.len(),
        });
    }
    let per_symbol: Vec<(f64, f64)> = code
        .biases()
        .iter()
        .zip(pirate_output)
        .map(|(&p, &y)| (score_unchecked(false, y, p), score_unchecked(true, y, p)))
        .collect();

    let scores: Vec<f64> = (0..code.users())
        .map(|j| {
            per_symbol
                .iter()
                .enumerate()
                .map(|(i, &(s0, s1))| if code.get(j, i) { s1 } else { s0 })
                .sum()
        })
        .collect();
    let accused = scores
        .iter()
        .enumerate()
        .filter(|(_, &s)| s > threshold)
        .map(|(j, _)| j)
        .collect();
    Ok(AccusationResult {
        scores,
        threshold,
        accused,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SchemeParameters {
    pub colluders: usize,
    pub users: usize,
    pub epsilon1: f64,
    pub code_length: usize,
    pub threshold: f64,
    pub dl_constant: f64,
}

impl SchemeParameters {
    /// Length and threshold for explicit `d_l`: `l = ceil(d_l c^2 ln(n/eps1))`
    /// and `Z = sqrt(2 l ln(n/eps1))`.
    pub fn from_dl(colluders: usize, users: usize, epsilon1: f64, dl: f64) -> Result<Self> {
        if colluders == 0 {
            return Err(Error::InvalidParameter(
                "colluders must be at least 1".into(),
            ));
        }
        if users < 2 {
            return Err(Error::InvalidParameter("users must be at least 2".into()));
        }
        if !(epsilon1 > 0.0 && epsilon1 < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "epsilon1 must lie in (0, 1), got {epsilon1}"
            )));
        }
        if !(dl.is_finite() && dl > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "d_l must be positive, got {dl}"
            )));
        }
        let log_term = (users as f64 / epsilon1).ln();
        let c = colluders as f64;
        let code_length = ((dl * c * c * log_term).ceil() as usize).max(1);
        let threshold = (2.0 * code_length as f64 * log_term).sqrt();
        Ok(Self {
            colluders,
            users,
            epsilon1,
            code_length,
            threshold,
            dl_constant: dl,
        })
    }
}

/// Parameters sized for the strongest score-minimizing coalition of
/// `colluders` pirates against `distribution`.
///
/// The threshold puts a Gaussian innocent total (mean 0, variance `l`) above
/// `Z` with probability about `eps1 / n`; this is a heuristic, not a bound.
pub fn choose_parameters(
    colluders: usize,
    users: usize,
    epsilon1: f64,
    distribution: &BiasDistribution,
) -> Result<SchemeParameters> {
    if colluders == 0 {
        return Err(Error::InvalidParameter(
            "colluders must be at least 1".into(),
        ));
    }
    let report = minimum_coalition_mean(distribution, colluders)?;
    SchemeParameters::from_dl(colluders, users, epsilon1, report.dl)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::gauss_legendre_distribution;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn score_cases() {
        assert_eq!(score(true, true, 0.5).unwrap(), 1.0);
        assert_eq!(score(false, true, 0.5).unwrap(), -1.0);
        assert_eq!(score(true, true, 0.2).unwrap(), 2.0);
        assert_eq!(score(true, false, 0.2).unwrap(), -2.0);
        assert_eq!(score(false, true, 0.2).unwrap(), -0.5);
        assert_eq!(score(false, false, 0.2).unwrap(), 0.5);
        assert!(matches!(score(true, true, 0.0), Err(Error::InvalidBias(_))));
        assert!(score(true, true, 1.0).is_err());
    }

    #[test]
    fn innocent_moments_are_exact() {
        for i in 1..1000 {
            let p = i as f64 / 1000.0;
            for y in [false, true] {
                let s1 = score(true, y, p).unwrap();
                let s0 = score(false, y, p).unwrap();
                let mean = p * s1 + (1.0 - p) * s0;
                let var = p * s1 * s1 + (1.0 - p) * s0 * s0 - mean * mean;
                assert!(mean.abs() <= 1e-12, "p={p}");
                assert!((var - 1.0).abs() <= 1e-12, "p={p}");
            }
        }
    }

    #[test]
    fn bit_packing_roundtrip() {
        let mut code = CodeMatrix::zeros(3, vec![0.5; 130]).unwrap();
        code.set(1, 0, true);
        code.set(1, 63, true);
        code.set(1, 64, true);
        code.set(2, 129, true);
        assert!(code.get(1, 0) && code.get(1, 63) && code.get(1, 64) && code.get(2, 129));
        assert!(!code.get(0, 0) && !code.get(1, 1) && !code.get(2, 128));
        code.set(1, 63, false);
        assert!(!code.get(1, 63));
    }

    #[test]
    fn generation_is_seeded() {
        let biases = vec![0.3; 200];
        let a = generate_code(20, &biases, &mut ChaCha8Rng::seed_from_u64(5)).unwrap();
        let b = generate_code(20, &biases, &mut ChaCha8Rng::seed_from_u64(5)).unwrap();
        let c = generate_code(20, &biases, &mut ChaCha8Rng::seed_from_u64(6)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert!(generate_code(2, &[0.5, 1.0], &mut ChaCha8Rng::seed_from_u64(0)).is_err());
        assert!(generate_code(0, &[0.5], &mut ChaCha8Rng::seed_from_u64(0)).is_err());
    }

    #[test]
    fn column_means_follow_biases() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let (n, l) = (1000, 1000);
        let code = generate_code(n, &vec![0.5; l], &mut rng).unwrap();
        let means: Vec<f64> = (0..l)
            .map(|i| (0..n).filter(|&j| code.get(j, i)).count() as f64 / n as f64)
            .collect();
        // 0.05 is about 3.2 sd per column; a handful of excursions is expected
        let outside = means.iter().filter(|m| (*m - 0.5).abs() > 0.05).count();
        assert!(outside <= 10, "{outside} columns outside 0.5 +- 0.05");
        let grand = means.iter().sum::<f64>() / l as f64;
        assert!((grand - 0.5).abs() <= 3.0 * (0.25 / (n * l) as f64).sqrt());

        let gl = gauss_legendre_distribution(2).unwrap();
        let biases: Vec<f64> = (0..40).map(|i| gl.points()[i % 2]).collect();
        let code = generate_code(5000, &biases, &mut rng).unwrap();
        for (i, &p) in biases.iter().enumerate() {
            let mean = (0..5000).filter(|&j| code.get(j, i)).count() as f64 / 5000.0;
            let sd = (p * (1.0 - p) / 5000.0).sqrt();
            assert!((mean - p).abs() <= 3.0 * sd + 1e-12, "segment {i}");
        }
    }

    #[test]
    fn single_segment_accusation() {
        let mut code = CodeMatrix::zeros(2, vec![0.5]).unwrap();
        code.set(0, 0, true);
        let res = accuse(&code, &[true], 0.0).unwrap();
        assert_eq!(res.scores, vec![1.0, -1.0]);
        assert_eq!(res.accused, vec![0]);
        assert!(accuse(&code, &[true], f64::INFINITY)
            .unwrap()
            .accused
            .is_empty());
        assert!(matches!(
            accuse(&code, &[true, false], 0.0),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn raising_threshold_never_adds_accused() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let code = generate_code(50, &vec![0.4; 300], &mut rng).unwrap();
        let y: Vec<bool> = (0..300).map(|_| rng.gen()).collect();
        let mut prev = accuse(&code, &y, -50.0).unwrap().accused;
        for z in (-49..50).map(f64::from) {
            let cur = accuse(&code, &y, z).unwrap().accused;
            assert!(cur.iter().all(|u| prev.contains(u)));
            prev = cur;
        }
    }

    #[test]
    fn innocent_total_is_centered() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let l = 10_000;
        let arcsine: BiasDistribution = crate::distributions::ContinuousArcsine::new(0.01)
            .unwrap()
            .into();
        let biases = arcsine.sample(&mut rng, l);
        let code = generate_code(1, &biases, &mut rng).unwrap();
        let y: Vec<bool> = (0..l).map(|_| rng.gen()).collect();
        let total = accuse(&code, &y, 0.0).unwrap().scores[0];
        assert!(total.abs() <= 3.0 * (l as f64).sqrt());
    }

    #[test]
    fn text_format_roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let biases: Vec<f64> = (0..70).map(|i| 0.1 + 0.8 * i as f64 / 70.0).collect();
        let code = generate_code(4, &biases, &mut rng).unwrap();
        let mut buf = Vec::new();
        code.write_text(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("4 70\n"));
        assert_eq!(CodeMatrix::read_text(&buf[..]).unwrap(), code);
    }

    #[test]
    fn text_format_rejects_garbage() {
        assert!(CodeMatrix::read_text("2 2\n0.5 0.5\n01\n".as_bytes()).is_err());
        assert!(CodeMatrix::read_text("1 2\n0.5 0.5\n0x\n".as_bytes()).is_err());
        assert!(CodeMatrix::read_text("1 2\n0.5 1.5\n01\n".as_bytes()).is_err());
        assert!(CodeMatrix::read_text("1 2\n0.5 0.5\n011\n".as_bytes()).is_err());
        assert!(CodeMatrix::read_text("1 2\n0.5 0.5\n01\n10\n".as_bytes()).is_err());
        assert!(CodeMatrix::read_text("1\n".as_bytes()).is_err());
    }

    #[test]
    fn accusation_csv() {
        let mut code = CodeMatrix::zeros(2, vec![0.2]).unwrap();
        code.set(1, 0, true);
        let res = accuse(&code, &[true], 1.0).unwrap();
        let mut buf = Vec::new();
        res.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "user,score,accused");
        assert!(lines[1].starts_with("0,-5.") && lines[1].ends_with(",false"));
        assert!(lines[2].starts_with("1,2.") && lines[2].ends_with(",true"));
    }

    #[test]
    fn parameter_formulas() {
        let p = SchemeParameters::from_dl(2, 100, 0.01, 2.0).unwrap();
        assert_eq!(p.code_length, 74);
        let ln = (1e4f64).ln();
        assert!((p.threshold - (2.0 * 74.0 * ln).sqrt()).abs() < 1e-12);
        assert!(p.code_length as f64 >= p.dl_constant * 4.0 * ln - 1.0);

        let a = SchemeParameters::from_dl(3, 1000, 1e-3, 4.0).unwrap();
        let ratio = a.threshold / (a.code_length as f64).sqrt();
        let b = SchemeParameters::from_dl(3, 1000, 1e-3, 8.0).unwrap();
        assert!((b.threshold / (b.code_length as f64).sqrt() - ratio).abs() < 1e-12);

        assert!(SchemeParameters::from_dl(0, 100, 0.01, 2.0).is_err());
        assert!(SchemeParameters::from_dl(2, 1, 0.01, 2.0).is_err());
        assert!(SchemeParameters::from_dl(2, 100, 1.0, 2.0).is_err());
    }

    #[test]
    fn parameters_for_single_point_distribution() {
        let d: BiasDistribution = gauss_legendre_distribution(1).unwrap().into();
        let p = choose_parameters(2, 100, 0.01, &d).unwrap();
        assert!((p.dl_constant - 2.0).abs() < 1e-12);
        assert_eq!(p.code_length, 74);
    }
}
