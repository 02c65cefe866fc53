//! Library results checked against independent computations done here.

use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tardos::analysis::{
    coalition_mean, discrete_arcsine_equivalent_cutoff, minimum_coalition_mean,
};
use tardos::attacks::{profile_of, Strategy, StrategyProfile};
use tardos::distributions::{
    chebyshev_gauss_distribution, discrete_arcsine_distribution, gauss_legendre_distribution,
    BiasDistribution, ContinuousArcsine, DiscreteFamily,
};
use tardos::legendre::legendre_roots;
use tardos::scheme::score;

fn legendre_value(c: usize, x: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, x);
    if c == 0 {
        return prev;
    }
    for k in 1..c {
        let next = ((2 * k + 1) as f64 * x * cur - k as f64 * prev) / (k + 1) as f64;
        prev = cur;
        cur = next;
    }
    cur
}

/// Roots by scanning a fine grid for sign changes and bisecting to full precision.
fn bisection_roots(c: usize) -> Vec<f64> {
    let grid = 40_000;
    let mut roots = Vec::new();
    let mut a = -1.0;
    let mut fa = legendre_value(c, a);
    for i in 1..=grid {
        let b = -1.0 + 2.0 * i as f64 / grid as f64;
        let fb = legendre_value(c, b);
        if fb == 0.0 {
            roots.push(b);
        } else if fa != 0.0 && fa.signum() != fb.signum() {
            let (mut lo, mut hi, mut flo) = (a, b, fa);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                let fm = legendre_value(c, mid);
                if fm.signum() == flo.signum() {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            roots.push(0.5 * (lo + hi));
        }
        a = b;
        fa = fb;
    }
    roots
}

#[test]
fn roots_match_bisection_oracle() {
    for c in 1..=30 {
        let oracle = bisection_roots(c);
        let computed = legendre_roots(c).unwrap();
        assert_eq!(
            oracle.len(),
            c,
            "oracle found {} roots for c={c}",
            oracle.len()
        );
        for (x, y) in computed.roots().iter().zip(&oracle) {
            assert!((x - y).abs() <= 1e-12, "c={c}: {x} vs {y}");
        }
    }
}

#[test]
fn degree_five_roots_match_tables() {
    let r = legendre_roots(5).unwrap();
    let table = [
        -0.906_179_845_9,
        -0.538_469_310_1,
        0.0,
        0.538_469_310_1,
        0.906_179_845_9,
    ];
    for (x, t) in r.roots().iter().zip(table) {
        assert!((x - t).abs() < 1e-10);
    }
}

#[test]
fn sine_families_match_closed_forms() {
    for n in 1..=60 {
        let darc = discrete_arcsine_distribution(n).unwrap();
        let cheb = chebyshev_gauss_distribution(n).unwrap();
        for k in 1..=n {
            let a = (4 * k - 1) as f64 * PI / (8 * n + 4) as f64;
            let b = (4 * k - 2) as f64 * PI / (8 * n) as f64;
            assert!((darc.points()[k - 1] - (1.0 - (2.0 * a).cos()) / 2.0).abs() <= 1e-14);
            assert!((cheb.points()[k - 1] - (1.0 - (2.0 * b).cos()) / 2.0).abs() <= 1e-14);
        }
    }
}

/// Expected coalition score by enumerating every pirate symbol pattern and
/// summing per-pirate scores for both possible outputs.
fn brute_force_mu(points: &[f64], probs: &[f64], theta: &[f64]) -> f64 {
    let c = theta.len() - 1;
    let mut total = 0.0;
    for (&p, &w) in points.iter().zip(probs) {
        for pattern in 0u32..(1 << c) {
            let sigma = pattern.count_ones() as usize;
            let prob = p.powi(sigma as i32) * (1.0 - p).powi((c - sigma) as i32);
            let (mut if_one, mut if_zero) = (0.0, 0.0);
            for j in 0..c {
                let x = pattern >> j & 1 == 1;
                if_one += score(x, true, p).unwrap();
                if_zero += score(x, false, p).unwrap();
            }
            total += w * prob * (theta[sigma] * if_one + (1.0 - theta[sigma]) * if_zero);
        }
    }
    total
}

#[test]
fn coalition_mean_matches_enumeration() {
    for family in DiscreteFamily::ALL {
        for c in 2usize..=9 {
            let d = family.build(c.div_ceil(2)).unwrap();
            let dist: BiasDistribution = d.clone().into();
            for s in Strategy::ALL {
                let profile = profile_of(s, c).unwrap();
                let got = coalition_mean(&dist, c, &profile).unwrap().mu;
                let want = brute_force_mu(d.points(), d.probabilities(), profile.theta());
                assert!(
                    (got - want).abs() <= 1e-10,
                    "{family} c={c} {s}: {got} vs {want}"
                );
            }
        }
    }
}

#[test]
fn minimizer_matches_exhaustive_search() {
    for family in DiscreteFamily::ALL {
        for c in 2usize..=7 {
            let d = family.build(c.div_ceil(2)).unwrap();
            let dist: BiasDistribution = d.clone().into();
            let mut best = f64::INFINITY;
            for mask in 0u32..(1 << (c - 1)) {
                let mut theta = vec![0.0; c + 1];
                theta[c] = 1.0;
                for (s, t) in theta.iter_mut().enumerate().take(c).skip(1) {
                    *t = f64::from(mask >> (s - 1) & 1);
                }
                best = best.min(brute_force_mu(d.points(), d.probabilities(), &theta));
            }
            let got = minimum_coalition_mean(&dist, c).unwrap().mu;
            assert!(
                (got - best).abs() <= 1e-10,
                "{family} c={c}: {got} vs {best}"
            );
        }
    }
}

/// Composite Simpson rule in the angle variable r, where p = sin^2 r.
fn simpson_mu(cutoff: f64, theta: &[f64]) -> f64 {
    let c = theta.len() - 1;
    let lo = cutoff.sqrt().asin();
    let hi = PI / 2.0 - lo;
    let panels = 20_000;
    let h = (hi - lo) / panels as f64;
    let integrand = |r: f64| {
        let p = r.sin().powi(2);
        let q = 1.0 - p;
        let mut s = 0.0;
        let mut binom = 1.0;
        for (sigma, &t) in theta.iter().enumerate() {
            if sigma > 0 {
                binom *= (c - sigma + 1) as f64 / sigma as f64;
            }
            let pmf = binom * p.powi(sigma as i32) * q.powi((c - sigma) as i32);
            let a = sigma as f64 * (q / p).sqrt() - (c - sigma) as f64 * (p / q).sqrt();
            s += pmf * (2.0 * t - 1.0) * a;
        }
        s / (hi - lo)
    };
    let mut acc = integrand(lo) + integrand(hi);
    for i in 1..panels {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * integrand(lo + i as f64 * h);
    }
    acc * h / 3.0
}

#[test]
fn continuous_mean_matches_simpson() {
    for cutoff in [0.0005, 0.003, 0.02] {
        let dist: BiasDistribution = ContinuousArcsine::new(cutoff).unwrap().into();
        for c in [2, 3, 5, 8] {
            for s in Strategy::ALL {
                let profile = profile_of(s, c).unwrap();
                let got = coalition_mean(&dist, c, &profile).unwrap().mu;
                let want = simpson_mu(cutoff, profile.theta());
                assert!(
                    (got - want).abs() <= 1e-9,
                    "cutoff={cutoff} c={c} {s}: {got} vs {want}"
                );
            }
        }
    }
}

#[test]
fn discrete_arcsine_approaches_continuous_cutoff() {
    let n = 400;
    let discrete: BiasDistribution = discrete_arcsine_distribution(n).unwrap().into();
    let continuous: BiasDistribution =
        ContinuousArcsine::new(discrete_arcsine_equivalent_cutoff(n))
            .unwrap()
            .into();
    for c in [3, 6] {
        for s in Strategy::ALL {
            let profile = profile_of(s, c).unwrap();
            let a = coalition_mean(&discrete, c, &profile).unwrap().mu;
            let b = coalition_mean(&continuous, c, &profile).unwrap().mu;
            assert!((a - b).abs() <= 1e-3, "c={c} {s}: {a} vs {b}");
        }
    }
}

fn ks_statistic(dist: &BiasDistribution, samples: &mut [f64]) -> f64 {
    samples.sort_by(f64::total_cmp);
    let n = samples.len() as f64;
    let mut worst: f64 = 0.0;
    let mut i = 0;
    while i < samples.len() {
        let x = samples[i];
        let below = i as f64 / n;
        while i < samples.len() && samples[i] == x {
            i += 1;
        }
        let at = i as f64 / n;
        let f = dist.cdf(x);
        let left = dist.cdf(x - 1e-15 * x.max(1e-300));
        worst = worst.max((at - f).abs()).max((below - left).abs());
    }
    worst
}

#[test]
fn samplers_pass_kolmogorov_smirnov() {
    let n = 100_000;
    let bound = ((2.0f64 / 1e-3).ln() / (2.0 * n as f64)).sqrt();
    let dists: Vec<BiasDistribution> = vec![
        gauss_legendre_distribution(5).unwrap().into(),
        discrete_arcsine_distribution(8).unwrap().into(),
        ContinuousArcsine::new(0.003).unwrap().into(),
        ContinuousArcsine::new(0.0).unwrap().into(),
    ];
    for (i, dist) in dists.iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(1000 + i as u64);
        let mut xs = dist.sample(&mut rng, n);
        let d = ks_statistic(dist, &mut xs);
        assert!(d <= bound, "{}: KS {d} > {bound}", dist.family_name());
    }
}

#[test]
fn profile_sampling_matches_theta() {
    let profile = StrategyProfile::new(vec![0.0, 0.25, 0.6, 1.0]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let trials = 40_000;
    for sigma in 1..3 {
        let symbols: Vec<bool> = (0..3).map(|j| j < sigma).collect();
        let ones = (0..trials)
            .filter(|_| profile.respond(&symbols, &mut rng).unwrap())
            .count();
        let rate = ones as f64 / trials as f64;
        let theta = profile.theta()[sigma];
        let se = (theta * (1.0 - theta) / trials as f64).sqrt();
        assert!(
            (rate - theta).abs() <= 4.0 * se,
            "sigma={sigma}: {rate} vs {theta}"
        );
    }
}

#[test]
fn executed_attacks_match_their_profiles() {
    let c = 5;
    let trials = 10_000;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for s in Strategy::ALL {
        let profile = profile_of(s, c).unwrap();
        for sigma in 0..=c {
            let symbols: Vec<bool> = (0..c).map(|j| j < sigma).collect();
            let ones = (0..trials)
                .filter(|_| tardos::attacks::attack_column(s, &symbols, &mut rng).unwrap())
                .count();
            let rate = ones as f64 / trials as f64;
            let theta = profile.theta()[sigma];
            let se = (theta * (1.0 - theta) / trials as f64).sqrt();
            assert!(
                (rate - theta).abs() <= 3.0 * se,
                "{s} sigma={sigma}: {rate} vs {theta}"
            );
        }
    }
}
