//! Acceptance criteria, one line per criterion. Runs without the libtest
//! harness so the lines are always printed; exits non-zero if any fails.

use std::sync::Arc;
use std::time::Instant;

use lamperti_core::discrete_ar::{ar1_residual, extract_discrete_noise, simulate_arma, ArmaSpec};
use lamperti_core::generators::{
    fou_first_kind, fou_second_kind, ornstein_uhlenbeck, pareto_counterexample, BmLampertiNoise, Brownian,
    Fbm, FbmSpec, ParetoSpec, StationaryLampertiFbm,
};
use lamperti_core::lamperti::{lamperti_forward, lamperti_inverse};
use lamperti_core::langevin::{extract_noise, solve_forward, stationary_solution, verify_gh_noise};
use lamperti_core::path_core::{
    exp_weighted_integral_with, Ensemble, HurstParam, PathGenerator, Quadrature, SamplePath, StreamSeed,
    TimeGrid,
};
use lamperti_core::stat_tests::{
    covariance, empirical_autocovariance, ks_two_sample, log_moment_check, log_moment_check_log_abs,
    sample_variance, test_gh_membership, test_increment_stationarity, test_self_similarity,
    test_stationarity,
};

const SEED: u64 = 20_240_611;

struct Outcome {
    pass: bool,
    lines: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Self {
            pass: true,
            lines: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, what: String) {
        self.pass &= ok;
        self.lines.push(format!("    [{}] {what}", if ok { "ok" } else { "FAIL" }));
    }
}

fn uniform(start: f64, stop: f64, step: f64) -> Arc<TimeGrid> {
    Arc::new(TimeGrid::uniform(start, stop, step).unwrap())
}

fn sup_rel(a: &[f64], b: &[f64]) -> f64 {
    let scale = b.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max) / scale
}

fn within_pct(value: f64, target: f64, pct: f64) -> bool {
    (value - target).abs() <= pct * target.abs()
}

fn one(gen: &dyn PathGenerator, stream: u64) -> SamplePath {
    gen.sample(StreamSeed::new(SEED, stream)).unwrap()
}

fn criterion_1() -> Outcome {
    let mut out = Outcome::new();
    let grid = uniform(0.0, 10.0, 1e-3);
    let cases: Vec<(&str, SamplePath, f64)> = vec![
        ("OU theta=1", one(&ornstein_uhlenbeck(1.0, grid.clone()).unwrap(), 0), 1.0),
        (
            "fOU first kind H=0.75 theta=1",
            one(&lamperti_core::generators::fou_first_kind_generator(0.75, 1.0, grid.clone()).unwrap(), 1),
            1.0,
        ),
        (
            "inverse Lamperti of fBm H=0.75",
            one(&StationaryLampertiFbm::new(0.75, grid.clone()).unwrap(), 2),
            0.75,
        ),
    ];
    for (name, u, natural) in &cases {
        for h in [*natural, 0.25, 1.0, 2.0] {
            let g = extract_noise(u, h).unwrap();
            let back = solve_forward(&g, h, u.values()[0]).unwrap().path;
            let err = sup_rel(back.values(), u.values());
            out.check(err <= 1e-10, format!("{name}, rate {h}: sup relative error {err:.2e} <= 1e-10"));
        }
    }
    out
}

fn criterion_2() -> Outcome {
    let mut out = Outcome::new();
    let n = 100_000;
    let h = HurstParam::new(0.7).unwrap();
    let log_grid = Arc::new(TimeGrid::uniform_n(-5.0, 10.0 / (n - 1) as f64, n).unwrap());
    let u = one(&StationaryLampertiFbm::new(0.7, log_grid).unwrap(), 0);
    let back = lamperti_inverse(&lamperti_forward(&u, h).unwrap(), h).unwrap();
    let err = pointwise_rel(back.values(), u.values());
    let terr = sup_abs(back.times(), u.times());
    out.check(
        err <= 1e-12 && terr <= 1e-12,
        format!("inverse after forward, {n} points: relative error {err:.2e}, time error {terr:.2e}"),
    );
    let geo = Arc::new(TimeGrid::geometric_n(1e-2, (1e4f64).powf(1.0 / (n - 1) as f64), n).unwrap());
    let x = one(&Fbm::new(FbmSpec::new(0.7, geo).unwrap()).unwrap(), 1);
    let back = lamperti_forward(&lamperti_inverse(&x, h).unwrap(), h).unwrap();
    let err = pointwise_rel(back.values(), x.values());
    let terr = pointwise_rel(back.times(), x.times());
    out.check(
        err <= 1e-12 && terr <= 1e-12,
        format!("forward after inverse, {n} points: relative error {err:.2e}, time error {terr:.2e}"),
    );
    out
}

fn pointwise_rel(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| if *y == 0.0 { x.abs() } else { ((x - y) / y).abs() })
        .fold(0.0, f64::max)
}

fn sup_abs(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn criterion_3() -> Outcome {
    let mut out = Outcome::new();
    let spec = ArmaSpec::new(0.2, vec![0.6], vec![0.3], 1.0).unwrap();
    let u = simulate_arma(&spec, 1_000_000, 200, StreamSeed::new(SEED, 0)).unwrap();
    for h in [0.25, 1.0, 2.0] {
        let dg = extract_discrete_noise(&u, h).unwrap();
        let r = ar1_residual(&u, &dg, h).unwrap();
        out.check(r == 0.0, format!("H = {h}: max residual {r:e} on 10^6 points"));
    }
    out
}

fn criterion_4() -> Outcome {
    let mut out = Outcome::new();
    let n = 2000;
    for theta in [0.5, 1.0] {
        let gen = ornstein_uhlenbeck(theta, uniform(0.0, 2.0, 0.01)).unwrap();
        let ens = Ensemble::generate(&gen, SEED, n).unwrap();
        let v = sample_variance(&ens.column(0.0).unwrap());
        let target = 1.0 / (2.0 * theta);
        out.check(within_pct(v, target, 0.05), format!("theta = {theta}: variance {v:.4} vs {target:.4} (5%)"));
        let ac = empirical_autocovariance(&ens, 0.0, &[1.0]).unwrap()[0];
        let target = (-theta).exp() / (2.0 * theta);
        out.check(
            (ac.value - target).abs() <= 3.0 * ac.std_error,
            format!(
                "theta = {theta}: lag-1 autocovariance {:.4} vs {target:.4} (3 SE = {:.4})",
                ac.value,
                3.0 * ac.std_error
            ),
        );
    }
    out
}

fn criterion_5() -> Outcome {
    let mut out = Outcome::new();
    let n = 2000;
    let grid = uniform(0.0, 4.0, 0.01);
    for (k, h) in [0.25, 0.5, 0.75].into_iter().enumerate() {
        let gen = Fbm::new(FbmSpec::new(h, grid.clone()).unwrap()).unwrap();
        let ens = Ensemble::generate(&gen, SEED + k as u64, n).unwrap();
        for t in [1.0f64, 2.0] {
            let v = sample_variance(&ens.column(t).unwrap());
            let target = t.powf(2.0 * h);
            out.check(within_pct(v, target, 0.05), format!("H = {h}: Var(B_{t}) {v:.4} vs {target:.4} (5%)"));
        }
        let r = test_self_similarity(&ens, h, 4.0, &[0.5, 1.0]).unwrap();
        out.check(r.pass, format!("H = {h}: self-similarity KS at a = 4: {}", r.summary()));
        if h == 0.5 {
            let (c, _) = covariance(&ens.column(1.0).unwrap(), &ens.column(2.0).unwrap());
            out.check(within_pct(c, 1.0, 0.05), format!("H = 0.5: Cov(B_1, B_2) {c:.4} vs min(1, 2) = 1 (5%)"));
            let bm = Ensemble::generate(&Brownian::new(grid.clone()), SEED + 100, n).unwrap();
            let inc = |e: &Ensemble| -> Vec<f64> {
                let a = e.column(1.0).unwrap();
                let b = e.column(1.5).unwrap();
                a.iter().zip(&b).map(|(x, y)| y - x).collect()
            };
            let r = ks_two_sample(&inc(&ens), &inc(&bm)).unwrap();
            out.check(r.pass, format!("H = 0.5: increments over [1, 1.5] vs Brownian motion: {}", r.summary()));
        }
    }
    out
}

fn criterion_6() -> Outcome {
    let mut out = Outcome::new();
    let gen = BmLampertiNoise::new(1.0, uniform(0.0, 2.0, 0.01)).unwrap();
    let ens = Ensemble::generate(&gen, SEED, 2000).unwrap();
    let d: Vec<f64> = ens.column(1.0).unwrap().iter().zip(ens.column(0.0).unwrap()).map(|(a, b)| a - b).collect();
    let v = sample_variance(&d);
    out.check(within_pct(v, 1.0, 0.05), format!("Var(G_1 - G_0) {v:.4} vs 1 (5%)"));
    out
}

fn criterion_7() -> Outcome {
    let mut out = Outcome::new();
    let runs = 100u64;
    for h in [0.5, 1.0, 2.0] {
        let mut exceed = 0;
        let mut fails = 0;
        for r in 0..runs {
            let noise = pareto_counterexample(ParetoSpec::new(0.5, 1 << 14).unwrap(), StreamSeed::new(SEED, r)).unwrap();
            exceed += noise.first_exceedance(h, 1e6).is_some() as usize;
            fails += !test_gh_membership(&noise, h, 1e-6).unwrap().pass as usize;
        }
        out.check(exceed == runs as usize, format!("H = {h}: partial sums exceed 1e6 in {exceed}/{runs} runs"));
        out.check(fails == runs as usize, format!("H = {h}: membership test fails in {fails}/{runs} Pareto runs"));
        let grid = uniform(-40.0 / h, 0.0, 0.01);
        let bm = Brownian::new(grid);
        let passes = (0..runs)
            .filter(|&r| verify_gh_noise(&one(&bm, 1000 + r), h, 1e-6).unwrap().pass)
            .count();
        out.check(passes >= 95, format!("H = {h}: Brownian noise passes in {passes}/{runs} runs (>= 95)"));
    }
    out
}

fn criterion_8() -> Outcome {
    let mut out = Outcome::new();
    let n = 2000;
    let h = 1.0;
    let grid = uniform(-40.0, 2.0, 0.01);
    let times = [0.25, 0.5, 0.75, 1.0];
    let noises: Vec<(&str, Ensemble)> = vec![
        ("Gaussian", Ensemble::generate(&Brownian::new(grid.clone()), SEED, n).unwrap()),
        (
            "drift",
            Ensemble::new(
                (0..n).map(|_| SamplePath::from_fn(grid.clone(), |t| t).unwrap()).collect(),
                SEED,
                (0..n as u64).collect(),
            )
            .unwrap(),
        ),
    ];
    for (name, ens) in &noises {
        let cols: Vec<Vec<f64>> = times.iter().map(|&t| ens.column(t).unwrap()).collect();
        let lm = log_moment_check(&cols, 0.5).unwrap();
        out.check(lm.pass, format!("{name}: log-moment check: {}", lm.summary()));
        let sols: Vec<_> = ens.paths().iter().map(|g| stationary_solution(g, h, 1e-10).unwrap()).collect();
        let converged = sols.iter().filter(|s| s.converged()).count();
        out.check(converged == n, format!("{name}: improper integral converged for {converged}/{n} paths"));
        let u = Ensemble::new(
            sols.into_iter().map(|s| s.solution.path).collect(),
            SEED,
            (0..n as u64).collect(),
        )
        .unwrap();
        let r = test_stationarity(&u, 0.0, &[0.0, 0.5, 1.0], 1.0).unwrap();
        out.check(r.pass, format!("{name}: stationary solution: {}", r.summary()));
    }
    let logs: Vec<f64> = (0..n as u64)
        .map(|r| pareto_counterexample(ParetoSpec::new(0.5, 2).unwrap(), StreamSeed::new(SEED, r)).unwrap().log_increments()[1])
        .collect();
    let lm = log_moment_check_log_abs(&[logs], 0.5).unwrap();
    out.check(!lm.pass, format!("Pareto G_1 = e^xi: log-moment check fails: {}", lm.summary()));
    out
}

fn lag1_correlation(ens: &Ensemble) -> (f64, f64) {
    let a = ens.column(0.0).unwrap();
    let b = ens.column(1.0).unwrap();
    let (c, _) = covariance(&a, &b);
    let rho = c / (sample_variance(&a) * sample_variance(&b)).sqrt();
    (rho, (1.0 - rho * rho) / (a.len() as f64).sqrt())
}

fn criterion_9() -> Outcome {
    let mut out = Outcome::new();
    let n = 2000;
    let theta = 0.1;
    let grid = uniform(0.0, 1.0, 0.01);
    let first = fou_first_kind(0.75, theta, grid.clone(), SEED, n).unwrap();
    let second = fou_second_kind(0.75, theta, grid.clone(), SEED + 1, n).unwrap();
    let (r1, s1) = lag1_correlation(&first);
    let (r2, s2) = lag1_correlation(&second);
    let bar = 3.0 * (s1 * s1 + s2 * s2).sqrt();
    out.check(
        (r1 - r2).abs() > bar,
        format!("H = 0.75: lag-1 correlations first {r1:.4}, second {r2:.4}, |diff| {:.4} > {bar:.4}", (r1 - r2).abs()),
    );
    let half = fou_first_kind(0.5, theta, grid, SEED + 2, n).unwrap();
    let (r, s) = lag1_correlation(&half);
    let target = (-theta).exp();
    out.check(
        (r - target).abs() <= 3.0 * s,
        format!("H = 0.5: first-kind lag-1 correlation {r:.4} vs OU {target:.4} (3 SE = {:.4})", 3.0 * s),
    );
    out
}

fn criterion_10() -> Outcome {
    let mut out = Outcome::new();
    type Case = (&'static str, fn(f64) -> f64, f64, f64);
    // (name, X, H, exact ∫_0^2 e^{Hu} dX_u)
    let cases: [Case; 2] = [
        ("X = sin 3u, H = 1.5", |u| (3.0 * u).sin(), 1.5, {
            // ∫ e^{au} 3cos(3u) du = 3 e^{au}(a cos 3u + 3 sin 3u)/(a² + 9)
            let a: f64 = 1.5;
            let f = |u: f64| 3.0 * (a * u).exp() * (a * (3.0 * u).cos() + 3.0 * (3.0 * u).sin()) / (a * a + 9.0);
            f(2.0) - f(0.0)
        }),
        ("X = u^2, H = -0.7", |u| u * u, -0.7, {
            // ∫ 2u e^{au} du = 2 e^{au}(u/a − 1/a²)
            let a: f64 = -0.7;
            let f = |u: f64| 2.0 * (a * u).exp() * (u / a - 1.0 / (a * a));
            f(2.0) - f(0.0)
        }),
    ];
    for (name, x, h, exact) in cases {
        for q in [Quadrature::Trapezoid, Quadrature::Linear] {
            let errs: Vec<f64> = [0.1, 0.05, 0.025, 0.0125]
                .iter()
                .map(|&dt| {
                    let p = SamplePath::from_fn(uniform(0.0, 2.0, dt), x).unwrap();
                    (exp_weighted_integral_with(&p, h, 0.0, 2.0, q).unwrap() - exact).abs()
                })
                .collect();
            let ratios: Vec<f64> = errs.windows(2).map(|w| w[0] / w[1]).collect();
            let ok = ratios.iter().all(|r| (3.5..=4.5).contains(r));
            out.check(ok, format!("{name}, {q:?}: error ratios {ratios:.3?}"));
        }
    }
    out
}

fn criterion_11() -> Outcome {
    let mut out = Outcome::new();
    let reps = 100u64;
    let normals = |stream: u64| -> Vec<f64> {
        use rand::Rng;
        let mut rng = StreamSeed::new(SEED, stream).rng();
        (0..1000).map(|_| rng.sample::<f64, _>(rand_distr::StandardNormal)).collect()
    };
    let passes = (0..reps).filter(|&r| ks_two_sample(&normals(2 * r), &normals(2 * r + 1)).unwrap().pass).count();
    out.check(passes >= 95, format!("ks_two_sample on N(0,1) pairs: {passes}/{reps}"));

    let ou = ornstein_uhlenbeck(1.0, uniform(0.0, 3.0, 0.05)).unwrap();
    let fbm = Fbm::new(FbmSpec::new(0.3, uniform(0.0, 4.0, 0.05)).unwrap()).unwrap();
    let fbm7 = Fbm::new(FbmSpec::new(0.7, uniform(0.0, 4.0, 0.05)).unwrap()).unwrap();
    let mut stat = 0;
    let mut inc = 0;
    let mut ss = 0;
    let mut lm = 0;
    for r in 0..reps {
        let seed = SEED + 1 + r;
        let e = Ensemble::generate(&ou, seed, 1000).unwrap();
        stat += test_stationarity(&e, 0.0, &[0.0, 0.5, 1.0], 1.5).unwrap().pass as usize;
        let cols: Vec<Vec<f64>> = [0.5, 1.0].iter().map(|&t| e.column(t).unwrap()).collect();
        lm += log_moment_check(&cols, 0.5).unwrap().pass as usize;
        let e = Ensemble::generate(&fbm, seed, 1000).unwrap();
        inc += test_increment_stationarity(&e, 0.0, &[0.5, 1.0], 2.0).unwrap().pass as usize;
        let e = Ensemble::generate(&fbm7, seed, 1000).unwrap();
        ss += test_self_similarity(&e, 0.7, 4.0, &[0.5, 1.0]).unwrap().pass as usize;
    }
    out.check(stat >= 95, format!("test_stationarity on OU ensembles: {stat}/{reps}"));
    out.check(inc >= 95, format!("test_increment_stationarity on fBm ensembles: {inc}/{reps}"));
    out.check(ss >= 95, format!("test_self_similarity on fBm ensembles: {ss}/{reps}"));
    out.check(lm >= 95, format!("log_moment_check on OU marginals: {lm}/{reps}"));
    out
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("round trip extract then solve", criterion_1),
        ("Lamperti round trip", criterion_2),
        ("discrete AR(1) identity", criterion_3),
        ("OU stationary law", criterion_4),
        ("fBm validity", criterion_5),
        ("Lamperti-of-BM noise increments", criterion_6),
        ("counterexample divergence", criterion_7),
        ("log-moment consistency", criterion_8),
        ("fOU kinds differ", criterion_9),
        ("integral convergence order", criterion_10),
        ("KS calibration", criterion_11),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        failed += !outcome.pass as usize;
        println!(
            "criterion {:>2} {}: {name} ({:.1}s)",
            k + 1,
            if outcome.pass { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64()
        );
        for line in &outcome.lines {
            println!("{line}");
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
