//! Acceptance criteria, one PASS/FAIL line each. Exits nonzero if any fail.

mod common;

use std::time::{Duration, Instant};

use tropica::cli::sweep_points;
use tropica::dynamics::{linearity_check, linearity_check_exact};
use tropica::minplus::MinPlusError;
use tropica::oracle::{lambda_bound_check, scalar_roots, star_fixed_point};
use tropica::spectral::{
    assert_unique_positive, eigen_set, exact_eigenpair, extend_full, lambda_asymptotic,
    lambda_nonneg, reduced_eigenvector, residual_ev, residual_s, residual_ss, residual_sz,
    z_transform, FullEigenpair, ReducedEigenpair, Regime, Region,
};
use tropica::traffic::{allocate, DerivedParams, TrafficConfig};

use common::{
    config_in_some_regime, nonpositive_circuit_matrix, positive_circuit_matrix, redistribute, rng,
};

#[derive(Default)]
struct Report {
    failed: Vec<String>,
}

impl Report {
    fn line(&mut self, id: &str, ok: bool, detail: impl AsRef<str>) {
        println!(
            "{} criterion {id}: {}",
            if ok { "PASS" } else { "FAIL" },
            detail.as_ref()
        );
        if !ok {
            self.failed.push(id.to_string());
        }
    }
}

fn secs(d: Duration) -> String {
    format!("{:.3}s", d.as_secs_f64())
}

fn params(n: usize, m: usize, d: f64) -> DerivedParams {
    allocate(n, m, d).unwrap().derive().unwrap()
}

fn lambdas(p: &DerivedParams) -> Vec<f64> {
    eigen_set(p).into_iter().map(|e| e.lambda).collect()
}

fn criterion_1(report: &mut Report) {
    let start = Instant::now();
    let expected = |d: f64| {
        if d <= 7.0 / 24.0 {
            d * 6.0 / 7.0
        } else if d <= 13.0 / 24.0 {
            0.25
        } else if d <= 2.0 / 3.0 {
            (2.0 / 3.0 - d) / 0.5
        } else {
            0.0
        }
    };
    let mut worst: f64 = 0.0;
    let mut roots_agree = true;
    for k in 0..=200 {
        let d = k as f64 / 200.0;
        let p = params(4, 3, d);
        let got = lambdas(&p);
        let want = expected(d);
        if got.is_empty() {
            worst = f64::INFINITY;
        }
        for g in &got {
            worst = worst.max((g - want).abs());
        }
        let roots = scalar_roots(&p);
        roots_agree &= roots.intervals.is_empty()
            && roots.points.len() == got.len()
            && roots.points.iter().all(|r| (r - want).abs() <= 1e-12);
    }
    let elapsed = start.elapsed();
    let ok = worst <= 1e-12 && roots_agree && elapsed < Duration::from_secs(1);
    report.line(
        "1",
        ok,
        format!(
            "n=4 m=3 closed-form λ(d) at 201 densities, max error {worst:.2e} (tol 1e-12), root scan agrees: {roots_agree}, {}",
            secs(elapsed)
        ),
    );
}

/// One constructed eigenpair from the residual suite.
struct Built {
    config: TrafficConfig,
    params: DerivedParams,
    regime: Regime,
    reduced: ReducedEigenpair,
    full: FullEigenpair,
}

fn residual_suite(report: &mut Report) -> Vec<Built> {
    let start = Instant::now();
    let mut rng = rng(2024);
    let mut built = Vec::new();
    let (mut worst_s, mut worst_ev, mut worst_ss) = (0.0f64, 0.0f64, 0.0f64);
    let mut configs = 0;
    let mut regimes_seen = [0usize; 4];
    while configs < 500 {
        let config = config_in_some_regime(&mut rng);
        let p = config.derive().unwrap();
        configs += 1;
        for ev in eigen_set(&p) {
            for &g in &ev.regimes {
                regimes_seen[g as usize] += 1;
                let reduced = reduced_eigenvector(&p, g).unwrap();
                worst_s = worst_s.max(residual_s(&p, &reduced));
                let full = extend_full(&config, &reduced).unwrap();
                worst_ev = worst_ev.max(residual_ev(&config, full.lambda, &full.x).unwrap());
                worst_ss = worst_ss.max(residual_ss(&config, full.lambda, &full.x).unwrap());
                built.push(Built {
                    config: config.clone(),
                    params: p.clone(),
                    regime: g,
                    reduced,
                    full,
                });
            }
        }
    }
    let elapsed = start.elapsed();
    let ok = worst_s <= 1e-9
        && worst_ev <= 1e-9
        && worst_ss <= 1e-9
        && regimes_seen.iter().all(|&c| c > 0)
        && elapsed < Duration::from_secs(30);
    report.line(
        "2",
        ok,
        format!(
            "{configs} random configs, {} pairs (R1..R4: {regimes_seen:?}), max residual S {worst_s:.2e} EV {worst_ev:.2e} SS {worst_ss:.2e} (tol 1e-9), {}",
            built.len(),
            secs(elapsed)
        ),
    );
    built
}

fn criterion_3(report: &mut Report, built: &[Built]) {
    let pairs: Vec<FullEigenpair> = built.iter().map(|b| b.full.clone()).collect();
    let largest = pairs
        .iter()
        .map(|p| p.lambda)
        .fold(f64::NEG_INFINITY, f64::max);
    report.line(
        "3",
        lambda_bound_check(&pairs),
        format!(
            "largest λ over {} pairs is {largest} (bound 0.25 + 1e-12)",
            pairs.len()
        ),
    );
}

fn criterion_4(report: &mut Report, built: &[Built]) {
    let start = Instant::now();
    let mut worst_exact: f64 = 0.0;
    let mut worst_float: f64 = 0.0;
    let mut float_over = [0usize; 4];
    for b in built {
        let exact = exact_eigenpair(&b.config, b.regime).unwrap();
        worst_exact = worst_exact.max(linearity_check_exact(&b.config, &exact, 100));
        let float = linearity_check(&b.config, &b.full, 100);
        if float > 1e-9 {
            float_over[b.regime as usize] += 1;
        }
        worst_float = worst_float.max(float);
    }
    let elapsed = start.elapsed();
    let ok = worst_exact <= 1e-9 && elapsed < Duration::from_secs(30);
    report.line(
        "4",
        ok,
        format!(
            "{} eigenvectors over 100 steps, max deviation {worst_exact:.2e} in exact arithmetic (tol 1e-9); in f64 the max is {worst_float:.2e} with pairs above 1e-9 per regime R1..R4 {float_over:?}, {}",
            built.len(),
            secs(elapsed)
        ),
    );
}

fn criterion_5(report: &mut Report) {
    let p = params(2, 7, 0.27);
    let got = lambdas(&p);
    let want = [0.24, 0.16 / 3.0, 0.0];
    let set_ok = got.len() == 3 && got.iter().zip(want).all(|(g, w)| (g - w).abs() <= 1e-9);
    let roots = scalar_roots(&p);
    let mut sorted = want;
    sorted.sort_by(f64::total_cmp);
    let roots_ok = roots.intervals.is_empty()
        && roots.points.len() == 3
        && roots
            .points
            .iter()
            .zip(sorted)
            .all(|(g, w)| (g - w).abs() <= 1e-9);
    report.line(
        "5",
        set_ok && roots_ok,
        format!(
            "n=2 m=7 d=0.27 eigenvalues {got:?}, root scan {:?}",
            roots.points
        ),
    );
}

fn criterion_6(report: &mut Report) {
    let mut rng = rng(6);
    let mut worst: f64 = 0.0;
    let mut errors = 0;
    let mut count = 0;
    while count < 200 {
        use rand::Rng;
        let m = rng.random_range(2..=10);
        let n = rng.random_range(m..=12);
        let r = n as f64 / (n + m - 1) as f64;
        let d = rng.random_range(0.0..r);
        if d <= 0.0 {
            continue;
        }
        let config = redistribute(&allocate(n, m, d).unwrap(), &mut rng, 3 * (n + m));
        let p = config.derive().unwrap();
        if !(p.d > 0.0 && p.d < p.r) {
            continue;
        }
        count += 1;
        let want = (p.d / (1.0 + p.rho))
            .min(0.25)
            .min((p.r - p.d) / (2.0 * p.r - 1.0 + p.rho));
        match assert_unique_positive(&p) {
            Ok(l) => worst = worst.max((l - want).abs()),
            Err(_) => errors += 1,
        }
    }
    report.line(
        "6",
        errors == 0 && worst <= 1e-12,
        format!("{count} configs with r > 1/2 and 0 < d < r, {errors} without a unique positive eigenvalue, max error {worst:.2e}"),
    );
}

fn criterion_7(report: &mut Report) {
    let mut rng = rng(7);
    let mut worst: f64 = 0.0;
    let mut shape_mismatch = 0;
    let cases = [
        (4, 3, 0.25),
        (2, 7, 0.27),
        (5, 5, 0.5),
        (3, 6, 0.37),
        (6, 2, 0.8),
    ];
    for (n, m, d) in cases {
        let base = allocate(n, m, d).unwrap();
        let reference = eigen_set(&base.derive().unwrap());
        for _ in 0..100 {
            let moved = redistribute(&base, &mut rng, 4 * (n + m));
            let got = eigen_set(&moved.derive().unwrap());
            if got.len() != reference.len() {
                shape_mismatch += 1;
                continue;
            }
            for (g, r) in got.iter().zip(&reference) {
                if g.regimes != r.regimes {
                    shape_mismatch += 1;
                }
                worst = worst.max((g.lambda - r.lambda).abs());
            }
        }
    }
    report.line(
        "7",
        shape_mismatch == 0 && worst <= 1e-12,
        format!(
            "100 redistributions for each of {} (n, m, d) cases, max eigenvalue change {worst:.2e}, {shape_mismatch} set mismatches",
            cases.len()
        ),
    );
}

fn criterion_8(report: &mut Report) {
    use rand::Rng;
    let mut rng = rng(8);
    let mut worst: f64 = 0.0;
    let mut star_errors = 0;
    for _ in 0..500 {
        let size = rng.random_range(1..=12);
        let a = positive_circuit_matrix(&mut rng, size);
        match (a.kleene_star(), star_fixed_point(&a, size + 2)) {
            (Ok(s), Ok(f)) => worst = worst.max(s.max_abs_diff(&f)),
            _ => star_errors += 1,
        }
    }
    let mut rejected = 0;
    for _ in 0..100 {
        let size = rng.random_range(1..=12);
        let a = nonpositive_circuit_matrix(&mut rng, size);
        if matches!(
            a.kleene_star(),
            Err(MinPlusError::NonPositiveCircuit { .. })
        ) {
            rejected += 1;
        }
    }
    report.line(
        "8",
        star_errors == 0 && worst <= 1e-12 && rejected == 100,
        format!("500 positive-circuit matrices, max star difference {worst:.2e}, {star_errors} errors; {rejected}/100 nonpositive-circuit matrices rejected"),
    );
}

fn criterion_9(report: &mut Report, built: &[Built]) {
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for b in built.iter().filter(|b| b.reduced.lambda > 0.0) {
        let t = z_transform(&b.reduced, b.params.m);
        if !t.lambda_positive {
            worst = f64::INFINITY;
        }
        worst = worst.max(residual_sz(&b.params, b.reduced.lambda, &t.z));
        count += 1;
    }
    report.line(
        "9",
        count > 0 && worst <= 1e-9,
        format!("{count} pairs with λ > 0, max shifted-system residual {worst:.2e} (tol 1e-9)"),
    );
}

fn criterion_10(report: &mut Report) {
    let sizes = [(4, 3), (8, 5), (16, 9), (32, 17)];
    let mut gaps = Vec::new();
    let mut within = true;
    for (n, m) in sizes {
        let mut gap: f64 = 0.0;
        for k in 0..=20 {
            let p = params(n, m, k as f64 / 20.0);
            let diff = (lambda_nonneg(&p).unwrap() - lambda_asymptotic(p.d, p.r)).abs();
            within &= diff <= 2.0 * p.rho;
            gap = gap.max(diff);
        }
        gaps.push(gap);
    }
    let decreasing = gaps.windows(2).all(|w| w[1] < w[0]);
    let shown: Vec<String> = gaps.iter().map(|g| format!("{g:.3e}")).collect();
    report.line(
        "10",
        within && decreasing,
        format!("r = 2/3 at sizes {sizes:?}: max gaps [{}], each within 2ρ: {within}, decreasing: {decreasing}", shown.join(", ")),
    );
}

fn figure_sweeps(report: &mut Report) {
    use Region::*;
    let cases = [
        ((2, 7), vec![A, B, D, F], "r < d1"),
        ((3, 6), vec![A, C, D, F], "d1 < r < d2"),
        ((4, 3), vec![A, C, E, F], "r > d2"),
    ];
    for ((n, m), want, label) in cases {
        let rows = sweep_points(n, m, 401, Default::default()).unwrap();
        let mut seq: Vec<Region> = rows.iter().map(|r| r.region.label).collect();
        seq.dedup();
        let contained = rows.iter().all(|r| r.region.contains(r.d));
        let p = params(n, m, 0.5);
        let ordering = match label {
            "r < d1" => p.r < p.d1,
            "d1 < r < d2" => p.d1 < p.r && p.r < p.d2,
            _ => p.r > p.d2,
        };
        report.line(
            &format!("sweep n={n} m={m}"),
            seq == want && contained && ordering,
            format!("{label} holds: {ordering}, regions {seq:?} (expected {want:?})"),
        );
    }
}

fn main() {
    let mut report = Report::default();
    criterion_1(&mut report);
    let built = residual_suite(&mut report);
    criterion_3(&mut report, &built);
    criterion_4(&mut report, &built);
    criterion_5(&mut report);
    criterion_6(&mut report);
    criterion_7(&mut report);
    criterion_8(&mut report);
    criterion_9(&mut report, &built);
    criterion_10(&mut report);
    figure_sweeps(&mut report);
    if report.failed.is_empty() {
        println!("all acceptance criteria passed");
    } else {
        println!("failed: {}", report.failed.join(", "));
        std::process::exit(1);
    }
}
