//! Acceptance suite: one line per criterion, non-zero exit on any failure.
//!
//! Run with `cargo test -p steerseq --test acceptance`.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::Rng;
use steerseq::measurements::NoisyBasisMeasurement;
use steerseq::qcore::{
    haar_unitary, identity, kron, max_abs_diff, partial_trace_b, trace_distance,
};
use steerseq::sequence::prescribed_anonymous_eta;
use steerseq::verify::{
    batch_standard_error, family_projection, haar_averaged_batches, mub_averaged_step,
    ROUNDING_FLOOR,
};
use steerseq::{
    anonymous_count, anonymous_optimum, count_bobs, mub_bases, qubit_merit, ratio,
    saturating_sequence, threshold, verify_projective_2design, Family, RngStream, SymmetricState,
    ThresholdKind,
};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn timed(budget: Duration, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let mut out = f();
    let elapsed = start.elapsed();
    if elapsed > budget {
        out.pass = false;
    }
    out.detail = format!("{} [{:.2?} / budget {:?}]", out.detail, elapsed, budget);
    out
}

fn bob_counts() -> Outcome {
    timed(Duration::from_secs(1), || {
        let got: Vec<usize> = [2, 4, 16]
            .iter()
            .map(|&d| count_bobs(d, Family::Isotropic, ThresholdKind::SteerAllProjective).unwrap())
            .collect();
        outcome(
            got == [5, 6, 13],
            format!("isotropic d=2,4,16 -> {got:?}, want [5, 6, 13]"),
        )
    })
}

fn werner_counts() -> Outcome {
    let got: Vec<usize> = [2, 3, 4, 5]
        .iter()
        .map(|&d| count_bobs(d, Family::Werner, ThresholdKind::SteerAllProjective).unwrap())
        .collect();
    outcome(
        got == [5, 2, 1, 1],
        format!("werner d=2..5 -> {got:?}, want [5, 2, 1, 1]"),
    )
}

fn thresholds() -> Outcome {
    let rounded = [(2, 0.50), (4, 0.3611), (16, 0.1587)];
    let mut pass = true;
    let mut parts = Vec::new();
    for (d, quoted) in rounded {
        let value = threshold(ThresholdKind::SteerAllProjective, Family::Isotropic, d).unwrap();
        // Independent route: (H_d - 1)/(d - 1), summing in reverse order.
        let harmonic: f64 = (1..=d).rev().map(|i| 1.0 / i as f64).sum();
        let exact = (harmonic - 1.0) / (d as f64 - 1.0);
        pass &= (value - quoted).abs() <= 5e-3 && (value - exact).abs() <= 1e-12;
        parts.push(format!("d={d}: {value:.6}"));
    }
    outcome(pass, parts.join(", "))
}

fn scaling_band() -> Outcome {
    timed(Duration::from_secs(1), || {
        let mut pass = true;
        let mut parts = Vec::new();
        for d in [10usize, 50, 100, 150] {
            let n = count_bobs(d, Family::Isotropic, ThresholdKind::SteerAllProjective).unwrap();
            let df = d as f64;
            let q = n as f64 / (df / df.ln());
            pass &= (1.0..=3.0).contains(&q);
            parts.push(format!("d={d}: N={n} ratio={q:.3}"));
        }
        outcome(pass, parts.join(", "))
    })
}

fn mub_exactness() -> Outcome {
    timed(Duration::from_secs(10), || {
        let mut worst: f64 = 0.0;
        for d in [2usize, 3, 5, 7] {
            let mubs = mub_bases(d).unwrap();
            for eta in [0.25, 0.5, 0.75, 1.0] {
                for p in [0.3, 0.7, 1.0] {
                    let rho = SymmetricState::isotropic(d, p).unwrap().to_density_matrix();
                    let out = mub_averaged_step(&rho, eta, &mubs).unwrap();
                    let expected = SymmetricState::isotropic(d, ratio(eta, d) * p)
                        .unwrap()
                        .to_density_matrix();
                    worst = worst.max(trace_distance(&out, &expected).unwrap());
                }
            }
        }
        outcome(
            worst < 1e-10,
            format!("max trace distance {worst:.2e} (< 1e-10)"),
        )
    })
}

fn haar_convergence() -> Outcome {
    timed(Duration::from_secs(120), || {
        let eta = 0.5;
        let mut pass = true;
        let mut parts = Vec::new();
        for d in [2usize, 3, 4] {
            let rho = SymmetricState::isotropic(d, 1.0)
                .unwrap()
                .to_density_matrix();
            let target = ratio(eta, d);
            let mut hits = 0;
            let mut worst_dev: f64 = 0.0;
            let mut worst_family: f64 = 0.0;
            for seed in 0..10u64 {
                let batches = haar_averaged_batches(&rho, eta, 10_000, 10, seed * 1_000).unwrap();
                let se = batch_standard_error(&batches, Family::Isotropic, d).unwrap();
                let mean = batches
                    .iter()
                    .fold(steerseq::ComplexMatrix::zeros(d * d, d * d), |a, b| a + b)
                    .unscale(batches.len() as f64);
                let (p, family_distance) = family_projection(&mean, Family::Isotropic, d).unwrap();
                let dev = (p - target).abs();
                // The per-sample visibility is exact, so the batch spread is
                // rounding noise; the floor keeps the comparison meaningful.
                if dev < (3.0 * se).max(ROUNDING_FLOOR) {
                    hits += 1;
                }
                worst_dev = worst_dev.max(dev);
                worst_family = worst_family.max(family_distance);
            }
            pass &= hits >= 9 && worst_family < 0.02;
            parts.push(format!(
                "d={d}: {hits}/10 within 3 SE (max |dp| {worst_dev:.1e}, max family distance {worst_family:.1e})"
            ));
        }
        outcome(pass, parts.join(", "))
    })
}

fn two_design_deficit() -> Outcome {
    let mut worst: f64 = 0.0;
    for d in [2usize, 3, 4, 5, 7] {
        let set = mub_bases(d).unwrap();
        worst = worst.max(verify_projective_2design(&set.vectors(), d).unwrap());
    }
    outcome(
        worst < 1e-10,
        format!("max deficit over d=2,3,4,5,7: {worst:.2e}"),
    )
}

fn unsharpness_transfer() -> Outcome {
    let mut rng = RngStream::new(2024);
    let mut worst: f64 = 0.0;
    for family in Family::ALL {
        for d in 2..=5usize {
            for _ in 0..20 {
                let u = haar_unitary(d, &mut rng);
                let eta: f64 = rng.random_range(0.0..1.0);
                let p: f64 = rng.random_range(0.0..1.0);
                let noisy = NoisyBasisMeasurement::new(u.clone(), eta)
                    .unwrap()
                    .povm_elements();
                let sharp = NoisyBasisMeasurement::new(u, 1.0).unwrap().povm_elements();
                let rho = SymmetricState::new(family, d, p)
                    .unwrap()
                    .to_density_matrix();
                let rho_eff = SymmetricState::new(family, d, eta * p)
                    .unwrap()
                    .to_density_matrix();
                let id = identity(d);
                for (bn, bs) in noisy.iter().zip(&sharp) {
                    let lhs = partial_trace_b(&(kron(&id, bn) * &rho), d).unwrap();
                    let rhs = partial_trace_b(&(kron(&id, bs) * &rho_eff), d).unwrap();
                    worst = worst.max(max_abs_diff(&lhs, &rhs));
                }
            }
        }
    }
    outcome(
        worst < 1e-12,
        format!("max deviation {worst:.2e} over 20 bases, d=2..5, both families"),
    )
}

fn qubit_merit_saturation() -> Outcome {
    let worst = (0..=100)
        .map(|k| {
            let (f, g) = qubit_merit(k as f64 / 100.0).unwrap();
            (f * f + g * g - 1.0).abs()
        })
        .fold(0.0, f64::max);
    // f64 rounding of sqrt and squares allows at most a couple of ulps.
    outcome(
        worst <= 2.0 * f64::EPSILON,
        format!("max |F^2 + G^2 - 1| = {worst:.1e} over 101 points"),
    )
}

fn nonlocality_bound() -> Outcome {
    let nonlocal = saturating_sequence(2, 0.7012, 1.0).unwrap().n_bob;
    let local = saturating_sequence(2, 0.6829, 1.0).unwrap().n_bob;
    outcome(
        nonlocal == 2 && local == 2,
        format!("threshold 0.7012 -> {nonlocal}, 0.6829 -> {local}"),
    )
}

fn anonymous_scenario() -> Outcome {
    timed(Duration::from_secs(5), || {
        let count = anonymous_count(0.6, 2, 0.5).unwrap();
        let (_, opt2) = anonymous_optimum(2, ThresholdKind::SteerAllProjective).unwrap();
        let mut pass = count == 2 && opt2 == 2;
        let mut parts = vec![format!("count(d=2, eta=0.6)={count}, optimum(d=2)={opt2}")];
        for d in [16usize, 64] {
            let p_steer =
                threshold(ThresholdKind::SteerAllProjective, Family::Isotropic, d).unwrap();
            let prescribed =
                anonymous_count(prescribed_anonymous_eta(d, p_steer), d, p_steer).unwrap();
            let (_, best) = anonymous_optimum(d, ThresholdKind::SteerAllProjective).unwrap();
            pass &= best >= prescribed;
            parts.push(format!("d={d}: optimum {best} >= prescribed {prescribed}"));
        }
        outcome(pass, parts.join(", "))
    })
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("1 isotropic Bob counts", bob_counts),
        ("2 Werner Bob counts", werner_counts),
        ("3 isotropic steering thresholds", thresholds),
        ("4 N_Bob / (d / ln d) band", scaling_band),
        ("5 MUB-averaged channel exactness", mub_exactness),
        ("6 Haar-averaged channel convergence", haar_convergence),
        ("7 MUB 2-design deficit", two_design_deficit),
        ("8 unsharpness transfer", unsharpness_transfer),
        ("9 qubit merit saturation", qubit_merit_saturation),
        ("10 qubit nonlocality bound", nonlocality_bound),
        ("11 anonymous scenario", anonymous_scenario),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let out = run();
        let tag = if out.pass { "PASS" } else { "FAIL" };
        println!("[{tag}] criterion {name}: {}", out.detail);
        failed += usize::from(!out.pass);
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
