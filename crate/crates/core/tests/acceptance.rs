//! Acceptance suite: one PASS/FAIL line per criterion.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use porac::classical::{
    forwarding_strategy, fourier, ontic_max, po_via_fourier, search_po_deterministic,
    CorrelationSpec, SearchMode,
};
use porac::entangled::{bell_value, phi_plus_pair, steered_ensemble, two_bit_protocol, TwoBitMode};
use porac::game::{pnc_bound, po_satisfied, BitString, Channel, Game};
use porac::interferometer::{
    match_encodings, path_observable, standard_settings, SplitterSetting,
};
use porac::quantum::{
    assemble_delta, build_family, explicit_strategy, optimal_bob, seesaw, states_from_family,
    success_from_trace, success_probability, EncodingSet, MeasurementSet, Pauli, QuantumStrategy,
};

/// Best (4,3) see-saw value over 50 restarts, seed 7 (equals 1/2 + √2/4).
const PINNED_4_3: f64 = 0.853_553_390_593_273_7;
const PINNED_TOL: f64 = 1e-6;
const CLAIMED_4_3: f64 = 0.819;

type Criterion = (&'static str, fn() -> Outcome, Duration);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn sqrt2() -> f64 {
    2f64.sqrt()
}

/// 1/2 + ((n−2)+√2)/(2n).
fn nn_value(n: usize) -> f64 {
    0.5 + ((n as f64 - 2.0) + sqrt2()) / (2.0 * n as f64)
}

fn noncontextual_bounds() -> Outcome {
    let mut bad = Vec::new();
    for n in 2..=10usize {
        for g in 2..=n {
            // ((g−1)·1 + (n−g+1)·½)/n
            let oracle = (Rational64::from_integer(g as i64 - 1)
                + Rational64::new((n - g + 1) as i64, 2))
                / Rational64::from_integer(n as i64);
            if pnc_bound(n, g).unwrap() != oracle {
                bad.push(format!("({n},{g})"));
            }
        }
    }
    let mut found = Vec::new();
    for (n, g, want) in [(2, 2, Rational64::new(3, 4)), (3, 2, Rational64::new(2, 3)), (3, 3, Rational64::new(5, 6))] {
        let game = Game::new(n, g).unwrap();
        let out = search_po_deterministic(&game, SearchMode::Exhaustive, 0, 0).unwrap();
        if out.value != want || out.value != game.pnc_bound() {
            bad.push(format!("search ({n},{g}) = {}", out.value));
        }
        found.push(format!("({n},{g})->{}", out.value));
    }
    outcome(bad.is_empty(), format!("45 bounds exact; exhaustive {}; mismatches {bad:?}", found.join(" ")))
}

fn local_search() -> Outcome {
    let mut parts = Vec::new();
    let mut pass = true;
    for (n, g) in [(4, 3), (4, 4)] {
        let game = Game::new(n, g).unwrap();
        let bound = game.pnc_bound();
        let out = search_po_deterministic(&game, SearchMode::Local, 100_000, 0).unwrap();
        let po = po_satisfied(&out.best.channel(), game.parity_set(), 0.0).unwrap();
        let fwd = forwarding_strategy(&game).value(&game).unwrap();
        pass &= out.value <= bound && po.max_violation == 0.0 && fwd == bound;
        parts.push(format!("({n},{g}) local {} <= {bound}, forwarding {fwd}", out.value));
    }
    outcome(pass, parts.join("; "))
}

fn explicit_values() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for n in 3..=8 {
        let game = Game::new(n, n).unwrap();
        let (_, strategy) = explicit_strategy(&game).unwrap();
        let p = success_probability(&strategy, &game).unwrap();
        let err = (p - nn_value(n)).abs();
        let tol = if n <= 4 { 1e-12 } else { 1e-9 };
        pass &= err < tol;
        parts.push(format!("n={n} P={p:.10} err={err:.1e}"));
    }
    let p3 = 0.5 + (1.0 + sqrt2()) / 6.0;
    let p4 = 0.5 + (2.0 + sqrt2()) / 8.0;
    pass &= (nn_value(3) - p3).abs() < 1e-15 && (nn_value(4) - p4).abs() < 1e-15;
    outcome(pass, parts.join(", "))
}

fn correlation_traces() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for (n, want) in [(3, 8.0 + 8.0 * sqrt2()), (4, 32.0 + 16.0 * sqrt2())] {
        let game = Game::new(n, n).unwrap();
        let family = build_family(n, n).unwrap();
        let d = assemble_delta(&game, &family, &family.normalized_bobs().unwrap()).unwrap();
        pass &= (d.trace - want).abs() < 1e-12;
        parts.push(format!("tr[D_{n}]={:.12}", d.trace));
    }
    let mut worst = 0.0f64;
    let games = [(3, 3), (4, 4), (4, 3), (5, 5), (6, 6), (7, 7), (8, 8)];
    for (n, g) in games {
        let game = Game::new(n, g).unwrap();
        let (family, strategy) = explicit_strategy(&game).unwrap();
        let bobs: Vec<_> = (1..=n).map(|y| strategy.measurements.observable(y)).collect();
        let d = assemble_delta(&game, &family, &bobs).unwrap();
        let p = success_probability(&strategy, &game).unwrap();
        worst = worst.max((p - success_from_trace(&game, d.trace)).abs());
        // Seesaw-style Bob on the same states.
        let bob = optimal_bob(&strategy.encodings, &game).unwrap();
        let bobs: Vec<_> = (1..=n).map(|y| bob.observable(y)).collect();
        let d = assemble_delta(&game, &family, &bobs).unwrap();
        let s = QuantumStrategy::new(strategy.encodings.clone(), bob).unwrap();
        worst = worst.max((success_probability(&s, &game).unwrap() - success_from_trace(&game, d.trace)).abs());
    }
    pass &= worst < 1e-10;
    parts.push(format!("identity gap {worst:.1e} over {} strategies", games.len() * 2));
    outcome(pass, parts.join(", "))
}

fn ontic_maxima() -> Outcome {
    let cases = [
        ("D3", CorrelationSpec::delta_3_3(), 4, 16),
        ("D4(g=4)", CorrelationSpec::delta_4_4(), 8, 48),
        ("D4(g=3)", CorrelationSpec::delta_4_3(), 4, 32),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, spec, dim, want) in cases {
        let m = ontic_max(&spec).unwrap();
        pass &= m.value * dim == want;
        parts.push(format!("{name}: {}x{dim}={}", m.value, m.value * dim));
    }
    outcome(pass, parts.join(", "))
}

fn seesaw_recovery() -> Outcome {
    let g33 = Game::new(3, 3).unwrap();
    let r33 = seesaw(&g33, 4, 20, 500, 1e-13, 0).unwrap();
    let g22 = Game::new(2, 2).unwrap();
    let r22 = seesaw(&g22, 2, 20, 500, 1e-13, 0).unwrap();
    let target22 = 0.5 * (1.0 + 1.0 / sqrt2());
    let pass = r33.value >= 0.90236893 - 1e-4 && (r22.value - target22).abs() <= 1e-4 && (r22.value - 0.853553).abs() <= 1e-4;
    outcome(pass, format!("(3,3) dim4 -> {:.10}; (2,2) dim2 -> {:.10}", r33.value, r22.value))
}

fn four_three_advantage() -> Outcome {
    let game = Game::new(4, 3).unwrap();
    let r = seesaw(&game, 4, 50, 500, 1e-13, 7).unwrap();
    let pinned = (r.value - PINNED_4_3).abs() < PINNED_TOL;
    let pass = r.value > 0.76 && pinned && r.po_violation <= 1e-8;
    outcome(
        pass,
        format!(
            "value {:.10} (pinned {PINNED_4_3:.10}), deviation from claimed {CLAIMED_4_3}: {:+.6}, PO gap {:.1e}",
            r.value,
            r.value - CLAIMED_4_3,
            r.po_violation
        ),
    )
}

fn entangled() -> Outcome {
    let family = build_family(3, 3).unwrap();
    let state = phi_plus_pair();
    let bobs = family.normalized_bobs().unwrap();
    let bell = bell_value(&state, &family, &bobs).unwrap();
    let game = Game::new(3, 3).unwrap();
    let (_, pm) = explicit_strategy(&game).unwrap();
    let pm_value = success_probability(&pm, &game).unwrap();
    let meas = MeasurementSet::from_observables(&bobs).unwrap();
    let proto = two_bit_protocol(&state, &family, &meas, TwoBitMode::Exact).unwrap();
    let steered = steered_ensemble(&state, &family).unwrap().encodings(&game).unwrap();
    let steered_opt = success_probability(
        &QuantumStrategy::new(steered.clone(), optimal_bob(&steered, &game).unwrap()).unwrap(),
        &game,
    )
    .unwrap();
    let pass = (bell.expectation - (2.0 + 2.0 * sqrt2())).abs() < 1e-12
        && (bell.success - (0.5 + bell.expectation / 12.0)).abs() < 1e-15
        && (bell.success - pm_value).abs() < 1e-10
        && (proto.success - pm_value).abs() < 1e-10
        && proto.po.max_violation <= 1e-12
        && (steered_opt - pm_value).abs() < 1e-8;
    outcome(
        pass,
        format!(
            "<B>={:.12}, success {:.12}, two-bit {:.12}, message PO gap {:.1e}",
            bell.expectation, bell.success, proto.success, proto.po.max_violation
        ),
    )
}

fn random_channel(rng: &mut ChaCha8Rng, kind: usize) -> (Channel<Rational64>, Game) {
    let n = rng.random_range(2..=4usize);
    let g = rng.random_range(2..=n);
    let game = Game::new(n, g).unwrap();
    let messages = rng.random_range(1..=4usize);
    let random_row = |rng: &mut ChaCha8Rng| -> Vec<Rational64> {
        let w: Vec<i64> = (0..messages).map(|_| rng.random_range(0..6)).collect();
        let total: i64 = w.iter().sum();
        if total == 0 {
            let mut r = vec![Rational64::from_integer(0); messages];
            r[0] = Rational64::from_integer(1);
            return r;
        }
        w.iter().map(|&v| Rational64::new(v, total)).collect()
    };
    let rows: Vec<Vec<Rational64>> = match kind {
        // Arbitrary stochastic rows.
        0 => (0..1 << n).map(|_| random_row(rng)).collect(),
        // Depends only on a random set of at most g−1 positions.
        _ => {
            let mut positions: Vec<usize> = (0..n).collect();
            for i in (1..n).rev() {
                positions.swap(i, rng.random_range(0..=i));
            }
            let k = rng.random_range(0..g);
            let mask = positions[..k].iter().fold(0u32, |m, &p| m | 1 << p);
            let table: Vec<Vec<Rational64>> = (0..1 << n).map(|_| random_row(rng)).collect();
            (0..1u32 << n).map(|x| table[(x & mask) as usize].clone()).collect()
        }
    };
    (Channel::new(n, messages, rows).unwrap(), game)
}

fn fourier_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut disagreements = 0;
    let mut po_count = 0;
    let mut check = |ch: &Channel<Rational64>, game: &Game| {
        let a = po_satisfied(ch, game.parity_set(), 1e-10).unwrap().satisfied;
        let b = po_via_fourier(ch, game.parity_set(), 1e-10).unwrap();
        po_count += a as usize;
        disagreements += (a != b) as usize;
    };
    for i in 0..200 {
        let (ch, game) = random_channel(&mut rng, i % 2);
        check(&ch, &game);
    }
    let mut structured = Vec::new();
    for (n, g) in [(2, 2), (3, 2), (3, 3), (4, 3), (4, 4)] {
        let game = Game::new(n, g).unwrap();
        structured.push((Channel::constant(n).unwrap(), game.clone()));
        structured.push((Channel::identity(n).unwrap(), game.clone()));
        structured.push((forwarding_strategy(&game).channel(), game.clone()));
        structured.push((Channel::parity_of(BitString::ones(n).unwrap()).unwrap(), game));
    }
    for (ch, game) in &structured {
        check(ch, game);
    }
    let total = 200 + structured.len();
    // Reconstruction spot check.
    let (ch, _) = random_channel(&mut rng, 0);
    let back = fourier(&ch).reconstruct();
    let recon = ch
        .to_f64()
        .rows()
        .iter()
        .zip(&back)
        .flat_map(|(a, b)| a.iter().zip(b).map(|(x, y)| (x - y).abs()))
        .fold(0.0, f64::max);
    outcome(
        disagreements == 0 && structured.len() == 20 && recon < 1e-10,
        format!("{total} channels ({po_count} PO), {disagreements} disagreements, reconstruction err {recon:.1e}"),
    )
}

fn po_identities() -> Outcome {
    let mut worst = 0.0f64;
    let mut count = 0;
    let mut record = |enc: &EncodingSet, game: &Game| {
        worst = worst.max(enc.po_violation(game.parity_set()).unwrap());
        count += 1;
    };
    for (n, g) in [(3, 3), (4, 4), (4, 3), (5, 5), (6, 6), (7, 7), (8, 8)] {
        let game = Game::new(n, g).unwrap();
        let family = build_family(n, g).unwrap();
        record(&states_from_family(&family, &game).unwrap(), &game);
    }
    for (n, g, dim) in [(2, 2, 2), (3, 3, 4), (4, 3, 4), (4, 4, 8)] {
        let game = Game::new(n, g).unwrap();
        let r = seesaw(&game, dim, 3, 50, 1e-12, 1).unwrap();
        record(&r.best.encodings, &game);
    }
    let game = Game::new(3, 3).unwrap();
    let steered = steered_ensemble(&phi_plus_pair(), &build_family(3, 3).unwrap()).unwrap();
    record(&steered.encodings(&game).unwrap(), &game);
    outcome(worst < 1e-12, format!("{count} encoding sets, max deviation {worst:.1e}"))
}

fn interferometer() -> Outcome {
    let game = Game::new(3, 3).unwrap();
    let m = match_encodings(&standard_settings(), &game).unwrap();
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let z = path_observable(SplitterSetting::real(1.0, 0.0, 0.0).unwrap()).unwrap();
    let mx = path_observable(SplitterSetting::real(r, r, std::f64::consts::FRAC_PI_2).unwrap()).unwrap();
    let dz = z.matrix().max_abs_diff(&Pauli::Z.matrix());
    let dx = mx.matrix().max_abs_diff(&Pauli::X.matrix().scale_real(-1.0));
    let labels: Vec<String> = m.assignment.iter().map(|x| x.to_string()).collect();
    outcome(
        m.min_fidelity > 1.0 - 1e-12 && dz <= f64::EPSILON && dx <= 2.0 * f64::EPSILON,
        format!(
            "min fidelity {:.15}, assignment [{}], sigma_z gap {dz:.1e}, -sigma_x gap {dx:.1e}",
            m.min_fidelity,
            labels.join(" ")
        ),
    )
}

fn main() -> ExitCode {
    let criteria: Vec<Criterion> = vec![
        ("noncontextual bounds and exhaustive search", noncontextual_bounds, Duration::from_secs(60)),
        ("local-search falsification", local_search, Duration::from_secs(120)),
        ("explicit quantum values", explicit_values, Duration::from_secs(60)),
        ("correlation traces and trace identity", correlation_traces, Duration::from_secs(60)),
        ("ontic maxima", ontic_maxima, Duration::from_secs(60)),
        ("see-saw recovery", seesaw_recovery, Duration::from_secs(60)),
        ("(4,3) quantum advantage", four_three_advantage, Duration::from_secs(300)),
        ("entanglement-assisted protocol", entangled, Duration::from_secs(60)),
        ("Fourier equivalence", fourier_equivalence, Duration::from_secs(60)),
        ("PO operator identities", po_identities, Duration::from_secs(60)),
        ("interferometer settings", interferometer, Duration::from_secs(60)),
    ];
    let mut failures = 0;
    for (i, (name, run, budget)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let out = run();
        let elapsed = start.elapsed();
        let pass = out.pass && elapsed <= budget;
        failures += (!pass) as usize;
        println!(
            "{} [{:>2}] {name}: {} ({:.2}s, budget {}s)",
            if pass { "PASS" } else { "FAIL" },
            i + 1,
            out.detail,
            elapsed.as_secs_f64(),
            budget.as_secs()
        );
    }
    println!("acceptance: {} of 11 criteria passed", 11 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
