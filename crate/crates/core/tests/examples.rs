use std::f64::consts::FRAC_PI_2;

use porac::entangled::{phi_plus_pair, steered_ensemble, two_bit_protocol, BipartiteState, TwoBitMode};
use porac::interferometer::{
    match_encodings, match_states, prepare_state, standard_settings, PreparationSetting,
};
use porac::matrix::{trace_product, ComplexMatrix, C64};
use porac::quantum::{
    aliased_family_4_3, attainable_trace, build_family, explicit_strategy, omega_bound, optimal_bob, pauli,
    states_from_family, success_probability, MeasurementSet, QuantumStrategy,
};
use porac::{BitString, Error, Game};

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

#[test]
fn first_state_has_unit_first_observable() {
    let game = Game::new(3, 3).unwrap();
    let family = build_family(3, 3).unwrap();
    let enc = states_from_family(&family, &game).unwrap();
    let x = "000".parse::<BitString>().unwrap();
    let a1 = family.observable("A1").unwrap();
    let t = trace_product(enc.state(x), a1.matrix()).unwrap();
    assert!(close(t.re, 1.0, 1e-12) && t.im.abs() < 1e-12);
    // A1 is the first-bit character on the even block and x = 000 sits there.
    let x = "011".parse::<BitString>().unwrap();
    assert!(close(trace_product(enc.state(x), a1.matrix()).unwrap().re, 1.0, 1e-12));
}

#[test]
fn optimal_bob_recovers_explicit_value() {
    let game = Game::new(3, 3).unwrap();
    let (_, strategy) = explicit_strategy(&game).unwrap();
    let bob = optimal_bob(&strategy.encodings, &game).unwrap();
    let p = success_probability(&QuantumStrategy::new(strategy.encodings, bob).unwrap(), &game).unwrap();
    assert!(close(p, 0.902_368_93, 1e-8), "{p}");
}

#[test]
fn trivial_measurement_gives_half() {
    let game = Game::new(3, 3).unwrap();
    let (_, strategy) = explicit_strategy(&game).unwrap();
    let trivial = MeasurementSet::trivial(3, 4);
    let p = success_probability(&QuantumStrategy::new(strategy.encodings, trivial).unwrap(), &game).unwrap();
    assert!(close(p, 0.5, 1e-12));
}

#[test]
fn aliased_family_spectra() {
    let family = aliased_family_4_3();
    let omega = omega_bound(&family).unwrap();
    let r10 = 10f64.sqrt();
    let want = [2.0, 2.0, r10, r10];
    for (w, got) in want.iter().zip(&omega.omegas) {
        assert!(close(*got, *w, 1e-10), "{:?}", omega.omegas);
    }
    assert!(close(omega.bound, 16.0 + 8.0 * r10, 1e-9));
    let attainable = attainable_trace(&family).unwrap();
    assert!(close(attainable, 16.0 + 4.0 * r10 + 4.0 * 2f64.sqrt(), 1e-9), "{attainable}");
    assert!(attainable < omega.bound);
}

#[test]
fn aliased_family_breaks_parity_obliviousness() {
    let game = Game::new(4, 3).unwrap();
    let err = states_from_family(&aliased_family_4_3(), &game).unwrap_err();
    assert!(matches!(err, Error::PoViolation(_) | Error::InconsistentSignPattern(_)), "{err:?}");
}

#[test]
fn corrected_four_three_family_is_consistent() {
    let family = build_family(4, 3).unwrap();
    family.validate(1e-12).unwrap();
    assert!(family.observable("A3").unwrap().matrix().max_abs_diff(family.observable("A1").unwrap().matrix()) == 0.0);
    assert!(family.observable("A'1").unwrap().matrix().max_abs_diff(pauli("IX").unwrap().matrix()) < 1e-15);
}

#[test]
fn interferometer_matches_up_to_global_phase() {
    let game = Game::new(3, 3).unwrap();
    let base = match_encodings(&standard_settings(), &game).unwrap();
    let rotated: Vec<Vec<C64>> = standard_settings()
        .into_iter()
        .enumerate()
        .map(|(i, s)| {
            let phase = C64::from_polar(1.0, 0.7 * i as f64 + 0.1);
            prepare_state(s).into_iter().map(|a| a * phase).collect()
        })
        .collect();
    let again = match_states(&rotated, &game).unwrap();
    assert_eq!(base.assignment, again.assignment);
    assert!(again.min_fidelity > 1.0 - 1e-12);
}

#[test]
fn interferometer_rejects_shifted_angles() {
    let game = Game::new(3, 3).unwrap();
    let mut settings = standard_settings();
    settings[2] = PreparationSetting::new(settings[2].phi1, settings[2].theta + 0.3).unwrap();
    assert!(matches!(match_encodings(&settings, &game), Err(Error::EncodingMismatch(_))));
}

#[test]
fn interferometer_rejects_duplicates() {
    let game = Game::new(3, 3).unwrap();
    let mut settings = standard_settings();
    settings[5] = PreparationSetting::new(FRAC_PI_2, 0.1).unwrap();
    settings[6] = PreparationSetting::new(FRAC_PI_2, 0.1).unwrap();
    assert!(matches!(match_encodings(&settings, &game), Err(Error::DuplicateSettings(5, 6))));
}

#[test]
fn steered_states_are_transposed_encodings() {
    let game = Game::new(3, 3).unwrap();
    let family = build_family(3, 3).unwrap();
    let enc = states_from_family(&family, &game).unwrap();
    let ens = steered_ensemble(&phi_plus_pair(), &family).unwrap();
    for x in game.inputs() {
        let (s, w) = ens.get(x);
        assert!(close(*w, 0.25, 1e-12));
        assert!(s.scale_real(4.0).max_abs_diff(&enc.state(x).transpose()) < 1e-12);
    }
}

#[test]
fn ignoring_the_message_gives_half() {
    let family = build_family(3, 3).unwrap();
    let meas = MeasurementSet::from_observables(&family.normalized_bobs().unwrap()).unwrap();
    let out = two_bit_protocol(&phi_plus_pair(), &family, &meas, TwoBitMode::IgnoreMessage).unwrap();
    assert!(close(out.success, 0.5, 1e-12));
    assert!(out.po.satisfied);
}

#[test]
fn product_state_steers_nothing() {
    let family = build_family(3, 3).unwrap();
    let mixed = BipartiteState::maximally_mixed(4, 4);
    let meas = MeasurementSet::from_observables(&family.normalized_bobs().unwrap()).unwrap();
    let out = two_bit_protocol(&mixed, &family, &meas, TwoBitMode::Exact).unwrap();
    assert!(close(out.success, 0.5, 1e-12));
    let bad = BipartiteState::new(2, 2, ComplexMatrix::identity(4).scale_real(0.25)).unwrap();
    assert!(matches!(steered_ensemble(&bad, &family), Err(Error::DimensionMismatch(_))));
}
