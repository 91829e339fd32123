use std::time::Instant;

use anyhow::{bail, Context, Result};
use num_traits::ToPrimitive;

use porac::classical::{
    forwarding_strategy, ontic_max, search_po_deterministic, CorrelationSpec, SearchMode,
};
use porac::entangled::{bell_value, phi_plus_pair, steered_ensemble, two_bit_protocol, TwoBitMode};
use porac::game::{po_satisfied, Game};
use porac::interferometer::{match_encodings, prepare_state, standard_settings};
use porac::quantum::{
    assemble_delta, explicit_strategy, seesaw, success_probability, EncodingSet, MeasurementSet,
};

use crate::report::{ratio, Bell, ClassicalSearch, GameReport, Interferometer, QuantumValue};

/// Largest n for which explicit Δ assembly is included in ontic reports.
const ONTIC_DELTA_MAX_N: usize = 8;
/// Largest see-saw dimension the table sweep attempts.
const TABLE_SEESAW_MAX_DIM: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Explicit,
    Seesaw,
}

#[derive(Clone, Debug)]
pub struct Params {
    pub n: usize,
    pub g: usize,
    pub dim: Option<usize>,
    pub restarts: usize,
    pub max_iter: usize,
    pub tol: f64,
    pub seed: u64,
    pub mode: Option<SearchMode>,
    pub budget: u64,
}

impl Params {
    fn game(&self) -> Result<Game> {
        Game::new(self.n, self.g).with_context(|| format!("invalid game (n = {}, g = {})", self.n, self.g))
    }
}

fn pnc_f64(game: &Game) -> f64 {
    game.pnc_bound().to_f64().expect("small rational")
}

pub fn bounds(p: &Params) -> Result<GameReport> {
    let game = p.game()?;
    let mut report = GameReport::new(game.n(), game.g(), game.pnc_bound());
    let mode = p.mode.unwrap_or(if game.n() <= 3 { SearchMode::Exhaustive } else { SearchMode::Local });
    let start = Instant::now();
    let out = search_po_deterministic(&game, mode, p.budget, p.seed)?;
    report.time("classical_search", start.elapsed().as_secs_f64());
    let (name, tag) = match mode {
        SearchMode::Exhaustive => ("exhaustive", "exhaustive".to_string()),
        SearchMode::Local => ("local", format!("local({}, {})", p.seed, p.budget)),
    };
    let encoding: Vec<String> = out.best.encoding().iter().map(|m| m.to_string()).collect();
    report.classical_search = Some(ClassicalSearch {
        mode: name.into(),
        value: ratio(out.value),
        strategy: format!("{} messages, encoding [{}]", out.best.message_count(), encoding.join(" ")),
    });
    report.tag("classical_search", tag);
    let po = po_satisfied(&out.best.channel(), game.parity_set(), 0.0)?;
    report.check("classical_search", po.max_violation);
    Ok(report)
}

fn explicit_into(game: &Game, report: &mut GameReport) -> Result<()> {
    let start = Instant::now();
    let (family, strategy) = explicit_strategy(game)?;
    let value = success_probability(&strategy, game)?;
    let bobs: Vec<_> = (1..=game.n()).map(|y| strategy.measurements.observable(y)).collect();
    let delta = assemble_delta(game, &family, &bobs)?;
    report.time("quantum", start.elapsed().as_secs_f64());
    report.quantum = Some(QuantumValue {
        method: "explicit".into(),
        value,
        margin_over_pnc: value - pnc_f64(game),
    });
    report.delta_trace = Some(delta.trace);
    report.tag("quantum", "analytic");
    report.tag("delta_trace", "analytic");
    report.check("explicit_encodings", strategy.encodings.po_violation(game.parity_set())?);
    Ok(())
}

fn seesaw_into(game: &Game, p: &Params, dim: usize, report: &mut GameReport) -> Result<()> {
    let start = Instant::now();
    let out = seesaw(game, dim, p.restarts, p.max_iter, p.tol, p.seed)?;
    report.time("quantum", start.elapsed().as_secs_f64());
    report.quantum = Some(QuantumValue {
        method: "seesaw".into(),
        value: out.value,
        margin_over_pnc: out.value - pnc_f64(game),
    });
    report.tag("quantum", format!("seesaw({}, {})", p.seed, p.restarts));
    report.check("seesaw_encodings", out.po_violation);
    Ok(())
}

pub fn quantum(p: &Params, method: Method) -> Result<GameReport> {
    let game = p.game()?;
    let mut report = GameReport::new(game.n(), game.g(), game.pnc_bound());
    match method {
        Method::Explicit => explicit_into(&game, &mut report)?,
        Method::Seesaw => seesaw_into(&game, p, p.dim.unwrap_or(game.default_dim()), &mut report)?,
    }
    Ok(report)
}

fn correlation_for(game: &Game) -> Result<(CorrelationSpec, i64)> {
    match (game.n(), game.g()) {
        (4, 3) => Ok((CorrelationSpec::delta_4_3(), 4)),
        (n, g) if n == g && n >= 3 => Ok((CorrelationSpec::delta_n_n(n)?, 1 << (n - 1))),
        (n, g) => bail!("no correlation operator is defined for (n = {n}, g = {g})"),
    }
}

pub fn ontic(p: &Params) -> Result<GameReport> {
    let game = p.game()?;
    let mut report = GameReport::new(game.n(), game.g(), game.pnc_bound());
    let (spec, dim) = correlation_for(&game)?;
    let start = Instant::now();
    let m = ontic_max(&spec)?;
    report.time("ontic", start.elapsed().as_secs_f64());
    report.ontic_trace_bound = Some(m.value * dim);
    report.tag("ontic_trace_bound", "exhaustive");
    if game.n() <= ONTIC_DELTA_MAX_N {
        explicit_into(&game, &mut report)?;
    }
    Ok(report)
}

pub fn verify_po(p: &Params) -> Result<GameReport> {
    let game = p.game()?;
    let mut report = GameReport::new(game.n(), game.g(), game.pnc_bound());
    let start = Instant::now();
    let fwd = forwarding_strategy(&game);
    report.check("forwarding_channel", po_satisfied(&fwd.channel(), game.parity_set(), 0.0)?.max_violation);
    if let Ok((family, strategy)) = explicit_strategy(&game) {
        report.check("explicit_encodings", strategy.encodings.po_violation(game.parity_set())?);
        let steered = phi_plus_pair();
        if family.dim() == steered.dim_a() {
            let enc = steered_ensemble(&steered, &family)?.encodings(&game)?;
            report.check("steered_encodings", enc.po_violation(game.parity_set())?);
        }
    }
    report.time("verify_po", start.elapsed().as_secs_f64());
    Ok(report)
}

pub fn entangled(p: &Params) -> Result<GameReport> {
    let game = p.game()?;
    if (game.n(), game.g()) != (3, 3) {
        bail!("the entangled protocol is defined for (n = 3, g = 3)");
    }
    let mut report = GameReport::new(3, 3, game.pnc_bound());
    let start = Instant::now();
    let (family, _) = explicit_strategy(&game)?;
    let state = phi_plus_pair();
    let bobs = family.normalized_bobs()?;
    let bell = bell_value(&state, &family, &bobs)?;
    let meas = MeasurementSet::from_observables(&bobs)?;
    let proto = two_bit_protocol(&state, &family, &meas, TwoBitMode::Exact)?;
    report.time("entangled", start.elapsed().as_secs_f64());
    report.bell = Some(Bell {
        expectation: bell.expectation,
        success: bell.success,
        two_bit_success: proto.success,
    });
    report.tag("bell", "analytic");
    report.check("message_channel", proto.po.max_violation);
    let enc = steered_ensemble(&state, &family)?.encodings(&game)?;
    report.check("steered_encodings", enc.po_violation(game.parity_set())?);
    Ok(report)
}

pub fn interferometer(p: &Params) -> Result<GameReport> {
    let game = p.game()?;
    if (game.n(), game.g()) != (3, 3) {
        bail!("the interferometer settings are defined for (n = 3, g = 3)");
    }
    let mut report = GameReport::new(3, 3, game.pnc_bound());
    let start = Instant::now();
    let settings = standard_settings();
    let m = match_encodings(&settings, &game)?;
    let mut vectors = vec![Vec::new(); 8];
    for (s, x) in settings.iter().zip(&m.assignment) {
        vectors[x.index()] = prepare_state(*s);
    }
    let enc = EncodingSet::from_pure(&game, vectors)?;
    report.time("interferometer", start.elapsed().as_secs_f64());
    report.interferometer = Some(Interferometer {
        assignment: m.assignment.iter().map(|x| x.to_string()).collect(),
        min_fidelity: m.min_fidelity,
    });
    report.tag("interferometer", "exhaustive");
    report.check("prepared_states", enc.po_violation(game.parity_set())?);
    Ok(report)
}

/// One row per (n, g) with 2 ≤ g ≤ n ≤ n_max; explicit where a family exists,
/// otherwise a small see-saw, otherwise the bound alone.
pub fn table(p: &Params, n_max: usize, method: Option<Method>) -> Result<Vec<GameReport>> {
    let mut out = Vec::new();
    for n in 2..=n_max {
        for g in 2..=n {
            let q = Params { n, g, ..p.clone() };
            let game = q.game()?;
            let mut report = GameReport::new(n, g, game.pnc_bound());
            let explicit_ok = method != Some(Method::Seesaw) && explicit_into(&game, &mut report).is_ok();
            if !explicit_ok && method != Some(Method::Explicit) {
                let dim = p.dim.unwrap_or(game.default_dim());
                if dim <= TABLE_SEESAW_MAX_DIM {
                    // Games without a supported ansatz are reported with the bound only.
                    let _ = seesaw_into(&game, &q, dim, &mut report);
                }
            }
            out.push(report);
        }
    }
    Ok(out)
}
