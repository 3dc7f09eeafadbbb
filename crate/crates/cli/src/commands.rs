use anyhow::{bail, Context};
use serde::{Deserialize, Serialize};

use mmqkd::bounds::{uncertainty_sum, verify_tradeoff, TRADEOFF_SLACK};
use mmqkd::css::{verify_mixture_identities, MixtureReport, MAX_DENSITY_QUBITS};
use mmqkd::gf2::{sample_subcode, CosetLeaderTable, Gf2Vector, LinearCode};
use mmqkd::protocol::{run_session, SessionConfig, SessionResult};
use mmqkd::quantum::{random_channel, random_density, Basis, ChannelSpec};
use mmqkd::rng::{derive_seed, stream};
use mmqkd::{Channel, PureState, TradeoffReport};

use crate::output::{Cell, Table};

/// Contents of a `run` config file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub channel: ChannelSpec,
    pub session: SessionConfig,
}

pub fn build_channel(spec: &ChannelSpec) -> anyhow::Result<Channel> {
    spec.to_channel().context("invalid channel")
}

/// One session; `seed` overrides the seed stored in the config.
pub fn run(cfg: &RunConfig, seed: Option<u64>) -> anyhow::Result<SessionResult> {
    let ch = build_channel(&cfg.channel)?;
    cfg.session.validate().context("invalid session")?;
    let seed = seed.unwrap_or(cfg.session.seed);
    Ok(run_session(&ch, &cfg.session, &mut stream(seed))?)
}

pub const RUN_COLUMNS: [&str; 7] = [
    "q_hat_x",
    "q_hat_z",
    "flip_applied",
    "decode_success",
    "key_length",
    "abort_reason",
    "seed",
];

pub fn run_table(r: &SessionResult, seed: u64) -> Table {
    let mut t = Table::new(&RUN_COLUMNS);
    t.push(vec![
        r.q_hat_x.into(),
        r.q_hat_z.into(),
        r.flip_applied.into(),
        r.decode_success.into(),
        r.key_length.into(),
        r.abort_reason.map(|a| a.as_str()).into(),
        seed.into(),
    ]);
    t
}

pub fn bounds(spec: &ChannelSpec) -> anyhow::Result<TradeoffReport> {
    Ok(verify_tradeoff(&build_channel(spec)?))
}

pub const BOUNDS_COLUMNS: [&str; 16] = [
    "p_x_plus",
    "p_x_minus",
    "q_x0",
    "q_x1",
    "p_z0",
    "p_z1",
    "q_z_plus",
    "q_z_minus",
    "p_x",
    "p_z",
    "q_x",
    "q_z",
    "matched_bound",
    "mismatched_bound",
    "f11_sum",
    "all_satisfied",
];

pub fn bounds_table(report: &TradeoffReport) -> Table {
    let r = &report.rates;
    let mut t = Table::new(&BOUNDS_COLUMNS);
    let mut row: Vec<Cell> = [
        r.p_x_plus,
        r.p_x_minus,
        r.q_x0,
        r.q_x1,
        r.p_z0,
        r.p_z1,
        r.q_z_plus,
        r.q_z_minus,
        r.p_x,
        r.p_z,
        r.q_x,
        r.q_z,
        report.matched_bound,
        report.mismatched_bound,
        report.f11_sum,
    ]
    .into_iter()
    .map(Cell::from)
    .collect();
    row.push(report.all_satisfied.into());
    t.push(row);
    t
}

pub const CSS_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CssVerifyReport {
    pub seed: u64,
    pub tolerance: f64,
    pub trials: Vec<MixtureReport>,
    pub worst: f64,
    pub passed: bool,
}

impl CssVerifyReport {
    pub fn table(&self) -> Table {
        let mut t = Table::new(&[
            "trial",
            "n",
            "dim_c1",
            "dim_c2",
            "pairs_checked",
            "max_z_average_distance",
            "x_v_average_distance",
            "passed",
        ]);
        for (i, r) in self.trials.iter().enumerate() {
            t.push(vec![
                i.into(),
                r.n.into(),
                r.dim_c1.into(),
                r.dim_c2.into(),
                r.pairs_checked.into(),
                r.max_z_average_distance.into(),
                r.x_v_average_distance.into(),
                (r.worst() <= self.tolerance).into(),
            ]);
        }
        t
    }
}

/// Random nested codes `C2 ⊆ C1 ⊆ F₂ⁿ`, each checked exhaustively.
pub fn css_verify(
    n: usize,
    dim_c1: usize,
    dim_c2: usize,
    trials: usize,
    seed: u64,
) -> anyhow::Result<CssVerifyReport> {
    if n == 0 || n > MAX_DENSITY_QUBITS {
        bail!("n must lie in 1..={MAX_DENSITY_QUBITS}, got {n}");
    }
    if dim_c1 > n {
        bail!("dim_c1 must not exceed n = {n}, got {dim_c1}");
    }
    if dim_c2 > dim_c1 {
        bail!("dim_c2 must not exceed dim_c1 = {dim_c1}, got {dim_c2}");
    }
    if trials == 0 {
        bail!("trials must be at least 1");
    }
    let mut rng = stream(seed);
    let mut reports = Vec::with_capacity(trials);
    for _ in 0..trials {
        let c1 = LinearCode::random(n, dim_c1, &mut rng)?;
        let c2 = sample_subcode(&c1, dim_c2, &mut rng)?;
        reports.push(verify_mixture_identities(&c1, &c2)?);
    }
    let worst = reports.iter().map(MixtureReport::worst).fold(0.0, f64::max);
    Ok(CssVerifyReport {
        seed,
        tolerance: CSS_TOLERANCE,
        trials: reports,
        worst,
        passed: worst <= CSS_TOLERANCE,
    })
}

pub const SELFTEST_CHANNELS: usize = 1000;
pub const SELFTEST_STATES: usize = 10_000;
pub const UNCERTAINTY_SLACK: f64 = 1e-9;
pub const EIGENSTATE_TOL: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TradeoffSuite {
    pub channels: usize,
    pub violations: usize,
    pub worst_f11_sum: f64,
    pub min_pair_sum: f64,
    pub identity_f11_sum: f64,
    pub hadamard_f11_sum: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct UncertaintySuite {
    pub states: usize,
    pub violations: usize,
    pub min_sum: f64,
    pub eigenstate_max_deviation: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecoderSuite {
    pub codes: usize,
    pub syndromes: usize,
    pub mismatches: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SelftestReport {
    pub seed: u64,
    pub tradeoff: TradeoffSuite,
    pub uncertainty: UncertaintySuite,
    pub decoder: DecoderSuite,
    pub passed: bool,
}

impl SelftestReport {
    pub fn table(&self) -> Table {
        let mut t = Table::new(&["suite", "checked", "violations", "extreme"]);
        t.push(vec![
            "tradeoff".into(),
            self.tradeoff.channels.into(),
            self.tradeoff.violations.into(),
            self.tradeoff.worst_f11_sum.into(),
        ]);
        t.push(vec![
            "uncertainty".into(),
            self.uncertainty.states.into(),
            self.uncertainty.violations.into(),
            self.uncertainty.min_sum.into(),
        ]);
        t.push(vec![
            "decoder".into(),
            self.decoder.syndromes.into(),
            self.decoder.mismatches.into(),
            Cell::Null,
        ]);
        t
    }
}

pub fn tradeoff_suite(seed: u64, channels: usize) -> TradeoffSuite {
    let mut rng = stream(seed);
    let mut violations = 0;
    let mut worst = f64::NEG_INFINITY;
    let mut min_pair = f64::INFINITY;
    for _ in 0..channels {
        let report = verify_tradeoff(&random_channel::<f64, _>(&mut rng));
        violations += !report.all_satisfied as usize;
        worst = worst.max(report.f11_sum);
        min_pair = min_pair.min(report.min_pair_sum());
    }
    TradeoffSuite {
        channels,
        violations,
        worst_f11_sum: worst,
        min_pair_sum: min_pair,
        identity_f11_sum: verify_tradeoff(&Channel::identity()).f11_sum,
        hadamard_f11_sum: verify_tradeoff(&Channel::hadamard()).f11_sum,
    }
}

pub fn uncertainty_suite(seed: u64, states: usize) -> UncertaintySuite {
    let mut rng = stream(seed);
    let mut violations = 0;
    let mut min_sum = f64::INFINITY;
    for _ in 0..states {
        let s = uncertainty_sum(&random_density::<f64, _>(&mut rng));
        violations += (s < 1.0 - UNCERTAINTY_SLACK) as usize;
        min_sum = min_sum.min(s);
    }
    let eigenstate_max_deviation = Basis::BOTH
        .iter()
        .flat_map(|&b| [0, 1].map(|bit| PureState::basis_vector(b, bit)))
        .map(|psi| (uncertainty_sum(&psi.density()) - 1.0).abs())
        .fold(0.0, f64::max);
    UncertaintySuite {
        states,
        violations,
        min_sum,
        eigenstate_max_deviation,
    }
}

/// Minimum-weight preimage of every syndrome by exhaustive search, ties
/// broken by comparing bit sequences from entry 0.
fn brute_force_leaders(code: &LinearCode) -> Vec<Option<Gf2Vector>> {
    let h = code.parity_check();
    let r = h.nrows();
    let mut best: Vec<Option<(usize, Vec<u8>)>> = vec![None; 1 << r];
    for mask in 0..(1u64 << code.len()) {
        let e = Gf2Vector::from_mask(code.len(), mask);
        let s = h.mul_vec(&e).expect("matching width");
        let idx = s.iter().enumerate().fold(0usize, |acc, (i, b)| acc | ((b as usize) << i));
        let key = (e.weight(), e.to_bits());
        if best[idx].as_ref().is_none_or(|cur| key < *cur) {
            best[idx] = Some(key);
        }
    }
    best.into_iter()
        .map(|k| k.map(|(_, bits)| Gf2Vector::from_bits(bits)))
        .collect()
}

pub fn decoder_suite(seed: u64) -> DecoderSuite {
    let mut rng = stream(seed);
    let mut codes = vec![LinearCode::hamming_7_4(), LinearCode::repetition(5)];
    for n in 2..=10 {
        for k in 0..n {
            codes.push(LinearCode::random(n, k, &mut rng).expect("k < n"));
        }
    }
    let mut syndromes = 0;
    let mut mismatches = 0;
    for code in &codes {
        let table = CosetLeaderTable::new(code.parity_check()).expect("small code");
        let r = code.parity_check().nrows();
        for (idx, want) in brute_force_leaders(code).into_iter().enumerate() {
            let s = Gf2Vector::from_mask(r, idx as u64);
            syndromes += 1;
            if table.decode(&s).ok() != want {
                mismatches += 1;
            }
        }
    }
    DecoderSuite {
        codes: codes.len(),
        syndromes,
        mismatches,
    }
}

pub fn selftest(seed: u64) -> SelftestReport {
    let tradeoff = tradeoff_suite(derive_seed(seed, 0, 0), SELFTEST_CHANNELS);
    let uncertainty = uncertainty_suite(derive_seed(seed, 1, 0), SELFTEST_STATES);
    let decoder = decoder_suite(derive_seed(seed, 2, 0));
    let passed = tradeoff.violations == 0
        && tradeoff.worst_f11_sum <= TRADEOFF_SLACK
        && tradeoff.identity_f11_sum.abs() <= TRADEOFF_SLACK
        && tradeoff.hadamard_f11_sum.abs() <= TRADEOFF_SLACK
        && uncertainty.violations == 0
        && uncertainty.eigenstate_max_deviation <= EIGENSTATE_TOL
        && decoder.mismatches == 0;
    SelftestReport {
        seed,
        tradeoff,
        uncertainty,
        decoder,
        passed,
    }
}
