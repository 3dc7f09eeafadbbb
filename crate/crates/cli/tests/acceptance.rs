//! End-to-end acceptance checks. Runs without the libtest harness so that the
//! one-line verdict per criterion always reaches the output.

use std::io::Write;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::Parser;
use rand::Rng;
use rayon::prelude::*;
use serde_json::Value;

use mmqkd::bounds::{analytic_rates, uncertainty_sum, verify_tradeoff};
use mmqkd::gf2::{Gf2Vector, LinearCode};
use mmqkd::protocol::{
    estimate, reconcile, run_session, sift, transmit, CodeSpec, ReconciliationCode, SessionConfig,
};
use mmqkd::quantum::{random_channel, random_density, Basis, NamedUnitary};
use mmqkd::rng::{derive_seed, stream};
use mmqkd::{Channel, Complex, PureState, Unitary};
use mmqkd_cli::{execute, Cli};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

/// Binary entropy in bits, evaluated through natural logs.
fn h2(p: f64) -> f64 {
    if p <= 0.0 || p >= 1.0 {
        return 0.0;
    }
    -(p * p.ln() + (1.0 - p) * (1.0 - p).ln()) / std::f64::consts::LN_2
}

fn cli(args: &[&str]) -> Result<(String, bool), String> {
    let parsed = Cli::try_parse_from(std::iter::once("mmqkd").chain(args.iter().copied()))
        .map_err(|e| e.to_string())?;
    let out = execute(&parsed).map_err(|e| format!("{e:#}"))?;
    Ok((out.text, out.success))
}

fn cli_json(args: &[&str]) -> Result<Value, String> {
    let (text, _) = cli(args)?;
    serde_json::from_str(&text).map_err(|e| format!("unparseable output: {e}"))
}

fn write_config(dir: &tempfile::TempDir, name: &str, body: &str) -> String {
    let path = dir.path().join(name);
    let mut f = std::fs::File::create(&path).expect("temp file");
    f.write_all(body.as_bytes()).expect("write config");
    path.to_string_lossy().into_owned()
}

fn f(v: &Value, key: &str) -> f64 {
    v[key].as_f64().unwrap_or(f64::NAN)
}

fn within_time(start: Instant, limit: Duration) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t < limit, format!("took {t:.2?}, limit {limit:?}"))
}

fn criterion_1() -> Check {
    let start = Instant::now();
    let b = cli_json(&["--format", "json", "bounds", r#"{"kind":"gamma","r_x":0,"r_z":0,"r_xz":0}"#])?;
    let (mis, mat) = (f(&b, "mismatched_bound"), f(&b, "matched_bound"));
    ensure((mis - 1.0).abs() <= 1e-9, format!("mismatched_bound {mis}"))?;
    ensure((mat + 1.0).abs() <= 1e-9, format!("matched_bound {mat}"))?;

    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let cfg = write_config(
        &dir,
        "run.json",
        r#"{"channel":{"kind":"gamma","r_x":0,"r_z":0,"r_xz":0},
            "session":{"count":4096,"code":{"kind":"random","block_len":16,"rate":0.75}}}"#,
    );
    let r = cli_json(&["run", &cfg, "--seed", "7"])?;
    ensure(f(&r, "q_hat_x") == 0.0 && f(&r, "q_hat_z") == 0.0, "nonzero estimate")?;
    ensure(r["abort_reason"].is_null(), format!("aborted: {}", r["abort_reason"]))?;
    let (a, bk) = (r["alice_key"].as_str(), r["bob_key"].as_str());
    ensure(a.is_some() && a == bk, "keys differ")?;
    let dim_c1 = r["code"]["dim_c1"].as_u64().unwrap_or(0) as usize;
    let len = a.unwrap().len();
    ensure(len == dim_c1 && len > 0, format!("key length {len} vs dim C1 {dim_c1}"))?;
    within_time(start, Duration::from_secs(5))?;
    Ok(format!(
        "bounds ({mis}, {mat}); key length {len} = dim C1; {:.2?}",
        start.elapsed()
    ))
}

fn criterion_2() -> Check {
    let terms = [(0.9, NamedUnitary::H), (0.1, NamedUnitary::I)];
    let ch = Channel::named_mixture(&terms).map_err(|e| e.to_string())?;
    let bound = verify_tradeoff(&ch).mismatched_bound;
    let oracle = 1.0 - 2.0 * h2(0.05);
    ensure((bound - oracle).abs() <= 1e-3, format!("bound {bound} vs {oracle}"))?;
    ensure((oracle - 0.4272).abs() < 1e-4, format!("oracle {oracle}"))?;

    let sessions = 200u64;
    let cfg = SessionConfig::new(8192, CodeSpec::Hamming { blocks: None });
    let estimates: Vec<(f64, f64)> = (0..sessions)
        .into_par_iter()
        .map(|s| {
            let r = run_session(&ch, &cfg, &mut stream(derive_seed(2, 0, s))).expect("session");
            (r.q_hat_x, r.q_hat_z)
        })
        .collect();
    let n = sessions as f64;
    let mut lines = Vec::new();
    for (name, xs) in [
        ("q_hat_x", estimates.iter().map(|e| e.0).collect::<Vec<_>>()),
        ("q_hat_z", estimates.iter().map(|e| e.1).collect()),
    ] {
        let mean = xs.iter().sum::<f64>() / n;
        let sd = (xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
        let tol = 3.0 * sd / n.sqrt();
        ensure(
            (mean - 0.05).abs() <= tol,
            format!("mean {name} {mean:.6} outside 0.05 ± {tol:.6}"),
        )?;
        lines.push(format!("{name} {mean:.5} ± {tol:.5}"));
    }
    Ok(format!("bound {bound:.6} vs oracle {oracle:.6}; {}", lines.join(", ")))
}

fn criterion_3() -> Check {
    let mut rng = stream(3);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let mut cuts = [rng.random::<f64>(), rng.random(), rng.random()];
        cuts.sort_by(f64::total_cmp);
        let (r_x, r_z, r_xz) = (cuts[0], cuts[1] - cuts[0], cuts[2] - cuts[1]);
        let ch = Channel::gamma(r_x, r_z, r_xz).map_err(|e| e.to_string())?;
        let rates = analytic_rates(&ch);
        worst = worst
            .max((rates.q_x - (r_x + r_xz)).abs())
            .max((rates.q_z - (r_z + r_xz)).abs());
    }
    ensure(worst <= 1e-12, format!("max deviation {worst:e}"))?;
    Ok(format!("100 triples, max deviation {worst:.1e}"))
}

/// Independent Born-rule rate: Σ_K |⟨φ|K|ψ⟩|².
fn oracle_probability(ops: &[Unitary], psi: [Complex; 2], phi: [Complex; 2]) -> f64 {
    ops.iter()
        .map(|k| {
            let kpsi = [
                k.m[0][0] * psi[0] + k.m[0][1] * psi[1],
                k.m[1][0] * psi[0] + k.m[1][1] * psi[1],
            ];
            (phi[0].conj() * kpsi[0] + phi[1].conj() * kpsi[1]).norm_sqr()
        })
        .sum()
}

fn oracle_pair_sums(ch: &Channel) -> [f64; 4] {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let c = |re: f64| Complex::new(re, 0.0);
    let zero = [c(1.0), c(0.0)];
    let one = [c(0.0), c(1.0)];
    let plus = [c(s), c(s)];
    let minus = [c(s), c(-s)];
    let ops = ch.to_kraus();
    let p = |psi, phi| oracle_probability(&ops, psi, phi);
    [
        h2(p(plus, minus)) + h2(p(plus, one)),
        h2(p(minus, plus)) + h2(p(minus, zero)),
        h2(p(zero, one)) + h2(p(zero, minus)),
        h2(p(one, zero)) + h2(p(one, plus)),
    ]
}

fn criterion_4() -> Check {
    let start = Instant::now();
    let mut rng = stream(4);
    let mut worst_f11 = f64::NEG_INFINITY;
    let mut min_pair = f64::INFINITY;
    let mut oracle_gap = 0.0f64;
    for i in 0..1000 {
        let ch: Channel = random_channel(&mut rng);
        ensure(matches!(ch, Channel::Kraus(_)), "not a Kraus channel")?;
        let r = verify_tradeoff(&ch);
        let ours = [r.lhs_f1, r.lhs_f2, r.lhs_f3, r.lhs_f4];
        let oracle = oracle_pair_sums(&ch);
        for (a, b) in ours.iter().zip(&oracle) {
            oracle_gap = oracle_gap.max((a - b).abs());
            min_pair = min_pair.min(*b);
        }
        worst_f11 = worst_f11.max(r.f11_sum);
        ensure(r.all_satisfied, format!("channel {i} violates the trade-off"))?;
    }
    ensure(min_pair >= 1.0 - 1e-9, format!("pair sum {min_pair}"))?;
    ensure(worst_f11 <= 1e-9, format!("f11 sum {worst_f11}"))?;
    ensure(oracle_gap <= 1e-9, format!("oracle gap {oracle_gap:e}"))?;
    for (name, ch) in [("identity", Channel::identity()), ("hadamard", Channel::hadamard())] {
        let s = verify_tradeoff(&ch).f11_sum;
        ensure(s.abs() <= 1e-9, format!("{name} f11 sum {s}"))?;
    }
    within_time(start, Duration::from_secs(30))?;
    Ok(format!(
        "min f1-f4 {min_pair:.6}, worst f11 {worst_f11:.6}, equality cases 0; {:.2?}",
        start.elapsed()
    ))
}

fn criterion_5() -> Check {
    let mut rng = stream(5);
    let mut min_sum = f64::INFINITY;
    let mut oracle_gap = 0.0f64;
    for _ in 0..10_000 {
        let rho = random_density::<f64, _>(&mut rng);
        let s = uncertainty_sum(&rho);
        let m = rho.matrix();
        let p0 = m.m[0][0].re;
        let p_plus = 0.5 * (m.m[0][0].re + m.m[1][1].re) + m.m[0][1].re;
        oracle_gap = oracle_gap.max((s - (h2(p0) + h2(p_plus))).abs());
        min_sum = min_sum.min(s);
    }
    ensure(min_sum >= 1.0 - 1e-9, format!("minimum sum {min_sum}"))?;
    ensure(oracle_gap <= 1e-9, format!("oracle gap {oracle_gap:e}"))?;
    let mut eig = 0.0f64;
    for basis in Basis::BOTH {
        for bit in [0, 1] {
            let s = uncertainty_sum(&PureState::basis_vector(basis, bit).density());
            eig = eig.max((s - 1.0).abs());
        }
    }
    ensure(eig <= 1e-6, format!("eigenstate deviation {eig}"))?;
    Ok(format!("10^4 states, min sum {min_sum:.6}, eigenstates within {eig:.1e}"))
}

fn criterion_6() -> Check {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut runs = 0;
    for (n, k1, k2) in [(2, 2, 1), (2, 1, 0), (3, 2, 1), (3, 3, 1), (4, 3, 1), (4, 2, 1), (4, 4, 2)] {
        let (text, ok) = cli(&[
            "css-verify",
            "--n",
            &n.to_string(),
            "--dim-c1",
            &k1.to_string(),
            "--dim-c2",
            &k2.to_string(),
            "--trials",
            "3",
            "--seed",
            "6",
        ])?;
        let v: Value = serde_json::from_str(&text).map_err(|e| e.to_string())?;
        for t in v["trials"].as_array().ok_or("missing trials")? {
            let pairs = t["pairs_checked"].as_u64().unwrap_or(0);
            ensure(pairs == 1 << (n + k1), format!("n={n}: {pairs} pairs checked"))?;
            worst = worst
                .max(f(t, "max_z_average_distance"))
                .max(f(t, "x_v_average_distance"));
        }
        ensure(ok, format!("css-verify failed at n={n}, dims ({k1},{k2})"))?;
        runs += 3;
    }
    ensure(worst <= 1e-10, format!("trace distance {worst:e}"))?;
    within_time(start, Duration::from_secs(60))?;
    Ok(format!("{runs} code pairs, max trace distance {worst:.1e}; {:.2?}", start.elapsed()))
}

fn criterion_7() -> Check {
    const BLOCKS: usize = 146;
    let ch = Channel::gamma(0.01, 0.0, 0.0).map_err(|e| e.to_string())?;
    let cfg = SessionConfig::new(10_000, CodeSpec::Hamming { blocks: Some(BLOCKS) });
    let code = ReconciliationCode::new(LinearCode::hamming_7_4(), BLOCKS).map_err(|e| e.to_string())?;
    ensure(code.len() == 1022, "tiled length")?;

    let per_session: Vec<Result<(usize, usize), String>> = (0..100u64)
        .into_par_iter()
        .map(|s| {
            let seed = derive_seed(7, 0, s);
            let r = run_session(&ch, &cfg, &mut stream(seed)).map_err(|e| e.to_string())?;
            let summary = r
                .code
                .as_ref()
                .ok_or_else(|| format!("session {s} stopped early: {:?}", r.abort_reason))?;
            ensure(summary.blocks == BLOCKS, format!("session {s}: {} blocks", summary.blocks))?;
            ensure(
                r.decode_success == (summary.blocks_decoded == BLOCKS),
                format!("session {s}: block count disagrees with decode_success"),
            )?;
            if r.decode_success {
                ensure(
                    r.alice_key.is_some() && r.alice_key == r.bob_key,
                    format!("session {s}: decode succeeded but keys differ"),
                )?;
            }

            // Recount block successes straight from freshly reconciled strings.
            let mut rng = stream(seed ^ 0x5eed);
            let batches = sift(&transmit(&ch, cfg.count, &mut rng));
            let est = estimate(&batches.mismatched_ab, 0.5, &mut rng).map_err(|e| e.to_string())?;
            let a = est.remaining_alice.slice(0, 1022);
            let b = est.remaining_bob.slice(0, 1022);
            let rec = reconcile(&a, &b, est.q_hat, &code).map_err(|e| e.to_string())?;
            let good = (0..BLOCKS)
                .filter(|i| a.slice(7 * i, 7 * i + 7) == rec.corrected_bob.slice(7 * i, 7 * i + 7))
                .count();
            Ok((summary.blocks_decoded, good))
        })
        .collect();
    let mut session_blocks = 0;
    let mut recount_blocks = 0;
    for res in per_session {
        let (d, g) = res?;
        session_blocks += d;
        recount_blocks += g;
    }
    let total = (100 * BLOCKS) as f64;
    let (rate, recount) = (session_blocks as f64 / total, recount_blocks as f64 / total);
    ensure(rate >= 0.95, format!("block success {rate:.4}"))?;
    ensure(recount >= 0.95, format!("recounted block success {recount:.4}"))?;
    Ok(format!(
        "block success {:.2}% (recount {:.2}%) over 100 sessions; keys equal on every success",
        100.0 * rate,
        100.0 * recount
    ))
}

fn criterion_8() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let cfg = write_config(
        &dir,
        "flip.json",
        r#"{"channel":{"kind":"unitary_mixture","terms":[{"p":1.0,"u":"HX"}]},
            "session":{"count":4096,"code":{"kind":"hamming"}}}"#,
    );
    let r = cli_json(&["run", &cfg, "--seed", "8"])?;
    ensure(f(&r, "q_hat_x") == 1.0, format!("q_hat_x {}", r["q_hat_x"]))?;
    ensure(f(&r, "q_hat_z") == 0.0, format!("q_hat_z {}", r["q_hat_z"]))?;
    ensure(r["flip_applied"] == Value::Bool(true), "no flip")?;
    ensure(r["decode_success"] == Value::Bool(true), "decoding failed")?;
    let code = &r["code"];
    ensure(code["blocks_decoded"] == code["blocks"], "some block needed correcting")?;
    let a = r["alice_key"].as_str().ok_or("no key")?;
    ensure(Some(a) == r["bob_key"].as_str(), "keys differ")?;
    let key: Gf2Vector = a.parse().map_err(|e: String| e)?;
    Ok(format!("q_hat_x = 1, flip applied, {}-bit keys agree", key.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("pure-Hadamard channel bounds and noiseless key", criterion_1),
        ("mismatched key-rate formula and estimator mean", criterion_2),
        ("gamma channel error rates", criterion_3),
        ("matched/mismatched trade-off", criterion_4),
        ("entropic uncertainty relation", criterion_5),
        ("CSS mixture identities", criterion_6),
        ("reconciliation correctness", criterion_7),
        ("bit-flip step", criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
