//! Parameter sweeps over a channel template.
//!
//! A spec names one or two channel parameters, each swept over an evenly
//! spaced grid. Every grid point runs `sessions_per_point` independent
//! sessions whose seeds are derived from `(base seed, point, session)`, so the
//! output does not depend on scheduling. Rows come out in grid order: the
//! first parameter varies slowest, sessions fastest.
//!
//! Parameter names:
//! - gamma channels: `r_x`, `r_z`, `r_xz`;
//! - two-term unitary mixtures: `p0` or `p1`, the weight of that term. The
//!   other term receives the complementary weight.

use std::path::PathBuf;

use anyhow::{anyhow, bail, Context};
use rayon::prelude::*;
use serde::Deserialize;

use mmqkd::bounds::verify_tradeoff;
use mmqkd::protocol::{run_session, SessionConfig, SessionResult};
use mmqkd::quantum::ChannelSpec;
use mmqkd::rng::{derive_seed, stream};
use mmqkd::{Channel, ChannelRates, TradeoffReport};

use crate::output::{Cell, Table};
use crate::Format;

pub const SWEEP_COLUMNS: [&str; 15] = [
    "param1",
    "param2",
    "p_x",
    "p_z",
    "q_x",
    "q_z",
    "matched_bound",
    "mismatched_bound",
    "q_hat_x",
    "q_hat_z",
    "flip_applied",
    "decode_success",
    "key_length",
    "abort_reason",
    "seed",
];

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepParam {
    pub name: String,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl SweepParam {
    /// Grid values; a single step yields just `start`.
    pub fn values(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.start];
        }
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| {
                if i + 1 == self.steps {
                    self.stop
                } else {
                    self.start + (self.stop - self.start) * i as f64 / last
                }
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub channel: ChannelSpec,
    pub params: Vec<SweepParam>,
    pub sessions_per_point: usize,
    pub session: SessionConfig,
    /// Base seed; `--seed` takes precedence, then this, then `session.seed`.
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub format: Option<Format>,
}

impl SweepSpec {
    pub fn validate(&self) -> anyhow::Result<()> {
        if self.params.is_empty() || self.params.len() > 2 {
            bail!("params must list one or two parameters, got {}", self.params.len());
        }
        if self.params.len() == 2 && self.params[0].name == self.params[1].name {
            bail!("params: parameter `{}` listed twice", self.params[0].name);
        }
        for (i, p) in self.params.iter().enumerate() {
            if p.steps == 0 {
                bail!("params[{i}].steps must be at least 1");
            }
            for (field, v) in [("start", p.start), ("stop", p.stop)] {
                if !(0.0..=1.0).contains(&v) {
                    bail!("params[{i}].{field} must lie in [0, 1], got {v}");
                }
            }
            set_param(&self.channel, &p.name, p.start)
                .with_context(|| format!("params[{i}].name"))?;
        }
        if self.sessions_per_point == 0 {
            bail!("sessions_per_point must be at least 1");
        }
        self.session.validate().context("session")?;
        Ok(())
    }

    /// Grid points in output order, each with its parameter values.
    pub fn grid(&self) -> Vec<(f64, Option<f64>)> {
        let first = self.params[0].values();
        match self.params.get(1) {
            None => first.into_iter().map(|a| (a, None)).collect(),
            Some(p2) => {
                let second = p2.values();
                first
                    .iter()
                    .flat_map(|&a| second.iter().map(move |&b| (a, Some(b))))
                    .collect()
            }
        }
    }

    pub fn channel_at(&self, point: (f64, Option<f64>)) -> anyhow::Result<Channel> {
        let mut spec = set_param(&self.channel, &self.params[0].name, point.0)?;
        if let (Some(p2), Some(v)) = (self.params.get(1), point.1) {
            spec = set_param(&spec, &p2.name, v)?;
        }
        spec.to_channel().map_err(|e| anyhow!("{e}"))
    }
}

/// Copy of `spec` with parameter `name` set to `value`.
pub fn set_param(spec: &ChannelSpec, name: &str, value: f64) -> anyhow::Result<ChannelSpec> {
    let mut out = spec.clone();
    match &mut out {
        ChannelSpec::Gamma { r_x, r_z, r_xz } => match name {
            "r_x" => *r_x = value,
            "r_z" => *r_z = value,
            "r_xz" => *r_xz = value,
            _ => bail!("unknown gamma parameter `{name}`; expected r_x, r_z or r_xz"),
        },
        ChannelSpec::UnitaryMixture { terms } => {
            if terms.len() != 2 {
                bail!("only two-term unitary mixtures can be swept, got {} terms", terms.len());
            }
            let i = match name {
                "p0" => 0,
                "p1" => 1,
                _ => bail!("unknown mixture parameter `{name}`; expected p0 or p1"),
            };
            terms[i].p = value;
            terms[1 - i].p = 1.0 - value;
        }
        ChannelSpec::Kraus { .. } => bail!("kraus channels have no sweepable parameters"),
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub param1: f64,
    pub param2: Option<f64>,
    pub rates: ChannelRates,
    pub matched_bound: f64,
    pub mismatched_bound: f64,
    pub result: SessionResult,
    pub seed: u64,
}

impl SweepRow {
    pub fn cells(&self) -> Vec<Cell> {
        let r = &self.result;
        vec![
            self.param1.into(),
            self.param2.into(),
            self.rates.p_x.into(),
            self.rates.p_z.into(),
            self.rates.q_x.into(),
            self.rates.q_z.into(),
            self.matched_bound.into(),
            self.mismatched_bound.into(),
            r.q_hat_x.into(),
            r.q_hat_z.into(),
            r.flip_applied.into(),
            r.decode_success.into(),
            r.key_length.into(),
            r.abort_reason.map(|a| a.as_str()).into(),
            self.seed.into(),
        ]
    }
}

/// All rows of a sweep, in grid order.
pub fn rows(spec: &SweepSpec, seed: Option<u64>) -> anyhow::Result<Vec<SweepRow>> {
    spec.validate()?;
    let base = seed.or(spec.seed).unwrap_or(spec.session.seed);
    let points = spec.grid();
    let mut analytic = Vec::with_capacity(points.len());
    for (i, &pt) in points.iter().enumerate() {
        let ch = spec
            .channel_at(pt)
            .with_context(|| format!("grid point {i} {pt:?}"))?;
        let report: TradeoffReport = verify_tradeoff(&ch);
        analytic.push((ch, report));
    }
    let jobs: Vec<(usize, usize)> = (0..points.len())
        .flat_map(|p| (0..spec.sessions_per_point).map(move |s| (p, s)))
        .collect();
    jobs.par_iter()
        .map(|&(p, s)| {
            let (ch, report) = &analytic[p];
            let seed = derive_seed(base, p as u64, s as u64);
            let result = run_session(ch, &spec.session, &mut stream(seed))
                .with_context(|| format!("grid point {p}, session {s}"))?;
            Ok(SweepRow {
                param1: points[p].0,
                param2: points[p].1,
                rates: report.rates,
                matched_bound: report.matched_bound,
                mismatched_bound: report.mismatched_bound,
                result,
                seed,
            })
        })
        .collect()
}

pub fn run(spec: &SweepSpec, seed: Option<u64>) -> anyhow::Result<Table> {
    let mut table = Table::new(&SWEEP_COLUMNS);
    for row in rows(spec, seed)? {
        table.push(row.cells());
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_values_hit_both_ends() {
        let p = SweepParam {
            name: "p0".into(),
            start: 1.0,
            stop: 0.5,
            steps: 6,
        };
        let v = p.values();
        assert_eq!(v.len(), 6);
        assert_eq!(v[0], 1.0);
        assert_eq!(v[5], 0.5);
        assert!((v[1] - 0.9).abs() < 1e-15);
    }

    #[test]
    fn mixture_weight_keeps_the_simplex() {
        let spec: ChannelSpec = serde_json::from_str(
            r#"{"kind":"unitary_mixture","terms":[{"p":0.5,"u":"H"},{"p":0.5,"u":"I"}]}"#,
        )
        .unwrap();
        let ChannelSpec::UnitaryMixture { terms } = set_param(&spec, "p0", 0.8).unwrap() else {
            panic!("kind changed");
        };
        assert_eq!(terms[0].p, 0.8);
        assert!((terms[1].p - 0.2).abs() < 1e-15);
        assert!(set_param(&spec, "r_x", 0.1).is_err());
    }
}
