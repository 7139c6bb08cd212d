//! Reuse bound for a single parameter point, with the per-round trace.

use catlab::{ReuseBound, ThresholdConfig};

use crate::config::Settings;
use crate::error::CliError;
use crate::format::real;
use crate::sweep::{Protocol, SeriesResult, SweepSpec, Task};

/// Rounds shown past the guarded bound.
const TRACE_TAIL: u64 = 2;
const TRACE_CAP: u64 = 200;

fn single<T: Copy>(key: &str, values: &[T]) -> Result<T, CliError> {
    match values {
        [v] => Ok(*v),
        _ => Err(CliError::usage(format!("bounds takes a single {key}, got {} values", values.len()))),
    }
}

pub struct Report {
    pub protocol: Protocol,
    pub task: Task,
    pub result: SeriesResult,
    pub threshold: f64,
}

/// The settings need no `rounds`; the trace length follows from the bound.
pub fn compute(settings: &Settings) -> Result<Report, CliError> {
    let mut s = settings.clone();
    s.set("rounds", "1")?;
    let probe = SweepSpec::from_settings(&s)?;
    single("d", &probe.d)?;
    single("epsilon", &probe.epsilon)?;
    single("f-rho", &probe.f_rho)?;
    match probe.protocol {
        Protocol::Csla => {
            single("n", &probe.n)?;
            single("f-tau", &probe.f_tau)?;
        }
        Protocol::Esa => {
            single("m", &probe.m)?;
        }
    }
    let first = crate::sweep::run(&probe, 1)?.remove(0);
    let last = match first.bound {
        Some(b) => (b.rounds + TRACE_TAIL).min(TRACE_CAP),
        None => TRACE_TAIL + 1,
    }
    .max(1);
    s.set("rounds", format!("1..{last}"))?;
    let spec = SweepSpec::from_settings(&s)?;
    let result = crate::sweep::run(&spec, 1)?.remove(0);
    let series = result.series;
    let thr = ThresholdConfig::new(series.epsilon, series.f_rho, series.f_tau.unwrap_or(0.0))?;
    let threshold = match spec.task {
        Task::Distill => thr.epsilon(),
        Task::Teleport => catlab::teleport::effective_threshold(thr.epsilon(), catlab::HilbertDim::new(series.d as usize)?),
    };
    Ok(Report {
        protocol: spec.protocol,
        task: spec.task,
        result,
        threshold,
    })
}

fn describe(bound: &Option<ReuseBound>) -> Vec<String> {
    match bound {
        None => vec!["r_max: unbounded (the plateau gain clears the threshold)".into()],
        Some(b) => {
            let mut lines = Vec::new();
            if let Some(raw) = b.raw_value {
                lines.push(format!("raw formula: {}", real(raw)));
            }
            if let Some(floor) = b.raw_floor {
                let label = if b.raw_value.is_some() { "raw floor" } else { "unguarded scan" };
                lines.push(format!("{label}: {floor}"));
            }
            lines.push(format!("r_max: {}", b.rounds));
            lines.push(format!("differs: {}", if b.differs() { "yes" } else { "no" }));
            lines
        }
    }
}

impl std::fmt::Display for Report {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = &self.result.series;
        let size = match self.protocol {
            Protocol::Csla => format!("n={}", s.size),
            Protocol::Esa => format!("M={}", s.size),
        };
        let tau = s.f_tau.map(|t| format!(" f_tau={}", real(t))).unwrap_or_default();
        writeln!(
            f,
            "{} {}: d={} {size} epsilon={} f_rho={}{tau}",
            self.protocol.name(),
            self.task.name(),
            s.d,
            real(s.epsilon),
            real(s.f_rho)
        )?;
        writeln!(f, "threshold: {}", real(self.threshold))?;
        for line in describe(&self.result.bound) {
            writeln!(f, "{line}")?;
        }
        let quantity = match self.task {
            Task::Distill => "fidelity",
            Task::Teleport => "average fidelity",
        };
        writeln!(f, "round  {quantity:<16}  gain              clears")?;
        for row in &self.result.rows {
            writeln!(
                f,
                "{:>5}  {:<16}  {:<16}  {}",
                row.round,
                real(row.fidelity),
                real(row.gain),
                if row.clears { "yes" } else { "no" }
            )?;
        }
        Ok(())
    }
}
