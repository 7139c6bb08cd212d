use std::io::Write;
use std::path::PathBuf;

use catlab::csla;
use catlab::esa::{self, EmbezzlingSpec};
use catlab::teleport::{
    avg_fidelity_from_ent_fidelity, effective_threshold, max_reuse_rounds_teleport_csla,
    max_reuse_rounds_teleport_esa,
};
use catlab::{Error, HilbertDim, ReuseBound, ThresholdConfig};
use rayon::prelude::*;

use crate::config::Settings;
use crate::error::CliError;
use crate::format::real;
use crate::grid::{parse_int, parse_real};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Protocol {
    Csla,
    Esa,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Task {
    Distill,
    Teleport,
}

impl Protocol {
    pub fn parse(s: &str) -> Result<Self, CliError> {
        match s {
            "csla" => Ok(Protocol::Csla),
            "esa" => Ok(Protocol::Esa),
            _ => Err(CliError::usage(format!("protocol must be csla or esa, got {s:?}"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Protocol::Csla => "csla",
            Protocol::Esa => "esa",
        }
    }
}

impl Task {
    pub fn parse(s: &str) -> Result<Self, CliError> {
        match s {
            "distill" => Ok(Task::Distill),
            "teleport" => Ok(Task::Teleport),
            _ => Err(CliError::usage(format!("task must be distill or teleport, got {s:?}"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Task::Distill => "distill",
            Task::Teleport => "teleport",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub protocol: Protocol,
    pub task: Task,
    pub d: Vec<u64>,
    /// Copy parameter grid (convex-split only).
    pub n: Vec<u64>,
    /// Schmidt rank grid (embezzling only).
    pub m: Vec<u64>,
    pub rounds: Vec<u64>,
    pub epsilon: Vec<f64>,
    pub f_rho: Vec<f64>,
    /// Catalyst constituent fidelity grid (convex-split only).
    pub f_tau: Vec<f64>,
    pub seed: u64,
    pub out: Option<PathBuf>,
}

fn required<'a>(s: &'a Settings, key: &str) -> Result<&'a str, CliError> {
    s.get(key)
        .ok_or_else(|| CliError::usage(format!("missing setting {}", key.replace('_', "-"))))
}

impl SweepSpec {
    pub fn from_settings(s: &Settings) -> Result<Self, CliError> {
        let protocol = Protocol::parse(required(s, "protocol")?)?;
        let task = Task::parse(required(s, "task")?)?;
        let d = parse_int("d", s.get("d").unwrap_or("2"))?;
        let rounds = parse_int("rounds", required(s, "rounds")?)?;
        let epsilon = parse_real("epsilon", s.get("epsilon").unwrap_or("0.05"))?;
        let f_rho = parse_real("f-rho", required(s, "f_rho")?)?;
        let (n, m, f_tau) = match protocol {
            Protocol::Csla => (
                parse_int("n", required(s, "n")?)?,
                Vec::new(),
                parse_real("f-tau", required(s, "f_tau")?)?,
            ),
            Protocol::Esa => (Vec::new(), parse_int("m", required(s, "m")?)?, Vec::new()),
        };
        let seed = match s.get("seed") {
            Some(v) => v.parse().map_err(|_| CliError::usage(format!("seed must be an integer, got {v:?}")))?,
            None => 0,
        };
        let spec = SweepSpec {
            protocol,
            task,
            d,
            n,
            m,
            rounds,
            epsilon,
            f_rho,
            f_tau,
            seed,
            out: s.get("out").map(PathBuf::from),
        };
        spec.validate()?;
        Ok(spec)
    }

    fn validate(&self) -> Result<(), CliError> {
        let usage = |msg: String| Err(CliError::Usage(msg));
        if self.d.iter().any(|&d| d < 2) {
            return usage("d must be at least 2".into());
        }
        if self.rounds.contains(&0) {
            return usage("rounds start at 1".into());
        }
        if self.epsilon.iter().any(|&e| !(e > 0.0 && e < 1.0)) {
            return usage("epsilon values must lie in (0, 1)".into());
        }
        if self.f_rho.iter().chain(&self.f_tau).any(|&f| !(0.0..=1.0).contains(&f)) {
            return usage("fidelities must lie in [0, 1]".into());
        }
        match self.protocol {
            Protocol::Csla => {
                if self.n.iter().any(|&n| n < 2) {
                    return usage("n must be at least 2".into());
                }
                for &a in &self.f_rho {
                    for &b in &self.f_tau {
                        if b <= a {
                            return usage(format!("catalyst never helps: F(tau) = {b} <= F(rho) = {a}"));
                        }
                    }
                }
            }
            Protocol::Esa => {
                if self.m.contains(&0) {
                    return usage("M must be at least 1".into());
                }
            }
        }
        Ok(())
    }

    /// One entry per series, i.e. every grid coordinate except the round.
    pub fn series(&self) -> Vec<Series> {
        let mut out = Vec::new();
        let sizes: &[u64] = match self.protocol {
            Protocol::Csla => &self.n,
            Protocol::Esa => &self.m,
        };
        let taus: Vec<Option<f64>> = match self.protocol {
            Protocol::Csla => self.f_tau.iter().map(|&t| Some(t)).collect(),
            Protocol::Esa => vec![None],
        };
        for &f_rho in &self.f_rho {
            for &f_tau in &taus {
                for &epsilon in &self.epsilon {
                    for &d in &self.d {
                        for &size in sizes {
                            out.push(Series {
                                d,
                                size,
                                epsilon,
                                f_rho,
                                f_tau,
                            });
                        }
                    }
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Series {
    pub d: u64,
    /// `n` or `M`.
    pub size: u64,
    pub epsilon: f64,
    pub f_rho: f64,
    pub f_tau: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub round: u64,
    pub fidelity: f64,
    pub gain: f64,
    pub clears: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeriesResult {
    pub series: Series,
    pub rows: Vec<Row>,
    /// `None` when reuse never stops.
    pub bound: Option<ReuseBound>,
}

pub const HEADER: [&str; 14] = [
    "protocol", "task", "d", "n", "m", "r", "epsilon", "f_rho", "f_tau", "fidelity", "gain", "clears", "r_max",
    "r_max_raw",
];

fn evaluate(spec: &SweepSpec, series: Series) -> Result<SeriesResult, CliError> {
    let d = HilbertDim::new(series.d as usize)?;
    let f_tau = series.f_tau.unwrap_or(0.0);
    let thr = ThresholdConfig::new(series.epsilon, series.f_rho, f_tau)?;
    // Rows compare the entanglement-fidelity gain against this threshold.
    let threshold = match spec.task {
        Task::Distill => series.epsilon,
        Task::Teleport => effective_threshold(series.epsilon, d),
    };
    let guard = thr.with_epsilon(threshold);
    let lift = |f: f64| match spec.task {
        Task::Distill => f,
        Task::Teleport => avg_fidelity_from_ent_fidelity(f, d),
    };
    let baseline = lift(series.f_rho);
    let mut rows = Vec::with_capacity(spec.rounds.len());
    let bound = match spec.protocol {
        Protocol::Csla => {
            let n = series.size;
            for &r in &spec.rounds {
                let ent_gain = csla::fidelity_gain(&thr, n, r);
                let fidelity = lift(series.f_rho + ent_gain);
                rows.push(Row {
                    round: r,
                    fidelity,
                    gain: fidelity - baseline,
                    clears: guard.clears(ent_gain),
                });
            }
            Some(match spec.task {
                Task::Distill => csla::max_reuse_rounds_distill(&thr, n)?,
                Task::Teleport => max_reuse_rounds_teleport_csla(&thr, n, d)?,
            })
        }
        Protocol::Esa => {
            let es = EmbezzlingSpec::new(d, series.size)?;
            let plateau = esa::plateau_start(series.d, series.size) as u64;
            for &r in &spec.rounds {
                // Past the plateau the closed form is constant.
                let f = esa::closed_form_fidelity(&es, r.min(plateau) as u32)?;
                let ent_gain = f - series.f_rho;
                let fidelity = lift(f);
                rows.push(Row {
                    round: r,
                    fidelity,
                    gain: fidelity - baseline,
                    clears: guard.clears(ent_gain),
                });
            }
            let bound = match spec.task {
                Task::Distill => esa::max_reuse_rounds_distill(&es, &thr),
                Task::Teleport => max_reuse_rounds_teleport_esa(&es, &thr),
            };
            match bound {
                Ok(b) => Some(b),
                Err(Error::UnboundedReuse { .. }) => None,
                Err(e) => return Err(e.into()),
            }
        }
    };
    Ok(SeriesResult { series, rows, bound })
}

/// Evaluates every series on a pool of `jobs` workers; results come back in
/// grid order.
pub fn run(spec: &SweepSpec, jobs: usize) -> Result<Vec<SeriesResult>, CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::usage(format!("cannot start {jobs} workers: {e}")))?;
    let series = spec.series();
    pool.install(|| series.par_iter().map(|&s| evaluate(spec, s)).collect())
}

pub fn write_csv<W: Write>(spec: &SweepSpec, results: &[SeriesResult], sink: W) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(HEADER)?;
    for res in results {
        let s = &res.series;
        let (n, m) = match spec.protocol {
            Protocol::Csla => (s.size.to_string(), String::new()),
            Protocol::Esa => (String::new(), s.size.to_string()),
        };
        let (r_max, r_raw) = match &res.bound {
            Some(b) => (
                b.rounds.to_string(),
                b.raw_value
                    .map(real)
                    .or_else(|| b.raw_floor.map(|v| v.to_string()))
                    .unwrap_or_default(),
            ),
            None => ("unbounded".to_string(), String::new()),
        };
        for row in &res.rows {
            w.write_record([
                spec.protocol.name().to_string(),
                spec.task.name().to_string(),
                s.d.to_string(),
                n.clone(),
                m.clone(),
                row.round.to_string(),
                real(s.epsilon),
                real(s.f_rho),
                s.f_tau.map(real).unwrap_or_default(),
                real(row.fidelity),
                real(row.gain),
                row.clears.to_string(),
                r_max.clone(),
                r_raw.clone(),
            ])?;
        }
    }
    w.flush().map_err(|source| CliError::Io {
        path: "output".into(),
        source,
    })?;
    Ok(())
}

/// Human summary: one line per series plus overall extremes.
pub fn summary(spec: &SweepSpec, results: &[SeriesResult]) -> String {
    let mut out = String::new();
    let size = match spec.protocol {
        Protocol::Csla => "n",
        Protocol::Esa => "M",
    };
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    let mut rows = 0;
    for res in results {
        let s = &res.series;
        let gains = res.rows.iter().map(|r| r.gain);
        let min = gains.clone().fold(f64::INFINITY, f64::min);
        let max = gains.fold(f64::NEG_INFINITY, f64::max);
        lo = lo.min(min);
        hi = hi.max(max);
        rows += res.rows.len();
        let first = res
            .rows
            .iter()
            .find(|r| !r.clears)
            .map(|r| format!("r={}", r.round))
            .unwrap_or_else(|| "none".into());
        let bound = match &res.bound {
            Some(b) if b.differs() => format!("{} (raw floor {})", b.rounds, b.raw_floor.unwrap_or_default()),
            Some(b) => b.rounds.to_string(),
            None => "unbounded".into(),
        };
        let tau = s.f_tau.map(|t| format!(" f_tau={}", real(t))).unwrap_or_default();
        out.push_str(&format!(
            "d={} {size}={} epsilon={} f_rho={}{tau}: gain [{}, {}], first violation {first}, r_max {bound}\n",
            s.d,
            s.size,
            real(s.epsilon),
            real(s.f_rho),
            real(min),
            real(max),
        ));
    }
    out.push_str(&format!(
        "{} {} sweep: {} series, {rows} rows, gain range [{}, {}], seed {}\n",
        spec.protocol.name(),
        spec.task.name(),
        results.len(),
        real(lo),
        real(hi),
        spec.seed
    ));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::preset;

    fn spec_from(pairs: &[(&str, &str)]) -> Result<SweepSpec, CliError> {
        let mut s = Settings::new();
        for (k, v) in pairs {
            s.set(k, *v).unwrap();
        }
        SweepSpec::from_settings(&s)
    }

    #[test]
    fn csla_rows() {
        let spec = spec_from(&[
            ("protocol", "csla"),
            ("task", "distill"),
            ("n", "4"),
            ("rounds", "1..6"),
            ("f_rho", "0.6"),
            ("f_tau", "0.8"),
        ])
        .unwrap();
        let res = run(&spec, 1).unwrap();
        assert_eq!(res.len(), 1);
        let rows = &res[0].rows;
        assert!((rows[1].gain - 0.1125).abs() < 1e-12);
        assert!(rows[3].clears && !rows[4].clears);
        assert_eq!(res[0].bound.as_ref().unwrap().rounds, 4);
    }

    #[test]
    fn teleport_rows_use_average_fidelity() {
        let spec = spec_from(&[
            ("protocol", "csla"),
            ("task", "teleport"),
            ("n", "4"),
            ("rounds", "2..4"),
            ("f_rho", "0.6"),
            ("f_tau", "0.8"),
        ])
        .unwrap();
        let res = run(&spec, 2).unwrap();
        assert!((res[0].rows[0].fidelity - 0.808_333_333_333_333).abs() < 1e-12);
        assert!(res[0].rows[1].clears && !res[0].rows[2].clears);
        assert_eq!(res[0].bound.as_ref().unwrap().rounds, 3);
    }

    #[test]
    fn esa_plateau_rows() {
        let spec = spec_from(&[
            ("protocol", "esa"),
            ("task", "distill"),
            ("m", "1000"),
            ("rounds", "9..14"),
            ("f_rho", "0.7"),
        ])
        .unwrap();
        let res = run(&spec, 1).unwrap();
        let f: Vec<f64> = res[0].rows.iter().map(|r| r.fidelity).collect();
        assert!(f[0] > 0.5 && f[1] > 0.5);
        assert!(f[2..].iter().all(|&x| x == 0.5));
    }

    #[test]
    fn unbounded_esa_series() {
        let spec = spec_from(&[
            ("protocol", "esa"),
            ("task", "distill"),
            ("m", "8"),
            ("rounds", "1..6"),
            ("f_rho", "0.2"),
        ])
        .unwrap();
        let res = run(&spec, 1).unwrap();
        assert!(res[0].bound.is_none());
        let mut buf = Vec::new();
        write_csv(&spec, &res, &mut buf).unwrap();
        assert!(String::from_utf8(buf).unwrap().contains(",unbounded,"));
    }

    #[test]
    fn validation() {
        let base = [("protocol", "csla"), ("task", "distill"), ("rounds", "1"), ("f_rho", "0.6")];
        let with = |extra: &[(&'static str, &'static str)]| {
            let mut v = base.to_vec();
            v.extend_from_slice(extra);
            spec_from(&v)
        };
        assert!(with(&[("f_tau", "0.8")]).is_err());
        assert!(with(&[("n", "1"), ("f_tau", "0.8")]).is_err());
        assert!(with(&[("n", "4"), ("f_tau", "0.5")]).is_err());
        assert!(with(&[("n", "4"), ("f_tau", "0.8"), ("epsilon", "1.5")]).is_err());
        assert!(with(&[("n", "4"), ("f_tau", "0.8"), ("d", "1")]).is_err());
        assert!(with(&[("n", "4"), ("f_tau", "0.8")]).is_ok());
    }

    #[test]
    fn presets_are_valid() {
        for p in preset::PRESETS {
            let spec = SweepSpec::from_settings(&p.settings()).unwrap();
            assert!(!spec.series().is_empty(), "{}", p.name);
        }
    }

    #[test]
    fn grid_order_is_independent_of_workers() {
        let settings = preset::find("fig-csla-distill").unwrap().settings();
        let spec = SweepSpec::from_settings(&settings).unwrap();
        let one = run(&spec, 1).unwrap();
        let many = run(&spec, 4).unwrap();
        assert_eq!(one, many);
    }
}
