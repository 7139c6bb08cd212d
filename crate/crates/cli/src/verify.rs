//! Spot checks of the closed forms against the brute-force simulators.

use catlab::csla::{closed_form_coefficients, label_oracle, LabelDistribution};
use catlab::esa::{closed_form_fidelity, simulate_rounds_oracle, EmbezzlingSpec};
use catlab::quantum::{entanglement_fidelity, maximally_entangled_state};
use catlab::teleport::{avg_fidelity_from_ent_fidelity, haar_average_teleport_fidelity};
use catlab::{DensityMatrix, HilbertDim};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    Csla,
    Esa,
    Teleport,
    All,
}

impl Target {
    pub fn parse(s: &str) -> Result<Self, CliError> {
        match s {
            "csla" => Ok(Target::Csla),
            "esa" => Ok(Target::Esa),
            "teleport" => Ok(Target::Teleport),
            "all" => Ok(Target::All),
            _ => Err(CliError::usage(format!("verify target must be csla, esa, teleport or all, got {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub grid: String,
    pub worst: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl std::fmt::Display for Check {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{:<9} {:<48} worst {:.3e}  tol {:.1e}  {}",
            self.name,
            self.grid,
            self.worst,
            self.tolerance,
            if self.pass { "PASS" } else { "FAIL" }
        )
    }
}

fn dim(d: usize) -> HilbertDim {
    HilbertDim::new(d).expect("d >= 2")
}

/// Label oracle against the closed-form coefficients. Any mismatch counts as
/// deviation one.
pub fn csla() -> Result<Check, CliError> {
    let mut mismatches = 0usize;
    for n in 2..=5u64 {
        for snap in label_oracle(n, 5)? {
            let (r, t) = closed_form_coefficients(n, snap.round as u32)?;
            if snap.main != LabelDistribution::new(r, t) {
                mismatches += 1;
            }
        }
    }
    Ok(Check {
        name: "csla",
        grid: "n = 2..5, r = 1..5 (exact rationals)".into(),
        worst: mismatches as f64,
        tolerance: 0.0,
        pass: mismatches == 0,
    })
}

pub fn esa() -> Result<Check, CliError> {
    let mut worst = 0.0f64;
    for d in 2..=3 {
        for m in 1..=64 {
            let spec = EmbezzlingSpec::new(dim(d), m)?;
            for r in 1..=4 {
                let oracle = simulate_rounds_oracle(&spec, r)?.entanglement_fidelity();
                worst = worst.max((closed_form_fidelity(&spec, r)? - oracle).abs());
            }
        }
    }
    Ok(Check {
        name: "esa",
        grid: "d = 2..3, M = 1..64, r = 1..4".into(),
        worst,
        tolerance: 1e-10,
        pass: worst <= 1e-10,
    })
}

/// `p·φ⁺ + (1-p)·|00⟩⟨00|`, whose teleportation fidelity depends on the message.
fn skewed_resource(p: f64) -> Result<DensityMatrix, CliError> {
    let q = dim(2);
    let mut m = maximally_entangled_state(q).matrix().map(|z| z * p);
    m[(0, 0)] += 1.0 - p;
    Ok(DensityMatrix::new(m)?)
}

/// Haar Monte Carlo over skewed qubit resources. The tolerance is three
/// standard errors of the worst estimate.
pub fn teleport(seed: u64, samples: usize) -> Result<Check, CliError> {
    let mut worst = 0.0f64;
    let mut tolerance = 0.0f64;
    let mut pass = true;
    for (k, p) in [0.0, 0.4, 0.8, 1.0].into_iter().enumerate() {
        let resource = skewed_resource(p)?;
        let f = entanglement_fidelity(&resource, dim(2))?;
        let est = haar_average_teleport_fidelity(&resource, samples, seed.wrapping_add(k as u64))?;
        let dev = (est.mean - avg_fidelity_from_ent_fidelity(f, dim(2))).abs();
        let tol = (3.0 * est.std_error).max(1e-12);
        pass &= dev <= tol;
        worst = worst.max(dev);
        tolerance = tolerance.max(tol);
    }
    Ok(Check {
        name: "teleport",
        grid: format!("p = 0, 0.4, 0.8, 1; {samples} messages, seed {seed}"),
        worst,
        tolerance,
        pass,
    })
}

pub fn run(target: Target, seed: u64, samples: usize) -> Result<Vec<Check>, CliError> {
    let mut out = Vec::new();
    if matches!(target, Target::Csla | Target::All) {
        out.push(csla()?);
    }
    if matches!(target, Target::Esa | Target::All) {
        out.push(esa()?);
    }
    if matches!(target, Target::Teleport | Target::All) {
        out.push(teleport(seed, samples)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_forms_verify() {
        assert!(csla().unwrap().pass);
        assert!(esa().unwrap().pass);
    }

    #[test]
    fn teleport_is_seeded() {
        let a = teleport(7, 2000).unwrap();
        let b = teleport(7, 2000).unwrap();
        assert_eq!(a, b);
        assert!(a.pass);
    }

    #[test]
    fn targets() {
        assert_eq!(Target::parse("all").unwrap(), Target::All);
        assert!(Target::parse("bell").is_err());
    }
}
