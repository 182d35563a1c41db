//! Plain-text run configuration: `[section]` headers and `key = value`
//! lines, `#` comments. Unknown sections or keys are rejected with the
//! offending line number. All defaults are in [`RunConfig::default`].

use crate::error::{Error, Result};
use crate::evolve::{EvolutionVariant, PhasePolicy};
use crate::params::StepOrdering;
use std::path::PathBuf;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EpsilonPolicy {
    /// eps = mass * dr (shrinks with the spacing).
    Proportional,
    /// Fixed eps; the implied mass is eps / dr.
    Fixed(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitialKind {
    Gaussian,
    PlaneWave,
    UnitComponent,
    Zero,
}

/// Initial-condition description in domain fractions; converted to lattice
/// cells per resolution.
#[derive(Debug, Clone, PartialEq)]
pub struct InitialSpec {
    pub kind: InitialKind,
    /// Packet center as a fraction of the domain (every axis).
    pub center: f64,
    /// Gaussian density standard deviation as a fraction of the domain.
    pub width: f64,
    /// Carrier momentum in whole modes per domain (k = 2 pi mode / length).
    pub momentum_mode: f64,
    /// Polarized spinor component.
    pub component: usize,
    /// Site index for `UnitComponent`.
    pub site: usize,
}

impl Default for InitialSpec {
    fn default() -> Self {
        InitialSpec {
            kind: InitialKind::Gaussian,
            center: 0.5,
            width: 1.0 / 16.0,
            momentum_mode: 2.0,
            component: 0,
            site: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Svg,
    Both,
}

/// One run description shared by the CLI subcommands.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub variant: EvolutionVariant,
    pub dimensionality: u8,
    /// Lattice edge sizes: one entry for single runs, an increasing
    /// power-of-two sweep for convergence studies.
    pub l_values: Vec<usize>,
    pub mass: f64,
    pub end_time: f64,
    pub epsilon_policy: EpsilonPolicy,
    pub phase_policy: PhasePolicy,
    pub initial: InitialSpec,
    pub observer_cadence: u64,
    pub out_dir: PathBuf,
    pub format: OutputFormat,
    pub threads: usize,
    pub seed: u64,
    /// Optional fitted-slope acceptance window for `converge`.
    pub slope_min: Option<f64>,
    pub slope_max: Option<f64>,
    /// Fault-injection hook for the equivalence suite's negative control.
    pub corrupt_gate_sign: bool,
    /// Lattice sizes for the complexity report.
    pub complexity_l: Vec<u64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            variant: EvolutionVariant::Basic,
            dimensionality: 1,
            l_values: vec![64],
            mass: 1.0,
            end_time: 0.25,
            epsilon_policy: EpsilonPolicy::Proportional,
            phase_policy: PhasePolicy::Phase,
            initial: InitialSpec::default(),
            observer_cadence: 0,
            out_dir: PathBuf::from("out"),
            format: OutputFormat::Csv,
            threads: 1,
            seed: 0,
            slope_min: None,
            slope_max: None,
            corrupt_gate_sign: false,
            complexity_l: vec![2, 4, 8, 64],
        }
    }
}

impl RunConfig {
    /// The ordering each variant is defined under.
    pub fn ordering(&self) -> StepOrdering {
        self.variant.required_ordering()
    }

    pub fn variant_with_phase(&self) -> EvolutionVariant {
        match self.variant {
            EvolutionVariant::Symmetrized(_) => EvolutionVariant::Symmetrized(self.phase_policy),
            v => v,
        }
    }
}

fn err(line: usize, msg: impl Into<String>) -> Error {
    Error::Config {
        line,
        msg: msg.into(),
    }
}

/// Parses the configuration text. Every key must belong to its section;
/// unknown keys and sections name the offending line.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let mut cfg = RunConfig::default();
    let mut section = String::from("run");
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('[') {
            let name = name
                .strip_suffix(']')
                .ok_or_else(|| err(line_no, "unterminated section header"))?;
            match name {
                "run" | "initial" | "output" | "parallel" | "equiv" | "complexity" => {
                    section = name.to_string();
                }
                other => return Err(err(line_no, format!("unknown section '{other}'"))),
            }
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| err(line_no, format!("expected key = value, got '{line}'")))?;
        let key = key.trim();
        let value = value.trim();
        apply_key(&mut cfg, &section, key, value, line_no)?;
    }
    validate(&cfg)?;
    Ok(cfg)
}

fn apply_key(
    cfg: &mut RunConfig,
    section: &str,
    key: &str,
    value: &str,
    line: usize,
) -> Result<()> {
    let bad_value = |what: &str| err(line, format!("invalid {what} '{value}' for key '{key}'"));
    match (section, key) {
        ("run", "variant") => {
            cfg.variant = match value {
                "basic" => EvolutionVariant::Basic,
                "interleaved" => EvolutionVariant::Interleaved,
                "symmetrized" => EvolutionVariant::Symmetrized(cfg.phase_policy),
                _ => return Err(bad_value("variant")),
            };
        }
        ("run", "dimensionality") => {
            cfg.dimensionality = match value {
                "1" => 1,
                "3" => 3,
                _ => return Err(bad_value("dimensionality (1 or 3)")),
            };
        }
        ("run", "l") => {
            cfg.l_values = vec![value.parse().map_err(|_| bad_value("lattice size"))?];
        }
        ("run", "l_sweep") => {
            cfg.l_values = value
                .split(',')
                .map(|v| v.trim().parse::<usize>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| bad_value("lattice sweep"))?;
        }
        ("run", "mass") => {
            cfg.mass = value.parse().map_err(|_| bad_value("mass"))?;
        }
        ("run", "end_time") => {
            cfg.end_time = value.parse().map_err(|_| bad_value("end time"))?;
        }
        ("run", "epsilon_policy") => {
            cfg.epsilon_policy = match value {
                "proportional" => EpsilonPolicy::Proportional,
                _ => return Err(bad_value("epsilon policy (proportional or use 'epsilon')")),
            };
        }
        ("run", "epsilon") => {
            let eps: f64 = value.parse().map_err(|_| bad_value("epsilon"))?;
            cfg.epsilon_policy = EpsilonPolicy::Fixed(eps);
        }
        ("run", "phase_policy") => {
            cfg.phase_policy = match value {
                "none" => PhasePolicy::None,
                "phase" => PhasePolicy::Phase,
                _ => return Err(bad_value("phase policy")),
            };
            if let EvolutionVariant::Symmetrized(_) = cfg.variant {
                cfg.variant = EvolutionVariant::Symmetrized(cfg.phase_policy);
            }
        }
        ("run", "slope_min") => {
            cfg.slope_min = Some(value.parse().map_err(|_| bad_value("slope bound"))?);
        }
        ("run", "slope_max") => {
            cfg.slope_max = Some(value.parse().map_err(|_| bad_value("slope bound"))?);
        }
        ("initial", "kind") => {
            cfg.initial.kind = match value {
                "gaussian" => InitialKind::Gaussian,
                "plane_wave" => InitialKind::PlaneWave,
                "unit" => InitialKind::UnitComponent,
                "zero" => InitialKind::Zero,
                _ => return Err(bad_value("initial kind")),
            };
        }
        ("initial", "center") => {
            cfg.initial.center = value.parse().map_err(|_| bad_value("center"))?;
        }
        ("initial", "width") => {
            cfg.initial.width = value.parse().map_err(|_| bad_value("width"))?;
        }
        ("initial", "momentum_mode") => {
            cfg.initial.momentum_mode = value.parse().map_err(|_| bad_value("momentum mode"))?;
        }
        ("initial", "component") => {
            cfg.initial.component = value.parse().map_err(|_| bad_value("component"))?;
        }
        ("initial", "site") => {
            cfg.initial.site = value.parse().map_err(|_| bad_value("site"))?;
        }
        ("output", "directory") => {
            cfg.out_dir = PathBuf::from(value);
        }
        ("output", "format") => {
            cfg.format = match value {
                "csv" => OutputFormat::Csv,
                "svg" => OutputFormat::Svg,
                "both" => OutputFormat::Both,
                _ => return Err(bad_value("format")),
            };
        }
        ("output", "observer_cadence") => {
            cfg.observer_cadence = value.parse().map_err(|_| bad_value("cadence"))?;
        }
        ("parallel", "threads") => {
            cfg.threads = value.parse().map_err(|_| bad_value("thread count"))?;
            if cfg.threads == 0 {
                return Err(bad_value("thread count (must be positive)"));
            }
        }
        ("parallel", "seed") => {
            cfg.seed = value.parse().map_err(|_| bad_value("seed"))?;
        }
        ("equiv", "corrupt_gate_sign") => {
            cfg.corrupt_gate_sign = match value {
                "true" => true,
                "false" => false,
                _ => return Err(bad_value("flag")),
            };
        }
        ("complexity", "l_list") => {
            cfg.complexity_l = value
                .split(',')
                .map(|v| v.trim().parse::<u64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| bad_value("lattice list"))?;
        }
        (sec, k) => {
            return Err(err(line, format!("unknown key '{k}' in section [{sec}]")));
        }
    }
    Ok(())
}

fn validate(cfg: &RunConfig) -> Result<()> {
    if cfg.l_values.is_empty() {
        return Err(Error::Usage("no lattice sizes given".into()));
    }
    if !(cfg.end_time > 0.0) {
        return Err(Error::Usage(format!(
            "end time must be positive, got {}",
            cfg.end_time
        )));
    }
    if cfg.l_values.len() > 1 {
        for w in cfg.l_values.windows(2) {
            if w[1] <= w[0] {
                return Err(Error::Usage(format!(
                    "lattice sweep must be strictly increasing, got {:?}",
                    cfg.l_values
                )));
            }
        }
        for &l in &cfg.l_values {
            if !l.is_power_of_two() {
                return Err(Error::Usage(format!(
                    "sweep sizes must be powers of two, got {l}"
                )));
            }
        }
    }
    Ok(())
}
