//! Scenario commands: each turns a configuration into a CSV table plus notes.

use std::f64::consts::TAU;

use spinheat::observables::{
    amplification, heat_currents, rectification, theta_sweep, tm_sweep, transient_currents, AmplificationMethod,
    HeatCurrents, SweepFlag, SweepRow, ThetaPolicy,
};
use spinheat::steadystate::{evolve, relaxation_rate, InitialState};
use spinheat::{Execution, System, SystemConfig};

use crate::error::{CliError, Result};
use crate::presets::{self, Preset};
use crate::table::{float, Table, SWEEP_HEADER};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    /// Eigenenergies and transition counts.
    Spectrum,
    /// Steady-state currents at the configured angle.
    Steady,
    /// Population and current transients from the configured initial state.
    Evolve,
    /// Steady currents versus field angle.
    SweepTheta,
    /// Steady currents versus middle temperature, with sign-change brackets.
    SweepTm,
    /// Amplification factors versus middle temperature.
    Transistor,
    /// Rectification versus left temperature.
    Diode,
    /// Invariant-subspace census.
    Subspaces,
}

/// A configuration plus the defaults a preset carries.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub config: SystemConfig,
    pub t_m_range: (f64, f64),
    pub t_l_range: (f64, f64),
    /// `--p` selects `p·e₁ + (1 − p)·e₅` instead of a subspace fraction.
    pub transient_mixture: bool,
}

impl Scenario {
    pub fn from_config(config: SystemConfig) -> Self {
        Scenario {
            config,
            t_m_range: (0.01, 3.0),
            t_l_range: (0.01, 3.0),
            transient_mixture: false,
        }
    }

    pub fn from_preset(preset: Preset) -> Self {
        Scenario {
            transient_mixture: preset.name.starts_with("fig4"),
            config: preset.config,
            t_m_range: preset.t_m_range,
            t_l_range: preset.t_l_range,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Options {
    pub kappa_m: Option<f64>,
    pub p: Option<f64>,
    pub theta: Option<f64>,
    pub grid: Option<usize>,
    pub range: Option<(f64, f64)>,
    pub method: AmplificationMethod,
    pub exec: Execution,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub table: Table,
    /// Human-readable findings (sign changes, census, populations).
    pub notes: Vec<String>,
    /// Set for `subspaces`: the component count printed on stdout.
    pub count: Option<usize>,
}

impl Report {
    fn new(table: Table) -> Self {
        Report {
            table,
            notes: Vec::new(),
            count: None,
        }
    }
}

/// `n` evenly spaced points including both ends.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect(),
    }
}

/// Applies the command-line overrides to the scenario's configuration.
pub fn effective_config(scenario: &Scenario, options: &Options) -> Result<SystemConfig> {
    let mut c = scenario.config.clone();
    if let Some(k) = options.kappa_m {
        c.reservoirs.kappa_m = k;
    }
    if let Some(theta) = options.theta {
        c.fields.theta = theta;
    }
    if let Some(p) = options.p {
        c.initial = if scenario.transient_mixture {
            presets::transient_initial(p)
        } else {
            InitialState::SubspaceFraction(p)
        };
    }
    c.validate()?;
    Ok(c)
}

fn grid(options: &Options, default_range: (f64, f64), default_n: usize) -> Result<Vec<f64>> {
    let (lo, hi) = options.range.unwrap_or(default_range);
    let n = options.grid.unwrap_or(default_n);
    if n < 2 {
        return Err(CliError::Usage(format!("--grid must be at least 2, got {n}")));
    }
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(CliError::Usage(format!("--range needs finite LO < HI, got {lo}..{hi}")));
    }
    Ok(linspace(lo, hi, n))
}

fn sweep_row(value: f64, q: &HeatCurrents, components: usize, flag: SweepFlag) -> Vec<String> {
    vec![
        float(value),
        float(q.q_l),
        float(q.q_m),
        float(q.q_r),
        components.to_string(),
        flag.as_str().to_string(),
    ]
}

fn sweep_table(rows: &[SweepRow]) -> Table {
    let mut t = Table::new(&SWEEP_HEADER);
    for r in rows {
        t.push(sweep_row(r.value, &r.currents, r.components, r.flag));
    }
    t
}

pub fn run(command: Command, scenario: &Scenario, options: &Options) -> Result<Report> {
    let config = effective_config(scenario, options)?;
    if let Some(msg) = System::new(&config)?.secular_warning() {
        log::warn!("{msg}");
    }
    match command {
        Command::Spectrum => spectrum(&config),
        Command::Steady => steady(&config),
        Command::Evolve => transient(&config, options),
        Command::SweepTheta => {
            let thetas = grid(options, (0.0, TAU), 721)?;
            let policy = options.p.map_or(ThetaPolicy::CarryPrevious, ThetaPolicy::FixedP);
            let rows = theta_sweep(&config, &thetas, policy, options.exec)?;
            Ok(Report::new(sweep_table(&rows)))
        }
        Command::SweepTm => {
            let t_ms = grid(options, scenario.t_m_range, 200)?;
            let sweep = tm_sweep(&config, &t_ms, options.exec)?;
            let mut report = Report::new(sweep_table(&sweep.rows));
            for s in &sweep.sign_changes {
                report.notes.push(format!(
                    "Q_M changes sign at T_M = {:.9} (bracket [{:.9}, {:.9}])",
                    s.critical(),
                    s.lower,
                    s.upper
                ));
            }
            Ok(report)
        }
        Command::Transistor => {
            let t_ms = grid(options, scenario.t_m_range, 200)?;
            let results = options.exec.try_map(&t_ms, |&t| amplification(&config, t, options.method))?;
            let mut t = Table::new(&["T_M", "alpha_L", "alpha_R", "dQ_M_dT_M", "defined"]);
            for a in &results {
                t.push(vec![
                    float(a.t_m),
                    float(a.alpha_l),
                    float(a.alpha_r),
                    float(a.dqm_dtm),
                    a.defined.to_string(),
                ]);
            }
            Ok(Report::new(t))
        }
        Command::Diode => {
            let t_ls = grid(options, scenario.t_l_range, 200)?;
            let results = options.exec.try_map(&t_ls, |&t_l| {
                let mut c = config.clone();
                c.reservoirs.t_l = t_l;
                rectification(&c)
            })?;
            let mut t = Table::new(&["T_L", "Q_forward", "Q_reverse", "R"]);
            for (t_l, r) in t_ls.iter().zip(&results) {
                t.push(vec![float(*t_l), float(r.q_forward), float(r.q_reverse), float(r.r)]);
            }
            Ok(Report::new(t))
        }
        Command::Subspaces => {
            let sys = System::new(&config)?;
            let d = sys.decomposition();
            let mut t = Table::new(&["component", "size", "levels"]);
            for (k, c) in d.components().iter().enumerate() {
                let levels: Vec<String> = c.iter().map(|i| (i + 1).to_string()).collect();
                t.push(vec![(k + 1).to_string(), c.len().to_string(), levels.join(" ")]);
            }
            let mut report = Report::new(t);
            report.count = Some(d.len());
            Ok(report)
        }
    }
}

fn spectrum(config: &SystemConfig) -> Result<Report> {
    let sys = System::new(config)?;
    let mut t = Table::new(&["level", "energy"]);
    for (i, e) in sys.spectrum.energies.iter().enumerate() {
        t.push(vec![(i + 1).to_string(), float(*e)]);
    }
    let mut report = Report::new(t);
    let counts: Vec<String> = spinheat::model::SpinLabel::ALL
        .iter()
        .map(|l| format!("{l}: {}", sys.transitions.for_reservoir(*l).len()))
        .collect();
    report.notes.push(format!("transitions per reservoir: {}", counts.join(", ")));
    Ok(report)
}

fn steady(config: &SystemConfig) -> Result<Report> {
    let sys = System::new(config)?;
    let steady = sys.steady_state()?;
    let q = heat_currents(&sys.rates, &sys.spectrum, &steady);
    let n = steady.decomposition.len();
    let flag = if n > 1 { SweepFlag::Decoupled } else { SweepFlag::None };
    let mut t = Table::new(&SWEEP_HEADER);
    t.push(sweep_row(config.fields.theta, &q, n, flag));
    let mut report = Report::new(t);
    let pops: Vec<String> = steady.populations().iter().map(|p| format!("{p:.6e}")).collect();
    report.notes.push(format!("steady populations: {}", pops.join(" ")));
    Ok(report)
}

fn transient(config: &SystemConfig, options: &Options) -> Result<Report> {
    let sys = System::new(config)?;
    let d = sys.decomposition();
    let initial = sys.initial_populations(&d)?;
    // log-spaced up to 50 slowest relaxation times
    let t_max = match relaxation_rate(&sys.rates.total, &d) {
        Some(rate) => 50.0 / rate,
        None => 1.0 / config.reservoirs.max_kappa(),
    };
    let n = options.grid.unwrap_or(200).max(2);
    let (lo, hi) = options.range.unwrap_or((t_max * 1e-6, t_max));
    if !(lo > 0.0 && lo < hi) {
        return Err(CliError::Usage(format!("--range needs 0 < LO < HI for evolve, got {lo}..{hi}")));
    }
    let mut times = vec![0.0];
    times.extend(linspace(lo.ln(), hi.ln(), n - 1).into_iter().map(f64::exp));
    let trajectory = evolve(&sys.rates.total, &d, &initial, &times)?;
    let currents = transient_currents(&sys.rates, &sys.spectrum, &trajectory);
    let mut header = vec!["t", "Q_L", "Q_M", "Q_R"];
    let labels: Vec<String> = (1..=8).map(|i| format!("p_{i}")).collect();
    header.extend(labels.iter().map(String::as_str));
    let mut t = Table::new(&header);
    for ((time, q), p) in times.iter().zip(&currents).zip(&trajectory) {
        let mut row = vec![float(*time), float(q.q_l), float(q.q_m), float(q.q_r)];
        row.extend(p.as_vector().iter().map(|x| float(*x)));
        t.push(row);
    }
    Ok(Report::new(t))
}

/// A gnuplot script plotting the sweep columns of `csv_path`.
pub fn plot_script(command: Command, csv_path: &str) -> String {
    let (xlabel, columns): (&str, &[(usize, &str)]) = match command {
        Command::SweepTheta => ("theta", &[(2, "Q_L"), (3, "Q_M"), (4, "Q_R")]),
        Command::SweepTm | Command::Steady => ("T_M", &[(2, "Q_L"), (3, "Q_M"), (4, "Q_R")]),
        Command::Evolve => ("t", &[(2, "Q_L"), (3, "Q_M"), (4, "Q_R")]),
        Command::Transistor => ("T_M", &[(2, "alpha_L"), (3, "alpha_R")]),
        Command::Diode => ("T_L", &[(4, "R")]),
        Command::Spectrum => ("level", &[(2, "energy")]),
        Command::Subspaces => ("component", &[(2, "size")]),
    };
    let mut s = String::from("set datafile separator ','\nset key autotitle columnhead\n");
    s.push_str(&format!("set xlabel '{xlabel}'\n"));
    if command == Command::Evolve {
        s.push_str("set logscale x\n");
    }
    let series: Vec<String> = columns
        .iter()
        .map(|(c, name)| format!("'{csv_path}' using 1:{c} with lines title '{name}'"))
        .collect();
    s.push_str(&format!("plot {}\n", series.join(", \\\n     ")));
    s
}
