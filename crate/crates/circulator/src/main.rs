//! Command-line front end reproducing the circulator observables: 4x4
//! transmission matrices, coupling scans, correlation traces and the
//! closed-form metrics.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use circulator::analytic::{self, CouplingBranch};
use circulator::config::{ParamsFile, UnitSystem};
use circulator::correlations;
use circulator::model::{self, AtomState, Fiber, ModelKind, PortSpec, SystemParams};
use circulator::observables::{self, Direction};
use circulator::output;
use circulator::scan;
use circulator::{Error, MHZ_TO_ANGULAR};

#[derive(Parser)]
#[command(
    name = "circulator",
    about = "Single-atom fiber-optical circulator simulator",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum AtomStateArg {
    #[value(name = "m+3")]
    MPlus3,
    #[value(name = "m-3")]
    MMinus3,
    #[value(name = "none")]
    None,
}

impl From<AtomStateArg> for AtomState {
    fn from(v: AtomStateArg) -> Self {
        match v {
            AtomStateArg::MPlus3 => AtomState::MPlus3,
            AtomStateArg::MMinus3 => AtomState::MMinus3,
            AtomStateArg::None => AtomState::NoAtom,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    Simplified,
    #[value(name = "two-mode")]
    TwoMode,
}

impl From<ModelArg> for ModelKind {
    fn from(v: ModelArg) -> Self {
        match v {
            ModelArg::Simplified => ModelKind::Simplified,
            ModelArg::TwoMode => ModelKind::TwoMode,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum UnitsArg {
    Mhz,
    Angular,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum DirectionArg {
    Forward,
    Backward,
}

#[derive(Args)]
struct CommonOpts {
    /// JSON parameter file; keys mirror the system parameter names.
    #[arg(long)]
    params: Option<PathBuf>,
    /// Working point kappa_tot / 2 kappa_0 under kappa_a = kappa_b + kappa_0.
    #[arg(long)]
    ratio: Option<f64>,
    /// Zeeman state operating the circulator.
    #[arg(long, value_enum)]
    atom_state: Option<AtomStateArg>,
    /// Fock truncation per resonator mode.
    #[arg(long)]
    nmax: Option<usize>,
    /// Drive amplitude, sqrt(photons/us).
    #[arg(long)]
    eps: Option<f64>,
    /// Unit system of numeric inputs.
    #[arg(long, value_enum, default_value = "mhz")]
    units: UnitsArg,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format.
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
}

impl CommonOpts {
    fn units(&self) -> UnitSystem {
        match self.units {
            UnitsArg::Mhz => UnitSystem::Mhz,
            UnitsArg::Angular => UnitSystem::Angular,
        }
    }

    fn resolve_params(&self) -> circulator::Result<SystemParams> {
        let file = match &self.params {
            Some(path) => ParamsFile::load(path)?,
            None => ParamsFile::default(),
        };
        let mut params = file.resolve(self.units())?;
        if let Some(ratio) = self.ratio {
            params = params.at_coupling_ratio(ratio)?;
        }
        if let Some(state) = self.atom_state {
            params.atom_state = state.into();
        }
        if let Some(nmax) = self.nmax {
            params.n_max = nmax;
        }
        if let Some(eps) = self.eps {
            params.epsilon = eps;
        } else if self.ratio.is_some() || self.atom_state.is_some() {
            params.epsilon = params.default_probe_epsilon();
        }
        params.validate()?;
        Ok(params)
    }

    fn emit(&self, text: String) -> circulator::Result<()> {
        match &self.out {
            Some(path) => std::fs::write(path, text)?,
            None => print!("{text}"),
        }
        Ok(())
    }
}

#[derive(Subcommand)]
enum Command {
    /// Transmission matrix and metrics at a working point.
    Matrix {
        #[command(flatten)]
        common: CommonOpts,
        /// Which model evaluates the matrix.
        #[arg(long, value_enum, default_value = "two-mode")]
        model: ModelArg,
        /// Ideal cycle the fidelity is computed against.
        #[arg(long, value_enum, default_value = "forward")]
        direction: DirectionArg,
    },
    /// Transmissions and metrics along the constrained coupling scan.
    Scan {
        #[command(flatten)]
        common: CommonOpts,
        #[arg(long, value_enum, default_value = "two-mode")]
        model: ModelArg,
        /// Lower edge of the ratio grid.
        #[arg(long, default_value_t = 1.1)]
        ratio_min: f64,
        /// Upper edge of the ratio grid.
        #[arg(long, default_value_t = 8.0)]
        ratio_max: f64,
        /// Number of log-spaced grid points.
        #[arg(long, default_value_t = 40)]
        points: usize,
    },
    /// Second-order correlation trace of one input -> output pair.
    G2 {
        #[command(flatten)]
        common: CommonOpts,
        #[arg(long)]
        input_port: u8,
        #[arg(long)]
        output_port: u8,
        /// Number of delay samples on [0, 5/kappa_tot].
        #[arg(long, default_value_t = 64)]
        tau_points: usize,
    },
    /// Closed-form transmissions and metrics.
    Analytic {
        #[command(flatten)]
        common: CommonOpts,
        /// Evaluate the state-of-the-art resonator preset
        /// (kappa_0 = 0.5, g = 30, kappa_a = kappa_b = 7.5 MHz).
        #[arg(long)]
        preset_state_of_the_art: bool,
    },
    /// Metrics of a 4x4 transmission matrix read from a CSV file.
    Metrics {
        /// CSV file with four comma-separated rows.
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "forward")]
        direction: DirectionArg,
    },
}

fn direction(v: DirectionArg) -> Direction {
    match v {
        DirectionArg::Forward => Direction::Forward,
        DirectionArg::Backward => Direction::Backward,
    }
}

fn run() -> circulator::Result<()> {
    let cli = Cli::parse();
    match cli.command {
        Command::Matrix { common, model, direction: dir } => {
            let params = common.resolve_params()?;
            let kind: ModelKind = model.into();
            let t = observables::transmission_matrix(&params, kind)?;
            let m = observables::metrics(&t, direction(dir));
            match common.format {
                FormatArg::Csv => common.emit(output::matrix_csv(&t))?,
                FormatArg::Json => {
                    common.emit(serde_json::to_string_pretty(&output::matrix_json(
                        &params, kind, &t, &m,
                    ))? + "\n")?;
                }
            }
            eprint!("{}", output::metrics_text(&m));
            Ok(())
        }
        Command::Scan { common, model, ratio_min, ratio_max, points } => {
            if !(ratio_min >= 1.0 && ratio_max > ratio_min && points >= 1) {
                return Err(Error::Config(format!(
                    "bad grid: ratio_min {ratio_min}, ratio_max {ratio_max}, points {points}"
                )));
            }
            let params = common.resolve_params()?;
            let kind: ModelKind = model.into();
            let grid: Vec<f64> = if points == 1 {
                vec![ratio_min]
            } else {
                (0..points)
                    .map(|k| {
                        (ratio_min.ln()
                            + (ratio_max.ln() - ratio_min.ln()) * k as f64 / (points - 1) as f64)
                            .exp()
                    })
                    .collect()
            };
            let result = scan::scan_coupling(&params, &grid, kind)?;
            let best = &result.points[result.optimum];
            match common.format {
                FormatArg::Csv => common.emit(output::scan_csv(&result))?,
                FormatArg::Json => {
                    common
                        .emit(serde_json::to_string_pretty(&output::scan_json(&params, kind, &result))? + "\n")?;
                }
            }
            eprintln!(
                "optimum: ratio {:.4}, fidelity {:.4}, eta {:.4}",
                best.ratio, best.metrics.fidelity, best.metrics.eta
            );
            Ok(())
        }
        Command::G2 { common, input_port, output_port, tau_points } => {
            if tau_points < 2 {
                return Err(Error::Config("tau_points must be >= 2".into()));
            }
            let mut params = common.resolve_params()?;
            // Correlation runs need the two-photon sector populated; keep
            // the probe weak but raise it above the transmission default
            // unless the user pinned epsilon explicitly.
            if common.eps.is_none() {
                params.epsilon = params.default_g2_epsilon();
            }
            let input = PortSpec::new(input_port)?;
            let m = model::build_two_mode(&params, input)?;
            let tau_max = correlations::default_tau_max(&params);
            let grid: Vec<f64> = (0..tau_points)
                .map(|k| tau_max * k as f64 / (tau_points - 1) as f64)
                .collect();
            let trace = correlations::g2(&m, output_port, &grid)?;
            match common.format {
                FormatArg::Csv => common.emit(output::g2_csv(&trace))?,
                FormatArg::Json => {
                    common.emit(serde_json::to_string_pretty(&output::g2_json(&params, &trace))? + "\n")?;
                }
            }
            eprintln!(
                "g2(0) = {:.4} for {} -> {} (normalization {:.3e})",
                trace.g2_zero, trace.input_port, trace.output_port, trace.normalization
            );
            Ok(())
        }
        Command::Analytic { common, preset_state_of_the_art } => {
            let params = if preset_state_of_the_art {
                let mut p = common.resolve_params()?;
                p.kappa_0 = 0.5 * MHZ_TO_ANGULAR;
                p.kappa_a = 7.5 * MHZ_TO_ANGULAR;
                p.kappa_b = 7.5 * MHZ_TO_ANGULAR;
                p.g = 30.0 * MHZ_TO_ANGULAR;
                p.gamma = 3.0 * MHZ_TO_ANGULAR;
                p.alpha = 0.97f64.sqrt();
                p.beta = 0.03f64.sqrt();
                p.epsilon = p.default_probe_epsilon();
                p
            } else {
                common.resolve_params()?
            };
            let units = common.units();
            let gamma_rate =
                analytic::atom_induced_rate(params.g * params.alpha, params.gamma, params.delta_al);
            let (t_trans_fw, t_cross_fw) =
                analytic::analytic_transmissions(&params, CouplingBranch::StrongCoupled, Fiber::A);
            let (t_trans_bw, t_cross_bw) =
                analytic::analytic_transmissions(&params, CouplingBranch::WeakCoupled, Fiber::A);
            let mut text = String::new();
            text.push_str(&format!(
                "Gamma_strong = {:.4} {} (Re), {:.4} (Im)\n",
                units.from_angular(gamma_rate.re),
                match units {
                    UnitSystem::Mhz => "MHz (omega/2pi)",
                    UnitSystem::Angular => "rad/us",
                },
                units.from_angular(gamma_rate.im),
            ));
            text.push_str(&format!(
                "T_trans (strong / weak) = {t_trans_fw:.4} / {t_trans_bw:.4}\n"
            ));
            text.push_str(&format!(
                "T_cross (strong / weak) = {t_cross_fw:.4} / {t_cross_bw:.4}\n"
            ));
            match analytic::analytic_metrics(&params) {
                Ok(m) => {
                    text.push_str(&format!("eta_fw = {:.4}\neta_bw = {:.4}\n", m.eta_fw, m.eta_bw));
                    text.push_str(&format!("fidelity = {:.4}\neta = {:.4}\n", m.fidelity, m.eta));
                }
                Err(Error::UnequalFiberCoupling { .. }) => {
                    text.push_str(
                        "eta/fidelity closed forms need kappa_a = kappa_b; skipped\n",
                    );
                }
                Err(e) => return Err(e),
            }
            common.emit(text)?;
            Ok(())
        }
        Command::Metrics { input, direction: dir } => {
            let text = std::fs::read_to_string(&input)?;
            let t = output::parse_matrix_csv(&text)?;
            let m = observables::metrics(&t, direction(dir));
            print!("{}", output::metrics_text(&m));
            Ok(())
        }
    }
}

/// Exit codes: 0 success, 2 configuration error, 3 solver error.
fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Config(_)
        | Error::InvalidParams(_)
        | Error::InvalidPort(_)
        | Error::RatioOutOfRange(_)
        | Error::Io(_)
        | Error::Json(_)
        | Error::UnequalFiberCoupling { .. }
        | Error::TruncationTooSmall { .. }
        | Error::TruncationTooLarge { .. }
        | Error::EmptyScan => 2,
        _ => 3,
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
