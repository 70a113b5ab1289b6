//! Command-line sweeps and verification for mixed-state geometric phases in
//! the hydrogen hyperfine model. Emits deterministic CSV suitable for any
//! plotting tool.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, anyhow, bail};
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use offgp_core::holonomy::GpForm;
use offgp_core::hydrogen::mixedness_closed_form;
use offgp_core::quantum::{mixedness, thermal_state};
use offgp_core::sweep::{
    self, Preset, SweepPoint, SweepRecord, SweepSettings, evaluate_points, field_grid,
    temperature_grid, write_csv,
};

/// Exit code reserved for verification failures.
const EXIT_VERIFY_FAILED: u8 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "offgp",
    version,
    about = "Geometric-phase sweeps for a thermal two-spin system in an external field",
    after_help = "Exit codes: 0 success (nodal points allowed), 1 configuration error, \
                  3 verification failure."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sweep the phase over temperature at fixed field
    SweepTemp(SweepTempArgs),
    /// Sweep the phase over the field at fixed temperature
    SweepField(SweepFieldArgs),
    /// Evaluate a single parameter point
    Point(PointArgs),
    /// Verify numerical mixedness against the closed form
    Mixedness(MixednessArgs),
}

#[derive(Args, Debug)]
struct PhaseArgs {
    /// Hyperfine coupling J (nonzero)
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    j: f64,

    /// Phase order l
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=2))]
    order: u8,

    /// Family pair for order 2, two distinct 1-based indices
    #[arg(long, value_delimiter = ',', default_values_t = [1, 2])]
    pair: Vec<usize>,

    /// Trace functional: product | sum (point also accepts: both)
    #[arg(long, default_value = "product")]
    form: String,

    /// Cycle index n of the evolution period
    #[arg(long, default_value_t = 1)]
    n: u32,

    /// Ordered-exponential step count; closed-form transport when omitted
    #[arg(long)]
    steps: Option<usize>,

    /// Degeneracy clustering tolerance for the thermal spectrum
    #[arg(long, default_value_t = 1e-9)]
    cluster_tol: f64,

    /// Trace magnitudes below this are reported as nodal points
    #[arg(long, default_value_t = 1e-12)]
    nodal_tol: f64,

    /// Output file; stdout when omitted
    #[arg(long)]
    output: Option<PathBuf>,
}

impl PhaseArgs {
    /// Resolve order/pair/form into sweep settings; `allow_both` admits the
    /// point-only form=both, returning (settings, also_sum).
    fn settings(&self, allow_both: bool) -> anyhow::Result<(SweepSettings, bool)> {
        let (form, both) = match self.form.as_str() {
            "product" => (GpForm::Product, false),
            "sum" => (GpForm::Sum, false),
            "both" if allow_both => (GpForm::Product, true),
            "both" => bail!("--form both is only supported by the point subcommand"),
            other => bail!("--form must be product or sum, got '{other}'"),
        };
        let indices = match self.order {
            1 => vec![0],
            2 => {
                if self.pair.len() != 2 {
                    bail!("--pair needs exactly two indices");
                }
                let (a, b) = (self.pair[0], self.pair[1]);
                if a == b {
                    bail!("--pair indices must be distinct, got ({a}, {b})");
                }
                for v in [a, b] {
                    if !(1..=4).contains(&v) {
                        bail!("--pair indices must lie in 1..=4, got {v}");
                    }
                }
                vec![a - 1, b - 1]
            }
            other => bail!("--order must be 1 or 2, got {other}"),
        };
        if self.steps == Some(0) {
            bail!("--steps must be at least 1");
        }
        if self.cluster_tol.is_nan() || self.cluster_tol <= 0.0 {
            bail!("--cluster-tol must be positive");
        }
        if self.nodal_tol.is_nan() || self.nodal_tol < 0.0 {
            bail!("--nodal-tol must be nonnegative");
        }
        Ok((
            SweepSettings {
                indices,
                form,
                n: self.n,
                steps: self.steps,
                cluster_tol: self.cluster_tol,
                nodal_tol: self.nodal_tol,
            },
            both,
        ))
    }
}

#[derive(Args, Debug)]
struct SweepTempArgs {
    #[command(flatten)]
    phase: PhaseArgs,

    /// Fixed field C
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    c: f64,

    /// Temperature range start
    #[arg(long, default_value_t = 0.25)]
    t_min: f64,

    /// Temperature range end
    #[arg(long, default_value_t = 5.0)]
    t_max: f64,

    /// Number of temperature grid points
    #[arg(long, default_value_t = 100)]
    t_steps: usize,

    /// Canned figure sweep (fig1 or fig3); overrides grid, order and pair
    #[arg(long)]
    preset: Option<String>,
}

#[derive(Args, Debug)]
struct SweepFieldArgs {
    #[command(flatten)]
    phase: PhaseArgs,

    /// Fixed temperature T
    #[arg(long, default_value_t = 1.0)]
    temp: f64,

    /// Field range start
    #[arg(long, default_value_t = -3.0, allow_negative_numbers = true)]
    c_min: f64,

    /// Field range end
    #[arg(long, default_value_t = 3.0, allow_negative_numbers = true)]
    c_max: f64,

    /// Number of field grid points
    #[arg(long, default_value_t = 121)]
    c_steps: usize,

    /// Canned figure sweep (fig2 or fig4); overrides grid, order and pair
    #[arg(long)]
    preset: Option<String>,
}

#[derive(Args, Debug)]
struct PointArgs {
    #[command(flatten)]
    phase: PhaseArgs,

    /// Field C
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    c: f64,

    /// Temperature T
    #[arg(long, default_value_t = 1.0)]
    temp: f64,
}

#[derive(Args, Debug)]
struct MixednessArgs {
    /// Coupling grid, comma separated
    #[arg(long, value_delimiter = ',', default_values_t = vec![0.5, 1.0, 2.0])]
    j: Vec<f64>,

    /// Temperature range start; replaces the default grid when given
    #[arg(long)]
    t_min: Option<f64>,

    /// Temperature range end
    #[arg(long)]
    t_max: Option<f64>,

    /// Number of temperature grid points
    #[arg(long, default_value_t = 25)]
    t_steps: usize,

    /// Output file; stdout when omitted
    #[arg(long)]
    output: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            eprintln!("{e}");
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    match cli.command {
        Command::SweepTemp(args) => run_sweep_temp(args),
        Command::SweepField(args) => run_sweep_field(args),
        Command::Point(args) => run_point(args),
        Command::Mixedness(args) => run_mixedness(args),
    }
}

fn emit(output: &Option<PathBuf>, records: &[SweepRecord]) -> anyhow::Result<()> {
    match output {
        Some(path) => {
            let file = File::create(path)
                .with_context(|| format!("cannot create output file {}", path.display()))?;
            let mut w = BufWriter::new(file);
            write_csv(&mut w, records)?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut w = BufWriter::new(stdout.lock());
            write_csv(&mut w, records)?;
            w.flush()?;
        }
    }
    Ok(())
}

fn parse_preset(name: &str, want_temperature: bool) -> anyhow::Result<Preset> {
    let preset: Preset = name
        .parse()
        .map_err(|e: offgp_core::Error| anyhow!("{e}"))?;
    if preset.is_temperature_sweep() != want_temperature {
        let (got, cmd) = if want_temperature {
            (name, "sweep-field")
        } else {
            (name, "sweep-temp")
        };
        bail!("--preset {got} is a {cmd} preset; use that subcommand");
    }
    Ok(preset)
}

fn run_sweep_temp(args: SweepTempArgs) -> anyhow::Result<u8> {
    let (settings, points) = match &args.preset {
        Some(name) => parse_preset(name, true)?.plan(),
        None => {
            let (settings, both) = args.phase.settings(false)?;
            debug_assert!(!both);
            let points =
                temperature_grid(args.phase.j, &[args.c], args.t_min, args.t_max, args.t_steps)?;
            (settings, points)
        }
    };
    let records = evaluate_points(&points, &settings)?;
    emit(&args.phase.output, &records)?;
    Ok(0)
}

fn run_sweep_field(args: SweepFieldArgs) -> anyhow::Result<u8> {
    let (settings, points) = match &args.preset {
        Some(name) => parse_preset(name, false)?.plan(),
        None => {
            let (settings, both) = args.phase.settings(false)?;
            debug_assert!(!both);
            let points =
                field_grid(args.phase.j, &[args.temp], args.c_min, args.c_max, args.c_steps)?;
            (settings, points)
        }
    };
    let records = evaluate_points(&points, &settings)?;
    emit(&args.phase.output, &records)?;
    Ok(0)
}

fn run_point(args: PointArgs) -> anyhow::Result<u8> {
    let (settings, both) = args.phase.settings(true)?;
    let point = SweepPoint {
        // point rows use temperature as the sweep variable so they line up
        // with sweep-temp output
        sweep_var: args.temp,
        j: args.phase.j,
        c: args.c,
        t: args.temp,
    };
    let mut records = evaluate_points(&[point], &settings)?;
    if both {
        let sum_settings = SweepSettings {
            form: GpForm::Sum,
            ..settings
        };
        records.extend(evaluate_points(&[point], &sum_settings)?);
    }
    emit(&args.phase.output, &records)?;
    Ok(0)
}

/// Default temperature grid of the verification report.
const MIXEDNESS_T_GRID: [f64; 6] = [0.25, 0.5, 1.0, 2.0, 5.0, 10.0];

const MIXEDNESS_GRID_TOL: f64 = 1e-10;
const MIXEDNESS_LIMIT_TOL: f64 = 1e-8;

fn run_mixedness(args: MixednessArgs) -> anyhow::Result<u8> {
    let t_grid: Vec<f64> = match (args.t_min, args.t_max) {
        (Some(lo), Some(hi)) => sweep::linspace(lo, hi, args.t_steps)?,
        (None, None) => MIXEDNESS_T_GRID.to_vec(),
        _ => bail!("--t-min and --t-max must be given together"),
    };
    for &j in &args.j {
        if j == 0.0 {
            bail!("--j values must be nonzero");
        }
    }
    for &t in &t_grid {
        if t <= 0.0 {
            bail!("temperatures must be positive, got {t}");
        }
    }

    let mut report = String::new();
    report.push_str("mixedness verification\n");
    report.push_str(&format!("  J grid: {:?}\n", args.j));
    report.push_str(&format!("  T grid: {:?}\n", t_grid));

    let mut max_dev = 0.0f64;
    for &j in &args.j {
        for &t in &t_grid {
            let rho = thermal_state(&offgp_core::hydrogen::hyperfine_hamiltonian(j), 1.0 / t)?;
            let dev = (mixedness(&rho) - mixedness_closed_form(j, t)).abs();
            max_dev = max_dev.max(dev);
        }
    }
    let grid_pass = max_dev <= MIXEDNESS_GRID_TOL;
    report.push_str(&format!(
        "  max |numerical - closed form| = {max_dev:.3e} over {} points (tolerance {MIXEDNESS_GRID_TOL:.1e}): {}\n",
        args.j.len() * t_grid.len(),
        if grid_pass { "PASS" } else { "FAIL" },
    ));

    // high-temperature limit: the maximally mixed value 3/4
    let t_hot = 1e9;
    let closed_hot = mixedness_closed_form(1.0, t_hot);
    let rho_hot = thermal_state(&offgp_core::hydrogen::hyperfine_hamiltonian(1.0), 1.0 / t_hot)?;
    let numerical_hot = mixedness(&rho_hot);
    let limit_dev = (closed_hot - 0.75).abs().max((numerical_hot - 0.75).abs());
    let limit_pass = limit_dev <= MIXEDNESS_LIMIT_TOL;
    report.push_str(&format!(
        "  high-T limit at J=1, T=1e9: closed form = {closed_hot:.12}, numerical = {numerical_hot:.12}, \
         max |delta| vs 3/4 = {limit_dev:.3e} (tolerance {MIXEDNESS_LIMIT_TOL:.1e}): {}\n",
        if limit_pass { "PASS" } else { "FAIL" },
    ));

    report.push_str(&format!(
        "  closed form at J=1, T=1 = {:.12}\n",
        mixedness_closed_form(1.0, 1.0)
    ));

    let pass = grid_pass && limit_pass;
    report.push_str(if pass { "overall: PASS\n" } else { "overall: FAIL\n" });

    match &args.output {
        Some(path) => {
            let mut f = File::create(path)
                .with_context(|| format!("cannot create output file {}", path.display()))?;
            f.write_all(report.as_bytes())?;
        }
        None => print!("{report}"),
    }
    Ok(if pass { 0 } else { EXIT_VERIFY_FAILED })
}
