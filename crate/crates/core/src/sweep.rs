//! Deterministic parameter sweeps of the hydrogen-model phase factors with
//! CSV output.
//!
//! Grid points are independent work items; with the `parallel` feature (on
//! by default) they are evaluated on a rayon pool, otherwise sequentially.
//! Results are assembled in grid order either way, and records are formatted
//! with fixed 12-significant-digit scientific notation, so identical
//! configurations produce byte-identical CSV no matter how they ran.

use std::io::{self, Write};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::holonomy::{
    DEFAULT_CLAMP_TOL, DEFAULT_DENSITY_CLUSTER_TOL, DEFAULT_NODAL_TOL, GpForm, GpOptions,
    diagonal_gp, noninterfering_family, off_diagonal_gp,
};
use crate::hydrogen::{
    ModelParams, canonical_eigenbasis, hyperfine_hamiltonian, period,
};
use crate::quantum::{decompose_density, mixedness, thermal_state};

/// Exact header of every CSV stream this module emits.
pub const CSV_HEADER: &str =
    "sweep_var,J,C,T,l,arg_gamma,re_gamma,im_gamma,magnitude_raw,nodal,mixedness";

/// Settings shared by every grid point of a sweep.
#[derive(Debug, Clone)]
pub struct SweepSettings {
    /// Zero-based family indices; the length is the phase order l.
    pub indices: Vec<usize>,
    pub form: GpForm,
    /// Cycle index of the evolution period.
    pub n: u32,
    /// Ordered-exponential step count; `None` uses the closed-form blocks.
    pub steps: Option<usize>,
    pub cluster_tol: f64,
    pub nodal_tol: f64,
}

impl Default for SweepSettings {
    fn default() -> Self {
        Self {
            indices: vec![0],
            form: GpForm::Product,
            n: 1,
            steps: None,
            cluster_tol: DEFAULT_DENSITY_CLUSTER_TOL,
            nodal_tol: DEFAULT_NODAL_TOL,
        }
    }
}

impl SweepSettings {
    pub fn order(&self) -> usize {
        self.indices.len()
    }
}

/// One grid point: the swept coordinate plus the full parameter triple.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub sweep_var: f64,
    pub j: f64,
    pub c: f64,
    pub t: f64,
}

/// One evaluated grid point. At nodal points the phase columns are NaN and
/// the flag is set; `magnitude_raw` stays finite.
#[derive(Debug, Clone, Copy)]
pub struct SweepRecord {
    pub sweep_var: f64,
    pub j: f64,
    pub c: f64,
    pub t: f64,
    pub l: usize,
    pub arg_gamma: f64,
    pub re_gamma: f64,
    pub im_gamma: f64,
    pub magnitude_raw: f64,
    pub nodal: bool,
    pub mixedness: f64,
}

/// 12 significant digits, scientific notation.
fn fmt(x: f64) -> String {
    format!("{x:.11e}")
}

impl SweepRecord {
    pub fn csv_row(&self) -> String {
        let (arg, re, im) = if self.nodal {
            ("NaN".to_string(), "NaN".to_string(), "NaN".to_string())
        } else {
            (fmt(self.arg_gamma), fmt(self.re_gamma), fmt(self.im_gamma))
        };
        format!(
            "{},{},{},{},{},{},{},{},{},{},{}",
            fmt(self.sweep_var),
            fmt(self.j),
            fmt(self.c),
            fmt(self.t),
            self.l,
            arg,
            re,
            im,
            fmt(self.magnitude_raw),
            self.nodal,
            fmt(self.mixedness)
        )
    }
}

/// Evaluate the configured phase factor and mixedness at one grid point.
pub fn evaluate_point(point: &SweepPoint, settings: &SweepSettings) -> Result<SweepRecord> {
    let params = ModelParams {
        j: point.j,
        c: point.c,
        d: 0.0,
        t: point.t,
        n: settings.n,
    };
    params.validate()?;
    let tau = period(&params)?;
    let h0 = hyperfine_hamiltonian(params.j);
    let h = params.total_hamiltonian();
    let rho0 = thermal_state(&h0, params.beta())?;
    let mix = mixedness(&rho0);

    let opts = GpOptions {
        form: settings.form,
        steps: settings.steps,
        cluster_tol: settings.cluster_tol,
        nodal_tol: settings.nodal_tol,
        clamp_tol: DEFAULT_CLAMP_TOL,
    };
    let phase = if settings.indices == [0] {
        diagonal_gp(&rho0, &h, tau, &opts)
    } else {
        let base = decompose_density(&rho0, opts.cluster_tol)?;
        let basis = canonical_eigenbasis();
        let family = noninterfering_family(&base, &basis, basis.len())?;
        off_diagonal_gp(&family, &settings.indices, &h, tau, &opts)
    };

    let record = match phase {
        Ok(p) => SweepRecord {
            sweep_var: point.sweep_var,
            j: point.j,
            c: point.c,
            t: point.t,
            l: settings.order(),
            arg_gamma: p.argument(),
            re_gamma: p.factor().re,
            im_gamma: p.factor().im,
            magnitude_raw: p.magnitude_raw(),
            nodal: false,
            mixedness: mix,
        },
        Err(Error::NodalPoint { magnitude }) => SweepRecord {
            sweep_var: point.sweep_var,
            j: point.j,
            c: point.c,
            t: point.t,
            l: settings.order(),
            arg_gamma: f64::NAN,
            re_gamma: f64::NAN,
            im_gamma: f64::NAN,
            magnitude_raw: magnitude,
            nodal: true,
            mixedness: mix,
        },
        Err(e) => return Err(e),
    };
    Ok(record)
}

/// Evaluate a grid in order, in parallel when the `parallel` feature is
/// enabled. Output order and content are independent of the execution mode.
pub fn evaluate_points(points: &[SweepPoint], settings: &SweepSettings) -> Result<Vec<SweepRecord>> {
    #[cfg(feature = "parallel")]
    {
        points
            .par_iter()
            .map(|p| evaluate_point(p, settings))
            .collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        evaluate_points_seq(points, settings)
    }
}

/// Sequential reference evaluation of the same grid.
pub fn evaluate_points_seq(
    points: &[SweepPoint],
    settings: &SweepSettings,
) -> Result<Vec<SweepRecord>> {
    points.iter().map(|p| evaluate_point(p, settings)).collect()
}

/// Uniform grid over [min, max] with `steps` >= 2 points, endpoints included.
pub fn linspace(min: f64, max: f64, steps: usize) -> Result<Vec<f64>> {
    if steps < 2 {
        return Err(Error::InvalidInput(format!(
            "range needs at least 2 steps, got {steps}"
        )));
    }
    if min.is_nan() || max.is_nan() || min >= max {
        return Err(Error::InvalidInput(format!(
            "range min must be below max, got [{min}, {max}]"
        )));
    }
    let span = max - min;
    let denom = (steps - 1) as f64;
    Ok((0..steps)
        .map(|i| {
            if i == steps - 1 {
                max
            } else {
                min + span * (i as f64 / denom)
            }
        })
        .collect())
}

/// Temperature-sweep grid: for each fixed C (outer, in the given order),
/// ascending T (inner); the swept variable is T.
pub fn temperature_grid(
    j: f64,
    c_values: &[f64],
    t_min: f64,
    t_max: f64,
    t_steps: usize,
) -> Result<Vec<SweepPoint>> {
    let ts = linspace(t_min, t_max, t_steps)?;
    let mut points = Vec::with_capacity(c_values.len() * ts.len());
    for &c in c_values {
        for &t in &ts {
            points.push(SweepPoint {
                sweep_var: t,
                j,
                c,
                t,
            });
        }
    }
    Ok(points)
}

/// Field-sweep grid: for each fixed T (outer, in the given order), ascending
/// C (inner); the swept variable is C. The period is recomputed per point.
pub fn field_grid(
    j: f64,
    t_values: &[f64],
    c_min: f64,
    c_max: f64,
    c_steps: usize,
) -> Result<Vec<SweepPoint>> {
    let cs = linspace(c_min, c_max, c_steps)?;
    let mut points = Vec::with_capacity(t_values.len() * cs.len());
    for &t in t_values {
        for &c in &cs {
            points.push(SweepPoint {
                sweep_var: c,
                j,
                c,
                t,
            });
        }
    }
    Ok(points)
}

/// Canned figure-regeneration sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// Order-1 phase vs temperature, T in [0.25, 5] x 100, C in {1, 2, 3}.
    Fig1,
    /// Order-1 phase vs field, C in [-3, 3] x 121, T in {1, 2, 3, 4}.
    Fig2,
    /// Order-2 phase (pair 1,2) on the Fig1 grid.
    Fig3,
    /// Order-2 phase (pair 1,2) on the Fig2 grid.
    Fig4,
}

impl std::str::FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fig1" => Ok(Preset::Fig1),
            "fig2" => Ok(Preset::Fig2),
            "fig3" => Ok(Preset::Fig3),
            "fig4" => Ok(Preset::Fig4),
            other => Err(Error::InvalidInput(format!(
                "unknown preset '{other}' (expected fig1..fig4)"
            ))),
        }
    }
}

impl Preset {
    pub fn is_temperature_sweep(&self) -> bool {
        matches!(self, Preset::Fig1 | Preset::Fig3)
    }

    /// The settings and grid of this preset (J = 1 throughout).
    pub fn plan(&self) -> (SweepSettings, Vec<SweepPoint>) {
        let indices = match self {
            Preset::Fig1 | Preset::Fig2 => vec![0],
            Preset::Fig3 | Preset::Fig4 => vec![0, 1],
        };
        let settings = SweepSettings {
            indices,
            ..SweepSettings::default()
        };
        let points = if self.is_temperature_sweep() {
            temperature_grid(1.0, &[1.0, 2.0, 3.0], 0.25, 5.0, 100).expect("valid preset grid")
        } else {
            field_grid(1.0, &[1.0, 2.0, 3.0, 4.0], -3.0, 3.0, 121).expect("valid preset grid")
        };
        (settings, points)
    }
}

/// Write the header plus one row per record, LF line endings.
pub fn write_csv<W: Write>(out: &mut W, records: &[SweepRecord]) -> io::Result<()> {
    out.write_all(CSV_HEADER.as_bytes())?;
    out.write_all(b"\n")?;
    for r in records {
        out.write_all(r.csv_row().as_bytes())?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

/// Render records to a CSV string.
pub fn csv_string(records: &[SweepRecord]) -> String {
    let mut buf = Vec::new();
    write_csv(&mut buf, records).expect("writing to memory cannot fail");
    String::from_utf8(buf).expect("records are ASCII")
}
