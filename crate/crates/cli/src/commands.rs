use std::path::PathBuf;

use bp_core::linalg::{birkhoff_factor, iwasawa_factor, max_abs, principal_minors};
use bp_core::momentum::moment_values;
use bp_core::poisson::group::{su2_el_coefficients, su2_lw_coefficients};
use bp_core::poisson::jacobi::DEFAULT_FD_STEP;
use bp_core::poisson::local::{fothlu_w_chart, grassmann_real_matrix};
use bp_core::poisson::{jacobi_residual, BivectorOperator};
use bp_core::sample;
use bp_core::strata::{birkhoff_layer, leaf_factorize, torus_tw};
use bp_core::symspace::split_blocks;
use bp_core::CMatrix;
use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::{json, Value};

use crate::error::{CliError, CliResult};
use crate::grid::{rank_grid, Grid};
use crate::io;
use crate::preset::Preset;
use crate::verify::{self, Suite, VerifyConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Birkhoff,
    Iwasawa,
}

#[derive(Debug, Parser)]
#[command(name = "bp", version, about = "Poisson geometry of compact symmetric spaces as linear algebra")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// gr:m,n | cp1 | cpn:n | cp2 | su2 | group:su2 | fothlu
    #[arg(long, global = true)]
    pub preset: Option<String>,

    /// Absolute threshold for pivot and rank decisions.
    #[arg(long, global = true, default_value_t = bp_core::linalg::DEFAULT_TOL)]
    pub tol: f64,

    #[arg(long = "fd-step", global = true, default_value_t = DEFAULT_FD_STEP)]
    pub fd_step: f64,

    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// min,max,steps per real axis.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub grid: Option<String>,

    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Factor a square matrix, given as JSON rows of [re, im] entries.
    Factor {
        #[arg(long, value_enum, default_value_t = Mode::Birkhoff)]
        mode: Mode,
        #[command(flatten)]
        input: MatrixInput,
    },
    /// Same as `factor --mode iwasawa`.
    Iwasawa {
        #[command(flatten)]
        input: MatrixInput,
    },
    /// Cartan image, leading minors and Birkhoff layer of a point.
    Embed {
        #[arg(long)]
        point: String,
    },
    /// The bivector at a point.
    Pi {
        #[arg(long)]
        point: String,
    },
    /// Sweep rank and minors over a coordinate grid.
    RankGrid,
    /// Momentum map on the torus of the point's layer.
    Moment {
        #[arg(long)]
        point: String,
        /// Report only this basis vector of the torus.
        #[arg(long)]
        index: Option<usize>,
    },
    /// Run a verification suite.
    Verify {
        #[arg(value_enum, default_value_t = Suite::All)]
        suite: Suite,
    },
    /// Jacobi residual of the chart bivector at a point or at random points.
    Jacobi {
        /// Real coordinates as a JSON array of [re, im] entries.
        #[arg(long)]
        point: Option<String>,
        #[arg(long, default_value_t = 50)]
        samples: usize,
        #[arg(long, default_value_t = 1e-5)]
        threshold: f64,
    },
}

#[derive(Debug, clap::Args)]
#[group(required = true, multiple = false)]
pub struct MatrixInput {
    /// Inline JSON.
    #[arg(long)]
    pub matrix: Option<String>,
    /// JSON file.
    #[arg(long)]
    pub input: Option<PathBuf>,
}

impl MatrixInput {
    fn read(&self) -> CliResult<CMatrix> {
        let text = match (&self.matrix, &self.input) {
            (Some(m), _) => m.clone(),
            (None, Some(path)) => std::fs::read_to_string(path)?,
            (None, None) => return Err(CliError::Usage("pass --matrix or --input".into())),
        };
        io::parse_matrix(&text)
    }
}

/// Rendered result of a command and whether a verification failed.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub text: String,
    pub failed: bool,
}

impl Outcome {
    fn json(value: &Value) -> Self {
        let mut text = serde_json::to_string_pretty(value).expect("serializable");
        text.push('\n');
        Self { text, failed: false }
    }

    pub fn exit_code(&self) -> i32 {
        i32::from(self.failed)
    }
}

impl Cli {
    fn preset(&self) -> CliResult<Option<Preset>> {
        self.preset.as_deref().map(str::parse).transpose()
    }

    fn require_preset(&self) -> CliResult<Preset> {
        self.preset()?.ok_or_else(|| CliError::Usage("this command needs --preset".into()))
    }

    fn check_numbers(&self) -> CliResult<()> {
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(CliError::Usage(format!("--tol must be positive, got {}", self.tol)));
        }
        if !(self.fd_step > 0.0 && self.fd_step.is_finite()) {
            return Err(CliError::Usage(format!("--fd-step must be positive, got {}", self.fd_step)));
        }
        if self.format == Format::Csv && !matches!(self.command, Command::RankGrid) {
            return Err(CliError::Usage("--format csv is only available for rank-grid".into()));
        }
        Ok(())
    }
}

pub fn run(cli: &Cli) -> CliResult<Outcome> {
    cli.check_numbers()?;
    match &cli.command {
        Command::Factor { mode, input } => factor(&input.read()?, *mode, cli.tol),
        Command::Iwasawa { input } => factor(&input.read()?, Mode::Iwasawa, cli.tol),
        Command::Embed { point } => embed(cli.require_preset()?, &io::parse_vector(point)?, cli.tol),
        Command::Pi { point } => pi(cli.require_preset()?, &io::parse_vector(point)?, cli.tol),
        Command::RankGrid => {
            let preset = cli.require_preset()?;
            let grid: Grid = cli
                .grid
                .as_deref()
                .ok_or_else(|| CliError::Usage("rank-grid needs --grid".into()))?
                .parse()?;
            let g = rank_grid(preset, &grid, cli.tol)?;
            Ok(match cli.format {
                Format::Json => Outcome::json(&g.to_json()),
                Format::Csv => Outcome { text: g.to_csv(), failed: false },
            })
        }
        Command::Moment { point, index } => moment(cli.require_preset()?, &io::parse_vector(point)?, *index, cli.tol),
        Command::Verify { suite } => {
            let cfg = VerifyConfig { seed: cli.seed, tol: cli.tol, fd_step: cli.fd_step, preset: cli.preset()? };
            let report = verify::run(*suite, &cfg)?;
            let mut out = Outcome::json(&report.to_json());
            out.failed = !report.pass();
            Ok(out)
        }
        Command::Jacobi { point, samples, threshold } => {
            jacobi(cli.require_preset()?, point.as_deref(), *samples, *threshold, cli.seed, cli.fd_step)
        }
    }
}

pub fn factor(g: &CMatrix, mode: Mode, tol: f64) -> CliResult<Outcome> {
    let norm = g.norm();
    let value = match mode {
        Mode::Birkhoff => {
            let f = birkhoff_factor(g, tol)?;
            json!({
                "mode": "birkhoff",
                "l": io::matrix(&f.l),
                "w": {
                    "permutation": f.w.permutation(),
                    "signs": f.w.signs(),
                    "identity": f.w.is_identity(),
                    "matrix": io::matrix(&f.w.to_matrix()),
                },
                "h": f.h_diagonal().into_iter().map(io::complex).collect::<Vec<_>>(),
                "u_plus": io::matrix(&f.u_plus),
                "residual": max_abs(&(f.reconstruct() - g)),
                "relative_residual": max_abs(&(f.reconstruct() - g)) / norm,
            })
        }
        Mode::Iwasawa => {
            let f = iwasawa_factor(g, tol)?;
            json!({
                "mode": "iwasawa",
                "l": io::matrix(&f.l),
                "a": f.a.diagonal().iter().map(|z| z.re).collect::<Vec<_>>(),
                "u": io::matrix(&f.u),
                "residual": max_abs(&(f.reconstruct() - g)),
                "relative_residual": max_abs(&(f.reconstruct() - g)) / norm,
            })
        }
    };
    Ok(Outcome::json(&value))
}

fn layer_json(w: &bp_core::SignedPermutation) -> Value {
    json!({ "permutation": w.permutation(), "signs": w.signs(), "identity": w.is_identity() })
}

pub fn embed(preset: Preset, point: &[Complex64], tol: f64) -> CliResult<Outcome> {
    let space = preset.require_space()?;
    let u = preset.representative(point)?;
    let phi = space.cartan_embed(&u);
    let layer = match birkhoff_layer(&space, &u, tol) {
        Ok(w) => layer_json(&w),
        Err(bp_core::Error::StratumAmbiguous { .. }) => Value::String("ambiguous".into()),
        Err(e) => return Err(e.into()),
    };
    Ok(Outcome::json(&json!({
        "preset": preset.to_string(),
        "u": io::matrix(&u),
        "phi": io::matrix(&phi),
        "leading_minors": principal_minors(&phi).into_iter().map(io::complex).collect::<Vec<_>>(),
        "symmetry_residual": max_abs(&(phi.adjoint() - space.theta(&phi))),
        "layer": layer,
    })))
}

pub fn pi(preset: Preset, point: &[Complex64], tol: f64) -> CliResult<Outcome> {
    if preset == Preset::FothLu {
        if point.len() != 1 {
            return Err(CliError::Usage(format!("preset fothlu expects 1 complex entry, got {}", point.len())));
        }
        return Ok(Outcome::json(&json!({
            "preset": "fothlu",
            "coefficient": io::complex(fothlu_w_chart(point[0])),
            "rank": if fothlu_w_chart(point[0]).norm() > tol { 2 } else { 0 },
        })));
    }
    let space = preset.require_space()?;
    let u = preset.representative(point)?;
    let op = BivectorOperator::new(&space, &u);
    let mut value = json!({
        "preset": preset.to_string(),
        "omega": io::real_matrix(&op.matrix),
        "singular_values": op.singular_values(),
        "rank": op.rank(tol),
        "dim": space.dim_ip(),
    });
    match preset {
        Preset::Grassmannian { m, n } => {
            let z = CMatrix::from_row_slice(n, m, point);
            value["chart"] = io::real_matrix(&grassmann_real_matrix(&z));
        }
        Preset::Su2 | Preset::GroupSu2 => {
            let (k, _) = split_blocks(&u);
            value["el_coefficients"] = json!(su2_el_coefficients(&k));
            value["lw_coefficients"] = json!(su2_lw_coefficients(&k));
        }
        Preset::FothLu => unreachable!(),
    }
    Ok(Outcome::json(&value))
}

/// `μ` on the torus of the layer; points off the top layer are rejected.
pub fn moment(preset: Preset, point: &[Complex64], index: Option<usize>, tol: f64) -> CliResult<Outcome> {
    let space = preset.require_space()?;
    let u = preset.representative(point)?;
    let f = leaf_factorize(&space, &u, tol)?;
    if !f.w.is_identity() {
        return Err(CliError::Domain(format!("point lies on the lower layer w = {}", f.w)));
    }
    let mv = moment_values(&space, &u, tol)?;
    let dim = torus_tw(&mv.w, &space).len();
    let values = match index {
        Some(k) if k >= dim => return Err(CliError::Usage(format!("torus has dimension {dim}, index {k} is out of range"))),
        Some(k) => vec![mv.values[k]],
        None => mv.values.clone(),
    };
    Ok(Outcome::json(&json!({
        "preset": preset.to_string(),
        "layer": layer_json(&mv.w),
        "torus_dim": dim,
        "basis": mv.basis.iter().map(|x| x.diagonal().iter().map(|z| z.im).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "index": index,
        "values": values,
    })))
}

pub fn jacobi(
    preset: Preset,
    point: Option<&str>,
    samples: usize,
    threshold: f64,
    seed: u64,
    fd_step: f64,
) -> CliResult<Outcome> {
    let bivector = preset.coord_bivector()?;
    let dim = bivector.real_dim();
    let points: Vec<Vec<f64>> = match point {
        Some(text) => {
            let entries = io::parse_vector(text)?;
            if 2 * entries.len() != dim {
                return Err(CliError::Usage(format!("preset {preset} expects {} complex entries", dim / 2)));
            }
            vec![entries.iter().flat_map(|z| [z.re, z.im]).collect()]
        }
        None => {
            let mut rng = sample::rng(seed);
            (0..samples).map(|_| (0..dim).map(|_| 0.5 * sample::gaussian(&mut rng)).collect()).collect()
        }
    };
    let residuals: Vec<f64> = points.iter().map(|x| jacobi_residual(bivector.as_ref(), x, fd_step)).collect();
    let worst = residuals.iter().copied().fold(0.0, f64::max);
    let mut out = Outcome::json(&json!({
        "preset": preset.to_string(),
        "fd_step": fd_step,
        "points": points.len(),
        "max_residual": worst,
        "threshold": threshold,
        "pass": worst <= threshold,
    }));
    out.failed = !(worst <= threshold);
    Ok(out)
}
