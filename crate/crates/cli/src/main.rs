//! `xrt`: forward projection, reconstruction and checks for piecewise
//! constant functions on convex Riemannian disks.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod error;
mod input;
mod render;

use error::CliError;

#[derive(Parser, Debug)]
#[command(name = "xrt", version, about = "Geodesic X-ray transform toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct SceneArgs {
    /// Scene file (metric, domain, foliation).
    #[arg(long)]
    pub scene: PathBuf,
    /// Tiling file; overrides the scene's `tiling` entry.
    #[arg(long)]
    pub tiling: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Layer,
    Global,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Tabulate the transform of a piecewise constant function.
    Forward {
        #[command(flatten)]
        scene: SceneArgs,
        /// Triangle values; overrides the scene's `values` entry.
        #[arg(long)]
        values: Option<PathBuf>,
        #[arg(long, default_value_t = 64)]
        ns: usize,
        #[arg(long, default_value_t = 32)]
        ntheta: usize,
        /// Output CSV.
        #[arg(long)]
        out: PathBuf,
        /// Standard deviation of Gaussian noise added to every integral.
        #[arg(long, default_value_t = 0.0)]
        noise: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Check every row against the bound |I| <= max|f| L and, for
        /// constant values c, against I = c L.
        #[arg(long)]
        self_check: bool,
    },
    /// Recover triangle values from a sinogram.
    Reconstruct {
        #[command(flatten)]
        scene: SceneArgs,
        #[arg(long)]
        sinogram: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Layer)]
        method: Method,
        /// Output values, one per line.
        #[arg(long)]
        out: PathBuf,
        /// Optional JSON report with per-level diagnostics.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Synthesize half-plane probe integrals and recover the cone values.
    ConeDemo {
        /// JSON file `{alphas, values, h, halfwidth}`.
        #[arg(long)]
        cone: PathBuf,
    },
    /// Scaled short-geodesic integrals at a boundary vertex.
    LimitCheck {
        #[command(flatten)]
        scene: SceneArgs,
        #[arg(long)]
        values: Option<PathBuf>,
        /// Index of the boundary vertex.
        #[arg(long)]
        vertex: usize,
        #[arg(long, value_delimiter = ',', default_values_t = vec![0.1, 0.05, 0.025, 0.0125])]
        hs: Vec<f64>,
        /// Angle of the probe direction from the inward normal, in degrees.
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        tilt: f64,
    },
    /// Draw the domain and tiling as SVG, optionally with sinogram rays.
    Render {
        #[command(flatten)]
        scene: SceneArgs,
        #[arg(long)]
        values: Option<PathBuf>,
        #[arg(long)]
        sinogram: Option<PathBuf>,
        /// Largest number of rays drawn from the sinogram.
        #[arg(long, default_value_t = 24)]
        rays: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Round-trip random functions through forward and both reconstructions.
    Verify {
        #[command(flatten)]
        scene: SceneArgs,
        #[arg(long, default_value_t = 10)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 64)]
        ns: usize,
        #[arg(long, default_value_t = 32)]
        ntheta: usize,
    },
    /// Write the built-in scenes, meshes and values to a directory.
    ExportFixtures {
        #[arg(long)]
        out: PathBuf,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Forward {
            scene,
            values,
            ns,
            ntheta,
            out,
            noise,
            seed,
            self_check,
        } => commands::forward(
            &scene,
            values.as_deref(),
            ns,
            ntheta,
            &out,
            noise,
            seed,
            self_check,
        ),
        Command::Reconstruct {
            scene,
            sinogram,
            method,
            out,
            report,
        } => commands::reconstruct(&scene, &sinogram, method, &out, report.as_deref()),
        Command::ConeDemo { cone } => commands::cone_demo(&cone),
        Command::LimitCheck {
            scene,
            values,
            vertex,
            hs,
            tilt,
        } => commands::limit_check(&scene, values.as_deref(), vertex, &hs, tilt),
        Command::Render {
            scene,
            values,
            sinogram,
            rays,
            out,
        } => commands::render(&scene, values.as_deref(), sinogram.as_deref(), rays, &out),
        Command::Verify {
            scene,
            trials,
            seed,
            ns,
            ntheta,
        } => commands::verify(&scene, trials, seed, ns, ntheta),
        Command::ExportFixtures { out } => commands::export_fixtures(&out),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
