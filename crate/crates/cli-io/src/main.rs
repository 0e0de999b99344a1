use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use cli_io::{commands, load_catalog, CliError, GenerateSource, GlueArgs, RenderArgs};
use glue_blend::Face;

/// Circle packings from Lorentz lattices.
#[derive(Parser)]
#[command(name = "pack", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// List the catalog or show one entry with live symmetry checks.
    Catalog {
        #[command(subcommand)]
        action: CatalogCmd,
    },
    /// Run every packing check for one n.
    Verify {
        n: String,
        #[arg(long)]
        bound: Option<String>,
    },
    /// Enumerate a packing and write its JSON document.
    Generate {
        #[arg(required_unless_present = "blend")]
        n: Option<String>,
        /// Blend descriptor file instead of a catalog n.
        #[arg(long, conflicts_with = "n")]
        blend: Option<PathBuf>,
        #[arg(long, default_value = "20")]
        bound: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Draw a packing document as SVG.
    Render {
        doc: PathBuf,
        /// x0,x1,y0,y1 in strip coordinates.
        #[arg(long, allow_hyphen_values = true)]
        window: Option<String>,
        #[arg(long)]
        out: PathBuf,
        /// Invert in the circle x,y[,r] before drawing.
        #[arg(long, allow_hyphen_values = true)]
        invert: Option<String>,
        /// Label circles with their curvature.
        #[arg(long)]
        labels: bool,
        #[arg(long)]
        stroke: Option<f64>,
        #[arg(long)]
        fill: Option<String>,
        #[arg(long)]
        width: Option<f64>,
    },
    /// Glue two catalog groups along a wall, or shift one wall.
    Glue {
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: Option<String>,
        #[arg(long, value_enum, requires = "right")]
        face: Option<FaceArg>,
        /// Move the left wall to x = -OFFSET instead of gluing.
        #[arg(long, allow_hyphen_values = true)]
        shift: Option<String>,
        #[arg(long, default_value = "20")]
        bound: String,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        descriptor: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum CatalogCmd {
    List {
        #[arg(long)]
        json: bool,
    },
    Show {
        n: String,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FaceArg {
    V1,
    V2,
}

fn run(cli: Cli, out: &mut dyn Write) -> Result<i32, CliError> {
    match cli.cmd {
        Cmd::Catalog { action } => {
            let cat = load_catalog()?;
            match action {
                CatalogCmd::List { json } => commands::cmd_catalog_list(&cat, json, out),
                CatalogCmd::Show { n, json } => commands::cmd_catalog_show(&cat, &n, json, out),
            }
        }
        Cmd::Verify { n, bound } => commands::cmd_verify(&load_catalog()?, &n, bound.as_deref(), out),
        Cmd::Generate { n, blend, bound, out: path } => {
            let source = match (n, blend) {
                (_, Some(f)) => GenerateSource::Blend(f),
                (Some(n), None) => GenerateSource::Lattice(n),
                (None, None) => return Err(CliError::BadInput("give n or --blend".into())),
            };
            commands::cmd_generate(&load_catalog()?, &source, &bound, &path, out)
        }
        Cmd::Render { doc, window, out: path, invert, labels, stroke, fill, width } => commands::cmd_render(
            &RenderArgs { doc, window, out: path, invert, labels, stroke, fill, width },
            out,
        ),
        Cmd::Glue { left, right, face, shift, bound, out: path, descriptor } => {
            let face = face.map(|f| match f {
                FaceArg::V1 => Face::V1,
                FaceArg::V2 => Face::V2,
            });
            let args = GlueArgs { left, right, face, shift, bound, out: path, descriptor };
            commands::cmd_glue(&load_catalog()?, &args, out)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    let code = match run(cli, &mut lock) {
        Ok(code) => code,
        Err(e) => {
            let _ = lock.flush();
            eprintln!("pack: {e}");
            e.exit_code()
        }
    };
    let _ = lock.flush();
    ExitCode::from(code as u8)
}
