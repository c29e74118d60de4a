//! `trop`: command-line front-end for the exact tropical Nevanlinna
//! engine. Exit codes: 0 = all assertions hold, 1 = an assertion failed,
//! 2 = input error.

mod commands;
mod emit;
mod gen;
mod parser;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use trop_core::corpus::RandomParams;
use trop_core::rational::{parse_rational, Rational};

use crate::commands::parse_grid_flag;
use crate::parser::{parse_document, InputDocument};

#[derive(Parser)]
#[command(name = "trop", version, about = "Exact max-plus Nevanlinna engine")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a declared function at a point or over a grid.
    Eval {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        name: String,
        #[arg(long, allow_hyphen_values = true)]
        at: Option<String>,
        #[arg(long)]
        grid: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Proximity, counting, and characteristic table over a radius grid.
    Nevanlinna {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        name: String,
        #[arg(long)]
        grid: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Verify the Jensen identity exactly over a radius grid.
    Jensen {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        name: String,
        #[arg(long)]
        grid: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// First-main-theorem residual of a curve against a hypersurface.
    Fmt {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        curve: String,
        #[arg(long)]
        poly: String,
        #[arg(long)]
        grid: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Second-main-theorem verification table for an instance block.
    Smt {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        instance: Option<String>,
        #[arg(long)]
        grid: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        c: Option<String>,
        #[arg(long)]
        tol: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// TP^1 second main theorems for a function against target values.
    Tp1smt {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        name: String,
        /// Comma-separated values: rationals, `-inf`, or `+inf`.
        #[arg(long, allow_hyphen_values = true)]
        values: String,
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        c: String,
        #[arg(long)]
        grid: String,
        #[arg(long, default_value = "1/20")]
        tol: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Defect series and tail limit for a curve against a hypersurface.
    Defect {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        curve: String,
        #[arg(long)]
        poly: String,
        #[arg(long)]
        grid: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Shortest representation lengths and degree of degeneracy.
    Ddg {
        #[arg(long)]
        input: PathBuf,
        /// Comma-separated basis function names.
        #[arg(long)]
        basis: String,
        /// Comma-separated member function names.
        #[arg(long)]
        members: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Symbolic tropical Casoratian of declared functions.
    Casoratian {
        #[arg(long)]
        input: PathBuf,
        /// Comma-separated function names.
        #[arg(long)]
        funcs: String,
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        c: String,
        #[arg(long)]
        grid: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tropical determinant of a declared matrix.
    Tropdet {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        mat: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate declaration files for the example families.
    Gen {
        /// One of e_alpha, e_beta, rational, random_curve, random_poly.
        family: String,
        #[arg(long, default_value = "gen")]
        name: String,
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        beta: Option<String>,
        /// Window as `lo,hi`.
        #[arg(long, allow_hyphen_values = true)]
        window: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        d: u32,
        #[arg(long, default_value_t = true)]
        full_support: bool,
        #[arg(long, default_value_t = 6)]
        max_breakpoints: usize,
        #[arg(long, default_value_t = 10)]
        span: i64,
        #[arg(long, default_value_t = 2)]
        denominator: i64,
        #[arg(long, default_value_t = 4)]
        magnitude: i64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn load(path: &PathBuf) -> Result<InputDocument> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_document(&text).map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))
}

fn opt_rational(s: &Option<String>) -> Result<Option<Rational>> {
    Ok(match s {
        Some(text) => Some(parse_rational(text)?),
        None => None,
    })
}

fn run() -> Result<bool> {
    if let Ok(threads) = std::env::var("TROP_THREADS") {
        let n: usize = threads
            .parse()
            .with_context(|| format!("TROP_THREADS must be a number, got `{threads}`"))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .ok();
    }
    let cli = Cli::parse();
    match cli.command {
        Command::Eval {
            input,
            name,
            at,
            grid,
            out,
        } => {
            let doc = load(&input)?;
            let at = opt_rational(&at)?;
            let grid = grid.as_deref().map(parse_grid_flag).transpose()?;
            commands::eval(&doc, &name, at.as_ref(), grid.as_deref(), out.as_deref())
        }
        Command::Nevanlinna {
            input,
            name,
            grid,
            out,
        } => {
            let doc = load(&input)?;
            commands::nevanlinna(&doc, &name, &parse_grid_flag(&grid)?, out.as_deref())
        }
        Command::Jensen {
            input,
            name,
            grid,
            out,
        } => {
            let doc = load(&input)?;
            commands::jensen(&doc, &name, &parse_grid_flag(&grid)?, out.as_deref())
        }
        Command::Fmt {
            input,
            curve,
            poly,
            grid,
            out,
        } => {
            let doc = load(&input)?;
            commands::fmt(&doc, &curve, &poly, &parse_grid_flag(&grid)?, out.as_deref())
        }
        Command::Smt {
            input,
            instance,
            grid,
            c,
            tol,
            out,
        } => {
            let doc = load(&input)?;
            let grid = grid.as_deref().map(parse_grid_flag).transpose()?;
            commands::smt(
                &doc,
                instance.as_deref(),
                grid.as_deref(),
                opt_rational(&c)?.as_ref(),
                opt_rational(&tol)?.as_ref(),
                out.as_deref(),
            )
        }
        Command::Tp1smt {
            input,
            name,
            values,
            c,
            grid,
            tol,
            out,
        } => {
            let doc = load(&input)?;
            commands::tp1smt(
                &doc,
                &name,
                &values,
                &parse_rational(&c)?,
                &parse_grid_flag(&grid)?,
                &parse_rational(&tol)?,
                out.as_deref(),
            )
        }
        Command::Defect {
            input,
            curve,
            poly,
            grid,
            out,
        } => {
            let doc = load(&input)?;
            commands::defect_cmd(&doc, &curve, &poly, &parse_grid_flag(&grid)?, out.as_deref())
        }
        Command::Ddg {
            input,
            basis,
            members,
            out,
        } => {
            let doc = load(&input)?;
            commands::ddg_cmd(&doc, &basis, &members, out.as_deref())
        }
        Command::Casoratian {
            input,
            funcs,
            c,
            grid,
            out,
        } => {
            let doc = load(&input)?;
            let grid = grid.as_deref().map(parse_grid_flag).transpose()?;
            commands::casoratian_cmd(
                &doc,
                &funcs,
                &parse_rational(&c)?,
                grid.as_deref(),
                out.as_deref(),
            )
        }
        Command::Tropdet { input, mat, out } => {
            let doc = load(&input)?;
            commands::tropdet_cmd(&doc, &mat, out.as_deref())
        }
        Command::Gen {
            family,
            name,
            alpha,
            beta,
            window,
            seed,
            count,
            n,
            d,
            full_support,
            max_breakpoints,
            span,
            denominator,
            magnitude,
            out,
        } => {
            let window = match window {
                Some(w) => {
                    let parts: Vec<&str> = w.split(',').collect();
                    if parts.len() != 2 {
                        anyhow::bail!("--window must be lo,hi");
                    }
                    Some((parse_rational(parts[0])?, parse_rational(parts[1])?))
                }
                None => None,
            };
            let opts = gen::GenOptions {
                family,
                name,
                alpha: opt_rational(&alpha)?,
                beta: opt_rational(&beta)?,
                window,
                seed,
                count,
                n,
                d,
                full_support,
                params: RandomParams {
                    max_breakpoints,
                    span,
                    denominator,
                    magnitude,
                },
            };
            let text = gen::generate(&opts)?;
            match out {
                Some(path) => std::fs::write(&path, &text)
                    .with_context(|| format!("writing {}", path.display()))?,
                None => print!("{text}"),
            }
            println!("gen {}: declarations written", opts.family);
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("error: one or more assertions failed");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
