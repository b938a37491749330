//! Command-line surface of the `fanstate` binary.

use std::f64::consts::PI;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fanstate_core::{GridBounds, Outcome, TauOrder, C64};

#[derive(Debug, Parser)]
#[command(name = "fanstate", version, about = "Fan-state generation by atoms passing a cavity")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the velocity-selected fan schedule and report the conditional field state.
    Generate(GenerateArgs),
    /// Probability curves: single-atom (fig3), P1 (fig4), P_k (fig5).
    Sweep(SweepArgs),
    /// Husimi Q-function of a fan-state on a grid. Values are raw Q; multiply by π for πQ.
    Qfunc(QfuncArgs),
    /// Randomized cross-checks of the analytic engine against the number-basis oracle.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Basis {
    Minus,
    Plus,
}

impl From<Basis> for Outcome {
    fn from(b: Basis) -> Self {
        match b {
            Basis::Minus => Outcome::Minus,
            Basis::Plus => Outcome::Plus,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TauOrderArg {
    PiFirst,
    HalfPiFirst,
}

impl From<TauOrderArg> for TauOrder {
    fn from(t: TauOrderArg) -> Self {
        match t {
            TauOrderArg::PiFirst => TauOrder::PiFirst,
            TauOrderArg::HalfPiFirst => TauOrder::HalfPiFirst,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepKind {
    /// Single-atom outcome probabilities against τ.
    #[value(alias = "single-atom")]
    Fig3,
    /// Two-atom probability P1 against r.
    #[value(alias = "p1")]
    Fig4,
    /// Fan generation probability P_k against r, k = 1, 2, 4, 8.
    #[value(alias = "pk")]
    Fig5,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output format [default: json for generate, csv otherwise]
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Output file, `-` for stdout.
    #[arg(long, default_value = "-")]
    pub out: String,
}

#[derive(Debug, Clone, Args)]
pub struct GenerateArgs {
    /// Initial coherent amplitude, `re` or `re,im`.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub alpha: C64,
    /// Number of atoms N >= 2; the target is the fan-state with k = 2^(N-2).
    #[arg(long, default_value_t = 2)]
    pub atoms: usize,
    /// Level every atom is prepared and detected in.
    #[arg(long, value_enum, default_value_t = Basis::Minus)]
    pub basis: Basis,
    /// Order of the first two interaction times.
    #[arg(long, value_enum, default_value_t = TauOrderArg::PiFirst)]
    pub tau_order: TauOrderArg,
    /// Cross-run the number-basis oracle and report the deviation.
    #[arg(long)]
    pub verify: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    pub kind: SweepKind,
    #[arg(long, default_value_t = 0.0)]
    pub r_min: f64,
    #[arg(long, default_value_t = 3.0)]
    pub r_max: f64,
    /// Number of r samples, endpoints included.
    #[arg(long, default_value_t = 61)]
    pub r_steps: usize,
    #[arg(long, default_value_t = 0.0)]
    pub tau_min: f64,
    #[arg(long, default_value_t = 6.0 * PI)]
    pub tau_max: f64,
    /// Number of τ samples, endpoints included.
    #[arg(long, default_value_t = 601)]
    pub tau_steps: usize,
    /// Field moduli for the single-atom sweep.
    #[arg(long, value_delimiter = ',', default_value = "0.5,1,5")]
    pub radii: Vec<f64>,
    /// Restrict the P1 sweep to one ordering.
    #[arg(long, value_enum)]
    pub tau_order: Option<TauOrderArg>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct QfuncArgs {
    /// Fan-state amplitude, `re` or `re,im`.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub alpha: C64,
    #[arg(long, default_value_t = 1)]
    pub k: usize,
    /// `x0,x1,y0,y1` [default: ±(|α| + 3) in both directions]
    #[arg(long, value_parser = parse_bounds, allow_hyphen_values = true)]
    pub bounds: Option<GridBounds>,
    /// Cells per axis, `nx,ny`.
    #[arg(long, value_parser = parse_res, default_value = "201,201")]
    pub res: (usize, usize),
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Random cases per check.
    #[arg(long, default_value_t = 200)]
    pub cases: usize,
    /// Multiplies every tolerance; 0 makes the harness fail on purpose.
    #[arg(long, default_value_t = 1.0)]
    pub tol_scale: f64,
    /// Output file, `-` for stdout.
    #[arg(long, default_value = "-")]
    pub out: String,
}

fn parse_floats(s: &str) -> Result<Vec<f64>, String> {
    s.split(',')
        .map(|p| {
            let v: f64 = p.trim().parse().map_err(|e| format!("`{p}`: {e}"))?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(format!("`{p}` is not finite"))
            }
        })
        .collect()
}

pub fn parse_complex(s: &str) -> Result<C64, String> {
    match parse_floats(s)?.as_slice() {
        [re] => Ok(C64::new(*re, 0.0)),
        [re, im] => Ok(C64::new(*re, *im)),
        _ => Err(format!("expected `re` or `re,im`, got `{s}`")),
    }
}

pub fn parse_bounds(s: &str) -> Result<GridBounds, String> {
    match parse_floats(s)?.as_slice() {
        &[x0, x1, y0, y1] => GridBounds::new(x0, x1, y0, y1).map_err(|e| e.to_string()),
        _ => Err(format!("expected `x0,x1,y0,y1`, got `{s}`")),
    }
}

pub fn parse_res(s: &str) -> Result<(usize, usize), String> {
    let parts: Vec<&str> = s.split(',').collect();
    let [nx, ny] = parts.as_slice() else {
        return Err(format!("expected `nx,ny`, got `{s}`"));
    };
    let parse = |p: &str| p.trim().parse::<usize>().map_err(|e| format!("`{p}`: {e}"));
    Ok((parse(nx)?, parse(ny)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_values() {
        assert_eq!(parse_complex("2").unwrap(), C64::new(2.0, 0.0));
        assert_eq!(parse_complex("1, -0.3").unwrap(), C64::new(1.0, -0.3));
        assert!(parse_complex("1,2,3").is_err());
        assert!(parse_complex("nan").is_err());
        assert!(parse_complex("x").is_err());
    }

    #[test]
    fn bounds_and_resolution() {
        let b = parse_bounds("-1,1,-2,2").unwrap();
        assert_eq!((b.x_min, b.y_max), (-1.0, 2.0));
        assert!(parse_bounds("1,-1,0,1").is_err());
        assert!(parse_bounds("0,1").is_err());
        assert_eq!(parse_res("10,20").unwrap(), (10, 20));
        assert!(parse_res("10").is_err());
        assert!(parse_res("-1,2").is_err());
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
