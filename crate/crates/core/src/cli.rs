//! Command-line front end. Each command returns its output as a string so the
//! binary stays a thin wrapper and the commands are testable in-process.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::bipersistence::{default_box, grid_module_of_pair};
use crate::complex::{parse_complex, FilteredComplex, Function};
use crate::distances::{
    gamma_bar_search, DistanceError, ObjectiveChoice, SearchConfig, DEFAULT_BUDGET,
};
use crate::grid::{evaluate_hooks_in, hook_decompose, GridError, GridPoint, HookDecomposition};
use crate::linalg::PrimeField;
use crate::persistence::{compute_diagram, PersistenceDiagram};
use crate::product::{build_product, hooks_of_product, reconstruct_from_hooks, Matching};
use crate::svg::render_supports;

/// Environment variable holding the default prime.
pub const PRIME_ENV: &str = "HOOKPROD_PRIME";

#[derive(Error, Debug)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Budget(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Budget(_) => 3,
        }
    }
}

fn input(e: impl std::fmt::Display) -> CliError {
    CliError::Input(e.to_string())
}

#[derive(Parser, Debug)]
#[command(
    name = "hookprod",
    version,
    about = "Gamma-products of persistence modules and hook decompositions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum FunctionArg {
    F,
    G,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ObjectiveArg {
    #[default]
    Auto,
    Exact,
    Matching,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Persistence diagram of one filtration function, as CSV.
    Diagram {
        #[arg(long)]
        complex: PathBuf,
        #[arg(long, value_enum)]
        function: FunctionArg,
        #[arg(long)]
        degree: usize,
        #[arg(long)]
        prime: Option<u32>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Hooks of the product of two diagrams along a matching, as CSV.
    Product {
        #[arg(long)]
        pdf: PathBuf,
        #[arg(long)]
        pdg: PathBuf,
        #[arg(long)]
        matching: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Search for the matching whose product is closest to the biparameter module.
    Gammabar {
        #[arg(long)]
        complex: PathBuf,
        #[arg(long)]
        degree: usize,
        #[arg(long, value_enum, default_value_t = ObjectiveArg::Auto)]
        objective: ObjectiveArg,
        #[arg(long)]
        prime: Option<u32>,
        /// Free-coefficient budget of the exact objective.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
        /// Largest number of off-diagonal points per diagram.
        #[arg(long, default_value_t = 8)]
        max_points: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Hook decomposition of the biparameter module, with a reconstruction check.
    CheckHook {
        #[arg(long)]
        complex: PathBuf,
        #[arg(long)]
        degree: usize,
        #[arg(long)]
        prime: Option<u32>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// SVG plot of hook supports; two inputs are overlaid.
    Svg {
        #[arg(long)]
        hooks: PathBuf,
        #[arg(long)]
        hooks2: Option<PathBuf>,
        #[arg(long = "box", num_args = 2, value_names = ["B1", "B2"], required = true)]
        bound: Vec<u64>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn field(prime: Option<u32>) -> Result<PrimeField, CliError> {
    let p = match prime {
        Some(p) => p,
        None => match std::env::var(PRIME_ENV) {
            Ok(v) => v
                .trim()
                .parse()
                .map_err(|_| CliError::Input(format!("{PRIME_ENV}: `{v}` is not a number")))?,
            Err(_) => return Ok(PrimeField::default()),
        },
    };
    PrimeField::new(p).map_err(input)
}

fn load_complex(path: &Path) -> Result<FilteredComplex, CliError> {
    parse_complex(&read(path)?).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn load_hooks(path: &Path) -> Result<HookDecomposition, CliError> {
    HookDecomposition::from_csv_str(&read(path)?)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn load_diagram(path: &Path) -> Result<PersistenceDiagram, CliError> {
    PersistenceDiagram::from_csv_str(&read(path)?)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

/// Runs a command and returns what it prints; with `--output` the text goes to the file instead.
pub fn run(cli: &Cli) -> Result<String, CliError> {
    let (text, output) = match &cli.command {
        Command::Diagram {
            complex,
            function,
            degree,
            prime,
            output,
        } => {
            let c = load_complex(complex)?;
            let function = match function {
                FunctionArg::F => Function::F,
                FunctionArg::G => Function::G,
            };
            let pd = compute_diagram(&c, function, *degree, field(*prime)?).map_err(input)?;
            (pd.to_csv(), output)
        }
        Command::Product {
            pdf,
            pdg,
            matching,
            output,
        } => {
            let pd_f = load_diagram(pdf)?;
            let pd_g = load_diagram(pdg)?;
            let gamma = Matching::parse(&read(matching)?)
                .map_err(|e| CliError::Input(format!("{}: {e}", matching.display())))?;
            let product = build_product(&pd_f, &pd_g, &gamma).map_err(input)?;
            (hooks_of_product(&product).to_csv(), output)
        }
        Command::Gammabar {
            complex,
            degree,
            objective,
            prime,
            budget,
            max_points,
            output,
        } => {
            let c = load_complex(complex)?;
            let field = field(*prime)?;
            let pd_f = compute_diagram(&c, Function::F, *degree, field).map_err(input)?;
            let pd_g = compute_diagram(&c, Function::G, *degree, field).map_err(input)?;
            let bound = default_box(&c).map_err(input)?;
            let target = grid_module_of_pair(&c, *degree, field, bound).map_err(input)?;
            let config = SearchConfig {
                objective: match objective {
                    ObjectiveArg::Auto => ObjectiveChoice::Auto,
                    ObjectiveArg::Exact => ObjectiveChoice::Exact,
                    ObjectiveArg::Matching => ObjectiveChoice::Matching,
                },
                budget: *budget,
                max_points: *max_points,
                ..SearchConfig::default()
            };
            match gamma_bar_search(&pd_f, &pd_g, &target, &config) {
                Ok(report) => (report.to_string(), output),
                Err(e @ DistanceError::BudgetExceeded { .. }) => {
                    return Err(CliError::Budget(e.to_string()))
                }
                Err(e) => return Err(input(e)),
            }
        }
        Command::CheckHook {
            complex,
            degree,
            prime,
            output,
        } => {
            let c = load_complex(complex)?;
            let field = field(*prime)?;
            let bound = default_box(&c).map_err(input)?;
            let module = grid_module_of_pair(&c, *degree, field, bound).map_err(input)?;
            (check_hook_report(&module, bound, field)?, output)
        }
        Command::Svg {
            hooks,
            hooks2,
            bound,
            output,
        } => {
            let first = load_hooks(hooks)?;
            let second = hooks2.as_deref().map(load_hooks).transpose()?;
            let bound = GridPoint::new(bound[0], bound[1]);
            if bound.x == 0 || bound.y == 0 {
                return Err(CliError::Input(format!(
                    "box must be positive, got {bound}"
                )));
            }
            (render_supports(&first, second.as_ref(), bound), output)
        }
    };
    match output {
        Some(path) => {
            fs::write(path, text)
                .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}

fn check_hook_report(
    module: &crate::grid::GridModule,
    bound: GridPoint,
    field: PrimeField,
) -> Result<String, CliError> {
    let decomp = match hook_decompose(module) {
        Ok(d) => d,
        Err(e @ (GridError::NotHookDecomposable(_) | GridError::UnstableTail { .. })) => {
            return Ok(format!("verdict: NotHookDecomposable\nreason: {e}\n"));
        }
        Err(e) => return Err(input(e)),
    };
    let mut text = String::from("verdict: hook-decomposable\nhooks:\n");
    text.push_str(&decomp.to_csv());
    let round_trip = match reconstruct_from_hooks(&decomp) {
        Ok((pd_f, pd_g, gamma)) => {
            let product = build_product(&pd_f, &pd_g, &gamma).map_err(input)?;
            let hooks = hooks_of_product(&product);
            let same_module = evaluate_hooks_in(&hooks, bound, field)
                .same_rank_invariant(module)
                .map_err(input)?;
            if hooks == decomp && same_module {
                "ok".to_string()
            } else {
                "FAILED".to_string()
            }
        }
        Err(e) => format!("unsupported ({e})"),
    };
    text.push_str(&format!("round-trip: {round_trip}\n"));
    Ok(text)
}
