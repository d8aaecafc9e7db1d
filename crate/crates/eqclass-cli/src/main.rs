//! `eqclass` — exact localized equivariant class computations.
//!
//! Exit codes: 0 success, 2 usage/parse errors, 3 polynomiality violation,
//! 4 violated built-in identity.

use std::collections::HashMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use eqclass::detvar::{
    det_local_class, lclass_check, positivity_check, radial_table, DetClassTable,
};
use eqclass::error::EqError;
use eqclass::localize::integrate;
use eqclass::motivic::{cusp_pipeline, expr_from_json, expr_rank, whitney_pipeline};
use eqclass::parse::parse_expr;
use eqclass::ratfun::{to_json, RatFun};
use eqclass::series::{ch_series_coeffs, todd_series_coeffs};
use eqclass::space::{space_from_json, SpaceModel};
use eqclass::weight::ClassVars;

/// Embedded example inputs (the worked spaces and stratification).
const P2_SPACE_JSON: &str = include_str!("../data/p2_space.json");
const GR24_SPACE_JSON: &str = include_str!("../data/gr24_space.json");
const WHITNEY_EXPR_JSON: &str = include_str!("../data/whitney_expr.json");

#[derive(Parser)]
#[command(name = "eqclass", version, about = "Exact equivariant class computations by fixed-point localization")]
struct Cli {
    /// Output style
    #[arg(long, global = true, value_enum, default_value_t = Format::Factored)]
    format: Format,
    /// Worker threads for fixed-point summations
    #[arg(long, global = true, default_value_t = 1)]
    parallel: usize,
    /// Cache directory for determinant-class memos (overrides EQCLASS_CACHE)
    #[arg(long, global = true)]
    cache: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Plain,
    Factored,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum YMode {
    Zero,
    Full,
}

#[derive(Subcommand)]
enum Command {
    /// Print the coefficients of a classical series
    Series {
        #[arg(value_enum)]
        kind: SeriesKind,
        order: u32,
    },
    /// Integrate per-point restrictions over a fixed-point model
    Integrate {
        /// SpaceModel JSON path, or one of the embedded names: p2, gr24
        space: String,
        /// One expression applied at every fixed point
        #[arg(long, conflicts_with = "classes")]
        class: Option<String>,
        /// JSON file mapping point labels to expressions
        #[arg(long)]
        classes: Option<PathBuf>,
    },
    /// Run a named worked computation
    Scenario {
        #[arg(value_enum)]
        name: ScenarioName,
        /// Determinant size (det scenario)
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, value_enum, default_value_t = YMode::Zero)]
        y_mode: YMode,
        /// Print the radial coefficient table (det scenario; implies full y)
        #[arg(long)]
        radial: bool,
        /// Check nonnegativity after y=-1-d, T=1+S (det scenario)
        #[arg(long)]
        positivity: bool,
    },
    /// Evaluate a stratification expression
    Motivic {
        /// MotivicExpr JSON path, or the embedded name: whitney
        expr: String,
        #[arg(long, value_enum, default_value_t = YMode::Zero)]
        y_mode: YMode,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SeriesKind {
    Todd,
    Ch,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ScenarioName {
    Whitney,
    Cusp,
    #[value(name = "schubert-gr24")]
    SchubertGr24,
    Det,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Failure {
        Failure { code: 2, message: message.into() }
    }

    fn identity(message: impl Into<String>) -> Failure {
        Failure { code: 4, message: message.into() }
    }
}

impl From<EqError> for Failure {
    fn from(e: EqError) -> Failure {
        let code = match e {
            EqError::NotPolynomial { .. } => 3,
            _ => 2,
        };
        Failure { code, message: e.to_string() }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.parallel.max(1))
        .build();
    let pool = match pool {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {}", e);
            return ExitCode::from(2);
        }
    };
    match pool.install(|| run(&cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Series { kind, order } => cmd_series(*kind, *order),
        Command::Integrate { space, class, classes } => {
            cmd_integrate(cli, space, class.as_deref(), classes.as_deref())
        }
        Command::Scenario { name, n, y_mode, radial, positivity } => {
            cmd_scenario(cli, *name, *n, *y_mode, *radial, *positivity)
        }
        Command::Motivic { expr, y_mode } => cmd_motivic(cli, expr, *y_mode),
    }
}

fn table_for(cli: &Cli) -> DetClassTable {
    match &cli.cache {
        Some(dir) => DetClassTable::new(Some(dir.clone())),
        None => DetClassTable::from_env(),
    }
}

fn print_value(cli: &Cli, factored: &str, value: &RatFun) {
    match cli.format {
        Format::Factored => println!("{}", factored),
        Format::Plain => println!("{}", value),
        Format::Json => println!("{}", to_json(value)),
    }
}

// ---------------------------------------------------------------------------
// series
// ---------------------------------------------------------------------------

fn cmd_series(kind: SeriesKind, order: u32) -> Result<(), Failure> {
    let coeffs = match kind {
        SeriesKind::Todd => todd_series_coeffs(order),
        SeriesKind::Ch => ch_series_coeffs(order),
    };
    let line: Vec<String> = coeffs.iter().map(eqclass::poly::format_rational).collect();
    println!("{}", line.join(", "));
    Ok(())
}

// ---------------------------------------------------------------------------
// integrate
// ---------------------------------------------------------------------------

fn load_space(name: &str) -> Result<SpaceModel, Failure> {
    let text = match name {
        "p2" => P2_SPACE_JSON.to_string(),
        "gr24" => GR24_SPACE_JSON.to_string(),
        path => std::fs::read_to_string(path)
            .map_err(|e| Failure::usage(format!("cannot read '{}': {}", path, e)))?,
    };
    let json: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| Failure::usage(format!("bad JSON: {}", e)))?;
    Ok(space_from_json(&json)?)
}

fn cmd_integrate(
    cli: &Cli,
    space: &str,
    class: Option<&str>,
    classes: Option<&std::path::Path>,
) -> Result<(), Failure> {
    let space = load_space(space)?;
    let vars = ClassVars::indexed(space.rank, 0);
    let mut restrictions: HashMap<String, RatFun> = HashMap::new();
    match (class, classes) {
        (Some(expr), None) => {
            let value = parse_expr(expr, vars.add_ctx())?;
            for p in &space.points {
                restrictions.insert(p.label.clone(), value.clone());
            }
        }
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::usage(format!("cannot read '{}': {}", path.display(), e)))?;
            let json: serde_json::Value = serde_json::from_str(&text)
                .map_err(|e| Failure::usage(format!("bad JSON: {}", e)))?;
            let obj = json
                .as_object()
                .ok_or_else(|| Failure::usage("classes file must be an object"))?;
            for (label, expr) in obj {
                let expr = expr
                    .as_str()
                    .ok_or_else(|| Failure::usage("class expressions must be strings"))?;
                restrictions.insert(label.clone(), parse_expr(expr, vars.add_ctx())?);
            }
        }
        _ => return Err(Failure::usage("supply exactly one of --class or --classes")),
    }
    let value = integrate(&vars, &space, &restrictions)?;
    print_value(cli, &value.to_string(), &value);
    Ok(())
}

// ---------------------------------------------------------------------------
// scenario
// ---------------------------------------------------------------------------

fn cmd_scenario(
    cli: &Cli,
    name: ScenarioName,
    n: usize,
    y_mode: YMode,
    radial: bool,
    positivity: bool,
) -> Result<(), Failure> {
    match name {
        ScenarioName::Whitney => {
            let vars = ClassVars::pair();
            let r = whitney_pipeline(&vars, y_mode == YMode::Full)?;
            let verdict = if r.ci_equal { "EQUAL" } else { "NOT-EQUAL" };
            match cli.format {
                Format::Factored => println!(
                    "{}  [CI-comparison: {}]",
                    r.class_nf.format_factored(&vars),
                    verdict
                ),
                Format::Plain => println!("{}  [CI-comparison: {}]", r.class, verdict),
                Format::Json => println!("{}", to_json(&r.class)),
            }
            if !r.ci_equal {
                return Err(Failure::identity("Whitney CI comparison failed"));
            }
            Ok(())
        }
        ScenarioName::Cusp => {
            let vars = ClassVars::single();
            let r = cusp_pipeline(&vars, y_mode == YMode::Full)?;
            match cli.format {
                Format::Factored => {
                    println!("class: {}", r.class_nf.format_factored(&vars));
                    println!("CI class: {}", r.ci_nf.format_factored(&vars));
                }
                Format::Plain => {
                    println!("class: {}", r.class);
                    println!("CI class: {}", r.ci_nf.value(&vars)?);
                }
                Format::Json => {
                    println!("{}", to_json(&r.class));
                    println!("{}", to_json(&r.ci_nf.value(&vars)?));
                }
            }
            println!(
                "[CI-comparison: {}]",
                if r.ci_equal { "EQUAL" } else { "NOT-EQUAL" }
            );
            if r.ci_equal {
                return Err(Failure::identity(
                    "the cusp class unexpectedly matched its CI class",
                ));
            }
            Ok(())
        }
        ScenarioName::SchubertGr24 => cmd_schubert_gr24(cli),
        ScenarioName::Det => cmd_det(cli, n, y_mode, radial, positivity),
    }
}

fn cmd_schubert_gr24(cli: &Cli) -> Result<(), Failure> {
    let table = table_for(cli);
    let det = det_local_class(2, false, &table)?;
    let vars = det.vars();
    let nf = det.normal_form();
    println!("chi(O_X) = 1");
    match cli.format {
        Format::Factored => println!("singular-point class: {}", nf.format_factored(&vars)),
        Format::Plain => println!("singular-point class: {}", det.value()?),
        Format::Json => println!("{}", to_json(&det.value()?)),
    }
    // the structure-sheaf identity for the determinant quadric
    let expected = parse_expr("1-S1*S2*T1*T2", vars.mult_ctx())?;
    if !RatFun::from_poly(nf.w.clone()).eq_ratfun(&expected)? {
        return Err(Failure::identity("Gr2(C4) extraction lost its closed form"));
    }
    println!("[CI-comparison: EQUAL]");
    Ok(())
}

fn cmd_det(
    cli: &Cli,
    n: usize,
    y_mode: YMode,
    radial: bool,
    positivity: bool,
) -> Result<(), Failure> {
    if n == 0 || n > 4 {
        return Err(Failure::usage("det scenario supports 1 <= n <= 4"));
    }
    let table = table_for(cli);
    if radial {
        let rows = radial_table(n, &table)?;
        for (k, p) in rows.iter().enumerate() {
            println!("T^{}: {}", k, p);
        }
    } else {
        let with_y = y_mode == YMode::Full;
        let det = det_local_class(n, with_y, &table)?;
        let vars = det.vars();
        let value = det.value()?;
        match cli.format {
            Format::Factored if !value.is_polynomial() => {
                println!("{}", det.normal_form().format_factored(&vars))
            }
            Format::Factored | Format::Plain => println!("{}", value),
            Format::Json => println!("{}", to_json(&value)),
        }
        // closed-form identity at y = 0
        let det0 = det_local_class(n, false, &table)?;
        let mut closed = eqclass::poly::LaurentPoly::one(vars.mult_ctx());
        let mut prod = eqclass::poly::LaurentPoly::one(vars.mult_ctx());
        for i in 0..n {
            prod = prod
                .mul(&eqclass::poly::LaurentPoly::var(vars.mult_ctx(), i))
                .mul(&eqclass::poly::LaurentPoly::var(vars.mult_ctx(), n + i));
        }
        closed = closed.sub(&prod);
        if det0.w != closed {
            return Err(Failure::identity("determinant class lost its y=0 closed form"));
        }
        if with_y && !lclass_check(n, &table)? {
            return Err(Failure::identity("determinant class lost its y=1 closed form"));
        }
    }
    if positivity {
        if positivity_check(n, &table)? {
            println!("positivity: OK");
        } else {
            return Err(Failure::identity("positivity substitution found a negative coefficient"));
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// motivic
// ---------------------------------------------------------------------------

fn cmd_motivic(cli: &Cli, expr: &str, y_mode: YMode) -> Result<(), Failure> {
    let text = match expr {
        "whitney" => WHITNEY_EXPR_JSON.to_string(),
        path => std::fs::read_to_string(path)
            .map_err(|e| Failure::usage(format!("cannot read '{}': {}", path, e)))?,
    };
    let json: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| Failure::usage(format!("bad JSON: {}", e)))?;
    let expr = expr_from_json(&json)?;
    let rank = expr_rank(&expr)
        .ok_or_else(|| Failure::usage("expression carries no weights to size the torus"))?;
    let vars = ClassVars::new(
        (1..=rank).map(|i| format!("t{}", i)).collect(),
        (1..=rank).map(|i| format!("T{}", i)).collect(),
    );
    let reduced = expr.evaluate_reduced(&vars, y_mode == YMode::Full)?;
    let value = reduced.to_ratfun()?;
    print_value(cli, &reduced.format_factored(), &value);
    Ok(())
}
