use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args as ClapArgs, Parser, Subcommand};
use ramacf::algid::min_poly;
use ramacf::harness::{
    evaluate, find_quantity, integrate_named, parse_assignments, quantities, Category, Config,
    ParamMap, Registry, Report, Status, INTEGRANDS,
};
use ramacf::{Error, PrecisionContext};

#[derive(Parser)]
#[command(name = "ramacf", version, about = "High-precision checks of q-continued fraction identities")]
struct Cli {
    /// JSON config file; defaults to $RAMACF_CONFIG, then built-in values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(ClapArgs)]
struct Params {
    /// Parameter assignment `k=v`; values may be expressions such as `exp(-pi)`.
    #[arg(long = "param", value_name = "K=V")]
    param: Vec<String>,
    /// Shorthand for `--param x=...` (nome `q = e^{-x}`).
    #[arg(long, allow_hyphen_values = true)]
    x: Option<String>,
    /// Shorthand for `--param q=...`.
    #[arg(long, allow_hyphen_values = true)]
    q: Option<String>,
}

impl Params {
    fn map(&self) -> Result<ParamMap, Error> {
        let mut m = parse_assignments(&self.param)?;
        for (k, v) in [("x", &self.x), ("q", &self.q)] {
            if let Some(v) = v {
                if m.insert(k.to_string(), v.clone()).is_some() {
                    return Err(Error::InvalidParameter {
                        name: k.to_string(),
                        reason: "given twice".into(),
                    });
                }
            }
        }
        Ok(m)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a registered quantity.
    Eval {
        quantity: String,
        #[command(flatten)]
        params: Params,
        /// Working precision in bits.
        #[arg(long)]
        prec: Option<u32>,
        /// Decimal digits printed; defaults to the working precision.
        #[arg(long)]
        digits: Option<usize>,
    },
    /// Run identity checks and print a table.
    Identity {
        /// Case name.
        name: Option<String>,
        #[arg(long, conflicts_with_all = ["name", "all"])]
        category: Option<String>,
        #[arg(long, conflicts_with = "name")]
        all: bool,
        /// Parameter override for a single named case.
        #[arg(long = "param", value_name = "K=V", requires = "name")]
        param: Vec<String>,
        #[arg(long)]
        prec: Option<u32>,
        /// Also write the reports as JSON.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Search for an integer polynomial vanishing at a quantity.
    Minpoly {
        quantity: String,
        #[command(flatten)]
        params: Params,
        #[arg(long)]
        max_degree: Option<usize>,
        /// Defaults to the configured algebraicity precision.
        #[arg(long)]
        prec: Option<u32>,
    },
    /// Integrate a registered integrand over [a, b].
    Integrate {
        name: String,
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        #[arg(long)]
        prec: Option<u32>,
    },
    /// List quantities, identity cases and integrands.
    List,
}

enum Failure {
    Usage(Error),
    Failed(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Convergence { .. } | Error::Divergence { .. } => Failure::Failed(e.to_string()),
            other => Failure::Usage(other),
        }
    }
}

fn digits_for(ctx: &PrecisionContext) -> usize {
    (ctx.working_bits() as f64 * std::f64::consts::LOG10_2).floor() as usize
}

fn run(cli: Cli) -> Result<bool, Failure> {
    let config = Config::load(cli.config.as_deref())?;
    match cli.command {
        Command::Eval { quantity, params, prec, digits } => {
            let ctx = config.context(prec)?;
            let value = find_quantity(&quantity)?.evaluate(&params.map()?, &ctx)?;
            println!("{}", value.to_decimal(digits.unwrap_or_else(|| digits_for(&ctx))));
            Ok(true)
        }
        Command::Identity { name, category, all, param, prec, json } => {
            let ctx = config.context(prec)?;
            let registry = Registry::new(&config)?;
            let reports = match (name, category, all) {
                (Some(n), _, _) => vec![registry.run_identity(&n, &parse_assignments(&param)?, &ctx)?],
                (None, Some(c), _) => {
                    let cat = Category::parse(&c).ok_or_else(|| Error::InvalidParameter {
                        name: "category".into(),
                        reason: format!(
                            "expected one of {}",
                            Category::ALL.map(Category::as_str).join(", ")
                        ),
                    })?;
                    registry.run_suite(Some(cat), &ctx)
                }
                (None, None, true) => registry.run_suite(None, &ctx),
                (None, None, false) => {
                    return Err(Failure::Usage(Error::InvalidParameter {
                        name: "identity".into(),
                        reason: "give a case name, --category or --all".into(),
                    }))
                }
            };
            print_table(&reports);
            if let Some(path) = json {
                let text = serde_json::to_string_pretty(&reports).map_err(|e| Failure::Failed(e.to_string()))?;
                fs::write(&path, text + "\n").map_err(|e| Failure::Failed(format!("{}: {e}", path.display())))?;
            }
            Ok(reports.iter().all(|r| !matches!(r.status, Status::Fail | Status::NotFound)))
        }
        Command::Minpoly { quantity, params, max_degree, prec } => {
            let bits = prec.unwrap_or(config.algid.precision_bits);
            let ctx = config.context(Some(bits))?;
            let q = find_quantity(&quantity)?;
            let overrides = params.map()?;
            q.evaluate(&overrides, &ctx)?;
            let degree = max_degree.unwrap_or(config.algid.max_degree);
            match min_poly(|c| q.evaluate(&overrides, c), degree, &ctx)? {
                Some(c) => {
                    println!("{}", c.display());
                    println!("degree {}, height {}", c.degree, c.height);
                    println!("residual {}", c.residual.to_decimal(6));
                    println!(
                        "confirmation at {} bits: {} ({})",
                        bits * 2,
                        c.confirmation_residual.to_decimal(6),
                        if c.confirmed { "confirmed" } else { "not confirmed" }
                    );
                    Ok(c.confirmed)
                }
                None => {
                    println!("no polynomial of degree <= {degree} found");
                    Ok(false)
                }
            }
        }
        Command::Integrate { name, a, b, prec } => {
            let ctx = config.context(prec)?;
            let lo = evaluate("a", &a, &ctx)?.to_float(&ctx);
            let hi = evaluate("b", &b, &ctx)?.to_float(&ctx);
            let v = integrate_named(&name, &lo, &hi, &ctx)?;
            println!("{}", v.to_decimal(digits_for(&ctx)));
            Ok(true)
        }
        Command::List => {
            println!("quantities:");
            for q in quantities() {
                let params = if q.params.is_empty() { String::new() } else { format!(" [{}]", q.params.join(", ")) };
                println!("  {}{}  {}", q.name, params, q.description);
            }
            println!("identity cases:");
            for (name, cat) in Registry::new(&config)?.names() {
                println!("  {name}  ({cat})");
            }
            println!("integrands:");
            for (name, description, _) in INTEGRANDS {
                println!("  {name}  {description}");
            }
            Ok(true)
        }
    }
}

fn print_table(reports: &[Report]) {
    let width = reports.iter().map(|r| r.case.len()).max().unwrap_or(4).max(4);
    println!("{:<9} {:<width$} {:<19} {:<12} {:<12}", "status", "case", "category", "abs_error", "rel_error");
    for r in reports {
        println!(
            "{:<9} {:<width$} {:<19} {:<12} {:<12}",
            r.status.as_str(),
            r.case,
            r.category.as_str(),
            short(&r.abs_error),
            short(&r.rel_error)
        );
    }
    let count = |s: Status| reports.iter().filter(|r| r.status == s).count();
    println!(
        "{} cases: {} pass, {} fail, {} flagged, {} not found",
        reports.len(),
        count(Status::Pass),
        count(Status::Fail),
        count(Status::Flagged),
        count(Status::NotFound)
    );
    for r in reports.iter().filter(|r| r.status != Status::Pass) {
        println!("{}: {}", r.case, r.notes);
    }
}

fn short(decimal: &str) -> String {
    match decimal.parse::<f64>() {
        Ok(v) => format!("{v:.3e}"),
        Err(_) => decimal.chars().take(12).collect(),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Failed(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
