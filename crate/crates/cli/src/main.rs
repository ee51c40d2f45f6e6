use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use tnomial::degree::{
    check_conjecture, estimate_for_product, least_multiples, ConjectureReport, EstimateReport,
    DEFAULT_DEGREE_CAP,
};
use tnomial::product::{count_product_recursive, oracle_count_product, CountReport, ProductSpec, CSV_HEADER};
use tnomial::single::enumerate_tnomials;
use tnomial::verify::{run_all, run_criterion, CriterionOutcome};
use tnomial::{Error, ErrorKind, FactorSpec, Gf2Poly, Tnomial};

mod render;

const EXIT_FAILURE: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_HYPOTHESIS: u8 = 3;
const EXIT_CAP: u8 = 4;
const EXIT_DISAGREE: u8 = 5;

#[derive(Parser)]
#[command(name = "tnomial", version, about = "Sparse multiples of primitive polynomials over GF(2) and their products")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Factors {
    /// Primitive factor in caret ("x^4+x+1") or hex ("0x13") form; repeat for products.
    #[arg(long = "poly", value_name = "EXPR")]
    polys: Vec<String>,

    /// Factor degrees; the smallest primitive polynomial of each degree is used.
    #[arg(long, value_delimiter = ',', value_name = "CSV")]
    degrees: Option<Vec<usize>>,
}

impl Factors {
    fn spec(&self) -> Result<ProductSpec, Error> {
        match &self.degrees {
            Some(degrees) => ProductSpec::from_degrees(degrees),
            None => ProductSpec::new(
                self.polys
                    .iter()
                    .map(|s| FactorSpec::new(s.parse::<Gf2Poly>()?))
                    .collect::<Result<Vec<_>, _>>()?,
            ),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Count the t-nomial multiples of a product, by formula and by oracle.
    Count {
        #[command(flatten)]
        factors: Factors,
        #[arg(short = 't', long = "weight", value_parser = clap::value_parser!(u8).range(3..=5))]
        weight: u8,
        /// Largest product order for which the oracle also runs.
        #[arg(long, default_value_t = 1024)]
        max_e: u64,
    },
    /// List every t-nomial multiple of degree below the product order.
    Enumerate {
        #[command(flatten)]
        factors: Factors,
        #[arg(short = 't', long = "weight", value_parser = clap::value_parser!(u8).range(3..=5))]
        weight: u8,
        /// Only multiples of degree at most this.
        #[arg(long)]
        max_degree: Option<u64>,
    },
    /// Find the least-degree t-nomial multiple.
    Least {
        #[command(flatten)]
        factors: Factors,
        #[arg(short = 't', long = "weight", value_parser = clap::value_parser!(u8).range(3..))]
        weight: u8,
        /// Search budget on the degree.
        #[arg(long, default_value_t = DEFAULT_DEGREE_CAP)]
        max_degree: u64,
        /// Print every multiple of the least degree.
        #[arg(long)]
        all: bool,
    },
    /// Estimate the least degree from the exact count.
    Estimate {
        #[command(flatten)]
        factors: Factors,
        #[arg(short = 't', long = "weight", value_parser = clap::value_parser!(u8).range(3..=5))]
        weight: u8,
        /// Search budget for the observed least degree.
        #[arg(long, default_value_t = DEFAULT_DEGREE_CAP)]
        max_degree: u64,
        /// Skip the search for the observed least degree.
        #[arg(long)]
        no_search: bool,
    },
    /// Check the least multiple for exponents that agree modulo a factor order.
    Conjecture {
        #[command(flatten)]
        factors: Factors,
        #[arg(short = 't', long = "weight", value_parser = clap::value_parser!(u8).range(3..=5))]
        weight: u8,
        #[arg(long, default_value_t = DEFAULT_DEGREE_CAP)]
        max_degree: u64,
    },
    /// Run the built-in verification suite.
    Selftest {
        /// Run a single criterion.
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=7))]
        criterion: Option<u8>,
    },
}

#[derive(Serialize)]
pub struct CountOutput {
    #[serde(flatten)]
    pub report: CountReport,
    pub product_exponent: u64,
    pub oracle: Option<u64>,
    pub agree: Option<bool>,
}

#[derive(Serialize)]
pub struct LeastOutput {
    pub factors: Vec<FactorSpec>,
    pub weight: usize,
    pub multiple: Tnomial,
    pub caret: String,
    pub degree: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ties: Option<Vec<Tnomial>>,
}

#[derive(Serialize)]
pub struct EstimateOutput {
    pub factors: Vec<FactorSpec>,
    #[serde(flatten)]
    pub report: EstimateReport,
}

enum Outcome {
    Ok,
    Disagree,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let result = run(&cli, &mut out);
    let flushed = out.flush();
    match result {
        Ok(Outcome::Ok) => match flushed {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(EXIT_FAILURE)
            }
        },
        Ok(Outcome::Disagree) => ExitCode::from(EXIT_DISAGREE),
        Err(Failure::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_FAILURE)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(match e.kind() {
                ErrorKind::Parse => EXIT_PARSE,
                ErrorKind::Hypothesis => EXIT_HYPOTHESIS,
                ErrorKind::Cap => EXIT_CAP,
                ErrorKind::Other => EXIT_FAILURE,
            })
        }
    }
}

enum Failure {
    Lib(Error),
    Io(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Io(e.into())
    }
}

fn json(out: &mut impl Write, value: &impl Serialize) -> Result<(), Failure> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn run(cli: &Cli, out: &mut impl Write) -> Result<Outcome, Failure> {
    match &cli.command {
        Command::Count { factors, weight, max_e } => {
            let spec = factors.spec()?;
            let t = *weight as usize;
            let report = count_product_recursive(&spec, t)?;
            let oracle = if spec.product_exponent <= *max_e {
                Some(oracle_count_product(&spec, t, *max_e)?)
            } else {
                None
            };
            let agree = oracle.map(|n| report.exact_count == n.into());
            let output = CountOutput {
                report,
                product_exponent: spec.product_exponent,
                oracle,
                agree,
            };
            match cli.format {
                Format::Text => render::count_text(out, &output, *max_e)?,
                Format::Json => json(out, &output)?,
                Format::Csv => {
                    writeln!(out, "{CSV_HEADER}")?;
                    writeln!(out, "{}", render::count_csv_row(&output))?;
                }
            }
            if agree == Some(false) {
                eprintln!("error: formula and oracle disagree");
                return Ok(Outcome::Disagree);
            }
        }
        Command::Enumerate { factors, weight, max_degree } => {
            let spec = factors.spec()?;
            let product = spec.ordered();
            let cap = max_degree.filter(|&d| d < product.order);
            for m in enumerate_tnomials(&product, *weight as usize, cap)? {
                match cli.format {
                    Format::Text => writeln!(out, "{m}")?,
                    Format::Csv => writeln!(out, "{}", m.to_csv())?,
                    Format::Json => writeln!(out, "{}", serde_json::to_string(&m)?)?,
                }
            }
        }
        Command::Least { factors, weight, max_degree, all } => {
            let spec = factors.spec()?;
            let t = *weight as usize;
            let mut found = least_multiples(&spec.product_poly, spec.product_exponent, t, *max_degree)?;
            let ties = all.then(|| found.clone());
            let multiple = found.swap_remove(0);
            let output = LeastOutput {
                factors: spec.factors.clone(),
                weight: t,
                caret: multiple.to_string(),
                degree: multiple.degree(),
                multiple,
                ties,
            };
            match cli.format {
                Format::Json => json(out, &output)?,
                _ => render::least_text(out, &output, cli.format == Format::Csv)?,
            }
        }
        Command::Estimate { factors, weight, max_degree, no_search } => {
            let spec = factors.spec()?;
            let search = (!no_search).then_some(*max_degree);
            let report = estimate_for_product(&spec, *weight as usize, search)?;
            let output = EstimateOutput { factors: spec.factors.clone(), report };
            match cli.format {
                Format::Json => json(out, &output)?,
                _ => render::estimate_text(out, &output)?,
            }
        }
        Command::Conjecture { factors, weight, max_degree } => {
            let spec = factors.spec()?;
            let report: ConjectureReport = check_conjecture(&spec, *weight as usize, *max_degree)?;
            match cli.format {
                Format::Json => json(out, &report)?,
                _ => render::conjecture_text(out, &report)?,
            }
        }
        Command::Selftest { criterion } => {
            let outcomes: Vec<CriterionOutcome> = match criterion {
                Some(id) => run_criterion(*id).into_iter().collect(),
                None => run_all(),
            };
            match cli.format {
                Format::Json => json(out, &outcomes)?,
                _ => {
                    for o in &outcomes {
                        writeln!(out, "{o}")?;
                    }
                }
            }
            if outcomes.iter().any(|o| !o.passed) {
                return Ok(Outcome::Disagree);
            }
        }
    }
    Ok(Outcome::Ok)
}
