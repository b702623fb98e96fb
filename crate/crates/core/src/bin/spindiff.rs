use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use spindiff::ansatz::{assemble, solve, AnsatzSpec, SolveReport};
use spindiff::numeric::DEFAULT_SEED;
use spindiff::verify::{verify, Suite};
use spindiff::{parse, Angles, OperatorId, ParseError, PrintStyle, SpinorId};

/// Exact verification of differential spin-1/2 operators (units of hbar).
#[derive(Parser)]
#[command(name = "spindiff", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Style {
    Exponential,
    Trig,
}

impl From<Style> for PrintStyle {
    fn from(s: Style) -> Self {
        match s {
            Style::Exponential => PrintStyle::Exponential,
            Style::Trig => PrintStyle::Trig,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite: all, eigen, commutators, s2, solver, numeric.
    Verify {
        #[arg(long, default_value = "all", value_parser = |s: &str| s.parse::<Suite>())]
        suite: Suite,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Derive an operator from the eigenpairs in a JSON ansatz file.
    Solve {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Apply a named operator to a named spinor.
    Apply {
        #[arg(long)]
        op: String,
        #[arg(long)]
        spinor: String,
        #[arg(long, value_enum, default_value = "exponential")]
        style: Style,
    },
    /// Commutator of two named operators, given as `A,B`.
    Commutator {
        #[arg(long, value_delimiter = ',')]
        ops: Vec<String>,
        #[arg(long, value_enum, default_value = "trig")]
        style: Style,
    },
    /// Evaluate an expression at the given angles (radians).
    Eval {
        #[arg(long)]
        expr: String,
        #[arg(long, allow_hyphen_values = true)]
        theta: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        phi: f64,
        #[arg(long = "theta-p", default_value_t = 0.0, allow_hyphen_values = true)]
        theta_p: f64,
        #[arg(long = "phi-p", default_value_t = 0.0, allow_hyphen_values = true)]
        phi_p: f64,
    },
    /// List operator and spinor identifiers.
    List,
}

const USAGE: u8 = 2;

fn usage_error(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(USAGE)
}

fn parse_error(text: &str, e: &ParseError) -> ExitCode {
    eprintln!("error: {e}");
    eprintln!("  {text}");
    eprintln!("  {}^", " ".repeat(e.offset));
    ExitCode::from(USAGE)
}

fn format_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{:?}", z.re)
    } else {
        let sign = if z.im < 0.0 { '-' } else { '+' };
        format!("{:?} {sign} {:?}i", z.re, z.im.abs())
    }
}

fn run(cli: Cli) -> ExitCode {
    match cli.command {
        Command::Verify { suite, format, seed } => {
            let report = verify(suite, seed);
            match format {
                Format::Text => print!("{}", report.to_text()),
                Format::Json => print!("{}", report.to_json()),
            }
            ExitCode::from(report.exit_code() as u8)
        }
        Command::Solve { file, format } => {
            let spec = match AnsatzSpec::load(&file) {
                Ok(s) => s,
                Err(e) => return usage_error(e),
            };
            let ls = match assemble(&spec) {
                Ok(ls) => ls,
                Err(e) => return usage_error(e),
            };
            let res = solve(&ls);
            let report = SolveReport::new(&spec, &ls, &res);
            match format {
                Format::Text => print!("{}", report.to_text()),
                Format::Json => println!("{}", serde_json::to_string_pretty(&report).expect("serializable")),
            }
            ExitCode::SUCCESS
        }
        Command::Apply { op, spinor, style } => {
            let op_id: OperatorId = match op.parse() {
                Ok(o) => o,
                Err(e) => return usage_error(e),
            };
            let sp_id: SpinorId = match spinor.parse() {
                Ok(s) => s,
                Err(e) => return usage_error(e),
            };
            let s = sp_id.build();
            let out = op_id.build().apply(&s);
            let [top, bottom] = out.to_text(style.into());
            println!("top: {top}");
            println!("bottom: {bottom}");
            match out.ratio_to(&s) {
                Some(f) => println!("factor: {f}"),
                None => println!("factor: none ({op_id} {sp_id} is not a multiple of {sp_id})"),
            }
            ExitCode::SUCCESS
        }
        Command::Commutator { ops, style } => {
            if ops.len() != 2 {
                return usage_error(format!("--ops takes exactly two operators, got {}", ops.len()));
            }
            let mut built = Vec::new();
            for name in &ops {
                match name.trim().parse::<OperatorId>() {
                    Ok(o) => built.push(o.build()),
                    Err(e) => return usage_error(e),
                }
            }
            let c = built[0].commutator(&built[1]);
            println!("{}", c.to_text(style.into()));
            ExitCode::SUCCESS
        }
        Command::Eval { expr, theta, phi, theta_p, phi_p } => match parse(&expr) {
            Ok(e) => {
                println!("{}", format_complex(e.eval(&Angles::with_initial(theta, phi, theta_p, phi_p))));
                ExitCode::SUCCESS
            }
            Err(e) => parse_error(&expr, &e),
        },
        Command::List => {
            let ops: Vec<&str> = OperatorId::ALL.iter().map(|o| o.name()).collect();
            let spinors: Vec<String> = SpinorId::all().iter().map(ToString::to_string).collect();
            println!("operators: {}", ops.join(" "));
            println!("spinors: {}", spinors.join(" "));
            ExitCode::SUCCESS
        }
    }
}

fn main() -> ExitCode {
    run(Cli::parse())
}
