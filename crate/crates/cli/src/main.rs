mod commands;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

const BOUND_ENV: &str = "HEISCURVE_BOUND";

#[derive(Parser, Debug)]
#[command(
    name = "heiscurve",
    version,
    about = "Exact computations on Heisenberg and Fermat curves",
    allow_negative_numbers = true
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Modulus n of H_n, Z/n and the Fermat curve F_n
    #[arg(long, global = true)]
    n: Option<u64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Field parameter: computations run in Q(sqrt(d)), d < 0 squarefree
    #[arg(long, global = true, default_value_t = -3, allow_negative_numbers = true)]
    d: i64,
    /// Enumeration cap for group and automorphism listings; HEISCURVE_BOUND
    /// overrides it
    #[arg(long, global = true, default_value_t = heiscurve::DEFAULT_BOUND)]
    bound: u64,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Arithmetic in the Heisenberg group H_n (elements written x,y,z)
    Group {
        #[command(subcommand)]
        op: commands::GroupOp,
    },
    /// Evaluate words in F_2 = <a, b>, test kernels and lifting
    Word(commands::WordArgs),
    /// Genus formulas, Riemann-Hurwitz and the covering data of C_n -> F_n -> P^1
    Genus(commands::GenusArgs),
    /// Check every signature claim about the tower against Riemann-Hurwitz
    Audit(commands::AuditArgs),
    /// Derive the equation of C_3 from the 3-isogenies of the Fermat cubic
    C3,
    /// Field-rational 3-torsion of y^2 = x^3 + Ax + B
    Torsion(commands::CurveArgs),
    /// Vélu 3-isogenies of y^2 = x^3 + Ax + B
    Isogeny(commands::IsogenyArgs),
    /// j-invariant, Aut^0 order and isomorphism class of curves
    J(commands::JArgs),
}

pub enum CliError {
    Usage(String),
    Math(String),
    /// The audit found inconsistent claims that were not expected.
    Audit(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Math(_) => 2,
            CliError::Audit(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Math(m) | CliError::Audit(m) => m,
        }
    }
}

/// Resolved global settings.
pub struct Settings {
    pub n: Option<u64>,
    pub format: Format,
    pub d: i64,
    pub bound: u64,
}

impl Settings {
    pub fn n(&self) -> Result<u64, CliError> {
        self.n.ok_or_else(|| CliError::Usage("this command needs --n".into()))
    }
}

fn settings(g: &Global) -> Result<Settings, CliError> {
    let bound = match std::env::var(BOUND_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("{BOUND_ENV}={v:?} is not a nonnegative integer")))?,
        Err(_) => g.bound,
    };
    heiscurve::quadratic::check_d(g.d).map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(Settings { n: g.n, format: g.format, d: g.d, bound })
}

fn run(cli: Cli) -> Result<String, CliError> {
    let s = settings(&cli.global)?;
    match cli.command {
        Command::Group { op } => commands::group(&s, op),
        Command::Word(args) => commands::word(&s, args),
        Command::Genus(args) => commands::genus(&s, args),
        Command::Audit(args) => commands::audit(&s, args),
        Command::C3 => commands::c3(&s),
        Command::Torsion(args) => commands::torsion(&s, args),
        Command::Isogeny(args) => commands::isogeny(&s, args),
        Command::J(args) => commands::j(&s, args),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            if !out.ends_with('\n') {
                println!();
            }
            ExitCode::SUCCESS
        }
        Err(CliError::Audit(out)) => {
            print!("{out}");
            ExitCode::from(3)
        }
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}
