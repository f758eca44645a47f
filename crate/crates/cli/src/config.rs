//! Command-line arguments and the validated [`RunConfig`] they produce.

use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use num_complex::Complex64;
use targetkit::scalar::Field;
use targetkit::{PropertyClass, TolerancePolicy};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Construct A with the requested property and A X = Y.
    Solve,
    /// Decide feasibility and print the certificate.
    Check,
    /// Re-check a given A against X, Y and the property.
    Verify,
    /// Emit a seeded instance (X, Y) with a known witness A.
    Generate,
    /// Emit a source X for a given target Y.
    GenerateSource,
    /// Normal-completion gap H(B, C) = B*B - BB* + C*C.
    Gap,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Solve => "solve",
            Command::Check => "check",
            Command::Verify => "verify",
            Command::Generate => "generate",
            Command::GenerateSource => "generate-source",
            Command::Gap => "gap",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum ReportFormat {
    #[default]
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FieldArg {
    Real,
    Complex,
}

/// Raw command line.
#[derive(Debug, Parser)]
#[command(name = "targetkit", version, about = "Structured solutions of A X = Y")]
pub struct Args {
    #[arg(value_enum)]
    pub command: Command,
    /// Property class, e.g. hermitian, unitary, normal-two-point.
    #[arg(long)]
    pub property: Option<String>,
    /// Source matrix (output path for `generate`).
    #[arg(long = "X", value_name = "PATH")]
    pub x: Option<PathBuf>,
    /// Target matrix (output path for `generate`).
    #[arg(long = "Y", value_name = "PATH")]
    pub y: Option<PathBuf>,
    /// Candidate for `verify`; witness output path for `generate`.
    #[arg(long = "A", value_name = "PATH")]
    pub a: Option<PathBuf>,
    #[arg(long = "B", value_name = "PATH")]
    pub b: Option<PathBuf>,
    #[arg(long = "C", value_name = "PATH")]
    pub c: Option<PathBuf>,
    /// Where `solve` writes A and `generate-source` writes X.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Write the report here instead of stdout.
    #[arg(long, value_name = "PATH")]
    pub report: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = ReportFormat::Json)]
    pub format: ReportFormat,
    #[arg(long, env = "TARGETKIT_SEED", default_value_t = 0)]
    pub seed: u64,
    /// First eigenvalue for normal-two-point, as `re` or `re,im`.
    #[arg(long, value_parser = parse_scalar, allow_hyphen_values = true)]
    pub lambda: Option<Complex64>,
    /// Second eigenvalue for normal-two-point, as `re` or `re,im`.
    #[arg(long, value_parser = parse_scalar, allow_hyphen_values = true)]
    pub mu: Option<Complex64>,
    /// Rows of a generated instance.
    #[arg(long)]
    pub m: Option<usize>,
    /// Columns of a generated instance.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, value_enum)]
    pub field: Option<FieldArg>,
    #[arg(long)]
    pub rank_deficiency: Option<usize>,
    #[arg(long)]
    pub rank_tol: Option<f64>,
    #[arg(long)]
    pub sym_tol: Option<f64>,
    #[arg(long)]
    pub psd_tol: Option<f64>,
    #[arg(long)]
    pub res_tol: Option<f64>,
}

/// Parses `re` or `re,im`.
pub fn parse_scalar(s: &str) -> Result<Complex64, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |t: &str| t.parse::<f64>().map_err(|_| format!("bad number '{t}' in '{s}'"));
    let z = match parts[..] {
        [re] => Complex64::new(num(re)?, 0.0),
        [re, im] => Complex64::new(num(re)?, num(im)?),
        _ => return Err(format!("expected re or re,im, got '{s}'")),
    };
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(format!("scalar must be finite, got '{s}'"));
    }
    Ok(z)
}

/// Shape of a generated instance; unset fields are drawn from the seed.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct InstanceShape {
    pub m: Option<usize>,
    pub n: Option<usize>,
    pub field: Option<Field>,
    pub rank_deficiency: Option<usize>,
}

/// A validated invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub property: Option<PropertyClass>,
    pub x: Option<PathBuf>,
    pub y: Option<PathBuf>,
    pub a: Option<PathBuf>,
    pub b: Option<PathBuf>,
    pub c: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub report: Option<PathBuf>,
    pub format: ReportFormat,
    pub seed: u64,
    pub tolerances: TolerancePolicy,
    pub shape: InstanceShape,
}

impl RunConfig {
    /// A config with default tolerances and no paths.
    pub fn new(command: Command) -> Self {
        RunConfig {
            command,
            property: None,
            x: None,
            y: None,
            a: None,
            b: None,
            c: None,
            out: None,
            report: None,
            format: ReportFormat::Json,
            seed: 0,
            tolerances: TolerancePolicy::default(),
            shape: InstanceShape::default(),
        }
    }

    pub fn from_args(args: Args) -> Result<Self, CliError> {
        let property = args
            .property
            .as_deref()
            .map(|name| PropertyClass::from_name(name, args.lambda, args.mu))
            .transpose()
            .map_err(CliError::Core)?;
        if property.is_none() && (args.lambda.is_some() || args.mu.is_some()) {
            return Err(CliError::Input("--lambda/--mu need --property normal-two-point".into()));
        }
        let mut tolerances = TolerancePolicy::default();
        for (slot, value) in [
            (&mut tolerances.rank_rel_cutoff, args.rank_tol),
            (&mut tolerances.sym_tol, args.sym_tol),
            (&mut tolerances.psd_tol, args.psd_tol),
            (&mut tolerances.residual_tol, args.res_tol),
        ] {
            if let Some(v) = value {
                *slot = v;
            }
        }
        let config = RunConfig {
            command: args.command,
            property,
            x: args.x,
            y: args.y,
            a: args.a,
            b: args.b,
            c: args.c,
            out: args.out,
            report: args.report,
            format: args.format,
            seed: args.seed,
            tolerances,
            shape: InstanceShape {
                m: args.m,
                n: args.n,
                field: args.field.map(|f| match f {
                    FieldArg::Real => Field::Real,
                    FieldArg::Complex => Field::Complex,
                }),
                rank_deficiency: args.rank_deficiency,
            },
        };
        config.validate()?;
        Ok(config)
    }

    /// Checks that every path and option the command needs is present.
    pub fn validate(&self) -> Result<(), CliError> {
        self.tolerances.validate().map_err(CliError::Core)?;
        let need = |present: bool, flag: &str| {
            if present {
                Ok(())
            } else {
                Err(CliError::Input(format!("{} needs {flag}", self.command.name())))
            }
        };
        match self.command {
            Command::Solve | Command::Check => {
                need(self.property.is_some(), "--property")?;
                need(self.x.is_some(), "--X")?;
                need(self.y.is_some(), "--Y")
            }
            Command::Verify => {
                need(self.property.is_some(), "--property")?;
                need(self.a.is_some(), "--A")?;
                need(self.x.is_some(), "--X")?;
                need(self.y.is_some(), "--Y")
            }
            Command::Generate => need(self.property.is_some(), "--property"),
            Command::GenerateSource => {
                need(self.property.is_some(), "--property")?;
                need(self.y.is_some(), "--Y")
            }
            Command::Gap => {
                need(self.b.is_some(), "--B")?;
                need(self.c.is_some(), "--C")
            }
        }
    }
}
