use clap::{Args, Parser, Subcommand, ValueEnum};
use peanoquad_core::{parse, Expr, RuleId};

use crate::output::Format;

#[derive(Debug, Parser)]
#[command(name = "peanoquad", version, about = "Certified Simpson, 3/8 and Boole quadrature")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Integrate an expression with a certified error bound.
    Integrate(IntegrateArgs),
    /// Compare the two-sided bound with the classical sup-norm bound.
    Bounds(BoundsArgs),
    /// Check the kernel integrals, zeros and mean-zero property.
    VerifyKernels(VerifyKernelsArgs),
    /// Print the parsed expression as an s-expression.
    Parse(ParseArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RuleArg {
    Simpson,
    Simpson38,
    Boole,
}

impl From<RuleArg> for RuleId {
    fn from(r: RuleArg) -> RuleId {
        match r {
            RuleArg::Simpson => RuleId::Simpson,
            RuleArg::Simpson38 => RuleId::Simpson38,
            RuleArg::Boole => RuleId::Boole,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Adaptive,
    Uniform,
    Single,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Adaptive => "adaptive",
            Mode::Uniform => "uniform",
            Mode::Single => "single",
        }
    }
}

/// Accepts a float literal or a constant expression such as `pi/2`.
fn real(s: &str) -> Result<f64, String> {
    if let Ok(x) = s.trim().parse::<f64>() {
        return if x.is_finite() {
            Ok(x)
        } else {
            Err(format!("`{s}` is not finite"))
        };
    }
    let e = parse(s).map_err(|e| e.to_string())?;
    if mentions_variable(&e) {
        return Err(format!("`{s}` must not depend on t"));
    }
    e.eval_real(0.0).map_err(|e| e.to_string())
}

fn mentions_variable(e: &Expr) -> bool {
    match e {
        Expr::Const(_) => false,
        Expr::Var => true,
        Expr::Unary(_, c) => mentions_variable(c),
        Expr::Binary(_, l, r) => mentions_variable(l) || mentions_variable(r),
    }
}

#[derive(Debug, Args)]
pub struct IntegrateArgs {
    /// Integrand in the variable `t`, e.g. "exp(-t^2)".
    #[arg(long, allow_hyphen_values = true)]
    pub expr: String,
    /// Lower limit (a float or a constant expression such as "pi").
    #[arg(long, value_parser = real, allow_negative_numbers = true)]
    pub a: f64,
    /// Upper limit.
    #[arg(long, value_parser = real, allow_negative_numbers = true)]
    pub b: f64,
    #[arg(long, value_enum, default_value = "simpson")]
    pub rule: RuleArg,
    /// Target bound on the absolute error; required for adaptive and uniform.
    #[arg(long, value_parser = real)]
    pub eps: Option<f64>,
    #[arg(long, value_enum, default_value = "adaptive")]
    pub mode: Mode,
    #[arg(long, default_value_t = 100_000)]
    pub max_panels: usize,
    /// Halvings used to bound f'' on each panel (default 6 in single mode,
    /// 2 per panel otherwise).
    #[arg(long, value_parser = clap::value_parser!(u32).range(0..=24))]
    pub refine_depth: Option<u32>,
    /// Include every panel in the output, not just a summary.
    #[arg(long)]
    pub list_panels: bool,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub expr: String,
    #[arg(long, value_parser = real, allow_negative_numbers = true)]
    pub a: f64,
    #[arg(long, value_parser = real, allow_negative_numbers = true)]
    pub b: f64,
    #[arg(long, value_enum, default_value = "simpson")]
    pub rule: RuleArg,
    /// Lower bound on f'' to use instead of the computed enclosure.
    #[arg(long, value_parser = real, allow_negative_numbers = true)]
    pub gamma: Option<f64>,
    /// Upper bound on f'' to use instead of the computed enclosure.
    #[arg(long = "Gamma", value_parser = real, allow_negative_numbers = true)]
    pub gamma_upper: Option<f64>,
    #[arg(long, default_value_t = peanoquad_core::DEFAULT_REFINE_DEPTH,
          value_parser = clap::value_parser!(u32).range(0..=24))]
    pub refine_depth: u32,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct VerifyKernelsArgs {
    #[arg(long, value_parser = real, allow_negative_numbers = true, default_value = "0")]
    pub a: f64,
    #[arg(long, value_parser = real, allow_negative_numbers = true, default_value = "1")]
    pub b: f64,
    /// Trapezoid subintervals for the independent estimate (at least 1000).
    #[arg(long, default_value_t = 1_000_000)]
    pub oracle_n: usize,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct ParseArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub expr: String,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

impl Command {
    pub fn format(&self) -> Format {
        match self {
            Command::Integrate(a) => a.format,
            Command::Bounds(a) => a.format,
            Command::VerifyKernels(a) => a.format,
            Command::Parse(a) => a.format,
        }
    }
}
