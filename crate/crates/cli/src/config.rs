use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use crate::report::Format;
use crate::Failure;

/// Caps `--max-m` of the symbolic suites unless overridden.
pub const DEFAULT_MAX_SYMBOLIC_M: usize = 12;
pub const MAX_SYMBOLIC_ENV: &str = "CYCDEX_MAX_SYMBOLIC_M";

#[derive(Debug, Parser)]
#[command(name = "cycdex", version, about = "Exact exponential-formula sequences, inequality checks and certificates")]
pub struct Cli {
    #[command(flatten)]
    pub shared: Shared,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Shared {
    /// Truncation order.
    #[arg(long = "K", global = true)]
    pub k: Option<usize>,
    /// Decimal digits for transcendental quantities.
    #[arg(long, global = true)]
    pub digits: Option<u32>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// JSON file with defaults; command-line flags win.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// a_k and b_k from weights c_1, c_2, ...
    Expand {
        #[arg(long)]
        c: String,
    },
    /// Normalized masses Q_n of a compound Poisson law.
    Panjer {
        #[arg(long)]
        lambda: String,
        /// Jump masses f_0, f_1, ...
        #[arg(long)]
        f: String,
    },
    /// r_k from masses P_0, P_1, ...
    RecoverR {
        #[arg(long)]
        p: String,
    },
    #[command(subcommand)]
    Check(CheckCmd),
    #[command(subcommand)]
    Verify(VerifyCmd),
    #[command(subcommand)]
    Certify(CertifyCmd),
    #[command(subcommand)]
    Examples(ExamplesCmd),
    /// Summed expansion of several weight families ("1,1/2;2,1").
    Convolve {
        #[arg(long)]
        families: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ShapeArg {
    Concave,
    Convex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BoundaryArg {
    /// c_1^2 > c_2
    Ge,
    /// c_1^2 < c_2
    Le,
}

#[derive(Debug, Subcommand)]
pub enum CheckCmd {
    /// Sign pattern of s_k^2 - s_{k-1}s_{k+1}.
    Logconcavity {
        #[arg(long)]
        seq: String,
        /// Index of the first entry.
        #[arg(long, default_value_t = 0)]
        first_index: usize,
        /// Fail unless the sequence has this shape.
        #[arg(long, value_enum)]
        expect: Option<ShapeArg>,
    },
    /// Refined bounds predicted by the weight shape.
    Theorem1 {
        #[arg(long, conflicts_with = "random")]
        c: Option<String>,
        /// Draw seeded random weights of this shape instead of --c.
        #[arg(long, value_enum)]
        random: Option<ShapeArg>,
        #[arg(long, value_enum, default_value = "ge")]
        boundary: BoundaryArg,
    },
    /// Convexity grid for summed log-convex families ("1,2,4;1,3,9").
    Corollary {
        #[arg(long)]
        families: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Props,
    Theorem1proof,
    Hansen,
    Dmdn,
}

#[derive(Debug, Subcommand)]
pub enum VerifyCmd {
    /// Exact symbolic identity suites.
    Identities {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long)]
        max_m: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TargetArg {
    Poly1,
    Poly2,
}

#[derive(Debug, Subcommand)]
pub enum CertifyCmd {
    /// Y certificate for (n+1) b_m b_n - m b_{m-1} b_{n+1}.
    Poly1 {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        /// Degree bound; defaults to the target degree.
        #[arg(long)]
        bound: Option<u32>,
    },
    /// Z/X ratio certificate for m b_{m-1} b_{n+1} - (n+1) b_m b_n.
    Poly2 {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
    },
    /// Search for a plain Z certificate of the poly2 target.
    Conjecture {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        bound: Option<u32>,
    },
    /// Re-validate a certificate file against a target.
    Validate {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum)]
        target: TargetArg,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum ExamplesCmd {
    /// c_k = p (1-p)^{k-1}; with --p2, the sum of two such families.
    Geometric {
        #[arg(long)]
        p: String,
        #[arg(long)]
        p2: Option<String>,
    },
    /// c_k = p^k / (k |log(1-p)|).
    Logseries {
        #[arg(long)]
        p: String,
    },
}

/// Config file schema.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(rename = "K")]
    pub k: Option<usize>,
    pub digits: Option<u32>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub max_symbolic_m: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct Settings {
    pub k: Option<usize>,
    pub digits: u32,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub max_symbolic_m: usize,
}

impl Settings {
    pub fn resolve(flags: &Shared) -> Result<Self, Failure> {
        let file = match &flags.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))?;
                serde_json::from_str::<RunConfig>(&text)
                    .map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))?
            }
            None => RunConfig::default(),
        };
        let env_cap = match std::env::var(MAX_SYMBOLIC_ENV) {
            Ok(v) => Some(
                v.trim()
                    .parse::<usize>()
                    .map_err(|_| Failure::invalid(format!("{MAX_SYMBOLIC_ENV}={v:?} is not a number")))?,
            ),
            Err(_) => None,
        };
        Ok(Settings {
            k: flags.k.or(file.k),
            digits: flags.digits.or(file.digits).unwrap_or(50),
            seed: flags.seed.or(file.seed).unwrap_or(0),
            out: flags.out.clone().or(file.out),
            format: flags.format.or(file.format).unwrap_or(Format::Json),
            max_symbolic_m: env_cap.or(file.max_symbolic_m).unwrap_or(DEFAULT_MAX_SYMBOLIC_M),
        })
    }

    pub fn order_or(&self, default: usize) -> usize {
        self.k.unwrap_or(default)
    }
}
