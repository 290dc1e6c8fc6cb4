//! Argument parsing.

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::sampling::DEFAULT_SEED;

#[derive(Debug, Parser)]
#[command(
    name = "slchar",
    version,
    about = "Characters of sl(l) singlet-type vertex algebras: series, asymptotics and identity checks"
)]
pub struct Cli {
    /// Working precision in bits.
    #[arg(long, global = true, env = "SLCHAR_PREC", default_value_t = 256)]
    pub prec: u32,
    /// Seed for sampled verification points.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Output format for tables.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AsymKind {
    /// Full expansion to order N (l = 3 only).
    Full,
    /// Leading term only.
    Leading,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModularFamily {
    /// S-transform of the character numerators, both signs of Im z.
    S,
    /// General SL2(Z) transform of a partial theta function.
    General,
    /// The half-index theta identity.
    HalfIndex,
}

#[derive(Debug, Args)]
pub struct SeriesArgs {
    #[arg(long)]
    pub ell: u32,
    #[arg(long)]
    pub s: u32,
    /// Number of q-powers kept.
    #[arg(long, default_value_t = 20)]
    pub trunc: i64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Head of the character numerator F_(l,s).
    Coeffs {
        #[command(flatten)]
        series: SeriesArgs,
        /// Also compute the theta-function route and require equality.
        #[arg(long)]
        check: bool,
    },
    /// Head of the character ch[V_s].
    Char {
        #[command(flatten)]
        series: SeriesArgs,
    },
    /// Table of ch(e^-t) against its asymptotic expansion.
    Asym {
        #[arg(long)]
        ell: u32,
        #[arg(long)]
        s: u32,
        /// Comma-separated t values.
        #[arg(long, default_value = "0.2,0.1,0.05")]
        t: String,
        /// Expansion order.
        #[arg(long = "N", default_value_t = 3)]
        n: usize,
        #[arg(long, value_enum, default_value_t = AsymKind::Full)]
        kind: AsymKind,
    },
    /// Table of ch[V_s](it)/ch[V_0](it).
    Qdim {
        #[arg(long)]
        ell: u32,
        #[arg(long)]
        s: u32,
        #[arg(long, default_value = "0.2,0.1,0.05")]
        t: String,
    },
    /// Exact constant identities for l up to the given bound.
    VerifyAppendix {
        #[arg(long, default_value_t = 20)]
        ell_max: u32,
    },
    /// Product route against theta route, and the constant-term law.
    VerifyRoutes {
        #[arg(long, default_value = "3,4,5,6")]
        ell: String,
        #[arg(long, default_value_t = 3)]
        s_max: u32,
        #[arg(long, default_value_t = 40)]
        trunc: i64,
    },
    /// Multivariable quadrature against the residue decomposition.
    VerifyDecomposition {
        #[arg(long, default_value = "2,3,4")]
        ell: String,
        #[arg(long, default_value_t = 2)]
        s_max: u32,
        #[arg(long, default_value_t = 5)]
        points: usize,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Modular transformation identities.
    VerifyModular {
        #[arg(long, value_enum, default_value_t = ModularFamily::S)]
        family: ModularFamily,
        /// l for the S family.
        #[arg(long, default_value_t = 3)]
        ell: u32,
        /// Largest s for sampled S-family points.
        #[arg(long, default_value_t = 2)]
        s_max: u32,
        /// Matrix a,b,c,d for the general family (c > 0).
        #[arg(long, default_value = "0,-1,1,0", allow_hyphen_values = true)]
        matrix: String,
        #[arg(long, default_value = "3/2")]
        r: String,
        #[arg(long, default_value_t = 1)]
        eps: u8,
        #[arg(long = "M", default_value = "3/2")]
        m: String,
        /// Evaluate at this z (re,im) instead of sampling.
        #[arg(long, allow_hyphen_values = true)]
        z: Option<String>,
        /// Evaluate at this tau (re,im) instead of sampling.
        #[arg(long, allow_hyphen_values = true)]
        tau: Option<String>,
        #[arg(long, default_value_t = 10)]
        points: usize,
        #[arg(long, default_value_t = 1e-15)]
        tol: f64,
    },
    /// Convergence orders of the Euler-Maclaurin expansions, plus the exact
    /// Bernoulli identities they rest on.
    VerifyEm {
        #[arg(long, default_value_t = 1)]
        j: u32,
        #[arg(long, default_value = "1/6")]
        r: String,
        /// Largest expansion order.
        #[arg(long = "N", default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 0.1)]
        t: f64,
        /// Allowed deviation from the predicted order.
        #[arg(long, default_value_t = 0.3)]
        slack: f64,
    },
}
