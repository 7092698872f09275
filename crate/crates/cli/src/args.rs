use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "froblab",
    version,
    about = "Frobenius powers, Groebner bases and tight-closure probes over F_p"
)]
pub struct Cli {
    /// Write the report here instead of standard output.
    #[arg(short, long, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug)]
pub struct Src {
    /// Session file describing the ring, ideals and elements.
    #[arg(long)]
    pub file: PathBuf,
    /// Name of the ideal to work on.
    #[arg(long)]
    pub ideal: String,
}

#[derive(Args, Debug)]
pub struct Probe {
    #[command(flatten)]
    pub src: Src,
    /// Element name (`u` or `x` of the probe).
    #[arg(long)]
    pub elem: String,
    /// Test element name.
    #[arg(long = "c")]
    pub c: String,
    #[arg(long)]
    pub emax: u32,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
pub enum OrderArg {
    Lex,
    Grevlex,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Reduced Groebner basis.
    Gb {
        #[command(flatten)]
        src: Src,
        #[arg(long, value_enum)]
        order: Option<OrderArg>,
    },
    /// Ideal membership.
    Member {
        #[command(flatten)]
        src: Src,
        #[arg(long)]
        elem: String,
    },
    /// Colon by an element (`--elem`) or by an ideal (`--by`).
    Colon {
        #[command(flatten)]
        src: Src,
        #[arg(long, conflicts_with = "by", required_unless_present = "by")]
        elem: Option<String>,
        #[arg(long)]
        by: Option<String>,
    },
    /// Saturation, by default with respect to the homogeneous maximal ideal.
    Sat {
        #[command(flatten)]
        src: Src,
        #[arg(long)]
        by: Option<String>,
    },
    /// Frobenius bracket power `I^[p^e]`.
    Bracket {
        #[command(flatten)]
        src: Src,
        #[arg(long)]
        e: u32,
    },
    /// Length of `R/I` for zero-dimensional `I`.
    Colength {
        #[command(flatten)]
        src: Src,
    },
    /// Tight-closure evidence rows `c*u^q ∈ I^[q]`.
    Tc {
        #[command(flatten)]
        probe: Probe,
        /// A known test exponent `q0`; member evidence at `q ≥ q0` becomes proof.
        #[arg(long)]
        test_exponent: Option<u32>,
    },
    /// Frobenius-closure rows `u^q ∈ I^[q]`.
    Fc {
        #[command(flatten)]
        src: Src,
        #[arg(long)]
        elem: String,
        #[arg(long)]
        emax: u32,
    },
    /// Colon chain `J_q = I^[q] : c*x^q` with the radical monotonicity check.
    Chain {
        #[command(flatten)]
        probe: Probe,
    },
    /// Stable radical of the colon chain.
    Stableradical {
        #[command(flatten)]
        probe: Probe,
    },
    /// Clearing rows `y^q ∈ J_q`.
    Clear {
        #[command(flatten)]
        probe: Probe,
        #[arg(long)]
        y: String,
        #[arg(long, default_value_t = 0)]
        emin: u32,
    },
    /// Growth of `N_q` with `m^(N_q) ⊆ J_q`.
    C2probe {
        #[command(flatten)]
        probe: Probe,
        /// Bound on `N_q/q`, as `a` or `a/b`.
        #[arg(long, default_value = "8")]
        tolerance: String,
    },
    /// Least `N` with `m^N` killing `H⁰_m(R/J^[q])`.
    Lcprobe {
        #[command(flatten)]
        src: Src,
        #[arg(long)]
        emax: u32,
        #[arg(long, default_value = "5")]
        tolerance: String,
    },
    /// Hilbert-Kunz length series.
    Hk {
        #[command(flatten)]
        src: Src,
        #[arg(long)]
        emax: u32,
        /// Also report `λ(R/J_q)` for this `x` (needs `--c`).
        #[arg(long, requires = "c")]
        elem: Option<String>,
        #[arg(long = "c", requires = "elem")]
        c: Option<String>,
    },
    /// Integral-dependence certificate for `u` over `I` from a strong test ideal.
    Strongtest {
        #[command(flatten)]
        src: Src,
        #[arg(long)]
        elem: String,
        /// Ideal whose generators span the strong test ideal.
        #[arg(long)]
        j: String,
        /// Second element for the two-variable form `J*u ⊆ J*v + J*I`.
        #[arg(long)]
        v: Option<String>,
    },
    /// Test-exponent consistency probe over candidate elements.
    Testexp {
        #[command(flatten)]
        src: Src,
        #[arg(long = "c")]
        c: String,
        #[arg(long, value_delimiter = ',')]
        cands: Vec<String>,
        #[arg(long)]
        emax: u32,
    },
    /// Built-in fixtures.
    Corpus {
        #[command(subcommand)]
        action: CorpusAction,
    },
}

#[derive(Subcommand, Debug)]
pub enum CorpusAction {
    /// Run every expected entry of a fixture.
    Run(FixtureArgs),
    /// Print a fixture as a session file.
    Export(FixtureArgs),
    /// List fixture names.
    List,
}

#[derive(Args, Debug)]
pub struct FixtureArgs {
    pub name: String,
    #[arg(short, long)]
    pub p: u64,
    /// Number of variables (regular fixture only).
    #[arg(short, long, default_value_t = 2)]
    pub n: usize,
}
