use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use species_forge_cli::{
    cmd_antipode, cmd_fmu, cmd_fpi, cmd_hasse, cmd_primitives, cmd_reconstruct_pi, cmd_table, render_suite, cmd_check,
    validate_max_n, CliError, Output, Rendered, RunConfig, Suite, Variant, CEILING_ENV,
};

#[derive(Parser)]
#[command(name = "species-forge", version, about = "Exact certification of Hopf monoids in species")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// E, E_C:<c>, X_C:<c>, Perm, L, Pi or S(<spec>)
    #[arg(long)]
    species: String,
    #[arg(long, default_value_t = 3)]
    max_n: usize,
    #[arg(long, value_enum, default_value_t = OutputArg::Json)]
    output: OutputArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputArg {
    Json,
    Md,
    Dot,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Axioms,
    Ssd,
    Lsd,
    Order,
    Bases,
    Full,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    MuPi,
    MuMu,
    PiMu,
    PiPi,
}

#[derive(Subcommand)]
enum Command {
    /// Run a certification suite and emit a report
    Check {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = SuiteArg::Full)]
        suite: SuiteArg,
        /// Comma-separated check names; overrides --suite
        #[arg(long, value_delimiter = ',')]
        checks: Option<Vec<String>>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        fail_fast: bool,
        /// Record wall-clock time per check (breaks byte-stability)
        #[arg(long)]
        timings: bool,
    },
    /// Component dimensions and structure constants
    Table {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        constants: bool,
        #[arg(long, value_enum)]
        variant: Option<VariantArg>,
    },
    /// Hasse diagram of the order on P[{1..max_n}]
    Hasse {
        #[command(flatten)]
        common: Common,
    },
    /// Takeuchi antipode of every basis element
    Antipode {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        variant: Option<VariantArg>,
    },
    /// Bases of the primitive subspaces
    Primitives {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = VariantArg::MuMu)]
        variant: VariantArg,
    },
    /// The isomorphism S(Q) -> P of a self-compatible product
    Fmu {
        #[command(flatten)]
        common: Common,
    },
    /// The isomorphism E_C -> P of a bijective coproduct
    Fpi {
        #[command(flatten)]
        common: Common,
    },
    /// Rebuild the coproduct from the product and the order
    ReconstructPi {
        #[command(flatten)]
        common: Common,
    },
}

fn output(o: OutputArg) -> Output {
    match o {
        OutputArg::Json => Output::Json,
        OutputArg::Md => Output::Md,
        OutputArg::Dot => Output::Dot,
    }
}

fn variant(v: Option<VariantArg>) -> Variant {
    match v {
        None => Variant::Auto,
        Some(VariantArg::MuPi) => Variant::MuPi,
        Some(VariantArg::MuMu) => Variant::MuMu,
        Some(VariantArg::PiMu) => Variant::PiMu,
        Some(VariantArg::PiPi) => Variant::PiPi,
    }
}

fn run(cli: Cli) -> Result<Rendered, CliError> {
    let ceiling = std::env::var(CEILING_ENV).ok();
    let validate = |c: &Common| {
        validate_max_n(c.max_n, ceiling.as_deref())?;
        if c.max_n >= 5 {
            eprintln!("warning: n = {} enumerations are large; expect long runtimes", c.max_n);
        }
        Ok::<_, CliError>(())
    };
    let rendered = match cli.command {
        Command::Check { common, suite, checks, seed, fail_fast, timings } => {
            validate(&common)?;
            let suite = match suite {
                SuiteArg::Axioms => Suite::Axioms,
                SuiteArg::Ssd => Suite::Ssd,
                SuiteArg::Lsd => Suite::Lsd,
                SuiteArg::Order => Suite::Order,
                SuiteArg::Bases => Suite::Bases,
                SuiteArg::Full => Suite::Full,
            };
            let cfg = RunConfig {
                species: common.species,
                suite,
                checks,
                max_n: common.max_n,
                output: output(common.output),
                seed,
                fail_fast,
                timings,
            };
            let report = cmd_check(&cfg)?;
            Rendered { text: render_suite(&report, cfg.output)?, exit_code: report.exit_code }
        }
        Command::Table { common, constants, variant: v } => {
            validate(&common)?;
            cmd_table(&common.species, common.max_n, constants, variant(v), output(common.output))?.into()
        }
        Command::Hasse { common } => {
            validate(&common)?;
            cmd_hasse(&common.species, common.max_n, output(common.output))?.into()
        }
        Command::Antipode { common, variant: v } => {
            validate(&common)?;
            cmd_antipode(&common.species, common.max_n, variant(v), output(common.output))?
        }
        Command::Primitives { common, variant: v } => {
            validate(&common)?;
            cmd_primitives(&common.species, common.max_n, variant(Some(v)), output(common.output))?
        }
        Command::Fmu { common } => {
            validate(&common)?;
            cmd_fmu(&common.species, common.max_n, output(common.output))?
        }
        Command::Fpi { common } => {
            validate(&common)?;
            cmd_fpi(&common.species, common.max_n, output(common.output))?
        }
        Command::ReconstructPi { common } => {
            validate(&common)?;
            cmd_reconstruct_pi(&common.species, common.max_n, output(common.output))?
        }
    };
    Ok(rendered)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(r) => {
            print!("{}", r.text);
            ExitCode::from(r.exit_code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
    }
}
