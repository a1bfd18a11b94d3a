//! `devmodal`: checks, sweeps and reports over development models.
//!
//! Exit codes: 0 when every check passed, 1 when a check failed (the
//! failing case is printed), 2 on usage or input errors.

mod commands;
mod report;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use report::Format;

#[derive(Parser)]
#[command(
    name = "devmodal",
    version,
    about = "Development models for sorted first-order modal logic"
)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
pub struct Common {
    /// Seed for randomized sweeps.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Number of sweep cases.
    #[arg(long, global = true)]
    pub count: Option<u64>,
    /// Horizon for bounded and windowed checks.
    #[arg(long, global = true)]
    pub horizon: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Largest poset size for forcing sweeps.
    #[arg(long, global = true)]
    pub max_poset: Option<usize>,
    /// Largest name rank for forcing sweeps.
    #[arg(long, global = true)]
    pub rank: Option<usize>,
    /// Modal depth or fragment depth, per subcommand.
    #[arg(long, global = true)]
    pub depth: Option<usize>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate a formula on a development model or lasso.
    Check(commands::CheckArgs),
    /// Validate a development model or lasso.
    Validate(commands::ModelArgs),
    /// Potentialist translation or dynamic substitution of a formula.
    Translate(commands::TranslateArgs),
    /// Mirroring and convergence sweeps.
    Mirror,
    /// Modal axiom sweep, plus a fork frame that must violate G.
    Cmp,
    /// Teleology sweep, or one teleology report.
    Tele(commands::TeleArgs),
    /// Σ₂ certificates with exhaustive verification.
    Sigma2(commands::Sigma2Args),
    /// Reflection model over a chain of substructures.
    Reflect(commands::ReflectArgs),
    /// Forcing sweep over small posets, ideals and names.
    Force(commands::ForceArgs),
    /// Revision runs on sentence networks.
    Revise(commands::ReviseArgs),
    /// Rational nets, convergence and equivalence.
    Reals(commands::RealsArgs),
    /// Type fragments over arithmetic.
    Types(commands::TypesArgs),
    /// Lasso evaluation or bounded checking on a stream.
    Omega(commands::OmegaArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = std::env::var("DEVMODAL_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
    {
        // fails only if a pool already exists
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global();
    }
    let c = &cli.common;
    let result = match cli.cmd {
        Cmd::Check(a) => commands::check(c, &a),
        Cmd::Validate(a) => commands::validate(&a),
        Cmd::Translate(a) => commands::translate(c, &a),
        Cmd::Mirror => Ok(commands::mirror(c)),
        Cmd::Cmp => commands::cmp(c),
        Cmd::Tele(a) => commands::tele(c, &a),
        Cmd::Sigma2(a) => commands::sigma2(&a),
        Cmd::Reflect(a) => commands::reflect(&a),
        Cmd::Force(a) => commands::force(c, &a),
        Cmd::Revise(a) => commands::revise(c, &a),
        Cmd::Reals(a) => commands::reals(c, &a),
        Cmd::Types(a) => commands::types(c, &a),
        Cmd::Omega(a) => commands::omega(c, &a),
    };
    match result {
        Ok(r) => {
            print!("{}", r.render(c.format));
            if r.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
