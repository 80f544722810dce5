use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use tits_zeta::hecke::{group_algebra_trace, psi_trace, rotation_element, verify_springer, Permutation};
use tits_zeta::partition::{kostka_closed3, kostka_ssyt, partitions_of, Partition};
use tits_zeta::report::{formula_table, run_zeta, Limits, Mode, RunReport, TableKind, Target, Verdict};
use tits_zeta::subspace::default_cache_dir;

const EXIT_MISMATCH: u8 = 1;
const EXIT_INVALID: u8 = 2;

#[derive(Parser)]
#[command(name = "tits-zeta", version, about = "Exact zeta functions of Tits buildings of GL_n(F_q)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute an inverse zeta function by formula, brute force, or both.
    Zeta(ZetaArgs),
    /// Reproduce the per-class formula tables at a given q.
    Tables(TablesArgs),
    /// Hecke algebra checks.
    #[command(subcommand)]
    Hecke(HeckeCommand),
    /// Kostka numbers.
    Kostka(KostkaArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ZetaTarget {
    X0,
    X2,
    Building,
    Product,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Formula,
    Brute,
    Verify,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Format {
    Text,
    Json,
    Latex,
}

#[derive(Args)]
struct ZetaArgs {
    target: ZetaTarget,
    #[arg(long)]
    q: u64,
    #[arg(long)]
    n: Option<usize>,
    /// X0 class: subspaces of dimension k and n - k.
    #[arg(long)]
    k: Option<usize>,
    /// X2 class through the multi-dimension (a, b).
    #[arg(long, requires = "b")]
    a: Option<usize>,
    #[arg(long, requires = "a")]
    b: Option<usize>,
    /// Dimensions of the factors of a product building.
    #[arg(long, value_delimiter = ',')]
    dims: Option<Vec<usize>>,
    #[arg(long, value_enum, default_value = "formula")]
    mode: ModeArg,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Largest graph for an exact det(I - uA); larger ones compare traces.
    #[arg(long)]
    max_vertices: Option<usize>,
    /// Walk length for trace comparisons and cycle enumeration.
    #[arg(long)]
    max_walk_length: Option<usize>,
    /// Do not read or write the subspace cache.
    #[arg(long)]
    no_cache: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    X0,
    X2,
}

#[derive(Args)]
struct TablesArgs {
    #[arg(long, value_enum)]
    which: Which,
    #[arg(long)]
    q: u64,
    #[arg(long)]
    max_n: usize,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Subcommand)]
enum HeckeCommand {
    /// Check that a_{w0}^2 is central with spectrum q^{f_λ}.
    Verify {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: u64,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Traces of e_μ u e_μ on the permutation modules and irreducibles.
    Traces {
        #[arg(long)]
        n: usize,
        #[arg(long, value_delimiter = ',')]
        mu: Vec<usize>,
        /// One-line notation of u; defaults to the block rotation for three
        /// equal blocks and the longest element otherwise.
        #[arg(long, value_delimiter = ',')]
        u: Option<Vec<usize>>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum KostkaMethod {
    Ssyt,
    Closed,
    Both,
}

#[derive(Args)]
struct KostkaArgs {
    #[arg(long, value_delimiter = ',')]
    lambda: Vec<usize>,
    #[arg(long, value_delimiter = ',')]
    mu: Vec<usize>,
    #[arg(long, value_enum, default_value = "ssyt")]
    method: KostkaMethod,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Zeta(args) => cmd_zeta(args),
        Command::Tables(args) => cmd_tables(args),
        Command::Hecke(cmd) => cmd_hecke(cmd),
        Command::Kostka(args) => cmd_kostka(args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INVALID)
        }
    }
}

fn target_of(args: &ZetaArgs) -> Result<Target, String> {
    let need_n = || args.n.ok_or_else(|| "--n is required".to_string());
    Ok(match args.target {
        ZetaTarget::X0 => Target::X0 { n: need_n()?, k: args.k },
        ZetaTarget::X2 => Target::X2 { n: need_n()?, mdim: args.a.zip(args.b) },
        ZetaTarget::Building => Target::Building { n: need_n()? },
        ZetaTarget::Product => Target::Product {
            dims: args.dims.clone().ok_or_else(|| "--dims is required for products".to_string())?,
        },
    })
}

fn cmd_zeta(args: ZetaArgs) -> Result<u8, String> {
    let target = target_of(&args)?;
    let mut limits = Limits {
        max_walk_length: args.max_walk_length,
        cache_dir: if args.no_cache { None } else { default_cache_dir() },
        ..Limits::default()
    };
    if let Some(v) = args.max_vertices {
        limits.max_vertices = v;
    }
    let mode = match args.mode {
        ModeArg::Formula => Mode::Formula,
        ModeArg::Brute => Mode::Brute,
        ModeArg::Verify => Mode::Verify,
    };
    let report = run_zeta(&target, args.q, mode, &limits).map_err(|e| e.to_string())?;
    emit(&report, args.format);
    Ok(if report.verdict == Verdict::Mismatch { EXIT_MISMATCH } else { 0 })
}

fn emit(report: &RunReport, format: Format) {
    match format {
        Format::Text => print!("{}", report.to_text()),
        Format::Json => println!("{}", report.to_json()),
        Format::Latex => print!("{}", report.to_latex()),
    }
}

fn cmd_tables(args: TablesArgs) -> Result<u8, String> {
    let kind = match args.which {
        Which::X0 => TableKind::X0,
        Which::X2 => TableKind::X2,
    };
    let table = formula_table(kind, args.q, args.max_n).map_err(|e| e.to_string())?;
    match args.format {
        Format::Text => print!("{}", table.to_text()),
        Format::Json => println!("{}", table.to_json()),
        Format::Latex => print!("{}", table.to_latex()),
    }
    Ok(0)
}

fn cmd_hecke(cmd: HeckeCommand) -> Result<u8, String> {
    match cmd {
        HeckeCommand::Verify { n, q, format } => {
            let report = match verify_springer(n, q) {
                Ok(r) => r,
                Err(tits_zeta::hecke::HeckeError::VerificationFailed(msg)) => {
                    eprintln!("verification failed: {msg}");
                    return Ok(EXIT_MISMATCH);
                }
                Err(e) => return Err(e.to_string()),
            };
            if format == Format::Json {
                let spectrum: Vec<_> = report
                    .spectrum
                    .iter()
                    .map(|(f, (want, got))| json!({"f": f, "expected": want, "observed": got}))
                    .collect();
                let v = json!({"version": 1, "kind": "springer", "n": n, "q": q,
                    "central": true, "spectrum": spectrum, "verdict": "match"});
                println!("{v}");
            } else {
                println!("springer n={n} q={q}");
                println!("a_w0^2 central: yes");
                for (f, (want, got)) in &report.spectrum {
                    println!("  eigenvalue q^{f}: multiplicity {got} (expected {want})");
                }
                println!("trace: {}", report.trace);
                println!("verdict: match");
            }
            Ok(0)
        }
        HeckeCommand::Traces { n, mu, u, format } => {
            if mu.iter().sum::<usize>() != n {
                return Err(format!("--mu must sum to {n}"));
            }
            let u = match u {
                Some(line) => Permutation::from_one_line(&line).map_err(|e| e.to_string())?,
                None if mu.len() == 3 && mu.iter().all(|&m| m == mu[0]) => rotation_element(mu[0]),
                None => Permutation::longest(n),
            };
            if u.n() != n {
                return Err(format!("u must be a permutation of 1..{n}"));
            }
            let mu_part = Partition::new(mu.clone());
            let mut rows = Vec::new();
            for lambda in partitions_of(n).into_iter().filter(|l| l.dominates(&mu_part)) {
                let comp: Vec<i64> = lambda.parts().iter().map(|&x| x as i64).collect();
                let phi = group_algebra_trace(&mu, &u, &comp).map_err(|e| e.to_string())?;
                let psi = psi_trace(&mu, &u, &lambda).map_err(|e| e.to_string())?;
                rows.push((lambda, phi, psi));
            }
            if format == Format::Json {
                let rows: Vec<_> = rows
                    .iter()
                    .map(|(l, phi, psi)| json!({"lambda": l.parts(), "phi": phi.to_string(), "psi": psi.to_string()}))
                    .collect();
                println!("{}", json!({"version": 1, "kind": "traces", "n": n, "mu": mu, "u": u.one_line(), "rows": rows}));
            } else {
                println!("traces of e_mu u e_mu, mu = {mu_part}, u = {u}");
                for (l, phi, psi) in rows {
                    println!("  lambda = {l}: phi = {phi}, psi = {psi}");
                }
            }
            Ok(0)
        }
    }
}

fn cmd_kostka(args: KostkaArgs) -> Result<u8, String> {
    let lambda = Partition::new(args.lambda.clone());
    if lambda.parts() != args.lambda.as_slice() {
        return Err("--lambda must be a partition (weakly decreasing, positive)".into());
    }
    let ssyt = || kostka_ssyt(&lambda, &args.mu).map_err(|e| e.to_string());
    let closed = || kostka_closed3(&lambda, &Partition::new(args.mu.clone())).map_err(|e| e.to_string());
    match args.method {
        KostkaMethod::Ssyt => println!("{}", ssyt()?),
        KostkaMethod::Closed => println!("{}", closed()?),
        KostkaMethod::Both => {
            let (a, b) = (ssyt()?, closed()?);
            if a != b {
                println!("ssyt = {a}, closed = {b}: disagreement");
                return Ok(EXIT_MISMATCH);
            }
            println!("{a} (ssyt and closed form agree)");
        }
    }
    Ok(0)
}
