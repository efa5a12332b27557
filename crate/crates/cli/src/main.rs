//! `spg`: generate set packing game instances, check equilibria, and
//! measure prices of anarchy.
//!
//! Exit codes: 0 verified or done, 1 refuted (a witness is printed) or a
//! report row failed, 2 input error, 3 search budget exhausted.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use spg_core::document::{
    equilibrium_report_to_json, instance_from_str, instance_to_string, poa_to_json, profile_from_str,
    profile_to_json, profile_to_string, to_pretty,
};
use spg_core::equilibria::{enumerate_nash, enumerate_spe_outcomes, verify_collusion, PlayerOrder};
use spg_core::factory::{generate, reference_profiles, GeneratorSpec};
use spg_core::metrics::{compute_opt, greedy_sequential_poa};
use spg_core::registry::{concepts, selectors, ConceptParams};
use spg_core::report::{paper_suite, rows_to_tsv, ReportRow};
use spg_core::{Budget, Error, Instance, Rational, DEFAULT_NODE_BUDGET};

const BUDGET_ENV: &str = "SPG_BUDGET";

#[derive(Parser)]
#[command(name = "spg", version, about = "Set packing games: equilibria and price of anarchy")]
struct Cli {
    /// Node budget for exhaustive searches; overrides SPG_BUDGET.
    #[arg(long, global = true)]
    budget: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build an instance from a named family.
    Generate(GenerateArgs),
    /// Check one profile against an equilibrium concept.
    Verify(VerifyArgs),
    /// Compute a maximum-welfare profile.
    Opt(InstanceArg),
    /// List every alpha-approximate Nash equilibrium.
    Nash(AlphaArgs),
    /// List subgame perfect outcomes for one order, or for every order.
    Spe(SpeArgs),
    /// List every alpha-approximate k-collusion equilibrium.
    Collusion(CollusionArgs),
    /// Measure the price of anarchy.
    Poa(PoaArgs),
    /// Run a bound-reproduction suite and write its tables.
    Report(ReportArgs),
}

#[derive(Clone, Copy, ValueEnum)]
#[value(rename_all = "snake_case")]
enum Family {
    ExTrivial,
    ExAsym,
    ExSym,
    ExSeq,
    ExCollusion,
    RandomExplicit,
    RandomSymmetric,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(value_enum)]
    family: Family,
    #[arg(long)]
    p: Option<u32>,
    #[arg(long)]
    q: Option<u32>,
    #[arg(long)]
    n: Option<u32>,
    #[arg(long)]
    k: Option<u32>,
    #[arg(long)]
    alpha: Option<Rational>,
    #[arg(long)]
    items: Option<u32>,
    #[arg(long, default_value_t = 8)]
    max_weight: u32,
    #[arg(long)]
    copies: Option<u32>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Directory for instance.json and the reference profiles; without it
    /// the instance is printed.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct InstanceArg {
    #[arg(long)]
    instance: PathBuf,
}

#[derive(Args)]
struct AlphaArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long, default_value = "1")]
    alpha: Rational,
}

#[derive(Args)]
struct SpeArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long, default_value = "1")]
    alpha: Rational,
    /// Comma-separated player ids, first mover first.
    #[arg(long)]
    order: Option<String>,
}

#[derive(Args)]
struct CollusionArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long, default_value = "1")]
    alpha: Rational,
    #[arg(long)]
    k: usize,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long)]
    profile: PathBuf,
    /// nash, spe or collusion.
    #[arg(long)]
    concept: String,
    #[arg(long, default_value = "1")]
    alpha: Rational,
    #[arg(long)]
    k: Option<usize>,
    /// Comma-separated player ids, first mover first.
    #[arg(long)]
    order: Option<String>,
}

#[derive(Args)]
struct PoaArgs {
    #[arg(long)]
    instance: PathBuf,
    /// nash, spe, collusion, or spe-greedy for one run with --selector.
    #[arg(long)]
    concept: String,
    #[arg(long, default_value = "1")]
    alpha: Rational,
    #[arg(long)]
    k: Option<usize>,
    /// Order for spe-greedy; defaults to the listed player order.
    #[arg(long)]
    order: Option<String>,
    #[arg(long, default_value = "deadline-greedy")]
    selector: String,
}

#[derive(Args)]
struct ReportArgs {
    #[arg(long, default_value = "paper")]
    suite: String,
    #[arg(long, default_value = "report")]
    out: PathBuf,
}

/// Why a command stopped without producing its normal result.
enum Failure {
    Input(String),
    Budget(Value),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::BudgetExceeded { limit, context } => Failure::Budget(json!({
                "error": "budget exceeded",
                "limit": limit,
                "context": context,
                "hint": format!("raise --budget or {BUDGET_ENV}"),
            })),
            other => Failure::Input(other.to_string()),
        }
    }
}

type CmdResult = Result<ExitCode, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let budget = match resolve_budget(cli.budget) {
        Ok(b) => b,
        Err(msg) => {
            eprintln!("spg: {msg}");
            return ExitCode::from(2);
        }
    };
    match run(cli.command, budget) {
        Ok(code) => code,
        Err(Failure::Input(msg)) => {
            eprintln!("spg: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Budget(diag)) => {
            eprint!("{}", to_pretty(&diag));
            ExitCode::from(3)
        }
    }
}

fn resolve_budget(flag: Option<u64>) -> Result<u64, String> {
    if let Some(b) = flag {
        return Ok(b);
    }
    match std::env::var(BUDGET_ENV) {
        Ok(text) => text
            .trim()
            .parse()
            .map_err(|_| format!("{BUDGET_ENV} must be a node count, got {text:?}")),
        Err(_) => Ok(DEFAULT_NODE_BUDGET),
    }
}

fn run(command: Command, limit: u64) -> CmdResult {
    let mut budget = Budget::new(limit);
    match command {
        Command::Generate(args) => cmd_generate(args),
        Command::Verify(args) => cmd_verify(args, &mut budget),
        Command::Opt(args) => {
            let inst = read_instance(&args.instance)?;
            let (profile, welfare) = compute_opt(&inst, &mut budget)?;
            print(&json!({
                "welfare": welfare.to_fraction_string(),
                "profile": profile_to_json(&inst, &profile),
            }));
            Ok(ExitCode::SUCCESS)
        }
        Command::Nash(args) => {
            let inst = read_instance(&args.instance)?;
            let eqs = enumerate_nash(&inst, &args.alpha, &mut budget)?;
            print(&profiles_json(&inst, &args.alpha, &eqs)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Spe(args) => {
            let inst = read_instance(&args.instance)?;
            let orders = match &args.order {
                Some(o) => vec![parse_order(&inst, o)?],
                None => PlayerOrder::all(inst.player_count()),
            };
            let mut out = Vec::new();
            for order in orders {
                let outcomes = enumerate_spe_outcomes(&inst, &order, &args.alpha, &mut budget)?;
                let mut entry = profiles_json(&inst, &args.alpha, &outcomes)?;
                entry["order"] = json!(order_ids(&inst, &order));
                out.push(entry);
            }
            print(&json!({ "alpha": args.alpha.to_fraction_string(), "orders": out }));
            Ok(ExitCode::SUCCESS)
        }
        Command::Collusion(args) => {
            let inst = read_instance(&args.instance)?;
            let mut found = Vec::new();
            for eq in enumerate_nash(&inst, &args.alpha, &mut budget)? {
                if verify_collusion(&inst, &eq, args.k, &args.alpha, &mut budget)?.verdict {
                    found.push(eq);
                }
            }
            let mut doc = profiles_json(&inst, &args.alpha, &found)?;
            doc["k"] = json!(args.k);
            print(&doc);
            Ok(ExitCode::SUCCESS)
        }
        Command::Poa(args) => cmd_poa(args, &mut budget),
        Command::Report(args) => cmd_report(args, limit),
    }
}

fn print(value: &Value) {
    print!("{}", to_pretty(value));
}

fn read_text(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))
}

fn read_instance(path: &Path) -> Result<Instance, Failure> {
    Ok(instance_from_str(&read_text(path)?)?)
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display())))
}

fn parse_order(inst: &Instance, text: &str) -> Result<PlayerOrder, Failure> {
    let order = text
        .split(',')
        .map(|id| {
            inst.player_index(id.trim())
                .ok_or_else(|| Failure::Input(format!("unknown player {:?} in order", id.trim())))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(PlayerOrder::new(order, inst.player_count())?)
}

fn order_ids(inst: &Instance, order: &PlayerOrder) -> Vec<String> {
    order.as_slice().iter().map(|&p| inst.players()[p].id.clone()).collect()
}

fn profiles_json(inst: &Instance, alpha: &Rational, profiles: &[spg_core::Profile]) -> Result<Value, Failure> {
    let list = profiles
        .iter()
        .map(|p| {
            Ok(json!({
                "welfare": inst.welfare(p)?.to_fraction_string(),
                "profile": profile_to_json(inst, p),
            }))
        })
        .collect::<Result<Vec<_>, Error>>()?;
    Ok(json!({
        "alpha": alpha.to_fraction_string(),
        "count": profiles.len(),
        "profiles": list,
    }))
}

fn generator_spec(args: &GenerateArgs) -> Result<GeneratorSpec, Failure> {
    let need = |v: Option<u32>, name: &str| v.ok_or_else(|| Failure::Input(format!("--{name} is required")));
    Ok(match args.family {
        Family::ExTrivial => GeneratorSpec::ExTrivial,
        Family::ExAsym => GeneratorSpec::ExAsym {
            p: need(args.p, "p")?,
            q: need(args.q, "q")?,
        },
        Family::ExSym => GeneratorSpec::ExSym {
            p: need(args.p, "p")?,
            q: need(args.q, "q")?,
            n: need(args.n, "n")?,
        },
        Family::ExSeq => GeneratorSpec::ExSeq { n: need(args.n, "n")? },
        Family::ExCollusion => GeneratorSpec::ExCollusion {
            n: need(args.n, "n")?,
            k: need(args.k, "k")?,
            alpha: args.alpha.clone().unwrap_or_else(Rational::one),
        },
        Family::RandomExplicit => GeneratorSpec::RandomExplicit {
            n: need(args.n, "n")?,
            items: need(args.items, "items")?,
            max_weight: args.max_weight,
            seed: args.seed,
        },
        Family::RandomSymmetric => GeneratorSpec::RandomSymmetric {
            n: need(args.n, "n")?,
            copies: args.copies.unwrap_or(2),
            seed: args.seed,
        },
    })
}

fn cmd_generate(args: GenerateArgs) -> CmdResult {
    let spec = generator_spec(&args)?;
    let inst = generate(&spec)?;
    let text = instance_to_string(&inst);
    let Some(dir) = &args.out else {
        print!("{text}");
        return Ok(ExitCode::SUCCESS);
    };
    fs::create_dir_all(dir).map_err(|e| Failure::Input(format!("cannot create {}: {e}", dir.display())))?;
    write_file(&dir.join("instance.json"), &text)?;
    let mut written = vec!["instance.json".to_string()];
    match reference_profiles(&spec) {
        Ok(refs) => {
            write_file(&dir.join("opt.json"), &profile_to_string(&inst, &refs.opt))?;
            write_file(&dir.join("bad.json"), &profile_to_string(&inst, &refs.bad_equilibrium))?;
            written.extend(["opt.json".into(), "bad.json".into()]);
        }
        Err(Error::Unsupported(_)) => {}
        Err(e) => return Err(e.into()),
    }
    print(&json!({ "generator": spec, "out": dir.display().to_string(), "files": written }));
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(args: VerifyArgs, budget: &mut Budget) -> CmdResult {
    let inst = read_instance(&args.instance)?;
    let profile = profile_from_str(&inst, &read_text(&args.profile)?)?;
    let registry = concepts();
    let concept = registry.get(&args.concept)?;
    let params = ConceptParams {
        alpha: args.alpha,
        k: args.k,
        order: args.order.as_deref().map(|o| parse_order(&inst, o)).transpose()?,
    };
    let report = concept.verify(&inst, &profile, &params, budget)?;
    print(&equilibrium_report_to_json(&inst, &report));
    Ok(if report.verdict {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_poa(args: PoaArgs, budget: &mut Budget) -> CmdResult {
    let inst = read_instance(&args.instance)?;
    let result = if args.concept == "spe-greedy" {
        let order = match &args.order {
            Some(o) => parse_order(&inst, o)?,
            None => PlayerOrder::identity(inst.player_count()),
        };
        let registry = selectors();
        let selector = registry.get(&args.selector)?;
        greedy_sequential_poa(&inst, &order, &args.alpha, selector, budget)?
    } else {
        let registry = concepts();
        let params = ConceptParams {
            alpha: args.alpha,
            k: args.k,
            order: None,
        };
        registry.get(&args.concept)?.poa(&inst, &params, budget)?
    };
    let mut doc = poa_to_json(&inst, &result);
    if let Some(selector) = (args.concept == "spe-greedy").then_some(args.selector) {
        doc["selector"] = json!(selector);
    }
    print(&doc);
    Ok(ExitCode::SUCCESS)
}

fn cmd_report(args: ReportArgs, limit: u64) -> CmdResult {
    if args.suite != "paper" {
        return Err(Failure::Input(format!("unknown suite {:?}; known: paper", args.suite)));
    }
    fs::create_dir_all(&args.out)
        .map_err(|e| Failure::Input(format!("cannot create {}: {e}", args.out.display())))?;
    eprintln!("{}", ReportRow::TSV_HEADER);
    let rows = paper_suite(limit, &mut |row| eprintln!("{}", row.to_tsv()));
    write_file(&args.out.join("paper.tsv"), &rows_to_tsv(&rows))?;
    let failed = rows.iter().filter(|r| !r.satisfied).count();
    let doc = json!({
        "suite": "paper",
        "rows": rows,
        "satisfied": rows.len() - failed,
        "failed": failed,
    });
    write_file(&args.out.join("paper.json"), &to_pretty(&doc))?;
    print(&json!({
        "suite": "paper",
        "rows": rows.len(),
        "failed": failed,
        "tsv": args.out.join("paper.tsv").display().to_string(),
        "json": args.out.join("paper.json").display().to_string(),
    }));
    Ok(if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}
