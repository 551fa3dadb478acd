//! `gt`: check, run and compare global transformations of graphs and other
//! finite presheaves stored as JSON.

use std::fmt::Display;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand};
use gt_core::json::{self, JsonError};
use gt_core::rules::Incrementality;
use gt_core::{
    batch_step, check_incremental, find_monos, is_isomorphic, online_step_with, validate_rule_system, OnlineOptions,
    Presheaf, RuleSystem,
};

const PARSE: u8 = 1;
const NOT_INCREMENTAL: u8 = 2;
const INVALID: u8 = 3;
const MISMATCH: u8 = 4;

#[derive(Parser)]
#[command(name = "gt", version, about = "Global transformations of finite presheaves")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a rule system and decide whether it is incremental.
    Check {
        #[arg(long)]
        rules: PathBuf,
    },
    /// Apply the online step `--steps` times.
    Run {
        #[arg(long)]
        rules: PathBuf,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        steps: usize,
        #[arg(long)]
        output: PathBuf,
        /// Run non-incremental systems too, reporting non-mono pushout legs.
        #[arg(long)]
        unchecked: bool,
    },
    /// Apply one step as the colimit of the whole instance diagram.
    Oracle {
        #[arg(long)]
        rules: PathBuf,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
    },
    /// Compare the online step with the colimit oracle up to isomorphism.
    Compare {
        #[arg(long)]
        rules: PathBuf,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        unchecked: bool,
    },
    /// List the monomorphisms from a pattern into a target.
    Match {
        #[arg(long)]
        pattern: PathBuf,
        #[arg(long)]
        target: PathBuf,
        /// Rule system whose base category both files use.
        #[arg(long)]
        rules: PathBuf,
    },
}

/// A non-zero exit with its message for stderr.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Display) -> Self {
        Failure { code, message: message.to_string() }
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Check { rules } => check(&rules),
        Command::Run { rules, input, steps, output, unchecked } => run(&rules, &input, steps, &output, unchecked),
        Command::Oracle { rules, input, output } => oracle(&rules, &input, &output),
        Command::Compare { rules, input, unchecked } => compare(&rules, &input, unchecked),
        Command::Match { pattern, target, rules } => matches(&pattern, &target, &rules),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("gt: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::new(PARSE, format!("{}: {e}", path.display())))
}

fn write(path: &Path, contents: &str) -> Outcome {
    fs::write(path, contents).map_err(|e| Failure::new(PARSE, format!("{}: {e}", path.display())))
}

fn json_failure(path: &Path, e: JsonError) -> Failure {
    let code = if e.is_validation() { INVALID } else { PARSE };
    Failure::new(code, format!("{}: {e}", path.display()))
}

/// Parses a rule system and rejects it if validation reports errors.
fn load_rules(path: &Path) -> Result<RuleSystem, Failure> {
    let rs = json::rule_system_from_str(&read(path)?).map_err(|e| json_failure(path, e))?;
    let report = validate_rule_system(&rs);
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    if let Some(first) = report.errors.first() {
        for e in &report.errors[1..] {
            eprintln!("error: {e}");
        }
        return Err(Failure::new(INVALID, format!("{}: {first}", path.display())));
    }
    Ok(rs)
}

fn load_presheaf(rs: &RuleSystem, path: &Path) -> Result<Arc<Presheaf>, Failure> {
    json::presheaf_from_str(rs.base(), &read(path)?).map(Arc::new).map_err(|e| json_failure(path, e))
}

fn require_incremental(rs: &RuleSystem) -> Outcome {
    match check_incremental(rs) {
        Incrementality::Incremental => Ok(()),
        Incrementality::NotIncremental(w) => Err(Failure::new(
            NOT_INCREMENTAL,
            format!("rule system is not incremental: {w}; pass --unchecked to run anyway"),
        )),
    }
}

fn counts(p: &Presheaf) -> String {
    let objects = p.base().objects();
    objects.iter().zip(p.counts()).map(|(o, n)| format!("{o}={n}")).collect::<Vec<_>>().join(" ")
}

fn check(rules: &Path) -> Outcome {
    let rs = load_rules(rules)?;
    match check_incremental(&rs) {
        Incrementality::Incremental => {
            println!("incremental: {} rules, {} closure members", rs.rules().len(), rs.closure().len());
            Ok(())
        }
        Incrementality::NotIncremental(w) => {
            println!("not incremental: {w}");
            Err(Failure::new(NOT_INCREMENTAL, "rule system is not incremental"))
        }
    }
}

fn run(rules: &Path, input: &Path, steps: usize, output: &Path, unchecked: bool) -> Outcome {
    let rs = load_rules(rules)?;
    let mut cur = load_presheaf(&rs, input)?;
    if !unchecked {
        require_incremental(&rs)?;
    }
    for step in 1..=steps {
        let (next, report) = online_step_with(&rs, &cur, OnlineOptions::default());
        for n in &report.non_mono {
            eprintln!("step {step}: pushout {} along {} has a non-mono leg", n.index, n.maximal);
        }
        cur = Arc::new(next.relabel(&format!("{step}:")));
    }
    write(output, &json::presheaf_to_string(&cur))?;
    println!("{}", counts(&cur));
    Ok(())
}

fn oracle(rules: &Path, input: &Path, output: &Path) -> Outcome {
    let rs = load_rules(rules)?;
    let p = load_presheaf(&rs, input)?;
    let result = batch_step(&rs, &p);
    if result.thinness_violations > 0 {
        eprintln!("warning: {} repeated comma morphisms", result.thinness_violations);
    }
    write(output, &json::presheaf_to_string(result.apex()))?;
    println!("{}", counts(result.apex()));
    Ok(())
}

fn compare(rules: &Path, input: &Path, unchecked: bool) -> Outcome {
    let rs = load_rules(rules)?;
    let p = load_presheaf(&rs, input)?;
    if !unchecked {
        require_incremental(&rs)?;
    }
    let (online, report) = online_step_with(&rs, &p, OnlineOptions::default());
    let online = Arc::new(online);
    let batch = batch_step(&rs, &p);
    println!("online {}", counts(&online));
    println!("batch  {}", counts(batch.apex()));
    if !report.is_accretive() {
        println!("non-mono pushout legs: {}", report.non_mono.len());
    }
    if is_isomorphic(&online, batch.apex()).is_some() {
        println!("isomorphic");
        Ok(())
    } else {
        Err(Failure::new(MISMATCH, "online and batch results are not isomorphic"))
    }
}

fn matches(pattern: &Path, target: &Path, rules: &Path) -> Outcome {
    let rs = json::rule_system_from_str(&read(rules)?).map_err(|e| json_failure(rules, e))?;
    let p = load_presheaf(&rs, pattern)?;
    let q = load_presheaf(&rs, target)?;
    let monos = find_monos(&p, &q);
    println!("{}", monos.len());
    for f in &monos {
        println!("{}", serde_json::to_string(&f.named_components()).expect("plain data serializes"));
    }
    Ok(())
}
