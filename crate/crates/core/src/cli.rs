//! Command-line front end. Exit codes: 0 positive answer, 1 negative
//! answer, 2 usage or input error, 3 undecided (cyclic schema not sent to
//! the oracle, or oracle budget exhausted).

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::consistency::{
    self, clique_hardness_lift, counterexample_for, cycle_hardness_lift, encode_3dct,
    lift_collection, BagDatabase, ContingencyTables, GlobalMode, GlobalVerdict,
};
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::oracle::{self, OracleBudget};

pub const EXIT_YES: i32 = 0;
pub const EXIT_NO: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_UNKNOWN: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "bagcons", version, about = "Consistency of bags over hypergraph schemas")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Debug, Clone)]
struct BudgetArgs {
    /// Oracle search-node limit.
    #[arg(long, default_value_t = 100_000_000)]
    budget_nodes: u64,
    /// Oracle wall-clock limit in seconds.
    #[arg(long, default_value_t = 60.0)]
    budget_seconds: f64,
    /// Oracle join-support limit.
    #[arg(long, default_value_t = 1_000_000)]
    budget_support: usize,
}

impl BudgetArgs {
    fn budget(&self) -> Result<OracleBudget> {
        let max_time = Duration::try_from_secs_f64(self.budget_seconds)
            .map_err(|e| Error::Precondition(format!("--budget-seconds: {e}")))?;
        Ok(OracleBudget {
            max_join_support: self.budget_support,
            max_nodes: self.budget_nodes,
            max_time,
        })
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Shape {
    Cycle,
    #[value(alias = "clique-complement")]
    Clique,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Acyclicity of a schema, with a join tree or a bad witness.
    Classify {
        #[arg(long)]
        schema: PathBuf,
    },
    /// Pairwise consistency of a database.
    Pairwise {
        #[arg(long)]
        db: PathBuf,
    },
    /// Global consistency of a database.
    Global {
        #[arg(long)]
        db: PathBuf,
        /// Send cyclic schemas to the oracle regardless of size.
        #[arg(long)]
        oracle: bool,
        /// Write the witness, if any, to this file.
        #[arg(long, value_name = "OUT")]
        witness: Option<PathBuf>,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Writes a global witness of a database over an acyclic schema.
    Witness {
        #[arg(long)]
        db: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Pairwise consistent but globally inconsistent relations over a
    /// cyclic schema, given as a file or as a named family.
    Counterexample {
        #[arg(long, conflicts_with_all = ["shape", "n"])]
        schema: Option<PathBuf>,
        #[arg(long, value_enum, requires = "n")]
        shape: Option<Shape>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Lifts a database onto a larger schema that reduces to its own by
    /// safe deletions.
    Lift {
        #[arg(long)]
        db: PathBuf,
        #[arg(long)]
        schema: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Lifts a database over a cycle or clique complement by one vertex.
    Harden {
        #[arg(long)]
        db: PathBuf,
        #[arg(long, value_enum)]
        to: Shape,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Encodes three 2D tables as a database over the triangle.
    #[command(name = "encode-3dct")]
    Encode3dct {
        #[arg(long)]
        tables: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Lists every witness (oracle).
    Enumerate {
        #[arg(long)]
        db: PathBuf,
        #[command(flatten)]
        budget: BudgetArgs,
    },
}

fn read_json(path: &Path) -> Result<Value> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Precondition(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Json {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn emit(value: &Value, output: Option<&Path>) -> Result<()> {
    let text = serde_json::to_string_pretty(value).expect("values serialize");
    match output {
        Some(p) => fs::write(p, text + "\n")
            .map_err(|e| Error::Precondition(format!("cannot write {}: {e}", p.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn load_db(path: &Path) -> Result<BagDatabase> {
    BagDatabase::from_json(&read_json(path)?)
}

fn verdict_code(v: GlobalVerdict) -> i32 {
    match v {
        GlobalVerdict::Consistent => EXIT_YES,
        GlobalVerdict::Inconsistent => EXIT_NO,
        GlobalVerdict::UnknownCyclic | GlobalVerdict::ResourceExhausted => EXIT_UNKNOWN,
    }
}

fn execute(cmd: Command) -> Result<i32> {
    match cmd {
        Command::Classify { schema } => {
            let h = Hypergraph::from_json(&read_json(&schema)?)?;
            let acyclic = h.is_acyclic();
            let mut out = json!({
                "acyclic": acyclic,
                "chordal": h.is_chordal(),
                "conformal": h.is_conformal(),
            });
            if let Some(tree) = h.join_tree() {
                out["join_tree"] = tree.to_json();
                out["running_intersection"] = tree.running_intersection().to_json(&h);
            }
            if let Some(bad) = h.find_bad_witness() {
                out["bad_witness"] = bad.to_json();
            }
            println!("{}", if acyclic { "acyclic" } else { "cyclic" });
            emit(&out, None)?;
            Ok(if acyclic { EXIT_YES } else { EXIT_NO })
        }
        Command::Pairwise { db } => {
            let db = load_db(&db)?;
            let pairs = consistency::inconsistent_pairs(&db);
            emit(&json!({ "pairwise": pairs.is_empty(), "inconsistent_pairs": pairs }), None)?;
            Ok(if pairs.is_empty() { EXIT_YES } else { EXIT_NO })
        }
        Command::Global { db, oracle, witness, budget } => {
            let db = load_db(&db)?;
            let mode = if oracle { GlobalMode::Oracle } else { GlobalMode::Auto };
            let report = consistency::global_consistent_with_budget(&db, mode, &budget.budget()?);
            if let (Some(path), Some(w)) = (&witness, &report.witness) {
                emit(&w.to_json(), Some(path))?;
            }
            let mut out = report.to_json();
            out.as_object_mut().expect("object").remove("witness");
            println!(
                "{}",
                match report.global {
                    GlobalVerdict::Consistent => "globally consistent",
                    GlobalVerdict::Inconsistent => "globally inconsistent",
                    GlobalVerdict::UnknownCyclic => "unknown (cyclic schema, oracle not run)",
                    GlobalVerdict::ResourceExhausted => "unknown (oracle budget exhausted)",
                }
            );
            emit(&out, None)?;
            Ok(verdict_code(report.global))
        }
        Command::Witness { db, output } => {
            let db = load_db(&db)?;
            match consistency::acyclic_global_witness(&db)? {
                Some(w) => {
                    emit(&w.to_json(), output.as_deref())?;
                    Ok(EXIT_YES)
                }
                None => {
                    eprintln!("no witness: some pair of bags is inconsistent");
                    Ok(EXIT_NO)
                }
            }
        }
        Command::Counterexample { schema, shape, n, output } => {
            let h = match (schema, shape, n) {
                (Some(p), _, _) => Hypergraph::from_json(&read_json(&p)?)?,
                (None, Some(s), Some(n)) => {
                    if n < 3 {
                        return Err(Error::Precondition(format!("--n {n} is below 3")));
                    }
                    match s {
                        Shape::Cycle => Hypergraph::cycle(n),
                        Shape::Clique => Hypergraph::clique_complement(n),
                    }
                }
                _ => return Err(Error::Precondition("give --schema or --shape with --n".into())),
            };
            if h.is_acyclic() {
                eprintln!("the schema is acyclic; every pairwise consistent database is globally consistent");
                return Ok(EXIT_NO);
            }
            emit(&counterexample_for(&h)?.to_json(), output.as_deref())?;
            Ok(EXIT_YES)
        }
        Command::Lift { db, schema, output } => {
            let d0 = load_db(&db)?;
            let h1 = Hypergraph::from_json(&read_json(&schema)?)?;
            let ops = h1.deletion_sequence_to(d0.hypergraph())?;
            let lifted = lift_collection(&d0, &h1, &ops, &BTreeMap::new())?;
            emit(&lifted.to_json(), output.as_deref())?;
            Ok(EXIT_YES)
        }
        Command::Harden { db, to, output } => {
            let d = load_db(&db)?;
            let lifted = match to {
                Shape::Cycle => cycle_hardness_lift(&d)?,
                Shape::Clique => clique_hardness_lift(&d)?,
            };
            emit(&lifted.to_json(), output.as_deref())?;
            Ok(EXIT_YES)
        }
        Command::Encode3dct { tables, output } => {
            let t = ContingencyTables::from_json(&read_json(&tables)?)?;
            emit(&encode_3dct(&t)?.to_json(), output.as_deref())?;
            Ok(EXIT_YES)
        }
        Command::Enumerate { db, budget } => {
            let db = load_db(&db)?;
            match oracle::enumerate_witnesses(&db, &budget.budget()?) {
                Ok(all) => {
                    let list: Vec<Value> = all.iter().map(|w| w.to_json()).collect();
                    println!("{} witnesses", list.len());
                    emit(&json!({ "count": list.len(), "witnesses": list }), None)?;
                    Ok(if all.is_empty() { EXIT_NO } else { EXIT_YES })
                }
                Err(Error::ResourceExhausted(why)) => {
                    eprintln!("oracle budget exhausted: {why}");
                    Ok(EXIT_UNKNOWN)
                }
                Err(e) => Err(e),
            }
        }
    }
}

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_YES };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}
