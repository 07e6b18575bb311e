//! `tabloid`: batch front end for tabloid-core.
//!
//! Every subcommand writes either plain text or one JSON object per output
//! row (`--output jsonl`). Failures print `error: <class>: <message>` to
//! stderr and exit with status 2.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use tabloid_core::retrieval::{parse_corpus, parse_query, rank};
use tabloid_core::schedule::{evaluate, evaluate_tabloid, optimize};
use tabloid_core::space::{act, pair, CharacterTable, Functional, KVector};
use tabloid_core::{
    decode, AssignmentTableau, Error, Metric, Partition, Permutation, ProcessorSystem, Schedule,
    TaskGraph, TaskTableau, Term,
};

mod format;
use format::{fixed3, sig6, sig6_value};

#[derive(Parser, Debug)]
#[command(
    name = "tabloid",
    version,
    about = "Young tableau models of task assignments"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Output::Text, global = true)]
    output: Output,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Output {
    Text,
    Jsonl,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the standard assignment tabloids of a shape in canonical order.
    Enumerate {
        #[arg(long)]
        shape: String,
        /// Print only the number of tabloids.
        #[arg(long)]
        count: bool,
    },
    /// Print the character table of the tabloid modules for S_n.
    Characters {
        #[arg(long)]
        n: usize,
    },
    /// Evaluate one assignment (a `Y…` tabloid or `y…` tableau term).
    Evaluate {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        procs: PathBuf,
        #[arg(long)]
        shape: String,
        #[arg(long)]
        assignment: String,
    },
    /// Exhaustively search the tabloids of a shape for the best schedule.
    Optimize {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        procs: PathBuf,
        #[arg(long)]
        shape: String,
        #[arg(long, default_value = "turnaround")]
        metric: String,
    },
    /// Apply a permutation (cycle notation) to a k-assignments vector.
    Act {
        #[arg(long)]
        perm: String,
        #[arg(long)]
        shape: String,
        #[arg(long)]
        vector: String,
    },
    /// Pair a functional (dual-basis coordinates) with a vector.
    Pair {
        #[arg(long)]
        shape: String,
        #[arg(long)]
        functional: String,
        #[arg(long)]
        vector: String,
    },
    /// Rank corpus documents by cosine similarity to a query.
    Rank {
        #[arg(long)]
        query: PathBuf,
        #[arg(long)]
        corpus: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(lines) => {
            for line in lines {
                println!("{line}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {}: {e}", e.class());
            ExitCode::from(2)
        }
    }
}

fn read(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", path.display())))
}

fn shape_arg(text: &str) -> Result<Partition, Error> {
    text.parse()
}

/// Text lines or JSON records, chosen by `--output`.
struct Emitter {
    mode: Output,
    lines: Vec<String>,
}

impl Emitter {
    fn new(mode: Output) -> Self {
        Emitter {
            mode,
            lines: Vec::new(),
        }
    }

    fn emit(&mut self, text: impl FnOnce() -> String, record: impl FnOnce() -> Value) {
        self.lines.push(match self.mode {
            Output::Text => text(),
            Output::Jsonl => record().to_string(),
        });
    }
}

fn run(cli: &Cli) -> Result<Vec<String>, Error> {
    let mut out = Emitter::new(cli.output);
    match &cli.command {
        Command::Enumerate { shape, count } => {
            let shape = shape_arg(shape)?;
            if *count {
                let n = shape.tabloid_count();
                out.emit(
                    || n.to_string(),
                    || json!({"shape": shape.to_string(), "count": n}),
                );
            } else {
                let all = tabloid_core::assignment::enumerate_standard_tabloids(&shape)?;
                for (i, t) in all.iter().enumerate() {
                    out.emit(
                        || t.encode(),
                        || json!({"index": i + 1, "term": t.encode()}),
                    );
                }
            }
        }
        Command::Characters { n } => {
            let table = CharacterTable::compute(*n)?;
            if cli.output == Output::Text {
                let header: Vec<String> = table.classes.iter().map(Partition::to_string).collect();
                out.lines.push(format!("shape/class {}", header.join(" ")));
            }
            for (shape, row) in table.shapes.iter().zip(&table.entries) {
                out.emit(
                    || {
                        let cells: Vec<String> = row.iter().map(u64::to_string).collect();
                        format!("{shape} {}", cells.join(" "))
                    },
                    || {
                        let classes: Vec<String> =
                            table.classes.iter().map(Partition::to_string).collect();
                        json!({"shape": shape.to_string(), "classes": classes, "characters": row})
                    },
                );
            }
        }
        Command::Evaluate {
            graph,
            procs,
            shape,
            assignment,
        } => {
            let g = TaskGraph::parse(&read(graph)?)?;
            let s = ProcessorSystem::parse(&read(procs)?)?;
            let shape = shape_arg(shape)?;
            let schedule = match decode(assignment, &shape)? {
                Term::Tabloid(t) => evaluate_tabloid(&t, &g, &s)?,
                Term::Tableau(t) => {
                    let a = AssignmentTableau::standard(TaskTableau::new(t)).assignment_set();
                    evaluate(&a, &g, &s)?
                }
            };
            emit_schedule(&mut out, &schedule);
        }
        Command::Optimize {
            graph,
            procs,
            shape,
            metric,
        } => {
            let g = TaskGraph::parse(&read(graph)?)?;
            let s = ProcessorSystem::parse(&read(procs)?)?;
            let shape = shape_arg(shape)?;
            let metric: Metric = metric.parse()?;
            let best = optimize(&g, &s, &shape, metric)?;
            let term = best.tabloid.encode();
            out.emit(
                || format!("{term} {}", sig6(best.value)),
                || json!({"term": term, "metric": metric.to_string(), "value": sig6_value(best.value)}),
            );
        }
        Command::Act {
            perm,
            shape,
            vector,
        } => {
            let shape = shape_arg(shape)?;
            let p = Permutation::parse(perm, shape.n())?;
            let v = act(&p, &KVector::parse(vector, &shape)?)?;
            out.emit(
                || v.to_string(),
                || {
                    let terms: Vec<Value> = v
                        .iter()
                        .map(|(t, c)| json!({"term": t.encode(), "coefficient": c}))
                        .collect();
                    json!({"vector": v.to_string(), "terms": terms})
                },
            );
        }
        Command::Pair {
            shape,
            functional,
            vector,
        } => {
            let shape = shape_arg(shape)?;
            let f = Functional::parse(functional, &shape)?;
            let v = KVector::parse(vector, &shape)?;
            let value = pair(&f, &v)?;
            out.emit(|| sig6(value), || json!({"pairing": sig6_value(value)}));
        }
        Command::Rank { query, corpus } => {
            let q = parse_query(&read(query)?)?;
            let c = parse_corpus(&read(corpus)?)?;
            if q.shape != c.shape || q.kind != c.kind {
                return Err(Error::Shape(format!(
                    "query is {} of shape {} but corpus is {} of shape {}",
                    q.kind.name(),
                    q.shape,
                    c.kind.name(),
                    c.shape
                )));
            }
            for &(i, score) in rank(&q.document, &c)?.entries() {
                let text = fixed3(score);
                let number: f64 = text.parse().expect("formatted float");
                out.emit(
                    || format!("{} {text}", i + 1),
                    || json!({"document": i + 1, "score": number}),
                );
            }
        }
    }
    Ok(out.lines)
}

fn emit_schedule(out: &mut Emitter, s: &Schedule) {
    let n = s.n() as u32;
    for v in 1..=n {
        let p = s.processor_of(v);
        out.emit(
            || {
                format!(
                    "task {v} processor {p} start {} finish {}",
                    sig6(s.start(v)),
                    sig6(s.finish(v))
                )
            },
            || {
                json!({"record": "task", "task": v, "processor": p,
                       "start": sig6_value(s.start(v)), "finish": sig6_value(s.finish(v))})
            },
        );
    }
    for p in 1..=n {
        out.emit(
            || {
                format!(
                    "processor {p} exec {} idle {} utilization {}",
                    sig6(s.exec_time(p)),
                    sig6(s.idle_time(p)),
                    sig6(s.utilization(p))
                )
            },
            || {
                json!({"record": "processor", "processor": p, "exec": sig6_value(s.exec_time(p)),
                       "idle": sig6_value(s.idle_time(p)), "utilization": sig6_value(s.utilization(p))})
            },
        );
    }
    let (t, u) = (s.turnaround(), s.average_utilization());
    out.emit(
        || format!("turnaround {}", sig6(t)),
        || json!({"record": "turnaround", "value": sig6_value(t)}),
    );
    out.emit(
        || format!("average_utilization {}", sig6(u)),
        || json!({"record": "average_utilization", "value": sig6_value(u)}),
    );
}
