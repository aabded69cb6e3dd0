use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use gkat::analysis::normalize;
use gkat::automaton::{thompson, to_dot, to_json};
use gkat::bench::{measure, on_big_stack, BenchRow, Family};
use gkat::equivalence::{decide_equiv, hoare_valid, Verdict};
use gkat::guarded_lang::bounded_den;
use gkat::interp::{rel_den, rel_equiv, RelInterp};
use gkat::solver::{extract_system, roundtrip};
use gkat::syntax::{parse, parse_hoare, pretty, Program};

#[derive(Parser)]
#[command(
    name = "gkat",
    version,
    about = "Guarded Kleene Algebra with Tests toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide equivalence of the two expressions in FILE.
    Check { file: PathBuf },
    /// Check the Hoare triple in FILE (precondition --- program --- postcondition).
    Hoare { file: PathBuf },
    /// Build the Thompson automaton of the expression in FILE.
    Automaton {
        file: PathBuf,
        #[arg(long, conflicts_with = "json")]
        dot: bool,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        normalize: bool,
    },
    /// Build and normalize; shorthand for `automaton --normalize`.
    Normalize {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// List the guarded strings of the expression with at most K actions.
    Lang {
        file: PathBuf,
        #[arg(long = "max-actions", value_name = "K")]
        max_actions: usize,
    },
    /// Convert the expression to an automaton and back.
    Solve { file: PathBuf },
    /// Print the left-affine system of the sealed automaton.
    System { file: PathBuf },
    /// Relational meaning of one expression, or comparison of two, under a model.
    Interp {
        file: PathBuf,
        #[arg(long, value_name = "MODEL.json")]
        model: PathBuf,
    },
    /// Time the decision procedure on a scaling family; prints CSV.
    Bench {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 3)]
        reps: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Seq,
    Nested,
}

type Outcome = Result<(String, u8), String>;

fn read(path: &Path) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn load(path: &Path) -> Result<Program, String> {
    parse(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

fn single(prog: &Program) -> Result<&gkat::syntax::Exp, String> {
    match prog.exps.as_slice() {
        [e] => Ok(e),
        _ => Err("expected exactly one expression".into()),
    }
}

fn run(cmd: Command) -> Outcome {
    let s = |e: gkat::Error| e.to_string();
    match cmd {
        Command::Check { file } => {
            let prog = load(&file)?;
            let [e, f] = prog.exps.as_slice() else {
                return Err("expected two expressions separated by `---`".into());
            };
            match decide_equiv(prog.header.tests(), e, f).map_err(s)? {
                Verdict::Equivalent => Ok(("equivalent\n".into(), 0)),
                Verdict::Inequivalent { witness, in_left } => Ok((
                    format!(
                        "not equivalent\nwitness: {}\naccepted by the {} expression only\n",
                        witness.show(&prog.header),
                        if in_left { "first" } else { "second" }
                    ),
                    1,
                )),
            }
        }
        Command::Hoare { file } => {
            let text = read(&file)?;
            let q = parse_hoare(&text).map_err(|e| format!("{}: {e}", file.display()))?;
            if hoare_valid(q.header.tests(), &q.pre, &q.body, &q.post).map_err(s)? {
                Ok(("valid\n".into(), 0))
            } else {
                Ok(("invalid\n".into(), 1))
            }
        }
        Command::Automaton {
            file,
            dot,
            json,
            normalize: norm,
        } => {
            let prog = load(&file)?;
            let e = single(&prog)?;
            let mut aut = thompson(prog.header.tests(), e).map_err(s)?.sealed();
            if norm {
                aut = normalize(&aut);
            }
            // DOT is the default format
            let out = if dot || !json {
                to_dot(&prog.header, &aut)
            } else {
                to_json(&prog.header, &aut) + "\n"
            };
            Ok((out, 0))
        }
        Command::Normalize { file, json } => run(Command::Automaton {
            file,
            dot: !json,
            json,
            normalize: true,
        }),
        Command::Lang { file, max_actions } => {
            let prog = load(&file)?;
            let e = single(&prog)?;
            let lang = bounded_den(prog.header.tests(), e, max_actions).map_err(s)?;
            let mut out = String::new();
            for w in lang.strings() {
                out.push_str(&w.show(&prog.header));
                out.push('\n');
            }
            Ok((out, 0))
        }
        Command::Solve { file } => {
            let prog = load(&file)?;
            let e = single(&prog)?;
            let r = roundtrip(prog.header.tests(), e).map_err(s)?;
            Ok((pretty(&prog.header, &r) + "\n", 0))
        }
        Command::System { file } => {
            let prog = load(&file)?;
            let e = single(&prog)?;
            let aut = thompson(prog.header.tests(), e).map_err(s)?.sealed();
            let (sys, salomaa) = extract_system(prog.header.tests(), &aut).map_err(s)?;
            let mut out = sys.show(&prog.header).map_err(s)?;
            out.push_str(&format!("salomaa: {salomaa}\n"));
            Ok((out, 0))
        }
        Command::Interp { file, model } => {
            let prog = load(&file)?;
            let i = RelInterp::from_json(&prog.header, &read(&model)?)
                .map_err(|e| format!("{}: {e}", model.display()))?;
            match prog.exps.as_slice() {
                [e] => {
                    let pairs: Vec<[usize; 2]> = rel_den(&prog.header, &i, e)
                        .map_err(s)?
                        .pairs()
                        .into_iter()
                        .map(|(a, b)| [a, b])
                        .collect();
                    let json = serde_json::to_string(&pairs).map_err(|e| e.to_string())?;
                    Ok((json + "\n", 0))
                }
                [e, f] => {
                    if rel_equiv(&prog.header, &i, e, f).map_err(s)? {
                        Ok(("equal under the model\n".into(), 0))
                    } else {
                        Ok(("different under the model\n".into(), 1))
                    }
                }
                _ => unreachable!("programs hold one or two expressions"),
            }
        }
        Command::Bench {
            family,
            sizes,
            reps,
        } => {
            let family = match family {
                FamilyArg::Seq => Family::Seq,
                FamilyArg::Nested => Family::Nested,
            };
            let mut out = format!("{}\n", BenchRow::CSV_HEADER);
            for n in sizes {
                if n == 0 {
                    return Err("sizes must be positive".into());
                }
                out.push_str(&measure(family, n, reps).map_err(s)?.csv());
                out.push('\n');
            }
            Ok((out, 0))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    // deep expressions recurse through the automaton construction
    match on_big_stack(move || run(cli.command)) {
        Ok((out, code)) => {
            print!("{out}");
            ExitCode::from(code)
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
