//! `gtrellis`: run group trellis analyses, verification suites, generator
//! reports, encoding, tracking, composition reports, and example search
//! over section files.
//!
//! Exit codes: 0 success, 1 usage or parse failure, 2 verification
//! failure (including non-controllable sections and inexact tracking).

use clap::{Parser, Subcommand};
use gtrellis_core::encoder;
use gtrellis_core::error::Error;
use gtrellis_core::format::{parse_group_str, parse_section_str, SectionDocument};
use gtrellis_core::generators::{representative_array, GeneratorTable};
use gtrellis_core::refine::refined_representative_array;
use gtrellis_core::report;
use gtrellis_core::search::{search_subdirect, SearchWant};
use gtrellis_core::section::PathSegment;
use gtrellis_core::verify::run_verification;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "gtrellis", version, about = "Group trellis section toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Chains, matrices, triangular form, and composition summary.
    Analyze {
        #[arg(long)]
        section: PathBuf,
        /// Flat key=value output.
        #[arg(long)]
        machine: bool,
    },
    /// Run the invariant ledger; exit 2 on any failed check.
    Verify {
        #[arg(long)]
        section: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        machine: bool,
        /// Comma-separated suite names (default: all).
        #[arg(long, value_delimiter = ',')]
        suite: Vec<String>,
    },
    /// Cell transversals and generator paths.
    Generators {
        #[arg(long)]
        section: PathBuf,
        #[arg(long)]
        machine: bool,
        /// Use the composition-refined table.
        #[arg(long)]
        refined: bool,
    },
    /// Encode an input stream (indices into the input group).
    Encode {
        #[arg(long)]
        section: PathBuf,
        /// Read the stream from a file instead of stdin.
        #[arg(long)]
        input: Option<PathBuf>,
        /// Append the state branch after each output branch.
        #[arg(long)]
        states: bool,
        #[arg(long)]
        refined: bool,
    },
    /// Recover the inputs that reproduce a branch path.
    Track {
        #[arg(long)]
        section: PathBuf,
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        refined: bool,
    },
    /// Composition chains, Schreier array pages, and solvability.
    Compose {
        #[arg(long)]
        section: PathBuf,
        #[arg(long)]
        machine: bool,
    },
    /// Enumerate controllable subdirect products over a state group.
    Search {
        /// Group file providing the state group.
        #[arg(long)]
        group: PathBuf,
        #[arg(long, default_value_t = 64)]
        max_order: usize,
        #[arg(long)]
        nonabelian: bool,
        #[arg(long, default_value_t = 0)]
        min_memory: usize,
        /// Directory to write one section file per hit.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        machine: bool,
    },
}

/// Exit policy: parse and I/O problems are usage errors; everything the
/// math rejects is a verification failure.
fn exit_for(e: &Error) -> ExitCode {
    match e {
        Error::Parse { .. } | Error::IndexOutOfRange(_) | Error::TooLarge { .. } => {
            ExitCode::from(1)
        }
        _ => ExitCode::from(2),
    }
}

fn read_to_string(path: &Path) -> Result<String, ExitCode> {
    std::fs::read_to_string(path).map_err(|e| {
        eprintln!("error: cannot read {}: {e}", path.display());
        ExitCode::from(1)
    })
}

fn load_document(path: &Path) -> Result<SectionDocument, ExitCode> {
    let text = read_to_string(path)?;
    parse_section_str(&text).map_err(|e| {
        eprintln!("error: {}: {e}", path.display());
        exit_for(&e)
    })
}

fn load_table(doc: &SectionDocument, refined: bool) -> Result<GeneratorTable, ExitCode> {
    let result = if refined {
        refined_representative_array(&doc.section)
    } else {
        representative_array(&doc.section)
    };
    result.map_err(|e| {
        eprintln!("error: {e}");
        exit_for(&e)
    })
}

/// Whitespace-separated decimal indices with their 1-based line numbers.
fn read_stream(input: Option<&Path>) -> Result<Vec<(usize, usize)>, ExitCode> {
    let text = match input {
        Some(path) => read_to_string(path)?,
        None => {
            let mut buf = String::new();
            use std::io::Read;
            std::io::stdin().read_to_string(&mut buf).map_err(|e| {
                eprintln!("error: cannot read stdin: {e}");
                ExitCode::from(1)
            })?;
            buf
        }
    };
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        for tok in line.split_whitespace() {
            match tok.parse::<usize>() {
                Ok(v) => out.push((v, i + 1)),
                Err(_) => {
                    eprintln!("error: line {}: `{tok}` is not an index", i + 1);
                    return Err(ExitCode::from(1));
                }
            }
        }
    }
    Ok(out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(code) => code,
    }
}

fn run(cli: Cli) -> Result<ExitCode, ExitCode> {
    match cli.command {
        Command::Analyze { section, machine } => {
            let doc = load_document(&section)?;
            match report::render_analysis(&doc.section, machine) {
                Ok(text) => {
                    print!("{text}");
                    Ok(ExitCode::SUCCESS)
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    Err(exit_for(&e))
                }
            }
        }
        Command::Verify {
            section,
            seed,
            machine,
            suite,
        } => {
            let doc = load_document(&section)?;
            let suites = if suite.is_empty() { None } else { Some(&suite[..]) };
            let results = run_verification(&doc.section, seed, suites);
            let mut all_passed = true;
            for r in &results {
                all_passed &= r.passed;
                if machine {
                    println!("check.{}={}", r.name, if r.passed { "pass" } else { "fail" });
                } else {
                    let tag = if r.passed { "PASS" } else { "FAIL" };
                    println!("{tag} {:<28} {}", r.name, r.detail);
                }
            }
            if machine {
                println!("verify={}", if all_passed { "pass" } else { "fail" });
            } else {
                println!(
                    "{} of {} checks passed",
                    results.iter().filter(|r| r.passed).count(),
                    results.len()
                );
            }
            Ok(if all_passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            })
        }
        Command::Generators {
            section,
            machine,
            refined,
        } => {
            let doc = load_document(&section)?;
            let table = load_table(&doc, refined)?;
            match report::render_generators(&table, machine) {
                Ok(text) => {
                    print!("{text}");
                    Ok(ExitCode::SUCCESS)
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    Err(exit_for(&e))
                }
            }
        }
        Command::Encode {
            section,
            input,
            states,
            refined,
        } => {
            let doc = load_document(&section)?;
            let table = load_table(&doc, refined)?;
            let stream = read_stream(input.as_deref())?;
            let mut machine_state = encoder::Encoder::new(&table);
            for (x, line) in stream {
                match machine_state.step(x) {
                    Ok(branch) => {
                        if states {
                            println!("{branch} {}", machine_state.state_branch());
                        } else {
                            println!("{branch}");
                        }
                    }
                    Err(e) => {
                        eprintln!("error: line {line}: {e}");
                        return Err(ExitCode::from(2));
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Track {
            section,
            input,
            refined,
        } => {
            let doc = load_document(&section)?;
            let table = load_table(&doc, refined)?;
            let stream = read_stream(input.as_deref())?;
            if let Some(&(bad, line)) = stream
                .iter()
                .find(|(b, _)| *b >= doc.section.branch_group().order())
            {
                eprintln!("error: line {line}: branch {bad} out of range");
                return Err(ExitCode::from(1));
            }
            let branches: Vec<usize> = stream.iter().map(|(b, _)| *b).collect();
            let target = PathSegment::new(branches);
            match encoder::track(&table, &target, target.branch(0)) {
                Ok(result) => {
                    for x in &result.preroll {
                        println!("preroll {x}");
                    }
                    for x in &result.inputs {
                        println!("input {x}");
                    }
                    println!("{}", if result.exact { "EXACT" } else { "FAIL" });
                    Ok(if result.exact {
                        ExitCode::SUCCESS
                    } else {
                        ExitCode::from(2)
                    })
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    Err(exit_for(&e))
                }
            }
        }
        Command::Compose { section, machine } => {
            let doc = load_document(&section)?;
            match report::render_compose(&doc.section, machine) {
                Ok(text) => {
                    print!("{text}");
                    Ok(ExitCode::SUCCESS)
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    Err(exit_for(&e))
                }
            }
        }
        Command::Search {
            group,
            max_order,
            nonabelian,
            min_memory,
            out,
            machine,
        } => {
            let text = read_to_string(&group)?;
            let state = parse_group_str(&text).map_err(|e| {
                eprintln!("error: {}: {e}", group.display());
                exit_for(&e)
            })?;
            let hits = search_subdirect(
                &state,
                max_order,
                SearchWant {
                    nonabelian,
                    min_memory,
                },
            )
            .map_err(|e| {
                eprintln!("error: {e}");
                exit_for(&e)
            })?;
            for (i, hit) in hits.iter().enumerate() {
                if machine {
                    println!(
                        "hit.{i}={};{};{}",
                        hit.branch_order, hit.memory, hit.abelian
                    );
                } else {
                    println!(
                        "hit {i}: branch order {}, memory {}, abelian {}",
                        hit.branch_order, hit.memory, hit.abelian
                    );
                }
                if let Some(dir) = &out {
                    std::fs::create_dir_all(dir).map_err(|e| {
                        eprintln!("error: cannot create {}: {e}", dir.display());
                        ExitCode::from(1)
                    })?;
                    let path = dir.join(format!("hit{i:03}.section"));
                    std::fs::write(&path, hit.document.canonical_text()).map_err(|e| {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        ExitCode::from(1)
                    })?;
                }
            }
            if machine {
                println!("hits={}", hits.len());
            } else {
                println!("{} hits", hits.len());
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}
