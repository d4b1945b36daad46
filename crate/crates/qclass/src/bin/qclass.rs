//! Thin command-line front end over the scenario module.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use qclass::scenario::{builtin_scenario_json, resolve_scenario, Report, BUILTIN_NAMES};

#[derive(Parser)]
#[command(name = "qclass", version, about = "Quasi-classical measurement reports")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute a scenario's requests and emit deterministic reports
    Run {
        /// Scenario file path, or the name of a builtin
        scenario: String,
        /// Write one report file per request into this directory
        #[arg(long)]
        out: Option<PathBuf>,
        /// Report rendering
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Override the seed of random audit requests
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run the consistency audit battery over a scenario
    Audit {
        /// Scenario file path, or the name of a builtin
        scenario: String,
        /// Override the seed of the scenario's random audit requests
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Print a builtin scenario as JSON
    Builtin {
        /// One of: pauli-triple, singlet-chsh, mixture-demo, ghz
        name: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> qclass::Result<ExitCode> {
    match cli.command {
        Command::Run {
            scenario,
            out,
            format,
            seed,
        } => {
            let loaded = resolve_scenario(&scenario)?;
            let (reports, failures) = loaded.run_all(seed);
            let failure_list: Vec<serde_json::Value> = failures
                .iter()
                .map(|f| json!({"request": f.request, "kind": f.kind, "message": f.message}))
                .collect();

            match out {
                Some(dir) => {
                    std::fs::create_dir_all(&dir)?;
                    for report in &reports {
                        let name = format!("request_{:02}_{}", report.index, report.kind);
                        match format {
                            Format::Csv => std::fs::write(
                                dir.join(format!("{name}.csv")),
                                report.to_csv(),
                            )?,
                            Format::Json => std::fs::write(
                                dir.join(format!("{name}.json")),
                                format!("{:#}\n", report.to_json()),
                            )?,
                        }
                    }
                    let summary = json!({
                        "requests": reports
                            .iter()
                            .map(|r| json!({"request": r.index, "kind": r.kind}))
                            .collect::<Vec<_>>(),
                        "failures": failure_list,
                    });
                    std::fs::write(dir.join("summary.json"), format!("{summary:#}\n"))?;
                }
                None => match format {
                    Format::Json => {
                        let doc = json!({
                            "reports": reports.iter().map(Report::to_json).collect::<Vec<_>>(),
                            "failures": failure_list,
                        });
                        println!("{doc:#}");
                    }
                    Format::Csv => {
                        for report in &reports {
                            println!("# request {}: {}", report.index, report.kind);
                            print!("{}", report.to_csv());
                            println!();
                        }
                        if !failures.is_empty() {
                            println!("# failures");
                            println!("{}", json!(failure_list));
                        }
                    }
                },
            }
            Ok(if failures.is_empty() {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
        Command::Audit { scenario, seed } => {
            let loaded = resolve_scenario(&scenario)?;
            let mut checks = loaded.audit()?;
            // Audit requests declared in the scenario run too.
            let (reports, failures) = loaded.run_all(seed);
            for report in &reports {
                if let Some(extra) = report.body.audit_passed() {
                    checks.extend(extra.iter().cloned());
                }
            }
            let mut failed = failures.len();
            for check in &checks {
                if check.passed {
                    println!("ok   {}", check.name);
                } else {
                    println!("FAIL {} (deviation {:.3e})", check.name, check.deviation);
                    failed += 1;
                }
            }
            for failure in &failures {
                println!(
                    "FAIL request {} ({}): {}",
                    failure.request, failure.kind, failure.message
                );
            }
            println!(
                "{} checks, {} failed",
                checks.len() + failures.len(),
                failed
            );
            Ok(if failed == 0 {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
        Command::Builtin { name } => match builtin_scenario_json(&name) {
            Some(text) => {
                print!("{text}");
                Ok(ExitCode::SUCCESS)
            }
            None => {
                eprintln!(
                    "unknown builtin '{name}'; available: {}",
                    BUILTIN_NAMES.join(", ")
                );
                Ok(ExitCode::FAILURE)
            }
        },
    }
}
