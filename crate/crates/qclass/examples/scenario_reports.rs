//! Drive the scenario pipeline from the library: load a shipped builtin,
//! execute its requests, and render deterministic reports.
//!
//! The `qclass` binary wraps exactly this flow:
//!
//! ```bash
//! cargo run --example scenario_reports
//! qclass run pauli-triple --format csv
//! ```

use qclass::scenario::{builtin_scenario_json, Scenario};

fn main() -> qclass::Result<()> {
    let scenario = Scenario::from_json(builtin_scenario_json("pauli-triple").unwrap())?;
    println!(
        "loaded: dim {}, observables [{}], states [{}], {} requests",
        scenario.dim(),
        scenario.observable_names().collect::<Vec<_>>().join(", "),
        scenario.state_names().collect::<Vec<_>>().join(", "),
        scenario.requests().len()
    );

    let (reports, failures) = scenario.run_all(None);
    assert!(failures.is_empty(), "unexpected failures: {failures:?}");

    for report in &reports {
        println!("\n# request {}: {}", report.index, report.kind);
        print!("{}", report.to_csv());
    }
    Ok(())
}
