//! Scenarios shipped with the crate.

/// Names accepted by `qclass builtin` and, as a fallback, by `qclass run`.
pub const BUILTIN_NAMES: [&str; 4] = ["pauli-triple", "singlet-chsh", "mixture-demo", "ghz"];

/// JSON text of a built-in scenario.
pub fn builtin_scenario_json(name: &str) -> Option<&'static str> {
    match name {
        "pauli-triple" => Some(include_str!("builtins/pauli_triple.json")),
        "singlet-chsh" => Some(include_str!("builtins/singlet_chsh.json")),
        "mixture-demo" => Some(include_str!("builtins/mixture_demo.json")),
        "ghz" => Some(include_str!("builtins/ghz.json")),
        _ => None,
    }
}
