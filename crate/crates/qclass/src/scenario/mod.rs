//! Declarative scenarios: observables, states, and report requests.
//!
//! A scenario file is JSON. Observables are named complex matrices
//! (entries as `[re, im]` pairs, row-major); states are matrices, Bloch
//! vectors (dimension 2 only), or pure-state vectors; requests name the
//! reports to produce. Everything is validated on load, and report
//! output is byte-deterministic for identical input.

mod builtins;
pub mod report;

use std::collections::BTreeMap;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

pub use builtins::{builtin_scenario_json, BUILTIN_NAMES};
pub use report::{AuditCheck, Report, ReportBody};

use crate::error::{Error, Result};
use crate::extension::{CylinderSet, GlobalMeasureHandle, Registry, CONSISTENCY_TOL};
use crate::hermitian::{DensityOperator, HermitianOperator};
use crate::matrix::{Complex64, ComplexMatrix};
use crate::measure::{quasi_measure, sym_moment, EventSpec, NEGATIVITY_REPORT_TOL};
use crate::product::{sym_product_measure, ObservableId, OperatorMeasure, ProductAtom};
use crate::spectral::{OutcomeSubset, COMMUTE_TOL};

/// Hermiticity / positivity tolerance applied to scenario matrices.
pub const LOAD_TOL: f64 = 1e-9;

/// An eigenvalue literal in a request must match a spectral point this closely.
pub const OUTCOME_MATCH_TOL: f64 = 1e-6;

/// CHSH observables must have spectra within this distance of {-1, +1}.
pub const DICHOTOMY_TOL: f64 = 1e-6;

/// Largest observable tuple an audit request will sweep (the sweep
/// enumerates all permutations and subsets of the tuple).
pub const MAX_AUDIT_TUPLE: usize = 4;

#[derive(Deserialize)]
struct ScenarioFile {
    dim: usize,
    observables: serde_json::Map<String, serde_json::Value>,
    states: serde_json::Map<String, serde_json::Value>,
    #[serde(default)]
    requests: Vec<RequestFile>,
}

type MatrixEntries = Vec<Vec<[f64; 2]>>;

#[derive(Deserialize)]
#[serde(untagged)]
enum StateFile {
    Matrix(MatrixEntries),
    Bloch { bloch: [f64; 3] },
    Vector { vector: Vec<[f64; 2]> },
}

#[derive(Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
enum RequestFile {
    Table {
        state: String,
        observables: Vec<String>,
    },
    Event {
        state: String,
        observables: Vec<String>,
        constraints: BTreeMap<String, Vec<f64>>,
    },
    Marginal {
        state: String,
        observables: Vec<String>,
        keep: Vec<String>,
    },
    Moment {
        state: String,
        observables: Vec<String>,
    },
    Chsh {
        state: String,
        a: [String; 2],
        b: [String; 2],
    },
    Negativity {
        state: String,
        observables: Vec<String>,
        #[serde(default)]
        tol: Option<f64>,
    },
    Audit {
        #[serde(default)]
        observables: Option<Vec<String>>,
        #[serde(default)]
        random: Option<RandomAudit>,
    },
}

/// Seeded random observable collection for an audit request.
#[derive(Debug, Clone, Copy, Deserialize)]
pub struct RandomAudit {
    pub count: usize,
    pub seed: u64,
}

/// A fully validated request; names are resolved to registry ids and
/// state indices.
#[derive(Debug, Clone)]
pub enum Request {
    Table {
        state: usize,
        observables: Vec<ObservableId>,
    },
    Event {
        state: usize,
        observables: Vec<ObservableId>,
        constraints: Vec<(ObservableId, Vec<f64>)>,
    },
    Marginal {
        state: usize,
        observables: Vec<ObservableId>,
        keep: Vec<ObservableId>,
    },
    Moment {
        state: usize,
        observables: Vec<ObservableId>,
    },
    Chsh {
        state: usize,
        a: [ObservableId; 2],
        b: [ObservableId; 2],
    },
    Negativity {
        state: usize,
        observables: Vec<ObservableId>,
        tol: f64,
    },
    Audit {
        observables: Vec<ObservableId>,
        random: Option<RandomAudit>,
    },
}

impl Request {
    pub fn kind(&self) -> &'static str {
        match self {
            Request::Table { .. } => "table",
            Request::Event { .. } => "event",
            Request::Marginal { .. } => "marginal",
            Request::Moment { .. } => "moment",
            Request::Chsh { .. } => "chsh",
            Request::Negativity { .. } => "negativity",
            Request::Audit { .. } => "audit",
        }
    }
}

/// A request that could not be satisfied, in machine-readable form.
#[derive(Debug, Clone)]
pub struct Failure {
    pub request: usize,
    pub kind: String,
    pub message: String,
}

/// A validated scenario: registry-backed observables, states, requests.
pub struct Scenario {
    dim: usize,
    registry: Registry,
    observable_names: Vec<(String, ObservableId)>,
    states: Vec<(String, DensityOperator)>,
    requests: Vec<Request>,
}

/// Reads and validates a scenario file.
pub fn load_scenario(path: &Path) -> Result<Scenario> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::ParseError(format!("cannot read {}: {e}", path.display())))?;
    Scenario::from_json(&text)
}

/// Resolves a CLI argument: an existing file wins, otherwise a builtin name.
pub fn resolve_scenario(arg: &str) -> Result<Scenario> {
    let path = Path::new(arg);
    if path.is_file() {
        return load_scenario(path);
    }
    match builtin_scenario_json(arg) {
        Some(text) => Scenario::from_json(text),
        None => Err(Error::ParseError(format!(
            "no such file or builtin scenario: {arg}"
        ))),
    }
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self> {
        let file: ScenarioFile = serde_json::from_str(text).map_err(|e| {
            Error::ParseError(format!("line {}, column {}: {e}", e.line(), e.column()))
        })?;
        if file.dim == 0 {
            return Err(Error::ParseError("dim must be at least 1".into()));
        }

        let mut registry = Registry::new();
        let mut observable_names: Vec<(String, ObservableId)> = Vec::new();
        for (name, value) in &file.observables {
            if observable_names.iter().any(|(n, _)| n == name) {
                return Err(Error::ParseError(format!("duplicate observable '{name}'")));
            }
            let entries: MatrixEntries = serde_json::from_value(value.clone())
                .map_err(|e| validation(name, Error::ParseError(e.to_string())))?;
            let matrix = parse_matrix(&entries, file.dim).map_err(|e| validation(name, e))?;
            let operator =
                HermitianOperator::new(matrix, LOAD_TOL).map_err(|e| validation(name, e))?;
            let id = registry.register(operator).map_err(|e| validation(name, e))?;
            observable_names.push((name.clone(), id));
        }

        let mut states: Vec<(String, DensityOperator)> = Vec::new();
        for (name, value) in &file.states {
            if states.iter().any(|(n, _)| n == name) {
                return Err(Error::ParseError(format!("duplicate state '{name}'")));
            }
            let parsed: StateFile = serde_json::from_value(value.clone())
                .map_err(|e| validation(name, Error::ParseError(e.to_string())))?;
            let rho = match parsed {
                StateFile::Matrix(entries) => {
                    let matrix =
                        parse_matrix(&entries, file.dim).map_err(|e| validation(name, e))?;
                    DensityOperator::new(matrix, LOAD_TOL).map_err(|e| validation(name, e))?
                }
                StateFile::Bloch { bloch } => {
                    if file.dim != 2 {
                        return Err(validation(
                            name,
                            Error::ParseError("bloch shorthand requires dim 2".into()),
                        ));
                    }
                    DensityOperator::from_bloch(bloch, LOAD_TOL)
                        .map_err(|e| validation(name, e))?
                }
                StateFile::Vector { vector } => {
                    if vector.len() != file.dim {
                        return Err(validation(
                            name,
                            Error::DimensionMismatch(vector.len(), file.dim),
                        ));
                    }
                    let amplitudes: Vec<Complex64> = vector
                        .iter()
                        .map(|[re, im]| Complex64::new(*re, *im))
                        .collect();
                    let matrix = ComplexMatrix::from_pure_state(&amplitudes)
                        .map_err(|e| validation(name, e))?;
                    DensityOperator::new(matrix, LOAD_TOL).map_err(|e| validation(name, e))?
                }
            };
            states.push((name.clone(), rho));
        }

        let mut scenario = Scenario {
            dim: file.dim,
            registry,
            observable_names,
            states,
            requests: Vec::new(),
        };
        for request in &file.requests {
            let resolved = scenario.resolve_request(request)?;
            scenario.requests.push(resolved);
        }
        Ok(scenario)
    }

    fn resolve_request(&self, request: &RequestFile) -> Result<Request> {
        let observable = |name: &str| -> Result<ObservableId> {
            self.observable_names
                .iter()
                .find(|(n, _)| n == name)
                .map(|(_, id)| *id)
                .ok_or_else(|| Error::DanglingReference(name.to_string()))
        };
        let state = |name: &str| -> Result<usize> {
            self.states
                .iter()
                .position(|(n, _)| n == name)
                .ok_or_else(|| Error::DanglingReference(name.to_string()))
        };
        let observable_list = |names: &[String]| -> Result<Vec<ObservableId>> {
            if names.is_empty() {
                return Err(Error::EmptySubset);
            }
            names.iter().map(|n| observable(n)).collect()
        };

        Ok(match request {
            RequestFile::Table {
                state: s,
                observables,
            } => Request::Table {
                state: state(s)?,
                observables: observable_list(observables)?,
            },
            RequestFile::Event {
                state: s,
                observables,
                constraints,
            } => {
                let ids = observable_list(observables)?;
                let mut resolved = Vec::new();
                for (name, values) in constraints {
                    let id = observable(name)?;
                    if !ids.contains(&id) {
                        return Err(Error::DanglingReference(format!(
                            "constraint '{name}' is not among the request observables"
                        )));
                    }
                    resolved.push((id, values.clone()));
                }
                Request::Event {
                    state: state(s)?,
                    observables: ids,
                    constraints: resolved,
                }
            }
            RequestFile::Marginal {
                state: s,
                observables,
                keep,
            } => {
                let ids = observable_list(observables)?;
                let kept = observable_list(keep)?;
                for id in &kept {
                    if !ids.contains(id) {
                        return Err(Error::DanglingReference(
                            "keep lists an observable outside the request".into(),
                        ));
                    }
                }
                Request::Marginal {
                    state: state(s)?,
                    observables: ids,
                    keep: kept,
                }
            }
            RequestFile::Moment {
                state: s,
                observables,
            } => Request::Moment {
                state: state(s)?,
                observables: observable_list(observables)?,
            },
            RequestFile::Chsh { state: s, a, b } => Request::Chsh {
                state: state(s)?,
                a: [observable(&a[0])?, observable(&a[1])?],
                b: [observable(&b[0])?, observable(&b[1])?],
            },
            RequestFile::Negativity {
                state: s,
                observables,
                tol,
            } => {
                if let Some(t) = tol {
                    if !t.is_finite() || *t < 0.0 {
                        return Err(Error::ParseError(format!(
                            "negativity tol must be finite and nonnegative, got {t}"
                        )));
                    }
                }
                Request::Negativity {
                    state: state(s)?,
                    observables: observable_list(observables)?,
                    tol: tol.unwrap_or(NEGATIVITY_REPORT_TOL),
                }
            }
            RequestFile::Audit {
                observables,
                random,
            } => {
                if observables.is_some() && random.is_some() {
                    return Err(Error::ParseError(
                        "audit takes either observables or random, not both".into(),
                    ));
                }
                let ids = match (observables, random) {
                    (Some(names), _) => observable_list(names)?,
                    (None, Some(_)) => Vec::new(),
                    (None, None) => self.observable_names.iter().map(|(_, id)| *id).collect(),
                };
                if random.is_none() && ids.len() > MAX_AUDIT_TUPLE {
                    return Err(Error::ParseError(format!(
                        "audit sweeps at most {MAX_AUDIT_TUPLE} observables, got {}",
                        ids.len()
                    )));
                }
                if let Some(r) = random {
                    if r.count == 0 || r.count > MAX_AUDIT_TUPLE {
                        return Err(Error::ParseError(format!(
                            "audit random count must be between 1 and {MAX_AUDIT_TUPLE}"
                        )));
                    }
                }
                Request::Audit {
                    observables: ids,
                    random: *random,
                }
            }
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn registry(&self) -> &Registry {
        &self.registry
    }

    pub fn requests(&self) -> &[Request] {
        &self.requests
    }

    pub fn observable_names(&self) -> impl Iterator<Item = &str> {
        self.observable_names.iter().map(|(n, _)| n.as_str())
    }

    pub fn state_names(&self) -> impl Iterator<Item = &str> {
        self.states.iter().map(|(n, _)| n.as_str())
    }

    pub fn observable_id(&self, name: &str) -> Option<ObservableId> {
        self.observable_names
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, id)| *id)
    }

    pub fn state(&self, name: &str) -> Option<&DensityOperator> {
        self.states
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, rho)| rho)
    }

    fn name_of(&self, id: ObservableId) -> String {
        self.observable_names
            .iter()
            .find(|(_, i)| *i == id)
            .map(|(n, _)| n.clone())
            .unwrap_or_else(|| id.to_string())
    }

    fn state_at(&self, index: usize) -> (&str, &DensityOperator) {
        let (name, rho) = &self.states[index];
        (name.as_str(), rho)
    }

    fn joint_measure(&self, ids: &[ObservableId]) -> Result<OperatorMeasure> {
        sym_product_measure(&self.registry.observables(ids)?)
    }

    fn table_body(
        &self,
        state_index: usize,
        ids: &[ObservableId],
        measure: &OperatorMeasure,
    ) -> Result<ReportBody> {
        let (state_name, rho) = self.state_at(state_index);
        let mu = quasi_measure(rho, measure)?;
        let rows = mu
            .space()
            .atoms()
            .map(|atom| {
                let outcome = mu.space().outcome_values(&atom);
                let weight = mu.weight_at(&atom)?;
                Ok((outcome, weight))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ReportBody::Table {
            state: state_name.to_string(),
            columns: ids.iter().map(|&id| self.name_of(id)).collect(),
            rows,
        })
    }

    /// Executes one request. `seed_override` replaces the seed of random
    /// audit requests.
    pub fn run_request(&self, index: usize, seed_override: Option<u64>) -> Result<Report> {
        let request = &self.requests[index];
        let body = match request {
            Request::Table {
                state,
                observables,
            } => {
                let measure = self.joint_measure(observables)?;
                self.table_body(*state, observables, &measure)?
            }
            Request::Marginal {
                state,
                observables,
                keep,
            } => {
                let measure = self.joint_measure(observables)?.marginalize(keep)?;
                let kept_ids: Vec<ObservableId> = measure.space().ids().to_vec();
                self.table_body(*state, &kept_ids, &measure)?
            }
            Request::Event {
                state,
                observables,
                constraints,
            } => {
                let (state_name, rho) = self.state_at(*state);
                let measure = self.joint_measure(observables)?;
                let mu = quasi_measure(rho, &measure)?;
                let mut resolved = Vec::new();
                let mut rendered = Vec::new();
                for (id, values) in constraints {
                    let spectral = self.registry.spectral(*id)?;
                    let subset =
                        OutcomeSubset::from_values(spectral, values, OUTCOME_MATCH_TOL)?;
                    resolved.push((*id, subset));
                    rendered.push((self.name_of(*id), values.clone()));
                }
                let value = mu.event_value(&EventSpec::new(resolved)?)?;
                ReportBody::Event {
                    state: state_name.to_string(),
                    constraints: rendered,
                    value,
                }
            }
            Request::Moment {
                state,
                observables,
            } => {
                let (state_name, rho) = self.state_at(*state);
                let value = sym_moment(rho, &self.registry.observables(observables)?)?;
                ReportBody::Moment {
                    state: state_name.to_string(),
                    observables: observables.iter().map(|&id| self.name_of(id)).collect(),
                    value,
                }
            }
            Request::Chsh { state, a, b } => self.run_chsh(*state, *a, *b)?,
            Request::Negativity {
                state,
                observables,
                tol,
            } => {
                let (state_name, rho) = self.state_at(*state);
                let measure = self.joint_measure(observables)?;
                let mu = quasi_measure(rho, &measure)?;
                let report = mu.negativity_report(*tol);
                ReportBody::Negativity {
                    state: state_name.to_string(),
                    observables: observables.iter().map(|&id| self.name_of(id)).collect(),
                    min_weight: report.min_weight,
                    negative_atoms: report
                        .negative_atoms
                        .iter()
                        .map(|(atom, w)| (mu.space().outcome_values(atom), *w))
                        .collect(),
                    total_variation: report.total_variation,
                    is_classical: report.is_classical,
                }
            }
            Request::Audit {
                observables,
                random,
            } => {
                let checks = match random {
                    Some(spec) => {
                        let seed = seed_override.unwrap_or(spec.seed);
                        let (registry, ids) = random_registry(self.dim, spec.count, seed)?;
                        let named: Vec<(String, ObservableId)> = ids
                            .iter()
                            .enumerate()
                            .map(|(i, &id)| (format!("rand{i}"), id))
                            .collect();
                        audit_battery(&registry, &named, &self.states)?
                    }
                    None => {
                        let named: Vec<(String, ObservableId)> = observables
                            .iter()
                            .map(|&id| (self.name_of(id), id))
                            .collect();
                        audit_battery(&self.registry, &named, &self.states)?
                    }
                };
                ReportBody::Audit { checks }
            }
        };
        Ok(Report {
            index,
            kind: request.kind(),
            body,
        })
    }

    fn run_chsh(
        &self,
        state_index: usize,
        a: [ObservableId; 2],
        b: [ObservableId; 2],
    ) -> Result<ReportBody> {
        let (state_name, rho) = self.state_at(state_index);
        // Bipartition: every A must commute with every B, and all four
        // spectra must sit on {-1, +1}.
        for &id in a.iter().chain(b.iter()) {
            let spectral = self.registry.spectral(id)?;
            for k in 0..spectral.len() {
                if (spectral.value(k).abs() - 1.0).abs() > DICHOTOMY_TOL {
                    return Err(validation(
                        &self.name_of(id),
                        Error::InvalidMeasure(format!(
                            "spectrum contains {} instead of ±1",
                            spectral.value(k)
                        )),
                    ));
                }
            }
        }
        for &ai in &a {
            for &bj in &b {
                let sa = self.registry.spectral(ai)?;
                let sb = self.registry.spectral(bj)?;
                if !sa.commutes_with(sb, COMMUTE_TOL)? {
                    return Err(validation(
                        &format!("{},{}", self.name_of(ai), self.name_of(bj)),
                        Error::NonCommuting(0, 1),
                    ));
                }
            }
        }

        let mut correlators = Vec::new();
        let mut e = [[0.0f64; 2]; 2];
        for (i, &ai) in a.iter().enumerate() {
            for (j, &bj) in b.iter().enumerate() {
                let value = sym_moment(rho, &self.registry.observables(&[ai, bj])?)?;
                e[i][j] = value;
                correlators.push((self.name_of(ai), self.name_of(bj), value));
            }
        }
        let s = e[0][0] + e[0][1] + e[1][0] - e[1][1];
        Ok(ReportBody::Chsh {
            state: state_name.to_string(),
            correlators,
            s,
        })
    }

    /// Runs every request in order, collecting reports and failures.
    pub fn run_all(&self, seed_override: Option<u64>) -> (Vec<Report>, Vec<Failure>) {
        let mut reports = Vec::new();
        let mut failures = Vec::new();
        for index in 0..self.requests.len() {
            let kind = self.requests[index].kind().to_string();
            match self.run_request(index, seed_override) {
                Ok(report) => {
                    if let Some(checks) = report.body.audit_passed() {
                        for check in checks.iter().filter(|c| !c.passed) {
                            failures.push(Failure {
                                request: index,
                                kind: kind.clone(),
                                message: format!(
                                    "check '{}' failed (deviation {:.3e})",
                                    check.name, check.deviation
                                ),
                            });
                        }
                    }
                    reports.push(report);
                }
                Err(e) => failures.push(Failure {
                    request: index,
                    kind,
                    message: e.to_string(),
                }),
            }
        }
        (reports, failures)
    }

    /// The standard audit battery over this scenario's own observables:
    /// the tuple swept is the first `MAX_AUDIT_TUPLE` ids, singles and
    /// pairs cover everything.
    pub fn audit(&self) -> Result<Vec<AuditCheck>> {
        let tuple: Vec<(String, ObservableId)> = self
            .observable_names
            .iter()
            .take(MAX_AUDIT_TUPLE)
            .map(|(n, id)| (n.clone(), *id))
            .collect();
        let mut checks = audit_battery(&self.registry, &tuple, &self.states)?;
        // Singles and pairs beyond the swept tuple still get their checks.
        for (name, id) in self.observable_names.iter().skip(MAX_AUDIT_TUPLE) {
            checks.extend(single_observable_checks(
                &self.registry,
                name,
                *id,
                &self.states,
            )?);
        }
        Ok(checks)
    }
}

fn validation(name: &str, cause: Error) -> Error {
    Error::ValidationError {
        name: name.to_string(),
        cause: Box::new(cause),
    }
}

fn parse_matrix(entries: &MatrixEntries, dim: usize) -> Result<ComplexMatrix> {
    if entries.len() != dim {
        return Err(Error::DimensionMismatch(entries.len(), dim));
    }
    let rows: Vec<Vec<Complex64>> = entries
        .iter()
        .map(|row| row.iter().map(|[re, im]| Complex64::new(*re, *im)).collect())
        .collect();
    ComplexMatrix::from_rows(&rows)
}

/// Registry of seeded random observables for audit requests.
fn random_registry(dim: usize, count: usize, seed: u64) -> Result<(Registry, Vec<ObservableId>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut registry = Registry::new();
    let mut ids = Vec::with_capacity(count);
    for _ in 0..count {
        let mut m = ComplexMatrix::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                let re = rng.gen::<f64>() - 0.5;
                let im = rng.gen::<f64>() - 0.5;
                m.set(i, j, Complex64::new(re, im));
            }
        }
        let op = HermitianOperator::new(m.hermitian_part(), 1e-12)?;
        ids.push(registry.register(op)?);
    }
    Ok((registry, ids))
}

fn check(name: String, deviation: f64, tol: f64) -> AuditCheck {
    AuditCheck {
        name,
        passed: deviation <= tol,
        deviation,
    }
}

fn single_observable_checks(
    registry: &Registry,
    name: &str,
    id: ObservableId,
    states: &[(String, DensityOperator)],
) -> Result<Vec<AuditCheck>> {
    let mut checks = Vec::new();
    let spectral = registry.spectral(id)?;
    let dim = spectral.dim();

    let full = spectral.pvm_value(&OutcomeSubset::full(spectral))?;
    checks.push(check(
        format!("pvm-normalization {name}"),
        full.max_diff(&ComplexMatrix::identity(dim)),
        1e-10,
    ));

    // The restriction of every state's measure to one coordinate must be
    // the Born distribution, hence an ordinary probability measure.
    for (state_name, rho) in states {
        if rho.dim() != dim {
            continue;
        }
        let measure = sym_product_measure(&[(id, spectral)])?;
        let mu = quasi_measure(rho, &measure)?;
        let mut worst = 0.0f64;
        let mut most_negative = 0.0f64;
        for k in 0..spectral.len() {
            let born = rho.matrix().trace_product(spectral.projector(k)).re;
            let w = mu.weight_at(&ProductAtom(vec![k]))?;
            worst = worst.max((born - w).abs());
            most_negative = most_negative.min(w);
        }
        checks.push(check(
            format!("born-single {state_name}/{name}"),
            worst,
            CONSISTENCY_TOL,
        ));
        checks.push(check(
            format!("positivity-single {state_name}/{name}"),
            (-most_negative).max(0.0),
            1e-10,
        ));
        checks.push(check(
            format!("measure-normalization {state_name}/{name}"),
            (mu.total() - 1.0).abs(),
            CONSISTENCY_TOL,
        ));
    }
    Ok(checks)
}

/// The consistency battery: permutation and marginal consistency of the
/// symmetrized product over the tuple, cylinder well-definedness and
/// additivity audits, and per-state sanity of single-observable
/// restrictions.
pub fn audit_battery(
    registry: &Registry,
    tuple: &[(String, ObservableId)],
    states: &[(String, DensityOperator)],
) -> Result<Vec<AuditCheck>> {
    let mut checks = Vec::new();
    if tuple.is_empty() {
        return Ok(checks);
    }
    let dim = registry.dim().unwrap_or(1);
    let ids: Vec<ObservableId> = tuple.iter().map(|(_, id)| *id).collect();
    let names: Vec<&str> = tuple.iter().map(|(n, _)| n.as_str()).collect();

    for (name, id) in tuple {
        checks.extend(single_observable_checks(registry, name, *id, states)?);
    }

    let joint = sym_product_measure(&registry.observables(&ids)?)?;
    checks.push(check(
        "operator-normalization".into(),
        joint.total().max_diff(&ComplexMatrix::identity(dim)),
        CONSISTENCY_TOL,
    ));
    let worst_asymmetry = joint
        .values()
        .iter()
        .fold(0.0f64, |m, v| m.max(v.asymmetry()));
    checks.push(check(
        "hermitian-values".into(),
        worst_asymmetry,
        1e-10,
    ));

    // Permutation consistency: reorder must agree with recomputation.
    let n = ids.len();
    for perm in permutations(n) {
        let reordered = joint.reorder(&perm)?;
        let permuted_ids: Vec<ObservableId> = perm.iter().map(|&p| ids[p]).collect();
        let recomputed = sym_product_measure(&registry.observables(&permuted_ids)?)?;
        let worst = reordered
            .values()
            .iter()
            .zip(recomputed.values())
            .fold(0.0f64, |m, (a, b)| m.max(a.max_diff(b)));
        let label: Vec<&str> = perm.iter().map(|&p| names[p]).collect();
        checks.push(check(
            format!("reorder-consistency ({})", label.join(",")),
            worst,
            CONSISTENCY_TOL,
        ));
    }

    // Marginal consistency over every proper nonempty subset.
    for mask in 1..((1usize << n) - 1).max(1) {
        let subset: Vec<ObservableId> = (0..n).filter(|i| mask & (1 << i) != 0).map(|i| ids[i]).collect();
        let marginal = joint.marginalize(&subset)?;
        let direct = sym_product_measure(&registry.observables(&subset)?)?;
        let worst = marginal
            .values()
            .iter()
            .zip(direct.values())
            .fold(0.0f64, |m, (a, b)| m.max(a.max_diff(b)));
        let label: Vec<&str> = (0..n).filter(|i| mask & (1 << i) != 0).map(|i| names[i]).collect();
        checks.push(check(
            format!("marginal-consistency ({})", label.join(",")),
            worst,
            CONSISTENCY_TOL,
        ));
    }

    // Commuting tuples must collapse to ordered products of projectors.
    let mut all_commute = true;
    'outer: for i in 0..n {
        for j in (i + 1)..n {
            let si = registry.spectral(ids[i])?;
            let sj = registry.spectral(ids[j])?;
            if !si.commutes_with(sj, COMMUTE_TOL)? {
                all_commute = false;
                break 'outer;
            }
        }
    }
    if all_commute {
        let mut worst = 0.0f64;
        for atom in joint.space().atoms() {
            let mut ordered = ComplexMatrix::identity(dim);
            for (coord, &k) in atom.indices().iter().enumerate() {
                ordered = ordered.matmul(registry.spectral(ids[coord])?.projector(k));
            }
            worst = worst.max(joint.value_at(&atom)?.max_diff(&ordered));
        }
        checks.push(check("commuting-collapse".into(), worst, 1e-10));
        checks.push(AuditCheck {
            name: "projection-valued".into(),
            passed: joint.is_projection_valued(1e-10),
            deviation: 0.0,
        });
    }

    // Cylinder algebra audits through the global handle.
    let handle = GlobalMeasureHandle::new(registry);
    for (coord, (name, id)) in tuple.iter().enumerate() {
        let spectral = registry.spectral(*id)?;
        let first = CylinderSet::over_one(*id, &OutcomeSubset::new([0]));
        let rest =
            CylinderSet::over_one(*id, &OutcomeSubset::new(1..spectral.len()));
        if spectral.len() > 1 {
            checks.push(AuditCheck {
                name: format!("additivity-complement {name}"),
                passed: handle.check_additivity(&first, &rest)?,
                deviation: 0.0,
            });
        }
        // Lift the single-coordinate cylinder through the full tuple.
        if n > 1 {
            let mut base = std::collections::BTreeSet::new();
            for atom in joint.space().atoms() {
                if atom.indices()[coord] == 0 {
                    base.insert(atom);
                }
            }
            let lifted = CylinderSet::new(ids.clone(), base);
            checks.push(AuditCheck {
                name: format!("well-defined-lift {name}"),
                passed: handle.check_well_defined(&first, &lifted)?,
                deviation: 0.0,
            });
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let si = registry.spectral(ids[i])?;
            let sj = registry.spectral(ids[j])?;
            let last_i = si.len() - 1;
            let last_j = sj.len() - 1;
            let rectangle = CylinderSet::new(
                vec![ids[i], ids[j]],
                [ProductAtom(vec![0, last_j])].into(),
            );
            let transposed = CylinderSet::new(
                vec![ids[j], ids[i]],
                [ProductAtom(vec![last_j, 0])].into(),
            );
            checks.push(AuditCheck {
                name: format!("well-defined-permute ({},{})", names[i], names[j]),
                passed: handle.check_well_defined(&rectangle, &transposed)?,
                deviation: 0.0,
            });
            if last_i > 0 || last_j > 0 {
                let other = CylinderSet::new(
                    vec![ids[i], ids[j]],
                    [ProductAtom(vec![last_i, 0])].into(),
                );
                checks.push(AuditCheck {
                    name: format!("additivity-rectangles ({},{})", names[i], names[j]),
                    passed: handle.check_additivity(&rectangle, &other)?,
                    deviation: 0.0,
                });
            }
        }
    }

    Ok(checks)
}

/// All permutations of 0..n in lexicographic order.
fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = (0..n).collect();
    loop {
        out.push(current.clone());
        // Next lexicographic permutation.
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| current[i] < current[i + 1]) else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| current[j] > current[i]).unwrap();
        current.swap(i, j);
        current[i + 1..].reverse();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_pauli_triple_loads() {
        let scenario = Scenario::from_json(builtin_scenario_json("pauli-triple").unwrap()).unwrap();
        assert_eq!(scenario.dim(), 2);
        assert_eq!(scenario.observable_names().count(), 3);
        assert_eq!(scenario.state_names().count(), 2);
        assert_eq!(scenario.requests().len(), 7);
    }

    #[test]
    fn all_builtins_load() {
        for name in BUILTIN_NAMES {
            let text = builtin_scenario_json(name).unwrap();
            Scenario::from_json(text)
                .unwrap_or_else(|e| panic!("builtin {name} failed to load: {e}"));
        }
    }

    #[test]
    fn non_hermitian_observable_is_rejected() {
        let text = r#"{
            "dim": 2,
            "observables": { "bad": [[[0,0],[1,0]],[[0,0],[0,0]]] },
            "states": {},
            "requests": []
        }"#;
        match Scenario::from_json(text) {
            Err(Error::ValidationError { name, cause }) => {
                assert_eq!(name, "bad");
                assert!(matches!(*cause, Error::NotHermitian(_)));
            }
            other => panic!("expected ValidationError, got {:?}", other.map(|_| ())),
        }
    }

    #[test]
    fn dangling_state_reference_is_rejected() {
        let text = r#"{
            "dim": 2,
            "observables": { "sz": [[[1,0],[0,0]],[[0,0],[-1,0]]] },
            "states": {},
            "requests": [ { "type": "table", "state": "ghost", "observables": ["sz"] } ]
        }"#;
        assert!(matches!(
            Scenario::from_json(text),
            Err(Error::DanglingReference(name)) if name == "ghost"
        ));
    }

    #[test]
    fn bloch_requires_dim_two() {
        let text = r#"{
            "dim": 3,
            "observables": {},
            "states": { "s": { "bloch": [0, 0, 1] } },
            "requests": []
        }"#;
        assert!(Scenario::from_json(text).is_err());
    }

    #[test]
    fn parse_error_carries_location() {
        match Scenario::from_json("{ not json") {
            Err(Error::ParseError(msg)) => assert!(msg.contains("line 1")),
            other => panic!("expected ParseError, got {:?}", other.map(|_| ())),
        }
    }

    #[test]
    fn permutation_enumeration() {
        assert_eq!(permutations(1), vec![vec![0]]);
        assert_eq!(permutations(3).len(), 6);
        assert_eq!(permutations(3)[0], vec![0, 1, 2]);
        assert_eq!(permutations(3)[5], vec![2, 1, 0]);
    }

    #[test]
    fn pauli_triple_requests_run_clean() {
        let scenario = Scenario::from_json(builtin_scenario_json("pauli-triple").unwrap()).unwrap();
        let (reports, failures) = scenario.run_all(None);
        assert!(failures.is_empty(), "failures: {failures:?}");
        assert_eq!(reports.len(), 7);
    }

    #[test]
    fn audit_battery_passes_on_singlet_chsh() {
        let scenario = Scenario::from_json(builtin_scenario_json("singlet-chsh").unwrap()).unwrap();
        let checks = scenario.audit().unwrap();
        assert!(!checks.is_empty());
        for c in &checks {
            assert!(c.passed, "audit check failed: {} ({:.3e})", c.name, c.deviation);
        }
    }
}
