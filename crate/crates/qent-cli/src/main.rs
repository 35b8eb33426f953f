//! `qent` — entanglement analysis relative to a dynamical symmetry group.

use std::path::PathBuf;

use clap::{Parser, Subcommand};
use nalgebra::Vector3;
use serde::Deserialize;
use serde_json::{json, Value};

use qent::bell;
use qent::fluct;
use qent::invariants;
use qent::io::{read_state, StateFile};
use qent::majorana;
use qent::orbit::{self, FlowParams};
use qent::repn::{local_algebra, power_algebra, spin_generators, OperatorBasis, PowerKind, SpinLabel};
use qent::selftest;
use qent::states::{self, PureState};
use qent::Error;

const DEFAULT_SEED: u64 = 20240615;

#[derive(Parser)]
#[command(name = "qent", version, about = "Entanglement classification and quantification relative to a dynamical symmetry group", disable_help_subcommand = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// System descriptor: spin:<2s> | local:<d1>x<d2>[x...] | sym:<d>^<n> | wedge:<d>^<n>
    #[arg(long, global = true)]
    system: Option<String>,

    /// JSON state file ({"dims": [...], "amplitudes": [[re,im],...]}).
    #[arg(long, global = true)]
    state: Option<PathBuf>,

    /// JSON parameter file overriding flow/search defaults.
    #[arg(long, global = true)]
    params: Option<PathBuf>,

    /// Emit a machine-readable JSON report.
    #[arg(long, global = true)]
    json: bool,

    /// Seed for every stochastic component.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Stability class and concurrence from the orbit flow.
    Classify,
    /// Total variance, expectation vector, and coherence verdict.
    Variance,
    /// Schmidt coefficients and entanglement entropy of a bipartite state.
    Schmidt,
    /// Generalized concurrence from the orbit flow.
    Concurrence,
    /// Closed-form polynomial invariants for the state's format.
    Invariants,
    /// Roots, star points, balance residual, and multiplicity class.
    Majorana,
    /// Pentagram Bell functional: evaluate given angles or search for a violation.
    Pentagram {
        /// Five chain angles "t1,t2,a2,a3,a4"; omitted: search for a violating pentagram.
        #[arg(long)]
        angles: Option<String>,
    },
    /// CHSH functional on a two-qubit state.
    Chsh {
        /// Twelve numbers "a1x,a1y,a1z,a2...,b2z"; omitted: optimal coplanar angles.
        #[arg(long)]
        directions: Option<String>,
    },
    /// Run the acceptance checks at desk scale.
    Selftest,
}

#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct ParamFile {
    step: Option<f64>,
    max_iters: Option<usize>,
    grad_tol: Option<f64>,
    null_tol: Option<f64>,
    backtracking: Option<f64>,
    search_budget: Option<usize>,
}

struct Settings {
    flow: FlowParams,
    search_budget: usize,
    params_echo: Value,
}

fn load_settings(path: Option<&PathBuf>) -> Result<Settings, Error> {
    let mut flow = FlowParams::default();
    let mut search_budget = 20_000usize;
    if let Some(path) = path {
        let text = std::fs::read_to_string(path)?;
        let file: ParamFile = serde_json::from_str(&text)?;
        if let Some(v) = file.step {
            flow.step = v;
        }
        if let Some(v) = file.max_iters {
            flow.max_iters = v;
        }
        if let Some(v) = file.grad_tol {
            flow.grad_tol = v;
        }
        if let Some(v) = file.null_tol {
            flow.null_tol = v;
        }
        if let Some(v) = file.backtracking {
            flow.backtracking = v;
        }
        if let Some(v) = file.search_budget {
            search_budget = v;
        }
    }
    flow.validate()?;
    let params_echo = json!({
        "step": flow.step,
        "max_iters": flow.max_iters,
        "grad_tol": flow.grad_tol,
        "null_tol": flow.null_tol,
        "backtracking": flow.backtracking,
        "search_budget": search_budget,
    });
    Ok(Settings { flow, search_budget, params_echo })
}

fn parse_system(spec: &str) -> Result<OperatorBasis, Error> {
    let bad = || {
        Error::InvalidInput(format!(
            "unrecognized system \"{spec}\"; expected spin:<2s>, local:<d1>x<d2>[x...], sym:<d>^<n>, or wedge:<d>^<n>"
        ))
    };
    let (kind, rest) = spec.split_once(':').ok_or_else(bad)?;
    match kind {
        "spin" => {
            let two_s: usize = rest.parse().map_err(|_| bad())?;
            Ok(spin_generators(SpinLabel::new(two_s)))
        }
        "local" => {
            let dims: Vec<usize> = rest
                .split('x')
                .map(|p| p.parse().map_err(|_| bad()))
                .collect::<Result<_, _>>()?;
            local_algebra(&dims)
        }
        "sym" | "wedge" => {
            let (d, n) = rest.split_once('^').ok_or_else(bad)?;
            let d: usize = d.parse().map_err(|_| bad())?;
            let n: usize = n.parse().map_err(|_| bad())?;
            let base = local_algebra(&[d])?;
            let power = if kind == "sym" { PowerKind::Symmetric } else { PowerKind::Antisymmetric };
            power_algebra(&base, n, power)
        }
        _ => Err(bad()),
    }
}

fn require_state(cli: &Cli) -> Result<PureState, Error> {
    let path = cli
        .state
        .as_ref()
        .ok_or_else(|| Error::InvalidInput("this subcommand needs --state <file>".into()))?;
    read_state(path)
}

fn require_system(cli: &Cli, state: &PureState) -> Result<OperatorBasis, Error> {
    let basis = match &cli.system {
        Some(spec) => parse_system(spec)?,
        // A missing descriptor defaults to the local algebra of the state's
        // factor structure (or the spin algebra for a single factor).
        None => {
            if state.factors() == 1 {
                spin_generators(SpinLabel::new(state.dim() - 1))
            } else {
                local_algebra(state.dims())?
            }
        }
    };
    if basis.dim != state.dim() {
        return Err(Error::DimensionMismatch(format!(
            "system dimension {} does not match state dimension {}; check --system against the state file dims",
            basis.dim,
            state.dim()
        )));
    }
    Ok(basis)
}

fn complex_pair(z: qent::C64) -> Value {
    json!([z.re, z.im])
}

fn state_echo(cli: &Cli, state: &PureState) -> Value {
    let file = StateFile::from_state(state, None);
    json!({
        "path": cli.state.as_ref().map(|p| p.display().to_string()),
        "dims": file.dims,
        "norm": state.norm(),
    })
}

fn envelope(cli: &Cli, settings: &Settings, command: &str, result: Value, input: Value) -> Value {
    json!({
        "command": command,
        "version": env!("CARGO_PKG_VERSION"),
        "seed": cli.seed,
        "parameters": settings.params_echo,
        "system": cli.system,
        "input": input,
        "result": result,
    })
}

fn emit(cli: &Cli, report: &Value, human: &str) {
    if cli.json {
        println!("{}", serde_json::to_string_pretty(report).expect("report serializes"));
    } else {
        println!("{human}");
    }
}

fn parse_floats(text: &str, expected: usize, what: &str) -> Result<Vec<f64>, Error> {
    let values: Vec<f64> = text
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| Error::InvalidInput(format!("{what} must be {expected} comma-separated numbers")))?;
    if values.len() != expected {
        return Err(Error::InvalidInput(format!(
            "{what} must have exactly {expected} numbers, got {}",
            values.len()
        )));
    }
    Ok(values)
}

fn run(cli: &Cli) -> Result<i32, Error> {
    let settings = load_settings(cli.params.as_ref())?;
    match &cli.command {
        Command::Classify => {
            let state = require_state(cli)?;
            let basis = require_system(cli, &state)?;
            let flow = orbit::kempf_ness_flow(&state, &basis, &settings.flow)?;
            let mu = match flow.stability {
                orbit::Stability::Unstable | orbit::Stability::Coherent => 0.0,
                _ => flow.concurrence,
            };
            let result = json!({
                "stability": flow.stability.as_str(),
                "concurrence": mu,
                "iterations": flow.iterations,
                "final_gradient_norm": flow.final_gradient_norm,
                "final_norm_squared": flow.norm_history.last(),
            });
            let human = format!(
                "stability {}\nconcurrence {:.6}\niterations {}\nfinal gradient norm {:.3e}",
                flow.stability.as_str(),
                mu,
                flow.iterations,
                flow.final_gradient_norm
            );
            emit(cli, &envelope(cli, &settings, "classify", result, state_echo(cli, &state)), &human);
            Ok(0)
        }
        Command::Variance => {
            let state = require_state(cli)?;
            let basis = require_system(cli, &state)?;
            let report = fluct::total_variance(&state, &basis)?;
            let coherence = fluct::coherence_residual(&state, &basis)?;
            let verdict = match fluct::coherence_verdict(coherence) {
                fluct::CoherenceVerdict::Coherent => "coherent",
                fluct::CoherenceVerdict::Indeterminate => "indeterminate",
                fluct::CoherenceVerdict::NotCoherent => "not_coherent",
            };
            let result = json!({
                "total_variance": report.total_variance,
                "casimir_scalar": report.casimir_scalar,
                "expectation_vector": report.expectation_vector,
                "entanglement_residual": report.residual_entanglement,
                "coherence_residual": coherence,
                "coherence_verdict": verdict,
            });
            let human = format!(
                "total variance {:.10}\ncasimir scalar {:.10}\nentanglement residual {:.3e}\ncoherence residual {:.3e} ({verdict})",
                report.total_variance, report.casimir_scalar, report.residual_entanglement, coherence
            );
            emit(cli, &envelope(cli, &settings, "variance", result, state_echo(cli, &state)), &human);
            Ok(0)
        }
        Command::Schmidt => {
            let state = require_state(cli)?;
            let data = states::schmidt(&state)?;
            let ent = states::entropy(&state)?;
            let result = json!({
                "coefficients": data.coefficients,
                "entropy_bits": ent,
                "left_basis": data.left_basis.iter().map(|v| v.iter().copied().map(complex_pair).collect::<Vec<_>>()).collect::<Vec<_>>(),
                "right_basis": data.right_basis.iter().map(|v| v.iter().copied().map(complex_pair).collect::<Vec<_>>()).collect::<Vec<_>>(),
            });
            let human = format!(
                "schmidt coefficients {:?}\nentropy {:.10} bits",
                data.coefficients, ent
            );
            emit(cli, &envelope(cli, &settings, "schmidt", result, state_echo(cli, &state)), &human);
            Ok(0)
        }
        Command::Concurrence => {
            let state = require_state(cli)?;
            let basis = require_system(cli, &state)?;
            let mu = orbit::concurrence(&state, &basis, &settings.flow)?;
            let result = json!({ "concurrence": mu });
            emit(
                cli,
                &envelope(cli, &settings, "concurrence", result, state_echo(cli, &state)),
                &format!("concurrence {mu:.10}"),
            );
            Ok(0)
        }
        Command::Invariants => {
            let state = require_state(cli)?;
            let mut entries = Vec::new();
            if state.factors() == 2 {
                let r = invariants::det_concurrence(&state)?;
                entries.push(json!({
                    "name": r.name,
                    "value": complex_pair(r.value),
                    "modulus": r.modulus,
                    "derived_concurrence": r.derived_concurrence,
                    "degenerate_format": r.degenerate_format,
                }));
            }
            if state.dims() == [2, 2, 2] {
                let r = invariants::cayley_hyperdet(&state)?;
                let tau = invariants::three_tangle(&state)?;
                entries.push(json!({
                    "name": r.name,
                    "value": complex_pair(r.value),
                    "modulus": r.modulus,
                    "derived_concurrence": r.derived_concurrence,
                    "three_tangle": tau,
                }));
            }
            if entries.is_empty() {
                return Err(Error::InvalidInput(format!(
                    "no closed-form invariants implemented for dims {:?}; supported: two equal factors, or 2x2x2",
                    state.dims()
                )));
            }
            let human = entries
                .iter()
                .map(|e| serde_json::to_string(e).expect("entry serializes"))
                .collect::<Vec<_>>()
                .join("\n");
            emit(
                cli,
                &envelope(cli, &settings, "invariants", Value::Array(entries), state_echo(cli, &state)),
                &human,
            );
            Ok(0)
        }
        Command::Majorana => {
            let state = require_state(cli)?;
            if state.factors() != 1 {
                return Err(Error::InvalidInput(
                    "the root picture applies to spin states; provide a single-factor state".into(),
                ));
            }
            let two_s = state.dim() - 1;
            let roots = majorana::to_roots(&state, two_s)?;
            let stars = majorana::star_points(&roots);
            let balance = majorana::balance_residual(&state, two_s)?;
            let class = majorana::hm_classify(&roots);
            let mut result = json!({
                "two_s": two_s,
                "finite_roots": roots.finite_roots.iter().copied().map(complex_pair).collect::<Vec<_>>(),
                "infinity_multiplicity": roots.infinity_multiplicity,
                "star_points": stars.points,
                "balance_residual": balance,
                "multiplicity_class": class.as_str(),
            });
            if state.dim() == 3 {
                let (bilinear, cross, phi) = majorana::spin1_invariants(&state)?;
                result["spin1"] = json!({
                    "bilinear_square": complex_pair(bilinear),
                    "cross_norm": cross,
                    "phi": phi,
                });
            }
            let human = format!(
                "2s = {two_s}\nfinite roots {:?}\nroots at infinity {}\nbalance residual {balance:.3e}\nmultiplicity class {}",
                roots.finite_roots, roots.infinity_multiplicity, class.as_str()
            );
            emit(cli, &envelope(cli, &settings, "majorana", result, state_echo(cli, &state)), &human);
            Ok(0)
        }
        Command::Pentagram { angles } => {
            let state = require_state(cli)?;
            let (pentagram, searched) = match angles {
                Some(text) => {
                    let v = parse_floats(text, 5, "--angles")?;
                    (bell::make_pentagram(&[v[0], v[1], v[2], v[3], v[4]])?, false)
                }
                None => match bell::search_violation(&state, settings.search_budget)? {
                    Some(found) => (found.pentagram, true),
                    None => {
                        // Coherent input: report the best aligned orientation
                        // of a regular pentagram, which still satisfies the
                        // classical bound.
                        let (m, _, _) = bell::canonical_frame(&state)?;
                        (bell::regular_pentagram(&m), true)
                    }
                },
            };
            let report = bell::pentagram_report(&state, &pentagram)?;
            let value = report.bell_value.expect("value computed for state");
            let result = json!({
                "vectors": pentagram.vectors.iter().map(|v| [v.x, v.y, v.z]).collect::<Vec<_>>(),
                "spectrum": report.spectrum,
                "bell_value": value,
                "violated": report.violated,
                "jsquare_form": bell::jsquare_form(&state, &pentagram)?,
                "from_search": searched,
            });
            let human = format!(
                "bell_value {value:.6}\nviolated {}\nspectrum {:?}",
                report.violated, report.spectrum
            );
            emit(cli, &envelope(cli, &settings, "pentagram", result, state_echo(cli, &state)), &human);
            Ok(0)
        }
        Command::Chsh { directions } => {
            let state = require_state(cli)?;
            let dirs: Vec<Vector3<f64>> = match directions {
                Some(text) => parse_floats(text, 12, "--directions")?
                    .chunks(3)
                    .map(|c| Vector3::new(c[0], c[1], c[2]))
                    .collect(),
                None => [0.0f64, 90.0, 45.0, 135.0]
                    .iter()
                    .map(|deg| {
                        let t = deg.to_radians();
                        Vector3::new(t.sin(), 0.0, t.cos())
                    })
                    .collect(),
            };
            let value = bell::chsh_value(&state, &dirs[0], &dirs[1], &dirs[2], &dirs[3])?;
            let result = json!({
                "directions": dirs.iter().map(|v| [v.x, v.y, v.z]).collect::<Vec<_>>(),
                "chsh_value": value,
                "violated": value < -1e-10,
            });
            let human = format!("chsh_value {value:.10}\nviolated {}", value < -1e-10);
            emit(cli, &envelope(cli, &settings, "chsh", result, state_echo(cli, &state)), &human);
            Ok(0)
        }
        Command::Selftest => {
            let results = selftest::run_all(cli.seed, &settings.flow);
            let failed = results.iter().filter(|r| !r.passed).count();
            if cli.json {
                let array: Vec<Value> = results
                    .iter()
                    .map(|r| json!({"name": r.name, "passed": r.passed, "detail": r.detail}))
                    .collect();
                let report = envelope(
                    cli,
                    &settings,
                    "selftest",
                    json!({"checks": array, "failed": failed}),
                    Value::Null,
                );
                println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
            } else {
                for r in &results {
                    println!("{} {:<40} {}", if r.passed { "PASS" } else { "FAIL" }, r.name, r.detail);
                }
                println!("{} checks, {} failed", results.len(), failed);
            }
            Ok(if failed == 0 { 0 } else { 1 })
        }
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help/version requests exit 0; anything else is a validation error.
            if e.use_stderr() {
                eprintln!("{e}");
                std::process::exit(1);
            }
            print!("{e}");
            std::process::exit(0);
        }
    };
    match run(&cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}
