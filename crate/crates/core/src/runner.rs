//! Executes parsed sessions and renders deterministic reports.
//!
//! Tasks run in declaration order, each with its own scalar stream derived
//! from the session seed and the task id, so a report is a pure function of
//! (session text, seed). Text mode emits one `key=value` line per task; JSON
//! mode emits one object per line with keys in sorted order. An error in one
//! task never suppresses later tasks.
//!
//! Exit codes: 0 when every task succeeded and every identity check held,
//! 1 when some task errored, 2 when all tasks ran but an identity check
//! failed, 3 (from the binary) when the session did not parse.

use crate::genstream::GenericScalarStream;
use crate::germs::{self, GermError};
use crate::mult::{self, MultError};
use crate::polar::{self, PolarError};
use crate::poly::Polynomial;
use crate::session::{Session, SessionOptions, Task, TaskOp};
use crate::submodule::Submodule;
use serde_json::{json, Map, Value};

const DEFAULT_SEED: u64 = 1;
const DEFAULT_N_MAX: usize = 4;

/// Effective run settings after merging defaults, session options, and
/// command-line overrides.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub seed: u64,
    pub n_max: usize,
    pub json: bool,
    pub budget: u64,
}

/// Merges settings; the command-line values win over session options.
pub fn resolve_config(
    opts: &SessionOptions,
    cli_seed: Option<u64>,
    cli_n_max: Option<usize>,
    cli_json: bool,
    cli_budget: Option<u64>,
) -> RunConfig {
    RunConfig {
        seed: cli_seed.or(opts.seed).unwrap_or(DEFAULT_SEED),
        n_max: cli_n_max.or(opts.n_max).unwrap_or(DEFAULT_N_MAX),
        json: cli_json || opts.json.unwrap_or(false),
        budget: cli_budget.or(opts.budget).unwrap_or(mult::DEFAULT_BUDGET),
    }
}

/// Any library failure a task can surface.
#[derive(Debug)]
enum TaskError {
    Mult(MultError),
    Polar(PolarError),
    Germ(GermError),
}

impl From<MultError> for TaskError {
    fn from(e: MultError) -> Self {
        TaskError::Mult(e)
    }
}
impl From<PolarError> for TaskError {
    fn from(e: PolarError) -> Self {
        TaskError::Polar(e)
    }
}
impl From<GermError> for TaskError {
    fn from(e: GermError) -> Self {
        TaskError::Germ(e)
    }
}

fn mult_kind(e: &MultError) -> &'static str {
    match e {
        MultError::NotStabilized { .. } => "not_stabilized",
        MultError::InfiniteColength => "infinite_colength",
        MultError::InfiniteLength => "infinite_length",
        MultError::RankDeficient { .. } => "rank_deficient",
        MultError::NotContained => "not_contained",
        MultError::RankMismatch { .. } => "rank_mismatch",
        MultError::InfiniteWitness { .. } => "infinite_witness",
        MultError::Budget(_) => "budget_exceeded",
    }
}

impl TaskError {
    fn kind(&self) -> &'static str {
        match self {
            TaskError::Mult(e) => mult_kind(e),
            TaskError::Polar(e) => match e {
                PolarError::NotFiniteOverBase => "not_finite_over_base",
                PolarError::UnsupportedBaseDim(_) => "unsupported_base_dim",
                PolarError::FiberPointDiscovery { .. } => "incomplete_fiber_points",
                PolarError::Mult(m) => mult_kind(m),
            },
            TaskError::Germ(e) => match e {
                GermError::NotCorank1 => "not_corank_one",
                GermError::NotFinite => "not_finite",
                GermError::NotCritical => "not_critical",
                GermError::NotIcis => "not_icis",
                GermError::NotIsolated => "not_isolated",
                GermError::NotInSquare => "not_in_square",
                GermError::IncompletePointList { .. } => "incomplete_point_list",
                GermError::EmptySelection => "empty_selection",
                GermError::UnsupportedBaseDim(_) => "unsupported_base_dim",
                GermError::PresentationDeficient => "presentation_deficient",
                GermError::Mult(m) => mult_kind(m),
            },
        }
    }

    fn message(&self) -> String {
        match self {
            TaskError::Mult(e) => e.to_string(),
            TaskError::Polar(e) => e.to_string(),
            TaskError::Germ(e) => e.to_string(),
        }
    }
}

/// Payload of a finished task, in emission order, plus whether every
/// identity check inside it held.
struct Outcome {
    payload: Vec<(&'static str, Value)>,
    verdicts_ok: bool,
    extra_assumptions: Vec<String>,
}

impl Outcome {
    fn new(payload: Vec<(&'static str, Value)>) -> Outcome {
        Outcome { payload, verdicts_ok: true, extra_assumptions: Vec::new() }
    }
}

fn poly_str(p: &Polynomial) -> String {
    p.to_string().replace(' ', "")
}

/// Sorted, de-duplicated display strings of an ideal's generators.
fn ideal_strings(m: &Submodule) -> Vec<String> {
    let mut v: Vec<String> = m.gens().iter().map(|g| poly_str(&g.comp(0))).collect();
    v.sort();
    v.dedup();
    v
}

fn str_list(v: &[String]) -> Value {
    Value::Array(v.iter().map(|s| Value::String(s.clone())).collect())
}

fn lambda_value(lambda: &[u64]) -> Value {
    Value::Array(lambda.iter().map(|&x| json!(x)).collect())
}

fn verdict(equal: bool) -> Value {
    Value::String(if equal { "equal" } else { "unequal" }.to_string())
}

fn exec(op: &TaskOp, stream: &mut GenericScalarStream, cfg: &RunConfig) -> Result<Outcome, TaskError> {
    let n_max = cfg.n_max;
    let budget = cfg.budget;
    match op {
        TaskOp::Multiplicity { name, m } => {
            let r = if m.rank() == 1 {
                mult::samuel_multiplicity(m, n_max, budget)?
            } else {
                mult::buchsbaum_rim(m, n_max, budget)?
            };
            Ok(Outcome::new(vec![
                ("name", json!(name)),
                ("kind", json!(r.kind.to_string())),
                ("value", json!(r.value)),
                ("lambda", lambda_value(&r.lambda)),
            ]))
        }
        TaskOp::Colength { name, m } => {
            let c = m
                .colength(budget)
                .map_err(|e| match e {
                    crate::gb::ColengthError::Infinite => MultError::InfiniteColength,
                    crate::gb::ColengthError::Budget(b) => MultError::Budget(b),
                })?;
            Ok(Outcome::new(vec![("name", json!(name)), ("value", json!(c))]))
        }
        TaskOp::QuotientLength { mname, nname, m, n } => {
            let v = mult::quotient_length(m, n, budget)?;
            Ok(Outcome::new(vec![
                ("m", json!(mname)),
                ("n", json!(nname)),
                ("value", json!(v)),
            ]))
        }
        TaskOp::Pair { mname, nname, m, n } => {
            let r = mult::pair_multiplicity(m, n, n_max, budget)?;
            Ok(Outcome::new(vec![
                ("m", json!(mname)),
                ("n", json!(nname)),
                ("value", json!(r.value)),
                ("lambda", lambda_value(&r.lambda)),
            ]))
        }
        TaskOp::ReductionCheck { mname, nname, m, n } => {
            let r = mult::pair_multiplicity(m, n, n_max, budget)?;
            let holds = r.value == 0;
            let mut out = Outcome::new(vec![
                ("m", json!(mname)),
                ("n", json!(nname)),
                ("pair", json!(r.value)),
                ("verdict", json!(if holds { "holds" } else { "fails" })),
            ]);
            out.verdicts_ok = holds;
            Ok(out)
        }
        TaskOp::PerturbationCount { name, m } => {
            let r = mult::generic_perturbation_count(m, stream, budget)?;
            let simple = match r.simple_points {
                Some(b) => json!(b),
                None => json!("unknown"),
            };
            Ok(Outcome::new(vec![
                ("name", json!(name)),
                ("count", json!(r.count)),
                ("simple_points", simple),
            ]))
        }
        TaskOp::PerturbationVsBr { name, m } => {
            let lhs = mult::generic_perturbation_count(m, stream, budget)?.count;
            let rhs = mult::buchsbaum_rim(m, n_max, budget)?.value;
            let mut out = Outcome::new(vec![
                ("name", json!(name)),
                ("lhs", json!(lhs)),
                ("rhs", json!(rhs)),
                ("verdict", verdict(lhs == rhs)),
            ]);
            out.verdicts_ok = lhs == rhs;
            Ok(out)
        }
        TaskOp::JInvariant { fname, iname, f, i } => {
            let v = germs::j_invariant(f, i, budget)?;
            Ok(Outcome::new(vec![
                ("name", json!(fname)),
                ("locus", json!(iname)),
                ("value", json!(v)),
            ]))
        }
        TaskOp::PolarMult { name, m, k } => {
            let mut rep = polar::polar_ideal(m, *k, stream);
            let v = polar::polar_mult_over_base(&mut rep, stream, budget)?;
            Ok(Outcome::new(vec![
                ("name", json!(name)),
                ("k", json!(k)),
                ("empty", json!(rep.empty)),
                ("value", json!(v)),
            ]))
        }
        TaskOp::PolarCheck { name, family } => {
            let rep = polar::multiplicity_polar_check(family, stream, n_max, budget)?;
            let mut out = Outcome::new(vec![
                ("family", json!(name)),
                ("e_origin", json!(rep.e_origin)),
                ("e_fiber", json!(rep.e_fiber_sum)),
                ("lhs", json!(rep.delta_e)),
                ("rhs", json!(rep.rhs)),
                ("verdict", verdict(rep.verdict)),
            ]);
            out.verdicts_ok = rep.verdict;
            out.extra_assumptions = rep.assumptions.clone();
            Ok(out)
        }
        TaskOp::Pellikaan { fname, iname, f, i, family, sigma, points } => {
            let rep =
                germs::pellikaan_report(f, i, family, sigma, points, stream, n_max, budget)?;
            let mut out = Outcome::new(vec![
                ("name", json!(fname)),
                ("locus", json!(iname)),
                ("j", json!(rep.j)),
                ("pair", json!(rep.e_pair)),
                ("a_one", json!(rep.census.a_one)),
                ("d_infinity", json!(rep.census.d_infinity)),
                ("a_infinity", json!(rep.census.a_infinity)),
                ("other", json!(rep.census.other)),
                ("fiber", json!(rep.fiber_value.to_string())),
                ("j_equals_pair", json!(rep.j_equals_pair)),
                ("j_equals_census", json!(rep.j_equals_census)),
            ]);
            out.verdicts_ok = rep.j_equals_pair && rep.j_equals_census;
            Ok(out)
        }
        TaskOp::Pushforward { name, germ } => {
            let push = germs::pushforward_presentation(germ, budget)?;
            Ok(Outcome::new(vec![
                ("name", json!(name)),
                ("sheets", json!(push.sheets)),
                ("image", str_list(&ideal_strings(&push.f0))),
                ("fitting_one", str_list(&ideal_strings(&push.f1))),
            ]))
        }
        TaskOp::Disentanglement { name, germ } => {
            let rep = germs::disentanglement_report(germ, stream, n_max, budget)?;
            let ok = rep.quotient_identity && rep.mu_identity && rep.polar_empty_consistent;
            let mut out = Outcome::new(vec![
                ("name", json!(name)),
                ("image", str_list(&ideal_strings(&rep.image_ideal))),
                ("conductor", str_list(&ideal_strings(&rep.conductor))),
                ("e_pair", json!(rep.e_pair)),
                ("dim_c_over_cp", json!(rep.dim_c_over_cp)),
                ("dim_c_over_j", json!(rep.dim_c_over_j)),
                ("dim_c_over_j_pullback", json!(rep.dim_c_over_j_pullback)),
                ("mu", json!(rep.mu)),
                ("quotient_identity", json!(rep.quotient_identity)),
                ("mu_identity", json!(rep.mu_identity)),
                ("polar_empty_consistent", json!(rep.polar_empty_consistent)),
            ]);
            out.verdicts_ok = ok;
            Ok(out)
        }
        TaskOp::Milnor { name, eqs } => {
            let v = germs::milnor_icis(eqs, budget)?;
            Ok(Outcome::new(vec![("name", json!(name)), ("value", json!(v))]))
        }
        TaskOp::OneFormIndex { xname, omeganame, lname, eqs, omega, l } => {
            let rep = germs::one_form_index(eqs, omega, l, n_max, budget)?;
            let mut payload = vec![
                ("space", json!(xname)),
                ("omega", json!(omeganame)),
                ("l", json!(lname)),
                ("index", json!(rep.index)),
                ("cancelled", json!(rep.cancelled)),
                ("slice_milnor", json!(rep.slice_milnor)),
            ];
            if let (Some(a), Some(b)) = (rep.e_omega, rep.e_reference) {
                payload.push(("e_omega", json!(a)));
                payload.push(("e_reference", json!(b)));
            }
            let mut out = Outcome::new(payload);
            out.extra_assumptions = rep.assumptions.clone();
            Ok(out)
        }
        TaskOp::Wf { xname, fname, lname, eqs, f, l, y } => {
            let rep = germs::wf_invariant(eqs, f, l, y, n_max, budget)?;
            Ok(Outcome::new(vec![
                ("space", json!(xname)),
                ("f", json!(fname)),
                ("l", json!(lname)),
                ("y", json!(y.to_string())),
                ("e_f_zero", json!(rep.e_f_zero)),
                ("e_l_zero", json!(rep.e_l_zero)),
                ("e_f_sample", json!(rep.e_f_sample)),
                ("e_l_sample", json!(rep.e_l_sample)),
                (
                    "verdict",
                    json!(if rep.independent { "independent" } else { "not_independent" }),
                ),
            ]))
        }
    }
}

fn text_value(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(items) => {
            let parts: Vec<String> = items.iter().map(text_value).collect();
            format!("[{}]", parts.join(","))
        }
        other => other.to_string(),
    }
}

fn text_line(
    task: &Task,
    payload: &[(&'static str, Value)],
    assumptions: &[String],
    draws: &[i64],
    status: &str,
    err: Option<(&str, &str)>,
) -> String {
    let mut s = format!("task={} id={}", task.op.name(), task.id);
    for (k, v) in payload {
        s.push_str(&format!(" {k}={}", text_value(v)));
    }
    if !assumptions.is_empty() {
        s.push_str(&format!(" assumptions=\"{}\"", assumptions.join("; ")));
    }
    if !draws.is_empty() {
        let parts: Vec<String> = draws.iter().map(|d| d.to_string()).collect();
        s.push_str(&format!(" draws=[{}]", parts.join(",")));
    }
    s.push_str(&format!(" status={status}"));
    if let Some((kind, msg)) = err {
        s.push_str(&format!(" kind={kind} message=\"{msg}\""));
    }
    s
}

fn json_line(
    task: &Task,
    payload: &[(&'static str, Value)],
    assumptions: &[String],
    draws: &[i64],
    status: &str,
    err: Option<(&str, &str)>,
) -> String {
    let mut payload_map = Map::new();
    for (k, v) in payload {
        payload_map.insert(k.to_string(), v.clone());
    }
    let mut obj = Map::new();
    obj.insert("id".into(), json!(task.id));
    obj.insert("op".into(), json!(task.op.name()));
    obj.insert("status".into(), json!(status));
    obj.insert("payload".into(), Value::Object(payload_map));
    obj.insert("assumptions".into(), json!(assumptions));
    obj.insert("draws".into(), json!(draws));
    if let Some((kind, msg)) = err {
        obj.insert("kind".into(), json!(kind));
        obj.insert("message".into(), json!(msg));
    }
    Value::Object(obj).to_string()
}

/// Runs every task in order and renders the report lines. Returns the lines
/// and the process exit code.
pub fn run_session(sess: &Session, cfg: &RunConfig) -> (Vec<String>, i32) {
    let mut lines = Vec::new();
    lines.push(if cfg.json { "{\"format\":1}".to_string() } else { "format 1".to_string() });
    let mut any_error = false;
    let mut any_failed_check = false;
    for task in &sess.tasks {
        let mut stream = GenericScalarStream::for_task(cfg.seed, task.id as u64);
        let render = if cfg.json { json_line } else { text_line };
        match exec(&task.op, &mut stream, cfg) {
            Ok(out) => {
                if !out.verdicts_ok {
                    any_failed_check = true;
                }
                let mut assumptions = sess.assumptions.clone();
                assumptions.extend(out.extra_assumptions.iter().cloned());
                lines.push(render(task, &out.payload, &assumptions, stream.log(), "ok", None));
            }
            Err(e) => {
                any_error = true;
                lines.push(render(
                    task,
                    &[],
                    &sess.assumptions,
                    stream.log(),
                    "error",
                    Some((e.kind(), &e.message())),
                ));
            }
        }
    }
    let code = if any_error {
        1
    } else if any_failed_check {
        2
    } else {
        0
    };
    (lines, code)
}
