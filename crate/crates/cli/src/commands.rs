//! One function per subcommand. Each returns the JSON document to print
//! and whether a verification mismatch was found.

use std::path::PathBuf;

use clap::{Args, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use spn_core::cipher::{random_state, CipherConfig, CipherSpec};
use spn_core::cipher::{Op, Pipeline};
use spn_core::field::{make_field, Elem, PrimePoly};
use spn_core::group::{
    alpha_invariant_subspace_verdict, alpha_orbit, classify_group, closure_witness, gcd_condition,
    s_round_group_relation, theorem_hypotheses,
};
use spn_core::parity::{
    self, closure_verdict, ClosureVerdict, CountComponent, Family, ParityReport,
};
use spn_core::perm::materialize_pipeline;
use spn_core::state::{max_states, StateMatrix};
use spn_core::verify::{self, Grid, Lemma};
use spn_core::{Error, Result};

use crate::spec_args::{parse_state, parse_states, SpecArgs};

pub struct Output {
    pub doc: Value,
    pub mismatch: bool,
    pub summary: String,
}

impl Output {
    fn new(doc: impl Serialize, summary: impl Into<String>) -> Output {
        Output {
            doc: serde_json::to_value(doc).expect("reports serialize"),
            mismatch: false,
            summary: summary.into(),
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Describe GF(p^r) and its modulus.
    Field(FieldArgs),
    /// Encrypt one state with T_s and the configured key schedule.
    Encrypt(CryptArgs),
    /// Invert T_s on one state.
    Decrypt(CryptArgs),
    /// Closed-form parity of a component, optionally checked by the oracle.
    Parity(ParityArgs),
    /// Closed-form cycle counts of a component map.
    Cycles(CyclesArgs),
    /// Sweep closed forms against oracles over a parameter grid.
    Verify(VerifyArgs),
    /// Orbit of alpha, invariant-subspace verdict and theorem hypotheses.
    Invariants(InvariantsArgs),
    /// Groups generated by the round functions.
    Group {
        #[command(subcommand)]
        cmd: GroupCommand,
    },
    /// Parity obstruction to closure under composition, with a witness.
    Closure(ClosureArgs),
    /// Every analysis for one spec in a single reproducible bundle.
    Report(ReportArgs),
}

#[derive(Subcommand, Debug)]
pub enum GroupCommand {
    /// Order and classification of G_tau; with --s, the s-fold relation.
    Order(GroupArgs),
}

pub fn run(cmd: &Command) -> Result<Output> {
    match cmd {
        Command::Field(a) => cmd_field(a),
        Command::Encrypt(a) => cmd_crypt(a, true),
        Command::Decrypt(a) => cmd_crypt(a, false),
        Command::Parity(a) => cmd_parity(a),
        Command::Cycles(a) => cmd_cycles(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Invariants(a) => cmd_invariants(a),
        Command::Group {
            cmd: GroupCommand::Order(a),
        } => cmd_group(a),
        Command::Closure(a) => cmd_closure(a),
        Command::Report(a) => cmd_report(a),
    }
}

// ---- field ----

#[derive(Args, Debug)]
pub struct FieldArgs {
    #[arg(long)]
    pub p: u64,
    #[arg(long, default_value_t = 1)]
    pub r: u32,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub modulus: Option<Vec<i64>>,
}

#[derive(Serialize)]
struct FieldReport {
    field: String,
    p: u32,
    r: u32,
    order: u32,
    modulus: Vec<u32>,
    primitive_element: Vec<u32>,
}

fn cmd_field(a: &FieldArgs) -> Result<Output> {
    let modulus = match &a.modulus {
        Some(cs) => {
            let p = u32::try_from(a.p).map_err(|_| Error::invalid("p", "too large"))?;
            Some(PrimePoly::new(p, cs)?)
        }
        None => None,
    };
    let f = make_field(a.p, a.r, modulus)?;
    let q = f.order();
    let mut generator = Elem::ONE;
    for code in 1..q {
        if f.mult_order(Elem(code))? == (q - 1) as u64 {
            generator = Elem(code);
            break;
        }
    }
    let report = FieldReport {
        field: f.to_string(),
        p: f.p(),
        r: f.r(),
        order: q,
        modulus: f.modulus().coeffs.clone(),
        primitive_element: f.coeffs(generator),
    };
    Ok(Output::new(
        &report,
        format!("{} with {q} elements", report.field),
    ))
}

// ---- encrypt / decrypt ----

#[derive(Args, Debug)]
pub struct CryptArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
    /// State as JSON rows of element codes or coefficient lists.
    #[arg(long, conflicts_with = "random_state")]
    pub state: Option<String>,
    /// Use a seeded random state instead of --state.
    #[arg(long)]
    pub random_state: Option<u64>,
}

fn input_state(
    cfg: &CipherConfig,
    spec: &CipherSpec,
    text: Option<&str>,
    seed: Option<u64>,
) -> Result<StateMatrix> {
    match (text, seed) {
        (Some(t), _) => parse_state(cfg, spec, "state", t),
        (None, Some(seed)) => Ok(random_state(
            spec.shape(),
            &mut ChaCha8Rng::seed_from_u64(seed),
        )),
        (None, None) => Err(Error::invalid("state", "give --state or --random-state")),
    }
}

fn cmd_crypt(a: &CryptArgs, forward: bool) -> Result<Output> {
    let (cfg, spec) = a.spec.spec()?;
    let input = input_state(&cfg, &spec, a.state.as_deref(), a.random_state)?;
    let output = if forward {
        spec.encrypt(&input)?
    } else {
        spec.decrypt(&input)?
    };
    let doc = json!({
        "direction": if forward { "encrypt" } else { "decrypt" },
        "s": spec.rounds(),
        "input": input,
        "output": output,
        "warnings": spec.warnings(),
    });
    Ok(Output::new(
        doc,
        format!(
            "{} with s = {}",
            if forward { "encrypted" } else { "decrypted" },
            spec.rounds()
        ),
    ))
}

// ---- parity ----

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ParityComponent {
    Sigma,
    Lambda,
    Pi,
    Rho,
    Round,
    #[value(name = "s_round", alias = "s-round")]
    SRound,
    All,
}

#[derive(Args, Debug)]
pub struct ParityArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
    #[arg(long, value_enum, default_value = "all")]
    pub component: ParityComponent,
    /// Round key for sigma / round, as JSON rows.
    #[arg(long)]
    pub key: Option<String>,
    /// The s+1 keys of T_s, as a JSON list of states.
    #[arg(long)]
    pub keys: Option<String>,
    /// Seed for keys that are not given.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Also tabulate the map and report the oracle parity.
    #[arg(long)]
    pub oracle: bool,
}

struct Keys {
    key: StateMatrix,
    s_keys: Vec<StateMatrix>,
}

fn keys_for(
    cfg: &CipherConfig,
    spec: &CipherSpec,
    key: Option<&str>,
    keys: Option<&str>,
    seed: u64,
) -> Result<Keys> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let key = match key {
        Some(t) => parse_state(cfg, spec, "key", t)?,
        None => random_state(spec.shape(), &mut rng),
    };
    let s_keys = match keys {
        Some(t) => parse_states(cfg, spec, "keys", t)?,
        None if spec.key_schedule().is_some() => spec.subkeys()?,
        None => (0..=spec.rounds())
            .map(|_| random_state(spec.shape(), &mut rng))
            .collect(),
    };
    Ok(Keys { key, s_keys })
}

fn parity_reports(
    spec: &CipherSpec,
    which: ParityComponent,
    keys: &Keys,
) -> Result<Vec<(ParityReport, Pipeline)>> {
    let k = keys.key.entries().to_vec();
    let mut out = Vec::new();
    let all = which == ParityComponent::All;
    if all || which == ParityComponent::Sigma {
        out.push((
            parity::parity_sigma(spec, &keys.key),
            Pipeline::single(Op::Sigma(k.clone())),
        ));
    }
    if all || which == ParityComponent::Lambda {
        out.push((parity::parity_lambda(spec)?, Pipeline::single(Op::Lambda)));
    }
    if all || which == ParityComponent::Pi {
        out.push((parity::parity_pi(spec), Pipeline::single(Op::Pi)));
    }
    if all || which == ParityComponent::Rho {
        out.push((parity::parity_rho(spec)?, Pipeline::single(Op::Rho)));
    }
    if all || which == ParityComponent::Round {
        out.push((parity::parity_round(spec, &keys.key)?, Pipeline::round(k)));
    }
    if all || which == ParityComponent::SRound {
        out.push((
            parity::parity_s_round(spec, &keys.s_keys)?,
            spec.s_round_pipeline(&keys.s_keys)?,
        ));
    }
    Ok(out)
}

fn with_oracle(
    spec: &CipherSpec,
    report: &ParityReport,
    pipeline: &Pipeline,
) -> Result<(Value, bool)> {
    let mut v = serde_json::to_value(report).expect("reports serialize");
    let oracle = materialize_pipeline(spec, pipeline, max_states())?.parity();
    let agrees = oracle == report.parity;
    v["oracle_parity"] = json!(oracle);
    v["oracle_agrees"] = json!(agrees);
    Ok((v, !agrees))
}

fn cmd_parity(a: &ParityArgs) -> Result<Output> {
    let (cfg, spec) = a.spec.spec()?;
    let keys = keys_for(&cfg, &spec, a.key.as_deref(), a.keys.as_deref(), a.seed)?;
    let reports = parity_reports(&spec, a.component, &keys)?;
    let mut mismatch = false;
    let mut docs = Vec::new();
    for (rep, pipeline) in &reports {
        if a.oracle {
            let (v, bad) = with_oracle(&spec, rep, pipeline)?;
            mismatch |= bad;
            docs.push(v);
        } else {
            docs.push(serde_json::to_value(rep).expect("reports serialize"));
        }
    }
    let summary = reports
        .iter()
        .map(|(r, _)| format!("{}: {} ({})", r.component, r.parity, r.rule))
        .collect::<Vec<_>>()
        .join("; ");
    let doc = if a.component == ParityComponent::All {
        json!({ "components": docs, "warnings": spec.warnings() })
    } else {
        docs.pop().expect("one report")
    };
    Ok(Output {
        doc,
        mismatch,
        summary,
    })
}

// ---- cycles ----

#[derive(Args, Debug)]
pub struct CyclesArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
    /// inversion, mult_by_A, sigma, rho or row_shift.
    #[arg(long)]
    pub component: String,
    #[arg(long)]
    pub key: Option<String>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub oracle: bool,
}

fn cmd_cycles(a: &CyclesArgs) -> Result<Output> {
    let (cfg, spec) = a.spec.spec()?;
    let component: CountComponent = a.component.parse()?;
    let keys = keys_for(&cfg, &spec, a.key.as_deref(), None, a.seed)?;
    let rep = parity::component_cycle_counts(&spec, component, Some(&keys.key))?;
    let mut doc = serde_json::to_value(&rep).expect("reports serialize");
    let mut mismatch = false;
    if a.oracle {
        let perm = verify::component_oracle(&spec, component, Some(&keys.key), max_states())?;
        let oracle: std::collections::BTreeMap<String, String> = perm
            .cycle_type()
            .into_iter()
            .map(|(l, c)| (l.to_string(), c.to_string()))
            .collect();
        let predicted: std::collections::BTreeMap<String, String> = rep
            .cycle_type()
            .into_iter()
            .map(|(l, c)| (l.to_string(), c.to_string()))
            .collect();
        mismatch = oracle != predicted;
        doc["oracle_cycle_type"] = json!(oracle);
        doc["oracle_agrees"] = json!(!mismatch);
    }
    let summary = format!(
        "{}: {} even-length cycles",
        rep.component, rep.even_length_cycle_count
    );
    Ok(Output {
        doc,
        mismatch,
        summary,
    })
}

// ---- verify ----

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Lemma to check; repeat for several. All lemmas when omitted.
    #[arg(long = "lemma")]
    pub lemmas: Vec<String>,
    /// Grid JSON file; the default grid when omitted.
    #[arg(long)]
    pub grid: Option<PathBuf>,
    /// Worker threads; all cores when omitted.
    #[arg(long)]
    pub workers: Option<usize>,
}

fn cmd_verify(a: &VerifyArgs) -> Result<Output> {
    let lemmas: Vec<Lemma> = if a.lemmas.is_empty() {
        Lemma::ALL.to_vec()
    } else {
        a.lemmas.iter().map(|l| l.parse()).collect::<Result<_>>()?
    };
    let grid = match &a.grid {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::invalid("grid", format!("{}: {e}", path.display())))?;
            Grid::from_json(&text)?
        }
        None => Grid::default(),
    };
    let report = verify::verify_lemmas(&lemmas, &grid, a.workers)?;
    let mismatches: u64 = report.tallies.values().map(|t| t.mismatches).sum();
    let checks: u64 = report.tallies.values().map(|t| t.checks).sum();
    let summary = format!(
        "{} cells, {} draws, {checks} checks, {mismatches} mismatches",
        report.cells_run, report.draws_run
    );
    let mut out = Output::new(&report, summary);
    out.mismatch = !report.all_pass;
    Ok(out)
}

// ---- invariants ----

#[derive(Args, Debug)]
pub struct InvariantsArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
    /// Include the witness subspace basis.
    #[arg(long)]
    pub witness: bool,
    /// Work over GF(p) instead of GF(p^r).
    #[arg(long)]
    pub over_prime_field: bool,
    /// Orbit start state as JSON rows (overrides the config's `start`).
    #[arg(long)]
    pub start: Option<String>,
    /// Largest orbit iterated.
    #[arg(long, default_value_t = 1 << 24)]
    pub orbit_cap: u64,
}

fn invariants_doc(cfg: &CipherConfig, spec: &CipherSpec, a: &InvariantsArgs) -> Result<Value> {
    let start = match &a.start {
        Some(t) => parse_state(cfg, spec, "start", t)?,
        None => cfg.start_state(spec)?,
    };
    let orbit = alpha_orbit(spec, &start, a.orbit_cap)?;
    let mut verdict = alpha_invariant_subspace_verdict(spec, a.over_prime_field)?;
    let witness_dimension = verdict.witness.as_ref().map(|w| w.dimension);
    if !a.witness {
        verdict.witness = None;
    }
    Ok(json!({
        "irreducible": verdict.irreducible,
        "orbit_size": orbit.size,
        "span_dimension": orbit.span_dimension,
        "ambient_dimension": orbit.ambient_dimension,
        "start": orbit.start,
        "witness_dimension": witness_dimension,
        "gcd_condition": gcd_condition(spec),
        "gcd_condition_note": "gcd(c(0),...,c(m-1),n) = 1 is necessary, not sufficient, for irreducibility",
        "hypotheses": theorem_hypotheses(spec)?,
        "verdict": verdict,
    }))
}

fn cmd_invariants(a: &InvariantsArgs) -> Result<Output> {
    let (cfg, spec) = a.spec.spec()?;
    let doc = invariants_doc(&cfg, &spec, a)?;
    let summary = format!(
        "alpha char poly {}, orbit size {}, span dimension {}",
        if doc["irreducible"] == json!(true) {
            "irreducible"
        } else {
            "reducible"
        },
        doc["orbit_size"],
        doc["span_dimension"]
    );
    Ok(Output::new(doc, summary))
}

// ---- group ----

#[derive(Args, Debug)]
pub struct GroupArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
    /// Random keys sampled on top of the canonical key set.
    #[arg(long = "keys", default_value_t = 16)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

fn cmd_group(a: &GroupArgs) -> Result<Output> {
    let (_, spec) = a.spec.spec()?;
    match a.spec.s {
        Some(s) => {
            let rep = s_round_group_relation(&spec, s, a.samples, a.seed)?;
            let summary = format!(
                "G_tau {:?} of order {}; {}-fold group order {}; normality failures {}",
                rep.group.verdict, rep.group.order, s, rep.s_fold_order, rep.normality_failures
            );
            let mut out = Output::new(&rep, summary);
            out.mismatch = !rep.containment_holds
                || rep.normality_failures > 0
                || rep.theorem_holds == Some(false);
            Ok(out)
        }
        None => {
            let rep = classify_group(&spec, a.samples, a.seed)?;
            let summary = format!("G_tau {:?}, order {}", rep.verdict, rep.order);
            Ok(Output::new(&rep, summary))
        }
    }
}

// ---- closure ----

#[derive(Args, Debug)]
pub struct ClosureArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
    /// Use the single-round family {T[k]} instead of {T_s[k]}.
    #[arg(long)]
    pub round: bool,
}

fn closure_doc(spec: &CipherSpec, family: Family) -> Result<Value> {
    let verdict = closure_verdict(spec, family)?;
    let witness = if verdict.verdict == ClosureVerdict::NotAGroup {
        Some(closure_witness(spec, family)?)
    } else {
        None
    };
    Ok(json!({ "verdict": verdict, "witness": witness }))
}

fn cmd_closure(a: &ClosureArgs) -> Result<Output> {
    let (_, spec) = a.spec.spec()?;
    let family = if a.round {
        Family::Round
    } else {
        Family::SRound { s: spec.rounds() }
    };
    let doc = closure_doc(&spec, family)?;
    let summary = format!("{} ({})", doc["verdict"]["verdict"], doc["verdict"]["rule"]);
    Ok(Output::new(doc, summary))
}

// ---- report ----

#[derive(Args, Debug)]
pub struct ReportArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Random keys sampled for the group analysis.
    #[arg(long = "keys", default_value_t = 8)]
    pub samples: usize,
}

fn or_error(r: Result<Value>) -> Value {
    r.unwrap_or_else(|e| json!({ "skipped": e.to_string() }))
}

fn cmd_report(a: &ReportArgs) -> Result<Output> {
    let (cfg, spec) = a.spec.spec()?;
    let keys = keys_for(&cfg, &spec, None, None, a.seed)?;
    let parity: Vec<Value> = parity_reports(&spec, ParityComponent::All, &keys)?
        .into_iter()
        .map(|(r, _)| serde_json::to_value(r).expect("reports serialize"))
        .collect();
    let cycles: Vec<Value> = ["inversion", "mult_by_A", "sigma", "rho", "row_shift"]
        .iter()
        .map(|c| {
            or_error((|| {
                let comp: CountComponent = c.parse()?;
                let rep = parity::component_cycle_counts(&spec, comp, Some(&keys.key))?;
                Ok(serde_json::to_value(rep).expect("reports serialize"))
            })())
        })
        .collect();
    let inv_args = InvariantsArgs {
        spec: a.spec.clone(),
        witness: true,
        over_prime_field: false,
        start: None,
        orbit_cap: 1 << 24,
    };
    let invariants = or_error(invariants_doc(&cfg, &spec, &inv_args));
    let group = or_error(
        classify_group(&spec, a.samples, a.seed)
            .map(|g| serde_json::to_value(g).expect("reports serialize")),
    );
    let closure = or_error(closure_doc(&spec, Family::SRound { s: spec.rounds() }));
    let commands = [
        "parity --component all".to_string(),
        "cycles --component <each>".to_string(),
        "invariants --witness".to_string(),
        format!("group order --keys {} --seed {}", a.samples, a.seed),
        "closure".to_string(),
    ];
    let doc = json!({
        "tool": { "name": "spn", "version": env!("CARGO_PKG_VERSION") },
        "spec": cfg,
        "seed": a.seed,
        "commands": commands,
        "warnings": spec.warnings(),
        "reports": {
            "parity": parity,
            "cycles": cycles,
            "invariants": invariants,
            "group": group,
            "closure": closure,
        },
    });
    Ok(Output::new(doc, "report bundle"))
}
