use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::Args;
use serde::{Deserialize, Serialize};
use serde_json::json;

use queasylab::complexity::{ComplexityReport, SearchLimits, UniverseSpec, MAX_PROGRAM_LEN_CAP};
use queasylab::metrics::{
    compressor_cd_proxy, landscape as run_landscape, write_csv, LandscapeConfig, LandscapeInstance,
    Mode, ProxyConfig,
};
use queasylab::problems::{
    emit_dimacs, encode_pair, parse_dimacs, FacInstance, Language, LanguageOracle,
};
use queasylab::pruning::{
    extend_and_prune, AdversaryDecider, CandidateDecider, OracleDecider, PruneConfig, PruneError,
};
use queasylab::quantum::{
    amplify as run_amplify, amplify_distribution, qc_t, qcd_t, qic_t, Gate, GateCircuit,
};
use queasylab::reduction::{invert_reduction, reduce_to_sat};
use queasylab::{BitString, Distribution};

use crate::config::{load, resolve};
use crate::{Common, Failure, EXIT_CENSORED};

fn emit(common: &Common, text: &str) -> Result<()> {
    match &common.output {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}

fn settings<C, F>(common: &Common, command: &str, flags: &F) -> Result<C>
where
    C: Serialize + serde::de::DeserializeOwned + Default,
    F: Serialize,
{
    let file =
        load(common.config.as_deref(), command).map_err(|e| Failure::usage(format!("{e:#}")))?;
    resolve(file, flags).map_err(|e| Failure::usage(format!("{e:#}")))
}

fn usage<E: std::fmt::Display>(e: E) -> anyhow::Error {
    Failure::usage(e.to_string())
}

// ---------------------------------------------------------------- complexity

#[derive(Debug, Args, Serialize)]
pub struct ComplexityFlags {
    #[command(flatten)]
    #[serde(skip)]
    common: Common,
    /// Hex bits, `0b`-prefixed binary, an `x:a` factor-prefix pair, or a DIMACS file.
    #[arg(long)]
    instance: Option<String>,
    /// parity, majority, allones, fac, or auto (fac for pairs, parity otherwise).
    #[arg(long)]
    language: Option<String>,
    #[arg(long)]
    max_len: Option<usize>,
    #[arg(long)]
    max_steps: Option<u64>,
    /// Distinguishing universe: `same` (strings of |x| bits) or `upto`.
    #[arg(long)]
    universe: Option<String>,
    /// Also compute qc, qcd and qic.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    quantum: Option<bool>,
    #[arg(long)]
    epsilon: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct ComplexitySettings {
    instance: Option<String>,
    language: String,
    max_len: usize,
    max_steps: u64,
    universe: String,
    quantum: bool,
    epsilon: f64,
    proxy: ProxyConfig,
}

impl Default for ComplexitySettings {
    fn default() -> Self {
        Self {
            instance: None,
            language: "auto".into(),
            max_len: 14,
            max_steps: 256,
            universe: "same".into(),
            quantum: false,
            epsilon: queasylab::quantum::DEFAULT_EPSILON,
            proxy: ProxyConfig::default(),
        }
    }
}

/// FAC over all strings: anything that is not a pair encoding is a non-member,
/// so same-length universes stay fully defined.
struct PairLanguage;

impl LanguageOracle for PairLanguage {
    fn name(&self) -> &str {
        "fac"
    }

    fn chi(&self, x: &BitString) -> Option<bool> {
        Some(Language::Fac.chi(x).unwrap_or(false))
    }
}

enum Instance {
    Bits(BitString),
    Pair(FacInstance),
    Dimacs(PathBuf),
}

fn parse_instance(s: &str) -> Result<Instance> {
    if s.contains(':') {
        return s.parse().map(Instance::Pair).map_err(usage);
    }
    let path = Path::new(s);
    if s.ends_with(".cnf") || path.is_file() {
        return Ok(Instance::Dimacs(path.to_path_buf()));
    }
    if let Some(b) = s.strip_prefix("0b") {
        return b.parse().map(Instance::Bits).map_err(usage);
    }
    BitString::from_hex(s).map(Instance::Bits).map_err(usage)
}

pub fn complexity(flags: ComplexityFlags) -> Result<u8> {
    let cfg: ComplexitySettings = settings(&flags.common, "complexity", &flags)?;
    let raw = cfg
        .instance
        .as_deref()
        .ok_or_else(|| Failure::usage("--instance is required"))?;
    if cfg.max_len > MAX_PROGRAM_LEN_CAP {
        return Err(Failure::usage(format!(
            "--max-len {} exceeds the enumeration cap of {MAX_PROGRAM_LEN_CAP}",
            cfg.max_len
        )));
    }
    let (x, default_lang) = match parse_instance(raw)? {
        Instance::Dimacs(path) => return dimacs_report(&flags.common, &cfg, &path),
        Instance::Pair(z) => (encode_pair(z.x, &z.a), Language::Fac),
        Instance::Bits(x) => (x, Language::Parity),
    };
    let lang = if cfg.language == "auto" {
        default_lang
    } else {
        cfg.language.parse::<Language>().map_err(usage)?
    };
    let lang: &dyn LanguageOracle = match lang {
        Language::Fac => &PairLanguage,
        _ => &lang,
    };
    let universe = match cfg.universe.as_str() {
        "same" => UniverseSpec::SameLength(x.len()),
        "upto" => UniverseSpec::UpToLength(x.len()),
        other => return Err(Failure::usage(format!("unknown universe {other:?}"))),
    };
    let limits = SearchLimits::new(cfg.max_len, cfg.max_steps, universe);
    let mut report = ComplexityReport::classical(&x, lang, &limits).map_err(usage)?;
    if cfg.quantum {
        let qc = if x.is_empty() {
            queasylab::complexity::ComplexityValue::AboveLimit { limit: cfg.max_len }
        } else {
            qc_t(&x, cfg.epsilon, &limits).map_err(usage)?
        };
        let qcd = qcd_t(&x, cfg.epsilon, &limits).map_err(usage)?;
        let qic = qic_t(&x, lang, cfg.epsilon, &limits).map_err(usage)?;
        report = report.with_quantum(cfg.epsilon, &qc, &qcd, &qic);
    }
    let mut shown = serde_json::to_value(&cfg)?;
    shown["language"] = json!(lang.name());
    shown.as_object_mut().expect("object").remove("proxy");
    let out = json!({ "config": shown, "report": report });
    emit(&flags.common, &(serde_json::to_string_pretty(&out)? + "\n"))?;
    Ok(if report.all_censored() {
        EXIT_CENSORED
    } else {
        0
    })
}

fn dimacs_report(common: &Common, cfg: &ComplexitySettings, path: &Path) -> Result<u8> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let f = parse_dimacs(&text).map_err(usage)?;
    let ic = queasylab::metrics::solver_ic_proxy(&f, &cfg.proxy).map_err(usage)?;
    let bytes: BitString = emit_dimacs(&f)
        .bytes()
        .flat_map(|b| (0..8).rev().map(move |i| b >> i & 1 == 1))
        .collect();
    let cd = compressor_cd_proxy(&bytes, &cfg.proxy.compressor).map_err(usage)?;
    let out = json!({
        "config": { "instance": cfg.instance, "proxy": cfg.proxy },
        "report": {
            "mode": "proxy",
            "variables": f.variable_count(),
            "clauses": f.clauses().len(),
            "ic": ic,
            "cd": cd,
        },
    });
    emit(common, &(serde_json::to_string_pretty(&out)? + "\n"))?;
    Ok(if ic.value.is_none() { EXIT_CENSORED } else { 0 })
}

// ------------------------------------------------------------------- reduce

#[derive(Debug, Args, Serialize)]
pub struct ReduceFlags {
    #[command(flatten)]
    #[serde(skip)]
    common: Common,
    #[arg(long)]
    x: Option<u64>,
    /// Prefix bits, possibly empty.
    #[arg(long)]
    a: Option<String>,
    /// Recover `x:a` from a DIMACS file instead of reducing.
    #[arg(long)]
    invert: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
struct ReduceSettings {
    x: Option<u64>,
    a: String,
    invert: Option<PathBuf>,
}

pub fn reduce(flags: ReduceFlags) -> Result<u8> {
    let cfg: ReduceSettings = settings(&flags.common, "reduce", &flags)?;
    if let Some(path) = &cfg.invert {
        let text =
            fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let f = parse_dimacs(&text).map_err(usage)?;
        let z = invert_reduction(&f).map_err(usage)?;
        emit(&flags.common, &format!("{z}\n"))?;
        return Ok(0);
    }
    let x = cfg.x.ok_or_else(|| Failure::usage("--x is required"))?;
    let a: BitString = cfg.a.parse().map_err(usage)?;
    let z = FacInstance::new(x, a).map_err(usage)?;
    let art = reduce_to_sat(&z).map_err(usage)?;
    let comments = vec![
        format!("config {}", serde_json::to_string(&cfg)?),
        format!("instance {z}"),
    ];
    let text = emit_dimacs(&art.formula.clone().with_comments(comments));
    let back = parse_dimacs(&text)
        .map_err(|e| Failure::invariant(format!("emitted DIMACS does not parse: {e}")))?;
    match invert_reduction(&back) {
        Ok(w) if w == z => {}
        other => {
            return Err(Failure::invariant(format!(
                "emitted formula inverts to {other:?}, not {z}"
            )))
        }
    }
    emit(&flags.common, &text)?;
    Ok(0)
}

// -------------------------------------------------------------------- prune

#[derive(Debug, Args, Serialize)]
pub struct PruneFlags {
    #[command(flatten)]
    #[serde(skip)]
    common: Common,
    #[arg(long)]
    x: Option<u64>,
    /// Seeded random deciders added next to the oracle.
    #[arg(long)]
    adversaries: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    initial_width: Option<usize>,
    /// Check every round against the true factor.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    audit: Option<bool>,
    /// Leave the oracle out of the pool.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    no_oracle: Option<bool>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct PruneSettings {
    x: Option<u64>,
    adversaries: usize,
    seed: u64,
    initial_width: Option<usize>,
    audit: bool,
    no_oracle: bool,
}

impl Default for PruneSettings {
    fn default() -> Self {
        Self {
            x: None,
            adversaries: 50,
            seed: 0,
            initial_width: None,
            audit: false,
            no_oracle: false,
        }
    }
}

pub fn prune(flags: PruneFlags) -> Result<u8> {
    let cfg: PruneSettings = settings(&flags.common, "prune", &flags)?;
    let x = cfg.x.ok_or_else(|| Failure::usage("--x is required"))?;
    let oracle = OracleDecider::default();
    let adversaries = AdversaryDecider::pool(cfg.adversaries, cfg.seed);
    let mut pool: Vec<&dyn CandidateDecider> = Vec::new();
    if !cfg.no_oracle {
        pool.push(&oracle);
    }
    pool.extend(adversaries.iter().map(|d| d as &dyn CandidateDecider));
    let outcome = extend_and_prune(
        x,
        &pool,
        PruneConfig {
            initial_width: cfg.initial_width,
            audit: cfg.audit,
        },
    )
    .map_err(|e| match e {
        PruneError::EmptyPool | PruneError::BadInput(_) => usage(e),
        other => Failure::invariant(other.to_string()),
    })?;
    let mut text = serde_json::to_string(&json!({ "config": cfg }))? + "\n";
    for line in outcome.trace_lines() {
        text.push_str(&line);
        text.push('\n');
    }
    text.push_str(&outcome.factor_bits);
    text.push('\n');
    emit(&flags.common, &text)?;
    Ok(0)
}

// ------------------------------------------------------------------ amplify

#[derive(Debug, Args, Serialize)]
pub struct AmplifyFlags {
    #[command(flatten)]
    #[serde(skip)]
    common: Common,
    /// Target probability of the built-in two-outcome source.
    #[arg(long)]
    epsilon: Option<f64>,
    /// Copy counts, comma separated.
    #[arg(long, value_delimiter = ',')]
    copies: Option<Vec<usize>>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Circuit in text form to sample instead of the built-in source.
    #[arg(long)]
    circuit: Option<PathBuf>,
    /// Target output bits.
    #[arg(long)]
    target: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct AmplifySettings {
    epsilon: f64,
    copies: Vec<usize>,
    trials: usize,
    seed: u64,
    circuit: Option<PathBuf>,
    target: String,
}

impl Default for AmplifySettings {
    fn default() -> Self {
        Self {
            epsilon: 0.5,
            copies: vec![10, 50, 200],
            trials: 1000,
            seed: 0,
            circuit: None,
            target: "0".into(),
        }
    }
}

pub fn amplify(flags: AmplifyFlags) -> Result<u8> {
    let cfg: AmplifySettings = settings(&flags.common, "amplify", &flags)?;
    let target: BitString = cfg.target.parse().map_err(usage)?;
    let circuit = match &cfg.circuit {
        Some(path) => {
            let text =
                fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            Some(GateCircuit::from_text(&text).map_err(usage)?)
        }
        // one Hadamard gives the two outcomes probability one half each
        None if cfg.epsilon == 0.5 => Some(GateCircuit::measure_all(1, vec![Gate::H(0)])?),
        None => None,
    };
    let synthetic = if circuit.is_none() {
        if !(cfg.epsilon > 0.0 && cfg.epsilon <= 1.0) {
            return Err(Failure::usage(format!(
                "epsilon {} is outside (0, 1]",
                cfg.epsilon
            )));
        }
        if target.len() != 1 {
            return Err(Failure::usage("the built-in source emits one bit"));
        }
        let mut m = BTreeMap::new();
        m.insert(target.clone(), cfg.epsilon);
        let other: BitString = [!target.as_slice()[0]].into_iter().collect();
        if cfg.epsilon < 1.0 {
            m.insert(other, 1.0 - cfg.epsilon);
        }
        Some(Distribution::from_map(m))
    } else {
        None
    };

    let mut buf = Vec::new();
    writeln!(buf, "# config {}", serde_json::to_string(&cfg)?)?;
    let mut w = csv::Writer::from_writer(&mut buf);
    w.write_record([
        "n_copies",
        "trials",
        "successes",
        "success_rate",
        "failure_rate",
        "failure_bound",
        "j",
        "a",
    ])?;
    for &n in &cfg.copies {
        let r = match (&circuit, &synthetic) {
            (Some(c), _) => run_amplify(c, &target, n, cfg.trials, cfg.seed),
            (None, Some(d)) => amplify_distribution(d, &target, n, cfg.trials, cfg.seed),
            (None, None) => unreachable!("one source is always set"),
        }
        .map_err(usage)?;
        w.write_record([
            n.to_string(),
            r.trials.to_string(),
            r.successes.to_string(),
            format!("{:.6}", r.success_estimate),
            format!("{:.6}", r.failure_rate()),
            format!("{:.6}", r.plan.failure_bound()),
            r.plan.j.to_string(),
            r.plan.a.to_string(),
        ])?;
    }
    w.flush()?;
    drop(w);
    emit(&flags.common, &String::from_utf8(buf)?)?;
    Ok(0)
}

// ---------------------------------------------------------------- landscape

#[derive(Debug, Args, Serialize)]
pub struct LandscapeFlags {
    #[command(flatten)]
    #[serde(skip)]
    common: Common,
    /// exact (bit strings) or proxy (CNF formulas).
    #[arg(long)]
    mode: Option<String>,
    #[arg(long)]
    language: Option<String>,
    /// Exact mode: string lengths, comma separated.
    #[arg(long, value_delimiter = ',')]
    lengths: Option<Vec<usize>>,
    #[arg(long)]
    max_len: Option<usize>,
    #[arg(long)]
    max_steps: Option<u64>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    margin: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Proxy mode: factor-prefix pairs `x:a` to reduce, comma separated.
    #[arg(long, value_delimiter = ',')]
    pairs: Option<Vec<String>>,
    /// Proxy mode: random 3-CNF formulas to add.
    #[arg(long)]
    random: Option<usize>,
    #[arg(long)]
    vars: Option<u32>,
    /// Proxy mode: extra DIMACS files.
    #[arg(long, value_delimiter = ',')]
    inputs: Option<Vec<PathBuf>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct LandscapeSettings {
    mode: Mode,
    language: String,
    lengths: Vec<usize>,
    max_len: usize,
    max_steps: u64,
    epsilon: f64,
    margin: usize,
    seed: u64,
    pairs: Vec<String>,
    random: usize,
    vars: u32,
    inputs: Vec<PathBuf>,
    declared_qic: usize,
    proxy: ProxyConfig,
}

impl Default for LandscapeSettings {
    fn default() -> Self {
        let base = LandscapeConfig::default();
        Self {
            mode: base.mode,
            language: base.language,
            lengths: vec![1, 2, 3],
            max_len: base.max_program_len,
            max_steps: base.max_steps,
            epsilon: base.epsilon,
            margin: base.margin,
            seed: base.seed,
            pairs: vec!["15:1".into(), "21:11".into(), "35:10".into()],
            random: 4,
            vars: 20,
            inputs: Vec::new(),
            declared_qic: base.declared_qic,
            proxy: base.proxy,
        }
    }
}

pub fn landscape(flags: LandscapeFlags) -> Result<u8> {
    let cfg: LandscapeSettings = settings(&flags.common, "landscape", &flags)?;
    if cfg.max_len > MAX_PROGRAM_LEN_CAP {
        return Err(Failure::usage(format!(
            "--max-len {} exceeds the enumeration cap of {MAX_PROGRAM_LEN_CAP}",
            cfg.max_len
        )));
    }
    let instances = match cfg.mode {
        Mode::Exact => LandscapeInstance::all_strings(cfg.lengths.iter().copied()),
        Mode::Proxy => {
            let pairs: Vec<FacInstance> = cfg
                .pairs
                .iter()
                .map(|p| p.parse::<FacInstance>().map_err(usage))
                .collect::<Result<_>>()?;
            let mut v = LandscapeInstance::formula_batch(&pairs, cfg.random, cfg.vars, cfg.seed);
            for path in &cfg.inputs {
                let text = fs::read_to_string(path)
                    .with_context(|| format!("reading {}", path.display()))?;
                v.push(LandscapeInstance::Formula {
                    id: path.display().to_string(),
                    formula: parse_dimacs(&text).map_err(usage)?,
                    from_reduction: false,
                });
            }
            v
        }
    };
    let run_cfg = LandscapeConfig {
        mode: cfg.mode,
        language: cfg.language.clone(),
        max_program_len: cfg.max_len,
        max_steps: cfg.max_steps,
        epsilon: cfg.epsilon,
        margin: cfg.margin,
        seed: cfg.seed,
        proxy: cfg.proxy.clone(),
        declared_qic: cfg.declared_qic,
    };
    let records = run_landscape(&instances, &run_cfg).map_err(usage)?;
    let mut buf = Vec::new();
    writeln!(buf, "# config {}", serde_json::to_string(&cfg)?)?;
    write_csv(&records, cfg.margin, &mut buf)?;
    emit(&flags.common, &String::from_utf8(buf)?)?;
    let all_censored = !records.is_empty() && records.iter().all(|r| r.ic.is_censored());
    Ok(if all_censored { EXIT_CENSORED } else { 0 })
}
