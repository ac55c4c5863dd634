use std::fs;

use qftqkd_core::adversary::{EveKind, EveStrategy, StrategyDescriptor};
use qftqkd_core::analytics::exact::{exact_detection_probability, exact_mean_detection};
use qftqkd_core::analytics::{
    bb84_detection_probability, intended_outcomes, AnalyticEngine, BMode, EveTouchSet, Method, Statistic,
    MAX_EXHAUSTIVE_KEY_BITS,
};
use qftqkd_core::montecarlo::{self, BPolicy};
use qftqkd_core::protocols::{Backend, Protocol, ProtocolParams};
use qftqkd_core::schemes::{build_scheme, SchemeKind, VerificationScheme};
use qftqkd_core::{rng_for, Error};
use serde::Serialize;
use thiserror::Error;

use crate::output::{emit, emit_lines};
use crate::{AnalyzeArgs, AttackArgs, CrossvalidateArgs, FiguresArgs, Route, SchemeArgs, SimulateArgs};

/// Stream reserved for building random schemes, apart from the trial streams.
const SCHEME_STREAM: u64 = u64::MAX;

/// Compartments up to this width use the enumeration route under `auto`.
const AUTO_ENUMERATE_WIDTH: usize = 10;

const FIGURE_SCHEMES: [SchemeKind; 4] = [
    SchemeKind::PairCompartment,
    SchemeKind::PairFlat,
    SchemeKind::TripleCompartment,
    SchemeKind::TripleFlat,
];

const CROSSVALIDATE_SCHEMES: [SchemeKind; 5] = [
    SchemeKind::QftRandom,
    SchemeKind::PairCompartment,
    SchemeKind::PairFlat,
    SchemeKind::TripleCompartment,
    SchemeKind::TripleFlat,
];

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("{0} of {1} cross-validation rows disagree")]
    Disagreement(usize, usize),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(Error::Capacity { .. }) => 3,
            CliError::Core(Error::State { .. }) | CliError::Io(_) => 1,
            CliError::Core(_) => 2,
            CliError::Disagreement(..) => 4,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

struct NamedScheme {
    name: String,
    scheme: VerificationScheme,
}

fn resolve_scheme(args: &SchemeArgs, default: SchemeKind, key_qubits: usize, seed: u64) -> Result<NamedScheme> {
    if let Some(path) = &args.scheme_file {
        let text = fs::read_to_string(path)?;
        return Ok(NamedScheme {
            name: path.display().to_string(),
            scheme: VerificationScheme::from_json(&text)?,
        });
    }
    let kind = match &args.builtin {
        Some(name) => name.parse::<SchemeKind>().map_err(|e| usage(e.to_string()))?,
        None => default,
    };
    builtin(kind, key_qubits, seed)
}

fn builtin(kind: SchemeKind, key_qubits: usize, seed: u64) -> Result<NamedScheme> {
    if key_qubits == 0 {
        return Err(usage("--key-qubits must be at least 1"));
    }
    Ok(NamedScheme {
        name: kind.to_string(),
        scheme: build_scheme(kind, key_qubits, &mut rng_for(seed, SCHEME_STREAM))?,
    })
}

pub fn parse_eve(text: &str) -> Result<EveStrategy> {
    let text = text.trim();
    if text.starts_with('{') {
        let d: StrategyDescriptor =
            serde_json::from_str(text).map_err(|e| usage(format!("bad eve descriptor: {e}")))?;
        return Ok(EveStrategy::try_from(d)?);
    }
    match text {
        "none" => Ok(EveStrategy::none()),
        "full" => Ok(EveStrategy::full()),
        "keys" | "scheme_aware" => Ok(EveStrategy::scheme_aware()),
        _ => {
            let list = text
                .strip_prefix("subset=")
                .ok_or_else(|| usage(format!("unknown eve descriptor '{text}'")))?;
            let wires = list
                .split(',')
                .filter(|s| !s.is_empty())
                .map(|s| s.trim().parse::<usize>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| usage(format!("bad wire list '{list}': {e}")))?;
            Ok(EveStrategy::subset(wires))
        }
    }
}

fn parse_bits(text: &str) -> Result<Vec<u8>> {
    text.chars()
        .map(|c| match c {
            '0' => Ok(0),
            '1' => Ok(1),
            _ => Err(usage(format!("key must be a string of 0 and 1, got '{text}'"))),
        })
        .collect()
}

fn parse<T: std::str::FromStr<Err = Error>>(text: &str) -> Result<T> {
    text.parse().map_err(|e: Error| usage(e.to_string()))
}

fn touch_set(eve: &EveStrategy, scheme: &VerificationScheme) -> Result<EveTouchSet> {
    if matches!(eve.kind, EveKind::ManyCopies { .. }) {
        return Err(usage("many_copies is only available through the attack command"));
    }
    Ok(eve.touch_set(scheme)?)
}

fn engine(route: Route, scheme: &VerificationScheme) -> AnalyticEngine {
    let method = match route {
        Route::Enumerate => Method::Enumerate,
        Route::Factorized => Method::Factorized,
        Route::Auto if scheme.max_compartment() <= AUTO_ENUMERATE_WIDTH => Method::Enumerate,
        Route::Auto => Method::Factorized,
    };
    AnalyticEngine::new(method)
}

fn method_name(engine: &AnalyticEngine) -> &'static str {
    match engine.method {
        Method::Enumerate => "enumerate",
        Method::Factorized => "factorized",
    }
}

#[derive(Serialize)]
struct AnalyzeRow {
    scheme: String,
    key_qubits: usize,
    total_qubits: usize,
    eve: String,
    statistic: String,
    method: &'static str,
    probability: f64,
    bb84_probability: f64,
    b_space_size: u64,
    sampled: bool,
    confidence_halfwidth: f64,
    seed: u64,
}

pub fn analyze(args: &AnalyzeArgs) -> Result<()> {
    let seed = args.common.seed();
    let named = resolve_scheme(&args.scheme, SchemeKind::QftRandom, args.key_qubits, seed)?;
    let scheme = &named.scheme;
    let eve = touch_set(&parse_eve(&args.eve)?, scheme)?;
    let statistic: Statistic = parse(&args.stat)?;
    let engine = engine(args.method, scheme);
    let k = scheme.num_key_qubits();
    let report = match statistic {
        Statistic::Single => {
            let key = args
                .key
                .as_deref()
                .ok_or_else(|| usage("the single statistic needs --key"))?;
            let p = engine.detection_for_key(scheme, &parse_bits(key)?, &eve)?;
            qftqkd_core::analytics::DetectionReport {
                probability: p,
                statistic,
                b_space_size: 1,
                sampled: false,
                trials: 0,
                confidence_halfwidth: 0.0,
            }
        }
        _ => {
            let mode = match args.samples {
                Some(samples) if statistic == Statistic::Mean => BMode::Sampled { samples, seed },
                Some(_) => return Err(usage("--samples applies to the mean statistic only")),
                None if k > MAX_EXHAUSTIVE_KEY_BITS && statistic == Statistic::Mean => BMode::Sampled {
                    samples: 10_000,
                    seed,
                },
                None => BMode::Exhaustive,
            };
            engine.aggregate_detection(scheme, &eve, statistic, mode)?
        }
    };
    let row = AnalyzeRow {
        scheme: named.name.clone(),
        key_qubits: k,
        total_qubits: scheme.total_qubits(),
        eve: args.eve.clone(),
        statistic: statistic.to_string(),
        method: method_name(&engine),
        probability: report.probability,
        bb84_probability: bb84_detection_probability(&scheme.verification_indices(), &eve),
        b_space_size: report.b_space_size,
        sampled: report.sampled,
        confidence_halfwidth: report.confidence_halfwidth,
        seed,
    };
    Ok(emit(&[row], args.common.format, args.common.out.as_deref())?)
}

#[derive(Serialize)]
struct SimulateRow {
    protocol: String,
    scheme: String,
    key_qubits: usize,
    eve: String,
    mean: f64,
    stderr: f64,
    trials: u64,
    seed: u64,
}

pub fn simulate(args: &SimulateArgs) -> Result<()> {
    let seed = args.common.seed();
    let protocol: Protocol = parse(&args.protocol)?;
    let default = if protocol == Protocol::Bb84 {
        SchemeKind::Bb84Random
    } else {
        SchemeKind::QftRandom
    };
    let named = resolve_scheme(&args.scheme, default, args.key_qubits, seed)?;
    let eve = parse_eve(&args.eve)?;
    let backend: Backend = parse(&args.backend)?;
    let params = ProtocolParams::new(named.scheme.clone())
        .with_mismatch_limit(args.mismatch_limit)
        .with_seed(seed)
        .with_backend(backend);
    let policy = match &args.key {
        Some(bits) => BPolicy::Fixed(parse_bits(bits)?),
        None => BPolicy::Random,
    };
    let estimate = montecarlo::estimate_detection(protocol, &params, &eve, &policy, args.trials, seed)?;
    if let Some(path) = &args.dump_transcripts {
        let transcripts = montecarlo::simulate_transcripts(protocol, &params, &eve, &policy, args.trials, seed)?;
        emit_lines(&transcripts, path)?;
    }
    let row = SimulateRow {
        protocol: protocol.to_string(),
        scheme: named.name,
        key_qubits: named.scheme.num_key_qubits(),
        eve: args.eve.clone(),
        mean: estimate.mean,
        stderr: estimate.standard_error,
        trials: estimate.trials,
        seed,
    };
    Ok(emit(&[row], args.common.format, args.common.out.as_deref())?)
}

#[derive(Serialize)]
struct AttackRow {
    protocol: String,
    scheme: String,
    copies: usize,
    target_wire: usize,
    trials: u64,
    detected_rate: f64,
    detected_stderr: f64,
    inferred_rate: f64,
    inferred_correct_rate: f64,
    seed: u64,
}

pub fn attack(args: &AttackArgs) -> Result<()> {
    let seed = args.common.seed();
    let protocol: Protocol = parse(&args.protocol)?;
    let default = if protocol == Protocol::Bb84 {
        SchemeKind::Bb84Random
    } else {
        SchemeKind::PairCompartment
    };
    let named = resolve_scheme(&args.scheme, default, args.key_qubits, seed)?;
    let target = match args.target_wire {
        Some(w) => w,
        None => *named
            .scheme
            .key_positions()
            .first()
            .ok_or_else(|| usage("scheme has no key wire; pass --target-wire"))?,
    };
    let params = ProtocolParams::new(named.scheme.clone())
        .with_mismatch_limit(args.mismatch_limit)
        .with_seed(seed);
    let summary = montecarlo::many_copies_summary(protocol, &params, target, args.copies, args.trials, seed)?;
    let row = AttackRow {
        protocol: protocol.to_string(),
        scheme: named.name,
        copies: args.copies,
        target_wire: target,
        trials: args.trials,
        detected_rate: summary.detected.mean,
        detected_stderr: summary.detected.standard_error,
        inferred_rate: summary.inferred as f64 / args.trials as f64,
        inferred_correct_rate: if summary.inferred == 0 {
            0.0
        } else {
            summary.inferred_correct as f64 / summary.inferred as f64
        },
        seed,
    };
    Ok(emit(&[row], args.common.format, args.common.out.as_deref())?)
}

#[derive(Serialize)]
pub struct FigureRow {
    pub scheme: String,
    pub key_qubits: usize,
    pub statistic: String,
    pub method: String,
    pub probability: f64,
    pub trials: u64,
    pub stderr: f64,
    pub seed: u64,
}

pub fn figures(args: &FiguresArgs) -> Result<()> {
    let seed = args.common.seed();
    if args.max_key_qubits == 0 {
        return Err(usage("--max-key-qubits must be at least 1"));
    }
    let strategy = parse_eve(&args.eve)?;
    let mut rows = Vec::new();
    for kind in FIGURE_SCHEMES {
        for k in 1..=args.max_key_qubits {
            let scheme = builtin(kind, k, seed)?.scheme;
            let eve = touch_set(&strategy, &scheme)?;
            let engine = engine(args.method, &scheme);
            let params = ProtocolParams::new(scheme.clone()).with_seed(seed);
            let mc_strategy = EveStrategy::subset(eve.iter());
            for statistic in [Statistic::Mean, Statistic::Min] {
                let report = engine.aggregate_detection(&scheme, &eve, statistic, BMode::Exhaustive)?;
                let row = |method: &str, probability: f64, trials: u64, stderr: f64| FigureRow {
                    scheme: kind.to_string(),
                    key_qubits: k,
                    statistic: statistic.to_string(),
                    method: method.into(),
                    probability,
                    trials,
                    stderr,
                    seed,
                };
                rows.push(row("analytic", report.probability, 0, 0.0));
                let fixed_key = if statistic == Statistic::Min {
                    Some(engine.argmin_key(&scheme, &eve)?.0)
                } else {
                    None
                };
                if args.trials > 0 {
                    let policy = fixed_key.clone().map_or(BPolicy::Random, BPolicy::Fixed);
                    let est = montecarlo::estimate_detection(
                        Protocol::TwoPass,
                        &params,
                        &mc_strategy,
                        &policy,
                        args.trials,
                        seed,
                    )?;
                    rows.push(row("montecarlo", est.mean, est.trials, est.standard_error));
                }
                if args.with_exact {
                    let exact = match &fixed_key {
                        Some(key) => exact_detection_probability(&scheme, &intended_outcomes(&scheme, key)?, &eve),
                        None => exact_mean_detection(&scheme, &eve),
                    };
                    match exact {
                        Ok(p) => rows.push(row("exact", p, 0, 0.0)),
                        Err(Error::Capacity { .. }) => {}
                        Err(e) => return Err(e.into()),
                    }
                }
            }
        }
    }
    Ok(emit(&rows, args.common.format, args.common.out.as_deref())?)
}

#[derive(Serialize)]
struct CrossvalidateRow {
    scheme: String,
    key_qubits: usize,
    statistic: String,
    eve: String,
    analytic: f64,
    exact: Option<f64>,
    montecarlo: f64,
    stderr: f64,
    trials: u64,
    agree: bool,
    seed: u64,
}

pub fn crossvalidate(args: &CrossvalidateArgs) -> Result<()> {
    let seed = args.common.seed();
    let strategy = parse_eve(&args.eve)?;
    let statistics = match &args.stat {
        Some(s) => vec![parse::<Statistic>(s)?],
        None => vec![Statistic::Mean, Statistic::Min],
    };
    let mut schemes = Vec::new();
    if args.scheme.scheme_file.is_some() {
        schemes.push(resolve_scheme(&args.scheme, SchemeKind::QftRandom, 1, seed)?);
    } else {
        let kinds: Vec<SchemeKind> = match &args.scheme.builtin {
            Some(name) => vec![name.parse().map_err(|e: Error| usage(e.to_string()))?],
            None => CROSSVALIDATE_SCHEMES.to_vec(),
        };
        for kind in kinds {
            for k in 1..=args.max_key_qubits {
                schemes.push(builtin(kind, k, seed)?);
            }
        }
    }
    let mut rows = Vec::new();
    for named in &schemes {
        let eve = touch_set(&strategy, &named.scheme)?;
        for &statistic in &statistics {
            let cv = montecarlo::crossvalidate(&named.scheme, &eve, statistic, args.trials, seed)?;
            rows.push(CrossvalidateRow {
                scheme: named.name.clone(),
                key_qubits: named.scheme.num_key_qubits(),
                statistic: statistic.to_string(),
                eve: args.eve.clone(),
                analytic: cv.analytic.probability,
                exact: cv.exact,
                montecarlo: cv.empirical.mean,
                stderr: cv.empirical.standard_error,
                trials: cv.empirical.trials,
                agree: cv.agree,
                seed,
            });
        }
    }
    emit(&rows, args.common.format, args.common.out.as_deref())?;
    let failed = rows.iter().filter(|r| !r.agree).count();
    if failed > 0 {
        return Err(CliError::Disagreement(failed, rows.len()));
    }
    Ok(())
}
