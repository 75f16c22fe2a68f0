use std::collections::BTreeMap;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use splitdecomp::branchings::{good_pair_from_sad, good_uu_pair_split, verify_good_pair, GoodPair};
use splitdecomp::semicomplete::{decompose_semicomplete, SemicompleteOutcome};
use splitdecomp::split_sad::{decompose_split, decompose_split_traced, Trace};
use splitdecomp::testkit::{
    default_middle, gen_counterexample, gen_random, oracle_good_pair, oracle_sad, Enforce, Family, GenSpec,
};
use splitdecomp::verify::verify_decomposition;
use splitdecomp::{ArcId, Digraph, Error, StrongArcDecomposition, VertexId};

use crate::graphfile::{GraphFile, ParseError};
use crate::report::{NamedArc, Payload, Report, Status, Verification};

fn invalid(command: &'static str, e: ParseError) -> Report {
    match e {
        ParseError::Line { line, message } => Report::error(command, Status::Invalid, message, Some(line)),
        ParseError::File(message) => Report::error(command, Status::Invalid, message, None),
    }
}

/// Replaces vertex ids in a library message by names: the ids after
/// `vertex`, `vertices N and`, and on either side of `->`.
fn with_names(message: &str, file: &GraphFile) -> String {
    let tokens: Vec<&str> = message.split(' ').collect();
    let mut out = Vec::with_capacity(tokens.len());
    for (i, tok) in tokens.iter().enumerate() {
        let digits = tok.trim_end_matches([',', ';', ':', '.', ')']);
        let id = digits.parse::<usize>().ok().filter(|&v| v < file.names.len());
        let prev = |k: usize| i.checked_sub(k).map(|j| tokens[j]);
        let is_vertex = prev(1) == Some("vertex")
            || prev(1) == Some("vertices")
            || (prev(1) == Some("and") && prev(3) == Some("vertices"))
            || prev(1) == Some("->")
            || tokens.get(i + 1) == Some(&"->");
        match id {
            Some(v) if is_vertex => out.push(format!("{}{}", file.name(v), &tok[digits.len()..])),
            _ => out.push(tok.to_string()),
        }
    }
    out.join(" ")
}

fn from_error(command: &'static str, e: Error) -> Report {
    let status = match e {
        Error::PreconditionViolated(_)
        | Error::DegreeHypothesisFails(_)
        | Error::NotStrong
        | Error::NotSemicomplete => Status::ViolatedPrecondition,
        Error::TooLarge { .. } => Status::Invalid,
        _ => Status::InternalError,
    };
    Report::error(command, status, e.to_string(), None)
}

fn named_error(command: &'static str, e: Error, file: &GraphFile) -> Report {
    let mut report = from_error(command, e);
    if let Payload::Error { error, .. } = &mut report.payload {
        *error = with_names(error, file);
    }
    report
}

fn named_arcs(file: &GraphFile, g: &Digraph, arcs: &[ArcId]) -> Vec<NamedArc> {
    arcs.iter()
        .map(|&a| {
            let (t, h) = g.endpoints(a);
            (file.name(t).to_string(), file.name(h).to_string())
        })
        .collect()
}

fn describe(trace: &Trace) -> String {
    if trace.small_case {
        return "small semicomplete part".into();
    }
    let mut parts = vec![if trace.direct {
        "semicomplete part already 2-arc-strong".to_string()
    } else {
        format!("{} paths split off", trace.paths)
    }];
    if trace.moves > 0 {
        parts.push(format!("{} exchange moves", trace.moves));
    }
    if trace.repairs > 0 {
        parts.push(format!("{} cut-arc repairs", trace.repairs));
    }
    if trace.augmented {
        parts.push("final augmentation".into());
    }
    if let Some(kind) = trace.exception {
        parts.push(format!("exceptional core {}", kind.name()));
    }
    if trace.searched {
        parts.push("exact search fallback".into());
    }
    parts.join(", ")
}

#[derive(Debug, Clone, Copy, Default)]
pub struct DecomposeOptions {
    pub verify_only: bool,
    pub semicomplete: bool,
}

fn decomposition_report(
    file: &GraphFile,
    g: &Digraph,
    sad: &StrongArcDecomposition,
    route: String,
    opts: DecomposeOptions,
) -> Report {
    let verification = match verify_decomposition(g, sad) {
        Ok(()) => Verification::Pass,
        Err(e) => {
            return Report::error(
                "decompose",
                Status::InternalError,
                format!("decomposition failed verification: {e}"),
                None,
            )
        }
    };
    let payload = if opts.verify_only {
        Payload::Empty {}
    } else {
        Payload::Decomposition { a1: named_arcs(file, g, &sad.a1), a2: named_arcs(file, g, &sad.a2), route }
    };
    Report { command: "decompose", status: Status::Decomposed, payload, verification, timing_ms: None }
}

/// Decomposes the graph in `text`. Split digraphs go through the
/// constructive route; with `semicomplete` set, a semicomplete multigraph
/// (empty `v1`) is decomposed or matched against the exception catalog.
pub fn decompose(text: &str, opts: DecomposeOptions) -> Report {
    let start = Instant::now();
    let mut report = decompose_inner(text, opts);
    report.timing_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    report
}

fn decompose_inner(text: &str, opts: DecomposeOptions) -> Report {
    let file = match GraphFile::parse(text) {
        Ok(f) => f,
        Err(e) => return invalid("decompose", e),
    };
    if opts.semicomplete {
        if !file.v1.is_empty() {
            return Report::error(
                "decompose",
                Status::Invalid,
                "--semicomplete expects an empty `v1:` list".into(),
                None,
            );
        }
        let g = &file.graph;
        return match decompose_semicomplete(g) {
            Ok(SemicompleteOutcome::Decomposed(sad)) => {
                decomposition_report(&file, g, &sad, "exact search".into(), opts)
            }
            Ok(SemicompleteOutcome::Exception(ex)) => {
                let witness = ex
                    .iso
                    .iter()
                    .enumerate()
                    .map(|(i, &v)| (format!("v{}", i + 1), file.name(v).to_string()))
                    .collect();
                Report {
                    command: "decompose",
                    status: Status::Exception,
                    payload: Payload::Exception { exception: ex.which.name().to_string(), witness },
                    verification: Verification::NotRun,
                    timing_ms: None,
                }
            }
            Err(Error::SearchExhausted) => Report::error(
                "decompose",
                Status::Exception,
                "no strong arc decomposition exists, and the input is not in the exception catalog".into(),
                None,
            ),
            Err(e) => named_error("decompose", e, &file),
        };
    }
    let d = match file.split_digraph() {
        Ok(d) => d,
        Err(e) => return invalid("decompose", e),
    };
    if d.v1().is_empty() {
        return Report::error(
            "decompose",
            Status::Invalid,
            "`v1:` is empty; use --semicomplete for semicomplete inputs".into(),
            None,
        );
    }
    match decompose_split_traced(&d) {
        Ok((sad, trace)) => decomposition_report(&file, d.graph(), &sad, describe(&trace), opts),
        Err(e) => named_error("decompose", e, &file),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum PairMethod {
    /// The (u,u) construction when the roots agree, else via a
    /// decomposition, else the exhaustive oracle within its bound.
    #[default]
    Auto,
    /// The (u,u) construction on a semicomplete split digraph.
    Uu,
    /// Branchings read off a strong arc decomposition.
    Decomposition,
    /// Exhaustive search.
    Oracle,
}

fn pair_report(file: &GraphFile, g: &Digraph, gp: &GoodPair, route: &str) -> Report {
    let parents = |map: Vec<Option<VertexId>>| -> BTreeMap<String, String> {
        map.into_iter()
            .enumerate()
            .filter_map(|(v, p)| p.map(|p| (file.name(v).to_string(), file.name(p).to_string())))
            .collect()
    };
    let verification = match verify_good_pair(g, gp) {
        Ok(()) => Verification::Pass,
        Err(e) => {
            return Report::error("good-pair", Status::InternalError, format!("pair failed verification: {e}"), None)
        }
    };
    Report {
        command: "good-pair",
        status: Status::Pair,
        payload: Payload::Pair {
            root_out: file.name(gp.out.root).to_string(),
            root_in: file.name(gp.in_.root).to_string(),
            out_parent: parents(gp.out.parent_map(g)),
            in_parent: parents(gp.in_.parent_map(g)),
            route: route.to_string(),
        },
        verification,
        timing_ms: None,
    }
}

pub fn good_pair(text: &str, root_out: &str, root_in: &str, method: PairMethod, oracle_bound: usize) -> Report {
    let start = Instant::now();
    let mut report = good_pair_inner(text, root_out, root_in, method, oracle_bound);
    report.timing_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    report
}

fn good_pair_inner(text: &str, root_out: &str, root_in: &str, method: PairMethod, oracle_bound: usize) -> Report {
    let file = match GraphFile::parse(text) {
        Ok(f) => f,
        Err(e) => return invalid("good-pair", e),
    };
    let find = |name: &str| file.names.iter().position(|n| n == name);
    let (Some(u), Some(v)) = (find(root_out), find(root_in)) else {
        return Report::error("good-pair", Status::Invalid, "unknown root vertex".into(), None);
    };
    let g = &file.graph;
    let split = file.split_digraph();
    let oracle = || match oracle_good_pair(g, u, v, oracle_bound) {
        Ok(Some(gp)) => pair_report(&file, g, &gp, "exhaustive search"),
        Ok(None) => Report {
            command: "good-pair",
            status: Status::NoPair,
            payload: Payload::NoPair {
                root_out: root_out.into(),
                root_in: root_in.into(),
                route: "exhaustive search".into(),
            },
            verification: Verification::NotRun,
            timing_ms: None,
        },
        Err(e) => named_error("good-pair", e, &file),
    };
    let uu = || -> Result<Report, Error> {
        if u != v {
            return Err(Error::PreconditionViolated("the (u,u) construction needs equal roots".into()));
        }
        let d = split.clone().map_err(|e| Error::PreconditionViolated(e.to_string()))?;
        let gp = good_uu_pair_split(&d, u)?;
        Ok(pair_report(&file, g, &gp, "(u,u) construction"))
    };
    let via_sad = || -> Result<Report, Error> {
        let d = split.clone().map_err(|e| Error::PreconditionViolated(e.to_string()))?;
        let sad = decompose_split(&d)?;
        let gp = good_pair_from_sad(g, &sad, u, v)?;
        Ok(pair_report(&file, g, &gp, "strong arc decomposition"))
    };
    match method {
        PairMethod::Oracle => oracle(),
        PairMethod::Uu => uu().unwrap_or_else(|e| named_error("good-pair", e, &file)),
        PairMethod::Decomposition => via_sad().unwrap_or_else(|e| named_error("good-pair", e, &file)),
        PairMethod::Auto => {
            let mut last = None;
            for attempt in [&uu as &dyn Fn() -> Result<Report, Error>, &via_sad] {
                match attempt() {
                    Ok(r) => return r,
                    Err(e) => last = Some(e),
                }
            }
            if g.arc_count() <= oracle_bound {
                return oracle();
            }
            named_error("good-pair", last.expect("at least one route was tried"), &file)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum FamilyName {
    D1,
    D2,
}

/// A counterexample family member with a middle part of `w_size` vertices.
pub fn generate_family(family: FamilyName, w_size: usize) -> Result<String, String> {
    if w_size == 0 {
        return Err("--w-size must be at least 1".into());
    }
    let family = match family {
        FamilyName::D1 => Family::D1,
        FamilyName::D2 => Family::D2,
    };
    let ce = gen_counterexample(family, &default_middle(w_size), 0).map_err(|e| e.to_string())?;
    Ok(GraphFile::from_split(&ce.d, ce.names).write())
}

pub fn parse_enforce(list: &str) -> Result<Vec<Enforce>, String> {
    list.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| Enforce::parse(s).ok_or_else(|| format!("unknown property `{s}`")))
        .collect()
}

pub fn generate_random(spec: &GenSpec) -> Result<String, String> {
    let d = gen_random(spec).map_err(|e| e.to_string())?;
    Ok(GraphFile::from_split_default_names(&d).write())
}

/// Parameters of a stress run; instance `i` derives its sizes and sampler
/// seed from `seed` and `i` alone.
#[derive(Debug, Clone)]
pub struct StressSpec {
    pub count: usize,
    pub n1: (usize, usize),
    pub n2: (usize, usize),
    pub seed: u64,
    pub template: GenSpec,
    pub oracle_bound: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct StressFailure {
    pub instance: usize,
    pub seed: u64,
    pub error: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct StressSummary {
    pub instances: usize,
    pub generated: usize,
    pub gave_up: usize,
    pub decomposed: usize,
    pub failures: Vec<StressFailure>,
    pub oracle_checked: usize,
    pub oracle_agreements: usize,
    pub oracle_disagreements: Vec<StressFailure>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub total_ms: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub slowest_ms: Option<f64>,
}

struct Outcome {
    generated: bool,
    result: Option<Result<(), String>>,
    oracle: Option<bool>,
    seed: u64,
    ms: f64,
}

fn stress_one(spec: &StressSpec, i: usize) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed ^ (i as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    let mut gen = spec.template.clone();
    gen.n1 = rng.gen_range(spec.n1.0..=spec.n1.1);
    gen.n2 = rng.gen_range(spec.n2.0..=spec.n2.1);
    gen.seed = rng.gen();
    let Ok(d) = gen_random(&gen) else {
        return Outcome { generated: false, result: None, oracle: None, seed: gen.seed, ms: 0.0 };
    };
    let start = Instant::now();
    let result = decompose_split(&d)
        .map_err(|e| e.to_string())
        .and_then(|sad| verify_decomposition(d.graph(), &sad).map_err(|e| format!("verification: {e}")));
    let ms = start.elapsed().as_secs_f64() * 1e3;
    let oracle = (d.graph().arc_count() <= spec.oracle_bound)
        .then(|| oracle_sad(d.graph(), spec.oracle_bound).ok().map(|o| o.is_some() == result.is_ok()))
        .flatten();
    Outcome { generated: true, result: Some(result), oracle, seed: gen.seed, ms }
}

/// Runs `count` instances in parallel. Everything except the timings
/// depends only on the spec.
pub fn stress(spec: &StressSpec, timing: bool) -> StressSummary {
    let start = Instant::now();
    let outcomes: Vec<Outcome> = (0..spec.count).into_par_iter().map(|i| stress_one(spec, i)).collect();
    let mut s = StressSummary {
        instances: spec.count,
        generated: 0,
        gave_up: 0,
        decomposed: 0,
        failures: Vec::new(),
        oracle_checked: 0,
        oracle_agreements: 0,
        oracle_disagreements: Vec::new(),
        total_ms: None,
        slowest_ms: None,
    };
    let mut slowest: f64 = 0.0;
    for (i, o) in outcomes.iter().enumerate() {
        if !o.generated {
            s.gave_up += 1;
            continue;
        }
        s.generated += 1;
        slowest = slowest.max(o.ms);
        match &o.result {
            Some(Ok(())) => s.decomposed += 1,
            Some(Err(e)) => s.failures.push(StressFailure { instance: i, seed: o.seed, error: e.clone() }),
            None => {}
        }
        if let Some(agree) = o.oracle {
            s.oracle_checked += 1;
            if agree {
                s.oracle_agreements += 1;
            } else {
                s.oracle_disagreements.push(StressFailure {
                    instance: i,
                    seed: o.seed,
                    error: "oracle disagrees".into(),
                });
            }
        }
    }
    if timing {
        s.total_ms = Some(start.elapsed().as_secs_f64() * 1e3);
        s.slowest_ms = Some(slowest);
    }
    s
}

impl StressSummary {
    pub fn ok(&self) -> bool {
        self.failures.is_empty() && self.oracle_disagreements.is_empty()
    }

    pub fn to_text(&self) -> String {
        let mut rows = vec![
            ("instances", self.instances.to_string()),
            ("generated", self.generated.to_string()),
            ("gave up", self.gave_up.to_string()),
            ("decomposed", self.decomposed.to_string()),
            ("failures", self.failures.len().to_string()),
            ("oracle checked", self.oracle_checked.to_string()),
            ("oracle agreements", self.oracle_agreements.to_string()),
            ("oracle disagreements", self.oracle_disagreements.len().to_string()),
        ];
        if let (Some(total), Some(slowest)) = (self.total_ms, self.slowest_ms) {
            rows.push(("total time", format!("{total:.1} ms")));
            rows.push(("slowest instance", format!("{slowest:.3} ms")));
        }
        let mut out: String = rows.iter().map(|(k, v)| format!("{k:<22}{v}\n")).collect();
        for f in self.failures.iter().chain(&self.oracle_disagreements).take(10) {
            out.push_str(&format!("instance {} (sampler seed {}): {}\n", f.instance, f.seed, f.error));
        }
        out
    }
}
