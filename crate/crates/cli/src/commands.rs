use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sseq_core::clearing::certify_nilpotent;
use sseq_core::matrix::{Matrix, PolyMatrix};
use sseq_core::ring::{Laurent, Rational, Ring};
use sseq_core::sharp::{badring_fixture, sharp_of, BadRingFixture};
use sseq_core::spectral::{check_spectral_conditions, primitive_assembly, Mode, SpectrumDescriptor};
use sseq_core::sse::{
    reduce_nonneg_nilpotent, verify_esse, verify_se, verify_sse_chain, EsseWitness, SeWitness, SseChain,
};
use sseq_core::{suite, Exec};

use crate::report::{digest, RunReport, Timings};
use crate::{Command, ModeArg, WitnessKind};

/// Bad invocation or unreadable input; maps to exit code 2.
#[derive(Debug)]
pub struct UsageError(String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

type CmdResult = Result<RunReport, UsageError>;

fn read_json(path: &Path) -> Result<Value, UsageError> {
    let text = fs::read_to_string(path).map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| UsageError(format!("{}: malformed JSON: {e}", path.display())))
}

fn parse<T: DeserializeOwned>(v: &Value, what: &str) -> Result<T, UsageError> {
    T::deserialize(v).map_err(|e| UsageError(format!("invalid {what}: {e}")))
}

/// First `"ring"` tag found in the document; `"Q"` when none is present.
fn ring_tag(v: &Value) -> String {
    fn find(v: &Value) -> Option<&str> {
        match v {
            Value::Object(m) => m.get("ring").and_then(Value::as_str).or_else(|| m.values().find_map(find)),
            Value::Array(a) => a.iter().find_map(find),
            _ => None,
        }
    }
    find(v).unwrap_or(Rational::TAG).to_string()
}

struct Builder {
    command: String,
    inputs: Value,
    timings: Timings,
}

impl Builder {
    fn new(command: &str, inputs: Value) -> Self {
        Builder { command: command.into(), inputs, timings: Timings::default() }
    }

    fn finish(self, pass: bool, verdicts: Value, mut summary: Vec<String>) -> RunReport {
        summary.insert(0, format!("{}: {}", self.command, if pass { "PASS" } else { "FAIL" }));
        RunReport {
            command: self.command,
            inputs_digest: digest(&self.inputs),
            pass,
            verdicts,
            timings: self.timings.into_map(),
            summary,
        }
    }

    fn fail(self, err: impl fmt::Display) -> RunReport {
        let msg = err.to_string();
        self.finish(false, json!({ "error": msg }), vec![msg])
    }
}

pub fn run(cmd: &Command) -> CmdResult {
    match cmd {
        Command::Verify { kind, file } => verify(*kind, file),
        Command::Clear { file, k } => clear(file, *k as usize),
        Command::Spectra(a) => spectra(&a.file, a.mode, a.n_max as usize, a.k_max as usize, &a.tol),
        Command::Badring { tamper } => badring(*tamper),
        Command::Assemble { c_file, m_file, eps } => assemble(c_file, m_file, eps),
        Command::Sharp { file, k, n } => sharp(file, *k, *n),
        Command::ReduceNilpotent { file } => reduce(file),
        Command::Selftest { seed, cases } => selftest(*seed, *cases),
    }
}

pub fn print_summary(r: &RunReport) {
    let mut out = io::stdout().lock();
    for line in &r.summary {
        if writeln!(out, "{line}").is_err() {
            return;
        }
    }
}

#[derive(Deserialize)]
#[serde(bound(deserialize = "R: DeserializeOwned"))]
struct EsseFile<R: Ring> {
    #[serde(rename = "A")]
    a: Matrix<R>,
    #[serde(rename = "B")]
    b: Matrix<R>,
    #[serde(rename = "U")]
    u: Matrix<R>,
    #[serde(rename = "V")]
    v: Matrix<R>,
}

#[derive(Deserialize)]
#[serde(bound(deserialize = "R: DeserializeOwned"))]
struct SeFile<R: Ring> {
    #[serde(rename = "A")]
    a: Matrix<R>,
    #[serde(rename = "B")]
    b: Matrix<R>,
    #[serde(rename = "U")]
    u: Matrix<R>,
    #[serde(rename = "V")]
    v: Matrix<R>,
    lag: u32,
}

fn verify_as<R: Ring + DeserializeOwned>(kind: WitnessKind, doc: &Value) -> Result<(bool, Value), UsageError> {
    let outcome = match kind {
        WitnessKind::Esse => {
            let f: EsseFile<R> = parse(doc, "ESSE witness")?;
            verify_esse(&f.a, &f.b, &EsseWitness::new(f.u, f.v))
        }
        WitnessKind::Se => {
            let f: SeFile<R> = parse(doc, "SE witness")?;
            verify_se(&f.a, &f.b, &SeWitness { u: f.u, v: f.v, lag: f.lag })
        }
        WitnessKind::Sse => {
            let c: SseChain<R> = parse(doc, "SSE chain")?;
            let lag = c.steps.len();
            let ok = verify_sse_chain(&c);
            return Ok((ok, json!({ "verified": ok, "lag": lag })));
        }
    };
    Ok(match outcome {
        Ok(ok) => (ok, json!({ "verified": ok })),
        Err(e) => (false, json!({ "verified": false, "reason": e.to_string() })),
    })
}

fn verify(kind: WitnessKind, file: &Path) -> CmdResult {
    let doc = read_json(file)?;
    let name = format!("verify {kind:?}").to_lowercase();
    let mut b = Builder::new(&name, json!({ "kind": format!("{kind:?}"), "file": doc }));
    let tag = ring_tag(&doc);
    let (ok, verdict) = b.timings.time("verify", || match tag.as_str() {
        t if t == Rational::TAG => verify_as::<Rational>(kind, &doc),
        t if t == Laurent::TAG => verify_as::<Laurent>(kind, &doc),
        other => Err(UsageError(format!("unknown ring tag {other:?}"))),
    })?;
    let mut lines = vec![format!("ring: {tag}")];
    if let Some(reason) = verdict.get("reason").and_then(Value::as_str) {
        lines.push(format!("reason: {reason}"));
    }
    Ok(b.finish(ok, verdict, lines))
}

fn clear(file: &Path, k: usize) -> CmdResult {
    let doc = read_json(file)?;
    let n: Matrix<Rational> = parse(&doc, "matrix")?;
    let mut b = Builder::new("clear", json!({ "K": k, "file": doc }));
    match b.timings.time("pipeline", || certify_nilpotent(&n, k)) {
        Ok(r) => {
            let c = &r.cleared;
            let lines = vec![
                format!("J = {} (n = {}, d = {}, K = {})", c.j, c.n, c.d, c.k),
                format!("delta = {}, conjugated norm = {}", r.delta, r.shrink.norm),
                format!("tr(M^k) = {:?}, tr(|M|^k) = {:?}", render(&c.traces), render(&c.abs_traces)),
                format!(
                    "det(I - B_K) = 1: {}, M nilpotent: {}, sup norm of M = {}",
                    c.det_one, c.nilpotent, c.sup_norm
                ),
            ];
            Ok(b.finish(true, to_value(&r), lines))
        }
        Err(e) => Ok(b.fail(e)),
    }
}

fn render(v: &[Rational]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report values serialize")
}

fn spectra(file: &Path, mode: ModeArg, n_max: usize, k_max: usize, tol: &Rational) -> CmdResult {
    let doc = read_json(file)?;
    let delta: SpectrumDescriptor = parse(&doc, "spectrum")?;
    let mode = match mode {
        ModeArg::Integer => Mode::Integer,
        ModeArg::Dense => Mode::Dense,
    };
    let mut b =
        Builder::new("spectra", json!({ "file": doc, "mode": mode, "n_max": n_max, "k_max": k_max, "tol": tol }));
    match b.timings.time("conditions", || check_spectral_conditions(&delta, mode, n_max, k_max, tol)) {
        Ok(r) => {
            let mut lines = vec![
                format!("perron: {:?}", r.perron),
                format!("coefficients in ring: {}", r.coeffs_in_ring_ok),
                format!("trace conditions (n <= {n_max}, k <= {k_max}): {}", r.trace_conditions_ok),
            ];
            lines.extend(r.failures.iter().map(|f| format!("failure: {f}")));
            Ok(b.finish(r.all_ok(), to_value(&r), lines))
        }
        Err(e) => Err(UsageError(e.to_string())),
    }
}

fn badring(tamper: bool) -> CmdResult {
    let mut b = Builder::new("badring", json!({ "tamper": tamper }));
    let fixture = b.timings.time("fixture", || {
        let f = badring_fixture();
        if tamper {
            f.tampered()
        } else {
            f
        }
    });
    let checks = b.timings.time("checks", || fixture.checks());
    let pass = checks.iter().all(|c| c.pass);
    let lines = checks
        .iter()
        .map(|c| format!("{} {}{}", if c.pass { "ok  " } else { "FAIL" }, c.name, detail(&c.detail)))
        .collect();
    let verdicts = json!({ "checks": checks, "note": BadRingFixture::NIL0_NOTE, "fixture": fixture });
    Ok(b.finish(pass, verdicts, lines))
}

fn detail(d: &str) -> String {
    if d.is_empty() {
        String::new()
    } else {
        format!(" ({d})")
    }
}

fn assemble(c_file: &Path, m_file: &Path, eps: &Rational) -> CmdResult {
    let (cdoc, mdoc) = (read_json(c_file)?, read_json(m_file)?);
    let c: Matrix<Rational> = parse(&cdoc, "matrix C")?;
    let m0: Matrix<Rational> = parse(&mdoc, "matrix M0")?;
    let mut b = Builder::new("assemble", json!({ "C": cdoc, "M0": mdoc, "eps": eps }));
    match b.timings.time("assembly", || primitive_assembly(&c, &m0, eps)) {
        Ok(a) => {
            let p = &a.primitivity;
            let lines = vec![
                format!("G ({0}x{0}) nonnegative: {1}", a.g.rows(), a.nonnegative),
                format!("identities verified: {}", a.identities_ok && a.conjugators_ok),
                format!("primitive: {} (witness power {:?}, period {:?})", p.primitive, p.witness_power, p.period),
            ];
            let verdicts = json!({
                "G": a.g,
                "certificate": p,
                "identities_ok": a.identities_ok,
                "conjugators_ok": a.conjugators_ok,
                "chain": a.chain,
            });
            Ok(b.finish(p.primitive, verdicts, lines))
        }
        Err(e) => Ok(b.fail(e)),
    }
}

fn sharp_as<R: Ring + Serialize + DeserializeOwned>(
    doc: &Value,
    k: Option<usize>,
    n: Option<usize>,
) -> Result<Result<Value, String>, UsageError> {
    let a: PolyMatrix<R> = parse(doc, "polynomial matrix")?;
    let k = k.unwrap_or(a.degree().max(1));
    let n = n.unwrap_or(a.size());
    Ok(sharp_of(&a, k, n).map(|m| json!({ "k": k, "n": n, "sharp": m })).map_err(|e| e.to_string()))
}

fn sharp(file: &Path, k: Option<usize>, n: Option<usize>) -> CmdResult {
    let doc = read_json(file)?;
    let mut b = Builder::new("sharp", json!({ "file": doc, "k": k, "n": n }));
    let tag = ring_tag(&doc);
    let out = b.timings.time("sharp", || match tag.as_str() {
        t if t == Rational::TAG => sharp_as::<Rational>(&doc, k, n),
        t if t == Laurent::TAG => sharp_as::<Laurent>(&doc, k, n),
        other => Err(UsageError(format!("unknown ring tag {other:?}"))),
    })?;
    match out {
        Ok(v) => {
            let size = v["sharp"]["rows"].clone();
            Ok(b.finish(true, v, vec![format!("companion size {size}")]))
        }
        Err(e) => Ok(b.fail(e)),
    }
}

fn reduce(file: &Path) -> CmdResult {
    let doc = read_json(file)?;
    let n: Matrix<Rational> = parse(&doc, "matrix")?;
    let mut b = Builder::new("reduce-nilpotent", json!({ "file": doc }));
    match b.timings.time("reduce", || reduce_nonneg_nilpotent(&n)) {
        Ok(chain) => {
            let ok = b.timings.time("verify", || verify_sse_chain(&chain));
            let lines = vec![format!("lag {} chain to [0], verified: {ok}", chain.lag())];
            Ok(b.finish(ok, json!({ "verified": ok, "lag": chain.lag(), "chain": chain }), lines))
        }
        Err(e) => Ok(b.fail(e)),
    }
}

fn selftest(seed: u64, cases: usize) -> CmdResult {
    if cases == 0 {
        return Err(UsageError("--cases must be positive".into()));
    }
    let mut b = Builder::new("selftest", json!({ "seed": seed, "cases": cases }));
    let exec = Exec::Parallel;
    let reports = vec![
        b.timings.time("fixture", suite::fixture_suite),
        b.timings.time("clearing-bounds", || suite::clearing_suite(seed, cases, exec)),
        b.timings.time("certify-nilpotent", || suite::certify_suite(seed, exec)),
        b.timings.time("net-trace-orbits", || suite::orbit_suite(seed, cases, 8, exec)),
        b.timings.time("primitive-assembly", || suite::assembly_suite(seed, cases, exec)),
        b.timings.time("williams", || suite::williams_suite(seed, cases, exec)),
        b.timings.time("nilpotent-reduction", || suite::nilpotent_reduction_suite(seed, cases, exec)),
    ];
    let pass = reports.iter().all(suite::SuiteReport::ok);
    let mut lines = Vec::new();
    for r in &reports {
        lines.push(format!("{} {}: {}/{}", if r.ok() { "ok  " } else { "FAIL" }, r.name, r.passed, r.cases));
        lines.extend(r.failures.iter().take(3).map(|f| format!("    {f}")));
    }
    Ok(b.finish(pass, json!({ "suites": reports }), lines))
}
