//! Client for an external first-order prover speaking TPTP and SZS.
//!
//! The prover is described by a command template such as
//! `vampire --proof tptp -t {timeout} {file}`. The template is split on
//! whitespace (no shell quoting); `{file}` must occur exactly once.

use std::collections::BTreeSet;
use std::io::{Read, Write};
use std::path::Path;
use std::process::{Command, Stdio};
use std::sync::{Arc, Condvar, Mutex};
use std::time::Duration;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const PROVER_ENV: &str = "FRAGSAT_PROVER";

/// Template used when no prover is configured but `vampire` is on the `PATH`.
pub const VAMPIRE_TEMPLATE: &str = "vampire --output_axiom_names on -t {timeout} {file}";

#[derive(Debug, Error)]
pub enum AtpError {
    #[error("bad prover template: {0}")]
    BadTemplate(String),
    #[error("cannot start prover `{0}`")]
    ProverUnavailable(String),
    #[error("no SZS status line in prover output")]
    UnparseableOutput(String),
    #[error("no refutation in prover output")]
    NoProofFound,
    #[error("prover reported an error: {0}")]
    ProverError(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Dialect {
    /// `% SZS status <Value>` lines, refutations with `file(..)` or `[input ..]` annotations.
    #[default]
    GenericSzs,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SzsStatus {
    Satisfiable,
    Unsatisfiable,
    Timeout,
    Error(String),
}

impl SzsStatus {
    /// Maps an SZS value onto the four outcomes. With axioms only, a
    /// counter-satisfiable problem is a satisfiable one; running out of any
    /// resource counts as a timeout.
    pub fn from_szs(value: &str) -> SzsStatus {
        match value {
            "Unsatisfiable" | "ContradictoryAxioms" | "Theorem" => SzsStatus::Unsatisfiable,
            "Satisfiable" | "CounterSatisfiable" => SzsStatus::Satisfiable,
            "Timeout" | "ResourceOut" | "MemoryOut" | "GaveUp" => SzsStatus::Timeout,
            other => SzsStatus::Error(other.to_string()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofStats {
    /// Derivation lines in the refutation.
    pub l: usize,
    /// Distinct input sentences the refutation uses.
    pub d: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProverConfig {
    pub command: Vec<String>,
    pub timeout: Duration,
    pub dialect: Dialect,
}

impl ProverConfig {
    pub fn new(template: &str, timeout: Duration) -> Result<Self, AtpError> {
        let command: Vec<String> = template.split_whitespace().map(str::to_string).collect();
        let files = command.iter().filter(|a| a.contains("{file}")).count();
        if command.is_empty() {
            return Err(AtpError::BadTemplate("empty command".into()));
        }
        if files != 1 || command.iter().any(|a| a.matches("{file}").count() > 1) {
            return Err(AtpError::BadTemplate(format!("`{{file}}` must occur exactly once in `{template}`")));
        }
        Ok(Self { command, timeout, dialect: Dialect::GenericSzs })
    }

    /// The configuration from `FRAGSAT_PROVER`, if set.
    pub fn from_env(timeout: Duration) -> Option<Result<Self, AtpError>> {
        std::env::var(PROVER_ENV).ok().map(|t| Self::new(&t, timeout))
    }

    /// `FRAGSAT_PROVER` if set, otherwise Vampire if it is on the `PATH`.
    pub fn detect(timeout: Duration) -> Option<Result<Self, AtpError>> {
        Self::from_env(timeout).or_else(|| on_path("vampire").then(|| Self::new(VAMPIRE_TEMPLATE, timeout)))
    }

    fn argv(&self, file: &Path) -> Vec<String> {
        let secs = self.timeout.as_secs_f64().ceil().max(1.0) as u64;
        self.command
            .iter()
            .map(|a| a.replace("{file}", &file.to_string_lossy()).replace("{timeout}", &secs.to_string()))
            .collect()
    }
}

fn on_path(exe: &str) -> bool {
    std::env::var_os("PATH").is_some_and(|paths| std::env::split_paths(&paths).any(|d| d.join(exe).is_file()))
}

#[derive(Clone, Debug)]
pub struct ProverOutput {
    pub status: SzsStatus,
    pub raw: String,
}

/// Status value of the first `SZS status` line.
pub fn parse_szs(raw: &str) -> Option<SzsStatus> {
    raw.lines().find_map(|line| {
        let rest = &line[line.find("SZS status")? + "SZS status".len()..];
        rest.split_whitespace().next().map(SzsStatus::from_szs)
    })
}

/// Runs the prover once on a TPTP document.
pub fn run_prover(tptp: &str, cfg: &ProverConfig) -> Result<ProverOutput, AtpError> {
    let mut file = tempfile::Builder::new().prefix("fragsat-").suffix(".p").tempfile()?;
    file.write_all(tptp.as_bytes())?;
    file.flush()?;
    let argv = cfg.argv(file.path());
    let mut child = Command::new(&argv[0])
        .args(&argv[1..])
        .stdin(Stdio::null())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .map_err(|_| AtpError::ProverUnavailable(argv[0].clone()))?;

    let (tx, rx) = std::sync::mpsc::channel();
    let mut stdout = child.stdout.take().expect("piped stdout");
    let mut stderr = child.stderr.take().expect("piped stderr");
    std::thread::spawn(move || {
        let mut out = String::new();
        let _ = stdout.read_to_string(&mut out);
        let mut err = String::new();
        let _ = stderr.read_to_string(&mut err);
        let _ = tx.send(out + &err);
    });
    let raw = match rx.recv_timeout(cfg.timeout + grace(cfg.timeout)) {
        Ok(raw) => {
            child.wait()?;
            raw
        }
        Err(_) => {
            let _ = child.kill();
            let _ = child.wait();
            return Ok(ProverOutput { status: SzsStatus::Timeout, raw: String::new() });
        }
    };
    match parse_szs(&raw) {
        Some(status) => Ok(ProverOutput { status, raw }),
        None => Err(AtpError::UnparseableOutput(raw)),
    }
}

/// Extra wall-clock time granted beyond the prover's own limit; none for a zero timeout.
fn grace(timeout: Duration) -> Duration {
    if timeout.is_zero() {
        Duration::ZERO
    } else {
        Duration::from_millis(500)
    }
}

fn refutation_body(raw: &str) -> &str {
    match (raw.find("SZS output start"), raw.find("SZS output end")) {
        (Some(a), Some(b)) if a < b => &raw[a..b],
        _ => raw,
    }
}

/// Derivation steps of the refutation with the axiom each one cites, if
/// any. A step starts at a numbered or TPTP line and runs up to the next one.
fn derivation_lines(raw: &str) -> Vec<Option<String>> {
    let mut steps: Vec<String> = Vec::new();
    for line in refutation_body(raw).lines().map(str::trim_start) {
        let numbered =
            line.split_once(". ").is_some_and(|(n, _)| !n.is_empty() && n.bytes().all(|b| b.is_ascii_digit()));
        let tptp = ["fof(", "cnf(", "tff("].iter().any(|p| line.starts_with(p));
        if numbered || tptp {
            steps.push(line.to_string());
        } else if let Some(last) = steps.last_mut().filter(|_| !line.starts_with('%')) {
            last.push(' ');
            last.push_str(line);
        }
    }
    steps.iter().map(|s| axiom_name(s)).collect()
}

/// Names of the input formulas cited by the refutation in `raw`.
pub fn used_axioms(raw: &str) -> BTreeSet<String> {
    derivation_lines(raw).into_iter().flatten().collect()
}

/// Proof length and premise count of the refutation in `raw`.
///
/// Lines are the numbered (`12. ...`) or TPTP (`fof(..)`, `cnf(..)`)
/// derivation steps between the `SZS output start`/`end` markers, or in the
/// whole output when no markers are present. Axioms are recognised by a
/// `file(.., name)` or `[input name]` justification.
pub fn proof_stats(raw: &str, s: usize) -> Result<ProofStats, AtpError> {
    let mut l = 0;
    let mut axioms = BTreeSet::new();
    for cited in derivation_lines(raw) {
        l += 1;
        axioms.extend(cited);
    }
    if l == 0 || axioms.is_empty() {
        return Err(AtpError::NoProofFound);
    }
    let d = axioms.len();
    if d > s.max(1) {
        return Err(AtpError::ProverError(format!("refutation cites {d} axioms of {s}")));
    }
    Ok(ProofStats { l, d })
}

fn axiom_name(line: &str) -> Option<String> {
    let clean = |s: &str| s.trim().trim_matches(|c| c == '\'' || c == ')' || c == ']' || c == '.').to_string();
    if let Some(i) = line.rfind("file(") {
        let args = &line[i + 5..];
        let end = args.find(')')?;
        let (_, name) = args[..end].rsplit_once(',')?;
        return Some(clean(name));
    }
    let i = line.rfind("[input")?;
    let inner = &line[i + 1..];
    let inner = &inner[..inner.find(']')?];
    // `input name` or `input(axiom) name`
    let name = inner.split_whitespace().nth(1)?;
    Some(clean(name))
}

struct Slots {
    free: Mutex<usize>,
    cv: Condvar,
}

/// A shareable prover handle that caps concurrent subprocesses.
#[derive(Clone)]
pub struct Prover {
    pub config: ProverConfig,
    slots: Arc<Slots>,
}

impl std::fmt::Debug for Prover {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Prover").field("config", &self.config).finish()
    }
}

impl Prover {
    pub fn new(config: ProverConfig, max_concurrent: usize) -> Self {
        let slots = Arc::new(Slots { free: Mutex::new(max_concurrent.max(1)), cv: Condvar::new() });
        Self { config, slots }
    }

    pub fn with_timeout(&self, timeout: Duration) -> Self {
        Self { config: ProverConfig { timeout, ..self.config.clone() }, slots: self.slots.clone() }
    }

    pub fn run(&self, tptp: &str) -> Result<ProverOutput, AtpError> {
        {
            let mut free = self.slots.free.lock().unwrap();
            while *free == 0 {
                free = self.slots.cv.wait(free).unwrap();
            }
            *free -= 1;
        }
        let out = run_prover(tptp, &self.config);
        *self.slots.free.lock().unwrap() += 1;
        self.slots.cv.notify_one();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const NUMBERED: &str = "\
% Refutation found. Thanks to Tanya!
% SZS status Unsatisfiable for p
% SZS output start Proof for p
1. ! [X0] : (a(X0) => b(X0)) [input(axiom) s1]
2. ! [X0] : (b(X0) => ~c(X0)) [input s2]
3. ? [X0] : (a(X0) & c(X0)) [input s3]
4. a(sK0) & c(sK0) [skolemisation 3]
5. ~a(X0) | b(X0) [cnf transformation 1]
6. ~b(X0) | ~c(X0) [cnf transformation 2]
7. $false [resolution 4,5,6]
% SZS output end Proof for p
";

    const TPTP: &str = "\
% SZS status Unsatisfiable for p
% SZS output start Proof for p
fof(f1,axiom,(
  ![X0]: (a(X0) => b(X0))),
  file('/tmp/p.p',s1)).
fof(f2,axiom,(?[X0]: (a(X0) & ~b(X0))),file('/tmp/p.p',s4)).
fof(f3,plain,(
  $false),
  inference(resolution,[],[f1,f2])).
% SZS output end Proof for p
";

    #[test]
    fn szs_values() {
        assert_eq!(parse_szs("% SZS status Satisfiable for x"), Some(SzsStatus::Satisfiable));
        assert_eq!(parse_szs("% SZS status CounterSatisfiable for x"), Some(SzsStatus::Satisfiable));
        assert_eq!(parse_szs("junk\n% SZS status ContradictoryAxioms for x"), Some(SzsStatus::Unsatisfiable));
        assert_eq!(parse_szs("% SZS status Timeout for x"), Some(SzsStatus::Timeout));
        assert_eq!(parse_szs("% SZS status SyntaxError"), Some(SzsStatus::Error("SyntaxError".into())));
        assert_eq!(parse_szs("nothing here"), None);
    }

    #[test]
    fn numbered_refutation() {
        assert_eq!(proof_stats(NUMBERED, 3).unwrap(), ProofStats { l: 7, d: 3 });
    }

    #[test]
    fn tptp_refutation_ignoring_padding() {
        let p = proof_stats(TPTP, 5).unwrap();
        assert_eq!(p, ProofStats { l: 3, d: 2 });
        assert!(p.d < 5);
        assert_eq!(used_axioms(TPTP), ["s1".to_string(), "s4".to_string()].into());
    }

    #[test]
    fn missing_refutation() {
        assert!(matches!(proof_stats("% SZS status Satisfiable", 2), Err(AtpError::NoProofFound)));
    }

    #[test]
    fn template_validation() {
        let t = Duration::from_secs(3);
        assert!(ProverConfig::new("prover {file}", t).is_ok());
        assert!(ProverConfig::new("prover", t).is_err());
        assert!(ProverConfig::new("prover {file} {file}", t).is_err());
        assert!(ProverConfig::new("", t).is_err());
        let cfg = ProverConfig::new("prover -t {timeout} {file}", t).unwrap();
        assert_eq!(cfg.argv(Path::new("/x.p")), vec!["prover", "-t", "3", "/x.p"]);
    }

    #[cfg(unix)]
    #[test]
    fn scripted_prover_round_trip() {
        let cfg =
            ProverConfig::new("sh -c echo${IFS}SZS${IFS}status${IFS}Satisfiable {file}", Duration::from_secs(5)).unwrap();
        let out = Prover::new(cfg, 1).run("fof(a, axiom, p).").unwrap();
        assert_eq!(out.status, SzsStatus::Satisfiable);
    }

    #[cfg(unix)]
    #[test]
    fn zero_timeout_and_missing_binary() {
        let cfg = ProverConfig::new("sh -c sleep${IFS}5 {file}", Duration::ZERO).unwrap();
        assert_eq!(run_prover("", &cfg).unwrap().status, SzsStatus::Timeout);
        let cfg = ProverConfig::new("/nonexistent/prover {file}", Duration::from_secs(1)).unwrap();
        assert!(matches!(run_prover("", &cfg), Err(AtpError::ProverUnavailable(_))));
    }

    #[cfg(unix)]
    #[test]
    fn silent_prover_is_unparseable() {
        let cfg = ProverConfig::new("true {file}", Duration::from_secs(5)).unwrap();
        assert!(matches!(run_prover("", &cfg), Err(AtpError::UnparseableOutput(_))));
    }
}
