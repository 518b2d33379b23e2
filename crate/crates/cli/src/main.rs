mod args;

use std::fs::{self, File};
use std::io::{self, BufRead, BufReader, Read, Write};
use std::path::Path;
use std::process::ExitCode;
use std::time::Duration;

use clap::Parser;
use serde_json::{json, Value};
use thiserror::Error;

use args::{Cli, Command, ConstructArgs, DecideArgs, GenArgs, InArgs, LabelArg, Shared, TextArgs};
use fragsat_core::atp::{AtpError, Prover, ProverConfig};
use fragsat_core::construct::{construct_corpus, ConstructError, ConstructSpec, LabelMode};
use fragsat_core::corpus::{self, parse_jsonl_values, to_record, CorpusError, Record, Split};
use fragsat_core::decide::{DecideError, Method, Verdict};
use fragsat_core::fol::{to_tptp, Names};
use fragsat_core::gen::{filter_hard, generate_corpus, CorpusSpec, GenError, Instance, Labeler, ParamOverrides};
use fragsat_core::surface::{self, SurfaceError};
use fragsat_core::syntax::{Sentence, TermError};
use fragsat_core::vocab::{VocabError, Vocabulary};

#[derive(Debug, Error)]
enum CliError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Vocab(#[from] VocabError),
    #[error(transparent)]
    Gen(#[from] GenError),
    #[error(transparent)]
    Construct(#[from] ConstructError),
    #[error(transparent)]
    Decide(#[from] DecideError),
    #[error(transparent)]
    Atp(#[from] AtpError),
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error(transparent)]
    Term(#[from] TermError),
    #[error("{0}")]
    Invalid(String),
}

impl CliError {
    fn kind(&self) -> &'static str {
        match self {
            CliError::Io(_) => "io",
            CliError::Vocab(_) => "vocabulary",
            CliError::Gen(_) => "generation",
            CliError::Construct(_) => "construction",
            CliError::Decide(DecideError::ProverUnavailable) | CliError::Atp(AtpError::ProverUnavailable(_)) => {
                "prover-unavailable"
            }
            CliError::Decide(_) => "decide",
            CliError::Atp(_) => "prover",
            CliError::Corpus(CorpusError::Schema { .. }) => "schema",
            CliError::Corpus(_) => "corpus",
            CliError::Surface(_) | CliError::Term(_) => "parse",
            CliError::Invalid(_) => "invalid-argument",
        }
    }
}

fn error_line(kind: &str, message: &str) -> String {
    json!({ "error": kind, "message": message }).to_string()
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            let msg = e.kind().to_string();
            eprintln!("{}", error_line("usage", &msg));
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", error_line(e.kind(), &e.to_string()));
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let sh = &cli.shared;
    if cli.dump_grammar {
        return write_out(sh, &surface::grammar_markdown());
    }
    let Some(command) = cli.command else {
        return Err(CliError::Invalid("no subcommand given; see --help".into()));
    };
    match command {
        Command::Gen(a) => gen(sh, a),
        Command::Construct(a) => construct(sh, a),
        Command::Decide(a) => decide(sh, a),
        Command::Stats(a) => stats(sh, a),
        Command::Tptp(a) => tptp(sh, a),
        Command::Parse(a) => parse(sh, a),
        Command::Realize(a) => realize(sh, a),
        Command::DumpGrammar => write_out(sh, &surface::grammar_markdown()),
    }
}

fn write_out(sh: &Shared, text: &str) -> Result<(), CliError> {
    match &sh.out {
        Some(p) => fs::write(p, text)?,
        None => io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn write_records(sh: &Shared, records: &[Record]) -> Result<(), CliError> {
    match &sh.out {
        Some(p) => corpus::emit_jsonl(records, p)?,
        None => corpus::write_jsonl(records, io::stdout().lock())?,
    }
    Ok(())
}

fn vocab(sh: &Shared, split: Split) -> Result<Vocabulary, CliError> {
    let path = match split {
        Split::Train => &sh.vocab_train,
        Split::Eval => &sh.vocab_eval,
    };
    Ok(match (path, split) {
        (Some(p), _) => Vocabulary::load(&fs::read_to_string(p)?)?,
        (None, Split::Train) => Vocabulary::default_train(),
        (None, Split::Eval) => Vocabulary::default_eval(),
    })
}

fn prover(sh: &Shared) -> Result<Option<Prover>, CliError> {
    if !(sh.timeout >= 0.0 && sh.timeout.is_finite()) {
        return Err(CliError::Invalid(format!("bad timeout {}", sh.timeout)));
    }
    let timeout = Duration::from_secs_f64(sh.timeout);
    let cfg = match &sh.prover {
        Some(t) => Some(ProverConfig::new(t, timeout)),
        None => ProverConfig::detect(timeout),
    };
    Ok(cfg.transpose()?.map(|c| Prover::new(c, sh.jobs)))
}

fn records_of(instances: &[Instance], split: Split, vocab: &Vocabulary) -> Result<Vec<Record>, CliError> {
    instances
        .iter()
        .enumerate()
        .map(|(i, inst)| {
            let id = format!("{}-{}-{}", inst.fragment.tag(), inst.sentences.len(), i);
            Ok(to_record(inst, id, split, vocab)?)
        })
        .collect()
}

fn gen(sh: &Shared, a: GenArgs) -> Result<(), CliError> {
    let split: Split = a.split.into();
    let vocab = vocab(sh, split)?;
    let spec =
        CorpusSpec { fragment: a.fragment, min_s: a.min_s, max_s: a.max_s, per_size: a.per_size, master_seed: sh.seed };
    let p = &a.params;
    let overrides = ParamOverrides {
        p_u: p.p_u,
        p_sbar: p.p_sbar,
        p_obar: p.p_obar,
        p_pbar: p.p_pbar,
        p_r: p.p_r,
        p_vbar: p.p_vbar,
        p_uu: p.p_uu,
        p_rbar: p.p_rbar,
        n: p.n,
        v: p.v,
    };
    let needs_prover = a.label_with.map_or(a.fragment.is_relational(), |m| m == args::MethodArg::Atp);
    let prover = if needs_prover { prover(sh)? } else { None };
    let labeler = match a.label_with {
        Some(m) => Labeler::for_method(m.into(), prover, a.max_domain),
        None => Labeler::default_for(a.fragment, prover),
    };
    let mut instances = generate_corpus(&spec, &overrides, &labeler)?;
    if let Some(l_min) = a.l_min {
        instances = filter_hard(instances, l_min, sh.seed)?;
    }
    let records = records_of(&instances, split, &vocab)?;
    write_records(sh, &records)
}

fn construct(sh: &Shared, a: ConstructArgs) -> Result<(), CliError> {
    let split: Split = a.split.into();
    let vocab = vocab(sh, split)?;
    let spec = ConstructSpec {
        fragment: a.fragment,
        d_min: a.d_min,
        d_max: a.d_max,
        s: a.s,
        count: a.count,
        label: match a.label {
            LabelArg::Sat => LabelMode::Sat,
            LabelArg::Unsat => LabelMode::Unsat,
            LabelArg::Balanced => LabelMode::Balanced,
        },
        mutual: a.mutual,
        paired: a.paired,
        master_seed: sh.seed,
    };
    let prover = if a.fragment.is_relational() { prover(sh)? } else { None };
    let instances = construct_corpus(&spec, prover.as_ref())?;
    let records = records_of(&instances, split, &vocab)?;
    write_records(sh, &records)
}

fn verdict_fields(v: &Verdict) -> (Value, Value) {
    match v {
        Verdict::Satisfiable { .. } => (json!("sat"), Value::Null),
        Verdict::Unsatisfiable { config, .. } => {
            (json!("unsat"), config.as_ref().map_or(Value::Null, |c| json!(c.summary())))
        }
        Verdict::Unknown => (json!("unknown"), Value::Null),
    }
}

fn decide(sh: &Shared, a: DecideArgs) -> Result<(), CliError> {
    let method: Method = a.method.into();
    let prover = if method == Method::Atp { prover(sh)? } else { None };
    let labeler = Labeler::for_method(method, prover, a.max_domain);
    let (train, eval) = (vocab(sh, Split::Train)?, vocab(sh, Split::Eval)?);
    let values = parse_jsonl_values(BufReader::new(File::open(&a.input)?))?;
    let mut out = String::new();
    for (line, mut value) in values {
        let rec: Record = serde_json::from_value(value.clone())
            .map_err(|e| CorpusError::Schema { line, message: e.to_string() })?;
        let vocab = if rec.split == Split::Train { &train } else { &eval };
        let sentences = rec.parse_sentences(vocab)?;
        let verdict = labeler.decide(&sentences)?;
        let (v, config) = verdict_fields(&verdict);
        let obj = value.as_object_mut().expect("records are objects");
        obj.insert("verdict".into(), v);
        obj.insert("config".into(), config);
        if let Verdict::Unsatisfiable { proof: Some(p), .. } = verdict {
            obj.insert("l".into(), json!(p.l));
            obj.insert("d".into(), json!(p.d));
        }
        out.push_str(&value.to_string());
        out.push('\n');
    }
    write_out(sh, &out)
}

fn stats(sh: &Shared, a: InArgs) -> Result<(), CliError> {
    let records = corpus::read_jsonl(&a.input)?;
    let st = corpus::stats(&records);
    let mut text = serde_json::to_string_pretty(&st).map_err(io::Error::from)?;
    text.push('\n');
    write_out(sh, &text)
}

fn tptp(sh: &Shared, a: InArgs) -> Result<(), CliError> {
    let dir = sh.out.as_deref().unwrap_or(Path::new("."));
    fs::create_dir_all(dir)?;
    let (train, eval) = (vocab(sh, Split::Train)?, vocab(sh, Split::Eval)?);
    for rec in corpus::read_jsonl(&a.input)? {
        let vocab = if rec.split == Split::Train { &train } else { &eval };
        let sentences = rec.parse_sentences(vocab)?;
        let mut doc = format!("% {} ({}, {})\n", rec.id, rec.fragment, rec.label.as_str());
        doc.push_str(&to_tptp(&sentences, Names::Vocab(vocab), None));
        let name: String =
            rec.id.chars().map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' }).collect();
        fs::write(dir.join(format!("{name}.p")), doc)?;
    }
    Ok(())
}

fn read_lines(a: &TextArgs) -> Result<Vec<String>, CliError> {
    let text = match (&a.text, &a.input) {
        (Some(t), _) => t.clone(),
        (None, Some(p)) => fs::read_to_string(p)?,
        (None, None) => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s)?;
            s
        }
    };
    Ok(BufReader::new(text.as_bytes()).lines().collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .map(|l| l.trim().to_string())
        .filter(|l| !l.is_empty())
        .collect())
}

fn parse(sh: &Shared, a: TextArgs) -> Result<(), CliError> {
    let vocab = vocab(sh, a.split.into())?;
    let mut out = String::new();
    for line in read_lines(&a)? {
        let s = surface::parse(&line, &vocab)?;
        out.push_str(&s.to_term(&vocab)?);
        out.push('\n');
    }
    write_out(sh, &out)
}

fn realize(sh: &Shared, a: TextArgs) -> Result<(), CliError> {
    let vocab = vocab(sh, a.split.into())?;
    let mut out = String::new();
    for line in read_lines(&a)? {
        let s = Sentence::parse_term(&line, &vocab)?;
        out.push_str(&surface::realize(&s, &vocab)?);
        out.push('\n');
    }
    write_out(sh, &out)
}
