use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use scopeforge::disambig::{self, DisambigError, PluralPolicy, Reading};
use scopeforge::lexicon::Lexicon;
use scopeforge::modeleval::{self, Model};
use scopeforge::pipeline::{self, Analysis, DirectiveSpec, PipelineError};
use scopeforge::syntax::SyntaxError;
use scopeforge::udrs::{text, UdrsError};

#[derive(Parser)]
#[command(name = "scopeforge", version, about = "Underspecified DRS construction and scope enumeration")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse a sentence and report its UDRS and readings.
    Parse(ParseArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Policy {
    Branch,
    Fixed,
}

#[derive(clap::Args)]
struct ParseArgs {
    /// Sentence to analyse; omit with --batch.
    sentence: Option<String>,
    /// Lexicon file (TOML); defaults to the built-in fragment.
    #[arg(long)]
    lexicon: Option<PathBuf>,
    /// Print every reading in box notation.
    #[arg(long)]
    readings: bool,
    /// Print the canonical UDRS after directives.
    #[arg(long)]
    udrs: bool,
    /// Print subordination constraints with the principle that added them.
    #[arg(long)]
    audit: bool,
    /// Write the subordination lattice before and after disambiguation.
    #[arg(long, value_name = "PATH")]
    dot: Option<PathBuf>,
    /// FORM[#N]=collective|distributive|generic|none
    #[arg(long, value_name = "DIRECTIVE")]
    disambiguate: Vec<String>,
    /// FORM[#N],FORM[#N]
    #[arg(long, value_name = "PAIR")]
    cumulative: Vec<String>,
    #[arg(long, value_enum, default_value = "branch")]
    policy: Policy,
    /// Model file; prints the truth value of every reading.
    #[arg(long = "eval", value_name = "MODEL")]
    eval: Vec<PathBuf>,
    /// File with one sentence per line.
    #[arg(long, value_name = "FILE")]
    batch: Option<PathBuf>,
}

struct Failure {
    code: u8,
    tag: &'static str,
    msg: String,
}

impl Failure {
    fn schema(msg: impl Into<String>) -> Self {
        Failure { code: 3, tag: "schema", msg: msg.into() }
    }
}

fn classify_udrs(e: &UdrsError) -> (u8, &'static str) {
    match e {
        UdrsError::InconsistentStore(_) => (2, "inconsistent"),
        _ => (2, "semantic"),
    }
}

impl From<PipelineError> for Failure {
    fn from(e: PipelineError) -> Self {
        let (code, tag) = match &e {
            PipelineError::Syntax(SyntaxError::Semantic(u)) => classify_udrs(u),
            PipelineError::Syntax(SyntaxError::UnknownWord(_)) => (1, "unknown_word"),
            PipelineError::Syntax(_) => (1, "no_parse"),
            PipelineError::Disambig(DisambigError::Store(u)) => classify_udrs(u),
            PipelineError::Disambig(DisambigError::UnresolvedSlot(_)) => (2, "unresolved_slot"),
            PipelineError::Disambig(_) => (2, "disambiguation"),
            PipelineError::UnknownNp(_) | PipelineError::BadDirective(_) => (3, "directive"),
        };
        Failure { code, tag, msg: e.to_string() }
    }
}

fn read(path: &PathBuf) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::schema(format!("{}: {e}", path.display())))
}

struct Setup {
    lex: Lexicon,
    specs: Vec<DirectiveSpec>,
    policy: PluralPolicy,
    models: Vec<(String, Model)>,
}

fn setup(a: &ParseArgs) -> Result<Setup, Failure> {
    let lex = match &a.lexicon {
        Some(p) => Lexicon::load(&read(p)?).map_err(|e| Failure::schema(format!("{}: {e}", p.display())))?,
        None => Lexicon::fragment(),
    };
    let mut specs = Vec::new();
    for d in &a.disambiguate {
        specs.push(DirectiveSpec::parse(d)?);
    }
    for c in &a.cumulative {
        specs.push(DirectiveSpec::parse_cumulative(c)?);
    }
    let mut models = Vec::new();
    for p in &a.eval {
        let m = Model::parse(&read(p)?).map_err(|e| Failure::schema(format!("{}: {e}", p.display())))?;
        models.push((p.display().to_string(), m));
    }
    let policy = match a.policy {
        Policy::Branch => PluralPolicy::Branch,
        Policy::Fixed => PluralPolicy::Fixed,
    };
    Ok(Setup { lex, specs, policy, models })
}

fn run_sentence(a: &ParseArgs, s: &Setup, sentence: &str, out: &mut String) -> Result<(), Failure> {
    let analyses: Vec<Analysis> = pipeline::analyze(&s.lex, sentence)?;
    let many = analyses.len() > 1;
    let mut union: Vec<Reading> = Vec::new();
    let mut dot = String::new();
    for (k, an) in analyses.iter().enumerate() {
        let n = k + 1;
        let _ = writeln!(out, "derivation {n}: {}", an.derivation.bracketing());
        let u = pipeline::disambiguate(an, &s.specs)?;
        if a.udrs {
            let _ = write!(out, "udrs:\n{}", text::print_canonical(&u));
        }
        if a.audit {
            let _ = write!(out, "audit:\n{}", text::audit(&text::canonicalize(&u)));
        }
        if a.dot.is_some() {
            dot.push_str(&disambig::dot(&text::canonicalize(&an.store), &format!("d{n}_before")));
            dot.push_str(&disambig::dot(&text::canonicalize(&u), &format!("d{n}_after")));
        }
        let rs = disambig::enumerate_readings(&u, s.policy).map_err(PipelineError::from)?;
        if many {
            let _ = writeln!(out, "derivation {n} readings: {}", rs.len());
        }
        for r in rs {
            if !union.contains(&r) {
                union.push(r);
            }
        }
    }
    union.sort_by(|x, y| x.text.cmp(&y.text));
    let _ = writeln!(out, "readings: {}", union.len());
    if a.readings {
        for (i, r) in union.iter().enumerate() {
            let _ = writeln!(out, "reading {}:\n{}", i + 1, r.text);
        }
    }
    for (name, m) in &s.models {
        for (i, r) in union.iter().enumerate() {
            let v = match modeleval::evaluate(r, m) {
                Ok(true) => "true".to_string(),
                Ok(false) => "false".to_string(),
                Err(e) => format!("n/a ({e})"),
            };
            let _ = writeln!(out, "eval {name} reading {}: {v}", i + 1);
        }
    }
    if let Some(p) = &a.dot {
        std::fs::write(p, dot).map_err(|e| Failure::schema(format!("{}: {e}", p.display())))?;
    }
    Ok(())
}

fn report(f: &Failure) {
    eprintln!("error[{}]: {}", f.tag, f.msg);
}

fn parse_cmd(a: &ParseArgs) -> u8 {
    let s = match setup(a) {
        Ok(s) => s,
        Err(f) => {
            report(&f);
            return f.code;
        }
    };
    let sentences: Vec<String> = match (&a.batch, &a.sentence) {
        (Some(p), _) => match read(p) {
            Ok(t) => t
                .lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#'))
                .map(String::from)
                .collect(),
            Err(f) => {
                report(&f);
                return f.code;
            }
        },
        (None, Some(s)) => vec![s.clone()],
        (None, None) => {
            let f = Failure::schema("a sentence or --batch FILE is required");
            report(&f);
            return f.code;
        }
    };
    let batch = a.batch.is_some();
    let mut code = 0;
    for sentence in &sentences {
        let mut out = String::new();
        if batch {
            let _ = writeln!(out, "# {sentence}");
        }
        match run_sentence(a, &s, sentence, &mut out) {
            Ok(()) => print!("{out}"),
            Err(f) => {
                print!("{out}");
                report(&f);
                code = code.max(f.code);
            }
        }
    }
    code
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match &cli.cmd {
        Cmd::Parse(a) => parse_cmd(a),
    };
    ExitCode::from(code)
}
