//! Sentence to readings, with directives addressed by NP surface form.

use thiserror::Error;

use crate::disambig::{
    enumerate_readings, pl_dis, DisambigError, Directive, PluralPolicy, PluralReading, Reading,
};
use crate::lexicon::Lexicon;
use crate::syntax::{self, Derivation, NpInfo, SyntaxError};
use crate::udrs::{IdGen, UdrsStore};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PipelineError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error(transparent)]
    Disambig(#[from] DisambigError),
    #[error("no noun phrase {0:?} in the sentence")]
    UnknownNp(String),
    #[error("malformed directive {0:?}")]
    BadDirective(String),
}

/// One derivation with its root store.
#[derive(Clone, Debug)]
pub struct Analysis {
    pub derivation: Derivation,
    pub store: UdrsStore,
    pub nps: Vec<NpInfo>,
}

pub fn analyze(lex: &Lexicon, sentence: &str) -> Result<Vec<Analysis>, PipelineError> {
    let mut out = Vec::new();
    for d in syntax::parse(lex, sentence)? {
        let mut gen = IdGen::starting_at(1);
        let built = syntax::build(&d, &mut gen)?;
        let mut store = built.sign.udrs;
        store.reserve_ids(&gen);
        out.push(Analysis { derivation: d, store, nps: built.nps });
    }
    Ok(out)
}

/// An NP addressed by surface form and 1-based occurrence index.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct NpRef {
    pub form: String,
    pub occurrence: usize,
}

impl NpRef {
    /// Parses `FORM` or `FORM#N`.
    pub fn parse(s: &str) -> Result<NpRef, PipelineError> {
        let bad = || PipelineError::BadDirective(s.to_string());
        let (form, occurrence) = match s.rsplit_once('#') {
            Some((f, n)) => (f, n.trim().parse::<usize>().map_err(|_| bad())?),
            None => (s, 1),
        };
        let form = form.split_whitespace().collect::<Vec<_>>().join(" ").to_lowercase();
        if form.is_empty() || occurrence == 0 {
            return Err(bad());
        }
        Ok(NpRef { form, occurrence })
    }

    pub fn resolve<'a>(&self, a: &'a Analysis) -> Result<&'a NpInfo, PipelineError> {
        a.nps
            .iter()
            .filter(|n| n.text == self.form)
            .nth(self.occurrence - 1)
            .ok_or_else(|| PipelineError::UnknownNp(self.form.clone()))
    }
}

/// A directive before it is tied to a particular derivation.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum DirectiveSpec {
    Single(NpRef, PluralReading),
    Cumulative(NpRef, NpRef),
}

impl DirectiveSpec {
    /// `FORM[#N]=reading`.
    pub fn parse(s: &str) -> Result<DirectiveSpec, PipelineError> {
        let bad = || PipelineError::BadDirective(s.to_string());
        let (np, reading) = s.rsplit_once('=').ok_or_else(bad)?;
        let reading = PluralReading::parse(reading.trim()).ok_or_else(bad)?;
        if reading == PluralReading::Cumulative {
            return Err(bad());
        }
        Ok(DirectiveSpec::Single(NpRef::parse(np)?, reading))
    }

    /// `FORM[#N],FORM[#N]`.
    pub fn parse_cumulative(s: &str) -> Result<DirectiveSpec, PipelineError> {
        let (a, b) = s.split_once(',').ok_or_else(|| PipelineError::BadDirective(s.to_string()))?;
        Ok(DirectiveSpec::Cumulative(NpRef::parse(a)?, NpRef::parse(b)?))
    }

    pub fn resolve(&self, a: &Analysis) -> Result<Directive, PipelineError> {
        Ok(match self {
            DirectiveSpec::Single(np, r) => Directive::new(np.resolve(a)?.ls.l_max, *r),
            DirectiveSpec::Cumulative(x, y) => {
                Directive::cumulative(x.resolve(a)?.ls.l_max, y.resolve(a)?.ls.l_max)
            }
        })
    }
}

/// Applies the directives in order.
pub fn disambiguate(a: &Analysis, specs: &[DirectiveSpec]) -> Result<UdrsStore, PipelineError> {
    let mut u = a.store.clone();
    for s in specs {
        u = pl_dis(&u, s.resolve(a)?)?;
    }
    Ok(u)
}

/// Readings of one analysis after the directives.
pub fn readings(
    a: &Analysis,
    specs: &[DirectiveSpec],
    policy: PluralPolicy,
) -> Result<Vec<Reading>, PipelineError> {
    let u = disambiguate(a, specs)?;
    Ok(enumerate_readings(&u, policy)?)
}

/// Readings of every derivation, deduplicated.
pub fn sentence_readings(
    lex: &Lexicon,
    sentence: &str,
    specs: &[DirectiveSpec],
    policy: PluralPolicy,
) -> Result<Vec<Reading>, PipelineError> {
    let mut all: Vec<Reading> = Vec::new();
    for a in analyze(lex, sentence)? {
        for r in readings(&a, specs, policy)? {
            if !all.contains(&r) {
                all.push(r);
            }
        }
    }
    all.sort_by(|a, b| a.text.cmp(&b.text));
    Ok(all)
}
