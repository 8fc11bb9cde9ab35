use std::collections::{HashMap, HashSet};
use std::fmt;
use std::time::Instant;

use super::ast::{signature, Expr};
use super::eval::evaluate;
use super::parser::{parse_with, ParseError};
use crate::number::{GaussianRational, QExponent};

/// One identity `lhs = rhs`, checked below `order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityRecord {
    pub id: String,
    pub anchor: String,
    pub order: QExponent,
    pub lhs: Expr,
    pub rhs: Expr,
    /// line of the `[identity ...]` header
    pub line: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CorpusError {
    Expr(ParseError),
    Structure { line: usize, message: String },
}

impl fmt::Display for CorpusError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CorpusError::Expr(e) => write!(f, "{e}"),
            CorpusError::Structure { line, message } => write!(f, "{line}: {message}"),
        }
    }
}

impl std::error::Error for CorpusError {}

fn structure(line: usize, message: impl Into<String>) -> CorpusError {
    CorpusError::Structure { line, message: message.into() }
}

#[derive(Default)]
struct Stanza {
    id: String,
    line: usize,
    anchor: Option<String>,
    order: Option<QExponent>,
    lhs: Option<Expr>,
    rhs: Option<Expr>,
    lets: HashMap<String, Expr>,
}

/// A `key = value` entry, possibly continued on indented lines.
struct Entry {
    key: String,
    value: String,
    line: usize,
}

/// Parses a corpus. Stanzas without an `order` line get `default_order`.
pub fn parse_corpus(text: &str, default_order: &QExponent) -> Result<Vec<IdentityRecord>, CorpusError> {
    let mut globals: HashMap<String, Expr> = HashMap::new();
    let mut stanzas: Vec<Stanza> = Vec::new();
    let mut pending: Option<Entry> = None;
    let lines: Vec<&str> = text.lines().collect();

    let flush = |entry: Option<Entry>, stanzas: &mut Vec<Stanza>, globals: &mut HashMap<String, Expr>| -> Result<(), CorpusError> {
        let Some(e) = entry else { return Ok(()) };
        apply(e, stanzas.last_mut(), globals)
    };

    for (idx, raw) in lines.iter().enumerate() {
        let ln = idx + 1;
        let line = raw.trim_end();
        let trimmed = line.trim_start();
        if trimmed.starts_with('#') {
            continue;
        }
        if trimmed.is_empty() {
            flush(pending.take(), &mut stanzas, &mut globals)?;
            continue;
        }
        if line.starts_with(char::is_whitespace) {
            // continuation of the previous value
            match &mut pending {
                Some(e) => {
                    e.value.push('\n');
                    e.value.push_str(line);
                    continue;
                }
                None => return Err(structure(ln, "indented line continues nothing")),
            }
        }
        flush(pending.take(), &mut stanzas, &mut globals)?;
        if let Some(rest) = trimmed.strip_prefix('[') {
            let inner = rest.strip_suffix(']').ok_or_else(|| structure(ln, "unclosed `[`"))?;
            let id = inner.strip_prefix("identity").map(str::trim).filter(|s| !s.is_empty());
            let id = id.ok_or_else(|| structure(ln, "expected `[identity <id>]`"))?;
            if id.contains(char::is_whitespace) {
                return Err(structure(ln, format!("identity id `{id}` contains whitespace")));
            }
            stanzas.push(Stanza { id: id.to_string(), line: ln, ..Default::default() });
            continue;
        }
        let (key, value, offset) = if let Some(rest) = trimmed.strip_prefix("let ") {
            let (name, value) = rest.split_once('=').ok_or_else(|| structure(ln, "expected `let <name> = <expr>`"))?;
            (format!("let {}", name.trim()), value, line.len() - value.len())
        } else {
            let (key, value) = trimmed.split_once('=').ok_or_else(|| structure(ln, "expected `<key> = <value>`"))?;
            (key.trim().to_string(), value, line.len() - value.len())
        };
        // pad so parse errors report file columns
        pending = Some(Entry { key, value: format!("{}{}", " ".repeat(offset), value), line: ln });
    }
    flush(pending.take(), &mut stanzas, &mut globals)?;

    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(stanzas.len());
    for s in stanzas {
        if !seen.insert(s.id.clone()) {
            return Err(structure(s.line, format!("duplicate identity id `{}`", s.id)));
        }
        let missing = |what: &str| structure(s.line, format!("identity `{}` has no `{what}`", s.id));
        let lhs = s.lhs.clone().ok_or_else(|| missing("lhs"))?;
        let rhs = s.rhs.clone().ok_or_else(|| missing("rhs"))?;
        out.push(IdentityRecord {
            anchor: s.anchor.unwrap_or_default(),
            order: s.order.unwrap_or_else(|| default_order.clone()),
            id: s.id,
            lhs,
            rhs,
            line: s.line,
        });
    }
    Ok(out)
}

fn apply(e: Entry, stanza: Option<&mut Stanza>, globals: &mut HashMap<String, Expr>) -> Result<(), CorpusError> {
    let scope = |st: &Option<&mut Stanza>| -> HashMap<String, Expr> {
        let mut m = globals.clone();
        if let Some(s) = st {
            m.extend(s.lets.iter().map(|(k, v)| (k.clone(), v.clone())));
        }
        m
    };
    let expr = |st: &Option<&mut Stanza>| parse_with(&e.value, &scope(st), e.line).map_err(CorpusError::Expr);
    if let Some(name) = e.key.strip_prefix("let ") {
        let valid =
            name.chars().next().is_some_and(|c| c.is_alphabetic() || c == '_') && name.chars().all(|c| c.is_alphanumeric() || c == '_');
        if !valid || name == "q" || name == "i" || signature(name).is_some() {
            return Err(structure(e.line, format!("cannot bind `{name}`")));
        }
        let v = expr(&stanza)?;
        match stanza {
            Some(s) => s.lets.insert(name.to_string(), v),
            None => globals.insert(name.to_string(), v),
        };
        return Ok(());
    }
    let s = stanza.ok_or_else(|| structure(e.line, format!("`{}` outside an identity stanza", e.key)))?;
    let slot_taken = match e.key.as_str() {
        "anchor" => {
            let v = e.value.trim();
            let v =
                v.strip_prefix('"').and_then(|v| v.strip_suffix('"')).ok_or_else(|| structure(e.line, "anchor must be a quoted string"))?;
            s.anchor.replace(v.to_string()).is_some()
        }
        "order" => {
            let v: QExponent = e.value.trim().parse().map_err(|m: String| structure(e.line, m))?;
            if !v.is_positive() {
                return Err(structure(e.line, "order must be positive"));
            }
            s.order.replace(v).is_some()
        }
        "lhs" | "rhs" => {
            let v = parse_with(&e.value, &scope(&Some(&mut *s)), e.line).map_err(CorpusError::Expr)?;
            let slot = if e.key == "lhs" { &mut s.lhs } else { &mut s.rhs };
            slot.replace(v).is_some()
        }
        k => return Err(structure(e.line, format!("unknown key `{k}`"))),
    };
    if slot_taken {
        return Err(structure(e.line, format!("`{}` given twice", e.key)));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Status {
    Pass,
    Fail,
    Error,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Error => "ERROR",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub id: String,
    pub anchor: String,
    pub status: Status,
    pub order: QExponent,
    /// precision of `lhs - rhs`; absent on error
    pub achieved_precision: Option<QExponent>,
    pub first_mismatch: Option<(QExponent, GaussianRational)>,
    /// error kind and message on `Status::Error`
    pub error: Option<String>,
    pub elapsed_ms: u128,
}

/// Evaluates `lhs - rhs` at the record's order and inspects every coefficient.
pub fn verify_identity(rec: &IdentityRecord) -> VerificationReport {
    let start = Instant::now();
    let diff = Expr::Sub(Box::new(rec.lhs.clone()), Box::new(rec.rhs.clone()));
    let mut report = VerificationReport {
        id: rec.id.clone(),
        anchor: rec.anchor.clone(),
        status: Status::Error,
        order: rec.order.clone(),
        achieved_precision: None,
        first_mismatch: None,
        error: None,
        elapsed_ms: 0,
    };
    match evaluate(&diff, &rec.order) {
        Ok(d) => {
            report.achieved_precision = d.precision().cloned();
            report.first_mismatch = d.first_difference(&crate::QSeries::zero_exact());
            report.status = if report.first_mismatch.is_some() { Status::Fail } else { Status::Pass };
        }
        Err(e) => report.error = Some(format!("{}: {e}", e.kind())),
    }
    report.elapsed_ms = start.elapsed().as_millis();
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse;

    fn rec(lhs: &str, rhs: &str, order: i64) -> IdentityRecord {
        IdentityRecord {
            id: "t".into(),
            anchor: String::new(),
            order: order.into(),
            lhs: parse(lhs).unwrap(),
            rhs: parse(rhs).unwrap(),
            line: 1,
        }
    }

    #[test]
    fn planted_defect() {
        let r = verify_identity(&rec("Jm(1)", "Jm(1)+q^5", 10));
        assert_eq!(r.status, Status::Fail);
        assert_eq!(r.first_mismatch, Some((5.into(), GaussianRational::from_int(-1))));
        let r = verify_identity(&rec("Jm(1)+q^5", "Jm(1)", 10));
        assert_eq!(r.first_mismatch, Some((5.into(), GaussianRational::from_int(1))));
    }

    #[test]
    fn pole_is_an_error() {
        let r = verify_identity(&rec("m(1,q,1)", "0", 10));
        assert_eq!(r.status, Status::Error);
        assert!(r.error.unwrap().starts_with("DegenerateZ"));
        assert_eq!(r.first_mismatch, None);
    }

    #[test]
    fn corpus_format() {
        let text = "# header\nlet t = J(1,2)\n\n[identity a]\nanchor = \"first\"\norder = 20\nlhs = t\n  * 1\nrhs = Jm(1)^2/Jm(2)\n\n[identity b]\nlet u = q\nlhs = u\nrhs = q\n";
        let recs = parse_corpus(text, &50.into()).unwrap();
        assert_eq!(recs.len(), 2);
        assert_eq!(recs[0].anchor, "first");
        assert_eq!(recs[0].order, QExponent::from_int(20));
        assert_eq!(recs[1].order, QExponent::from_int(50));
        assert_eq!(recs[1].line, 11);
        assert!(recs.iter().all(|r| verify_identity(r).status == Status::Pass));
    }

    #[test]
    fn corpus_errors() {
        let d = QExponent::from_int(10);
        let dup = "[identity a]\nlhs = 1\nrhs = 1\n\n[identity a]\nlhs = 1\nrhs = 1\n";
        assert!(matches!(parse_corpus(dup, &d), Err(CorpusError::Structure { line: 5, .. })));
        let bad = "[identity a]\nlhs = q^(1/2\nrhs = 1\n";
        match parse_corpus(bad, &d) {
            Err(CorpusError::Expr(e)) => assert_eq!((e.line, e.col), (2, 13)),
            other => panic!("{other:?}"),
        }
        assert!(parse_corpus("[identity a]\nlhs = 1\n", &d).is_err());
        assert!(parse_corpus("[identity a]\nfoo = 1\n", &d).is_err());
    }
}
