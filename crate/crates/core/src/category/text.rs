//! Line-based text format for finite categories.
//!
//! ```text
//! # comments start with '#'
//! objects 1
//! mor e 0 0
//! mor g 0 0
//! id 0 e
//! comp g g e        # g ∘ g = e
//! end
//! ```
//!
//! Composites involving an identity may be omitted. Every object needs an
//! `id` line; `end` is mandatory.

use std::collections::HashMap;
use std::fmt::Write as _;

use thiserror::Error;

use super::{CategoryError, FinCategory, Morphism};

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("missing `end`")]
    MissingEnd,
    #[error("missing `objects` line")]
    MissingObjects,
    #[error("object {0} has no `id` line")]
    MissingIdentity(usize),
    #[error(transparent)]
    Category(#[from] CategoryError),
}

fn syntax(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line,
        msg: msg.into(),
    }
}

fn parse_index(tok: &str, line: usize) -> Result<usize, ParseError> {
    tok.parse()
        .map_err(|_| syntax(line, format!("expected a non-negative integer, got `{tok}`")))
}

impl FinCategory {
    /// Parses the text format and validates the result.
    pub fn parse(input: &str) -> Result<Self, ParseError> {
        let cat = Self::parse_unchecked(input)?;
        let report = cat.validate();
        if report.is_valid() {
            Ok(cat)
        } else {
            Err(ParseError::Category(CategoryError::Invalid(report)))
        }
    }

    /// Parses the text format without checking the category laws, so that
    /// the validator can report on malformed tables.
    pub fn parse_unchecked(input: &str) -> Result<Self, ParseError> {
        let mut n_objects: Option<usize> = None;
        let mut morphisms: Vec<Morphism> = Vec::new();
        let mut by_name: HashMap<String, usize> = HashMap::new();
        let mut ids: Vec<Option<usize>> = Vec::new();
        let mut composites = Vec::new();
        let mut ended = false;

        for (lineno, raw) in input.lines().enumerate() {
            let line = lineno + 1;
            let content = raw.split('#').next().unwrap_or("");
            let toks: Vec<&str> = content.split_whitespace().collect();
            if toks.is_empty() {
                continue;
            }
            if ended {
                return Err(syntax(line, "content after `end`"));
            }
            match toks[0] {
                "objects" => {
                    if toks.len() != 2 {
                        return Err(syntax(line, "usage: objects <n>"));
                    }
                    if n_objects.is_some() {
                        return Err(syntax(line, "duplicate `objects` line"));
                    }
                    let n = parse_index(toks[1], line)?;
                    n_objects = Some(n);
                    ids = vec![None; n];
                }
                "mor" => {
                    let n = n_objects.ok_or(ParseError::MissingObjects)?;
                    if toks.len() != 4 {
                        return Err(syntax(line, "usage: mor <name> <dom> <cod>"));
                    }
                    let (dom, cod) = (parse_index(toks[2], line)?, parse_index(toks[3], line)?);
                    if dom >= n || cod >= n {
                        return Err(syntax(line, format!("object index out of range (have {n})")));
                    }
                    if by_name.insert(toks[1].to_string(), morphisms.len()).is_some() {
                        return Err(syntax(line, format!("duplicate morphism name `{}`", toks[1])));
                    }
                    morphisms.push(Morphism::new(toks[1], dom, cod));
                }
                "id" => {
                    let n = n_objects.ok_or(ParseError::MissingObjects)?;
                    if toks.len() != 3 {
                        return Err(syntax(line, "usage: id <object> <name>"));
                    }
                    let obj = parse_index(toks[1], line)?;
                    if obj >= n {
                        return Err(syntax(line, format!("object index out of range (have {n})")));
                    }
                    let f = *by_name
                        .get(toks[2])
                        .ok_or_else(|| syntax(line, format!("unknown morphism `{}`", toks[2])))?;
                    if ids[obj].replace(f).is_some() {
                        return Err(syntax(line, format!("object {obj} already has an identity")));
                    }
                }
                "comp" => {
                    if toks.len() != 4 {
                        return Err(syntax(line, "usage: comp <g> <f> <h>"));
                    }
                    let look = |t: &str| {
                        by_name
                            .get(t)
                            .copied()
                            .ok_or_else(|| syntax(line, format!("unknown morphism `{t}`")))
                    };
                    let (g, f, h) = (look(toks[1])?, look(toks[2])?, look(toks[3])?);
                    composites.push((g, f, h));
                }
                "end" => {
                    if toks.len() != 1 {
                        return Err(syntax(line, "`end` takes no arguments"));
                    }
                    ended = true;
                }
                other => return Err(syntax(line, format!("unknown directive `{other}`"))),
            }
        }
        if !ended {
            return Err(ParseError::MissingEnd);
        }
        let n = n_objects.ok_or(ParseError::MissingObjects)?;
        let identity = ids
            .iter()
            .enumerate()
            .map(|(o, id)| id.ok_or(ParseError::MissingIdentity(o)))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(FinCategory::from_parts(n, morphisms, identity, &composites)?)
    }

    /// Serializes to the text format. Composites with an identity factor are
    /// omitted.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "objects {}", self.n_objects());
        for m in self.morphisms() {
            let _ = writeln!(out, "mor {} {} {}", m.name, m.dom, m.cod);
        }
        for (o, &id) in self.identities().iter().enumerate() {
            let _ = writeln!(out, "id {o} {}", self.name(id));
        }
        for g in 0..self.n_morphisms() {
            if self.is_identity(g) {
                continue;
            }
            for f in 0..self.n_morphisms() {
                if self.is_identity(f) {
                    continue;
                }
                if let Some(h) = self.try_compose(g, f) {
                    let _ = writeln!(out, "comp {} {} {}", self.name(g), self.name(f), self.name(h));
                }
            }
        }
        out.push_str("end\n");
        out
    }
}
