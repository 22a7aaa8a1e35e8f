use std::collections::BTreeSet;

use thiserror::Error;

use crate::calculi::{Calculus, TypingContext};
use crate::cset::{CSetError, Label};
use crate::syntax::{parse_term, parse_type, Name, ParseError, Term, Type};

use super::nonint::NiQuery;

#[derive(Debug, Error)]
pub enum ProgramError {
    #[error("line {line}: {source}")]
    Header { line: usize, source: ParseError },
    #[error("line {line}: malformed header `{text}`")]
    Malformed { line: usize, text: String },
    #[error("line {line}: {source}")]
    Label { line: usize, source: CSetError },
    #[error("line {line}: a second hole declaration")]
    DuplicateHole { line: usize },
    #[error(transparent)]
    Term(#[from] ParseError),
    #[error("no hole declared (expected a header line `-- hole x : A`)")]
    NoHole,
}

/// A source file: header lines declaring the context, then a term.
///
/// ```text
/// -- hole x : T Bool
/// -- var y : Bool
/// -- modal u : Bool
/// -- observers L, H
/// -- type Bool
/// (\z:T Bool. y) x
/// ```
///
/// Other `--` lines are comments.
#[derive(Debug, Clone, PartialEq)]
pub struct Program {
    pub hole: Option<(Name, Type)>,
    pub vars: Vec<(Name, Type)>,
    pub modal: Vec<(Name, Type)>,
    pub observers: BTreeSet<Label>,
    pub result: Option<Type>,
    pub term: Term,
}

fn binding(line: usize, rest: &str) -> Result<(Name, Type), ProgramError> {
    let malformed = || ProgramError::Malformed {
        line,
        text: rest.to_string(),
    };
    let (x, ty) = rest.split_once(':').ok_or_else(malformed)?;
    let x = x.trim();
    if x.is_empty()
        || !x
            .chars()
            .all(|c| c.is_alphanumeric() || c == '_' || c == '\'')
    {
        return Err(malformed());
    }
    let ty = parse_type(ty).map_err(|source| ProgramError::Header { line, source })?;
    Ok((x.to_string(), ty))
}

impl Program {
    pub fn parse(src: &str) -> Result<Self, ProgramError> {
        let mut p = Program {
            hole: None,
            vars: Vec::new(),
            modal: Vec::new(),
            observers: BTreeSet::new(),
            result: None,
            term: Term::Unit,
        };
        for (i, raw) in src.lines().enumerate() {
            let line = i + 1;
            let Some(header) = raw.trim_start().strip_prefix("--") else {
                continue;
            };
            let header = header.trim();
            let (key, rest) = header
                .split_once(char::is_whitespace)
                .unwrap_or((header, ""));
            match key {
                "hole" => {
                    if p.hole.is_some() {
                        return Err(ProgramError::DuplicateHole { line });
                    }
                    p.hole = Some(binding(line, rest)?);
                }
                "var" => p.vars.push(binding(line, rest)?),
                "modal" => p.modal.push(binding(line, rest)?),
                "observers" => {
                    for name in rest.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                        let l = Label::new(name)
                            .map_err(|source| ProgramError::Label { line, source })?;
                        p.observers.insert(l);
                    }
                }
                "type" => {
                    let ty =
                        parse_type(rest).map_err(|source| ProgramError::Header { line, source })?;
                    p.result = Some(ty);
                }
                _ => {}
            }
        }
        p.term = parse_term(src)?;
        Ok(p)
    }

    /// The typing context: declared variables, then the hole, then modal
    /// variables and observers.
    pub fn context(&self, calculus: Calculus) -> TypingContext {
        let mut ctx = TypingContext::new(calculus);
        for (x, a) in &self.vars {
            ctx = ctx.with_var(x, a.clone());
        }
        if let Some((x, a)) = &self.hole {
            ctx = ctx.with_var(x, a.clone());
        }
        for (u, a) in &self.modal {
            ctx = ctx.with_modal(u, a.clone());
        }
        ctx.with_observers(self.observers.iter().cloned())
    }

    /// A noninterference query at `result`.
    pub fn ni_query(&self, calculus: Calculus, result: Type) -> Result<NiQuery, ProgramError> {
        let (hole, hole_type) = self.hole.clone().ok_or(ProgramError::NoHole)?;
        Ok(NiQuery {
            calculus,
            hole,
            hole_type,
            observers: self.observers.clone(),
            program: self.term.clone(),
            result,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn headers() {
        let p = Program::parse(
            "-- a comment\n-- hole x : T Bool\n-- var y : Bool\n-- modal u : Bool\n-- observers L, H\n-- type Bool\n(\\z:T Bool. y) x\n",
        )
        .unwrap();
        assert_eq!(p.hole, Some(("x".into(), Type::monad(Type::Bool))));
        assert_eq!(p.vars, vec![("y".into(), Type::Bool)]);
        assert_eq!(p.modal, vec![("u".into(), Type::Bool)]);
        assert_eq!(p.observers.len(), 2);
        assert_eq!(p.result, Some(Type::Bool));
        assert_eq!(p.term.to_string(), "(\\z:T Bool. y) x");
        let ctx = p.context(Calculus::DaviesPfenning);
        assert_eq!(ctx.ordinary().len(), 2);
        assert_eq!(ctx.modal().len(), 1);
    }

    #[test]
    fn errors_carry_lines() {
        let e = Program::parse("tt\n-- hole x : T\n").unwrap_err();
        assert!(matches!(e, ProgramError::Header { line: 2, .. }));
        let e = Program::parse("-- hole x Bool\ntt").unwrap_err();
        assert!(matches!(e, ProgramError::Malformed { line: 1, .. }));
        let e = Program::parse("-- hole x : Bool\n-- hole y : Bool\ntt").unwrap_err();
        assert!(matches!(e, ProgramError::DuplicateHole { line: 2 }));
        assert!(matches!(
            Program::parse("-- type Bool\n(tt"),
            Err(ProgramError::Term(_))
        ));
        assert!(matches!(
            Program::parse("tt")
                .unwrap()
                .ni_query(Calculus::Moggi, Type::Bool),
            Err(ProgramError::NoHole)
        ));
    }
}
