//! Concrete syntax.
//!
//! ```text
//! types  A ::= Bool | BoolCo | Unit | T A | Box A | T[l] A | Seal[l] A
//!            | A -> A | A * A | A + A | (A)
//! terms  M ::= x | \x:A. M | M N | (M, N) | (M : A) | fst M | snd M | inl M | inr M
//!            | case M of inl x => N | inr y => P | unit | tt | ff
//!            | if M then N else P | ret M | let x = M in N | box M
//!            | let box u = M in N | ret[l] M | seal[l] M | unseal[l] M
//! ```
//!
//! `--` starts a comment. Binders are renamed apart from each other and from the
//! free variables, so no two binders share a name after parsing.

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use super::ast::{Name, Term, Type};
use crate::cset::Label;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at {line}:{col}: expected {expected}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub expected: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Sym(&'static str),
    Eof,
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

const SYMBOLS: [&str; 14] = [
    "->", "=>", "\\", ":", ".", "(", ")", ",", "[", "]", "*", "+", "|", "=",
];

const KEYWORDS: [&str; 18] = [
    "fst", "snd", "inl", "inr", "case", "of", "unit", "tt", "ff", "if", "then", "else", "ret",
    "let", "in", "box", "seal", "unseal",
];

fn lex(src: &str) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let (mut i, mut line, mut col) = (0, 1, 1);
    let mut out = Vec::new();
    let advance = |i: &mut usize, line: &mut usize, col: &mut usize, c: char| {
        *i += 1;
        if c == '\n' {
            *line += 1;
            *col = 1;
        } else {
            *col += 1;
        }
    };
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            advance(&mut i, &mut line, &mut col, c);
            continue;
        }
        if c == '-' && chars.get(i + 1) == Some(&'-') {
            while i < chars.len() && chars[i] != '\n' {
                let ch = chars[i];
                advance(&mut i, &mut line, &mut col, ch);
            }
            continue;
        }
        let (l0, c0) = (line, col);
        if c.is_ascii_alphanumeric() || c == '_' {
            let mut s = String::new();
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                s.push(chars[i]);
                let ch = chars[i];
                advance(&mut i, &mut line, &mut col, ch);
            }
            while i < chars.len() && chars[i] == '\'' {
                s.push('\'');
                advance(&mut i, &mut line, &mut col, '\'');
            }
            out.push(Spanned {
                tok: Tok::Ident(s),
                line: l0,
                col: c0,
            });
            continue;
        }
        let rest: String = chars[i..chars.len().min(i + 2)].iter().collect();
        match SYMBOLS.iter().find(|s| rest.starts_with(**s)) {
            Some(s) => {
                for ch in s.chars() {
                    advance(&mut i, &mut line, &mut col, ch);
                }
                out.push(Spanned {
                    tok: Tok::Sym(s),
                    line: l0,
                    col: c0,
                });
            }
            None => {
                return Err(ParseError {
                    line,
                    col,
                    expected: format!("a token, found `{c}`"),
                })
            }
        }
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        col,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

type PResult<T> = Result<T, ParseError>;

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn err<T>(&self, expected: &str) -> PResult<T> {
        let t = &self.toks[self.pos];
        let found = match &t.tok {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Sym(s) => format!("`{s}`"),
            Tok::Eof => "end of input".to_string(),
        };
        Err(ParseError {
            line: t.line,
            col: t.col,
            expected: format!("{expected}, found {found}"),
        })
    }

    fn is_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Tok::Sym(x) if *x == s)
    }

    fn is_kw(&self, k: &str) -> bool {
        matches!(self.peek(), Tok::Ident(x) if x == k)
    }

    fn sym(&mut self, s: &str) -> PResult<()> {
        if self.is_sym(s) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(&format!("`{s}`"))
        }
    }

    fn kw(&mut self, k: &str) -> PResult<()> {
        if self.is_kw(k) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(&format!("`{k}`"))
        }
    }

    fn name(&mut self) -> PResult<Name> {
        match self.peek().clone() {
            Tok::Ident(s)
                if !KEYWORDS.contains(&s.as_str())
                    && !s.starts_with(|c: char| c.is_ascii_digit()) =>
            {
                self.pos += 1;
                Ok(s)
            }
            _ => self.err("a variable name"),
        }
    }

    fn label_brackets(&mut self) -> PResult<Label> {
        self.sym("[")?;
        let l = match self.peek().clone() {
            Tok::Ident(s) => match Label::new(&s) {
                Ok(l) => l,
                Err(_) => return self.err("a label"),
            },
            _ => return self.err("a label"),
        };
        self.pos += 1;
        self.sym("]")?;
        Ok(l)
    }

    fn eof(&self) -> PResult<()> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            self.err("end of input")
        }
    }

    // ----- types -----

    fn ty(&mut self) -> PResult<Type> {
        let a = self.ty_sum()?;
        if self.is_sym("->") {
            self.pos += 1;
            Ok(Type::arrow(a, self.ty()?))
        } else {
            Ok(a)
        }
    }

    fn ty_sum(&mut self) -> PResult<Type> {
        let mut a = self.ty_prod()?;
        while self.is_sym("+") {
            self.pos += 1;
            a = Type::sum(a, self.ty_prod()?);
        }
        Ok(a)
    }

    fn ty_prod(&mut self) -> PResult<Type> {
        let mut a = self.ty_prefix()?;
        while self.is_sym("*") {
            self.pos += 1;
            a = Type::prod(a, self.ty_prefix()?);
        }
        Ok(a)
    }

    fn ty_prefix(&mut self) -> PResult<Type> {
        if self.is_kw("T") {
            self.pos += 1;
            if self.is_sym("[") {
                let l = self.label_brackets()?;
                return Ok(Type::lev(l, self.ty_prefix()?));
            }
            return Ok(Type::monad(self.ty_prefix()?));
        }
        if self.is_kw("Box") {
            self.pos += 1;
            return Ok(Type::boxed(self.ty_prefix()?));
        }
        if self.is_kw("Seal") {
            self.pos += 1;
            let l = self.label_brackets()?;
            return Ok(Type::seal(l, self.ty_prefix()?));
        }
        self.ty_atom()
    }

    fn ty_atom(&mut self) -> PResult<Type> {
        if self.is_sym("(") {
            self.pos += 1;
            let a = self.ty()?;
            self.sym(")")?;
            return Ok(a);
        }
        for (k, t) in [
            ("Bool", Type::Bool),
            ("BoolCo", Type::BoolCo),
            ("Unit", Type::Unit),
        ] {
            if self.is_kw(k) {
                self.pos += 1;
                return Ok(t);
            }
        }
        self.err("a type")
    }

    // ----- terms -----

    fn expr(&mut self) -> PResult<Term> {
        if self.is_sym("\\") {
            self.pos += 1;
            let x = self.name()?;
            self.sym(":")?;
            let a = self.ty()?;
            self.sym(".")?;
            return Ok(Term::Lam(x, a, Box::new(self.expr()?)));
        }
        if self.is_kw("if") {
            self.pos += 1;
            let c = self.expr()?;
            self.kw("then")?;
            let a = self.expr()?;
            self.kw("else")?;
            let b = self.expr()?;
            return Ok(Term::ite(c, a, b));
        }
        if self.is_kw("let") {
            self.pos += 1;
            let boxed = self.is_kw("box");
            if boxed {
                self.pos += 1;
            }
            let x = self.name()?;
            self.sym("=")?;
            let m = self.expr()?;
            self.kw("in")?;
            let n = self.expr()?;
            return Ok(if boxed {
                Term::LetBox(x, Box::new(m), Box::new(n))
            } else {
                Term::Let(x, Box::new(m), Box::new(n))
            });
        }
        if self.is_kw("case") {
            self.pos += 1;
            let m = self.expr()?;
            self.kw("of")?;
            self.kw("inl")?;
            let x = self.name()?;
            self.sym("=>")?;
            let n = self.expr()?;
            self.sym("|")?;
            self.kw("inr")?;
            let y = self.name()?;
            self.sym("=>")?;
            let p = self.expr()?;
            return Ok(Term::Case(Box::new(m), x, Box::new(n), y, Box::new(p)));
        }
        self.app()
    }

    fn starts_prefix(&self) -> bool {
        match self.peek() {
            Tok::Sym(s) => *s == "(",
            Tok::Ident(s) => {
                matches!(
                    s.as_str(),
                    "fst"
                        | "snd"
                        | "inl"
                        | "inr"
                        | "ret"
                        | "box"
                        | "seal"
                        | "unseal"
                        | "unit"
                        | "tt"
                        | "ff"
                ) || !KEYWORDS.contains(&s.as_str())
            }
            Tok::Eof => false,
        }
    }

    fn app(&mut self) -> PResult<Term> {
        let mut f = self.prefix()?;
        while self.starts_prefix() {
            f = Term::app(f, self.prefix()?);
        }
        Ok(f)
    }

    fn prefix(&mut self) -> PResult<Term> {
        let kw = match self.peek() {
            Tok::Ident(s) => s.clone(),
            _ => return self.atom(),
        };
        let unary: Option<fn(Term) -> Term> = match kw.as_str() {
            "fst" => Some(Term::fst),
            "snd" => Some(Term::snd),
            "inl" => Some(Term::inl),
            "inr" => Some(Term::inr),
            "box" => Some(Term::boxi),
            _ => None,
        };
        if let Some(mk) = unary {
            self.pos += 1;
            return Ok(mk(self.prefix()?));
        }
        match kw.as_str() {
            "ret" => {
                self.pos += 1;
                if self.is_sym("[") {
                    let l = self.label_brackets()?;
                    Ok(Term::ret_l(l, self.prefix()?))
                } else {
                    Ok(Term::ret(self.prefix()?))
                }
            }
            "seal" => {
                self.pos += 1;
                let l = self.label_brackets()?;
                Ok(Term::seal(l, self.prefix()?))
            }
            "unseal" => {
                self.pos += 1;
                let l = self.label_brackets()?;
                Ok(Term::unseal(l, self.prefix()?))
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> PResult<Term> {
        if self.is_sym("(") {
            self.pos += 1;
            let m = self.expr()?;
            if self.is_sym(",") {
                self.pos += 1;
                let n = self.expr()?;
                self.sym(")")?;
                return Ok(Term::pair(m, n));
            }
            if self.is_sym(":") {
                self.pos += 1;
                let a = self.ty()?;
                self.sym(")")?;
                return Ok(Term::ann(m, a));
            }
            self.sym(")")?;
            return Ok(m);
        }
        for (k, t) in [("unit", Term::Unit), ("tt", Term::TT), ("ff", Term::FF)] {
            if self.is_kw(k) {
                self.pos += 1;
                return Ok(t);
            }
        }
        Ok(Term::Var(self.name()?))
    }
}

pub fn parse_type(src: &str) -> Result<Type, ParseError> {
    let mut p = Parser {
        toks: lex(src)?,
        pos: 0,
    };
    let a = p.ty()?;
    p.eof()?;
    Ok(a)
}

pub fn parse_term(src: &str) -> Result<Term, ParseError> {
    let mut p = Parser {
        toks: lex(src)?,
        pos: 0,
    };
    let m = p.expr()?;
    p.eof()?;
    Ok(freshen(&m))
}

/// Renames binders apart, keeping free variables fixed.
pub fn freshen(m: &Term) -> Term {
    let mut used: BTreeSet<Name> = m.free_vars();
    go(m, &mut HashMap::new(), &mut used)
}

pub(crate) fn fresh_name(base: &str, avoid: &dyn Fn(&str) -> bool) -> Name {
    let mut n = base.to_string();
    while avoid(&n) {
        n.push('\'');
    }
    n
}

fn go(m: &Term, env: &mut HashMap<Name, Name>, used: &mut BTreeSet<Name>) -> Term {
    fn bind(
        x: &Name,
        body: &Term,
        env: &mut HashMap<Name, Name>,
        used: &mut BTreeSet<Name>,
    ) -> (Name, Term) {
        let fresh = fresh_name(x, &|n| used.contains(n));
        used.insert(fresh.clone());
        let prev = env.insert(x.clone(), fresh.clone());
        let b = go(body, env, used);
        match prev {
            Some(p) => env.insert(x.clone(), p),
            None => env.remove(x),
        };
        (fresh, b)
    }
    let bx = Box::new;
    match m {
        Term::Var(x) => Term::Var(env.get(x).cloned().unwrap_or_else(|| x.clone())),
        Term::Lam(x, a, b) => {
            let (x, b) = bind(x, b, env, used);
            Term::Lam(x, a.clone(), bx(b))
        }
        Term::Let(x, m1, n) => {
            let m1 = go(m1, env, used);
            let (x, n) = bind(x, n, env, used);
            Term::Let(x, bx(m1), bx(n))
        }
        Term::LetBox(x, m1, n) => {
            let m1 = go(m1, env, used);
            let (x, n) = bind(x, n, env, used);
            Term::LetBox(x, bx(m1), bx(n))
        }
        Term::Case(s, x, n, y, p) => {
            let s = go(s, env, used);
            let (x, n) = bind(x, n, env, used);
            let (y, p) = bind(y, p, env, used);
            Term::Case(bx(s), x, bx(n), y, bx(p))
        }
        _ => m.map_children(&mut |t| go(t, env, used), false),
    }
}
