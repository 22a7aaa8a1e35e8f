//! Carrier elements.
//!
//! Text syntax: atoms are tokens, `*` is the star, `(a, b)` a pair, `inl e` / `inr e`
//! tagged values, `[a -> b, ...]` a function table and `{a, b}` an equivalence class.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::label::is_token;
use super::CSetError;

/// Variant order is load-bearing: the derived `Ord` gives
/// Atom < Star < Pair < Inl < Inr < Fun < Class.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Element {
    Atom(Arc<str>),
    Star,
    Pair(Arc<Element>, Arc<Element>),
    Inl(Arc<Element>),
    Inr(Arc<Element>),
    /// Graph of a total function, sorted by argument.
    Fun(Arc<[(Element, Element)]>),
    /// Members of an equivalence class, sorted and deduplicated.
    Class(Arc<[Element]>),
}

impl Element {
    pub fn atom(name: &str) -> Result<Self, CSetError> {
        if is_token(name) && name != "inl" && name != "inr" {
            Ok(Element::Atom(Arc::from(name)))
        } else {
            Err(CSetError::ElementParse {
                pos: 0,
                msg: format!("invalid atom `{name}`"),
            })
        }
    }

    pub fn pair(a: Element, b: Element) -> Self {
        Element::Pair(Arc::new(a), Arc::new(b))
    }

    pub fn inl(a: Element) -> Self {
        Element::Inl(Arc::new(a))
    }

    pub fn inr(a: Element) -> Self {
        Element::Inr(Arc::new(a))
    }

    /// Builds a function table, sorting by argument. Later duplicates are dropped.
    pub fn fun(mut table: Vec<(Element, Element)>) -> Self {
        table.sort_by(|x, y| x.0.cmp(&y.0));
        table.dedup_by(|x, y| x.0 == y.0);
        Element::Fun(table.into())
    }

    pub fn class(mut members: Vec<Element>) -> Self {
        members.sort();
        members.dedup();
        Element::Class(members.into())
    }

    pub fn tt() -> Self {
        Element::Atom(Arc::from("tt"))
    }

    pub fn ff() -> Self {
        Element::Atom(Arc::from("ff"))
    }

    pub fn as_pair(&self) -> Option<(&Element, &Element)> {
        match self {
            Element::Pair(a, b) => Some((a, b)),
            _ => None,
        }
    }

    /// Looks up the value of a function table at `arg`.
    pub fn apply(&self, arg: &Element) -> Option<&Element> {
        match self {
            Element::Fun(t) => t
                .binary_search_by(|(a, _)| a.cmp(arg))
                .ok()
                .map(|i| &t[i].1),
            _ => None,
        }
    }

    pub fn parse(text: &str) -> Result<Self, CSetError> {
        let mut p = ElemParser {
            src: text.as_bytes(),
            pos: 0,
        };
        let e = p.element()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.err("trailing input"));
        }
        Ok(e)
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Atom(a) => f.write_str(a),
            Element::Star => f.write_str("*"),
            Element::Pair(a, b) => write!(f, "({a}, {b})"),
            Element::Inl(a) => write!(f, "inl {a}"),
            Element::Inr(a) => write!(f, "inr {a}"),
            Element::Fun(t) => {
                f.write_str("[")?;
                for (i, (a, b)) in t.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a} -> {b}")?;
                }
                f.write_str("]")
            }
            Element::Class(m) => {
                f.write_str("{")?;
                for (i, a) in m.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str("}")
            }
        }
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Element {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Element {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Element::parse(&s).map_err(serde::de::Error::custom)
    }
}

struct ElemParser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl ElemParser<'_> {
    fn err(&self, msg: &str) -> CSetError {
        CSetError::ElementParse {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, s: &str) -> Result<(), CSetError> {
        self.skip_ws();
        if self.src[self.pos..].starts_with(s.as_bytes()) {
            self.pos += s.len();
            Ok(())
        } else {
            Err(self.err(&format!("expected `{s}`")))
        }
    }

    fn token(&mut self) -> &str {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("")
    }

    /// Parses a comma-separated sequence up to `close`, allowing an empty one.
    fn seq<T>(
        &mut self,
        close: u8,
        mut item: impl FnMut(&mut Self) -> Result<T, CSetError>,
    ) -> Result<Vec<T>, CSetError> {
        let mut out = Vec::new();
        if self.peek() == Some(close) {
            self.pos += 1;
            return Ok(out);
        }
        loop {
            out.push(item(self)?);
            match self.peek() {
                Some(b',') => self.pos += 1,
                Some(c) if c == close => {
                    self.pos += 1;
                    return Ok(out);
                }
                _ => return Err(self.err("expected `,` or closing bracket")),
            }
        }
    }

    fn element(&mut self) -> Result<Element, CSetError> {
        match self.peek() {
            Some(b'*') => {
                self.pos += 1;
                Ok(Element::Star)
            }
            Some(b'(') => {
                self.pos += 1;
                let a = self.element()?;
                self.expect(",")?;
                let b = self.element()?;
                self.expect(")")?;
                Ok(Element::pair(a, b))
            }
            Some(b'[') => {
                self.pos += 1;
                let table = self.seq(b']', |p| {
                    let a = p.element()?;
                    p.expect("->")?;
                    let b = p.element()?;
                    Ok((a, b))
                })?;
                Ok(Element::fun(table))
            }
            Some(b'{') => {
                self.pos += 1;
                let members = self.seq(b'}', |p| p.element())?;
                Ok(Element::class(members))
            }
            Some(_) => {
                let start = self.pos;
                let tok = self.token().to_string();
                match tok.as_str() {
                    "" => Err(self.err("expected element")),
                    "inl" => Ok(Element::inl(self.element()?)),
                    "inr" => Ok(Element::inr(self.element()?)),
                    _ => Element::atom(&tok).map_err(|_| CSetError::ElementParse {
                        pos: start,
                        msg: format!("invalid atom `{tok}`"),
                    }),
                }
            }
            None => Err(self.err("unexpected end of input")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn variant_order() {
        let xs = [
            Element::tt(),
            Element::Star,
            Element::pair(Element::Star, Element::Star),
            Element::inl(Element::Star),
            Element::inr(Element::Star),
            Element::fun(vec![]),
            Element::class(vec![]),
        ];
        for w in xs.windows(2) {
            assert!(w[0] < w[1], "{:?} < {:?}", w[0], w[1]);
        }
    }

    #[test]
    fn fun_table_is_sorted() {
        let f = Element::fun(vec![
            (Element::tt(), Element::ff()),
            (Element::ff(), Element::tt()),
        ]);
        assert_eq!(f.to_string(), "[ff -> tt, tt -> ff]");
        assert_eq!(f.apply(&Element::tt()), Some(&Element::ff()));
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(Element::parse("(a, ").is_err());
        assert!(Element::parse("inl").is_err());
        assert!(Element::parse("a b").is_err());
    }

    pub(crate) fn arb_element() -> impl Strategy<Value = Element> {
        let leaf = prop_oneof![
            "[a-z][a-z0-9_]{0,3}"
                .prop_filter("reserved", |s| s != "inl" && s != "inr")
                .prop_map(|s| Element::atom(&s).unwrap()),
            Just(Element::Star),
        ];
        leaf.prop_recursive(3, 24, 4, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Element::pair(a, b)),
                inner.clone().prop_map(Element::inl),
                inner.clone().prop_map(Element::inr),
                prop::collection::vec((inner.clone(), inner.clone()), 0..3).prop_map(Element::fun),
                prop::collection::vec(inner, 0..3).prop_map(Element::class),
            ]
        })
    }

    proptest! {
        #[test]
        fn print_parse_round_trip(e in arb_element()) {
            let back = Element::parse(&e.to_string()).unwrap();
            prop_assert_eq!(back, e);
        }
    }
}
