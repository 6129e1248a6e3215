//! A small expression language for even lattices, e.g. `2U(12)+<-2>`.
//!
//! ```text
//! expr := term ("+" term)*
//! term := [count] atom ["(" signed-integer ")"]
//! atom := "U" | "E8" | "<" signed-even-integer ">"
//! ```
//!
//! Whitespace is ignored. `⟨n⟩` and `⊕` are accepted on input as synonyms
//! for `<n>` and `+`; the printer only emits ASCII.

use std::fmt;

use thiserror::Error;

use crate::lattice::Lattice;
use crate::scalar::{int, Int};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Atom {
    /// The hyperbolic plane.
    U,
    /// The positive-definite E8 root lattice.
    E8,
    /// Rank-one lattice `⟨d⟩`, `d` even and nonzero.
    Diag(i64),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum LatticeExpr {
    Sum(Vec<LatticeExpr>),
    Repeat(u32, Box<LatticeExpr>),
    Atom(Atom),
    Scale(Box<LatticeExpr>, i64),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{message} at byte {offset} (expected {})", expected.join(" | "))]
pub struct ParseError {
    pub offset: usize,
    pub expected: Vec<&'static str>,
    pub message: String,
}

impl LatticeExpr {
    pub fn atom(a: Atom) -> Self {
        LatticeExpr::Atom(a)
    }

    pub fn repeat(n: u32, e: LatticeExpr) -> Self {
        LatticeExpr::Repeat(n, Box::new(e))
    }

    pub fn scale(e: LatticeExpr, k: i64) -> Self {
        LatticeExpr::Scale(Box::new(e), k)
    }

    /// Canonical form: nested sums flattened, scales pushed onto atoms (and
    /// folded into diagonal entries), unit scales and counts dropped, and
    /// adjacent identical terms merged into repeats.
    pub fn normalize(&self) -> LatticeExpr {
        let mut terms: Vec<(u32, LatticeExpr)> = Vec::new();
        collect_terms(self, 1, 1, &mut terms);
        let mut merged: Vec<(u32, LatticeExpr)> = Vec::new();
        for (n, base) in terms {
            match merged.last_mut() {
                Some((m, prev)) if *prev == base => *m += n,
                _ => merged.push((n, base)),
            }
        }
        let mut out: Vec<LatticeExpr> = merged
            .into_iter()
            .map(|(n, b)| if n == 1 { b } else { LatticeExpr::repeat(n, b) })
            .collect();
        if out.len() == 1 {
            out.pop().unwrap()
        } else {
            LatticeExpr::Sum(out)
        }
    }

    /// Builds the Gram matrix. Repeats and sums are block-diagonal; the label
    /// is the canonical printed form.
    pub fn elaborate<T: Int>(&self) -> Lattice<T> {
        self.build::<T>().with_label(format(self))
    }

    fn build<T: Int>(&self) -> Lattice<T> {
        match self {
            LatticeExpr::Atom(Atom::U) => Lattice::hyperbolic_plane(),
            LatticeExpr::Atom(Atom::E8) => Lattice::e8(),
            LatticeExpr::Atom(Atom::Diag(d)) => {
                Lattice::diagonal(int(*d)).expect("diagonal entries are validated even")
            }
            LatticeExpr::Scale(e, k) => {
                e.build::<T>().rescale(&int(*k)).expect("scale factors are validated nonzero")
            }
            LatticeExpr::Repeat(n, e) => {
                let one = e.build::<T>();
                (1..*n).fold(one.clone(), |acc, _| acc.direct_sum(&one))
            }
            LatticeExpr::Sum(items) => {
                let mut it = items.iter();
                match it.next() {
                    None => Lattice::zero(),
                    Some(first) => it.fold(first.build::<T>(), |acc, e| acc.direct_sum(&e.build())),
                }
            }
        }
    }
}

fn collect_terms(e: &LatticeExpr, count: u32, scale: i64, out: &mut Vec<(u32, LatticeExpr)>) {
    match e {
        LatticeExpr::Sum(items) => {
            for _ in 0..count {
                for item in items {
                    collect_terms(item, 1, scale, out);
                }
            }
        }
        LatticeExpr::Repeat(n, inner) => collect_terms(inner, count * n, scale, out),
        LatticeExpr::Scale(inner, k) => collect_terms(inner, count, scale * k, out),
        LatticeExpr::Atom(Atom::Diag(d)) => {
            out.push((count, LatticeExpr::Atom(Atom::Diag(d * scale))));
        }
        LatticeExpr::Atom(a) => {
            let base = LatticeExpr::Atom(a.clone());
            let base = if scale == 1 { base } else { LatticeExpr::scale(base, scale) };
            out.push((count, base));
        }
    }
}

/// Canonical ASCII rendering of the normalized expression.
pub fn format(e: &LatticeExpr) -> String {
    e.normalize().to_string()
}

impl fmt::Display for LatticeExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeExpr::Atom(Atom::U) => write!(f, "U"),
            LatticeExpr::Atom(Atom::E8) => write!(f, "E8"),
            LatticeExpr::Atom(Atom::Diag(d)) => write!(f, "<{d}>"),
            LatticeExpr::Scale(e, k) => write!(f, "{e}({k})"),
            LatticeExpr::Repeat(n, e) => write!(f, "{n}{e}"),
            LatticeExpr::Sum(items) => {
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        write!(f, "+")?;
                    }
                    write!(f, "{item}")?;
                }
                Ok(())
            }
        }
    }
}

/// Parses an expression. The result mirrors the source structure; call
/// [`LatticeExpr::normalize`] for the canonical form.
pub fn parse(text: &str) -> Result<LatticeExpr, ParseError> {
    let mut p = Parser { src: text, pos: 0 };
    let mut terms = vec![p.term()?];
    loop {
        p.skip_ws();
        if p.eat('+') || p.eat('⊕') {
            terms.push(p.term()?);
        } else if p.at_end() {
            break;
        } else {
            return Err(p.error(&["+", "end of input"], "unexpected character"));
        }
    }
    Ok(if terms.len() == 1 { terms.pop().unwrap() } else { LatticeExpr::Sum(terms) })
}

/// Parses and elaborates in one step.
pub fn parse_lattice<T: Int>(text: &str) -> Result<Lattice<T>, ParseError> {
    Ok(parse(text)?.elaborate())
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos == self.src.len()
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.rest().starts_with(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn error(&self, expected: &[&'static str], message: &str) -> ParseError {
        ParseError { offset: self.pos, expected: expected.to_vec(), message: message.to_string() }
    }

    fn error_at(&self, offset: usize, expected: &[&'static str], message: &str) -> ParseError {
        ParseError { offset, expected: expected.to_vec(), message: message.to_string() }
    }

    /// Optionally signed decimal literal.
    fn integer(&mut self, signed: bool) -> Option<Result<i64, ParseError>> {
        self.skip_ws();
        let start = self.pos;
        let bytes = self.src.as_bytes();
        let mut end = start;
        if signed && end < bytes.len() && (bytes[end] == b'-' || bytes[end] == b'+') {
            end += 1;
        }
        let digits_start = end;
        while end < bytes.len() && bytes[end].is_ascii_digit() {
            end += 1;
        }
        if end == digits_start {
            return None;
        }
        self.pos = end;
        Some(
            self.src[start..end]
                .parse::<i64>()
                .map_err(|_| self.error_at(start, &["integer"], "integer literal out of range")),
        )
    }

    fn term(&mut self) -> Result<LatticeExpr, ParseError> {
        self.skip_ws();
        let count_at = self.pos;
        let count = match self.integer(false) {
            Some(n) => {
                let n = n?;
                if n == 0 {
                    return Err(self.error_at(count_at, &["positive count"], "repeat count must be at least 1"));
                }
                Some(u32::try_from(n).map_err(|_| self.error_at(count_at, &["count"], "repeat count too large"))?)
            }
            None => None,
        };
        let atom = self.atom()?;
        let mut node = LatticeExpr::Atom(atom);
        if self.eat('(') {
            let at = self.pos;
            let k = match self.integer(true) {
                Some(k) => k?,
                None => return Err(self.error(&["signed integer"], "missing scale factor")),
            };
            if k == 0 {
                return Err(self.error_at(at, &["nonzero integer"], "scale factor must be nonzero"));
            }
            if !self.eat(')') {
                return Err(self.error(&[")"], "unclosed scale"));
            }
            node = LatticeExpr::scale(node, k);
        }
        Ok(match count {
            Some(n) => LatticeExpr::repeat(n, node),
            None => node,
        })
    }

    fn atom(&mut self) -> Result<Atom, ParseError> {
        self.skip_ws();
        const EXPECTED: &[&str] = &["U", "E8", "<"];
        let rest = self.rest();
        if rest.starts_with("E8") {
            self.pos += 2;
            return Ok(Atom::E8);
        }
        if rest.starts_with('U') {
            self.pos += 1;
            return Ok(Atom::U);
        }
        let close = if self.eat('<') {
            '>'
        } else if self.eat('⟨') {
            '⟩'
        } else {
            return Err(self.error(EXPECTED, "expected a lattice atom"));
        };
        let at = self.pos;
        let d = match self.integer(true) {
            Some(d) => d?,
            None => return Err(self.error(&["signed even integer"], "missing diagonal entry")),
        };
        if d == 0 || d % 2 != 0 {
            return Err(self.error_at(at, &["nonzero even integer"], "diagonal entry must be even and nonzero"));
        }
        if !self.eat(close) {
            return Err(self.error(&[">"], "unclosed diagonal"));
        }
        Ok(Atom::Diag(d))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Lattice;

    fn u() -> LatticeExpr {
        LatticeExpr::atom(Atom::U)
    }

    #[test]
    fn parses_family_expressions() {
        assert_eq!(
            parse("2U(12)+<-2>").unwrap(),
            LatticeExpr::Sum(vec![
                LatticeExpr::repeat(2, LatticeExpr::scale(u(), 12)),
                LatticeExpr::atom(Atom::Diag(-2)),
            ])
        );
        assert_eq!(parse("U").unwrap(), u());
        assert_eq!(
            parse("2U+<-8>").unwrap(),
            LatticeExpr::Sum(vec![LatticeExpr::repeat(2, u()), LatticeExpr::atom(Atom::Diag(-8))])
        );
        assert_eq!(parse(" 2 U ( 12 ) ⊕ ⟨-2⟩ ").unwrap(), parse("2U(12)+<-2>").unwrap());
    }

    #[test]
    fn elaborates() {
        let l: Lattice<i64> = parse("<-2>").unwrap().elaborate();
        assert_eq!(l.gram(), &vec![vec![-2]]);
        let l: Lattice<i64> = parse("U(7)").unwrap().elaborate();
        assert_eq!(l.gram(), &vec![vec![0, 7], vec![7, 0]]);
        let l: Lattice<i64> = parse("E8(-2)").unwrap().elaborate();
        let e8 = Lattice::<i64>::e8();
        for i in 0..8 {
            for j in 0..8 {
                assert_eq!(l.gram()[i][j], -2 * e8.gram()[i][j]);
            }
        }
        assert_eq!(l.label(), Some("E8(-2)"));
    }

    #[test]
    fn rejects_bad_input() {
        let e = parse("U+<3>").unwrap_err();
        assert_eq!(e.offset, 3);
        assert!(parse("0U").is_err());
        assert!(parse("U(0)").is_err());
        assert!(parse("U+").is_err());
        assert!(parse("V").unwrap_err().expected.contains(&"E8"));
        assert!(parse("<-2").is_err());
        assert!(parse("U U").is_err());
    }

    #[test]
    fn canonical_printing() {
        for s in ["2U(12)+<-2>", "U", "2U+<-8>", "U(2)+U+E8(-2)"] {
            assert_eq!(format(&parse(s).unwrap()), s);
        }
        assert_eq!(format(&parse("U+U+<-2>(3)").unwrap()), "2U+<-6>");
        assert_eq!(format(&parse("U(1)").unwrap()), "U");
    }
}
