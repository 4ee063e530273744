//! Recursive-descent parser for formulas and sequents.

use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::formula::{Formula, ParseError};
use crate::sequent::Sequent;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Atom(Arc<str>),
    Bot,
    Top,
    Not,
    BoxOp,
    DiaOp,
    And,
    Or,
    Imp,
    Iff,
    LParen,
    RParen,
    Comma,
    Turnstile,
    LBrack,
    RBrack,
    LAngle,
    RAngle,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Atom(p) => alloc::format!("atom `{p}`"),
            Tok::Bot => "`bot`".into(),
            Tok::Top => "`top`".into(),
            Tok::Not => "`~`".into(),
            Tok::BoxOp => "`[]`".into(),
            Tok::DiaOp => "`<>`".into(),
            Tok::And => "`&`".into(),
            Tok::Or => "`\\/`".into(),
            Tok::Imp => "`->`".into(),
            Tok::Iff => "`<->`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Turnstile => "`=>`".into(),
            Tok::LBrack => "`[`".into(),
            Tok::RBrack => "`]`".into(),
            Tok::LAngle => "`<`".into(),
            Tok::RAngle => "`>`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    let starts = |i: usize, pat: &str| text[i..].starts_with(pat);
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let (tok, len) = match c {
            b'a'..=b'z' => {
                let end = text[i..]
                    .find(|ch: char| !matches!(ch, 'a'..='z' | '0'..='9' | '_'))
                    .map_or(text.len(), |n| i + n);
                let word = &text[i..end];
                let tok = match word {
                    "bot" => Tok::Bot,
                    "top" => Tok::Top,
                    _ => Tok::Atom(Arc::from(word)),
                };
                (tok, end - i)
            }
            b'~' => (Tok::Not, 1),
            b'&' => (Tok::And, 1),
            b'|' => (Tok::Or, 1),
            b'(' => (Tok::LParen, 1),
            b')' => (Tok::RParen, 1),
            b',' => (Tok::Comma, 1),
            b']' => (Tok::RBrack, 1),
            b'>' => (Tok::RAngle, 1),
            b'\\' if starts(i, "\\/") => (Tok::Or, 2),
            b'-' if starts(i, "->") => (Tok::Imp, 2),
            b'=' if starts(i, "=>") => (Tok::Turnstile, 2),
            b'[' if starts(i, "[]") => (Tok::BoxOp, 2),
            b'[' => (Tok::LBrack, 1),
            b'<' if starts(i, "<->") => (Tok::Iff, 3),
            b'<' if starts(i, "<>") => (Tok::DiaOp, 2),
            b'<' => (Tok::LAngle, 1),
            _ => {
                let found = text[i..].chars().next().map_or_else(String::new, |ch| ch.to_string());
                return Err(ParseError {
                    offset: i,
                    expected: vec!["a token"],
                    found: alloc::format!("`{found}`"),
                });
            }
        };
        out.push((i, tok));
        i += len;
    }
    out.push((text.len(), Tok::Eof));
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

impl Parser {
    fn new(text: &str) -> Result<Self, ParseError> {
        Ok(Parser { toks: lex(text)?, pos: 0 })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].1.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == t {
            self.bump();
            true
        } else {
            false
        }
    }

    fn error(&self, expected: Vec<&'static str>) -> ParseError {
        ParseError {
            offset: self.toks[self.pos].0,
            expected,
            found: self.peek().describe(),
        }
    }

    fn expect(&mut self, t: Tok, name: &'static str) -> Result<(), ParseError> {
        if self.eat(&t) {
            Ok(())
        } else {
            Err(self.error(vec![name]))
        }
    }

    // iff := imp ("<->" iff)?
    fn formula(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.implication()?;
        if self.eat(&Tok::Iff) {
            let rhs = self.formula()?;
            return Ok(Formula::iff(lhs, rhs));
        }
        Ok(lhs)
    }

    fn implication(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.disjunction()?;
        if self.eat(&Tok::Imp) {
            let rhs = self.implication()?;
            return Ok(Formula::imp(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.conjunction()?;
        while self.eat(&Tok::Or) {
            lhs = Formula::or(lhs, self.conjunction()?);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.prefix()?;
        while self.eat(&Tok::And) {
            lhs = Formula::and(lhs, self.prefix()?);
        }
        Ok(lhs)
    }

    fn prefix(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Tok::Not => {
                self.bump();
                Ok(Formula::not(self.prefix()?))
            }
            Tok::BoxOp => {
                self.bump();
                Ok(Formula::boxed(self.prefix()?))
            }
            Tok::DiaOp => {
                self.bump();
                Ok(Formula::dia(self.prefix()?))
            }
            Tok::Atom(p) => {
                self.bump();
                Ok(Formula::Atom(p))
            }
            Tok::Bot => {
                self.bump();
                Ok(Formula::Bot)
            }
            Tok::Top => {
                self.bump();
                Ok(Formula::Top)
            }
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            _ => Err(self.error(vec!["atom", "`bot`", "`top`", "`~`", "`[]`", "`<>`", "`(`"])),
        }
    }

    fn sequent(&mut self) -> Result<Sequent, ParseError> {
        let mut s = Sequent::empty();
        if !self.eat(&Tok::Turnstile) {
            loop {
                s.antecedent_mut().insert(self.formula()?);
                if self.eat(&Tok::Turnstile) {
                    break;
                }
                if !self.eat(&Tok::Comma) {
                    return Err(self.error(vec!["`,`", "`=>`"]));
                }
            }
        }
        if matches!(self.peek(), Tok::Eof | Tok::RBrack | Tok::RAngle) {
            return Ok(s);
        }
        loop {
            match self.peek() {
                Tok::LBrack => {
                    self.bump();
                    let inner = self.sequent()?;
                    self.expect(Tok::RBrack, "`]`")?;
                    s.succedent_mut().modal.insert(inner);
                }
                Tok::LAngle => {
                    self.bump();
                    let inner = self.sequent()?;
                    self.expect(Tok::RAngle, "`>`")?;
                    s.succedent_mut().imp.insert(inner);
                }
                _ => {
                    let f = self.formula()?;
                    s.succedent_mut().formulas.insert(f);
                }
            }
            if !self.eat(&Tok::Comma) {
                return Ok(s);
            }
        }
    }

    fn finish(&mut self) -> Result<(), ParseError> {
        if matches!(self.peek(), Tok::Eof) {
            Ok(())
        } else {
            Err(self.error(vec!["end of input"]))
        }
    }
}

pub(crate) fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser::new(text)?;
    let f = p.formula()?;
    p.finish()?;
    Ok(f)
}

pub(crate) fn parse_sequent(text: &str) -> Result<Sequent, ParseError> {
    let mut p = Parser::new(text)?;
    let s = p.sequent()?;
    p.finish()?;
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Formula {
        Formula::atom("p")
    }
    fn q() -> Formula {
        Formula::atom("q")
    }

    #[test]
    fn atomic() {
        assert_eq!(parse_formula("p").unwrap(), p());
        assert_eq!(parse_formula("  x_1 ").unwrap(), Formula::atom("x_1"));
    }

    #[test]
    fn weak_constant_domain_axiom() {
        let f = parse_formula("[](p \\/ q) -> ((<>p -> []q) -> []q)").unwrap();
        let expected = Formula::imp(
            Formula::boxed(Formula::or(p(), q())),
            Formula::imp(
                Formula::imp(Formula::dia(p()), Formula::boxed(q())),
                Formula::boxed(q()),
            ),
        );
        assert_eq!(f, expected);
    }

    #[test]
    fn negation_is_sugar() {
        let f = parse_formula("~[]bot -> []bot").unwrap();
        let bb = Formula::boxed(Formula::Bot);
        assert_eq!(f, Formula::imp(Formula::imp(bb.clone(), Formula::Bot), bb));
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(
            parse_formula("p & q | p -> q").unwrap(),
            Formula::imp(Formula::or(Formula::and(p(), q()), p()), q())
        );
        assert_eq!(
            parse_formula("p -> q -> p").unwrap(),
            Formula::imp(p(), Formula::imp(q(), p()))
        );
        assert_eq!(
            parse_formula("p & q & p").unwrap(),
            Formula::and(Formula::and(p(), q()), p())
        );
        assert_eq!(parse_formula("[]~<>p").unwrap(), Formula::boxed(Formula::not(Formula::dia(p()))));
        assert_eq!(parse_formula("p <-> q").unwrap(), Formula::iff(p(), q()));
    }

    #[test]
    fn errors_carry_offset_and_expectations() {
        let e = parse_formula("p -> ").unwrap_err();
        assert_eq!(e.offset, 5);
        assert!(e.expected.contains(&"atom"));
        let e = parse_formula("(p & q").unwrap_err();
        assert_eq!(e.offset, 6);
        assert_eq!(e.expected, ["`)`"]);
        let e = parse_formula("p q").unwrap_err();
        assert_eq!(e.offset, 2);
        let e = parse_formula("P").unwrap_err();
        assert_eq!(e.offset, 0);
        assert!(parse_formula("").is_err());
        assert!(parse_formula("bot1").is_ok());
    }

    #[test]
    fn sequents() {
        let s = parse_sequent("b => d, [c => d, [e => f], <g => h>], <t => [p => q]>, [m => n]").unwrap();
        assert_eq!(s.succedent().formulas.len(), 1);
        assert_eq!(s.succedent().modal.len(), 2);
        assert_eq!(s.succedent().imp.len(), 1);
        assert_eq!(parse_sequent("=>").unwrap(), Sequent::empty());
        let s = parse_sequent("=> [=>]").unwrap();
        assert_eq!(s.succedent().modal.len(), 1);
        let s = parse_sequent("<>p => <<>p => <>q>").unwrap();
        assert_eq!(s.succedent().imp.len(), 1);
        assert!(parse_sequent("p => [q").is_err());
        assert!(parse_sequent("p q").is_err());
    }
}
