//! Recursive-descent parser.
//!
//! ```text
//! formula  = conj ;
//! conj     = atomexp { "&" atomexp } ;
//! atomexp  = believes | "!" atomexp | atom | "(" formula ")" ;
//! believes = "B" "[" name "," name "," rational "]" "(" formula ")" ;
//! atom     = "true" | ident ;
//! name     = ident | digits ;
//! rational = ["-"] digits [ "/" digits ] ;
//! ```

use std::fmt;

use super::Formula;
use crate::error::Error;
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    /// Byte offset into the input.
    pub offset: usize,
    pub expected: Vec<&'static str>,
    pub found: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at byte {}: expected {}, found {}", self.offset, self.expected.join(" or "), self.found)
    }
}

impl std::error::Error for ParseError {}

pub fn parse_formula(text: &str) -> Result<Formula, Error> {
    let mut p = Parser { src: text.as_bytes(), text, pos: 0 };
    let f = p.formula()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error(vec!["&", "end of input"]).into());
    }
    Ok(f)
}

struct Parser<'a> {
    src: &'a [u8],
    text: &'a str,
    pos: usize,
}

fn is_ident_start(b: u8) -> bool {
    b.is_ascii_alphabetic() || b == b'_'
}

fn is_ident_char(b: u8) -> bool {
    b.is_ascii_alphanumeric() || b == b'_'
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn error(&self, expected: Vec<&'static str>) -> ParseError {
        let found = match self.text[self.pos..].chars().next() {
            Some(c) => format!("`{c}`"),
            None => "end of input".to_string(),
        };
        ParseError { offset: self.pos, expected, found }
    }

    fn expect(&mut self, byte: u8, name: &'static str) -> Result<(), ParseError> {
        if self.peek() == Some(byte) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(vec![name]))
        }
    }

    fn formula(&mut self) -> Result<Formula, Error> {
        let first = self.atomexp()?;
        let mut parts = vec![first];
        while self.peek() == Some(b'&') {
            self.pos += 1;
            parts.push(self.atomexp()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { Formula::And(parts) })
    }

    fn atomexp(&mut self) -> Result<Formula, Error> {
        match self.peek() {
            Some(b'!') => {
                self.pos += 1;
                Ok(Formula::not(self.atomexp()?))
            }
            Some(b'(') => {
                self.pos += 1;
                let f = self.formula()?;
                self.expect(b')', "`)`")?;
                Ok(f)
            }
            Some(b) if is_ident_start(b) => {
                let word = self.ident();
                if word == "B" && self.peek() == Some(b'[') {
                    return self.believes();
                }
                if word == "true" {
                    return Ok(Formula::Top);
                }
                Ok(Formula::Prop(word.to_string()))
            }
            _ => Err(self.error(vec!["`!`", "`(`", "`B[`", "`true`", "identifier"]).into()),
        }
    }

    fn ident(&mut self) -> &'a str {
        let start = self.pos;
        while self.pos < self.src.len() && is_ident_char(self.src[self.pos]) {
            self.pos += 1;
        }
        &self.text[start..self.pos]
    }

    fn name(&mut self) -> Result<String, ParseError> {
        match self.peek() {
            Some(b) if is_ident_char(b) => Ok(self.ident().to_string()),
            _ => Err(self.error(vec!["identifier"])),
        }
    }

    fn digits(&mut self) -> Result<&'a str, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error(vec!["digits"]));
        }
        Ok(&self.text[start..self.pos])
    }

    fn rational(&mut self) -> Result<Rational, Error> {
        self.skip_ws();
        let start = self.pos;
        let negative = self.peek() == Some(b'-');
        if negative {
            self.pos += 1;
        }
        let num = self.digits()?;
        let den = if self.peek() == Some(b'/') {
            self.pos += 1;
            let d = self.digits()?;
            if d.bytes().all(|b| b == b'0') {
                self.pos -= d.len();
                return Err(self.error(vec!["positive integer"]).into());
            }
            d
        } else {
            "1"
        };
        let text = format!("{}{num}/{den}", if negative { "-" } else { "" });
        let value: Rational = text.parse().map_err(|_| {
            Error::from(ParseError { offset: start, expected: vec!["rational"], found: text.clone() })
        })?;
        if !value.is_probability() {
            return Err(Error::ThresholdOutOfRange(value.to_string()));
        }
        Ok(value)
    }

    fn believes(&mut self) -> Result<Formula, Error> {
        self.expect(b'[', "`[`")?;
        let player = self.name()?;
        self.expect(b',', "`,`")?;
        let event = self.name()?;
        self.expect(b',', "`,`")?;
        let threshold = self.rational()?;
        self.expect(b']', "`]`")?;
        self.expect(b'(', "`(`")?;
        let body = self.formula()?;
        self.expect(b')', "`)`")?;
        Ok(Formula::Believes { player, event, threshold, body: Box::new(body) })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn believes_conjunction() {
        let f = parse_formula("B[1,All,1/2](p & !q)").unwrap();
        assert_eq!(
            f,
            Formula::believes("1", "All", q(1, 2), Formula::and(vec![Formula::prop("p"), Formula::not(Formula::prop("q"))]))
        );
    }

    #[test]
    fn keywords() {
        assert_eq!(parse_formula("true").unwrap(), Formula::Top);
        assert_eq!(parse_formula("truth").unwrap(), Formula::prop("truth"));
        assert_eq!(parse_formula("B").unwrap(), Formula::prop("B"));
    }

    #[test]
    fn threshold_out_of_range() {
        assert!(matches!(parse_formula("B[1,All,3/2](p)"), Err(Error::ThresholdOutOfRange(_))));
        assert!(matches!(parse_formula("B[1,All,-1/2](p)"), Err(Error::ThresholdOutOfRange(_))));
    }

    #[test]
    fn precedence_and_flattening() {
        let f = parse_formula("!p & q & r").unwrap();
        assert_eq!(
            f,
            Formula::and(vec![Formula::not(Formula::prop("p")), Formula::prop("q"), Formula::prop("r")])
        );
        let nested = parse_formula("(p & q) & r").unwrap();
        assert_eq!(
            nested,
            Formula::and(vec![Formula::and(vec![Formula::prop("p"), Formula::prop("q")]), Formula::prop("r")])
        );
        assert_eq!(nested.to_string(), "(p & q) & r");
    }

    #[test]
    fn whitespace_is_insignificant() {
        let a = parse_formula("B [ 1 , All , 1 / 3 ] ( ! p )").unwrap();
        assert_eq!(a, parse_formula("B[1,All,1/3](!p)").unwrap());
    }

    #[test]
    fn error_offsets() {
        match parse_formula("p & ") {
            Err(Error::Parse(e)) => {
                assert_eq!(e.offset, 4);
                assert!(e.expected.contains(&"identifier"));
            }
            other => panic!("{other:?}"),
        }
        match parse_formula("p q") {
            Err(Error::Parse(e)) => assert_eq!(e.offset, 2),
            other => panic!("{other:?}"),
        }
        match parse_formula("B[1,All,1/0](p)") {
            Err(Error::Parse(e)) => assert_eq!(e.offset, 10),
            other => panic!("{other:?}"),
        }
        assert!(parse_formula("(p").is_err());
        assert!(parse_formula("B[1,All](p)").is_err());
    }

    #[test]
    fn display_round_trips() {
        for s in [
            "true",
            "!!p",
            "!(p & q)",
            "B[1,All,1/2](p & !q) & B[2,B1,0](true)",
            "B[a_1,E,1](B[2,E,3/4](!(x & y)))",
            "(p & q) & !(r & (s & t))",
        ] {
            let f = parse_formula(s).unwrap();
            assert_eq!(parse_formula(&f.to_string()).unwrap(), f, "{s}");
        }
    }
}
