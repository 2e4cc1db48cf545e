//! The finitary conditional belief logic: propositions, `true`, negation,
//! finite conjunction and the operator `B[j,B,q](φ)` ("player `j`,
//! conditional on `B`, assigns probability at least `q` to `φ`").
//!
//! Implication and disjunction are not primitive; write `!(p & !q)` and
//! `!(!p & !q)`.

mod eval;
mod parse;

use std::fmt;

use crate::rational::Rational;

pub use eval::{check, evaluate, Verdict};
pub use parse::{parse_formula, ParseError};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Top,
    Prop(String),
    Not(Box<Formula>),
    /// At least two conjuncts.
    And(Vec<Formula>),
    Believes { player: String, event: String, threshold: Rational, body: Box<Formula> },
}

impl Formula {
    pub fn prop(name: impl Into<String>) -> Self {
        Formula::Prop(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    /// Panics with fewer than two conjuncts.
    pub fn and(parts: Vec<Formula>) -> Self {
        assert!(parts.len() >= 2, "conjunction needs at least two conjuncts");
        Formula::And(parts)
    }

    pub fn believes(player: impl Into<String>, event: impl Into<String>, threshold: Rational, body: Formula) -> Self {
        Formula::Believes { player: player.into(), event: event.into(), threshold, body: Box::new(body) }
    }

    /// Nesting depth; atoms have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Formula::Top | Formula::Prop(_) => 0,
            Formula::Not(f) => 1 + f.depth(),
            Formula::And(fs) => 1 + fs.iter().map(Formula::depth).max().unwrap_or(0),
            Formula::Believes { body, .. } => 1 + body.depth(),
        }
    }

    fn fmt_operand(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::And(_) => write!(f, "({self})"),
            _ => write!(f, "{self}"),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Top => f.write_str("true"),
            Formula::Prop(p) => f.write_str(p),
            Formula::Not(inner) => {
                f.write_str("!")?;
                inner.fmt_operand(f)
            }
            Formula::And(parts) => {
                for (i, part) in parts.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" & ")?;
                    }
                    part.fmt_operand(f)?;
                }
                Ok(())
            }
            Formula::Believes { player, event, threshold, body } => {
                write!(f, "B[{player},{event},{threshold}]({body})")
            }
        }
    }
}
