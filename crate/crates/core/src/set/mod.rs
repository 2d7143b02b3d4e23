//! Set-operation expressions over named inequalities.
//!
//! Two surface syntaxes produce the same [`SetExpr`]: postfix, as consumed by
//! the original script (`abc&&`), and an infix dialect (`(a&b)|!c`). A
//! [`SetProgram`] binds the names to inequalities and compiles to a
//! [`crate::Region`].

mod appendix;
mod desmos;
mod program;

use std::fmt;

use thiserror::Error;

use crate::expr::SyntaxError;
use crate::region::RegionError;

pub use appendix::{
    parse_appendix_input, python_list_repr, replay_appendix, AppendixInput, Replay,
};
pub use desmos::{emit_desmos, emit_desmos_with, BodyStyle};
pub use program::{
    compile, load_program, parse_program, Definition, SetProgram, DEFAULT_SHARPNESS,
};

/// Which single letters may name a definition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Alphabet {
    /// `a`-`w`; `x` and `y` are reserved for the coordinates.
    #[default]
    Names,
    /// `a`-`y`, the alphabet of the original postfix script.
    Appendix,
}

impl Alphabet {
    pub fn contains(self, c: char) -> bool {
        match self {
            Alphabet::Names => ('a'..='w').contains(&c),
            Alphabet::Appendix => ('a'..='y').contains(&c),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SetParseError {
    #[error("empty set expression")]
    Empty,
    #[error("operator at position {position} has too few operands")]
    StackUnderflow { position: usize },
    #[error("invalid symbol '{symbol}' at position {position}")]
    InvalidSymbol { position: usize, symbol: char },
    #[error("{count} operands left over after evaluation")]
    LeftoverOperands { count: usize },
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },
}

#[derive(Debug, Error)]
pub enum SetError {
    #[error(transparent)]
    Parse(#[from] SetParseError),
    #[error("line {line}: {message}")]
    FileFormat { line: usize, message: String },
    #[error("undefined name '{0}'")]
    UnresolvedName(char),
    #[error("cannot export {0} to Desmos")]
    UnsupportedNode(&'static str),
    #[error(transparent)]
    Region(#[from] RegionError),
    #[error(transparent)]
    Scalar(#[from] SyntaxError),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// Crisp set expression over single-letter names.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SetExpr {
    Var(char),
    Not(Box<SetExpr>),
    And(Box<SetExpr>, Box<SetExpr>),
    Or(Box<SetExpr>, Box<SetExpr>),
}

impl SetExpr {
    pub fn var(c: char) -> Self {
        SetExpr::Var(c)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(e: SetExpr) -> Self {
        SetExpr::Not(Box::new(e))
    }

    pub fn and(l: SetExpr, r: SetExpr) -> Self {
        SetExpr::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: SetExpr, r: SetExpr) -> Self {
        SetExpr::Or(Box::new(l), Box::new(r))
    }

    /// Names in first-occurrence order.
    pub fn names(&self) -> Vec<char> {
        let mut out = Vec::new();
        self.walk_names(&mut out);
        out
    }

    fn walk_names(&self, out: &mut Vec<char>) {
        match self {
            SetExpr::Var(c) => {
                if !out.contains(c) {
                    out.push(*c);
                }
            }
            SetExpr::Not(e) => e.walk_names(out),
            SetExpr::And(l, r) | SetExpr::Or(l, r) => {
                l.walk_names(out);
                r.walk_names(out);
            }
        }
    }

    /// Crisp evaluation given membership of each name.
    pub fn eval_bool(&self, member: &impl Fn(char) -> bool) -> bool {
        match self {
            SetExpr::Var(c) => member(*c),
            SetExpr::Not(e) => !e.eval_bool(member),
            SetExpr::And(l, r) => l.eval_bool(member) && r.eval_bool(member),
            SetExpr::Or(l, r) => l.eval_bool(member) || r.eval_bool(member),
        }
    }

    pub fn to_postfix(&self) -> String {
        let mut out = String::new();
        self.write_postfix(&mut out);
        out
    }

    fn write_postfix(&self, out: &mut String) {
        match self {
            SetExpr::Var(c) => out.push(*c),
            SetExpr::Not(e) => {
                e.write_postfix(out);
                out.push('!');
            }
            SetExpr::And(l, r) | SetExpr::Or(l, r) => {
                l.write_postfix(out);
                r.write_postfix(out);
                out.push(if matches!(self, SetExpr::And(..)) {
                    '&'
                } else {
                    '|'
                });
            }
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            SetExpr::Or(..) => 1,
            SetExpr::And(..) => 2,
            _ => 3,
        }
    }
}

impl fmt::Display for SetExpr {
    /// Infix form accepted by [`parse_infix`], with minimal parentheses.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = |f: &mut fmt::Formatter<'_>, e: &SetExpr, min: u8| {
            if e.precedence() < min {
                write!(f, "({e})")
            } else {
                write!(f, "{e}")
            }
        };
        match self {
            SetExpr::Var(c) => write!(f, "{c}"),
            SetExpr::Not(e) => {
                write!(f, "!")?;
                side(f, e, 3)
            }
            SetExpr::And(l, r) => {
                side(f, l, 2)?;
                write!(f, "&")?;
                side(f, r, 3)
            }
            SetExpr::Or(l, r) => {
                side(f, l, 1)?;
                write!(f, "|")?;
                side(f, r, 2)
            }
        }
    }
}

/// Postfix over the [`Alphabet::Names`] letters; whitespace is ignored.
pub fn parse_postfix(text: &str) -> Result<SetExpr, SetParseError> {
    parse_postfix_with(text, Alphabet::Names)
}

/// Letters push operands, `&` and `|` pop two and `!` pops one. The first
/// operand popped becomes the right child.
pub fn parse_postfix_with(text: &str, alphabet: Alphabet) -> Result<SetExpr, SetParseError> {
    let mut stack: Vec<SetExpr> = Vec::new();
    for (position, c) in text.char_indices() {
        match c {
            c if c.is_whitespace() => {}
            c if alphabet.contains(c) => stack.push(SetExpr::Var(c)),
            '&' | '|' => {
                let (Some(right), Some(left)) = (stack.pop(), stack.pop()) else {
                    return Err(SetParseError::StackUnderflow { position });
                };
                stack.push(if c == '&' {
                    SetExpr::and(left, right)
                } else {
                    SetExpr::or(left, right)
                });
            }
            '!' => {
                let Some(e) = stack.pop() else {
                    return Err(SetParseError::StackUnderflow { position });
                };
                stack.push(SetExpr::not(e));
            }
            symbol => return Err(SetParseError::InvalidSymbol { position, symbol }),
        }
    }
    match stack.len() {
        0 => Err(SetParseError::Empty),
        1 => Ok(stack.pop().expect("one element")),
        n => Err(SetParseError::LeftoverOperands { count: n - 1 }),
    }
}

pub fn parse_infix(text: &str) -> Result<SetExpr, SetParseError> {
    parse_infix_with(text, Alphabet::Names)
}

/// Infix with `!` (prefix, tightest), then `&`, then `|`; both binary
/// operators are left-associative.
pub fn parse_infix_with(text: &str, alphabet: Alphabet) -> Result<SetExpr, SetParseError> {
    let toks: Vec<(usize, char)> = text
        .char_indices()
        .filter(|(_, c)| !c.is_whitespace())
        .collect();
    if toks.is_empty() {
        return Err(SetParseError::Empty);
    }
    let mut p = InfixParser {
        toks,
        pos: 0,
        end: text.len(),
        alphabet,
    };
    let e = p.or()?;
    if let Some(&(position, c)) = p.toks.get(p.pos) {
        return Err(SetParseError::Syntax {
            position,
            message: format!("unexpected '{c}'"),
        });
    }
    Ok(e)
}

struct InfixParser {
    toks: Vec<(usize, char)>,
    pos: usize,
    end: usize,
    alphabet: Alphabet,
}

impl InfixParser {
    fn peek(&self) -> Option<char> {
        self.toks.get(self.pos).map(|t| t.1)
    }

    fn or(&mut self) -> Result<SetExpr, SetParseError> {
        let mut lhs = self.and()?;
        while self.peek() == Some('|') {
            self.pos += 1;
            lhs = SetExpr::or(lhs, self.and()?);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<SetExpr, SetParseError> {
        let mut lhs = self.not()?;
        while self.peek() == Some('&') {
            self.pos += 1;
            lhs = SetExpr::and(lhs, self.not()?);
        }
        Ok(lhs)
    }

    fn not(&mut self) -> Result<SetExpr, SetParseError> {
        if self.peek() == Some('!') {
            self.pos += 1;
            return Ok(SetExpr::not(self.not()?));
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<SetExpr, SetParseError> {
        let Some(&(position, c)) = self.toks.get(self.pos) else {
            return Err(SetParseError::Syntax {
                position: self.end,
                message: "unexpected end of expression".into(),
            });
        };
        self.pos += 1;
        match c {
            '(' => {
                let inner = self.or()?;
                match self.toks.get(self.pos) {
                    Some(&(_, ')')) => {
                        self.pos += 1;
                        Ok(inner)
                    }
                    Some(&(position, c)) => Err(SetParseError::Syntax {
                        position,
                        message: format!("expected ')', found '{c}'"),
                    }),
                    None => Err(SetParseError::Syntax {
                        position: self.end,
                        message: "missing ')'".into(),
                    }),
                }
            }
            c if self.alphabet.contains(c) => Ok(SetExpr::Var(c)),
            c if c.is_alphanumeric() => Err(SetParseError::InvalidSymbol {
                position,
                symbol: c,
            }),
            c => Err(SetParseError::Syntax {
                position,
                message: format!("expected a name, '!' or '(', found '{c}'"),
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(c: char) -> SetExpr {
        SetExpr::Var(c)
    }

    #[test]
    fn postfix_pop_order() {
        assert_eq!(
            parse_postfix("abc&&").unwrap(),
            SetExpr::and(v('a'), SetExpr::and(v('b'), v('c')))
        );
        assert_eq!(parse_postfix("ab|").unwrap(), SetExpr::or(v('a'), v('b')));
        assert_eq!(parse_postfix("a b |").unwrap(), SetExpr::or(v('a'), v('b')));
        assert_eq!(parse_postfix("a!").unwrap(), SetExpr::not(v('a')));
    }

    #[test]
    fn postfix_errors() {
        assert_eq!(
            parse_postfix("a&"),
            Err(SetParseError::StackUnderflow { position: 1 })
        );
        assert_eq!(
            parse_postfix("!"),
            Err(SetParseError::StackUnderflow { position: 0 })
        );
        assert_eq!(
            parse_postfix("ab$"),
            Err(SetParseError::InvalidSymbol {
                position: 2,
                symbol: '$'
            })
        );
        assert_eq!(
            parse_postfix("ax|"),
            Err(SetParseError::InvalidSymbol {
                position: 1,
                symbol: 'x'
            })
        );
        assert_eq!(
            parse_postfix("abc&"),
            Err(SetParseError::LeftoverOperands { count: 1 })
        );
        assert_eq!(parse_postfix("  "), Err(SetParseError::Empty));
        assert!(parse_postfix_with("xy&", Alphabet::Appendix).is_ok());
    }

    #[test]
    fn infix_precedence() {
        let want = SetExpr::or(SetExpr::and(v('a'), v('b')), v('c'));
        assert_eq!(parse_infix("(a&b)|c").unwrap(), want);
        assert_eq!(parse_infix("a&b|c").unwrap(), want);
        assert_eq!(
            parse_infix("!a&b").unwrap(),
            SetExpr::and(SetExpr::not(v('a')), v('b'))
        );
        assert_eq!(
            parse_infix("a|b|c").unwrap(),
            SetExpr::or(SetExpr::or(v('a'), v('b')), v('c'))
        );
        assert_eq!(
            parse_infix("!!a").unwrap(),
            SetExpr::not(SetExpr::not(v('a')))
        );
    }

    #[test]
    fn infix_errors() {
        assert!(matches!(
            parse_infix("a&"),
            Err(SetParseError::Syntax { position: 2, .. })
        ));
        assert!(matches!(
            parse_infix("(a|b"),
            Err(SetParseError::Syntax { position: 4, .. })
        ));
        assert!(matches!(
            parse_infix("a b"),
            Err(SetParseError::Syntax { position: 2, .. })
        ));
        assert!(matches!(
            parse_infix("a&z"),
            Err(SetParseError::InvalidSymbol {
                position: 2,
                symbol: 'z'
            })
        ));
        assert_eq!(parse_infix(""), Err(SetParseError::Empty));
    }

    #[test]
    fn display_and_postfix_reparse() {
        for src in [
            "(a&b)|c",
            "a&(b|c)",
            "!(a|b)&c",
            "a|b&!c",
            "((((a&b&c&d)|e)&f)|g)&h",
            "a&(b&c)",
        ] {
            let e = parse_infix(src).unwrap();
            assert_eq!(parse_infix(&e.to_string()).unwrap(), e, "{src}");
            assert_eq!(parse_postfix(&e.to_postfix()).unwrap(), e, "{src}");
        }
    }

    #[test]
    fn crisp_de_morgan() {
        let lhs = parse_infix("!(a|b)").unwrap();
        let rhs = parse_infix("!a&!b").unwrap();
        for bits in 0..4u8 {
            let m = |c: char| {
                if c == 'a' {
                    bits & 1 != 0
                } else {
                    bits & 2 != 0
                }
            };
            assert_eq!(lhs.eval_bool(&m), rhs.eval_bool(&m));
        }
    }
}
