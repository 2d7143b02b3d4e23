//! Replay of the original interactive postfix-to-Desmos script.
//!
//! The script reads a sharpness factor, then `<letter> <latex>` definition
//! lines up to a blank line, then a postfix expression, and prints the stack
//! before every symbol followed by the resulting inequality. [`replay_appendix`]
//! reproduces that output byte for byte, quirks included: the sharpness and
//! bodies are pasted as raw text, an undefined letter is pasted as itself,
//! invalid symbols are reported and skipped, and surplus stack entries are
//! ignored.

use std::collections::HashMap;

use crate::expr::parse_latex;
use crate::region::Sharpness;

use super::desmos::{intersection, leaf, reciprocal, SUFFIX};
use super::program::{Definition, SetProgram};
use super::{parse_postfix_with, Alphabet, SetError, SetParseError};

/// Answers typed at the script's prompts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AppendixInput {
    pub sharpness: String,
    pub definitions: Vec<(char, String)>,
    pub expression: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Replay {
    /// Everything the script prints, prompts and typed answers included.
    pub transcript: String,
    /// The final inequality line, without a trailing newline.
    pub result: String,
}

fn format_error(line: usize, message: impl Into<String>) -> SetError {
    SetError::FileFormat {
        line,
        message: message.into(),
    }
}

/// Reads the answers: sharpness line, definition lines, a blank line, the
/// postfix expression.
pub fn parse_appendix_input(text: &str) -> Result<AppendixInput, SetError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end_matches('\r')));
    let (_, sharpness) = lines
        .next()
        .ok_or_else(|| format_error(1, "missing sharpness factor"))?;
    let mut definitions = Vec::new();
    let mut last = 1;
    loop {
        let Some((line, text)) = lines.next() else {
            return Err(format_error(last, "definitions must end with a blank line"));
        };
        last = line;
        if text.is_empty() {
            break;
        }
        // the script unpacks `e.split(' ')` into exactly two names
        let parts: Vec<&str> = text.split(' ').collect();
        let [name, body] = parts.as_slice() else {
            return Err(format_error(
                line,
                "expected '<letter> <expression>' with a single space",
            ));
        };
        let mut chars = name.chars();
        let (Some(c), None) = (chars.next(), chars.next()) else {
            return Err(format_error(
                line,
                format!("'{name}' is not a single letter"),
            ));
        };
        definitions.push((c, (*body).to_owned()));
    }
    let (_, expression) = lines
        .next()
        .ok_or_else(|| format_error(last + 1, "missing postfix expression"))?;
    Ok(AppendixInput {
        sharpness: sharpness.to_owned(),
        definitions,
        expression: expression.to_owned(),
    })
}

/// Python `repr` of a string.
fn python_str_repr(s: &str) -> String {
    let quote = if s.contains('\'') && !s.contains('"') {
        '"'
    } else {
        '\''
    };
    let mut out = String::with_capacity(s.len() + 2);
    out.push(quote);
    for c in s.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if c == quote => {
                out.push('\\');
                out.push(c);
            }
            c => out.push(c),
        }
    }
    out.push(quote);
    out
}

/// Python `repr` of a list of strings.
pub fn python_list_repr<S: AsRef<str>>(items: &[S]) -> String {
    let parts: Vec<String> = items.iter().map(|s| python_str_repr(s.as_ref())).collect();
    format!("[{}]", parts.join(", "))
}

const ALPHABET: &str = "abcdefghijklmnopqrstuvwxy";

pub fn replay_appendix(input: &AppendixInput) -> Result<Replay, SetError> {
    let mut out = String::new();
    out.push_str(&format!(
        "Enter the sharpness factor: {}\n",
        input.sharpness
    ));
    out.push_str("Enter the expressions: \n");
    let mut vars: HashMap<char, String> = HashMap::new();
    for (name, body) in &input.definitions {
        out.push_str(&format!("{name} {body}\n"));
        vars.insert(*name, leaf(&input.sharpness, body));
    }
    out.push('\n');
    out.push_str(&format!("Enter the expression: {}\n", input.expression));

    let mut stack: Vec<String> = Vec::new();
    let resolve = |s: String| -> String {
        let mut cs = s.chars();
        match (cs.next(), cs.next()) {
            (Some(c), None) => vars.get(&c).cloned().unwrap_or(s),
            _ => s,
        }
    };
    for (i, c) in input.expression.chars().enumerate() {
        out.push_str(&format!("{i} {}\n", python_list_repr(&stack)));
        if ALPHABET.contains(c) {
            stack.push(c.to_string());
        } else if c == '&' || c == '|' {
            let (Some(x), Some(y)) = (stack.pop(), stack.pop()) else {
                return Err(SetParseError::StackUnderflow { position: i }.into());
            };
            let (x, y) = (resolve(x), resolve(y));
            stack.push(if c == '&' {
                intersection(&x, &y)
            } else {
                let (x, y) = (reciprocal(&x), reciprocal(&y));
                format!("({} )^{{ -1}}", intersection(&x, &y))
            });
        } else {
            out.push_str(&format!("Error at  {i}  Invalid symbol  {c}\n"));
        }
    }
    let first = stack.first().ok_or(SetParseError::Empty)?;
    let result = format!("{first}{SUFFIX}");
    out.push_str(&result);
    out.push('\n');
    Ok(Replay {
        transcript: out,
        result,
    })
}

impl AppendixInput {
    /// The same session as a [`SetProgram`]: bodies parsed as LaTeX with their
    /// text kept for export, names from the full script alphabet.
    pub fn to_program(&self) -> Result<SetProgram, SetError> {
        let a: f64 = self
            .sharpness
            .trim()
            .parse()
            .map_err(|_| format_error(1, format!("'{}' is not a number", self.sharpness)))?;
        let a = Sharpness::new(a)?;
        let mut defs = Vec::new();
        for (name, body) in &self.definitions {
            if !Alphabet::Appendix.contains(*name) {
                return Err(SetParseError::InvalidSymbol {
                    position: 0,
                    symbol: *name,
                }
                .into());
            }
            let mut d = Definition::new(*name, parse_latex(body)?);
            d.latex = Some(body.clone());
            defs.push(d);
        }
        let expression = parse_postfix_with(&self.expression, Alphabet::Appendix)?;
        let mut program = SetProgram::new(defs, expression);
        program.global_sharpness = a;
        Ok(program)
    }
}
