use std::collections::BTreeMap;
use std::path::Path;

use crate::expr::{parse_scalar, ScalarExpr};
use crate::region::{Region, Sharpness};

use super::{parse_infix, parse_postfix, Alphabet, SetError, SetExpr};

/// Sharpness used when a program sets none.
pub const DEFAULT_SHARPNESS: f64 = 50.0;

/// A named inequality `body <= 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct Definition {
    pub name: char,
    pub body: ScalarExpr,
    /// Overrides the program's global sharpness.
    pub sharpness: Option<Sharpness>,
    /// LaTeX text the body was written in, exported verbatim when present.
    pub latex: Option<String>,
}

impl Definition {
    pub fn new(name: char, body: ScalarExpr) -> Self {
        Self {
            name,
            body,
            sharpness: None,
            latex: None,
        }
    }

    pub fn with_sharpness(mut self, a: Sharpness) -> Self {
        self.sharpness = Some(a);
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SetProgram {
    pub definitions: BTreeMap<char, Definition>,
    pub expression: SetExpr,
    pub global_sharpness: Sharpness,
}

impl SetProgram {
    pub fn new(definitions: impl IntoIterator<Item = Definition>, expression: SetExpr) -> Self {
        Self {
            definitions: definitions.into_iter().map(|d| (d.name, d)).collect(),
            expression,
            global_sharpness: Sharpness::new(DEFAULT_SHARPNESS).expect("positive"),
        }
    }

    /// Same program with a different global sharpness; per-definition
    /// overrides are kept.
    pub fn with_global_sharpness(&self, a: Sharpness) -> Self {
        Self {
            global_sharpness: a,
            ..self.clone()
        }
    }

    pub fn definition(&self, name: char) -> Result<&Definition, SetError> {
        self.definitions
            .get(&name)
            .ok_or(SetError::UnresolvedName(name))
    }

    pub fn sharpness_of(&self, d: &Definition) -> Sharpness {
        d.sharpness.unwrap_or(self.global_sharpness)
    }
}

/// Names become leaves, `!` negation, `&` intersection and `|` union. Binary
/// nodes are kept binary so the exported string mirrors the expression.
pub fn compile(program: &SetProgram) -> Result<Region, SetError> {
    compile_expr(program, &program.expression)
}

fn compile_expr(program: &SetProgram, e: &SetExpr) -> Result<Region, SetError> {
    Ok(match e {
        SetExpr::Var(name) => {
            let d = program.definition(*name)?;
            let leaf = Region::from_inequality(d.body.clone(), program.sharpness_of(d));
            match &d.latex {
                Some(src) => leaf.with_latex_source(src.clone()),
                None => leaf,
            }
        }
        SetExpr::Not(inner) => Region::negate(compile_expr(program, inner)?),
        SetExpr::And(l, r) => {
            Region::intersect(vec![compile_expr(program, l)?, compile_expr(program, r)?])?
        }
        SetExpr::Or(l, r) => {
            Region::union(vec![compile_expr(program, l)?, compile_expr(program, r)?])?
        }
    })
}

fn format_error(line: usize, message: impl Into<String>) -> SetError {
    SetError::FileFormat {
        line,
        message: message.into(),
    }
}

fn parse_positive(text: &str, line: usize) -> Result<Sharpness, SetError> {
    let v: f64 = text
        .trim()
        .parse()
        .map_err(|_| format_error(line, format!("'{}' is not a number", text.trim())))?;
    Sharpness::new(v).map_err(|e| format_error(line, e.to_string()))
}

/// Parses the definition-file format:
///
/// ```text
/// # comment
/// sharpness 50
/// def a : x^2+y^2-4
/// def b a=20 : (x-2.5)^2+y^2-4
/// expr postfix ab|
/// ```
///
/// Exactly one `expr postfix ...` or `expr infix ...` line is required.
pub fn parse_program(text: &str) -> Result<SetProgram, SetError> {
    let mut definitions: BTreeMap<char, Definition> = BTreeMap::new();
    let mut global: Option<Sharpness> = None;
    let mut expression: Option<SetExpr> = None;
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (keyword, rest) = content
            .split_once(char::is_whitespace)
            .map_or((content, ""), |(k, r)| (k, r.trim()));
        match keyword {
            "sharpness" => {
                if global.is_some() {
                    return Err(format_error(line, "duplicate sharpness directive"));
                }
                global = Some(parse_positive(rest, line)?);
            }
            "def" => {
                let d = parse_definition(rest, line)?;
                if definitions.contains_key(&d.name) {
                    return Err(format_error(
                        line,
                        format!("duplicate definition of '{}'", d.name),
                    ));
                }
                definitions.insert(d.name, d);
            }
            "expr" => {
                if expression.is_some() {
                    return Err(format_error(line, "more than one expr directive"));
                }
                let (form, body) = rest
                    .split_once(char::is_whitespace)
                    .map_or((rest, ""), |(f, b)| (f, b.trim()));
                if body.is_empty() {
                    return Err(format_error(line, "empty expression"));
                }
                let parsed = match form {
                    "postfix" => parse_postfix(body),
                    "infix" => parse_infix(body),
                    other => {
                        return Err(format_error(
                            line,
                            format!("expected 'postfix' or 'infix', found '{other}'"),
                        ))
                    }
                };
                expression = Some(parsed.map_err(|e| format_error(line, e.to_string()))?);
            }
            other => return Err(format_error(line, format!("unknown directive '{other}'"))),
        }
    }

    let expression = expression.ok_or_else(|| format_error(last_line, "missing expr directive"))?;
    let mut program = SetProgram::new(definitions.into_values(), expression);
    if let Some(a) = global {
        program.global_sharpness = a;
    }
    Ok(program)
}

fn parse_definition(rest: &str, line: usize) -> Result<Definition, SetError> {
    let (head, body) = rest
        .split_once(':')
        .ok_or_else(|| format_error(line, "definition needs ':' before its expression"))?;
    let mut parts = head.split_whitespace();
    let name_text = parts
        .next()
        .ok_or_else(|| format_error(line, "definition needs a name"))?;
    let mut chars = name_text.chars();
    let name = match (chars.next(), chars.next()) {
        (Some(c), None) if Alphabet::Names.contains(c) => c,
        _ => {
            return Err(format_error(
                line,
                format!("definition name must be one letter a-w, found '{name_text}'"),
            ))
        }
    };
    let mut sharpness = None;
    for opt in parts {
        match opt.strip_prefix("a=") {
            Some(v) if sharpness.is_none() => sharpness = Some(parse_positive(v, line)?),
            _ => {
                return Err(format_error(
                    line,
                    format!("unexpected '{opt}' in definition of '{name}'"),
                ))
            }
        }
    }
    let body_text = body.trim();
    let body = parse_scalar(body_text).map_err(|e| {
        format_error(
            line,
            format!(
                "in definition of '{name}': {} (column {})",
                e.message,
                e.position + 1
            ),
        )
    })?;
    Ok(Definition {
        name,
        body,
        sharpness,
        latex: None,
    })
}

pub fn load_program(path: impl AsRef<Path>) -> Result<SetProgram, SetError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| SetError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_program(&text)
}
