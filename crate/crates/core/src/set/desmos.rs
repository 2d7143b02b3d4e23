use crate::expr::{emit_latex, format_number};
use crate::region::{Node, Region};

use super::SetError;

/// How leaf bodies are written.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BodyStyle {
    /// The LaTeX a definition was written in when known, otherwise
    /// [`emit_latex`] of the parsed body.
    #[default]
    Verbatim,
    /// Always [`emit_latex`].
    Normalized,
}

pub(crate) fn leaf(sharpness: &str, body: &str) -> String {
    format!("e^{{{sharpness}*({body})}}")
}

pub(crate) fn intersection(first: &str, second: &str) -> String {
    format!("{first}+{second}")
}

pub(crate) fn reciprocal(term: &str) -> String {
    format!("({term})^{{ -1}}")
}

pub(crate) fn union_of<S: AsRef<str>>(terms: &[S]) -> String {
    let inner: Vec<String> = terms.iter().map(|t| reciprocal(t.as_ref())).collect();
    format!("({} )^{{ -1}}", inner.join("+"))
}

pub(crate) const SUFFIX: &str = "\\le1";

/// Desmos inequality `F \le1` for a region.
///
/// Children are written last to first, the order the postfix script
/// produces, so `abc&&` comes out as `C+B+A`.
pub fn emit_desmos(region: &Region) -> Result<String, SetError> {
    emit_desmos_with(region, BodyStyle::Verbatim)
}

pub fn emit_desmos_with(region: &Region, style: BodyStyle) -> Result<String, SetError> {
    Ok(format!("{}{SUFFIX}", field(region, style)?))
}

fn body(expr_latex: &Option<String>, expr: &crate::expr::ScalarExpr, style: BodyStyle) -> String {
    match (style, expr_latex) {
        (BodyStyle::Verbatim, Some(src)) => src.clone(),
        _ => emit_latex(expr),
    }
}

fn field(region: &Region, style: BodyStyle) -> Result<String, SetError> {
    match region.node() {
        Node::Leaf {
            expr,
            sharpness,
            latex,
        } => Ok(leaf(
            &format_number(sharpness.get()),
            &body(latex, expr, style),
        )),
        Node::EvenPower { .. } => Err(SetError::UnsupportedNode("even-power leaf")),
        Node::Negate(child) => match child.node() {
            Node::Leaf {
                expr,
                sharpness,
                latex,
            } => Ok(leaf(
                &format!("-{}", format_number(sharpness.get())),
                &body(latex, expr, style),
            )),
            Node::Negate(inner) => field(inner, style),
            _ => Ok(reciprocal(&field(child, style)?)),
        },
        Node::Intersect(children) => {
            let mut parts = children
                .iter()
                .rev()
                .map(|c| field(c, style))
                .collect::<Result<Vec<_>, _>>()?
                .into_iter();
            let first = parts.next().expect("non-empty");
            Ok(parts.fold(first, |acc, p| intersection(&acc, &p)))
        }
        Node::Union(children) => {
            let parts = children
                .iter()
                .rev()
                .map(|c| field(c, style))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(union_of(&parts))
        }
    }
}
