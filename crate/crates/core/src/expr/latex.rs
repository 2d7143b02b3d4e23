use super::{needs_parens, BinOp, Func, ScalarExpr, Var};

/// Shortest decimal that parses back to the same `f64`.
pub fn format_number(v: f64) -> String {
    if v.is_nan() {
        "NaN".to_owned()
    } else if v.is_infinite() {
        if v > 0.0 { "\\infty" } else { "-\\infty" }.to_owned()
    } else if v == 0.0 {
        "0".to_owned()
    } else {
        format!("{v}")
    }
}

/// LaTeX rendering using `\left( \right)` for grouping and braced exponents.
pub fn emit_latex(expr: &ScalarExpr) -> String {
    let mut out = String::new();
    write(expr, &mut out);
    out
}

fn grouped(parent: &ScalarExpr, child: &ScalarExpr, right: bool, out: &mut String) {
    if needs_parens(parent, child, right) {
        out.push_str("\\left(");
        write(child, out);
        out.push_str("\\right)");
    } else {
        write(child, out);
    }
}

fn write(e: &ScalarExpr, out: &mut String) {
    match e {
        ScalarExpr::Const(c) => out.push_str(&format_number(*c)),
        ScalarExpr::Var(Var::X) => out.push('x'),
        ScalarExpr::Var(Var::Y) => out.push('y'),
        ScalarExpr::Neg(c) => {
            out.push('-');
            grouped(e, c, false, out);
        }
        ScalarExpr::Binary(BinOp::Div, l, r) => {
            out.push_str("\\frac{");
            write(l, out);
            out.push_str("}{");
            write(r, out);
            out.push('}');
        }
        ScalarExpr::Binary(BinOp::Pow, l, r) => {
            // `\sin\left(x\right)^{2}` would read back as sin(x^2)
            if matches!(&**l, ScalarExpr::Call(f, _) if *f != Func::Abs) {
                out.push_str("\\left(");
                write(l, out);
                out.push_str("\\right)");
            } else {
                grouped(e, l, false, out);
            }
            out.push_str("^{");
            write(r, out);
            out.push('}');
        }
        ScalarExpr::Binary(op, l, r) => {
            grouped(e, l, false, out);
            out.push_str(match op {
                BinOp::Add => "+",
                BinOp::Sub => "-",
                _ => "\\cdot ",
            });
            grouped(e, r, true, out);
        }
        ScalarExpr::Call(Func::Abs, arg) => {
            out.push_str("\\left|");
            write(arg, out);
            out.push_str("\\right|");
        }
        ScalarExpr::Call(f, arg) => {
            out.push('\\');
            out.push_str(f.name());
            out.push_str("\\left(");
            write(arg, out);
            out.push_str("\\right)");
        }
    }
}
