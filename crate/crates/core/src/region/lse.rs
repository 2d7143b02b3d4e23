use std::cmp::Ordering;

use smallvec::SmallVec;

use crate::expr::Number;

/// `ln(sum(exp(v_i)))` shifted by the maximum. The shifted terms are summed in
/// ascending order so the result does not depend on the order of `values`.
///
/// Returns `-inf` for an empty slice, NaN if any value is NaN and `+inf` if
/// any value is `+inf`.
pub fn log_sum_exp(values: &[f64]) -> f64 {
    log_sum_exp_with(values)
}

/// [`log_sum_exp`] over any [`Number`]; with duals the derivative is the
/// softmax-weighted sum of the input derivatives.
pub fn log_sum_exp_with<T: Number>(values: &[T]) -> T {
    let mut best: Option<(usize, f64)> = None;
    for (i, v) in values.iter().enumerate() {
        let x = v.value();
        if x.is_nan() {
            return *v;
        }
        match best {
            Some((_, b)) if b >= x => {}
            _ => best = Some((i, x)),
        }
    }
    let Some((argmax, m)) = best else {
        return T::constant(f64::NEG_INFINITY);
    };
    if m.is_infinite() {
        // all -inf, or at least one +inf: no meaningful gradient
        return T::constant(m);
    }
    let top = values[argmax];
    if values.len() == 1 {
        return top;
    }
    let mut rest: SmallVec<[T; 8]> = values
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != argmax)
        .map(|(_, v)| v.sub(top).exp())
        .collect();
    rest.sort_by(|a, b| a.value().partial_cmp(&b.value()).unwrap_or(Ordering::Equal));
    let mut sum = rest[0];
    for t in &rest[1..] {
        sum = sum.add(*t);
    }
    top.add(sum.ln_1p())
}
