use std::cmp::Ordering;

use crate::expr::{Point, ScalarExpr};

use super::{Region, RegionError, Sharpness};

/// Default cap on each per-point field value in [`membership_loss`].
pub const DEFAULT_LOSS_CLIP: f64 = 1e6;

const MAX_BISECTIONS: usize = 400;

/// `ln(1 + sum(exp(-d_i)))` over non-negative gaps, summed smallest first.
fn log1p_exp_gaps(mut gaps: Vec<f64>) -> f64 {
    gaps.sort_by(|a, b| b.partial_cmp(a).unwrap_or(Ordering::Equal));
    gaps.iter().map(|d| (-d).exp()).sum::<f64>().ln_1p()
}

/// `-(1/a) ln(sum(exp(-a g_i)))`, a differentiable lower bound on `min g_i`
/// within `ln(n)/a`.
pub fn smooth_min_values(values: &[f64], a: Sharpness) -> Result<f64, RegionError> {
    let (k, &lo) = values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.partial_cmp(b.1).unwrap_or(Ordering::Equal))
        .ok_or(RegionError::EmptyOperandList)?;
    if values.iter().any(|v| v.is_nan()) {
        return Ok(f64::NAN);
    }
    if lo.is_infinite() {
        return Ok(lo);
    }
    let a = a.get();
    let gaps = values
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != k)
        .map(|(_, v)| a * (v - lo))
        .collect();
    Ok(lo - log1p_exp_gaps(gaps) / a)
}

/// `(1/a) ln(sum(exp(a g_i)))`, within `ln(n)/a` above `max g_i`.
pub fn smooth_max_values(values: &[f64], a: Sharpness) -> Result<f64, RegionError> {
    let negated: Vec<f64> = values.iter().map(|v| -v).collect();
    smooth_min_values(&negated, a).map(|v| -v)
}

fn sample_univariate(gs: &[ScalarExpr], x: f64) -> Result<Vec<f64>, RegionError> {
    if gs.is_empty() {
        return Err(RegionError::EmptyOperandList);
    }
    if !gs.iter().all(ScalarExpr::is_univariate_x) {
        return Err(RegionError::NotUnivariate);
    }
    let p = Point::new(x, 0.0);
    Ok(gs.iter().map(|g| g.eval(p)).collect())
}

/// Smooth minimum of functions of `x`: the boundary, solved for `y`, of the
/// intersection of the regions `y <= g_i(x)`.
pub fn smooth_min(gs: &[ScalarExpr], a: Sharpness, x: f64) -> Result<f64, RegionError> {
    smooth_min_values(&sample_univariate(gs, x)?, a)
}

/// Smooth maximum of functions of `x`: the boundary of the intersection of the
/// regions `y >= g_i(x)`.
pub fn smooth_max(gs: &[ScalarExpr], a: Sharpness, x: f64) -> Result<f64, RegionError> {
    smooth_max_values(&sample_univariate(gs, x)?, a)
}

/// Boundary of the union of `y <= 0` and `y <= x`: `ln(1 + exp(a x)) / a`.
pub fn softplus_boundary(a: Sharpness, x: f64) -> f64 {
    let a = a.get();
    x.max(0.0) + (-a * x.abs()).exp().ln_1p() / a
}

/// `max(sum(min(F(p_i), clip)) - N, 0)`. A point whose field is undefined
/// contributes `clip`.
pub fn membership_loss(region: &Region, points: &[Point], clip: f64) -> Result<f64, RegionError> {
    if clip.is_nan() || clip < 1.0 {
        return Err(RegionError::InvalidClip(clip));
    }
    if points.is_empty() {
        return Err(RegionError::EmptyOperandList);
    }
    let cap = clip.ln();
    let total: f64 = points
        .iter()
        .map(|&p| {
            let l = region.log_field(p);
            if l.is_nan() {
                clip
            } else {
                l.min(cap).exp()
            }
        })
        .sum();
    Ok((total - points.len() as f64).max(0.0))
}

/// Bisection for the `y` in `[y_lo, y_hi]` where the log-field crosses zero
/// along the vertical line at `x`.
pub fn boundary_solve_y(
    region: &Region,
    x: f64,
    y_lo: f64,
    y_hi: f64,
    tol: f64,
) -> Result<f64, RegionError> {
    let at = |y: f64| region.log_field(Point::new(x, y));
    let no_change = RegionError::NoSignChange { x, y_lo, y_hi };
    let (mut lo, mut hi) = (y_lo, y_hi);
    let (f_lo, f_hi) = (at(lo), at(hi));
    if f_lo.is_nan() || f_hi.is_nan() {
        return Err(no_change);
    }
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if (f_lo < 0.0) == (f_hi < 0.0) {
        return Err(no_change);
    }
    let lo_negative = f_lo < 0.0;
    for _ in 0..MAX_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        if (hi - lo).abs() <= tol || mid == lo || mid == hi {
            break;
        }
        let f = at(mid);
        if f == 0.0 {
            return Ok(mid);
        }
        if f.is_nan() {
            return Err(no_change);
        }
        if (f < 0.0) == lo_negative {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
