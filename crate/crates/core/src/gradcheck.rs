//! Forward-mode gradients against central differences at seeded random points.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::expr::Point;
use crate::region::Region;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GradcheckConfig {
    /// Points to accept.
    pub points: usize,
    pub seed: u64,
    /// Central-difference step.
    pub step: f64,
    /// Pass threshold on the largest relative error.
    pub tolerance: f64,
    /// Points with `|L|` or a leaf's singularity margin at most this are skipped.
    pub exclusion: f64,
    /// Give up after `points * max_attempts_factor` draws.
    pub max_attempts_factor: usize,
}

impl Default for GradcheckConfig {
    fn default() -> Self {
        Self {
            points: 100,
            seed: 0,
            step: 1e-5,
            tolerance: 1e-5,
            exclusion: 1e-3,
            max_attempts_factor: 200,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GradReport {
    pub requested: usize,
    pub accepted: usize,
    pub attempts: usize,
    /// Skipped because `|L|` was within the exclusion distance of 0.
    pub near_boundary: usize,
    /// Skipped because some sub-expression was near a domain edge or kink.
    pub near_singularity: usize,
    /// Skipped because the field or a stencil value was not finite.
    pub non_finite: usize,
    pub max_rel_error: f64,
    pub worst_point: Option<Point>,
    pub tolerance: f64,
}

impl GradReport {
    pub fn passed(&self) -> bool {
        self.accepted > 0 && self.max_rel_error < self.tolerance
    }
}

/// `|a - b| / max(|a|, |b|, 1)`: relative for large values, absolute below 1.
pub fn relative_error(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1.0)
}

/// Draws points uniformly from `window = [x_min, x_max, y_min, y_max]`.
pub fn gradcheck(region: &Region, window: [f64; 4], config: &GradcheckConfig) -> GradReport {
    let [x0, x1, y0, y1] = window;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut report = GradReport {
        requested: config.points,
        accepted: 0,
        attempts: 0,
        near_boundary: 0,
        near_singularity: 0,
        non_finite: 0,
        max_rel_error: 0.0,
        worst_point: None,
        tolerance: config.tolerance,
    };
    let budget = config.points.saturating_mul(config.max_attempts_factor);
    let h = config.step;
    while report.accepted < config.points && report.attempts < budget {
        report.attempts += 1;
        let p = Point::new(rng.gen_range(x0..x1), rng.gen_range(y0..y1));
        let d = region.log_field_dual(p);
        if !d.value.is_finite() {
            report.non_finite += 1;
            continue;
        }
        if d.value.abs() <= config.exclusion {
            report.near_boundary += 1;
            continue;
        }
        let margin = region.singularity_margin(p);
        if margin.is_nan() {
            report.non_finite += 1;
            continue;
        }
        if margin <= config.exclusion {
            report.near_singularity += 1;
            continue;
        }
        let l = |dx: f64, dy: f64| region.log_field(Point::new(p.x + dx, p.y + dy));
        let stencil = [l(h, 0.0), l(-h, 0.0), l(0.0, h), l(0.0, -h)];
        if stencil.iter().any(|v| !v.is_finite()) || !d.dx.is_finite() || !d.dy.is_finite() {
            report.non_finite += 1;
            continue;
        }
        let fd_x = (stencil[0] - stencil[1]) / (2.0 * h);
        let fd_y = (stencil[2] - stencil[3]) / (2.0 * h);
        let err = relative_error(d.dx, fd_x).max(relative_error(d.dy, fd_y));
        report.accepted += 1;
        if report.worst_point.is_none() || err > report.max_rel_error {
            report.max_rel_error = err;
            report.worst_point = Some(p);
        }
    }
    report
}
