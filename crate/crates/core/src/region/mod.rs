//! Smooth regions built from inequalities `f(x, y) <= 0`.
//!
//! Every region carries a field `F` with `inside <=> F <= 1`. A leaf encodes
//! `f <= 0` as `exp(a f) <= 1`; negation inverts the field, intersection sums
//! the child fields and union takes the reciprocal of the summed reciprocals.
//! Because the field itself overflows as soon as `a f` exceeds ~709, all
//! evaluation happens on the log-field `L = ln F`, where intersection becomes
//! a stabilized log-sum-exp and membership is `L <= 0`.

mod lse;
mod product;
mod smooth;

use std::fmt;

use smallvec::SmallVec;
use thiserror::Error;

use crate::expr::{Dual, Number, Point, ScalarExpr};

pub use lse::{log_sum_exp, log_sum_exp_with};
pub use product::RawProductRegion;
pub use smooth::{
    boundary_solve_y, membership_loss, smooth_max, smooth_max_values, smooth_min,
    smooth_min_values, softplus_boundary, DEFAULT_LOSS_CLIP,
};

/// Default half-width of the band `|L| <= tol` reported as [`Membership::Boundary`].
pub const DEFAULT_BOUNDARY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RegionError {
    #[error("sharpness must be positive and finite, got {0}")]
    InvalidSharpness(f64),
    #[error("even-power exponent must be a positive integer, got {0}")]
    InvalidEvenPower(i64),
    #[error("operation needs at least one operand")]
    EmptyOperandList,
    #[error("clip value must be at least 1, got {0}")]
    InvalidClip(f64),
    #[error("log-field does not change sign between y = {y_lo} and y = {y_hi} at x = {x}")]
    NoSignChange { x: f64, y_lo: f64, y_hi: f64 },
    #[error("functions passed to smooth min/max must depend on x only")]
    NotUnivariate,
}

/// Positive, finite sharpness parameter `a` of a leaf.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Sharpness(f64);

impl Sharpness {
    pub fn new(a: f64) -> Result<Self, RegionError> {
        if a.is_finite() && a > 0.0 {
            Ok(Self(a))
        } else {
            Err(RegionError::InvalidSharpness(a))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

impl fmt::Display for Sharpness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::expr::format_number(self.0))
    }
}

/// Node of a region tree; inspect with [`Region::node`].
#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    /// `exp(a f) <= 1`. `latex` optionally keeps the body text the definition
    /// was written in, for verbatim export.
    Leaf {
        expr: ScalarExpr,
        sharpness: Sharpness,
        latex: Option<String>,
    },
    /// `f^(2a) <= 1`, which also admits the band `-1 <= f < 0`.
    EvenPower {
        expr: ScalarExpr,
        power: u32,
    },
    Negate(Box<Region>),
    Intersect(Vec<Region>),
    Union(Vec<Region>),
}

/// Immutable tree of smooth set operations.
#[derive(Debug, Clone, PartialEq)]
pub struct Region {
    node: Node,
}

/// Classification of a point against a region.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Membership {
    Inside,
    Outside,
    Boundary,
    /// The field was NaN, typically a sub-expression evaluated outside its domain.
    Undefined,
}

impl Membership {
    pub fn from_log_field(l: f64, tol: f64) -> Self {
        if l.is_nan() {
            Membership::Undefined
        } else if l.abs() <= tol {
            Membership::Boundary
        } else if l < 0.0 {
            Membership::Inside
        } else {
            Membership::Outside
        }
    }

    /// Inside with the boundary included. Undefined counts as outside.
    pub fn is_member(self) -> bool {
        matches!(self, Membership::Inside | Membership::Boundary)
    }
}

/// Output scale of [`Region::bounded_field`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BoundScale {
    /// `1 - 2^-F`, range `[0, 1)`, boundary at 0.5.
    #[default]
    Unit,
    /// `2 (1 - 2^-F)`, range `[0, 2)`, boundary at 1.
    Double,
}

impl BoundScale {
    pub fn threshold(self) -> f64 {
        match self {
            BoundScale::Unit => 0.5,
            BoundScale::Double => 1.0,
        }
    }
}

/// Largest `f64` below 1.
const BELOW_ONE: f64 = 1.0 - f64::EPSILON / 2.0;

/// `1 - 2^-F` from `L = ln F`, without forming `F` when it would overflow.
pub fn bounded_from_log_field(l: f64, scale: BoundScale) -> f64 {
    if l.is_nan() {
        return f64::NAN;
    }
    // 2^-F underflows to zero long before F reaches e^7
    let f = l.min(7.0).exp();
    let g = if f < 0.5 {
        -(-std::f64::consts::LN_2 * f).exp_m1()
    } else {
        1.0 - (-f).exp2()
    };
    let g = g.min(BELOW_ONE);
    match scale {
        BoundScale::Unit => g,
        BoundScale::Double => 2.0 * g,
    }
}

impl Region {
    /// Leaf for `f <= 0` with sharpness `a`; its log-field is `a f`.
    pub fn from_inequality(expr: ScalarExpr, a: Sharpness) -> Self {
        Self {
            node: Node::Leaf {
                expr,
                sharpness: a,
                latex: None,
            },
        }
    }

    /// Attaches the LaTeX body a leaf was written in. No-op on other nodes.
    pub fn with_latex_source(mut self, source: impl Into<String>) -> Self {
        if let Node::Leaf { latex, .. } = &mut self.node {
            *latex = Some(source.into());
        }
        self
    }

    /// Leaf for `f^(2a) <= 1`; its log-field is `2a ln|f|`.
    pub fn from_even_power(expr: ScalarExpr, a: i64) -> Result<Self, RegionError> {
        if a < 1 || a > u32::MAX as i64 {
            return Err(RegionError::InvalidEvenPower(a));
        }
        Ok(Self {
            node: Node::EvenPower {
                expr,
                power: a as u32,
            },
        })
    }

    pub fn negate(r: Region) -> Self {
        Self {
            node: Node::Negate(Box::new(r)),
        }
    }

    pub fn intersect(children: Vec<Region>) -> Result<Self, RegionError> {
        if children.is_empty() {
            return Err(RegionError::EmptyOperandList);
        }
        Ok(Self {
            node: Node::Intersect(children),
        })
    }

    pub fn union(children: Vec<Region>) -> Result<Self, RegionError> {
        if children.is_empty() {
            return Err(RegionError::EmptyOperandList);
        }
        Ok(Self {
            node: Node::Union(children),
        })
    }

    pub fn node(&self) -> &Node {
        &self.node
    }

    pub fn log_field(&self, p: Point) -> f64 {
        self.log_field_with::<f64>(p)
    }

    /// Log-field together with its exact gradient.
    pub fn log_field_dual(&self, p: Point) -> Dual {
        self.log_field_with::<Dual>(p)
    }

    pub fn grad_log_field(&self, p: Point) -> (f64, f64) {
        self.log_field_dual(p).gradient()
    }

    /// Nested intersections, and unions seen through negation, are folded
    /// into one log-sum-exp, so regrouping or rewriting by De Morgan leaves the
    /// value bit-for-bit unchanged.
    pub fn log_field_with<T: Number>(&self, p: Point) -> T {
        self.signed_log_field(p, false)
    }

    /// `L` of the region, or of its complement when `negated`.
    fn signed_log_field<T: Number>(&self, p: Point, negated: bool) -> T {
        let sign = |v: T| if negated { v.neg() } else { v };
        match &self.node {
            Node::Leaf {
                expr, sharpness, ..
            } => sign(expr.eval_with::<T>(p).scale(sharpness.get())),
            Node::EvenPower { expr, power } => {
                let f = expr.eval_with::<T>(p);
                let v = if f.value() == 0.0 {
                    T::constant(f64::NEG_INFINITY)
                } else {
                    f.abs().ln().scale(2.0 * f64::from(*power))
                };
                sign(v)
            }
            Node::Negate(child) => child.signed_log_field(p, !negated),
            Node::Intersect(children) => {
                let mut terms = SmallVec::<[T; 8]>::new();
                children
                    .iter()
                    .for_each(|c| c.push_conjuncts(p, false, &mut terms));
                sign(log_sum_exp_with(&terms))
            }
            Node::Union(children) => {
                // the complement of a union is the intersection of complements
                let mut terms = SmallVec::<[T; 8]>::new();
                children
                    .iter()
                    .for_each(|c| c.push_conjuncts(p, true, &mut terms));
                let l = log_sum_exp_with(&terms);
                if negated {
                    l
                } else {
                    l.neg()
                }
            }
        }
    }

    /// Pushes the log-sum-exp terms of this region, or of its complement, as
    /// an operand of an enclosing intersection.
    fn push_conjuncts<T: Number>(&self, p: Point, negated: bool, out: &mut SmallVec<[T; 8]>) {
        match (&self.node, negated) {
            (Node::Negate(child), _) => child.push_conjuncts(p, !negated, out),
            (Node::Intersect(children), false) => children
                .iter()
                .for_each(|c| c.push_conjuncts(p, false, out)),
            (Node::Union(children), true) => {
                children.iter().for_each(|c| c.push_conjuncts(p, true, out))
            }
            _ => out.push(self.signed_log_field(p, negated)),
        }
    }

    /// The field `F = exp(L)`. Underflows to 0 and overflows to `+inf` for
    /// moderately large `|L|`; use [`Region::log_field`] for decisions.
    pub fn field(&self, p: Point) -> f64 {
        self.log_field(p).exp()
    }

    pub fn membership(&self, p: Point, boundary_tol: f64) -> Membership {
        Membership::from_log_field(self.log_field(p), boundary_tol)
    }

    pub fn bounded_field(&self, p: Point, scale: BoundScale) -> f64 {
        bounded_from_log_field(self.log_field(p), scale)
    }

    /// Like [`ScalarExpr::singularity_margin`], minimised over every leaf. An
    /// even-power leaf is also singular where `f = 0`.
    pub fn singularity_margin(&self, p: Point) -> f64 {
        let fold = |children: &[Region]| {
            children
                .iter()
                .map(|c| c.singularity_margin(p))
                .fold(f64::INFINITY, |a, b| {
                    if a.is_nan() || b.is_nan() {
                        f64::NAN
                    } else {
                        a.min(b)
                    }
                })
        };
        match &self.node {
            Node::Leaf { expr, .. } => expr.singularity_margin(p),
            Node::EvenPower { expr, .. } => {
                let m = expr.singularity_margin(p);
                let f = expr.eval(p).abs();
                if m.is_nan() || f.is_nan() {
                    f64::NAN
                } else {
                    m.min(f)
                }
            }
            Node::Negate(c) => c.singularity_margin(p),
            Node::Intersect(cs) | Node::Union(cs) => fold(cs),
        }
    }

    /// Leaves in depth-first order.
    pub fn leaves(&self) -> Vec<&Region> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves<'a>(&'a self, out: &mut Vec<&'a Region>) {
        match &self.node {
            Node::Leaf { .. } | Node::EvenPower { .. } => out.push(self),
            Node::Negate(c) => c.collect_leaves(out),
            Node::Intersect(cs) | Node::Union(cs) => cs.iter().for_each(|c| c.collect_leaves(out)),
        }
    }

    /// Copy of the tree with every exponential leaf's sharpness replaced.
    pub fn with_sharpness(&self, a: Sharpness) -> Region {
        let node = match &self.node {
            Node::Leaf { expr, latex, .. } => Node::Leaf {
                expr: expr.clone(),
                sharpness: a,
                latex: latex.clone(),
            },
            Node::EvenPower { .. } => self.node.clone(),
            Node::Negate(c) => Node::Negate(Box::new(c.with_sharpness(a))),
            Node::Intersect(cs) => {
                Node::Intersect(cs.iter().map(|c| c.with_sharpness(a)).collect())
            }
            Node::Union(cs) => Node::Union(cs.iter().map(|c| c.with_sharpness(a)).collect()),
        };
        Region { node }
    }
}
