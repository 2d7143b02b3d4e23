use crate::expr::{Point, ScalarExpr};

use super::Membership;

/// Two raw inequality functions combined by multiplication:
/// `(f1 - 1) (f2 - 1) <= 0`.
///
/// Membership follows the sign of the product literally. The product is not a
/// field in the `F <= 1` sense and cannot be nested inside a [`super::Region`].
#[derive(Debug, Clone, PartialEq)]
pub struct RawProductRegion {
    pub f1: ScalarExpr,
    pub f2: ScalarExpr,
}

impl RawProductRegion {
    pub fn new(f1: ScalarExpr, f2: ScalarExpr) -> Self {
        Self { f1, f2 }
    }

    pub fn product(&self, p: Point) -> f64 {
        (self.f1.eval(p) - 1.0) * (self.f2.eval(p) - 1.0)
    }

    pub fn membership(&self, p: Point) -> Membership {
        let v = self.product(p);
        if v.is_nan() {
            Membership::Undefined
        } else if v <= 0.0 {
            Membership::Inside
        } else {
            Membership::Outside
        }
    }
}
