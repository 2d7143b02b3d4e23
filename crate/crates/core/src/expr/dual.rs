use super::{is_integer, real_pow, Number};

/// Forward-mode dual number carrying the partial derivatives with respect to
/// `x` and `y`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dual {
    pub value: f64,
    pub dx: f64,
    pub dy: f64,
}

impl Dual {
    pub const fn new(value: f64, dx: f64, dy: f64) -> Self {
        Self { value, dx, dy }
    }

    fn chain(self, value: f64, slope: f64) -> Self {
        Self::new(value, slope * self.dx, slope * self.dy)
    }

    fn is_constant(self) -> bool {
        self.dx == 0.0 && self.dy == 0.0
    }

    pub fn gradient(self) -> (f64, f64) {
        (self.dx, self.dy)
    }
}

impl Number for Dual {
    fn constant(c: f64) -> Self {
        Self::new(c, 0.0, 0.0)
    }

    fn var_x(x: f64) -> Self {
        Self::new(x, 1.0, 0.0)
    }

    fn var_y(y: f64) -> Self {
        Self::new(y, 0.0, 1.0)
    }

    fn value(self) -> f64 {
        self.value
    }

    fn add(self, rhs: Self) -> Self {
        Self::new(self.value + rhs.value, self.dx + rhs.dx, self.dy + rhs.dy)
    }

    fn sub(self, rhs: Self) -> Self {
        Self::new(self.value - rhs.value, self.dx - rhs.dx, self.dy - rhs.dy)
    }

    fn mul(self, rhs: Self) -> Self {
        Self::new(
            self.value * rhs.value,
            self.dx * rhs.value + self.value * rhs.dx,
            self.dy * rhs.value + self.value * rhs.dy,
        )
    }

    fn div(self, rhs: Self) -> Self {
        if rhs.value == 0.0 {
            return Self::new(f64::NAN, f64::NAN, f64::NAN);
        }
        let v = self.value / rhs.value;
        let d2 = rhs.value * rhs.value;
        Self::new(
            v,
            (self.dx * rhs.value - self.value * rhs.dx) / d2,
            (self.dy * rhs.value - self.value * rhs.dy) / d2,
        )
    }

    fn pow(self, rhs: Self) -> Self {
        let value = real_pow(self.value, rhs.value);
        if value.is_nan() {
            return Self::new(f64::NAN, f64::NAN, f64::NAN);
        }
        // d(u^v) = v u^(v-1) du + u^v ln(u) dv
        let base_part = if self.is_constant() {
            (0.0, 0.0)
        } else {
            let e = rhs.value;
            let slope = if is_integer(e) && e.round() == 0.0 {
                0.0
            } else {
                e * real_pow(self.value, e - 1.0)
            };
            (slope * self.dx, slope * self.dy)
        };
        let exp_part = if rhs.is_constant() {
            (0.0, 0.0)
        } else {
            let l = <f64 as Number>::ln(self.value);
            (value * l * rhs.dx, value * l * rhs.dy)
        };
        Self::new(value, base_part.0 + exp_part.0, base_part.1 + exp_part.1)
    }

    fn neg(self) -> Self {
        Self::new(-self.value, -self.dx, -self.dy)
    }

    fn scale(self, k: f64) -> Self {
        Self::new(self.value * k, self.dx * k, self.dy * k)
    }

    fn exp(self) -> Self {
        let v = self.value.exp();
        self.chain(v, v)
    }

    fn ln(self) -> Self {
        if self.value <= 0.0 {
            return Self::new(f64::NAN, f64::NAN, f64::NAN);
        }
        self.chain(self.value.ln(), 1.0 / self.value)
    }

    fn ln_1p(self) -> Self {
        self.chain(self.value.ln_1p(), 1.0 / (1.0 + self.value))
    }

    fn sin(self) -> Self {
        self.chain(self.value.sin(), self.value.cos())
    }

    fn cos(self) -> Self {
        self.chain(self.value.cos(), -self.value.sin())
    }

    fn abs(self) -> Self {
        let s = if self.value > 0.0 {
            1.0
        } else if self.value < 0.0 {
            -1.0
        } else {
            // one-sided derivatives disagree
            f64::NAN
        };
        self.chain(self.value.abs(), s)
    }
}
