//! Smooth set algebra over 2D implicit regions.
//!
//! Inequalities `f(x, y) <= 0` become leaves of a [`Region`] tree whose field
//! `F` satisfies `inside <=> F <= 1`. Negation, intersection and union are
//! closed under that contract, so compound regions nest without re-encoding,
//! and every field is differentiable wherever its inputs are.
//!
//! - [`expr`]: scalar expressions in `x` and `y`, with dual-number derivatives
//!   and a LaTeX emitter.
//! - [`region`]: the region algebra evaluated in the log domain, plus smooth
//!   min/max, the softplus boundary and the membership loss.
//! - [`set`]: postfix and infix set expressions, definition files, Desmos
//!   export and the appendix-compatible script replay.
//! - [`raster`]: bitmaps, the crisp boolean oracle, mismatch metrics, marching
//!   squares, PGM/SVG output and sharpness sweeps.
//! - [`gradcheck`]: autodiff against central differences.
//! - [`fixtures`]: bundled example programs.
//!
//! ```
//! use smoothset::set::{compile, parse_program};
//! use smoothset::expr::Point;
//!
//! let program = parse_program(
//!     "def a : x^2+y^2-4\n\
//!      def b : (x-2.5)^2+y^2-4\n\
//!      expr postfix ab|\n",
//! )
//! .unwrap();
//! let region = compile(&program).unwrap();
//! assert!(region.log_field(Point::new(0.0, 0.0)) < 0.0);
//! assert!(region.log_field(Point::new(5.0, 0.0)) > 0.0);
//! ```

pub mod expr;
pub mod fixtures;
pub mod gradcheck;
pub mod raster;
pub mod region;
pub mod set;

pub use expr::{parse_scalar, Dual, Point, ScalarExpr};
pub use region::{Membership, Region, RegionError, Sharpness};
