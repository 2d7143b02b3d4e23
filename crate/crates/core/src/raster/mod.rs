//! Grid sampling, the crisp boolean oracle, bitmap comparison, contouring and
//! image output.
//!
//! Bitmaps sample cell centers with row 0 at the top of the window; contours
//! sample cell corners. Every cell is computed independently, so the
//! sequential and parallel paths give bit-identical results.

mod contour;
mod io;

use std::path::PathBuf;

use thiserror::Error;

use crate::expr::Point;
use crate::region::{Membership, Region, RegionError, Sharpness, DEFAULT_BOUNDARY_TOL};
use crate::set::{compile, SetError, SetProgram};

pub use contour::{ContourSet, Polyline};
pub use io::{svg_string, write_pgm, write_svg};

/// Largest grid a default [`Rasterizer`] accepts, 4096².
pub const DEFAULT_MAX_CELLS: usize = 1 << 24;

#[derive(Debug, Error)]
pub enum RasterError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("grid of {cells} cells exceeds the limit of {max}")]
    GridTooLarge { cells: usize, max: usize },
    #[error("bitmaps are on different grids")]
    GridMismatch,
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Set(#[from] SetError),
    #[error(transparent)]
    Region(#[from] RegionError),
}

/// Axis-aligned sampling window split into `nx` by `ny` cells.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub nx: usize,
    pub ny: usize,
}

impl Grid {
    pub fn new(
        x_min: f64,
        x_max: f64,
        y_min: f64,
        y_max: f64,
        nx: usize,
        ny: usize,
    ) -> Result<Self, RasterError> {
        let finite = [x_min, x_max, y_min, y_max].iter().all(|v| v.is_finite());
        if !finite || x_min >= x_max || y_min >= y_max {
            return Err(RasterError::InvalidGrid(format!(
                "bounds [{x_min}, {x_max}] x [{y_min}, {y_max}] must be finite and increasing"
            )));
        }
        if nx == 0 || ny == 0 {
            return Err(RasterError::InvalidGrid(format!(
                "resolution {nx}x{ny} must be positive"
            )));
        }
        Ok(Self {
            x_min,
            x_max,
            y_min,
            y_max,
            nx,
            ny,
        })
    }

    /// Square grid over `[lo, hi]²`.
    pub fn square(lo: f64, hi: f64, n: usize) -> Result<Self, RasterError> {
        Self::new(lo, hi, lo, hi, n, n)
    }

    pub fn cells(&self) -> usize {
        self.nx * self.ny
    }

    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / self.nx as f64
    }

    pub fn dy(&self) -> f64 {
        (self.y_max - self.y_min) / self.ny as f64
    }

    /// Center of cell `(i, j)`, column `i` from the left and row `j` from the top.
    pub fn cell_center(&self, i: usize, j: usize) -> Point {
        Point::new(
            self.x_min + (i as f64 + 0.5) * self.dx(),
            self.y_max - (j as f64 + 0.5) * self.dy(),
        )
    }

    /// Corner `(i, j)` for `i <= nx`, `j <= ny`; `(0, 0)` is the top-left.
    pub fn corner(&self, i: usize, j: usize) -> Point {
        let x = if i == self.nx {
            self.x_max
        } else {
            self.x_min + i as f64 * self.dx()
        };
        let y = if j == self.ny {
            self.y_min
        } else {
            self.y_max - j as f64 * self.dy()
        };
        Point::new(x, y)
    }
}

/// Row-major membership raster; Boundary counts as inside, Undefined as outside.
#[derive(Debug, Clone, PartialEq)]
pub struct Bitmap {
    grid: Grid,
    bits: Vec<bool>,
    undefined: usize,
}

impl Bitmap {
    pub fn from_bits(grid: &Grid, bits: Vec<bool>) -> Result<Self, RasterError> {
        if bits.len() != grid.cells() {
            return Err(RasterError::GridMismatch);
        }
        Ok(Self {
            grid: *grid,
            bits,
            undefined: 0,
        })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn width(&self) -> usize {
        self.grid.nx
    }

    pub fn height(&self) -> usize {
        self.grid.ny
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.bits[j * self.width() + i]
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    /// Cells whose field was NaN; they are stored as outside.
    pub fn undefined_count(&self) -> usize {
        self.undefined
    }

    pub fn inside_count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn inside_fraction(&self) -> f64 {
        self.inside_count() as f64 / self.bits.len() as f64
    }

    pub fn complement(&self) -> Bitmap {
        Bitmap {
            grid: self.grid,
            bits: self.bits.iter().map(|b| !b).collect(),
            undefined: 0,
        }
    }

    /// Binary P5 image, 255 for inside and 0 for outside.
    pub fn pgm_bytes(&self) -> Vec<u8> {
        let mut out = format!("P5\n{} {}\n255\n", self.width(), self.height()).into_bytes();
        out.extend(self.bits.iter().map(|&b| if b { 255u8 } else { 0 }));
        out
    }

    /// Lowercase hex sha256 of [`Bitmap::pgm_bytes`].
    pub fn pgm_sha256(&self) -> String {
        use sha2::{Digest, Sha256};
        Sha256::digest(self.pgm_bytes())
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }
}

/// Cellwise XOR of two bitmaps.
#[derive(Debug, Clone, PartialEq)]
pub struct MismatchReport {
    pub total_cells: usize,
    pub differing_cells: usize,
    pub fraction: f64,
    /// Differing cells per quadrant: top-left, top-right, bottom-left,
    /// bottom-right. An odd middle row or column goes to the bottom or right.
    pub quadrants: [usize; 4],
    pub undefined_a: usize,
    pub undefined_b: usize,
}

pub fn mismatch(a: &Bitmap, b: &Bitmap) -> Result<MismatchReport, RasterError> {
    if a.grid != b.grid {
        return Err(RasterError::GridMismatch);
    }
    let (nx, ny) = (a.width(), a.height());
    let mut quadrants = [0usize; 4];
    for (k, (x, y)) in a.bits.iter().zip(&b.bits).enumerate() {
        if x != y {
            let (i, j) = (k % nx, k / nx);
            let q = usize::from(j >= ny / 2) * 2 + usize::from(i >= nx / 2);
            quadrants[q] += 1;
        }
    }
    let differing: usize = quadrants.iter().sum();
    let total = a.bits.len();
    Ok(MismatchReport {
        total_cells: total,
        differing_cells: differing,
        fraction: differing as f64 / total as f64,
        quadrants,
        undefined_a: a.undefined,
        undefined_b: b.undefined,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    /// Rows in parallel with rayon; sequential when the `parallel` feature is off.
    #[default]
    Parallel,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rasterizer {
    pub max_cells: usize,
    pub execution: Execution,
}

impl Default for Rasterizer {
    fn default() -> Self {
        Self {
            max_cells: DEFAULT_MAX_CELLS,
            execution: Execution::default(),
        }
    }
}

// Per-cell sample classes.
const OUTSIDE: u8 = 0;
const INSIDE: u8 = 1;
const UNDEFINED: u8 = 2;

impl Rasterizer {
    pub fn sequential() -> Self {
        Self {
            execution: Execution::Sequential,
            ..Self::default()
        }
    }

    pub fn parallel() -> Self {
        Self {
            execution: Execution::Parallel,
            ..Self::default()
        }
    }

    fn check(&self, cells: usize) -> Result<(), RasterError> {
        if cells > self.max_cells {
            return Err(RasterError::GridTooLarge {
                cells,
                max: self.max_cells,
            });
        }
        Ok(())
    }

    /// Fills `out` row by row; `width` values per row.
    fn fill_rows<T, F>(&self, out: &mut [T], width: usize, f: F)
    where
        T: Send,
        F: Fn(usize, &mut [T]) + Sync,
    {
        #[cfg(feature = "parallel")]
        if self.execution == Execution::Parallel {
            use rayon::prelude::*;
            out.par_chunks_mut(width)
                .enumerate()
                .for_each(|(j, row)| f(j, row));
            return;
        }
        out.chunks_mut(width)
            .enumerate()
            .for_each(|(j, row)| f(j, row));
    }

    fn classify<F>(&self, grid: &Grid, class: F) -> Result<Bitmap, RasterError>
    where
        F: Fn(Point) -> u8 + Sync,
    {
        self.check(grid.cells())?;
        let mut cells = vec![OUTSIDE; grid.cells()];
        self.fill_rows(&mut cells, grid.nx, |j, row| {
            for (i, c) in row.iter_mut().enumerate() {
                *c = class(grid.cell_center(i, j));
            }
        });
        Ok(Bitmap {
            grid: *grid,
            undefined: cells.iter().filter(|&&c| c == UNDEFINED).count(),
            bits: cells.into_iter().map(|c| c == INSIDE).collect(),
        })
    }

    /// Evaluates the log-field at every cell center.
    pub fn sample_membership(&self, region: &Region, grid: &Grid) -> Result<Bitmap, RasterError> {
        self.classify(grid, |p| {
            match Membership::from_log_field(region.log_field(p), DEFAULT_BOUNDARY_TOL) {
                Membership::Inside | Membership::Boundary => INSIDE,
                Membership::Outside => OUTSIDE,
                Membership::Undefined => UNDEFINED,
            }
        })
    }

    /// Exact set semantics: each definition is a member where `f <= 0` (NaN is
    /// not), combined with crisp boolean logic.
    pub fn boolean_oracle(&self, program: &SetProgram, grid: &Grid) -> Result<Bitmap, RasterError> {
        let names = program.expression.names();
        let bodies = names
            .iter()
            .map(|&n| program.definition(n).map(|d| (n, &d.body)))
            .collect::<Result<Vec<_>, _>>()?;
        let expression = &program.expression;
        self.classify(grid, |p| {
            let mut member = [false; 26];
            for (n, body) in &bodies {
                member[(*n as u8 - b'a') as usize] = body.eval(p) <= 0.0;
            }
            if expression.eval_bool(&|c: char| member[(c as u8 - b'a') as usize]) {
                INSIDE
            } else {
                OUTSIDE
            }
        })
    }

    pub fn marching_squares(
        &self,
        region: &Region,
        grid: &Grid,
    ) -> Result<ContourSet, RasterError> {
        self.check(grid.cells())?;
        let width = grid.nx + 1;
        let mut corners = vec![0.0f64; width * (grid.ny + 1)];
        self.fill_rows(&mut corners, width, |j, row| {
            for (i, v) in row.iter_mut().enumerate() {
                *v = region.log_field(grid.corner(i, j));
            }
        });
        Ok(contour::trace(region, grid, &corners))
    }

    /// Recompiles the program at each global sharpness, in input order.
    pub fn sweep_frames(
        &self,
        program: &SetProgram,
        a_values: &[f64],
        grid: &Grid,
    ) -> Result<Vec<Bitmap>, RasterError> {
        let sharpness = a_values
            .iter()
            .map(|&a| Sharpness::new(a))
            .collect::<Result<Vec<_>, _>>()?;
        sharpness
            .into_iter()
            .map(|a| {
                let region = compile(&program.with_global_sharpness(a))?;
                self.sample_membership(&region, grid)
            })
            .collect()
    }
}

pub fn sample_membership(region: &Region, grid: &Grid) -> Result<Bitmap, RasterError> {
    Rasterizer::default().sample_membership(region, grid)
}

pub fn boolean_oracle(program: &SetProgram, grid: &Grid) -> Result<Bitmap, RasterError> {
    Rasterizer::default().boolean_oracle(program, grid)
}

pub fn marching_squares(region: &Region, grid: &Grid) -> Result<ContourSet, RasterError> {
    Rasterizer::default().marching_squares(region, grid)
}

pub fn sweep_frames(
    program: &SetProgram,
    a_values: &[f64],
    grid: &Grid,
) -> Result<Vec<Bitmap>, RasterError> {
    Rasterizer::default().sweep_frames(program, a_values, grid)
}
