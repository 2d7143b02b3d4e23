//! Example programs bundled with the crate, with their default windows.

use crate::raster::{Grid, RasterError};
use crate::set::{parse_program, SetError, SetProgram};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fixture {
    pub name: &'static str,
    /// Program text in the definition-file format.
    pub source: &'static str,
    /// `[x_min, x_max, y_min, y_max]`
    pub window: [f64; 4],
}

impl Fixture {
    pub fn program(&self) -> Result<SetProgram, SetError> {
        parse_program(self.source)
    }

    /// The default window at `n` by `n` cells.
    pub fn grid(&self, n: usize) -> Result<Grid, RasterError> {
        let [x0, x1, y0, y1] = self.window;
        Grid::new(x0, x1, y0, y1, n, n)
    }
}

macro_rules! fixture {
    ($name:literal, $window:expr) => {
        Fixture {
            name: $name,
            source: include_str!(concat!("../fixtures/", $name, ".set")),
            window: $window,
        }
    };
}

pub const FIXTURES: &[Fixture] = &[
    fixture!("circles", [-3.0, 5.0, -4.0, 4.0]),
    fixture!("batman", [-4.0, 4.0, -4.0, 4.0]),
    fixture!("example1", [-4.0, 4.0, -4.0, 4.0]),
    fixture!("eq12", [-3.0, 4.0, -3.0, 4.0]),
    fixture!("eq13", [-3.0, 4.0, -3.0, 4.0]),
    fixture!("eq14", [-3.0, 4.0, -3.0, 4.0]),
    fixture!("animation", [-1.0, 6.0, -1.0, 6.0]),
    fixture!("softplus", [-5.0, 5.0, -5.0, 5.0]),
    fixture!("min", [-10.0, 10.0, -15.0, 15.0]),
    fixture!("max", [-10.0, 10.0, -15.0, 15.0]),
];

pub fn fixture(name: &str) -> Option<&'static Fixture> {
    FIXTURES.iter().find(|f| f.name == name)
}

pub fn names() -> impl Iterator<Item = &'static str> {
    FIXTURES.iter().map(|f| f.name)
}

/// Answers to the interactive script's prompts, as read by
/// [`crate::set::parse_appendix_input`].
pub const APPENDIX_SESSION: &str = include_str!("../fixtures/appendix.txt");

/// The inequality the script prints for [`APPENDIX_SESSION`].
pub const APPENDIX_RESULT: &str = "e^{50*(x-2)}+e^{50*(\\left(x-2\\right)^2+\\left(y-3.3\\right)^2)}+e^{50*(\\left(x-2\\right)^2+\\left(y-3.3\\right)^2)}\\le1";

/// Functions whose smooth minimum the `min` fixture bounds from above.
pub const MIN_FUNCTIONS: &[&str] = &["sin(x)", "x+5", "-x+5", "-(x/3)^2+10"];
/// Functions whose smooth maximum the `max` fixture bounds from below.
pub const MAX_FUNCTIONS: &[&str] = &["x-5", "-x-5", "sin(x)"];
pub const MINMAX_SHARPNESS: f64 = 10.0;

/// Frozen sha256 of the Batman PGM at `n`² on its default window.
pub fn batman_golden_sha256(n: usize) -> Option<&'static str> {
    match n {
        256 => Some(include_str!("../fixtures/batman.256.sha256").trim_ascii()),
        512 => Some(include_str!("../fixtures/batman.512.sha256").trim_ascii()),
        _ => None,
    }
}
