use std::path::Path;

use anyhow::{anyhow, bail, Context};
use smoothset::fixtures::{self, fixture};
use smoothset::raster::{Execution, Grid, Rasterizer};
use smoothset::set::{load_program, SetProgram};
use smoothset::Sharpness;

use crate::{GridArgs, SourceArgs};

pub fn parse_window(s: &str) -> Result<[f64; 4], String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [x0, x1, y0, y1] = parts[..] else {
        return Err(format!("expected x0,x1,y0,y1, got '{s}'"));
    };
    let mut w = [0.0; 4];
    for (slot, p) in w.iter_mut().zip([x0, x1, y0, y1]) {
        *slot = p.parse().map_err(|_| format!("'{p}' is not a number"))?;
    }
    Ok(w)
}

pub fn parse_res(s: &str) -> Result<(usize, usize), String> {
    let dim = |p: &str| -> Result<usize, String> {
        match p.trim().parse::<usize>() {
            Ok(0) => Err("resolution must be positive".into()),
            Ok(n) => Ok(n),
            Err(_) => Err(format!("'{p}' is not a cell count")),
        }
    };
    match s.split_once(['x', 'X']) {
        Some((nx, ny)) => Ok((dim(nx)?, dim(ny)?)),
        None => dim(s).map(|n| (n, n)),
    }
}

/// A program plus the window to show it in, if it came with one.
pub struct Loaded {
    pub label: String,
    pub program: SetProgram,
    pub window: Option<[f64; 4]>,
}

pub fn bundled(name: &str) -> anyhow::Result<Loaded> {
    let f = fixture(name).ok_or_else(|| {
        let known: Vec<&str> = fixtures::names().collect();
        anyhow!("unknown fixture '{name}' (known: {})", known.join(", "))
    })?;
    Ok(Loaded {
        label: f.name.to_owned(),
        program: f.program()?,
        window: Some(f.window),
    })
}

pub fn from_file(path: &Path) -> anyhow::Result<Loaded> {
    Ok(Loaded {
        label: path.display().to_string(),
        program: load_program(path)?,
        window: None,
    })
}

/// A fixture name if one matches, otherwise a path.
pub fn name_or_path(s: &str) -> anyhow::Result<Loaded> {
    if fixture(s).is_some() {
        bundled(s)
    } else {
        from_file(Path::new(s))
    }
}

pub fn sharpness(a: Option<f64>) -> anyhow::Result<Option<Sharpness>> {
    a.map(|a| Sharpness::new(a).with_context(|| format!("--sharpness {a}")))
        .transpose()
}

pub fn load(args: &SourceArgs) -> anyhow::Result<Loaded> {
    let override_a = sharpness(args.sharpness)?;
    let mut loaded = match (&args.file, &args.fixture) {
        (Some(path), None) => from_file(path)?,
        (None, Some(name)) => bundled(name)?,
        _ => bail!("give either a program file or --fixture"),
    };
    if let Some(a) = override_a {
        loaded.program = loaded.program.with_global_sharpness(a);
    }
    Ok(loaded)
}

pub fn grid(args: &GridArgs, fallback: Option<[f64; 4]>) -> anyhow::Result<Grid> {
    let [x0, x1, y0, y1] = args
        .grid
        .or(fallback)
        .ok_or_else(|| anyhow!("--grid x0,x1,y0,y1 is required for program files"))?;
    let (nx, ny) = args.res;
    Ok(Grid::new(x0, x1, y0, y1, nx, ny)?)
}

pub fn rasterizer(args: &GridArgs) -> Rasterizer {
    Rasterizer {
        execution: if args.sequential {
            Execution::Sequential
        } else {
            Execution::Parallel
        },
        ..Rasterizer::default()
    }
}
