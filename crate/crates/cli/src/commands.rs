use std::path::Path;

use anyhow::{anyhow, bail, Context};
use smoothset::fixtures::{self, APPENDIX_SESSION};
use smoothset::gradcheck::{gradcheck as run_gradcheck, GradcheckConfig};
use smoothset::raster::{mismatch, write_pgm, write_svg, Bitmap, Rasterizer};
use smoothset::set::{
    compile as compile_program, emit_desmos_with, parse_appendix_input, replay_appendix, BodyStyle,
};
use smoothset::Sharpness;

use crate::source::{self, Loaded};
use crate::{CmdResult, Emit, Failure, GridArgs, OptionalSource, SourceArgs};

pub fn compile(args: &SourceArgs, emit: Emit, appendix: bool) -> CmdResult {
    if appendix {
        if args.sharpness.is_some() {
            return Err(anyhow!(
                "--sharpness cannot be combined with --appendix; the session sets its own"
            )
            .into());
        }
        return match (&args.file, args.fixture.as_deref()) {
            (Some(path), _) => replay(Some(path)),
            (None, Some("appendix")) => replay(None),
            (None, Some(other)) => Err(anyhow!(
                "no appendix session named '{other}'; the bundled one is 'appendix'"
            )
            .into()),
            (None, None) => unreachable!("clap requires a source"),
        };
    }
    let loaded = source::load(args)?;
    let region = compile_program(&loaded.program)?;
    let style = match emit {
        Emit::Desmos => BodyStyle::Verbatim,
        Emit::Latex => BodyStyle::Normalized,
    };
    println!("{}", emit_desmos_with(&region, style)?);
    Ok(())
}

pub fn replay(file: Option<&Path>) -> CmdResult {
    let text = match file {
        Some(path) => std::fs::read_to_string(path).with_context(|| path.display().to_string())?,
        None => APPENDIX_SESSION.to_owned(),
    };
    let replay = replay_appendix(&parse_appendix_input(&text)?)?;
    print!("{}", replay.transcript);
    Ok(())
}

pub fn render(
    args: &SourceArgs,
    grid_args: &GridArgs,
    out: &Path,
    contour: Option<&Path>,
) -> CmdResult {
    let loaded = source::load(args)?;
    let grid = source::grid(grid_args, loaded.window)?;
    let raster = source::rasterizer(grid_args);
    let region = compile_program(&loaded.program)?;
    let bitmap = raster.sample_membership(&region, &grid)?;
    write_pgm(&bitmap, out)?;
    if let Some(svg) = contour {
        write_svg(&raster.marching_squares(&region, &grid)?, svg)?;
    }
    print_summary(&bitmap);
    Ok(())
}

pub fn print_summary(b: &Bitmap) {
    println!("cells\tinside\tundefined\tinside_fraction\tsha256");
    println!(
        "{}\t{}\t{}\t{}\t{}",
        b.bits().len(),
        b.inside_count(),
        b.undefined_count(),
        b.inside_fraction(),
        b.pgm_sha256()
    );
}

fn sharpness_list(a_list: &[f64]) -> anyhow::Result<Vec<Sharpness>> {
    if a_list.is_empty() {
        bail!("--a-list is empty");
    }
    a_list
        .iter()
        .map(|&a| Sharpness::new(a).with_context(|| format!("--a-list value {a}")))
        .collect()
}

fn frames(
    raster: &Rasterizer,
    loaded: &Loaded,
    a: &[f64],
    grid: &smoothset::raster::Grid,
) -> anyhow::Result<Vec<Bitmap>> {
    Ok(raster.sweep_frames(&loaded.program, a, grid)?)
}

/// Rows of `(a, mismatch fraction, differing cells, cells)` and any extra columns.
pub struct ErrorTable {
    pub header: Vec<&'static str>,
    pub rows: Vec<(f64, Vec<String>)>,
    pub column: Vec<f64>,
}

impl ErrorTable {
    pub fn print(&self) {
        println!("{}", self.header.join("\t"));
        for (a, cells) in &self.rows {
            println!("{a}\t{}", cells.join("\t"));
        }
    }

    pub fn nonincreasing(&self) -> bool {
        self.column.windows(2).all(|w| w[1] <= w[0])
    }
}

pub fn oracle_table(
    raster: &Rasterizer,
    loaded: &Loaded,
    a: &[f64],
    grid: &smoothset::raster::Grid,
) -> anyhow::Result<ErrorTable> {
    let oracle = raster.boolean_oracle(&loaded.program, grid)?;
    let mut table = ErrorTable {
        header: vec!["a", "mismatch", "differing", "cells"],
        rows: Vec::new(),
        column: Vec::new(),
    };
    for (&a, frame) in a.iter().zip(frames(raster, loaded, a, grid)?) {
        let m = mismatch(&frame, &oracle)?;
        table.column.push(m.fraction);
        table.rows.push((
            a,
            vec![
                m.fraction.to_string(),
                m.differing_cells.to_string(),
                m.total_cells.to_string(),
            ],
        ));
    }
    Ok(table)
}

pub fn compare_table(
    raster: &Rasterizer,
    first: &Loaded,
    second: &Loaded,
    a: &[f64],
    grid: &smoothset::raster::Grid,
) -> anyhow::Result<ErrorTable> {
    let oracle_a = raster.boolean_oracle(&first.program, grid)?;
    let oracle_b = raster.boolean_oracle(&second.program, grid)?;
    let fa = frames(raster, first, a, grid)?;
    let fb = frames(raster, second, a, grid)?;
    let mut table = ErrorTable {
        header: vec![
            "a",
            "mismatch",
            "differing",
            "cells",
            "a_vs_oracle",
            "b_vs_oracle",
        ],
        rows: Vec::new(),
        column: Vec::new(),
    };
    for ((&a, x), y) in a.iter().zip(&fa).zip(&fb) {
        let m = mismatch(x, y)?;
        table.column.push(m.fraction);
        table.rows.push((
            a,
            vec![
                m.fraction.to_string(),
                m.differing_cells.to_string(),
                m.total_cells.to_string(),
                mismatch(x, &oracle_a)?.fraction.to_string(),
                mismatch(y, &oracle_b)?.fraction.to_string(),
            ],
        ));
    }
    Ok(table)
}

pub fn error_map(
    args: &OptionalSource,
    grid_args: &GridArgs,
    a_list: &[f64],
    compare: Option<&[String]>,
    check: bool,
) -> CmdResult {
    sharpness_list(a_list)?;
    let raster = source::rasterizer(grid_args);
    let table = match compare {
        Some([first, second]) => {
            let (first, second) = (source::name_or_path(first)?, source::name_or_path(second)?);
            let grid = source::grid(grid_args, first.window.or(second.window))?;
            compare_table(&raster, &first, &second, a_list, &grid)?
        }
        Some(_) => unreachable!("clap takes exactly two values"),
        None => {
            let loaded = match (&args.file, &args.fixture) {
                (Some(path), None) => source::from_file(path)?,
                (None, Some(name)) => source::bundled(name)?,
                _ => return Err(anyhow!("give a program file, --fixture or --compare A B").into()),
            };
            let grid = source::grid(grid_args, loaded.window)?;
            oracle_table(&raster, &loaded, a_list, &grid)?
        }
    };
    table.print();
    if check && !table.nonincreasing() {
        return Err(Failure::Invariant(format!(
            "mismatch increases somewhere along a = {a_list:?}"
        )));
    }
    Ok(())
}

pub fn gradcheck(
    args: &SourceArgs,
    window: Option<[f64; 4]>,
    config: &GradcheckConfig,
) -> CmdResult {
    if config.points == 0 {
        return Err(anyhow!("--points must be positive").into());
    }
    let loaded = source::load(args)?;
    let window = window
        .or(loaded.window)
        .ok_or_else(|| anyhow!("--window x0,x1,y0,y1 is required for program files"))?;
    let region = compile_program(&loaded.program)?;
    let report = run_gradcheck(&region, window, config);
    let worst = report
        .worst_point
        .map_or_else(|| "-\t-".to_owned(), |p| format!("{}\t{}", p.x, p.y));
    println!("requested\t{}", report.requested);
    println!("accepted\t{}", report.accepted);
    println!("attempts\t{}", report.attempts);
    println!("excluded_near_boundary\t{}", report.near_boundary);
    println!("excluded_near_singularity\t{}", report.near_singularity);
    println!("excluded_non_finite\t{}", report.non_finite);
    println!("max_rel_error\t{:e}", report.max_rel_error);
    println!("worst_point\t{worst}");
    println!("tolerance\t{:e}", report.tolerance);
    if report.passed() {
        Ok(())
    } else if report.accepted == 0 {
        Err(Failure::Invariant(format!(
            "no usable points in {} attempts",
            report.attempts
        )))
    } else {
        Err(Failure::Invariant(format!(
            "max relative error {:e} is not below {:e}",
            report.max_rel_error, report.tolerance
        )))
    }
}

pub fn list_fixtures() {
    println!("name\tx_min\tx_max\ty_min\ty_max");
    for f in fixtures::FIXTURES {
        let [x0, x1, y0, y1] = f.window;
        println!("{}\t{x0}\t{x1}\t{y0}\t{y1}", f.name);
    }
}
