use std::path::{Path, PathBuf};

use anyhow::Context;
use smoothset::expr::{parse_scalar, Point, ScalarExpr};
use smoothset::fixtures::{batman_golden_sha256, MAX_FUNCTIONS, MINMAX_SHARPNESS, MIN_FUNCTIONS};
use smoothset::raster::{write_pgm, write_svg, Bitmap, Grid, Rasterizer};
use smoothset::region::{boundary_solve_y, smooth_max, smooth_min, softplus_boundary};
use smoothset::set::{compile, emit_desmos};
use smoothset::Sharpness;

use crate::commands::{compare_table, oracle_table, print_summary};
use crate::source::{bundled, Loaded};
use crate::{CmdResult, DemoName, Failure};

const CONVERGENCE: [f64; 5] = [2.0, 5.0, 10.0, 20.0, 50.0];
const DISTRIBUTIVE: [f64; 4] = [5.0, 10.0, 20.0, 50.0];
const ANIMATION: [f64; 6] = [1.0, 2.0, 5.0, 10.0, 20.0, 50.0];

struct Demo {
    dir: PathBuf,
    res: usize,
    raster: Rasterizer,
}

impl Demo {
    fn path(&self, file: &str) -> PathBuf {
        self.dir.join(file)
    }

    fn grid(&self, f: &Loaded) -> anyhow::Result<Grid> {
        let [x0, x1, y0, y1] = f.window.expect("bundled fixtures have windows");
        Ok(Grid::new(x0, x1, y0, y1, self.res, self.res)?)
    }

    fn write_pgm(&self, b: &Bitmap, file: &str) -> anyhow::Result<()> {
        let path = self.path(file);
        write_pgm(b, &path)?;
        eprintln!("wrote {}", path.display());
        Ok(())
    }

    /// PGM and SVG of a fixture at its own sharpness.
    fn picture(&self, f: &Loaded) -> anyhow::Result<Bitmap> {
        let region = compile(&f.program)?;
        let grid = self.grid(f)?;
        let bitmap = self.raster.sample_membership(&region, &grid)?;
        self.write_pgm(&bitmap, &format!("{}.pgm", f.label))?;
        let svg = self.path(&format!("{}.svg", f.label));
        write_svg(&self.raster.marching_squares(&region, &grid)?, &svg)?;
        eprintln!("wrote {}", svg.display());
        Ok(bitmap)
    }

    fn export(&self, f: &Loaded) -> anyhow::Result<()> {
        println!("{}", emit_desmos(&compile(&f.program)?)?);
        Ok(())
    }
}

pub fn run(name: DemoName, dir: &Path, res: usize) -> CmdResult {
    if res == 0 {
        return Err(anyhow::anyhow!("--res must be positive").into());
    }
    std::fs::create_dir_all(dir).with_context(|| dir.display().to_string())?;
    let demo = Demo {
        dir: dir.to_owned(),
        res,
        raster: Rasterizer::default(),
    };
    match name {
        DemoName::Circles => circles(&demo),
        DemoName::Batman => batman(&demo),
        DemoName::Example1 => {
            let f = bundled("example1")?;
            demo.export(&f)?;
            print_summary(&demo.picture(&f)?);
            Ok(())
        }
        DemoName::Distributive => distributive(&demo),
        DemoName::Softplus => softplus(&demo),
        DemoName::Minmax => minmax(&demo),
        DemoName::Animation => animation(&demo),
    }
}

fn circles(demo: &Demo) -> CmdResult {
    let f = bundled("circles")?;
    demo.export(&f)?;
    print_summary(&demo.picture(&f)?);
    let table = oracle_table(&demo.raster, &f, &CONVERGENCE, &demo.grid(&f)?)?;
    table.print();
    if !table.nonincreasing() {
        return Err(Failure::Invariant(
            "circle mismatch does not shrink as a grows".into(),
        ));
    }
    Ok(())
}

fn batman(demo: &Demo) -> CmdResult {
    let f = bundled("batman")?;
    let bitmap = demo.picture(&f)?;
    print_summary(&bitmap);
    if let Some(golden) = batman_golden_sha256(demo.res) {
        if bitmap.pgm_sha256() != golden {
            return Err(Failure::Invariant(format!(
                "PGM does not match the frozen checksum {golden}"
            )));
        }
        eprintln!("matches the frozen {}² checksum", demo.res);
    }
    Ok(())
}

fn distributive(demo: &Demo) -> CmdResult {
    let (eq12, eq13) = (bundled("eq12")?, bundled("eq13")?);
    let grid = demo.grid(&eq12)?;
    for (f, label) in [(&eq12, "eq12"), (&eq13, "eq13")] {
        for a in [5.0, 50.0] {
            let region = compile(&f.program.with_global_sharpness(Sharpness::new(a)?))?;
            demo.write_pgm(
                &demo.raster.sample_membership(&region, &grid)?,
                &format!("{label}_a{a}.pgm"),
            )?;
        }
    }
    let table = compare_table(&demo.raster, &eq12, &eq13, &DISTRIBUTIVE, &grid)?;
    table.print();
    let first = table.column.first().copied().unwrap_or(0.0);
    let last = table.column.last().copied().unwrap_or(0.0);
    if last >= first && first > 0.0 {
        return Err(Failure::Invariant(
            "the two forms do not get closer as a grows".into(),
        ));
    }
    Ok(())
}

fn softplus(demo: &Demo) -> CmdResult {
    let f = bundled("softplus")?;
    demo.picture(&f)?;
    let a = Sharpness::new(1.0)?;
    let region = compile(&f.program.with_global_sharpness(a))?;
    println!("x\tboundary_y\tln(1+e^ax)/a\tabs_diff");
    let mut worst: f64 = 0.0;
    for k in 0..=20 {
        let x = -5.0 + 0.5 * k as f64;
        let y = boundary_solve_y(&region, x, -10.0, 10.0, 1e-14)?;
        let exact = softplus_boundary(a, x);
        worst = worst.max((y - exact).abs());
        println!("{x}\t{y}\t{exact}\t{:e}", (y - exact).abs());
    }
    if worst >= 1e-9 {
        return Err(Failure::Invariant(format!(
            "boundary differs from softplus by {worst:e}"
        )));
    }
    Ok(())
}

fn exact(gs: &[ScalarExpr], x: f64, pick: fn(f64, f64) -> f64, start: f64) -> f64 {
    gs.iter()
        .map(|g| g.eval(Point::new(x, 0.0)))
        .fold(start, pick)
}

fn minmax(demo: &Demo) -> CmdResult {
    let parse = |v: &[&str]| -> anyhow::Result<Vec<ScalarExpr>> {
        v.iter()
            .map(|s| parse_scalar(s).map_err(Into::into))
            .collect()
    };
    let (gmin, gmax) = (parse(MIN_FUNCTIONS)?, parse(MAX_FUNCTIONS)?);
    let a = Sharpness::new(MINMAX_SHARPNESS)?;
    for name in ["min", "max"] {
        demo.picture(&bundled(name)?)?;
    }
    let bound_min = (gmin.len() as f64).ln() / a.get();
    let bound_max = (gmax.len() as f64).ln() / a.get();
    println!("x\tmin\tsmooth_min\tmin_gap\tmax\tsmooth_max\tmax_gap");
    let mut bad = Vec::new();
    for k in 0..=40 {
        let x = -10.0 + 0.5 * k as f64;
        let (lo, hi) = (
            exact(&gmin, x, f64::min, f64::INFINITY),
            exact(&gmax, x, f64::max, f64::NEG_INFINITY),
        );
        let (slo, shi) = (smooth_min(&gmin, a, x)?, smooth_max(&gmax, a, x)?);
        let (dlo, dhi) = (lo - slo, shi - hi);
        if !(0.0..=bound_min).contains(&dlo) || !(0.0..=bound_max).contains(&dhi) {
            bad.push(x);
        }
        println!("{x}\t{lo}\t{slo}\t{dlo:e}\t{hi}\t{shi}\t{dhi:e}");
    }
    eprintln!(
        "bounds: ln({})/a = {bound_min}, ln({})/a = {bound_max}",
        gmin.len(),
        gmax.len()
    );
    if !bad.is_empty() {
        return Err(Failure::Invariant(format!(
            "gap outside [0, ln n / a] at x = {bad:?}"
        )));
    }
    Ok(())
}

fn animation(demo: &Demo) -> CmdResult {
    let f = bundled("animation")?;
    let grid = demo.grid(&f)?;
    let frames = demo.raster.sweep_frames(&f.program, &ANIMATION, &grid)?;
    let oracle = demo.raster.boolean_oracle(&f.program, &grid)?;
    println!("frame\ta\tinside_fraction\tmismatch");
    for (k, (a, frame)) in ANIMATION.iter().zip(&frames).enumerate() {
        demo.write_pgm(frame, &format!("animation_{k:02}.pgm"))?;
        let m = smoothset::raster::mismatch(frame, &oracle)?;
        println!("{k}\t{a}\t{}\t{}", frame.inside_fraction(), m.fraction);
    }
    Ok(())
}
