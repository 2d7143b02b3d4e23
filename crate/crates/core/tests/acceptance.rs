//! Acceptance checks, one PASS/FAIL line each. Exits non-zero on any failure.

use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use smoothset::expr::{parse_scalar, Point};
use smoothset::fixtures::{self, Fixture, FIXTURES};
use smoothset::gradcheck::{gradcheck, GradcheckConfig};
use smoothset::raster::{mismatch, Bitmap, Rasterizer};
use smoothset::region::{
    boundary_solve_y, bounded_from_log_field, smooth_max, smooth_min, BoundScale, Membership,
};
use smoothset::set::{compile, emit_desmos, parse_appendix_input, replay_appendix, SetProgram};
use smoothset::{Region, Sharpness};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn sharp(a: f64) -> Sharpness {
    Sharpness::new(a).expect("positive sharpness")
}

fn region_at(program: &SetProgram, a: f64) -> Region {
    compile(&program.with_global_sharpness(sharp(a))).expect("fixture compiles")
}

fn fixture(name: &str) -> &'static Fixture {
    fixtures::fixture(name).expect("bundled fixture")
}

fn fractions(values: &[f64]) -> String {
    values
        .iter()
        .map(|f| format!("{f:.5}"))
        .collect::<Vec<_>>()
        .join(", ")
}

fn nonincreasing(values: &[f64]) -> bool {
    values.windows(2).all(|w| w[1] <= w[0])
}

fn circle_convergence() -> Outcome {
    let start = Instant::now();
    let raster = Rasterizer::sequential();
    let f = fixture("circles");
    let program = f.program().map_err(|e| e.to_string())?;
    let grid = f.grid(512).map_err(|e| e.to_string())?;
    let oracle = raster
        .boolean_oracle(&program, &grid)
        .map_err(|e| e.to_string())?;
    let mut errs = Vec::new();
    for a in [2.0, 5.0, 10.0, 20.0, 50.0] {
        let b = raster
            .sample_membership(&region_at(&program, a), &grid)
            .map_err(|e| e.to_string())?;
        errs.push(mismatch(&b, &oracle).map_err(|e| e.to_string())?.fraction);
    }
    let secs = start.elapsed().as_secs_f64();
    let detail = format!(
        "mismatch over a=2,5,10,20,50: [{}]; {secs:.2}s sequential",
        fractions(&errs)
    );
    if nonincreasing(&errs) && errs[4] < 0.005 && secs < 5.0 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn distributivity() -> Outcome {
    let raster = Rasterizer::default();
    let eq12 = fixture("eq12");
    let eq13 = fixture("eq13").program().map_err(|e| e.to_string())?;
    let p12 = eq12.program().map_err(|e| e.to_string())?;
    let grid = eq12.grid(512).map_err(|e| e.to_string())?;
    let oracle = raster
        .boolean_oracle(&p12, &grid)
        .map_err(|e| e.to_string())?;
    let sample =
        |p: &SetProgram, a: f64| raster.sample_membership(&region_at(p, a), &grid).unwrap();
    let pair = |a: f64| {
        let (x, y) = (sample(&p12, a), sample(&eq13, a));
        let between = mismatch(&x, &y).unwrap().fraction;
        (
            between,
            mismatch(&x, &oracle).unwrap().fraction,
            mismatch(&y, &oracle).unwrap().fraction,
        )
    };
    let (d5, _, _) = pair(5.0);
    let (d50, e12, e13) = pair(50.0);
    let detail = format!(
        "eq12 vs eq13: {d5:.5} at a=5, {d50:.5} at a=50; vs oracle at a=50: {e12:.5}, {e13:.5}"
    );
    if d50 < d5 && e12 < 0.01 && e13 < 0.01 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn same(a: f64, b: f64) -> f64 {
    if a.is_nan() && b.is_nan() || a == b {
        0.0
    } else {
        (a - b).abs()
    }
}

fn identities() -> Outcome {
    const PER_FIXTURE: usize = 1000;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst: [(f64, &str); 5] = [(0.0, ""); 5];
    let names = [
        "de morgan",
        "commutativity",
        "associativity",
        "double negation",
        "self-union",
    ];
    let mut points = 0;
    for f in FIXTURES {
        let r = compile(&f.program().map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        let leaves = r.leaves();
        let (s, t) = ((*leaves[0]).clone(), (*leaves[leaves.len() - 1]).clone());
        let neg = Region::negate;
        let and = |v: Vec<Region>| Region::intersect(v).unwrap();
        let or = |v: Vec<Region>| Region::union(v).unwrap();
        let pairs: [Vec<(Region, Region)>; 4] = [
            vec![(
                or(vec![r.clone(), s.clone()]),
                neg(and(vec![neg(r.clone()), neg(s.clone())])),
            )],
            vec![
                (
                    and(vec![r.clone(), s.clone()]),
                    and(vec![s.clone(), r.clone()]),
                ),
                (
                    or(vec![r.clone(), t.clone()]),
                    or(vec![t.clone(), r.clone()]),
                ),
            ],
            vec![
                (
                    and(vec![and(vec![r.clone(), s.clone()]), t.clone()]),
                    and(vec![r.clone(), and(vec![s.clone(), t.clone()])]),
                ),
                (
                    or(vec![or(vec![r.clone(), s.clone()]), t.clone()]),
                    or(vec![r.clone(), or(vec![s.clone(), t.clone()])]),
                ),
            ],
            vec![(neg(neg(r.clone())), r.clone())],
        ];
        let self_union = or(vec![r.clone(), r.clone()]);
        let [x0, x1, y0, y1] = f.window;
        for _ in 0..PER_FIXTURE {
            let p = Point::new(rng.gen_range(x0..x1), rng.gen_range(y0..y1));
            points += 1;
            for (k, group) in pairs.iter().enumerate() {
                for (lhs, rhs) in group {
                    let d = same(lhs.log_field(p), rhs.log_field(p));
                    if d > worst[k].0 {
                        worst[k] = (d, f.name);
                    }
                }
            }
            let d = same(
                self_union.log_field(p),
                r.log_field(p) - std::f64::consts::LN_2,
            );
            if d > worst[4].0 {
                worst[4] = (d, f.name);
            }
        }
    }
    let detail = names
        .iter()
        .zip(&worst)
        .map(|(n, (d, at))| {
            if *d > 0.0 {
                format!("{n} {d:.1e} ({at})")
            } else {
                format!("{n} 0")
            }
        })
        .collect::<Vec<_>>()
        .join(", ");
    let detail = format!("max |dL| at {points} points: {detail}");
    if worst.iter().all(|(d, _)| *d <= 1e-12) {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn softplus() -> Outcome {
    let program = fixture("softplus").program().map_err(|e| e.to_string())?;
    let mut max_err: f64 = 0.0;
    let mut gap_ok = true;
    for a in [1.0, 5.0, 20.0] {
        let r = region_at(&program, a);
        let mut sup_gap: f64 = 0.0;
        for k in 0..50 {
            let x = -5.0 + 10.0 * k as f64 / 49.0;
            let y = boundary_solve_y(&r, x, -10.0, 10.0, 1e-14).map_err(|e| e.to_string())?;
            let exact = (1.0 + (a * x).exp()).ln() / a;
            max_err = max_err.max((y - exact).abs());
            sup_gap = sup_gap.max(y - x.max(0.0));
        }
        gap_ok &= sup_gap <= std::f64::consts::LN_2 / a;
    }
    let r1 = region_at(&program, 1.0);
    let at0 = boundary_solve_y(&r1, 0.0, -10.0, 10.0, 1e-14).map_err(|e| e.to_string())?;
    let err0 = (at0 - std::f64::consts::LN_2).abs();
    let detail = format!(
        "max |y - ln(1+e^ax)/a| {max_err:.1e} over a=1,5,20; |y(0) - ln 2| {err0:.1e}; gap <= ln2/a: {gap_ok}"
    );
    if max_err < 1e-9 && err0 < 1e-9 && gap_ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn minmax() -> Outcome {
    let a = fixtures::MINMAX_SHARPNESS;
    let parse = |v: &[&str]| {
        v.iter()
            .map(|s| parse_scalar(s).unwrap())
            .collect::<Vec<_>>()
    };
    let (gmin, gmax) = (
        parse(fixtures::MIN_FUNCTIONS),
        parse(fixtures::MAX_FUNCTIONS),
    );
    let exact_min = |x: f64| {
        [x.sin(), x + 5.0, -x + 5.0, -(x / 3.0) * (x / 3.0) + 10.0]
            .into_iter()
            .fold(f64::INFINITY, f64::min)
    };
    let exact_max = |x: f64| {
        [x - 5.0, -x - 5.0, x.sin()]
            .into_iter()
            .fold(f64::NEG_INFINITY, f64::max)
    };
    let (bound_min, bound_max) = ((4f64).ln() / a, (3f64).ln() / a);
    let (mut lo_gap, mut hi_gap) = (f64::INFINITY, f64::NEG_INFINITY);
    let mut ok = true;
    for k in 0..1000 {
        let x = -10.0 + 20.0 * k as f64 / 999.0;
        let dmin = exact_min(x) - smooth_min(&gmin, sharp(a), x).map_err(|e| e.to_string())?;
        let dmax = smooth_max(&gmax, sharp(a), x).map_err(|e| e.to_string())? - exact_max(x);
        ok &= (0.0..=bound_min).contains(&dmin) && (0.0..=bound_max).contains(&dmax);
        lo_gap = lo_gap.min(dmin.min(dmax));
        hi_gap = hi_gap.max((dmin / bound_min).max(dmax / bound_max));
    }
    let detail = format!("smallest gap {lo_gap:.2e}, largest gap / (ln n / a) {hi_gap:.4}");
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn gradients() -> Outcome {
    let mut lines = Vec::new();
    let mut ok = true;
    for (k, f) in FIXTURES.iter().enumerate() {
        let r = compile(&f.program().map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        let cfg = GradcheckConfig {
            points: 100,
            seed: 1000 + k as u64,
            ..GradcheckConfig::default()
        };
        let rep = gradcheck(&r, f.window, &cfg);
        ok &= rep.passed() && rep.accepted == rep.requested;
        lines.push(format!("{} {:.1e}", f.name, rep.max_rel_error));
    }
    let detail = format!("max rel. error at 100 points: {}", lines.join(", "));
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn appendix() -> Outcome {
    let input = parse_appendix_input(fixtures::APPENDIX_SESSION).map_err(|e| e.to_string())?;
    let replay = replay_appendix(&input).map_err(|e| e.to_string())?;
    let last = replay
        .transcript
        .lines()
        .last()
        .unwrap_or_default()
        .to_owned();
    let compiled = emit_desmos(
        &compile(&input.to_program().map_err(|e| e.to_string())?).map_err(|e| e.to_string())?,
    )
    .map_err(|e| e.to_string())?;
    if last == fixtures::APPENDIX_RESULT && compiled == fixtures::APPENDIX_RESULT {
        Ok(format!("final line: {last}"))
    } else {
        Err(format!(
            "replay gave {last}, compiled export gave {compiled}"
        ))
    }
}

fn bounded() -> Outcome {
    let g = |f: f64| bounded_from_log_field(f.ln(), BoundScale::Unit);
    let increasing = (0..=3000)
        .map(|k| g(k as f64 * 0.01))
        .collect::<Vec<_>>()
        .windows(2)
        .all(|w| w[1] > w[0]);
    let extremes = [
        f64::NEG_INFINITY,
        -1e300,
        -50.0,
        0.0,
        5.0,
        700.0,
        1e300,
        f64::INFINITY,
    ];
    let in_range = extremes.iter().all(|&l| {
        let v = bounded_from_log_field(l, BoundScale::Unit);
        (0.0..1.0).contains(&v)
    });
    let monotone_ext = extremes.windows(2).all(|w| {
        bounded_from_log_field(w[1], BoundScale::Unit)
            >= bounded_from_log_field(w[0], BoundScale::Unit)
    });
    let half = bounded_from_log_field(0.0, BoundScale::Unit);
    let f = fixture("eq14");
    let r = compile(&f.program().map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let grid = f.grid(256).map_err(|e| e.to_string())?;
    let mut disagree = 0;
    for j in 0..grid.ny {
        for i in 0..grid.nx {
            let l = r.log_field(grid.cell_center(i, j));
            if (l <= 0.0) != (bounded_from_log_field(l, BoundScale::Unit) <= 0.5) {
                disagree += 1;
            }
        }
    }
    let detail = format!(
        "increasing on F in [0,30]: {increasing}; range [0,1): {in_range}; g(1) = {half}; disagreeing cells {disagree}/{}",
        grid.cells()
    );
    if increasing && in_range && monotone_ext && half == 0.5 && disagree == 0 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn contained(inner: &Bitmap, outer: &Bitmap) -> usize {
    inner
        .bits()
        .iter()
        .zip(outer.bits())
        .filter(|&(&a, &b)| a && !b)
        .count()
}

fn batman() -> Outcome {
    let f = fixture("batman");
    let program = f.program().map_err(|e| e.to_string())?;
    let r = compile(&program).map_err(|e| e.to_string())?;
    let grid = f.grid(512).map_err(|e| e.to_string())?;
    let raster = Rasterizer::default();
    let b = raster
        .sample_membership(&r, &grid)
        .map_err(|e| e.to_string())?;
    let oracle = raster
        .boolean_oracle(&program, &grid)
        .map_err(|e| e.to_string())?;
    let sha = b.pgm_sha256();
    let golden = fixtures::batman_golden_sha256(512).unwrap_or_default();
    let escapes = contained(&b, &oracle);
    // union containment on the fixtures that are unions of leaves
    let mut union_escapes = 0;
    for name in ["circles", "softplus"] {
        let fx = fixture(name);
        let p = fx.program().map_err(|e| e.to_string())?;
        let g = fx.grid(256).map_err(|e| e.to_string())?;
        let smooth = raster
            .sample_membership(&compile(&p).map_err(|e| e.to_string())?, &g)
            .map_err(|e| e.to_string())?;
        union_escapes += contained(
            &raster.boolean_oracle(&p, &g).map_err(|e| e.to_string())?,
            &smooth,
        );
    }
    let detail = format!(
        "sha256 {sha}; inside {} undefined {}; smooth outside oracle {escapes}; oracle union outside smooth {union_escapes}",
        b.inside_count(),
        b.undefined_count()
    );
    if sha == golden && escapes == 0 && union_escapes == 0 {
        Ok(detail)
    } else {
        Err(format!("{detail}; golden {golden}"))
    }
}

fn even_power() -> Outcome {
    let r = Region::from_even_power(parse_scalar("x").unwrap(), 1).map_err(|e| e.to_string())?;
    let m = |x: f64| r.membership(Point::new(x, 0.0), smoothset::region::DEFAULT_BOUNDARY_TOL);
    let got = [m(-0.5), m(0.5), m(2.0)];
    let detail = format!("x=-0.5 {:?}, x=0.5 {:?}, x=2 {:?}", got[0], got[1], got[2]);
    if got == [Membership::Inside, Membership::Inside, Membership::Outside] {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("circle-union convergence", circle_convergence),
        ("distributivity in the limit", distributivity),
        ("exact algebraic identities", identities),
        ("softplus boundary", softplus),
        ("smooth min/max brackets", minmax),
        ("gradient soundness", gradients),
        ("appendix byte-exactness", appendix),
        ("bounded transform", bounded),
        ("batman golden render", batman),
        ("even-power negative solutions", even_power),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", k + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail}", k + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
