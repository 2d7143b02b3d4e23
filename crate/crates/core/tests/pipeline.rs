use smoothset::expr::{parse_latex, Point};
use smoothset::fixtures::{self, fixture, Fixture};
use smoothset::raster::{
    boolean_oracle, marching_squares, mismatch, sample_membership, sweep_frames, Bitmap, Grid,
};
use smoothset::region::{
    boundary_solve_y, membership_loss, smooth_max, smooth_min, DEFAULT_BOUNDARY_TOL,
    DEFAULT_LOSS_CLIP,
};
use smoothset::set::{compile, emit_desmos, parse_program, SetProgram};
use smoothset::{parse_scalar, Membership, Region, Sharpness};

fn load(name: &str) -> (&'static Fixture, SetProgram, Region) {
    let f = fixture(name).unwrap();
    let p = f.program().unwrap();
    let r = compile(&p).unwrap();
    (f, p, r)
}

fn at(program: &SetProgram, a: f64) -> Region {
    compile(&program.with_global_sharpness(Sharpness::new(a).unwrap())).unwrap()
}

fn error_curve(program: &SetProgram, grid: &Grid, a_values: &[f64]) -> Vec<f64> {
    let oracle = boolean_oracle(program, grid).unwrap();
    sweep_frames(program, a_values, grid)
        .unwrap()
        .iter()
        .map(|b| mismatch(b, &oracle).unwrap().fraction)
        .collect()
}

fn nonincreasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] <= w[0])
}

#[test]
fn circles_export_matches_harmonic_union() {
    let (_, _, r) = load("circles");
    let text = emit_desmos(&r).unwrap();
    assert_eq!(
        text,
        "((e^{50*(\\left(x-2.5\\right)^{2}+y^{2}-4)})^{ -1}+(e^{50*(x^{2}+y^{2}-4)})^{ -1} )^{ -1}\\le1"
    );
    // the same union written out by hand, with a = b = 50
    let by_hand = parse_latex(
        "\\left(e^{-50\\left(x^2+y^2-4\\right)}+e^{-50\\left(\\left(x-2.5\\right)^2+y^2-4\\right)}\\right)^{-1}",
    )
    .unwrap();
    for (x, y) in [(0.0, 0.0), (1.25, 1.8), (2.0, -0.5), (4.4, 0.2)] {
        let p = Point::new(x, y);
        let (want, got) = (by_hand.eval(p), r.field(p));
        assert!(
            (want - got).abs() <= 1e-12 * want.abs(),
            "({x},{y}): {want} vs {got}"
        );
    }
}

#[test]
fn circles_against_oracle() {
    let (f, p, r) = load("circles");
    let grid = f.grid(512).unwrap();
    let oracle = boolean_oracle(&p, &grid).unwrap();
    let m = mismatch(&sample_membership(&r, &grid).unwrap(), &oracle).unwrap();
    assert!(m.fraction < 0.005, "{m:?}");
    let curve = error_curve(&p, &f.grid(256).unwrap(), &[2.0, 5.0, 10.0, 20.0, 50.0]);
    assert!(nonincreasing(&curve), "{curve:?}");
}

#[test]
fn circles_union_is_one_closed_contour() {
    let (f, _, r) = load("circles");
    let c = marching_squares(&r, &f.grid(256).unwrap()).unwrap();
    assert_eq!(c.polylines.len(), 1);
    assert!(c.polylines[0].closed);
    // longer than one circle, shorter than two
    let circle = 4.0 * std::f64::consts::PI;
    assert!(c.total_length() > circle && c.total_length() < 2.0 * circle);
}

#[test]
fn distributivity_converges() {
    let eq12 = fixture("eq12").unwrap().program().unwrap();
    let eq13 = fixture("eq13").unwrap().program().unwrap();
    let grid = fixture("eq12").unwrap().grid(256).unwrap();
    let a_values = [5.0, 10.0, 20.0, 50.0];
    let c12 = error_curve(&eq12, &grid, &a_values);
    let c13 = error_curve(&eq13, &grid, &a_values);
    assert!(nonincreasing(&c12), "{c12:?}");
    assert!(nonincreasing(&c13), "{c13:?}");
    let between: Vec<f64> = a_values
        .iter()
        .map(|&a| {
            let x = sample_membership(&at(&eq12, a), &grid).unwrap();
            let y = sample_membership(&at(&eq13, a), &grid).unwrap();
            mismatch(&x, &y).unwrap().fraction
        })
        .collect();
    assert!(between[3] < between[0], "{between:?}");
    // both forms describe the same crisp set
    assert_eq!(
        boolean_oracle(&eq12, &grid).unwrap(),
        boolean_oracle(&eq13, &grid).unwrap()
    );
}

fn escapes(inner: &Bitmap, outer: &Bitmap) -> usize {
    inner
        .bits()
        .iter()
        .zip(outer.bits())
        .filter(|&(&a, &b)| a && !b)
        .count()
}

#[test]
fn oracle_containment() {
    for name in ["batman", "min", "max"] {
        let (f, p, r) = load(name);
        let g = f.grid(200).unwrap();
        let smooth = sample_membership(&r, &g).unwrap();
        assert_eq!(
            escapes(&smooth, &boolean_oracle(&p, &g).unwrap()),
            0,
            "{name}"
        );
    }
    for name in ["circles", "softplus"] {
        let (f, p, r) = load(name);
        let g = f.grid(200).unwrap();
        let smooth = sample_membership(&r, &g).unwrap();
        assert_eq!(
            escapes(&boolean_oracle(&p, &g).unwrap(), &smooth),
            0,
            "{name}"
        );
    }
}

#[test]
fn de_morgan_on_oracle_bitmaps() {
    let defs = "def a : x^2+y^2-4\ndef b : (x-2.5)^2+y^2-4\n";
    let g = Grid::new(-3.0, 5.0, -4.0, 4.0, 120, 120).unwrap();
    let lhs = parse_program(&format!("{defs}expr infix a|b")).unwrap();
    let rhs = parse_program(&format!("{defs}expr infix !(!a&!b)")).unwrap();
    assert_eq!(
        boolean_oracle(&lhs, &g).unwrap(),
        boolean_oracle(&rhs, &g).unwrap()
    );
}

/// Largest `|dL|` along any edge of the cells that share the edge `v` lies on.
fn local_variation(r: &Region, g: &Grid, v: &Point) -> f64 {
    let (fi, fj) = ((v.x - g.x_min) / g.dx(), (g.y_max - v.y) / g.dy());
    let vertical = (fi - fi.round()).abs() < 1e-7;
    let (i, j) = (fi.floor() as isize, fj.floor() as isize);
    let cells: Vec<(isize, isize)> = if vertical {
        let i = fi.round() as isize;
        vec![(i - 1, j), (i, j)]
    } else {
        let j = fj.round() as isize;
        vec![(i, j - 1), (i, j)]
    };
    let l = |i: usize, j: usize| r.log_field(g.corner(i, j));
    let mut worst: f64 = 0.0;
    for (ci, cj) in cells {
        if ci < 0 || cj < 0 || ci as usize >= g.nx || cj as usize >= g.ny {
            continue;
        }
        let (ci, cj) = (ci as usize, cj as usize);
        let c = [l(ci, cj), l(ci + 1, cj), l(ci + 1, cj + 1), l(ci, cj + 1)];
        for k in 0..4 {
            worst = worst.max((c[k] - c[(k + 1) % 4]).abs());
        }
    }
    worst
}

#[test]
fn contour_vertices_lie_near_zero() {
    for f in fixtures::FIXTURES {
        let r = compile(&f.program().unwrap()).unwrap();
        let g = f.grid(128).unwrap();
        let contours = marching_squares(&r, &g).unwrap();
        for v in contours.vertices() {
            let lv = r.log_field(*v);
            let bound = local_variation(&r, &g, v);
            assert!(
                lv.abs() < bound,
                "{}: L({}, {}) = {lv}, local variation {bound}",
                f.name,
                v.x,
                v.y
            );
        }
    }
}

#[test]
fn batman_golden_256() {
    let (f, _, r) = load("batman");
    let b = sample_membership(&r, &f.grid(256).unwrap()).unwrap();
    assert_eq!(b.pgm_sha256(), fixtures::batman_golden_sha256(256).unwrap());
    assert!(b.undefined_count() > 0);
}

#[test]
fn batman_below_the_body_is_undefined() {
    // some fractional powers have negative bases here, so no membership at all
    let (_, program, r) = load("batman");
    let p = Point::new(0.0, -3.0);
    assert_eq!(r.membership(p, DEFAULT_BOUNDARY_TOL), Membership::Undefined);
    assert!(!r.membership(p, DEFAULT_BOUNDARY_TOL).is_member());
    let g = Grid::new(-0.01, 0.01, -3.01, -2.99, 1, 1).unwrap();
    assert!(!sample_membership(&r, &g).unwrap().get(0, 0));
    assert!(!boolean_oracle(&program, &g).unwrap().get(0, 0));
}

#[test]
fn example1_shape() {
    let (_, program, r) = load("example1");
    for (x, y, inside) in [
        (0.0, 0.0, true),
        (2.5, 0.0, true),
        (-1.8, 0.0, false),
        (0.0, -2.5, true),
        (0.0, 1.8, false),
    ] {
        let p = Point::new(x, y);
        assert_eq!(r.log_field(p) <= 0.0, inside, "smooth ({x},{y})");
        let g = Grid::new(x - 1e-3, x + 1e-3, y - 1e-3, y + 1e-3, 1, 1).unwrap();
        assert_eq!(
            boolean_oracle(&program, &g).unwrap().get(0, 0),
            inside,
            "oracle ({x},{y})"
        );
    }
    assert!(emit_desmos(&r).unwrap().ends_with("\\le1"));
}

#[test]
fn animation_sharpens() {
    let (f, program, _) = load("animation");
    let g = f.grid(160).unwrap();
    let frames = sweep_frames(&program, &[5.0, 50.0], &g).unwrap();
    assert_eq!(frames.len(), 2);
    assert_ne!(frames[0].inside_count(), frames[1].inside_count());
}

#[test]
fn min_and_max_fixtures_trace_smooth_min_max() {
    let a = Sharpness::new(fixtures::MINMAX_SHARPNESS).unwrap();
    let gmin: Vec<_> = fixtures::MIN_FUNCTIONS
        .iter()
        .map(|s| parse_scalar(s).unwrap())
        .collect();
    let gmax: Vec<_> = fixtures::MAX_FUNCTIONS
        .iter()
        .map(|s| parse_scalar(s).unwrap())
        .collect();
    let (_, _, rmin) = load("min");
    let (_, _, rmax) = load("max");
    for x in [-7.5, -2.0, 0.0, 0.4, 3.3, 9.0] {
        let y = boundary_solve_y(&rmin, x, -30.0, 30.0, 1e-13).unwrap();
        assert!(
            (y - smooth_min(&gmin, a, x).unwrap()).abs() < 1e-9,
            "min at {x}"
        );
        let y = boundary_solve_y(&rmax, x, -30.0, 30.0, 1e-13).unwrap();
        assert!(
            (y - smooth_max(&gmax, a, x).unwrap()).abs() < 1e-9,
            "max at {x}"
        );
    }
}

#[test]
fn loss_scores_points_against_a_fixture() {
    let (_, _, r) = load("circles");
    let inside = [
        Point::new(0.0, 0.0),
        Point::new(2.5, 0.0),
        Point::new(1.25, 1.0),
    ];
    assert_eq!(
        membership_loss(&r, &inside, DEFAULT_LOSS_CLIP).unwrap(),
        0.0
    );
    let mixed = [Point::new(0.0, 0.0), Point::new(1.25, 3.0)];
    assert!(membership_loss(&r, &mixed, DEFAULT_LOSS_CLIP).unwrap() > 0.0);
}

#[test]
fn degenerate_grid() {
    let (_, _, r) = load("circles");
    let g = Grid::new(-0.5, 0.5, -0.5, 0.5, 1, 1).unwrap();
    assert_eq!(
        sample_membership(&r, &g).unwrap().pgm_bytes(),
        b"P5\n1 1\n255\n\xff".to_vec()
    );
}
