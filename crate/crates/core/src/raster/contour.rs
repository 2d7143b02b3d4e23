use std::collections::HashMap;

use crate::expr::Point;
use crate::region::Region;

use super::Grid;

/// Connected piece of the `L = 0` curve. A closed polyline does not repeat
/// its first point.
#[derive(Debug, Clone, PartialEq)]
pub struct Polyline {
    pub points: Vec<Point>,
    pub closed: bool,
}

impl Polyline {
    pub fn length(&self) -> f64 {
        let dist = |a: &Point, b: &Point| (a.x - b.x).hypot(a.y - b.y);
        let open: f64 = self.points.windows(2).map(|w| dist(&w[0], &w[1])).sum();
        match (self.closed, self.points.first(), self.points.last()) {
            (true, Some(first), Some(last)) => open + dist(last, first),
            _ => open,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContourSet {
    pub grid: Grid,
    pub polylines: Vec<Polyline>,
}

impl ContourSet {
    pub fn is_empty(&self) -> bool {
        self.polylines.is_empty()
    }

    pub fn total_length(&self) -> f64 {
        self.polylines.iter().map(Polyline::length).sum()
    }

    pub fn vertices(&self) -> impl Iterator<Item = &Point> {
        self.polylines.iter().flat_map(|p| p.points.iter())
    }
}

/// Cell edge: horizontal `H(i, j)` joins corners `(i, j)` and `(i+1, j)`,
/// vertical `V(i, j)` joins `(i, j)` and `(i, j+1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Edge {
    H(usize, usize),
    V(usize, usize),
}

struct Tracer<'a> {
    grid: &'a Grid,
    corners: &'a [f64],
    width: usize,
}

impl Tracer<'_> {
    fn at(&self, i: usize, j: usize) -> f64 {
        self.corners[j * self.width + i]
    }

    fn vertex(&self, e: Edge) -> Point {
        let ((ia, ja), (ib, jb)) = match e {
            Edge::H(i, j) => ((i, j), (i + 1, j)),
            Edge::V(i, j) => ((i, j), (i, j + 1)),
        };
        let (la, lb) = (self.at(ia, ja), self.at(ib, jb));
        let mut t = la / (la - lb);
        if !t.is_finite() {
            t = 0.5;
        }
        let t = t.clamp(0.0, 1.0);
        let (pa, pb) = (self.grid.corner(ia, ja), self.grid.corner(ib, jb));
        Point::new(pa.x + t * (pb.x - pa.x), pa.y + t * (pb.y - pa.y))
    }
}

pub(super) fn trace(region: &Region, grid: &Grid, corners: &[f64]) -> ContourSet {
    let tracer = Tracer {
        grid,
        corners,
        width: grid.nx + 1,
    };
    let mut segments: Vec<(Edge, Edge)> = Vec::new();
    for j in 0..grid.ny {
        for i in 0..grid.nx {
            let (tl, tr, br, bl) = (
                tracer.at(i, j),
                tracer.at(i + 1, j),
                tracer.at(i + 1, j + 1),
                tracer.at(i, j + 1),
            );
            if [tl, tr, br, bl].iter().any(|v| v.is_nan()) {
                continue;
            }
            let bit = |v: f64, b: u8| if v <= 0.0 { b } else { 0 };
            let case = bit(tl, 8) | bit(tr, 4) | bit(br, 2) | bit(bl, 1);
            let top = Edge::H(i, j);
            let bottom = Edge::H(i, j + 1);
            let left = Edge::V(i, j);
            let right = Edge::V(i + 1, j);
            let center_inside = || region.log_field(grid.cell_center(i, j)) <= 0.0;
            match case {
                0 | 15 => {}
                1 | 14 => segments.push((left, bottom)),
                2 | 13 => segments.push((bottom, right)),
                3 | 12 => segments.push((left, right)),
                4 | 11 => segments.push((top, right)),
                6 | 9 => segments.push((top, bottom)),
                7 | 8 => segments.push((left, top)),
                5 => {
                    if center_inside() {
                        segments.push((left, top));
                        segments.push((bottom, right));
                    } else {
                        segments.push((top, right));
                        segments.push((left, bottom));
                    }
                }
                10 => {
                    if center_inside() {
                        segments.push((top, right));
                        segments.push((left, bottom));
                    } else {
                        segments.push((left, top));
                        segments.push((bottom, right));
                    }
                }
                _ => unreachable!("four corner bits"),
            }
        }
    }
    ContourSet {
        grid: *grid,
        polylines: chain(&segments)
            .into_iter()
            .map(|(edges, closed)| Polyline {
                points: edges.into_iter().map(|e| tracer.vertex(e)).collect(),
                closed,
            })
            .collect(),
    }
}

/// Joins segments sharing an edge into chains, in segment creation order.
fn chain(segments: &[(Edge, Edge)]) -> Vec<(Vec<Edge>, bool)> {
    let mut by_edge: HashMap<Edge, Vec<usize>> = HashMap::new();
    for (k, &(a, b)) in segments.iter().enumerate() {
        by_edge.entry(a).or_default().push(k);
        by_edge.entry(b).or_default().push(k);
    }
    let mut used = vec![false; segments.len()];
    // next unused segment touching `e`, and the edge at its far end
    let step = |e: Edge, used: &mut [bool]| -> Option<Edge> {
        let k = *by_edge[&e].iter().find(|&&k| !used[k])?;
        used[k] = true;
        let (a, b) = segments[k];
        Some(if a == e { b } else { a })
    };
    let mut out = Vec::new();
    for k in 0..segments.len() {
        if used[k] {
            continue;
        }
        used[k] = true;
        let (start, mut end) = segments[k];
        let mut forward = vec![start, end];
        while let Some(next) = step(end, &mut used) {
            end = next;
            if next == start {
                break;
            }
            forward.push(next);
        }
        if end == start && forward.len() > 2 {
            out.push((forward, true));
            continue;
        }
        let mut backward = Vec::new();
        let mut head = start;
        while let Some(prev) = step(head, &mut used) {
            backward.push(prev);
            head = prev;
        }
        backward.reverse();
        backward.extend(forward);
        out.push((backward, false));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::super::marching_squares;
    use super::*;
    use crate::expr::parse_scalar;
    use crate::region::Sharpness;

    fn leaf(src: &str, a: f64) -> Region {
        Region::from_inequality(parse_scalar(src).unwrap(), Sharpness::new(a).unwrap())
    }

    #[test]
    fn circle_perimeter() {
        let g = Grid::square(-3.0, 3.0, 400).unwrap();
        let c = marching_squares(&leaf("x^2+y^2-4", 1.0), &g).unwrap();
        assert_eq!(c.polylines.len(), 1);
        assert!(c.polylines[0].closed);
        let want = 4.0 * std::f64::consts::PI;
        assert!((c.total_length() - want).abs() < 0.01 * want);
    }

    #[test]
    fn no_boundary_in_window() {
        let g = Grid::square(-1.0, 1.0, 30).unwrap();
        assert!(marching_squares(&leaf("x^2+y^2-100", 1.0), &g)
            .unwrap()
            .is_empty());
        assert!(marching_squares(&leaf("x^2+y^2+1", 1.0), &g)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn open_line_crosses_window() {
        let g = Grid::square(-1.0, 1.0, 10).unwrap();
        let c = marching_squares(&leaf("x+0.05", 1.0), &g).unwrap();
        assert_eq!(c.polylines.len(), 1);
        assert!(!c.polylines[0].closed);
        assert!((c.total_length() - 2.0).abs() < 1e-12);
        for v in c.vertices() {
            assert!((v.x + 0.05).abs() < 1e-12);
        }
    }

    #[test]
    fn chains_with_saddle() {
        // two touching squares share a corner; each must come out closed
        let g = Grid::square(-2.0, 2.0, 41).unwrap();
        let r = Region::union(vec![
            leaf("(x-1)^2+(y-1)^2-0.5", 5.0),
            leaf("(x+1)^2+(y+1)^2-0.5", 5.0),
        ])
        .unwrap();
        let c = marching_squares(&r, &g).unwrap();
        assert_eq!(c.polylines.len(), 2);
        assert!(c.polylines.iter().all(|p| p.closed));
    }
}
