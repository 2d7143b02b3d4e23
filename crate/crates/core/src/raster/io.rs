use std::fmt::Write as _;
use std::path::Path;

use super::{Bitmap, ContourSet, RasterError};

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), RasterError> {
    std::fs::write(path, bytes).map_err(|source| RasterError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn write_pgm(bitmap: &Bitmap, path: impl AsRef<Path>) -> Result<(), RasterError> {
    write_file(path.as_ref(), &bitmap.pgm_bytes())
}

fn num(v: f64) -> String {
    let s = format!("{v:.6}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_owned()
    } else {
        s.to_owned()
    }
}

/// SVG 1.1 document with one path per polyline. The y axis is flipped so the
/// picture has the usual math orientation.
pub fn svg_string(contours: &ContourSet) -> String {
    let g = &contours.grid;
    let (w, h) = (g.x_max - g.x_min, g.y_max - g.y_min);
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"{} {} {} {}\">",
        num(g.x_min),
        num(-g.y_max),
        num(w),
        num(h)
    );
    let stroke = num(w.max(h) / 400.0);
    for line in &contours.polylines {
        let mut d = String::new();
        for (k, p) in line.points.iter().enumerate() {
            let _ = write!(
                d,
                "{}{} {}",
                if k == 0 { "M" } else { " L" },
                num(p.x),
                num(-p.y)
            );
        }
        if line.closed {
            d.push_str(" Z");
        }
        let _ = writeln!(
            out,
            "  <path d=\"{d}\" fill=\"none\" stroke=\"black\" stroke-width=\"{stroke}\"/>"
        );
    }
    out.push_str("</svg>\n");
    out
}

pub fn write_svg(contours: &ContourSet, path: impl AsRef<Path>) -> Result<(), RasterError> {
    write_file(path.as_ref(), svg_string(contours).as_bytes())
}
