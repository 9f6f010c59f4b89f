//! SVG rendering of eigenfunctions with the jump conventions of the
//! underlying theory: a filled dot at the left-continuous value taken at
//! each atom, an open circle at the excluded right limit, and a dashed
//! segment marking the jump. The right limit at the last atom wraps around
//! to x = 0.

use crate::calculus::PiecewiseSine;
use crate::measure::MeasureSpec;
use std::fmt::Write as _;
use std::io;
use std::path::Path;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const MARGIN: f64 = 48.0;
const SAMPLES_PER_SEGMENT: usize = 400;

struct Frame {
    y_scale: f64,
}

impl Frame {
    fn x(&self, x: f64) -> f64 {
        MARGIN + x * (WIDTH - 2.0 * MARGIN)
    }
    fn y(&self, v: f64) -> f64 {
        HEIGHT / 2.0 - v * self.y_scale
    }
}

/// Write the eigenfunction as a standalone SVG file.
pub fn render_eigenfunction(f: &PiecewiseSine, spec: &MeasureSpec, path: &Path) -> io::Result<()> {
    let svg = eigenfunction_svg(f, spec);
    std::fs::write(path, svg)
}

/// Build the SVG document in memory (deterministic output).
pub fn eigenfunction_svg(f: &PiecewiseSine, spec: &MeasureSpec) -> String {
    let atoms = spec.atoms();
    let mut amplitude: f64 = 1.0;
    let mut sample_values = Vec::new();
    let mut x_lo = 0.0;
    for (j, atom) in atoms.iter().enumerate() {
        let mut seg = Vec::with_capacity(SAMPLES_PER_SEGMENT);
        for s in 0..=SAMPLES_PER_SEGMENT {
            // Open at the left endpoint, closed at the right.
            let frac = (s as f64 + 0.5) / (SAMPLES_PER_SEGMENT as f64 + 0.5);
            let x = x_lo + (atom.z - x_lo) * frac;
            let v = f.eval(spec, x);
            amplitude = amplitude.max(v.abs());
            seg.push((x, v));
        }
        sample_values.push(seg);
        x_lo = atoms[j].z;
    }
    let frame = Frame {
        y_scale: (HEIGHT / 2.0 - MARGIN) / amplitude,
    };

    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">"
    );
    let _ = writeln!(
        out,
        "  <rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>"
    );
    // Axes.
    let _ = writeln!(
        out,
        "  <line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"black\" stroke-width=\"1\"/>",
        frame.x(0.0) - 6.0,
        frame.y(0.0),
        frame.x(1.0) + 12.0,
        frame.y(0.0)
    );
    let _ = writeln!(
        out,
        "  <line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"black\" stroke-width=\"1\"/>",
        frame.x(0.0),
        MARGIN - 12.0,
        frame.x(0.0),
        HEIGHT - MARGIN + 12.0
    );
    // Ticks at ±1 on the value axis.
    for v in [1.0f64, -1.0] {
        let _ = writeln!(
            out,
            "  <line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"black\" stroke-width=\"1\"/>",
            frame.x(0.0) - 4.0,
            frame.y(v),
            frame.x(0.0) + 4.0,
            frame.y(v)
        );
        let _ = writeln!(
            out,
            "  <text x=\"{:.2}\" y=\"{:.2}\" font-size=\"13\" text-anchor=\"end\">{}</text>",
            frame.x(0.0) - 8.0,
            frame.y(v) + 4.0,
            if v > 0.0 { "1" } else { "-1" }
        );
    }
    // Ticks at the atom positions.
    for atom in atoms {
        let _ = writeln!(
            out,
            "  <line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"black\" stroke-width=\"1\"/>",
            frame.x(atom.z),
            frame.y(0.0) - 4.0,
            frame.x(atom.z),
            frame.y(0.0) + 4.0
        );
        let _ = writeln!(
            out,
            "  <text x=\"{:.2}\" y=\"{:.2}\" font-size=\"13\" text-anchor=\"middle\">{}</text>",
            frame.x(atom.z),
            frame.y(0.0) + 18.0,
            format_tick(atom.z)
        );
    }
    // The curve, one polyline per segment.
    for seg in &sample_values {
        let mut points = String::new();
        for (x, v) in seg {
            let _ = write!(points, "{:.2},{:.2} ", frame.x(*x), frame.y(*v));
        }
        let _ = writeln!(
            out,
            "  <polyline points=\"{}\" fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"1.6\"/>",
            points.trim_end()
        );
    }
    // Jump markers at each atom: filled dot at the value, open circle at the
    // excluded right limit, dashed connector.
    for (i, atom) in atoms.iter().enumerate() {
        let value = f.value_at_atom(spec, i);
        let right = f.right_limit_at_atom(spec, i);
        let x_right = if i + 1 < atoms.len() { atom.z } else { 0.0 };
        let _ = writeln!(
            out,
            "  <line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"#1f4e9c\" stroke-width=\"1\" stroke-dasharray=\"5,4\"/>",
            frame.x(atom.z),
            frame.y(0.0),
            frame.x(atom.z),
            frame.y(value)
        );
        let _ = writeln!(
            out,
            "  <circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"3.4\" fill=\"#1f4e9c\"/>",
            frame.x(atom.z),
            frame.y(value)
        );
        let _ = writeln!(
            out,
            "  <circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"3.4\" fill=\"white\" stroke=\"#1f4e9c\" stroke-width=\"1.2\"/>",
            frame.x(x_right),
            frame.y(right)
        );
    }
    out.push_str("</svg>\n");
    out
}

fn format_tick(z: f64) -> String {
    if (z - 0.5).abs() < 1e-12 {
        "1/2".to_string()
    } else if (z - 1.0).abs() < 1e-12 {
        "1".to_string()
    } else {
        format!("{z:.3}")
    }
}
