use std::f64::consts::TAU;
use std::fmt::Write as _;

use mandelcomb::{Angle64, ComponentTree};

const SIZE: f64 = 800.0;
const RADIUS: f64 = 360.0;

fn point(theta: &Angle64) -> (f64, f64) {
    let t = *theta.numerator() as f64 / *theta.denominator() as f64 * TAU;
    (SIZE / 2.0 + RADIUS * t.cos(), SIZE / 2.0 - RADIUS * t.sin())
}

/// The chord between two boundary points drawn as a hyperbolic geodesic:
/// a circular arc meeting the unit circle at right angles.
fn geodesic(a: &Angle64, b: &Angle64) -> String {
    let (x0, y0) = point(a);
    let (x1, y1) = point(b);
    let ta = *a.numerator() as f64 / *a.denominator() as f64 * TAU;
    let tb = *b.numerator() as f64 / *b.denominator() as f64 * TAU;
    let half = (tb - ta) / 2.0;
    if (half - TAU / 4.0).abs() < 1e-9 {
        return format!("M {x0:.3} {y0:.3} L {x1:.3} {y1:.3}");
    }
    let r = RADIUS * half.tan().abs();
    let sweep = u8::from(tb - ta < TAU / 2.0);
    format!("M {x0:.3} {y0:.3} A {r:.3} {r:.3} 0 0 {sweep} {x1:.3} {y1:.3}")
}

/// The lamination of all ray pairs in `tree` as an SVG document.
pub fn lamination(tree: &ComponentTree<u64>) -> String {
    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    )
    .unwrap();
    let c = SIZE / 2.0;
    writeln!(
        out,
        r#"<circle cx="{c}" cy="{c}" r="{RADIUS}" fill="none" stroke="black" stroke-width="1"/>"#
    )
    .unwrap();
    for pair in tree.pairs() {
        let hue = (pair.period() * 47) % 360;
        writeln!(
            out,
            r#"<path d="{}" fill="none" stroke="hsl({hue},70%,40%)" stroke-width="1"><title>{pair} period {}</title></path>"#,
            geodesic(pair.lower(), pair.upper()),
            pair.period()
        )
        .unwrap();
        let (x, y) = point(pair.lower());
        let (lx, ly) = (c + (x - c) * 1.06, c + (y - c) * 1.06);
        writeln!(
            out,
            r#"<text x="{lx:.3}" y="{ly:.3}" font-size="8" text-anchor="middle">{}</text>"#,
            pair.period()
        )
        .unwrap();
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn angle(n: u64, d: u64) -> Angle64 {
        Angle64::from_u64(n, d).unwrap()
    }

    #[test]
    fn diameter_is_a_straight_line() {
        assert!(geodesic(&angle(1, 4), &angle(3, 4)).contains(" L "));
    }

    #[test]
    fn short_and_long_chords_sweep_opposite_ways() {
        let short = geodesic(&angle(1, 7), &angle(2, 7));
        let long = geodesic(&angle(1, 15), &angle(14, 15));
        assert!(short.contains(" 0 0 1 "), "{short}");
        assert!(long.contains(" 0 0 0 "), "{long}");
    }
}
