//! Canonical test shapes, shared by the test suites and shipped as the
//! drawing file gallery.
//!
//! Coordinates are original fixture data; proportions echo the classic
//! fold-and-cut and wrapping demonstrations (H with a thin crossbar, letter
//! I with two bars and a stem, a bowtie-style butterfly with deep notches).

use crate::geom::{Point2, Real};

fn p<R: Real>(x: f64, y: f64) -> Point2<R> {
    Point2::new(R::from_f64(x).unwrap(), R::from_f64(y).unwrap())
}

/// Unit square.
pub fn square<R: Real>() -> Vec<Point2<R>> {
    vec![p(0.0, 0.0), p(1.0, 0.0), p(1.0, 1.0), p(0.0, 1.0)]
}

/// 4 x 2 rectangle.
pub fn rectangle<R: Real>() -> Vec<Point2<R>> {
    vec![p(0.0, 0.0), p(4.0, 0.0), p(4.0, 2.0), p(0.0, 2.0)]
}

/// Letter H: two 1 x 4 bars joined by a crossbar 0.7 tall, centered at
/// mid-height. The crossbar is thinner than the bars, so the shrinking
/// wavefront disconnects at the crossbar mid-line.
pub fn h_polygon<R: Real>() -> Vec<Point2<R>> {
    vec![
        p(0.0, 0.0),
        p(1.0, 0.0),
        p(1.0, 1.65),
        p(2.0, 1.65),
        p(2.0, 0.0),
        p(3.0, 0.0),
        p(3.0, 4.0),
        p(2.0, 4.0),
        p(2.0, 2.35),
        p(1.0, 2.35),
        p(1.0, 4.0),
        p(0.0, 4.0),
    ]
}

/// L shape with unit-width legs.
pub fn l_polygon<R: Real>() -> Vec<Point2<R>> {
    vec![p(0.0, 0.0), p(2.0, 0.0), p(2.0, 1.0), p(1.0, 1.0), p(1.0, 2.0), p(0.0, 2.0)]
}

/// Letter I: 4 x 1 bars top and bottom, 1 x 2 stem.
pub fn letter_i<R: Real>() -> Vec<Point2<R>> {
    vec![
        p(0.0, 0.0),
        p(4.0, 0.0),
        p(4.0, 1.0),
        p(2.5, 1.0),
        p(2.5, 3.0),
        p(4.0, 3.0),
        p(4.0, 4.0),
        p(0.0, 4.0),
        p(0.0, 3.0),
        p(1.5, 3.0),
        p(1.5, 1.0),
        p(0.0, 1.0),
    ]
}

/// Regular n-gon with circumradius 1 and a horizontal bottom edge,
/// counterclockwise.
pub fn regular_ngon<R: Real>(n: usize) -> Vec<Point2<R>> {
    assert!(n >= 3);
    (0..n)
        .map(|k| {
            let theta = -std::f64::consts::FRAC_PI_2
                + std::f64::consts::PI / n as f64
                + 2.0 * std::f64::consts::PI * k as f64 / n as f64;
            p(theta.cos(), theta.sin())
        })
        .collect()
}

/// Bowtie-style butterfly: two quadrilateral wings meeting at a narrow
/// waist, with deep notches above and below. Nonconvex with two reflex
/// vertices; its crease pattern needs propagated perpendiculars.
pub fn butterfly<R: Real>() -> Vec<Point2<R>> {
    vec![
        p(0.0, 0.0),
        p(2.6, 1.2),
        p(5.2, 0.0),
        p(5.2, 3.6),
        p(2.6, 2.2),
        p(0.0, 3.6),
    ]
}

/// Names and constructors of the whole gallery, in canonical order.
pub fn gallery<R: Real>() -> Vec<(&'static str, Vec<Point2<R>>)> {
    let mut out: Vec<(&'static str, Vec<Point2<R>>)> = vec![
        ("square", square()),
        ("rectangle", rectangle()),
        ("h", h_polygon()),
        ("l", l_polygon()),
        ("i", letter_i()),
        ("butterfly", butterfly()),
    ];
    out.push(("triangle", regular_ngon(3)));
    out.push(("pentagon", regular_ngon(5)));
    out.push(("hexagon", regular_ngon(6)));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{is_simple_cycle, signed_area, Tolerance};

    #[test]
    fn all_fixtures_are_simple_and_counterclockwise() {
        for (name, poly) in gallery::<f64>() {
            let tol = Tolerance::from_diameter(10.0);
            assert!(is_simple_cycle(&poly, &tol), "{name} is not simple");
            assert!(signed_area(&poly) > 0.0, "{name} is not counterclockwise");
        }
    }
}
