//! The cut graph: vertices and non-crossing edges forming simple polygons,
//! possibly nested.

use crate::error::{Error, Result};
use crate::geom::{
    cast, intersect_segments, is_simple_cycle, point_in_cycle_unchecked, signed_area, Point2,
    PointLocation, Real, Rect, Segment2, SegmentIntersection, Tolerance,
};

/// A validated planar drawing: disjoint simple polygon boundaries, nesting
/// allowed, all cycles stored counterclockwise.
#[derive(Debug, Clone)]
pub struct PlanarDrawing<R> {
    cycles: Vec<Vec<Point2<R>>>,
    /// Containment depth per cycle (0 = outermost).
    depth: Vec<usize>,
    /// Index of the immediately containing cycle, if any.
    parent: Vec<Option<usize>>,
    tol: Tolerance<R>,
}

/// A drawing edge identified by cycle and position within the cycle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EdgeId {
    pub cycle: usize,
    pub index: usize,
}

/// One connected region of the drawing's complement, bounded by an outer
/// contour and zero or more inner contours (all oriented region-on-left).
#[derive(Debug, Clone)]
pub struct Region<R> {
    /// Contours as (points, edge ids aligned with points): edge k runs from
    /// point k to point k+1 and lies on drawing edge `edges[k]` (or none for
    /// synthetic clip contours).
    pub contours: Vec<RegionContour<R>>,
    /// True when the region is inside the drawing under even-odd filling.
    pub material: bool,
}

#[derive(Debug, Clone)]
pub struct RegionContour<R> {
    pub points: Vec<Point2<R>>,
    /// Drawing edge under each contour edge; `None` for synthetic contours
    /// (the far clip box around the exterior region).
    pub edges: Vec<Option<EdgeId>>,
}

impl<R: Real> PlanarDrawing<R> {
    /// Validate and normalize a set of vertex cycles.
    pub fn from_cycles(cycles: Vec<Vec<Point2<R>>>) -> Result<Self> {
        if cycles.is_empty() {
            return Err(Error::InvalidDrawing("drawing has no polygons".into()));
        }
        for (i, c) in cycles.iter().enumerate() {
            if c.len() < 3 {
                return Err(Error::InvalidDrawing(format!(
                    "cycle {i} has only {} vertices",
                    c.len()
                )));
            }
            for p in c {
                if !p.is_finite() {
                    return Err(Error::InvalidDrawing(format!(
                        "cycle {i} has non-finite coordinates"
                    )));
                }
            }
        }
        let all: Vec<Point2<R>> = cycles.iter().flatten().copied().collect();
        let bbox = Rect::bounding(all.iter().copied()).unwrap();
        let diameter = bbox.diagonal();
        if diameter <= R::zero() {
            return Err(Error::InvalidDrawing("drawing has zero extent".into()));
        }
        let tol = Tolerance::from_diameter(diameter);

        let mut normalized: Vec<Vec<Point2<R>>> = Vec::with_capacity(cycles.len());
        for (i, c) in cycles.iter().enumerate() {
            if !is_simple_cycle(c, &tol) {
                return Err(Error::InvalidDrawing(format!("cycle {i} is not a simple polygon")));
            }
            let mut c = c.clone();
            if signed_area(&c) < R::zero() {
                c.reverse();
            }
            normalized.push(c);
        }

        // Cycles must be pairwise disjoint: no crossing, touching or overlap.
        for i in 0..normalized.len() {
            for j in (i + 1)..normalized.len() {
                let (a, b) = (&normalized[i], &normalized[j]);
                for k in 0..a.len() {
                    let sa = Segment2::new(a[k], a[(k + 1) % a.len()]);
                    for l in 0..b.len() {
                        let sb = Segment2::new(b[l], b[(l + 1) % b.len()]);
                        match intersect_segments(&sa, &sb, &tol) {
                            SegmentIntersection::Empty => {}
                            _ => {
                                return Err(Error::InvalidDrawing(format!(
                                    "cycles {i} and {j} touch or overlap"
                                )))
                            }
                        }
                    }
                }
            }
        }

        // Nesting by even-odd containment of one representative vertex.
        let n = normalized.len();
        let mut depth = vec![0usize; n];
        let mut parent: Vec<Option<usize>> = vec![None; n];
        for i in 0..n {
            let probe = normalized[i][0];
            let mut best: Option<(R, usize)> = None;
            for j in 0..n {
                if i == j {
                    continue;
                }
                if point_in_cycle_unchecked(probe, &normalized[j], tol.eps_geom)
                    == PointLocation::Inside
                {
                    depth[i] += 1;
                    let area = signed_area(&normalized[j]);
                    if best.map_or(true, |(ba, _)| area < ba) {
                        best = Some((area, j));
                    }
                }
            }
            parent[i] = best.map(|(_, j)| j);
        }

        Ok(PlanarDrawing { cycles: normalized, depth, parent, tol })
    }

    pub fn from_polygon(cycle: Vec<Point2<R>>) -> Result<Self> {
        Self::from_cycles(vec![cycle])
    }

    pub fn cycles(&self) -> &[Vec<Point2<R>>] {
        &self.cycles
    }

    pub fn tolerance(&self) -> &Tolerance<R> {
        &self.tol
    }

    pub fn diameter(&self) -> R {
        self.tol.diameter
    }

    pub fn bounding_box(&self) -> Rect<R> {
        Rect::bounding(self.cycles.iter().flatten().copied()).unwrap()
    }

    /// Paper rectangle used when none is given: the bounding box inflated by
    /// a quarter of the diameter on every side.
    pub fn default_paper(&self) -> Rect<R> {
        self.bounding_box().inflate(self.diameter() / cast(4.0))
    }

    pub fn edge_count(&self) -> usize {
        self.cycles.iter().map(|c| c.len()).sum()
    }

    /// Dense index of an edge (cycles concatenated in order).
    pub fn edge_ordinal(&self, id: EdgeId) -> usize {
        let mut base = 0;
        for (ci, c) in self.cycles.iter().enumerate() {
            if ci == id.cycle {
                return base + id.index;
            }
            base += c.len();
        }
        unreachable!("edge id out of range")
    }

    pub fn edge_by_ordinal(&self, ordinal: usize) -> EdgeId {
        let mut base = 0;
        for (ci, c) in self.cycles.iter().enumerate() {
            if ordinal < base + c.len() {
                return EdgeId { cycle: ci, index: ordinal - base };
            }
            base += c.len();
        }
        unreachable!("edge ordinal out of range")
    }

    pub fn edge_segment(&self, id: EdgeId) -> Segment2<R> {
        let c = &self.cycles[id.cycle];
        Segment2::new(c[id.index], c[(id.index + 1) % c.len()])
    }

    pub fn edges(&self) -> impl Iterator<Item = (EdgeId, Segment2<R>)> + '_ {
        self.cycles.iter().enumerate().flat_map(move |(ci, c)| {
            (0..c.len()).map(move |k| {
                let id = EdgeId { cycle: ci, index: k };
                (id, Segment2::new(c[k], c[(k + 1) % c.len()]))
            })
        })
    }

    /// Children of each cycle in the nesting forest.
    fn children(&self) -> Vec<Vec<usize>> {
        let mut ch = vec![Vec::new(); self.cycles.len()];
        for (i, p) in self.parent.iter().enumerate() {
            if let Some(j) = p {
                ch[*j].push(i);
            }
        }
        ch
    }

    /// Regions of the drawing's complement. Every cycle contributes the
    /// region between itself and its children; `far_box`, when given, closes
    /// off the outer region (used by the exterior wavefront).
    pub fn regions(&self, far_box: Option<Rect<R>>) -> Vec<Region<R>> {
        let children = self.children();
        let mut regions = Vec::new();
        for (ci, cycle) in self.cycles.iter().enumerate() {
            // Outer contour: the cycle itself, counterclockwise (region on
            // the left). Children are walked clockwise.
            let mut contours = vec![RegionContour {
                points: cycle.clone(),
                edges: (0..cycle.len()).map(|k| Some(EdgeId { cycle: ci, index: k })).collect(),
            }];
            for &child in &children[ci] {
                contours.push(self.reversed_contour(child));
            }
            regions.push(Region { contours, material: self.depth[ci] % 2 == 0 });
        }
        if let Some(bx) = far_box {
            let corners = bx.corners();
            let mut contours = vec![RegionContour {
                points: corners.to_vec(),
                edges: vec![None; 4],
            }];
            for (ci, _) in self.cycles.iter().enumerate() {
                if self.depth[ci] == 0 {
                    contours.push(self.reversed_contour(ci));
                }
            }
            regions.push(Region { contours, material: false });
        }
        regions
    }

    fn reversed_contour(&self, ci: usize) -> RegionContour<R> {
        let c = &self.cycles[ci];
        let n = c.len();
        // Reversed walk: point order n-1, n-2, ..., 0; the edge leaving
        // reversed point k is the drawing edge between original indices
        // (idx-1, idx).
        let mut points = Vec::with_capacity(n);
        let mut edges = Vec::with_capacity(n);
        for k in 0..n {
            let idx = n - 1 - k;
            points.push(c[idx]);
            edges.push(Some(EdgeId { cycle: ci, index: (idx + n - 1) % n }));
        }
        RegionContour { points, edges }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn pt(x: f64, y: f64) -> Point2<f64> {
        Point2::new(x, y)
    }

    #[test]
    fn square_drawing_validates() {
        let d = PlanarDrawing::from_polygon(fixtures::square::<f64>()).unwrap();
        assert_eq!(d.edge_count(), 4);
        assert!((d.diameter() - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn clockwise_input_is_normalized() {
        let mut sq = fixtures::square::<f64>();
        sq.reverse();
        let d = PlanarDrawing::from_polygon(sq).unwrap();
        assert!(signed_area(&d.cycles()[0]) > 0.0);
    }

    #[test]
    fn touching_polygons_are_rejected() {
        let a = fixtures::square::<f64>();
        let b = vec![pt(1.0, 0.0), pt(2.0, 0.0), pt(2.0, 1.0), pt(1.0, 1.0)];
        let err = PlanarDrawing::from_cycles(vec![a, b]).unwrap_err();
        assert!(matches!(err, Error::InvalidDrawing(_)));
    }

    #[test]
    fn overlapping_polygons_are_rejected() {
        let a = fixtures::square::<f64>();
        let b = vec![pt(0.5, 0.5), pt(1.5, 0.5), pt(1.5, 1.5), pt(0.5, 1.5)];
        assert!(PlanarDrawing::from_cycles(vec![a, b]).is_err());
    }

    #[test]
    fn nested_squares_get_depths() {
        let outer = vec![pt(0.0, 0.0), pt(4.0, 0.0), pt(4.0, 4.0), pt(0.0, 4.0)];
        let inner = vec![pt(1.0, 1.0), pt(3.0, 1.0), pt(3.0, 3.0), pt(1.0, 3.0)];
        let d = PlanarDrawing::from_cycles(vec![outer, inner]).unwrap();
        let regions = d.regions(None);
        assert_eq!(regions.len(), 2);
        // Annulus region: outer cycle plus one reversed child contour.
        assert_eq!(regions[0].contours.len(), 2);
        assert!(regions[0].material);
        // Inner region is a hole of the drawing (even-odd): not material.
        assert_eq!(regions[1].contours.len(), 1);
        assert!(!regions[1].material);
    }

    #[test]
    fn reversed_contour_edges_line_up() {
        let d = PlanarDrawing::from_polygon(fixtures::l_polygon::<f64>()).unwrap();
        let far = d.default_paper().inflate(10.0);
        let regions = d.regions(Some(far));
        let ext = regions.last().unwrap();
        let contour = &ext.contours[1];
        let n = contour.points.len();
        for k in 0..n {
            let a = contour.points[k];
            let b = contour.points[(k + 1) % n];
            let id = contour.edges[k].unwrap();
            let seg = d.edge_segment(id);
            // Reversed walk: contour edge (a, b) is the drawing edge (b, a).
            assert!(a.distance(seg.b) < 1e-12 && b.distance(seg.a) < 1e-12);
        }
    }
}
