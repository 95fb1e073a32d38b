//! Inward offsets by brute force: translate every edge line, re-miter, and
//! untangle self-intersections through the arrangement.
//!
//! This is deliberately a different mechanism from the wavefront simulation
//! in `skeleton`: structure changes are discovered by geometric
//! self-intersection of the naively propagated front and resolved by a
//! winding-number boolean, with no event classification or ring surgery.
//! The two routes cross-check each other.

use crate::drawing::PlanarDrawing;
use crate::error::{Error, Result};
use crate::geom::{
    cast, front_velocity, FrontVelocity, Line2, Point2, Real, Segment2, Tolerance, Vec2,
};
use crate::subdivision::{LabeledSegment, PlanarSubdivision};

/// Offset front line: points `x` with `x . normal = offset + u` at time `u`.
#[derive(Debug, Clone, Copy)]
struct FrontLine<R> {
    normal: Vec2<R>,
    offset: R,
}

impl<R: Real> FrontLine<R> {
    fn at(&self, u: R) -> Line2<R> {
        Line2 { normal: self.normal, offset: self.offset + u }
    }
}

/// Loop vertex: anchored position plus velocity, with the two front lines it
/// rides on.
#[derive(Debug, Clone, Copy)]
struct LoopVertex<R> {
    anchor: Point2<R>,
    anchor_time: R,
    vel: Vec2<R>,
    line_in: usize,
    line_out: usize,
}

impl<R: Real> LoopVertex<R> {
    fn at(&self, u: R) -> Point2<R> {
        self.anchor + self.vel * (u - self.anchor_time)
    }
}

#[derive(Debug, Clone)]
struct Loop<R> {
    verts: Vec<LoopVertex<R>>,
    /// Expected orientation: +1 outer (counterclockwise), -1 hole.
    sign: i8,
}

struct OffsetState<R> {
    lines: Vec<FrontLine<R>>,
    loops: Vec<Loop<R>>,
    time: R,
    tol: Tolerance<R>,
}

/// The shrunk shape of every bounded region of the drawing at offset `t`,
/// as disjoint simple cycles. Past total collapse the list is empty.
pub fn offset_wavefront<R: Real>(
    drawing: &PlanarDrawing<R>,
    t: R,
) -> Result<Vec<Vec<Point2<R>>>> {
    if t < R::zero() || !t.is_finite() {
        return Err(Error::InvalidInput(format!("offset distance must be >= 0, got {t}")));
    }
    let tol = *drawing.tolerance();
    let mut cycles = Vec::new();
    for region in drawing.regions(None) {
        let contours: Vec<Vec<Point2<R>>> =
            region.contours.iter().map(|c| c.points.clone()).collect();
        cycles.extend(offset_contours(&contours, t, &tol)?);
    }
    Ok(cycles)
}

/// Offset of a single region given by contours oriented region-on-left.
pub(crate) fn offset_contours<R: Real>(
    contours: &[Vec<Point2<R>>],
    t: R,
    tol: &Tolerance<R>,
) -> Result<Vec<Vec<Point2<R>>>> {
    let mut state = OffsetState::new(contours, tol)?;
    let mut steps = 0usize;
    loop {
        steps += 1;
        if steps > 600 {
            return Err(Error::NumericalBreakdown {
                message: "offset restructuring did not settle".into(),
                trace: Vec::new(),
            });
        }
        if state.loops.is_empty() {
            return Ok(Vec::new());
        }
        let eps_t = tol.eps_geom;
        let mut times = state.candidate_times(t);
        times.retain(|&u| u > state.time + eps_t && u <= t - eps_t);
        times.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let Some(&first) = times.first() else {
            return Ok(state.finalize(t));
        };
        let next_distinct = times.iter().copied().find(|&u| u > first + eps_t);
        let gap_cap = match next_distinct {
            Some(u) => (u - first) / cast(2.0),
            None => (t - first) / cast(2.0),
        };
        let delta = (tol.diameter * cast(1e-5)).min(gap_cap).max(eps_t * cast(2.0));
        let probe = (first + delta).min(t);
        state.restructure(probe)?;
    }
}

impl<R: Real> OffsetState<R> {
    fn new(contours: &[Vec<Point2<R>>], tol: &Tolerance<R>) -> Result<Self> {
        let mut lines = Vec::new();
        let mut loops = Vec::new();
        for contour in contours {
            let n = contour.len();
            if n < 3 {
                return Err(Error::InvalidPolygon("contour must have 3+ vertices".into()));
            }
            let base = lines.len();
            for k in 0..n {
                let a = contour[k];
                let b = contour[(k + 1) % n];
                let d = (b - a).normalized();
                let normal = d.perp();
                lines.push(FrontLine { normal, offset: normal.dot(a.to_vec()) });
            }
            let mut lp = Vec::with_capacity(n);
            for k in 0..n {
                let line_in = base + (k + n - 1) % n;
                let line_out = base + k;
                let vel = match front_velocity(lines[line_in].normal, lines[line_out].normal) {
                    FrontVelocity::Normal(v) | FrontVelocity::Straight(v) => v,
                    FrontVelocity::Pinch => {
                        return Err(Error::InvalidPolygon(
                            "contour has a zero-angle spike".into(),
                        ))
                    }
                };
                lp.push(LoopVertex {
                    anchor: contour[k],
                    anchor_time: R::zero(),
                    vel,
                    line_in,
                    line_out,
                });
            }
            let sign = if crate::geom::signed_area(contour) >= R::zero() { 1 } else { -1 };
            loops.push(Loop { verts: lp, sign });
        }
        Ok(OffsetState { lines, loops, time: R::zero(), tol: *tol })
    }

    /// Times in (self.time, horizon] at which the propagated structure may
    /// change: adjacent vertices meeting, or any vertex crossing any front.
    fn candidate_times(&self, horizon: R) -> Vec<R> {
        let mut out = Vec::new();
        let s = self.time;
        for lp in &self.loops {
            let lp = &lp.verts;
            let n = lp.len();
            for i in 0..n {
                let v = &lp[i];
                let w = &lp[(i + 1) % n];
                // Shared line: gap closes linearly along its direction.
                let d = self.lines[v.line_out].at(s).direction();
                let gap = (w.at(s) - v.at(s)).dot(d);
                let rate = (w.vel - v.vel).dot(d);
                if rate < -cast::<R>(1e-12) {
                    out.push(s - gap / rate);
                }
            }
        }
        // Vertex versus every non-incident front line (span unchecked; false
        // candidates only cost a probe).
        for lp in &self.loops {
            for v in &lp.verts {
                for (li, line) in self.lines.iter().enumerate() {
                    if li == v.line_in || li == v.line_out {
                        continue;
                    }
                    let approach = R::one() - v.vel.dot(line.normal);
                    if approach.abs() < cast(1e-12) {
                        continue;
                    }
                    let dist = v.at(s).to_vec().dot(line.normal) - (line.offset + s);
                    let u = s + dist / approach;
                    if u.is_finite() && u > s && u <= horizon {
                        out.push(u);
                    }
                }
            }
        }
        out
    }

    /// Re-derive the loop structure just past an event time.
    fn restructure(&mut self, u: R) -> Result<()> {
        self.drop_dead_and_inverted(u);
        if self.loops.is_empty() {
            self.time = u;
            return Ok(());
        }
        // Arrangement boolean: keep winding >= 1 under the loops' own
        // orientation, then read the surviving front fragments back off the
        // boundary.
        let mut inputs: Vec<LabeledSegment<R>> = Vec::new();
        let mut seg_line: Vec<usize> = Vec::new();
        for lp in self.loops.iter() {
            let lp = &lp.verts;
            let n = lp.len();
            for i in 0..n {
                let a = lp[i].at(u);
                let b = lp[(i + 1) % n].at(u);
                if a.distance(b) <= self.tol.eps_geom {
                    continue;
                }
                let label = seg_line.len() as u32;
                seg_line.push(lp[i].line_out);
                inputs.push(LabeledSegment { segment: Segment2::new(a, b), label });
            }
        }
        if inputs.len() < 3 {
            self.loops.clear();
            self.time = u;
            return Ok(());
        }
        let snapped = snap_endpoints(&inputs, &self.tol);
        let sub = PlanarSubdivision::build_labeled(&snapped, &self.tol)?;
        let winding = sub.face_windings(|_| true);
        let keep = |f: usize| winding[f] >= 1;
        let mut new_loops = Vec::new();
        for walk in sub.region_boundaries(keep) {
            let mut lp: Vec<LoopVertex<R>> = Vec::with_capacity(walk.len());
            let n = walk.len();
            for i in 0..n {
                let h_in = walk[(i + n - 1) % n];
                let h_out = walk[i];
                let line_in = self.line_of(&sub, h_in, &seg_line);
                let line_out = self.line_of(&sub, h_out, &seg_line);
                let anchor = sub.origin_point(h_out);
                let vel = match front_velocity(
                    self.lines[line_in].normal,
                    self.lines[line_out].normal,
                ) {
                    FrontVelocity::Normal(v) | FrontVelocity::Straight(v) => v,
                    // A pinch fragment is a zero-width slit; skip the vertex
                    // and let the next cleanup pass dissolve it.
                    FrontVelocity::Pinch => Vec2::new(R::zero(), R::zero()),
                };
                lp.push(LoopVertex { anchor, anchor_time: u, vel, line_in, line_out });
            }
            if lp.len() >= 3 {
                let pts: Vec<Point2<R>> = lp.iter().map(|v| v.at(u)).collect();
                let sign = if crate::geom::signed_area(&pts) >= R::zero() { 1 } else { -1 };
                new_loops.push(Loop { verts: lp, sign });
            }
        }
        self.loops = new_loops;
        self.time = u;
        self.drop_dead_and_inverted(u);
        Ok(())
    }

    fn line_of(&self, sub: &PlanarSubdivision<R>, h: usize, seg_line: &[usize]) -> usize {
        let edge = &sub.edges[sub.half_edges[h].edge];
        let (label, _) = edge.labels.iter().min_by_key(|(l, _)| *l).copied().unwrap();
        seg_line[label as usize]
    }

    /// Remove edges that have flipped against their front direction (dead
    /// fragments whose neighbors overtook them) and loops that collapsed or
    /// turned inside out.
    fn drop_dead_and_inverted(&mut self, u: R) {
        let lines = &self.lines;
        let tol = self.tol;
        for lp in &mut self.loops {
            let lp = &mut lp.verts;
            let mut guard = 0;
            'outer: while lp.len() >= 3 && guard < 4 * lp.len() + 8 {
                guard += 1;
                let n = lp.len();
                for i in 0..n {
                    let a = lp[i].at(u);
                    let b = lp[(i + 1) % n].at(u);
                    let d = lines[lp[i].line_out].at(u).direction();
                    if (b - a).dot(d) >= -tol.eps_geom {
                        continue;
                    }
                    let vi = lp[i];
                    let vj = lp[(i + 1) % n];
                    // Merge only when the neighbor miter is well defined; a
                    // pinch here means the whole loop is dying or needs the
                    // arrangement pass.
                    let vel = match front_velocity(
                        lines[vi.line_in].normal,
                        lines[vj.line_out].normal,
                    ) {
                        FrontVelocity::Normal(v) | FrontVelocity::Straight(v) => v,
                        FrontVelocity::Pinch => continue,
                    };
                    let Some(anchor) =
                        lines[vi.line_in].at(u).intersect(&lines[vj.line_out].at(u))
                    else {
                        continue;
                    };
                    lp[i] = LoopVertex {
                        anchor,
                        anchor_time: u,
                        vel,
                        line_in: vi.line_in,
                        line_out: vj.line_out,
                    };
                    lp.remove((i + 1) % n);
                    continue 'outer;
                }
                break;
            }
        }
        let eps_area = tol.eps_geom * tol.diameter;
        self.loops.retain(|lp| {
            if lp.verts.len() < 3 {
                return false;
            }
            let pts: Vec<Point2<R>> = lp.verts.iter().map(|v| v.at(u)).collect();
            let area = crate::geom::signed_area(&pts);
            if area.abs() <= eps_area {
                return false;
            }
            (area > R::zero()) == (lp.sign > 0)
        });
    }

    /// Evaluate at the target time and emit clean cycles.
    fn finalize(&self, t: R) -> Vec<Vec<Point2<R>>> {
        let mut state = OffsetState {
            lines: self.lines.clone(),
            loops: self.loops.clone(),
            time: self.time,
            tol: self.tol,
        };
        state.drop_dead_and_inverted(t);
        let mut out = Vec::new();
        for lp in &state.loops {
            let mut pts: Vec<Point2<R>> = lp.verts.iter().map(|v| v.at(t)).collect();
            pts.dedup_by(|a, b| a.distance(*b) <= state.tol.eps_geom);
            if pts.len() >= 2 && pts[0].distance(*pts.last().unwrap()) <= state.tol.eps_geom {
                pts.pop();
            }
            if pts.len() >= 3 {
                out.push(pts);
            }
        }
        out
    }
}

/// Cluster segment endpoints so that near-coincident computed points become
/// exactly equal before the strict arrangement build.
pub(crate) fn snap_endpoints<R: Real>(
    inputs: &[LabeledSegment<R>],
    tol: &Tolerance<R>,
) -> Vec<LabeledSegment<R>> {
    let mut reps: Vec<Point2<R>> = Vec::new();
    let mut snap = |p: Point2<R>| -> Point2<R> {
        let mut best: Option<(R, usize)> = None;
        for (i, q) in reps.iter().enumerate() {
            let d = p.distance(*q);
            if d <= tol.eps_geom && best.map_or(true, |(bd, _)| d < bd) {
                best = Some((d, i));
            }
        }
        match best {
            Some((_, i)) => reps[i],
            None => {
                reps.push(p);
                p
            }
        }
    };
    inputs
        .iter()
        .map(|ls| LabeledSegment {
            segment: Segment2::new(snap(ls.segment.a), snap(ls.segment.b)),
            label: ls.label,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn pt(x: f64, y: f64) -> Point2<f64> {
        Point2::new(x, y)
    }

    fn drawing(poly: Vec<Point2<f64>>) -> PlanarDrawing<f64> {
        PlanarDrawing::from_polygon(poly).unwrap()
    }

    fn dist_to_cycles(p: Point2<f64>, cycles: &[Vec<Point2<f64>>]) -> f64 {
        let mut best = f64::INFINITY;
        for c in cycles {
            for i in 0..c.len() {
                let s = Segment2::new(c[i], c[(i + 1) % c.len()]);
                best = best.min(s.distance_to(p));
            }
        }
        best
    }

    #[test]
    fn square_offset_is_shrunk_square() {
        let d = drawing(fixtures::square::<f64>());
        let cycles = offset_wavefront(&d, 0.2).unwrap();
        assert_eq!(cycles.len(), 1);
        for corner in [pt(0.2, 0.2), pt(0.8, 0.2), pt(0.8, 0.8), pt(0.2, 0.8)] {
            assert!(dist_to_cycles(corner, &cycles) < 1e-9, "corner {corner:?}");
        }
        let area = crate::geom::signed_area(&cycles[0]).abs();
        assert!((area - 0.36).abs() < 1e-9);
    }

    #[test]
    fn rectangle_collapses_at_half_short_side() {
        let d = drawing(fixtures::rectangle::<f64>());
        let cycles = offset_wavefront(&d, 1.0).unwrap();
        assert!(cycles.is_empty(), "expected empty, got {cycles:?}");
        let before = offset_wavefront(&d, 0.9).unwrap();
        assert_eq!(before.len(), 1);
    }

    #[test]
    fn h_polygon_disconnects_past_crossbar_half_thickness() {
        let d = drawing(fixtures::h_polygon::<f64>());
        // Crossbar is 0.7 tall: one component just before 0.35, two after.
        let before = offset_wavefront(&d, 0.30).unwrap();
        assert_eq!(before.len(), 1, "still connected at 0.30");
        let after = offset_wavefront(&d, 0.40).unwrap();
        assert_eq!(after.len(), 2, "disconnected at 0.40: {after:?}");
        // Both components are the bar remnants: x spans near [0.4, 0.6] and
        // [2.4, 2.6].
        let mut min_x = f64::INFINITY;
        let mut max_x = f64::NEG_INFINITY;
        for c in &after {
            for p in c {
                min_x = min_x.min(p.x);
                max_x = max_x.max(p.x);
            }
        }
        assert!((min_x - 0.4).abs() < 1e-9 && (max_x - 2.6).abs() < 1e-9);
    }

    #[test]
    fn h_polygon_past_total_collapse_is_empty() {
        let d = drawing(fixtures::h_polygon::<f64>());
        let cycles = offset_wavefront(&d, 0.55).unwrap();
        assert!(cycles.is_empty(), "got {cycles:?}");
    }

    #[test]
    fn l_polygon_offset_area_shrinks_monotonically() {
        let d = drawing(fixtures::l_polygon::<f64>());
        let mut last = f64::INFINITY;
        for k in 1..10 {
            let t = 0.05 * k as f64;
            let cycles = offset_wavefront(&d, t).unwrap();
            let area: f64 =
                cycles.iter().map(|c| crate::geom::signed_area(c).abs()).sum();
            assert!(area < last + 1e-12, "area grew at t={t}");
            last = area;
        }
        assert!(offset_wavefront(&d, 0.51).unwrap().is_empty());
    }

    #[test]
    fn nested_squares_offset_both_regions() {
        let outer = vec![pt(0.0, 0.0), pt(6.0, 0.0), pt(6.0, 6.0), pt(0.0, 6.0)];
        let inner = vec![pt(2.0, 2.0), pt(4.0, 2.0), pt(4.0, 4.0), pt(2.0, 4.0)];
        let d = PlanarDrawing::from_cycles(vec![outer, inner]).unwrap();
        let cycles = offset_wavefront(&d, 0.3).unwrap();
        // Annulus contributes two cycles (outer shrunk + hole grown), the
        // inner square interior one more.
        assert_eq!(cycles.len(), 3, "{cycles:?}");
        // Annulus dies at half the gap (gap is 2 -> t=1), inner square at 1.
        let gone = offset_wavefront(&d, 1.05).unwrap();
        assert!(gone.is_empty());
    }

    #[test]
    fn negative_offset_is_rejected() {
        let d = drawing(fixtures::square::<f64>());
        assert!(offset_wavefront(&d, -0.1).is_err());
    }
}
