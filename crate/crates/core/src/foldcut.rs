//! Fold-and-cut crease patterns: skeleton-line creases plus propagated
//! perpendiculars.
//!
//! Chains drop from every positive-time skeleton node towards the drawing
//! edge of each incident face and propagate: crossing an arc mirrors them
//! into the neighbouring face (perpendicular to its edge), crossing a cut
//! continues straight into the face on the other side. A chain ends at the
//! paper border, at a skeleton node, or at a point some other chain already
//! visited. Chain segments that stay collinear with a skeleton arc line are
//! part of the skeleton-line crease family (they extend ridge and bisector
//! lines across the sheet, which is how shapes like the H fold along their
//! full bisectors); the rest are the perpendicular creases proper.

use crate::drawing::PlanarDrawing;
use crate::error::{Error, Result};
use crate::geom::{cast, Line2, Point2, Real, Rect, Segment2, Tolerance, Vec2};
use crate::offset::snap_endpoints;
use crate::skeleton::{FaceBoundary, SkeletonFace, StraightSkeleton};
use crate::subdivision::{LabeledSegment, PlanarSubdivision};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CreaseKind {
    SkeletonLine,
    Perpendicular,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FoldOrientation {
    Mountain,
    Valley,
    Unassigned,
}

#[derive(Debug, Clone, Copy)]
pub struct Crease<R> {
    pub segment: Segment2<R>,
    pub kind: CreaseKind,
    pub orientation: FoldOrientation,
    /// Perpendicular recursion depth; 0 for skeleton creases.
    pub generation: u32,
}

/// Role of one subdivision edge of the pattern; collinear overlaps can make
/// an edge several things at once (a fold along the cut line).
#[derive(Debug, Clone, Copy, Default)]
pub struct EdgeRole {
    pub cut: bool,
    pub crease: bool,
    pub paper: bool,
    pub perpendicular: bool,
}

#[derive(Debug, Clone)]
pub struct CreasePattern<R> {
    pub paper: Rect<R>,
    pub creases: Vec<Crease<R>>,
    pub cuts: Vec<Segment2<R>>,
    pub subdivision: PlanarSubdivision<R>,
    /// Role per subdivision edge.
    pub edge_roles: Vec<EdgeRole>,
    pub tol: Tolerance<R>,
}

impl<R: Real> CreasePattern<R> {
    /// Deterministic default base face: the bounded face whose boundary
    /// contains the lexicographically smallest vertex.
    pub fn default_base_face(&self) -> usize {
        let sub = &self.subdivision;
        let mut best: Option<(Point2<R>, usize)> = None;
        for f in 0..sub.faces.len() {
            let Some(c) = sub.faces[f].outer else { continue };
            let pts = sub.cycle_points(c);
            let mut m = pts[0];
            for p in &pts {
                if (p.x, p.y) < (m.x, m.y) {
                    m = *p;
                }
            }
            if best.map_or(true, |(bm, _)| (m.x, m.y) < (bm.x, bm.y)) {
                best = Some((m, f));
            }
        }
        best.expect("pattern has bounded faces").1
    }
}

/// Canonical form of a line for collinearity grouping.
fn canonical_line<R: Real>(a: Point2<R>, b: Point2<R>) -> Line2<R> {
    let mut l = Line2::through(a, b - a);
    if l.normal.y < -cast::<R>(1e-12)
        || (l.normal.y.abs() <= cast::<R>(1e-12) && l.normal.x < R::zero())
    {
        l = Line2 { normal: -l.normal, offset: -l.offset };
    }
    l
}

fn same_line<R: Real>(a: &Line2<R>, b: &Line2<R>, tol: &Tolerance<R>) -> bool {
    a.normal.cross(b.normal).abs() <= cast(1e-9)
        && a.normal.dot(b.normal) > R::zero()
        && (a.offset - b.offset).abs() <= tol.eps_geom * cast(4.0)
}

/// Group segments into maximal collinear pieces; overlapping or adjacent
/// intervals on one line merge.
fn merge_collinear<R: Real>(
    segs: &[(Segment2<R>, u32)],
    tol: &Tolerance<R>,
) -> Vec<(Segment2<R>, u32)> {
    let mut used = vec![false; segs.len()];
    let mut out = Vec::new();
    for i in 0..segs.len() {
        if used[i] {
            continue;
        }
        let line = canonical_line(segs[i].0.a, segs[i].0.b);
        let mut members = vec![i];
        used[i] = true;
        for j in (i + 1)..segs.len() {
            if used[j] {
                continue;
            }
            let lj = canonical_line(segs[j].0.a, segs[j].0.b);
            if same_line(&line, &lj, tol) {
                members.push(j);
                used[j] = true;
            }
        }
        let d = line.direction();
        let mut intervals: Vec<(R, R, u32)> = members
            .iter()
            .map(|&k| {
                let s = segs[k].0;
                let (mut u, mut v) = (s.a.to_vec().dot(d), s.b.to_vec().dot(d));
                if u > v {
                    std::mem::swap(&mut u, &mut v);
                }
                (u, v, segs[k].1)
            })
            .collect();
        intervals.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        let mut cur = intervals[0];
        let origin = Point2::new(
            line.normal.x * line.offset,
            line.normal.y * line.offset,
        );
        let emit = |iv: (R, R, u32), out: &mut Vec<(Segment2<R>, u32)>| {
            let a = origin + d * iv.0;
            let b = origin + d * iv.1;
            out.push((Segment2::new(a, b), iv.2));
        };
        for iv in intervals.into_iter().skip(1) {
            if iv.0 <= cur.1 + tol.eps_geom * cast(4.0) {
                cur.1 = cur.1.max(iv.1);
                cur.2 = cur.2.min(iv.2);
            } else {
                emit(cur, &mut out);
                cur = iv;
            }
        }
        emit(cur, &mut out);
    }
    out
}

/// Canonical lines of arcs that actually reach the paper.
fn relevant_arc_lines<R: Real>(
    skel: &StraightSkeleton<R>,
    tol: &Tolerance<R>,
) -> Vec<Line2<R>> {
    let mut lines: Vec<Line2<R>> = Vec::new();
    for arc in &skel.arcs {
        let a = skel.nodes[arc.node_a].position;
        let b = skel.nodes[arc.node_b].position;
        if a.distance(b) <= tol.eps_geom * cast(8.0) {
            continue;
        }
        let Some(clipped) = skel.paper.clip_segment(&Segment2::new(a, b)) else { continue };
        if clipped.length() <= tol.eps_geom * cast(8.0) {
            continue;
        }
        let l = canonical_line(a, b);
        if !lines.iter().any(|m| same_line(m, &l, tol)) {
            lines.push(l);
        }
    }
    lines
}

/// Skeleton arcs clipped to the paper, as crease segments.
fn arc_crease_segments<R: Real>(
    skel: &StraightSkeleton<R>,
    tol: &Tolerance<R>,
) -> Vec<(Segment2<R>, u32)> {
    let mut out = Vec::new();
    for arc in &skel.arcs {
        let a = skel.nodes[arc.node_a].position;
        let b = skel.nodes[arc.node_b].position;
        if a.distance(b) <= tol.eps_geom * cast(8.0) {
            continue;
        }
        if let Some(clipped) = skel.paper.clip_segment(&Segment2::new(a, b)) {
            if clipped.length() > tol.eps_geom * cast(8.0) {
                out.push((clipped, 0u32));
            }
        }
    }
    out
}

/// Traced chains split into skeleton-line extensions (collinear with an
/// arc line) and genuine perpendiculars, plus the number of chains that ran
/// out of generation budget.
struct ChainTrace<R> {
    extensions: Vec<(Segment2<R>, u32)>,
    perpendiculars: Vec<(Segment2<R>, u32)>,
    budget_dead: usize,
}

fn trace_chains<R: Real>(
    skel: &StraightSkeleton<R>,
    tol: &Tolerance<R>,
    max_generation: u32,
) -> ChainTrace<R> {
    let eps = tol.eps_geom * cast(8.0);
    let arc_lines = relevant_arc_lines(skel, tol);
    let mut visited: Vec<Point2<R>> = Vec::new();
    let mut trace = ChainTrace {
        extensions: Vec::new(),
        perpendiculars: Vec::new(),
        budget_dead: 0,
    };

    // Seeds: every real positive-time node, into every incident face whose
    // corner cone at the node contains the drop direction.
    let mut seeds: Vec<(Point2<R>, usize)> = Vec::new();
    for node in skel
        .nodes
        .iter()
        .filter(|n| !n.clipped && n.time > tol.eps_geom && skel.paper.contains(n.position, -tol.eps_geom))
    {
        let mut keys: Vec<usize> = Vec::new();
        for arc in &skel.arcs {
            let touches = [arc.node_a, arc.node_b]
                .iter()
                .any(|&ni| skel.nodes[ni].position.distance(node.position) <= tol.eps_geom);
            if touches {
                for k in [arc.left_face, arc.right_face] {
                    if k != usize::MAX && !keys.contains(&k) {
                        keys.push(k);
                    }
                }
            }
        }
        keys.sort_unstable();
        for k in keys {
            seeds.push((node.position, k));
        }
    }

    let nodes: Vec<Point2<R>> = skel
        .nodes
        .iter()
        .filter(|n| !n.clipped)
        .map(|n| n.position)
        .collect();

    for (start, key) in seeds {
        let Some(line) = skel.face_line(key) else { continue };
        let dir = -line.normal;
        let Some(face) = face_piece_at(skel, key, start, eps) else { continue };
        if !cone_contains(&skel.faces[face].polygon, start, dir, eps) {
            continue;
        }
        let mut point = start;
        let mut d = dir;
        let mut face = face;
        let mut generation = 1u32;
        visited.push(start);
        let mut steps = 0usize;
        loop {
            steps += 1;
            if steps > 16 * (max_generation as usize + 4) {
                trace.budget_dead += 1;
                break;
            }
            let Some((q, side)) = face_exit(&skel.faces[face], point, d, tol) else {
                // Numerical dead end; drop the chain fragment.
                break;
            };
            let seg = Segment2::new(point, q);
            if seg.length() > tol.eps_geom * cast(8.0) {
                let l = canonical_line(seg.a, seg.b);
                if arc_lines.iter().any(|m| same_line(m, &l, tol)) {
                    trace.extensions.push((seg, generation));
                } else {
                    trace.perpendiculars.push((seg, generation));
                }
            }
            // Stop at any existing crease point: previous chain crossings
            // and skeleton nodes both qualify.
            let terminate = visited.iter().chain(nodes.iter()).any(|p| p.distance(q) <= eps);
            visited.push(q);
            if terminate {
                break;
            }
            match side {
                FaceBoundary::Paper => break,
                FaceBoundary::Cut => {
                    // Continue straight into the other side of this edge.
                    let other = skel.faces[face].key ^ 1;
                    match face_piece_at(skel, other, q, eps) {
                        Some(f) => face = f,
                        None => break,
                    }
                }
                FaceBoundary::Arc(other_key) => {
                    if other_key == usize::MAX {
                        break;
                    }
                    generation += 1;
                    if generation > max_generation {
                        trace.budget_dead += 1;
                        break;
                    }
                    // Mirror the chain across the arc: the continuation is
                    // perpendicular to the new face's edge.
                    let Some(new_line) = skel.face_line(other_key) else { break };
                    let n = new_line.normal;
                    let d_new = if d.dot(n).abs() > d.dot(n.perp()).abs() {
                        // Should be (anti)parallel to the new normal.
                        if d.dot(n) > R::zero() { n } else { -n }
                    } else {
                        break;
                    };
                    d = d_new;
                    match face_piece_at(skel, other_key, q, eps) {
                        Some(f) => face = f,
                        None => break,
                    }
                }
            }
            point = q;
        }
    }
    trace
}

/// Face piece of `key` whose boundary or interior contains `p`.
fn face_piece_at<R: Real>(
    skel: &StraightSkeleton<R>,
    key: usize,
    p: Point2<R>,
    eps: R,
) -> Option<usize> {
    use crate::geom::{point_in_cycle_unchecked, PointLocation};
    for (i, f) in skel.faces.iter().enumerate() {
        if f.key != key {
            continue;
        }
        if point_in_cycle_unchecked(p, &f.polygon, eps) != PointLocation::Outside {
            return Some(i);
        }
    }
    None
}

/// Does the wedge of `poly` at the vertex nearest `p` contain direction `d`?
fn cone_contains<R: Real>(poly: &[Point2<R>], p: Point2<R>, d: Vec2<R>, eps: R) -> bool {
    let n = poly.len();
    let Some(i) = (0..n).find(|&i| poly[i].distance(p) <= eps) else {
        return false;
    };
    let a = (poly[(i + 1) % n] - poly[i]).normalized();
    let b = (poly[(i + n - 1) % n] - poly[i]).normalized();
    let eps_c = cast::<R>(1e-9);
    if a.cross(b) >= -eps_c {
        a.cross(d) > eps_c && d.cross(b) > eps_c
    } else {
        a.cross(d) > eps_c || d.cross(b) > eps_c
    }
}

/// First exit of the ray `p + s d` through the face boundary.
fn face_exit<R: Real>(
    face: &SkeletonFace<R>,
    p: Point2<R>,
    d: Vec2<R>,
    tol: &Tolerance<R>,
) -> Option<(Point2<R>, FaceBoundary)> {
    let poly = &face.polygon;
    let n = poly.len();
    let mut best: Option<(R, Point2<R>, FaceBoundary)> = None;
    for i in 0..n {
        let a = poly[i];
        let b = poly[(i + 1) % n];
        let e = b - a;
        let denom = d.cross(e);
        if denom.abs() < cast(1e-14) {
            continue;
        }
        let w = a - p;
        let s = w.cross(e) / denom;
        let u = w.cross(d) / denom;
        let eps_u = tol.eps_geom / e.norm().max(tol.eps_geom);
        if s <= tol.eps_geom * cast(4.0) || u < -eps_u || u > R::one() + eps_u {
            continue;
        }
        if best.map_or(true, |(bs, _, _)| s < bs) {
            best = Some((s, p + d * s, face.boundary[i]));
        }
    }
    best.map(|(_, q, k)| (q, k))
}

/// Perpendicular creases required by the drawing, maximally seeded and
/// dropped entirely when the skeleton-line creases alone make a valid
/// pattern.
pub fn generate_perpendiculars<R: Real>(
    skel: &StraightSkeleton<R>,
    drawing: &PlanarDrawing<R>,
    max_generation: u32,
) -> Result<Vec<Crease<R>>> {
    if max_generation == 0 {
        return Err(Error::InvalidInput("max_generation must be at least 1".into()));
    }
    let tol = *drawing.tolerance();
    let skeleton_only = assemble_crease_pattern(skel, &[], drawing, &skel.paper)?;
    let base = skeleton_only.default_base_face();
    if let Ok(state) = crate::foldmap::compute_fold_map(&skeleton_only, base) {
        if crate::foldmap::verify_one_cut(&state, drawing, &tol).is_ok() {
            return Ok(Vec::new());
        }
    }
    let trace = trace_chains(skel, &tol, max_generation);
    if trace.budget_dead > 0 {
        return Err(Error::CreaseBudgetExceeded {
            generation: max_generation,
            live: trace.budget_dead,
        });
    }
    let merged = merge_collinear(&trace.perpendiculars, &tol);
    Ok(merged
        .into_iter()
        .filter(|(s, _)| s.length() > tol.eps_geom * cast(8.0))
        .map(|(segment, generation)| Crease {
            segment,
            kind: CreaseKind::Perpendicular,
            orientation: FoldOrientation::Unassigned,
            generation,
        })
        .collect())
}

/// Default perpendicular budget; the unbounded case must surface as a clean
/// error, not a hang.
pub const DEFAULT_MAX_GENERATION: u32 = 32;

/// Assemble the full pattern: skeleton-line creases and perpendiculars over
/// the cut drawing, subdivided together with the paper border.
pub fn assemble_crease_pattern<R: Real>(
    skel: &StraightSkeleton<R>,
    perps: &[Crease<R>],
    drawing: &PlanarDrawing<R>,
    paper: &Rect<R>,
) -> Result<CreasePattern<R>> {
    if drawing.cycles().is_empty() {
        return Err(Error::InvalidDrawing("empty drawing".into()));
    }
    let tol = *drawing.tolerance();
    let mut skeleton_segs = arc_crease_segments(skel, &tol);
    skeleton_segs.extend(trace_chains(skel, &tol, DEFAULT_MAX_GENERATION).extensions);
    let mut creases: Vec<Crease<R>> = merge_collinear(&skeleton_segs, &tol)
        .into_iter()
        .filter(|(s, _)| s.length() > tol.eps_geom * cast(8.0))
        .map(|(segment, _)| Crease {
            segment,
            kind: CreaseKind::SkeletonLine,
            orientation: FoldOrientation::Unassigned,
            generation: 0,
        })
        .collect();
    creases.extend(perps.iter().copied());
    let cuts: Vec<Segment2<R>> = drawing.edges().map(|(_, s)| s).collect();

    #[derive(Clone, Copy)]
    enum Src {
        Paper,
        Cut,
        Crease { perpendicular: bool },
    }
    let mut inputs: Vec<LabeledSegment<R>> = Vec::new();
    let mut srcs: Vec<Src> = Vec::new();
    for seg in paper.edges() {
        srcs.push(Src::Paper);
        inputs.push(LabeledSegment { segment: seg, label: (srcs.len() - 1) as u32 });
    }
    for seg in &cuts {
        srcs.push(Src::Cut);
        inputs.push(LabeledSegment { segment: *seg, label: (srcs.len() - 1) as u32 });
    }
    for c in &creases {
        srcs.push(Src::Crease { perpendicular: c.kind == CreaseKind::Perpendicular });
        inputs.push(LabeledSegment { segment: c.segment, label: (srcs.len() - 1) as u32 });
    }
    let snapped = snap_endpoints(&inputs, &tol);
    let subdivision = PlanarSubdivision::build_labeled(&snapped, &tol)?;
    let mut edge_roles = vec![EdgeRole::default(); subdivision.edges.len()];
    for (k, e) in subdivision.edges.iter().enumerate() {
        for &(label, _) in &e.labels {
            match srcs[label as usize] {
                Src::Paper => edge_roles[k].paper = true,
                Src::Cut => edge_roles[k].cut = true,
                Src::Crease { perpendicular } => {
                    edge_roles[k].crease = true;
                    edge_roles[k].perpendicular |= perpendicular;
                }
            }
        }
    }
    Ok(CreasePattern { paper: *paper, creases, cuts, subdivision, edge_roles, tol })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::skeleton::compute_skeleton;

    fn pattern_for(
        poly: Vec<Point2<f64>>,
        max_gen: u32,
    ) -> (PlanarDrawing<f64>, CreasePattern<f64>, Vec<Crease<f64>>) {
        let d = PlanarDrawing::from_polygon(poly).unwrap();
        let paper = d.default_paper();
        let tol = *d.tolerance();
        let skel = compute_skeleton(&d, &paper, &tol).unwrap();
        let perps = generate_perpendiculars(&skel, &d, max_gen).unwrap();
        let pattern = assemble_crease_pattern(&skel, &perps, &d, &paper).unwrap();
        (d, pattern, perps)
    }

    #[test]
    fn h_polygon_needs_no_perpendiculars() {
        let (_, _, perps) = pattern_for(fixtures::h_polygon::<f64>(), 32);
        assert!(perps.is_empty(), "{perps:?}");
    }

    #[test]
    fn square_needs_no_perpendiculars_and_has_diagonal_lines() {
        let (d, pattern, perps) = pattern_for(fixtures::square::<f64>(), 32);
        assert!(perps.is_empty());
        // Both full diagonal lines, extended to the paper border.
        let tol = d.tolerance();
        for dir in [Vec2::new(1.0, 1.0), Vec2::new(1.0, -1.0)] {
            let want = canonical_line(Point2::new(0.5, 0.5), Point2::new(0.5, 0.5) + dir);
            let found = pattern.creases.iter().any(|c| {
                c.kind == CreaseKind::SkeletonLine
                    && same_line(&canonical_line(c.segment.a, c.segment.b), &want, tol)
                    && c.segment.length() > 2.0_f64.sqrt() + 0.1
            });
            assert!(found, "missing extended diagonal {dir:?}");
        }
    }

    #[test]
    fn h_pattern_creases_include_both_bisectors() {
        let (d, pattern, _) = pattern_for(fixtures::h_polygon::<f64>(), 32);
        let tol = d.tolerance();
        let horiz = canonical_line(Point2::new(0.0, 2.0), Point2::new(1.0, 2.0));
        let vert = canonical_line(Point2::new(1.5, 0.0), Point2::new(1.5, 1.0));
        for want in [horiz, vert] {
            assert!(
                pattern
                    .creases
                    .iter()
                    .any(|c| same_line(&canonical_line(c.segment.a, c.segment.b), &want, tol)),
                "missing bisector {want:?}"
            );
        }
    }

    #[test]
    fn perpendicular_generations_stay_in_budget() {
        let (_, _, perps) = pattern_for(fixtures::butterfly::<f64>(), 32);
        assert!(perps.iter().all(|c| c.generation >= 1 && c.generation <= 32));
    }

    #[test]
    fn butterfly_requires_perpendiculars() {
        let (d, _, perps) = pattern_for(fixtures::butterfly::<f64>(), 32);
        assert!(!perps.is_empty());
        // Every perpendicular crease meets the drawing edge of its face at a
        // right angle: since chains are axis-derived from face normals this
        // reduces to checking against some drawing edge direction.
        let dirs: Vec<Vec2<f64>> = d.edges().map(|(_, s)| s.direction()).collect();
        for c in &perps {
            let cd = c.segment.direction();
            let perp_to_some_edge = dirs.iter().any(|e| e.dot(cd).abs() < 1e-9);
            assert!(perp_to_some_edge, "crease {:?} not perpendicular to any edge", c.segment);
        }
    }

    #[test]
    fn budget_error_on_tiny_generation_cap() {
        let d = PlanarDrawing::from_polygon(fixtures::butterfly::<f64>()).unwrap();
        let paper = d.default_paper();
        let tol = *d.tolerance();
        let skel = compute_skeleton(&d, &paper, &tol).unwrap();
        let err = generate_perpendiculars(&skel, &d, 1).unwrap_err();
        assert!(matches!(err, Error::CreaseBudgetExceeded { generation: 1, live } if live > 0));
    }

    #[test]
    fn skeleton_arcs_are_covered_by_creases() {
        for poly in [fixtures::h_polygon::<f64>(), fixtures::l_polygon::<f64>()] {
            let d = PlanarDrawing::from_polygon(poly).unwrap();
            let paper = d.default_paper();
            let tol = *d.tolerance();
            let skel = compute_skeleton(&d, &paper, &tol).unwrap();
            let perps = generate_perpendiculars(&skel, &d, 32).unwrap();
            let pattern = assemble_crease_pattern(&skel, &perps, &d, &paper).unwrap();
            let lines: Vec<&Crease<f64>> =
                pattern.creases.iter().filter(|c| c.kind == CreaseKind::SkeletonLine).collect();
            for arc in &skel.arcs {
                let a = skel.nodes[arc.node_a].position;
                let b = skel.nodes[arc.node_b].position;
                let seg = Segment2::new(a, b);
                let Some(clipped) = paper.clip_segment(&seg) else { continue };
                if clipped.length() < 1e-7 {
                    continue;
                }
                for f in [0.0, 0.25, 0.5, 0.75, 1.0] {
                    let p = clipped.a + (clipped.b - clipped.a) * f;
                    let covered = lines.iter().any(|c| c.segment.distance_to(p) <= 1e-7);
                    assert!(covered, "arc point {p:?} not covered");
                }
            }
        }
    }

    #[test]
    fn pattern_contains_every_drawing_vertex() {
        let (d, pattern, _) = pattern_for(fixtures::h_polygon::<f64>(), 32);
        for p in &d.cycles()[0] {
            assert!(pattern
                .subdivision
                .vertices
                .iter()
                .any(|v| v.distance(*p) <= 1e-9));
        }
    }
}
