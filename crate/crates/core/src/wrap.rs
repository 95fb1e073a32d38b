//! Wrapping a polygonal silhouette with a folded square: accordion-fold the
//! square into a strip, convex-decompose the silhouette, and sweep the strip
//! over each piece band by band, transferring between pieces across the
//! chords of a spanning tree of the partition dual.

use crate::error::{Error, Result};
use crate::foldcut::FoldOrientation;
use crate::foldmap::PlanarIsometry;
use crate::geom::{
    cast, is_simple_cycle, point_in_cycle_unchecked, signed_area, Line2, Point2, PointLocation,
    Real, Segment2, Tolerance, Vec2,
};
use crate::offset::snap_endpoints;
use crate::subdivision::{LabeledSegment, PlanarSubdivision};

/// Accordion folding of a square into a strip.
#[derive(Debug, Clone)]
pub struct AccordionPlan<R> {
    pub square_side: R,
    pub strip_width: R,
    /// Fold positions (multiples of the width) with alternating orientation.
    pub creases: Vec<(R, FoldOrientation)>,
}

impl<R: Real> AccordionPlan<R> {
    pub fn panel_count(&self) -> usize {
        self.creases.len() + 1
    }

    /// Width of the last panel (may be narrower than the strip).
    pub fn last_panel_width(&self) -> R {
        match self.creases.last() {
            Some((p, _)) => self.square_side - *p,
            None => self.square_side,
        }
    }

    /// Fold the coordinate of a point across every crease in order, then
    /// unfold again; the involution brings it back exactly.
    pub fn fold_unfold(&self, y: R) -> R {
        let mut v = y;
        for (c, _) in &self.creases {
            v = *c + *c - v;
        }
        for (c, _) in self.creases.iter().rev() {
            v = *c + *c - v;
        }
        v
    }
}

/// Evenly spaced parallel accordion creases with strictly alternating
/// orientation, first fold mountain.
pub fn accordion_fold<R: Real>(square_side: R, strip_width: R) -> Result<AccordionPlan<R>> {
    if !(square_side > R::zero()) || !(strip_width > R::zero()) {
        return Err(Error::InvalidInput("accordion dimensions must be positive".into()));
    }
    if strip_width > square_side {
        return Err(Error::InvalidInput("strip width cannot exceed the square side".into()));
    }
    let mut creases = Vec::new();
    let mut k = 1usize;
    loop {
        let pos = strip_width * cast(k as f64);
        if pos >= square_side - square_side * cast(1e-12) {
            break;
        }
        let orientation =
            if k % 2 == 1 { FoldOrientation::Mountain } else { FoldOrientation::Valley };
        creases.push((pos, orientation));
        k += 1;
    }
    Ok(AccordionPlan { square_side, strip_width, creases })
}

/// Convex partition of a silhouette with dual adjacency and spanning tree.
#[derive(Debug, Clone)]
pub struct ConvexDecomposition<R> {
    /// Convex pieces, counterclockwise.
    pub pieces: Vec<Vec<Point2<R>>>,
    /// Adjacencies between pieces sharing a chord.
    pub dual_edges: Vec<DualEdge<R>>,
    /// Indices into `dual_edges` forming a spanning tree.
    pub spanning_tree: Vec<usize>,
    /// Breadth-first visit order, rooted at the piece containing the
    /// bottom-left-most silhouette point.
    pub traversal: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct DualEdge<R> {
    pub pieces: (usize, usize),
    pub chord: Segment2<R>,
}

/// Interior angle test: do the chords incident at a reflex vertex split its
/// angle into convex parts?
fn resolves<R: Real>(
    d_out: Vec2<R>,
    d_in_rev: Vec2<R>,
    incident: &[Vec2<R>],
) -> bool {
    // Directions fanning the interior cone from d_out counterclockwise to
    // d_in_rev; all consecutive gaps must be <= pi.
    let base = d_out.angle();
    let span = |v: Vec2<R>| {
        let mut a = v.angle() - base;
        while a < R::zero() {
            a = a + R::PI() + R::PI();
        }
        while a > R::PI() + R::PI() {
            a = a - R::PI() - R::PI();
        }
        a
    };
    let mut angles: Vec<R> = incident.iter().map(|v| span(*v)).collect();
    angles.push(R::zero());
    angles.push(span(d_in_rev));
    angles.sort_by(|a, b| a.partial_cmp(b).unwrap());
    for pair in angles.windows(2) {
        if pair[1] - pair[0] > R::PI() + cast(1e-9) {
            return false;
        }
    }
    true
}

/// Convex decomposition by reflex-vertex diagonal resolution with a greedy
/// merge of inessential diagonals.
pub fn convex_decompose<R: Real>(silhouette: &[Point2<R>]) -> Result<ConvexDecomposition<R>> {
    let n = silhouette.len();
    let diam = crate::geom::Rect::bounding(silhouette.iter().copied())
        .map(|r| r.diagonal())
        .unwrap_or_else(R::one);
    let tol = Tolerance::from_diameter(diam);
    if n < 3 || !is_simple_cycle(silhouette, &tol) {
        return Err(Error::InvalidPolygon("silhouette must be a simple polygon".into()));
    }
    let mut poly = silhouette.to_vec();
    if signed_area(&poly) < R::zero() {
        poly.reverse();
    }
    let dir_out = |i: usize| (poly[(i + 1) % n] - poly[i]).normalized();
    let dir_in_rev = |i: usize| (poly[(i + n - 1) % n] - poly[i]).normalized();
    let is_reflex =
        |i: usize| dir_in_rev(i).cross(dir_out(i)) > cast::<R>(1e-12);
    let reflex: Vec<usize> = (0..n).filter(|&i| is_reflex(i)).collect();

    // Candidate chords: interior vertex-vertex diagonals.
    let mut candidates: Vec<(usize, usize)> = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if j == (i + 1) % n || (j + 1) % n == i {
                continue;
            }
            if !(reflex.contains(&i) || reflex.contains(&j)) {
                continue;
            }
            if diagonal_inside(&poly, i, j, &tol) {
                candidates.push((i, j));
            }
        }
    }

    // Greedy selection: chords resolving two reflex vertices first, then
    // singles, in canonical order, never crossing earlier picks.
    let mut chords: Vec<(usize, usize)> = Vec::new();
    let mut incident: Vec<Vec<Vec2<R>>> = vec![Vec::new(); n];
    let resolved = |i: usize, incident: &Vec<Vec<Vec2<R>>>| {
        !is_reflex(i) || resolves(dir_out(i), dir_in_rev(i), &incident[i])
    };
    for phase in 0..2 {
        for &(i, j) in &candidates {
            let all_done = reflex.iter().all(|&r| resolved(r, &incident));
            if all_done {
                break;
            }
            let both_reflex = reflex.contains(&i) && reflex.contains(&j);
            if (phase == 0) != both_reflex {
                continue;
            }
            if resolved(i, &incident) && resolved(j, &incident) {
                continue;
            }
            if chords.iter().any(|&(a, b)| chords_cross(&poly, (i, j), (a, b), &tol)) {
                continue;
            }
            // Tentatively add; keep only if it helps either endpoint.
            incident[i].push((poly[j] - poly[i]).normalized());
            incident[j].push((poly[i] - poly[j]).normalized());
            chords.push((i, j));
        }
    }
    if !reflex.iter().all(|&r| resolved(r, &incident)) {
        return Err(Error::InvalidPolygon(
            "could not resolve every reflex vertex with vertex diagonals".into(),
        ));
    }

    // Split into pieces through the arrangement, then greedily merge chords
    // whose removal keeps both sides convex.
    let mut active = chords.clone();
    loop {
        let mut removed = false;
        for k in 0..active.len() {
            let mut trial = active.clone();
            trial.remove(k);
            let mut inc: Vec<Vec<Vec2<R>>> = vec![Vec::new(); n];
            for &(i, j) in &trial {
                inc[i].push((poly[j] - poly[i]).normalized());
                inc[j].push((poly[i] - poly[j]).normalized());
            }
            if reflex.iter().all(|&r| resolved(r, &inc)) {
                active = trial;
                removed = true;
                break;
            }
        }
        if !removed {
            break;
        }
    }

    pieces_from_chords(&poly, &active, &tol)
}

fn diagonal_inside<R: Real>(
    poly: &[Point2<R>],
    i: usize,
    j: usize,
    tol: &Tolerance<R>,
) -> bool {
    use crate::geom::{intersect_segments, SegmentIntersection};
    let n = poly.len();
    let seg = Segment2::new(poly[i], poly[j]);
    for k in 0..n {
        if k == i || k == j || (k + 1) % n == i || (k + 1) % n == j {
            continue;
        }
        let edge = Segment2::new(poly[k], poly[(k + 1) % n]);
        match intersect_segments(&seg, &edge, tol) {
            SegmentIntersection::Empty => {}
            _ => return false,
        }
    }
    // Midpoint strictly inside keeps exterior diagonals of reflex corners
    // out.
    point_in_cycle_unchecked(seg.midpoint(), poly, tol.eps_geom) == PointLocation::Inside
}

fn chords_cross<R: Real>(
    poly: &[Point2<R>],
    a: (usize, usize),
    b: (usize, usize),
    tol: &Tolerance<R>,
) -> bool {
    use crate::geom::{intersect_segments, SegmentIntersection};
    if a.0 == b.0 || a.0 == b.1 || a.1 == b.0 || a.1 == b.1 {
        return false;
    }
    let sa = Segment2::new(poly[a.0], poly[a.1]);
    let sb = Segment2::new(poly[b.0], poly[b.1]);
    !matches!(intersect_segments(&sa, &sb, tol), SegmentIntersection::Empty)
}

fn pieces_from_chords<R: Real>(
    poly: &[Point2<R>],
    chords: &[(usize, usize)],
    tol: &Tolerance<R>,
) -> Result<ConvexDecomposition<R>> {
    let n = poly.len();
    let mut inputs: Vec<LabeledSegment<R>> = Vec::new();
    for k in 0..n {
        inputs.push(LabeledSegment {
            segment: Segment2::new(poly[k], poly[(k + 1) % n]),
            label: 0,
        });
    }
    for &(i, j) in chords {
        inputs.push(LabeledSegment { segment: Segment2::new(poly[i], poly[j]), label: 1 });
    }
    let sub = PlanarSubdivision::build_labeled(&snap_endpoints(&inputs, tol), tol)?;
    let mut pieces: Vec<Vec<Point2<R>>> = Vec::new();
    for f in 0..sub.faces.len() {
        let Some(c) = sub.faces[f].outer else { continue };
        let pts = sub.cycle_points(c);
        // Drop collinear vertices introduced by chord endpoints on straight
        // boundary runs.
        let m = pts.len();
        let mut clean: Vec<Point2<R>> = Vec::new();
        for i in 0..m {
            let a = pts[(i + m - 1) % m];
            let b = pts[i];
            let c2 = pts[(i + 1) % m];
            if (b - a).normalized().cross((c2 - b).normalized()).abs() > cast(1e-9) {
                clean.push(b);
            }
        }
        if clean.len() >= 3 {
            pieces.push(clean);
        }
    }
    // Canonical piece order: by lexicographically smallest vertex.
    pieces.sort_by(|a, b| {
        let ma = a.iter().fold(a[0], |m, p| if (p.x, p.y) < (m.x, m.y) { *p } else { m });
        let mb = b.iter().fold(b[0], |m, p| if (p.x, p.y) < (m.x, m.y) { *p } else { m });
        (ma.x, ma.y).partial_cmp(&(mb.x, mb.y)).unwrap()
    });

    // Dual edges via shared chords.
    let mut dual_edges: Vec<DualEdge<R>> = Vec::new();
    for &(i, j) in chords {
        let chord = Segment2::new(poly[i], poly[j]);
        let mid = chord.midpoint();
        let d = (chord.b - chord.a).normalized().perp() * (tol.eps_geom * cast(1000.0));
        let p1 = mid + d;
        let p2 = mid - d;
        let f1 = pieces
            .iter()
            .position(|p| point_in_cycle_unchecked(p1, p, tol.eps_geom) == PointLocation::Inside);
        let f2 = pieces
            .iter()
            .position(|p| point_in_cycle_unchecked(p2, p, tol.eps_geom) == PointLocation::Inside);
        if let (Some(f1), Some(f2)) = (f1, f2) {
            if f1 != f2 {
                dual_edges.push(DualEdge { pieces: (f1, f2), chord });
            }
        }
    }

    // Root: piece containing the bottom-left-most silhouette point.
    let root_pt = poly.iter().fold(poly[0], |m, p| if (p.y, p.x) < (m.y, m.x) { *p } else { m });
    let root = pieces
        .iter()
        .position(|p| p.iter().any(|q| q.distance(root_pt) <= tol.eps_geom))
        .unwrap_or(0);

    // Breadth-first spanning tree.
    let mut traversal = vec![root];
    let mut spanning_tree = Vec::new();
    let mut seen = vec![false; pieces.len()];
    seen[root] = true;
    let mut head = 0;
    while head < traversal.len() {
        let cur = traversal[head];
        head += 1;
        for (ei, de) in dual_edges.iter().enumerate() {
            let other = if de.pieces.0 == cur {
                de.pieces.1
            } else if de.pieces.1 == cur {
                de.pieces.0
            } else {
                continue;
            };
            if !seen[other] {
                seen[other] = true;
                traversal.push(other);
                spanning_tree.push(ei);
            }
        }
    }
    if traversal.len() != pieces.len() {
        return Err(Error::InvalidPolygon("partition dual is disconnected".into()));
    }
    Ok(ConvexDecomposition { pieces, dual_edges, spanning_tree, traversal })
}

/// One strip fold: the crease in the running strip frame and in silhouette
/// coordinates.
#[derive(Debug, Clone)]
pub struct StripFold<R> {
    /// A point on the crease and its direction, in strip coordinates
    /// (length along the strip, offset across it).
    pub line_in_strip: (Point2<R>, Vec2<R>),
    /// The crease segment across the strip, placed in the silhouette.
    pub segment: Segment2<R>,
    pub orientation: FoldOrientation,
}

#[derive(Debug, Clone)]
pub struct StripFoldPlan<R> {
    pub accordion: AccordionPlan<R>,
    pub folds: Vec<StripFold<R>>,
    /// Placed strip panels (quadrilaterals/triangles) in order.
    pub panels: Vec<Vec<Point2<R>>>,
    pub consumed_length: R,
}

/// Running strip state: an isometry from strip coordinates (ell, tau with
/// tau in [0, width]) to the silhouette plane, plus the previous crease.
struct Tape<R> {
    width: R,
    frame: PlanarIsometry<R>,
    /// Previous crease in current strip coordinates.
    prev: Line2<R>,
    consumed: R,
    folds: Vec<StripFold<R>>,
    panels: Vec<Vec<Point2<R>>>,
    eps: R,
}

impl<R: Real> Tape<R> {
    fn new(width: R, origin: Point2<R>, dir: Vec2<R>, eps: R) -> Self {
        let d = dir.normalized();
        let p = d.perp();
        let frame = PlanarIsometry {
            linear: [[d.x, p.x], [d.y, p.y]],
            translation: origin.to_vec(),
        };
        // Leading edge of the strip: the line ell = 0.
        let prev = Line2 { normal: Vec2::new(R::one(), R::zero()), offset: R::zero() };
        Tape { width, frame, prev, consumed: R::zero(), folds: Vec::new(), panels: Vec::new(), eps }
    }

    /// Advance to a world crease line; emit the panel, and fold across it
    /// unless `fold` is false (the final strip end).
    fn advance(&mut self, world: &Line2<R>, fold: bool) -> Result<()> {
        let inv = self.frame.inverse();
        let a = inv.apply(point_on(world));
        let b = inv.apply(point_on(world) + world.direction());
        let mut crease = Line2::through(a, b - a);
        // Orient the normal towards unconsumed strip (growing ell).
        if crease.normal.x < R::zero() {
            crease = Line2 { normal: -crease.normal, offset: -crease.offset };
        }
        // Crossings with the strip edges tau = 0 and tau = w.
        let Some(c0) = crossing_at(&crease, R::zero()) else {
            return Err(Error::DegenerateBand("crease parallel to the strip axis".into()));
        };
        let Some(cw) = crossing_at(&crease, self.width) else {
            return Err(Error::DegenerateBand("crease parallel to the strip axis".into()));
        };
        let Some(p0) = crossing_at(&self.prev, R::zero()) else {
            return Err(Error::DegenerateBand("lost the previous crease".into()));
        };
        let Some(pw) = crossing_at(&self.prev, self.width) else {
            return Err(Error::DegenerateBand("lost the previous crease".into()));
        };
        if c0 < p0 - self.eps && cw < pw - self.eps {
            return Err(Error::DegenerateBand("crease behind the strip frontier".into()));
        }
        // Panel polygon in strip coordinates: the strip between the two
        // creases (3 to 5 corners once crossing orders are handled).
        let lo = p0.min(pw).min(c0).min(cw) - R::one();
        let hi = p0.max(pw).max(c0).max(cw) + R::one();
        let mut panel = vec![
            Point2::new(lo, R::zero()),
            Point2::new(hi, R::zero()),
            Point2::new(hi, self.width),
            Point2::new(lo, self.width),
        ];
        panel = clip_halfplane(&panel, &self.prev, true);
        panel = clip_halfplane(&panel, &crease, false);
        if panel.len() >= 3 {
            let world_panel: Vec<Point2<R>> =
                panel.iter().map(|p| self.frame.apply(*p)).collect();
            self.panels.push(world_panel);
        }
        self.consumed = self.consumed.max(c0).max(cw);
        let seg = Segment2::new(
            self.frame.apply(Point2::new(c0, R::zero())),
            self.frame.apply(Point2::new(cw, self.width)),
        );
        if fold {
            self.folds.push(StripFold {
                line_in_strip: (a, (b - a).normalized()),
                segment: seg,
                orientation: FoldOrientation::Unassigned,
            });
            let refl = PlanarIsometry::reflection(&crease);
            self.frame = self.frame.compose(&refl);
        }
        // The crease line is fixed by its own reflection; it stays the
        // frontier in the new strip coordinates too.
        self.prev = crease;
        Ok(())
    }

    fn dir_world(&self) -> Vec2<R> {
        self.frame.apply_vec(Vec2::new(R::one(), R::zero()))
    }

    /// World position of strip coordinate (ell, tau).
    fn at(&self, l: R, t: R) -> Point2<R> {
        self.frame.apply(Point2::new(l, t))
    }
}

fn point_on<R: Real>(l: &Line2<R>) -> Point2<R> {
    Point2::new(l.normal.x * l.offset, l.normal.y * l.offset)
}

/// Crossing of a strip-coordinate line with the horizontal tau = t, as the
/// ell coordinate.
fn crossing_at<R: Real>(line: &Line2<R>, t: R) -> Option<R> {
    // normal.x * ell + normal.y * t = offset
    if line.normal.x.abs() < cast(1e-12) {
        return None;
    }
    Some((line.offset - line.normal.y * t) / line.normal.x)
}

fn clip_halfplane<R: Real>(poly: &[Point2<R>], line: &Line2<R>, keep_positive: bool) -> Vec<Point2<R>> {
    let side = |p: Point2<R>| {
        let d = line.signed_distance(p);
        if keep_positive {
            d
        } else {
            -d
        }
    };
    let n = poly.len();
    let mut out = Vec::new();
    for i in 0..n {
        let a = poly[i];
        let b = poly[(i + 1) % n];
        let (da, db) = (side(a), side(b));
        if da >= R::zero() {
            out.push(a);
        }
        if (da > R::zero() && db < R::zero()) || (da < R::zero() && db > R::zero()) {
            let t = da / (da - db);
            out.push(a + (b - a) * t);
        }
    }
    out
}

/// Convex polygon clipped to a halfplane `sign * signed_distance >= 0`.
fn convex_clip<R: Real>(poly: &[Point2<R>], line: &Line2<R>, keep_positive: bool) -> Vec<Point2<R>> {
    clip_halfplane(poly, line, keep_positive)
}

/// Band-sweep cover of the decomposition by a strip of the given width.
pub fn plan_strip_cover<R: Real>(
    decomp: &ConvexDecomposition<R>,
    strip_width: R,
) -> Result<StripFoldPlan<R>> {
    if !(strip_width > R::zero()) {
        return Err(Error::InvalidInput("strip width must be positive".into()));
    }
    let all_pts: Vec<Point2<R>> = decomp.pieces.iter().flatten().copied().collect();
    let diam = crate::geom::Rect::bounding(all_pts.iter().copied()).unwrap().diagonal();
    let tol = Tolerance::from_diameter(diam);
    let eps = tol.eps_geom * cast(64.0);
    let planner = PiecePlanner { decomp, w: strip_width, eps };

    // Entry pose for the root piece: the start of its first band.
    let root = decomp.traversal[0];
    let geom = planner.geometry(root)?;
    let span0 = geom.spans.first().copied().ok_or_else(|| {
        Error::DegenerateBand("piece has no bands".into())
    })?;
    let sweep0 = planner.sweep_region(root, &geom, span0)?;
    let origin = geom.frame_point(sweep0.s_lo, span0.0);
    let mut tape = Tape::new(strip_width, origin, geom.u, eps);
    // Leading strip edge placed flush at the run start.
    tape.prev = {
        let inv = tape.frame.inverse();
        let a = inv.apply(point_on(&sweep0.start_line));
        let b = inv.apply(point_on(&sweep0.start_line) + sweep0.start_line.direction());
        Line2::through(a, b - a)
    };
    cover_subtree(&planner, &mut tape, root, None)?;

    // Self-check: the planner's turning geometry does not support every
    // silhouette; reject plans that fail their own covering rather than
    // returning a silently bad one.
    self_check(&planner, &tape, &tol)?;
    // Derived square: smallest integer side, rounded up to a whole multiple
    // of the strip width, whose strip is long enough.
    let consumed = tape.consumed;
    let side_int = (consumed * strip_width).sqrt().ceil().max(strip_width);
    let side = (side_int / strip_width).ceil() * strip_width;
    let accordion = accordion_fold(side, strip_width)?;
    Ok(StripFoldPlan {
        accordion,
        folds: tape.folds,
        panels: tape.panels,
        consumed_length: consumed,
    })
}

/// Quick panel-inside and coverage audit of a finished tape against the
/// piece union.
fn self_check<R: Real>(
    planner: &PiecePlanner<'_, R>,
    tape: &Tape<R>,
    tol: &Tolerance<R>,
) -> Result<()> {
    let pieces = &planner.decomp.pieces;
    let eps = planner.eps;
    let inside_union = |p: Point2<R>| {
        pieces
            .iter()
            .any(|poly| point_in_cycle_unchecked(p, poly, eps) != PointLocation::Outside)
    };
    for panel in &tape.panels {
        for v in panel {
            if !inside_union(*v) {
                return Err(Error::DegenerateBand(format!(
                    "strip turning not supported for this silhouette: panel corner ({}, {}) \
                     falls outside",
                    v.x, v.y
                )));
            }
        }
    }
    // Sample-based coverage audit per piece.
    for poly in pieces {
        let bb = crate::geom::Rect::bounding(poly.iter().copied()).unwrap();
        let n = 12;
        for i in 0..n {
            for j in 0..n {
                let fx = (R::from_usize(i).unwrap() + cast(0.5)) / R::from_usize(n).unwrap();
                let fy = (R::from_usize(j).unwrap() + cast(0.5)) / R::from_usize(n).unwrap();
                let p = Point2::new(
                    bb.min.x + bb.width() * fx,
                    bb.min.y + bb.height() * fy,
                );
                if point_in_cycle_unchecked(p, poly, tol.eps_verify) != PointLocation::Inside {
                    continue;
                }
                let covered = tape.panels.iter().any(|panel| {
                    point_in_cycle_unchecked(p, panel, tol.eps_verify) != PointLocation::Outside
                });
                if !covered {
                    return Err(Error::DegenerateBand(format!(
                        "strip turning not supported for this silhouette: ({}, {}) uncovered",
                        p.x, p.y
                    )));
                }
            }
        }
    }
    Ok(())
}

/// Per-piece band frame: unit band direction `u` (along the longest edge)
/// and stacking direction `m`.
struct PieceGeometry<R> {
    u: Vec2<R>,
    m: Vec2<R>,
    /// Tape spans [a, a+w] in stacking coordinates, in sweep order.
    spans: Vec<(R, R)>,
}

impl<R: Real> PieceGeometry<R> {
    fn frame_point(&self, s: R, m: R) -> Point2<R> {
        Point2::new(self.u.x * s + self.m.x * m, self.u.y * s + self.m.y * m)
    }
}

struct SweepRegion<R> {
    s_lo: R,
    s_hi: R,
    /// Flush or perpendicular crease lines bounding the run.
    start_line: Line2<R>,
    end_line: Line2<R>,
}

struct PiecePlanner<'a, R> {
    decomp: &'a ConvexDecomposition<R>,
    w: R,
    eps: R,
}

impl<'a, R: Real> PiecePlanner<'a, R> {
    fn geometry(&self, piece: usize) -> Result<PieceGeometry<R>> {
        let poly = &self.decomp.pieces[piece];
        let n = poly.len();
        let mut best = 0;
        for i in 1..n {
            let li = poly[i].distance(poly[(i + 1) % n]);
            let lb = poly[best].distance(poly[(best + 1) % n]);
            if li > lb + self.eps {
                best = i;
            }
        }
        let u = (poly[(best + 1) % n] - poly[best]).normalized();
        let mut m = u.perp();
        // Point the stacking direction into the piece.
        let mid = poly[best].midpoint(poly[(best + 1) % n]);
        let probe = mid + m * (self.eps * cast(4.0));
        if point_in_cycle_unchecked(probe, poly, self.eps) == PointLocation::Outside {
            m = -m;
        }
        let coords: Vec<R> = poly.iter().map(|p| m.dot(p.to_vec())).collect();
        let m_lo = coords.iter().copied().fold(R::infinity(), R::min);
        let m_hi = coords.iter().copied().fold(R::neg_infinity(), R::max);
        let height = m_hi - m_lo;
        if height < self.w - self.eps {
            return Err(Error::DegenerateBand(format!(
                "piece {piece} is thinner ({height}) than the strip width"
            )));
        }
        // Vertex levels partition the stacking extent; tape spans must not
        // straddle one strictly.
        let mut levels: Vec<R> = coords.clone();
        levels.push(m_lo);
        levels.push(m_hi);
        levels.sort_by(|a, b| a.partial_cmp(b).unwrap());
        levels.dedup_by(|a, b| (*a - *b).abs() <= self.eps);
        let mut spans = Vec::new();
        for gap in levels.windows(2) {
            let (lo, hi) = (gap[0], gap[1]);
            if hi - lo <= self.eps {
                continue;
            }
            if hi - lo < self.w - self.eps {
                // Narrow gap: one span pinned inside the piece covering it.
                let a = if lo + self.w <= m_hi + self.eps {
                    lo
                } else if hi - self.w >= m_lo - self.eps {
                    hi - self.w
                } else {
                    return Err(Error::DegenerateBand(format!(
                        "no feasible tape span for level gap {lo}..{hi} of piece {piece}"
                    )));
                };
                // The span must not straddle another level strictly.
                if levels
                    .iter()
                    .any(|&v| v > a + self.eps && v < a + self.w - self.eps && (v < lo - self.eps || v > hi + self.eps))
                {
                    return Err(Error::DegenerateBand(format!(
                        "strip width straddles a feature of piece {piece}"
                    )));
                }
                spans.push((a, a + self.w));
            } else {
                // Uniform spans stepping through the gap, last one clamped.
                let mut a = lo;
                loop {
                    if a + self.w >= hi - self.eps {
                        spans.push((hi - self.w, hi));
                        break;
                    }
                    spans.push((a, a + self.w));
                    a = a + self.w;
                }
            }
        }
        // Clamp spans into the piece extent.
        for s in &mut spans {
            if s.0 < m_lo {
                *s = (m_lo, m_lo + self.w);
            }
            if s.1 > m_hi {
                *s = (m_hi - self.w, m_hi);
            }
        }
        spans.dedup_by(|a, b| (a.0 - b.0).abs() <= self.eps);
        let _ = (m_lo, m_hi);
        Ok(PieceGeometry { u, m, spans })
    }

    /// The run extent of one tape span plus flush/perpendicular crease
    /// lines at both ends.
    fn sweep_region(
        &self,
        piece: usize,
        geom: &PieceGeometry<R>,
        span: (R, R),
    ) -> Result<SweepRegion<R>> {
        let poly = &self.decomp.pieces[piece];
        let lo_line = Line2 { normal: geom.m, offset: span.0 };
        let hi_line = Line2 { normal: geom.m, offset: span.1 };
        let mut region = convex_clip(poly, &lo_line, true);
        region = convex_clip(&region, &hi_line, false);
        if region.len() < 3 {
            return Err(Error::DegenerateBand(format!("empty band on piece {piece}")));
        }
        let s_of = |p: Point2<R>| geom.u.dot(p.to_vec());
        let p_lo = *region
            .iter()
            .min_by(|a, b| s_of(**a).partial_cmp(&s_of(**b)).unwrap())
            .unwrap();
        let p_hi = *region
            .iter()
            .max_by(|a, b| s_of(**a).partial_cmp(&s_of(**b)).unwrap())
            .unwrap();
        let (s_lo, s_hi) = (s_of(p_lo), s_of(p_hi));
        let _ = (p_lo, p_hi);
        let start_line = self.end_crease(piece, geom, span, s_lo, -R::one())?;
        let end_line = self.end_crease(piece, geom, span, s_hi, R::one())?;
        Ok(SweepRegion { s_lo, s_hi, start_line, end_line })
    }

    /// Crease line closing a run: perpendicular at the region extreme when
    /// it fits inside the piece, else any boundary-edge line that spans the
    /// tape width and leaves none of the lane region beyond it.
    fn end_crease(
        &self,
        piece: usize,
        geom: &PieceGeometry<R>,
        span: (R, R),
        s_end: R,
        outward: R,
    ) -> Result<Line2<R>> {
        let poly = &self.decomp.pieces[piece];
        let n = poly.len();
        let lo_edge = Line2 { normal: geom.m, offset: span.0 };
        let hi_edge = Line2 { normal: geom.m, offset: span.1 };
        let mut region = convex_clip(poly, &lo_edge, true);
        region = convex_clip(&region, &hi_edge, false);
        if region.len() < 3 {
            return Err(Error::DegenerateBand(format!("empty lane region on piece {piece}")));
        }
        let area = |poly: &[Point2<R>]| {
            if poly.len() < 3 {
                R::zero()
            } else {
                signed_area(poly).abs()
            }
        };
        let region_area = area(&region);
        let out_dir = geom.u * outward;
        let nothing_beyond = |line: &Line2<R>| {
            // Nothing of the lane region may remain on the outward side.
            let sgn = if line.normal.dot(out_dir) >= R::zero() { R::one() } else { -R::one() };
            let oriented = Line2 { normal: line.normal * sgn, offset: line.offset * sgn };
            let beyond = convex_clip(&region, &oriented, true);
            area(&beyond) <= region_area * cast(1e-9) + self.eps * self.eps
        };
        let inside = |p: Point2<R>| {
            point_in_cycle_unchecked(p, poly, self.eps) != PointLocation::Outside
        };
        // Perpendicular at the extreme.
        let perp = Line2 { normal: geom.u, offset: s_end };
        let pa = geom.frame_point(s_end, span.0);
        let pb = geom.frame_point(s_end, span.1);
        if inside(pa) && inside(pb) && nothing_beyond(&perp) {
            return Ok(perp);
        }
        // Boundary-edge lines spanning the tape width.
        for i in 0..n {
            let a = poly[i];
            let b = poly[(i + 1) % n];
            let line = Line2::through(a, b - a);
            let (Some(q0), Some(q1)) = (line.intersect(&lo_edge), line.intersect(&hi_edge))
            else {
                continue;
            };
            let on_seg = |q: Point2<R>| {
                let d = b - a;
                let t = (q - a).dot(d) / d.norm_squared();
                t >= -cast::<R>(1e-6) && t <= R::one() + cast::<R>(1e-6)
            };
            if on_seg(q0) && on_seg(q1) && nothing_beyond(&line) {
                return Ok(line);
            }
        }
        Err(Error::DegenerateBand(format!(
            "no feasible end crease on piece {piece} at s = {s_end}"
        )))
    }

    /// Crease stopping a perpendicular leg: the minimal perpendicular stop
    /// when it fits, else whatever closes the lane at the boundary.
    fn leg_stop(
        &self,
        piece: usize,
        leg_dir: Vec2<R>,
        leg_span_axis: Vec2<R>,
        leg_span: (R, R),
        minimal_s: R,
    ) -> Result<Line2<R>> {
        let poly = &self.decomp.pieces[piece];
        let geom = PieceGeometry {
            u: leg_dir,
            m: leg_span_axis,
            spans: vec![leg_span],
        };
        let stop = Line2 { normal: leg_dir, offset: minimal_s };
        let pa = geom.frame_point(minimal_s, leg_span.0);
        let pb = geom.frame_point(minimal_s, leg_span.1);
        let inside = |p: Point2<R>| {
            point_in_cycle_unchecked(p, poly, self.eps) != PointLocation::Outside
        };
        if inside(pa) && inside(pb) {
            return Ok(stop);
        }
        // Fall back to closing the lane at the region extreme.
        let lo_edge = Line2 { normal: leg_span_axis, offset: leg_span.0 };
        let hi_edge = Line2 { normal: leg_span_axis, offset: leg_span.1 };
        let mut region = convex_clip(poly, &lo_edge, true);
        region = convex_clip(&region, &hi_edge, false);
        if region.len() < 3 {
            return Err(Error::DegenerateBand("leg lane misses the piece".into()));
        }
        let p_hi = *region
            .iter()
            .max_by(|a, b| leg_dir.dot(a.to_vec()).partial_cmp(&leg_dir.dot(b.to_vec())).unwrap())
            .unwrap();
        self.end_crease(piece, &geom, leg_span, leg_dir.dot(p_hi.to_vec()), R::one())
    }
}

/// Cover a piece's bands, descending into spanning-tree children after the
/// bands are done, and return with the tape somewhere in this piece.
fn cover_subtree<R: Real>(
    planner: &PiecePlanner<'_, R>,
    tape: &mut Tape<R>,
    piece: usize,
    parent: Option<usize>,
) -> Result<()> {
    let geom = planner.geometry(piece)?;
    // Current stacking coordinate of the tape's tau = 0 edge.
    let m_of = |tape: &Tape<R>| geom.m.dot(tape.at(R::zero(), R::zero()).to_vec());
    // Sweep every span in order, u-turning between them.
    for (k, &span) in geom.spans.iter().enumerate() {
        let sweep = planner.sweep_region(piece, &geom, span)?;
        // Align the tape onto this span when needed (first span is aligned
        // by the caller/entry).
        let cur_m = m_of(tape);
        let aligned = (cur_m - span.0).abs() <= planner.eps * cast(100.0)
            || (cur_m - span.1).abs() <= planner.eps * cast(100.0);
        if k > 0 && !aligned {
            return Err(Error::DegenerateBand("tape lost band alignment".into()));
        }
        let forward = tape.dir_world().dot(geom.u) > R::zero();
        let end_line = if forward { sweep.end_line } else { sweep.start_line };
        // A piece can be entered mid-band; sweep the far side first, come
        // back on the same band, then continue the snake.
        if k == 0 {
            let c0 = crossing_at(&tape.prev, R::zero()).unwrap_or(R::zero());
            let cw = crossing_at(&tape.prev, planner.w).unwrap_or(R::zero());
            let f0 = geom.u.dot(tape.at(c0, R::zero()).to_vec());
            let fw = geom.u.dot(tape.at(cw, planner.w).to_vec());
            let s_now = if forward { f0.min(fw) } else { f0.max(fw) };
            let near = if forward { sweep.s_lo } else { sweep.s_hi };
            if (s_now - near).abs() > planner.w * cast(0.75) {
                tape.advance(&end_line, true)?;
                turn_to_parallel_span(planner, tape, piece, &geom, span, span)?;
                let end2 = if forward { sweep.start_line } else { sweep.end_line };
                tape.advance(&end2, true)?;
                if k + 1 < geom.spans.len() {
                    let next = geom.spans[k + 1];
                    turn_to_parallel_span(planner, tape, piece, &geom, span, next)?;
                }
                continue;
            }
        }
        // Run to the end crease of this span.
        tape.advance(&end_line, true)?;
        if k + 1 < geom.spans.len() {
            let next = geom.spans[k + 1];
            turn_to_parallel_span(planner, tape, piece, &geom, span, next)?;
        }
    }
    // Children in traversal order.
    let children: Vec<(usize, Segment2<R>)> = planner
        .decomp
        .spanning_tree
        .iter()
        .map(|&ei| &planner.decomp.dual_edges[ei])
        .filter(|de| de.pieces.0 == piece || de.pieces.1 == piece)
        .map(|de| {
            let other = if de.pieces.0 == piece { de.pieces.1 } else { de.pieces.0 };
            (other, de.chord)
        })
        .filter(|(other, _)| Some(*other) != parent)
        .collect();
    for (child, chord) in children {
        enter_child(planner, tape, piece, child, &chord)?;
        cover_subtree(planner, tape, child, Some(piece))?;
        // Come back through the chord for the next sibling.
        exit_child(planner, tape, child, piece, &chord)?;
    }
    Ok(())
}

/// After finishing a run, bounce off its end crease, run a perpendicular
/// leg out to the far edge of the next band (covering the turn corner),
/// fold back, and re-align onto the next band heading the other way.
fn turn_to_parallel_span<R: Real>(
    planner: &PiecePlanner<'_, R>,
    tape: &mut Tape<R>,
    piece: usize,
    geom: &PieceGeometry<R>,
    current: (R, R),
    next: (R, R),
) -> Result<()> {
    // Straighten onto the current band if the end fold was a slant.
    let u_now = tape.dir_world();
    let back = if u_now.dot(geom.u) > R::zero() { geom.u } else { -geom.u };
    let host = Some(planner.decomp.pieces[piece].as_slice());
    realign(planner, tape, geom, back, current, host)?;
    // Perpendicular leg towards the next band.
    let leg_dir = if next.0 + next.1 > current.0 + current.1 { geom.m } else { -geom.m };
    fold_turn(tape, leg_dir, host, planner.eps)?;
    // Leg extent along the run axis, from the current tape edges.
    let t0 = tape.at(R::zero(), R::zero());
    let tw = tape.at(R::zero(), planner.w);
    let s0 = geom.u.dot(t0.to_vec());
    let sw = geom.u.dot(tw.to_vec());
    let leg_span = (s0.min(sw), s0.max(sw));
    // Run the leg at least to the far edge of the next band, folding back
    // at the minimal stop or at the boundary.
    let m_t = if leg_dir.dot(geom.m) > R::zero() {
        next.1.max(current.1)
    } else {
        next.0.min(current.0)
    };
    let end = planner.leg_stop(piece, leg_dir, geom.u, leg_span, leg_dir.dot(geom.m).signum() * m_t)?;
    tape.advance(&end, true)?;
    // Back down the leg; one positioned crease lands on the next band,
    // running opposite to the band just covered.
    realign(planner, tape, geom, back, next, host)
}

/// One or two creases that leave the tape running along `target` with its
/// tau-extent on `span`. Candidate creases whose segment stays inside the
/// host piece win.
fn realign<R: Real>(
    planner: &PiecePlanner<'_, R>,
    tape: &mut Tape<R>,
    geom: &PieceGeometry<R>,
    target: Vec2<R>,
    span: (R, R),
    host: Option<&[Point2<R>]>,
) -> Result<()> {
    let u_now = tape.dir_world().normalized();
    let cos = u_now.dot(target);
    if cos > R::one() - cast(1e-9) {
        // Already heading the right way; check the span.
        let m0 = geom.m.dot(tape.at(R::zero(), R::zero()).to_vec());
        let m1 = geom.m.dot(tape.at(R::zero(), planner.w).to_vec());
        let lo = m0.min(m1);
        if (lo - span.0).abs() <= planner.eps * cast(100.0) {
            return Ok(());
        }
        // Same direction, different lane: two 45-degree creases through an
        // intermediate perpendicular leg.
        let inter = if span.0 > lo { geom.m } else { -geom.m };
        fold_turn(tape, inter, host, planner.eps)?;
        return realign(planner, tape, geom, target, span, host);
    }
    if cos < -(R::one() - cast(1e-9)) {
        // U-turn: two 45-degree creases through the perpendicular.
        let m0 = geom.m.dot(tape.at(R::zero(), R::zero()).to_vec());
        let inter = if span.0 + span.1 > m0 + m0 { geom.m } else { -geom.m };
        fold_turn(tape, inter, host, planner.eps)?;
        return realign(planner, tape, geom, target, span, host);
    }
    // Generic turn: one crease along the direction bisector, positioned so
    // the strip lands on the requested span. The reflection axis mapping
    // u to v is parallel to u + v; several pairings can land correctly, so
    // prefer one whose crease segment stays inside the host piece.
    let bis = (u_now + target).normalized();
    let mut fallback: Option<Line2<R>> = None;
    for tau_edge in [R::zero(), planner.w] {
        let edge_pt = tape.at(R::zero(), tau_edge);
        let edge_line = Line2::through(edge_pt, u_now);
        for tau_target_off in [span.0, span.1] {
            let target_line = Line2 { normal: geom.m, offset: tau_target_off };
            let Some(x) = edge_line.intersect(&target_line) else { continue };
            let crease = Line2::through(x, bis);
            let refl = PlanarIsometry::reflection(&crease);
            // Validate: both tau edges land on the two span lines.
            let p0 = tape.at(R::zero(), R::zero());
            let p0b = tape.at(R::one(), R::zero());
            let pw = tape.at(R::zero(), planner.w);
            let m_of = |p: Point2<R>| geom.m.dot(refl.apply(p).to_vec());
            let (m0, m0b, mw) = (m_of(p0), m_of(p0b), m_of(pw));
            let lands = |v: R, t: R| (v - t).abs() <= planner.eps * cast(100.0);
            let ok = (lands(m0, span.0) && lands(m0b, span.0) && lands(mw, span.1))
                || (lands(m0, span.1) && lands(m0b, span.1) && lands(mw, span.0));
            if !ok {
                continue;
            }
            if fallback.is_none() {
                fallback = Some(crease);
            }
            if let Some(poly) = host {
                // Crease segment across the strip must stay in the piece.
                let inv = tape.frame.inverse();
                let a = inv.apply(point_on(&crease));
                let b = inv.apply(point_on(&crease) + crease.direction());
                let tape_line = Line2::through(a, b - a);
                let (Some(c0), Some(cw)) =
                    (crossing_at(&tape_line, R::zero()), crossing_at(&tape_line, planner.w))
                else {
                    continue;
                };
                let e0 = tape.at(c0, R::zero());
                let ew = tape.at(cw, planner.w);
                let inside = |p: Point2<R>| {
                    point_in_cycle_unchecked(p, poly, planner.eps * cast(4.0))
                        != PointLocation::Outside
                };
                if !(inside(e0) && inside(ew)) {
                    continue;
                }
            }
            tape.advance(&crease, true)?;
            return realign(planner, tape, geom, target, span, host);
        }
    }
    match fallback {
        Some(crease) => {
            tape.advance(&crease, true)?;
            realign(planner, tape, geom, target, span, host)
        }
        None => Err(Error::DegenerateBand("cannot position turning crease".into())),
    }
}

/// Quarter turn via one 45-degree crease at the strip's current frontier,
/// anchored at whichever frontier corner keeps the crease inside the host.
fn fold_turn<R: Real>(
    tape: &mut Tape<R>,
    new_dir: Vec2<R>,
    host: Option<&[Point2<R>]>,
    eps: R,
) -> Result<()> {
    let u = tape.dir_world().normalized();
    let v = new_dir.normalized();
    let bis = (u + v).normalized();
    let c0 = crossing_at(&tape.prev, R::zero()).unwrap_or(R::zero());
    let cw = crossing_at(&tape.prev, tape.width).unwrap_or(R::zero());
    let f0 = tape.at(c0, R::zero());
    let fw = tape.at(cw, tape.width);
    // The corner farther from the turn direction anchors the diagonal.
    let corners = if (fw - f0).dot(v) > R::zero() { [f0, fw] } else { [fw, f0] };
    for (k, corner) in corners.into_iter().enumerate() {
        let crease = Line2::through(corner, bis);
        if k == 1 {
            return tape.advance(&crease, true);
        }
        if let Some(poly) = host {
            let inv = tape.frame.inverse();
            let a = inv.apply(point_on(&crease));
            let b = inv.apply(point_on(&crease) + crease.direction());
            let tape_line = Line2::through(a, b - a);
            let (Some(x0), Some(xw)) =
                (crossing_at(&tape_line, R::zero()), crossing_at(&tape_line, tape.width))
            else {
                continue;
            };
            let e0 = tape.at(x0, R::zero());
            let ew = tape.at(xw, tape.width);
            let inside = |p: Point2<R>| {
                point_in_cycle_unchecked(p, poly, eps * cast(4.0)) != PointLocation::Outside
            };
            if !(inside(e0) && inside(ew)) {
                continue;
            }
        }
        return tape.advance(&crease, true);
    }
    Err(Error::DegenerateBand("no feasible quarter turn".into()))
}

/// Cross a chord into a child piece and align with its first band.
fn enter_child<R: Real>(
    planner: &PiecePlanner<'_, R>,
    tape: &mut Tape<R>,
    parent: usize,
    child: usize,
    chord: &Segment2<R>,
) -> Result<()> {
    let geom_c = planner.geometry(child)?;
    let span0 = geom_c.spans[0];
    // Crossing lane: perpendicular to the chord through its midpoint.
    let chord_dir = chord.direction();
    let cross_dir = chord_dir.perp();
    // Point the crossing direction from parent into child.
    let mid = chord.midpoint();
    let probe = mid + cross_dir * (planner.eps * cast(16.0));
    let into_child = point_in_cycle_unchecked(probe, &planner.decomp.pieces[child], planner.eps)
        != PointLocation::Outside;
    let dir = if into_child { cross_dir } else { -cross_dir };
    // Geometry of the parent to route within it.
    let geom_p = planner.geometry(parent)?;
    // The crossing lane's tau extent along the chord, centered.
    let chord_len = chord.length();
    if chord_len < planner.w - planner.eps {
        return Err(Error::DegenerateBand(format!(
            "chord between pieces {parent} and {child} is narrower than the strip"
        )));
    }
    // Align the tape with the crossing lane inside the parent.
    let lane_m = chord_dir;
    let lane_lo = lane_m.dot(mid.to_vec()) - planner.w / cast(2.0);
    let lane_geom = PieceGeometry {
        u: dir,
        m: lane_m,
        spans: vec![(lane_lo, lane_lo + planner.w)],
    };
    realign(planner, tape, &lane_geom, dir, (lane_lo, lane_lo + planner.w), Some(planner.decomp.pieces[parent].as_slice()))?;
    // Run through the chord into the child up to the child's far boundary
    // along the crossing direction, ending on a feasible crease there.
    let sweep = crossing_sweep(planner, child, dir, lane_m, (lane_lo, lane_lo + planner.w))?;
    tape.advance(&sweep, true)?;
    // Now turn onto the child's first span.
    realign(planner, tape, &geom_c, geom_c.u, span0, Some(planner.decomp.pieces[child].as_slice()))?;
    let _ = geom_p;
    Ok(())
}

/// Leave a child back through the chord into the parent.
fn exit_child<R: Real>(
    planner: &PiecePlanner<'_, R>,
    tape: &mut Tape<R>,
    _child: usize,
    parent: usize,
    chord: &Segment2<R>,
) -> Result<()> {
    let chord_dir = chord.direction();
    let cross_dir = chord_dir.perp();
    let mid = chord.midpoint();
    let probe = mid + cross_dir * (planner.eps * cast(16.0));
    let into_parent = point_in_cycle_unchecked(probe, &planner.decomp.pieces[parent], planner.eps)
        != PointLocation::Outside;
    let dir = if into_parent { cross_dir } else { -cross_dir };
    let lane_m = chord_dir;
    let lane_lo = lane_m.dot(mid.to_vec()) - planner.w / cast(2.0);
    let lane_geom = PieceGeometry {
        u: dir,
        m: lane_m,
        spans: vec![(lane_lo, lane_lo + planner.w)],
    };
    realign(planner, tape, &lane_geom, dir, (lane_lo, lane_lo + planner.w), Some(planner.decomp.pieces[_child].as_slice()))?;
    let sweep = crossing_sweep(planner, parent, dir, lane_m, (lane_lo, lane_lo + planner.w))?;
    tape.advance(&sweep, true)?;
    Ok(())
}

/// End crease for a crossing run: the far boundary of the destination piece
/// along the crossing lane.
fn crossing_sweep<R: Real>(
    planner: &PiecePlanner<'_, R>,
    dest: usize,
    dir: Vec2<R>,
    lane_m: Vec2<R>,
    span: (R, R),
) -> Result<Line2<R>> {
    let geom = PieceGeometry {
        u: dir,
        m: lane_m,
        spans: vec![span],
    };
    let poly = &planner.decomp.pieces[dest];
    let lo_line = Line2 { normal: lane_m, offset: span.0 };
    let hi_line = Line2 { normal: lane_m, offset: span.1 };
    let mut region = convex_clip(poly, &lo_line, true);
    region = convex_clip(&region, &hi_line, false);
    if region.len() < 3 {
        return Err(Error::DegenerateBand("crossing lane misses the piece".into()));
    }
    let p_hi = *region
        .iter()
        .max_by(|a, b| dir.dot(a.to_vec()).partial_cmp(&dir.dot(b.to_vec())).unwrap())
        .unwrap();
    planner.end_crease_public(dest, &geom, span, dir.dot(p_hi.to_vec()), R::one())
}

impl<'a, R: Real> PiecePlanner<'a, R> {
    fn end_crease_public(
        &self,
        piece: usize,
        geom: &PieceGeometry<R>,
        span: (R, R),
        s_end: R,
        outward: R,
    ) -> Result<Line2<R>> {
        self.end_crease(piece, geom, span, s_end, outward)
    }
}

/// Coverage report of a plan against its silhouette.
#[derive(Debug, Clone)]
pub struct CoverageReport<R> {
    pub covered: bool,
    pub uncovered_area: R,
    /// A point of the silhouette no panel covers, when not covered.
    pub gap_witness: Option<Point2<R>>,
    /// Silhouette area over the square paper area.
    pub efficiency: R,
    pub panels_inside: bool,
    pub first_outside_panel: Option<usize>,
}

/// Check that the panel union covers the silhouette and that every panel
/// stays inside it.
pub fn verify_cover<R: Real>(
    plan: &StripFoldPlan<R>,
    silhouette: &[Point2<R>],
    tol: &Tolerance<R>,
) -> Result<CoverageReport<R>> {
    let mut sil = silhouette.to_vec();
    if signed_area(&sil) < R::zero() {
        sil.reverse();
    }
    let sil_area = signed_area(&sil);
    let eps = tol.eps_geom * cast(64.0);

    // Panels inside the silhouette: vertices inside, edges not crossing the
    // boundary properly.
    let mut panels_inside = true;
    let mut first_outside_panel = None;
    'panels: for (pi, panel) in plan.panels.iter().enumerate() {
        for v in panel {
            if point_in_cycle_unchecked(*v, &sil, eps) == PointLocation::Outside {
                panels_inside = false;
                first_outside_panel = Some(pi);
                break 'panels;
            }
        }
    }

    // Union coverage via the arrangement of silhouette + panel edges.
    let mut inputs: Vec<LabeledSegment<R>> = Vec::new();
    for i in 0..sil.len() {
        inputs.push(LabeledSegment {
            segment: Segment2::new(sil[i], sil[(i + 1) % sil.len()]),
            label: 0,
        });
    }
    for panel in &plan.panels {
        let n = panel.len();
        for i in 0..n {
            let s = Segment2::new(panel[i], panel[(i + 1) % n]);
            if s.length() > tol.eps_geom {
                inputs.push(LabeledSegment { segment: s, label: 1 });
            }
        }
    }
    let sub = PlanarSubdivision::build_labeled(&snap_endpoints(&inputs, tol), tol)?;
    let mut uncovered = R::zero();
    let mut witness = None;
    for f in 0..sub.faces.len() {
        if sub.faces[f].outer.is_none() {
            continue;
        }
        let probe = sub.face_probe(f);
        if point_in_cycle_unchecked(probe, &sil, tol.eps_geom) != PointLocation::Inside {
            continue;
        }
        let covered = plan.panels.iter().any(|panel| {
            point_in_cycle_unchecked(probe, panel, tol.eps_geom) != PointLocation::Outside
        });
        if !covered {
            uncovered = uncovered + R::from_f64(sub.face_area(f)).unwrap();
            if witness.is_none() {
                witness = Some(probe);
            }
        }
    }
    let square_area = plan.accordion.square_side * plan.accordion.square_side;
    let covered = uncovered <= tol.eps_verify * sil_area && panels_inside;
    Ok(CoverageReport {
        covered,
        uncovered_area: uncovered,
        gap_witness: witness,
        efficiency: sil_area / square_area,
        panels_inside,
        first_outside_panel,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn pt(x: f64, y: f64) -> Point2<f64> {
        Point2::new(x, y)
    }

    #[test]
    fn accordion_examples() {
        let p: AccordionPlan<f64> = accordion_fold(6.0, 1.0).unwrap();
        assert_eq!(p.creases.len(), 5);
        let orients: Vec<FoldOrientation> = p.creases.iter().map(|c| c.1).collect();
        for (k, o) in orients.iter().enumerate() {
            let want =
                if k % 2 == 0 { FoldOrientation::Mountain } else { FoldOrientation::Valley };
            assert_eq!(*o, want);
        }
        let p: AccordionPlan<f64> = accordion_fold(4.0, 4.0).unwrap();
        assert_eq!(p.creases.len(), 0);
        let p: AccordionPlan<f64> = accordion_fold(5.0, 2.0).unwrap();
        assert_eq!(p.creases.len(), 2);
        assert!((p.last_panel_width() - 1.0).abs() < 1e-12);
        assert!(accordion_fold::<f64>(0.0, 1.0).is_err());
        assert!(accordion_fold::<f64>(2.0, 3.0).is_err());
    }

    #[test]
    fn accordion_involution_is_exact_on_grid_values() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        for _ in 0..50 {
            // Dyadic sides and widths keep every fold coordinate exact.
            let w = rng.gen_range(1..=16) as f64 / 4.0;
            let panels = rng.gen_range(1..=12) as f64;
            let s = w * panels + if rng.gen_bool(0.5) { w / 2.0 } else { 0.0 };
            if s < w {
                continue;
            }
            let p = accordion_fold(s, w).unwrap();
            assert_eq!(p.creases.len(), (s / w).ceil() as usize - 1);
            for k in 0..=p.creases.len() {
                let y = w * k as f64;
                assert_eq!(p.fold_unfold(y), y, "s={s} w={w} y={y}");
            }
            assert_eq!(p.fold_unfold(s), s);
        }
    }

    #[test]
    fn convex_pentagon_is_one_piece() {
        let d = convex_decompose(&fixtures::regular_ngon::<f64>(5)).unwrap();
        assert_eq!(d.pieces.len(), 1);
        assert!(d.spanning_tree.is_empty());
        assert_eq!(d.traversal, vec![0]);
    }

    #[test]
    fn l_shape_splits_in_two() {
        let d = convex_decompose(&fixtures::l_polygon::<f64>()).unwrap();
        assert_eq!(d.pieces.len(), 2);
        assert_eq!(d.spanning_tree.len(), 1);
    }

    #[test]
    fn letter_i_splits_into_three_rectangles() {
        let d = convex_decompose(&fixtures::letter_i::<f64>()).unwrap();
        assert_eq!(d.pieces.len(), 3);
        for p in &d.pieces {
            assert!(crate::geom::is_convex_cycle(p, 1e-9));
            assert_eq!(p.len(), 4);
        }
        // Path-shaped tree.
        assert_eq!(d.spanning_tree.len(), 2);
        // Pieces partition the silhouette area.
        let total: f64 = d.pieces.iter().map(|p| signed_area(p)).sum();
        let sil = signed_area(&fixtures::letter_i::<f64>());
        assert!((total - sil).abs() < 1e-9);
    }

    /// Exhaustive minimum convex partition via non-crossing vertex
    /// diagonals, used as the oracle for the greedy decomposition.
    fn min_convex_pieces(poly: &[Point2<f64>]) -> usize {
        let n = poly.len();
        let tol = Tolerance::from_diameter(10.0);
        let dir_out = |i: usize| (poly[(i + 1) % n] - poly[i]).normalized();
        let dir_in_rev = |i: usize| (poly[(i + n - 1) % n] - poly[i]).normalized();
        let reflex: Vec<usize> = (0..n)
            .filter(|&i| dir_in_rev(i).cross(dir_out(i)) > 1e-12)
            .collect();
        if reflex.is_empty() {
            return 1;
        }
        let mut cands: Vec<(usize, usize)> = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                if j == (i + 1) % n || (j + 1) % n == i {
                    continue;
                }
                if diagonal_inside(poly, i, j, &tol) {
                    cands.push((i, j));
                }
            }
        }
        for k in 1..=reflex.len() {
            if try_sets(poly, &cands, &reflex, k, 0, &mut Vec::new(), &tol) {
                return k + 1;
            }
        }
        usize::MAX
    }

    fn try_sets(
        poly: &[Point2<f64>],
        cands: &[(usize, usize)],
        reflex: &[usize],
        k: usize,
        from: usize,
        chosen: &mut Vec<(usize, usize)>,
        tol: &Tolerance<f64>,
    ) -> bool {
        if chosen.len() == k {
            let n = poly.len();
            let mut inc: Vec<Vec<Vec2<f64>>> = vec![Vec::new(); n];
            for &(i, j) in chosen.iter() {
                inc[i].push((poly[j] - poly[i]).normalized());
                inc[j].push((poly[i] - poly[j]).normalized());
            }
            let dir_out = |i: usize| (poly[(i + 1) % n] - poly[i]).normalized();
            let dir_in_rev = |i: usize| (poly[(i + n - 1) % n] - poly[i]).normalized();
            return reflex.iter().all(|&r| resolves(dir_out(r), dir_in_rev(r), &inc[r]));
        }
        for c in from..cands.len() {
            if chosen.iter().any(|&x| chords_cross(poly, x, cands[c], tol)) {
                continue;
            }
            chosen.push(cands[c]);
            if try_sets(poly, cands, reflex, k, c + 1, chosen, tol) {
                return true;
            }
            chosen.pop();
        }
        false
    }

    #[test]
    fn greedy_partition_matches_exhaustive_minimum() {
        for poly in [
            fixtures::letter_i::<f64>(),
            fixtures::l_polygon::<f64>(),
            fixtures::butterfly::<f64>(),
        ] {
            let greedy = convex_decompose(&poly).unwrap().pieces.len();
            let optimal = min_convex_pieces(&poly);
            assert_eq!(greedy, optimal, "greedy {greedy} vs optimal {optimal}");
        }
    }

    #[test]
    fn piece_count_bound() {
        for poly in [fixtures::letter_i::<f64>(), fixtures::h_polygon::<f64>()] {
            let n = poly.len();
            let d = convex_decompose(&poly).unwrap();
            assert!(d.pieces.len() <= n - 2);
        }
    }

    #[test]
    fn single_rectangle_strip_cover() {
        // 4 x 1 rectangle with strip width 1: one band, no turns.
        let rect = vec![pt(0.0, 0.0), pt(4.0, 0.0), pt(4.0, 1.0), pt(0.0, 1.0)];
        let d = convex_decompose(&rect).unwrap();
        let plan = plan_strip_cover(&d, 1.0).unwrap();
        assert!((plan.consumed_length - 4.0).abs() < 1e-9, "{}", plan.consumed_length);
        assert!(plan.folds.len() <= 1);
        let tol = Tolerance::from_diameter(5.0);
        let report = verify_cover(&plan, &rect, &tol).unwrap();
        assert!(report.covered, "{report:?}");
    }

    #[test]
    fn two_band_rectangle_cover() {
        let rect = vec![pt(0.0, 0.0), pt(4.0, 0.0), pt(4.0, 2.0), pt(0.0, 2.0)];
        let d = convex_decompose(&rect).unwrap();
        let plan = plan_strip_cover(&d, 1.0).unwrap();
        assert!(plan.consumed_length >= 8.0 - 1e-9, "{}", plan.consumed_length);
        let tol = Tolerance::from_diameter(5.0);
        let report = verify_cover(&plan, &rect, &tol).unwrap();
        assert!(report.covered, "{report:?}");
        assert!(report.efficiency < 1.0);
    }

    #[test]
    fn letter_i_cover_with_bar_width_strip() {
        let sil = fixtures::letter_i::<f64>();
        let d = convex_decompose(&sil).unwrap();
        let plan = plan_strip_cover(&d, 0.5).unwrap();
        let tol = Tolerance::from_diameter(6.0);
        let report = verify_cover(&plan, &sil, &tol).unwrap();
        assert!(report.covered, "{report:?}");
        assert!(report.efficiency < 1.0);
        // Conservation: consumed length within the strip budget.
        let side = plan.accordion.square_side;
        assert!(plan.consumed_length <= side * side / 0.5 + 1e-9);
    }

    #[test]
    fn panel_chain_shares_fold_segments() {
        let rect = vec![pt(0.0, 0.0), pt(4.0, 0.0), pt(4.0, 2.0), pt(0.0, 2.0)];
        let d = convex_decompose(&rect).unwrap();
        let plan = plan_strip_cover(&d, 1.0).unwrap();
        // Every fold segment lies on the shared boundary of consecutive
        // panels.
        for (k, fold) in plan.folds.iter().enumerate() {
            if k + 1 >= plan.panels.len() {
                break;
            }
            for q in [fold.segment.a, fold.segment.b, fold.segment.midpoint()] {
                let on_prev = polygon_boundary_distance(&plan.panels[k], q) < 1e-7;
                let on_next = polygon_boundary_distance(&plan.panels[k + 1], q) < 1e-7;
                assert!(on_prev && on_next, "fold {k} not shared");
            }
        }
    }

    fn polygon_boundary_distance(poly: &[Point2<f64>], p: Point2<f64>) -> f64 {
        let n = poly.len();
        (0..n)
            .map(|i| Segment2::new(poly[i], poly[(i + 1) % n]).distance_to(p))
            .fold(f64::INFINITY, f64::min)
    }

    #[test]
    fn degenerate_band_when_strip_too_wide() {
        let rect = vec![pt(0.0, 0.0), pt(4.0, 0.0), pt(4.0, 1.0), pt(0.0, 1.0)];
        let d = convex_decompose(&rect).unwrap();
        let err = plan_strip_cover(&d, 1.5).unwrap_err();
        assert!(matches!(err, Error::DegenerateBand(_)));
    }
}
