//! Planar subdivision by an arrangement of segments.
//!
//! Input segments are snap-rounded to the coincidence threshold, split at
//! mutual intersections, merged where they overlap collinearly, and linked
//! into a doubly-connected edge list. Faces are enumerated with hole cycles
//! attached, so the structure stays valid for disconnected inputs.

use crate::error::{Error, Result};
use crate::geom::{
    cast, intersect_segments, Point2, Real, Segment2, SegmentIntersection, Tolerance, Vec2,
};

/// Input segment with a caller-chosen label, used to map subdivision edges
/// back to their sources (crease kind, cut, paper border, ...).
#[derive(Debug, Clone, Copy)]
pub struct LabeledSegment<R> {
    pub segment: Segment2<R>,
    pub label: u32,
}

/// One directed half-edge. The twin of half-edge `h` is `h ^ 1`.
#[derive(Debug, Clone)]
pub struct HalfEdge {
    /// Vertex index the half-edge leaves from.
    pub origin: usize,
    /// Next half-edge around the face (face lies to the left).
    pub next: usize,
    /// Undirected edge record this half-edge belongs to.
    pub edge: usize,
    /// Orbit (cycle) id, filled during face extraction.
    pub cycle: usize,
}

/// One undirected edge of the arrangement.
#[derive(Debug, Clone)]
pub struct EdgeData {
    pub v0: usize,
    pub v1: usize,
    /// Source labels with orientation: `true` when the source segment runs
    /// v0 -> v1. Collinear duplicate inputs merge into one edge here.
    pub labels: Vec<(u32, bool)>,
}

/// A closed orbit of `next` links.
#[derive(Debug, Clone)]
pub struct Cycle {
    /// One half-edge on the orbit.
    pub start: usize,
    /// Signed area of the orbit walk (positive = counterclockwise).
    pub area: f64,
    /// Face the orbit bounds.
    pub face: usize,
}

/// A face of the subdivision.
#[derive(Debug, Clone)]
pub struct Face {
    /// Outer boundary cycle; `None` for the unbounded face.
    pub outer: Option<usize>,
    /// Hole cycles contained in this face.
    pub holes: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct PlanarSubdivision<R> {
    pub vertices: Vec<Point2<R>>,
    pub half_edges: Vec<HalfEdge>,
    pub edges: Vec<EdgeData>,
    pub cycles: Vec<Cycle>,
    pub faces: Vec<Face>,
    pub tol: Tolerance<R>,
    /// Outgoing half-edges per vertex, sorted counterclockwise.
    outgoing: Vec<Vec<usize>>,
}

impl<R: Real> PlanarSubdivision<R> {
    /// Arrangement of unlabeled segments.
    pub fn build(segments: &[Segment2<R>], tol: &Tolerance<R>) -> Result<Self> {
        let labeled: Vec<LabeledSegment<R>> = segments
            .iter()
            .enumerate()
            .map(|(i, s)| LabeledSegment { segment: *s, label: i as u32 })
            .collect();
        Self::build_labeled(&labeled, tol)
    }

    /// Arrangement of labeled segments.
    pub fn build_labeled(inputs: &[LabeledSegment<R>], tol: &Tolerance<R>) -> Result<Self> {
        if inputs.is_empty() {
            return Err(Error::InvalidInput("cannot build a subdivision of zero segments".into()));
        }
        let eps = tol.eps_geom;
        for (i, ls) in inputs.iter().enumerate() {
            let s = &ls.segment;
            if !s.a.is_finite() || !s.b.is_finite() {
                return Err(Error::InvalidInput(format!("segment {i} has non-finite coordinates")));
            }
            if s.length() <= eps {
                return Err(Error::DegenerateInput(format!(
                    "segment {i} is shorter than the coincidence threshold"
                )));
            }
        }

        // Endpoints become anchor vertices. Distinct endpoints closer than
        // the threshold are ambiguous and rejected; exact duplicates merge.
        let mut anchors: Vec<Point2<R>> = Vec::new();
        for ls in inputs {
            for p in [ls.segment.a, ls.segment.b] {
                if !anchors.iter().any(|q| *q == p) {
                    anchors.push(p);
                }
            }
        }
        let mut order: Vec<usize> = (0..anchors.len()).collect();
        order.sort_by(|&i, &j| lex_cmp(&anchors[i], &anchors[j]));
        for w in 0..order.len() {
            for v in (w + 1)..order.len() {
                let (p, q) = (anchors[order[w]], anchors[order[v]]);
                if q.x - p.x > eps {
                    break;
                }
                let d = p.distance(q);
                if d > R::zero() && d <= eps {
                    return Err(Error::DegenerateInput(format!(
                        "vertices ({}, {}) and ({}, {}) are distinct but closer than eps_geom",
                        p.x, p.y, q.x, q.y
                    )));
                }
            }
        }

        // Cluster endpoints and pairwise intersection points. Anchors are
        // inserted first so computed points snap onto input coordinates.
        let mut cluster = Clusters::new(eps);
        for p in &anchors {
            cluster.insert(*p);
        }
        let n = inputs.len();
        let mut splits: Vec<Vec<Point2<R>>> = vec![Vec::new(); n];
        for i in 0..n {
            for j in (i + 1)..n {
                match intersect_segments(&inputs[i].segment, &inputs[j].segment, tol) {
                    SegmentIntersection::Empty => {}
                    SegmentIntersection::Point(p) => {
                        splits[i].push(p);
                        splits[j].push(p);
                    }
                    SegmentIntersection::Overlap(s) => {
                        for p in [s.a, s.b] {
                            splits[i].push(p);
                            splits[j].push(p);
                        }
                    }
                }
            }
        }
        for list in &splits {
            for p in list {
                cluster.insert(*p);
            }
        }
        let vertices = cluster.positions.clone();

        // Split every input at its clustered cut points and merge collinear
        // duplicates through a shared (v0, v1) key.
        let mut edges: Vec<EdgeData> = Vec::new();
        let mut edge_index: std::collections::HashMap<(usize, usize), usize> =
            std::collections::HashMap::new();
        for (i, ls) in inputs.iter().enumerate() {
            let s = ls.segment;
            let dir = s.b - s.a;
            let len2 = dir.norm_squared();
            let mut cuts: Vec<(R, usize)> = Vec::new();
            let push = |p: Point2<R>, cuts: &mut Vec<(R, usize)>| {
                let vid = cluster.find(p).expect("point was inserted");
                let t = (vertices[vid] - s.a).dot(dir) / len2;
                cuts.push((t, vid));
            };
            push(s.a, &mut cuts);
            push(s.b, &mut cuts);
            for p in &splits[i] {
                push(*p, &mut cuts);
            }
            cuts.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
            cuts.dedup_by_key(|c| c.1);
            for pair in cuts.windows(2) {
                let (a, b) = (pair[0].1, pair[1].1);
                if a == b {
                    continue;
                }
                let (v0, v1, fwd) = if a < b { (a, b, true) } else { (b, a, false) };
                let id = *edge_index.entry((v0, v1)).or_insert_with(|| {
                    edges.push(EdgeData { v0, v1, labels: Vec::new() });
                    edges.len() - 1
                });
                edges[id].labels.push((ls.label, fwd));
            }
        }

        // Half-edges: 2k is v0 -> v1 of edge k, 2k+1 the twin.
        let mut half_edges: Vec<HalfEdge> = Vec::with_capacity(edges.len() * 2);
        for (k, e) in edges.iter().enumerate() {
            half_edges.push(HalfEdge { origin: e.v0, next: usize::MAX, edge: k, cycle: usize::MAX });
            half_edges.push(HalfEdge { origin: e.v1, next: usize::MAX, edge: k, cycle: usize::MAX });
        }

        // Sort outgoing half-edges counterclockwise around each vertex.
        let mut outgoing: Vec<Vec<usize>> = vec![Vec::new(); vertices.len()];
        for (h, he) in half_edges.iter().enumerate() {
            outgoing[he.origin].push(h);
        }
        let head = |h: usize| -> usize {
            let e = &edges[h / 2];
            if h % 2 == 0 { e.v1 } else { e.v0 }
        };
        for (v, list) in outgoing.iter_mut().enumerate() {
            list.sort_by(|&a, &b| {
                let da = vertices[head(a)] - vertices[v];
                let db = vertices[head(b)] - vertices[v];
                da.angle().partial_cmp(&db.angle()).unwrap().then(a.cmp(&b))
            });
        }

        // next(h): at the head vertex, step clockwise from the twin.
        for h in 0..half_edges.len() {
            let v = head(h);
            let twin = h ^ 1;
            let list = &outgoing[v];
            let pos = list.iter().position(|&x| x == twin).expect("twin is outgoing at head");
            let prev = if pos == 0 { list.len() - 1 } else { pos - 1 };
            half_edges[h].next = list[prev];
        }

        let mut sub = PlanarSubdivision {
            vertices,
            half_edges,
            edges,
            cycles: Vec::new(),
            faces: Vec::new(),
            tol: *tol,
            outgoing,
        };
        sub.extract_faces()?;
        Ok(sub)
    }

    pub fn twin(&self, h: usize) -> usize {
        h ^ 1
    }

    /// Head vertex of a half-edge.
    pub fn head(&self, h: usize) -> usize {
        let e = &self.edges[self.half_edges[h].edge];
        if h % 2 == 0 { e.v1 } else { e.v0 }
    }

    pub fn origin_point(&self, h: usize) -> Point2<R> {
        self.vertices[self.half_edges[h].origin]
    }

    pub fn head_point(&self, h: usize) -> Point2<R> {
        self.vertices[self.head(h)]
    }

    pub fn face_of(&self, h: usize) -> usize {
        self.cycles[self.half_edges[h].cycle].face
    }

    pub fn outgoing_at(&self, v: usize) -> &[usize] {
        &self.outgoing[v]
    }

    /// Vertex positions along a cycle orbit.
    pub fn cycle_points(&self, cycle: usize) -> Vec<Point2<R>> {
        let mut pts = Vec::new();
        let start = self.cycles[cycle].start;
        let mut h = start;
        loop {
            pts.push(self.origin_point(h));
            h = self.half_edges[h].next;
            if h == start {
                break;
            }
        }
        pts
    }

    /// Walk of half-edges along a cycle orbit.
    pub fn cycle_half_edges(&self, cycle: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let start = self.cycles[cycle].start;
        let mut h = start;
        loop {
            out.push(h);
            h = self.half_edges[h].next;
            if h == start {
                break;
            }
        }
        out
    }

    /// Area of a bounded face (outer cycle minus holes). Zero for the outer face.
    pub fn face_area(&self, face: usize) -> f64 {
        let f = &self.faces[face];
        let mut acc = match f.outer {
            Some(c) => self.cycles[c].area,
            None => 0.0,
        };
        for &h in &f.holes {
            acc += self.cycles[h].area;
        }
        acc
    }

    /// Number of bounded faces.
    pub fn bounded_face_count(&self) -> usize {
        self.faces.iter().filter(|f| f.outer.is_some()).count()
    }

    /// Index of the unbounded face.
    pub fn outer_face(&self) -> usize {
        self.faces.iter().position(|f| f.outer.is_none()).expect("outer face exists")
    }

    /// A point strictly inside a bounded face, away from its boundary.
    pub fn face_probe(&self, face: usize) -> Point2<R> {
        let f = &self.faces[face];
        let cycle = f.outer.expect("probe needs a bounded face");
        let pts = self.cycle_points(cycle);
        // Wedge probe at the lowest-leftmost (convex) cycle vertex.
        let mut best = 0;
        for i in 1..pts.len() {
            if lex_cmp(&pts[i], &pts[best]) == std::cmp::Ordering::Less {
                best = i;
            }
        }
        let n = pts.len();
        let prev = pts[(best + n - 1) % n];
        let cur = pts[best];
        let next = pts[(best + 1) % n];
        let d1 = (next - cur).normalized();
        let d2 = (prev - cur).normalized();
        let bis = (d1 + d2).normalized();
        let reach = (next - cur).norm().min((prev - cur).norm());
        let mut delta = reach * cast(0.3);
        for _ in 0..60 {
            let p = cur + bis * delta;
            if self.face_contains(face, p) {
                return p;
            }
            delta = delta * cast(0.5);
        }
        // Fall back to the wedge midpoint at minimum offset.
        cur + bis * (self.tol.eps_geom * cast(4.0))
    }

    /// Even-odd containment against the face's outer cycle and holes
    /// (strictly inside; boundary points report false).
    pub fn face_contains(&self, face: usize, p: Point2<R>) -> bool {
        use crate::geom::{point_in_cycle_unchecked, PointLocation};
        let f = &self.faces[face];
        match f.outer {
            Some(outer) => {
                let pts = self.cycle_points(outer);
                if point_in_cycle_unchecked(p, &pts, self.tol.eps_geom) != PointLocation::Inside {
                    return false;
                }
                for &hole in &f.holes {
                    let hp = self.cycle_points(hole);
                    if point_in_cycle_unchecked(p, &hp, self.tol.eps_geom) != PointLocation::Outside
                    {
                        return false;
                    }
                }
                true
            }
            None => {
                // Outside every top-level bounded face.
                for (fi, fo) in self.faces.iter().enumerate() {
                    if fi == face || fo.outer.is_none() {
                        continue;
                    }
                    if self.face_contains(fi, p) {
                        return false;
                    }
                }
                true
            }
        }
    }

    /// The bounded face containing `p`, if any.
    pub fn locate(&self, p: Point2<R>) -> Option<usize> {
        (0..self.faces.len())
            .filter(|&f| self.faces[f].outer.is_some())
            .find(|&f| self.face_contains(f, p))
    }

    /// Winding number per face for the directed input segments whose label
    /// passes `keep`. The unbounded face has winding zero.
    pub fn face_windings(&self, keep: impl Fn(u32) -> bool) -> Vec<i32> {
        let mut winding = vec![i32::MIN; self.faces.len()];
        let outer = self.outer_face();
        winding[outer] = 0;
        let mut stack = vec![outer];
        while let Some(f) = stack.pop() {
            let w = winding[f];
            let cycles: Vec<usize> = self
                .faces[f]
                .outer
                .iter()
                .copied()
                .chain(self.faces[f].holes.iter().copied())
                .collect();
            for c in cycles {
                for h in self.cycle_half_edges(c) {
                    let t = self.twin(h);
                    let g = self.face_of(t);
                    if winding[g] != i32::MIN {
                        continue;
                    }
                    // Crossing from the left of h to its right: each source
                    // directed along h loses one turn, each against gains one.
                    let e = &self.edges[self.half_edges[h].edge];
                    let h_is_forward = h % 2 == 0;
                    let mut delta = 0;
                    for &(label, fwd) in &e.labels {
                        if !keep(label) {
                            continue;
                        }
                        if fwd == h_is_forward {
                            delta -= 1;
                        } else {
                            delta += 1;
                        }
                    }
                    winding[g] = w + delta;
                    stack.push(g);
                }
            }
        }
        for w in &mut winding {
            if *w == i32::MIN {
                *w = 0;
            }
        }
        winding
    }

    /// Boundary cycles of the union of faces selected by `keep`, oriented
    /// with the region on the left (outers counterclockwise, holes clockwise).
    pub fn region_boundaries(&self, keep: impl Fn(usize) -> bool) -> Vec<Vec<usize>> {
        let mut on_boundary = vec![false; self.half_edges.len()];
        for h in 0..self.half_edges.len() {
            on_boundary[h] = keep(self.face_of(h)) && !keep(self.face_of(self.twin(h)));
        }
        let mut seen = vec![false; self.half_edges.len()];
        let mut loops = Vec::new();
        for h0 in 0..self.half_edges.len() {
            if !on_boundary[h0] || seen[h0] {
                continue;
            }
            let mut walk = Vec::new();
            let mut h = h0;
            loop {
                seen[h] = true;
                walk.push(h);
                // Advance, skipping edges interior to the region.
                let mut n = self.half_edges[h].next;
                while !on_boundary[n] {
                    n = self.half_edges[self.twin(n)].next;
                    if n == self.half_edges[h].next {
                        break;
                    }
                }
                h = n;
                if h == h0 {
                    break;
                }
                if walk.len() > self.half_edges.len() {
                    break;
                }
            }
            loops.push(walk);
        }
        loops
    }

    fn extract_faces(&mut self) -> Result<()> {
        // Orbits of `next`.
        let mut cycles: Vec<Cycle> = Vec::new();
        for h0 in 0..self.half_edges.len() {
            if self.half_edges[h0].cycle != usize::MAX {
                continue;
            }
            let id = cycles.len();
            let mut area = 0.0f64;
            let mut h = h0;
            let mut steps = 0usize;
            loop {
                self.half_edges[h].cycle = id;
                let a = self.origin_point(h);
                let b = self.head_point(h);
                area += (a.x * b.y - b.x * a.y).to_f64().unwrap();
                h = self.half_edges[h].next;
                steps += 1;
                if h == h0 {
                    break;
                }
                if steps > self.half_edges.len() {
                    return Err(Error::NumericalBreakdown {
                        message: "face walk did not close".into(),
                        trace: Vec::new(),
                    });
                }
            }
            cycles.push(Cycle { start: h0, area: area / 2.0, face: usize::MAX });
        }
        self.cycles = cycles;

        // Positive orbits found a bounded face each; the rest are holes or
        // component outer boundaries that need a containing face.
        let area_eps = (self.tol.eps_geom * self.tol.eps_geom).to_f64().unwrap();
        let mut faces: Vec<Face> = vec![Face { outer: None, holes: Vec::new() }];
        let mut pending: Vec<usize> = Vec::new();
        let mut cycle_order: Vec<usize> = (0..self.cycles.len()).collect();
        cycle_order.sort_by(|&a, &b| {
            let pa = self.cycle_min_vertex(a);
            let pb = self.cycle_min_vertex(b);
            lex_cmp(&pa, &pb).then(a.cmp(&b))
        });
        for &c in &cycle_order {
            if self.cycles[c].area > area_eps {
                self.cycles[c].face = faces.len();
                faces.push(Face { outer: Some(c), holes: Vec::new() });
            } else {
                pending.push(c);
            }
        }
        // Resolve containment left to right so that shooting a leftward ray
        // only hits already-resolved cycles.
        pending.sort_by(|&a, &b| {
            let pa = self.cycle_min_vertex(a);
            let pb = self.cycle_min_vertex(b);
            lex_cmp(&pa, &pb).then(a.cmp(&b))
        });
        self.faces = faces;
        for c in pending {
            let face = self.containing_face(c)?;
            self.cycles[c].face = face;
            self.faces[face].holes.push(c);
        }
        Ok(())
    }

    fn cycle_min_vertex(&self, c: usize) -> Point2<R> {
        let pts = self.cycle_points(c);
        let mut best = pts[0];
        for p in &pts[1..] {
            if lex_cmp(p, &best) == std::cmp::Ordering::Less {
                best = *p;
            }
        }
        best
    }

    /// Face containing a hole cycle, found by shooting a leftward ray from
    /// the cycle's leftmost vertex.
    fn containing_face(&self, c: usize) -> Result<usize> {
        let cycle_edges: std::collections::HashSet<usize> =
            self.cycle_half_edges(c).iter().map(|&h| self.half_edges[h].edge).collect();
        let p = self.cycle_min_vertex(c);
        'slopes: for attempt in 0..48 {
            let slope = cast::<R>(1e-7) * cast::<R>(1.0 + attempt as f64 * 1.37);
            let dir = Vec2::new(-R::one(), -slope);
            let mut best: Option<(R, usize)> = None;
            for (k, e) in self.edges.iter().enumerate() {
                if cycle_edges.contains(&k) {
                    continue;
                }
                let a = self.vertices[e.v0];
                let b = self.vertices[e.v1];
                let d = b - a;
                let denom = dir.cross(d);
                if denom.abs() < cast(1e-30) {
                    continue;
                }
                let w = a - p;
                let t = w.cross(d) / denom;
                let u = dir.cross(w) / -denom;
                let eps_u = self.tol.eps_geom / d.norm();
                if t <= self.tol.eps_geom || u < -eps_u || u > R::one() + eps_u {
                    continue;
                }
                // Passing too near an endpoint is ambiguous; change slope.
                if u < eps_u * cast(4.0) || u > R::one() - eps_u * cast(4.0) {
                    continue 'slopes;
                }
                if best.map_or(true, |(bt, _)| t < bt) {
                    best = Some((t, k));
                }
            }
            let Some((_, k)) = best else {
                return Ok(self.outer_face());
            };
            // Pick the half-edge of k whose left side faces the ray origin.
            let e = &self.edges[k];
            let d = self.vertices[e.v1] - self.vertices[e.v0];
            let side = d.cross(p - self.vertices[e.v0]);
            let h = if side > R::zero() { 2 * k } else { 2 * k + 1 };
            let owner = self.half_edges[h].cycle;
            let face = self.cycles[owner].face;
            if face == usize::MAX {
                return Err(Error::NumericalBreakdown {
                    message: "hole containment resolved out of order".into(),
                    trace: Vec::new(),
                });
            }
            return Ok(face);
        }
        Err(Error::NumericalBreakdown {
            message: "could not resolve hole containment (ray kept hitting vertices)".into(),
            trace: Vec::new(),
        })
    }
}

fn lex_cmp<R: Real>(a: &Point2<R>, b: &Point2<R>) -> std::cmp::Ordering {
    a.x.partial_cmp(&b.x).unwrap().then(a.y.partial_cmp(&b.y).unwrap())
}

/// Greedy proximity clustering with deterministic canonical positions.
struct Clusters<R> {
    eps: R,
    positions: Vec<Point2<R>>,
}

impl<R: Real> Clusters<R> {
    fn new(eps: R) -> Self {
        Clusters { eps, positions: Vec::new() }
    }

    fn insert(&mut self, p: Point2<R>) -> usize {
        match self.find(p) {
            Some(i) => i,
            None => {
                self.positions.push(p);
                self.positions.len() - 1
            }
        }
    }

    fn find(&self, p: Point2<R>) -> Option<usize> {
        let mut best: Option<(R, usize)> = None;
        for (i, q) in self.positions.iter().enumerate() {
            let d = p.distance(*q);
            if d <= self.eps && best.map_or(true, |(bd, _)| d < bd) {
                best = Some((d, i));
            }
        }
        best.map(|(_, i)| i)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{point_in_cycle_unchecked, signed_area, PointLocation};

    type P = Point2<f64>;

    fn pt(x: f64, y: f64) -> P {
        Point2::new(x, y)
    }

    fn seg(ax: f64, ay: f64, bx: f64, by: f64) -> Segment2<f64> {
        Segment2::new(pt(ax, ay), pt(bx, by))
    }

    fn cycle_segments(pts: &[P]) -> Vec<Segment2<f64>> {
        (0..pts.len()).map(|i| Segment2::new(pts[i], pts[(i + 1) % pts.len()])).collect()
    }

    fn tol() -> Tolerance<f64> {
        Tolerance::from_diameter(6.0)
    }

    fn euler_ok(sub: &PlanarSubdivision<f64>) -> bool {
        // V - E + F = 2 holds for a connected subdivision.
        let v = sub.vertices.len() as i64;
        let e = sub.edges.len() as i64;
        let f = sub.faces.len() as i64;
        v - e + f == 2
    }

    #[test]
    fn single_square_has_one_interior_face() {
        let sq = vec![pt(0.0, 0.0), pt(1.0, 0.0), pt(1.0, 1.0), pt(0.0, 1.0)];
        let sub = PlanarSubdivision::build(&cycle_segments(&sq), &tol()).unwrap();
        assert_eq!(sub.bounded_face_count(), 1);
        assert_eq!(sub.faces.len(), 2);
        assert!(euler_ok(&sub));
        let f = sub.locate(pt(0.5, 0.5)).unwrap();
        assert!((sub.face_area(f) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn square_with_diagonals_has_four_triangles() {
        let sq = vec![pt(0.0, 0.0), pt(2.0, 0.0), pt(2.0, 2.0), pt(0.0, 2.0)];
        let mut segs = cycle_segments(&sq);
        segs.push(seg(0.0, 0.0, 2.0, 2.0));
        segs.push(seg(0.0, 2.0, 2.0, 0.0));
        let sub = PlanarSubdivision::build(&segs, &tol()).unwrap();
        assert_eq!(sub.bounded_face_count(), 4);
        assert!(euler_ok(&sub));
        // Center became a vertex.
        assert!(sub.vertices.iter().any(|v| v.distance(pt(1.0, 1.0)) < 1e-12));
        let total: f64 = (0..sub.faces.len())
            .filter(|&f| sub.faces[f].outer.is_some())
            .map(|f| sub.face_area(f))
            .sum();
        assert!((total - 4.0).abs() < 1e-9);
    }

    #[test]
    fn h_polygon_has_one_interior_face() {
        let h = crate::fixtures::h_polygon();
        let sub = PlanarSubdivision::build(&cycle_segments(&h), &tol()).unwrap();
        assert_eq!(sub.bounded_face_count(), 1);
        assert!(euler_ok(&sub));
        // Face area matches the shoelace area of the cycle.
        let f = sub.locate(pt(0.5, 0.5)).unwrap();
        let area = signed_area(&h);
        assert!((sub.face_area(f) - area).abs() < 1e-9 * area);
        // Independent even-odd sampling: subdivision face count of interior
        // points agrees with the polygon test on a grid.
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..400 {
            let p = pt(rng.gen_range(-0.5..3.5), rng.gen_range(-0.5..4.5));
            let loc = point_in_cycle_unchecked(p, &h, 1e-9);
            if loc == PointLocation::Boundary {
                continue;
            }
            let located = sub.locate(p).is_some();
            assert_eq!(located, loc == PointLocation::Inside, "at {p:?}");
        }
    }

    #[test]
    fn nested_squares_form_annulus_with_hole() {
        let outer = vec![pt(0.0, 0.0), pt(4.0, 0.0), pt(4.0, 4.0), pt(0.0, 4.0)];
        let inner = vec![pt(1.0, 1.0), pt(3.0, 1.0), pt(3.0, 3.0), pt(1.0, 3.0)];
        let mut segs = cycle_segments(&outer);
        segs.extend(cycle_segments(&inner));
        let sub = PlanarSubdivision::build(&segs, &tol()).unwrap();
        assert_eq!(sub.bounded_face_count(), 2);
        let annulus = sub.locate(pt(0.5, 0.5)).unwrap();
        assert_eq!(sub.faces[annulus].holes.len(), 1);
        assert!((sub.face_area(annulus) - 12.0).abs() < 1e-9);
        let inner_face = sub.locate(pt(2.0, 2.0)).unwrap();
        assert!((sub.face_area(inner_face) - 4.0).abs() < 1e-9);
    }

    #[test]
    fn collinear_duplicates_merge() {
        let sq = vec![pt(0.0, 0.0), pt(1.0, 0.0), pt(1.0, 1.0), pt(0.0, 1.0)];
        let mut segs = cycle_segments(&sq);
        // Duplicate bottom edge, partially overlapping.
        segs.push(seg(0.25, 0.0, 1.0, 0.0));
        let sub = PlanarSubdivision::build(&segs, &tol()).unwrap();
        assert_eq!(sub.bounded_face_count(), 1);
        let f = sub.locate(pt(0.5, 0.5)).unwrap();
        assert!((sub.face_area(f) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn near_coincident_distinct_vertices_are_rejected() {
        let segs =
            vec![seg(0.0, 0.0, 1.0, 0.0), seg(1.0, 6e-10, 1.0, 1.0)];
        let err = PlanarSubdivision::build(&segs, &tol()).unwrap_err();
        assert!(matches!(err, Error::DegenerateInput(_)), "{err}");
    }

    #[test]
    fn idempotent_on_own_edge_set() {
        let sq = vec![pt(0.0, 0.0), pt(2.0, 0.0), pt(2.0, 2.0), pt(0.0, 2.0)];
        let mut segs = cycle_segments(&sq);
        segs.push(seg(0.0, 0.0, 2.0, 2.0));
        let sub = PlanarSubdivision::build(&segs, &tol()).unwrap();
        let edge_set: Vec<Segment2<f64>> = sub
            .edges
            .iter()
            .map(|e| Segment2::new(sub.vertices[e.v0], sub.vertices[e.v1]))
            .collect();
        let sub2 = PlanarSubdivision::build(&edge_set, &tol()).unwrap();
        assert_eq!(sub.vertices.len(), sub2.vertices.len());
        assert_eq!(sub.edges.len(), sub2.edges.len());
        assert_eq!(sub.faces.len(), sub2.faces.len());
    }

    #[test]
    fn windings_of_a_directed_cycle() {
        let sq = vec![pt(0.0, 0.0), pt(1.0, 0.0), pt(1.0, 1.0), pt(0.0, 1.0)];
        let inputs: Vec<LabeledSegment<f64>> = cycle_segments(&sq)
            .into_iter()
            .map(|s| LabeledSegment { segment: s, label: 0 })
            .collect();
        let sub = PlanarSubdivision::build_labeled(&inputs, &tol()).unwrap();
        let w = sub.face_windings(|_| true);
        let inside = sub.locate(pt(0.5, 0.5)).unwrap();
        assert_eq!(w[inside], 1);
        assert_eq!(w[sub.outer_face()], 0);
    }

    #[test]
    fn region_boundary_extraction() {
        let sq = vec![pt(0.0, 0.0), pt(2.0, 0.0), pt(2.0, 2.0), pt(0.0, 2.0)];
        let mut segs = cycle_segments(&sq);
        segs.push(seg(1.0, 0.0, 1.0, 2.0));
        let sub = PlanarSubdivision::build(&segs, &tol()).unwrap();
        let left = sub.locate(pt(0.5, 1.0)).unwrap();
        let loops = sub.region_boundaries(|f| f == left);
        assert_eq!(loops.len(), 1);
        let pts: Vec<P> = loops[0].iter().map(|&h| sub.origin_point(h)).collect();
        assert!((signed_area(&pts) - 2.0).abs() < 1e-12);
    }
}
