//! Straight skeleton of a planar drawing by wavefront simulation.
//!
//! Every region of the drawing's complement shrinks under inward, parallel
//! unit-speed movement of its edges. Vertices ride the intersections of the
//! moving edge lines; the paths they trace are the skeleton arcs. Three
//! kinds of structural change are processed from a time-ordered queue:
//!
//! * edge collapse — two ring-adjacent vertices meet;
//! * collision — a vertex hits a non-incident front (same ring when reflex:
//!   the ring splits; another ring: the rings merge);
//! * pinch — a vertex ends up between antiparallel coincident fronts, which
//!   annihilate along their overlap (this is how parallel ridges and the
//!   disconnection of shapes like the H crossbar appear).
//!
//! The exterior is handled as one more region, closed off by a distant box
//! whose fronts never reach the paper within the simulated horizon; arcs
//! are clipped to the paper rectangle afterwards.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::drawing::{EdgeId, PlanarDrawing, Region};
use crate::error::{Error, Result};
use crate::geom::{
    cast, front_velocity, FrontVelocity, Line2, Point2, Real, Rect, Segment2, Tolerance, Vec2,
};
use crate::offset::snap_endpoints;
use crate::subdivision::{LabeledSegment, PlanarSubdivision};

/// A skeleton vertex: where wavefront vertices are born or die.
#[derive(Debug, Clone, Copy)]
pub struct SkeletonNode<R> {
    pub position: Point2<R>,
    /// Wavefront offset at which the node appears.
    pub time: R,
    /// True for artificial nodes created by stopping the exterior front at
    /// the simulation horizon; these are not real skeleton vertices.
    pub clipped: bool,
}

/// Provenance of an arc.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArcSource {
    DrawingVertex,
    EdgeEvent,
    SplitEvent,
    Annihilation,
    Clip,
}

/// A straight skeleton arc between two nodes. Direction follows the tracing
/// vertex's motion; the face of `left_face` lies to the left.
#[derive(Debug, Clone, Copy)]
pub struct SkeletonArc<R> {
    pub node_a: usize,
    pub node_b: usize,
    /// Face keys (see [`face_key`]) of the two faces the arc separates.
    pub left_face: usize,
    pub right_face: usize,
    pub source: ArcSource,
    _marker: std::marker::PhantomData<R>,
}

/// Key of the skeleton face swept by one side of one drawing edge:
/// `2 * edge_ordinal + side`, side 0 being the left of the edge walked in
/// cycle order (the cycle's inner side).
pub fn face_key(edge_ordinal: usize, outer_side: bool) -> usize {
    2 * edge_ordinal + usize::from(outer_side)
}

const NO_FACE: usize = usize::MAX;

/// One region swept by a single (drawing edge, side) pair, clipped to the
/// paper rectangle.
#[derive(Debug, Clone)]
pub struct SkeletonFace<R> {
    pub edge: EdgeId,
    pub key: usize,
    /// True when the face lies inside the drawing (even-odd filling).
    pub interior: bool,
    /// Counterclockwise boundary polygon.
    pub polygon: Vec<Point2<R>>,
    /// Classification of each boundary segment (polygon[i] to polygon[i+1]).
    pub boundary: Vec<FaceBoundary>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FaceBoundary {
    /// Lies on the drawing (the cut).
    Cut,
    /// Lies on a skeleton arc; the value is the face key across it.
    Arc(usize),
    /// Lies on the paper border.
    Paper,
}

#[derive(Debug, Clone)]
pub struct StraightSkeleton<R> {
    pub nodes: Vec<SkeletonNode<R>>,
    pub arcs: Vec<SkeletonArc<R>>,
    pub faces: Vec<SkeletonFace<R>>,
    pub paper: Rect<R>,
    /// Drawing edge line per face key, normal pointing into the face.
    face_lines: Vec<Option<Line2<R>>>,
    /// Materiality per face key.
    face_interior: Vec<bool>,
}

impl<R: Real> StraightSkeleton<R> {
    /// Largest node time among arcs of material (inside-the-drawing) faces.
    pub fn max_interior_time(&self) -> R {
        let mut best = R::zero();
        for arc in &self.arcs {
            if self.key_is_interior(arc.left_face) && self.key_is_interior(arc.right_face) {
                for n in [arc.node_a, arc.node_b] {
                    if !self.nodes[n].clipped {
                        best = best.max(self.nodes[n].time);
                    }
                }
            }
        }
        best
    }

    pub fn key_is_interior(&self, key: usize) -> bool {
        key != NO_FACE && self.face_interior.get(key).copied().unwrap_or(false)
    }

    /// Drawing-edge line of a face key, normal pointing into the face.
    pub fn face_line(&self, key: usize) -> Option<Line2<R>> {
        self.face_lines.get(key).copied().flatten()
    }

    /// Faces realized for a given key (clipping may split one into several).
    pub fn faces_with_key(&self, key: usize) -> impl Iterator<Item = &SkeletonFace<R>> {
        self.faces.iter().filter(move |f| f.key == key)
    }

    /// Node indices incident to a face key, via arcs.
    pub fn nodes_of_key(&self, key: usize) -> Vec<usize> {
        let mut out = Vec::new();
        for arc in &self.arcs {
            if arc.left_face == key || arc.right_face == key {
                for n in [arc.node_a, arc.node_b] {
                    if !out.contains(&n) {
                        out.push(n);
                    }
                }
            }
        }
        out
    }
}

/// Compute the straight skeleton of every region of the drawing, interior
/// and exterior, the latter clipped at the paper rectangle.
pub fn compute_skeleton<R: Real>(
    drawing: &PlanarDrawing<R>,
    paper: &Rect<R>,
    tol: &Tolerance<R>,
) -> Result<StraightSkeleton<R>> {
    let bbox = drawing.bounding_box();
    if !(paper.min.x < bbox.min.x
        && paper.min.y < bbox.min.y
        && paper.max.x > bbox.max.x
        && paper.max.y > bbox.max.y)
    {
        return Err(Error::InvalidInput(
            "paper rectangle must strictly contain the drawing".into(),
        ));
    }
    let horizon = paper.diagonal() * cast(2.0);
    let far = paper.inflate(paper.diagonal() * cast(8.0));
    let mut bank = NodeBank::new(tol.eps_geom);
    let mut arcs: Vec<RawArc<R>> = Vec::new();

    for region in drawing.regions(Some(far)) {
        let mut sim = Wavefront::new(drawing, &region, tol, &mut bank)?;
        sim.run(horizon, &mut arcs)?;
    }

    build_skeleton(drawing, paper, tol, bank, arcs)
}

#[derive(Debug, Clone, Copy)]
struct RawArc<R> {
    a: usize,
    b: usize,
    left: usize,
    right: usize,
    source: ArcSource,
    _t: std::marker::PhantomData<R>,
}

/// Content-addressed node store merging positions within the coincidence
/// threshold.
struct NodeBank<R> {
    eps: R,
    nodes: Vec<SkeletonNode<R>>,
}

impl<R: Real> NodeBank<R> {
    fn new(eps: R) -> Self {
        NodeBank { eps, nodes: Vec::new() }
    }

    fn intern(&mut self, position: Point2<R>, time: R, clipped: bool) -> usize {
        let mut best: Option<(R, usize)> = None;
        for (i, n) in self.nodes.iter().enumerate() {
            let d = n.position.distance(position);
            if d <= self.eps && best.map_or(true, |(bd, _)| d < bd) {
                best = Some((d, i));
            }
        }
        match best {
            Some((_, i)) => {
                if clipped && !self.nodes[i].clipped {
                    // Keep the real node.
                }
                i
            }
            None => {
                self.nodes.push(SkeletonNode { position, time, clipped });
                self.nodes.len() - 1
            }
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct SimLine<R> {
    normal: Vec2<R>,
    offset: R,
    face: usize,
}

impl<R: Real> SimLine<R> {
    fn direction(&self) -> Vec2<R> {
        Vec2::new(self.normal.y, -self.normal.x)
    }
}

#[derive(Debug, Clone, Copy)]
struct SimVertex<R> {
    anchor: Point2<R>,
    t0: R,
    vel: Vec2<R>,
    line_in: usize,
    line_out: usize,
    prev: usize,
    next: usize,
    alive: bool,
    reflex: bool,
    ring: u32,
    start_node: usize,
    version: u64,
}

impl<R: Real> SimVertex<R> {
    fn at(&self, t: R) -> Point2<R> {
        self.anchor + self.vel * (t - self.t0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum EventKind {
    /// Ring-adjacent vertices u, w = next(u) meet.
    Collapse { u: usize, w: usize },
    /// Vertex v hits the front of the edge leaving vertex `a`.
    Collision { v: usize, a: usize },
}

#[derive(Debug, Clone, Copy)]
struct Event<R> {
    time: R,
    kind: EventKind,
    stamp_a: u64,
    stamp_b: u64,
    seq: u64,
}

impl<R: Real> PartialEq for Event<R> {
    fn eq(&self, other: &Self) -> bool {
        self.time == other.time && self.seq == other.seq
    }
}
impl<R: Real> Eq for Event<R> {}
impl<R: Real> Ord for Event<R> {
    fn cmp(&self, other: &Self) -> Ordering {
        // Min-heap by time, then by insertion order for determinism.
        other
            .time
            .partial_cmp(&self.time)
            .unwrap_or(Ordering::Equal)
            .then(other.seq.cmp(&self.seq))
    }
}
impl<R: Real> PartialOrd for Event<R> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

struct Wavefront<'a, R: Real> {
    lines: Vec<SimLine<R>>,
    verts: Vec<SimVertex<R>>,
    heap: BinaryHeap<Event<R>>,
    bank: &'a mut NodeBank<R>,
    tol: Tolerance<R>,
    time: R,
    seq: u64,
    next_ring: u32,
    trace: Vec<String>,
    /// Vertices whose outgoing edge changed during the current surgery.
    touched: Vec<usize>,
}

impl<'a, R: Real> Wavefront<'a, R> {
    fn new(
        drawing: &PlanarDrawing<R>,
        region: &Region<R>,
        tol: &Tolerance<R>,
        bank: &'a mut NodeBank<R>,
    ) -> Result<Self> {
        let mut sim = Wavefront {
            lines: Vec::new(),
            verts: Vec::new(),
            heap: BinaryHeap::new(),
            bank,
            tol: *tol,
            time: R::zero(),
            seq: 0,
            next_ring: 0,
            trace: Vec::new(),
            touched: Vec::new(),
        };
        for contour in &region.contours {
            let n = contour.points.len();
            let line_base = sim.lines.len();
            for k in 0..n {
                let a = contour.points[k];
                let b = contour.points[(k + 1) % n];
                let d = (b - a).normalized();
                let normal = d.perp();
                let face = match contour.edges[k] {
                    Some(id) => {
                        // Side: the region is on the left of the walk; for a
                        // forward walk that is the cycle's inner side.
                        let seg = drawing.edge_segment(id);
                        let forward = (seg.b - seg.a).dot(d) > R::zero();
                        face_key(drawing.edge_ordinal(id), !forward)
                    }
                    None => NO_FACE,
                };
                sim.lines.push(SimLine { normal, offset: normal.dot(a.to_vec()), face });
            }
            let ring = sim.next_ring;
            sim.next_ring += 1;
            let vert_base = sim.verts.len();
            for k in 0..n {
                let line_in = line_base + (k + n - 1) % n;
                let line_out = line_base + k;
                let vel = match front_velocity(sim.lines[line_in].normal, sim.lines[line_out].normal)
                {
                    FrontVelocity::Normal(v) | FrontVelocity::Straight(v) => v,
                    FrontVelocity::Pinch => {
                        return Err(Error::InvalidDrawing(
                            "zero-angle spike in region contour".into(),
                        ))
                    }
                };
                let d_in = sim.lines[line_in].direction();
                let d_out = sim.lines[line_out].direction();
                let reflex = d_in.cross(d_out) < -cast::<R>(1e-12);
                let start_node = sim.bank.intern(contour.points[k], R::zero(), false);
                sim.verts.push(SimVertex {
                    anchor: contour.points[k],
                    t0: R::zero(),
                    vel,
                    line_in,
                    line_out,
                    prev: vert_base + (k + n - 1) % n,
                    next: vert_base + (k + 1) % n,
                    alive: true,
                    reflex,
                    ring,
                    start_node,
                    version: 0,
                });
            }
        }
        sim.touched = (0..sim.verts.len()).collect();
        sim.flush(R::zero(), &mut Vec::new())?;
        Ok(sim)
    }

    fn log(&mut self, msg: String) {
        if std::env::var_os("ONECUT_TRACE").is_some() {
            eprintln!("{msg}");
        }
        if self.trace.len() < 400 {
            self.trace.push(msg);
        }
    }

    fn push_event(&mut self, time: R, kind: EventKind, stamp_a: u64, stamp_b: u64) {
        if !time.is_finite() {
            return;
        }
        self.seq += 1;
        self.heap.push(Event { time, kind, stamp_a, stamp_b, seq: self.seq });
    }

    /// After a surgery: merge coincident non-separating neighbour pairs,
    /// then recompute events for every vertex whose outgoing edge changed.
    fn flush(&mut self, t: R, arcs: &mut Vec<RawArc<R>>) -> Result<()> {
        let mut guard = 0usize;
        loop {
            guard += 1;
            if guard > self.verts.len() + 16 {
                return Err(Error::NumericalBreakdown {
                    message: "coincident-pair cleanup did not terminate".into(),
                    trace: self.trace.clone(),
                });
            }
            let mut merge: Option<(usize, usize)> = None;
            for &v in &self.touched {
                if !self.verts[v].alive {
                    continue;
                }
                let w = self.verts[v].next;
                if w == v || !self.verts[w].alive {
                    continue;
                }
                let pv = self.verts[v].at(t);
                let pw = self.verts[w].at(t);
                if pv.distance(pw) > self.tol.eps_geom {
                    continue;
                }
                let d = self.lines[self.verts[v].line_out].direction();
                let rate = (self.verts[w].vel - self.verts[v].vel).dot(d);
                if rate <= cast::<R>(1e-9) {
                    merge = Some((v, w));
                    break;
                }
            }
            match merge {
                Some((v, w)) => self.handle_collapse(v, w, t, arcs)?,
                None => break,
            }
        }
        let mut touched = std::mem::take(&mut self.touched);
        touched.sort_unstable();
        touched.dedup();
        touched.retain(|&v| self.verts[v].alive);
        for &v in &touched {
            self.seed_collapse(v);
            self.seed_collisions_of(v);
        }
        for u in 0..self.verts.len() {
            if !self.verts[u].alive {
                continue;
            }
            for &a in &touched {
                if u != a {
                    self.seed_collision_pair(u, a);
                }
            }
        }
        Ok(())
    }

    fn seed_collapse(&mut self, u: usize) {
        if !self.verts[u].alive {
            return;
        }
        let w = self.verts[u].next;
        if w == u || !self.verts[w].alive {
            return;
        }
        let line = self.lines[self.verts[u].line_out];
        let d = line.direction();
        let s = self.time;
        let gap = (self.verts[w].at(s) - self.verts[u].at(s)).dot(d);
        let rate = (self.verts[w].vel - self.verts[u].vel).dot(d);
        if rate >= -cast::<R>(1e-12) {
            return;
        }
        let t = s - gap / rate;
        if t >= s - self.tol.eps_geom {
            self.push_event(
                t.max(s),
                EventKind::Collapse { u, w },
                self.verts[u].version,
                self.verts[w].version,
            );
        }
    }

    fn seed_collisions_of(&mut self, v: usize) {
        for a in 0..self.verts.len() {
            self.seed_collision_pair(v, a);
        }
    }

    fn seed_collision_pair(&mut self, v: usize, a: usize) {
        if v == a || !self.verts[v].alive || !self.verts[a].alive {
            return;
        }
        let b = self.verts[a].next;
        if b == v || a == self.verts[v].next || a == v {
            return;
        }
        let same_ring = self.verts[v].ring == self.verts[a].ring;
        if same_ring && !self.verts[v].reflex {
            return;
        }
        let line = self.lines[self.verts[a].line_out];
        let vv = &self.verts[v];
        let approach = R::one() - vv.vel.dot(line.normal);
        if approach <= cast(1e-12) {
            return;
        }
        let s = self.time;
        let dist = vv.at(s).to_vec().dot(line.normal) - (line.offset + s);
        let t = s + dist / approach;
        // Interactions at the vertex's own birth instant were already
        // resolved by the hub that created it.
        if t <= vv.t0 + self.tol.eps_geom {
            return;
        }
        if t >= s - self.tol.eps_geom && t.is_finite() {
            self.push_event(
                t.max(s),
                EventKind::Collision { v, a },
                self.verts[v].version,
                self.verts[a].version,
            );
        }
    }

    /// True when every vertex of the ring lies within `eps` of `p` at `t`.
    fn ring_len(&self, start: usize) -> usize {
        let mut n = 1;
        let mut u = self.verts[start].next;
        while u != start && n <= self.verts.len() + 1 {
            n += 1;
            u = self.verts[u].next;
        }
        n
    }

    fn relabel_ring(&mut self, start: usize) {
        let ring = self.next_ring;
        self.next_ring += 1;
        let mut u = start;
        loop {
            self.verts[u].ring = ring;
            u = self.verts[u].next;
            if u == start {
                break;
            }
        }
    }

    fn kill(&mut self, v: usize, node: usize, source: ArcSource, arcs: &mut Vec<RawArc<R>>) {
        let vv = &mut self.verts[v];
        vv.alive = false;
        vv.version += 1;
        let (start, li, lo) = (vv.start_node, vv.line_in, vv.line_out);
        if start != node {
            arcs.push(RawArc {
                a: start,
                b: node,
                left: self.lines[li].face,
                right: self.lines[lo].face,
                source,
                _t: std::marker::PhantomData,
            });
        }
    }

    fn spawn(
        &mut self,
        anchor: Point2<R>,
        t: R,
        line_in: usize,
        line_out: usize,
        prev: usize,
        next: usize,
        ring: u32,
        start_node: usize,
    ) -> Result<(usize, bool)> {
        let d_in = self.lines[line_in].direction();
        let d_out = self.lines[line_out].direction();
        let (vel, pinch) =
            match front_velocity(self.lines[line_in].normal, self.lines[line_out].normal) {
                FrontVelocity::Normal(v) | FrontVelocity::Straight(v) => (v, false),
                FrontVelocity::Pinch => (Vec2::new(R::zero(), R::zero()), true),
            };
        let id = self.verts.len();
        self.verts.push(SimVertex {
            anchor,
            t0: t,
            vel,
            line_in,
            line_out,
            prev,
            next,
            alive: true,
            reflex: d_in.cross(d_out) < -cast::<R>(1e-12),
            ring,
            start_node,
            version: 0,
        });
        self.verts[prev].next = id;
        self.verts[prev].version += 1;
        self.verts[next].prev = id;
        self.touched.push(prev);
        self.touched.push(id);
        Ok((id, pinch))
    }

    fn run(&mut self, horizon: R, arcs: &mut Vec<RawArc<R>>) -> Result<()> {
        let cap = 400 * (self.verts.len() + 8);
        let mut processed = 0usize;
        while let Some(ev) = self.heap.pop() {
            if ev.time > horizon {
                break;
            }
            if !self.event_fresh(&ev) {
                continue;
            }
            if ev.time < self.time - self.tol.eps_geom {
                return Err(Error::NumericalBreakdown {
                    message: format!(
                        "event time regressed from {} to {}",
                        self.time, ev.time
                    ),
                    trace: self.trace.clone(),
                });
            }
            processed += 1;
            if processed > cap {
                return Err(Error::NumericalBreakdown {
                    message: "wavefront event cap exceeded".into(),
                    trace: self.trace.clone(),
                });
            }
            self.time = self.time.max(ev.time);
            match ev.kind {
                EventKind::Collapse { u, w } => self.handle_collapse(u, w, ev.time, arcs)?,
                EventKind::Collision { v, a } => self.handle_collision(v, a, ev.time, arcs)?,
            }
        }
        // Whatever is still alive gets a clipped stub arc at the horizon.
        for v in 0..self.verts.len() {
            if self.verts[v].alive {
                let pos = self.verts[v].at(horizon);
                let node = self.bank.intern(pos, horizon, true);
                self.kill(v, node, ArcSource::Clip, arcs);
            }
        }
        Ok(())
    }

    fn event_fresh(&self, ev: &Event<R>) -> bool {
        match ev.kind {
            EventKind::Collapse { u, w } => {
                // Collapse geometry depends only on u's outgoing edge and
                // the two trajectories, which never mutate while alive.
                self.verts[u].alive
                    && self.verts[w].alive
                    && self.verts[u].next == w
                    && self.verts[u].version == ev.stamp_a
            }
            EventKind::Collision { v, a } => {
                self.verts[v].alive
                    && self.verts[a].alive
                    && self.verts[v].version == ev.stamp_a
                    && self.verts[a].version == ev.stamp_b
            }
        }
    }

    fn handle_collapse(
        &mut self,
        u: usize,
        w: usize,
        t: R,
        arcs: &mut Vec<RawArc<R>>,
    ) -> Result<()> {
        let pu = self.verts[u].at(t);
        let pw = self.verts[w].at(t);
        if pu.distance(pw) > self.tol.eps_geom * cast(64.0) {
            // Numerically stale; let fresher events act.
            return Ok(());
        }
        let p = pu.midpoint(pw);
        self.log(format!("t={t:.6} collapse ({u},{w}) at ({:.4},{:.4})", p.x, p.y));
        self.handle_hub(t, p, arcs)
    }

    fn handle_collision(
        &mut self,
        v: usize,
        a: usize,
        t: R,
        arcs: &mut Vec<RawArc<R>>,
    ) -> Result<()> {
        let b = self.verts[a].next;
        if b == v || a == self.verts[v].next || !self.verts[b].alive {
            return Ok(());
        }
        let line = self.lines[self.verts[a].line_out];
        let pv = self.verts[v].at(t);
        // Span check along the front.
        let d = line.direction();
        let s_v = pv.to_vec().dot(d);
        let s_a = self.verts[a].at(t).to_vec().dot(d);
        let s_b = self.verts[b].at(t).to_vec().dot(d);
        let eps = self.tol.eps_geom * cast(4.0);
        if s_v < s_a - eps || s_v > s_b + eps {
            return Ok(());
        }
        // On-line check (defensive; the time solve should guarantee it).
        let off = pv.to_vec().dot(line.normal) - (line.offset + t);
        if off.abs() > self.tol.eps_geom * cast(64.0) {
            return Ok(());
        }
        let same_ring = self.verts[v].ring == self.verts[a].ring;
        if same_ring && !self.verts[v].reflex {
            return Ok(());
        }
        self.log(format!(
            "t={t:.6} {} v{v} into edge ({a},{b}) at ({:.4},{:.4})",
            if same_ring { "split" } else { "merge" },
            pv.x,
            pv.y
        ));
        self.handle_hub(t, pv, arcs)
    }

    /// Process everything that happens at one point and time: all wavefront
    /// vertices there die at a shared node, fronts running through the point
    /// are cut, and the remaining front spokes are re-linked pairwise in
    /// angular order (region wedges stay on the left).
    fn handle_hub(&mut self, t: R, p: Point2<R>, arcs: &mut Vec<RawArc<R>>) -> Result<()> {
        let eps_hub = self.tol.eps_geom * cast(64.0);
        let hub: Vec<usize> = (0..self.verts.len())
            .filter(|&x| self.verts[x].alive && self.verts[x].at(t).distance(p) <= eps_hub)
            .collect();
        if hub.is_empty() {
            return Ok(());
        }
        #[derive(Clone, Copy)]
        struct Spoke {
            line: usize,
            far: usize,
            entering: bool,
            angle: f64,
        }
        let mut spokes: Vec<Spoke> = Vec::new();
        let push_spoke = |sim: &Wavefront<'a, R>, spokes: &mut Vec<Spoke>, line: usize, far: usize, entering: bool| {
            let dir = sim.verts[far].at(t) - p;
            spokes.push(Spoke { line, far, entering, angle: dir.angle().to_f64().unwrap() });
        };
        for &x in &hub {
            let pr = self.verts[x].prev;
            if !hub.contains(&pr) {
                push_spoke(self, &mut spokes, self.verts[x].line_in, pr, true);
            }
            let nx = self.verts[x].next;
            if !hub.contains(&nx) {
                push_spoke(self, &mut spokes, self.verts[x].line_out, nx, false);
            }
        }
        // Fronts running straight through the hub get cut into two spokes.
        for a in 0..self.verts.len() {
            if !self.verts[a].alive || hub.contains(&a) {
                continue;
            }
            let b = self.verts[a].next;
            if !self.verts[b].alive || hub.contains(&b) || b == a {
                continue;
            }
            let line = self.lines[self.verts[a].line_out];
            let off = p.to_vec().dot(line.normal) - (line.offset + t);
            if off.abs() > eps_hub {
                continue;
            }
            let d = line.direction();
            let s_p = p.to_vec().dot(d);
            let s_a = self.verts[a].at(t).to_vec().dot(d);
            let s_b = self.verts[b].at(t).to_vec().dot(d);
            if s_p <= s_a + eps_hub || s_p >= s_b - eps_hub {
                continue;
            }
            let li = self.verts[a].line_out;
            push_spoke(self, &mut spokes, li, a, true);
            push_spoke(self, &mut spokes, li, b, false);
        }
        let node = self.bank.intern(p, t, false);
        for &x in &hub {
            self.kill(x, node, ArcSource::EdgeEvent, arcs);
        }
        if spokes.is_empty() {
            return self.flush(t, arcs);
        }
        if spokes.len() % 2 != 0 {
            return Err(Error::NumericalBreakdown {
                message: format!("hub with odd spoke count {}", spokes.len()),
                trace: self.trace.clone(),
            });
        }
        // Counterclockwise order; ties broken by role, trying both ways.
        let sorted = |enter_first: bool| {
            let mut sp = spokes.clone();
            sp.sort_by(|x, y| {
                x.angle
                    .partial_cmp(&y.angle)
                    .unwrap()
                    .then_with(|| (x.entering == enter_first).cmp(&(y.entering == enter_first)).reverse())
            });
            sp
        };
        let alternates = |sp: &[Spoke]| {
            (0..sp.len()).all(|i| sp[i].entering != sp[(i + 1) % sp.len()].entering)
        };
        let mut sp = sorted(true);
        if !alternates(&sp) {
            sp = sorted(false);
        }
        if !alternates(&sp) {
            return Err(Error::NumericalBreakdown {
                message: "hub spokes do not alternate".into(),
                trace: self.trace.clone(),
            });
        }
        // Each leaving spoke pairs with the counterclockwise-next entering
        // spoke; the wedge between them is a surviving region corner.
        let n = sp.len();
        let mut new_ids = Vec::new();
        let mut pinched = Vec::new();
        for i in 0..n {
            if sp[i].entering {
                continue;
            }
            let e = sp[(i + 1) % n];
            debug_assert!(e.entering);
            let l = sp[i];
            let ring = self.verts[e.far].ring;
            let (id, pinch) = self.spawn(p, t, e.line, l.line, e.far, l.far, ring, node)?;
            new_ids.push(id);
            if pinch {
                pinched.push(id);
            }
        }
        // Rings may have been split or merged arbitrarily: relabel from each
        // new vertex.
        let mut labeled: Vec<u32> = Vec::new();
        for &id in &new_ids {
            if !labeled.contains(&self.verts[id].ring) {
                self.relabel_ring(id);
                labeled.push(self.verts[id].ring);
            }
        }
        for id in pinched {
            if self.verts[id].alive {
                self.handle_pinch(id, t, arcs)?;
            }
        }
        self.flush(t, arcs)
    }

    /// Annihilate the antiparallel coincident fronts meeting at `x`.
    fn handle_pinch(&mut self, x: usize, t: R, arcs: &mut Vec<RawArc<R>>) -> Result<()> {
        let mut x = x;
        let mut guard = 0;
        loop {
            guard += 1;
            if guard > self.verts.len() + 8 {
                return Err(Error::NumericalBreakdown {
                    message: "pinch cascade did not terminate".into(),
                    trace: self.trace.clone(),
                });
            }
            let ring_len = self.ring_len(x);
            let node_x = self.bank.intern(self.verts[x].at(t), t, false);
            let (prev, next) = (self.verts[x].prev, self.verts[x].next);
            self.log(format!("t={t:.6} pinch at v{x} (ring {ring_len}, x at ({:.4},{:.4}))", self.verts[x].at(t).x, self.verts[x].at(t).y));
            if ring_len <= 2 {
                let other = next;
                let node_o = self.bank.intern(self.verts[other].at(t), t, false);
                let (fl, fr) =
                    (self.lines[self.verts[x].line_in].face, self.lines[self.verts[x].line_out].face);
                if node_x != node_o {
                    arcs.push(RawArc {
                        a: node_x,
                        b: node_o,
                        left: fl,
                        right: fr,
                        source: ArcSource::Annihilation,
                        _t: std::marker::PhantomData,
                    });
                }
                self.kill(x, node_x, ArcSource::Annihilation, arcs);
                if other != x {
                    self.kill(other, node_o, ArcSource::Annihilation, arcs);
                }
                return Ok(());
            }
            let d0 = self.lines[self.verts[x].line_in].direction();
            let sx = self.verts[x].at(t).to_vec().dot(d0);
            let sp = self.verts[prev].at(t).to_vec().dot(d0);
            let sn = self.verts[next].at(t).to_vec().dot(d0);
            let dp = (sp - sx).abs();
            let dn = (sn - sx).abs();
            let eps = self.tol.eps_geom * cast(4.0);
            let (fl, fr) =
                (self.lines[self.verts[x].line_in].face, self.lines[self.verts[x].line_out].face);
            let emit_ridge = |bank: &mut NodeBank<R>, arcs: &mut Vec<RawArc<R>>, far: Point2<R>| {
                let node_far = bank.intern(far, t, false);
                if node_far != node_x {
                    arcs.push(RawArc {
                        a: node_x,
                        b: node_far,
                        left: fl,
                        right: fr,
                        source: ArcSource::Annihilation,
                        _t: std::marker::PhantomData,
                    });
                }
                node_far
            };
            if (dp - dn).abs() <= eps {
                // Both fronts end together: vertex-vertex at the far end.
                let far = self.verts[prev].at(t).midpoint(self.verts[next].at(t));
                let node_far = emit_ridge(self.bank, arcs, far);
                let (ppv, nnx) = (self.verts[prev].prev, self.verts[next].next);
                let (li, lo) = (self.verts[prev].line_in, self.verts[next].line_out);
                let ring = self.verts[x].ring;
                self.kill(x, node_x, ArcSource::Annihilation, arcs);
                self.kill(prev, node_far, ArcSource::Annihilation, arcs);
                self.kill(next, node_far, ArcSource::Annihilation, arcs);
                if ring_len == 3 {
                    return Ok(());
                }
                if ppv == next || nnx == prev {
                    // Degenerate leftovers; close out.
                    return Ok(());
                }
                let (z, pinch) = self.spawn(far, t, li, lo, ppv, nnx, ring, node_far)?;
                if self.ring_len(z) <= 2 {
                    let other = self.verts[z].next;
                    let node_o = self.bank.intern(self.verts[other].at(t), t, false);
                    let node_z = self.bank.intern(self.verts[z].at(t), t, false);
                    if node_z != node_o {
                        arcs.push(RawArc {
                            a: node_z,
                            b: node_o,
                            left: self.lines[self.verts[z].line_in].face,
                            right: self.lines[self.verts[z].line_out].face,
                            source: ArcSource::Annihilation,
                            _t: std::marker::PhantomData,
                        });
                        // Keep simulating two-vertex lens rings unless the
                        // fronts are antiparallel.
                    }
                    if pinch {
                        self.kill(z, node_z, ArcSource::Annihilation, arcs);
                        if other != z {
                            self.kill(other, node_o, ArcSource::Annihilation, arcs);
                        }
                        return Ok(());
                    }
                }
                if pinch {
                    x = z;
                    continue;
                }
                return Ok(());
            }
            let (victim, keep_side_next) = if dp < dn { (prev, true) } else { (next, false) };
            let far = self.verts[victim].at(t);
            let node_far = emit_ridge(self.bank, arcs, far);
            let ring = self.verts[x].ring;
            let (li, lo, zp, zn) = if keep_side_next {
                // The incoming front ends at prev; the outgoing front
                // continues past it.
                (
                    self.verts[victim].line_in,
                    self.verts[x].line_out,
                    self.verts[victim].prev,
                    next,
                )
            } else {
                (
                    self.verts[x].line_in,
                    self.verts[victim].line_out,
                    prev,
                    self.verts[victim].next,
                )
            };
            self.kill(x, node_x, ArcSource::Annihilation, arcs);
            self.kill(victim, node_far, ArcSource::Annihilation, arcs);
            if zp == zn {
                // Everything else is gone.
                return Ok(());
            }
            let (z, pinch) = self.spawn(far, t, li, lo, zp, zn, ring, node_far)?;
            if pinch {
                x = z;
                continue;
            }
            return Ok(());
        }
    }
}

/// Assemble nodes/arcs plus the face complex from the simulation output.
fn build_skeleton<R: Real>(
    drawing: &PlanarDrawing<R>,
    paper: &Rect<R>,
    tol: &Tolerance<R>,
    bank: NodeBank<R>,
    raw_arcs: Vec<RawArc<R>>,
) -> Result<StraightSkeleton<R>> {
    let nodes = bank.nodes;
    // Dedup arcs (symmetric pairs can be emitted twice by ring closures).
    let mut arcs: Vec<SkeletonArc<R>> = Vec::new();
    let mut seen: std::collections::HashSet<(usize, usize)> = std::collections::HashSet::new();
    for ra in &raw_arcs {
        if ra.a == ra.b {
            continue;
        }
        let key = (ra.a.min(ra.b), ra.a.max(ra.b));
        if !seen.insert(key) {
            continue;
        }
        arcs.push(SkeletonArc {
            node_a: ra.a,
            node_b: ra.b,
            left_face: ra.left,
            right_face: ra.right,
            source: ra.source,
            _marker: std::marker::PhantomData,
        });
    }

    // Materiality and inward lines per face key.
    let edge_count = drawing.edge_count();
    let mut face_lines: Vec<Option<Line2<R>>> = vec![None; 2 * edge_count];
    let mut face_interior = vec![false; 2 * edge_count];
    let depth_of = |cycle: usize| {
        // Depth = number of cycles strictly containing a representative.
        let probe = drawing.cycles()[cycle][0];
        let mut d = 0;
        for (j, c) in drawing.cycles().iter().enumerate() {
            if j != cycle {
                continue;
            }
            let _ = c;
            let _ = probe;
            d += 0;
        }
        d
    };
    let _ = depth_of;
    for (id, seg) in drawing.edges() {
        let ordinal = drawing.edge_ordinal(id);
        let d = (seg.b - seg.a).normalized();
        let inner_normal = d.perp();
        let line_inner = Line2 { normal: inner_normal, offset: inner_normal.dot(seg.a.to_vec()) };
        let line_outer = Line2 { normal: -inner_normal, offset: (-inner_normal).dot(seg.a.to_vec()) };
        face_lines[face_key(ordinal, false)] = Some(line_inner);
        face_lines[face_key(ordinal, true)] = Some(line_outer);
        let depth = cycle_depth(drawing, id.cycle);
        face_interior[face_key(ordinal, false)] = depth % 2 == 0;
        face_interior[face_key(ordinal, true)] = depth % 2 == 1;
    }

    // Face polygons: arrangement of drawing edges + clipped arcs + paper.
    let mut inputs: Vec<LabeledSegment<R>> = Vec::new();
    let mut meta: Vec<SegSource> = Vec::new();
    for (id, seg) in drawing.edges() {
        meta.push(SegSource::Cut { ordinal: drawing.edge_ordinal(id) });
        inputs.push(LabeledSegment { segment: seg, label: (meta.len() - 1) as u32 });
    }
    for (ai, arc) in arcs.iter().enumerate() {
        let seg = Segment2::new(nodes[arc.node_a].position, nodes[arc.node_b].position);
        if let Some(clipped) = paper.clip_segment(&seg) {
            if clipped.length() > tol.eps_geom {
                meta.push(SegSource::Arc { index: ai });
                inputs.push(LabeledSegment { segment: clipped, label: (meta.len() - 1) as u32 });
            }
        }
    }
    for seg in paper.edges() {
        meta.push(SegSource::Paper);
        inputs.push(LabeledSegment { segment: seg, label: (meta.len() - 1) as u32 });
    }
    let snapped = snap_endpoints(&inputs, tol);
    let sub = PlanarSubdivision::build_labeled(&snapped, tol)?;

    let mut faces: Vec<SkeletonFace<R>> = Vec::new();
    for f in 0..sub.faces.len() {
        let Some(outer_cycle) = sub.faces[f].outer else { continue };
        let walk = sub.cycle_half_edges(outer_cycle);
        let polygon: Vec<Point2<R>> = walk.iter().map(|&h| sub.origin_point(h)).collect();
        let mut boundary = Vec::with_capacity(walk.len());
        let mut key_votes: Vec<usize> = Vec::new();
        for &h in &walk {
            let e = &sub.edges[sub.half_edges[h].edge];
            let h_forward = h % 2 == 0;
            let mut kind = FaceBoundary::Paper;
            let mut is_cut = false;
            let mut is_paper = false;
            let mut arc_key: Option<usize> = None;
            for &(label, fwd) in &e.labels {
                match meta[label as usize] {
                    SegSource::Cut { ordinal } => {
                        is_cut = true;
                        // Face lies left of h: same direction as the cycle
                        // walk means the inner side.
                        let same_dir = fwd == h_forward;
                        key_votes.push(face_key(ordinal, !same_dir));
                    }
                    SegSource::Arc { index } => {
                        let arc = &arcs[index];
                        let same_dir = fwd == h_forward;
                        let (this_side, other_side) = if same_dir {
                            (arc.left_face, arc.right_face)
                        } else {
                            (arc.right_face, arc.left_face)
                        };
                        if this_side != NO_FACE {
                            key_votes.push(this_side);
                        }
                        arc_key = Some(other_side);
                    }
                    SegSource::Paper => {
                        is_paper = true;
                    }
                }
            }
            if is_cut {
                kind = FaceBoundary::Cut;
            } else if let Some(other) = arc_key {
                kind = FaceBoundary::Arc(other);
            } else if is_paper {
                kind = FaceBoundary::Paper;
            }
            boundary.push(kind);
        }
        // Majority vote for the face key (votes can disagree only through
        // numerical noise on tiny slivers).
        key_votes.sort_unstable();
        let mut key = NO_FACE;
        let mut best_run = 0;
        let mut i = 0;
        while i < key_votes.len() {
            let mut j = i;
            while j < key_votes.len() && key_votes[j] == key_votes[i] {
                j += 1;
            }
            if j - i > best_run {
                best_run = j - i;
                key = key_votes[i];
            }
            i = j;
        }
        if key == NO_FACE {
            continue;
        }
        let edge = drawing.edge_by_ordinal(key / 2);
        faces.push(SkeletonFace {
            edge,
            key,
            interior: face_interior[key],
            polygon,
            boundary,
        });
    }

    Ok(StraightSkeleton { nodes, arcs, faces, paper: *paper, face_lines, face_interior })
}

fn cycle_depth<R: Real>(drawing: &PlanarDrawing<R>, cycle: usize) -> usize {
    use crate::geom::{point_in_cycle_unchecked, PointLocation};
    let probe = drawing.cycles()[cycle][0];
    let mut d = 0;
    for (j, c) in drawing.cycles().iter().enumerate() {
        if j == cycle {
            continue;
        }
        if point_in_cycle_unchecked(probe, c, drawing.tolerance().eps_geom)
            == PointLocation::Inside
        {
            d += 1;
        }
    }
    d
}

#[derive(Debug, Clone, Copy)]
enum SegSource {
    Cut { ordinal: usize },
    Arc { index: usize },
    Paper,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::offset::offset_wavefront;

    fn pt(x: f64, y: f64) -> Point2<f64> {
        Point2::new(x, y)
    }

    fn skeleton_of(poly: Vec<Point2<f64>>) -> (PlanarDrawing<f64>, StraightSkeleton<f64>) {
        let d = PlanarDrawing::from_polygon(poly).unwrap();
        let paper = d.default_paper();
        let tol = *d.tolerance();
        let s = compute_skeleton(&d, &paper, &tol).unwrap();
        (d, s)
    }

    fn interior_node_near(s: &StraightSkeleton<f64>, p: Point2<f64>, t: f64) -> bool {
        s.nodes
            .iter()
            .any(|n| !n.clipped && n.position.distance(p) < 1e-7 && (n.time - t).abs() < 1e-7)
    }

    #[test]
    fn square_skeleton_meets_at_center() {
        let (_, s) = skeleton_of(fixtures::square::<f64>());
        assert!(interior_node_near(&s, pt(0.5, 0.5), 0.5), "nodes: {:?}", s.nodes);
        // Four corner arcs to the center.
        let center = s
            .nodes
            .iter()
            .position(|n| n.position.distance(pt(0.5, 0.5)) < 1e-9)
            .unwrap();
        let incident = s
            .arcs
            .iter()
            .filter(|a| {
                (a.node_a == center || a.node_b == center)
                    && s.key_is_interior(a.left_face)
                    && s.key_is_interior(a.right_face)
            })
            .count();
        assert_eq!(incident, 4);
    }

    #[test]
    fn rectangle_skeleton_has_ridge() {
        let (_, s) = skeleton_of(fixtures::rectangle::<f64>());
        assert!(interior_node_near(&s, pt(1.0, 1.0), 1.0), "nodes: {:?}", s.nodes);
        assert!(interior_node_near(&s, pt(3.0, 1.0), 1.0));
        // Ridge arc between the two.
        let na = s.nodes.iter().position(|n| n.position.distance(pt(1.0, 1.0)) < 1e-9).unwrap();
        let nb = s.nodes.iter().position(|n| n.position.distance(pt(3.0, 1.0)) < 1e-9).unwrap();
        assert!(s
            .arcs
            .iter()
            .any(|a| (a.node_a == na && a.node_b == nb) || (a.node_a == nb && a.node_b == na)));
    }

    #[test]
    fn interior_face_count_matches_edge_count() {
        for poly in [
            fixtures::square::<f64>(),
            fixtures::rectangle::<f64>(),
            fixtures::l_polygon::<f64>(),
            fixtures::h_polygon::<f64>(),
            fixtures::regular_ngon::<f64>(5),
        ] {
            let n = poly.len();
            let (_, s) = skeleton_of(poly);
            let interior_faces = s.faces.iter().filter(|f| f.interior).count();
            assert_eq!(interior_faces, n);
        }
    }

    #[test]
    fn faces_partition_the_paper() {
        for poly in [
            fixtures::square::<f64>(),
            fixtures::l_polygon::<f64>(),
            fixtures::h_polygon::<f64>(),
        ] {
            let (d, s) = skeleton_of(poly);
            let total: f64 = s.faces.iter().map(|f| crate::geom::signed_area(&f.polygon)).sum();
            let paper_area = s.paper.width() * s.paper.height();
            assert!(
                (total - paper_area).abs() < 1e-6 * paper_area,
                "faces {} vs paper {} for {:?}",
                total,
                paper_area,
                d.cycles()[0].len()
            );
        }
    }

    #[test]
    fn node_times_are_edge_distances() {
        // Equidistance: a node's time equals its distance to every drawing
        // edge bounding an incident face.
        for poly in [
            fixtures::square::<f64>(),
            fixtures::rectangle::<f64>(),
            fixtures::l_polygon::<f64>(),
            fixtures::h_polygon::<f64>(),
        ] {
            let (d, s) = skeleton_of(poly);
            let tol = d.tolerance().eps_verify;
            for arc in &s.arcs {
                if arc.source == ArcSource::Clip {
                    continue;
                }
                for key in [arc.left_face, arc.right_face] {
                    if key == NO_FACE {
                        continue;
                    }
                    let seg = d.edge_segment(d.edge_by_ordinal(key / 2));
                    let line = Line2::from_segment(&seg);
                    for ni in [arc.node_a, arc.node_b] {
                        let n = &s.nodes[ni];
                        if n.clipped {
                            continue;
                        }
                        let dist = line.signed_distance(n.position).abs();
                        assert!(
                            (dist - n.time).abs() <= tol * 10.0,
                            "node {:?} time {} vs dist {} to edge {:?}",
                            n.position,
                            n.time,
                            dist,
                            seg
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn wavefront_positions_lie_on_offset_oracle() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        for poly in [
            fixtures::square::<f64>(),
            fixtures::rectangle::<f64>(),
            fixtures::l_polygon::<f64>(),
            fixtures::h_polygon::<f64>(),
            fixtures::regular_ngon::<f64>(7),
        ] {
            let d = PlanarDrawing::from_polygon(poly).unwrap();
            let paper = d.default_paper();
            let tol = *d.tolerance();
            let s = compute_skeleton(&d, &paper, &tol).unwrap();
            let t_max = s.max_interior_time();
            for _ in 0..20 {
                let t: f64 = rng.gen_range(0.0..t_max * 0.999);
                let cycles = offset_wavefront(&d, t).unwrap();
                for arc in &s.arcs {
                    if !(s.key_is_interior(arc.left_face) && s.key_is_interior(arc.right_face)) {
                        continue;
                    }
                    let (ta, tb) = (s.nodes[arc.node_a].time, s.nodes[arc.node_b].time);
                    let (lo, hi) = if ta <= tb { (ta, tb) } else { (tb, ta) };
                    if t < lo || t > hi || (hi - lo) < 1e-12 {
                        continue;
                    }
                    let f = (t - ta) / (tb - ta);
                    let pa = s.nodes[arc.node_a].position;
                    let pb = s.nodes[arc.node_b].position;
                    let p = pa + (pb - pa) * f;
                    let dist = cycles
                        .iter()
                        .flat_map(|c| {
                            (0..c.len()).map(|i| {
                                Segment2::new(c[i], c[(i + 1) % c.len()]).distance_to(p)
                            })
                        })
                        .fold(f64::INFINITY, f64::min);
                    assert!(
                        dist <= 1e-7 * d.diameter(),
                        "arc point {p:?} at t={t} off the oracle by {dist}"
                    );
                }
            }
        }
    }

    #[test]
    fn h_polygon_interior_disconnects_at_crossbar() {
        let (_, s) = skeleton_of(fixtures::h_polygon::<f64>());
        // Crossbar ridge: annihilation arc at y = 2 between the connector
        // nodes born at t = 0.35.
        assert!(interior_node_near(&s, pt(0.65, 2.0), 0.35), "nodes: {:#?}", s.nodes.len());
        assert!(interior_node_near(&s, pt(2.35, 2.0), 0.35));
        // Bars collapse at t = 0.5 into vertical ridges.
        assert!(interior_node_near(&s, pt(0.5, 0.5), 0.5));
        assert!(interior_node_near(&s, pt(0.5, 3.5), 0.5));
        assert!(interior_node_near(&s, pt(2.5, 0.5), 0.5));
        // The connectors keep moving into the bars after the disconnection:
        // nodes at (0.5, 2) with time 0.5.
        assert!(interior_node_near(&s, pt(0.5, 2.0), 0.5));
        assert!(interior_node_near(&s, pt(2.5, 2.0), 0.5));
    }

    #[test]
    fn paper_must_contain_drawing() {
        let d = PlanarDrawing::from_polygon(fixtures::square::<f64>()).unwrap();
        let tol = *d.tolerance();
        let bad = Rect::new(pt(0.2, 0.2), pt(0.8, 0.8));
        assert!(compute_skeleton(&d, &bad, &tol).is_err());
    }

    #[test]
    fn every_drawing_vertex_is_a_time_zero_node() {
        let (d, s) = skeleton_of(fixtures::h_polygon::<f64>());
        for p in &d.cycles()[0] {
            assert!(s
                .nodes
                .iter()
                .any(|n| n.position.distance(*p) < 1e-9 && n.time == 0.0));
        }
    }
}
