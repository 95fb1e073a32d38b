//! Flat-folded state of a crease pattern and single-cut verification.
//!
//! Faces of the pattern subdivision get planar isometries by walking the
//! adjacency graph from a base face: crossing a crease composes a reflection
//! across its line, crossing a bare cut changes nothing (the sheet is folded
//! first, cut last). Path independence is equivalent to the Kawasaki
//! condition holding at every interior vertex.

use crate::drawing::PlanarDrawing;
use crate::error::{Error, Result};
use crate::foldcut::CreasePattern;
use crate::geom::{cast, Line2, Point2, Real, Tolerance, Vec2};

/// Orthogonal linear part plus translation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanarIsometry<R> {
    /// Row-major 2x2 matrix.
    pub linear: [[R; 2]; 2],
    pub translation: Vec2<R>,
}

impl<R: Real> PlanarIsometry<R> {
    pub fn identity() -> Self {
        PlanarIsometry {
            linear: [[R::one(), R::zero()], [R::zero(), R::one()]],
            translation: Vec2::new(R::zero(), R::zero()),
        }
    }

    /// Reflection across a line.
    pub fn reflection(line: &Line2<R>) -> Self {
        let n = line.normal;
        let two = cast::<R>(2.0);
        let linear = [
            [R::one() - two * n.x * n.x, -(two * n.x * n.y)],
            [-(two * n.x * n.y), R::one() - two * n.y * n.y],
        ];
        let translation = n * (two * line.offset);
        PlanarIsometry { linear, translation }
    }

    pub fn apply(&self, p: Point2<R>) -> Point2<R> {
        Point2::new(
            self.linear[0][0] * p.x + self.linear[0][1] * p.y + self.translation.x,
            self.linear[1][0] * p.x + self.linear[1][1] * p.y + self.translation.y,
        )
    }

    pub fn apply_vec(&self, v: Vec2<R>) -> Vec2<R> {
        Vec2::new(
            self.linear[0][0] * v.x + self.linear[0][1] * v.y,
            self.linear[1][0] * v.x + self.linear[1][1] * v.y,
        )
    }

    /// `self` after `other`: (self ∘ other)(p) = self(other(p)).
    pub fn compose(&self, other: &PlanarIsometry<R>) -> Self {
        let a = &self.linear;
        let b = &other.linear;
        let linear = [
            [a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]],
            [a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]],
        ];
        let translation = self.apply_vec(other.translation) + self.translation;
        PlanarIsometry { linear, translation }
    }

    pub fn inverse(&self) -> Self {
        // Orthogonal linear part: inverse = transpose.
        let linear = [
            [self.linear[0][0], self.linear[1][0]],
            [self.linear[0][1], self.linear[1][1]],
        ];
        let inv = PlanarIsometry { linear, translation: Vec2::new(R::zero(), R::zero()) };
        let translation = -inv.apply_vec(self.translation);
        PlanarIsometry { linear, translation }
    }

    pub fn determinant(&self) -> R {
        self.linear[0][0] * self.linear[1][1] - self.linear[0][1] * self.linear[1][0]
    }

    /// Max deviation of `linear * linear^T` from the identity.
    pub fn orthogonality_defect(&self) -> R {
        let l = &self.linear;
        let m00 = l[0][0] * l[0][0] + l[0][1] * l[0][1] - R::one();
        let m11 = l[1][0] * l[1][0] + l[1][1] * l[1][1] - R::one();
        let m01 = l[0][0] * l[1][0] + l[0][1] * l[1][1];
        m00.abs().max(m11.abs()).max(m01.abs())
    }

    fn distance_to(&self, other: &PlanarIsometry<R>) -> R {
        let mut d = (self.translation - other.translation).norm();
        for i in 0..2 {
            for j in 0..2 {
                d = d.max((self.linear[i][j] - other.linear[i][j]).abs());
            }
        }
        d
    }
}

/// The flat-folded state: one isometry per bounded face of the pattern.
#[derive(Debug, Clone)]
pub struct FoldedState<'p, R> {
    pub pattern: &'p CreasePattern<R>,
    pub base_face: usize,
    /// Transform per subdivision face id; `None` for the unbounded face.
    pub transforms: Vec<Option<PlanarIsometry<R>>>,
    /// Set by a successful verification: a point on L and its unit
    /// direction.
    pub alignment_line: Option<(Point2<R>, Vec2<R>)>,
}

/// Successful single-cut verification.
#[derive(Debug, Clone, Copy)]
pub struct AlignmentReport<R> {
    pub point: Point2<R>,
    pub direction: Vec2<R>,
    pub max_deviation: R,
    /// True when a crease image also lies on L (the cut falls along folds).
    pub fold_on_cut_line: bool,
}

/// Kawasaki defect at a subdivision vertex: distance of the ordered product
/// of crease reflections from the identity. Cuts are transparent.
pub fn kawasaki_defect<R: Real>(pattern: &CreasePattern<R>, vertex: usize) -> R {
    let sub = &pattern.subdivision;
    let mut product = PlanarIsometry::identity();
    for &h in sub.outgoing_at(vertex) {
        let e = sub.half_edges[h].edge;
        if !pattern.edge_roles[e].crease {
            continue;
        }
        let a = sub.vertices[sub.edges[e].v0];
        let b = sub.vertices[sub.edges[e].v1];
        let line = Line2::through(a, b - a);
        product = PlanarIsometry::reflection(&line).compose(&product);
    }
    product.distance_to(&PlanarIsometry::identity())
}

/// Assign face isometries by traversal from `base_face`, verifying path
/// independence via the Kawasaki condition at every interior vertex.
pub fn compute_fold_map<R: Real>(
    pattern: &CreasePattern<R>,
    base_face: usize,
) -> Result<FoldedState<'_, R>> {
    let sub = &pattern.subdivision;
    if base_face >= sub.faces.len() || sub.faces[base_face].outer.is_none() {
        return Err(Error::InvalidInput(format!("base face {base_face} is not a bounded face")));
    }
    let kaw_eps = cast::<R>(Tolerance::<R>::REL_VERIFY);

    // Interior vertices: not on the paper border.
    for v in 0..sub.vertices.len() {
        let on_paper = sub
            .outgoing_at(v)
            .iter()
            .any(|&h| pattern.edge_roles[sub.half_edges[h].edge].paper);
        if on_paper {
            continue;
        }
        let defect = kawasaki_defect(pattern, v);
        if defect > kaw_eps {
            return Err(Error::NotFlatFoldable {
                vertex: v,
                defect: defect.to_f64().unwrap(),
            });
        }
    }

    let outer = sub.outer_face();
    let mut transforms: Vec<Option<PlanarIsometry<R>>> = vec![None; sub.faces.len()];
    transforms[base_face] = Some(PlanarIsometry::identity());
    let mut queue = std::collections::VecDeque::new();
    queue.push_back(base_face);
    while let Some(f) = queue.pop_front() {
        let t_f = transforms[f].unwrap();
        let cycles: Vec<usize> = sub.faces[f]
            .outer
            .iter()
            .copied()
            .chain(sub.faces[f].holes.iter().copied())
            .collect();
        for c in cycles {
            for h in sub.cycle_half_edges(c) {
                let e = sub.half_edges[h].edge;
                let role = pattern.edge_roles[e];
                let g = sub.face_of(sub.twin(h));
                if g == outer || role.paper {
                    continue;
                }
                let t_g = if role.crease {
                    let a = sub.vertices[sub.edges[e].v0];
                    let b = sub.vertices[sub.edges[e].v1];
                    let line = Line2::through(a, b - a);
                    t_f.compose(&PlanarIsometry::reflection(&line))
                } else {
                    t_f
                };
                match transforms[g] {
                    None => {
                        transforms[g] = Some(t_g);
                        queue.push_back(g);
                    }
                    Some(existing) => {
                        let d = existing.distance_to(&t_g);
                        if d > pattern.tol.eps_verify {
                            let v = sub.edges[e].v0;
                            return Err(Error::NotFlatFoldable {
                                vertex: v,
                                defect: d.to_f64().unwrap(),
                            });
                        }
                    }
                }
            }
        }
    }
    Ok(FoldedState { pattern, base_face, transforms, alignment_line: None })
}

/// Map every cut segment into the folded state and check that all images
/// are collinear. Returns the alignment line L.
pub fn verify_one_cut<R: Real>(
    state: &FoldedState<'_, R>,
    _drawing: &PlanarDrawing<R>,
    tol: &Tolerance<R>,
) -> Result<AlignmentReport<R>> {
    let pattern = state.pattern;
    let sub = &pattern.subdivision;
    // Image endpoints of every cut edge, with the edge index for reporting.
    let mut points: Vec<(Point2<R>, usize)> = Vec::new();
    for (k, e) in sub.edges.iter().enumerate() {
        if !pattern.edge_roles[k].cut {
            continue;
        }
        let h = 2 * k;
        let f = sub.face_of(h);
        let g = sub.face_of(sub.twin(h));
        let t = state.transforms[f].or(state.transforms[g]).ok_or_else(|| {
            Error::InvalidInput("cut edge borders no mapped face".into())
        })?;
        points.push((t.apply(sub.vertices[e.v0]), k));
        points.push((t.apply(sub.vertices[e.v1]), k));
    }
    if points.is_empty() {
        return Err(Error::InvalidDrawing("pattern has no cut edges".into()));
    }
    // Total least squares line through the image endpoints.
    let n = cast::<R>(points.len() as f64);
    let mut cx = R::zero();
    let mut cy = R::zero();
    for (p, _) in &points {
        cx = cx + p.x;
        cy = cy + p.y;
    }
    let centroid = Point2::new(cx / n, cy / n);
    let mut sxx = R::zero();
    let mut sxy = R::zero();
    let mut syy = R::zero();
    for (p, _) in &points {
        let d = *p - centroid;
        sxx = sxx + d.x * d.x;
        sxy = sxy + d.x * d.y;
        syy = syy + d.y * d.y;
    }
    let theta = ((sxy + sxy).atan2(sxx - syy)) / cast(2.0);
    let mut direction = Vec2::new(theta.cos(), theta.sin());
    if direction.y < R::zero() || (direction.y == R::zero() && direction.x < R::zero()) {
        direction = -direction;
    }
    let normal = direction.perp();
    let offset = normal.dot(centroid.to_vec());
    let mut max_deviation = R::zero();
    let mut worst_segment = 0usize;
    for (p, k) in &points {
        let d = (normal.dot(p.to_vec()) - offset).abs();
        if d > max_deviation {
            max_deviation = d;
            worst_segment = *k;
        }
    }
    if max_deviation > tol.eps_verify {
        return Err(Error::NotAligned {
            max_deviation: max_deviation.to_f64().unwrap(),
            worst_segment,
        });
    }
    // Footnote case: the cut line may lie along folds.
    let mut fold_on_cut_line = false;
    for (k, e) in sub.edges.iter().enumerate() {
        if !pattern.edge_roles[k].crease || pattern.edge_roles[k].cut {
            continue;
        }
        let f = sub.face_of(2 * k);
        let Some(t) = state.transforms[f] else { continue };
        let ia = t.apply(sub.vertices[e.v0]);
        let ib = t.apply(sub.vertices[e.v1]);
        if (normal.dot(ia.to_vec()) - offset).abs() <= tol.eps_verify
            && (normal.dot(ib.to_vec()) - offset).abs() <= tol.eps_verify
        {
            fold_on_cut_line = true;
            break;
        }
    }
    Ok(AlignmentReport { point: centroid, direction, max_deviation, fold_on_cut_line })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::drawing::PlanarDrawing;
    use crate::fixtures;
    use crate::foldcut::{assemble_crease_pattern, generate_perpendiculars};
    use crate::geom::Rect;
    use crate::skeleton::compute_skeleton;
    use crate::subdivision::PlanarSubdivision;

    fn pt(x: f64, y: f64) -> Point2<f64> {
        Point2::new(x, y)
    }

    fn full_pipeline(poly: Vec<Point2<f64>>) -> (PlanarDrawing<f64>, CreasePattern<f64>) {
        let d = PlanarDrawing::from_polygon(poly).unwrap();
        let paper = d.default_paper();
        let tol = *d.tolerance();
        let skel = compute_skeleton(&d, &paper, &tol).unwrap();
        let perps = generate_perpendiculars(&skel, &d, 32).unwrap();
        let pattern = assemble_crease_pattern(&skel, &perps, &d, &paper).unwrap();
        (d, pattern)
    }

    #[test]
    fn reflection_composition_across_single_crease() {
        // Unit paper, one vertical crease at x = 0.5: the right face is the
        // mirror of the left.
        let line = Line2::through(pt(0.5, 0.0), Vec2::new(0.0, 1.0));
        let r = PlanarIsometry::<f64>::reflection(&line);
        let img = r.apply(pt(0.9, 0.3));
        assert!(img.distance(pt(0.1, 0.3)) < 1e-12);
        assert!((r.determinant() + 1.0).abs() < 1e-12);
        assert!(r.orthogonality_defect() < 1e-15);
        let rr = r.compose(&r);
        assert!(rr.distance_to(&PlanarIsometry::identity()) < 1e-12);
    }

    #[test]
    fn odd_degree_vertex_is_not_flat_foldable() {
        // Three creases at 0, 2pi/3, 4pi/3 around an interior vertex.
        let c = pt(0.0, 0.0);
        let reach = 1.0;
        let mut product = PlanarIsometry::<f64>::identity();
        for k in 0..3 {
            let ang = 2.0 * std::f64::consts::PI * k as f64 / 3.0;
            let dir = Vec2::new(ang.cos(), ang.sin());
            let line = Line2::through(c, dir * reach);
            product = PlanarIsometry::reflection(&line).compose(&product);
        }
        // An odd product of reflections is itself a reflection.
        assert!((product.determinant() + 1.0).abs() < 1e-12);
        assert!(product.distance_to(&PlanarIsometry::identity()) > 0.5);
    }

    #[test]
    fn h_pattern_fold_map_is_consistent_and_aligns_vertically() {
        let (d, pattern) = full_pipeline(fixtures::h_polygon::<f64>());
        let base = pattern.default_base_face();
        let state = compute_fold_map(&pattern, base).unwrap();
        // Cross-check path independence by composing along random face
        // paths: every assigned transform must be orthogonal.
        for t in state.transforms.iter().flatten() {
            assert!(t.orthogonality_defect() < 1e-12);
        }
        let report = verify_one_cut(&state, &d, d.tolerance()).unwrap();
        // All edges land on one vertical line (the vertical bisector).
        assert!(report.direction.x.abs() < 1e-6, "direction {:?}", report.direction);
        assert!(report.max_deviation <= d.tolerance().eps_verify);
    }

    #[test]
    fn square_and_ngon_patterns_verify() {
        for poly in [
            fixtures::square::<f64>(),
            fixtures::rectangle::<f64>(),
            fixtures::regular_ngon::<f64>(3),
            fixtures::regular_ngon::<f64>(5),
            fixtures::l_polygon::<f64>(),
        ] {
            let (d, pattern) = full_pipeline(poly);
            let state = compute_fold_map(&pattern, pattern.default_base_face()).unwrap();
            let report = verify_one_cut(&state, &d, d.tolerance()).unwrap();
            assert!(report.max_deviation <= d.tolerance().eps_verify);
        }
    }

    #[test]
    fn cut_images_preserve_length() {
        let (d, pattern) = full_pipeline(fixtures::l_polygon::<f64>());
        let state = compute_fold_map(&pattern, pattern.default_base_face()).unwrap();
        let sub = &pattern.subdivision;
        for (k, e) in sub.edges.iter().enumerate() {
            if !pattern.edge_roles[k].cut {
                continue;
            }
            let a = sub.vertices[e.v0];
            let b = sub.vertices[e.v1];
            let f = sub.face_of(2 * k);
            let t = state.transforms[f].unwrap();
            let img_len = t.apply(a).distance(t.apply(b));
            assert!((img_len - a.distance(b)).abs() < 1e-9 * d.diameter());
        }
    }

    #[test]
    fn faces_across_bare_cuts_share_transforms() {
        let (_, pattern) = full_pipeline(fixtures::h_polygon::<f64>());
        let state = compute_fold_map(&pattern, pattern.default_base_face()).unwrap();
        let sub = &pattern.subdivision;
        for (k, _) in sub.edges.iter().enumerate() {
            let role = pattern.edge_roles[k];
            if !role.cut || role.crease {
                continue;
            }
            let f = sub.face_of(2 * k);
            let g = sub.face_of(sub.twin(2 * k));
            if let (Some(tf), Some(tg)) = (state.transforms[f], state.transforms[g]) {
                assert!(tf.distance_to(&tg) < 1e-9);
            }
        }
    }

    #[test]
    fn base_face_independence() {
        use rand::{Rng, SeedableRng};
        let (d, pattern) = full_pipeline(fixtures::h_polygon::<f64>());
        let base0 = pattern.default_base_face();
        let state0 = compute_fold_map(&pattern, base0).unwrap();
        let report0 = verify_one_cut(&state0, &d, d.tolerance()).unwrap();
        let bounded: Vec<usize> = (0..pattern.subdivision.faces.len())
            .filter(|&f| pattern.subdivision.faces[f].outer.is_some())
            .collect();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        for _ in 0..5 {
            let base = bounded[rng.gen_range(0..bounded.len())];
            let state = compute_fold_map(&pattern, base).unwrap();
            let report = verify_one_cut(&state, &d, d.tolerance()).unwrap();
            // The two lines are related by the transform between the bases.
            let t = state.transforms[base0].unwrap();
            let p_mapped = t.apply(report0.point);
            let d_mapped = t.apply_vec(report0.direction);
            let n = report.direction.perp();
            let off = n.dot(report.point.to_vec());
            assert!((n.dot(p_mapped.to_vec()) - off).abs() < 1e-6 * d.diameter());
            assert!(n.dot(d_mapped).abs() < 1e-6);
        }
    }

    #[test]
    fn deleting_a_crease_breaks_verification() {
        let (d, pattern) = full_pipeline(fixtures::h_polygon::<f64>());
        // Remove the longest crease and rebuild.
        let mut creases = pattern.creases.clone();
        let longest = creases
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.segment.length().partial_cmp(&b.1.segment.length()).unwrap())
            .unwrap()
            .0;
        creases.remove(longest);
        let rebuilt = rebuild(&pattern, &d, creases);
        let outcome = compute_fold_map(&rebuilt, rebuilt.default_base_face())
            .and_then(|state| verify_one_cut(&state, &d, d.tolerance()).map(|_| ()));
        assert!(outcome.is_err(), "verification should fail with a missing crease");
    }

    fn rebuild(
        pattern: &CreasePattern<f64>,
        d: &PlanarDrawing<f64>,
        creases: Vec<crate::foldcut::Crease<f64>>,
    ) -> CreasePattern<f64> {
        use crate::offset::snap_endpoints;
        use crate::subdivision::LabeledSegment;
        let tol = *d.tolerance();
        let mut inputs = Vec::new();
        let mut roles: Vec<EdgeRoleSrc> = Vec::new();
        for seg in pattern.paper.edges() {
            roles.push(EdgeRoleSrc::Paper);
            inputs.push(LabeledSegment { segment: seg, label: (roles.len() - 1) as u32 });
        }
        for seg in &pattern.cuts {
            roles.push(EdgeRoleSrc::Cut);
            inputs.push(LabeledSegment { segment: *seg, label: (roles.len() - 1) as u32 });
        }
        for c in &creases {
            roles.push(EdgeRoleSrc::Crease);
            inputs.push(LabeledSegment { segment: c.segment, label: (roles.len() - 1) as u32 });
        }
        let sub = PlanarSubdivision::build_labeled(&snap_endpoints(&inputs, &tol), &tol).unwrap();
        let mut edge_roles = vec![crate::foldcut::EdgeRole::default(); sub.edges.len()];
        for (k, e) in sub.edges.iter().enumerate() {
            for &(label, _) in &e.labels {
                match roles[label as usize] {
                    EdgeRoleSrc::Paper => edge_roles[k].paper = true,
                    EdgeRoleSrc::Cut => edge_roles[k].cut = true,
                    EdgeRoleSrc::Crease => edge_roles[k].crease = true,
                }
            }
        }
        CreasePattern {
            paper: pattern.paper,
            creases,
            cuts: pattern.cuts.clone(),
            subdivision: sub,
            edge_roles,
            tol,
        }
    }

    enum EdgeRoleSrc {
        Paper,
        Cut,
        Crease,
    }

    #[test]
    fn trivially_aligned_images_return_the_line() {
        // A pattern where all cut images already lie on x = 0: one square
        // cut centered on the line, no creases needed to move it... use a
        // degenerate check through the TLS fit directly: two cuts on x = 0.
        let d = PlanarDrawing::from_polygon(vec![
            pt(-0.4, 0.0),
            pt(0.4, 0.0),
            pt(0.4, 1.0),
            pt(-0.4, 1.0),
        ])
        .unwrap();
        let paper = Rect::new(pt(-1.0, -1.0), pt(1.0, 2.0));
        let tol = *d.tolerance();
        let skel = compute_skeleton(&d, &paper, &tol).unwrap();
        let pattern = assemble_crease_pattern(&skel, &[], &d, &paper).unwrap();
        let state = compute_fold_map(&pattern, pattern.default_base_face()).unwrap();
        let report = verify_one_cut(&state, &d, &tol).unwrap();
        // Rectangle folds onto a line; direction is determined up to sign.
        assert!(report.max_deviation <= tol.eps_verify);
    }
}
