//! File formats and rendering: drawing files, FOLD-compatible crease
//! pattern files, wrap plan files, and deterministic SVG output.

use serde::{Deserialize, Serialize};

use crate::drawing::PlanarDrawing;
use crate::error::{Error, Result};
use crate::foldcut::{Crease, CreaseKind, CreasePattern, EdgeRole, FoldOrientation};
use crate::geom::{Point2, Rect, Segment2, Tolerance};
use crate::offset::snap_endpoints;
use crate::subdivision::{LabeledSegment, PlanarSubdivision};
use crate::wrap::StripFoldPlan;

/// On-disk drawing: indexed vertices and edges.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DrawingFile {
    #[serde(default)]
    pub name: String,
    pub vertices: Vec<[f64; 2]>,
    pub edges: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scale: Option<f64>,
}

/// Parse and validate a drawing file: edges must decompose into disjoint
/// simple polygon cycles (nesting allowed).
pub fn parse_drawing(text: &str) -> Result<(PlanarDrawing<f64>, String)> {
    let file: DrawingFile = serde_json::from_str(text)
        .map_err(|e| Error::InvalidDrawing(format!("syntax error: {e}")))?;
    drawing_from_file(&file).map(|d| (d, file.name.clone()))
}

pub fn drawing_from_file(file: &DrawingFile) -> Result<PlanarDrawing<f64>> {
    let n = file.vertices.len();
    if n == 0 || file.edges.is_empty() {
        return Err(Error::InvalidDrawing("drawing has no vertices or edges".into()));
    }
    for (k, e) in file.edges.iter().enumerate() {
        if e[0] >= n || e[1] >= n {
            return Err(Error::InvalidDrawing(format!(
                "edge {k} references vertex {} out of range (have {n})",
                e[0].max(e[1])
            )));
        }
        if e[0] == e[1] {
            return Err(Error::InvalidDrawing(format!("edge {k} is degenerate ([{0},{0}])", e[0])));
        }
    }
    // Every vertex must have degree exactly two: the edge set then
    // decomposes into closed cycles. Dangling chains, floating segments and
    // isolated points are outside this artifact's input class.
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for e in &file.edges {
        adj[e[0]].push(e[1]);
        adj[e[1]].push(e[0]);
    }
    for (v, nb) in adj.iter().enumerate() {
        if nb.len() != 2 {
            return Err(Error::InvalidDrawing(format!(
                "vertex {v} has degree {}; drawings are restricted to unions of simple \
                 polygons (no floating segments, isolated points or open chains)",
                nb.len()
            )));
        }
    }
    // Walk the cycles.
    let mut seen = vec![false; n];
    let mut cycles: Vec<Vec<Point2<f64>>> = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut prev = usize::MAX;
        let mut cur = start;
        loop {
            seen[cur] = true;
            cycle.push(Point2::new(file.vertices[cur][0], file.vertices[cur][1]));
            let next = if adj[cur][0] != prev { adj[cur][0] } else { adj[cur][1] };
            prev = cur;
            cur = next;
            if cur == start {
                break;
            }
            if cycle.len() > n {
                return Err(Error::InvalidDrawing("edge walk did not close".into()));
            }
        }
        cycles.push(cycle);
    }
    PlanarDrawing::from_cycles(cycles)
}

pub fn drawing_to_file(drawing: &PlanarDrawing<f64>, name: &str) -> DrawingFile {
    let mut vertices = Vec::new();
    let mut edges = Vec::new();
    for cycle in drawing.cycles() {
        let base = vertices.len();
        for p in cycle {
            vertices.push([p.x, p.y]);
        }
        for k in 0..cycle.len() {
            edges.push([base + k, base + (k + 1) % cycle.len()]);
        }
    }
    DrawingFile { name: name.to_string(), vertices, edges, scale: None }
}

/// FOLD-compatible crease pattern file. Cut edges use the assignment "C",
/// a documented superset of the standard B/M/V/U values.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PatternFile {
    pub file_spec: String,
    pub file_creator: String,
    #[serde(default)]
    pub file_classes: Vec<String>,
    #[serde(default)]
    pub frame_classes: Vec<String>,
    pub vertices_coords: Vec<[f64; 2]>,
    pub edges_vertices: Vec<[usize; 2]>,
    pub edges_assignment: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub faces_vertices: Option<Vec<Vec<usize>>>,
    /// Extension: skeleton-line versus perpendicular crease classes.
    #[serde(rename = "onecut:edge_kinds")]
    pub edge_kinds: Vec<String>,
    /// Extension: the paper rectangle [min_x, min_y, max_x, max_y].
    #[serde(rename = "onecut:paper")]
    pub paper: [f64; 4],
    #[serde(rename = "onecut:name", default)]
    pub name: String,
}

fn role_assignment(role: &EdgeRole, orientation: FoldOrientation) -> &'static str {
    if role.cut {
        "C"
    } else if role.paper {
        "B"
    } else {
        match orientation {
            FoldOrientation::Mountain => "M",
            FoldOrientation::Valley => "V",
            FoldOrientation::Unassigned => "U",
        }
    }
}

fn role_kind(role: &EdgeRole) -> &'static str {
    if role.cut {
        "cut"
    } else if role.paper {
        "border"
    } else if role.perpendicular {
        "perpendicular"
    } else {
        "skeleton"
    }
}

/// Serialize a pattern with canonical vertex and edge order.
pub fn pattern_to_file(pattern: &CreasePattern<f64>, name: &str) -> PatternFile {
    let sub = &pattern.subdivision;
    // Canonical vertex order: lexicographic.
    let mut order: Vec<usize> = (0..sub.vertices.len()).collect();
    order.sort_by(|&a, &b| {
        let (p, q) = (sub.vertices[a], sub.vertices[b]);
        (p.x, p.y).partial_cmp(&(q.x, q.y)).unwrap()
    });
    let mut rank = vec![0usize; sub.vertices.len()];
    for (r, &v) in order.iter().enumerate() {
        rank[v] = r;
    }
    let vertices_coords: Vec<[f64; 2]> =
        order.iter().map(|&v| [sub.vertices[v].x, sub.vertices[v].y]).collect();
    let mut edge_rows: Vec<([usize; 2], String, String)> = sub
        .edges
        .iter()
        .enumerate()
        .map(|(k, e)| {
            let (mut a, mut b) = (rank[e.v0], rank[e.v1]);
            if a > b {
                std::mem::swap(&mut a, &mut b);
            }
            let role = &pattern.edge_roles[k];
            // Crease orientation: all generated creases are unassigned.
            ([a, b], role_assignment(role, FoldOrientation::Unassigned).to_string(),
             role_kind(role).to_string())
        })
        .collect();
    edge_rows.sort();
    let edges_vertices: Vec<[usize; 2]> = edge_rows.iter().map(|r| r.0).collect();
    let edges_assignment: Vec<String> = edge_rows.iter().map(|r| r.1.clone()).collect();
    let edge_kinds: Vec<String> = edge_rows.iter().map(|r| r.2.clone()).collect();
    // Faces: bounded subdivision faces as vertex cycles.
    let mut faces: Vec<Vec<usize>> = Vec::new();
    for f in 0..sub.faces.len() {
        let Some(c) = sub.faces[f].outer else { continue };
        let mut cyc: Vec<usize> = sub
            .cycle_half_edges(c)
            .iter()
            .map(|&h| rank[sub.half_edges[h].origin])
            .collect();
        // Canonical rotation: start at the smallest vertex id.
        let min_pos = cyc.iter().enumerate().min_by_key(|(_, &v)| v).map(|(i, _)| i).unwrap();
        cyc.rotate_left(min_pos);
        faces.push(cyc);
    }
    faces.sort();
    PatternFile {
        file_spec: "1.1".into(),
        file_creator: "onecut".into(),
        file_classes: vec!["singleModel".into()],
        frame_classes: vec!["creasePattern".into()],
        vertices_coords,
        edges_vertices,
        edges_assignment,
        faces_vertices: Some(faces),
        edge_kinds,
        paper: [pattern.paper.min.x, pattern.paper.min.y, pattern.paper.max.x, pattern.paper.max.y],
        name: name.into(),
    }
}

/// Rebuild a working pattern from a file (for `verify` and `render`).
pub fn pattern_from_file(file: &PatternFile) -> Result<(CreasePattern<f64>, PlanarDrawing<f64>)> {
    if file.edges_assignment.len() != file.edges_vertices.len() {
        return Err(Error::InvalidInput(
            "edges_assignment length must match edges_vertices".into(),
        ));
    }
    let pts: Vec<Point2<f64>> =
        file.vertices_coords.iter().map(|c| Point2::new(c[0], c[1])).collect();
    for e in &file.edges_vertices {
        if e[0] >= pts.len() || e[1] >= pts.len() {
            return Err(Error::InvalidInput("edge vertex index out of range".into()));
        }
    }
    let paper = Rect::new(
        Point2::new(file.paper[0], file.paper[1]),
        Point2::new(file.paper[2], file.paper[3]),
    );
    // Cut edges reproduce the drawing.
    let mut cut_file_edges: Vec<[usize; 2]> = Vec::new();
    let mut creases: Vec<Crease<f64>> = Vec::new();
    let mut cuts: Vec<Segment2<f64>> = Vec::new();
    for (k, e) in file.edges_vertices.iter().enumerate() {
        let seg = Segment2::new(pts[e[0]], pts[e[1]]);
        match file.edges_assignment[k].as_str() {
            "C" => {
                cuts.push(seg);
                cut_file_edges.push(*e);
            }
            "B" => {}
            "M" | "V" | "U" => {
                let orientation = match file.edges_assignment[k].as_str() {
                    "M" => FoldOrientation::Mountain,
                    "V" => FoldOrientation::Valley,
                    _ => FoldOrientation::Unassigned,
                };
                let kind = match file.edge_kinds.get(k).map(|s| s.as_str()) {
                    Some("perpendicular") => CreaseKind::Perpendicular,
                    _ => CreaseKind::SkeletonLine,
                };
                creases.push(Crease { segment: seg, kind, orientation, generation: 0 });
            }
            other => {
                return Err(Error::InvalidInput(format!("unknown edge assignment '{other}'")))
            }
        }
    }
    if cuts.is_empty() {
        return Err(Error::InvalidDrawing("pattern has no cut edges".into()));
    }
    // Reassemble the drawing from cut cycles to recover the tolerance.
    let drawing = {
        let used: std::collections::BTreeSet<usize> =
            cut_file_edges.iter().flat_map(|e| [e[0], e[1]]).collect();
        let remap: std::collections::BTreeMap<usize, usize> =
            used.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let dfile = DrawingFile {
            name: file.name.clone(),
            vertices: used.iter().map(|&v| [pts[v].x, pts[v].y]).collect(),
            edges: cut_file_edges.iter().map(|e| [remap[&e[0]], remap[&e[1]]]).collect(),
            scale: None,
        };
        drawing_from_file(&dfile)?
    };
    let tol = *drawing.tolerance();
    let pattern = assemble_pattern_from_parts(paper, creases, cuts, tol)?;
    Ok((pattern, drawing))
}

/// Build a pattern subdivision directly from segment lists (used by file
/// import and by mutation tests).
pub fn assemble_pattern_from_parts(
    paper: Rect<f64>,
    creases: Vec<Crease<f64>>,
    cuts: Vec<Segment2<f64>>,
    tol: Tolerance<f64>,
) -> Result<CreasePattern<f64>> {
    #[derive(Clone, Copy)]
    enum Src {
        Paper,
        Cut,
        Crease { perpendicular: bool },
    }
    let mut inputs: Vec<LabeledSegment<f64>> = Vec::new();
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
    Ok(CreasePattern { paper, creases, cuts, subdivision, edge_roles, tol })
}

/// On-disk wrap plan.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PlanFile {
    #[serde(default)]
    pub name: String,
    pub square_side: f64,
    pub strip_width: f64,
    /// Accordion crease positions with M/V orientation.
    pub accordion_creases: Vec<(f64, String)>,
    /// Strip folds: crease anchor and direction in strip coordinates plus
    /// the placed segment.
    pub folds: Vec<PlanFold>,
    pub panels: Vec<Vec<[f64; 2]>>,
    pub consumed_length: f64,
    pub silhouette: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PlanFold {
    pub strip_point: [f64; 2],
    pub strip_dir: [f64; 2],
    pub segment: [[f64; 2]; 2],
    pub orientation: String,
}

fn orientation_str(o: FoldOrientation) -> &'static str {
    match o {
        FoldOrientation::Mountain => "M",
        FoldOrientation::Valley => "V",
        FoldOrientation::Unassigned => "U",
    }
}

pub fn plan_to_file(
    plan: &StripFoldPlan<f64>,
    silhouette: &[Point2<f64>],
    name: &str,
) -> PlanFile {
    PlanFile {
        name: name.into(),
        square_side: plan.accordion.square_side,
        strip_width: plan.accordion.strip_width,
        accordion_creases: plan
            .accordion
            .creases
            .iter()
            .map(|(p, o)| (*p, orientation_str(*o).to_string()))
            .collect(),
        folds: plan
            .folds
            .iter()
            .map(|f| PlanFold {
                strip_point: [f.line_in_strip.0.x, f.line_in_strip.0.y],
                strip_dir: [f.line_in_strip.1.x, f.line_in_strip.1.y],
                segment: [
                    [f.segment.a.x, f.segment.a.y],
                    [f.segment.b.x, f.segment.b.y],
                ],
                orientation: orientation_str(f.orientation).into(),
            })
            .collect(),
        panels: plan
            .panels
            .iter()
            .map(|p| p.iter().map(|q| [q.x, q.y]).collect())
            .collect(),
        consumed_length: plan.consumed_length,
        silhouette: silhouette.iter().map(|p| [p.x, p.y]).collect(),
    }
}

fn fmt_f(v: f64) -> String {
    // Shortest round-trip representation; deterministic.
    format!("{v}")
}

/// Deterministic SVG for a crease pattern: cuts in one stroke class,
/// mountain solid, valley dashed, unassigned dotted, skeleton versus
/// perpendicular distinguishable by class.
pub fn pattern_svg(pattern: &CreasePattern<f64>, name: &str) -> String {
    let file = pattern_to_file(pattern, name);
    let [x0, y0, x1, y1] = file.paper;
    let m = 0.05 * ((x1 - x0) + (y1 - y0));
    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{} {} {} {}\">\n",
        fmt_f(x0 - m),
        fmt_f(y0 - m),
        fmt_f(x1 - x0 + 2.0 * m),
        fmt_f(y1 - y0 + 2.0 * m)
    ));
    out.push_str("<style>\n");
    out.push_str(".paper{fill:none;stroke:#202020;stroke-width:0.5%}\n");
    out.push_str(".cut{stroke:#c02020;stroke-width:0.6%;fill:none}\n");
    out.push_str(".crease{stroke:#3060c0;stroke-width:0.35%;fill:none}\n");
    out.push_str(".mountain{stroke-dasharray:none}\n");
    out.push_str(".valley{stroke-dasharray:2,1}\n");
    out.push_str(".unassigned{stroke-dasharray:0.6,0.6}\n");
    out.push_str(".skeleton{}\n.perpendicular{stroke:#30a070}\n");
    out.push_str("</style>\n");
    out.push_str(&format!(
        "<rect class=\"paper\" x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\"/>\n",
        fmt_f(x0),
        fmt_f(y0),
        fmt_f(x1 - x0),
        fmt_f(y1 - y0)
    ));
    for (k, e) in file.edges_vertices.iter().enumerate() {
        let a = file.vertices_coords[e[0]];
        let b = file.vertices_coords[e[1]];
        let class = match file.edges_assignment[k].as_str() {
            "C" => "cut".to_string(),
            "B" => continue,
            "M" => format!("crease mountain {}", file.edge_kinds[k]),
            "V" => format!("crease valley {}", file.edge_kinds[k]),
            _ => format!("crease unassigned {}", file.edge_kinds[k]),
        };
        out.push_str(&format!(
            "<line class=\"{class}\" x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"/>\n",
            fmt_f(a[0]),
            fmt_f(a[1]),
            fmt_f(b[0]),
            fmt_f(b[1])
        ));
    }
    out.push_str("</svg>\n");
    out
}

/// Deterministic SVG for a wrap plan: silhouette, placed panels and fold
/// segments.
pub fn plan_svg(file: &PlanFile) -> String {
    let xs: Vec<f64> = file.silhouette.iter().map(|p| p[0]).collect();
    let ys: Vec<f64> = file.silhouette.iter().map(|p| p[1]).collect();
    let (x0, x1) = (
        xs.iter().copied().fold(f64::INFINITY, f64::min),
        xs.iter().copied().fold(f64::NEG_INFINITY, f64::max),
    );
    let (y0, y1) = (
        ys.iter().copied().fold(f64::INFINITY, f64::min),
        ys.iter().copied().fold(f64::NEG_INFINITY, f64::max),
    );
    let m = 0.05 * ((x1 - x0) + (y1 - y0));
    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{} {} {} {}\">\n",
        fmt_f(x0 - m),
        fmt_f(y0 - m),
        fmt_f(x1 - x0 + 2.0 * m),
        fmt_f(y1 - y0 + 2.0 * m)
    ));
    out.push_str("<style>\n");
    out.push_str(".silhouette{fill:#f0ead6;stroke:#202020;stroke-width:0.6%}\n");
    out.push_str(".panel{fill:#7fb2d9;fill-opacity:0.25;stroke:#39729e;stroke-width:0.2%}\n");
    out.push_str(".fold{stroke:#c05020;stroke-width:0.35%;stroke-dasharray:1,0.6}\n");
    out.push_str("</style>\n");
    let path_of = |pts: &[[f64; 2]]| {
        let mut d = String::new();
        for (i, p) in pts.iter().enumerate() {
            d.push_str(if i == 0 { "M" } else { "L" });
            d.push_str(&format!("{} {} ", fmt_f(p[0]), fmt_f(p[1])));
        }
        d.push('Z');
        d
    };
    out.push_str(&format!("<path class=\"silhouette\" d=\"{}\"/>\n", path_of(&file.silhouette)));
    for panel in &file.panels {
        out.push_str(&format!("<path class=\"panel\" d=\"{}\"/>\n", path_of(panel)));
    }
    for fold in &file.folds {
        out.push_str(&format!(
            "<line class=\"fold\" x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"/>\n",
            fmt_f(fold.segment[0][0]),
            fmt_f(fold.segment[0][1]),
            fmt_f(fold.segment[1][0]),
            fmt_f(fold.segment[1][1])
        ));
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::foldcut::{assemble_crease_pattern, generate_perpendiculars};
    use crate::skeleton::compute_skeleton;

    fn h_file_text() -> String {
        let d = PlanarDrawing::from_polygon(fixtures::h_polygon::<f64>()).unwrap();
        serde_json::to_string_pretty(&drawing_to_file(&d, "h")).unwrap()
    }

    #[test]
    fn parse_round_trip_preserves_drawing() {
        let text = h_file_text();
        let (d, name) = parse_drawing(&text).unwrap();
        assert_eq!(name, "h");
        assert_eq!(d.cycles()[0].len(), 12);
        let text2 = serde_json::to_string_pretty(&drawing_to_file(&d, &name)).unwrap();
        let (d2, _) = parse_drawing(&text2).unwrap();
        assert_eq!(d.cycles(), d2.cycles());
    }

    #[test]
    fn degenerate_edge_is_rejected() {
        let bad = r#"{"name":"x","vertices":[[0,0],[1,0],[1,1]],"edges":[[0,0],[1,2],[2,0]]}"#;
        assert!(matches!(parse_drawing(bad), Err(Error::InvalidDrawing(_))));
    }

    #[test]
    fn open_chain_is_rejected() {
        let bad = r#"{"name":"x","vertices":[[0,0],[1,0],[1,1]],"edges":[[0,1],[1,2]]}"#;
        let err = parse_drawing(bad).unwrap_err();
        let msg = format!("{err}");
        assert!(msg.contains("simple"), "{msg}");
    }

    #[test]
    fn crossing_edges_are_rejected() {
        let bad = r#"{"name":"x","vertices":[[0,0],[2,2],[2,0],[0,2]],
                      "edges":[[0,1],[1,2],[2,3],[3,0]]}"#;
        assert!(parse_drawing(bad).is_err());
    }

    #[test]
    fn pattern_file_round_trip_verifies() {
        let d = PlanarDrawing::from_polygon(fixtures::h_polygon::<f64>()).unwrap();
        let paper = d.default_paper();
        let tol = *d.tolerance();
        let skel = compute_skeleton(&d, &paper, &tol).unwrap();
        let perps = generate_perpendiculars(&skel, &d, 32).unwrap();
        let pattern = assemble_crease_pattern(&skel, &perps, &d, &paper).unwrap();
        let file = pattern_to_file(&pattern, "h");
        let text = serde_json::to_string_pretty(&file).unwrap();
        let parsed: PatternFile = serde_json::from_str(&text).unwrap();
        let (rebuilt, d2) = pattern_from_file(&parsed).unwrap();
        let state =
            crate::foldmap::compute_fold_map(&rebuilt, rebuilt.default_base_face()).unwrap();
        let report = crate::foldmap::verify_one_cut(&state, &d2, d2.tolerance()).unwrap();
        assert!(report.direction.x.abs() < 1e-6);
    }

    #[test]
    fn exports_are_deterministic() {
        let d = PlanarDrawing::from_polygon(fixtures::square::<f64>()).unwrap();
        let paper = d.default_paper();
        let tol = *d.tolerance();
        let build = || {
            let skel = compute_skeleton(&d, &paper, &tol).unwrap();
            let perps = generate_perpendiculars(&skel, &d, 32).unwrap();
            let pattern = assemble_crease_pattern(&skel, &perps, &d, &paper).unwrap();
            let file = pattern_to_file(&pattern, "square");
            (serde_json::to_string_pretty(&file).unwrap(), pattern_svg(&pattern, "square"))
        };
        let (j1, s1) = build();
        let (j2, s2) = build();
        assert_eq!(j1, j2);
        assert_eq!(s1, s2);
        // A square-drawing pattern renders 4 cut segments plus creases.
        assert_eq!(s1.matches("class=\"cut\"").count(), 4);
        assert!(s1.matches("crease").count() > 4);
    }

    #[test]
    fn empty_pattern_svg_has_paper_only() {
        // A pattern with no creases still renders the paper rectangle.
        let d = PlanarDrawing::from_polygon(fixtures::square::<f64>()).unwrap();
        let tol = *d.tolerance();
        let paper = d.default_paper();
        let pattern = assemble_pattern_from_parts(
            paper,
            Vec::new(),
            d.edges().map(|(_, s)| s).collect(),
            tol,
        )
        .unwrap();
        let svg = pattern_svg(&pattern, "bare");
        assert!(svg.contains("<rect class=\"paper\""));
    }

    #[test]
    fn plan_file_and_svg() {
        let sil = fixtures::letter_i::<f64>();
        let decomp = crate::wrap::convex_decompose(&sil).unwrap();
        let plan = crate::wrap::plan_strip_cover(&decomp, 0.5).unwrap();
        let file = plan_to_file(&plan, &sil, "i");
        let text = serde_json::to_string_pretty(&file).unwrap();
        let parsed: PlanFile = serde_json::from_str(&text).unwrap();
        let svg = plan_svg(&parsed);
        assert!(svg.contains("class=\"panel\""));
        assert!(svg.contains("class=\"fold\""));
    }
}
