//! `onecut`: fold-and-cut crease patterns and strip wrappings.
//!
//! Exit codes: 0 success, 1 validation failure, 2 verification failure,
//! 64 usage errors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use onecut_core::drawing::PlanarDrawing;
use onecut_core::foldcut::{
    assemble_crease_pattern, generate_perpendiculars, Crease, CreaseKind, FoldOrientation,
    DEFAULT_MAX_GENERATION,
};
use onecut_core::foldmap::{compute_fold_map, verify_one_cut, AlignmentReport};
use onecut_core::io;
use onecut_core::skeleton::compute_skeleton;
use onecut_core::wrap::{convex_decompose, plan_strip_cover, verify_cover};
use onecut_core::Error;

#[derive(Parser)]
#[command(name = "onecut", version, about = "Fold-and-cut crease patterns and strip wrappings")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compute the straight skeleton of a drawing and export it.
    Skeleton {
        drawing: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Generate the fold-and-cut crease pattern for a drawing.
    Foldcut {
        drawing: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        /// Perpendicular propagation budget.
        #[arg(long, default_value_t = DEFAULT_MAX_GENERATION)]
        max_generation: u32,
        /// Fold the pattern flat and check the single-cut alignment.
        #[arg(long)]
        verify: bool,
    },
    /// Check a pattern file: fold it flat and test cut-edge alignment.
    Verify { pattern: PathBuf },
    /// Plan a strip wrapping of a polygon silhouette.
    Wrap {
        drawing: PathBuf,
        /// Strip width; defaults to the silhouette's deepest interior
        /// skeleton time.
        #[arg(long)]
        strip_width: Option<f64>,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Render a pattern or plan file to SVG.
    Render {
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{e}");
                    ExitCode::SUCCESS
                }
                _ => {
                    eprint!("{e}");
                    ExitCode::from(64)
                }
            };
        }
    };
    match run(cli.cmd) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            match err {
                Error::NotAligned { .. } | Error::NotFlatFoldable { .. } => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}

fn read_drawing(path: &Path) -> Result<(PlanarDrawing<f64>, String), Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
    let (d, mut name) = io::parse_drawing(&text)?;
    if name.is_empty() {
        name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    }
    Ok((d, name))
}

fn write_text(path: &Path, text: &str) -> Result<(), Error> {
    std::fs::write(path, text)
        .map_err(|e| Error::InvalidInput(format!("cannot write {}: {e}", path.display())))
}

fn print_alignment(report: &AlignmentReport<f64>) {
    println!(
        "alignment line L: point ({}, {}) direction ({}, {}) max deviation {:.3e}{}",
        report.point.x,
        report.point.y,
        report.direction.x,
        report.direction.y,
        report.max_deviation,
        if report.fold_on_cut_line { " (cut line lies along folds)" } else { "" }
    );
}

fn run(cmd: Cmd) -> Result<ExitCode, Error> {
    match cmd {
        Cmd::Skeleton { drawing, output } => {
            let (d, name) = read_drawing(&drawing)?;
            let paper = d.default_paper();
            let tol = *d.tolerance();
            let skel = compute_skeleton(&d, &paper, &tol)?;
            // Export the skeleton arcs as an unassigned pattern layout.
            let arcs: Vec<Crease<f64>> = skel
                .arcs
                .iter()
                .filter_map(|a| {
                    let seg = onecut_core::Segment::new(
                        skel.nodes[a.node_a].position,
                        skel.nodes[a.node_b].position,
                    );
                    paper.clip_segment(&seg)
                })
                .filter(|s| s.length() > tol.eps_geom * 8.0)
                .map(|segment| Crease {
                    segment,
                    kind: CreaseKind::SkeletonLine,
                    orientation: FoldOrientation::Unassigned,
                    generation: 0,
                })
                .collect();
            let cuts = d.edges().map(|(_, s)| s).collect();
            let pattern = io::assemble_pattern_from_parts(paper, arcs, cuts, tol)?;
            let file = io::pattern_to_file(&pattern, &name);
            write_text(&output, &to_json(&file)?)?;
            println!(
                "skeleton: {} nodes, {} arcs, {} faces",
                skel.nodes.len(),
                skel.arcs.len(),
                skel.faces.len()
            );
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Foldcut { drawing, output, max_generation, verify } => {
            let (d, name) = read_drawing(&drawing)?;
            let paper = d.default_paper();
            let tol = *d.tolerance();
            let skel = compute_skeleton(&d, &paper, &tol)?;
            let perps = generate_perpendiculars(&skel, &d, max_generation)?;
            let pattern = assemble_crease_pattern(&skel, &perps, &d, &paper)?;
            let file = io::pattern_to_file(&pattern, &name);
            write_text(&output, &to_json(&file)?)?;
            println!(
                "pattern: {} creases ({} perpendicular chains), {} cuts",
                pattern.creases.len(),
                perps.len(),
                pattern.cuts.len()
            );
            if verify {
                let state = compute_fold_map(&pattern, pattern.default_base_face())?;
                let report = verify_one_cut(&state, &d, &tol)?;
                print_alignment(&report);
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Verify { pattern } => {
            let text = std::fs::read_to_string(&pattern)
                .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", pattern.display())))?;
            let file: io::PatternFile = serde_json::from_str(&text)
                .map_err(|e| Error::InvalidInput(format!("pattern syntax error: {e}")))?;
            let (pat, d) = io::pattern_from_file(&file)?;
            let state = compute_fold_map(&pat, pat.default_base_face())?;
            let report = verify_one_cut(&state, &d, d.tolerance())?;
            print_alignment(&report);
            println!("verification passed");
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Wrap { drawing, strip_width, output } => {
            let (d, name) = read_drawing(&drawing)?;
            if d.cycles().len() != 1 {
                return Err(Error::InvalidInput(
                    "wrapping expects a single simple polygon silhouette".into(),
                ));
            }
            let silhouette = d.cycles()[0].clone();
            let tol = *d.tolerance();
            let width = match strip_width {
                Some(w) => w,
                None => {
                    let paper = d.default_paper();
                    let skel = compute_skeleton(&d, &paper, &tol)?;
                    skel.max_interior_time()
                }
            };
            let decomp = convex_decompose(&silhouette)?;
            let plan = plan_strip_cover(&decomp, width)?;
            let report = verify_cover(&plan, &silhouette, &tol)?;
            let file = io::plan_to_file(&plan, &silhouette, &name);
            write_text(&output, &to_json(&file)?)?;
            println!(
                "plan: {} pieces, {} strip folds, consumed length {}, square side {}",
                decomp.pieces.len(),
                plan.folds.len(),
                plan.consumed_length,
                plan.accordion.square_side
            );
            println!(
                "coverage: {} (uncovered area {:.3e}), efficiency {:.4}",
                if report.covered { "covered" } else { "gaps" },
                report.uncovered_area,
                report.efficiency
            );
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Render { input, output } => {
            let text = std::fs::read_to_string(&input)
                .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", input.display())))?;
            let value: serde_json::Value = serde_json::from_str(&text)
                .map_err(|e| Error::InvalidInput(format!("syntax error: {e}")))?;
            let svg = if value.get("panels").is_some() {
                let file: io::PlanFile = serde_json::from_value(value)
                    .map_err(|e| Error::InvalidInput(format!("bad plan file: {e}")))?;
                io::plan_svg(&file)
            } else if value.get("vertices_coords").is_some() {
                let file: io::PatternFile = serde_json::from_value(value)
                    .map_err(|e| Error::InvalidInput(format!("bad pattern file: {e}")))?;
                let (pattern, _) = io::pattern_from_file(&file)?;
                io::pattern_svg(&pattern, &file.name)
            } else {
                return Err(Error::InvalidInput(
                    "input is neither a pattern nor a plan file".into(),
                ));
            };
            write_text(&output, &svg)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn to_json<T: serde::Serialize>(value: &T) -> Result<String, Error> {
    serde_json::to_string_pretty(value)
        .map(|mut s| {
            s.push('\n');
            s
        })
        .map_err(|e| Error::InvalidInput(format!("serialization failed: {e}")))
}
