//! Star edge colorings of generalized Petersen graphs.
//!
//! A *star edge coloring* is a proper edge coloring in which no path or
//! cycle on four edges uses exactly two colors; the *star chromatic index*
//! is the least number of colors admitting one. This crate builds
//! `GP(n, k)`, constructs 5-star edge colorings for the parameter ranges
//! where scripted constructions exist (`gcd(n, k) >= 3`, the covered
//! `gcd = 2` residues, and `n/d` in `{2, 5}`), verifies any coloring with
//! defect witnesses, and computes exact star chromatic indices on small
//! instances as an independent oracle.
//!
//! ```
//! use petersen_star::{dispatch, verify_star, GpGraph};
//!
//! let g = GpGraph::build(9, 3).unwrap();
//! let report = dispatch(&g).unwrap();
//! assert!(report.colors_used <= 5);
//! assert!(verify_star(&g, &report.coloring, true).is_empty());
//! ```
//!
//! Run the bundled examples (`cargo run --example color_instance`, …) for a
//! tour of each capability, or the `petersen-star` binary for the CLI.

pub mod coloring;
pub mod construct;
pub mod exact;
pub mod graph;
pub mod io;
pub mod segment;
pub mod verify;

pub use coloring::{Color, ColorSet, Palette3, PartialColoring};
pub use construct::{
    color_d2, color_main_d3, color_ratio_five, color_ratio_two, dispatch, repair_fallback,
    ColoringReport, ConstructError, Method,
};
pub use exact::{find_star_coloring, star_chromatic_index, IndexResult, SearchConfig, SearchResult};
pub use graph::{Edge, EdgeGraph, EdgeId, EdgeKind, GpGraph, GraphError, SimpleGraph, VertexId};
pub use segment::{
    extend_cycle_five_constraints, extend_cycle_three_edges, extend_cycle_two_paths,
    path_gap_extension, process1, process2, Direction, SegmentError, SegmentInstance, SegmentShape,
};
pub use verify::{count_colors, verify_star, Violation, ViolationKind};
