//! Constructive 5-star edge colorings of `GP(n, k)`.
//!
//! Four scripted colorers cover the parameter space: the two `n/d` ratio
//! patterns (`n/d = 2` and `n/d = 5`), the six-step construction for
//! `d >= 3`, and the three covered residue cases for `d = 2`. Everything
//! else routes to the exact solver. Every scripted run is verified; a run
//! that reaches a contradiction falls back to a bounded, domain-restricted
//! repair search, and the report says so (`faithful = false`, with every
//! recolored edge in `repair_log`).

use std::collections::BTreeSet;

use thiserror::Error;

use crate::coloring::{Color, ColorSet, Palette3, PartialColoring};
use crate::exact::{complete_with_domains, find_star_coloring, SearchConfig, SearchResult};
use crate::graph::{EdgeGraph, EdgeId, EdgeKind, GpGraph};
use crate::segment::{extend_cycle_two_paths, process_fill, star_accept, ProcessRule};
use crate::verify::{edge_ok, verify_star};

/// Which construction produced a coloring.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Ratio2,
    Ratio5,
    MainD3,
    D2Case1,
    D2Case2,
    D2Case3,
    ExactFallback,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Ratio2 => "ratio2",
            Method::Ratio5 => "ratio5",
            Method::MainD3 => "main_d3",
            Method::D2Case1 => "d2_case1",
            Method::D2Case2 => "d2_case2",
            Method::D2Case3 => "d2_case3",
            Method::ExactFallback => "exact_fallback",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One edge recolored outside the scripted construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RepairEntry {
    pub edge: EdgeId,
    pub from: Option<Color>,
    pub to: Color,
}

/// Outcome of a construction run.
#[derive(Debug, Clone)]
pub struct ColoringReport {
    /// Total, verifier-clean coloring.
    pub coloring: PartialColoring,
    pub colors_used: usize,
    pub method: Method,
    /// True iff no repair step ran.
    pub faithful: bool,
    pub repair_log: Vec<RepairEntry>,
    /// Outer-cycle edges colored 3 or 4 (at most one for `MainD3`).
    pub c0_offpalette_edges: Vec<EdgeId>,
}

#[derive(Debug, Error)]
pub enum ConstructError {
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("unsupported instance: {0}")]
    Unsupported(String),
    #[error("construction exhausted: {0}")]
    Exhausted(String),
}

/// Largest instance the exact fallback will attempt.
pub const EXACT_FALLBACK_EDGE_BUDGET: usize = 120;

const C0_PALETTE: Palette3 = Palette3 { a: 0, b: 1, c: 2 };

fn spoke_color(i: usize, r: usize) -> Color {
    3 + ((i + r) % 2) as Color
}

// ---------------------------------------------------------------------------
// Dispatch
// ---------------------------------------------------------------------------

/// Routes an instance to its colorer by `(d, n/d)`; anything uncovered goes
/// to the exact solver with a 5-color budget, then 6.
pub fn dispatch(g: &GpGraph) -> Result<ColoringReport, ConstructError> {
    let m = g.cycle_len();
    if m == 2 {
        color_ratio_two(g)
    } else if m == 5 {
        color_ratio_five(g)
    } else if g.d() >= 3 {
        color_main_d3(g)
    } else if g.d() == 2 {
        match color_d2(g) {
            Ok(report) => Ok(report),
            Err(ConstructError::Unsupported(_)) => exact_fallback(g),
            Err(e) => Err(e),
        }
    } else {
        exact_fallback(g)
    }
}

fn exact_fallback(g: &GpGraph) -> Result<ColoringReport, ConstructError> {
    if g.edge_count() > EXACT_FALLBACK_EDGE_BUDGET {
        return Err(ConstructError::Unsupported(format!(
            "GP({},{}) has {} edges, beyond the exact-solver budget of {}",
            g.n(),
            g.k(),
            g.edge_count(),
            EXACT_FALLBACK_EDGE_BUDGET
        )));
    }
    for colors in [5usize, 6] {
        match find_star_coloring(g, &SearchConfig::with_colors(colors)) {
            SearchResult::Found(coloring) => {
                return finish(g, Method::ExactFallback, coloring, Vec::new());
            }
            SearchResult::Infeasible => continue,
            SearchResult::Indeterminate => {
                return Err(ConstructError::Unsupported(format!(
                    "exact fallback exceeded its node budget on GP({},{})",
                    g.n(),
                    g.k()
                )))
            }
        }
    }
    Err(ConstructError::Exhausted(format!(
        "GP({},{}) admits no star coloring with 6 colors",
        g.n(),
        g.k()
    )))
}

/// Verify, repair if necessary, and assemble the report.
fn finish(
    g: &GpGraph,
    method: Method,
    coloring: PartialColoring,
    mut repair_log: Vec<RepairEntry>,
) -> Result<ColoringReport, ConstructError> {
    let mut coloring = coloring;
    let mut faithful = repair_log.is_empty();
    if !verify_star(g, &coloring, true).is_empty() {
        let (fixed, entries) = repair_fallback(g, &coloring, &BTreeSet::new())?;
        coloring = fixed;
        repair_log.extend(entries);
        faithful = false;
    }
    let residual = verify_star(g, &coloring, true);
    if !residual.is_empty() {
        return Err(ConstructError::Exhausted(format!(
            "GP({},{}): {} violations survived repair",
            g.n(),
            g.k(),
            residual.len()
        )));
    }
    let colors_used = crate::verify::count_colors(&coloring);
    let c0_offpalette_edges = offpalette_outer(g, &coloring);
    Ok(ColoringReport {
        coloring,
        colors_used,
        method,
        faithful,
        repair_log,
        c0_offpalette_edges,
    })
}

fn offpalette_outer(g: &GpGraph, coloring: &PartialColoring) -> Vec<EdgeId> {
    (0..g.edge_count())
        .filter(|&e| {
            g.kind(e).on_outer_cycle() && coloring.get(e).is_some_and(|c| c >= 3)
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Repair fallback
// ---------------------------------------------------------------------------

fn repair_domain(g: &GpGraph, e: EdgeId, original: Option<Color>) -> ColorSet {
    let mut dom = match g.kind(e) {
        EdgeKind::Spoke { .. } => ColorSet::of(&[3, 4]),
        EdgeKind::Inner(_) => ColorSet::all_below(5),
        EdgeKind::Outer | EdgeKind::Connector => ColorSet::all_below(3),
    };
    if let Some(c) = original {
        dom.insert(c);
    }
    dom
}

/// Backtracking repair over non-frozen edges with at most 5 colors:
/// violation witnesses are blanked and re-searched under structural
/// domains, widening the unfrozen region (then the domains) until the
/// verifier passes. Every change lands in the returned log.
pub fn repair_fallback(
    g: &GpGraph,
    coloring: &PartialColoring,
    frozen: &BTreeSet<EdgeId>,
) -> Result<(PartialColoring, Vec<RepairEntry>), ConstructError> {
    let violations = verify_star(g, coloring, true);
    if violations.is_empty() {
        return Ok((coloring.clone(), Vec::new()));
    }

    let mut region: BTreeSet<EdgeId> = violations
        .iter()
        .flat_map(|v| v.witness.iter().copied())
        .filter(|e| !frozen.contains(e))
        .collect();
    if region.is_empty() {
        region = (0..g.edge_count()).filter(|e| !frozen.contains(e)).collect();
    }

    let attempt = |region: &BTreeSet<EdgeId>,
                   full_domains: bool,
                   budget: u64|
     -> Option<(PartialColoring, Vec<RepairEntry>)> {
        let mut trial = coloring.clone();
        let vars: Vec<EdgeId> = region.iter().copied().collect();
        for &e in &vars {
            trial.unset(e);
        }
        let domains: Vec<ColorSet> = vars
            .iter()
            .map(|&e| {
                if full_domains {
                    ColorSet::all_below(5)
                } else {
                    repair_domain(g, e, coloring.get(e))
                }
            })
            .collect();
        if !complete_with_domains(g, &mut trial, &vars, &domains, budget) {
            return None;
        }
        if !verify_star(g, &trial, true).is_empty() {
            return None;
        }
        let log: Vec<RepairEntry> = vars
            .iter()
            .filter_map(|&e| {
                let to = trial.get(e)?;
                if coloring.get(e) == Some(to) {
                    None
                } else {
                    Some(RepairEntry {
                        edge: e,
                        from: coloring.get(e),
                        to,
                    })
                }
            })
            .collect();
        Some((trial, log))
    };

    for level in 0..5 {
        let budget = 500_000u64 << level;
        if let Some(found) = attempt(&region, false, budget) {
            return Ok(found);
        }
        // widen: pull in all edges sharing an endpoint with the region
        let mut grown = region.clone();
        for &e in &region {
            let (a, b) = g.endpoints(e);
            for v in [a, b] {
                for &f in g.incident_edges(v) {
                    if !frozen.contains(&f) {
                        grown.insert(f);
                    }
                }
            }
        }
        if grown.len() == region.len() {
            break;
        }
        region = grown;
    }

    let everything: BTreeSet<EdgeId> = (0..g.edge_count()).filter(|e| !frozen.contains(e)).collect();
    if let Some(found) = attempt(&everything, false, 20_000_000) {
        return Ok(found);
    }
    if let Some(found) = attempt(&everything, true, 50_000_000) {
        return Ok(found);
    }
    Err(ConstructError::Exhausted(format!(
        "repair exhausted on GP({},{}) with {} frozen edges",
        g.n(),
        g.k(),
        frozen.len()
    )))
}

// ---------------------------------------------------------------------------
// n/d = 5
// ---------------------------------------------------------------------------

/// The ratio-5 pattern: block-shifted (when `5 | k`) or plainly repeating
/// outer colors, spokes from the missing color of the four-edge outer
/// window, inner edges from the far spoke of their pentagon.
pub fn color_ratio_five(g: &GpGraph) -> Result<ColoringReport, ConstructError> {
    if g.cycle_len() != 5 {
        return Err(ConstructError::Precondition(format!(
            "GP({},{}) has n/d = {}, not 5",
            g.n(),
            g.k(),
            g.cycle_len()
        )));
    }
    let n = g.n();
    let d = g.d();
    let mut col = PartialColoring::for_graph(g);

    if g.k() % 5 == 0 {
        // five outer blocks of d edges, each shifted one color forward
        for j in 0..n {
            let c = ((j + 1 + (j + 1) / d) % 5) as Color;
            col.set(g.outer_edge(j), c).unwrap();
        }
    } else {
        for j in 0..n {
            col.set(g.outer_edge(j), (j % 5) as Color).unwrap();
        }
    }

    // each spoke takes the color absent from the surrounding outer window
    for j in 0..n {
        let window = [
            col.get(g.outer_edge((j + n - 2) % n)),
            col.get(g.outer_edge((j + n - 1) % n)),
            col.get(g.outer_edge(j)),
            col.get(g.outer_edge((j + 1) % n)),
        ];
        let mut seen = ColorSet::EMPTY;
        for c in window.into_iter().flatten() {
            seen.insert(c);
        }
        let c = ColorSet::all_below(5).minus(seen).min().unwrap_or(0);
        col.set(g.spoke_at(j), c).unwrap();
    }

    // Inner edges: for plainly repeating outer colors, adjacent spokes
    // always differ and dodging every spoke within distance two on the
    // pentagon (the far spoke's color) settles each edge. The block
    // patterns leave runs of equal adjacent spokes, where the remaining
    // interactions run through the outer layer; a guarded per-pentagon
    // completion handles both.
    for i in 1..=d {
        let vars: Vec<EdgeId> = (0..5).map(|r| g.inner_edge(i, r)).collect();
        let mut scripted = true;
        for r in 0..5 {
            let mut near = ColorSet::EMPTY;
            for s in [r + 4, r, r + 1, r + 2] {
                near.insert(col.get(g.spoke_edge(i, s % 5)).unwrap());
            }
            let choice = ColorSet::all_below(5).minus(near).min();
            let ok = choice.is_some_and(|c| {
                col.set(vars[r], c).unwrap();
                if edge_ok(g, &col, vars[r]) {
                    true
                } else {
                    col.unset(vars[r]);
                    false
                }
            });
            if !ok {
                scripted = false;
                break;
            }
        }
        if !scripted {
            for &e in &vars {
                col.unset(e);
            }
            let domains = vec![ColorSet::all_below(5); vars.len()];
            if !complete_with_domains(g, &mut col, &vars, &domains, 2_000_000) {
                let (fixed, log) = repair_fallback(g, &col, &BTreeSet::new())?;
                let mut report = finish(g, Method::Ratio5, fixed, log)?;
                report.faithful = false;
                return Ok(report);
            }
        }
    }

    finish(g, Method::Ratio5, col, Vec::new())
}

// ---------------------------------------------------------------------------
// n = 2k
// ---------------------------------------------------------------------------

/// A 3-star coloring of an n-cycle over `{0,1,2}`, via the repeating block
/// pattern with its tail adjustment.
fn three_star_cycle(n: usize) -> Vec<Color> {
    match n {
        3 => vec![0, 1, 2],
        4 => vec![0, 1, 2, 1],
        _ => extend_cycle_two_paths(n, 0, &C0_PALETTE).expect("n != 5 here"),
    }
}

/// The ratio-2 pattern (`n = 2k`): 3-star outer cycle, parity spokes, and
/// the two rim "cycles" (single edges) steered away from the connector
/// colors their distance-two spokes share.
pub fn color_ratio_two(g: &GpGraph) -> Result<ColoringReport, ConstructError> {
    if g.n() != 2 * g.k() {
        return Err(ConstructError::Precondition(format!(
            "GP({},{}) does not satisfy n = 2k",
            g.n(),
            g.k()
        )));
    }
    let n = g.n();
    let d = g.d();
    let mut col = PartialColoring::for_graph(g);

    for (j, c) in three_star_cycle(n).into_iter().enumerate() {
        col.set(g.outer_edge(j), c).unwrap();
    }
    for i in 1..=d {
        col.set(g.spoke_edge(i, 0), spoke_color(i, 0)).unwrap();
        col.set(g.spoke_edge(i, 1), spoke_color(i, 1)).unwrap();
    }
    // C^1 and C^d avoid the colors of u_{n-1}u_0 and u_{d-1}u_d
    let guard = ColorSet::of(&[
        col.get(g.outer_edge(n - 1)).unwrap(),
        col.get(g.outer_edge(d - 1)).unwrap(),
    ]);
    let rim = ColorSet::all_below(3).minus(guard).min().unwrap();
    col.set(g.inner_edge(1, 0), rim).unwrap();
    col.set(g.inner_edge(d, 0), rim).unwrap();
    // remaining inner edges only need to dodge their own spokes {3,4}
    for i in 2..d {
        col.set(g.inner_edge(i, 0), 0).unwrap();
    }

    finish(g, Method::Ratio2, col, Vec::new())
}

// ---------------------------------------------------------------------------
// d >= 3, n/d not in {2, 5}: the six-step construction
// ---------------------------------------------------------------------------

/// Index ranges and seeds of the outer-cycle paths `Q_1, Q_2` (colored in
/// step 4 from the seed table) and `Q_3, Q_4` (closed in step 5).
#[derive(Debug, Clone)]
pub struct SeedPlan {
    /// `f(P_1)..f(P_4)`: seed colors for the edge pairs around the four
    /// special connectors; `None` marks a table cell resolved by search.
    pub table_row: [[Option<Color>; 2]; 4],
    /// Outer positions of the two seed edges of each `P_i`.
    pub p_positions: [[usize; 2]; 4],
    /// Outer positions covered by `Q_1` and `Q_2`.
    pub q1: Vec<usize>,
    pub q2: Vec<usize>,
    /// Gap positions of `Q_3` and `Q_4` (may be empty).
    pub q3: Vec<usize>,
    pub q4: Vec<usize>,
}

/// Working state of the six-step construction, step by step verifiable.
pub struct StepState<'g> {
    pub graph: &'g GpGraph,
    pub coloring: PartialColoring,
    pub seeds: Option<SeedPlan>,
    /// Rim cycle colors `c_0..c_{m-1}` of `C^1` fixed in step 2.
    pub rim: Vec<Color>,
    /// Scripted overwrites (table seeds replacing step-3 colors, the
    /// step-5 connector recolor); not repairs.
    pub scripted_overrides: Vec<RepairEntry>,
}

#[derive(Debug)]
pub struct StepStall(pub String);

impl<'g> StepState<'g> {
    pub fn new(graph: &'g GpGraph) -> Self {
        StepState {
            graph,
            coloring: PartialColoring::for_graph(graph),
            seeds: None,
            rim: Vec::new(),
            scripted_overrides: Vec::new(),
        }
    }

    fn o(&self, j: isize) -> EdgeId {
        let n = self.graph.n() as isize;
        self.graph.outer_edge(j.rem_euclid(n) as usize)
    }

    fn oc(&self, j: isize) -> Option<Color> {
        self.coloring.get(self.o(j))
    }

    fn set(&mut self, e: EdgeId, c: Color) -> Result<(), StepStall> {
        self.coloring
            .set(e, c)
            .map_err(|err| StepStall(err.to_string()))
    }

    fn overwrite_scripted(&mut self, e: EdgeId, c: Color) {
        if self.coloring.get(e) == Some(c) {
            return;
        }
        let from = self.coloring.recolor(e, c);
        self.scripted_overrides.push(RepairEntry { edge: e, from, to: c });
    }

    /// Step 1: spokes alternate 3 and 4 by `i + r` parity.
    pub fn step1_spokes(&mut self) {
        let d = self.graph.d();
        let m = self.graph.cycle_len();
        for i in 1..=d {
            for r in 0..m {
                self.coloring
                    .set(self.graph.spoke_edge(i, r), spoke_color(i, r))
                    .unwrap();
            }
        }
    }

    /// Step 2: `C^1` from the two seeded windows extended by the two-path
    /// lemma; `C^d` as its clockwise t-shift.
    pub fn step2_rim_cycles(&mut self) -> Result<(), StepStall> {
        let g = self.graph;
        let (m, t, d) = (g.cycle_len(), g.t(), g.d());
        let rim: Vec<Color> = if m == 3 {
            // the two windows over-determine a triangle; keep the P window
            let mut v = vec![0; 3];
            v[(t + 1) % 3] = 0;
            v[(t + 2) % 3] = 1;
            v[t % 3] = 2;
            v
        } else {
            let shifted = extend_cycle_two_paths(m, m - t, &C0_PALETTE)
                .map_err(|e| StepStall(format!("rim extension failed: {e}")))?;
            let mut v = vec![0; m];
            for (j, &c) in shifted.iter().enumerate() {
                v[(t + m - 2 + j) % m] = c;
            }
            v
        };
        for r in 0..m {
            self.set(g.inner_edge(1, r), rim[r])?;
        }
        for r in 0..m {
            self.set(g.inner_edge(d, r), rim[(r + t) % m])?;
        }
        self.rim = rim;
        Ok(())
    }

    fn rim_colors_at(&self, r: usize) -> ColorSet {
        let m = self.graph.cycle_len();
        ColorSet::of(&[self.rim[(r + m - 1) % m], self.rim[r % m]])
    }

    /// Step 3: each connector whose two spokes share a color takes the one
    /// color of `{0,1,2}` absent around `v^1_r`.
    pub fn step3_connectors(&mut self) -> Result<(), StepStall> {
        let g = self.graph;
        let (m, t, d, k, n) = (g.cycle_len(), g.t(), g.d(), g.k(), g.n());
        for r in 0..m {
            let s1 = spoke_color(1, r);
            let sd = spoke_color(d, (r + m - t) % m);
            if s1 == sd {
                let e = g.outer_edge((r * k + n - 1) % n);
                let choice = ColorSet::all_below(3)
                    .minus(self.rim_colors_at(r))
                    .min()
                    .ok_or_else(|| StepStall("no color for a same-spoke connector".into()))?;
                self.set(e, choice)?;
            }
        }
        Ok(())
    }

    /// The seed table of step 4, keyed on the parities of `n/d`, `d`, `t`
    /// and the special values of `t`; `None` cells are resolved by search.
    pub fn seed_table(&self) -> [[Option<Color>; 2]; 4] {
        let g = self.graph;
        let (m, d, t) = (g.cycle_len(), g.d(), g.t());
        let s = |p: [Color; 2]| [Some(p[0]), Some(p[1])];
        let q = |x: Color| [None, Some(x)];
        if m % 2 == 1 {
            if d % 2 == 1 {
                if t % 2 == 1 {
                    if t == 1 && d == 5 {
                        [s([3, 1]), s([0, 2]), s([2, 1]), s([0, 3])]
                    } else if t == 1 {
                        [s([2, 1]), s([0, 2]), s([2, 1]), s([0, 2])]
                    } else if t == m - 2 {
                        [s([2, 0]), s([0, 2]), s([2, 0]), s([0, 2])]
                    } else {
                        [s([0, 1]), s([0, 2]), s([0, 1]), s([0, 2])]
                    }
                } else if t == 2 && t != m - 1 {
                    [s([0, 2]), s([2, 0]), s([0, 2]), s([2, 0])]
                } else if t == m - 1 && d == 5 {
                    [s([0, 1]), s([2, 3]), s([3, 1]), s([2, 0])]
                } else if t == m - 1 {
                    [s([0, 1]), s([2, 0]), s([0, 1]), s([2, 0])]
                } else {
                    [s([1, 0]), s([2, 0]), s([1, 0]), s([2, 0])]
                }
            } else if t % 2 == 1 {
                if t == 1 {
                    [s([2, 1]), s([0, 4]), s([2, 1]), s([0, 2])]
                } else if t == m - 2 {
                    [s([0, 2]), s([2, 0]), s([0, 2]), s([2, 0])]
                } else {
                    [s([1, 0]), s([2, 0]), s([1, 0]), s([2, 0])]
                }
            } else if t == m - 1 {
                [s([0, 1]), s([2, 0]), s([0, 1]), s([2, 4])]
            } else if t == 2 {
                [s([2, 0]), s([0, 2]), s([2, 0]), s([0, 2])]
            } else {
                [s([0, 1]), s([0, 2]), s([0, 1]), s([0, 2])]
            }
        } else {
            // even n/d forces odd t
            if d % 2 == 1 {
                [s([2, 1]), q(0), s([0, 1]), q(2)]
            } else if t == 1 {
                [s([2, 0]), q(0), s([2, 1]), q(2)]
            } else if t == m - 1 {
                [s([0, 1]), q(0), s([0, 2]), q(2)]
            } else {
                [s([0, 1]), q(0), s([1, 2]), q(2)]
            }
        }
    }

    /// Outer positions of the two seed edges of `P_1..P_4`.
    pub fn p_positions(&self) -> [[usize; 2]; 4] {
        let (d, ell) = (self.graph.d() as isize, self.graph.ell() as isize);
        [
            [self.pidx(-1), self.pidx(0)],
            [self.pidx(d - 2), self.pidx(d - 1)],
            [self.pidx(ell - 1), self.pidx(ell)],
            [self.pidx(ell + d - 2), self.pidx(ell + d - 1)],
        ]
    }

    /// Per-cell color choices for the eight step-4 seed slots. A seed slot
    /// landing on a connector whose two spokes share a color is pinned to
    /// the one admissible rim-palette color, with the spare spoke color as
    /// the escape (the table's occasional 3s and 4s); every other slot
    /// ranges over the rim palette.
    fn seed_cell_domains(&self) -> [[ColorSet; 2]; 4] {
        let g = self.graph;
        let (m, t, d) = (g.cycle_len(), g.t(), g.d());
        let p_positions = self.p_positions();
        let mut domains = [[ColorSet::all_below(3); 2]; 4];
        for (pi, pair) in p_positions.iter().enumerate() {
            for (si, &pos) in pair.iter().enumerate() {
                if (pos + 1) % d != 0 {
                    continue;
                }
                let q = (pos + 1) / d;
                let r = (q * t) % m;
                if let Some(sigma) = {
                    let s1 = spoke_color(1, r);
                    let sd = spoke_color(d, (r + m - t) % m);
                    (s1 == sd).then_some(s1)
                } {
                    let forced = ColorSet::all_below(3).minus(self.rim_colors_at(r));
                    let mut dom = forced;
                    dom.insert(if sigma == 3 { 4 } else { 3 });
                    domains[pi][si] = dom;
                }
            }
        }
        domains
    }

    /// Ordered seed candidates for step 4: the printed row first (its `?`
    /// cells resolved in ascending order), then the other row shapes of
    /// the table, then the enumeration of the per-cell domains with as few
    /// off-palette cells as possible. A handful of parameter classes need
    /// a row other than the printed one before steps 5 and 6 can finish;
    /// the loop in [`color_main_d3`] walks this list until the whole
    /// script verifies.
    pub fn seed_candidates(&self) -> Vec<[[Color; 2]; 4]> {
        let row = self.seed_table();
        let mut out: Vec<[[Color; 2]; 4]> = Vec::new();
        let push = |cand: [[Color; 2]; 4], out: &mut Vec<[[Color; 2]; 4]>| {
            if !out.contains(&cand) {
                out.push(cand);
            }
        };

        let holes: Vec<(usize, usize)> = (0..4)
            .flat_map(|p| (0..2).map(move |s| (p, s)))
            .filter(|&(p, s)| row[p][s].is_none())
            .collect();
        let concrete = |fill: &[Color]| -> [[Color; 2]; 4] {
            let mut it = fill.iter();
            let mut c = [[0; 2]; 4];
            for p in 0..4 {
                for s in 0..2 {
                    c[p][s] = row[p][s].unwrap_or_else(|| *it.next().unwrap());
                }
            }
            c
        };
        match holes.len() {
            0 => push(concrete(&[]), &mut out),
            1 => {
                for a in 0..3 {
                    push(concrete(&[a]), &mut out);
                }
            }
            _ => {
                for a in 0..3 {
                    for b in 0..3 {
                        push(concrete(&[a, b]), &mut out);
                    }
                }
            }
        }

        // the other shapes the table uses
        for shape in [
            [[2, 1], [0, 2], [2, 1], [0, 2]],
            [[2, 0], [0, 2], [2, 0], [0, 2]],
            [[0, 1], [0, 2], [0, 1], [0, 2]],
            [[0, 2], [2, 0], [0, 2], [2, 0]],
            [[0, 1], [2, 0], [0, 1], [2, 0]],
            [[1, 0], [2, 0], [1, 0], [2, 0]],
        ] {
            push(shape, &mut out);
        }

        // everything the per-cell domains admit, fewest escapes first
        let domains = self.seed_cell_domains();
        let flat: Vec<ColorSet> = domains.iter().flatten().copied().collect();
        let mut enumerated: Vec<(usize, [[Color; 2]; 4])> = Vec::new();
        let mut cursor = vec![0usize; 8];
        'enumerate: loop {
            let mut cand = [[0 as Color; 2]; 4];
            let mut escapes = 0usize;
            for (idx, dom) in flat.iter().enumerate() {
                let c = dom.iter().nth(cursor[idx]).unwrap();
                if c >= 3 {
                    escapes += 1;
                }
                cand[idx / 2][idx % 2] = c;
            }
            enumerated.push((escapes, cand));
            // odometer over the domain sizes
            for idx in (0..8).rev() {
                cursor[idx] += 1;
                if cursor[idx] < flat[idx].len() {
                    continue 'enumerate;
                }
                cursor[idx] = 0;
                if idx == 0 {
                    break 'enumerate;
                }
            }
        }
        enumerated.sort_by_key(|&(escapes, cand)| (escapes, cand));
        for (_, cand) in enumerated {
            push(cand, &mut out);
        }
        out
    }

    /// Step 4 for one concrete seed row, then steps 5 and 6, then full
    /// verification; any stall or residual defect rejects the candidate.
    pub fn run_steps_4_to_6(&mut self, row: &[[Color; 2]; 4]) -> Result<(), StepStall> {
        let g = self.graph;
        let (n, d, ell) = (g.n() as isize, g.d() as isize, g.ell() as isize);
        let p_positions = self.p_positions();
        let optional: [[Option<Color>; 2]; 4] = [
            [Some(row[0][0]), Some(row[0][1])],
            [Some(row[1][0]), Some(row[1][1])],
            [Some(row[2][0]), Some(row[2][1])],
            [Some(row[3][0]), Some(row[3][1])],
        ];
        self.try_step4(&optional, &p_positions)?;
        self.step5_q3_q4()?;
        self.step6_middle_cycles()?;
        let violations = verify_star(g, &self.coloring, true);
        if !violations.is_empty() {
            return Err(StepStall(format!(
                "{} violations after the six steps",
                violations.len()
            )));
        }
        self.seeds = Some(SeedPlan {
            table_row: self.seed_table(),
            p_positions,
            q1: self.q_positions(-1, d - 1),
            q2: self.q_positions(ell - 1, ell + d - 1),
            q3: self.gap_positions(d, ell - 2),
            q4: self.gap_positions(ell + d, n - 2),
        });
        Ok(())
    }

    fn pidx(&self, j: isize) -> usize {
        let n = self.graph.n() as isize;
        j.rem_euclid(n) as usize
    }

    fn q_positions(&self, from: isize, to: isize) -> Vec<usize> {
        (from..=to).map(|j| self.pidx(j)).collect()
    }

    fn gap_positions(&self, from: isize, to: isize) -> Vec<usize> {
        if from > to {
            Vec::new()
        } else {
            (from..=to).map(|j| self.pidx(j)).collect()
        }
    }

    fn try_step4(
        &mut self,
        row: &[[Option<Color>; 2]; 4],
        p_positions: &[[usize; 2]; 4],
    ) -> Result<(), StepStall> {
        let g = self.graph;
        let (d, t, ell, m) = (g.d() as isize, g.t(), g.ell() as isize, g.cycle_len());

        // fold the eight seeds, demanding agreement where paths share edges
        let mut plan: std::collections::BTreeMap<EdgeId, Color> = std::collections::BTreeMap::new();
        for (pi, pair) in row.iter().enumerate() {
            for (s, cell) in pair.iter().enumerate() {
                let c = cell.expect("resolved row");
                let e = self.graph.outer_edge(p_positions[pi][s]);
                if let Some(&prev) = plan.get(&e) {
                    if prev != c {
                        return Err(StepStall(format!(
                            "seed table disagrees with itself on outer edge {e}"
                        )));
                    }
                } else {
                    plan.insert(e, c);
                }
            }
        }
        for (e, c) in plan {
            self.overwrite_scripted(e, c);
        }

        // extension order per the overlap structure
        let q1_window: Vec<EdgeId> = self.q_positions(-1, d - 1).iter().map(|&p| g.outer_edge(p)).collect();
        let q2_window: Vec<EdgeId> = self
            .q_positions(ell - 1, ell + d - 1)
            .iter()
            .map(|&p| g.outer_edge(p))
            .collect();
        let q1_gap: Vec<usize> = self.gap_positions(1, d - 3);
        let q2_gap: Vec<usize> = self.gap_positions(ell + 1, ell + d - 3);

        if m % 2 == 1 {
            let (src_win, src_gap, dst_win, dst_gap) = if t == 1 {
                (&q2_window, &q2_gap, &q1_window, &q1_gap)
            } else {
                (&q1_window, &q1_gap, &q2_window, &q2_gap)
            };
            self.extend_q(src_win)?;
            // mirror the source pattern into the destination gap
            let mut copied = Vec::new();
            for (a, b) in dst_gap.iter().zip(src_gap.iter()) {
                let c = self
                    .coloring
                    .get(g.outer_edge(*b))
                    .ok_or_else(|| StepStall("source gap incomplete".into()))?;
                let e = g.outer_edge(*a);
                self.set(e, c)?;
                copied.push(e);
            }
            let copy_ok = copied.iter().all(|&e| edge_ok(g, &self.coloring, e));
            if !copy_ok {
                for &e in &copied {
                    self.coloring.unset(e);
                }
                self.extend_q(dst_win)?;
            }
        } else {
            let (first, second) = if t == 1 {
                (&q2_window, &q1_window)
            } else {
                (&q1_window, &q2_window)
            };
            self.extend_q(first)?;
            self.extend_q(second)?;
            // the two post-conditions that step 5's shared direction needs
            let f_d2 = ColorSet::of(
                &[self.oc(d - 3), self.oc(d - 1)].iter().copied().flatten().collect::<Vec<_>>(),
            );
            let f_ld2 = ColorSet::of(
                &[self.oc(ell + d - 3), self.oc(ell + d - 1)]
                    .iter()
                    .copied()
                    .flatten()
                    .collect::<Vec<_>>(),
            );
            let f_l = ColorSet::of(
                &[self.oc(ell - 1), self.oc(ell + 1)].iter().copied().flatten().collect::<Vec<_>>(),
            );
            if f_d2.len() != 1 && f_ld2.len() == 1 {
                return Err(StepStall("post-condition 1 failed".into()));
            }
            if f_d2.len() == 1 && f_l.len() == 1 {
                return Err(StepStall("post-condition 2 failed".into()));
            }
        }

        // local validity of everything seeded so far (this includes the
        // odd-ratio rim-closing constraints: those closing edges are
        // already colored, so their bicolored paths are visible here)
        for pair in p_positions {
            for &p in pair {
                if !edge_ok(g, &self.coloring, g.outer_edge(p)) {
                    let walk = crate::verify::first_bad_walk(g, &self.coloring, g.outer_edge(p));
                    return Err(StepStall(format!(
                        "seed at outer position {p} is invalid: {:?} colors {:?}",
                        walk,
                        walk.as_ref().map(|w| {
                            w.iter().map(|&e| self.coloring.get(e)).collect::<Vec<_>>()
                        })
                    )));
                }
            }
        }
        Ok(())
    }

    /// Extends one Q window by the guarded greedy, falling back to a
    /// domain search over its gap.
    fn extend_q(&mut self, window: &[EdgeId]) -> Result<(), StepStall> {
        let g = self.graph;
        let gap: Vec<EdgeId> = window
            .iter()
            .copied()
            .filter(|&e| !self.coloring.is_assigned(e))
            .collect();
        if gap.is_empty() {
            return Ok(());
        }
        let mut accept = star_accept(g);
        if process_fill(&mut self.coloring, window, &C0_PALETTE, ProcessRule::Two, &mut accept)
            .is_ok()
        {
            return Ok(());
        }
        for &e in &gap {
            self.coloring.unset(e);
        }
        let domains = vec![ColorSet::all_below(3); gap.len()];
        if complete_with_domains(g, &mut self.coloring, &gap, &domains, 1_000_000) {
            Ok(())
        } else {
            Err(StepStall("Q window admits no {0,1,2} extension".into()))
        }
    }

    /// Step 5: close `Q_3` and `Q_4`, with the direction rule and the
    /// last-connector treatment for `d` in `{3, 4}`.
    pub fn step5_q3_q4(&mut self) -> Result<(), StepStall> {
        let g = self.graph;
        let (n, d, ell) = (g.n() as isize, g.d() as isize, g.ell() as isize);
        let f_d2 = ColorSet::of(
            &[self.oc(d - 3), self.oc(d - 1)].iter().copied().flatten().collect::<Vec<_>>(),
        );
        let clockwise = f_d2.len() == 1;

        let runs: [(isize, isize, [isize; 2], [isize; 2]); 2] = [
            (d, ell - 2, [d - 2, d - 1], [ell - 1, ell]),
            (ell + d, n - 2, [ell + d - 2, ell + d - 1], [n - 1, 0]),
        ];
        for (from, to, left, right) in runs {
            self.fill_q_run(from, to, left, right, clockwise)?;
        }
        Ok(())
    }

    fn fill_q_run(
        &mut self,
        from: isize,
        to: isize,
        left_flank: [isize; 2],
        right_flank: [isize; 2],
        clockwise: bool,
    ) -> Result<(), StepStall> {
        if from > to {
            return Ok(());
        }
        let g = self.graph;
        let d = g.d() as isize;

        // gap positions in fill order
        let gap: Vec<isize> = if clockwise {
            (from..=to).collect()
        } else {
            (from..=to).rev().collect()
        };
        let connectors: Vec<usize> = gap
            .iter()
            .enumerate()
            .filter(|(_, &p)| (p + 1) % d == 0)
            .map(|(idx, _)| idx)
            .collect();

        // the last connector in fill order starts the final region of d edges
        let region_start_idx = connectors.last().copied();
        let (phase_a, region): (Vec<isize>, Vec<isize>) = match region_start_idx {
            Some(idx) => (gap[..idx].to_vec(), gap[idx..].to_vec()),
            None => (Vec::new(), gap.clone()),
        };
        debug_assert!(region_start_idx.is_none() || region.len() == d as usize);

        let (near, far) = if clockwise {
            (left_flank, right_flank)
        } else {
            ([right_flank[1], right_flank[0]], [left_flank[1], left_flank[0]])
        };

        let mut window_a: Vec<EdgeId> = vec![self.o(near[0]), self.o(near[1])];
        window_a.extend(phase_a.iter().map(|&p| self.o(p)));
        let phase_a_open: Vec<EdgeId> = phase_a
            .iter()
            .map(|&p| self.o(p))
            .filter(|&e| !self.coloring.is_assigned(e))
            .collect();
        let mut accept = star_accept(g);
        let phase_a_result =
            process_fill(&mut self.coloring, &window_a, &C0_PALETTE, ProcessRule::One, &mut accept);
        drop(accept);
        if phase_a_result.is_err() {
            // greedy painted itself into a pre-colored connector; re-solve
            // the whole stretch by search
            for &e in &phase_a_open {
                self.coloring.unset(e);
            }
            let domains = vec![ColorSet::all_below(3); phase_a_open.len()];
            if !complete_with_domains(g, &mut self.coloring, &phase_a_open, &domains, 200_000) {
                return Err(StepStall("step 5 run admits no {0,1,2} extension".into()));
            }
        }

        // last-connector treatment
        let dir: isize = if clockwise { 1 } else { -1 };
        if let Some(&region_first) = region.first() {
            if region_start_idx.is_some() && (3..=4).contains(&d) {
                let e_c = region_first;
                let ec_edge = self.o(e_c);
                let at = |off: isize| self.oc(e_c + dir * off);
                match self.coloring.get(ec_edge) {
                    None => {
                        // spokes differ: pick per the d-specific rule
                        let mut cands = if d == 3 {
                            let mut s = ColorSet::EMPTY;
                            if let Some(c) = at(3) {
                                s.insert(c);
                            }
                            if let Some(c) = at(4) {
                                s.insert(c);
                            }
                            if let Some(c) = at(-1) {
                                s.remove(c);
                            }
                            s
                        } else {
                            let mut s = ColorSet::all_below(3);
                            if let Some(c) = at(-1) {
                                s.remove(c);
                            }
                            if let Some(c) = at(5) {
                                s.remove(c);
                            }
                            s
                        };
                        // keep the outer palette
                        cands = cands.minus(ColorSet::of(&[3, 4, 5, 6]));
                        let mut placed = false;
                        for c in cands.iter() {
                            self.coloring.set(ec_edge, c).unwrap();
                            if edge_ok(g, &self.coloring, ec_edge) {
                                placed = true;
                                break;
                            }
                            self.coloring.unset(ec_edge);
                        }
                        if !placed {
                            return Err(StepStall("no color for the last connector".into()));
                        }
                    }
                    Some(current) => {
                        // spokes share a color: escape to {3,4} when the
                        // look-ahead pins the palette shut
                        let spoke_shared = self.connector_spoke_shared_color(e_c);
                        let must_escape = match d {
                            3 => {
                                let look = ColorSet::of(
                                    &[at(3), at(4)].iter().copied().flatten().collect::<Vec<_>>(),
                                );
                                !look.contains(current)
                            }
                            _ => at(5) == Some(current),
                        };
                        if must_escape {
                            if let Some(a) = spoke_shared {
                                let escape = if a == 3 { 4 } else { 3 };
                                self.overwrite_scripted(ec_edge, escape);
                            }
                        }
                    }
                }
            }
            // region fill with look-ahead into the far flank
            let mut window_b: Vec<EdgeId> = vec![
                self.o(region_first - 2 * dir),
                self.o(region_first - dir),
            ];
            window_b.extend(region.iter().map(|&p| self.o(p)));
            window_b.push(self.o(far[0]));
            window_b.push(self.o(far[1]));
            let region_open: Vec<EdgeId> = region
                .iter()
                .map(|&p| self.o(p))
                .filter(|&e| !self.coloring.is_assigned(e))
                .collect();
            let mut accept = star_accept(g);
            let fill = process_fill(
                &mut self.coloring,
                &window_b,
                &C0_PALETTE,
                ProcessRule::Two,
                &mut accept,
            );
            drop(accept);
            if fill.is_err() {
                for &e in &region_open {
                    self.coloring.unset(e);
                }
                let domains = vec![ColorSet::all_below(3); region_open.len()];
                if !complete_with_domains(g, &mut self.coloring, &region_open, &domains, 200_000) {
                    return Err(StepStall("step 5 region admits no {0,1,2} completion".into()));
                }
            }
        }
        Ok(())
    }

    /// The shared color of the two spokes flanking the connector at outer
    /// position `p`, when they agree.
    fn connector_spoke_shared_color(&self, p: isize) -> Option<Color> {
        let g = self.graph;
        let (m, t, d) = (g.cycle_len(), g.t(), g.d());
        let pos = self.pidx(p);
        debug_assert_eq!((pos + 1) % g.d(), 0);
        let q = (pos + 1) / g.d();
        let r = (q * t) % m;
        let s1 = spoke_color(1, r);
        let sd = spoke_color(d, (r + m - t) % m);
        (s1 == sd).then_some(s1)
    }

    /// Step 6: close the middle cycles `C^2..C^{d-1}`.
    pub fn step6_middle_cycles(&mut self) -> Result<(), StepStall> {
        let g = self.graph;
        let (n, d, m, t) = (g.n(), g.d(), g.cycle_len(), g.t());
        let ell = g.ell();

        // constraints radiating from off-palette connectors
        let mut pair_constraints: Vec<(usize, usize, Color)> = Vec::new(); // (cycle, vertex slot, avoid)
        for p in 0..n {
            let e = g.outer_edge(p);
            if self.coloring.get(e).is_some_and(|c| c >= 3) {
                if (p + 1) % d != 0 {
                    return Err(StepStall(format!(
                        "off-palette outer edge at position {p} is not a connector"
                    )));
                }
                let q = (p + 1) / d;
                let avoid_fwd = self
                    .oc(p as isize + 1)
                    .ok_or_else(|| StepStall("outer neighborhood incomplete".into()))?;
                let avoid_bwd = self
                    .oc(p as isize - 1)
                    .ok_or_else(|| StepStall("outer neighborhood incomplete".into()))?;
                if d > 3 {
                    pair_constraints.push((2, (q * t) % m, avoid_fwd));
                    pair_constraints.push((d - 1, ((q + m - 1) * t) % m, avoid_bwd));
                } else {
                    pair_constraints.push((2, (q * t) % m, avoid_fwd));
                    pair_constraints.push((2, ((q + m - 1) * t) % m, avoid_bwd));
                }
            }
        }

        for i in 2..d {
            let closing: Option<Color> = if m % 2 == 1 {
                let f_a = ColorSet::of(
                    &[self.oc(i as isize - 2), self.oc(i as isize - 1)]
                        .iter()
                        .copied()
                        .flatten()
                        .collect::<Vec<_>>(),
                );
                let f_b = ColorSet::of(
                    &[self.oc((ell + i) as isize - 2), self.oc((ell + i) as isize - 1)]
                        .iter()
                        .copied()
                        .flatten()
                        .collect::<Vec<_>>(),
                );
                match ColorSet::all_below(3).minus(f_a.union(f_b)).min() {
                    Some(c) => Some(c),
                    None => {
                        // both outer windows exhaust {0,1,2}: escape to the
                        // spoke color the closing edge does not touch
                        let sigma = spoke_color(i, 0);
                        Some(if sigma == 3 { 4 } else { 3 })
                    }
                }
            } else {
                None
            };
            let my_pairs: Vec<(usize, Color)> = pair_constraints
                .iter()
                .filter(|&&(cyc, _, _)| cyc == i)
                .map(|&(_, w, avoid)| (w, avoid))
                .collect();
            self.close_middle_cycle(i, closing, &my_pairs)?;
        }
        Ok(())
    }

    fn close_middle_cycle(
        &mut self,
        i: usize,
        closing: Option<Color>,
        pairs: &[(usize, Color)],
    ) -> Result<(), StepStall> {
        let g = self.graph;
        let m = g.cycle_len();
        let edges = g.inner_cycle_edges(i);

        let closing_ok = match closing {
            Some(c) => {
                self.coloring.set(edges[m - 1], c).is_ok()
                    && edge_ok(g, &self.coloring, edges[m - 1])
            }
            None => true,
        };

        // pattern fast path when nothing else constrains the cycle
        if closing_ok && pairs.is_empty() {
            let start = closing.unwrap_or(0);
            let rest = ColorSet::all_below(3).minus(ColorSet::singleton(start));
            let mut it = rest.iter();
            if rest.len() >= 2 && m != 5 {
                let pal = Palette3::new(start, it.next().unwrap(), it.next().unwrap());
                if let Ok(pattern) = extend_cycle_two_paths(m, 0, &pal) {
                    let snapshot = self.coloring.clone();
                    let mut ok = true;
                    for (j, &c) in pattern.iter().enumerate() {
                        let e = edges[(m - 1 + j) % m];
                        if self.coloring.set(e, c).is_err() || !edge_ok(g, &self.coloring, e) {
                            ok = false;
                            break;
                        }
                    }
                    if ok {
                        return Ok(());
                    }
                    self.coloring = snapshot;
                }
            }
        }

        // constrained completion: domains encode the avoid-sets; the
        // closing edge keeps the prescribed color when that works and is
        // reopened over the full palette when it does not
        let mut domains: Vec<ColorSet> = vec![ColorSet::all_below(3); m];
        for &(w, avoid) in pairs {
            for slot in [(w + m - 1) % m, w] {
                domains[slot] = domains[slot].minus(ColorSet::singleton(avoid));
            }
        }
        for attempt in 0..2 {
            if attempt == 1 {
                if closing.is_none() {
                    break;
                }
                self.coloring.unset(edges[m - 1]);
                domains[m - 1] = {
                    let mut d = ColorSet::all_below(5);
                    for &(w, avoid) in pairs {
                        if w == 0 || w == m - 1 {
                            d.remove(avoid);
                        }
                    }
                    d
                };
            } else if !closing_ok {
                continue;
            }
            let open: Vec<(EdgeId, ColorSet)> = (0..m)
                .filter(|&r| !self.coloring.is_assigned(edges[r]))
                .map(|r| (edges[r], domains[r]))
                .collect();
            let vars: Vec<EdgeId> = open.iter().map(|&(e, _)| e).collect();
            let doms: Vec<ColorSet> = open.iter().map(|&(_, d)| d).collect();
            if complete_with_domains(g, &mut self.coloring, &vars, &doms, 500_000) {
                return Ok(());
            }
        }
        Err(StepStall(format!("C^{i} admits no constrained 3-star completion")))
    }
}

/// How many seed rows [`color_main_d3`] tries before handing the partial
/// state to the repair engine, and how many of those may reach the
/// extension machinery.
const MAX_SEED_ATTEMPTS: usize = 8000;
const MAX_DEEP_ATTEMPTS: usize = 400;

/// The six-step construction for `d >= 3`, `n/d` outside `{2, 5}`.
pub fn color_main_d3(g: &GpGraph) -> Result<ColoringReport, ConstructError> {
    if g.d() < 3 {
        return Err(ConstructError::Precondition(format!(
            "GP({},{}) has gcd {} < 3",
            g.n(),
            g.k(),
            g.d()
        )));
    }
    let m = g.cycle_len();
    if m == 2 || m == 5 {
        return Err(ConstructError::Precondition(format!(
            "n/d = {m} belongs to the ratio patterns"
        )));
    }

    let mut st = StepState::new(g);
    st.step1_spokes();
    let prelude: Result<(), StepStall> = st.step2_rim_cycles().and_then(|_| st.step3_connectors());
    let mut claim_overflow: Option<PartialColoring> = None;
    if prelude.is_ok() {
        let base = st.coloring.clone();
        // candidates rejected at seeding are near-free; cap the ones that
        // reach the extension machinery so hard instances stay bounded
        let mut deep_attempts = 0usize;
        for row in st.seed_candidates().into_iter().take(MAX_SEED_ATTEMPTS) {
            st.coloring = base.clone();
            st.scripted_overrides.clear();
            match st.run_steps_4_to_6(&row) {
                Ok(()) => {
                    if offpalette_outer(g, &st.coloring).len() <= 1 {
                        return finish(g, Method::MainD3, st.coloring, Vec::new());
                    }
                    // verified, but the outer cycle needed a second escape
                    // color; keep looking for a claim-compliant row
                    if claim_overflow.is_none() {
                        claim_overflow = Some(st.coloring.clone());
                    }
                    deep_attempts += 1;
                }
                Err(stall) => {
                    if !stall.0.starts_with("seed ") {
                        deep_attempts += 1;
                    }
                }
            }
            if deep_attempts >= MAX_DEEP_ATTEMPTS {
                break;
            }
        }
        st.coloring = base;
    }

    // No seed row satisfies the one-escape claim. A verified coloring with
    // two escapes beats a repair from scratch; report it as the scripted
    // method and let its off-palette list speak for itself.
    if let Some(coloring) = claim_overflow {
        return finish(g, Method::MainD3, coloring, Vec::new());
    }

    // scripted contradiction: repair from the steps-1..3 scaffold
    let (fixed, log) = repair_fallback(g, &st.coloring, &BTreeSet::new())?;
    let mut report = finish(g, Method::MainD3, fixed, log)?;
    report.faithful = false;
    Ok(report)
}

// ---------------------------------------------------------------------------
// d = 2: the three covered residue classes
// ---------------------------------------------------------------------------

/// The `d = 2` construction for the covered residues: `n = 0 (mod 6)`;
/// `n = 2 (mod 6)` with `t = 2 (mod 3)`; `n = 4 (mod 6)` with
/// `t = 1 (mod 3)`. Everything else is `Unsupported` (the dispatcher then
/// falls back to the exact solver).
pub fn color_d2(g: &GpGraph) -> Result<ColoringReport, ConstructError> {
    let (method, col, complete) = d2_script(g)?;
    if !complete {
        // leave the gap to the repair engine
        let (fixed, log) = repair_fallback(g, &col, &BTreeSet::new())?;
        let mut report = finish(g, method, fixed, log)?;
        report.faithful = false;
        return Ok(report);
    }
    finish(g, method, col, Vec::new())
}

/// The scripted part of the `d = 2` construction, up to (not including)
/// verification and repair. The flag reports whether the outer completion
/// closed every edge.
fn d2_script(g: &GpGraph) -> Result<(Method, PartialColoring, bool), ConstructError> {
    if g.d() != 2 {
        return Err(ConstructError::Precondition(format!(
            "GP({},{}) has gcd {}, not 2",
            g.n(),
            g.k(),
            g.d()
        )));
    }
    if g.n() == 2 * g.k() {
        return Err(ConstructError::Precondition("n = 2k belongs to the ratio-2 pattern".into()));
    }
    let (n, k, t, ell) = (g.n(), g.k(), g.t(), g.ell());
    let m = n / 2;
    if m == 5 {
        return Err(ConstructError::Unsupported("n/d = 5 belongs to the ratio-5 pattern".into()));
    }
    let method = match (n % 6, t % 3) {
        (0, _) => Method::D2Case1,
        (2, 2) => Method::D2Case2,
        (4, 1) => Method::D2Case3,
        _ => {
            return Err(ConstructError::Unsupported(format!(
                "GP({n},{k}): n = {} (mod 6) with t = {} (mod 3) is not covered",
                n % 6,
                t % 3
            )))
        }
    };

    let mut col = PartialColoring::for_graph(g);

    // step 1 spokes
    for i in 1..=2usize {
        for r in 0..m {
            col.set(g.spoke_edge(i, r), spoke_color(i, r)).unwrap();
        }
    }

    // C^1 pattern per case; C^2 is its t-shift
    let rim = d2_rim_pattern(method, m, t);
    for (r, &c) in rim.iter().enumerate() {
        col.set(g.inner_edge(1, r), c).unwrap();
    }
    for r in 0..m {
        col.set(g.inner_edge(2, r), rim[(r + t) % m]).unwrap();
    }

    // Outer domains. A connector flanked by same-colored spokes must take
    // the one color of {0,1,2} absent around v^1_r, or escape to the spare
    // {3,4} color as in step 5 of the main construction; every other outer
    // edge stays on {0,1,2}. The completion search below realizes
    // "consecutive connectors differ, middles dodge their neighbors"
    // wherever the structure forces it.
    let mut outer_domains: std::collections::BTreeMap<EdgeId, ColorSet> =
        std::collections::BTreeMap::new();
    for r in 0..m {
        let s1 = spoke_color(1, r);
        let s2 = spoke_color(2, (r + m - t) % m);
        let e = g.outer_edge((r * k + n - 1) % n);
        if s1 == s2 {
            let mut dom = ColorSet::all_below(3)
                .minus(ColorSet::of(&[rim[(r + m - 1) % m], rim[r]]));
            dom.insert(if s1 == 3 { 4 } else { 3 });
            outer_domains.insert(e, dom);
        }
    }

    if method == Method::D2Case3 {
        d2_case3_surgery(g, &mut col, &mut outer_domains);
        let complete = d2_complete_outer(g, &mut col, &outer_domains, 10_000_000);
        return Ok((method, col, complete));
    }

    // cases 1 and 2: seed the three-edge paths around u_0 and u_ell,
    // preferring the printed assignment, then search the six slots
    let slots: [usize; 6] = [n - 1, 0, 1, (ell + n - 1) % n, ell, (ell + 1) % n];
    let paper: [Color; 6] = match (method, t % 3, t % 2) {
        (Method::D2Case1, 1, 1) => [0, 1, 2, 2, 1, 0],
        (Method::D2Case1, 1, _) => [1, 2, 0, 0, 2, 1],
        (Method::D2Case1, _, 1) => [1, 2, 0, 0, 2, 1],
        (Method::D2Case1, _, _) => [2, 0, 1, 1, 0, 2],
        (Method::D2Case2, _, 1) => [1, 2, 0, 0, 1, 2],
        (Method::D2Case2, _, _) => [2, 0, 1, 2, 1, 0],
        _ => unreachable!(),
    };

    // rim closing edges whose same-colored spokes look into these slots
    // (conditions alive only for odd n/2)
    let c1_close = rim[m - 1];
    let c2_close = rim[(t + m - 1) % m];
    let guard = |a: &[Color; 6]| -> bool {
        if m % 2 == 1 {
            if a[0] == c1_close || a[1] == c1_close || a[3] == c1_close || a[4] == c1_close {
                return false;
            }
            if a[1] == c2_close || a[2] == c2_close || a[4] == c2_close || a[5] == c2_close {
                return false;
            }
        }
        true
    };

    let mut candidates: Vec<[Color; 6]> = vec![paper];
    for code in 0..3usize.pow(6) {
        let mut c = code;
        let mut a = [0 as Color; 6];
        for slot in a.iter_mut() {
            *slot = (c % 3) as Color;
            c /= 3;
        }
        if a != paper {
            candidates.push(a);
        }
    }

    let mut attempts = 0usize;
    for assignment in candidates {
        if !guard(&assignment) {
            continue;
        }
        let mut trial = col.clone();
        let mut placed = true;
        for (idx, &p) in slots.iter().enumerate() {
            let e = g.outer_edge(p);
            let c = assignment[idx];
            if let Some(dom) = outer_domains.get(&e) {
                if !dom.contains(c) {
                    placed = false;
                    break;
                }
            }
            match trial.get(e) {
                Some(existing) if existing == c => {}
                Some(_) => {
                    placed = false;
                    break;
                }
                None => trial.set(e, c).unwrap(),
            }
            if !edge_ok(g, &trial, e) {
                placed = false;
                break;
            }
        }
        if !placed {
            continue;
        }
        attempts += 1;
        if d2_complete_outer(g, &mut trial, &outer_domains, 400_000) {
            return Ok((method, trial, true));
        }
        if attempts >= 60 {
            break;
        }
    }
    // no seeded completion: hand the scaffold to the repair engine
    Ok((method, col, false))
}

fn d2_complete_outer(
    g: &GpGraph,
    col: &mut PartialColoring,
    outer_domains: &std::collections::BTreeMap<EdgeId, ColorSet>,
    budget: u64,
) -> bool {
    let open: Vec<EdgeId> = (0..g.n())
        .map(|j| g.outer_edge(j))
        .filter(|&e| !col.is_assigned(e))
        .collect();
    let domains: Vec<ColorSet> = open
        .iter()
        .map(|e| {
            outer_domains
                .get(e)
                .copied()
                .unwrap_or_else(|| ColorSet::all_below(3))
        })
        .collect();
    complete_with_domains(g, col, &open, &domains, budget)
}

/// Diagnostic surface: runs the six-step script without repair and reports
/// which seed candidate succeeded, or how the first few failed.
#[doc(hidden)]
pub fn debug_main_steps(g: &GpGraph) -> Result<usize, String> {
    let mut st = StepState::new(g);
    st.step1_spokes();
    st.step2_rim_cycles().map_err(|e| format!("step2: {}", e.0))?;
    st.step3_connectors().map_err(|e| format!("step3: {}", e.0))?;
    let base = st.coloring.clone();
    let mut first_errors = Vec::new();
    for (idx, row) in st
        .seed_candidates()
        .into_iter()
        .take(MAX_SEED_ATTEMPTS)
        .enumerate()
    {
        st.coloring = base.clone();
        st.scripted_overrides.clear();
        match st.run_steps_4_to_6(&row) {
            Ok(()) => return Ok(idx),
            Err(e) => {
                if first_errors.len() < 3 {
                    first_errors.push(format!("#{idx}: {}", e.0));
                }
            }
        }
    }
    Err(format!("all seed candidates failed ({})", first_errors.join("; ")))
}

/// Diagnostic surface: runs the `d = 2` script and reports the residual
/// violation count before repair.
#[doc(hidden)]
pub fn debug_d2_script(g: &GpGraph) -> Result<usize, String> {
    match d2_script(g) {
        Ok((_, col, complete)) => {
            if !complete {
                return Err("outer completion failed".into());
            }
            Ok(verify_star(g, &col, true).len())
        }
        Err(e) => Err(e.to_string()),
    }
}

/// `C^1` edge colors per residue case.
fn d2_rim_pattern(method: Method, m: usize, t: usize) -> Vec<Color> {
    let mut v: Vec<Color> = Vec::with_capacity(m);
    match method {
        Method::D2Case1 => {
            // t = 2 (mod 3) as printed; the t = 1 (mod 3) pattern is its
            // traversal reversal (which swaps the shift class 1 <-> 2)
            let base: Vec<Color> = {
                let mut b = vec![0];
                for _ in 0..(m - 3) / 3 {
                    b.extend_from_slice(&[1, 2, 0]);
                }
                b.extend_from_slice(&[2, 1]);
                b
            };
            if t % 3 == 2 {
                v = base;
            } else {
                v = (0..m).map(|j| base[m - 1 - j]).collect();
            }
        }
        Method::D2Case2 => {
            for _ in 0..(m - 1) / 3 {
                v.extend_from_slice(&[0, 1, 2]);
            }
            v.push(1);
        }
        Method::D2Case3 => {
            for _ in 0..(m - 5) / 3 {
                v.extend_from_slice(&[0, 1, 2]);
            }
            v.extend_from_slice(&[0, 1, 0, 2, 1]);
        }
        _ => unreachable!(),
    }
    debug_assert_eq!(v.len(), m);
    v
}

/// Case 3: recolor the spokes around the two pivotal connectors to 2, pin
/// those connectors to 0 and 1, wrap them in color-2 connectors, and leave
/// the four touching middles to the completion over the full palette (the
/// construction colors them 3 or 4).
fn d2_case3_surgery(
    g: &GpGraph,
    col: &mut PartialColoring,
    outer_domains: &mut std::collections::BTreeMap<EdgeId, ColorSet>,
) {
    let (n, k, t, m) = (g.n(), g.k(), g.t(), g.n() / 2);
    let e_pos = n - 1; // u_{n-1} u_0
    let ep_pos = (k * (m - 3) + n - 1) % n;

    // spokes adjacent to e and e' move to color 2
    let e_spokes = [g.spoke_edge(1, 0), g.spoke_edge(2, (m - t) % m)];
    let ep_spokes = [g.spoke_edge(1, m - 3), g.spoke_edge(2, (2 * m - 3 - t) % m)];
    for s in e_spokes.into_iter().chain(ep_spokes) {
        col.recolor(s, 2);
    }

    let o = |j: isize| g.outer_edge(j.rem_euclid(n as isize) as usize);
    col.recolor(o(e_pos as isize), 0);
    col.recolor(o(ep_pos as isize), 1);
    outer_domains.remove(&o(e_pos as isize));
    outer_domains.remove(&o(ep_pos as isize));
    for off in [-2isize, 2] {
        for pivot in [e_pos as isize, ep_pos as isize] {
            let e = o(pivot + off);
            col.recolor(e, 2);
            outer_domains.remove(&e);
        }
    }
    // the pivot-adjacent middles take the recolored spokes' old palette
    for pivot in [e_pos as isize, ep_pos as isize] {
        for off in [-1isize, 1] {
            outer_domains.insert(o(pivot + off), ColorSet::all_below(5));
        }
    }
}
