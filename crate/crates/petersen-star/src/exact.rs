//! Exact star chromatic index by backtracking.
//!
//! Ground-truth oracle for small instances and the completion engine behind
//! the repair fallback. Variables are edges in BFS order from vertex 0;
//! color symmetry is broken by requiring first occurrences of colors in
//! ascending order; the star check on each assignment scans only the
//! 4-edge windows through the assigned edge.

use crate::coloring::{Color, ColorSet, PartialColoring};
use crate::graph::{EdgeGraph, EdgeId};
use crate::verify::edge_ok;

/// Cubic graphs have star chromatic index between 4 and 7, so no search
/// ever needs more than 7 colors.
pub const CUBIC_UPPER_BOUND: usize = 7;

#[derive(Debug, Clone)]
pub struct SearchConfig {
    /// 1..=7.
    pub max_colors: usize,
    pub node_budget: u64,
    pub symmetry_breaking: bool,
    /// Pre-assigned edges the search must respect.
    pub frozen: Vec<(EdgeId, Color)>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            max_colors: 5,
            node_budget: 200_000_000,
            symmetry_breaking: true,
            frozen: Vec::new(),
        }
    }
}

impl SearchConfig {
    pub fn with_colors(max_colors: usize) -> Self {
        SearchConfig {
            max_colors,
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchResult {
    Found(PartialColoring),
    /// The search space was exhausted: no coloring exists.
    Infeasible,
    /// Node budget ran out before exhaustion; proves nothing.
    Indeterminate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IndexResult {
    Exact(usize),
    Indeterminate,
}

/// Edges in BFS order from vertex 0 (unreached components appended in
/// vertex order).
fn bfs_edge_order(g: &impl EdgeGraph) -> Vec<EdgeId> {
    let mut order = Vec::with_capacity(g.edge_count());
    let mut edge_seen = vec![false; g.edge_count()];
    let mut vertex_seen = vec![false; g.vertex_count()];
    let mut queue = std::collections::VecDeque::new();
    for start in 0..g.vertex_count() {
        if vertex_seen[start] {
            continue;
        }
        vertex_seen[start] = true;
        queue.push_back(start);
        while let Some(v) = queue.pop_front() {
            for &e in g.incident_edges(v) {
                if !edge_seen[e] {
                    edge_seen[e] = true;
                    order.push(e);
                }
                let w = g.other_endpoint(e, v);
                if !vertex_seen[w] {
                    vertex_seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    order
}

/// Searches for a total star coloring with at most `max_colors` colors
/// respecting the frozen assignments.
pub fn find_star_coloring(g: &impl EdgeGraph, config: &SearchConfig) -> SearchResult {
    assert!(
        (1..=CUBIC_UPPER_BOUND).contains(&config.max_colors),
        "max_colors must lie in 1..=7"
    );
    let mut coloring = PartialColoring::for_graph(g);
    for &(e, c) in &config.frozen {
        if c as usize >= config.max_colors {
            return SearchResult::Infeasible;
        }
        if coloring.set(e, c).is_err() {
            return SearchResult::Infeasible;
        }
        if !edge_ok(g, &coloring, e) {
            return SearchResult::Infeasible;
        }
    }
    let vars: Vec<EdgeId> = bfs_edge_order(g)
        .into_iter()
        .filter(|&e| !coloring.is_assigned(e))
        .collect();
    // color symmetry only holds when no colors are pinned
    let symmetry = config.symmetry_breaking && config.frozen.is_empty();
    let mut nodes = 0u64;
    let domains = vec![ColorSet::all_below(config.max_colors as Color); vars.len()];
    match search(
        g,
        &mut coloring,
        &vars,
        &domains,
        0,
        if symmetry { 0 } else { config.max_colors },
        config.max_colors,
        &mut nodes,
        config.node_budget,
    ) {
        Outcome::Done => SearchResult::Found(coloring),
        Outcome::Exhausted => SearchResult::Infeasible,
        Outcome::Budget => SearchResult::Indeterminate,
    }
}

enum Outcome {
    Done,
    Exhausted,
    Budget,
}

#[allow(clippy::too_many_arguments)]
fn search(
    g: &impl EdgeGraph,
    coloring: &mut PartialColoring,
    vars: &[EdgeId],
    domains: &[ColorSet],
    depth: usize,
    used: usize,
    max_colors: usize,
    nodes: &mut u64,
    budget: u64,
) -> Outcome {
    if depth == vars.len() {
        return Outcome::Done;
    }
    let e = vars[depth];
    let cap = if used < max_colors { used + 1 } else { max_colors };
    let mut saw_budget = false;
    for c in domains[depth].iter() {
        if (c as usize) >= cap {
            break;
        }
        *nodes += 1;
        if *nodes > budget {
            return Outcome::Budget;
        }
        coloring.set(e, c).unwrap();
        if edge_ok(g, coloring, e) {
            let used2 = used.max(c as usize + 1);
            match search(g, coloring, vars, domains, depth + 1, used2, max_colors, nodes, budget) {
                Outcome::Done => return Outcome::Done,
                Outcome::Budget => saw_budget = true,
                Outcome::Exhausted => {}
            }
            if saw_budget {
                coloring.unset(e);
                return Outcome::Budget;
            }
        }
        coloring.unset(e);
    }
    Outcome::Exhausted
}

/// Minimum `c` for which a star coloring with `c` colors exists, by
/// ascending search from the trivial lower bound (the maximum degree).
pub fn star_chromatic_index(g: &impl EdgeGraph, config: &SearchConfig) -> IndexResult {
    let delta = (0..g.vertex_count())
        .map(|v| g.incident_edges(v).len())
        .max()
        .unwrap_or(0)
        .max(1);
    for c in delta..=config.max_colors {
        let level = SearchConfig {
            max_colors: c,
            ..config.clone()
        };
        match find_star_coloring(g, &level) {
            SearchResult::Found(_) => return IndexResult::Exact(c),
            SearchResult::Infeasible => continue,
            SearchResult::Indeterminate => return IndexResult::Indeterminate,
        }
    }
    IndexResult::Indeterminate
}

/// Diagnostic surface for the domain-completion engine.
#[doc(hidden)]
pub fn complete_with_domains_pub(
    g: &impl EdgeGraph,
    coloring: &mut PartialColoring,
    vars: &[EdgeId],
    domains: &[ColorSet],
    budget: u64,
) -> bool {
    complete_with_domains(g, coloring, vars, domains, budget)
}

/// Diagnostic surface distinguishing exhaustion from budget overrun.
#[doc(hidden)]
pub fn complete_with_domains_outcome(
    g: &impl EdgeGraph,
    coloring: &mut PartialColoring,
    vars: &[EdgeId],
    domains: &[ColorSet],
    budget: u64,
) -> SearchResult {
    let mut nodes = 0u64;
    match search(
        g,
        coloring,
        vars,
        domains,
        0,
        CUBIC_UPPER_BOUND,
        CUBIC_UPPER_BOUND,
        &mut nodes,
        budget,
    ) {
        Outcome::Done => SearchResult::Found(coloring.clone()),
        Outcome::Exhausted => SearchResult::Infeasible,
        Outcome::Budget => SearchResult::Indeterminate,
    }
}

/// Backtracking completion of `vars` (currently unassigned edges of
/// `coloring`) under per-variable domains; used by the scripted colorers to
/// close small constrained gaps and by the repair engine. Returns false if
/// the space is exhausted or the budget runs out.
pub(crate) fn complete_with_domains(
    g: &impl EdgeGraph,
    coloring: &mut PartialColoring,
    vars: &[EdgeId],
    domains: &[ColorSet],
    budget: u64,
) -> bool {
    debug_assert_eq!(vars.len(), domains.len());
    let mut nodes = 0u64;
    matches!(
        search(g, coloring, vars, domains, 0, CUBIC_UPPER_BOUND, CUBIC_UPPER_BOUND, &mut nodes, budget),
        Outcome::Done
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{GpGraph, SimpleGraph};
    use crate::verify::verify_star;

    #[test]
    fn rainbow_is_always_feasible() {
        let p = SimpleGraph::path(4);
        let res = find_star_coloring(&p, &SearchConfig::with_colors(4));
        match res {
            SearchResult::Found(f) => assert!(verify_star(&p, &f, true).is_empty()),
            other => panic!("expected coloring, got {other:?}"),
        }
    }

    #[test]
    fn gp_3_1_needs_six_colors() {
        let g = GpGraph::build(3, 1).unwrap();
        assert_eq!(
            find_star_coloring(&g, &SearchConfig::with_colors(5)),
            SearchResult::Infeasible
        );
        match find_star_coloring(&g, &SearchConfig::with_colors(6)) {
            SearchResult::Found(f) => {
                assert!(verify_star(&g, &f, true).is_empty());
            }
            other => panic!("expected coloring, got {other:?}"),
        }
        assert_eq!(star_chromatic_index(&g, &SearchConfig::with_colors(7)), IndexResult::Exact(6));
    }

    #[test]
    fn gp_4_1_index_four() {
        let g = GpGraph::build(4, 1).unwrap();
        assert_eq!(star_chromatic_index(&g, &SearchConfig::with_colors(7)), IndexResult::Exact(4));
    }

    #[test]
    fn monotone_in_color_count() {
        let g = GpGraph::build(5, 2).unwrap();
        let idx = match star_chromatic_index(&g, &SearchConfig::with_colors(7)) {
            IndexResult::Exact(c) => c,
            IndexResult::Indeterminate => panic!("budget too small for GP(5,2)"),
        };
        for c in idx..=7 {
            assert!(matches!(
                find_star_coloring(&g, &SearchConfig::with_colors(c)),
                SearchResult::Found(_)
            ));
        }
        if idx > 4 {
            assert_eq!(
                find_star_coloring(&g, &SearchConfig::with_colors(idx - 1)),
                SearchResult::Infeasible
            );
        }
    }

    #[test]
    fn frozen_assignments_respected() {
        let g = GpGraph::build(6, 2).unwrap();
        let frozen = vec![(0, 3), (5, 1)];
        let cfg = SearchConfig {
            frozen: frozen.clone(),
            ..SearchConfig::with_colors(5)
        };
        match find_star_coloring(&g, &cfg) {
            SearchResult::Found(f) => {
                for (e, c) in frozen {
                    assert_eq!(f.get(e), Some(c));
                }
                assert!(verify_star(&g, &f, true).is_empty());
            }
            other => panic!("expected coloring, got {other:?}"),
        }
    }

    #[test]
    fn budget_exhaustion_is_indeterminate() {
        let g = GpGraph::build(9, 3).unwrap();
        let cfg = SearchConfig {
            node_budget: 3,
            ..SearchConfig::with_colors(4)
        };
        assert_eq!(find_star_coloring(&g, &cfg), SearchResult::Indeterminate);
    }
}
