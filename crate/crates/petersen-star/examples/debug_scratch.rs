//! Scratch diagnostics (temporary).

use petersen_star::exact::{complete_with_domains_outcome, SearchResult};
use petersen_star::{ColorSet, EdgeGraph, GpGraph, PartialColoring};

/// Is GP(n,k) star-colorable with step-1 spokes, inner cycles over the full
/// palette, and `escapes` outer edges allowed off `{0,1,2}`?
fn probe(g: &GpGraph, escape_set: &[usize]) -> SearchResult {
    let spoke_color = |i: usize, r: usize| 3 + ((i + r) % 2) as u8;
    let mut col = PartialColoring::for_graph(g);
    for i in 1..=g.d() {
        for r in 0..g.cycle_len() {
            col.set(g.spoke_edge(i, r), spoke_color(i, r)).unwrap();
        }
    }
    let vars: Vec<usize> = (0..g.edge_count())
        .filter(|&e| !col.is_assigned(e))
        .collect();
    let domains: Vec<ColorSet> = vars
        .iter()
        .map(|e| {
            if g.kind(*e).on_outer_cycle() && !escape_set.contains(e) {
                ColorSet::all_below(3)
            } else {
                ColorSet::all_below(5)
            }
        })
        .collect();
    complete_with_domains_outcome(g, &mut col, &vars, &domains, 2_000_000_000)
}

fn main() {
    for d in [4usize, 6, 8, 10, 12] {
        let n = 3 * d;
        let g = GpGraph::build(n, d).unwrap();
        match probe(&g, &[]) {
            SearchResult::Found(_) => {
                println!("GP({n},{d}): zero escapes");
                continue;
            }
            SearchResult::Infeasible => {}
            SearchResult::Indeterminate => {
                println!("GP({n},{d}): zero-escape probe hit budget");
                continue;
            }
        }
        let mut best: Option<usize> = None;
        let mut budget_hit = false;
        for e in 0..g.edge_count() {
            if !g.kind(e).on_outer_cycle() {
                continue;
            }
            match probe(&g, &[e]) {
                SearchResult::Found(_) => {
                    best = Some(e);
                    break;
                }
                SearchResult::Infeasible => {}
                SearchResult::Indeterminate => budget_hit = true,
            }
        }
        match best {
            Some(e) => println!("GP({n},{d}): one escape at edge {e}"),
            None if budget_hit => println!("GP({n},{d}): single-escape probes hit budget"),
            None => println!("GP({n},{d}): EXHAUSTIVELY needs >= 2 escapes (step-1 spokes)"),
        }
    }
}
