//! Acceptance suite: one test per criterion, each printing a pass/fail
//! line. Tolerances are pinned here, in code.
//!
//! 1. Main sweep: every GP(n,k), 6 <= n <= 120, n >= 2k, gcd >= 3 gets a
//!    verifier-clean coloring with at most 5 colors. Zero failures.
//! 2. Claim invariant: every MainD3 run in that sweep leaves at most one
//!    outer-cycle edge colored 3 or 4. Zero exceptions.
//! 3. Covered d = 2 residues up to n = 120: verifier-clean, at most 5
//!    colors. Zero failures.
//! 4. Exact anchors: chi'_s(GP(3,1)) = 6, chi'_s(GP(4,1)) = 4, and for all
//!    n <= 12 the index is 4 iff n = 0 (mod 4) and k is odd. Each instance
//!    under 60 seconds.
//! 5. Two-edge-gap feasibility matches brute force for path lengths 5..10,
//!    all precolorings over a fixed palette. 100% agreement.
//! 6. Extension-lemma property suites over n in 6..30, >= 500 cases per
//!    lemma: outputs total, agree with precolorings, verifier-clean.
//! 7. Construction vs exact on every GP with at most 36 edges: dispatch
//!    never beats the exact index and stays within 5 colors (6 for
//!    GP(3,1)).
//! 8. Determinism: coloring the same instance twice yields byte-identical
//!    JSON; JSON and DOT exports round-trip.

use std::collections::BTreeSet;
use std::time::Instant;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use petersen_star::exact::{IndexResult, SearchConfig};
use petersen_star::io::{coloring_from_file, coloring_to_file, from_dot, report_to_file, to_dot};
use petersen_star::segment::{
    extend_cycle_five_constraints, extend_cycle_three_edges, extend_cycle_two_paths,
    path_gap_extension, two_paths_window_pattern, SegmentError,
};
use petersen_star::verify::verify_star;
use petersen_star::{
    dispatch, star_chromatic_index, Color, ColorSet, GpGraph, Method, Palette3, PartialColoring,
    SimpleGraph,
};

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn total_coloring(colors: &[Color]) -> PartialColoring {
    let mut f = PartialColoring::new(colors.len());
    for (e, &c) in colors.iter().enumerate() {
        f.set(e, c).unwrap();
    }
    f
}

/// Criteria 1 and 2 share the sweep; both are asserted here.
#[test]
fn criterion_1_and_2_main_theorem_sweep() {
    let started = Instant::now();
    let mut instances = 0usize;
    let mut failures: Vec<String> = Vec::new();
    let mut claim_exceptions: Vec<String> = Vec::new();
    for n in 6..=120usize {
        for k in 1..=n / 2 {
            if gcd(n, k) < 3 {
                continue;
            }
            instances += 1;
            let g = GpGraph::build(n, k).unwrap();
            match dispatch(&g) {
                Ok(report) => {
                    let clean = verify_star(&g, &report.coloring, true).is_empty();
                    if !clean || report.colors_used > 5 {
                        failures.push(format!(
                            "GP({n},{k}): clean={clean} colors={}",
                            report.colors_used
                        ));
                    }
                    if report.method == Method::MainD3 && report.c0_offpalette_edges.len() > 1 {
                        claim_exceptions.push(format!(
                            "GP({n},{k}): {} off-palette outer edges",
                            report.c0_offpalette_edges.len()
                        ));
                    }
                }
                Err(e) => failures.push(format!("GP({n},{k}): {e}")),
            }
        }
    }
    let elapsed = started.elapsed();
    println!(
        "criterion 1 {}: {instances} instances with gcd >= 3, n <= 120, all verified <= 5 colors in {:.1?}",
        if failures.is_empty() { "PASS" } else { "FAIL" },
        elapsed
    );
    for f in &failures {
        println!("  criterion 1 failure: {f}");
    }
    println!(
        "criterion 2 {}: at most one off-palette outer edge per MainD3 run",
        if claim_exceptions.is_empty() { "PASS" } else { "FAIL" }
    );
    for f in &claim_exceptions {
        println!("  criterion 2 exception: {f}");
    }
    assert!(failures.is_empty(), "criterion 1 failures: {failures:?}");
    assert!(
        claim_exceptions.is_empty(),
        "criterion 2 exceptions: {claim_exceptions:?}"
    );
}

#[test]
fn criterion_3_d2_covered_residues() {
    let mut instances = 0usize;
    let mut failures: Vec<String> = Vec::new();
    for n in 6..=120usize {
        for k in 1..=n / 2 {
            if gcd(n, k) != 2 {
                continue;
            }
            let g = GpGraph::build(n, k).unwrap();
            let t = g.t();
            let covered =
                n % 6 == 0 || (n % 6 == 2 && t % 3 == 2) || (n % 6 == 4 && t % 3 == 1);
            if !covered {
                continue;
            }
            instances += 1;
            match dispatch(&g) {
                Ok(report) => {
                    let clean = verify_star(&g, &report.coloring, true).is_empty();
                    if !clean || report.colors_used > 5 {
                        failures.push(format!(
                            "GP({n},{k}): clean={clean} colors={}",
                            report.colors_used
                        ));
                    }
                }
                Err(e) => failures.push(format!("GP({n},{k}): {e}")),
            }
        }
    }
    println!(
        "criterion 3 {}: {instances} covered d=2 instances, n <= 120, all verified <= 5 colors",
        if failures.is_empty() { "PASS" } else { "FAIL" }
    );
    for f in &failures {
        println!("  criterion 3 failure: {f}");
    }
    assert!(failures.is_empty(), "criterion 3 failures: {failures:?}");
}

#[test]
fn criterion_4_exact_oracle_anchors() {
    let config = SearchConfig::with_colors(7);
    let mut failures: Vec<String> = Vec::new();

    let timed_index = |n: usize, k: usize, failures: &mut Vec<String>| -> Option<usize> {
        let g = GpGraph::build(n, k).unwrap();
        let start = Instant::now();
        let outcome = star_chromatic_index(&g, &config);
        let secs = start.elapsed().as_secs_f64();
        if secs >= 60.0 {
            failures.push(format!("GP({n},{k}) took {secs:.1}s (budget 60s)"));
        }
        match outcome {
            IndexResult::Exact(c) => Some(c),
            IndexResult::Indeterminate => {
                failures.push(format!("GP({n},{k}): indeterminate"));
                None
            }
        }
    };

    if timed_index(3, 1, &mut failures) != Some(6) {
        failures.push("chi'_s(GP(3,1)) != 6".into());
    }
    if timed_index(4, 1, &mut failures) != Some(4) {
        failures.push("chi'_s(GP(4,1)) != 4".into());
    }
    for n in 3..=12usize {
        for k in 1..=n / 2 {
            let expected_four = n % 4 == 0 && k % 2 == 1;
            match timed_index(n, k, &mut failures) {
                Some(idx) => {
                    if (idx == 4) != expected_four {
                        failures.push(format!(
                            "GP({n},{k}): index {idx}, expected {}",
                            if expected_four { "exactly 4" } else { "!= 4" }
                        ));
                    }
                }
                None => {}
            }
        }
    }
    println!(
        "criterion 4 {}: exact anchors and the index-4 characterization on n <= 12",
        if failures.is_empty() { "PASS" } else { "FAIL" }
    );
    for f in &failures {
        println!("  criterion 4 failure: {f}");
    }
    assert!(failures.is_empty(), "criterion 4 failures: {failures:?}");
}

/// Independent brute-force oracle for the two-edge gap: try all nine gap
/// assignments and verify each on the path.
fn gap_brute_force(len: usize, left: [Color; 2], right: &[Color], palette: &Palette3) -> bool {
    let path = SimpleGraph::path(len);
    let colors = palette.sorted();
    for &c2 in &colors {
        for &c3 in &colors {
            let mut f = PartialColoring::new(len);
            f.set(0, left[0]).unwrap();
            f.set(1, left[1]).unwrap();
            f.set(2, c2).unwrap();
            f.set(3, c3).unwrap();
            for (o, &c) in right.iter().enumerate() {
                f.set(4 + o, c).unwrap();
            }
            if verify_star(&path, &f, true).is_empty() {
                return true;
            }
        }
    }
    false
}

#[test]
fn criterion_5_gap_feasibility_matches_brute_force() {
    let palette = Palette3::new(0, 1, 2);
    let colors = [0 as Color, 1, 2];
    let mut checked = 0usize;
    let mut disagreements: Vec<String> = Vec::new();
    for len in 5..=10usize {
        // every 3-star-proper right side e_4..e_{len-1}
        let tail = len - 4;
        let mut rights: Vec<Vec<Color>> = vec![Vec::new()];
        for _ in 0..tail {
            rights = rights
                .into_iter()
                .flat_map(|r| {
                    colors.iter().filter_map(move |&c| {
                        let mut r2 = r.clone();
                        r2.push(c);
                        Some(r2)
                    })
                })
                .collect();
        }
        for right in rights {
            // the right side on its own must be a 3-star path coloring
            let rp = total_coloring(&right);
            if tail > 0 && !verify_star(&SimpleGraph::path(tail), &rp, true).is_empty() {
                continue;
            }
            for &l0 in &colors {
                for &l1 in &colors {
                    if l0 == l1 {
                        continue;
                    }
                    // hypothesis: the combined precoloring is partial 3-star
                    let mut pre = PartialColoring::new(len);
                    pre.set(0, l0).unwrap();
                    pre.set(1, l1).unwrap();
                    for (o, &c) in right.iter().enumerate() {
                        pre.set(4 + o, c).unwrap();
                    }
                    if !verify_star(&SimpleGraph::path(len), &pre, false).is_empty() {
                        continue;
                    }
                    checked += 1;
                    let routine = path_gap_extension(len, [l0, l1], &right, &palette);
                    let oracle = gap_brute_force(len, [l0, l1], &right, &palette);
                    match routine {
                        Ok(out) => {
                            if !oracle {
                                disagreements.push(format!(
                                    "len={len} left=({l0},{l1}) right={right:?}: routine feasible, oracle not"
                                ));
                            }
                            let f = total_coloring(&out);
                            assert!(
                                verify_star(&SimpleGraph::path(len), &f, true).is_empty(),
                                "routine output invalid for len={len} left=({l0},{l1}) right={right:?}"
                            );
                            assert_eq!(out[0], l0);
                            assert_eq!(out[1], l1);
                            assert_eq!(&out[4..], &right[..]);
                        }
                        Err(SegmentError::Infeasible) => {
                            if oracle {
                                disagreements.push(format!(
                                    "len={len} left=({l0},{l1}) right={right:?}: routine infeasible, oracle feasible"
                                ));
                            }
                        }
                        Err(e) => disagreements
                            .push(format!("len={len} left=({l0},{l1}) right={right:?}: {e}")),
                    }
                }
            }
        }
    }
    println!(
        "criterion 5 {}: {checked} gap instances, feasibility agrees with brute force",
        if disagreements.is_empty() { "PASS" } else { "FAIL" }
    );
    for d in disagreements.iter().take(10) {
        println!("  criterion 5 disagreement: {d}");
    }
    assert!(disagreements.is_empty());
    assert!(checked > 1000, "expected substantive coverage, got {checked}");
}

#[test]
fn criterion_6_lemma_property_suites() {
    let palette = Palette3::new(0, 1, 2);
    let mut cases_21 = 0usize;
    // two-window cycle extension: exhaustive over n in 6..=30, all i
    for n in 6..=30usize {
        if n == 5 {
            continue;
        }
        for i in 0..n {
            let out = extend_cycle_two_paths(n, i, &palette)
                .unwrap_or_else(|e| panic!("two-paths n={n} i={i}: {e}"));
            assert_eq!(out.len(), n);
            let f = total_coloring(&out);
            assert!(
                verify_star(&SimpleGraph::cycle(n), &f, true).is_empty(),
                "two-paths n={n} i={i}"
            );
            // agreement with both implied windows
            assert_eq!(out[0], palette.a);
            assert_eq!(out[1], palette.b);
            assert_eq!(out[2], palette.c);
            let idx = [palette.a, palette.b, palette.c];
            for (off, &w) in two_paths_window_pattern(n, i).iter().enumerate() {
                assert_eq!(out[(i + off) % n], idx[w], "n={n} i={i} offset={off}");
            }
            cases_21 += 1;
        }
    }

    // three precolored edges: randomized admissible instances
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    let mut cases_23 = 0usize;
    while cases_23 < 600 {
        let n = rng.gen_range(6..=30usize);
        let i = rng.gen_range(2..=n - 2);
        let third: Color = rng.gen_range(0..3);
        if i == 2 && third == palette.b {
            continue; // improper against e_1
        }
        let pre = [(0usize, palette.a), (1usize, palette.b), (i, third)];
        let out = extend_cycle_three_edges(n, &pre, &palette)
            .unwrap_or_else(|e| panic!("three-edges n={n} i={i} third={third}: {e}"));
        for (p, c) in pre {
            assert_eq!(out[p], c, "precolor agreement n={n} i={i}");
        }
        let f = total_coloring(&out);
        assert!(
            verify_star(&SimpleGraph::cycle(n), &f, true).is_empty(),
            "three-edges n={n} i={i} third={third}"
        );
        cases_23 += 1;
    }

    // five-constraint coloring: randomized admissible instances, with a
    // brute-force feasibility oracle arbitrating the rare Infeasible
    let mut cases_24 = 0usize;
    let mut infeasible_confirmed = 0usize;
    while cases_24 < 600 {
        let n = rng.gen_range(6..=30usize);
        if n < 6 {
            continue;
        }
        let i = rng.gen_range(2..n - 2);
        let max_j = n - 2;
        if i + 2 > max_j {
            continue;
        }
        let j = {
            let choices: Vec<usize> = ((i + 2)..=max_j).step_by(2).collect();
            *choices.choose(&mut rng).unwrap()
        };
        let f0: Color = rng.gen_range(0..3);
        match extend_cycle_five_constraints(n, i, j, f0, &palette) {
            Ok(out) => {
                assert_eq!(out[0], f0);
                assert_eq!(
                    ColorSet::of(&[out[i - 1], out[i]]),
                    ColorSet::of(&[palette.a, palette.b]),
                    "five-constraints n={n} i={i} j={j}"
                );
                assert_eq!(
                    ColorSet::of(&[out[j - 1], out[j]]),
                    ColorSet::of(&[palette.b, palette.c])
                );
                let f = total_coloring(&out);
                assert!(
                    verify_star(&SimpleGraph::cycle(n), &f, true).is_empty(),
                    "five-constraints n={n} i={i} j={j} f0={f0}"
                );
            }
            Err(SegmentError::Infeasible) => {
                // the routine's exhaustive fallback says no coloring exists;
                // confirm with an independent search over all completions
                assert!(
                    !five_constraints_brute_force(n, i, j, f0),
                    "five-constraints n={n} i={i} j={j} f0={f0}: routine said infeasible, oracle found one"
                );
                infeasible_confirmed += 1;
            }
            Err(e) => panic!("five-constraints n={n} i={i} j={j} f0={f0}: {e}"),
        }
        cases_24 += 1;
    }

    println!(
        "criterion 6 PASS: two-paths {cases_21} exhaustive cases, three-edges {cases_23} randomized cases, \
         five-constraints {cases_24} randomized cases ({infeasible_confirmed} confirmed infeasible corners)"
    );
}

/// Brute force for the five-constraint lemma: enumerate all palette
/// colorings of the cycle satisfying the constraints.
fn five_constraints_brute_force(n: usize, i: usize, j: usize, f0: Color) -> bool {
    let cycle = SimpleGraph::cycle(n);
    let mut stack: Vec<Vec<Color>> = vec![vec![f0]];
    while let Some(prefix) = stack.pop() {
        if prefix.len() == n {
            let f = total_coloring(&prefix);
            if !verify_star(&cycle, &f, true).is_empty() {
                continue;
            }
            if ColorSet::of(&[prefix[i - 1], prefix[i]]) != ColorSet::of(&[0, 1]) {
                continue;
            }
            if ColorSet::of(&[prefix[j - 1], prefix[j]]) != ColorSet::of(&[1, 2]) {
                continue;
            }
            return true;
        }
        for c in 0..3 as Color {
            if c == *prefix.last().unwrap() {
                continue;
            }
            let mut next = prefix.clone();
            next.push(c);
            // cheap prune: keep the running window star-clean
            if next.len() >= 4 {
                let l = next.len();
                let w = &next[l - 4..];
                if w[0] == w[2] && w[1] == w[3] {
                    continue;
                }
            }
            stack.push(next);
        }
    }
    false
}

#[test]
fn criterion_7_construction_vs_exact() {
    let mut failures: Vec<String> = Vec::new();
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for n in 3..=14usize {
        for k in 1..=n / 2 {
            let g = GpGraph::build(n, k).unwrap();
            if g.edge_count() <= 36 {
                pairs.push((n, k));
            }
        }
    }
    for &(n, k) in &pairs {
        let g = GpGraph::build(n, k).unwrap();
        let report = match dispatch(&g) {
            Ok(r) => r,
            Err(e) => {
                failures.push(format!("GP({n},{k}): dispatch failed: {e}"));
                continue;
            }
        };
        if !verify_star(&g, &report.coloring, true).is_empty() {
            failures.push(format!("GP({n},{k}): dispatch output invalid"));
        }
        let bound = if (n, k) == (3, 1) { 6 } else { 5 };
        if report.colors_used > bound {
            failures.push(format!(
                "GP({n},{k}): dispatch used {} colors (bound {bound})",
                report.colors_used
            ));
        }
        match star_chromatic_index(&g, &SearchConfig::with_colors(7)) {
            IndexResult::Exact(idx) => {
                if report.colors_used < idx {
                    failures.push(format!(
                        "GP({n},{k}): dispatch used {} colors below the exact index {idx}",
                        report.colors_used
                    ));
                }
                // a dispatch coloring re-validates as feasible at its count
                let frozen: Vec<_> = report.coloring.assigned_edges().collect();
                let cfg = SearchConfig {
                    max_colors: report.colors_used.max(idx),
                    frozen,
                    ..Default::default()
                };
                if !matches!(
                    petersen_star::find_star_coloring(&g, &cfg),
                    petersen_star::SearchResult::Found(_)
                ) {
                    failures.push(format!("GP({n},{k}): dispatch coloring not re-validated"));
                }
            }
            IndexResult::Indeterminate => {
                failures.push(format!("GP({n},{k}): exact index indeterminate"));
            }
        }
    }
    println!(
        "criterion 7 {}: {} instances with <= 36 edges, construction consistent with the exact oracle",
        if failures.is_empty() { "PASS" } else { "FAIL" },
        pairs.len()
    );
    for f in &failures {
        println!("  criterion 7 failure: {f}");
    }
    assert!(failures.is_empty(), "criterion 7 failures: {failures:?}");
}

#[test]
fn criterion_8_round_trip_and_determinism() {
    let mut failures: Vec<String> = Vec::new();
    for (n, k) in [(9usize, 3usize), (10, 2), (12, 2), (6, 3), (16, 4)] {
        let g1 = GpGraph::build(n, k).unwrap();
        let g2 = GpGraph::build(n, k).unwrap();
        let r1 = dispatch(&g1).unwrap();
        let r2 = dispatch(&g2).unwrap();
        let json1 = serde_json::to_string_pretty(&report_to_file(&g1, &r1)).unwrap();
        let json2 = serde_json::to_string_pretty(&report_to_file(&g2, &r2)).unwrap();
        if json1 != json2 {
            failures.push(format!("GP({n},{k}): report JSON not byte-identical across runs"));
        }

        let file = coloring_to_file(&g1, &r1.coloring);
        let json = serde_json::to_string(&file).unwrap();
        let parsed = serde_json::from_str(&json).unwrap();
        let (_, back) = coloring_from_file(&parsed).unwrap();
        if back != r1.coloring {
            failures.push(format!("GP({n},{k}): JSON round trip changed the coloring"));
        }

        let dot = to_dot(&g1, Some(&r1.coloring));
        match from_dot(&dot) {
            Ok((gd, cd)) => {
                if gd.n() != n || gd.k() != k || cd != r1.coloring {
                    failures.push(format!("GP({n},{k}): DOT round trip changed the coloring"));
                }
            }
            Err(e) => failures.push(format!("GP({n},{k}): DOT re-import failed: {e}")),
        }
    }
    println!(
        "criterion 8 {}: byte-identical reruns and JSON/DOT round trips",
        if failures.is_empty() { "PASS" } else { "FAIL" }
    );
    for f in &failures {
        println!("  criterion 8 failure: {f}");
    }
    assert!(failures.is_empty(), "criterion 8 failures: {failures:?}");
}

/// Construction runs that are expected to complete without repair; pins
/// the scripted path against regressions.
#[test]
fn faithfulness_pinned_instances() {
    let pinned = [
        (9usize, 3usize),
        (12, 3),
        (16, 4),
        (20, 5),
        (21, 3),
        (24, 6),
        (10, 2),
        (15, 3),
        (6, 3),
        (8, 4),
        (12, 2),
        (24, 2),
    ];
    let mut broken: Vec<String> = Vec::new();
    for (n, k) in pinned {
        let g = GpGraph::build(n, k).unwrap();
        match dispatch(&g) {
            Ok(r) => {
                if !r.faithful {
                    broken.push(format!("GP({n},{k}) needed repair ({:?})", r.method));
                }
            }
            Err(e) => broken.push(format!("GP({n},{k}): {e}")),
        }
    }
    assert!(broken.is_empty(), "faithfulness regressions: {broken:?}");
}

/// The MainD3 off-palette edge, when present, is always a connector.
#[test]
fn main_offpalette_edge_is_a_connector() {
    for n in 6..=60usize {
        for k in 1..=n / 2 {
            if gcd(n, k) < 3 {
                continue;
            }
            let g = GpGraph::build(n, k).unwrap();
            let report = dispatch(&g).unwrap();
            if report.method != Method::MainD3 {
                continue;
            }
            for &e in &report.c0_offpalette_edges {
                assert_eq!(
                    g.kind(e),
                    petersen_star::EdgeKind::Connector,
                    "GP({n},{k}): off-palette outer edge {e} is not a connector"
                );
            }
        }
    }
}
