//! Command-line surface: construct, verify, solve, sweep, and export.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error,
//! 3 indeterminate (solver budget exhausted).

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use petersen_star::exact::{IndexResult, SearchConfig};
use petersen_star::io::{
    coloring_from_file, report_to_file, to_dot, violations_to_file, ColoringFile, SweepRow,
    SWEEP_CSV_HEADER,
};
use petersen_star::{dispatch, verify_star, GpGraph};

const EXIT_OK: u8 = 0;
const EXIT_VERIFY: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_INDETERMINATE: u8 = 3;

/// Default worker count comes from this variable when `--workers` is absent.
const WORKERS_ENV: &str = "PETERSEN_STAR_WORKERS";

#[derive(Parser)]
#[command(name = "petersen-star", version, about = "Star edge colorings of generalized Petersen graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Construct a verified 5-star edge coloring of GP(n,k).
    Color(ColorArgs),
    /// Verify a coloring file and print its violations.
    Verify(VerifyArgs),
    /// Exact star chromatic index by backtracking.
    Exact(ExactArgs),
    /// Color a parameter range and write a CSV summary.
    Sweep(SweepArgs),
    /// Write a Graphviz DOT rendering of GP(n,k).
    Export(ExportArgs),
}

#[derive(Args)]
struct ColorArgs {
    n: usize,
    k: usize,
    /// Write the report JSON here instead of stdout.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Also write a DOT rendering of the coloring.
    #[arg(long)]
    dot: Option<PathBuf>,
    /// Fail (exit 1) when the scripted construction needed repair.
    #[arg(long)]
    require_faithful: bool,
    /// Accept a 6-color fallback coloring (GP(3,1) needs six).
    #[arg(long)]
    allow_six: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// Coloring JSON produced by `color --json` or hand-written.
    file: PathBuf,
    /// Also report uncolored edges.
    #[arg(long)]
    require_total: bool,
}

#[derive(Args)]
struct ExactArgs {
    n: usize,
    k: usize,
    /// Upper bound on colors to try (cubic graphs never need more than 7).
    #[arg(long, default_value_t = 7)]
    max_colors: usize,
    /// Search node budget per color count.
    #[arg(long, default_value_t = 200_000_000)]
    node_budget: u64,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    n_from: usize,
    #[arg(long)]
    n_to: usize,
    /// Fixed k; default sweeps all admissible k.
    #[arg(long)]
    k: Option<usize>,
    /// Keep only instances with gcd(n,k) at least this.
    #[arg(long)]
    gcd_min: Option<usize>,
    /// Worker threads (default: $PETERSEN_STAR_WORKERS, then all cores).
    #[arg(long)]
    workers: Option<usize>,
    /// Output CSV path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExportArgs {
    n: usize,
    k: usize,
    /// Output DOT path.
    #[arg(long)]
    dot: PathBuf,
    /// Color the rendering from this coloring file instead of constructing.
    #[arg(long)]
    coloring: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Color(args) => cmd_color(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Exact(args) => cmd_exact(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Export(args) => cmd_export(args),
    };
    ExitCode::from(code)
}

fn build_graph(n: usize, k: usize) -> Result<GpGraph, u8> {
    GpGraph::build(n, k).map_err(|e| {
        eprintln!("error: {e}");
        EXIT_USAGE
    })
}

fn cmd_color(args: ColorArgs) -> u8 {
    let g = match build_graph(args.n, args.k) {
        Ok(g) => g,
        Err(code) => return code,
    };
    let report = match dispatch(&g) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_VERIFY;
        }
    };
    let file = report_to_file(&g, &report);
    let json = serde_json::to_string_pretty(&file).expect("report serializes");
    match &args.json {
        Some(path) => {
            if let Err(e) = fs::write(path, json + "\n") {
                eprintln!("error: cannot write {}: {e}", path.display());
                return EXIT_USAGE;
            }
        }
        None => println!("{json}"),
    }
    if let Some(path) = &args.dot {
        if let Err(e) = fs::write(path, to_dot(&g, Some(&report.coloring))) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return EXIT_USAGE;
        }
    }

    let violations = verify_star(&g, &report.coloring, true);
    let bound = if args.allow_six { 6 } else { 5 };
    if !violations.is_empty() {
        eprintln!("error: coloring has {} violations", violations.len());
        return EXIT_VERIFY;
    }
    if report.colors_used > bound {
        eprintln!(
            "error: coloring uses {} colors (bound {bound}; try --allow-six)",
            report.colors_used
        );
        return EXIT_VERIFY;
    }
    if args.require_faithful && !report.faithful {
        eprintln!("error: construction required repair (--require-faithful)");
        return EXIT_VERIFY;
    }
    EXIT_OK
}

fn cmd_verify(args: VerifyArgs) -> u8 {
    let text = match fs::read_to_string(&args.file) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", args.file.display());
            return EXIT_USAGE;
        }
    };
    let parsed: ColoringFile = match serde_json::from_str(&text) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: malformed coloring file: {e}");
            return EXIT_USAGE;
        }
    };
    let (g, coloring) = match coloring_from_file(&parsed) {
        Ok(x) => x,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    let violations = verify_star(&g, &coloring, args.require_total);
    let out = violations_to_file(&g, &violations);
    println!("{}", serde_json::to_string_pretty(&out).expect("serializes"));
    if violations.is_empty() {
        EXIT_OK
    } else {
        EXIT_VERIFY
    }
}

fn cmd_exact(args: ExactArgs) -> u8 {
    if args.max_colors == 0 || args.max_colors > 7 {
        eprintln!("error: --max-colors must lie in 1..=7");
        return EXIT_USAGE;
    }
    let g = match build_graph(args.n, args.k) {
        Ok(g) => g,
        Err(code) => return code,
    };
    let config = SearchConfig {
        max_colors: args.max_colors,
        node_budget: args.node_budget,
        ..Default::default()
    };
    match petersen_star::star_chromatic_index(&g, &config) {
        IndexResult::Exact(c) => {
            println!("{c}");
            EXIT_OK
        }
        IndexResult::Indeterminate => {
            println!(
                "indeterminate (node budget {} exhausted before {} colors)",
                args.node_budget, args.max_colors
            );
            EXIT_INDETERMINATE
        }
    }
}

fn sweep_instances(args: &SweepArgs) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for n in args.n_from..=args.n_to {
        if n < 3 {
            continue;
        }
        for k in 1..=n / 2 {
            if let Some(fixed) = args.k {
                if k != fixed {
                    continue;
                }
            }
            if let Some(min) = args.gcd_min {
                if gcd(n, k) < min {
                    continue;
                }
            }
            out.push((n, k));
        }
    }
    out
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn cmd_sweep(args: SweepArgs) -> u8 {
    if args.n_from > args.n_to {
        eprintln!("error: empty range {}..{}", args.n_from, args.n_to);
        return EXIT_USAGE;
    }
    let workers = args
        .workers
        .or_else(|| std::env::var(WORKERS_ENV).ok().and_then(|v| v.parse().ok()));
    let pool = {
        let mut builder = rayon::ThreadPoolBuilder::new();
        if let Some(w) = workers {
            builder = builder.num_threads(w.max(1));
        }
        match builder.build() {
            Ok(p) => p,
            Err(e) => {
                eprintln!("error: cannot build worker pool: {e}");
                return EXIT_USAGE;
            }
        }
    };

    let instances = sweep_instances(&args);
    let mut rows: Vec<SweepRow> = pool.install(|| {
        instances
            .par_iter()
            .map(|&(n, k)| {
                let g = GpGraph::build(n, k).expect("admissible instance");
                let start = Instant::now();
                let row = match dispatch(&g) {
                    Ok(report) => {
                        let verified = verify_star(&g, &report.coloring, true).is_empty();
                        SweepRow {
                            n,
                            k,
                            d: g.d(),
                            t: g.t(),
                            method: report.method.as_str().to_string(),
                            colors_used: report.colors_used,
                            faithful: report.faithful,
                            verified,
                            runtime_ms: start.elapsed().as_millis(),
                        }
                    }
                    Err(e) => SweepRow {
                        n,
                        k,
                        d: g.d(),
                        t: g.t(),
                        method: format!("error({e})"),
                        colors_used: 0,
                        faithful: false,
                        verified: false,
                        runtime_ms: start.elapsed().as_millis(),
                    },
                };
                row
            })
            .collect()
    });
    rows.sort_by_key(|r| (r.n, r.k));

    let mut body = String::from(SWEEP_CSV_HEADER);
    body.push('\n');
    for row in &rows {
        body.push_str(&row.to_csv());
        body.push('\n');
    }
    match &args.out {
        Some(path) => {
            if let Err(e) = fs::write(path, &body) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return EXIT_USAGE;
            }
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(body.as_bytes());
        }
    }
    if rows.iter().all(|r| r.verified) {
        EXIT_OK
    } else {
        let failed = rows.iter().filter(|r| !r.verified).count();
        eprintln!("error: {failed} instances failed verification");
        EXIT_VERIFY
    }
}

fn cmd_export(args: ExportArgs) -> u8 {
    let g = match build_graph(args.n, args.k) {
        Ok(g) => g,
        Err(code) => return code,
    };
    let coloring = match &args.coloring {
        Some(path) => {
            let text = match fs::read_to_string(path) {
                Ok(t) => t,
                Err(e) => {
                    eprintln!("error: cannot read {}: {e}", path.display());
                    return EXIT_USAGE;
                }
            };
            let parsed: ColoringFile = match serde_json::from_str(&text) {
                Ok(p) => p,
                Err(e) => {
                    eprintln!("error: malformed coloring file: {e}");
                    return EXIT_USAGE;
                }
            };
            if parsed.n != args.n || parsed.k != args.k {
                eprintln!("error: coloring file is for GP({},{})", parsed.n, parsed.k);
                return EXIT_USAGE;
            }
            match coloring_from_file(&parsed) {
                Ok((_, c)) => Some(c),
                Err(e) => {
                    eprintln!("error: {e}");
                    return EXIT_USAGE;
                }
            }
        }
        None => match dispatch(&g) {
            Ok(report) => Some(report.coloring),
            Err(e) => {
                eprintln!("error: {e}");
                return EXIT_VERIFY;
            }
        },
    };
    let dot = to_dot(&g, coloring.as_ref());
    if let Err(e) = fs::write(&args.dot, dot) {
        eprintln!("error: cannot write {}: {e}", args.dot.display());
        return EXIT_USAGE;
    }
    EXIT_OK
}
