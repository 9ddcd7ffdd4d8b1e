use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::Parser;
use forest_ted::driver::{prepare_weights, run, Algo, RunConfig};
use forest_ted::forest::{parse_forest, Alphabet, Forest};
use forest_ted::weights::WeightTable;

/// Weighted tree edit distance between two forests.
#[derive(Parser, Debug)]
#[command(name = "ted", version)]
struct Cli {
    /// First forest, e.g. `(a(b)(c))`.
    forest1: PathBuf,
    /// Second forest.
    forest2: PathBuf,
    /// Weight file: `x<TAB>y<TAB>cost` lines, `-` for the empty label.
    #[arg(long)]
    weights: Option<PathBuf>,
    /// Threshold; larger distances print as INF.
    #[arg(short)]
    k: Option<usize>,
    /// oracle, klein, bounded, optimized, kernel, or auto.
    #[arg(long, default_value = "auto")]
    algo: String,
    /// Print an optimal edit script (bounded only).
    #[arg(long)]
    emit_alignment: bool,
    /// Print the kernel report to stderr (kernel only).
    #[arg(long)]
    debug_kernel: bool,
}

fn read(path: &Path) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))
}

fn load_forest(path: &Path, alpha: &mut Alphabet) -> Result<Forest, String> {
    parse_forest(&read(path)?, alpha).map_err(|e| format!("{}: parse error: {e}", path.display()))
}

fn main_inner(cli: Cli) -> Result<(), String> {
    let algo: Algo = cli.algo.parse().map_err(|e| format!("{e}"))?;
    let cfg = RunConfig {
        algo,
        k: cli.k,
        emit_alignment: cli.emit_alignment,
        debug_kernel: cli.debug_kernel,
    };
    cfg.validate().map_err(|e| format!("{e}"))?;
    let mut alpha = Alphabet::new();
    let f = load_forest(&cli.forest1, &mut alpha)?;
    let g = load_forest(&cli.forest2, &mut alpha)?;
    let table = match &cli.weights {
        Some(p) => WeightTable::parse_tsv(&read(p)?, &mut alpha)
            .map_err(|e| format!("{}: weight error: {e}", p.display()))?,
        None => WeightTable::unit(alpha.len()),
    };
    let prepared = prepare_weights(&table, &alpha).map_err(|e| format!("weight error: {e}"))?;
    if prepared.closure_changed > 0 {
        eprintln!(
            "note: metric closure changed {} weight entries",
            prepared.closure_changed
        );
    }
    let out = run(&f, &g, &prepared.model, &cfg).map_err(|e| format!("{e}"))?;
    println!("{}", out.value);
    for line in out.script.iter().flatten() {
        println!("{line}");
    }
    if let Some(d) = out.dump {
        eprint!("{d}");
    }
    Ok(())
}

fn main() -> ExitCode {
    match main_inner(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
