//! Kernelization: shrink `(F, G)` without changing `ted_{<=k}` and certify free blocks.

pub mod decompose;
pub mod extract;
pub mod matching;
pub mod merge;
pub mod periodic;
pub mod reduce;

use std::fmt::Write as _;

use crate::forest::{Forest, Paren, Symbol};
use crate::freeopt::FreeBlock;

pub use decompose::{check_decomposition, decompose, verify_decomposition, Piece, PieceDecomposition};
pub use extract::{extract_free_pairs, Occurrence};
pub use matching::{match_pieces, MatchedPair, PieceMatching};
pub use merge::{merge_matching, Merged};
pub use periodic::{balanced_rotation, find_periodic_blocks, RedBlackLabels};
pub use reduce::{context_reduction, forest_reduction, periodicity_reduction};

/// Every size constant of the kernel, as a function of `k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Thresholds {
    pub k: usize,
}

impl Thresholds {
    pub fn new(k: usize) -> Self {
        assert!(k >= 1, "threshold must be positive");
        Thresholds { k }
    }

    /// Piece length bound of the decomposition.
    pub fn piece_len(&self) -> usize {
        (self.k * self.k * self.k).max(2)
    }

    /// Below this length of F the matching is left empty.
    pub fn min_matched_len(&self) -> usize {
        self.k.pow(4)
    }

    pub fn max_matching_cost(&self) -> usize {
        6 * self.k
    }

    pub fn block_len(&self) -> usize {
        42 * self.k
    }

    pub fn black_margin(&self) -> usize {
        5 * self.k
    }

    pub fn max_period(&self) -> usize {
        4 * self.k
    }

    pub fn forest_red(&self) -> usize {
        158 * self.k * self.k
    }

    pub fn context_red(&self) -> usize {
        1152 * self.k * self.k * self.k
    }

    pub fn vertical_exponent(&self) -> usize {
        6 * self.k
    }

    pub fn composition_len(&self) -> usize {
        8 * self.k
    }

    /// `(24k, 24k^2)`: levels and width of the fallback context.
    pub fn fallback_levels(&self) -> (usize, usize) {
        (24 * self.k, 24 * self.k * self.k)
    }
}

/// Why the pipeline concluded `ted(F, G) > k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TooFar {
    LengthGap { f: usize, g: usize },
    MatchingCost { cost: usize, limit: usize },
}

/// Decomposition, matching, and merge of one pipeline run.
#[derive(Clone, Debug, Default)]
pub struct PipelineResult {
    pub t: usize,
    pub decomposition: PieceDecomposition,
    pub matching: PieceMatching,
    pub cost: usize,
    pub merged: Merged,
    pub unmatched_f: usize,
}

/// Piece matching of size O(k), or a certificate that `ted(F, G) > k`.
pub fn decomposition_pipeline(f: &Forest, g: &Forest, k: usize) -> Result<PipelineResult, TooFar> {
    let th = Thresholds::new(k);
    if f.len().abs_diff(g.len()) > 2 * k {
        return Err(TooFar::LengthGap { f: f.len(), g: g.len() });
    }
    let t = th.piece_len();
    if f.len() < th.min_matched_len() {
        return Ok(PipelineResult {
            t,
            unmatched_f: f.len(),
            ..Default::default()
        });
    }
    let decomposition = decompose(f, t);
    let (matching, cost) = match_pieces(&decomposition, f, g, k);
    if cost > th.max_matching_cost() {
        return Err(TooFar::MatchingCost {
            cost,
            limit: th.max_matching_cost(),
        });
    }
    let merged = merge_matching(&decomposition, &matching, f.len(), g.len());
    let unmatched_f = matching.unmatched_f(f.len()).iter().filter(|&&x| x).count();
    Ok(PipelineResult {
        t,
        decomposition,
        matching,
        cost,
        merged,
        unmatched_f,
    })
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct KernelStats {
    pub input_f: usize,
    pub input_g: usize,
    pub t: usize,
    pub pieces: usize,
    pub matching_cost: usize,
    pub dirty: usize,
    pub merged_pieces: usize,
    pub matched_pairs: usize,
    pub unmatched_f: usize,
    pub forest_fallbacks: usize,
    pub context_fallbacks: usize,
    pub levels_removed: usize,
    pub periodic_blocks: usize,
    pub dropped_blocks: usize,
    pub output_f: usize,
    pub output_g: usize,
    pub non_free: usize,
}

/// Reduced forests with certified free blocks.
#[derive(Clone, Debug)]
pub struct Kernel {
    pub f: Forest,
    pub g: Forest,
    pub blocks: Vec<FreeBlock>,
    pub stats: KernelStats,
    pub pipeline: PipelineResult,
    log: Vec<String>,
}

impl Kernel {
    /// Line-oriented report of pieces, reductions, and blocks.
    pub fn dump(&self) -> String {
        let s = &self.stats;
        let mut out = String::new();
        let _ = writeln!(out, "kernel input |F|={} |G|={} t={}", s.input_f, s.input_g, s.t);
        let _ = writeln!(
            out,
            "pieces {} cost {} dirty {} merged {} matched {} unmatched_f {}",
            s.pieces, s.matching_cost, s.dirty, s.merged_pieces, s.matched_pairs, s.unmatched_f
        );
        for p in &self.pipeline.merged.matching.pairs {
            let _ = writeln!(out, "pair F{} G{}", p.f, p.g);
        }
        for line in &self.log {
            let _ = writeln!(out, "{line}");
        }
        for b in &self.blocks {
            let _ = writeln!(
                out,
                "block F[{}..{}) G[{}..{}) |R|={} e={}",
                b.p_f,
                b.q_f,
                b.p_g,
                b.q_g,
                b.period.len(),
                b.e
            );
        }
        let _ = writeln!(
            out,
            "kernel output |F'|={} |G'|={} blocks {} dropped {} non_free {}",
            s.output_f,
            s.output_g,
            self.blocks.len(),
            s.dropped_blocks,
            s.non_free
        );
        out
    }
}

struct Splice {
    start: usize,
    end: usize,
    with: Vec<Paren>,
}

/// Applies disjoint splices; returns the new string and each splice's new start.
fn apply_splices(chars: &[Paren], splices: &[Splice]) -> (Vec<Paren>, Vec<usize>) {
    let mut order: Vec<usize> = (0..splices.len()).collect();
    order.sort_by_key(|&i| splices[i].start);
    let mut out = Vec::with_capacity(chars.len());
    let mut starts = vec![0; splices.len()];
    let mut at = 0;
    for i in order {
        let s = &splices[i];
        assert!(s.start >= at, "splices overlap");
        out.extend_from_slice(&chars[at..s.start]);
        starts[i] = out.len();
        out.extend_from_slice(&s.with);
        at = s.end;
    }
    out.extend_from_slice(&chars[at..]);
    (out, starts)
}

/// Kernelizes `(F, G)` for threshold `k`, using label `a` in fallback pieces.
///
/// `ted_{<=k}` is preserved for every normalized quasimetric weight function.
pub fn kernelize(f: &Forest, g: &Forest, k: usize, a: Symbol) -> Result<Kernel, TooFar> {
    let th = Thresholds::new(k);
    let pipeline = decomposition_pipeline(f, g, k)?;
    let mut stats = KernelStats {
        input_f: f.len(),
        input_g: g.len(),
        t: pipeline.t,
        pieces: pipeline.decomposition.len(),
        matching_cost: pipeline.cost,
        dirty: pipeline.merged.dirty,
        merged_pieces: pipeline.merged.decomposition.len(),
        matched_pairs: pipeline.merged.matching.len(),
        unmatched_f: pipeline.unmatched_f,
        ..Default::default()
    };
    let mut log = Vec::new();
    let mut fs: Vec<Splice> = Vec::new();
    let mut gs: Vec<Splice> = Vec::new();
    for p in &pipeline.merged.matching.pairs {
        match (p.f, p.g) {
            (Piece::Subforest { l, r }, Piece::Subforest { l: gl, r: gr }) => {
                let red = forest_reduction(f.slice(l, r), &th, a);
                stats.forest_fallbacks += red.fallback as usize;
                if red.fallback {
                    let _ = writeln!(log_line(&mut log), "forest F[{l}..{r}) -> fallback {}", red.value.len());
                }
                fs.push(Splice { start: l, end: r, with: red.value.clone() });
                gs.push(Splice { start: gl, end: gr, with: red.value });
            }
            (Piece::Context { l, l2, r2, r }, Piece::Context { l: gl, l2: gl2, r2: gr2, r: gr }) => {
                let (red, info) = context_reduction(f.slice(l, l2), f.slice(r2, r), &th, a);
                stats.context_fallbacks += red.fallback as usize;
                stats.forest_fallbacks += info.forest_fallbacks;
                stats.levels_removed += info.levels_removed;
                if red.fallback || info.levels_removed > 0 || info.forest_fallbacks > 0 {
                    let _ = writeln!(
                        log_line(&mut log),
                        "context F{} -> {}+{} (levels removed {}, forest fallbacks {}, fallback {})",
                        p.f,
                        red.value.0.len(),
                        red.value.1.len(),
                        info.levels_removed,
                        info.forest_fallbacks,
                        red.fallback
                    );
                }
                let (lv, rv) = red.value;
                fs.push(Splice { start: l, end: l2, with: lv.clone() });
                fs.push(Splice { start: r2, end: r, with: rv.clone() });
                gs.push(Splice { start: gl, end: gl2, with: lv });
                gs.push(Splice { start: gr2, end: gr, with: rv });
            }
            _ => unreachable!("matched pieces have the same shape"),
        }
    }
    let (fc, fstarts) = apply_splices(f.chars(), &fs);
    let (gc, gstarts) = apply_splices(g.chars(), &gs);
    let f2 = Forest::from_parens(fc).expect("splicing keeps F balanced");
    let g2 = Forest::from_parens(gc).expect("splicing keeps G balanced");
    let occurrences: Vec<Occurrence> = fs
        .iter()
        .enumerate()
        .map(|(i, s)| Occurrence {
            f: fstarts[i],
            g: gstarts[i],
            len: s.with.len(),
        })
        .collect();
    let ex = extract_free_pairs(&f2, &g2, &occurrences, k);
    for (b, reason) in &ex.dropped {
        log.push(format!("dropped block F[{}..{}) G[{}..{}): {reason}", b.p_f, b.q_f, b.p_g, b.q_g));
    }
    stats.periodic_blocks = ex.periodic_blocks;
    stats.dropped_blocks = ex.dropped.len();
    stats.output_f = f2.len();
    stats.output_g = g2.len();
    stats.non_free = f2.len() - ex.blocks.iter().map(|b| b.q_f - b.p_f).sum::<usize>();
    Ok(Kernel {
        f: f2,
        g: g2,
        blocks: ex.blocks,
        stats,
        pipeline,
        log,
    })
}

fn log_line(log: &mut Vec<String>) -> &mut String {
    log.push(String::new());
    log.last_mut().unwrap()
}
