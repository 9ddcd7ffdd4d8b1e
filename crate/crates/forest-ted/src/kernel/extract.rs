//! Turning periodic blocks of matched pieces into free blocks.

use crate::forest::{Forest, Paren};
use crate::freeopt::{validate_block, FreeBlock};

use super::periodic::{balanced_rotation, find_periodic_blocks, PeriodicBlock};

/// An identical fragment `F'[f..f+len) = G'[g..g+len)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Occurrence {
    pub f: usize,
    pub g: usize,
    pub len: usize,
}

#[derive(Clone, Debug, Default)]
pub struct Extraction {
    pub blocks: Vec<FreeBlock>,
    pub periodic_blocks: usize,
    /// Candidates rejected by the free-block validator, with the reason.
    pub dropped: Vec<(FreeBlock, &'static str)>,
}

/// The free block carved out of periodic block `b` of `text`, in text coordinates.
/// Returns `(start, end, period, e)`.
pub fn carve(text: &[Paren], b: &PeriodicBlock, k: usize) -> Option<(usize, usize, Vec<Paren>, usize)> {
    let p = b.p;
    let rot = balanced_rotation(&text[b.l..b.l + p]).ok()?;
    let l1 = b.l + rot;
    if l1 >= b.r {
        return None;
    }
    let r1 = l1 + (b.r - l1) / p * p;
    let rl = p * (4 * k).div_ceil(p);
    let r2 = l1 + (r1 - l1) / rl * rl;
    let copies = (r2 - l1) / rl;
    if copies < 3 {
        return None;
    }
    Some((l1 + rl, r2 - rl, text[l1..l1 + rl].to_vec(), copies - 2))
}

/// Free blocks for every periodic block inside the given occurrences.
pub fn extract_free_pairs(f: &Forest, g: &Forest, occurrences: &[Occurrence], k: usize) -> Extraction {
    let mut out = Extraction::default();
    for occ in occurrences {
        let text = f.slice(occ.f, occ.f + occ.len);
        if text != g.slice(occ.g, occ.g + occ.len) {
            continue;
        }
        let rb = find_periodic_blocks(text, k);
        out.periodic_blocks += rb.blocks.len();
        for b in &rb.blocks {
            let Some((s, e_end, period, e)) = carve(text, b, k) else { continue };
            let Ok(period) = Forest::from_parens(period) else { continue };
            let fb = FreeBlock {
                p_f: occ.f + s,
                q_f: occ.f + e_end,
                p_g: occ.g + s,
                q_g: occ.g + e_end,
                period,
                e,
            };
            match validate_block(f, g, k, &fb) {
                Ok(()) => out.blocks.push(fb),
                Err(reason) => out.dropped.push((fb, reason)),
            }
        }
    }
    out.blocks.sort_by_key(|b| b.p_f);
    out
}
