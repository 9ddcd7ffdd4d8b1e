//! Merging adjacent clean pieces of a matching.

use super::decompose::{merge_to_fixpoint, Mergeable, Piece, PieceDecomposition, Tree};
use super::matching::{MatchedPair, PieceMatching};

#[derive(Clone, Copy, Debug)]
struct Item {
    f: Piece,
    g: Option<Piece>,
    clean: bool,
}

fn touches(p: &Piece, free: &[bool]) -> bool {
    p.fragments().iter().any(|&(a, b)| (a > 0 && free[a - 1]) || (b < free.len() && free[b]))
}

/// Per piece of `d`: matched with no unmatched character next to it in F or G.
pub fn clean_flags(d: &PieceDecomposition, m: &PieceMatching, flen: usize, glen: usize) -> Vec<bool> {
    let free_f = m.unmatched_f(flen);
    let free_g = m.unmatched_g(glen);
    let mut clean = vec![false; d.len()];
    for p in &m.pairs {
        clean[p.index] = !touches(&p.f, &free_f) && !touches(&p.g, &free_g);
    }
    clean
}

impl Mergeable for Item {
    fn piece(&self) -> Piece {
        self.f
    }

    fn join_siblings(&self, right: &Self) -> Option<Self> {
        let (Some(g1), Some(g2)) = (self.g, right.g) else { return None };
        if !self.clean || !right.clean || self.f.is_context() || right.f.is_context() || g1.is_context() {
            return None;
        }
        if g2.is_context() || g1.end() != g2.start() {
            return None;
        }
        Some(Item {
            f: Piece::Subforest { l: self.f.start(), r: right.f.end() },
            g: Some(Piece::Subforest { l: g1.start(), r: g2.end() }),
            clean: true,
        })
    }

    fn absorb_leaf(&self, child: &Self, left: bool) -> Option<Self> {
        let (Some(gv), Some(gc)) = (self.g, child.g) else { return None };
        if !self.clean || !child.clean || child.f.is_context() {
            return None;
        }
        let (Piece::Context { l, l2, r2, r }, Piece::Context { l: gl, l2: gl2, r2: gr2, r: gr }) = (self.f, gv) else {
            return None;
        };
        if left {
            (gl2 == gc.start()).then(|| Item {
                f: Piece::context(l, child.f.end(), r2, r),
                g: Some(Piece::context(gl, gc.end(), gr2, gr)),
                clean: true,
            })
        } else {
            (gr2 == gc.end()).then(|| Item {
                f: Piece::context(l, l2, child.f.start(), r),
                g: Some(Piece::context(gl, gl2, gc.start(), gr)),
                clean: true,
            })
        }
    }

    fn absorb_context(&self, child: &Self) -> Option<Self> {
        let (Some(gv), Some(gc)) = (self.g, child.g) else { return None };
        if !self.clean || !child.clean {
            return None;
        }
        match (self.f, child.f, gv, gc) {
            (
                Piece::Context { l, r, .. },
                Piece::Context { l2, r2, .. },
                Piece::Context { l: gl, l2: gvl2, r2: gvr2, r: gr },
                Piece::Context { l: gcl, l2: gl2, r2: gr2, r: gcr },
            ) if gvl2 == gcl && gcr == gvr2 => Some(Item {
                f: Piece::context(l, l2, r2, r),
                g: Some(Piece::context(gl, gl2, gr2, gr)),
                clean: true,
            }),
            _ => None,
        }
    }
}

/// Outcome of merging a matching.
#[derive(Clone, Debug, Default)]
pub struct Merged {
    pub decomposition: PieceDecomposition,
    pub matching: PieceMatching,
    /// Dirty pieces before merging.
    pub dirty: usize,
}

/// Repeatedly unites adjacent clean pieces along with their images in G.
pub fn merge_matching(d: &PieceDecomposition, m: &PieceMatching, flen: usize, glen: usize) -> Merged {
    let clean = clean_flags(d, m, flen, glen);
    let mut g_of: Vec<Option<Piece>> = vec![None; d.len()];
    for p in &m.pairs {
        g_of[p.index] = Some(p.g);
    }
    let h = d.hierarchy();
    let mut tree = Tree {
        items: (0..d.len())
            .map(|i| Item {
                f: d.pieces[i],
                g: g_of[i],
                clean: clean[i],
            })
            .collect(),
        children: h.children.clone(),
        roots: h.roots.clone(),
    };
    merge_to_fixpoint(&mut tree);
    let mut live: Vec<Item> = tree.live().into_iter().map(|v| tree.items[v]).collect();
    live.sort_by_key(|it| it.f.start());
    let decomposition = PieceDecomposition {
        pieces: live.iter().map(|it| it.f).collect(),
    };
    let pairs = live
        .iter()
        .enumerate()
        .filter_map(|(index, it)| it.g.map(|g| MatchedPair { index, f: it.f, g }))
        .collect();
    Merged {
        decomposition,
        matching: PieceMatching { pairs },
        dirty: clean.iter().filter(|&&c| !c).count(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forest::{parse_forest, Alphabet};
    use crate::kernel::decompose::decompose;
    use crate::kernel::matching::match_pieces;

    #[test]
    fn all_clean_merges_to_one() {
        let mut al = Alphabet::new();
        let f = parse_forest("(a(b)(c(d)(e)))(f)(g(h))", &mut al).unwrap();
        let d = decompose(&f, 2);
        let (m, cost) = match_pieces(&d, &f, &f, 1);
        assert_eq!(cost, 0);
        let out = merge_matching(&d, &m, f.len(), f.len());
        assert_eq!(out.dirty, 0);
        assert_eq!(out.decomposition.len(), 1);
        assert_eq!(out.matching.pairs[0].g, Piece::Subforest { l: 0, r: f.len() });
    }

    #[test]
    fn one_mismatch() {
        let mut al = Alphabet::new();
        let f = parse_forest("(a(b)(c(d)(e)))(f)(g(h))(i)", &mut al).unwrap();
        let g = parse_forest("(a(b)(c(x)(e)))(f)(g(h))(i)", &mut al).unwrap();
        let d = decompose(&f, 2);
        let (m, _) = match_pieces(&d, &f, &g, 1);
        let out = merge_matching(&d, &m, f.len(), g.len());
        assert!(out.decomposition.len() <= 5 * out.dirty + 1);
        assert!(crate::kernel::decompose::check_structure(&out.decomposition, &f).is_ok());
        for p in &out.matching.pairs {
            for ((a, b), (c, e)) in p.f.fragments().into_iter().zip(p.g.fragments()) {
                assert_eq!(f.slice(a, b), g.slice(c, e));
            }
        }
    }
}
