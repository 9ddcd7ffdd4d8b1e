//! Minimum-cost piece matching between a decomposition of F and the forest G.

use crate::forest::{fragment_equal, fragment_equal_exact, Forest};

use super::decompose::{Piece, PieceDecomposition};

const NONE: u32 = u32::MAX;

#[inline]
fn add(a: u32, b: u32) -> u32 {
    if a == NONE || b == NONE {
        NONE
    } else {
        a + b
    }
}

fn same(f: &Forest, fl: usize, fr: usize, g: &Forest, gl: usize, gr: usize) -> bool {
    fragment_equal(f, fl, fr, g, gl, gr) && fragment_equal_exact(f, fl, fr, g, gl, gr)
}

#[derive(Clone, Copy, Debug)]
enum Kind {
    Empty,
    Single(usize),
    Split { left: usize, right: usize, m: usize },
    Ctx { piece: usize, inner: usize },
}

#[derive(Clone, Copy, Debug)]
struct DNode {
    kind: Kind,
    i: usize,
    j: usize,
    count: u32,
}

/// A decomposition as a binary derivation: splits, contexts, and single pieces.
#[derive(Clone, Debug)]
pub struct DTree {
    nodes: Vec<DNode>,
    root: usize,
    pieces: Vec<Piece>,
}

impl DTree {
    pub fn new(d: &PieceDecomposition, flen: usize) -> DTree {
        let h = d.hierarchy();
        let mut t = DTree {
            nodes: Vec::with_capacity(2 * d.len() + 1),
            root: 0,
            pieces: d.pieces.clone(),
        };
        let mut node_of = vec![usize::MAX; d.len()];
        for v in h.post_order() {
            let p = d.pieces[v];
            let id = match p {
                Piece::Subforest { l, r } => t.push(DNode {
                    kind: Kind::Single(v),
                    i: l,
                    j: r,
                    count: 1,
                }),
                Piece::Context { l, l2, r2, r } => {
                    let kids: Vec<usize> = h.children[v].iter().map(|&c| node_of[c]).collect();
                    let inner = t.sequence(&kids, l2, r2);
                    let count = t.nodes[inner].count + 1;
                    t.push(DNode {
                        kind: Kind::Ctx { piece: v, inner },
                        i: l,
                        j: r,
                        count,
                    })
                }
            };
            node_of[v] = id;
        }
        let roots: Vec<usize> = h.roots.iter().map(|&c| node_of[c]).collect();
        t.root = t.sequence(&roots, 0, flen);
        t
    }

    fn push(&mut self, n: DNode) -> usize {
        self.nodes.push(n);
        self.nodes.len() - 1
    }

    fn sequence(&mut self, kids: &[usize], i: usize, j: usize) -> usize {
        match kids.len() {
            0 => self.push(DNode {
                kind: Kind::Empty,
                i,
                j,
                count: 0,
            }),
            1 => kids[0],
            n => {
                let mid = n / 2;
                let m = self.nodes[kids[mid]].i;
                let left = self.sequence(&kids[..mid], i, m);
                let right = self.sequence(&kids[mid..], m, j);
                let count = self.nodes[left].count + self.nodes[right].count;
                self.push(DNode {
                    kind: Kind::Split { left, right, m },
                    i,
                    j,
                    count,
                })
            }
        }
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn piece_count(&self) -> usize {
        self.nodes[self.root].count as usize
    }
}

/// One matched pair: a piece of the decomposition and its identical copy in G.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MatchedPair {
    pub index: usize,
    pub f: Piece,
    pub g: Piece,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PieceMatching {
    pub pairs: Vec<MatchedPair>,
}

impl PieceMatching {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Characters of G not covered by any matched piece.
    pub fn unmatched_g(&self, glen: usize) -> Vec<bool> {
        let mut free = vec![true; glen];
        for p in &self.pairs {
            for (a, b) in p.g.fragments() {
                free[a..b].iter_mut().for_each(|x| *x = false);
            }
        }
        free
    }

    /// Characters of F not covered by any matched piece.
    pub fn unmatched_f(&self, flen: usize) -> Vec<bool> {
        let mut free = vec![true; flen];
        for p in &self.pairs {
            for (a, b) in p.f.fragments() {
                free[a..b].iter_mut().for_each(|x| *x = false);
            }
        }
        free
    }

    /// Unmatched pieces of `d` plus maximal unmatched runs of G.
    pub fn cost(&self, d: &PieceDecomposition, glen: usize) -> usize {
        let free = self.unmatched_g(glen);
        let runs = (0..glen).filter(|&i| free[i] && (i == 0 || !free[i - 1])).count();
        d.len() - self.pairs.len() + runs
    }
}

#[derive(Clone, Copy, Debug)]
enum Choice {
    AllUnmatched,
    TrimLeft(u8),
    TrimRight(u8),
    Full,
    LeftEmpty,
    RightEmpty,
    Split { mg: usize, a: u8, b: u8 },
    CtxMatchEmpty,
    CtxMatch { a: u8, b: u8 },
    CtxSkip { lg: usize, rg: usize, a: u8, b: u8 },
}

struct Dp<'a> {
    f: &'a Forest,
    g: &'a Forest,
    k: usize,
    w: usize,
    t: &'a DTree,
    tables: Vec<Vec<u32>>,
}

impl<'a> Dp<'a> {
    fn slot(&self, x: usize, lg: usize, rg: usize, fl: u8, fr: u8) -> Option<usize> {
        let n = &self.t.nodes[x];
        let a = (lg + 2 * self.k).checked_sub(n.i)?;
        let b = (rg + 2 * self.k).checked_sub(n.j)?;
        if a >= self.w || b >= self.w || lg >= rg || rg > self.g.len() {
            return None;
        }
        Some(((a * self.w + b) << 2) | ((fl as usize) << 1) | fr as usize)
    }

    fn get(&self, x: usize, lg: usize, rg: usize, fl: u8, fr: u8) -> u32 {
        match self.slot(x, lg, rg, fl, fr) {
            Some(s) => self.tables[x][s],
            None => NONE,
        }
    }

    fn candidates(&self, x: usize, lg: usize, rg: usize, fl: u8, fr: u8, visit: &mut impl FnMut(u32, Choice)) {
        let k2 = 2 * self.k;
        let n = self.t.nodes[x];
        if fl == 0 && fr == 0 {
            visit(n.count + 1, Choice::AllUnmatched);
        }
        if fl == 0 && lg < (rg - 1).min(n.i + k2) {
            visit(self.get(x, lg + 1, rg, 0, fr), Choice::TrimLeft(0));
            visit(add(self.get(x, lg + 1, rg, 1, fr), 1), Choice::TrimLeft(1));
        }
        if fr == 0 && rg > (lg + 1).max(n.j.saturating_sub(k2)) {
            visit(self.get(x, lg, rg - 1, fl, 0), Choice::TrimRight(0));
            visit(add(self.get(x, lg, rg - 1, fl, 1), 1), Choice::TrimRight(1));
        }
        match n.kind {
            Kind::Empty => {}
            Kind::Single(_) => {
                if fl == 1 && fr == 1 && rg - lg == n.j - n.i && same(self.f, n.i, n.j, self.g, lg, rg) {
                    visit(0, Choice::Full);
                }
            }
            Kind::Split { left, right, m } => {
                let (cl, cr) = (self.t.nodes[left].count, self.t.nodes[right].count);
                for mg in m.saturating_sub(k2).max(lg)..=(m + k2).min(rg) {
                    if mg == lg {
                        visit(add(cl, self.get(right, lg, rg, fl, fr)), Choice::LeftEmpty);
                    } else if mg == rg {
                        visit(add(self.get(left, lg, rg, fl, fr), cr), Choice::RightEmpty);
                    } else {
                        for a in 0..2u8 {
                            for b in 0..2u8 {
                                let v = add(self.get(left, lg, mg, fl, a), self.get(right, mg, rg, b, fr));
                                let v = if a == 0 && b == 0 && v != NONE { v - 1 } else { v };
                                visit(v, Choice::Split { mg, a, b });
                            }
                        }
                    }
                }
            }
            Kind::Ctx { piece, inner } => {
                let Piece::Context { l, l2, r2, r } = self.t.pieces[piece] else { unreachable!() };
                let (ll, rl) = (l2 - l, r - r2);
                if fl == 1
                    && fr == 1
                    && lg + ll + rl <= rg
                    && same(self.f, l, l2, self.g, lg, lg + ll)
                    && same(self.f, r2, r, self.g, rg - rl, rg)
                    && self.g.is_balanced(lg + ll, rg - rl)
                {
                    if lg + ll == rg - rl {
                        visit(self.t.nodes[inner].count, Choice::CtxMatchEmpty);
                    } else {
                        for a in 0..2u8 {
                            for b in 0..2u8 {
                                visit(self.get(inner, lg + ll, rg - rl, a, b), Choice::CtxMatch { a, b });
                            }
                        }
                    }
                }
                let ilg = l2.saturating_sub(k2).max(lg);
                let irg = (r2 + k2).min(rg);
                let sl: &[u8] = match (lg < ilg, fl) {
                    (false, 0) => &[0],
                    (false, _) => &[1],
                    (true, 0) => &[0, 1],
                    (true, _) => &[],
                };
                let sr: &[u8] = match (irg < rg, fr) {
                    (false, 0) => &[0],
                    (false, _) => &[1],
                    (true, 0) => &[0, 1],
                    (true, _) => &[],
                };
                if ilg < irg {
                    for &a in sl {
                        for &b in sr {
                            let extra = (fl < a) as u32 + (fr < b) as u32 + 1;
                            visit(
                                add(self.get(inner, ilg, irg, a, b), extra),
                                Choice::CtxSkip { lg: ilg, rg: irg, a, b },
                            );
                        }
                    }
                }
            }
        }
    }

    fn fill(&mut self) {
        let k2 = 2 * self.k;
        let glen = self.g.len();
        for x in 0..self.t.nodes.len() {
            let n = self.t.nodes[x];
            self.tables[x] = vec![NONE; self.w * self.w * 4];
            let (llo, lhi) = (n.i.saturating_sub(k2), (n.i + k2).min(glen));
            let (rlo, rhi) = (n.j.saturating_sub(k2), (n.j + k2).min(glen));
            if llo > lhi || rlo > rhi {
                continue;
            }
            for lg in (llo..=lhi).rev() {
                for rg in rlo.max(lg + 1)..=rhi {
                    for fl in 0..2u8 {
                        for fr in 0..2u8 {
                            let mut best = NONE;
                            self.candidates(x, lg, rg, fl, fr, &mut |v, _| best = best.min(v));
                            let s = self.slot(x, lg, rg, fl, fr).unwrap();
                            self.tables[x][s] = best;
                        }
                    }
                }
            }
        }
    }

    fn trace(&self, start: (usize, usize, usize, u8, u8)) -> Vec<MatchedPair> {
        let mut out = Vec::new();
        let mut work = vec![start];
        while let Some((x, lg, rg, fl, fr)) = work.pop() {
            let target = self.get(x, lg, rg, fl, fr);
            debug_assert!(target != NONE);
            let mut chosen = None;
            self.candidates(x, lg, rg, fl, fr, &mut |v, c| {
                if chosen.is_none() && v == target {
                    chosen = Some(c);
                }
            });
            let n = self.t.nodes[x];
            match chosen.expect("traceback finds the optimum") {
                Choice::AllUnmatched => {}
                Choice::TrimLeft(a) => work.push((x, lg + 1, rg, a, fr)),
                Choice::TrimRight(b) => work.push((x, lg, rg - 1, fl, b)),
                Choice::Full => {
                    let Kind::Single(index) = n.kind else { unreachable!() };
                    out.push(MatchedPair {
                        index,
                        f: self.t.pieces[index],
                        g: Piece::Subforest { l: lg, r: rg },
                    });
                }
                Choice::LeftEmpty => {
                    let Kind::Split { right, .. } = n.kind else { unreachable!() };
                    work.push((right, lg, rg, fl, fr));
                }
                Choice::RightEmpty => {
                    let Kind::Split { left, .. } = n.kind else { unreachable!() };
                    work.push((left, lg, rg, fl, fr));
                }
                Choice::Split { mg, a, b } => {
                    let Kind::Split { left, right, .. } = n.kind else { unreachable!() };
                    work.push((left, lg, mg, fl, a));
                    work.push((right, mg, rg, b, fr));
                }
                Choice::CtxMatchEmpty | Choice::CtxMatch { .. } => {
                    let Kind::Ctx { piece, inner } = n.kind else { unreachable!() };
                    let f = self.t.pieces[piece];
                    let Piece::Context { l, l2, r2, r } = f else { unreachable!() };
                    let (gl2, gr2) = (lg + l2 - l, rg - (r - r2));
                    out.push(MatchedPair {
                        index: piece,
                        f,
                        g: Piece::Context { l: lg, l2: gl2, r2: gr2, r: rg },
                    });
                    if let Choice::CtxMatch { a, b } = chosen.unwrap() {
                        work.push((inner, gl2, gr2, a, b));
                    }
                }
                Choice::CtxSkip { lg, rg, a, b } => {
                    let Kind::Ctx { inner, .. } = n.kind else { unreachable!() };
                    work.push((inner, lg, rg, a, b));
                }
            }
        }
        out.sort_by_key(|p| p.f.start());
        out
    }
}

/// Minimum-cost piece matching of `d` (a decomposition of `f`) into `g`.
///
/// Requires `||F| - |G|| <= 2k`. Returns the matching and its cost.
pub fn match_pieces(d: &PieceDecomposition, f: &Forest, g: &Forest, k: usize) -> (PieceMatching, usize) {
    assert!(f.len().abs_diff(g.len()) <= 2 * k, "length difference exceeds 2k");
    let tree = DTree::new(d, f.len());
    if g.is_empty() {
        return (PieceMatching::default(), d.len());
    }
    let mut dp = Dp {
        f,
        g,
        k,
        w: 4 * k + 1,
        t: &tree,
        tables: vec![Vec::new(); tree.nodes.len()],
    };
    dp.fill();
    let root = tree.root;
    let mut best = (NONE, 0u8, 0u8);
    for fl in 0..2u8 {
        for fr in 0..2u8 {
            let v = dp.get(root, 0, g.len(), fl, fr);
            if v < best.0 {
                best = (v, fl, fr);
            }
        }
    }
    let pairs = dp.trace((root, 0, g.len(), best.1, best.2));
    (PieceMatching { pairs }, best.0 as usize)
}
