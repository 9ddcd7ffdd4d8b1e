//! Pieces, piece decompositions, and their hierarchy.

use std::collections::HashMap;
use std::fmt;

use crate::forest::Forest;

/// A subforest `F[l..r)` or a context `<F[l..l2); F[r2..r)>`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Piece {
    Subforest { l: usize, r: usize },
    Context { l: usize, l2: usize, r2: usize, r: usize },
}

impl Piece {
    /// Builds a context, collapsing an empty hole to a subforest.
    pub fn context(l: usize, l2: usize, r2: usize, r: usize) -> Piece {
        if l2 == r2 {
            Piece::Subforest { l, r }
        } else {
            Piece::Context { l, l2, r2, r }
        }
    }

    pub fn start(&self) -> usize {
        match *self {
            Piece::Subforest { l, .. } | Piece::Context { l, .. } => l,
        }
    }

    pub fn end(&self) -> usize {
        match *self {
            Piece::Subforest { r, .. } | Piece::Context { r, .. } => r,
        }
    }

    pub fn len(&self) -> usize {
        match *self {
            Piece::Subforest { l, r } => r - l,
            Piece::Context { l, l2, r2, r } => (l2 - l) + (r - r2),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_context(&self) -> bool {
        matches!(self, Piece::Context { .. })
    }

    /// The one or two fragments making up the piece.
    pub fn fragments(&self) -> Vec<(usize, usize)> {
        match *self {
            Piece::Subforest { l, r } => vec![(l, r)],
            Piece::Context { l, l2, r2, r } => vec![(l, l2), (r2, r)],
        }
    }

    pub fn hole(&self) -> Option<(usize, usize)> {
        match *self {
            Piece::Subforest { .. } => None,
            Piece::Context { l2, r2, .. } => Some((l2, r2)),
        }
    }

    /// Number of nodes opening in the left half and closing in the right half.
    pub fn depth(&self, f: &Forest) -> usize {
        match *self {
            Piece::Subforest { .. } => 0,
            Piece::Context { l, l2, r2, .. } => (l..l2).filter(|&i| f.is_open(i) && f.mate(i) >= r2).count(),
        }
    }

    /// Whether the positions describe a well-formed piece of `f`.
    pub fn is_valid_in(&self, f: &Forest) -> bool {
        match *self {
            Piece::Subforest { l, r } => l < r && r <= f.len() && f.is_balanced(l, r),
            Piece::Context { l, l2, r2, r } => {
                l < l2
                    && l2 <= r2
                    && r2 < r
                    && r <= f.len()
                    && f.is_open(l)
                    && f.mate(l) == r - 1
                    && f.is_balanced(l2, r2)
            }
        }
    }

    pub fn contains(&self, i: usize) -> bool {
        self.fragments().iter().any(|&(a, b)| (a..b).contains(&i))
    }
}

impl fmt::Display for Piece {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Piece::Subforest { l, r } => write!(f, "[{l}..{r})"),
            Piece::Context { l, l2, r2, r } => write!(f, "<[{l}..{l2}); [{r2}..{r})>"),
        }
    }
}

/// Piece hierarchy: each piece collapsed to one node.
#[derive(Clone, Debug, Default)]
pub struct Hierarchy {
    pub parent: Vec<Option<usize>>,
    pub children: Vec<Vec<usize>>,
    pub roots: Vec<usize>,
}

impl Hierarchy {
    /// Nodes in post-order.
    pub fn post_order(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.parent.len());
        let mut stack: Vec<(usize, bool)> = self.roots.iter().rev().map(|&r| (r, false)).collect();
        while let Some((v, done)) = stack.pop() {
            if done {
                out.push(v);
            } else {
                stack.push((v, true));
                stack.extend(self.children[v].iter().rev().map(|&c| (c, false)));
            }
        }
        out
    }

    pub fn is_leaf(&self, v: usize) -> bool {
        self.children[v].is_empty()
    }
}

/// A set of disjoint pieces covering the whole forest.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PieceDecomposition {
    pub pieces: Vec<Piece>,
}

impl PieceDecomposition {
    pub fn len(&self) -> usize {
        self.pieces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    /// Builds the hierarchy, ordering siblings left to right.
    pub fn hierarchy(&self) -> Hierarchy {
        let n = self.pieces.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&i| self.pieces[i].start());
        let mut h = Hierarchy {
            parent: vec![None; n],
            children: vec![Vec::new(); n],
            roots: Vec::new(),
        };
        let mut open: Vec<usize> = Vec::new();
        for &i in &order {
            let s = self.pieces[i].start();
            while let Some(&top) = open.last() {
                let (_, r2) = self.pieces[top].hole().unwrap();
                if s >= r2 {
                    open.pop();
                } else {
                    break;
                }
            }
            match open.last() {
                Some(&p) => {
                    h.parent[i] = Some(p);
                    h.children[p].push(i);
                }
                None => h.roots.push(i),
            }
            if self.pieces[i].is_context() {
                open.push(i);
            }
        }
        h
    }
}

/// Why a piece set fails to be a decomposition.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum DecompositionError {
    #[error("piece {0} is malformed")]
    MalformedPiece(Piece),
    #[error("piece {piece} is longer than {t}")]
    TooLong { piece: Piece, t: usize },
    #[error("{count} pieces exceed the bound for |F| = {n}, t = {t}")]
    TooMany { count: usize, n: usize, t: usize },
    #[error("no piece starts at position {0}")]
    Uncovered(usize),
    #[error("piece {0} crosses its enclosing fragment")]
    Crossing(Piece),
    #[error("pieces overlap or are not nested")]
    NotNested,
}

/// `max(1, 6n/t - 1)`, compared exactly: `count * t <= max(t, 6n - t)`.
pub fn count_bound_holds(count: usize, n: usize, t: usize) -> bool {
    count * t <= t.max((6 * n).saturating_sub(t))
}

/// Checks the recursive decomposition structure only.
pub fn check_structure(d: &PieceDecomposition, f: &Forest) -> Result<(), DecompositionError> {
    let mut by_start: HashMap<usize, Piece> = HashMap::with_capacity(d.len());
    for &p in &d.pieces {
        if !p.is_valid_in(f) {
            return Err(DecompositionError::MalformedPiece(p));
        }
        if by_start.insert(p.start(), p).is_some() {
            return Err(DecompositionError::NotNested);
        }
    }
    let mut used = 0usize;
    let mut work = vec![(0usize, f.len())];
    while let Some((i, j)) = work.pop() {
        if i == j {
            continue;
        }
        let p = *by_start.get(&i).ok_or(DecompositionError::Uncovered(i))?;
        let m = p.end();
        if m > j {
            return Err(DecompositionError::Crossing(p));
        }
        used += 1;
        if m < j {
            work.push((m, j));
        }
        if let Some((l2, r2)) = p.hole() {
            work.push((l2, r2));
        }
    }
    if used != d.len() {
        return Err(DecompositionError::NotNested);
    }
    Ok(())
}

/// Full check: structure, piece lengths, and the piece-count bound.
pub fn check_decomposition(d: &PieceDecomposition, f: &Forest, t: usize) -> Result<(), DecompositionError> {
    check_structure(d, f)?;
    if let Some(&piece) = d.pieces.iter().find(|p| p.len() > t) {
        return Err(DecompositionError::TooLong { piece, t });
    }
    if !count_bound_holds(d.len(), f.len(), t) {
        return Err(DecompositionError::TooMany {
            count: d.len(),
            n: f.len(),
            t,
        });
    }
    Ok(())
}

pub fn verify_decomposition(d: &PieceDecomposition, f: &Forest, t: usize) -> bool {
    check_decomposition(d, f, t).is_ok()
}

/// Mutable hierarchy used by the merge passes.
#[derive(Clone, Debug)]
pub(crate) struct Tree<T> {
    pub items: Vec<T>,
    pub children: Vec<Vec<usize>>,
    pub roots: Vec<usize>,
}

impl<T> Tree<T> {
    pub fn post_order(&self) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack: Vec<(usize, bool)> = self.roots.iter().rev().map(|&r| (r, false)).collect();
        while let Some((v, done)) = stack.pop() {
            if done {
                out.push(v);
            } else {
                stack.push((v, true));
                stack.extend(self.children[v].iter().rev().map(|&c| (c, false)));
            }
        }
        out
    }

    /// Live nodes reachable from the roots, in pre-order.
    pub fn live(&self) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack: Vec<usize> = self.roots.iter().rev().copied().collect();
        while let Some(v) = stack.pop() {
            out.push(v);
            stack.extend(self.children[v].iter().rev().copied());
        }
        out
    }
}

/// Merge rules shared by decomposition and matching merges.
pub(crate) trait Mergeable: Sized {
    fn piece(&self) -> Piece;
    /// Union of two consecutive sibling leaves, if allowed.
    fn join_siblings(&self, right: &Self) -> Option<Self>;
    /// Union of a context with its leftmost or rightmost leaf child, if allowed.
    fn absorb_leaf(&self, child: &Self, left: bool) -> Option<Self>;
    /// Union of a context with its only child context, if allowed.
    fn absorb_context(&self, child: &Self) -> Option<Self>;
}

/// Merges adjacent pieces bottom-up until no allowed merge remains.
pub(crate) fn merge_to_fixpoint<T: Mergeable>(tree: &mut Tree<T>) {
    for v in tree.post_order() {
        let mut ch = std::mem::take(&mut tree.children[v]);
        loop {
            let mut changed = merge_leaf_runs(tree, &mut ch);
            if tree.items[v].piece().is_context() {
                if let Some(&c) = ch.first() {
                    if tree.children[c].is_empty() {
                        if let Some(u) = tree.items[v].absorb_leaf(&tree.items[c], true) {
                            tree.items[v] = u;
                            ch.remove(0);
                            changed = true;
                        }
                    }
                }
                if let Some(&c) = ch.last() {
                    if tree.children[c].is_empty() {
                        if let Some(u) = tree.items[v].absorb_leaf(&tree.items[c], false) {
                            tree.items[v] = u;
                            ch.pop();
                            changed = true;
                        }
                    }
                }
                if ch.len() == 1 && !tree.children[ch[0]].is_empty() {
                    let c = ch[0];
                    if let Some(u) = tree.items[v].absorb_context(&tree.items[c]) {
                        tree.items[v] = u;
                        ch = std::mem::take(&mut tree.children[c]);
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        tree.children[v] = ch;
    }
    let mut roots = std::mem::take(&mut tree.roots);
    merge_leaf_runs(tree, &mut roots);
    tree.roots = roots;
}

fn merge_leaf_runs<T: Mergeable>(tree: &mut Tree<T>, ch: &mut Vec<usize>) -> bool {
    let mut changed = false;
    let mut out: Vec<usize> = Vec::with_capacity(ch.len());
    for &c in ch.iter() {
        if let Some(&prev) = out.last() {
            if tree.children[prev].is_empty() && tree.children[c].is_empty() {
                if let Some(u) = tree.items[prev].join_siblings(&tree.items[c]) {
                    tree.items[prev] = u;
                    changed = true;
                    continue;
                }
            }
        }
        out.push(c);
    }
    *ch = out;
    changed
}

impl Mergeable for (Piece, usize) {
    fn piece(&self) -> Piece {
        self.0
    }

    fn join_siblings(&self, right: &Self) -> Option<Self> {
        let (a, b) = (self.0, right.0);
        if a.len() + b.len() > self.1 || a.is_context() || b.is_context() {
            return None;
        }
        Some((Piece::Subforest { l: a.start(), r: b.end() }, self.1))
    }

    fn absorb_leaf(&self, child: &Self, left: bool) -> Option<Self> {
        let Piece::Context { l, l2, r2, r } = self.0 else { return None };
        let c = child.0;
        if self.0.len() + c.len() > self.1 || c.is_context() {
            return None;
        }
        Some(if left {
            (Piece::context(l, c.end(), r2, r), self.1)
        } else {
            (Piece::context(l, l2, c.start(), r), self.1)
        })
    }

    fn absorb_context(&self, child: &Self) -> Option<Self> {
        let (Piece::Context { l, r, .. }, Piece::Context { l2, r2, .. }) = (self.0, child.0) else {
            return None;
        };
        if self.0.len() + child.0.len() > self.1 {
            return None;
        }
        Some((Piece::context(l, l2, r2, r), self.1))
    }
}

/// Decomposes `f` into pieces of length at most `t` (`t >= 2`).
///
/// Starts from one piece per node and merges adjacent pieces while the union fits.
pub fn decompose(f: &Forest, t: usize) -> PieceDecomposition {
    assert!(t >= 2, "piece length bound must be at least 2");
    let n = f.len();
    let mut id_of = vec![usize::MAX; n];
    let mut tree: Tree<(Piece, usize)> = Tree {
        items: Vec::with_capacity(n / 2),
        children: Vec::with_capacity(n / 2),
        roots: Vec::new(),
    };
    let mut stack: Vec<usize> = Vec::new();
    for o in 0..n {
        if !f.is_open(o) {
            stack.pop();
            continue;
        }
        let c = f.mate(o);
        let piece = if c == o + 1 {
            Piece::Subforest { l: o, r: o + 2 }
        } else {
            Piece::Context { l: o, l2: o + 1, r2: c, r: c + 1 }
        };
        let id = tree.items.len();
        id_of[o] = id;
        tree.items.push((piece, t));
        tree.children.push(Vec::new());
        match stack.last() {
            Some(&p) => tree.children[id_of[p]].push(id),
            None => tree.roots.push(id),
        }
        stack.push(o);
    }
    merge_to_fixpoint(&mut tree);
    let mut pieces: Vec<Piece> = tree.live().into_iter().map(|v| tree.items[v].0).collect();
    pieces.sort_by_key(|p| p.start());
    PieceDecomposition { pieces }
}
