//! Forests as balanced strings of labeled parentheses.
//!
//! A forest is stored as its Euler tour: one [`Paren`] per node boundary. The
//! structure keeps the mate of every position, the prefix paren excess with a
//! sparse table for constant-time balance queries, and polynomial fingerprints
//! for constant-time fragment comparison.

use std::collections::HashMap;
use std::fmt;

/// Interned label.
pub type Symbol = u32;

/// Label interner shared by all forests of one computation.
#[derive(Clone, Debug, Default)]
pub struct Alphabet {
    names: Vec<String>,
    index: HashMap<String, Symbol>,
}

impl Alphabet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn intern(&mut self, name: &str) -> Symbol {
        if let Some(&s) = self.index.get(name) {
            return s;
        }
        let s = self.names.len() as Symbol;
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), s);
        s
    }

    pub fn get(&self, name: &str) -> Option<Symbol> {
        self.index.get(name).copied()
    }

    pub fn name(&self, s: Symbol) -> &str {
        &self.names[s as usize]
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    /// Alphabet `a0, a1, ...` of the given size, handy for generated inputs.
    pub fn synthetic(size: usize) -> Self {
        let mut a = Alphabet::new();
        for i in 0..size {
            a.intern(&format!("a{i}"));
        }
        a
    }
}

/// One parenthesis of the Euler tour.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct Paren {
    pub open: bool,
    pub label: Symbol,
}

impl Paren {
    pub fn open(label: Symbol) -> Self {
        Paren { open: true, label }
    }

    pub fn close(label: Symbol) -> Self {
        Paren { open: false, label }
    }

    fn code(self) -> u64 {
        2 * self.label as u64 + self.open as u64 + 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ForestError {
    #[error("unbalanced input at position {index}: {reason}")]
    UnbalancedInput { index: usize, reason: &'static str },
    #[error("malformed token {found:?} at offset {offset}")]
    MalformedToken { offset: usize, found: char },
    #[error("label mismatch between positions {open} and {close}")]
    LabelMismatch { open: usize, close: usize },
    #[error("position {index} out of bounds for length {len}")]
    OutOfBounds { index: usize, len: usize },
}

/// A node, identified by the positions of its parentheses.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct NodeRef {
    pub o: usize,
    pub c: usize,
}

impl NodeRef {
    pub fn size(&self) -> usize {
        self.c - self.o + 1
    }
}

/// Relation of a node to a fragment `[l..r)`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum NodeClass {
    Contained,
    Enters,
    Exits,
    Outside,
}

pub fn classify_node(u: NodeRef, l: usize, r: usize) -> NodeClass {
    if l <= u.o && u.c < r {
        NodeClass::Contained
    } else if u.o < l && l <= u.c && u.c < r {
        NodeClass::Enters
    } else if l <= u.o && u.o < r && r <= u.c {
        NodeClass::Exits
    } else {
        NodeClass::Outside
    }
}

const MOD: u64 = (1 << 61) - 1;
const BASE: u64 = 0x1f3a_9c4e_77b5_d2d1 % MOD;

#[inline]
fn mulmod(a: u64, b: u64) -> u64 {
    let p = a as u128 * b as u128;
    let lo = (p as u64) & MOD;
    let hi = (p >> 61) as u64;
    let s = lo + hi;
    if s >= MOD {
        s - MOD
    } else {
        s
    }
}

#[derive(Clone, Debug)]
struct SparseMin {
    levels: Vec<Vec<i32>>,
}

impl SparseMin {
    fn new(v: &[i32]) -> Self {
        let mut levels = vec![v.to_vec()];
        let mut w = 1;
        while 2 * w <= v.len() {
            let prev = levels.last().unwrap();
            let next: Vec<i32> = (0..=v.len() - 2 * w)
                .map(|i| prev[i].min(prev[i + w]))
                .collect();
            levels.push(next);
            w *= 2;
        }
        SparseMin { levels }
    }

    /// Minimum over the closed range `[a..=b]`.
    fn min(&self, a: usize, b: usize) -> i32 {
        let len = b - a + 1;
        let j = usize::BITS as usize - 1 - len.leading_zeros() as usize;
        self.levels[j][a].min(self.levels[j][b + 1 - (1 << j)])
    }
}

/// A forest with navigation and fragment-query support.
#[derive(Clone)]
pub struct Forest {
    chars: Vec<Paren>,
    mate: Vec<u32>,
    excess: Vec<i32>,
    rmq: SparseMin,
    hash: Vec<u64>,
    pow: Vec<u64>,
}

impl PartialEq for Forest {
    fn eq(&self, other: &Self) -> bool {
        self.chars == other.chars
    }
}

impl Eq for Forest {}

impl fmt::Debug for Forest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("Forest(")?;
        for p in &self.chars {
            if p.open {
                write!(f, "({}", p.label)?;
            } else {
                f.write_str(")")?;
            }
        }
        f.write_str(")")
    }
}

impl Forest {
    pub fn empty() -> Self {
        Forest::from_parens(Vec::new()).unwrap()
    }

    /// Builds a forest from a parenthesis sequence, checking balance and labels.
    pub fn from_parens(chars: Vec<Paren>) -> Result<Self, ForestError> {
        let n = chars.len();
        let mut mate = vec![0u32; n];
        let mut stack: Vec<usize> = Vec::new();
        for (i, p) in chars.iter().enumerate() {
            if p.open {
                stack.push(i);
            } else {
                let o = stack.pop().ok_or(ForestError::UnbalancedInput {
                    index: i,
                    reason: "closing parenthesis without an open node",
                })?;
                if chars[o].label != p.label {
                    return Err(ForestError::LabelMismatch { open: o, close: i });
                }
                mate[o] = i as u32;
                mate[i] = o as u32;
            }
        }
        if let Some(&o) = stack.last() {
            return Err(ForestError::UnbalancedInput {
                index: o,
                reason: "node is never closed",
            });
        }
        let mut excess = Vec::with_capacity(n + 1);
        excess.push(0i32);
        let mut hash = Vec::with_capacity(n + 1);
        hash.push(0u64);
        let mut pow = Vec::with_capacity(n + 1);
        pow.push(1u64);
        for p in &chars {
            excess.push(excess.last().unwrap() + if p.open { 1 } else { -1 });
            let h = mulmod(*hash.last().unwrap(), BASE) + p.code();
            hash.push(if h >= MOD { h - MOD } else { h });
            pow.push(mulmod(*pow.last().unwrap(), BASE));
        }
        let rmq = SparseMin::new(&excess);
        Ok(Forest {
            chars,
            mate,
            excess,
            rmq,
            hash,
            pow,
        })
    }

    pub fn len(&self) -> usize {
        self.chars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chars.is_empty()
    }

    pub fn chars(&self) -> &[Paren] {
        &self.chars
    }

    pub fn char_at(&self, i: usize) -> Paren {
        self.chars[i]
    }

    pub fn mate(&self, i: usize) -> usize {
        self.mate[i] as usize
    }

    pub fn is_open(&self, i: usize) -> bool {
        self.chars[i].open
    }

    pub fn label(&self, i: usize) -> Symbol {
        self.chars[i].label
    }

    pub fn slice(&self, l: usize, r: usize) -> &[Paren] {
        &self.chars[l..r]
    }

    /// Prefix paren excess: opens minus closes among the first `i` characters.
    pub fn excess(&self, i: usize) -> i32 {
        self.excess[i]
    }

    /// The node whose open or close parenthesis is at position `i`.
    pub fn node_at(&self, i: usize) -> Result<NodeRef, ForestError> {
        if i >= self.len() {
            return Err(ForestError::OutOfBounds {
                index: i,
                len: self.len(),
            });
        }
        let j = self.mate(i);
        Ok(NodeRef {
            o: i.min(j),
            c: i.max(j),
        })
    }

    /// Same as [`node_at`](Self::node_at) for positions known to be in range.
    #[inline]
    pub fn node(&self, i: usize) -> NodeRef {
        let j = self.mate[i] as usize;
        if i < j {
            NodeRef { o: i, c: j }
        } else {
            NodeRef { o: j, c: i }
        }
    }

    /// Whether `F[l..r)` is balanced. Constant time.
    pub fn is_balanced(&self, l: usize, r: usize) -> bool {
        assert!(l <= r && r <= self.len(), "fragment out of range");
        if l == r {
            return true;
        }
        self.excess[l] == self.excess[r] && self.rmq.min(l, r) >= self.excess[l]
    }

    /// Subforest induced by `F[l..r)`: keeps exactly the contained nodes.
    pub fn induced_subforest(&self, l: usize, r: usize) -> Forest {
        let chars = (l..r)
            .filter(|&i| (l..r).contains(&self.mate(i)))
            .map(|i| self.chars[i])
            .collect();
        Forest::from_parens(chars).expect("induced subforest is balanced")
    }

    /// Fingerprint of `F[l..r)`.
    pub fn fingerprint(&self, l: usize, r: usize) -> u64 {
        let sub = mulmod(self.hash[l], self.pow[r - l]);
        let h = self.hash[r] + MOD - sub;
        if h >= MOD {
            h - MOD
        } else {
            h
        }
    }

    /// Serializes the forest in the text grammar, without whitespace.
    pub fn to_text(&self, alpha: &Alphabet) -> String {
        let mut s = String::with_capacity(self.len() * 2);
        for p in &self.chars {
            if p.open {
                s.push('(');
                s.push_str(alpha.name(p.label));
            } else {
                s.push(')');
            }
        }
        s
    }

    /// Parses a forest, interning labels into `alpha`.
    pub fn parse(text: &str, alpha: &mut Alphabet) -> Result<Forest, ForestError> {
        parse_forest(text, alpha)
    }
}

/// Whether two fragments (possibly of different forests) are equal, by fingerprint.
pub fn fragment_equal(a: &Forest, al: usize, ar: usize, b: &Forest, bl: usize, br: usize) -> bool {
    ar - al == br - bl && a.fingerprint(al, ar) == b.fingerprint(bl, br)
}

/// Character-by-character fragment comparison.
pub fn fragment_equal_exact(
    a: &Forest,
    al: usize,
    ar: usize,
    b: &Forest,
    bl: usize,
    br: usize,
) -> bool {
    a.slice(al, ar) == b.slice(bl, br)
}

fn is_label_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

/// Parses `forest := node*; node := '(' label forest ')'`, whitespace ignored.
pub fn parse_forest(text: &str, alpha: &mut Alphabet) -> Result<Forest, ForestError> {
    let mut chars = Vec::new();
    let mut stack: Vec<Symbol> = Vec::new();
    let mut it = text.char_indices().peekable();
    while let Some((off, c)) = it.next() {
        match c {
            c if c.is_whitespace() => {}
            '(' => {
                while it.peek().is_some_and(|&(_, c)| c.is_whitespace()) {
                    it.next();
                }
                let mut label = String::new();
                while let Some(&(_, c)) = it.peek() {
                    if !is_label_char(c) {
                        break;
                    }
                    label.push(c);
                    it.next();
                }
                let s = alpha.intern(&label);
                stack.push(s);
                chars.push(Paren::open(s));
            }
            ')' => {
                let s = stack.pop().ok_or(ForestError::UnbalancedInput {
                    index: chars.len(),
                    reason: "closing parenthesis without an open node",
                })?;
                chars.push(Paren::close(s));
            }
            other => {
                return Err(ForestError::MalformedToken {
                    offset: off,
                    found: other,
                })
            }
        }
    }
    if !stack.is_empty() {
        return Err(ForestError::UnbalancedInput {
            index: chars.len(),
            reason: "input ends inside an open node",
        });
    }
    Forest::from_parens(chars)
}

/// Subtree sizes and heavy children, including the virtual root.
#[derive(Clone, Debug)]
pub struct HeavyInfo {
    /// Heavy child (open position) of the node opening at each position.
    heavy: Vec<Option<u32>>,
    /// Parent (open position) of the node opening at each position.
    parent: Vec<Option<u32>>,
    /// Heavy root, the heavy child of the virtual root.
    pub heavy_root: Option<usize>,
    /// Number of light nodes on the path from a root down to the node (inclusive).
    light_depth: Vec<u32>,
}

impl HeavyInfo {
    pub fn new(f: &Forest) -> Self {
        let n = f.len();
        let mut heavy = vec![None; n];
        let mut parent = vec![None; n];
        // best[level]: heavy candidate among children seen so far
        let mut stack: Vec<(usize, Option<(usize, usize)>)> = Vec::new();
        let mut root_best: Option<(usize, usize)> = None;
        for i in 0..n {
            if f.is_open(i) {
                parent[i] = stack.last().map(|&(o, _)| o as u32);
                stack.push((i, None));
            } else {
                let (o, best) = stack.pop().unwrap();
                heavy[o] = best.map(|(h, _)| h as u32);
                let size = i - o + 1;
                let slot = match stack.last_mut() {
                    Some((_, b)) => b,
                    None => &mut root_best,
                };
                if slot.is_none_or(|(_, s)| size >= s) {
                    *slot = Some((o, size));
                }
            }
        }
        let heavy_root = root_best.map(|(h, _)| h);
        let mut light_depth = vec![0u32; n];
        for i in 0..n {
            if f.is_open(i) {
                let (base, is_heavy) = match parent[i] {
                    Some(p) => (
                        light_depth[p as usize],
                        heavy[p as usize] == Some(i as u32),
                    ),
                    None => (0, heavy_root == Some(i)),
                };
                light_depth[i] = base + (!is_heavy) as u32;
            }
        }
        HeavyInfo {
            heavy,
            parent,
            heavy_root,
            light_depth,
        }
    }

    /// Heavy child of the node opening at `o`; `None` for leaves.
    pub fn heavy_child(&self, o: usize) -> Option<usize> {
        self.heavy[o].map(|h| h as usize)
    }

    pub fn parent(&self, o: usize) -> Option<usize> {
        self.parent[o].map(|p| p as usize)
    }

    /// Whether the node opening at `o` is light (not the heavy child of its parent).
    pub fn is_light(&self, o: usize) -> bool {
        match self.parent(o) {
            Some(p) => self.heavy_child(p) != Some(o),
            None => self.heavy_root != Some(o),
        }
    }

    pub fn light_depth(&self, o: usize) -> usize {
        self.light_depth[o] as usize
    }
}
