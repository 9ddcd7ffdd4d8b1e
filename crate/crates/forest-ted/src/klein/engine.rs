//! Iterative evaluation of Klein's recursion over a precomputed fragment plan,
//! with optional banding, free-block jumps, and back-pointers.

use std::collections::HashMap;

use crate::cost::{uadd, Units, INF};
use crate::forest::Forest;
use crate::freeopt::MinPlusMatrix;
use crate::oracle::{AlignmentPath, Step};
use crate::weights::CostModel;

use super::catalog::{branch_left, FragmentCatalog};

/// Reference to the dp row of an F-fragment.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Dep {
    /// The empty fragment `F[l..l)`.
    Empty(usize),
    /// A planned fragment, by index.
    Frag(u32),
}

/// How the cells of one fragment are filled.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rule {
    Left { del: Dep, mat: Option<(Dep, Dep)> },
    Right { del: Dep, mat: Option<(Dep, Dep)> },
    /// The fragment ends with block `block`; `pre` is `F[l..p_F)`.
    JumpRight { block: u32, pre: Dep },
    /// The fragment starts with block `block`; `post` is `F[q_F..r)`.
    JumpLeft { block: u32, post: Dep },
}

#[derive(Clone, Copy, Debug)]
pub struct PlanFrag {
    pub l: usize,
    pub r: usize,
    pub rule: Rule,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PlanError {
    #[error("fragment [{l}..{r}) is required but not planned")]
    MissingFragment { l: usize, r: usize },
    #[error("fragment [{l}..{r}) partially contains a free block")]
    PartialBlock { l: usize, r: usize },
}

/// Fragments in increasing length, each with a resolved rule.
#[derive(Clone, Debug, Default)]
pub struct Plan {
    frags: Vec<PlanFrag>,
    index: HashMap<(usize, usize), u32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    Klein,
    JumpRight(u32),
    JumpLeft(u32),
}

/// Span `[p..q)` of a free block in F.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BlockSpan {
    pub p: usize,
    pub q: usize,
}

impl Plan {
    pub fn len(&self) -> usize {
        self.frags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frags.is_empty()
    }

    pub fn frags(&self) -> &[PlanFrag] {
        &self.frags
    }

    pub fn position(&self, l: usize, r: usize) -> Option<u32> {
        self.index.get(&(l, r)).copied()
    }

    /// Number of fragments filled by a jump rule.
    pub fn jump_count(&self) -> usize {
        self.frags
            .iter()
            .filter(|p| matches!(p.rule, Rule::JumpLeft { .. } | Rule::JumpRight { .. }))
            .count()
    }

    fn build(f: &Forest, mut items: Vec<(usize, usize, Kind)>, blocks: &[BlockSpan]) -> Result<Plan, PlanError> {
        items.sort_by_key(|&(l, r, _)| (r - l, l));
        let index: HashMap<(usize, usize), u32> = items
            .iter()
            .enumerate()
            .map(|(i, &(l, r, _))| ((l, r), i as u32))
            .collect();
        let dep = |l: usize, r: usize| -> Result<Dep, PlanError> {
            if l == r {
                Ok(Dep::Empty(l))
            } else {
                index
                    .get(&(l, r))
                    .map(|&i| Dep::Frag(i))
                    .ok_or(PlanError::MissingFragment { l, r })
            }
        };
        let mut frags = Vec::with_capacity(items.len());
        for &(l, r, kind) in &items {
            let rule = match kind {
                Kind::Klein => klein_rule(f, l, r, &dep)?,
                Kind::JumpRight(b) => Rule::JumpRight {
                    block: b,
                    pre: dep(l, blocks[b as usize].p)?,
                },
                Kind::JumpLeft(b) => Rule::JumpLeft {
                    block: b,
                    post: dep(blocks[b as usize].q, r)?,
                },
            };
            frags.push(PlanFrag { l, r, rule });
        }
        Ok(Plan { frags, index })
    }

    /// Plan for plain Klein over the catalogued fragments.
    pub fn from_catalog(f: &Forest, cat: &FragmentCatalog) -> Plan {
        let items = cat.frags().iter().map(|&(l, r)| (l, r, Kind::Klein)).collect();
        Plan::build(f, items, &[]).expect("catalog is closed under the recursion")
    }

    /// Fragments reached by the recursion from `F` when fragments ending (resp. starting)
    /// with a block jump over it. Blocks must be disjoint.
    pub fn with_blocks(f: &Forest, blocks: &[BlockSpan]) -> Result<Plan, PlanError> {
        let n = f.len();
        let mut inside = vec![false; n + 1];
        let mut by_end = HashMap::new();
        let mut by_start = HashMap::new();
        for (i, b) in blocks.iter().enumerate() {
            for x in b.p + 1..b.q {
                inside[x] = true;
            }
            by_end.insert(b.q, i as u32);
            by_start.insert(b.p, i as u32);
        }
        let mut seen: HashMap<(usize, usize), Kind> = HashMap::new();
        let mut stack = Vec::new();
        if n > 0 {
            stack.push((0, n));
        }
        while let Some((l, r)) = stack.pop() {
            if l == r || seen.contains_key(&(l, r)) {
                continue;
            }
            if inside[l] || inside[r] {
                return Err(PlanError::PartialBlock { l, r });
            }
            let kind = match (by_end.get(&r), by_start.get(&l)) {
                (Some(&b), _) if blocks[b as usize].p >= l => {
                    stack.push((l, blocks[b as usize].p));
                    Kind::JumpRight(b)
                }
                (_, Some(&b)) if blocks[b as usize].q <= r => {
                    stack.push((blocks[b as usize].q, r));
                    Kind::JumpLeft(b)
                }
                _ => {
                    for (a, b) in klein_deps(f, l, r) {
                        stack.push((a, b));
                    }
                    Kind::Klein
                }
            };
            seen.insert((l, r), kind);
        }
        let items = seen.into_iter().map(|((l, r), k)| (l, r, k)).collect();
        Plan::build(f, items, blocks)
    }
}

/// F-fragments read by the Klein update of `F[l..r)`, assuming every match is possible.
pub fn klein_deps(f: &Forest, l: usize, r: usize) -> Vec<(usize, usize)> {
    if branch_left(f, l, r) {
        let mut v = vec![(l + 1, r)];
        if f.is_open(l) && f.mate(l) < r {
            let c = f.mate(l);
            v.push((l + 1, c));
            v.push((c + 1, r));
        }
        v
    } else {
        let mut v = vec![(l, r - 1)];
        if !f.is_open(r - 1) && f.mate(r - 1) >= l {
            let o = f.mate(r - 1);
            v.push((l, o));
            v.push((o + 1, r - 1));
        }
        v
    }
}

fn klein_rule(
    f: &Forest,
    l: usize,
    r: usize,
    dep: &impl Fn(usize, usize) -> Result<Dep, PlanError>,
) -> Result<Rule, PlanError> {
    if branch_left(f, l, r) {
        let mat = if f.is_open(l) && f.mate(l) < r {
            let c = f.mate(l);
            Some((dep(l + 1, c)?, dep(c + 1, r)?))
        } else {
            None
        };
        Ok(Rule::Left {
            del: dep(l + 1, r)?,
            mat,
        })
    } else {
        let mat = if !f.is_open(r - 1) && f.mate(r - 1) >= l {
            let o = f.mate(r - 1);
            Some((dep(l, o)?, dep(o + 1, r - 1)?))
        } else {
            None
        };
        Ok(Rule::Right {
            del: dep(l, r - 1)?,
            mat,
        })
    }
}

/// Which G-fragments are kept per F-fragment.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Band {
    /// `|lF - lG| ≤ 2k` and `|rF - rG| ≤ 2k`.
    K(usize),
    /// All G-fragments.
    Full,
}

/// A free block ready for jumping: spans in F and G, period length, and `M_R^e`.
#[derive(Clone, Copy, Debug)]
pub struct JumpBlock<'a> {
    pub p_f: usize,
    pub q_f: usize,
    pub p_g: usize,
    pub q_g: usize,
    pub period: usize,
    pub power: &'a MinPlusMatrix,
}

pub const TAG_BASE: u8 = 0;
pub const TAG_DEL: u8 = 1;
pub const TAG_INS: u8 = 2;
pub const TAG_MATCH: u8 = 3;

/// Dense dp tables, one square window per planned fragment.
pub struct DpStore {
    plan: Plan,
    band: Band,
    side: usize,
    cells: Vec<Units>,
    back: Option<Vec<u8>>,
    ins_pre: Vec<Units>,
    del_pre: Vec<Units>,
    flen: usize,
    glen: usize,
}

fn prefix(costs: impl Iterator<Item = Units>) -> Vec<Units> {
    let mut v = vec![0];
    for c in costs {
        v.push(uadd(*v.last().unwrap(), c));
    }
    v
}

/// Side length of each fragment's window.
pub fn window_side(band: Band, glen: usize) -> usize {
    match band {
        Band::K(k) => 4 * k + 1,
        Band::Full => glen + 1,
    }
}

impl DpStore {
    pub fn plan(&self) -> &Plan {
        &self.plan
    }

    pub fn band(&self) -> Band {
        self.band
    }

    pub fn has_back_pointers(&self) -> bool {
        self.back.is_some()
    }

    pub fn root(&self) -> Dep {
        if self.flen == 0 {
            Dep::Empty(0)
        } else {
            Dep::Frag(self.plan.position(0, self.flen).expect("root fragment planned"))
        }
    }

    /// `dp[0, |F|, 0, |G|]` in units.
    pub fn result(&self) -> Units {
        self.get(self.root(), 0, self.glen)
    }

    fn in_band(&self, a: usize, b: usize) -> bool {
        match self.band {
            Band::K(k) => a.abs_diff(b) <= 2 * k,
            Band::Full => true,
        }
    }

    #[inline]
    fn cell(&self, i: usize, lg: usize, rg: usize) -> Option<usize> {
        let pf = &self.plan.frags[i];
        let (ol, or) = match self.band {
            Band::K(k) => (pf.l as isize - 2 * k as isize, pf.r as isize - 2 * k as isize),
            Band::Full => (0, 0),
        };
        let a = lg as isize - ol;
        let b = rg as isize - or;
        let s = self.side as isize;
        if a < 0 || b < 0 || a >= s || b >= s {
            return None;
        }
        Some(i * self.side * self.side + a as usize * self.side + b as usize)
    }

    /// The value of `dp[dep, lg, rg]`; infinite outside the computed window.
    #[inline]
    pub fn get(&self, dep: Dep, lg: usize, rg: usize) -> Units {
        if lg > rg || rg > self.glen {
            return INF;
        }
        match dep {
            Dep::Empty(l) => {
                if self.in_band(l, lg) && self.in_band(l, rg) {
                    self.ins_pre[rg] - self.ins_pre[lg]
                } else {
                    INF
                }
            }
            Dep::Frag(i) => match self.cell(i as usize, lg, rg) {
                Some(c) => self.cells[c],
                None => INF,
            },
        }
    }

    /// The G-window `(lg, rg)` pairs computed for planned fragment `i`.
    pub fn window(&self, i: usize) -> Vec<(usize, usize)> {
        let pf = &self.plan.frags[i];
        let mut out = Vec::new();
        let (llo, lhi, rlo, rhi) = self.ranges(pf.l, pf.r);
        for lg in llo..=lhi {
            for rg in rlo.max(lg)..=rhi {
                out.push((lg, rg));
            }
        }
        out
    }

    fn ranges(&self, l: usize, r: usize) -> (usize, usize, usize, usize) {
        match self.band {
            Band::K(k) => (
                l.saturating_sub(2 * k),
                (l + 2 * k).min(self.glen),
                r.saturating_sub(2 * k),
                (r + 2 * k).min(self.glen),
            ),
            Band::Full => (0, self.glen, 0, self.glen),
        }
    }

    fn back_tag(&self, i: usize, lg: usize, rg: usize) -> u8 {
        let c = self.cell(i, lg, rg).expect("cell in window");
        self.back.as_ref().expect("back-pointers")[c]
    }
}

/// Fills every planned fragment in order. Returns `None` if the tables would exceed `cell_limit`.
pub fn run(
    f: &Forest,
    g: &Forest,
    model: &CostModel,
    plan: Plan,
    band: Band,
    jumps: &[JumpBlock<'_>],
    backptr: bool,
    cell_limit: usize,
) -> Option<DpStore> {
    let side = window_side(band, g.len());
    let total = plan.len().checked_mul(side)?.checked_mul(side)?;
    if total > cell_limit {
        return None;
    }
    let mut st = DpStore {
        band,
        side,
        cells: vec![INF; total],
        back: backptr.then(|| vec![TAG_BASE; total]),
        ins_pre: prefix(g.chars().iter().map(|&c| model.ins(c))),
        del_pre: prefix(f.chars().iter().map(|&c| model.del(c))),
        flen: f.len(),
        glen: g.len(),
        plan,
    };
    for i in 0..st.plan.len() {
        fill(&mut st, f, g, model, i, jumps);
    }
    Some(st)
}

fn fill(st: &mut DpStore, f: &Forest, g: &Forest, m: &CostModel, i: usize, jumps: &[JumpBlock<'_>]) {
    let PlanFrag { l, r, rule } = st.plan.frags[i];
    let me = Dep::Frag(i as u32);
    let (llo, lhi, rlo, rhi) = st.ranges(l, r);
    let del_all = st.del_pre[r] - st.del_pre[l];
    for lg in (llo..=lhi).rev() {
        for rg in rlo.max(lg)..=rhi {
            let (val, tag) = if lg == rg {
                (del_all, TAG_BASE)
            } else {
                match rule {
                    Rule::Left { del, mat } => {
                        let mut best = uadd(st.get(del, lg, rg), m.del(f.char_at(l)));
                        let mut tag = TAG_DEL;
                        let ins = uadd(st.get(me, lg + 1, rg), m.ins(g.char_at(lg)));
                        if ins < best {
                            best = ins;
                            tag = TAG_INS;
                        }
                        if let Some((m1, m2)) = mat {
                            let cg = g.mate(lg);
                            if g.is_open(lg) && cg < rg {
                                let cf = f.mate(l);
                                let c = uadd(
                                    uadd(m.sub(f.char_at(l), g.char_at(lg)), st.get(m1, lg + 1, cg)),
                                    uadd(m.sub(f.char_at(cf), g.char_at(cg)), st.get(m2, cg + 1, rg)),
                                );
                                if c < best {
                                    best = c;
                                    tag = TAG_MATCH;
                                }
                            }
                        }
                        (best, tag)
                    }
                    Rule::Right { del, mat } => {
                        let mut best = uadd(st.get(del, lg, rg), m.del(f.char_at(r - 1)));
                        let mut tag = TAG_DEL;
                        let ins = uadd(st.get(me, lg, rg - 1), m.ins(g.char_at(rg - 1)));
                        if ins < best {
                            best = ins;
                            tag = TAG_INS;
                        }
                        if let Some((m1, m2)) = mat {
                            let og = g.mate(rg - 1);
                            if !g.is_open(rg - 1) && og >= lg {
                                let of = f.mate(r - 1);
                                let c = uadd(
                                    uadd(st.get(m1, lg, og), m.sub(f.char_at(of), g.char_at(og))),
                                    uadd(
                                        st.get(m2, og + 1, rg - 1),
                                        m.sub(f.char_at(r - 1), g.char_at(rg - 1)),
                                    ),
                                );
                                if c < best {
                                    best = c;
                                    tag = TAG_MATCH;
                                }
                            }
                        }
                        (best, tag)
                    }
                    Rule::JumpRight { block, pre } => {
                        let b = &jumps[block as usize];
                        (jump_right_cell(st, b, pre, lg, rg), TAG_BASE)
                    }
                    Rule::JumpLeft { block, post } => {
                        let b = &jumps[block as usize];
                        (jump_left_cell(st, b, post, lg, rg), TAG_BASE)
                    }
                }
            };
            let c = st.cell(i, lg, rg).expect("loop stays in window");
            st.cells[c] = val;
            if let Some(bk) = st.back.as_mut() {
                bk[c] = tag;
            }
        }
    }
}

/// `min over p' of dp[lF, pF, lG, p'] + M^e[p' - pG, rG - qG]`.
fn jump_right_cell(st: &DpStore, b: &JumpBlock<'_>, pre: Dep, lg: usize, rg: usize) -> Units {
    let rl = b.period as isize;
    let col = rg as isize - b.q_g as isize + rl;
    if col < 0 || col > 2 * rl {
        return INF;
    }
    let lo = (b.p_f as isize - rl).max(lg as isize).max(0) as usize;
    let hi = (b.p_f + b.period).min(rg).min(st.glen);
    let mut best = INF;
    for pg in lo..=hi {
        let row = pg as isize - b.p_g as isize + rl;
        if row < 0 || row > 2 * rl {
            continue;
        }
        let d = st.get(pre, lg, pg);
        if d == INF {
            continue;
        }
        best = best.min(uadd(d, b.power.get(row as usize, col as usize)));
    }
    best
}

/// `min over q' of M^e[lG - pG, q' - qG] + dp[qF, rF, q', rG]`.
fn jump_left_cell(st: &DpStore, b: &JumpBlock<'_>, post: Dep, lg: usize, rg: usize) -> Units {
    let rl = b.period as isize;
    let row = lg as isize - b.p_g as isize + rl;
    if row < 0 || row > 2 * rl {
        return INF;
    }
    let lo = (b.q_f as isize - rl).max(lg as isize).max(0) as usize;
    let hi = (b.q_f + b.period).min(rg);
    let mut best = INF;
    for qg in lo..=hi {
        let col = qg as isize - b.q_g as isize + rl;
        if col < 0 || col > 2 * rl {
            continue;
        }
        let d = st.get(post, qg, rg);
        if d == INF {
            continue;
        }
        best = best.min(uadd(b.power.get(row as usize, col as usize), d));
    }
    best
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TraceError {
    #[error("no finite result to trace")]
    NoFiniteResult,
    #[error("dp tables were computed without back-pointers")]
    NoBackPointers,
    #[error("cell filled by a free-block jump cannot be traced")]
    JumpCell,
}

enum Task {
    Emit(Step),
    Solve(Dep, usize, usize),
}

/// Reconstructs an optimal alignment of `F` onto `G` from the back-pointers.
pub fn trace_alignment(st: &DpStore, f: &Forest, g: &Forest) -> Result<AlignmentPath, TraceError> {
    assert_eq!((st.flen, st.glen), (f.len(), g.len()), "store belongs to other forests");
    if st.result() == INF {
        return Err(TraceError::NoFiniteResult);
    }
    if !st.has_back_pointers() {
        return Err(TraceError::NoBackPointers);
    }
    let mut path = AlignmentPath::new((0, 0));
    let mut stack = vec![Task::Solve(st.root(), 0, g.len())];
    while let Some(t) = stack.pop() {
        let (dep, lg, rg) = match t {
            Task::Emit(s) => {
                path.steps.push(s);
                continue;
            }
            Task::Solve(d, lg, rg) => (d, lg, rg),
        };
        let i = match dep {
            Dep::Empty(_) => {
                path.steps.extend(std::iter::repeat_n(Step::Up, rg - lg));
                continue;
            }
            Dep::Frag(i) => i as usize,
        };
        let PlanFrag { l, r, rule } = st.plan.frags[i];
        if lg == rg {
            path.steps.extend(std::iter::repeat_n(Step::Right, r - l));
            continue;
        }
        let tag = st.back_tag(i, lg, rg);
        let me = Dep::Frag(i as u32);
        // tasks are pushed in reverse execution order
        let mut seq: Vec<Task> = match (rule, tag) {
            (Rule::Left { del, .. }, TAG_DEL) => vec![Task::Emit(Step::Right), Task::Solve(del, lg, rg)],
            (Rule::Left { .. }, TAG_INS) => vec![Task::Emit(Step::Up), Task::Solve(me, lg + 1, rg)],
            (Rule::Left { mat: Some((m1, m2)), .. }, TAG_MATCH) => {
                let cg = g.mate(lg);
                vec![
                    Task::Emit(Step::Diag),
                    Task::Solve(m1, lg + 1, cg),
                    Task::Emit(Step::Diag),
                    Task::Solve(m2, cg + 1, rg),
                ]
            }
            (Rule::Right { del, .. }, TAG_DEL) => vec![Task::Solve(del, lg, rg), Task::Emit(Step::Right)],
            (Rule::Right { .. }, TAG_INS) => vec![Task::Solve(me, lg, rg - 1), Task::Emit(Step::Up)],
            (Rule::Right { mat: Some((m1, m2)), .. }, TAG_MATCH) => {
                let og = g.mate(rg - 1);
                vec![
                    Task::Solve(m1, lg, og),
                    Task::Emit(Step::Diag),
                    Task::Solve(m2, og + 1, rg - 1),
                    Task::Emit(Step::Diag),
                ]
            }
            _ => return Err(TraceError::JumpCell),
        };
        seq.reverse();
        stack.extend(seq);
    }
    Ok(path)
}

/// Edit-script lines for a path; exact matches are omitted.
pub fn edit_script(path: &AlignmentPath, f: &Forest, g: &Forest) -> Vec<String> {
    let mut out = Vec::new();
    let (mut x, mut y) = path.start;
    for s in &path.steps {
        match s {
            Step::Right => {
                out.push(format!("del F@{x}"));
                x += 1;
            }
            Step::Up => {
                out.push(format!("ins G@{y}"));
                y += 1;
            }
            Step::Diag => {
                if f.char_at(x) != g.char_at(y) {
                    out.push(format!("sub F@{x} G@{y}"));
                }
                x += 1;
                y += 1;
            }
        }
    }
    out
}
