//! Reference semantics: alignment paths, forest-alignment validity, and slow
//! exact computations of `ted`, `bted` and `t̃ed` on small inputs.

use crate::cost::{uadd, CostValue, Units, INF};
use crate::forest::Forest;
use crate::weights::CostModel;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum Step {
    /// `(x, y) -> (x+1, y)`: delete `X[x]`.
    Right,
    /// `(x, y) -> (x, y+1)`: insert `Y[y]`.
    Up,
    /// `(x, y) -> (x+1, y+1)`: align `X[x]` with `Y[y]`.
    Diag,
}

/// A monotone path in the alignment graph, in absolute coordinates.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct AlignmentPath {
    pub start: (usize, usize),
    pub steps: Vec<Step>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlignError {
    #[error("path from {start:?} ends at {end:?}, expected {expected:?}")]
    SpanMismatch {
        start: (usize, usize),
        end: (usize, usize),
        expected: (usize, usize),
    },
}

impl AlignmentPath {
    pub fn new(start: (usize, usize)) -> Self {
        AlignmentPath {
            start,
            steps: Vec::new(),
        }
    }

    /// Vertices visited, starting vertex included.
    pub fn vertices(&self) -> Vec<(usize, usize)> {
        let mut v = Vec::with_capacity(self.steps.len() + 1);
        let (mut x, mut y) = self.start;
        v.push((x, y));
        for s in &self.steps {
            match s {
                Step::Right => x += 1,
                Step::Up => y += 1,
                Step::Diag => {
                    x += 1;
                    y += 1
                }
            }
            v.push((x, y));
        }
        v
    }

    pub fn end(&self) -> (usize, usize) {
        *self.vertices().last().unwrap()
    }

    /// Aligned pairs `(x, y)`, one per diagonal step.
    pub fn aligned_pairs(&self) -> Vec<(usize, usize)> {
        let vs = self.vertices();
        self.steps
            .iter()
            .zip(&vs)
            .filter(|(s, _)| **s == Step::Diag)
            .map(|(_, &v)| v)
            .collect()
    }
}

/// Maximum `|x - y|` over the path's vertices.
pub fn width(path: &AlignmentPath) -> usize {
    path.vertices()
        .into_iter()
        .map(|(x, y)| x.abs_diff(y))
        .max()
        .unwrap_or(0)
}

fn check_span(
    path: &AlignmentPath,
    fx: (usize, usize),
    gy: (usize, usize),
) -> Result<(), AlignError> {
    let end = path.end();
    if path.start != (fx.0, gy.0) || end != (fx.1, gy.1) {
        return Err(AlignError::SpanMismatch {
            start: path.start,
            end,
            expected: (fx.1, gy.1),
        });
    }
    Ok(())
}

/// Sum of edge costs along `path`, which must run from `(fx.0, gy.0)` to `(fx.1, gy.1)`.
pub fn path_cost(
    f: &Forest,
    fx: (usize, usize),
    g: &Forest,
    gy: (usize, usize),
    model: &CostModel,
    path: &AlignmentPath,
) -> Result<Units, AlignError> {
    check_span(path, fx, gy)?;
    let (mut x, mut y) = path.start;
    let mut total = 0;
    for s in &path.steps {
        let c = match s {
            Step::Right => {
                x += 1;
                model.del(f.char_at(x - 1))
            }
            Step::Up => {
                y += 1;
                model.ins(g.char_at(y - 1))
            }
            Step::Diag => {
                x += 1;
                y += 1;
                model.sub(f.char_at(x - 1), g.char_at(y - 1))
            }
        };
        total = uadd(total, c);
    }
    Ok(total)
}

/// Whether `path` satisfies the mate-consistency condition within the given fragments.
pub fn is_forest_alignment(
    f: &Forest,
    fx: (usize, usize),
    g: &Forest,
    gy: (usize, usize),
    path: &AlignmentPath,
) -> bool {
    if check_span(path, fx, gy).is_err() {
        return false;
    }
    let pairs = path.aligned_pairs();
    let set: std::collections::HashSet<(usize, usize)> = pairs.iter().copied().collect();
    pairs.iter().all(|&(x, y)| {
        let (mx, my) = (f.mate(x), g.mate(y));
        (fx.0..fx.1).contains(&mx) && (gy.0..gy.1).contains(&my) && set.contains(&(mx, my))
    })
}

/// Memoized left-to-right DP over all fragment pairs of `(F, G)`.
///
/// With a band `2k`, states with `|lF - lG| > 2k` or `|rF - rG| > 2k` are infinite,
/// which yields exactly the minimum over forest alignments of width at most `2k`.
pub struct Oracle<'a> {
    f: &'a Forest,
    g: &'a Forest,
    model: &'a CostModel,
    band: Option<usize>,
    memo: Vec<Units>,
    n1: usize,
    m1: usize,
}

const UNSET: Units = INF - 1;

impl<'a> Oracle<'a> {
    pub fn new(f: &'a Forest, g: &'a Forest, model: &'a CostModel) -> Self {
        Self::build(f, g, model, None)
    }

    pub fn bounded(f: &'a Forest, g: &'a Forest, model: &'a CostModel, k: usize) -> Self {
        Self::build(f, g, model, Some(2 * k))
    }

    fn build(f: &'a Forest, g: &'a Forest, model: &'a CostModel, band: Option<usize>) -> Self {
        let (n1, m1) = (f.len() + 1, g.len() + 1);
        Oracle {
            f,
            g,
            model,
            band,
            memo: vec![UNSET; n1 * n1 * m1 * m1],
            n1,
            m1,
        }
    }

    pub fn model(&self) -> &CostModel {
        self.model
    }

    /// Cost of `F[lf..rf)` against `G[lg..rg)`, in units.
    pub fn get(&mut self, lf: usize, rf: usize, lg: usize, rg: usize) -> Units {
        assert!(lf <= rf && rf < self.n1 && lg <= rg && rg < self.m1);
        self.solve(lf, rf, lg, rg)
    }

    /// Same as [`get`](Self::get) as an exact value.
    pub fn value(&mut self, lf: usize, rf: usize, lg: usize, rg: usize) -> CostValue {
        let u = self.get(lf, rf, lg, rg);
        self.model.to_value(u)
    }

    fn solve(&mut self, lf: usize, rf: usize, lg: usize, rg: usize) -> Units {
        if let Some(b) = self.band {
            if lf.abs_diff(lg) > b || rf.abs_diff(rg) > b {
                return INF;
            }
        }
        let key = ((lf * self.n1 + rf) * self.m1 + lg) * self.m1 + rg;
        if self.memo[key] != UNSET {
            return self.memo[key];
        }
        let (f, g, m) = (self.f, self.g, self.model);
        let res = if lf == rf {
            (lg..rg).fold(0, |a, j| uadd(a, m.ins(g.char_at(j))))
        } else if lg == rg {
            (lf..rf).fold(0, |a, i| uadd(a, m.del(f.char_at(i))))
        } else {
            let mut best = uadd(self.solve(lf + 1, rf, lg, rg), m.del(f.char_at(lf)));
            best = best.min(uadd(self.solve(lf, rf, lg + 1, rg), m.ins(g.char_at(lg))));
            let (cf, cg) = (f.mate(lf), g.mate(lg));
            if f.is_open(lf) && g.is_open(lg) && cf < rf && cg < rg {
                let inner = self.solve(lf + 1, cf, lg + 1, cg);
                let rest = self.solve(cf + 1, rf, cg + 1, rg);
                let c = uadd(
                    uadd(m.sub(f.char_at(lf), g.char_at(lg)), inner),
                    uadd(m.sub(f.char_at(cf), g.char_at(cg)), rest),
                );
                best = best.min(c);
            }
            best
        };
        self.memo[key] = res;
        res
    }
}

/// `ted(F, G)`.
pub fn oracle_ted(f: &Forest, g: &Forest, model: &CostModel) -> CostValue {
    Oracle::new(f, g, model).value(0, f.len(), 0, g.len())
}

/// `ted` restricted to forest alignments of width at most `2k`.
pub fn oracle_bted(f: &Forest, g: &Forest, model: &CostModel, k: usize) -> CostValue {
    Oracle::bounded(f, g, model, k).value(0, f.len(), 0, g.len())
}

/// `ted_{≤k}(F, G)`.
pub fn oracle_ted_le(f: &Forest, g: &Forest, model: &CostModel, k: u64) -> CostValue {
    oracle_ted(f, g, model).cap(k)
}

/// `t̃ed` of two fragments: `ted` minus the forced straddler half-costs.
pub fn oracle_tilde_ted(
    f: &Forest,
    fx: (usize, usize),
    g: &Forest,
    gy: (usize, usize),
    model: &CostModel,
) -> CostValue {
    let full = Oracle::new(f, g, model).get(fx.0, fx.1, gy.0, gy.1);
    let strad_f: Units = (fx.0..fx.1)
        .filter(|&i| !(fx.0..fx.1).contains(&f.mate(i)))
        .map(|i| model.del(f.char_at(i)))
        .sum();
    let strad_g: Units = (gy.0..gy.1)
        .filter(|&j| !(gy.0..gy.1).contains(&g.mate(j)))
        .map(|j| model.ins(g.char_at(j)))
        .sum();
    model.to_value(full - strad_f - strad_g)
}

/// Every path from `(fx.0, gy.0)` to `(fx.1, gy.1)`; intended for total length at most 10.
pub fn enumerate_paths(fx: (usize, usize), gy: (usize, usize)) -> Vec<AlignmentPath> {
    fn rec(
        x: usize,
        y: usize,
        end: (usize, usize),
        cur: &mut AlignmentPath,
        out: &mut Vec<AlignmentPath>,
    ) {
        if (x, y) == end {
            out.push(cur.clone());
            return;
        }
        for (s, nx, ny) in [
            (Step::Right, x + 1, y),
            (Step::Up, x, y + 1),
            (Step::Diag, x + 1, y + 1),
        ] {
            if nx <= end.0 && ny <= end.1 {
                cur.steps.push(s);
                rec(nx, ny, end, cur, out);
                cur.steps.pop();
            }
        }
    }
    let mut out = Vec::new();
    let mut cur = AlignmentPath::new((fx.0, gy.0));
    rec(fx.0, gy.0, (fx.1, gy.1), &mut cur, &mut out);
    out
}

/// Exhaustive minimum over forest alignments, optionally restricted to width `≤ 2k`.
pub fn brute_force_ted(
    f: &Forest,
    fx: (usize, usize),
    g: &Forest,
    gy: (usize, usize),
    model: &CostModel,
    k: Option<usize>,
) -> Units {
    enumerate_paths(fx, gy)
        .iter()
        .filter(|p| k.is_none_or(|k| width(p) <= 2 * k))
        .filter(|p| is_forest_alignment(f, fx, g, gy, p))
        .map(|p| path_cost(f, fx, g, gy, model, p).unwrap())
        .min()
        .unwrap_or(INF)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forest::{parse_forest, Alphabet};

    fn pair(a: &str, b: &str) -> (Forest, Forest, CostModel) {
        let mut al = Alphabet::new();
        let f = parse_forest(a, &mut al).unwrap();
        let g = parse_forest(b, &mut al).unwrap();
        let m = CostModel::unit(al.len());
        (f, g, m)
    }

    fn path(start: (usize, usize), s: &str) -> AlignmentPath {
        AlignmentPath {
            start,
            steps: s
                .chars()
                .map(|c| match c {
                    'r' => Step::Right,
                    'u' => Step::Up,
                    _ => Step::Diag,
                })
                .collect(),
        }
    }

    #[test]
    fn path_cost_examples() {
        let (f, g, m) = pair("(a)", "(a)");
        assert_eq!(path_cost(&f, (0, 2), &g, (0, 2), &m, &path((0, 0), "dd")), Ok(0));
        let (f, g, m) = pair("(a)", "");
        let p = path((0, 0), "rr");
        assert_eq!(m.to_value(path_cost(&f, (0, 2), &g, (0, 0), &m, &p).unwrap()), CostValue::integer(1));
        assert_eq!(width(&p), 2);
        let (f, g, m) = pair("(a)", "(b)");
        let p = path((0, 0), "dd");
        assert_eq!(m.to_value(path_cost(&f, (0, 2), &g, (0, 2), &m, &p).unwrap()), CostValue::integer(1));
        assert!(path_cost(&f, (0, 2), &g, (0, 2), &m, &path((0, 0), "d")).is_err());
    }

    #[test]
    fn alignment_validity_examples() {
        let (f, g, _) = pair("(a)", "(a)");
        assert!(is_forest_alignment(&f, (0, 2), &g, (0, 2), &path((0, 0), "dd")));
        assert!(!is_forest_alignment(&f, (0, 2), &g, (0, 2), &path((0, 0), "dru")));
        assert!(is_forest_alignment(&f, (0, 2), &g, (0, 2), &path((0, 0), "rruu")));
        assert_eq!(width(&path((0, 0), "drd")), 1);
    }

    #[test]
    fn oracle_examples() {
        let (f, g, m) = pair("(a(b))", "(a(b))");
        assert_eq!(oracle_ted(&f, &g, &m), CostValue::ZERO);
        let (f, g, m) = pair("", "(a)");
        assert_eq!(oracle_ted(&f, &g, &m), CostValue::integer(1));
        let (f, g, m) = pair("(a(b))", "(a)(b)");
        let bf = brute_force_ted(&f, (0, 4), &g, (0, 4), &m, None);
        assert_eq!(oracle_ted(&f, &g, &m), m.to_value(bf));
        assert_eq!(oracle_ted(&f, &g, &m), CostValue::integer(2));
        let (f, g, m) = pair("(a(b))", "(b)");
        assert_eq!(oracle_ted(&f, &g, &m), CostValue::integer(1));
    }

    #[test]
    fn bted_examples() {
        let (f, g, m) = pair("(a)(b)(c)", "(a)(b)(c)");
        assert_eq!(oracle_bted(&f, &g, &m, 1), CostValue::ZERO);
        let (f, g, m) = pair("(a)(b)(c)", "");
        assert_eq!(oracle_bted(&f, &g, &m, 1), CostValue::Inf);
        assert_eq!(oracle_bted(&f, &g, &m, 3), CostValue::integer(3));
    }

    #[test]
    fn tilde_examples() {
        let (f, g, m) = pair("(a(b))", "(b)");
        assert_eq!(oracle_tilde_ted(&f, (1, 4), &g, (0, 2), &m), CostValue::ZERO);
        let (f, g, m) = pair("(a)(b)", "(b)");
        assert_eq!(oracle_tilde_ted(&f, (0, 4), &g, (0, 2), &m), CostValue::integer(1));
    }
}
