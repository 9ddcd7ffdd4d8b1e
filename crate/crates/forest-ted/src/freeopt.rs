//! Free blocks: period matrices, min-plus powers, and the banded DP that jumps
//! over repeated periods.

use std::collections::HashMap;
use std::rc::Rc;

use crate::cost::{uadd, CostValue, Units, INF};
use crate::forest::{Forest, Paren};
use crate::klein::engine::{self, BlockSpan, JumpBlock, Plan, PlanError};
use crate::klein::{self, cap_units, Band, DEFAULT_CELL_LIMIT};
use crate::weights::CostModel;

/// `F[p_f..q_f) = R^e`, paired with `G[p_g..q_g)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeBlock {
    pub p_f: usize,
    pub q_f: usize,
    pub p_g: usize,
    pub q_g: usize,
    pub period: Forest,
    pub e: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FreeOptError {
    #[error("free block {index} is invalid: {reason}")]
    InvalidFreeBlock { index: usize, reason: &'static str },
    #[error("free blocks {0} and {1} overlap")]
    OverlappingBlocks(usize, usize),
    #[error("matrix dimensions {0} and {1} differ")]
    DimensionMismatch(usize, usize),
    #[error(transparent)]
    Plan(#[from] PlanError),
}

fn repeats(chars: &[Paren], period: &[Paren]) -> bool {
    !period.is_empty()
        && chars.len().is_multiple_of(period.len())
        && chars.chunks(period.len()).all(|c| c == period)
}

/// Checks every free-pair condition for threshold `k`.
pub fn validate_block(f: &Forest, g: &Forest, k: usize, b: &FreeBlock) -> Result<(), &'static str> {
    let rl = b.period.len();
    if b.e == 0 {
        return Err("exponent must be positive");
    }
    if rl < 4 * k || rl >= 8 * k {
        return Err("period length outside [4k..8k)");
    }
    if b.q_f < b.p_f || b.q_g < b.p_g || b.q_f - b.p_f != b.e * rl || b.q_g - b.p_g != b.e * rl {
        return Err("block length differs from e*|R|");
    }
    if b.p_f.abs_diff(b.p_g) > 2 * k {
        return Err("offset between F and G exceeds 2k");
    }
    if b.p_f < rl || b.q_f + rl > f.len() || b.p_g < rl || b.q_g + rl > g.len() {
        return Err("no spare period around the block");
    }
    let r = b.period.chars();
    if !repeats(f.slice(b.p_f - rl, b.q_f + rl), r) {
        return Err("F does not repeat the period around the block");
    }
    if !repeats(g.slice(b.p_g - rl, b.q_g + rl), r) {
        return Err("G does not repeat the period around the block");
    }
    Ok(())
}

/// Validates all blocks and their pairwise disjointness in F.
pub fn validate_blocks(f: &Forest, g: &Forest, k: usize, blocks: &[FreeBlock]) -> Result<(), FreeOptError> {
    for (index, b) in blocks.iter().enumerate() {
        validate_block(f, g, k, b).map_err(|reason| FreeOptError::InvalidFreeBlock { index, reason })?;
    }
    let mut order: Vec<usize> = (0..blocks.len()).collect();
    order.sort_by_key(|&i| blocks[i].p_f);
    for w in order.windows(2) {
        if blocks[w[0]].q_f > blocks[w[1]].p_f {
            return Err(FreeOptError::OverlappingBlocks(w[0], w[1]));
        }
    }
    Ok(())
}

/// Square min-plus matrix over unit costs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinPlusMatrix {
    dim: usize,
    data: Vec<Units>,
}

impl MinPlusMatrix {
    pub fn filled(dim: usize, v: Units) -> Self {
        MinPlusMatrix {
            dim,
            data: vec![v; dim * dim],
        }
    }

    /// Zero diagonal, infinity elsewhere.
    pub fn identity(dim: usize) -> Self {
        let mut m = Self::filled(dim, INF);
        for i in 0..dim {
            m.set(i, i, 0);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Units {
        self.data[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Units) {
        self.data[i * self.dim + j] = v;
    }

    /// Entry at signed indices in `[-h..h]` for `dim = 2h + 1`.
    pub fn at(&self, i: isize, j: isize) -> Units {
        let h = (self.dim / 2) as isize;
        self.get((i + h) as usize, (j + h) as usize)
    }
}

/// `C[i][k] = min_j A[i][j] + B[j][k]`.
pub fn min_plus(a: &MinPlusMatrix, b: &MinPlusMatrix) -> Result<MinPlusMatrix, FreeOptError> {
    if a.dim != b.dim {
        return Err(FreeOptError::DimensionMismatch(a.dim, b.dim));
    }
    let d = a.dim;
    let mut c = MinPlusMatrix::filled(d, INF);
    for i in 0..d {
        let row = &mut c.data[i * d..(i + 1) * d];
        for j in 0..d {
            let x = a.data[i * d + j];
            if x == INF {
                continue;
            }
            let brow = &b.data[j * d..(j + 1) * d];
            for (out, &y) in row.iter_mut().zip(brow) {
                if y != INF {
                    let s = uadd(x, y);
                    if s < *out {
                        *out = s;
                    }
                }
            }
        }
    }
    Ok(c)
}

/// `M^e` under the min-plus product, by repeated squaring.
pub fn matrix_power(m: &MinPlusMatrix, e: usize) -> MinPlusMatrix {
    assert!(e >= 1, "exponent must be positive");
    let mut result: Option<MinPlusMatrix> = None;
    let mut base = m.clone();
    let mut e = e;
    loop {
        if e & 1 == 1 {
            result = Some(match result {
                None => base.clone(),
                Some(r) => min_plus(&r, &base).unwrap(),
            });
        }
        e >>= 1;
        if e == 0 {
            break;
        }
        base = min_plus(&base, &base).unwrap();
    }
    result.unwrap()
}

/// `M_R[i][j] = ted(R, R³[|R|+i .. 2|R|+j))` for `i, j ∈ [-|R|..|R|]`, infinite when the range is reversed.
pub fn build_period_matrix(r: &Forest, model: &CostModel) -> MinPlusMatrix {
    assert!(!r.is_empty(), "period must be nonempty");
    let rl = r.len();
    let cube: Vec<Paren> = r.chars().iter().copied().cycle().take(3 * rl).collect();
    let g = Forest::from_parens(cube).expect("power of a balanced string is balanced");
    let st = klein::klein_store(r, &g, model, Band::Full, false).expect("period tables fit");
    let root = st.root();
    let d = 2 * rl + 1;
    let mut m = MinPlusMatrix::filled(d, INF);
    for i in 0..d {
        for j in 0..d {
            let (lg, rg) = (i, rl + j);
            if lg <= rg {
                m.set(i, j, st.get(root, lg, rg));
            }
        }
    }
    m
}

/// Cache of `M_R` and `M_R^e`, keyed by the period's characters.
#[derive(Default)]
pub struct MatrixCache {
    base: HashMap<Vec<Paren>, Rc<MinPlusMatrix>>,
    powers: HashMap<(Vec<Paren>, usize), Rc<MinPlusMatrix>>,
}

impl MatrixCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn power(&mut self, r: &Forest, e: usize, model: &CostModel) -> Rc<MinPlusMatrix> {
        let key = (r.chars().to_vec(), e);
        if let Some(m) = self.powers.get(&key) {
            return m.clone();
        }
        let base = self
            .base
            .entry(key.0.clone())
            .or_insert_with(|| Rc::new(build_period_matrix(r, model)))
            .clone();
        let p = Rc::new(matrix_power(&base, e));
        self.powers.insert(key, p.clone());
        p
    }

    pub fn distinct_periods(&self) -> usize {
        self.base.len()
    }
}

/// Counters from one optimized run.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OptimizedStats {
    pub fragments: usize,
    pub jumps: usize,
    pub blocks: usize,
}

/// `dp[0, |F|, 0, |G|]` in units, uncapped.
pub fn optimized_units(
    f: &Forest,
    g: &Forest,
    model: &CostModel,
    k: usize,
    blocks: &[FreeBlock],
    cache: &mut MatrixCache,
) -> Result<(Units, OptimizedStats), FreeOptError> {
    assert!(k >= 1, "threshold must be positive");
    validate_blocks(f, g, k, blocks)?;
    if f.len().abs_diff(g.len()) > 2 * k {
        return Ok((INF, OptimizedStats::default()));
    }
    let spans: Vec<BlockSpan> = blocks.iter().map(|b| BlockSpan { p: b.p_f, q: b.q_f }).collect();
    let plan = Plan::with_blocks(f, &spans)?;
    let powers: Vec<Rc<MinPlusMatrix>> = blocks.iter().map(|b| cache.power(&b.period, b.e, model)).collect();
    let jumps: Vec<JumpBlock<'_>> = blocks
        .iter()
        .zip(&powers)
        .map(|(b, m)| JumpBlock {
            p_f: b.p_f,
            q_f: b.q_f,
            p_g: b.p_g,
            q_g: b.q_g,
            period: b.period.len(),
            power: m,
        })
        .collect();
    let stats = OptimizedStats {
        fragments: plan.len(),
        jumps: plan.jump_count(),
        blocks: blocks.len(),
    };
    let st = engine::run(f, g, model, plan, Band::K(k), &jumps, false, DEFAULT_CELL_LIMIT)
        .expect("banded tables fit");
    Ok((st.result(), stats))
}

/// `ted_{≤k}(F, G)` using the given free blocks.
pub fn optimized_ted(
    f: &Forest,
    g: &Forest,
    model: &CostModel,
    k: usize,
    blocks: &[FreeBlock],
) -> Result<CostValue, FreeOptError> {
    let (u, _) = optimized_units(f, g, model, k, blocks, &mut MatrixCache::new())?;
    Ok(cap_units(model, u, k))
}

/// Like [`optimized_ted`], but falls back to the plain banded DP when the blocks are rejected.
/// The rejection, if any, is returned alongside the value.
pub fn optimized_ted_or_fallback(
    f: &Forest,
    g: &Forest,
    model: &CostModel,
    k: usize,
    blocks: &[FreeBlock],
) -> (CostValue, Option<FreeOptError>) {
    match optimized_ted(f, g, model, k, blocks) {
        Ok(v) => (v, None),
        Err(e) => (klein::bounded_klein(f, g, model, k), Some(e)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forest::{parse_forest, Alphabet};
    use crate::oracle::Oracle;

    #[test]
    fn identity_and_infinity() {
        let mut a = MinPlusMatrix::filled(3, 5);
        a.set(0, 2, 1);
        assert_eq!(min_plus(&a, &MinPlusMatrix::identity(3)).unwrap(), a);
        let inf = MinPlusMatrix::filled(3, INF);
        assert_eq!(min_plus(&a, &inf).unwrap(), inf);
        assert!(min_plus(&a, &MinPlusMatrix::identity(2)).is_err());
    }

    #[test]
    fn powers_compose() {
        let mut m = MinPlusMatrix::filled(3, INF);
        m.set(0, 1, 1);
        m.set(1, 2, 2);
        m.set(2, 0, 3);
        m.set(1, 1, 4);
        assert_eq!(matrix_power(&m, 1), m);
        let m2 = matrix_power(&m, 2);
        assert_eq!(matrix_power(&m, 4), min_plus(&m2, &m2).unwrap());
        assert_eq!(matrix_power(&m, 5), min_plus(&matrix_power(&m, 3), &m2).unwrap());
    }

    #[test]
    fn period_matrix_matches_oracle() {
        let mut al = Alphabet::new();
        let r = parse_forest("(a)(b(a))", &mut al).unwrap();
        let model = CostModel::unit(al.len());
        let m = build_period_matrix(&r, &model);
        let rl = r.len() as isize;
        assert_eq!(m.at(0, 0), 0);
        let cube = Forest::from_parens(r.chars().repeat(3)).unwrap();
        let mut o = Oracle::new(&r, &cube, &model);
        for i in -rl..=rl {
            for j in -rl..=rl {
                let (lg, rg) = ((rl + i) as usize, (2 * rl + j) as usize);
                let want = if lg <= rg { o.get(0, r.len(), lg, rg) } else { INF };
                assert_eq!(m.at(i, j), want, "entry {i},{j}");
            }
        }
    }

    #[test]
    fn validator_rejects() {
        let mut al = Alphabet::new();
        let r = parse_forest("(a)(b)", &mut al).unwrap();
        let s: String = "(a)(b)".repeat(5);
        let f = parse_forest(&s, &mut al).unwrap();
        let good = FreeBlock {
            p_f: 4,
            q_f: 16,
            p_g: 4,
            q_g: 16,
            period: r.clone(),
            e: 3,
        };
        assert_eq!(validate_block(&f, &f, 1, &good), Ok(()));
        assert!(validate_block(&f, &f, 2, &good).is_err());
        let bad = FreeBlock { e: 2, ..good.clone() };
        assert!(validate_block(&f, &f, 1, &bad).is_err());
        let shifted = FreeBlock { p_f: 5, q_f: 17, ..good.clone() };
        assert!(validate_block(&f, &f, 1, &shifted).is_err());
        let twice = [good.clone(), good];
        assert!(matches!(
            validate_blocks(&f, &f, 1, &twice),
            Err(FreeOptError::OverlappingBlocks(..))
        ));
    }

    #[test]
    fn jumps_agree_with_banded_klein() {
        let mut al = Alphabet::new();
        let r = "(a)(b)";
        let fs = format!("(x(y)){}(z)", r.repeat(6));
        let gs = format!("(x(y)){}(z(w))", r.repeat(6));
        let f = parse_forest(&fs, &mut al).unwrap();
        let g = parse_forest(&gs, &mut al).unwrap();
        let model = CostModel::unit(al.len());
        let period = parse_forest(r, &mut al).unwrap();
        let blk = FreeBlock {
            p_f: 8,
            q_f: 24,
            p_g: 8,
            q_g: 24,
            period,
            e: 4,
        };
        for k in 1..=1 {
            let want = klein::bounded_klein(&f, &g, &model, k);
            assert_eq!(want, CostValue::integer(1));
            assert_eq!(optimized_ted(&f, &g, &model, k, std::slice::from_ref(&blk)).unwrap(), want);
            assert_eq!(optimized_ted(&f, &g, &model, k, &[]).unwrap(), want);
        }
    }
}
