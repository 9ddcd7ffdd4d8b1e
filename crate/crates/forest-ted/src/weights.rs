//! Weight functions over labels plus the empty label, and the derived half-cost
//! function on parentheses.

use num_integer::Integer;

use crate::cost::{CostValue, Units, INF};
use crate::forest::{Alphabet, Paren, Symbol};

/// A label or the empty label ε (`None`).
pub type Label = Option<Symbol>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WeightError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: duplicate entry for this pair")]
    Duplicate { line: usize },
    #[error("unknown symbol {0}")]
    UnknownSymbol(Symbol),
    #[error("weights are not normalized: {0}")]
    NotNormalized(String),
    #[error("cost denominator overflow")]
    Overflow,
}

fn idx(x: Label) -> usize {
    x.map_or(0, |s| s as usize + 1)
}

/// Dense weight table over (Σ ∪ {ε})².
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightTable {
    m: usize,
    w: Vec<CostValue>,
    default_unit: bool,
    quasimetric: bool,
}

impl WeightTable {
    /// Unit weights: 0 on the diagonal, 1 elsewhere.
    pub fn unit(m: usize) -> Self {
        let d = m + 1;
        let mut w = vec![CostValue::integer(1); d * d];
        for i in 0..d {
            w[i * d + i] = CostValue::ZERO;
        }
        WeightTable {
            m,
            w,
            default_unit: true,
            quasimetric: false,
        }
    }

    /// Number of symbols covered (ε excluded).
    pub fn symbols(&self) -> usize {
        self.m
    }

    /// Whether every entry still has its unit default.
    pub fn is_default_unit(&self) -> bool {
        self.default_unit
    }

    fn dim(&self) -> usize {
        self.m + 1
    }

    /// Weight `w(x, y)`; symbols beyond the table use the unit default.
    pub fn get(&self, x: Label, y: Label) -> CostValue {
        let (i, j) = (idx(x), idx(y));
        if i > self.m || j > self.m {
            return if x == y {
                CostValue::ZERO
            } else {
                CostValue::integer(1)
            };
        }
        self.w[i * self.dim() + j]
    }

    pub fn set(&mut self, x: Label, y: Label, c: CostValue) {
        let need = idx(x).max(idx(y));
        if need > self.m {
            self.resize(need);
        }
        let d = self.dim();
        self.w[idx(x) * d + idx(y)] = c;
        self.default_unit = false;
        self.quasimetric = false;
    }

    /// Grows the table to `m` symbols, filling new entries with unit defaults.
    pub fn resize(&mut self, m: usize) {
        if m <= self.m {
            return;
        }
        let mut t = WeightTable::unit(m);
        let (nd, od) = (t.dim(), self.dim());
        for i in 0..od {
            for j in 0..od {
                t.w[i * nd + j] = self.w[i * od + j];
            }
        }
        t.default_unit = self.default_unit;
        *self = t;
    }

    fn labels(&self) -> impl Iterator<Item = Label> {
        std::iter::once(None).chain((0..self.m as Symbol).map(Some))
    }

    /// Parses `x<TAB>y<TAB>cost` lines (`-` is ε). Blank lines and `#` comments are skipped.
    pub fn parse_tsv(text: &str, alpha: &mut Alphabet) -> Result<WeightTable, WeightError> {
        let mut entries = Vec::new();
        for (ln, line) in text.lines().enumerate() {
            let line_no = ln + 1;
            let t = line.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = t.split_whitespace().collect();
            if fields.len() != 3 {
                return Err(WeightError::Syntax {
                    line: line_no,
                    msg: format!("expected 3 fields, found {}", fields.len()),
                });
            }
            let mut lab = |s: &str| -> Result<Label, WeightError> {
                if s == "-" {
                    Ok(None)
                } else if s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                    Ok(Some(alpha.intern(s)))
                } else {
                    Err(WeightError::Syntax {
                        line: line_no,
                        msg: format!("bad label {s:?}"),
                    })
                }
            };
            let x = lab(fields[0])?;
            let y = lab(fields[1])?;
            let c: CostValue = fields[2].parse().map_err(|_| WeightError::Syntax {
                line: line_no,
                msg: format!("bad cost {:?}", fields[2]),
            })?;
            if !c.is_finite() {
                return Err(WeightError::Syntax {
                    line: line_no,
                    msg: "cost must be finite".into(),
                });
            }
            entries.push((line_no, x, y, c));
        }
        let mut t = WeightTable::unit(alpha.len());
        let mut seen = std::collections::HashSet::new();
        for (line, x, y, c) in entries {
            if !seen.insert((x, y)) {
                return Err(WeightError::Duplicate { line });
            }
            t.set(x, y, c);
        }
        Ok(t)
    }

    /// Pairs violating `w(a,a) = 0` or `w(a,b) ≥ 1`.
    pub fn check_normalized(&self) -> Vec<(Label, Label)> {
        let one = CostValue::integer(1);
        let mut out = Vec::new();
        for x in self.labels() {
            for y in self.labels() {
                let c = self.get(x, y);
                if (x == y && !c.is_zero()) || (x != y && c < one) {
                    out.push((x, y));
                }
            }
        }
        out
    }

    /// Triples `(x, y, z)` with `w(x,z) > w(x,y) + w(y,z)`.
    pub fn check_quasimetric(&self) -> Vec<(Label, Label, Label)> {
        let mut out = Vec::new();
        for x in self.labels() {
            for y in self.labels() {
                for z in self.labels() {
                    if self.get(x, z) > self.get(x, y) + self.get(y, z) {
                        out.push((x, y, z));
                    }
                }
            }
        }
        out
    }

    /// Verifies the triangle inequality and records the result.
    pub fn certify_quasimetric(&mut self) -> bool {
        self.quasimetric = self.check_quasimetric().is_empty();
        self.quasimetric
    }

    pub fn is_certified_quasimetric(&self) -> bool {
        self.quasimetric
    }

    /// All-pairs shortest paths over the complete graph with arc costs `w`.
    pub fn metric_closure(&self) -> WeightTable {
        let d = self.dim();
        let mut w = self.w.clone();
        for via in 0..d {
            for i in 0..d {
                let a = w[i * d + via];
                if !a.is_finite() {
                    continue;
                }
                for j in 0..d {
                    let cand = a + w[via * d + j];
                    if cand < w[i * d + j] {
                        w[i * d + j] = cand;
                    }
                }
            }
        }
        let mut t = WeightTable {
            m: self.m,
            w,
            default_unit: self.default_unit,
            quasimetric: true,
        };
        t.default_unit &= t.w == self.w;
        t
    }

    /// Number of entries that differ from `other` (same dimension assumed).
    pub fn diff_count(&self, other: &WeightTable) -> usize {
        self.w.iter().zip(&other.w).filter(|(a, b)| a != b).count()
    }

    /// Human-readable form of a label pair for diagnostics.
    pub fn describe(alpha: &Alphabet, x: Label) -> String {
        match x {
            None => "-".to_string(),
            Some(s) if (s as usize) < alpha.len() => alpha.name(s).to_string(),
            Some(s) => format!("#{s}"),
        }
    }
}

/// Weights scaled to integer units, with the half-cost function precomputed.
///
/// One unit is `1 / denom`; `denom` is twice the least common multiple of all
/// weight denominators, so every half-weight is an integer number of units.
#[derive(Clone, Debug)]
pub struct CostModel {
    m: usize,
    denom: u64,
    tilde: Vec<Units>,
}

impl CostModel {
    /// Builds the model for an alphabet of `m` symbols.
    pub fn new(table: &WeightTable, m: usize) -> Result<CostModel, WeightError> {
        let mut t = table.clone();
        t.resize(m);
        let mut l: u64 = 1;
        for c in &t.w {
            if let Some(r) = c.as_ratio() {
                l = l.lcm(r.denom());
                if l > (1 << 40) {
                    return Err(WeightError::Overflow);
                }
            }
        }
        let denom = 2 * l;
        let d = m + 1;
        let mut tilde = vec![0; d * d];
        for i in 0..d {
            for j in 0..d {
                let r = t.w[i * d + j].as_ratio().ok_or(WeightError::Overflow)?;
                // tilde = w / 2 = w * denom / 2 units = w * l units
                let u = (*r.numer() as u128) * (l / r.denom()) as u128;
                if u >= INF as u128 / (1 << 20) {
                    return Err(WeightError::Overflow);
                }
                tilde[i * d + j] = u as Units;
            }
        }
        Ok(CostModel { m, denom, tilde })
    }

    /// Unit-weight model.
    pub fn unit(m: usize) -> CostModel {
        CostModel::new(&WeightTable::unit(m), m).expect("unit weights")
    }

    pub fn symbols(&self) -> usize {
        self.m
    }

    pub fn denom(&self) -> u64 {
        self.denom
    }

    /// Units corresponding to the integer cost `k`.
    pub fn units_of(&self, k: u64) -> Units {
        k.checked_mul(self.denom).expect("threshold overflow")
    }

    pub fn to_value(&self, u: Units) -> CostValue {
        if u == INF {
            CostValue::Inf
        } else {
            CostValue::ratio(u, self.denom)
        }
    }

    /// Half-cost `w̃(p, q)` in units, for parentheses or ε.
    #[inline]
    pub fn tilde(&self, p: Option<Paren>, q: Option<Paren>) -> Units {
        let i = p.map_or(0, |p| p.label as usize + 1);
        let j = q.map_or(0, |q| q.label as usize + 1);
        self.tilde[i * (self.m + 1) + j]
    }

    #[inline]
    pub fn del(&self, p: Paren) -> Units {
        self.tilde(Some(p), None)
    }

    #[inline]
    pub fn ins(&self, q: Paren) -> Units {
        self.tilde(None, Some(q))
    }

    #[inline]
    pub fn sub(&self, p: Paren, q: Paren) -> Units {
        self.tilde(Some(p), Some(q))
    }

    /// Checked half-cost as an exact value.
    pub fn tilde_w(&self, p: Option<Paren>, q: Option<Paren>) -> Result<CostValue, WeightError> {
        for x in [p, q].into_iter().flatten() {
            if x.label as usize >= self.m {
                return Err(WeightError::UnknownSymbol(x.label));
            }
        }
        Ok(self.to_value(self.tilde(p, q)))
    }
}
