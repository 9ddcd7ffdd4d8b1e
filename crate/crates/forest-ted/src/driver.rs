//! Algorithm selection and the threshold-doubling driver.

use std::fmt;
use std::str::FromStr;

use crate::cost::CostValue;
use crate::forest::{Alphabet, Forest};
use crate::freeopt::{optimized_ted, optimized_ted_or_fallback};
use crate::kernel::{kernelize, Kernel, TooFar};
use crate::klein::{bounded_klein, edit_script, klein_dp, klein_store, trace_alignment, Band, TooLarge};
use crate::oracle::{oracle_ted, oracle_ted_le};
use crate::weights::{CostModel, WeightError, WeightTable};

/// Largest `|F| + |G|` the oracle accepts.
pub const ORACLE_LIMIT: usize = 64;
/// Up to this `|F| + |G|`, `auto` answers with the oracle.
pub const AUTO_ORACLE_LIMIT: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Algo {
    Oracle,
    Klein,
    Bounded,
    Optimized,
    Kernel,
    #[default]
    Auto,
}

impl Algo {
    pub const ALL: [Algo; 6] = [
        Algo::Oracle,
        Algo::Klein,
        Algo::Bounded,
        Algo::Optimized,
        Algo::Kernel,
        Algo::Auto,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algo::Oracle => "oracle",
            Algo::Klein => "klein",
            Algo::Bounded => "bounded",
            Algo::Optimized => "optimized",
            Algo::Kernel => "kernel",
            Algo::Auto => "auto",
        }
    }
}

impl fmt::Display for Algo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algo {
    type Err = DriverError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Algo::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| DriverError::UnknownAlgo(s.to_string()))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RunConfig {
    pub algo: Algo,
    pub k: Option<usize>,
    pub emit_alignment: bool,
    pub debug_kernel: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DriverError {
    #[error("unknown algorithm {0:?}")]
    UnknownAlgo(String),
    #[error("threshold must be at least 1")]
    ZeroThreshold,
    #[error("algorithm {0} requires -k")]
    MissingThreshold(Algo),
    #[error("--emit-alignment is only supported with --algo bounded")]
    AlignmentUnsupported,
    #[error("--debug-kernel is only supported with --algo kernel")]
    DebugUnsupported,
    #[error("oracle refuses |F| + |G| = {0} > {ORACLE_LIMIT}")]
    OracleTooLarge(usize),
    #[error(transparent)]
    Weights(#[from] WeightError),
    #[error(transparent)]
    TooLarge(#[from] TooLarge),
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), DriverError> {
        if self.k == Some(0) {
            return Err(DriverError::ZeroThreshold);
        }
        if self.k.is_none() && matches!(self.algo, Algo::Bounded | Algo::Optimized | Algo::Kernel) {
            return Err(DriverError::MissingThreshold(self.algo));
        }
        if self.emit_alignment && self.algo != Algo::Bounded {
            return Err(DriverError::AlignmentUnsupported);
        }
        if self.debug_kernel && self.algo != Algo::Kernel {
            return Err(DriverError::DebugUnsupported);
        }
        Ok(())
    }
}

/// A checked cost model, plus whether the metric closure changed the weights.
#[derive(Clone, Debug)]
pub struct PreparedWeights {
    pub model: CostModel,
    pub closure_changed: usize,
}

/// Checks normalization, replaces `w` by its metric closure, and builds the model.
pub fn prepare_weights(table: &WeightTable, alpha: &Alphabet) -> Result<PreparedWeights, WeightError> {
    let mut t = table.clone();
    t.resize(alpha.len());
    if let Some(&(x, y)) = t.check_normalized().first() {
        return Err(WeightError::NotNormalized(format!(
            "w({}, {}) = {}",
            WeightTable::describe(alpha, x),
            WeightTable::describe(alpha, y),
            t.get(x, y)
        )));
    }
    let closed = t.metric_closure();
    let closure_changed = closed.diff_count(&t);
    let model = CostModel::new(&closed, alpha.len())?;
    Ok(PreparedWeights { model, closure_changed })
}

/// `ted_{<=k}` through the kernel and the free-block DP.
///
/// `model` must come from a quasimetric table.
pub fn ted_bounded(f: &Forest, g: &Forest, model: &CostModel, k: usize) -> CostValue {
    ted_bounded_kernel(f, g, model, k).0
}

/// Like [`ted_bounded`], also returning the kernel when one was built.
pub fn ted_bounded_kernel(f: &Forest, g: &Forest, model: &CostModel, k: usize) -> (CostValue, Option<Kernel>) {
    assert!(k >= 1, "threshold must be positive");
    match kernelize(f, g, k, 0) {
        Ok(ker) => {
            let (v, _) = optimized_ted_or_fallback(&ker.f, &ker.g, model, k, &ker.blocks);
            (v, Some(ker))
        }
        Err(TooFar::LengthGap { .. } | TooFar::MatchingCost { .. }) => (CostValue::Inf, None),
    }
}

/// `d_0 = ceil((n / log2 n)^(1/6))`, and 1 for `n <= 2`.
pub fn first_threshold(n: usize) -> usize {
    if n <= 2 {
        return 1;
    }
    let x = n as f64 / (n as f64).log2();
    let mut d = x.powf(1.0 / 6.0).ceil() as usize;
    // fix float rounding at exact sixth powers
    while d > 1 && ((d - 1) as f64).powi(6) >= x {
        d -= 1;
    }
    while (d as f64).powi(6) < x {
        d += 1;
    }
    d.max(1)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AutoRun {
    pub value: CostValue,
    /// Thresholds tried, in order; empty when `F = G`.
    pub thresholds: Vec<usize>,
}

/// Exact `ted(F, G)` over the thresholds `d_i = 2^i d_0`.
pub fn ted_auto(f: &Forest, g: &Forest, model: &CostModel) -> AutoRun {
    let mut thresholds = Vec::new();
    if f == g {
        return AutoRun {
            value: CostValue::ZERO,
            thresholds,
        };
    }
    let n = f.len() + g.len();
    if n <= AUTO_ORACLE_LIMIT {
        return AutoRun {
            value: oracle_ted(f, g, model),
            thresholds,
        };
    }
    let mut d = first_threshold(n);
    loop {
        thresholds.push(d);
        let v = ted_bounded(f, g, model, d);
        if v.is_finite() {
            return AutoRun { value: v, thresholds };
        }
        d *= 2;
    }
}

/// Everything one invocation prints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub value: CostValue,
    pub script: Option<Vec<String>>,
    pub dump: Option<String>,
}

/// Runs the configured algorithm.
pub fn run(f: &Forest, g: &Forest, model: &CostModel, cfg: &RunConfig) -> Result<Outcome, DriverError> {
    cfg.validate()?;
    let mut out = Outcome {
        value: CostValue::Inf,
        script: None,
        dump: None,
    };
    let n = f.len() + g.len();
    out.value = match (cfg.algo, cfg.k) {
        (Algo::Oracle, _) if n > ORACLE_LIMIT => return Err(DriverError::OracleTooLarge(n)),
        (Algo::Oracle, None) => oracle_ted(f, g, model),
        (Algo::Oracle, Some(k)) => oracle_ted_le(f, g, model, k as u64),
        (Algo::Klein, k) => {
            let v = klein_dp(f, g, model)?;
            k.map_or(v, |k| v.cap(k as u64))
        }
        (Algo::Bounded, Some(k)) => {
            if cfg.emit_alignment {
                let v = bounded_klein(f, g, model, k);
                if v.is_finite() {
                    let st = klein_store(f, g, model, Band::K(k), true)?;
                    let path = trace_alignment(&st, f, g).expect("finite result has a trace");
                    out.script = Some(edit_script(&path, f, g));
                }
                v
            } else {
                bounded_klein(f, g, model, k)
            }
        }
        (Algo::Optimized, Some(k)) => optimized_ted(f, g, model, k, &[]).expect("no blocks to reject"),
        (Algo::Kernel, Some(k)) => {
            let (v, ker) = ted_bounded_kernel(f, g, model, k);
            if cfg.debug_kernel {
                out.dump = Some(match ker {
                    Some(ker) => ker.dump(),
                    None => format!("kernel: {:?}\n", kernelize(f, g, k, 0).err()),
                });
            }
            v
        }
        (Algo::Auto, None) => ted_auto(f, g, model).value,
        (Algo::Auto, Some(k)) if n <= AUTO_ORACLE_LIMIT => oracle_ted_le(f, g, model, k as u64),
        (Algo::Auto, Some(k)) => ted_bounded(f, g, model, k),
        (a, None) => return Err(DriverError::MissingThreshold(a)),
    };
    Ok(out)
}
