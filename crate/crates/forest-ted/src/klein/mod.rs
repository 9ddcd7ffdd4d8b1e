//! Klein's dynamic program, its `2k`-banded variant, and threshold doubling.

pub mod catalog;
pub mod engine;

pub use catalog::{branch_left, enumerate_fragments, FragmentCatalog, Owner, OwnerRun};
pub use engine::{edit_script, trace_alignment, Band, Dep, DpStore, Plan, Rule, TraceError};

use crate::cost::{CostValue, Units, INF};
use crate::forest::Forest;
use crate::weights::CostModel;

/// Default ceiling on dp cells held in memory at once.
pub const DEFAULT_CELL_LIMIT: usize = 1 << 28;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("dp tables for |F| = {flen}, |G| = {glen} exceed the memory limit")]
pub struct TooLarge {
    pub flen: usize,
    pub glen: usize,
}

/// Runs Klein over the full catalog with the given band.
pub fn klein_store(
    f: &Forest,
    g: &Forest,
    model: &CostModel,
    band: Band,
    backptr: bool,
) -> Result<DpStore, TooLarge> {
    let cat = enumerate_fragments(f);
    let plan = Plan::from_catalog(f, &cat);
    engine::run(f, g, model, plan, band, &[], backptr, DEFAULT_CELL_LIMIT).ok_or(TooLarge {
        flen: f.len(),
        glen: g.len(),
    })
}

/// `ted(F, G)` with unrestricted G-fragments.
pub fn klein_dp(f: &Forest, g: &Forest, model: &CostModel) -> Result<CostValue, TooLarge> {
    let st = klein_store(f, g, model, Band::Full, false)?;
    Ok(model.to_value(st.result()))
}

/// `dp[0, |F|, 0, |G|]` of the banded recursion, in units (not capped).
pub fn bounded_units(f: &Forest, g: &Forest, model: &CostModel, k: usize) -> Units {
    if f.len().abs_diff(g.len()) > 2 * k {
        return INF;
    }
    klein_store(f, g, model, Band::K(k), false)
        .expect("banded tables fit")
        .result()
}

/// Caps a unit cost at the integer threshold `k`.
pub fn cap_units(model: &CostModel, u: Units, k: usize) -> CostValue {
    if u <= model.units_of(k as u64) {
        model.to_value(u)
    } else {
        CostValue::Inf
    }
}

/// `ted_{≤k}(F, G)`.
pub fn bounded_klein(f: &Forest, g: &Forest, model: &CostModel, k: usize) -> CostValue {
    assert!(k >= 1, "threshold must be positive");
    cap_units(model, bounded_units(f, g, model, k), k)
}

/// Outcome of threshold doubling.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Doubling {
    pub value: CostValue,
    /// Thresholds tried, in order.
    pub thresholds: Vec<usize>,
}

/// Exact `ted(F, G)` by trying `k = 1, 2, 4, ...` with [`bounded_klein`].
pub fn ted_doubling_medium(f: &Forest, g: &Forest, model: &CostModel) -> Doubling {
    let mut thresholds = Vec::new();
    if f == g {
        return Doubling {
            value: CostValue::ZERO,
            thresholds,
        };
    }
    let mut k = 1;
    loop {
        thresholds.push(k);
        let v = bounded_klein(f, g, model, k);
        if v.is_finite() {
            return Doubling {
                value: v,
                thresholds,
            };
        }
        k *= 2;
    }
}
