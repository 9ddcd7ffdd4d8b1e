//! Exact non-negative costs with a saturating infinity.
//!
//! Two representations are used. [`CostValue`] is the public, self-describing
//! rational. Inside the dynamic programs every cost is an integer number of
//! *units*, where one unit is `1/denom` for the denominator chosen by the
//! [`CostModel`](crate::weights::CostModel) in use; [`INF`] is the saturating
//! infinity for units.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{CheckedAdd, Zero};

/// Integer cost in units of a cost model.
pub type Units = u64;

/// Saturating infinity for [`Units`].
pub const INF: Units = u64::MAX;

/// Saturating addition of unit costs. Panics if a finite sum overflows.
#[inline]
pub fn uadd(a: Units, b: Units) -> Units {
    if a == INF || b == INF {
        INF
    } else {
        match a.checked_add(b) {
            Some(s) if s != INF => s,
            _ => panic!("cost overflow"),
        }
    }
}

/// Exact non-negative rational cost, or infinity.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum CostValue {
    Finite(Ratio<u64>),
    Inf,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid cost literal {0:?}")]
pub struct ParseCostError(pub String);

impl CostValue {
    pub const ZERO: CostValue = CostValue::Finite(Ratio::new_raw(0, 1));

    pub fn integer(n: u64) -> Self {
        CostValue::Finite(Ratio::from_integer(n))
    }

    pub fn ratio(num: u64, den: u64) -> Self {
        CostValue::Finite(Ratio::new(num, den))
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, CostValue::Finite(_))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, CostValue::Finite(r) if r.is_zero())
    }

    pub fn as_ratio(&self) -> Option<Ratio<u64>> {
        match self {
            CostValue::Finite(r) => Some(*r),
            CostValue::Inf => None,
        }
    }

    /// Halves the value exactly.
    pub fn half(&self) -> Self {
        match self {
            CostValue::Finite(r) => CostValue::Finite(*r / 2),
            CostValue::Inf => CostValue::Inf,
        }
    }

    /// `self` if it does not exceed `k`, otherwise infinity.
    pub fn cap(self, k: u64) -> Self {
        if self <= CostValue::integer(k) {
            self
        } else {
            CostValue::Inf
        }
    }
}

impl Default for CostValue {
    fn default() -> Self {
        CostValue::ZERO
    }
}

impl PartialOrd for CostValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CostValue {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (CostValue::Inf, CostValue::Inf) => Ordering::Equal,
            (CostValue::Inf, _) => Ordering::Greater,
            (_, CostValue::Inf) => Ordering::Less,
            (CostValue::Finite(a), CostValue::Finite(b)) => a.cmp(b),
        }
    }
}

impl Add for CostValue {
    type Output = CostValue;
    fn add(self, rhs: CostValue) -> CostValue {
        match (self, rhs) {
            (CostValue::Finite(a), CostValue::Finite(b)) => {
                CostValue::Finite(a.checked_add(&b).expect("cost overflow"))
            }
            _ => CostValue::Inf,
        }
    }
}

impl fmt::Display for CostValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = match self {
            CostValue::Inf => return f.write_str("INF"),
            CostValue::Finite(r) => *r,
        };
        let (num, den) = (*r.numer(), *r.denom());
        let mut d = den;
        while d % 2 == 0 {
            d /= 2;
        }
        while d % 5 == 0 {
            d /= 5;
        }
        if d != 1 {
            return write!(f, "{num}/{den}");
        }
        let (int, mut rem) = num.div_rem(&den);
        write!(f, "{int}")?;
        if rem != 0 {
            f.write_str(".")?;
            while rem != 0 {
                let wide = rem as u128 * 10;
                write!(f, "{}", wide / den as u128)?;
                rem = (wide % den as u128) as u64;
            }
        }
        Ok(())
    }
}

impl FromStr for CostValue {
    type Err = ParseCostError;

    /// Accepts `INF`, non-negative decimals such as `1.5`, and fractions `3/2`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseCostError(s.to_string());
        let t = s.trim();
        if t.eq_ignore_ascii_case("inf") {
            return Ok(CostValue::Inf);
        }
        if let Some((a, b)) = t.split_once('/') {
            let a: u64 = a.trim().parse().map_err(|_| err())?;
            let b: u64 = b.trim().parse().map_err(|_| err())?;
            if b == 0 {
                return Err(err());
            }
            return Ok(CostValue::ratio(a, b));
        }
        let (int, frac) = t.split_once('.').unwrap_or((t, ""));
        if int.is_empty() && frac.is_empty() {
            return Err(err());
        }
        if !int.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit()) {
            return Err(err());
        }
        let mut num: u64 = 0;
        let mut den: u64 = 1;
        for b in int.bytes().chain(frac.bytes()) {
            num = num
                .checked_mul(10)
                .and_then(|n| n.checked_add((b - b'0') as u64))
                .ok_or_else(err)?;
        }
        for _ in 0..frac.len() {
            den = den.checked_mul(10).ok_or_else(err)?;
        }
        Ok(CostValue::ratio(num, den))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_exact_decimals() {
        assert_eq!(CostValue::ratio(3, 2).to_string(), "1.5");
        assert_eq!(CostValue::integer(7).to_string(), "7");
        assert_eq!(CostValue::ratio(1, 8).to_string(), "0.125");
        assert_eq!(CostValue::ratio(1, 3).to_string(), "1/3");
        assert_eq!(CostValue::Inf.to_string(), "INF");
    }

    #[test]
    fn parse_roundtrip() {
        for s in ["0", "1", "1.5", "0.125", "12.75", "INF"] {
            let v: CostValue = s.parse().unwrap();
            assert_eq!(v.to_string(), s);
        }
        assert_eq!("3/2".parse::<CostValue>().unwrap(), CostValue::ratio(3, 2));
        assert!("-1".parse::<CostValue>().is_err());
        assert!("1e3".parse::<CostValue>().is_err());
        assert!(".".parse::<CostValue>().is_err());
    }

    #[test]
    fn saturating_order() {
        let a = CostValue::ratio(1, 2);
        assert_eq!(a + CostValue::Inf, CostValue::Inf);
        assert!(CostValue::Inf > CostValue::integer(1 << 40));
        assert_eq!((a + a) + a, a + (a + a));
        assert_eq!(uadd(3, INF), INF);
        assert_eq!(uadd(3, 4), 7);
    }
}
