//! Forest and context reductions that keep `ted_{<=k}` unchanged.

use std::collections::HashMap;

use crate::forest::{Paren, Symbol};

use super::periodic::{is_primitive, red_count};
use super::Thresholds;

/// Replaces every occurrence of `Q^{e+1}` by `Q^e` until none is left, for windows `Q`
/// accepted by `member`.
pub fn periodicity_reduction<T: Clone + PartialEq>(s: &[T], e: usize, member: impl Fn(&[T]) -> bool) -> Vec<T> {
    let mut s = s.to_vec();
    'outer: loop {
        for q in 1..=s.len() / (e + 1) {
            let need = (e + 1) * q;
            let mut i = 0;
            while i + q < s.len() {
                if s[i] != s[i + q] {
                    i += 1;
                    continue;
                }
                let start = i;
                while i + q < s.len() && s[i] == s[i + q] {
                    i += 1;
                }
                let end = i + q;
                if end - start < need {
                    continue;
                }
                for x in start..start + q {
                    if x + need > end {
                        break;
                    }
                    let w = &s[x..x + q];
                    if is_primitive(w) && member(w) {
                        let m = (end - x - need) / q + 1;
                        s.drain(x..x + m * q);
                        continue 'outer;
                    }
                }
            }
        }
        return s;
    }
}

/// A reduced forest or context half pair, and whether the fixed fallback was used.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reduced<T> {
    pub value: T,
    pub fallback: bool,
}

/// `(_a^{d} )_a^{d}` with `d = 79k^2`.
pub fn fallback_forest(th: &Thresholds, a: Symbol) -> Vec<Paren> {
    let d = th.forest_red() / 2;
    let mut v = vec![Paren::open(a); d];
    v.extend(std::iter::repeat_n(Paren::close(a), d));
    v
}

/// Keeps `p` if it has at most `158k^2` red characters, otherwise returns the fallback forest.
pub fn forest_reduction(p: &[Paren], th: &Thresholds, a: Symbol) -> Reduced<Vec<Paren>> {
    if red_count(p, th.k) <= th.forest_red() {
        Reduced { value: p.to_vec(), fallback: false }
    } else {
        Reduced { value: fallback_forest(th, a), fallback: true }
    }
}

/// The fixed fallback context of length `1152k^3`.
pub fn fallback_context(th: &Thresholds, a: Symbol) -> (Vec<Paren>, Vec<Paren>) {
    let (levels, width) = th.fallback_levels();
    let run = |n: usize, open: bool| std::iter::repeat_n(if open { Paren::open(a) } else { Paren::close(a) }, n);
    let mut left = Vec::new();
    for i in 0..levels {
        left.extend(run(i + 1, true));
        left.extend(run(i, false));
    }
    let mut right = Vec::new();
    for i in (0..levels).rev() {
        right.extend(run(width - i - 1, true));
        right.extend(run(width - i, false));
    }
    (left, right)
}

/// One depth-1 context `<(_a X; Y )_a>`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Level {
    pub label: Symbol,
    pub inner_left: Vec<Paren>,
    pub inner_right: Vec<Paren>,
}

impl Level {
    pub fn len(&self) -> usize {
        2 + self.inner_left.len() + self.inner_right.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// Splits a context into depth-1 contexts, outermost first.
pub fn factor_context(left: &[Paren], right: &[Paren]) -> Vec<Level> {
    let mut stack: Vec<usize> = Vec::new();
    for (i, c) in left.iter().enumerate() {
        if c.open {
            stack.push(i);
        } else {
            stack.pop().expect("left half closes more than it opens");
        }
    }
    let ups = stack;
    let mut downs: Vec<usize> = Vec::new();
    let mut depth = 0usize;
    for (i, c) in right.iter().enumerate() {
        if c.open {
            depth += 1;
        } else if depth > 0 {
            depth -= 1;
        } else {
            downs.push(i);
        }
    }
    assert_eq!(ups.len(), downs.len(), "halves do not form a context");
    let e = ups.len();
    (0..e)
        .map(|i| {
            let lend = if i + 1 < e { ups[i + 1] } else { left.len() };
            let down = downs[e - 1 - i];
            let rstart = if i + 1 < e { downs[e - 2 - i] + 1 } else { 0 };
            assert_eq!(left[ups[i]].label, right[down].label, "context levels disagree on labels");
            Level {
                label: left[ups[i]].label,
                inner_left: left[ups[i] + 1..lend].to_vec(),
                inner_right: right[rstart..down].to_vec(),
            }
        })
        .collect()
}

/// Composes depth-1 contexts, outermost first.
pub fn compose_levels<'a>(levels: impl DoubleEndedIterator<Item = &'a Level> + Clone) -> (Vec<Paren>, Vec<Paren>) {
    let mut left = Vec::new();
    for l in levels.clone() {
        left.push(Paren::open(l.label));
        left.extend_from_slice(&l.inner_left);
    }
    let mut right = Vec::new();
    for l in levels.rev() {
        right.extend_from_slice(&l.inner_right);
        right.push(Paren::close(l.label));
    }
    (left, right)
}

/// Left and right halves of a context.
pub type ContextHalves = (Vec<Paren>, Vec<Paren>);

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ContextReductionInfo {
    pub forest_fallbacks: usize,
    pub levels_removed: usize,
}

/// Reduces a context to one with at most `1152k^3` red characters.
pub fn context_reduction(
    left: &[Paren],
    right: &[Paren],
    th: &Thresholds,
    a: Symbol,
) -> (Reduced<ContextHalves>, ContextReductionInfo) {
    let mut info = ContextReductionInfo::default();
    let mut ids: HashMap<Level, u32> = HashMap::new();
    let mut table: Vec<Level> = Vec::new();
    let mut word: Vec<u32> = Vec::new();
    for lv in factor_context(left, right) {
        let fl = forest_reduction(&lv.inner_left, th, a);
        let fr = forest_reduction(&lv.inner_right, th, a);
        info.forest_fallbacks += fl.fallback as usize + fr.fallback as usize;
        let lv = Level {
            label: lv.label,
            inner_left: fl.value,
            inner_right: fr.value,
        };
        let id = *ids.entry(lv.clone()).or_insert_with(|| {
            table.push(lv);
            (table.len() - 1) as u32
        });
        word.push(id);
    }
    let cap = th.composition_len();
    let reduced = periodicity_reduction(&word, th.vertical_exponent(), |w| {
        w.iter().map(|&i| table[i as usize].len()).sum::<usize>() <= cap
    });
    info.levels_removed = word.len() - reduced.len();
    let (l, r) = compose_levels(reduced.iter().map(|&i| &table[i as usize]));
    if red_count(&l, th.k) + red_count(&r, th.k) <= th.context_red() {
        (Reduced { value: (l, r), fallback: false }, info)
    } else {
        (Reduced { value: fallback_context(th, a), fallback: true }, info)
    }
}
