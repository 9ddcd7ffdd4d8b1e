#![allow(dead_code)]

use forest_ted::forest::{Forest, Paren, Symbol};
use forest_ted::weights::{CostModel, WeightTable};
use forest_ted::cost::CostValue;
use rand::Rng;
use rand::seq::SliceRandom;

/// Random forest with `n` nodes over labels `0..sigma`.
pub fn random_forest(rng: &mut impl Rng, n: usize, sigma: u32) -> Forest {
    let mut chars = Vec::with_capacity(2 * n);
    let mut stack: Vec<Symbol> = Vec::new();
    let mut left = n;
    while left > 0 || !stack.is_empty() {
        let open = left > 0 && (stack.is_empty() || rng.gen_bool(0.5));
        if open {
            let s = rng.gen_range(0..sigma);
            stack.push(s);
            chars.push(Paren::open(s));
            left -= 1;
        } else {
            chars.push(Paren::close(stack.pop().unwrap()));
        }
    }
    Forest::from_parens(chars).unwrap()
}

/// Random forest biased toward deep vertical chains.
pub fn chainy_forest(rng: &mut impl Rng, n: usize, sigma: u32) -> Forest {
    let mut chars = Vec::with_capacity(2 * n);
    let mut stack: Vec<Symbol> = Vec::new();
    let mut left = n;
    while left > 0 || !stack.is_empty() {
        let open = left > 0 && (stack.is_empty() || rng.gen_bool(0.8));
        if open {
            let s = rng.gen_range(0..sigma);
            stack.push(s);
            chars.push(Paren::open(s));
            left -= 1;
        } else {
            chars.push(Paren::close(stack.pop().unwrap()));
        }
    }
    Forest::from_parens(chars).unwrap()
}

/// One random node edit: relabel, delete, or insert.
pub fn random_edit(rng: &mut impl Rng, f: &Forest, sigma: u32) -> Forest {
    let mut chars = f.chars().to_vec();
    let opens: Vec<usize> = (0..f.len()).filter(|&i| f.is_open(i)).collect();
    let kind = if opens.is_empty() { 2 } else { rng.gen_range(0..3) };
    match kind {
        0 => {
            let o = *opens.choose(rng).unwrap();
            let c = f.mate(o);
            let s = rng.gen_range(0..sigma);
            chars[o] = Paren::open(s);
            chars[c] = Paren::close(s);
        }
        1 => {
            let o = *opens.choose(rng).unwrap();
            let c = f.mate(o);
            chars.remove(c);
            chars.remove(o);
        }
        _ => {
            // wrap a run of consecutive siblings (possibly empty) in a new node
            let cuts: Vec<usize> = (0..=f.len()).collect();
            let a = *cuts.choose(rng).unwrap();
            let mut ends = vec![a];
            let mut j = a;
            while j < f.len() && f.is_open(j) {
                j = f.mate(j) + 1;
                ends.push(j);
            }
            let b = *ends.choose(rng).unwrap();
            let s = rng.gen_range(0..sigma);
            chars.insert(b, Paren::close(s));
            chars.insert(a, Paren::open(s));
        }
    }
    Forest::from_parens(chars).unwrap()
}

pub fn planted(rng: &mut impl Rng, f: &Forest, edits: usize, sigma: u32) -> Forest {
    let mut g = f.clone();
    for _ in 0..edits {
        g = random_edit(rng, &g, sigma);
    }
    g
}

/// Random normalized quasimetric table with entries in {1, 3/2, 2, 3}.
pub fn random_quasimetric(rng: &mut impl Rng, sigma: usize) -> WeightTable {
    let vals = [
        CostValue::integer(1),
        CostValue::ratio(3, 2),
        CostValue::integer(2),
        CostValue::integer(3),
    ];
    loop {
        let mut t = WeightTable::unit(sigma);
        let labels: Vec<Option<Symbol>> =
            std::iter::once(None).chain((0..sigma as Symbol).map(Some)).collect();
        for &x in &labels {
            for &y in &labels {
                if x != y {
                    t.set(x, y, *vals.choose(rng).unwrap());
                }
            }
        }
        if t.check_quasimetric().is_empty() {
            return t;
        }
    }
}

pub fn models(rng: &mut impl Rng, sigma: usize, extra: usize) -> Vec<(WeightTable, CostModel)> {
    let mut out = vec![(WeightTable::unit(sigma), CostModel::unit(sigma))];
    for _ in 0..extra {
        let t = random_quasimetric(rng, sigma);
        let m = CostModel::new(&t, sigma).unwrap();
        out.push((t, m));
    }
    out
}

fn node(label: Symbol, inner: Vec<Paren>) -> Vec<Paren> {
    let mut v = vec![Paren::open(label)];
    v.extend(inner);
    v.push(Paren::close(label));
    v
}

/// A path of `spine` nodes, each with `legs` leaf children before the next spine node.
pub fn caterpillar(rng: &mut impl Rng, spine: usize, legs: usize, sigma: u32) -> Forest {
    let mut inner = Vec::new();
    for _ in 0..spine {
        let mut v = Vec::new();
        for _ in 0..legs {
            v.extend(node(rng.gen_range(0..sigma), vec![]));
        }
        v.extend(inner);
        inner = node(rng.gen_range(0..sigma), v);
    }
    Forest::from_parens(inner).unwrap()
}

/// A path of `spine` nodes where every spine node also carries a chain of `tooth` nodes.
pub fn comb(rng: &mut impl Rng, spine: usize, tooth: usize, sigma: u32) -> Forest {
    let mut inner = Vec::new();
    for _ in 0..spine {
        let mut t = Vec::new();
        for _ in 0..tooth {
            t = node(rng.gen_range(0..sigma), t);
        }
        t.extend(inner);
        inner = node(rng.gen_range(0..sigma), t);
    }
    Forest::from_parens(inner).unwrap()
}

/// A chain of `handle` nodes ending in `bristles` leaves.
pub fn broom(rng: &mut impl Rng, handle: usize, bristles: usize, sigma: u32) -> Forest {
    let mut inner = Vec::new();
    for _ in 0..bristles {
        inner.extend(node(rng.gen_range(0..sigma), vec![]));
    }
    for _ in 0..handle {
        inner = node(rng.gen_range(0..sigma), inner);
    }
    Forest::from_parens(inner).unwrap()
}

/// Random forest with a horizontal run of `reps` copies of a random unit of `unit` nodes.
pub fn periodic_forest(rng: &mut impl Rng, pad: usize, unit: usize, reps: usize, sigma: u32) -> Forest {
    let r = random_forest(rng, unit, sigma);
    let mut chars = random_forest(rng, pad, sigma).chars().to_vec();
    for _ in 0..reps {
        chars.extend_from_slice(r.chars());
    }
    chars.extend_from_slice(random_forest(rng, pad, sigma).chars());
    Forest::from_parens(chars).unwrap()
}

/// Random forest with a vertical run of `reps` copies of one depth-1 context.
pub fn vertical_forest(rng: &mut impl Rng, pad: usize, side: usize, reps: usize, sigma: u32) -> Forest {
    let a = rng.gen_range(0..sigma);
    let left = random_forest(rng, side, sigma).chars().to_vec();
    let right = random_forest(rng, side, sigma).chars().to_vec();
    let mut inner = random_forest(rng, pad, sigma).chars().to_vec();
    for _ in 0..reps {
        let mut v = left.clone();
        v.extend(inner);
        v.extend_from_slice(&right);
        inner = node(a, v);
    }
    let mut chars = random_forest(rng, pad, sigma).chars().to_vec();
    chars.extend(inner);
    Forest::from_parens(chars).unwrap()
}
