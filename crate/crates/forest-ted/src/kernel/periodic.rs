//! Periodic blocks and the red/black classification of parenthesis strings.

use crate::forest::Paren;

/// Shortest string period of `s` (`|s|` when `s` is empty or aperiodic).
pub fn shortest_period<T: PartialEq>(s: &[T]) -> usize {
    if s.is_empty() {
        return 0;
    }
    let mut fail = vec![0usize; s.len() + 1];
    let mut b = 0usize;
    for i in 1..s.len() {
        while b > 0 && s[i] != s[b] {
            b = fail[b];
        }
        if s[i] == s[b] {
            b += 1;
        }
        fail[i + 1] = b;
    }
    s.len() - fail[s.len()]
}

/// Whether `s` is not a proper power of a shorter string.
pub fn is_primitive<T: PartialEq>(s: &[T]) -> bool {
    let p = shortest_period(s);
    p == s.len() || !s.len().is_multiple_of(p)
}

/// A maximal periodic fragment `T[l..r)` with shortest period `p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PeriodicBlock {
    pub l: usize,
    pub r: usize,
    pub p: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RedBlackLabels {
    pub black: Vec<bool>,
    pub blocks: Vec<PeriodicBlock>,
}

impl RedBlackLabels {
    pub fn red_count(&self) -> usize {
        self.black.iter().filter(|&&b| !b).count()
    }
}

fn count_balanced(s: &[Paren]) -> bool {
    2 * s.iter().filter(|c| c.open).count() == s.len()
}

/// Length threshold of a periodic block.
pub fn min_block_len(k: usize) -> usize {
    42 * k
}

/// Classifies every character of `t` as black or red for threshold `k`.
pub fn find_periodic_blocks(t: &[Paren], k: usize) -> RedBlackLabels {
    let n = t.len();
    let mut black = vec![false; n];
    let mut blocks = Vec::new();
    let min_len = min_block_len(k);
    if n >= min_len {
        for p in 1..=(4 * k).min(n) {
            let mut i = 0;
            while i + p < n {
                if t[i] != t[i + p] {
                    i += 1;
                    continue;
                }
                let s = i;
                while i + p < n && t[i] == t[i + p] {
                    i += 1;
                }
                let r = i + p;
                if r - s >= min_len && count_balanced(&t[s..s + p]) && shortest_period(&t[s..r]) == p {
                    blocks.push(PeriodicBlock { l: s, r, p });
                }
            }
        }
    }
    blocks.sort_by_key(|b| (b.l, b.r));
    for b in &blocks {
        black[b.l + 5 * k..b.r - 5 * k].iter_mut().for_each(|x| *x = true);
    }
    RedBlackLabels { black, blocks }
}

pub fn red_count(t: &[Paren], k: usize) -> usize {
    if t.len() < min_block_len(k) {
        return t.len();
    }
    find_periodic_blocks(t, k).red_count()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
#[error("period has unequal numbers of opening and closing parentheses")]
pub struct NotCountBalanced;

/// Start of a balanced cyclic rotation: the first minimum of the prefix excess.
pub fn balanced_rotation(q: &[Paren]) -> Result<usize, NotCountBalanced> {
    if !count_balanced(q) {
        return Err(NotCountBalanced);
    }
    let (mut s, mut best, mut at) = (0i64, 0i64, 0usize);
    for (i, c) in q.iter().enumerate() {
        s += if c.open { 1 } else { -1 };
        if s < best {
            best = s;
            at = i + 1;
        }
    }
    Ok(at)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o(a: u32) -> Paren {
        Paren::open(a)
    }
    fn c(a: u32) -> Paren {
        Paren::close(a)
    }

    #[test]
    fn periods() {
        assert_eq!(shortest_period(&[1, 2, 1, 2, 1]), 2);
        assert_eq!(shortest_period(&[1, 1, 1]), 1);
        assert_eq!(shortest_period(&[1, 2, 3]), 3);
        assert!(is_primitive(&[1, 2, 1]));
        assert!(!is_primitive(&[1, 2, 1, 2]));
    }

    #[test]
    fn rotations() {
        assert_eq!(balanced_rotation(&[o(0), c(0)]), Ok(0));
        assert_eq!(balanced_rotation(&[c(0), o(0)]), Ok(1));
        assert_eq!(balanced_rotation(&[o(0), o(0)]), Err(NotCountBalanced));
    }

    #[test]
    fn short_strings_are_red() {
        let t: Vec<Paren> = (0..20).flat_map(|_| [o(0), c(0)]).collect();
        let rb = find_periodic_blocks(&t, 1);
        assert!(rb.blocks.is_empty());
        assert_eq!(rb.red_count(), 40);
    }

    #[test]
    fn one_block() {
        let t: Vec<Paren> = (0..30).flat_map(|_| [o(0), c(0)]).collect();
        let rb = find_periodic_blocks(&t, 1);
        assert_eq!(rb.blocks, vec![PeriodicBlock { l: 0, r: 60, p: 2 }]);
        assert!((0..60).all(|i| rb.black[i] == (5..55).contains(&i)));
        assert!(rb.blocks.len() * 2 <= rb.red_count());
    }
}
