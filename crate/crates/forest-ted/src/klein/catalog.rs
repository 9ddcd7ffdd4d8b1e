//! The set of F-fragments visited by Klein's recursion, grouped by owner node.

use std::collections::HashMap;

use crate::forest::{Forest, HeavyInfo};

/// Whether the recursion on the nonempty fragment `F[l..r)` takes the left branch.
#[inline]
pub fn branch_left(f: &Forest, l: usize, r: usize) -> bool {
    debug_assert!(l < r);
    let u_in = f.is_open(l) && f.mate(l) < r;
    let v_in = !f.is_open(r - 1) && f.mate(r - 1) >= l;
    if !u_in {
        return true;
    }
    v_in && f.node(l).size() <= f.node(r - 1).size()
}

/// Owner of a catalogued fragment: `None` is the virtual root.
pub type Owner = Option<usize>;

#[derive(Clone, Debug)]
pub struct OwnerRun {
    pub owner: Owner,
    /// Size of the owner (`|F| + 2` for the virtual root).
    pub size: usize,
    pub start: usize,
    pub len: usize,
}

/// All fragments `F[l..r)` visited by Klein's recursion.
#[derive(Clone, Debug, Default)]
pub struct FragmentCatalog {
    frags: Vec<(usize, usize)>,
    owner_of: Vec<u32>,
    runs: Vec<OwnerRun>,
    index: HashMap<(usize, usize), u32>,
}

impl FragmentCatalog {
    pub fn len(&self) -> usize {
        self.frags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frags.is_empty()
    }

    pub fn frags(&self) -> &[(usize, usize)] {
        &self.frags
    }

    pub fn runs(&self) -> &[OwnerRun] {
        &self.runs
    }

    pub fn owner(&self, i: usize) -> Owner {
        self.runs[self.owner_of[i] as usize].owner
    }

    pub fn position(&self, l: usize, r: usize) -> Option<usize> {
        self.index.get(&(l, r)).map(|&i| i as usize)
    }

    pub fn contains(&self, l: usize, r: usize) -> bool {
        self.index.contains_key(&(l, r))
    }

    /// The fragment of length `len` in the sequence of `run`, found by index arithmetic.
    pub fn in_run(&self, run: &OwnerRun, len: usize) -> Option<(usize, usize)> {
        let idx = (run.size - 2).checked_sub(len)?;
        (idx < run.len).then(|| self.frags[run.start + idx])
    }
}

/// Builds the catalog: for every non-leaf `v` (including the virtual root), the sequence
/// from `F(o(v)..c(v))` down to `F(o(h)..c(h)]` with `h` the heavy child.
pub fn enumerate_fragments(f: &Forest) -> FragmentCatalog {
    let heavy = HeavyInfo::new(f);
    let mut cat = FragmentCatalog::default();
    let mut owners: Vec<(Owner, usize, usize, usize)> = Vec::new();
    if let Some(h) = heavy.heavy_root {
        owners.push((None, 0, f.len(), h));
    }
    for o in 0..f.len() {
        if f.is_open(o) {
            if let Some(h) = heavy.heavy_child(o) {
                owners.push((Some(o), o + 1, f.mate(o), h));
            }
        }
    }
    for (owner, l0, r0, h) in owners {
        let size = r0 - l0 + 2;
        let end = (h + 1, f.mate(h) + 1);
        let start = cat.frags.len();
        let run_id = cat.runs.len() as u32;
        let (mut l, mut r) = (l0, r0);
        loop {
            let id = cat.frags.len() as u32;
            cat.frags.push((l, r));
            cat.owner_of.push(run_id);
            cat.index.insert((l, r), id);
            if (l, r) == end {
                break;
            }
            if branch_left(f, l, r) {
                l += 1;
            } else {
                r -= 1;
            }
            assert!(l < r, "catalog sequence lost its heavy child");
        }
        let len = cat.frags.len() - start;
        debug_assert_eq!(len, size - f.node(h).size());
        cat.runs.push(OwnerRun {
            owner,
            size,
            start,
            len,
        });
    }
    cat
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forest::{parse_forest, Alphabet};

    fn p(s: &str) -> Forest {
        parse_forest(s, &mut Alphabet::new()).unwrap()
    }

    #[test]
    fn single_node() {
        let f = p("(a)");
        let c = enumerate_fragments(&f);
        assert_eq!(c.runs().len(), 1);
        assert_eq!(c.frags(), &[(0, 2), (1, 2)]);
    }

    #[test]
    fn nested_pair() {
        let f = p("(a(b))");
        let c = enumerate_fragments(&f);
        let by_owner = |o: Owner| c.runs().iter().find(|r| r.owner == o).unwrap().len;
        assert_eq!(by_owner(None), 2);
        assert_eq!(by_owner(Some(0)), 2);
        assert_eq!(c.len(), 4);
    }

    #[test]
    fn index_formula() {
        let f = p("(a(b)(c(d))(e))(f)");
        let c = enumerate_fragments(&f);
        for run in c.runs() {
            for idx in 0..run.len {
                let (l, r) = c.frags()[run.start + idx];
                assert_eq!(idx, run.size - 2 - (r - l));
                assert_eq!(c.in_run(run, r - l), Some((l, r)));
            }
        }
    }
}
