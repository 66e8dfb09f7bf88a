use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use rayon::prelude::*;

use super::OrthoGraph;
use crate::error::{Error, Result};

/// Limits on a clique search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CliqueBudget {
    /// Maximum number of cliques to collect before giving up.
    pub max_cliques: u64,
}

impl Default for CliqueBudget {
    fn default() -> Self {
        Self {
            max_cliques: 5_000_000,
        }
    }
}

#[derive(Clone)]
struct BitSet {
    words: Vec<u64>,
}

impl BitSet {
    fn empty(n: usize) -> Self {
        Self {
            words: vec![0; n.div_ceil(64)],
        }
    }

    fn full(n: usize) -> Self {
        let mut s = Self::empty(n);
        for i in 0..n {
            s.insert(i);
        }
        s
    }

    fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    fn remove(&mut self, i: usize) {
        self.words[i / 64] &= !(1 << (i % 64));
    }

    fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    fn and(&self, other: &Self) -> Self {
        Self {
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & b)
                .collect(),
        }
    }

    fn and_not(&self, other: &Self) -> Self {
        Self {
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & !b)
                .collect(),
        }
    }

    fn and_len(&self, other: &Self) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + b)
            })
        })
    }
}

struct Search<'a> {
    rows: &'a [BitSet],
    size: usize,
    budget: u64,
    found: &'a AtomicU64,
    aborted: &'a AtomicBool,
}

impl Search<'_> {
    fn pivot(&self, p: &BitSet, x: &BitSet) -> usize {
        p.iter()
            .chain(x.iter())
            .max_by_key(|&u| (p.and_len(&self.rows[u]), std::cmp::Reverse(u)))
            .expect("P ∪ X is non-empty")
    }

    fn expand(&self, r: &mut Vec<u32>, mut p: BitSet, mut x: BitSet, out: &mut Vec<Vec<u32>>) {
        if self.aborted.load(Ordering::Relaxed) {
            return;
        }
        if r.len() == self.size {
            if p.is_empty() && x.is_empty() {
                let mut c = r.clone();
                c.sort_unstable();
                out.push(c);
                if self.found.fetch_add(1, Ordering::Relaxed) + 1 > self.budget {
                    self.aborted.store(true, Ordering::Relaxed);
                }
            }
            return;
        }
        if r.len() + p.len() < self.size || p.is_empty() {
            return;
        }
        let u = self.pivot(&p, &x);
        let candidates: Vec<usize> = p.and_not(&self.rows[u]).iter().collect();
        for v in candidates {
            r.push(v as u32);
            self.expand(r, p.and(&self.rows[v]), x.and(&self.rows[v]), out);
            r.pop();
            p.remove(v);
            x.insert(v);
            if r.len() + p.len() < self.size {
                break;
            }
        }
    }
}

/// Every maximal clique of exactly `size` vertices, as sorted index lists in
/// lexicographic order.
///
/// Uses Bron–Kerbosch with pivoting, pruning branches that cannot reach
/// `size`. The top-level branches run in parallel. For the orthogonality
/// graph no clique exceeds 4k − 1 vertices, so with `size = 4k − 1` this
/// lists all cliques of that size.
pub fn find_cliques(g: &OrthoGraph, size: usize, budget: CliqueBudget) -> Result<Vec<Vec<u32>>> {
    if size != 4 * g.k() - 1 {
        return Err(Error::Domain(format!(
            "clique size must be 4k - 1 = {}, got {size}",
            4 * g.k() - 1
        )));
    }
    let n = g.vertex_count();
    let rows: Vec<BitSet> = (0..n)
        .map(|i| {
            let mut s = BitSet::empty(n);
            for &j in g.neighbours(i) {
                s.insert(j as usize);
            }
            s
        })
        .collect();

    let found = AtomicU64::new(0);
    let aborted = AtomicBool::new(false);
    let search = Search {
        rows: &rows,
        size,
        budget: budget.max_cliques,
        found: &found,
        aborted: &aborted,
    };

    // Unroll the first level so its branches can run independently: branch
    // i sees P minus the earlier candidates and X plus them.
    let p = BitSet::full(n);
    let x = BitSet::empty(n);
    let u = search.pivot(&p, &x);
    let candidates: Vec<usize> = p.and_not(&rows[u]).iter().collect();
    let branches: Vec<(usize, BitSet, BitSet)> = candidates
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            let mut pi = p.clone();
            let mut xi = x.clone();
            for &w in &candidates[..i] {
                pi.remove(w);
                xi.insert(w);
            }
            (v, pi.and(&rows[v]), xi.and(&rows[v]))
        })
        .collect();

    let mut cliques: Vec<Vec<u32>> = branches
        .into_par_iter()
        .flat_map_iter(|(v, pi, xi)| {
            let mut out = Vec::new();
            let mut r = vec![v as u32];
            search.expand(&mut r, pi, xi, &mut out);
            out
        })
        .collect();

    if aborted.load(Ordering::Relaxed) {
        return Err(Error::capacity(
            "clique enumeration",
            format!("more than {}", budget.max_cliques),
            budget.max_cliques,
        ));
    }
    cliques.sort_unstable();
    Ok(cliques)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_ortho_graph;
    use crate::primitives::{QshMatrix, ShVector};

    /// Brute force: extend increasing index sequences one vertex at a
    /// time, keeping only vertices adjacent to everything chosen so far.
    fn ordered_extension(g: &OrthoGraph, size: usize) -> Vec<Vec<u32>> {
        fn go(g: &OrthoGraph, size: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
            if cur.len() == size {
                out.push(cur.clone());
                return;
            }
            let start = cur.last().map_or(0, |&l| l as usize + 1);
            for v in start..g.vertex_count() {
                if cur.iter().all(|&c| g.is_adjacent(c as usize, v)) {
                    cur.push(v as u32);
                    go(g, size, cur, out);
                    cur.pop();
                }
            }
        }
        let mut out = Vec::new();
        go(g, size, &mut Vec::new(), &mut out);
        out
    }

    fn assemble(g: &OrthoGraph, clique: &[u32]) -> QshMatrix {
        let cols: Vec<ShVector> = clique.iter().map(|&i| *g.vertex(i as usize)).collect();
        QshMatrix::from_sh_columns(&cols).unwrap()
    }

    #[test]
    fn k1_has_eight_triangles() {
        let g = build_ortho_graph(1).unwrap();
        let cliques = find_cliques(&g, 3, CliqueBudget::default()).unwrap();
        assert_eq!(cliques.len(), 8);
        assert_eq!(cliques, ordered_extension(&g, 3));
        for c in &cliques {
            assert!(assemble(&g, c).is_hadamard());
        }
    }

    #[test]
    fn k2_matches_ordered_extension() {
        let g = build_ortho_graph(2).unwrap();
        let cliques = find_cliques(&g, 7, CliqueBudget::default()).unwrap();
        assert_eq!(cliques, ordered_extension(&g, 7));
        assert!(!cliques.is_empty());
        assert!(cliques.iter().all(|c| assemble(&g, c).is_hadamard()));
    }

    #[test]
    fn budget_and_size_checks() {
        let g = build_ortho_graph(1).unwrap();
        assert!(matches!(
            find_cliques(&g, 3, CliqueBudget { max_cliques: 5 }),
            Err(Error::Capacity { .. })
        ));
        assert!(find_cliques(&g, 2, CliqueBudget::default()).is_err());
    }

    #[test]
    fn bitset_basics() {
        let mut s = BitSet::empty(130);
        s.insert(0);
        s.insert(64);
        s.insert(129);
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![0, 64, 129]);
        assert_eq!(s.len(), 3);
        s.remove(64);
        assert_eq!(s.len(), 2);
        assert_eq!(BitSet::full(70).len(), 70);
    }
}
