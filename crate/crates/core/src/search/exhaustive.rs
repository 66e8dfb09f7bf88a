use num_bigint::BigUint;
use num_traits::ToPrimitive;

use super::SearchBudget;
use crate::analysis::combinatorics::binomial;
use crate::error::{Error, Result};
use crate::graph::{build_ortho_graph, find_cliques, CliqueBudget};
use crate::primitives::{ShMatrix, ShVector};
use crate::vectorspace::enumerate_sh_vectors;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExhaustiveStrategy {
    /// Stream candidates when they fit the budget, otherwise use cliques.
    Auto,
    /// Check every (4k−1)-combination of SH vectors.
    Combinations,
    /// Enumerate (4k−1)-cliques of the orthogonality graph.
    Cliques,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExhaustiveRoute {
    Combinations { examined: u64 },
    Cliques,
}

#[derive(Clone, Debug)]
pub struct ExhaustiveOutcome {
    pub route: ExhaustiveRoute,
    /// Every SH matrix with columns in increasing packed order, listed in
    /// lexicographic order of their column sets.
    pub matrices: Vec<ShMatrix>,
}

/// Lexicographic r-combinations of `0..n`.
struct Combinations {
    n: usize,
    idx: Vec<usize>,
    done: bool,
}

impl Combinations {
    fn new(n: usize, r: usize) -> Self {
        Self {
            n,
            idx: (0..r).collect(),
            done: r > n,
        }
    }

    fn advance(&mut self) {
        let r = self.idx.len();
        let mut i = r;
        while i > 0 {
            i -= 1;
            if self.idx[i] < self.n - r + i {
                self.idx[i] += 1;
                for j in i + 1..r {
                    self.idx[j] = self.idx[j - 1] + 1;
                }
                return;
            }
        }
        self.done = true;
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.idx.clone();
        self.advance();
        Some(out)
    }
}

/// Finds every SH matrix of order 4k.
///
/// The combination route checks each of the C(N_V, 4k−1) unique candidates
/// and fails with a capacity error if that exceeds `budget.max_iterations`.
/// The clique route produces the same set through the orthogonality graph.
pub fn exhaustive_search(
    k: usize,
    strategy: ExhaustiveStrategy,
    budget: &SearchBudget,
) -> Result<ExhaustiveOutcome> {
    budget.validate()?;
    let vectors: Vec<ShVector> = enumerate_sh_vectors(k)?.collect();
    let r = 4 * k - 1;
    let candidates: BigUint = binomial(vectors.len() as u64, r as u64)?;
    let fits = candidates <= BigUint::from(budget.max_iterations);
    let use_cliques = match strategy {
        ExhaustiveStrategy::Auto => !fits,
        ExhaustiveStrategy::Combinations if !fits => {
            return Err(Error::capacity(
                "exhaustive candidate stream",
                candidates,
                budget.max_iterations,
            ))
        }
        ExhaustiveStrategy::Combinations => false,
        ExhaustiveStrategy::Cliques => true,
    };

    if use_cliques {
        let g = build_ortho_graph(k)?;
        let cliques = find_cliques(
            &g,
            r,
            CliqueBudget {
                max_cliques: budget.max_iterations,
            },
        )?;
        let matrices = cliques
            .iter()
            .map(|c| {
                let cols: Vec<ShVector> = c.iter().map(|&i| *g.vertex(i as usize)).collect();
                ShMatrix::from_sh_columns(&cols)
            })
            .collect::<Result<_>>()?;
        return Ok(ExhaustiveOutcome {
            route: ExhaustiveRoute::Cliques,
            matrices,
        });
    }

    let mut examined = 0u64;
    let mut matrices = Vec::new();
    let mut cols = Vec::with_capacity(r);
    for combo in Combinations::new(vectors.len(), r) {
        examined += 1;
        cols.clear();
        cols.extend(combo.iter().map(|&i| vectors[i]));
        let orthogonal = cols.iter().enumerate().all(|(i, a)| {
            cols[i + 1..]
                .iter()
                .all(|b| a.as_signs().dot(b.as_signs()) == 0)
        });
        if orthogonal {
            matrices.push(ShMatrix::from_sh_columns(&cols)?);
        }
    }
    debug_assert_eq!(Some(examined), candidates.to_u64());
    Ok(ExhaustiveOutcome {
        route: ExhaustiveRoute::Combinations { examined },
        matrices,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn column_sets(ms: &[ShMatrix]) -> BTreeSet<Vec<ShVector>> {
        ms.iter().map(|m| m.sh_columns().collect()).collect()
    }

    #[test]
    fn combinations_are_lexicographic() {
        let all: Vec<_> = Combinations::new(5, 3).collect();
        assert_eq!(all.len(), 10);
        assert_eq!(all[0], vec![0, 1, 2]);
        assert_eq!(all[9], vec![2, 3, 4]);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(Combinations::new(3, 4).count(), 0);
    }

    #[test]
    fn k1_examines_twenty_and_finds_eight() {
        let out = exhaustive_search(1, ExhaustiveStrategy::Auto, &SearchBudget::default()).unwrap();
        assert_eq!(out.route, ExhaustiveRoute::Combinations { examined: 20 });
        assert_eq!(out.matrices.len(), 8);
        for m in &out.matrices {
            let g = m.as_qsh().gram();
            assert!((0..4).all(|i| (0..4).all(|j| g.get(i, j) == if i == j { 4 } else { 0 })));
        }
    }

    #[test]
    fn k1_routes_agree() {
        let b = SearchBudget::default();
        let a = exhaustive_search(1, ExhaustiveStrategy::Combinations, &b).unwrap();
        let c = exhaustive_search(1, ExhaustiveStrategy::Cliques, &b).unwrap();
        assert_eq!(column_sets(&a.matrices), column_sets(&c.matrices));
        assert_eq!(a.matrices, c.matrices);
    }

    #[test]
    fn k2_auto_uses_cliques() {
        let out = exhaustive_search(2, ExhaustiveStrategy::Auto, &SearchBudget::default()).unwrap();
        assert_eq!(out.route, ExhaustiveRoute::Cliques);
        assert!(!out.matrices.is_empty());
        assert!(out.matrices.iter().all(|m| m.as_qsh().is_hadamard()));
        let err = exhaustive_search(
            2,
            ExhaustiveStrategy::Combinations,
            &SearchBudget::default(),
        )
        .unwrap_err();
        match err {
            Error::Capacity { required, .. } => assert_eq!(required, "1198774720"),
            other => panic!("unexpected {other:?}"),
        }
    }
}
