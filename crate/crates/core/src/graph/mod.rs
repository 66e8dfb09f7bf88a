//! The orthogonality graph over all SH vectors of order 4k.
//!
//! Vertices are the SH vectors in enumeration order; two vertices are joined
//! iff the vectors are orthogonal. The graph is C(2k,k)²-regular on C(4k,2k)
//! vertices, and its (4k−1)-cliques are exactly the column sets of
//! seminormalized Hadamard matrices.

mod clique;
mod export;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::primitives::{inner_product, ShVector};
use crate::vectorspace::{
    enumerate_sh_vectors_with_cap, orthogonal_set_with_cap, DEFAULT_ENUMERATION_CAP,
};

pub use clique::{find_cliques, CliqueBudget};
pub use export::{export_graph, ExportFormat};

/// Adjacency entries (sum of degrees) a graph build may allocate.
pub const DEFAULT_ADJACENCY_CAP: u64 = 10_000_000;

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct OrthoGraph {
    k: usize,
    vertices: Vec<ShVector>,
    adjacency: Vec<Vec<u32>>,
}

impl OrthoGraph {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[ShVector] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> &ShVector {
        &self.vertices[i]
    }

    pub fn index_of(&self, v: &ShVector) -> Option<usize> {
        self.vertices.binary_search(v).ok()
    }

    /// Sorted neighbour indices of vertex `i`.
    pub fn neighbours(&self, i: usize) -> &[u32] {
        &self.adjacency[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adjacency[i].len()
    }

    pub fn is_adjacent(&self, i: usize, j: usize) -> bool {
        self.adjacency[i].binary_search(&(j as u32)).is_ok()
    }

    /// The common degree, if every vertex has the same one.
    pub fn regular_degree(&self) -> Option<usize> {
        let d = self.degree(0);
        self.adjacency.iter().all(|a| a.len() == d).then_some(d)
    }

    pub fn is_symmetric(&self) -> bool {
        self.adjacency
            .iter()
            .enumerate()
            .all(|(i, adj)| adj.iter().all(|&j| self.is_adjacent(j as usize, i)))
    }

    /// Edge list `(i, j)` with `i < j`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency.iter().enumerate().flat_map(|(i, adj)| {
            adj.iter()
                .map(|&j| j as usize)
                .filter(move |&j| j > i)
                .map(move |j| (i, j))
        })
    }

    /// Checks the structural invariants: vertices sorted and balanced,
    /// adjacency sorted, symmetric and equal to orthogonality.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::Precondition(format!("invalid graph: {msg}")));
        if self.vertices.len() != self.adjacency.len() {
            return bad("vertex and adjacency counts differ");
        }
        if self.vertices.iter().any(|v| v.k() != self.k) {
            return bad("vertex of the wrong order");
        }
        if !self.vertices.windows(2).all(|w| w[0] < w[1]) {
            return bad("vertices not strictly increasing");
        }
        for (i, adj) in self.adjacency.iter().enumerate() {
            if !adj.windows(2).all(|w| w[0] < w[1]) {
                return bad("adjacency list not strictly increasing");
            }
            for &j in adj {
                let j = j as usize;
                if j >= self.vertices.len()
                    || inner_product(&self.vertices[i], &self.vertices[j])? != 0
                {
                    return bad("edge between non-orthogonal vectors");
                }
            }
        }
        if !self.is_symmetric() {
            return bad("adjacency not symmetric");
        }
        Ok(())
    }
}

/// Builds the orthogonality graph for order 4k.
///
/// Each neighbourhood comes from [`orthogonal_set`](crate::vectorspace::orthogonal_set)
/// rather than an all-pairs scan.
pub fn build_ortho_graph(k: usize) -> Result<OrthoGraph> {
    build_ortho_graph_with_cap(k, DEFAULT_ADJACENCY_CAP)
}

pub fn build_ortho_graph_with_cap(k: usize, adjacency_cap: u64) -> Result<OrthoGraph> {
    let vertices: Vec<ShVector> =
        enumerate_sh_vectors_with_cap(k, DEFAULT_ENUMERATION_CAP)?.collect();
    let n_o = crate::vectorspace::FamilyKind::Psh.count(k);
    let total = BigUint::from(vertices.len()) * &n_o;
    if total > BigUint::from(adjacency_cap) {
        return Err(Error::capacity(
            "orthogonality graph adjacency",
            total,
            adjacency_cap,
        ));
    }
    let adjacency = vertices
        .par_iter()
        .map(|v| -> Result<Vec<u32>> {
            orthogonal_set_with_cap(v, DEFAULT_ENUMERATION_CAP)?
                .iter()
                .map(|u| {
                    vertices
                        .binary_search(u)
                        .map(|j| j as u32)
                        .map_err(|_| Error::Precondition(format!("{u} is not an SH vector")))
                })
                .collect()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(OrthoGraph {
        k,
        vertices,
        adjacency,
    })
}

/// Number of edges: half the degree sum.
pub fn edge_count(g: &OrthoGraph) -> BigUint {
    let degree_sum: u64 = g.adjacency.iter().map(|a| a.len() as u64).sum();
    BigUint::from(degree_sum / 2)
}
