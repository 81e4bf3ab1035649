//! Toolkit for building and checking edge-transitive bipartite graphs: bi-coset
//! graphs, quotients and expansions, permutation-group machinery, and automorphism
//! search with canonical forms.

pub mod bicoset;
pub mod bigraph;
pub mod autosearch;
pub mod families;
pub mod gflinalg;
pub mod permgroup;
pub mod report;
