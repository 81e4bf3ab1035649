//! Permutation groups: stabilizer chains, orbits, block systems, induced actions.
//!
//! All actions are on the right and products read left to right, so
//! `point^(a*b) = (point^a)^b`.

mod blocks;
mod chain;
mod perm;

use std::collections::VecDeque;
use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigUint;
use thiserror::Error;

pub use blocks::BlockSystem;
pub use chain::{Level, StabChain};
pub use perm::Permutation;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PermError {
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },
    #[error("point {point} out of range for degree {degree}")]
    PointOutOfRange { point: usize, degree: usize },
    #[error("image list is not a bijection (repeat at index {index})")]
    NotBijective { index: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("group is not transitive")]
    NotTransitive,
    #[error("partition is not invariant under the group")]
    NotInvariant,
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
}

/// A finitely generated permutation group with a lazily built stabilizer chain.
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
    chain: OnceLock<StabChain>,
}

impl Clone for PermGroup {
    fn clone(&self) -> Self {
        let chain = OnceLock::new();
        if let Some(c) = self.chain.get() {
            let _ = chain.set(c.clone());
        }
        PermGroup {
            degree: self.degree,
            generators: self.generators.clone(),
            chain,
        }
    }
}

impl fmt::Debug for PermGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PermGroup")
            .field("degree", &self.degree)
            .field("generators", &self.generators.len())
            .finish()
    }
}

impl PermGroup {
    pub fn new(degree: usize, generators: Vec<Permutation>) -> Result<Self, PermError> {
        for g in &generators {
            if g.degree() != degree {
                return Err(PermError::DegreeMismatch {
                    left: degree,
                    right: g.degree(),
                });
            }
        }
        Ok(PermGroup {
            degree,
            generators,
            chain: OnceLock::new(),
        })
    }

    pub fn trivial(degree: usize) -> Self {
        PermGroup {
            degree,
            generators: Vec::new(),
            chain: OnceLock::new(),
        }
    }

    /// Symmetric group on `degree` points from a transposition and a long cycle.
    pub fn symmetric(degree: usize) -> Self {
        let mut gens = Vec::new();
        if degree >= 2 {
            gens.push(Permutation::from_cycles(degree, &[&[0, 1]]).unwrap());
        }
        if degree >= 3 {
            let cycle: Vec<usize> = (0..degree).collect();
            gens.push(Permutation::from_cycles(degree, &[&cycle]).unwrap());
        }
        PermGroup::new(degree, gens).unwrap()
    }

    pub(crate) fn with_chain(degree: usize, generators: Vec<Permutation>, chain: StabChain) -> Self {
        let cell = OnceLock::new();
        let _ = cell.set(chain);
        PermGroup {
            degree,
            generators,
            chain: cell,
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    /// The default chain: base points are the smallest moved points.
    pub fn chain(&self) -> &StabChain {
        self.chain
            .get_or_init(|| StabChain::build(self.degree, &self.generators, &[]))
    }

    /// A fresh chain whose base begins with `base_hint`.
    pub fn build_chain(&self, base_hint: Option<&[usize]>) -> StabChain {
        match base_hint {
            None => self.chain().clone(),
            Some(hint) => StabChain::build(self.degree, &self.generators, hint),
        }
    }

    pub fn order(&self) -> BigUint {
        self.chain().order()
    }

    pub fn contains(&self, x: &Permutation) -> bool {
        self.chain().contains(x)
    }

    pub fn is_trivial(&self) -> bool {
        self.generators.iter().all(Permutation::is_identity)
    }

    /// Orbit of `point`, in BFS order over the generators as declared.
    pub fn orbit(&self, point: usize) -> Vec<usize> {
        orbit_under(self.degree, &self.generators, point)
    }

    /// All orbits, each sorted, ordered by smallest member.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        orbits_under(self.degree, &self.generators)
    }

    pub fn is_transitive(&self) -> bool {
        self.degree <= 1 || self.orbit(0).len() == self.degree
    }

    /// Subgroup fixing each of `points`, obtained from a chain whose base starts with them.
    pub fn pointwise_stabilizer(&self, points: &[usize]) -> PermGroup {
        let chain = StabChain::build(self.degree, &self.generators, points);
        let depth = chain
            .levels()
            .iter()
            .position(|l| !points.contains(&l.base_point))
            .unwrap_or(chain.levels().len());
        let gens = chain.stabilizer_generators(depth);
        PermGroup::with_chain(self.degree, gens, chain.truncated(depth))
    }

    /// Minimal block containing both seed points (Atkinson's union-find refinement).
    pub fn minimal_blocks(&self, a: usize, b: usize) -> Result<BlockSystem, PermError> {
        blocks::minimal_blocks(self, a, b)
    }

    pub fn is_primitive(&self) -> Result<bool, PermError> {
        if !self.is_transitive() {
            return Err(PermError::NotTransitive);
        }
        for i in 1..self.degree {
            if self.minimal_blocks(0, i)?.block_count() > 1 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Action on the cells of an invariant partition, with its kernel.
    ///
    /// The kernel is the pointwise stabilizer of the cell points in the combined action
    /// on `points ∪ cells`; its generators are restricted back to the original points.
    pub fn induced_action(&self, cells: &[Vec<usize>]) -> Result<(PermGroup, PermGroup), PermError> {
        let cell_of = blocks::cell_index(self.degree, cells)?;
        let k = cells.len();
        let mut images = Vec::with_capacity(self.generators.len());
        let mut combined = Vec::with_capacity(self.generators.len());
        for g in &self.generators {
            let mut img = vec![usize::MAX; k];
            for (ci, cell) in cells.iter().enumerate() {
                let target = cell_of[g.image(cell[0])];
                if cell.iter().any(|&x| cell_of[g.image(x)] != target) {
                    return Err(PermError::NotInvariant);
                }
                img[ci] = target;
            }
            let img = Permutation::from_images(img).map_err(|_| PermError::NotInvariant)?;
            let mut both: Vec<usize> = g.images().collect();
            both.extend(img.images().map(|c| c + self.degree));
            combined.push(Permutation::from_images(both).unwrap());
            images.push(img);
        }
        let image = PermGroup::new(k, images)?;
        let block_points: Vec<usize> = (self.degree..self.degree + k).collect();
        let big = PermGroup::new(self.degree + k, combined)?;
        let stab = big.pointwise_stabilizer(&block_points);
        let kernel_gens: Vec<Permutation> = stab
            .generators()
            .iter()
            .map(|g| {
                Permutation::from_images_unchecked(g.raw()[..self.degree].to_vec())
            })
            .collect();
        let kernel_chain = StabChain::build(self.degree, &kernel_gens, &[]);
        Ok((image, PermGroup::with_chain(self.degree, kernel_gens, kernel_chain)))
    }

    /// The action on an invariant subset, relabelled `points[i] -> i`.
    pub fn restrict(&self, points: &[usize]) -> Result<PermGroup, PermError> {
        let mut index = vec![usize::MAX; self.degree];
        for (i, &p) in points.iter().enumerate() {
            if p >= self.degree {
                return Err(PermError::PointOutOfRange {
                    point: p,
                    degree: self.degree,
                });
            }
            index[p] = i;
        }
        let gens = self
            .generators
            .iter()
            .map(|g| {
                let img: Option<Vec<usize>> = points
                    .iter()
                    .map(|&p| Some(index[g.image(p)]).filter(|&i| i != usize::MAX))
                    .collect();
                img.ok_or(PermError::NotInvariant)
                    .and_then(Permutation::from_images)
            })
            .collect::<Result<Vec<_>, _>>()?;
        PermGroup::new(points.len(), gens)
    }

    /// Text form: one permutation per line in cycle notation.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for g in &self.generators {
            s.push_str(&g.to_string());
            s.push('\n');
        }
        s
    }

    pub fn from_text(text: &str, degree: usize) -> Result<Self, PermError> {
        let gens = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .map(|l| Permutation::parse_cycles(l, degree))
            .collect::<Result<Vec<_>, _>>()?;
        PermGroup::new(degree, gens)
    }
}

pub(crate) fn orbit_under(degree: usize, gens: &[Permutation], point: usize) -> Vec<usize> {
    let mut seen = vec![false; degree];
    seen[point] = true;
    let mut orbit = vec![point];
    let mut queue = VecDeque::from([point]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = g.image(x);
            if !seen[y] {
                seen[y] = true;
                orbit.push(y);
                queue.push_back(y);
            }
        }
    }
    orbit
}

pub(crate) fn orbits_under(degree: usize, gens: &[Permutation]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; degree];
    let mut out = Vec::new();
    for p in 0..degree {
        if seen[p] {
            continue;
        }
        let mut orb = orbit_under(degree, gens, p);
        for &x in &orb {
            seen[x] = true;
        }
        orb.sort_unstable();
        out.push(orb);
    }
    out
}
