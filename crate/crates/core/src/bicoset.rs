//! Bi-coset graphs `B(G, L, R; D)`.
//!
//! `W` is the set of right cosets of `L`, `U` the right cosets of `R`, and `Lg ~ Rdg`
//! for `d` in `D = ⋃ R d_i L`. `D` is never materialized: it is given by double-coset
//! representatives, and edges are obtained by closing the seed edges `(L, R d_i)` under
//! the right-multiplication action of the generators of `G`.

use std::collections::hash_map::DefaultHasher;
use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt::Debug;
use std::hash::{Hash, Hasher};

use num_bigint::BigUint;
use num_traits::Zero;
use thiserror::Error;

use crate::bigraph::{BipartiteGraph, GraphError};
use crate::permgroup::{PermError, PermGroup, Permutation, StabChain};

pub const DEFAULT_COSET_BOUND: usize = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BiCosetError {
    #[error("coset enumeration exceeded the bound of {0} cosets")]
    BoundExceeded(usize),
    #[error("membership oracle is inconsistent: {0}")]
    InconsistentOracle(String),
    #[error("no double-coset representatives given")]
    NoRepresentatives,
    #[error("action is not transitive on both parts")]
    NotSemitransitive,
    #[error("no group element joins the chosen vertices")]
    NoConnectingElement,
    #[error("action does not preserve the graph: {0}")]
    ActionMismatch(String),
    #[error("group order is unknown and no faithful representation is available")]
    OrderUnknown,
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Perm(#[from] PermError),
}

/// Which designated subgroup a coset space refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SubgroupTag {
    L,
    R,
}

/// Abstract access to a finite group with two designated subgroups `L` and `R`.
pub trait GroupHandle {
    type Elem: Clone + Eq + Hash + Debug;

    fn identity(&self) -> Self::Elem;
    fn multiply(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn invert(&self, a: &Self::Elem) -> Self::Elem;
    fn generators(&self) -> Vec<Self::Elem>;
    fn subgroup_generators(&self, tag: SubgroupTag) -> Vec<Self::Elem>;
    fn contains(&self, tag: SubgroupTag, e: &Self::Elem) -> bool;

    /// A value constant on each right coset of the subgroup. Elements with different
    /// keys are never compared by membership test.
    fn coset_key(&self, _tag: SubgroupTag, _e: &Self::Elem) -> u64 {
        0
    }

    fn order(&self) -> Option<BigUint> {
        None
    }

    fn faithful_permutation(&self, _e: &Self::Elem) -> Option<Permutation> {
        None
    }
}

#[derive(Clone, Copy, Debug)]
pub struct BiCosetConfig {
    pub coset_bound: usize,
}

impl Default for BiCosetConfig {
    fn default() -> Self {
        BiCosetConfig {
            coset_bound: DEFAULT_COSET_BOUND,
        }
    }
}

/// Right cosets `H g` with representatives, a Schreier vector, and the action of
/// each generator of `G`.
#[derive(Clone, Debug)]
pub struct CosetSpace<E> {
    pub tag: SubgroupTag,
    pub representatives: Vec<E>,
    /// `(parent coset, generator index)` for each non-initial representative.
    pub schreier: Vec<Option<(usize, usize)>>,
    /// Action of `G`'s generators on coset indices.
    pub generator_action: Vec<Permutation>,
    buckets: HashMap<u64, Vec<usize>>,
}

impl<E: Clone + Eq + Hash + Debug> CosetSpace<E> {
    pub fn len(&self) -> usize {
        self.representatives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.representatives.is_empty()
    }

    /// Index of the coset containing `e`.
    pub fn locate<G: GroupHandle<Elem = E>>(&self, group: &G, e: &E) -> Option<usize> {
        let key = group.coset_key(self.tag, e);
        self.buckets.get(&key)?.iter().copied().find(|&i| {
            let probe = group.multiply(e, &group.invert(&self.representatives[i]));
            group.contains(self.tag, &probe)
        })
    }

    /// Orbits of the subgroup generated by `elems` acting on the cosets.
    pub fn orbits_of<G: GroupHandle<Elem = E>>(&self, group: &G, elems: &[E]) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut orbit = self.orbit_of(group, elems, start);
            for &i in &orbit {
                seen[i] = true;
            }
            orbit.sort_unstable();
            out.push(orbit);
        }
        out
    }

    /// Orbit of coset `start` under the subgroup generated by `elems`.
    pub fn orbit_of<G: GroupHandle<Elem = E>>(&self, group: &G, elems: &[E], start: usize) -> Vec<usize> {
        let mut seen = HashSet::from([start]);
        let mut orbit = vec![start];
        let mut head = 0;
        while head < orbit.len() {
            let c = orbit[head];
            head += 1;
            for x in elems {
                let img = self
                    .locate(group, &group.multiply(&self.representatives[c], x))
                    .expect("coset space is closed under G");
                if seen.insert(img) {
                    orbit.push(img);
                }
            }
        }
        orbit
    }
}

/// Enumerates `[G : H]` by breadth-first search from the identity coset.
pub fn enumerate_cosets<G: GroupHandle>(
    group: &G,
    tag: SubgroupTag,
    config: &BiCosetConfig,
) -> Result<CosetSpace<G::Elem>, BiCosetError> {
    for h in group.subgroup_generators(tag) {
        if !group.contains(tag, &h) {
            return Err(BiCosetError::InconsistentOracle(format!(
                "subgroup generator {h:?} rejected by {tag:?} membership"
            )));
        }
    }
    let gens = group.generators();
    let id = group.identity();
    let mut space = CosetSpace {
        tag,
        representatives: vec![id.clone()],
        schreier: vec![None],
        generator_action: Vec::new(),
        buckets: HashMap::from([(group.coset_key(tag, &id), vec![0])]),
    };
    let mut images: Vec<Vec<usize>> = vec![Vec::new(); gens.len()];
    let mut head = 0;
    while head < space.len() {
        let i = head;
        head += 1;
        for (gi, gen) in gens.iter().enumerate() {
            let cand = group.multiply(&space.representatives[i], gen);
            let j = match space.locate(group, &cand) {
                Some(j) => j,
                None => {
                    if space.len() >= config.coset_bound {
                        return Err(BiCosetError::BoundExceeded(config.coset_bound));
                    }
                    let j = space.len();
                    space
                        .buckets
                        .entry(group.coset_key(tag, &cand))
                        .or_default()
                        .push(j);
                    space.representatives.push(cand);
                    space.schreier.push(Some((i, gi)));
                    j
                }
            };
            images[gi].push(j);
        }
    }
    for (gi, img) in images.into_iter().enumerate() {
        let perm = Permutation::from_images(img).map_err(|_| {
            BiCosetError::InconsistentOracle(format!("generator {gi} does not permute the cosets"))
        })?;
        space.generator_action.push(perm);
    }
    for h in group.subgroup_generators(tag) {
        if space.locate(group, &h) != Some(0) {
            return Err(BiCosetError::InconsistentOracle(format!(
                "subgroup generator {h:?} moves the trivial coset"
            )));
        }
    }
    Ok(space)
}

/// A bi-coset graph together with the action of `G` on `W ∪ U` (W first).
#[derive(Clone, Debug)]
pub struct BiCosetGraphResult<E> {
    pub graph: BipartiteGraph,
    pub action: PermGroup,
    pub w_space: CosetSpace<E>,
    pub u_space: CosetSpace<E>,
    pub d_reps: Vec<E>,
}

pub fn build<G: GroupHandle>(
    group: &G,
    d_reps: &[G::Elem],
    config: &BiCosetConfig,
) -> Result<BiCosetGraphResult<G::Elem>, BiCosetError> {
    if d_reps.is_empty() {
        return Err(BiCosetError::NoRepresentatives);
    }
    let w_space = enumerate_cosets(group, SubgroupTag::L, config)?;
    let u_space = enumerate_cosets(group, SubgroupTag::R, config)?;
    let (n_w, n_u) = (w_space.len(), u_space.len());
    let perms: Vec<Permutation> = w_space
        .generator_action
        .iter()
        .zip(&u_space.generator_action)
        .map(|(pw, pu)| {
            let imgs: Vec<usize> = pw.images().chain(pu.images().map(|x| x + n_w)).collect();
            Permutation::from_images(imgs).expect("disjoint union of permutations")
        })
        .collect();

    let mut edges: HashSet<(usize, usize)> = HashSet::new();
    let mut queue = VecDeque::new();
    for d in d_reps {
        let u = u_space
            .locate(group, d)
            .expect("coset space covers every element");
        if edges.insert((0, u)) {
            queue.push_back((0, u));
        }
    }
    while let Some((w, u)) = queue.pop_front() {
        for g in &perms {
            let e = (g.image(w), g.image(n_w + u) - n_w);
            if edges.insert(e) {
                queue.push_back(e);
            }
        }
    }
    let mut edge_list: Vec<(usize, usize)> = edges.into_iter().collect();
    edge_list.sort_unstable();
    let graph = BipartiteGraph::new(n_w, n_u, &edge_list)?;
    let action = PermGroup::new(n_w + n_u, perms)?;
    Ok(BiCosetGraphResult {
        graph,
        action,
        w_space,
        u_space,
        d_reps: d_reps.to_vec(),
    })
}

/// Degrees predicted from the group data alone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeContract {
    /// `|D| / |R|`, the number of right cosets of `R` in `D`.
    pub w_degree: usize,
    /// `|D| / |L|`, the number of right cosets of `L` in `D^-1`.
    pub u_degree: usize,
    /// Number of distinct double cosets among the representatives.
    pub double_cosets: usize,
    /// `|L| = |R|`, equivalently `|G:L| = |G:R|`.
    pub regular: bool,
}

/// Computes `|D|/|R|` as `Σ |L : L ∩ R^d|` (length of the `L`-orbit of `Rd` on `[G:R]`)
/// and `|D|/|L|` as `Σ |R : R ∩ L^(d^-1)|` (length of the `R`-orbit of `L d^-1` on `[G:L]`),
/// summed over distinct double cosets.
pub fn degree_contract<G: GroupHandle>(
    group: &G,
    w_space: &CosetSpace<G::Elem>,
    u_space: &CosetSpace<G::Elem>,
    d_reps: &[G::Elem],
) -> Result<DegreeContract, BiCosetError> {
    if d_reps.is_empty() {
        return Err(BiCosetError::NoRepresentatives);
    }
    let l_gens = group.subgroup_generators(SubgroupTag::L);
    let r_gens = group.subgroup_generators(SubgroupTag::R);
    let mut covered: HashSet<usize> = HashSet::new();
    let (mut w_degree, mut u_degree, mut double_cosets) = (0, 0, 0);
    for d in d_reps {
        let rd = u_space.locate(group, d).ok_or_else(|| {
            BiCosetError::InconsistentOracle("representative outside the coset space".into())
        })?;
        if covered.contains(&rd) {
            continue;
        }
        let l_orbit = u_space.orbit_of(group, &l_gens, rd);
        covered.extend(l_orbit.iter().copied());
        let ld = w_space
            .locate(group, &group.invert(d))
            .expect("coset space covers every element");
        let r_orbit = w_space.orbit_of(group, &r_gens, ld);
        w_degree += l_orbit.len();
        u_degree += r_orbit.len();
        double_cosets += 1;
    }
    Ok(DegreeContract {
        w_degree,
        u_degree,
        double_cosets,
        regular: w_space.len() == u_space.len(),
    })
}

/// Whether `G = <D^-1 D>`, decided by transitivity of `<L, d_i^-1 r d_j>` on both coset spaces.
pub fn connectivity_criterion<G: GroupHandle>(
    group: &G,
    w_space: &CosetSpace<G::Elem>,
    u_space: &CosetSpace<G::Elem>,
    d_reps: &[G::Elem],
) -> Result<bool, BiCosetError> {
    if d_reps.is_empty() {
        return Err(BiCosetError::NoRepresentatives);
    }
    let mut gens = group.subgroup_generators(SubgroupTag::L);
    let mut r_elems = vec![group.identity()];
    r_elems.extend(group.subgroup_generators(SubgroupTag::R));
    for di in d_reps {
        let di_inv = group.invert(di);
        for dj in d_reps {
            for r in &r_elems {
                gens.push(group.multiply(&group.multiply(&di_inv, r), dj));
            }
        }
    }
    let on_w = w_space.orbit_of(group, &gens, 0).len() == w_space.len();
    let on_u = u_space.orbit_of(group, &gens, 0).len() == u_space.len();
    Ok(on_w && on_u)
}

/// `|G| / |image of G on V|`.
pub fn kernel_of_action<G: GroupHandle>(
    result: &BiCosetGraphResult<G::Elem>,
    group: &G,
) -> Result<BigUint, BiCosetError> {
    let order = match group.order() {
        Some(o) => o,
        None => faithful_group(group)?.order(),
    };
    let image = result.action.order();
    if image.is_zero() || &order % &image != BigUint::zero() {
        return Err(BiCosetError::InconsistentOracle(
            "image order does not divide |G|".into(),
        ));
    }
    Ok(order / image)
}

/// `|Core_G(L) ∩ Core_G(R)|` from a faithful representation: the pointwise stabilizer
/// of all coset points in the combined action on `points ∪ [G:L] ∪ [G:R]`.
pub fn core_intersection_order<G: GroupHandle>(
    result: &BiCosetGraphResult<G::Elem>,
    group: &G,
) -> Result<BigUint, BiCosetError> {
    let gens = group.generators();
    let faithful: Vec<Permutation> = gens
        .iter()
        .map(|g| group.faithful_permutation(g).ok_or(BiCosetError::OrderUnknown))
        .collect::<Result<_, _>>()?;
    let deg = faithful.first().map_or(0, Permutation::degree);
    let nv = result.graph.vertex_count();
    let combined: Vec<Permutation> = faithful
        .iter()
        .zip(result.action.generators())
        .map(|(f, a)| {
            let imgs: Vec<usize> = f.images().chain(a.images().map(|x| x + deg)).collect();
            Permutation::from_images(imgs).expect("disjoint union of permutations")
        })
        .collect();
    let big = PermGroup::new(deg + nv, combined)?;
    let coset_points: Vec<usize> = (deg..deg + nv).collect();
    Ok(big.pointwise_stabilizer(&coset_points).order())
}

fn faithful_group<G: GroupHandle>(group: &G) -> Result<PermGroup, BiCosetError> {
    let gens: Vec<Permutation> = group
        .generators()
        .iter()
        .map(|g| group.faithful_permutation(g).ok_or(BiCosetError::OrderUnknown))
        .collect::<Result<_, _>>()?;
    let deg = gens.first().map_or(0, Permutation::degree);
    Ok(PermGroup::new(deg, gens)?)
}

/// Checks that `action` preserves the parts and the edge set, then whether one edge orbit
/// covers all edges.
pub fn is_edge_transitive(graph: &BipartiteGraph, action: &PermGroup) -> Result<bool, BiCosetError> {
    let n_w = graph.n_w();
    if action.degree() != graph.vertex_count() {
        return Err(BiCosetError::ActionMismatch(format!(
            "action degree {} vs {} vertices",
            action.degree(),
            graph.vertex_count()
        )));
    }
    for (gi, g) in action.generators().iter().enumerate() {
        if (0..n_w).any(|w| g.image(w) >= n_w) {
            return Err(BiCosetError::ActionMismatch(format!("generator {gi} moves W into U")));
        }
        for (w, u) in graph.edges() {
            if !graph.has_edge(g.image(w), g.image(n_w + u) - n_w) {
                return Err(BiCosetError::ActionMismatch(format!(
                    "generator {gi} maps edge ({w}, {u}) to a non-edge"
                )));
            }
        }
    }
    let Some(first) = graph.edges().next() else {
        return Ok(true);
    };
    let mut seen = HashSet::from([first]);
    let mut queue = VecDeque::from([first]);
    while let Some((w, u)) = queue.pop_front() {
        for g in action.generators() {
            let e = (g.image(w), g.image(n_w + u) - n_w);
            if seen.insert(e) {
                queue.push_back(e);
            }
        }
    }
    Ok(seen.len() == graph.edge_count())
}

/// Stabilizer data recovering a semitransitive edge-transitive graph as a bi-coset graph.
#[derive(Clone, Debug)]
pub struct Decomposition {
    /// Generators of the stabilizer of the W-vertex.
    pub l_gens: Vec<Permutation>,
    /// Generators of the stabilizer of the U-vertex.
    pub r_gens: Vec<Permutation>,
    /// `g` with `u^g` adjacent to `w`; `D = R g L`.
    pub d_rep: Permutation,
}

/// `w` is a W-index and `u` a U-index of `graph`.
pub fn from_semitransitive(
    graph: &BipartiteGraph,
    action: &PermGroup,
    u: usize,
    w: usize,
) -> Result<Decomposition, BiCosetError> {
    let n_w = graph.n_w();
    if !is_edge_transitive(graph, action)? {
        return Err(BiCosetError::ActionMismatch("action is not edge-transitive".into()));
    }
    if w >= n_w || u >= graph.n_u() {
        return Err(BiCosetError::Graph(GraphError::InvalidPartition(
            "vertex out of range".into(),
        )));
    }
    let w_orbit = action.orbit(w);
    let u_orbit = action.orbit(n_w + u);
    if w_orbit.len() != n_w || u_orbit.len() != graph.n_u() {
        return Err(BiCosetError::NotSemitransitive);
    }
    let l_gens = action.pointwise_stabilizer(&[w]).generators().to_vec();
    let r_gens = action.pointwise_stabilizer(&[n_w + u]).generators().to_vec();
    let target = *graph
        .w_neighbors(w)
        .first()
        .ok_or(BiCosetError::NoConnectingElement)?;
    let d_rep = transversal_element(action, n_w + u, n_w + target)
        .ok_or(BiCosetError::NoConnectingElement)?;
    Ok(Decomposition { l_gens, r_gens, d_rep })
}

fn transversal_element(group: &PermGroup, from: usize, to: usize) -> Option<Permutation> {
    let n = group.degree();
    let mut word: Vec<Option<Permutation>> = vec![None; n];
    word[from] = Some(Permutation::identity(n));
    let mut queue = VecDeque::from([from]);
    while let Some(x) = queue.pop_front() {
        if x == to {
            return word[x].clone();
        }
        for g in group.generators() {
            let y = g.image(x);
            if word[y].is_none() {
                word[y] = Some(word[x].as_ref().unwrap().then(g));
                queue.push_back(y);
            }
        }
    }
    None
}

/// A permutation group with subgroups `L` and `R`, each with its own stabilizer chain.
pub struct PermGroupHandle {
    group: PermGroup,
    l: PermGroup,
    r: PermGroup,
}

impl PermGroupHandle {
    pub fn new(group: PermGroup, l_gens: Vec<Permutation>, r_gens: Vec<Permutation>) -> Result<Self, BiCosetError> {
        let l = PermGroup::new(group.degree(), l_gens)?;
        let r = PermGroup::new(group.degree(), r_gens)?;
        Ok(PermGroupHandle { group, l, r })
    }

    pub fn group(&self) -> &PermGroup {
        &self.group
    }

    pub fn subgroup(&self, tag: SubgroupTag) -> &PermGroup {
        match tag {
            SubgroupTag::L => &self.l,
            SubgroupTag::R => &self.r,
        }
    }
}

/// The element of `H g` whose images of `H`'s base are lexicographically least.
pub fn canonical_coset_rep(chain: &StabChain, g: &Permutation) -> Permutation {
    let mut g = g.clone();
    for level in chain.levels() {
        let best = *level
            .orbit
            .iter()
            .min_by_key(|&&x| g.image(x))
            .expect("orbit contains the base point");
        g = level.representative(best).unwrap().then(&g);
    }
    g
}

impl GroupHandle for PermGroupHandle {
    type Elem = Permutation;

    fn identity(&self) -> Permutation {
        Permutation::identity(self.group.degree())
    }

    fn multiply(&self, a: &Permutation, b: &Permutation) -> Permutation {
        a * b
    }

    fn invert(&self, a: &Permutation) -> Permutation {
        a.inverse()
    }

    fn generators(&self) -> Vec<Permutation> {
        self.group.generators().to_vec()
    }

    fn subgroup_generators(&self, tag: SubgroupTag) -> Vec<Permutation> {
        self.subgroup(tag).generators().to_vec()
    }

    fn contains(&self, tag: SubgroupTag, e: &Permutation) -> bool {
        self.subgroup(tag).contains(e)
    }

    fn coset_key(&self, tag: SubgroupTag, e: &Permutation) -> u64 {
        let rep = canonical_coset_rep(self.subgroup(tag).chain(), e);
        let mut h = DefaultHasher::new();
        rep.hash(&mut h);
        h.finish()
    }

    fn order(&self) -> Option<BigUint> {
        Some(self.group.order())
    }

    fn faithful_permutation(&self, e: &Permutation) -> Option<Permutation> {
        Some(e.clone())
    }
}
