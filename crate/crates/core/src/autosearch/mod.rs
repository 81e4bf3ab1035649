//! Automorphism groups, canonical forms and semisymmetry verdicts for bipartite graphs,
//! by individualization and refinement.

mod partition;

use std::collections::{HashSet, VecDeque};

use num_bigint::BigUint;
use serde::Serialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::bicoset::{self, BiCosetError};
use crate::bigraph::{BipartiteGraph, Side};
use crate::permgroup::{orbit_under, PermGroup, Permutation, StabChain};
use partition::Partition;

pub const DEFAULT_MAX_VERTICES: usize = 256;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error("graph has {vertices} vertices, above the full-search bound of {bound}")]
    BoundExceeded { vertices: usize, bound: usize },
    #[error("coloring has {got} entries for {expected} vertices")]
    BadColoring { got: usize, expected: usize },
    #[error(transparent)]
    Witness(#[from] BiCosetError),
}

/// A bipartite graph on `W ∪ U` (W first) with a vertex coloring that automorphisms
/// must preserve.
#[derive(Clone, Debug)]
pub struct ColoredGraph {
    graph: BipartiteGraph,
    adj: Vec<Vec<usize>>,
    colors: Vec<usize>,
}

impl ColoredGraph {
    /// One color when the parts have equal size, so part swaps are allowed. Otherwise the
    /// smaller part gets color 0 and the larger color 1.
    pub fn new(graph: BipartiteGraph) -> Self {
        let (n_w, n_u) = (graph.n_w(), graph.n_u());
        let colors = if n_w == n_u {
            vec![0; n_w + n_u]
        } else {
            let (cw, cu) = if n_w < n_u { (0, 1) } else { (1, 0) };
            let mut c = vec![cw; n_w];
            c.extend(std::iter::repeat_n(cu, n_u));
            c
        };
        let adj = graph.combined_adjacency();
        ColoredGraph { graph, adj, colors }
    }

    pub fn with_colors(graph: BipartiteGraph, colors: Vec<usize>) -> Result<Self, SearchError> {
        let n = graph.vertex_count();
        if colors.len() != n {
            return Err(SearchError::BadColoring {
                got: colors.len(),
                expected: n,
            });
        }
        let adj = graph.combined_adjacency();
        Ok(ColoredGraph { graph, adj, colors })
    }

    pub fn graph(&self) -> &BipartiteGraph {
        &self.graph
    }

    pub fn vertex_count(&self) -> usize {
        self.colors.len()
    }

    pub fn colors(&self) -> &[usize] {
        &self.colors
    }

    /// Color classes in color order.
    fn color_cells(&self) -> Vec<Vec<usize>> {
        let k = self.colors.iter().max().map_or(0, |&m| m + 1);
        let mut cells = vec![Vec::new(); k];
        for (v, &c) in self.colors.iter().enumerate() {
            cells[c].push(v);
        }
        cells.retain(|c| !c.is_empty());
        cells
    }

    fn root(&self) -> Partition {
        let mut p = Partition::from_cells(self.vertex_count(), &self.color_cells());
        p.refine_all(&self.adj);
        p
    }

    fn is_automorphism(&self, matrix: &[Vec<bool>], g: &Permutation) -> bool {
        (0..self.vertex_count()).all(|v| self.colors[g.image(v)] == self.colors[v])
            && self
                .adj
                .iter()
                .enumerate()
                .all(|(x, nb)| nb.iter().all(|&y| matrix[g.image(x)][g.image(y)]))
    }

    fn matrix(&self) -> Vec<Vec<bool>> {
        let n = self.vertex_count();
        let mut m = vec![vec![false; n]; n];
        for (x, nb) in self.adj.iter().enumerate() {
            for &y in nb {
                m[x][y] = true;
            }
        }
        m
    }

    fn check_bound(&self, bound: usize) -> Result<(), SearchError> {
        if self.vertex_count() > bound {
            return Err(SearchError::BoundExceeded {
                vertices: self.vertex_count(),
                bound,
            });
        }
        Ok(())
    }
}

/// The coarsest equitable partition finer than `partition`, cells in refinement order.
pub fn refine(g: &ColoredGraph, partition: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut p = Partition::from_cells(g.vertex_count(), partition);
    p.refine_all(&g.adj);
    p.cells()
}

#[derive(Clone, Debug)]
pub struct AutResult {
    pub generators: Vec<Permutation>,
    pub order: BigUint,
    pub orbits: Vec<Vec<usize>>,
    pub group: PermGroup,
}

struct PathLevel {
    before: Partition,
    cell: Vec<usize>,
    chosen: usize,
    trace: u64,
}

struct AutSearch<'a> {
    g: &'a ColoredGraph,
    matrix: Vec<Vec<bool>>,
    path: Vec<PathLevel>,
    first_leaf: Vec<usize>,
}

impl AutSearch<'_> {
    fn leaf_map(&self, leaf: &[usize]) -> Permutation {
        let mut imgs = vec![0; leaf.len()];
        for (a, b) in self.first_leaf.iter().zip(leaf) {
            imgs[*a] = *b;
        }
        Permutation::from_images(imgs).expect("two discrete partitions give a bijection")
    }

    /// Looks for an automorphism mapping the first leaf into the subtree at `part`.
    fn find_equivalent(
        &self,
        part: Partition,
        depth: usize,
        prefix: &mut Vec<usize>,
        gens: &[Permutation],
    ) -> Option<Permutation> {
        if part.is_discrete() {
            let gamma = self.leaf_map(&part.lab);
            return self.g.is_automorphism(&self.matrix, &gamma).then_some(gamma);
        }
        let cell = part.target_cell()?;
        let fixing: Vec<Permutation> = gens
            .iter()
            .filter(|h| prefix.iter().all(|&x| h.image(x) == x))
            .cloned()
            .collect();
        let mut covered = HashSet::new();
        for &w in &cell {
            if covered.contains(&w) {
                continue;
            }
            covered.extend(orbit_under(part.len(), &fixing, w));
            let mut child = part.clone();
            if child.individualize(&self.g.adj, w) != self.path[depth].trace {
                continue;
            }
            prefix.push(w);
            let found = self.find_equivalent(child, depth + 1, prefix, gens);
            prefix.pop();
            if found.is_some() {
                return found;
            }
        }
        None
    }
}

/// Generators of the color-preserving automorphism group.
pub fn automorphism_group(g: &ColoredGraph) -> Result<AutResult, SearchError> {
    automorphism_group_bounded(g, DEFAULT_MAX_VERTICES)
}

pub fn automorphism_group_bounded(g: &ColoredGraph, bound: usize) -> Result<AutResult, SearchError> {
    g.check_bound(bound)?;
    let n = g.vertex_count();
    let mut part = g.root();
    let mut path = Vec::new();
    while let Some(cell) = part.target_cell() {
        let before = part.clone();
        let chosen = cell[0];
        let trace = part.individualize(&g.adj, chosen);
        path.push(PathLevel {
            before,
            cell,
            chosen,
            trace,
        });
    }
    let search = AutSearch {
        g,
        matrix: g.matrix(),
        path,
        first_leaf: part.lab.clone(),
    };
    let mut gens: Vec<Permutation> = Vec::new();
    for lvl in (0..search.path.len()).rev() {
        let level = &search.path[lvl];
        let mut prefix: Vec<usize> = search.path[..lvl].iter().map(|l| l.chosen).collect();
        let mut known: HashSet<usize> = orbit_under(n, &gens, level.chosen).into_iter().collect();
        for &w in &level.cell {
            if known.contains(&w) {
                continue;
            }
            let mut child = level.before.clone();
            if child.individualize(&g.adj, w) != level.trace {
                continue;
            }
            prefix.push(w);
            if let Some(gamma) = search.find_equivalent(child, lvl + 1, &mut prefix, &gens) {
                gens.push(gamma);
                known = orbit_under(n, &gens, level.chosen).into_iter().collect();
            }
            prefix.pop();
        }
    }
    // Generators found deepest level first are strong for the base along the first path.
    let base: Vec<usize> = search.path.iter().map(|l| l.chosen).collect();
    let chain = StabChain::from_strong_generators(n, &base, &gens);
    let group = PermGroup::with_chain(n, gens.clone(), chain);
    Ok(AutResult {
        order: group.order(),
        orbits: group.orbits(),
        generators: gens,
        group,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalForm {
    /// `labeling[v]` is the canonical label of vertex `v`.
    pub labeling: Vec<usize>,
    /// Sorted edges `(a, b)` with `a < b` in canonical labels.
    pub edges: Vec<(usize, usize)>,
    /// Hex SHA-256 of the canonical description.
    pub certificate: String,
}

/// Sorted relabeled edges and the labeling that produced them.
type Leaf = (Vec<(usize, usize)>, Vec<usize>);

struct CanonSearch<'a> {
    g: &'a ColoredGraph,
    best: Option<Leaf>,
}

impl CanonSearch<'_> {
    /// Vertices individualized by always taking the first vertex of the target cell.
    fn first_path(&self, part: &Partition) -> Vec<usize> {
        let mut part = part.clone();
        let mut path = Vec::new();
        while let Some(cell) = part.target_cell() {
            part.individualize(&self.g.adj, cell[0]);
            path.push(cell[0]);
        }
        path
    }

    /// `chain` describes the automorphisms fixing every vertex individualized so far.
    fn visit(&mut self, part: Partition, chain: StabChain) {
        let n = part.len();
        let Some(cell) = part.target_cell() else {
            let mut pos = vec![0; n];
            for (i, &v) in part.lab.iter().enumerate() {
                pos[v] = i;
            }
            let mut edges: Vec<(usize, usize)> = self
                .g
                .adj
                .iter()
                .enumerate()
                .flat_map(|(x, nb)| nb.iter().map(move |&y| (x, y)))
                .filter(|(x, y)| x < y)
                .map(|(x, y)| {
                    let (a, b) = (pos[x], pos[y]);
                    (a.min(b), a.max(b))
                })
                .collect();
            edges.sort_unstable();
            if self.best.as_ref().is_none_or(|(e, _)| edges < *e) {
                self.best = Some((edges, pos));
            }
            return;
        };
        let gens = chain.stabilizer_generators(0);
        let base = chain.base().first().copied().filter(|b| cell.contains(b));
        let mut reps: Vec<usize> = base.into_iter().collect();
        let mut covered: HashSet<usize> = match base {
            Some(b) => orbit_under(n, &gens, b).into_iter().collect(),
            None => HashSet::new(),
        };
        for &w in &cell {
            if covered.insert(w) {
                covered.extend(orbit_under(n, &gens, w));
                reps.push(w);
            }
        }
        for w in reps {
            let mut child = part.clone();
            child.individualize(&self.g.adj, w);
            let child_chain = if gens.is_empty() {
                chain.clone()
            } else if Some(w) == base {
                chain.truncated(1)
            } else {
                let mut hint = vec![w];
                hint.extend(self.first_path(&child));
                StabChain::build(n, &gens, &hint).truncated(1)
            };
            self.visit(child, child_chain);
        }
    }
}

/// Canonical labeling and certificate. Isomorphic colored graphs (with colors matched in
/// order) get identical certificates.
pub fn canonical_form(g: &ColoredGraph) -> Result<CanonicalForm, SearchError> {
    let aut = automorphism_group(g)?;
    let mut search = CanonSearch { g, best: None };
    search.visit(g.root(), aut.group.chain().clone());
    let (edges, labeling) = search.best.expect("the search tree has a leaf");
    let mut sizes: Vec<usize> = g.color_cells().iter().map(Vec::len).collect();
    if sizes.is_empty() {
        sizes.push(0);
    }
    let mut text = format!("vertices {}\ncells", g.vertex_count());
    for s in &sizes {
        text.push_str(&format!(" {s}"));
    }
    text.push('\n');
    for (a, b) in &edges {
        text.push_str(&format!("{a} {b}\n"));
    }
    let certificate = hex::encode(Sha256::digest(text.as_bytes()));
    Ok(CanonicalForm {
        labeling,
        edges,
        certificate,
    })
}

/// Isomorphism of bipartite graphs under the default coloring.
pub fn is_isomorphic(a: &BipartiteGraph, b: &BipartiteGraph) -> Result<bool, SearchError> {
    if a.vertex_count() != b.vertex_count() || a.edge_count() != b.edge_count() {
        return Ok(false);
    }
    let ca = canonical_form(&ColoredGraph::new(a.clone()))?;
    let cb = canonical_form(&ColoredGraph::new(b.clone()))?;
    Ok(ca.certificate == cb.certificate)
}

pub fn is_vertex_transitive(g: &BipartiteGraph) -> Result<bool, SearchError> {
    if g.edge_count() == 0 {
        return Ok(true);
    }
    let aut = automorphism_group(&ColoredGraph::new(g.clone()))?;
    Ok(aut.orbits.len() == 1)
}

/// Number of orbits of `gens` on the edges, taken as unordered pairs of combined indices.
fn edge_orbit_count(g: &BipartiteGraph, gens: &[Permutation]) -> usize {
    let n_w = g.n_w();
    let norm = |a: usize, b: usize| (a.min(b), a.max(b));
    let mut seen = HashSet::new();
    let mut orbits = 0;
    for (w, u) in g.edges() {
        let e = (w, n_w + u);
        if !seen.insert(e) {
            continue;
        }
        orbits += 1;
        let mut queue = VecDeque::from([e]);
        while let Some((a, b)) = queue.pop_front() {
            for h in gens {
                let f = norm(h.image(a), h.image(b));
                if seen.insert(f) {
                    queue.push_back(f);
                }
            }
        }
    }
    orbits
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Full,
    Certificate,
}

/// How a transitivity verdict was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Witness {
    FullAut,
    SuppliedGroup,
    TwinCertificate,
    Degrees,
    None,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SemisymVerdict {
    pub mode: Mode,
    pub regular: bool,
    /// `None` when undecided.
    pub edge_transitive: Option<bool>,
    pub edge_witness: Witness,
    pub vertex_transitive: Option<bool>,
    pub vertex_witness: Witness,
    pub semisymmetric: Option<bool>,
    pub certificate: String,
}

impl SemisymVerdict {
    pub fn is_decided(&self) -> bool {
        self.semisymmetric.is_some()
    }
}

/// Semisymmetric means regular and edge-transitive but not vertex-transitive.
///
/// Full mode computes the automorphism group. Certificate mode takes edge-transitivity
/// from `witness` and rules out vertex-transitivity when exactly one part contains twins,
/// since automorphisms map twins to twins.
pub fn semisymmetry(
    g: &BipartiteGraph,
    mode: Mode,
    witness: Option<&PermGroup>,
) -> Result<SemisymVerdict, SearchError> {
    let regular = g.degrees().is_regular();
    match mode {
        Mode::Full => {
            let aut = automorphism_group(&ColoredGraph::new(g.clone()))?;
            let et = edge_orbit_count(g, &aut.generators) <= 1;
            let vt = g.edge_count() == 0 || aut.orbits.len() == 1;
            let ss = regular && et && !vt;
            Ok(SemisymVerdict {
                mode,
                regular,
                edge_transitive: Some(et),
                edge_witness: Witness::FullAut,
                vertex_transitive: Some(vt),
                vertex_witness: Witness::FullAut,
                semisymmetric: Some(ss),
                certificate: format!(
                    "|Aut| = {}, {} vertex orbit(s), {} edge orbit(s)",
                    aut.order,
                    aut.orbits.len(),
                    edge_orbit_count(g, &aut.generators)
                ),
            })
        }
        Mode::Certificate => {
            let et = match witness {
                Some(w) => Some(bicoset::is_edge_transitive(g, w)?),
                None => None,
            };
            let (edge_transitive, edge_witness) = match et {
                Some(true) => (Some(true), Witness::SuppliedGroup),
                _ => (None, Witness::None),
            };
            if !regular {
                return Ok(SemisymVerdict {
                    mode,
                    regular,
                    edge_transitive,
                    edge_witness,
                    vertex_transitive: Some(false),
                    vertex_witness: Witness::Degrees,
                    semisymmetric: Some(false),
                    certificate: "not regular".to_string(),
                });
            }
            let (tw, tu) = (g.has_twins(Side::W), g.has_twins(Side::U));
            let twin_line = format!("W has twins: {tw}; U has twins: {tu}");
            let (vertex_transitive, vertex_witness) = if tw != tu && g.n_w() > 0 {
                (Some(false), Witness::TwinCertificate)
            } else {
                (None, Witness::None)
            };
            let semisymmetric = match (edge_transitive, vertex_transitive) {
                (Some(true), Some(false)) => Some(true),
                _ => None,
            };
            let certificate = match et {
                None => format!("{twin_line}; no witness group"),
                Some(false) => format!("{twin_line}; witness group is not edge-transitive"),
                Some(true) => format!("{twin_line}; witness group is edge-transitive"),
            };
            Ok(SemisymVerdict {
                mode,
                regular,
                edge_transitive,
                edge_witness,
                vertex_transitive,
                vertex_witness,
                semisymmetric,
                certificate,
            })
        }
    }
}
