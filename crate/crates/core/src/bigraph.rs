//! Bipartite graphs with parts `W` and `U`, and the quotient, expansion and
//! bi-complement constructions.
//!
//! Vertex numbering in the combined view puts `W` first: `w` is `w`, `u` is `n_w + u`.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {index} out of range on side {side:?} (size {size})")]
    OutOfRange { side: Side, index: usize, size: usize },
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("edges not sorted at line {0}")]
    Unsorted(usize),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    W,
    U,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BipartiteGraph {
    n_w: usize,
    n_u: usize,
    adj: Vec<Vec<usize>>,
}

/// Disjoint cover of one side, cells sorted and ordered by smallest member.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexPartition {
    side: Side,
    cells: Vec<Vec<usize>>,
}

impl VertexPartition {
    pub fn new(side: Side, size: usize, mut cells: Vec<Vec<usize>>) -> Result<Self, GraphError> {
        let mut seen = vec![false; size];
        for cell in &mut cells {
            if cell.is_empty() {
                return Err(GraphError::InvalidPartition("empty cell".into()));
            }
            cell.sort_unstable();
            for &v in cell.iter() {
                if v >= size {
                    return Err(GraphError::OutOfRange { side, index: v, size });
                }
                if std::mem::replace(&mut seen[v], true) {
                    return Err(GraphError::InvalidPartition(format!("vertex {v} repeated")));
                }
            }
        }
        if let Some(v) = seen.iter().position(|s| !s) {
            return Err(GraphError::InvalidPartition(format!("vertex {v} not covered")));
        }
        cells.sort_by_key(|c| c[0]);
        Ok(VertexPartition { side, cells })
    }

    pub fn singletons(side: Side, size: usize) -> Self {
        VertexPartition {
            side,
            cells: (0..size).map(|v| vec![v]).collect(),
        }
    }

    pub fn whole(side: Side, size: usize) -> Self {
        VertexPartition {
            side,
            cells: if size == 0 { vec![] } else { vec![(0..size).collect()] },
        }
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn cells(&self) -> &[Vec<usize>] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    fn index(&self, size: usize) -> Vec<usize> {
        let mut idx = vec![0; size];
        for (c, cell) in self.cells.iter().enumerate() {
            for &v in cell {
                idx[v] = c;
            }
        }
        idx
    }
}

/// Per-vertex degrees on both sides.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Degrees {
    pub w: Vec<usize>,
    pub u: Vec<usize>,
}

impl Degrees {
    /// Every W-vertex has one degree and every U-vertex has one degree.
    pub fn is_biregular(&self) -> bool {
        self.w.windows(2).all(|p| p[0] == p[1]) && self.u.windows(2).all(|p| p[0] == p[1])
    }

    /// All vertices share one degree.
    pub fn is_regular(&self) -> bool {
        let mut all = self.w.iter().chain(&self.u);
        match all.next() {
            None => true,
            Some(d) => all.all(|x| x == d),
        }
    }

    pub fn w_degree(&self) -> Option<usize> {
        uniform(&self.w)
    }

    pub fn u_degree(&self) -> Option<usize> {
        uniform(&self.u)
    }
}

fn uniform(v: &[usize]) -> Option<usize> {
    let first = *v.first()?;
    v.iter().all(|&x| x == first).then_some(first)
}

impl BipartiteGraph {
    /// Builds a graph from `(w, u)` pairs; duplicates are rejected.
    pub fn new(n_w: usize, n_u: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut adj = vec![Vec::new(); n_w];
        for &(w, u) in edges {
            if w >= n_w {
                return Err(GraphError::OutOfRange { side: Side::W, index: w, size: n_w });
            }
            if u >= n_u {
                return Err(GraphError::OutOfRange { side: Side::U, index: u, size: n_u });
            }
            adj[w].push(u);
        }
        for (w, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(pair) = list.windows(2).find(|p| p[0] == p[1]) {
                return Err(GraphError::DuplicateEdge(w, pair[0]));
            }
        }
        Ok(BipartiteGraph { n_w, n_u, adj })
    }

    /// Builds from adjacency lists, sorting and dropping duplicates.
    pub fn from_adjacency(n_u: usize, mut adj: Vec<Vec<usize>>) -> Result<Self, GraphError> {
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
            if let Some(&u) = list.iter().find(|&&u| u >= n_u) {
                return Err(GraphError::OutOfRange { side: Side::U, index: u, size: n_u });
            }
        }
        Ok(BipartiteGraph { n_w: adj.len(), n_u, adj })
    }

    pub fn complete(n_w: usize, n_u: usize) -> Self {
        BipartiteGraph {
            n_w,
            n_u,
            adj: vec![(0..n_u).collect(); n_w],
        }
    }

    pub fn n_w(&self) -> usize {
        self.n_w
    }

    pub fn n_u(&self) -> usize {
        self.n_u
    }

    pub fn vertex_count(&self) -> usize {
        self.n_w + self.n_u
    }

    pub fn side_size(&self, side: Side) -> usize {
        match side {
            Side::W => self.n_w,
            Side::U => self.n_u,
        }
    }

    pub fn w_neighbors(&self, w: usize) -> &[usize] {
        &self.adj[w]
    }

    /// Sorted W-neighbors of every U-vertex.
    pub fn u_adjacency(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.n_u];
        for (w, list) in self.adj.iter().enumerate() {
            for &u in list {
                out[u].push(w);
            }
        }
        out
    }

    pub fn has_edge(&self, w: usize, u: usize) -> bool {
        self.adj[w].binary_search(&u).is_ok()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum()
    }

    /// Edges `(w, u)` in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(w, l)| l.iter().map(move |&u| (w, u)))
    }

    /// Adjacency of the combined vertex set, `W` first.
    pub fn combined_adjacency(&self) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = self
            .adj
            .iter()
            .map(|l| l.iter().map(|&u| self.n_w + u).collect())
            .collect();
        out.extend(self.u_adjacency());
        out
    }

    pub fn degrees(&self) -> Degrees {
        let mut u = vec![0; self.n_u];
        for list in &self.adj {
            for &x in list {
                u[x] += 1;
            }
        }
        Degrees {
            w: self.adj.iter().map(Vec::len).collect(),
            u,
        }
    }

    /// Cells are adjacent when some edge joins a member of each.
    pub fn quotient(&self, pw: &VertexPartition, pu: &VertexPartition) -> Result<BipartiteGraph, GraphError> {
        if pw.side != Side::W || pu.side != Side::U {
            return Err(GraphError::InvalidPartition("partition sides must be (W, U)".into()));
        }
        // revalidate against this graph's sizes
        let pw = VertexPartition::new(Side::W, self.n_w, pw.cells.clone())?;
        let pu = VertexPartition::new(Side::U, self.n_u, pu.cells.clone())?;
        let wi = pw.index(self.n_w);
        let ui = pu.index(self.n_u);
        let mut adj = vec![Vec::new(); pw.len()];
        for (w, u) in self.edges() {
            adj[wi[w]].push(ui[u]);
        }
        BipartiteGraph::from_adjacency(pu.len(), adj)
    }

    /// Replaces each U-vertex `u` by `p` copies `(u, i)` with index `p*u + i`.
    pub fn expand(&self, p: usize) -> BipartiteGraph {
        let adj = self
            .adj
            .iter()
            .map(|l| l.iter().flat_map(|&u| (0..p).map(move |i| p * u + i)).collect())
            .collect();
        BipartiteGraph {
            n_w: self.n_w,
            n_u: self.n_u * p,
            adj,
        }
    }

    pub fn bicomplement(&self) -> BipartiteGraph {
        let adj = self
            .adj
            .iter()
            .map(|l| (0..self.n_u).filter(|u| l.binary_search(u).is_err()).collect())
            .collect();
        BipartiteGraph {
            n_w: self.n_w,
            n_u: self.n_u,
            adj,
        }
    }

    /// Classes of vertices on one side with identical neighborhoods.
    pub fn twin_classes(&self, side: Side) -> VertexPartition {
        let lists = match side {
            Side::W => self.adj.clone(),
            Side::U => self.u_adjacency(),
        };
        let mut buckets: HashMap<&[usize], Vec<usize>> = HashMap::new();
        for (v, l) in lists.iter().enumerate() {
            buckets.entry(l.as_slice()).or_default().push(v);
        }
        let cells = buckets.into_values().collect();
        VertexPartition::new(side, lists.len(), cells).expect("twin classes partition the side")
    }

    pub fn has_twins(&self, side: Side) -> bool {
        self.twin_classes(side).len() < self.side_size(side)
    }

    pub fn is_connected(&self) -> bool {
        let n = self.vertex_count();
        if n <= 1 {
            return true;
        }
        let adj = self.combined_adjacency();
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut queue = VecDeque::from([0]);
        let mut count = 1;
        while let Some(v) = queue.pop_front() {
            for &x in &adj[v] {
                if !seen[x] {
                    seen[x] = true;
                    count += 1;
                    queue.push_back(x);
                }
            }
        }
        count == n
    }

    /// Relabels with `w -> w_map[w]` and `u -> u_map[u]`.
    pub fn relabel(&self, w_map: &[usize], u_map: &[usize]) -> Result<BipartiteGraph, GraphError> {
        let edges: Vec<(usize, usize)> = self.edges().map(|(w, u)| (w_map[w], u_map[u])).collect();
        BipartiteGraph::new(self.n_w, self.n_u, &edges)
    }

    /// Serializes in the `ssg-bipartite 1` text format.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "ssg-bipartite 1");
        let _ = writeln!(s, "parts {} {}", self.n_w, self.n_u);
        let _ = writeln!(s, "edges {}", self.edge_count());
        for (w, u) in self.edges() {
            let _ = writeln!(s, "{w} {u}");
        }
        s
    }

    pub fn from_text(text: &str) -> Result<BipartiteGraph, GraphError> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim_end_matches('\r')));
        let perr = |line: usize, message: &str| GraphError::Parse {
            line,
            message: message.to_string(),
        };
        let (ln, header) = lines.next().ok_or_else(|| perr(1, "empty input"))?;
        if header != "ssg-bipartite 1" {
            return Err(perr(ln, "expected header `ssg-bipartite 1`"));
        }
        let (ln, parts) = lines.next().ok_or_else(|| perr(2, "missing parts line"))?;
        let nums = parse_keyed(parts, "parts", 2).ok_or_else(|| perr(ln, "expected `parts <n_w> <n_u>`"))?;
        let (n_w, n_u) = (nums[0], nums[1]);
        let (ln, edges_line) = lines.next().ok_or_else(|| perr(3, "missing edges line"))?;
        let m = parse_keyed(edges_line, "edges", 1).ok_or_else(|| perr(ln, "expected `edges <m>`"))?[0];
        let mut edges = Vec::with_capacity(m);
        let mut prev: Option<(usize, usize)> = None;
        for (ln, line) in lines.by_ref() {
            if line.is_empty() {
                continue;
            }
            let nums: Vec<usize> = line
                .split(' ')
                .map(|t| t.parse::<usize>())
                .collect::<Result<_, _>>()
                .map_err(|_| perr(ln, "expected `<w> <u>`"))?;
            if nums.len() != 2 {
                return Err(perr(ln, "expected `<w> <u>`"));
            }
            let e = (nums[0], nums[1]);
            if e.0 >= n_w {
                return Err(GraphError::OutOfRange { side: Side::W, index: e.0, size: n_w });
            }
            if e.1 >= n_u {
                return Err(GraphError::OutOfRange { side: Side::U, index: e.1, size: n_u });
            }
            if let Some(pe) = prev {
                if pe == e {
                    return Err(GraphError::DuplicateEdge(e.0, e.1));
                }
                if pe > e {
                    return Err(GraphError::Unsorted(ln));
                }
            }
            prev = Some(e);
            edges.push(e);
        }
        if edges.len() != m {
            return Err(perr(0, &format!("edge count {} does not match header {m}", edges.len())));
        }
        BipartiteGraph::new(n_w, n_u, &edges)
    }
}

fn parse_keyed(line: &str, key: &str, count: usize) -> Option<Vec<usize>> {
    let mut toks = line.split(' ');
    if toks.next()? != key {
        return None;
    }
    let nums: Vec<usize> = toks.map(|t| t.parse().ok()).collect::<Option<_>>()?;
    (nums.len() == count).then_some(nums)
}
