use super::{PermError, PermGroup};

/// A partition of the points into cells, ordered by smallest member.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockSystem {
    cells: Vec<Vec<usize>>,
}

impl BlockSystem {
    pub fn from_cells(degree: usize, mut cells: Vec<Vec<usize>>) -> Result<Self, PermError> {
        for c in &mut cells {
            c.sort_unstable();
        }
        cells.sort();
        cell_index(degree, &cells)?;
        Ok(BlockSystem { cells })
    }

    pub fn cells(&self) -> &[Vec<usize>] {
        &self.cells
    }

    pub fn block_count(&self) -> usize {
        self.cells.len()
    }

    /// Size of the first cell; meaningful when [`is_uniform`](Self::is_uniform).
    pub fn block_size(&self) -> usize {
        self.cells.first().map_or(0, Vec::len)
    }

    pub fn is_uniform(&self) -> bool {
        let s = self.block_size();
        self.cells.iter().all(|c| c.len() == s)
    }

    pub fn is_invariant(&self, group: &PermGroup) -> bool {
        let Ok(index) = cell_index(group.degree(), &self.cells) else {
            return false;
        };
        group.generators().iter().all(|g| {
            self.cells.iter().all(|cell| {
                let target = index[g.image(cell[0])];
                cell.iter().all(|&x| index[g.image(x)] == target)
            })
        })
    }
}

/// Maps each point to its cell, validating that `cells` partition `0..degree`.
pub(crate) fn cell_index(degree: usize, cells: &[Vec<usize>]) -> Result<Vec<usize>, PermError> {
    let mut index = vec![usize::MAX; degree];
    for (ci, cell) in cells.iter().enumerate() {
        if cell.is_empty() {
            return Err(PermError::InvalidPartition("empty cell".into()));
        }
        for &x in cell {
            if x >= degree {
                return Err(PermError::PointOutOfRange { point: x, degree });
            }
            if index[x] != usize::MAX {
                return Err(PermError::InvalidPartition(format!("point {x} repeated")));
            }
            index[x] = ci;
        }
    }
    if let Some(x) = index.iter().position(|&c| c == usize::MAX) {
        return Err(PermError::InvalidPartition(format!("point {x} not covered")));
    }
    Ok(index)
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false when already joined. The smaller root wins.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }
}

pub(super) fn minimal_blocks(group: &PermGroup, a: usize, b: usize) -> Result<BlockSystem, PermError> {
    let n = group.degree();
    for p in [a, b] {
        if p >= n {
            return Err(PermError::PointOutOfRange { point: p, degree: n });
        }
    }
    if a == b {
        return Err(PermError::InvalidPartition("seed points must differ".into()));
    }
    if !group.is_transitive() {
        return Err(PermError::NotTransitive);
    }
    let mut uf = UnionFind::new(n);
    uf.union(a, b);
    let mut pending = vec![(a, b)];
    while let Some((x, y)) = pending.pop() {
        for g in group.generators() {
            let (gx, gy) = (g.image(x), g.image(y));
            let (rx, ry) = (uf.find(gx), uf.find(gy));
            if uf.union(rx, ry) {
                pending.push((rx, ry));
            }
        }
    }
    let mut by_root: Vec<Vec<usize>> = vec![Vec::new(); n];
    for x in 0..n {
        let r = uf.find(x);
        by_root[r].push(x);
    }
    let cells: Vec<Vec<usize>> = by_root.into_iter().filter(|c| !c.is_empty()).collect();
    BlockSystem::from_cells(n, cells)
}
