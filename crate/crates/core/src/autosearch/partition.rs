//! Ordered partitions with label-independent refinement.
//!
//! Cells occupy contiguous ranges of `lab` and are identified by their start position.
//! Every decision depends only on positions and neighbor counts, so relabeling the graph
//! relabels the result.

use std::collections::VecDeque;

const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;
const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;

fn mix(h: u64, x: u64) -> u64 {
    (h ^ x).wrapping_mul(FNV_PRIME)
}

#[derive(Clone, Debug)]
pub(crate) struct Partition {
    pub lab: Vec<usize>,
    /// Vertex to the start of its cell.
    cell_of: Vec<usize>,
    /// Cell start to cell end (exclusive); only meaningful at starts.
    end: Vec<usize>,
    cells: usize,
}

impl Partition {
    pub fn from_cells(n: usize, cells: &[Vec<usize>]) -> Self {
        let mut p = Partition {
            lab: Vec::with_capacity(n),
            cell_of: vec![0; n],
            end: vec![0; n],
            cells: 0,
        };
        for cell in cells.iter().filter(|c| !c.is_empty()) {
            let start = p.lab.len();
            for &v in cell {
                p.cell_of[v] = start;
                p.lab.push(v);
            }
            p.end[start] = p.lab.len();
            p.cells += 1;
        }
        p
    }

    pub fn len(&self) -> usize {
        self.lab.len()
    }

    pub fn is_discrete(&self) -> bool {
        self.cells == self.lab.len()
    }

    pub fn starts(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.cells);
        let mut pos = 0;
        while pos < self.lab.len() {
            out.push(pos);
            pos = self.end[pos];
        }
        out
    }

    pub fn cells(&self) -> Vec<Vec<usize>> {
        self.starts()
            .into_iter()
            .map(|s| {
                let mut c = self.lab[s..self.end[s]].to_vec();
                c.sort_unstable();
                c
            })
            .collect()
    }

    /// First cell of minimum size among the non-singleton cells, as a sorted vertex list.
    pub fn target_cell(&self) -> Option<Vec<usize>> {
        let best = self
            .starts()
            .into_iter()
            .filter(|&s| self.end[s] - s > 1)
            .min_by_key(|&s| (self.end[s] - s, s))?;
        let mut cell = self.lab[best..self.end[best]].to_vec();
        cell.sort_unstable();
        Some(cell)
    }

    /// Splits `v` off the front of its cell and refines. Returns the refinement trace.
    pub fn individualize(&mut self, adj: &[Vec<usize>], v: usize) -> u64 {
        let s = self.cell_of[v];
        let e = self.end[s];
        debug_assert!(e - s > 1, "individualizing a singleton");
        let pos = s + self.lab[s..e].iter().position(|&x| x == v).unwrap();
        self.lab.swap(s, pos);
        self.end[s] = s + 1;
        self.end[s + 1] = e;
        for &x in &self.lab[s + 1..e] {
            self.cell_of[x] = s + 1;
        }
        self.cells += 1;
        let h = mix(mix(FNV_OFFSET, s as u64), (e - s) as u64);
        mix(h, self.refine(adj, VecDeque::from([s])))
    }

    /// Refines to the coarsest equitable partition finer than the current one, using every
    /// cell as an initial splitter.
    pub fn refine_all(&mut self, adj: &[Vec<usize>]) -> u64 {
        let queue = self.starts().into_iter().collect();
        self.refine(adj, queue)
    }

    fn refine(&mut self, adj: &[Vec<usize>], mut queue: VecDeque<usize>) -> u64 {
        let n = self.lab.len();
        let mut in_queue = vec![false; n];
        for &s in &queue {
            in_queue[s] = true;
        }
        let mut count = vec![0usize; n];
        let mut trace = FNV_OFFSET;
        while let Some(sp) = queue.pop_front() {
            in_queue[sp] = false;
            let splitter: Vec<usize> = self.lab[sp..self.end[sp]].to_vec();
            let mut touched = Vec::new();
            for &x in &splitter {
                for &y in &adj[x] {
                    if count[y] == 0 {
                        touched.push(y);
                    }
                    count[y] += 1;
                }
            }
            let mut hit: Vec<usize> = touched.iter().map(|&y| self.cell_of[y]).collect();
            hit.sort_unstable();
            hit.dedup();
            for c in hit {
                let e = self.end[c];
                if e - c == 1 {
                    continue;
                }
                let first = count[self.lab[c]];
                if self.lab[c..e].iter().all(|&x| count[x] == first) {
                    trace = mix(trace, (sp as u64) << 32 | first as u64);
                    continue;
                }
                self.lab[c..e].sort_unstable_by_key(|&x| (count[x], x));
                let mut frag_start = c;
                let mut frags = Vec::new();
                for pos in c + 1..=e {
                    if pos == e || count[self.lab[pos]] != count[self.lab[frag_start]] {
                        frags.push((frag_start, pos));
                        frag_start = pos;
                    }
                }
                trace = mix(trace, (sp as u64) << 32 | c as u64);
                for &(fs, fe) in &frags {
                    self.end[fs] = fe;
                    for &x in &self.lab[fs..fe] {
                        self.cell_of[x] = fs;
                    }
                    trace = mix(trace, (count[self.lab[fs]] as u64) << 32 | (fe - fs) as u64);
                }
                self.cells += frags.len() - 1;
                let skip_first = in_queue[c];
                for &(fs, _) in frags.iter().skip(usize::from(skip_first)) {
                    in_queue[fs] = true;
                    queue.push_back(fs);
                }
            }
            for y in touched {
                count[y] = 0;
            }
        }
        mix(trace, self.cells as u64)
    }
}
