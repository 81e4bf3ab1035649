//! Deterministic Schreier–Sims.

use std::collections::HashSet;

use num_bigint::BigUint;

use super::Permutation;

/// One level of a stabilizer chain.
#[derive(Clone, Debug)]
pub struct Level {
    pub base_point: usize,
    /// Strong generators fixing every earlier base point.
    pub generators: Vec<Permutation>,
    /// Orbit of `base_point` in BFS discovery order.
    pub orbit: Vec<usize>,
    transversal: Vec<Option<Permutation>>,
    inverse: Vec<Option<Permutation>>,
    /// `(point, generator index)` pairs whose Schreier generator is known to lie in the
    /// next stabilizer. Stays valid because transversal entries are never replaced.
    verified: HashSet<(usize, usize)>,
}

impl Level {
    fn new(degree: usize, base_point: usize, generators: Vec<Permutation>) -> Self {
        let mut level = Level {
            base_point,
            generators,
            orbit: Vec::new(),
            transversal: vec![None; degree],
            inverse: vec![None; degree],
            verified: HashSet::new(),
        };
        let id = Permutation::identity(degree);
        level.transversal[base_point] = Some(id.clone());
        level.inverse[base_point] = Some(id);
        level.orbit.push(base_point);
        level.extend();
        level
    }

    fn add_generator(&mut self, g: Permutation) {
        self.generators.push(g);
        self.extend();
    }

    /// Closes the orbit under the generators, keeping existing transversal entries.
    fn extend(&mut self) {
        let mut head = 0;
        while head < self.orbit.len() {
            let beta = self.orbit[head];
            head += 1;
            for s in &self.generators {
                let gamma = s.image(beta);
                if self.transversal[gamma].is_none() {
                    let u = self.transversal[beta].as_ref().unwrap().then(s);
                    self.inverse[gamma] = Some(u.inverse());
                    self.transversal[gamma] = Some(u);
                    self.orbit.push(gamma);
                }
            }
        }
    }

    /// Element mapping the base point to `point`, if `point` is in the orbit.
    pub fn representative(&self, point: usize) -> Option<&Permutation> {
        self.transversal[point].as_ref()
    }

    pub fn in_orbit(&self, point: usize) -> bool {
        self.transversal[point].is_some()
    }
}

/// A base and strong generating set with explicit transversals.
#[derive(Clone, Debug)]
pub struct StabChain {
    degree: usize,
    levels: Vec<Level>,
}

impl StabChain {
    /// Runs Schreier–Sims. The base starts with `base_hint` (duplicates dropped) and is
    /// extended by the smallest point moved by a generator that fixes the current base.
    pub fn build(degree: usize, generators: &[Permutation], base_hint: &[usize]) -> Self {
        let mut base: Vec<usize> = Vec::new();
        for &b in base_hint {
            if !base.contains(&b) {
                base.push(b);
            }
        }
        let mut strong: Vec<Permutation> = Vec::new();
        for g in generators {
            if !g.is_identity() && !strong.contains(g) {
                strong.push(g.clone());
            }
        }
        for g in &strong {
            if base.iter().all(|&b| g.image(b) == b) {
                base.push(g.first_moved().unwrap());
            }
        }
        let mut levels: Vec<Level> = base
            .iter()
            .enumerate()
            .map(|(i, &b)| {
                let gens = strong
                    .iter()
                    .filter(|g| base[..i].iter().all(|&c| g.image(c) == c))
                    .cloned()
                    .collect();
                Level::new(degree, b, gens)
            })
            .collect();

        let mut i = levels.len();
        while i > 0 {
            let lvl = i - 1;
            match first_failing_schreier_generator(&mut levels, lvl) {
                None => i -= 1,
                Some((h, j)) => {
                    if j == levels.len() {
                        let b = h.first_moved().expect("residue is not the identity");
                        levels.push(Level::new(degree, b, Vec::new()));
                    }
                    for level in &mut levels[lvl + 1..=j] {
                        level.add_generator(h.clone());
                    }
                    i = j + 1;
                }
            }
        }
        StabChain { degree, levels }
    }

    /// Chain from a base and a generating set already known to be strong for it, as
    /// produced by a complete backtrack search. No Schreier generators are checked.
    pub(crate) fn from_strong_generators(degree: usize, base: &[usize], strong: &[Permutation]) -> Self {
        let levels = base
            .iter()
            .enumerate()
            .map(|(i, &b)| {
                let gens = strong
                    .iter()
                    .filter(|g| base[..i].iter().all(|&c| g.image(c) == c))
                    .cloned()
                    .collect();
                Level::new(degree, b, gens)
            })
            .collect();
        StabChain { degree, levels }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.base_point).collect()
    }

    pub fn order(&self) -> BigUint {
        self.levels
            .iter()
            .fold(BigUint::from(1u32), |acc, l| acc * BigUint::from(l.orbit.len()))
    }

    /// Order of the stabilizer of the first `depth` base points.
    pub fn order_from(&self, depth: usize) -> BigUint {
        self.levels[depth.min(self.levels.len())..]
            .iter()
            .fold(BigUint::from(1u32), |acc, l| acc * BigUint::from(l.orbit.len()))
    }

    /// Strong generators of the stabilizer of the first `depth` base points.
    pub fn stabilizer_generators(&self, depth: usize) -> Vec<Permutation> {
        self.levels
            .get(depth)
            .map(|l| l.generators.clone())
            .unwrap_or_default()
    }

    /// Chain of the stabilizer of the first `depth` base points.
    pub fn truncated(&self, depth: usize) -> StabChain {
        StabChain {
            degree: self.degree,
            levels: self.levels[depth.min(self.levels.len())..].to_vec(),
        }
    }

    /// Strips `g` through the chain. Returns the residue and the level where it stopped
    /// (`levels.len()` if it passed every level).
    pub fn sift(&self, g: &Permutation) -> (Permutation, usize) {
        sift_from(&self.levels, g.clone(), 0)
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        if g.degree() != self.degree {
            return false;
        }
        let (h, j) = self.sift(g);
        j == self.levels.len() && h.is_identity()
    }
}

fn sift_from(levels: &[Level], mut g: Permutation, start: usize) -> (Permutation, usize) {
    for (l, level) in levels.iter().enumerate().skip(start) {
        let beta = g.image(level.base_point);
        match &level.inverse[beta] {
            None => return (g, l),
            Some(inv) => g = g.then(inv),
        }
    }
    (g, levels.len())
}

fn first_failing_schreier_generator(levels: &mut [Level], lvl: usize) -> Option<(Permutation, usize)> {
    let (upper, lower) = levels.split_at_mut(lvl + 1);
    let level = &mut upper[lvl];
    for oi in 0..level.orbit.len() {
        let beta = level.orbit[oi];
        for si in 0..level.generators.len() {
            if level.verified.contains(&(beta, si)) {
                continue;
            }
            let s = &level.generators[si];
            let gamma = s.image(beta);
            let u_beta = level.transversal[beta].as_ref().unwrap();
            let schreier = u_beta.then(s).then(level.inverse[gamma].as_ref().unwrap());
            if !schreier.is_identity() {
                let (h, j) = sift_from(lower, schreier, 0);
                if !h.is_identity() {
                    return Some((h, j + lvl + 1));
                }
            }
            level.verified.insert((beta, si));
        }
    }
    None
}
