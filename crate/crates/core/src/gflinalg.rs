//! Linear and affine algebra over GF(p) in dimension 3.
//!
//! Vectors are rows and matrices act on the right (`v -> v * m`). Points of the
//! space are indexed big-endian: `(a, b, c) -> p^2 a + p b + c`.

use std::fmt;

use thiserror::Error;

use crate::permgroup::{PermGroup, Permutation};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinAlgError {
    #[error("{0} is not an odd prime")]
    NotOddPrime(u32),
    #[error("field mismatch: p = {0} vs p = {1}")]
    FieldMismatch(u32, u32),
    #[error("matrix is singular")]
    Singular,
    #[error("exponents must be pairwise distinct mod p")]
    ExponentsNotDistinct,
    #[error("expected a subspace of dimension {expected}, got {actual}")]
    WrongDimension { expected: usize, actual: usize },
    #[error("no affine maps supplied")]
    Empty,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn check_field(p: u32) -> Result<(), LinAlgError> {
    if p > 2 && is_prime(p as u64) {
        Ok(())
    } else {
        Err(LinAlgError::NotOddPrime(p))
    }
}

#[inline]
fn add(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 + b as u64) % p as u64) as u32
}

#[inline]
fn sub(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 + p as u64 - b as u64 % p as u64) % p as u64) as u32
}

#[inline]
fn mul(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 * b as u64) % p as u64) as u32
}

fn inv(a: u32, p: u32) -> u32 {
    debug_assert!(!a.is_multiple_of(p));
    let mut result = 1u64;
    let mut base = (a % p) as u64;
    let mut e = p as u64 - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    result as u32
}

/// Reduces a signed integer into `0..p`.
pub fn residue(x: i64, p: u32) -> u32 {
    x.rem_euclid(p as i64) as u32
}

/// A row vector in GF(p)^3.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GFpVector {
    p: u32,
    coords: [u32; 3],
}

impl GFpVector {
    pub fn new(p: u32, coords: [i64; 3]) -> Self {
        GFpVector {
            p,
            coords: coords.map(|c| residue(c, p)),
        }
    }

    pub fn zero(p: u32) -> Self {
        GFpVector { p, coords: [0; 3] }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn coords(&self) -> [u32; 3] {
        self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords == [0; 3]
    }

    pub fn add(&self, other: &GFpVector) -> GFpVector {
        let p = self.p;
        GFpVector {
            p,
            coords: [0, 1, 2].map(|i| add(self.coords[i], other.coords[i], p)),
        }
    }

    pub fn scale(&self, c: u32) -> GFpVector {
        let p = self.p;
        GFpVector {
            p,
            coords: self.coords.map(|x| mul(x, c, p)),
        }
    }

    /// `self * m`.
    pub fn apply(&self, m: &GFpMatrix) -> GFpVector {
        let p = self.p;
        let mut out = [0u32; 3];
        for (j, o) in out.iter_mut().enumerate() {
            let mut acc = 0u64;
            for i in 0..3 {
                acc += self.coords[i] as u64 * m.entries[i][j] as u64;
            }
            *o = (acc % p as u64) as u32;
        }
        GFpVector { p, coords: out }
    }

    pub fn index(&self) -> usize {
        let p = self.p as usize;
        self.coords[0] as usize * p * p + self.coords[1] as usize * p + self.coords[2] as usize
    }

    pub fn from_index(p: u32, index: usize) -> GFpVector {
        let q = p as usize;
        GFpVector {
            p,
            coords: [(index / (q * q)) as u32, ((index / q) % q) as u32, (index % q) as u32],
        }
    }

    /// All p^3 vectors in index order.
    pub fn all(p: u32) -> impl Iterator<Item = GFpVector> {
        (0..(p as usize).pow(3)).map(move |i| GFpVector::from_index(p, i))
    }
}

/// A 3x3 matrix over GF(p).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GFpMatrix {
    p: u32,
    entries: [[u32; 3]; 3],
}

impl GFpMatrix {
    pub fn new(p: u32, entries: [[i64; 3]; 3]) -> Self {
        GFpMatrix {
            p,
            entries: entries.map(|row| row.map(|x| residue(x, p))),
        }
    }

    pub fn identity(p: u32) -> Self {
        Self::new(p, [[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    }

    pub fn diagonal(p: u32, d: [i64; 3]) -> Self {
        Self::new(p, [[d[0], 0, 0], [0, d[1], 0], [0, 0, d[2]]])
    }

    /// The unipotent matrix `[[1,2,2],[0,1,2],[0,0,1]]`.
    pub fn unipotent_x(p: u32) -> Self {
        Self::new(p, [[1, 2, 2], [0, 1, 2], [0, 0, 1]])
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn entries(&self) -> [[u32; 3]; 3] {
        self.entries
    }

    pub fn entry(&self, i: usize, j: usize) -> u32 {
        self.entries[i][j]
    }

    pub fn mul(&self, other: &GFpMatrix) -> GFpMatrix {
        let p = self.p;
        let mut e = [[0u32; 3]; 3];
        for (i, row) in e.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                let mut acc = 0u64;
                for k in 0..3 {
                    acc += self.entries[i][k] as u64 * other.entries[k][j] as u64;
                }
                *x = (acc % p as u64) as u32;
            }
        }
        GFpMatrix { p, entries: e }
    }

    /// Determinant by Gaussian elimination.
    #[allow(clippy::needless_range_loop)]
    pub fn det(&self) -> u32 {
        let p = self.p;
        let mut a = self.entries;
        let mut det = 1u32;
        for col in 0..3 {
            let Some(piv) = (col..3).find(|&r| a[r][col] != 0) else {
                return 0;
            };
            if piv != col {
                a.swap(piv, col);
                det = sub(0, det, p);
            }
            det = mul(det, a[col][col], p);
            let inv_piv = inv(a[col][col], p);
            for r in col + 1..3 {
                let f = mul(a[r][col], inv_piv, p);
                for c in col..3 {
                    a[r][c] = sub(a[r][c], mul(f, a[col][c], p), p);
                }
            }
        }
        det
    }

    pub fn is_invertible(&self) -> bool {
        self.det() != 0
    }

    /// Inverse by Gauss–Jordan elimination.
    pub fn inverse(&self) -> Result<GFpMatrix, LinAlgError> {
        let p = self.p;
        let mut a = self.entries;
        let mut b = GFpMatrix::identity(p).entries;
        for col in 0..3 {
            let piv = (col..3).find(|&r| a[r][col] != 0).ok_or(LinAlgError::Singular)?;
            a.swap(piv, col);
            b.swap(piv, col);
            let iv = inv(a[col][col], p);
            for c in 0..3 {
                a[col][c] = mul(a[col][c], iv, p);
                b[col][c] = mul(b[col][c], iv, p);
            }
            for r in 0..3 {
                if r != col && a[r][col] != 0 {
                    let f = a[r][col];
                    for c in 0..3 {
                        a[r][c] = sub(a[r][c], mul(f, a[col][c], p), p);
                        b[r][c] = sub(b[r][c], mul(f, b[col][c], p), p);
                    }
                }
            }
        }
        Ok(GFpMatrix { p, entries: b })
    }
}

impl fmt::Display for GFpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .entries
            .iter()
            .map(|r| format!("[{} {} {}]", r[0], r[1], r[2]))
            .collect();
        write!(f, "[{}]", rows.join(" "))
    }
}

/// Exact power; negative exponents use the inverse.
pub fn mat_pow(m: &GFpMatrix, exp: i64) -> Result<GFpMatrix, LinAlgError> {
    let base = if exp < 0 { m.inverse()? } else { *m };
    let mut e = exp.unsigned_abs();
    let mut acc = GFpMatrix::identity(m.p);
    let mut sq = base;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc.mul(&sq);
        }
        sq = sq.mul(&sq);
        e >>= 1;
    }
    Ok(acc)
}

/// A subspace of GF(p)^3 held as its reduced row echelon basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    p: u32,
    basis: Vec<[u32; 3]>,
}

impl Subspace {
    pub fn span(p: u32, vectors: &[GFpVector]) -> Subspace {
        let rows: Vec<[u32; 3]> = vectors.iter().map(|v| v.coords).collect();
        Subspace {
            p,
            basis: echelon(p, rows),
        }
    }

    pub fn zero(p: u32) -> Subspace {
        Subspace { p, basis: Vec::new() }
    }

    pub fn whole(p: u32) -> Subspace {
        Subspace {
            p,
            basis: vec![[1, 0, 0], [0, 1, 0], [0, 0, 1]],
        }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> Vec<GFpVector> {
        self.basis
            .iter()
            .map(|&coords| GFpVector { p: self.p, coords })
            .collect()
    }

    pub fn contains(&self, v: &GFpVector) -> bool {
        let mut rows = self.basis.clone();
        rows.push(v.coords);
        echelon(self.p, rows).len() == self.dim()
    }

    /// `S * m`.
    pub fn image(&self, m: &GFpMatrix) -> Subspace {
        let imgs: Vec<GFpVector> = self.basis().iter().map(|v| v.apply(m)).collect();
        Subspace::span(self.p, &imgs)
    }

    /// Vectors `v` with `v . b = 0` for all basis vectors `b`.
    pub fn annihilator(&self) -> Subspace {
        let p = self.p;
        let pivots: Vec<usize> = self
            .basis
            .iter()
            .map(|r| r.iter().position(|&x| x != 0).unwrap())
            .collect();
        let mut out = Vec::new();
        for free in (0..3).filter(|c| !pivots.contains(c)) {
            let mut v = [0u32; 3];
            v[free] = 1;
            for (row, &pc) in self.basis.iter().zip(&pivots) {
                v[pc] = sub(0, row[free], p);
            }
            out.push(v);
        }
        Subspace {
            p,
            basis: echelon(p, out),
        }
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut rows = self.basis.clone();
        rows.extend_from_slice(&other.basis);
        Subspace {
            p: self.p,
            basis: echelon(self.p, rows),
        }
    }

    pub fn intersect(&self, other: &Subspace) -> Subspace {
        self.annihilator().sum(&other.annihilator()).annihilator()
    }

    /// Every vector of the subspace, sorted by index.
    pub fn vectors(&self) -> Vec<GFpVector> {
        let p = self.p;
        let d = self.dim();
        let mut out = Vec::with_capacity((p as usize).pow(d as u32));
        let mut coeffs = vec![0u32; d];
        loop {
            let mut v = GFpVector::zero(p);
            for (c, b) in coeffs.iter().zip(self.basis()) {
                v = v.add(&b.scale(*c));
            }
            out.push(v);
            let mut k = 0;
            while k < d {
                coeffs[k] += 1;
                if coeffs[k] < p {
                    break;
                }
                coeffs[k] = 0;
                k += 1;
            }
            if k == d {
                break;
            }
        }
        out.sort_by_key(GFpVector::index);
        out
    }
}

impl fmt::Display for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .basis
            .iter()
            .map(|r| format!("({},{},{})", r[0], r[1], r[2]))
            .collect();
        write!(f, "<{}>", rows.join(", "))
    }
}

#[allow(clippy::needless_range_loop)]
fn echelon(p: u32, mut rows: Vec<[u32; 3]>) -> Vec<[u32; 3]> {
    for r in &mut rows {
        for x in r.iter_mut() {
            *x %= p;
        }
    }
    let mut rank = 0;
    for col in 0..3 {
        let Some(piv) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, piv);
        let iv = inv(rows[rank][col], p);
        for x in rows[rank].iter_mut() {
            *x = mul(*x, iv, p);
        }
        for r in 0..rows.len() {
            if r != rank && rows[r][col] != 0 {
                let f = rows[r][col];
                for c in 0..3 {
                    rows[r][c] = sub(rows[r][c], mul(f, rows[rank][c], p), p);
                }
            }
        }
        rank += 1;
    }
    rows.truncate(rank);
    rows
}

/// All subspaces of GF(p)^3 of dimension 1 or 2, in canonical order.
pub fn enumerate_subspaces(p: u32, dim: usize) -> Result<Vec<Subspace>, LinAlgError> {
    check_field(p)?;
    let lines = || {
        GFpVector::all(p)
            .filter(|v| !v.is_zero())
            .filter(|v| v.coords.iter().find(|&&x| x != 0) == Some(&1))
            .map(move |v| Subspace::span(p, &[v]))
    };
    let mut out: Vec<Subspace> = match dim {
        1 => lines().collect(),
        2 => lines().map(|l| l.annihilator()).collect(),
        _ => {
            return Err(LinAlgError::WrongDimension {
                expected: 1,
                actual: dim,
            })
        }
    };
    out.sort();
    out.dedup();
    Ok(out)
}

/// Subspaces of the given dimension mapped onto themselves by `m`.
pub fn fixed_subspaces(m: &GFpMatrix, dim: usize) -> Result<Vec<Subspace>, LinAlgError> {
    if !m.is_invertible() {
        return Err(LinAlgError::Singular);
    }
    Ok(enumerate_subspaces(m.p, dim)?
        .into_iter()
        .filter(|s| s.image(m) == *s)
        .collect())
}

/// `S^(m^i) ∩ S^(m^j) ∩ S^(m^k)` for a plane `S` and distinct exponents.
pub fn triple_intersection(
    s: &Subspace,
    m: &GFpMatrix,
    i: i64,
    j: i64,
    k: i64,
) -> Result<Subspace, LinAlgError> {
    if s.p != m.p {
        return Err(LinAlgError::FieldMismatch(s.p, m.p));
    }
    if s.dim() != 2 {
        return Err(LinAlgError::WrongDimension {
            expected: 2,
            actual: s.dim(),
        });
    }
    let (ri, rj, rk) = (residue(i, s.p), residue(j, s.p), residue(k, s.p));
    if ri == rj || rj == rk || ri == rk {
        return Err(LinAlgError::ExponentsNotDistinct);
    }
    let a = s.image(&mat_pow(m, i)?);
    let b = s.image(&mat_pow(m, j)?);
    let c = s.image(&mat_pow(m, k)?);
    Ok(a.intersect(&b).intersect(&c))
}

/// Determinant of the matrix with rows `a m^-i`, `a m^-j`, `a m^-k`.
pub fn lemma_determinant(a: &GFpVector, m: &GFpMatrix, i: i64, j: i64, k: i64) -> Result<u32, LinAlgError> {
    if a.p != m.p {
        return Err(LinAlgError::FieldMismatch(a.p, m.p));
    }
    let rows = [i, j, k]
        .iter()
        .map(|&e| Ok(a.apply(&mat_pow(m, -e)?).coords))
        .collect::<Result<Vec<_>, LinAlgError>>()?;
    let entries = [rows[0], rows[1], rows[2]].map(|r| r.map(i64::from));
    Ok(GFpMatrix::new(a.p, entries).det())
}

/// Closed form `4 a1^3 (i-j)(k-i)(k-j) mod p` for the unipotent `x`.
pub fn lemma_determinant_closed_form(a: &GFpVector, i: i64, j: i64, k: i64) -> u32 {
    let p = a.p as i64;
    let a1 = a.coords[0] as i64;
    let v = 4 * (a1 * a1 % p) * a1 % p;
    let v = v * (i - j).rem_euclid(p) % p;
    let v = v * (k - i).rem_euclid(p) % p;
    let v = v * (k - j).rem_euclid(p) % p;
    v as u32
}

/// The affine map `v -> v * matrix + translation`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct AffineMap {
    pub translation: GFpVector,
    pub matrix: GFpMatrix,
}

impl AffineMap {
    pub fn new(translation: GFpVector, matrix: GFpMatrix) -> Result<Self, LinAlgError> {
        if translation.p != matrix.p {
            return Err(LinAlgError::FieldMismatch(translation.p, matrix.p));
        }
        if !matrix.is_invertible() {
            return Err(LinAlgError::Singular);
        }
        Ok(AffineMap { translation, matrix })
    }

    pub fn translation(v: GFpVector) -> Self {
        AffineMap {
            translation: v,
            matrix: GFpMatrix::identity(v.p),
        }
    }

    pub fn linear(m: GFpMatrix) -> Result<Self, LinAlgError> {
        Self::new(GFpVector::zero(m.p), m)
    }

    pub fn p(&self) -> u32 {
        self.matrix.p
    }

    pub fn apply(&self, v: &GFpVector) -> GFpVector {
        v.apply(&self.matrix).add(&self.translation)
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &AffineMap) -> AffineMap {
        AffineMap {
            translation: self.translation.apply(&other.matrix).add(&other.translation),
            matrix: self.matrix.mul(&other.matrix),
        }
    }

    /// Permutation of the p^3 points in index order.
    pub fn to_permutation(&self) -> Permutation {
        let imgs = GFpVector::all(self.p()).map(|v| self.apply(&v).index()).collect();
        Permutation::from_images(imgs).expect("invertible affine map permutes points")
    }
}

/// Permutation group on the p^3 points generated by the given affine maps.
pub fn affine_perm_rep(maps: &[AffineMap]) -> Result<PermGroup, LinAlgError> {
    let p = maps.first().ok_or(LinAlgError::Empty)?.p();
    check_field(p)?;
    let mut gens = Vec::with_capacity(maps.len());
    for m in maps {
        if m.p() != p {
            return Err(LinAlgError::FieldMismatch(p, m.p()));
        }
        if !m.matrix.is_invertible() {
            return Err(LinAlgError::Singular);
        }
        gens.push(m.to_permutation());
    }
    Ok(PermGroup::new((p as usize).pow(3), gens).expect("uniform degree"))
}
