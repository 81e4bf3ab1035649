//! The metacyclic group `P = <a, b>` of order `p^3` extended by an automorphism `x`
//! of order `p - 1`, with elements kept in the normal form `a^i b^j x^k`.

use num_bigint::BigUint;

use super::FamilyError;
use crate::bicoset::{GroupHandle, SubgroupTag};
use crate::gflinalg::is_prime;
use crate::permgroup::Permutation;

/// `a^i b^j x^k` with `i` mod `p^2`, `j` mod `p`, `k` mod `p - 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NormalFormElement {
    pub i: u32,
    pub j: u32,
    pub k: u32,
}

/// Multiplication tables for a fixed `(p, s)`. The automorphism `x` sends `a` to `a^s`
/// and fixes `b`.
#[derive(Clone, Debug)]
pub struct Sigma3Group {
    p: u32,
    s: u32,
    p2: u32,
    /// `s^k mod p^2` for `k` in `0..p-1`.
    s_pow: Vec<u32>,
    /// `(1+p)^j mod p^2` for `j` in `0..p`.
    c_pow: Vec<u32>,
}

fn mul_mod(a: u32, b: u32, m: u32) -> u32 {
    ((a as u64 * b as u64) % m as u64) as u32
}

fn order_mod(x: u32, m: u32) -> Option<u32> {
    let mut acc = x % m;
    for e in 1..m {
        if acc == 1 {
            return Some(e);
        }
        acc = mul_mod(acc, x, m);
    }
    None
}

/// Smallest `s >= 2` of multiplicative order exactly `p - 1` modulo `p^2`.
pub fn default_s(p: u32) -> u32 {
    let p2 = p * p;
    (2..p2)
        .find(|&s| order_mod(s, p2) == Some(p - 1))
        .expect("the unit group mod p^2 is cyclic of order p(p-1)")
}

impl Sigma3Group {
    pub fn new(p: u32) -> Result<Self, FamilyError> {
        check_family_prime(p)?;
        Self::with_s(p, default_s(p))
    }

    pub fn with_s(p: u32, s: u32) -> Result<Self, FamilyError> {
        check_family_prime(p)?;
        let p2 = p * p;
        if order_mod(s, p2) != Some(p - 1) {
            return Err(FamilyError::XActionInconsistent(format!(
                "{s} does not have order {} mod {p2}",
                p - 1
            )));
        }
        let s_pow = (0..p - 1)
            .scan(1u32, |acc, _| {
                let v = *acc;
                *acc = mul_mod(*acc, s, p2);
                Some(v)
            })
            .collect();
        let c_pow = (0..p)
            .scan(1u32, |acc, _| {
                let v = *acc;
                *acc = mul_mod(*acc, 1 + p, p2);
                Some(v)
            })
            .collect();
        let g = Sigma3Group { p, s, p2, s_pow, c_pow };
        g.check_x_action()?;
        Ok(g)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn element(&self, i: i64, j: i64, k: i64) -> NormalFormElement {
        NormalFormElement {
            i: i.rem_euclid(self.p2 as i64) as u32,
            j: j.rem_euclid(self.p as i64) as u32,
            k: k.rem_euclid(self.p as i64 - 1) as u32,
        }
    }

    pub fn a(&self) -> NormalFormElement {
        self.element(1, 0, 0)
    }

    pub fn b(&self) -> NormalFormElement {
        self.element(0, 1, 0)
    }

    pub fn x(&self) -> NormalFormElement {
        self.element(0, 0, 1)
    }

    pub fn is_valid(&self, e: &NormalFormElement) -> bool {
        e.i < self.p2 && e.j < self.p && e.k < self.p - 1
    }

    fn s_inv_pow(&self, k: u32) -> u32 {
        self.s_pow[((self.p - 1 - k) % (self.p - 1)) as usize]
    }

    fn c_inv_pow(&self, j: u32) -> u32 {
        self.c_pow[((self.p - j) % self.p) as usize]
    }

    /// Uses `x^k a^i = a^(i s^-k) x^k`, `b^j a^i = a^(i (1+p)^-j) b^j` and `bx = xb`.
    pub fn mul(&self, e1: &NormalFormElement, e2: &NormalFormElement) -> NormalFormElement {
        let twist = mul_mod(self.s_inv_pow(e1.k), self.c_inv_pow(e1.j), self.p2);
        NormalFormElement {
            i: (e1.i + mul_mod(e2.i, twist, self.p2)) % self.p2,
            j: (e1.j + e2.j) % self.p,
            k: (e1.k + e2.k) % (self.p - 1),
        }
    }

    pub fn inv(&self, e: &NormalFormElement) -> NormalFormElement {
        let twist = mul_mod(self.s_pow[e.k as usize], self.c_pow[e.j as usize], self.p2);
        NormalFormElement {
            i: (self.p2 - mul_mod(e.i, twist, self.p2)) % self.p2,
            j: (self.p - e.j) % self.p,
            k: (self.p - 1 - e.k) % (self.p - 1),
        }
    }

    pub fn pow(&self, e: &NormalFormElement, n: i64) -> NormalFormElement {
        let base = if n < 0 { self.inv(e) } else { *e };
        let mut acc = self.identity();
        for _ in 0..n.unsigned_abs() {
            acc = self.mul(&acc, &base);
        }
        acc
    }

    /// `g^-1 e g`.
    pub fn conj(&self, e: &NormalFormElement, g: &NormalFormElement) -> NormalFormElement {
        self.mul(&self.mul(&self.inv(g), e), g)
    }

    /// `x^-1 y^-1 x y`.
    pub fn commutator(&self, x: &NormalFormElement, y: &NormalFormElement) -> NormalFormElement {
        self.mul(&self.mul(&self.inv(x), &self.inv(y)), &self.mul(x, y))
    }

    pub fn element_order(&self, e: &NormalFormElement) -> u64 {
        let id = self.identity();
        let mut acc = *e;
        let mut n = 1;
        while acc != id {
            acc = self.mul(&acc, e);
            n += 1;
        }
        n
    }

    pub fn elements(&self) -> impl Iterator<Item = NormalFormElement> + '_ {
        (0..self.p2).flat_map(move |i| {
            (0..self.p).flat_map(move |j| (0..self.p - 1).map(move |k| NormalFormElement { i, j, k }))
        })
    }

    pub fn size(&self) -> usize {
        (self.p2 * self.p * (self.p - 1)) as usize
    }

    fn index(&self, e: &NormalFormElement) -> usize {
        ((e.i * self.p + e.j) * (self.p - 1) + e.k) as usize
    }

    /// Checks that `a -> a^s, b -> b` preserves the defining relations of `P` and that
    /// conjugation by `x` has order exactly `p - 1` on `P`.
    fn check_x_action(&self) -> Result<(), FamilyError> {
        let (a, b, x) = (self.a(), self.b(), self.x());
        let id = self.identity();
        let fa = self.conj(&a, &x);
        let fb = self.conj(&b, &x);
        let ok = fa == self.pow(&a, self.s as i64)
            && fb == b
            && self.pow(&fa, (self.p2) as i64) == id
            && self.pow(&fb, self.p as i64) == id
            && self.conj(&fa, &fb) == self.pow(&fa, 1 + self.p as i64);
        if !ok {
            return Err(FamilyError::XActionInconsistent("relations not preserved".into()));
        }
        let mut img = a;
        for n in 1..self.p - 1 {
            img = self.conj(&img, &x);
            if img == a && self.conj(&b, &self.pow(&x, n as i64)) == b {
                return Err(FamilyError::XActionInconsistent(format!(
                    "conjugation by x has order {n}"
                )));
            }
        }
        if self.conj(&a, &self.pow(&x, self.p as i64 - 1)) != a {
            return Err(FamilyError::XActionInconsistent("x^(p-1) acts nontrivially".into()));
        }
        Ok(())
    }
}

fn check_family_prime(p: u32) -> Result<(), FamilyError> {
    if p < 5 || !is_prime(p as u64) {
        return Err(FamilyError::BadPrime(p));
    }
    Ok(())
}

/// Product in normal form, validating that both operands belong to the group for `(p, s)`.
pub fn nf_multiply(
    e1: &NormalFormElement,
    e2: &NormalFormElement,
    p: u32,
    s: u32,
) -> Result<NormalFormElement, FamilyError> {
    let g = Sigma3Group::with_s(p, s)?;
    for e in [e1, e2] {
        if !g.is_valid(e) {
            return Err(FamilyError::ParameterMismatch(format!("{e:?} is not reduced for p = {p}")));
        }
    }
    Ok(g.mul(e1, e2))
}

/// `L = <x>` and `R = <b><x>` inside `F = P ⋊ <x>`.
impl GroupHandle for Sigma3Group {
    type Elem = NormalFormElement;

    fn identity(&self) -> NormalFormElement {
        NormalFormElement { i: 0, j: 0, k: 0 }
    }

    fn multiply(&self, a: &NormalFormElement, b: &NormalFormElement) -> NormalFormElement {
        self.mul(a, b)
    }

    fn invert(&self, a: &NormalFormElement) -> NormalFormElement {
        self.inv(a)
    }

    fn generators(&self) -> Vec<NormalFormElement> {
        vec![self.a(), self.b(), self.x()]
    }

    fn subgroup_generators(&self, tag: SubgroupTag) -> Vec<NormalFormElement> {
        match tag {
            SubgroupTag::L => vec![self.x()],
            SubgroupTag::R => vec![self.b(), self.x()],
        }
    }

    fn contains(&self, tag: SubgroupTag, e: &NormalFormElement) -> bool {
        match tag {
            SubgroupTag::L => e.i == 0 && e.j == 0,
            SubgroupTag::R => e.i == 0,
        }
    }

    /// `L g` is determined by `(i s^k, j)`, `R g` by `i s^k (1+p)^j`.
    fn coset_key(&self, tag: SubgroupTag, e: &NormalFormElement) -> u64 {
        let t = mul_mod(e.i, self.s_pow[e.k as usize], self.p2);
        match tag {
            SubgroupTag::L => t as u64 * self.p as u64 + e.j as u64,
            SubgroupTag::R => mul_mod(t, self.c_pow[e.j as usize], self.p2) as u64,
        }
    }

    fn order(&self) -> Option<BigUint> {
        Some(BigUint::from(self.size()))
    }

    /// Right regular representation.
    fn faithful_permutation(&self, e: &NormalFormElement) -> Option<Permutation> {
        let mut images = vec![0; self.size()];
        for g in self.elements() {
            images[self.index(&g)] = self.index(&self.mul(&g, e));
        }
        Some(Permutation::from_images(images).expect("right multiplication is a bijection"))
    }
}
