//! The three bi-coset families with parts of size `p^3` and `p^2`.

use num_bigint::BigUint;

use super::nf::Sigma3Group;
use super::{bicoset_family, FamilyBuild, FamilyError, FamilySpec, FamilyId};
use crate::bicoset::{BiCosetConfig, GroupHandle, PermGroupHandle, SubgroupTag};
use crate::gflinalg::{affine_perm_rep, is_prime, AffineMap, GFpMatrix, GFpVector};
use crate::permgroup::{PermGroup, Permutation};

fn check_prime(p: u32) -> Result<(), FamilyError> {
    if p < 5 || !is_prime(p as u64) {
        return Err(FamilyError::BadPrime(p));
    }
    Ok(())
}

fn primitive_root(p: u32) -> u32 {
    (2..p)
        .find(|&g| {
            let mut acc = 1u64;
            (1..p - 1).all(|_| {
                acc = acc * g as u64 % p as u64;
                acc != 1
            })
        })
        .expect("every prime has a primitive root")
}

/// `F = N ⋊ (<x> ⋊ H)` on the affine space, `L = <x>H`, `R = N0 H`, where `x` is the
/// unipotent matrix, `H = {diag(s^2/t, s, t)}` and `N0` the translations in the first two
/// coordinates.
pub fn sigma1_handle(p: u32) -> Result<PermGroupHandle, FamilyError> {
    check_prime(p)?;
    let g = primitive_root(p) as i64;
    let g_inv = (1..p as i64).find(|&y| g * y % p as i64 == 1).unwrap();
    let lin = |m: GFpMatrix| AffineMap::linear(m).expect("invertible");
    let trans = |t: [i64; 3]| AffineMap::translation(GFpVector::new(p, t));
    let x = lin(GFpMatrix::unipotent_x(p));
    let h1 = lin(GFpMatrix::diagonal(p, [g * g, g, 1]));
    let h2 = lin(GFpMatrix::diagonal(p, [g_inv, 1, g]));
    let (t1, t2, t3) = (trans([1, 0, 0]), trans([0, 1, 0]), trans([0, 0, 1]));
    let perm = |m: &AffineMap| m.to_permutation();
    let group = affine_perm_rep(&[t1, t2, t3, x, h1, h2])?;
    let l = vec![perm(&x), perm(&h1), perm(&h2)];
    let r = vec![perm(&t1), perm(&t2), perm(&h1), perm(&h2)];
    Ok(PermGroupHandle::new(group, l, r)?)
}

pub fn build_sigma1(p: u32, config: &BiCosetConfig) -> Result<FamilyBuild, FamilyError> {
    let handle = sigma1_handle(p)?;
    let spec = FamilySpec {
        id: FamilyId::Sigma1(p),
        d_reps: &[handle.identity()],
        l_order: handle.subgroup(SubgroupTag::L).order(),
        r_order: handle.subgroup(SubgroupTag::R).order(),
        block_gens: None,
        notes: vec![format!("H generated with primitive root {}", primitive_root(p))],
    };
    Ok(bicoset_family(&handle, spec, config)?.0)
}

/// Data for the wreath-product family: the handle, the double-coset representative
/// `σ^((p-1)/2)` and generators of the base group `M^p`.
pub fn sigma2_handle(p: u32) -> Result<(PermGroupHandle, Permutation, Vec<Permutation>), FamilyError> {
    check_prime(p)?;
    let pu = p as usize;
    let n = pu * pu;
    let at = |b: usize, j: usize| pu * b + j;
    let in_block = |b: usize, cycles: &[Vec<usize>]| -> Permutation {
        let shifted: Vec<Vec<usize>> = cycles.iter().map(|c| c.iter().map(|&j| at(b, j)).collect()).collect();
        let refs: Vec<&[usize]> = shifted.iter().map(Vec::as_slice).collect();
        Permutation::from_cycles(n, &refs).expect("valid block cycle")
    };
    let m_gens = |b: usize| vec![in_block(b, &[vec![0, 1]]), in_block(b, &[(0..pu).collect()])];
    let h_gens = |b: usize| vec![in_block(b, &[vec![1, 2]]), in_block(b, &[(1..pu).collect()])];
    let sigma = Permutation::from_images((0..n).map(|x| (x + pu) % n).collect()).expect("block shift");
    let tau = Permutation::from_images(
        (0..n)
            .map(|x| at((pu - x / pu) % pu, (pu - x % pu) % pu))
            .collect(),
    )
    .expect("negation");

    let mut f_gens = m_gens(0);
    f_gens.push(sigma.clone());
    f_gens.push(tau.clone());
    let group = PermGroup::new(n, f_gens)?;

    let (h_lo, h_hi) = ((pu - 1) / 2, pu.div_ceil(2));
    let mut l = Vec::new();
    let mut r = h_gens(0);
    let mut base = Vec::new();
    for b in 0..pu {
        l.extend(if b == h_lo || b == h_hi { h_gens(b) } else { m_gens(b) });
        if b > 0 {
            r.extend(m_gens(b));
        }
        base.extend(m_gens(b));
    }
    l.push(tau.clone());
    r.push(tau);
    let d = sigma.pow(((p - 1) / 2) as i64);
    Ok((PermGroupHandle::new(group, l, r)?, d, base))
}

pub fn build_sigma2(p: u32, config: &BiCosetConfig) -> Result<FamilyBuild, FamilyError> {
    let (handle, d, base) = sigma2_handle(p)?;
    let spec = FamilySpec {
        id: FamilyId::Sigma2(p),
        d_reps: &[d],
        l_order: handle.subgroup(SubgroupTag::L).order(),
        r_order: handle.subgroup(SubgroupTag::R).order(),
        block_gens: Some(&base),
        notes: vec![format!(
            "L has point stabilizers in blocks {} and {}",
            (p - 1) / 2,
            p.div_ceil(2)
        )],
    };
    Ok(bicoset_family(&handle, spec, config)?.0)
}

pub fn build_sigma3(p: u32, config: &BiCosetConfig) -> Result<FamilyBuild, FamilyError> {
    let g = Sigma3Group::new(p)?;
    let center = [g.pow(&g.a(), p as i64)];
    let spec = FamilySpec {
        id: FamilyId::Sigma3(p),
        d_reps: &[g.a()],
        l_order: BigUint::from(p - 1),
        r_order: BigUint::from(p * (p - 1)),
        block_gens: Some(&center),
        notes: vec![format!("s = {}", g.s()), "x fixes b".to_string()],
    };
    Ok(bicoset_family(&g, spec, config)?.0)
}
