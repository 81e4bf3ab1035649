//! Explicit graphs together with edge-transitive groups acting on them.

mod nf;
mod small;
mod sigma;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use thiserror::Error;

pub use nf::{default_s, nf_multiply, NormalFormElement, Sigma3Group};
pub use small::{build_gamma_small, build_sigma_small};
pub use sigma::{build_sigma1, build_sigma2, build_sigma3, sigma1_handle, sigma2_handle};

use crate::bicoset::{
    self, BiCosetConfig, BiCosetError, BiCosetGraphResult, DegreeContract, GroupHandle,
};
use crate::bigraph::{BipartiteGraph, GraphError};
use crate::gflinalg::LinAlgError;
use crate::permgroup::{PermError, PermGroup, Permutation};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FamilyError {
    #[error("family parameter must be a prime p >= 5, got {0}")]
    BadPrime(u32),
    #[error("unknown family token {0:?}")]
    UnknownFamily(String),
    #[error("parameter mismatch: {0}")]
    ParameterMismatch(String),
    #[error("x-action inconsistent: {0}")]
    XActionInconsistent(String),
    #[error(transparent)]
    BiCoset(#[from] BiCosetError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FamilyId {
    Sigma3Small,
    Sigma6Small,
    Gamma9,
    Gamma18,
    Sigma1(u32),
    Sigma2(u32),
    Sigma3(u32),
    Gamma1(u32),
    Gamma2(u32),
    Gamma3(u32),
}

impl FamilyId {
    /// The unexpanded family for the `Γ` variants.
    pub fn base(&self) -> Option<FamilyId> {
        match *self {
            FamilyId::Gamma9 => Some(FamilyId::Sigma3Small),
            FamilyId::Gamma18 => Some(FamilyId::Sigma6Small),
            FamilyId::Gamma1(p) => Some(FamilyId::Sigma1(p)),
            FamilyId::Gamma2(p) => Some(FamilyId::Sigma2(p)),
            FamilyId::Gamma3(p) => Some(FamilyId::Sigma3(p)),
            _ => None,
        }
    }

    /// The prime used for expansion and for the field or wreath construction.
    pub fn prime(&self) -> u32 {
        match *self {
            FamilyId::Sigma3Small | FamilyId::Sigma6Small | FamilyId::Gamma9 | FamilyId::Gamma18 => 3,
            FamilyId::Sigma1(p)
            | FamilyId::Sigma2(p)
            | FamilyId::Sigma3(p)
            | FamilyId::Gamma1(p)
            | FamilyId::Gamma2(p)
            | FamilyId::Gamma3(p) => p,
        }
    }

    pub fn is_parameterized(&self) -> bool {
        !matches!(
            self,
            FamilyId::Sigma3Small | FamilyId::Sigma6Small | FamilyId::Gamma9 | FamilyId::Gamma18
        )
    }

    fn check(self) -> Result<Self, FamilyError> {
        let p = self.prime();
        if self.is_parameterized() && (p < 5 || !crate::gflinalg::is_prime(p as u64)) {
            return Err(FamilyError::BadPrime(p));
        }
        Ok(self)
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyId::Sigma3Small => write!(f, "sigma3small"),
            FamilyId::Sigma6Small => write!(f, "sigma6small"),
            FamilyId::Gamma9 => write!(f, "gamma9"),
            FamilyId::Gamma18 => write!(f, "gamma18"),
            FamilyId::Sigma1(p) => write!(f, "sigma1:{p}"),
            FamilyId::Sigma2(p) => write!(f, "sigma2:{p}"),
            FamilyId::Sigma3(p) => write!(f, "sigma3:{p}"),
            FamilyId::Gamma1(p) => write!(f, "gamma1:{p}"),
            FamilyId::Gamma2(p) => write!(f, "gamma2:{p}"),
            FamilyId::Gamma3(p) => write!(f, "gamma3:{p}"),
        }
    }
}

impl FromStr for FamilyId {
    type Err = FamilyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let unknown = || FamilyError::UnknownFamily(s.to_string());
        let id = match s.split_once(':') {
            None => match s {
                "sigma3small" => FamilyId::Sigma3Small,
                "sigma6small" => FamilyId::Sigma6Small,
                "gamma9" => FamilyId::Gamma9,
                "gamma18" => FamilyId::Gamma18,
                _ => return Err(unknown()),
            },
            Some((name, p)) => {
                let p: u32 = p.parse().map_err(|_| unknown())?;
                match name {
                    "sigma1" => FamilyId::Sigma1(p),
                    "sigma2" => FamilyId::Sigma2(p),
                    "sigma3" => FamilyId::Sigma3(p),
                    "gamma1" => FamilyId::Gamma1(p),
                    "gamma2" => FamilyId::Gamma2(p),
                    "gamma3" => FamilyId::Gamma3(p),
                    _ => return Err(unknown()),
                }
            }
        };
        id.check()
    }
}

/// Group-theoretic data recorded for a bi-coset construction.
#[derive(Clone, Debug)]
pub struct BiCosetSummary {
    pub group_order: BigUint,
    pub l_order: BigUint,
    pub r_order: BigUint,
    pub contract: DegreeContract,
    pub generates: bool,
    /// `|G| / |image of G|`.
    pub kernel_order: BigUint,
    /// `|Core(L) ∩ Core(R)|` from a faithful representation.
    pub core_order: BigUint,
    /// A block system on U, when the construction singles one out.
    pub u_blocks: Option<Vec<Vec<usize>>>,
    /// Choices made while building (`s`, primitive roots, ...).
    pub notes: Vec<String>,
}

#[derive(Clone, Debug)]
pub enum Provenance {
    /// Points and affine planes of AG(3,3) under a group of affine maps.
    Affine { group_order: BigUint },
    BiCoset(BiCosetSummary),
    /// `base` expanded by `fiber`.
    Expanded { base: Box<FamilyBuild>, fiber: usize },
}

#[derive(Clone, Debug)]
pub struct FamilyBuild {
    pub id: FamilyId,
    pub graph: BipartiteGraph,
    /// Edge-transitive group on `W ∪ U`, W first.
    pub action: PermGroup,
    pub provenance: Provenance,
}

impl FamilyBuild {
    pub fn bicoset(&self) -> Option<&BiCosetSummary> {
        match &self.provenance {
            Provenance::BiCoset(s) => Some(s),
            _ => None,
        }
    }
}

pub fn build_family(id: FamilyId, config: &BiCosetConfig) -> Result<FamilyBuild, FamilyError> {
    let id = id.check()?;
    match id {
        FamilyId::Sigma3Small => build_sigma_small(3),
        FamilyId::Sigma6Small => build_sigma_small(6),
        FamilyId::Gamma9 => build_gamma_small(9),
        FamilyId::Gamma18 => build_gamma_small(18),
        FamilyId::Sigma1(p) => build_sigma1(p, config),
        FamilyId::Sigma2(p) => build_sigma2(p, config),
        FamilyId::Sigma3(p) => build_sigma3(p, config),
        FamilyId::Gamma1(p) => build_gamma_family(1, p, config),
        FamilyId::Gamma2(p) => build_gamma_family(2, p, config),
        FamilyId::Gamma3(p) => build_gamma_family(3, p, config),
    }
}

pub fn build_gamma_family(which: u8, p: u32, config: &BiCosetConfig) -> Result<FamilyBuild, FamilyError> {
    let base = match which {
        1 => build_sigma1(p, config)?,
        2 => build_sigma2(p, config)?,
        3 => build_sigma3(p, config)?,
        _ => return Err(FamilyError::UnknownFamily(format!("gamma{which}"))),
    };
    let id = match which {
        1 => FamilyId::Gamma1(p),
        2 => FamilyId::Gamma2(p),
        _ => FamilyId::Gamma3(p),
    };
    Ok(expand_build(id, base, p as usize))
}

pub(crate) fn expand_build(id: FamilyId, base: FamilyBuild, p: usize) -> FamilyBuild {
    let graph = base.graph.expand(p);
    let action = lift_action(&base.action, base.graph.n_w(), base.graph.n_u(), p);
    FamilyBuild {
        id,
        graph,
        action,
        provenance: Provenance::Expanded {
            base: Box::new(base),
            fiber: p,
        },
    }
}

/// Lifts an action on `W ∪ U` to the `p`-fold expansion: `(u, i) -> (u', i)`, plus one
/// extra generator rotating every fiber `(u, i) -> (u, i + 1)`.
pub fn lift_action(action: &PermGroup, n_w: usize, n_u: usize, p: usize) -> PermGroup {
    let degree = n_w + n_u * p;
    let mut gens: Vec<Permutation> = action
        .generators()
        .iter()
        .map(|g| {
            let mut imgs: Vec<usize> = (0..n_w).map(|w| g.image(w)).collect();
            for u in 0..n_u {
                let v = g.image(n_w + u) - n_w;
                imgs.extend((0..p).map(|i| n_w + v * p + i));
            }
            Permutation::from_images(imgs).expect("lift of a part-preserving permutation")
        })
        .collect();
    let mut shift: Vec<usize> = (0..n_w).collect();
    for u in 0..n_u {
        shift.extend((0..p).map(|i| n_w + u * p + (i + 1) % p));
    }
    gens.push(Permutation::from_images(shift).expect("fiber rotation"));
    PermGroup::new(degree, gens).expect("uniform degree")
}

/// Inputs of a bi-coset family beyond the group itself.
pub(crate) struct FamilySpec<'a, E> {
    pub id: FamilyId,
    pub d_reps: &'a [E],
    pub l_order: BigUint,
    pub r_order: BigUint,
    /// Generators of a subgroup whose orbits on `[G:R]` form a distinguished block system.
    pub block_gens: Option<&'a [E]>,
    pub notes: Vec<String>,
}

/// Runs the bi-coset construction and collects the summary data.
pub(crate) fn bicoset_family<G: GroupHandle>(
    handle: &G,
    spec: FamilySpec<'_, G::Elem>,
    config: &BiCosetConfig,
) -> Result<(FamilyBuild, BiCosetGraphResult<G::Elem>), FamilyError> {
    let d_reps = spec.d_reps;
    let result = bicoset::build(handle, d_reps, config)?;
    let contract = bicoset::degree_contract(handle, &result.w_space, &result.u_space, d_reps)?;
    let generates = bicoset::connectivity_criterion(handle, &result.w_space, &result.u_space, d_reps)?;
    let kernel_order = bicoset::kernel_of_action(&result, handle)?;
    let core_order = bicoset::core_intersection_order(&result, handle)?;
    let group_order = handle.order().ok_or(BiCosetError::OrderUnknown)?;
    let u_blocks = spec.block_gens.map(|gens| result.u_space.orbits_of(handle, gens));
    let summary = BiCosetSummary {
        group_order,
        l_order: spec.l_order,
        r_order: spec.r_order,
        contract,
        generates,
        kernel_order,
        core_order,
        u_blocks,
        notes: spec.notes,
    };
    let build = FamilyBuild {
        id: spec.id,
        graph: result.graph.clone(),
        action: result.action.clone(),
        provenance: Provenance::BiCoset(summary),
    };
    Ok((build, result))
}

/// Number of blocks of `blocks` met by the neighborhood of each W-vertex.
pub fn block_adjacency_counts(graph: &BipartiteGraph, blocks: &[Vec<usize>]) -> Vec<usize> {
    let mut block_of = vec![0; graph.n_u()];
    for (bi, b) in blocks.iter().enumerate() {
        for &u in b {
            block_of[u] = bi;
        }
    }
    (0..graph.n_w())
        .map(|w| {
            let mut hit: Vec<usize> = graph.w_neighbors(w).iter().map(|&u| block_of[u]).collect();
            hit.sort_unstable();
            hit.dedup();
            hit.len()
        })
        .collect()
}
