//! Points versus coordinate planes of AG(3,3), and their expansions.


use super::{expand_build, FamilyBuild, FamilyError, FamilyId, Provenance};
use crate::bigraph::BipartiteGraph;
use crate::gflinalg::{affine_perm_rep, AffineMap, GFpMatrix, GFpVector};
use crate::permgroup::{PermGroup, Permutation};

const P: u32 = 3;
const N_W: usize = 27;
const N_U: usize = 9;

/// Index of the plane `{v : v_i = c}`.
fn plane_index(i: usize, c: u32) -> usize {
    3 * i + c as usize
}

/// Translations along the axes plus generators of the monomial matrices of GL(3,3).
fn affine_generators() -> Vec<AffineMap> {
    let mut maps: Vec<AffineMap> = (0..3)
        .map(|i| {
            let mut t = [0i64; 3];
            t[i] = 1;
            AffineMap::translation(GFpVector::new(P, t))
        })
        .collect();
    for m in [
        [[0, 1, 0], [1, 0, 0], [0, 0, 1]],
        [[0, 1, 0], [0, 0, 1], [1, 0, 0]],
        [[-1, 0, 0], [0, 1, 0], [0, 0, 1]],
    ] {
        maps.push(AffineMap::linear(GFpMatrix::new(P, m)).expect("monomial matrices are invertible"));
    }
    maps
}

/// Action of an affine map on `W ∪ U`. Fails if some coordinate plane is not mapped to one.
fn action_on_points_and_planes(map: &AffineMap) -> Result<Permutation, FamilyError> {
    let mut imgs: Vec<usize> = map.to_permutation().images().collect();
    for i in 0..3 {
        for c in 0..P {
            let image: Vec<[u32; 3]> = GFpVector::all(P)
                .filter(|v| v.coords()[i] == c)
                .map(|v| map.apply(&v).coords())
                .collect();
            let axis = (0..3)
                .find(|&a| image.iter().all(|v| v[a] == image[0][a]))
                .ok_or_else(|| {
                    FamilyError::ParameterMismatch("affine map does not preserve the coordinate planes".into())
                })?;
            imgs.push(N_W + plane_index(axis, image[0][axis]));
        }
    }
    Ok(Permutation::from_images(imgs)?)
}

/// The 27 affine points against the 9 planes parallel to a coordinate plane (`variant` 3),
/// or its bicomplement (`variant` 6).
pub fn build_sigma_small(variant: u32) -> Result<FamilyBuild, FamilyError> {
    let id = match variant {
        3 => FamilyId::Sigma3Small,
        6 => FamilyId::Sigma6Small,
        _ => return Err(FamilyError::UnknownFamily(format!("sigma{variant}small"))),
    };
    let mut edges = Vec::with_capacity(81);
    for v in GFpVector::all(P) {
        for i in 0..3 {
            edges.push((v.index(), plane_index(i, v.coords()[i])));
        }
    }
    let mut graph = BipartiteGraph::new(N_W, N_U, &edges)?;
    if variant == 6 {
        graph = graph.bicomplement();
    }
    let maps = affine_generators();
    let group_order = affine_perm_rep(&maps)?.order();
    let gens = maps
        .iter()
        .map(action_on_points_and_planes)
        .collect::<Result<Vec<_>, _>>()?;
    let action = PermGroup::new(N_W + N_U, gens)?;
    Ok(FamilyBuild {
        id,
        graph,
        action,
        provenance: Provenance::Affine { group_order },
    })
}

/// `variant` 9 or 18: the 3-fold expansion of the matching small graph.
pub fn build_gamma_small(variant: u32) -> Result<FamilyBuild, FamilyError> {
    let (id, base) = match variant {
        9 => (FamilyId::Gamma9, build_sigma_small(3)?),
        18 => (FamilyId::Gamma18, build_sigma_small(6)?),
        _ => return Err(FamilyError::UnknownFamily(format!("gamma{variant}"))),
    };
    Ok(expand_build(id, base, P as usize))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;
    use crate::bicoset::is_edge_transitive;
    use crate::bigraph::Side;

    #[test]
    fn sigma3_counts() {
        let b = build_sigma_small(3).unwrap();
        assert_eq!((b.graph.n_w(), b.graph.n_u(), b.graph.edge_count()), (27, 9, 81));
        assert_eq!(b.graph.degrees().w_degree(), Some(3));
        assert_eq!(b.graph.degrees().u_degree(), Some(9));
        assert!(matches!(&b.provenance, Provenance::Affine { group_order } if *group_order == BigUint::from(1296u32)));
        assert!(is_edge_transitive(&b.graph, &b.action).unwrap());
        assert_eq!(b.graph.twin_classes(Side::W).len(), 27);
        assert_eq!(b.action.order(), BigUint::from(1296u32));
    }

    #[test]
    fn sigma6_counts() {
        let b = build_sigma_small(6).unwrap();
        assert_eq!(b.graph.edge_count(), 162);
        assert_eq!(b.graph.degrees().w_degree(), Some(6));
        assert!(is_edge_transitive(&b.graph, &b.action).unwrap());
        assert_eq!(b.graph.twin_classes(Side::W).len(), 27);
    }

    #[test]
    fn gamma_counts() {
        for (v, d) in [(9, 9), (18, 18)] {
            let b = build_gamma_small(v).unwrap();
            assert_eq!(b.graph.vertex_count(), 54);
            assert!(b.graph.degrees().is_regular());
            assert_eq!(b.graph.degrees().w_degree(), Some(d));
            assert!(is_edge_transitive(&b.graph, &b.action).unwrap());
            let twins = b.graph.twin_classes(Side::U);
            assert_eq!(twins.len(), 9);
            assert!(twins.cells().iter().all(|c| c.len() == 3));
        }
    }

    #[test]
    fn unknown_variants() {
        assert!(build_sigma_small(4).is_err());
        assert!(build_gamma_small(10).is_err());
    }
}
