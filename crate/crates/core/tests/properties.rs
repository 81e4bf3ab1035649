use std::collections::{HashSet, VecDeque};

use num_bigint::BigUint;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ssg_core::autosearch::{automorphism_group, canonical_form, is_isomorphic, ColoredGraph};
use ssg_core::bicoset::{self, BiCosetConfig, GroupHandle, PermGroupHandle, SubgroupTag};
use ssg_core::bigraph::{BipartiteGraph, Side, VertexPartition};
use ssg_core::families::Sigma3Group;
use ssg_core::permgroup::{PermGroup, Permutation};

fn random_perm(rng: &mut ChaCha8Rng, n: usize) -> Permutation {
    let mut v: Vec<usize> = (0..n).collect();
    v.shuffle(rng);
    Permutation::from_images(v).unwrap()
}

fn random_word(rng: &mut ChaCha8Rng, gens: &[Permutation]) -> Permutation {
    let mut x = Permutation::identity(gens[0].degree());
    for _ in 0..rng.gen_range(0..12) {
        x = &x * gens.choose(rng).unwrap();
    }
    x
}

fn random_graph(rng: &mut ChaCha8Rng, max: usize) -> BipartiteGraph {
    let n_w = rng.gen_range(1..=max);
    let n_u = rng.gen_range(1..=max);
    let density = rng.gen_range(0.1..0.9);
    let edges: Vec<(usize, usize)> = (0..n_w)
        .flat_map(|w| (0..n_u).map(move |u| (w, u)))
        .filter(|_| rng.gen_bool(density))
        .collect();
    BipartiteGraph::new(n_w, n_u, &edges).unwrap()
}

fn relabel_randomly(g: &BipartiteGraph, rng: &mut ChaCha8Rng) -> BipartiteGraph {
    let mut wm: Vec<usize> = (0..g.n_w()).collect();
    let mut um: Vec<usize> = (0..g.n_u()).collect();
    wm.shuffle(rng);
    um.shuffle(rng);
    g.relabel(&wm, &um).unwrap()
}

/// Group elements by closure over the generators.
fn closure(n: usize, gens: &[Permutation]) -> HashSet<Permutation> {
    let id = Permutation::identity(n);
    let mut seen = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = &x * g;
            if seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    seen
}

/// A random group of degree at most 5 with random subgroups `L`, `R` and a representative.
fn random_bicoset_input(seed: u64) -> (PermGroupHandle, Permutation) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(3..=5);
    let gens: Vec<Permutation> = (0..rng.gen_range(1..=2)).map(|_| random_perm(&mut rng, n)).collect();
    let l: Vec<Permutation> = (0..rng.gen_range(1..=2)).map(|_| random_word(&mut rng, &gens)).collect();
    let r: Vec<Permutation> = (0..rng.gen_range(1..=2)).map(|_| random_word(&mut rng, &gens)).collect();
    let d = random_word(&mut rng, &gens);
    let group = PermGroup::new(n, gens).unwrap();
    (PermGroupHandle::new(group, l, r).unwrap(), d)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn schreier_sims_matches_closure(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(1..=6);
        let gens: Vec<Permutation> = (0..rng.gen_range(1..=3)).map(|_| random_perm(&mut rng, n)).collect();
        let elements = closure(n, &gens);
        let group = PermGroup::new(n, gens).unwrap();
        prop_assert_eq!(group.order(), BigUint::from(elements.len()));
        for _ in 0..10 {
            let x = random_perm(&mut rng, n);
            prop_assert_eq!(group.contains(&x), elements.contains(&x));
        }
        let stab = group.pointwise_stabilizer(&[0]);
        prop_assert_eq!(group.order(), stab.order() * BigUint::from(group.orbit(0).len()));
    }

    #[test]
    fn base_hint_does_not_change_order(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(2..=8);
        let gens: Vec<Permutation> = (0..2).map(|_| random_perm(&mut rng, n)).collect();
        let group = PermGroup::new(n, gens).unwrap();
        let mut hint: Vec<usize> = (0..n).collect();
        hint.shuffle(&mut rng);
        prop_assert_eq!(group.build_chain(Some(&hint)).order(), group.order());
    }

    #[test]
    fn bicoset_graph_matches_its_group_data(seed in any::<u64>()) {
        let (h, d) = random_bicoset_input(seed);
        let cfg = BiCosetConfig::default();
        let res = bicoset::build(&h, std::slice::from_ref(&d), &cfg).unwrap();
        let g = &res.graph;
        let order = h.group().order();
        prop_assert_eq!(BigUint::from(g.n_w()) * h.subgroup(SubgroupTag::L).order(), order.clone());
        prop_assert_eq!(BigUint::from(g.n_u()) * h.subgroup(SubgroupTag::R).order(), order);

        let c = bicoset::degree_contract(&h, &res.w_space, &res.u_space, &res.d_reps).unwrap();
        prop_assert_eq!(g.degrees().w_degree(), Some(c.w_degree));
        prop_assert_eq!(g.degrees().u_degree(), Some(c.u_degree));
        prop_assert_eq!(c.regular, g.n_w() == g.n_u());

        let connected = bicoset::connectivity_criterion(&h, &res.w_space, &res.u_space, &res.d_reps).unwrap();
        prop_assert_eq!(connected, g.is_connected());
        prop_assert!(bicoset::is_edge_transitive(g, &res.action).unwrap());
        prop_assert_eq!(
            bicoset::kernel_of_action(&res, &h).unwrap(),
            bicoset::core_intersection_order(&res, &h).unwrap()
        );
    }

    #[test]
    fn coset_enumeration_ignores_generator_order(seed in any::<u64>()) {
        let (h, d) = random_bicoset_input(seed);
        let mut gens = h.group().generators().to_vec();
        gens.reverse();
        let mut l = h.subgroup(SubgroupTag::L).generators().to_vec();
        l.reverse();
        let r = h.subgroup(SubgroupTag::R).generators().to_vec();
        let h2 = PermGroupHandle::new(PermGroup::new(h.group().degree(), gens).unwrap(), l, r).unwrap();
        let cfg = BiCosetConfig::default();
        let a = bicoset::build(&h, std::slice::from_ref(&d), &cfg).unwrap().graph;
        let b = bicoset::build(&h2, &[d], &cfg).unwrap().graph;
        prop_assert!(is_isomorphic(&a, &b).unwrap());
    }

    #[test]
    fn text_round_trip(seed in any::<u64>()) {
        let g = random_graph(&mut ChaCha8Rng::seed_from_u64(seed), 10);
        prop_assert_eq!(BipartiteGraph::from_text(&g.to_text()).unwrap(), g);
    }

    #[test]
    fn bicomplement_is_an_involution(seed in any::<u64>()) {
        let g = random_graph(&mut ChaCha8Rng::seed_from_u64(seed), 10);
        let c = g.bicomplement();
        prop_assert_eq!(c.edge_count() + g.edge_count(), g.n_w() * g.n_u());
        prop_assert_eq!(c.bicomplement(), g);
    }

    #[test]
    fn quotient_undoes_expand_on_twin_free_graphs(seed in any::<u64>(), p in 2usize..5) {
        let g = random_graph(&mut ChaCha8Rng::seed_from_u64(seed), 8);
        prop_assume!(!g.has_twins(Side::U) && g.w_neighbors(0).len() < g.n_u());
        let e = g.expand(p);
        let classes = e.twin_classes(Side::U);
        prop_assert_eq!(classes.len(), g.n_u());
        let q = e.quotient(&VertexPartition::singletons(Side::W, e.n_w()), &classes).unwrap();
        prop_assert!(is_isomorphic(&q, &g).unwrap());
    }

    #[test]
    fn canonical_form_is_relabeling_invariant(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_graph(&mut rng, 9);
        let h = relabel_randomly(&g, &mut rng);
        let cg = canonical_form(&ColoredGraph::new(g.clone())).unwrap();
        let ch = canonical_form(&ColoredGraph::new(h.clone())).unwrap();
        prop_assert_eq!(&cg.certificate, &ch.certificate);
        prop_assert_eq!(cg.edges, ch.edges);
        prop_assert_eq!(
            automorphism_group(&ColoredGraph::new(g)).unwrap().order,
            automorphism_group(&ColoredGraph::new(h)).unwrap().order
        );
    }

    #[test]
    fn automorphisms_preserve_edges(seed in any::<u64>()) {
        let g = random_graph(&mut ChaCha8Rng::seed_from_u64(seed), 8);
        let aut = automorphism_group(&ColoredGraph::new(g.clone())).unwrap();
        let n_w = g.n_w();
        let edges: HashSet<(usize, usize)> = g.edges().map(|(w, u)| (w, u + n_w)).collect();
        for a in &aut.generators {
            for &(x, y) in &edges {
                let (ax, ay) = (a.image(x), a.image(y));
                prop_assert!(edges.contains(&(ax, ay)) || edges.contains(&(ay, ax)));
            }
        }
    }

    #[test]
    fn normal_form_multiplication_is_associative(i in 0i64..49, j in 0i64..7, k in 0i64..6,
                                                 i2 in 0i64..49, j2 in 0i64..7, k2 in 0i64..6,
                                                 i3 in 0i64..49, j3 in 0i64..7, k3 in 0i64..6) {
        let g = Sigma3Group::new(7).unwrap();
        let (x, y, z) = (g.element(i, j, k), g.element(i2, j2, k2), g.element(i3, j3, k3));
        prop_assert_eq!(g.mul(&g.mul(&x, &y), &z), g.mul(&x, &g.mul(&y, &z)));
        prop_assert_eq!(g.mul(&x, &g.inv(&x)), g.identity());
    }
}

#[test]
fn normal_form_is_a_group_on_a_thousand_triples() {
    for p in [5u32, 7] {
        let g = Sigma3Group::new(p).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(p as u64);
        let pick = |rng: &mut ChaCha8Rng| {
            g.element(
                rng.gen_range(0..(p * p) as i64),
                rng.gen_range(0..p as i64),
                rng.gen_range(0..(p - 1) as i64),
            )
        };
        for _ in 0..1000 {
            let (x, y, z) = (pick(&mut rng), pick(&mut rng), pick(&mut rng));
            assert_eq!(g.mul(&g.mul(&x, &y), &z), g.mul(&x, &g.mul(&y, &z)));
        }
        assert_eq!(g.pow(&g.a(), (p * p) as i64), g.identity());
        assert_ne!(g.pow(&g.a(), p as i64), g.identity());
        assert_eq!(g.pow(&g.b(), p as i64), g.identity());
        assert_eq!(g.element_order(&g.x()), (p - 1) as u64);
        assert_eq!(g.size(), (p * p * p * (p - 1)) as usize);
    }
}

#[test]
fn coset_counts_are_indices() {
    let s4 = PermGroup::symmetric(4);
    let l = vec![Permutation::from_cycles(4, &[&[0, 1]]).unwrap()];
    let r = vec![Permutation::from_cycles(4, &[&[0, 1, 2]]).unwrap()];
    let h = PermGroupHandle::new(s4, l, r).unwrap();
    let cfg = BiCosetConfig::default();
    assert_eq!(bicoset::enumerate_cosets(&h, SubgroupTag::L, &cfg).unwrap().len(), 12);
    assert_eq!(bicoset::enumerate_cosets(&h, SubgroupTag::R, &cfg).unwrap().len(), 8);
    let tight = BiCosetConfig { coset_bound: 5 };
    assert!(bicoset::enumerate_cosets(&h, SubgroupTag::L, &tight).is_err());
}
