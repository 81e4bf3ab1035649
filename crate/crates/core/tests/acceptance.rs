//! Acceptance criteria, one line per criterion. Runs without the libtest harness so the
//! lines are visible under a plain `cargo test`.

use std::collections::{HashSet, VecDeque};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ssg_core::autosearch::{self, canonical_form, ColoredGraph, Mode};
use ssg_core::bicoset::{self, BiCosetConfig, PermGroupHandle};
use ssg_core::bigraph::{BipartiteGraph, Side, VertexPartition};
use ssg_core::families::{block_adjacency_counts, build_family, FamilyBuild, FamilyId, Sigma3Group};
use ssg_core::gflinalg::{
    enumerate_subspaces, fixed_subspaces, lemma_determinant, triple_intersection, GFpMatrix, GFpVector,
    Subspace,
};
use ssg_core::permgroup::{PermGroup, Permutation};

type Outcome = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn fam(token: &str) -> Result<FamilyBuild, String> {
    let id: FamilyId = token.parse().map_err(|e| format!("{e}"))?;
    build_family(id, &BiCosetConfig::default()).map_err(|e| format!("{token}: {e}"))
}

fn aut(g: &BipartiteGraph) -> Result<autosearch::AutResult, String> {
    autosearch::automorphism_group(&ColoredGraph::new(g.clone())).map_err(|e| e.to_string())
}

fn cert(g: &BipartiteGraph) -> Result<String, String> {
    Ok(canonical_form(&ColoredGraph::new(g.clone())).map_err(|e| e.to_string())?.certificate)
}

fn full_semisymmetric(g: &BipartiteGraph) -> Result<bool, String> {
    let v = autosearch::semisymmetry(g, Mode::Full, None).map_err(|e| e.to_string())?;
    v.semisymmetric.ok_or_else(|| "full mode left the verdict undecided".to_string())
}

fn big(n: u64) -> BigUint {
    BigUint::from(n)
}

fn criterion_1() -> Outcome {
    let b = fam("gamma9")?;
    let g = &b.graph;
    ensure!(g.vertex_count() == 54, "{} vertices", g.vertex_count());
    ensure!(g.degrees().is_regular() && g.degrees().w_degree() == Some(9), "not 9-regular");
    ensure!(g.is_connected(), "disconnected");
    ensure!(full_semisymmetric(g)?, "not semisymmetric");
    Ok(())
}

fn criterion_2() -> Outcome {
    let b = fam("gamma18")?;
    let g = &b.graph;
    ensure!(g.degrees().is_regular() && g.degrees().w_degree() == Some(18), "not 18-regular");
    ensure!(full_semisymmetric(g)?, "not semisymmetric");
    Ok(())
}

/// Nontrivial block systems of a transitive group, by brute force over seed pairs.
fn block_systems(group: &PermGroup) -> Result<Vec<(usize, usize)>, String> {
    let mut shapes = HashSet::new();
    for b in 1..group.degree() {
        let sys = group.minimal_blocks(0, b).map_err(|e| e.to_string())?;
        if sys.block_count() > 1 {
            ensure!(sys.is_invariant(group), "block system not invariant");
            shapes.insert((sys.block_count(), sys.block_size()));
        }
    }
    let mut v: Vec<_> = shapes.into_iter().collect();
    v.sort();
    Ok(v)
}

fn criterion_3() -> Outcome {
    for token in ["sigma3small", "sigma6small"] {
        let b = fam(token)?;
        let a = aut(&b.graph)?;
        ensure!(a.order == big(1296), "{token}: |Aut| = {}", a.order);
        let n_w = b.graph.n_w();
        let u: Vec<usize> = (n_w..b.graph.vertex_count()).collect();
        let w: Vec<usize> = (0..n_w).collect();
        let on_u = a.group.restrict(&u).map_err(|e| e.to_string())?;
        let on_w = a.group.restrict(&w).map_err(|e| e.to_string())?;
        ensure!(on_u.is_transitive() && on_w.is_transitive(), "{token}: not transitive on parts");
        ensure!(block_systems(&on_u)? == vec![(3, 3)], "{token}: U blocks {:?}", block_systems(&on_u)?);
        ensure!(on_w.is_primitive().map_err(|e| e.to_string())?, "{token}: imprimitive on W");
    }
    Ok(())
}

fn criterion_4() -> Outcome {
    let b = fam("gamma9")?;
    let s3 = fam("sigma3small")?;
    let g = &b.graph;
    let a = aut(g)?;
    let w: Vec<usize> = (0..g.n_w()).collect();
    let kernel = a.group.pointwise_stabilizer(&w);
    ensure!(kernel.order() == big(10_077_696), "|A_(W)| = {}", kernel.order());
    let u_orbits: Vec<Vec<usize>> = kernel
        .orbits()
        .into_iter()
        .filter(|o| o[0] >= g.n_w())
        .map(|o| o.into_iter().map(|x| x - g.n_w()).collect())
        .collect();
    ensure!(u_orbits.len() == 9 && u_orbits.iter().all(|o| o.len() == 3), "U orbits {u_orbits:?}");
    ensure!(&a.order / kernel.order() == big(1296), "|A|/|A_(W)| = {}", &a.order / kernel.order());
    ensure!(&a.order % kernel.order() == big(0), "kernel order does not divide |A|");
    let pu = VertexPartition::new(Side::U, g.n_u(), u_orbits).map_err(|e| e.to_string())?;
    let q = g
        .quotient(&VertexPartition::singletons(Side::W, g.n_w()), &pu)
        .map_err(|e| e.to_string())?;
    ensure!(cert(&q)? == cert(&s3.graph)?, "quotient differs from sigma3small");
    ensure!(!g.has_twins(Side::W), "W has twins");
    Ok(())
}

/// Independent 3x3 arithmetic mod p for the determinant oracle.
fn mat_mul(a: &[[i64; 3]; 3], b: &[[i64; 3]; 3], p: i64) -> [[i64; 3]; 3] {
    let mut c = [[0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            c[i][j] = (0..3).map(|k| a[i][k] * b[k][j]).sum::<i64>().rem_euclid(p);
        }
    }
    c
}

fn cofactor_det(m: &[[i64; 3]; 3], p: i64) -> i64 {
    let minor = |r: usize, c: usize| {
        let rows: Vec<usize> = (0..3).filter(|&x| x != r).collect();
        let cols: Vec<usize> = (0..3).filter(|&x| x != c).collect();
        m[rows[0]][cols[0]] * m[rows[1]][cols[1]] - m[rows[0]][cols[1]] * m[rows[1]][cols[0]]
    };
    (m[0][0] * minor(0, 0) - m[0][1] * minor(0, 1) + m[0][2] * minor(0, 2)).rem_euclid(p)
}

/// `a x^-e` with `x` unipotent of order p, so `x^-e = x^(p - e mod p)`.
fn row_times_x_inverse_power(a: [i64; 3], e: i64, p: i64) -> [i64; 3] {
    let x = [[1, 2, 2], [0, 1, 2], [0, 0, 1]];
    let mut m = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];
    for _ in 0..(-e).rem_euclid(p) {
        m = mat_mul(&m, &x, p);
    }
    let mut r = [0; 3];
    for (j, slot) in r.iter_mut().enumerate() {
        *slot = (0..3).map(|k| a[k] * m[k][j]).sum::<i64>().rem_euclid(p);
    }
    r
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for p in [5u32, 7] {
        let q = p as i64;
        let x = GFpMatrix::unipotent_x(p);
        let e3 = GFpVector::new(p, [0, 0, 1]);
        let lines = fixed_subspaces(&x, 1).map_err(|e| e.to_string())?;
        ensure!(lines == vec![Subspace::span(p, &[e3])], "p={p}: fixed lines {lines:?}");
        let planes = fixed_subspaces(&x, 2).map_err(|e| e.to_string())?;
        let expected = Subspace::span(p, &[GFpVector::new(p, [0, 1, 0]), e3]);
        ensure!(planes == vec![expected], "p={p}: fixed planes {planes:?}");

        let avoiding: Vec<Subspace> = enumerate_subspaces(p, 2)
            .map_err(|e| e.to_string())?
            .into_iter()
            .filter(|s| !s.contains(&e3))
            .collect();
        ensure!(avoiding.len() == (p * p) as usize, "p={p}: {} planes avoid (0,0,1)", avoiding.len());
        for s in &avoiding {
            for i in 0..q {
                for j in 0..q {
                    for k in 0..q {
                        if i == j || j == k || i == k {
                            continue;
                        }
                        let t = triple_intersection(s, &x, i, j, k).map_err(|e| e.to_string())?;
                        ensure!(t.dim() == 0, "p={p}: nonzero intersection for {s} at ({i},{j},{k})");
                    }
                }
            }
        }

        for _ in 0..200 {
            let a = [rng.gen_range(0..q), rng.gen_range(0..q), rng.gen_range(0..q)];
            let mut e: Vec<i64> = (0..q).collect();
            e.shuffle(&mut rng);
            let (i, j, k) = (e[0], e[1], e[2]);
            let m = [
                row_times_x_inverse_power(a, i, q),
                row_times_x_inverse_power(a, j, q),
                row_times_x_inverse_power(a, k, q),
            ];
            let oracle = cofactor_det(&m, q);
            let closed = (4 * a[0].pow(3) * (i - j) * (k - i) * (k - j)).rem_euclid(q);
            ensure!(oracle == closed, "p={p}: identity fails at a={a:?} ({i},{j},{k})");
            let lib = lemma_determinant(&GFpVector::new(p, a), &x, i, j, k).map_err(|e| e.to_string())?;
            ensure!(lib as i64 == oracle, "p={p}: library determinant {lib} vs {oracle}");
        }
    }
    Ok(())
}

fn criterion_6() -> Outcome {
    let b = fam("sigma1:5")?;
    let g = &b.graph;
    ensure!((g.n_w(), g.n_u()) == (125, 25), "parts {}/{}", g.n_w(), g.n_u());
    ensure!(g.degrees().w_degree() == Some(5), "W-degree {:?}", g.degrees().w_degree());
    ensure!(g.degrees().u_degree() == Some(25), "U-degree {:?}", g.degrees().u_degree());
    ensure!(g.is_connected(), "disconnected");
    ensure!(!g.has_twins(Side::W), "W has twins");
    let s = b.bicoset().ok_or("no bi-coset data")?;
    ensure!((s.contract.w_degree, s.contract.u_degree) == (5, 25), "contract {:?}", s.contract);
    ensure!(s.generates == g.is_connected(), "criterion disagrees with BFS");
    Ok(())
}

fn criterion_7() -> Outcome {
    let s2 = fam("sigma2:5")?;
    ensure!(s2.graph.degrees().w_degree() == Some(2), "sigma2 W-degree");
    let blocks = s2.bicoset().and_then(|s| s.u_blocks.clone()).ok_or("no blocks")?;
    check_blocks(&s2, &blocks, 2)?;

    let s3 = fam("sigma3:5")?;
    ensure!(s3.graph.degrees().w_degree() == Some(4), "sigma3 W-degree");
    let blocks = s3.bicoset().and_then(|s| s.u_blocks.clone()).ok_or("no blocks")?;
    check_blocks(&s3, &blocks, 4)?;

    let g = Sigma3Group::new(5).map_err(|e| e.to_string())?;
    let p_elems: Vec<_> = g.elements().filter(|e| e.k == 0).collect();
    ensure!(p_elems.len() == 125, "|P| = {}", p_elems.len());
    let center: HashSet<_> = p_elems
        .iter()
        .filter(|z| p_elems.iter().all(|y| g.mul(z, y) == g.mul(y, z)))
        .copied()
        .collect();
    let a5 = g.pow(&g.a(), 5);
    let generated: HashSet<_> = (0..5).map(|n| g.pow(&a5, n)).collect();
    ensure!(center == generated && center.len() == 5, "center has order {}", center.len());
    let exponent = p_elems.iter().map(|e| g.element_order(e)).max().unwrap_or(1);
    ensure!(exponent == 25, "exponent {exponent}");
    Ok(())
}

fn check_blocks(b: &FamilyBuild, blocks: &[Vec<usize>], expect: usize) -> Outcome {
    ensure!(blocks.len() == 5 && blocks.iter().all(|c| c.len() == 5), "block shape");
    let n_w = b.graph.n_w();
    let cells: Vec<Vec<usize>> = (0..n_w)
        .map(|w| vec![w])
        .chain(blocks.iter().map(|c| c.iter().map(|u| u + n_w).collect()))
        .collect();
    let sys = ssg_core::permgroup::BlockSystem::from_cells(b.graph.vertex_count(), cells).map_err(|e| e.to_string())?;
    ensure!(sys.is_invariant(&b.action), "U blocks not invariant");
    let counts = block_adjacency_counts(&b.graph, blocks);
    ensure!(counts.iter().all(|&c| c == expect), "block counts {counts:?}");
    Ok(())
}

fn criterion_8() -> Outcome {
    for (token, d) in [("gamma1:5", 25), ("gamma2:5", 10), ("gamma3:5", 20)] {
        let b = fam(token)?;
        let g = &b.graph;
        ensure!(g.degrees().is_regular() && g.degrees().w_degree() == Some(d), "{token} valency");
        ensure!(g.has_twins(Side::U) && !g.has_twins(Side::W), "{token} twin pattern");
        let v = autosearch::semisymmetry(g, Mode::Certificate, Some(&b.action)).map_err(|e| e.to_string())?;
        ensure!(v.semisymmetric == Some(true), "{token}: {:?}", v);
    }
    Ok(())
}

/// Elements of the group generated by `gens`, by closure, or `None` above `limit`.
fn enumerate(n: usize, gens: &[Permutation], limit: usize) -> Option<HashSet<Vec<usize>>> {
    let id: Vec<usize> = (0..n).collect();
    let mut seen = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y: Vec<usize> = x.iter().map(|&i| g.image(i)).collect();
            if seen.insert(y.clone()) {
                if seen.len() > limit {
                    return None;
                }
                queue.push_back(y);
            }
        }
    }
    Some(seen)
}

fn random_perm(rng: &mut ChaCha8Rng, n: usize) -> Permutation {
    let mut v: Vec<usize> = (0..n).collect();
    v.shuffle(rng);
    Permutation::from_images(v).unwrap()
}

fn relabel_randomly(g: &BipartiteGraph, rng: &mut ChaCha8Rng) -> BipartiteGraph {
    let mut wm: Vec<usize> = (0..g.n_w()).collect();
    let mut um: Vec<usize> = (0..g.n_u()).collect();
    wm.shuffle(rng);
    um.shuffle(rng);
    g.relabel(&wm, &um).unwrap()
}

fn round_trip(b: &FamilyBuild) -> Result<(BipartiteGraph, BigUint, BigUint), String> {
    let dec = bicoset::from_semitransitive(&b.graph, &b.action, 0, 0).map_err(|e| e.to_string())?;
    let h = PermGroupHandle::new(b.action.clone(), dec.l_gens, dec.r_gens).map_err(|e| e.to_string())?;
    let r = bicoset::build(&h, &[dec.d_rep], &BiCosetConfig::default()).map_err(|e| e.to_string())?;
    let k = bicoset::kernel_of_action(&r, &h).map_err(|e| e.to_string())?;
    let c = bicoset::core_intersection_order(&r, &h).map_err(|e| e.to_string())?;
    Ok((r.graph, k, c))
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);

    for token in ["sigma3small", "gamma9", "sigma1:5"] {
        let b = fam(token)?;
        let (rebuilt, _, _) = round_trip(&b)?;
        ensure!(cert(&rebuilt)? == cert(&b.graph)?, "{token}: rebuilt graph not isomorphic");
    }

    let (_, k, c) = round_trip(&fam("sigma3small")?)?;
    ensure!(k == c && k == big(1), "sigma3small kernel {k} vs core {c}");
    let s3 = fam("sigma3:5")?;
    let s = s3.bicoset().ok_or("no bi-coset data")?;
    ensure!(s.kernel_order == s.core_order && s.kernel_order == big(1), "sigma3:5 kernel");

    for token in ["sigma3small", "sigma6small", "sigma1:5", "sigma2:5", "sigma3:5"] {
        let g = fam(token)?.graph;
        let e = g.expand(5);
        let q = e
            .quotient(&VertexPartition::singletons(Side::W, e.n_w()), &e.twin_classes(Side::U))
            .map_err(|e| e.to_string())?;
        ensure!(q == g, "{token}: quotient of expansion differs");
    }
    for token in ["sigma3small", "sigma6small", "gamma9", "gamma18", "sigma1:5", "sigma2:5", "sigma3:5"] {
        let g = fam(token)?.graph;
        ensure!(g.bicomplement().bicomplement() == g, "{token}: bicomplement not an involution");
    }

    let mut checked = 0;
    while checked < 30 {
        let n = rng.gen_range(2..=7);
        let k = rng.gen_range(1..=3);
        let gens: Vec<Permutation> = (0..k).map(|_| random_perm(&mut rng, n)).collect();
        let Some(elements) = enumerate(n, &gens, 5000) else {
            continue;
        };
        let group = PermGroup::new(n, gens).map_err(|e| e.to_string())?;
        ensure!(group.order() == big(elements.len() as u64), "order {} vs {}", group.order(), elements.len());
        for _ in 0..20 {
            let x = random_perm(&mut rng, n);
            let member = elements.contains(&x.images().collect::<Vec<_>>());
            ensure!(group.contains(&x) == member, "membership of {x} in degree {n}");
        }
        checked += 1;
    }

    for token in ["sigma3small", "sigma6small", "gamma9", "gamma18", "sigma1:5", "sigma2:5", "sigma3:5"] {
        let g = fam(token)?.graph;
        let c0 = cert(&g)?;
        for _ in 0..20 {
            ensure!(cert(&relabel_randomly(&g, &mut rng))? == c0, "{token}: certificate changed");
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    type Criterion = (&'static str, fn() -> Outcome, u64);
    let criteria: [Criterion; 9] = [
        ("gamma9 is a connected 9-regular semisymmetric graph on 54 vertices", criterion_1, 10),
        ("gamma18 is 18-regular and semisymmetric", criterion_2, 10),
        ("small graphs: |Aut| = 1296, imprimitive on U, primitive on W", criterion_3, 30),
        ("gamma9: kernel on W, its orbits, quotient and twin freedom", criterion_4, 60),
        ("subspace lemma and determinant identity for p = 5, 7", criterion_5, 10),
        ("sigma1:5 parts, degrees, connectivity and contracts", criterion_6, 30),
        ("sigma2:5 and sigma3:5 degrees, blocks, center and exponent", criterion_7, 60),
        ("gamma1:5, gamma2:5, gamma3:5 valencies and certificates", criterion_8, 60),
        ("property suites", criterion_9, 300),
    ];
    let mut failures = 0;
    for (i, (name, run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let mut outcome = run();
        let elapsed = start.elapsed();
        if outcome.is_ok() && elapsed > Duration::from_secs(*limit) {
            outcome = Err(format!("took {elapsed:.1?}, limit {limit} s"));
        }
        match outcome {
            Ok(()) => println!("criterion {}: PASS  {name} ({elapsed:.2?})", i + 1),
            Err(e) => {
                failures += 1;
                println!("criterion {}: FAIL  {name}: {e} ({elapsed:.2?})", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
