//! The claim suite behind `ssg verify-paper`.

use std::fmt::Display;
use std::time::Instant;

use num_bigint::BigUint;
use serde::Serialize;
use thiserror::Error;

use crate::autosearch::{self, ColoredGraph, Mode};
use crate::bicoset::BiCosetConfig;
use crate::bigraph::{BipartiteGraph, Side, VertexPartition};
use crate::families::{
    block_adjacency_counts, build_family, FamilyBuild, FamilyError, FamilyId, Sigma3Group,
};
use crate::gflinalg::{
    enumerate_subspaces, fixed_subspaces, lemma_determinant, lemma_determinant_closed_form,
    triple_intersection, GFpMatrix, GFpVector, Subspace,
};
use crate::permgroup::PermGroup;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReportError {
    #[error("no claim suite for p = {0}; use 3, 5 or 7")]
    UnsupportedPrime(u32),
    #[error("the p = 7 suite is slow and must be requested with --slow")]
    SlowRequired,
}

#[derive(Clone, Debug, Serialize)]
pub struct Anchor {
    pub topic: String,
    pub statement: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Claim {
    pub id: String,
    pub anchor: Anchor,
    pub expected: String,
    pub computed: String,
    pub pass: bool,
    pub elapsed_ms: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub tool: String,
    pub version: String,
    pub suite: String,
    pub p: u32,
    pub claims: Vec<Claim>,
    pub passed: usize,
    pub failed: usize,
    pub verdict: String,
}

impl VerificationReport {
    pub fn all_pass(&self) -> bool {
        self.failed == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

struct Suite {
    claims: Vec<Claim>,
}

impl Suite {
    fn claim<T: Display>(
        &mut self,
        id: &str,
        topic: &str,
        statement: &str,
        expected: impl Display,
        compute: impl FnOnce() -> Result<T, String>,
    ) {
        let start = Instant::now();
        let computed = match compute() {
            Ok(v) => v.to_string(),
            Err(e) => format!("error: {e}"),
        };
        let expected = expected.to_string();
        self.claims.push(Claim {
            id: id.to_string(),
            anchor: Anchor {
                topic: topic.to_string(),
                statement: statement.to_string(),
            },
            pass: computed == expected,
            expected,
            computed,
            elapsed_ms: start.elapsed().as_millis() as u64,
        });
    }
}

type Built = Result<FamilyBuild, String>;

fn build(id: FamilyId, config: &BiCosetConfig) -> Built {
    build_family(id, config).map_err(|e: FamilyError| e.to_string())
}

fn shape(g: &BipartiteGraph) -> String {
    let d = g.degrees();
    let deg = |x: Option<usize>| x.map_or("mixed".to_string(), |v| v.to_string());
    format!(
        "parts {}/{}, degrees {}/{}, edges {}",
        g.n_w(),
        g.n_u(),
        deg(d.w_degree()),
        deg(d.u_degree()),
        g.edge_count()
    )
}

fn shape_expected(n_w: u64, n_u: u64, dw: u64, du: u64) -> String {
    format!("parts {n_w}/{n_u}, degrees {dw}/{du}, edges {}", n_w * dw)
}

fn aut_of(g: &BipartiteGraph) -> Result<autosearch::AutResult, String> {
    autosearch::automorphism_group(&ColoredGraph::new(g.clone())).map_err(|e| e.to_string())
}

fn iso(a: &BipartiteGraph, b: &BipartiteGraph) -> Result<bool, String> {
    autosearch::is_isomorphic(a, b).map_err(|e| e.to_string())
}

/// Distinct nontrivial block systems of a transitive group, as "k blocks of size m" strings.
fn block_shapes(group: &PermGroup) -> Result<String, String> {
    let n = group.degree();
    let mut systems = Vec::new();
    for b in 1..n {
        let sys = group.minimal_blocks(0, b).map_err(|e| e.to_string())?;
        if sys.block_count() > 1 && !systems.contains(&sys) {
            systems.push(sys);
        }
    }
    let mut shapes: Vec<String> = systems
        .iter()
        .map(|s| format!("{} blocks of size {}", s.block_count(), s.block_size()))
        .collect();
    shapes.sort();
    shapes.dedup();
    Ok(if shapes.is_empty() {
        "primitive".to_string()
    } else {
        shapes.join("; ")
    })
}

fn verdict_string(v: Option<bool>) -> String {
    v.map_or("undecided".to_string(), |b| b.to_string())
}

fn small_suite(s: &mut Suite, config: &BiCosetConfig) {
    let sigma3 = build(FamilyId::Sigma3Small, config);
    let sigma6 = build(FamilyId::Sigma6Small, config);
    let gamma9 = build(FamilyId::Gamma9, config);
    let gamma18 = build(FamilyId::Gamma18, config);
    let topic = "small examples over GF(3)";

    for (name, b, dw) in [("sigma3small", &sigma3, 3), ("sigma6small", &sigma6, 6)] {
        s.claim(
            &format!("{name}.shape"),
            topic,
            "points of AG(3,3) against the nine coordinate-parallel planes; the bicomplement doubles the valency",
            shape_expected(27, 9, dw, 3 * dw),
            || Ok(shape(&b.as_ref()?.graph)),
        );
        s.claim(
            &format!("{name}.aut_order"),
            topic,
            "the automorphism group is S3 wr S3, of order 1296",
            1296,
            || Ok(aut_of(&b.as_ref()?.graph)?.order),
        );
        s.claim(
            &format!("{name}.w_twin_free"),
            topic,
            "no two W-vertices share a neighborhood",
            false,
            || Ok(b.as_ref()?.graph.has_twins(Side::W)),
        );
    }
    s.claim(
        "sigma3small.u_blocks",
        topic,
        "the automorphism group is imprimitive on U with blocks of size 3",
        "3 blocks of size 3",
        || {
            let g = &sigma3.as_ref()?.graph;
            let aut = aut_of(g)?;
            let u: Vec<usize> = (g.n_w()..g.vertex_count()).collect();
            block_shapes(&aut.group.restrict(&u).map_err(|e| e.to_string())?)
        },
    );
    s.claim(
        "sigma3small.w_primitive",
        topic,
        "the automorphism group is primitive on W",
        "primitive",
        || {
            let g = &sigma3.as_ref()?.graph;
            let aut = aut_of(g)?;
            let w: Vec<usize> = (0..g.n_w()).collect();
            block_shapes(&aut.group.restrict(&w).map_err(|e| e.to_string())?)
        },
    );

    for (name, b, d) in [("gamma9", &gamma9, 9u64), ("gamma18", &gamma18, 18)] {
        s.claim(
            &format!("{name}.shape"),
            topic,
            "order 54 and regular",
            shape_expected(27, 27, d, d),
            || Ok(shape(&b.as_ref()?.graph)),
        );
        s.claim(&format!("{name}.connected"), topic, "connected", true, || {
            Ok(b.as_ref()?.graph.is_connected())
        });
        s.claim(
            &format!("{name}.semisymmetric_full"),
            topic,
            "regular and edge-transitive but not vertex-transitive, decided from the full automorphism group",
            true,
            || {
                let v = autosearch::semisymmetry(&b.as_ref()?.graph, Mode::Full, None).map_err(|e| e.to_string())?;
                Ok(verdict_string(v.semisymmetric))
            },
        );
        s.claim(
            &format!("{name}.semisymmetric_certificate"),
            topic,
            "the twin certificate with the constructed group reaches the same verdict",
            true,
            || {
                let b = b.as_ref()?;
                let v = autosearch::semisymmetry(&b.graph, Mode::Certificate, Some(&b.action))
                    .map_err(|e| e.to_string())?;
                Ok(verdict_string(v.semisymmetric))
            },
        );
    }
    s.claim(
        "gamma9.expanded_from_sigma3small",
        topic,
        "expanding the U-side of sigma3small by 3 gives gamma9",
        true,
        || iso(&sigma3.as_ref()?.graph.expand(3), &gamma9.as_ref()?.graph),
    );
    s.claim(
        "gamma18.expanded_from_sigma6small",
        topic,
        "expanding the U-side of sigma6small by 3 gives gamma18",
        true,
        || iso(&sigma6.as_ref()?.graph.expand(3), &gamma18.as_ref()?.graph),
    );
    s.claim(
        "sigma3small.not_sigma6small",
        topic,
        "the two small graphs are not isomorphic",
        false,
        || iso(&sigma3.as_ref()?.graph, &sigma6.as_ref()?.graph),
    );

    let structure = "structure of the automorphism group of the expanded graph";
    let kernel = || -> Result<(autosearch::AutResult, PermGroup), String> {
        let g = &gamma9.as_ref()?.graph;
        let aut = aut_of(g)?;
        let w: Vec<usize> = (0..g.n_w()).collect();
        let k = aut.group.pointwise_stabilizer(&w);
        Ok((aut, k))
    };
    s.claim(
        "gamma9.kernel_order",
        structure,
        "the pointwise stabilizer of W is (S3)^9",
        BigUint::from(6u32).pow(9),
        || Ok(kernel()?.1.order()),
    );
    s.claim(
        "gamma9.kernel_orbits",
        structure,
        "every orbit of the pointwise stabilizer of W on U has length 3",
        "9 orbits of size 3",
        || {
            let g = &gamma9.as_ref()?.graph;
            let (_, k) = kernel()?;
            let mut sizes: Vec<usize> = k.orbits().iter().filter(|o| o[0] >= g.n_w()).map(Vec::len).collect();
            sizes.dedup();
            let count = k.orbits().iter().filter(|o| o[0] >= g.n_w()).count();
            Ok(match sizes.as_slice() {
                [one] => format!("{count} orbits of size {one}"),
                _ => format!("{count} orbits of mixed sizes"),
            })
        },
    );
    s.claim(
        "gamma9.aut_over_kernel",
        structure,
        "the automorphism group modulo the kernel on W has order 1296",
        1296,
        || {
            let (aut, k) = kernel()?;
            Ok(aut.order / k.order())
        },
    );
    s.claim(
        "gamma9.quotient_is_sigma3small",
        structure,
        "collapsing the kernel orbits on U recovers sigma3small",
        true,
        || {
            let g = &gamma9.as_ref()?.graph;
            let (_, k) = kernel()?;
            let cells: Vec<Vec<usize>> = k
                .orbits()
                .into_iter()
                .filter(|o| o[0] >= g.n_w())
                .map(|o| o.into_iter().map(|x| x - g.n_w()).collect())
                .collect();
            let pu = VertexPartition::new(Side::U, g.n_u(), cells).map_err(|e| e.to_string())?;
            let q = g
                .quotient(&VertexPartition::singletons(Side::W, g.n_w()), &pu)
                .map_err(|e| e.to_string())?;
            iso(&q, &sigma3.as_ref()?.graph)
        },
    );
    s.claim(
        "gamma9.w_twin_free",
        structure,
        "no two W-vertices share a neighborhood",
        false,
        || Ok(gamma9.as_ref()?.graph.has_twins(Side::W)),
    );
}

/// Number of 2-subspaces missing the fixed line, and how many of their triple
/// intersections under distinct powers of `x` are zero.
fn lemma_sweep(s: &mut Suite, p: u32) {
    let topic = "subspaces under the unipotent matrix x";
    let x = GFpMatrix::unipotent_x(p);
    let e3 = GFpVector::new(p, [0, 0, 1]);
    s.claim(
        &format!("lemma.p{p}.fixed_lines"),
        topic,
        "x fixes exactly one 1-subspace, spanned by (0,0,1)",
        Subspace::span(p, &[e3]),
        || {
            let f = fixed_subspaces(&x, 1).map_err(|e| e.to_string())?;
            Ok(f.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))
        },
    );
    s.claim(
        &format!("lemma.p{p}.fixed_planes"),
        topic,
        "x fixes exactly one 2-subspace, the vectors with first coordinate zero",
        Subspace::span(p, &[GFpVector::new(p, [0, 1, 0]), e3]),
        || {
            let f = fixed_subspaces(&x, 2).map_err(|e| e.to_string())?;
            Ok(f.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))
        },
    );
    let planes: Vec<Subspace> = enumerate_subspaces(p, 2)
        .map(|v| v.into_iter().filter(|s| !s.contains(&e3)).collect())
        .unwrap_or_default();
    let triples: Vec<(i64, i64, i64)> = {
        let q = p as i64;
        (0..q)
            .flat_map(|i| (0..q).flat_map(move |j| (0..q).map(move |k| (i, j, k))))
            .filter(|&(i, j, k)| i != j && j != k && i != k)
            .collect()
    };
    let total = planes.len() * triples.len();
    s.claim(
        &format!("lemma.p{p}.triple_intersections"),
        topic,
        "for a plane avoiding (0,0,1), the images under three distinct powers of x meet only in zero",
        format!("{} planes, {total} of {total} zero", p * p),
        || {
            let mut zero = 0;
            for pl in &planes {
                for &(i, j, k) in &triples {
                    if triple_intersection(pl, &x, i, j, k).map_err(|e| e.to_string())?.dim() == 0 {
                        zero += 1;
                    }
                }
            }
            Ok(format!("{} planes, {zero} of {total} zero", planes.len()))
        },
    );
    let cases = p.pow(3) as usize * triples.len();
    s.claim(
        &format!("lemma.p{p}.determinant"),
        topic,
        "det(a x^-i; a x^-j; a x^-k) = 4 a1^3 (i-j)(k-i)(k-j) for every vector a and distinct i, j, k",
        format!("{cases} of {cases} agree"),
        || {
            let mut agree = 0;
            for a in GFpVector::all(p) {
                for &(i, j, k) in &triples {
                    let d = lemma_determinant(&a, &x, i, j, k).map_err(|e| e.to_string())?;
                    if d == lemma_determinant_closed_form(&a, i, j, k) {
                        agree += 1;
                    }
                }
            }
            Ok(format!("{agree} of {cases} agree"))
        },
    );
}

fn factorial(n: u32) -> BigUint {
    (1..=n).map(BigUint::from).product()
}

fn family_suite(s: &mut Suite, p: u32, config: &BiCosetConfig) {
    let q = p as u64;
    let s1 = build(FamilyId::Sigma1(p), config);
    let s2 = build(FamilyId::Sigma2(p), config);
    let s3 = build(FamilyId::Sigma3(p), config);
    let topic = "bi-coset families";

    for (name, b, dw, du) in [
        ("sigma1", &s1, q, q * q),
        ("sigma2", &s2, 2, 2 * q),
        ("sigma3", &s3, q - 1, q * (q - 1)),
    ] {
        let id = format!("{name}:{p}");
        s.claim(
            &format!("{id}.shape"),
            topic,
            "parts of size p^3 and p^2 with the stated W-valency",
            shape_expected(q.pow(3), q * q, dw, du),
            || Ok(shape(&b.as_ref()?.graph)),
        );
        s.claim(
            &format!("{id}.degree_contract"),
            topic,
            "the valencies equal |D|/|R| and |D|/|L| computed from the group",
            format!("{dw}/{du}"),
            || {
                let c = &b.as_ref()?.bicoset().ok_or("no bi-coset data")?.contract;
                Ok(format!("{}/{}", c.w_degree, c.u_degree))
            },
        );
        s.claim(
            &format!("{id}.connectivity"),
            topic,
            "the graph is connected exactly when D^-1 D generates the group",
            "connected: true, generated: true",
            || {
                let b = b.as_ref()?;
                let gen = b.bicoset().ok_or("no bi-coset data")?.generates;
                Ok(format!("connected: {}, generated: {gen}", b.graph.is_connected()))
            },
        );
        s.claim(
            &format!("{id}.w_twin_free"),
            topic,
            "no two W-vertices share a neighborhood",
            false,
            || Ok(b.as_ref()?.graph.has_twins(Side::W)),
        );
        s.claim(
            &format!("{id}.kernel"),
            topic,
            "the kernel of the action on vertices is the intersection of the cores of L and R",
            "agree",
            || {
                let sm = b.as_ref()?.bicoset().ok_or("no bi-coset data")?;
                Ok(if sm.kernel_order == sm.core_order {
                    "agree".to_string()
                } else {
                    format!("{} vs {}", sm.kernel_order, sm.core_order)
                })
            },
        );
    }

    s.claim(
        &format!("sigma2:{p}.group_order"),
        topic,
        "the group is S_p wr D_2p",
        factorial(p).pow(p) * (2 * p),
        || Ok(s2.as_ref()?.bicoset().ok_or("no bi-coset data")?.group_order.clone()),
    );
    for (name, b, k) in [("sigma2", &s2, 2), ("sigma3", &s3, p as usize - 1)] {
        s.claim(
            &format!("{name}:{p}.block_adjacency"),
            topic,
            "each W-vertex meets the stated number of U-blocks of size p",
            format!("{p} blocks; every W-vertex meets {k}"),
            || {
                let b = b.as_ref()?;
                let blocks = b
                    .bicoset()
                    .and_then(|s| s.u_blocks.as_ref())
                    .ok_or("no block system")?;
                let mut counts = block_adjacency_counts(&b.graph, blocks);
                counts.sort_unstable();
                counts.dedup();
                Ok(match counts.as_slice() {
                    [c] => format!("{} blocks; every W-vertex meets {c}", blocks.len()),
                    _ => format!("{} blocks; counts vary {counts:?}", blocks.len()),
                })
            },
        );
    }
    s.claim(
        &format!("sigma3:{p}.center"),
        topic,
        "the center of P is generated by a^p and has order p",
        format!("order {p}, equal to <a^p>"),
        || {
            let g = Sigma3Group::new(p).map_err(|e| e.to_string())?;
            let (a, b) = (g.a(), g.b());
            let p_elems: Vec<_> = g.elements().filter(|e| e.k == 0).collect();
            let center: Vec<_> = p_elems
                .iter()
                .filter(|e| g.mul(e, &a) == g.mul(&a, e) && g.mul(e, &b) == g.mul(&b, e))
                .copied()
                .collect();
            let ap = g.pow(&a, p as i64);
            let generated: Vec<_> = (0..p as i64).map(|n| g.pow(&ap, n)).collect();
            let same = center.len() == generated.len() && generated.iter().all(|e| center.contains(e));
            Ok(if same {
                format!("order {}, equal to <a^p>", center.len())
            } else {
                format!("order {}, differs from <a^p>", center.len())
            })
        },
    );
    s.claim(
        &format!("sigma3:{p}.exponent"),
        topic,
        "P has exponent p^2",
        q * q,
        || {
            let g = Sigma3Group::new(p).map_err(|e| e.to_string())?;
            Ok(g.elements().filter(|e| e.k == 0).map(|e| g.element_order(&e)).max().unwrap_or(1))
        },
    );

    let expanded = [
        (FamilyId::Gamma1(p), q * q),
        (FamilyId::Gamma2(p), 2 * q),
        (FamilyId::Gamma3(p), q * (q - 1)),
    ];
    for (id, d) in expanded {
        let b = build(id, config);
        s.claim(
            &format!("{id}.shape"),
            "expanded families",
            "expanding U by p makes both parts p^3 and the graph regular",
            shape_expected(q.pow(3), q.pow(3), d, d),
            || Ok(shape(&b.as_ref()?.graph)),
        );
        s.claim(
            &format!("{id}.semisymmetric_certificate"),
            "expanded families",
            "edge-transitive through the constructed group, and only U has twins, so not vertex-transitive",
            true,
            || {
                let b = b.as_ref()?;
                let v = autosearch::semisymmetry(&b.graph, Mode::Certificate, Some(&b.action))
                    .map_err(|e| e.to_string())?;
                Ok(verdict_string(v.semisymmetric))
            },
        );
        if 2 * q.pow(3) as usize <= autosearch::DEFAULT_MAX_VERTICES {
            s.claim(
                &format!("{id}.semisymmetric_full"),
                "expanded families",
                "the full automorphism group confirms the certificate verdict",
                true,
                || {
                    let v = autosearch::semisymmetry(&b.as_ref()?.graph, Mode::Full, None)
                        .map_err(|e| e.to_string())?;
                    Ok(verdict_string(v.semisymmetric))
                },
            );
        }
    }
}

/// Runs the claim suite for `p`: 3 covers the small examples, 5 and 7 the families and
/// the subspace lemma.
pub fn verify_paper(p: u32, slow: bool, config: &BiCosetConfig) -> Result<VerificationReport, ReportError> {
    let mut s = Suite { claims: Vec::new() };
    match p {
        3 => small_suite(&mut s, config),
        5 => {
            lemma_sweep(&mut s, 5);
            lemma_sweep(&mut s, 7);
            family_suite(&mut s, 5, config);
        }
        7 if slow => {
            lemma_sweep(&mut s, 7);
            family_suite(&mut s, 7, config);
        }
        7 => return Err(ReportError::SlowRequired),
        _ => return Err(ReportError::UnsupportedPrime(p)),
    }
    s.claims.sort_by(|a, b| a.id.cmp(&b.id));
    let failed = s.claims.iter().filter(|c| !c.pass).count();
    Ok(VerificationReport {
        tool: "ssg".to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        suite: format!("p={p}"),
        p,
        passed: s.claims.len() - failed,
        failed,
        verdict: if failed == 0 { "pass" } else { "fail" }.to_string(),
        claims: s.claims,
    })
}
