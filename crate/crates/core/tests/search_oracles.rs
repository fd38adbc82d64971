use std::collections::BTreeSet;

use ffframes::construct::sphere_ntf;
use ffframes::field::unitary_field;
use ffframes::search::{build_clique_instance, find_clique, modular_difference_sets, Budget};
use ffframes::{Felt, Field, FieldCtx, FormSpace};

/// `(q^d - (-1)^d)(q^{d-1} - (-1)^{d-1}) / (q^2 - 1)`
fn isotropic_line_count(q: i128, d: u32) -> i128 {
    let s = |k: u32| if k % 2 == 0 { 1 } else { -1 };
    (q.pow(d) - s(d)) * (q.pow(d - 1) - s(d - 1)) / (q * q - 1)
}

/// `q^{d-1} (q^d + (-1)^{d+1}) / (q + 1)`
fn unit_line_count(q: i128, d: u32) -> i128 {
    let s = if d % 2 == 0 { -1 } else { 1 };
    q.pow(d - 1) * (q.pow(d) + s) / (q + 1)
}

fn all_vectors(f: &Field, d: usize) -> Vec<Vec<Felt>> {
    let elems: Vec<Felt> = f.elements().collect();
    let mut out = vec![vec![]];
    for _ in 0..d {
        out = out
            .into_iter()
            .flat_map(|v| {
                elems.iter().map(move |&x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

fn hermitian(f: &Field, u: &[Felt], v: &[Felt]) -> Felt {
    u.iter()
        .zip(v)
        .fold(f.zero(), |acc, (&a, &b)| f.add(acc, f.mul(f.conj(a).unwrap(), b)))
}

/// Lines as sets of their nonzero points.
fn lines_where(f: &Field, d: usize, keep: impl Fn(Felt) -> bool) -> BTreeSet<Vec<Vec<u32>>> {
    all_vectors(f, d)
        .into_iter()
        .filter(|v| v.iter().any(|x| !x.is_zero()) && keep(hermitian(f, v, v)))
        .map(|v| {
            let mut pts: Vec<Vec<u32>> = f
                .elements()
                .filter(|s| !s.is_zero())
                .map(|s| v.iter().map(|&x| f.mul(s, x).raw()).collect())
                .collect();
            pts.sort();
            pts
        })
        .collect()
}

#[test]
fn isotropic_line_counts_match_closed_form() {
    for (q, d) in [(2u64, 2usize), (2, 3), (3, 2), (3, 3), (2, 4), (4, 3)] {
        let f = unitary_field(q).unwrap();
        let space = FormSpace::complex_model(&f, d).unwrap();
        let lines = space.enumerate_isotropic_lines().unwrap();
        assert_eq!(lines.len() as i128, isotropic_line_count(q as i128, d as u32), "q={q} d={d}");
        if q.pow(2 * d as u32) <= 1 << 16 {
            assert_eq!(lines.len(), lines_where(&f, d, |x| x.is_zero()).len());
        }
    }
}

#[test]
fn clique_instance_sizes() {
    for (p, d, want) in [(3u64, 5usize, 2440usize), (2, 6, 693)] {
        let f = FieldCtx::new(p, 2, None).unwrap();
        let inst = build_clique_instance(&FormSpace::complex_model(&f, d).unwrap()).unwrap();
        assert_eq!(inst.vertices.len(), want);
        assert_eq!(isotropic_line_count(p as i128, d as u32), want as i128);
    }
}

#[test]
fn small_graph_matches_brute_force_adjacency() {
    let f = unitary_field(3).unwrap();
    let inst = build_clique_instance(&FormSpace::complex_model(&f, 2).unwrap()).unwrap();
    assert_eq!(inst.vertices.len(), 4);
    for a in 0..4 {
        for b in 0..4 {
            let ip = hermitian(&f, &inst.vertices[a], &inst.vertices[b]);
            let want = a != b && f.pow(ip, 4) == f.one();
            assert_eq!(inst.graph.adjacent(a, b), want);
        }
    }
}

#[test]
fn exhaustive_search_on_small_instance() {
    let f = unitary_field(2).unwrap();
    let inst = build_clique_instance(&FormSpace::complex_model(&f, 3).unwrap()).unwrap();
    let rep = find_clique(&inst);
    assert!(rep.exhausted);
    assert!(inst.verify_clique(&rep.best_clique));
    let n = inst.vertices.len();
    let brute = (0u32..1 << n)
        .filter(|&m| {
            let vs: Vec<usize> = (0..n).filter(|&i| m >> i & 1 == 1).collect();
            inst.graph.is_clique(&vs)
        })
        .map(u32::count_ones)
        .max()
        .unwrap();
    assert_eq!(rep.certified_size, brute as usize);
}

#[test]
fn search_is_deterministic_per_seed() {
    let f = FieldCtx::new(2, 2, None).unwrap();
    let inst = build_clique_instance(&FormSpace::complex_model(&f, 6).unwrap())
        .unwrap()
        .with_target(27)
        .with_seed(7);
    let a = find_clique(&inst);
    let b = find_clique(&inst);
    assert_eq!(a.best_clique, b.best_clique);
    assert_eq!(a.nodes_explored, b.nodes_explored);
    assert_eq!(a.certified_size, 27);
}

#[test]
fn exhausted_budget_is_reported() {
    let f = FieldCtx::new(3, 2, None).unwrap();
    let inst = build_clique_instance(&FormSpace::complex_model(&f, 5).unwrap())
        .unwrap()
        .with_target(100)
        .with_budget(Budget {
            nodes: 50,
            time: std::time::Duration::from_secs(60),
        });
    let rep = find_clique(&inst);
    assert!(rep.budget_exceeded);
    assert!(!rep.exhausted);
    assert!(inst.verify_clique(&rep.best_clique));
}

#[test]
fn sphere_sizes_match_closed_form_and_brute_force() {
    for (d, q) in [(2usize, 2u64), (3, 2), (2, 3), (3, 3)] {
        let f = unitary_field(q).unwrap();
        let fr = sphere_ntf(d, &f).unwrap();
        assert_eq!(fr.n() as i128, unit_line_count(q as i128, d as u32));
        // every nonisotropic line carries q + 1 unit vectors, one per frame vector up to phase
        let nonisotropic = lines_where(&f, d, |x| !x.is_zero()).len() as u64;
        assert_eq!(fr.n() as u64, nonisotropic);
    }
}

#[test]
fn difference_sets_of_small_groups() {
    // translates of {0, 1, 3} and {0, 4, 6} are the only 3-subsets with odd constant counts
    let sets = modular_difference_sets(7, 2).unwrap();
    for ds in &sets {
        assert!(ds.is_modular_difference_set());
    }
    let triples = sets.iter().filter(|s| s.elements().len() == 3).count();
    assert_eq!(triples, 14);
}
