use ffframes::construct::{gabor_frame, zauner_fiducial, DiffSet, GaborGroup};
use ffframes::field::unitary_field;
use ffframes::frame::{factor_gram_orthogonal_auto, factor_gram_unitary, naimark_complement};
use ffframes::search::{max_clique, BitGraph, Budget};
use ffframes::{Felt, Field, FieldCtx, FormSpace, FrameRecord, Mat};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn field_params() -> impl Strategy<Value = (u64, u32)> {
    prop::sample::select(vec![(2, 2), (2, 3), (3, 2), (5, 1), (5, 2), (7, 2), (2, 4), (3, 3)])
}

/// Schoolbook product of coefficient vectors, reduced by a monic modulus.
fn poly_mulmod(a: &[u64], b: &[u64], modulus: &[u64], p: u64) -> Vec<u64> {
    let m = modulus.len() - 1;
    let mut prod = vec![0u64; a.len() + b.len()];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    for k in (m..prod.len()).rev() {
        let c = prod[k];
        if c == 0 {
            continue;
        }
        for (t, &md) in modulus.iter().enumerate() {
            let idx = k - m + t;
            prod[idx] = (prod[idx] + p * p - c * md % p) % p;
        }
    }
    prod.truncate(m);
    prod.resize(m, 0);
    prod
}

fn brute_clique_number(g: &BitGraph) -> usize {
    let n = g.len();
    (0u32..1 << n)
        .filter(|&mask| {
            let vs: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
            g.is_clique(&vs)
        })
        .map(|m| m.count_ones() as usize)
        .max()
        .unwrap_or(0)
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_vec(f: &Field, d: usize, r: &mut ChaCha8Rng) -> Vec<Felt> {
    (0..d).map(|_| f.random(r)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn arithmetic_matches_polynomial_model((p, m) in field_params(), seed: u64) {
        let f = FieldCtx::new(p, m, None).unwrap();
        let mut r = rng(seed);
        for _ in 0..32 {
            let (a, b) = (f.random(&mut r), f.random(&mut r));
            let (ca, cb) = (f.coeffs(a), f.coeffs(b));
            let sum: Vec<u64> = ca.iter().zip(&cb).map(|(x, y)| (x + y) % p).collect();
            prop_assert_eq!(f.coeffs(f.add(a, b)), sum);
            prop_assert_eq!(f.coeffs(f.mul(a, b)), poly_mulmod(&ca, &cb, f.modulus(), p));
        }
    }

    #[test]
    fn generator_has_full_order((p, m) in field_params()) {
        let f = FieldCtx::new(p, m, None).unwrap();
        let mut x = f.one();
        for k in 1..f.order() {
            x = f.mul(x, f.zeta());
            prop_assert_eq!(x == f.one(), k == f.order() - 1);
        }
    }

    #[test]
    fn conjugation_is_an_involutive_automorphism(q in prop::sample::select(vec![2u64, 3, 4, 5, 7, 8, 9]), seed: u64) {
        let f = unitary_field(q).unwrap();
        let mut r = rng(seed);
        for _ in 0..32 {
            let (a, b) = (f.random(&mut r), f.random(&mut r));
            let c = |x| f.conj(x).unwrap();
            prop_assert_eq!(c(c(a)), a);
            prop_assert_eq!(c(f.mul(a, b)), f.mul(c(a), c(b)));
            prop_assert_eq!(c(f.add(a, b)), f.add(c(a), c(b)));
            let n = f.norm_to_base(a).unwrap();
            prop_assert!(f.in_fixed_field(n).unwrap());
            if !a.is_zero() {
                let s = f.solve_norm(n).unwrap();
                prop_assert_eq!(f.norm_to_base(s).unwrap(), n);
            }
        }
    }

    #[test]
    fn unitary_factorization_round_trip(q in prop::sample::select(vec![2u64, 3, 4, 5]), d in 1usize..5, extra in 0usize..4, seed: u64) {
        let f = unitary_field(q).unwrap();
        let psi = Mat::random(&f, d, d + extra, &mut rng(seed));
        let g = psi.conj_transpose().mul(&psi);
        let fr = factor_gram_unitary(&g).unwrap();
        prop_assert_eq!(fr.gram(), g.clone());
        prop_assert_eq!(fr.d(), g.rank());
    }

    #[test]
    fn orthogonal_factorization_round_trip(p in prop::sample::select(vec![3u64, 5, 7, 11]), d in 1usize..5, extra in 0usize..4, seed: u64) {
        let f = FieldCtx::new(p, 1, None).unwrap();
        let psi = Mat::random(&f, d, d + extra, &mut rng(seed));
        let g = psi.transpose().mul(&psi);
        let fr = factor_gram_orthogonal_auto(&g).unwrap();
        prop_assert_eq!(fr.gram(), g.clone());
        prop_assert_eq!(fr.d(), g.rank());
    }

    #[test]
    fn gram_kernel_equals_synthesis_kernel(q in prop::sample::select(vec![2u64, 3, 4]), d in 1usize..4, extra in 0usize..4, seed: u64) {
        let f = unitary_field(q).unwrap();
        let phi = Mat::random(&f, d, d + extra, &mut rng(seed));
        prop_assume!(phi.rank() == d);
        let fr = FrameRecord::standard(phi.clone(), ffframes::Case::U).unwrap();
        let k = fr.gram().kernel_basis();
        prop_assert_eq!(k.cols(), phi.kernel_basis().cols());
        prop_assert!(phi.mul(&k).is_zero());
    }

    #[test]
    fn naimark_of_naimark_has_the_original_gram(q in prop::sample::select(vec![3u64, 4, 5]), d in 1usize..3, seed: u64) {
        // an orthonormal-row frame scaled by a unit is tight with c = N(s) != 0
        let f = unitary_field(q).unwrap();
        let n = d + 2;
        let mut r = rng(seed);
        let space = FormSpace::complex_model(&f, n).unwrap();
        let s = Mat::random(&f, n, d, &mut r);
        let Ok(o) = space.orthonormalize(&s) else { return Ok(()) };
        prop_assume!(o.cols() == d);
        let fr = FrameRecord::standard(o.conj_transpose(), ffframes::Case::U).unwrap();
        let comp = naimark_complement(&fr, None).unwrap();
        prop_assert_eq!(comp.d(), n - d);
        let c = fr.frame_operator().scalar_value().unwrap();
        prop_assert_eq!(comp.gram(), Mat::identity(&f, n).scale(c).sub(&fr.gram()));
        prop_assert_eq!(naimark_complement(&comp, None).unwrap().gram(), fr.gram());
    }

    #[test]
    fn polarization_identity(q in prop::sample::select(vec![2u64, 3, 4, 5, 7]), d in 1usize..5, seed: u64) {
        let f = unitary_field(q).unwrap();
        let space = FormSpace::complex_model(&f, d).unwrap();
        let mut r = rng(seed);
        let (u, v) = (random_vec(&f, d, &mut r), random_vec(&f, d, &mut r));
        let w: Vec<Felt> = u.iter().zip(&v).map(|(&a, &b)| f.add(a, b)).collect();
        let ip = space.form_eval(&u, &v).unwrap();
        let lhs = f.sub(f.sub(space.quad(&w).unwrap(), space.quad(&u).unwrap()), space.quad(&v).unwrap());
        prop_assert_eq!(lhs, f.add(ip, f.conj(ip).unwrap()));
    }

    #[test]
    fn max_clique_matches_brute_force(n in 1usize..16, density in 0.1f64..0.9, seed: u64) {
        use rand::Rng;
        let mut r = rng(seed);
        let mut g = BitGraph::new(n);
        for a in 0..n {
            for b in a + 1..n {
                if r.gen_bool(density) {
                    g.add_edge(a, b);
                }
            }
        }
        let rep = max_clique(&g, None, seed, Budget::default());
        prop_assert!(rep.exhausted);
        prop_assert!(g.is_clique(&rep.best_clique));
        prop_assert_eq!(rep.certified_size, brute_clique_number(&g));
        let again = max_clique(&g, None, seed, Budget::default());
        prop_assert_eq!((&rep.best_clique, rep.nodes_explored), (&again.best_clique, again.nodes_explored));
    }

    #[test]
    fn modular_difference_set_iff_etf(n in 2usize..8, mask: u8, q in prop::sample::select(vec![3u64, 5, 7])) {
        let f = unitary_field(q).unwrap();
        let set: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        prop_assume!(!set.is_empty());
        prop_assume!((f.q().unwrap() + 1) % n as u64 == 0);
        let ds = DiffSet::new(n, set, f.characteristic()).unwrap();
        let fr = ffframes::construct::harmonic_frame(&ds, &f).unwrap();
        prop_assert_eq!(fr.classify().flags.is_etf, ds.is_modular_difference_set());
    }

    #[test]
    fn fiducial_rescaling_keeps_etf_parameters(k in 1u64..80) {
        // any unit multiple of a Zauner fiducial gives a rescaled ETF
        let g = GaborGroup::new(&[2, 2, 2], &ffframes::construct::f9()).unwrap();
        let f = ffframes::construct::f9();
        let phi = zauner_fiducial(3).unwrap();
        let s = f.zeta_pow(k);
        let scaled: Vec<Felt> = phi.iter().map(|&x| f.mul(s, x)).collect();
        let base = gabor_frame(&g, &phi).unwrap().classify();
        let p = gabor_frame(&g, &scaled).unwrap().classify();
        prop_assert!(p.flags.is_etf);
        let ns = f.norm_to_base(s).unwrap();
        prop_assert_eq!(p.a, base.a.map(|a| f.mul(ns, a)));
        prop_assert_eq!(p.c, base.c.map(|c| f.mul(ns, c)));
    }
}
