//! Worked instances for operations whose expected values come from
//! independent constructions: cones of surjections, a hand-built pullback
//! complex, the factorization chain, and two-pushout inputs built to
//! share their s-component.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use trideg_core::algebra::{a3_presentation, Algebra};
use trideg_core::complex::{Complex, MapMatrix};
use trideg_core::degeneration::{
    deg_pullback, factorization_chain, ged_pushout, left_witness, right_witness_zero_z,
    shear_right_witness, two_pushout_theorem,
};
use trideg_core::demos::{a2_algebra, simple_resolution};
use trideg_core::grothendieck::k0_class;
use trideg_core::morphism::{hom_dim_mod_homotopy, permutation_iso, ChainMap};
use trideg_core::random::{
    random_chain_map, random_complex, random_nilpotent_endo, suite_algebras, ComplexShape,
};
use trideg_core::triangle::{cone_complex, find_iso, is_iso};

#[test]
fn cone_of_resolved_surjection_is_shifted_kernel() {
    // rho: P_1 -> S_1 realized on resolutions; cone(rho) ~ ker(rho)[1] = P_2[1]
    let alg = a2_algebra(2).unwrap();
    let p1 = Complex::stalk(Arc::clone(&alg), 0, 0);
    let res = simple_resolution(&alg).unwrap();
    let mut comp = BTreeMap::new();
    let mut m = MapMatrix::zero(1, 1);
    m.set(0, 0, alg.idempotent(0));
    comp.insert(0, m);
    let rho = ChainMap::new(p1, res, comp).unwrap();
    let cone = cone_complex(&rho).unwrap();
    let kernel_shift = Complex::stalk(Arc::clone(&alg), 1, 0).shift(1);
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    assert!(find_iso(&cone, &kernel_shift, 64, &mut rng)
        .unwrap()
        .is_some());
}

#[test]
fn pullback_matches_hand_formula() {
    // u: P_2 -> P_1 the arrow action, v = 0: the pullback complex has
    // terms M^n (+) Z^n (+) Z^{n-1} and differential rows
    // (d_M, 0, 0), (0, d_Z, 0), (-u, v, -d_Z)
    let alg = a2_algebra(2).unwrap();
    let m_obj = Complex::stalk(Arc::clone(&alg), 1, 0);
    let z_obj = Complex::stalk(Arc::clone(&alg), 0, 0);
    let mut comp = BTreeMap::new();
    let mut mat = MapMatrix::zero(1, 1);
    mat.set(0, 0, alg.path_elem(alg.arrow_path(0)));
    comp.insert(0, mat);
    let u = ChainMap::new(m_obj.clone(), z_obj.clone(), comp).unwrap();
    let v = ChainMap::zero(&z_obj, &z_obj);
    let pb = deg_pullback(&u, &v).unwrap();

    let mut terms = BTreeMap::new();
    terms.insert(0, vec![1usize, 0]);
    terms.insert(1, vec![0]);
    let mut d0 = MapMatrix::zero(1, 2);
    d0.set(0, 0, alg.neg(&alg.path_elem(alg.arrow_path(0))));
    let mut diffs = BTreeMap::new();
    diffs.insert(0, d0);
    let expected = Complex::new(Arc::clone(&alg), terms, diffs).unwrap();
    assert_eq!(pb.n, expected);
    pb.witness.verify().unwrap();
}

#[test]
fn pushout_with_zero_v_equals_left_witness() {
    let alg = a2_algebra(3).unwrap();
    let z = simple_resolution(&alg).unwrap();
    let m = Complex::stalk(Arc::clone(&alg), 0, 0);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let u_prime = random_chain_map(&z, &m, &mut rng).unwrap();
    let po = ged_pushout(&u_prime, &ChainMap::zero(&z, &z)).unwrap();
    let lw = left_witness(&z, &ChainMap::zero(&z, &z), &u_prime).unwrap();
    assert_eq!(po.n, lw.n);
    assert_eq!(po.witness.triangle.f, lw.triangle.f);
}

#[test]
fn right_witness_comparison_recovers_z() {
    // the transported certificate of a pullback witness exhibits
    // cone(first map) ~ Z
    let algs = suite_algebras(2);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..5 {
        let alg = &algs[rng.gen_range(0..algs.len())];
        let shape = ComplexShape {
            max_amplitude: 1,
            max_per_degree: 2,
            max_total: 3,
        };
        let m = random_complex(alg, shape, &mut rng);
        let z = random_complex(alg, shape, &mut rng);
        let u = random_chain_map(&m, &z, &mut rng).unwrap();
        let v = random_chain_map(&z, &z, &mut rng).unwrap();
        let pb = deg_pullback(&u, &v).unwrap();
        let cone_first = cone_complex(&pb.witness.triangle.f).unwrap();
        let found = find_iso(&cone_first, &pb.witness.z, 64, &mut rng).unwrap();
        assert!(found.is_some());
    }
}

#[test]
fn factorization_with_identity_nu1_gives_iso() {
    let alg = a2_algebra(2).unwrap();
    let z = simple_resolution(&alg).unwrap();
    let m = Complex::stalk(Arc::clone(&alg), 0, 0);
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let w = random_chain_map(&z, &m, &mut rng).unwrap();
    let nu2 = random_nilpotent_endo(&z, 4, &mut rng).unwrap();
    let out = factorization_chain(&w, &ChainMap::identity(&z), &nu2).unwrap();
    assert!(out.verdict);
    assert!(is_iso(&out.comparison).unwrap().is_some());
}

#[test]
fn factorization_random_nilpotents_on_a3() {
    let alg = Arc::new(Algebra::build(a3_presentation(2)).unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..5 {
        let shape = ComplexShape {
            max_amplitude: 1,
            max_per_degree: 2,
            max_total: 3,
        };
        let z = random_complex(&alg, shape, &mut rng);
        let m = random_complex(&alg, shape, &mut rng);
        let w = random_chain_map(&z, &m, &mut rng).unwrap();
        let nu1 = random_nilpotent_endo(&z, 4, &mut rng).unwrap();
        let nu2 = random_nilpotent_endo(&z, 4, &mut rng).unwrap();
        let out = factorization_chain(&w, &nu1, &nu2).unwrap();
        assert!(out.verdict);
        out.triangle.verify().unwrap();
        // the iterated pushout agrees with the one-step pushout
        let iterated = ged_pushout(&out.g2.r, &nu1).unwrap();
        let found = find_iso(&iterated.n, &out.g12.n, 128, &mut rng).unwrap();
        assert!(found.is_some());
    }
}

#[test]
fn two_pushout_on_sheared_pair() {
    let alg = a2_algebra(3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let z = simple_resolution(&alg).unwrap();
    let m = Complex::stalk(Arc::clone(&alg), 0, 0);
    let u = random_chain_map(&m, &z, &mut rng).unwrap();
    let v = random_nilpotent_endo(&z, 4, &mut rng).unwrap();
    let pb = deg_pullback(&u, &v).unwrap();
    let eta = random_chain_map(&m, &z, &mut rng).unwrap();
    let w2 = shear_right_witness(&pb.witness, &eta).unwrap();
    let (s1, _) = pb.witness.right_components().unwrap();
    let (s2, _) = w2.right_components().unwrap();
    assert_eq!(s1, s2);
    let out = two_pushout_theorem(&pb.witness, &w2, 64, &mut rng).unwrap();
    assert!(out.verdict);
    out.witness.verify().unwrap();
    assert_eq!(k0_class(&out.x), k0_class(&out.y));
}

#[test]
fn two_pushout_with_zero_second_witness() {
    // Z' = 0 degenerates the construction: X ~ cone(t), Y ~ cone(u)
    let alg = a2_algebra(2).unwrap();
    let z = simple_resolution(&alg).unwrap();
    let m = Complex::stalk(Arc::clone(&alg), 0, 0);
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let u = random_chain_map(&m, &z, &mut rng).unwrap();
    let pb = deg_pullback(&u, &ChainMap::identity(&z)).unwrap();
    let (s, t) = pb.witness.right_components().unwrap();
    let w2 = right_witness_zero_z(&s).unwrap();
    let out = two_pushout_theorem(&pb.witness, &w2, 64, &mut rng).unwrap();
    assert!(out.verdict);
    let cone_t = cone_complex(&t).unwrap();
    let cone_u = cone_complex(&u).unwrap();
    assert!(find_iso(&out.x, &cone_t, 64, &mut rng).unwrap().is_some());
    assert!(find_iso(&out.y, &cone_u, 64, &mut rng).unwrap().is_some());
}

#[test]
fn hom_dimension_invariant_under_term_permutation() {
    let algs = suite_algebras(2);
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mut checked = 0;
    while checked < 20 {
        let alg = &algs[rng.gen_range(0..algs.len())];
        let x = random_complex(alg, ComplexShape::default(), &mut rng);
        let y = random_complex(alg, ComplexShape::default(), &mut rng);
        let base = hom_dim_mod_homotopy(&x, &y).unwrap();
        // permute the terms of x randomly
        let mut perms = BTreeMap::new();
        for (&deg, list) in x.terms() {
            let mut p: Vec<usize> = (0..list.len()).collect();
            for i in (1..p.len()).rev() {
                p.swap(i, rng.gen_range(0..=i));
            }
            perms.insert(deg, p);
        }
        let (permuted, _, _) = permutation_iso(&x, &perms).unwrap();
        let after = hom_dim_mod_homotopy(&permuted, &y).unwrap();
        assert_eq!(base, after);
        checked += 1;
    }
}

#[test]
fn iso_implies_equal_homology() {
    let algs = suite_algebras(3);
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let mut hits = 0;
    for _ in 0..30 {
        let alg = &algs[rng.gen_range(0..algs.len())];
        let x = random_complex(alg, ComplexShape::default(), &mut rng);
        let y = x.shift(2).shift(-2);
        if let Some(found) = find_iso(&x, &y, 16, &mut rng).unwrap() {
            assert_eq!(
                found.map.source().homology_dims(),
                found.map.target().homology_dims()
            );
            hits += 1;
        }
    }
    assert!(hits > 0);
}
