mod common;

use common::*;
use groundspace::cone::analyze_cone;
use groundspace::fixtures;
use groundspace::linalg::kernel_projection;
use groundspace::manybody::{embed, ff_lattice_3bit, klocal_dimension};
use groundspace::{
    build_klocal, eig_herm, ground_projection, image_intersection, is_ground_projection, loewner_leq, marginal_map,
    partial_trace, Engine, HermitianMatrix, OperatorSubspace, Projection, RunConfig, SiteSet, SiteSystem,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A hermitian matrix with a degenerate bottom eigenvalue of multiplicity `m`.
fn degenerate_hermitian(r: &mut ChaCha8Rng, n: usize, m: usize) -> HermitianMatrix {
    let top = random_subprojection(r, &Projection::identity(n), n - m);
    let v = top.basis().matmul(&gaussian_cmat(r, n - m, n - m));
    let mut a = HermitianMatrix::from_cmat(&v.matmul(&v.adjoint()));
    a.add_scaled(1.0, &top.matrix());
    a.add_scaled(-0.7, &HermitianMatrix::identity(n));
    a
}

fn small_system(r: &mut ChaCha8Rng) -> SiteSystem {
    let n = r.random_range(1..=3);
    let dims: Vec<usize> = (0..n).map(|_| r.random_range(2..=3)).collect();
    let engine = if r.random_bool(0.5) { Engine::ExactCommutative } else { Engine::FloatHermitian };
    SiteSystem::new(dims, engine).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn eigendecomposition_reconstructs(seed in any::<u64>(), n in 1usize..=7) {
        let a = random_hermitian(&mut rng(seed), n);
        let e = eig_herm(&a, 1e-9).unwrap();
        prop_assert!((&e.reconstruct() - &a).frobenius_norm() <= 1e-9 * a.frobenius_norm().max(1.0));
        prop_assert!(e.min_eigenvalue() <= e.max_eigenvalue());
    }

    #[test]
    fn ground_projection_commutes_and_ignores_shifts(seed in any::<u64>(), n in 2usize..=6, shift in -5.0f64..5.0, scale in 0.1f64..10.0) {
        let mut r = rng(seed);
        let m = r.random_range(1..=n);
        let a = degenerate_hermitian(&mut r, n, m);
        let p = ground_projection(&a, 1e-8).unwrap();
        prop_assert_eq!(p.rank(), m);
        let pm = p.matrix();
        let mut comm = pm.matmul(&a);
        comm.add_scaled(-1.0, &a.matmul(&pm));
        prop_assert!(comm.frobenius_norm() <= 1e-8);
        let mut shifted = a.scale(scale);
        shifted.add_scaled(shift, &HermitianMatrix::identity(n));
        prop_assert!(ground_projection(&shifted, 1e-8).unwrap().approx_eq(&p, 1e-7));
    }

    #[test]
    fn intersection_is_a_meet(seed in any::<u64>(), n in 2usize..=6) {
        let mut r = rng(seed);
        let id = Projection::identity(n);
        let draw = |r: &mut ChaCha8Rng| {
            let k = r.random_range(0..=n);
            random_subprojection(r, &id, k)
        };
        let (p, q, s) = (draw(&mut r), draw(&mut r), draw(&mut r));
        let tol = 1e-9;
        prop_assert!(image_intersection(&p, &p, tol).approx_eq(&p, 1e-7));
        prop_assert!(image_intersection(&p, &q, tol).approx_eq(&image_intersection(&q, &p, tol), 1e-7));
        let left = image_intersection(&image_intersection(&p, &q, tol), &s, tol);
        let right = image_intersection(&p, &image_intersection(&q, &s, tol), tol);
        prop_assert!(left.approx_eq(&right, 1e-7));
        let m = image_intersection(&p, &q, tol);
        prop_assert!(loewner_leq(&m, &p, 1e-7) && loewner_leq(&m, &q, 1e-7));
        // a planted common subspace survives
        let common = draw(&mut r);
        let pc = Projection::from_vectors(n, &[p.basis().columns(), common.basis().columns()].concat(), 1e-9).unwrap();
        let qc = Projection::from_vectors(n, &[q.basis().columns(), common.basis().columns()].concat(), 1e-9).unwrap();
        prop_assert!(loewner_leq(&common, &image_intersection(&pc, &qc, tol), 1e-7));
    }

    #[test]
    fn loewner_order_is_a_partial_order(seed in any::<u64>(), n in 2usize..=6) {
        let mut r = rng(seed);
        let a = r.random_range(0..=n);
        let q = random_subprojection(&mut r, &Projection::identity(n), a);
        let b = r.random_range(0..=a);
        let p = random_subprojection(&mut r, &q, b);
        let c = r.random_range(0..=b);
        let s = random_subprojection(&mut r, &p, c);
        prop_assert!(loewner_leq(&p, &p, 1e-9));
        prop_assert!(loewner_leq(&s, &p, 1e-7) && loewner_leq(&p, &q, 1e-7) && loewner_leq(&s, &q, 1e-7));
        prop_assert_eq!(loewner_leq(&q, &p, 1e-7), a == b);
        prop_assert!(loewner_leq(&q.complement(), &p.complement(), 1e-7));
    }

    #[test]
    fn projection_onto_subspace_is_orthogonal(seed in any::<u64>()) {
        let mut r = rng(seed);
        let inst = random_float_instance(&mut r);
        let (a, b) = (random_hermitian(&mut r, inst.n), random_hermitian(&mut r, inst.n));
        let pa = inst.u.project_onto(&a);
        prop_assert!((&inst.u.project_onto(&pa) - &pa).frobenius_norm() <= 1e-9 * a.frobenius_norm());
        let lhs = pa.inner(&b);
        let rhs = a.inner(&inst.u.project_onto(&b));
        prop_assert!((lhs - rhs).abs() <= 1e-9 * (1.0 + a.frobenius_norm() * b.frobenius_norm()));
        let x = inst.u.random_element(&mut r);
        prop_assert!((&inst.u.project_onto(&x) - &x).frobenius_norm() <= 1e-9 * x.frobenius_norm().max(1.0));
    }

    #[test]
    fn sections_annihilate_and_shrink(seed in any::<u64>()) {
        let mut r = rng(seed);
        let inst = random_float_instance(&mut r);
        let n = inst.n;
        let k = r.random_range(0..=n);
        let q = random_subprojection(&mut r, &Projection::identity(n), k);
        let j = r.random_range(0..=k);
        let p = random_subprojection(&mut r, &q, j);
        let lp = inst.u.linear_section(&p).unwrap();
        let lq = inst.u.linear_section(&q).unwrap();
        for b in &lp.basis {
            prop_assert!(p.annihilation_residual(b) <= 1e-7);
        }
        prop_assert!(lq.dim <= lp.dim);
        prop_assert_eq!(inst.u.linear_section(&Projection::zero(n)).unwrap().dim, inst.u.dim());
    }

    #[test]
    fn cone_witness_has_maximal_kernel(seed in any::<u64>()) {
        let mut r = rng(seed);
        let inst = random_float_instance(&mut r);
        let cfg = RunConfig::default();
        for p in candidate_projections(&mut r, &inst) {
            let d = analyze_cone(&p, &inst.u, &cfg).unwrap();
            prop_assert!(loewner_leq(&p, &d.q_max, 1e-6));
            prop_assert_eq!(d.is_ray, d.dim_k == 1);
            prop_assert!(d.span.len() == d.dim_k);
            match &d.interior_witness {
                Some(w) => {
                    prop_assert!((w.trace() - 1.0).abs() <= 1e-8);
                    prop_assert!(min_eigenvalue(w) >= -1e-8);
                    prop_assert!(p.annihilation_residual(w) <= 1e-6);
                    if !d.q_max.is_zero() {
                        prop_assert!(ground_projection(w, 1e-6).unwrap().approx_eq(&d.q_max, 1e-6));
                    }
                    prop_assert!(kernel_projection(w, 1e-6).unwrap().approx_eq(&d.q_max, 1e-6));
                }
                None => {
                    prop_assert_eq!(d.dim_k, 0);
                    prop_assert!(d.q_max.is_identity());
                }
            }
        }
    }

    #[test]
    fn exact_and_float_engines_agree(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (n, fs) = random_exact_functions(&mut r);
        let u = OperatorSubspace::from_functions(n, &fs).unwrap();
        let uf = u.to_float();
        let exact = RunConfig { engine: Some(Engine::ExactCommutative), ..RunConfig::default() };
        let float = RunConfig { engine: Some(Engine::FloatHermitian), ..RunConfig::default() };
        let mask = r.random_range(0..1u32 << n);
        let p = Projection::from_support(n, mask_to_support(n, mask)).unwrap();
        let de = analyze_cone(&p, &u, &exact).unwrap();
        let df = analyze_cone(&p, &uf, &float).unwrap();
        prop_assert_eq!(de.dim_k, df.dim_k);
        prop_assert!(de.q_max.approx_eq(&df.q_max, 1e-6));
    }

    #[test]
    fn partial_trace_is_adjoint_to_embedding(seed in any::<u64>()) {
        let mut r = rng(seed);
        let sys = small_system(&mut r);
        let traced = SiteSet(r.random_range(0..1u64 << sys.n_sites()));
        let kept = traced.complement(sys.n_sites());
        let a = random_hermitian(&mut r, sys.total_dim());
        let b = random_hermitian(&mut r, sys.restrict(kept).total_dim());
        let lhs = partial_trace(&a, &sys, traced).unwrap().inner(&b);
        let rhs = a.inner(&embed(&b, &sys, kept).unwrap());
        prop_assert!((lhs - rhs).abs() <= 1e-9 * (1.0 + a.frobenius_norm() * b.frobenius_norm()));
        prop_assert!((partial_trace(&a, &sys, traced).unwrap().trace() - a.trace()).abs() <= 1e-9 * (1.0 + a.frobenius_norm()));
    }

    #[test]
    fn marginals_are_consistent(seed in any::<u64>()) {
        let mut r = rng(seed);
        let sys = small_system(&mut r);
        let k = r.random_range(1..=sys.n_sites());
        let a = random_hermitian(&mut r, sys.total_dim());
        let m = marginal_map(&a, &sys, k).unwrap();
        prop_assert!(m.max_inconsistency().unwrap() <= 1e-9 * (1.0 + a.frobenius_norm()));
    }

    #[test]
    fn marginals_only_see_the_klocal_part(seed in any::<u64>()) {
        let mut r = rng(seed);
        let sys = small_system(&mut r);
        let k = r.random_range(1..=sys.n_sites());
        let u = build_klocal(&sys, k).unwrap().to_float();
        let mut a = random_hermitian(&mut r, sys.total_dim());
        if sys.is_classical() {
            a = HermitianMatrix::diagonal(&a.diagonal_values());
        }
        let full = marginal_map(&a, &sys, k).unwrap();
        let projected = marginal_map(&u.project_onto(&a), &sys, k).unwrap();
        prop_assert!(full.distance(&projected) <= 1e-9 * (1.0 + a.frobenius_norm()));
    }

    #[test]
    fn klocal_dimension_matches_construction(seed in any::<u64>()) {
        let mut r = rng(seed);
        let sys = small_system(&mut r);
        let k = r.random_range(1..=sys.n_sites());
        let u = build_klocal(&sys, k).unwrap();
        prop_assert_eq!(u.dim(), klocal_dimension(&sys, k));
        prop_assert!(u.contains_identity());
    }
}

#[test]
fn frustration_free_lattice_lies_inside_the_ground_lattice() {
    let q = ff_lattice_3bit();
    let u = fixtures::three_bit_subspace();
    let cfg = RunConfig { engine: Some(Engine::ExactCommutative), ..RunConfig::default() };
    for node in &q.nodes {
        assert!(is_ground_projection(node, &u, &cfg).unwrap(), "{node:?}");
    }
}
