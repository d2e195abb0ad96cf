mod common;

use common::{diagonal_foot_2x2, newton_polar, rel_err, rng};
use mostow_geo::linalg::{exp_hermitian, unitarity_defect, ComplexMatrix, HermitianMatrix, PdMatrix};
use mostow_geo::mostow::{
    group_decompose, minimality_witness, mostow_split, mostow_uniqueness_witness, project_from,
    project_to_exp_subspace, projection_contraction_check, projection_gradient, projection_objective,
    ProjectionOptions,
};
use mostow_geo::sample;
use mostow_geo::triple::{complement, SubspaceBasis};
use mostow_geo::GeoError;

fn opts() -> ProjectionOptions {
    ProjectionOptions::default()
}

fn subspaces(n: usize) -> Vec<SubspaceBasis> {
    vec![
        SubspaceBasis::diagonal(n),
        SubspaceBasis::real_symmetric(n),
        SubspaceBasis::traceless(n),
        SubspaceBasis::full(n),
    ]
}

#[test]
fn diagonal_projection_matches_closed_form() {
    let mut r = rng(40);
    let e = SubspaceBasis::diagonal(2);
    for _ in 0..30 {
        let p = sample::random_pd(&mut r, 2, 3.0);
        let (foot, distance) = diagonal_foot_2x2(p.as_complex());
        let got = project_to_exp_subspace(&p, &e, &opts()).unwrap();
        assert!(got.converged);
        assert!(got.foot.as_complex().dist_fro(&foot) <= 1e-8 * foot.norm_fro().max(1.0));
        assert!((got.distance - distance).abs() <= 1e-8);
        assert!(got.orthogonality <= 1e-8);
    }
}

#[test]
fn worked_two_by_two_example() {
    let p = PdMatrix::from_real_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap();
    let (foot, distance) = diagonal_foot_2x2(p.as_complex());
    assert!((distance - 2f64.sqrt() * 0.5f64.atanh()).abs() < 1e-15);
    assert!(foot.dist_fro(&ComplexMatrix::identity(2).scale(3f64.sqrt())) < 1e-15);

    let split = mostow_split(&p, &SubspaceBasis::diagonal(2), &opts()).unwrap();
    let e_want = ComplexMatrix::identity(2).scale(3f64.powf(0.25));
    assert!(split.e.as_complex().dist_fro(&e_want) < 1e-9);
    let f_want = p.as_complex().scale(1.0 / 3f64.sqrt());
    assert!(split.f.as_complex().dist_fro(&f_want) < 1e-9);
    let sx = HermitianMatrix::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
    assert!(split.f.log().sub(&sx.scale(3f64.ln() / 2.0)).norm_fro() < 1e-9);
    assert!(rel_err(&split.recompose(), p.as_complex()) < 1e-12);
}

#[test]
fn scalar_matrix_onto_traceless() {
    let p = PdMatrix::new(HermitianMatrix::identity(2).scale(2.0)).unwrap();
    let r = project_to_exp_subspace(&p, &SubspaceBasis::traceless(2), &opts()).unwrap();
    assert!(r.foot.as_complex().dist_fro(&ComplexMatrix::identity(2)) < 1e-12);
    assert!((r.distance - 2f64.sqrt() * 2f64.ln()).abs() < 1e-12);
}

#[test]
fn gradient_matches_central_differences() {
    let mut r = rng(41);
    let h = 1e-6;
    let mut checked = 0;
    for n in [2, 3] {
        for e in subspaces(n) {
            for _ in 0..13 {
                let p = sample::random_pd(&mut r, n, 2.0);
                let y = sample::random_in_subspace(&mut r, &e, 2.0);
                let g = projection_gradient(&p, &e, &y).unwrap();
                let analytic = e.coefficients(&g);
                let fd: Vec<f64> = e
                    .basis()
                    .iter()
                    .map(|b| {
                        let plus = projection_objective(&p, &y.axpy(h, b)).unwrap();
                        let minus = projection_objective(&p, &y.axpy(-h, b)).unwrap();
                        (plus - minus) / (2.0 * h)
                    })
                    .collect();
                let diff: f64 = analytic.iter().zip(&fd).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
                let scale: f64 = fd.iter().map(|v| v * v).sum::<f64>().sqrt();
                assert!(diff <= 1e-5 * scale.max(1e-3), "n={n} dim={} rel {}", e.dim(), diff / scale);
                checked += 1;
            }
        }
    }
    assert!(checked >= 100);
}

#[test]
fn projection_postconditions() {
    let mut r = rng(42);
    for e in subspaces(3) {
        for _ in 0..10 {
            let p = sample::random_pd(&mut r, 3, 3.0);
            let res = project_to_exp_subspace(&p, &e, &opts()).unwrap();
            assert!(res.converged);
            let relog = exp_hermitian(&res.log_foot).unwrap();
            assert!(rel_err(relog.as_complex(), res.foot.as_complex()) <= 1e-10);
            assert!(e.distance_from(&res.log_foot) <= 1e-10 * res.log_foot.norm_fro().max(1.0));
            assert!(res.orthogonality <= 1e-8);
            assert!(minimality_witness(&p, &e, &res, 20, 0.5, 9).unwrap() >= -1e-12);

            let again = project_to_exp_subspace(&res.foot, &e, &opts()).unwrap();
            assert!(rel_err(again.foot.as_complex(), res.foot.as_complex()) <= 1e-8);
        }
    }
}

#[test]
fn point_of_exp_e_projects_to_itself() {
    let mut r = rng(43);
    let e = SubspaceBasis::real_symmetric(3);
    let p = exp_hermitian(&sample::random_in_subspace(&mut r, &e, 2.0)).unwrap();
    let res = project_to_exp_subspace(&p, &e, &opts()).unwrap();
    assert!(res.distance < 1e-10);
    let (d, dp) = projection_contraction_check(&p, &p, &e, &opts()).unwrap();
    assert_eq!((d, dp), (0.0, 0.0));
    let q = exp_hermitian(&sample::random_in_subspace(&mut r, &e, 2.0)).unwrap();
    let (d, dp) = projection_contraction_check(&p, &q, &e, &opts()).unwrap();
    assert!((d - dp).abs() < 1e-8);
}

#[test]
fn projection_contracts_distances() {
    let mut r = rng(44);
    for i in 0..60 {
        let e = &subspaces(3)[i % 4];
        let p1 = sample::random_pd(&mut r, 3, 3.0);
        let p2 = sample::random_pd(&mut r, 3, 3.0);
        let (d, dp) = projection_contraction_check(&p1, &p2, e, &opts()).unwrap();
        assert!(dp <= d + 1e-8);
    }
}

#[test]
fn split_is_unique_across_restarts() {
    let mut r = rng(45);
    for e in subspaces(3) {
        let a = sample::random_pd(&mut r, 3, 3.0);
        assert!(mostow_uniqueness_witness(&a, &e, &opts(), 3).unwrap() <= 1e-6);
    }
}

#[test]
fn split_degenerate_subspaces() {
    let mut r = rng(46);
    let a = sample::random_pd(&mut r, 3, 3.0);

    let s = mostow_split(&a, &SubspaceBasis::zero(3), &opts()).unwrap();
    assert!(s.e.as_complex().dist_fro(&ComplexMatrix::identity(3)) < 1e-14);
    assert!(rel_err(s.f.as_complex(), a.as_complex()) < 1e-12);

    let s = mostow_split(&a, &SubspaceBasis::full(3), &opts()).unwrap();
    assert!(rel_err(s.e.as_complex(), a.sqrt().as_complex()) < 1e-9);
    assert!(s.f.as_complex().dist_fro(&ComplexMatrix::identity(3)) < 1e-8);
}

#[test]
fn split_of_points_in_exp_e_and_exp_f() {
    let mut r = rng(47);
    let e = SubspaceBasis::real_symmetric(3);
    let f = complement(&e);

    let a = exp_hermitian(&sample::random_in_subspace(&mut r, &e, 2.0)).unwrap();
    let s = mostow_split(&a, &e, &opts()).unwrap();
    assert!(rel_err(s.e.as_complex(), a.sqrt().as_complex()) < 1e-9);
    assert!(s.f.as_complex().dist_fro(&ComplexMatrix::identity(3)) < 1e-9);

    let a = exp_hermitian(&sample::random_in_subspace(&mut r, &f, 2.0)).unwrap();
    let s = mostow_split(&a, &e, &opts()).unwrap();
    assert!(s.e.as_complex().dist_fro(&ComplexMatrix::identity(3)) < 1e-9);
    assert!(rel_err(s.f.as_complex(), a.as_complex()) < 1e-9);
}

#[test]
fn group_decompose_examples() {
    let mut r = rng(48);
    let e = SubspaceBasis::real_symmetric(3);
    let f_space = complement(&e);

    let u = sample::random_unitary(&mut r, 3);
    let out = group_decompose(u.as_complex(), &e, &opts()).unwrap();
    assert!(out.k.as_complex().dist_fro(u.as_complex()) < 1e-12);
    assert!(out.f.as_complex().dist_fro(&ComplexMatrix::identity(3)) < 1e-12);
    assert!(out.e.as_complex().dist_fro(&ComplexMatrix::identity(3)) < 1e-12);

    let f0 = exp_hermitian(&sample::random_in_subspace(&mut r, &f_space, 1.5)).unwrap();
    let e0 = exp_hermitian(&sample::random_in_subspace(&mut r, &e, 1.5)).unwrap();
    let x = f0.as_complex() * e0.as_complex();
    let out = group_decompose(&x, &e, &opts()).unwrap();
    assert!(out.k.as_complex().dist_fro(&ComplexMatrix::identity(3)) < 1e-8);
    assert!(rel_err(out.f.as_complex(), f0.as_complex()) < 1e-8);
    assert!(rel_err(out.e.as_complex(), e0.as_complex()) < 1e-8);
}

#[test]
fn group_decompose_residuals() {
    let mut r = rng(49);
    for i in 0..60 {
        let n = 2 + i % 4;
        let e = &subspaces(n)[i % 4];
        let x = sample::random_gl(&mut r, n, 3.0);
        let out = group_decompose(&x, e, &opts()).unwrap();
        let res = out.residuals(&x, e);
        assert!(res.max() <= 1e-8, "{res:?}");
    }
}

#[test]
fn trivial_subspace_gives_classical_polar() {
    let mut r = rng(50);
    for _ in 0..20 {
        let x = sample::random_gl(&mut r, 4, 3.0);
        let out = group_decompose(&x, &SubspaceBasis::zero(4), &opts()).unwrap();
        assert!(out.k.as_complex().dist_fro(&newton_polar(&x)) <= 1e-8);
        assert!(out.e.as_complex().dist_fro(&ComplexMatrix::identity(4)) < 1e-14);
        let abs = out.f.as_complex() * out.f.as_complex();
        assert!(rel_err(&abs, &(&x.adjoint() * &x)) < 1e-12);
        assert!(unitarity_defect(out.k.as_complex()) < 1e-12);
    }
}

#[test]
fn input_validation() {
    let p = PdMatrix::identity(2);
    let non_triple = mostow_geo::triple::orthonormalize(&[
        HermitianMatrix::from_real_diagonal(&[1.0, 0.0]),
        HermitianMatrix::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap(),
    ])
    .unwrap();
    assert!(matches!(project_to_exp_subspace(&p, &non_triple, &opts()), Err(GeoError::Validation(_))));
    assert!(matches!(
        project_to_exp_subspace(&p, &SubspaceBasis::diagonal(3), &opts()),
        Err(GeoError::Shape { .. })
    ));
    let bad = ProjectionOptions { tol: 0.0, max_iter: 10 };
    assert!(project_to_exp_subspace(&p, &SubspaceBasis::diagonal(2), &bad).is_err());
    let singular = ComplexMatrix::from_real_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]).unwrap();
    assert_eq!(
        group_decompose(&singular, &SubspaceBasis::diagonal(2), &opts()).unwrap_err(),
        GeoError::Singular
    );
}

#[test]
fn unconverged_runs_are_flagged() {
    let mut r = rng(51);
    let p = sample::random_pd(&mut r, 3, 3.0);
    let e = SubspaceBasis::real_symmetric(3);
    let short = ProjectionOptions { tol: 1e-14, max_iter: 1 };
    let init = HermitianMatrix::zeros(3);
    let res = project_from(&p, &e, &short, &init).unwrap();
    assert!(!res.converged);
    assert!(matches!(res.require_converged(), Err(GeoError::NonConvergence { .. })));
}
