//! Property tests over seeded random inputs.

use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;

use njordan::algebra::ElementSampler;
use njordan::control::Anchor;
use njordan::defects::fit_theta_on;
use njordan::maps::PerturbationShape;
use njordan::{
    apply_j, combined_defect, generalized_distance, inner_derivation, jensen_defect, njordan_defect, njordan_sum,
    perturb, sample_elements, sample_unit_scalars, star_defect, AlgebraElement, AlgebraMap, ControlFunction,
    Distribution, PerturbationSpec, SampleSpec, UnitScalar,
};

fn cloud(dim: usize, count: usize, radius: f64, seed: u64) -> Vec<AlgebraElement> {
    sample_elements(&SampleSpec::new(dim, count, radius, Distribution::DenseGaussian, seed)).unwrap()
}

fn rel_close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1e-300)
}

fn unit_direction(dim: usize, seed: u64) -> AlgebraElement {
    ElementSampler::new(dim, seed).with_norm(Distribution::DenseGaussian, 1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn norm_is_a_cstar_norm(seed in any::<u64>(), dim in 1usize..5, re in -3.0f64..3.0, im in -3.0f64..3.0) {
        let pts = cloud(dim, 2, 3.0, seed);
        let (a, b) = (&pts[0], &pts[1]);
        let (na, nb) = (a.op_norm().unwrap(), b.op_norm().unwrap());
        prop_assert!((a + b).op_norm().unwrap() <= na + nb + 1e-9);
        prop_assert!((a * b).op_norm().unwrap() <= na * nb * (1.0 + 1e-12) + 1e-12);
        let c = Complex64::new(re, im);
        prop_assert!(rel_close(a.scale(c).op_norm().unwrap(), c.norm() * na, 1e-9));
        prop_assert!(rel_close(a.involution().op_norm().unwrap(), na, 1e-12));
        // C*-identity
        prop_assert!(rel_close((&a.involution() * a).op_norm().unwrap(), na * na, 1e-9));
    }

    #[test]
    fn involution_reverses_products(seed in any::<u64>(), dim in 1usize..5, re in -2.0f64..2.0, im in -2.0f64..2.0) {
        let pts = cloud(dim, 2, 2.0, seed);
        let (a, b) = (&pts[0], &pts[1]);
        let lhs = (a * b).involution();
        let rhs = &b.involution() * &a.involution();
        prop_assert!((&lhs - &rhs).max_abs() <= 1e-12 * (1.0 + lhs.max_abs()));
        let c = Complex64::new(re, im);
        let lin = (a.scale(c) + b).involution() - (a.involution().scale(c.conj()) + b.involution());
        prop_assert!(lin.max_abs() <= 1e-12 * (1.0 + a.max_abs() + b.max_abs()) * (1.0 + c.norm()));
    }

    #[test]
    fn powers_add_exponents(seed in any::<u64>(), dim in 1usize..5, m in 1u32..5, n in 1u32..4) {
        let a = &cloud(dim, 1, 2.0, seed)[0];
        let lhs = a.power(m + n).unwrap();
        let rhs = &a.power(m).unwrap() * &a.power(n).unwrap();
        let scale = lhs.op_norm().unwrap().max(1.0);
        prop_assert!((&lhs - &rhs).op_norm().unwrap() <= 1e-9 * scale);
    }

    #[test]
    fn njordan_sum_matches_brute_force(seed in any::<u64>(), dim in 1usize..5, n in 2u32..6) {
        let pts = cloud(dim, 2, 2.0, seed);
        let (b, a) = (&pts[0], &pts[1]);
        let d = inner_derivation(b.clone());
        // independent expansion straight on nalgebra matrices
        let am: &DMatrix<Complex64> = a.as_matrix();
        let bm: &DMatrix<Complex64> = b.as_matrix();
        let fa = bm * am - am * bm;
        let mut expect = DMatrix::<Complex64>::zeros(dim, dim);
        for i in 0..n {
            let mut term = DMatrix::<Complex64>::identity(dim, dim);
            for _ in 0..i {
                term = &term * am;
            }
            term = &term * &fa;
            for _ in 0..(n - 1 - i) {
                term = &term * am;
            }
            expect += term;
        }
        let got = njordan_sum(&d, a, n).unwrap();
        let scale = 1.0 + expect.iter().map(|z| z.norm()).fold(0.0, f64::max);
        prop_assert!((got.as_matrix() - &expect).iter().all(|z| z.norm() <= 1e-12 * scale));
        prop_assert!(njordan_defect(&d, a, n).unwrap() <= 1e-9 * scale);
    }

    #[test]
    fn combined_defect_triangle(seed in any::<u64>(), dim in 2usize..4, n in 2u32..5, k in 1u32..8) {
        let pts = cloud(dim, 5, 2.0, seed);
        let f = perturb(
            &inner_derivation(pts[0].clone()),
            PerturbationSpec::power(0.2, 0.5, unit_direction(dim, seed ^ 1)).unwrap(),
        );
        let mu = sample_unit_scalars(8).unwrap()[k as usize % 8];
        let (x, y, a, w) = (&pts[1], &pts[2], &pts[3], &pts[4]);
        let total = combined_defect(&f, mu, x, y, a, Some(w), n).unwrap();
        let parts = jensen_defect(&f, mu, x, y).unwrap() + njordan_defect(&f, a, n).unwrap() + star_defect(&f, w).unwrap();
        prop_assert!(total <= parts + 1e-9);
    }

    #[test]
    fn generalized_distance_is_a_pseudometric(seed in any::<u64>(), t1 in 0.0f64..0.3, t2 in 0.0f64..0.3, p in 0.2f64..0.9) {
        let pts = cloud(2, 30, 2.0, seed);
        let d = inner_derivation(pts[0].clone());
        let e = unit_direction(2, seed ^ 7);
        let g = perturb(&d, PerturbationSpec::power(t1, p, e.clone()).unwrap());
        let h = perturb(&d, PerturbationSpec::power(t2, 0.5, e).unwrap());
        let k = AlgebraMap::identity(2);
        let phi = ControlFunction::power_sum(1.0, p).unwrap();
        let dist = |u: &AlgebraMap, v: &AlgebraMap| generalized_distance(u, v, &phi, Anchor::XZeroZero, &pts).unwrap().value.value();
        prop_assert_eq!(dist(&g, &g), 0.0);
        prop_assert_eq!(dist(&g, &h), dist(&h, &g));
        prop_assert!(dist(&g, &k) <= dist(&g, &h) + dist(&h, &k) + 1e-9);
    }

    #[test]
    fn j_contracts_by_l(seed in any::<u64>(), theta in 0.01f64..0.2, p in prop::sample::select(vec![0.3, 0.5, 0.8])) {
        let pts = cloud(2, 40, 3.0, seed);
        let g = inner_derivation(pts[0].clone());
        let h = perturb(&g, PerturbationSpec::power(theta, p, unit_direction(2, seed ^ 3)).unwrap());
        let phi = ControlFunction::power_sum(1.0, p).unwrap();
        let before = generalized_distance(&g, &h, &phi, Anchor::XZeroZero, &pts).unwrap().value.value();
        let after = generalized_distance(&apply_j(&g), &apply_j(&h), &phi, Anchor::XZeroZero, &pts).unwrap().value.value();
        // the perturbations differ by θ′‖x‖^p E, so the ratio is exactly 2^{p−1}
        prop_assert!(after <= phi.l() * before + 1e-9);
        prop_assert!(rel_close(after, 2f64.powf(p - 1.0) * before, 1e-9));
    }

    #[test]
    fn control_scales_homogeneously(seed in any::<u64>(), p in 0.05f64..0.95, r in 0.05f64..0.45) {
        let pts = cloud(3, 4, 2.0, seed);
        let args: Vec<&AlgebraElement> = pts[..3].iter().collect();
        let doubled: Vec<AlgebraElement> = pts[..3].iter().map(|x| x.scale_real(2.0)).collect();
        let dref: Vec<&AlgebraElement> = doubled.iter().collect();
        let ps = ControlFunction::power_sum(1.3, p).unwrap();
        prop_assert!(rel_close(ps.eval(&dref).unwrap(), 2f64.powf(p) * ps.eval(&args).unwrap(), 1e-12));
        let pp = ControlFunction::product_power(1.3, r).unwrap();
        prop_assert!(rel_close(pp.eval(&dref).unwrap(), 2f64.powf(2.0 * r) * pp.eval(&args).unwrap(), 1e-12));
    }

    #[test]
    fn theta_hat_grows_with_the_cloud(seed in any::<u64>(), small in 3usize..15, extra in 1usize..15) {
        let spec = SampleSpec::new(2, small + extra, 2.0, Distribution::DenseGaussian, seed);
        let big = sample_elements(&spec).unwrap();
        let d = inner_derivation(big[0].clone());
        let f = perturb(&d, PerturbationSpec::power(0.1, 0.5, unit_direction(2, seed ^ 5)).unwrap());
        let shape = ControlFunction::power_sum(1.0, 0.5).unwrap();
        let mus: Vec<UnitScalar> = sample_unit_scalars(4).unwrap();
        let a = fit_theta_on(&f, &shape, &big[..small], &mus, 2).unwrap().theta_hat;
        let b = fit_theta_on(&f, &shape, &big, &mus, 2).unwrap().theta_hat;
        prop_assert!(b >= a);
    }

    #[test]
    fn bounded_perturbation_stays_below_c(seed in any::<u64>(), c in 0.0f64..2.0) {
        let pts = cloud(3, 10, 4.0, seed);
        let e = unit_direction(3, seed ^ 9);
        let spec = PerturbationSpec::new(PerturbationShape::Bounded { c }, e, false).unwrap();
        for x in &pts {
            prop_assert!(spec.term(x).unwrap().op_norm().unwrap() <= c * (1.0 + 1e-12));
        }
    }
}
