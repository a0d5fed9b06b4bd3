//! Defect functionals and empirical fitting of the control constant θ.
//!
//! The combined defect is the norm of one summed expression
//!
//! ```text
//! μf((x+y)/2) + μf((x−y)/2) − f(μx)            Jensen part
//!   + f(aⁿ) − Σ_{i<n} aⁱ f(a) a^{n−1−i}          n-Jordan part
//!   + f(w*) − f(w)*                              star part (4-argument form)
//! ```
//!
//! where the n-Jordan part subtracts the whole sum. The individual parts are
//! exposed as well since each specialization of the arguments isolates one.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{sample_elements, AlgebraElement, SampleSpec, UnitScalar};
use crate::control::{refs, ControlFunction, ExtReal};
use crate::error::{Error, Result};
use crate::maps::AlgebraMap;

fn jensen_expr(f: &AlgebraMap, mu: UnitScalar, x: &AlgebraElement, y: &AlgebraElement) -> Result<AlgebraElement> {
    let m = mu.value();
    let plus = (x + y).scale_real(0.5);
    let minus = (x - y).scale_real(0.5);
    Ok(f.eval(&plus)?.scale(m) + f.eval(&minus)?.scale(m) - f.eval(&x.scale(m))?)
}

/// `‖μf((x+y)/2) + μf((x−y)/2) − f(μx)‖`
pub fn jensen_defect(f: &AlgebraMap, mu: UnitScalar, x: &AlgebraElement, y: &AlgebraElement) -> Result<f64> {
    jensen_expr(f, mu, x, y)?.op_norm()
}

/// `Σ_{i=0}^{n−1} aⁱ·f(a)·a^{n−1−i}`
pub fn njordan_sum(f: &AlgebraMap, a: &AlgebraElement, n: u32) -> Result<AlgebraElement> {
    if n < 2 {
        return Err(Error::domain(format!("n-Jordan order must be >= 2, got {n}")));
    }
    let fa = f.eval(a)?;
    let k = a.dim();
    let mut powers = Vec::with_capacity(n as usize);
    powers.push(AlgebraElement::identity(k));
    for i in 1..n as usize {
        powers.push(&powers[i - 1] * a);
    }
    let last = n as usize - 1;
    let mut acc = AlgebraElement::zeros(k);
    for i in 0..n as usize {
        acc = acc + &(&powers[i] * &fa) * &powers[last - i];
    }
    Ok(acc)
}

fn njordan_expr(f: &AlgebraMap, a: &AlgebraElement, n: u32) -> Result<AlgebraElement> {
    let sum = njordan_sum(f, a, n)?;
    Ok(f.eval(&a.power(n)?)? - sum)
}

/// `‖f(aⁿ) − Σ aⁱ f(a) a^{n−1−i}‖`
pub fn njordan_defect(f: &AlgebraMap, a: &AlgebraElement, n: u32) -> Result<f64> {
    njordan_expr(f, a, n)?.op_norm()
}

fn star_expr(f: &AlgebraMap, w: &AlgebraElement) -> Result<AlgebraElement> {
    Ok(f.eval(&w.involution())? - f.eval(w)?.involution())
}

/// `‖f(w*) − f(w)*‖`
pub fn star_defect(f: &AlgebraMap, w: &AlgebraElement) -> Result<f64> {
    star_expr(f, w)?.op_norm()
}

/// Norm of the single summed expression; the star term is present iff `w` is.
pub fn combined_defect(
    f: &AlgebraMap,
    mu: UnitScalar,
    x: &AlgebraElement,
    y: &AlgebraElement,
    a: &AlgebraElement,
    w: Option<&AlgebraElement>,
    n: u32,
) -> Result<f64> {
    let mut total = jensen_expr(f, mu, x, y)? + njordan_expr(f, a, n)?;
    if let Some(w) = w {
        total = total + star_expr(f, w)?;
    }
    total.op_norm()
}

/// The argument tuple `(μ, x, y, a[, w])` of a defect evaluation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DefectArgs {
    pub mu: Complex64,
    pub x: AlgebraElement,
    pub y: AlgebraElement,
    pub a: AlgebraElement,
    pub w: Option<AlgebraElement>,
}

impl DefectArgs {
    pub fn control_args(&self) -> Vec<AlgebraElement> {
        let mut v = vec![self.x.clone(), self.y.clone(), self.a.clone()];
        if let Some(w) = &self.w {
            v.push(w.clone());
        }
        v
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DefectSample {
    pub arguments: DefectArgs,
    pub jensen: f64,
    pub njordan: f64,
    pub star: Option<f64>,
    pub combined: f64,
}

/// Evaluates every defect component at one tuple.
pub fn defect_sample(f: &AlgebraMap, args: DefectArgs, n: u32) -> Result<DefectSample> {
    let mu = UnitScalar::new(args.mu)?;
    let jensen = jensen_expr(f, mu, &args.x, &args.y)?;
    let njordan = njordan_expr(f, &args.a, n)?;
    let star = args.w.as_ref().map(|w| star_expr(f, w)).transpose()?;
    let mut total = &jensen + &njordan;
    if let Some(s) = &star {
        total = total + s;
    }
    Ok(DefectSample {
        jensen: jensen.op_norm()?,
        njordan: njordan.op_norm()?,
        star: star.map(|s| s.op_norm()).transpose()?,
        combined: total.op_norm()?,
        arguments: args,
    })
}

/// Largest value of each defect component seen during a fit.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ComponentMaxima {
    pub jensen: f64,
    pub njordan: f64,
    pub star: Option<f64>,
    pub combined: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThetaFit {
    pub theta_hat: ExtReal,
    pub shape: String,
    pub cloud: Option<SampleSpec>,
    pub max_ratio_point: Option<DefectArgs>,
    pub tuples_used: usize,
    pub tuples_skipped: usize,
    pub maxima: ComponentMaxima,
}

/// Argument tuples (without μ) drawn from a point cloud.
///
/// For each point `p` at index `i`: the slices `(p,p,0)`, `(p,3p,0)`,
/// `(0,0,p)`, `(0,0,0,p)` (4-argument form only), the slice `(p,0,0)` unless
/// the shape is product-power, and the mixed tuple `(p_i, p_{i−1}, p_{i−2}
/// [, p_{i−3}])` once enough predecessors exist. A product-power φ vanishes
/// whenever `y = 0`, so `(p,0,0)` slices are only admissible for maps that are
/// exactly 2-homogeneous there and are left out of product-power fits.
///
/// Tuples only reference a point and its predecessors, so extending the
/// cloud only adds tuples.
pub fn defect_tuples(points: &[AlgebraElement], phi: &ControlFunction) -> Vec<Vec<AlgebraElement>> {
    let arity = phi.arity();
    let product = phi.shape().is_product_power();
    let mut out = Vec::new();
    for (i, p) in points.iter().enumerate() {
        let zero = AlgebraElement::zeros(p.dim());
        let pad = |mut v: Vec<AlgebraElement>| {
            if arity == 4 {
                v.push(zero.clone());
            }
            v
        };
        if !product {
            out.push(pad(vec![p.clone(), zero.clone(), zero.clone()]));
        }
        out.push(pad(vec![p.clone(), p.clone(), zero.clone()]));
        out.push(pad(vec![p.clone(), p.scale_real(3.0), zero.clone()]));
        out.push(pad(vec![zero.clone(), zero.clone(), p.clone()]));
        if arity == 4 {
            out.push(vec![zero.clone(), zero.clone(), zero.clone(), p.clone()]);
        }
        if i + 1 >= arity {
            out.push((0..arity).map(|j| points[i - j].clone()).collect());
        }
    }
    out
}

struct TupleOutcome {
    ratio: Option<f64>,
    infinite: bool,
    sample: DefectSample,
}

fn evaluate_tuple(
    f: &AlgebraMap,
    unit_phi: &ControlFunction,
    tuple: &[AlgebraElement],
    mu: UnitScalar,
    n: u32,
) -> Result<TupleOutcome> {
    let args = DefectArgs {
        mu: mu.value(),
        x: tuple[0].clone(),
        y: tuple[1].clone(),
        a: tuple[2].clone(),
        w: tuple.get(3).cloned(),
    };
    let den = unit_phi.eval(&refs(tuple))?;
    let sample = defect_sample(f, args, n)?;
    let num = sample.combined;
    let (ratio, infinite) = if den < 1e-300 {
        (None, num > 1e-12)
    } else {
        (Some(num / den), false)
    };
    Ok(TupleOutcome { ratio, infinite, sample })
}

/// Fits θ on explicit points: the sup over [`defect_tuples`] × `mus` of
/// `combined / φ₁`, where `φ₁` is the shape with θ = 1.
pub fn fit_theta_on(
    f: &AlgebraMap,
    shape: &ControlFunction,
    points: &[AlgebraElement],
    mus: &[UnitScalar],
    n: u32,
) -> Result<ThetaFit> {
    if points.is_empty() || mus.is_empty() {
        return Err(Error::DegenerateCloud("no points or no unit scalars".into()));
    }
    let unit_phi = shape.clone().with_theta(1.0)?;
    let tuples = defect_tuples(points, &unit_phi);
    let jobs: Vec<(usize, usize)> = (0..tuples.len())
        .flat_map(|t| (0..mus.len()).map(move |m| (t, m)))
        .collect();
    let outcomes: Vec<TupleOutcome> = jobs
        .par_iter()
        .map(|&(t, m)| evaluate_tuple(f, &unit_phi, &tuples[t], mus[m], n))
        .collect::<Result<_>>()?;

    let mut best: Option<(f64, usize)> = None;
    let mut infinite_at = None;
    let mut skipped = 0;
    let mut maxima = ComponentMaxima::default();
    for (i, o) in outcomes.iter().enumerate() {
        maxima.jensen = maxima.jensen.max(o.sample.jensen);
        maxima.njordan = maxima.njordan.max(o.sample.njordan);
        maxima.combined = maxima.combined.max(o.sample.combined);
        if let Some(s) = o.sample.star {
            maxima.star = Some(maxima.star.unwrap_or(0.0).max(s));
        }
        match o.ratio {
            Some(r) => {
                if best.map_or(true, |(b, _)| r > b) {
                    best = Some((r, i));
                }
            }
            None if o.infinite => {
                infinite_at.get_or_insert(i);
            }
            None => skipped += 1,
        }
    }
    let used = outcomes.len() - skipped;
    let (theta_hat, point) = if let Some(i) = infinite_at {
        (ExtReal::INFINITY, Some(i))
    } else if let Some((r, i)) = best {
        (ExtReal::finite(r), Some(i))
    } else {
        return Err(Error::DegenerateCloud(format!(
            "all {} tuples had a vanishing control value",
            outcomes.len()
        )));
    };
    Ok(ThetaFit {
        theta_hat,
        shape: shape.shape().tag().to_string(),
        cloud: None,
        max_ratio_point: point.map(|i| outcomes[i].sample.arguments.clone()),
        tuples_used: used,
        tuples_skipped: skipped,
        maxima,
    })
}

/// Fits θ on the cloud described by `cloud`, with μ over the `mu_count`-th roots of unity.
pub fn fit_theta(
    f: &AlgebraMap,
    shape: &ControlFunction,
    cloud: &SampleSpec,
    mu_count: u32,
    n: u32,
) -> Result<ThetaFit> {
    let points = sample_elements(cloud)?;
    let mus = crate::algebra::sample_unit_scalars(mu_count)?;
    let mut fit = fit_theta_on(f, shape, &points, &mus, n)?;
    fit.cloud = Some(cloud.clone());
    Ok(fit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{sample_unit_scalars, Distribution};
    use crate::maps::{inner_derivation, perturb, PerturbationShape, PerturbationSpec};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn e11() -> AlgebraElement {
        AlgebraElement::diag(&[c(1.0, 0.0), c(0.0, 0.0)]).unwrap()
    }

    fn cloud(seed: u64, count: usize) -> Vec<AlgebraElement> {
        sample_elements(&SampleSpec::new(2, count, 3.0, Distribution::DenseGaussian, seed)).unwrap()
    }

    #[test]
    fn jensen_examples() {
        let lin = AlgebraMap::identity(2);
        let pts = cloud(1, 20);
        for mu in sample_unit_scalars(6).unwrap() {
            for w in pts.windows(2) {
                assert!(jensen_defect(&lin, mu, &w[0], &w[1]).unwrap() < 1e-12);
            }
        }
        let shift = AlgebraMap::constant(e11()).unwrap();
        let z = AlgebraElement::zeros(2);
        assert!((jensen_defect(&shift, UnitScalar::ONE, &z, &z).unwrap() - 1.0).abs() < 1e-15);

        let b = pts[0].clone();
        let (theta, p) = (0.2, 0.5);
        let f = perturb(&inner_derivation(b), PerturbationSpec::power(theta, p, e11()).unwrap());
        for x in &pts {
            let expected = theta * x.op_norm().unwrap().powf(p) * (2f64.powf(1.0 - p) - 1.0);
            let got = jensen_defect(&f, UnitScalar::ONE, x, &z).unwrap();
            assert!((got - expected).abs() < 1e-12 * (1.0 + expected), "{got} vs {expected}");
        }
    }

    #[test]
    fn njordan_sum_examples() {
        let id = AlgebraMap::identity(2);
        let i2 = AlgebraElement::identity(2);
        assert_eq!(njordan_sum(&id, &i2, 3).unwrap(), i2.scale_real(3.0));
        assert!(njordan_sum(&id, &AlgebraElement::zeros(2), 4).unwrap().is_zero());
        assert!(matches!(njordan_sum(&id, &i2, 1), Err(Error::Domain(_))));

        let pts = cloud(2, 20);
        let d = inner_derivation(pts[0].clone());
        for a in &pts {
            let lhs = njordan_sum(&d, a, 2).unwrap();
            let rhs = d.eval(&a.power(2).unwrap()).unwrap();
            assert!((lhs - rhs).op_norm().unwrap() < 1e-12);
        }
    }

    #[test]
    fn njordan_defect_examples() {
        let pts = cloud(3, 30);
        let d = inner_derivation(pts[0].clone());
        for n in 2..=4 {
            for a in &pts {
                assert!(njordan_defect(&d, a, n).unwrap() < 1e-9);
                assert_eq!(njordan_defect(&AlgebraMap::zero(2), a, n).unwrap(), 0.0);
            }
        }
        let id = AlgebraMap::identity(2);
        assert!((njordan_defect(&id, &AlgebraElement::identity(2), 2).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn star_defect_examples() {
        let w = AlgebraElement::from_row_major(2, &[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
        let herm = inner_derivation(e11());
        assert!((star_defect(&herm, &w).unwrap() - 2.0).abs() < 1e-12);
        assert_eq!(star_defect(&AlgebraMap::zero(2), &w).unwrap(), 0.0);

        let g = cloud(4, 1)[0].clone();
        let skew = inner_derivation((&g - &g.involution()).scale_real(0.5));
        for w in cloud(5, 30) {
            assert!(star_defect(&skew, &w).unwrap() < 1e-12);
        }
    }

    #[test]
    fn combined_specializations() {
        let pts = cloud(6, 20);
        let g = pts[0].clone();
        let skew = inner_derivation((&g - &g.involution()).scale_real(0.5));
        let mus = sample_unit_scalars(4).unwrap();
        for (i, x) in pts.iter().enumerate() {
            let y = &pts[(i + 1) % pts.len()];
            let a = &pts[(i + 2) % pts.len()];
            let w = &pts[(i + 3) % pts.len()];
            for &mu in &mus {
                assert!(combined_defect(&skew, mu, x, y, a, Some(w), 3).unwrap() < 1e-9);
            }
        }

        let f = perturb(&inner_derivation(g), PerturbationSpec::power(0.3, 0.5, e11()).unwrap());
        let z = AlgebraElement::zeros(2);
        for (i, x) in pts.iter().enumerate() {
            let mu = mus[i % mus.len()];
            let via_combined = combined_defect(&f, mu, x, x, &z, Some(&z), 2).unwrap();
            assert!((via_combined - jensen_defect(&f, mu, x, x).unwrap()).abs() < 1e-12);
            let a = &pts[(i + 1) % pts.len()];
            let via_combined = combined_defect(&f, UnitScalar::ONE, &z, &z, a, None, 3).unwrap();
            assert!((via_combined - njordan_defect(&f, a, 3).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn fit_theta_examples() {
        let spec = SampleSpec::new(2, 40, 2.0, Distribution::DenseGaussian, 9);
        let pts = sample_elements(&spec).unwrap();
        let g = pts[0].clone();
        let skew = inner_derivation((&g - &g.involution()).scale_real(0.5));
        let star_shape = ControlFunction::power_sum_star(1.0, 0.5).unwrap();
        let fit = fit_theta(&skew, &star_shape, &spec, 4, 2).unwrap();
        assert!(fit.theta_hat.value() < 1e-9);

        let (theta, p) = (0.1, 0.5);
        let f = perturb(&inner_derivation(g.clone()), PerturbationSpec::power(theta, p, e11()).unwrap());
        let shape = ControlFunction::power_sum(1.0, p).unwrap();
        let fit = fit_theta(&f, &shape, &spec, 8, 2).unwrap();
        assert!(fit.theta_hat.is_finite());
        assert!(fit.theta_hat.value() >= theta * (2f64.powf(1.0 - p) - 1.0) / 3.0);

        let shifted = perturb(
            &inner_derivation(g),
            PerturbationSpec::new(PerturbationShape::ConstantShift, e11(), false).unwrap(),
        );
        let fit = fit_theta(&shifted, &shape, &spec.clone().with_zero(), 2, 2).unwrap();
        assert_eq!(fit.theta_hat, ExtReal::INFINITY);
    }

    #[test]
    fn fit_theta_degenerate_cloud() {
        let zero_only = vec![AlgebraElement::zeros(2)];
        let shape = ControlFunction::power_sum(1.0, 0.5).unwrap();
        let err = fit_theta_on(&AlgebraMap::zero(2), &shape, &zero_only, &[UnitScalar::ONE], 2).unwrap_err();
        assert!(matches!(err, Error::DegenerateCloud(_)));
    }
}
