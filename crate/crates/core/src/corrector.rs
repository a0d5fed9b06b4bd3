//! Fixed-point correction of approximate maps.
//!
//! The operator `J(h)(x) = h(2x)/2` is a strict contraction with Lipschitz
//! constant `L` for the generalized distance induced by an admissible control
//! function. Its fixed point near `f` is the pointwise limit
//! `D(x) = lim f(2ᵐx)/2ᵐ`, computed here by iterating
//! `d_m = f(2ᵐx)/2ᵐ` until `‖d_{m+1} − d_m‖ < tol·(1 + ‖d_{m+1}‖)`.
//! Residuals decay like `Lᵐ`, so the residual trail doubles as an estimate of
//! the contraction constant.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::AlgebraElement;
use crate::error::{Error, Result};
use crate::maps::AlgebraMap;

/// Largest admissible iteration budget; `2⁶⁰·radius` stays far inside `f64` range.
pub const MAX_ITERATIONS: u32 = 60;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointDiagnostic {
    pub x: AlgebraElement,
    /// Stopping index `m*`: the first `m` whose residual passed the test,
    /// or `m_max` when it never did.
    pub iterations_used: u32,
    /// `‖d_{m+1} − d_m‖` for `m = 0..`.
    pub residuals: Vec<f64>,
    pub converged: bool,
    pub final_value: AlgebraElement,
}

impl PointDiagnostic {
    pub fn rate(&self) -> Result<f64> {
        rate_estimate(&self.residuals, self.iterations_used)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OverflowRecord {
    pub index: usize,
    pub m: u32,
    pub magnitude: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorrectionDiagnostics {
    pub points: Vec<PointDiagnostic>,
    pub overflows: Vec<OverflowRecord>,
    /// Median of the per-point rate estimates that are available.
    pub estimated_rate: Option<f64>,
}

impl CorrectionDiagnostics {
    pub fn non_converged(&self) -> usize {
        self.points.iter().filter(|p| !p.converged).count()
    }

    pub fn median_iterations(&self) -> Option<f64> {
        median(self.points.iter().map(|p| p.iterations_used as f64).collect())
    }
}

fn median(mut v: Vec<f64>) -> Option<f64> {
    if v.is_empty() {
        return None;
    }
    v.sort_by(f64::total_cmp);
    let mid = v.len() / 2;
    Some(if v.len() % 2 == 1 {
        v[mid]
    } else {
        0.5 * (v[mid - 1] + v[mid])
    })
}

/// `x ↦ h(2x)/2`
pub fn apply_j(h: &AlgebraMap) -> AlgebraMap {
    AlgebraMap::dilated(h)
}

fn validate(tolerance: f64, m_max: u32) -> Result<()> {
    if !(tolerance.is_finite() && tolerance > 0.0) {
        return Err(Error::domain(format!("tolerance must be positive, got {tolerance}")));
    }
    if m_max > MAX_ITERATIONS {
        return Err(Error::domain(format!(
            "m_max must be <= {MAX_ITERATIONS}, got {m_max}"
        )));
    }
    Ok(())
}

fn iterate(f: &AlgebraMap, x: &AlgebraElement, m: u32) -> Result<AlgebraElement> {
    let scale = 2f64.powi(m as i32);
    let scaled = x.scale_real(scale);
    let out = match f.eval(&scaled) {
        Ok(v) => v,
        Err(Error::Overflow { magnitude }) => return Err(Error::IterateOverflow { m, magnitude }),
        Err(e) => return Err(e),
    };
    let d = out.scale_real(1.0 / scale);
    if !d.is_finite() {
        return Err(Error::IterateOverflow {
            m,
            magnitude: scaled.max_abs(),
        });
    }
    Ok(d)
}

/// Computes `D(x) = lim f(2ᵐx)/2ᵐ` at one point.
///
/// Exhausting `m_max` is reported through `converged = false`, not as an error.
/// The successive-difference test cannot tell a map that is locally a fixed
/// point of `J` from a converged one: `D + c·min(1,‖x‖)·E` stops at `m = 0`
/// for `‖x‖ < 1/2`.
pub fn correct(
    f: &AlgebraMap,
    x: &AlgebraElement,
    tolerance: f64,
    m_max: u32,
) -> Result<(AlgebraElement, PointDiagnostic)> {
    validate(tolerance, m_max)?;
    let mut current = iterate(f, x, 0)?;
    let mut residuals = Vec::new();
    for m in 0..m_max {
        let next = iterate(f, x, m + 1)?;
        let residual = (&next - &current).op_norm()?;
        residuals.push(residual);
        if residual < tolerance * (1.0 + next.op_norm()?) {
            let diag = PointDiagnostic {
                x: x.clone(),
                iterations_used: m,
                residuals,
                converged: true,
                final_value: next.clone(),
            };
            return Ok((next, diag));
        }
        current = next;
    }
    let diag = PointDiagnostic {
        x: x.clone(),
        iterations_used: m_max,
        residuals,
        converged: false,
        final_value: current.clone(),
    };
    Ok((current, diag))
}

/// The corrected-limit map; evaluations are memoized on the exact bits of `x`.
pub fn corrected_map(f: &AlgebraMap, tolerance: f64, m_max: u32) -> Result<AlgebraMap> {
    validate(tolerance, m_max)?;
    Ok(AlgebraMap::corrected_limit(f, tolerance, m_max))
}

/// Geometric-mean ratio of successive residuals over the last
/// `max(4, ⌈m*/2⌉)` residuals. An exact zero residual in that window gives
/// rate 0.
pub fn rate_estimate(residuals: &[f64], iterations_used: u32) -> Result<f64> {
    if residuals.last() == Some(&0.0) {
        return Ok(0.0);
    }
    if residuals.len() < 4 {
        return Err(Error::InsufficientData(format!(
            "rate estimate needs at least 4 residuals, got {}",
            residuals.len()
        )));
    }
    let window = (iterations_used.div_ceil(2) as usize).max(4).min(residuals.len());
    let tail = &residuals[residuals.len() - window..];
    if tail.contains(&0.0) {
        return Ok(0.0);
    }
    let first = tail[0];
    let last = tail[window - 1];
    Ok((last / first).powf(1.0 / (window - 1) as f64))
}

/// Corrects every point of a cloud; overflowing points are recorded and skipped.
pub fn correct_cloud(
    f: &AlgebraMap,
    points: &[AlgebraElement],
    tolerance: f64,
    m_max: u32,
) -> Result<CorrectionDiagnostics> {
    validate(tolerance, m_max)?;
    let results: Vec<Result<(AlgebraElement, PointDiagnostic)>> = points
        .par_iter()
        .map(|x| correct(f, x, tolerance, m_max))
        .collect();
    let mut diagnostics = Vec::with_capacity(points.len());
    let mut overflows = Vec::new();
    for (index, r) in results.into_iter().enumerate() {
        match r {
            Ok((_, d)) => diagnostics.push(d),
            Err(Error::IterateOverflow { m, magnitude }) => overflows.push(OverflowRecord { index, m, magnitude }),
            Err(e) => return Err(e),
        }
    }
    let rates: Vec<f64> = diagnostics.iter().filter_map(|d| d.rate().ok()).collect();
    Ok(CorrectionDiagnostics {
        estimated_rate: median(rates),
        points: diagnostics,
        overflows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{sample_elements, Distribution, SampleSpec};
    use crate::maps::{inner_derivation, perturb, PerturbationShape, PerturbationSpec};
    use num_complex::Complex64;

    fn e11() -> AlgebraElement {
        AlgebraElement::diag(&[Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]).unwrap()
    }

    fn cloud(seed: u64) -> Vec<AlgebraElement> {
        sample_elements(&SampleSpec::new(2, 25, 2.0, Distribution::DenseGaussian, seed)).unwrap()
    }

    #[test]
    fn apply_j_examples() {
        let lin = AlgebraMap::identity(2);
        let konst = AlgebraMap::constant(e11()).unwrap();
        let pow = perturb(&AlgebraMap::zero(2), PerturbationSpec::power(1.0, 0.3, e11()).unwrap());
        for x in cloud(1) {
            assert_eq!(apply_j(&lin).eval(&x).unwrap(), x);
            assert_eq!(apply_j(&konst).eval(&x).unwrap(), e11().scale_real(0.5));
            let expected = e11().scale_real(2f64.powf(-0.7) * x.op_norm().unwrap().powf(0.3));
            assert!((apply_j(&pow).eval(&x).unwrap() - expected).op_norm().unwrap() < 1e-14);
        }
    }

    #[test]
    fn exact_derivation_is_fixed() {
        let d = inner_derivation(cloud(2)[0].clone());
        for x in cloud(3) {
            let (v, diag) = correct(&d, &x, 1e-10, 60).unwrap();
            assert_eq!(v, d.eval(&x).unwrap());
            assert_eq!(diag.iterations_used, 0);
            assert_eq!(diag.residuals, vec![0.0]);
            assert!(diag.converged);
            assert_eq!(diag.rate().unwrap(), 0.0);
        }
    }

    #[test]
    fn bounded_perturbation_telescopes() {
        let d = inner_derivation(cloud(4)[0].clone());
        let c = 0.5;
        let f = perturb(
            &d,
            PerturbationSpec::new(PerturbationShape::Bounded { c }, e11(), false).unwrap(),
        );
        // below norm 1/2 the first residual is exactly 0 (the term is linear in ‖x‖ there)
        for x in cloud(5).into_iter().filter(|x| x.op_norm().unwrap() >= 0.5) {
            let (v, diag) = correct(&f, &x, 1e-10, 60).unwrap();
            assert!(diag.converged);
            let m = diag.iterations_used + 1;
            let err = (v - d.eval(&x).unwrap()).op_norm().unwrap();
            assert!(err <= c * 2f64.powi(-(m as i32)) * (1.0 + 1e-9));
            assert!((diag.rate().unwrap() - 0.5).abs() < 0.05);
        }
    }

    #[test]
    fn power_perturbation_rate_matches_l() {
        let d = inner_derivation(cloud(6)[0].clone());
        let f = perturb(&d, PerturbationSpec::power(0.1, 0.5, e11()).unwrap());
        for x in cloud(7) {
            let (_, diag) = correct(&f, &x, 1e-10, 60).unwrap();
            assert!(diag.iterations_used >= 12);
            assert!((diag.rate().unwrap() - 0.5f64.sqrt()).abs() < 0.01);
        }
    }

    #[test]
    fn budget_exhaustion_is_not_an_error() {
        let d = inner_derivation(cloud(8)[0].clone());
        let f = perturb(&d, PerturbationSpec::power(1.0, 0.95, e11()).unwrap());
        let x = cloud(9)[0].clone();
        let (v, diag) = correct(&f, &x, 1e-12, 10).unwrap();
        assert!(!diag.converged);
        assert_eq!(diag.iterations_used, 10);
        assert_eq!(diag.residuals.len(), 10);
        assert_eq!(v, diag.final_value);
    }

    #[test]
    fn overflow_carries_iterate_index() {
        let f = AlgebraMap::square(2);
        let x = AlgebraElement::identity(2).scale_real(1e150);
        match correct(&f, &x, 1e-10, 60) {
            // (2^m·1e150)² leaves f64 range once 2^{2m} > 1.8e8
            Err(Error::IterateOverflow { m, .. }) => assert_eq!(m, 14),
            other => panic!("expected overflow, got {other:?}"),
        }
    }

    #[test]
    fn invalid_parameters() {
        let f = AlgebraMap::zero(2);
        let x = AlgebraElement::identity(2);
        assert!(correct(&f, &x, 0.0, 10).is_err());
        assert!(correct(&f, &x, 1e-10, 61).is_err());
        assert!(corrected_map(&f, -1.0, 10).is_err());
    }

    #[test]
    fn rate_estimate_edges() {
        assert!(matches!(rate_estimate(&[0.5, 0.25, 0.125], 3), Err(Error::InsufficientData(_))));
        assert_eq!(rate_estimate(&[0.5, 0.0], 1).unwrap(), 0.0);
        let geometric: Vec<f64> = (0..20).map(|m| 0.9f64.powi(m)).collect();
        assert!((rate_estimate(&geometric, 19).unwrap() - 0.9).abs() < 1e-12);
    }

    #[test]
    fn corrected_map_memoizes_and_matches_correct() {
        let d = inner_derivation(cloud(10)[0].clone());
        let f = perturb(&d, PerturbationSpec::power(0.2, 0.4, e11()).unwrap());
        let dc = corrected_map(&f, 1e-10, 60).unwrap();
        let pts = cloud(11);
        for x in &pts {
            let first = dc.eval(x).unwrap();
            let second = dc.eval(x).unwrap();
            assert_eq!(first.bit_key(), second.bit_key());
            assert_eq!(first, correct(&f, x, 1e-10, 60).unwrap().0);
        }
        assert_eq!(dc.memo_len(), Some(pts.len()));
    }

    #[test]
    fn memo_is_safe_under_concurrent_lookups() {
        let d = inner_derivation(cloud(12)[0].clone());
        let f = perturb(&d, PerturbationSpec::power(0.2, 0.5, e11()).unwrap());
        let dc = corrected_map(&f, 1e-10, 60).unwrap();
        let pts = cloud(13);
        let a: Vec<_> = pts.par_iter().map(|x| dc.eval(x).unwrap()).collect();
        let b: Vec<_> = pts.par_iter().map(|x| dc.eval(x).unwrap()).collect();
        assert_eq!(a, b);
    }
}
