//! Structure checkers and error-bound certificates.
//!
//! Every checker evaluates its defect at each sample, records one row per
//! sample (`value`, `bound`, `ratio`) and passes iff the worst value stays
//! within the tolerance. Complex linearity is tested as additivity plus
//! homogeneity over a finite grid of unit scalars.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraElement, UnitScalar};
use crate::control::{refs, Anchor, ControlFunction, ExtReal};
use crate::defects::{njordan_defect, star_defect};
use crate::error::{Error, Result};
use crate::maps::AlgebraMap;

/// Which certified bound to check, with its parameters.
#[derive(Clone, Debug)]
pub enum BoundSpec {
    /// `L/(1−L)·φ(x,0,0)`
    Thm21 { phi: ControlFunction },
    /// `L/(1−L)·φ(x,0,0,0)`
    Thm22 { phi: ControlFunction },
    /// `2^p θ/(2−2^p)·‖x‖^p`
    Cor23 { theta: f64, p: f64 },
    Cor24 { theta: f64, p: f64 },
    /// `1/(2−2L)·φ(x,3x,0)`
    Thm25 { phi: ControlFunction },
    /// `3^r θ/(2−2^r)·‖x‖^{2r}`
    Cor26 { theta: f64, r: f64 },
    /// `1/(2−2L)·φ(x,3x,0,0)`
    Thm27 { phi: ControlFunction },
    Cor28 { theta: f64, r: f64 },
    Cor210 { theta: f64, r: f64 },
}

/// Which constant to use for the product-power corollaries.
///
/// The stated constant has denominator `2 − 2^r`; substituting `L = 2^{2r−1}`
/// into the odd-map bound `1/(2−2L)` gives `2 − 2^{2r}` instead. Both are
/// computed; other bound kinds have a single constant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConstantChoice {
    Stated,
    ProofConsistent,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundConstants {
    pub stated: f64,
    pub proof_consistent: Option<f64>,
}

impl BoundConstants {
    pub fn get(&self, choice: ConstantChoice) -> f64 {
        match choice {
            ConstantChoice::Stated => self.stated,
            ConstantChoice::ProofConsistent => self.proof_consistent.unwrap_or(self.stated),
        }
    }
}

fn in_open(v: f64, lo: f64, hi: f64, what: &str) -> Result<()> {
    if v > lo && v < hi {
        Ok(())
    } else {
        Err(Error::domain(format!("{what} must lie in ({lo},{hi}), got {v}")))
    }
}

fn nonneg_theta(theta: f64) -> Result<()> {
    if theta.is_finite() && theta >= 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("theta must be finite and >= 0, got {theta}")))
    }
}

impl BoundSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            BoundSpec::Thm21 { .. } => "thm21",
            BoundSpec::Thm22 { .. } => "thm22",
            BoundSpec::Cor23 { .. } => "cor23",
            BoundSpec::Cor24 { .. } => "cor24",
            BoundSpec::Thm25 { .. } => "thm25",
            BoundSpec::Cor26 { .. } => "cor26",
            BoundSpec::Thm27 { .. } => "thm27",
            BoundSpec::Cor28 { .. } => "cor28",
            BoundSpec::Cor210 { .. } => "cor210",
        }
    }

    /// The x-independent factor of the bound.
    pub fn constants(&self) -> Result<BoundConstants> {
        match self {
            BoundSpec::Thm21 { phi } | BoundSpec::Thm22 { phi } => {
                let l = phi.l();
                in_open(l, 0.0, 1.0, "L")?;
                Ok(BoundConstants {
                    stated: l / (1.0 - l),
                    proof_consistent: None,
                })
            }
            BoundSpec::Thm25 { phi } | BoundSpec::Thm27 { phi } => {
                let l = phi.l();
                in_open(l, 0.0, 1.0, "L")?;
                Ok(BoundConstants {
                    stated: 1.0 / (2.0 - 2.0 * l),
                    proof_consistent: None,
                })
            }
            BoundSpec::Cor23 { theta, p } | BoundSpec::Cor24 { theta, p } => {
                nonneg_theta(*theta)?;
                in_open(*p, 0.0, 1.0, "p")?;
                let two_p = 2f64.powf(*p);
                Ok(BoundConstants {
                    stated: two_p * theta / (2.0 - two_p),
                    proof_consistent: None,
                })
            }
            BoundSpec::Cor26 { theta, r } | BoundSpec::Cor28 { theta, r } | BoundSpec::Cor210 { theta, r } => {
                nonneg_theta(*theta)?;
                in_open(*r, 0.0, 0.5, "r")?;
                let num = 3f64.powf(*r) * theta;
                Ok(BoundConstants {
                    stated: num / (2.0 - 2f64.powf(*r)),
                    proof_consistent: Some(num / (2.0 - 2f64.powf(2.0 * r))),
                })
            }
        }
    }

    /// `B(x)` for the chosen constant.
    pub fn bound_at(&self, x: &AlgebraElement, choice: ConstantChoice) -> Result<f64> {
        let c = self.constants()?.get(choice);
        match self {
            BoundSpec::Thm21 { phi } | BoundSpec::Thm22 { phi } => {
                Ok(c * phi.eval(&refs(&Anchor::XZeroZero.args(x, phi.arity())))?)
            }
            BoundSpec::Thm25 { phi } | BoundSpec::Thm27 { phi } => {
                Ok(c * phi.eval(&refs(&Anchor::XThreeX.args(x, phi.arity())))?)
            }
            BoundSpec::Cor23 { p, .. } | BoundSpec::Cor24 { p, .. } => Ok(c * x.op_norm()?.powf(*p)),
            BoundSpec::Cor26 { r, .. } | BoundSpec::Cor28 { r, .. } | BoundSpec::Cor210 { r, .. } => {
                Ok(c * x.op_norm()?.powf(2.0 * r))
            }
        }
    }
}

/// Closed-form constant(s) of a bound.
pub fn bound_constant(spec: &BoundSpec) -> Result<BoundConstants> {
    spec.constants()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub args: Vec<AlgebraElement>,
    pub mu: Option<Complex64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRow {
    pub index: usize,
    pub value: f64,
    pub bound: f64,
    pub ratio: ExtReal,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    pub pass: bool,
    pub max_violation: f64,
    pub tolerance: f64,
    pub violating_point: Option<Witness>,
    pub samples_used: usize,
    pub rows: Vec<CheckRow>,
}

fn ratio(value: f64, bound: f64) -> ExtReal {
    if value == 0.0 {
        ExtReal::ZERO
    } else if bound == 0.0 {
        ExtReal::INFINITY
    } else {
        ExtReal::finite(value / bound)
    }
}

/// Runs `eval(i) -> (value, witness)` for every item and assembles a report
/// whose violation is the largest value.
fn tolerance_check<F>(name: &str, tol: f64, items: usize, eval: F) -> Result<CheckReport>
where
    F: Fn(usize) -> Result<(f64, Witness)> + Sync,
{
    if items == 0 {
        return Err(Error::domain(format!("{name}: no samples")));
    }
    let results: Vec<(f64, Witness)> = (0..items).into_par_iter().map(&eval).collect::<Result<_>>()?;
    let mut worst = 0usize;
    for (i, (v, _)) in results.iter().enumerate() {
        if *v > results[worst].0 {
            worst = i;
        }
    }
    let max_violation = results[worst].0;
    let rows = results
        .iter()
        .enumerate()
        .map(|(index, (value, _))| CheckRow {
            index,
            value: *value,
            bound: tol,
            ratio: ratio(*value, tol),
        })
        .collect();
    Ok(CheckReport {
        name: name.to_string(),
        pass: max_violation <= tol,
        max_violation,
        tolerance: tol,
        violating_point: Some(results[worst].1.clone()),
        samples_used: items,
        rows,
    })
}

/// `(x_i, x_{i+1 mod N})`, one pair per point.
pub fn consecutive_pairs(points: &[AlgebraElement]) -> Vec<(AlgebraElement, AlgebraElement)> {
    let n = points.len();
    (0..n).map(|i| (points[i].clone(), points[(i + 1) % n].clone())).collect()
}

/// `‖f(x) − D(x)‖ ≤ B(x)·(1 + 1e−6) + 1e−9` at every sample.
///
/// `max_violation` is the largest `‖f − D‖ / (B(1 + 1e−6) + 1e−9)`, so the
/// report passes iff it is at most 1. Row ratios are the raw `‖f − D‖ / B`.
pub fn check_bound(
    f: &AlgebraMap,
    d: &AlgebraMap,
    spec: &BoundSpec,
    samples: &[AlgebraElement],
    choice: ConstantChoice,
) -> Result<CheckReport> {
    if samples.is_empty() {
        return Err(Error::domain("bound check: no samples"));
    }
    let rows: Vec<(f64, f64)> = samples
        .par_iter()
        .map(|x| -> Result<(f64, f64)> {
            let gap = (f.eval(x)? - d.eval(x)?).op_norm()?;
            Ok((gap, spec.bound_at(x, choice)?))
        })
        .collect::<Result<_>>()?;
    let normalized = |(gap, b): (f64, f64)| gap / (b * (1.0 + 1e-6) + 1e-9);
    let mut worst = 0usize;
    for i in 0..rows.len() {
        if normalized(rows[i]) > normalized(rows[worst]) {
            worst = i;
        }
    }
    let max_violation = normalized(rows[worst]);
    let name = match choice {
        ConstantChoice::Stated => "bound".to_string(),
        ConstantChoice::ProofConsistent => "bound-proof-consistent".to_string(),
    };
    Ok(CheckReport {
        name,
        pass: max_violation <= 1.0,
        max_violation,
        tolerance: 1.0,
        violating_point: Some(Witness {
            args: vec![samples[worst].clone()],
            mu: None,
        }),
        samples_used: samples.len(),
        rows: rows
            .iter()
            .enumerate()
            .map(|(index, &(value, bound))| CheckRow {
                index,
                value,
                bound,
                ratio: ratio(value, bound),
            })
            .collect(),
    })
}

/// `‖D(z+t) − D(z) − D(t)‖ ≤ tol`
pub fn check_additivity(d: &AlgebraMap, pairs: &[(AlgebraElement, AlgebraElement)], tol: f64) -> Result<CheckReport> {
    tolerance_check("additivity", tol, pairs.len(), |i| {
        let (z, t) = &pairs[i];
        let v = (d.eval(&(z + t))? - d.eval(z)? - d.eval(t)?).op_norm()?;
        Ok((v, Witness { args: vec![z.clone(), t.clone()], mu: None }))
    })
}

/// `max_μ ‖D(μx) − μD(x)‖ ≤ tol`, one row per sample.
pub fn check_homogeneity(d: &AlgebraMap, mus: &[UnitScalar], samples: &[AlgebraElement], tol: f64) -> Result<CheckReport> {
    if mus.is_empty() {
        return Err(Error::domain("homogeneity check: empty unit-scalar grid"));
    }
    tolerance_check("homogeneity", tol, samples.len(), |i| {
        let x = &samples[i];
        let dx = d.eval(x)?;
        let mut worst = (0.0f64, mus[0]);
        for &mu in mus {
            let m = mu.value();
            let v = (d.eval(&x.scale(m))? - dx.scale(m)).op_norm()?;
            if v > worst.0 {
                worst = (v, mu);
            }
        }
        Ok((
            worst.0,
            Witness {
                args: vec![x.clone()],
                mu: Some(worst.1.value()),
            },
        ))
    })
}

/// `‖D(aⁿ) − Σ aⁱ D(a) a^{n−1−i}‖ ≤ tol`
pub fn check_njordan(d: &AlgebraMap, n: u32, samples: &[AlgebraElement], tol: f64) -> Result<CheckReport> {
    if n < 2 {
        return Err(Error::domain(format!("n-Jordan order must be >= 2, got {n}")));
    }
    tolerance_check("njordan", tol, samples.len(), |i| {
        let a = &samples[i];
        Ok((njordan_defect(d, a, n)?, Witness { args: vec![a.clone()], mu: None }))
    })
}

/// `‖D(ab) − D(a)b − aD(b)‖ ≤ tol`
pub fn check_leibniz(d: &AlgebraMap, pairs: &[(AlgebraElement, AlgebraElement)], tol: f64) -> Result<CheckReport> {
    tolerance_check("leibniz", tol, pairs.len(), |i| {
        let (a, b) = &pairs[i];
        let v = (d.eval(&(a * b))? - d.eval(a)? * b - a * &d.eval(b)?).op_norm()?;
        Ok((v, Witness { args: vec![a.clone(), b.clone()], mu: None }))
    })
}

/// `‖D(w*) − D(w)*‖ ≤ tol`
pub fn check_star(d: &AlgebraMap, samples: &[AlgebraElement], tol: f64) -> Result<CheckReport> {
    tolerance_check("star", tol, samples.len(), |i| {
        let w = &samples[i];
        Ok((star_defect(d, w)?, Witness { args: vec![w.clone()], mu: None }))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{sample_elements, sample_unit_scalars, Distribution, SampleSpec};
    use crate::maps::{inner_derivation, perturb, PerturbationShape, PerturbationSpec};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn cloud(seed: u64, count: usize) -> Vec<AlgebraElement> {
        sample_elements(&SampleSpec::new(2, count, 2.0, Distribution::DenseGaussian, seed)).unwrap()
    }

    fn e11() -> AlgebraElement {
        AlgebraElement::diag(&[c(1.0, 0.0), c(0.0, 0.0)]).unwrap()
    }

    #[test]
    fn bound_constant_examples() {
        let k = bound_constant(&BoundSpec::Cor23 { theta: 1.0, p: 0.5 }).unwrap();
        assert!((k.stated - 2.414213562373095).abs() < 1e-12);
        assert!((k.stated - 2.41421).abs() < 1e-5);

        let phi = ControlFunction::power_sum(1.0, 0.5).unwrap().with_l(0.5).unwrap();
        assert_eq!(bound_constant(&BoundSpec::Thm21 { phi }).unwrap().stated, 1.0);

        let k = bound_constant(&BoundSpec::Cor26 { theta: 1.0, r: 0.25 }).unwrap();
        // 3^0.25 = 1.3160740, 2^0.25 = 1.1892071, 2^0.5 = 1.4142136
        assert!((k.stated - 1.6231938).abs() < 1e-6, "{}", k.stated);
        assert!((k.proof_consistent.unwrap() - 2.2466789).abs() < 1e-6);
    }

    #[test]
    fn bound_constant_domain_errors() {
        assert!(bound_constant(&BoundSpec::Cor23 { theta: 1.0, p: 1.0 }).is_err());
        assert!(bound_constant(&BoundSpec::Cor26 { theta: 1.0, r: 0.5 }).is_err());
        assert!(bound_constant(&BoundSpec::Cor28 { theta: -1.0, r: 0.2 }).is_err());
    }

    #[test]
    fn thm_bounds_match_corollaries_for_power_controls() {
        let (theta, p) = (0.7, 0.4);
        let phi = ControlFunction::power_sum(theta, p).unwrap();
        let thm = BoundSpec::Thm21 { phi };
        let cor = BoundSpec::Cor23 { theta, p };
        for x in cloud(1, 10) {
            let a = thm.bound_at(&x, ConstantChoice::Stated).unwrap();
            let b = cor.bound_at(&x, ConstantChoice::Stated).unwrap();
            assert!((a - b).abs() < 1e-12 * (1.0 + b));
        }
        let r = 0.2;
        let thm = BoundSpec::Thm25 {
            phi: ControlFunction::product_power(theta, r).unwrap(),
        };
        let cor = BoundSpec::Cor26 { theta, r };
        for x in cloud(2, 10) {
            let a = thm.bound_at(&x, ConstantChoice::Stated).unwrap();
            let b = cor.bound_at(&x, ConstantChoice::ProofConsistent).unwrap();
            assert!((a - b).abs() < 1e-12 * (1.0 + b));
        }
    }

    #[test]
    fn check_bound_examples() {
        let pts = cloud(3, 30);
        let d = inner_derivation(pts[0].clone());
        let exact = check_bound(&d, &d, &BoundSpec::Cor23 { theta: 0.1, p: 0.5 }, &pts, ConstantChoice::Stated).unwrap();
        assert!(exact.pass);
        assert_eq!(exact.max_violation, 0.0);
        assert_eq!(exact.rows.len(), pts.len());

        let shifted = perturb(
            &d,
            PerturbationSpec::new(PerturbationShape::ConstantShift, e11(), false).unwrap(),
        );
        let ten_e = AlgebraMap::custom(2, "10E", |_| e11().scale_real(10.0));
        let f = perturb(&ten_e, PerturbationSpec::power(0.0, 0.5, e11()).unwrap());
        let rep = check_bound(&f, &AlgebraMap::zero(2), &BoundSpec::Cor23 { theta: 1e-6, p: 0.5 }, &pts, ConstantChoice::Stated).unwrap();
        assert!(!rep.pass);
        assert!(rep.violating_point.is_some());
        let rep = check_bound(&shifted, &d, &BoundSpec::Cor23 { theta: 1e-6, p: 0.5 }, &pts, ConstantChoice::Stated).unwrap();
        assert!(!rep.pass);
    }

    #[test]
    fn structure_checks_pass_on_inner_derivations() {
        let pts = cloud(4, 40);
        let d = inner_derivation(pts[0].clone());
        let pairs = consecutive_pairs(&pts);
        assert!(check_additivity(&d, &pairs, 1e-12).unwrap().pass);
        let mus = sample_unit_scalars(16).unwrap();
        assert!(check_homogeneity(&d, &mus, &pts, 1e-12).unwrap().pass);
        for n in 2..=4 {
            assert!(check_njordan(&d, n, &pts, 1e-9).unwrap().pass);
        }
        assert!(check_leibniz(&d, &pairs, 1e-12).unwrap().pass);
    }

    #[test]
    fn negative_controls_fail() {
        let pts = cloud(5, 40);
        let pairs = consecutive_pairs(&pts);

        let root = perturb(&AlgebraMap::zero(2), PerturbationSpec::power(1.0, 0.5, e11()).unwrap());
        assert!(!check_additivity(&root, &pairs, 1e-6).unwrap().pass);

        let inv = AlgebraMap::involution(2);
        let rep = check_homogeneity(&inv, &sample_unit_scalars(4).unwrap(), &pts, 1e-9).unwrap();
        assert!(!rep.pass);
        // (ix)* = -i·x*, so the first maximal violation sits at μ = i
        assert_eq!(rep.violating_point.unwrap().mu, Some(c(0.0, 1.0)));

        let rep = check_njordan(&AlgebraMap::identity(2), 2, &[AlgebraElement::identity(2)], 1e-9).unwrap();
        assert!(!rep.pass);
        assert!((rep.max_violation - 1.0).abs() < 1e-9);

        assert!(!check_leibniz(&AlgebraMap::square(2), &pairs, 1e-6).unwrap().pass);

        let w = AlgebraElement::from_row_major(2, &[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
        let rep = check_star(&inner_derivation(e11()), &[w], 1e-9).unwrap();
        assert!(!rep.pass);
        assert!((rep.max_violation - 2.0).abs() < 1e-9);
        assert!(check_star(&AlgebraMap::zero(2), &pts, 1e-12).unwrap().pass);
    }
}
