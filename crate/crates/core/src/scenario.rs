//! Running a [`ScenarioConfig`] end to end.
//!
//! A scenario builds a ground-truth inner derivation `D₀`, perturbs it into
//! `f`, fits θ on a seeded cloud, corrects `f` pointwise and checks the
//! corrected map. Everything is a pure function of the config.

use std::time::Instant;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::{sample_elements, sample_unit_scalars, AlgebraElement, Distribution, ElementSampler, SampleSpec, UnitScalar};
use crate::config::{CheckName, MatrixSource, PerturbationKind, ScenarioConfig, ShapeTag, ThetaSetting, Variant};
use crate::control::{generalized_distance, scaling_check, Anchor, ControlFunction, ExtReal, ScalingReport};
use crate::corrector::{apply_j, correct_cloud, corrected_map, CorrectionDiagnostics, OverflowRecord};
use crate::defects::{defect_tuples, fit_theta_on, ThetaFit};
use crate::error::{Error, Result};
use crate::maps::{inner_derivation, oddify, perturb, AlgebraMap, PerturbationShape, PerturbationSpec};
use crate::verify::{
    check_additivity, check_bound, check_homogeneity, check_leibniz, check_njordan, check_star, consecutive_pairs,
    BoundConstants, BoundSpec, CheckReport, ConstantChoice,
};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

// Independent streams for b and E so that changing the cloud size never moves them.
const DERIVATION_STREAM: u64 = 0x9e37_79b9_7f4a_7c15;
const DIRECTION_STREAM: u64 = 0xd1b5_4a32_d192_ed03;

/// The maps, control function and cloud of a scenario, before any correction.
#[derive(Clone, Debug)]
pub struct Scenario {
    pub config: ScenarioConfig,
    /// The exact derivation `f` was built from.
    pub ground_truth: AlgebraMap,
    pub f: AlgebraMap,
    /// The control shape with θ = 1 and the configured `L`.
    pub unit_phi: ControlFunction,
    pub points: Vec<AlgebraElement>,
    pub mus: Vec<UnitScalar>,
}

impl Scenario {
    pub fn build(config: &ScenarioConfig) -> Result<Self> {
        let dim = config.dim;
        let b = derivation_element(config)?;
        let ground_truth = inner_derivation(b);
        let mut f = match perturbation_spec(config)? {
            Some(spec) => perturb(&ground_truth, spec),
            None => ground_truth.clone(),
        };
        if config.variant.is_odd() {
            f = oddify(&f);
        }
        let unit_phi = control_function(config, 1.0)?;
        let spec = cloud_spec(config);
        spec.validate()?;
        let points = sample_elements(&spec)?;
        let mus = sample_unit_scalars(config.mu_grid)?;
        debug_assert_eq!(f.dim(), dim);
        Ok(Scenario {
            config: config.clone(),
            ground_truth,
            f,
            unit_phi,
            points,
            mus,
        })
    }

    pub fn fit(&self) -> Result<ThetaFit> {
        let mut fit = fit_theta_on(&self.f, &self.unit_phi, &self.points, &self.mus, self.config.n)?;
        fit.cloud = Some(cloud_spec(&self.config));
        Ok(fit)
    }

    /// `θ` from the config, or `theta_hat` when set to `fit`.
    pub fn theta_used(&self, fit: &ThetaFit) -> ExtReal {
        match self.config.control.theta {
            ThetaSetting::Fit => fit.theta_hat,
            ThetaSetting::Fixed(t) => ExtReal::finite(t),
        }
    }

    /// The anchor the variant's distance and bound are measured at.
    pub fn anchor(&self) -> Anchor {
        if self.config.variant.is_odd() {
            Anchor::XThreeX
        } else {
            Anchor::XZeroZero
        }
    }

    /// Tuples for the scaling check: the fit tuples, restricted to the
    /// `(x, 3x, ·)` family for odd variants.
    pub fn scaling_tuples(&self) -> Vec<Vec<AlgebraElement>> {
        let mut tuples = defect_tuples(&self.points, &self.unit_phi);
        if self.config.variant.is_odd() {
            tuples.retain(|t| t[1] == t[0].scale_real(3.0) && !t[0].is_zero());
        }
        tuples
    }
}

pub fn cloud_spec(config: &ScenarioConfig) -> SampleSpec {
    SampleSpec {
        dim: config.dim,
        count: config.cloud.count,
        radius: config.cloud.radius,
        distribution: config.cloud.distribution,
        seed: config.seed,
        include_zero: config.cloud.include_zero,
    }
}

fn derivation_element(config: &ScenarioConfig) -> Result<AlgebraElement> {
    let d = &config.derivation;
    let mut sampler = ElementSampler::new(config.dim, config.seed ^ DERIVATION_STREAM);
    let b = match &d.b {
        MatrixSource::Random if d.skew_adjoint => sampler.skew_adjoint(d.b_norm),
        MatrixSource::Random => sampler.with_norm(Distribution::DenseGaussian, d.b_norm),
        MatrixSource::E11 => matrix_unit(config.dim),
        MatrixSource::Literal(b) => b.clone(),
    };
    if d.skew_adjoint && !(b.involution() + &b).is_zero() {
        let gap = (b.involution() + &b).op_norm()?;
        if gap > 1e-12 * (1.0 + b.op_norm()?) {
            return Err(Error::config("derivation.b", "b is not skew-adjoint (b* ≠ −b)"));
        }
    }
    Ok(b)
}

fn matrix_unit(dim: usize) -> AlgebraElement {
    let mut entries = vec![Complex64::new(0.0, 0.0); dim];
    entries[0] = Complex64::new(1.0, 0.0);
    AlgebraElement::diag(&entries).expect("finite diagonal")
}

fn perturbation_spec(config: &ScenarioConfig) -> Result<Option<PerturbationSpec>> {
    let p = &config.perturbation;
    let shape = match p.shape {
        PerturbationKind::None => return Ok(None),
        PerturbationKind::Power => PerturbationShape::Power { theta: p.theta, p: p.p },
        PerturbationKind::OddPower => PerturbationShape::OddPower { theta: p.theta, p: p.p },
        PerturbationKind::Bounded => PerturbationShape::Bounded { c: p.c },
        PerturbationKind::ConstantShift => PerturbationShape::ConstantShift,
    };
    let direction = match &p.direction {
        MatrixSource::Random => {
            let dist = if p.star_compatible {
                Distribution::Hermitian
            } else {
                Distribution::DenseGaussian
            };
            ElementSampler::new(config.dim, config.seed ^ DIRECTION_STREAM).with_norm(dist, 1.0)
        }
        MatrixSource::E11 => matrix_unit(config.dim),
        MatrixSource::Literal(e) => e.clone(),
    };
    PerturbationSpec::new(shape, direction, p.star_compatible).map(Some)
}

/// The configured control shape with the given θ.
pub fn control_function(config: &ScenarioConfig, theta: f64) -> Result<ControlFunction> {
    let e = config.control.exponent;
    let phi = match config.control.shape {
        ShapeTag::PowerSum => ControlFunction::power_sum(theta, e),
        ShapeTag::PowerSumStar => ControlFunction::power_sum_star(theta, e),
        ShapeTag::ProductPower => ControlFunction::product_power(theta, e),
        ShapeTag::ProductPowerStar => ControlFunction::product_power_star(theta, e),
    }?;
    match config.control.l {
        Some(l) => phi.with_l(l),
        None => Ok(phi),
    }
}

/// The variant's bound for a finite θ.
pub fn bound_spec(config: &ScenarioConfig, theta: f64) -> Result<BoundSpec> {
    let e = config.control.exponent;
    let phi = || control_function(config, theta);
    Ok(match config.variant {
        Variant::Thm21 => BoundSpec::Thm21 { phi: phi()? },
        Variant::Thm22 => BoundSpec::Thm22 { phi: phi()? },
        Variant::Thm25 => BoundSpec::Thm25 { phi: phi()? },
        Variant::Thm27 => BoundSpec::Thm27 { phi: phi()? },
        Variant::Cor23 => BoundSpec::Cor23 { theta, p: e },
        Variant::Cor24 => BoundSpec::Cor24 { theta, p: e },
        Variant::Cor26 => BoundSpec::Cor26 { theta, r: e },
        Variant::Cor28 => BoundSpec::Cor28 { theta, r: e },
        Variant::Cor210 => BoundSpec::Cor210 { theta, r: e },
    })
}

/// Corrector diagnostics reduced to their headline numbers.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorrectionSummary {
    pub points: usize,
    pub median_iterations: Option<f64>,
    pub rate_estimate: Option<f64>,
    pub non_converged: usize,
    pub overflows: Vec<OverflowRecord>,
}

impl From<&CorrectionDiagnostics> for CorrectionSummary {
    fn from(d: &CorrectionDiagnostics) -> Self {
        CorrectionSummary {
            points: d.points.len() + d.overflows.len(),
            median_iterations: d.median_iterations(),
            rate_estimate: d.estimated_rate,
            non_converged: d.non_converged(),
            overflows: d.overflows.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateEntry {
    pub constant: f64,
    /// Largest raw `‖f(x) − D(x)‖ / B(x)` over the cloud.
    pub max_ratio: ExtReal,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundCertificate {
    pub kind: String,
    pub theta: ExtReal,
    pub stated: Option<CertificateEntry>,
    /// Only for the product-power corollaries.
    pub proof_consistent: Option<CertificateEntry>,
    /// The stated constant's verdict; an infinite θ fails.
    pub pass: bool,
    pub note: Option<String>,
}

/// Empirical generalized distances at the variant's anchor.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FixedPointSummary {
    pub anchor: Anchor,
    pub l: f64,
    pub distance_f_jf: ExtReal,
    pub distance_f_d: ExtReal,
    /// `d(f, Jf) / (1 − L)`, the a-priori bound on `d(f, D)`.
    pub apriori_bound: ExtReal,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub version: String,
    pub config: ScenarioConfig,
    pub theta_fit: ThetaFit,
    pub theta_used: ExtReal,
    pub scaling: ScalingReport,
    pub checks: Vec<CheckReport>,
    pub correction: CorrectionSummary,
    pub bound: Option<BoundCertificate>,
    pub fixed_point: Option<FixedPointSummary>,
    pub pass: bool,
    pub wall_time_secs: f64,
}

impl Report {
    pub fn check(&self, name: &str) -> Option<&CheckReport> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn certificate_entry(report: &CheckReport, constant: f64) -> CertificateEntry {
    let max_ratio = report
        .rows
        .iter()
        .map(|r| r.ratio)
        .fold(ExtReal::ZERO, |a, b| if b > a { b } else { a });
    CertificateEntry {
        constant,
        max_ratio,
        pass: report.pass,
    }
}

fn distance_summary(s: &Scenario, d: &AlgebraMap, phi: &ControlFunction, samples: &[AlgebraElement]) -> Result<FixedPointSummary> {
    let anchor = s.anchor();
    let to_f = generalized_distance(&s.f, &apply_j(&s.f), phi, anchor, samples)?.value;
    let to_d = generalized_distance(&s.f, d, phi, anchor, samples)?.value;
    let apriori = if to_f.is_finite() {
        ExtReal::finite(to_f.value() / (1.0 - phi.l()))
    } else {
        ExtReal::INFINITY
    };
    Ok(FixedPointSummary {
        anchor,
        l: phi.l(),
        distance_f_jf: to_f,
        distance_f_d: to_d,
        apriori_bound: apriori,
    })
}

/// Structural-check tolerance: `10·tolerance·(1 + radius)^n`.
pub fn structural_tolerance(config: &ScenarioConfig) -> f64 {
    10.0 * config.corrector.tolerance * (1.0 + config.cloud.radius).powi(config.n as i32)
}

pub fn run_scenario(config: &ScenarioConfig) -> Result<Report> {
    let start = Instant::now();
    let s = Scenario::build(config)?;
    let fit = s.fit()?;
    let theta = s.theta_used(&fit);
    let scaling_phi = s.unit_phi.clone().with_theta(if theta.is_finite() { theta.value() } else { 1.0 })?;
    let scaling = scaling_check(&scaling_phi, &s.scaling_tuples())?;

    let tol = config.corrector.tolerance;
    let diagnostics = correct_cloud(&s.f, &s.points, tol, config.corrector.m_max)?;
    let d = corrected_map(&s.f, tol, config.corrector.m_max)?;
    let overflowed: Vec<usize> = diagnostics.overflows.iter().map(|o| o.index).collect();
    let samples: Vec<AlgebraElement> = s
        .points
        .iter()
        .enumerate()
        .filter(|(i, _)| !overflowed.contains(i))
        .map(|(_, x)| x.clone())
        .collect();
    if samples.is_empty() {
        return Err(Error::IterateOverflow {
            m: diagnostics.overflows[0].m,
            magnitude: diagnostics.overflows[0].magnitude,
        });
    }
    let pairs = consecutive_pairs(&samples);
    let stol = structural_tolerance(config);

    let mut checks = Vec::new();
    let mut bound = None;
    for check in &config.checks {
        match check {
            CheckName::Additivity => checks.push(check_additivity(&d, &pairs, stol)?),
            CheckName::Homogeneity => checks.push(check_homogeneity(&d, &s.mus, &samples, stol)?),
            CheckName::Njordan => checks.push(check_njordan(&d, config.n, &samples, stol)?),
            CheckName::Leibniz => checks.push(check_leibniz(&d, &pairs, stol)?),
            CheckName::Star => checks.push(check_star(&d, &samples, stol)?),
            CheckName::Bound => {
                let (cert, reports) = certify(config, &s, &d, theta, &samples)?;
                checks.extend(reports);
                bound = Some(cert);
            }
        }
    }
    let fixed_point = if theta.is_finite() && theta.value() > 0.0 {
        let phi = control_function(config, theta.value())?;
        Some(distance_summary(&s, &d, &phi, &samples)?)
    } else {
        None
    };
    // the proof-consistent report is informational; the verdict uses the stated constant
    let pass = scaling.pass
        && checks.iter().filter(|c| c.name != "bound-proof-consistent").all(|c| c.pass)
        && bound.as_ref().map_or(true, |b| b.pass);
    Ok(Report {
        version: VERSION.to_string(),
        config: config.clone(),
        theta_fit: fit,
        theta_used: theta,
        scaling,
        checks,
        correction: CorrectionSummary::from(&diagnostics),
        bound,
        fixed_point,
        pass,
        wall_time_secs: start.elapsed().as_secs_f64(),
    })
}

fn certify(
    config: &ScenarioConfig,
    s: &Scenario,
    d: &AlgebraMap,
    theta: ExtReal,
    samples: &[AlgebraElement],
) -> Result<(BoundCertificate, Vec<CheckReport>)> {
    let kind = config.variant.tag().to_string();
    if !theta.is_finite() {
        let cert = BoundCertificate {
            kind,
            theta,
            stated: None,
            proof_consistent: None,
            pass: false,
            note: Some("theta_hat is infinite: the defect does not vanish where the control does".into()),
        };
        return Ok((cert, Vec::new()));
    }
    let spec = bound_spec(config, theta.value())?;
    let constants = spec.constants()?;
    let stated = check_bound(&s.f, d, &spec, samples, ConstantChoice::Stated)?;
    let mut cert = BoundCertificate {
        kind,
        theta,
        stated: Some(certificate_entry(&stated, constants.stated)),
        proof_consistent: None,
        pass: stated.pass,
        note: None,
    };
    let mut reports = vec![stated];
    if let Some(c) = constants.proof_consistent {
        let alt = check_bound(&s.f, d, &spec, samples, ConstantChoice::ProofConsistent)?;
        cert.proof_consistent = Some(certificate_entry(&alt, c));
        reports.push(alt);
    }
    Ok((cert, reports))
}

/// Output of the `defect` stage alone.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DefectReport {
    pub version: String,
    pub config: ScenarioConfig,
    pub theta_fit: ThetaFit,
    pub scaling: ScalingReport,
}

pub fn run_defects(config: &ScenarioConfig) -> Result<DefectReport> {
    let s = Scenario::build(config)?;
    let fit = s.fit()?;
    let theta = s.theta_used(&fit);
    let phi = s.unit_phi.clone().with_theta(if theta.is_finite() { theta.value() } else { 1.0 })?;
    Ok(DefectReport {
        version: VERSION.to_string(),
        config: config.clone(),
        scaling: scaling_check(&phi, &s.scaling_tuples())?,
        theta_fit: fit,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointSummary {
    pub index: usize,
    pub norm: f64,
    pub iterations_used: u32,
    pub converged: bool,
    pub last_residual: Option<f64>,
    pub rate: Option<f64>,
}

/// Output of the `correct` stage alone.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorrectionReport {
    pub version: String,
    pub config: ScenarioConfig,
    pub summary: CorrectionSummary,
    pub points: Vec<PointSummary>,
}

pub fn run_correction(config: &ScenarioConfig) -> Result<CorrectionReport> {
    let s = Scenario::build(config)?;
    let diagnostics = correct_cloud(&s.f, &s.points, config.corrector.tolerance, config.corrector.m_max)?;
    let overflowed: Vec<usize> = diagnostics.overflows.iter().map(|o| o.index).collect();
    let indices = (0..s.points.len()).filter(|i| !overflowed.contains(i));
    let points = indices
        .zip(&diagnostics.points)
        .map(|(index, p)| {
            Ok(PointSummary {
                index,
                norm: p.x.op_norm()?,
                iterations_used: p.iterations_used,
                converged: p.converged,
                last_residual: p.residuals.last().copied(),
                rate: p.rate().ok(),
            })
        })
        .collect::<Result<_>>()?;
    Ok(CorrectionReport {
        version: VERSION.to_string(),
        config: config.clone(),
        summary: CorrectionSummary::from(&diagnostics),
        points,
    })
}

/// Output of `constants <variant> key=value...`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstantsReport {
    pub variant: Variant,
    pub theta: f64,
    pub l: Option<f64>,
    pub constants: BoundConstants,
}

/// Parses `theta=`, `p=`, `r=` and `l=` parameters and evaluates the
/// variant's bound constant. Theorem variants need `l`, or `p`/`r` to derive it.
pub fn parse_constants(variant: &str, params: &[String]) -> Result<ConstantsReport> {
    let variant: Variant = variant.parse()?;
    let (mut theta, mut p, mut r, mut l) = (1.0, None, None, None);
    for param in params {
        let (key, value) = param
            .split_once('=')
            .ok_or_else(|| Error::config("constants", format!("expected key=value, got `{param}`")))?;
        let path = format!("constants.{}", key.trim());
        let v: f64 = value
            .trim()
            .parse()
            .map_err(|_| Error::config(path.as_str(), format!("cannot parse `{}`", value.trim())))?;
        if !v.is_finite() {
            return Err(Error::config(path, "must be finite"));
        }
        match key.trim() {
            "theta" => theta = v,
            "p" => p = Some(v),
            "r" => r = Some(v),
            "l" | "L" => l = Some(v),
            _ => return Err(Error::config(path, "unknown parameter")),
        }
    }
    let as_config = |e: Error| match e {
        Error::Domain(m) => Error::config("constants", m),
        other => other,
    };
    let arity = if variant.is_star() { 4 } else { 3 };
    let phi = || -> Result<ControlFunction> {
        let phi = match (l, p, r) {
            (Some(l), _, _) => ControlFunction::custom("declared", arity, l, |_| 0.0)?,
            (None, Some(p), _) => ControlFunction::power_sum(1.0, p)?,
            (None, None, Some(r)) => ControlFunction::product_power(1.0, r)?,
            _ => return Err(Error::config("constants.l", "theorem variants need l, p or r")),
        };
        Ok(phi)
    };
    let need = |v: Option<f64>, key: &str| v.ok_or_else(|| Error::config(format!("constants.{key}"), "required"));
    let spec = match variant {
        Variant::Thm21 => BoundSpec::Thm21 { phi: phi()? },
        Variant::Thm22 => BoundSpec::Thm22 { phi: phi()? },
        Variant::Thm25 => BoundSpec::Thm25 { phi: phi()? },
        Variant::Thm27 => BoundSpec::Thm27 { phi: phi()? },
        Variant::Cor23 => BoundSpec::Cor23 { theta, p: need(p, "p")? },
        Variant::Cor24 => BoundSpec::Cor24 { theta, p: need(p, "p")? },
        Variant::Cor26 => BoundSpec::Cor26 { theta, r: need(r, "r")? },
        Variant::Cor28 => BoundSpec::Cor28 { theta, r: need(r, "r")? },
        Variant::Cor210 => BoundSpec::Cor210 { theta, r: need(r, "r")? },
    };
    let constants = spec.constants().map_err(as_config)?;
    if !constants.stated.is_finite() || constants.proof_consistent.is_some_and(|c| !c.is_finite()) {
        return Err(Error::config("constants.theta", "bound constant overflows"));
    }
    let l = match &spec {
        BoundSpec::Thm21 { phi } | BoundSpec::Thm22 { phi } | BoundSpec::Thm25 { phi } | BoundSpec::Thm27 { phi } => {
            Some(phi.l())
        }
        _ => None,
    };
    Ok(ConstantsReport {
        variant,
        theta,
        l,
        constants,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(text: &str) -> ScenarioConfig {
        ScenarioConfig::parse(text).unwrap()
    }

    #[test]
    fn zero_perturbation_is_exact() {
        for v in Variant::ALL {
            let (shape, key) = if v.allowed_shapes()[0].is_product() {
                ("", "control.r = 0.25")
            } else {
                ("", "control.p = 0.5")
            };
            let text = format!(
                "variant = {v}\nalgebra.dim = 2\n{shape}{key}\ncloud.count = 20\nchecks = additivity, homogeneity, njordan, bound\n"
            );
            let report = run_scenario(&config(&text)).unwrap();
            assert!(report.pass, "{v}: {report:#?}");
            // exact up to rounding in the commutators
            assert!(report.theta_fit.theta_hat.value() < 1e-12, "{v}");
            assert_eq!(report.correction.median_iterations, Some(0.0), "{v}");
        }
    }

    #[test]
    fn cor26_reports_both_constants() {
        let text = "variant = cor26\nalgebra.dim = 2\ncontrol.r = 0.25\nperturbation.shape = odd-power\nperturbation.theta = 0.05\nperturbation.p = 0.5\ncloud.count = 30\ncorrector.tolerance = 1e-9\n";
        let report = run_scenario(&config(text)).unwrap();
        let cert = report.bound.clone().unwrap();
        let stated = cert.stated.clone().unwrap();
        let alt = cert.proof_consistent.unwrap();
        let theta = cert.theta.value();
        assert!((stated.constant - theta * 3f64.powf(0.25) / (2.0 - 2f64.powf(0.25))).abs() < 1e-12);
        assert!((alt.constant - theta * 3f64.powf(0.25) / (2.0 - 2f64.sqrt())).abs() < 1e-12);
        assert!(report.check("bound").is_some() && report.check("bound-proof-consistent").is_some());
    }

    #[test]
    fn constants_subcommand_params() {
        let r = parse_constants("cor26", &["theta=1".into(), "r=0.25".into()]).unwrap();
        assert!((r.constants.stated - 1.6231938).abs() < 1e-6);
        let r = parse_constants("thm21", &["l=0.5".into()]).unwrap();
        assert_eq!(r.constants.stated, 1.0);
        let r = parse_constants("thm25", &["p=0.5".into()]).unwrap();
        assert!((r.constants.stated - 1.0 / (2.0 - 2f64.sqrt())).abs() < 1e-12);
        for bad in [vec!["p=2"], vec!["theta"], vec!["q=1"], vec!["p=abc"]] {
            let params: Vec<String> = bad.iter().map(|s| s.to_string()).collect();
            assert!(matches!(parse_constants("cor23", &params), Err(Error::Config { .. })), "{bad:?}");
        }
        assert!(matches!(parse_constants("thm21", &[]), Err(Error::Config { .. })));
        assert!(matches!(parse_constants("cor99", &[]), Err(Error::Config { .. })));
    }

    #[test]
    fn non_skew_literal_is_rejected() {
        let text = "variant = cor24\nalgebra.dim = 2\ncontrol.p = 0.5\nderivation.b = [[1, 0], [0, 0], [0, 0], [0, 0]]\n";
        match Scenario::build(&config(text)) {
            Err(Error::Config { path, .. }) => assert_eq!(path, "derivation.b"),
            other => panic!("{other:?}"),
        }
    }
}
