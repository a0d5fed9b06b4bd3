//! Control functions φ and the generalized distance on map space.
//!
//! A control function bounds the defect of an approximate map and carries a
//! contraction parameter `L ∈ (0,1)` with the scaling law
//! `φ(args) ≤ 2L·φ(args/2)`. Built-in shapes know their natural `L`; custom
//! functions declare one and [`scaling_check`] verifies it on samples.
//!
//! The distance `d(g, h) = inf{C : ‖g(x) − h(x)‖ ≤ C·φ(anchor(x))}` is taken
//! as an empirical sup-ratio over a finite cloud. The anchor is a parameter:
//! the even-map statements use `(x, 0, 0)` while the odd-map statements use
//! `(x, 3x, 0)`. Note that the odd-map argument defines its metric with
//! `(x, 0, 0)` but concludes with a `(x, 3x, 0)` bound; [`Anchor::XThreeX`] is
//! what the odd-variant pipeline uses throughout.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::algebra::AlgebraElement;
use crate::error::{Error, Result};
use crate::maps::AlgebraMap;

/// Nonnegative real or `+∞`. Serialized as a JSON number, or the string `"inf"`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct ExtReal(f64);

impl ExtReal {
    pub const INFINITY: ExtReal = ExtReal(f64::INFINITY);
    pub const ZERO: ExtReal = ExtReal(0.0);

    pub fn finite(v: f64) -> Self {
        debug_assert!(v.is_finite() && v >= 0.0, "ExtReal::finite({v})");
        ExtReal(v)
    }

    pub fn is_finite(self) -> bool {
        self.0.is_finite()
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_finite() {
            write!(f, "{}", self.0)
        } else {
            f.write_str("inf")
        }
    }
}

impl Serialize for ExtReal {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.is_finite() {
            s.serialize_f64(self.0)
        } else {
            s.serialize_str("inf")
        }
    }
}

impl<'de> Deserialize<'de> for ExtReal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(f64),
            Str(String),
        }
        match Repr::deserialize(d)? {
            Repr::Num(v) if v.is_finite() && v >= 0.0 => Ok(ExtReal(v)),
            Repr::Num(v) => Err(serde::de::Error::custom(format!("invalid extended real {v}"))),
            Repr::Str(s) if s == "inf" => Ok(ExtReal::INFINITY),
            Repr::Str(s) => Err(serde::de::Error::custom(format!("invalid extended real `{s}`"))),
        }
    }
}

pub type CustomControl = dyn Fn(&[&AlgebraElement]) -> f64 + Send + Sync;

#[derive(Clone)]
pub enum ControlShape {
    /// `‖x‖^p + ‖y‖^p + ‖a‖^p`
    PowerSum { p: f64 },
    /// `‖x‖^r‖y‖^r + ‖a‖^{2r}`
    ProductPower { r: f64 },
    /// power-sum plus `‖w‖^p`
    PowerSumStar { p: f64 },
    /// product-power plus `‖w‖^r`
    ProductPowerStar { r: f64 },
    Custom {
        name: String,
        arity: usize,
        f: Arc<CustomControl>,
    },
}

impl ControlShape {
    pub fn tag(&self) -> &str {
        match self {
            ControlShape::PowerSum { .. } => "power-sum",
            ControlShape::ProductPower { .. } => "product-power",
            ControlShape::PowerSumStar { .. } => "power-sum-star",
            ControlShape::ProductPowerStar { .. } => "product-power-star",
            ControlShape::Custom { name, .. } => name,
        }
    }

    pub fn is_product_power(&self) -> bool {
        matches!(self, ControlShape::ProductPower { .. } | ControlShape::ProductPowerStar { .. })
    }
}

impl fmt::Debug for ControlShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ControlShape::PowerSum { p } => write!(f, "PowerSum {{ p: {p} }}"),
            ControlShape::ProductPower { r } => write!(f, "ProductPower {{ r: {r} }}"),
            ControlShape::PowerSumStar { p } => write!(f, "PowerSumStar {{ p: {p} }}"),
            ControlShape::ProductPowerStar { r } => write!(f, "ProductPowerStar {{ r: {r} }}"),
            ControlShape::Custom { name, arity, .. } => write!(f, "Custom {{ {name}, arity {arity} }}"),
        }
    }
}

/// `φ = θ·shape` with contraction parameter `L`.
#[derive(Clone, Debug)]
pub struct ControlFunction {
    theta: f64,
    shape: ControlShape,
    l: f64,
}

fn check_l(l: f64) -> Result<()> {
    if l.is_finite() && l > 0.0 && l < 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("L must lie in (0,1), got {l}")))
    }
}

fn check_theta(theta: f64) -> Result<()> {
    if theta.is_finite() && theta >= 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("theta must be finite and >= 0, got {theta}")))
    }
}

fn check_p(p: f64) -> Result<()> {
    if p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("p must lie in (0,1), got {p}")))
    }
}

fn check_r(r: f64) -> Result<()> {
    if r > 0.0 && r < 0.5 {
        Ok(())
    } else {
        Err(Error::domain(format!("r must lie in (0,1/2), got {r}")))
    }
}

impl ControlFunction {
    /// Power-sum control with `L = 2^{p−1}`.
    pub fn power_sum(theta: f64, p: f64) -> Result<Self> {
        check_theta(theta)?;
        check_p(p)?;
        Ok(ControlFunction {
            theta,
            shape: ControlShape::PowerSum { p },
            l: 2f64.powf(p - 1.0),
        })
    }

    pub fn power_sum_star(theta: f64, p: f64) -> Result<Self> {
        check_theta(theta)?;
        check_p(p)?;
        Ok(ControlFunction {
            theta,
            shape: ControlShape::PowerSumStar { p },
            l: 2f64.powf(p - 1.0),
        })
    }

    /// Product-power control with `L = 2^{2r−1}`.
    pub fn product_power(theta: f64, r: f64) -> Result<Self> {
        check_theta(theta)?;
        check_r(r)?;
        Ok(ControlFunction {
            theta,
            shape: ControlShape::ProductPower { r },
            l: 2f64.powf(2.0 * r - 1.0),
        })
    }

    pub fn product_power_star(theta: f64, r: f64) -> Result<Self> {
        check_theta(theta)?;
        check_r(r)?;
        Ok(ControlFunction {
            theta,
            shape: ControlShape::ProductPowerStar { r },
            l: 2f64.powf(2.0 * r - 1.0),
        })
    }

    /// A caller-supplied φ. Its `L` is declared, not derived.
    pub fn custom<F>(name: impl Into<String>, arity: usize, l: f64, f: F) -> Result<Self>
    where
        F: Fn(&[&AlgebraElement]) -> f64 + Send + Sync + 'static,
    {
        if arity != 3 && arity != 4 {
            return Err(Error::domain(format!("control arity must be 3 or 4, got {arity}")));
        }
        check_l(l)?;
        Ok(ControlFunction {
            theta: 1.0,
            shape: ControlShape::Custom {
                name: name.into(),
                arity,
                f: Arc::new(f),
            },
            l,
        })
    }

    /// Replaces `L`. Any `L` at least the natural one still satisfies the scaling law.
    pub fn with_l(mut self, l: f64) -> Result<Self> {
        check_l(l)?;
        self.l = l;
        Ok(self)
    }

    pub fn with_theta(mut self, theta: f64) -> Result<Self> {
        check_theta(theta)?;
        self.theta = theta;
        Ok(self)
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn l(&self) -> f64 {
        self.l
    }

    pub fn shape(&self) -> &ControlShape {
        &self.shape
    }

    pub fn arity(&self) -> usize {
        match &self.shape {
            ControlShape::PowerSum { .. } | ControlShape::ProductPower { .. } => 3,
            ControlShape::PowerSumStar { .. } | ControlShape::ProductPowerStar { .. } => 4,
            ControlShape::Custom { arity, .. } => *arity,
        }
    }

    /// `φ(x, y, a[, w])`
    pub fn eval(&self, args: &[&AlgebraElement]) -> Result<f64> {
        if args.len() != self.arity() {
            return Err(Error::domain(format!(
                "control function of arity {} given {} arguments",
                self.arity(),
                args.len()
            )));
        }
        let norm = |i: usize| args[i].op_norm();
        let value = match &self.shape {
            ControlShape::PowerSum { p } => {
                self.theta * (norm(0)?.powf(*p) + norm(1)?.powf(*p) + norm(2)?.powf(*p))
            }
            ControlShape::PowerSumStar { p } => {
                self.theta
                    * (norm(0)?.powf(*p) + norm(1)?.powf(*p) + norm(2)?.powf(*p) + norm(3)?.powf(*p))
            }
            ControlShape::ProductPower { r } => {
                self.theta * (norm(0)?.powf(*r) * norm(1)?.powf(*r) + norm(2)?.powf(2.0 * r))
            }
            ControlShape::ProductPowerStar { r } => {
                self.theta
                    * (norm(0)?.powf(*r) * norm(1)?.powf(*r) + norm(2)?.powf(2.0 * r) + norm(3)?.powf(*r))
            }
            ControlShape::Custom { f, name, .. } => {
                let v = f(args);
                if !(v >= 0.0) {
                    return Err(Error::ContractViolation(format!(
                        "custom control `{name}` returned {v}"
                    )));
                }
                v
            }
        };
        Ok(value)
    }
}

/// Which φ slots receive the evaluation point `x`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Anchor {
    /// `(x, 0, 0[, 0])`
    XZeroZero,
    /// `(x, 3x, 0[, 0])`
    XThreeX,
}

impl Anchor {
    pub fn args(self, x: &AlgebraElement, arity: usize) -> Vec<AlgebraElement> {
        let zero = AlgebraElement::zeros(x.dim());
        let second = match self {
            Anchor::XZeroZero => zero.clone(),
            Anchor::XThreeX => x.scale_real(3.0),
        };
        let mut out = vec![x.clone(), second, zero.clone()];
        if arity == 4 {
            out.push(zero);
        }
        out
    }
}

pub(crate) fn refs(v: &[AlgebraElement]) -> Vec<&AlgebraElement> {
    v.iter().collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingReport {
    pub pass: bool,
    pub worst_ratio: ExtReal,
    pub samples_used: usize,
}

/// Checks `φ(args) ≤ 2L·φ(args/2)` at each sample tuple.
pub fn scaling_check(phi: &ControlFunction, samples: &[Vec<AlgebraElement>]) -> Result<ScalingReport> {
    if samples.is_empty() {
        return Err(Error::domain("scaling check needs at least one sample"));
    }
    let mut worst = 0.0f64;
    let mut pass = true;
    for args in samples {
        let full = phi.eval(&refs(args))?;
        let halves: Vec<AlgebraElement> = args.iter().map(|a| a.scale_real(0.5)).collect();
        let half = 2.0 * phi.l() * phi.eval(&refs(&halves))?;
        if half == 0.0 {
            if full != 0.0 {
                pass = false;
                worst = f64::INFINITY;
            }
            continue;
        }
        let ratio = full / half;
        worst = worst.max(ratio);
        if ratio > 1.0 + 1e-9 {
            pass = false;
        }
    }
    Ok(ScalingReport {
        pass,
        worst_ratio: ExtReal(worst),
        samples_used: samples.len(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneralizedDistance {
    pub value: ExtReal,
    pub witness_point: Option<AlgebraElement>,
}

/// Empirical `sup ‖g(x) − h(x)‖ / φ(anchor(x))` over the samples.
pub fn generalized_distance(
    g: &AlgebraMap,
    h: &AlgebraMap,
    phi: &ControlFunction,
    anchor: Anchor,
    samples: &[AlgebraElement],
) -> Result<GeneralizedDistance> {
    if samples.is_empty() {
        return Err(Error::domain("generalized distance needs at least one sample"));
    }
    let mut best = 0.0f64;
    let mut witness = None;
    for x in samples {
        let gap = (g.eval(x)? - h.eval(x)?).op_norm()?;
        let den = phi.eval(&refs(&anchor.args(x, phi.arity())))?;
        if den == 0.0 {
            if gap > 1e-12 {
                return Ok(GeneralizedDistance {
                    value: ExtReal::INFINITY,
                    witness_point: Some(x.clone()),
                });
            }
            continue;
        }
        let ratio = gap / den;
        if ratio > best || witness.is_none() {
            best = best.max(ratio);
            witness = Some(x.clone());
        }
    }
    Ok(GeneralizedDistance {
        value: ExtReal(best),
        witness_point: witness,
    })
}
