//! Pointwise maps `A → A`.
//!
//! Scenario maps are built as an exact derivation plus a controlled
//! perturbation, which gives every experiment a known ground truth to compare
//! the corrector's output against. Maps are cheap to clone (shared
//! structure) and immutable; evaluation is pure.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::AlgebraElement;
use crate::error::{Error, Result};

/// Shape of the term added to a base map by [`perturb`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "kebab-case")]
pub enum PerturbationShape {
    /// `θ′·‖x‖^p·E`
    Power { theta: f64, p: f64 },
    /// `c·min(1, ‖x‖)·E`
    Bounded { c: f64 },
    /// `E`
    ConstantShift,
    /// `θ′·‖x‖^(p-1)·Re⟨E, x⟩/k·E`, an odd term bounded by `θ′‖x‖^p`.
    OddPower { theta: f64, p: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PerturbationSpec {
    #[serde(flatten)]
    pub shape: PerturbationShape,
    pub direction: AlgebraElement,
    pub star_compatible: bool,
}

impl PerturbationSpec {
    pub fn new(shape: PerturbationShape, direction: AlgebraElement, star_compatible: bool) -> Result<Self> {
        let spec = PerturbationSpec {
            shape,
            direction,
            star_compatible,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn power(theta: f64, p: f64, direction: AlgebraElement) -> Result<Self> {
        Self::new(PerturbationShape::Power { theta, p }, direction, false)
    }

    pub fn validate(&self) -> Result<()> {
        let norm = self.direction.op_norm()?;
        if (norm - 1.0).abs() > 1e-9 {
            return Err(Error::config(
                "perturbation.direction",
                format!("direction must have operator norm 1, got {norm}"),
            ));
        }
        let nonneg = |name: &str, v: f64| {
            if v.is_finite() && v >= 0.0 {
                Ok(())
            } else {
                Err(Error::config(
                    format!("perturbation.{name}"),
                    format!("must be finite and >= 0, got {v}"),
                ))
            }
        };
        let positive_exponent = |v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::config("perturbation.p", format!("exponent must be > 0, got {v}")))
            }
        };
        match self.shape {
            PerturbationShape::Power { theta, p } | PerturbationShape::OddPower { theta, p } => {
                nonneg("theta", theta)?;
                positive_exponent(p)?;
            }
            PerturbationShape::Bounded { c } => nonneg("c", c)?,
            PerturbationShape::ConstantShift => {}
        }
        if self.star_compatible && !self.direction.is_hermitian(1e-12) {
            return Err(Error::config(
                "perturbation.direction",
                "star-compatible perturbations need a Hermitian direction",
            ));
        }
        Ok(())
    }

    /// The added term `g(x)`.
    pub fn term(&self, x: &AlgebraElement) -> Result<AlgebraElement> {
        let e = &self.direction;
        Ok(match self.shape {
            PerturbationShape::Power { theta, p } => {
                let norm = x.op_norm()?;
                e.scale_real(theta * norm.powf(p))
            }
            PerturbationShape::Bounded { c } => {
                let norm = x.op_norm()?;
                e.scale_real(c * norm.min(1.0))
            }
            PerturbationShape::ConstantShift => e.clone(),
            PerturbationShape::OddPower { theta, p } => {
                let norm = x.op_norm()?;
                if norm == 0.0 {
                    AlgebraElement::zeros(x.dim())
                } else {
                    let proj = e.hs_inner(x).re / x.dim() as f64;
                    e.scale_real(theta * norm.powf(p - 1.0) * proj)
                }
            }
        })
    }
}

pub type CustomFn = dyn Fn(&AlgebraElement) -> AlgebraElement + Send + Sync;

#[derive(Clone)]
pub(crate) struct Memo {
    pub(crate) tolerance: f64,
    pub(crate) m_max: u32,
    cache: Arc<Mutex<HashMap<Vec<u64>, AlgebraElement>>>,
}

#[derive(Clone)]
enum Kind {
    InnerDerivation(AlgebraElement),
    /// Acts on the column-major vectorization of `x`.
    Linear(DMatrix<Complex64>),
    Involution,
    Square,
    Perturbed(Arc<AlgebraMap>, PerturbationSpec),
    OddPart(Arc<AlgebraMap>),
    /// `x ↦ h(2x)/2`
    Dilated(Arc<AlgebraMap>),
    CorrectedLimit(Arc<AlgebraMap>, Memo),
    Custom(String, Arc<CustomFn>),
}

/// A deterministic map `M_k(ℂ) → M_k(ℂ)`, not assumed linear.
#[derive(Clone)]
pub struct AlgebraMap {
    dim: usize,
    kind: Kind,
}

impl fmt::Debug for AlgebraMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AlgebraMap(M{}: {})", self.dim, self.describe())
    }
}

impl AlgebraMap {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Short structural description, e.g. `odd(perturbed(inner))`.
    pub fn describe(&self) -> String {
        match &self.kind {
            Kind::InnerDerivation(_) => "inner".into(),
            Kind::Linear(_) => "linear".into(),
            Kind::Involution => "involution".into(),
            Kind::Square => "square".into(),
            Kind::Perturbed(base, _) => format!("perturbed({})", base.describe()),
            Kind::OddPart(inner) => format!("odd({})", inner.describe()),
            Kind::Dilated(inner) => format!("J({})", inner.describe()),
            Kind::CorrectedLimit(src, _) => format!("corrected({})", src.describe()),
            Kind::Custom(name, _) => format!("custom:{name}"),
        }
    }

    pub fn eval(&self, x: &AlgebraElement) -> Result<AlgebraElement> {
        if x.dim() != self.dim {
            return Err(Error::domain(format!(
                "map on M{} evaluated at an element of M{}",
                self.dim,
                x.dim()
            )));
        }
        let out = match &self.kind {
            Kind::InnerDerivation(b) => &(b * x) - &(x * b),
            Kind::Linear(m) => {
                let k = self.dim;
                let v = DVector::from_column_slice(x.as_matrix().as_slice());
                let w = m * v;
                AlgebraElement::from_matrix(DMatrix::from_column_slice(k, k, w.as_slice()))
                    .map_err(|_| Error::Overflow { magnitude: x.max_abs() })?
            }
            Kind::Involution => x.involution(),
            Kind::Square => x * x,
            Kind::Perturbed(base, spec) => base.eval(x)? + spec.term(x)?,
            Kind::OddPart(inner) => (inner.eval(x)? - inner.eval(&-x)?).scale_real(0.5),
            Kind::Dilated(inner) => inner.eval(&x.scale_real(2.0))?.scale_real(0.5),
            Kind::CorrectedLimit(src, memo) => {
                let key = x.bit_key();
                if let Some(hit) = memo.cache.lock().expect("memo lock").get(&key) {
                    return Ok(hit.clone());
                }
                let (value, _) = crate::corrector::correct(src, x, memo.tolerance, memo.m_max)?;
                // identical inputs always produce identical values, so a racing insert is harmless
                memo.cache
                    .lock()
                    .expect("memo lock")
                    .entry(key)
                    .or_insert_with(|| value.clone());
                value
            }
            Kind::Custom(_, f) => f(x),
        };
        if !out.is_finite() {
            return Err(Error::Overflow { magnitude: x.max_abs() });
        }
        Ok(out)
    }

    pub fn identity(dim: usize) -> Self {
        let n = dim * dim;
        AlgebraMap {
            dim,
            kind: Kind::Linear(DMatrix::identity(n, n)),
        }
    }

    pub fn zero(dim: usize) -> Self {
        let n = dim * dim;
        AlgebraMap {
            dim,
            kind: Kind::Linear(DMatrix::zeros(n, n)),
        }
    }

    /// A complex-linear map given by a `k²×k²` matrix on column-major `vec(x)`.
    pub fn linear(dim: usize, matrix: DMatrix<Complex64>) -> Result<Self> {
        let n = dim * dim;
        if matrix.nrows() != n || matrix.ncols() != n {
            return Err(Error::domain(format!(
                "linear map on M{dim} needs a {n}x{n} matrix, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        if matrix.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::MalformedElement("non-finite linear map entry".into()));
        }
        Ok(AlgebraMap {
            dim,
            kind: Kind::Linear(matrix),
        })
    }

    /// `x ↦ x*`, conjugate-linear.
    pub fn involution(dim: usize) -> Self {
        AlgebraMap {
            dim,
            kind: Kind::Involution,
        }
    }

    /// `x ↦ x²`
    pub fn square(dim: usize) -> Self {
        AlgebraMap { dim, kind: Kind::Square }
    }

    /// `x ↦ E`
    pub fn constant(direction: AlgebraElement) -> Result<Self> {
        let spec = PerturbationSpec::new(PerturbationShape::ConstantShift, direction, false)?;
        Ok(perturb(&AlgebraMap::zero(spec.direction.dim()), spec))
    }

    pub fn custom<F>(dim: usize, name: impl Into<String>, f: F) -> Self
    where
        F: Fn(&AlgebraElement) -> AlgebraElement + Send + Sync + 'static,
    {
        AlgebraMap {
            dim,
            kind: Kind::Custom(name.into(), Arc::new(f)),
        }
    }

    pub(crate) fn dilated(h: &AlgebraMap) -> Self {
        AlgebraMap {
            dim: h.dim,
            kind: Kind::Dilated(Arc::new(h.clone())),
        }
    }

    pub(crate) fn corrected_limit(source: &AlgebraMap, tolerance: f64, m_max: u32) -> Self {
        AlgebraMap {
            dim: source.dim,
            kind: Kind::CorrectedLimit(
                Arc::new(source.clone()),
                Memo {
                    tolerance,
                    m_max,
                    cache: Arc::new(Mutex::new(HashMap::new())),
                },
            ),
        }
    }

    /// Number of memoized points, for corrected-limit maps.
    pub fn memo_len(&self) -> Option<usize> {
        match &self.kind {
            Kind::CorrectedLimit(_, memo) => Some(memo.cache.lock().expect("memo lock").len()),
            _ => None,
        }
    }
}

/// `x ↦ b·x − x·b`
pub fn inner_derivation(b: AlgebraElement) -> AlgebraMap {
    AlgebraMap {
        dim: b.dim(),
        kind: Kind::InnerDerivation(b),
    }
}

/// `x ↦ (f(x) − f(−x))/2`
pub fn oddify(f: &AlgebraMap) -> AlgebraMap {
    AlgebraMap {
        dim: f.dim,
        kind: Kind::OddPart(Arc::new(f.clone())),
    }
}

/// `x ↦ base(x) + g(x)` with `g` given by the spec's shape.
pub fn perturb(base: &AlgebraMap, spec: PerturbationSpec) -> AlgebraMap {
    assert_eq!(base.dim, spec.direction.dim(), "perturbation direction dimension");
    AlgebraMap {
        dim: base.dim,
        kind: Kind::Perturbed(Arc::new(base.clone()), spec),
    }
}
