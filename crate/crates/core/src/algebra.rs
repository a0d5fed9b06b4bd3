//! The matrix C*-algebra M_k(ℂ).
//!
//! Elements are dense k×k complex matrices carrying the operator norm (largest
//! singular value) and the conjugate-transpose involution. This single family
//! is a Banach algebra and a C*-algebra at once, so every stability statement
//! in the crate is exercised on it.
//!
//! # Sampling
//!
//! [`sample_elements`] draws a reproducible cloud from a ChaCha8 stream seeded
//! by [`SampleSpec::seed`]. Each element is produced in two steps:
//!
//! 1. a raw matrix `G` is drawn from the requested ensemble:
//!    - `dense-gaussian`: i.i.d. standard complex Gaussian entries (Ginibre);
//!    - `hermitian`: `(G + G*)/2` for a Ginibre `G`;
//!    - `diagonal`: Ginibre entries on the diagonal, zero elsewhere;
//!    - `sparse`: each entry independently nonzero with probability `1/k`;
//! 2. `G` is rescaled to norm `radius · u` with `u ~ Uniform(0, 1]`.
//!
//! Raw draws with zero norm are redrawn. When `include_zero` is set the zero
//! matrix occupies index 0 and the remaining `count - 1` elements follow.
//! Because elements are generated sequentially from one stream, the cloud for
//! `count = N` is a prefix of the cloud for any larger count.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A k×k complex matrix with finite entries.
#[derive(Clone, PartialEq)]
pub struct AlgebraElement {
    m: DMatrix<Complex64>,
}

impl AlgebraElement {
    /// Builds an element from row-major entries.
    pub fn from_row_major(dim: usize, entries: &[Complex64]) -> Result<Self> {
        if dim == 0 {
            return Err(Error::MalformedElement("dimension must be positive".into()));
        }
        if entries.len() != dim * dim {
            return Err(Error::MalformedElement(format!(
                "expected {} entries for a {dim}x{dim} matrix, got {}",
                dim * dim,
                entries.len()
            )));
        }
        Self::from_matrix(DMatrix::from_row_slice(dim, dim, entries))
    }

    pub fn from_matrix(m: DMatrix<Complex64>) -> Result<Self> {
        if m.nrows() != m.ncols() || m.nrows() == 0 {
            return Err(Error::MalformedElement(format!(
                "expected a nonempty square matrix, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        let el = AlgebraElement { m };
        if !el.is_finite() {
            return Err(Error::MalformedElement("non-finite entry".into()));
        }
        Ok(el)
    }

    pub fn zeros(dim: usize) -> Self {
        AlgebraElement {
            m: DMatrix::zeros(dim, dim),
        }
    }

    pub fn identity(dim: usize) -> Self {
        AlgebraElement {
            m: DMatrix::identity(dim, dim),
        }
    }

    pub fn diag(entries: &[Complex64]) -> Result<Self> {
        let k = entries.len();
        let mut m = DMatrix::zeros(k, k);
        for (i, &e) in entries.iter().enumerate() {
            m[(i, i)] = e;
        }
        Self::from_matrix(m)
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn as_matrix(&self) -> &DMatrix<Complex64> {
        &self.m
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.m[(row, col)]
    }

    pub fn row_major(&self) -> Vec<Complex64> {
        let k = self.dim();
        (0..k)
            .flat_map(|i| (0..k).map(move |j| (i, j)))
            .map(|(i, j)| self.m[(i, j)])
            .collect()
    }

    pub fn is_finite(&self) -> bool {
        self.m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn is_zero(&self) -> bool {
        self.m.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }

    /// Largest entry modulus; used to report overflow magnitudes.
    pub fn max_abs(&self) -> f64 {
        self.m.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Operator norm: the largest singular value.
    pub fn op_norm(&self) -> Result<f64> {
        if !self.is_finite() {
            return Err(Error::MalformedElement(
                "operator norm of a matrix with non-finite entries".into(),
            ));
        }
        if self.is_zero() {
            return Ok(0.0);
        }
        if self.dim() == 1 {
            return Ok(self.m[(0, 0)].norm());
        }
        // SVD squares intermediate values; normalizing first keeps entries near
        // 1e300 from overflowing to NaN inside the decomposition
        let scale = self.max_abs();
        if !scale.is_finite() {
            return Err(Error::Overflow { magnitude: scale });
        }
        let sigma = scale * self.m.unscale(scale).singular_values().max();
        if !sigma.is_finite() {
            return Err(Error::Overflow { magnitude: scale });
        }
        Ok(sigma)
    }

    /// Conjugate transpose.
    pub fn involution(&self) -> Self {
        AlgebraElement {
            m: self.m.adjoint(),
        }
    }

    pub fn power(&self, n: u32) -> Result<Self> {
        if n < 1 {
            return Err(Error::domain(format!("power exponent must be >= 1, got {n}")));
        }
        let mut acc = self.clone();
        for _ in 1..n {
            acc = &acc * self;
        }
        Ok(acc)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        AlgebraElement { m: &self.m * c }
    }

    pub fn scale_real(&self, t: f64) -> Self {
        AlgebraElement {
            m: self.m.map(|z| z * t),
        }
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        let k = self.dim();
        (0..k).all(|i| (0..k).all(|j| (self.m[(i, j)] - self.m[(j, i)].conj()).norm() <= tol))
    }

    /// `tr(self* · other)`, the Hilbert–Schmidt inner product.
    pub fn hs_inner(&self, other: &Self) -> Complex64 {
        self.m
            .iter()
            .zip(other.m.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Exact bit pattern of the entries, usable as a hash key.
    pub fn bit_key(&self) -> Vec<u64> {
        self.m
            .iter()
            .flat_map(|z| [z.re.to_bits(), z.im.to_bits()])
            .collect()
    }

    fn check_dims(&self, other: &Self) {
        assert_eq!(
            self.dim(),
            other.dim(),
            "algebra elements of different dimension combined"
        );
    }
}

impl fmt::Debug for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = self.dim();
        write!(f, "M{k}[")?;
        for i in 0..k {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..k {
                if j > 0 {
                    write!(f, ", ")?;
                }
                let z = self.m[(i, j)];
                write!(f, "{}{:+}i", z.re, z.im)?;
            }
        }
        write!(f, "]")
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl $tr<&AlgebraElement> for &AlgebraElement {
            type Output = AlgebraElement;
            fn $method(self, rhs: &AlgebraElement) -> AlgebraElement {
                self.check_dims(rhs);
                let f: fn(&DMatrix<Complex64>, &DMatrix<Complex64>) -> DMatrix<Complex64> = $body;
                AlgebraElement { m: f(&self.m, &rhs.m) }
            }
        }
        impl $tr<AlgebraElement> for AlgebraElement {
            type Output = AlgebraElement;
            fn $method(self, rhs: AlgebraElement) -> AlgebraElement {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&AlgebraElement> for AlgebraElement {
            type Output = AlgebraElement;
            fn $method(self, rhs: &AlgebraElement) -> AlgebraElement {
                (&self).$method(rhs)
            }
        }
    };
}

binop!(Add, add, |a, b| a + b);
binop!(Sub, sub, |a, b| a - b);
binop!(Mul, mul, |a, b| a * b);

impl Neg for &AlgebraElement {
    type Output = AlgebraElement;
    fn neg(self) -> AlgebraElement {
        AlgebraElement { m: -&self.m }
    }
}

impl Neg for AlgebraElement {
    type Output = AlgebraElement;
    fn neg(self) -> AlgebraElement {
        -&self
    }
}

#[derive(Serialize, Deserialize)]
struct ElementRepr {
    dim: usize,
    /// Row-major `[re, im]` pairs.
    entries: Vec<[f64; 2]>,
}

impl Serialize for AlgebraElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ElementRepr {
            dim: self.dim(),
            entries: self.row_major().into_iter().map(|z| [z.re, z.im]).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for AlgebraElement {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = ElementRepr::deserialize(d)?;
        let entries: Vec<Complex64> = repr
            .entries
            .iter()
            .map(|&[re, im]| Complex64::new(re, im))
            .collect();
        AlgebraElement::from_row_major(repr.dim, &entries).map_err(serde::de::Error::custom)
    }
}

/// A complex scalar of modulus one.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Complex64", into = "Complex64")]
pub struct UnitScalar(Complex64);

impl UnitScalar {
    pub const ONE: UnitScalar = UnitScalar(Complex64 { re: 1.0, im: 0.0 });

    pub fn new(value: Complex64) -> Result<Self> {
        if !(value.re.is_finite() && value.im.is_finite()) || (value.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::domain(format!("|{value}| is not 1")));
        }
        Ok(UnitScalar(value))
    }

    pub fn value(self) -> Complex64 {
        self.0
    }
}

impl TryFrom<Complex64> for UnitScalar {
    type Error = Error;
    fn try_from(value: Complex64) -> Result<Self> {
        UnitScalar::new(value)
    }
}

impl From<UnitScalar> for Complex64 {
    fn from(u: UnitScalar) -> Self {
        u.0
    }
}

/// The K-th roots of unity `e^{2πik/K}`, k = 0..K-1.
///
/// Quarter-turn roots are returned exactly (`i`, `-1`, `-i`).
pub fn sample_unit_scalars(count: u32) -> Result<Vec<UnitScalar>> {
    if count < 1 {
        return Err(Error::domain("number of unit scalars must be >= 1"));
    }
    let k_total = count as u64;
    Ok((0..k_total)
        .map(|k| {
            if (4 * k) % k_total == 0 {
                match 4 * k / k_total {
                    0 => Complex64::new(1.0, 0.0),
                    1 => Complex64::new(0.0, 1.0),
                    2 => Complex64::new(-1.0, 0.0),
                    _ => Complex64::new(0.0, -1.0),
                }
            } else {
                let angle = 2.0 * std::f64::consts::PI * k as f64 / k_total as f64;
                Complex64::from_polar(1.0, angle)
            }
        })
        .map(UnitScalar)
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Distribution {
    DenseGaussian,
    Hermitian,
    Diagonal,
    Sparse,
}

impl Distribution {
    pub fn tag(self) -> &'static str {
        match self {
            Distribution::DenseGaussian => "dense-gaussian",
            Distribution::Hermitian => "hermitian",
            Distribution::Diagonal => "diagonal",
            Distribution::Sparse => "sparse",
        }
    }
}

impl FromStr for Distribution {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dense-gaussian" => Ok(Distribution::DenseGaussian),
            "hermitian" => Ok(Distribution::Hermitian),
            "diagonal" => Ok(Distribution::Diagonal),
            "sparse" => Ok(Distribution::Sparse),
            other => Err(Error::config(
                "cloud.distribution",
                format!("unknown distribution `{other}`"),
            )),
        }
    }
}

impl fmt::Display for Distribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleSpec {
    pub dim: usize,
    pub count: usize,
    pub radius: f64,
    pub distribution: Distribution,
    pub seed: u64,
    #[serde(default)]
    pub include_zero: bool,
}

impl SampleSpec {
    pub fn new(dim: usize, count: usize, radius: f64, distribution: Distribution, seed: u64) -> Self {
        SampleSpec {
            dim,
            count,
            radius,
            distribution,
            seed,
            include_zero: false,
        }
    }

    pub fn with_zero(mut self) -> Self {
        self.include_zero = true;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::config("cloud.dim", "dimension must be positive"));
        }
        if self.count == 0 {
            return Err(Error::config("cloud.count", "count must be >= 1"));
        }
        if !(self.radius.is_finite() && self.radius > 0.0) {
            return Err(Error::config("cloud.radius", "radius must be positive and finite"));
        }
        Ok(())
    }
}

/// Seeded generator for raw ensemble draws, shared by the cloud sampler and
/// scenario builders that need random generators (e.g. a derivation's `b`).
pub struct ElementSampler {
    rng: ChaCha8Rng,
    dim: usize,
}

impl ElementSampler {
    pub fn new(dim: usize, seed: u64) -> Self {
        ElementSampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
            dim,
        }
    }

    fn gaussian(&mut self) -> Complex64 {
        let re: f64 = self.rng.sample(StandardNormal);
        let im: f64 = self.rng.sample(StandardNormal);
        Complex64::new(re, im)
    }

    /// One raw draw from the ensemble; never the zero matrix.
    pub fn raw(&mut self, distribution: Distribution) -> AlgebraElement {
        let k = self.dim;
        loop {
            let mut m = DMatrix::<Complex64>::zeros(k, k);
            match distribution {
                Distribution::DenseGaussian => {
                    for z in m.iter_mut() {
                        *z = self.gaussian();
                    }
                }
                Distribution::Hermitian => {
                    for z in m.iter_mut() {
                        *z = self.gaussian();
                    }
                    let adj = m.adjoint();
                    m = (m + adj).map(|z| z * 0.5);
                }
                Distribution::Diagonal => {
                    for i in 0..k {
                        m[(i, i)] = self.gaussian();
                    }
                }
                Distribution::Sparse => {
                    let density = 1.0 / k as f64;
                    for z in m.iter_mut() {
                        let keep: f64 = self.rng.random();
                        let value = self.gaussian();
                        if keep < density {
                            *z = value;
                        }
                    }
                }
            }
            let el = AlgebraElement { m };
            if !el.is_zero() {
                return el;
            }
        }
    }

    /// A raw draw rescaled to the given operator norm.
    pub fn with_norm(&mut self, distribution: Distribution, norm: f64) -> AlgebraElement {
        let raw = self.raw(distribution);
        let current = raw.op_norm().expect("raw draws are finite");
        raw.scale_real(norm / current)
    }

    /// Skew-adjoint element (`b* = -b`) with the given norm.
    pub fn skew_adjoint(&mut self, norm: f64) -> AlgebraElement {
        let g = self.raw(Distribution::DenseGaussian);
        let skew = (&g - &g.involution()).scale_real(0.5);
        let current = skew.op_norm().expect("finite");
        if current == 0.0 {
            return self.skew_adjoint(norm);
        }
        skew.scale_real(norm / current)
    }

    pub fn uniform_unit(&mut self) -> f64 {
        // (0, 1]
        1.0 - self.rng.random::<f64>()
    }
}

/// Deterministic sample cloud; see the module docs for the distributions.
pub fn sample_elements(spec: &SampleSpec) -> Result<Vec<AlgebraElement>> {
    spec.validate()?;
    let mut sampler = ElementSampler::new(spec.dim, spec.seed);
    let mut out = Vec::with_capacity(spec.count);
    if spec.include_zero {
        out.push(AlgebraElement::zeros(spec.dim));
    }
    while out.len() < spec.count {
        let target = spec.radius * sampler.uniform_unit();
        out.push(sampler.with_norm(spec.distribution, target));
    }
    Ok(out)
}
