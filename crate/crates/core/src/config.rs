//! Declarative scenario files.
//!
//! A scenario is a flat text file of `key.path = value` lines. Blank lines and
//! lines starting with `#` are ignored; a trailing `# comment` after a value is
//! stripped. Matrix literals are row-major lists of `[re, im]` pairs, e.g.
//! `[[0, 1], [0, 0], [0, 0], [0, -1]]` for `diag(i, -i)` in `M_2`.
//!
//! ```text
//! variant = cor23
//! seed = 42
//! algebra.dim = 2
//! n = 2
//! derivation.b = random
//! perturbation.shape = power
//! perturbation.theta = 0.1
//! perturbation.p = 0.5
//! control.p = 0.5
//! cloud.count = 200
//! cloud.radius = 2
//! checks = additivity, homogeneity, njordan, bound
//! ```
//!
//! Every key is listed in `docs/report-schema.md` with its default.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraElement, Distribution};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    Thm21,
    Thm22,
    Cor23,
    Cor24,
    Thm25,
    Cor26,
    Thm27,
    Cor28,
    Cor210,
}

impl Variant {
    pub const ALL: [Variant; 9] = [
        Variant::Thm21,
        Variant::Thm22,
        Variant::Cor23,
        Variant::Cor24,
        Variant::Thm25,
        Variant::Cor26,
        Variant::Thm27,
        Variant::Cor28,
        Variant::Cor210,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Variant::Thm21 => "thm21",
            Variant::Thm22 => "thm22",
            Variant::Cor23 => "cor23",
            Variant::Cor24 => "cor24",
            Variant::Thm25 => "thm25",
            Variant::Cor26 => "cor26",
            Variant::Thm27 => "thm27",
            Variant::Cor28 => "cor28",
            Variant::Cor210 => "cor210",
        }
    }

    /// Uses the 4-argument control form with the star term.
    pub fn is_star(self) -> bool {
        matches!(
            self,
            Variant::Thm22 | Variant::Cor24 | Variant::Thm27 | Variant::Cor28 | Variant::Cor210
        )
    }

    /// Works with odd maps and the `(x, 3x, 0)` anchor.
    pub fn is_odd(self) -> bool {
        matches!(
            self,
            Variant::Thm25 | Variant::Cor26 | Variant::Thm27 | Variant::Cor28 | Variant::Cor210
        )
    }

    /// Takes a generic φ and its `L` rather than a fixed corollary shape.
    pub fn is_theorem(self) -> bool {
        matches!(self, Variant::Thm21 | Variant::Thm22 | Variant::Thm25 | Variant::Thm27)
    }

    /// The control shapes this variant accepts; the first is the default.
    pub fn allowed_shapes(self) -> &'static [ShapeTag] {
        use ShapeTag::*;
        match self {
            Variant::Thm21 | Variant::Cor23 => &[PowerSum],
            Variant::Thm22 | Variant::Cor24 => &[PowerSumStar],
            Variant::Thm25 => &[ProductPower, PowerSum],
            Variant::Thm27 => &[ProductPowerStar, PowerSumStar],
            Variant::Cor26 => &[ProductPower],
            Variant::Cor28 | Variant::Cor210 => &[ProductPowerStar],
        }
    }
}

impl FromStr for Variant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Variant::ALL
            .into_iter()
            .find(|v| v.tag() == s)
            .ok_or_else(|| Error::config("variant", format!("unknown variant `{s}`")))
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ShapeTag {
    PowerSum,
    ProductPower,
    PowerSumStar,
    ProductPowerStar,
}

impl ShapeTag {
    pub fn tag(self) -> &'static str {
        match self {
            ShapeTag::PowerSum => "power-sum",
            ShapeTag::ProductPower => "product-power",
            ShapeTag::PowerSumStar => "power-sum-star",
            ShapeTag::ProductPowerStar => "product-power-star",
        }
    }

    pub fn is_product(self) -> bool {
        matches!(self, ShapeTag::ProductPower | ShapeTag::ProductPowerStar)
    }
}

impl FromStr for ShapeTag {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        [
            ShapeTag::PowerSum,
            ShapeTag::ProductPower,
            ShapeTag::PowerSumStar,
            ShapeTag::ProductPowerStar,
        ]
        .into_iter()
        .find(|t| t.tag() == s)
        .ok_or_else(|| Error::config("control.shape", format!("unknown control shape `{s}`")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckName {
    Additivity,
    Homogeneity,
    Njordan,
    Leibniz,
    Star,
    Bound,
}

impl CheckName {
    pub fn tag(self) -> &'static str {
        match self {
            CheckName::Additivity => "additivity",
            CheckName::Homogeneity => "homogeneity",
            CheckName::Njordan => "njordan",
            CheckName::Leibniz => "leibniz",
            CheckName::Star => "star",
            CheckName::Bound => "bound",
        }
    }
}

impl FromStr for CheckName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        [
            CheckName::Additivity,
            CheckName::Homogeneity,
            CheckName::Njordan,
            CheckName::Leibniz,
            CheckName::Star,
            CheckName::Bound,
        ]
        .into_iter()
        .find(|c| c.tag() == s)
        .ok_or_else(|| Error::config("checks", format!("unknown check `{s}`")))
    }
}

/// A matrix given literally or by a generator tag.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MatrixSource {
    /// `random`: a seeded draw (skew-adjoint or Hermitian when the context asks).
    Random,
    /// `e11`: the matrix unit with a single 1 in the top-left corner.
    E11,
    Literal(AlgebraElement),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PerturbationKind {
    None,
    Power,
    Bounded,
    ConstantShift,
    OddPower,
}

impl FromStr for PerturbationKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "none" => PerturbationKind::None,
            "power" => PerturbationKind::Power,
            "bounded" => PerturbationKind::Bounded,
            "constant-shift" => PerturbationKind::ConstantShift,
            "odd-power" => PerturbationKind::OddPower,
            other => {
                return Err(Error::config(
                    "perturbation.shape",
                    format!("unknown perturbation shape `{other}`"),
                ))
            }
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DerivationConfig {
    pub kind: String,
    pub b: MatrixSource,
    pub skew_adjoint: bool,
    pub b_norm: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PerturbationConfig {
    pub shape: PerturbationKind,
    pub theta: f64,
    pub p: f64,
    pub c: f64,
    pub direction: MatrixSource,
    pub star_compatible: bool,
}

/// How θ enters the certified bound.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ThetaSetting {
    /// Use the empirical `theta_hat` from the same cloud.
    Fit,
    Fixed(f64),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ControlConfig {
    pub shape: ShapeTag,
    pub theta: ThetaSetting,
    /// Exponent `p` (power-sum shapes) or `r` (product-power shapes).
    pub exponent: f64,
    /// Overrides the shape's natural `L`; theorem variants only.
    pub l: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CloudConfig {
    pub count: usize,
    pub radius: f64,
    pub distribution: Distribution,
    pub include_zero: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorrectorConfig {
    pub tolerance: f64,
    pub m_max: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub variant: Variant,
    pub seed: u64,
    pub dim: usize,
    pub n: u32,
    pub derivation: DerivationConfig,
    pub perturbation: PerturbationConfig,
    pub control: ControlConfig,
    pub cloud: CloudConfig,
    pub mu_grid: u32,
    pub corrector: CorrectorConfig,
    pub checks: Vec<CheckName>,
}

/// Ordered `key → (line, value)` pairs of a scenario file.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RawConfig {
    entries: BTreeMap<String, (usize, String)>,
}

impl RawConfig {
    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(|(_, v)| v.as_str())
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    pub fn insert(&mut self, key: &str, value: &str) {
        self.entries.insert(key.to_string(), (0, value.to_string()));
    }
}

fn strip_comment(line: &str) -> &str {
    // `#` never occurs inside values (matrix literals and numbers do not use it)
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

fn valid_key(key: &str) -> bool {
    !key.is_empty()
        && key.split('.').all(|seg| {
            !seg.is_empty() && seg.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
        })
}

/// Splits a scenario file into key/value pairs; duplicate keys are an error.
pub fn parse_raw(text: &str) -> Result<RawConfig> {
    let mut raw = RawConfig::default();
    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let body = strip_comment(line).trim();
        if body.is_empty() {
            continue;
        }
        let (key, value) = body
            .split_once('=')
            .ok_or_else(|| Error::config(format!("line {lineno}"), "expected `key = value`"))?;
        let key = key.trim();
        let value = value.trim();
        if !valid_key(key) {
            return Err(Error::config(format!("line {lineno}"), format!("invalid key `{key}`")));
        }
        if value.is_empty() {
            return Err(Error::config(key, "missing value"));
        }
        let value = value
            .strip_prefix('"')
            .and_then(|v| v.strip_suffix('"'))
            .unwrap_or(value);
        if let Some((first, _)) = raw.entries.get(key) {
            return Err(Error::config(
                key,
                format!("duplicate key (first set on line {first}, again on line {lineno})"),
            ));
        }
        raw.entries.insert(key.to_string(), (lineno, value.to_string()));
    }
    Ok(raw)
}

/// Parses a row-major `[[re, im], ...]` literal into a `dim × dim` element.
pub fn parse_matrix_literal(text: &str, dim: usize) -> Result<AlgebraElement> {
    let pairs: Vec<[f64; 2]> =
        serde_json::from_str(text).map_err(|e| Error::MalformedElement(format!("matrix literal: {e}")))?;
    let entries: Vec<Complex64> = pairs.iter().map(|&[re, im]| Complex64::new(re, im)).collect();
    AlgebraElement::from_row_major(dim, &entries)
}

const KNOWN_KEYS: &[&str] = &[
    "variant",
    "seed",
    "algebra.dim",
    "n",
    "derivation.kind",
    "derivation.b",
    "derivation.skew_adjoint",
    "derivation.b_norm",
    "perturbation.shape",
    "perturbation.theta",
    "perturbation.p",
    "perturbation.c",
    "perturbation.direction",
    "perturbation.star_compatible",
    "control.shape",
    "control.theta",
    "control.p",
    "control.r",
    "control.l",
    "cloud.count",
    "cloud.radius",
    "cloud.distribution",
    "cloud.include_zero",
    "mu_grid",
    "corrector.tolerance",
    "corrector.m_max",
    "checks",
];

struct Reader<'a> {
    raw: &'a RawConfig,
}

impl Reader<'_> {
    fn parsed<T: FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: fmt::Display,
    {
        match self.raw.get(key) {
            None => Ok(None),
            Some(v) => v
                .parse::<T>()
                .map(Some)
                .map_err(|e| Error::config(key, format!("cannot parse `{v}`: {e}"))),
        }
    }

    fn or<T: FromStr>(&self, key: &str, default: T) -> Result<T>
    where
        T::Err: fmt::Display,
    {
        Ok(self.parsed(key)?.unwrap_or(default))
    }

    fn required<T: FromStr>(&self, key: &str) -> Result<T>
    where
        T::Err: fmt::Display,
    {
        self.parsed(key)?.ok_or_else(|| Error::config(key, "required key is missing"))
    }

    fn real(&self, key: &str, default: f64) -> Result<f64> {
        let v: f64 = self.or(key, default)?;
        if !v.is_finite() {
            return Err(Error::config(key, "must be finite"));
        }
        Ok(v)
    }

    fn matrix(&self, key: &str, dim: usize, default: MatrixSource) -> Result<MatrixSource> {
        match self.raw.get(key) {
            None => Ok(default),
            Some("random") => Ok(MatrixSource::Random),
            Some("e11") => Ok(MatrixSource::E11),
            Some(lit) if lit.starts_with('[') => parse_matrix_literal(lit, dim)
                .map(MatrixSource::Literal)
                .map_err(|e| Error::config(key, e.to_string())),
            Some(other) => Err(Error::config(key, format!("expected `random`, `e11` or a matrix literal, got `{other}`"))),
        }
    }
}

impl ScenarioConfig {
    pub fn parse(text: &str) -> Result<Self> {
        Self::from_raw(&parse_raw(text)?)
    }

    pub fn from_raw(raw: &RawConfig) -> Result<Self> {
        if let Some(unknown) = raw.keys().find(|k| !KNOWN_KEYS.contains(k)) {
            return Err(Error::config(unknown, "unknown key"));
        }
        let r = Reader { raw };
        let variant: Variant = r.required("variant")?;
        let dim: usize = r.required("algebra.dim")?;
        if dim == 0 || dim > 16 {
            return Err(Error::config("algebra.dim", "dimension must lie in 1..=16"));
        }
        let n: u32 = r.or("n", 2)?;

        let derivation = DerivationConfig {
            kind: r.or("derivation.kind", "inner".to_string())?,
            b: r.matrix("derivation.b", dim, MatrixSource::Random)?,
            skew_adjoint: r.or("derivation.skew_adjoint", variant.is_star())?,
            b_norm: r.real("derivation.b_norm", 0.5)?,
        };
        let perturbation = PerturbationConfig {
            shape: r.or("perturbation.shape", PerturbationKind::None)?,
            theta: r.real("perturbation.theta", 0.0)?,
            p: r.real("perturbation.p", 0.5)?,
            c: r.real("perturbation.c", 0.0)?,
            direction: r.matrix("perturbation.direction", dim, MatrixSource::Random)?,
            star_compatible: r.or("perturbation.star_compatible", variant.is_star())?,
        };
        let shape = r.or("control.shape", variant.allowed_shapes()[0])?;
        let exponent_key = if shape.is_product() { "control.r" } else { "control.p" };
        let stray = if shape.is_product() { "control.p" } else { "control.r" };
        if raw.get(stray).is_some() {
            return Err(Error::config(stray, format!("not used by the {} shape", shape.tag())));
        }
        let theta = match raw.get("control.theta") {
            None | Some("fit") => ThetaSetting::Fit,
            Some(v) => ThetaSetting::Fixed(
                v.parse::<f64>()
                    .map_err(|e| Error::config("control.theta", format!("cannot parse `{v}`: {e}")))?,
            ),
        };
        let control = ControlConfig {
            shape,
            theta,
            exponent: r.required(exponent_key)?,
            l: r.parsed("control.l")?,
        };
        let cloud = CloudConfig {
            count: r.or("cloud.count", 200)?,
            radius: r.real("cloud.radius", 2.0)?,
            distribution: r.or("cloud.distribution", Distribution::DenseGaussian)?,
            include_zero: r.or("cloud.include_zero", false)?,
        };
        let checks = match raw.get("checks") {
            None => vec![CheckName::Bound],
            Some(list) => {
                let mut v: Vec<CheckName> = list
                    .split(',')
                    .map(|s| s.trim().parse())
                    .collect::<Result<_>>()?;
                v.sort();
                v.dedup();
                v
            }
        };
        let config = ScenarioConfig {
            variant,
            seed: r.or("seed", 0)?,
            dim,
            n,
            derivation,
            perturbation,
            control,
            cloud,
            mu_grid: r.or("mu_grid", 8)?,
            corrector: CorrectorConfig {
                tolerance: r.real("corrector.tolerance", 1e-10)?,
                m_max: r.or("corrector.m_max", crate::corrector::MAX_ITERATIONS)?,
            },
            checks,
        };
        config.normalized()
    }

    /// Applies variant-forced settings and validates parameter ranges.
    fn normalized(mut self) -> Result<Self> {
        let v = self.variant;
        if v == Variant::Cor210 {
            if self.n != 2 {
                return Err(Error::config("n", "cor210 is a Jordan (n = 2) statement"));
            }
            if !self.checks.contains(&CheckName::Star) {
                self.checks.push(CheckName::Star);
                self.checks.sort();
            }
        }
        if self.n < 2 {
            return Err(Error::config("n", "n must be >= 2"));
        }
        if self.derivation.kind != "inner" {
            return Err(Error::config("derivation.kind", "only `inner` derivations are supported"));
        }
        if !(self.derivation.b_norm >= 0.0) {
            return Err(Error::config("derivation.b_norm", "must be >= 0"));
        }
        if !v.allowed_shapes().contains(&self.control.shape) {
            let allowed: Vec<_> = v.allowed_shapes().iter().map(|s| s.tag()).collect();
            return Err(Error::config(
                "control.shape",
                format!("{} accepts {}", v.tag(), allowed.join(" or ")),
            ));
        }
        let e = self.control.exponent;
        if self.control.shape.is_product() {
            if !(e > 0.0 && e < 0.5) {
                return Err(Error::config("control.r", "r must lie in (0, 1/2)"));
            }
        } else if !(e > 0.0 && e < 1.0) {
            return Err(Error::config("control.p", "p must lie in (0, 1)"));
        }
        if let Some(l) = self.control.l {
            if !v.is_theorem() {
                return Err(Error::config("control.l", "only theorem variants take an explicit L"));
            }
            if !(l > 0.0 && l < 1.0) {
                return Err(Error::config("control.l", "L must lie in (0, 1)"));
            }
        }
        if let ThetaSetting::Fixed(t) = self.control.theta {
            if !(t.is_finite() && t >= 0.0) {
                return Err(Error::config("control.theta", "must be `fit` or a finite number >= 0"));
            }
        }
        if self.cloud.count == 0 {
            return Err(Error::config("cloud.count", "must be >= 1"));
        }
        if !(self.cloud.radius > 0.0) {
            return Err(Error::config("cloud.radius", "must be > 0"));
        }
        if self.mu_grid == 0 {
            return Err(Error::config("mu_grid", "must be >= 1"));
        }
        if !(self.corrector.tolerance > 0.0) {
            return Err(Error::config("corrector.tolerance", "must be > 0"));
        }
        if self.corrector.m_max > crate::corrector::MAX_ITERATIONS {
            return Err(Error::config("corrector.m_max", "must be <= 60"));
        }
        if self.checks.is_empty() {
            return Err(Error::config("checks", "at least one check is required"));
        }
        let p = &self.perturbation;
        match p.shape {
            PerturbationKind::Power | PerturbationKind::OddPower => {
                if !(p.theta >= 0.0) {
                    return Err(Error::config("perturbation.theta", "must be >= 0"));
                }
                if !(p.p > 0.0) {
                    return Err(Error::config("perturbation.p", "must be > 0"));
                }
            }
            PerturbationKind::Bounded if !(p.c >= 0.0) => {
                return Err(Error::config("perturbation.c", "must be >= 0"));
            }
            _ => {}
        }
        Ok(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "variant = cor23\nalgebra.dim = 2\ncontrol.p = 0.5\n";

    #[test]
    fn minimal_config_gets_defaults() {
        let c = ScenarioConfig::parse(MINIMAL).unwrap();
        assert_eq!(c.variant, Variant::Cor23);
        assert_eq!(c.n, 2);
        assert_eq!(c.cloud.count, 200);
        assert_eq!(c.mu_grid, 8);
        assert_eq!(c.corrector.m_max, 60);
        assert_eq!(c.control.theta, ThetaSetting::Fit);
        assert_eq!(c.checks, vec![CheckName::Bound]);
    }

    #[test]
    fn comments_quotes_and_lists() {
        let text = "# header\nvariant = \"cor23\"  # trailing\nalgebra.dim=3\ncontrol.p = 0.3\nchecks = bound, additivity ,njordan\n\n";
        let c = ScenarioConfig::parse(text).unwrap();
        assert_eq!(c.dim, 3);
        assert_eq!(c.checks, vec![CheckName::Additivity, CheckName::Njordan, CheckName::Bound]);
    }

    #[test]
    fn matrix_literals() {
        let text = format!("{MINIMAL}derivation.b = [[0, 1], [0, 0], [0, 0], [0, -1]]\n");
        let c = ScenarioConfig::parse(&text).unwrap();
        match c.derivation.b {
            MatrixSource::Literal(b) => assert_eq!(b.get(0, 0), Complex64::new(0.0, 1.0)),
            other => panic!("{other:?}"),
        }
        let err = parse_matrix_literal("[[1, 0], [0, 0]]", 2).unwrap_err();
        assert!(matches!(err, Error::MalformedElement(_)));
    }

    #[test]
    fn errors_name_the_field() {
        let cases = [
            ("variant = thm99\nalgebra.dim = 2\n", "variant"),
            (&format!("{MINIMAL}bogus.key = 1\n"), "bogus.key"),
            (&format!("{MINIMAL}cloud.count = many\n"), "cloud.count"),
            (&format!("{MINIMAL}control.r = 0.2\n"), "control.r"),
            (&format!("{MINIMAL}control.l = 0.5\n"), "control.l"),
            (&format!("{MINIMAL}variant = cor24\n"), "variant"),
            ("variant = cor23\nalgebra.dim = 2\ncontrol.p = 1.5\n", "control.p"),
            ("variant = cor210\nalgebra.dim = 2\ncontrol.r = 0.2\nn = 3\n", "n"),
            ("variant = cor26\nalgebra.dim = 2\ncontrol.shape = power-sum\ncontrol.p = 0.5\n", "control.shape"),
            (&format!("{MINIMAL}corrector.m_max = 61\n"), "corrector.m_max"),
            (&format!("{MINIMAL}checks = bound, telepathy\n"), "checks"),
            ("variant = cor23\n", "algebra.dim"),
        ];
        for (text, field) in cases {
            match ScenarioConfig::parse(text) {
                Err(Error::Config { path, .. }) => assert_eq!(path, field, "{text}"),
                other => panic!("expected config error for {text:?}, got {other:?}"),
            }
        }
        assert!(matches!(parse_raw("just words\n"), Err(Error::Config { .. })));
    }

    #[test]
    fn cor210_forces_star_check() {
        let c = ScenarioConfig::parse("variant = cor210\nalgebra.dim = 2\ncontrol.r = 0.2\nchecks = bound\n").unwrap();
        assert!(c.checks.contains(&CheckName::Star));
        assert_eq!(c.n, 2);
        assert_eq!(c.control.shape, ShapeTag::ProductPowerStar);
    }

    #[test]
    fn config_json_roundtrip() {
        let text = format!("{MINIMAL}derivation.b = [[0, 1], [0, 0], [0, 0], [0, -1]]\ncontrol.theta = 0.25\n");
        let c = ScenarioConfig::parse(&text).unwrap();
        let s = serde_json::to_string(&c).unwrap();
        assert_eq!(serde_json::from_str::<ScenarioConfig>(&s).unwrap(), c);
    }
}
