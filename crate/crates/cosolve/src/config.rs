//! JSON problem configs.
//!
//! ```json
//! {
//!   "n": 1,
//!   "equations": [
//!     { "Q": [[[1, 0]]], "sign": "plus", "A": [[[[1, 0]]]], "map": { "kind": "zero" } },
//!     { "Q": [[[1, 0]]], "sign": "plus", "A": [[[[1, 0]]]], "map": { "kind": "zero" } }
//!   ],
//!   "ball_radius": 2,
//!   "k1": "auto"
//! }
//! ```
//!
//! Complex scalars are `[re, im]`; matrices are row-major nested arrays.

use std::fmt;
use std::path::Path;

use cosolve_core::controls::{AlteringDistanceFn, ControlBundle, ControlRegistry, PsiControl};
use cosolve_core::mateq::{EquationPair, EquationSpec, MapKind, Sign, DEFAULT_ALPHA};
use cosolve_core::matrix::{ComplexMatrix, HermitianMatrix};
use num_complex::Complex64;
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub const DEFAULT_TOLERANCE: f64 = 1e-10;
pub const DEFAULT_MAX_ITERATIONS: usize = 10_000;
pub const DEFAULT_SAMPLES: usize = 100;

pub type MatrixLiteral = Vec<Vec<[f64; 2]>>;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("line {line}, column {column}: field `{field}`: {message}")]
    Parse {
        line: usize,
        column: usize,
        field: String,
        message: String,
    },
    #[error("field `{field}`: {message}")]
    Invalid { field: String, message: String },
}

fn invalid(field: impl Into<String>, message: impl fmt::Display) -> ConfigError {
    ConfigError::Invalid {
        field: field.into(),
        message: message.to_string(),
    }
}

/// `k1` is either a number or `"auto"`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum K1Setting {
    #[default]
    Auto,
    Value(f64),
}

impl Serialize for K1Setting {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Self::Auto => serializer.serialize_str("auto"),
            Self::Value(v) => serializer.serialize_f64(*v),
        }
    }
}

impl<'de> Deserialize<'de> for K1Setting {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct K1Visitor;

        impl Visitor<'_> for K1Visitor {
            type Value = K1Setting;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a number or \"auto\"")
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<K1Setting, E> {
                if v == "auto" {
                    Ok(K1Setting::Auto)
                } else {
                    Err(E::invalid_value(de::Unexpected::Str(v), &self))
                }
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> Result<K1Setting, E> {
                Ok(K1Setting::Value(v))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<K1Setting, E> {
                Ok(K1Setting::Value(v as f64))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<K1Setting, E> {
                Ok(K1Setting::Value(v as f64))
            }
        }

        deserializer.deserialize_any(K1Visitor)
    }
}

/// `{kind, params}` with kind one of `zero`, `scaled_identity`, `spectral_power`,
/// `spectral_tanh`, `affine`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapConfig {
    pub kind: String,
    #[serde(default)]
    pub params: Vec<f64>,
}

impl MapConfig {
    pub fn to_kind(&self) -> Result<MapKind, String> {
        let p = &self.params;
        let expect = |count: usize| {
            if p.len() == count {
                Ok(())
            } else {
                Err(format!(
                    "map kind `{}` takes {count} parameter(s), got {}",
                    self.kind,
                    p.len()
                ))
            }
        };
        let kind = match self.kind.as_str() {
            "zero" => expect(0).map(|_| MapKind::Zero)?,
            "scaled_identity" => expect(1).map(|_| MapKind::ScaledIdentity { c: p[0] })?,
            "spectral_tanh" => expect(1).map(|_| MapKind::SpectralTanh { c: p[0] })?,
            "spectral_power" => expect(2).map(|_| MapKind::SpectralPower { c: p[0], p: p[1] })?,
            "affine" => expect(2).map(|_| MapKind::Affine { c: p[0], d: p[1] })?,
            other => {
                return Err(format!(
                    "unknown map kind `{other}` (expected zero, scaled_identity, spectral_power, spectral_tanh or affine)"
                ))
            }
        };
        kind.validate().map_err(|e| e.to_string())?;
        Ok(kind)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EquationConfig {
    #[serde(rename = "Q")]
    pub q: MatrixLiteral,
    pub sign: Sign,
    #[serde(rename = "A")]
    pub a: Vec<MatrixLiteral>,
    pub map: MapConfig,
}

/// A control function: a parametrised kind or a registry id.
///
/// Scalar kinds: `linear [c]`, `capped_linear [c, cap_at, cap_value]`, `power [c, p]`.
/// Binary kinds: `max_alpha_phi [alpha]` (wraps `phi`), `sum_scaled [scale, threshold, fallback]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ControlConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub params: Vec<f64>,
}

/// An extra `(φ, φ₁, ψ)` to certify the induced maps against.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ControlsConfig {
    pub phi: ControlConfig,
    pub phi1: ControlConfig,
    pub psi: ControlConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemConfig {
    pub n: usize,
    pub equations: Vec<EquationConfig>,
    pub ball_radius: f64,
    #[serde(default)]
    pub k1: K1Setting,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    #[serde(default = "default_max_iterations")]
    pub max_iterations: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub controls: Option<ControlsConfig>,
}

fn default_alpha() -> f64 {
    DEFAULT_ALPHA
}
fn default_tolerance() -> f64 {
    DEFAULT_TOLERANCE
}
fn default_max_iterations() -> usize {
    DEFAULT_MAX_ITERATIONS
}
fn default_samples() -> usize {
    DEFAULT_SAMPLES
}

/// A validated config.
#[derive(Debug, Clone)]
pub struct Problem {
    pub pair: EquationPair,
    pub radius: f64,
    pub k1: f64,
    pub k1_auto: bool,
    pub alpha: f64,
    pub tolerance: f64,
    pub max_iterations: usize,
    pub seed: u64,
    pub samples: usize,
    pub controls: Option<ControlBundle>,
}

impl ProblemConfig {
    pub fn from_json_str(text: &str) -> Result<Self, ConfigError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let config: Self = serde_path_to_error::deserialize(de).map_err(|err| {
            let field = err.path().to_string();
            let inner = err.into_inner();
            ConfigError::Parse {
                line: inner.line(),
                column: inner.column(),
                field,
                message: strip_position(&inner.to_string()),
            }
        })?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json_str(&text)
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("configs serialize")
    }

    pub fn build(&self) -> Result<Problem, ConfigError> {
        let n = self.n;
        if n == 0 {
            return Err(invalid("n", "dimension must be at least 1"));
        }
        if self.equations.len() != 2 {
            return Err(invalid(
                "equations",
                format!(
                    "expected exactly 2 equations, found {}",
                    self.equations.len()
                ),
            ));
        }
        positive("ball_radius", self.ball_radius)?;
        positive("alpha", self.alpha)?;
        positive("tolerance", self.tolerance)?;
        if self.max_iterations < 2 {
            return Err(invalid("max_iterations", "must be at least 2"));
        }
        if self.samples == 0 {
            return Err(invalid("samples", "must be at least 1"));
        }

        let mut specs = Vec::with_capacity(2);
        for (i, eq) in self.equations.iter().enumerate() {
            specs.push(build_equation(n, i, eq)?);
        }
        let second = specs.pop().expect("two equations");
        let first = specs.pop().expect("two equations");
        let pair = EquationPair::new(first, second).map_err(|e| invalid("equations[1].A", e))?;

        let (k1, k1_auto) = match self.k1 {
            K1Setting::Value(v) => {
                if !v.is_finite() || v < 0.0 {
                    return Err(invalid("k1", "must be a non-negative number or \"auto\""));
                }
                (v, false)
            }
            K1Setting::Auto => {
                let k1 = pair.auto_k1(self.ball_radius).ok_or_else(|| {
                    invalid(
                        "k1",
                        "\"auto\" needs a closed-form bound (zero, scaled_identity, spectral_tanh, affine); give k1 as a number",
                    )
                })?;
                (k1, true)
            }
        };

        let controls = self.controls.as_ref().map(build_controls).transpose()?;

        Ok(Problem {
            pair,
            radius: self.ball_radius,
            k1,
            k1_auto,
            alpha: self.alpha,
            tolerance: self.tolerance,
            max_iterations: self.max_iterations,
            seed: self.seed,
            samples: self.samples,
            controls,
        })
    }
}

// serde_json appends " at line L column C", which the diagnostic already carries.
fn strip_position(message: &str) -> String {
    match message.rfind(" at line ") {
        Some(i) => message[..i].to_string(),
        None => message.to_string(),
    }
}

fn positive(field: &str, value: f64) -> Result<(), ConfigError> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(invalid(
            field,
            format!("must be positive and finite, got {value}"),
        ))
    }
}

fn build_equation(n: usize, i: usize, eq: &EquationConfig) -> Result<EquationSpec, ConfigError> {
    let field = |name: &str| format!("equations[{i}].{name}");
    let q = matrix_literal(n, &eq.q).map_err(|m| invalid(field("Q"), m))?;
    let q = HermitianMatrix::new(q).map_err(|e| invalid(field("Q"), e))?;
    let mut coefficients = Vec::with_capacity(eq.a.len());
    for (j, a) in eq.a.iter().enumerate() {
        coefficients.push(matrix_literal(n, a).map_err(|m| invalid(field(&format!("A[{j}]")), m))?);
    }
    let map = eq.map.to_kind().map_err(|m| invalid(field("map"), m))?;
    EquationSpec::new(q, eq.sign, coefficients, map).map_err(|e| invalid(field("Q"), e))
}

fn matrix_literal(n: usize, rows: &MatrixLiteral) -> Result<ComplexMatrix, String> {
    if rows.len() != n {
        return Err(format!("expected {n} rows, found {}", rows.len()));
    }
    let mut data = Vec::with_capacity(n * n);
    for (r, row) in rows.iter().enumerate() {
        if row.len() != n {
            return Err(format!("row {r} has {} entries, expected {n}", row.len()));
        }
        data.extend(row.iter().map(|[re, im]| Complex64::new(*re, *im)));
    }
    ComplexMatrix::new(n, data).map_err(|e| e.to_string())
}

/// Matrix literal for a complex matrix.
pub fn literal_of(m: &ComplexMatrix) -> MatrixLiteral {
    m.rows()
        .map(|row| row.iter().map(|z| [z.re, z.im]).collect())
        .collect()
}

fn build_controls(config: &ControlsConfig) -> Result<ControlBundle, ConfigError> {
    let registry = ControlRegistry::builtin();
    let phi = scalar_control(&registry, "controls.phi", &config.phi)?;
    let phi1 = scalar_control(&registry, "controls.phi1", &config.phi1)?;
    let psi = binary_control(&registry, "controls.psi", &config.psi, &phi)?;
    Ok(ControlBundle { phi, phi1, psi })
}

fn scalar_control(
    registry: &ControlRegistry,
    field: &str,
    c: &ControlConfig,
) -> Result<AlteringDistanceFn, ConfigError> {
    let p = &c.params;
    match (&c.kind, &c.id) {
        (None, Some(id)) => registry.scalar(id).map_err(|e| invalid(field, e)),
        (Some(kind), None) => match (kind.as_str(), p.len()) {
            ("linear", 1) => Ok(AlteringDistanceFn::Linear { slope: p[0] }),
            ("capped_linear", 3) => Ok(AlteringDistanceFn::CappedLinear {
                slope: p[0],
                cap_at: p[1],
                cap_value: p[2],
            }),
            ("power", 2) => Ok(AlteringDistanceFn::Power {
                coefficient: p[0],
                exponent: p[1],
            }),
            (kind, count) => Err(invalid(
                field,
                format!("unknown scalar control `{kind}` with {count} parameter(s)"),
            )),
        },
        _ => Err(invalid(field, "give exactly one of `kind` or `id`")),
    }
}

fn binary_control(
    registry: &ControlRegistry,
    field: &str,
    c: &ControlConfig,
    phi: &AlteringDistanceFn,
) -> Result<PsiControl, ConfigError> {
    let p = &c.params;
    match (&c.kind, &c.id) {
        (None, Some(id)) => registry.binary(id).map_err(|e| invalid(field, e)),
        (Some(kind), None) => match (kind.as_str(), p.len()) {
            ("max_alpha_phi", 1) => Ok(PsiControl::MaxAlphaPhi {
                alpha: p[0],
                phi: phi.clone(),
            }),
            ("sum_scaled", 3) => Ok(PsiControl::SumScaled {
                scale: p[0],
                threshold: p[1],
                fallback: p[2],
            }),
            (kind, count) => Err(invalid(
                field,
                format!("unknown binary control `{kind}` with {count} parameter(s)"),
            )),
        },
        _ => Err(invalid(field, "give exactly one of `kind` or `id`")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SCALAR: &str = r#"{
        "n": 1,
        "equations": [
            {"Q": [[[1, 0]]], "sign": "plus", "A": [[[[1, 0]]]], "map": {"kind": "zero"}},
            {"Q": [[[1, 0]]], "sign": "plus", "A": [[[[1, 0]]]], "map": {"kind": "zero"}}
        ],
        "ball_radius": 2
    }"#;

    #[test]
    fn defaults_fill_in() {
        let config = ProblemConfig::from_json_str(SCALAR).unwrap();
        assert_eq!(config.k1, K1Setting::Auto);
        assert_eq!(config.alpha, DEFAULT_ALPHA);
        assert_eq!(config.samples, DEFAULT_SAMPLES);
        let problem = config.build().unwrap();
        assert_eq!(problem.k1, 0.0);
        assert!(problem.k1_auto);
    }

    #[test]
    fn round_trip() {
        let config = ProblemConfig::from_json_str(SCALAR).unwrap();
        let again = ProblemConfig::from_json_str(&config.to_json_pretty()).unwrap();
        assert_eq!(config, again);
        let mut explicit = config;
        explicit.k1 = K1Setting::Value(0.25);
        let again = ProblemConfig::from_json_str(&explicit.to_json_pretty()).unwrap();
        assert_eq!(explicit, again);
    }

    #[test]
    fn parse_errors_carry_line_and_field() {
        let text = SCALAR.replace(
            r#""sign": "plus", "A": [[[[1, 0]]]], "map": {"kind": "zero"}},
            {"#,
            r#""sign": "sideways", "A": [[[[1, 0]]]], "map": {"kind": "zero"}},
            {"#,
        );
        match ProblemConfig::from_json_str(&text).unwrap_err() {
            ConfigError::Parse {
                line,
                field,
                message,
                ..
            } => {
                assert_eq!(line, 4);
                assert_eq!(field, "equations[0].sign");
                assert!(message.contains("sideways"), "{message}");
            }
            other => panic!("{other}"),
        }
    }

    #[test]
    fn dimension_mismatch_names_the_field() {
        let text = SCALAR.replacen(
            r#""A": [[[[1, 0]]]]"#,
            r#""A": [[[[1, 0], [0, 0]], [[0, 0], [1, 0]]]]"#,
            1,
        );
        let err = ProblemConfig::from_json_str(&text)
            .unwrap()
            .build()
            .unwrap_err();
        assert!(err.to_string().contains("equations[0].A[0]"), "{err}");
    }

    #[test]
    fn unknown_map_kind_and_auto_k1_limits() {
        let text = SCALAR.replace(r#"{"kind": "zero"}"#, r#"{"kind": "cubic", "params": [1]}"#);
        let err = ProblemConfig::from_json_str(&text)
            .unwrap()
            .build()
            .unwrap_err();
        assert!(err.to_string().contains("unknown map kind"), "{err}");

        let text = SCALAR.replace(
            r#"{"kind": "zero"}"#,
            r#"{"kind": "spectral_power", "params": [1, 0.5]}"#,
        );
        let err = ProblemConfig::from_json_str(&text)
            .unwrap()
            .build()
            .unwrap_err();
        assert!(err.to_string().contains("field `k1`"), "{err}");
    }

    #[test]
    fn k1_accepts_numbers_and_auto_only() {
        let with = |k1: &str| {
            SCALAR.replace(
                r#""ball_radius": 2"#,
                &format!(r#""ball_radius": 2, "k1": {k1}"#),
            )
        };
        assert_eq!(
            ProblemConfig::from_json_str(&with("3")).unwrap().k1,
            K1Setting::Value(3.0)
        );
        assert_eq!(
            ProblemConfig::from_json_str(&with("0.5")).unwrap().k1,
            K1Setting::Value(0.5)
        );
        assert!(ProblemConfig::from_json_str(&with(r#""manual""#)).is_err());
    }

    #[test]
    fn controls_from_kinds_and_registry() {
        let text = SCALAR.replace(
            r#""ball_radius": 2"#,
            r#""ball_radius": 2, "controls": {
                "phi": {"kind": "linear", "params": [1]},
                "phi1": {"id": "t_over_one_plus_t"},
                "psi": {"kind": "max_alpha_phi", "params": [0.5]}
            }"#,
        );
        let problem = ProblemConfig::from_json_str(&text)
            .unwrap()
            .build()
            .unwrap();
        let bundle = problem.controls.unwrap();
        assert_eq!(bundle.phi1.evaluate(1.0).unwrap(), 0.5);
        assert_eq!(bundle.psi.evaluate(2.0, 4.0).unwrap(), 2.0);

        let bad = text.replace(r#"{"id": "t_over_one_plus_t"}"#, r#"{"id": "nope"}"#);
        let err = ProblemConfig::from_json_str(&bad)
            .unwrap()
            .build()
            .unwrap_err();
        assert!(err.to_string().contains("controls.phi1"), "{err}");
    }
}
