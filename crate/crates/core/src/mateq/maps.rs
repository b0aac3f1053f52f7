//! Built-in Hermitian-to-Hermitian maps `F`.

use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::sampling::BallSampler;
use super::MatEqError;
use crate::fixpoint::DomainSampler;
use crate::matrix::HermitianMatrix;
use crate::spectra::{apply_spectral_function, hermitian_eigendecomposition};

/// Slack allowed when spot-checking a declared eigenvalue bound.
pub const K1_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(
    feature = "serde",
    derive(serde::Serialize, serde::Deserialize),
    serde(tag = "kind", rename_all = "snake_case")
)]
pub enum MapKind {
    /// `F(X) = 0`
    Zero,
    /// `F(X) = c X`
    ScaledIdentity { c: f64 },
    /// `F(X) = c (X₊)^p` with `X₊` the eigenvalue-clamped positive part.
    SpectralPower { c: f64, p: f64 },
    /// `F(X) = c tanh(X)`
    SpectralTanh { c: f64 },
    /// `F(X) = c X + d I`
    Affine { c: f64, d: f64 },
}

impl MapKind {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Zero => "zero",
            Self::ScaledIdentity { .. } => "scaled_identity",
            Self::SpectralPower { .. } => "spectral_power",
            Self::SpectralTanh { .. } => "spectral_tanh",
            Self::Affine { .. } => "affine",
        }
    }

    pub fn validate(&self) -> Result<(), MatEqError> {
        let params: &[f64] = match self {
            Self::Zero => &[],
            Self::ScaledIdentity { c } | Self::SpectralTanh { c } => &[*c],
            Self::SpectralPower { c, p } => {
                if !(*p > 0.0) {
                    return Err(MatEqError::InvalidParameter(
                        "spectral_power exponent must be positive",
                    ));
                }
                &[*c, *p]
            }
            Self::Affine { c, d } => &[*c, *d],
        };
        if params.iter().all(|v| v.is_finite()) {
            Ok(())
        } else {
            Err(MatEqError::InvalidParameter(
                "map parameters must be finite",
            ))
        }
    }

    pub fn apply(&self, x: &HermitianMatrix) -> Result<HermitianMatrix, MatEqError> {
        let n = x.dim();
        Ok(match *self {
            Self::Zero => HermitianMatrix::zeros(n),
            Self::ScaledIdentity { c } => x.scale(c),
            Self::Affine { c, d } => x.scale(c).try_add(&HermitianMatrix::identity(n).scale(d))?,
            Self::SpectralPower { c, p } => {
                apply_spectral_function(x, |l| if l > 0.0 { c * libm::pow(l, p) } else { 0.0 })?
            }
            Self::SpectralTanh { c } => apply_spectral_function(x, |l| c * libm::tanh(l))?,
        })
    }

    /// Closed-form bound on the eigenvalue moduli of `F(X)` over `‖X‖ ≤ a`, where one exists.
    pub fn auto_k1(&self, radius: f64) -> Option<f64> {
        match *self {
            Self::Zero => Some(0.0),
            Self::ScaledIdentity { c } => Some(c.abs() * radius),
            Self::SpectralTanh { c } => Some(c.abs()),
            Self::Affine { c, d } => Some(c.abs() * radius + d.abs()),
            Self::SpectralPower { .. } => None,
        }
    }
}

/// A map together with a declared bound `k1` on the singular values of
/// `F(X)` for all Hermitian `X` with `‖X‖ ≤ radius`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MapDescriptor {
    pub kind: MapKind,
    pub declared_k1: f64,
    pub radius: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct K1Report {
    pub samples: usize,
    pub declared_k1: f64,
    /// Largest eigenvalue modulus of `F(X)` seen.
    pub observed_max: f64,
    pub pass: bool,
}

impl MapDescriptor {
    /// Uses [`MapKind::auto_k1`] for the bound.
    pub fn auto(kind: MapKind, radius: f64) -> Option<Self> {
        kind.auto_k1(radius).map(|declared_k1| Self {
            kind,
            declared_k1,
            radius,
        })
    }

    /// Spot-checks the declared bound on seeded points of the ball.
    pub fn check_k1_soundness(
        &self,
        dim: usize,
        samples: usize,
        seed: u64,
    ) -> Result<K1Report, MatEqError> {
        let sampler = BallSampler {
            dim,
            radius: self.radius,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut points: Vec<HermitianMatrix> =
            (0..samples).map(|_| sampler.sample(&mut rng)).collect();
        // The extreme scalar points ±(a/n) I lie on the boundary too.
        let boundary = self.radius / dim as f64;
        points.push(HermitianMatrix::identity(dim).scale(boundary));
        points.push(HermitianMatrix::identity(dim).scale(-boundary));

        let mut observed_max = 0.0f64;
        for x in &points {
            let fx = self.kind.apply(x)?;
            observed_max = observed_max.max(hermitian_eigendecomposition(&fx)?.spectral_radius());
        }
        Ok(K1Report {
            samples: points.len(),
            declared_k1: self.declared_k1,
            observed_max,
            pass: observed_max <= self.declared_k1 + K1_SLACK,
        })
    }
}
