//! Four-vectors, the SL(2,C) → Lorentz covering map, and on-shell momenta.
//!
//! Natural units (c = ħ = 1) and metric signature (+,−,−,−) throughout.
//! A four-vector `x` is identified with the Hermitian matrix
//! `X = x⁰·1 + x⃗·σ⃗`, and `A ∈ SL(2,C)` acts as `X ↦ A X A†`.

use nalgebra::{Matrix4, Vector3, Vector4};
use serde::{Deserialize, Serialize};

use crate::error::{RelspinError, Result};
use crate::spinor::{pauli_basis, SpinorMatrix};

/// Relative tolerance for the mass-shell condition, scaled by `(p⁰)²`.
pub const SHELL_TOLERANCE: f64 = 1e-9;

/// Tolerance on `|n⃗| − 1` for boost axes.
pub const AXIS_TOLERANCE: f64 = 1e-9;

/// A general four-vector `(t, x⃗)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FourVector {
    pub t: f64,
    pub x: Vector3<f64>,
}

impl FourVector {
    pub fn new(t: f64, x: Vector3<f64>) -> Self {
        Self { t, x }
    }

    /// Minkowski product `a⁰b⁰ − a⃗·b⃗`.
    pub fn dot(&self, other: &FourVector) -> f64 {
        self.t * other.t - self.x.dot(&other.x)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.dot(self)
    }

    fn as_vector4(&self) -> Vector4<f64> {
        Vector4::new(self.t, self.x.x, self.x.y, self.x.z)
    }

    fn from_vector4(v: Vector4<f64>) -> Self {
        Self::new(v[0], Vector3::new(v[1], v[2], v[3]))
    }
}

/// On-shell four-momentum of a particle with positive mass.
///
/// The energy is stored explicitly and the shell condition `p² = m²` is
/// checked on construction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FourMomentum {
    energy: f64,
    momentum: Vector3<f64>,
    mass: f64,
}

impl FourMomentum {
    /// Validates an explicit `(p⁰, p⃗, m)` triple.
    pub fn new(energy: f64, momentum: Vector3<f64>, mass: f64) -> Result<Self> {
        check_mass(mass)?;
        let residual = energy * energy - momentum.norm_squared() - mass * mass;
        let scale = (energy * energy).max(mass * mass);
        if !residual.is_finite() || residual.abs() > SHELL_TOLERANCE * scale || energy < 0.0 {
            return Err(RelspinError::OffShell { residual, mass });
        }
        Ok(Self { energy, momentum, mass })
    }

    /// Builds the on-shell momentum with energy `√(m² + |p⃗|²)`.
    pub fn on_shell(momentum: Vector3<f64>, mass: f64) -> Result<Self> {
        check_mass(mass)?;
        if !momentum.iter().all(|c| c.is_finite()) {
            return Err(RelspinError::OffShell { residual: f64::NAN, mass });
        }
        Ok(Self::on_shell_unchecked(momentum, mass))
    }

    /// Particle at rest, `(m, 0⃗)`.
    pub fn at_rest(mass: f64) -> Result<Self> {
        Self::on_shell(Vector3::zeros(), mass)
    }

    pub(crate) fn on_shell_unchecked(momentum: Vector3<f64>, mass: f64) -> Self {
        let energy = (mass * mass + momentum.norm_squared()).sqrt();
        Self { energy, momentum, mass }
    }

    pub fn energy(&self) -> f64 {
        self.energy
    }

    pub fn momentum(&self) -> &Vector3<f64> {
        &self.momentum
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    /// Squared transverse momentum `(p¹)² + (p²)²` about the third axis.
    pub fn transverse_sqr(&self) -> f64 {
        self.momentum.x * self.momentum.x + self.momentum.y * self.momentum.y
    }

    pub fn four_vector(&self) -> FourVector {
        FourVector::new(self.energy, self.momentum)
    }
}

fn check_mass(mass: f64) -> Result<()> {
    if mass.is_finite() && mass > 0.0 {
        Ok(())
    } else {
        Err(RelspinError::NonPositiveMass(mass))
    }
}

/// Pure boost with rapidity `β ≥ 0` and unit direction `n⃗`.
///
/// The associated four-velocity is `u = (cosh β, sinh β n⃗)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoostSpec {
    rapidity: f64,
    axis: Vector3<f64>,
}

impl BoostSpec {
    pub fn new(rapidity: f64, axis: Vector3<f64>) -> Result<Self> {
        if !rapidity.is_finite() || rapidity < 0.0 {
            return Err(RelspinError::InvalidRapidity(rapidity));
        }
        check_unit(&axis)?;
        Ok(Self { rapidity, axis })
    }

    /// Boost along the third axis.
    pub fn along_z(rapidity: f64) -> Result<Self> {
        Self::new(rapidity, Vector3::z())
    }

    pub fn rapidity(&self) -> f64 {
        self.rapidity
    }

    pub fn axis(&self) -> &Vector3<f64> {
        &self.axis
    }

    pub fn four_velocity(&self) -> FourVector {
        FourVector::new(self.rapidity.cosh(), self.rapidity.sinh() * self.axis)
    }

    /// True when the axis coincides with `e⃗₃`.
    pub fn is_along_z(&self) -> bool {
        (self.axis - Vector3::z()).norm() <= AXIS_TOLERANCE
    }
}

pub(crate) fn check_unit(axis: &Vector3<f64>) -> Result<()> {
    let norm = axis.norm();
    if norm.is_finite() && (norm - 1.0).abs() <= AXIS_TOLERANCE {
        Ok(())
    } else {
        Err(RelspinError::NonUnitAxis(norm))
    }
}

/// Real 4×4 Lorentz matrix acting on contravariant components `(t, x, y, z)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LorentzMatrix(pub Matrix4<f64>);

impl LorentzMatrix {
    pub fn identity() -> Self {
        Self(Matrix4::identity())
    }

    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.0
    }

    pub fn apply_vector(&self, v: &FourVector) -> FourVector {
        FourVector::from_vector4(self.0 * v.as_vector4())
    }

    /// Maps an on-shell momentum, rejecting the result if it leaves the shell.
    pub fn apply(&self, p: &FourMomentum) -> Result<FourMomentum> {
        let image = self.apply_vector(&p.four_vector());
        let mass = p.mass();
        let residual = image.norm_sqr() - mass * mass;
        let scale = (image.t * image.t).max(mass * mass);
        if !residual.is_finite() || residual.abs() > SHELL_TOLERANCE * scale || image.t < 0.0 {
            return Err(RelspinError::OffShell { residual, mass });
        }
        Ok(FourMomentum::on_shell_unchecked(image.x, mass))
    }

    pub fn compose(&self, other: &LorentzMatrix) -> LorentzMatrix {
        LorentzMatrix(self.0 * other.0)
    }

    /// Largest entry of `ΛᵀηΛ − η`.
    pub fn metric_defect(&self) -> f64 {
        let eta = minkowski_metric();
        (self.0.transpose() * eta * self.0 - eta).abs().max()
    }
}

pub fn minkowski_metric() -> Matrix4<f64> {
    Matrix4::from_diagonal(&Vector4::new(1.0, -1.0, -1.0, -1.0))
}

/// Lorentz matrix of `A`: `Λ^μ_ν = ½ Tr(σ_μ A σ_ν A†)` with `σ_μ = (1, σ⃗)`.
pub fn lorentz_of(a: &SpinorMatrix) -> Result<LorentzMatrix> {
    a.check_unimodular(crate::spinor::ALGEBRA_TOLERANCE)?;
    let basis = pauli_basis();
    let adj = a.adjoint();
    let mut out = Matrix4::zeros();
    for (nu, s_nu) in basis.iter().enumerate() {
        let image = a.mul(s_nu).mul(&adj);
        for (mu, s_mu) in basis.iter().enumerate() {
            out[(mu, nu)] = 0.5 * s_mu.mul(&image).trace().re;
        }
    }
    Ok(LorentzMatrix(out))
}

/// `Λp`; on-shell with the same mass.
pub fn apply_lorentz(lambda: &LorentzMatrix, p: &FourMomentum) -> Result<FourMomentum> {
    lambda.apply(p)
}

/// Minkowski product `p⁰u⁰ − p⃗·u⃗`.
pub fn invariant_inner(p: &FourMomentum, u: &FourVector) -> f64 {
    p.four_vector().dot(u)
}
