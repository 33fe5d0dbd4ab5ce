//! Reduced spin density matrices, Bloch vectors, and the Lorentz-transformed
//! Bloch vector.
//!
//! Three independent routes compute `μ⃗(β)`:
//!
//! * [`transformed_bloch_direct`] conjugates `σ⃗` with the Wigner matrix
//!   `w = b⁻¹(Λp) A b(p)` at each momentum,
//! * [`transformed_bloch_rodrigues`] uses the closed-form angle and axis of
//!   the Wigner rotation and the three-term rotation of `a†σ⃗a`,
//! * [`bloch_vector`] of [`transform_packet`](crate::wavepacket::transform_packet)
//!   integrates the transformed amplitude in the boosted frame.

use nalgebra::{Matrix2, Vector3};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{RelspinError, Result};
use crate::kinematics::{BoostSpec, FourMomentum};
use crate::quadrature::{Bundle, Integral, QuadratureSpec};
use crate::spinor::{
    boost_element, spin_expectation, ultrarelativistic_cos_angle, wigner_angle, LorentzTransform, SpinorMatrix,
};
use crate::wavepacket::WavePacket;

/// Slack allowed on `|μ⃗| ≤ 1` before a Bloch vector is rejected.
pub const BLOCH_NORM_SLACK: f64 = 1e-9;

/// Tolerance on `Tr ρ = 1` for reduced density matrices of normalized packets.
pub const TRACE_TOLERANCE: f64 = 1e-6;

/// Packets narrower than this (in units of the mass) are treated as
/// point-supported by the depurification certificate.
pub const DELTA_LIKE_WIDTH: f64 = 1e-3;

/// Qubit state parametrized by its Bloch vector, `ρ = (1 + μ⃗·σ⃗)/2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlochState {
    mu: Vector3<f64>,
}

impl BlochState {
    pub fn new(mu: Vector3<f64>) -> Result<Self> {
        let norm = mu.norm();
        if !norm.is_finite() || norm > 1.0 + BLOCH_NORM_SLACK {
            return Err(RelspinError::BlochNorm(norm));
        }
        Ok(Self { mu })
    }

    pub fn mu(&self) -> &Vector3<f64> {
        &self.mu
    }

    /// Unclamped `|μ⃗|`.
    pub fn norm(&self) -> f64 {
        self.mu.norm()
    }

    pub fn density(&self) -> SpinorMatrix {
        density_from_bloch(&self.mu)
    }

    pub fn purity(&self) -> f64 {
        0.5 * (1.0 + self.mu.norm_squared())
    }

    /// Von Neumann entropy in bits; `|μ⃗|` is clamped to 1 first.
    pub fn entropy_bits(&self) -> f64 {
        let r = self.norm().min(1.0);
        [0.5 * (1.0 + r), 0.5 * (1.0 - r)]
            .into_iter()
            .filter(|l| *l > 0.0)
            .map(|l| -l * l.log2())
            .sum()
    }
}

/// `ρ = (1 + μ⃗·σ⃗)/2`.
pub fn density_from_bloch(mu: &Vector3<f64>) -> SpinorMatrix {
    SpinorMatrix::from_pauli(Complex64::new(0.5, 0.0), &(mu * 0.5))
}

/// `μ⃗ = Tr(ρσ⃗)`.
pub fn bloch_from_density(rho: &SpinorMatrix) -> Vector3<f64> {
    let (_, v) = rho.pauli_components();
    v.map(|z| 2.0 * z.re)
}

/// `(purity, entropy in bits)`.
pub fn purity_entropy(s: &BlochState) -> (f64, f64) {
    (s.purity(), s.entropy_bits())
}

/// `ρ_{σσ′} = ∫ d³p⃗/(2p⁰) a(p,σ) a̅(p,σ′)`.
pub fn reduced_density(psi: &WavePacket, spec: &QuadratureSpec) -> Result<Integral<SpinorMatrix>> {
    let r = psi.integrate(
        |p| {
            let a = psi.amplitude(p)?;
            Ok::<Matrix2<Complex64>, RelspinError>(a * a.adjoint())
        },
        spec,
    )?;
    let rho = SpinorMatrix(r.value);
    let trace = rho.trace();
    if (trace - Complex64::new(1.0, 0.0)).norm() > TRACE_TOLERANCE {
        return Err(RelspinError::Normalization(format!("reduced density matrix has trace {trace}")));
    }
    Ok(r.map(|_| rho))
}

/// `μ⃗ = ∫ d³p⃗/(2p⁰) a†(p) σ⃗ a(p)`.
pub fn bloch_vector(psi: &WavePacket, spec: &QuadratureSpec) -> Result<Integral<BlochState>> {
    let r = psi.integrate(|p| Ok(spin_expectation(&psi.amplitude(p)?)), spec)?;
    r.try_map(BlochState::new)
}

/// `μ⃗(β) = ∫ d³p⃗/(2p⁰) a†(p) w†(p,A) σ⃗ w(p,A) a(p)` with `w` from its
/// defining product `b⁻¹(Λp) A b(p)`.
pub fn transformed_bloch_direct(
    psi: &WavePacket,
    boost: &BoostSpec,
    spec: &QuadratureSpec,
) -> Result<Integral<BlochState>> {
    let transform = LorentzTransform::new(boost_element(boost)?)?;
    let r = psi.integrate(
        |p| {
            let w = transform.wigner_matrix(p)?;
            Ok(spin_expectation(&w.apply(&psi.amplitude(p)?)))
        },
        spec,
    )?;
    r.try_map(BlochState::new)
}

/// Same quantity through the angle/axis decomposition:
/// `∫ d³p⃗/(2p⁰) [cos Ω v⃗ + sin Ω (v⃗ × e⃗) + (1 − cos Ω)(e⃗·v⃗) e⃗]`,
/// `v⃗ = a†σ⃗a`.
pub fn transformed_bloch_rodrigues(
    psi: &WavePacket,
    boost: &BoostSpec,
    spec: &QuadratureSpec,
) -> Result<Integral<BlochState>> {
    let r = psi.integrate(
        |p| {
            let v = spin_expectation(&psi.amplitude(p)?);
            Ok(wigner_angle(p, boost)?.transform_spin_vector(&v))
        },
        spec,
    )?;
    r.try_map(BlochState::new)
}

fn require_axial_spin_up(psi: &WavePacket) -> Result<()> {
    if !psi.is_axial() {
        return Err(RelspinError::MissingSymmetry("an axially symmetric packet"));
    }
    if !psi.is_spin_up() {
        return Err(RelspinError::MissingSymmetry("a spin-up packet (a(p,2) = 0)"));
    }
    Ok(())
}

/// `(∫ d³p⃗/(2p⁰) cos Ω |a(p,1)|²) e⃗₃` for an axial spin-up packet boosted
/// along `e⃗₃`, via the two-dimensional reduced integral.
pub fn transformed_bloch_axial(psi: &WavePacket, rapidity: f64, spec: &QuadratureSpec) -> Result<Integral<BlochState>> {
    require_axial_spin_up(psi)?;
    let boost = BoostSpec::along_z(rapidity)?;
    let r = psi.integrate_axial(
        |p| {
            let cos = wigner_angle(p, &boost)?.angle.cos();
            Ok(cos * psi.amplitude(p)?[0].norm_sqr())
        },
        spec,
    )?;
    r.try_map(|mu_z| BlochState::new(Vector3::new(0.0, 0.0, mu_z)))
}

/// `β → ∞` limit of the Bloch vector of an axial spin-up packet boosted
/// along `e⃗₃`, with the limiting
/// `cos Ω = ((p⁰−p³+m)² − p⃗⊥²)/((p⁰−p³+m)² + p⃗⊥²)`.
pub fn transformed_bloch_ultrarelativistic(psi: &WavePacket, spec: &QuadratureSpec) -> Result<Integral<BlochState>> {
    require_axial_spin_up(psi)?;
    let m = psi.mass();
    let r = psi.integrate_axial(
        |p| {
            let q = p.momentum();
            Ok(ultrarelativistic_cos_angle(q.x.hypot(q.y), q.z, m) * psi.amplitude(p)?[0].norm_sqr())
        },
        spec,
    )?;
    r.try_map(|mu_z| BlochState::new(Vector3::new(0.0, 0.0, mu_z)))
}

/// Per-instance numerical evidence that a boost depurifies a pure spin state.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DepurificationCertificate {
    pub rapidity: f64,
    pub rest_norm: f64,
    pub mu: Vector3<f64>,
    pub mu_norm: f64,
    /// `1 − |μ⃗(β)|²`.
    pub gap: f64,
    /// `∫ d³p⃗/(2p⁰) |a(p,1)|² (1 − μ⃗(β)·e⃗(p))`; equals `gap`.
    pub gap_integral: f64,
    /// Smallest and largest `1 − μ̂(β)·e⃗(p)` over the quadrature nodes.
    pub spread_min: f64,
    pub spread_max: f64,
    /// Gap must exceed this to certify (10× the quadrature tolerance).
    pub threshold: f64,
    pub converged: bool,
    pub certified: bool,
}

/// Certifies `1 − |μ⃗(β)|² > 0` for a spin-up packet.
///
/// `e⃗(p)` is the direction of `a†w†σ⃗wa`, i.e. `e⃗₃` rotated by the Wigner
/// rotation at `p`. At `β = 0` there is nothing to certify and `certified`
/// reports whether the gap vanishes.
pub fn depurification_certificate(
    psi: &WavePacket,
    boost: &BoostSpec,
    spec: &QuadratureSpec,
) -> Result<DepurificationCertificate> {
    if !psi.is_spin_up() {
        return Err(RelspinError::MissingSymmetry("a spin-up packet (a(p,2) = 0)"));
    }
    let min_width = psi.support().min_width();
    if min_width < DELTA_LIKE_WIDTH * psi.mass() {
        return Err(RelspinError::OutsideValidity(format!(
            "packet width {min_width} is delta-like (below {DELTA_LIKE_WIDTH} m); the depurification theorem needs a spread packet"
        )));
    }
    let rest = bloch_vector(psi, spec)?;
    let rest_norm = rest.value.norm();
    if (rest_norm - 1.0).abs() > 1e-8 {
        return Err(RelspinError::OutsideValidity(format!("rest-frame spin state is not pure: |mu| = {rest_norm}")));
    }
    let moved = transformed_bloch_rodrigues(psi, boost, spec)?;
    let mu = *moved.value.mu();
    let direction = |p: &FourMomentum| -> Result<Vector3<f64>> {
        Ok(wigner_angle(p, boost)?.transform_spin_vector(&Vector3::z()))
    };
    let gap_integral = psi.integrate(
        |p| {
            let up = psi.amplitude(p)?[0].norm_sqr();
            Ok(Bundle([up * (1.0 - mu.dot(&direction(p)?))]))
        },
        spec,
    )?;
    let mu_hat = if mu.norm() > 0.0 { mu.normalize() } else { Vector3::z() };
    let (spread_min, spread_max) = psi.node_extrema(|p| Ok(1.0 - mu_hat.dot(&direction(p)?)), spec)?;
    let gap = 1.0 - mu.norm_squared();
    let threshold = 10.0 * spec.tolerance;
    let certified = if boost.rapidity() == 0.0 { gap.abs() < 1e-9 } else { gap > threshold };
    Ok(DepurificationCertificate {
        rapidity: boost.rapidity(),
        rest_norm,
        mu,
        mu_norm: mu.norm(),
        gap,
        gap_integral: gap_integral.value.0[0],
        spread_min,
        spread_max,
        threshold,
        converged: rest.converged && moved.converged && gap_integral.converged,
        certified,
    })
}
