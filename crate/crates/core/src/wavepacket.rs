//! Momentum-space two-component wave functions `a(p, σ)`.
//!
//! Packets are evaluatable amplitude functions plus support hints. The
//! normalization `∫ d³p⃗/(2p⁰) a†(p)a(p) = 1` is imposed numerically at
//! construction.
//!
//! A transformed packet keeps the quadrature grid of its source and maps the
//! nodes through `Λ`; the invariant measure makes this exact, and the grid
//! stays aligned with the (possibly sheared) support.

use std::fmt;
use std::sync::Arc;

use nalgebra::Vector3;
use num_complex::Complex64;

use crate::error::{RelspinError, Result};
use crate::kinematics::{check_unit, FourMomentum, LorentzMatrix};
use crate::quadrature::{
    integrate, integrate_axial_reduced, node_extrema, Bundle, Integral, QuadValue, QuadratureSpec, SupportHints,
};
use crate::spinor::{spinor_along, LorentzTransform, Spinor, SpinorMatrix, ALGEBRA_TOLERANCE};

/// Largest `max(|p⃗|, width)/m` for which a Gaussian counts as nonrelativistic.
pub const NONRELATIVISTIC_LIMIT: f64 = 0.1;

pub type Amplitude = Arc<dyn Fn(&FourMomentum) -> Result<Spinor> + Send + Sync>;

/// How a packet was built.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PacketFamily {
    /// `|a|² ∝ exp(−Σᵢ (pᵢ − cᵢ)²/(2wᵢ²))` with a momentum-independent spinor.
    Gaussian { center: Vector3<f64>, widths: Vector3<f64>, spin: Vector3<f64> },
    /// Spin-up ring peaked at `|p⃗⊥| = radius`, `p³ = 0`.
    Ring { radius: f64, radial_width: f64, longitudinal_width: f64 },
    /// Image of another packet under a Lorentz transformation.
    Transformed,
}

#[derive(Clone)]
pub struct WavePacket {
    amplitude: Amplitude,
    support: SupportHints,
    // grid frame → packet frame; identity unless transformed
    chart: Option<LorentzMatrix>,
    grid_axial: bool,
    family: PacketFamily,
    axial: bool,
    spin_up: bool,
}

impl fmt::Debug for WavePacket {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WavePacket")
            .field("family", &self.family)
            .field("support", &self.support)
            .field("axial", &self.axial)
            .field("spin_up", &self.spin_up)
            .finish_non_exhaustive()
    }
}

impl WavePacket {
    pub fn amplitude(&self, p: &FourMomentum) -> Result<Spinor> {
        (self.amplitude)(p)
    }

    pub fn mass(&self) -> f64 {
        self.support.mass
    }

    pub fn support(&self) -> &SupportHints {
        &self.support
    }

    pub fn family(&self) -> &PacketFamily {
        &self.family
    }

    /// `|a(p,1)|²` depends only on `(|p⃗⊥|, p³)`.
    pub fn is_axial(&self) -> bool {
        self.axial
    }

    /// `a(p,2) ≡ 0`.
    pub fn is_spin_up(&self) -> bool {
        self.spin_up
    }

    /// `a†(p)a(p)`.
    pub fn density(&self, p: &FourMomentum) -> Result<f64> {
        Ok(self.amplitude(p)?.norm_squared())
    }

    /// `∫ d³p⃗/(2p⁰) a†a`.
    pub fn norm(&self, spec: &QuadratureSpec) -> Result<Integral<f64>> {
        self.integrate(|p| self.density(p), spec)
    }

    /// Lorentz map from the quadrature grid to the packet's frame.
    pub fn chart(&self) -> Option<&LorentzMatrix> {
        self.chart.as_ref()
    }

    fn to_frame(&self, q: &FourMomentum) -> Result<FourMomentum> {
        match &self.chart {
            Some(lambda) => lambda.apply(q),
            None => Ok(*q),
        }
    }

    /// `∫ d³p⃗/(2p⁰) f(p)` over the packet's support. Axially symmetric
    /// supports get cylindrical coordinates whatever the symmetry of `f`.
    pub fn integrate<V, F>(&self, f: F, spec: &QuadratureSpec) -> Result<Integral<V>>
    where
        V: QuadValue,
        F: Fn(&FourMomentum) -> Result<V> + Sync,
    {
        integrate(|q| f(&self.to_frame(q)?), &self.support, spec, self.grid_axial)
    }

    /// Extreme values of `f` over the quadrature nodes of [`Self::integrate`].
    pub fn node_extrema<F>(&self, f: F, spec: &QuadratureSpec) -> Result<(f64, f64)>
    where
        F: Fn(&FourMomentum) -> Result<f64> + Sync,
    {
        node_extrema(|q| f(&self.to_frame(q)?), &self.support, spec, self.grid_axial)
    }

    /// Axially reduced `∫ d³p⃗/(2p⁰) g(p)` for integrands depending only on
    /// `(|p⃗⊥|, p³)` in the packet frame.
    pub fn integrate_axial<G>(&self, g: G, spec: &QuadratureSpec) -> Result<Integral<f64>>
    where
        G: Fn(&FourMomentum) -> Result<f64> + Sync,
    {
        if !self.axial || !self.grid_axial {
            return Err(RelspinError::MissingSymmetry("an axially symmetric packet"));
        }
        let mass = self.mass();
        integrate_axial_reduced(
            |rho, z| g(&self.to_frame(&FourMomentum::on_shell(Vector3::new(rho, 0.0, z), mass)?)?),
            &self.support,
            spec,
        )
    }

    /// General anisotropic Gaussian with a fixed spin direction.
    pub fn gaussian(
        mass: f64,
        center: Vector3<f64>,
        widths: Vector3<f64>,
        spin_dir: Vector3<f64>,
        spec: &QuadratureSpec,
    ) -> Result<Self> {
        positive("mass", mass)?;
        for w in widths.iter() {
            positive("widths", *w)?;
        }
        if !center.iter().all(|c| c.is_finite()) {
            return Err(invalid("center", "must be finite"));
        }
        check_unit(&spin_dir).map_err(|_| invalid("spin_dir", "must be a unit vector"))?;
        let spinor = spinor_along(&spin_dir)?;
        let profile = move |q: &Vector3<f64>| {
            let d = q - center;
            (-(d.x * d.x / widths.x.powi(2) + d.y * d.y / widths.y.powi(2) + d.z * d.z / widths.z.powi(2)) / 4.0).exp()
        };
        let axial = center.x == 0.0 && center.y == 0.0 && widths.x == widths.y;
        let support = SupportHints::blob(mass, center, widths);
        let norm = if axial {
            integrate_axial_reduced(|rho, z| Ok(profile(&Vector3::new(rho, 0.0, z)).powi(2)), &support, spec)?
        } else {
            integrate(|p| Ok(profile(p.momentum()).powi(2)), &support, spec, false)?
        };
        let scale = normalization_scale(norm)?;
        let amplitude: Amplitude = Arc::new(move |p: &FourMomentum| Ok(spinor * Complex64::new(scale * profile(p.momentum()), 0.0)));
        let spin_up = (spin_dir - Vector3::z()).norm() <= ALGEBRA_TOLERANCE;
        Ok(Self::from_parts(amplitude, support, PacketFamily::Gaussian { center, widths, spin: spin_dir }, axial, spin_up))
    }

    /// Adopts an arbitrary amplitude without normalizing it.
    pub(crate) fn from_parts(amplitude: Amplitude, support: SupportHints, family: PacketFamily, axial: bool, spin_up: bool) -> Self {
        Self { amplitude, support, chart: None, grid_axial: axial, family, axial, spin_up }
    }
}

fn invalid(name: &'static str, reason: impl Into<String>) -> RelspinError {
    RelspinError::InvalidPacket { name, reason: reason.into() }
}

fn positive(name: &'static str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(invalid(name, format!("must be positive and finite, got {v}")))
    }
}

fn normalization_scale(norm: Integral<f64>) -> Result<f64> {
    if !norm.converged {
        return Err(RelspinError::Normalization(format!(
            "normalization integral did not converge (change {:e})",
            norm.change
        )));
    }
    if !(norm.value > 0.0 && norm.value.is_finite()) {
        return Err(RelspinError::Normalization(format!("norm integral is {}", norm.value)));
    }
    Ok(norm.value.sqrt().recip())
}

/// Isotropic Gaussian at rest, `|a|² ∝ exp(−|p⃗|²/(2σ_p²))`, with pure spin
/// along `spin_dir`.
pub fn gaussian_rest_packet(mass: f64, sigma_p: f64, spin_dir: Vector3<f64>) -> Result<WavePacket> {
    positive("sigma_p", sigma_p)?;
    WavePacket::gaussian(mass, Vector3::zeros(), Vector3::repeat(sigma_p), spin_dir, &QuadratureSpec::default())
}

/// Spin-up ring: `|a(p,1)|² ∝ exp(−(|p⃗⊥| − M)²/(2δ⊥²) − (p³)²/(2δ₃²))`.
pub fn ring_packet(mass: f64, radius: f64, radial_width: f64, longitudinal_width: f64) -> Result<WavePacket> {
    ring_packet_with(mass, radius, radial_width, longitudinal_width, &QuadratureSpec::default())
}

pub fn ring_packet_with(
    mass: f64,
    radius: f64,
    radial_width: f64,
    longitudinal_width: f64,
    spec: &QuadratureSpec,
) -> Result<WavePacket> {
    positive("mass", mass)?;
    positive("radius", radius)?;
    positive("radial_width", radial_width)?;
    positive("longitudinal_width", longitudinal_width)?;
    let profile = move |rho: f64, z: f64| {
        let dr = rho - radius;
        (-(dr * dr / radial_width.powi(2) + z * z / longitudinal_width.powi(2)) / 4.0).exp()
    };
    let support = SupportHints::ring(mass, radius, radial_width, 0.0, longitudinal_width);
    let norm = integrate_axial_reduced(|rho, z| Ok(profile(rho, z).powi(2)), &support, spec)?;
    let scale = normalization_scale(norm)?;
    let amplitude: Amplitude = Arc::new(move |p: &FourMomentum| {
        let q = p.momentum();
        let rho = q.x.hypot(q.y);
        Ok(Spinor::new(Complex64::new(scale * profile(rho, q.z), 0.0), Complex64::new(0.0, 0.0)))
    });
    Ok(WavePacket::from_parts(
        amplitude,
        support,
        PacketFamily::Ring { radius, radial_width, longitudinal_width },
        true,
        true,
    ))
}

/// `a′(p) = w(Λ⁻¹p, A) a(Λ⁻¹p)`.
///
/// The axial flag survives only for `A` diagonal (rotations about and boosts
/// along `e⃗₃`); the spin-up flag only for diagonal rotations.
pub fn transform_packet(psi: &WavePacket, a: &SpinorMatrix) -> Result<WavePacket> {
    let forward = LorentzTransform::new(*a)?;
    let backward = forward.inverse()?;
    let diagonal = a.is_diagonal(ALGEBRA_TOLERANCE);
    let chart = match &psi.chart {
        Some(inner) => forward.lorentz().compose(inner),
        None => *forward.lorentz(),
    };
    let inner = psi.clone();
    let amplitude: Amplitude = Arc::new(move |p: &FourMomentum| {
        let source = backward.lorentz().apply(p)?;
        let w = forward.wigner_matrix(&source)?;
        Ok(w.apply(&inner.amplitude(&source)?))
    });
    Ok(WavePacket {
        amplitude,
        support: psi.support,
        chart: Some(chart),
        grid_axial: psi.grid_axial,
        family: PacketFamily::Transformed,
        axial: psi.axial && diagonal,
        spin_up: psi.spin_up && diagonal && a.is_unitary(ALGEBRA_TOLERANCE),
    })
}

/// First and second momentum moments under the invariant measure.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MomentumMoments {
    pub mean: Vector3<f64>,
    /// `⟨(p¹)² + (p²)²⟩`.
    pub mean_transverse_sqr: f64,
    pub variances: Vector3<f64>,
    pub converged: bool,
}

pub fn momentum_moments(psi: &WavePacket, spec: &QuadratureSpec) -> Result<MomentumMoments> {
    let r = psi.integrate(
        |p| {
            let d = psi.density(p)?;
            let q = p.momentum();
            Ok(Bundle([d, d * q.x, d * q.y, d * q.z, d * q.x * q.x, d * q.y * q.y, d * q.z * q.z]))
        },
        spec,
    )?;
    let [n, x, y, z, xx, yy, zz] = r.value.0;
    let mean = Vector3::new(x, y, z) / n;
    let second = Vector3::new(xx, yy, zz) / n;
    Ok(MomentumMoments {
        mean,
        mean_transverse_sqr: second.x + second.y,
        variances: second - mean.component_mul(&mean),
        converged: r.converged,
    })
}

/// Position-space standard deviations `(Δx₁, Δx₂)` of a nonrelativistic
/// minimal-uncertainty Gaussian: `Δxᵢ = 1/(2Δpᵢ)`.
pub fn position_uncertainties(psi: &WavePacket) -> Result<(f64, f64)> {
    match psi.family() {
        PacketFamily::Gaussian { center, widths, .. } => {
            let scale = center.norm().max(widths.max());
            if scale > NONRELATIVISTIC_LIMIT * psi.mass() {
                return Err(RelspinError::OutsideValidity(format!(
                    "packet momentum scale {scale} exceeds {NONRELATIVISTIC_LIMIT} m; position operator undefined"
                )));
            }
            Ok((0.5 / widths.x, 0.5 / widths.y))
        }
        _ => Err(RelspinError::OutsideValidity("position uncertainties are defined for Gaussian packets only".into())),
    }
}
