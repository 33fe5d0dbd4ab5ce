//! Lorentz transformation of the reduced spin density matrix of a massive
//! spin-1/2 particle.
//!
//! The crate is organised bottom-up:
//!
//! * [`spinor`]: 2×2 complex matrix algebra, standard boosts and Wigner rotations,
//! * [`kinematics`]: four-momenta, boosts and the SL(2,C) → Lorentz map,
//! * [`quadrature`]: Gauss–Legendre integration with the invariant measure,
//! * [`wavepacket`]: momentum-space amplitudes and their transformation law,
//! * [`spin_density`]: Bloch vectors, density matrices and their boosted values,
//! * [`experiments`]: configuration, batch runs and output files.

pub mod error;
pub mod experiments;
pub mod kinematics;
pub mod quadrature;
pub mod spin_density;
pub mod spinor;
pub mod wavepacket;

pub use error::{RelspinError, Result};
pub use kinematics::{apply_lorentz, invariant_inner, lorentz_of, BoostSpec, FourMomentum, FourVector, LorentzMatrix};
pub use quadrature::{integrate, integrate_axial_reduced, Coordinates, Integral, QuadratureSpec, SupportHints};
pub use spin_density::{
    bloch_vector, depurification_certificate, purity_entropy, reduced_density, transformed_bloch_direct,
    transformed_bloch_rodrigues, transformed_bloch_ultrarelativistic, BlochState, DepurificationCertificate,
};
pub use spinor::{
    boost_element, conjugate_pauli_vector, pauli, standard_boost, wigner_angle, wigner_matrix_closed,
    wigner_matrix_def, SpinorMatrix, WignerRotation,
};
pub use wavepacket::{
    gaussian_rest_packet, momentum_moments, position_uncertainties, ring_packet, transform_packet, WavePacket,
};
