//! Complex 2×2 matrix algebra for spin-1/2: Pauli matrices, SL(2,C) and
//! SU(2) elements, standard boosts and Wigner rotations.
//!
//! Boost convention: the boost with rapidity `β` along `n⃗` is the Hermitian
//! element `A = exp(−(β/2) n⃗·σ⃗) = cosh(β/2) − sinh(β/2) n⃗·σ⃗`, paired with
//! the four-velocity `u = (cosh β, sinh β n⃗)`. Acting as `X ↦ A X A†` it
//! carries the rest momentum `(m, 0⃗)` to `(m cosh β, −m sinh β n⃗)`, i.e. it
//! describes the particle as seen by an observer moving with velocity `u`.
//! With this pairing the closed-form Wigner matrix built from `u` coincides
//! with `b⁻¹(Λp) A b(p)`; flipping the convention flips the sign of `Ω`.

use std::ops::{Add, Mul, Sub};

use nalgebra::{Matrix2, Vector2, Vector3};
use num_complex::Complex64;

use crate::error::{RelspinError, Result};
use crate::kinematics::{check_unit, lorentz_of, BoostSpec, FourMomentum, LorentzMatrix};

/// Tolerance for pure algebraic constructions.
pub const ALGEBRA_TOLERANCE: f64 = 1e-12;
/// Tolerance for checks that chain several products (e.g. through `b⁻¹(Λp)`).
pub const CROSS_CHECK_TOLERANCE: f64 = 1e-10;

/// Two-component spinor `(a(p,1), a(p,2))`.
pub type Spinor = Vector2<Complex64>;

/// Check tolerances used when validating matrices.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    pub algebra: f64,
    pub cross_check: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { algebra: ALGEBRA_TOLERANCE, cross_check: CROSS_CHECK_TOLERANCE }
    }
}

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Complex 2×2 matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpinorMatrix(pub Matrix2<Complex64>);

impl SpinorMatrix {
    /// Row-major entries.
    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Self {
        Self(Matrix2::new(a, b, c, d))
    }

    pub fn identity() -> Self {
        Self(Matrix2::identity())
    }

    pub fn zero() -> Self {
        Self(Matrix2::zeros())
    }

    pub fn scalar(s: Complex64) -> Self {
        Self::new(s, ZERO, ZERO, s)
    }

    /// `s·1 + v⃗·σ⃗` for complex `s` and real `v⃗`.
    pub fn from_pauli(s: Complex64, v: &Vector3<f64>) -> Self {
        Self::from_complex_pauli(s, &v.map(|c| Complex64::new(c, 0.0)))
    }

    /// `s·1 + v⃗·σ⃗` with complex coefficients.
    pub fn from_complex_pauli(s: Complex64, v: &Vector3<Complex64>) -> Self {
        Self::new(s + v.z, v.x - I * v.y, v.x + I * v.y, s - v.z)
    }

    /// Coefficients `(s, v⃗)` of the Pauli expansion `s·1 + v⃗·σ⃗`.
    pub fn pauli_components(&self) -> (Complex64, Vector3<Complex64>) {
        let m = &self.0;
        let s = 0.5 * (m[(0, 0)] + m[(1, 1)]);
        let v = Vector3::new(
            0.5 * (m[(0, 1)] + m[(1, 0)]),
            0.5 * I * (m[(0, 1)] - m[(1, 0)]),
            0.5 * (m[(0, 0)] - m[(1, 1)]),
        );
        (s, v)
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.0[(row, col)]
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn det(&self) -> Complex64 {
        let m = &self.0;
        m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)]
    }

    pub fn trace(&self) -> Complex64 {
        self.0[(0, 0)] + self.0[(1, 1)]
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self(self.0 * other.0)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self(self.0 * s)
    }

    pub fn apply(&self, v: &Spinor) -> Spinor {
        self.0 * v
    }

    /// Inverse of an invertible matrix through its adjugate.
    pub fn inverse(&self) -> Option<Self> {
        let det = self.det();
        if det.norm() == 0.0 {
            return None;
        }
        let m = &self.0;
        Some(Self::new(m[(1, 1)], -m[(0, 1)], -m[(1, 0)], m[(0, 0)]).scale(det.inv()))
    }

    /// Largest entry modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (self.0 - other.0).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn unitarity_defect(&self) -> f64 {
        (self.adjoint() * *self).max_abs_diff(&Self::identity())
    }

    pub fn is_unimodular(&self, tol: f64) -> bool {
        (self.det() - ONE).norm() <= tol
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_defect() <= tol
    }

    /// SU(2) membership: unitary with unit determinant.
    pub fn is_su2(&self, tol: f64) -> bool {
        self.is_unitary(tol) && self.is_unimodular(tol)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.max_abs_diff(&self.adjoint()) <= tol
    }

    /// Hermitian, positive-definite, unit determinant.
    pub fn is_hermitian_boost(&self, tol: f64) -> bool {
        self.is_hermitian(tol) && self.is_unimodular(tol) && self.trace().re > 0.0
    }

    pub fn check_unimodular(&self, tol: f64) -> Result<()> {
        let defect = (self.det() - ONE).norm();
        if defect <= tol {
            Ok(())
        } else {
            Err(RelspinError::NotUnimodular(defect))
        }
    }

    pub fn check_unitary(&self, tol: f64) -> Result<()> {
        let defect = self.unitarity_defect();
        if defect <= tol {
            Ok(())
        } else {
            Err(RelspinError::NotUnitary(defect))
        }
    }

    pub fn is_diagonal(&self, tol: f64) -> bool {
        self.0[(0, 1)].norm() <= tol && self.0[(1, 0)].norm() <= tol
    }
}

impl Mul for SpinorMatrix {
    type Output = SpinorMatrix;
    fn mul(self, rhs: SpinorMatrix) -> SpinorMatrix {
        SpinorMatrix(self.0 * rhs.0)
    }
}

impl Add for SpinorMatrix {
    type Output = SpinorMatrix;
    fn add(self, rhs: SpinorMatrix) -> SpinorMatrix {
        SpinorMatrix(self.0 + rhs.0)
    }
}

impl Sub for SpinorMatrix {
    type Output = SpinorMatrix;
    fn sub(self, rhs: SpinorMatrix) -> SpinorMatrix {
        SpinorMatrix(self.0 - rhs.0)
    }
}

/// Pauli matrix `σᵢ`, `i ∈ {1, 2, 3}`.
pub fn pauli(i: usize) -> Result<SpinorMatrix> {
    match i {
        1 => Ok(SpinorMatrix::new(ZERO, ONE, ONE, ZERO)),
        2 => Ok(SpinorMatrix::new(ZERO, -I, I, ZERO)),
        3 => Ok(SpinorMatrix::new(ONE, ZERO, ZERO, -ONE)),
        _ => Err(RelspinError::PauliIndex(i)),
    }
}

/// `(1, σ₁, σ₂, σ₃)`.
pub fn pauli_basis() -> [SpinorMatrix; 4] {
    [
        SpinorMatrix::identity(),
        SpinorMatrix::new(ZERO, ONE, ONE, ZERO),
        SpinorMatrix::new(ZERO, -I, I, ZERO),
        SpinorMatrix::new(ONE, ZERO, ZERO, -ONE),
    ]
}

/// Expectation vector `a†σ⃗a` of a spinor.
pub fn spin_expectation(a: &Spinor) -> Vector3<f64> {
    let (up, down) = (a[0], a[1]);
    let cross = up.conj() * down;
    Vector3::new(2.0 * cross.re, 2.0 * cross.im, up.norm_sqr() - down.norm_sqr())
}

/// Unit spinor whose Bloch vector is `dir`, with real non-negative first entry.
pub fn spinor_along(dir: &Vector3<f64>) -> Result<Spinor> {
    check_unit(dir)?;
    let theta = dir.z.clamp(-1.0, 1.0).acos();
    let phi = dir.y.atan2(dir.x);
    Ok(Spinor::new(
        Complex64::new((0.5 * theta).cos(), 0.0),
        Complex64::from_polar((0.5 * theta).sin(), phi),
    ))
}

/// SU(2) element `cos(θ/2) + i sin(θ/2) e⃗·σ⃗`.
pub fn su2_exp(angle: f64, axis: &Vector3<f64>) -> Result<SpinorMatrix> {
    check_unit(axis)?;
    let (s, c) = (0.5 * angle).sin_cos();
    Ok(SpinorMatrix::from_complex_pauli(
        Complex64::new(c, 0.0),
        &axis.map(|x| Complex64::new(0.0, s * x)),
    ))
}

/// Standard boost `b(p) = (m + p⁰ + p⃗·σ⃗)/√(2m(m+p⁰))`.
pub fn standard_boost(p: &FourMomentum) -> Result<SpinorMatrix> {
    Ok(standard_boost_signed(p, 1.0))
}

/// `b⁻¹(p) = (m + p⁰ − p⃗·σ⃗)/√(2m(m+p⁰))`.
pub fn standard_boost_inverse(p: &FourMomentum) -> SpinorMatrix {
    standard_boost_signed(p, -1.0)
}

fn standard_boost_signed(p: &FourMomentum, sign: f64) -> SpinorMatrix {
    let m = p.mass();
    let e = p.energy();
    let norm = (2.0 * m * (m + e)).sqrt();
    SpinorMatrix::from_pauli(Complex64::new((m + e) / norm, 0.0), &(p.momentum() * (sign / norm)))
}

/// `A = cosh(β/2)·1 − sinh(β/2) n⃗·σ⃗`.
pub fn boost_element(spec: &BoostSpec) -> Result<SpinorMatrix> {
    check_unit(spec.axis())?;
    let half = 0.5 * spec.rapidity();
    Ok(SpinorMatrix::from_pauli(
        Complex64::new(half.cosh(), 0.0),
        &(spec.axis() * -half.sinh()),
    ))
}

/// An SL(2,C) element together with its Lorentz matrix, for repeated
/// Wigner-matrix evaluation at many momenta.
#[derive(Clone, Copy, Debug)]
pub struct LorentzTransform {
    spinor: SpinorMatrix,
    lambda: LorentzMatrix,
    tolerances: Tolerances,
}

impl LorentzTransform {
    pub fn new(a: SpinorMatrix) -> Result<Self> {
        Self::with_tolerances(a, Tolerances::default())
    }

    pub fn with_tolerances(a: SpinorMatrix, tolerances: Tolerances) -> Result<Self> {
        a.check_unimodular(tolerances.algebra)?;
        let lambda = lorentz_of(&a)?;
        Ok(Self { spinor: a, lambda, tolerances })
    }

    pub fn spinor(&self) -> &SpinorMatrix {
        &self.spinor
    }

    pub fn lorentz(&self) -> &LorentzMatrix {
        &self.lambda
    }

    pub fn inverse(&self) -> Result<Self> {
        let inv = self.spinor.inverse().ok_or(RelspinError::NotUnimodular(1.0))?;
        Self::with_tolerances(inv, self.tolerances)
    }

    /// `w(p, A) = b⁻¹(Λp) A b(p)`, rejected if not unitary within the
    /// cross-check tolerance.
    pub fn wigner_matrix(&self, p: &FourMomentum) -> Result<SpinorMatrix> {
        let image = self.lambda.apply(p)?;
        let w = standard_boost_inverse(&image) * self.spinor * standard_boost_signed(p, 1.0);
        w.check_unitary(self.tolerances.cross_check)?;
        Ok(w)
    }
}

/// `w(p, A) = b⁻¹(Λp) A b(p)`.
pub fn wigner_matrix_def(p: &FourMomentum, a: &SpinorMatrix) -> Result<SpinorMatrix> {
    LorentzTransform::new(*a)?.wigner_matrix(p)
}

/// Closed form of the Wigner matrix for a pure boost:
/// `((1+u⁰)(p⁰+m) − u⃗·p⃗ + i(p⃗×u⃗)·σ⃗) / √(2(1+u⁰)(p⁰+m)(m+u·p))`.
pub fn wigner_matrix_closed(p: &FourMomentum, spec: &BoostSpec) -> Result<SpinorMatrix> {
    check_unit(spec.axis())?;
    let u = spec.four_velocity();
    let m = p.mass();
    let e = p.energy();
    let scalar = (1.0 + u.t) * (e + m) - u.x.dot(p.momentum());
    let cross = p.momentum().cross(&u.x);
    let up = e * u.t - u.x.dot(p.momentum());
    let norm = (2.0 * (1.0 + u.t) * (e + m) * (m + up)).sqrt();
    Ok(SpinorMatrix::from_complex_pauli(
        Complex64::new(scalar / norm, 0.0),
        &cross.map(|c| Complex64::new(0.0, c / norm)),
    ))
}

/// Wigner rotation as angle and axis: `w = exp(i(Ω/2) e⃗·σ⃗)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WignerRotation {
    /// `Ω ∈ (−π, π]`.
    pub angle: f64,
    /// Unit axis; `e⃗₃` placeholder when `degenerate`.
    pub axis: Vector3<f64>,
    /// Set when `p⃗ × n⃗ = 0` and the axis is undefined.
    pub degenerate: bool,
}

impl WignerRotation {
    pub fn identity() -> Self {
        Self { angle: 0.0, axis: Vector3::z(), degenerate: true }
    }

    /// `cos(Ω/2)·1 + i sin(Ω/2) e⃗·σ⃗`.
    pub fn matrix(&self) -> SpinorMatrix {
        let (s, c) = (0.5 * self.angle).sin_cos();
        SpinorMatrix::from_complex_pauli(
            Complex64::new(c, 0.0),
            &self.axis.map(|x| Complex64::new(0.0, s * x)),
        )
    }

    /// Components of `w†σ⃗w` contracted with a spin vector `v⃗ = a†σ⃗a`:
    /// `cos Ω v⃗ + sin Ω (v⃗ × e⃗) + (1 − cos Ω)(e⃗·v⃗) e⃗`.
    pub fn transform_spin_vector(&self, v: &Vector3<f64>) -> Vector3<f64> {
        if self.degenerate {
            return *v;
        }
        let (s, c) = self.angle.sin_cos();
        let e = &self.axis;
        v * c + v.cross(e) * s + e * ((1.0 - c) * e.dot(v))
    }
}

/// Relative threshold below which `|p⃗ × n⃗|` counts as zero.
const AXIS_DEGENERACY: f64 = 1e-14;

fn rotation_from_parts(scalar: f64, c: f64, direction: Vector3<f64>, scale: f64) -> WignerRotation {
    let d = direction.norm();
    if d == 0.0 || d <= AXIS_DEGENERACY * scale {
        return WignerRotation::identity();
    }
    let denom = scalar * scalar + c * c;
    let sin = 2.0 * scalar * c / denom;
    let cos = (scalar * scalar - c * c) / denom;
    WignerRotation { angle: sin.atan2(cos), axis: direction / d, degenerate: false }
}

/// Angle and axis of the Wigner rotation for a pure boost, from
/// `sin Ω = 2Nc/(N² + c²)`, `cos Ω = (N² − c²)/(N² + c²)` with
/// `N = (1+u⁰)(p⁰+m) − u⃗·p⃗`, `c = |p⃗ × u⃗|`, and `e⃗ = p⃗×n⃗/|p⃗×n⃗|`.
pub fn wigner_angle(p: &FourMomentum, spec: &BoostSpec) -> Result<WignerRotation> {
    check_unit(spec.axis())?;
    let u = spec.four_velocity();
    let scalar = (1.0 + u.t) * (p.energy() + p.mass()) - u.x.dot(p.momentum());
    let cross = p.momentum().cross(&u.x);
    let direction = p.momentum().cross(spec.axis());
    Ok(rotation_from_parts(scalar, cross.norm(), direction, p.momentum().norm()))
}

/// `β → ∞` limit of [`wigner_angle`] for a boost along `n⃗`: the scalar part
/// becomes `p⁰ + m − n⃗·p⃗` and the cross part `|p⃗ × n⃗|`. For `n⃗ = e⃗₃`,
/// `cos Ω = ((p⁰−p³+m)² − p⃗⊥²)/((p⁰−p³+m)² + p⃗⊥²)`.
pub fn ultrarelativistic_wigner_angle(p: &FourMomentum, axis: &Vector3<f64>) -> Result<WignerRotation> {
    check_unit(axis)?;
    let scalar = p.energy() + p.mass() - axis.dot(p.momentum());
    let direction = p.momentum().cross(axis);
    Ok(rotation_from_parts(scalar, direction.norm(), direction, p.momentum().norm()))
}

/// `cos Ω` in the ultrarelativistic limit along `e⃗₃`, written in the
/// cylindrical variables `(|p⃗⊥|, p³)`.
pub fn ultrarelativistic_cos_angle(transverse: f64, longitudinal: f64, mass: f64) -> f64 {
    let energy = (mass * mass + transverse * transverse + longitudinal * longitudinal).sqrt();
    let s = energy - longitudinal + mass;
    let (s2, t2) = (s * s, transverse * transverse);
    (s2 - t2) / (s2 + t2)
}

/// `v⃗′` such that `w†(v⃗·σ⃗)w = v⃗′·σ⃗`, via the Rodrigues form of `w`.
///
/// For `w = a₀ + i a⃗·σ⃗` (after removing any global phase),
/// `v⃗′ = (a₀² − |a⃗|²) v⃗ + 2a₀ (a⃗ × v⃗) + 2(a⃗·v⃗) a⃗`, a rotation of `v⃗` by
/// `+Ω` about `e⃗ = a⃗/|a⃗|`.
pub fn conjugate_pauli_vector(w: &SpinorMatrix, v: &Vector3<f64>) -> Result<Vector3<f64>> {
    w.check_unitary(ALGEBRA_TOLERANCE)?;
    let phase = w.det().sqrt();
    let (s, vec) = w.scale(phase.inv()).pauli_components();
    let a0 = s.re;
    let a = vec.map(|z| z.im);
    Ok(v * (a0 * a0 - a.norm_squared()) + a.cross(v) * (2.0 * a0) + a * (2.0 * a.dot(v)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn pauli_basics() {
        let s3 = pauli(3).unwrap();
        assert_eq!(s3, SpinorMatrix::new(c(1.0), ZERO, ZERO, c(-1.0)));
        let prod = pauli(1).unwrap() * pauli(2).unwrap();
        assert!(prod.max_abs_diff(&s3.scale(I)) < 1e-15);
        for i in 1..=3 {
            let si = pauli(i).unwrap();
            assert!(si.is_hermitian(0.0));
            assert_eq!(si.trace(), ZERO);
            assert!((si * si).max_abs_diff(&SpinorMatrix::identity()) < 1e-15);
            for j in 1..=3 {
                let tr = (si * pauli(j).unwrap()).trace();
                let expected = if i == j { 2.0 } else { 0.0 };
                assert!((tr - c(expected)).norm() < 1e-15);
            }
        }
        assert!(matches!(pauli(0), Err(RelspinError::PauliIndex(0))));
        assert!(matches!(pauli(4), Err(RelspinError::PauliIndex(4))));
    }

    #[test]
    fn pauli_components_roundtrip() {
        let v = Vector3::new(0.3, -1.2, 0.7);
        let m = SpinorMatrix::from_pauli(c(0.4), &v);
        let (s, back) = m.pauli_components();
        assert!((s - c(0.4)).norm() < 1e-15);
        assert!((back.map(|z| z.re) - v).norm() < 1e-15);
        assert!(back.iter().all(|z| z.im.abs() < 1e-15));
    }

    #[test]
    fn standard_boost_rest_is_identity() {
        let p = FourMomentum::at_rest(1.7).unwrap();
        let b = standard_boost(&p).unwrap();
        assert!(b.max_abs_diff(&SpinorMatrix::identity()) < 1e-15);
    }

    #[test]
    fn standard_boost_along_z() {
        let p = FourMomentum::new(1.25, Vector3::new(0.0, 0.0, 0.75), 1.0).unwrap();
        let b = standard_boost(&p).unwrap();
        // oracle: b(p)² = (p⁰ + p⃗·σ⃗)/m = diag(2, 1/2)
        let sq = b * b;
        let oracle = SpinorMatrix::new(c(2.0), ZERO, ZERO, c(0.5));
        assert!(sq.max_abs_diff(&oracle) < 1e-14);
        let expected = SpinorMatrix::new(c(2f64.sqrt()), ZERO, ZERO, c(0.5f64.sqrt()));
        assert!(b.max_abs_diff(&expected) < 1e-14);
        assert!(b.is_hermitian_boost(1e-14));
    }

    #[test]
    fn standard_boost_inverse_is_inverse() {
        let p = FourMomentum::on_shell(Vector3::new(1.0, 2.0, -3.0), 0.5).unwrap();
        let prod = standard_boost(&p).unwrap() * standard_boost_inverse(&p);
        assert!(prod.max_abs_diff(&SpinorMatrix::identity()) < 1e-13);
    }

    #[test]
    fn boost_element_examples() {
        let zero = boost_element(&BoostSpec::along_z(0.0).unwrap()).unwrap();
        assert!(zero.max_abs_diff(&SpinorMatrix::identity()) < 1e-15);
        let beta = 0.9_f64;
        let a = boost_element(&BoostSpec::along_z(beta).unwrap()).unwrap();
        let expected = SpinorMatrix::new(c((-beta / 2.0).exp()), ZERO, ZERO, c((beta / 2.0).exp()));
        assert!(a.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn boost_element_composes_additively() {
        let n = Vector3::new(1.0, -2.0, 2.0) / 3.0;
        let a1 = boost_element(&BoostSpec::new(0.4, n).unwrap()).unwrap();
        let a2 = boost_element(&BoostSpec::new(1.1, n).unwrap()).unwrap();
        let a12 = boost_element(&BoostSpec::new(1.5, n).unwrap()).unwrap();
        assert!((a1 * a2).max_abs_diff(&a12) < 1e-14);
    }

    #[test]
    fn wigner_trivial_cases() {
        let p = FourMomentum::on_shell(Vector3::new(0.3, -0.8, 1.4), 1.0).unwrap();
        let w = wigner_matrix_def(&p, &SpinorMatrix::identity()).unwrap();
        assert!(w.max_abs_diff(&SpinorMatrix::identity()) < 1e-13);

        let rot = su2_exp(0.8, &Vector3::new(0.0, 0.6, 0.8)).unwrap();
        let w = wigner_matrix_def(&p, &rot).unwrap();
        assert!(w.max_abs_diff(&rot) < 1e-13);

        let along = BoostSpec::new(1.7, p.momentum().normalize()).unwrap();
        let w = wigner_matrix_def(&p, &boost_element(&along).unwrap()).unwrap();
        assert!(w.max_abs_diff(&SpinorMatrix::identity()) < 1e-12);
        let w = wigner_matrix_closed(&p, &along).unwrap();
        assert!(w.max_abs_diff(&SpinorMatrix::identity()) < 1e-12);
        let rot = wigner_angle(&p, &along).unwrap();
        assert!(rot.degenerate);
        assert_eq!(rot.angle, 0.0);
    }

    #[test]
    fn closed_form_matches_definition() {
        let p = FourMomentum::on_shell(Vector3::new(0.5, -1.5, 2.0), 1.3).unwrap();
        let spec = BoostSpec::new(2.2, Vector3::new(0.0, 0.8, -0.6)).unwrap();
        let def = wigner_matrix_def(&p, &boost_element(&spec).unwrap()).unwrap();
        let closed = wigner_matrix_closed(&p, &spec).unwrap();
        assert!(def.max_abs_diff(&closed) < 1e-10);
        let rot = wigner_angle(&p, &spec).unwrap();
        assert!(rot.matrix().max_abs_diff(&closed) < 1e-10);
        assert!(rot.angle > 0.0 && rot.angle < std::f64::consts::PI);
    }

    #[test]
    fn zero_rapidity_angle_is_zero() {
        let p = FourMomentum::on_shell(Vector3::new(0.5, 0.1, 0.0), 1.0).unwrap();
        let rot = wigner_angle(&p, &BoostSpec::new(0.0, Vector3::z()).unwrap()).unwrap();
        assert_eq!(rot.angle, 0.0);
        assert!(!rot.degenerate);
    }

    #[test]
    fn ultrarelativistic_limit_of_transverse_momentum() {
        // p³ = 0, |p⃗⊥| ≫ m: cos Ω → 0
        let p = FourMomentum::on_shell(Vector3::new(1e4, 0.0, 0.0), 1.0).unwrap();
        let rot = ultrarelativistic_wigner_angle(&p, &Vector3::z()).unwrap();
        assert!(rot.angle.cos().abs() < 2e-4);
        assert!((rot.angle - std::f64::consts::FRAC_PI_2).abs() < 2e-4);
        assert!((ultrarelativistic_cos_angle(1e4, 0.0, 1.0) - rot.angle.cos()).abs() < 1e-12);
        // large finite β approaches the limit
        let finite = wigner_angle(&p, &BoostSpec::along_z(30.0).unwrap()).unwrap();
        assert!((finite.angle - rot.angle).abs() < 1e-10);
    }

    #[test]
    fn conjugation_examples() {
        let v = Vector3::new(0.2, -0.4, 0.9);
        let same = conjugate_pauli_vector(&SpinorMatrix::identity(), &v).unwrap();
        assert!((same - v).norm() < 1e-15);
        let half_turn = su2_exp(std::f64::consts::PI, &Vector3::z()).unwrap();
        let flipped = conjugate_pauli_vector(&half_turn, &Vector3::x()).unwrap();
        assert!((flipped + Vector3::x()).norm() < 1e-15);
        let not_unitary = SpinorMatrix::scalar(c(2.0));
        assert!(matches!(conjugate_pauli_vector(&not_unitary, &v), Err(RelspinError::NotUnitary(_))));
    }

    #[test]
    fn spinor_along_gives_requested_bloch_vector() {
        for dir in [Vector3::x(), Vector3::y(), Vector3::z(), -Vector3::z(), Vector3::new(0.48, -0.6, 0.64)] {
            let s = spinor_along(&dir).unwrap();
            assert!((s.norm() - 1.0).abs() < 1e-15);
            assert!((spin_expectation(&s) - dir).norm() < 1e-15);
        }
    }
}
