//! Composite tensor-product Gauss–Legendre quadrature over momentum space
//! with the invariant measure `d³p⃗/(2p⁰)`.
//!
//! Each axis is truncated at `k` characteristic widths around the support
//! and split into panels of `panel_widths` widths, each carrying
//! `nodes_per_axis` Gauss–Legendre nodes. Every integral is evaluated twice,
//! with `n` and `2n` nodes per panel; the finer value is reported and the
//! difference decides the convergence flag.
//!
//! Summation order is fixed: the outermost axis is split into slabs that may
//! be evaluated on any number of threads, each slab is summed sequentially,
//! and the slab results are combined by a fixed pairwise tree. Results are
//! therefore bit-identical regardless of the thread count.

use std::f64::consts::PI;
use std::num::NonZeroUsize;
use std::ops::Add;

use gauss_quad::legendre::GaussLegendre;
use nalgebra::{Matrix2, Vector3};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{RelspinError, Result};
use crate::kinematics::FourMomentum;

/// Coordinate system for three-dimensional integrals.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Coordinates {
    /// Cylindrical about `e⃗₃` when the support is round about it, else Cartesian.
    #[default]
    Auto,
    Cartesian,
    Cylindrical,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct QuadratureSpec {
    pub coordinates: Coordinates,
    /// Truncation half-width in units of the packet widths.
    pub truncation_widths: f64,
    /// Gauss–Legendre nodes per panel along each axis (coarse pass).
    pub nodes_per_axis: usize,
    /// Panel length in units of the packet widths.
    pub panel_widths: f64,
    /// Relative tolerance on the coarse/fine difference.
    pub tolerance: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            coordinates: Coordinates::Auto,
            truncation_widths: 8.0,
            nodes_per_axis: 16,
            panel_widths: 6.0,
            tolerance: 1e-9,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(RelspinError::InvalidQuadrature(msg));
        if !(self.truncation_widths >= 5.0 && self.truncation_widths.is_finite()) {
            return bad(format!("truncation_widths must be >= 5, got {}", self.truncation_widths));
        }
        if self.nodes_per_axis < 16 {
            return bad(format!("nodes_per_axis must be >= 16, got {}", self.nodes_per_axis));
        }
        if !(self.panel_widths > 0.0 && self.panel_widths.is_finite()) {
            return bad(format!("panel_widths must be positive, got {}", self.panel_widths));
        }
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return bad(format!("tolerance must be positive, got {}", self.tolerance));
        }
        Ok(())
    }

    /// Resolves `Auto` given whether the support is round about `e⃗₃`.
    pub fn resolve(&self, axial: bool) -> Coordinates {
        match self.coordinates {
            Coordinates::Auto if axial => Coordinates::Cylindrical,
            Coordinates::Auto => Coordinates::Cartesian,
            other => other,
        }
    }
}

/// Momentum-space support of a packet of mass `mass`.
///
/// The packet lives within a few `widths` of `center`; a positive
/// `ring_radius` describes a ring of that transverse radius about the
/// `e⃗₃` axis through `center`, with `widths.x` its radial width.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SupportHints {
    pub mass: f64,
    pub center: Vector3<f64>,
    pub widths: Vector3<f64>,
    pub ring_radius: f64,
}

impl SupportHints {
    pub fn blob(mass: f64, center: Vector3<f64>, widths: Vector3<f64>) -> Self {
        Self { mass, center, widths, ring_radius: 0.0 }
    }

    pub fn ring(mass: f64, radius: f64, radial_width: f64, center_z: f64, longitudinal_width: f64) -> Self {
        Self {
            mass,
            center: Vector3::new(0.0, 0.0, center_z),
            widths: Vector3::new(radial_width, radial_width, longitudinal_width),
            ring_radius: radius,
        }
    }

    pub fn min_width(&self) -> f64 {
        self.widths.min()
    }

    fn transverse_width(&self) -> f64 {
        self.widths.x.max(self.widths.y)
    }

    fn check(&self) -> Result<()> {
        let ok = self.mass > 0.0
            && self.mass.is_finite()
            && self.widths.iter().all(|w| *w > 0.0 && w.is_finite())
            && self.center.iter().all(|c| c.is_finite())
            && self.ring_radius >= 0.0;
        if ok {
            Ok(())
        } else {
            Err(RelspinError::InvalidQuadrature(format!("degenerate support {self:?}")))
        }
    }
}

/// Values that can be accumulated by the quadrature engine.
pub trait QuadValue: Copy + Send + Sync + Add<Output = Self> {
    fn zero() -> Self;
    fn scaled(self, s: f64) -> Self;
    fn magnitude(&self) -> f64;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn scaled(self, s: f64) -> Self {
        self * s
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Vector3<f64> {
    fn zero() -> Self {
        Vector3::zeros()
    }
    fn scaled(self, s: f64) -> Self {
        self * s
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

impl QuadValue for Matrix2<Complex64> {
    fn zero() -> Self {
        Matrix2::zeros()
    }
    fn scaled(self, s: f64) -> Self {
        self.map(|z| z * s)
    }
    fn magnitude(&self) -> f64 {
        self.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

/// Fixed-size bundle of real integrals evaluated in one pass.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bundle<const N: usize>(pub [f64; N]);

impl<const N: usize> Add for Bundle<N> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        self.0.iter_mut().zip(rhs.0).for_each(|(a, b)| *a += b);
        self
    }
}

impl<const N: usize> QuadValue for Bundle<N> {
    fn zero() -> Self {
        Bundle([0.0; N])
    }
    fn scaled(mut self, s: f64) -> Self {
        self.0.iter_mut().for_each(|a| *a *= s);
        self
    }
    fn magnitude(&self) -> f64 {
        self.0.iter().fold(0.0, |m, x| m.max(x.abs()))
    }
}

/// Result of a convergence-checked integral.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Integral<V> {
    /// Fine-pass estimate.
    pub value: V,
    /// Magnitude of the coarse/fine difference.
    pub change: f64,
    /// Magnitude scale the change was compared against (`∫|f|`).
    pub scale: f64,
    pub converged: bool,
}

impl<V> Integral<V> {
    pub fn map<W>(self, f: impl FnOnce(V) -> W) -> Integral<W> {
        Integral { value: f(self.value), change: self.change, scale: self.scale, converged: self.converged }
    }

    pub fn try_map<W>(self, f: impl FnOnce(V) -> Result<W>) -> Result<Integral<W>> {
        Ok(Integral { value: f(self.value)?, change: self.change, scale: self.scale, converged: self.converged })
    }

    /// Combines convergence information of two integrals.
    pub fn join<W, X>(self, other: Integral<W>, f: impl FnOnce(V, W) -> X) -> Integral<X> {
        Integral {
            value: f(self.value, other.value),
            change: self.change.max(other.change),
            scale: self.scale.max(other.scale),
            converged: self.converged && other.converged,
        }
    }
}

/// One axis of a tensor-product rule: nodes and weights in ascending order.
#[derive(Clone, Debug)]
struct AxisRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl AxisRule {
    fn composite(rule: &[(f64, f64)], lo: f64, hi: f64, panels: usize) -> Self {
        let mut nodes = Vec::with_capacity(panels * rule.len());
        let mut weights = Vec::with_capacity(panels * rule.len());
        let half = 0.5 * (hi - lo) / panels as f64;
        for k in 0..panels {
            let mid = lo + half * (2 * k + 1) as f64;
            for &(x, w) in rule {
                nodes.push(mid + half * x);
                weights.push(half * w);
            }
        }
        Self { nodes, weights }
    }

    fn len(&self) -> usize {
        self.nodes.len()
    }
}

/// Gauss–Legendre nodes and weights on `[−1, 1]`, ascending in the node.
fn gauss_legendre(n: usize) -> Result<Vec<(f64, f64)>> {
    let degree = NonZeroUsize::new(n).ok_or_else(|| RelspinError::InvalidQuadrature("zero nodes".into()))?;
    let mut pairs = GaussLegendre::new(degree).as_node_weight_pairs().to_vec();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(pairs)
}

// 1/p⁰ has branch points at |p| = i·m, so the mass also bounds the panel size.
fn panel_count(extent: f64, width: f64, mass: f64, spec: &QuadratureSpec) -> usize {
    ((extent / (spec.panel_widths * width.min(mass))).ceil() as usize).max(1)
}

/// Domain of a 3D integral in the chosen coordinates.
#[derive(Clone, Copy, Debug)]
struct Domain {
    coordinates: Coordinates,
    // (lo, hi, panels) per axis; cylindrical axes are (ρ, φ, z)
    axes: [(f64, f64, usize); 3],
}

impl Domain {
    fn new(hints: &SupportHints, spec: &QuadratureSpec, coordinates: Coordinates) -> Result<Self> {
        hints.check()?;
        let k = spec.truncation_widths;
        let w = hints.widths;
        match coordinates {
            Coordinates::Cylindrical => {
                if hints.center.x != 0.0 || hints.center.y != 0.0 {
                    return Err(RelspinError::InvalidQuadrature(
                        "cylindrical coordinates need a support centred on the e3 axis".into(),
                    ));
                }
                let wt = hints.transverse_width();
                let rho_lo = (hints.ring_radius - k * wt).max(0.0);
                let rho_hi = hints.ring_radius + k * wt;
                let z_lo = hints.center.z - k * w.z;
                let z_hi = hints.center.z + k * w.z;
                Ok(Self {
                    coordinates,
                    axes: [
                        (rho_lo, rho_hi, panel_count(rho_hi - rho_lo, wt, hints.mass, spec)),
                        (0.0, 2.0 * PI, panel_count(2.0 * PI * rho_hi, hints.mass, hints.mass, spec).max(4)),
                        (z_lo, z_hi, panel_count(z_hi - z_lo, w.z, hints.mass, spec)),
                    ],
                })
            }
            _ => {
                let mut axes = [(0.0, 0.0, 1); 3];
                for (i, axis) in axes.iter_mut().enumerate() {
                    let reach = if i < 2 { hints.ring_radius } else { 0.0 } + k * w[i];
                    let (lo, hi) = (hints.center[i] - reach, hints.center[i] + reach);
                    *axis = (lo, hi, panel_count(hi - lo, w[i], hints.mass, spec));
                }
                Ok(Self { coordinates: Coordinates::Cartesian, axes })
            }
        }
    }

    fn rules(&self, rule: &[(f64, f64)]) -> [AxisRule; 3] {
        self.axes.map(|(lo, hi, panels)| AxisRule::composite(rule, lo, hi, panels))
    }

    /// Momentum and volume Jacobian at a node.
    fn point(&self, a: f64, b: f64, c: f64) -> (Vector3<f64>, f64) {
        match self.coordinates {
            Coordinates::Cylindrical => {
                let (s, co) = b.sin_cos();
                (Vector3::new(a * co, a * s, c), a)
            }
            _ => (Vector3::new(a, b, c), 1.0),
        }
    }
}

fn pairwise_sum<V: QuadValue>(values: &[V]) -> V {
    match values.len() {
        0 => V::zero(),
        1 => values[0],
        n => {
            let (left, right) = values.split_at(n / 2);
            pairwise_sum(left) + pairwise_sum(right)
        }
    }
}

fn first_error<T>(results: Vec<Result<T>>) -> Result<Vec<T>> {
    results.into_iter().collect()
}

/// One tensor-product pass; returns `(∫f, ∫|f|)`.
fn tensor_pass<V, F>(domain: &Domain, rule: &[(f64, f64)], mass: f64, f: &F) -> Result<(V, f64)>
where
    V: QuadValue,
    F: Fn(&FourMomentum) -> Result<V> + Sync,
{
    let [ra, rb, rc] = domain.rules(rule);
    let slabs: Vec<Result<(V, f64)>> = (0..ra.len())
        .into_par_iter()
        .map(|i| {
            let mut acc = V::zero();
            let mut abs = 0.0;
            for j in 0..rb.len() {
                for k in 0..rc.len() {
                    let (q, jac) = domain.point(ra.nodes[i], rb.nodes[j], rc.nodes[k]);
                    let p = FourMomentum::on_shell(q, mass)?;
                    let weight = ra.weights[i] * rb.weights[j] * rc.weights[k] * jac / (2.0 * p.energy());
                    let v = f(&p)?;
                    abs += weight * v.magnitude();
                    acc = acc + v.scaled(weight);
                }
            }
            Ok((acc, abs))
        })
        .collect();
    let slabs = first_error(slabs)?;
    let values: Vec<V> = slabs.iter().map(|s| s.0).collect();
    let abs: Vec<f64> = slabs.iter().map(|s| s.1).collect();
    Ok((pairwise_sum(&values), pairwise_sum(&abs)))
}

fn checked<V: QuadValue>(coarse: V, fine: (V, f64), tolerance: f64) -> Integral<V> {
    let (value, abs) = fine;
    let change = (value + coarse.scaled(-1.0)).magnitude();
    let scale = abs.max(value.magnitude());
    let converged = change.is_finite() && change <= tolerance * scale.max(f64::MIN_POSITIVE);
    Integral { value, change, scale, converged }
}

/// `∫ d³p⃗/(2p⁰) f(p)` over the truncated support.
///
/// `axial` states that the support is round about `e⃗₃`, so cylindrical
/// panels fit it (it is what `Coordinates::Auto` resolves against).
pub fn integrate<V, F>(f: F, hints: &SupportHints, spec: &QuadratureSpec, axial: bool) -> Result<Integral<V>>
where
    V: QuadValue,
    F: Fn(&FourMomentum) -> Result<V> + Sync,
{
    spec.validate()?;
    let domain = Domain::new(hints, spec, spec.resolve(axial))?;
    let coarse_rule = gauss_legendre(spec.nodes_per_axis)?;
    let fine_rule = gauss_legendre(2 * spec.nodes_per_axis)?;
    let (coarse, _) = tensor_pass(&domain, &coarse_rule, hints.mass, &f)?;
    let fine = tensor_pass(&domain, &fine_rule, hints.mass, &f)?;
    Ok(checked(coarse, fine, spec.tolerance))
}

/// Evaluates `f` at every node of the fine 3D grid and returns the
/// smallest and largest value, in deterministic order.
pub fn node_extrema<F>(f: F, hints: &SupportHints, spec: &QuadratureSpec, axial: bool) -> Result<(f64, f64)>
where
    F: Fn(&FourMomentum) -> Result<f64> + Sync,
{
    spec.validate()?;
    let domain = Domain::new(hints, spec, spec.resolve(axial))?;
    let rule = gauss_legendre(2 * spec.nodes_per_axis)?;
    let [ra, rb, rc] = domain.rules(&rule);
    let slabs: Vec<Result<(f64, f64)>> = (0..ra.len())
        .into_par_iter()
        .map(|i| {
            let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
            for &b in &rb.nodes {
                for &c in &rc.nodes {
                    let (q, _) = domain.point(ra.nodes[i], b, c);
                    let v = f(&FourMomentum::on_shell(q, hints.mass)?)?;
                    lo = lo.min(v);
                    hi = hi.max(v);
                }
            }
            Ok((lo, hi))
        })
        .collect();
    let slabs = first_error(slabs)?;
    Ok(slabs.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), s| (lo.min(s.0), hi.max(s.1))))
}

fn axial_pass<G>(domain: &Domain, rule: &[(f64, f64)], mass: f64, g: &G) -> Result<(f64, f64)>
where
    G: Fn(f64, f64) -> Result<f64> + Sync,
{
    let [ra, _, rc] = domain.rules(rule);
    let rows: Vec<Result<(f64, f64)>> = (0..ra.len())
        .into_par_iter()
        .map(|i| {
            let rho = ra.nodes[i];
            let mut acc = 0.0;
            let mut abs = 0.0;
            for (z, wz) in rc.nodes.iter().zip(&rc.weights) {
                let energy = (mass * mass + rho * rho + z * z).sqrt();
                let weight = ra.weights[i] * wz * 2.0 * PI * rho / (2.0 * energy);
                let v = g(rho, *z)?;
                acc += weight * v;
                abs += weight * v.abs();
            }
            Ok((acc, abs))
        })
        .collect();
    let rows = first_error(rows)?;
    let values: Vec<f64> = rows.iter().map(|r| r.0).collect();
    let abs: Vec<f64> = rows.iter().map(|r| r.1).collect();
    Ok((pairwise_sum(&values), pairwise_sum(&abs)))
}

/// `∫ d³p⃗/(2p⁰) g(|p⃗⊥|, p³)` for an azimuth-independent integrand, with
/// the azimuthal factor `2π|p⃗⊥|` folded in.
pub fn integrate_axial_reduced<G>(g: G, hints: &SupportHints, spec: &QuadratureSpec) -> Result<Integral<f64>>
where
    G: Fn(f64, f64) -> Result<f64> + Sync,
{
    spec.validate()?;
    let domain = Domain::new(hints, spec, Coordinates::Cylindrical)?;
    let coarse = axial_pass(&domain, &gauss_legendre(spec.nodes_per_axis)?, hints.mass, &g)?.0;
    let fine = axial_pass(&domain, &gauss_legendre(2 * spec.nodes_per_axis)?, hints.mass, &g)?;
    Ok(checked(coarse, fine, spec.tolerance))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gaussian_hints(sigma: f64) -> SupportHints {
        SupportHints::blob(1.0, Vector3::zeros(), Vector3::repeat(sigma))
    }

    #[test]
    fn spec_validation() {
        assert!(QuadratureSpec::default().validate().is_ok());
        let bad = QuadratureSpec { nodes_per_axis: 8, ..Default::default() };
        assert!(bad.validate().is_err());
        let bad = QuadratureSpec { truncation_widths: 3.0, ..Default::default() };
        assert!(bad.validate().is_err());
        let bad = QuadratureSpec { tolerance: 0.0, ..Default::default() };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn node_ordering_is_ascending() {
        let rule = gauss_legendre(16).unwrap();
        let nodes: Vec<f64> = rule.iter().map(|p| p.0).collect();
        assert!(nodes.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn odd_integrand_vanishes() {
        let spec = QuadratureSpec::default();
        let hints = gaussian_hints(0.3);
        let r = integrate(
            |p| Ok(p.momentum().x * (-p.momentum().norm_squared() / 0.18).exp()),
            &hints,
            &spec,
            false,
        )
        .unwrap();
        assert!(r.value.abs() < 1e-15, "{}", r.value);
    }

    fn radial_oracle(m: f64, hi: f64, f: impl Fn(f64) -> f64) -> f64 {
        let rule = GaussLegendre::new(NonZeroUsize::new(200).unwrap());
        rule.integrate(0.0, hi, |r| 4.0 * PI * r * r * f(r) / (2.0 * (m * m + r * r).sqrt()))
    }

    #[test]
    fn measure_of_ball_closed_form() {
        // ∫_{|p|<R} d³p/(2p⁰) = π (R√(m²+R²) − m² asinh(R/m))
        let (m, radius) = (1.3_f64, 0.75_f64);
        let exact = PI * (radius * (m * m + radius * radius).sqrt() - m * m * (radius / m).asinh());
        assert!((radial_oracle(m, radius, |_| 1.0) - exact).abs() < 1e-12);
    }

    #[test]
    fn invariant_measure_matches_radial_oracle() {
        let (m, sigma) = (1.3_f64, 0.4_f64);
        let profile = |r: f64| (-r * r / (2.0 * sigma * sigma)).exp() * (1.0 + r * r);
        let oracle = radial_oracle(m, 12.0 * sigma, profile);
        let hints = gaussian_hints(sigma);
        let hints = SupportHints { mass: m, ..hints };
        for coordinates in [Coordinates::Cartesian, Coordinates::Cylindrical] {
            let spec = QuadratureSpec { coordinates, ..Default::default() };
            let r = integrate(|p| Ok(profile(p.momentum().norm())), &hints, &spec, true).unwrap();
            assert!(r.converged);
            assert!((r.value - oracle).abs() < 1e-8 * oracle, "{coordinates:?}: {} vs {oracle}", r.value);
        }
    }

    #[test]
    fn gaussian_normalization_in_both_coordinate_systems() {
        let sigma = 0.2;
        let f = |p: &FourMomentum| Ok((-p.momentum().norm_squared() / (2.0 * sigma * sigma)).exp());
        let hints = gaussian_hints(sigma);
        let cart = integrate(f, &hints, &QuadratureSpec { coordinates: Coordinates::Cartesian, ..Default::default() }, true)
            .unwrap();
        let cyl = integrate(f, &hints, &QuadratureSpec::default(), true).unwrap();
        let reduced = integrate_axial_reduced(
            |rho, z| Ok((-(rho * rho + z * z) / (2.0 * sigma * sigma)).exp()),
            &hints,
            &QuadratureSpec::default(),
        )
        .unwrap();
        assert!(cart.converged && cyl.converged && reduced.converged);
        assert!((cart.value - cyl.value).abs() < 1e-12 * cart.value);
        assert!((cart.value - reduced.value).abs() < 1e-12 * cart.value);
    }

    #[test]
    fn coarse_grid_reports_non_convergence() {
        // a feature much narrower than the declared widths
        let spec = QuadratureSpec::default();
        let hints = gaussian_hints(1.0);
        let r = integrate(
            |p| Ok((-p.momentum().norm_squared() / (2.0 * 0.01f64.powi(2))).exp() * 1e6),
            &hints,
            &spec,
            false,
        )
        .unwrap();
        assert!(!r.converged);
    }

    #[test]
    fn cylindrical_rejects_off_axis_support() {
        let hints = SupportHints::blob(1.0, Vector3::new(0.1, 0.0, 0.0), Vector3::repeat(0.1));
        let spec = QuadratureSpec { coordinates: Coordinates::Cylindrical, ..Default::default() };
        assert!(integrate(|_| Ok(1.0), &hints, &spec, true).is_err());
    }

    #[test]
    fn errors_propagate() {
        let r = integrate::<f64, _>(
            |_| Err(RelspinError::MissingSymmetry("test")),
            &gaussian_hints(0.1),
            &QuadratureSpec::default(),
            false,
        );
        assert!(matches!(r, Err(RelspinError::MissingSymmetry(_))));
    }

    #[test]
    fn extrema_cover_grid() {
        let (lo, hi) =
            node_extrema(|p| Ok(p.momentum().z), &gaussian_hints(0.1), &QuadratureSpec::default(), false).unwrap();
        assert!(lo < -0.7 && hi > 0.7 && lo > -0.8 && hi < 0.8);
    }
}
