//! Sections of the line bundle `G ×_T C_Φ` along Hamiltonian loops.
//!
//! A section is a function `s: G → C` with `s(gt) = Φ(t)⁻¹ s(g)`. Along a path
//! `g_t` the evolved section is `s_t = s ∘ L_{g_t⁻¹}`. It is tracked through a
//! lift `g̃_t` of the evaluation curve `x_t = g_t·x₀`. The scalar
//! `m(t) = s_t(g̃_t)` solves
//!
//! ```text
//! dm/dt = (−ϑ + i h) m,   ϑ = i φ((g̃⁻¹ dg̃/dt)₀),   h = φ((g̃⁻¹ A_t g̃)₀).
//! ```
//!
//! When `g₁` is central, `s₁ = κ s` with `κ = Φ(g̃₀⁻¹ g̃₁) m(1)/m(0)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde_json::{json, Value};

use crate::conventions::CURVATURE_SIGN;
use crate::error::{Error, Result};
use crate::json::{complex_to_json, sig15};
use crate::matgroup::{character_phi, check_dim, AlgebraElement, CMat, GroupElement, PiecewisePath, WeightFunctional};
use crate::orbit::{act, OrbitPoint};
use crate::rootdata::Weight;

pub const DEFAULT_STEPS: usize = 4096;
pub const MIN_STEPS: usize = 100;

const CLOSURE_TOL: f64 = 1e-8;
const CHART_MIN: f64 = 1e-8;
const CAP_START: usize = 256;
const CAP_MAX: usize = 1 << 16;

/// Numerical tolerances for the transport routines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Largest accepted step-halving error estimate.
    pub precision: f64,
    /// Largest accepted disagreement between two routes to κ.
    pub consistency: f64,
    /// Largest accepted Richardson error of a spherical cap.
    pub cap: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { precision: 1e-6, consistency: 1e-6, cap: 1e-5 }
    }
}

/// How the evaluation curve is lifted to the group.
#[derive(Debug, Clone, PartialEq)]
pub enum Lift {
    /// `g̃_t = g_t g̃₀`.
    Natural,
    /// `g̃_t = g_t g̃₀ exp(f(t) D)` with `f(t) = slope·t + amplitude·sin(2π·frequency·t)`
    /// and `D` diagonal.
    Gauged { direction: AlgebraElement, slope: f64, amplitude: f64, frequency: f64 },
    /// The `CP¹` chart section `(1+|z|²)^{-1/2} [[1, −z̄], [z, 1]]`; requires `n = 2`.
    Chart,
    /// `g̃_t = g̃₀`; only valid while `x_t` stays at the base point.
    Constant,
}

impl Lift {
    pub fn describe(&self) -> String {
        match self {
            Lift::Natural => "natural: g~_t = g_t g~_0".into(),
            Lift::Gauged { slope, amplitude, frequency, .. } => {
                format!("gauged: g~_t = g_t g~_0 exp(f(t) D), f(t) = {slope}*t + {amplitude}*sin(2*pi*{frequency}*t)")
            }
            Lift::Chart => "chart: g~_t = (1+|z|^2)^(-1/2) [[1,-conj z],[z,1]], z = x_1/x_0".into(),
            Lift::Constant => "constant: g~_t = g~_0".into(),
        }
    }
}

/// The 2-chain used for the surface part of the action integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cap {
    /// The curve is a point; the surface term vanishes.
    FixedPoint,
    /// Spherical cap on `CP¹`, integrated by triangulation.
    SphericalCap,
    /// Surface term read off the holonomy, defined modulo 2π.
    HolonomyDefined,
}

impl Cap {
    pub fn name(&self) -> &'static str {
        match self {
            Cap::FixedPoint => "FIXED_POINT",
            Cap::SphericalCap => "SPHERICAL_CAP",
            Cap::HolonomyDefined => "HOLONOMY_DEFINED",
        }
    }
}

/// A loop `g_t` with `g₁` central, a base point and the choices used to evaluate it.
#[derive(Debug, Clone, PartialEq)]
pub struct LoopSpec {
    pub path: PiecewisePath,
    pub base: OrbitPoint,
    pub cap: Cap,
    pub lift: Lift,
}

impl LoopSpec {
    pub fn new(path: PiecewisePath, base: OrbitPoint, cap: Cap) -> Self {
        LoopSpec { path, base, cap, lift: Lift::Natural }
    }

    pub fn with_lift(mut self, lift: Lift) -> Self {
        self.lift = lift;
        self
    }

    /// `x_t = g_t·x₀`.
    pub fn curve_point(&self, t: f64) -> Result<OrbitPoint> {
        act(&self.path.point(t)?, &self.base)
    }
}

/// Outcome of integrating the section ODE around a loop.
#[derive(Debug, Clone, PartialEq)]
pub struct TransportResult {
    /// `Φ(g̃₀⁻¹g̃₁)·m(1)/m(0)`; equals κ when `g₁` is central.
    pub value_ratio: Complex64,
    /// `Φ(g̃₀⁻¹g̃₁)·exp(−∫ϑ)`.
    pub holonomy: Complex64,
    /// `∫₀¹ h_{A_t}(x_t) dt`.
    pub hamiltonian_term: f64,
    /// Signed surface integral over the cap, when a cap was evaluated.
    pub surface_term: Option<f64>,
    pub steps: usize,
    /// Step-halving estimate of the error in `value_ratio`.
    pub est_error: f64,
    /// Richardson estimate of the error in `surface_term`.
    pub cap_est_error: Option<f64>,
    pub gauge: String,
}

impl TransportResult {
    /// `surface_term + hamiltonian_term`.
    pub fn action(&self) -> Option<f64> {
        self.surface_term.map(|s| s + self.hamiltonian_term)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "kappa": complex_to_json(self.value_ratio),
            "holonomy": complex_to_json(self.holonomy),
            "hamiltonian_term": sig15(self.hamiltonian_term),
            "surface_term": self.surface_term.map(sig15),
            "action": self.action().map(sig15),
            "est_error": sig15(self.est_error),
            "cap_est_error": self.cap_est_error.map(sig15),
            "steps": self.steps,
            "gauge": self.gauge,
            "sign_convention": CURVATURE_SIGN,
        })
    }
}

/// Both routes to κ and their disagreement.
#[derive(Debug, Clone, PartialEq)]
pub struct KappaResult {
    pub kappa: Complex64,
    pub from_ode: Complex64,
    pub from_character: Complex64,
    pub residual: f64,
    pub transport: TransportResult,
}

struct Frame {
    lift: CMat,
    theta: f64,
    h: f64,
}

struct Integrator<'a> {
    phi: WeightFunctional,
    spec: &'a LoopSpec,
}

impl<'a> Integrator<'a> {
    fn new(phi: &Weight, spec: &'a LoopSpec) -> Result<Self> {
        let n = spec.path.dim();
        check_dim(n, phi.rank() + 1)?;
        check_dim(n, spec.base.dim())?;
        match &spec.lift {
            Lift::Chart if n != 2 => return Err(Error::UnsupportedDimension(n)),
            Lift::Gauged { direction, .. } => {
                check_dim(n, direction.dim())?;
                if !direction.is_diagonal(1e-12) {
                    return Err(Error::LiftError("gauge direction must be diagonal".into()));
                }
            }
            _ => {}
        }
        Ok(Integrator { phi: WeightFunctional::new(phi), spec })
    }

    /// Lift and its derivative at local time `tau` of segment `i` (global time `t`).
    fn frame(&self, i: usize, tau: f64, t: f64) -> Result<Frame> {
        let path = &self.spec.path;
        let g = path.point_in_segment(i, tau);
        let a = path.segments()[i].generator.matrix();
        let g0 = self.spec.base.rep().matrix();
        let (lift, dlift) = match &self.spec.lift {
            Lift::Natural => {
                let l = &g * g0;
                let d = a * &l;
                (l, d)
            }
            Lift::Gauged { direction, slope, amplitude, frequency } => {
                let w = 2.0 * PI * frequency;
                let f = slope * t + amplitude * (w * t).sin();
                let df = slope + amplitude * w * (w * t).cos();
                let dm = direction.matrix();
                let l = &g * g0 * (dm * Complex64::new(f, 0.0)).exp();
                let d = a * &l + &l * dm * Complex64::new(df, 0.0);
                (l, d)
            }
            Lift::Chart => {
                let gg = &g * g0;
                let (w0, w1) = (gg[(0, 0)], gg[(1, 0)]);
                if w0.norm() < CHART_MIN {
                    return Err(Error::LiftError(format!("curve leaves the chart z = x1/x0 at t = {t}")));
                }
                let (dw0, dw1) = (a[(0, 0)] * w0 + a[(0, 1)] * w1, a[(1, 0)] * w0 + a[(1, 1)] * w1);
                let z = w1 / w0;
                let dz = (dw1 * w0 - w1 * dw0) / (w0 * w0);
                let nrm = 1.0 / (1.0 + z.norm_sqr()).sqrt();
                let dnrm = -nrm.powi(3) * (z.conj() * dz).re;
                let one = Complex64::new(1.0, 0.0);
                let zero = Complex64::new(0.0, 0.0);
                let m = CMat::from_row_slice(2, 2, &[one, -z.conj(), z, one]);
                let dm = CMat::from_row_slice(2, 2, &[zero, -dz.conj(), dz, zero]);
                (&m * Complex64::new(nrm, 0.0), m * Complex64::new(dnrm, 0.0) + dm * Complex64::new(nrm, 0.0))
            }
            Lift::Constant => {
                let moved = g0.adjoint() * &g * g0;
                if !GroupElement::from_matrix_unchecked(moved).is_diagonal(CLOSURE_TOL) {
                    return Err(Error::LiftError(format!("x_t leaves the base point at t = {t}")));
                }
                (g0.clone(), CMat::zeros(g0.nrows(), g0.ncols()))
            }
        };
        let theta = self.phi.eval(&(lift.adjoint() * &dlift));
        let h = self.phi.eval_conjugated(&lift, a);
        Ok(Frame { lift, theta, h })
    }

    /// Integrates `(m, c, H)` with `m' = i(h − θ)m`, `c' = −iθc`, `H' = h`, using
    /// `alloc[i]` RK4 steps on segment `i`.
    fn integrate(&self, alloc: &[usize]) -> Result<(Complex64, Complex64, f64)> {
        let mut m = Complex64::new(1.0, 0.0);
        let mut c = Complex64::new(1.0, 0.0);
        let mut hint = 0.0;
        let starts = self.spec.path.breakpoints();
        for (i, seg) in self.spec.path.segments().iter().enumerate() {
            let steps = alloc[i];
            let dt = seg.duration / steps as f64;
            let mut left = self.frame(i, 0.0, starts[i])?;
            for s in 0..steps {
                let tau = s as f64 * dt;
                let mid = self.frame(i, tau + 0.5 * dt, starts[i] + tau + 0.5 * dt)?;
                let right = self.frame(i, tau + dt, starts[i] + tau + dt)?;
                let rate = |f: &Frame| Complex64::new(0.0, f.h - f.theta);
                let conn = |f: &Frame| Complex64::new(0.0, -f.theta);
                m = rk4_linear(m, rate(&left), rate(&mid), rate(&right), dt);
                c = rk4_linear(c, conn(&left), conn(&mid), conn(&right), dt);
                hint += dt / 6.0 * (left.h + 4.0 * mid.h + right.h);
                left = right;
            }
        }
        Ok((m, c, hint))
    }

    /// `g̃₀⁻¹ g̃₁`, which must be diagonal.
    fn endpoint_gauge(&self) -> Result<GroupElement> {
        let path = &self.spec.path;
        let last = path.segments().len() - 1;
        let start = self.frame(0, 0.0, 0.0)?.lift;
        let end = self.frame(last, path.segments()[last].duration, 1.0)?.lift;
        let t = start.adjoint() * end;
        let tg = GroupElement::from_matrix_unchecked(t);
        if !tg.is_diagonal(CLOSURE_TOL) {
            let d = CMat::from_diagonal(&tg.matrix().diagonal());
            return Err(Error::LoopNotClosed { residual: (tg.matrix() - d).norm() });
        }
        Ok(tg)
    }
}

fn rk4_linear(y: Complex64, a1: Complex64, a2: Complex64, a4: Complex64, h: f64) -> Complex64 {
    let k1 = a1 * y;
    let k2 = a2 * (y + k1 * (0.5 * h));
    let k3 = a2 * (y + k2 * (0.5 * h));
    let k4 = a4 * (y + k3 * h);
    y + (k1 + 2.0 * k2 + 2.0 * k3 + k4) * (h / 6.0)
}

/// Steps per segment, proportional to duration, at least one each.
fn allocate(path: &PiecewisePath, steps: usize) -> Vec<usize> {
    path.segments().iter().map(|s| ((steps as f64 * s.duration).round() as usize).max(1)).collect()
}

fn require_central(spec: &LoopSpec) -> Result<GroupElement> {
    let g1 = spec.path.endpoint();
    if !g1.is_central(CLOSURE_TOL) {
        let n = g1.dim();
        let c = g1.matrix().trace() / Complex64::new(n as f64, 0.0);
        let residual = (g1.matrix() - CMat::identity(n, n) * c).norm();
        return Err(Error::LoopNotClosed { residual });
    }
    Ok(g1)
}

fn raw_transport(phi: &Weight, spec: &LoopSpec, alloc: &[usize]) -> Result<(Complex64, Complex64, f64)> {
    let it = Integrator::new(phi, spec)?;
    let tstar = it.endpoint_gauge()?;
    let gauge = character_phi(phi, &tstar)?;
    let (m, c, h) = it.integrate(alloc)?;
    Ok((gauge * m, gauge * c, h))
}

/// `value_ratio` with exactly `steps` RK4 steps (distributed over segments) and
/// no error estimate. Used for convergence studies.
pub fn value_ratio_raw(phi: &Weight, spec: &LoopSpec, steps: usize) -> Result<Complex64> {
    if steps < MIN_STEPS {
        return Err(Error::TooFewSteps { min: MIN_STEPS, got: steps });
    }
    require_central(spec)?;
    Ok(raw_transport(phi, spec, &allocate(&spec.path, steps))?.0)
}

/// `m(1)/m(0)` from exactly `steps` RK4 steps, to compare with
/// [`exact_section_ratio`] at `t = 1`. The endpoint need not be central.
pub fn section_ratio_raw(phi: &Weight, spec: &LoopSpec, steps: usize) -> Result<Complex64> {
    if steps < MIN_STEPS {
        return Err(Error::TooFewSteps { min: MIN_STEPS, got: steps });
    }
    let it = Integrator::new(phi, spec)?;
    Ok(it.integrate(&allocate(&spec.path, steps))?.0)
}

fn transport_checked(phi: &Weight, spec: &LoopSpec, steps: usize, tol: &Tolerances) -> Result<TransportResult> {
    if steps < MIN_STEPS {
        return Err(Error::TooFewSteps { min: MIN_STEPS, got: steps });
    }
    let half = allocate(&spec.path, steps / 2);
    let full: Vec<usize> = half.iter().map(|n| 2 * n).collect();
    let (v_half, _, _) = raw_transport(phi, spec, &half)?;
    let (value_ratio, holonomy, hamiltonian_term) = raw_transport(phi, spec, &full)?;
    let est_error = (value_ratio - v_half).norm() / 15.0;
    let steps = full.iter().sum();
    if est_error > tol.precision {
        return Err(Error::PrecisionWarning { est_error, steps });
    }
    Ok(TransportResult {
        value_ratio,
        holonomy,
        hamiltonian_term,
        surface_term: None,
        steps,
        est_error,
        cap_est_error: None,
        gauge: spec.lift.describe(),
    })
}

/// Integrates the section ODE around a loop with `g₁` central.
pub fn evolve_scalar(phi: &Weight, spec: &LoopSpec, steps: usize) -> Result<TransportResult> {
    evolve_scalar_with(phi, spec, steps, &Tolerances::default())
}

pub fn evolve_scalar_with(phi: &Weight, spec: &LoopSpec, steps: usize, tol: &Tolerances) -> Result<TransportResult> {
    require_central(spec)?;
    transport_checked(phi, spec, steps, tol)
}

/// Parallel transport around the closed curve `x_t`; `g₁` need not be central.
pub fn holonomy(phi: &Weight, spec: &LoopSpec) -> Result<Complex64> {
    Ok(transport_checked(phi, spec, DEFAULT_STEPS, &Tolerances::default())?.holonomy)
}

/// The closed-form section ratio `m(t)/m(0) = Φ(g̃₀⁻¹ g_t⁻¹ g̃_t)⁻¹`.
pub fn exact_section_ratio(phi: &Weight, spec: &LoopSpec, t: f64) -> Result<Complex64> {
    let it = Integrator::new(phi, spec)?;
    let (i, tau) = spec.path.locate(t)?;
    let lift = it.frame(i, tau, t)?.lift;
    let g = spec.path.point_in_segment(i, tau);
    let tau_t = spec.base.rep().matrix().adjoint() * g.adjoint() * lift;
    let tg = GroupElement::from_matrix_unchecked(tau_t);
    Ok(character_phi(phi, &tg)?.inv())
}

/// κ by the ODE and by `Ψ(g₁)`; they must agree within `tol.consistency`.
pub fn kappa_report(phi: &Weight, spec: &LoopSpec, steps: usize, tol: &Tolerances) -> Result<KappaResult> {
    let g1 = require_central(spec)?;
    let transport = transport_checked(phi, spec, steps, tol)?;
    let from_character = character_phi(phi, &g1)?;
    let from_ode = transport.value_ratio;
    let residual = (from_ode - from_character).norm();
    if residual > tol.consistency {
        return Err(Error::ConsistencyFailure(format!(
            "kappa from the ODE {from_ode} differs from Psi(g1) = {from_character} by {residual:.3e}"
        )));
    }
    Ok(KappaResult { kappa: from_character, from_ode, from_character, residual, transport })
}

pub fn kappa_from_path(phi: &Weight, spec: &LoopSpec) -> Result<Complex64> {
    Ok(kappa_report(phi, spec, DEFAULT_STEPS, &Tolerances::default())?.kappa)
}

/// Surface plus Hamiltonian term; `exp(i·action)` must reproduce κ.
pub fn action_integral(phi: &Weight, spec: &LoopSpec) -> Result<TransportResult> {
    action_integral_with(phi, spec, DEFAULT_STEPS, &Tolerances::default())
}

pub fn action_integral_with(phi: &Weight, spec: &LoopSpec, steps: usize, tol: &Tolerances) -> Result<TransportResult> {
    let mut r = evolve_scalar_with(phi, spec, steps, tol)?;
    let (surface, cap_err) = match spec.cap {
        Cap::FixedPoint => {
            let dev = fixed_point_deviation(spec)?;
            if dev > CLOSURE_TOL {
                return Err(Error::CapError { est_error: dev });
            }
            (0.0, 0.0)
        }
        Cap::SphericalCap => {
            let k = phi.diagonal_coefficients_f64()[0];
            let (omega, err) = spherical_cap_solid_angle(spec, tol.cap)?;
            // ϖ = −2πkω and ω has total mass 1 on a sphere of solid angle 4π.
            let surface = f64::from(CURVATURE_SIGN) * (-k * omega / 2.0);
            (surface, (k * err / 2.0).abs())
        }
        Cap::HolonomyDefined => (r.holonomy.arg(), 0.0),
    };
    r.surface_term = Some(surface);
    r.cap_est_error = Some(cap_err);
    let action = surface + r.hamiltonian_term;
    let residual = (Complex64::from_polar(1.0, action) - r.value_ratio).norm();
    if residual > tol.consistency.max(10.0 * cap_err) {
        return Err(Error::ConsistencyFailure(format!(
            "exp(i*action) differs from kappa = {} by {residual:.3e}",
            r.value_ratio
        )));
    }
    Ok(r)
}

fn fixed_point_deviation(spec: &LoopSpec) -> Result<f64> {
    let x0 = spec.base.rep().matrix();
    let mut worst: f64 = 0.0;
    for j in 0..=64 {
        let t = j as f64 / 64.0;
        let x = spec.curve_point(t)?;
        let d = x0.adjoint() * x.rep().matrix();
        let diag = CMat::from_diagonal(&d.diagonal());
        worst = worst.max((&d - diag).norm());
    }
    Ok(worst)
}

fn curve_on_sphere(spec: &LoopSpec, samples: usize) -> Result<Vec<[f64; 3]>> {
    let path = &spec.path;
    let mut pts = Vec::with_capacity(samples + path.segments().len());
    for (i, seg) in path.segments().iter().enumerate() {
        let m = ((samples as f64 * seg.duration).round() as usize).max(2);
        for j in 0..m {
            let g = path.point_in_segment(i, seg.duration * j as f64 / m as f64);
            let x = act(&GroupElement::from_matrix_unchecked(g), &spec.base)?;
            pts.push(x.sphere()?);
        }
    }
    Ok(pts)
}

fn cross(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn dot(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn normalize(a: [f64; 3]) -> [f64; 3] {
    let n = dot(&a, &a).sqrt();
    [a[0] / n, a[1] / n, a[2] / n]
}

/// Signed solid angle enclosed by a closed polygon on the unit sphere, summed
/// over the fan of triangles from an interior apex.
pub fn polygon_solid_angle(pts: &[[f64; 3]]) -> f64 {
    let n = pts.len();
    let mut mean = [0.0; 3];
    for p in pts {
        for k in 0..3 {
            mean[k] += p[k] / n as f64;
        }
    }
    let apex = if dot(&mean, &mean).sqrt() > 1e-6 {
        normalize(mean)
    } else {
        // A curve balanced about the origin: use the normal of its widest chord pair.
        let best = pts
            .iter()
            .map(|p| cross(&pts[0], p))
            .max_by(|a, b| dot(a, a).total_cmp(&dot(b, b)))
            .unwrap_or([0.0, 0.0, 1.0]);
        if dot(&best, &best) > 1e-24 {
            normalize(best)
        } else {
            [0.0, 0.0, 1.0]
        }
    };
    (0..n)
        .map(|i| {
            let (a, b) = (&pts[i], &pts[(i + 1) % n]);
            let num = dot(&apex, &cross(a, b));
            let den = 1.0 + dot(&apex, a) + dot(a, b) + dot(b, &apex);
            2.0 * num.atan2(den)
        })
        .sum()
}

/// Solid angle of the cap bounded by `x_t` (outward orientation) with its
/// Richardson error estimate.
pub fn spherical_cap_solid_angle(spec: &LoopSpec, tol: f64) -> Result<(f64, f64)> {
    if spec.base.dim() != 2 {
        return Err(Error::UnsupportedDimension(spec.base.dim()));
    }
    let area = |n: usize| -> Result<f64> { Ok(polygon_solid_angle(&curve_on_sphere(spec, n)?)) };
    let mut n = CAP_START;
    let mut coarse = area(n)?;
    let mut fine = area(2 * n)?;
    let mut prev = (4.0 * fine - coarse) / 3.0;
    loop {
        n *= 2;
        coarse = fine;
        fine = area(2 * n)?;
        let extrap = (4.0 * fine - coarse) / 3.0;
        let est = (extrap - prev).abs();
        if est <= tol * 1e-3 || 2 * n >= CAP_MAX {
            if est > tol {
                return Err(Error::CapError { est_error: est });
            }
            return Ok((extrap, est));
        }
        prev = extrap;
    }
}
