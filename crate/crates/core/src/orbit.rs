//! The flag manifold `M = SU(n)/T` through unitary coset representatives.
//!
//! A point `gT` carries a representative `g`; every formula is written through
//! `g` and the projection `(g⁻¹·A)₀`, so nothing depends on the representative
//! beyond right multiplication by the torus, which the tests check. The vector
//! field of `A ∈ su(n)` is `X_A(x) = d/dε exp(εA)·x`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matgroup::{bracket, check_dim, AlgebraElement, CMat, GroupElement, WeightFunctional};
use crate::rootdata::Weight;

const POINT_TOL: f64 = 1e-10;

/// How the representative of an [`OrbitPoint`] was chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gauge {
    /// As supplied by the caller.
    AsGiven,
    /// Right-multiplied by a diagonal unitary so that in each column the entry of
    /// largest modulus is real positive (the last column absorbs the determinant).
    Canonical,
}

/// A coset `gT`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrbitPoint {
    rep: GroupElement,
    gauge: Gauge,
}

impl OrbitPoint {
    pub fn new(rep: GroupElement) -> Self {
        OrbitPoint { rep, gauge: Gauge::AsGiven }
    }

    /// The base point `eT`.
    pub fn base(n: usize) -> Self {
        Self::new(GroupElement::identity(n))
    }

    /// The point `[z₀ : z₁]` of `CP¹`, with representative `[[a, −b̄], [b, ā]]`.
    pub fn from_cp1(z0: Complex64, z1: Complex64) -> Result<Self> {
        let r = (z0.norm_sqr() + z1.norm_sqr()).sqrt();
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::InvalidElement("[0:0] is not a point of CP1".into()));
        }
        let (a, b) = (z0 / r, z1 / r);
        let m = CMat::from_row_slice(2, 2, &[a, -b.conj(), b, a.conj()]);
        Ok(Self::new(GroupElement::new(m)?))
    }

    pub fn rep(&self) -> &GroupElement {
        &self.rep
    }

    pub fn gauge(&self) -> Gauge {
        self.gauge
    }

    pub fn dim(&self) -> usize {
        self.rep.dim()
    }

    /// Same coset: `rep⁻¹·rep′` is diagonal.
    pub fn same_point(&self, other: &OrbitPoint) -> bool {
        self.dim() == other.dim() && {
            let d = self.rep.matrix().adjoint() * other.rep.matrix();
            GroupElement::from_matrix_unchecked(d).is_diagonal(POINT_TOL)
        }
    }

    /// The representative of this coset in the canonical gauge.
    pub fn canonical(&self) -> OrbitPoint {
        let g = self.rep.matrix();
        let n = g.nrows();
        let mut phases = vec![Complex64::new(1.0, 0.0); n];
        for (j, ph) in phases.iter_mut().enumerate().take(n - 1) {
            let col = g.column(j);
            let big = col.iter().copied().fold(
                Complex64::new(0.0, 0.0),
                |acc, v| {
                    if v.norm() > acc.norm() {
                        v
                    } else {
                        acc
                    }
                },
            );
            *ph = big.conj() / big.norm();
        }
        let prod: Complex64 = phases[..n - 1].iter().product();
        phases[n - 1] = prod.conj();
        let mut m = g.clone();
        for (j, ph) in phases.iter().enumerate() {
            for r in 0..n {
                m[(r, j)] *= ph;
            }
        }
        OrbitPoint { rep: GroupElement::from_matrix_unchecked(m), gauge: Gauge::Canonical }
    }

    /// Homogeneous coordinates `[g₁₁ : g₂₁]` on `CP¹`.
    pub fn cp1(&self) -> Result<(Complex64, Complex64)> {
        if self.dim() != 2 {
            return Err(Error::UnsupportedDimension(self.dim()));
        }
        let g = self.rep.matrix();
        Ok((g[(0, 0)], g[(1, 0)]))
    }

    /// Unit vector on the sphere: `(2 Re z̄₀z₁, 2 Im z̄₀z₁, |z₀|² − |z₁|²)`.
    /// The chart `z = z₁/z₀` is orientation preserving onto the outward sphere.
    pub fn sphere(&self) -> Result<[f64; 3]> {
        let (z0, z1) = self.cp1()?;
        let p = z0.conj() * z1;
        Ok([2.0 * p.re, 2.0 * p.im, z0.norm_sqr() - z1.norm_sqr()])
    }
}

/// A tangent vector `X_A(x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentAtPoint {
    pub base: OrbitPoint,
    pub generator: AlgebraElement,
}

impl TangentAtPoint {
    /// `X_A(x) = 0` iff `g⁻¹ A g` is diagonal.
    pub fn is_zero(&self, tol: f64) -> bool {
        let g = self.base.rep.matrix();
        let m = g.adjoint() * self.generator.matrix() * g;
        AlgebraElement::project(&m).is_diagonal(tol)
    }
}

/// `g·x`.
pub fn act(g: &GroupElement, x: &OrbitPoint) -> Result<OrbitPoint> {
    Ok(OrbitPoint::new(g.mul(&x.rep)?))
}

/// Kirillov form `ϖ(X_A, X_C)(gT) = φ((g⁻¹·[A,C])₀)`.
pub fn kirillov_form(phi: &Weight, x: &OrbitPoint, a: &AlgebraElement, c: &AlgebraElement) -> Result<f64> {
    check_dim(x.dim(), phi.rank() + 1)?;
    check_dim(x.dim(), a.dim())?;
    let ac = bracket(a, c)?;
    Ok(WeightFunctional::new(phi).eval_conjugated(x.rep.matrix(), ac.matrix()))
}

/// `h_A(gT) = φ((g⁻¹·A)₀)`.
pub fn hamiltonian_h(phi: &Weight, a: &AlgebraElement, x: &OrbitPoint) -> Result<f64> {
    check_dim(x.dim(), phi.rank() + 1)?;
    check_dim(x.dim(), a.dim())?;
    Ok(WeightFunctional::new(phi).eval_conjugated(x.rep.matrix(), a.matrix()))
}

/// `X_A(x)` in an affine chart of `CP¹`. Returns the chart value, the velocity
/// and which chart was used (`0`: `z = z₁/z₀`, `1`: `z = z₀/z₁`).
pub fn cp1_chart_velocity(x: &OrbitPoint, a: &AlgebraElement) -> Result<(Complex64, Complex64, usize)> {
    let (z0, z1) = x.cp1()?;
    check_dim(2, a.dim())?;
    let m = a.matrix();
    let d0 = m[(0, 0)] * z0 + m[(0, 1)] * z1;
    let d1 = m[(1, 0)] * z0 + m[(1, 1)] * z1;
    if z0.norm() >= z1.norm() {
        Ok((z1 / z0, (d1 * z0 - z1 * d0) / (z0 * z0), 0))
    } else {
        Ok((z0 / z1, (d0 * z1 - z0 * d1) / (z1 * z1), 1))
    }
}

/// Fubini–Study form `ω = dx∧dy / (π (1+|z|²)²)` on `X_A(x), X_C(x)`, which has
/// total volume 1 and satisfies `ω_{[1:0]}(X_C, X_D) = −cd/π` for
/// `C = [[0,c],[−c,0]]`, `D = [[0,di],[di,0]]`.
pub fn fubini_study(x: &OrbitPoint, a: &AlgebraElement, c: &AlgebraElement) -> Result<f64> {
    if x.dim() != 2 {
        return Err(Error::UnsupportedDimension(x.dim()));
    }
    let (z, va, chart) = cp1_chart_velocity(x, a)?;
    let (_, vc, chart_c) = cp1_chart_velocity(x, c)?;
    debug_assert_eq!(chart, chart_c);
    let area = (va.conj() * vc).im;
    Ok(area / (std::f64::consts::PI * (1.0 + z.norm_sqr()).powi(2)))
}

/// Fourth-order central difference of `s ↦ f(exp(sA)·x)` at `s = 0`.
pub fn derivative_along<F>(x: &OrbitPoint, a: &AlgebraElement, step: f64, f: F) -> Result<f64>
where
    F: Fn(&OrbitPoint) -> Result<f64>,
{
    let at = |s: f64| -> Result<f64> { f(&act(&a.scale(s).exp(), x)?) };
    let (p1, m1, p2, m2) = (at(step)?, at(-step)?, at(2.0 * step)?, at(-2.0 * step)?);
    Ok((-p2 + 8.0 * p1 - 8.0 * m1 + m2) / (12.0 * step))
}

/// `dϖ(X_A, X_B, X_C)` through the invariant formula with `[X_A, X_B] = −X_{[A,B]}`;
/// the derivative terms use [`derivative_along`].
pub fn kirillov_closedness_residual(
    phi: &Weight,
    x: &OrbitPoint,
    a: &AlgebraElement,
    b: &AlgebraElement,
    c: &AlgebraElement,
    step: f64,
) -> Result<f64> {
    let w = |u: &AlgebraElement, v: &AlgebraElement| {
        let (u, v) = (u.clone(), v.clone());
        move |p: &OrbitPoint| kirillov_form(phi, p, &u, &v)
    };
    let d1 = derivative_along(x, a, step, w(b, c))?;
    let d2 = derivative_along(x, b, step, w(a, c))?;
    let d3 = derivative_along(x, c, step, w(a, b))?;
    let ab = bracket(a, b)?;
    let ac = bracket(a, c)?;
    let bc = bracket(b, c)?;
    // ϖ([X_A,X_B], X_C) = −ϖ(X_{[A,B]}, X_C), and so on.
    let t1 = -kirillov_form(phi, x, &ab, c)?;
    let t2 = -kirillov_form(phi, x, &ac, b)?;
    let t3 = -kirillov_form(phi, x, &bc, a)?;
    Ok(d1 - d2 + d3 - t1 + t2 - t3)
}
