//! Matrix backend for `G = SU(n)` with maximal torus `T` of diagonal matrices.

mod expm;
mod path;

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::rootdata::{RealFormSpec, Weight};

pub use expm::{expm, logm, sqrtm};
pub use path::{path_point, path_velocity, PiecewisePath, Segment};

pub type CMat = DMatrix<Complex64>;

const ALGEBRA_TOL: f64 = 1e-12;
const GROUP_TOL: f64 = 1e-10;

pub(crate) const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// A traceless skew-Hermitian matrix, an element of `su(n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraElement {
    m: CMat,
}

impl AlgebraElement {
    /// Validates `‖M + M†‖ ≤ 1e−12‖M‖` and `|tr M| ≤ 1e−12‖M‖`.
    pub fn new(m: CMat) -> Result<Self> {
        check_square(&m)?;
        let scale = m.norm();
        let herm = (&m + m.adjoint()).norm();
        let tr = m.trace().norm();
        if herm > ALGEBRA_TOL * scale || tr > ALGEBRA_TOL * scale {
            return Err(Error::InvalidElement(format!("not in su(n): |M+M^H| = {herm:.3e}, |tr M| = {tr:.3e}")));
        }
        Ok(AlgebraElement { m })
    }

    /// Orthogonal projection of an arbitrary square matrix onto `su(n)`.
    pub fn project(m: &CMat) -> Self {
        let n = m.nrows();
        let mut s = (m - m.adjoint()) * Complex64::new(0.5, 0.0);
        let t = s.trace() / Complex64::new(n as f64, 0.0);
        for i in 0..n {
            s[(i, i)] -= t;
        }
        AlgebraElement { m: s }
    }

    pub fn zero(n: usize) -> Self {
        AlgebraElement { m: CMat::zeros(n, n) }
    }

    /// `diag(i a₁, …, i aₙ)`; the `aⱼ` must sum to zero.
    pub fn diagonal(a: &[f64]) -> Result<Self> {
        let m = CMat::from_diagonal(&DVector::from_iterator(a.len(), a.iter().map(|&x| I * x)));
        Self::new(m)
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &CMat {
        &self.m
    }

    pub fn into_matrix(self) -> CMat {
        self.m
    }

    pub fn norm(&self) -> f64 {
        self.m.norm()
    }

    pub fn scale(&self, s: f64) -> Self {
        AlgebraElement { m: &self.m * Complex64::new(s, 0.0) }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_dim(self.dim(), other.dim())?;
        Ok(AlgebraElement { m: &self.m + &other.m })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        check_dim(self.dim(), other.dim())?;
        Ok(AlgebraElement { m: &self.m - &other.m })
    }

    pub fn exp(&self) -> GroupElement {
        GroupElement { m: expm(&self.m) }
    }

    /// Diagonal within `tol` (relative to the norm).
    pub fn is_diagonal(&self, tol: f64) -> bool {
        off_diagonal_norm(&self.m) <= tol * self.m.norm().max(1.0)
    }

    /// Invariant inner product `⟨X, Y⟩ = −Re tr(XY)`.
    pub fn inner(&self, other: &Self) -> f64 {
        -(&self.m * &other.m).trace().re
    }
}

/// A special unitary matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupElement {
    m: CMat,
}

impl GroupElement {
    /// Validates `‖U†U − I‖ ≤ 1e−10` and `|det U − 1| ≤ 1e−10`.
    pub fn new(m: CMat) -> Result<Self> {
        check_square(&m)?;
        let n = m.nrows();
        let unit = (m.adjoint() * &m - CMat::identity(n, n)).norm();
        let det = (m.determinant() - Complex64::new(1.0, 0.0)).norm();
        if unit > GROUP_TOL || det > GROUP_TOL {
            return Err(Error::InvalidElement(format!(
                "not in SU(n): |U^H U - I| = {unit:.3e}, |det U - 1| = {det:.3e}"
            )));
        }
        Ok(GroupElement { m })
    }

    pub(crate) fn from_matrix_unchecked(m: CMat) -> Self {
        GroupElement { m }
    }

    pub fn identity(n: usize) -> Self {
        GroupElement { m: CMat::identity(n, n) }
    }

    /// `diag(e^{i a₁}, …, e^{i aₙ})`; the phases must sum to a multiple of 2π.
    pub fn torus(a: &[f64]) -> Result<Self> {
        let m = CMat::from_diagonal(&DVector::from_iterator(a.len(), a.iter().map(|&x| Complex64::from_polar(1.0, x))));
        Self::new(m)
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &CMat {
        &self.m
    }

    pub fn inverse(&self) -> Self {
        GroupElement { m: self.m.adjoint() }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        check_dim(self.dim(), other.dim())?;
        Ok(GroupElement { m: &self.m * &other.m })
    }

    /// `g·A = g A g⁻¹`.
    pub fn adjoint_action(&self, a: &AlgebraElement) -> Result<AlgebraElement> {
        check_dim(self.dim(), a.dim())?;
        Ok(AlgebraElement::project(&(&self.m * &a.m * self.m.adjoint())))
    }

    /// Principal logarithm; fails if it does not land in `su(n)`.
    pub fn log(&self) -> Result<AlgebraElement> {
        let l = logm(&self.m)?;
        if l.trace().norm() > 1e-9 {
            return Err(Error::InvalidElement(
                "principal logarithm has nonzero trace (element is off the principal branch)".into(),
            ));
        }
        Ok(AlgebraElement::project(&l))
    }

    pub fn is_diagonal(&self, tol: f64) -> bool {
        off_diagonal_norm(&self.m) <= tol
    }

    /// A scalar multiple of the identity within `tol`.
    pub fn is_central(&self, tol: f64) -> bool {
        let n = self.dim();
        let c = self.m.trace() / Complex64::new(n as f64, 0.0);
        (&self.m - CMat::identity(n, n) * c).norm() <= tol
    }

    pub fn distance(&self, other: &Self) -> f64 {
        (&self.m - &other.m).norm()
    }
}

/// `[A, C] = AC − CA`.
pub fn bracket(a: &AlgebraElement, c: &AlgebraElement) -> Result<AlgebraElement> {
    check_dim(a.dim(), c.dim())?;
    Ok(AlgebraElement::project(&(&a.m * &c.m - &c.m * &a.m)))
}

/// `A ↦ A₀`, the component along the diagonal Cartan `t`; the off-diagonal
/// remainder lies in the root-space part.
pub fn cartan_project(a: &AlgebraElement) -> AlgebraElement {
    AlgebraElement { m: CMat::from_diagonal(&a.m.diagonal()) }
}

/// The `n` central elements `ζᵏ I`, `ζ = e^{2πi/n}`.
pub fn center_elements(n: usize) -> Vec<GroupElement> {
    (0..n)
        .map(|k| {
            let z = Complex64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64);
            GroupElement { m: CMat::identity(n, n) * z }
        })
        .collect()
}

/// A weight read as a real linear functional on the diagonal Cartan of `su(n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightFunctional {
    coeffs: Vec<f64>,
}

impl WeightFunctional {
    pub fn new(phi: &Weight) -> Self {
        WeightFunctional { coeffs: phi.diagonal_coefficients_f64() }
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    /// `φ(X₀) = Σ wⱼ Im Xⱼⱼ`; only the diagonal of `x` is read.
    pub fn eval(&self, x: &CMat) -> f64 {
        self.coeffs.iter().enumerate().map(|(j, w)| w * x[(j, j)].im).sum()
    }

    /// `φ((g⁻¹ X g)₀)`.
    pub fn eval_conjugated(&self, g: &CMat, x: &CMat) -> f64 {
        // Only the diagonal of g† X g is needed.
        let xg = x * g;
        (0..self.coeffs.len())
            .map(|j| {
                let d: Complex64 = (0..g.nrows()).map(|r| g[(r, j)].conj() * xg[(r, j)]).sum();
                self.coeffs[j] * d.im
            })
            .sum()
    }
}

fn weight_dim_check(phi: &Weight, n: usize) -> Result<()> {
    check_dim(n, phi.rank() + 1)
}

fn integral_diagonal_coefficients(phi: &Weight) -> Result<Vec<i32>> {
    if !phi.is_integral() {
        return Err(Error::NotIntegral(phi.to_string()));
    }
    phi.diagonal_coefficients()
        .iter()
        .map(|c| {
            i32::try_from(c.to_integer()).map_err(|_| Error::NotIntegral(format!("{phi}: coefficient out of range")))
        })
        .collect()
}

/// `Φ(t)` for `t` in the diagonal torus: `Φ(exp C) = exp(i φ(C))`.
///
/// With integral coefficients `wⱼ` this is `Π tⱼⱼ^{wⱼ}`, which does not depend
/// on the logarithm chosen for `t`.
pub fn character_phi(phi: &Weight, t: &GroupElement) -> Result<Complex64> {
    weight_dim_check(phi, t.dim())?;
    if !t.is_diagonal(GROUP_TOL) {
        return Err(Error::InvalidElement("character is only defined on the diagonal torus".into()));
    }
    let w = integral_diagonal_coefficients(phi)?;
    Ok(w.iter()
        .enumerate()
        .map(|(j, &wj)| {
            let d = t.m[(j, j)];
            // renormalize away rounding in |d|
            (d / d.norm()).powi(wj)
        })
        .product())
}

/// `Ψ(g)` for central `g`. `Ad_g` is the identity, so the exterior-power factor
/// of `Ψ` is trivial and `Ψ(g) = Φ(g)·Id_W`; the scalar is returned.
pub fn character_psi_on_center(phi: &Weight, _rf: &RealFormSpec, g: &GroupElement) -> Result<Complex64> {
    if !g.is_central(GROUP_TOL) {
        return Err(Error::NotCentral("Psi is evaluated on the center only".into()));
    }
    character_phi(phi, g)
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionError { expected, found })
    }
}

fn check_square(m: &CMat) -> Result<()> {
    if m.nrows() == 0 {
        return Err(Error::InvalidElement("empty matrix".into()));
    }
    check_dim(m.nrows(), m.ncols())
}

fn off_diagonal_norm(m: &CMat) -> f64 {
    let mut acc = 0.0;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            if i != j {
                acc += m[(i, j)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::{build_root_system, RootType};
    use crate::sample::Sampler;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn mat2(a: [[Complex64; 2]; 2]) -> CMat {
        CMat::from_row_slice(2, 2, &[a[0][0], a[0][1], a[1][0], a[1][1]])
    }

    #[test]
    fn bracket_of_remark_matrices() {
        let (cc, d) = (0.7, -1.3);
        let cm = AlgebraElement::new(mat2([[c(0., 0.), c(cc, 0.)], [c(-cc, 0.), c(0., 0.)]])).unwrap();
        let dm = AlgebraElement::new(mat2([[c(0., 0.), c(0., d)], [c(0., d), c(0., 0.)]])).unwrap();
        let b = bracket(&cm, &dm).unwrap();
        let want = AlgebraElement::diagonal(&[2.0 * cc * d, -2.0 * cc * d]).unwrap();
        assert!((b.matrix() - want.matrix()).norm() < 1e-15);
        assert!(bracket(&cm, &cm).unwrap().norm() == 0.0);
    }

    #[test]
    fn jacobi_identity() {
        let mut s = Sampler::new(1);
        for n in 2..=4 {
            let (a, b, cc) = (s.algebra(n), s.algebra(n), s.algebra(n));
            let t1 = bracket(&a, &bracket(&b, &cc).unwrap()).unwrap();
            let t2 = bracket(&b, &bracket(&cc, &a).unwrap()).unwrap();
            let t3 = bracket(&cc, &bracket(&a, &b).unwrap()).unwrap();
            assert!((t1.matrix() + t2.matrix() + t3.matrix()).norm() < 1e-12);
        }
    }

    #[test]
    fn dimension_mismatch() {
        assert!(matches!(
            bracket(&AlgebraElement::zero(2), &AlgebraElement::zero(3)),
            Err(Error::DimensionError { .. })
        ));
    }

    #[test]
    fn validation() {
        assert!(AlgebraElement::new(CMat::identity(2, 2)).is_err());
        assert!(AlgebraElement::diagonal(&[1.0, 1.0]).is_err());
        assert!(GroupElement::new(CMat::identity(2, 2) * c(2.0, 0.0)).is_err());
        assert!(GroupElement::torus(&[0.3, 0.1]).is_err());
        assert!(GroupElement::torus(&[0.3, -0.3]).is_ok());
    }

    #[test]
    fn cartan_projection_basics() {
        let d = AlgebraElement::diagonal(&[0.5, -0.2, -0.3]).unwrap();
        assert_eq!(cartan_project(&d), d);
        let off = AlgebraElement::new(mat2([[c(0., 0.), c(1.5, 0.)], [c(-1.5, 0.), c(0., 0.)]])).unwrap();
        assert_eq!(cartan_project(&off).norm(), 0.0);
        let mut s = Sampler::new(2);
        for _ in 0..50 {
            let t = s.torus(3);
            let a = s.algebra(3);
            let lhs = cartan_project(&t.adjoint_action(&a).unwrap());
            let rhs = t.adjoint_action(&cartan_project(&a)).unwrap();
            assert!((lhs.matrix() - rhs.matrix()).norm() < 1e-12);
        }
    }

    #[test]
    fn projection_is_orthogonal() {
        let mut s = Sampler::new(3);
        for _ in 0..50 {
            let a = s.algebra(3);
            let cc = s.algebra(3);
            let resid = a.sub(&cartan_project(&a)).unwrap().inner(&cartan_project(&cc));
            assert!(resid.abs() < 1e-12);
        }
    }

    #[test]
    fn center() {
        let z2 = center_elements(2);
        assert_eq!(z2.len(), 2);
        assert!((z2[1].matrix() + CMat::identity(2, 2)).norm() < 1e-15);
        let z3 = center_elements(3);
        let zeta = z3[1].matrix()[(0, 0)];
        assert!((zeta.powi(3) - c(1.0, 0.0)).norm() < 1e-14);
        let mut s = Sampler::new(4);
        for z in &z3 {
            for _ in 0..20 {
                let g = s.group(3);
                assert!((z.matrix() * g.matrix() - g.matrix() * z.matrix()).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn character_values() {
        let rs = build_root_system(RootType::A, 1).unwrap();
        let rf = RealFormSpec::compact(&rs);
        for k in -4..=6 {
            let phi = Weight::from_ints(&[k]);
            let id = GroupElement::identity(2);
            assert!((character_phi(&phi, &id).unwrap() - c(1.0, 0.0)).norm() < 1e-15);
            let minus = &center_elements(2)[1];
            let want = if k % 2 == 0 { 1.0 } else { -1.0 };
            assert!((character_phi(&phi, minus).unwrap() - c(want, 0.0)).norm() < 1e-14);
            assert!((character_psi_on_center(&phi, &rf, minus).unwrap() - c(want, 0.0)).norm() < 1e-14);
        }
        let half = Weight::new(RootType::A, vec![num_rational::BigRational::new(1.into(), 2.into())]);
        assert!(matches!(character_phi(&half, &GroupElement::identity(2)), Err(Error::NotIntegral(_))));
    }

    #[test]
    fn su3_center_character_over_logarithms() {
        let zeta = &center_elements(3)[1];
        for (m1, m2) in [(1, 0), (0, 1), (1, 2), (2, -1), (3, 3)] {
            let phi = Weight::from_ints(&[m1, m2]);
            let got = character_phi(&phi, zeta).unwrap();
            let want = Complex64::from_polar(1.0, 2.0 * PI * (m1 + 2 * m2) as f64 / 3.0);
            assert!((got - want).norm() < 1e-13);
            // Every logarithm of ζI in the Cartan: (2π/3)(1,1,-2) + 2π(k₁,k₂,-k₁-k₂).
            let f = WeightFunctional::new(&phi);
            for k1 in -2i32..=2 {
                for k2 in -2i32..=2 {
                    let a = [
                        2.0 * PI / 3.0 + 2.0 * PI * k1 as f64,
                        2.0 * PI / 3.0 + 2.0 * PI * k2 as f64,
                        -4.0 * PI / 3.0 - 2.0 * PI * (k1 + k2) as f64,
                    ];
                    let cm = AlgebraElement::diagonal(&a).unwrap();
                    assert!((cm.exp().matrix() - zeta.matrix()).norm() < 1e-12);
                    let v = Complex64::from_polar(1.0, f.eval(cm.matrix()));
                    assert!((v - want).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn psi_rejects_non_central() {
        let rs = build_root_system(RootType::A, 1).unwrap();
        let rf = RealFormSpec::compact(&rs);
        let t = GroupElement::torus(&[0.4, -0.4]).unwrap();
        assert!(matches!(character_psi_on_center(&Weight::from_ints(&[1]), &rf, &t), Err(Error::NotCentral(_))));
    }

    #[test]
    fn central_adjoint_is_identity() {
        let zeta = &center_elements(3)[1];
        for i in 0..3 {
            for j in 0..3 {
                for (re, im) in [(1.0, 0.0), (0.0, 1.0)] {
                    if i == j && re != 0.0 {
                        continue;
                    }
                    let mut m = CMat::zeros(3, 3);
                    m[(i, j)] = c(re, im);
                    m[(j, i)] -= c(re, -im);
                    let a = AlgebraElement::project(&m);
                    let b = zeta.adjoint_action(&a).unwrap();
                    assert!((b.matrix() - a.matrix()).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn exp_log_roundtrip() {
        let mut s = Sampler::new(5);
        for n in 2..=4 {
            for _ in 0..30 {
                let a = s.algebra(n);
                let a = a.scale(3.0 / a.norm() * s.uniform(0.05, 1.0));
                let back = a.exp().log().unwrap();
                assert!((back.matrix() - a.matrix()).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn character_is_a_homomorphism() {
        let mut s = Sampler::new(6);
        let phi = Weight::from_ints(&[2, -1, 3]);
        for _ in 0..50 {
            let (t1, t2) = (s.torus(4), s.torus(4));
            let lhs = character_phi(&phi, &t1.mul(&t2).unwrap()).unwrap();
            let rhs = character_phi(&phi, &t1).unwrap() * character_phi(&phi, &t2).unwrap();
            assert!((lhs - rhs).norm() < 1e-10);
        }
    }
}
