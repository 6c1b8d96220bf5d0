//! Borel–Weil model of the line bundle `O(k)` on `CP¹ = SU(2)/T`.
//!
//! The section `zʲ` of the affine chart corresponds to the function
//! `g ↦ āᵏ⁻ʲ b̄ʲ` on `SU(2)`, where `(a, b)` is the first column of `g`. The
//! quantization operator of `M` is `Q_M s(g) = d/dt s(exp(−tM) g)` at `t = 0`,
//! extended complex-linearly to `sl(2, C)`. In the chart it is
//!
//! ```text
//! Q_M p = (M₁₂ + (M₂₂ − M₁₁) z − M₂₁ z²) p′ + k (M₁₁ + M₂₁ z) p.
//! ```

mod smooth;
mod uea;

use std::fmt;

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{Num, One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::matgroup::{bracket, check_dim, AlgebraElement, CMat};
use crate::rootdata::Weight;

pub use smooth::{curvature_identity_check, Poly4};
pub use uea::{Generator, Pbw, UeaElement, MAX_DEGREE, MAX_DEPTH, MAX_EXPONENT, MAX_TERMS};

/// Exact complex rationals.
pub type QComplex = Complex<BigRational>;

const FLOAT_ZERO: f64 = 1e-12;

/// Scalars admitted by the polynomial model.
pub trait Coeff: Clone + PartialEq + fmt::Debug + Num {
    fn from_int(n: i64) -> Self;
    fn to_c64(&self) -> Complex64;
    /// Zero for exact scalars; below `1e−12·scale` for floating point.
    fn negligible(&self, scale: f64) -> bool;
}

impl Coeff for Complex64 {
    fn from_int(n: i64) -> Self {
        Complex64::new(n as f64, 0.0)
    }
    fn to_c64(&self) -> Complex64 {
        *self
    }
    fn negligible(&self, scale: f64) -> bool {
        self.norm() <= FLOAT_ZERO * scale.max(1.0)
    }
}

impl Coeff for QComplex {
    fn from_int(n: i64) -> Self {
        Complex::new(BigRational::from_integer(BigInt::from(n)), BigRational::zero())
    }
    fn to_c64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64().unwrap_or(f64::NAN), self.im.to_f64().unwrap_or(f64::NAN))
    }
    fn negligible(&self, _scale: f64) -> bool {
        self.is_zero()
    }
}

/// A polynomial of degree at most `k` in the chart coordinate `z`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolySection<S: Coeff> {
    k: usize,
    coeffs: Vec<S>,
}

impl<S: Coeff> PolySection<S> {
    /// Coefficients of `1, z, …, zᵏ`; shorter inputs are padded with zeros.
    pub fn new(k: usize, mut coeffs: Vec<S>) -> Result<Self> {
        if coeffs.len() > k + 1 {
            return Err(Error::DimensionError { expected: k + 1, found: coeffs.len() });
        }
        coeffs.resize(k + 1, S::zero());
        Ok(PolySection { k, coeffs })
    }

    pub fn monomial(k: usize, j: usize) -> Self {
        let mut coeffs = vec![S::zero(); k + 1];
        coeffs[j] = S::one();
        PolySection { k, coeffs }
    }

    pub fn degree_bound(&self) -> usize {
        self.k
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    /// Dimension of the section space, `k + 1`.
    pub fn space_dim(&self) -> usize {
        self.k + 1
    }
}

/// `p ↦ v(z)·p′ + w(z)·p` with polynomial coefficients `v`, `w`.
#[derive(Debug, Clone, PartialEq)]
pub struct FirstOrderOp<S: Coeff> {
    k: usize,
    vectorfield: Vec<S>,
    zeroth: Vec<S>,
}

impl<S: Coeff> FirstOrderOp<S> {
    pub fn new(k: usize, vectorfield: Vec<S>, zeroth: Vec<S>) -> Self {
        FirstOrderOp { k, vectorfield, zeroth }
    }

    pub fn degree_bound(&self) -> usize {
        self.k
    }

    pub fn vectorfield_coeffs(&self) -> &[S] {
        &self.vectorfield
    }

    pub fn zeroth_coeffs(&self) -> &[S] {
        &self.zeroth
    }

    /// Applies the operator; fails if the image leaves degree `≤ k`.
    pub fn apply(&self, p: &PolySection<S>) -> Result<PolySection<S>> {
        check_dim(self.k, p.k)?;
        let len = self.k + self.vectorfield.len().max(self.zeroth.len()) + 1;
        let mut out = vec![S::zero(); len];
        let mut scale: f64 = 0.0;
        for (j, c) in p.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if j > 0 {
                let dj = c.clone() * S::from_int(j as i64);
                for (i, v) in self.vectorfield.iter().enumerate() {
                    let t = dj.clone() * v.clone();
                    scale = scale.max(t.to_c64().norm());
                    out[j - 1 + i] = out[j - 1 + i].clone() + t;
                }
            }
            for (i, w) in self.zeroth.iter().enumerate() {
                let t = c.clone() * w.clone();
                scale = scale.max(t.to_c64().norm());
                out[j + i] = out[j + i].clone() + t;
            }
        }
        for (d, c) in out.iter().enumerate().skip(self.k + 1) {
            if !c.negligible(scale) {
                return Err(Error::ClosureError(format!("coefficient of z^{d} is {:?}", c.to_c64())));
            }
        }
        out.truncate(self.k + 1);
        Ok(PolySection { k: self.k, coeffs: out })
    }

    /// Matrix on the monomial basis `1, z, …, zᵏ` (column `j` is the image of `zʲ`).
    pub fn matrix(&self) -> Result<SqMat<S>> {
        let n = self.k + 1;
        let mut m = SqMat::zeros(n);
        for j in 0..n {
            let img = self.apply(&PolySection::monomial(self.k, j))?;
            for (i, c) in img.coeffs.into_iter().enumerate() {
                m.set(i, j, c);
            }
        }
        Ok(m)
    }
}

/// Dense square matrix over a [`Coeff`] scalar.
#[derive(Debug, Clone, PartialEq)]
pub struct SqMat<S: Coeff> {
    n: usize,
    data: Vec<S>,
}

impl<S: Coeff> SqMat<S> {
    pub fn zeros(n: usize) -> Self {
        SqMat { n, data: vec![S::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i, S::one());
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: S) {
        self.data[i * self.n + j] = v;
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for l in 0..n {
                let a = self.get(i, l);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = other.get(l, j);
                    if !b.is_zero() {
                        let v = out.get(i, j).clone() + a.clone() * b.clone();
                        out.set(i, j, v);
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a.clone() + b.clone()).collect();
        SqMat { n: self.n, data }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a.clone() - b.clone()).collect();
        SqMat { n: self.n, data }
    }

    pub fn scale(&self, s: &S) -> Self {
        SqMat { n: self.n, data: self.data.iter().map(|a| a.clone() * s.clone()).collect() }
    }

    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn to_cmat(&self) -> CMat {
        CMat::from_fn(self.n, self.n, |i, j| self.get(i, j).to_c64())
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|c| c.to_c64().norm()).fold(0.0, f64::max)
    }
}

/// The weight `k` of an `SU(2)` weight, which must be a nonnegative integer.
pub fn weight_degree(phi: &Weight) -> Result<usize> {
    check_dim(1, phi.rank())?;
    let c = phi.int_coords().ok_or_else(|| Error::NotIntegral(phi.to_string()))?;
    usize::try_from(c[0]).map_err(|_| Error::InvalidElement(format!("weight {phi} is not dominant")))
}

/// `Q_M` for a 2×2 matrix given by entries, over any scalar.
pub fn q_op_from_entries<S: Coeff>(k: usize, m: [[S; 2]; 2]) -> FirstOrderOp<S> {
    let [[m11, m12], [m21, m22]] = m;
    let kk = S::from_int(k as i64);
    let vf = vec![m12, m22 - m11.clone(), S::zero() - m21.clone()];
    let zeroth = vec![kk.clone() * m11, kk * m21];
    FirstOrderOp::new(k, vf, zeroth)
}

/// `Q_A` for `A ∈ sl(2, C)` (in particular `su(2)`), with the closure check
/// applied to every basis monomial.
pub fn build_q_op(phi: &Weight, a: &CMat) -> Result<FirstOrderOp<Complex64>> {
    let k = weight_degree(phi)?;
    if a.nrows() != 2 || a.ncols() != 2 {
        return Err(Error::UnsupportedDimension(a.nrows()));
    }
    let op = q_op_from_entries(k, [[a[(0, 0)], a[(0, 1)]], [a[(1, 0)], a[(1, 1)]]]);
    op.matrix()?;
    Ok(op)
}

/// Exact operators for the `sl₂` triple `E`, `F`, `H`.
pub fn sl2_op(k: usize, g: Generator) -> FirstOrderOp<QComplex> {
    let z = QComplex::zero;
    let o = QComplex::one;
    let m = match g {
        Generator::E => [[z(), o()], [z(), z()]],
        Generator::F => [[z(), z()], [o(), z()]],
        Generator::H => [[o(), z()], [z(), QComplex::zero() - o()]],
    };
    q_op_from_entries(k, m)
}

/// `max |[Q_A, Q_C] − Q_{[A,C]}|` over matrix entries.
pub fn representation_residual(phi: &Weight, a: &AlgebraElement, c: &AlgebraElement) -> Result<f64> {
    let qa = build_q_op(phi, a.matrix())?.matrix()?;
    let qc = build_q_op(phi, c.matrix())?.matrix()?;
    let qac = build_q_op(phi, bracket(a, c)?.matrix())?.matrix()?;
    Ok(qa.commutator(&qc).sub(&qac).max_abs())
}

/// Exact action of `J` on the section space.
pub fn apply_uea_exact(phi: &Weight, j: &UeaElement) -> Result<SqMat<QComplex>> {
    let k = weight_degree(phi)?;
    let n = k + 1;
    let e = sl2_op(k, Generator::E).matrix()?;
    let f = sl2_op(k, Generator::F).matrix()?;
    let h = sl2_op(k, Generator::H).matrix()?;
    let pow = |m: &SqMat<QComplex>, p: u32| (0..p).fold(SqMat::identity(n), |acc, _| acc.mul(m));
    let mut out = SqMat::zeros(n);
    for (w, coef) in j.terms() {
        let term = pow(&f, w.f).mul(&pow(&h, w.h)).mul(&pow(&e, w.e));
        out = out.add(&term.scale(coef));
    }
    Ok(out)
}

/// Action of `J` on the section space as a floating-point matrix.
pub fn apply_uea(phi: &Weight, j: &UeaElement) -> Result<CMat> {
    Ok(apply_uea_exact(phi, j)?.to_cmat())
}

/// `γ(J) = τ(J̃)` as a polynomial in `λ(H)`, lowest degree first. `J̃` keeps the
/// PBW terms without `E` (for central `J` these are pure powers of `H`) and
/// `τ(H) = H − ρ(H)` with `ρ(H) = 1`.
pub fn harish_chandra_polynomial(j: &UeaElement) -> Result<Vec<QComplex>> {
    if !j.is_central()? {
        return Err(Error::NotCentral(format!("{j} does not commute with E, F, H")));
    }
    let mut jt: Vec<QComplex> = Vec::new();
    for (w, c) in j.terms() {
        if w.e == 0 {
            // weight zero forces w.f = 0 as well
            let d = w.h as usize;
            if jt.len() <= d {
                jt.resize(d + 1, QComplex::zero());
            }
            jt[d] = jt[d].clone() + c.clone();
        }
    }
    // Substitute H → x − 1.
    let mut out = vec![QComplex::zero(); jt.len()];
    let mut power = vec![QComplex::one()];
    for c in &jt {
        for (i, p) in power.iter().enumerate() {
            out[i] = out[i].clone() + c.clone() * p.clone();
        }
        let mut next = vec![QComplex::zero(); power.len() + 1];
        for (i, p) in power.iter().enumerate() {
            next[i + 1] = next[i + 1].clone() + p.clone();
            next[i] = next[i].clone() - p.clone();
        }
        power = next;
    }
    Ok(out)
}

/// Evaluates a polynomial in `λ(H)` at `x`.
pub fn eval_poly(p: &[QComplex], x: &QComplex) -> QComplex {
    p.iter().rev().fold(QComplex::zero(), |acc, c| acc * x.clone() + c.clone())
}

/// `χ(J) = γ(J)(ψ + ρ)` with `(ψ + ρ)(H) = k + 1`, exactly.
pub fn harish_chandra_eval_exact(phi: &Weight, j: &UeaElement) -> Result<QComplex> {
    let k = weight_degree(phi)?;
    let p = harish_chandra_polynomial(j)?;
    Ok(eval_poly(&p, &QComplex::from_int(k as i64 + 1)))
}

pub fn harish_chandra_eval(phi: &Weight, j: &UeaElement) -> Result<Complex64> {
    Ok(harish_chandra_eval_exact(phi, j)?.to_c64())
}

/// `‖M − (tr M/n)·I‖` over matrix entries, with the scalar `tr M/n`.
pub fn off_scalar_residual(m: &CMat) -> (Complex64, f64) {
    let n = m.nrows();
    let s = m.trace() / Complex64::new(n as f64, 0.0);
    let r = (m - CMat::identity(n, n) * s).iter().map(|z| z.norm()).fold(0.0, f64::max);
    (s, r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matgroup::GroupElement;
    use crate::sample::Sampler;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// `s(g) = Σ cⱼ āᵏ⁻ʲ b̄ʲ`.
    fn section_value(coeffs: &[Complex64], g: &CMat) -> Complex64 {
        let k = coeffs.len() - 1;
        let (u, v) = (g[(0, 0)].conj(), g[(1, 0)].conj());
        coeffs.iter().enumerate().map(|(j, cj)| cj * u.powu((k - j) as u32) * v.powu(j as u32)).sum()
    }

    #[test]
    fn diagonal_generator_eigenvalues() {
        for k in 0..=6usize {
            let phi = Weight::from_ints(&[k as i64]);
            let h = AlgebraElement::diagonal(&[1.0, -1.0]).unwrap();
            let m = build_q_op(&phi, h.matrix()).unwrap().matrix().unwrap().to_cmat();
            for j in 0..=k {
                assert!((m[(j, j)] - c(0.0, (k as f64) - 2.0 * j as f64)).norm() < 1e-15);
            }
            let (_, off) = off_scalar_residual(&(m.clone() - CMat::from_diagonal(&m.diagonal())));
            assert!(off < 1e-15);
        }
    }

    #[test]
    fn zero_generator_is_zero_operator() {
        let phi = Weight::from_ints(&[4]);
        let m = build_q_op(&phi, &CMat::zeros(2, 2)).unwrap().matrix().unwrap();
        assert_eq!(m.max_abs(), 0.0);
    }

    #[test]
    fn chart_operator_matches_finite_differences() {
        let mut s = Sampler::new(41);
        let t = 1e-6;
        for k in [1usize, 3, 5] {
            let phi = Weight::from_ints(&[k as i64]);
            let coeffs: Vec<Complex64> = (0..=k).map(|_| c(s.uniform(-1., 1.), s.uniform(-1., 1.))).collect();
            let p = PolySection::new(k, coeffs.clone()).unwrap();
            for _ in 0..5 {
                let a = s.algebra(2);
                let g = s.group(2);
                let q = build_q_op(&phi, a.matrix()).unwrap().apply(&p).unwrap();
                let exact = section_value(q.coeffs(), g.matrix());
                let plus = a.scale(-t).exp().matrix() * g.matrix();
                let minus = a.scale(t).exp().matrix() * g.matrix();
                let fd = (section_value(&coeffs, &plus) - section_value(&coeffs, &minus)) / (2.0 * t);
                assert!((fd - exact).norm() < 1e-7 * (1.0 + exact.norm()), "k={k}: {fd} vs {exact}");
            }
        }
    }

    #[test]
    fn section_model_is_equivariant() {
        let mut s = Sampler::new(42);
        let g = s.group(2);
        let theta = 0.37;
        let t = GroupElement::torus(&[theta, -theta]).unwrap();
        let coeffs = vec![c(1.0, 0.5), c(-0.3, 0.2), c(0.0, 1.0), c(2.0, 0.0)];
        let lhs = section_value(&coeffs, &(g.matrix() * t.matrix()));
        let rhs = section_value(&coeffs, g.matrix()) * Complex64::from_polar(1.0, -3.0 * theta);
        assert!((lhs - rhs).norm() < 1e-13);
    }

    #[test]
    fn representation_property() {
        let mut s = Sampler::new(43);
        for k in 0..=6 {
            let phi = Weight::from_ints(&[k]);
            for _ in 0..20 {
                let r = representation_residual(&phi, &s.algebra(2), &s.algebra(2)).unwrap();
                assert!(r < 1e-10);
            }
        }
    }

    #[test]
    fn sl2_relations_exact() {
        for k in 0..=6 {
            let e = sl2_op(k, Generator::E).matrix().unwrap();
            let f = sl2_op(k, Generator::F).matrix().unwrap();
            let h = sl2_op(k, Generator::H).matrix().unwrap();
            assert_eq!(h.commutator(&e), e.scale(&QComplex::from_int(2)));
            assert_eq!(h.commutator(&f), f.scale(&QComplex::from_int(-2)));
            assert_eq!(e.commutator(&f), h);
        }
    }

    #[test]
    fn closure_guard_fires_on_foreign_operator() {
        let op = FirstOrderOp::new(2, vec![c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)], vec![c(0.0, 0.0)]);
        assert!(matches!(op.matrix(), Err(Error::ClosureError(_))));
    }

    #[test]
    fn extreme_monomial_carries_the_weight() {
        let mut s = Sampler::new(44);
        for k in 0..=6 {
            let phi = Weight::from_ints(&[k]);
            let cdiag = s.diagonal_algebra(2);
            let m = build_q_op(&phi, cdiag.matrix()).unwrap().matrix().unwrap().to_cmat();
            let phi_c = crate::matgroup::WeightFunctional::new(&phi).eval(cdiag.matrix());
            assert!((m[(0, 0)] - c(0.0, phi_c)).norm() < 1e-14);
        }
    }

    #[test]
    fn casimir_is_scalar_and_matches_harish_chandra() {
        let cas: UeaElement = "E*F + F*E + 1/2*H^2".parse().unwrap();
        for k in 0..=8i64 {
            let phi = Weight::from_ints(&[k]);
            let m = apply_uea_exact(&phi, &cas).unwrap();
            let expect =
                QComplex::new(BigRational::new(BigInt::from(k * k + 2 * k), BigInt::from(2)), BigRational::zero());
            assert_eq!(m, SqMat::identity(k as usize + 1).scale(&expect));
            assert_eq!(harish_chandra_eval_exact(&phi, &cas).unwrap(), expect);
        }
    }

    #[test]
    fn harish_chandra_trivial_cases() {
        let one = UeaElement::one();
        let phi = Weight::from_ints(&[3]);
        assert_eq!(harish_chandra_eval(&phi, &one).unwrap(), c(1.0, 0.0));
        assert_eq!(apply_uea(&phi, &one).unwrap(), CMat::identity(4, 4));
        let h: UeaElement = "H".parse().unwrap();
        assert!(matches!(harish_chandra_eval(&phi, &h), Err(Error::NotCentral(_))));
        let ih: UeaElement = "i*H".parse().unwrap();
        let m = apply_uea(&phi, &ih).unwrap();
        for j in 0..4 {
            assert_eq!(m[(j, j)], c(0.0, 3.0 - 2.0 * j as f64));
        }
    }

    #[test]
    fn harish_chandra_image_is_weyl_invariant() {
        let cas: UeaElement = "E*F + F*E + 1/2*H^2".parse().unwrap();
        let sq = cas.mul(&cas).unwrap();
        for j in [cas, sq] {
            let p = harish_chandra_polynomial(&j).unwrap();
            for x in -4i64..=4 {
                let (a, b) = (QComplex::from_int(x), QComplex::from_int(-x));
                assert_eq!(eval_poly(&p, &a), eval_poly(&p, &b));
            }
        }
    }
}
