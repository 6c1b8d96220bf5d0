//! Smooth functions on `SU(2)` that are polynomial in the first column.
//!
//! Variables are `(a, b, ā, b̄)`. The left-invariant derivative
//! `R_A s(g) = d/dt s(exp(tA) g)` acts by `δx = A x`, `δx̄ = Ā x̄`, and the
//! Hamiltonian term `F_A = i h_A` is multiplication by `k·x†Ax`. With
//! `∇_A = R_A + F_A` the curvature identity reads
//! `∇_A∇_C − ∇_C∇_A + ∇_{[A,C]} = −F_{[A,C]}`.

use std::collections::BTreeMap;

use num_complex::Complex64;

use super::weight_degree;
use crate::error::Result;
use crate::matgroup::{bracket, check_dim, AlgebraElement, CMat};
use crate::rootdata::Weight;

type Exp = [u32; 4];

/// A polynomial in `(a, b, ā, b̄)` with complex coefficients.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Poly4 {
    terms: BTreeMap<Exp, Complex64>,
}

impl Poly4 {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(e: Exp, c: Complex64) -> Self {
        let mut p = Self::zero();
        p.push(e, c);
        p
    }

    /// `āᵏ⁻ʲ b̄ʲ`, the function attached to the chart monomial `zʲ`.
    pub fn section(k: u32, j: u32) -> Self {
        Self::monomial([0, 0, k - j, j], Complex64::new(1.0, 0.0))
    }

    fn var(i: usize) -> Self {
        let mut e = [0; 4];
        e[i] = 1;
        Self::monomial(e, Complex64::new(1.0, 0.0))
    }

    fn push(&mut self, e: Exp, c: Complex64) {
        if c == Complex64::new(0.0, 0.0) {
            return;
        }
        *self.terms.entry(e).or_insert(Complex64::new(0.0, 0.0)) += c;
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.push(*e, *c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Poly4 { terms: self.terms.iter().map(|(e, c)| (*e, c * s)).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                out.push([e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2], e1[3] + e2[3]], c1 * c2);
            }
        }
        out
    }

    /// Applies the derivation sending variable `i` to `images[i]`.
    fn derive(&self, images: &[Poly4; 4]) -> Self {
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            for i in 0..4 {
                if e[i] == 0 {
                    continue;
                }
                let mut lower = *e;
                lower[i] -= 1;
                let coef = c * e[i] as f64;
                out = out.add(&Poly4::monomial(lower, coef).mul(&images[i]));
            }
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

/// `(A x)_row` or `(Ā x̄)_row` as a polynomial.
fn linear(m: &CMat, row: usize, conj: bool) -> Poly4 {
    let off = if conj { 2 } else { 0 };
    let entry = |c: usize| if conj { m[(row, c)].conj() } else { m[(row, c)] };
    Poly4::var(off).scale(entry(0)).add(&Poly4::var(off + 1).scale(entry(1)))
}

/// `R_A`.
pub fn r_op(a: &CMat, p: &Poly4) -> Poly4 {
    p.derive(&[linear(a, 0, false), linear(a, 1, false), linear(a, 0, true), linear(a, 1, true)])
}

/// Multiplier of `F_A`: `k·x†Ax`.
pub fn f_multiplier(k: u32, a: &CMat) -> Poly4 {
    let xa0 = Poly4::var(2).mul(&linear(a, 0, false));
    let xa1 = Poly4::var(3).mul(&linear(a, 1, false));
    xa0.add(&xa1).scale(Complex64::new(k as f64, 0.0))
}

fn nabla(k: u32, a: &CMat, p: &Poly4) -> Poly4 {
    r_op(a, p).add(&f_multiplier(k, a).mul(p))
}

/// Largest coefficient of `∇_A∇_C s − ∇_C∇_A s + ∇_{[A,C]} s + F_{[A,C]} s`
/// over the sections `s = āᵏ⁻ʲb̄ʲ`.
pub fn curvature_identity_check(phi: &Weight, a: &AlgebraElement, c: &AlgebraElement) -> Result<f64> {
    let k = weight_degree(phi)? as u32;
    check_dim(2, a.dim())?;
    let ac = bracket(a, c)?;
    let (am, cm, acm) = (a.matrix(), c.matrix(), ac.matrix());
    let mut worst: f64 = 0.0;
    for j in 0..=k {
        let s = Poly4::section(k, j);
        let lhs = nabla(k, am, &nabla(k, cm, &s)).sub(&nabla(k, cm, &nabla(k, am, &s))).add(&nabla(k, acm, &s));
        let rhs = f_multiplier(k, acm).mul(&s).scale(Complex64::new(-1.0, 0.0));
        worst = worst.max(lhs.sub(&rhs).max_abs());
    }
    Ok(worst)
}
