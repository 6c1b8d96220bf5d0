//! Matrix exponential and principal logarithm.

use num_complex::Complex64;

use crate::error::{Error, Result};

use super::CMat;

/// Scaling-and-squaring Padé exponential.
pub fn expm(a: &CMat) -> CMat {
    a.exp()
}

/// Principal matrix logarithm by inverse scaling and squaring.
///
/// Square roots are taken with the Denman–Beavers iteration until
/// `‖X − I‖₁ ≤ 0.1`, then `log(I + Y)` is evaluated with an 8-point
/// Gauss–Legendre rule (the diagonal Padé approximant in partial fractions).
/// Fails when an eigenvalue sits on the closed negative real axis.
pub fn logm(a: &CMat) -> Result<CMat> {
    let n = a.nrows();
    if n != a.ncols() {
        return Err(Error::DimensionError { expected: n, found: a.ncols() });
    }
    let id = CMat::identity(n, n);
    let mut x = a.clone();
    let mut squarings = 0u32;
    while norm1(&(&x - &id)) > 0.1 {
        if squarings >= 64 {
            return Err(Error::InvalidElement("logarithm: square roots do not converge".into()));
        }
        x = sqrtm(&x)?;
        squarings += 1;
    }
    let y = &x - &id;
    let mut acc = CMat::zeros(n, n);
    for (node, weight) in gauss_legendre_01(8) {
        let m = &id + &y * Complex64::new(node, 0.0);
        let inv =
            m.try_inverse().ok_or_else(|| Error::InvalidElement("logarithm: singular Padé denominator".into()))?;
        acc += &y * inv * Complex64::new(weight, 0.0);
    }
    Ok(acc * Complex64::new(2f64.powi(squarings as i32), 0.0))
}

/// Principal square root by the Denman–Beavers iteration.
pub fn sqrtm(a: &CMat) -> Result<CMat> {
    let n = a.nrows();
    let mut y = a.clone();
    let mut z = CMat::identity(n, n);
    let half = Complex64::new(0.5, 0.0);
    for _ in 0..100 {
        let yi = y.clone().try_inverse();
        let zi = z.clone().try_inverse();
        let (Some(yi), Some(zi)) = (yi, zi) else {
            return Err(Error::InvalidElement("square root: matrix is singular".into()));
        };
        let y_next = (&y + zi) * half;
        let z_next = (&z + yi) * half;
        let delta = (&y_next - &y).norm();
        y = y_next;
        z = z_next;
        if delta <= 1e-15 * y.norm().max(1.0) {
            return Ok(y);
        }
    }
    if y.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidElement("square root diverged".into()));
    }
    // Denman–Beavers stalls at rounding level; accept the last iterate if it is a root.
    let resid = (&y * &y - a).norm() / a.norm().max(1.0);
    if resid < 1e-10 {
        Ok(y)
    } else {
        Err(Error::InvalidElement("square root: eigenvalue on the negative real axis".into()))
    }
}

fn norm1(m: &CMat) -> f64 {
    (0..m.ncols()).map(|j| m.column(j).iter().map(|v| v.norm()).sum::<f64>()).fold(0.0, f64::max)
}

/// Nodes and weights of the `m`-point Gauss–Legendre rule on `[0, 1]`.
pub(crate) fn gauss_legendre_01(m: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(m);
    for i in 0..m {
        // Chebyshev initial guess, then Newton on P_m.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=m {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = m as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out.push(((1.0 - x) / 2.0, w / 2.0));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let rule = gauss_legendre_01(8);
        let total: f64 = rule.iter().map(|(_, w)| w).sum();
        assert!((total - 1.0).abs() < 1e-14);
        // ∫₀¹ x^15 dx = 1/16, exact for 8 points.
        let v: f64 = rule.iter().map(|(x, w)| w * x.powi(15)).sum();
        assert!((v - 1.0 / 16.0).abs() < 1e-14);
    }

    #[test]
    fn log_of_diagonal() {
        let d = CMat::from_diagonal(&nalgebra::DVector::from_vec(vec![
            Complex64::from_polar(1.0, 2.0),
            Complex64::from_polar(1.0, -1.5),
            Complex64::new(3.0, 0.0),
        ]));
        let l = logm(&d).unwrap();
        assert!((l[(0, 0)] - Complex64::new(0.0, 2.0)).norm() < 1e-12);
        assert!((l[(1, 1)] - Complex64::new(0.0, -1.5)).norm() < 1e-12);
        assert!((l[(2, 2)] - Complex64::new(3f64.ln(), 0.0)).norm() < 1e-12);
        assert!(l[(0, 1)].norm() < 1e-14);
    }

    #[test]
    fn log_rejects_negative_eigenvalue() {
        let m = -CMat::identity(2, 2);
        assert!(logm(&m).is_err());
    }
}
