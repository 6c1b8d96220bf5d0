//! Standard loops with central endpoints, shared by tests, the invariant suite
//! and the command-line tool.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::Result;
use crate::matgroup::{AlgebraElement, CMat, GroupElement, PiecewisePath, Segment};
use crate::orbit::OrbitPoint;
use crate::sample::Sampler;
use crate::transport::{Cap, Lift, LoopSpec};

/// `diag(iπ, −iπ)`, whose exponential is `−I`.
pub fn half_turn() -> AlgebraElement {
    AlgebraElement::diagonal(&[PI, -PI]).expect("traceless")
}

/// `(2πi/3)·diag(1, 1, −2)`, whose exponential is `ζI`, `ζ = e^{2πi/3}`.
pub fn su3_center_generator() -> AlgebraElement {
    AlgebraElement::diagonal(&[2.0 * PI / 3.0, 2.0 * PI / 3.0, -4.0 * PI / 3.0]).expect("traceless")
}

/// A fixed non-diagonal element of `SU(2)` whose conjugate of the half turn
/// keeps the curve away from `[0:1]`.
pub fn default_conjugator() -> GroupElement {
    let c = |re, im| Complex64::new(re, im);
    let a = CMat::from_row_slice(2, 2, &[c(0.0, 0.3), c(0.4, 0.2), c(-0.4, 0.2), c(0.0, -0.3)]);
    AlgebraElement::new(a).expect("skew-Hermitian").exp()
}

/// `exp(t·diag(iπ, −iπ))` at the base point, which it fixes.
pub fn fixed_point_loop() -> LoopSpec {
    LoopSpec::new(PiecewisePath::one_parameter(half_turn()), OrbitPoint::base(2), Cap::FixedPoint)
        .with_lift(Lift::Constant)
}

/// `u·exp(t·diag(iπ, −iπ))·u⁻¹` at the base point: a circle on `CP¹` ending at `−I`.
pub fn conjugated_loop(u: &GroupElement) -> Result<LoopSpec> {
    let gen = u.adjoint_action(&half_turn())?;
    Ok(LoopSpec::new(PiecewisePath::one_parameter(gen), OrbitPoint::base(2), Cap::SphericalCap).with_lift(Lift::Chart))
}

/// `u·exp(tL)·u⁻¹` in `SU(3)` ending at `ζI`, lifted by `g_t g̃₀ exp(f(t)L)` with
/// `f(t) = −t + 0.3 sin 2πt`.
pub fn su3_center_loop(u: &GroupElement, base: OrbitPoint) -> Result<LoopSpec> {
    let l = su3_center_generator();
    let gen = u.adjoint_action(&l)?;
    Ok(LoopSpec::new(PiecewisePath::one_parameter(gen), base, Cap::HolonomyDefined).with_lift(Lift::Gauged {
        direction: l,
        slope: -1.0,
        amplitude: 0.3,
        frequency: 1.0,
    }))
}

/// A diagonal gauge with random parameters.
pub fn random_gauge(s: &mut Sampler, n: usize) -> Lift {
    Lift::Gauged {
        direction: s.diagonal_algebra(n),
        slope: s.uniform(-3.0, 3.0),
        amplitude: s.uniform(-1.0, 1.0),
        frequency: s.int(1, 3) as f64,
    }
}

/// `count` distinct piecewise paths in `SU(2)` from `I` to `−I`: one-parameter
/// half turns about random axes and two- or three-leg paths whose last leg
/// closes up at `−I`.
pub fn paths_to_minus_identity(s: &mut Sampler, count: usize) -> Result<Vec<PiecewisePath>> {
    let minus = -CMat::identity(2, 2);
    let mut out = Vec::with_capacity(count);
    for idx in 0..count {
        let path = match idx % 3 {
            0 => {
                let axis = s.algebra(2);
                // exp(π·X) = −I for X ∈ su(2) with eigenvalues ±i
                let x = axis.scale(1.0 / (axis.norm() / std::f64::consts::SQRT_2));
                PiecewisePath::one_parameter(x.scale(PI))
            }
            legs => {
                let durations: Vec<f64> = if legs == 1 { vec![0.4, 0.6] } else { vec![0.3, 0.3, 0.4] };
                let mut segs = Vec::new();
                let mut acc = CMat::identity(2, 2);
                for d in &durations[..durations.len() - 1] {
                    let b = s.algebra(2).scale(1.5);
                    acc = (b.matrix() * Complex64::new(*d, 0.0)).exp() * acc;
                    segs.push(Segment { generator: b, duration: *d });
                }
                let last = *durations.last().expect("nonempty");
                let close = GroupElement::new(&minus * acc.adjoint())?.log()?;
                segs.push(Segment { generator: close.scale(1.0 / last), duration: last });
                PiecewisePath::new(segs)?
            }
        };
        out.push(path);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn loops_end_at_the_center() {
        assert!((fixed_point_loop().path.endpoint().matrix() + CMat::identity(2, 2)).norm() < 1e-14);
        let c = conjugated_loop(&default_conjugator()).unwrap();
        assert!((c.path.endpoint().matrix() + CMat::identity(2, 2)).norm() < 1e-13);
        let mut s = Sampler::new(71);
        let l = su3_center_loop(&s.group(3), OrbitPoint::base(3)).unwrap();
        let zeta = Complex64::from_polar(1.0, 2.0 * PI / 3.0);
        assert!((l.path.endpoint().matrix() - CMat::identity(3, 3) * zeta).norm() < 1e-12);
        for p in paths_to_minus_identity(&mut s, 6).unwrap() {
            assert!((p.endpoint().matrix() + CMat::identity(2, 2)).norm() < 1e-10);
        }
    }
}
