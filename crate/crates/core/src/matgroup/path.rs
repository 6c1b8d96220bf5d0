use crate::error::{Error, Result};

use super::{check_dim, AlgebraElement, CMat, GroupElement};
use num_complex::Complex64;

/// One piece `τ ↦ exp(τ B)` of a piecewise-exponential path.
#[derive(Debug, Clone, PartialEq)]
pub struct Segment {
    pub generator: AlgebraElement,
    pub duration: f64,
}

/// A path `g_t` in `SU(n)` from the identity, built by left-multiplying
/// `exp(τ Bᵢ)` for each segment in turn. On segment `i` the right velocity
/// `ġ g⁻¹` is exactly `Bᵢ`.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewisePath {
    segments: Vec<Segment>,
    starts: Vec<f64>,
    prefix: Vec<CMat>,
}

impl PiecewisePath {
    pub fn new(segments: Vec<Segment>) -> Result<Self> {
        let first = segments.first().ok_or_else(|| Error::InvalidElement("path needs at least one segment".into()))?;
        let n = first.generator.dim();
        let mut total = 0.0;
        for s in &segments {
            check_dim(n, s.generator.dim())?;
            if !(s.duration > 0.0 && s.duration.is_finite()) {
                return Err(Error::InvalidElement(format!("segment duration {} is not positive", s.duration)));
            }
            total += s.duration;
        }
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidElement(format!("segment durations sum to {total}, not 1")));
        }
        let mut starts = Vec::with_capacity(segments.len());
        let mut prefix = Vec::with_capacity(segments.len() + 1);
        let mut t = 0.0;
        let mut g = CMat::identity(n, n);
        for s in &segments {
            starts.push(t);
            prefix.push(g.clone());
            g = (s.generator.matrix() * Complex64::new(s.duration, 0.0)).exp() * g;
            t += s.duration;
        }
        prefix.push(g);
        Ok(PiecewisePath { segments, starts, prefix })
    }

    /// `exp(t A)` for `t ∈ [0, 1]`.
    pub fn one_parameter(generator: AlgebraElement) -> Self {
        Self::new(vec![Segment { generator, duration: 1.0 }]).expect("single unit segment is valid")
    }

    pub fn constant(n: usize) -> Self {
        Self::one_parameter(AlgebraElement::zero(n))
    }

    pub fn dim(&self) -> usize {
        self.segments[0].generator.dim()
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    /// Start time of each segment.
    pub fn breakpoints(&self) -> &[f64] {
        &self.starts
    }

    /// Segment index and local time. Velocities are right-continuous: at a
    /// breakpoint the later segment is used.
    pub fn locate(&self, t: f64) -> Result<(usize, f64)> {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::RangeError(t));
        }
        let idx = self.starts.iter().rposition(|&s| s <= t).unwrap_or(0);
        let local = (t - self.starts[idx]).clamp(0.0, self.segments[idx].duration);
        Ok((idx, local))
    }

    /// `g_t`.
    pub fn point(&self, t: f64) -> Result<GroupElement> {
        let (i, tau) = self.locate(t)?;
        Ok(GroupElement::from_matrix_unchecked(self.point_in_segment(i, tau)))
    }

    /// `g` at local time `tau` of segment `i`.
    pub fn point_in_segment(&self, i: usize, tau: f64) -> CMat {
        (self.segments[i].generator.matrix() * Complex64::new(tau, 0.0)).exp() * &self.prefix[i]
    }

    /// `A_t = ġ_t g_t⁻¹`, exact on each segment.
    pub fn velocity(&self, t: f64) -> Result<AlgebraElement> {
        let (i, _) = self.locate(t)?;
        Ok(self.segments[i].generator.clone())
    }

    /// `g₁`.
    pub fn endpoint(&self) -> GroupElement {
        GroupElement::from_matrix_unchecked(self.prefix[self.segments.len()].clone())
    }
}

/// `g_t`.
pub fn path_point(p: &PiecewisePath, t: f64) -> Result<GroupElement> {
    p.point(t)
}

/// `A_t = ġ_t g_t⁻¹`.
pub fn path_velocity(p: &PiecewisePath, t: f64) -> Result<AlgebraElement> {
    p.velocity(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample::Sampler;

    #[test]
    fn starts_at_identity() {
        let mut s = Sampler::new(11);
        let p = PiecewisePath::one_parameter(s.algebra(3));
        assert!((p.point(0.0).unwrap().matrix() - CMat::identity(3, 3)).norm() < 1e-15);
    }

    #[test]
    fn single_segment_velocity() {
        let mut s = Sampler::new(12);
        let a = s.algebra(2);
        let p = PiecewisePath::one_parameter(a.clone());
        for t in [0.0, 0.3, 0.99, 1.0] {
            assert_eq!(path_velocity(&p, t).unwrap(), a);
        }
        assert!(matches!(p.point(1.5), Err(Error::RangeError(_))));
        assert!(matches!(p.velocity(-0.1), Err(Error::RangeError(_))));
    }

    #[test]
    fn two_segment_velocity_matches_finite_differences() {
        let mut s = Sampler::new(13);
        let (a, b) = (s.algebra(3), s.algebra(3));
        let p = PiecewisePath::new(vec![
            Segment { generator: a.clone(), duration: 0.4 },
            Segment { generator: b.clone(), duration: 0.6 },
        ])
        .unwrap();
        let mut prev = f64::INFINITY;
        for h in [1e-3, 5e-4, 2.5e-4] {
            let t = 0.7;
            let g = p.point(t).unwrap();
            let gh = p.point(t + h).unwrap();
            let fd = (gh.matrix() * g.inverse().matrix() - CMat::identity(3, 3)) / Complex64::new(h, 0.0);
            let err = (fd - b.matrix()).norm();
            assert!(err < prev, "finite difference error should shrink with h");
            assert!(err < 5.0 * h * b.norm().powi(2));
            prev = err;
        }
        assert_eq!(p.velocity(0.2).unwrap(), a);
        assert_eq!(p.velocity(0.4).unwrap(), b);
        let end = (b.matrix() * Complex64::new(0.6, 0.0)).exp() * (a.matrix() * Complex64::new(0.4, 0.0)).exp();
        assert!((p.endpoint().matrix() - &end).norm() < 1e-13);
        assert!((p.point(1.0).unwrap().matrix() - end).norm() < 1e-13);
    }

    #[test]
    fn durations_must_sum_to_one() {
        let a = AlgebraElement::zero(2);
        assert!(PiecewisePath::new(vec![Segment { generator: a.clone(), duration: 0.5 }]).is_err());
        assert!(PiecewisePath::new(vec![Segment { generator: a, duration: -1.0 }]).is_err());
        assert!(PiecewisePath::new(vec![]).is_err());
    }
}
