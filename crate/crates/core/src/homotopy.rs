//! Lower bounds on `♯π₁` of diffeomorphism groups containing the `SU(n)` action,
//! read off the image of the center under the character.

use num_complex::Complex64;
use num_integer::Integer;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::json::complex_to_json;
use crate::matgroup::{center_elements, character_psi_on_center, check_dim};
use crate::rootdata::{build_root_system, is_regular, q_invariant, RealFormSpec, RootType, Weight};

const DISTINCT_TOL: f64 = 1e-9;

/// Hypotheses on the diffeomorphism group that the bound relies on and that
/// cannot be checked by machine.
pub const OBLIGATIONS: [&str; 2] = [
    "the Lie algebra of the group lies in the admissible space of vector fields on M",
    "the group contains the isotopies generated by the SU(n) action on M",
];

/// `♯{Ψ(g) : g ∈ Z(SU(n))}` together with the data it was computed from.
#[derive(Debug, Clone, PartialEq)]
pub struct Pi1Bound {
    pub group: String,
    pub weight: Weight,
    /// `None` when `φ + ρ` is singular.
    pub q: Option<usize>,
    pub bound: usize,
    pub image_values: Vec<Complex64>,
}

impl Pi1Bound {
    pub fn to_json(&self) -> Value {
        json!({
            "group": self.group,
            "weight": crate::rootdata::WeightJson::from(&self.weight),
            "q": self.q,
            "bound": self.bound,
            "image": self.image_values.iter().map(|z| complex_to_json(*z)).collect::<Vec<_>>(),
            "obligations": OBLIGATIONS,
        })
    }
}

/// Enumerates `Ψ` on `Z(SU(n))` and counts distinct values.
pub fn pi1_lower_bound(n: usize, phi: &Weight, rf: &RealFormSpec) -> Result<Pi1Bound> {
    if n < 2 {
        return Err(Error::UnsupportedDimension(n));
    }
    check_dim(n, phi.rank() + 1)?;
    if !phi.is_integral() {
        return Err(Error::NotIntegral(phi.to_string()));
    }
    check_dim(n * (n - 1) / 2, rf.compact_flags().len())?;
    let rs = build_root_system(RootType::A, n - 1)?;
    let q = if is_regular(&rs, phi)? { Some(q_invariant(&rs, phi, rf)?) } else { None };
    let mut image: Vec<Complex64> = Vec::new();
    for g in center_elements(n) {
        let v = character_psi_on_center(phi, rf, &g)?;
        if !image.iter().any(|w| (w - v).norm() < DISTINCT_TOL) {
            image.push(v);
        }
    }
    Ok(Pi1Bound { group: format!("SU({n})"), weight: phi.clone(), q, bound: image.len(), image_values: image })
}

/// `n / gcd(n, Σ j·mⱼ)` for fundamental coordinates `m₁, …, m_{n−1}`.
pub fn gcd_formula(n: usize, coords: &[i64]) -> usize {
    let n_i = n as i64;
    let s =
        coords.iter().enumerate().fold(0i64, |acc, (j, m)| (acc + (j as i64 + 1) * m.rem_euclid(n_i)).rem_euclid(n_i));
    (n_i / n_i.gcd(&s)) as usize
}

/// Comparison of the bound with a known value of `♯π₁`.
#[derive(Debug, Clone, PartialEq)]
pub struct KnownComparison {
    pub n: usize,
    pub bound: usize,
    pub known_order: Option<usize>,
    /// `bound ≤ known_order`, or `true` when nothing is known.
    pub consistent: bool,
    pub tight: Option<bool>,
    pub note: String,
}

impl KnownComparison {
    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "bound": self.bound,
            "known_order": self.known_order,
            "consistent": self.consistent,
            "tight": self.tight,
            "note": self.note,
        })
    }
}

/// Known orders: `π₁(Ham(CP¹)) ≅ Z/2`.
pub fn known_order(n: usize) -> Option<usize> {
    (n == 2).then_some(2)
}

pub fn consistency_vs_known(n: usize, phi: &Weight) -> Result<KnownComparison> {
    let rs = build_root_system(RootType::A, n.saturating_sub(1))?;
    let b = pi1_lower_bound(n, phi, &RealFormSpec::compact(&rs))?;
    let known = known_order(n);
    let (consistent, tight, note) = match known {
        Some(k) if b.bound == 1 => (true, Some(false), format!("bound 1 is vacuous; known order {k}")),
        Some(k) => (b.bound <= k, Some(b.bound == k), format!("Ham(CP1) has fundamental group of order {k}")),
        None => (true, None, "no exact value recorded".to_string()),
    };
    Ok(KnownComparison { n, bound: b.bound, known_order: known, consistent, tight, note })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample::Sampler;

    fn compact(n: usize) -> RealFormSpec {
        RealFormSpec::compact(&build_root_system(RootType::A, n - 1).unwrap())
    }

    #[test]
    fn su2_values() {
        let b = pi1_lower_bound(2, &Weight::from_ints(&[1]), &compact(2)).unwrap();
        assert_eq!(b.bound, 2);
        assert_eq!(b.q, Some(0));
        assert_eq!(pi1_lower_bound(2, &Weight::from_ints(&[2]), &compact(2)).unwrap().bound, 1);
        let c = consistency_vs_known(2, &Weight::from_ints(&[1])).unwrap();
        assert_eq!((c.bound, c.known_order, c.tight, c.consistent), (2, Some(2), Some(true), true));
        let c = consistency_vs_known(2, &Weight::from_ints(&[2])).unwrap();
        assert!(c.consistent && c.bound == 1);
        let c = consistency_vs_known(3, &Weight::from_ints(&[1, 0])).unwrap();
        assert_eq!((c.bound, c.known_order), (3, None));
    }

    #[test]
    fn su3_weight_one_two() {
        assert_eq!(pi1_lower_bound(3, &Weight::from_ints(&[1, 2]), &compact(3)).unwrap().bound, 3);
        assert_eq!(gcd_formula(3, &[1, 2]), 3);
    }

    #[test]
    fn injective_character_attains_center_order() {
        for n in 2..=7 {
            let mut c = vec![0; n - 1];
            c[0] = 1;
            assert_eq!(pi1_lower_bound(n, &Weight::from_ints(&c), &compact(n)).unwrap().bound, n);
        }
    }

    #[test]
    fn enumeration_matches_gcd_formula() {
        let mut s = Sampler::new(61);
        for n in 2..=12 {
            for _ in 0..20 {
                let w = s.weight(n - 1, -6, 6);
                let b = pi1_lower_bound(n, &w, &compact(n)).unwrap();
                assert_eq!(b.bound, gcd_formula(n, &w.int_coords().unwrap()), "n={n} {w}");
                assert_eq!(n % b.bound, 0);
            }
        }
    }

    #[test]
    fn non_integral_weight_rejected() {
        let w = Weight::new(RootType::A, vec![num_rational::BigRational::new(1.into(), 2.into())]);
        assert!(matches!(pi1_lower_bound(2, &w, &compact(2)), Err(Error::NotIntegral(_))));
    }
}
