//! The seeded invariant suite behind the `check` command.
//!
//! Each check draws from its own generator, seeded by the suite seed and the
//! check id, so results do not depend on execution order. Tolerances may be
//! overridden per check id.

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use crate::error::Result;
use crate::homotopy::{gcd_formula, pi1_lower_bound};
use crate::json::sig15;
use crate::loops;
use crate::matgroup::{cartan_project, character_phi, GroupElement};
use crate::orbit::{act, derivative_along, hamiltonian_h, kirillov_closedness_residual, kirillov_form, OrbitPoint};
use crate::quantops::{
    apply_uea, curvature_identity_check, harish_chandra_eval, off_scalar_residual, representation_residual, UeaElement,
};
use crate::rootdata::{
    build_root_system, inner_form, q_invariant, root_pairing, RealFormSpec, RootSystem, RootType, Weight,
};
use crate::sample::Sampler;
use crate::transport::{self, evolve_scalar, exact_section_ratio, section_ratio_raw, DEFAULT_STEPS};

/// Result of one invariant check.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub id: &'static str,
    pub passed: bool,
    /// Worst observed value of the checked quantity.
    pub measured: f64,
    pub tolerance: f64,
    pub detail: String,
}

impl CheckOutcome {
    pub fn to_json(&self) -> Value {
        json!({
            "id": self.id,
            "passed": self.passed,
            "measured": sig15(self.measured),
            "tolerance": sig15(self.tolerance),
            "detail": self.detail,
        })
    }
}

type CheckFn = fn(&mut Sampler) -> Result<(f64, String)>;

/// How a measured value is compared with the tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Sense {
    AtMost,
    AtLeast,
}

struct Check {
    id: &'static str,
    tolerance: f64,
    sense: Sense,
    run: CheckFn,
}

const CHECKS: &[Check] = &[
    Check { id: "homotopy.gcd_enumeration", tolerance: 0.0, sense: Sense::AtMost, run: homotopy_gcd },
    Check { id: "homotopy.root_lattice_shift", tolerance: 0.0, sense: Sense::AtMost, run: homotopy_shift },
    Check { id: "matgroup.cartan_orthogonal", tolerance: 1e-12, sense: Sense::AtMost, run: cartan_orthogonal },
    Check { id: "matgroup.cartan_torus_equivariance", tolerance: 1e-12, sense: Sense::AtMost, run: cartan_torus },
    Check { id: "matgroup.character_homomorphism", tolerance: 1e-10, sense: Sense::AtMost, run: character_hom },
    Check { id: "matgroup.exp_log_roundtrip", tolerance: 1e-10, sense: Sense::AtMost, run: exp_log },
    Check { id: "orbit.equivariance", tolerance: 1e-10, sense: Sense::AtMost, run: orbit_equivariance },
    Check { id: "orbit.kirillov_closed", tolerance: 1e-6, sense: Sense::AtMost, run: orbit_closed },
    Check { id: "orbit.moment_condition", tolerance: 1e-6, sense: Sense::AtMost, run: orbit_moment },
    Check { id: "quantops.casimir_scalar", tolerance: 1e-10, sense: Sense::AtMost, run: casimir_scalar },
    Check { id: "quantops.curvature_identity", tolerance: 1e-10, sense: Sense::AtMost, run: curvature },
    Check { id: "quantops.extreme_weight", tolerance: 1e-12, sense: Sense::AtMost, run: extreme_weight },
    Check { id: "quantops.harish_chandra_match", tolerance: 1e-10, sense: Sense::AtMost, run: hc_match },
    Check { id: "quantops.representation", tolerance: 1e-10, sense: Sense::AtMost, run: representation },
    Check { id: "rootdata.form_positive_definite", tolerance: 0.0, sense: Sense::AtMost, run: form_pd },
    Check { id: "rootdata.q_bruteforce", tolerance: 0.0, sense: Sense::AtMost, run: q_bruteforce },
    Check { id: "rootdata.q_compact_count", tolerance: 0.0, sense: Sense::AtMost, run: q_compact },
    Check { id: "rootdata.structure", tolerance: 0.0, sense: Sense::AtMost, run: root_structure },
    Check { id: "transport.action_exponential", tolerance: 1e-6, sense: Sense::AtMost, run: action_exp },
    Check { id: "transport.endpoint_only", tolerance: 1e-8, sense: Sense::AtMost, run: endpoint_only },
    Check { id: "transport.gauge_invariance", tolerance: 1e-9, sense: Sense::AtMost, run: gauge_invariance },
    Check { id: "transport.holonomy_split", tolerance: 1e-8, sense: Sense::AtMost, run: holonomy_split },
    Check { id: "transport.rk4_order", tolerance: 8.0, sense: Sense::AtLeast, run: rk4_order },
];

/// Ids of every check, sorted.
pub fn check_ids() -> Vec<&'static str> {
    CHECKS.iter().map(|c| c.id).collect()
}

fn check_seed(seed: u64, id: &str) -> u64 {
    // FNV-1a over the id, mixed with the suite seed.
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in id.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    h ^ seed.wrapping_mul(0x9e37_79b9_7f4a_7c15)
}

/// Runs every check, sorted by id. `overrides` replaces tolerances by check id.
pub fn run_suite(seed: u64, overrides: &BTreeMap<String, f64>) -> Vec<CheckOutcome> {
    let mut out: Vec<CheckOutcome> = CHECKS
        .iter()
        .map(|c| {
            let tolerance = overrides.get(c.id).copied().unwrap_or(c.tolerance);
            let mut s = Sampler::new(check_seed(seed, c.id));
            match (c.run)(&mut s) {
                Ok((measured, detail)) => {
                    let passed = match c.sense {
                        Sense::AtMost => measured <= tolerance,
                        Sense::AtLeast => measured >= tolerance,
                    };
                    CheckOutcome { id: c.id, passed, measured, tolerance, detail }
                }
                Err(e) => {
                    CheckOutcome { id: c.id, passed: false, measured: f64::NAN, tolerance, detail: e.to_string() }
                }
            }
        })
        .collect();
    out.sort_by(|a, b| a.id.cmp(b.id));
    out
}

fn compact(rs: &RootSystem) -> RealFormSpec {
    RealFormSpec::compact(rs)
}

fn root_structure(_: &mut Sampler) -> Result<(f64, String)> {
    let mut bad = 0;
    for rank in 1..=6 {
        let rs = build_root_system(RootType::A, rank)?;
        if rs.positive_roots().len() != rank * (rank + 1) / 2 {
            bad += 1;
        }
        let mut sum = Weight::zero(RootType::A, rank);
        for r in rs.positive_roots() {
            sum = sum.add(&rs.root_weight(r))?;
        }
        let half = sum.scale(&BigRational::new(1.into(), 2.into()));
        if &half != rs.rho() {
            bad += 1;
        }
        for r in rs.positive_roots() {
            if inner_form(&rs, &rs.root_weight(r), &rs.root_weight(r))? != BigRational::from_integer(2.into()) {
                bad += 1;
            }
        }
    }
    Ok((f64::from(bad), "root counts, rho = half sum, squared root length 2 for A1..A6".into()))
}

fn form_pd(s: &mut Sampler) -> Result<(f64, String)> {
    let mut bad = 0;
    for rank in 1..=4 {
        let rs = build_root_system(RootType::A, rank)?;
        for _ in 0..50 {
            let (x, y) = (s.weight(rank, -5, 5), s.weight(rank, -5, 5));
            if inner_form(&rs, &x, &y)? != inner_form(&rs, &y, &x)? {
                bad += 1;
            }
            let xx = inner_form(&rs, &x, &x)?;
            let nonzero = x.coords().iter().any(|c| !c.is_zero());
            if nonzero && !xx.is_positive() || !nonzero && !xx.is_zero() {
                bad += 1;
            }
        }
    }
    Ok((f64::from(bad), "symmetric and positive definite on 200 random weights".into()))
}

fn q_compact(s: &mut Sampler) -> Result<(f64, String)> {
    let mut bad = 0;
    for rank in 1..=3 {
        let rs = build_root_system(RootType::A, rank)?;
        let rho = rs.rho().clone();
        for _ in 0..50 {
            let phi = s.weight(rank, -4, 4);
            let shifted = phi.add(&rho)?;
            let pairings: Vec<BigRational> =
                rs.positive_roots().iter().map(|r| root_pairing(&rs, &shifted, r)).collect::<Result<_>>()?;
            if pairings.iter().any(Zero::is_zero) {
                continue;
            }
            let q = q_invariant(&rs, &phi, &compact(&rs))?;
            let neg = pairings.iter().filter(|p| p.is_negative()).count();
            let dominant = pairings.iter().all(Signed::is_positive);
            if q != neg || (q == 0) != dominant {
                bad += 1;
            }
        }
    }
    Ok((f64::from(bad), "q(COMPACT) = #{(phi+rho, nu) < 0}, zero iff dominant".into()))
}

/// Independent recount: roots `e_i − e_j` enumerated directly and paired with
/// `φ + ρ` through its diagonal coefficients.
fn q_bruteforce(s: &mut Sampler) -> Result<(f64, String)> {
    let mut bad = 0;
    let mut counted = 0;
    for (rank, p) in [(1usize, 1usize), (2, 1), (3, 2)] {
        let rs = build_root_system(RootType::A, rank)?;
        let rf = RealFormSpec::su_pq(&rs, p, rank + 1 - p)?;
        while counted < 100 * rank {
            let phi = s.weight(rank, -5, 5);
            let d = phi.add(rs.rho())?.diagonal_coefficients();
            let mut q = 0;
            let mut singular = false;
            for i in 0..=rank {
                for j in i + 1..=rank {
                    let pair = &d[i] - &d[j];
                    singular |= pair.is_zero();
                    let compact = (i < p) == (j < p);
                    if (compact && pair.is_negative()) || (!compact && pair.is_positive()) {
                        q += 1;
                    }
                }
            }
            if singular {
                continue;
            }
            counted += 1;
            if q_invariant(&rs, &phi, &rf)? != q {
                bad += 1;
            }
        }
        counted = 0;
    }
    Ok((f64::from(bad), "SU(p,q) q-invariant against a direct recount over e_i - e_j".into()))
}

fn exp_log(s: &mut Sampler) -> Result<(f64, String)> {
    let mut worst: f64 = 0.0;
    for n in 2..=4 {
        for _ in 0..50 {
            let a = s.algebra(n);
            let a = a.scale(s.uniform(0.0, 2.9) / a.norm());
            worst = worst.max(a.exp().log()?.sub(&a)?.norm());
        }
    }
    Ok((worst, "|log(exp A) - A| for |A| < 3".into()))
}

fn cartan_orthogonal(s: &mut Sampler) -> Result<(f64, String)> {
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let (a, c) = (s.algebra(3), s.algebra(3));
        let rest = a.sub(&cartan_project(&a))?;
        worst = worst.max(rest.inner(&cartan_project(&c)).abs());
    }
    Ok((worst, "<A - A0, C0> on 100 pairs".into()))
}

fn cartan_torus(s: &mut Sampler) -> Result<(f64, String)> {
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let (t, a) = (s.torus(3), s.algebra(3));
        let lhs = cartan_project(&t.adjoint_action(&a)?);
        let rhs = t.adjoint_action(&cartan_project(&a))?;
        worst = worst.max(lhs.sub(&rhs)?.norm());
    }
    Ok((worst, "(t.A)0 - t.A0 on 100 pairs".into()))
}

fn character_hom(s: &mut Sampler) -> Result<(f64, String)> {
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let phi = s.weight(2, -5, 5);
        let (t1, t2) = (s.torus(3), s.torus(3));
        let lhs = character_phi(&phi, &t1.mul(&t2)?)?;
        let rhs = character_phi(&phi, &t1)? * character_phi(&phi, &t2)?;
        worst = worst.max((lhs - rhs).norm());
    }
    Ok((worst, "Phi(t1 t2) - Phi(t1) Phi(t2) on SU(3)".into()))
}

fn orbit_moment(s: &mut Sampler) -> Result<(f64, String)> {
    let mut worst: f64 = 0.0;
    for n in [2usize, 3] {
        for _ in 0..50 {
            let phi = s.weight(n - 1, 1, 4);
            let x = OrbitPoint::new(s.group(n));
            let (a, c) = (s.algebra(n), s.algebra(n));
            let fd = derivative_along(&x, &a, 1e-4, |p| hamiltonian_h(&phi, &c, p))?;
            let w = kirillov_form(&phi, &x, &c, &a)?;
            worst = worst.max((fd - w).abs() / w.abs().max(1e-3));
        }
    }
    Ok((worst, "relative error of d h_C (X_A) - w(X_C, X_A), 100 samples on SU(2)/T and SU(3)/T".into()))
}

fn orbit_closed(s: &mut Sampler) -> Result<(f64, String)> {
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let phi = s.weight(2, 1, 3);
        let x = OrbitPoint::new(s.group(3));
        let (a, b, c) = (s.algebra(3), s.algebra(3), s.algebra(3));
        worst = worst.max(kirillov_closedness_residual(&phi, &x, &a, &b, &c, 1e-4)?.abs());
    }
    Ok((worst, "d(w)(X_A, X_B, X_C) on SU(3)/T".into()))
}

fn orbit_equivariance(s: &mut Sampler) -> Result<(f64, String)> {
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let phi = s.weight(2, 0, 4);
        let (g, x) = (s.group(3), OrbitPoint::new(s.group(3)));
        let (a, c) = (s.algebra(3), s.algebra(3));
        let lhs = kirillov_form(&phi, &act(&g, &x)?, &g.adjoint_action(&a)?, &g.adjoint_action(&c)?)?;
        worst = worst.max((lhs - kirillov_form(&phi, &x, &a, &c)?).abs());
    }
    Ok((worst, "w(X_gA, X_gC)(gx) - w(X_A, X_C)(x) on 100 samples".into()))
}

fn kappa_sign(k: i64) -> Complex64 {
    Complex64::new(if k % 2 == 0 { 1.0 } else { -1.0 }, 0.0)
}

fn endpoint_only(s: &mut Sampler) -> Result<(f64, String)> {
    let phi = Weight::from_ints(&[3]);
    let mut values = Vec::new();
    for path in loops::paths_to_minus_identity(s, 5)? {
        let spec = transport::LoopSpec::new(path, OrbitPoint::new(s.group(2)), transport::Cap::HolonomyDefined)
            .with_lift(loops::random_gauge(s, 2));
        values.push(evolve_scalar(&phi, &spec, DEFAULT_STEPS)?.value_ratio);
    }
    let worst = values.iter().map(|v| (v - values[0]).norm()).fold(0.0, f64::max);
    Ok((worst, format!("spread of kappa over 5 paths to -I, weight 3 (kappa = {})", values[0])))
}

fn rk4_order(_: &mut Sampler) -> Result<(f64, String)> {
    let errs = rk4_errors(5, &[100, 200, 400, 800])?;
    let worst = errs.windows(2).map(|w| w[0] / w[1]).fold(f64::INFINITY, f64::min);
    Ok((
        worst,
        format!("error ratio per halving, errors {:?}", errs.iter().map(|e| format!("{e:.3e}")).collect::<Vec<_>>()),
    ))
}

/// RK4 error of `m(1)` around the conjugated half turn against the closed form
/// `Φ(g̃₀⁻¹ g₁⁻¹ g̃₁)⁻¹`.
pub fn rk4_errors(k: i64, steps: &[usize]) -> Result<Vec<f64>> {
    let spec = loops::conjugated_loop(&loops::default_conjugator())?;
    let phi = Weight::from_ints(&[k]);
    let exact = exact_section_ratio(&phi, &spec, 1.0)?;
    steps.iter().map(|&n| Ok((section_ratio_raw(&phi, &spec, n)? - exact).norm())).collect()
}

fn gauge_invariance(s: &mut Sampler) -> Result<(f64, String)> {
    let phi = Weight::from_ints(&[2]);
    let u = s.group(2);
    let spec = loops::conjugated_loop(&u)?.with_lift(transport::Lift::Natural);
    let spec = transport::LoopSpec { base: OrbitPoint::new(s.group(2)), ..spec };
    let base = evolve_scalar(&phi, &spec, DEFAULT_STEPS)?.value_ratio;
    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        let r = evolve_scalar(&phi, &spec.clone().with_lift(loops::random_gauge(s, 2)), DEFAULT_STEPS)?;
        worst = worst.max((r.value_ratio - base).norm());
    }
    Ok((worst, "value ratio under 10 random diagonal gauges".into()))
}

fn holonomy_split(s: &mut Sampler) -> Result<(f64, String)> {
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let k = s.int(1, 4);
        let phi = Weight::from_ints(&[k]);
        let path = loops::paths_to_minus_identity(s, 1)?.remove(0);
        let spec = transport::LoopSpec::new(path, OrbitPoint::new(s.group(2)), transport::Cap::HolonomyDefined)
            .with_lift(loops::random_gauge(s, 2));
        let r = evolve_scalar(&phi, &spec, DEFAULT_STEPS)?;
        let split = r.holonomy * Complex64::from_polar(1.0, r.hamiltonian_term);
        worst = worst.max((split - r.value_ratio).norm());
    }
    Ok((worst, "holonomy * exp(i int h) - value ratio on 20 loops".into()))
}

fn action_exp(s: &mut Sampler) -> Result<(f64, String)> {
    let mut worst: f64 = 0.0;
    for k in 1..=5 {
        let phi = Weight::from_ints(&[k]);
        for u in [loops::default_conjugator(), mild_conjugator(s)] {
            let r = transport::action_integral(&phi, &loops::conjugated_loop(&u)?)?;
            let action = r.action().unwrap_or(f64::NAN);
            worst = worst.max((Complex64::from_polar(1.0, action) - kappa_sign(k)).norm());
        }
    }
    Ok((worst, "|exp(i action) - kappa| over spherical caps, k = 1..5".into()))
}

/// A random conjugator keeping the circle away from `[0:1]`.
fn mild_conjugator(s: &mut Sampler) -> GroupElement {
    let a = s.algebra(2);
    a.scale(s.uniform(0.2, 0.6) / a.norm()).exp()
}

fn representation(s: &mut Sampler) -> Result<(f64, String)> {
    let mut worst: f64 = 0.0;
    for k in 0..=6 {
        let phi = Weight::from_ints(&[k]);
        for _ in 0..20 {
            worst = worst.max(representation_residual(&phi, &s.algebra(2), &s.algebra(2))?);
        }
    }
    Ok((worst, "[Q_A, Q_C] - Q_[A,C] for k = 0..6".into()))
}

fn curvature(s: &mut Sampler) -> Result<(f64, String)> {
    let mut worst: f64 = 0.0;
    for k in 0..=6 {
        let phi = Weight::from_ints(&[k]);
        for _ in 0..10 {
            worst = worst.max(curvature_identity_check(&phi, &s.algebra(2), &s.algebra(2))?);
        }
    }
    Ok((worst, "curvature identity on sections for k = 0..6".into()))
}

fn extreme_weight(s: &mut Sampler) -> Result<(f64, String)> {
    let mut worst: f64 = 0.0;
    for k in 0..=6 {
        let phi = Weight::from_ints(&[k]);
        let c = s.diagonal_algebra(2);
        let m = crate::quantops::build_q_op(&phi, c.matrix())?.matrix()?.to_cmat();
        let expect = Complex64::new(0.0, crate::matgroup::WeightFunctional::new(&phi).eval(c.matrix()));
        worst = worst.max((m[(0, 0)] - expect).norm());
    }
    Ok((worst, "Q_C on the extreme monomial equals i*phi(C)".into()))
}

fn casimir_scalar(_: &mut Sampler) -> Result<(f64, String)> {
    let cas = UeaElement::casimir();
    let mut worst: f64 = 0.0;
    for k in 0..=8 {
        let (_, r) = off_scalar_residual(&apply_uea(&Weight::from_ints(&[k]), &cas)?);
        worst = worst.max(r);
    }
    Ok((worst, "off-scalar part of the Casimir for k = 0..8".into()))
}

fn hc_match(_: &mut Sampler) -> Result<(f64, String)> {
    let cas = UeaElement::casimir();
    let mut worst: f64 = 0.0;
    for k in 0..=8 {
        let phi = Weight::from_ints(&[k]);
        let (scalar, _) = off_scalar_residual(&apply_uea(&phi, &cas)?);
        worst = worst.max((harish_chandra_eval(&phi, &cas)? - scalar).norm());
    }
    Ok((worst, "gamma(Casimir)(psi + rho) against the operator scalar, k = 0..8".into()))
}

fn homotopy_gcd(s: &mut Sampler) -> Result<(f64, String)> {
    let mut bad = 0;
    for n in 2..=12 {
        let rs = build_root_system(RootType::A, n - 1)?;
        for _ in 0..20 {
            let w = s.weight(n - 1, -8, 8);
            let b = pi1_lower_bound(n, &w, &compact(&rs))?;
            let c = w.int_coords().unwrap_or_default();
            if b.bound != gcd_formula(n, &c) || n % b.bound != 0 {
                bad += 1;
            }
        }
    }
    Ok((f64::from(bad), "enumeration against n / gcd(n, sum j m_j) for n = 2..12".into()))
}

fn homotopy_shift(s: &mut Sampler) -> Result<(f64, String)> {
    let mut bad = 0;
    for n in 2..=6 {
        let rs = build_root_system(RootType::A, n - 1)?;
        for _ in 0..10 {
            let w = s.weight(n - 1, -4, 4);
            let mut shifted = w.clone();
            for r in rs.positive_roots() {
                let m = s.int(-2, 2);
                shifted = shifted.add(&rs.root_weight(r).scale(&BigRational::from_integer(m.into())))?;
            }
            let a = pi1_lower_bound(n, &w, &compact(&rs))?.bound;
            let b = pi1_lower_bound(n, &shifted, &compact(&rs))?.bound;
            if a != b {
                bad += 1;
            }
        }
    }
    Ok((f64::from(bad), "bound unchanged by root-lattice shifts".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_are_sorted_and_unique() {
        let ids = check_ids();
        let mut sorted = ids.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(ids, sorted);
    }

    #[test]
    fn seeds_differ_per_check() {
        assert_ne!(check_seed(1, "a"), check_seed(1, "b"));
        assert_ne!(check_seed(1, "a"), check_seed(2, "a"));
    }
}
