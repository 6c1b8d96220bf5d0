//! Exact root-system and weight-lattice arithmetic.
//!
//! Weights are stored in the basis of fundamental weights, roots in the basis of
//! simple roots. All pairings are exact rationals; floats never enter here.
//! Only type A is implemented, the [`RootType`] enum leaves room for the others.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Cartan–Killing type of a simple root system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RootType {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl fmt::Display for RootType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            RootType::A => "A",
            RootType::B => "B",
            RootType::C => "C",
            RootType::D => "D",
            RootType::E => "E",
            RootType::F => "F",
            RootType::G => "G",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for RootType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A" => Ok(RootType::A),
            "B" => Ok(RootType::B),
            "C" => Ok(RootType::C),
            "D" => Ok(RootType::D),
            "E" => Ok(RootType::E),
            "F" => Ok(RootType::F),
            "G" => Ok(RootType::G),
            other => Err(Error::UnsupportedRootSystem { kind: other.to_string(), rank: 0 }),
        }
    }
}

/// An element of the rational span of the weight lattice, in fundamental-weight
/// coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Weight {
    kind: RootType,
    coords: Vec<BigRational>,
}

impl Weight {
    pub fn new(kind: RootType, coords: Vec<BigRational>) -> Self {
        Weight { kind, coords }
    }

    /// Type A weight from integer fundamental coordinates.
    pub fn from_ints(coords: &[i64]) -> Self {
        Weight { kind: RootType::A, coords: coords.iter().map(|&c| BigRational::from_integer(c.into())).collect() }
    }

    pub fn zero(kind: RootType, rank: usize) -> Self {
        Weight { kind, coords: vec![BigRational::zero(); rank] }
    }

    pub fn kind(&self) -> RootType {
        self.kind
    }

    pub fn rank(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    /// Pairings with the simple coroots are the coordinates themselves, so the
    /// weight is integral iff every coordinate is an integer.
    pub fn is_integral(&self) -> bool {
        self.coords.iter().all(|c| c.is_integer())
    }

    /// Integer coordinates, if the weight is integral and they fit in `i64`.
    pub fn int_coords(&self) -> Option<Vec<i64>> {
        self.coords.iter().map(|c| if c.is_integer() { i64::try_from(c.to_integer()).ok() } else { None }).collect()
    }

    pub fn add(&self, other: &Weight) -> Result<Weight> {
        check_dim(self.rank(), other.rank())?;
        Ok(Weight { kind: self.kind, coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect() })
    }

    pub fn sub(&self, other: &Weight) -> Result<Weight> {
        check_dim(self.rank(), other.rank())?;
        Ok(Weight { kind: self.kind, coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect() })
    }

    pub fn scale(&self, s: &BigRational) -> Weight {
        Weight { kind: self.kind, coords: self.coords.iter().map(|c| c * s).collect() }
    }

    /// Coefficients `wⱼ` of the weight on the diagonal Cartan of `su(rank+1)`:
    /// `φ(diag(i a₁, …, i aₙ)) = Σ wⱼ aⱼ`, normalized so the last entry is 0.
    pub fn diagonal_coefficients(&self) -> Vec<BigRational> {
        let n = self.rank() + 1;
        let mut w = vec![BigRational::zero(); n];
        let mut acc = BigRational::zero();
        for j in (0..n - 1).rev() {
            acc += &self.coords[j];
            w[j] = acc.clone();
        }
        w
    }

    /// Same as [`Weight::diagonal_coefficients`] in floating point.
    pub fn diagonal_coefficients_f64(&self) -> Vec<f64> {
        self.diagonal_coefficients().iter().map(rational_to_f64).collect()
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// A positive root `e_i − e_j` (`i < j`, zero based) of type A together with
/// its simple-root coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Root {
    pub simple_coords: Vec<i64>,
    pub endpoints: (usize, usize),
}

/// Positive roots, Cartan matrix, Gram matrix of fundamental weights and ρ.
#[derive(Debug, Clone, PartialEq)]
pub struct RootSystem {
    kind: RootType,
    rank: usize,
    positive_roots: Vec<Root>,
    cartan: Vec<Vec<i64>>,
    gram: Vec<Vec<BigRational>>,
    rho: Weight,
}

impl RootSystem {
    pub fn kind(&self) -> RootType {
        self.kind
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn positive_roots(&self) -> &[Root] {
        &self.positive_roots
    }

    pub fn cartan_matrix(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    pub fn rho(&self) -> &Weight {
        &self.rho
    }

    /// The root with the given simple-root coordinates, as a weight.
    pub fn root_weight(&self, root: &Root) -> Weight {
        let coords = (0..self.rank)
            .map(|j| {
                let s: i64 = root.simple_coords.iter().zip(&self.cartan).map(|(c, row)| c * row[j]).sum();
                BigRational::from_integer(s.into())
            })
            .collect();
        Weight::new(self.kind, coords)
    }

    pub fn simple_root(&self, i: usize) -> Weight {
        Weight::new(self.kind, self.cartan[i].iter().map(|&c| BigRational::from_integer(c.into())).collect())
    }

    /// Simple reflection `s_i(x) = x − ⟨x, α_i^∨⟩ α_i`.
    pub fn reflect(&self, i: usize, x: &Weight) -> Result<Weight> {
        check_dim(self.rank, x.rank())?;
        let pairing = x.coords[i].clone();
        x.sub(&self.simple_root(i).scale(&pairing))
    }

    /// The ±1 labels used when printing roots, e.g. `e1-e3`.
    pub fn root_label(&self, root: &Root) -> String {
        format!("e{}-e{}", root.endpoints.0 + 1, root.endpoints.1 + 1)
    }
}

/// Builds the root system of the given type and rank.
pub fn build_root_system(kind: RootType, rank: usize) -> Result<RootSystem> {
    if kind != RootType::A || rank == 0 {
        return Err(Error::UnsupportedRootSystem { kind: kind.to_string(), rank });
    }
    let n = rank;
    let mut cartan = vec![vec![0i64; n]; n];
    for (i, row) in cartan.iter_mut().enumerate() {
        row[i] = 2;
        if i > 0 {
            row[i - 1] = -1;
        }
        if i + 1 < n {
            row[i + 1] = -1;
        }
    }
    let mut positive_roots = Vec::with_capacity(n * (n + 1) / 2);
    for i in 0..=n {
        for j in i + 1..=n {
            let simple_coords = (0..n).map(|l| i64::from(l >= i && l < j)).collect();
            positive_roots.push(Root { simple_coords, endpoints: (i, j) });
        }
    }
    // Simply laced with (α, α) = 2: the symmetrized Cartan matrix is the Cartan
    // matrix and (ω_i, ω_j) is its inverse.
    let gram = invert_exact(&cartan);
    let mut rs = RootSystem { kind, rank: n, positive_roots, cartan, gram, rho: Weight::zero(kind, n) };
    let half = BigRational::new(1.into(), 2.into());
    let mut sum = Weight::zero(kind, n);
    for r in &rs.positive_roots {
        sum = sum.add(&rs.root_weight(r))?;
    }
    rs.rho = sum.scale(&half);
    Ok(rs)
}

/// The Killing-induced form on weights, rescaled so roots have squared length 2.
pub fn inner_form(rs: &RootSystem, x: &Weight, y: &Weight) -> Result<BigRational> {
    check_dim(rs.rank, x.rank())?;
    check_dim(rs.rank, y.rank())?;
    let mut acc = BigRational::zero();
    for (i, xi) in x.coords.iter().enumerate() {
        if xi.is_zero() {
            continue;
        }
        for (j, yj) in y.coords.iter().enumerate() {
            acc += xi * &rs.gram[i][j] * yj;
        }
    }
    Ok(acc)
}

/// `(x, ν)` for a positive root ν.
pub fn root_pairing(rs: &RootSystem, x: &Weight, root: &Root) -> Result<BigRational> {
    check_dim(rs.rank, x.rank())?;
    // (x, α_l) = x_l because (α_l, α_l) = 2.
    Ok(root
        .simple_coords
        .iter()
        .zip(&x.coords)
        .filter(|(c, _)| **c != 0)
        .map(|(c, xl)| xl * BigRational::from_integer((*c).into()))
        .fold(BigRational::zero(), |a, b| a + b))
}

/// True iff `(φ+ρ, ν) ≠ 0` for every positive root ν.
pub fn is_regular(rs: &RootSystem, phi: &Weight) -> Result<bool> {
    let shifted = phi.add(&rs.rho)?;
    for r in &rs.positive_roots {
        if root_pairing(rs, &shifted, r)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The name of a preset real form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "name")]
pub enum RealFormName {
    #[serde(rename = "COMPACT")]
    Compact,
    #[serde(rename = "SU_PQ")]
    SuPq { p: usize, q: usize },
}

/// A real form, given by the set of compact positive roots.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RealFormSpec {
    name: RealFormName,
    compact: Vec<bool>,
}

impl RealFormSpec {
    /// Every root compact.
    pub fn compact(rs: &RootSystem) -> Self {
        RealFormSpec { name: RealFormName::Compact, compact: vec![true; rs.positive_roots.len()] }
    }

    /// `su(p, q)`: `e_i − e_j` is compact iff `i, j ≤ p` or `i, j > p`.
    pub fn su_pq(rs: &RootSystem, p: usize, q: usize) -> Result<Self> {
        if rs.kind != RootType::A || p + q != rs.rank + 1 {
            return Err(Error::UnsupportedRootSystem { kind: format!("su({p},{q}) in {}", rs.kind), rank: rs.rank });
        }
        let compact = rs
            .positive_roots
            .iter()
            .map(|r| {
                let (i, j) = r.endpoints;
                (i < p) == (j < p)
            })
            .collect();
        Ok(RealFormSpec { name: RealFormName::SuPq { p, q }, compact })
    }

    pub fn from_name(rs: &RootSystem, name: RealFormName) -> Result<Self> {
        match name {
            RealFormName::Compact => Ok(Self::compact(rs)),
            RealFormName::SuPq { p, q } => Self::su_pq(rs, p, q),
        }
    }

    pub fn name(&self) -> RealFormName {
        self.name
    }

    /// Compact flags, parallel to [`RootSystem::positive_roots`].
    pub fn compact_flags(&self) -> &[bool] {
        &self.compact
    }

    pub fn is_compact_form(&self) -> bool {
        self.compact.iter().all(|&c| c)
    }
}

/// `♯{ν compact : (φ+ρ, ν) < 0} + ♯{ν noncompact : (φ+ρ, ν) > 0}`.
pub fn q_invariant(rs: &RootSystem, phi: &Weight, rf: &RealFormSpec) -> Result<usize> {
    check_dim(rf.compact.len(), rs.positive_roots.len())?;
    let shifted = phi.add(&rs.rho)?;
    let mut q = 0;
    for (r, &compact) in rs.positive_roots.iter().zip(&rf.compact) {
        let p = root_pairing(rs, &shifted, r)?;
        if p.is_zero() {
            return Err(Error::NotRegular { root: rs.root_label(r) });
        }
        if (compact && p.is_negative()) || (!compact && p.is_positive()) {
            q += 1;
        }
    }
    Ok(q)
}

fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionError { expected, found })
    }
}

fn invert_exact(m: &[Vec<i64>]) -> Vec<Vec<BigRational>> {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r: Vec<BigRational> = row.iter().map(|&x| BigRational::from_integer(x.into())).collect();
            r.extend((0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero()).expect("Cartan matrix is invertible");
        a.swap(col, piv);
        let inv = a[col][col].recip();
        for x in a[col].iter_mut() {
            *x *= &inv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                let pivot_row = a[col].clone();
                for (x, p) in a[r].iter_mut().zip(pivot_row) {
                    *x -= &f * p;
                }
            }
        }
    }
    a.into_iter().map(|row| row[n..].to_vec()).collect()
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

/// Parses `"p"` or `"p/q"` (optional leading sign) into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let t = s.trim();
    let err = |msg: &str| Error::Parse { pos: 0, msg: format!("{msg}: {s:?}") };
    if t.is_empty() || t.len() > 4096 {
        return Err(err("bad rational length"));
    }
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (t, None),
    };
    let parse_int = |x: &str, signed: bool| -> Result<BigInt> {
        let digits = if signed { x.strip_prefix(['-', '+']).unwrap_or(x) } else { x };
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err("bad integer"));
        }
        x.parse::<BigInt>().map_err(|_| err("bad integer"))
    };
    let n = parse_int(num, true)?;
    let d = match den {
        Some(d) => parse_int(d, false)?,
        None => BigInt::one(),
    };
    if d.is_zero() {
        return Err(err("zero denominator"));
    }
    Ok(BigRational::new(n, d))
}

/// `{type, rank, coords}` with coordinates as exact `"p/q"` strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightJson {
    #[serde(rename = "type")]
    pub kind: RootType,
    pub rank: usize,
    pub coords: Vec<String>,
}

impl From<&Weight> for WeightJson {
    fn from(w: &Weight) -> Self {
        WeightJson { kind: w.kind, rank: w.rank(), coords: w.coords.iter().map(|c| c.to_string()).collect() }
    }
}

impl TryFrom<&WeightJson> for Weight {
    type Error = Error;

    fn try_from(j: &WeightJson) -> Result<Weight> {
        check_dim(j.rank, j.coords.len())?;
        let coords = j.coords.iter().map(|c| parse_rational(c)).collect::<Result<Vec<_>>>()?;
        Ok(Weight::new(j.kind, coords))
    }
}

/// Decodes a weight from its JSON object.
pub fn weight_from_json(s: &str) -> Result<Weight> {
    let j: WeightJson = serde_json::from_str(s)?;
    Weight::try_from(&j)
}

pub fn weight_to_json(w: &Weight) -> String {
    serde_json::to_string(&WeightJson::from(w)).expect("weight serializes")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn a1_structure() {
        let rs = build_root_system(RootType::A, 1).unwrap();
        assert_eq!(rs.positive_roots().len(), 1);
        let alpha = rs.root_weight(&rs.positive_roots()[0]);
        assert_eq!(rs.rho().scale(&q(2, 1)), alpha);
        assert_eq!(inner_form(&rs, &alpha, &alpha).unwrap(), q(2, 1));
        assert_eq!(inner_form(&rs, rs.rho(), rs.rho()).unwrap(), q(1, 2));
    }

    #[test]
    fn a2_structure() {
        let rs = build_root_system(RootType::A, 2).unwrap();
        let coords: Vec<_> = rs.positive_roots().iter().map(|r| r.simple_coords.clone()).collect();
        assert_eq!(coords.len(), 3);
        for want in [vec![1, 0], vec![0, 1], vec![1, 1]] {
            assert!(coords.contains(&want));
        }
        let a1 = rs.simple_root(0);
        assert_eq!(inner_form(&rs, rs.rho(), &a1).unwrap(), q(1, 1));
    }

    #[test]
    fn root_count_is_triangular() {
        for n in 1..=8 {
            let rs = build_root_system(RootType::A, n).unwrap();
            assert_eq!(rs.positive_roots().len(), n * (n + 1) / 2);
            for r in rs.positive_roots() {
                let w = rs.root_weight(r);
                assert_eq!(inner_form(&rs, &w, &w).unwrap(), q(2, 1));
            }
        }
    }

    #[test]
    fn unsupported_types_rejected() {
        assert!(matches!(build_root_system(RootType::B, 2), Err(Error::UnsupportedRootSystem { .. })));
        assert!(build_root_system(RootType::A, 0).is_err());
    }

    #[test]
    fn dimension_mismatch() {
        let rs = build_root_system(RootType::A, 2).unwrap();
        let w = Weight::from_ints(&[1]);
        assert!(matches!(inner_form(&rs, &w, rs.rho()), Err(Error::DimensionError { .. })));
    }

    #[test]
    fn regularity() {
        let rs = build_root_system(RootType::A, 1).unwrap();
        assert!(is_regular(&rs, &Weight::from_ints(&[0])).unwrap());
        let minus_rho = rs.rho().scale(&q(-1, 1));
        assert!(!is_regular(&rs, &minus_rho).unwrap());
        let rs2 = build_root_system(RootType::A, 2).unwrap();
        // -α₁ = (-2, 1): φ+ρ = (-1, 2), pairings -1, 2, 1.
        assert!(is_regular(&rs2, &Weight::from_ints(&[-2, 1])).unwrap());
        // (-1, 0): φ+ρ = (0, 1) is singular.
        assert!(!is_regular(&rs2, &Weight::from_ints(&[-1, 0])).unwrap());
    }

    #[test]
    fn q_small_cases() {
        let rs = build_root_system(RootType::A, 1).unwrap();
        let compact = RealFormSpec::compact(&rs);
        let su11 = RealFormSpec::su_pq(&rs, 1, 1).unwrap();
        assert_eq!(q_invariant(&rs, &Weight::from_ints(&[3]), &compact).unwrap(), 0);
        assert_eq!(q_invariant(&rs, &Weight::from_ints(&[0]), &su11).unwrap(), 1);
        assert_eq!(q_invariant(&rs, &Weight::from_ints(&[-3]), &su11).unwrap(), 0);
        assert_eq!(q_invariant(&rs, &Weight::from_ints(&[-3]), &compact).unwrap(), 1);
        assert!(matches!(q_invariant(&rs, &Weight::from_ints(&[-1]), &compact), Err(Error::NotRegular { .. })));
    }

    #[test]
    fn su_pq_labels() {
        let rs = build_root_system(RootType::A, 2).unwrap();
        let rf = RealFormSpec::su_pq(&rs, 2, 1).unwrap();
        for (r, &c) in rs.positive_roots().iter().zip(rf.compact_flags()) {
            assert_eq!(c, r.endpoints == (0, 1));
        }
        assert!(RealFormSpec::su_pq(&rs, 2, 2).is_err());
    }

    #[test]
    fn diagonal_coefficients_match_fundamental_weights() {
        let w = Weight::from_ints(&[1, 2]);
        assert_eq!(w.diagonal_coefficients(), vec![q(3, 1), q(2, 1), q(0, 1)]);
    }

    #[test]
    fn rational_strings() {
        assert_eq!(parse_rational("3/6").unwrap(), q(1, 2));
        assert_eq!(parse_rational("-7").unwrap(), q(-7, 1));
        assert_eq!(parse_rational(" +2/4 ").unwrap(), q(1, 2));
        for bad in ["", "1/0", "a", "1/-2", "1.5", "--1", "/2", "1/"] {
            assert!(parse_rational(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn weight_json() {
        let w = Weight::new(RootType::A, vec![q(1, 2), q(-3, 1)]);
        let s = weight_to_json(&w);
        assert_eq!(s, r#"{"type":"A","rank":2,"coords":["1/2","-3"]}"#);
        assert_eq!(weight_from_json(&s).unwrap(), w);
        assert!(weight_from_json(r#"{"type":"A","rank":3,"coords":["1"]}"#).is_err());
    }
}
