//! Chinese remainder solving over ℤ and extension of finite
//! congruence-preserving partial maps, first point by point and then to a
//! certified polynomial.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::cgg::{decompose, tower_cover, tower_interval, tower_point, PnSeries};
use crate::newton::is_multiple;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CrtError {
    #[error("constraints {0} and {1} are incompatible")]
    Unsolvable(usize, usize),
    /// `(x - y) ∤ f(x) - f(y)` for the reported points.
    #[error("partial map does not preserve congruences: {0} and {1}")]
    NotPreserving(i64, i64),
    #[error("point {0} is already in the domain")]
    PointInDomain(i64),
    #[error("domain point {point} lies outside the tower A_{tower}")]
    DomainExceedsTower { point: i64, tower: usize },
    #[error("internal error: extension system at {0} is unsolvable")]
    InternalUnsolvable(i64),
    #[error("internal error: coefficient a_{0} is not a multiple of lcm({0})")]
    CertificateViolation(usize),
}

/// `x ≡ residue (mod modulus)`. Modulus 0 pins `x = residue`; for a positive
/// modulus the residue is kept in `[0, modulus)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Congruence {
    residue: BigInt,
    modulus: BigInt,
}

impl Congruence {
    /// `≡_r` and `≡_{-r}` are the same relation, so the sign of the modulus
    /// is dropped.
    pub fn new(residue: BigInt, modulus: BigInt) -> Self {
        let modulus = modulus.abs();
        let residue = if modulus.is_zero() {
            residue
        } else {
            residue.mod_floor(&modulus)
        };
        Congruence { residue, modulus }
    }

    pub fn from_i64(residue: i64, modulus: i64) -> Self {
        Congruence::new(BigInt::from(residue), BigInt::from(modulus))
    }

    /// The whole of ℤ.
    pub fn trivial() -> Self {
        Congruence::new(BigInt::zero(), BigInt::one())
    }

    pub fn residue(&self) -> &BigInt {
        &self.residue
    }

    pub fn modulus(&self) -> &BigInt {
        &self.modulus
    }

    pub fn contains(&self, x: &BigInt) -> bool {
        is_multiple(&(x - &self.residue), &self.modulus)
    }

    fn compatible(&self, other: &Congruence) -> bool {
        let g = self.modulus.gcd(&other.modulus);
        is_multiple(&(&self.residue - &other.residue), &g)
    }

    /// Intersection of two compatible classes.
    fn merge(&self, other: &Congruence) -> Option<Congruence> {
        if !self.compatible(other) {
            return None;
        }
        if self.modulus.is_zero() {
            return Some(self.clone());
        }
        if other.modulus.is_zero() {
            return Some(other.clone());
        }
        let (m, n) = (&self.modulus, &other.modulus);
        let egcd = m.extended_gcd(n);
        let g = egcd.gcd;
        let lcm = m / &g * n;
        // x = a + m·t with m·t ≡ b - a (mod n)
        let t = ((&other.residue - &self.residue) / &g * egcd.x).mod_floor(&(n / &g));
        Some(Congruence::new(&self.residue + m * t, lcm))
    }
}

impl fmt::Display for Congruence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self.residue, self.modulus)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CrtSystem {
    pub constraints: Vec<Congruence>,
}

impl CrtSystem {
    pub fn new(constraints: Vec<Congruence>) -> Self {
        CrtSystem { constraints }
    }
}

impl FromIterator<Congruence> for CrtSystem {
    fn from_iter<I: IntoIterator<Item = Congruence>>(iter: I) -> Self {
        CrtSystem::new(iter.into_iter().collect())
    }
}

/// Solves the system. Over ℤ pairwise compatibility
/// `a_i ≡ a_j (mod gcd(r_i, r_j))` is sufficient, so the first
/// incompatible pair in `(i, j)` lexicographic order is the error.
pub fn solve(system: &CrtSystem) -> Result<Congruence, CrtError> {
    let cs = &system.constraints;
    for i in 0..cs.len() {
        for j in i + 1..cs.len() {
            if !cs[i].compatible(&cs[j]) {
                return Err(CrtError::Unsolvable(i, j));
            }
        }
    }
    let mut acc = Congruence::trivial();
    for (i, c) in cs.iter().enumerate() {
        // unreachable for pairwise compatible systems over ℤ
        acc = acc.merge(c).ok_or(CrtError::Unsolvable(0, i))?;
    }
    Ok(acc)
}

/// Finite map from integer points to integer values.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PartialMap {
    entries: BTreeMap<i64, BigInt>,
}

impl PartialMap {
    pub fn new() -> Self {
        PartialMap::default()
    }

    pub fn insert(&mut self, x: i64, v: BigInt) -> Option<BigInt> {
        self.entries.insert(x, v)
    }

    pub fn get(&self, x: i64) -> Option<&BigInt> {
        self.entries.get(&x)
    }

    pub fn contains(&self, x: i64) -> bool {
        self.entries.contains_key(&x)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn domain(&self) -> impl Iterator<Item = i64> + '_ {
        self.entries.keys().copied()
    }

    /// Entries in increasing point order.
    pub fn iter(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        self.entries.iter().map(|(x, v)| (*x, v))
    }

    /// First pair in point order violating `(x - y) | f(x) - f(y)`.
    pub fn first_violation(&self) -> Option<(i64, i64)> {
        let pts: Vec<(i64, &BigInt)> = self.iter().collect();
        for (i, (x, fx)) in pts.iter().enumerate() {
            for (y, fy) in &pts[i + 1..] {
                let gap = BigInt::from(*y) - BigInt::from(*x);
                if !is_multiple(&(*fy - *fx), &gap) {
                    return Some((*x, *y));
                }
            }
        }
        None
    }
}

impl FromIterator<(i64, BigInt)> for PartialMap {
    fn from_iter<I: IntoIterator<Item = (i64, BigInt)>>(iter: I) -> Self {
        PartialMap {
            entries: iter.into_iter().collect(),
        }
    }
}

impl<const N: usize> From<[(i64, i64); N]> for PartialMap {
    fn from(pairs: [(i64, i64); N]) -> Self {
        pairs
            .into_iter()
            .map(|(x, v)| (x, BigInt::from(v)))
            .collect()
    }
}

pub fn check_partial(pm: &PartialMap) -> bool {
    pm.first_violation().is_none()
}

fn ensure_preserving(pm: &PartialMap) -> Result<(), CrtError> {
    match pm.first_violation() {
        Some((x, y)) => Err(CrtError::NotPreserving(x, y)),
        None => Ok(()),
    }
}

/// Constraint system whose solutions are exactly the admissible values at
/// `z`: for each value `v` taken on the fiber `F_v`, require
/// `x ≡ v (mod lcm{|b - z| : b ∈ F_v})`.
pub fn extension_system(pm: &PartialMap, z: i64) -> CrtSystem {
    let mut moduli: BTreeMap<&BigInt, BigInt> = BTreeMap::new();
    for (b, v) in pm.iter() {
        let gap = BigInt::from(b) - BigInt::from(z);
        let m = moduli.entry(v).or_insert_with(BigInt::one);
        *m = m.lcm(&gap);
    }
    moduli
        .into_iter()
        .map(|(v, m)| Congruence::new(v.clone(), m))
        .collect()
}

/// Canonical member of a solution class: the least non-negative residue, or
/// the pinned value for modulus 0.
fn canonical(c: &Congruence) -> BigInt {
    c.residue().clone()
}

/// A value `v` such that `pm ∪ {z ↦ v}` still preserves congruences.
pub fn kaarli_extend(pm: &PartialMap, z: i64) -> Result<BigInt, CrtError> {
    ensure_preserving(pm)?;
    extend_unchecked(pm, z)
}

fn extend_unchecked(pm: &PartialMap, z: i64) -> Result<BigInt, CrtError> {
    if pm.contains(z) {
        return Err(CrtError::PointInDomain(z));
    }
    let class = solve(&extension_system(pm, z)).map_err(|_| CrtError::InternalUnsolvable(z))?;
    Ok(canonical(&class))
}

/// Extends `pm` to every point of `A_n`, visiting the missing points in
/// tower order `0, -1, 1, -2, …`.
pub fn extend_to_tower(pm: &PartialMap, n: usize) -> Result<PartialMap, CrtError> {
    ensure_preserving(pm)?;
    let tower = tower_interval(n);
    if let Some(point) = pm.domain().find(|x| !tower.contains(x)) {
        return Err(CrtError::DomainExceedsTower { point, tower: n });
    }
    let mut out = pm.clone();
    for m in 0..n {
        let z = tower_point(m);
        if !out.contains(z) {
            let v = extend_unchecked(&out, z)?;
            out.insert(z, v);
        }
    }
    Ok(out)
}

/// Extends `pm` to a congruence-preserving polynomial, returned in the
/// `P_n` basis over the smallest tower containing the domain.
pub fn extend_to_polynomial(pm: &PartialMap) -> Result<PnSeries, CrtError> {
    let n = tower_cover(pm.domain());
    let total = extend_to_tower(pm, n)?;
    let series = decompose(
        |x| total.get(x).cloned().expect("tower extension covers A_n"),
        n,
    );
    if !series.certified() {
        let bad = series
            .coeffs()
            .iter()
            .enumerate()
            .find(|(i, a)| !is_multiple(a, &crate::newton::lcm_upto(*i)))
            .map_or(0, |(i, _)| i);
        return Err(CrtError::CertificateViolation(bad));
    }
    Ok(series)
}
