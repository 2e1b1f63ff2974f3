//! The interleaved basis `P_n`, the interval tower `A_n`, greedy coefficient
//! extraction and the `lcm` divisibility certificates for congruence
//! preservation.
//!
//! `P_{2k} = C(X+k, 2k)` and `P_{2k+1} = C(X+k, 2k+1)`; both are
//! `C(X + ⌊n/2⌋, n)`. `P_n` vanishes on `A_n` and takes the value `(-1)^n`
//! at the next tower point `b_n`, so coefficients can be read off one point
//! at a time along `b_0, b_1, … = 0, -1, 1, -2, 2, …`.

use std::ops::RangeInclusive;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::newton::{binom, is_multiple, lcm_upto, NewtonPoly};

/// `P_n(x)`.
pub fn pn_eval(n: usize, x: &BigInt) -> BigInt {
    binom(&(x + BigInt::from(n / 2)), n)
}

/// `b_n`: `b_{2k} = k`, `b_{2k+1} = -k-1`.
pub fn tower_point(n: usize) -> i64 {
    let k = (n / 2) as i64;
    if n % 2 == 0 {
        k
    } else {
        -k - 1
    }
}

/// Position of `x` in the `b_n` enumeration; inverse of [`tower_point`].
pub fn tower_index(x: i64) -> usize {
    if x >= 0 {
        2 * x as usize
    } else {
        2 * x.unsigned_abs() as usize - 1
    }
}

/// `A_n` as an inclusive range; `A_0` is the empty range `0..=-1`.
pub fn tower_interval(n: usize) -> RangeInclusive<i64> {
    let k = (n / 2) as i64;
    if n % 2 == 0 {
        -k..=k - 1
    } else {
        -k..=k
    }
}

/// Least `N` with every point in `A_N`.
pub fn tower_cover<I: IntoIterator<Item = i64>>(points: I) -> usize {
    points
        .into_iter()
        .map(|x| tower_index(x) + 1)
        .max()
        .unwrap_or(0)
}

/// Finite sum `Σ a_n · P_n` with its certificate computed at construction.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct PnSeries {
    coeffs: Vec<BigInt>,
    certified: bool,
}

impl PnSeries {
    pub fn new(coeffs: Vec<BigInt>) -> Self {
        let certified = coeffs
            .iter()
            .enumerate()
            .all(|(n, a)| is_multiple(a, &lcm_upto(n)));
        PnSeries { coeffs, certified }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `lcm(n) | a_n` for every `n`.
    pub fn certified(&self) -> bool {
        self.certified
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, a)| !a.is_zero())
            .map(|(n, a)| a * pn_eval(n, x))
            .sum()
    }

    pub fn eval_i64(&self, x: i64) -> BigInt {
        self.eval(&BigInt::from(x))
    }

    /// The same polynomial in the binomial basis, recovered from its values
    /// on `0..len`.
    pub fn to_newton(&self) -> NewtonPoly {
        let values: Vec<BigInt> = (0..self.coeffs.len() as i64)
            .map(|x| self.eval_i64(x))
            .collect();
        NewtonPoly::from_values(&values)
    }
}

pub fn series_eval(s: &PnSeries, x: &BigInt) -> BigInt {
    s.eval(x)
}

/// Greedy extraction of `a_0, …, a_{N-1}` from the values of `f` on `A_N`:
/// `a_n · P_n(b_n) = f(b_n) - Σ_{i<n} a_i · P_i(b_n)`.
///
/// `f` is only queried at the points of `A_N`.
pub fn decompose<F>(mut f: F, n: usize) -> PnSeries
where
    F: FnMut(i64) -> BigInt,
{
    let mut coeffs: Vec<BigInt> = Vec::with_capacity(n);
    for m in 0..n {
        let b = BigInt::from(tower_point(m));
        let partial: BigInt = coeffs
            .iter()
            .enumerate()
            .filter(|(_, a)| !a.is_zero())
            .map(|(i, a)| a * pn_eval(i, &b))
            .sum();
        let residual = f(tower_point(m)) - partial;
        // P_m(b_m) = (-1)^m
        coeffs.push(if m % 2 == 0 { residual } else { -residual });
    }
    PnSeries::new(coeffs)
}

/// `lcm(k) | λ_k` for every binomial coefficient.
pub fn certify_newton(p: &NewtonPoly) -> bool {
    p.coeffs()
        .iter()
        .enumerate()
        .all(|(k, lambda)| is_multiple(lambda, &lcm_upto(k)))
}

pub fn certify_series(s: &PnSeries) -> bool {
    s.coeffs()
        .iter()
        .enumerate()
        .all(|(n, a)| is_multiple(a, &lcm_upto(n)))
}

/// Pairwise check restricted to the nodes `0..=deg`. For a polynomial of
/// degree `n` this decides preservation of every congruence.
pub fn certify_on_nodes(p: &NewtonPoly) -> bool {
    match p.degree() {
        None => true,
        Some(d) => window_oracle(|x| p.eval(x), 0, d as i64),
    }
}

/// `f_n = lcm(n) · C(X, n)`.
pub fn fn_poly(n: usize) -> NewtonPoly {
    NewtonPoly::basis(n, lcm_upto(n))
}

/// Brute-force preservation test on a window: `(x - y) | f(x) - f(y)` for
/// all `lo ≤ y < x ≤ hi`.
pub fn window_oracle<F>(f: F, lo: i64, hi: i64) -> bool
where
    F: Fn(&BigInt) -> BigInt,
{
    let values: Vec<BigInt> = (lo..=hi).map(|x| f(&BigInt::from(x))).collect();
    first_window_violation(&values, lo).is_none()
}

/// First pair `(y, x)` with `y < x` and `(x - y) ∤ f(x) - f(y)`, given the
/// values of `f` on `lo, lo+1, …`.
pub fn first_window_violation(values: &[BigInt], lo: i64) -> Option<(i64, i64)> {
    for i in 0..values.len() {
        for j in i + 1..values.len() {
            let gap = BigInt::from(j - i);
            if !is_multiple(&(&values[j] - &values[i]), &gap) {
                return Some((lo + i as i64, lo + j as i64));
            }
        }
    }
    None
}

/// Both sides of `C(x+k, n) - C(x, n) = Σ_{i=1..n} C(x, n-i) · C(k, i)`,
/// each computed directly.
pub fn vandermonde_delta(x: i64, k: i64, n: usize) -> (BigInt, BigInt) {
    let xb = BigInt::from(x);
    let kb = BigInt::from(k);
    let lhs = binom(&(&xb + &kb), n) - binom(&xb, n);
    let rhs = (1..=n).map(|i| binom(&xb, n - i) * binom(&kb, i)).sum();
    (lhs, rhs)
}

impl From<&PnSeries> for NewtonPoly {
    fn from(s: &PnSeries) -> Self {
        s.to_newton()
    }
}
