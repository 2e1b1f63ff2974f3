//! Integer-valued polynomials in the binomial basis `C(X, k)`.
//!
//! A polynomial over the rationals maps ℤ into ℤ exactly when its
//! coefficients in the basis `C(X,0), C(X,1), …` are integers. Those
//! coefficients are the iterated forward differences of the values at
//! `0, 1, …, deg`, which is the only conversion path used here.

use std::sync::RwLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NewtonError {
    /// The forward difference of order `index` is not an integer.
    #[error("polynomial is not integer-valued: coefficient of C(X,{index}) is {value}")]
    NotIntegerValued { index: usize, value: BigRational },
}

/// Generalized binomial coefficient `C(x, k) = x(x-1)…(x-k+1) / k!`,
/// valid for every integer `x` including negative ones.
pub fn binom(x: &BigInt, k: usize) -> BigInt {
    let mut falling = BigInt::one();
    let mut factorial = BigInt::one();
    for i in 0..k {
        falling *= x - BigInt::from(i);
        factorial *= BigInt::from(i + 1);
    }
    // k! divides any product of k consecutive integers.
    falling / factorial
}

static LCM_CACHE: RwLock<Vec<BigInt>> = RwLock::new(Vec::new());

/// `lcm{1, …, n}`, with `lcm_upto(0) = 1`. Results are memoized process-wide.
pub fn lcm_upto(n: usize) -> BigInt {
    {
        let cache = LCM_CACHE.read().unwrap_or_else(|e| e.into_inner());
        if let Some(v) = cache.get(n) {
            return v.clone();
        }
    }
    let mut cache = LCM_CACHE.write().unwrap_or_else(|e| e.into_inner());
    if cache.is_empty() {
        cache.push(BigInt::one());
    }
    while cache.len() <= n {
        let m = BigInt::from(cache.len());
        let next = cache[cache.len() - 1].lcm(&m);
        cache.push(next);
    }
    cache[n].clone()
}

/// Iterated forward differences `Δ^k f(0)` of a value sequence.
fn forward_differences<T>(values: &[T]) -> Vec<T>
where
    T: Clone + for<'a> std::ops::Sub<&'a T, Output = T>,
{
    let mut row = values.to_vec();
    let mut out = Vec::with_capacity(values.len());
    while let Some(first) = row.first() {
        out.push(first.clone());
        row = row.windows(2).map(|w| w[1].clone() - &w[0]).collect();
    }
    out
}

/// Polynomial `Σ λ_k · C(X, k)` with integer `λ_k`.
///
/// Trailing zero coefficients are stripped, so two polynomials are equal
/// exactly when their coefficient vectors are.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct NewtonPoly {
    coeffs: Vec<BigInt>,
}

impl NewtonPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        NewtonPoly { coeffs }
    }

    pub fn zero() -> Self {
        NewtonPoly::default()
    }

    /// `λ · C(X, k)`.
    pub fn basis(k: usize, lambda: BigInt) -> Self {
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = lambda;
        NewtonPoly::new(coeffs)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        // Running C(x, k) via C(x, k+1) = C(x, k)·(x-k)/(k+1); the division is exact.
        let mut acc = BigInt::zero();
        let mut b = BigInt::one();
        for (k, lambda) in self.coeffs.iter().enumerate() {
            if !lambda.is_zero() {
                acc += lambda * &b;
            }
            b = b * (x - BigInt::from(k)) / BigInt::from(k + 1);
        }
        acc
    }

    pub fn eval_i64(&self, x: i64) -> BigInt {
        self.eval(&BigInt::from(x))
    }

    /// Interpolates `values[i] = p(i)` for `i = 0..values.len()`. The
    /// coefficients are the forward differences at 0, so the degree is at
    /// most `values.len() - 1`.
    pub fn from_values(values: &[BigInt]) -> Self {
        NewtonPoly::new(forward_differences(values))
    }

    /// Change of basis from monomials. Fails when the input does not map ℤ
    /// into ℤ.
    pub fn from_monomial(q: &MonomialPoly) -> Result<Self, NewtonError> {
        let n = q.coeffs.len();
        let values: Vec<BigRational> = (0..n)
            .map(|i| q.eval(&BigRational::from_integer(BigInt::from(i))))
            .collect();
        let diffs = forward_differences(&values);
        let mut coeffs = Vec::with_capacity(n);
        for (index, value) in diffs.into_iter().enumerate() {
            if !value.is_integer() {
                return Err(NewtonError::NotIntegerValued { index, value });
            }
            coeffs.push(value.to_integer());
        }
        Ok(NewtonPoly::new(coeffs))
    }

    /// Expands `Σ λ_k · X(X-1)…(X-k+1)/k!` into monomials.
    pub fn to_monomial(&self) -> MonomialPoly {
        let mut out = vec![BigRational::zero(); self.coeffs.len()];
        // falling[i] = coefficient of X^i in X^{underline k}
        let mut falling: Vec<BigInt> = vec![BigInt::one()];
        let mut factorial = BigInt::one();
        for (k, lambda) in self.coeffs.iter().enumerate() {
            if k > 0 {
                // multiply by (X - (k-1))
                let shift = BigInt::from(k - 1);
                let mut next = vec![BigInt::zero(); falling.len() + 1];
                for (i, c) in falling.iter().enumerate() {
                    next[i + 1] += c;
                    next[i] -= c * &shift;
                }
                falling = next;
                factorial *= BigInt::from(k);
            }
            if lambda.is_zero() {
                continue;
            }
            for (i, c) in falling.iter().enumerate() {
                out[i] += BigRational::new(lambda * c, factorial.clone());
            }
        }
        MonomialPoly::new(out)
    }
}

/// Polynomial `Σ c_i · X^i` with exact rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct MonomialPoly {
    coeffs: Vec<BigRational>,
}

impl MonomialPoly {
    /// `BigRational` keeps fractions reduced with positive denominators.
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        MonomialPoly { coeffs }
    }

    pub fn from_integers<I: IntoIterator<Item = i64>>(coeffs: I) -> Self {
        MonomialPoly::new(
            coeffs
                .into_iter()
                .map(|c| BigRational::from_integer(BigInt::from(c)))
                .collect(),
        )
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    /// Scales every coefficient by `1/d`.
    pub fn divide(&self, d: i64) -> MonomialPoly {
        let d = BigRational::from_integer(BigInt::from(d));
        MonomialPoly::new(self.coeffs.iter().map(|c| c / &d).collect())
    }

    /// Product of polynomials; used to build test inputs such as `X²(X-1)²/2`.
    pub fn mul(&self, other: &MonomialPoly) -> MonomialPoly {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return MonomialPoly::default();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        MonomialPoly::new(out)
    }
}

/// `X²(X-1)²/2`, the standard example of a congruence-preserving map that
/// does not have integer monomial coefficients.
pub fn half_square_example() -> MonomialPoly {
    let x_sq_minus_x = MonomialPoly::from_integers([0, -1, 1]);
    x_sq_minus_x.mul(&x_sq_minus_x).divide(2)
}

pub(crate) fn is_multiple(value: &BigInt, modulus: &BigInt) -> bool {
    if modulus.is_zero() {
        value.is_zero()
    } else {
        (value % modulus.abs()).is_zero()
    }
}
