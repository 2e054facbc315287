//! The lower-triangular moment matrix `A(nu)` and the even moments
//! `W_m(nu; 2n)` read off its powers.
//!
//! Entries are
//!
//! ```text
//! A_ij(nu) = C(i,j) (i+nu)! nu! / ((i-j+nu)! (j+nu)!)
//! ```
//!
//! with factorials of non-integers read through the Gamma function. For
//! `nu >= 0` the Gamma factors telescope to `prod_{t=1..j} (i+nu-t+1)/(nu+t)`,
//! which is what we evaluate, so half-integer `nu` stays exact.
//!
//! The moment of an `m`-step walk is the sum of row `n` of `A(nu)^(m-1)`.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::exact_numbers::{binomial, factorial};

/// Exact rational number in lowest terms with a positive denominator.
pub type Ratio = BigRational;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MomentError {
    #[error("nu must be nonnegative, got {0}")]
    NegativeNu(Ratio),
    #[error("step count must be at least 1")]
    ZeroSteps,
    #[error("closed form only known for nu = 1/2 and nu = 3/2, got {0}")]
    UnsupportedNu(Ratio),
    #[error("integrality report needs integer nu >= 2, got {0}")]
    IntegralityNu(u64),
}

pub fn ratio(num: i64, den: i64) -> Ratio {
    Ratio::new(BigInt::from(num), BigInt::from(den))
}

pub fn ratio_int(v: i64) -> Ratio {
    Ratio::from_integer(BigInt::from(v))
}

fn from_count(c: BigUint) -> Ratio {
    Ratio::from_integer(BigInt::from(c))
}

/// Single entry `A_ij(nu)`; zero above the diagonal.
pub fn a_entry(nu: &Ratio, i: usize, j: usize) -> Ratio {
    if j > i {
        return Ratio::zero();
    }
    let mut acc = from_count(binomial(i as i64, j as i64));
    for t in 1..=j {
        let num = nu + ratio_int((i - t + 1) as i64);
        let den = nu + ratio_int(t as i64);
        acc = acc * num / den;
    }
    acc
}

/// Square truncation of a unit lower-triangular matrix.
///
/// Only the on-and-below-diagonal part is stored: row `i` has `i + 1`
/// entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LowerTriMatrix {
    rows: Vec<Vec<Ratio>>,
}

impl LowerTriMatrix {
    pub fn identity(size: usize) -> Self {
        assert!(size >= 1, "matrix size must be at least 1");
        let rows = (0..size)
            .map(|i| {
                let mut row = vec![Ratio::zero(); i + 1];
                row[i] = Ratio::one();
                row
            })
            .collect();
        Self { rows }
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn get(&self, i: usize, j: usize) -> Ratio {
        if j > i {
            Ratio::zero()
        } else {
            self.rows[i][j].clone()
        }
    }

    /// Row `i` up to and including the diagonal.
    pub fn row(&self, i: usize) -> &[Ratio] {
        &self.rows[i]
    }

    pub fn row_sum(&self, i: usize) -> Ratio {
        self.rows[i].iter().sum()
    }

    /// Product `self * rhs`. Lower-triangular times lower-triangular only
    /// touches `j <= k <= i`.
    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.size(), rhs.size(), "size mismatch");
        let rows = (0..self.size())
            .map(|i| {
                (0..=i)
                    .map(|j| (j..=i).map(|k| &self.rows[i][k] * &rhs.rows[k][j]).sum())
                    .collect()
            })
            .collect();
        Self { rows }
    }

    /// `self^exp` by binary exponentiation. Exact arithmetic makes the
    /// result independent of the multiplication order.
    pub fn pow(&self, mut exp: u32) -> Self {
        let mut result = Self::identity(self.size());
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                result = result.mul(&base);
            }
            exp >>= 1;
            if exp > 0 {
                base = base.mul(&base);
            }
        }
        result
    }
}

/// Truncation of `A(nu)` to its leading `size x size` block.
pub fn a_matrix(nu: &Ratio, size: usize) -> LowerTriMatrix {
    assert!(size >= 1, "matrix size must be at least 1");
    let rows = (0..size)
        .map(|i| (0..=i).map(|j| a_entry(nu, i, j)).collect())
        .collect();
    LowerTriMatrix { rows }
}

fn check_query(nu: &Ratio, m: u32) -> Result<(), MomentError> {
    if nu.is_negative() {
        return Err(MomentError::NegativeNu(nu.clone()));
    }
    if m == 0 {
        return Err(MomentError::ZeroSteps);
    }
    Ok(())
}

/// `W_m(nu; 2n)` for an `m`-step walk.
pub fn moment_even(nu: &Ratio, m: u32, n: usize) -> Result<Ratio, MomentError> {
    moment_even_truncated(nu, m, n, n + 1)
}

/// Same as [`moment_even`] but with an explicit truncation size, which
/// must exceed `n`. Every size gives the same answer.
pub fn moment_even_truncated(
    nu: &Ratio,
    m: u32,
    n: usize,
    size: usize,
) -> Result<Ratio, MomentError> {
    check_query(nu, m)?;
    assert!(size > n, "truncation must contain row {n}");
    Ok(a_matrix(nu, size).pow(m - 1).row_sum(n))
}

/// `W_m(nu; 2n)` for every `n` in `0..=n_max` from a single matrix power.
pub fn moments_even(nu: &Ratio, m: u32, n_max: usize) -> Result<Vec<Ratio>, MomentError> {
    check_query(nu, m)?;
    let power = a_matrix(nu, n_max + 1).pow(m - 1);
    Ok((0..=n_max).map(|n| power.row_sum(n)).collect())
}

/// A moment request: dimension parameter, number of steps and half the
/// moment order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MomentQuery {
    pub nu: Ratio,
    pub steps: u32,
    pub half_order: usize,
}

impl MomentQuery {
    pub fn evaluate(&self) -> Result<Ratio, MomentError> {
        moment_even(&self.nu, self.steps, self.half_order)
    }
}

/// Super ballot number `6 (2n)! / (n! (n+2)!)`.
pub fn super_ballot(n: u64) -> Ratio {
    let num = factorial(2 * n) * 6u32;
    let den = factorial(n) * factorial(n + 2);
    Ratio::new(BigInt::from(num), BigInt::from(den))
}

/// How to read the odd-dimension closed forms for `W_4`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OddDimConvention {
    /// The `nu = 1/2` form with the factor `(1 - 2^(s+2))`, which makes
    /// every value negative.
    Verbatim,
    /// `(1 - 2^(s+2))` replaced by `(2^(s+2) - 1)` for `nu = 1/2`, which
    /// makes the moments positive with `W_4(1/2; 0) = 1`.
    Corrected,
}

fn pow2(e: u64) -> BigInt {
    BigInt::one() << e as usize
}

/// Closed forms of `W_4(nu; s)` for `d = 3` (`nu = 1/2`) and `d = 5`
/// (`nu = 3/2`).
pub fn odd_dim_w4(nu: &Ratio, s: u64, convention: OddDimConvention) -> Result<Ratio, MomentError> {
    let big = |v: u64| BigInt::from(v);
    if *nu == ratio(1, 2) {
        let tail: BigInt = pow2(s + 2) - 1;
        let tail = match convention {
            OddDimConvention::Verbatim => -tail,
            OddDimConvention::Corrected => tail,
        };
        let num = pow2(s + 3) * tail;
        let den = big(s + 2) * big(s + 3) * big(s + 4);
        Ok(Ratio::new(num, den))
    } else if *nu == ratio(3, 2) {
        // The second cubic carries 64 * 2^s; with that weight s = 0 gives 1.
        let sb = big(s);
        let cubic_a = &sb * &sb * &sb + big(27) * &sb * &sb + big(230) * &sb + big(616);
        let cubic_b = &sb * &sb * &sb + big(15) * &sb * &sb + big(62) * &sb + big(56);
        let num = big(12).pow(3) * pow2(s + 1) * (cubic_a + big(64) * pow2(s) * cubic_b);
        let den = [2u64, 4, 5, 6, 7, 8, 9, 10, 12]
            .iter()
            .fold(BigInt::one(), |acc, &c| acc * big(s + c));
        Ok(Ratio::new(num, den))
    } else {
        Err(MomentError::UnsupportedNu(nu.clone()))
    }
}

/// One cell of [`integrality_report`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegralityCell {
    pub steps: u32,
    pub half_order: usize,
    pub moment: Ratio,
    pub scaled: Ratio,
    pub is_integer: bool,
}

/// Checks whether `C(2nu-1, 2) * W_m(nu; 2n)` is an integer for
/// `1 <= m <= m_max`, `0 <= n <= n_max`. Reports, never asserts.
pub fn integrality_report(
    nu: u64,
    m_max: u32,
    n_max: usize,
) -> Result<Vec<IntegralityCell>, MomentError> {
    if nu < 2 {
        return Err(MomentError::IntegralityNu(nu));
    }
    let nu_r = ratio_int(nu as i64);
    let factor = from_count(binomial(2 * nu as i64 - 1, 2));
    let mut cells = Vec::new();
    for m in 1..=m_max {
        for (n, moment) in moments_even(&nu_r, m, n_max)?.into_iter().enumerate() {
            let scaled = &moment * &factor;
            cells.push(IntegralityCell {
                steps: m,
                half_order: n,
                is_integer: scaled.is_integer(),
                moment,
                scaled,
            });
        }
    }
    Ok(cells)
}
