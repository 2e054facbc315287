//! Exact integer combinatorics: binomials, Catalan, Narayana and Motzkin
//! numbers, factorials.
//!
//! Every function is total. Arguments outside the natural range of a
//! number give zero, so sums written with open bounds vanish term by term.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

/// Arbitrary-precision nonnegative integer used for all path counts.
pub type Count = BigUint;

/// `C(n, k)`, or zero when `k < 0`, `k > n` or `n < 0`.
pub fn binomial(n: i64, k: i64) -> Count {
    if n < 0 || k < 0 || k > n {
        return Count::zero();
    }
    let k = k.min(n - k) as u64;
    let n = n as u64;
    let mut acc = Count::one();
    for t in 0..k {
        acc *= n - t;
        acc /= t + 1;
    }
    acc
}

pub fn catalan(n: u64) -> Count {
    let n = n as i64;
    binomial(2 * n, n) / Count::from((n + 1) as u64)
}

/// `Nar(n, k) = C(n,k) C(n,k-1) / n`; zero outside `1 <= k <= n`.
///
/// # Panics
///
/// If `n == 0`, or if the division is inexact (it never is).
pub fn narayana(n: u64, k: i64) -> Count {
    assert!(n >= 1, "narayana requires n >= 1");
    if k < 1 || k > n as i64 {
        return Count::zero();
    }
    let num = binomial(n as i64, k) * binomial(n as i64, k - 1);
    let (q, r) = num.div_rem(&Count::from(n));
    assert!(r.is_zero(), "inexact Narayana division for ({n}, {k})");
    q
}

/// `M_n = sum_k C(n, 2k) C_k`.
pub fn motzkin(n: u64) -> Count {
    (0..=n / 2)
        .map(|k| binomial(n as i64, 2 * k as i64) * catalan(k))
        .sum()
}

pub fn factorial(n: u64) -> Count {
    (1..=n).fold(Count::one(), |acc, t| acc * t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(v: u64) -> Count {
        Count::from(v)
    }

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(4, 2), c(6));
        assert_eq!(binomial(5, 7), c(0));
        assert_eq!(binomial(0, 0), c(1));
        assert_eq!(binomial(-1, 0), c(0));
        assert_eq!(binomial(3, -1), c(0));
        assert_eq!(binomial(60, 30), c(118264581564861424));
    }

    #[test]
    fn pascal_recurrence() {
        for n in 1..=64 {
            for k in 1..=n {
                assert_eq!(
                    binomial(n, k),
                    binomial(n - 1, k - 1) + binomial(n - 1, k),
                    "({n},{k})"
                );
            }
        }
    }

    #[test]
    fn catalan_values() {
        assert_eq!(catalan(0), c(1));
        assert_eq!(catalan(3), c(5));
        assert_eq!(catalan(6), c(132));
    }

    #[test]
    fn narayana_values() {
        assert_eq!(narayana(3, 1), c(1));
        assert_eq!(narayana(3, 2), c(3));
        assert_eq!(narayana(3, 3), c(1));
        assert_eq!(narayana(5, 3), c(20));
        assert_eq!(narayana(4, 0), c(0));
        assert_eq!(narayana(4, 5), c(0));
    }

    #[test]
    #[should_panic]
    fn narayana_rejects_zero_size() {
        narayana(0, 0);
    }

    #[test]
    fn motzkin_values() {
        assert_eq!(motzkin(0), c(1));
        assert_eq!(motzkin(4), c(9));
        assert_eq!(motzkin(5), c(21));
    }

    #[test]
    fn factorial_values() {
        assert_eq!(factorial(0), c(1));
        assert_eq!(factorial(4), c(24));
        assert_eq!(factorial(10), c(3628800));
    }

    #[test]
    fn central_binomial_row_sums() {
        for i in 0..=32i64 {
            let row: Count = (0..=i).map(|j| binomial(i, j).pow(2)).sum();
            assert_eq!(row, binomial(2 * i, i), "row {i}");
        }
    }

    #[test]
    fn narayana_row_sums_are_catalan() {
        for i in 0..=32u64 {
            let row: Count = (0..=i as i64).map(|j| narayana(i + 1, j + 1)).sum();
            assert_eq!(row, catalan(i + 1), "row {i}");
        }
    }
}
