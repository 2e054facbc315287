//! Closed formulas for walks from the origin on the planar brick lattice
//! `G0(2)` and its cones.
//!
//! Endpoint convention: `i` is the horizontal (`R`/`L`, coordinate `x_2`)
//! displacement and `j` the vertical (`U`/`D`, coordinate `x_1`) one. This
//! binding reproduces brute-force counts on every cone; the transposed one
//! does not.
//!
//! The vertical half-planes and the quarter-planes only have closed forms
//! on the column `i = 0`; [`ConeQuery::evaluate`] falls back to frontier
//! counting elsewhere.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::exact_numbers::{binomial, narayana, Count};
use crate::exec::Execution;
use crate::lattice_graphs::{count_paths_with, LatticeFamily, LatticeVertex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConeError {
    #[error("negative vertical index j = {0} is not supported")]
    NegativeVertical(i64),
    #[error("{0} is not one of the six planar cones")]
    NotACone(LatticeFamily),
    #[error("endpoint ({i}, {j}) lies outside {family}")]
    OutsideCone {
        family: LatticeFamily,
        i: i64,
        j: i64,
    },
}

fn b(n: i64, k: i64) -> Count {
    binomial(n, k)
}

/// `Nar(n, k)` with `Nar(0, _) = 0`.
fn nar(n: i64, k: i64) -> Count {
    if n < 1 {
        Count::zero()
    } else {
        narayana(n as u64, k)
    }
}

fn parity_mismatch(i: i64, j: i64, n: i64) -> bool {
    (i + j + n).rem_euclid(2) == 1
}

/// Converts an exact rational sum known to be a nonnegative integer.
fn integral(sum: BigRational) -> Count {
    assert!(
        sum.is_integer(),
        "closed form produced a non-integer: {sum}"
    );
    assert!(
        !sum.is_negative(),
        "closed form produced a negative value: {sum}"
    );
    sum.to_integer().to_biguint().unwrap()
}

fn frac(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn big(c: Count) -> BigRational {
    BigRational::from_integer(BigInt::from(c))
}

/// Walks on the full brick plane from the origin to `(i, j)` in `n` steps.
pub fn h_pl(i: i64, j: i64, n_steps: i64) -> Count {
    if n_steps < 0 || parity_mismatch(i, j, n_steps) {
        return Count::zero();
    }
    let (hi, hr) = i.div_mod_floor(&2);
    let (vj, vr) = j.div_mod_floor(&2);
    let half = Integer::div_floor(&n_steps, &2);
    (0..=half)
        .map(|k| match (hr, vr) {
            (0, 0) => b(2 * k, k + vj) * b(half, k + hi) * b(half, k - hi),
            (1, 1) => b(2 * k + 1, k + vj + 1) * b(half, k + hi + 1) * b(half, k - hi),
            (1, 0) => b(2 * k, k + vj) * b(half, k + hi) * b(half + 1, k - hi),
            _ => b(2 * k + 1, k + vj + 1) * b(half, k + hi) * b(half + 1, k - hi + 1),
        })
        .sum()
}

fn nonneg(j: i64) -> Result<(), ConeError> {
    if j < 0 {
        Err(ConeError::NegativeVertical(j))
    } else {
        Ok(())
    }
}

/// Horizontal half-plane `x_1 >= 0`, by reflection across `j = -1`.
pub fn h_hhp(i: i64, j: i64, n_steps: i64) -> Result<Count, ConeError> {
    nonneg(j)?;
    // The reflected term never exceeds the direct one.
    Ok(h_pl(i, j, n_steps) - h_pl(i, j + 2, n_steps))
}

/// Vertical half-plane `x_2 >= 0`, endpoint `(0, j)`.
pub fn h_vhp(j: i64, n_steps: i64) -> Result<Count, ConeError> {
    nonneg(j)?;
    Ok(vhp_column(j, n_steps))
}

fn vhp_column(j: i64, n_steps: i64) -> Count {
    if n_steps < 0 || parity_mismatch(0, j, n_steps) {
        return Count::zero();
    }
    let (vj, vr) = j.div_mod_floor(&2);
    let half = Integer::div_floor(&n_steps, &2);
    (0..=half)
        .map(|k| {
            let lead = if vr == 0 {
                b(2 * k, k + vj)
            } else {
                b(2 * k + 1, k + vj + 1)
            };
            lead * nar(half + 1, k + 1)
        })
        .sum()
}

/// Reflected vertical half-plane (`G_hat_2(1)` restricted to `x_2 >= 0`),
/// endpoint `(0, j)`.
pub fn h_rvhp(j: i64, n_steps: i64) -> Result<Count, ConeError> {
    nonneg(j)?;
    if n_steps < 0 || parity_mismatch(0, j, n_steps) {
        return Ok(Count::zero());
    }
    if n_steps == 0 {
        return Ok(Count::from((j == 0) as u32));
    }
    let (vj, vr) = j.div_mod_floor(&2);
    let sum = if vr == 0 {
        let half = (n_steps - 2) / 2;
        (0..=half)
            .map(|k| b(2 * k + 2, k + vj + 1) * nar(half + 1, k + 1))
            .sum()
    } else {
        let half = (n_steps - 1) / 2;
        (0..=half)
            .map(|k| b(2 * k + 1, k + vj + 1) * nar(half + 1, k + 1))
            .sum()
    };
    Ok(sum)
}

/// Quarter-plane `x_1, x_2 >= 0` of the brick lattice, endpoint `(0, j)`.
pub fn h_qp(j: i64, n_steps: i64) -> Result<Count, ConeError> {
    nonneg(j)?;
    if n_steps < 0 || parity_mismatch(0, j, n_steps) {
        return Ok(Count::zero());
    }
    let (vj, vr) = j.div_mod_floor(&2);
    let half = Integer::div_floor(&n_steps, &2);
    let sum: BigRational = (0..=half)
        .map(|k| {
            let (weight, lead) = if vr == 0 {
                (frac(2 * vj + 1, k + vj + 1), b(2 * k, k + vj))
            } else {
                (frac(2 * vj + 2, k + vj + 2), b(2 * k + 1, k + vj + 1))
            };
            weight * big(lead * nar(half + 1, k + 1))
        })
        .sum();
    Ok(integral(sum))
}

/// Reflected quarter-plane, i.e. `G1(2)`, endpoint `(0, j)`.
pub fn h_rqp(j: i64, n_steps: i64) -> Result<Count, ConeError> {
    nonneg(j)?;
    if n_steps < 0 || parity_mismatch(0, j, n_steps) {
        return Ok(Count::zero());
    }
    if n_steps == 0 {
        return Ok(Count::from((j == 0) as u32));
    }
    let (vj, vr) = j.div_mod_floor(&2);
    let sum: BigRational = if vr == 0 {
        let half = (n_steps - 2) / 2;
        (0..=half)
            .map(|k| {
                frac(2 * vj + 1, k + vj + 2) * big(b(2 * k + 2, k + vj + 1) * nar(half + 1, k + 1))
            })
            .sum()
    } else {
        let half = (n_steps - 1) / 2;
        (0..=half)
            .map(|k| {
                frac(2 * vj + 2, k + vj + 2) * big(b(2 * k + 1, k + vj + 1) * nar(half + 1, k + 1))
            })
            .sum()
    };
    Ok(integral(sum))
}

/// Where a [`ConeQuery`] value came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConeSource {
    ClosedForm,
    /// No closed form is known for this endpoint; counted on the lattice.
    BruteForce {
        note: &'static str,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConeValue {
    pub count: Count,
    pub source: ConeSource,
}

/// A walk-count request on one of the six planar cones.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConeQuery {
    pub family: LatticeFamily,
    /// Horizontal displacement.
    pub i: i64,
    /// Vertical displacement.
    pub j: i64,
    pub n_steps: usize,
}

impl ConeQuery {
    pub fn evaluate(&self) -> Result<ConeValue, ConeError> {
        use LatticeFamily::*;
        let (i, j, n) = (self.i, self.j, self.n_steps as i64);
        let closed = |count| ConeValue {
            count,
            source: ConeSource::ClosedForm,
        };
        match self.family {
            BrickPlane => return Ok(closed(h_pl(i, j, n))),
            HHalfPlane => {
                if j < 0 {
                    return Err(ConeError::OutsideCone {
                        family: self.family,
                        i,
                        j,
                    });
                }
                return h_hhp(i, j, n).map(closed);
            }
            VHalfPlane | ReflVHalfPlane | QuarterPlane | ReflQuarterPlane => {}
            other => return Err(ConeError::NotACone(other)),
        }
        let outside = match self.family {
            VHalfPlane | ReflVHalfPlane => i < 0,
            _ => i < 0 || j < 0,
        };
        if outside {
            return Err(ConeError::OutsideCone {
                family: self.family,
                i,
                j,
            });
        }
        if i == 0 && j >= 0 {
            let count = match self.family {
                VHalfPlane => h_vhp(j, n)?,
                ReflVHalfPlane => h_rvhp(j, n)?,
                QuarterPlane => h_qp(j, n)?,
                _ => h_rqp(j, n)?,
            };
            return Ok(closed(count));
        }
        let origin = LatticeVertex::origin(2);
        let end = cone_vertex(i, j);
        let count = count_paths_with(
            self.family,
            &origin,
            &end,
            self.n_steps,
            Execution::default(),
        )
        .expect("endpoint validated against the cone");
        Ok(ConeValue {
            count,
            source: ConeSource::BruteForce {
                note: "no closed form off the i = 0 column",
            },
        })
    }
}

/// Lattice vertex `(x_1, x_2)` for a cone endpoint `(i, j)`.
pub fn cone_vertex(i: i64, j: i64) -> LatticeVertex {
    LatticeVertex(vec![j, i])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(v: u64) -> Count {
        Count::from(v)
    }

    #[test]
    fn plane_examples() {
        assert_eq!(h_pl(0, 0, 4), c(15));
        assert_eq!(h_pl(0, 0, 2), c(3));
        assert_eq!(h_pl(1, 0, 1), c(1));
        assert_eq!(h_pl(-1, 0, 1), c(0));
        assert_eq!(h_pl(0, 1, 1), c(1));
        assert_eq!(h_pl(0, -1, 1), c(1));
        assert_eq!(h_pl(0, 0, 3), c(0));
        assert_eq!(h_pl(0, 0, -2), c(0));
    }

    #[test]
    fn half_plane_examples() {
        assert_eq!(h_hhp(0, 0, 2).unwrap(), h_pl(0, 0, 2) - h_pl(0, 2, 2));
        assert_eq!(h_hhp(0, 0, 2).unwrap(), c(2));
        assert_eq!(h_hhp(0, 0, 0).unwrap(), c(1));
        assert_eq!(h_vhp(0, 2).unwrap(), c(3));
        assert_eq!(h_vhp(0, 4).unwrap(), c(13));
        assert_eq!(h_vhp(1, 1).unwrap(), c(1));
        assert_eq!(h_rvhp(0, 0).unwrap(), c(1));
        assert_eq!(h_rvhp(2, 0).unwrap(), c(0));
        assert_eq!(h_rvhp(0, 2).unwrap(), c(2));
        assert_eq!(h_hhp(0, -1, 1), Err(ConeError::NegativeVertical(-1)));
    }

    #[test]
    fn quarter_plane_examples() {
        assert_eq!(h_qp(0, 2).unwrap(), c(2));
        assert_eq!(h_qp(0, 0).unwrap(), c(1));
        assert_eq!(h_qp(0, 4).unwrap(), c(6));
        assert_eq!(
            h_qp(0, 4).unwrap(),
            h_vhp(0, 4).unwrap() - h_vhp(2, 4).unwrap()
        );
        assert_eq!(h_rqp(0, 2).unwrap(), c(1));
        assert_eq!(h_rqp(0, 4).unwrap(), c(3));
        assert_eq!(h_rqp(0, 6).unwrap(), c(12));
        assert!(h_rqp(-2, 4).is_err());
    }

    #[test]
    fn parity_vanishing() {
        for n in 0..=9i64 {
            for j in 0..=5i64 {
                if (j + n) % 2 == 1 {
                    assert!(h_vhp(j, n).unwrap().is_zero());
                    assert!(h_rvhp(j, n).unwrap().is_zero());
                    assert!(h_qp(j, n).unwrap().is_zero());
                    assert!(h_rqp(j, n).unwrap().is_zero());
                }
                for i in -3..=3i64 {
                    if (i + j + n).rem_euclid(2) == 1 {
                        assert!(h_pl(i, j, n).is_zero());
                        assert!(h_hhp(i, j, n).unwrap().is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn query_routing() {
        use LatticeFamily::*;
        let q = ConeQuery {
            family: QuarterPlane,
            i: 0,
            j: 0,
            n_steps: 4,
        };
        assert_eq!(
            q.evaluate().unwrap(),
            ConeValue {
                count: c(6),
                source: ConeSource::ClosedForm
            }
        );
        let q = ConeQuery {
            family: QuarterPlane,
            i: 1,
            j: 1,
            n_steps: 4,
        };
        let v = q.evaluate().unwrap();
        assert!(matches!(v.source, ConeSource::BruteForce { .. }));
        let q = ConeQuery {
            family: VHalfPlane,
            i: -1,
            j: 0,
            n_steps: 3,
        };
        assert!(matches!(q.evaluate(), Err(ConeError::OutsideCone { .. })));
        let q = ConeQuery {
            family: G0(2),
            i: 0,
            j: 0,
            n_steps: 2,
        };
        assert_eq!(q.evaluate(), Err(ConeError::NotACone(G0(2))));
        let q = ConeQuery {
            family: BrickPlane,
            i: -2,
            j: -2,
            n_steps: 4,
        };
        assert_eq!(q.evaluate().unwrap().count, h_pl(-2, -2, 4));
    }
}
