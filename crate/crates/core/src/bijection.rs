//! Peak-preserving map from the prefix-bounded positional Motzkin words
//! `P^_{2n,k,k}` onto Dyck words of length `2n + 2` with `k + 1` peaks.
//!
//! Two stages. The preliminary stage inserts a `U` in front of the first
//! `H` lying on the axis (or at the end if there is none) and appends a `D`,
//! leaving a Motzkin word with no `H` on the axis. The second stage splits
//! that word into prime segments `U alpha D` and rewrites each one, turning
//! its own `H` letters into `U`/`D` and recursing into the inner primes.
//! Every rewritten prime contributes exactly one peak.

use std::collections::HashSet;

use thiserror::Error;

use crate::exact_numbers::{narayana, Count};
use crate::exec::{self, Execution};
use crate::word_models::{enumerate_p_hat, is_dyck, peak_count, Step, StepWord};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BijectionError {
    #[error("`{0}` is not in any P^_(2n,k,k)")]
    NotInDomain(StepWord),
    #[error("prime segment `{word}` has x = {x}, y = {y}; expected both {expected}")]
    Parity {
        word: StepWord,
        x: usize,
        y: usize,
        expected: &'static str,
    },
    #[error("`{0}` is not a prime segment")]
    NotPrime(StepWord),
}

/// Motzkin word after the preliminary stage, with the 0-based indices of
/// the inserted `U` and `D`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkedWord {
    pub steps: StepWord,
    pub inserted_up: usize,
    pub inserted_down: usize,
}

/// A factor `U alpha D` of a Motzkin word touching its baseline only at
/// both ends. `special` marks the segment holding the inserted letters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeSegment {
    pub word: StepWord,
    pub special: bool,
}

/// Membership in `P^_{2n,k,k}`: even length, `U` only at odd positions,
/// `D` only at even positions, and a Motzkin word.
pub fn in_p_hat(w: &StepWord) -> bool {
    if !w.len().is_multiple_of(2) {
        return false;
    }
    let mut height = 0i64;
    for (i, s) in w.steps().iter().enumerate() {
        let odd = i % 2 == 0;
        match s {
            Step::U if odd => height += 1,
            Step::D if !odd => height -= 1,
            Step::H => {}
            _ => return false,
        }
        if height < 0 {
            return false;
        }
    }
    height == 0
}

pub fn preliminary_stage(w: &StepWord) -> Result<MarkedWord, BijectionError> {
    if !in_p_hat(w) {
        return Err(BijectionError::NotInDomain(w.clone()));
    }
    let mut height = 0i64;
    let mut axis_h = None;
    for (i, s) in w.steps().iter().enumerate() {
        match s {
            Step::H if height == 0 => {
                axis_h = Some(i);
                break;
            }
            Step::U => height += 1,
            Step::D => height -= 1,
            _ => {}
        }
    }
    let mut steps = w.0.clone();
    let inserted_up = axis_h.unwrap_or(steps.len());
    steps.insert(inserted_up, Step::U);
    steps.push(Step::D);
    let inserted_down = steps.len() - 1;
    Ok(MarkedWord {
        steps: StepWord(steps),
        inserted_up,
        inserted_down,
    })
}

/// End index (exclusive) of the prime factor starting at `start`, which
/// must be a `U`.
fn prime_end(steps: &[Step], start: usize) -> usize {
    let mut height = 0i64;
    for (offset, s) in steps[start..].iter().enumerate() {
        match s {
            Step::U => height += 1,
            Step::D => height -= 1,
            _ => {}
        }
        if height == 0 {
            return start + offset + 1;
        }
    }
    steps.len()
}

/// Splits a marked word into its prime segments.
pub fn prime_decompose(w: &MarkedWord) -> Vec<PrimeSegment> {
    let steps = w.steps.steps();
    let mut out = Vec::new();
    let mut start = 0;
    while start < steps.len() {
        let end = prime_end(steps, start);
        let marked = |p: usize| (start..end).contains(&p);
        out.push(PrimeSegment {
            word: StepWord(steps[start..end].to_vec()),
            special: marked(w.inserted_up) || marked(w.inserted_down),
        });
        start = end;
    }
    out
}

/// Top-level structure of the interior `alpha` of a prime: the `H` runs
/// between consecutive inner primes.
struct PrimeShape<'a> {
    inner: Vec<&'a [Step]>,
    /// `H` count before the first inner prime.
    x: usize,
    /// `H` count after the last inner prime.
    y: usize,
    /// `H` counts between consecutive inner primes.
    gaps: Vec<usize>,
}

fn shape(alpha: &[Step]) -> PrimeShape<'_> {
    let mut inner = Vec::new();
    let mut runs = vec![0usize];
    let mut i = 0;
    while i < alpha.len() {
        if alpha[i] == Step::H {
            *runs.last_mut().unwrap() += 1;
            i += 1;
        } else {
            let end = prime_end(alpha, i);
            inner.push(&alpha[i..end]);
            runs.push(0);
            i = end;
        }
    }
    let x = runs[0];
    let y = *runs.last().unwrap();
    let gaps = if runs.len() > 2 {
        runs[1..runs.len() - 1].to_vec()
    } else {
        Vec::new()
    };
    PrimeShape { inner, x, y, gaps }
}

fn is_prime(steps: &[Step]) -> bool {
    steps.len() >= 2
        && steps[0] == Step::U
        && *steps.last().unwrap() == Step::D
        && prime_end(steps, 0) == steps.len()
}

fn transform(
    steps: &[Step],
    special: bool,
    out: &mut Vec<Step>,
    iterations: &mut usize,
) -> Result<(), BijectionError> {
    if !is_prime(steps) {
        return Err(BijectionError::NotPrime(StepWord(steps.to_vec())));
    }
    *iterations += 1;
    let alpha = &steps[1..steps.len() - 1];
    let s = shape(alpha);
    if s.inner.is_empty() {
        // U H^(2l) D  ->  U^(l+1) D^(l+1)
        if !alpha.len().is_multiple_of(2) {
            return Err(BijectionError::Parity {
                word: StepWord(steps.to_vec()),
                x: alpha.len(),
                y: 0,
                expected: "an even run",
            });
        }
        let l = alpha.len() / 2;
        out.extend(std::iter::repeat_n(Step::U, l + 1));
        out.extend(std::iter::repeat_n(Step::D, l + 1));
        return Ok(());
    }

    let (x, y) = (s.x, s.y);
    let expected_odd = !special;
    let parity_ok = x % 2 == y % 2 && (x % 2 == 1) == expected_odd;
    let gaps_ok = s.gaps.iter().all(|g| g % 2 == 0);
    if !parity_ok || !gaps_ok {
        return Err(BijectionError::Parity {
            word: StepWord(steps.to_vec()),
            x,
            y,
            expected: if special { "even" } else { "odd" },
        });
    }
    let (u, v) = if x <= y {
        if x == 0 {
            return Err(BijectionError::Parity {
                word: StepWord(steps.to_vec()),
                x,
                y,
                expected: "positive x when x <= y",
            });
        }
        (x - 1, (y - x) / 2 + 1)
    } else {
        (y, (x - y) / 2)
    };
    let half_gaps: Vec<usize> = s.gaps.iter().map(|g| g / 2).collect();
    let gap_total: usize = half_gaps.iter().sum();

    out.extend(std::iter::repeat_n(Step::U, u + 1 + gap_total + v));
    out.extend(std::iter::repeat_n(Step::D, v));
    for (idx, inner) in s.inner.iter().enumerate() {
        transform(inner, false, out, iterations)?;
        if let Some(&g) = half_gaps.get(idx) {
            out.extend(std::iter::repeat_n(Step::D, g));
        }
    }
    out.extend(std::iter::repeat_n(Step::D, u + 1));
    Ok(())
}

/// Rewrites one prime segment (recursively, including its inner primes).
pub fn transform_prime(p: &PrimeSegment) -> Result<StepWord, BijectionError> {
    let mut out = Vec::with_capacity(p.word.len());
    let mut iterations = 0;
    transform(p.word.steps(), p.special, &mut out, &mut iterations)?;
    Ok(StepWord(out))
}

/// The Dyck image of `w` together with the number of prime rewrites
/// performed.
pub fn motzkin_to_dyck_traced(w: &StepWord) -> Result<(StepWord, usize), BijectionError> {
    let marked = preliminary_stage(w)?;
    let mut out = Vec::with_capacity(marked.steps.len());
    let mut iterations = 0;
    for seg in prime_decompose(&marked) {
        transform(seg.word.steps(), seg.special, &mut out, &mut iterations)?;
    }
    Ok((StepWord(out), iterations))
}

pub fn motzkin_to_dyck(w: &StepWord) -> Result<StepWord, BijectionError> {
    motzkin_to_dyck_traced(w).map(|(d, _)| d)
}

/// Outcome of mapping all of `P^_{2n,k,k}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BijectivityReport {
    pub n: usize,
    pub k: usize,
    pub domain_size: usize,
    pub image_size: usize,
    /// Every image is a Dyck word of length `2n+2` with `k+1` peaks and
    /// took exactly `k+1` prime rewrites.
    pub all_valid: bool,
    pub injective: bool,
    /// Image size equals `Nar(n+1, k+1)`, the number of Dyck words of
    /// length `2n+2` with `k+1` peaks.
    pub narayana_match: bool,
    /// First input that failed, if any.
    pub counterexample: Option<StepWord>,
}

impl BijectivityReport {
    pub fn passed(&self) -> bool {
        self.all_valid && self.injective && self.narayana_match
    }
}

pub fn verify_bijectivity(n: usize, k: usize) -> BijectivityReport {
    verify_bijectivity_with(n, k, Execution::default())
}

pub fn verify_bijectivity_with(n: usize, k: usize, exec: Execution) -> BijectivityReport {
    let domain = enumerate_p_hat(2 * n, k, k);
    let images = exec::map_ordered(exec, &domain, |w| {
        let (d, iterations) = motzkin_to_dyck_traced(w).ok()?;
        let valid = d.len() == 2 * n + 2
            && is_dyck(&d).unwrap_or(false)
            && peak_count(&d) == k + 1
            && iterations == k + 1;
        valid.then_some(d)
    });
    let counterexample = domain
        .iter()
        .zip(&images)
        .find(|(_, img)| img.is_none())
        .map(|(w, _)| w.clone());
    let all_valid = counterexample.is_none();
    let distinct: HashSet<&StepWord> = images.iter().flatten().collect();
    let image_size = distinct.len();
    let injective = all_valid && image_size == domain.len();
    let target = narayana(n as u64 + 1, k as i64 + 1);
    BijectivityReport {
        n,
        k,
        domain_size: domain.len(),
        image_size,
        all_valid,
        injective,
        narayana_match: Count::from(image_size) == target,
        counterexample,
    }
}
