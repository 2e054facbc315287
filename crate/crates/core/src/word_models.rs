//! Step words: the positional word sets `P_{n,r,l}` and their prefix-bounded
//! subsets, Dyck/Motzkin predicates, the peak statistic, the abelian-square
//! oracle and the word-to-path encoding.
//!
//! Positions are 1-indexed, so "odd positions" are the 1st, 3rd, ... letters.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::exact_numbers::Count;
use crate::lattice_graphs::{LatticeFamily, LatticeVertex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("cannot parse step word `{0}`")]
    Parse(String),
    #[error("letter {letter} at position {position} is not allowed here")]
    ForeignLetter { position: usize, letter: Step },
    #[error("abelian square search space {alphabet}^{length} exceeds 10^8")]
    TooLarge { alphabet: usize, length: usize },
    #[error("step {position} leaves the graph {family}")]
    IllegalEdge {
        position: usize,
        family: LatticeFamily,
    },
    #[error("step {position} uses axis {axis}, family {family} has dimension {dim}")]
    AxisOutOfRange {
        position: usize,
        axis: usize,
        family: LatticeFamily,
        dim: usize,
    },
}

/// One letter. `R(k)`/`L(k)` move along axis `k >= 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Step {
    U,
    D,
    H,
    R(usize),
    L(usize),
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Step::U => write!(f, "U"),
            Step::D => write!(f, "D"),
            Step::H => write!(f, "H"),
            Step::R(k) => write!(f, "R{k}"),
            Step::L(k) => write!(f, "L{k}"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StepWord(pub Vec<Step>);

impl StepWord {
    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn steps(&self) -> &[Step] {
        &self.0
    }

    pub fn count(&self, step: Step) -> usize {
        self.0.iter().filter(|&&s| s == step).count()
    }
}

impl fmt::Display for StepWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.0 {
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

impl FromStr for StepWord {
    type Err = WordError;

    /// Parses `U`, `D`, `H` and `R<k>`/`L<k>` with `k >= 2`, ignoring
    /// whitespace.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || WordError::Parse(s.to_string());
        let mut out = Vec::new();
        let mut chars = s.chars().filter(|c| !c.is_whitespace()).peekable();
        while let Some(c) = chars.next() {
            let step = match c {
                'U' => Step::U,
                'D' => Step::D,
                'H' => Step::H,
                'R' | 'L' => {
                    let mut digits = String::new();
                    while let Some(d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                        digits.push(*d);
                        chars.next();
                    }
                    let k: usize = digits.parse().map_err(|_| err())?;
                    if k < 2 {
                        return Err(err());
                    }
                    if c == 'R' {
                        Step::R(k)
                    } else {
                        Step::L(k)
                    }
                }
                _ => return Err(err()),
            };
            out.push(step);
        }
        Ok(StepWord(out))
    }
}

/// All words of length `n` over `{U, D, H}` with `r` letters `U`, all at odd
/// positions, and `l` letters `D`, all at even positions. Lexicographic
/// order with `U < D < H`.
pub fn enumerate_p(n: usize, r: usize, l: usize) -> Vec<StepWord> {
    let mut out = Vec::new();
    let mut buf = Vec::with_capacity(n);
    fill_positional(n, r, l, false, &mut buf, 0, &mut out);
    out
}

/// The subset of [`enumerate_p`] in which every prefix has at least as
/// many `U` as `D`.
pub fn enumerate_p_hat(n: usize, r: usize, l: usize) -> Vec<StepWord> {
    let mut out = Vec::new();
    let mut buf = Vec::with_capacity(n);
    fill_positional(n, r, l, true, &mut buf, 0, &mut out);
    out
}

fn fill_positional(
    n: usize,
    ups_left: usize,
    downs_left: usize,
    prefix_bounded: bool,
    buf: &mut Vec<Step>,
    height: i64,
    out: &mut Vec<StepWord>,
) {
    let pos = buf.len() + 1;
    if pos > n {
        if ups_left == 0 && downs_left == 0 {
            out.push(StepWord(buf.clone()));
        }
        return;
    }
    // Remaining odd and even slots bound what is still placeable.
    let odd_slots = n.div_ceil(2) - pos / 2;
    let even_slots = n / 2 - (pos - 1) / 2;
    if ups_left > odd_slots || downs_left > even_slots {
        return;
    }
    let odd = pos % 2 == 1;
    if odd && ups_left > 0 {
        buf.push(Step::U);
        fill_positional(
            n,
            ups_left - 1,
            downs_left,
            prefix_bounded,
            buf,
            height + 1,
            out,
        );
        buf.pop();
    }
    if !odd && downs_left > 0 && (!prefix_bounded || height > 0) {
        buf.push(Step::D);
        fill_positional(
            n,
            ups_left,
            downs_left - 1,
            prefix_bounded,
            buf,
            height - 1,
            out,
        );
        buf.pop();
    }
    buf.push(Step::H);
    fill_positional(n, ups_left, downs_left, prefix_bounded, buf, height, out);
    buf.pop();
}

fn restricted<'a>(w: &'a StepWord, allowed: &[Step]) -> Result<&'a [Step], WordError> {
    for (i, s) in w.0.iter().enumerate() {
        if !allowed.contains(s) {
            return Err(WordError::ForeignLetter {
                position: i + 1,
                letter: *s,
            });
        }
    }
    Ok(&w.0)
}

fn balanced_and_bounded(steps: &[Step]) -> bool {
    let mut height = 0i64;
    for s in steps {
        match s {
            Step::U => height += 1,
            Step::D => height -= 1,
            _ => {}
        }
        if height < 0 {
            return false;
        }
    }
    height == 0
}

pub fn is_dyck(w: &StepWord) -> Result<bool, WordError> {
    Ok(balanced_and_bounded(restricted(w, &[Step::U, Step::D])?))
}

pub fn is_motzkin(w: &StepWord) -> Result<bool, WordError> {
    Ok(balanced_and_bounded(restricted(
        w,
        &[Step::U, Step::D, Step::H],
    )?))
}

/// Number of factors `UD`.
pub fn peak_count(w: &StepWord) -> usize {
    w.0.windows(2)
        .filter(|p| p[0] == Step::U && p[1] == Step::D)
        .count()
}

/// Brute-force count of strings `xy` over `alphabet_size` letters with
/// `|x| = |y| = n` and `y` an anagram of `x`.
pub fn count_abelian_squares(alphabet_size: usize, n: usize) -> Result<Count, WordError> {
    let too_large = WordError::TooLarge {
        alphabet: alphabet_size,
        length: 2 * n,
    };
    let total = (alphabet_size as u128)
        .checked_pow(2 * n as u32)
        .ok_or(too_large.clone())?;
    if total > 100_000_000 {
        return Err(too_large);
    }
    if alphabet_size == 0 {
        return Ok(Count::from((n == 0) as u32));
    }
    let mut letters = vec![0usize; 2 * n];
    let mut hits: u64 = 0;
    let mut left = vec![0u32; alphabet_size];
    let mut right = vec![0u32; alphabet_size];
    'outer: loop {
        left.iter_mut().for_each(|c| *c = 0);
        right.iter_mut().for_each(|c| *c = 0);
        for &a in &letters[..n] {
            left[a] += 1;
        }
        for &a in &letters[n..] {
            right[a] += 1;
        }
        if left == right {
            hits += 1;
        }
        // Odometer increment.
        for slot in letters.iter_mut() {
            *slot += 1;
            if *slot < alphabet_size {
                continue 'outer;
            }
            *slot = 0;
        }
        break;
    }
    Ok(Count::from(hits))
}

/// Vertex sequence of `w` read from the origin, with `U -> +e_1`,
/// `D -> -e_1`, `R_k -> +e_k`, `L_k -> -e_k`. Every step must be an edge
/// of `family`. `H` is not a lattice step.
pub fn word_to_path(w: &StepWord, family: LatticeFamily) -> Result<Vec<LatticeVertex>, WordError> {
    let dim = family.dimension();
    let mut current = LatticeVertex::origin(dim);
    let mut path = vec![current.clone()];
    for (i, &s) in w.0.iter().enumerate() {
        let position = i + 1;
        let (axis, delta) = match s {
            Step::U => (1, 1),
            Step::D => (1, -1),
            Step::R(k) => (k, 1),
            Step::L(k) => (k, -1),
            Step::H => {
                return Err(WordError::ForeignLetter {
                    position,
                    letter: s,
                })
            }
        };
        if axis > dim {
            return Err(WordError::AxisOutOfRange {
                position,
                axis,
                family,
                dim,
            });
        }
        let mut next = current.clone();
        next.0[axis - 1] += delta;
        let legal = crate::lattice_graphs::neighbors(family, &current)
            .map(|ns| ns.contains(&next))
            .unwrap_or(false);
        if !legal {
            return Err(WordError::IllegalEdge { position, family });
        }
        path.push(next.clone());
        current = next;
    }
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_numbers::{binomial, narayana};

    fn w(s: &str) -> StepWord {
        s.parse().unwrap()
    }

    fn strings(ws: &[StepWord]) -> Vec<String> {
        ws.iter().map(|w| w.to_string()).collect()
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(
            w("UR2L12D").0,
            vec![Step::U, Step::R(2), Step::L(12), Step::D]
        );
        assert_eq!(w("U R2 L12 D").to_string(), "UR2L12D");
        assert_eq!(w(""), StepWord::empty());
        assert!("UX".parse::<StepWord>().is_err());
        assert!("R1".parse::<StepWord>().is_err());
        assert!("R".parse::<StepWord>().is_err());
    }

    #[test]
    fn p_examples() {
        assert_eq!(
            strings(&enumerate_p(4, 1, 1)),
            ["UDHH", "UHHD", "HDUH", "HHUD"]
        );
        assert_eq!(strings(&enumerate_p_hat(4, 1, 1)), ["UDHH", "UHHD", "HHUD"]);
        assert_eq!(enumerate_p(0, 0, 0), vec![StepWord::empty()]);
        assert!(enumerate_p_hat(2, 0, 1).is_empty());
        assert_eq!(enumerate_p_hat(6, 2, 2).len(), 6);
    }

    #[test]
    fn p_cardinalities() {
        for n in 0..=6i64 {
            for r in 0..=n + 1 {
                for l in 0..=n + 1 {
                    let (ru, lu) = (r as usize, l as usize);
                    assert_eq!(
                        Count::from(enumerate_p(2 * n as usize, ru, lu).len()),
                        binomial(n, r) * binomial(n, l)
                    );
                    assert_eq!(
                        Count::from(enumerate_p(2 * n as usize + 1, ru, lu).len()),
                        binomial(n + 1, r) * binomial(n, l)
                    );
                }
            }
        }
    }

    #[test]
    fn enumeration_is_sorted_and_distinct() {
        let ws = enumerate_p(7, 2, 2);
        assert!(ws.windows(2).all(|p| p[0] < p[1]));
    }

    #[test]
    fn p_hat_counted_by_narayana() {
        for n in 0..=8u64 {
            for k in 0..=n {
                let got = enumerate_p_hat(2 * n as usize, k as usize, k as usize).len();
                assert_eq!(
                    Count::from(got),
                    narayana(n + 1, k as i64 + 1),
                    "n={n} k={k}"
                );
            }
        }
    }

    #[test]
    fn dyck_predicate() {
        assert!(is_dyck(&w("UUDUDD")).unwrap());
        assert!(!is_dyck(&w("UDDU")).unwrap());
        assert!(is_dyck(&w("")).unwrap());
        assert!(!is_dyck(&w("UUD")).unwrap());
        assert_eq!(
            is_dyck(&w("UHD")),
            Err(WordError::ForeignLetter {
                position: 2,
                letter: Step::H
            })
        );
    }

    #[test]
    fn motzkin_predicate() {
        assert!(is_motzkin(&w("UHHD")).unwrap());
        assert!(!is_motzkin(&w("HDUH")).unwrap());
        assert!(is_motzkin(&w("HHHH")).unwrap());
        assert!(is_motzkin(&w("UR2D")).is_err());
    }

    #[test]
    fn peaks() {
        assert_eq!(peak_count(&w("UUDUDD")), 2);
        assert_eq!(peak_count(&w("UUUDDD")), 1);
        assert_eq!(peak_count(&w("UDUDUD")), 3);
        assert_eq!(peak_count(&w("")), 0);
    }

    #[test]
    fn abelian_squares() {
        assert_eq!(count_abelian_squares(2, 2).unwrap(), Count::from(6u32));
        assert_eq!(count_abelian_squares(5, 0).unwrap(), Count::from(1u32));
        assert_eq!(count_abelian_squares(3, 2).unwrap(), Count::from(15u32));
        assert!(matches!(
            count_abelian_squares(10, 5),
            Err(WordError::TooLarge { .. })
        ));
    }

    #[test]
    fn word_paths() {
        use LatticeFamily::*;
        let p = word_to_path(&w("UD"), G0(2)).unwrap();
        assert_eq!(p, vec![[0, 0].into(), [1, 0].into(), [0, 0].into()]);
        let p = word_to_path(&w("UR2L2D"), G1(2)).unwrap();
        let expected: Vec<LatticeVertex> = vec![
            [0, 0].into(),
            [1, 0].into(),
            [1, 1].into(),
            [1, 0].into(),
            [0, 0].into(),
        ];
        assert_eq!(p, expected);
        assert_eq!(
            word_to_path(&w("R2L2"), G1(2)),
            Err(WordError::IllegalEdge {
                position: 1,
                family: G1(2)
            })
        );
        assert!(matches!(
            word_to_path(&w("UR3"), G0(2)),
            Err(WordError::AxisOutOfRange { position: 2, .. })
        ));
    }
}
