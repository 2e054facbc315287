//! Brick-wall lattices and their cones, given by neighbor functions, with
//! exact walk counting by frontier dynamic programming.
//!
//! Axis convention: coordinate `x_1` (index 0) is the always-available
//! vertical axis carrying `U`/`D`; coordinates `x_2, ..., x_m` carry the
//! parity-gated `R_k`/`L_k` steps. For the planar cones the horizontal
//! axis is `x_2` (index 1).

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use thiserror::Error;

use crate::exact_numbers::Count;
use crate::exec::{self, Execution};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex has dimension {got}, family {family} expects {expected}")]
    DimensionMismatch {
        family: LatticeFamily,
        expected: usize,
        got: usize,
    },
    #[error("vertex {vertex} is not in the domain of {family}")]
    OutsideDomain {
        family: LatticeFamily,
        vertex: LatticeVertex,
    },
    #[error("family {0} needs a positive dimension")]
    ZeroDimension(LatticeFamily),
    #[error("unknown lattice family `{0}`")]
    UnknownFamily(String),
    #[error("psi is only defined on vertices with coordinate sum 0 or 1, got {0}")]
    NotOnSlab(LatticeVertex),
}

/// A point of `Z^d`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeVertex(pub Vec<i64>);

impl LatticeVertex {
    pub fn origin(dim: usize) -> Self {
        Self(vec![0; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn sum(&self) -> i64 {
        self.0.iter().sum()
    }
}

impl From<Vec<i64>> for LatticeVertex {
    fn from(v: Vec<i64>) -> Self {
        Self(v)
    }
}

impl<const N: usize> From<[i64; N]> for LatticeVertex {
    fn from(v: [i64; N]) -> Self {
        Self(v.to_vec())
    }
}

impl fmt::Display for LatticeVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Graph families. `Ve(d)` is the slab graph in ambient dimension `d`
/// (i.e. `d = m + 1`); the remaining tags without a parameter are the
/// planar cones of the brick lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LatticeFamily {
    G0(usize),
    G1(usize),
    GHat1(usize),
    Ve(usize),
    BrickPlane,
    VHalfPlane,
    ReflVHalfPlane,
    HHalfPlane,
    QuarterPlane,
    ReflQuarterPlane,
}

impl LatticeFamily {
    pub const CONES: [LatticeFamily; 6] = [
        LatticeFamily::BrickPlane,
        LatticeFamily::VHalfPlane,
        LatticeFamily::ReflVHalfPlane,
        LatticeFamily::HHalfPlane,
        LatticeFamily::QuarterPlane,
        LatticeFamily::ReflQuarterPlane,
    ];

    pub fn dimension(&self) -> usize {
        use LatticeFamily::*;
        match *self {
            G0(m) | G1(m) | GHat1(m) | Ve(m) => m,
            _ => 2,
        }
    }

    /// Whether `x` is a vertex of this family (dimension not checked).
    fn contains(&self, x: &[i64]) -> bool {
        use LatticeFamily::*;
        match *self {
            G0(_) | GHat1(_) | BrickPlane => true,
            G1(_) | QuarterPlane | ReflQuarterPlane => x.iter().all(|&c| c >= 0),
            Ve(_) => matches!(x.iter().sum::<i64>(), 0 | 1),
            HHalfPlane => x[0] >= 0,
            VHalfPlane | ReflVHalfPlane => x[1] >= 0,
        }
    }

    pub fn check_vertex(&self, v: &LatticeVertex) -> Result<(), GraphError> {
        let expected = self.dimension();
        if expected == 0 {
            return Err(GraphError::ZeroDimension(*self));
        }
        if v.dim() != expected {
            return Err(GraphError::DimensionMismatch {
                family: *self,
                expected,
                got: v.dim(),
            });
        }
        if !self.contains(&v.0) {
            return Err(GraphError::OutsideDomain {
                family: *self,
                vertex: v.clone(),
            });
        }
        Ok(())
    }

    /// Edge rule of the unrestricted parent graph.
    fn base_wiring(&self) -> Wiring {
        use LatticeFamily::*;
        match *self {
            G0(_) | BrickPlane | HHalfPlane | VHalfPlane | QuarterPlane => Wiring::Brick,
            G1(_) | GHat1(_) | ReflVHalfPlane | ReflQuarterPlane => Wiring::Prefix,
            Ve(_) => Wiring::Slab,
        }
    }

    fn neighbor_coords(&self, x: &[i64], out: &mut Vec<Vec<i64>>) {
        out.clear();
        let dim = x.len();
        let mut push = |axis: usize, delta: i64| {
            let mut y = x.to_vec();
            y[axis] += delta;
            if self.contains(&y) {
                out.push(y);
            }
        };
        match self.base_wiring() {
            Wiring::Brick => {
                push(0, 1);
                push(0, -1);
                let delta = if x.iter().sum::<i64>() % 2 == 0 {
                    1
                } else {
                    -1
                };
                for axis in 1..dim {
                    push(axis, delta);
                }
            }
            Wiring::Prefix => {
                push(0, 1);
                push(0, -1);
                let mut prefix = x[0];
                for (axis, &c) in x.iter().enumerate().skip(1) {
                    prefix += c;
                    push(axis, if prefix % 2 != 0 { 1 } else { -1 });
                }
            }
            Wiring::Slab => {
                let delta = if x.iter().sum::<i64>() == 0 { 1 } else { -1 };
                for axis in 0..dim {
                    push(axis, delta);
                }
            }
        }
    }
}

#[derive(Clone, Copy)]
enum Wiring {
    /// `+e_k` (k >= 2) on even total coordinate sum, `-e_k` on odd.
    Brick,
    /// `+e_k` when `x_1 + ... + x_k` is odd, `-e_k` when even.
    Prefix,
    /// Unit steps keeping the coordinate sum in `{0, 1}`.
    Slab,
}

impl fmt::Display for LatticeFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use LatticeFamily::*;
        match self {
            G0(m) => write!(f, "G0_{m}"),
            G1(m) => write!(f, "G1_{m}"),
            GHat1(m) => write!(f, "GHat1_{m}"),
            Ve(d) => write!(f, "VE_{d}"),
            BrickPlane => write!(f, "pl"),
            VHalfPlane => write!(f, "vhp"),
            ReflVHalfPlane => write!(f, "rvhp"),
            HHalfPlane => write!(f, "hhp"),
            QuarterPlane => write!(f, "qp"),
            ReflQuarterPlane => write!(f, "rqp"),
        }
    }
}

impl FromStr for LatticeFamily {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        use LatticeFamily::*;
        let unknown = || GraphError::UnknownFamily(s.to_string());
        let cone = match s {
            "pl" | "brick" | "BrickPlane" => Some(BrickPlane),
            "vhp" | "VHalfPlane" => Some(VHalfPlane),
            "rvhp" | "ReflVHalfPlane" => Some(ReflVHalfPlane),
            "hhp" | "HHalfPlane" => Some(HHalfPlane),
            "qp" | "QuarterPlane" => Some(QuarterPlane),
            "rqp" | "ReflQuarterPlane" => Some(ReflQuarterPlane),
            _ => None,
        };
        if let Some(c) = cone {
            return Ok(c);
        }
        let (tag, dim) = s.rsplit_once('_').ok_or_else(unknown)?;
        let dim: usize = dim.parse().map_err(|_| unknown())?;
        if dim == 0 {
            return Err(unknown());
        }
        match tag {
            "G0" => Ok(G0(dim)),
            "G1" => Ok(G1(dim)),
            "GHat1" => Ok(GHat1(dim)),
            "VE" => Ok(Ve(dim)),
            _ => Err(unknown()),
        }
    }
}

/// Adjacent vertices of `v` in `family`.
pub fn neighbors(
    family: LatticeFamily,
    v: &LatticeVertex,
) -> Result<Vec<LatticeVertex>, GraphError> {
    family.check_vertex(v)?;
    let mut out = Vec::new();
    family.neighbor_coords(&v.0, &mut out);
    Ok(out.into_iter().map(LatticeVertex).collect())
}

/// Number of walks of the current length ending at each vertex. Vertices
/// with zero walks are absent.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Frontier {
    counts: HashMap<Vec<i64>, Count>,
}

impl Frontier {
    pub fn start(v: &LatticeVertex) -> Self {
        let mut counts = HashMap::new();
        counts.insert(v.0.clone(), Count::from(1u32));
        Self { counts }
    }

    pub fn get(&self, v: &LatticeVertex) -> Count {
        self.get_coords(&v.0)
    }

    pub fn get_coords(&self, x: &[i64]) -> Count {
        self.counts.get(x).cloned().unwrap_or_else(Count::zero)
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn total_mass(&self) -> Count {
        self.counts.values().sum()
    }

    /// Entries sorted by vertex, for reproducible output.
    pub fn sorted(&self) -> Vec<(LatticeVertex, Count)> {
        let mut v: Vec<_> = self
            .counts
            .iter()
            .map(|(k, c)| (LatticeVertex(k.clone()), c.clone()))
            .collect();
        v.sort_by(|a, b| a.0.cmp(&b.0));
        v
    }

    fn expand_into(
        family: LatticeFamily,
        entries: &[(&Vec<i64>, &Count)],
        acc: &mut HashMap<Vec<i64>, Count>,
    ) {
        let mut buf = Vec::new();
        for (x, c) in entries {
            family.neighbor_coords(x, &mut buf);
            for y in buf.drain(..) {
                *acc.entry(y).or_insert_with(Count::zero) += *c;
            }
        }
    }

    /// Frontier after one more step.
    pub fn step(&self, family: LatticeFamily, exec: Execution) -> Frontier {
        const CHUNK: usize = 4096;
        let entries: Vec<_> = self.counts.iter().collect();
        if exec == Execution::Sequential || entries.len() <= CHUNK {
            let mut acc = HashMap::with_capacity(entries.len() * 2);
            Self::expand_into(family, &entries, &mut acc);
            return Frontier { counts: acc };
        }
        let chunks: Vec<_> = entries.chunks(CHUNK).collect();
        let partials = exec::map_ordered(exec, &chunks, |chunk| {
            let mut acc = HashMap::with_capacity(chunk.len() * 2);
            Self::expand_into(family, chunk, &mut acc);
            acc
        });
        let mut merged: HashMap<Vec<i64>, Count> = HashMap::with_capacity(entries.len() * 2);
        for part in partials {
            for (k, c) in part {
                *merged.entry(k).or_insert_with(Count::zero) += c;
            }
        }
        Frontier { counts: merged }
    }
}

/// Frontiers after `0, 1, ..., max_length` steps from `start`.
pub fn walk_frontiers(
    family: LatticeFamily,
    start: &LatticeVertex,
    max_length: usize,
    exec: Execution,
) -> Result<Vec<Frontier>, GraphError> {
    family.check_vertex(start)?;
    let mut out = Vec::with_capacity(max_length + 1);
    out.push(Frontier::start(start));
    for _ in 0..max_length {
        let next = out.last().unwrap().step(family, exec);
        out.push(next);
    }
    Ok(out)
}

/// Exact number of walks with exactly `length` steps from `start` to `end`.
pub fn count_paths(
    family: LatticeFamily,
    start: &LatticeVertex,
    end: &LatticeVertex,
    length: usize,
) -> Result<Count, GraphError> {
    count_paths_with(family, start, end, length, Execution::default())
}

pub fn count_paths_with(
    family: LatticeFamily,
    start: &LatticeVertex,
    end: &LatticeVertex,
    length: usize,
    exec: Execution,
) -> Result<Count, GraphError> {
    family.check_vertex(start)?;
    family.check_vertex(end)?;
    let mut frontier = Frontier::start(start);
    for _ in 0..length {
        frontier = frontier.step(family, exec);
    }
    Ok(frontier.get(end))
}

/// Numbers of closed walks at `start` of every length `0..=max_length`.
pub fn closed_walk_counts(
    family: LatticeFamily,
    start: &LatticeVertex,
    max_length: usize,
    exec: Execution,
) -> Result<Vec<Count>, GraphError> {
    Ok(walk_frontiers(family, start, max_length, exec)?
        .iter()
        .map(|f| f.get(start))
        .collect())
}

/// `psi(x_0, x_1, ..., x_m) = (x_1 - x_0, x_2, ..., x_m)`, an isomorphism
/// from the slab graph `Ve(m+1)` onto `G0(m)`.
pub fn psi(v: &LatticeVertex) -> Result<LatticeVertex, GraphError> {
    if v.dim() < 2 || !matches!(v.sum(), 0 | 1) {
        return Err(GraphError::NotOnSlab(v.clone()));
    }
    let x = &v.0;
    let mut out = Vec::with_capacity(x.len() - 1);
    out.push(x[1] - x[0]);
    out.extend_from_slice(&x[2..]);
    Ok(LatticeVertex(out))
}

/// Inverse of [`psi`]. The preimage has coordinate sum `s mod 2`, where
/// `s` is the coordinate sum of `w`.
pub fn psi_inverse(w: &LatticeVertex) -> LatticeVertex {
    assert!(w.dim() >= 1, "psi_inverse needs a nonempty vertex");
    let s = w.sum();
    let x0 = (s.rem_euclid(2) - s) / 2;
    let mut out = Vec::with_capacity(w.dim() + 1);
    out.push(x0);
    out.push(w.0[0] + x0);
    out.extend_from_slice(&w.0[1..]);
    LatticeVertex(out)
}

/// All integer points of `[-radius, radius]^dim`, lexicographic.
fn box_points(dim: usize, radius: i64) -> impl Iterator<Item = Vec<i64>> {
    let side = (2 * radius + 1) as u64;
    (0..side.pow(dim as u32)).map(move |mut idx| {
        let mut x = vec![0; dim];
        for c in x.iter_mut().rev() {
            *c = (idx % side) as i64 - radius;
            idx /= side;
        }
        x
    })
}

/// Checks on `[-radius, radius]^(m+1)` that `psi` maps the neighbors of
/// every slab vertex of `Ve(m+1)` exactly onto the neighbors of its image
/// in `G0(m)`, and that `psi_inverse` undoes it. Returns the number of
/// slab vertices checked, or the first vertex where this fails.
pub fn check_psi_isomorphism(m: usize, radius: i64) -> Result<usize, LatticeVertex> {
    let sorted = |mut vs: Vec<LatticeVertex>| {
        vs.sort();
        vs
    };
    let mut checked = 0;
    for x in box_points(m + 1, radius) {
        let p = LatticeVertex(x);
        if !matches!(p.sum(), 0 | 1) {
            continue;
        }
        let q = psi(&p).map_err(|_| p.clone())?;
        let mapped: Result<Vec<_>, _> = neighbors(LatticeFamily::Ve(m + 1), &p)
            .map_err(|_| p.clone())?
            .iter()
            .map(psi)
            .collect();
        let mapped = mapped.map_err(|_| p.clone())?;
        let target = neighbors(LatticeFamily::G0(m), &q).map_err(|_| p.clone())?;
        if sorted(mapped) != sorted(target) || psi_inverse(&q) != p {
            return Err(p);
        }
        checked += 1;
    }
    Ok(checked)
}
