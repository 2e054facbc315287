//! Monte Carlo oracle for random flights: `m` unit steps in uniformly random
//! directions in `R^d`.
//!
//! Generator: ChaCha8 (`rand_chacha`). The sample range is cut into chunks
//! of [`CHUNK_SIZE`] flights; chunk `c` is seeded with
//! `splitmix64(seed ^ splitmix64(c))`. Chunk partial sums are merged in
//! chunk order with compensated summation, so results depend only on
//! `(seed, sample_count)` and never on the worker count.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::exec::{self, Execution};

pub const CHUNK_SIZE: u64 = 1 << 15;

/// Squared distances this close below 1 count as distance 1. A single
/// step lands on the sphere up to rounding.
const UNIT_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FlightConfig {
    pub dimension: usize,
    pub steps: usize,
    pub sample_count: u64,
    pub seed: u64,
}

impl FlightConfig {
    pub fn new(dimension: usize, steps: usize, sample_count: u64, seed: u64) -> Self {
        assert!(dimension >= 2, "flights need dimension >= 2");
        assert!(steps >= 1, "flights need at least one step");
        assert!(sample_count >= 1, "need at least one sample");
        Self {
            dimension,
            steps,
            sample_count,
            seed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimateReport {
    pub point_estimate: f64,
    /// Sample standard deviation over `sqrt(sample_count)`.
    pub standard_error: f64,
    pub sample_count: u64,
}

impl EstimateReport {
    /// Distance from `exact` in units of the standard error. Zero error
    /// with an exact hit gives 0, a miss gives infinity.
    pub fn z_score(&self, exact: f64) -> f64 {
        let diff = (self.point_estimate - exact).abs();
        if diff == 0.0 {
            0.0
        } else if self.standard_error == 0.0 {
            f64::INFINITY
        } else {
            diff / self.standard_error
        }
    }

    pub fn within(&self, exact: f64, sigmas: f64) -> bool {
        self.z_score(exact) <= sigmas
    }
}

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn merge(&mut self, other: &CompensatedSum) {
        self.add(other.sum);
        self.add(other.compensation);
    }

    fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    sum: CompensatedSum,
    sum_sq: CompensatedSum,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.sum.add(x);
        self.sum_sq.add(x * x);
    }

    fn merge(&mut self, other: &Moments) {
        self.sum.merge(&other.sum);
        self.sum_sq.merge(&other.sum_sq);
    }

    fn report(&self, n: u64) -> EstimateReport {
        let nf = n as f64;
        let mean = self.sum.value() / nf;
        let se = if n > 1 {
            let var = ((self.sum_sq.value() - self.sum.value() * mean) / (nf - 1.0)).max(0.0);
            (var / nf).sqrt()
        } else {
            0.0
        };
        EstimateReport {
            point_estimate: mean,
            standard_error: se,
            sample_count: n,
        }
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn chunk_rng(seed: u64, chunk: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(splitmix64(seed ^ splitmix64(chunk)))
}

/// Adds one uniform unit vector to `acc`.
fn add_step<R: Rng + ?Sized>(rng: &mut R, acc: &mut [f64], scratch: &mut [f64]) {
    if acc.len() == 2 {
        let theta = TAU * rng.random::<f64>();
        let (s, c) = theta.sin_cos();
        acc[0] += c;
        acc[1] += s;
        return;
    }
    loop {
        let mut norm_sq = 0.0;
        for g in scratch.iter_mut() {
            *g = rng.sample(StandardNormal);
            norm_sq += *g * *g;
        }
        if norm_sq > 0.0 {
            let inv = norm_sq.sqrt().recip();
            for (a, g) in acc.iter_mut().zip(scratch.iter()) {
                *a += g * inv;
            }
            return;
        }
    }
}

/// A uniformly distributed point of the unit sphere `S^(d-1)`.
pub fn sample_step<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Vec<f64> {
    assert!(d >= 2, "sample_step needs d >= 2");
    let mut acc = vec![0.0; d];
    let mut scratch = vec![0.0; d];
    add_step(rng, &mut acc, &mut scratch);
    acc
}

/// Squared end-to-end distances of consecutive flights in one chunk, fed
/// to `sink`.
fn run_chunk(cfg: &FlightConfig, chunk: u64, mut sink: impl FnMut(f64)) {
    let mut rng = chunk_rng(cfg.seed, chunk);
    let first = chunk * CHUNK_SIZE;
    let count = CHUNK_SIZE.min(cfg.sample_count - first);
    let mut acc = vec![0.0; cfg.dimension];
    let mut scratch = vec![0.0; cfg.dimension];
    for _ in 0..count {
        acc.iter_mut().for_each(|a| *a = 0.0);
        for _ in 0..cfg.steps {
            add_step(&mut rng, &mut acc, &mut scratch);
        }
        sink(acc.iter().map(|a| a * a).sum());
    }
}

fn chunk_count(samples: u64) -> usize {
    samples.div_ceil(CHUNK_SIZE) as usize
}

/// Estimates `E|S_m|^(2n)` for every `n` in `orders` from one set of
/// flights.
pub fn estimate_even_moments_with(
    cfg: &FlightConfig,
    orders: &[u32],
    exec: Execution,
) -> Vec<EstimateReport> {
    let partials = exec::map_range(exec, chunk_count(cfg.sample_count), |chunk| {
        let mut acc = vec![Moments::default(); orders.len()];
        run_chunk(cfg, chunk as u64, |r2| {
            for (m, &n) in acc.iter_mut().zip(orders) {
                m.push(r2.powi(n as i32));
            }
        });
        acc
    });
    let mut total = vec![Moments::default(); orders.len()];
    for part in &partials {
        for (t, p) in total.iter_mut().zip(part) {
            t.merge(p);
        }
    }
    total.iter().map(|m| m.report(cfg.sample_count)).collect()
}

pub fn estimate_even_moments(cfg: &FlightConfig, orders: &[u32]) -> Vec<EstimateReport> {
    estimate_even_moments_with(cfg, orders, Execution::default())
}

/// Monte Carlo estimate of the even moment `W_m(nu; 2n)`, `nu = d/2 - 1`.
pub fn estimate_even_moment(cfg: &FlightConfig, n: u32) -> EstimateReport {
    estimate_even_moments(cfg, &[n])[0]
}

/// Fraction of `m`-step flights in `R^d` ending strictly inside the unit
/// ball.
pub fn estimate_prob_within_unit(
    d: usize,
    m: usize,
    sample_count: u64,
    seed: u64,
) -> EstimateReport {
    estimate_prob_within_unit_with(d, m, sample_count, seed, Execution::default())
}

pub fn estimate_prob_within_unit_with(
    d: usize,
    m: usize,
    sample_count: u64,
    seed: u64,
    exec: Execution,
) -> EstimateReport {
    let cfg = FlightConfig::new(d, m, sample_count, seed);
    let partials = exec::map_range(exec, chunk_count(sample_count), |chunk| {
        let mut acc = Moments::default();
        run_chunk(&cfg, chunk as u64, |r2| {
            acc.push(if r2 < 1.0 - UNIT_SLACK { 1.0 } else { 0.0 })
        });
        acc
    });
    let mut total = Moments::default();
    for p in &partials {
        total.merge(p);
    }
    total.report(sample_count)
}
