//! Verification suites behind `brickwall verify`. Every check records
//! both sides of an equality; a suite passes iff every check does.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::str::FromStr;

use brickwall::bijection::{motzkin_to_dyck, verify_bijectivity};
use brickwall::cone_formulas::{cone_vertex, h_hhp, h_pl, h_qp, h_rqp, h_rvhp, h_vhp};
use brickwall::exact_numbers::narayana;
use brickwall::lattice_graphs::{check_psi_isomorphism, closed_walk_counts, walk_frontiers};
use brickwall::moment_matrix::{
    integrality_report, moments_even, odd_dim_w4, ratio, ratio_int, super_ballot, OddDimConvention,
};
use brickwall::random_flights::{estimate_even_moments, estimate_prob_within_unit, FlightConfig};
use brickwall::word_models::{count_abelian_squares, enumerate_p_hat};
use brickwall::{Count, Execution, LatticeFamily, LatticeVertex, Ratio, StepWord};
use num_traits::ToPrimitive;

use crate::record::{OutputRecord, Provenance, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Theorems,
    Lemma,
    Bijection,
    Cones,
    Montecarlo,
    All,
}

impl Suite {
    pub fn name(&self) -> &'static str {
        match self {
            Suite::Theorems => "theorems",
            Suite::Lemma => "lemma",
            Suite::Bijection => "bijection",
            Suite::Cones => "cones",
            Suite::Montecarlo => "montecarlo",
            Suite::All => "all",
        }
    }
}

/// Upper limits for the suites, given as `key=value` pairs separated by
/// commas. Unset keys take the defaults in [`Bounds::DEFAULTS`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Bounds(BTreeMap<String, u64>);

impl Bounds {
    /// `m`: walk dimension (theorems); `n`: half-length (theorems; lemma and
    /// bijection default to 8 instead); `i`, `j`, `len`: cone endpoints and
    /// lengths; `seeds`: Monte Carlo seeds per check.
    pub const DEFAULTS: [(&'static str, u64); 6] = [
        ("m", 3),
        ("n", 4),
        ("i", 3),
        ("j", 5),
        ("len", 10),
        ("seeds", 5),
    ];

    pub fn get(&self, key: &str) -> u64 {
        self.0.get(key).copied().unwrap_or_else(|| {
            Self::DEFAULTS
                .iter()
                .find(|(k, _)| *k == key)
                .map(|(_, v)| *v)
                .expect("bound key is known")
        })
    }

    fn get_or(&self, key: &str, default: u64) -> u64 {
        self.0.get(key).copied().unwrap_or(default)
    }
}

impl FromStr for Bounds {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut map = BTreeMap::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| format!("bound `{part}` is not key=value"))?;
            let k = k.trim();
            if !Self::DEFAULTS.iter().any(|(d, _)| *d == k) {
                return Err(format!("unknown bound `{k}`"));
            }
            let v: u64 = v
                .trim()
                .parse()
                .map_err(|_| format!("bound `{k}` needs a nonnegative integer"))?;
            map.insert(k.to_string(), v);
        }
        Ok(Bounds(map))
    }
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub bounds: Bounds,
    pub samples: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub suite: &'static str,
    pub name: &'static str,
    pub params: Vec<(&'static str, String)>,
    pub lhs: Value,
    pub rhs: String,
    pub provenance: Provenance,
    pub passed: bool,
}

impl Check {
    fn exact(
        suite: &'static str,
        name: &'static str,
        params: Vec<(&'static str, String)>,
        lhs: impl Display,
        rhs: impl Display,
        provenance: Provenance,
    ) -> Self {
        let (lhs, rhs) = (lhs.to_string(), rhs.to_string());
        Self {
            suite,
            name,
            params,
            passed: lhs == rhs,
            lhs: Value::Exact(lhs),
            rhs,
            provenance,
        }
    }

    pub fn record(&self) -> OutputRecord {
        let mut r = OutputRecord {
            command: "verify".into(),
            parameters: BTreeMap::new(),
            value: self.lhs.clone(),
            provenance: self.provenance,
        };
        for (k, v) in &self.params {
            r = r.param(k, v);
        }
        r.param("suite", self.suite)
            .param("check", self.name)
            .param("expected", &self.rhs)
            .param("status", if self.passed { "pass" } else { "fail" })
    }

    /// One-line description naming both sides.
    pub fn describe(&self) -> String {
        let params = self
            .params
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(" ");
        let lhs = match &self.lhs {
            Value::Exact(s) => s.clone(),
            Value::Estimate { estimate, stderr } => format!("{estimate} +/- {stderr}"),
        };
        format!(
            "{}/{} [{params}]: {lhs} vs {}",
            self.suite, self.name, self.rhs
        )
    }
}

fn p(key: &'static str, v: impl Display) -> (&'static str, String) {
    (key, v.to_string())
}

pub fn run_suite(suite: Suite, opts: &VerifyOptions) -> Vec<Check> {
    match suite {
        Suite::Theorems => theorems(&opts.bounds),
        Suite::Lemma => lemma(&opts.bounds),
        Suite::Bijection => bijection(&opts.bounds),
        Suite::Cones => cones(&opts.bounds),
        Suite::Montecarlo => montecarlo(opts),
        Suite::All => [
            Suite::Theorems,
            Suite::Lemma,
            Suite::Bijection,
            Suite::Cones,
            Suite::Montecarlo,
        ]
        .iter()
        .flat_map(|s| run_suite(*s, opts))
        .collect(),
    }
}

fn closed_counts(family: LatticeFamily, max_len: usize) -> Vec<Count> {
    let o = LatticeVertex::origin(family.dimension());
    closed_walk_counts(family, &o, max_len, Execution::default()).expect("origin is a vertex")
}

fn theorems(b: &Bounds) -> Vec<Check> {
    const S: &str = "theorems";
    let (m_max, n_max) = (b.get("m") as usize, b.get("n") as usize);
    let mut out = Vec::new();
    for m in 1..=m_max {
        let walks = closed_counts(LatticeFamily::G0(m), 2 * n_max);
        let exact = moments_even(&ratio_int(0), m as u32 + 1, n_max).unwrap();
        for n in 0..=n_max {
            let params = vec![p("m", m), p("n", n)];
            out.push(Check::exact(
                S,
                "plane_walks",
                params,
                &walks[2 * n],
                &exact[n],
                Provenance::BruteForce,
            ));
        }
    }
    for m in 1..=m_max {
        let walks = closed_counts(LatticeFamily::G1(m), 2 * n_max + 2);
        let exact = moments_even(&ratio_int(1), m as u32 + 1, n_max).unwrap();
        for n in 0..=n_max {
            let params = vec![p("m", m), p("n", n)];
            out.push(Check::exact(
                S,
                "excursions_4d",
                params,
                &walks[2 * n + 2],
                &exact[n],
                Provenance::BruteForce,
            ));
        }
    }
    for m in 1..=m_max {
        let slab = closed_counts(LatticeFamily::Ve(m + 1), 2 * n_max);
        let brick = closed_counts(LatticeFamily::G0(m), 2 * n_max);
        for n in 0..=n_max {
            let params = vec![p("m", m), p("n", n)];
            out.push(Check::exact(
                S,
                "slab_walks",
                params,
                &slab[2 * n],
                &brick[2 * n],
                Provenance::BruteForce,
            ));
        }
        let (lhs, rhs) = match check_psi_isomorphism(m, 4) {
            Ok(count) => (
                "isomorphic".to_string(),
                format!("isomorphic ({count} vertices)"),
            ),
            Err(v) => (format!("mismatch at {v}"), "isomorphic".to_string()),
        };
        let mut c = Check::exact(
            S,
            "psi_neighborhoods",
            vec![p("m", m), p("radius", 4)],
            &lhs,
            &rhs,
            Provenance::BruteForce,
        );
        c.passed = lhs == "isomorphic";
        out.push(c);
    }
    out.extend(sequences());
    for m in 1..=m_max.min(3) {
        for n in 0..=n_max {
            let Ok(count) = count_abelian_squares(m, n) else {
                continue;
            };
            let exact = moments_even(&ratio_int(0), m as u32, n).unwrap()[n].clone();
            out.push(Check::exact(
                S,
                "abelian_squares",
                vec![p("m", m), p("n", n)],
                count,
                exact,
                Provenance::BruteForce,
            ));
        }
    }
    for n in 0..=n_max {
        let s = 2 * n as u64;
        let half = ratio(1, 2);
        let three_halves = ratio(3, 2);
        let w_half = &moments_even(&half, 4, n).unwrap()[n];
        let w_three = &moments_even(&three_halves, 4, n).unwrap()[n];
        let cf = odd_dim_w4(&half, s, OddDimConvention::Corrected).unwrap();
        out.push(Check::exact(
            S,
            "odd_dim_d3",
            vec![p("s", s)],
            cf,
            w_half,
            Provenance::ClosedForm,
        ));
        let cf = odd_dim_w4(&three_halves, s, OddDimConvention::Verbatim).unwrap();
        out.push(Check::exact(
            S,
            "odd_dim_d5",
            vec![p("s", s)],
            cf,
            w_three,
            Provenance::ClosedForm,
        ));
        let w = &moments_even(&ratio_int(2), 2, n).unwrap()[n];
        let lhs: Ratio = w * ratio_int(3);
        out.push(Check::exact(
            S,
            "super_ballot_shift",
            vec![p("n", n)],
            lhs,
            super_ballot(n as u64 + 2),
            Provenance::Matrix,
        ));
    }
    let cells = integrality_report(2, 4, 6).unwrap();
    let integral = cells.iter().filter(|c| c.is_integer).count();
    out.push(Check::exact(
        S,
        "integrality_nu2",
        vec![p("m_max", 4), p("n_max", 6)],
        integral,
        cells.len(),
        Provenance::Matrix,
    ));
    out
}

/// Named prefixes, each computed by walk counting and by the matrix and
/// compared with the known terms.
fn sequences() -> Vec<Check> {
    let cases: [(&str, LatticeFamily, u32, &[u64]); 5] = [
        (
            "central_binomial",
            LatticeFamily::G0(1),
            0,
            &[1, 2, 6, 20, 70],
        ),
        ("honeycomb", LatticeFamily::G0(2), 0, &[1, 3, 15, 93, 639]),
        ("domb", LatticeFamily::G0(3), 0, &[1, 4, 28, 256, 2716]),
        ("plane_six_steps", LatticeFamily::G0(5), 0, &[1, 6, 66, 996]),
        ("catalan", LatticeFamily::G1(1), 1, &[1, 2, 5, 14, 42]),
    ];
    let mut out = Vec::new();
    for (name, family, nu, known) in cases {
        let n_max = known.len() - 1;
        let shift = if nu == 1 { 2 } else { 0 };
        let walks = closed_counts(family, 2 * n_max + shift);
        let exact =
            moments_even(&ratio_int(nu as i64), family.dimension() as u32 + 1, n_max).unwrap();
        for (n, k) in known.iter().enumerate() {
            let walk = &walks[2 * n + shift];
            let mut c = Check::exact(
                "theorems",
                "sequence",
                vec![p("name", name), p("n", n), p("known", k)],
                walk,
                &exact[n],
                Provenance::BruteForce,
            );
            c.passed &= walk.to_string() == k.to_string();
            out.push(c);
        }
    }
    out
}

fn lemma(b: &Bounds) -> Vec<Check> {
    let n_max = b.get_or("n", 8) as usize;
    let mut out = Vec::new();
    for n in 0..=n_max {
        for k in 0..=n {
            let size = enumerate_p_hat(2 * n, k, k).len();
            let nar = narayana(n as u64 + 1, k as i64 + 1);
            out.push(Check::exact(
                "lemma",
                "motzkin_narayana",
                vec![p("n", n), p("k", k)],
                size,
                nar,
                Provenance::BruteForce,
            ));
        }
    }
    out
}

fn bijection(b: &Bounds) -> Vec<Check> {
    const S: &str = "bijection";
    let n_max = b.get_or("n", 8) as usize;
    let mut out = Vec::new();
    for (input, image) in [
        ("UDHH", "UDUUDD"),
        ("HHUD", "UUDUDD"),
        ("UHHD", "UUDDUD"),
        ("", "UD"),
    ] {
        let w: StepWord = input.parse().expect("literal word");
        let got = motzkin_to_dyck(&w)
            .map(|d| d.to_string())
            .unwrap_or_else(|e| e.to_string());
        out.push(Check::exact(
            S,
            "traced_image",
            vec![p("word", input)],
            got,
            image,
            Provenance::Bijection,
        ));
    }
    for n in 0..=n_max {
        for k in 0..=n {
            let r = verify_bijectivity(n, k);
            let mut params = vec![
                p("n", n),
                p("k", k),
                p("domain", r.domain_size),
                p("valid", r.all_valid),
                p("injective", r.injective),
            ];
            if let Some(w) = &r.counterexample {
                params.push(p("counterexample", w));
            }
            let mut c = Check::exact(
                S,
                "dyck_images",
                params,
                r.image_size,
                narayana(n as u64 + 1, k as i64 + 1),
                Provenance::Bijection,
            );
            c.passed &= r.passed();
            out.push(c);
        }
    }
    out
}

fn cones(b: &Bounds) -> Vec<Check> {
    const S: &str = "cones";
    let (i_max, j_max, len) = (b.get("i") as i64, b.get("j") as i64, b.get("len") as usize);
    let mut out = Vec::new();
    for family in LatticeFamily::CONES {
        let frontiers =
            walk_frontiers(family, &LatticeVertex::origin(2), len, Execution::default())
                .expect("origin is in every cone");
        let is = match family {
            LatticeFamily::BrickPlane | LatticeFamily::HHalfPlane => -i_max..=i_max,
            _ => 0..=0,
        };
        for i in is {
            for j in 0..=j_max {
                for (n, f) in frontiers.iter().enumerate() {
                    let n64 = n as i64;
                    let formula = match family {
                        LatticeFamily::BrickPlane => h_pl(i, j, n64),
                        LatticeFamily::HHalfPlane => h_hhp(i, j, n64).unwrap(),
                        LatticeFamily::VHalfPlane => h_vhp(j, n64).unwrap(),
                        LatticeFamily::ReflVHalfPlane => h_rvhp(j, n64).unwrap(),
                        LatticeFamily::QuarterPlane => h_qp(j, n64).unwrap(),
                        _ => h_rqp(j, n64).unwrap(),
                    };
                    let params = vec![p("family", family), p("i", i), p("j", j), p("len", n)];
                    out.push(Check::exact(
                        S,
                        "closed_form",
                        params,
                        formula,
                        f.get(&cone_vertex(i, j)),
                        Provenance::ClosedForm,
                    ));
                }
            }
        }
    }
    for j in (1..=j_max).step_by(2) {
        for n in (1..=len as i64).step_by(2) {
            let params = vec![p("j", j), p("len", n)];
            out.push(Check::exact(
                S,
                "path_inversion",
                params,
                h_rvhp(j, n).unwrap(),
                h_vhp(j, n).unwrap(),
                Provenance::ClosedForm,
            ));
        }
    }
    out
}

fn to_f64(r: &Ratio) -> f64 {
    r.to_f64().expect("moment fits in f64")
}

/// Monte Carlo checks: a check passes if at most `seeds / 20` seeds fall
/// outside 4 standard errors.
fn montecarlo(opts: &VerifyOptions) -> Vec<Check> {
    const SIGMAS: f64 = 4.0;
    let seeds = opts.bounds.get("seeds").max(1);
    let allowed = seeds / 20;
    let seed_list: Vec<u64> = (0..seeds).map(|k| opts.seed.wrapping_add(k)).collect();
    let mut out = Vec::new();
    let mut push = |name: &'static str,
                    mut params: Vec<(&'static str, String)>,
                    exact: f64,
                    reports: Vec<brickwall::random_flights::EstimateReport>| {
        let misses = reports.iter().filter(|r| !r.within(exact, SIGMAS)).count() as u64;
        let k = reports.len() as f64;
        let estimate = reports.iter().map(|r| r.point_estimate).sum::<f64>() / k;
        let stderr = (reports
            .iter()
            .map(|r| r.standard_error.powi(2))
            .sum::<f64>())
        .sqrt()
            / k;
        params.push(p("samples", opts.samples));
        params.push(p("seeds", seeds));
        params.push(p("outside_4se", misses));
        out.push(Check {
            suite: "montecarlo",
            name,
            params,
            lhs: Value::Estimate { estimate, stderr },
            rhs: exact.to_string(),
            provenance: Provenance::MonteCarlo,
            passed: misses <= allowed,
        });
    };
    for d in [2usize, 4] {
        let nu = ratio(d as i64 - 2, 2);
        for m in [2usize, 3, 4] {
            let per_seed: Vec<_> = seed_list
                .iter()
                .map(|&s| {
                    estimate_even_moments(&FlightConfig::new(d, m, opts.samples, s), &[1, 2, 3])
                })
                .collect();
            let exact = moments_even(&nu, m as u32, 3).unwrap();
            for n in 1..=3 {
                let reports = per_seed.iter().map(|r| r[n - 1]).collect();
                push(
                    "moment",
                    vec![p("d", d), p("m", m), p("n", n)],
                    to_f64(&exact[n]),
                    reports,
                );
            }
        }
    }
    for m in [2usize, 3, 5] {
        let reports = seed_list
            .iter()
            .map(|&s| estimate_prob_within_unit(2, m, opts.samples, s))
            .collect();
        push(
            "rayleigh",
            vec![p("d", 2), p("m", m)],
            1.0 / (m as f64 + 1.0),
            reports,
        );
    }
    let per_seed: Vec<_> = seed_list
        .iter()
        .map(|&s| estimate_even_moments(&FlightConfig::new(3, 4, opts.samples, s), &[0, 1, 2]))
        .collect();
    for n in 0..=2usize {
        let s = 2 * n as u64;
        let exact = odd_dim_w4(&ratio(1, 2), s, OddDimConvention::Corrected).unwrap();
        let reports = per_seed.iter().map(|r| r[n]).collect();
        push(
            "odd_dim_d3",
            vec![p("d", 3), p("m", 4), p("s", s)],
            to_f64(&exact),
            reports,
        );
    }
    out
}
