//! Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
//! criterion fails. Every criterion is checked at its stated tolerance.

use std::collections::HashSet;
use std::time::{Duration, Instant};

use brickwall::bijection::{motzkin_to_dyck, verify_bijectivity};
use brickwall::cone_formulas::{cone_vertex, h_hhp, h_pl, h_qp, h_rqp, h_rvhp, h_vhp};
use brickwall::exact_numbers::narayana;
use brickwall::lattice_graphs::{check_psi_isomorphism, closed_walk_counts, walk_frontiers};
use brickwall::moment_matrix::{
    integrality_report, moments_even, odd_dim_w4, ratio, ratio_int, super_ballot, OddDimConvention,
};
use brickwall::random_flights::{
    estimate_even_moments, estimate_prob_within_unit, EstimateReport, FlightConfig,
};
use brickwall::word_models::{count_abelian_squares, enumerate_p_hat, is_dyck, peak_count};
use brickwall::{Count, Execution, LatticeFamily, LatticeVertex, Ratio, Step, StepWord};
use num_traits::ToPrimitive;

struct Verdict {
    passed: bool,
    detail: String,
}

impl Verdict {
    fn new(failures: Vec<String>, summary: String) -> Self {
        match failures.first() {
            None => Verdict {
                passed: true,
                detail: summary,
            },
            Some(first) => Verdict {
                passed: false,
                detail: format!("{} failure(s), first: {first}", failures.len()),
            },
        }
    }

    fn within(mut self, elapsed: Duration, budget: Duration) -> Self {
        if elapsed > budget {
            self.passed = false;
            self.detail = format!(
                "{}; took {:.1?}, budget {:.0?}",
                self.detail, elapsed, budget
            );
        }
        self
    }
}

fn closed(family: LatticeFamily, max_len: usize) -> Vec<Count> {
    let o = LatticeVertex::origin(family.dimension());
    closed_walk_counts(family, &o, max_len, Execution::default()).unwrap()
}

fn eq_exact(a: &Count, b: &Ratio) -> bool {
    b.is_integer() && a.to_string() == b.to_integer().to_string()
}

fn plane_walks() -> Verdict {
    let mut failures = Vec::new();
    for m in 1..=4usize {
        let walks = closed(LatticeFamily::G0(m), 12);
        let exact = moments_even(&ratio_int(0), m as u32 + 1, 6).unwrap();
        for n in 0..=6 {
            if !eq_exact(&walks[2 * n], &exact[n]) {
                failures.push(format!(
                    "m={m} n={n}: walks {} vs moment {}",
                    walks[2 * n],
                    exact[n]
                ));
            }
        }
    }
    Verdict::new(failures, "28 cells, m<=4, n<=6".into())
}

fn four_dim_excursions() -> Verdict {
    let mut failures = Vec::new();
    for m in 1..=3usize {
        let walks = closed(LatticeFamily::G1(m), 12);
        let exact = moments_even(&ratio_int(1), m as u32 + 1, 5).unwrap();
        for n in 0..=5 {
            if !eq_exact(&walks[2 * n + 2], &exact[n]) {
                failures.push(format!(
                    "m={m} n={n}: walks {} vs moment {}",
                    walks[2 * n + 2],
                    exact[n]
                ));
            }
        }
    }
    Verdict::new(failures, "18 cells, m<=3, n<=5".into())
}

fn sequence_prefixes() -> Verdict {
    // The 1, 6, 66, 996 prefix is reproduced by six-step planar walks; the
    // Domb numbers proper come from four steps and are checked as well.
    let cases: [(&str, LatticeFamily, i64, &[u64]); 5] = [
        (
            "central binomial",
            LatticeFamily::G0(1),
            0,
            &[1, 2, 6, 20, 70],
        ),
        ("honeycomb", LatticeFamily::G0(2), 0, &[1, 3, 15, 93, 639]),
        (
            "1,6,66,996 (six steps)",
            LatticeFamily::G0(5),
            0,
            &[1, 6, 66, 996],
        ),
        (
            "Domb (four steps)",
            LatticeFamily::G0(3),
            0,
            &[1, 4, 28, 256, 2716],
        ),
        ("Catalan", LatticeFamily::G1(1), 1, &[1, 2, 5, 14, 42]),
    ];
    let mut failures = Vec::new();
    for (name, family, nu, known) in cases {
        let n_max = known.len() - 1;
        let shift = if nu == 1 { 2 } else { 0 };
        let walks = closed(family, 2 * n_max + shift);
        let exact = moments_even(&ratio_int(nu), family.dimension() as u32 + 1, n_max).unwrap();
        for (n, &k) in known.iter().enumerate() {
            let walk = &walks[2 * n + shift];
            if !eq_exact(walk, &exact[n]) || *walk != Count::from(k) {
                failures.push(format!(
                    "{name} n={n}: walks {walk}, matrix {}, known {k}",
                    exact[n]
                ));
            }
        }
    }
    Verdict::new(
        failures,
        "5 prefixes, matrix = brute force = known terms".into(),
    )
}

fn motzkin_narayana() -> Verdict {
    let mut failures = Vec::new();
    for n in 0..=8usize {
        for k in 0..=n {
            let size = enumerate_p_hat(2 * n, k, k).len();
            let nar = narayana(n as u64 + 1, k as i64 + 1);
            if Count::from(size) != nar {
                failures.push(format!("n={n} k={k}: {size} vs Nar={nar}"));
            }
        }
    }
    Verdict::new(failures, "45 cells, 0<=k<=n<=8".into())
}

/// Dyck words of length `2n` with `p` peaks, by filtering all `{U,D}` words.
fn dyck_words_with_peaks(n: usize, p: usize) -> HashSet<StepWord> {
    (0u32..1 << (2 * n))
        .map(|bits| {
            StepWord(
                (0..2 * n)
                    .map(|i| {
                        if bits >> (2 * n - 1 - i) & 1 == 0 {
                            Step::U
                        } else {
                            Step::D
                        }
                    })
                    .collect(),
            )
        })
        .filter(|w| is_dyck(w).unwrap() && peak_count(w) == p)
        .collect()
}

fn bijection() -> Verdict {
    let mut failures = Vec::new();
    for (input, image) in [("UDHH", "UDUUDD"), ("HHUD", "UUDUDD"), ("UHHD", "UUDDUD")] {
        let got = motzkin_to_dyck(&input.parse().unwrap()).map(|w| w.to_string());
        if got.as_deref() != Ok(image) {
            failures.push(format!("{input} -> {got:?}, expected {image}"));
        }
    }
    for n in 0..=8usize {
        for k in 0..=n {
            let report = verify_bijectivity(n, k);
            if !report.passed() {
                failures.push(format!("n={n} k={k}: {report:?}"));
                continue;
            }
            let images: HashSet<StepWord> = enumerate_p_hat(2 * n, k, k)
                .iter()
                .map(|w| motzkin_to_dyck(w).unwrap())
                .collect();
            if images != dyck_words_with_peaks(n + 1, k + 1) {
                failures.push(format!(
                    "n={n} k={k}: image differs from the Dyck words with {} peaks",
                    k + 1
                ));
            }
        }
    }
    Verdict::new(
        failures,
        "45 cells total, injective, onto; traced images match".into(),
    )
}

fn cone_formulas() -> Verdict {
    let mut failures = Vec::new();
    let mut cells = 0;
    for family in LatticeFamily::CONES {
        let frontiers =
            walk_frontiers(family, &LatticeVertex::origin(2), 10, Execution::default()).unwrap();
        let is = match family {
            LatticeFamily::BrickPlane | LatticeFamily::HHalfPlane => -3..=3,
            _ => 0..=0,
        };
        for i in is {
            for j in 0..=5i64 {
                for (n, f) in frontiers.iter().enumerate() {
                    let n = n as i64;
                    let formula = match family {
                        LatticeFamily::BrickPlane => h_pl(i, j, n),
                        LatticeFamily::HHalfPlane => h_hhp(i, j, n).unwrap(),
                        LatticeFamily::VHalfPlane => h_vhp(j, n).unwrap(),
                        LatticeFamily::ReflVHalfPlane => h_rvhp(j, n).unwrap(),
                        LatticeFamily::QuarterPlane => h_qp(j, n).unwrap(),
                        _ => h_rqp(j, n).unwrap(),
                    };
                    let brute = f.get(&cone_vertex(i, j));
                    cells += 1;
                    if formula != brute {
                        failures.push(format!(
                            "{family} i={i} j={j} n={n}: formula {formula} vs walks {brute}"
                        ));
                    }
                }
            }
        }
    }
    for j in [1i64, 3, 5] {
        for n in [1i64, 3, 5, 7, 9] {
            cells += 1;
            let (a, b) = (h_rvhp(j, n).unwrap(), h_vhp(j, n).unwrap());
            if a != b {
                failures.push(format!("inversion j={j} n={n}: {a} vs {b}"));
            }
        }
    }
    Verdict::new(failures, format!("{cells} cells, |i|<=3, 0<=j<=5, n<=10"))
}

fn abelian_squares() -> Verdict {
    let mut failures = Vec::new();
    for m in 1..=3usize {
        for n in 0..=4usize {
            let squares = count_abelian_squares(m, n).unwrap();
            let moment = &moments_even(&ratio_int(0), m as u32, n).unwrap()[n];
            if !eq_exact(&squares, moment) {
                failures.push(format!("m={m} n={n}: {squares} vs {moment}"));
            }
        }
    }
    Verdict::new(failures, "15 cells, m<=3, n<=4".into())
}

fn slab_isomorphism() -> Verdict {
    let mut failures = Vec::new();
    for m in 1..=3usize {
        if let Err(v) = check_psi_isomorphism(m, 4) {
            failures.push(format!("m={m}: neighborhoods differ at {v}"));
        }
        let slab = closed(LatticeFamily::Ve(m + 1), 10);
        let brick = closed(LatticeFamily::G0(m), 10);
        let exact = moments_even(&ratio_int(0), m as u32 + 1, 5).unwrap();
        for n in 0..=5 {
            if slab[2 * n] != brick[2 * n] || !eq_exact(&slab[2 * n], &exact[n]) {
                failures.push(format!(
                    "m={m} n={n}: slab {} brick {} moment {}",
                    slab[2 * n],
                    brick[2 * n],
                    exact[n]
                ));
            }
        }
    }
    Verdict::new(
        failures,
        "radius-4 boxes for m<=3, closed walks n<=5".into(),
    )
}

const MC_SEEDS: u64 = 20;
const MC_SAMPLES: u64 = 1_000_000;

/// Passes when at least 19 of the 20 seeds land within 4 standard errors.
fn mc_rule(
    label: String,
    exact: f64,
    reports: &[EstimateReport],
    failures: &mut Vec<String>,
    worst: &mut u64,
) {
    let inside = reports.iter().filter(|r| r.within(exact, 4.0)).count() as u64;
    *worst = (*worst).min(inside);
    if inside < 19 {
        failures.push(format!(
            "{label}: {inside}/{} seeds within 4 SE of {exact}",
            reports.len()
        ));
    }
}

fn monte_carlo() -> Verdict {
    let seeds: Vec<u64> = (1..=MC_SEEDS).collect();
    let mut failures = Vec::new();
    let mut worst = MC_SEEDS;
    for d in [2usize, 4] {
        let nu = ratio(d as i64 - 2, 2);
        for m in [2usize, 3, 4] {
            let exact = moments_even(&nu, m as u32, 3).unwrap();
            let runs: Vec<Vec<EstimateReport>> = seeds
                .iter()
                .map(|&s| {
                    estimate_even_moments(&FlightConfig::new(d, m, MC_SAMPLES, s), &[1, 2, 3])
                })
                .collect();
            for n in 1..=3 {
                let reports: Vec<_> = runs.iter().map(|r| r[n - 1]).collect();
                let x = exact[n].to_f64().unwrap();
                mc_rule(
                    format!("d={d} m={m} n={n}"),
                    x,
                    &reports,
                    &mut failures,
                    &mut worst,
                );
            }
        }
    }
    for m in [2usize, 3, 5] {
        let reports: Vec<_> = seeds
            .iter()
            .map(|&s| estimate_prob_within_unit(2, m, MC_SAMPLES, s))
            .collect();
        mc_rule(
            format!("P(<1) m={m}"),
            1.0 / (m as f64 + 1.0),
            &reports,
            &mut failures,
            &mut worst,
        );
    }
    let runs: Vec<Vec<EstimateReport>> = seeds
        .iter()
        .map(|&s| estimate_even_moments(&FlightConfig::new(3, 4, MC_SAMPLES, s), &[0, 1, 2]))
        .collect();
    for (idx, s) in [0u64, 2, 4].into_iter().enumerate() {
        let exact = odd_dim_w4(&ratio(1, 2), s, OddDimConvention::Corrected).unwrap();
        let reports: Vec<_> = runs.iter().map(|r| r[idx]).collect();
        mc_rule(
            format!("d=3 m=4 s={s}"),
            exact.to_f64().unwrap(),
            &reports,
            &mut failures,
            &mut worst,
        );
    }
    Verdict::new(
        failures,
        format!("24 quantities, worst case {worst}/{MC_SEEDS} seeds within 4 SE"),
    )
}

fn spot_values() -> Verdict {
    let mut failures = Vec::new();
    let three_halves = ratio(3, 2);
    for (s, want) in [(0u64, 1i64), (2, 4)] {
        let got = odd_dim_w4(&three_halves, s, OddDimConvention::Verbatim).unwrap();
        if got != ratio_int(want) {
            failures.push(format!("W_4(3/2; {s}) = {got}, expected {want}"));
        }
    }
    let moments = moments_even(&ratio_int(2), 2, 10).unwrap();
    for (n, w) in moments.iter().enumerate().take(9) {
        let sb = super_ballot(n as u64);
        if sb != *w {
            failures.push(format!(
                "super_ballot({n}) = {sb} but W_2(2; {}) = {w}",
                2 * n
            ));
        }
    }
    let shifted_ok = (0..=8usize).all(|n| &moments[n] * ratio_int(3) == super_ballot(n as u64 + 2));
    let cells = integrality_report(2, 4, 6).unwrap();
    let bad: Vec<_> = cells.iter().filter(|c| !c.is_integer).collect();
    if let Some(c) = bad.first() {
        failures.push(format!(
            "integrality m={} n={}: {}",
            c.steps, c.half_order, c.scaled
        ));
    }
    let mut v = Verdict::new(
        failures,
        format!("{} integrality cells integral", cells.len()),
    );
    v.detail = format!(
        "{}; 3*W_2(2;2n) = super_ballot(n+2) for n<=8: {}",
        v.detail,
        if shifted_ok { "holds" } else { "fails" }
    );
    v
}

/// Name, check and time budget in seconds.
type Criterion = (&'static str, fn() -> Verdict, u64);

fn main() {
    let criteria: [Criterion; 10] = [
        ("planar brick-wall walks match W_m(0)", plane_walks, 60),
        (
            "4D brick-wall excursions match W_m(1)",
            four_dim_excursions,
            30,
        ),
        ("known sequence prefixes, two ways", sequence_prefixes, 60),
        ("Motzkin words counted by Narayana", motzkin_narayana, 60),
        ("Motzkin-to-Dyck bijection", bijection, 60),
        ("cone walk closed forms", cone_formulas, 60),
        ("abelian squares match W_m(0)", abelian_squares, 60),
        ("slab graph isomorphic to brick wall", slab_isomorphism, 60),
        ("Monte Carlo agrees with exact moments", monte_carlo, 300),
        ("higher-dimension spot values", spot_values, 60),
    ];
    let mut failed = 0;
    for (idx, (name, run, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let verdict = run().within(start.elapsed(), Duration::from_secs(*budget));
        if !verdict.passed {
            failed += 1;
        }
        println!(
            "criterion {:>2} {} {name} [{:.1?}]: {}",
            idx + 1,
            if verdict.passed { "PASS" } else { "FAIL" },
            start.elapsed(),
            verdict.detail
        );
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
