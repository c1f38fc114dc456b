//! One PASS/FAIL line per acceptance criterion.
//!
//! Each criterion collects the items that miss their tolerance. Items known
//! to be unattainable are still reported as FAIL; the run exits nonzero only
//! when an item outside that list fails.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use concept_space::concept::crisp_subsethood;
use concept_space::measure::concept_size;
use concept_space::oracle::{hyperball_identities, mc_concept_size, quadrature_check};
use concept_space::relations::{
    betweenness, implication, similarity_jaccard, similarity_sub, subsethood_degree,
    BetweennessConfig, BetweennessWeights,
};
use concept_space::{Concept, ConceptSpace};
use rand::Rng;

/// Published size digits.
const SIZE_TOL: f64 = 0.00005;
/// Subsethood, implication and Jaccard similarity.
const DEGREE_TOL: f64 = 0.005;
/// Values that must be exact.
const EXACT_TOL: f64 = 1e-6;
/// Interior betweenness values, under the best weight mode.
const BETWEEN_TOL: f64 = 0.02;
const HIT_SAMPLES: u64 = 1_000_000;

/// Items that cannot meet their target; see the README.
const UNATTAINABLE: &[&str] = &["Lemon,Apple,Orange Bsoft"];

const WEIGHT_MODES: [(&str, BetweennessWeights); 4] = [
    ("uniform", BetweennessWeights::Uniform),
    ("middle", BetweennessWeights::Middle),
    ("first", BetweennessWeights::First),
    ("mean", BetweennessWeights::Mean),
];

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

fn fruit() -> ConceptSpace {
    ConceptSpace::load(fixture("fruit.space")).unwrap()
}

struct Check {
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Check {
    fn new() -> Self {
        Self {
            failures: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn expect(&mut self, item: &str, actual: f64, expected: f64, tol: f64) {
        let residual = actual - expected;
        let line =
            format!("{item}: {actual:.6} vs {expected:.4} (residual {residual:+.6}, tol {tol})");
        if residual.abs() > tol {
            self.failures.push(item.to_string());
            self.notes.push(format!("miss {line}"));
        } else {
            self.notes.push(line);
        }
    }

    fn require(&mut self, item: &str, ok: bool, detail: String) {
        if !ok {
            self.failures.push(item.to_string());
        }
        self.notes.push(format!("{item}: {detail}"));
    }

    fn within(&mut self, item: &str, elapsed: Duration, limit: Duration) {
        self.require(
            item,
            elapsed < limit,
            format!("{elapsed:.2?} (limit {limit:?})"),
        );
    }
}

fn sizes() -> Check {
    let mut check = Check::new();
    let start = Instant::now();
    let space = fruit();
    let values: Vec<(&str, f64, f64)> = [
        ("GrannySmith", 0.0042),
        ("Orange", 0.0127),
        ("Lemon", 0.0135),
        ("Red", 0.2000),
        ("Apple", 0.1048),
    ]
    .into_iter()
    .map(|(name, want)| (name, concept_size(space.get(name).unwrap()), want))
    .collect();
    let elapsed = start.elapsed();
    for (name, got, want) in values {
        check.expect(&format!("M({name})"), got, want, SIZE_TOL);
    }
    check.within("runtime", elapsed, Duration::from_secs(1));
    check
}

const PAIRS: [(&str, &str, f64, f64); 4] = [
    ("GrannySmith", "Apple", 1.0000, 0.1171),
    ("Orange", "Apple", 0.1800, 0.0333),
    ("Lemon", "Apple", 0.0422, 0.0054),
    ("Red", "Apple", 1.0000, 0.3333),
];

fn subsethood() -> Check {
    let mut check = Check::new();
    let space = fruit();
    for (a, b, s12, s21) in PAIRS {
        let (ca, cb) = (space.get(a).unwrap(), space.get(b).unwrap());
        for (x, y, cx, cy, want) in [(a, b, ca, cb, s12), (b, a, cb, ca, s21)] {
            let sub = subsethood_degree(cx, cy).unwrap().value;
            let tol = if want == 1.0 { EXACT_TOL } else { DEGREE_TOL };
            check.expect(&format!("Sub({x},{y})"), sub, want, tol);
            let same = implication(cx, cy).unwrap().value == sub
                && similarity_sub(cx, cy).unwrap().value == sub;
            check.require(
                &format!("Impl/SimS({x},{y})"),
                same,
                format!("equal to Sub: {same}"),
            );
        }
    }
    check
}

fn jaccard() -> Check {
    let mut check = Check::new();
    let space = fruit();
    for ((a, b, _, _), want) in PAIRS.into_iter().zip([0.2570, 0.0414, 0.0073, 0.4286]) {
        let (ca, cb) = (space.get(a).unwrap(), space.get(b).unwrap());
        let ab = similarity_jaccard(ca, cb).unwrap().value;
        let ba = similarity_jaccard(cb, ca).unwrap().value;
        check.expect(&format!("SimJ({a},{b})"), ab, want, DEGREE_TOL);
        check.require(
            &format!("SimJ symmetric {a},{b}"),
            ab == ba,
            format!("difference {:e}", ab - ba),
        );
    }
    check
}

/// A triple with its expected soft and integral values and tolerances.
struct Triple {
    names: [&'static str; 3],
    soft: (f64, f64),
    integral: (f64, f64),
}

const TRIPLES: [Triple; 4] = [
    Triple {
        names: ["GrannySmith", "Apple", "Red"],
        soft: (0.0, EXACT_TOL),
        integral: (0.0, EXACT_TOL),
    },
    Triple {
        names: ["Apple", "GrannySmith", "Orange"],
        soft: (1.0, EXACT_TOL),
        integral: (1.0, EXACT_TOL),
    },
    // The soft zero is a borderline value and must be exact.
    Triple {
        names: ["Lemon", "Apple", "Orange"],
        soft: (0.0, EXACT_TOL),
        integral: (0.8623, BETWEEN_TOL),
    },
    Triple {
        names: ["Lemon", "GrannySmith", "Orange"],
        soft: (0.8254, BETWEEN_TOL),
        integral: (0.9161, BETWEEN_TOL),
    },
];

fn between() -> Check {
    let mut check = Check::new();
    let space = fruit();
    for t in TRIPLES {
        let [a, b, c] = t.names.map(|n| space.get(n).unwrap());
        let reports: Vec<_> = WEIGHT_MODES
            .iter()
            .map(|&(mode, weights)| {
                let cfg = BetweennessConfig {
                    weights,
                    ..BetweennessConfig::default()
                };
                (mode, betweenness(a, b, c, &cfg).unwrap())
            })
            .collect();
        let triple = t.names.join(",");
        let cells = [
            ("Bsoft", t.soft.0, t.soft.1, true),
            ("Bint", t.integral.0, t.integral.1, false),
        ];
        for (column, want, tol, is_soft) in cells {
            let residuals: Vec<(&str, f64)> = reports
                .iter()
                .map(|(mode, r)| (*mode, if is_soft { r.soft } else { r.integral } - want))
                .collect();
            let listed: Vec<String> = residuals
                .iter()
                .map(|(m, r)| format!("{m} {r:+.4}"))
                .collect();
            check.notes.push(format!(
                "{triple} {column} residuals: {}",
                listed.join(", ")
            ));
            let (mode, best) = residuals
                .iter()
                .copied()
                .min_by(|x, y| x.1.abs().total_cmp(&y.1.abs()))
                .unwrap();
            check.expect(&format!("{triple} {column}"), want + best, want, tol);
            check
                .notes
                .push(format!("{triple} {column} best mode: {mode}"));
        }
    }
    check
}

fn hyperball() -> Check {
    let mut check = Check::new();
    for id in hyperball_identities(HIT_SAMPLES, 0x5EED).unwrap() {
        check.require(
            &id.name,
            id.pass,
            format!(
                "{:.6} vs {:.6}, rel {:.2e} (tol {:e})",
                id.computed, id.expected, id.rel_error, id.tolerance
            ),
        );
    }
    check
}

fn oracle_equivalence() -> Check {
    let mut check = Check::new();
    let start = Instant::now();
    let mut agreeing = 0;
    for seed in 0..50u64 {
        let mut rng = common::rng(1000 + seed);
        let s = common::structure(&mut rng, 1 + (seed as usize % 4));
        let c = common::concept(&mut rng, &s, 1);
        let est = mc_concept_size(&c, HIT_SAMPLES, seed).unwrap();
        if est.agrees_with(concept_size(&c), 3.0) {
            agreeing += 1;
        } else {
            check.failures.push(format!("single-cuboid seed {seed}"));
        }
    }
    check
        .notes
        .push(format!("single-cuboid within 3 sigma: {agreeing}/50"));
    let mut biases = Vec::new();
    for seed in 0..20u64 {
        let mut rng = common::rng(2000 + seed);
        let s = common::structure(&mut rng, 1 + (seed as usize % 4));
        let k = rng.random_range(2..=3);
        let c = common::concept(&mut rng, &s, k);
        let analytic = concept_size(&c);
        let est = mc_concept_size(&c, HIT_SAMPLES, seed).unwrap();
        if analytic < est.value - 3.0 * est.std_error - est.truncation_bound {
            check.failures.push(format!("multi-cuboid seed {seed}"));
        }
        biases.push((analytic - est.value) / analytic);
    }
    let mean = biases.iter().sum::<f64>() / biases.len() as f64;
    let max = biases.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    check.notes.push(format!(
        "multi-cuboid relative bias: mean {mean:+.4}, max {max:+.4}"
    ));
    check.within("runtime", start.elapsed(), Duration::from_secs(120));
    check
}

fn random_pair(seed: u64) -> (Concept, Concept) {
    let mut rng = common::rng(seed);
    let s = common::structure(&mut rng, 1 + (seed as usize % 3));
    let a = common::concept(&mut rng, &s, 1 + (seed as usize % 2));
    match seed % 3 {
        0 => (a.clone(), common::concept(&mut rng, &s, 1)),
        1 => (a.clone(), a),
        _ => (common::nested(&mut rng, &a), a),
    }
}

fn properties() -> Check {
    let mut check = Check::new();

    let mut axiom_misses = 0;
    for seed in 0..200u64 {
        let (a, b) = random_pair(seed);
        let sub = subsethood_degree(&a, &b).unwrap().value;
        let nested = crisp_subsethood(&a, &b).holds();
        for (ab, ba) in [
            (
                similarity_sub(&a, &b).unwrap().value,
                similarity_sub(&b, &a).unwrap().value,
            ),
            (
                similarity_jaccard(&a, &b).unwrap().value,
                similarity_jaccard(&b, &a).unwrap().value,
            ),
        ] {
            let ok = (0.0..=1.0).contains(&ab)
                && (ab < 1.0 - 1e-9 || sub >= 1.0 - 1e-6)
                && (a != b || (ab - 1.0).abs() <= 1e-9)
                && (!nested || ab >= ba - 1e-9);
            if !ok {
                axiom_misses += 1;
            }
        }
    }
    check.require(
        "similarity axioms (200 pairs)",
        axiom_misses == 0,
        format!("{axiom_misses} violations"),
    );

    let mut nesting_misses = 0;
    for seed in 0..200u64 {
        let mut rng = common::rng(4000 + seed);
        let n = 1 + (seed as usize % 4);
        let s = common::structure(&mut rng, n);
        let c = common::concept(&mut rng, &s, 1 + (seed as usize % 3));
        let (lo, hi) = (rng.random_range(0.001..0.5), rng.random_range(0.5..1.0));
        for x in common::samples(&mut rng, n, 50) {
            if c.alpha_cut_contains(&x, hi).unwrap() && !c.alpha_cut_contains(&x, lo).unwrap() {
                nesting_misses += 1;
            }
        }
    }
    check.require(
        "alpha-cut nesting",
        nesting_misses == 0,
        format!("{nesting_misses} violations"),
    );

    let mut subset_misses = 0;
    for seed in 0..40u64 {
        let mut rng = common::rng(5000 + seed);
        let n = 1 + (seed as usize % 4);
        let s = common::structure(&mut rng, n);
        let outer = common::concept(&mut rng, &s, 1);
        let inner = common::nested(&mut rng, &outer);
        if !crisp_subsethood(&inner, &outer).holds() {
            subset_misses += 1;
            continue;
        }
        subset_misses += common::samples(&mut rng, n, 10_000)
            .iter()
            .filter(|x| inner.membership(x) > outer.membership(x) * (1.0 + 1e-12))
            .count();
    }
    check.require(
        "crisp subsethood pointwise (40 pairs x 10k points)",
        subset_misses == 0,
        format!("{subset_misses} violations"),
    );

    let cheap = BetweennessConfig {
        alpha_levels: 11,
        y_samples: 8,
        xz_samples: 8,
        refine_iterations: 5,
        worst_y: 1,
        ..BetweennessConfig::default()
    };
    let mut between_misses = 0;
    for seed in 0..100u64 {
        let mut rng = common::rng(seed);
        let s = common::structure(&mut rng, 1 + (seed as usize % 3));
        let k = 1 + rng.random_range(0..2);
        let [a, b, c] = [0, 1, 2].map(|_| common::concept(&mut rng, &s, k));
        let r = betweenness(&a, &b, &c, &cheap).unwrap();
        if r.integral < r.soft - 1e-12 {
            between_misses += 1;
        }
    }
    check.require(
        "integral >= soft (100 triples)",
        between_misses == 0,
        format!("{between_misses} violations"),
    );

    for n in 0..=8 {
        let q = quadrature_check(n);
        check.require(
            &format!("quadrature n={n}"),
            q.rel_error <= 1e-6,
            format!("rel {:.2e}", q.rel_error),
        );
    }
    check
}

fn cli_table() -> Check {
    let mut check = Check::new();
    let out = Command::new(env!("CARGO_BIN_EXE_conspace"))
        .arg("--space")
        .arg(fixture("fruit.space"))
        .arg("--expected")
        .arg(fixture("table2.tsv"))
        .arg("table")
        .output()
        .unwrap();
    let text = String::from_utf8_lossy(&out.stdout);
    // Diff rows: panel, row, column, expected, actual, tolerance, residual, status.
    for line in text.lines() {
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() >= 8 && cols[7] == "FAIL" {
            check.failures.push(format!("{} {}", cols[1], cols[2]));
            check.notes.push(format!(
                "FAIL cell {} {}: {} vs {}",
                cols[1], cols[2], cols[4], cols[3]
            ));
        }
    }
    if let Some(summary) = text.lines().find(|l| l.contains("cells within tolerance")) {
        check
            .notes
            .push(summary.trim_start_matches("# ").to_string());
    }
    let code = out.status.code();
    check.require("exit code", code == Some(0), format!("{code:?}"));
    check
}

fn main() {
    type Criterion = (&'static str, fn() -> Check);
    let criteria: [Criterion; 8] = [
        ("1 sizes", sizes),
        ("2 subsethood", subsethood),
        ("3 jaccard", jaccard),
        ("4 betweenness", between),
        ("5 hyperball", hyperball),
        ("6 oracle equivalence", oracle_equivalence),
        ("7 property suites", properties),
        ("8 cli table --expected", cli_table),
    ];
    let mut unexpected = Vec::new();
    for (name, run) in criteria {
        let check = run();
        let status = if check.failures.is_empty() {
            "PASS"
        } else {
            "FAIL"
        };
        println!("{status} criterion {name}");
        for note in &check.notes {
            println!("    {note}");
        }
        // A failing exit code is explained by the failing cells it lists.
        for f in &check.failures {
            let known = UNATTAINABLE.contains(&f.as_str())
                || (f == "exit code" && !check.failures.iter().all(|g| g == "exit code"));
            if !known {
                unexpected.push(format!("{name}: {f}"));
            }
        }
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected failures: {unexpected:?}");
        std::process::exit(1);
    }
}
