//! Acceptance gate: one test per criterion, each printing a
//! `criterion N PASS/FAIL` line with the measured numbers (visible with
//! `--nocapture`).

use std::collections::HashMap;
use std::process::Command;
use std::sync::OnceLock;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use dlbf::analysis::{self, deletability_curve, ModelParams};
use dlbf::codec;
use dlbf::sim::{run_experiment, run_sbf_baseline, ExperimentConfig, ReferenceModel};
use dlbf::{DeletableBloomFilter, FilterParams, RemoveOutcome};

fn check(criterion: u32, ok: bool, detail: &str) {
    println!("criterion {criterion} {}: {detail}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "criterion {criterion} failed: {detail}");
}

#[test]
fn criterion_1_model_point() {
    let pd = analysis::deletability_probability(ModelParams::new(240, 24, 5, 22).unwrap());
    check(
        1,
        (0.90..=0.96).contains(&pd),
        &format!("deletability_probability(240, 24, 5, 22) = {pd:.6}, expected in [0.90, 0.96]"),
    );
}

#[test]
fn criterion_2_low_overhead_anchor() {
    // 5 % of the bits on the bitmap (m/r = 20) at density m/n = 16.
    let points = deletability_curve(240, &[20.0], 5, &[16.0]).unwrap();
    let pd = points[0].pd;
    check(
        2,
        points[0].params.r() == 12 && points[0].params.n() == 15 && pd >= 0.90,
        &format!(
            "pd = {pd:.6} at m/r = 20 (r = {}), m/n = 16 (n = {}), expected >= 0.90",
            points[0].params.r(),
            points[0].params.n()
        ),
    );
}

/// Numeric rows of the reference CLI invocation
/// `simulate --m 240 --r 24 --k 5 --n 22 --trials 2000 --probes 500 --seed 42
/// --baseline sbf`, shared by criteria 3 and 7.
fn reference_point() -> &'static Vec<HashMap<String, f64>> {
    static ROWS: OnceLock<Vec<HashMap<String, f64>>> = OnceLock::new();
    ROWS.get_or_init(|| {
        let output = Command::new(env!("CARGO_BIN_EXE_dlbf"))
            .args([
                "simulate", "--m", "240", "--r", "24", "--k", "5", "--n", "22", "--trials",
                "2000", "--probes", "500", "--seed", "42", "--baseline", "sbf",
            ])
            .env_remove("DLBF_SEED")
            .output()
            .expect("failed to spawn dlbf");
        assert!(
            output.status.success(),
            "simulate failed: {}",
            String::from_utf8_lossy(&output.stderr)
        );
        let text = String::from_utf8(output.stdout).unwrap();
        let mut lines = text.lines();
        let header: Vec<&str> = lines.next().expect("missing header").split(',').collect();
        let rows: Vec<HashMap<String, f64>> = lines
            .map(|line| {
                header
                    .iter()
                    .zip(line.split(','))
                    .map(|(name, value)| (name.to_string(), value.parse().unwrap()))
                    .collect()
            })
            .collect();
        assert_eq!(rows.len(), 2, "expected a filter row plus a baseline row");
        rows
    })
}

#[test]
fn criterion_3_deletability_reproduction() {
    let row = &reference_point()[0];
    let deletable = row["mean_deletable"];
    let reset = row["mean_bits_reset"];
    check(
        3,
        (0.75..=0.85).contains(&deletable) && (0.30..=0.50).contains(&reset),
        &format!(
            "mean_deletable = {deletable:.4} (expected 0.80 +/- 0.05), \
             mean_bits_reset = {reset:.4} (expected 0.40 +/- 0.10)"
        ),
    );
}

struct GridPoint {
    r: u32,
    n: u32,
    mean: f64,
    ci95: f64,
    theory: f64,
}

/// Simulated deletability over {r in {24, 60, 120}} x {n in {15, 22, 30}}
/// at m = 240, k = 5, shared by criteria 4 and 5.
fn deletability_grid() -> &'static Vec<GridPoint> {
    static GRID: OnceLock<Vec<GridPoint>> = OnceLock::new();
    GRID.get_or_init(|| {
        let mut grid = Vec::new();
        for r in [24, 60, 120] {
            for n in [15, 22, 30] {
                let params = FilterParams::new(240, r, 5, 42).unwrap();
                let config = ExperimentConfig::new(params, n, 2000, 500, 42);
                let result = run_experiment(&config).expect("grid experiment");
                grid.push(GridPoint {
                    r,
                    n,
                    mean: result.deletable.mean,
                    ci95: result.deletable.ci95,
                    theory: analysis::deletability_probability(
                        ModelParams::new(240, r, 5, n).unwrap(),
                    ),
                });
            }
        }
        grid
    })
}

#[test]
fn criterion_4_theory_is_an_upper_bound() {
    let mut detail = String::new();
    let mut ok = true;
    for p in deletability_grid() {
        let bound = p.theory + 3.0 * p.ci95;
        ok &= p.mean <= bound;
        detail.push_str(&format!(
            "(r={}, n={}): sim {:.4} vs theory {:.4} + 3ci {:.4}; ",
            p.r, p.n, p.mean, p.theory, 3.0 * p.ci95
        ));
    }
    check(4, ok, detail.trim_end_matches("; "));
}

#[test]
fn criterion_5_region_count_saturation() {
    let grid = deletability_grid();
    let mut detail = String::new();
    let mut ok = true;
    for n in [15, 22, 30] {
        let at = |r: u32| {
            grid.iter()
                .find(|p| p.r == r && p.n == n)
                .map(|p| p.mean)
                .expect("grid point")
        };
        let delta = (at(120) - at(60)).abs();
        ok &= delta < 0.05;
        detail.push_str(&format!("n={n}: |deletable(r=120) - deletable(r=60)| = {delta:.4}; "));
    }
    check(5, ok, &format!("{}(expected < 0.05)", detail));
}

#[test]
fn criterion_6_fpr_orderings() {
    let mut detail = String::new();
    let mut ok = true;
    for n in [10, 22, 34] {
        let params = FilterParams::new(240, 24, 5, 42).unwrap();
        let config = ExperimentConfig::new(params, n, 2000, 500, 42);
        let dlbf = run_experiment(&config).expect("dlbf experiment");
        let sbf = run_sbf_baseline(&config).expect("sbf baseline");
        let before = dlbf.fpr_before.mean;
        let after = dlbf.fpr_after.mean;
        let plain = sbf.fpr_before.mean;
        ok &= plain <= before && after <= before;
        detail.push_str(&format!(
            "n={n}: sbf {plain:.5} <= dlbf-before {before:.5}, dlbf-after {after:.5} <= before; "
        ));
    }
    check(6, ok, detail.trim_end_matches("; "));
}

#[test]
fn criterion_7_closed_form_vs_monte_carlo() {
    let rows = reference_point();
    let dlbf_model = analysis::fpr_dlbf(240, 24, 5, 22).unwrap();
    let sbf_model = analysis::fpr_sbf(240, 5, 22).unwrap();
    let dlbf_delta = (rows[0]["mean_fpr_before"] - dlbf_model).abs();
    let dlbf_budget = 3.0 * rows[0]["ci95_fpr_before"];
    let sbf_delta = (rows[1]["mean_fpr_before"] - sbf_model).abs();
    let sbf_budget = 3.0 * rows[1]["ci95_fpr_before"];
    check(
        7,
        dlbf_delta <= dlbf_budget && sbf_delta <= sbf_budget,
        &format!(
            "filter: |{:.5} - {dlbf_model:.5}| = {dlbf_delta:.5} <= {dlbf_budget:.5}; \
             baseline: |{:.5} - {sbf_model:.5}| = {sbf_delta:.5} <= {sbf_budget:.5}",
            rows[0]["mean_fpr_before"], rows[1]["mean_fpr_before"]
        ),
    );
}

fn random_instance(rng: &mut ChaCha8Rng, max_n: usize) -> (FilterParams, Vec<Vec<u8>>) {
    let m = rng.random_range(64..=512);
    let k = rng.random_range(1..=8);
    let r = rng.random_range(k..=m / 2);
    let params = FilterParams::new(m, r, k, rng.random()).unwrap();
    let n = rng.random_range(0..=max_n);
    let elements = (0..n)
        .map(|_| rng.random::<u64>().to_le_bytes().to_vec())
        .collect();
    (params, elements)
}

fn assert_matches_reference(params: FilterParams, elements: &[Vec<u8>]) {
    let mut filter = DeletableBloomFilter::new(params);
    for e in elements {
        filter.insert(e);
    }
    let model = ReferenceModel::build(params, elements);
    assert!(model.data_bits_match(&filter), "data bits diverge at {params:?}");
    assert!(model.collision_bitmap_matches(&filter), "bitmap diverges at {params:?}");
    for e in elements {
        let expected = if model.is_deletable(e) {
            RemoveOutcome::Deleted
        } else {
            RemoveOutcome::NotDeletable
        };
        assert_eq!(filter.remove(e), expected, "removal diverges at {params:?}");
    }
    for (i, &bit) in model.residual_data_bits().iter().enumerate() {
        assert_eq!(filter.data_bits().get(i), bit, "residual bit {i} diverges at {params:?}");
    }
}

#[test]
fn criterion_8_property_suite() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5EED);

    // Zero false negatives across 1000 randomized insert/remove sequences.
    for _ in 0..1000 {
        let (params, elements) = random_instance(&mut rng, 48);
        let mut filter = DeletableBloomFilter::new(params);
        for e in &elements {
            filter.insert(e);
        }
        let mut gone = vec![false; elements.len()];
        if !elements.is_empty() {
            for _ in 0..rng.random_range(0..=2 * elements.len()) {
                let i = rng.random_range(0..elements.len());
                if filter.remove(&elements[i]) == RemoveOutcome::Deleted {
                    gone[i] = true;
                }
            }
        }
        for (e, gone) in elements.iter().zip(&gone) {
            if !gone {
                assert!(filter.query(e), "false negative at {params:?}");
            }
        }
    }

    // Removal order-independence and collision-bitmap monotonicity.
    for _ in 0..300 {
        let (params, elements) = random_instance(&mut rng, 32);
        let mut filter = DeletableBloomFilter::new(params);
        let mut marks = 0;
        for e in &elements {
            filter.insert(e);
            let now = filter.bit_counts().1;
            assert!(now >= marks, "collision mark dropped during insert at {params:?}");
            marks = now;
        }
        let mut forward = filter.clone();
        for e in &elements {
            forward.remove(e);
            assert_eq!(forward.bit_counts().1, marks, "removal changed the bitmap");
        }
        let mut order: Vec<&Vec<u8>> = elements.iter().collect();
        order.shuffle(&mut rng);
        let mut shuffled = filter.clone();
        for e in order {
            shuffled.remove(e);
        }
        assert_eq!(forward, shuffled, "removal order changed the result at {params:?}");
    }

    // Reference-model equivalence on 10^4 instances, a tenth of them the
    // smallest interesting shape (m=32, r=4, k=3).
    for case in 0..10_000 {
        if case % 10 == 0 {
            let params = FilterParams::new(32, 4, 3, rng.random()).unwrap();
            let n = rng.random_range(0..=6);
            let elements: Vec<Vec<u8>> = (0..n)
                .map(|_| rng.random::<u64>().to_le_bytes().to_vec())
                .collect();
            assert_matches_reference(params, &elements);
        } else {
            let (params, elements) = random_instance(&mut rng, 40);
            assert_matches_reference(params, &elements);
        }
    }

    // Serialization round-trip identity, including post-removal states.
    for _ in 0..300 {
        let (params, elements) = random_instance(&mut rng, 32);
        let mut filter = DeletableBloomFilter::new(params);
        for e in &elements {
            filter.insert(e);
        }
        for e in elements.iter().take(elements.len() / 2) {
            filter.remove(e);
        }
        let back = codec::from_bytes(&codec::to_bytes(&filter)).expect("round trip");
        assert_eq!(back, filter, "serialization not lossless at {params:?}");
    }

    // Full-run determinism under a fixed master seed.
    let params = FilterParams::new(240, 24, 5, 42).unwrap();
    let config = ExperimentConfig::new(params, 22, 2000, 500, 42);
    let first = run_experiment(&config).expect("first run");
    let second = run_experiment(&config).expect("second run");
    assert_eq!(first, second, "repeated runs diverged");

    check(
        8,
        true,
        "no false negatives (1000 sequences), order-independent removal and monotone \
         bitmap (300 sequences), reference-model equivalence (10000 instances incl. \
         m=32 r=4 k=3), lossless serialization (300 filters), deterministic reruns \
         (2000 trials)",
    );
}
