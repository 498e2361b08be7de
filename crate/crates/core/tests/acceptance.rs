//! Acceptance suite: each test checks one release criterion end to end at
//! its stated tolerance and prints a PASS line (visible with --nocapture).
//! Every threshold is pinned here in code.

use std::time::Instant;

use prosovar::coder::{auto_code_line, tokenize, Lexicon, Variant};
use prosovar::corpus::{load_fixture, FixturePayload};
use prosovar::frechet::{
    combined_universe, frechet_summary, row_objectives, variance_ratio, weighted_frechet,
    CountTable, Weighting,
};
use prosovar::metric::{edit_distance, DistanceMatrix, SymbolSequence};
use prosovar::permtest::{
    counts_permutation_test, line_permutation_test, permute_split, RatioStat, Tail,
};
use prosovar::render::{heatmap_pgm, histogram};
use rand_chacha::rand_core::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn fixture_codes(name: &str) -> Vec<prosovar::coder::PositionString> {
    match load_fixture(name).unwrap().payload {
        FixturePayload::Codes(codes) => codes,
        _ => panic!("expected codes"),
    }
}

fn fixture_lines(name: &str) -> Vec<String> {
    match load_fixture(name).unwrap().payload {
        FixturePayload::Lines(lines) => lines,
        _ => panic!("expected lines"),
    }
}

fn fixture_matrix(name: &str) -> DistanceMatrix {
    match load_fixture(name).unwrap().payload {
        FixturePayload::Matrix(m) => m,
        _ => panic!("expected matrix"),
    }
}

fn fixture_counts(name: &str) -> CountTable {
    match load_fixture(name).unwrap().payload {
        FixturePayload::Counts(c) => c,
        _ => panic!("expected counts"),
    }
}

fn sequences_of(codes: &[prosovar::coder::PositionString]) -> Vec<SymbolSequence> {
    codes.iter().map(|c| c.as_sequence().clone()).collect()
}

#[test]
fn criterion_01_edit_distance_oracle() {
    let start = Instant::now();
    let d = edit_distance(&SymbolSequence::new("old"), &SymbolSequence::new("halde"));
    let elapsed = start.elapsed();
    assert_eq!(d, 3);
    assert!(elapsed.as_millis() < 10, "took {elapsed:?}");
    println!("PASS criterion 1: edit_distance(old, halde) = 3 in {elapsed:?}");
}

#[test]
fn criterion_02_figure2_matrix_reproduction() {
    let codes = sequences_of(&fixture_codes("figure1_codes_variant_b"));
    let start = Instant::now();
    let computed = DistanceMatrix::from_items(&codes).unwrap();
    let elapsed = start.elapsed();
    let expected = fixture_matrix("figure2_matrix");
    assert_eq!(computed.n(), 10);
    for i in 0..10 {
        for j in 0..10 {
            assert_eq!(computed.get(i, j), expected.get(i, j), "cell ({i}, {j})");
        }
    }
    assert!(elapsed.as_millis() < 1, "took {elapsed:?}");
    println!("PASS criterion 2: all 100 entries match the reference matrix in {elapsed:?}");
}

#[test]
fn criterion_03_frechet_reproduction() {
    let expected_sums: Vec<u128> = vec![94, 97, 75, 75, 66, 70, 70, 106, 104, 59];
    let codes = fixture_codes("figure1_codes_variant_b");
    let d = DistanceMatrix::from_items(&sequences_of(&codes)).unwrap();
    assert_eq!(row_objectives(&d, 2).unwrap(), expected_sums);
    let summary = frechet_summary(&d, 2).unwrap();
    assert_eq!(summary.variance_numerator, 59);
    assert_eq!(summary.variance_denominator, 10);
    assert_eq!(summary.mean_indices, vec![9]);
    assert_eq!(codes[9].to_string(), "010010100");
    println!("PASS criterion 3: row sums, variance 59/10, mean string 010010100");
}

#[test]
fn criterion_04_figure7_matrix_reproduction() {
    let combined = fixture_counts("table1_combined");
    let patterns: Vec<SymbolSequence> =
        combined.patterns().map(|p| p.as_sequence().clone()).collect();
    let computed = DistanceMatrix::from_items(&patterns).unwrap();
    let expected = fixture_matrix("figure7_matrix");
    assert_eq!(computed.n(), 16);
    for i in 0..16 {
        for j in 0..16 {
            assert_eq!(computed.get(i, j), expected.get(i, j), "cell ({i}, {j})");
        }
    }
    println!("PASS criterion 4: all 256 entries match the reference matrix");
}

#[test]
fn criterion_05_weighted_reproduction_exact() {
    let d = fixture_matrix("figure7_matrix");
    let sggk = fixture_counts("table1_sggk");
    let ppb = fixture_counts("table1_ppb");

    let start = Instant::now();
    let sggk_summary = weighted_frechet(&d, &sggk, Weighting::DcSquared).unwrap();
    let ppb_summary = weighted_frechet(&d, &ppb, Weighting::DcSquared).unwrap();
    let ratio = variance_ratio(&ppb_summary, &sggk_summary).unwrap();
    let elapsed = start.elapsed();

    assert_eq!(sggk_summary.variance_numerator, 71_011);
    assert_eq!(sggk_summary.variance_denominator, 2010);
    assert!((sggk_summary.variance_value() - 35.33).abs() < 0.005);
    assert_eq!(sggk_summary.mean_indices, vec![0]); // aa/ax

    assert_eq!(ppb_summary.variance_numerator, 1_352_636);
    assert_eq!(ppb_summary.variance_denominator, 7003);
    assert!((ppb_summary.variance_value() - 193.15).abs() < 0.005);
    assert_eq!(ppb_summary.mean_indices, vec![0]); // aa/ax

    let ratio_value = *ratio.numer() as f64 / *ratio.denom() as f64;
    assert!((ratio_value - 5.47).abs() < 0.005, "ratio {ratio_value}");
    assert!(elapsed.as_millis() < 1, "took {elapsed:?}");
    println!(
        "PASS criterion 5: 71011/2010 = 35.33, 1352636/7003 = 193.15, ratio 5.47 in {elapsed:?}"
    );
}

#[test]
fn criterion_06_counts_permutation_test_stochastic() {
    let d = fixture_matrix("figure7_matrix");
    let sggk = fixture_counts("table1_sggk");
    let ppb = fixture_counts("table1_ppb");
    let universe = combined_universe(&sggk, &ppb);

    for seed in [2016u64, 7, 123_456_789] {
        let start = Instant::now();
        let result = counts_permutation_test(
            &d,
            &universe,
            &sggk,
            &ppb,
            1000,
            seed,
            Weighting::DcSquared,
            Tail::OneSidedGreater,
        )
        .unwrap();
        let elapsed = start.elapsed();

        assert!(result.p_value() <= 0.005, "seed {seed}: p = {}", result.p_value());
        let max = result
            .resample_ratios
            .iter()
            .max()
            .unwrap()
            .to_f64();
        assert!((4.0..=5.5).contains(&max), "seed {seed}: max resample ratio {max}");
        let mean = result.resample_ratios.iter().map(RatioStat::to_f64).sum::<f64>() / 1000.0;
        assert!((2.5..=4.5).contains(&mean), "seed {seed}: mean resample ratio {mean}");
        assert!(elapsed.as_secs() < 10, "seed {seed}: took {elapsed:?}");
        println!(
            "PASS criterion 6 (seed {seed}): p = {}, max = {max:.3}, mean = {mean:.3}, {elapsed:?}",
            result.p_value()
        );
    }
}

#[test]
fn criterion_07a_identical_sets_give_unit_ratio_and_p_one() {
    let lines = sequences_of(&fixture_codes("figure1_codes_variant_b"));
    let result =
        line_permutation_test(&lines, &lines, 1000, 1, 2, Tail::TwoTailedReciprocal).unwrap();
    assert_eq!(result.observed, RatioStat::one());
    assert_eq!(result.p_value(), 1.0);
    println!("PASS criterion 7a: identical samples give observed 1.0 and p = 1.0");
}

#[test]
fn criterion_07b_fixed_seed_golden_run() {
    // Pinned from the first run of this deterministic pipeline (seed 42,
    // 2000 resamples, variant-A list vs variant-B list); reruns must
    // reproduce it bit-exactly.
    let a = sequences_of(&fixture_codes("figure1_codes_variant_a"));
    let b = sequences_of(&fixture_codes("figure1_codes_variant_b"));
    let result =
        line_permutation_test(&a, &b, 2000, 42, 2, Tail::TwoTailedReciprocal).unwrap();
    let again =
        line_permutation_test(&a, &b, 2000, 42, 2, Tail::TwoTailedReciprocal).unwrap();
    assert_eq!(result, again, "same seed must reproduce the same result");

    assert_eq!(result.n_qualifying, 1951);
    let observed = result.observed_value();
    assert_eq!(format!("{observed:.6}"), "0.983333");
    println!(
        "PASS criterion 7b: pinned golden run reproduced (p = {}/2000, observed = {observed:.6})",
        result.n_qualifying
    );
}

#[test]
fn criterion_07c_conservation_and_determinism_across_100_seeds() {
    let a = sequences_of(&fixture_codes("figure1_codes_variant_a"));
    let b = sequences_of(&fixture_codes("figure1_codes_variant_b"));
    let items: Vec<u32> = (0..20).collect();
    for seed in 0..100u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (left, right) = permute_split(&items, (7, 13), &mut rng).unwrap();
        let mut merged = [left, right].concat();
        merged.sort_unstable();
        assert_eq!(merged, items, "seed {seed} lost items");

        let r1 = line_permutation_test(&a, &b, 20, seed, 2, Tail::TwoTailedReciprocal).unwrap();
        let r2 = line_permutation_test(&a, &b, 20, seed, 2, Tail::TwoTailedReciprocal).unwrap();
        assert_eq!(r1, r2, "seed {seed} not deterministic");
    }
    println!("PASS criterion 7c: conservation and determinism hold across 100 seeds");
}

#[test]
fn criterion_08_metric_axiom_suite() {
    let alphabet = ['a', 'c', 'g', 't'];
    let mut rng = ChaCha8Rng::seed_from_u64(2016);
    let random_seq = |rng: &mut ChaCha8Rng| {
        let len = (rng.next_u64() % 13) as usize;
        let text: String =
            (0..len).map(|_| alphabet[(rng.next_u64() % 4) as usize]).collect();
        SymbolSequence::new(&text)
    };
    let mut failures = 0u32;
    for _ in 0..1000 {
        let s1 = random_seq(&mut rng);
        let s2 = random_seq(&mut rng);
        let s3 = random_seq(&mut rng);
        let d12 = edit_distance(&s1, &s2);
        let d21 = edit_distance(&s2, &s1);
        let d13 = edit_distance(&s1, &s3);
        let d23 = edit_distance(&s2, &s3);
        let ok = (d12 == 0) == (s1 == s2) && d12 == d21 && d13 <= d12 + d23;
        if !ok {
            failures += 1;
        }
    }
    assert_eq!(failures, 0);
    println!("PASS criterion 8: 1000 random triples satisfy all metric axioms, 0 failures");
}

#[test]
fn criterion_09_coder_reproduces_both_lists() {
    let lexicon = Lexicon::default();
    let lines = fixture_lines("figure1_lines");
    let want_a = fixture_codes("figure1_codes_variant_a");
    let want_b = fixture_codes("figure1_codes_variant_b");
    let mut hits_a = 0;
    let mut hits_b = 0;
    for (i, line) in lines.iter().enumerate() {
        let tokens = tokenize(line);
        if auto_code_line(&tokens, Variant::A, &lexicon).unwrap() == want_a[i] {
            hits_a += 1;
        }
        if auto_code_line(&tokens, Variant::B, &lexicon).unwrap() == want_b[i] {
            hits_b += 1;
        }
    }
    assert_eq!(hits_a, 10, "variant A reproduction");
    assert_eq!(hits_b, 10, "variant B reproduction");
    println!("PASS criterion 9: auto-coding reproduces 10/10 variant-A and 10/10 variant-B strings");
}

#[test]
fn criterion_10_rendering() {
    let fig2 = fixture_matrix("figure2_matrix");
    let pgm = heatmap_pgm(&fig2);
    let mut lines = pgm.lines();
    assert_eq!(lines.next(), Some("P2"));
    assert_eq!(lines.next(), Some("10 10"));
    assert_eq!(lines.next(), Some("255"));
    let pixels: Vec<Vec<u32>> = lines
        .map(|l| l.split(' ').map(|p| p.parse().unwrap()).collect())
        .collect();
    assert_eq!(pixels.len(), 10);
    for (i, row) in pixels.iter().enumerate() {
        for (j, &px) in row.iter().enumerate() {
            assert_eq!(px == 255, fig2.get(i, j) == 0, "cell ({i}, {j})");
        }
    }

    let fig7 = fixture_matrix("figure7_matrix");
    let pgm7 = heatmap_pgm(&fig7);
    let rows7: Vec<Vec<u32>> = pgm7
        .lines()
        .skip(3)
        .map(|l| l.split(' ').map(|p| p.parse().unwrap()).collect())
        .collect();
    let darkest: Vec<(usize, usize)> = (0..16)
        .flat_map(|i| (0..16).map(move |j| (i, j)))
        .filter(|&(i, j)| rows7[i][j] == 0)
        .collect();
    assert_eq!(darkest, vec![(5, 15), (15, 5)], "darkest pixels sit at the unique 5s");

    for k in [1usize, 7, 1000] {
        let values: Vec<f64> = (0..k).map(|i| (i % 17) as f64 + 0.25).collect();
        let hist = histogram(&values, 12).unwrap();
        assert_eq!(hist.total_count() as usize, k);
    }
    println!("PASS criterion 10: heatmap whites match zero distances; histogram counts conserve");
}
