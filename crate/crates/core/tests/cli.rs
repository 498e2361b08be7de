//! End-to-end tests of the command-line interface: output bytes, exit
//! codes, and determinism under a fixed seed.

use std::path::Path;
use std::process::{Command, Output};

fn prosovar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_prosovar"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_of(args: &[&str]) -> String {
    let out = prosovar(args);
    assert!(
        out.status.success(),
        "command {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn write(path: &Path, content: &str) {
    std::fs::write(path, content).unwrap();
}

#[test]
fn code_fixture_variant_a_matches_published_list() {
    let got = stdout_of(&["code", "--fixture", "figure1_lines", "--variant", "A"]);
    let want = stdout_of(&["fixtures", "figure1_codes_variant_a"]);
    assert_eq!(got, want);
}

#[test]
fn code_fixture_variant_b_matches_published_list() {
    let got = stdout_of(&["code", "--fixture", "figure1_lines", "--variant", "B"]);
    let want = stdout_of(&["fixtures", "figure1_codes_variant_b"]);
    assert_eq!(got, want);
}

#[test]
fn annotated_input_bypasses_auto_coding() {
    let dir = tempfile::tempdir().unwrap();
    let poem = dir.path().join("poem.txt");
    // marks deliberately disagree with what auto-coding would produce
    write(&poem, "In a *somer* seson / whan softe was the *sonne*\n");
    let got = stdout_of(&["code", "--input", poem.to_str().unwrap(), "--variant", "A"]);
    assert_eq!(got, "001000001\n");
}

#[test]
fn code_skip_lines_directive() {
    let dir = tempfile::tempdir().unwrap();
    let poem = dir.path().join("poem.txt");
    write(&poem, "Wente wide in this world / wondres to here\nbogus @@ line\n");
    let out = prosovar(&[
        "code",
        "--input",
        poem.to_str().unwrap(),
        "--variant",
        "A",
        "--skip-lines",
        "2",
    ]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "11001100\n");
}

#[test]
fn missing_file_is_a_data_error_on_stderr() {
    let out = prosovar(&["code", "--input", "/no/such/poem.txt", "--variant", "A"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
    assert!(out.stdout.is_empty());
}

#[test]
fn usage_error_exits_one() {
    let out = prosovar(&["no-such-command"]);
    assert_eq!(out.status.code(), Some(1));
    let out = prosovar(&["ftest-lines", "--fixture-a", "figure1_codes_variant_a"]);
    assert_eq!(out.status.code(), Some(1), "missing required --seed is a usage error");
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(prosovar(&["--help"]).status.code(), Some(0));
    assert_eq!(prosovar(&["--version"]).status.code(), Some(0));
}

#[test]
fn unknown_fixture_lists_names() {
    let out = prosovar(&["fixtures", "figure99"]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("table1_sggk"));
}

#[test]
fn distmat_of_variant_b_codes_equals_reference_matrix() {
    let got = stdout_of(&["distmat", "--fixture", "figure1_codes_variant_b"]);
    let want = stdout_of(&["fixtures", "figure2_matrix"]);
    assert_eq!(got, want);
}

#[test]
fn distmat_of_combined_patterns_equals_reference_matrix() {
    let got = stdout_of(&["distmat", "--fixture", "table1_combined"]);
    let want = stdout_of(&["fixtures", "figure7_matrix"]);
    assert_eq!(got, want);
}

#[test]
fn distmat_single_item() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("one.txt");
    write(&input, "0110\n");
    assert_eq!(stdout_of(&["distmat", "--input", input.to_str().unwrap()]), "0\n");
}

#[test]
fn frechet_report_prints_exact_rational() {
    let got = stdout_of(&["frechet", "--fixture", "figure2_matrix"]);
    assert!(got.contains("variance: 59/10 = 5.9"), "got: {got}");
    assert!(got.contains("mean indices: 9"));
}

#[test]
fn frechet_json_record() {
    let got = stdout_of(&[
        "frechet",
        "--fixture",
        "figure7_matrix",
        "--counts-fixture",
        "table1_ppb",
        "--json",
    ]);
    let record: serde_json::Value = serde_json::from_str(&got).unwrap();
    assert_eq!(record["variance_numerator"], 1_352_636);
    assert_eq!(record["variance_denominator"], 7003);
    assert_eq!(record["mean_items"][0], "aa/ax");
    assert_eq!(record["power"], 2);
}

#[test]
fn frechet_power_one_is_labeled_median() {
    let got = stdout_of(&["frechet", "--fixture", "figure2_matrix", "--power", "1"]);
    assert!(got.contains("generalized median"), "got: {got}");
    assert!(got.contains("variance: 21/10 = 2.1"), "got: {got}");
}

#[test]
fn ftest_counts_reproduces_published_analysis() {
    let got = stdout_of(&[
        "ftest-counts",
        "--fixture-a",
        "table1_sggk",
        "--fixture-b",
        "table1_ppb",
        "--seed",
        "2016",
    ]);
    assert!(got.contains("variance A: 71011/2010"), "got: {got}");
    assert!(got.contains("variance B: 1352636/7003"), "got: {got}");
    assert!(got.contains("observed ratio (B/A): 5.467229"), "got: {got}");
    assert!(got.contains("p-value: 0/1000 = 0"), "got: {got}");
}

#[test]
fn ftest_counts_identical_tables_give_unit_ratio() {
    let got = stdout_of(&[
        "ftest-counts",
        "--fixture-a",
        "table1_sggk",
        "--fixture-b",
        "table1_sggk",
        "--seed",
        "5",
        "--resamples",
        "50",
    ]);
    assert!(got.contains("observed ratio (B/A): 1.000000"), "got: {got}");
}

#[test]
fn ftest_counts_repeat_seed_reproduces_report_bytes() {
    let args = [
        "ftest-counts",
        "--fixture-a",
        "table1_sggk",
        "--fixture-b",
        "table1_ppb",
        "--seed",
        "99",
        "--resamples",
        "120",
        "--smoothed",
    ];
    assert_eq!(stdout_of(&args), stdout_of(&args));
}

#[test]
fn ftest_lines_identical_samples() {
    let got = stdout_of(&[
        "ftest-lines",
        "--fixture-a",
        "figure1_codes_variant_b",
        "--fixture-b",
        "figure1_codes_variant_b",
        "--seed",
        "1",
        "--resamples",
        "100",
        "--json",
    ]);
    let record: serde_json::Value = serde_json::from_str(&got).unwrap();
    assert_eq!(record["observed"], 1.0);
    assert_eq!(record["p_value"], 1.0);
    assert_eq!(record["tail"], "two_tailed_reciprocal");
}

#[test]
fn ftest_lines_writes_ratio_csv_for_rendering() {
    let dir = tempfile::tempdir().unwrap();
    let ratios = dir.path().join("ratios.csv");
    let hist = dir.path().join("hist.csv");
    stdout_of(&[
        "ftest-lines",
        "--fixture-a",
        "figure1_codes_variant_a",
        "--fixture-b",
        "figure1_codes_variant_b",
        "--seed",
        "42",
        "--resamples",
        "200",
        "--out-ratios",
        ratios.to_str().unwrap(),
    ]);
    let ratio_lines = std::fs::read_to_string(&ratios).unwrap();
    assert_eq!(ratio_lines.lines().count(), 200);

    stdout_of(&[
        "render-hist",
        "--values",
        ratios.to_str().unwrap(),
        "--bins",
        "8",
        "--out",
        hist.to_str().unwrap(),
    ]);
    let csv = std::fs::read_to_string(&hist).unwrap();
    let total: u64 = csv.lines().map(|l| l.rsplit(',').next().unwrap().parse::<u64>().unwrap()).sum();
    assert_eq!(total, 200);
}

#[test]
fn heatmap_of_reference_matrix_is_bit_exact() {
    let dir = tempfile::tempdir().unwrap();
    let pgm = dir.path().join("fig2.pgm");
    stdout_of(&["render-heatmap", "--fixture", "figure2_matrix", "--out", pgm.to_str().unwrap()]);
    let got = std::fs::read_to_string(&pgm).unwrap();
    // d_max = 4 maps distances {0,1,2,3,4} to {255,191,128,64,0}
    let want = "P2\n10 10\n255\n\
        255 0 0 0 64 64 191 64 64 64\n\
        0 255 64 64 64 64 0 64 0 128\n\
        0 64 255 255 128 128 64 0 0 191\n\
        0 64 255 255 128 128 64 0 0 191\n\
        64 64 128 128 255 64 64 128 64 64\n\
        64 64 128 128 64 255 64 0 64 191\n\
        191 0 64 64 64 64 255 128 128 64\n\
        64 64 0 0 128 0 128 255 0 0\n\
        64 0 0 0 64 64 128 0 255 64\n\
        64 128 191 191 64 191 64 0 64 255\n";
    assert_eq!(got, want);
}

#[test]
fn heatmap_single_zero_cell_is_white() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("one.csv");
    let pgm = dir.path().join("one.pgm");
    write(&csv, "0\n");
    stdout_of(&[
        "render-heatmap",
        "--matrix",
        csv.to_str().unwrap(),
        "--out",
        pgm.to_str().unwrap(),
    ]);
    assert_eq!(std::fs::read_to_string(&pgm).unwrap(), "P2\n1 1\n255\n255\n");
}

#[test]
fn heatmap_rejects_malformed_csv_with_cell_coordinates() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("bad.csv");
    let pgm = dir.path().join("bad.pgm");
    write(&csv, "0,1\n1,oops\n");
    let out = prosovar(&[
        "render-heatmap",
        "--matrix",
        csv.to_str().unwrap(),
        "--out",
        pgm.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("(1, 1)"), "stderr: {stderr}");
}

#[test]
fn render_hist_single_and_constant_values() {
    let dir = tempfile::tempdir().unwrap();
    let values = dir.path().join("values.txt");
    let out_csv = dir.path().join("hist.csv");

    write(&values, "2.5\n");
    stdout_of(&[
        "render-hist",
        "--values",
        values.to_str().unwrap(),
        "--bins",
        "10",
        "--out",
        out_csv.to_str().unwrap(),
    ]);
    assert_eq!(std::fs::read_to_string(&out_csv).unwrap(), "2.5,2.5,1\n");

    write(&values, "1\n1\n1\n1\n");
    stdout_of(&[
        "render-hist",
        "--values",
        values.to_str().unwrap(),
        "--bins",
        "3",
        "--out",
        out_csv.to_str().unwrap(),
    ]);
    assert_eq!(std::fs::read_to_string(&out_csv).unwrap(), "1,1,4\n");
}

#[test]
fn pipeline_code_to_distmat_to_frechet() {
    let dir = tempfile::tempdir().unwrap();
    let codes = dir.path().join("codes.txt");
    let matrix = dir.path().join("matrix.csv");
    let coded = stdout_of(&["code", "--fixture", "figure1_lines", "--variant", "B"]);
    write(&codes, &coded);
    stdout_of(&[
        "distmat",
        "--input",
        codes.to_str().unwrap(),
        "--out",
        matrix.to_str().unwrap(),
    ]);
    let report = stdout_of(&[
        "frechet",
        "--matrix",
        matrix.to_str().unwrap(),
        "--items",
        codes.to_str().unwrap(),
    ]);
    assert!(report.contains("variance: 59/10 = 5.9"), "report: {report}");
    assert!(report.contains("mean items: 010010100"), "report: {report}");
}

#[test]
fn shipped_annotated_poem_codes_to_the_variant_b_list() {
    let annotated = concat!(env!("CARGO_MANIFEST_DIR"), "/data/figure1_annotated.txt");
    let got = stdout_of(&["code", "--input", annotated]);
    let want = stdout_of(&["fixtures", "figure1_codes_variant_b"]);
    assert_eq!(got, want);
}
