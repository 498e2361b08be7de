//! Exercises the C ABI exactly as a foreign caller would: raw pointers,
//! status codes, out-parameters, and explicit frees.

use std::ffi::{c_char, CStr, CString};
use std::ptr;

use prosovar_ffi::*;

struct CStrings {
    owned: Vec<CString>,
    pointers: Vec<*const c_char>,
}

impl CStrings {
    fn new(items: &[&str]) -> Self {
        let owned: Vec<CString> =
            items.iter().map(|s| CString::new(*s).unwrap()).collect();
        let pointers = owned.iter().map(|c| c.as_ptr()).collect();
        CStrings { owned, pointers }
    }

    fn ptr(&self) -> *const *const c_char {
        self.pointers.as_ptr()
    }

    fn len(&self) -> usize {
        self.owned.len()
    }
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(pv_last_error_message()).to_string_lossy().into_owned() }
}

const VARIANT_B_CODES: [&str; 10] = [
    "001101001",
    "0100100010",
    "01001100",
    "01001100",
    "00011010",
    "01010100",
    "001101000",
    "00110010",
    "00010101000",
    "010010100",
];

const TABLE1_PATTERNS: [&str; 16] = [
    "aa/ax", "aa/xa", "aa/aa", "aaa/ax", "aaa/xa", "aaa/aa", "ax/aa", "xa/aa", "ax/ax",
    "xa/ax", "aa/bb", "ab/ab", "ab/ba", "aaa/xx", "aa/xx", "xx/xx",
];

const SGGK_COUNTS: [u64; 16] =
    [1532, 23, 70, 239, 4, 14, 6, 4, 40, 59, 2, 10, 5, 2, 0, 0];
const PPB_COUNTS: [u64; 16] =
    [4993, 117, 538, 291, 291, 64, 39, 39, 114, 135, 71, 14, 6, 0, 241, 50];

#[test]
fn version_is_a_c_string() {
    let version = unsafe { CStr::from_ptr(pv_version()) };
    assert!(!version.to_str().unwrap().is_empty());
}

#[test]
fn edit_distance_over_the_abi() {
    let a = CString::new("old").unwrap();
    let b = CString::new("halde").unwrap();
    let mut d = 0u32;
    let status = unsafe { pv_edit_distance(a.as_ptr(), b.as_ptr(), &mut d) };
    assert_eq!(status, PvStatus::Ok);
    assert_eq!(d, 3);
}

#[test]
fn null_arguments_set_the_error_message() {
    let a = CString::new("old").unwrap();
    let mut d = 0u32;
    let status = unsafe { pv_edit_distance(a.as_ptr(), ptr::null(), &mut d) };
    assert_eq!(status, PvStatus::NullArgument);
    assert!(last_error().contains("b is NULL"), "got: {}", last_error());
}

#[test]
fn code_line_both_variants() {
    let line = CString::new("Me bifel a ferly / of Fairye me thoghte.").unwrap();
    unsafe {
        let mut out: *mut c_char = ptr::null_mut();
        assert_eq!(pv_code_line(line.as_ptr(), PvVariant::A, &mut out), PvStatus::Ok);
        assert_eq!(CStr::from_ptr(out).to_str().unwrap(), "00010100");
        pv_string_free(out);

        let mut out: *mut c_char = ptr::null_mut();
        assert_eq!(pv_code_line(line.as_ptr(), PvVariant::B, &mut out), PvStatus::Ok);
        assert_eq!(CStr::from_ptr(out).to_str().unwrap(), "01010100");
        pv_string_free(out);
    }
}

#[test]
fn matrix_and_frechet_round_trip() {
    let items = CStrings::new(&VARIANT_B_CODES);
    unsafe {
        let mut matrix: *mut PvDistanceMatrix = ptr::null_mut();
        assert_eq!(
            pv_distance_matrix_compute(items.ptr(), items.len(), &mut matrix),
            PvStatus::Ok
        );

        let mut n = 0usize;
        assert_eq!(pv_distance_matrix_size(matrix, &mut n), PvStatus::Ok);
        assert_eq!(n, 10);

        let mut entry = 0u32;
        assert_eq!(pv_distance_matrix_entry(matrix, 0, 6, &mut entry), PvStatus::Ok);
        assert_eq!(entry, 1);
        assert_eq!(pv_distance_matrix_entry(matrix, 2, 3, &mut entry), PvStatus::Ok);
        assert_eq!(entry, 0);
        assert_eq!(
            pv_distance_matrix_entry(matrix, 10, 0, &mut entry),
            PvStatus::IndexOutOfRange
        );

        let mut summary: *mut PvFrechetSummary = ptr::null_mut();
        assert_eq!(pv_frechet_summary(matrix, 2, &mut summary), PvStatus::Ok);

        let mut count = 0usize;
        assert_eq!(pv_frechet_mean_count(summary, &mut count), PvStatus::Ok);
        assert_eq!(count, 1);
        let mut index = 0usize;
        assert_eq!(pv_frechet_mean_index(summary, 0, &mut index), PvStatus::Ok);
        assert_eq!(index, 9);

        let mut numerator = 0u64;
        let mut denominator = 0u64;
        let mut value = 0f64;
        assert_eq!(pv_frechet_variance_numerator(summary, &mut numerator), PvStatus::Ok);
        assert_eq!(pv_frechet_variance_denominator(summary, &mut denominator), PvStatus::Ok);
        assert_eq!(pv_frechet_variance_value(summary, &mut value), PvStatus::Ok);
        assert_eq!((numerator, denominator), (59, 10));
        assert!((value - 5.9).abs() < 1e-12);

        pv_frechet_free(summary);
        pv_distance_matrix_free(matrix);
    }
}

#[test]
fn weighted_frechet_and_variance_ratio() {
    let patterns = CStrings::new(&TABLE1_PATTERNS);
    unsafe {
        let mut matrix: *mut PvDistanceMatrix = ptr::null_mut();
        assert_eq!(
            pv_distance_matrix_compute(patterns.ptr(), patterns.len(), &mut matrix),
            PvStatus::Ok
        );

        let mut sggk: *mut PvFrechetSummary = ptr::null_mut();
        let mut ppb: *mut PvFrechetSummary = ptr::null_mut();
        assert_eq!(
            pv_weighted_frechet(
                matrix,
                SGGK_COUNTS.as_ptr(),
                16,
                2010,
                PvWeighting::DcSquared,
                &mut sggk
            ),
            PvStatus::Ok
        );
        assert_eq!(
            pv_weighted_frechet(
                matrix,
                PPB_COUNTS.as_ptr(),
                16,
                7003,
                PvWeighting::DcSquared,
                &mut ppb
            ),
            PvStatus::Ok
        );

        let mut numerator = 0u64;
        assert_eq!(pv_frechet_variance_numerator(sggk, &mut numerator), PvStatus::Ok);
        assert_eq!(numerator, 71_011);
        assert_eq!(pv_frechet_variance_numerator(ppb, &mut numerator), PvStatus::Ok);
        assert_eq!(numerator, 1_352_636);

        let mut ratio = 0f64;
        assert_eq!(pv_variance_ratio(ppb, sggk, &mut ratio), PvStatus::Ok);
        assert!((ratio - 5.467).abs() < 5e-4, "ratio {ratio}");

        pv_frechet_free(ppb);
        pv_frechet_free(sggk);
        pv_distance_matrix_free(matrix);
    }
}

#[test]
fn misaligned_counts_are_reported() {
    let patterns = CStrings::new(&TABLE1_PATTERNS);
    unsafe {
        let mut matrix: *mut PvDistanceMatrix = ptr::null_mut();
        assert_eq!(
            pv_distance_matrix_compute(patterns.ptr(), patterns.len(), &mut matrix),
            PvStatus::Ok
        );
        let mut summary: *mut PvFrechetSummary = ptr::null_mut();
        let short = [1u64, 2, 3];
        assert_eq!(
            pv_weighted_frechet(
                matrix,
                short.as_ptr(),
                3,
                6,
                PvWeighting::DcSquared,
                &mut summary
            ),
            PvStatus::MisalignedCounts
        );
        pv_distance_matrix_free(matrix);
    }
}

#[test]
fn line_permutation_test_is_deterministic_per_seed() {
    let a = CStrings::new(&VARIANT_B_CODES[..5]);
    let b = CStrings::new(&VARIANT_B_CODES[5..]);
    unsafe {
        let run = |seed: u64| -> (f64, f64, Vec<f64>) {
            let mut test: *mut PvPermTest = ptr::null_mut();
            assert_eq!(
                pv_line_permutation_test(
                    a.ptr(),
                    a.len(),
                    b.ptr(),
                    b.len(),
                    300,
                    seed,
                    2,
                    PvTail::TwoTailedReciprocal,
                    &mut test
                ),
                PvStatus::Ok
            );
            let mut observed = 0f64;
            let mut p = 0f64;
            assert_eq!(pv_permtest_observed(test, &mut observed), PvStatus::Ok);
            assert_eq!(pv_permtest_p_value(test, &mut p), PvStatus::Ok);
            let mut n = 0usize;
            assert_eq!(pv_permtest_n_resamples(test, &mut n), PvStatus::Ok);
            assert_eq!(n, 300);
            let mut ratios = Vec::with_capacity(n);
            for i in 0..n {
                let mut ratio = 0f64;
                assert_eq!(pv_permtest_ratio(test, i, &mut ratio), PvStatus::Ok);
                ratios.push(ratio);
            }
            let mut ratio = 0f64;
            assert_eq!(pv_permtest_ratio(test, 300, &mut ratio), PvStatus::IndexOutOfRange);
            pv_permtest_free(test);
            (observed, p, ratios)
        };
        let first = run(11);
        assert_eq!(first, run(11));
        let other = run(12);
        assert_eq!(first.0, other.0, "observed ratio does not depend on the seed");
        assert_ne!(first.2, other.2, "different seeds draw different resamples");
    }
}

#[test]
fn counts_permutation_test_reproduces_published_shape() {
    let patterns = CStrings::new(&TABLE1_PATTERNS);
    unsafe {
        let mut test: *mut PvPermTest = ptr::null_mut();
        assert_eq!(
            pv_counts_permutation_test(
                patterns.ptr(),
                patterns.len(),
                SGGK_COUNTS.as_ptr(),
                PPB_COUNTS.as_ptr(),
                200,
                2016,
                PvWeighting::DcSquared,
                PvTail::OneSidedGreater,
                &mut test
            ),
            PvStatus::Ok
        );
        let mut observed = 0f64;
        let mut p = 0f64;
        let mut qualifying = 0usize;
        assert_eq!(pv_permtest_observed(test, &mut observed), PvStatus::Ok);
        assert_eq!(pv_permtest_p_value(test, &mut p), PvStatus::Ok);
        assert_eq!(pv_permtest_n_qualifying(test, &mut qualifying), PvStatus::Ok);
        assert!((observed - 5.467).abs() < 5e-4);
        assert_eq!(qualifying, 0);
        assert_eq!(p, 0.0);
        pv_permtest_free(test);
    }
}

#[test]
fn bad_meter_pattern_is_invalid_input() {
    let patterns = CStrings::new(&["aa/ax", "nonsense"]);
    let counts = [3u64, 4];
    unsafe {
        let mut test: *mut PvPermTest = ptr::null_mut();
        assert_eq!(
            pv_counts_permutation_test(
                patterns.ptr(),
                patterns.len(),
                counts.as_ptr(),
                counts.as_ptr(),
                10,
                1,
                PvWeighting::DcSquared,
                PvTail::OneSidedGreater,
                &mut test
            ),
            PvStatus::InvalidInput
        );
        assert!(last_error().contains("nonsense"), "got: {}", last_error());
    }
}

#[test]
fn generated_header_covers_the_surface() {
    let header = include_str!("../include/prosovar.h");
    for symbol in [
        "pv_edit_distance",
        "pv_code_line",
        "pv_distance_matrix_compute",
        "pv_frechet_summary",
        "pv_weighted_frechet",
        "pv_variance_ratio",
        "pv_line_permutation_test",
        "pv_counts_permutation_test",
        "pv_last_error_message",
        "typedef struct PvDistanceMatrix PvDistanceMatrix",
        "PvStatus_DegenerateSample",
    ] {
        assert!(header.contains(symbol), "header is missing {symbol}");
    }
}
