//! C ABI for the prosovar library.
//!
//! Conventions: every fallible function returns a [`PvStatus`] and writes
//! its result through out-pointers. Handles (`PvDistanceMatrix`,
//! `PvFrechetSummary`, `PvPermTest`) are opaque; free them with the
//! matching `*_free` function exactly once. On any non-`Ok` status,
//! [`pv_last_error_message`] returns a UTF-8 description valid on the
//! calling thread until the next failing call.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};

use prosovar::coder::{auto_code_line, tokenize, Lexicon, MeterPattern, Variant};
use prosovar::error::Error;
use prosovar::frechet::{
    frechet_summary, variance_ratio, weighted_frechet_from_counts, CountTable, FrechetSummary,
    Weighting,
};
use prosovar::metric::{edit_distance, DistanceMatrix, SymbolSequence};
use prosovar::permtest::{
    counts_permutation_test, line_permutation_test, PermTestResult, Tail,
};

/// Status code returned by every fallible function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PvStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    InvalidInput = 3,
    EmptyDataset = 4,
    MisalignedCounts = 5,
    DegenerateSample = 6,
    Overflow = 7,
    IndexOutOfRange = 8,
}

/// Coding variant for [`pv_code_line`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PvVariant {
    A = 0,
    B = 1,
}

/// Tail rule for the permutation tests.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PvTail {
    TwoTailedReciprocal = 0,
    OneSidedGreater = 1,
}

/// Weighted objective form: the published count-scaled squares, or the
/// conventional frequency-weighted squares.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PvWeighting {
    DcSquared = 0,
    Conventional = 1,
}

pub struct PvDistanceMatrix(DistanceMatrix);

pub struct PvFrechetSummary(FrechetSummary);

pub struct PvPermTest(PermTestResult);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: &str) {
    let sanitized = CString::new(message.replace('\0', " "))
        .unwrap_or_else(|_| CString::new("error").unwrap());
    LAST_ERROR.with(|slot| *slot.borrow_mut() = sanitized);
}

fn fail(status: PvStatus, message: &str) -> PvStatus {
    set_error(message);
    status
}

fn fail_with(err: &Error) -> PvStatus {
    let status = match err {
        Error::EmptyDataset | Error::NoLines { .. } | Error::EmptyLine => PvStatus::EmptyDataset,
        Error::MisalignedCounts { .. } | Error::SplitSizeMismatch { .. } => {
            PvStatus::MisalignedCounts
        }
        Error::DegenerateSample => PvStatus::DegenerateSample,
        Error::Overflow => PvStatus::Overflow,
        _ => PvStatus::InvalidInput,
    };
    fail(status, &err.to_string())
}

/// Last error message for this thread, or an empty string. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn pv_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn pv_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

unsafe fn utf8_arg<'a>(ptr: *const c_char, what: &str) -> Result<&'a str, PvStatus> {
    if ptr.is_null() {
        return Err(fail(PvStatus::NullArgument, &format!("{what} is NULL")));
    }
    CStr::from_ptr(ptr)
        .to_str()
        .map_err(|_| fail(PvStatus::InvalidUtf8, &format!("{what} is not valid UTF-8")))
}

unsafe fn utf8_array<'a>(
    ptr: *const *const c_char,
    len: usize,
    what: &str,
) -> Result<Vec<&'a str>, PvStatus> {
    if ptr.is_null() {
        return Err(fail(PvStatus::NullArgument, &format!("{what} is NULL")));
    }
    let mut out = Vec::with_capacity(len);
    for i in 0..len {
        let item = *ptr.add(i);
        out.push(utf8_arg(item, &format!("{what}[{i}]"))?);
    }
    Ok(out)
}

unsafe fn slice_arg<'a, T>(ptr: *const T, len: usize, what: &str) -> Result<&'a [T], PvStatus> {
    if ptr.is_null() {
        return Err(fail(PvStatus::NullArgument, &format!("{what} is NULL")));
    }
    Ok(std::slice::from_raw_parts(ptr, len))
}

fn require_out<T>(ptr: *mut T, what: &str) -> Result<(), PvStatus> {
    if ptr.is_null() {
        return Err(fail(PvStatus::NullArgument, &format!("{what} is NULL")));
    }
    Ok(())
}

impl From<PvTail> for Tail {
    fn from(tail: PvTail) -> Tail {
        match tail {
            PvTail::TwoTailedReciprocal => Tail::TwoTailedReciprocal,
            PvTail::OneSidedGreater => Tail::OneSidedGreater,
        }
    }
}

impl From<PvWeighting> for Weighting {
    fn from(weighting: PvWeighting) -> Weighting {
        match weighting {
            PvWeighting::DcSquared => Weighting::DcSquared,
            PvWeighting::Conventional => Weighting::Conventional,
        }
    }
}

/// Levenshtein distance between two UTF-8 strings.
///
/// # Safety
/// `a` and `b` must be NUL-terminated strings; `out_distance` must be a
/// valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pv_edit_distance(
    a: *const c_char,
    b: *const c_char,
    out_distance: *mut u32,
) -> PvStatus {
    let (a, b) = match (utf8_arg(a, "a"), utf8_arg(b, "b")) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(s), _) | (_, Err(s)) => return s,
    };
    if let Err(s) = require_out(out_distance, "out_distance") {
        return s;
    }
    *out_distance = edit_distance(&SymbolSequence::new(a), &SymbolSequence::new(b));
    PvStatus::Ok
}

/// Codes one poetic line as a position string ("0"/"1" characters) using
/// the built-in lexicons. The result must be freed with [`pv_string_free`].
///
/// # Safety
/// `line` must be a NUL-terminated string; `out_code` must be valid.
#[no_mangle]
pub unsafe extern "C" fn pv_code_line(
    line: *const c_char,
    variant: PvVariant,
    out_code: *mut *mut c_char,
) -> PvStatus {
    let line = match utf8_arg(line, "line") {
        Ok(line) => line,
        Err(s) => return s,
    };
    if let Err(s) = require_out(out_code, "out_code") {
        return s;
    }
    let variant = match variant {
        PvVariant::A => Variant::A,
        PvVariant::B => Variant::B,
    };
    match auto_code_line(&tokenize(line), variant, &Lexicon::default()) {
        Ok(code) => {
            let c = CString::new(code.to_string()).expect("codes are 0/1 text");
            *out_code = c.into_raw();
            PvStatus::Ok
        }
        Err(e) => fail_with(&e),
    }
}

/// Frees a string returned by this library.
///
/// # Safety
/// `s` must have been returned by a `pv_` function and not freed before;
/// NULL is allowed and ignored.
#[no_mangle]
pub unsafe extern "C" fn pv_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Computes the pairwise edit distance matrix of `n_items` strings.
/// The handle must be freed with [`pv_distance_matrix_free`].
///
/// # Safety
/// `items` must point to `n_items` NUL-terminated strings; `out_matrix`
/// must be valid.
#[no_mangle]
pub unsafe extern "C" fn pv_distance_matrix_compute(
    items: *const *const c_char,
    n_items: usize,
    out_matrix: *mut *mut PvDistanceMatrix,
) -> PvStatus {
    let items = match utf8_array(items, n_items, "items") {
        Ok(items) => items,
        Err(s) => return s,
    };
    if let Err(s) = require_out(out_matrix, "out_matrix") {
        return s;
    }
    let sequences: Vec<SymbolSequence> =
        items.iter().map(|s| SymbolSequence::new(s)).collect();
    match DistanceMatrix::from_items(&sequences) {
        Ok(matrix) => {
            *out_matrix = Box::into_raw(Box::new(PvDistanceMatrix(matrix)));
            PvStatus::Ok
        }
        Err(e) => fail_with(&e),
    }
}

/// Number of rows (= columns) of the matrix.
///
/// # Safety
/// `matrix` must be a live handle; `out_n` must be valid.
#[no_mangle]
pub unsafe extern "C" fn pv_distance_matrix_size(
    matrix: *const PvDistanceMatrix,
    out_n: *mut usize,
) -> PvStatus {
    if matrix.is_null() {
        return fail(PvStatus::NullArgument, "matrix is NULL");
    }
    if let Err(s) = require_out(out_n, "out_n") {
        return s;
    }
    *out_n = (*matrix).0.n();
    PvStatus::Ok
}

/// Reads entry (i, j) of the matrix.
///
/// # Safety
/// `matrix` must be a live handle; `out_distance` must be valid.
#[no_mangle]
pub unsafe extern "C" fn pv_distance_matrix_entry(
    matrix: *const PvDistanceMatrix,
    i: usize,
    j: usize,
    out_distance: *mut u32,
) -> PvStatus {
    if matrix.is_null() {
        return fail(PvStatus::NullArgument, "matrix is NULL");
    }
    if let Err(s) = require_out(out_distance, "out_distance") {
        return s;
    }
    let m = &(*matrix).0;
    if i >= m.n() || j >= m.n() {
        return fail(
            PvStatus::IndexOutOfRange,
            &format!("({i}, {j}) outside a {0}x{0} matrix", m.n()),
        );
    }
    *out_distance = m.get(i, j);
    PvStatus::Ok
}

/// # Safety
/// `matrix` must have come from this library and not been freed before;
/// NULL is allowed and ignored.
#[no_mangle]
pub unsafe extern "C" fn pv_distance_matrix_free(matrix: *mut PvDistanceMatrix) {
    if !matrix.is_null() {
        drop(Box::from_raw(matrix));
    }
}

/// Generalized mean/variance over the matrix rows; power 1 is the
/// generalized median. Free the handle with [`pv_frechet_free`].
///
/// # Safety
/// `matrix` must be a live handle; `out_summary` must be valid.
#[no_mangle]
pub unsafe extern "C" fn pv_frechet_summary(
    matrix: *const PvDistanceMatrix,
    power: u32,
    out_summary: *mut *mut PvFrechetSummary,
) -> PvStatus {
    if matrix.is_null() {
        return fail(PvStatus::NullArgument, "matrix is NULL");
    }
    if let Err(s) = require_out(out_summary, "out_summary") {
        return s;
    }
    match frechet_summary(&(*matrix).0, power) {
        Ok(summary) => {
            *out_summary = Box::into_raw(Box::new(PvFrechetSummary(summary)));
            PvStatus::Ok
        }
        Err(e) => fail_with(&e),
    }
}

/// Count-weighted generalized mean/variance: `counts` align with the
/// matrix rows and `n_lines` (the total line count) is the variance
/// denominator. Free the handle with [`pv_frechet_free`].
///
/// # Safety
/// `matrix` must be a live handle; `counts` must point to `n_counts`
/// values; `out_summary` must be valid.
#[no_mangle]
pub unsafe extern "C" fn pv_weighted_frechet(
    matrix: *const PvDistanceMatrix,
    counts: *const u64,
    n_counts: usize,
    n_lines: u64,
    weighting: PvWeighting,
    out_summary: *mut *mut PvFrechetSummary,
) -> PvStatus {
    if matrix.is_null() {
        return fail(PvStatus::NullArgument, "matrix is NULL");
    }
    let counts = match slice_arg(counts, n_counts, "counts") {
        Ok(counts) => counts,
        Err(s) => return s,
    };
    if let Err(s) = require_out(out_summary, "out_summary") {
        return s;
    }
    match weighted_frechet_from_counts(&(*matrix).0, counts, n_lines, weighting.into()) {
        Ok(summary) => {
            *out_summary = Box::into_raw(Box::new(PvFrechetSummary(summary)));
            PvStatus::Ok
        }
        Err(e) => fail_with(&e),
    }
}

/// Number of rows attaining the minimal objective (means are not unique).
///
/// # Safety
/// `summary` must be a live handle; `out_count` must be valid.
#[no_mangle]
pub unsafe extern "C" fn pv_frechet_mean_count(
    summary: *const PvFrechetSummary,
    out_count: *mut usize,
) -> PvStatus {
    if summary.is_null() {
        return fail(PvStatus::NullArgument, "summary is NULL");
    }
    if let Err(s) = require_out(out_count, "out_count") {
        return s;
    }
    *out_count = (*summary).0.mean_indices.len();
    PvStatus::Ok
}

/// The `k`-th mean row index, in ascending order.
///
/// # Safety
/// `summary` must be a live handle; `out_index` must be valid.
#[no_mangle]
pub unsafe extern "C" fn pv_frechet_mean_index(
    summary: *const PvFrechetSummary,
    k: usize,
    out_index: *mut usize,
) -> PvStatus {
    if summary.is_null() {
        return fail(PvStatus::NullArgument, "summary is NULL");
    }
    if let Err(s) = require_out(out_index, "out_index") {
        return s;
    }
    let indices = &(*summary).0.mean_indices;
    match indices.get(k) {
        Some(&index) => {
            *out_index = index;
            PvStatus::Ok
        }
        None => fail(PvStatus::IndexOutOfRange, &format!("mean index {k} out of range")),
    }
}

/// Exact variance numerator (the minimal objective). Fails with
/// `Overflow` if it does not fit in 64 bits.
///
/// # Safety
/// `summary` must be a live handle; `out_numerator` must be valid.
#[no_mangle]
pub unsafe extern "C" fn pv_frechet_variance_numerator(
    summary: *const PvFrechetSummary,
    out_numerator: *mut u64,
) -> PvStatus {
    if summary.is_null() {
        return fail(PvStatus::NullArgument, "summary is NULL");
    }
    if let Err(s) = require_out(out_numerator, "out_numerator") {
        return s;
    }
    match u64::try_from((*summary).0.variance_numerator) {
        Ok(numerator) => {
            *out_numerator = numerator;
            PvStatus::Ok
        }
        Err(_) => fail(PvStatus::Overflow, "variance numerator exceeds 64 bits"),
    }
}

/// Exact variance denominator (the sample line count).
///
/// # Safety
/// `summary` must be a live handle; `out_denominator` must be valid.
#[no_mangle]
pub unsafe extern "C" fn pv_frechet_variance_denominator(
    summary: *const PvFrechetSummary,
    out_denominator: *mut u64,
) -> PvStatus {
    if summary.is_null() {
        return fail(PvStatus::NullArgument, "summary is NULL");
    }
    if let Err(s) = require_out(out_denominator, "out_denominator") {
        return s;
    }
    *out_denominator = (*summary).0.variance_denominator;
    PvStatus::Ok
}

/// Variance as a double (numerator / denominator).
///
/// # Safety
/// `summary` must be a live handle; `out_value` must be valid.
#[no_mangle]
pub unsafe extern "C" fn pv_frechet_variance_value(
    summary: *const PvFrechetSummary,
    out_value: *mut f64,
) -> PvStatus {
    if summary.is_null() {
        return fail(PvStatus::NullArgument, "summary is NULL");
    }
    if let Err(s) = require_out(out_value, "out_value") {
        return s;
    }
    *out_value = (*summary).0.variance_value();
    PvStatus::Ok
}

/// # Safety
/// `summary` must have come from this library and not been freed before;
/// NULL is allowed and ignored.
#[no_mangle]
pub unsafe extern "C" fn pv_frechet_free(summary: *mut PvFrechetSummary) {
    if !summary.is_null() {
        drop(Box::from_raw(summary));
    }
}

/// Ratio of two generalized variances (numerator over denominator),
/// computed from the exact fractions.
///
/// # Safety
/// Both summaries must be live handles; `out_ratio` must be valid.
#[no_mangle]
pub unsafe extern "C" fn pv_variance_ratio(
    numerator: *const PvFrechetSummary,
    denominator: *const PvFrechetSummary,
    out_ratio: *mut f64,
) -> PvStatus {
    if numerator.is_null() || denominator.is_null() {
        return fail(PvStatus::NullArgument, "summary is NULL");
    }
    if let Err(s) = require_out(out_ratio, "out_ratio") {
        return s;
    }
    match variance_ratio(&(*numerator).0, &(*denominator).0) {
        Ok(ratio) => {
            *out_ratio = *ratio.numer() as f64 / *ratio.denom() as f64;
            PvStatus::Ok
        }
        Err(e) => fail_with(&e),
    }
}

/// Permutation test over two arrays of coded lines; the observed statistic
/// is variance(b)/variance(a). Free the handle with [`pv_permtest_free`].
///
/// # Safety
/// `lines_a`/`lines_b` must point to `n_a`/`n_b` NUL-terminated strings;
/// `out_test` must be valid.
#[no_mangle]
pub unsafe extern "C" fn pv_line_permutation_test(
    lines_a: *const *const c_char,
    n_a: usize,
    lines_b: *const *const c_char,
    n_b: usize,
    n_resamples: usize,
    seed: u64,
    power: u32,
    tail: PvTail,
    out_test: *mut *mut PvPermTest,
) -> PvStatus {
    let a = match utf8_array(lines_a, n_a, "lines_a") {
        Ok(a) => a,
        Err(s) => return s,
    };
    let b = match utf8_array(lines_b, n_b, "lines_b") {
        Ok(b) => b,
        Err(s) => return s,
    };
    if let Err(s) = require_out(out_test, "out_test") {
        return s;
    }
    let seq_a: Vec<SymbolSequence> = a.iter().map(|s| SymbolSequence::new(s)).collect();
    let seq_b: Vec<SymbolSequence> = b.iter().map(|s| SymbolSequence::new(s)).collect();
    match line_permutation_test(&seq_a, &seq_b, n_resamples, seed, power, tail.into()) {
        Ok(result) => {
            *out_test = Box::into_raw(Box::new(PvPermTest(result)));
            PvStatus::Ok
        }
        Err(e) => fail_with(&e),
    }
}

/// Count-weighted permutation test. `patterns` is the combined meter list;
/// `counts_a`/`counts_b` align with it. The observed statistic is
/// variance(b)/variance(a). Free the handle with [`pv_permtest_free`].
///
/// # Safety
/// `patterns` must point to `n_patterns` NUL-terminated strings; the count
/// arrays must each hold `n_patterns` values; `out_test` must be valid.
#[no_mangle]
pub unsafe extern "C" fn pv_counts_permutation_test(
    patterns: *const *const c_char,
    n_patterns: usize,
    counts_a: *const u64,
    counts_b: *const u64,
    n_resamples: usize,
    seed: u64,
    weighting: PvWeighting,
    tail: PvTail,
    out_test: *mut *mut PvPermTest,
) -> PvStatus {
    let pattern_texts = match utf8_array(patterns, n_patterns, "patterns") {
        Ok(p) => p,
        Err(s) => return s,
    };
    let counts_a = match slice_arg(counts_a, n_patterns, "counts_a") {
        Ok(c) => c,
        Err(s) => return s,
    };
    let counts_b = match slice_arg(counts_b, n_patterns, "counts_b") {
        Ok(c) => c,
        Err(s) => return s,
    };
    if let Err(s) = require_out(out_test, "out_test") {
        return s;
    }

    let mut universe = Vec::with_capacity(n_patterns);
    for text in &pattern_texts {
        match MeterPattern::parse(text) {
            Ok(pattern) => universe.push(pattern),
            Err(e) => return fail_with(&e),
        }
    }
    let make_table = |counts: &[u64]| -> Result<CountTable, Error> {
        CountTable::new(universe.iter().cloned().zip(counts.iter().copied()).collect())
    };
    let (table_a, table_b) = match (make_table(counts_a), make_table(counts_b)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => return fail_with(&e),
    };
    let sequences: Vec<SymbolSequence> =
        universe.iter().map(|p| p.as_sequence().clone()).collect();
    let matrix = match DistanceMatrix::from_items(&sequences) {
        Ok(m) => m,
        Err(e) => return fail_with(&e),
    };
    match counts_permutation_test(
        &matrix,
        &universe,
        &table_a,
        &table_b,
        n_resamples,
        seed,
        weighting.into(),
        tail.into(),
    ) {
        Ok(result) => {
            *out_test = Box::into_raw(Box::new(PvPermTest(result)));
            PvStatus::Ok
        }
        Err(e) => fail_with(&e),
    }
}

/// Observed variance ratio (positive infinity if the denominator variance
/// was zero).
///
/// # Safety
/// `test` must be a live handle; `out_observed` must be valid.
#[no_mangle]
pub unsafe extern "C" fn pv_permtest_observed(
    test: *const PvPermTest,
    out_observed: *mut f64,
) -> PvStatus {
    if test.is_null() {
        return fail(PvStatus::NullArgument, "test is NULL");
    }
    if let Err(s) = require_out(out_observed, "out_observed") {
        return s;
    }
    *out_observed = (*test).0.observed_value();
    PvStatus::Ok
}

/// Raw empirical p-value (qualifying count / resamples).
///
/// # Safety
/// `test` must be a live handle; `out_p` must be valid.
#[no_mangle]
pub unsafe extern "C" fn pv_permtest_p_value(
    test: *const PvPermTest,
    out_p: *mut f64,
) -> PvStatus {
    if test.is_null() {
        return fail(PvStatus::NullArgument, "test is NULL");
    }
    if let Err(s) = require_out(out_p, "out_p") {
        return s;
    }
    *out_p = (*test).0.p_value();
    PvStatus::Ok
}

/// Number of qualifying resamples (the p-value numerator).
///
/// # Safety
/// `test` must be a live handle; `out_count` must be valid.
#[no_mangle]
pub unsafe extern "C" fn pv_permtest_n_qualifying(
    test: *const PvPermTest,
    out_count: *mut usize,
) -> PvStatus {
    if test.is_null() {
        return fail(PvStatus::NullArgument, "test is NULL");
    }
    if let Err(s) = require_out(out_count, "out_count") {
        return s;
    }
    *out_count = (*test).0.n_qualifying;
    PvStatus::Ok
}

/// Number of resamples drawn.
///
/// # Safety
/// `test` must be a live handle; `out_count` must be valid.
#[no_mangle]
pub unsafe extern "C" fn pv_permtest_n_resamples(
    test: *const PvPermTest,
    out_count: *mut usize,
) -> PvStatus {
    if test.is_null() {
        return fail(PvStatus::NullArgument, "test is NULL");
    }
    if let Err(s) = require_out(out_count, "out_count") {
        return s;
    }
    *out_count = (*test).0.n_resamples;
    PvStatus::Ok
}

/// The `index`-th resample ratio (positive infinity for a degenerate
/// resample with zero denominator variance).
///
/// # Safety
/// `test` must be a live handle; `out_ratio` must be valid.
#[no_mangle]
pub unsafe extern "C" fn pv_permtest_ratio(
    test: *const PvPermTest,
    index: usize,
    out_ratio: *mut f64,
) -> PvStatus {
    if test.is_null() {
        return fail(PvStatus::NullArgument, "test is NULL");
    }
    if let Err(s) = require_out(out_ratio, "out_ratio") {
        return s;
    }
    let ratios = &(*test).0.resample_ratios;
    match ratios.get(index) {
        Some(ratio) => {
            *out_ratio = ratio.to_f64();
            PvStatus::Ok
        }
        None => fail(PvStatus::IndexOutOfRange, &format!("resample {index} out of range")),
    }
}

/// # Safety
/// `test` must have come from this library and not been freed before;
/// NULL is allowed and ignored.
#[no_mangle]
pub unsafe extern "C" fn pv_permtest_free(test: *mut PvPermTest) {
    if !test.is_null() {
        drop(Box::from_raw(test));
    }
}
