//! Generalized means and variances on a finite metric space of strings.
//!
//! The candidate set is always the attested rows of the distance matrix:
//! the mean is the row (or rows) minimizing the sum of powered distances to
//! every other row, and the variance is that minimal sum divided by the
//! sample size. All objectives are exact integers; floats appear only at
//! presentation time.

use num_rational::Ratio;

use crate::coder::MeterPattern;
use crate::error::{Error, Result};
use crate::metric::DistanceMatrix;

/// How to weight row objectives when counts stand in for repeated lines.
///
/// `DcSquared` squares the count-scaled distances, Σ_j (c_j·d_ij)² — the
/// published form, the one the reference totals require. `Conventional`
/// is the frequency-weighted sum of squares Σ_j c_j·d_ij², offered behind
/// an explicit option and never the default.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Weighting {
    #[default]
    DcSquared,
    Conventional,
}

impl std::str::FromStr for Weighting {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper" | "dc-squared" => Ok(Weighting::DcSquared),
            "conventional" => Ok(Weighting::Conventional),
            other => Err(Error::InvalidArgument(format!(
                "weighting must be \"paper\" or \"conventional\", got \"{other}\""
            ))),
        }
    }
}

/// Result of a generalized mean/variance computation.
///
/// `mean_indices` lists every row attaining the minimum, ascending; ties
/// are real (two samples in the reference data have 4 and 3 means). The
/// variance is the exact fraction `variance_numerator / variance_denominator`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrechetSummary {
    pub mean_indices: Vec<usize>,
    pub variance_numerator: u128,
    pub variance_denominator: u64,
    pub power: u32,
}

impl FrechetSummary {
    pub fn variance_exact(&self) -> Ratio<u128> {
        Ratio::new(self.variance_numerator, self.variance_denominator as u128)
    }

    pub fn variance_value(&self) -> f64 {
        self.variance_numerator as f64 / self.variance_denominator as f64
    }

    /// "generalized median" when power is 1, "generalized mean" otherwise.
    pub fn statistic_name(&self) -> &'static str {
        if self.power == 1 {
            "generalized median"
        } else {
            "generalized mean"
        }
    }
}

fn checked_pow(base: u128, exp: u32) -> Result<u128> {
    base.checked_pow(exp).ok_or(Error::Overflow)
}

/// Per-row objectives S_i = Σ_j d(i, j)^p.
pub fn row_objectives(d: &DistanceMatrix, power: u32) -> Result<Vec<u128>> {
    if power == 0 {
        return Err(Error::InvalidArgument("power must be at least 1".to_string()));
    }
    let mut objectives = Vec::with_capacity(d.n());
    for i in 0..d.n() {
        let mut sum: u128 = 0;
        for &dist in d.row(i) {
            sum = sum
                .checked_add(checked_pow(dist as u128, power)?)
                .ok_or(Error::Overflow)?;
        }
        objectives.push(sum);
    }
    Ok(objectives)
}

/// Per-row objectives under counts: Σ_j (c_j·d_ij)² or Σ_j c_j·d_ij².
pub fn weighted_row_objectives(
    d: &DistanceMatrix,
    counts: &[u64],
    weighting: Weighting,
) -> Result<Vec<u128>> {
    if counts.len() != d.n() {
        return Err(Error::MisalignedCounts { counts: counts.len(), matrix: d.n() });
    }
    let mut objectives = Vec::with_capacity(d.n());
    for i in 0..d.n() {
        let mut sum: u128 = 0;
        for (j, &dist) in d.row(i).iter().enumerate() {
            let term = match weighting {
                Weighting::DcSquared => {
                    let scaled = (counts[j] as u128)
                        .checked_mul(dist as u128)
                        .ok_or(Error::Overflow)?;
                    scaled.checked_mul(scaled).ok_or(Error::Overflow)?
                }
                Weighting::Conventional => (counts[j] as u128)
                    .checked_mul(dist as u128 * dist as u128)
                    .ok_or(Error::Overflow)?,
            };
            sum = sum.checked_add(term).ok_or(Error::Overflow)?;
        }
        objectives.push(sum);
    }
    Ok(objectives)
}

fn summarize(objectives: &[u128], denominator: u64, power: u32) -> FrechetSummary {
    let minimum = *objectives.iter().min().expect("objectives nonempty");
    let mean_indices = objectives
        .iter()
        .enumerate()
        .filter(|(_, &s)| s == minimum)
        .map(|(i, _)| i)
        .collect();
    FrechetSummary {
        mean_indices,
        variance_numerator: minimum,
        variance_denominator: denominator,
        power,
    }
}

/// Generalized mean and variance over the rows of `d`: the minimal
/// objective divided by the row count.
pub fn frechet_summary(d: &DistanceMatrix, power: u32) -> Result<FrechetSummary> {
    let objectives = row_objectives(d, power)?;
    Ok(summarize(&objectives, d.n() as u64, power))
}

/// A table of meter patterns and their line counts, aligned to a
/// distance matrix over the same patterns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountTable {
    rows: Vec<(MeterPattern, u64)>,
    total: u64,
}

impl CountTable {
    pub fn new(rows: Vec<(MeterPattern, u64)>) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        for (pattern, _) in &rows {
            if !seen.insert(pattern.clone()) {
                return Err(Error::InvalidArgument(format!(
                    "duplicate pattern \"{pattern}\" in count table"
                )));
            }
        }
        let total = rows
            .iter()
            .try_fold(0u64, |acc, (_, c)| acc.checked_add(*c))
            .ok_or(Error::Overflow)?;
        if total == 0 {
            return Err(Error::InvalidArgument(
                "count table has no lines (all counts zero)".to_string(),
            ));
        }
        Ok(CountTable { rows, total })
    }

    /// Parses the TSV interchange form: `pattern<TAB>count`, one row per
    /// line, `#` comments and blank lines ignored.
    pub fn from_tsv(text: &str) -> Result<Self> {
        let mut rows = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            let line_no = idx + 1;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let (pattern_text, count_text) =
                trimmed.split_once('\t').ok_or_else(|| Error::CountsParse {
                    line: line_no,
                    message: "expected pattern<TAB>count".to_string(),
                })?;
            let pattern = MeterPattern::parse(pattern_text).map_err(|e| Error::CountsParse {
                line: line_no,
                message: e.to_string(),
            })?;
            let count =
                count_text.trim().parse::<u64>().map_err(|e| Error::CountsParse {
                    line: line_no,
                    message: format!("bad count \"{}\": {e}", count_text.trim()),
                })?;
            rows.push((pattern, count));
        }
        if rows.is_empty() {
            return Err(Error::EmptyDataset);
        }
        CountTable::new(rows)
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for (pattern, count) in &self.rows {
            out.push_str(&format!("{pattern}\t{count}\n"));
        }
        out
    }

    pub fn rows(&self) -> &[(MeterPattern, u64)] {
        &self.rows
    }

    pub fn patterns(&self) -> impl Iterator<Item = &MeterPattern> {
        self.rows.iter().map(|(p, _)| p)
    }

    pub fn counts(&self) -> Vec<u64> {
        self.rows.iter().map(|(_, c)| *c).collect()
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Re-expresses this table over `universe`, zero-filling patterns this
    /// table lacks. Errors if this table has a pattern outside `universe`.
    pub fn aligned_counts(&self, universe: &[MeterPattern]) -> Result<Vec<u64>> {
        let mut counts = vec![0u64; universe.len()];
        for (pattern, count) in &self.rows {
            let idx = universe.iter().position(|p| p == pattern).ok_or_else(|| {
                Error::InvalidArgument(format!(
                    "pattern \"{pattern}\" is not in the combined pattern list"
                ))
            })?;
            counts[idx] += count;
        }
        Ok(counts)
    }
}

/// The union of two tables' patterns: first table's order, then any
/// patterns only the second table has, zero-filled on the other side.
pub fn combined_universe(a: &CountTable, b: &CountTable) -> Vec<MeterPattern> {
    let mut universe: Vec<MeterPattern> = a.patterns().cloned().collect();
    for pattern in b.patterns() {
        if !universe.contains(pattern) {
            universe.push(pattern.clone());
        }
    }
    universe
}

/// Count-weighted generalized mean and variance: the minimal weighted row
/// objective divided by the number of poetic lines (the count total).
pub fn weighted_frechet(
    d: &DistanceMatrix,
    counts: &CountTable,
    weighting: Weighting,
) -> Result<FrechetSummary> {
    weighted_frechet_from_counts(d, &counts.counts(), counts.total(), weighting)
}

/// As [`weighted_frechet`] but over raw aligned counts; `n_lines` is the
/// variance denominator (the total line count behind the counts).
pub fn weighted_frechet_from_counts(
    d: &DistanceMatrix,
    counts: &[u64],
    n_lines: u64,
    weighting: Weighting,
) -> Result<FrechetSummary> {
    if n_lines == 0 {
        return Err(Error::InvalidArgument("line count must be positive".to_string()));
    }
    let objectives = weighted_row_objectives(d, counts, weighting)?;
    Ok(summarize(&objectives, n_lines, 2))
}

/// Ratio of two generalized variances, numerator over denominator, exact.
pub fn variance_ratio(
    numerator: &FrechetSummary,
    denominator: &FrechetSummary,
) -> Result<Ratio<u128>> {
    if denominator.variance_numerator == 0 {
        return Err(Error::DegenerateSample);
    }
    let num = numerator
        .variance_numerator
        .checked_mul(denominator.variance_denominator as u128)
        .ok_or(Error::Overflow)?;
    let den = denominator
        .variance_numerator
        .checked_mul(numerator.variance_denominator as u128)
        .ok_or(Error::Overflow)?;
    Ok(Ratio::new(num, den))
}
