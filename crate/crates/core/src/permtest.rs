//! Seeded permutation resampling of the variance-ratio statistic.
//!
//! Reproducibility contract: every randomized quantity is derived from the
//! master seed through ChaCha8 streams. Resample `i` draws from its own
//! generator seeded with `child_seed(master, i)` (a SplitMix64 mix), so
//! results do not depend on evaluation order. Shuffles are explicit
//! Fisher–Yates with `next_u64() % (i + 1)` draws; combined with the fixed
//! generator this pins every golden value to the algorithm, not to a
//! library version.

use num_rational::Ratio;
use rand_chacha::rand_core::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coder::MeterPattern;
use crate::error::{Error, Result};
use crate::frechet::{weighted_row_objectives, CountTable, Weighting};
use crate::metric::{DistanceMatrix, SymbolSequence};

/// Qualification rule for the empirical p-value.
///
/// `TwoTailedReciprocal` counts resamples at least as extreme as the
/// observed ratio on either side of 1, i.e. r ≥ max(obs, 1/obs) or
/// r ≤ min(obs, 1/obs). `OneSidedGreater` counts r ≥ obs. Comparisons are
/// inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tail {
    TwoTailedReciprocal,
    OneSidedGreater,
}

impl std::fmt::Display for Tail {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Tail::TwoTailedReciprocal => write!(f, "two_tailed_reciprocal"),
            Tail::OneSidedGreater => write!(f, "one_sided_greater"),
        }
    }
}

impl std::str::FromStr for Tail {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "two" | "two_tailed_reciprocal" => Ok(Tail::TwoTailedReciprocal),
            "greater" | "one_sided_greater" => Ok(Tail::OneSidedGreater),
            other => Err(Error::InvalidArgument(format!(
                "tail must be \"two\" or \"greater\", got \"{other}\""
            ))),
        }
    }
}

/// A variance ratio kept exact. A zero denominator variance records as
/// `Infinite`, a zero numerator variance as `Finite(0)`; both compare
/// normally under the tail rules so degenerate resamples still count.
/// When both variances are zero the ratio is taken as 1 (equal spread).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RatioStat {
    Finite(Ratio<u128>),
    Infinite,
}

impl RatioStat {
    pub fn one() -> Self {
        RatioStat::Finite(Ratio::new(1, 1))
    }

    /// Builds variance(num)/variance(den) from two exact variance fractions.
    pub fn from_variances(
        numerator: (u128, u64),
        denominator: (u128, u64),
    ) -> Result<Self> {
        let (num_n, num_d) = numerator;
        let (den_n, den_d) = denominator;
        match (num_n, den_n) {
            (0, 0) => Ok(RatioStat::one()),
            (_, 0) => Ok(RatioStat::Infinite),
            (0, _) => Ok(RatioStat::Finite(Ratio::new(0, 1))),
            _ => {
                let top = num_n.checked_mul(den_d as u128).ok_or(Error::Overflow)?;
                let bottom = den_n.checked_mul(num_d as u128).ok_or(Error::Overflow)?;
                Ok(RatioStat::Finite(Ratio::new(top, bottom)))
            }
        }
    }

    pub fn reciprocal(&self) -> RatioStat {
        match self {
            RatioStat::Infinite => RatioStat::Finite(Ratio::new(0, 1)),
            RatioStat::Finite(r) if *r.numer() == 0 => RatioStat::Infinite,
            RatioStat::Finite(r) => RatioStat::Finite(r.recip()),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            RatioStat::Infinite => f64::INFINITY,
            RatioStat::Finite(r) => *r.numer() as f64 / *r.denom() as f64,
        }
    }
}

impl PartialOrd for RatioStat {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for RatioStat {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        match (self, other) {
            (RatioStat::Infinite, RatioStat::Infinite) => std::cmp::Ordering::Equal,
            (RatioStat::Infinite, RatioStat::Finite(_)) => std::cmp::Ordering::Greater,
            (RatioStat::Finite(_), RatioStat::Infinite) => std::cmp::Ordering::Less,
            (RatioStat::Finite(a), RatioStat::Finite(b)) => a.cmp(b),
        }
    }
}

/// Outcome of a permutation test, bit-identical for identical inputs and
/// seed regardless of how resamples are scheduled.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermTestResult {
    pub observed: RatioStat,
    pub resample_ratios: Vec<RatioStat>,
    /// Count of qualifying resamples: the p-value numerator.
    pub n_qualifying: usize,
    pub tail: Tail,
    pub seed: u64,
    pub n_resamples: usize,
}

impl PermTestResult {
    pub fn p_value(&self) -> f64 {
        self.n_qualifying as f64 / self.n_resamples as f64
    }

    /// The (b+1)/(n+1) corrected p-value, reported only on request.
    pub fn smoothed_p_value(&self) -> f64 {
        (self.n_qualifying as f64 + 1.0) / (self.n_resamples as f64 + 1.0)
    }

    pub fn observed_value(&self) -> f64 {
        self.observed.to_f64()
    }

    /// One ratio per line, in resample index order; infinities print "inf".
    pub fn ratios_csv(&self) -> String {
        let mut out = String::new();
        for ratio in &self.resample_ratios {
            match ratio {
                RatioStat::Infinite => out.push_str("inf\n"),
                RatioStat::Finite(_) => out.push_str(&format!("{}\n", ratio.to_f64())),
            }
        }
        out
    }
}

/// Deterministic per-resample seed derivation (SplitMix64 over the master
/// seed and the resample index).
pub fn child_seed(master: u64, index: u64) -> u64 {
    let mut z = master.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// In-place Fisher–Yates using `next_u64() % (i + 1)` index draws.
fn fisher_yates<T>(items: &mut [T], rng: &mut impl Rng) {
    for i in (1..items.len()).rev() {
        let j = (rng.next_u64() % (i as u64 + 1)) as usize;
        items.swap(i, j);
    }
}

/// Uniformly permutes `items` and splits the permutation at `n1`. The two
/// outputs always hold the input multiset between them.
pub fn permute_split<T: Clone>(
    items: &[T],
    sizes: (usize, usize),
    rng: &mut impl Rng,
) -> Result<(Vec<T>, Vec<T>)> {
    let (n1, n2) = sizes;
    if n1 + n2 != items.len() {
        return Err(Error::SplitSizeMismatch { n1, n2, len: items.len() });
    }
    let mut shuffled = items.to_vec();
    fisher_yates(&mut shuffled, rng);
    let second = shuffled.split_off(n1);
    Ok((shuffled, second))
}

/// Minimal sum of powered distances over the subset's own rows.
fn subset_objective(d: &DistanceMatrix, indices: &[usize], power: u32) -> Result<u128> {
    let mut best: Option<u128> = None;
    for &i in indices {
        let mut sum: u128 = 0;
        for &j in indices {
            let term = (d.get(i, j) as u128).checked_pow(power).ok_or(Error::Overflow)?;
            sum = sum.checked_add(term).ok_or(Error::Overflow)?;
        }
        best = Some(best.map_or(sum, |b| b.min(sum)));
    }
    best.ok_or(Error::EmptyDataset)
}

fn count_qualifying(observed: &RatioStat, resamples: &[RatioStat], tail: Tail) -> usize {
    match tail {
        Tail::OneSidedGreater => resamples.iter().filter(|r| *r >= observed).count(),
        Tail::TwoTailedReciprocal => {
            let reciprocal = observed.reciprocal();
            let (lo, hi) = if *observed <= reciprocal {
                (observed.clone(), reciprocal)
            } else {
                (reciprocal, observed.clone())
            };
            resamples.iter().filter(|r| **r >= hi || **r <= lo).count()
        }
    }
}

/// Empirical p-value: the proportion of resamples qualifying under `tail`,
/// with inclusive boundary comparisons.
pub fn empirical_p(observed: f64, resamples: &[f64], tail: Tail) -> Result<f64> {
    if resamples.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let qualifying = match tail {
        Tail::OneSidedGreater => resamples.iter().filter(|&&r| r >= observed).count(),
        Tail::TwoTailedReciprocal => {
            let reciprocal = 1.0 / observed;
            let hi = observed.max(reciprocal);
            let lo = observed.min(reciprocal);
            resamples.iter().filter(|&&r| r >= hi || r <= lo).count()
        }
    };
    Ok(qualifying as f64 / resamples.len() as f64)
}

fn check_resample_args(n_resamples: usize, power: u32) -> Result<()> {
    if n_resamples == 0 {
        return Err(Error::InvalidArgument("need at least one resample".to_string()));
    }
    if power == 0 {
        return Err(Error::InvalidArgument("power must be at least 1".to_string()));
    }
    Ok(())
}

/// Permutation test over two collections of coded lines.
///
/// The observed statistic is variance(`lines_b`) / variance(`lines_a`).
/// Each resample recombines every line, shuffles, splits into the original
/// sizes, and recomputes the ratio. Pairwise distances are computed once
/// on the combined collection and reused; the distance function is fixed,
/// so this cannot change any value.
pub fn line_permutation_test(
    lines_a: &[SymbolSequence],
    lines_b: &[SymbolSequence],
    n_resamples: usize,
    seed: u64,
    power: u32,
    tail: Tail,
) -> Result<PermTestResult> {
    if lines_a.is_empty() || lines_b.is_empty() {
        return Err(Error::EmptyDataset);
    }
    check_resample_args(n_resamples, power)?;

    let n_a = lines_a.len();
    let combined: Vec<SymbolSequence> =
        lines_a.iter().chain(lines_b.iter()).cloned().collect();
    let n = combined.len();
    let d = DistanceMatrix::from_items(&combined)?;

    let side_variance = |indices: &[usize]| -> Result<(u128, u64)> {
        Ok((subset_objective(&d, indices, power)?, indices.len() as u64))
    };

    let idx_a: Vec<usize> = (0..n_a).collect();
    let idx_b: Vec<usize> = (n_a..n).collect();
    let observed = RatioStat::from_variances(side_variance(&idx_b)?, side_variance(&idx_a)?)?;

    // Shuffle a canonically ordered arrangement so that swapping the two
    // samples (which reverses the concatenation) draws the same resample
    // item multisets; with equal sizes the two-tailed p is then invariant
    // under the swap exactly, not just in distribution.
    let mut base: Vec<usize> = (0..n).collect();
    base.sort_by(|&i, &j| combined[i].cmp(&combined[j]));

    let mut resample_ratios = Vec::with_capacity(n_resamples);
    for i in 0..n_resamples {
        let mut rng = ChaCha8Rng::seed_from_u64(child_seed(seed, i as u64));
        let mut perm = base.clone();
        fisher_yates(&mut perm, &mut rng);
        #[cfg(debug_assertions)]
        {
            let mut check = perm.clone();
            check.sort_unstable();
            let identity: Vec<usize> = (0..n).collect();
            debug_assert_eq!(check, identity, "resample must conserve the combined multiset");
        }
        let (first, second) = perm.split_at(n_a);
        let ratio =
            RatioStat::from_variances(side_variance(second)?, side_variance(first)?)?;
        resample_ratios.push(ratio);
    }

    let n_qualifying = count_qualifying(&observed, &resample_ratios, tail);
    Ok(PermTestResult {
        observed,
        resample_ratios,
        n_qualifying,
        tail,
        seed,
        n_resamples,
    })
}

/// Count-weighted permutation test over two meter-count tables.
///
/// `universe` lists the combined patterns in the order matching `d`'s rows;
/// both tables are re-expressed over it (zero-filled). The observed
/// statistic is variance(`counts_b`) / variance(`counts_a`). Each resample
/// materializes the combined multiset of pattern labels, shuffles, splits
/// into the original totals, re-tabulates counts over the fixed universe,
/// and recomputes the weighted ratio.
#[allow(clippy::too_many_arguments)]
pub fn counts_permutation_test(
    d: &DistanceMatrix,
    universe: &[MeterPattern],
    counts_a: &CountTable,
    counts_b: &CountTable,
    n_resamples: usize,
    seed: u64,
    weighting: Weighting,
    tail: Tail,
) -> Result<PermTestResult> {
    check_resample_args(n_resamples, 2)?;
    if universe.len() != d.n() {
        return Err(Error::MisalignedCounts { counts: universe.len(), matrix: d.n() });
    }
    let aligned_a = counts_a.aligned_counts(universe)?;
    let aligned_b = counts_b.aligned_counts(universe)?;
    let total_a = counts_a.total();
    let total_b = counts_b.total();

    let side_variance = |counts: &[u64], total: u64| -> Result<(u128, u64)> {
        let objectives = weighted_row_objectives(d, counts, weighting)?;
        Ok((*objectives.iter().min().expect("matrix is nonempty"), total))
    };

    let observed = RatioStat::from_variances(
        side_variance(&aligned_b, total_b)?,
        side_variance(&aligned_a, total_a)?,
    )?;

    let total = total_a.checked_add(total_b).ok_or(Error::Overflow)?;
    let total_usize = usize::try_from(total)
        .ok()
        .filter(|&t| t <= 100_000_000)
        .ok_or_else(|| {
            Error::InvalidArgument(format!(
                "cannot materialize {total} pattern labels for resampling"
            ))
        })?;
    let mut labels: Vec<usize> = Vec::with_capacity(total_usize);
    for (row, (&a, &b)) in aligned_a.iter().zip(aligned_b.iter()).enumerate() {
        for _ in 0..(a + b) {
            labels.push(row);
        }
    }

    let mut resample_ratios = Vec::with_capacity(n_resamples);
    let split_at = total_a as usize;
    for i in 0..n_resamples {
        let mut rng = ChaCha8Rng::seed_from_u64(child_seed(seed, i as u64));
        let mut shuffled = labels.clone();
        fisher_yates(&mut shuffled, &mut rng);
        let mut tab_a = vec![0u64; universe.len()];
        let mut tab_b = vec![0u64; universe.len()];
        for (pos, &row) in shuffled.iter().enumerate() {
            if pos < split_at {
                tab_a[row] += 1;
            } else {
                tab_b[row] += 1;
            }
        }
        #[cfg(debug_assertions)]
        for row in 0..universe.len() {
            debug_assert_eq!(
                tab_a[row] + tab_b[row],
                aligned_a[row] + aligned_b[row],
                "resample must conserve per-pattern totals"
            );
        }
        let ratio = RatioStat::from_variances(
            side_variance(&tab_b, total_b)?,
            side_variance(&tab_a, total_a)?,
        )?;
        resample_ratios.push(ratio);
    }

    let n_qualifying = count_qualifying(&observed, &resample_ratios, tail);
    Ok(PermTestResult {
        observed,
        resample_ratios,
        n_qualifying,
        tail,
        seed,
        n_resamples,
    })
}
