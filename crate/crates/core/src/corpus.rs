//! Embedded reference fixtures and ingestion of user-supplied poem and
//! count files. Fixtures are compiled in so the golden tests run offline.

use std::path::{Path, PathBuf};

use crate::coder::PositionString;
use crate::error::{Error, Result};
use crate::frechet::CountTable;
use crate::metric::DistanceMatrix;

const FIGURE1_LINES: &str = include_str!("../data/figure1_lines.txt");
const FIGURE1_CODES_A: &str = include_str!("../data/figure1_codes_variant_a.txt");
const FIGURE1_CODES_B: &str = include_str!("../data/figure1_codes_variant_b.txt");
const FIGURE2_MATRIX: &str = include_str!("../data/figure2_matrix.csv");
const FIGURE7_MATRIX: &str = include_str!("../data/figure7_matrix.csv");
const TABLE1_SGGK: &str = include_str!("../data/table1_sggk.tsv");
const TABLE1_PPB: &str = include_str!("../data/table1_ppb.tsv");
const TABLE1_COMBINED: &str = include_str!("../data/table1_combined.tsv");

/// Names accepted by [`load_fixture`], stable for CLI use.
pub const FIXTURE_NAMES: [&str; 8] = [
    "figure1_lines",
    "figure1_codes_variant_a",
    "figure1_codes_variant_b",
    "figure2_matrix",
    "figure7_matrix",
    "table1_sggk",
    "table1_ppb",
    "table1_combined",
];

#[derive(Debug, Clone)]
pub enum FixturePayload {
    Lines(Vec<String>),
    Codes(Vec<PositionString>),
    Matrix(DistanceMatrix),
    Counts(CountTable),
}

/// A named, validated reference dataset with its source location.
#[derive(Debug, Clone)]
pub struct Fixture {
    pub name: &'static str,
    pub provenance: &'static str,
    pub payload: FixturePayload,
}

fn lines_of(text: &str) -> Vec<String> {
    text.lines()
        .map(str::trim_end)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(str::to_string)
        .collect()
}

fn codes_of(text: &str) -> Result<Vec<PositionString>> {
    lines_of(text).iter().map(|l| PositionString::parse(l)).collect()
}

/// Loads one of the embedded fixtures by name.
pub fn load_fixture(name: &str) -> Result<Fixture> {
    let fixture = match name {
        "figure1_lines" => Fixture {
            name: "figure1_lines",
            provenance: "Figure 1: first ten prologue lines of Piers Plowman",
            payload: FixturePayload::Lines(lines_of(FIGURE1_LINES)),
        },
        "figure1_codes_variant_a" => Fixture {
            name: "figure1_codes_variant_a",
            provenance: "Figure 1 lines coded, variant A: every word with the alliterating initial sound",
            payload: FixturePayload::Codes(codes_of(FIGURE1_CODES_A)?),
        },
        "figure1_codes_variant_b" => Fixture {
            name: "figure1_codes_variant_b",
            provenance: "Figure 1 lines coded, variant B: stressed alliterating words only",
            payload: FixturePayload::Codes(codes_of(FIGURE1_CODES_B)?),
        },
        "figure2_matrix" => Fixture {
            name: "figure2_matrix",
            provenance: "Figure 2: edit distance matrix for the ten variant-B codings",
            payload: FixturePayload::Matrix(DistanceMatrix::from_csv(FIGURE2_MATRIX)?),
        },
        "figure7_matrix" => Fixture {
            name: "figure7_matrix",
            provenance: "Figure 7: edit distance matrix for the sixteen combined meters",
            payload: FixturePayload::Matrix(DistanceMatrix::from_csv(FIGURE7_MATRIX)?),
        },
        "table1_sggk" => Fixture {
            name: "table1_sggk",
            provenance: "Table 1: meter counts for Sir Gawain and the Green Knight",
            payload: FixturePayload::Counts(CountTable::from_tsv(TABLE1_SGGK)?),
        },
        "table1_ppb" => Fixture {
            name: "table1_ppb",
            provenance: "Table 1: meter counts for Piers Plowman (B version)",
            payload: FixturePayload::Counts(CountTable::from_tsv(TABLE1_PPB)?),
        },
        "table1_combined" => Fixture {
            name: "table1_combined",
            provenance: "Table 1: combined meter counts for both poems",
            payload: FixturePayload::Counts(CountTable::from_tsv(TABLE1_COMBINED)?),
        },
        other => {
            return Err(Error::UnknownFixture {
                name: other.to_string(),
                available: FIXTURE_NAMES.join(", "),
            })
        }
    };
    Ok(fixture)
}

/// 1-based line numbers and ranges to drop during ingestion, e.g. "3,7-10".
#[derive(Debug, Clone, Default)]
pub struct SkipSpec {
    ranges: Vec<(usize, usize)>,
}

impl SkipSpec {
    pub fn parse(spec: &str) -> Result<Self> {
        let mut ranges = Vec::new();
        for part in spec.split(',') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            let bad = || {
                Error::InvalidArgument(format!(
                    "bad skip directive \"{part}\": expected N or N-M (1-based)"
                ))
            };
            let (lo, hi) = match part.split_once('-') {
                Some((a, b)) => (
                    a.trim().parse::<usize>().map_err(|_| bad())?,
                    b.trim().parse::<usize>().map_err(|_| bad())?,
                ),
                None => {
                    let n = part.parse::<usize>().map_err(|_| bad())?;
                    (n, n)
                }
            };
            if lo == 0 || hi < lo {
                return Err(bad());
            }
            ranges.push((lo, hi));
        }
        Ok(SkipSpec { ranges })
    }

    pub fn contains(&self, line_no: usize) -> bool {
        self.ranges.iter().any(|&(lo, hi)| lo <= line_no && line_no <= hi)
    }
}

/// A poem read from disk with skips applied.
#[derive(Debug, Clone)]
pub struct IngestedPoem {
    pub path: PathBuf,
    /// (1-based source line number, text) for every kept line.
    pub lines: Vec<(usize, String)>,
    pub kept: usize,
    pub skipped: usize,
}

/// Reads a UTF-8 poem file, dropping blank lines, `#` comment/skip lines,
/// and lines named by `skips`. Encoding problems are reported with their
/// line number.
pub fn ingest_poem(path: &Path, skips: &SkipSpec) -> Result<IngestedPoem> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    let mut segments: Vec<&[u8]> = bytes.split(|&b| b == b'\n').collect();
    if bytes.ends_with(b"\n") {
        segments.pop();
    }
    let mut lines = Vec::new();
    let mut skipped = 0usize;
    for (idx, raw) in segments.into_iter().enumerate() {
        let line_no = idx + 1;
        let raw = raw.strip_suffix(b"\r").unwrap_or(raw);
        let text = std::str::from_utf8(raw)
            .map_err(|_| Error::Encoding { path: path.to_path_buf(), line: line_no })?
            .trim_end();
        if text.trim().is_empty() || text.trim_start().starts_with('#') || skips.contains(line_no)
        {
            skipped += 1;
            continue;
        }
        lines.push((line_no, text.to_string()));
    }
    if lines.is_empty() {
        return Err(Error::NoLines { path: path.to_path_buf() });
    }
    let kept = lines.len();
    Ok(IngestedPoem { path: path.to_path_buf(), lines, kept, skipped })
}
