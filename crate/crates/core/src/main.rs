//! Command-line front end: ingestion → coding → distances → generalized
//! mean/variance → permutation testing, plus heatmap/histogram rendering.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use prosovar::coder::{
    auto_code_line, parse_annotated_line, tokenize, Lexicon, PositionString, Variant,
};
use prosovar::corpus::{ingest_poem, load_fixture, FixturePayload, SkipSpec, FIXTURE_NAMES};
use prosovar::error::{Error, Result};
use prosovar::frechet::{
    combined_universe, frechet_summary, weighted_frechet, CountTable,
    FrechetSummary, Weighting,
};
use prosovar::metric::{DistanceMatrix, SymbolSequence};
use prosovar::permtest::{
    counts_permutation_test, line_permutation_test, PermTestResult, Tail,
};
use prosovar::render::{heatmap_pgm, histogram};

#[derive(Parser)]
#[command(
    name = "prosovar",
    version,
    about = "Generalized means/variances of string-coded poetic lines and \
             permutation tests of prosodic variability"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Code a poem into alliteration position strings (one per line)
    Code(CodeArgs),
    /// Pairwise edit distance matrix of coded strings, as CSV
    Distmat(DistmatArgs),
    /// Generalized mean and variance of a distance matrix
    Frechet(FrechetArgs),
    /// Permutation test comparing two files of coded lines
    FtestLines(FtestLinesArgs),
    /// Count-weighted permutation test over two meter-count tables
    FtestCounts(FtestCountsArgs),
    /// Render a matrix CSV as a grayscale PGM heatmap
    RenderHeatmap(RenderHeatmapArgs),
    /// Bin a column of values into a histogram CSV (optional SVG)
    RenderHist(RenderHistArgs),
    /// List the embedded reference fixtures, or print one
    Fixtures(FixturesArgs),
}

#[derive(Args)]
struct CodeArgs {
    /// Poem file, one poetic line per text line ("#" lines are skipped);
    /// lines containing *asterisk* marks are taken as hand annotations
    #[arg(long, conflicts_with = "fixture")]
    input: Option<PathBuf>,
    /// Use an embedded fixture as input (e.g. figure1_lines)
    #[arg(long)]
    fixture: Option<String>,
    /// Coding variant: A marks every word with the alliterating sound,
    /// B approximates stressed alliteration
    #[arg(long, default_value = "B")]
    variant: String,
    /// 1-based line numbers/ranges to skip, e.g. "3,7-10"
    #[arg(long)]
    skip_lines: Option<String>,
    /// Replacement stop-word list (one word per line)
    #[arg(long)]
    stopwords: Option<PathBuf>,
    /// Replacement unstressed-prefix list (one prefix per line)
    #[arg(long)]
    prefixes: Option<PathBuf>,
}

#[derive(Args)]
struct DistmatArgs {
    /// File of coded strings, one per line
    #[arg(long, conflicts_with = "fixture")]
    input: Option<PathBuf>,
    /// Embedded fixture to use as items (codes or a count table's patterns)
    #[arg(long)]
    fixture: Option<String>,
    /// Output CSV path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FrechetArgs {
    /// Distance matrix CSV
    #[arg(long, conflicts_with = "fixture")]
    matrix: Option<PathBuf>,
    /// Embedded matrix fixture (figure2_matrix, figure7_matrix)
    #[arg(long)]
    fixture: Option<String>,
    /// Power p of the distances in the objective (1 = generalized median)
    #[arg(long, default_value_t = 2)]
    power: u32,
    /// Count table TSV (pattern<TAB>count) switching to the weighted analysis
    #[arg(long, conflicts_with = "counts_fixture")]
    counts: Option<PathBuf>,
    /// Embedded count fixture (table1_sggk, table1_ppb, table1_combined)
    #[arg(long)]
    counts_fixture: Option<String>,
    /// Weighted objective: "paper" squares the count-scaled distances,
    /// "conventional" weights squared distances by counts
    #[arg(long, default_value = "paper")]
    weighting: String,
    /// File of item strings echoed next to the mean indices
    #[arg(long)]
    items: Option<PathBuf>,
    /// Emit one machine-readable JSON record instead of text
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct FtestLinesArgs {
    /// First sample: file of coded strings, one per line
    #[arg(long, conflicts_with = "fixture_a")]
    a: Option<PathBuf>,
    /// First sample from an embedded fixture
    #[arg(long)]
    fixture_a: Option<String>,
    /// Second sample: file of coded strings, one per line
    #[arg(long, conflicts_with = "fixture_b")]
    b: Option<PathBuf>,
    /// Second sample from an embedded fixture
    #[arg(long)]
    fixture_b: Option<String>,
    /// RNG seed (required: runs are reproducible by construction)
    #[arg(long)]
    seed: u64,
    /// Number of resamples
    #[arg(long, default_value_t = 1000)]
    resamples: usize,
    /// Power of the distances in the variance objective
    #[arg(long, default_value_t = 2)]
    power: u32,
    /// Tail rule: "two" (reciprocal two-tailed) or "greater"
    #[arg(long, default_value = "two")]
    tail: String,
    /// Write all resample ratios as CSV (one per line, index order)
    #[arg(long)]
    out_ratios: Option<PathBuf>,
    /// Also report the (b+1)/(n+1)-smoothed p-value
    #[arg(long)]
    smoothed: bool,
    /// Emit one machine-readable JSON record instead of text
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct FtestCountsArgs {
    /// First sample: count table TSV (pattern<TAB>count)
    #[arg(long, conflicts_with = "fixture_a")]
    a: Option<PathBuf>,
    /// First sample from an embedded fixture (e.g. table1_sggk)
    #[arg(long)]
    fixture_a: Option<String>,
    /// Second sample: count table TSV
    #[arg(long, conflicts_with = "fixture_b")]
    b: Option<PathBuf>,
    /// Second sample from an embedded fixture (e.g. table1_ppb)
    #[arg(long)]
    fixture_b: Option<String>,
    /// RNG seed (required: runs are reproducible by construction)
    #[arg(long)]
    seed: u64,
    /// Number of resamples
    #[arg(long, default_value_t = 1000)]
    resamples: usize,
    /// Weighted objective: "paper" or "conventional"
    #[arg(long, default_value = "paper")]
    weighting: String,
    /// Tail rule: "two" or "greater"
    #[arg(long, default_value = "greater")]
    tail: String,
    /// Write all resample ratios as CSV (one per line, index order)
    #[arg(long)]
    out_ratios: Option<PathBuf>,
    /// Also report the (b+1)/(n+1)-smoothed p-value
    #[arg(long)]
    smoothed: bool,
    /// Emit one machine-readable JSON record instead of text
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct RenderHeatmapArgs {
    /// Distance matrix CSV
    #[arg(long, conflicts_with = "fixture")]
    matrix: Option<PathBuf>,
    /// Embedded matrix fixture
    #[arg(long)]
    fixture: Option<String>,
    /// Output PGM (P2) path
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct RenderHistArgs {
    /// Values file, one number per line (e.g. a resample-ratio CSV)
    #[arg(long)]
    values: PathBuf,
    /// Number of equal-width bins
    #[arg(long, default_value_t = 20)]
    bins: usize,
    /// Output CSV path: bin_left,bin_right,count per line
    #[arg(long)]
    out: PathBuf,
    /// Optional SVG bar chart
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Args)]
struct FixturesArgs {
    /// Fixture to print; lists all fixtures when omitted
    name: Option<String>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            eprint!("{e}");
            return ExitCode::from(1);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Code(args) => cmd_code(args),
        Command::Distmat(args) => cmd_distmat(args),
        Command::Frechet(args) => cmd_frechet(args),
        Command::FtestLines(args) => cmd_ftest_lines(args),
        Command::FtestCounts(args) => cmd_ftest_counts(args),
        Command::RenderHeatmap(args) => cmd_render_heatmap(args),
        Command::RenderHist(args) => cmd_render_hist(args),
        Command::Fixtures(args) => cmd_fixtures(args),
    }
}

fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn write_file(path: &Path, content: &str) -> Result<()> {
    std::fs::write(path, content).map_err(|e| Error::io(path, e))
}

/// Non-empty, non-comment lines of a text file.
fn data_lines(path: &Path) -> Result<Vec<String>> {
    let lines: Vec<String> = read_file(path)?
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(str::to_string)
        .collect();
    if lines.is_empty() {
        return Err(Error::NoLines { path: path.to_path_buf() });
    }
    Ok(lines)
}

fn sequences_from_path(path: &Path) -> Result<Vec<SymbolSequence>> {
    Ok(data_lines(path)?.iter().map(|l| SymbolSequence::new(l)).collect())
}

fn sequences_from_fixture(name: &str) -> Result<Vec<SymbolSequence>> {
    match load_fixture(name)?.payload {
        FixturePayload::Codes(codes) => {
            Ok(codes.iter().map(|c| c.as_sequence().clone()).collect())
        }
        FixturePayload::Counts(table) => {
            Ok(table.patterns().map(|p| p.as_sequence().clone()).collect())
        }
        _ => Err(Error::InvalidArgument(format!(
            "fixture \"{name}\" holds no coded strings; run `code` on a lines fixture first"
        ))),
    }
}

fn sequences_from(path: Option<&PathBuf>, fixture: Option<&String>, what: &str) -> Result<Vec<SymbolSequence>> {
    match (path, fixture) {
        (Some(p), _) => sequences_from_path(p),
        (None, Some(f)) => sequences_from_fixture(f),
        (None, None) => Err(Error::InvalidArgument(format!(
            "{what} required (pass a path or a fixture name)"
        ))),
    }
}

fn matrix_from(path: Option<&PathBuf>, fixture: Option<&String>) -> Result<DistanceMatrix> {
    match (path, fixture) {
        (Some(p), _) => DistanceMatrix::from_csv(&read_file(p)?),
        (None, Some(f)) => match load_fixture(f)?.payload {
            FixturePayload::Matrix(m) => Ok(m),
            _ => Err(Error::InvalidArgument(format!("fixture \"{f}\" is not a matrix"))),
        },
        (None, None) => {
            Err(Error::InvalidArgument("a matrix is required (path or fixture)".to_string()))
        }
    }
}

fn counts_from(path: Option<&PathBuf>, fixture: Option<&String>, what: &str) -> Result<CountTable> {
    match (path, fixture) {
        (Some(p), _) => CountTable::from_tsv(&read_file(p)?),
        (None, Some(f)) => match load_fixture(f)?.payload {
            FixturePayload::Counts(c) => Ok(c),
            _ => Err(Error::InvalidArgument(format!("fixture \"{f}\" is not a count table"))),
        },
        (None, None) => Err(Error::InvalidArgument(format!(
            "{what} required (pass a path or a fixture name)"
        ))),
    }
}

fn cmd_code(args: CodeArgs) -> Result<()> {
    let variant = Variant::from_str(&args.variant)?;
    let lexicon =
        Lexicon::from_files(args.stopwords.as_deref(), args.prefixes.as_deref())?;
    let skips = match &args.skip_lines {
        Some(spec) => SkipSpec::parse(spec)?,
        None => SkipSpec::default(),
    };

    let lines: Vec<String> = match (&args.input, &args.fixture) {
        (Some(path), _) => {
            let poem = ingest_poem(path, &skips)?;
            eprintln!("kept {} lines, skipped {}", poem.kept, poem.skipped);
            poem.lines.into_iter().map(|(_, text)| text).collect()
        }
        (None, Some(name)) => match load_fixture(name)?.payload {
            FixturePayload::Lines(lines) => lines,
            _ => {
                return Err(Error::InvalidArgument(format!(
                    "fixture \"{name}\" holds no poem lines"
                )))
            }
        },
        (None, None) => {
            return Err(Error::InvalidArgument(
                "an input poem required (pass a path or a fixture name)".to_string(),
            ))
        }
    };

    let annotated = lines.iter().any(|l| l.contains('*'));
    let codes: Vec<PositionString> = if annotated {
        lines
            .iter()
            .map(|l| parse_annotated_line(l).map(|a| a.position_string()))
            .collect::<Result<_>>()?
    } else {
        eprintln!(
            "note: auto-coded, variant {} (best-effort); annotated input is authoritative",
            args.variant.to_uppercase()
        );
        lines
            .iter()
            .map(|l| auto_code_line(&tokenize(l), variant, &lexicon))
            .collect::<Result<_>>()?
    };

    for code in codes {
        println!("{code}");
    }
    Ok(())
}

fn cmd_distmat(args: DistmatArgs) -> Result<()> {
    let items = sequences_from(args.input.as_ref(), args.fixture.as_ref(), "an input file")?;
    let matrix = DistanceMatrix::from_items(&items)?;
    let csv = matrix.to_csv();
    match &args.out {
        Some(path) => write_file(path, &csv)?,
        None => print!("{csv}"),
    }
    Ok(())
}

#[derive(Serialize)]
struct FrechetRecord {
    mean_indices: Vec<usize>,
    mean_items: Vec<String>,
    variance_numerator: u64,
    variance_denominator: u64,
    variance_value: f64,
    power: u32,
}

fn frechet_record(summary: &FrechetSummary, items: &[String]) -> Result<FrechetRecord> {
    let numerator = u64::try_from(summary.variance_numerator).map_err(|_| Error::Overflow)?;
    let mean_items = summary
        .mean_indices
        .iter()
        .filter_map(|&i| items.get(i).cloned())
        .collect();
    Ok(FrechetRecord {
        mean_indices: summary.mean_indices.clone(),
        mean_items,
        variance_numerator: numerator,
        variance_denominator: summary.variance_denominator,
        variance_value: summary.variance_value(),
        power: summary.power,
    })
}

fn indices_csv(indices: &[usize]) -> String {
    indices.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(", ")
}

fn print_frechet_report(summary: &FrechetSummary, items: &[String]) {
    println!("statistic: {} (power {})", summary.statistic_name(), summary.power);
    println!("mean indices: {}", indices_csv(&summary.mean_indices));
    let echoed: Vec<String> = summary
        .mean_indices
        .iter()
        .filter_map(|&i| items.get(i).cloned())
        .collect();
    if !echoed.is_empty() {
        println!("mean items: {}", echoed.join(", "));
    }
    println!(
        "variance: {}/{} = {}",
        summary.variance_numerator,
        summary.variance_denominator,
        summary.variance_value()
    );
}

fn cmd_frechet(args: FrechetArgs) -> Result<()> {
    let matrix = matrix_from(args.matrix.as_ref(), args.fixture.as_ref())?;
    matrix.validate_metric()?;
    let weighting = Weighting::from_str(&args.weighting)?;

    let counts = match (&args.counts, &args.counts_fixture) {
        (None, None) => None,
        (path, fixture) => Some(counts_from(path.as_ref(), fixture.as_ref(), "counts")?),
    };

    let (summary, items) = match counts {
        Some(table) => {
            if args.power != 2 {
                return Err(Error::InvalidArgument(
                    "the weighted analysis is defined for power 2 only".to_string(),
                ));
            }
            let items: Vec<String> = table.patterns().map(|p| p.to_string()).collect();
            (weighted_frechet(&matrix, &table, weighting)?, items)
        }
        None => {
            let items: Vec<String> = match &args.items {
                Some(path) => data_lines(path)?,
                None => Vec::new(),
            };
            (frechet_summary(&matrix, args.power)?, items)
        }
    };

    if args.json {
        println!("{}", serde_json::to_string(&frechet_record(&summary, &items)?).unwrap());
    } else {
        print_frechet_report(&summary, &items);
    }
    Ok(())
}

#[derive(Serialize)]
struct FtestRecord {
    observed: f64,
    p_value: f64,
    tail: String,
    seed: u64,
    n_resamples: usize,
    n_qualifying: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    smoothed_p_value: Option<f64>,
}

fn ftest_record(result: &PermTestResult, smoothed: bool) -> FtestRecord {
    FtestRecord {
        observed: result.observed_value(),
        p_value: result.p_value(),
        tail: result.tail.to_string(),
        seed: result.seed,
        n_resamples: result.n_resamples,
        n_qualifying: result.n_qualifying,
        smoothed_p_value: smoothed.then(|| result.smoothed_p_value()),
    }
}

fn print_ftest_tail(result: &PermTestResult, smoothed: bool) {
    println!("observed ratio (B/A): {:.6}", result.observed_value());
    println!("tail: {}", result.tail);
    println!("resamples: {} (seed {})", result.n_resamples, result.seed);
    println!(
        "p-value: {}/{} = {}",
        result.n_qualifying,
        result.n_resamples,
        result.p_value()
    );
    if smoothed {
        println!("smoothed p-value: {}", result.smoothed_p_value());
    }
}

fn write_ratios(result: &PermTestResult, out: Option<&PathBuf>) -> Result<()> {
    if let Some(path) = out {
        write_file(path, &result.ratios_csv())?;
    }
    Ok(())
}

fn print_side_summary(label: &str, summary: &FrechetSummary, items: &[String]) {
    let echoed: Vec<String> = summary
        .mean_indices
        .iter()
        .filter_map(|&i| items.get(i).cloned())
        .collect();
    let mean_note = if echoed.is_empty() {
        format!("mean rows [{}]", indices_csv(&summary.mean_indices))
    } else {
        format!("mean rows [{}]: {}", indices_csv(&summary.mean_indices), echoed.join(", "))
    };
    println!(
        "variance {label}: {}/{} = {} ({mean_note})",
        summary.variance_numerator,
        summary.variance_denominator,
        summary.variance_value()
    );
}

fn cmd_ftest_lines(args: FtestLinesArgs) -> Result<()> {
    let tail = Tail::from_str(&args.tail)?;
    let lines_a = sequences_from(args.a.as_ref(), args.fixture_a.as_ref(), "sample A")?;
    let lines_b = sequences_from(args.b.as_ref(), args.fixture_b.as_ref(), "sample B")?;

    let result = line_permutation_test(
        &lines_a,
        &lines_b,
        args.resamples,
        args.seed,
        args.power,
        tail,
    )?;
    write_ratios(&result, args.out_ratios.as_ref())?;

    if args.json {
        println!("{}", serde_json::to_string(&ftest_record(&result, args.smoothed)).unwrap());
        return Ok(());
    }

    let summary_a = frechet_summary(&DistanceMatrix::from_items(&lines_a)?, args.power)?;
    let summary_b = frechet_summary(&DistanceMatrix::from_items(&lines_b)?, args.power)?;
    let items_a: Vec<String> = lines_a.iter().map(|s| s.to_string()).collect();
    let items_b: Vec<String> = lines_b.iter().map(|s| s.to_string()).collect();
    println!("sample A: {} lines", lines_a.len());
    println!("sample B: {} lines", lines_b.len());
    print_side_summary("A", &summary_a, &items_a);
    print_side_summary("B", &summary_b, &items_b);
    print_ftest_tail(&result, args.smoothed);
    Ok(())
}

fn cmd_ftest_counts(args: FtestCountsArgs) -> Result<()> {
    let tail = Tail::from_str(&args.tail)?;
    let weighting = Weighting::from_str(&args.weighting)?;
    let counts_a = counts_from(args.a.as_ref(), args.fixture_a.as_ref(), "sample A")?;
    let counts_b = counts_from(args.b.as_ref(), args.fixture_b.as_ref(), "sample B")?;

    let universe = combined_universe(&counts_a, &counts_b);
    let pattern_seqs: Vec<SymbolSequence> =
        universe.iter().map(|p| p.as_sequence().clone()).collect();
    let matrix = DistanceMatrix::from_items(&pattern_seqs)?;

    let result = counts_permutation_test(
        &matrix,
        &universe,
        &counts_a,
        &counts_b,
        args.resamples,
        args.seed,
        weighting,
        tail,
    )?;
    write_ratios(&result, args.out_ratios.as_ref())?;

    if args.json {
        println!("{}", serde_json::to_string(&ftest_record(&result, args.smoothed)).unwrap());
        return Ok(());
    }

    let items: Vec<String> = universe.iter().map(|p| p.to_string()).collect();
    let aligned_a = CountTable::new(
        universe.iter().cloned().zip(counts_a.aligned_counts(&universe)?).collect(),
    )?;
    let aligned_b = CountTable::new(
        universe.iter().cloned().zip(counts_b.aligned_counts(&universe)?).collect(),
    )?;
    let summary_a = weighted_frechet(&matrix, &aligned_a, weighting)?;
    let summary_b = weighted_frechet(&matrix, &aligned_b, weighting)?;
    println!("sample A: {} lines over {} patterns", counts_a.total(), universe.len());
    println!("sample B: {} lines over {} patterns", counts_b.total(), universe.len());
    print_side_summary("A", &summary_a, &items);
    print_side_summary("B", &summary_b, &items);
    print_ftest_tail(&result, args.smoothed);
    Ok(())
}

fn cmd_render_heatmap(args: RenderHeatmapArgs) -> Result<()> {
    let matrix = matrix_from(args.matrix.as_ref(), args.fixture.as_ref())?;
    write_file(&args.out, &heatmap_pgm(&matrix))
}

fn cmd_render_hist(args: RenderHistArgs) -> Result<()> {
    let text = read_file(&args.values)?;
    let mut values = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let value: f64 = line.parse().map_err(|_| Error::InvalidArgument(format!(
            "{} line {}: \"{line}\" is not a number",
            args.values.display(),
            idx + 1
        )))?;
        if !value.is_finite() {
            return Err(Error::NonFiniteValue { line: idx + 1 });
        }
        values.push(value);
    }
    let hist = histogram(&values, args.bins)?;
    write_file(&args.out, &hist.to_csv())?;
    if let Some(svg_path) = &args.svg {
        write_file(svg_path, &hist.to_svg())?;
    }
    Ok(())
}

fn cmd_fixtures(args: FixturesArgs) -> Result<()> {
    match args.name {
        None => {
            for name in FIXTURE_NAMES {
                let fixture = load_fixture(name)?;
                println!("{name} — {}", fixture.provenance);
            }
        }
        Some(name) => {
            let fixture = load_fixture(&name)?;
            match fixture.payload {
                FixturePayload::Lines(lines) => {
                    for line in lines {
                        println!("{line}");
                    }
                }
                FixturePayload::Codes(codes) => {
                    for code in codes {
                        println!("{code}");
                    }
                }
                FixturePayload::Matrix(matrix) => print!("{}", matrix.to_csv()),
                FixturePayload::Counts(table) => print!("{}", table.to_tsv()),
            }
        }
    }
    Ok(())
}
