//! Static rendering of analysis outputs: grayscale heatmaps as text PGM
//! (chosen for bit-exact golden comparison) and histogram binning with an
//! optional decorative SVG.

use crate::error::{Error, Result};
use crate::metric::DistanceMatrix;

/// Renders a distance matrix as a P2 (text) portable graymap, one pixel per
/// cell in row-major order. White (255) is distance 0 and the scale runs
/// linearly down to black at the matrix maximum:
/// pixel = round(255·(1 − d/d_max)). An all-zero matrix renders all white.
pub fn heatmap_pgm(matrix: &DistanceMatrix) -> String {
    let n = matrix.n();
    let d_max = matrix.max_entry();
    let mut out = String::new();
    out.push_str("P2\n");
    out.push_str(&format!("{n} {n}\n255\n"));
    for i in 0..n {
        let pixels: Vec<String> = matrix
            .row(i)
            .iter()
            .map(|&d| {
                let value = if d_max == 0 {
                    255u32
                } else {
                    (255.0 * (1.0 - d as f64 / d_max as f64)).round() as u32
                };
                value.to_string()
            })
            .collect();
        out.push_str(&pixels.join(" "));
        out.push('\n');
    }
    out
}

/// One histogram bin: `[left, right)` except the last bin, which includes
/// its right edge.
#[derive(Debug, Clone, PartialEq)]
pub struct HistBin {
    pub left: f64,
    pub right: f64,
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    pub bins: Vec<HistBin>,
}

impl Histogram {
    pub fn total_count(&self) -> u64 {
        self.bins.iter().map(|b| b.count).sum()
    }

    /// `left,right,count` per line, no header.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for bin in &self.bins {
            out.push_str(&format!("{},{},{}\n", bin.left, bin.right, bin.count));
        }
        out
    }

    /// A plain bar chart. Decorative output only; not covered by golden
    /// comparisons.
    pub fn to_svg(&self) -> String {
        let width = 640.0;
        let height = 400.0;
        let margin = 40.0;
        let max_count = self.bins.iter().map(|b| b.count).max().unwrap_or(1).max(1) as f64;
        let bar_w = (width - 2.0 * margin) / self.bins.len() as f64;
        let mut out = String::new();
        out.push_str(&format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" \
             viewBox=\"0 0 {width} {height}\">\n"
        ));
        out.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
        for (i, bin) in self.bins.iter().enumerate() {
            let bar_h = (height - 2.0 * margin) * bin.count as f64 / max_count;
            let x = margin + i as f64 * bar_w;
            let y = height - margin - bar_h;
            out.push_str(&format!(
                "<rect x=\"{x:.2}\" y=\"{y:.2}\" width=\"{:.2}\" height=\"{bar_h:.2}\" \
                 fill=\"gray\" stroke=\"black\"/>\n",
                bar_w.max(1.0)
            ));
        }
        out.push_str(&format!(
            "<text x=\"{margin}\" y=\"{:.2}\" font-size=\"12\">{}</text>\n",
            height - margin / 2.0,
            self.bins.first().map(|b| b.left).unwrap_or(0.0)
        ));
        out.push_str(&format!(
            "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"12\" text-anchor=\"end\">{}</text>\n",
            width - margin,
            height - margin / 2.0,
            self.bins.last().map(|b| b.right).unwrap_or(0.0)
        ));
        out.push_str("</svg>\n");
        out
    }
}

/// Bins `values` into `n_bins` equal-width bins over [min, max]. Constant
/// input collapses to a single bin. Counts always sum to `values.len()`.
pub fn histogram(values: &[f64], n_bins: usize) -> Result<Histogram> {
    if values.is_empty() {
        return Err(Error::EmptyDataset);
    }
    if n_bins == 0 {
        return Err(Error::InvalidArgument("need at least one bin".to_string()));
    }
    if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFiniteValue { line: pos + 1 });
    }
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if min == max {
        return Ok(Histogram {
            bins: vec![HistBin { left: min, right: max, count: values.len() as u64 }],
        });
    }
    let width = (max - min) / n_bins as f64;
    let mut counts = vec![0u64; n_bins];
    for &v in values {
        let mut idx = ((v - min) / width) as usize;
        if idx >= n_bins {
            idx = n_bins - 1; // right-inclusive last bin
        }
        counts[idx] += 1;
    }
    let bins = counts
        .into_iter()
        .enumerate()
        .map(|(i, count)| HistBin {
            left: min + i as f64 * width,
            right: if i + 1 == n_bins { max } else { min + (i + 1) as f64 * width },
            count,
        })
        .collect();
    Ok(Histogram { bins })
}
