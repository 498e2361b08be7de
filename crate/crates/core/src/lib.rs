//! Generalized (Fréchet) means and variances of string-coded poetic lines
//! under edit distance, with permutation-resampled variance-ratio tests for
//! comparing the prosodic variability of two texts.
//!
//! The pipeline: Middle English lines are coded into binary alliteration
//! position strings ([`coder`]), pairwise Levenshtein distances form a
//! finite metric space ([`metric`]), the generalized mean/variance is the
//! row minimizing the summed powered distances ([`frechet`]), and equality
//! of two variances is tested by seeded permutation resampling of their
//! ratio ([`permtest`]). Reference datasets are embedded in [`corpus`];
//! [`render`] writes PGM heatmaps and histogram bins.

pub mod coder;
pub mod corpus;
pub mod error;
pub mod frechet;
pub mod metric;
pub mod permtest;
pub mod render;

pub use error::{Error, Result};
