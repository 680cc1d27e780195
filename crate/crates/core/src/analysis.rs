//! Randomness analysis: normalization to the unit interval, the threshold
//! bitmap, numerical uniformity statistics, and PGM image output.
//!
//! A uniform word stream renders as unpatterned 50% gray; a biased generator
//! shows up both visually (dark image) and numerically (black fraction,
//! monobit z, byte chi-square).

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::error::Error;
use crate::prng::Word32;
use crate::uart::serialize_word;
use crate::Result;

/// Black fractions above this mark a generator as visibly biased.
pub const DARK_BIAS_THRESHOLD: f64 = 0.55;

/// Maps a word onto [0, 1]: w / (2^32 - 1), so the extremes land exactly on
/// 0 and 1.
pub fn normalize(w: Word32) -> f64 {
    f64::from(w) / f64::from(Word32::MAX)
}

/// A black/white image, row-major. `true` is black.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bitmap {
    pub width: usize,
    pub height: usize,
    pub pixels: Vec<bool>,
}

/// Renders the first width x height samples, pixel k black iff sample k is
/// strictly below 0.5 (row = k / width, column = k % width).
pub fn threshold_bitmap(samples: &[f64], width: usize, height: usize) -> Result<Bitmap> {
    let needed = width * height;
    if samples.len() < needed {
        return Err(Error::InsufficientSamples { width, height, needed, got: samples.len() });
    }
    let pixels = samples[..needed].iter().map(|&s| s < 0.5).collect();
    Ok(Bitmap { width, height, pixels })
}

/// Share of black pixels; 0.0 for an empty bitmap.
pub fn black_fraction(b: &Bitmap) -> f64 {
    if b.pixels.is_empty() {
        return 0.0;
    }
    b.pixels.iter().filter(|&&p| p).count() as f64 / b.pixels.len() as f64
}

/// Frequency test over all 32n bits: z = (2*ones - bits) / sqrt(bits).
/// Near zero for balanced streams; |z| grows with bias.
pub fn monobit(words: &[Word32]) -> Result<f64> {
    if words.is_empty() {
        return Err(Error::EmptyInput);
    }
    let ones: u64 = words.iter().map(|w| u64::from(w.count_ones())).sum();
    let bits = 32 * words.len() as u64;
    Ok((2.0 * ones as f64 - bits as f64) / (bits as f64).sqrt())
}

/// Chi-square over the 256 byte values of the serialized stream,
/// 255 degrees of freedom. Needs at least one expected count per bin.
pub fn chi_square_bytes(words: &[Word32]) -> Result<f64> {
    let total = 4 * words.len();
    if total < 256 {
        return Err(Error::InsufficientBytes(total));
    }
    let mut counts = [0u64; 256];
    for &w in words {
        for b in serialize_word(w) {
            counts[usize::from(b)] += 1;
        }
    }
    let expected = total as f64 / 256.0;
    Ok(counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum())
}

/// The numerical verdicts for one captured stream.
#[derive(Debug, Clone, PartialEq)]
pub struct StatsReport {
    pub n: usize,
    pub black_fraction: f64,
    pub monobit_z: f64,
    pub byte_chi2: f64,
}

impl StatsReport {
    /// Flags a stream whose image would read as clearly dark.
    pub fn dark_bias(&self) -> bool {
        self.black_fraction > DARK_BIAS_THRESHOLD
    }

    /// Line-oriented `key=value` text form.
    pub fn render(&self) -> String {
        format!(
            "n={}\nblack_fraction={:.6}\nmonobit_z={:.6}\nbyte_chi2={:.6}\ndark_bias={}\n",
            self.n,
            self.black_fraction,
            self.monobit_z,
            self.byte_chi2,
            self.dark_bias(),
        )
    }
}

/// Runs the full analysis: bitmap over the first width x height words,
/// statistics over the whole stream.
pub fn analyze_words(words: &[Word32], width: usize, height: usize) -> Result<(Bitmap, StatsReport)> {
    let samples: Vec<f64> = words.iter().map(|&w| normalize(w)).collect();
    let bitmap = threshold_bitmap(&samples, width, height)?;
    let report = StatsReport {
        n: words.len(),
        black_fraction: black_fraction(&bitmap),
        monobit_z: monobit(words)?,
        byte_chi2: chi_square_bytes(words)?,
    };
    Ok((bitmap, report))
}

/// Writes the bitmap as binary PGM: maxval 255, black 0, white 255.
pub fn write_image_to<W: Write>(mut out: W, b: &Bitmap) -> Result<()> {
    debug_assert_eq!(b.pixels.len(), b.width * b.height);
    write!(out, "P5\n{} {}\n255\n", b.width, b.height)?;
    let bytes: Vec<u8> = b.pixels.iter().map(|&black| if black { 0 } else { 255 }).collect();
    out.write_all(&bytes)?;
    out.flush()?;
    Ok(())
}

pub fn write_image(b: &Bitmap, path: impl AsRef<Path>) -> Result<()> {
    write_image_to(BufWriter::new(File::create(path)?), b)
}
