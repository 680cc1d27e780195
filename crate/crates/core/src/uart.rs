//! Serial link model: 8N1 framing, little-endian word serialization, the
//! byte-sequencing handshake, clock timing, and the hex capture file format.
//!
//! Words cross the wire least-significant byte first; each byte rides in a
//! 10-bit frame (start low, 8 data bits LSB-first, stop high). The capture
//! side reassembles 4-byte groups into words and stores them one per line as
//! 8 lowercase hex digits.

use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::error::Error;
use crate::prng::Word32;
use crate::Result;

/// Data bits per frame. Parity is none, stop bits one (8N1).
pub const DATA_BITS: usize = 8;

/// Line levels per frame: start + data + stop.
pub const FRAME_BITS: usize = DATA_BITS + 2;

/// Serial link timing parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UartConfig {
    pub baud: u32,
    pub clock_hz: u32,
}

impl Default for UartConfig {
    fn default() -> UartConfig {
        UartConfig { baud: 115_200, clock_hz: 100_000_000 }
    }
}

/// Clock cycles one bit occupies on the line: clock_hz / baud, rounded to
/// nearest. 100 MHz at 115200 baud gives the well-known 868.
pub fn cycles_per_bit(c: &UartConfig) -> u32 {
    assert!(c.baud > 0, "baud must be positive");
    assert!(c.clock_hz >= c.baud, "clock must be at least the baud rate");
    ((u64::from(c.clock_hz) + u64::from(c.baud) / 2) / u64::from(c.baud)) as u32
}

/// Splits a word into wire order: least-significant byte first.
pub fn serialize_word(w: Word32) -> [u8; 4] {
    w.to_le_bytes()
}

/// Reassembles 4 wire-order bytes into a word.
pub fn deserialize_word(b: [u8; 4]) -> Word32 {
    Word32::from_le_bytes(b)
}

/// Serializes a word sequence into one contiguous wire-order byte stream.
pub fn words_to_bytes(words: &[Word32]) -> Vec<u8> {
    let mut bytes = Vec::with_capacity(words.len() * 4);
    for &w in words {
        bytes.extend_from_slice(&serialize_word(w));
    }
    bytes
}

/// Parses a wire-order byte stream back into words. The stream must hold a
/// whole number of words; a 1–3 byte tail is a short read.
pub fn bytes_to_words(bytes: &[u8]) -> Result<Vec<Word32>> {
    let mut chunks = bytes.chunks_exact(4);
    let words = chunks.by_ref().map(|c| deserialize_word([c[0], c[1], c[2], c[3]])).collect();
    match chunks.remainder().len() {
        0 => Ok(words),
        n => Err(Error::ShortRead(n)),
    }
}

/// One 10-bit frame on the line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Frame {
    pub bits: [u8; FRAME_BITS],
}

/// Wraps a byte in a frame: start bit low, data LSB-first, stop bit high.
pub fn encode_frame(byte: u8) -> Frame {
    let mut bits = [0u8; FRAME_BITS];
    for i in 0..DATA_BITS {
        bits[1 + i] = (byte >> i) & 1;
    }
    bits[FRAME_BITS - 1] = 1;
    Frame { bits }
}

/// Recovers the byte from 10 line levels, checking start and stop bits.
pub fn decode_frame(bits: &[u8]) -> Result<u8> {
    if bits.len() != FRAME_BITS {
        return Err(Error::Framing("frame must be exactly 10 line levels"));
    }
    if bits[0] != 0 {
        return Err(Error::Framing("missing start bit"));
    }
    if bits[FRAME_BITS - 1] != 1 {
        return Err(Error::Framing("missing stop bit"));
    }
    let mut byte = 0u8;
    for i in 0..DATA_BITS {
        byte |= (bits[1 + i] & 1) << i;
    }
    Ok(byte)
}

/// Byte-sequencing side of the transmitter: which quarter of the current
/// word goes out next, and whether the framer can accept a byte.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UartTxState {
    pub byte_count: u8,
    pub pending_word: Word32,
    pub ready: bool,
}

impl UartTxState {
    pub fn new() -> UartTxState {
        UartTxState { byte_count: 0, pending_word: 0, ready: true }
    }

    /// One handshake tick. When ready, latches `word` at a word boundary,
    /// emits the byte selected by `byte_count` (ascending significance), and
    /// advances the count modulo 4. When not ready, holds everything.
    pub fn tx_sequencer(&mut self, word: Word32) -> Option<u8> {
        if !self.ready {
            return None;
        }
        if self.byte_count == 0 {
            self.pending_word = word;
        }
        let byte = (self.pending_word >> (8 * u32::from(self.byte_count))) as u8;
        self.byte_count = (self.byte_count + 1) % 4;
        Some(byte)
    }
}

impl Default for UartTxState {
    fn default() -> UartTxState {
        UartTxState::new()
    }
}

/// Expands bytes into per-cycle line levels, frames back to back, each bit
/// held for `cycles_per_bit` cycles.
pub fn line_wave(bytes: &[u8], cycles_per_bit: u32) -> Vec<u8> {
    assert!(cycles_per_bit >= 1);
    let per_frame = FRAME_BITS * cycles_per_bit as usize;
    let mut wave = Vec::with_capacity(bytes.len() * per_frame);
    for &b in bytes {
        for bit in encode_frame(b).bits {
            wave.extend(std::iter::repeat_n(bit, cycles_per_bit as usize));
        }
    }
    wave
}

/// Recovers bytes from a line wave by sampling each bit at its center.
pub fn sample_line_wave(wave: &[u8], cycles_per_bit: u32) -> Result<Vec<u8>> {
    assert!(cycles_per_bit >= 1);
    let per_frame = FRAME_BITS * cycles_per_bit as usize;
    let mut bytes = Vec::with_capacity(wave.len() / per_frame);
    let mut frames = wave.chunks_exact(per_frame);
    for frame in frames.by_ref() {
        let mut bits = [0u8; FRAME_BITS];
        for (i, bit) in bits.iter_mut().enumerate() {
            *bit = frame[i * cycles_per_bit as usize + cycles_per_bit as usize / 2];
        }
        bytes.push(decode_frame(&bits)?);
    }
    if !frames.remainder().is_empty() {
        return Err(Error::Framing("truncated frame at end of wave"));
    }
    Ok(bytes)
}

/// Writes words one per line as exactly 8 lowercase hex digits + newline.
pub fn write_hex<W: Write>(mut out: W, words: &[Word32]) -> Result<()> {
    for &w in words {
        writeln!(out, "{w:08x}")?;
    }
    out.flush()?;
    Ok(())
}

/// Reads a hex capture: one word per line, `0x`/`0X` prefix optional, case
/// insensitive. Malformed lines are reported with their 1-based number.
pub fn read_hex<R: BufRead>(input: R) -> Result<Vec<Word32>> {
    let mut words = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        let text = line.trim();
        let digits = text
            .strip_prefix("0x")
            .or_else(|| text.strip_prefix("0X"))
            .unwrap_or(text);
        let word = Word32::from_str_radix(digits, 16).map_err(|_| Error::BadHexWord {
            line: i + 1,
            text: text.to_owned(),
        })?;
        words.push(word);
    }
    Ok(words)
}

pub fn write_hex_file(path: impl AsRef<Path>, words: &[Word32]) -> Result<()> {
    write_hex(BufWriter::new(File::create(path)?), words)
}

pub fn read_hex_file(path: impl AsRef<Path>) -> Result<Vec<Word32>> {
    read_hex(BufReader::new(File::open(path)?))
}

/// Reads a raw wire-order byte stream (little-endian words, no delimiters).
pub fn read_word_stream<R: io::Read>(mut input: R) -> Result<Vec<Word32>> {
    let mut bytes = Vec::new();
    input.read_to_end(&mut bytes)?;
    bytes_to_words(&bytes)
}
