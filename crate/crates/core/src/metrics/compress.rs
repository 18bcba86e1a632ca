//! Sliding-window bit compressor used as a distinguishing-complexity proxy.
//!
//! Stream layout: `γ(n + 1)` for the input length, then tokens until `n`
//! bits are produced. A literal run is `0 γ(len) bits`; a match is
//! `1 offset γ(len − min_match + 1)` with `offset − 1` in `window_bits`
//! bits. Matches may overlap the bits they produce. Parsing is greedy with
//! the nearest offset winning ties, so output is a fixed function of input.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bits::BitString;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompressorConfig {
    pub window_bits: u32,
    pub min_match: usize,
}

impl Default for CompressorConfig {
    fn default() -> Self {
        Self {
            window_bits: 10,
            min_match: 14,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompressError {
    #[error("stream ended inside a token")]
    Truncated,
    #[error("match reaches {offset} bits back with only {available} produced")]
    BadOffset { offset: usize, available: usize },
    #[error("stream encodes {extra} bits past the declared length")]
    Overrun { extra: usize },
    #[error("{0} unused bits after the last token")]
    Trailing(usize),
    #[error("window of 2^{0} bits is out of range")]
    Window(u32),
}

fn push_uint(out: &mut BitString, v: u64, width: usize) {
    out.extend_from(&BitString::from_uint(v, width));
}

/// Elias gamma code of `v ≥ 1`.
fn push_gamma(out: &mut BitString, v: u64) {
    debug_assert!(v >= 1);
    let width = 64 - v.leading_zeros() as usize;
    for _ in 1..width {
        out.push(false);
    }
    push_uint(out, v, width);
}

struct Reader<'a> {
    bits: &'a BitString,
    at: usize,
}

impl Reader<'_> {
    fn bit(&mut self) -> Result<bool, CompressError> {
        let b = self.bits.get(self.at).ok_or(CompressError::Truncated)?;
        self.at += 1;
        Ok(b)
    }

    fn uint(&mut self, width: usize) -> Result<u64, CompressError> {
        (0..width).try_fold(0u64, |acc, _| Ok((acc << 1) | self.bit()? as u64))
    }

    fn gamma(&mut self) -> Result<u64, CompressError> {
        let mut zeros = 0;
        while !self.bit()? {
            zeros += 1;
            if zeros > 63 {
                return Err(CompressError::Truncated);
            }
        }
        Ok((1 << zeros) | self.uint(zeros)?)
    }
}

fn check_window(cfg: &CompressorConfig) -> Result<(), CompressError> {
    if (1..=20).contains(&cfg.window_bits) {
        Ok(())
    } else {
        Err(CompressError::Window(cfg.window_bits))
    }
}

fn flush_literals(out: &mut BitString, x: &[bool], start: usize, end: usize) {
    if end > start {
        out.push(false);
        push_gamma(out, (end - start) as u64);
        for &b in &x[start..end] {
            out.push(b);
        }
    }
}

pub fn compress(x: &BitString, cfg: &CompressorConfig) -> Result<BitString, CompressError> {
    check_window(cfg)?;
    let x = x.as_slice();
    let n = x.len();
    let window = 1usize << cfg.window_bits;
    let min_match = cfg.min_match.max(1);
    let mut out = BitString::new();
    push_gamma(&mut out, n as u64 + 1);
    let (mut i, mut lit_start) = (0, 0);
    while i < n {
        let mut best = (0, 0);
        for d in 1..=i.min(window) {
            let len = (i..n).take_while(|&j| x[j] == x[j - d]).count();
            if len > best.1 {
                best = (d, len);
            }
        }
        if best.1 >= min_match {
            flush_literals(&mut out, x, lit_start, i);
            out.push(true);
            push_uint(&mut out, best.0 as u64 - 1, cfg.window_bits as usize);
            push_gamma(&mut out, (best.1 - min_match + 1) as u64);
            i += best.1;
            lit_start = i;
        } else {
            i += 1;
        }
    }
    flush_literals(&mut out, x, lit_start, n);
    Ok(out)
}

pub fn decompress(stream: &BitString, cfg: &CompressorConfig) -> Result<BitString, CompressError> {
    check_window(cfg)?;
    let mut r = Reader {
        bits: stream,
        at: 0,
    };
    let n = r.gamma()? as usize - 1;
    let mut out: Vec<bool> = Vec::with_capacity(n);
    while out.len() < n {
        let (len, offset) = if r.bit()? {
            let offset = r.uint(cfg.window_bits as usize)? as usize + 1;
            let len = r.gamma()? as usize + cfg.min_match.max(1) - 1;
            (len, Some(offset))
        } else {
            (r.gamma()? as usize, None)
        };
        if out.len() + len > n {
            return Err(CompressError::Overrun {
                extra: out.len() + len - n,
            });
        }
        match offset {
            Some(d) if d > out.len() => {
                return Err(CompressError::BadOffset {
                    offset: d,
                    available: out.len(),
                })
            }
            Some(d) => {
                for _ in 0..len {
                    out.push(out[out.len() - d]);
                }
            }
            None => {
                for _ in 0..len {
                    out.push(r.bit()?);
                }
            }
        }
    }
    if r.at != stream.len() {
        return Err(CompressError::Trailing(stream.len() - r.at));
    }
    Ok(BitString::from_bits(out))
}

/// Compressed length in bits.
pub fn compressor_cd_proxy(x: &BitString, cfg: &CompressorConfig) -> Result<usize, CompressError> {
    compress(x, cfg).map(|c| c.len())
}
