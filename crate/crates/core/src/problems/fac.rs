//! Factor-prefix language: `<x, a>` is a member when the largest prime factor
//! of `x`, written in minimal binary, starts with `a`.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::bits::BitString;

/// Trial division stays sub-second up to here.
pub const FAC_MAX: u64 = 1 << 40;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FacError {
    #[error("x = {0} is outside 2..=2^40")]
    OutOfRange(u64),
    #[error("malformed pair encoding: {0}")]
    Encoding(&'static str),
    #[error("malformed instance text {0:?}; expected \"x:a\"")]
    Text(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FacInstance {
    pub x: u64,
    pub a: BitString,
}

impl FacInstance {
    pub fn new(x: u64, a: BitString) -> Result<Self, FacError> {
        if !(2..=FAC_MAX).contains(&x) {
            return Err(FacError::OutOfRange(x));
        }
        Ok(Self { x, a })
    }
}

impl fmt::Display for FacInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.x, self.a)
    }
}

impl FromStr for FacInstance {
    type Err = FacError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || FacError::Text(s.to_string());
        let (x, a) = s.split_once(':').ok_or_else(bad)?;
        let x = x.trim().parse::<u64>().map_err(|_| bad())?;
        let a = a.trim().parse::<BitString>().map_err(|_| bad())?;
        FacInstance::new(x, a)
    }
}

pub fn largest_prime_factor(mut x: u64) -> u64 {
    assert!(x >= 2, "largest prime factor of {x}");
    let mut largest = 1;
    let mut d = 2u64;
    while d * d <= x {
        while x % d == 0 {
            largest = d;
            x /= d;
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if x > 1 {
        largest = largest.max(x);
    }
    largest
}

pub fn fac_decide(z: &FacInstance) -> Result<bool, FacError> {
    if !(2..=FAC_MAX).contains(&z.x) {
        return Err(FacError::OutOfRange(z.x));
    }
    let p = BitString::minimal_binary(largest_prime_factor(z.x));
    Ok(p.starts_with(&z.a))
}

/// Self-delimiting pairing: `1^k 0`, then `|x|` in `k` bits, then `x` in
/// `|x|` bits, then the bits of `a`. All binary numbers are minimal, so the
/// encoding is canonical.
pub fn encode_pair(x: u64, a: &BitString) -> BitString {
    assert!(x >= 2, "pairing needs x >= 2");
    let xb = BitString::minimal_binary(x);
    let lb = BitString::minimal_binary(xb.len() as u64);
    let mut out = BitString::new();
    for _ in 0..lb.len() {
        out.push(true);
    }
    out.push(false);
    out.extend_from(&lb);
    out.extend_from(&xb);
    out.extend_from(a);
    out
}

/// Length of the self-delimiting `x` part at the front of `bits`, with its value.
pub fn decode_number_part(bits: &BitString) -> Result<(u64, usize), FacError> {
    let s = bits.as_slice();
    let k = s.iter().take_while(|&&b| b).count();
    if k == s.len() {
        return Err(FacError::Encoding("unterminated length header"));
    }
    if k == 0 || k > 6 {
        return Err(FacError::Encoding("length-of-length out of range"));
    }
    let mut pos = k + 1;
    let take = |pos: &mut usize, n: usize| -> Result<BitString, FacError> {
        if *pos + n > s.len() {
            return Err(FacError::Encoding("truncated"));
        }
        let out = bits.slice(*pos, *pos + n);
        *pos += n;
        Ok(out)
    };
    let lb = take(&mut pos, k)?;
    if !lb.get(0).unwrap_or(false) {
        return Err(FacError::Encoding("non-minimal length field"));
    }
    let len = lb.to_uint().expect("short field") as usize;
    if len > 41 {
        return Err(FacError::Encoding("x wider than 41 bits"));
    }
    let xb = take(&mut pos, len)?;
    if !xb.get(0).unwrap_or(false) {
        return Err(FacError::Encoding("non-minimal x"));
    }
    let x = xb.to_uint().expect("short field");
    if x < 2 {
        return Err(FacError::Encoding("x < 2"));
    }
    Ok((x, pos))
}

pub fn decode_pair(bits: &BitString) -> Result<(u64, BitString), FacError> {
    let (x, used) = decode_number_part(bits)?;
    Ok((x, bits.slice(used, bits.len())))
}
