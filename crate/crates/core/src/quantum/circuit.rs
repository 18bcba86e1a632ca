//! Gate circuits over `{H, T, X, CNOT}`, with a bit-exact codec and a
//! one-gate-per-line text format.
//!
//! Codec (all fields MSB first, no padding):
//!
//! ```text
//! header    1^(q-1) 0          qubit count q in unary, 1 <= q <= 12
//! measured  0                  every qubit, in index order
//!         | 1 b_0 .. b_{q-1}   mask; measured qubits in index order
//! gates     repeated until the bits run out:
//!           0   t              X
//!           10  c t            CNOT (c != t)
//!           110 t              H
//!           111 t              T
//! ```
//!
//! Qubit indices take `w = ceil(log2 q)` bits (none when `q = 1`). An index
//! `>= q`, a CNOT on a single qubit or a gate cut short makes the string
//! undecodable. Every valid circuit has exactly one encoding.
//!
//! Text format: `qubits q`, `measure all` or `measure i j ...`, then one gate
//! per line (`x 0`, `h 1`, `t 2`, `cnot 0 1`). `#` starts a comment.

use std::fmt;

use thiserror::Error;

use crate::bits::BitString;

pub const MAX_QUBITS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Gate {
    H(usize),
    T(usize),
    X(usize),
    /// `Cnot(control, target)`.
    Cnot(usize, usize),
}

impl Gate {
    fn qubits(&self) -> (usize, Option<usize>) {
        match *self {
            Gate::H(q) | Gate::T(q) | Gate::X(q) => (q, None),
            Gate::Cnot(c, t) => (c, Some(t)),
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gate::H(q) => write!(f, "h {q}"),
            Gate::T(q) => write!(f, "t {q}"),
            Gate::X(q) => write!(f, "x {q}"),
            Gate::Cnot(c, t) => write!(f, "cnot {c} {t}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CircuitError {
    #[error("qubit count {0} outside 1..={MAX_QUBITS}")]
    QubitCount(usize),
    #[error("qubit index {index} out of range for {qubits} qubits")]
    IndexOutOfRange { index: usize, qubits: usize },
    #[error("CNOT control and target are both qubit {0}")]
    CnotSameQubit(usize),
    #[error("measured qubits must be strictly increasing")]
    MeasuredOrder,
    #[error("encoding truncated at bit {0}")]
    Truncated(usize),
    #[error("line {line}: {msg}")]
    Text { line: usize, msg: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GateCircuit {
    qubit_count: usize,
    gates: Vec<Gate>,
    measured: Vec<usize>,
}

fn index_width(q: usize) -> usize {
    (usize::BITS - (q - 1).leading_zeros()) as usize
}

impl GateCircuit {
    pub fn new(
        qubit_count: usize,
        gates: Vec<Gate>,
        measured: Vec<usize>,
    ) -> Result<Self, CircuitError> {
        if !(1..=MAX_QUBITS).contains(&qubit_count) {
            return Err(CircuitError::QubitCount(qubit_count));
        }
        let check = |index: usize| {
            if index < qubit_count {
                Ok(())
            } else {
                Err(CircuitError::IndexOutOfRange {
                    index,
                    qubits: qubit_count,
                })
            }
        };
        for g in &gates {
            let (a, b) = g.qubits();
            check(a)?;
            if let Some(b) = b {
                check(b)?;
                if a == b {
                    return Err(CircuitError::CnotSameQubit(a));
                }
            }
        }
        for &m in &measured {
            check(m)?;
        }
        if measured.windows(2).any(|w| w[0] >= w[1]) {
            return Err(CircuitError::MeasuredOrder);
        }
        Ok(Self {
            qubit_count,
            gates,
            measured,
        })
    }

    /// Circuit measuring every qubit.
    pub fn measure_all(qubit_count: usize, gates: Vec<Gate>) -> Result<Self, CircuitError> {
        Self::new(qubit_count, gates, (0..qubit_count).collect())
    }

    pub fn qubit_count(&self) -> usize {
        self.qubit_count
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn measured(&self) -> &[usize] {
        &self.measured
    }

    pub fn encode(&self) -> BitString {
        let q = self.qubit_count;
        let w = index_width(q);
        let mut out = BitString::new();
        for _ in 1..q {
            out.push(true);
        }
        out.push(false);
        if self.measured.len() == q {
            out.push(false);
        } else {
            out.push(true);
            for i in 0..q {
                out.push(self.measured.contains(&i));
            }
        }
        let idx = |out: &mut BitString, i: usize| {
            out.extend_from(&BitString::from_uint(i as u64, w));
        };
        for g in &self.gates {
            match *g {
                Gate::X(t) => {
                    out.push(false);
                    idx(&mut out, t);
                }
                Gate::Cnot(c, t) => {
                    out.extend_from(&BitString::from_uint(0b10, 2));
                    idx(&mut out, c);
                    idx(&mut out, t);
                }
                Gate::H(t) => {
                    out.extend_from(&BitString::from_uint(0b110, 3));
                    idx(&mut out, t);
                }
                Gate::T(t) => {
                    out.extend_from(&BitString::from_uint(0b111, 3));
                    idx(&mut out, t);
                }
            }
        }
        out
    }

    pub fn decode(bits: &BitString) -> Result<Self, CircuitError> {
        let b = bits.as_slice();
        let mut pos = 0;
        let mut q = 1;
        loop {
            match b.get(pos) {
                None => return Err(CircuitError::Truncated(pos)),
                Some(true) => {
                    q += 1;
                    if q > MAX_QUBITS {
                        return Err(CircuitError::QubitCount(q));
                    }
                }
                Some(false) => break,
            }
            pos += 1;
        }
        pos += 1;
        let w = index_width(q);
        let measured = match b.get(pos) {
            None => return Err(CircuitError::Truncated(pos)),
            Some(false) => {
                pos += 1;
                (0..q).collect()
            }
            Some(true) => {
                pos += 1;
                let mask = b.get(pos..pos + q).ok_or(CircuitError::Truncated(pos))?;
                pos += q;
                (0..q).filter(|&i| mask[i]).collect()
            }
        };
        let mut gates = Vec::new();
        while pos < b.len() {
            let start = pos;
            let mut read = |n: usize| -> Result<usize, CircuitError> {
                let s = b.get(pos..pos + n).ok_or(CircuitError::Truncated(start))?;
                pos += n;
                Ok(s.iter().fold(0, |acc, &bit| (acc << 1) | bit as usize))
            };
            let gate = if read(1)? == 0 {
                Gate::X(read(w)?)
            } else if read(1)? == 0 {
                let c = read(w)?;
                Gate::Cnot(c, read(w)?)
            } else if read(1)? == 0 {
                Gate::H(read(w)?)
            } else {
                Gate::T(read(w)?)
            };
            gates.push(gate);
        }
        Self::new(q, gates, measured)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("qubits {}\n", self.qubit_count);
        if self.measured.len() == self.qubit_count {
            s.push_str("measure all\n");
        } else {
            s.push_str("measure");
            for m in &self.measured {
                s.push_str(&format!(" {m}"));
            }
            s.push('\n');
        }
        for g in &self.gates {
            s.push_str(&format!("{g}\n"));
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self, CircuitError> {
        let mut qubits = None;
        let mut measured = None;
        let mut gates = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let err = |msg: &str| CircuitError::Text {
                line,
                msg: msg.to_string(),
            };
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let mut parts = body.split_whitespace();
            let head = parts.next().expect("non-empty").to_ascii_lowercase();
            let rest: Vec<&str> = parts.collect();
            let nums = || -> Result<Vec<usize>, CircuitError> {
                rest.iter()
                    .map(|t| {
                        t.parse::<usize>()
                            .map_err(|_| err(&format!("bad number {t:?}")))
                    })
                    .collect()
            };
            match head.as_str() {
                "qubits" => {
                    let n = nums()?;
                    if n.len() != 1 {
                        return Err(err("expected one qubit count"));
                    }
                    qubits = Some(n[0]);
                }
                "measure" if rest.len() == 1 && rest[0].eq_ignore_ascii_case("all") => {
                    measured = Some(None);
                }
                "measure" => measured = Some(Some(nums()?)),
                "x" | "h" | "t" => {
                    let n = nums()?;
                    if n.len() != 1 {
                        return Err(err("expected one qubit"));
                    }
                    gates.push(match head.as_str() {
                        "x" => Gate::X(n[0]),
                        "h" => Gate::H(n[0]),
                        _ => Gate::T(n[0]),
                    });
                }
                "cnot" => {
                    let n = nums()?;
                    if n.len() != 2 {
                        return Err(err("expected control and target"));
                    }
                    gates.push(Gate::Cnot(n[0], n[1]));
                }
                other => return Err(err(&format!("unknown directive {other:?}"))),
            }
        }
        let q = qubits.ok_or(CircuitError::Text {
            line: 0,
            msg: "missing qubits line".into(),
        })?;
        match measured.flatten() {
            Some(m) => Self::new(q, gates, m),
            None => Self::measure_all(q, gates),
        }
    }
}

impl fmt::Display for GateCircuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bits;

    #[test]
    fn index_widths() {
        assert_eq!(
            [1, 2, 3, 4, 5, 8, 9, 12].map(index_width),
            [0, 1, 2, 2, 3, 3, 4, 4]
        );
    }

    #[test]
    fn small_encodings() {
        let empty = GateCircuit::measure_all(1, vec![]).unwrap();
        assert_eq!(empty.encode(), bits("00"));
        let x = GateCircuit::measure_all(1, vec![Gate::X(0)]).unwrap();
        assert_eq!(x.encode(), bits("000"));
        let bell = GateCircuit::measure_all(2, vec![Gate::H(0), Gate::Cnot(0, 1)]).unwrap();
        assert_eq!(
            bell.encode(),
            bits("10 0 1100 1001".replace(' ', "").as_str())
        );
        let masked = GateCircuit::new(3, vec![Gate::T(2)], vec![1]).unwrap();
        assert_eq!(
            masked.encode(),
            bits("110 1010 11110".replace(' ', "").as_str())
        );
        for c in [empty, x, bell, masked] {
            assert_eq!(GateCircuit::decode(&c.encode()).unwrap(), c);
            assert_eq!(GateCircuit::from_text(&c.to_text()).unwrap(), c);
        }
    }

    #[test]
    fn rejects_bad_encodings() {
        assert!(GateCircuit::decode(&bits("")).is_err());
        assert!(GateCircuit::decode(&bits("1")).is_err());
        // q = 3, index 3 out of range
        assert!(matches!(
            GateCircuit::decode(&bits("110 0 011".replace(' ', "").as_str())),
            Err(CircuitError::IndexOutOfRange {
                index: 3,
                qubits: 3
            })
        ));
        // CNOT 0 0 on two qubits
        assert!(matches!(
            GateCircuit::decode(&bits("10 0 1000".replace(' ', "").as_str())),
            Err(CircuitError::CnotSameQubit(0))
        ));
        assert!(matches!(
            GateCircuit::decode(&bits("10 0 11".replace(' ', "").as_str())),
            Err(CircuitError::Truncated(_))
        ));
        assert!(GateCircuit::decode(&BitString::from_bits(vec![true; 13])).is_err());
    }

    #[test]
    fn text_errors_carry_lines() {
        let e = GateCircuit::from_text("qubits 2\nfoo 1\n").unwrap_err();
        assert!(matches!(e, CircuitError::Text { line: 2, .. }));
    }
}
