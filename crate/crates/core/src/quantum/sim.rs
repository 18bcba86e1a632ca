//! Exact statevector simulation.
//!
//! Qubit `i` is bit `i` of the basis-state index (qubit 0 least significant).
//! Outcome strings list measured qubits left to right in the circuit's
//! measured order.

use std::collections::BTreeMap;

use num_complex::Complex;
use thiserror::Error;

use super::circuit::{Gate, GateCircuit, MAX_QUBITS};
use crate::bits::BitString;
use crate::scalar::{Real, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("{requested} qubits exceed the simulator limit of {MAX_QUBITS}")]
pub struct ResourceError {
    pub requested: usize,
}

#[derive(Debug, Clone)]
pub struct StateVector<T: Real> {
    qubits: usize,
    amps: Vec<Complex<T>>,
}

impl<T: Real> StateVector<T> {
    /// Computational basis state with the given index.
    pub fn basis(qubits: usize, index: usize) -> Result<Self, ResourceError> {
        if qubits > MAX_QUBITS {
            return Err(ResourceError { requested: qubits });
        }
        let mut amps = vec![Complex::new(T::zero(), T::zero()); 1 << qubits];
        amps[index] = Complex::new(T::one(), T::zero());
        Ok(Self { qubits, amps })
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amps
    }

    pub fn apply(&mut self, gate: Gate) {
        match gate {
            Gate::X(q) => {
                let m = 1 << q;
                for i in 0..self.amps.len() {
                    if i & m == 0 {
                        self.amps.swap(i, i | m);
                    }
                }
            }
            Gate::Cnot(c, t) => {
                let (cm, tm) = (1 << c, 1 << t);
                for i in 0..self.amps.len() {
                    if i & cm != 0 && i & tm == 0 {
                        self.amps.swap(i, i | tm);
                    }
                }
            }
            Gate::H(q) => {
                let m = 1 << q;
                let s = T::one() / (T::one() + T::one()).sqrt();
                for i in 0..self.amps.len() {
                    if i & m == 0 {
                        let (a, b) = (self.amps[i], self.amps[i | m]);
                        self.amps[i] = (a + b) * s;
                        self.amps[i | m] = (a - b) * s;
                    }
                }
            }
            Gate::T(q) => {
                let m = 1 << q;
                let quarter_pi = T::from_f64_lossy(std::f64::consts::FRAC_PI_4);
                let phase = Complex::from_polar(T::one(), quarter_pi);
                for (i, a) in self.amps.iter_mut().enumerate() {
                    if i & m != 0 {
                        *a = *a * phase;
                    }
                }
            }
        }
    }

    pub fn run(&mut self, circuit: &GateCircuit) {
        for &g in circuit.gates() {
            self.apply(g);
        }
    }

    pub fn probabilities(&self) -> Vec<T> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Probability that every listed qubit reads 1.
    pub fn prob_all_ones(&self, qubits: &[usize]) -> T {
        let mask = qubits.iter().fold(0usize, |m, &q| m | (1 << q));
        self.amps
            .iter()
            .enumerate()
            .filter(|(i, _)| i & mask == mask)
            .fold(T::zero(), |acc, (_, a)| acc + a.norm_sqr())
    }

    /// Probability that qubit `q` reads `value`.
    pub fn prob_qubit(&self, q: usize, value: bool) -> T {
        let m = 1 << q;
        self.amps
            .iter()
            .enumerate()
            .filter(|(i, _)| (i & m != 0) == value)
            .fold(T::zero(), |acc, (_, a)| acc + a.norm_sqr())
    }
}

/// Outcome probabilities keyed by measured bitstring. Zero-probability
/// outcomes are omitted.
#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeDistribution<T: Scalar> {
    probs: BTreeMap<BitString, T>,
}

impl<T: Scalar> OutcomeDistribution<T> {
    pub fn from_map(probs: BTreeMap<BitString, T>) -> Self {
        Self { probs }
    }

    pub fn prob(&self, x: &BitString) -> T {
        self.probs.get(x).cloned().unwrap_or_else(T::zero)
    }

    pub fn total(&self) -> T {
        self.probs.values().cloned().fold(T::zero(), |a, b| a + b)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&BitString, &T)> {
        self.probs.iter()
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    /// Outcomes by decreasing probability, ties in lexicographic order.
    pub fn ranked(&self) -> Vec<(BitString, T)> {
        let mut v: Vec<_> = self
            .probs
            .iter()
            .map(|(k, p)| (k.clone(), p.clone()))
            .collect();
        v.sort_by(|a, b| {
            b.1.partial_cmp(&a.1)
                .unwrap_or(std::cmp::Ordering::Equal)
                .then_with(|| a.0.cmp(&b.0))
        });
        v
    }
}

/// Full distribution over the measured qubits, starting from `|0…0⟩`.
pub fn simulate<T: Real>(circuit: &GateCircuit) -> Result<OutcomeDistribution<T>, ResourceError> {
    let mut sv = StateVector::<T>::basis(circuit.qubit_count(), 0)?;
    sv.run(circuit);
    let mut probs = BTreeMap::new();
    let cutoff = T::from_f64_lossy(1e-15);
    for (i, p) in sv.probabilities().into_iter().enumerate() {
        if p <= cutoff {
            continue;
        }
        let key: BitString = circuit
            .measured()
            .iter()
            .map(|&q| (i >> q) & 1 == 1)
            .collect();
        let slot = probs.entry(key).or_insert_with(T::zero);
        *slot = *slot + p;
    }
    Ok(OutcomeDistribution { probs })
}

/// Runs the circuit with `y` loaded as a basis state: bit `k` of `y` sets
/// qubit `k`. The register grows to hold the circuit, the input and
/// `min_qubits`.
pub fn run_on_input<T: Real>(
    circuit: &GateCircuit,
    y: &BitString,
    min_qubits: usize,
) -> Result<StateVector<T>, ResourceError> {
    let qubits = circuit.qubit_count().max(y.len()).max(min_qubits);
    let index = y
        .iter()
        .enumerate()
        .filter(|(_, b)| *b)
        .fold(0usize, |acc, (k, _)| acc | (1 << k));
    let mut sv = StateVector::basis(qubits, index)?;
    sv.run(circuit);
    Ok(sv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bits;

    fn dist(c: &GateCircuit) -> OutcomeDistribution<f64> {
        simulate(c).unwrap()
    }

    #[test]
    fn trivial_circuits() {
        let none = GateCircuit::measure_all(1, vec![]).unwrap();
        assert_eq!(dist(&none).prob(&bits("0")), 1.0);
        let h = GateCircuit::measure_all(1, vec![Gate::H(0)]).unwrap();
        let d = dist(&h);
        assert!((d.prob(&bits("0")) - 0.5).abs() < 1e-12);
        assert!((d.prob(&bits("1")) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn bell_state() {
        let c = GateCircuit::measure_all(2, vec![Gate::H(0), Gate::Cnot(0, 1)]).unwrap();
        let d = dist(&c);
        assert_eq!(d.len(), 2);
        assert!((d.prob(&bits("00")) - 0.5).abs() < 1e-12);
        assert!((d.prob(&bits("11")) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn t_gates_interfere() {
        // H T T T T H = H Z H = X
        let mut g = vec![Gate::H(0)];
        g.extend([Gate::T(0); 4]);
        g.push(Gate::H(0));
        let d = dist(&GateCircuit::measure_all(1, g).unwrap());
        assert!((d.prob(&bits("1")) - 1.0).abs() < 1e-12);
        let f32d: OutcomeDistribution<f32> = simulate(
            &GateCircuit::measure_all(1, vec![Gate::H(0), Gate::T(0), Gate::H(0)]).unwrap(),
        )
        .unwrap();
        assert!((f32d.total() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn measured_order_is_output_order() {
        let c = GateCircuit::new(3, vec![Gate::X(2)], vec![0, 2]).unwrap();
        assert_eq!(dist(&c).prob(&bits("01")), 1.0);
    }

    #[test]
    fn input_loading_extends_register() {
        let c = GateCircuit::measure_all(1, vec![]).unwrap();
        let sv = run_on_input::<f64>(&c, &bits("101"), 0).unwrap();
        assert_eq!(sv.qubits(), 3);
        assert_eq!(sv.prob_all_ones(&[0, 2]), 1.0);
        assert_eq!(sv.prob_qubit(1, false), 1.0);
        assert_eq!(run_on_input::<f64>(&c, &bits("1"), 2).unwrap().qubits(), 2);
        assert!(run_on_input::<f64>(&c, &BitString::zeros(13), 0).is_err());
    }
}
