//! Dense state vectors over qubit registers.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::qubit::Qubit;

/// Largest register a dense vector is allowed to hold.
pub const MAX_DENSE_QUBITS: usize = 26;

/// Dense amplitude array of length `2^num_qubits`, big-endian indexed.
///
/// A zero-qubit state is the scalar `[1]` and acts as the identity of
/// [`StateVector::kron`].
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amps: Vec<C64>,
}

impl StateVector {
    pub fn new(num_qubits: usize, amps: Vec<C64>) -> Result<Self> {
        if num_qubits > MAX_DENSE_QUBITS {
            return Err(Error::ResourceLimit(format!(
                "{num_qubits} qubits exceeds the dense limit of {MAX_DENSE_QUBITS}"
            )));
        }
        if amps.len() != 1usize << num_qubits {
            return Err(Error::Domain(format!(
                "{} amplitudes for {num_qubits} qubits",
                amps.len()
            )));
        }
        Ok(Self { num_qubits, amps })
    }

    pub fn zeros(num_qubits: usize) -> Result<Self> {
        if num_qubits > MAX_DENSE_QUBITS {
            return Err(Error::ResourceLimit(format!(
                "{num_qubits} qubits exceeds the dense limit of {MAX_DENSE_QUBITS}"
            )));
        }
        Self::new(num_qubits, vec![C64::new(0.0, 0.0); 1usize << num_qubits])
    }

    /// The scalar state on zero qubits.
    pub fn scalar() -> Self {
        Self {
            num_qubits: 0,
            amps: vec![C64::new(1.0, 0.0)],
        }
    }

    pub fn basis(num_qubits: usize, index: u64) -> Result<Self> {
        let mut s = Self::zeros(num_qubits)?;
        let slot = s
            .amps
            .get_mut(index as usize)
            .ok_or_else(|| Error::Domain(format!("basis index {index} out of range")))?;
        *slot = C64::new(1.0, 0.0);
        Ok(s)
    }

    pub fn from_qubit(q: &Qubit) -> Self {
        Self {
            num_qubits: 1,
            amps: vec![q.alpha(), q.beta()],
        }
    }

    /// Tensor product of single-qubit factors, first factor leftmost.
    pub fn product(factors: &[Qubit]) -> Result<Self> {
        factors
            .iter()
            .try_fold(Self::scalar(), |acc, q| acc.kron(&Self::from_qubit(q)))
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [C64] {
        &mut self.amps
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amps
    }

    pub fn amplitude(&self, index: u64) -> C64 {
        self.amps[index as usize]
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Returns the normalized state; fails for the zero vector.
    pub fn normalized(mut self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::DegenerateState(format!("cannot normalize vector of norm {n}")));
        }
        self.amps.iter_mut().for_each(|a| *a /= n);
        Ok(self)
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> C64 {
        assert_eq!(self.num_qubits, other.num_qubits, "register size mismatch");
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum()
    }

    /// `|⟨self|other⟩|`, the phase-insensitive comparison used throughout.
    pub fn overlap_modulus(&self, other: &StateVector) -> f64 {
        self.inner(other).norm()
    }

    /// Euclidean distance `‖self − other‖` without phase alignment.
    pub fn distance(&self, other: &StateVector) -> f64 {
        assert_eq!(self.num_qubits, other.num_qubits, "register size mismatch");
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// `min_θ ‖e^{iθ}·self − other‖`.
    pub fn phase_aligned_distance(&self, other: &StateVector) -> f64 {
        let ip = self.inner(other);
        let phase = if ip.norm() > 0.0 {
            ip / ip.norm()
        } else {
            C64::new(1.0, 0.0)
        };
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a * phase - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// `self ⊗ other`; `self` occupies the leading (most significant) qubits.
    pub fn kron(&self, other: &StateVector) -> Result<Self> {
        let n = self.num_qubits + other.num_qubits;
        if n > MAX_DENSE_QUBITS {
            return Err(Error::ResourceLimit(format!(
                "{n} qubits exceeds the dense limit of {MAX_DENSE_QUBITS}"
            )));
        }
        let mut amps = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amps {
            amps.extend(other.amps.iter().map(|b| a * b));
        }
        Ok(Self { num_qubits: n, amps })
    }

    pub fn scale(&mut self, factor: C64) {
        self.amps.iter_mut().for_each(|a| *a *= factor);
    }

    /// `self += factor · other`.
    pub fn add_scaled(&mut self, factor: C64, other: &StateVector) {
        assert_eq!(self.num_qubits, other.num_qubits, "register size mismatch");
        self.amps
            .iter_mut()
            .zip(&other.amps)
            .for_each(|(a, b)| *a += factor * b);
    }

    /// Relabels qubits: qubit at 1-indexed position `k` of `self` moves to
    /// position `perm[k−1]` of the result.
    pub fn permute_qubits(&self, perm: &[usize]) -> Self {
        let n = self.num_qubits;
        assert_eq!(perm.len(), n, "permutation length mismatch");
        let mut out = vec![C64::new(0.0, 0.0); self.dim()];
        for (x, a) in self.amps.iter().enumerate() {
            let mut y = 0usize;
            for (k, &target) in perm.iter().enumerate() {
                let bit = (x >> (n - 1 - k)) & 1;
                y |= bit << (n - target);
            }
            out[y] = *a;
        }
        Self {
            num_qubits: n,
            amps: out,
        }
    }

    /// Basis indices whose amplitude modulus exceeds `eps`.
    pub fn support(&self, eps: f64) -> Vec<u64> {
        self.amps
            .iter()
            .enumerate()
            .filter(|(_, a)| a.norm() > eps)
            .map(|(i, _)| i as u64)
            .collect()
    }
}
