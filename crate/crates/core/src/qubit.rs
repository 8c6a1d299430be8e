//! Single-qubit pure states and the bitstring/index convention.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Tolerance under which an already normalized pair is returned untouched.
const IDEMPOTENCE_TOL: f64 = 1e-15;

/// A pure qubit `alpha|0⟩ + beta|1⟩` with `|alpha|² + |beta|² = 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Qubit {
    alpha: C64,
    beta: C64,
}

impl Qubit {
    /// Normalizes `(alpha, beta)` into a qubit. Fails only if both amplitudes
    /// vanish or are not finite.
    pub fn new(alpha: C64, beta: C64) -> Result<Self> {
        let norm_sqr = alpha.norm_sqr() + beta.norm_sqr();
        if !norm_sqr.is_finite() {
            return Err(Error::InvalidState(format!("non-finite amplitudes ({alpha}, {beta})")));
        }
        if norm_sqr == 0.0 {
            return Err(Error::InvalidState("both amplitudes are zero".into()));
        }
        if (norm_sqr - 1.0).abs() <= IDEMPOTENCE_TOL {
            return Ok(Self { alpha, beta });
        }
        let norm = norm_sqr.sqrt();
        Ok(Self {
            alpha: alpha / norm,
            beta: beta / norm,
        })
    }

    /// `|0⟩` for `false`, `|1⟩` for `true`.
    pub fn basis(bit: bool) -> Self {
        if bit {
            Self {
                alpha: C64::new(0.0, 0.0),
                beta: C64::new(1.0, 0.0),
            }
        } else {
            Self {
                alpha: C64::new(1.0, 0.0),
                beta: C64::new(0.0, 0.0),
            }
        }
    }

    /// Bloch-sphere state `cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩`.
    pub fn bloch(theta: f64, phi: f64) -> Self {
        let (s, c) = (theta / 2.0).sin_cos();
        Self {
            alpha: C64::new(c, 0.0),
            beta: C64::from_polar(s, phi),
        }
    }

    /// Equatorial state `(|0⟩ + e^{iφ}|1⟩)/√2`.
    pub fn equatorial(phi: f64) -> Self {
        Self::bloch(std::f64::consts::FRAC_PI_2, phi)
    }

    pub fn alpha(&self) -> C64 {
        self.alpha
    }

    pub fn beta(&self) -> C64 {
        self.beta
    }

    /// Amplitude of the basis state `|bit⟩`.
    pub fn amplitude(&self, bit: bool) -> C64 {
        if bit {
            self.beta
        } else {
            self.alpha
        }
    }

    /// Orthogonal complement `β*|0⟩ − α*|1⟩`.
    pub fn perp(&self) -> Self {
        Self {
            alpha: self.beta.conj(),
            beta: -self.alpha.conj(),
        }
    }

    /// Anticlone `β*|0⟩ + α|1⟩`.
    pub fn anticlone(&self) -> Self {
        Self {
            alpha: self.beta.conj(),
            beta: self.alpha,
        }
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Qubit) -> C64 {
        self.alpha.conj() * other.alpha + self.beta.conj() * other.beta
    }

    pub fn norm(&self) -> f64 {
        (self.alpha.norm_sqr() + self.beta.norm_sqr()).sqrt()
    }
}

/// Free-function form of [`Qubit::new`].
pub fn make_qubit(alpha: C64, beta: C64) -> Result<Qubit> {
    Qubit::new(alpha, beta)
}

/// Maximum register width a [`BitString`] can hold.
pub const MAX_BITS: usize = 63;

/// A computational-basis label `|i_1 i_2 … i_n⟩`.
///
/// Bit 1 is the leftmost character and the most significant bit of
/// [`BitString::index`]. For equal lengths the derived ordering coincides
/// with lexicographic order of the printed strings.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitString {
    len: u8,
    index: u64,
}

impl BitString {
    pub fn from_index(len: usize, index: u64) -> Result<Self> {
        if len == 0 || len > MAX_BITS {
            return Err(Error::Domain(format!("bitstring length {len} outside 1..={MAX_BITS}")));
        }
        if index >> len != 0 {
            return Err(Error::Domain(format!("index {index} does not fit in {len} bits")));
        }
        Ok(Self { len: len as u8, index })
    }

    pub fn from_bits(bits: &[bool]) -> Result<Self> {
        let index = bits.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64);
        Self::from_index(bits.len(), index)
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Big-endian integer value `Σ_k bits[k]·2^{n−k}`.
    pub fn index(&self) -> u64 {
        self.index
    }

    /// Bit at 1-indexed position `k` (1 = leftmost).
    pub fn bit(&self, k: usize) -> bool {
        assert!(k >= 1 && k <= self.len(), "bit position {k} out of range");
        (self.index >> (self.len() - k)) & 1 == 1
    }

    pub fn bits(&self) -> Vec<bool> {
        (1..=self.len()).map(|k| self.bit(k)).collect()
    }

    pub fn popcount(&self) -> u32 {
        self.index.count_ones()
    }

    /// Splits into the leading `left` bits and the remainder.
    pub fn split(&self, left: usize) -> (u64, u64) {
        let right = self.len() - left;
        (self.index >> right, self.index & ((1u64 << right) - 1))
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for k in 1..=self.len() {
            f.write_str(if self.bit(k) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Domain(format!("invalid bit character {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_bits(&bits)
    }
}

pub fn bit_index(bits: &BitString) -> u64 {
    bits.index()
}

pub fn index_bits(n: usize, idx: u64) -> Result<BitString> {
    BitString::from_index(n, idx)
}
