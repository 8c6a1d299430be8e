//! Symmetric multiqubit kets and the Gisin-Massar cloner output.
//!
//! For an input `ψ` and `M` clones the output on `2M−1` qubits is
//!
//! ```text
//! |GM_M(ψ)⟩ = Σ_{j=0}^{M−1} γ_j |(M−j)ψ, jψ⊥⟩_S ⊗ |(M−j−1)ψᵃ, jψᵃ⊥⟩_S
//! γ_j      = √(2(M−j) / (M(M+1)))
//! ```
//!
//! with `ψ⊥` from [`Qubit::perp`] and `ψᵃ` from [`Qubit::anticlone`].

use num_complex::Complex64 as C64;

use crate::binomial;
use crate::error::{Error, Result};
use crate::qubit::Qubit;
use crate::state::StateVector;

/// Registers up to this size are symmetrized by explicit permutation
/// averaging; larger ones by weight-class averaging.
pub const PERMUTATION_LIMIT: usize = 8;

/// Norm below which a symmetric projection counts as zero.
const ZERO_PROJECTION: f64 = 1e-13;

/// Cloner amplitude `γ_j` for `M` clones.
pub fn gamma(clones: usize, j: usize) -> Result<f64> {
    if clones == 0 {
        return Err(Error::Domain("number of clones must be at least 1".into()));
    }
    if j >= clones {
        return Err(Error::Domain(format!("gamma index {j} outside 0..{clones}")));
    }
    let m = clones as f64;
    Ok((2.0 * (m - j as f64) / (m * (m + 1.0))).sqrt())
}

/// Normalized projection onto the permutation-symmetric subspace.
pub fn symmetrize(state: &StateVector) -> Result<StateVector> {
    if state.num_qubits() <= PERMUTATION_LIMIT {
        symmetrize_by_permutations(state)
    } else {
        symmetrize_by_weight(state)
    }
}

/// Averages the state over all `n!` qubit permutations, then normalizes.
///
/// Every permutation of positions `1..=m` is uniquely a transposition
/// `(k m)` after one fixing `m`, so the mean over `S_m` is the mean over `k`
/// of `(k m)` applied to the mean over `S_{m−1}`. Growing `m` from 2 to `n`
/// visits every permutation once at `O(n² 2ⁿ)` cost.
pub fn symmetrize_by_permutations(state: &StateVector) -> Result<StateVector> {
    let n = state.num_qubits();
    let mut cur = state.amplitudes().to_vec();
    let mut next = vec![C64::new(0.0, 0.0); cur.len()];
    for m in 2..=n {
        next.copy_from_slice(&cur);
        let bm = n - m;
        for k in 1..m {
            let bk = n - k;
            for (x, a) in cur.iter().enumerate() {
                let y = if ((x >> bk) ^ (x >> bm)) & 1 == 1 {
                    x ^ (1 << bk) ^ (1 << bm)
                } else {
                    x
                };
                next[y] += a;
            }
        }
        let inv = 1.0 / m as f64;
        for (c, v) in cur.iter_mut().zip(&next) {
            *c = v * inv;
        }
    }
    normalize_projection(StateVector::new(n, cur)?)
}

/// Projects by replacing every amplitude with the mean over its Hamming
/// weight class. The symmetric subspace of `n` qubits is spanned by the
/// weight-class (Dicke) states, so this is the same projector as
/// [`symmetrize_by_permutations`] without the `n!` cost.
pub fn symmetrize_by_weight(state: &StateVector) -> Result<StateVector> {
    let n = state.num_qubits();
    let mut sums = vec![C64::new(0.0, 0.0); n + 1];
    for (x, a) in state.amplitudes().iter().enumerate() {
        sums[x.count_ones() as usize] += a;
    }
    let means: Vec<C64> = sums.iter().enumerate().map(|(w, s)| s / binomial(n, w)).collect();
    let mut out = StateVector::zeros(n)?;
    for (x, a) in out.amplitudes_mut().iter_mut().enumerate() {
        *a = means[x.count_ones() as usize];
    }
    normalize_projection(out)
}

fn normalize_projection(state: StateVector) -> Result<StateVector> {
    let norm = state.norm();
    if norm < ZERO_PROJECTION {
        return Err(Error::ZeroProjection(norm));
    }
    state.normalized()
}

/// `|(n−j)φ, jφ⊥⟩_S`: `n−j` copies of `phi` and `j` copies of its
/// orthogonal complement, symmetrized and normalized. `n = 0` yields the
/// scalar state.
pub fn symmetric_ket(n: usize, j: usize, phi: &Qubit) -> Result<StateVector> {
    if j > n {
        return Err(Error::Domain(format!("{j} orthogonal factors in a {n}-qubit ket")));
    }
    if n == 0 {
        return Ok(StateVector::scalar());
    }
    let perp = phi.perp();
    let factors: Vec<Qubit> = std::iter::repeat_n(*phi, n - j)
        .chain(std::iter::repeat_n(perp, j))
        .collect();
    symmetrize(&StateVector::product(&factors)?)
}

/// Cloner configuration: `clones` copies of `input`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GmParameters {
    pub clones: usize,
    pub input: Qubit,
}

impl GmParameters {
    pub fn new(clones: usize, input: Qubit) -> Result<Self> {
        if clones == 0 {
            return Err(Error::Domain("number of clones must be at least 1".into()));
        }
        Ok(Self { clones, input })
    }

    /// `2M − 1`.
    pub fn num_qubits(&self) -> usize {
        2 * self.clones - 1
    }
}

/// Dense cloner output on `2M−1` qubits, clones first.
pub fn build_gm(params: &GmParameters) -> Result<StateVector> {
    let m = params.clones;
    if m == 0 {
        return Err(Error::Domain("number of clones must be at least 1".into()));
    }
    let psi = params.input;
    let anti = psi.anticlone();
    let mut out = StateVector::zeros(params.num_qubits())?;
    for j in 0..m {
        let clone_part = symmetric_ket(m, j, &psi)?;
        let anti_part = symmetric_ket(m - 1, j, &anti)?;
        out.add_scaled(C64::new(gamma(m, j)?, 0.0), &clone_part.kron(&anti_part)?);
    }
    Ok(out)
}

/// Cloner output for a computational basis input `|bit⟩`.
pub fn build_gm_basis(clones: usize, bit: bool) -> Result<StateVector> {
    build_gm(&GmParameters::new(clones, Qubit::basis(bit))?)
}

/// Closed-form computational-basis expansion of the cloner output.
///
/// Each symmetric factor is expanded into weight classes: the overlap of
/// `φ^{⊗(n−j)} ⊗ φ⊥^{⊗j}` with the weight-`k` class is the `x^k`
/// coefficient of `(a + b x)^{n−j} (b* − a* x)^j` for `φ = a|0⟩ + b|1⟩`.
/// The output is then written as a table of clone-weight × anticlone-weight
/// sector amplitudes, spread uniformly over the strings of each sector. No
/// permutation or projection is performed, so this is independent of
/// [`build_gm`].
pub fn expand_gm_decomposed(clones: usize, input: &Qubit) -> Result<StateVector> {
    if clones == 0 {
        return Err(Error::Domain("number of clones must be at least 1".into()));
    }
    let m = clones;
    let anti = input.anticlone();
    // sector[k][l]: amplitude of a single string with clone weight k and
    // anticlone weight l.
    let mut sector = vec![vec![C64::new(0.0, 0.0); m]; m + 1];
    for j in 0..m {
        let g = gamma(m, j)?;
        let clone_w = weight_amplitudes(m, j, input);
        let anti_w = weight_amplitudes(m - 1, j, &anti);
        for (k, ck) in clone_w.iter().enumerate() {
            for (l, dl) in anti_w.iter().enumerate() {
                sector[k][l] += g * ck * dl;
            }
        }
    }
    let anti_bits = m - 1;
    let mut out = StateVector::zeros(2 * m - 1)?;
    for (x, a) in out.amplitudes_mut().iter_mut().enumerate() {
        let k = (x >> anti_bits).count_ones() as usize;
        let l = (x & ((1 << anti_bits) - 1)).count_ones() as usize;
        *a = sector[k][l];
    }
    Ok(out)
}

/// Per-string amplitude of each weight class in `|(n−j)φ, jφ⊥⟩_S`.
fn weight_amplitudes(n: usize, j: usize, phi: &Qubit) -> Vec<C64> {
    let perp = phi.perp();
    let mut poly = vec![C64::new(1.0, 0.0)];
    let factors = std::iter::repeat_n(phi, n - j).chain(std::iter::repeat_n(&perp, j));
    for q in factors {
        let mut next = vec![C64::new(0.0, 0.0); poly.len() + 1];
        for (k, p) in poly.iter().enumerate() {
            next[k] += p * q.alpha();
            next[k + 1] += p * q.beta();
        }
        poly = next;
    }
    // Overlap with the normalized weight-k Dicke state is poly[k]/√C(n,k);
    // each of its C(n,k) strings then carries that value /√C(n,k).
    let norm: f64 = poly
        .iter()
        .enumerate()
        .map(|(k, p)| p.norm_sqr() / binomial(n, k))
        .sum::<f64>()
        .sqrt();
    poly.iter()
        .enumerate()
        .map(|(k, p)| p / (binomial(n, k) * norm))
        .collect()
}
