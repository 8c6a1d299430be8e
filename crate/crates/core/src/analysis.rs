//! Reduced density matrices, clone fidelities, the nonlinearity of the
//! cloner output, and bond-dimension scaling.

use std::fmt::Write as _;

use faer::{Mat, Side};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::gm::{build_gm, build_gm_basis, GmParameters};
use crate::mps::mps_from_state;
use crate::qubit::Qubit;
use crate::state::StateVector;

/// Largest clone count accepted by [`scaling_sweep`] (15 qubits).
pub const MAX_SWEEP_CLONES: usize = 8;

/// Header of the scaling CSV.
pub const SCALING_CSV_HEADER: &str = "M,num_qubits,bond_dim,cut_ranks,tol";

#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    entries: Mat<C64>,
}

impl DensityMatrix {
    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &Mat<C64> {
        &self.entries
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim()).map(|i| self.entries[(i, i)]).sum()
    }

    /// `⟨ψ|ρ|ψ⟩` for a single-qubit `ρ`.
    pub fn expectation(&self, q: &Qubit) -> Result<f64> {
        if self.dim() != 2 {
            return Err(Error::Domain(format!(
                "{}-dimensional density matrix against a qubit",
                self.dim()
            )));
        }
        let v = [q.alpha(), q.beta()];
        let mut acc = C64::new(0.0, 0.0);
        for (i, vi) in v.iter().enumerate() {
            for (j, vj) in v.iter().enumerate() {
                acc += vi.conj() * self.entries[(i, j)] * vj;
            }
        }
        Ok(acc.re)
    }

    /// Largest deviation from Hermiticity.
    pub fn hermiticity_error(&self) -> f64 {
        let d = self.dim();
        (0..d)
            .flat_map(|i| (0..d).map(move |j| (i, j)))
            .map(|(i, j)| (self.entries[(i, j)] - self.entries[(j, i)].conj()).norm())
            .fold(0.0, f64::max)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.entries
            .self_adjoint_eigenvalues(Side::Lower)
            .map(|e| e.into_iter().fold(f64::INFINITY, f64::min))
            .unwrap_or(f64::NAN)
    }
}

/// Partial trace keeping the 1-indexed positions in `keep`. The kept qubits
/// index `ρ` in ascending position order.
pub fn reduced_density(state: &StateVector, keep: &[usize]) -> Result<DensityMatrix> {
    let n = state.num_qubits();
    if keep.is_empty() {
        return Err(Error::Domain("nothing to keep in partial trace".into()));
    }
    let mut keep = keep.to_vec();
    keep.sort_unstable();
    keep.dedup();
    if keep.iter().any(|&k| k == 0 || k > n) {
        return Err(Error::Domain(format!("keep set {keep:?} outside 1..={n}")));
    }
    let traced: Vec<usize> = (1..=n).filter(|k| !keep.contains(k)).collect();
    let gather = |x: usize, positions: &[usize]| {
        positions
            .iter()
            .fold(0usize, |acc, &p| (acc << 1) | ((x >> (n - p)) & 1))
    };
    // Ψ[kept, traced] so that ρ = Ψ Ψ†.
    let mut psi = Mat::<C64>::zeros(1 << keep.len(), 1 << traced.len());
    for (x, a) in state.amplitudes().iter().enumerate() {
        psi[(gather(x, &keep), gather(x, &traced))] = *a;
    }
    Ok(DensityMatrix {
        entries: &psi * psi.adjoint(),
    })
}

fn check_register(state: &StateVector, clones: usize) -> Result<()> {
    if clones == 0 || state.num_qubits() != 2 * clones - 1 {
        return Err(Error::Domain(format!(
            "{}-qubit state is not a cloner output for M = {clones}",
            state.num_qubits()
        )));
    }
    Ok(())
}

/// `⟨ψ_in|ρ_k|ψ_in⟩` for every clone position `k = 1..=M`.
pub fn clone_fidelity(state: &StateVector, clones: usize, input: &Qubit) -> Result<Vec<f64>> {
    check_register(state, clones)?;
    (1..=clones)
        .map(|k| reduced_density(state, &[k])?.expectation(input))
        .collect()
}

/// Overlap of each anticlone position with the anticlone of the input.
pub fn anticlone_fidelity(state: &StateVector, clones: usize, input: &Qubit) -> Result<Vec<f64>> {
    check_register(state, clones)?;
    let target = input.anticlone();
    (clones + 1..2 * clones)
        .map(|k| reduced_density(state, &[k])?.expectation(&target))
        .collect()
}

/// `min_θ ‖e^{iθ}|GM_M(α0+β1)⟩ − (α|GM_M(0)⟩ + β|GM_M(1)⟩)‖`.
///
/// `(alpha, beta)` is normalized first. For `M = 1` the cloner is the
/// identity and the gap is zero.
pub fn nonlinearity_gap(clones: usize, alpha: C64, beta: C64) -> Result<f64> {
    let q = Qubit::new(alpha, beta)?;
    let direct = build_gm(&GmParameters::new(clones, q)?)?;
    let mut superposed = build_gm_basis(clones, false)?;
    superposed.scale(q.alpha());
    superposed.add_scaled(q.beta(), &build_gm_basis(clones, true)?);
    Ok(direct.phase_aligned_distance(&superposed))
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScalingRow {
    pub clones: usize,
    pub num_qubits: usize,
    pub bond_dim: usize,
    pub cut_ranks: Vec<usize>,
    pub tol: f64,
}

impl ScalingRow {
    pub fn csv_line(&self) -> String {
        let ranks: Vec<String> = self.cut_ranks.iter().map(usize::to_string).collect();
        format!(
            "{},{},{},{},{:e}",
            self.clones,
            self.num_qubits,
            self.bond_dim,
            ranks.join(";"),
            self.tol
        )
    }
}

/// Compiles the output for the equatorial input `(|0⟩+|1⟩)/√2` at every
/// `M` in `min..=max` and records the retained rank at each cut.
pub fn scaling_sweep(min: usize, max: usize, tol: f64) -> Result<Vec<ScalingRow>> {
    if max > MAX_SWEEP_CLONES {
        return Err(Error::ResourceLimit(format!(
            "sweep up to M = {max} exceeds M = {MAX_SWEEP_CLONES} ({} qubits)",
            2 * MAX_SWEEP_CLONES - 1
        )));
    }
    if min == 0 || min > max {
        return Err(Error::Domain(format!("invalid sweep range {min}..={max}")));
    }
    let input = Qubit::equatorial(0.0);
    (min..=max)
        .map(|m| {
            let state = build_gm(&GmParameters::new(m, input)?)?;
            let (mps, spectrum) = mps_from_state(&state, tol)?;
            let bond_dim = mps.bond_dims().into_iter().max().unwrap_or(1);
            Ok(ScalingRow {
                clones: m,
                num_qubits: 2 * m - 1,
                bond_dim,
                cut_ranks: spectrum.retained_ranks(),
                tol,
            })
        })
        .collect()
}

pub fn scaling_csv(rows: &[ScalingRow]) -> String {
    let mut out = String::new();
    writeln!(out, "{SCALING_CSV_HEADER}").unwrap();
    for row in rows {
        writeln!(out, "{}", row.csv_line()).unwrap();
    }
    out
}
