//! Browser bindings. Each export takes plain numbers and returns a JSON
//! string; failures come back as `{"error": "..."}` so the page has a single
//! code path.

use gmclone::analysis::{anticlone_fidelity, clone_fidelity, nonlinearity_gap, scaling_sweep};
use gmclone::gm::{build_gm, GmParameters};
use gmclone::prep::parity_classify;
use gmclone::qubit::{index_bits, Qubit};
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Keeps every call well under a frame budget in the browser.
pub const MAX_DEMO_CLONES: usize = 7;

#[derive(Serialize)]
struct Amplitude {
    bits: String,
    re: f64,
    im: f64,
    class: String,
}

#[derive(Serialize)]
struct Fidelities {
    clones: Vec<f64>,
    anticlones: Vec<f64>,
    optimal: f64,
    nonlinearity_gap: f64,
}

#[derive(Serialize)]
struct BondRow {
    clones: usize,
    qubits: usize,
    bond_dim: usize,
    cut_ranks: Vec<usize>,
}

fn respond<T: Serialize>(r: gmclone::Result<T>) -> String {
    let out = r.and_then(|v| serde_json::to_string(&v).map_err(Into::into));
    out.unwrap_or_else(|e| serde_json::json!({ "error": e.to_string() }).to_string())
}

fn checked(clones: usize) -> gmclone::Result<usize> {
    if clones > MAX_DEMO_CLONES {
        return Err(gmclone::Error::ResourceLimit(format!(
            "the demo stops at M = {MAX_DEMO_CLONES}"
        )));
    }
    Ok(clones)
}

/// Nonzero amplitudes of the output for the Bloch-sphere input `(θ, φ)`.
#[wasm_bindgen]
pub fn amplitudes(clones: usize, theta: f64, phi: f64) -> String {
    respond((|| {
        let m = checked(clones)?;
        let state = build_gm(&GmParameters::new(m, Qubit::bloch(theta, phi))?)?;
        let n = state.num_qubits();
        state
            .support(1e-12)
            .into_iter()
            .map(|idx| {
                let bits = index_bits(n, idx)?;
                let a = state.amplitude(idx);
                Ok(Amplitude {
                    bits: bits.to_string(),
                    re: a.re,
                    im: a.im,
                    class: parity_classify(&bits, m)?.to_string(),
                })
            })
            .collect::<gmclone::Result<Vec<_>>>()
    })())
}

/// Clone and anticlone fidelities plus the nonlinearity gap.
#[wasm_bindgen]
pub fn fidelities(clones: usize, theta: f64, phi: f64) -> String {
    respond((|| {
        let m = checked(clones)?;
        let q = Qubit::bloch(theta, phi);
        let state = build_gm(&GmParameters::new(m, q)?)?;
        Ok(Fidelities {
            clones: clone_fidelity(&state, m, &q)?,
            anticlones: anticlone_fidelity(&state, m, &q)?,
            optimal: (2 * m + 1) as f64 / (3 * m) as f64,
            nonlinearity_gap: nonlinearity_gap(m, q.alpha(), q.beta())?,
        })
    })())
}

/// Bond dimension and per-cut ranks for `M = 1..=max_clones`.
#[wasm_bindgen]
pub fn bond_profile(max_clones: usize, tol: f64) -> String {
    respond((|| {
        let rows = scaling_sweep(1, checked(max_clones)?, tol)?;
        Ok(rows
            .into_iter()
            .map(|r| BondRow {
                clones: r.clones,
                qubits: r.num_qubits,
                bond_dim: r.bond_dim,
                cut_ranks: r.cut_ranks,
            })
            .collect::<Vec<_>>())
    })())
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::Value;

    fn parse(s: &str) -> Value {
        serde_json::from_str(s).unwrap()
    }

    #[test]
    fn amplitudes_of_basis_input() {
        let v = parse(&amplitudes(2, 0.0, 0.0));
        let rows = v.as_array().unwrap();
        assert_eq!(rows.len(), 3);
        assert_eq!(rows[0]["bits"], "001");
        assert_eq!(rows[0]["class"], "C0");
        assert!((rows[0]["re"].as_f64().unwrap() - (2.0f64 / 3.0).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn fidelities_match_optimum() {
        let v = parse(&fidelities(3, 1.0, 0.4));
        let opt = v["optimal"].as_f64().unwrap();
        assert!((opt - 7.0 / 9.0).abs() < 1e-15);
        for f in v["clones"].as_array().unwrap() {
            assert!((f.as_f64().unwrap() - opt).abs() < 1e-10);
        }
        assert!(v["nonlinearity_gap"].as_f64().unwrap() > 0.0);
    }

    #[test]
    fn bond_profile_rows() {
        let v = parse(&bond_profile(4, 1e-12));
        let rows = v.as_array().unwrap();
        assert_eq!(rows.len(), 4);
        for r in rows {
            assert!(r["bond_dim"].as_u64().unwrap() <= 2 * r["clones"].as_u64().unwrap());
        }
    }

    #[test]
    fn errors_are_reported_as_json() {
        assert!(parse(&bond_profile(20, 1e-12))["error"].is_string());
        assert!(parse(&amplitudes(0, 0.0, 0.0))["error"].is_string());
        assert!(parse(&fidelities(2, 0.0, 0.0))["error"].is_null());
    }
}
