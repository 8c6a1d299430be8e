//! Matrix-product states compiled by successive singular-value decompositions.
//!
//! A state on `n` qubits is written as
//!
//! ```text
//! c_{i_1 … i_n} = l · A_[1]^{i_1} A_[2]^{i_2} ⋯ A_[n]^{i_n} · r
//! ```
//!
//! with `A_[k]^{i}` of shape `D_k × D_{k+1}`, `l` a row vector of length
//! `D_1` and `r` a column vector of length `D_{n+1}`.
//!
//! [`mps_from_state`] sweeps left to right. At cut `k` the carried remainder
//! (initially the coefficient tensor itself) is reshaped so that the next
//! physical index joins the row index and factored as `V S W†`. Where the
//! singular values go is set by [`Gauge`]. The default keeps `V` as the site
//! tensor and carries `S W†`, so every prefix is an isometry, the recorded
//! singular values are Schmidt coefficients, and the reconstruction error is
//! at most the root-sum-square of everything discarded. [`Gauge::SingularLeft`]
//! instead stores `V S` and carries the isometry `W†`; truncation errors at
//! different cuts are then no longer orthogonal and that bound can be
//! overshot slightly.

use faer::Mat;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::state::{StateVector, MAX_DENSE_QUBITS};

/// Relative truncation threshold used when none is specified.
pub const DEFAULT_TOL: f64 = 1e-12;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Which factor of each cut's SVD absorbs the singular values.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Gauge {
    /// Site tensor `V`, remainder `S W†`.
    #[default]
    LeftCanonical,
    /// Site tensor `V S`, remainder `W†`.
    SingularLeft,
}

/// Both matrices `A^0`, `A^1` of one site.
#[derive(Clone, Debug, PartialEq)]
pub struct Site {
    matrices: [Mat<C64>; 2],
}

impl Site {
    pub fn new(a0: Mat<C64>, a1: Mat<C64>) -> Result<Self> {
        if (a0.nrows(), a0.ncols()) != (a1.nrows(), a1.ncols()) {
            return Err(Error::MalformedMps(format!(
                "site matrices disagree in shape: {}x{} vs {}x{}",
                a0.nrows(),
                a0.ncols(),
                a1.nrows(),
                a1.ncols()
            )));
        }
        Ok(Self { matrices: [a0, a1] })
    }

    pub fn matrix(&self, bit: usize) -> &Mat<C64> {
        &self.matrices[bit]
    }

    /// Left bond dimension `D_k`.
    pub fn rows(&self) -> usize {
        self.matrices[0].nrows()
    }

    /// Right bond dimension `D_{k+1}`.
    pub fn cols(&self) -> usize {
        self.matrices[0].ncols()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MatrixProductState {
    sites: Vec<Site>,
    left: Vec<C64>,
    right: Vec<C64>,
}

impl MatrixProductState {
    /// Checks that adjacent bond dimensions and boundaries line up.
    pub fn new(sites: Vec<Site>, left: Vec<C64>, right: Vec<C64>) -> Result<Self> {
        let first = sites.first().ok_or_else(|| Error::MalformedMps("no sites".into()))?;
        if left.len() != first.rows() {
            return Err(Error::MalformedMps(format!(
                "left boundary of length {} against {} rows at site 1",
                left.len(),
                first.rows()
            )));
        }
        for (k, pair) in sites.windows(2).enumerate() {
            if pair[0].cols() != pair[1].rows() {
                return Err(Error::MalformedMps(format!(
                    "site {} has {} columns but site {} has {} rows",
                    k + 1,
                    pair[0].cols(),
                    k + 2,
                    pair[1].rows()
                )));
            }
        }
        let last = sites.last().expect("nonempty");
        if right.len() != last.cols() {
            return Err(Error::MalformedMps(format!(
                "right boundary of length {} against {} columns at site {}",
                right.len(),
                last.cols(),
                sites.len()
            )));
        }
        Ok(Self { sites, left, right })
    }

    pub fn num_sites(&self) -> usize {
        self.sites.len()
    }

    pub fn sites(&self) -> &[Site] {
        &self.sites
    }

    pub fn left_boundary(&self) -> &[C64] {
        &self.left
    }

    pub fn right_boundary(&self) -> &[C64] {
        &self.right
    }

    /// `D_1, …, D_{n+1}`.
    pub fn bond_dims(&self) -> Vec<usize> {
        let mut dims: Vec<usize> = self.sites.iter().map(Site::rows).collect();
        dims.push(self.right.len());
        dims
    }
}

/// Singular values found at one cut `k | k+1`.
#[derive(Clone, Debug, PartialEq)]
pub struct CutSpectrum {
    /// Descending, nonnegative.
    pub singular_values: Vec<f64>,
    /// Number of values kept.
    pub retained: usize,
}

impl CutSpectrum {
    pub fn discarded(&self) -> &[f64] {
        &self.singular_values[self.retained..]
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BondSpectrum {
    pub cuts: Vec<CutSpectrum>,
    /// Relative threshold the sweep was run with.
    pub tolerance: f64,
}

impl BondSpectrum {
    pub fn retained_ranks(&self) -> Vec<usize> {
        self.cuts.iter().map(|c| c.retained).collect()
    }

    /// `√(Σ σ²)` over every discarded singular value.
    pub fn discarded_norm(&self) -> f64 {
        self.cuts
            .iter()
            .flat_map(|c| c.discarded())
            .fold(0.0, |acc, s| acc + s * s)
            .sqrt()
    }
}

/// Compiles `state` into left-canonical MPS form, discarding at every cut
/// the singular values not exceeding `tol × σ_max`.
pub fn mps_from_state(state: &StateVector, tol: f64) -> Result<(MatrixProductState, BondSpectrum)> {
    mps_from_state_in(state, tol, Gauge::LeftCanonical)
}

pub fn mps_from_state_in(state: &StateVector, tol: f64, gauge: Gauge) -> Result<(MatrixProductState, BondSpectrum)> {
    if !(0.0..1.0).contains(&tol) {
        return Err(Error::Domain(format!("truncation tolerance {tol} outside [0, 1)")));
    }
    let n = state.num_qubits();
    if n == 0 {
        return Err(Error::Domain("cannot compile a zero-qubit state".into()));
    }
    if state.norm() == 0.0 {
        return Err(Error::DegenerateState("zero vector".into()));
    }

    let mut sites = Vec::with_capacity(n);
    let mut cuts = Vec::with_capacity(n - 1);
    // Remainder carried between cuts, `bond × rest` in row-major order.
    let mut bond = 1usize;
    let mut carried: Vec<C64> = state.amplitudes().to_vec();

    for k in 1..n {
        let rest = 1usize << (n - k);
        // Row index (a, i_k) = 2a + i_k; row-major reshape keeps the data.
        let rows = 2 * bond;
        let c = Mat::from_fn(rows, rest, |r, col| carried[r * rest + col]);
        let svd = c
            .thin_svd()
            .map_err(|e| Error::Consistency(format!("SVD failed to converge at cut {k}: {e:?}")))?;
        let (u, w) = (svd.U(), svd.V());
        let sigma: Vec<f64> = (0..svd.S().dim()).map(|l| svd.S()[l].re).collect();

        let cutoff = tol * sigma[0];
        let retained = sigma.iter().take_while(|&&s| s > cutoff).count();
        if retained == 0 {
            return Err(Error::DegenerateState(format!(
                "every singular value truncated at cut {k}"
            )));
        }

        let (site_scale, carry_scale) = match gauge {
            Gauge::LeftCanonical => (vec![1.0; retained], sigma[..retained].to_vec()),
            Gauge::SingularLeft => (sigma[..retained].to_vec(), vec![1.0; retained]),
        };
        // Split by the physical index in the row.
        let mut a = [Mat::zeros(bond, retained), Mat::zeros(bond, retained)];
        for row in 0..rows {
            for col in 0..retained {
                a[row % 2][(row / 2, col)] = u[(row, col)] * site_scale[col];
            }
        }
        let [a0, a1] = a;
        sites.push(Site::new(a0, a1)?);
        cuts.push(CutSpectrum {
            singular_values: sigma,
            retained,
        });

        carried = (0..retained)
            .flat_map(|r| (0..rest).map(move |col| (r, col)))
            .map(|(r, col)| w[(col, r)].conj() * carry_scale[r])
            .collect();
        bond = retained;
    }

    // The last remainder is `bond × 2`: its columns are the final site.
    let last = |bit: usize| Mat::from_fn(bond, 1, |r, _| carried[2 * r + bit]);
    sites.push(Site::new(last(0), last(1))?);

    let mps = MatrixProductState::new(sites, vec![ONE], vec![ONE])?;
    Ok((mps, BondSpectrum { cuts, tolerance: tol }))
}

/// Contracts the MPS back into a dense vector with one left-to-right sweep.
pub fn mps_to_state(mps: &MatrixProductState) -> Result<StateVector> {
    let n = mps.num_sites();
    if n > MAX_DENSE_QUBITS {
        return Err(Error::ResourceLimit(format!(
            "{n} sites exceed the dense limit of {MAX_DENSE_QUBITS}"
        )));
    }
    // `partial` holds, for every prefix i_1…i_k, the row vector l·A^{i_1}⋯A^{i_k}.
    let mut width = mps.left.len();
    let mut partial: Vec<C64> = mps.left.clone();
    for site in &mps.sites {
        if site.rows() != width {
            return Err(Error::MalformedMps(format!(
                "bond mismatch: {} vs {}",
                site.rows(),
                width
            )));
        }
        let cols = site.cols();
        let prefixes = partial.len() / width;
        let mut next = vec![ZERO; prefixes * 2 * cols];
        for p in 0..prefixes {
            let row = &partial[p * width..(p + 1) * width];
            for bit in 0..2 {
                let m = site.matrix(bit);
                let out = &mut next[(2 * p + bit) * cols..(2 * p + bit + 1) * cols];
                for (c, o) in out.iter_mut().enumerate() {
                    *o = row.iter().enumerate().map(|(b, x)| x * m[(b, c)]).sum();
                }
            }
        }
        partial = next;
        width = cols;
    }
    if mps.right.len() != width {
        return Err(Error::MalformedMps(format!(
            "right boundary {} vs bond {}",
            mps.right.len(),
            width
        )));
    }
    let amps = partial
        .chunks(width)
        .map(|row| row.iter().zip(&mps.right).map(|(x, r)| x * r).sum())
        .collect();
    StateVector::new(n, amps)
}

/// `max_k D_k` over all bonds, boundaries included.
pub fn bond_dimension(mps: &MatrixProductState) -> usize {
    mps.bond_dims().into_iter().max().unwrap_or(0)
}

/// Direct sum of two MPSs of equal length: site tensors are stacked
/// block-diagonally and the left boundary becomes `(α·l₀, β·l₁)`, so the
/// result represents `α|ψ₀⟩ + β|ψ₁⟩` with doubled bond (ancilla) dimension.
pub fn combine_basis_mps(
    mps0: &MatrixProductState,
    mps1: &MatrixProductState,
    alpha: C64,
    beta: C64,
) -> Result<MatrixProductState> {
    if mps0.num_sites() != mps1.num_sites() {
        return Err(Error::Domain(format!(
            "cannot combine MPSs of {} and {} sites",
            mps0.num_sites(),
            mps1.num_sites()
        )));
    }
    let block = |x: &Mat<C64>, y: &Mat<C64>| {
        let (r, c) = (x.nrows(), x.ncols());
        Mat::from_fn(r + y.nrows(), c + y.ncols(), |i, j| match (i < r, j < c) {
            (true, true) => x[(i, j)],
            (false, false) => y[(i - r, j - c)],
            _ => ZERO,
        })
    };
    let sites = mps0
        .sites
        .iter()
        .zip(&mps1.sites)
        .map(|(s0, s1)| Site::new(block(s0.matrix(0), s1.matrix(0)), block(s0.matrix(1), s1.matrix(1))))
        .collect::<Result<Vec<_>>>()?;
    let left = mps0
        .left
        .iter()
        .map(|l| alpha * l)
        .chain(mps1.left.iter().map(|l| beta * l))
        .collect();
    let right = mps0.right.iter().chain(&mps1.right).copied().collect();
    MatrixProductState::new(sites, left, right)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gm::{build_gm, build_gm_basis, GmParameters};
    use crate::qubit::Qubit;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_state(rng: &mut impl Rng, n: usize) -> StateVector {
        let amps = (0..1usize << n)
            .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        StateVector::new(n, amps).unwrap().normalized().unwrap()
    }

    /// Rank of the `2^k × 2^{n−k}` reshaping, from the eigenvalues of its
    /// Gram matrix rather than an SVD.
    fn gram_rank(state: &StateVector, k: usize, rel: f64) -> usize {
        let n = state.num_qubits();
        let cols = 1 << (n - k);
        let c = Mat::from_fn(1 << k, cols, |r, col| state.amplitudes()[r * cols + col]);
        let gram = &c * c.adjoint();
        let eig = gram.self_adjoint_eigenvalues(faer::Side::Lower).unwrap();
        let max = eig.iter().cloned().fold(0.0, f64::max);
        eig.iter().filter(|&&e| e > rel * max).count()
    }

    #[test]
    fn single_qubit_is_one_site() {
        let q = Qubit::new(C64::new(0.6, 0.0), C64::new(0.0, 0.8)).unwrap();
        let (mps, spec) = mps_from_state(&StateVector::from_qubit(&q), 0.0).unwrap();
        assert_eq!(mps.num_sites(), 1);
        assert_eq!(mps.bond_dims(), vec![1, 1]);
        assert_eq!(mps.sites()[0].matrix(0)[(0, 0)], q.alpha());
        assert_eq!(mps.sites()[0].matrix(1)[(0, 0)], q.beta());
        assert!(spec.cuts.is_empty());
        assert_eq!(bond_dimension(&mps), 1);
    }

    #[test]
    fn product_state_has_unit_bonds() {
        for n in 1..=6 {
            let s = StateVector::basis(n, 0).unwrap();
            let (mps, spec) = mps_from_state(&s, DEFAULT_TOL).unwrap();
            assert!(spec.retained_ranks().iter().all(|&r| r == 1));
            assert_eq!(bond_dimension(&mps), 1);
            assert!(mps_to_state(&mps).unwrap().distance(&s) < 1e-15);
        }
    }

    // Reshapings of √(2/3)|001⟩ − (1/√6)(|010⟩+|100⟩) at 1|23 and 12|3 are
    // [[0, a, −b, 0], [−b, 0, 0, 0]] and [[0, a], [−b, 0], [−b, 0], [0, 0]]:
    // both rank 2.
    #[test]
    fn two_clone_basis_state_has_bond_two() {
        let s = build_gm_basis(2, false).unwrap();
        let (mps, spec) = mps_from_state(&s, DEFAULT_TOL).unwrap();
        assert_eq!(mps.bond_dims(), vec![1, 2, 2, 1]);
        assert_eq!(bond_dimension(&mps), 2);
        assert_eq!(
            spec.retained_ranks(),
            vec![gram_rank(&s, 1, 1e-12), gram_rank(&s, 2, 1e-12)]
        );
        let back = mps_to_state(&mps).unwrap();
        assert!((back.overlap_modulus(&s) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn identity_sites_give_all_zeros() {
        let one = Mat::from_fn(1, 1, |_, _| ONE);
        let zero = Mat::from_fn(1, 1, |_, _| ZERO);
        let sites = (0..3).map(|_| Site::new(one.clone(), zero.clone()).unwrap()).collect();
        let mps = MatrixProductState::new(sites, vec![ONE], vec![ONE]).unwrap();
        assert_eq!(mps_to_state(&mps).unwrap(), StateVector::basis(3, 0).unwrap());
    }

    #[test]
    fn equatorial_roundtrip_is_exact() {
        let s = build_gm(&GmParameters::new(2, Qubit::equatorial(0.0)).unwrap()).unwrap();
        let (mps, _) = mps_from_state(&s, 0.0).unwrap();
        assert!((mps_to_state(&mps).unwrap().overlap_modulus(&s) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn rejects_bad_inputs() {
        let s = StateVector::basis(2, 0).unwrap();
        assert!(matches!(mps_from_state(&s, 1.0), Err(Error::Domain(_))));
        assert!(matches!(mps_from_state(&s, -0.1), Err(Error::Domain(_))));
        assert!(matches!(
            mps_from_state(&StateVector::zeros(2).unwrap(), 0.0),
            Err(Error::DegenerateState(_))
        ));

        let a = Mat::from_fn(1, 2, |_, _| ONE);
        let b = Mat::from_fn(1, 1, |_, _| ONE);
        let sites = vec![Site::new(a.clone(), a).unwrap(), Site::new(b.clone(), b).unwrap()];
        assert!(matches!(
            MatrixProductState::new(sites, vec![ONE], vec![ONE]),
            Err(Error::MalformedMps(_))
        ));
        assert!(Site::new(Mat::zeros(1, 2), Mat::zeros(2, 1)).is_err());
    }

    #[test]
    fn random_roundtrip_and_schmidt_ranks() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in 1..=8 {
            let s = random_state(&mut rng, n);
            let (mps, spec) = mps_from_state(&s, 0.0).unwrap();
            assert!((mps_to_state(&mps).unwrap().overlap_modulus(&s) - 1.0).abs() < 1e-10);
            let (_, spec6) = mps_from_state(&s, 1e-6).unwrap();
            for k in 1..n {
                assert_eq!(spec6.cuts[k - 1].retained, gram_rank(&s, k, 1e-12), "n={n} cut {k}");
            }
            assert!(spec
                .cuts
                .iter()
                .all(|c| c.singular_values.windows(2).all(|w| w[0] >= w[1])));
        }
    }

    #[test]
    fn gm_schmidt_ranks_match_gram_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for m in 1..=4 {
            let q = Qubit::equatorial(rng.gen_range(0.0..std::f64::consts::TAU));
            let s = build_gm(&GmParameters::new(m, q).unwrap()).unwrap();
            let (_, spec) = mps_from_state(&s, 1e-6).unwrap();
            for k in 1..2 * m - 1 {
                assert_eq!(spec.cuts[k - 1].retained, gram_rank(&s, k, 1e-12), "M={m} cut {k}");
            }
        }
    }

    #[test]
    fn combine_examples() {
        let g0 = build_gm_basis(2, false).unwrap();
        let g1 = build_gm_basis(2, true).unwrap();
        let (m0, _) = mps_from_state(&g0, DEFAULT_TOL).unwrap();
        let (m1, _) = mps_from_state(&g1, DEFAULT_TOL).unwrap();

        let only0 = combine_basis_mps(&m0, &m1, ONE, ZERO).unwrap();
        assert!(mps_to_state(&only0).unwrap().distance(&g0) < 1e-12);

        let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let both = combine_basis_mps(&m0, &m1, h, h).unwrap();
        let mut expect = g0.clone();
        expect.scale(h);
        expect.add_scaled(h, &g1);
        let got = mps_to_state(&both).unwrap();
        assert!(got.distance(&expect) < 1e-10);
        assert_eq!(bond_dimension(&both), 4);
        assert_eq!(bond_dimension(&both), bond_dimension(&m0) + bond_dimension(&m1));

        let direct = build_gm(&GmParameters::new(2, Qubit::equatorial(0.0)).unwrap()).unwrap();
        assert!(got.overlap_modulus(&direct) < 1.0 - 1e-3);

        let (short, _) = mps_from_state(&StateVector::basis(1, 0).unwrap(), 0.0).unwrap();
        assert!(matches!(
            combine_basis_mps(&m0, &short, ONE, ZERO),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn combine_is_linear_in_coefficients() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let g0 = build_gm_basis(3, false).unwrap();
        let g1 = build_gm_basis(3, true).unwrap();
        let (m0, _) = mps_from_state(&g0, DEFAULT_TOL).unwrap();
        let (m1, _) = mps_from_state(&g1, DEFAULT_TOL).unwrap();
        for _ in 0..3 {
            let a = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let b = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let got = mps_to_state(&combine_basis_mps(&m0, &m1, a, b).unwrap()).unwrap();
            let mut expect = g0.clone();
            expect.scale(a);
            expect.add_scaled(b, &g1);
            assert!(got.distance(&expect) < 1e-10);
        }
    }

    /// A few weighted product states plus a small Haar component, so that
    /// truncation at 1e-4 or 1e-8 actually discards something.
    fn low_rank_state(rng: &mut impl Rng, n: usize) -> StateVector {
        let mut s = StateVector::zeros(n).unwrap();
        for t in 0..rng.gen_range(1..4) {
            let qs: Vec<Qubit> = (0..n)
                .map(|_| Qubit::bloch(rng.gen_range(0.0..3.1), rng.gen_range(0.0..6.2)))
                .collect();
            let w = 10f64.powi(-t * rng.gen_range(1..4));
            s.add_scaled(C64::new(w, 0.0), &StateVector::product(&qs).unwrap());
        }
        let noise = 10f64.powf(rng.gen_range(-10.0..-2.0));
        s.add_scaled(C64::new(noise, 0.0), &random_state(rng, n));
        s.normalized().unwrap()
    }

    #[test]
    fn left_canonical_sites_are_isometries() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let (mps, _) = mps_from_state(&random_state(&mut rng, 7), 0.0).unwrap();
        for site in &mps.sites()[..6] {
            let g = site.matrix(0).adjoint() * site.matrix(0) + site.matrix(1).adjoint() * site.matrix(1);
            for i in 0..g.nrows() {
                for j in 0..g.ncols() {
                    let want = if i == j { ONE } else { ZERO };
                    assert!((g[(i, j)] - want).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn gauges_agree_on_ranks_and_state() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for m in 1..=5 {
            let q = Qubit::bloch(rng.gen_range(0.0..3.1), rng.gen_range(0.0..6.2));
            let s = build_gm(&GmParameters::new(m, q).unwrap()).unwrap();
            let (a, _) = mps_from_state_in(&s, 1e-10, Gauge::LeftCanonical).unwrap();
            let (b, _) = mps_from_state_in(&s, 1e-10, Gauge::SingularLeft).unwrap();
            assert_eq!(a.bond_dims(), b.bond_dims(), "M={m}");
            assert!(mps_to_state(&b).unwrap().distance(&s) < 1e-10);
        }
    }

    #[test]
    fn truncation_error_is_bounded_by_discarded_weight() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let mut truncated = 0;
        for i in 0..200 {
            let n = rng.gen_range(2..=9);
            let s = low_rank_state(&mut rng, n);
            let tol = if i % 2 == 0 { 1e-4 } else { 1e-8 };
            let (mps, spec) = mps_from_state(&s, tol).unwrap();
            let bound = spec.discarded_norm();
            truncated += usize::from(bound > 0.0);
            let err = mps_to_state(&mps).unwrap().distance(&s);
            assert!(err <= bound + 1e-12, "n={n} tol={tol}: {err:e} > {bound:e}");
        }
        assert!(truncated > 50);
    }
}
