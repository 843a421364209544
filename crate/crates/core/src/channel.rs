//! Channel construction in the coherence-vector picture.
//!
//! A compression map scales each polarization, `a'_i = ν_i a_i` (plus an
//! optional translation `t`). Its matrix on the augmented vector `(1, a)`
//! is `T`; the change of basis between `(1, a)` and the row-major
//! vectorized density matrix is `M`, so the process matrix is
//! `A = M·T·M⁻¹` and the Choi matrix `B` follows by index reshuffle,
//! `B[(r,r'),(s,s')] = A[(r,s),(r',s')]`.

use crate::error::{Error, Result};
use crate::linalg::{cr, vec_row_major, CMatrix};
use crate::su_basis::{DensityMatrix, GeneratorBasis};
use nalgebra::DMatrix;

/// Componentwise compression of the coherence vector, optionally affine.
///
/// No range restriction is placed on ν: classifying which ν are completely
/// positive is the whole point.
#[derive(Debug, Clone, PartialEq)]
pub struct CompressionMap {
    dim: usize,
    nu: Vec<f64>,
    translation: Option<Vec<f64>>,
}

impl CompressionMap {
    /// A unital map (fixes I/N): pure compression, no translation.
    pub fn unital(dim: usize, nu: Vec<f64>) -> Result<Self> {
        Self::affine_opt(dim, nu, None)
    }

    /// A compression followed by a translation of the coherence vector.
    pub fn affine(dim: usize, nu: Vec<f64>, translation: Vec<f64>) -> Result<Self> {
        Self::affine_opt(dim, nu, Some(translation))
    }

    fn affine_opt(dim: usize, nu: Vec<f64>, translation: Option<Vec<f64>>) -> Result<Self> {
        let expected = dim * dim - 1;
        if nu.len() != expected {
            return Err(Error::LengthMismatch {
                context: "compression vector",
                expected,
                got: nu.len(),
            });
        }
        if nu.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("compression vector"));
        }
        if let Some(t) = &translation {
            if t.len() != expected {
                return Err(Error::LengthMismatch {
                    context: "translation vector",
                    expected,
                    got: t.len(),
                });
            }
            if t.iter().any(|x| !x.is_finite()) {
                return Err(Error::NonFinite("translation vector"));
            }
        }
        Ok(Self {
            dim,
            nu,
            translation,
        })
    }

    /// The identity map for dimension N (all ν = 1).
    pub fn identity(dim: usize) -> Self {
        Self {
            dim,
            nu: vec![1.0; dim * dim - 1],
            translation: None,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nu(&self) -> &[f64] {
        &self.nu
    }

    pub fn translation(&self) -> Option<&[f64]> {
        self.translation.as_deref()
    }

    /// True when the map fixes the maximally mixed state.
    pub fn is_unital(&self) -> bool {
        match &self.translation {
            None => true,
            Some(t) => t.iter().all(|&x| x == 0.0),
        }
    }
}

/// The process matrix A and the Choi-ordered matrix B of a channel.
///
/// By construction `B = reshuffle(A)`, `B` is Hermitian (within float
/// noise) and `Tr B = N` (trace preservation).
#[derive(Debug, Clone)]
pub struct ChannelMatrices {
    dim: usize,
    a: CMatrix,
    b: CMatrix,
}

impl ChannelMatrices {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The process matrix: `vec(ρ') = A·vec(ρ)`.
    pub fn process(&self) -> &CMatrix {
        &self.a
    }

    /// The Choi-ordered matrix whose spectrum decides complete positivity.
    pub fn choi(&self) -> &CMatrix {
        &self.b
    }
}

/// The N²×N² matrix acting on the column vector `(1, a)`: T[0,0] = 1,
/// T[i,i] = ν_i, and T[i,0] = t_i when a translation is present.
pub fn build_t(map: &CompressionMap) -> DMatrix<f64> {
    let side = map.dim() * map.dim();
    let mut t = DMatrix::zeros(side, side);
    t[(0, 0)] = 1.0;
    for (i, &nu) in map.nu().iter().enumerate() {
        t[(i + 1, i + 1)] = nu;
    }
    if let Some(trans) = map.translation() {
        for (i, &ti) in trans.iter().enumerate() {
            t[(i + 1, 0)] = ti;
        }
    }
    t
}

/// The change of basis `vec(ρ) = M·(1, a)`: column 0 is `vec(I/N)`,
/// column j (j ≥ 1) is `vec((c/N)·J_j)`.
pub fn build_m(basis: &GeneratorBasis) -> CMatrix {
    let n = basis.dim();
    let side = n * n;
    let scale = cr(basis.norm_constant() / n as f64);
    let mut m = CMatrix::zeros(side, side);
    let id_col = vec_row_major(&(CMatrix::identity(n, n) / cr(n as f64)));
    m.set_column(0, &id_col);
    for (j, gen) in basis.generators().iter().enumerate() {
        m.set_column(j + 1, &(vec_row_major(gen) * scale));
    }
    m
}

/// Caches M and M⁻¹ for one basis so that many maps can be built against it.
/// Immutable after construction; share by reference across threads.
#[derive(Debug, Clone)]
pub struct ChannelBuilder {
    basis: GeneratorBasis,
    m: CMatrix,
    m_inv: CMatrix,
}

impl ChannelBuilder {
    pub fn new(basis: GeneratorBasis) -> Result<Self> {
        let m = build_m(&basis);
        let m_inv = m.clone().try_inverse().ok_or_else(|| {
            Error::SingularSystem("coherence matrix M is not invertible".into())
        })?;
        Ok(Self { basis, m, m_inv })
    }

    pub fn basis(&self) -> &GeneratorBasis {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    /// The cached coherence matrix M.
    pub fn coherence_matrix(&self) -> &CMatrix {
        &self.m
    }

    /// The cached inverse M⁻¹.
    pub fn coherence_matrix_inverse(&self) -> &CMatrix {
        &self.m_inv
    }

    /// A = M·T·M⁻¹.
    pub fn process_matrix(&self, map: &CompressionMap) -> Result<CMatrix> {
        if map.dim() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "map for N={} against basis for N={}",
                map.dim(),
                self.dim()
            )));
        }
        let t = build_t(map).map(|x| cr(x));
        Ok(&self.m * t * &self.m_inv)
    }

    /// Builds both the process matrix A and the Choi matrix B.
    pub fn channel(&self, map: &CompressionMap) -> Result<ChannelMatrices> {
        let a = self.process_matrix(map)?;
        let b = reshuffle(&a)?;
        Ok(ChannelMatrices {
            dim: self.dim(),
            a,
            b,
        })
    }

    /// The Choi matrix alone.
    pub fn choi_matrix(&self, map: &CompressionMap) -> Result<CMatrix> {
        reshuffle(&self.process_matrix(map)?)
    }
}

/// One-shot construction of the process matrix; use [`ChannelBuilder`] when
/// building many maps against the same basis.
pub fn build_a(map: &CompressionMap, basis: &GeneratorBasis) -> Result<CMatrix> {
    ChannelBuilder::new(basis.clone())?.process_matrix(map)
}

/// One-shot construction of A and B.
pub fn build_channel(map: &CompressionMap, basis: &GeneratorBasis) -> Result<ChannelMatrices> {
    ChannelBuilder::new(basis.clone())?.channel(map)
}

/// Index reshuffle between the process and Choi orderings: with row-major
/// pair indices, `out[(r,r'),(s,s')] = in[(r,s),(r',s')]`. An involution.
pub fn reshuffle(a: &CMatrix) -> Result<CMatrix> {
    let side = a.nrows();
    if a.ncols() != side {
        return Err(Error::DimensionMismatch(format!(
            "reshuffle needs a square matrix, got {}x{}",
            a.nrows(),
            a.ncols()
        )));
    }
    let n = (side as f64).sqrt().round() as usize;
    if n * n != side {
        return Err(Error::DimensionMismatch(format!(
            "reshuffle needs side N², got {side}"
        )));
    }
    let mut b = CMatrix::zeros(side, side);
    for r in 0..n {
        for rp in 0..n {
            for s in 0..n {
                for sp in 0..n {
                    b[(r * n + rp, s * n + sp)] = a[(r * n + s, rp * n + sp)];
                }
            }
        }
    }
    Ok(b)
}

/// Applies a channel to a state: `vec(ρ') = A·vec(ρ)`.
pub fn apply_channel(channel: &ChannelMatrices, rho: &DensityMatrix) -> Result<DensityMatrix> {
    if rho.dim() != channel.dim() {
        return Err(Error::DimensionMismatch(format!(
            "state for N={} against channel for N={}",
            rho.dim(),
            channel.dim()
        )));
    }
    let v = vec_row_major(rho.matrix());
    let out = channel.process() * v;
    Ok(DensityMatrix::from_matrix_unchecked(
        crate::linalg::unvec_row_major(&out, channel.dim()),
    ))
}

/// Trace-formula inverse of M, used as an independent oracle against the
/// numeric inversion: row 0 recovers the normalization `Tr ρ`, row j
/// recovers `a_j = N·Tr(ρ J_j)/(2c)`.
pub fn coherence_matrix_inverse_by_traces(basis: &GeneratorBasis) -> CMatrix {
    let n = basis.dim();
    let side = n * n;
    let c = basis.norm_constant();
    let mut m_inv = CMatrix::zeros(side, side);
    // Tr ρ = Σ_r ρ_rr; vec index of (r, r) is r·N + r.
    for r in 0..n {
        m_inv[(0, r * n + r)] = cr(1.0);
    }
    // Tr(ρ J) = Σ_{rs} ρ_rs J_sr.
    let scale = cr(n as f64 / (2.0 * c));
    for (j, gen) in basis.generators().iter().enumerate() {
        for r in 0..n {
            for s in 0..n {
                m_inv[(j + 1, r * n + s)] = gen[(s, r)] * scale;
            }
        }
    }
    m_inv
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, max_abs_diff};
    use crate::su_basis::{
        coherence_from_density, density_from_coherence, gell_mann_basis, pauli_tensor_basis,
        CoherenceVector,
    };
    use rand::{Rng, SeedableRng};

    fn random_nu(k: usize, rng: &mut impl Rng) -> Vec<f64> {
        (0..k).map(|_| rng.random_range(-1.0..1.0)).collect()
    }

    #[test]
    fn t_identity_for_unit_nu() {
        let map = CompressionMap::identity(3);
        let t = build_t(&map);
        assert_eq!(t, DMatrix::identity(9, 9));
    }

    #[test]
    fn t_is_diagonal_with_nu() {
        let nu: Vec<f64> = (1..=8).map(|i| i as f64 / 10.0).collect();
        let map = CompressionMap::unital(3, nu.clone()).unwrap();
        let t = build_t(&map);
        assert_eq!(t[(0, 0)], 1.0);
        for (i, &v) in nu.iter().enumerate() {
            assert_eq!(t[(i + 1, i + 1)], v);
        }
        assert_eq!(t.iter().filter(|&&x| x != 0.0).count(), 9);
    }

    #[test]
    fn t_translation_column() {
        let map = CompressionMap::affine(2, vec![0.0; 3], vec![0.0, 0.0, 0.5]).unwrap();
        let t = build_t(&map);
        assert_eq!(t[(3, 0)], 0.5);
        assert_eq!(t[(1, 0)], 0.0);
        assert_eq!(t[(3, 3)], 0.0);
        assert_eq!(t[(0, 0)], 1.0);
    }

    #[test]
    fn qubit_m_first_row() {
        // vec(ρ) row for ρ₁₁ is (1/2)(1, 0, 0, 1) against (1, a).
        let m = build_m(&gell_mann_basis(2).unwrap());
        assert!((m[(0, 0)] - cr(0.5)).norm() < 1e-15);
        assert!(m[(0, 1)].norm() < 1e-15);
        assert!(m[(0, 2)].norm() < 1e-15);
        assert!((m[(0, 3)] - cr(0.5)).norm() < 1e-15);
        // ρ₁₂ row: (1/2)(0, 1, -i, 0)
        assert!((m[(1, 1)] - cr(0.5)).norm() < 1e-15);
        assert!((m[(1, 2)] - c(0.0, -0.5)).norm() < 1e-15);
    }

    #[test]
    fn m_inverse_is_accurate() {
        for basis in [
            gell_mann_basis(3).unwrap(),
            gell_mann_basis(5).unwrap(),
            pauli_tensor_basis(2).unwrap(),
            pauli_tensor_basis(3).unwrap(),
        ] {
            let builder = ChannelBuilder::new(basis).unwrap();
            let side = builder.coherence_matrix().nrows();
            let prod = builder.coherence_matrix() * builder.coherence_matrix_inverse();
            assert!(
                max_abs_diff(&prod, &CMatrix::identity(side, side)) < 1e-12,
                "side {side}"
            );
        }
    }

    #[test]
    fn m_inverse_matches_trace_formula() {
        for basis in [
            gell_mann_basis(3).unwrap(),
            gell_mann_basis(4).unwrap(),
            pauli_tensor_basis(2).unwrap(),
        ] {
            let oracle = coherence_matrix_inverse_by_traces(&basis);
            let builder = ChannelBuilder::new(basis).unwrap();
            assert!(max_abs_diff(builder.coherence_matrix_inverse(), &oracle) < 1e-12);
        }
    }

    #[test]
    fn identity_map_gives_identity_process_matrix() {
        let basis = gell_mann_basis(3).unwrap();
        let a = build_a(&CompressionMap::identity(3), &basis).unwrap();
        assert!(max_abs_diff(&a, &CMatrix::identity(9, 9)) < 1e-13);
    }

    #[test]
    fn reshuffle_of_identity_is_choi_of_identity_channel() {
        let a = CMatrix::identity(4, 4);
        let b = reshuffle(&a).unwrap();
        // 2·|Ω⟩⟨Ω|: ones exactly at the (rr),(ss) positions.
        for r in 0..2 {
            for s in 0..2 {
                assert_eq!(b[(r * 2 + r, s * 2 + s)], cr(1.0));
            }
        }
        assert_eq!(b[(1, 1)], cr(0.0));
        let eigs = crate::linalg::hermitian_eigenvalues(&b);
        assert!((eigs[3] - 2.0).abs() < 1e-12);
        assert!(eigs[..3].iter().all(|e| e.abs() < 1e-12));
    }

    #[test]
    fn reshuffle_is_an_involution() {
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(5);
        let x = CMatrix::from_fn(9, 9, |_, _| {
            c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        });
        let back = reshuffle(&reshuffle(&x).unwrap()).unwrap();
        assert_eq!(back, x);
    }

    #[test]
    fn reshuffle_rejects_non_square_side() {
        let x = CMatrix::zeros(5, 5);
        assert!(matches!(reshuffle(&x), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn choi_trace_and_hermiticity() {
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(7);
        for basis in [gell_mann_basis(3).unwrap(), pauli_tensor_basis(2).unwrap()] {
            let n = basis.dim();
            let builder = ChannelBuilder::new(basis).unwrap();
            for _ in 0..50 {
                let map = CompressionMap::unital(n, random_nu(n * n - 1, &mut rng)).unwrap();
                let ch = builder.channel(&map).unwrap();
                assert!((ch.choi().trace() - cr(n as f64)).norm() < 1e-10);
                assert!(crate::linalg::hermiticity_violation(ch.choi()) < 1e-12);
                assert!(max_abs_diff(&reshuffle(ch.choi()).unwrap(), ch.process()) < 1e-15);
            }
        }
    }

    #[test]
    fn channel_action_compresses_coherence() {
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(13);
        let basis = gell_mann_basis(3).unwrap();
        let builder = ChannelBuilder::new(basis.clone()).unwrap();
        for _ in 0..25 {
            let nu = random_nu(8, &mut rng);
            let map = CompressionMap::unital(3, nu.clone()).unwrap();
            let ch = builder.channel(&map).unwrap();
            let a_in =
                CoherenceVector::new(3, (0..8).map(|_| rng.random_range(-0.3..0.3)).collect())
                    .unwrap();
            let rho = density_from_coherence(&a_in, &basis).unwrap();
            let rho_out = apply_channel(&ch, &rho).unwrap();
            assert!((rho_out.trace() - cr(1.0)).norm() < 1e-12);
            let a_out = coherence_from_density(&rho_out, &basis).unwrap();
            for i in 0..8 {
                assert!((a_out.components()[i] - nu[i] * a_in.components()[i]).abs() < 1e-11);
            }
        }
    }

    #[test]
    fn sign_flip_on_one_axis() {
        let basis = gell_mann_basis(2).unwrap();
        let map = CompressionMap::unital(2, vec![1.0, -1.0, 1.0]).unwrap();
        let ch = build_channel(&map, &basis).unwrap();
        let a_in = CoherenceVector::new(2, vec![0.0, 0.5, 0.0]).unwrap();
        let rho = density_from_coherence(&a_in, &basis).unwrap();
        let a_out =
            coherence_from_density(&apply_channel(&ch, &rho).unwrap(), &basis).unwrap();
        assert!((a_out.components()[1] + 0.5).abs() < 1e-12);
    }

    #[test]
    fn full_compression_maps_everything_to_maximally_mixed() {
        let basis = pauli_tensor_basis(2).unwrap();
        let map = CompressionMap::unital(4, vec![0.0; 15]).unwrap();
        let ch = build_channel(&map, &basis).unwrap();
        let mut m = CMatrix::zeros(4, 4);
        m[(0, 0)] = cr(1.0);
        let rho = DensityMatrix::new(m).unwrap();
        let out = apply_channel(&ch, &rho).unwrap();
        let mixed = DensityMatrix::maximally_mixed(4);
        assert!(max_abs_diff(out.matrix(), mixed.matrix()) < 1e-13);
    }

    #[test]
    fn translation_shifts_coherence() {
        let basis = gell_mann_basis(2).unwrap();
        let map = CompressionMap::affine(2, vec![0.0; 3], vec![0.0, 0.0, 0.5]).unwrap();
        let ch = build_channel(&map, &basis).unwrap();
        let a_in = CoherenceVector::new(2, vec![0.4, -0.2, 0.3]).unwrap();
        let rho = density_from_coherence(&a_in, &basis).unwrap();
        let a_out =
            coherence_from_density(&apply_channel(&ch, &rho).unwrap(), &basis).unwrap();
        assert!(a_out.components()[0].abs() < 1e-12);
        assert!(a_out.components()[1].abs() < 1e-12);
        assert!((a_out.components()[2] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn rejects_wrong_nu_length() {
        assert!(matches!(
            CompressionMap::unital(3, vec![0.0; 7]),
            Err(Error::LengthMismatch { .. })
        ));
        assert!(CompressionMap::affine(2, vec![0.0; 3], vec![0.0; 2]).is_err());
    }

    #[test]
    fn process_matrix_real_for_gell_mann_qutrit() {
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(23);
        let basis = gell_mann_basis(3).unwrap();
        let builder = ChannelBuilder::new(basis).unwrap();
        let map = CompressionMap::unital(3, random_nu(8, &mut rng)).unwrap();
        let a = builder.process_matrix(&map).unwrap();
        let max_im = a.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
        assert!(max_im < 1e-13);
    }
}
