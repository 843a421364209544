//! Generator bases of SU(N) and the coherence-vector representation of
//! density matrices.
//!
//! A density matrix on an N-level system is expanded over N²−1 traceless,
//! Hermitian, trace-orthogonal generators `J_i` as
//!
//! ```text
//! ρ = (1/N) (I + c Σ_i a_i J_i),   c = sqrt(N(N−1)/2),
//! ```
//!
//! where the real vector `a` is the coherence (generalized Bloch) vector.
//! All bases here use the normalization `Tr(J_i J_j) = 2 δ_ij`; with that
//! convention pure states have |a| = 1 for every N.

use crate::error::{Error, Result};
use crate::linalg::{cr, kron, CMatrix};
use num_complex::Complex64;

/// Default tolerance for basis invariants (Hermiticity, tracelessness,
/// trace-orthogonality).
pub const BASIS_TOL: f64 = 1e-12;
/// Tolerance beyond which a state fed to [`coherence_from_density`] is
/// rejected as malformed.
pub const STATE_TRACE_TOL: f64 = 1e-9;

/// Which family a generator basis belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisKind {
    /// Generalized Gell-Mann matrices (any N ≥ 2).
    GellMann,
    /// Normalized n-fold Pauli tensor products (N = 2ⁿ).
    PauliTensor,
}

/// An ordered, normalized generator basis of SU(N).
///
/// The ordering is part of the public contract: compression factors ν_i are
/// indexed against it, so two bases with the same span but different order
/// describe different channels for the same ν.
#[derive(Debug, Clone)]
pub struct GeneratorBasis {
    dim: usize,
    kind: BasisKind,
    generators: Vec<CMatrix>,
    norm_constant: f64,
}

impl GeneratorBasis {
    /// Assembles a basis from parts without validation. Intended for tests
    /// and for feeding deliberately broken sets to [`validate_basis`];
    /// the canonical constructors are [`gell_mann_basis`] and
    /// [`pauli_tensor_basis`].
    pub fn from_parts(dim: usize, kind: BasisKind, generators: Vec<CMatrix>) -> Self {
        Self {
            dim,
            kind,
            generators,
            norm_constant: norm_constant(dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> BasisKind {
        self.kind
    }

    /// Number of generators, N²−1.
    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn generators(&self) -> &[CMatrix] {
        &self.generators
    }

    pub fn generator(&self, i: usize) -> &CMatrix {
        &self.generators[i]
    }

    /// The prefactor c = sqrt(N(N−1)/2) of the coherence expansion.
    pub fn norm_constant(&self) -> f64 {
        self.norm_constant
    }

    /// Number of qubits for Pauli tensor bases, if applicable.
    pub fn n_qubits(&self) -> Option<usize> {
        match self.kind {
            BasisKind::PauliTensor => Some(self.dim.trailing_zeros() as usize),
            BasisKind::GellMann => None,
        }
    }
}

/// c = sqrt(N(N−1)/2).
pub fn norm_constant(dim: usize) -> f64 {
    ((dim * (dim - 1)) as f64 / 2.0).sqrt()
}

/// A Hermitian matrix with unit trace. Positivity is deliberately not an
/// invariant: channel outputs outside the CP region are representable.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    dim: usize,
    matrix: CMatrix,
}

impl DensityMatrix {
    /// Validates Hermiticity and unit trace at the strict basis tolerance.
    pub fn new(matrix: CMatrix) -> Result<Self> {
        Self::with_tol(matrix, BASIS_TOL)
    }

    pub fn with_tol(matrix: CMatrix, tol: f64) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::DimensionMismatch(format!(
                "density matrix must be square, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let herm = crate::linalg::hermiticity_violation(&matrix);
        if herm > tol {
            return Err(Error::MalformedState(format!(
                "not Hermitian: max |ρ - ρ†| = {herm:.3e}"
            )));
        }
        let trace_err = (matrix.trace() - cr(1.0)).norm();
        if trace_err > tol {
            return Err(Error::MalformedState(format!(
                "trace deviates from 1 by {trace_err:.3e}"
            )));
        }
        Ok(Self {
            dim: matrix.nrows(),
            matrix,
        })
    }

    /// Wraps a matrix known to be Hermitian and unit-trace by construction
    /// (channel outputs carry float noise up to ~1e-10).
    pub(crate) fn from_matrix_unchecked(matrix: CMatrix) -> Self {
        Self {
            dim: matrix.nrows(),
            matrix,
        }
    }

    /// The maximally mixed state I/N.
    pub fn maximally_mixed(dim: usize) -> Self {
        let m = CMatrix::from_fn(dim, dim, |r, s| {
            if r == s {
                cr(1.0 / dim as f64)
            } else {
                cr(0.0)
            }
        });
        Self { dim, matrix: m }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }
}

/// Real polarization coefficients along the generator directions.
#[derive(Debug, Clone, PartialEq)]
pub struct CoherenceVector {
    dim: usize,
    a: Vec<f64>,
}

impl CoherenceVector {
    pub fn new(dim: usize, a: Vec<f64>) -> Result<Self> {
        let expected = dim * dim - 1;
        if a.len() != expected {
            return Err(Error::LengthMismatch {
                context: "coherence vector",
                expected,
                got: a.len(),
            });
        }
        if a.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("coherence vector"));
        }
        Ok(Self { dim, a })
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            a: vec![0.0; dim * dim - 1],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn components(&self) -> &[f64] {
        &self.a
    }

    /// Euclidean length of the coherence vector.
    pub fn norm(&self) -> f64 {
        self.a.iter().map(|x| x * x).sum::<f64>().sqrt()
    }
}

fn pauli(index: u8) -> CMatrix {
    let z = cr(0.0);
    let o = cr(1.0);
    let i = Complex64::new(0.0, 1.0);
    match index {
        0 => CMatrix::from_row_slice(2, 2, &[o, z, z, o]),
        1 => CMatrix::from_row_slice(2, 2, &[z, o, o, z]),
        2 => CMatrix::from_row_slice(2, 2, &[z, -i, i, z]),
        3 => CMatrix::from_row_slice(2, 2, &[o, z, z, -o]),
        _ => unreachable!("pauli index must be 0..=3"),
    }
}

fn symmetric_pair(dim: usize, j: usize, k: usize) -> CMatrix {
    let mut m = CMatrix::zeros(dim, dim);
    m[(j, k)] = cr(1.0);
    m[(k, j)] = cr(1.0);
    m
}

fn antisymmetric_pair(dim: usize, j: usize, k: usize) -> CMatrix {
    let mut m = CMatrix::zeros(dim, dim);
    m[(j, k)] = Complex64::new(0.0, -1.0);
    m[(k, j)] = Complex64::new(0.0, 1.0);
    m
}

/// diag(1, …, 1, −l, 0, …, 0) / sqrt(l(l+1)/2), the l-th diagonal generator.
fn diagonal_generator(dim: usize, l: usize) -> CMatrix {
    let scale = (2.0 / (l as f64 * (l + 1) as f64)).sqrt();
    let mut m = CMatrix::zeros(dim, dim);
    for j in 0..l {
        m[(j, j)] = cr(scale);
    }
    m[(l, l)] = cr(-(l as f64) * scale);
    m
}

/// The generalized Gell-Mann basis of SU(N).
///
/// For N = 3 the order is the standard λ₁…λ₈ (pair blocks interleaved with
/// the two diagonal matrices); for N = 2 it is (σ₁, σ₂, σ₃). Other N use
/// symmetric pairs, then antisymmetric pairs (both lexicographic in
/// (row, col)), then the diagonal generators.
pub fn gell_mann_basis(dim: usize) -> Result<GeneratorBasis> {
    if dim < 2 {
        return Err(Error::InvalidDimension { min: 2, got: dim });
    }
    let generators = if dim == 3 {
        vec![
            symmetric_pair(3, 0, 1),
            antisymmetric_pair(3, 0, 1),
            diagonal_generator(3, 1),
            symmetric_pair(3, 0, 2),
            antisymmetric_pair(3, 0, 2),
            symmetric_pair(3, 1, 2),
            antisymmetric_pair(3, 1, 2),
            diagonal_generator(3, 2),
        ]
    } else {
        let mut g = Vec::with_capacity(dim * dim - 1);
        for j in 0..dim {
            for k in (j + 1)..dim {
                g.push(symmetric_pair(dim, j, k));
            }
        }
        for j in 0..dim {
            for k in (j + 1)..dim {
                g.push(antisymmetric_pair(dim, j, k));
            }
        }
        for l in 1..dim {
            g.push(diagonal_generator(dim, l));
        }
        g
    };
    Ok(GeneratorBasis {
        dim,
        kind: BasisKind::GellMann,
        generators,
        norm_constant: norm_constant(dim),
    })
}

/// Non-identity Pauli words for n qubits in the contract order: grouped by
/// the set of non-identity tensor positions (rightmost-position group
/// first), lexicographic within each group. For n = 2 this is
/// I⊗σ₁, I⊗σ₂, I⊗σ₃, σ₁⊗I, σ₂⊗I, σ₃⊗I, σ₁⊗σ₁, σ₁⊗σ₂, …, σ₃⊗σ₃.
pub(crate) fn pauli_words(n_qubits: usize) -> Vec<Vec<u8>> {
    let mut words = Vec::with_capacity(4usize.pow(n_qubits as u32) - 1);
    for mask in 1..(1usize << n_qubits) {
        let positions: Vec<usize> = (0..n_qubits)
            .filter(|&p| mask & (1 << (n_qubits - 1 - p)) != 0)
            .collect();
        let combos = 3usize.pow(positions.len() as u32);
        for combo in 0..combos {
            let mut word = vec![0u8; n_qubits];
            let mut rest = combo;
            for &p in positions.iter().rev() {
                word[p] = (rest % 3) as u8 + 1;
                rest /= 3;
            }
            words.push(word);
        }
    }
    words
}

/// Tensor product of single-qubit Paulis selected by `word`, without the
/// basis normalization. These are the unitary (and Hermitian) vertex maps.
pub(crate) fn pauli_word_matrix(word: &[u8]) -> CMatrix {
    let mut m = pauli(word[0]);
    for &w in &word[1..] {
        m = kron(&m, &pauli(w));
    }
    m
}

/// Conventional label for a Pauli word, e.g. "IXZ".
pub fn pauli_word_label(word: &[u8]) -> String {
    word.iter()
        .map(|w| ['I', 'X', 'Y', 'Z'][*w as usize])
        .collect()
}

/// The 4ⁿ−1 non-identity Pauli tensor products, each divided by 2^{(n−1)/2}
/// so that `Tr(J_i J_j) = 2 δ_ij`.
pub fn pauli_tensor_basis(n_qubits: usize) -> Result<GeneratorBasis> {
    if n_qubits < 1 {
        return Err(Error::InvalidDimension {
            min: 1,
            got: n_qubits,
        });
    }
    let dim = 1usize << n_qubits;
    let scale = cr(1.0 / 2f64.powf((n_qubits as f64 - 1.0) / 2.0));
    let generators = pauli_words(n_qubits)
        .iter()
        .map(|w| pauli_word_matrix(w) * scale)
        .collect();
    Ok(GeneratorBasis {
        dim,
        kind: BasisKind::PauliTensor,
        generators,
        norm_constant: norm_constant(dim),
    })
}

/// ρ = (1/N)(I + c Σ a_i J_i). Hermitian and unit-trace by construction;
/// positivity is the caller's concern.
pub fn density_from_coherence(
    a: &CoherenceVector,
    basis: &GeneratorBasis,
) -> Result<DensityMatrix> {
    if a.dim() != basis.dim() || a.components().len() != basis.len() {
        return Err(Error::DimensionMismatch(format!(
            "coherence vector for N={} against basis for N={}",
            a.dim(),
            basis.dim()
        )));
    }
    let n = basis.dim();
    let mut m = CMatrix::identity(n, n);
    let c = basis.norm_constant();
    for (ai, j) in a.components().iter().zip(basis.generators()) {
        m += j * cr(c * ai);
    }
    m /= cr(n as f64);
    Ok(DensityMatrix::from_matrix_unchecked(m))
}

/// a_i = N·Tr(ρ J_i)/(2c), the inverse of [`density_from_coherence`].
pub fn coherence_from_density(
    rho: &DensityMatrix,
    basis: &GeneratorBasis,
) -> Result<CoherenceVector> {
    if rho.dim() != basis.dim() {
        return Err(Error::DimensionMismatch(format!(
            "state for N={} against basis for N={}",
            rho.dim(),
            basis.dim()
        )));
    }
    let trace_err = (rho.trace() - cr(1.0)).norm();
    if trace_err > STATE_TRACE_TOL {
        return Err(Error::MalformedState(format!(
            "trace deviates from 1 by {trace_err:.3e}"
        )));
    }
    let n = basis.dim() as f64;
    let c = basis.norm_constant();
    let a = basis
        .generators()
        .iter()
        .map(|j| (rho.matrix() * j).trace().re * n / (2.0 * c))
        .collect();
    CoherenceVector::new(basis.dim(), a)
}

/// Per-generator invariant violations; report-only, no thresholds applied.
#[derive(Debug, Clone)]
pub struct BasisValidation {
    /// max |J_i − J_i†| per generator.
    pub hermiticity: Vec<f64>,
    /// |Tr J_i| per generator.
    pub tracelessness: Vec<f64>,
    /// max_{ij} |Tr(J_i J_j) − 2δ_ij| over the full pairwise matrix.
    pub orthogonality: f64,
}

impl BasisValidation {
    /// Largest violation across all three invariant families.
    pub fn max_violation(&self) -> f64 {
        self.hermiticity
            .iter()
            .chain(self.tracelessness.iter())
            .copied()
            .fold(self.orthogonality, f64::max)
    }

    pub fn all_within(&self, tol: f64) -> bool {
        self.max_violation() <= tol
    }
}

/// Measures how far a basis is from Hermitian, traceless and
/// trace-orthonormal (`Tr(J_i J_j) = 2δ_ij`).
pub fn validate_basis(basis: &GeneratorBasis) -> BasisValidation {
    let hermiticity = basis
        .generators()
        .iter()
        .map(crate::linalg::hermiticity_violation)
        .collect();
    let tracelessness = basis
        .generators()
        .iter()
        .map(|j| j.trace().norm())
        .collect();
    let mut orthogonality: f64 = 0.0;
    for (i, ji) in basis.generators().iter().enumerate() {
        for (j, jj) in basis.generators().iter().enumerate() {
            let want = if i == j { 2.0 } else { 0.0 };
            let got = (ji * jj).trace();
            orthogonality = orthogonality.max((got - cr(want)).norm());
        }
    }
    BasisValidation {
        hermiticity,
        tracelessness,
        orthogonality,
    }
}

/// Purity Tr ρ², real for Hermitian inputs.
pub fn purity(rho: &DensityMatrix) -> f64 {
    (rho.matrix() * rho.matrix()).trace().re
}
