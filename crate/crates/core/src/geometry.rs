//! Geometric exploration of the CP region: Monte-Carlo sampling, extremal
//! (vertex) maps, convex decomposition over them, the 2ⁿ simplex test, and
//! boundary-curvature probing for the qutrit.

use crate::channel::{ChannelBuilder, CompressionMap};
use crate::cp_region::{self, classify_min_eigenvalue, RegionClass};
use crate::error::{Error, Result};
use crate::linalg::{commutator_max_abs, cr, hermitian_eigen, hermitian_eigenvalues, CMatrix};
use crate::su_basis::{pauli_word_label, pauli_word_matrix, pauli_words, BasisKind, GeneratorBasis};
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;

/// Samples per RNG substream. Each batch reseeds from (seed, batch index),
/// so results do not depend on how batches are scheduled across workers.
const SAMPLE_BATCH: usize = 4096;

/// One sampled compression vector with its CP data.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplePoint {
    pub nu: Vec<f64>,
    pub min_eigenvalue: f64,
    pub is_cp: bool,
}

/// A deterministic Monte-Carlo sample of the cube [−1,1]^{N²−1}.
#[derive(Debug, Clone)]
pub struct RegionSample {
    pub dim: usize,
    pub seed: u64,
    pub n_total: usize,
    pub tolerance: f64,
    pub points: Vec<SamplePoint>,
}

impl RegionSample {
    /// Fraction of sampled maps that are completely positive.
    pub fn cp_fraction(&self) -> f64 {
        if self.points.is_empty() {
            return 0.0;
        }
        self.points.iter().filter(|p| p.is_cp).count() as f64 / self.points.len() as f64
    }
}

fn batch_rng(seed: u64, batch: u64) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(batch);
    rng
}

/// Draws `n_samples` compression vectors uniformly from [−1,1]^{N²−1} with
/// a seeded generator and evaluates CP for each. Identical (seed,
/// n_samples) give bit-identical output, independent of worker count.
pub fn sample_region(
    basis: &GeneratorBasis,
    n_samples: usize,
    seed: u64,
    tol: f64,
) -> Result<RegionSample> {
    if n_samples < 1 {
        return Err(Error::InvalidArgument(
            "sample count must be at least 1".into(),
        ));
    }
    if tol <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let builder = ChannelBuilder::new(basis.clone())?;
    let dim = basis.dim();
    let k = dim * dim - 1;
    let n_batches = n_samples.div_ceil(SAMPLE_BATCH);
    let batches: Vec<Vec<SamplePoint>> = (0..n_batches)
        .into_par_iter()
        .map(|b| {
            let mut rng = batch_rng(seed, b as u64);
            let count = SAMPLE_BATCH.min(n_samples - b * SAMPLE_BATCH);
            let mut points = Vec::with_capacity(count);
            for _ in 0..count {
                let nu: Vec<f64> = (0..k).map(|_| rng.random_range(-1.0..=1.0)).collect();
                let map = CompressionMap::unital(dim, nu.clone()).expect("lengths match");
                let b_matrix = builder.choi_matrix(&map).expect("dims match");
                let min_eigenvalue = hermitian_eigenvalues(&b_matrix)[0];
                points.push(SamplePoint {
                    nu,
                    min_eigenvalue,
                    is_cp: min_eigenvalue >= -tol,
                });
            }
            points
        })
        .collect();
    Ok(RegionSample {
        dim,
        seed,
        n_total: n_samples,
        tolerance: tol,
        points: batches.into_concat(),
    })
}

trait Concat<T> {
    fn into_concat(self) -> Vec<T>;
}

impl<T> Concat<T> for Vec<Vec<T>> {
    fn into_concat(self) -> Vec<T> {
        let mut out = Vec::with_capacity(self.iter().map(Vec::len).sum());
        for v in self {
            out.extend(v);
        }
        out
    }
}

/// An extremal map ρ ↦ UρU† with U a Pauli-tensor unitary (index 0 is the
/// identity). In ν-space it sits at the ±1 commutation pattern of U.
#[derive(Debug, Clone)]
pub struct VertexMap {
    /// 0 for the identity, otherwise 1-based generator index.
    pub generator_index: usize,
    /// Conventional Pauli-word label, e.g. "XI".
    pub label: String,
    /// The unnormalized Pauli-tensor unitary.
    pub unitary: CMatrix,
    /// +1 where U commutes with J_j, −1 where it anticommutes.
    pub nu_pattern: Vec<f64>,
}

fn commutation_pattern(u: &CMatrix, basis: &GeneratorBasis) -> Result<Vec<f64>> {
    let mut pattern = Vec::with_capacity(basis.len());
    for (j, gen) in basis.generators().iter().enumerate() {
        let comm = crate::linalg::max_abs(&(u * gen - gen * u));
        let anti = crate::linalg::max_abs(&(u * gen + gen * u));
        if comm < 1e-10 && anti > 1e-10 {
            pattern.push(1.0);
        } else if anti < 1e-10 && comm > 1e-10 {
            pattern.push(-1.0);
        } else {
            return Err(Error::UnsupportedBasis(format!(
                "generator {} neither commutes nor anticommutes with the unitary",
                j + 1
            )));
        }
    }
    Ok(pattern)
}

/// Enumerates the N² vertex maps 1ρ1, J_iρJ_i of a Pauli-tensor basis and
/// their ν-space patterns, verifying each pattern's Choi matrix is rank
/// one with top eigenvalue N.
///
/// Commutation sign patterns are only ±1-valued for Pauli-tensor
/// generators, so Gell-Mann bases are rejected except for N = 2 where the
/// two bases coincide.
pub fn vertices_from_unitaries(basis: &GeneratorBasis) -> Result<Vec<VertexMap>> {
    let n_qubits = match (basis.kind(), basis.dim()) {
        (BasisKind::PauliTensor, d) => d.trailing_zeros() as usize,
        (BasisKind::GellMann, 2) => 1,
        (BasisKind::GellMann, d) => {
            return Err(Error::UnsupportedBasis(format!(
                "vertex enumeration needs a Pauli-tensor basis; Gell-Mann generators for N={d} are not unitaries"
            )));
        }
    };
    let dim = basis.dim();
    let builder = ChannelBuilder::new(basis.clone())?;
    let mut vertices = Vec::with_capacity(dim * dim);
    let identity = CMatrix::identity(dim, dim);
    let words = pauli_words(n_qubits);
    for index in 0..=words.len() {
        let (unitary, label) = if index == 0 {
            (identity.clone(), "I".repeat(n_qubits))
        } else {
            let w = &words[index - 1];
            (pauli_word_matrix(w), pauli_word_label(w))
        };
        let nu_pattern = commutation_pattern(&unitary, basis)?;
        let map = CompressionMap::unital(dim, nu_pattern.clone())?;
        let eigs = hermitian_eigenvalues(&builder.choi_matrix(&map)?);
        let top = eigs[eigs.len() - 1];
        let rest = eigs[..eigs.len() - 1]
            .iter()
            .map(|e| e.abs())
            .fold(0.0, f64::max);
        if (top - dim as f64).abs() > 1e-9 || rest > 1e-9 {
            return Err(Error::UnsupportedBasis(format!(
                "pattern for {label} is not a rank-one Choi point (top {top}, residual {rest:.3e})"
            )));
        }
        vertices.push(VertexMap {
            generator_index: index,
            label,
            unitary,
            nu_pattern,
        });
    }
    Ok(vertices)
}

/// Barycentric weights of ν over a set of vertex maps.
#[derive(Debug, Clone)]
pub struct ConvexDecomposition {
    /// One weight per vertex, summing to 1.
    pub weights: Vec<f64>,
    /// Max-norm reconstruction error of ν and of the weight sum.
    pub residual: f64,
}

impl ConvexDecomposition {
    /// Simplex membership: every weight nonnegative (up to float noise).
    pub fn is_convex(&self, tol: f64) -> bool {
        self.weights.iter().all(|&w| w >= -tol)
    }
}

/// Solves Σ_k w_k·pattern_k = ν with Σ_k w_k = 1. Needs exactly N²
/// vertices for ν of length N²−1 (the simplex case: one and two qubits,
/// conjecturally three).
pub fn convex_decomposition(nu: &[f64], vertices: &[VertexMap]) -> Result<ConvexDecomposition> {
    let k = nu.len();
    if vertices.len() != k + 1 {
        return Err(Error::DimensionMismatch(format!(
            "need {} vertices for a {k}-dimensional decomposition, got {}",
            k + 1,
            vertices.len()
        )));
    }
    let side = k + 1;
    let mut system = DMatrix::<f64>::zeros(side, side);
    for (col, v) in vertices.iter().enumerate() {
        if v.nu_pattern.len() != k {
            return Err(Error::DimensionMismatch(format!(
                "vertex {} pattern has length {}, expected {k}",
                v.generator_index,
                v.nu_pattern.len()
            )));
        }
        for row in 0..k {
            system[(row, col)] = v.nu_pattern[row];
        }
        system[(k, col)] = 1.0;
    }
    let mut rhs = DVector::<f64>::zeros(side);
    for (row, &x) in nu.iter().enumerate() {
        rhs[row] = x;
    }
    rhs[k] = 1.0;
    let lu = system.clone().lu();
    let weights = lu
        .solve(&rhs)
        .ok_or_else(|| Error::SingularSystem("degenerate vertex set".into()))?;
    let residual = (&system * &weights - &rhs)
        .iter()
        .map(|x| x.abs())
        .fold(0.0, f64::max);
    Ok(ConvexDecomposition {
        weights: weights.iter().copied().collect(),
        residual,
    })
}

/// Outcome of the 2ⁿ simplex-conjecture test.
///
/// The Choi matrix is affine in ν, `B(ν) = B(0) + Σ ν_j (B(e_j) − B(0))`,
/// so its eigenvalues are hyperplanes in ν exactly when the matrices
/// {B(e_j)} share eigenprojectors, i.e. all pairwise commute. The report
/// records the worst commutator and, over random ν, the gap between the
/// numeric spectrum of B(ν) and the affine prediction from the jointly
/// diagonal values.
#[derive(Debug, Clone)]
pub struct SimplexConjectureReport {
    pub n_qubits: usize,
    pub dim: usize,
    pub trials: usize,
    pub seed: u64,
    pub tolerance: f64,
    /// max over i<j of max |[B(e_i), B(e_j)]| entrywise.
    pub max_commutator: f64,
    /// max over trials of the sorted elementwise spectrum gap.
    pub max_spectrum_deviation: f64,
    pub commutators_pass: bool,
    pub spectra_pass: bool,
    pub simplex_consistent: bool,
}

/// Tests whether the CP region of the 2ⁿ-dimensional compression family is
/// simplex-consistent: ν-independent eigenprojectors and affine spectra.
pub fn test_simplex_conjecture(
    n_qubits: usize,
    trials: usize,
    seed: u64,
    tol: f64,
) -> Result<SimplexConjectureReport> {
    if n_qubits < 1 {
        return Err(Error::InvalidDimension {
            min: 1,
            got: n_qubits,
        });
    }
    if trials < 2 {
        return Err(Error::InvalidArgument(
            "conjecture test needs at least 2 trials".into(),
        ));
    }
    if tol <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let basis = crate::su_basis::pauli_tensor_basis(n_qubits)?;
    let dim = basis.dim();
    let k = dim * dim - 1;
    let builder = ChannelBuilder::new(basis)?;

    // Choi matrices at the ν-space basis points; B(0) = I/N commutes with
    // everything, so pairwise commutation of these settles the question.
    let unit_maps: Vec<CMatrix> = (0..k)
        .map(|j| {
            let mut nu = vec![0.0; k];
            nu[j] = 1.0;
            builder.choi_matrix(&CompressionMap::unital(dim, nu).expect("length"))
        })
        .collect::<Result<_>>()?;

    let pairs: Vec<(usize, usize)> = (0..k)
        .flat_map(|i| ((i + 1)..k).map(move |j| (i, j)))
        .collect();
    let max_commutator = pairs
        .par_iter()
        .map(|&(i, j)| commutator_max_abs(&unit_maps[i], &unit_maps[j]))
        .reduce(|| 0.0, f64::max);

    // Common eigenbasis from a generic random combination; generic
    // coefficients split any accidental degeneracy of a single B(e_j).
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut generic = CMatrix::zeros(dim * dim, dim * dim);
    for m in &unit_maps {
        generic += m * cr(rng.random_range(0.5..1.5));
    }
    let (_, q) = hermitian_eigen(&generic);
    // Jointly diagonal values d_j[k] of each B(e_j) in that basis.
    let diag_values: Vec<Vec<f64>> = unit_maps
        .iter()
        .map(|m| {
            let d = q.adjoint() * m * &q;
            (0..dim * dim).map(|i| d[(i, i)].re).collect()
        })
        .collect();

    let inv_dim = 1.0 / dim as f64;
    let mut max_spectrum_deviation: f64 = 0.0;
    for _ in 0..trials {
        let nu: Vec<f64> = (0..k).map(|_| rng.random_range(-1.0..=1.0)).collect();
        let map = CompressionMap::unital(dim, nu.clone())?;
        let numeric = hermitian_eigenvalues(&builder.choi_matrix(&map)?);
        // Affine prediction: B(ν) = (1 − Σν_j)·I/N + Σ ν_j B(e_j).
        let base = 1.0 - nu.iter().sum::<f64>();
        let mut predicted: Vec<f64> = (0..dim * dim)
            .map(|i| base * inv_dim + nu.iter().zip(&diag_values).map(|(v, d)| v * d[i]).sum::<f64>())
            .collect();
        predicted.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
        let dev = numeric
            .iter()
            .zip(predicted.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        max_spectrum_deviation = max_spectrum_deviation.max(dev);
    }

    let commutators_pass = max_commutator <= tol;
    let spectra_pass = max_spectrum_deviation <= tol;
    Ok(SimplexConjectureReport {
        n_qubits,
        dim,
        trials,
        seed,
        tolerance: tol,
        max_commutator,
        max_spectrum_deviation,
        commutators_pass,
        spectra_pass,
        simplex_consistent: commutators_pass && spectra_pass,
    })
}

/// The named qutrit boundary constraints.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum QutritConstraint {
    /// Hyperplanes h₁…h₆ and the trace condition h₇ (1-based index).
    Hyperplane(u8),
    /// The second-degree surface.
    SurfaceS1,
    /// The third-degree surface.
    SurfaceS2,
}

impl QutritConstraint {
    pub fn name(&self) -> String {
        match self {
            QutritConstraint::Hyperplane(i) => format!("h{i}"),
            QutritConstraint::SurfaceS1 => "s1".into(),
            QutritConstraint::SurfaceS2 => "s2".into(),
        }
    }

    fn all() -> [QutritConstraint; 9] {
        [
            QutritConstraint::Hyperplane(1),
            QutritConstraint::Hyperplane(2),
            QutritConstraint::Hyperplane(3),
            QutritConstraint::Hyperplane(4),
            QutritConstraint::Hyperplane(5),
            QutritConstraint::Hyperplane(6),
            QutritConstraint::Hyperplane(7),
            QutritConstraint::SurfaceS1,
            QutritConstraint::SurfaceS2,
        ]
    }
}

/// One boundary intersection found by ray probing.
#[derive(Debug, Clone)]
pub struct BoundaryHit {
    /// The boundary point in ν-space.
    pub nu: Vec<f64>,
    /// Distance from the origin along the ray.
    pub radius: f64,
    /// Constraints vanishing at the point (smallest |value|, with ties).
    pub active: Vec<QutritConstraint>,
    /// |value| of the tightest constraint.
    pub min_abs_value: f64,
}

/// Counts of active boundary constraints over all probes.
#[derive(Debug, Clone, Default)]
pub struct BoundaryProbeReport {
    pub n_probes: usize,
    pub seed: u64,
    pub hits: Vec<BoundaryHit>,
    /// Per-constraint activity counts in the order h₁…h₇, s₁, s₂.
    pub counts: [usize; 9],
    /// Probes where two or more constraints tied at the boundary.
    pub multi_active: usize,
    /// Whether any probe ended on s₁ or s₂ — the curvature witness.
    pub curvature_witnessed: bool,
}

const BISECTION_ITERATIONS: usize = 60;
const ACTIVE_TIE_TOL: f64 = 1e-8;

fn qutrit_constraint_values(nu: &[f64]) -> [f64; 9] {
    let cf = cp_region::qutrit_closed_form(nu).expect("length 8");
    match cf {
        cp_region::ClosedFormValues::Qutrit { h, h7, s1, s2, .. } => {
            [h[0], h[1], h[2], h[3], h[4], h[5], h7, s1, s2]
        }
        _ => unreachable!(),
    }
}

/// Probes the qutrit CP boundary along seeded random rays from the origin
/// (bisection on the minimum Choi eigenvalue) and attributes each boundary
/// point to its active constraint among {h₁…h₇, s₁, s₂}. A hit on s₁ or
/// s₂ witnesses the curved part of the boundary.
pub fn facet_check(dim: usize, n_probes: usize, seed: u64) -> Result<BoundaryProbeReport> {
    if dim != 3 {
        return Err(Error::Unsupported(format!(
            "boundary curvature probing is specific to N=3, got N={dim}"
        )));
    }
    let basis = crate::su_basis::gell_mann_basis(3)?;
    let builder = ChannelBuilder::new(basis)?;
    let mut report = BoundaryProbeReport {
        n_probes,
        seed,
        ..Default::default()
    };
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let min_eig_at = |nu: &[f64]| -> f64 {
        let map = CompressionMap::unital(3, nu.to_vec()).expect("length 8");
        hermitian_eigenvalues(&builder.choi_matrix(&map).expect("dims")) [0]
    };
    for _ in 0..n_probes {
        // Direction uniform on the sphere via normalized Gaussians.
        let mut dir: Vec<f64> = (0..8)
            .map(|_| {
                // Box-Muller from two uniforms.
                let u1: f64 = rng.random_range(f64::MIN_POSITIVE..1.0);
                let u2: f64 = rng.random_range(0.0..1.0);
                (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
            })
            .collect();
        let norm = dir.iter().map(|x| x * x).sum::<f64>().sqrt();
        dir.iter_mut().for_each(|x| *x /= norm);

        // Bracket the boundary: the region is bounded (Tr B is fixed), so
        // the minimum eigenvalue must go negative along every ray.
        let at = |s: f64| -> Vec<f64> { dir.iter().map(|d| d * s).collect() };
        let mut hi = 1.0;
        while min_eig_at(&at(hi)) >= 0.0 {
            hi *= 2.0;
            assert!(hi < 1e6, "boundary bracket failed along {dir:?}");
        }
        let mut lo = 0.0;
        for _ in 0..BISECTION_ITERATIONS {
            let mid = 0.5 * (lo + hi);
            if min_eig_at(&at(mid)) >= 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let radius = 0.5 * (lo + hi);
        let nu = at(radius);
        let values = qutrit_constraint_values(&nu);
        let min_abs = values.iter().map(|v| v.abs()).fold(f64::INFINITY, f64::min);
        let tie = min_abs.max(ACTIVE_TIE_TOL);
        let active: Vec<QutritConstraint> = QutritConstraint::all()
            .iter()
            .zip(values.iter())
            .filter(|(_, v)| v.abs() <= tie)
            .map(|(c, _)| *c)
            .collect();
        for (slot, c) in QutritConstraint::all().iter().enumerate() {
            if active.contains(c) {
                report.counts[slot] += 1;
            }
        }
        if active.len() > 1 {
            report.multi_active += 1;
        }
        if active
            .iter()
            .any(|c| matches!(c, QutritConstraint::SurfaceS1 | QutritConstraint::SurfaceS2))
        {
            report.curvature_witnessed = true;
        }
        report.hits.push(BoundaryHit {
            nu,
            radius,
            active,
            min_abs_value: min_abs,
        });
    }
    Ok(report)
}

/// Classification of a point via a prebuilt builder (used by invariants
/// and the CLI around vertex patterns).
pub fn classify_with(
    builder: &ChannelBuilder,
    nu: &[f64],
    boundary_tol: f64,
) -> Result<RegionClass> {
    let map = CompressionMap::unital(builder.dim(), nu.to_vec())?;
    let eigs = hermitian_eigenvalues(&builder.choi_matrix(&map)?);
    Ok(classify_min_eigenvalue(eigs[0], boundary_tol))
}
