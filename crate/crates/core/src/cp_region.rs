//! Complete-positivity decisions and closed-form CP-region boundaries.
//!
//! A map is completely positive iff its Choi matrix B is positive
//! semi-definite, so the verdict is read off the Hermitian spectrum of B.
//! For N = 2, 3, 4 the spectrum is also available in closed form; the two
//! routes are kept independent and checked against each other in tests.
//!
//! All closed-form values are on the Choi scale (they sum to N), matching
//! the numeric spectrum elementwise.

use crate::channel::{ChannelBuilder, CompressionMap};
use crate::error::{Error, Result};
use crate::linalg::hermitian_eigenvalues;
use crate::su_basis::{BasisKind, GeneratorBasis};

/// Default tolerance on the minimum Choi eigenvalue: roughly a thousand
/// times the eigensolver backward error on the 16×16 case.
pub const CP_TOL: f64 = 1e-9;
/// Default width of the band around zero classified as Boundary.
pub const BOUNDARY_TOL: f64 = 1e-7;

/// Even-parity sign patterns of the qubit Choi spectrum; these are also
/// the tetrahedron vertices (1,1,1), (1,−1,−1), (−1,1,−1), (−1,−1,1).
const QUBIT_SIGNS: [[f64; 3]; 4] = [
    [1.0, 1.0, 1.0],
    [1.0, -1.0, -1.0],
    [-1.0, 1.0, -1.0],
    [-1.0, -1.0, 1.0],
];

/// Sign patterns of the sixteen affine Choi eigenvalues of the two-qubit
/// compression map, indexed against the ν₁…ν₁₅ generator order
/// (I⊗σ_i, σ_i⊗I, σ₁⊗σ_i, σ₂⊗σ_i, σ₃⊗σ_i). Each row is also the
/// commutation pattern of one Pauli-tensor unitary, so the rows double as
/// the sixteen simplex vertices.
#[rustfmt::skip]
const QUART_SIGNS: [[f64; 15]; 16] = [
    [ 1.0,  1.0,  1.0,  1.0, -1.0, -1.0,  1.0,  1.0,  1.0, -1.0, -1.0, -1.0, -1.0, -1.0, -1.0],
    [ 1.0,  1.0,  1.0, -1.0,  1.0, -1.0, -1.0, -1.0, -1.0,  1.0,  1.0,  1.0, -1.0, -1.0, -1.0],
    [ 1.0, -1.0, -1.0,  1.0,  1.0,  1.0,  1.0, -1.0, -1.0,  1.0, -1.0, -1.0,  1.0, -1.0, -1.0],
    [ 1.0, -1.0, -1.0, -1.0, -1.0,  1.0, -1.0,  1.0,  1.0, -1.0,  1.0,  1.0,  1.0, -1.0, -1.0],
    [-1.0,  1.0, -1.0,  1.0,  1.0,  1.0, -1.0,  1.0, -1.0, -1.0,  1.0, -1.0, -1.0,  1.0, -1.0],
    [-1.0,  1.0, -1.0, -1.0, -1.0,  1.0,  1.0, -1.0,  1.0,  1.0, -1.0,  1.0, -1.0,  1.0, -1.0],
    [-1.0, -1.0,  1.0,  1.0, -1.0, -1.0, -1.0, -1.0,  1.0,  1.0,  1.0, -1.0,  1.0,  1.0, -1.0],
    [-1.0, -1.0,  1.0, -1.0,  1.0, -1.0,  1.0,  1.0, -1.0, -1.0, -1.0,  1.0,  1.0,  1.0, -1.0],
    [-1.0, -1.0,  1.0, -1.0, -1.0,  1.0,  1.0,  1.0, -1.0,  1.0,  1.0, -1.0, -1.0, -1.0,  1.0],
    [-1.0, -1.0,  1.0,  1.0,  1.0,  1.0, -1.0, -1.0,  1.0, -1.0, -1.0,  1.0, -1.0, -1.0,  1.0],
    [-1.0,  1.0, -1.0, -1.0,  1.0, -1.0,  1.0, -1.0,  1.0, -1.0,  1.0, -1.0,  1.0, -1.0,  1.0],
    [-1.0,  1.0, -1.0,  1.0, -1.0, -1.0, -1.0,  1.0, -1.0,  1.0, -1.0,  1.0,  1.0, -1.0,  1.0],
    [ 1.0, -1.0, -1.0, -1.0,  1.0, -1.0, -1.0,  1.0,  1.0,  1.0, -1.0, -1.0, -1.0,  1.0,  1.0],
    [ 1.0, -1.0, -1.0,  1.0, -1.0, -1.0,  1.0, -1.0, -1.0, -1.0,  1.0,  1.0, -1.0,  1.0,  1.0],
    [ 1.0,  1.0,  1.0, -1.0, -1.0,  1.0, -1.0, -1.0, -1.0, -1.0, -1.0, -1.0,  1.0,  1.0,  1.0],
    [ 1.0,  1.0,  1.0,  1.0,  1.0,  1.0,  1.0,  1.0,  1.0,  1.0,  1.0,  1.0,  1.0,  1.0,  1.0],
];

/// Closed-form Choi-spectrum data for the dimensions where it exists.
#[derive(Debug, Clone, PartialEq)]
pub enum ClosedFormValues {
    /// Four affine eigenvalues (1 + s·ν)/2 over even sign patterns.
    Qubit { lambdas: [f64; 4] },
    /// Six hyperplane eigenvalues plus the coupled 3×3 block: its trace
    /// h₇, second symmetric function s₁, determinant s₂, and spectrum.
    Qutrit {
        h: [f64; 6],
        h7: f64,
        s1: f64,
        s2: f64,
        block_eigenvalues: [f64; 3],
    },
    /// Sixteen affine eigenvalues (1 + s·ν)/4.
    Quart { lambdas: [f64; 16] },
}

impl ClosedFormValues {
    pub fn dim(&self) -> usize {
        match self {
            ClosedFormValues::Qubit { .. } => 2,
            ClosedFormValues::Qutrit { .. } => 3,
            ClosedFormValues::Quart { .. } => 4,
        }
    }

    /// The full implied Choi spectrum (length N²), ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut eigs = match self {
            ClosedFormValues::Qubit { lambdas } => lambdas.to_vec(),
            ClosedFormValues::Qutrit {
                h,
                block_eigenvalues,
                ..
            } => h.iter().chain(block_eigenvalues.iter()).copied().collect(),
            ClosedFormValues::Quart { lambdas } => lambdas.to_vec(),
        };
        eigs.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
        eigs
    }

    /// CP verdict from the closed form alone. For the qutrit this is the
    /// hyperplane conditions together with h₇, s₁, s₂ ≥ 0; elsewhere it is
    /// nonnegativity of every affine eigenvalue.
    pub fn is_cp(&self, tol: f64) -> bool {
        match self {
            ClosedFormValues::Qubit { lambdas } => lambdas.iter().all(|&l| l >= -tol),
            ClosedFormValues::Qutrit { h, h7, s1, s2, .. } => {
                h.iter().all(|&l| l >= -tol) && *h7 >= -tol && *s1 >= -tol && *s2 >= -tol
            }
            ClosedFormValues::Quart { lambdas } => lambdas.iter().all(|&l| l >= -tol),
        }
    }

    /// Named values for reporting, in the conventional order.
    pub fn named_values(&self) -> Vec<(String, f64)> {
        match self {
            ClosedFormValues::Qubit { lambdas } => lambdas
                .iter()
                .enumerate()
                .map(|(i, &v)| (format!("lambda_{}", i + 1), v))
                .collect(),
            ClosedFormValues::Qutrit { h, h7, s1, s2, .. } => {
                let mut out: Vec<(String, f64)> = h
                    .iter()
                    .enumerate()
                    .map(|(i, &v)| (format!("h{}", i + 1), v))
                    .collect();
                out.push(("h7".into(), *h7));
                out.push(("s1".into(), *s1));
                out.push(("s2".into(), *s2));
                out
            }
            ClosedFormValues::Quart { lambdas } => lambdas
                .iter()
                .enumerate()
                .map(|(i, &v)| (format!("lambda_{}", i + 1), v))
                .collect(),
        }
    }
}

/// The four qubit Choi eigenvalues (1 + s₁ν₁ + s₂ν₂ + s₃ν₃)/2 over the
/// sign patterns with s₁s₂s₃ = +1; all four nonnegative iff ν lies in the
/// tetrahedron with vertices (1,1,1), (1,−1,−1), (−1,1,−1), (−1,−1,1).
pub fn qubit_closed_form(nu: &[f64]) -> Result<ClosedFormValues> {
    if nu.len() != 3 {
        return Err(Error::LengthMismatch {
            context: "qubit compression vector",
            expected: 3,
            got: nu.len(),
        });
    }
    let mut lambdas = [0.0; 4];
    for (l, signs) in lambdas.iter_mut().zip(QUBIT_SIGNS.iter()) {
        *l = (1.0 + signs[0] * nu[0] + signs[1] * nu[1] + signs[2] * nu[2]) / 2.0;
    }
    Ok(ClosedFormValues::Qubit { lambdas })
}

/// The symmetric 3×3 block of the qutrit Choi matrix that carries the
/// three non-hyperplane eigenvalues.
pub fn qutrit_coupled_block(nu: &[f64]) -> [[f64; 3]; 3] {
    let d = (2.0 + 3.0 * nu[2] + nu[7]) / 6.0;
    let g = (1.0 + 2.0 * nu[7]) / 3.0;
    let p = (nu[0] + nu[1]) / 2.0;
    let q = (nu[3] + nu[4]) / 2.0;
    let r = (nu[5] + nu[6]) / 2.0;
    [[d, p, q], [p, d, r], [q, r, g]]
}

/// The expanded characteristic-equation coefficients of the coupled block
/// (trace, second symmetric function, determinant) as explicit polynomials
/// in ν. Kept as an independent route against [`qutrit_closed_form`],
/// which reads the same three quantities off the block matrix itself.
pub fn qutrit_characteristic_sums_expanded(nu: &[f64]) -> (f64, f64, f64) {
    let (n1, n2, n3, n4, n5, n6, n7, n8) = (
        nu[0], nu[1], nu[2], nu[3], nu[4], nu[5], nu[6], nu[7],
    );
    let h7 = 1.0 + n3 + n8;
    let s1 = (-3.0 * (n1 + n2).powi(2) + 3.0 * n3 * n3
        - 3.0 * (n4 + n5).powi(2)
        - 3.0 * (n6 + n7).powi(2)
        + (2.0 + n8) * (2.0 + 3.0 * n8)
        + 2.0 * n3 * (4.0 + 5.0 * n8))
        / 12.0;
    let s2 = (54.0 * n2 * (n4 + n5) * (n6 + n7)
        - 18.0 * n1 * n1 * (1.0 + 2.0 * n8)
        - 18.0 * n2 * n2 * (1.0 + 2.0 * n8)
        + 18.0 * n1 * (3.0 * (n4 + n5) * (n6 + n7) - 2.0 * n2 * (1.0 + 2.0 * n8))
        + (2.0 + 3.0 * n3 + n8)
            * (4.0 - 9.0 * (n4 + n5).powi(2) - 9.0 * (n6 + n7).powi(2)
                + 10.0 * n8
                + 4.0 * n8 * n8
                + 6.0 * n3 * (1.0 + 2.0 * n8)))
        / 216.0;
    (h7, s1, s2)
}

/// Qutrit closed form: six hyperplane eigenvalues plus the coupled block's
/// trace (h₇), second symmetric function (s₁) and determinant (s₂). The ν
/// ordering is the λ₁…λ₈ Gell-Mann order of [`crate::su_basis::gell_mann_basis`].
pub fn qutrit_closed_form(nu: &[f64]) -> Result<ClosedFormValues> {
    if nu.len() != 8 {
        return Err(Error::LengthMismatch {
            context: "qutrit compression vector",
            expected: 8,
            got: nu.len(),
        });
    }
    let h = [
        (2.0 + 3.0 * nu[3] - 3.0 * nu[4] - 2.0 * nu[7]) / 6.0,
        (2.0 - 3.0 * nu[3] + 3.0 * nu[4] - 2.0 * nu[7]) / 6.0,
        (2.0 + 3.0 * nu[5] - 3.0 * nu[6] - 2.0 * nu[7]) / 6.0,
        (2.0 - 3.0 * nu[5] + 3.0 * nu[6] - 2.0 * nu[7]) / 6.0,
        (2.0 + 3.0 * nu[0] - 3.0 * nu[1] - 3.0 * nu[2] + nu[7]) / 6.0,
        (2.0 - 3.0 * nu[0] + 3.0 * nu[1] - 3.0 * nu[2] + nu[7]) / 6.0,
    ];
    let m = qutrit_coupled_block(nu);
    let h7 = m[0][0] + m[1][1] + m[2][2];
    let s1 = m[0][0] * m[1][1] - m[0][1] * m[0][1] + m[0][0] * m[2][2] - m[0][2] * m[0][2]
        + m[1][1] * m[2][2]
        - m[1][2] * m[1][2];
    let s2 = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[1][2])
        - m[0][1] * (m[0][1] * m[2][2] - m[1][2] * m[0][2])
        + m[0][2] * (m[0][1] * m[1][2] - m[1][1] * m[0][2]);
    let block = crate::linalg::CMatrix::from_fn(3, 3, |r, c| crate::linalg::cr(m[r][c]));
    let block_eigenvalues = hermitian_eigenvalues(&block);
    Ok(ClosedFormValues::Qutrit {
        h,
        h7,
        s1,
        s2,
        block_eigenvalues: [
            block_eigenvalues[0],
            block_eigenvalues[1],
            block_eigenvalues[2],
        ],
    })
}

/// The sixteen affine Choi eigenvalues (1 + s·ν)/4 of the two-qubit
/// compression map; the ν ordering is the Pauli-tensor order of
/// [`crate::su_basis::pauli_tensor_basis`]. All sixteen nonnegative iff
/// the map is CP (the region is a simplex).
pub fn quart_closed_form(nu: &[f64]) -> Result<ClosedFormValues> {
    if nu.len() != 15 {
        return Err(Error::LengthMismatch {
            context: "two-qubit compression vector",
            expected: 15,
            got: nu.len(),
        });
    }
    let mut lambdas = [0.0; 16];
    for (l, signs) in lambdas.iter_mut().zip(QUART_SIGNS.iter()) {
        let dot: f64 = signs.iter().zip(nu.iter()).map(|(s, v)| s * v).sum();
        *l = (1.0 + dot) / 4.0;
    }
    Ok(ClosedFormValues::Quart { lambdas })
}

/// The sixteen sign patterns of the two-qubit affine eigenvalues; row k
/// matches `lambda_{k+1}` of [`quart_closed_form`].
pub fn quart_sign_patterns() -> &'static [[f64; 15]; 16] {
    &QUART_SIGNS
}

/// The four even-parity qubit sign patterns (tetrahedron vertices).
pub fn qubit_sign_patterns() -> &'static [[f64; 3]; 4] {
    &QUBIT_SIGNS
}

/// Spectrum-based CP report for one map.
#[derive(Debug, Clone)]
pub struct CpReport {
    /// All N² Choi eigenvalues, ascending.
    pub eigenvalues: Vec<f64>,
    pub min_eigenvalue: f64,
    /// min_eigenvalue ≥ −tolerance.
    pub is_cp: bool,
    pub tolerance: f64,
    /// Present for the (dim, basis) combinations with a closed form, on
    /// unital maps only.
    pub closed_form: Option<ClosedFormValues>,
}

impl CpReport {
    /// Largest elementwise gap between the sorted numeric spectrum and the
    /// sorted closed-form spectrum, when the latter exists.
    pub fn closed_form_agreement(&self) -> Option<f64> {
        let cf = self.closed_form.as_ref()?;
        let want = cf.eigenvalues();
        Some(
            self.eigenvalues
                .iter()
                .zip(want.iter())
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max),
        )
    }
}

fn closed_form_for(map: &CompressionMap, basis: &GeneratorBasis) -> Option<ClosedFormValues> {
    if !map.is_unital() {
        return None;
    }
    match (map.dim(), basis.kind()) {
        (2, _) => qubit_closed_form(map.nu()).ok(),
        (3, BasisKind::GellMann) => qutrit_closed_form(map.nu()).ok(),
        (4, BasisKind::PauliTensor) => quart_closed_form(map.nu()).ok(),
        _ => None,
    }
}

/// Builds B for the map and reports its spectrum and CP verdict; attaches
/// the closed form when one applies to the (dim, basis) pair.
pub fn cp_report(builder: &ChannelBuilder, map: &CompressionMap, tol: f64) -> Result<CpReport> {
    if tol <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let b = builder.choi_matrix(map)?;
    let eigenvalues = hermitian_eigenvalues(&b);
    let min_eigenvalue = eigenvalues[0];
    Ok(CpReport {
        min_eigenvalue,
        is_cp: min_eigenvalue >= -tol,
        tolerance: tol,
        closed_form: closed_form_for(map, builder.basis()),
        eigenvalues,
    })
}

/// One-shot variant of [`cp_report`]; prefer a [`ChannelBuilder`] in loops.
pub fn is_cp(map: &CompressionMap, basis: &GeneratorBasis, tol: f64) -> Result<CpReport> {
    cp_report(&ChannelBuilder::new(basis.clone())?, map, tol)
}

/// Position of a map relative to the CP-region boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegionClass {
    Interior,
    Boundary,
    Exterior,
}

impl RegionClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            RegionClass::Interior => "interior",
            RegionClass::Boundary => "boundary",
            RegionClass::Exterior => "exterior",
        }
    }
}

/// Classifies by the minimum Choi eigenvalue: Exterior below
/// −boundary_tol, Boundary within ±boundary_tol, Interior above.
pub fn classify(
    map: &CompressionMap,
    basis: &GeneratorBasis,
    boundary_tol: f64,
) -> Result<RegionClass> {
    if boundary_tol <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "boundary tolerance must be positive, got {boundary_tol}"
        )));
    }
    let report = is_cp(map, basis, CP_TOL)?;
    Ok(classify_min_eigenvalue(report.min_eigenvalue, boundary_tol))
}

pub(crate) fn classify_min_eigenvalue(min_eig: f64, boundary_tol: f64) -> RegionClass {
    if min_eig < -boundary_tol {
        RegionClass::Exterior
    } else if min_eig <= boundary_tol {
        RegionClass::Boundary
    } else {
        RegionClass::Interior
    }
}
