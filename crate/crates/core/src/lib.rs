//! Anisotropic depolarizing channels on N-level quantum systems.
//!
//! The crate builds channels from componentwise compressions of the
//! coherence (generalized Bloch) vector, decides complete positivity from
//! the spectrum of the Choi matrix, evaluates closed-form CP-region
//! boundaries for N = 2, 3, 4, and explores the region geometrically:
//! Monte-Carlo volume sampling, extremal-map enumeration, convex
//! decomposition over vertex maps, and a numerical test of whether the CP
//! region is a simplex for N = 2ⁿ.
//!
//! Modules follow the pipeline:
//!
//! * [`su_basis`] — SU(N) generator bases and the ρ ↔ a conversion.
//! * [`channel`] — the T, M, A matrices and the Choi reshuffle B.
//! * [`cp_region`] — Choi-spectrum CP verdicts and closed-form boundaries.
//! * [`geometry`] — sampling, vertices, decompositions, simplex tests.

pub mod channel;
pub mod cp_region;
pub mod error;
pub mod geometry;
pub mod linalg;
pub mod su_basis;

pub use channel::{
    apply_channel, build_a, build_channel, build_m, build_t, reshuffle, ChannelBuilder,
    ChannelMatrices, CompressionMap,
};
pub use cp_region::{
    classify, is_cp, qubit_closed_form, quart_closed_form, qutrit_closed_form, ClosedFormValues,
    CpReport, RegionClass,
};
pub use error::{Error, Result};
pub use geometry::{
    convex_decomposition, facet_check, sample_region, test_simplex_conjecture,
    vertices_from_unitaries, BoundaryProbeReport, ConvexDecomposition, RegionSample,
    SimplexConjectureReport, VertexMap,
};
pub use su_basis::{
    coherence_from_density, density_from_coherence, gell_mann_basis, pauli_tensor_basis,
    validate_basis, BasisKind, BasisValidation, CoherenceVector, DensityMatrix, GeneratorBasis,
};
