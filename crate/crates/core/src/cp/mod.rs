// Copyright 2026 lindfit contributors
// SPDX-License-Identifier: Apache-2.0

//! Complete positivity: Choi reshuffle, Kraus and Lindblad extraction,
//! CP filtering and the generator-level penalty.

mod choi;
mod generator;
mod lindblad;

pub use choi::{
    choi_from_supermatrix, cp_filter_propagator, cp_filter_with_mass, cp_penalty,
    identity_complement_projector, kraus_from_propagator, negative_square_sum, projected_choi,
    reshuffle, ChoiMatrix, ChoiSource, TRACE_TOL,
};
pub use generator::Supergenerator;
pub use lindblad::{
    default_cut, dissipator_from_lindblads, fix_phase, lindblads_from_generator, LindbladSystem,
    LindbladTerm, Provenance,
};
