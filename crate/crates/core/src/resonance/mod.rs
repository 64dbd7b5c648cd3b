//! Spectra, perfect-tunnelling search and closed-form resonance conditions.

mod forms;
mod search;

pub use forms::{
    audit_pair, audit_symmetric, qbs_residual_n2, qbs_residual_n2_printed, qbs_residual_n3,
    qbs_residual_n4, AuditedRoot, FormAudit, PairAudit, SymmetricAudit, AGREE_TOL,
};
pub use search::{
    find_perfect_tunnelling, find_zeros, golden_section_min, pair_resonance_k, pair_resonances,
    scan, scan_energy, symmetric_phase_roots, Method, Resonance, ResonanceReport, SearchOptions,
    Spectrum, SpectrumPoint, NEAR_MISS_TOL, PERFECT_TOL,
};
