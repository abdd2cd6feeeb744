//! Torsion-spring antenna mechanics.

mod profile;
mod solver;
mod spring;

pub use profile::{
    area_moment, catalogue_stiffness_nmm_per_deg, normalized_stiffness, paper_descending_profile, DiameterProfile,
    ProfileFile, ProfileKind, StiffnessProfile, COMPLIANT_NMM_PER_DEG, MEDIUM_NMM_PER_DEG, STIFF_NMM_PER_DEG,
};
pub use solver::{
    contact_moments, solve_equilibrium, AntennaConfig, AntennaContact, AntennaState, EquilibriumSolver, PointLoad,
    SolverOptions, DEFAULT_PENALTY_STIFFNESS, DEFAULT_TOTAL_LENGTH,
};
pub use spring::{nmm_per_deg_to_si, si_to_nmm_per_deg, torsion_stiffness, SpringSpec};
