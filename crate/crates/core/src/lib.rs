//! Exact and truncated-Fock engines for generating fan-states of a cavity
//! field with a sequence of Λ-type atoms.
//!
//! The analytic engine represents every field state as a finite weighted sum
//! of coherent states ([`CoherentSuperposition`]). A single atom passage maps
//! such a sum onto another such sum, so whole protocols are executed exactly.
//! The [`fock`] module re-runs the same physics on a truncated number basis and
//! serves as the independent oracle.
//!
//! ```
//! use fanstate_core::{fan_schedule, fan_state, fidelity, run_protocol, Outcome, C64};
//!
//! let alpha = C64::new(1.0, 0.0);
//! let steps = fan_schedule(2, Outcome::Minus).unwrap();
//! let run = run_protocol(alpha, &steps);
//! let target = fan_state(alpha, 1).unwrap();
//! assert!((fidelity(&run.final_state, &target).unwrap() - 1.0).abs() < 1e-12);
//! ```

pub mod coherent;
pub mod error;
pub mod fock;
pub mod phase_space;
pub mod protocol;

pub use num_complex::Complex64 as C64;

pub use coherent::{
    coherent_overlap, fan_normalization, fan_state, fidelity, gram_sum, gram_sum_brace, k_photon_coherent,
    CoherentSuperposition, CoherentTerm, GramSum, DEFAULT_MERGE_TOL,
};
pub use error::{Error, Result};
pub use fock::{
    apply_u_closed, apply_u_series, coherent_fock, default_dimension, oracle_protocol,
    project_outcome, truncation_tail, AtomMatrix, FockVector, JointState, OracleRun,
};
pub use phase_space::{peak_find, q_grid, q_value, GridBounds, Peak, QGrid};
pub use protocol::{
    closed_form_state, fan_schedule, kraus_step, p1_closed_form, pk_paper_formula,
    probability_symmetries_check, run_protocol, single_atom_probability, AtomPreparation,
    Outcome, ProtocolRun, ProtocolStep, TauOrder,
};
