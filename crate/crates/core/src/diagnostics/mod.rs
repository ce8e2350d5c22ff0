//! Trace recording, the CSV trace format, and post-hoc invariant checks.
//!
//! Checkers only look at the raw trace columns; window maxima and envelopes
//! are recomputed here rather than read back from solver bookkeeping.

mod checks;
mod io;
mod trace;

pub use checks::{
    check_acceptance, check_envelope, check_envelope_values, check_gamma_step_product,
    check_level_set, check_vanishing_steps, gamma_bound, run_all, window_maxima,
    AcceptanceViolation, CheckOutcome, CheckSettings, GammaBound, CHECK_TOL,
};
pub use io::{meta_path, read_trace, trace_from_csv, trace_to_csv, write_trace, TRACE_HEADER};
pub use trace::{x0_hash, IterateRecord, StepRecord, Trace};
