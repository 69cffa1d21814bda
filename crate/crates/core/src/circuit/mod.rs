//! Superconducting-circuit realization: tunable transmons, inductive ZZ
//! coupling, capacitive XX coupling, and the pipeline from circuit energies
//! to ladder and Hubbard parameters.
//!
//! Energies are accepted in any consistent unit, with `hbar = 1` so that
//! oscillator frequencies are energies.

mod pipeline;
mod transmon;
mod xx;
mod zz;

pub use pipeline::{
    circuit_to_hubbard, ut_closed_form, ut_curve, ut_curve_for, ut_gamma, ut_turnover,
    AccessibleWindow, CircuitReport, DeviceChain, Feasibility, UtPoint,
};
pub use transmon::{duffing_levels, transmon_splitting, DuffingLevels, TransmonSpec};
pub use xx::{capacitance_matrix, capacitance_matrix_check, capacitance_slope, gx_bond, gx_from_circuit};
pub use zz::{
    effective_gz_numeric, gz_from_circuit, CouplerSpec, GzComparison, GzModel, GzOptions,
};
