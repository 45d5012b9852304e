//! Fundamental forms, curvature integrals, the Willmore equation and the monotonicity formula.

pub mod energy;
pub mod monotonicity;
pub mod quadrature;
pub mod shape;
pub mod willmore;

pub use energy::{annulus_energy, energies, EnergyReport, EnergyValues};
pub use quadrature::{GridSpec, Rule1D};
pub use shape::{shape_at, ShapeData};
pub use willmore::{weak_form_pairing, willmore_residual, WeakFormPairing, WillmoreResidual};
