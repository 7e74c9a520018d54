//! Maps of the annulus and the circle, their empirical measures, metric and
//! topological emergence, Bowen metrics and covering-number entropy.

mod emergence;
mod empirical;
mod katok;
mod periodic;
mod sampling;
mod systems;

pub use emergence::{horizontal_emergence_exact, metric_emergence_estimate, EmergenceEstimate, EmergenceExperiment};
pub use empirical::{empirical_measure, Binning, EmpiricalCloud};
pub use katok::{bowen_distance, katok_entropy_estimate, HorizonCount, KatokEstimate, MIN_SAMPLES_PER_BALL};
pub use periodic::{
    doubling_periodic_measures, topological_emergence_packing, Packing, PackingOrder, PeriodicFamily, PeriodicOrbit,
    MAX_PERIOD,
};
pub use sampling::{kronecker_square, stratified_unit, AnnulusLebesgue, CircleLebesgue, InvariantCircle, StartSampler};
pub use systems::{
    orbit, AnnulusPoint, CirclePoint, CircleRotation, DigitTail, DoublingMap, DoublingPoint, MapSystem, Omega,
    PhasePoint, SystemDescriptor, TwistMap,
};
