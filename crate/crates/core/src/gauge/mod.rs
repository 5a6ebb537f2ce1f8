pub mod curvature;
pub mod forms;
pub mod observables;
pub mod preset;

pub use curvature::{build_curvature_algebra, curvature_algebra_checks, CurvatureAlgebraPreset};
pub use forms::{selfdual_project, TwoForm};
pub use observables::{build_lagrangian, k0_equivalence, tym_observables, tym_prepotential};
pub use preset::{build_gauge, build_gauge_jet, check_gauge_relations, gauge_structure, Chart, GaugeConfig, GaugeJetPreset, GaugeParams};
