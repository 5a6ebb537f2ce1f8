pub mod descent;
pub mod presets;
pub mod space;

pub use descent::{
    exact_sequence, general_k_sequence, is_k_sequence_with_witness, pullback_constant, pullback_observable, standard_k_sequence,
    verify_descent, DescentSequence,
};
pub use presets::{build_jet, flat_tsm, mtheory, sigma, tqm, JetFieldSpec, JetPreset, QkStructure, TsmPreset};
pub use space::JetSpace;
