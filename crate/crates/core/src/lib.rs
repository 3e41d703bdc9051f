//! Exact measures on finite path spaces, their disintegrations and tensor
//! products, and the pin-and-reglue operators whose iterates drive any
//! finitely supported path measure to its Markov hull.
//!
//! The crate is generic over a [`weight::Weight`] scalar with two
//! instantiations: arbitrary-precision rationals for exact arithmetic and
//! `f64` for floating point with pinned tolerances.

pub mod cli;
pub mod cylinder;
pub mod disintegration;
pub mod error;
pub mod generate;
pub mod group;
pub mod hull;
pub mod io;
pub mod markov;
pub mod measure;
pub mod selfcheck;
pub mod space;
pub mod tensor;
pub mod weight;

pub use cylinder::{default_test_family, enumerate_test_functions, CylinderFunction};
pub use disintegration::{check_two_time_mixture, Disintegration, TwoTimeDisintegration};
pub use error::{Error, Result};
pub use generate::{generate, random_measure, random_path, random_weight, GeneratorKind};
pub use group::{
    check_markov_preserves_invariance, group_average, haar, invariant_disintegration,
    is_translation_invariant, markov_regularity_report, ActionSide, FiniteGroup, GroupAction,
    RegularityReport, RegularityRow,
};
pub use hull::{
    aggregate_metric, check_ordering_independence, pseudo_metric, run_hull, verify_hull_element,
    ConvergenceTrace, HullReport, HullRun, SubsetOrdering, TraceRow,
};
pub use io::{
    atomic_write, load_group, load_measure, load_space, save_group, save_measure, save_space,
    AnyMeasure, GroupDoc, MeasureDoc, SpaceDoc, SpaceRef,
};
pub use markov::{
    chain_product_oracle, check_commutativity, check_marginal_preservation,
    check_shift_equivariance, is_markov, is_markov_at, is_strong_markov, markov_defect,
    markovianise_at, markovianise_at_point, markovianise_partial_at_point, markovianise_set,
    max_markov_defect,
};
pub use measure::{PairStateMeasure, PartialPathMeasure, PathMeasure, StateMeasure};
pub use selfcheck::{run_all, CheckProfile, CheckReport};
pub use space::{
    Interval, PartialPath, Path, PathSpace, StateId, StateSpace, Time, TimeGrid,
    DEFAULT_ENUM_CAP,
};
pub use tensor::{
    check_associativity, check_bilinearity, check_composition, check_tensor_characterization,
    tensor_at, tensor_checked, tensor_via_pullback, PinnedMeasure, TensorSlot,
};
pub use weight::{within, Exact, Mode, Weight};
