//! Bohr (Fourier) regularization of functions on `G`, cut-norm regularity
//! for functions on `G x G`, and the driver combining the two.

mod bohr_reg;
mod cut_norm;
mod double;
mod growth;
mod weak;

pub use bohr_reg::{
    bohr_regularize, BohrDecomposition, Components, RoundLog, BOHR_REGULARIZE_CAP, ROUND_WORK_CAP, SPECTRAL_CONSTANT,
};
pub use cut_norm::{
    cut_norm_estimate, cut_witness, two_sided_witness, CutMode, CutWitness, DEFAULT_CUT_SEED, DEFAULT_RESTARTS,
    EXACT_CUT_CAP,
};
pub use double::{double_regularity, DoubleRegularity, FunctionSplit, OuterRound, DOUBLE_CAP};
pub use growth::GrowthFunction;
pub use weak::{refine_weakly, weak_regularity, WeakRegularityResult, WEAK_CAP};
