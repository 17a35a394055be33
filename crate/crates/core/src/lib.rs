//! Numerical engine for integral frames in finite-dimensional Hilbert C*-modules.
//!
//! The algebra is `M_n(C)` (or a flagged diagonal subalgebra), the module is
//! `M_{n×m}(C)` with the algebra-valued inner product `<x, y> = x y*`, and a
//! frame is a parametrized family `w -> F_w` together with a measure on the
//! parameter domain. The crate computes frame operators by quadrature,
//! certifies scalar and algebra-valued (star) frame bounds in the Loewner
//! order, produces canonical Parseval and dual families, transports frames
//! through adjointable maps, and quantifies perturbation stability.
//!
//! Everything is dense, double-precision and deterministic: identical inputs
//! produce bit-identical outputs.

pub mod algebra;
pub mod error;
pub mod frames;
pub mod hilbert;
pub mod measure;
pub mod oracle;
pub mod rng;
pub mod stability;
pub mod tolerances;

pub use algebra::{Algebra, AlgebraElement, EigenDecomposition, LoewnerCheck, Positivity};
pub use error::Error;
pub use frames::{
    Bounds, FrameBounds, FrameFamily, FrameReport, GramMatrix, ImageFrame, StarBoundVerdict,
    StarFrameBounds, StarMode,
};
pub use hilbert::{AdjointableMap, ModuleVector};
pub use measure::{MeasureSpace, QuadratureNode, SampledFunction};
pub use stability::{PerturbationGrams, StabilityReport};

/// Alias used by every fallible operation in the crate.
pub type Result<T> = std::result::Result<T, Error>;
