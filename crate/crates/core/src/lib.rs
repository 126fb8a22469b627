//! Exact workbench for multi-level nonstandard analysis.
//!
//! * [`labels`]: finite index sets naming levels, with the shift operations.
//! * [`numbers`]: the ordered field ℚ(w0, w1, …) with `w0 ≪ w1 ≪ …`, where
//!   levels are support subfields, embeddings rename scales and shadows are
//!   iterated limits.
//! * [`formulas`]: the level-bounded formula language, its level shift and
//!   generators for shift and transfer schema instances.
//! * [`uflab`]: ultrafilters, tensor powers and ultrapowers over small finite
//!   index sets, verified by enumeration.
//! * [`combinatorics`]: Ramsey, Banach density and arithmetic-progression
//!   searches at desk scale.

pub mod combinatorics;
pub mod error;
pub mod formulas;
pub mod gen;
pub mod uflab;
pub mod labels;
pub mod numbers;

pub use error::{Error, Result};
pub use labels::Label;
pub use numbers::{Num, Scales};
