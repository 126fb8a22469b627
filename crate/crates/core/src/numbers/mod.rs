//! The computable model: exact rational functions in the scales
//! `w0 ≪ w1 ≪ …`, with levels as support subfields, embeddings as scale
//! renamings and shadows as iterated limits.

mod expr;
mod modp;
mod num;
pub mod poly;
mod ratfn;
mod shadow;

pub use self::expr::{parse_expr, parse_number, Expr};
pub use self::num::{Num, Scales};
pub use self::poly::{Monomial, Poly, MAX_SCALES};
pub use self::ratfn::{derivative, RationalFn, UniPoly};
pub use self::shadow::{
    classify, end_extension_check, shadow, Classification, EndExtensionBranch,
    EndExtensionReport,
};
