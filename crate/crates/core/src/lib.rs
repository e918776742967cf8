//! Exact arithmetic on linear representations of elements of the free field
//! over the rationals: admissible linear systems, minimization of regular
//! elements, minimal inverses and the word problem.

pub mod als;
pub mod error;
pub mod expr;
pub mod inverse;
pub mod json;
pub mod linalg;
pub mod regular;
pub mod word_problem;

pub use als::{Alphabet, Als, Assignment, CertFlags, Linearization, Membership, Minimality, Pencil, Word};
pub use error::{Error, Result};
pub use expr::{compile, parse, CompileOptions, Expr};
pub use inverse::{minimal_inverse, InverseType, MinimalInverse};
pub use linalg::{format_scalar, int, parse_scalar, ratio, AffineSolution, KMatrix, Rref, Scalar, SpanBasis};
pub use regular::{minimize_regular, Pls};
pub use word_problem::{
    compare_systems, decide_equal, equality_pipeline, positive_test, Certificate, Method, PipelineOptions, Verdict,
    VerdictKind,
};
