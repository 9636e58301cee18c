//! Bergman and Szegő kernels on the unit disc and the unit ball in `ℂ²`.
//!
//! Polynomial test functions in `ζ, ζ̄` are projected by quadrature and by
//! exact moment expansion, and the interior integrals that Stokes's theorem
//! turns the Szegő integral into are evaluated term by term.

pub mod boundary_form;
pub mod error;
pub mod exact;
pub mod grammar;
pub mod kernels;
pub mod poly;
pub mod projections;
pub mod quadrature;
pub mod stokes;
pub mod symbolic;

pub use error::{Error, Result};
pub use exact::{ExactValue, RationalComplex};
pub use grammar::{format_poly, parse_poly, ParseError, ParseErrorKind};
pub use kernels::{kernel_diag_ratio, kernel_eval, KernelId, KernelSpec, ModelDomain};
pub use poly::{Dim, EvalPoint, MonomialTerm, MultiIndex, PolyObservable, Region, Wirtinger};
pub use projections::{
    bergman_apply, bergman_oracle, szego_apply, szego_oracle, Method, ProjectionResult,
    ProjectionValue,
};
pub use quadrature::{exact_moment, integrate, DomainKind, QuadratureRule, Resolution};
pub use stokes::{
    ball_terms, ball_terms_exact, disc_terms, disc_terms_exact, residual_table,
    DecompositionReport, ExactDecompositionReport, ResidualRow, TermSchedule,
};
