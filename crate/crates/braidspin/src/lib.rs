//! Exact computer algebra and numerics for braided Clifford algebras over
//! noncommutative metric coefficient algebras, together with the Hodge/Laplace
//! machinery and the quantum Dirac operator they support — instantiated
//! end-to-end on the quantum Hopf fibration over the quantum 2-sphere.
//!
//! The crate is organised bottom-up:
//!
//! * [`scalars`] — the exact coefficient field: rational functions in a
//!   deformation variable `q` (with `mu = q^2`) over Gaussian rationals,
//!   plus float evaluation at rational `q` or rational `mu`.
//! * [`linalg`] — labelled spaces, exact operators, tensor products,
//!   fraction-free kernel/image computation, Hermitian forms and float
//!   eigensolvers.
//! * [`braiding`] — braid operators, permutation lifts, braided
//!   antisymmetrizers and the coupled-pair identities relating a metric
//!   braiding to its auxiliary partner.
//! * [`quantum_metric`] — the metric coefficient algebra Σ (Laurent
//!   polynomials in the metric generator), the Σ-bimodule twist, the
//!   extended metric, and the metric axiom suite.
//! * [`exterior_clifford`] — braided exterior algebras, volume elements,
//!   the Hodge star, contractions, and cliffordization.
//! * [`hopf_fibration`] — the quantum SU(2) total space: normal ordering,
//!   the Haar state, Peter–Weyl multiplets, ladder operators and adjoints.
//! * [`dirac`] — the invariant spinor module, the quantum Dirac operator,
//!   its exact spectrum, the spinorial Laplacian and the curvature defect.
//! * [`report`] — small PASS/FAIL reporting types shared by the
//!   verification suites.

pub mod braiding;
pub mod dirac;
pub mod exterior_clifford;
pub mod hopf_fibration;
pub mod linalg;
pub mod quantum_metric;
pub mod report;
pub mod scalars;

pub use num::BigRational;
pub use report::{Check, Report};
pub use scalars::Scalar;

/// Errors surfaced by exact arithmetic and evaluation paths.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Division by the zero scalar.
    #[error("division by zero scalar")]
    DivisionByZero,
    /// Evaluation hit a non-removable pole.
    #[error("non-removable pole at {at}")]
    Pole {
        /// Human-readable description of the evaluation point.
        at: String,
    },
    /// An operator was used where a Hermitian one is required.
    #[error("operator is not Hermitian under the supplied form: {detail}")]
    NotHermitian {
        /// What failed, with the offending residual.
        detail: String,
    },
    /// Shape mismatch between operators or spaces.
    #[error("dimension mismatch: {detail}")]
    Shape {
        /// What was being combined.
        detail: String,
    },
    /// An input lay outside the valid domain (e.g. a non-positive
    /// deformation parameter).
    #[error("domain error: {detail}")]
    Domain {
        /// What was out of range.
        detail: String,
    },
}

#[cfg(doctest)]
mod book_doctests {
    //! Keeps the guide's runnable snippets compiling: every chapter of the
    //! book is included here as a doc-test source.
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub struct BookIntroduction;
    #[doc = include_str!("../../../book/src/scalars.md")]
    pub struct BookScalars;
    #[doc = include_str!("../../../book/src/braiding.md")]
    pub struct BookBraiding;
    #[doc = include_str!("../../../book/src/metric.md")]
    pub struct BookMetric;
    #[doc = include_str!("../../../book/src/exterior.md")]
    pub struct BookExterior;
    #[doc = include_str!("../../../book/src/hopf.md")]
    pub struct BookHopf;
    #[doc = include_str!("../../../book/src/dirac.md")]
    pub struct BookDirac;
    #[doc = include_str!("../../../book/src/cli.md")]
    pub struct BookCli;
}
