//! Canonical commutation relations checked three ways: on spatial grids via
//! the ħ-scaled Fourier pair, in exact noncommutative algebra, and on
//! truncated ladder-operator matrices.

pub mod error;
pub mod grid;
pub mod kk;
pub mod ladder;
pub mod operators;
pub mod report;
pub mod states;
pub mod suite;
pub mod transform;
pub mod uncertainty;
pub mod weyl;

pub use error::{QpbError, Result};
pub use grid::{inner_product, normalize, Representation, UniformGrid, WaveFunction};
pub use kk::{AnalyticSignal, HalfPlane};
pub use ladder::LadderSystem;
pub use operators::{GridOperator, MomentumBackend, OperatorKind};
pub use report::{emit_report, CheckReport, ReportFormat};
pub use suite::{run_suite, Suite, SuiteConfig};
pub use weyl::{Expr, Letter, OperatorPoly, ParseError, Register, Word};
