//! Exact computations around cubic forms whose multiplicative Legendre
//! transform is again a polynomial (EKP-homaloidal cubics).
//!
//! Everything is computed over the rationals with no rounding:
//!
//! - [`poly`]: sparse multivariate polynomials, cubic forms and their
//!   polarization calculus, plus the text format used by the CLI.
//! - [`linalg`]: exact matrices, fraction-free elimination and a modular
//!   solver with rational reconstruction for large interpolation systems.
//! - [`cayley_dickson`] and [`catalog`]: the composition algebras over the
//!   rationals and the cubic norms of 3x3 Hermitian matrices over them.
//! - [`legendre`]: polar maps, interpolation of the Legendre transform and
//!   symbolic certification of its defining identities.
//! - [`tau`] and [`jordan`]: the second logarithmic differential, the maps
//!   `H_A`, and the Jordan algebra built from a cubic norm.
//! - [`severi`]: singular loci, tangent dimensions, Terracini ranks and
//!   Gauss fibers of the hypersurfaces.
//! - [`report`]: the analysis pipeline and the JSON reports used by the CLI.

pub mod catalog;
pub mod cayley_dickson;
pub mod error;
pub mod formal;
pub mod jordan;
pub mod legendre;
pub mod linalg;
pub mod poly;
pub mod report;
pub mod sampling;
pub mod severi;
pub mod tau;

pub use catalog::{builtin_catalog, catalog_entry, herm3_norm, CatalogEntry, Expected};
pub use cayley_dickson::{CdElem, HermMatrix};
pub use error::{Error, Result};
pub use jordan::{jordan_product, jordan_verify, simplicity_probe, JordanReport, JordanStructure};
pub use legendre::{analyze, fit_polynomial_legendre, fit_rational_legendre, LegendreVerdict, Status};
pub use linalg::{solve_linear, LinearSolution, Matrix};
pub use poly::{parse_poly, parse_poly_file, CubicForm, Monomial, Point, Poly, Rational};
pub use report::AnalysisReport;
pub use severi::{severi_report, SeveriReport};
pub use tau::{tau, TauMatrix};
