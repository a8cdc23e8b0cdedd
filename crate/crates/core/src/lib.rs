//! Relative Gorenstein objects for finite-dimensional bound quiver algebras
//! over prime fields: exact linear algebra, representations, homological
//! computations, and decision procedures for Gorenstein subcategories.

pub mod audit;
pub mod corpus;
pub mod exactla;
pub mod quiver;
pub mod rep;
pub mod homcalc;
pub mod subcat;
pub mod cert;
pub mod gorenstein;
pub mod contexts;
