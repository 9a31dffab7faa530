//! Finite-model workbench for groupoid convolution algebras, bibundles and
//! the bimodules attached to them.

pub mod groupoid;
pub mod linalg;
pub mod scalar;
pub mod union_find;
pub mod algebra;
pub mod bibundle;
pub mod bimodule;
pub mod simplex;
pub mod bornology;
pub mod mollifier;
pub mod torus;
pub mod random;
pub mod io;
pub mod report;
pub mod catalog;
