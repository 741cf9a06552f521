//! Exact cyclotomic computer algebra for split spetses: reflection cosets,
//! order polynomials, cyclic Hecke algebras and tables of unipotent
//! characters.

pub mod cyclotomic;
pub mod laurent;
pub mod reflection;
pub mod orders;
pub mod hecke;
pub mod uch;
pub mod tabledata;
