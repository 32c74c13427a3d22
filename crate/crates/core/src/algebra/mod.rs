//! Exact linear algebra over the integers and over the two-element field.

mod gf2;
mod homology;
mod matrix;
mod smith;

pub use gf2::{rank_mod2, BitMatrix};
pub use homology::{homology, torsion_json, ClassGenerator, HomologyBasis, HomologyGroup, Ring};
pub use matrix::ExactMatrix;
pub use smith::{invariant_factors, rank, smith_normal_form, SmithForm};
