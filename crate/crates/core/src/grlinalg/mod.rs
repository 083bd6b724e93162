//! Graded linear algebra over the coefficient rings: dense Smith normal
//! form, sparse lattices and cochain complexes with cohomology.

mod complex;
mod matrix;
mod presented;
mod snf;
mod sparse;

pub use matrix::Matrix;
pub use snf::{
    cokernel_presentation, image_basis, invariant_factors, kernel_basis, smith_normal_form, solve_linear, solve_with,
    ModuleEntry, SmithDecomposition,
};
pub use sparse::{Lattice, SparseVec};
pub use presented::{ModuleGenerator, Order, PresentedMap};
pub use complex::{ClassGenerator, CochainComplex, Cohomology};
