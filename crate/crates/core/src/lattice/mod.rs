//! Exact integer linear algebra, cones, Hilbert bases and finite abelian groups.

pub mod basis;
pub mod cone;
pub mod group;
pub mod hilbert;
pub mod snf;
pub mod vector;

pub use basis::{clear_denominators, lattice_membership, LatticeBasis};
pub use cone::{cone_membership, cone_membership_int, is_pointed, lineality_generators, PointedCone};
pub use group::{invariant_lattice, CharacterMap, Element, FiniteAbelianGroup, Quotient, Subgroup};
pub use hilbert::{hilbert_basis, hilbert_basis_full, saturate, saturate_in, try_saturate_in, Saturation, SplitMonoid};
pub use snf::{hermite_reduce, hermite_rows, integer_kernel, saturated_span, smith_normal_form, SmithDecomposition};
pub use vector::{lv, IntMatrix, LatticeVector};
