//! Exact scalars (prime and extension finite fields), dense linear algebra and
//! Smith normal form over the integers.

mod field;
mod mat;
mod snf;

pub use field::{field_with_roots, gcd, is_irreducible, is_prime, lcm, prime_factors, smallest_irreducible, Fe, FieldDesc, FIELD_SIZE_CAP};
pub use mat::{poly_roots, solve_sylvester, Echelon, Mat};
pub use snf::{in_row_lattice, lattice_basis, smith_normal_form, verify_snf, IntMat, Snf};
