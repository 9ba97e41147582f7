//! GU(2,2), its subgroup GSpin6 (`det g = nu^2`) and the six-dimensional orthogonal
//! representation V6.
//!
//! One basis convention is used everywhere: `e1, e2, f1, f2` with
//! `J4 = [[0, I], [-I, 0]]`. Dual-group computations use the antidiagonal form,
//! which is this one after the permutation [`ANTIDIAGONAL_ORDER`]; nothing in the crate
//! converts between the two at run time.

mod group;
pub mod sample;
mod stabilizer;
mod v6;

pub use group::{double_prime, epsilon, inversion, j4, GUElem, Generator};
pub use stabilizer::{
    act_on_f_plane, d_e_sample, f_t_vector, stabilizer_test, stabilizes, StabilizerReport,
};
pub use v6::{v6_as_group_element, V6Vec};

use crate::exact_rings::RingError;

/// Basis reordering `(e1, e2, f2, f1)` that turns `J4` into the antidiagonal form
/// `[[0,0,0,1],[0,0,1,0],[0,-1,0,0],[-1,0,0,0]]`.
pub const ANTIDIAGONAL_ORDER: [usize; 4] = [0, 1, 3, 2];

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GroupError {
    #[error("matrix is not a unitary similitude")]
    NotSimilitude,
    #[error("matrix is not invertible")]
    NotInvertible,
    #[error("result of the action leaves V6")]
    NotInV6,
    #[error("reflection axis is isotropic")]
    IsotropicAxis,
    #[error("Levi block must have rational nonzero determinant")]
    BadLevi,
    #[error(transparent)]
    Ring(#[from] RingError),
}
