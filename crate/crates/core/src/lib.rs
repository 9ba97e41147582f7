pub mod arch_quadrature;
pub mod ait_quaternion;
pub mod dual_lfactors;
pub mod exact_rings;
pub mod gu_groups;
pub mod herm_modform;
pub mod padic_verify;
pub mod harness;
mod sum;
