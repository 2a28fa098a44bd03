//! The Lasserre hierarchy on independent-set families.

mod family;
mod operator;
mod periodic;
mod programs;

pub use family::{enumerate_independent_sets, IndependentSetFamily, MomentVector};
pub use operator::{at_adjoint_matrix, at_operator};
pub use periodic::{periodic_correlation_restriction, Atom, CorrelationRestriction, PeriodicPacking, Window};
pub use programs::{
    check_las_kernel, las_on_points, las_plain, las_plain_dual, las_prime, las_prime_dual, las_prime_schur, lasserre_record, LasSolve, LasserreRecord,
};
