//! Exact arithmetic and classification for the extended modular group
//! PGL(2, Z), the integer linear fractional transformations
//! `x ↦ (ax+b)/(cx+d)` with `ad - bc = ±1`.
//!
//! * [`matrix`]: sign-normalized elements, products, orders, invariants.
//! * [`classify`]: the four conjugacy classes of nontrivial torsion elements,
//!   with verified conjugator witnesses.
//! * [`subgroups`]: finite subgroups by closure, their isomorphism types and
//!   the seven conjugacy classes, with verified witnesses.
//! * [`oracle`]: brute-force enumeration that re-checks all of the above.
//! * [`expr`] and [`cli`]: the text syntax and the command-line tool.

pub mod classify;
pub mod cli;
pub mod expr;
pub mod matrix;
pub mod oracle;
pub mod subgroups;

pub use classify::{
    canonical_rep, classify_element, conjugator_to_canonical, ClassifyError, ElementClass,
    ElementWitness,
};
pub use expr::{parse_element, render_element, ParseError, Style};
pub use matrix::{normalize, ArithmeticError, Determinant, OrderResult, ProjectiveMatrix};
pub use subgroups::{
    canonical_group, classify_subgroup, closure, isomorphism_type, FiniteSubgroup, GroupWitness,
    IsomorphismType, SubgroupClass, SubgroupError,
};
