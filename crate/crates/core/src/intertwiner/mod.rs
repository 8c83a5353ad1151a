//! Cocycles, the operators `e^alpha`, `Y_+-(alpha, z)`, `Delta(alpha, z)`, and the
//! creative intertwiner `calY(u (x) e^alpha, z) = e^alpha Y_-(alpha, z) Y(u, z) Y_+(alpha, z) z^{alpha(0)}`.

mod cocycle;
mod ops;
mod props;

pub use cocycle::{bilinear, CocycleSystem, Matrix};
pub use ops::{creation_product, yminus_vacuum_terms, yplus_terms, IntertwinerSpec, Intertwining, Sign};
