//! Exact computations around the Heisenberg curves `C_n`: the Heisenberg
//! group `H_n`, words in the free group on `a, b`, Riemann–Hurwitz
//! bookkeeping for `C_n -> F_n -> P^1`, and the 3-isogenies of the Fermat
//! cubic over `Q(sqrt(-3))` that single out `C_3`.
//!
//! No floating point is used anywhere.

pub mod covers;
pub mod elliptic;
pub mod heisenberg;
pub mod poly;
pub mod quadratic;
pub mod words;

pub use heisenberg::{HeisenbergElement, HeisenbergError, DEFAULT_BOUND};
pub use quadratic::QuadNum;
pub use words::Word;
