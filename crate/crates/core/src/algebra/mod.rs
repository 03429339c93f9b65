//! Symbolic algebra of fermionic ladder operators.

mod expr;
mod mode;
mod text;

pub use expr::{OperatorExpr, Term};
pub use mode::{Ladder, LadderKind, Mode, Species};
pub use text::parse_expr;

pub(crate) use expr::normal_order_factors;
