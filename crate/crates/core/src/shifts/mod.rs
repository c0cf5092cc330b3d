//! Weighted shift operators, orbit norms, and the duality/conjugacy transforms.

mod operator;
mod weights;
mod wellposed;

pub use operator::{conjugate_by, conjugate_to_unweighted, Direction, Phase, ShiftOperator};
pub use weights::{weight_product, Diagonal, Lag, WeightSequence, WeightTable, WeightTail};
pub use wellposed::{check_invertible, check_operator_wellposed, WitnessReport, WitnessStatus};
