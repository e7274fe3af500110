//! Gray semigroups: cubical tensor products on finite strict 2-categories,
//! their iterated tensor powers and the padding operators built from them.

mod grid;
mod pad;
mod semigroup;
mod tensor_power;

pub use grid::{Grid, GridExpr};
pub use pad::{canonical, coarsest, eval_partition, finest, pad, pad_frame, pad_with, refines, Chooser, PaddedCell, Partition};
pub(crate) use semigroup::scalar_tensor;
pub use semigroup::{validate_gray, GraySemigroup, GrayTables};
pub use tensor_power::{
    compare_nestings, left_nested, right_nested, tensor_power, tensor_power_checked, IteratedTensor, TensorPowers,
    NESTING_CHECK_BOUND,
};
