//! Finite strict K-linear 2-categories, pseudofunctors, pseudonatural
//! transformations and modifications, with exhaustive validators.

mod category;
mod pseudofunctor;
mod report;
mod transformation;

pub use category::{product, validate_two_category, Tensor3, TwoCategory, TwoCategoryBuilder, TwoMorphism};
pub(crate) use category::{digits_mixed, kron_all, unit_vec};
pub use pseudofunctor::{check_pseudofunctor_shapes, fhat_iterated, validate_pseudofunctor, Pseudofunctor, TablePseudofunctor};
pub use report::{ValidationReport, Violation};
pub use transformation::{
    identity_transformation, validate_modification, validate_transformation, Modification, ModificationKind,
    PseudonaturalTransformation,
};
