//! Generators of validated test structures: skeletal group models with a
//! bicharacter tensorator, and delooped strict monoidal categories.

mod group_model;
mod monoidal;

pub use group_model::{cyclic, group_model, group_model_unchecked, trivial_model, GroupModelSpec, GroupTable};
pub use monoidal::{deloop, MonoidalCategoryData};
