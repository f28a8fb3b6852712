//! Subshifts of finite type, group extensions, horofunction codings of
//! Cayley graphs, Ruelle and twisted transfer operators, and sphere-measure
//! random walks on Schreier graphs.

pub mod budget;
pub mod error;
pub mod extension;
pub mod group;
pub mod holder;
pub mod horocode;
pub mod linalg;
pub mod randwalk;
pub mod sft;
pub mod subgroup;
pub mod transfer;
pub mod twisted;

pub use error::{Error, Result};
