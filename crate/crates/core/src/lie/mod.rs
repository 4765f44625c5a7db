//! Lie algebra presentations: bracket tables, frame metric, product
//! structure and the seven built-in Lorentzian algebras.

mod builtin;
mod format;
mod presentation;

pub use builtin::{builtin, builtin_ids, get_presentation, GroupId, PresentationSource};
pub use format::{parse_liealg, print_liealg, LieFormatError};
pub use presentation::{apply_j, metric, LiePresentation, METRIC, PRODUCT};
