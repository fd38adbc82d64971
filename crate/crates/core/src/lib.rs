mod conway;
pub mod error;
pub mod field;

pub use error::{Error, Result};
pub use field::{Felt, Field, FieldCtx, FieldId};
pub mod matrix;
pub use matrix::Mat;
pub mod form;
pub use form::{Case, FormSpace};
pub mod frame;
pub use frame::{ETFParams, Flags, FrameRecord};
pub mod construct;
pub mod search;
pub mod cyclotomic;
pub mod io;
pub mod catalog;
pub mod cli;
