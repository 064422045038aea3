//! Conformal Cartan geometry of a 4D chart in the spin representation:
//! jets and exterior calculus, the spin conformal Cartan connection, its
//! dressing to twistor variables, the BRST algebra and Yang–Mills densities.

pub mod brst;
pub mod cartan;
pub mod checks;
pub mod dressing;
pub mod error;
pub mod expr;
pub mod field;
pub mod form;
pub mod frame;
pub mod grassmann;
pub mod hodge;
pub mod jet;
pub mod matrix_form;
pub mod metric_oracle;
pub mod scene;
pub mod spin_iso;
pub mod suite;
pub mod twistor;
pub mod yang_mills;

pub use error::{Error, Result};
pub use form::Form;
pub use jet::{Jet, C64};
pub use matrix_form::MatrixForm;
