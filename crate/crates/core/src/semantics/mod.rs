//! Finite frames, their complex algebras, and evaluators for the three
//! languages.

pub mod enumerate;
pub mod fo_eval;
pub mod frame;
pub mod frame_file;
pub mod model;
pub mod oracle;

pub use fo_eval::{eval_fo, Compiled, EvalError};
pub use frame::{Frame, FrameError, Mask, MAX_SORT_SIZE};
