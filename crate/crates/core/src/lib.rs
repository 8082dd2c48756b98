//! Desk-scale model of a C-to-hardware flow for a 64-QAM adaptive
//! equalizer: bit-accurate fixed-point arithmetic, a bit-exact decoder
//! model, a channel harness to exercise it, and a loop-level latency/area
//! explorer with bit-width inference.

pub mod channel;
pub mod cli;
pub mod complexfx;
pub mod decoder;
pub mod error;
pub mod explorer;
pub mod fixedpoint;
pub mod rational;
pub mod widths;

pub use complexfx::CFx;
pub use error::{ChannelError, ExploreError, FxError, ParseError};
pub use fixedpoint::{convert, FxFormat, FxValue, Overflow, Quant};
pub use rational::Rational;
