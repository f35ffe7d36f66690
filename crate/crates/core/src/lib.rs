//! Desk-scale LTE PDCCH laboratory.
//!
//! A simulated eNodeB schedules UEs and writes DCIs into the control region,
//! a noise channel impairs the soft bits, and three blind decoders (FALCON,
//! OWL and LTEye) try to recover the resource assignments. The analysis module
//! scores the decoders against ground truth.

pub mod analysis;
pub mod channel;
pub mod codec;
pub mod config;
pub mod dci;
pub mod decoders;
pub mod error;
pub mod grid;
pub mod io;
pub mod sim;

pub use error::{Error, Result};
