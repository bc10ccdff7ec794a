//! A workbench for Hilbert's epsilon and tau calculus and for the A/E/I/O
//! sentences of the Aristotelian square read through it.

pub mod syntax;
pub mod model;
pub mod kernel;
pub mod montague;
pub mod translate;
pub mod square;
