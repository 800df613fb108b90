//! Candidate detection for Java code smells and bookkeeping for their
//! human validation.

pub mod source;
pub mod smell;

pub use smell::SmellKind;
pub mod metrics;
pub mod detector;
pub mod catalog;
pub mod review;
