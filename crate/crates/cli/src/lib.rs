//! Witness searches, parallel range scanning with checkpoint/resume, and
//! report emission for the sieve workbench binary.

pub mod report;
pub mod scan;
pub mod witness;
