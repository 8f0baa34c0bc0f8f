//! Catalog, verification suites and reports over the core engine.

pub mod catalog;
pub mod lab;
pub mod report;
pub mod suites;
