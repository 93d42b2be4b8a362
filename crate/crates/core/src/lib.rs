//! License incompatibility analysis for software projects.
//!
//! A run scans a project for declared, inline and referenced licenses
//! ([`scan`]), arranges them into a hierarchy of nested scopes, reads each
//! license into a term matrix of actions and attitudes ([`extract`],
//! [`corpus`]), reports every place where a license is less restrictive
//! than one nested below it ([`compat`]) and proposes replacement licenses
//! for the ones the project owner may change ([`resolve`]).
//!
//! [`pipeline::analyze`] runs all of it; [`report`] turns the result into
//! JSON or text.

pub mod action;
pub mod apply;
pub mod attitude;
pub mod cli;
pub mod compat;
pub mod corpus;
pub mod error;
pub mod extract;
pub mod matrix;
pub mod pipeline;
pub mod report;
pub mod resolve;
pub mod scan;
