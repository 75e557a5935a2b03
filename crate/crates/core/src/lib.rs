//! Explicit-state refinement checking for finite guarded-command machines.
//!
//! Machines are written in a small specification language ([`speclang`]),
//! grounded to labelled transition systems ([`kernel`]) and compared by the
//! checkers in [`refine`]. [`corpus`] ships the priority-queue machines and
//! an independent trace oracle; [`cli`] is the batch front end.

pub mod cli;
pub mod corpus;
pub mod kernel;
pub mod refine;
pub mod speclang;
