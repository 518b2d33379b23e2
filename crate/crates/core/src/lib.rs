//! Satisfiability toolkit for small fragments of controlled English.
//!
//! Sentences of the syllogistic, relational-syllogistic and relative-clause
//! fragments are represented abstractly ([`syntax`]), rendered to and parsed
//! from English ([`surface`]), translated to first-order logic ([`fol`]) and
//! decided ([`decide`], [`atp`]). [`gen`] and [`construct`] produce labelled
//! instance sets, serialised by [`corpus`].

pub mod atp;
pub mod construct;
pub mod corpus;
pub mod decide;
pub mod fol;
pub mod gen;
pub mod surface;
pub mod syntax;
pub mod vocab;

pub use atp::{ProofStats, Prover, ProverConfig};
pub use decide::{decide, Backend, DecideError, ForbiddenConfig, Method, Model, Verdict};
pub use gen::{GenParams, Instance, Label};
pub use syntax::{Fragment, Literal, Noun, Quant, Sentence, Verb};
pub use vocab::Vocabulary;
