//! Formula-complexity games, frame validity, bisimulation and exhaustive
//! formula synthesis over finite Kripke structures.
//!
//! The crate is organised bottom-up:
//!
//! * [`formula`]: NNF modal formulas, grammar, printing and complexity measures.
//! * [`kripke`]: frames, models, evaluation, frame validity, bisimulation and
//!   [`kripke::Universe`], the indexed pointed-model sets everything else
//!   computes over.
//! * [`gallery`]: witness frame families, frame properties and their axioms.
//! * [`colouring`]: the non-colourability formulas, complete graphs and the
//!   colouring game setup.
//! * [`game`]: the formula-complexity games with an exhaustive Hercules and a
//!   greedy Hydra, game trees and weight functions.
//! * [`synth`]: bottom-up enumeration, minimal separators and certificates.
//! * [`textio`] and [`report`]: file formats and the reproduction report.

pub mod bits;
pub mod colouring;
pub mod error;
pub mod formula;
pub mod gallery;
pub mod game;
pub mod kripke;
pub mod report;
pub mod sample;
pub mod synth;
pub mod textio;

pub use error::{Error, Result};
pub use formula::{parse, Formula, Language, MeasureKind, Var};
