//! Morphing of quantum codes, hierarchical color codes, logical gate
//! verification, magic state distillation analysis and decoding.

pub mod code;
pub mod colex;
pub mod decoder;
pub mod gates;
pub mod gf2;
pub mod hct;
pub mod matching;
pub mod morph;
pub mod msd;
pub mod pauli;
pub mod scenarios;
pub mod threshold;
