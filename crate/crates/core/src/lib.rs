//! Comonadic analysis of hybrid logic and the bounded fragment of first-order
//! logic over finite relational structures: play comonads, model-comparison
//! games, tree covers, and the locality constructions behind the bounded
//! characterisation theorem.

pub mod characterization;
pub mod coalgebras;
pub mod comonads;
pub mod fixtures;
pub mod games;
pub mod logic;
pub mod structures;
