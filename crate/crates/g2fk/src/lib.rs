//! Exact construction of the Sylow p-subgroup of G_2(p) in two independent
//! models, plus exhaustive verification suites over the full p^6 carriers.

pub mod aut;
pub mod cache;
pub mod chevalley;
pub mod engine;
pub mod field;
pub mod p3;
pub mod poly;
pub mod report;
pub mod runner;
pub mod verify;
