//! Exact arithmetic for contragredient Lie superalgebras over GF(p), with
//! the seven Cartan matrices of el(5;5) built in.

#![allow(clippy::needless_range_loop)]

pub mod cartan;
pub mod cli;
pub mod contragredient;
pub mod fp;
pub mod reflections;
pub mod relations;
