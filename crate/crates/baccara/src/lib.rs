//! Exact solver for the matrix game of baccara chemin de fer.
//!
//! Player and Banker play a zero-sum game over third-card draw decisions.
//! Depending on what each side sees of his own two-card hand (totals only,
//! or full composition) and on how cards are dealt (i.i.d. or without
//! replacement from a `d`-deck shoe), the game ranges from 2 x 2^88 up to
//! 2^5 x 2^484. This crate evaluates the payoff matrix in exact rational
//! arithmetic, eliminates Banker's strictly dominated moves, solves the
//! reduced game by the lower-envelope method for two-row games, and
//! certifies every solution with an exact saddle-point check.
//!
//! The `oracle` module holds independent verification paths: a Monte Carlo
//! dealer and a brute-force small-game solver that share no code with the
//! analytic pipeline.

pub mod cards;
pub mod dominance;
pub mod envelope;
pub mod error;
pub mod oracle;
pub mod payoff;
pub mod solver;

pub use cards::{
    CardValue, DealModel, DecisionPoint, HandPair, InfoModel, Move,
    PlayerMask, ThirdCard,
};
pub use error::{Error, Result};
pub use payoff::{PayoffBlocks, Point, Rational, TotalPoint};
