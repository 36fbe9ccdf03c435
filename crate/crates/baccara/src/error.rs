use thiserror::Error;

use crate::cards::HandPair;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("card value {0} out of range 0..=9")]
    InvalidCardValue(u8),

    #[error("player mask {0} out of range 0..=31")]
    InvalidMask(u8),

    #[error("{0} is not one of the five free total-5 hands")]
    NotAFreeHand(HandPair),

    #[error("hand {0} is a natural and never reaches a draw decision")]
    NaturalDecisionPoint(HandPair),

    #[error("shoe must hold at least one deck, got {0}")]
    InvalidDecks(u32),

    #[error("deck count {0} exceeds the configured cap {1}")]
    DecksAboveCap(u32, u32),

    #[error("removed cards exceed the shoe's count of value {value}")]
    RemovalExceedsShoe { value: u8 },

    #[error("empty conditioning set: no two-card hand satisfies the constraint")]
    EmptyConditioningSet,

    #[error("zero probability mass when aggregating point {0}")]
    ZeroAggregateMass(String),

    #[error("classification tie: draw and stand are exactly equal at {0}")]
    ClassificationTie(String),

    #[error("partition tie: equal payoffs for both moves at {0}")]
    PartitionTie(String),

    #[error("crossover undefined at {0}: point is unanimous for one row")]
    CrossoverUndefined(String),

    #[error("kernel has a pure saddle point; no interior mixture exists")]
    PureSaddle,

    #[error("no interior envelope maximizer; the optimum is a pure strategy")]
    NoInteriorMaximizer,

    #[error("row {0} not present in these payoff blocks")]
    RowNotInBlocks(u8),

    #[error("expected composition-level blocks, got total-level blocks")]
    ExpectedCompositionBlocks,

    #[error("blocks and classification were built under different models")]
    ModelMismatch,

    #[error("operation applies to {0} only")]
    WrongModel(&'static str),

    #[error("certificate failed after {rounds} support-repair rounds; failing components: {failures}")]
    CertificateFailed { rounds: u32, failures: String },

    #[error("brute-force solver limited to 16 free points, got {0}")]
    TooManyFreePoints(usize),

    #[error("payoff class {0} is not internally equal; structure assumption violated")]
    UnequalPayoffClass(u8),

    #[error("simulation needs at least one trial")]
    NoTrials,

    #[error("move table is not total: missing {0}")]
    IncompleteMoveTable(String),
}
