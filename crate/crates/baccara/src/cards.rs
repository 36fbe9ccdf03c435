//! Card values, hand totals, strategy index spaces, and outcome comparison.
//!
//! Baccara hands are scored modulo 10. Denominations A, 2-9 carry their face
//! value; 10, J, Q, K all count as 0, so a deck holds four cards of each
//! value 1-9 and sixteen cards of value 0.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// A card value in 0..=9.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CardValue(u8);

impl CardValue {
    pub fn new(value: u8) -> Result<Self> {
        if value <= 9 {
            Ok(CardValue(value))
        } else {
            Err(Error::InvalidCardValue(value))
        }
    }

    pub(crate) const fn new_unchecked(value: u8) -> Self {
        CardValue(value)
    }

    pub fn value(self) -> u8 {
        self.0
    }

    /// All ten card values 0..=9.
    pub fn all() -> impl Iterator<Item = CardValue> {
        (0..=9).map(CardValue)
    }
}

impl fmt::Display for CardValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Number of cards of value `r` in a fresh `d`-deck shoe: 16d for value 0
/// (four denominations), 4d otherwise.
pub fn denom_count(r: CardValue, decks: u32) -> u64 {
    let per_deck = if r.0 == 0 { 16 } else { 4 };
    per_deck * decks as u64
}

pub fn mod10_total(a: CardValue, b: CardValue) -> u8 {
    (a.0 + b.0) % 10
}

/// Sign of `player_total - banker_total`: +1 Player wins one unit, 0 push,
/// -1 Player loses.
pub fn compare_totals(player_total: u8, banker_total: u8) -> i8 {
    match player_total.cmp(&banker_total) {
        Ordering::Greater => 1,
        Ordering::Equal => 0,
        Ordering::Less => -1,
    }
}

/// An unordered two-card hand, canonicalized so `lo <= hi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct HandPair {
    lo: CardValue,
    hi: CardValue,
}

impl HandPair {
    pub fn new(a: CardValue, b: CardValue) -> Self {
        if a <= b {
            HandPair { lo: a, hi: b }
        } else {
            HandPair { lo: b, hi: a }
        }
    }

    pub fn of(a: u8, b: u8) -> Result<Self> {
        Ok(HandPair::new(CardValue::new(a)?, CardValue::new(b)?))
    }

    pub fn lo(self) -> CardValue {
        self.lo
    }

    pub fn hi(self) -> CardValue {
        self.hi
    }

    pub fn total(self) -> u8 {
        mod10_total(self.lo, self.hi)
    }

    pub fn is_natural(self) -> bool {
        self.total() >= 8
    }

    /// All 55 unordered hands.
    pub fn all() -> Vec<HandPair> {
        let mut out = Vec::with_capacity(55);
        for a in 0..=9u8 {
            for b in a..=9u8 {
                out.push(HandPair {
                    lo: CardValue(a),
                    hi: CardValue(b),
                });
            }
        }
        out
    }
}

/// Hands order by (total, low card); for a fixed total the low card
/// determines the hand, which makes this the row order of the tables.
impl Ord for HandPair {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.total(), self.lo).cmp(&(other.total(), other.lo))
    }
}

impl PartialOrd for HandPair {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for HandPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.lo, self.hi)
    }
}

/// What Banker observes of Player's third card: the card value, or that
/// Player stood. Kept as a distinct variant so the stand observation can
/// never leak into card arithmetic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ThirdCard {
    Card(CardValue),
    Stand,
}

impl ThirdCard {
    /// All eleven observations: card values 0..=9, then the stand.
    pub fn all() -> impl Iterator<Item = ThirdCard> {
        (0..=10).map(|k| {
            if k <= 9 {
                ThirdCard::Card(CardValue(k))
            } else {
                ThirdCard::Stand
            }
        })
    }

    /// Sort key: cards 0..=9 ascending, the stand observation last.
    pub fn rank(self) -> u8 {
        match self {
            ThirdCard::Card(c) => c.0,
            ThirdCard::Stand => 10,
        }
    }
}

impl Ord for ThirdCard {
    fn cmp(&self, other: &Self) -> Ordering {
        self.rank().cmp(&other.rank())
    }
}

impl PartialOrd for ThirdCard {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ThirdCard {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ThirdCard::Card(c) => write!(f, "{c}"),
            ThirdCard::Stand => write!(f, "-"),
        }
    }
}

/// A Banker information set: his two-card hand (total at most 7) plus the
/// observed Player third card. There are 44 x 11 = 484 of them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DecisionPoint {
    pub hand: HandPair,
    pub obs: ThirdCard,
}

impl DecisionPoint {
    pub fn new(hand: HandPair, obs: ThirdCard) -> Result<Self> {
        if hand.total() <= 7 {
            Ok(DecisionPoint { hand, obs })
        } else {
            Err(Error::NaturalDecisionPoint(hand))
        }
    }

    /// All 484 decision points in canonical order: Banker total ascending,
    /// then third card (stand last), then hand.
    pub fn all() -> Vec<DecisionPoint> {
        let mut out = Vec::with_capacity(484);
        for hand in enumerate_banker_hands() {
            for obs in ThirdCard::all() {
                out.push(DecisionPoint { hand, obs });
            }
        }
        out.sort();
        out
    }
}

impl Ord for DecisionPoint {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.hand.total(), self.obs, self.hand.lo)
            .cmp(&(other.hand.total(), other.obs, other.hand.lo))
    }
}

impl PartialOrd for DecisionPoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for DecisionPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.hand.lo, self.hand.hi, self.obs)
    }
}

/// The 44 Banker hands with total at most 7, ascending by (total, low card).
pub fn enumerate_banker_hands() -> Vec<HandPair> {
    let mut hands: Vec<HandPair> = HandPair::all()
        .into_iter()
        .filter(|h| h.total() <= 7)
        .collect();
    hands.sort();
    hands
}

/// The five total-5 hands Player is free on, in mask bit order
/// (most significant bit first).
pub const FREE_HAND_COUNT: usize = 5;

pub fn free_hands() -> [HandPair; FREE_HAND_COUNT] {
    [
        HandPair::new(CardValue(0), CardValue(5)),
        HandPair::new(CardValue(1), CardValue(4)),
        HandPair::new(CardValue(2), CardValue(3)),
        HandPair::new(CardValue(6), CardValue(9)),
        HandPair::new(CardValue(7), CardValue(8)),
    ]
}

/// A Player pure strategy: a 5-bit mask over the free total-5 hands, most
/// significant bit = (0,5), then (1,4), (2,3), (6,9), (7,8). Mask 0 stands
/// on every total-5 hand, mask 31 draws on all of them. Draws on totals
/// 0-4 and stands on 6-7 are forced by the rules, outside the mask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PlayerMask(u8);

impl PlayerMask {
    pub const STAND_ON_FIVES: PlayerMask = PlayerMask(0);
    pub const DRAW_ON_FIVES: PlayerMask = PlayerMask(31);

    pub fn new(bits: u8) -> Result<Self> {
        if bits <= 31 {
            Ok(PlayerMask(bits))
        } else {
            Err(Error::InvalidMask(bits))
        }
    }

    pub fn bits(self) -> u8 {
        self.0
    }

    pub fn all() -> impl Iterator<Item = PlayerMask> {
        (0..32).map(PlayerMask)
    }

    /// Bit position (0 = most significant) of a free total-5 hand.
    pub fn bit_position(hand: HandPair) -> Option<usize> {
        free_hands().iter().position(|h| *h == hand)
    }

    pub fn draws_on_five(self, hand: HandPair) -> Result<bool> {
        let pos =
            Self::bit_position(hand).ok_or(Error::NotAFreeHand(hand))?;
        Ok(self.0 >> (4 - pos) & 1 == 1)
    }

    /// Number of free hands this mask draws on, weighted by nothing;
    /// see `draw_weight_eighths` for the hand-frequency weighting.
    pub fn popcount(self) -> u32 {
        self.0.count_ones()
    }

    /// Total conditional probability (in eighths) of drawing on a two-card
    /// total of 5 under this mask, with replacement: (0,5) is four times as
    /// likely as each of the other four hands.
    pub fn draw_weight_eighths(self) -> u8 {
        let u = self.0;
        4 * (u >> 4 & 1) + (u >> 3 & 1) + (u >> 2 & 1) + (u >> 1 & 1) + (u & 1)
    }
}

impl fmt::Display for PlayerMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Whether Player draws a third card, under `mask`, holding `hand`.
/// Totals 0-4 are forced draws and 6-7 forced stands; only total 5
/// consults the mask. Naturals never reach a draw decision.
pub fn player_draws(mask: PlayerMask, hand: HandPair) -> Result<bool> {
    match hand.total() {
        0..=4 => Ok(true),
        5 => mask.draws_on_five(hand),
        6 | 7 => Ok(false),
        _ => Err(Error::NaturalDecisionPoint(hand)),
    }
}

/// A draw or a stand. The two Banker moves at a decision point, and the
/// two Player moves on a free hand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Move {
    Stand,
    Draw,
}

/// How cards are dealt: i.i.d. single-deck draws, or without replacement
/// from a `d`-deck shoe.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DealModel {
    WithReplacement,
    Shoe(u32),
}

impl DealModel {
    pub fn validate(self) -> Result<Self> {
        match self {
            DealModel::Shoe(0) => Err(Error::InvalidDecks(0)),
            other => Ok(other),
        }
    }

    pub fn decks(self) -> Option<u32> {
        match self {
            DealModel::Shoe(d) => Some(d),
            DealModel::WithReplacement => None,
        }
    }
}

/// What each side knows about his own two-card hand: both see only totals,
/// Banker alone sees his composition, or both see their compositions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InfoModel {
    TotalsOnly,
    BankerComposition,
    FullComposition,
}
