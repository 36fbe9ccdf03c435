//! Exact conditional expectations and probabilities for every deal and
//! information model, assembled into payoff blocks: for each Player row S
//! and Banker decision point l, the probability p_S(l) of reaching l and
//! the conditional expectations of Player's gain when Banker draws or
//! stands there.
//!
//! Everything here is exact `BigRational` arithmetic; no floating point.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num::bigint::BigInt;
use rayon::prelude::*;

use crate::cards::{
    free_hands, CardValue, DealModel, DecisionPoint, HandPair, InfoModel,
    Move, PlayerMask, ThirdCard,
};
use crate::error::{Error, Result};

/// Arbitrary-precision exact rational; the sole numeric type of the core.
pub type Rational = num::BigRational;

/// Exact rational from an integer pair.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn integer(n: i64) -> Rational {
    Rational::from(BigInt::from(n))
}

fn ratio128(num: i128, den: i128) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

fn sign(a: u8, b: u8) -> i128 {
    match a.cmp(&b) {
        Ordering::Greater => 1,
        Ordering::Equal => 0,
        Ordering::Less => -1,
    }
}

/// A Banker information set under the totals-only model: his two-card
/// total plus the observed Player third card. There are 8 x 11 = 88.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TotalPoint {
    pub total: u8,
    pub obs: ThirdCard,
}

impl TotalPoint {
    pub fn all() -> Vec<TotalPoint> {
        let mut out = Vec::with_capacity(88);
        for total in 0..=7 {
            for obs in ThirdCard::all() {
                out.push(TotalPoint { total, obs });
            }
        }
        out.sort();
        out
    }
}

impl Ord for TotalPoint {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.total, self.obs).cmp(&(other.total, other.obs))
    }
}

impl PartialOrd for TotalPoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for TotalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.total, self.obs)
    }
}

/// A decision point at either information granularity. Composition-level
/// points carry the full hand; total-level points only Banker's total.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Point {
    Hand(DecisionPoint),
    Total(TotalPoint),
}

impl Point {
    pub fn banker_total(&self) -> u8 {
        match self {
            Point::Hand(p) => p.hand.total(),
            Point::Total(p) => p.total,
        }
    }

    pub fn obs(&self) -> ThirdCard {
        match self {
            Point::Hand(p) => p.obs,
            Point::Total(p) => p.obs,
        }
    }

    fn hand_lo(&self) -> u8 {
        match self {
            Point::Hand(p) => p.hand.lo().value(),
            Point::Total(_) => 0,
        }
    }
}

/// Canonical point order: Banker total ascending, then third card with the
/// stand observation last, then hand.
impl Ord for Point {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.banker_total(), self.obs(), self.hand_lo()).cmp(&(
            other.banker_total(),
            other.obs(),
            other.hand_lo(),
        ))
    }
}

impl PartialOrd for Point {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Hand(p) => write!(f, "{p}"),
            Point::Total(p) => write!(f, "{p}"),
        }
    }
}

/// Per-(row, point) exact values: the probability of reaching the point
/// with this row, and Player's conditional expected gain when Banker
/// draws resp. stands.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointCell {
    pub prob: Rational,
    pub ev_draw: Rational,
    pub ev_stand: Rational,
}

/// Live card counts of a partially depleted shoe, or the static value
/// weights of i.i.d. dealing. `remaining` is the weight total, so third
/// card probabilities are `counts[v] / remaining` in both cases.
#[derive(Debug, Clone, Copy)]
struct ShoeView {
    counts: [i64; 10],
    remaining: i64,
    depleting: bool,
}

impl ShoeView {
    fn fresh(deal: DealModel) -> Result<ShoeView> {
        match deal.validate()? {
            DealModel::Shoe(d) => {
                let mut counts = [4 * d as i64; 10];
                counts[0] = 16 * d as i64;
                Ok(ShoeView {
                    counts,
                    remaining: 52 * d as i64,
                    depleting: true,
                })
            }
            DealModel::WithReplacement => {
                let mut counts = [1i64; 10];
                counts[0] = 4;
                Ok(ShoeView {
                    counts,
                    remaining: 13,
                    depleting: false,
                })
            }
        }
    }

    fn remove(&mut self, v: CardValue) -> Result<()> {
        if !self.depleting {
            return Ok(());
        }
        let c = &mut self.counts[v.value() as usize];
        if *c == 0 {
            return Err(Error::RemovalExceedsShoe { value: v.value() });
        }
        *c -= 1;
        self.remaining -= 1;
        Ok(())
    }

    fn weight(&self, v: CardValue) -> i64 {
        self.counts[v.value() as usize]
    }

    /// Number of unordered two-card hands equal to `h` (shoe), or the
    /// i.i.d. hand weight (2 - delta) w(lo) w(hi).
    fn pair_weight(&self, h: HandPair) -> i64 {
        let (lo, hi) = (self.weight(h.lo()), self.weight(h.hi()));
        if self.depleting {
            if h.lo() == h.hi() {
                lo * (lo - 1) / 2
            } else {
                lo * hi
            }
        } else if h.lo() == h.hi() {
            lo * hi
        } else {
            2 * lo * hi
        }
    }

    /// Weight denominator for all unordered two-card hands.
    fn two_card_total(&self) -> i128 {
        if self.depleting {
            let n = self.remaining as i128;
            n * (n - 1) / 2
        } else {
            169
        }
    }

    /// Banker third-card expectation with two further cards (Player's own
    /// hand) removed: numerator over the fixed denominator
    /// `remaining - 2` (or the weight total 13).
    fn banker_ev_after(
        &self,
        extra: HandPair,
        player_final: u8,
        banker_total: u8,
    ) -> Result<(i128, i128)> {
        let mut num: i128 = 0;
        for l in 0..=9u8 {
            let mut w = self.counts[l as usize] as i128;
            if self.depleting {
                w -= (extra.lo().value() == l) as i128;
                w -= (extra.hi().value() == l) as i128;
                if w < 0 {
                    return Err(Error::RemovalExceedsShoe { value: l });
                }
            }
            num += w * sign(player_final, (banker_total + l) % 10);
        }
        let den = if self.depleting {
            self.remaining as i128 - 2
        } else {
            13
        };
        Ok((num, den))
    }
}

/// Player's forced draw hands (totals 0-4) followed by nothing; the free
/// total-5 hands are handled separately in mask bit order.
fn forced_draw_hands() -> Vec<HandPair> {
    HandPair::all()
        .into_iter()
        .filter(|h| h.total() <= 4)
        .collect()
}

/// Player's forced stand hands (totals 6-7).
fn forced_stand_hands() -> Vec<HandPair> {
    HandPair::all()
        .into_iter()
        .filter(|h| matches!(h.total(), 6 | 7))
        .collect()
}

/// Probability weights w and gain numerators (over `ev_den` for draws) for
/// one candidate Player hand at a decision point.
struct HandTerm {
    weight: i128,
    draw_num: i128,
    stand_num: i128,
}

fn hand_term(
    view: &ShoeView,
    hand: HandPair,
    player_final: u8,
    banker_total: u8,
) -> Result<Option<HandTerm>> {
    let w = view.pair_weight(hand) as i128;
    if w == 0 {
        return Ok(None);
    }
    let (ev_num, _) = view.banker_ev_after(hand, player_final, banker_total)?;
    Ok(Some(HandTerm {
        weight: w,
        draw_num: w * ev_num,
        stand_num: w * sign(player_final, banker_total),
    }))
}

/// Exact per-row cell values at one composition-level decision point.
fn point_cells(
    deal: DealModel,
    hand: HandPair,
    obs: ThirdCard,
    rows: &[PlayerMask],
) -> Result<Vec<PointCell>> {
    let banker_total = hand.total();
    let mut view = ShoeView::fresh(deal)?;
    // Banker-hand probability from the fresh shoe; ordered-pair convention.
    let hand_prob = if view.depleting {
        let n = view.remaining as i128;
        ratio128(2 * view.pair_weight(hand) as i128, n * (n - 1))
    } else {
        ratio128(view.pair_weight(hand) as i128, 169)
    };
    view.remove(hand.lo())?;
    view.remove(hand.hi())?;

    let (third_factor, drawing) = match obs {
        ThirdCard::Card(k) => {
            let f = ratio128(view.weight(k) as i128, view.remaining as i128);
            view.remove(k)?;
            (f, true)
        }
        ThirdCard::Stand => (integer(1), false),
    };

    let pair_den = view.two_card_total();
    let ev_den = if view.depleting {
        view.remaining as i128 - 2
    } else {
        13
    };

    let mut forced = HandTerm {
        weight: 0,
        draw_num: 0,
        stand_num: 0,
    };
    let mut five = [(0i128, 0i128, 0i128); 5];
    let (forced_hands, invert_bits) = if drawing {
        (forced_draw_hands(), false)
    } else {
        (forced_stand_hands(), true)
    };
    let player_final = |h: HandPair| -> u8 {
        match obs {
            ThirdCard::Card(k) => (h.total() + k.value()) % 10,
            ThirdCard::Stand => h.total(),
        }
    };
    for h in forced_hands {
        if let Some(t) = hand_term(&view, h, player_final(h), banker_total)? {
            forced.weight += t.weight;
            forced.draw_num += t.draw_num;
            forced.stand_num += t.stand_num;
        }
    }
    for (pos, h) in free_hands().into_iter().enumerate() {
        if let Some(t) = hand_term(&view, h, player_final(h), banker_total)? {
            five[pos] = (t.weight, t.draw_num, t.stand_num);
        }
    }

    let mut cells = Vec::with_capacity(rows.len());
    for mask in rows {
        let mut w = forced.weight;
        let mut dn = forced.draw_num;
        let mut sn = forced.stand_num;
        for (pos, term) in five.iter().enumerate() {
            let bit = mask.bits() >> (4 - pos) & 1 == 1;
            if bit != invert_bits {
                w += term.0;
                dn += term.1;
                sn += term.2;
            }
        }
        if w == 0 {
            return Err(Error::EmptyConditioningSet);
        }
        cells.push(PointCell {
            prob: &hand_prob * &third_factor * ratio128(w, pair_den),
            ev_draw: ratio128(dn, w * ev_den),
            ev_stand: ratio128(sn, w),
        });
    }
    Ok(cells)
}

/// The full table of exact probabilities and conditional expectations for
/// a deal model, a set of Player rows, and every decision point.
#[derive(Debug, Clone)]
pub struct PayoffBlocks {
    pub deal: DealModel,
    pub info: InfoModel,
    rows: Vec<PlayerMask>,
    points: Vec<Point>,
    /// Indexed `[point][row]`.
    cells: Vec<Vec<PointCell>>,
}

impl PayoffBlocks {
    /// Composition-level blocks (Banker sees his hand) for the given rows.
    pub fn composition(deal: DealModel, rows: &[PlayerMask]) -> Result<Self> {
        let deal = deal.validate()?;
        let points: Vec<Point> = DecisionPoint::all()
            .into_iter()
            .map(Point::Hand)
            .collect();
        let cells = points
            .par_iter()
            .map(|pt| match pt {
                Point::Hand(p) => point_cells(deal, p.hand, p.obs, rows),
                Point::Total(_) => unreachable!(),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(PayoffBlocks {
            deal,
            info: InfoModel::FullComposition,
            rows: rows.to_vec(),
            points,
            cells,
        })
    }

    /// Blocks for a named information model: all 32 rows under full
    /// composition, the two extreme rows when Player sees only his total.
    pub fn for_model(deal: DealModel, info: InfoModel) -> Result<Self> {
        let both = [PlayerMask::STAND_ON_FIVES, PlayerMask::DRAW_ON_FIVES];
        match info {
            InfoModel::FullComposition => {
                let rows: Vec<PlayerMask> = PlayerMask::all().collect();
                Self::composition(deal, &rows)
            }
            InfoModel::BankerComposition => {
                let mut blocks = Self::composition(deal, &both)?;
                blocks.info = InfoModel::BankerComposition;
                Ok(blocks)
            }
            InfoModel::TotalsOnly => {
                Self::composition(deal, &both)?.aggregate_total_view()
            }
        }
    }

    /// Collapse composition-level blocks to the totals-only view: point
    /// probabilities add over Banker hands with the same total, and the
    /// conditional expectations are the probability-weighted averages.
    pub fn aggregate_total_view(&self) -> Result<PayoffBlocks> {
        let both = [PlayerMask::STAND_ON_FIVES, PlayerMask::DRAW_ON_FIVES];
        if self.rows != both {
            return Err(Error::WrongModel(
                "aggregation of the two total-level Player rows",
            ));
        }
        if self.points.iter().any(|p| matches!(p, Point::Total(_))) {
            return Err(Error::ExpectedCompositionBlocks);
        }
        let points: Vec<Point> = TotalPoint::all()
            .into_iter()
            .map(Point::Total)
            .collect();
        let mut cells = Vec::with_capacity(points.len());
        for pt in &points {
            let mut row_cells = Vec::with_capacity(self.rows.len());
            for (ri, _) in self.rows.iter().enumerate() {
                let mut prob = integer(0);
                let mut draw_num = integer(0);
                let mut stand_num = integer(0);
                for (pi, src) in self.points.iter().enumerate() {
                    if src.banker_total() != pt.banker_total()
                        || src.obs() != pt.obs()
                    {
                        continue;
                    }
                    let cell = &self.cells[pi][ri];
                    prob += &cell.prob;
                    draw_num += &cell.prob * &cell.ev_draw;
                    stand_num += &cell.prob * &cell.ev_stand;
                }
                if prob == integer(0) {
                    return Err(Error::ZeroAggregateMass(pt.to_string()));
                }
                row_cells.push(PointCell {
                    ev_draw: &draw_num / &prob,
                    ev_stand: &stand_num / &prob,
                    prob,
                });
            }
            cells.push(row_cells);
        }
        Ok(PayoffBlocks {
            deal: self.deal,
            info: InfoModel::TotalsOnly,
            rows: self.rows.clone(),
            points,
            cells,
        })
    }

    pub fn rows(&self) -> &[PlayerMask] {
        &self.rows
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn row_index(&self, mask: PlayerMask) -> Result<usize> {
        self.rows
            .iter()
            .position(|m| *m == mask)
            .ok_or(Error::RowNotInBlocks(mask.bits()))
    }

    pub fn point_index(&self, point: &Point) -> Option<usize> {
        self.points.binary_search(point).ok()
    }

    pub fn cell(&self, point_idx: usize, row_idx: usize) -> &PointCell {
        &self.cells[point_idx][row_idx]
    }

    /// Draw-minus-stand difference at a point for one row.
    pub fn b_diff_at(&self, point_idx: usize, row_idx: usize) -> Rational {
        let c = &self.cells[point_idx][row_idx];
        &c.ev_draw - &c.ev_stand
    }

    /// Full payoff entry for a row against an arbitrary Banker strategy,
    /// given as a draw predicate over points.
    pub fn row_entry(
        &self,
        mask: PlayerMask,
        draws: impl Fn(&Point) -> bool,
    ) -> Result<Rational> {
        let ri = self.row_index(mask)?;
        let mut total = integer(0);
        for (pi, pt) in self.points.iter().enumerate() {
            let cell = &self.cells[pi][ri];
            let ev = if draws(pt) { &cell.ev_draw } else { &cell.ev_stand };
            total += &cell.prob * ev;
        }
        Ok(total)
    }

    /// Probability that the coup reaches any decision point at all, i.e.
    /// that neither hand is a natural.
    pub fn total_probability(&self, mask: PlayerMask) -> Result<Rational> {
        let ri = self.row_index(mask)?;
        let mut total = integer(0);
        for pi in 0..self.points.len() {
            total += &self.cells[pi][ri].prob;
        }
        Ok(total)
    }
}

/// Expected sign of Player's final total against a drawing Banker, given
/// the visibly dealt cards. Exact third-card weights from the depleted
/// shoe (or the i.i.d. value weights).
pub fn banker_draw_ev(
    player_final: u8,
    banker_total: u8,
    removed: &[CardValue],
    deal: DealModel,
) -> Result<Rational> {
    let mut view = ShoeView::fresh(deal)?;
    for &v in removed {
        view.remove(v)?;
    }
    let mut num: i128 = 0;
    for l in 0..=9u8 {
        let w = view.counts[l as usize] as i128;
        num += w * sign(player_final, (banker_total + l) % 10);
    }
    Ok(ratio128(num, view.remaining as i128))
}

/// Sign of Player's final total against a standing Banker.
pub fn stand_ev(player_final: u8, banker_total: u8) -> Rational {
    ratio128(sign(player_final, banker_total), 1)
}

/// Exact conditional distribution of Player's two-card hand given that he
/// draws (support: totals 0-4 plus masked fives) or stands (totals 6-7
/// plus unmasked fives), after removing the visible cards.
pub fn player_hand_distribution(
    mask: PlayerMask,
    drawing: bool,
    removed: &[CardValue],
    deal: DealModel,
) -> Result<BTreeMap<HandPair, Rational>> {
    let mut view = ShoeView::fresh(deal)?;
    for &v in removed {
        view.remove(v)?;
    }
    let mut support: Vec<HandPair> = if drawing {
        forced_draw_hands()
    } else {
        forced_stand_hands()
    };
    for (pos, h) in free_hands().into_iter().enumerate() {
        let bit = mask.bits() >> (4 - pos) & 1 == 1;
        if bit == drawing {
            support.push(h);
        }
    }
    let mut weights: Vec<(HandPair, i128)> = Vec::new();
    let mut total: i128 = 0;
    for h in support {
        let w = view.pair_weight(h) as i128;
        if w > 0 {
            weights.push((h, w));
            total += w;
        }
    }
    if total == 0 {
        return Err(Error::EmptyConditioningSet);
    }
    Ok(weights
        .into_iter()
        .map(|(h, w)| (h, ratio128(w, total)))
        .collect())
}

/// p_S(l): the exact probability that the coup reaches decision point `l`
/// when Player uses row `mask`.
pub fn decision_point_prob(
    mask: PlayerMask,
    point: DecisionPoint,
    deal: DealModel,
) -> Result<Rational> {
    let cells = point_cells(deal, point.hand, point.obs, &[mask])?;
    Ok(cells[0].prob.clone())
}

/// a_{S,j}(l): Player's conditional expected gain at decision point `l`
/// given his row and Banker's move there.
pub fn conditional_ev(
    mask: PlayerMask,
    point: DecisionPoint,
    banker_move: Move,
    deal: DealModel,
) -> Result<Rational> {
    let cells = point_cells(deal, point.hand, point.obs, &[mask])?;
    Ok(match banker_move {
        Move::Draw => cells[0].ev_draw.clone(),
        Move::Stand => cells[0].ev_stand.clone(),
    })
}

/// b_S(l) = a_{S,1}(l) - a_{S,0}(l): Banker's stand move strictly
/// dominates at `l` against row S iff this is positive.
pub fn b_diff(
    mask: PlayerMask,
    point: DecisionPoint,
    deal: DealModel,
) -> Result<Rational> {
    let cells = point_cells(deal, point.hand, point.obs, &[mask])?;
    Ok(&cells[0].ev_draw - &cells[0].ev_stand)
}

/// a_{S,T}: Player's exact expected profit from a one-unit bet when he
/// plays row `mask` and Banker draws exactly on the points in `draws`.
/// Naturals contribute zero.
pub fn payoff_entry(
    mask: PlayerMask,
    draws: &dyn Fn(DecisionPoint) -> bool,
    deal: DealModel,
) -> Result<Rational> {
    let mut total = integer(0);
    for point in DecisionPoint::all() {
        let cells = point_cells(deal, point.hand, point.obs, &[mask])?;
        let ev = if draws(point) {
            &cells[0].ev_draw
        } else {
            &cells[0].ev_stand
        };
        total += &cells[0].prob * ev;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cards::DealModel::{Shoe, WithReplacement};

    fn cv(v: u8) -> CardValue {
        CardValue::new(v).unwrap()
    }

    fn hp(a: u8, b: u8) -> HandPair {
        HandPair::of(a, b).unwrap()
    }

    fn dp(a: u8, b: u8, obs: Option<u8>) -> DecisionPoint {
        let obs = match obs {
            Some(k) => ThirdCard::Card(cv(k)),
            None => ThirdCard::Stand,
        };
        DecisionPoint::new(hp(a, b), obs).unwrap()
    }

    #[test]
    fn banker_draw_ev_replacement_nine_vs_zero() {
        // Only a banker third card of 9 ties; everything else loses to 9.
        let ev =
            banker_draw_ev(9, 0, &[cv(0), cv(0)], WithReplacement).unwrap();
        assert_eq!(ev, ratio(12, 13));
    }

    #[test]
    fn banker_draw_ev_zero_never_positive() {
        for deal in [WithReplacement, Shoe(1), Shoe(6)] {
            let ev = banker_draw_ev(0, 0, &[cv(5), cv(5)], deal).unwrap();
            assert!(ev <= integer(0));
        }
    }

    #[test]
    fn banker_draw_ev_rejects_overdrawn_shoe() {
        let removed = [cv(5), cv(5), cv(5), cv(5), cv(5)];
        assert!(matches!(
            banker_draw_ev(3, 2, &removed, Shoe(1)),
            Err(Error::RemovalExceedsShoe { value: 5 })
        ));
        assert!(banker_draw_ev(3, 2, &removed[..4], Shoe(1)).is_ok());
    }

    #[test]
    fn stand_ev_signs() {
        assert_eq!(stand_ev(0, 7), integer(-1));
        assert_eq!(stand_ev(6, 6), integer(0));
        assert_eq!(stand_ev(9, 3), integer(1));
    }

    #[test]
    fn replacement_normalizers() {
        // Standing with every five drawn leaves totals 6 and 7: weight 32.
        let dist = player_hand_distribution(
            PlayerMask::DRAW_ON_FIVES,
            false,
            &[],
            WithReplacement,
        )
        .unwrap();
        let w67 = ratio(32, 32);
        assert_eq!(dist.values().sum::<Rational>(), w67);
        assert_eq!(dist[&hp(0, 6)], ratio(8, 32));
        // Drawing with every five stood on leaves totals 0-4: weight 89.
        let dist = player_hand_distribution(
            PlayerMask::STAND_ON_FIVES,
            true,
            &[],
            WithReplacement,
        )
        .unwrap();
        assert_eq!(dist[&hp(0, 0)], ratio(16, 89));
        assert_eq!(dist.values().sum::<Rational>(), integer(1));
    }

    #[test]
    fn shoe_distribution_matches_direct_count() {
        // Independent oracle: enumerate all two-card hands of the depleted
        // 49-card shoe by explicit card indices.
        let removed = [cv(5), cv(5), cv(9)];
        let dist = player_hand_distribution(
            PlayerMask::DRAW_ON_FIVES,
            true,
            &removed,
            Shoe(1),
        )
        .unwrap();
        let mut shoe: Vec<u8> = Vec::new();
        for v in 0..=9u8 {
            let mut n = if v == 0 { 16 } else { 4 };
            n -= removed.iter().filter(|c| c.value() == v).count();
            shoe.extend(std::iter::repeat(v).take(n));
        }
        assert_eq!(shoe.len(), 49);
        let mut counts: BTreeMap<HandPair, i64> = BTreeMap::new();
        let mut in_support = 0i64;
        for i in 0..shoe.len() {
            for j in i + 1..shoe.len() {
                let h = hp(shoe[i], shoe[j]);
                let draws = h.total() <= 5; // mask 31 draws on every five
                if draws {
                    *counts.entry(h).or_default() += 1;
                    in_support += 1;
                }
            }
        }
        assert_eq!(dist.len(), counts.len());
        for (h, n) in counts {
            assert_eq!(dist[&h], ratio(n, in_support), "hand {h}");
        }
    }

    #[test]
    fn decision_point_prob_replacement_stand() {
        let p = decision_point_prob(
            PlayerMask::DRAW_ON_FIVES,
            dp(0, 0, None),
            WithReplacement,
        )
        .unwrap();
        assert_eq!(p, ratio(16, 169) * ratio(32, 169));
        assert_eq!(p, ratio(512, 28561));
    }

    #[test]
    fn stand_prob_shrinks_as_mask_grows() {
        for deal in [WithReplacement, Shoe(1), Shoe(6)] {
            let point = dp(0, 6, None);
            let p0 = decision_point_prob(
                PlayerMask::STAND_ON_FIVES,
                point,
                deal,
            )
            .unwrap();
            let p31 =
                decision_point_prob(PlayerMask::DRAW_ON_FIVES, point, deal)
                    .unwrap();
            assert!(p0 >= p31);
        }
    }

    #[test]
    fn conditional_ev_bounded() {
        for deal in [WithReplacement, Shoe(1)] {
            for point in [dp(3, 3, Some(6)), dp(0, 6, None), dp(0, 0, Some(9))]
            {
                for mv in [Move::Draw, Move::Stand] {
                    for mask in
                        [PlayerMask::STAND_ON_FIVES, PlayerMask::DRAW_ON_FIVES]
                    {
                        let ev = conditional_ev(mask, point, mv, deal).unwrap();
                        assert!(ev >= integer(-1) && ev <= integer(1));
                    }
                }
            }
        }
    }

    // Displayed closed forms for the draw-stand difference at (3,3,6).
    fn expected_b31_336(d: i64) -> Rational {
        ratio(-2 * (80 * d * d * d - 832 * d * d + 135 * d - 2), 1)
            / ratio((52 * d - 5) * (840 * d * d - 114 * d + 1), 1)
    }

    fn expected_b0_336(d: i64) -> Rational {
        ratio(-2 * (848 * d * d * d - 952 * d * d + 135 * d - 2), 1)
            / ratio((52 * d - 5) * (712 * d * d - 102 * d + 1), 1)
    }

    #[test]
    fn b_diff_at_3_3_6_matches_closed_forms() {
        let point = dp(3, 3, Some(6));
        for d in [1u32, 6, 10, 11, 12] {
            let b31 =
                b_diff(PlayerMask::DRAW_ON_FIVES, point, Shoe(d)).unwrap();
            assert_eq!(b31, expected_b31_336(d as i64), "b31 at d={d}");
            let b0 =
                b_diff(PlayerMask::STAND_ON_FIVES, point, Shoe(d)).unwrap();
            assert_eq!(b0, expected_b0_336(d as i64), "b0 at d={d}");
        }
        // Sign flips: positive through d=10, negative from d=11 on.
        assert!(expected_b31_336(10) > integer(0));
        assert!(expected_b31_336(11) < integer(0));
        assert!(expected_b0_336(1) < integer(0));
    }

    #[test]
    fn b_diff_totals_forced_rows() {
        for mask in [PlayerMask::STAND_ON_FIVES, PlayerMask::DRAW_ON_FIVES] {
            // Banker total 7 stands against anything; totals <= 2 draw.
            assert!(b_diff(mask, dp(0, 7, Some(5)), Shoe(6)).unwrap()
                > integer(0));
            assert!(b_diff(mask, dp(1, 1, Some(9)), Shoe(6)).unwrap()
                < integer(0));
            assert!(b_diff(mask, dp(0, 0, None), WithReplacement).unwrap()
                < integer(0));
        }
    }

    #[test]
    fn b_diff_2_3_4_flips_at_nine_decks() {
        // Against the optimal row mixture, Banker's preference at
        // ((2,3), third card 4) flips from stand to draw between eight
        // and nine decks.
        let point = dp(2, 3, Some(4));
        let mixed_b = |d: u32, p: Rational| -> Rational {
            let b19 =
                b_diff(PlayerMask::new(19).unwrap(), point, Shoe(d)).unwrap();
            let b27 =
                b_diff(PlayerMask::new(27).unwrap(), point, Shoe(d)).unwrap();
            (integer(1) - &p) * b19 + p * b27
        };
        // Closed-form mixing weights (12d-1)(16d^2-14d+1)/(32d^2(11d-1)).
        let p8 = ratio(95 * 919, 32 * 64 * 87);
        let p9 = ratio(107 * 1171, 32 * 81 * 98);
        assert!(mixed_b(8, p8) > integer(0));
        assert!(mixed_b(9, p9) < integer(0));
        // The all-draw row alone already prefers drawing at d=9, while the
        // all-stand row still prefers Banker to stand.
        assert!(
            b_diff(PlayerMask::DRAW_ON_FIVES, point, Shoe(9)).unwrap()
                < integer(0)
        );
        assert!(
            b_diff(PlayerMask::STAND_ON_FIVES, point, Shoe(9)).unwrap()
                > integer(0)
        );
    }

    #[test]
    fn blocks_agree_with_single_point_ops() {
        // The batch builder and the single-point operations must be the
        // same function.
        let rows = [PlayerMask::new(19).unwrap(), PlayerMask::new(27).unwrap()];
        for deal in [WithReplacement, Shoe(2)] {
            let blocks = PayoffBlocks::composition(deal, &rows).unwrap();
            for point in [dp(3, 3, Some(6)), dp(8, 8, None), dp(0, 3, Some(9))]
            {
                let pi = blocks
                    .point_index(&Point::Hand(point))
                    .expect("point present");
                for (ri, mask) in rows.iter().enumerate() {
                    let cell = blocks.cell(pi, ri);
                    assert_eq!(
                        cell.prob,
                        decision_point_prob(*mask, point, deal).unwrap()
                    );
                    assert_eq!(
                        cell.ev_draw,
                        conditional_ev(*mask, point, Move::Draw, deal)
                            .unwrap()
                    );
                    assert_eq!(
                        cell.ev_stand,
                        conditional_ev(*mask, point, Move::Stand, deal)
                            .unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn aggregation_preserves_total_mass() {
        let blocks = PayoffBlocks::for_model(
            Shoe(2),
            InfoModel::BankerComposition,
        )
        .unwrap();
        let agg = blocks.aggregate_total_view().unwrap();
        assert_eq!(agg.points().len(), 88);
        for mask in [PlayerMask::STAND_ON_FIVES, PlayerMask::DRAW_ON_FIVES] {
            assert_eq!(
                blocks.total_probability(mask).unwrap(),
                agg.total_probability(mask).unwrap()
            );
        }
    }

    #[test]
    fn aggregated_b_signs_at_5_4_d3() {
        // The two total-level rows disagree at point (5,4) for d=3:
        // the all-draw row wants Banker to stand, the all-stand row to draw.
        let agg =
            PayoffBlocks::for_model(Shoe(3), InfoModel::TotalsOnly).unwrap();
        let pt = Point::Total(TotalPoint {
            total: 5,
            obs: ThirdCard::Card(cv(4)),
        });
        let pi = agg.point_index(&pt).unwrap();
        let b0 = agg.b_diff_at(pi, 0);
        let b1 = agg.b_diff_at(pi, 1);
        assert!(b0 > integer(0));
        assert!(b1 < integer(0));
    }
}
