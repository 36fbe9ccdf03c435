//! Independent verification paths.
//!
//! The Monte Carlo dealer plays whole coups card by card; the brute-force
//! solver materializes every column of a small two-row game as a line and
//! maximizes the exact lower envelope by convex-hull elimination; the
//! saddle check re-verifies both optimality inequality families directly
//! from the payoff blocks. None of these reuse the analytic pipeline's
//! classification, folding, or crossover machinery.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::cards::{
    enumerate_banker_hands, DealModel, DecisionPoint, HandPair, InfoModel,
    Move, PlayerMask, ThirdCard,
};
use crate::envelope::TwoRowGame;
use crate::error::{Error, Result};
use crate::payoff::{integer, PayoffBlocks, Point, Rational, TotalPoint};
use crate::solver::GameSolution;

/// Generator used by the dealer; recorded in every report.
pub const RNG_ALGORITHM: &str = "chacha8";

const TRIALS_PER_CHUNK: u64 = 1 << 16;

/// A pure Banker move table, total on its decision-point space.
#[derive(Debug, Clone)]
pub enum MoveTable {
    /// One move per composition-level point (all 484).
    ByHand(BTreeMap<DecisionPoint, Move>),
    /// One move per total-level point (all 88).
    ByTotal(BTreeMap<TotalPoint, Move>),
}

impl MoveTable {
    pub fn by_hand(moves: BTreeMap<DecisionPoint, Move>) -> Result<Self> {
        for point in DecisionPoint::all() {
            if !moves.contains_key(&point) {
                return Err(Error::IncompleteMoveTable(point.to_string()));
            }
        }
        Ok(MoveTable::ByHand(moves))
    }

    pub fn by_total(moves: BTreeMap<TotalPoint, Move>) -> Result<Self> {
        for point in TotalPoint::all() {
            if !moves.contains_key(&point) {
                return Err(Error::IncompleteMoveTable(point.to_string()));
            }
        }
        Ok(MoveTable::ByTotal(moves))
    }

    pub fn draws(&self, hand: HandPair, obs: ThirdCard) -> bool {
        match self {
            MoveTable::ByHand(m) => {
                m[&DecisionPoint { hand, obs }] == Move::Draw
            }
            MoveTable::ByTotal(m) => {
                m[&TotalPoint {
                    total: hand.total(),
                    obs,
                }] == Move::Draw
            }
        }
    }

    /// The induced composition-level draw predicate.
    pub fn draws_at(&self, point: DecisionPoint) -> bool {
        self.draws(point.hand, point.obs)
    }
}

#[derive(Debug, Clone)]
pub struct SimulationReport {
    pub trials: u64,
    pub mean: f64,
    pub std_error: f64,
    /// The exact value the simulation is checked against.
    pub exact: Rational,
    /// Standardized deviation of the observed mean from `exact`.
    pub z: f64,
    /// Fraction of coups ended by a natural.
    pub natural_fraction: f64,
    pub rng: &'static str,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, Default)]
struct TallySums {
    gain: i64,
    nonzero: u64,
    naturals: u64,
}

impl TallySums {
    fn merge(self, other: TallySums) -> TallySums {
        TallySums {
            gain: self.gain + other.gain,
            nonzero: self.nonzero + other.nonzero,
            naturals: self.naturals + other.naturals,
        }
    }
}

/// One fresh-shoe coup dealer.
struct Dealer {
    counts: [u32; 10],
    remaining: u32,
    template: [u32; 10],
    total_cards: u32,
    depleting: bool,
}

impl Dealer {
    fn new(deal: DealModel) -> Dealer {
        match deal {
            DealModel::Shoe(d) => {
                let mut template = [4 * d; 10];
                template[0] = 16 * d;
                Dealer {
                    counts: template,
                    remaining: 52 * d,
                    template,
                    total_cards: 52 * d,
                    depleting: true,
                }
            }
            DealModel::WithReplacement => {
                let mut template = [4u32; 10];
                template[0] = 16;
                Dealer {
                    counts: template,
                    remaining: 52,
                    template,
                    total_cards: 52,
                    depleting: false,
                }
            }
        }
    }

    /// Fresh shoe for a new coup.
    fn reshuffle(&mut self) {
        if self.depleting {
            self.counts = self.template;
            self.remaining = self.total_cards;
        }
    }

    /// Draw one card value, uniform over remaining cards; equivalent to
    /// taking the next card of a uniformly shuffled shoe.
    fn draw(&mut self, rng: &mut ChaCha8Rng) -> u8 {
        let mut idx = rng.gen_range(0..self.remaining);
        for v in 0..10u8 {
            let c = self.counts[v as usize];
            if idx < c {
                if self.depleting {
                    self.counts[v as usize] -= 1;
                    self.remaining -= 1;
                }
                return v;
            }
            idx -= c;
        }
        unreachable!("card counts cover the draw range")
    }
}

fn player_draw_decision(mask: PlayerMask, total: u8, lo: u8) -> bool {
    match total {
        0..=4 => true,
        6 | 7 => false,
        _ => {
            let pos = match lo {
                0 => 0,
                1 => 1,
                2 => 2,
                6 => 3,
                _ => 4,
            };
            mask.bits() >> (4 - pos) & 1 == 1
        }
    }
}

/// Per-coup strategy hooks, so pure-row/pure-table and fully mixed
/// simulations share one dealer loop.
struct CoupStrategies<'a> {
    player_mask: Box<dyn Fn(&mut ChaCha8Rng) -> PlayerMask + Sync + 'a>,
    banker_draws:
        Box<dyn Fn(HandPair, ThirdCard, &mut ChaCha8Rng) -> bool + Sync + 'a>,
}

fn run_trials(
    deal: DealModel,
    strategies: &CoupStrategies<'_>,
    trials: u64,
    seed: u64,
) -> TallySums {
    let chunks = trials.div_ceil(TRIALS_PER_CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(chunk + 1);
            let n = TRIALS_PER_CHUNK.min(trials - chunk * TRIALS_PER_CHUNK);
            let mut dealer = Dealer::new(deal);
            let mut t = TallySums::default();
            for _ in 0..n {
                dealer.reshuffle();
                let (x1, x2) = (dealer.draw(&mut rng), dealer.draw(&mut rng));
                let (y1, y2) = (dealer.draw(&mut rng), dealer.draw(&mut rng));
                let x = (x1 + x2) % 10;
                let y = (y1 + y2) % 10;
                let gain = if x >= 8 || y >= 8 {
                    t.naturals += 1;
                    (x > y) as i64 - (y > x) as i64
                } else {
                    let mask = (strategies.player_mask)(&mut rng);
                    let (x_final, obs) = if player_draw_decision(
                        mask,
                        x,
                        x1.min(x2),
                    ) {
                        let c = dealer.draw(&mut rng);
                        (
                            (x + c) % 10,
                            ThirdCard::Card(
                                crate::cards::CardValue::new(c).unwrap(),
                            ),
                        )
                    } else {
                        (x, ThirdCard::Stand)
                    };
                    let banker_hand = HandPair::of(y1, y2).unwrap();
                    let y_final = if (strategies.banker_draws)(
                        banker_hand,
                        obs,
                        &mut rng,
                    ) {
                        (y + dealer.draw(&mut rng)) % 10
                    } else {
                        y
                    };
                    (x_final > y_final) as i64 - (y_final > x_final) as i64
                };
                t.gain += gain;
                t.nonzero += gain.unsigned_abs();
            }
            t
        })
        .reduce(TallySums::default, TallySums::merge)
}

fn report_from(
    tally: TallySums,
    trials: u64,
    exact: Rational,
    seed: u64,
) -> SimulationReport {
    let n = trials as f64;
    let mean = tally.gain as f64 / n;
    let variance = if trials > 1 {
        (tally.nonzero as f64 - n * mean * mean) / (n - 1.0)
    } else {
        0.0
    };
    let std_error = (variance.max(0.0) / n).sqrt();
    let exact_f = rational_to_f64(&exact);
    let z = if std_error > 0.0 {
        (mean - exact_f) / std_error
    } else if mean == exact_f {
        0.0
    } else {
        f64::INFINITY
    };
    SimulationReport {
        trials,
        mean,
        std_error,
        exact,
        z,
        natural_fraction: tally.naturals as f64 / n,
        rng: RNG_ALGORITHM,
        seed,
    }
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    use num::ToPrimitive;
    r.to_f64().expect("rational in [-1, 1] converts")
}

/// Deal complete coups under a pure Player row and a pure Banker move
/// table; the exact reference is the analytic payoff entry for the same
/// pair. Deterministic for a given seed.
pub fn simulate_payoff(
    mask: PlayerMask,
    table: &MoveTable,
    deal: DealModel,
    trials: u64,
    seed: u64,
) -> Result<SimulationReport> {
    if trials == 0 {
        return Err(Error::NoTrials);
    }
    let deal = deal.validate()?;
    let exact =
        crate::payoff::payoff_entry(mask, &|pt| table.draws_at(pt), deal)?;
    let strategies = CoupStrategies {
        player_mask: Box::new(move |_| mask),
        banker_draws: Box::new(|hand, obs, _| table.draws(hand, obs)),
    };
    let tally = run_trials(deal, &strategies, trials, seed);
    Ok(report_from(tally, trials, exact, seed))
}

/// Deal complete coups with both sides playing a solved mixture; the
/// exact reference is the game value.
pub fn simulate_solution(
    solution: &GameSolution,
    trials: u64,
    seed: u64,
) -> Result<SimulationReport> {
    if trials == 0 {
        return Err(Error::NoTrials);
    }
    let deal = solution.deal.validate()?;
    let p = rational_to_f64(&solution.player.p);
    let q = solution
        .banker
        .q
        .as_ref()
        .map(rational_to_f64)
        .unwrap_or(0.0);
    let rows = solution.player.rows;
    let banker = &solution.banker;
    let strategies = CoupStrategies {
        player_mask: Box::new(move |rng: &mut ChaCha8Rng| {
            if rng.gen_bool(p) {
                rows[1]
            } else {
                rows[0]
            }
        }),
        banker_draws: Box::new(move |hand, obs, rng: &mut ChaCha8Rng| {
            let point = match solution.info {
                InfoModel::TotalsOnly => Point::Total(TotalPoint {
                    total: hand.total(),
                    obs,
                }),
                _ => Point::Hand(DecisionPoint { hand, obs }),
            };
            if Some(point) == banker.mix_point {
                rng.gen_bool(q)
            } else {
                banker.moves[&point] == Move::Draw
            }
        }),
    };
    let tally = run_trials(deal, &strategies, trials, seed);
    Ok(report_from(tally, trials, solution.value.clone(), seed))
}

/// Exact probabilities of the two-hand deal outcomes, by direct
/// enumeration of both hands (nothing shared with the payoff module).
#[derive(Debug, Clone)]
pub struct DealProbabilities {
    pub both_nonnatural: Rational,
    pub player_natural_win: Rational,
    pub banker_natural_win: Rational,
}

pub fn deal_probabilities(deal: DealModel) -> Result<DealProbabilities> {
    let deal = deal.validate()?;
    let fresh: [i64; 10] = match deal {
        DealModel::Shoe(d) => {
            let mut c = [4 * d as i64; 10];
            c[0] = 16 * d as i64;
            c
        }
        DealModel::WithReplacement => {
            let mut c = [1i64; 10];
            c[0] = 4;
            c
        }
    };
    let depleting = matches!(deal, DealModel::Shoe(_));
    let pair_count = |counts: &[i64; 10], a: usize, b: usize| -> i64 {
        if depleting {
            if a == b {
                counts[a] * (counts[a] - 1) / 2
            } else {
                counts[a] * counts[b]
            }
        } else if a == b {
            counts[a] * counts[a]
        } else {
            2 * counts[a] * counts[b]
        }
    };
    let total_pairs = |counts: &[i64; 10]| -> i64 {
        if depleting {
            let n: i64 = counts.iter().sum();
            n * (n - 1) / 2
        } else {
            169
        }
    };
    let mut both = integer(0);
    let mut player_nat = integer(0);
    let mut banker_nat = integer(0);
    let full_pairs = total_pairs(&fresh);
    for a in 0..10usize {
        for b in a..10usize {
            let w_player = pair_count(&fresh, a, b);
            if w_player == 0 {
                continue;
            }
            let mut rest = fresh;
            if depleting {
                rest[a] -= 1;
                rest[b] -= 1;
            }
            let rest_pairs = total_pairs(&rest);
            let x = (a + b) % 10;
            for c in 0..10usize {
                for e in c..10usize {
                    let w_banker = pair_count(&rest, c, e);
                    if w_banker == 0 {
                        continue;
                    }
                    let y = (c + e) % 10;
                    let prob = Rational::new(
                        (w_player as i128 * w_banker as i128).into(),
                        (full_pairs as i128 * rest_pairs as i128).into(),
                    );
                    if x <= 7 && y <= 7 {
                        both += &prob;
                    }
                    if x >= 8 && x > y {
                        player_nat += &prob;
                    }
                    if y >= 8 && y > x {
                        banker_nat += &prob;
                    }
                }
            }
        }
    }
    Ok(DealProbabilities {
        both_nonnatural: both,
        player_natural_win: player_nat,
        banker_natural_win: banker_nat,
    })
}

/// A column of the brute-force game: Player row payoffs as a line in the
/// mixing probability.
#[derive(Debug, Clone)]
struct ColumnLine {
    bits: u32,
    at_zero: Rational,
    at_one: Rational,
}

impl ColumnLine {
    fn slope(&self) -> Rational {
        &self.at_one - &self.at_zero
    }

    fn eval(&self, p: &Rational) -> Rational {
        &self.at_zero + &self.slope() * p
    }
}

#[derive(Debug, Clone)]
pub struct BruteForceSolution {
    pub value: Rational,
    pub p_star: Rational,
    pub q_star: Option<Rational>,
    /// Draw sets of the two columns meeting at the maximum, when interior.
    pub kernel_columns: Option<[Vec<Point>; 2]>,
}

/// Solve a two-row game by materializing all 2^n columns as lines and
/// maximizing their exact lower envelope. Refuses more than 16 points.
pub fn brute_force_solve_2xn(game: &TwoRowGame) -> Result<BruteForceSolution> {
    let n = game.free.len();
    if n > 16 {
        return Err(Error::TooManyFreePoints(n));
    }
    let mut lines = Vec::with_capacity(1 << n);
    for bits in 0u32..1 << n {
        let draws: Vec<bool> = (0..n)
            .map(|l| bits >> (n - 1 - l) & 1 == 1)
            .collect();
        let pay = game.column_payoffs(&draws);
        lines.push(ColumnLine {
            bits,
            at_zero: pay[0].clone(),
            at_one: pay[1].clone(),
        });
    }
    // Lower envelope by slope-ordered elimination: slopes descend from
    // left to right on a concave envelope.
    lines.sort_by(|a, b| {
        b.slope()
            .cmp(&a.slope())
            .then_with(|| a.at_zero.cmp(&b.at_zero))
    });
    lines.dedup_by(|next, kept| next.slope() == kept.slope());
    let cross = |a: &ColumnLine, b: &ColumnLine| -> Rational {
        (&b.at_zero - &a.at_zero) / (&a.slope() - &b.slope())
    };
    let mut hull: Vec<ColumnLine> = Vec::new();
    for line in lines {
        while hull.len() >= 2 {
            let last = &hull[hull.len() - 1];
            let prev = &hull[hull.len() - 2];
            if cross(prev, &line) <= cross(prev, last) {
                hull.pop();
            } else {
                break;
            }
        }
        if hull.len() == 1 && hull[0].eval(&integer(0)) <= line.at_zero {
            // A single steeper line is only replaced if the new one is
            // strictly below it somewhere; handled by the breakpoint test
            // once a second line arrives.
        }
        hull.push(line);
    }

    // Candidate maximizers: the endpoints and every hull breakpoint.
    let mut best_p = integer(0);
    let mut best_v = hull
        .iter()
        .map(|l| l.eval(&integer(0)))
        .min()
        .expect("hull nonempty");
    let mut best_pair: Option<(usize, usize)> = None;
    let at_one = hull
        .iter()
        .map(|l| l.eval(&integer(1)))
        .min()
        .expect("hull nonempty");
    if at_one > best_v {
        best_v = at_one;
        best_p = integer(1);
    }
    for i in 0..hull.len().saturating_sub(1) {
        let x = cross(&hull[i], &hull[i + 1]);
        if x <= integer(0) || x >= integer(1) {
            continue;
        }
        let v = hull[i].eval(&x);
        if v > best_v {
            best_v = v;
            best_p = x;
            best_pair = Some((i, i + 1));
        }
    }

    let (q_star, kernel_columns) = match best_pair {
        None => (None, None),
        Some((i, j)) => {
            // Order the pair with the smaller draw set first, so the
            // mixture weight refers to the draw-heavier column.
            let (a, b) = if hull[i].bits.count_ones()
                <= hull[j].bits.count_ones()
            {
                (&hull[i], &hull[j])
            } else {
                (&hull[j], &hull[i])
            };
            // Column mixture (1-q, q) equalizing the two rows of the
            // 2x2 game with columns a and b.
            let num = &a.at_zero - &a.at_one;
            let den = (&a.at_zero - &a.at_one) + (&b.at_one - &b.at_zero);
            let q = num / den;
            let to_points = |bits: u32| -> Vec<Point> {
                (0..n)
                    .filter(|l| bits >> (n - 1 - l) & 1 == 1)
                    .map(|l| game.free[l].point)
                    .collect()
            };
            (Some(q), Some([to_points(a.bits), to_points(b.bits)]))
        }
    };
    Ok(BruteForceSolution {
        value: best_v,
        p_star: best_p,
        q_star,
        kernel_columns,
    })
}

/// Re-verify both optimality inequality families for a proposed solution
/// by direct evaluation over the payoff blocks: Player's mixture
/// guarantees at least v against every Banker column of the unreduced
/// game, and Banker's mixture holds every row to at most v.
pub fn saddle_check(
    blocks: &PayoffBlocks,
    solution: &GameSolution,
) -> Result<bool> {
    let [r0, r1] = solution.player.rows;
    let (i0, i1) = (blocks.row_index(r0)?, blocks.row_index(r1)?);
    let p = &solution.player.p;
    let one_minus_p = integer(1) - p;

    // Player side: the minimum over all Banker columns decomposes into an
    // independent move choice at every decision point.
    let mut player_min = integer(0);
    for pi in 0..blocks.points().len() {
        let (c0, c1) = (blocks.cell(pi, i0), blocks.cell(pi, i1));
        let stand = &one_minus_p * (&c0.prob * &c0.ev_stand)
            + p * (&c1.prob * &c1.ev_stand);
        let draw = &one_minus_p * (&c0.prob * &c0.ev_draw)
            + p * (&c1.prob * &c1.ev_draw);
        player_min += stand.min(draw);
    }
    if player_min < solution.value {
        return Ok(false);
    }

    // Banker side: every row of the game held to at most v.
    let q = solution
        .banker
        .q
        .clone()
        .unwrap_or_else(|| integer(0));
    let one_minus_q = integer(1) - &q;
    for ri in 0..blocks.rows().len() {
        let mut pay = integer(0);
        for (pi, pt) in blocks.points().iter().enumerate() {
            let cell = blocks.cell(pi, ri);
            let draw_prob = if Some(*pt) == solution.banker.mix_point {
                q.clone()
            } else {
                match solution.banker.moves[pt] {
                    Move::Draw => integer(1),
                    Move::Stand => integer(0),
                }
            };
            let keep = &one_minus_q + &q - &draw_prob; // 1 - draw_prob
            pay += &cell.prob
                * (&draw_prob * &cell.ev_draw + &keep * &cell.ev_stand);
        }
        if pay > solution.value {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Helper for building a pure move table from a solved Banker strategy by
/// resolving the mixing point to a fixed move.
pub fn resolve_table(
    solution: &GameSolution,
    mix_move: Move,
) -> Result<MoveTable> {
    match solution.info {
        InfoModel::TotalsOnly => {
            let mut map = BTreeMap::new();
            for point in TotalPoint::all() {
                let p = Point::Total(point);
                let mv = if Some(p) == solution.banker.mix_point {
                    mix_move
                } else {
                    solution.banker.moves[&p]
                };
                map.insert(point, mv);
            }
            MoveTable::by_total(map)
        }
        _ => {
            let mut map = BTreeMap::new();
            for point in DecisionPoint::all() {
                let p = Point::Hand(point);
                let mv = if Some(p) == solution.banker.mix_point {
                    mix_move
                } else {
                    solution.banker.moves[&p]
                };
                map.insert(point, mv);
            }
            MoveTable::by_hand(map)
        }
    }
}

/// A deterministic pseudo-random pure Banker table for cross-validation:
/// draws where the seeded generator says so.
pub fn random_move_table(seed: u64) -> MoveTable {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut map = BTreeMap::new();
    for hand in enumerate_banker_hands() {
        for obs in ThirdCard::all() {
            map.insert(DecisionPoint { hand, obs }, if rng.gen_bool(0.5) {
                Move::Draw
            } else {
                Move::Stand
            });
        }
    }
    MoveTable::ByHand(map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::payoff::ratio;

    #[test]
    fn deterministic_reports() {
        let table = random_move_table(11);
        let a = simulate_payoff(
            PlayerMask::DRAW_ON_FIVES,
            &table,
            DealModel::Shoe(1),
            20_000,
            42,
        )
        .unwrap();
        let b = simulate_payoff(
            PlayerMask::DRAW_ON_FIVES,
            &table,
            DealModel::Shoe(1),
            20_000,
            42,
        )
        .unwrap();
        assert_eq!(a.mean, b.mean);
        assert_eq!(a.std_error, b.std_error);
        assert_eq!(a.natural_fraction, b.natural_fraction);
        assert_eq!(a.rng, "chacha8");
    }

    #[test]
    fn draw_vs_stand_tables_differ() {
        let all = |mv: Move| {
            let mut map = BTreeMap::new();
            for hand in enumerate_banker_hands() {
                for obs in ThirdCard::all() {
                    map.insert(DecisionPoint { hand, obs }, mv);
                }
            }
            MoveTable::by_hand(map).unwrap()
        };
        let draw = simulate_payoff(
            PlayerMask::STAND_ON_FIVES,
            &all(Move::Draw),
            DealModel::WithReplacement,
            50_000,
            7,
        )
        .unwrap();
        let stand = simulate_payoff(
            PlayerMask::STAND_ON_FIVES,
            &all(Move::Stand),
            DealModel::WithReplacement,
            50_000,
            7,
        )
        .unwrap();
        assert_ne!(draw.mean, stand.mean);
    }

    #[test]
    fn simulation_agrees_with_exact_value() {
        let table = random_move_table(3);
        let report = simulate_payoff(
            PlayerMask::new(19).unwrap(),
            &table,
            DealModel::Shoe(6),
            200_000,
            123,
        )
        .unwrap();
        assert!(report.z.abs() <= 4.0, "z = {}", report.z);
    }

    #[test]
    fn natural_symmetry_exact() {
        for deal in [
            DealModel::Shoe(1),
            DealModel::Shoe(6),
            DealModel::WithReplacement,
        ] {
            let probs = deal_probabilities(deal).unwrap();
            assert_eq!(probs.player_natural_win, probs.banker_natural_win);
        }
    }

    #[test]
    fn incomplete_table_rejected() {
        let mut map = BTreeMap::new();
        for hand in enumerate_banker_hands() {
            for obs in ThirdCard::all() {
                map.insert(DecisionPoint { hand, obs }, Move::Draw);
            }
        }
        map.remove(&DecisionPoint {
            hand: HandPair::of(0, 0).unwrap(),
            obs: ThirdCard::Stand,
        });
        assert!(matches!(
            MoveTable::by_hand(map),
            Err(Error::IncompleteMoveTable(_))
        ));
    }

    #[test]
    fn brute_force_identity_game() {
        use crate::envelope::{EValues, FreePoint};
        let game = TwoRowGame {
            rows: [PlayerMask::STAND_ON_FIVES, PlayerMask::DRAW_ON_FIVES],
            consts: [integer(0), integer(0)],
            free: vec![FreePoint {
                point: Point::Total(TotalPoint {
                    total: 6,
                    obs: ThirdCard::Stand,
                }),
                e: [
                    EValues {
                        stand: ratio(1, 1),
                        draw: ratio(0, 1),
                    },
                    EValues {
                        stand: ratio(0, 1),
                        draw: ratio(1, 1),
                    },
                ],
            }],
        };
        let sol = brute_force_solve_2xn(&game).unwrap();
        assert_eq!(sol.value, ratio(1, 2));
        assert_eq!(sol.p_star, ratio(1, 2));
        assert_eq!(sol.q_star, Some(ratio(1, 2)));
    }

    #[test]
    fn brute_force_refuses_large_games() {
        use crate::envelope::{EValues, FreePoint};
        let fp = |t: u8| FreePoint {
            point: Point::Total(TotalPoint {
                total: t % 8,
                obs: ThirdCard::Card(crate::cards::CardValue::new(t / 8).unwrap()),
            }),
            e: [
                EValues {
                    stand: ratio(1, 1),
                    draw: ratio(0, 1),
                },
                EValues {
                    stand: ratio(0, 1),
                    draw: ratio(1, 1),
                },
            ],
        };
        let game = TwoRowGame {
            rows: [PlayerMask::STAND_ON_FIVES, PlayerMask::DRAW_ON_FIVES],
            consts: [integer(0), integer(0)],
            free: (0..17).map(fp).collect(),
        };
        assert!(matches!(
            brute_force_solve_2xn(&game),
            Err(Error::TooManyFreePoints(17))
        ));
    }
}
