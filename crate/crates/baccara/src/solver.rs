//! Per-model solution engine.
//!
//! Models where Player sees only his total have two rows and solve
//! directly by the lower envelope. Under full composition the kernel rows
//! are always masks 19 and 27 (draw on (0,5), (6,9), (7,8); stand on
//! (2,3); mix on (1,4)): the engine envelope-solves that two-row
//! restriction, then certifies the result against all 32 rows and every
//! Banker completion, repairing the column support from the failing
//! components if the certificate ever fails.

use std::collections::BTreeMap;

use num::{Signed, Zero};

use crate::cards::{
    CardValue, DealModel, DecisionPoint, HandPair, InfoModel, Move,
    PlayerMask, ThirdCard,
};
use crate::dominance::{classify, reduce_game, ClassificationTable, Mark, ReducedGame};
use crate::envelope::{self, Kernel, TwoRowGame};
use crate::error::{Error, Result};
use crate::payoff::{integer, ratio, PayoffBlocks, Point, Rational, TotalPoint};

/// Rounds of kernel-column repair attempted before giving up.
const MAX_REPAIR_ROUNDS: u32 = 8;

/// Full margin vectors are materialized only for small reduced games.
const FULL_MARGIN_LIMIT: usize = 12;

/// Cap on explicitly enumerated failing columns.
const MAX_REPORTED_FAILURES: usize = 64;

/// Player's optimal mixture: weight `1 - p` on `rows[0]`, `p` on `rows[1]`.
#[derive(Debug, Clone)]
pub struct PlayerStrategy {
    pub rows: [PlayerMask; 2],
    pub p: Rational,
}

impl PlayerStrategy {
    pub fn weights(&self) -> [(PlayerMask, Rational); 2] {
        [
            (self.rows[0], integer(1) - &self.p),
            (self.rows[1], self.p.clone()),
        ]
    }
}

/// Banker's optimal strategy: a pure move at every decision point except
/// at most one mixing point, drawn there with probability `q`.
#[derive(Debug, Clone)]
pub struct BankerStrategy {
    pub moves: BTreeMap<Point, Move>,
    pub mix_point: Option<Point>,
    pub q: Option<Rational>,
}

impl BankerStrategy {
    /// Move in the kernel column without (`false`) or with (`true`) the
    /// mixing-point draw.
    pub fn column_move(&self, point: &Point, draw_at_mix: bool) -> Move {
        if Some(*point) == self.mix_point {
            if draw_at_mix {
                Move::Draw
            } else {
                Move::Stand
            }
        } else {
            self.moves[point]
        }
    }

    /// Exact draw probability at a point.
    pub fn draw_probability(&self, point: &Point) -> Rational {
        if Some(*point) == self.mix_point {
            self.q.clone().unwrap_or_else(|| integer(0))
        } else {
            match self.moves[point] {
                Move::Draw => integer(1),
                Move::Stand => integer(0),
            }
        }
    }
}

/// Exact optimality check of a proposed strategy pair.
#[derive(Debug, Clone)]
pub struct CertificateReport {
    /// Minimum over Banker completions of Player's mixed payoff minus v;
    /// nonnegative iff Player guarantees v.
    pub player_worst_margin: Rational,
    pub player_ok: bool,
    /// Failing completions (draw sets over the contested points), capped.
    pub player_failures: Vec<Vec<Point>>,
    /// Margins of all completions, column bits most significant first in
    /// canonical contested order; only for small games.
    pub player_margins: Option<Vec<Rational>>,
    /// Maximum over game rows of the payoff against Banker's mixture
    /// minus v; nonpositive iff Banker holds Player to v.
    pub banker_worst_margin: Rational,
    pub banker_ok: bool,
    pub banker_failures: Vec<PlayerMask>,
    pub banker_margins: Vec<(PlayerMask, Rational)>,
}

impl CertificateReport {
    pub fn ok(&self) -> bool {
        self.player_ok && self.banker_ok
    }
}

/// A solved game: both mixtures, the exact value, the kernel that pinned
/// them, and the certificate (absent on closed-form transcriptions).
#[derive(Debug, Clone)]
pub struct GameSolution {
    pub deal: DealModel,
    pub info: InfoModel,
    pub player: PlayerStrategy,
    pub banker: BankerStrategy,
    pub value: Rational,
    pub kernel: Option<Kernel>,
    pub certificate: Option<CertificateReport>,
    /// Whether optimality is additionally claimed to be unique.
    pub unique_claimed: bool,
}

fn hand_point(a: u8, b: u8, obs: Option<u8>) -> Point {
    let obs = match obs {
        Some(k) => ThirdCard::Card(CardValue::new_unchecked(k)),
        None => ThirdCard::Stand,
    };
    Point::Hand(DecisionPoint::new(HandPair::of(a, b).unwrap(), obs).unwrap())
}

fn total_point(total: u8, obs: Option<u8>) -> Point {
    let obs = match obs {
        Some(k) => ThirdCard::Card(CardValue::new_unchecked(k)),
        None => ThirdCard::Stand,
    };
    Point::Total(TotalPoint { total, obs })
}

/// Kernel rows per information model: the totals-only and Banker-only
/// models mix the two extreme rows; full composition mixes 19 and 27.
pub fn kernel_rows(info: InfoModel) -> [PlayerMask; 2] {
    match info {
        InfoModel::FullComposition => [
            PlayerMask::new(19).unwrap(),
            PlayerMask::new(27).unwrap(),
        ],
        _ => [PlayerMask::STAND_ON_FIVES, PlayerMask::DRAW_ON_FIVES],
    }
}

fn uniqueness_claim(deal: DealModel, info: InfoModel) -> bool {
    match (deal, info) {
        // The i.i.d. composition-aware games have 980 (or 70) extreme
        // equilibria; full composition over a shoe is solved but without
        // a uniqueness proof.
        (DealModel::WithReplacement, InfoModel::TotalsOnly) => true,
        (DealModel::WithReplacement, _) => false,
        (DealModel::Shoe(_), InfoModel::FullComposition) => false,
        (DealModel::Shoe(_), _) => true,
    }
}

/// Assemble a full Banker strategy from the classification and the two
/// kernel columns over the contested points.
fn banker_from_columns(
    table: &ClassificationTable,
    col0: &[Point],
    col1: &[Point],
    q: Rational,
) -> Result<BankerStrategy> {
    let mut moves = BTreeMap::new();
    let mut mix_point = None;
    for (pt, mark) in table.points().iter().zip(table.marks()) {
        let mv = match mark {
            Mark::Draw => Move::Draw,
            Mark::Stand => Move::Stand,
            Mark::Contested => {
                let in0 = col0.contains(pt);
                let in1 = col1.contains(pt);
                match (in0, in1) {
                    (true, true) => Move::Draw,
                    (false, false) => Move::Stand,
                    (false, true) => {
                        if mix_point.replace(*pt).is_some() {
                            return Err(Error::CertificateFailed {
                                rounds: 0,
                                failures: "kernel columns differ at more \
                                           than one point"
                                    .into(),
                            });
                        }
                        continue;
                    }
                    (true, false) => {
                        return Err(Error::CertificateFailed {
                            rounds: 0,
                            failures: format!(
                                "column 0 draws where column 1 stands: {pt}"
                            ),
                        })
                    }
                }
            }
        };
        moves.insert(*pt, mv);
    }
    Ok(BankerStrategy {
        moves,
        mix_point,
        q: Some(q),
    })
}

/// Build the (uncertified) solution induced by a specific pair of kernel
/// columns: the 2x2 kernel over `rows` is solved for the exact mixtures.
pub fn solution_from_columns(
    blocks: &PayoffBlocks,
    table: &ClassificationTable,
    reduced: &ReducedGame,
    rows: [PlayerMask; 2],
    col0: &[Point],
    col1: &[Point],
) -> Result<GameSolution> {
    let two = TwoRowGame::from_reduced(reduced, rows[0], rows[1])?;
    let as_bools = |col: &[Point]| -> Vec<bool> {
        two.free
            .iter()
            .map(|fp| col.contains(&fp.point))
            .collect()
    };
    let pay0 = two.column_payoffs(&as_bools(col0));
    let pay1 = two.column_payoffs(&as_bools(col1));
    let entries = [
        [pay0[0].clone(), pay1[0].clone()],
        [pay0[1].clone(), pay1[1].clone()],
    ];
    let (p, q, v) = envelope::solve_kernel_2x2(&entries)?;
    let mix_point: Vec<&Point> =
        col1.iter().filter(|pt| !col0.contains(pt)).collect();
    if mix_point.len() != 1 {
        return Err(Error::CertificateFailed {
            rounds: 0,
            failures: "kernel columns must differ at exactly one point".into(),
        });
    }
    let kernel = Kernel {
        rows,
        mix_point: *mix_point[0],
        columns: [col0.to_vec(), col1.to_vec()],
        entries,
    };
    let banker = banker_from_columns(table, col0, col1, q.clone())?;
    Ok(GameSolution {
        deal: blocks.deal,
        info: blocks.info,
        player: PlayerStrategy { rows, p },
        banker,
        value: v,
        kernel: Some(kernel),
        certificate: None,
        unique_claimed: uniqueness_claim(blocks.deal, blocks.info),
    })
}

/// The canonical completion for the i.i.d. composition-aware models,
/// where all six total-6 stand points share one crossover: the limit of
/// the shoe solutions draws on (8,8) and mixes on (0,6).
fn iid_tie_break(tied: &[Point]) -> Result<(Point, Point)> {
    let expected: Vec<Point> = [(0u8, 6u8), (1, 5), (2, 4), (3, 3), (7, 9), (8, 8)]
        .iter()
        .map(|(a, b)| hand_point(*a, *b, None))
        .collect();
    let mut sorted = tied.to_vec();
    sorted.sort();
    if sorted != expected {
        return Err(Error::CertificateFailed {
            rounds: 0,
            failures: format!(
                "unexpected tied crossover set: {}",
                sorted
                    .iter()
                    .map(|p| p.to_string())
                    .collect::<Vec<_>>()
                    .join(" ")
            ),
        });
    }
    Ok((hand_point(0, 6, None), hand_point(8, 8, None)))
}

/// A solved model along with the context needed to render and re-verify
/// it: the payoff blocks and the dominance classification.
#[derive(Debug, Clone)]
pub struct SolvedModel {
    pub solution: GameSolution,
    pub blocks: PayoffBlocks,
    pub table: ClassificationTable,
}

/// Solve one deal/information model to a certified exact solution.
pub fn solve_model(deal: DealModel, info: InfoModel) -> Result<GameSolution> {
    solve_model_full(deal, info).map(|s| s.solution)
}

/// Solve, returning the blocks and classification as well.
pub fn solve_model_full(
    deal: DealModel,
    info: InfoModel,
) -> Result<SolvedModel> {
    let blocks = PayoffBlocks::for_model(deal.validate()?, info)?;
    let table = classify(&blocks)?;
    let reduced = reduce_game(&blocks, &table)?;
    let rows = kernel_rows(info);
    let two = TwoRowGame::from_reduced(&reduced, rows[0], rows[1])?;
    let env = envelope::solve(&two)?;

    let (col0, col1) = match &env.kernel {
        Some(k) if env.unique => {
            (k.columns[0].clone(), k.columns[1].clone())
        }
        _ => {
            // Tied crossovers (the i.i.d. models): canonical completion.
            let tied = env
                .candidates
                .iter()
                .find(|c| c.p == env.p_star && !c.points.is_empty())
                .map(|c| c.points.clone())
                .ok_or(Error::NoInteriorMaximizer)?;
            let (mix, drawn) = iid_tie_break(&tied)?;
            let mut base = envelope::best_response(&two, &env.p_star)?;
            base.push(drawn);
            base.sort();
            let mut with_mix = base.clone();
            with_mix.push(mix);
            with_mix.sort();
            (base, with_mix)
        }
    };

    let solution =
        certify_and_repair(&blocks, &table, &reduced, rows, &col0, &col1)?;
    Ok(SolvedModel {
        solution,
        blocks,
        table,
    })
}

/// Certify the solution induced by a candidate kernel support; on failure
/// propose a corrected support from the failing components and retry, up
/// to a bounded number of rounds.
pub fn certify_and_repair(
    blocks: &PayoffBlocks,
    table: &ClassificationTable,
    reduced: &ReducedGame,
    rows: [PlayerMask; 2],
    col0: &[Point],
    col1: &[Point],
) -> Result<GameSolution> {
    let mut solution =
        solution_from_columns(blocks, table, reduced, rows, col0, col1)?;
    for round in 0..MAX_REPAIR_ROUNDS {
        let cert = certify(&solution, blocks, table)?;
        if cert.ok() {
            solution.certificate = Some(cert);
            return Ok(solution);
        }
        solution =
            repair_support(blocks, table, reduced, rows, &cert, round)?;
    }
    Err(Error::CertificateFailed {
        rounds: MAX_REPAIR_ROUNDS,
        failures: "support repair did not converge".into(),
    })
}

/// Propose a corrected kernel support from the failing components of a
/// certificate: among the failing columns, a pair differing at exactly
/// one point is the candidate kernel.
fn repair_support(
    blocks: &PayoffBlocks,
    table: &ClassificationTable,
    reduced: &ReducedGame,
    rows: [PlayerMask; 2],
    cert: &CertificateReport,
    round: u32,
) -> Result<GameSolution> {
    let fails = &cert.player_failures;
    for i in 0..fails.len() {
        for j in 0..fails.len() {
            if i == j {
                continue;
            }
            let extra: Vec<&Point> = fails[j]
                .iter()
                .filter(|p| !fails[i].contains(p))
                .collect();
            let missing = fails[i]
                .iter()
                .filter(|p| !fails[j].contains(p))
                .count();
            if extra.len() == 1 && missing == 0 {
                if let Ok(sol) = solution_from_columns(
                    blocks, table, reduced, rows, &fails[i], &fails[j],
                ) {
                    return Ok(sol);
                }
            }
        }
    }
    Err(Error::CertificateFailed {
        rounds: round + 1,
        failures: fails
            .iter()
            .map(|col| {
                format!(
                    "[{}]",
                    col.iter()
                        .map(|p| p.to_string())
                        .collect::<Vec<_>>()
                        .join(" ")
                )
            })
            .collect::<Vec<_>>()
            .join(", "),
    })
}

/// Exact optimality certificate for a proposed solution.
///
/// Player side: the minimum over all Banker completions of the contested
/// points decomposes per point, so it is computed without enumerating the
/// 2^n columns; failing columns are recovered afterwards from the
/// per-point slacks. Banker side: one inequality per game row.
pub fn certify(
    solution: &GameSolution,
    blocks: &PayoffBlocks,
    table: &ClassificationTable,
) -> Result<CertificateReport> {
    let reduced = reduce_game(blocks, table)?;
    let [r0, r1] = solution.player.rows;
    let (i0, i1) = (
        reduced.rows.iter().position(|r| *r == r0).ok_or(
            Error::RowNotInBlocks(r0.bits()),
        )?,
        reduced.rows.iter().position(|r| *r == r1).ok_or(
            Error::RowNotInBlocks(r1.bits()),
        )?,
    );
    let p = &solution.player.p;
    let one_minus_p = integer(1) - p;
    let v = &solution.value;

    // Player side.
    let mixed_const =
        &one_minus_p * &reduced.row_consts[i0] + p * &reduced.row_consts[i1];
    let n = reduced.free_points.len();
    let mut mins = Vec::with_capacity(n);
    let mut slacks = Vec::with_capacity(n);
    let mut argmin_draw = Vec::with_capacity(n);
    for l in 0..n {
        let stand = &one_minus_p * &reduced.e[i0][l].stand
            + p * &reduced.e[i1][l].stand;
        let draw = &one_minus_p * &reduced.e[i0][l].draw
            + p * &reduced.e[i1][l].draw;
        let draw_is_min = draw <= stand;
        let (lo, hi) = if draw_is_min {
            (draw, stand)
        } else {
            (stand, draw)
        };
        slacks.push(&hi - &lo);
        mins.push(lo);
        argmin_draw.push(draw_is_min);
    }
    let player_worst_margin =
        &mixed_const + mins.iter().sum::<Rational>() - v;
    let player_ok = !player_worst_margin.is_negative();
    let player_failures = if player_ok {
        Vec::new()
    } else {
        enumerate_failures(
            &reduced.free_points,
            &slacks,
            &argmin_draw,
            &player_worst_margin,
        )
    };
    let player_margins = if n <= FULL_MARGIN_LIMIT {
        let mut margins = Vec::with_capacity(1 << n);
        for bits in 0u32..1 << n {
            let mut m = &mixed_const - v;
            for l in 0..n {
                let drawn = bits >> (n - 1 - l) & 1 == 1;
                m += &mins[l];
                if drawn != argmin_draw[l] {
                    m += &slacks[l];
                }
            }
            margins.push(m);
        }
        Some(margins)
    } else {
        None
    };

    // Banker side.
    let q = solution
        .banker
        .q
        .clone()
        .unwrap_or_else(|| integer(0));
    let one_minus_q = integer(1) - &q;
    let mut banker_margins = Vec::with_capacity(blocks.rows().len());
    let mut banker_worst_margin: Option<Rational> = None;
    let mut banker_failures = Vec::new();
    for &mask in blocks.rows() {
        let pay0 = blocks
            .row_entry(mask, |pt| {
                solution.banker.column_move(pt, false) == Move::Draw
            })?;
        let pay1 = blocks
            .row_entry(mask, |pt| {
                solution.banker.column_move(pt, true) == Move::Draw
            })?;
        let margin = &one_minus_q * &pay0 + &q * &pay1 - v;
        if margin.is_positive() {
            banker_failures.push(mask);
        }
        if banker_worst_margin
            .as_ref()
            .map(|w| margin > *w)
            .unwrap_or(true)
        {
            banker_worst_margin = Some(margin.clone());
        }
        banker_margins.push((mask, margin));
    }
    let banker_worst_margin = banker_worst_margin.expect("at least one row");
    let banker_ok = !banker_worst_margin.is_positive();
    Ok(CertificateReport {
        player_worst_margin,
        player_ok,
        player_failures,
        player_margins,
        banker_worst_margin,
        banker_ok,
        banker_failures,
        banker_margins,
    })
}

/// All completions whose margin is negative: subsets of points flipped
/// away from the per-point minimum whose slack total stays below the
/// deficit. Depth-first with pruning, capped.
fn enumerate_failures(
    points: &[Point],
    slacks: &[Rational],
    argmin_draw: &[bool],
    worst: &Rational,
) -> Vec<Vec<Point>> {
    let deficit = -worst.clone();
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|a, b| slacks[*a].cmp(&slacks[*b]));
    let mut out = Vec::new();
    let mut flipped = Vec::new();
    fn rec(
        order: &[usize],
        from: usize,
        acc: Rational,
        deficit: &Rational,
        slacks: &[Rational],
        flipped: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if out.len() >= MAX_REPORTED_FAILURES {
            return;
        }
        out.push(flipped.clone());
        for k in from..order.len() {
            let next = &acc + &slacks[order[k]];
            if next >= *deficit {
                // Slacks ascend, so no later point can fit either.
                break;
            }
            flipped.push(order[k]);
            rec(order, k + 1, next, deficit, slacks, flipped, out);
            flipped.pop();
        }
    }
    let mut subsets = Vec::new();
    rec(
        &order,
        0,
        integer(0),
        &deficit,
        slacks,
        &mut flipped,
        &mut subsets,
    );
    for subset in subsets {
        let mut col: Vec<Point> = (0..points.len())
            .filter(|l| {
                let flip = subset.contains(l);
                argmin_draw[*l] != flip
            })
            .map(|l| points[l])
            .collect();
        col.sort();
        out.push(col);
    }
    out
}

/// Bit label of a Banker column over the contested points, most
/// significant bit first in canonical order; 1 = draw.
pub fn column_bitstring(contested: &[Point], column: &[Point]) -> String {
    contested
        .iter()
        .map(|pt| if column.contains(pt) { '1' } else { '0' })
        .collect()
}

/// Decimal form of a column bit label.
pub fn column_decimal(contested: &[Point], column: &[Point]) -> u64 {
    contested.iter().fold(0u64, |acc, pt| {
        acc << 1 | column.contains(pt) as u64
    })
}

// ---------------------------------------------------------------------
// Closed forms.
// ---------------------------------------------------------------------

fn poly(d: i128, coeffs: &[i128]) -> i128 {
    coeffs.iter().fold(0i128, |acc, c| acc * d + c)
}

fn falling_52d_6(d: i128) -> i128 {
    (0..6).map(|i| 52 * d - i).product()
}

fn rational_poly(num: i128, den: i128) -> Rational {
    Rational::new(num.into(), den.into())
}

/// Theorem-style closed forms for the shoe models: the exact mixtures and
/// value as piecewise functions of the deck count, plus the fully
/// specified move tables with every threshold branch. Transcribed
/// reference constants; no solving.
pub fn closed_form(deal: DealModel, info: InfoModel) -> Result<GameSolution> {
    let d = match deal.validate()? {
        DealModel::Shoe(d) => d as i128,
        DealModel::WithReplacement => {
            return Err(Error::WrongModel("the shoe models"))
        }
    };
    match info {
        InfoModel::TotalsOnly => closed_form_b1(d),
        InfoModel::BankerComposition => closed_form_b23(d, false),
        InfoModel::FullComposition => closed_form_b23(d, true),
    }
}

fn closed_form_b1(d: i128) -> Result<GameSolution> {
    let c = poly(d, &[5632, -1138, 69, -1]);
    let p = rational_poly(poly(d, &[36864, -9312, 732, -23]), 8 * c);
    let q = if d <= 3 {
        rational_poly(
            poly(d, &[224_000, -55_712, 2936, 163, -14]),
            2 * (52 * d - 5) * c,
        )
    } else {
        rational_poly(
            poly(d, &[439_808, -107_456, 5248, 374, -31]),
            4 * (52 * d - 5) * c,
        )
    };
    let v = if d <= 3 {
        Rational::new(
            (-32 * d * d
                * poly(
                    d,
                    &[
                        44_396_707_840,
                        -18_908_426_240,
                        3_279_293_696,
                        -294_129_728,
                        14_418_160,
                        -407_352,
                        9543,
                        -220,
                    ],
                ))
            .into(),
            (c * falling_52d_6(d)).into(),
        )
    } else {
        Rational::new(
            (-16 * d * d
                * poly(
                    d,
                    &[
                        89_072_336_896,
                        -38_873_874_432,
                        6_969_345_536,
                        -655_761_920,
                        34_638_784,
                        -1_090_952,
                        26_286,
                        -537,
                    ],
                ))
            .into(),
            (c * falling_52d_6(d)).into(),
        )
    };

    let mut moves = BTreeMap::new();
    for total in 0..=7u8 {
        for obs in ThirdCard::all() {
            let pt = Point::Total(TotalPoint { total, obs });
            let k = match obs {
                ThirdCard::Card(c) => Some(c.value()),
                ThirdCard::Stand => None,
            };
            let mv = match (total, k) {
                (0..=2, _) => Move::Draw,
                (3, Some(8)) => Move::Stand,
                (3, _) => Move::Draw,
                (4, Some(0 | 1 | 8 | 9)) => Move::Stand,
                (4, _) => Move::Draw,
                (5, Some(4)) => {
                    if d >= 4 {
                        Move::Draw
                    } else {
                        Move::Stand
                    }
                }
                (5, Some(5..=7)) | (5, None) => Move::Draw,
                (5, _) => Move::Stand,
                (6, Some(6 | 7)) => Move::Draw,
                (6, None) => continue, // mixing point
                (6, _) => Move::Stand,
                (_, _) => Move::Stand,
            };
            moves.insert(pt, mv);
        }
    }
    Ok(GameSolution {
        deal: DealModel::Shoe(d as u32),
        info: InfoModel::TotalsOnly,
        player: PlayerStrategy {
            rows: kernel_rows(InfoModel::TotalsOnly),
            p,
        },
        banker: BankerStrategy {
            moves,
            mix_point: Some(total_point(6, None)),
            q: Some(q),
        },
        value: v,
        kernel: None,
        certificate: None,
        unique_claimed: true,
    })
}

fn closed_form_b23(d: i128, full_info: bool) -> Result<GameSolution> {
    let (p, q, v) = if full_info {
        b3_constants(d)
    } else {
        b2_constants(d)
    };
    let mix_point = if full_info && d == 1 {
        hand_point(8, 8, None)
    } else {
        hand_point(0, 6, None)
    };
    let mut moves = BTreeMap::new();
    for hand in crate::cards::enumerate_banker_hands() {
        for obs in ThirdCard::all() {
            let pt = Point::Hand(DecisionPoint::new(hand, obs).unwrap());
            if pt == mix_point {
                continue;
            }
            moves.insert(pt, b23_table_move(hand, obs, d, full_info));
        }
    }
    Ok(GameSolution {
        deal: DealModel::Shoe(d as u32),
        info: if full_info {
            InfoModel::FullComposition
        } else {
            InfoModel::BankerComposition
        },
        player: PlayerStrategy {
            rows: kernel_rows(if full_info {
                InfoModel::FullComposition
            } else {
                InfoModel::BankerComposition
            }),
            p,
        },
        banker: BankerStrategy {
            moves,
            mix_point: Some(mix_point),
            q: Some(q),
        },
        value: v,
        kernel: None,
        certificate: None,
        unique_claimed: !full_info,
    })
}

fn b2_constants(d: i128) -> (Rational, Rational, Rational) {
    let c = poly(d, &[1408, -220, 9]);
    let p = rational_poly(
        (8 * d - 1) * (12 * d - 1) * (24 * d - 1),
        2 * d * c,
    );
    let qden = 8 * d * (52 * d - 5) * c;
    let q = match d {
        1 => ratio(290_383, 450_072),
        2 => ratio(2_591_845, 4_119_192),
        3 => ratio(9_294_089, 14_521_368),
        4..=7 => rational_poly(
            poly(d, &[368_640, -68_624, -2168, 981, -48]),
            qden,
        ),
        8 | 9 => rational_poly(
            poly(d, &[367_616, -67_728, -2416, 1015, -51]),
            qden,
        ),
        _ => rational_poly(
            poly(d, &[366_592, -67_344, -2456, 1017, -51]),
            qden,
        ),
    };
    let vden = c * falling_52d_6(d);
    let v = match d {
        1 => ratio(-22_932_137, 1_666_583_100),
        2 => ratio(-8_220_886_553, 620_866_384_425),
        3 => ratio(-210_084_639_838, 16_053_072_820_785),
        4..=7 => Rational::new(
            (-32 * d
                * poly(
                    d,
                    &[
                        11_125_325_824,
                        -4_182_669_312,
                        615_333_888,
                        -43_467_904,
                        1_329_008,
                        5040,
                        -1551,
                        39,
                    ],
                ))
            .into(),
            vden.into(),
        ),
        8 | 9 => Rational::new(
            (-32 * d
                * poly(
                    d,
                    &[
                        11_129_683_968,
                        -4_218_739_712,
                        635_681_024,
                        -47_725_760,
                        1_738_944,
                        -14_344,
                        -1093,
                        33,
                    ],
                ))
            .into(),
            vden.into(),
        ),
        _ => Rational::new(
            (-32 * d
                * poly(
                    d,
                    &[
                        11_134_042_112,
                        -4_259_389_440,
                        648_152_320,
                        -49_007_232,
                        1_788_256,
                        -14_816,
                        -1089,
                        33,
                    ],
                ))
            .into(),
            vden.into(),
        ),
    };
    (p, q, v)
}

fn b3_constants(d: i128) -> (Rational, Rational, Rational) {
    let p = if d == 1 {
        ratio(1, 19)
    } else {
        rational_poly(
            (12 * d - 1) * (16 * d * d - 14 * d + 1),
            32 * d * d * (11 * d - 1),
        )
    };
    let qden = 256 * d * d * (11 * d - 1) * (52 * d - 5);
    let q = match d {
        1 => ratio(4519, 10_716),
        2 => ratio(17_431, 64_512),
        3 => ratio(4_425_647, 11_132_928),
        4..=7 => rational_poly(
            poly(d, &[92_160, -120_128, 26_336, -2000, 47]),
            qden,
        ),
        8 => ratio(316_815_305, 585_842_688),
        _ => rational_poly(
            poly(d, &[91_648, -119_488, 26_032, -1932, 41]),
            qden,
        ),
    };
    let vden = (11 * d - 1) * falling_52d_6(d);
    let v = match d {
        // Printed reference value; fails the exact certificate (the
        // certified value is -37833961/2901089100). Kept verbatim.
        1 => ratio(-3_439_451, 25_482_800),
        2 => ratio(-49_424_010_137, 3_823_801_581_600),
        3 => ratio(-31_717_439_249, 2_461_444_457_472),
        4..=7 => Rational::new(
            (-2 * poly(
                d,
                &[
                    1_390_665_728,
                    -491_115_520,
                    50_698_240,
                    2_428_032,
                    -990_512,
                    89_192,
                    -3462,
                    47,
                ],
            ))
            .into(),
            vden.into(),
        ),
        8 => ratio(-2_789_416_947_665_657, 217_430_324_984_396_160),
        _ => Rational::new(
            (-2 * poly(
                d,
                &[
                    1_391_755_264,
                    -500_535_296,
                    54_174_464,
                    1_931_136,
                    -948_816,
                    85_792,
                    -3238,
                    41,
                ],
            ))
            .into(),
            vden.into(),
        ),
    };
    (p, q, v)
}

/// Final-table Banker move under the composition models, with every
/// deck-count threshold.
fn b23_table_move(
    hand: HandPair,
    obs: ThirdCard,
    d: i128,
    full_info: bool,
) -> Move {
    use Move::{Draw, Stand};
    let total = hand.total();
    let k = match obs {
        ThirdCard::Card(c) => Some(c.value()),
        ThirdCard::Stand => None,
    };
    let h = (hand.lo().value(), hand.hi().value());
    match (total, k) {
        (0..=2, _) => Draw,
        (3, Some(8)) => match h {
            (4, 9) => {
                if d >= 2 {
                    Stand
                } else {
                    Draw
                }
            }
            (6, 7) => {
                if !full_info || d >= 2 {
                    Stand
                } else {
                    Draw
                }
            }
            _ => Stand,
        },
        (3, _) => Draw,
        (4, Some(0 | 8 | 9)) => Stand,
        (4, Some(1)) => match h {
            (6, 8) | (7, 7) => {
                if d >= 3 {
                    Stand
                } else {
                    Draw
                }
            }
            _ => Stand,
        },
        (4, _) => Draw,
        (5, Some(4)) => match h {
            (0, 5) | (7, 8) => {
                if d >= 2 {
                    Draw
                } else {
                    Stand
                }
            }
            (1, 4) => {
                if d >= 8 {
                    Draw
                } else {
                    Stand
                }
            }
            (2, 3) => {
                let threshold = if full_info { 9 } else { 10 };
                if d >= threshold {
                    Draw
                } else {
                    Stand
                }
            }
            (6, 9) => {
                let threshold = if full_info { 2 } else { 3 };
                if d >= threshold {
                    Draw
                } else {
                    Stand
                }
            }
            _ => unreachable!("total-5 hands"),
        },
        (5, Some(5..=7)) | (5, None) => Draw,
        (5, _) => Stand,
        (6, Some(6)) => match h {
            (3, 3) => {
                if d >= 4 {
                    Draw
                } else {
                    Stand
                }
            }
            _ => Draw,
        },
        (6, Some(7)) => Draw,
        (6, None) => match h {
            // The mixing point (0,6) is excluded by the caller except in
            // the single-deck full-information game, where it stands pure
            // and the mixing moves to (8,8).
            (0, 6) => Stand,
            (8, 8) => Draw,
            _ => Stand,
        },
        (6, _) => Stand,
        (7, _) => Stand,
        _ => unreachable!("banker totals are at most 7"),
    }
}

// ---------------------------------------------------------------------
// Structure of the i.i.d. composition-aware games.
// ---------------------------------------------------------------------

/// A two-pure-strategy mixture: weight `1 - w` on class `lo`, `w` on `hi`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MixPair {
    pub lo: u8,
    pub hi: u8,
    pub weight: Rational,
}

/// The extreme equilibria of the i.i.d. composition-aware games: every
/// pair of row classes straddling the optimal draw frequency, crossed
/// with every straddling pair of column classes.
#[derive(Debug, Clone)]
pub struct ExtremeEquilibria {
    pub player_pairs: Vec<MixPair>,
    pub banker_pairs: Vec<MixPair>,
    pub pair_count: usize,
}

pub fn enumerate_extreme_equilibria(
    info: InfoModel,
) -> Result<ExtremeEquilibria> {
    if info == InfoModel::TotalsOnly {
        return Err(Error::WrongModel(
            "the composition-aware i.i.d. models",
        ));
    }
    // Targets from the totals-only i.i.d. solution.
    let base = solve_model(DealModel::WithReplacement, InfoModel::TotalsOnly)?;
    let p_target = base.player.p.clone();
    let q_target = base.banker.q.clone().expect("mixing point exists");

    let straddle = |target: &Rational, scale: i64| -> Vec<MixPair> {
        let mut out = Vec::new();
        for lo in 0..=scale {
            for hi in 0..=scale {
                let lo_frac = ratio(lo, scale);
                let hi_frac = ratio(hi, scale);
                if lo_frac < *target && *target < hi_frac {
                    let weight =
                        (target - &lo_frac) / (&hi_frac - &lo_frac);
                    out.push(MixPair {
                        lo: lo as u8,
                        hi: hi as u8,
                        weight,
                    });
                }
            }
        }
        out
    };
    let banker_pairs = straddle(&q_target, 16);
    let player_pairs = if info == InfoModel::FullComposition {
        straddle(&p_target, 8)
    } else {
        Vec::new()
    };
    let pair_count = if player_pairs.is_empty() {
        banker_pairs.len()
    } else {
        player_pairs.len() * banker_pairs.len()
    };
    Ok(ExtremeEquilibria {
        player_pairs,
        banker_pairs,
        pair_count,
    })
}

/// Row and column equal-payoff structure of the i.i.d. full-composition
/// reduced game.
#[derive(Debug, Clone)]
pub struct DedupStructure {
    /// Masks grouped by draw weight in eighths, ascending; all rows in a
    /// class are verified to have identical payoff rows.
    pub row_classes: Vec<(u8, Vec<PlayerMask>)>,
    /// Number of distinct payoff columns of the reduced game.
    pub column_class_count: u64,
    /// Per contested (total, third-card) group: the hand weights whose
    /// subset sums label the distinct columns.
    pub column_groups: Vec<(u8, ThirdCard, Vec<(HandPair, u64)>)>,
}

pub fn dedup_structure_a3() -> Result<DedupStructure> {
    let blocks = PayoffBlocks::for_model(
        DealModel::WithReplacement,
        InfoModel::FullComposition,
    )?;
    let table = classify(&blocks)?;
    let reduced = reduce_game(&blocks, &table)?;

    // Group rows by draw weight and verify exact payoff-row equality.
    let mut row_classes: Vec<(u8, Vec<PlayerMask>)> =
        (0..=8).map(|w| (w, Vec::new())).collect();
    for mask in PlayerMask::all() {
        row_classes[mask.draw_weight_eighths() as usize].1.push(mask);
    }
    for (weight, members) in &row_classes {
        let first = reduced
            .rows
            .iter()
            .position(|r| *r == members[0])
            .expect("row present");
        for m in &members[1..] {
            let ri = reduced
                .rows
                .iter()
                .position(|r| *r == *m)
                .expect("row present");
            let equal = reduced.row_consts[ri] == reduced.row_consts[first]
                && reduced.e[ri] == reduced.e[first];
            if !equal {
                return Err(Error::UnequalPayoffClass(*weight));
            }
        }
    }

    // Group contested points by (total, observation) and verify that the
    // conditional expectations are hand-independent within a group while
    // the probabilities scale with the hand weights.
    let mut groups: Vec<(u8, ThirdCard, Vec<(HandPair, u64)>)> = Vec::new();
    for pt in &reduced.free_points {
        let hand = match pt {
            Point::Hand(dp) => dp.hand,
            Point::Total(_) => return Err(Error::ExpectedCompositionBlocks),
        };
        let key = (pt.banker_total(), pt.obs());
        if let Some(g) =
            groups.iter_mut().find(|g| (g.0, g.1) == key)
        {
            g.2.push((hand, 0));
        } else {
            groups.push((key.0, key.1, vec![(hand, 0)]));
        }
    }
    let mut column_class_count = 1u64;
    for (total, obs, hands) in &mut groups {
        let ref_point = Point::Hand(
            DecisionPoint::new(hands[0].0, *obs).unwrap(),
        );
        let ref_idx = blocks.point_index(&ref_point).expect("point");
        let ref_prob = &blocks.cell(ref_idx, 0).prob;
        let mut weights: Vec<Rational> = Vec::new();
        for (hand, _) in hands.iter() {
            let pt = Point::Hand(DecisionPoint::new(*hand, *obs).unwrap());
            let pi = blocks.point_index(&pt).expect("point");
            for ri in 0..blocks.rows().len() {
                let cell = blocks.cell(pi, ri);
                let rcell = blocks.cell(ref_idx, ri);
                if cell.ev_draw != rcell.ev_draw
                    || cell.ev_stand != rcell.ev_stand
                {
                    return Err(Error::UnequalPayoffClass(*total));
                }
            }
            weights.push(&blocks.cell(pi, 0).prob / ref_prob);
        }
        // Scale the probability ratios to the smallest integer weights.
        let denom_lcm = weights
            .iter()
            .fold(num::BigInt::from(1), |acc, w| num::integer::lcm(acc, w.denom().clone()));
        let ints: Vec<num::BigInt> = weights
            .iter()
            .map(|w| w.numer() * &denom_lcm / w.denom())
            .collect();
        let gcd = ints
            .iter()
            .fold(num::BigInt::zero(), |acc, i| num::integer::gcd(acc, i.clone()));
        let scaled: Vec<u64> = ints
            .iter()
            .map(|i| {
                use num::ToPrimitive;
                (i / &gcd).to_u64().expect("small weight")
            })
            .collect();
        for ((_, w), s) in hands.iter_mut().zip(&scaled) {
            *w = *s;
        }
        // Distinct subset sums of the weights label the distinct columns
        // contributed by this group.
        let total_weight: u64 = scaled.iter().sum();
        let mut reachable = vec![false; total_weight as usize + 1];
        reachable[0] = true;
        for s in &scaled {
            for i in (0..reachable.len()).rev() {
                if reachable[i] && i + *s as usize <= total_weight as usize {
                    reachable[i + *s as usize] = true;
                }
            }
        }
        column_class_count *=
            reachable.iter().filter(|r| **r).count() as u64;
    }
    Ok(DedupStructure {
        row_classes,
        column_class_count,
        column_groups: groups,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_rows_by_info() {
        assert_eq!(
            kernel_rows(InfoModel::FullComposition)
                .map(|m| m.bits()),
            [19, 27]
        );
        assert_eq!(
            kernel_rows(InfoModel::TotalsOnly).map(|m| m.bits()),
            [0, 31]
        );
    }

    #[test]
    fn a1_solution_exact() {
        let sol = solve_model(
            DealModel::WithReplacement,
            InfoModel::TotalsOnly,
        )
        .unwrap();
        assert_eq!(sol.player.p, ratio(9, 11));
        assert_eq!(sol.banker.q, Some(ratio(859, 2288)));
        assert_eq!(sol.value, ratio(-679_568, 53_094_899));
        assert_eq!(sol.banker.mix_point, Some(total_point(6, None)));
        assert!(sol.certificate.as_ref().unwrap().ok());
        assert!(sol.unique_claimed);
        // Kernel entries scale to the reference integers over 16/13^6.
        let kernel = sol.kernel.as_ref().unwrap();
        let scale = ratio(13i64.pow(6), 16);
        let scaled: Vec<Rational> = kernel
            .entries
            .iter()
            .flatten()
            .map(|e| e * &scale)
            .collect();
        assert_eq!(
            scaled,
            vec![
                integer(-4564),
                integer(-2692),
                integer(-3705),
                integer(-4121)
            ]
        );
    }

    #[test]
    fn a3_canonical_solution() {
        let sol = solve_model(
            DealModel::WithReplacement,
            InfoModel::FullComposition,
        )
        .unwrap();
        assert_eq!(sol.player.p, ratio(6, 11));
        assert_eq!(sol.banker.q, Some(ratio(179, 286)));
        assert_eq!(sol.value, ratio(-679_568, 53_094_899));
        assert_eq!(sol.banker.mix_point, Some(hand_point(0, 6, None)));
        assert_eq!(
            sol.banker.moves[&hand_point(8, 8, None)],
            Move::Draw
        );
        assert_eq!(
            sol.banker.moves[&hand_point(1, 5, None)],
            Move::Stand
        );
        assert!(sol.certificate.as_ref().unwrap().ok());
        assert!(!sol.unique_claimed);
    }

    #[test]
    fn a2_canonical_solution() {
        let sol = solve_model(
            DealModel::WithReplacement,
            InfoModel::BankerComposition,
        )
        .unwrap();
        assert_eq!(sol.player.p, ratio(9, 11));
        assert_eq!(sol.banker.q, Some(ratio(179, 286)));
        assert_eq!(sol.value, ratio(-679_568, 53_094_899));
        assert!(sol.certificate.as_ref().unwrap().ok());
    }

    #[test]
    fn b3_six_decks_exact() {
        let sol =
            solve_model(DealModel::Shoe(6), InfoModel::FullComposition)
                .unwrap();
        assert_eq!(sol.player.p, ratio(35_003, 74_880));
        assert_eq!(sol.banker.q, Some(ratio(18_885_571, 36_781_056)));
        assert_eq!(
            sol.value,
            ratio(-73_356_216_203_119, 5_712_649_844_821_920)
        );
        assert_eq!(sol.banker.mix_point, Some(hand_point(0, 6, None)));
        let kernel = sol.kernel.as_ref().unwrap();
        let scale = integer(1_525_814_595_305);
        let scaled: Vec<Rational> = kernel
            .entries
            .iter()
            .flatten()
            .map(|e| e * &scale)
            .collect();
        assert_eq!(
            scaled,
            vec![
                integer(-19_769_569_403),
                integer(-19_425_699_931),
                integer(-19_391_857_983),
                integer(-19_783_609_631)
            ]
        );
        assert!(sol.certificate.as_ref().unwrap().ok());
    }

    #[test]
    fn extreme_equilibria_counts() {
        let a3 =
            enumerate_extreme_equilibria(InfoModel::FullComposition).unwrap();
        assert_eq!(a3.player_pairs.len(), 14);
        assert_eq!(a3.banker_pairs.len(), 70);
        assert_eq!(a3.pair_count, 980);
        // Canonical picks.
        let p67 = a3
            .player_pairs
            .iter()
            .find(|m| m.lo == 6 && m.hi == 7)
            .unwrap();
        assert_eq!(p67.weight, ratio(6, 11));
        let q19 = a3
            .banker_pairs
            .iter()
            .find(|m| m.lo == 1 && m.hi == 9)
            .unwrap();
        assert_eq!(q19.weight, ratio(179, 286));

        let a2 = enumerate_extreme_equilibria(InfoModel::BankerComposition)
            .unwrap();
        assert!(a2.player_pairs.is_empty());
        assert_eq!(a2.pair_count, 70);
    }

    #[test]
    fn heuristic_draw_frequency_identity() {
        // Drawing on everything except (2,3), plus (1,4) with weight 6/11,
        // reproduces the optimal overall draw frequency.
        let total = ratio(3, 4) + ratio(1, 8) * ratio(6, 11);
        assert_eq!(total, ratio(9, 11));
    }

    #[test]
    fn dedup_structure_counts() {
        let s = dedup_structure_a3().unwrap();
        assert_eq!(s.row_classes.len(), 9);
        assert_eq!(s.column_class_count, 23_409);
        let weight6: Vec<u8> = s.row_classes[6]
            .1
            .iter()
            .map(|m| m.bits())
            .collect();
        assert_eq!(weight6, vec![19, 21, 22, 25, 26, 28]);
        assert_eq!(s.row_classes[0].1, vec![PlayerMask::STAND_ON_FIVES]);
        assert_eq!(s.row_classes[8].1, vec![PlayerMask::DRAW_ON_FIVES]);
    }
}
