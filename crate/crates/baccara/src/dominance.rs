//! Strict-dominance classification of Banker's decision points.
//!
//! At a decision point, if drawing is strictly better for Banker against
//! every Player row, any strategy standing there is strictly dominated,
//! and symmetrically for standing. Classifying all points as forced-draw,
//! forced-stand, or contested collapses the game to the contested points
//! only, with the forced moves folded into per-row constants.

use crate::error::{Error, Result};
use crate::payoff::{integer, PayoffBlocks, Point, Rational};
use crate::{DealModel, InfoModel, PlayerMask};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mark {
    Draw,
    Stand,
    Contested,
}

/// Every decision point marked Draw, Stand, or Contested, for one deal and
/// information model.
#[derive(Debug, Clone)]
pub struct ClassificationTable {
    pub deal: DealModel,
    pub info: InfoModel,
    points: Vec<Point>,
    marks: Vec<Mark>,
}

impl ClassificationTable {
    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn marks(&self) -> &[Mark] {
        &self.marks
    }

    pub fn mark(&self, point: &Point) -> Option<Mark> {
        self.points
            .binary_search(point)
            .ok()
            .map(|i| self.marks[i])
    }

    pub fn contested_count(&self) -> usize {
        self.marks.iter().filter(|m| **m == Mark::Contested).count()
    }
}

/// Classify every point of `blocks` by the all-rows sign rule: Draw if the
/// draw-stand difference is negative for every row, Stand if positive for
/// every row, Contested otherwise. A difference of exactly zero leaves the
/// strict classification undefined and is an error naming the point.
pub fn classify(blocks: &PayoffBlocks) -> Result<ClassificationTable> {
    let zero = integer(0);
    let mut marks = Vec::with_capacity(blocks.points().len());
    for (pi, point) in blocks.points().iter().enumerate() {
        let mut any_pos = false;
        let mut any_neg = false;
        for ri in 0..blocks.rows().len() {
            let b = blocks.b_diff_at(pi, ri);
            if b == zero {
                return Err(Error::ClassificationTie(point.to_string()));
            }
            if b > zero {
                any_pos = true;
            } else {
                any_neg = true;
            }
        }
        marks.push(match (any_pos, any_neg) {
            (true, false) => Mark::Stand,
            (false, true) => Mark::Draw,
            _ => Mark::Contested,
        });
    }
    Ok(ClassificationTable {
        deal: blocks.deal,
        info: blocks.info,
        points: blocks.points().to_vec(),
        marks,
    })
}

/// Contested points in canonical order (Banker total ascending, third card
/// ascending with the stand observation last, hand ascending).
pub fn contested_points(table: &ClassificationTable) -> Vec<Point> {
    table
        .points
        .iter()
        .zip(&table.marks)
        .filter(|(_, m)| **m == Mark::Contested)
        .map(|(p, _)| *p)
        .collect()
}

/// Per-row stand/draw products p_i(l) a_{i,j}(l) at one free point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EPair {
    pub stand: Rational,
    pub draw: Rational,
}

/// The game after folding forced moves: Banker is free only on the
/// contested points; every forced point contributes a constant per row.
#[derive(Debug, Clone)]
pub struct ReducedGame {
    pub deal: DealModel,
    pub info: InfoModel,
    pub rows: Vec<PlayerMask>,
    pub row_consts: Vec<Rational>,
    pub free_points: Vec<Point>,
    /// Indexed `[row][free point]`.
    pub e: Vec<Vec<EPair>>,
}

impl ReducedGame {
    /// Payoff of one row against the Banker strategy drawing exactly on
    /// the free points where `draws` is true.
    pub fn row_payoff(&self, row_idx: usize, draws: &[bool]) -> Rational {
        assert_eq!(draws.len(), self.free_points.len());
        let mut total = self.row_consts[row_idx].clone();
        for (ep, d) in self.e[row_idx].iter().zip(draws) {
            total += if *d { &ep.draw } else { &ep.stand };
        }
        total
    }
}

/// Fold the classification into a reduced game over the contested points.
pub fn reduce_game(
    blocks: &PayoffBlocks,
    table: &ClassificationTable,
) -> Result<ReducedGame> {
    if blocks.points() != table.points()
        || blocks.deal != table.deal
        || blocks.info != table.info
    {
        return Err(Error::ModelMismatch);
    }
    let free_points = contested_points(table);
    let mut row_consts = Vec::with_capacity(blocks.rows().len());
    let mut e = Vec::with_capacity(blocks.rows().len());
    for ri in 0..blocks.rows().len() {
        let mut c = integer(0);
        let mut row_e = Vec::with_capacity(free_points.len());
        for (pi, _) in blocks.points().iter().enumerate() {
            let cell = blocks.cell(pi, ri);
            match table.marks[pi] {
                Mark::Draw => c += &cell.prob * &cell.ev_draw,
                Mark::Stand => c += &cell.prob * &cell.ev_stand,
                Mark::Contested => row_e.push(EPair {
                    stand: &cell.prob * &cell.ev_stand,
                    draw: &cell.prob * &cell.ev_draw,
                }),
            }
        }
        row_consts.push(c);
        e.push(row_e);
    }
    Ok(ReducedGame {
        deal: blocks.deal,
        info: blocks.info,
        rows: blocks.rows().to_vec(),
        row_consts,
        free_points,
        e,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cards::{DecisionPoint, HandPair, ThirdCard};
    use crate::payoff::TotalPoint;
    use crate::CardValue;

    fn hand_point(a: u8, b: u8, obs: Option<u8>) -> Point {
        let obs = match obs {
            Some(k) => ThirdCard::Card(CardValue::new(k).unwrap()),
            None => ThirdCard::Stand,
        };
        Point::Hand(
            DecisionPoint::new(HandPair::of(a, b).unwrap(), obs).unwrap(),
        )
    }

    fn total_point(total: u8, obs: Option<u8>) -> Point {
        let obs = match obs {
            Some(k) => ThirdCard::Card(CardValue::new(k).unwrap()),
            None => ThirdCard::Stand,
        };
        Point::Total(TotalPoint { total, obs })
    }

    #[test]
    fn full_composition_d6_contested_set() {
        let blocks =
            PayoffBlocks::for_model(DealModel::Shoe(6), InfoModel::FullComposition)
                .unwrap();
        let table = classify(&blocks).unwrap();
        let contested = contested_points(&table);
        assert_eq!(contested.len(), 18);
        let expected: Vec<Point> = vec![
            hand_point(0, 3, Some(9)),
            hand_point(1, 2, Some(9)),
            hand_point(4, 9, Some(9)),
            hand_point(5, 8, Some(9)),
            hand_point(6, 7, Some(9)),
            hand_point(2, 2, Some(1)),
            hand_point(6, 8, Some(1)),
            hand_point(7, 7, Some(1)),
            hand_point(0, 5, Some(4)),
            hand_point(6, 9, Some(4)),
            hand_point(7, 8, Some(4)),
            hand_point(3, 3, Some(6)),
            hand_point(0, 6, None),
            hand_point(1, 5, None),
            hand_point(2, 4, None),
            hand_point(3, 3, None),
            hand_point(7, 9, None),
            hand_point(8, 8, None),
        ];
        assert_eq!(contested, expected);
        assert_eq!(contested[12], hand_point(0, 6, None));
    }

    #[test]
    fn banker_composition_rows_give_same_table_at_d6() {
        let full =
            PayoffBlocks::for_model(DealModel::Shoe(6), InfoModel::FullComposition)
                .unwrap();
        let two =
            PayoffBlocks::for_model(DealModel::Shoe(6), InfoModel::BankerComposition)
                .unwrap();
        let t_full = classify(&full).unwrap();
        let t_two = classify(&two).unwrap();
        assert_eq!(t_full.marks(), t_two.marks());
    }

    #[test]
    fn totals_only_contested_sets_small_decks() {
        let expect = |d: u32, pts: Vec<Point>| {
            let blocks =
                PayoffBlocks::for_model(DealModel::Shoe(d), InfoModel::TotalsOnly)
                    .unwrap();
            let table = classify(&blocks).unwrap();
            assert_eq!(contested_points(&table), pts, "d={d}");
        };
        expect(
            1,
            vec![
                total_point(3, Some(8)),
                total_point(3, Some(9)),
                total_point(4, Some(2)),
                total_point(6, None),
            ],
        );
        expect(
            2,
            vec![
                total_point(3, Some(8)),
                total_point(3, Some(9)),
                total_point(6, None),
            ],
        );
        expect(
            3,
            vec![
                total_point(3, Some(8)),
                total_point(3, Some(9)),
                total_point(5, Some(4)),
                total_point(6, None),
            ],
        );
        expect(
            6,
            vec![
                total_point(3, Some(9)),
                total_point(4, Some(1)),
                total_point(5, Some(4)),
                total_point(6, None),
            ],
        );
    }

    #[test]
    fn footnote_threshold_0_3_8() {
        // Point ((0,3), third card 8): contested for d <= 2, Stand after.
        for (d, mark) in [(1, Mark::Contested), (2, Mark::Contested), (3, Mark::Stand)] {
            let blocks = PayoffBlocks::for_model(
                DealModel::Shoe(d),
                InfoModel::BankerComposition,
            )
            .unwrap();
            let table = classify(&blocks).unwrap();
            assert_eq!(
                table.mark(&hand_point(0, 3, Some(8))),
                Some(mark),
                "d={d}"
            );
        }
    }

    #[test]
    fn monotone_rows_low_totals_draw_total7_stands() {
        let blocks =
            PayoffBlocks::for_model(DealModel::Shoe(1), InfoModel::BankerComposition)
                .unwrap();
        let table = classify(&blocks).unwrap();
        for (pt, mark) in table.points().iter().zip(table.marks()) {
            if pt.banker_total() <= 2 {
                assert_eq!(*mark, Mark::Draw, "{pt}");
            }
            if pt.banker_total() == 7 {
                assert_eq!(*mark, Mark::Stand, "{pt}");
            }
        }
    }

    #[test]
    fn reduced_game_shape_d6() {
        let blocks =
            PayoffBlocks::for_model(DealModel::Shoe(6), InfoModel::FullComposition)
                .unwrap();
        let table = classify(&blocks).unwrap();
        let game = reduce_game(&blocks, &table).unwrap();
        assert_eq!(game.rows.len(), 32);
        assert_eq!(game.free_points.len(), 18);
        // Folding plus free contributions reproduces the full payoff row.
        let draws_all = vec![true; 18];
        let mask = PlayerMask::new(19).unwrap();
        let ri = blocks.row_index(mask).unwrap();
        let from_game = game.row_payoff(ri, &draws_all);
        let from_blocks = blocks
            .row_entry(mask, |pt| {
                table.mark(pt) != Some(Mark::Stand)
            })
            .unwrap();
        assert_eq!(from_game, from_blocks);
    }
}
