//! The lower-envelope method for two-row games.
//!
//! When Player has two rows and Banker chooses draw/stand independently at
//! n points, Player's guaranteed payoff under the mixture (1-p, p) is the
//! pointwise minimum over Banker's 2^n strategies: a continuous, concave,
//! piecewise-linear function V(p). It is maximized at 0, 1, or one of the
//! finitely many crossover probabilities where some point's two moves tie.
//! The maximizing crossover pins a 2x2 kernel whose mixture solves the
//! game exactly.

use std::fmt;

use crate::dominance::ReducedGame;
use crate::error::{Error, Result};
use crate::payoff::{integer, Point, Rational};
use crate::PlayerMask;

/// The products p_i(l) a_{i,j}(l) for both moves at one free point, one row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EValues {
    pub stand: Rational,
    pub draw: Rational,
}

#[derive(Debug, Clone)]
pub struct FreePoint {
    pub point: Point,
    /// Indexed by row.
    pub e: [EValues; 2],
}

/// A two-row game over free points, with all forced contributions already
/// folded into per-row constants.
#[derive(Debug, Clone)]
pub struct TwoRowGame {
    pub rows: [PlayerMask; 2],
    pub consts: [Rational; 2],
    pub free: Vec<FreePoint>,
}

/// Banker's preferred move at a point against each of the two rows.
/// `StandDraw` means standing is better against row 0 and drawing against
/// row 1, so the preference crosses as p increases; `DrawStand` crosses
/// the other way.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BestResponse {
    StandStand,
    StandDraw,
    DrawStand,
    DrawDraw,
}

impl BestResponse {
    pub fn crosses(self) -> bool {
        matches!(self, BestResponse::StandDraw | BestResponse::DrawStand)
    }
}

impl TwoRowGame {
    /// Restrict a reduced game to two of its rows.
    pub fn from_reduced(
        game: &ReducedGame,
        row0: PlayerMask,
        row1: PlayerMask,
    ) -> Result<TwoRowGame> {
        let find = |m: PlayerMask| -> Result<usize> {
            game.rows
                .iter()
                .position(|r| *r == m)
                .ok_or(Error::RowNotInBlocks(m.bits()))
        };
        let (i0, i1) = (find(row0)?, find(row1)?);
        let free = game
            .free_points
            .iter()
            .enumerate()
            .map(|(l, point)| FreePoint {
                point: *point,
                e: [
                    EValues {
                        stand: game.e[i0][l].stand.clone(),
                        draw: game.e[i0][l].draw.clone(),
                    },
                    EValues {
                        stand: game.e[i1][l].stand.clone(),
                        draw: game.e[i1][l].draw.clone(),
                    },
                ],
            })
            .collect();
        Ok(TwoRowGame {
            rows: [row0, row1],
            consts: [
                game.row_consts[i0].clone(),
                game.row_consts[i1].clone(),
            ],
            free,
        })
    }

    /// Payoffs of both rows against the column drawing where `draws` holds.
    pub fn column_payoffs(&self, draws: &[bool]) -> [Rational; 2] {
        assert_eq!(draws.len(), self.free.len());
        let mut out = [self.consts[0].clone(), self.consts[1].clone()];
        for (fp, d) in self.free.iter().zip(draws) {
            for i in 0..2 {
                out[i] += if *d { &fp.e[i].draw } else { &fp.e[i].stand };
            }
        }
        out
    }

    /// Fold every point where both rows prefer the same move into the
    /// constants, leaving only the points whose preference crosses.
    pub fn fold_unanimous(&self) -> Result<TwoRowGame> {
        let classes = partition(self)?;
        let mut consts = self.consts.clone();
        let mut free = Vec::new();
        for (fp, class) in self.free.iter().zip(classes) {
            match class {
                BestResponse::StandStand => {
                    consts[0] += &fp.e[0].stand;
                    consts[1] += &fp.e[1].stand;
                }
                BestResponse::DrawDraw => {
                    consts[0] += &fp.e[0].draw;
                    consts[1] += &fp.e[1].draw;
                }
                _ => free.push(fp.clone()),
            }
        }
        Ok(TwoRowGame {
            rows: self.rows,
            consts,
            free,
        })
    }
}

/// Assign each free point its best-response class by the two strict sign
/// tests. Equality at any point is an error naming it.
pub fn partition(game: &TwoRowGame) -> Result<Vec<BestResponse>> {
    game.free
        .iter()
        .map(|fp| {
            let pref = |e: &EValues| -> Result<bool> {
                // true = Banker prefers drawing (it pays Player less).
                if e.draw < e.stand {
                    Ok(true)
                } else if e.draw > e.stand {
                    Ok(false)
                } else {
                    Err(Error::PartitionTie(fp.point.to_string()))
                }
            };
            Ok(match (pref(&fp.e[0])?, pref(&fp.e[1])?) {
                (false, false) => BestResponse::StandStand,
                (false, true) => BestResponse::StandDraw,
                (true, false) => BestResponse::DrawStand,
                (true, true) => BestResponse::DrawDraw,
            })
        })
        .collect()
}

/// The mixing probability at which the two moves at a crossing point tie:
/// p(l) = (e00 - e01) / ((e00 - e01) + (e11 - e10)), always in (0,1).
pub fn crossover(fp: &FreePoint) -> Result<Rational> {
    let top = &fp.e[0].stand - &fp.e[0].draw;
    let bottom = &fp.e[1].draw - &fp.e[1].stand;
    let den = &top + &bottom;
    if den == integer(0) {
        return Err(Error::CrossoverUndefined(fp.point.to_string()));
    }
    Ok(top / den)
}

/// Banker's best response to the row mixture (1-p, p): the set of points
/// he draws on. Strict inequalities; at a tied crossover the point is
/// left standing (both completions are optimal there).
pub fn best_response(game: &TwoRowGame, p: &Rational) -> Result<Vec<Point>> {
    let classes = partition(game)?;
    let mut draws = Vec::new();
    for (fp, class) in game.free.iter().zip(classes) {
        let drawn = match class {
            BestResponse::DrawDraw => true,
            BestResponse::StandStand => false,
            BestResponse::StandDraw => crossover(fp)? < *p,
            BestResponse::DrawStand => crossover(fp)? > *p,
        };
        if drawn {
            draws.push(fp.point);
        }
    }
    Ok(draws)
}

/// V(p): Player's guaranteed payoff under the mixture (1-p, p), the lower
/// envelope over all Banker columns. Continuous, piecewise linear, concave.
pub fn envelope_value(game: &TwoRowGame, p: &Rational) -> Rational {
    let one_minus = integer(1) - p;
    let mut v = &one_minus * &game.consts[0] + p * &game.consts[1];
    for fp in &game.free {
        let stand = &one_minus * &fp.e[0].stand + p * &fp.e[1].stand;
        let draw = &one_minus * &fp.e[0].draw + p * &fp.e[1].draw;
        v += stand.min(draw);
    }
    v
}

/// One evaluated candidate maximizer of the envelope.
#[derive(Debug, Clone)]
pub struct Candidate {
    pub p: Rational,
    pub value: Rational,
    /// Crossover points sharing this p; empty for the endpoints 0 and 1.
    pub points: Vec<Point>,
}

/// The 2x2 kernel pinned by the maximizing crossover: the two best-response
/// completions differing only at the mixing point.
#[derive(Debug, Clone)]
pub struct Kernel {
    pub rows: [PlayerMask; 2],
    pub mix_point: Point,
    /// Draw sets; `columns[1]` additionally draws at the mixing point.
    pub columns: [Vec<Point>; 2],
    pub entries: [[Rational; 2]; 2],
}

#[derive(Debug, Clone)]
pub struct EnvelopeSolution {
    pub p_star: Rational,
    pub value: Rational,
    pub l_star: Option<Point>,
    pub kernel: Option<Kernel>,
    pub q_star: Option<Rational>,
    pub candidates: Vec<Candidate>,
    /// Every candidate p achieving the maximum.
    pub maximizers: Vec<Rational>,
    /// True when a single interior crossover of a single point attains the
    /// maximum, so the kernel construction is forced.
    pub unique: bool,
}

/// Maximize the lower envelope over the candidate set {0, 1, crossovers},
/// identify the mixing point, build the kernel, and solve it. A non-unique
/// maximizer or an endpoint maximizer is reported through `unique` and the
/// candidate list rather than silently resolved.
pub fn solve(game: &TwoRowGame) -> Result<EnvelopeSolution> {
    let classes = partition(game)?;
    let mut candidates: Vec<Candidate> = vec![
        Candidate {
            p: integer(0),
            value: envelope_value(game, &integer(0)),
            points: Vec::new(),
        },
        Candidate {
            p: integer(1),
            value: envelope_value(game, &integer(1)),
            points: Vec::new(),
        },
    ];
    for (fp, class) in game.free.iter().zip(&classes) {
        if !class.crosses() {
            continue;
        }
        let p = crossover(fp)?;
        match candidates.iter_mut().find(|c| c.p == p) {
            Some(c) => c.points.push(fp.point),
            None => {
                let value = envelope_value(game, &p);
                candidates.push(Candidate {
                    p,
                    value,
                    points: vec![fp.point],
                });
            }
        }
    }
    candidates.sort_by(|a, b| a.p.cmp(&b.p));
    let best_value = candidates
        .iter()
        .map(|c| c.value.clone())
        .max()
        .expect("candidate set is never empty");
    let maximizers: Vec<Rational> = candidates
        .iter()
        .filter(|c| c.value == best_value)
        .map(|c| c.p.clone())
        .collect();
    let best = candidates
        .iter()
        .find(|c| c.value == best_value && !c.points.is_empty())
        .cloned();

    let (p_star, l_star, kernel, q_star) = match best {
        None => {
            // Maximum only at an endpoint: a pure optimum, no kernel.
            let c = candidates
                .iter()
                .find(|c| c.value == best_value)
                .expect("maximum exists");
            (c.p.clone(), None, None, None)
        }
        Some(c) => {
            let l_star = c.points[0];
            let kernel = build_kernel(game, &classes, &c.p, l_star)?;
            match solve_kernel_2x2(&kernel.entries) {
                Ok((_, q, v)) => {
                    debug_assert_eq!(v, best_value);
                    (c.p.clone(), Some(l_star), Some(kernel), Some(q))
                }
                // A flat envelope top: one column alone holds Player to
                // the value, so no interior column mixture exists. The
                // maximizer set is an interval and `unique` stays false.
                Err(Error::PureSaddle) => {
                    (c.p.clone(), Some(l_star), Some(kernel), None)
                }
                Err(other) => return Err(other),
            }
        }
    };
    let unique = maximizers.len() == 1
        && l_star.is_some()
        && candidates
            .iter()
            .find(|c| c.p == p_star)
            .map(|c| c.points.len() == 1)
            .unwrap_or(false);
    Ok(EnvelopeSolution {
        p_star,
        value: best_value,
        l_star,
        kernel,
        q_star,
        candidates,
        maximizers,
        unique,
    })
}

fn build_kernel(
    game: &TwoRowGame,
    classes: &[BestResponse],
    p_star: &Rational,
    l_star: Point,
) -> Result<Kernel> {
    let mut base: Vec<Point> = Vec::new();
    for (fp, class) in game.free.iter().zip(classes) {
        if fp.point == l_star {
            continue;
        }
        let drawn = match class {
            BestResponse::DrawDraw => true,
            BestResponse::StandStand => false,
            BestResponse::StandDraw => crossover(fp)? < *p_star,
            BestResponse::DrawStand => crossover(fp)? > *p_star,
        };
        if drawn {
            base.push(fp.point);
        }
    }
    let mut with_l = base.clone();
    with_l.push(l_star);
    with_l.sort();
    let entries = kernel_entries(game, &base, &with_l);
    Ok(Kernel {
        rows: game.rows,
        mix_point: l_star,
        columns: [base, with_l],
        entries,
    })
}

fn kernel_entries(
    game: &TwoRowGame,
    col0: &[Point],
    col1: &[Point],
) -> [[Rational; 2]; 2] {
    let payoff = |row: usize, col: &[Point]| -> Rational {
        let mut v = game.consts[row].clone();
        for fp in &game.free {
            v += if col.contains(&fp.point) {
                &fp.e[row].draw
            } else {
                &fp.e[row].stand
            };
        }
        v
    };
    [
        [payoff(0, col0), payoff(0, col1)],
        [payoff(1, col0), payoff(1, col1)],
    ]
}

/// Solve a 2x2 matrix game with no pure saddle point: the row mixture
/// (1-p, p) equalizes the columns, the column mixture (1-q, q) equalizes
/// the rows, and v is the common value.
pub fn solve_kernel_2x2(
    k: &[[Rational; 2]; 2],
) -> Result<(Rational, Rational, Rational)> {
    let (a, b, c, d) = (&k[0][0], &k[0][1], &k[1][0], &k[1][1]);
    let p_den = (a - b) + (d - c);
    let q_den = (a - c) + (d - b);
    if p_den == integer(0) || q_den == integer(0) {
        return Err(Error::PureSaddle);
    }
    let p = (a - b) / &p_den;
    let q = (a - c) / &q_den;
    let zero = integer(0);
    let one = integer(1);
    if p <= zero || p >= one || q <= zero || q >= one {
        return Err(Error::PureSaddle);
    }
    let v = (&one - &p) * a + &p * c;
    debug_assert_eq!(v, (&one - &p) * b + &p * d);
    debug_assert_eq!(v, (&one - &q) * a + &q * b);
    Ok((p, q, v))
}

impl fmt::Display for Kernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "rows ({}, {}), mixing on {}",
            self.rows[0], self.rows[1], self.mix_point
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cards::{DecisionPoint, HandPair, ThirdCard};
    use crate::payoff::ratio;
    use crate::CardValue;

    fn dummy_point(total_tag: u8) -> Point {
        // Distinct hand-level points for synthetic games.
        Point::Hand(
            DecisionPoint::new(
                HandPair::of(0, total_tag).unwrap(),
                ThirdCard::Card(CardValue::new(9).unwrap()),
            )
            .unwrap(),
        )
    }

    fn fp(tag: u8, e00: i64, e01: i64, e10: i64, e11: i64) -> FreePoint {
        FreePoint {
            point: dummy_point(tag),
            e: [
                EValues {
                    stand: ratio(e00, 1),
                    draw: ratio(e01, 1),
                },
                EValues {
                    stand: ratio(e10, 1),
                    draw: ratio(e11, 1),
                },
            ],
        }
    }

    fn game(free: Vec<FreePoint>) -> TwoRowGame {
        TwoRowGame {
            rows: [
                PlayerMask::STAND_ON_FIVES,
                PlayerMask::DRAW_ON_FIVES,
            ],
            consts: [integer(0), integer(0)],
            free,
        }
    }

    #[test]
    fn symmetric_crossover_is_half() {
        let g = game(vec![fp(0, 1, 0, 0, 1)]);
        assert_eq!(crossover(&g.free[0]).unwrap(), ratio(1, 2));
    }

    #[test]
    fn partition_flags_exact_ties() {
        let g = game(vec![fp(0, 3, 3, 0, 1)]);
        assert!(matches!(
            partition(&g),
            Err(Error::PartitionTie(_))
        ));
    }

    #[test]
    fn all_draw_points_make_envelope_linear() {
        // Both rows strictly prefer Banker to draw everywhere: V is linear,
        // the maximum sits at an endpoint, and no kernel exists.
        let g = game(vec![fp(0, 5, 1, 7, 2), fp(1, 4, 2, 9, 3)]);
        let classes = partition(&g).unwrap();
        assert!(classes.iter().all(|c| *c == BestResponse::DrawDraw));
        let sol = solve(&g).unwrap();
        assert!(sol.kernel.is_none());
        assert!(!sol.unique);
        assert_eq!(sol.value, ratio(5, 1)); // row 1 pure: 2 + 3 at p = 1
        assert_eq!(sol.p_star, integer(1));
    }

    #[test]
    fn best_response_at_endpoints() {
        // T(0) draws on DrawDraw and DrawStand points; T(1) on DrawDraw
        // and StandDraw points.
        let g = game(vec![
            fp(0, 5, 1, 7, 2), // DrawDraw
            fp(1, 0, 1, 3, 2), // StandDraw, crossover 1/2
            fp(2, 2, 1, 1, 2), // DrawStand, crossover 1/2
        ]);
        let t0 = best_response(&g, &integer(0)).unwrap();
        assert_eq!(t0, vec![dummy_point(0), dummy_point(2)]);
        let t1 = best_response(&g, &integer(1)).unwrap();
        assert_eq!(t1, vec![dummy_point(0), dummy_point(1)]);
    }

    #[test]
    fn identity_kernel_solves_to_halves() {
        let k = [
            [ratio(1, 1), ratio(0, 1)],
            [ratio(0, 1), ratio(1, 1)],
        ];
        let (p, q, v) = solve_kernel_2x2(&k).unwrap();
        assert_eq!(p, ratio(1, 2));
        assert_eq!(q, ratio(1, 2));
        assert_eq!(v, ratio(1, 2));
    }

    #[test]
    fn saddled_kernel_rejected() {
        let k = [
            [ratio(2, 1), ratio(1, 1)],
            [ratio(1, 1), ratio(0, 1)],
        ];
        assert!(matches!(solve_kernel_2x2(&k), Err(Error::PureSaddle)));
    }

    #[test]
    fn two_point_game_solves_exactly() {
        // One crossing point and one unanimous point; hand-checkable.
        let g = game(vec![
            fp(0, 1, 0, 0, 1), // StandDraw? e00=1>e01=0: row0 prefers draw...
        ]);
        // e00 > e01 and e10 < e11: DrawStand, crossover (1-0)/((1-0)+(1-0)).
        let classes = partition(&g).unwrap();
        assert_eq!(classes[0], BestResponse::DrawStand);
        let sol = solve(&g).unwrap();
        assert_eq!(sol.p_star, ratio(1, 2));
        assert_eq!(sol.value, ratio(1, 2));
        let kernel = sol.kernel.unwrap();
        // Column 0 stands at the mixing point, column 1 draws.
        assert_eq!(kernel.columns[0], Vec::<Point>::new());
        assert_eq!(kernel.columns[1], vec![dummy_point(0)]);
    }

    #[test]
    fn envelope_is_concave_on_a_grid() {
        let g = game(vec![
            fp(0, 3, -1, -2, 4),
            fp(1, 1, 0, 0, 2),
            fp(2, -1, 2, 3, -2),
        ]);
        let vals: Vec<Rational> = (0..=20)
            .map(|i| envelope_value(&g, &ratio(i, 20)))
            .collect();
        for w in vals.windows(3) {
            // Midpoint above the chord, exact comparison with step h=1/20.
            assert!(&w[1] + &w[1] >= &w[0] + &w[2]);
        }
    }
}
