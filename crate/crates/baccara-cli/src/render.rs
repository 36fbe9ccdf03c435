//! Human-readable rendering: markdown grids in the shape of the reference
//! tables (rows are Banker totals or hands, columns the observed third
//! card with the stand column last), and flat lossless CSV.

use baccara::cards::{
    enumerate_banker_hands, DealModel, HandPair, InfoModel, Move, ThirdCard,
};
use baccara::dominance::{ClassificationTable, Mark};
use baccara::oracle::{rational_to_f64, SimulationReport};
use baccara::payoff::{Point, Rational, TotalPoint};
use baccara::solver::{
    column_bitstring, column_decimal, ExtremeEquilibria, SolvedModel,
};

use crate::doc::{Model, RatJson};

pub fn rational_slash(r: &Rational) -> String {
    RatJson::from_rational(r).slash()
}

fn obs_label(obs: ThirdCard) -> String {
    match obs {
        ThirdCard::Card(c) => c.value().to_string(),
        ThirdCard::Stand => "stand".into(),
    }
}

fn hand_label(hand: HandPair) -> String {
    format!("({},{})", hand.lo().value(), hand.hi().value())
}

fn model_heading(model: Model, deal: DealModel) -> String {
    match deal {
        DealModel::Shoe(d) => format!("model {model}, {d} decks"),
        DealModel::WithReplacement => {
            format!("model {model}, cards dealt with replacement")
        }
    }
}

fn mark_cell(mark: Mark) -> &'static str {
    match mark {
        Mark::Draw => "D",
        Mark::Stand => "S",
        Mark::Contested => "*",
    }
}

/// One grid row: a lookup of the cell text per observation.
fn grid_row(
    label_total: String,
    label_hand: String,
    with_hand_column: bool,
    cell: impl Fn(ThirdCard) -> String,
) -> String {
    let mut row = format!("| {label_total} ");
    if with_hand_column {
        row.push_str(&format!("| {label_hand} "));
    }
    for obs in ThirdCard::all() {
        row.push_str(&format!("| {} ", cell(obs)));
    }
    row.push('|');
    row
}

fn grid_header(with_hand_column: bool) -> String {
    let mut head = String::from("| total ");
    if with_hand_column {
        head.push_str("| hand ");
    }
    for obs in ThirdCard::all() {
        head.push_str(&format!("| {} ", obs_label(obs)));
    }
    head.push('|');
    let cols = 1 + with_hand_column as usize + 11;
    let rule = format!("|{}", "---|".repeat(cols));
    format!("{head}\n{rule}")
}

/// Totals whose rows are identical across hands and observations collapse
/// into one row, matching the reference layout (0,1,2 and 7).
fn collapsible(cells: &[(HandPair, Vec<String>)]) -> Option<&Vec<String>> {
    let first = &cells[0].1;
    if cells.iter().all(|(_, row)| row == first)
        && first.iter().all(|c| c == &first[0])
    {
        Some(first)
    } else {
        None
    }
}

pub fn classification_markdown(
    model: Model,
    solved: &ClassificationTable,
) -> String {
    let by_hand = solved.info != InfoModel::TotalsOnly;
    let mut out = format!(
        "# Banker move classification: {}\n\n",
        model_heading(model, solved.deal)
    );
    out.push_str(&grid_header(by_hand));
    out.push('\n');

    let cell_for = |pt: &Point| mark_cell(solved.mark(pt).unwrap()).to_string();
    if by_hand {
        let mut pending: Vec<(u8, Vec<(HandPair, Vec<String>)>)> = Vec::new();
        for total in 0..=7u8 {
            let hands: Vec<(HandPair, Vec<String>)> = enumerate_banker_hands()
                .into_iter()
                .filter(|h| h.total() == total)
                .map(|h| {
                    let row = ThirdCard::all()
                        .map(|obs| {
                            cell_for(&Point::Hand(
                                baccara::cards::DecisionPoint { hand: h, obs },
                            ))
                        })
                        .collect();
                    (h, row)
                })
                .collect();
            pending.push((total, hands));
        }
        // Merge consecutive totals that collapse to the same uniform cell.
        let mut i = 0;
        while i < pending.len() {
            let (total, hands) = &pending[i];
            if let Some(row) = collapsible(hands) {
                let uniform = row[0].clone();
                let mut span = vec![*total];
                while i + 1 < pending.len() {
                    let (t2, h2) = &pending[i + 1];
                    match collapsible(h2) {
                        Some(r2) if r2[0] == uniform => {
                            span.push(*t2);
                            i += 1;
                        }
                        _ => break,
                    }
                }
                let label = span
                    .iter()
                    .map(u8::to_string)
                    .collect::<Vec<_>>()
                    .join(",");
                out.push_str(&grid_row(
                    label,
                    "any".into(),
                    true,
                    |_| uniform.clone(),
                ));
                out.push('\n');
            } else {
                for (hand, row) in hands {
                    let cells = row.clone();
                    out.push_str(&grid_row(
                        total.to_string(),
                        hand_label(*hand),
                        true,
                        |obs| cells[obs.rank() as usize].clone(),
                    ));
                    out.push('\n');
                }
            }
            i += 1;
        }
    } else {
        let rows: Vec<(u8, Vec<String>)> = (0..=7u8)
            .map(|total| {
                let row: Vec<String> = ThirdCard::all()
                    .map(|obs| {
                        cell_for(&Point::Total(TotalPoint { total, obs }))
                    })
                    .collect();
                (total, row)
            })
            .collect();
        let mut i = 0;
        while i < rows.len() {
            let uniform = rows[i].1.iter().all(|c| *c == rows[i].1[0]);
            if uniform {
                let mut span = vec![rows[i].0];
                while i + 1 < rows.len()
                    && rows[i + 1].1 == rows[i].1
                {
                    span.push(rows[i + 1].0);
                    i += 1;
                }
                let label = span
                    .iter()
                    .map(u8::to_string)
                    .collect::<Vec<_>>()
                    .join(",");
                let cell = rows[i].1[0].clone();
                out.push_str(&grid_row(label, String::new(), false, |_| {
                    cell.clone()
                }));
            } else {
                let cells = rows[i].1.clone();
                out.push_str(&grid_row(
                    rows[i].0.to_string(),
                    String::new(),
                    false,
                    |obs| cells[obs.rank() as usize].clone(),
                ));
            }
            out.push('\n');
            i += 1;
        }
    }
    out.push_str(&format!(
        "\n{} contested points.\n",
        solved.contested_count()
    ));
    out
}

pub fn classification_csv(solved: &ClassificationTable) -> String {
    let mut out = String::from("total,hand,third,mark\n");
    for pt in solved.points() {
        let hand = match pt {
            Point::Hand(dp) => {
                format!("{}-{}", dp.hand.lo().value(), dp.hand.hi().value())
            }
            Point::Total(_) => String::new(),
        };
        out.push_str(&format!(
            "{},{},{},{}\n",
            pt.banker_total(),
            hand,
            obs_label(pt.obs()),
            mark_cell(solved.mark(pt).unwrap()),
        ));
    }
    out
}

pub fn solution_markdown(model: Model, solved: &SolvedModel) -> String {
    let sol = &solved.solution;
    let mut out = format!(
        "# Optimal strategies: {}\n\n",
        model_heading(model, sol.deal)
    );
    out.push_str(&format!(
        "Game value (to Player): {} (~{:.7})\n\n",
        rational_slash(&sol.value),
        rational_to_f64(&sol.value)
    ));

    out.push_str("## Player\n\n");
    let rows = sol.player.rows;
    if rows[0] == baccara::cards::PlayerMask::STAND_ON_FIVES
        && rows[1] == baccara::cards::PlayerMask::DRAW_ON_FIVES
    {
        out.push_str(&format!(
            "Draws on a two-card total of 5 with probability p = {} \
             (~{:.6}).\n\n",
            rational_slash(&sol.player.p),
            rational_to_f64(&sol.player.p)
        ));
    } else {
        out.push_str("| hand | move |\n|---|---|\n");
        for hand in baccara::cards::free_hands() {
            let lo = rows[0].draws_on_five(hand).unwrap();
            let hi = rows[1].draws_on_five(hand).unwrap();
            let cell = match (lo, hi) {
                (true, true) => "D".to_string(),
                (false, false) => "S".to_string(),
                _ => format!(
                    "(S,D) with p = {}",
                    rational_slash(&sol.player.p)
                ),
            };
            out.push_str(&format!("| {} | {} |\n", hand_label(hand), cell));
        }
        out.push('\n');
        out.push_str(&format!(
            "p = {} (~{:.6}); rows {} and {} of 0..31.\n\n",
            rational_slash(&sol.player.p),
            rational_to_f64(&sol.player.p),
            rows[0].bits(),
            rows[1].bits()
        ));
    }

    out.push_str("## Banker\n\n");
    let by_hand = sol.info != InfoModel::TotalsOnly;
    out.push_str(&grid_header(by_hand));
    out.push('\n');
    let cell_for = |pt: &Point| -> String {
        if Some(*pt) == sol.banker.mix_point {
            "(S,D)".into()
        } else {
            match sol.banker.moves[pt] {
                Move::Draw => "D".into(),
                Move::Stand => "S".into(),
            }
        }
    };
    if by_hand {
        for total in 0..=7u8 {
            let hands: Vec<(HandPair, Vec<String>)> = enumerate_banker_hands()
                .into_iter()
                .filter(|h| h.total() == total)
                .map(|h| {
                    let row = ThirdCard::all()
                        .map(|obs| {
                            cell_for(&Point::Hand(
                                baccara::cards::DecisionPoint { hand: h, obs },
                            ))
                        })
                        .collect();
                    (h, row)
                })
                .collect();
            if let Some(row) = collapsible(&hands) {
                let cell = row[0].clone();
                out.push_str(&grid_row(
                    total.to_string(),
                    "any".into(),
                    true,
                    |_| cell.clone(),
                ));
                out.push('\n');
            } else {
                for (hand, row) in hands {
                    let cells = row.clone();
                    out.push_str(&grid_row(
                        total.to_string(),
                        hand_label(hand),
                        true,
                        |obs| cells[obs.rank() as usize].clone(),
                    ));
                    out.push('\n');
                }
            }
        }
    } else {
        for total in 0..=7u8 {
            let cells: Vec<String> = ThirdCard::all()
                .map(|obs| cell_for(&Point::Total(TotalPoint { total, obs })))
                .collect();
            out.push_str(&grid_row(
                total.to_string(),
                String::new(),
                false,
                |obs| cells[obs.rank() as usize].clone(),
            ));
            out.push('\n');
        }
    }
    if let (Some(mix), Some(q)) = (&sol.banker.mix_point, &sol.banker.q) {
        let where_ = match mix {
            Point::Hand(dp) => format!(
                "{} on Player {}",
                hand_label(dp.hand),
                match dp.obs {
                    ThirdCard::Stand => "stand".to_string(),
                    ThirdCard::Card(c) => format!("third card {}", c.value()),
                }
            ),
            Point::Total(tp) => format!(
                "total {} on Player {}",
                tp.total,
                match tp.obs {
                    ThirdCard::Stand => "stand".to_string(),
                    ThirdCard::Card(c) => format!("third card {}", c.value()),
                }
            ),
        };
        out.push_str(&format!(
            "\n(S,D): stand with probability 1-q, draw with probability \
             q = {} (~{:.6}) at {}.\n",
            rational_slash(q),
            rational_to_f64(q),
            where_
        ));
    }

    if let Some(kernel) = &sol.kernel {
        let contested = baccara::dominance::contested_points(&solved.table);
        out.push_str("\n## Kernel\n\n");
        out.push_str(&format!(
            "Rows {} and {}; columns {} ({}) and {} ({}).\n\n",
            kernel.rows[0].bits(),
            kernel.rows[1].bits(),
            column_bitstring(&contested, &kernel.columns[0]),
            column_decimal(&contested, &kernel.columns[0]),
            column_bitstring(&contested, &kernel.columns[1]),
            column_decimal(&contested, &kernel.columns[1]),
        ));
        out.push_str("| | stand at mix | draw at mix |\n|---|---|---|\n");
        for (i, row) in kernel.entries.iter().enumerate() {
            out.push_str(&format!(
                "| row {} | {} | {} |\n",
                kernel.rows[i].bits(),
                rational_slash(&row[0]),
                rational_slash(&row[1]),
            ));
        }
    }

    if let Some(cert) = &sol.certificate {
        out.push_str("\n## Certificate\n\n");
        out.push_str(&format!(
            "Player side {} (worst margin {}); Banker side {} (worst \
             margin {}).\n",
            if cert.player_ok { "ok" } else { "FAILED" },
            rational_slash(&cert.player_worst_margin),
            if cert.banker_ok { "ok" } else { "FAILED" },
            rational_slash(&cert.banker_worst_margin),
        ));
    }
    out
}

pub fn solution_csv(solved: &SolvedModel) -> String {
    let sol = &solved.solution;
    let mut out = String::from("record,a,b,c,d\n");
    out.push_str(&format!("value,{},,,\n", rational_slash(&sol.value)));
    for (mask, w) in sol.player.weights() {
        out.push_str(&format!(
            "player_row,{},{},,\n",
            mask.bits(),
            rational_slash(&w)
        ));
    }
    for (pt, mv) in &sol.banker.moves {
        let hand = match pt {
            Point::Hand(dp) => {
                format!("{}-{}", dp.hand.lo().value(), dp.hand.hi().value())
            }
            Point::Total(tp) => tp.total.to_string(),
        };
        out.push_str(&format!(
            "banker_move,{},{},{},\n",
            hand,
            obs_label(pt.obs()),
            match mv {
                Move::Draw => "D",
                Move::Stand => "S",
            }
        ));
    }
    if let (Some(mix), Some(q)) = (&sol.banker.mix_point, &sol.banker.q) {
        let hand = match mix {
            Point::Hand(dp) => {
                format!("{}-{}", dp.hand.lo().value(), dp.hand.hi().value())
            }
            Point::Total(tp) => tp.total.to_string(),
        };
        out.push_str(&format!(
            "banker_mix,{},{},{},\n",
            hand,
            obs_label(mix.obs()),
            rational_slash(q)
        ));
    }
    out
}

pub fn simulation_markdown(report: &SimulationReport) -> String {
    format!(
        "# Simulation\n\n\
         trials: {}\n\
         mean gain: {:.6}\n\
         standard error: {:.6}\n\
         exact reference: {} (~{:.6})\n\
         z: {:.3}\n\
         natural fraction: {:.6}\n\
         rng: {} (seed {})\n",
        report.trials,
        report.mean,
        report.std_error,
        rational_slash(&report.exact),
        rational_to_f64(&report.exact),
        report.z,
        report.natural_fraction,
        report.rng,
        report.seed,
    )
}

pub fn simulation_csv(report: &SimulationReport) -> String {
    format!(
        "trials,mean,std_error,exact,z,natural_fraction,rng,seed\n\
         {},{},{},{},{},{},{},{}\n",
        report.trials,
        report.mean,
        report.std_error,
        rational_slash(&report.exact),
        report.z,
        report.natural_fraction,
        report.rng,
        report.seed,
    )
}

pub fn enumeration_markdown(model: Model, eq: &ExtremeEquilibria) -> String {
    let mut out = format!("# Extreme equilibria: model {model}\n\n");
    if !eq.player_pairs.is_empty() {
        out.push_str(&format!(
            "Player pairs (draw-frequency classes in eighths): {}\n\n",
            eq.player_pairs.len()
        ));
        out.push_str("| lo | hi | weight on hi |\n|---|---|---|\n");
        for pair in &eq.player_pairs {
            out.push_str(&format!(
                "| {} | {} | {} |\n",
                pair.lo,
                pair.hi,
                rational_slash(&pair.weight)
            ));
        }
        out.push('\n');
    }
    out.push_str(&format!(
        "Banker pairs (draw-frequency classes in sixteenths): {}\n\n",
        eq.banker_pairs.len()
    ));
    out.push_str("| lo | hi | weight on hi |\n|---|---|---|\n");
    for pair in &eq.banker_pairs {
        out.push_str(&format!(
            "| {} | {} | {} |\n",
            pair.lo,
            pair.hi,
            rational_slash(&pair.weight)
        ));
    }
    out.push_str(&format!("\n{} extreme equilibria.\n", eq.pair_count));
    out
}

pub fn enumeration_csv(eq: &ExtremeEquilibria) -> String {
    let mut out = String::from("side,lo,hi,weight\n");
    for pair in &eq.player_pairs {
        out.push_str(&format!(
            "player,{},{},{}\n",
            pair.lo,
            pair.hi,
            rational_slash(&pair.weight)
        ));
    }
    for pair in &eq.banker_pairs {
        out.push_str(&format!(
            "banker,{},{},{}\n",
            pair.lo,
            pair.hi,
            rational_slash(&pair.weight)
        ));
    }
    out.push_str(&format!("count,,,{}\n", eq.pair_count));
    out
}
