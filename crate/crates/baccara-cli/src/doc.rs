//! Machine-readable documents: the JSON schema for solutions, move
//! tables, classifications, certificates, and simulation reports.
//!
//! Rationals are serialized losslessly as decimal digit strings, never as
//! floats. Parsing is strict: unknown moves, out-of-range cards, partial
//! tables, and non-integer rational fields are all rejected.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num::bigint::BigInt;
use num::{Signed, Zero};
use serde::{Deserialize, Serialize};

use baccara::cards::{
    CardValue, DealModel, DecisionPoint, HandPair, InfoModel, Move,
    PlayerMask, ThirdCard,
};
use baccara::oracle::{MoveTable, SimulationReport};
use baccara::payoff::{integer, Point, Rational, TotalPoint};
use baccara::solver::{
    BankerStrategy, CertificateReport, GameSolution, PlayerStrategy,
};

/// Errors from document parsing and validation; always a usage-level
/// failure, never a panic.
#[derive(Debug)]
pub struct DocError(pub String);

impl fmt::Display for DocError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for DocError {}

fn err(msg: impl Into<String>) -> DocError {
    DocError(msg.into())
}

/// The six named games.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Model {
    A1,
    A2,
    A3,
    B1,
    B2,
    B3,
}

impl Model {
    pub fn uses_shoe(self) -> bool {
        matches!(self, Model::B1 | Model::B2 | Model::B3)
    }

    pub fn info(self) -> InfoModel {
        match self {
            Model::A1 | Model::B1 => InfoModel::TotalsOnly,
            Model::A2 | Model::B2 => InfoModel::BankerComposition,
            Model::A3 | Model::B3 => InfoModel::FullComposition,
        }
    }

    pub fn deal(self, decks: Option<u32>) -> Result<DealModel, DocError> {
        match (self.uses_shoe(), decks) {
            (true, Some(0)) => Err(err("--decks must be at least 1")),
            (true, Some(d)) => Ok(DealModel::Shoe(d)),
            (true, None) => {
                Err(err(format!("model {self} requires --decks")))
            }
            (false, None) => Ok(DealModel::WithReplacement),
            (false, Some(_)) => Err(err(format!(
                "model {self} deals with replacement and takes no --decks"
            ))),
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Model::A1 => "A1",
            Model::A2 => "A2",
            Model::A3 => "A3",
            Model::B1 => "B1",
            Model::B2 => "B2",
            Model::B3 => "B3",
        };
        write!(f, "{s}")
    }
}

impl FromStr for Model {
    type Err = DocError;

    fn from_str(s: &str) -> Result<Self, DocError> {
        match s {
            "A1" | "a1" => Ok(Model::A1),
            "A2" | "a2" => Ok(Model::A2),
            "A3" | "a3" => Ok(Model::A3),
            "B1" | "b1" => Ok(Model::B1),
            "B2" | "b2" => Ok(Model::B2),
            "B3" | "b3" => Ok(Model::B3),
            _ => Err(err(format!(
                "unknown model '{s}' (expected A1, A2, A3, B1, B2 or B3)"
            ))),
        }
    }
}

/// A rational as decimal digit strings.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct RatJson {
    pub num: String,
    pub den: String,
}

impl RatJson {
    pub fn from_rational(r: &Rational) -> RatJson {
        RatJson {
            num: r.numer().to_string(),
            den: r.denom().to_string(),
        }
    }

    pub fn to_rational(&self) -> Result<Rational, DocError> {
        let num = BigInt::from_str(self.num.trim())
            .map_err(|_| err(format!("bad rational numerator '{}'", self.num)))?;
        let den = BigInt::from_str(self.den.trim())
            .map_err(|_| err(format!("bad rational denominator '{}'", self.den)))?;
        if den.is_zero() {
            return Err(err("rational denominator is zero"));
        }
        if den.is_negative() {
            return Err(err("rational denominator must be positive"));
        }
        Ok(Rational::new(num, den))
    }

    /// Slash form, e.g. "-73356216203119/5712649844821920".
    pub fn slash(&self) -> String {
        format!("{}/{}", self.num, self.den)
    }
}

/// A third-card observation: a card value 0..=9 or the word "stand".
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(untagged)]
pub enum ThirdDoc {
    Card(u8),
    Word(String),
}

impl ThirdDoc {
    pub fn from_obs(obs: ThirdCard) -> ThirdDoc {
        match obs {
            ThirdCard::Card(c) => ThirdDoc::Card(c.value()),
            ThirdCard::Stand => ThirdDoc::Word("stand".into()),
        }
    }

    pub fn to_obs(&self) -> Result<ThirdCard, DocError> {
        match self {
            ThirdDoc::Card(k) => Ok(ThirdCard::Card(
                CardValue::new(*k)
                    .map_err(|_| err(format!("third card {k} out of range")))?,
            )),
            ThirdDoc::Word(w) if w == "stand" => Ok(ThirdCard::Stand),
            ThirdDoc::Word(w) => {
                Err(err(format!("bad third-card observation '{w}'")))
            }
        }
    }
}

/// A decision point: either a Banker hand or a bare total, plus the
/// observation.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct PointDoc {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hand: Option<[u8; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub total: Option<u8>,
    pub third: ThirdDoc,
}

impl PointDoc {
    pub fn from_point(point: &Point) -> PointDoc {
        match point {
            Point::Hand(dp) => PointDoc {
                hand: Some([dp.hand.lo().value(), dp.hand.hi().value()]),
                total: None,
                third: ThirdDoc::from_obs(dp.obs),
            },
            Point::Total(tp) => PointDoc {
                hand: None,
                total: Some(tp.total),
                third: ThirdDoc::from_obs(tp.obs),
            },
        }
    }

    pub fn to_point(&self) -> Result<Point, DocError> {
        let obs = self.third.to_obs()?;
        match (self.hand, self.total) {
            (Some([a, b]), None) => {
                let hand = HandPair::of(a, b)
                    .map_err(|e| err(e.to_string()))?;
                let dp = DecisionPoint::new(hand, obs)
                    .map_err(|e| err(e.to_string()))?;
                Ok(Point::Hand(dp))
            }
            (None, Some(total)) => {
                if total > 7 {
                    return Err(err(format!(
                        "banker total {total} out of range 0..=7"
                    )));
                }
                Ok(Point::Total(TotalPoint { total, obs }))
            }
            _ => Err(err(
                "point needs exactly one of 'hand' or 'total'",
            )),
        }
    }
}

fn move_str(mv: Move) -> &'static str {
    match mv {
        Move::Draw => "D",
        Move::Stand => "S",
    }
}

fn parse_move(s: &str) -> Result<Move, DocError> {
    match s {
        "D" | "d" => Ok(Move::Draw),
        "S" | "s" => Ok(Move::Stand),
        _ => Err(err(format!("bad move '{s}' (expected D or S)"))),
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BankerMoveDoc {
    #[serde(flatten)]
    pub point: PointDoc,
    #[serde(rename = "move")]
    pub mv: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RowWeightDoc {
    pub mask: u8,
    pub weight: RatJson,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PlayerMoveDoc {
    pub hand: [u8; 2],
    #[serde(rename = "move")]
    pub mv: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<RatJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PlayerDoc {
    pub rows: Vec<RowWeightDoc>,
    /// Move per free total-5 hand: D, S, or SD (mix).
    pub table: Vec<PlayerMoveDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BankerDoc {
    pub forced_table: Vec<BankerMoveDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mixing_point: Option<PointDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<RatJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KernelDoc {
    pub rows: [u8; 2],
    pub mixing_point: PointDoc,
    /// Draw-set bit labels over the contested points, most significant
    /// bit first in canonical order.
    pub columns: [String; 2],
    pub column_decimals: [u64; 2],
    pub entries: [[RatJson; 2]; 2],
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CertificateDoc {
    pub player_ok: bool,
    pub player_worst_margin: RatJson,
    pub banker_ok: bool,
    pub banker_worst_margin: RatJson,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub player_failures: Vec<Vec<PointDoc>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub banker_failures: Vec<u8>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolutionDoc {
    pub model: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decks: Option<u32>,
    pub player: PlayerDoc,
    pub banker: BankerDoc,
    pub value: RatJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kernel: Option<KernelDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClassificationDoc {
    pub model: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decks: Option<u32>,
    pub contested: usize,
    pub points: Vec<ClassifiedPointDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClassifiedPointDoc {
    #[serde(flatten)]
    pub point: PointDoc,
    pub mark: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SimulationDoc {
    pub trials: u64,
    pub mean: f64,
    pub std_error: f64,
    pub exact: RatJson,
    pub z: f64,
    pub natural_fraction: f64,
    pub rng: String,
    pub seed: u64,
}

impl SimulationDoc {
    pub fn from_report(r: &SimulationReport) -> SimulationDoc {
        SimulationDoc {
            trials: r.trials,
            mean: r.mean,
            std_error: r.std_error,
            exact: RatJson::from_rational(&r.exact),
            z: r.z,
            natural_fraction: r.natural_fraction,
            rng: r.rng.to_string(),
            seed: r.seed,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MixPairDoc {
    pub lo: u8,
    pub hi: u8,
    pub weight: RatJson,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EnumerationDoc {
    pub model: String,
    pub player_pairs: Vec<MixPairDoc>,
    pub banker_pairs: Vec<MixPairDoc>,
    pub count: usize,
}

/// A standalone pure Banker move table, for the simulator.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MoveTableDoc {
    pub points: Vec<BankerMoveDoc>,
}

// ---------------------------------------------------------------------
// Conversions.
// ---------------------------------------------------------------------

pub fn certificate_doc(report: &CertificateReport) -> CertificateDoc {
    CertificateDoc {
        player_ok: report.player_ok,
        player_worst_margin: RatJson::from_rational(
            &report.player_worst_margin,
        ),
        banker_ok: report.banker_ok,
        banker_worst_margin: RatJson::from_rational(
            &report.banker_worst_margin,
        ),
        player_failures: report
            .player_failures
            .iter()
            .map(|col| col.iter().map(PointDoc::from_point).collect())
            .collect(),
        banker_failures: report
            .banker_failures
            .iter()
            .map(|m| m.bits())
            .collect(),
    }
}

/// Player move table over the five free hands implied by the two rows.
fn player_table(player: &PlayerStrategy) -> Vec<PlayerMoveDoc> {
    baccara::cards::free_hands()
        .iter()
        .map(|hand| {
            let lo = player.rows[0].draws_on_five(*hand).unwrap();
            let hi = player.rows[1].draws_on_five(*hand).unwrap();
            let (mv, p) = match (lo, hi) {
                (true, true) => ("D", None),
                (false, false) => ("S", None),
                (false, true) => {
                    ("SD", Some(RatJson::from_rational(&player.p)))
                }
                (true, false) => ("DS", Some(RatJson::from_rational(&player.p))),
            };
            PlayerMoveDoc {
                hand: [hand.lo().value(), hand.hi().value()],
                mv: mv.into(),
                p,
            }
        })
        .collect()
}

pub fn solution_doc(
    model: Model,
    solution: &GameSolution,
    contested: &[Point],
    certificate: Option<&CertificateReport>,
) -> SolutionDoc {
    let kernel = solution.kernel.as_ref().map(|k| KernelDoc {
        rows: [k.rows[0].bits(), k.rows[1].bits()],
        mixing_point: PointDoc::from_point(&k.mix_point),
        columns: [
            baccara::solver::column_bitstring(contested, &k.columns[0]),
            baccara::solver::column_bitstring(contested, &k.columns[1]),
        ],
        column_decimals: [
            baccara::solver::column_decimal(contested, &k.columns[0]),
            baccara::solver::column_decimal(contested, &k.columns[1]),
        ],
        entries: [
            [
                RatJson::from_rational(&k.entries[0][0]),
                RatJson::from_rational(&k.entries[0][1]),
            ],
            [
                RatJson::from_rational(&k.entries[1][0]),
                RatJson::from_rational(&k.entries[1][1]),
            ],
        ],
    });
    SolutionDoc {
        model: model.to_string(),
        decks: solution.deal.decks(),
        player: PlayerDoc {
            rows: solution
                .player
                .weights()
                .iter()
                .map(|(mask, w)| RowWeightDoc {
                    mask: mask.bits(),
                    weight: RatJson::from_rational(w),
                })
                .collect(),
            table: player_table(&solution.player),
        },
        banker: BankerDoc {
            forced_table: solution
                .banker
                .moves
                .iter()
                .map(|(pt, mv)| BankerMoveDoc {
                    point: PointDoc::from_point(pt),
                    mv: move_str(*mv).into(),
                })
                .collect(),
            mixing_point: solution
                .banker
                .mix_point
                .as_ref()
                .map(PointDoc::from_point),
            q: solution.banker.q.as_ref().map(RatJson::from_rational),
        },
        value: RatJson::from_rational(&solution.value),
        kernel,
        certificate: certificate.map(certificate_doc),
    }
}

/// Strict parse of solution JSON bytes.
pub fn parse_solution_doc(bytes: &[u8]) -> Result<SolutionDoc, DocError> {
    serde_json::from_slice(bytes)
        .map_err(|e| err(format!("malformed solution document: {e}")))
}

/// Reconstruct a checkable solution from a parsed document.
pub fn solution_from_doc(
    doc: &SolutionDoc,
) -> Result<(Model, GameSolution), DocError> {
    let model: Model = doc.model.parse()?;
    let deal = model.deal(doc.decks)?;
    let info = model.info();
    if doc.player.rows.len() != 2 {
        return Err(err("player must mix exactly two rows"));
    }
    let rows = [
        PlayerMask::new(doc.player.rows[0].mask)
            .map_err(|e| err(e.to_string()))?,
        PlayerMask::new(doc.player.rows[1].mask)
            .map_err(|e| err(e.to_string()))?,
    ];
    let w0 = doc.player.rows[0].weight.to_rational()?;
    let w1 = doc.player.rows[1].weight.to_rational()?;
    if &w0 + &w1 != integer(1) {
        return Err(err("player row weights must sum to 1"));
    }
    if w1.is_negative() || w0.is_negative() {
        return Err(err("player row weights must be nonnegative"));
    }
    let mut moves: BTreeMap<Point, Move> = BTreeMap::new();
    for entry in &doc.banker.forced_table {
        let pt = entry.point.to_point()?;
        let expected_hand = info != InfoModel::TotalsOnly;
        if matches!(pt, Point::Hand(_)) != expected_hand {
            return Err(err(format!(
                "point granularity does not match model {model}: {entry:?}"
            )));
        }
        if moves.insert(pt, parse_move(&entry.mv)?).is_some() {
            return Err(err("duplicate point in forced_table"));
        }
    }
    let mix_point = doc
        .banker
        .mixing_point
        .as_ref()
        .map(|p| p.to_point())
        .transpose()?;
    let q = doc
        .banker
        .q
        .as_ref()
        .map(|q| q.to_rational())
        .transpose()?;
    if let Some(q) = &q {
        if q.is_negative() || *q > integer(1) {
            return Err(err("q must lie in [0, 1]"));
        }
    }
    // The table plus the mixing point must cover the whole point space.
    let space: Vec<Point> = match info {
        InfoModel::TotalsOnly => {
            TotalPoint::all().into_iter().map(Point::Total).collect()
        }
        _ => DecisionPoint::all().into_iter().map(Point::Hand).collect(),
    };
    for pt in &space {
        let covered =
            moves.contains_key(pt) || Some(*pt) == mix_point;
        if !covered {
            return Err(err(format!("banker table is missing {pt}")));
        }
    }
    if moves.len() + mix_point.is_some() as usize != space.len() {
        return Err(err("banker table has points outside the model"));
    }
    let solution = GameSolution {
        deal,
        info,
        player: PlayerStrategy { rows, p: w1 },
        banker: BankerStrategy {
            moves,
            mix_point,
            q,
        },
        value: doc.value.to_rational()?,
        kernel: None,
        certificate: None,
        unique_claimed: false,
    };
    Ok((model, solution))
}

/// Strict parse of a pure move-table document into a total table.
pub fn parse_move_table(bytes: &[u8]) -> Result<MoveTable, DocError> {
    let doc: MoveTableDoc = serde_json::from_slice(bytes)
        .map_err(|e| err(format!("malformed move table: {e}")))?;
    let mut by_hand: BTreeMap<DecisionPoint, Move> = BTreeMap::new();
    let mut by_total: BTreeMap<TotalPoint, Move> = BTreeMap::new();
    for entry in &doc.points {
        let mv = parse_move(&entry.mv)?;
        match entry.point.to_point()? {
            Point::Hand(dp) => {
                if by_hand.insert(dp, mv).is_some() {
                    return Err(err(format!("duplicate point {dp}")));
                }
            }
            Point::Total(tp) => {
                if by_total.insert(tp, mv).is_some() {
                    return Err(err(format!("duplicate point {tp}")));
                }
            }
        }
    }
    match (by_hand.is_empty(), by_total.is_empty()) {
        (false, true) => {
            MoveTable::by_hand(by_hand).map_err(|e| err(e.to_string()))
        }
        (true, false) => {
            MoveTable::by_total(by_total).map_err(|e| err(e.to_string()))
        }
        _ => Err(err(
            "move table must be all hand-level or all total-level points",
        )),
    }
}

/// Serialize a pure move table.
pub fn move_table_doc(table: &MoveTable) -> MoveTableDoc {
    let points = match table {
        MoveTable::ByHand(map) => map
            .iter()
            .map(|(dp, mv)| BankerMoveDoc {
                point: PointDoc::from_point(&Point::Hand(*dp)),
                mv: move_str(*mv).into(),
            })
            .collect(),
        MoveTable::ByTotal(map) => map
            .iter()
            .map(|(tp, mv)| BankerMoveDoc {
                point: PointDoc::from_point(&Point::Total(*tp)),
                mv: move_str(*mv).into(),
            })
            .collect(),
    };
    MoveTableDoc { points }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_round_trip() {
        let r = Rational::new(
            BigInt::from(-73_356_216_203_119i64),
            BigInt::from(5_712_649_844_821_920i64),
        );
        let j = RatJson::from_rational(&r);
        assert_eq!(j.num, "-73356216203119");
        assert_eq!(j.den, "5712649844821920");
        assert_eq!(j.to_rational().unwrap(), r);
        assert_eq!(j.slash(), "-73356216203119/5712649844821920");
    }

    #[test]
    fn rational_rejects_bad_strings() {
        for (num, den) in [
            ("1.5", "2"),
            ("1", "0"),
            ("1", "-3"),
            ("", "2"),
            ("0x10", "2"),
        ] {
            let j = RatJson {
                num: num.into(),
                den: den.into(),
            };
            assert!(j.to_rational().is_err(), "{num}/{den}");
        }
    }

    #[test]
    fn third_doc_forms() {
        assert_eq!(
            ThirdDoc::Card(4).to_obs().unwrap(),
            ThirdCard::Card(CardValue::new(4).unwrap())
        );
        assert_eq!(
            ThirdDoc::Word("stand".into()).to_obs().unwrap(),
            ThirdCard::Stand
        );
        assert!(ThirdDoc::Card(10).to_obs().is_err());
        assert!(ThirdDoc::Word("fold".into()).to_obs().is_err());
    }

    #[test]
    fn model_deck_rules() {
        assert!(Model::B3.deal(Some(6)).is_ok());
        assert!(Model::B3.deal(None).is_err());
        assert!(Model::B3.deal(Some(0)).is_err());
        assert!(Model::A1.deal(None).is_ok());
        assert!(Model::A1.deal(Some(6)).is_err());
    }
}
