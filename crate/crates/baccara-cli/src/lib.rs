//! Command implementations for the baccara solver CLI: solve, classify,
//! verify, enumerate, and simulate, each rendering to JSON, CSV, or
//! markdown. The library surface exists so the parsers and renderers can
//! be exercised directly by tests and fuzz targets.

pub mod doc;
pub mod render;

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use baccara::cards::PlayerMask;
use baccara::dominance::{classify, contested_points};
use baccara::error::Error;
use baccara::oracle;
use baccara::payoff::PayoffBlocks;
use baccara::solver::{self, certify};

pub use doc::{
    parse_move_table, parse_solution_doc, solution_from_doc, DocError, Model,
};

/// Exit codes: 0 success, 2 usage, 3 verification failure.
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;

const DEFAULT_MAX_DECKS: u32 = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Markdown,
}

impl FromStr for Format {
    type Err = DocError;

    fn from_str(s: &str) -> Result<Self, DocError> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "markdown" | "md" => Ok(Format::Markdown),
            _ => Err(DocError(format!(
                "unknown format '{s}' (expected json, csv or markdown)"
            ))),
        }
    }
}

#[derive(Debug)]
pub struct CmdError {
    pub code: i32,
    pub message: String,
}

impl fmt::Display for CmdError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.message)
    }
}

impl std::error::Error for CmdError {}

fn usage(msg: impl Into<String>) -> CmdError {
    CmdError {
        code: EXIT_USAGE,
        message: msg.into(),
    }
}

impl From<DocError> for CmdError {
    fn from(e: DocError) -> CmdError {
        usage(e.0)
    }
}

impl From<Error> for CmdError {
    fn from(e: Error) -> CmdError {
        let code = match e {
            Error::CertificateFailed { .. } => EXIT_VERIFY,
            _ => EXIT_USAGE,
        };
        CmdError {
            code,
            message: e.to_string(),
        }
    }
}

/// Command output: what to print on stdout and the process exit code.
#[derive(Debug)]
pub struct CmdOutput {
    pub stdout: String,
    pub code: i32,
}

fn ok(stdout: String) -> CmdOutput {
    CmdOutput { stdout, code: 0 }
}

/// Deck cap, overridable through BACCARA_MAX_DECKS.
pub fn max_decks() -> u32 {
    std::env::var("BACCARA_MAX_DECKS")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_MAX_DECKS)
}

fn checked_deal(
    model: Model,
    decks: Option<u32>,
) -> Result<baccara::cards::DealModel, CmdError> {
    let deal = model.deal(decks)?;
    if let baccara::cards::DealModel::Shoe(d) = deal {
        let cap = max_decks();
        if d > cap {
            return Err(usage(format!(
                "--decks {d} exceeds the cap of {cap} \
                 (override with BACCARA_MAX_DECKS)"
            )));
        }
    }
    Ok(deal)
}

fn to_json<T: serde::Serialize>(value: &T) -> Result<String, CmdError> {
    serde_json::to_string_pretty(value)
        .map(|mut s| {
            s.push('\n');
            s
        })
        .map_err(|e| usage(format!("serialization failed: {e}")))
}

pub fn cmd_solve(
    model: Model,
    decks: Option<u32>,
    format: Format,
) -> Result<CmdOutput, CmdError> {
    let deal = checked_deal(model, decks)?;
    let solved = solver::solve_model_full(deal, model.info())?;
    let out = match format {
        Format::Json => {
            let contested = contested_points(&solved.table);
            let doc = doc::solution_doc(
                model,
                &solved.solution,
                &contested,
                solved.solution.certificate.as_ref(),
            );
            to_json(&doc)?
        }
        Format::Markdown => render::solution_markdown(model, &solved),
        Format::Csv => render::solution_csv(&solved),
    };
    Ok(ok(out))
}

pub fn cmd_classify(
    model: Model,
    decks: Option<u32>,
    format: Format,
) -> Result<CmdOutput, CmdError> {
    let deal = checked_deal(model, decks)?;
    let blocks = PayoffBlocks::for_model(deal, model.info())?;
    let table = classify(&blocks)?;
    let out = match format {
        Format::Json => {
            let doc = doc::ClassificationDoc {
                model: model.to_string(),
                decks,
                contested: table.contested_count(),
                points: table
                    .points()
                    .iter()
                    .zip(table.marks())
                    .map(|(pt, mark)| doc::ClassifiedPointDoc {
                        point: doc::PointDoc::from_point(pt),
                        mark: match mark {
                            baccara::dominance::Mark::Draw => "D".into(),
                            baccara::dominance::Mark::Stand => "S".into(),
                            baccara::dominance::Mark::Contested => "*".into(),
                        },
                    })
                    .collect(),
            };
            to_json(&doc)?
        }
        Format::Markdown => render::classification_markdown(model, &table),
        Format::Csv => render::classification_csv(&table),
    };
    Ok(ok(out))
}

pub fn cmd_verify(
    model: Model,
    decks: Option<u32>,
    solution_file: Option<&Path>,
    format: Format,
) -> Result<CmdOutput, CmdError> {
    let deal = checked_deal(model, decks)?;
    let (solution, blocks, table) = match solution_file {
        None => {
            let solved = solver::solve_model_full(deal, model.info())?;
            (solved.solution, solved.blocks, solved.table)
        }
        Some(path) => {
            let bytes = std::fs::read(path).map_err(|e| {
                usage(format!("cannot read {}: {e}", path.display()))
            })?;
            let parsed = parse_solution_doc(&bytes)?;
            let (file_model, solution) = solution_from_doc(&parsed)?;
            if file_model != model || solution.deal != deal {
                return Err(usage(format!(
                    "solution file is for model {file_model} \
                     {:?}, not {model} {:?}",
                    solution.deal.decks(),
                    deal.decks()
                )));
            }
            let blocks = PayoffBlocks::for_model(deal, model.info())?;
            let table = classify(&blocks)?;
            (solution, blocks, table)
        }
    };
    let report = certify(&solution, &blocks, &table)?;
    let saddle = oracle::saddle_check(&blocks, &solution)?;
    let passed = report.ok() && saddle;
    let out = match format {
        Format::Json => {
            #[derive(serde::Serialize)]
            struct VerifyDoc {
                model: String,
                decks: Option<u32>,
                certificate: doc::CertificateDoc,
                saddle_check: bool,
                passed: bool,
            }
            to_json(&VerifyDoc {
                model: model.to_string(),
                decks,
                certificate: doc::certificate_doc(&report),
                saddle_check: saddle,
                passed,
            })?
        }
        Format::Markdown => format!(
            "# Verification: model {model}{}\n\n\
             Player side {} (worst margin {}).\n\
             Banker side {} (worst margin {}).\n\
             Independent saddle check: {}.\n\n\
             {}\n",
            decks.map(|d| format!(", {d} decks")).unwrap_or_default(),
            if report.player_ok { "ok" } else { "FAILED" },
            render::rational_slash(&report.player_worst_margin),
            if report.banker_ok { "ok" } else { "FAILED" },
            render::rational_slash(&report.banker_worst_margin),
            if saddle { "pass" } else { "FAIL" },
            if passed { "VERIFIED" } else { "NOT OPTIMAL" },
        ),
        Format::Csv => format!(
            "player_ok,player_worst_margin,banker_ok,banker_worst_margin,\
             saddle_check,passed\n{},{},{},{},{},{}\n",
            report.player_ok,
            render::rational_slash(&report.player_worst_margin),
            report.banker_ok,
            render::rational_slash(&report.banker_worst_margin),
            saddle,
            passed,
        ),
    };
    Ok(CmdOutput {
        stdout: out,
        code: if passed { 0 } else { EXIT_VERIFY },
    })
}

pub fn cmd_enumerate(
    model: Model,
    format: Format,
) -> Result<CmdOutput, CmdError> {
    if !matches!(model, Model::A2 | Model::A3) {
        return Err(usage(format!(
            "enumerate applies to models A2 and A3, not {model}"
        )));
    }
    let eq = solver::enumerate_extreme_equilibria(model.info())?;
    let out = match format {
        Format::Json => {
            let doc = doc::EnumerationDoc {
                model: model.to_string(),
                player_pairs: eq
                    .player_pairs
                    .iter()
                    .map(|p| doc::MixPairDoc {
                        lo: p.lo,
                        hi: p.hi,
                        weight: doc::RatJson::from_rational(&p.weight),
                    })
                    .collect(),
                banker_pairs: eq
                    .banker_pairs
                    .iter()
                    .map(|p| doc::MixPairDoc {
                        lo: p.lo,
                        hi: p.hi,
                        weight: doc::RatJson::from_rational(&p.weight),
                    })
                    .collect(),
                count: eq.pair_count,
            };
            to_json(&doc)?
        }
        Format::Markdown => render::enumeration_markdown(model, &eq),
        Format::Csv => render::enumeration_csv(&eq),
    };
    Ok(ok(out))
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_simulate(
    model: Model,
    decks: Option<u32>,
    mask: Option<u8>,
    table_file: Option<&Path>,
    trials: u64,
    seed: u64,
    format: Format,
) -> Result<CmdOutput, CmdError> {
    let deal = checked_deal(model, decks)?;
    let report = match table_file {
        Some(path) => {
            let bytes = std::fs::read(path).map_err(|e| {
                usage(format!("cannot read {}: {e}", path.display()))
            })?;
            let table = parse_move_table(&bytes)?;
            let mask = PlayerMask::new(mask.unwrap_or(31))
                .map_err(|e| usage(e.to_string()))?;
            oracle::simulate_payoff(mask, &table, deal, trials, seed)?
        }
        None => {
            if mask.is_some() {
                return Err(usage(
                    "--mask only applies with --table-file; without one, \
                     the solved optimal mixtures are simulated",
                ));
            }
            let solution = solver::solve_model(deal, model.info())?;
            oracle::simulate_solution(&solution, trials, seed)?
        }
    };
    let out = match format {
        Format::Json => to_json(&doc::SimulationDoc::from_report(&report))?,
        Format::Markdown => render::simulation_markdown(&report),
        Format::Csv => render::simulation_csv(&report),
    };
    Ok(ok(out))
}
