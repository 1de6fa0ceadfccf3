//! Newline-delimited JSON log of every fitness evaluation.
//!
//! One line per evaluated individual:
//!
//! ```text
//! {"gen":0,"ind":3,"games":[{"seed":..,"score":..,"max_tile":..,"moves":..}],"stats":{..}}
//! ```
//!
//! Integers are exact. The `avg` fields are written with 17 significant
//! digits so they parse back to the identical double. An elite whose fitness
//! was carried over without new games is logged with `"cached":true` and the
//! games of its original evaluation.

use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize, Serializer};
use serde_json::value::RawValue;
use thiserror::Error;

use super::FitnessStats;
use crate::engine::GameResult;

#[derive(Debug, Error)]
pub enum ProtocolError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
}

pub(crate) fn serialize_avg<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
    if !v.is_finite() {
        return s.serialize_f64(*v);
    }
    let raw = RawValue::from_string(format!("{v:.16e}")).map_err(serde::ser::Error::custom)?;
    raw.serialize(s)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameRecord {
    pub seed: u64,
    pub score: u64,
    pub max_tile: u32,
    pub moves: u32,
}

impl From<&GameResult> for GameRecord {
    fn from(g: &GameResult) -> Self {
        GameRecord {
            seed: g.seed,
            score: g.total_score,
            max_tile: g.highest_tile,
            moves: g.moves,
        }
    }
}

impl From<&GameRecord> for GameResult {
    fn from(g: &GameRecord) -> Self {
        GameResult {
            seed: g.seed,
            total_score: g.score,
            highest_tile: g.max_tile,
            moves: g.moves,
            reached_2048: g.max_tile >= 2048,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProtocolRecord {
    pub gen: u32,
    pub ind: u32,
    pub games: Vec<GameRecord>,
    pub stats: FitnessStats,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub cached: bool,
}

impl ProtocolRecord {
    pub fn new(gen: u32, ind: u32, games: &[GameResult]) -> Self {
        ProtocolRecord {
            gen,
            ind,
            games: games.iter().map(GameRecord::from).collect(),
            stats: FitnessStats::from_games(games),
            cached: false,
        }
    }

    pub fn game_results(&self) -> Vec<GameResult> {
        self.games.iter().map(GameResult::from).collect()
    }

    /// Stats recomputed from the logged games.
    pub fn recomputed_stats(&self) -> FitnessStats {
        FitnessStats::from_games(&self.game_results())
    }
}

/// Appends records to a protocol file, one JSON object per line.
pub struct ProtocolWriter<W: Write = BufWriter<File>> {
    out: W,
    records: usize,
}

impl ProtocolWriter<BufWriter<File>> {
    pub fn create(path: &Path) -> io::Result<Self> {
        Ok(Self::new(BufWriter::new(File::create(path)?)))
    }
}

impl<W: Write> ProtocolWriter<W> {
    pub fn new(out: W) -> Self {
        Self { out, records: 0 }
    }

    pub fn write_record(&mut self, record: &ProtocolRecord) -> io::Result<()> {
        serde_json::to_writer(&mut self.out, record)?;
        self.out.write_all(b"\n")?;
        self.records += 1;
        Ok(())
    }

    /// Logs one evaluation of individual `ind` in generation `gen`.
    pub fn write_protocol(&mut self, gen: u32, ind: u32, games: &[GameResult]) -> io::Result<()> {
        self.write_record(&ProtocolRecord::new(gen, ind, games))
    }

    pub fn records(&self) -> usize {
        self.records
    }

    pub fn finish(mut self) -> io::Result<W> {
        self.out.flush()?;
        Ok(self.out)
    }
}

pub fn parse_protocol(reader: impl BufRead) -> Result<Vec<ProtocolRecord>, ProtocolError> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let record = serde_json::from_str(&line).map_err(|e| ProtocolError::Malformed {
            line: i + 1,
            message: e.to_string(),
        })?;
        out.push(record);
    }
    Ok(out)
}

pub fn read_protocol(path: &Path) -> Result<Vec<ProtocolRecord>, ProtocolError> {
    parse_protocol(BufReader::new(File::open(path)?))
}
