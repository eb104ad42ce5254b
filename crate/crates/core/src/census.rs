//! Classification counts over lists of connected graphs.
//!
//! Each graph is classified independently and the per-graph records are
//! summed into a [`CensusRow`]. Addition of rows is commutative, so the
//! result does not depend on chunking, worker count or input order.

use std::fmt::Write as _;
use std::fs;
use std::io::BufRead;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;
use crate::graphio::{read_graph6, write_graph6, Graph6Error, StreamError};
use crate::ratmath::Rational;
use crate::signability::{classify_matrix, SignClass};

/// Orders from which a run must be explicitly enabled.
pub const LARGE_ORDER: usize = 9;
pub const DEFAULT_CHECKPOINT_EVERY: u64 = 1_000_000;
const CHUNK: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GraphRecord {
    pub graph6: String,
    pub det: Rational,
    pub rank: usize,
    pub invertible: bool,
    /// `det = ±1`.
    pub integral: bool,
    /// Class of `A⁻¹`, present for integrally invertible graphs.
    pub int_class: Option<SignClass>,
    /// Class of `A†`.
    pub pseudo_class: SignClass,
    pub bipartite: bool,
}

pub fn classify_one(g: &Graph) -> GraphRecord {
    let c = classify_matrix(&g.adjacency()).expect("adjacency matrices are symmetric");
    let integral = c.det.abs().is_one();
    GraphRecord {
        graph6: write_graph6(g),
        det: c.det,
        rank: c.rank,
        invertible: c.invertible,
        integral,
        int_class: integral.then_some(c.report.class),
        pseudo_class: c.report.class,
        bipartite: g.is_bipartite(),
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusRow {
    pub m: usize,
    pub total: u64,
    pub invertible: u64,
    pub integrally_invertible: u64,
    pub int_pos_only: u64,
    pub int_neg_only: u64,
    pub int_both: u64,
    pub pseudo_pos_only: u64,
    pub pseudo_neg_only: u64,
    pub pseudo_both: u64,
}

impl CensusRow {
    pub fn empty(m: usize) -> Self {
        CensusRow {
            m,
            ..Default::default()
        }
    }

    pub fn add(&mut self, r: &GraphRecord) {
        self.total += 1;
        self.invertible += u64::from(r.invertible);
        self.integrally_invertible += u64::from(r.integral);
        match r.int_class {
            Some(SignClass::PositiveOnly) => self.int_pos_only += 1,
            Some(SignClass::NegativeOnly) => self.int_neg_only += 1,
            Some(SignClass::Both) => self.int_both += 1,
            Some(SignClass::Neither) | None => {}
        }
        match r.pseudo_class {
            SignClass::PositiveOnly => self.pseudo_pos_only += 1,
            SignClass::NegativeOnly => self.pseudo_neg_only += 1,
            SignClass::Both => self.pseudo_both += 1,
            SignClass::Neither => {}
        }
    }

    /// Sums two partial rows for the same `m`.
    pub fn merge(mut self, other: &CensusRow) -> CensusRow {
        assert_eq!(self.m, other.m, "rows for different orders");
        self.total += other.total;
        self.invertible += other.invertible;
        self.integrally_invertible += other.integrally_invertible;
        self.int_pos_only += other.int_pos_only;
        self.int_neg_only += other.int_neg_only;
        self.int_both += other.int_both;
        self.pseudo_pos_only += other.pseudo_pos_only;
        self.pseudo_neg_only += other.pseudo_neg_only;
        self.pseudo_both += other.pseudo_both;
        self
    }
}

#[derive(Debug, Error)]
pub enum CensusError {
    #[error("line {line}: {source}")]
    Parse { line: usize, source: Graph6Error },
    #[error("read error: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: expected a graph on {expected} vertices, found {found}")]
    WrongOrder { line: usize, expected: usize, found: usize },
    #[error("line {line}: graph is not connected")]
    Disconnected { line: usize },
    #[error("line {line}: graph classified Both is not bipartite")]
    BothNotBipartite { line: usize },
    #[error("order {0} needs the large-run flag")]
    LargeOrder(usize),
    #[error("checkpoint {path}: {reason}")]
    Checkpoint { path: PathBuf, reason: String },
}

impl CensusError {
    pub fn line(&self) -> Option<usize> {
        match self {
            CensusError::Parse { line, .. }
            | CensusError::WrongOrder { line, .. }
            | CensusError::Disconnected { line }
            | CensusError::BothNotBipartite { line } => Some(*line),
            _ => None,
        }
    }
}

impl From<StreamError> for CensusError {
    fn from(e: StreamError) -> Self {
        match e {
            StreamError::Parse { line, source } => CensusError::Parse { line, source },
            StreamError::Io(e) => CensusError::Io(e),
        }
    }
}

#[derive(Debug, Clone)]
pub struct CensusOptions {
    /// Worker threads; `None` uses the global pool.
    pub jobs: Option<usize>,
    pub verify_connected: bool,
    /// Fail if a graph classified Both is not bipartite.
    pub assert_both_bipartite: bool,
    /// Required for `m >= 9`.
    pub allow_large: bool,
    /// Progress file, written every `checkpoint_every` graphs and read back
    /// on start to resume.
    pub checkpoint: Option<PathBuf>,
    pub checkpoint_every: u64,
}

impl Default for CensusOptions {
    fn default() -> Self {
        CensusOptions {
            jobs: None,
            verify_connected: false,
            assert_both_bipartite: false,
            allow_large: false,
            checkpoint: None,
            checkpoint_every: DEFAULT_CHECKPOINT_EVERY,
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct Progress {
    /// Input lines consumed, blank lines included.
    lines: usize,
    row: CensusRow,
}

fn checkpoint_error(path: &Path, reason: impl ToString) -> CensusError {
    CensusError::Checkpoint {
        path: path.to_path_buf(),
        reason: reason.to_string(),
    }
}

fn load_progress(path: &Path, m: usize) -> Result<Option<Progress>, CensusError> {
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
        Err(e) => return Err(checkpoint_error(path, e)),
    };
    let p: Progress = serde_json::from_str(&text).map_err(|e| checkpoint_error(path, e))?;
    if p.row.m != m {
        return Err(checkpoint_error(path, format!("recorded order {} differs from {m}", p.row.m)));
    }
    Ok(Some(p))
}

fn save_progress(path: &Path, p: &Progress) -> Result<(), CensusError> {
    let tmp = path.with_extension("tmp");
    let text = serde_json::to_string_pretty(p).expect("progress serializes");
    fs::write(&tmp, text).map_err(|e| checkpoint_error(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| checkpoint_error(path, e))
}

fn check_and_classify(
    line: usize,
    g: &Graph,
    m: usize,
    opts: &CensusOptions,
) -> Result<GraphRecord, CensusError> {
    if g.order() != m {
        return Err(CensusError::WrongOrder {
            line,
            expected: m,
            found: g.order(),
        });
    }
    if opts.verify_connected && !g.is_connected() {
        return Err(CensusError::Disconnected { line });
    }
    let r = classify_one(g);
    if opts.assert_both_bipartite && r.pseudo_class == SignClass::Both && !r.bipartite {
        return Err(CensusError::BothNotBipartite { line });
    }
    Ok(r)
}

fn classify_chunk(
    chunk: &[(usize, Graph)],
    m: usize,
    opts: &CensusOptions,
    pool: Option<&rayon::ThreadPool>,
) -> Result<CensusRow, CensusError> {
    let work = || -> Vec<Result<GraphRecord, CensusError>> {
        chunk
            .par_iter()
            .map(|(line, g)| check_and_classify(*line, g, m, opts))
            .collect()
    };
    let results = match pool {
        Some(pool) => pool.install(work),
        None => work(),
    };
    let mut row = CensusRow::empty(m);
    for r in results {
        row.add(&r?);
    }
    Ok(row)
}

/// Classifies every graph6 line of `reader` (graphs on `m` vertices) and
/// returns the counts. The first failing line aborts the run.
pub fn run_census<R: BufRead>(reader: R, m: usize, opts: &CensusOptions) -> Result<CensusRow, CensusError> {
    if m >= LARGE_ORDER && !opts.allow_large {
        return Err(CensusError::LargeOrder(m));
    }
    let pool = opts.jobs.map(|jobs| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build()
            .expect("thread pool")
    });
    let resumed = match &opts.checkpoint {
        Some(path) => load_progress(path, m)?,
        None => None,
    };
    let (skip, mut row) = resumed.map_or((0, CensusRow::empty(m)), |p| (p.lines, p.row));
    let mut since_save = 0u64;
    let mut lines = skip;
    let mut chunk: Vec<(usize, Graph)> = Vec::with_capacity(CHUNK);
    let mut records = read_graph6(reader).filter(|r| match r {
        Ok(rec) => rec.line_no > skip,
        Err(StreamError::Parse { line, .. }) => *line > skip,
        Err(StreamError::Io(_)) => true,
    });
    loop {
        let next = records.next();
        let done = next.is_none();
        if let Some(rec) = next {
            let rec = rec?;
            lines = rec.line_no;
            chunk.push((rec.line_no, rec.graph));
        }
        let due = opts.checkpoint.is_some() && since_save + chunk.len() as u64 >= opts.checkpoint_every;
        if chunk.len() == CHUNK || due || (done && !chunk.is_empty()) {
            row = row.merge(&classify_chunk(&chunk, m, opts, pool.as_ref())?);
            since_save += chunk.len() as u64;
            chunk.clear();
            if let Some(path) = &opts.checkpoint {
                if since_save >= opts.checkpoint_every || done {
                    save_progress(path, &Progress { lines, row })?;
                    since_save = 0;
                }
            }
        }
        if done {
            return Ok(row);
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TableFormat {
    #[default]
    Text,
    Json,
}

const TABLE_ROWS: [(&str, fn(&CensusRow) -> u64); 9] = [
    ("all conn. graphs", |r| r.total),
    ("det(A) != 0", |r| r.invertible),
    ("int. invertible", |r| r.integrally_invertible),
    ("int. +signable", |r| r.int_pos_only),
    ("int. -signable", |r| r.int_neg_only),
    ("int. +/-signable", |r| r.int_both),
    ("pseudo +signable", |r| r.pseudo_pos_only),
    ("pseudo -signable", |r| r.pseudo_neg_only),
    ("pseudo +/-signable", |r| r.pseudo_both),
];

/// One column per row of `rows`, in the given order.
pub fn render_table(rows: &[CensusRow], format: TableFormat) -> String {
    match format {
        TableFormat::Json => {
            let mut s = serde_json::to_string_pretty(rows).expect("rows serialize");
            s.push('\n');
            s
        }
        TableFormat::Text => {
            let label_width = TABLE_ROWS.iter().map(|(l, _)| l.len()).max().unwrap_or(0);
            let width = rows
                .iter()
                .map(|r| {
                    TABLE_ROWS
                        .iter()
                        .map(|(_, f)| f(r).to_string().len())
                        .chain([format!("m={}", r.m).len()])
                        .max()
                        .unwrap_or(0)
                })
                .collect::<Vec<_>>();
            let mut out = format!("{:label_width$}", "");
            for (r, w) in rows.iter().zip(&width) {
                let _ = write!(out, "  {:>w$}", format!("m={}", r.m));
            }
            out.push('\n');
            for (label, f) in TABLE_ROWS {
                let _ = write!(out, "{label:label_width$}");
                for (r, w) in rows.iter().zip(&width) {
                    let _ = write!(out, "  {:>w$}", f(r));
                }
                out.push('\n');
            }
            out
        }
    }
}
