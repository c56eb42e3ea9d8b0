//! Dense embedding matrix and the word2vec-style text file format.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{GpaError, Result};
use crate::graph::Graph;

/// Row-major |V| × d matrix of node embeddings.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingMatrix {
    data: Vec<f64>,
    rows: usize,
    d: usize,
}

impl EmbeddingMatrix {
    pub fn zeros(rows: usize, d: usize) -> Self {
        EmbeddingMatrix { data: vec![0.0; rows * d], rows, d }
    }

    /// Random initialization uniform in [-0.5/d, 0.5/d], the word2vec
    /// convention.
    pub fn random(rows: usize, d: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let half = 0.5 / d as f64;
        let data = (0..rows * d).map(|_| rng.gen_range(-half..half)).collect();
        EmbeddingMatrix { data, rows, d }
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        let d = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != d) {
            return Err(GpaError::shape("ragged rows in embedding matrix"));
        }
        Ok(EmbeddingMatrix { data: rows.into_iter().flatten().collect(), rows: n, d })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn row(&self, v: usize) -> &[f64] {
        &self.data[v * self.d..(v + 1) * self.d]
    }

    pub fn row_mut(&mut self, v: usize) -> &mut [f64] {
        &mut self.data[v * self.d..(v + 1) * self.d]
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn all_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }

    /// Write in the word2vec text convention: header `node_count d`, then
    /// one line per node with its name and coordinates.
    pub fn write(&self, g: Option<&Graph>, path: &Path) -> Result<()> {
        let mut out = BufWriter::new(File::create(path)?);
        writeln!(out, "{} {}", self.rows, self.d)?;
        for v in 0..self.rows {
            match g {
                Some(g) => write!(out, "{}", g.name(v))?,
                None => write!(out, "{v}")?,
            }
            for x in self.row(v) {
                write!(out, " {x}")?;
            }
            writeln!(out)?;
        }
        Ok(())
    }

    /// Read an embedding file written by [`EmbeddingMatrix::write`]. Rows
    /// are matched back to dense ids through the graph's name map when a
    /// graph is given, otherwise names must be dense decimal ids.
    pub fn read(g: Option<&Graph>, path: &Path) -> Result<Self> {
        let reader = BufReader::new(File::open(path)?);
        let mut lines = reader.lines();
        let header = lines.next().ok_or_else(|| GpaError::Parse {
            line: 1,
            msg: "empty embedding file".into(),
        })??;
        let mut it = header.split_whitespace();
        let parse = |tok: Option<&str>, what: &str| -> Result<usize> {
            tok.and_then(|t| t.parse().ok()).ok_or_else(|| GpaError::Parse {
                line: 1,
                msg: format!("bad header field {what}"),
            })
        };
        let rows = parse(it.next(), "node_count")?;
        let d = parse(it.next(), "d")?;
        let name_to_id: Option<std::collections::HashMap<&str, usize>> =
            g.map(|g| (0..g.node_count()).map(|v| (g.name(v), v)).collect());
        let mut m = EmbeddingMatrix::zeros(rows, d);
        for (i, line) in lines.enumerate() {
            let line = line?;
            let mut toks = line.split_whitespace();
            let name = toks.next().ok_or_else(|| GpaError::Parse {
                line: i + 2,
                msg: "missing node id".into(),
            })?;
            let v = match &name_to_id {
                Some(map) => *map.get(name).ok_or_else(|| GpaError::Parse {
                    line: i + 2,
                    msg: format!("unknown node {name:?}"),
                })?,
                None => name.parse().map_err(|_| GpaError::Parse {
                    line: i + 2,
                    msg: format!("non-numeric node id {name:?}"),
                })?,
            };
            if v >= rows {
                return Err(GpaError::Parse { line: i + 2, msg: format!("row {v} out of range") });
            }
            for (j, tok) in toks.enumerate() {
                if j >= d {
                    return Err(GpaError::Parse { line: i + 2, msg: "too many coordinates".into() });
                }
                m.row_mut(v)[j] = tok.parse().map_err(|e| GpaError::Parse {
                    line: i + 2,
                    msg: format!("bad coordinate {tok:?}: {e}"),
                })?;
            }
        }
        Ok(m)
    }
}

/// Cosine similarity; defined as 0 when either vector has zero norm.
pub fn cosine(a: &[f64], b: &[f64]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb: f64 = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    if na == 0.0 || nb == 0.0 {
        0.0
    } else {
        dot / (na * nb)
    }
}

pub fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}
