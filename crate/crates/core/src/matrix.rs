//! Generator matrix of the balanced-tree code, built by recursive block
//! composition:
//!
//! ```text
//! G = | G_l   0  |      G̃_r = G_r            (N even)
//!     | G̃_r  G_r |      G̃_r = (G_r | 0)      (N odd, one zero column appended)
//! ```

use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorMatrix {
    n: usize,
    rows: Vec<Vec<u8>>,
}

impl GeneratorMatrix {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidLength("code length must be at least 1".into()));
        }
        Ok(Self { n, rows: build(n) })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn rows(&self) -> &[Vec<u8>] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &[u8] {
        &self.rows[i]
    }

    /// `w · G` over GF(2).
    pub fn multiply(&self, w: &[u8]) -> Result<Vec<u8>> {
        if w.len() != self.n {
            return Err(Error::InvalidInput(format!("expected {} bits, got {}", self.n, w.len())));
        }
        let mut out = vec![0u8; self.n];
        for (row, _) in self.rows.iter().zip(w).filter(|(_, &b)| b & 1 == 1) {
            for (o, r) in out.iter_mut().zip(row) {
                *o ^= r;
            }
        }
        Ok(out)
    }

    /// One row per line of `0`/`1` characters, row 0 first.
    pub fn to_text(&self) -> String {
        self.to_string()
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let rows: Vec<Vec<u8>> = text
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(|l| crate::bits::parse_binary(l.trim()))
            .collect::<Result<_>>()?;
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(Error::Format("generator matrix must be square and non-empty".into()));
        }
        Ok(Self { n, rows })
    }
}

impl fmt::Display for GeneratorMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.rows {
            writeln!(f, "{}", crate::bits::format_binary(row))?;
        }
        Ok(())
    }
}

fn build(n: usize) -> Vec<Vec<u8>> {
    if n == 1 {
        return vec![vec![1]];
    }
    let nl = n.div_ceil(2);
    let nr = n / 2;
    let gl = build(nl);
    let gr = if nr == nl { gl.clone() } else { build(nr) };

    let mut rows = Vec::with_capacity(n);
    for row in gl {
        let mut r = row;
        r.resize(n, 0);
        rows.push(r);
    }
    for row in &gr {
        let mut r = Vec::with_capacity(n);
        r.extend_from_slice(row);
        if nl != nr {
            r.push(0);
        }
        r.extend_from_slice(row);
        rows.push(r);
    }
    rows
}
