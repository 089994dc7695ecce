//! Line-oriented instance files.
//!
//! ```text
//! # comment
//! n m K s t
//! u v c        (m lines, 1-based tail, head, level)
//! ```

use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::{Arc, Dag};
use crate::ordinal::OrdinalScale;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> ParseError {
    ParseError { line, message: message.into() }
}

fn fields<const N: usize>(line: usize, text: &str) -> Result<[u64; N], ParseError> {
    let toks: Vec<&str> = text.split_whitespace().collect();
    if toks.len() != N {
        return Err(err(line, format!("expected {N} fields, found {}", toks.len())));
    }
    let mut out = [0u64; N];
    for (slot, tok) in out.iter_mut().zip(toks) {
        *slot = tok.parse().map_err(|_| err(line, format!("not a nonnegative integer: {tok:?}")))?;
    }
    Ok(out)
}

fn one_based(line: usize, id: u64, n: u64, what: &str) -> Result<usize, ParseError> {
    if id == 0 || id > n {
        return Err(err(line, format!("{what} {id} outside 1..={n}")));
    }
    Ok(id as usize - 1)
}

pub fn read_instance(text: &str) -> Result<Dag, ParseError> {
    let mut lines =
        text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (hline, header) = lines.next().ok_or_else(|| err(1, "missing header line `n m K s t`"))?;
    let [n, m, k, s, t] = fields::<5>(hline, header)?;
    if n == 0 {
        return Err(err(hline, "node count must be positive"));
    }
    let scale = u32::try_from(k)
        .ok()
        .and_then(|k| OrdinalScale::new(k).ok())
        .ok_or_else(|| err(hline, format!("invalid number of levels {k}")))?;
    let source = one_based(hline, s, n, "source")?;
    let sink = one_based(hline, t, n, "sink")?;

    let mut arcs = Vec::with_capacity(m as usize);
    let mut last_line = hline;
    for (lno, text) in lines {
        last_line = lno;
        if arcs.len() as u64 == m {
            return Err(err(lno, format!("more than the declared {m} arcs")));
        }
        let [u, v, c] = fields::<3>(lno, text)?;
        let tail = one_based(lno, u, n, "tail")?;
        let head = one_based(lno, v, n, "head")?;
        let level = u32::try_from(c).ok().filter(|&c| scale.contains(c));
        let level = level.ok_or_else(|| err(lno, format!("level {c} outside 1..={k}")))?;
        arcs.push(Arc::new(tail, head, level));
    }
    if (arcs.len() as u64) < m {
        return Err(err(last_line, format!("declared {m} arcs, found {}", arcs.len())));
    }
    Dag::new(n as usize, scale, source, sink, arcs).map_err(|e| err(hline, e.to_string()))
}

/// Arcs are written sorted by `(tail, head)`.
pub fn write_instance(g: &Dag) -> String {
    let mut out = String::new();
    writeln!(out, "{} {} {} {} {}", g.node_count(), g.arc_count(), g.scale(), g.source().0 + 1, g.sink().0 + 1)
        .unwrap();
    for arc in g.arcs() {
        writeln!(out, "{} {} {}", arc.tail.0 + 1, arc.head.0 + 1, arc.level).unwrap();
    }
    out
}
