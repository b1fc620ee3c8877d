//! graph6 encoding.
//!
//! The first byte is `n + 63`. The upper triangle of the adjacency matrix is
//! read column by column, `x(0,1), x(0,2), x(1,2), x(0,3), ...`, packed
//! big-endian into 6-bit groups padded with zeros, and each group is written
//! as its value plus 63.
//!
//! Only the short form (`n <= 62`) is accepted by [`decode`]. [`encode`] uses
//! the long form for `n` of 63 or 64 so that every in-memory graph still has
//! a printable code.

use crate::error::{Error, Result};
use crate::graph::Graph;

pub const HEADER: &str = ">>graph6<<";

/// Largest vertex count representable in the short form.
pub const SHORT_FORM_MAX: usize = 62;

fn size_prefix(n: usize, out: &mut Vec<u8>) {
    if n <= SHORT_FORM_MAX {
        out.push(n as u8 + 63);
    } else {
        out.push(126);
        out.push(((n >> 12) & 63) as u8 + 63);
        out.push(((n >> 6) & 63) as u8 + 63);
        out.push((n & 63) as u8 + 63);
    }
}

/// Appends the packed upper-triangle bits of `g` to `out`.
pub(crate) fn push_body(g: &Graph, out: &mut Vec<u8>) {
    let mut acc = 0u8;
    let mut filled = 0;
    for j in 1..g.n() {
        let row = g.neighbors(j).bits();
        for i in 0..j {
            acc = acc << 1 | (row >> i & 1) as u8;
            filled += 1;
            if filled == 6 {
                out.push(acc + 63);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push((acc << (6 - filled)) + 63);
    }
}

pub fn encode_bytes(g: &Graph) -> Vec<u8> {
    let n = g.n();
    let mut out = Vec::with_capacity(4 + (n * (n - 1) / 2).div_ceil(6));
    size_prefix(n, &mut out);
    push_body(g, &mut out);
    out
}

pub fn encode(g: &Graph) -> String {
    // Every byte lies in 63..=126.
    String::from_utf8(encode_bytes(g)).expect("graph6 output is ASCII")
}

/// Decodes one graph6 record. Surrounding whitespace and an optional
/// `>>graph6<<` header are stripped; byte offsets in errors refer to the
/// input as given.
pub fn decode(text: &str) -> Result<Graph> {
    let lead = text.len() - text.trim_start().len();
    let mut body = text.trim();
    let mut base = lead;
    if let Some(rest) = body.strip_prefix(HEADER) {
        body = rest;
        base += HEADER.len();
    }
    decode_bytes(body.as_bytes(), base)
}

fn decode_bytes(bytes: &[u8], base: usize) -> Result<Graph> {
    let err = |offset: usize, message: String| Error::Parse { offset: base + offset, message };
    let Some(&first) = bytes.first() else {
        return Err(err(0, "empty graph6 record".into()));
    };
    if first == 126 {
        return Err(err(0, "graphs with more than 62 vertices are not supported in graph6 input".into()));
    }
    if !(63..=126).contains(&first) {
        return Err(err(0, format!("invalid size byte {first:#04x}")));
    }
    let n = (first - 63) as usize;
    if n == 0 {
        return Err(err(0, "graph6 record has zero vertices".into()));
    }
    let bits = n * (n - 1) / 2;
    let expected = 1 + bits.div_ceil(6);
    if bytes.len() != expected {
        let at = bytes.len().min(expected);
        return Err(err(at, format!("expected {expected} bytes for n = {n}, found {}", bytes.len())));
    }
    let mut g = Graph::empty(n)?;
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            let pos = 1 + k / 6;
            let byte = bytes[pos];
            if !(63..=126).contains(&byte) {
                return Err(err(pos, format!("invalid graph6 byte {byte:#04x}")));
            }
            if (byte - 63) >> (5 - k % 6) & 1 == 1 {
                g.add_edge(i, j)?;
            }
            k += 1;
        }
    }
    // Padding bits must be zero.
    if bits % 6 != 0 {
        let last = bytes[expected - 1];
        if !(63..=126).contains(&last) {
            return Err(err(expected - 1, format!("invalid graph6 byte {last:#04x}")));
        }
        let pad = 6 - bits % 6;
        if (last - 63) & ((1 << pad) - 1) != 0 {
            return Err(err(expected - 1, "nonzero padding bits".into()));
        }
    }
    Ok(g)
}

/// Decodes a newline-delimited file of graph6 records, skipping blank lines.
pub fn decode_many(text: &str) -> Result<Vec<Graph>> {
    let mut out = Vec::new();
    let mut offset = 0;
    for line in text.split_inclusive('\n') {
        if !line.trim().is_empty() {
            out.push(decode(line).map_err(|e| match e {
                Error::Parse { offset: o, message } => Error::Parse { offset: offset + o, message },
                other => other,
            })?);
        }
        offset += line.len();
    }
    Ok(out)
}
