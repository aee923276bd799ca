//! Reader for TNTP link files.
//!
//! Only columns 1, 2 and 4 (init node, term node, length) are used. Directed links are
//! merged into undirected edges keeping the shortest length, zero-length edges are
//! contracted, and the result is scaled so that the shortest edge has length 4.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::network::{Edge, Network};

const MIN_EDGE_LENGTH: f64 = 4.0;

fn parse_error(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

fn strip_comment(line: &str) -> &str {
    line.split('~').next().unwrap_or("")
}

/// Parses and preprocesses a TNTP network file. The root is the smallest node id.
pub fn parse_tntp(text: &str) -> Result<Network> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l)).peekable();

    // Metadata block, if the file has one.
    let first = lines.clone().find(|(_, l)| !strip_comment(l).trim().is_empty());
    if let Some((_, l)) = first {
        if l.trim_start().starts_with('<') {
            let mut ended = false;
            for (no, raw) in lines.by_ref() {
                let line = raw.trim();
                if line.is_empty() || line.starts_with('~') {
                    continue;
                }
                let Some(rest) = line.strip_prefix('<') else {
                    return Err(parse_error(no, format!("expected a <KEY> value metadata line, got {line:?}")));
                };
                let Some((key, value)) = rest.split_once('>') else {
                    return Err(parse_error(no, "metadata key is missing its closing '>'"));
                };
                let key = key.trim().to_ascii_uppercase();
                if key == "END OF METADATA" {
                    ended = true;
                    break;
                }
                if key.starts_with("NUMBER OF") && strip_comment(value).trim().parse::<u64>().is_err() {
                    return Err(parse_error(no, format!("<{key}> expects an integer, got {:?}", value.trim())));
                }
            }
            if !ended {
                return Err(parse_error(text.lines().count(), "metadata block has no <END OF METADATA>"));
            }
        }
    }

    let mut merged: BTreeMap<(u64, u64), f64> = BTreeMap::new();
    for (no, raw) in lines {
        let line = strip_comment(raw);
        let line = line.split(';').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split_whitespace().collect();
        if cols.len() < 4 {
            return Err(parse_error(no, format!("expected at least 4 columns, found {}", cols.len())));
        }
        let node = |s: &str| -> Result<u64> {
            s.parse::<u64>().map_err(|_| parse_error(no, format!("node id {s:?} is not a non-negative integer")))
        };
        let (a, b) = (node(cols[0])?, node(cols[1])?);
        let len: f64 = cols[3].parse().map_err(|_| parse_error(no, format!("length {:?} is not a number", cols[3])))?;
        if !(len >= 0.0) || !len.is_finite() {
            return Err(parse_error(no, format!("length {len} must be finite and non-negative")));
        }
        let key = (a.min(b), a.max(b));
        merged.entry(key).and_modify(|l| *l = l.min(len)).or_insert(len);
    }
    if merged.is_empty() {
        return Err(parse_error(text.lines().count(), "no link rows"));
    }

    let mut labels: Vec<u64> = merged.keys().flat_map(|&(a, b)| [a, b]).collect();
    labels.sort_unstable();
    labels.dedup();
    let pos = |l: u64| labels.binary_search(&l).unwrap();

    // Contract zero-length edges; each class is represented by its smallest label.
    let mut parent: Vec<usize> = (0..labels.len()).collect();
    for (&(a, b), &len) in &merged {
        if len == 0.0 {
            let (ra, rb) = (find(&mut parent, pos(a)), find(&mut parent, pos(b)));
            let (lo, hi) = (ra.min(rb), ra.max(rb));
            parent[hi] = lo;
        }
    }
    let mut rep = vec![0; labels.len()];
    let mut kept_labels = Vec::new();
    let mut new_index = vec![usize::MAX; labels.len()];
    for i in 0..labels.len() {
        let r = find(&mut parent, i);
        if new_index[r] == usize::MAX {
            new_index[r] = kept_labels.len();
            kept_labels.push(labels[r]);
        }
        rep[i] = new_index[r];
    }

    let positive: Vec<(usize, usize, f64)> = merged
        .iter()
        .filter(|(_, &len)| len > 0.0)
        .map(|(&(a, b), &len)| (rep[pos(a)], rep[pos(b)], len))
        .collect();
    let min_len = positive.iter().map(|e| e.2).fold(f64::INFINITY, f64::min);
    if !min_len.is_finite() {
        return Err(parse_error(text.lines().count(), "every link has length zero"));
    }
    let scale = MIN_EDGE_LENGTH / min_len;
    let edges = positive.into_iter().map(|(u, v, len)| Edge { u, v, len: len * scale }).collect();
    Network::new(kept_labels, edges, 0)
}
