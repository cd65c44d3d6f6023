//! Text formats for instances.
//!
//! Weighted CNF:
//! ```text
//! c optional comments
//! p wcnf <nvars> <nclauses>
//! <weight> <lit> <lit> ... 0
//! ```
//! Weights are integers, decimals or `a/b`; literals are 1-based signed
//! variable numbers.
//!
//! Bipartite graphs come either as a 0/1 matrix (rows offline, columns
//! online, the last online vertex in the leftmost column) or as a record:
//! ```text
//! n_online 2
//! n_offline 3
//! 0: 0 2
//! 1:
//! ```

use std::fmt::Write;

use super::bipartite::BipartiteInstance;
use super::cnf::{Clause, CnfInstance, Literal};
use crate::error::{Error, Result};
use crate::rational::{format_rational, parse_rational};

/// Tokens of a line with their 1-based columns.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s + 1, &line[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

fn parse_usize(tok: (usize, &str), line: usize, what: &str) -> Result<usize> {
    tok.1
        .parse()
        .map_err(|_| Error::parse(line, tok.0, format!("expected {what}, found {:?}", tok.1)))
}

pub fn parse_wcnf(text: &str) -> Result<CnfInstance> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let toks = tokens(raw);
        let Some(&first) = toks.first() else { continue };
        if first.1 == "c" || first.1.starts_with("c ") {
            continue;
        }
        if first.1 == "p" {
            if header.is_some() {
                return Err(Error::parse(line, first.0, "second header line"));
            }
            if toks.len() != 4 || toks[1].1 != "wcnf" {
                return Err(Error::parse(line, first.0, "expected `p wcnf <nvars> <nclauses>`"));
            }
            header = Some((
                parse_usize(toks[2], line, "variable count")?,
                parse_usize(toks[3], line, "clause count")?,
            ));
            continue;
        }
        let Some((n_vars, _)) = header else {
            return Err(Error::parse(line, first.0, "clause before header"));
        };
        let weight =
            parse_rational(first.1).ok_or_else(|| Error::parse(line, first.0, format!("bad weight {:?}", first.1)))?;
        let mut lits = Vec::new();
        let mut terminated = false;
        for &(col, tok) in &toks[1..] {
            if terminated {
                return Err(Error::parse(line, col, "tokens after terminating 0"));
            }
            let lit: i64 = tok
                .parse()
                .map_err(|_| Error::parse(line, col, format!("bad literal {tok:?}")))?;
            if lit == 0 {
                terminated = true;
                continue;
            }
            let var = lit.unsigned_abs() as usize;
            if var > n_vars {
                return Err(Error::parse(line, col, format!("variable {var} exceeds {n_vars}")));
            }
            lits.push(Literal {
                variable: var - 1,
                positive: lit > 0,
            });
        }
        if !terminated {
            return Err(Error::parse(line, raw.len() + 1, "missing terminating 0"));
        }
        let clause =
            Clause::new(clauses.len(), weight, lits).map_err(|e| Error::parse(line, first.0, e.to_string()))?;
        clauses.push(clause);
    }
    let Some((n_vars, n_clauses)) = header else {
        return Err(Error::parse(last_line.max(1), 1, "missing `p wcnf` header"));
    };
    if clauses.len() != n_clauses {
        return Err(Error::parse(
            last_line.max(1),
            1,
            format!("header announces {n_clauses} clauses, found {}", clauses.len()),
        ));
    }
    CnfInstance::new(n_vars, clauses)
}

pub fn serialize_wcnf(instance: &CnfInstance) -> Result<String> {
    if instance.variables().iter().enumerate().any(|(i, &v)| i != v) {
        return Err(Error::Malformed(
            "the text format fixes arrival order to index order".into(),
        ));
    }
    if instance.clauses().iter().enumerate().any(|(i, c)| c.id != i) {
        return Err(Error::Malformed("the text format numbers clauses by position".into()));
    }
    let mut out = format!("p wcnf {} {}\n", instance.n_vars(), instance.clauses().len());
    for c in instance.clauses() {
        out.push_str(&format_rational(&c.weight));
        for l in &c.literals {
            let n = l.variable as i64 + 1;
            let _ = write!(out, " {}", if l.positive { n } else { -n });
        }
        out.push_str(" 0\n");
    }
    Ok(out)
}

/// Layout for bipartite files.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BipartiteFormat {
    Matrix,
    Record,
}

pub fn parse_bipartite(text: &str) -> Result<BipartiteInstance> {
    let first = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'));
    match first {
        Some(l) if l.starts_with("n_online") => parse_record(text),
        Some(_) => parse_matrix(text),
        None => Err(Error::parse(1, 1, "empty graph file")),
    }
}

fn parse_matrix(text: &str) -> Result<BipartiteInstance> {
    let mut rows: Vec<Vec<bool>> = Vec::new();
    let mut width = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let t = raw.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let toks = tokens(raw);
        let mut row = Vec::with_capacity(toks.len());
        for (col, tok) in toks {
            match tok {
                "0" => row.push(false),
                "1" => row.push(true),
                _ => return Err(Error::parse(line, col, format!("expected 0 or 1, found {tok:?}"))),
            }
        }
        match width {
            None => width = Some(row.len()),
            Some(w) if w != row.len() => {
                return Err(Error::parse(
                    line,
                    1,
                    format!("row has {} entries, expected {w}", row.len()),
                ))
            }
            _ => {}
        }
        rows.push(row);
    }
    let n_online = width.unwrap_or(0);
    let adjacency = (0..n_online)
        .map(|v| {
            let col = n_online - 1 - v;
            (0..rows.len()).filter(|&u| rows[u][col]).collect()
        })
        .collect();
    BipartiteInstance::new(rows.len(), adjacency)
}

fn parse_record(text: &str) -> Result<BipartiteInstance> {
    let mut n_online = None;
    let mut n_offline = None;
    let mut adjacency: Vec<Vec<usize>> = Vec::new();
    let mut last_line = 1;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let toks = tokens(raw);
        let Some(&first) = toks.first() else { continue };
        if first.1.starts_with('#') {
            continue;
        }
        match first.1 {
            "n_online" | "n_offline" => {
                if toks.len() != 2 {
                    return Err(Error::parse(line, first.0, "expected a single count"));
                }
                let n = parse_usize(toks[1], line, "a count")?;
                if first.1 == "n_online" {
                    n_online = Some(n);
                } else {
                    n_offline = Some(n);
                }
            }
            label => {
                let Some(index) = label.strip_suffix(':') else {
                    return Err(Error::parse(line, first.0, "expected `<online>:`"));
                };
                let v = parse_usize((first.0, index), line, "an online index")?;
                if v != adjacency.len() {
                    return Err(Error::parse(
                        line,
                        first.0,
                        format!("expected online vertex {}", adjacency.len()),
                    ));
                }
                let Some(n_off) = n_offline else {
                    return Err(Error::parse(line, first.0, "adjacency before n_offline"));
                };
                let mut adj = Vec::new();
                for &tok in &toks[1..] {
                    let u = parse_usize(tok, line, "an offline index")?;
                    if u >= n_off {
                        return Err(Error::parse(line, tok.0, format!("offline {u} out of range")));
                    }
                    adj.push(u);
                }
                adjacency.push(adj);
            }
        }
    }
    let (Some(n_on), Some(n_off)) = (n_online, n_offline) else {
        return Err(Error::parse(last_line, 1, "missing n_online or n_offline"));
    };
    if adjacency.len() != n_on {
        return Err(Error::parse(
            last_line,
            1,
            format!("expected {n_on} adjacency lines, found {}", adjacency.len()),
        ));
    }
    BipartiteInstance::new(n_off, adjacency).map_err(|e| Error::parse(last_line, 1, e.to_string()))
}

pub fn serialize_bipartite(instance: &BipartiteInstance, format: BipartiteFormat) -> String {
    match format {
        BipartiteFormat::Matrix => {
            let n_on = instance.n_online();
            let mut out = String::new();
            for u in 0..instance.n_offline() {
                let row: Vec<&str> = (0..n_on)
                    .map(|col| if instance.has_edge(n_on - 1 - col, u) { "1" } else { "0" })
                    .collect();
                out.push_str(&row.join(" "));
                out.push('\n');
            }
            out
        }
        BipartiteFormat::Record => {
            let mut out = format!("n_online {}\nn_offline {}\n", instance.n_online(), instance.n_offline());
            for v in 0..instance.n_online() {
                let _ = write!(out, "{v}:");
                for u in instance.neighbors(v) {
                    let _ = write!(out, " {u}");
                }
                out.push('\n');
            }
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn wcnf_reports_positions() {
        let err = parse_wcnf("p wcnf 2 1\n1 3 0\n").unwrap_err();
        assert_eq!(
            err,
            Error::Parse {
                line: 2,
                column: 3,
                message: "variable 3 exceeds 2".into()
            }
        );
        assert!(matches!(parse_wcnf("1 1 0\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(
            parse_wcnf("p wcnf 1 1\n1 1\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(parse_wcnf("p wcnf 1 2\n1 1 0\n"), Err(Error::Parse { .. })));
    }

    #[test]
    fn wcnf_decimal_weights_are_exact() {
        let inst = parse_wcnf("c hi\np wcnf 2 1\n0.75 1 -2 0\n").unwrap();
        assert_eq!(inst.clauses()[0].weight, q(3, 4));
        assert_eq!(serialize_wcnf(&inst).unwrap(), "p wcnf 2 1\n3/4 1 -2 0\n");
    }

    #[test]
    fn matrix_errors() {
        assert!(matches!(parse_bipartite("1 0\n1\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(
            parse_bipartite("1 2\n"),
            Err(Error::Parse { line: 1, column: 3, .. })
        ));
    }

    #[test]
    fn record_round_trip() {
        let text = "n_online 2\nn_offline 3\n0: 0 2\n1:\n";
        let g = parse_bipartite(text).unwrap();
        assert_eq!(serialize_bipartite(&g, BipartiteFormat::Record), text);
        assert!(parse_bipartite("n_online 1\nn_offline 1\n0: 1\n").is_err());
    }
}
