//! The `.part` document: one `cell` line per cell, profiles in canonical
//! order.

use std::sync::Arc;

use crate::model::{quotient, Partition, TypeSpace};

use super::{err, tokenize, ParseError};

pub fn parse_partition(text: &str, space: &Arc<TypeSpace>) -> Result<Partition, ParseError> {
    let mut header_seen = false;
    let mut cell_of: Vec<Option<usize>> = vec![None; space.profile_count() as usize];
    let mut next_cell = 0usize;
    for (lineno, raw) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let toks = tokenize(raw);
        if toks.is_empty() {
            continue;
        }
        match toks[0].text {
            "partition" => {
                if header_seen {
                    return Err(err(lineno, toks[0].col, "duplicate header"));
                }
                if toks.len() != 2 || toks[1].text != "v1" {
                    return Err(err(lineno, toks[0].col, "expected `partition v1`"));
                }
                header_seen = true;
            }
            "cell" => {
                if toks.len() < 2 {
                    return Err(err(lineno, toks[0].col, "empty cell"));
                }
                for t in &toks[1..] {
                    let inner = t
                        .text
                        .strip_prefix('(')
                        .and_then(|s| s.strip_suffix(')'))
                        .ok_or_else(|| err(lineno, t.col, "expected `(<label>,...)`"))?;
                    let parts: Vec<&str> = inner.split(',').collect();
                    if parts.len() != space.bidder_count() {
                        return Err(err(lineno, t.col, "wrong profile arity"));
                    }
                    let mut entries = Vec::new();
                    for (i, part) in parts.iter().enumerate() {
                        let ti = space.type_index(i, part).ok_or_else(|| {
                            err(lineno, t.col, format!("unknown type {part:?} for bidder {}", space.bidder_name(i)))
                        })?;
                        entries.push(ti);
                    }
                    let pid = space.profile_id(&crate::model::TypeProfile(entries));
                    if cell_of[pid.0 as usize].is_some() {
                        return Err(err(lineno, t.col, format!("profile {} appears twice", t.text)));
                    }
                    cell_of[pid.0 as usize] = Some(next_cell);
                }
                next_cell += 1;
            }
            other => return Err(err(lineno, toks[0].col, format!("unknown key {other:?}"))),
        }
    }
    if !header_seen {
        return Err(err(1, 1, "missing `partition v1` header"));
    }
    if let Some(missing) = cell_of.iter().position(|c| c.is_none()) {
        return Err(err(
            1,
            1,
            format!(
                "cells do not cover profile {}",
                space.format_profile(crate::model::ProfileId(missing as u32))
            ),
        ));
    }
    Ok(quotient(space, |p| cell_of[p.0 as usize]).expect("total by the cover check"))
}

pub fn emit_partition(partition: &Partition) -> String {
    let space = partition.space();
    let mut out = String::from("partition v1\n");
    for cell in partition.cells() {
        let profiles: Vec<String> = cell.iter().map(|&p| space.format_profile(p)).collect();
        out.push_str(&format!("cell {}\n", profiles.join(" ")));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::TypeSpace;

    #[test]
    fn partition_round_trip() {
        let space = TypeSpace::shared_numeric(&["A", "B"], &[1, 2]).unwrap();
        let part = quotient(&space, |p| Some(space.component(p, 0))).unwrap();
        let text = emit_partition(&part);
        let parsed = parse_partition(&text, &space).unwrap();
        assert_eq!(parsed, part);
        assert_eq!(emit_partition(&parsed), text);
    }

    #[test]
    fn double_cover_is_rejected() {
        let space = TypeSpace::shared_numeric(&["A"], &[1, 2]).unwrap();
        let text = "partition v1\ncell (1) (2)\ncell (1)\n";
        let e = parse_partition(text, &space).unwrap_err();
        assert_eq!(e.line, 3);
    }
}
