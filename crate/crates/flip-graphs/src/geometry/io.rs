//! Line-oriented text formats.
//!
//! Config file: one point per line, `kind x y` with kind in
//! {corner, flat, puncture}; boundary points in ccw order, punctures last.
//! Blank lines and `#` comments are skipped.
//!
//! Triangulation: comma-separated `a-b` pairs sorted lexicographically.
//!
//! Flip path: a `start:` line with the start triangulation followed by one
//! `flip: a-b -> c-d` line per step.

use super::{Arc, Point, PointConfig, PointKind, Result, Triangulation};
use crate::engine::FlipPath;
use crate::error::Error;

pub fn config_to_text(config: &PointConfig) -> String {
    let mut s = String::new();
    for p in config.points() {
        let kind = match p.kind {
            PointKind::Corner => "corner",
            PointKind::Flat => "flat",
            PointKind::Puncture => "puncture",
        };
        s.push_str(&format!("{kind} {} {}\n", p.x, p.y));
    }
    s
}

pub fn config_from_text(text: &str) -> Result<PointConfig> {
    let mut points = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut it = line.split_whitespace();
        let kind = match it.next() {
            Some("corner") => PointKind::Corner,
            Some("flat") => PointKind::Flat,
            Some("puncture") => PointKind::Puncture,
            other => {
                return Err(Error::Parse(format!(
                    "line {}: unknown point kind {:?}",
                    lineno + 1,
                    other
                )))
            }
        };
        let coord = |tok: Option<&str>| -> Result<i64> {
            tok.ok_or_else(|| Error::Parse(format!("line {}: missing coordinate", lineno + 1)))?
                .parse()
                .map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))
        };
        let x = coord(it.next())?;
        let y = coord(it.next())?;
        points.push(Point::new(x, y, kind));
    }
    PointConfig::new(points)
}

pub fn triangulation_to_text(config: &PointConfig, t: &Triangulation) -> String {
    let mut arcs: Vec<Arc> = t.arc_ids().map(|id| config.arc(id)).collect();
    arcs.sort_unstable();
    arcs.iter()
        .map(|a| a.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

pub fn triangulation_from_text(config: &PointConfig, text: &str) -> Result<Triangulation> {
    let pairs = parse_arc_list(text)?;
    config.triangulation_from_pairs(&pairs)
}

/// Parse `a-b,c-d,...` into point-index pairs.
pub fn parse_arc_list(text: &str) -> Result<Vec<(usize, usize)>> {
    let mut out = Vec::new();
    for tok in text.split(',') {
        let tok = tok.trim();
        if tok.is_empty() {
            continue;
        }
        let (a, b) = tok
            .split_once('-')
            .ok_or_else(|| Error::Parse(format!("bad arc token {tok:?}")))?;
        let a: usize = a.trim().parse().map_err(|e| Error::Parse(format!("{tok:?}: {e}")))?;
        let b: usize = b.trim().parse().map_err(|e| Error::Parse(format!("{tok:?}: {e}")))?;
        out.push((a, b));
    }
    Ok(out)
}

pub fn path_to_text(config: &PointConfig, path: &FlipPath) -> String {
    let mut s = format!("start: {}\n", triangulation_to_text(config, &path.start));
    for &(rm, ins) in &path.steps {
        s.push_str(&format!("flip: {} -> {}\n", config.arc(rm), config.arc(ins)));
    }
    s
}

pub fn path_from_text(config: &PointConfig, text: &str) -> Result<FlipPath> {
    let mut start = None;
    let mut steps = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("start:") {
            start = Some(triangulation_from_text(config, rest.trim())?);
        } else if let Some(rest) = line.strip_prefix("flip:") {
            let (lhs, rhs) = rest
                .split_once("->")
                .ok_or_else(|| Error::Parse(format!("line {}: malformed flip", lineno + 1)))?;
            let parse_one = |s: &str| -> Result<(usize, usize)> {
                let v = parse_arc_list(s)?;
                if v.len() != 1 {
                    return Err(Error::Parse(format!("line {}: expected one arc", lineno + 1)));
                }
                Ok(v[0])
            };
            let (ra, rb) = parse_one(lhs)?;
            let (ia, ib) = parse_one(rhs)?;
            steps.push((config.require_arc(ra, rb)?, config.require_arc(ia, ib)?));
        } else {
            return Err(Error::Parse(format!("line {}: unrecognized line", lineno + 1)));
        }
    }
    let start = start.ok_or_else(|| Error::Parse("path file has no start line".into()))?;
    let path = FlipPath { start, steps };
    path.validate(config)?;
    Ok(path)
}
