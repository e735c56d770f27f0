//! Text format for a marked surface: pants graph plus Fenchel-Nielsen data.
//!
//! ```text
//! schema 1
//! genus 2
//! label symmetric
//! pants 0 0 1 2
//! pants 1 0 1 2
//! edge 0 0:0 1:0 2 0
//! ```
//!
//! `pants <id> <e0> <e1> <e2>` lists the edge at each boundary slot and
//! `edge <id> <p>:<s> <p>:<s> <length> <twist>` gives both endpoints (A is the first
//! slot listing the edge) and the coordinates. `#` starts a comment.

use std::fmt::Write as _;

use kform_core::surface::{Endpoint, FNCoordinates, PantsGraph};

pub const SCHEMA: u32 = 1;

#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceFile {
    pub label: Option<String>,
    pub graph: PantsGraph,
    pub coords: FNCoordinates,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("line {line}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub msg: String,
}

fn err(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError { line, msg: msg.into() }
}

fn num<T: std::str::FromStr>(line: usize, s: &str, what: &str) -> Result<T, ParseError> {
    s.parse().map_err(|_| err(line, format!("bad {what} '{s}'")))
}

fn endpoint(line: usize, s: &str) -> Result<Endpoint, ParseError> {
    let (p, q) = s.split_once(':').ok_or_else(|| err(line, format!("endpoint '{s}' is not <pants>:<slot>")))?;
    Ok(Endpoint { pants: num(line, p, "pants id")?, slot: num(line, q, "slot")? })
}

impl SurfaceFile {
    pub fn new(label: Option<String>, graph: PantsGraph, coords: FNCoordinates) -> Self {
        SurfaceFile { label, graph, coords }
    }

    pub fn genus(&self) -> usize {
        self.graph.genus
    }

    pub fn parse(text: &str) -> Result<SurfaceFile, ParseError> {
        let mut schema = None;
        let mut genus = None;
        let mut label = None;
        let mut pants: Vec<[usize; 3]> = Vec::new();
        let mut first_pants_line = 0;
        let mut edges: Vec<(usize, Endpoint, Endpoint, f64, f64)> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let ln = i + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let mut parts = body.split_whitespace();
            let key = parts.next().expect("nonempty line");
            let rest: Vec<&str> = parts.collect();
            if schema.is_none() && key != "schema" {
                return Err(err(ln, "the first entry must be 'schema <version>'"));
            }
            match key {
                "schema" => {
                    if schema.is_some() {
                        return Err(err(ln, "duplicate schema line"));
                    }
                    let [v] = rest[..] else { return Err(err(ln, "expected 'schema <version>'")) };
                    let v: u32 = num(ln, v, "schema version")?;
                    if v != SCHEMA {
                        return Err(err(ln, format!("unsupported schema version {v}")));
                    }
                    schema = Some(v);
                }
                "genus" => {
                    let [v] = rest[..] else { return Err(err(ln, "expected 'genus <g>'")) };
                    genus = Some(num::<usize>(ln, v, "genus")?);
                }
                "label" => {
                    let l = body["label".len()..].trim();
                    label = Some(l.to_string());
                }
                "pants" => {
                    let [id, a, b, c] = rest[..] else { return Err(err(ln, "expected 'pants <id> <e0> <e1> <e2>'")) };
                    let id: usize = num(ln, id, "pants id")?;
                    if id != pants.len() {
                        return Err(err(ln, format!("pants ids must be consecutive from 0, got {id}")));
                    }
                    if pants.is_empty() {
                        first_pants_line = ln;
                    }
                    pants.push([num(ln, a, "edge id")?, num(ln, b, "edge id")?, num(ln, c, "edge id")?]);
                }
                "edge" => {
                    let [id, a, b, l, t] = rest[..] else {
                        return Err(err(ln, "expected 'edge <id> <p>:<s> <p>:<s> <length> <twist>'"));
                    };
                    let id: usize = num(ln, id, "edge id")?;
                    if id != edges.len() {
                        return Err(err(ln, format!("edge ids must be consecutive from 0, got {id}")));
                    }
                    let l: f64 = num(ln, l, "length")?;
                    let t: f64 = num(ln, t, "twist")?;
                    if !(l.is_finite() && l > 0.0) {
                        return Err(err(ln, format!("length must be positive, got {l}")));
                    }
                    if !t.is_finite() {
                        return Err(err(ln, format!("twist must be finite, got {t}")));
                    }
                    edges.push((ln, endpoint(ln, a)?, endpoint(ln, b)?, l, t));
                }
                other => return Err(err(ln, format!("unknown key '{other}'"))),
            }
        }
        let last = text.lines().count().max(1);
        if schema.is_none() {
            return Err(err(last, "missing schema line"));
        }
        let genus = genus.ok_or_else(|| err(last, "missing genus line"))?;
        let graph = PantsGraph::from_slots(genus, pants).map_err(|e| err(first_pants_line, e.to_string()))?;
        if edges.len() != graph.n_edges() {
            return Err(err(last, format!("{} edge lines for {} pants curves", edges.len(), graph.n_edges())));
        }
        for (e, (ln, a, b, _, _)) in edges.iter().enumerate() {
            if graph.edges[e] != [*a, *b] {
                let [ga, gb] = graph.edges[e];
                return Err(err(
                    *ln,
                    format!(
                        "edge {e} endpoints disagree with the pants table (expected {}:{} {}:{})",
                        ga.pants, ga.slot, gb.pants, gb.slot
                    ),
                ));
            }
        }
        let coords = FNCoordinates::new(edges.iter().map(|x| x.3).collect(), edges.iter().map(|x| x.4).collect());
        Ok(SurfaceFile { label, graph, coords })
    }

    /// Canonical text; reals use the shortest representation that parses back exactly.
    pub fn emit(&self) -> String {
        let mut s = String::new();
        writeln!(s, "schema {SCHEMA}").unwrap();
        writeln!(s, "genus {}", self.graph.genus).unwrap();
        if let Some(l) = &self.label {
            writeln!(s, "label {l}").unwrap();
        }
        for (p, slots) in self.graph.pants.iter().enumerate() {
            writeln!(s, "pants {p} {} {} {}", slots[0], slots[1], slots[2]).unwrap();
        }
        for (e, [a, b]) in self.graph.edges.iter().enumerate() {
            writeln!(
                s,
                "edge {e} {}:{} {}:{} {:?} {:?}",
                a.pants, a.slot, b.pants, b.slot, self.coords.lengths[e], self.coords.twists[e]
            )
            .unwrap();
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use kform_core::surface::presets;

    #[test]
    fn round_trip() {
        let (g, x) = presets::thin_family(0.5, 7.0);
        let sf = SurfaceFile::new(Some("thin family".into()), g, x);
        let back = SurfaceFile::parse(&sf.emit()).unwrap();
        assert_eq!(back, sf);
    }

    #[test]
    fn diagnostics_carry_line_numbers() {
        let e = SurfaceFile::parse("schema 1\ngenus 2\npants 0 0 1 2\npants 1 0 1 x\n").unwrap_err();
        assert_eq!(e.line, 4);
        let e = SurfaceFile::parse("genus 2\n").unwrap_err();
        assert_eq!(e.line, 1);
        let e = SurfaceFile::parse("schema 2\n").unwrap_err();
        assert!(e.msg.contains("unsupported"));
    }
}
