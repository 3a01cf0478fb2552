//! Text formats: clique database files, clique lists, and point
//! configuration files.
//!
//! A database file is UTF-8 text with `#` header lines (`weights`, `size`,
//! `required`, `generator`) followed by one clique per line, the member
//! classes separated by `;`, each class as nine space-separated integers.
//! Configuration files hold one point per line (three field elements;
//! rationals as `num/den`), with an optional leading `p=<prime>` line
//! selecting a prime field.

use std::fmt;

use crate::cliques::{CliqueDatabase, DbHeader};
use crate::field::{Field, PrimeField, Rationals};
use crate::picard::ExceptionalClass;
use crate::plane::{PointConfig, ProjPoint};
use crate::weylgraph::{Clique, WeightedGraph};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IoError {
    pub line: usize,
    pub msg: String,
}

impl fmt::Display for IoError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.msg)
    }
}

impl std::error::Error for IoError {}

fn err(line: usize, msg: impl Into<String>) -> IoError {
    IoError {
        line,
        msg: msg.into(),
    }
}

/// 64-bit FNV-1a digest used for run manifests and report fingerprints.
pub fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

// ---------------------------------------------------------------------------
// Clique databases

pub fn write_db(db: &CliqueDatabase) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "# weights={}\n",
        db.header
            .weights
            .iter()
            .map(|w| w.to_string())
            .collect::<Vec<_>>()
            .join(",")
    ));
    out.push_str(&format!("# size={}\n", db.header.size));
    out.push_str(&format!(
        "# required={}\n",
        db.header
            .required
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(";")
    ));
    out.push_str(&format!("# generator={}\n", db.header.generator));
    let mut lines: Vec<String> = db.cliques.iter().map(|k| k.to_string()).collect();
    lines.sort();
    for l in lines {
        out.push_str(&l);
        out.push('\n');
    }
    out
}

pub fn parse_db(g: &WeightedGraph, text: &str) -> Result<CliqueDatabase, IoError> {
    let mut weights: Option<Vec<i8>> = None;
    let mut size: Option<usize> = None;
    let mut required: Option<Vec<ExceptionalClass>> = None;
    let mut generator = String::new();
    let mut cliques = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let lineno = n + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            let rest = rest.trim();
            if let Some((key, value)) = rest.split_once('=') {
                match key.trim() {
                    "weights" => {
                        let ws: Result<Vec<i8>, _> =
                            value.split(',').map(|w| w.trim().parse::<i8>()).collect();
                        weights =
                            Some(ws.map_err(|_| err(lineno, format!("bad weights {value:?}")))?);
                    }
                    "size" => {
                        size = Some(
                            value
                                .trim()
                                .parse()
                                .map_err(|_| err(lineno, format!("bad size {value:?}")))?,
                        );
                    }
                    "required" => {
                        let cs: Result<Vec<ExceptionalClass>, _> = value
                            .split(';')
                            .filter(|s| !s.trim().is_empty())
                            .map(|s| s.parse())
                            .collect();
                        required = Some(cs.map_err(|e| err(lineno, e.to_string()))?);
                    }
                    "generator" => generator = value.trim().to_string(),
                    _ => {}
                }
            }
            continue;
        }
        // body lines are validated as they are parsed so that errors carry
        // their line number; headers must come first
        let weights = weights
            .as_ref()
            .ok_or_else(|| err(lineno, "clique before '# weights=' header"))?;
        let size = size.ok_or_else(|| err(lineno, "clique before '# size=' header"))?;
        let required = required
            .as_ref()
            .ok_or_else(|| err(lineno, "clique before '# required=' header"))?;
        let clique = parse_clique_line(g, line).map_err(|m| err(lineno, m))?;
        if clique.len() != size {
            return Err(err(
                lineno,
                format!("clique has {} members, expected {size}", clique.len()),
            ));
        }
        for r in required {
            let idx = g
                .classes()
                .index_of(r.vec())
                .ok_or_else(|| err(lineno, format!("required member {r} is not a class")))?;
            if !clique.contains(idx) {
                return Err(err(lineno, format!("missing required member {r}")));
            }
        }
        let vs = clique.verts();
        for i in 0..vs.len() {
            for j in i + 1..vs.len() {
                let w = g.weight(vs[i], vs[j]);
                if !weights.contains(&w) {
                    return Err(err(lineno, format!("weight {w} not allowed")));
                }
            }
        }
        cliques.push(clique);
    }
    let header = DbHeader {
        weights: weights.ok_or_else(|| err(0, "missing '# weights=' header"))?,
        size: size.ok_or_else(|| err(0, "missing '# size=' header"))?,
        required: required.ok_or_else(|| err(0, "missing '# required=' header"))?,
        generator,
    };
    let db = CliqueDatabase { header, cliques };
    if let Err(msg) = db.validate(g) {
        return Err(err(0, msg));
    }
    Ok(db)
}

/// One clique as a `;`-separated list of class vectors.
pub fn parse_clique_line(g: &WeightedGraph, line: &str) -> Result<Clique, String> {
    let classes: Result<Vec<ExceptionalClass>, _> =
        line.split(';').map(|s| s.trim().parse()).collect();
    let classes = classes.map_err(|e| e.to_string())?;
    let mut verts = Vec::with_capacity(classes.len());
    for c in &classes {
        verts.push(
            g.classes()
                .index_of(c.vec())
                .ok_or_else(|| format!("{c} is not one of the 240 classes"))?,
        );
    }
    let clique = Clique::new(verts);
    if clique.len() != classes.len() {
        return Err("duplicate class in clique".into());
    }
    Ok(clique)
}

/// A clique file: `#` comments, then either one class per line or a single
/// `;`-separated line.
pub fn parse_clique_file(text: &str) -> Result<Vec<ExceptionalClass>, IoError> {
    let mut classes = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if line.contains(';') {
            for part in line.split(';') {
                classes.push(
                    part.trim()
                        .parse::<ExceptionalClass>()
                        .map_err(|e| err(n + 1, e.to_string()))?,
                );
            }
        } else {
            classes.push(
                line.parse::<ExceptionalClass>()
                    .map_err(|e| err(n + 1, e.to_string()))?,
            );
        }
    }
    if classes.is_empty() {
        return Err(err(0, "no classes in clique file"));
    }
    Ok(classes)
}

// ---------------------------------------------------------------------------
// Point and configuration files

/// Points over either scalar type, as parsed from a file.
pub enum ParsedPoints {
    Rational(Vec<ProjPoint<Rationals>>),
    Prime(PrimeField, Vec<ProjPoint<PrimeField>>),
}

/// Parses a point file: optional `p=<prime>` header, then one point per
/// line as three field elements.
pub fn parse_points(text: &str) -> Result<ParsedPoints, IoError> {
    let mut field_p: Option<u64> = None;
    let mut rows: Vec<(usize, Vec<&str>)> = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(v) = line.strip_prefix("p=") {
            field_p = Some(
                v.trim()
                    .parse()
                    .map_err(|_| err(n + 1, format!("bad modulus {v:?}")))?,
            );
            continue;
        }
        let parts: Vec<&str> = line.split_whitespace().collect();
        if parts.len() != 3 {
            return Err(err(n + 1, format!("expected 3 coordinates, got {}", parts.len())));
        }
        rows.push((n + 1, parts));
    }
    match field_p {
        Some(p) => {
            if !crate::field::is_prime(p) {
                return Err(err(0, format!("{p} is not prime")));
            }
            let f = PrimeField::new(p);
            let mut pts = Vec::new();
            for (lineno, parts) in rows {
                let coords: Result<Vec<u64>, String> =
                    parts.iter().map(|s| f.parse_elem(s)).collect();
                let coords = coords.map_err(|m| err(lineno, m))?;
                pts.push(
                    ProjPoint::new(&f, [coords[0], coords[1], coords[2]])
                        .map_err(|e| err(lineno, e.to_string()))?,
                );
            }
            Ok(ParsedPoints::Prime(f, pts))
        }
        None => {
            let f = Rationals;
            let mut pts = Vec::new();
            for (lineno, parts) in rows {
                let coords: Result<Vec<_>, String> =
                    parts.iter().map(|s| f.parse_elem(s)).collect();
                let coords = coords.map_err(|m| err(lineno, m))?;
                let mut it = coords.into_iter();
                pts.push(
                    ProjPoint::new(&f, [it.next().unwrap(), it.next().unwrap(), it.next().unwrap()])
                        .map_err(|e| err(lineno, e.to_string()))?,
                );
            }
            Ok(ParsedPoints::Rational(pts))
        }
    }
}

/// Configurations over either scalar type.
pub enum ParsedConfig {
    Rational(PointConfig<Rationals>),
    Prime(PointConfig<PrimeField>),
}

/// A configuration file: 9 points (P1..P8 and the target P).
pub fn parse_config(text: &str) -> Result<ParsedConfig, IoError> {
    match parse_points(text)? {
        ParsedPoints::Rational(mut pts) => {
            if pts.len() != 9 {
                return Err(err(0, format!("expected 9 points, got {}", pts.len())));
            }
            let target = pts.pop().unwrap();
            Ok(ParsedConfig::Rational(PointConfig::from_points(
                Rationals, pts, target,
            )))
        }
        ParsedPoints::Prime(f, mut pts) => {
            if pts.len() != 9 {
                return Err(err(0, format!("expected 9 points, got {}", pts.len())));
            }
            let target = pts.pop().unwrap();
            Ok(ParsedConfig::Prime(PointConfig::from_points(f, pts, target)))
        }
    }
}

pub fn write_config<F: Field>(config: &PointConfig<F>) -> String {
    let f = &config.field;
    let mut out = String::new();
    if f.characteristic() > 0 {
        out.push_str(&format!("p={}\n", f.characteristic()));
    }
    for pt in config.points.iter().chain(std::iter::once(&config.target)) {
        let c = pt.coords();
        out.push_str(&format!(
            "{} {} {}\n",
            f.fmt_elem(&c[0]),
            f.fmt_elem(&c[1]),
            f.fmt_elem(&c[2])
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cliques::{enumerate_cliques, fixed_pair};

    #[test]
    fn db_roundtrip_and_validation() {
        let g = WeightedGraph::get();
        let (a, b) = fixed_pair(g);
        let cliques = enumerate_cliques(g, &[1, 2], 4, &[a, b]);
        let db = CliqueDatabase {
            header: DbHeader {
                weights: vec![1, 2],
                size: 4,
                required: vec![
                    *g.classes().class(a),
                    *g.classes().class(b),
                ],
                generator: "test".into(),
            },
            cliques: cliques[..50.min(cliques.len())].to_vec(),
        };
        let text = write_db(&db);
        let parsed = parse_db(g, &text).unwrap();
        assert_eq!(parsed.cliques.len(), db.cliques.len());
        assert_eq!(parsed.header, db.header);
        // truncating a body line is reported with its line number
        let broken: String = text
            .lines()
            .enumerate()
            .map(|(i, l)| {
                if i == 6 {
                    l[..l.len() / 2].to_string()
                } else {
                    l.to_string()
                }
            })
            .collect::<Vec<_>>()
            .join("\n");
        let e = parse_db(g, &broken).unwrap_err();
        assert_eq!(e.line, 7);
    }

    #[test]
    fn config_roundtrip_rational() {
        let f = Rationals;
        let params = [5i64, 7, 2, 3, 4, 6].map(|x| crate::field::Domain::from_i64(&f, x));
        let config = PointConfig::setup_a(f, params);
        let text = write_config(&config);
        match parse_config(&text).unwrap() {
            ParsedConfig::Rational(c) => {
                assert_eq!(c.points, config.points);
                assert_eq!(c.target, config.target);
            }
            _ => panic!("expected rational config"),
        }
    }

    #[test]
    fn config_prime_field_header() {
        let text = "p=19\n0 1 1\n0 1 2\n1 0 1\n1 0 4\n1 1 1\n1 1 16\n7 1 18\n7 1 16\n0 0 1\n";
        match parse_config(text).unwrap() {
            ParsedConfig::Prime(c) => {
                assert_eq!(c.field.modulus(), 19);
                assert_eq!(c.points.len(), 8);
            }
            _ => panic!("expected prime-field config"),
        }
        assert!(parse_config("p=20\n0 0 1\n").is_err());
    }

    #[test]
    fn fnv_digest_is_stable() {
        assert_eq!(fnv1a(b""), 0xcbf2_9ce4_8422_2325);
        assert_eq!(fnv1a(b"a"), fnv1a(b"a"));
        assert_ne!(fnv1a(b"a"), fnv1a(b"b"));
    }
}
