//! Fixed-column PDB reader.
//!
//! Only coordinate records are interpreted. Column ranges (1-based,
//! inclusive) follow the wwPDB v3 layout:
//!
//! | field      | columns |
//! |------------|---------|
//! | record     | 1-6     |
//! | serial     | 7-11    |
//! | atom name  | 13-16   |
//! | altLoc     | 17      |
//! | resName    | 18-20   |
//! | chainID    | 22      |
//! | resSeq     | 23-26   |
//! | x, y, z    | 31-38, 39-46, 47-54 |

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub serial: u32,
    pub name: String,
    pub residue_name: String,
    pub chain_id: char,
    pub residue_seq: i32,
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub is_hetero: bool,
}

impl Atom {
    pub fn position(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StructureModel {
    /// Four-character id from the HEADER record, or `"local"`.
    pub pdb_id: String,
    pub atoms: Vec<Atom>,
}

impl StructureModel {
    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }
}

/// Columns `start..=end` (1-based) of `line`, or `""` when the line is short.
fn columns(line: &str, start: usize, end: usize) -> &str {
    let bytes = line.as_bytes();
    if bytes.len() < start {
        return "";
    }
    let end = end.min(bytes.len());
    line.get(start - 1..end).unwrap_or("")
}

fn parse_coord(line: &str, start: usize, axis: &str, lineno: usize) -> Result<f64> {
    let field = columns(line, start, start + 7).trim();
    let value: f64 = field.parse().map_err(|_| Error::MalformedRecord {
        line: lineno,
        reason: format!("{axis} coordinate {field:?} is not a number"),
    })?;
    if !value.is_finite() {
        return Err(Error::MalformedRecord {
            line: lineno,
            reason: format!("{axis} coordinate is not finite"),
        });
    }
    Ok(value)
}

fn parse_atom(line: &str, lineno: usize, is_hetero: bool) -> Result<Atom> {
    let x = parse_coord(line, 31, "x", lineno)?;
    let y = parse_coord(line, 39, "y", lineno)?;
    let z = parse_coord(line, 47, "z", lineno)?;
    // hybrid-36 and other non-decimal serials are tolerated as 0
    let serial = columns(line, 7, 11).trim().parse().unwrap_or(0);
    let residue_seq = columns(line, 23, 26).trim().parse().unwrap_or(0);
    Ok(Atom {
        serial,
        name: columns(line, 13, 16).trim().to_string(),
        residue_name: columns(line, 18, 20).trim().to_string(),
        chain_id: columns(line, 22, 22).chars().next().unwrap_or(' '),
        residue_seq,
        x,
        y,
        z,
        is_hetero,
    })
}

/// Parses the first model of a PDB file.
///
/// ATOM records are always kept, HETATM records only with `include_hetero`.
/// Alternate locations other than blank or `A` are dropped. Reading stops
/// at the first `ENDMDL` or `END`.
pub fn parse_pdb(text: &str, include_hetero: bool) -> Result<StructureModel> {
    let mut atoms = Vec::new();
    let mut pdb_id = None;
    let mut seen_model = false;
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.trim_end_matches('\r');
        let record = columns(line, 1, 6);
        match record.trim_end() {
            "HEADER" => {
                let id = columns(line, 63, 66).trim();
                if id.len() == 4 {
                    pdb_id = Some(id.to_ascii_lowercase());
                }
            }
            "MODEL" => {
                if seen_model {
                    break;
                }
                seen_model = true;
            }
            "ENDMDL" | "END" => break,
            "ATOM" | "HETATM" => {
                let is_hetero = record == "HETATM";
                if is_hetero && !include_hetero {
                    continue;
                }
                let alt = columns(line, 17, 17);
                if !(alt.is_empty() || alt == " " || alt == "A") {
                    continue;
                }
                atoms.push(parse_atom(line, lineno, is_hetero)?);
            }
            _ => {}
        }
    }
    if atoms.is_empty() {
        return Err(Error::NoAtoms);
    }
    Ok(StructureModel { pdb_id: pdb_id.unwrap_or_else(|| "local".into()), atoms })
}
