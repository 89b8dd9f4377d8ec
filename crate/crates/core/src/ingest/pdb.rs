//! Fixed-column PDB reader and writer.
//!
//! Only `ATOM`, `HETATM`, `CONECT`, `MODEL` and `ENDMDL` records are
//! interpreted. Column layout (1-based, inclusive):
//!
//! | Columns | Field                  |
//! |---------|------------------------|
//! | 1 - 6   | record name            |
//! | 7 - 11  | serial                 |
//! | 13 - 16 | atom name              |
//! | 17      | alternate location     |
//! | 18 - 20 | residue name           |
//! | 22      | chain                  |
//! | 23 - 26 | residue sequence       |
//! | 31 - 54 | x, y, z (3 × F8.3)     |
//! | 77 - 78 | element, right-justified |

use std::collections::HashSet;
use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};

use super::element::Element;
use crate::{Error, Result, Vec3};

/// Lowercase four-character PDB identifier, `[0-9][a-z0-9]{3}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct PdbId(String);

impl PdbId {
    pub fn parse(raw: &str) -> Result<PdbId> {
        let id = raw.trim().to_ascii_lowercase();
        let bytes = id.as_bytes();
        let well_formed = bytes.len() == 4
            && bytes[0].is_ascii_digit()
            && bytes[1..]
                .iter()
                .all(|b| b.is_ascii_digit() || b.is_ascii_lowercase());
        if well_formed {
            Ok(PdbId(id))
        } else {
            Err(Error::InvalidPdbId(raw.to_string()))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl TryFrom<String> for PdbId {
    type Error = Error;
    fn try_from(value: String) -> Result<Self> {
        PdbId::parse(&value)
    }
}

impl From<PdbId> for String {
    fn from(value: PdbId) -> Self {
        value.0
    }
}

impl fmt::Display for PdbId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for PdbId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PdbId({})", self.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Atom {
    pub serial: i64,
    /// Raw four-column atom name, padding included (e.g. `" CA "`).
    pub name: String,
    pub element: Element,
    pub residue_name: String,
    pub chain: char,
    pub residue_seq: i32,
    pub position: Vec3,
    pub is_hetatm: bool,
}

impl Atom {
    pub fn trimmed_name(&self) -> &str {
        self.name.trim()
    }

    pub fn is_alpha_carbon(&self) -> bool {
        !self.is_hetatm && self.trimmed_name() == "CA" && self.element == Element::C
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Structure {
    pub pdb_id: PdbId,
    pub atoms: Vec<Atom>,
    /// Normalized `(low, high)` serial pairs; every serial is present in `atoms`.
    pub conect: Vec<(i64, i64)>,
}

fn field(line: &str, from: usize, to: usize) -> &str {
    // 1-based inclusive columns, clipped to the line length
    let end = to.min(line.len());
    if from > end {
        ""
    } else {
        &line[from - 1..end]
    }
}

fn element_from_name(name: &str) -> Option<Element> {
    let lead_blank = name.starts_with(' ') || name.starts_with(|c: char| c.is_ascii_digit());
    let letters: String = name
        .trim()
        .trim_start_matches(|c: char| c.is_ascii_digit())
        .chars()
        .take_while(|c| c.is_ascii_alphabetic())
        .collect();
    if letters.is_empty() {
        return None;
    }
    if !lead_blank && letters.len() >= 2 {
        if let Some(e) = Element::from_symbol(&letters[..2]) {
            return Some(e);
        }
    }
    Element::from_symbol(&letters[..1])
}

fn parse_atom_line(line: &str, line_no: usize) -> Result<Atom> {
    let malformed = || Error::MalformedRecord { line: line_no };
    if line.len() < 54 || !line.is_ascii() {
        return Err(malformed());
    }
    let coord = |from, to| -> Result<f64> {
        field(line, from, to)
            .trim()
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(malformed)
    };
    let position = Vec3::new(coord(31, 38)?, coord(39, 46)?, coord(47, 54)?);
    let serial = field(line, 7, 11).trim().parse().map_err(|_| malformed())?;
    let residue_seq = field(line, 23, 26).trim().parse().map_err(|_| malformed())?;
    let name = format!("{:<4}", field(line, 13, 16));
    let symbol = field(line, 77, 78).trim();
    let element = if symbol.is_empty() {
        element_from_name(&name).ok_or_else(|| Error::UnknownElement {
            symbol: name.trim().to_string(),
            line: line_no,
        })?
    } else {
        Element::from_symbol(symbol).ok_or_else(|| Error::UnknownElement {
            symbol: symbol.to_string(),
            line: line_no,
        })?
    };
    Ok(Atom {
        serial,
        name,
        element,
        residue_name: field(line, 18, 20).trim().to_string(),
        chain: field(line, 22, 22).chars().next().unwrap_or(' '),
        residue_seq,
        position,
        is_hetatm: line.starts_with("HETATM"),
    })
}

fn parse_conect(line: &str) -> Vec<(i64, i64)> {
    let Ok(origin) = field(line, 7, 11).trim().parse::<i64>() else {
        return Vec::new();
    };
    [(12, 16), (17, 21), (22, 26), (27, 31)]
        .iter()
        .filter_map(|&(a, b)| field(line, a, b).trim().parse::<i64>().ok())
        .filter(|&other| other != origin)
        .map(|other| (origin.min(other), origin.max(other)))
        .collect()
}

/// Parse PDB text. Only the first `MODEL` is retained; alternate locations
/// other than blank or `A` are skipped.
pub fn parse_pdb(pdb_id: &PdbId, text: &str) -> Result<Structure> {
    let mut atoms = Vec::new();
    let mut conect = Vec::new();
    let mut first_model_done = false;

    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let record = field(line, 1, 6);
        match record.trim_end() {
            "ATOM" | "HETATM" => {
                if first_model_done {
                    continue;
                }
                let alt = field(line, 17, 17);
                if !(alt.is_empty() || alt == " " || alt == "A") {
                    continue;
                }
                atoms.push(parse_atom_line(line, line_no)?);
            }
            "ENDMDL" => first_model_done = true,
            "CONECT" => conect.extend(parse_conect(line)),
            _ => {}
        }
    }

    let serials: HashSet<i64> = atoms.iter().map(|a| a.serial).collect();
    let mut seen = HashSet::new();
    conect.retain(|&(a, b)| serials.contains(&a) && serials.contains(&b) && seen.insert((a, b)));

    Ok(Structure {
        pdb_id: pdb_id.clone(),
        atoms,
        conect,
    })
}

/// Serialize to PDB text that `parse_pdb` reads back unchanged.
pub fn write_pdb(structure: &Structure) -> String {
    let mut out = String::new();
    for atom in &structure.atoms {
        let record = if atom.is_hetatm { "HETATM" } else { "ATOM" };
        let _ = writeln!(
            out,
            "{record:<6}{serial:>5} {name:<4} {res:>3} {chain}{seq:>4}    {x:>8.3}{y:>8.3}{z:>8.3}{occ:>6.2}{b:>6.2}          {el:>2}",
            serial = atom.serial,
            name = atom.name,
            res = atom.residue_name,
            chain = atom.chain,
            seq = atom.residue_seq,
            x = atom.position.x,
            y = atom.position.y,
            z = atom.position.z,
            occ = 1.0,
            b = 0.0,
            el = atom.element.symbol().to_ascii_uppercase(),
        );
    }
    for &(a, b) in &structure.conect {
        let _ = writeln!(out, "CONECT{a:>5}{b:>5}");
    }
    out.push_str("END\n");
    out
}
