use serde::{Deserialize, Serialize};

/// Physicochemical residue classes used to decide which residue pairs may
/// correspond in a site alignment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ResidueClass {
    Hydrophobic,
    Aromatic,
    Polar,
    Positive,
    Negative,
}

const CLASS_TABLE: &[(&str, ResidueClass)] = &[
    ("ALA", ResidueClass::Hydrophobic),
    ("VAL", ResidueClass::Hydrophobic),
    ("LEU", ResidueClass::Hydrophobic),
    ("ILE", ResidueClass::Hydrophobic),
    ("MET", ResidueClass::Hydrophobic),
    ("MSE", ResidueClass::Hydrophobic),
    ("PRO", ResidueClass::Hydrophobic),
    ("GLY", ResidueClass::Hydrophobic),
    ("PHE", ResidueClass::Aromatic),
    ("TRP", ResidueClass::Aromatic),
    ("TYR", ResidueClass::Aromatic),
    ("SER", ResidueClass::Polar),
    ("THR", ResidueClass::Polar),
    ("ASN", ResidueClass::Polar),
    ("GLN", ResidueClass::Polar),
    ("CYS", ResidueClass::Polar),
    ("LYS", ResidueClass::Positive),
    ("ARG", ResidueClass::Positive),
    ("HIS", ResidueClass::Positive),
    ("ASP", ResidueClass::Negative),
    ("GLU", ResidueClass::Negative),
];

pub fn residue_class(name: &str) -> Option<ResidueClass> {
    CLASS_TABLE
        .iter()
        .find(|(n, _)| n.eq_ignore_ascii_case(name))
        .map(|&(_, c)| c)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ResidueMatching {
    /// Same class; residues outside the table only match their own name.
    #[default]
    Classes,
    /// Identical residue names only.
    Exact,
}

impl ResidueMatching {
    pub fn compatible(self, a: &str, b: &str) -> bool {
        if a.eq_ignore_ascii_case(b) {
            return true;
        }
        match self {
            ResidueMatching::Exact => false,
            ResidueMatching::Classes => match (residue_class(a), residue_class(b)) {
                (Some(x), Some(y)) => x == y,
                _ => false,
            },
        }
    }
}
