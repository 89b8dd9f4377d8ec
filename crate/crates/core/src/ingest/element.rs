//! Element symbols and single-bond covalent radii.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Symbol and covalent radius in Å. Hydrogen isotopes share the H radius.
const TABLE: &[(&str, f64)] = &[
    ("H", 0.37),
    ("D", 0.37),
    ("He", 0.32),
    ("Li", 1.23),
    ("Be", 0.90),
    ("B", 0.82),
    ("C", 0.77),
    ("N", 0.75),
    ("O", 0.73),
    ("F", 0.71),
    ("Ne", 0.69),
    ("Na", 1.54),
    ("Mg", 1.30),
    ("Al", 1.18),
    ("Si", 1.11),
    ("P", 1.06),
    ("S", 1.02),
    ("Cl", 0.99),
    ("Ar", 0.97),
    ("K", 1.96),
    ("Ca", 1.74),
    ("Sc", 1.44),
    ("Ti", 1.36),
    ("V", 1.25),
    ("Cr", 1.27),
    ("Mn", 1.39),
    ("Fe", 1.25),
    ("Co", 1.26),
    ("Ni", 1.21),
    ("Cu", 1.38),
    ("Zn", 1.31),
    ("Ga", 1.26),
    ("Ge", 1.22),
    ("As", 1.19),
    ("Se", 1.16),
    ("Br", 1.14),
    ("Kr", 1.10),
    ("Rb", 2.11),
    ("Sr", 1.92),
    ("Y", 1.62),
    ("Zr", 1.48),
    ("Mo", 1.45),
    ("Ru", 1.26),
    ("Rh", 1.35),
    ("Pd", 1.31),
    ("Ag", 1.53),
    ("Cd", 1.48),
    ("In", 1.44),
    ("Sn", 1.41),
    ("Sb", 1.38),
    ("Te", 1.35),
    ("I", 1.33),
    ("Xe", 1.30),
    ("Cs", 2.25),
    ("Ba", 1.98),
    ("Gd", 1.61),
    ("W", 1.46),
    ("Re", 1.59),
    ("Os", 1.28),
    ("Ir", 1.37),
    ("Pt", 1.28),
    ("Au", 1.44),
    ("Hg", 1.49),
    ("Tl", 1.48),
    ("Pb", 1.47),
    ("Bi", 1.46),
    ("U", 1.42),
];

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Element(u8);

impl Element {
    pub const H: Element = Element(0);
    pub const C: Element = Element(6);
    pub const N: Element = Element(7);
    pub const O: Element = Element(8);

    /// Case-insensitive lookup ("FE", "fe" and "Fe" all resolve to iron).
    pub fn from_symbol(symbol: &str) -> Option<Element> {
        let symbol = symbol.trim();
        TABLE
            .iter()
            .position(|(s, _)| s.eq_ignore_ascii_case(symbol))
            .map(|i| Element(i as u8))
    }

    pub fn symbol(self) -> &'static str {
        TABLE[self.0 as usize].0
    }

    pub fn covalent_radius(self) -> f64 {
        TABLE[self.0 as usize].1
    }

    pub fn is_hydrogen(self) -> bool {
        self.0 <= 1
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

impl Serialize for Element {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.symbol())
    }
}

impl<'de> Deserialize<'de> for Element {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        Element::from_symbol(&s).ok_or_else(|| serde::de::Error::custom(format!("unknown element '{s}'")))
    }
}
