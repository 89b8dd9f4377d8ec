//! Deterministic synthetic structures.
//!
//! Ligands are induced subgraphs of a slightly puckered honeycomb lattice
//! (fused six-rings with substituents), so bond perception recovers exactly
//! the intended graph. Each ligand template owns a pocket: a bowl of Cα
//! residues lining it. A protein places one pocket per ligand on the surface
//! of a globular filler of residues. The same template in two proteins gets
//! the same pocket up to a rigid motion and a little coordinate noise, so
//! such pairs come out similar while unrelated pockets do not align.

use std::path::{Path, PathBuf};

use nalgebra::{Rotation3, Unit, Vector2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ingest::{write_pdb, Atom, Element, PdbId, Structure};
use crate::{Error, Result, Vec3};

/// Six proteins, fifteen pairs: the benchmark corpus.
pub const CORPUS_IDS: [&str; 6] = ["9s01", "9s02", "9s03", "9s04", "9s05", "9s06"];
/// Protein whose only heteroatoms are waters.
pub const WATER_ONLY_ID: &str = "9h01";
/// Protein with a single 20-heavy-atom ligand.
pub const LARGE_LIGAND_ID: &str = "9l20";
/// Reference protein and a protein holding two copies of the same ligand,
/// one placed badly (seq 301) and one placed well (seq 302) in identical
/// pockets.
pub const WINNER_IDS: [&str; 2] = ["9w01", "9w02"];

const BOND: f64 = 1.45;
const PUCKER: f64 = 0.25;
const POCKET_DISTANCE: f64 = 15.0;
const FILLER_RADIUS: f64 = 17.0;
const GRID: f64 = 3.8;
const SHELL_NOISE: f64 = 0.2;
const LIGAND_NOISE: f64 = 0.1;

const RESIDUES: [&str; 20] = [
    "ALA", "ARG", "ASN", "ASP", "CYS", "GLN", "GLU", "GLY", "HIS", "ILE", "LEU", "LYS", "MET", "PHE", "PRO",
    "SER", "THR", "TRP", "TYR", "VAL",
];

/// Honeycomb vertex: Bravais cell `(a, b)` and sublattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
struct Site(i32, i32, bool);

impl Site {
    fn position(self) -> Vec3 {
        let s3 = 3f64.sqrt();
        let Site(a, b, odd) = self;
        let cell = Vector2::new(s3 * BOND * (a as f64 + b as f64 / 2.0), 1.5 * BOND * b as f64);
        let offset = if odd {
            Vector2::new(s3 / 2.0 * BOND, BOND / 2.0)
        } else {
            Vector2::zeros()
        };
        let p = cell + offset;
        Vec3::new(p.x, p.y, if odd { PUCKER } else { -PUCKER })
    }
}

/// The six corners of the hexagon whose bottom corner is even site `(a, b)`.
fn hexagon(a: i32, b: i32) -> [Site; 6] {
    [
        Site(a, b, false),
        Site(a, b, true),
        Site(a, b + 1, false),
        Site(a - 1, b + 1, true),
        Site(a - 1, b + 1, false),
        Site(a - 1, b, true),
    ]
}

struct Template {
    residue_name: &'static str,
    hexagons: &'static [(i32, i32)],
    /// Extra vertices, or ring vertices whose element differs from carbon.
    decorations: &'static [(Site, Element)],
}

const fn s(a: i32, b: i32, odd: bool) -> Site {
    Site(a, b, odd)
}

const TEMPLATES: [Template; 12] = [
    // two fused rings, two oxygens on one side
    Template {
        residue_name: "NPO",
        hexagons: &[(0, 0), (1, 0)],
        decorations: &[(s(0, -1, true), Element::O), (s(2, 0, false), Element::O)],
    },
    // isomer of the first: same composition, different attachment points
    Template {
        residue_name: "NPI",
        hexagons: &[(0, 0), (1, 0)],
        decorations: &[(s(0, -1, true), Element::O), (s(-1, 2, false), Element::O)],
    },
    // three linear rings, a ring nitrogen, a hydroxymethyl arm
    Template {
        residue_name: "ACN",
        hexagons: &[(0, 0), (1, 0), (2, 0)],
        decorations: &[
            (s(1, 0, true), Element::N),
            (s(-1, 0, false), Element::C),
            (s(-2, 0, true), Element::O),
        ],
    },
    // two rings with an aminoethyl arm
    Template {
        residue_name: "NAM",
        hexagons: &[(0, 0), (1, 0)],
        decorations: &[
            (s(2, 0, false), Element::C),
            (s(2, 0, true), Element::C),
            (s(3, 0, false), Element::N),
        ],
    },
    // three mutually fused rings with two ring nitrogens
    Template {
        residue_name: "PHN",
        hexagons: &[(0, 0), (1, 0), (0, 1)],
        decorations: &[(s(0, 0, false), Element::N), (s(1, 1, false), Element::N)],
    },
    // four rings plus four substituents: twenty heavy atoms
    Template {
        residue_name: "PYX",
        hexagons: &[(0, 0), (1, 0), (0, 1), (1, 1)],
        decorations: &[
            (s(0, -1, true), Element::O),
            (s(1, -1, true), Element::C),
            (s(2, 1, false), Element::N),
            (s(0, 3, false), Element::O),
        ],
    },
    // five catacondensed rings, two ring nitrogens: same composition,
    // different fusion pattern
    Template {
        residue_name: "KLA",
        hexagons: &[(0, 0), (1, 0), (2, 0), (3, 0), (4, 0)],
        decorations: &[(s(0, 0, false), Element::N), (s(3, 1, true), Element::N)],
    },
    Template {
        residue_name: "KAN",
        hexagons: &[(0, 0), (1, 0), (2, 0), (2, 1), (2, 2)],
        decorations: &[(s(0, 0, false), Element::N), (s(1, 3, true), Element::N)],
    },
    Template {
        residue_name: "KST",
        hexagons: &[(0, 0), (1, 0), (1, 1), (2, 1), (3, 1)],
        decorations: &[(s(0, 0, false), Element::N), (s(2, 2, true), Element::N)],
    },
    Template {
        residue_name: "KBT",
        hexagons: &[(0, 0), (1, 0), (2, 0), (3, 0), (3, 1)],
        decorations: &[(s(0, 0, false), Element::N), (s(2, 2, true), Element::N)],
    },
    Template {
        residue_name: "KZG",
        hexagons: &[(0, 0), (0, 1), (1, 1), (1, 2), (2, 2)],
        decorations: &[(s(0, 0, false), Element::N), (s(1, 3, true), Element::N)],
    },
    Template {
        residue_name: "KHK",
        hexagons: &[(0, 0), (1, 0), (1, 1), (1, 2), (2, 2)],
        decorations: &[(s(0, 0, false), Element::N), (s(1, 3, true), Element::N)],
    },
];

/// Ligand atoms (sorted lattice sites) for template `t`.
fn template_sites(t: &Template) -> Vec<(Site, Element)> {
    let mut sites: Vec<(Site, Element)> = Vec::new();
    let mut put = |site: Site, el: Element| match sites.iter_mut().find(|(s, _)| *s == site) {
        Some(slot) => slot.1 = el,
        None => sites.push((site, el)),
    };
    for &(a, b) in t.hexagons {
        for site in hexagon(a, b) {
            put(site, Element::C);
        }
    }
    for &(site, el) in t.decorations {
        put(site, el);
    }
    sites.sort();
    sites
}

/// A template's ligand and lining residues in the pocket frame: the ligand
/// centroid sits at the origin and the pocket opens towards +z.
struct Pocket {
    residue_name: &'static str,
    ligand: Vec<(Element, Vec3)>,
    shell: Vec<(&'static str, Vec3)>,
}

fn random_unit(rng: &mut ChaCha8Rng) -> Vec3 {
    loop {
        let v = Vec3::new(
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
        );
        let n = v.norm();
        if n > 1e-3 && n <= 1.0 {
            return v / n;
        }
    }
}

fn pocket(template: usize) -> Pocket {
    let t = &TEMPLATES[template];
    let sites = template_sites(t);
    let raw: Vec<Vec3> = sites.iter().map(|(s, _)| s.position()).collect();
    let center = raw.iter().sum::<Vec3>() / raw.len() as f64;
    let ligand: Vec<(Element, Vec3)> = sites
        .iter()
        .zip(&raw)
        .map(|((_, el), p)| (*el, p - center))
        .collect();

    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0000 + template as u64);
    let mut shell: Vec<(&'static str, Vec3)> = Vec::new();
    for _ in 0..200_000 {
        if shell.len() == 14 {
            break;
        }
        let anchor = ligand[rng.random_range(0..ligand.len())].1;
        let ca = anchor + random_unit(&mut rng) * rng.random_range(3.8..4.6);
        let nearest = ligand
            .iter()
            .map(|(_, p)| (p - ca).norm())
            .fold(f64::INFINITY, f64::min);
        let ok = nearest >= 3.8
            && ca.norm() <= 7.2
            && ca.z < 1.5
            && shell.iter().all(|(_, q)| (q - ca).norm() >= 4.0);
        if ok {
            shell.push((RESIDUES[rng.random_range(0..RESIDUES.len())], ca));
        }
    }
    assert!(shell.len() >= 12, "pocket {template} too sparse");
    Pocket {
        residue_name: t.residue_name,
        ligand,
        shell,
    }
}

struct Builder {
    rng: ChaCha8Rng,
    atoms: Vec<Atom>,
    next_residue: i32,
    next_ligand: i32,
    next_water: i32,
    ligand_atoms: Vec<Vec3>,
    shell_cas: Vec<Vec3>,
}

fn atom_name(symbol: &str, label: &str) -> String {
    if symbol.len() == 1 && label.len() < 4 {
        format!(" {label:<3}")
    } else {
        format!("{label:<4}")
    }
}

/// Pocket frame → protein frame for a pocket slot: +z becomes outward.
fn slot_frame(slot: usize, spin: f64) -> (Rotation3<f64>, Vec3) {
    const DIRECTIONS: [[f64; 3]; 4] = [
        [1.0, 0.2, 0.1],
        [-0.5, 0.8, 0.33],
        [-0.3, -0.7, 0.6],
        [0.1, -0.3, -0.95],
    ];
    let n = Unit::new_normalize(Vec3::from(DIRECTIONS[slot % DIRECTIONS.len()]));
    let tilt = Rotation3::rotation_between(&Vec3::z(), &n).expect("slot never antiparallel to z");
    let rotation = tilt * Rotation3::from_axis_angle(&Vec3::z_axis(), spin);
    (rotation, n.into_inner() * POCKET_DISTANCE)
}

impl Builder {
    fn new(seed: u64) -> Self {
        Builder {
            rng: ChaCha8Rng::seed_from_u64(seed),
            atoms: Vec::new(),
            next_residue: 1,
            next_ligand: 301,
            next_water: 401,
            ligand_atoms: Vec::new(),
            shell_cas: Vec::new(),
        }
    }

    fn push(
        &mut self,
        name: String,
        element: Element,
        residue_name: &str,
        seq: i32,
        position: Vec3,
        het: bool,
    ) {
        self.atoms.push(Atom {
            serial: 0,
            name,
            element,
            residue_name: residue_name.to_string(),
            chain: 'A',
            residue_seq: seq,
            position,
            is_hetatm: het,
        });
    }

    /// Backbone plus Cβ; `out` points away from whatever the residue lines.
    fn residue(&mut self, name: &str, ca: Vec3, out: Vec3) {
        let out = out.normalize();
        let helper = if out.x.abs() < 0.9 { Vec3::x() } else { Vec3::y() };
        let w = out.cross(&helper).normalize();
        let v = out.cross(&w);
        let seq = self.next_residue;
        self.next_residue += 1;
        let n = ca + 1.46 * (0.33 * out + 0.94 * w);
        let c = ca + 1.52 * (0.33 * out - 0.94 * w);
        let o = c + 1.23 * (0.5 * out + 0.87 * v);
        self.push(" N  ".into(), Element::N, name, seq, n, false);
        self.push(" CA ".into(), Element::C, name, seq, ca, false);
        self.push(" C  ".into(), Element::C, name, seq, c, false);
        self.push(" O  ".into(), Element::O, name, seq, o, false);
        if name != "GLY" {
            self.push(" CB ".into(), Element::C, name, seq, ca + 1.53 * out, false);
        }
    }

    fn jitter(&mut self, amplitude: f64) -> Vec3 {
        Vec3::new(
            self.rng.random_range(-amplitude..=amplitude),
            self.rng.random_range(-amplitude..=amplitude),
            self.rng.random_range(-amplitude..=amplitude),
        )
    }

    /// Place `pocket` at `slot`; the ligand is additionally moved by
    /// `ligand_motion` (a rigid motion in the pocket frame).
    fn place_pocket(
        &mut self,
        pocket: &Pocket,
        slot: usize,
        ligand_motion: (Rotation3<f64>, Vec3),
        shell: bool,
    ) {
        let spin = self.rng.random_range(0.0..std::f64::consts::TAU);
        let (rotation, origin) = slot_frame(slot, spin);
        let to_protein = |p: Vec3| rotation * p + origin;
        if shell {
            for &(name, ca) in &pocket.shell {
                let lig_near = pocket
                    .ligand
                    .iter()
                    .map(|(_, p)| *p)
                    .min_by(|a, b| (a - ca).norm().total_cmp(&(b - ca).norm()))
                    .expect("ligand has atoms");
                let noisy = to_protein(ca) + self.jitter(SHELL_NOISE);
                self.shell_cas.push(noisy);
                self.residue(name, noisy, rotation * (ca - lig_near));
            }
        }
        let seq = self.next_ligand;
        self.next_ligand += 1;
        let (lig_rot, lig_shift) = ligand_motion;
        let mut counts = std::collections::BTreeMap::<&str, usize>::new();
        for &(el, p) in &pocket.ligand {
            let symbol = el.symbol();
            let k = counts.entry(symbol).or_default();
            *k += 1;
            let pos = to_protein(lig_rot * p + lig_shift) + self.jitter(LIGAND_NOISE);
            self.ligand_atoms.push(pos);
            let name = atom_name(symbol, &format!("{}{k}", symbol.to_ascii_uppercase()));
            self.push(name, el, pocket.residue_name, seq, pos, true);
        }
    }

    fn sulfate(&mut self, at: Vec3) {
        let seq = self.next_ligand;
        self.next_ligand += 1;
        self.ligand_atoms.push(at);
        self.push(
            " S  ".into(),
            Element::from_symbol("S").expect("S"),
            "SO4",
            seq,
            at,
            true,
        );
        let d = 1.48 / 3f64.sqrt();
        for (k, sign) in [
            [1.0, 1.0, 1.0],
            [1.0, -1.0, -1.0],
            [-1.0, 1.0, -1.0],
            [-1.0, -1.0, 1.0],
        ]
        .iter()
        .enumerate()
        {
            let p = at + Vec3::from(*sign) * d;
            self.push(format!(" O{} ", k + 1), Element::O, "SO4", seq, p, true);
        }
    }

    fn waters(&mut self, count: usize) {
        for _ in 0..count {
            let p = random_unit(&mut self.rng) * (FILLER_RADIUS + 4.0);
            let seq = self.next_water;
            self.next_water += 1;
            self.push(" O  ".into(), Element::O, "HOH", seq, p, true);
        }
    }

    /// Globular filler: jittered grid inside a ball, kept clear of pockets.
    fn filler(&mut self) {
        let steps = (FILLER_RADIUS / GRID).ceil() as i32;
        for i in -steps..=steps {
            for j in -steps..=steps {
                for k in -steps..=steps {
                    let p = Vec3::new(i as f64, j as f64, k as f64) * GRID;
                    let jitter = self.jitter(0.4);
                    let name = RESIDUES[self.rng.random_range(0..RESIDUES.len())];
                    let out = random_unit(&mut self.rng);
                    let ca = p + jitter;
                    if ca.norm() > FILLER_RADIUS
                        || self.ligand_atoms.iter().any(|l| (l - ca).norm() < 8.0)
                        || self.shell_cas.iter().any(|s| (s - ca).norm() < 4.5)
                    {
                        continue;
                    }
                    self.residue(name, ca, out);
                }
            }
        }
    }

    fn finish(mut self, id: &PdbId) -> Structure {
        // ATOM records first, then HETATM, serials in file order
        self.atoms.sort_by_key(|a| a.is_hetatm);
        for (i, a) in self.atoms.iter_mut().enumerate() {
            a.serial = i as i64 + 1;
        }
        Structure {
            pdb_id: id.clone(),
            atoms: self.atoms,
            conect: Vec::new(),
        }
    }
}

fn identity_motion() -> (Rotation3<f64>, Vec3) {
    (Rotation3::identity(), Vec3::zeros())
}

fn seed_for(id: &str) -> u64 {
    id.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ b as u64).wrapping_mul(0x1000_0000_01b3)
    })
}

/// Every id this module can build.
pub fn known_ids() -> Vec<&'static str> {
    let mut ids = CORPUS_IDS.to_vec();
    ids.extend([WATER_ONLY_ID, LARGE_LIGAND_ID, WINNER_IDS[0], WINNER_IDS[1]]);
    ids
}

/// Build the synthetic structure `id`, or `None` for an unknown id.
pub fn structure(id: &str) -> Option<Structure> {
    let pdb_id = PdbId::parse(id).ok()?;
    let mut b = Builder::new(seed_for(pdb_id.as_str()));
    let plan: &[usize] = match pdb_id.as_str() {
        "9s01" => &[0, 2, 6],
        "9s02" => &[0, 3, 7],
        "9s03" => &[1, 2, 8],
        "9s04" => &[3, 4, 9],
        "9s05" => &[4, 10],
        "9s06" => &[1, 4, 11],
        "9l20" => &[5],
        "9h01" => &[],
        "9w01" => &[0],
        "9w02" => {
            let p = pocket(0);
            // badly placed copy: turned in plane and pushed along the ring axis
            let bad = (
                Rotation3::from_axis_angle(&Vec3::z_axis(), 1.1),
                Vec3::new(1.6, 0.6, 0.3),
            );
            b.place_pocket(&p, 0, bad, true);
            let good = (Rotation3::identity(), Vec3::new(0.6, 0.0, 0.3));
            b.place_pocket(&p, 1, good, true);
            b.filler();
            return Some(b.finish(&pdb_id));
        }
        _ => return None,
    };
    for (slot, &t) in plan.iter().enumerate() {
        b.place_pocket(&pocket(t), slot, identity_motion(), true);
    }
    match pdb_id.as_str() {
        "9s02" | "9s04" => b.sulfate(slot_frame(3, 0.0).1),
        "9s05" | "9h01" => b.waters(12),
        _ => {}
    }
    b.filler();
    Some(b.finish(&pdb_id))
}

/// Write `{id}.pdb` for every id in `ids` into `dir` (created if needed).
pub fn write_structures<S: AsRef<str>>(dir: &Path, ids: &[S]) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    ids.iter()
        .map(|id| {
            let id = id.as_ref();
            let s = structure(id).ok_or_else(|| Error::UnknownPdbId(id.to_string()))?;
            let path = dir.join(format!("{}.pdb", s.pdb_id));
            std::fs::write(&path, write_pdb(&s)).map_err(|e| Error::io(&path, e))?;
            Ok(path)
        })
        .collect()
}

/// Write every known synthetic structure into `dir`.
pub fn write_all(dir: &Path) -> Result<Vec<PathBuf>> {
    write_structures(dir, &known_ids())
}
