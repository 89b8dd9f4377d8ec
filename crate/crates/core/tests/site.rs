mod common;

use nalgebra::Rotation3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use bss_core::ingest::{extract_ligands, LigandFilter, LigandKey, PdbId};
use bss_core::site::{align_sites, extract_binding_site, BindingSite, SiteParams, SiteResidue, SiteSource};
use bss_core::Vec3;

use common::{all_ids, load};

fn fixture_sites() -> Vec<BindingSite> {
    let params = SiteParams::default();
    let mut sites = Vec::new();
    for id in all_ids() {
        let s = load(id);
        for lig in extract_ligands(&s, &LigandFilter::default()) {
            if let Ok(site) = extract_binding_site(&s, &lig, params.site_cutoff) {
                sites.push(site);
            }
        }
    }
    sites
}

fn relabeled(site: &BindingSite, id: &str, motion: impl Fn(Vec3) -> Vec3) -> BindingSite {
    let residues = site
        .residues
        .iter()
        .map(|r| SiteResidue {
            ca: motion(r.ca),
            ..r.clone()
        })
        .collect();
    let source = SiteSource {
        pdb_id: PdbId::parse(id).unwrap(),
        ligand: site.source.ligand.clone(),
    };
    BindingSite::new(source, residues, motion(site.protein_centroid)).unwrap()
}

#[test]
fn every_fixture_ligand_has_a_full_site() {
    let sites = fixture_sites();
    assert!(sites.len() >= 20);
    // the misplaced decoy copy in the winner fixture sits half outside its pocket
    let decoy = |s: &BindingSite| s.source.pdb_id.as_str() == "9w02" && s.source.ligand.residue_seq == 301;
    for s in sites.iter().filter(|s| !decoy(s)) {
        assert!(s.len() >= 10, "{:?} has {} residues", s.source, s.len());
        assert!(s.diameter() < SiteParams::default().dmax);
    }
}

#[test]
fn self_alignment_is_exact() {
    let params = SiteParams::default();
    for s in fixture_sites().iter().filter(|s| s.len() >= params.min_patch) {
        let al = align_sites(s, s, &params).unwrap();
        assert!(al.accepted, "{:?}", s.source);
        assert_eq!(al.correspondence.len(), s.len());
        assert!(al.correspondence.iter().all(|&(i, j)| i == j));
        assert!(al.patch_rmsd.unwrap() < 1e-9);
    }
}

#[test]
fn rigid_copies_align_exactly() {
    let params = SiteParams::default();
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for s in fixture_sites().iter().filter(|s| s.len() >= params.min_patch) {
        let r = Rotation3::from_euler_angles(
            rng.random_range(-3.1..3.1),
            rng.random_range(-1.5..1.5),
            rng.random_range(-3.1..3.1),
        );
        let t = Vec3::new(rng.random_range(-50.0..50.0), rng.random_range(-50.0..50.0), 7.0);
        let copy = relabeled(s, "0cpy", |p| r * p + t);
        for al in [
            align_sites(s, &copy, &params).unwrap(),
            align_sites(&copy, s, &params).unwrap(),
        ] {
            assert!(al.accepted);
            assert_eq!(al.correspondence.len(), s.len());
            assert!(al.correspondence.iter().all(|&(i, j)| i == j));
            assert!(al.patch_rmsd.unwrap() < 1e-6);
        }
    }
}

#[test]
fn acceptance_is_symmetric_on_fixture_pairs() {
    let params = SiteParams::default();
    let sites = fixture_sites();
    let mut accepted = 0;
    for (i, a) in sites.iter().enumerate() {
        for b in &sites[i + 1..] {
            let ab = align_sites(a, b, &params).unwrap();
            let ba = align_sites(b, a, &params).unwrap();
            assert_eq!(ab.accepted, ba.accepted, "{:?} vs {:?}", a.source, b.source);
            assert_eq!(ab.correspondence.len(), ba.correspondence.len());
            accepted += usize::from(ab.accepted);
        }
    }
    // same-template pockets recur across proteins
    assert!(accepted > 0);
}

#[test]
fn random_sites_are_rejected() {
    const NAMES: [&str; 8] = ["ALA", "LEU", "SER", "ASP", "LYS", "PHE", "GLY", "HIS"];
    let params = SiteParams::default();
    let reference = &fixture_sites()[0];
    let mut rejected = 0;
    for seed in 0..100u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(1000 + seed);
        let residues = (0..30)
            .map(|k| SiteResidue {
                residue_name: NAMES[rng.random_range(0..NAMES.len())].to_string(),
                chain: 'R',
                residue_seq: k,
                ca: reference.centroid
                    + Vec3::new(
                        rng.random_range(-10.0..10.0),
                        rng.random_range(-10.0..10.0),
                        rng.random_range(-10.0..10.0),
                    ),
            })
            .collect();
        let source = SiteSource {
            pdb_id: PdbId::parse("0rnd").unwrap(),
            ligand: LigandKey {
                residue_name: "RND".into(),
                chain: 'R',
                residue_seq: seed as i32,
            },
        };
        let random = BindingSite::new(source, residues, reference.protein_centroid).unwrap();
        if !align_sites(reference, &random, &params).unwrap().accepted {
            rejected += 1;
        }
    }
    assert!(rejected >= 95, "only {rejected}/100 random sites rejected");
}
