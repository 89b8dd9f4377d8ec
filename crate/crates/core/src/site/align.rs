//! Local alignment of two binding sites: residue-pair product graph,
//! maximum clique, Kabsch superposition of the corresponded Cα atoms.

use serde::{Deserialize, Serialize};

use super::extract::BindingSite;
use super::residue::ResidueMatching;
use crate::geometry::{apply, centroid, kabsch, rmsd, Superposition};
use crate::graph::{max_clique, CompatGraph};
use crate::{Error, Result, Vec3};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SiteParams {
    /// Heavy-atom distance defining a lining residue, Å.
    pub site_cutoff: f64,
    /// Maximum difference between corresponding intra-site distances, Å.
    pub eps: f64,
    /// Intra-site Cα pairs at or beyond this distance are not constrained, Å.
    pub dmax: f64,
    pub min_patch: usize,
    pub patch_rmsd_cutoff: f64,
    pub angle_cutoff: f64,
    pub residue_matching: ResidueMatching,
}

impl Default for SiteParams {
    fn default() -> Self {
        SiteParams {
            site_cutoff: 5.0,
            eps: 1.0,
            dmax: 15.0,
            min_patch: 10,
            patch_rmsd_cutoff: 2.0,
            angle_cutoff: 90.0,
            residue_matching: ResidueMatching::Classes,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SiteAlignment {
    /// `(residue index in A, residue index in B)`, sorted by the A index.
    pub correspondence: Vec<(usize, usize)>,
    /// Maps site B onto site A. Absent with fewer than three equivalences.
    pub superposition: Option<Superposition>,
    pub patch_rmsd: Option<f64>,
    pub surface_vector_angle: Option<f64>,
    pub accepted: bool,
    pub note: Option<String>,
}

fn distance_matrix(points: &[Vec3]) -> Vec<Vec<f64>> {
    points
        .iter()
        .map(|a| points.iter().map(|b| (a - b).norm()).collect())
        .collect()
}

/// Residue-pair compatibility graph. `(i, j)` and `(k, l)` are adjacent iff
/// `i != k`, `j != l`, both intra-site distances are below `dmax` and they
/// differ by at most `eps`.
pub fn build_site_product_graph(
    a: &BindingSite,
    b: &BindingSite,
    eps: f64,
    dmax: f64,
    matching: ResidueMatching,
) -> CompatGraph {
    let da = distance_matrix(&a.ca_positions());
    let db = distance_matrix(&b.ca_positions());
    let mut pairs = Vec::new();
    for (i, ra) in a.residues.iter().enumerate() {
        for (j, rb) in b.residues.iter().enumerate() {
            if matching.compatible(&ra.residue_name, &rb.residue_name) {
                pairs.push((i, j));
            }
        }
    }
    CompatGraph::from_predicate(pairs, |(i, j), (k, l)| {
        i != k && j != l && da[i][k] < dmax && db[j][l] < dmax && (da[i][k] - db[j][l]).abs() <= eps
    })
}

/// Angle in degrees, `[0, 180]`, between two non-zero vectors.
pub fn angle_between(u: &Vec3, v: &Vec3) -> Result<f64> {
    let (nu, nv) = (u.norm(), v.norm());
    if nu < 1e-9 || nv < 1e-9 {
        return Err(Error::DegenerateSurfaceVector);
    }
    Ok((u.dot(v) / (nu * nv)).clamp(-1.0, 1.0).acos().to_degrees())
}

/// Angle between the two outward site vectors after superposition.
///
/// Each site's vector runs from its protein centroid to the centroid of the
/// corresponded patch. This is a cheap stand-in for a true surface normal.
pub fn surface_vector_angle(
    a: &BindingSite,
    b: &BindingSite,
    correspondence: &[(usize, usize)],
    superposition: &Superposition,
) -> Result<f64> {
    if correspondence.is_empty() {
        return Err(Error::InsufficientCorrespondence(0));
    }
    let patch_a: Vec<Vec3> = correspondence.iter().map(|&(i, _)| a.residues[i].ca).collect();
    let patch_b: Vec<Vec3> = correspondence.iter().map(|&(_, j)| b.residues[j].ca).collect();
    let va = centroid(&patch_a) - a.protein_centroid;
    let vb = superposition.rotation * (centroid(&patch_b) - b.protein_centroid);
    angle_between(&va, &vb)
}

/// Align two sites. The result does not depend on argument order: the pair
/// is solved in a canonical orientation and transposed back if needed.
pub fn align_sites(a: &BindingSite, b: &BindingSite, params: &SiteParams) -> Result<SiteAlignment> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptyBindingSite);
    }
    if b.source < a.source {
        let flipped = align_oriented(b, a, params);
        return Ok(transpose(flipped, a, b));
    }
    Ok(align_oriented(a, b, params))
}

fn align_oriented(a: &BindingSite, b: &BindingSite, params: &SiteParams) -> SiteAlignment {
    let graph = build_site_product_graph(a, b, params.eps, params.dmax, params.residue_matching);
    let mut correspondence: Vec<(usize, usize)> =
        max_clique(&graph).into_iter().map(|v| graph.pair(v)).collect();
    correspondence.sort_unstable();

    let rejected = |correspondence, note: &str| SiteAlignment {
        correspondence,
        superposition: None,
        patch_rmsd: None,
        surface_vector_angle: None,
        accepted: false,
        note: Some(note.to_string()),
    };
    if correspondence.len() < 3 {
        return rejected(correspondence, "too few equivalent points");
    }
    let (p, q) = corresponded(a, b, &correspondence);
    let Ok(superposition) = kabsch(&p, &q) else {
        return rejected(correspondence, "degenerate correspondence");
    };
    let patch_rmsd = superposition.rmsd;
    let angle = surface_vector_angle(a, b, &correspondence, &superposition).ok();
    let accepted = correspondence.len() >= params.min_patch
        && patch_rmsd <= params.patch_rmsd_cutoff
        && angle.is_some_and(|x| x <= params.angle_cutoff);
    SiteAlignment {
        correspondence,
        superposition: Some(superposition),
        patch_rmsd: Some(patch_rmsd),
        surface_vector_angle: angle,
        accepted,
        note: angle.is_none().then(|| "degenerate surface vector".to_string()),
    }
}

fn corresponded(a: &BindingSite, b: &BindingSite, c: &[(usize, usize)]) -> (Vec<Vec3>, Vec<Vec3>) {
    c.iter()
        .map(|&(i, j)| (a.residues[i].ca, b.residues[j].ca))
        .unzip()
}

/// Turn an alignment of (b, a) into one of (a, b).
fn transpose(flipped: SiteAlignment, a: &BindingSite, b: &BindingSite) -> SiteAlignment {
    let mut correspondence: Vec<(usize, usize)> =
        flipped.correspondence.iter().map(|&(j, i)| (i, j)).collect();
    correspondence.sort_unstable();
    let superposition = flipped.superposition.map(|s| {
        let rotation = s.rotation.transpose();
        let translation = -(rotation * s.translation);
        let mut inverse = Superposition {
            rotation,
            translation,
            rmsd: 0.0,
        };
        let (p, q) = corresponded(a, b, &correspondence);
        inverse.rmsd = rmsd(&p, &apply(&inverse, &q)).expect("equal lengths");
        inverse
    });
    SiteAlignment {
        patch_rmsd: superposition.as_ref().map(|s| s.rmsd),
        correspondence,
        superposition,
        ..flipped
    }
}
