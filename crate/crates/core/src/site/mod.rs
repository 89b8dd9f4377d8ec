//! Binding-site extraction and local structural alignment.

mod align;
mod extract;
mod residue;

pub use align::{
    align_sites, angle_between, build_site_product_graph, surface_vector_angle, SiteAlignment, SiteParams,
};
pub use extract::{extract_binding_site, BindingSite, SiteResidue, SiteSource};
pub use residue::{residue_class, ResidueClass, ResidueMatching};
