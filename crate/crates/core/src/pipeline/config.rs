use serde::{Deserialize, Serialize};

use crate::ingest::LigandFilter;
use crate::site::SiteParams;
use crate::{Error, Result};

/// Every tunable threshold of a pipeline run; echoed into the run manifest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub site: SiteParams,
    pub ligand_filter: LigandFilter,
    /// Upper bound on LigandRMSD for a pair to be called similar, Å.
    pub ligand_rmsd_cutoff: f64,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            site: SiteParams::default(),
            ligand_filter: LigandFilter::default(),
            ligand_rmsd_cutoff: 2.0,
        }
    }
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<()> {
        let s = &self.site;
        let positive = [
            ("site cutoff", s.site_cutoff),
            ("eps", s.eps),
            ("dmax", s.dmax),
            ("patch rmsd cutoff", s.patch_rmsd_cutoff),
        ];
        for (name, v) in positive {
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::InvalidConfig(format!("{name} must be positive, got {v}")));
            }
        }
        if !(0.0..=180.0).contains(&s.angle_cutoff) {
            return Err(Error::InvalidConfig(format!(
                "angle cutoff must lie in [0, 180], got {}",
                s.angle_cutoff
            )));
        }
        if s.min_patch < 3 {
            return Err(Error::InvalidConfig("min patch must be at least 3".into()));
        }
        if self.ligand_rmsd_cutoff.is_nan() || self.ligand_rmsd_cutoff < 0.0 {
            return Err(Error::InvalidConfig(format!(
                "ligand rmsd cutoff must be non-negative, got {}",
                self.ligand_rmsd_cutoff
            )));
        }
        Ok(())
    }
}
