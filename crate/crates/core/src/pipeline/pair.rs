//! One protein pair through the whole pipeline: structures, ligands,
//! candidate ligand pairs, site alignment, ligand matching, scoring and
//! winner selection.

use std::cmp::Ordering;
use std::fmt;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::config::PipelineConfig;
use crate::farm::{run_whole, Stage, StagedWork};
use crate::geometry::best_ligand_rmsd;
use crate::graph::{self, MatchKind, MatchOutcome, VertexMapping};
use crate::ingest::{extract_ligands, LigandKey, MolecularGraph, PairTask, PdbId, Structure, StructureStore};
use crate::site::{align_sites, extract_binding_site, BindingSite, SiteAlignment};
use crate::Result;

/// The two ligand-matching functions, injectable so callers can wrap them
/// (for instance to count calls).
pub trait LigandMatcher: Sync {
    fn find_isomorphisms(&self, a: &MolecularGraph, b: &MolecularGraph) -> Vec<VertexMapping> {
        graph::find_isomorphisms(a, b)
    }

    fn find_mcs(&self, a: &MolecularGraph, b: &MolecularGraph) -> MatchOutcome {
        graph::find_mcs(a, b)
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct StandardMatcher;

impl LigandMatcher for StandardMatcher {}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairStatus {
    Similar,
    NotSimilar,
    NoSharedChemistry,
    Error,
}

impl fmt::Display for PairStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PairStatus::Similar => "similar",
            PairStatus::NotSimilar => "not_similar",
            PairStatus::NoSharedChemistry => "no_shared_chemistry",
            PairStatus::Error => "error",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SiteSummary {
    pub residues_a: usize,
    pub residues_b: usize,
    pub correspondence_size: usize,
    pub patch_rmsd: Option<f64>,
    pub surface_vector_angle: Option<f64>,
    pub accepted: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl SiteSummary {
    fn new(a: &BindingSite, b: &BindingSite, alignment: &SiteAlignment) -> Self {
        SiteSummary {
            residues_a: a.len(),
            residues_b: b.len(),
            correspondence_size: alignment.correspondence.len(),
            patch_rmsd: alignment.patch_rmsd,
            surface_vector_angle: alignment.surface_vector_angle,
            accepted: alignment.accepted,
            note: alignment.note.clone(),
        }
    }
}

/// One evaluated candidate ligand pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateReport {
    pub ligand_a: LigandKey,
    pub ligand_b: LigandKey,
    pub match_kind: MatchKind,
    pub mcs_size: usize,
    pub mapping_count: usize,
    pub tanimoto: f64,
    /// Absent when either ligand has no lining residues.
    pub site_alignment: Option<SiteSummary>,
    /// Absent without a site superposition or with fewer than three
    /// matched atoms.
    pub ligand_rmsd: Option<f64>,
}

impl CandidateReport {
    /// Whether `find_mcs` ran for this candidate.
    pub fn used_mcs(&self) -> bool {
        self.match_kind != MatchKind::Isomorphic
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TimingBreakdown {
    /// Candidates resolved by isomorphism.
    pub find_iso_calls: usize,
    /// Time spent in `find_isomorphisms`, over all candidates.
    pub find_iso_seconds: f64,
    /// Candidates with no isomorphism, for which `find_mcs` ran.
    pub find_mcs_calls: usize,
    pub find_mcs_seconds: f64,
    /// Summed work time of every stage of the pair.
    pub total_seconds: f64,
    pub remaining_seconds: f64,
}

impl TimingBreakdown {
    fn close(&mut self, total_seconds: f64) {
        self.total_seconds = total_seconds.max(self.find_iso_seconds + self.find_mcs_seconds);
        self.remaining_seconds =
            (self.total_seconds - self.find_iso_seconds - self.find_mcs_seconds).max(0.0);
    }

    pub fn without_seconds(&self) -> Self {
        TimingBreakdown {
            find_iso_calls: self.find_iso_calls,
            find_mcs_calls: self.find_mcs_calls,
            ..TimingBreakdown::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairResult {
    pub index: usize,
    pub id_a: PdbId,
    pub id_b: PdbId,
    pub status: PairStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    pub ligands_a: usize,
    pub ligands_b: usize,
    pub best_ligand_pair: Option<(LigandKey, LigandKey)>,
    pub match_kind: Option<MatchKind>,
    pub tanimoto: Option<f64>,
    pub ligand_rmsd: Option<f64>,
    pub site_alignment: Option<SiteSummary>,
    pub candidates: Vec<CandidateReport>,
    pub timing: TimingBreakdown,
}

impl PairResult {
    fn bare(task: &PairTask, status: PairStatus) -> Self {
        PairResult {
            index: task.index,
            id_a: task.id_a.clone(),
            id_b: task.id_b.clone(),
            status,
            message: None,
            ligands_a: 0,
            ligands_b: 0,
            best_ligand_pair: None,
            match_kind: None,
            tanimoto: None,
            ligand_rmsd: None,
            site_alignment: None,
            candidates: Vec::new(),
            timing: TimingBreakdown::default(),
        }
    }

    pub fn error(task: &PairTask, message: impl Into<String>) -> Self {
        PairResult {
            message: Some(message.into()),
            ..PairResult::bare(task, PairStatus::Error)
        }
    }

    /// The same record with every wall-clock field zeroed; what remains is
    /// fully determined by the inputs and parameters.
    pub fn without_timings(&self) -> Self {
        PairResult {
            timing: self.timing.without_seconds(),
            ..self.clone()
        }
    }

    pub fn winner(&self) -> Option<&CandidateReport> {
        let (a, b) = self.best_ligand_pair.as_ref()?;
        self.candidates
            .iter()
            .find(|c| &c.ligand_a == a && &c.ligand_b == b)
    }
}

/// Candidate preference: higher tanimoto, then lower LigandRMSD (missing
/// counts as infinite), then ligand keys. `Less` means `x` is preferred.
pub fn candidate_order(x: &CandidateReport, y: &CandidateReport) -> Ordering {
    let rmsd = |c: &CandidateReport| c.ligand_rmsd.unwrap_or(f64::INFINITY);
    y.tanimoto
        .total_cmp(&x.tanimoto)
        .then_with(|| rmsd(x).total_cmp(&rmsd(y)))
        .then_with(|| (&x.ligand_a, &x.ligand_b).cmp(&(&y.ligand_a, &y.ligand_b)))
}

/// Root-side state of a pair between the prepare and finish stages.
pub struct PreparedPair {
    ligands_a: Vec<MolecularGraph>,
    ligands_b: Vec<MolecularGraph>,
    sites_a: Vec<Option<BindingSite>>,
    sites_b: Vec<Option<BindingSite>>,
    prepare_seconds: f64,
}

/// Outcome of one candidate evaluation, with its stage timings.
pub struct Evaluation {
    report: CandidateReport,
    iso_seconds: f64,
    mcs_seconds: f64,
    total_seconds: f64,
}

/// Ligands sharing an element multiset; every cross pair when none do.
pub fn candidate_pairs(a: &[MolecularGraph], b: &[MolecularGraph]) -> Vec<(usize, usize)> {
    let all = || (0..a.len()).flat_map(move |i| (0..b.len()).map(move |j| (i, j)));
    let counts_b: Vec<_> = b.iter().map(MolecularGraph::element_counts).collect();
    let matching: Vec<(usize, usize)> = a
        .iter()
        .enumerate()
        .flat_map(|(i, la)| {
            let ca = la.element_counts();
            counts_b
                .iter()
                .enumerate()
                .filter(move |(_, cb)| **cb == ca)
                .map(move |(j, _)| (i, j))
        })
        .collect();
    if matching.is_empty() {
        all().collect()
    } else {
        matching
    }
}

pub struct PairPipeline<'a, M = StandardMatcher> {
    store: &'a StructureStore,
    config: &'a PipelineConfig,
    matcher: M,
}

impl<'a> PairPipeline<'a> {
    pub fn new(store: &'a StructureStore, config: &'a PipelineConfig) -> Self {
        PairPipeline::with_matcher(store, config, StandardMatcher)
    }
}

impl<'a, M: LigandMatcher> PairPipeline<'a, M> {
    pub fn with_matcher(store: &'a StructureStore, config: &'a PipelineConfig, matcher: M) -> Self {
        PairPipeline {
            store,
            config,
            matcher,
        }
    }

    pub fn config(&self) -> &PipelineConfig {
        self.config
    }

    pub fn store(&self) -> &StructureStore {
        self.store
    }

    pub fn matcher(&self) -> &M {
        &self.matcher
    }

    fn sites(&self, structure: &Structure, ligands: &[MolecularGraph]) -> Vec<Option<BindingSite>> {
        ligands
            .iter()
            .map(|l| extract_binding_site(structure, l, self.config.site.site_cutoff).ok())
            .collect()
    }

    fn load_pair(&self, task: &PairTask) -> Result<(std::sync::Arc<Structure>, std::sync::Arc<Structure>)> {
        Ok((self.store.load(&task.id_a)?, self.store.load(&task.id_b)?))
    }
}

fn seconds_since(t: Instant) -> f64 {
    t.elapsed().as_secs_f64()
}

impl<M: LigandMatcher> StagedWork for PairPipeline<'_, M> {
    type Task = PairTask;
    type Prepared = PreparedPair;
    type Item = (usize, usize);
    type ItemOutput = Evaluation;
    type Output = PairResult;

    fn prepare(&self, task: &PairTask) -> Stage<PreparedPair, (usize, usize), PairResult> {
        let start = Instant::now();
        let (sa, sb) = match self.load_pair(task) {
            Ok(pair) => pair,
            Err(e) => {
                let mut r = PairResult::error(task, e.to_string());
                r.timing.close(seconds_since(start));
                return Stage::Done(r);
            }
        };
        let ligands_a = extract_ligands(&sa, &self.config.ligand_filter);
        let ligands_b = extract_ligands(&sb, &self.config.ligand_filter);
        if ligands_a.is_empty() || ligands_b.is_empty() {
            let mut r = PairResult {
                ligands_a: ligands_a.len(),
                ligands_b: ligands_b.len(),
                ..PairResult::bare(task, PairStatus::NoSharedChemistry)
            };
            r.timing.close(seconds_since(start));
            return Stage::Done(r);
        }
        let items = candidate_pairs(&ligands_a, &ligands_b);
        let prepared = PreparedPair {
            sites_a: self.sites(&sa, &ligands_a),
            sites_b: self.sites(&sb, &ligands_b),
            ligands_a,
            ligands_b,
            prepare_seconds: 0.0,
        };
        Stage::Fanout {
            prepared: PreparedPair {
                prepare_seconds: seconds_since(start),
                ..prepared
            },
            items,
        }
    }

    fn process(&self, prepared: &PreparedPair, &(i, j): &(usize, usize)) -> Evaluation {
        let start = Instant::now();
        let (la, lb) = (&prepared.ligands_a[i], &prepared.ligands_b[j]);
        let alignment = match (&prepared.sites_a[i], &prepared.sites_b[j]) {
            (Some(a), Some(b)) => align_sites(a, b, &self.config.site)
                .ok()
                .map(|al| (SiteSummary::new(a, b, &al), al)),
            _ => None,
        };

        let t = Instant::now();
        let isomorphisms = self.matcher.find_isomorphisms(la, lb);
        let iso_seconds = seconds_since(t);
        let mut mcs_seconds = 0.0;
        let outcome = if isomorphisms.is_empty() {
            let t = Instant::now();
            let outcome = self.matcher.find_mcs(la, lb);
            mcs_seconds = seconds_since(t);
            outcome
        } else {
            MatchOutcome::isomorphic(la, isomorphisms)
        };

        let ligand_rmsd = alignment
            .as_ref()
            .and_then(|(_, al)| al.superposition.as_ref())
            .and_then(|s| best_ligand_rmsd(la.positions(), lb.positions(), s, &outcome.mappings))
            .map(|(_, score)| score.ligand_rmsd);

        Evaluation {
            report: CandidateReport {
                ligand_a: la.key.clone(),
                ligand_b: lb.key.clone(),
                match_kind: outcome.kind,
                mcs_size: outcome.mcs_size,
                mapping_count: outcome.mappings.len(),
                tanimoto: outcome.tanimoto,
                site_alignment: alignment.map(|(summary, _)| summary),
                ligand_rmsd,
            },
            iso_seconds,
            mcs_seconds,
            total_seconds: seconds_since(start),
        }
    }

    fn finish(
        &self,
        task: &PairTask,
        prepared: PreparedPair,
        outputs: Vec<std::result::Result<Evaluation, String>>,
    ) -> PairResult {
        let start = Instant::now();
        let mut timing = TimingBreakdown::default();
        let mut work_seconds = prepared.prepare_seconds;
        let mut candidates = Vec::with_capacity(outputs.len());
        let mut failures = Vec::new();
        for output in outputs {
            match output {
                Ok(e) => {
                    if e.report.used_mcs() {
                        timing.find_mcs_calls += 1;
                    } else {
                        timing.find_iso_calls += 1;
                    }
                    timing.find_iso_seconds += e.iso_seconds;
                    timing.find_mcs_seconds += e.mcs_seconds;
                    work_seconds += e.total_seconds;
                    candidates.push(e.report);
                }
                Err(msg) => failures.push(msg),
            }
        }

        let mut result = PairResult {
            ligands_a: prepared.ligands_a.len(),
            ligands_b: prepared.ligands_b.len(),
            ..PairResult::bare(task, PairStatus::NotSimilar)
        };
        if !failures.is_empty() {
            result.message = Some(format!(
                "{} candidate evaluation(s) failed: {}",
                failures.len(),
                failures.join("; ")
            ));
        }
        match candidates.iter().min_by(|x, y| candidate_order(x, y)) {
            None => result.status = PairStatus::Error,
            Some(w) => {
                let similar = w.site_alignment.as_ref().is_some_and(|s| s.accepted)
                    && w.ligand_rmsd.is_some_and(|r| r <= self.config.ligand_rmsd_cutoff);
                result.status = if similar {
                    PairStatus::Similar
                } else {
                    PairStatus::NotSimilar
                };
                result.best_ligand_pair = Some((w.ligand_a.clone(), w.ligand_b.clone()));
                result.match_kind = Some(w.match_kind);
                result.tanimoto = Some(w.tanimoto);
                result.ligand_rmsd = w.ligand_rmsd;
                result.site_alignment = w.site_alignment.clone();
            }
        }
        result.candidates = candidates;
        timing.close(work_seconds + seconds_since(start));
        result.timing = timing;
        result
    }
}

/// Run one pair sequentially on the calling thread.
pub fn run_pair(task: &PairTask, config: &PipelineConfig, store: &StructureStore) -> PairResult {
    run_whole(&PairPipeline::new(store, config), task)
}
