//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Each check uses an oracle independent of the code under test.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::{Command, ExitCode};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use nalgebra::{Matrix3, Quaternion, UnitQuaternion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use bss_core::farm::{Barrier, FarmConfig, Level, Strategy};
use bss_core::geometry::kabsch;
use bss_core::graph::{self, find_isomorphisms, find_mcs, MatchOutcome, VertexMapping};
use bss_core::ingest::{
    extract_ligands, unique_pairs, Element, FetchConfig, LigandFilter, MolecularGraph, PdbId, StructureStore,
};
use bss_core::pipeline::{
    available_cores, breakdown_report, run_corpus, run_corpus_with, LigandMatcher, PairPipeline, PairResult,
    PipelineConfig,
};
use bss_core::site::{align_sites, extract_binding_site, BindingSite, SiteParams, SiteResidue, SiteSource};
use bss_core::{synth, Vec3};

/// Acceptance thresholds.
mod tol {
    use std::time::Duration;

    /// Wall-clock budgets per criterion.
    pub const FAST: Duration = Duration::from_secs(1);
    pub const PIPELINE: Duration = Duration::from_secs(300);
    pub const GRAPH: Duration = Duration::from_secs(120);
    pub const KABSCH: Duration = Duration::from_secs(60);

    /// Reference means are compared digit for digit.
    pub const TABLE1_MEAN: &str = "226.8771076";
    pub const TABLE3_MEAN: &str = "165.9440496";
    pub const TABLE2_MEAN: f64 = 208.4812;
    pub const TABLE2_MEAN_TOL: f64 = 1e-4;
    /// Recomputed from the table's own samples, not its printed average.
    pub const TABLE4_MEAN: f64 = 148.3517;
    pub const TABLE4_MEAN_TOL: f64 = 1e-3;
    pub const HALF_WIDTHS: [f64; 3] = [1.94, 0.81, 0.90];
    pub const HALF_WIDTH_TOL: f64 = 0.01;

    pub const SPEEDUP_PERCENT: f64 = 8.1;
    pub const SPEEDUP_TOL: f64 = 0.1;

    pub const SCALING_MIN_CORES: usize = 4;
    pub const SCALING_MAX_RATIO: f64 = 0.5;

    pub const KABSCH_SLACK: f64 = 1e-9;
    pub const FRAME: f64 = 1e-9;

    pub const SHARE_SUM: f64 = 0.1;

    pub const SELF_RMSD: f64 = 1e-9;
    pub const COPY_RMSD: f64 = 1e-6;
    pub const MIN_SITE_RESIDUES: usize = 10;
}

enum Verdict {
    Pass(String),
    Fail(String),
    NotEvaluated(String),
}

use Verdict::{Fail, NotEvaluated, Pass};

fn verdict(ok: bool, detail: String) -> Verdict {
    if ok {
        Pass(detail)
    } else {
        Fail(detail)
    }
}

struct Env {
    dir: tempfile::TempDir,
}

impl Env {
    fn store(&self) -> StructureStore {
        StructureStore::new(FetchConfig::new(self.dir.path()).offline(true))
    }
}

fn bss(args: &[&str]) -> (bool, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_bss"))
        .args(args)
        .output()
        .expect("spawn bss");
    (
        out.status.success(),
        String::from_utf8_lossy(&out.stdout).into_owned(),
    )
}

// ---------------------------------------------------------------- 1

const STUDY_IDS: [&str; 6] = ["1iei", "1z89", "3p2v", "3kwb", "2bdl", "2auz"];

fn pair_count(_: &Env) -> Verdict {
    let start = Instant::now();
    let (ok, out) = bss(&[&["pairs"][..], &STUDY_IDS[..]].concat());
    let elapsed = start.elapsed();
    let rows = out
        .lines()
        .filter(|l| l.starts_with(|c: char| c.is_ascii_digit()))
        .count();
    let printed = out.lines().any(|l| l.trim() == "pairs: 15");

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let alphabet: Vec<char> = ('a'..='z').chain('0'..='9').collect();
    let mut formula_ok = true;
    for n in 2..=50usize {
        let mut ids = BTreeSet::new();
        while ids.len() < n {
            let mut id = rng.random_range(1..10).to_string();
            id.extend((0..3).map(|_| alphabet[rng.random_range(0..alphabet.len())]));
            ids.insert(id);
        }
        let ids: Vec<String> = ids.into_iter().collect();
        let tasks = unique_pairs(&ids).unwrap();
        let distinct: BTreeSet<(String, String)> = tasks
            .iter()
            .map(|t| (t.id_a.to_string(), t.id_b.to_string()))
            .filter(|(a, b)| a < b)
            .collect();
        formula_ok &= tasks.len() == n * (n - 1) / 2 && distinct.len() == tasks.len();
    }
    verdict(
        ok && printed && rows == 15 && formula_ok && elapsed < tol::FAST,
        format!(
            "bss pairs printed {rows} pairs in {:.3} s; n(n-1)/2 holds for n = 2..50: {formula_ok}",
            elapsed.as_secs_f64()
        ),
    )
}

// ---------------------------------------------------------------- 2, 3

/// Reference timing tables: tab-separated, decimal comma.
const TABLES: [(&str, [&str; 5]); 4] = [
    (
        "t1",
        [
            "225,392034",
            "224,697258",
            "225,952008",
            "229,972001",
            "228,372237",
        ],
    ),
    (
        "t2",
        [
            "208,757258",
            "208,045365",
            "207,767564",
            "209,978678",
            "207,857208",
        ],
    ),
    (
        "t3",
        [
            "165,289306",
            "165,603692",
            "166,597197",
            "164,852996",
            "167,377057",
        ],
    ),
    (
        "t4",
        [
            "148,991805",
            "147,961708",
            "148,786597",
            "147,564523",
            "148,453654",
        ],
    ),
];

struct Injected {
    means: Vec<String>,
    widths: Vec<f64>,
    speedups: Vec<f64>,
}

fn inject(dir: &Path) -> Option<Injected> {
    let mut args = vec!["bench".to_string()];
    for (name, rows) in TABLES {
        let path = dir.join(format!("{name}.tsv"));
        let mut text = String::from("EXECUTIONS\tTIME(seconds)\n");
        for (i, r) in rows.iter().enumerate() {
            text.push_str(&format!("{}\t{r}\n", i + 1));
        }
        std::fs::write(&path, text).ok()?;
        args.push("--inject".into());
        args.push(path.display().to_string());
    }
    let args: Vec<&str> = args.iter().map(String::as_str).collect();
    let (ok, out) = bss(&args);
    if !ok {
        return None;
    }
    let field = |prefix: &str| -> Vec<String> {
        out.lines()
            .filter_map(|l| l.strip_prefix(prefix))
            .map(|v| v.split_whitespace().next().unwrap_or("").to_string())
            .collect()
    };
    Some(Injected {
        means: field("mean_seconds: "),
        widths: field("ci95_half_width: ")
            .iter()
            .filter_map(|v| v.parse().ok())
            .collect(),
        speedups: field("speedup_percent: ")
            .iter()
            .filter_map(|v| v.parse().ok())
            .collect(),
    })
}

fn statistics(env: &Env) -> Verdict {
    let start = Instant::now();
    let Some(r) = inject(env.dir.path()) else {
        return Fail("bss bench --inject failed".into());
    };
    if r.means.len() != 4 || r.widths.len() != 4 {
        return Fail(format!("expected four summaries, got {}", r.means.len()));
    }
    let mean = |k: usize| r.means[k].parse::<f64>().unwrap_or(f64::NAN);
    let checks = [
        r.means[0] == tol::TABLE1_MEAN,
        (mean(1) - tol::TABLE2_MEAN).abs() <= tol::TABLE2_MEAN_TOL,
        r.means[2] == tol::TABLE3_MEAN,
        (mean(3) - tol::TABLE4_MEAN).abs() <= tol::TABLE4_MEAN_TOL,
        (0..3).all(|k| (r.widths[k] - tol::HALF_WIDTHS[k]).abs() <= tol::HALF_WIDTH_TOL),
    ];
    let elapsed = start.elapsed();
    verdict(
        checks.iter().all(|&c| c) && elapsed < tol::FAST,
        format!(
            "means {} / {} / {} / {}, half-widths {:.4} / {:.4} / {:.4} / {:.4} in {:.3} s \
             (fourth table recomputed from its samples; its printed average 147.84 does not match them)",
            r.means[0],
            r.means[1],
            r.means[2],
            r.means[3],
            r.widths[0],
            r.widths[1],
            r.widths[2],
            r.widths[3],
            elapsed.as_secs_f64()
        ),
    )
}

fn speedup(env: &Env) -> Verdict {
    let Some(r) = inject(env.dir.path()) else {
        return Fail("bss bench --inject failed".into());
    };
    let Some(&s) = r.speedups.first() else {
        return Fail("no speedup printed".into());
    };
    // oracle: the same percentage from the raw samples
    let avg = |rows: &[&str; 5]| {
        rows.iter()
            .map(|x| x.replace(',', ".").parse::<f64>().unwrap())
            .sum::<f64>()
            / 5.0
    };
    let (a, b) = (avg(&TABLES[0].1), avg(&TABLES[1].1));
    let oracle = 100.0 * (a - b) / a;
    verdict(
        (s - tol::SPEEDUP_PERCENT).abs() <= tol::SPEEDUP_TOL && (s - oracle).abs() < 1e-3,
        format!("second vs first table: {s:.4}% (direct {oracle:.4}%)"),
    )
}

// ---------------------------------------------------------------- 4

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    xs[xs.len() / 2]
}

fn scaling(env: &Env) -> Verdict {
    let config = PipelineConfig::default();
    let ids = synth::CORPUS_IDS;
    let time = |workers: usize| -> Vec<f64> {
        let farm = FarmConfig::new(workers, Strategy::Broadcast, Level::One).unwrap();
        (0..5)
            .map(|_| {
                run_corpus(&ids, &config, &farm, &env.store())
                    .unwrap()
                    .manifest
                    .wall_seconds
            })
            .collect()
    };
    let one = median(time(1));
    let four = median(time(4));
    let ratio = four / one;
    let detail = format!(
        "15 pairs, median of 5: 1 worker {one:.3} s, 4 workers {four:.3} s, ratio {ratio:.3} (bound {}); {} core(s) available",
        tol::SCALING_MAX_RATIO,
        available_cores()
    );
    if available_cores() < tol::SCALING_MIN_CORES {
        NotEvaluated(format!("needs >= {} cores; {detail}", tol::SCALING_MIN_CORES))
    } else {
        verdict(ratio <= tol::SCALING_MAX_RATIO, detail)
    }
}

fn layout_invariance(env: &Env) -> Verdict {
    let start = Instant::now();
    let config = PipelineConfig::default();
    let ids = synth::CORPUS_IDS;
    let bytes = |level, strategy, workers| -> Vec<u8> {
        let farm = FarmConfig::new(workers, strategy, level).unwrap();
        let run = run_corpus(&ids, &config, &farm, &env.store()).unwrap();
        let stripped: Vec<PairResult> = run.results.iter().map(PairResult::without_timings).collect();
        serde_json::to_vec(&stripped).unwrap()
    };
    let reference = bytes(Level::One, Strategy::Broadcast, 1);
    let mut differing = Vec::new();
    let mut configs = 0;
    for level in [Level::One, Level::Two] {
        for strategy in [Strategy::Broadcast, Strategy::ScatterGather] {
            for workers in [1, 2, 4] {
                configs += 1;
                if bytes(level, strategy, workers) != reference {
                    differing.push(format!("level {level}/{strategy}/{workers}"));
                }
            }
        }
    }
    let elapsed = start.elapsed();
    verdict(
        differing.is_empty() && elapsed < tol::PIPELINE,
        format!(
            "{configs} configurations, {} bytes each, differing: {differing:?}, {:.1} s",
            reference.len(),
            elapsed.as_secs_f64()
        ),
    )
}

// ---------------------------------------------------------------- 5

const LABELS: [Element; 5] = [Element::C, Element::C, Element::C, Element::N, Element::O];

struct Topology {
    labels: Vec<Element>,
    adj: Vec<Vec<bool>>,
}

impl Topology {
    #[allow(clippy::needless_range_loop)]
    fn random(rng: &mut impl Rng, n: usize, density: f64) -> Self {
        let labels = (0..n)
            .map(|_| LABELS[rng.random_range(0..LABELS.len())])
            .collect();
        let mut adj = vec![vec![false; n]; n];
        for i in 0..n {
            for j in i + 1..n {
                let e = rng.random_bool(density);
                adj[i][j] = e;
                adj[j][i] = e;
            }
        }
        Topology { labels, adj }
    }

    fn permuted(&self, perm: &[usize]) -> Self {
        let n = perm.len();
        let mut labels = self.labels.clone();
        let mut adj = vec![vec![false; n]; n];
        for i in 0..n {
            labels[perm[i]] = self.labels[i];
            for j in 0..n {
                adj[perm[i]][perm[j]] = self.adj[i][j];
            }
        }
        Topology { labels, adj }
    }

    fn graph(&self) -> MolecularGraph {
        let n = self.labels.len();
        let edges: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .filter(|&(i, j)| self.adj[i][j])
            .collect();
        MolecularGraph::from_topology(&self.labels, edges).unwrap()
    }
}

/// Extend a partial injective map `image` of A's vertices `domain[..k]`,
/// preserving labels, bonds and non-bonds.
fn extend(
    a: &Topology,
    b: &Topology,
    domain: &[usize],
    image: &mut Vec<usize>,
    out: &mut dyn FnMut(&[usize]) -> bool,
) -> bool {
    let k = image.len();
    if k == domain.len() {
        return out(image);
    }
    let u = domain[k];
    for v in 0..b.labels.len() {
        if image.contains(&v) || a.labels[u] != b.labels[v] {
            continue;
        }
        if (0..k).all(|t| a.adj[u][domain[t]] == b.adj[v][image[t]]) {
            image.push(v);
            if extend(a, b, domain, image, out) {
                return true;
            }
            image.pop();
        }
    }
    false
}

/// Every permutation of B's vertices, kept when it preserves labels and
/// adjacency exactly.
fn brute_isomorphisms(a: &Topology, b: &Topology) -> BTreeSet<Vec<usize>> {
    let n = a.labels.len();
    let mut found = BTreeSet::new();
    if n != b.labels.len() {
        return found;
    }
    let mut perm: Vec<usize> = (0..n).collect();
    let mut c = vec![0; n];
    let mut check = |m: &[usize]| {
        let ok =
            (0..n).all(|i| a.labels[i] == b.labels[m[i]] && (0..n).all(|j| a.adj[i][j] == b.adj[m[i]][m[j]]));
        if ok {
            found.insert(m.to_vec());
        }
    };
    // Heap's algorithm
    check(&perm);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            perm.swap(if i % 2 == 0 { 0 } else { c[i] }, i);
            check(&perm);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    found
}

fn brute_mcs(a: &Topology, b: &Topology) -> usize {
    let n = a.labels.len();
    for k in (1..=n.min(b.labels.len())).rev() {
        for mask in 0u32..1 << n {
            if mask.count_ones() as usize != k {
                continue;
            }
            let domain: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
            if extend(a, b, &domain, &mut Vec::new(), &mut |_| true) {
                return k;
            }
        }
    }
    0
}

fn images(mappings: &[VertexMapping]) -> BTreeSet<Vec<usize>> {
    mappings
        .iter()
        .map(|m| m.pairs.iter().map(|&(_, j)| j).collect())
        .collect()
}

fn is_common_induced(a: &Topology, b: &Topology, m: &VertexMapping) -> bool {
    m.pairs.iter().all(|&(i, j)| a.labels[i] == b.labels[j])
        && m.pairs
            .iter()
            .all(|&(i, j)| m.pairs.iter().all(|&(k, l)| a.adj[i][k] == b.adj[j][l]))
}

fn graph_oracles(_: &Env) -> Verdict {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut iso_bad, mut iso_positive) = (0, 0);
    for trial in 0..200 {
        let n = rng.random_range(1..=8);
        let a = Topology::random(&mut rng, n, 0.35);
        let b = if trial % 4 == 3 {
            Topology::random(&mut rng, n, 0.35)
        } else {
            let mut perm: Vec<usize> = (0..n).collect();
            for i in (1..n).rev() {
                perm.swap(i, rng.random_range(0..=i));
            }
            let mut b = a.permuted(&perm);
            if trial % 4 == 2 && n >= 2 {
                // perturb one vertex pair: usually destroys the isomorphism
                b.adj[0][1] = !b.adj[0][1];
                b.adj[1][0] = b.adj[0][1];
            }
            b
        };
        let expected = brute_isomorphisms(&a, &b);
        iso_positive += usize::from(!expected.is_empty());
        if images(&find_isomorphisms(&a.graph(), &b.graph())) != expected {
            iso_bad += 1;
        }
    }
    let mut mcs_bad = 0;
    for _ in 0..200 {
        let (n1, n2) = (rng.random_range(1..=6), rng.random_range(1..=6));
        let a = Topology::random(&mut rng, n1, 0.4);
        let b = Topology::random(&mut rng, n2, 0.4);
        let out = find_mcs(&a.graph(), &b.graph());
        let valid = out
            .mappings
            .iter()
            .all(|m| m.pairs.len() == out.mcs_size && is_common_induced(&a, &b, m));
        if out.mcs_size != brute_mcs(&a, &b) || !valid {
            mcs_bad += 1;
        }
    }
    let elapsed = start.elapsed();
    verdict(
        iso_bad == 0 && mcs_bad == 0 && elapsed < tol::GRAPH,
        format!(
            "isomorphism mismatches {iso_bad}/200 ({iso_positive} isomorphic pairs), MCS mismatches {mcs_bad}/200, {:.2} s",
            elapsed.as_secs_f64()
        ),
    )
}

// ---------------------------------------------------------------- 6

fn random_rotation(rng: &mut impl Rng) -> Matrix3<f64> {
    loop {
        let q = Quaternion::new(
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
        );
        let n = q.norm();
        if n > 1e-3 && n <= 1.0 {
            return UnitQuaternion::from_quaternion(q)
                .to_rotation_matrix()
                .into_inner();
        }
    }
}

fn centroid(xs: &[Vec3]) -> Vec3 {
    xs.iter().sum::<Vec3>() / xs.len() as f64
}

/// RMSD of `R q + t` against `p` with the optimal `t` for this `R`.
fn rmsd_under(r: &Matrix3<f64>, p: &[Vec3], q: &[Vec3]) -> f64 {
    let (pc, qc) = (centroid(p), centroid(q));
    let ss: f64 = p
        .iter()
        .zip(q)
        .map(|(x, y)| (r * (y - qc) - (x - pc)).norm_squared())
        .sum();
    (ss / p.len() as f64).sqrt()
}

fn kabsch_optimality(_: &Env) -> Verdict {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut beaten, mut worst_margin, mut frame_err) = (0, f64::INFINITY, 0.0f64);
    for _ in 0..100 {
        let p: Vec<Vec3> = (0..6)
            .map(|_| {
                Vec3::new(
                    rng.random_range(-5.0..5.0),
                    rng.random_range(-5.0..5.0),
                    rng.random_range(-5.0..5.0),
                )
            })
            .collect();
        let r0 = random_rotation(&mut rng);
        let t0 = Vec3::new(
            rng.random_range(-9.0..9.0),
            rng.random_range(-9.0..9.0),
            rng.random_range(-9.0..9.0),
        );
        let q: Vec<Vec3> = p
            .iter()
            .map(|x| {
                r0 * x
                    + t0
                    + Vec3::new(
                        rng.random_range(-0.5..0.5),
                        rng.random_range(-0.5..0.5),
                        rng.random_range(-0.5..0.5),
                    )
            })
            .collect();
        let s = kabsch(&p, &q).unwrap();
        let r = s.rotation;
        frame_err = frame_err
            .max((r.transpose() * r - Matrix3::identity()).abs().max())
            .max((r.determinant() - 1.0).abs());
        // reported RMSD must be the RMSD of the reported motion
        let direct = (p
            .iter()
            .zip(&q)
            .map(|(x, y)| (r * y + s.translation - x).norm_squared())
            .sum::<f64>()
            / 6.0)
            .sqrt();
        frame_err = frame_err.max((direct - s.rmsd).abs());
        for _ in 0..10_000 {
            let margin = rmsd_under(&random_rotation(&mut rng), &p, &q) - s.rmsd;
            worst_margin = worst_margin.min(margin);
            if margin < -tol::KABSCH_SLACK {
                beaten += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    verdict(
        beaten == 0 && frame_err <= tol::FRAME && elapsed < tol::KABSCH,
        format!(
            "1,000,000 random rotations: {beaten} beat the optimum (smallest margin {worst_margin:.3e}); \
             max orthonormality/det/rmsd error {frame_err:.1e}; {:.2} s",
            elapsed.as_secs_f64()
        ),
    )
}

// ---------------------------------------------------------------- 7

#[derive(Default)]
struct CountingMatcher {
    iso: AtomicUsize,
    mcs: AtomicUsize,
    empty_iso: AtomicUsize,
}

impl LigandMatcher for CountingMatcher {
    fn find_isomorphisms(&self, a: &MolecularGraph, b: &MolecularGraph) -> Vec<VertexMapping> {
        self.iso.fetch_add(1, Ordering::SeqCst);
        let found = graph::find_isomorphisms(a, b);
        if found.is_empty() {
            self.empty_iso.fetch_add(1, Ordering::SeqCst);
        }
        found
    }

    fn find_mcs(&self, a: &MolecularGraph, b: &MolecularGraph) -> MatchOutcome {
        self.mcs.fetch_add(1, Ordering::SeqCst);
        graph::find_mcs(a, b)
    }
}

fn accounting(env: &Env) -> Verdict {
    let config = PipelineConfig::default();
    let store = env.store();
    let pipeline = PairPipeline::with_matcher(&store, &config, CountingMatcher::default());
    let farm = FarmConfig::new(2, Strategy::ScatterGather, Level::Two).unwrap();
    let run = run_corpus_with(&synth::known_ids(), &pipeline, &farm).unwrap();
    let candidates: usize = run.results.iter().map(|r| r.candidates.len()).sum();
    let iso_calls: usize = run.results.iter().map(|r| r.timing.find_iso_calls).sum();
    let mcs_calls: usize = run.results.iter().map(|r| r.timing.find_mcs_calls).sum();
    let m = pipeline.matcher();
    let (observed_iso, observed_mcs, empty) = (
        m.iso.load(Ordering::SeqCst),
        m.mcs.load(Ordering::SeqCst),
        m.empty_iso.load(Ordering::SeqCst),
    );
    let per_pair = run
        .results
        .iter()
        .all(|r| r.timing.find_iso_calls + r.timing.find_mcs_calls == r.candidates.len());
    let report = breakdown_report(&run.results);
    let worst = report
        .pairs
        .iter()
        .chain([&report.aggregate])
        .map(|row| (row.iso_share + row.mcs_share + row.remaining_share - 100.0).abs())
        .fold(0.0, f64::max);
    verdict(
        per_pair
            && iso_calls + mcs_calls == candidates
            && observed_iso == candidates
            && mcs_calls == empty
            && observed_mcs == empty
            && worst <= tol::SHARE_SUM,
        format!(
            "{} pairs: {iso_calls} iso-resolved + {mcs_calls} MCS = {candidates} candidates; \
             observed {observed_iso} isomorphism searches, {empty} empty, {observed_mcs} MCS searches; \
             share sums within {worst:.1e} of 100%",
            run.results.len()
        ),
    )
}

// ---------------------------------------------------------------- 8

fn site_self_alignment(env: &Env) -> Verdict {
    let params = SiteParams::default();
    let store = env.store();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (mut sites, mut bad, mut worst_self, mut worst_copy) = (0, Vec::new(), 0.0f64, 0.0f64);
    for id in synth::known_ids() {
        let s = store.load(&PdbId::parse(id).unwrap()).unwrap();
        for lig in extract_ligands(&s, &LigandFilter::default()) {
            let Ok(site) = extract_binding_site(&s, &lig, params.site_cutoff) else {
                continue;
            };
            if site.len() < tol::MIN_SITE_RESIDUES {
                continue;
            }
            sites += 1;
            let own = align_sites(&site, &site, &params).unwrap();
            let r = random_rotation(&mut rng);
            let t = Vec3::new(
                rng.random_range(-40.0..40.0),
                rng.random_range(-40.0..40.0),
                rng.random_range(-40.0..40.0),
            );
            let copy = BindingSite::new(
                SiteSource {
                    pdb_id: PdbId::parse("0cpy").unwrap(),
                    ligand: site.source.ligand.clone(),
                },
                site.residues
                    .iter()
                    .map(|x| SiteResidue {
                        ca: r * x.ca + t,
                        ..x.clone()
                    })
                    .collect(),
                r * site.protein_centroid + t,
            )
            .unwrap();
            let moved = align_sites(&site, &copy, &params).unwrap();
            let own_rmsd = own.patch_rmsd.unwrap_or(f64::INFINITY);
            let copy_rmsd = moved.patch_rmsd.unwrap_or(f64::INFINITY);
            worst_self = worst_self.max(own_rmsd);
            worst_copy = worst_copy.max(copy_rmsd);
            let full = own.correspondence.len() == site.len()
                && own.correspondence.iter().all(|&(i, j)| i == j)
                && moved.correspondence.len() == site.len();
            if !(full && own_rmsd < tol::SELF_RMSD && copy_rmsd < tol::COPY_RMSD) {
                bad.push(format!("{id}:{}", site.source.ligand.residue_seq));
            }
        }
    }
    verdict(
        sites > 0 && bad.is_empty(),
        format!("{sites} sites; worst self RMSD {worst_self:.1e}, worst rigid-copy RMSD {worst_copy:.1e}; failing {bad:?}"),
    )
}

// ---------------------------------------------------------------- 9

fn barrier_contract(_: &Env) -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut violations = 0;
    for _ in 0..100 {
        let late = rng.random_range(0..4usize);
        let delay = Duration::from_micros(rng.random_range(500..3000));
        let barrier = Barrier::new(4);
        let entries = Mutex::new(Vec::new());
        let exits = Mutex::new(Vec::new());
        std::thread::scope(|s| {
            for rank in 0..4 {
                let (barrier, entries, exits) = (&barrier, &entries, &exits);
                s.spawn(move || {
                    if rank == late {
                        std::thread::sleep(delay);
                    }
                    entries.lock().unwrap().push(Instant::now());
                    barrier.wait(rank).unwrap();
                    exits.lock().unwrap().push(Instant::now());
                });
            }
        });
        let last_entry = *entries.into_inner().unwrap().iter().max().unwrap();
        violations += exits
            .into_inner()
            .unwrap()
            .iter()
            .filter(|&&t| t < last_entry)
            .count();
    }
    verdict(
        violations == 0,
        format!("100 seeded repetitions, 4 workers, one delayed: {violations} early departures"),
    )
}

// ----------------------------------------------------------------

fn main() -> ExitCode {
    let dir = tempfile::tempdir().expect("temp dir");
    synth::write_all(dir.path()).expect("write synthetic structures");
    let env = Env { dir };

    type Check = fn(&Env) -> Verdict;
    let checks: [(&str, &str, Check); 10] = [
        ("1", "pair count", pair_count),
        ("2", "timing statistics", statistics),
        ("3", "speedup arithmetic", speedup),
        ("4a", "level-1 scaling", scaling),
        ("4b", "layout invariance", layout_invariance),
        ("5", "graph matching oracles", graph_oracles),
        ("6", "superposition optimality", kabsch_optimality),
        ("7", "ligand-match accounting", accounting),
        ("8", "site self-alignment", site_self_alignment),
        ("9", "barrier contract", barrier_contract),
    ];
    let mut failed = 0;
    for (id, name, check) in checks {
        let start = Instant::now();
        let v =
            catch_unwind(AssertUnwindSafe(|| check(&env))).unwrap_or_else(|_| Fail("check panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        let (tag, detail) = match v {
            Pass(d) => ("PASS", d),
            Fail(d) => {
                failed += 1;
                ("FAIL", d)
            }
            NotEvaluated(d) => ("NOT EVALUATED", d),
        };
        println!("{tag} [{id}] {name} ({secs:.2} s): {detail}");
    }
    if failed > 0 {
        println!("{failed} criterion/criteria failed");
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
