//! Candidate maps on density operators, an empirical fidelity-preservation
//! classifier, and the end-to-end harness that checks every zoo map lands on
//! the expected side of the unitary/antiunitary dichotomy.

use nalgebra::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fidelity::fidelity;
use crate::io::MatrixFile;
use crate::matcore::{CMatrix, DensityOperator, HermitianMatrix};
use crate::random;
use crate::tol::CLASSIFY_TOL;
use crate::wigner::{reconstruct, DensityMap, Parity, ReconstructOptions, ReconstructionReport, SymmetryOperator};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MapKind {
    Identity,
    Unitary,
    Antiunitary,
    Transpose,
    Depolarizing,
    Mix,
    Dephase,
    SpectralScramble,
}

impl MapKind {
    pub const ALL: [MapKind; 8] = [
        MapKind::Identity,
        MapKind::Unitary,
        MapKind::Antiunitary,
        MapKind::Transpose,
        MapKind::Depolarizing,
        MapKind::Mix,
        MapKind::Dephase,
        MapKind::SpectralScramble,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MapKind::Identity => "identity",
            MapKind::Unitary => "unitary",
            MapKind::Antiunitary => "antiunitary",
            MapKind::Transpose => "transpose",
            MapKind::Depolarizing => "depolarizing",
            MapKind::Mix => "mix",
            MapKind::Dephase => "dephase",
            MapKind::SpectralScramble => "spectral_scramble",
        }
    }
}

/// Kind-specific parameters. Which fields are allowed depends on the kind:
///
/// | kind | params |
/// |---|---|
/// | `unitary`, `antiunitary` | `u` (explicit matrix) or `seed` (Haar sample), optional |
/// | `depolarizing` | `p ∈ [0, 1]` |
/// | `mix` | `p ∈ [0, 1]`, `sigma` (unit-trace density operator) |
/// | `dephase`, `spectral_scramble` | `basis = "canonical"`, optional |
/// | `identity`, `transpose` | none |
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u: Option<MatrixFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<MatrixFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapSpec {
    pub kind: MapKind,
    pub dim: usize,
    #[serde(default)]
    pub params: MapParams,
}

fn bad(msg: impl Into<String>) -> Error {
    Error::BadSpec(msg.into())
}

impl MapSpec {
    pub fn new(kind: MapKind, dim: usize) -> Self {
        Self {
            kind,
            dim,
            params: MapParams::default(),
        }
    }

    pub fn with_p(mut self, p: f64) -> Self {
        self.params.p = Some(p);
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.params.seed = Some(seed);
        self
    }

    pub fn with_sigma(mut self, sigma: &DensityOperator) -> Self {
        self.params.sigma = Some(MatrixFile::from_density(sigma));
        self
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| bad(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(bad("dim must be positive"));
        }
        let p = &self.params;
        let kind = self.kind.name();
        let allowed: &[&str] = match self.kind {
            MapKind::Identity | MapKind::Transpose => &[],
            MapKind::Unitary | MapKind::Antiunitary => &["u", "seed"],
            MapKind::Depolarizing => &["p"],
            MapKind::Mix => &["p", "sigma"],
            MapKind::Dephase | MapKind::SpectralScramble => &["basis"],
        };
        let present = [
            ("p", p.p.is_some()),
            ("seed", p.seed.is_some()),
            ("u", p.u.is_some()),
            ("sigma", p.sigma.is_some()),
            ("basis", p.basis.is_some()),
        ];
        for (name, set) in present {
            if set && !allowed.contains(&name) {
                return Err(bad(format!("parameter \"{name}\" does not apply to kind {kind}")));
            }
        }
        if matches!(self.kind, MapKind::Depolarizing | MapKind::Mix) {
            match p.p {
                Some(x) if (0.0..=1.0).contains(&x) => {}
                Some(x) => return Err(bad(format!("p = {x} outside [0, 1]"))),
                None => return Err(bad(format!("kind {kind} requires p"))),
            }
        }
        if let Some(basis) = &p.basis {
            if basis != "canonical" {
                return Err(bad(format!("unsupported basis \"{basis}\" (only \"canonical\")")));
            }
        }
        if p.u.is_some() && p.seed.is_some() {
            return Err(bad("give either an explicit u or a seed, not both"));
        }
        if let Some(u) = &p.u {
            let m = u.to_matrix().map_err(|e| bad(format!("u: {e}")))?;
            if m.nrows() != self.dim {
                return Err(bad(format!("u has dimension {}, spec has {}", m.nrows(), self.dim)));
            }
            SymmetryOperator::new(Parity::Unitary, m).map_err(|e| bad(format!("u: {e}")))?;
        }
        if self.kind == MapKind::Mix {
            let sigma = p.sigma.as_ref().ok_or_else(|| bad("kind mix requires sigma"))?;
            let s = sigma.to_density(true).map_err(|e| bad(format!("sigma: {e}")))?;
            if s.dim() != self.dim {
                return Err(bad(format!("sigma has dimension {}, spec has {}", s.dim(), self.dim)));
            }
        }
        Ok(())
    }
}

/// An executable zoo map.
#[derive(Debug, Clone)]
pub enum ZooMap {
    Identity { dim: usize },
    Symmetry(SymmetryOperator),
    Transpose { dim: usize },
    Depolarizing { dim: usize, p: f64 },
    Mix { p: f64, sigma: DensityOperator },
    Dephase { dim: usize },
    SpectralScramble { dim: usize },
}

impl DensityMap for ZooMap {
    fn dim(&self) -> usize {
        match self {
            ZooMap::Identity { dim }
            | ZooMap::Transpose { dim }
            | ZooMap::Depolarizing { dim, .. }
            | ZooMap::Dephase { dim }
            | ZooMap::SpectralScramble { dim } => *dim,
            ZooMap::Symmetry(s) => s.dim(),
            ZooMap::Mix { sigma, .. } => sigma.dim(),
        }
    }

    fn apply(&self, a: &DensityOperator) -> DensityOperator {
        let d = a.dim();
        let wrap = |m: CMatrix| DensityOperator::from_congruence(&m).expect("finite image");
        match self {
            ZooMap::Identity { .. } => a.clone(),
            ZooMap::Symmetry(s) => s.apply(a),
            ZooMap::Transpose { .. } => wrap(a.entries().transpose()),
            ZooMap::Depolarizing { p, .. } => {
                let noise = CMatrix::identity(d, d) * Complex::new(p * a.trace() / d as f64, 0.0);
                wrap(a.entries() * Complex::new(1.0 - p, 0.0) + noise)
            }
            ZooMap::Mix { p, sigma } => {
                wrap(a.entries() * Complex::new(1.0 - p, 0.0) + sigma.entries() * Complex::new(p * a.trace(), 0.0))
            }
            ZooMap::Dephase { .. } => {
                let diag: Vec<f64> = (0..d).map(|i| a.entries()[(i, i)].re).collect();
                wrap(HermitianMatrix::from_real_diagonal(&diag).expect("finite diagonal").into_matrix())
            }
            ZooMap::SpectralScramble { .. } => {
                let spectrum = a.spectrum().expect("eigendecomposition of a valid density operator");
                let diag: Vec<f64> = spectrum.eigenvalues().iter().map(|l| l.max(0.0)).collect();
                wrap(HermitianMatrix::from_real_diagonal(&diag).expect("finite diagonal").into_matrix())
            }
        }
    }
}

/// Builds the oracle described by `spec`. `seed` drives Haar sampling for
/// `unitary`/`antiunitary` specs that give neither `u` nor their own `seed`.
pub fn make_map(spec: &MapSpec, seed: u64) -> Result<ZooMap> {
    spec.validate()?;
    let d = spec.dim;
    let p = &spec.params;
    Ok(match spec.kind {
        MapKind::Identity => ZooMap::Identity { dim: d },
        MapKind::Unitary | MapKind::Antiunitary => {
            let u = match &p.u {
                Some(u) => u.to_matrix()?,
                None => random::haar_unitary(&mut random::rng(p.seed.unwrap_or(seed), 0), d),
            };
            let parity = if spec.kind == MapKind::Unitary {
                Parity::Unitary
            } else {
                Parity::Antiunitary
            };
            ZooMap::Symmetry(SymmetryOperator::new(parity, u)?)
        }
        MapKind::Transpose => ZooMap::Transpose { dim: d },
        MapKind::Depolarizing => ZooMap::Depolarizing {
            dim: d,
            p: p.p.expect("validated"),
        },
        MapKind::Mix => ZooMap::Mix {
            p: p.p.expect("validated"),
            sigma: p.sigma.as_ref().expect("validated").to_density(true)?,
        },
        MapKind::Dephase => ZooMap::Dephase { dim: d },
        MapKind::SpectralScramble => ZooMap::SpectralScramble { dim: d },
    })
}

/// The trial pair with the largest fidelity violation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WitnessPair {
    pub trial: usize,
    pub a: MatrixFile,
    pub b: MatrixFile,
    pub fidelity: f64,
    pub image_fidelity: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassificationReport {
    pub preserving: bool,
    pub worst_violation: f64,
    pub witness_pair: Option<WitnessPair>,
    pub trials: usize,
    pub seed: u64,
    pub reconstruction: Option<ReconstructionReport>,
}

impl ClassificationReport {
    /// Preserving and the attached reconstruction certified.
    pub fn is_certified_symmetry(&self) -> bool {
        self.preserving && self.reconstruction.as_ref().is_some_and(|r| r.is_certified())
    }
}

/// Trial `t` draws, by `t mod 5`: 0 an orthogonal pure pair, 1–2 a pair of
/// full-rank mixed operators with random traces, 3–4 a pair of pure states.
/// Orthogonal pairs have `F = 0`, which a preserving map must keep.
fn trial_pair(dim: usize, seed: u64, trial: usize) -> (DensityOperator, DensityOperator) {
    let mut rng = random::rng(seed, trial as u64);
    match trial % 5 {
        0 if dim >= 2 => {
            let (x, y) = random::orthogonal_pure_pair(&mut rng, dim);
            (x.projection(), y.projection())
        }
        1 | 2 => (
            random::random_mixed_density(&mut rng, dim),
            random::random_mixed_density(&mut rng, dim),
        ),
        _ => (
            random::random_pure_state(&mut rng, dim).projection(),
            random::random_pure_state(&mut rng, dim).projection(),
        ),
    }
}

fn violation<M: DensityMap + ?Sized>(oracle: &M, a: &DensityOperator, b: &DensityOperator) -> (f64, f64, f64) {
    let before = fidelity(a, b).map(|f| f.value()).unwrap_or(f64::NAN);
    let (fa, fb) = (oracle.apply(a), oracle.apply(b));
    let after = fidelity(&fa, &fb).map(|f| f.value()).unwrap_or(f64::NAN);
    let v = (after - before).abs();
    (if v.is_nan() { f64::INFINITY } else { v }, before, after)
}

pub fn classify_map<M: DensityMap + ?Sized>(oracle: &M, trials: usize, seed: u64) -> ClassificationReport {
    let opts = ReconstructOptions {
        seed,
        ..ReconstructOptions::default()
    };
    classify_map_with(oracle, trials, seed, &opts)
}

/// Samples `trials` pairs, records the worst `|F(φA, φB) − F(A, B)|`, and
/// runs [`reconstruct`] when it stays within [`CLASSIFY_TOL`].
pub fn classify_map_with<M: DensityMap + ?Sized>(
    oracle: &M,
    trials: usize,
    seed: u64,
    opts: &ReconstructOptions,
) -> ClassificationReport {
    let d = oracle.dim();
    let mut worst: Option<(f64, usize, f64, f64)> = None;
    for t in 0..trials {
        let (a, b) = trial_pair(d, seed, t);
        let (v, before, after) = violation(oracle, &a, &b);
        if worst.is_none_or(|(w, ..)| v > w) {
            worst = Some((v, t, before, after));
        }
    }
    let worst_violation = worst.map_or(0.0, |w| w.0);
    let preserving = worst_violation <= CLASSIFY_TOL;
    let witness_pair = match worst {
        Some((_, t, before, after)) if !preserving => {
            let (a, b) = trial_pair(d, seed, t);
            Some(WitnessPair {
                trial: t,
                a: MatrixFile::from_density(&a),
                b: MatrixFile::from_density(&b),
                fidelity: before,
                image_fidelity: after,
            })
        }
        _ => None,
    };
    let reconstruction = preserving.then(|| reconstruct(oracle, opts));
    ClassificationReport {
        preserving,
        worst_violation,
        witness_pair,
        trials,
        seed,
        reconstruction,
    }
}

/// Re-evaluates a witness pair read back from its matrix files.
pub fn replay_witness<M: DensityMap + ?Sized>(oracle: &M, witness: &WitnessPair) -> Result<f64> {
    let a = witness.a.to_density(false)?;
    let b = witness.b.to_density(false)?;
    Ok(violation(oracle, &a, &b).0)
}

#[derive(Debug, Clone, Serialize)]
pub struct PanelEntry {
    pub kind: MapKind,
    pub spec: MapSpec,
    pub expected_preserving: bool,
    pub preserving: bool,
    pub certified: bool,
    pub parity: Option<Parity>,
    pub worst_violation: f64,
    pub witness_trial: Option<usize>,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct TheoremSummary {
    pub dim: usize,
    pub trials: usize,
    pub seed: u64,
    pub all_passed: bool,
    pub entries: Vec<PanelEntry>,
}

/// One spec per zoo kind, seeded from `seed`: the four symmetry kinds and
/// four non-preserving ones at strength 1/2.
pub fn theorem_panel_specs(dim: usize, seed: u64) -> Result<Vec<MapSpec>> {
    if dim < 2 {
        return Err(bad("theorem check needs dim >= 2 (parity is undetectable at d = 1)"));
    }
    let sigma = {
        let mut rng = random::rng(seed, u64::MAX);
        let s = random::random_density(&mut rng, dim, dim, 1.0);
        // round-trip through the file form so the spec carries exactly this operator
        MatrixFile::from_density(&s).to_density(true)?
    };
    Ok(MapKind::ALL
        .iter()
        .map(|&kind| {
            let spec = MapSpec::new(kind, dim);
            match kind {
                MapKind::Unitary => spec.with_seed(seed),
                MapKind::Antiunitary => spec.with_seed(seed.wrapping_add(1)),
                MapKind::Depolarizing => spec.with_p(0.5),
                MapKind::Mix => spec.with_p(0.5).with_sigma(&sigma),
                _ => spec,
            }
        })
        .collect())
}

pub fn expected_preserving(kind: MapKind) -> bool {
    matches!(
        kind,
        MapKind::Identity | MapKind::Unitary | MapKind::Antiunitary | MapKind::Transpose
    )
}

/// Classifies every panel map and records whether each landed where the
/// theorem puts it. Never fails on a wrong classification; see
/// [`verify_theorem`] for the asserting form.
pub fn run_theorem_panel(dim: usize, trials: usize, seed: u64) -> Result<TheoremSummary> {
    if trials == 0 {
        return Err(bad("trials must be positive"));
    }
    let mut entries = Vec::new();
    for spec in theorem_panel_specs(dim, seed)? {
        let oracle = make_map(&spec, seed)?;
        let report = classify_map(&oracle, trials, seed);
        let expected = expected_preserving(spec.kind);
        let certified = report.is_certified_symmetry();
        let parity = report
            .reconstruction
            .as_ref()
            .and_then(|r| r.symmetry.as_ref())
            .map(|s| s.parity());
        let passed = if expected {
            certified
        } else {
            !report.preserving && report.witness_pair.is_some()
        };
        entries.push(PanelEntry {
            kind: spec.kind,
            spec,
            expected_preserving: expected,
            preserving: report.preserving,
            certified,
            parity,
            worst_violation: report.worst_violation,
            witness_trial: report.witness_pair.as_ref().map(|w| w.trial),
            passed,
        });
    }
    Ok(TheoremSummary {
        dim,
        trials,
        seed,
        all_passed: entries.iter().all(|e| e.passed),
        entries,
    })
}

/// [`run_theorem_panel`], failing with the first kind that landed on the
/// wrong side.
pub fn verify_theorem(dim: usize, trials: usize, seed: u64) -> Result<TheoremSummary> {
    let summary = run_theorem_panel(dim, trials, seed)?;
    if let Some(e) = summary.entries.iter().find(|e| !e.passed) {
        let reason = if e.expected_preserving {
            format!("expected a certified symmetry, worst violation {:e}", e.worst_violation)
        } else {
            "expected rejection with a witness pair".to_string()
        };
        return Err(Error::AssertionFailure {
            kind: e.kind.name().to_string(),
            seed,
            reason,
        });
    }
    Ok(summary)
}
