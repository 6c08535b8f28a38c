//! Serializable reports. Field order is the JSON key order.

use orbital_ac_core::eligibility::{
    dominant_class, lie_dominant_s, DominantClass, EligibilityVerdict, ForcedKind, NecessityCertificate,
};
use orbital_ac_core::liealg::BracketReport;
use orbital_ac_core::oracle::{
    ForcedEigenvalueReport, RankCertificate, RankVerdict, StrategyReport, SweepOutcome, SweepSummary,
};
use orbital_ac_core::rootsys::{adjoint_orbit_dim, annihilator, conjugacy_class_dim, lie_annihilator};
use orbital_ac_core::TorusElement;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerdictRecord {
    pub eligible: bool,
    /// `i` to `iv`, or `n/a`.
    pub case: String,
    pub parity: u8,
    pub lhs: i64,
    pub rhs: i64,
    pub non_central: usize,
}

impl From<&EligibilityVerdict> for VerdictRecord {
    fn from(v: &EligibilityVerdict) -> Self {
        VerdictRecord {
            eligible: v.eligible,
            case: v.case.label().to_string(),
            parity: v.parity.value() as u8,
            lhs: v.lhs,
            rhs: v.rhs,
            non_central: v.len,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RankRecord {
    pub ambient_dim: usize,
    pub best_rank: usize,
    pub trials: usize,
    pub seed: u64,
    pub tolerance: f64,
    /// `FullRankFound` or `NeverFullRank`.
    pub verdict: String,
}

pub fn verdict_name(v: RankVerdict) -> &'static str {
    match v {
        RankVerdict::FullRankFound => "FullRankFound",
        RankVerdict::NeverFullRank => "NeverFullRank",
    }
}

impl From<&RankCertificate> for RankRecord {
    fn from(c: &RankCertificate) -> Self {
        RankRecord {
            ambient_dim: c.ambient_dim,
            best_rank: c.best_rank,
            trials: c.trials,
            seed: c.seed,
            tolerance: c.tolerance,
            verdict: verdict_name(c.verdict).to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateRecord {
    /// `minus_one`, `plus_one` or `rotation`.
    pub kind: String,
    /// Forced eigenvalues `e^{iθ}` written as `θ`.
    pub forced_eigenvalues: Vec<String>,
    pub multiplicity_bound: usize,
    pub deficit: i64,
}

impl From<&NecessityCertificate> for CertificateRecord {
    fn from(c: &NecessityCertificate) -> Self {
        let kind = match c.kind {
            ForcedKind::MinusOne => "minus_one",
            ForcedKind::PlusOne => "plus_one",
            ForcedKind::Rotation => "rotation",
        };
        CertificateRecord {
            kind: kind.to_string(),
            forced_eigenvalues: c.forced_eigenvalues.iter().map(|a| a.to_string()).collect(),
            multiplicity_bound: c.multiplicity_bound,
            deficit: c.deficit,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeRecord {
    pub samples: usize,
    pub certificate: CertificateRecord,
    pub observed_min_multiplicity: usize,
    pub max_eigenvalue_distance: f64,
    pub passed: bool,
}

impl From<&ForcedEigenvalueReport> for ProbeRecord {
    fn from(r: &ForcedEigenvalueReport) -> Self {
        ProbeRecord {
            samples: r.samples,
            certificate: (&r.expected).into(),
            observed_min_multiplicity: r.observed_min_multiplicity,
            max_eigenvalue_distance: r.max_eigenvalue_distance,
            passed: r.passed,
        }
    }
}

/// One line of sweep output.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub rank: usize,
    pub index: usize,
    pub tuple: Vec<String>,
    pub verdict: VerdictRecord,
    pub rank_test: RankRecord,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub probe: Option<ProbeRecord>,
    pub agrees: bool,
    /// Only present with `--timings`, which makes output nondeterministic.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<f64>,
}

impl SweepRecord {
    pub fn from_outcome(o: &SweepOutcome, wall_time_ms: Option<f64>) -> Self {
        SweepRecord {
            rank: o.item.rank,
            index: o.item.index,
            tuple: o.item.types.iter().map(|t| t.to_string()).collect(),
            verdict: (&o.verdict).into(),
            rank_test: (&o.certificate).into(),
            probe: o.probe.as_ref().map(Into::into),
            agrees: o.agrees() && o.probe_passed(),
            wall_time_ms,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummaryRecord {
    pub rank: usize,
    pub min_len: usize,
    pub max_len: usize,
    pub total: usize,
    pub eligible: usize,
    pub agreements: usize,
    pub soundness_violations: usize,
    pub probe_failures: usize,
    pub disagreements: Vec<usize>,
    pub skipped_existing: usize,
}

impl SummaryRecord {
    pub fn new(s: &SweepSummary, min_len: usize, max_len: usize, skipped_existing: usize) -> Self {
        SummaryRecord {
            rank: s.rank,
            min_len,
            max_len,
            total: s.total,
            eligible: s.eligible,
            agreements: s.agreements,
            soundness_violations: s.soundness_violations,
            probe_failures: s.probe_failures,
            disagreements: s.disagreements.clone(),
            skipped_existing,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassifyRecord {
    pub element: String,
    pub rank: usize,
    #[serde(rename = "type")]
    pub type_label: String,
    pub central: bool,
    pub annihilator: String,
    pub annihilating_positive_roots: usize,
    /// `B`, `D`, `BD` or `S`.
    pub dominant: String,
    /// `S_x`, or `[S^(1), S^(2)]` for `BD`.
    pub s: Vec<usize>,
    pub dim_conjugacy_class: usize,
    pub lie_annihilator: String,
    pub lie_dominant: String,
    pub lie_s: usize,
    pub dim_adjoint_orbit: usize,
}

impl ClassifyRecord {
    pub fn new(x: &TorusElement) -> Self {
        let c = dominant_class(x);
        let s = match c {
            DominantClass::BD { s1, s2 } => vec![s1, s2],
            other => vec![other.s_value().expect("not BD")],
        };
        let a = annihilator(x);
        let (lk, ls) = lie_dominant_s(x);
        ClassifyRecord {
            element: x.to_string(),
            rank: x.rank(),
            type_label: x.element_type().to_string(),
            central: x.is_central(),
            annihilator: a.to_string(),
            annihilating_positive_roots: a.positive_root_count,
            dominant: c.kind().to_string(),
            s,
            dim_conjugacy_class: conjugacy_class_dim(x),
            lie_annihilator: lie_annihilator(x).to_string(),
            lie_dominant: lk.to_string(),
            lie_s: ls,
            dim_adjoint_orbit: adjoint_orbit_dim(x),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecisionRecord {
    pub rank: usize,
    pub tuple: Vec<String>,
    pub group: VerdictRecord,
    pub lie_algebra: VerdictRecord,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateRecord>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StrategyRecord {
    pub reduced_rank: usize,
    pub reduced_full_rank: bool,
    pub omega_dim: usize,
    pub omega_hypotheses: bool,
    pub condition_i: bool,
    pub span_rank_i: usize,
    pub condition_ii: bool,
    pub residual_ii: f64,
    pub condition_iii: bool,
    pub min_projection_iii: f64,
    pub complement_dim: usize,
    pub passed: bool,
}

impl From<&StrategyReport> for StrategyRecord {
    fn from(r: &StrategyReport) -> Self {
        StrategyRecord {
            reduced_rank: r.reduced_rank,
            reduced_full_rank: r.reduced_full_rank,
            omega_dim: r.omega_dim,
            omega_hypotheses: r.omega_hypotheses,
            condition_i: r.condition_i,
            span_rank_i: r.span_rank_i,
            condition_ii: r.condition_ii,
            residual_ii: r.residual_ii,
            condition_iii: r.condition_iii,
            min_projection_iii: r.min_projection_iii,
            complement_dim: r.complement_dim,
            passed: r.passed(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyRecord {
    pub rank: usize,
    pub tuple: Vec<String>,
    pub verdict: VerdictRecord,
    pub rank_test: RankRecord,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub probe: Option<ProbeRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub strategy: Option<StrategyRecord>,
    pub agrees: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeCommandRecord {
    pub rank: usize,
    pub tuple: Vec<String>,
    pub eligible: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub forced: Option<ProbeRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub distinct_eigenvalues_found: Option<bool>,
    pub samples: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BracketRecord {
    pub rank: usize,
    pub dim_algebra: usize,
    pub root_planes: usize,
    pub torus_dim: usize,
    pub pairs_checked: usize,
    pub asserted_components: usize,
    pub max_residual: f64,
    pub min_asserted: f64,
    pub failures: Vec<String>,
    pub passed: bool,
}

impl BracketRecord {
    pub fn new(r: &BracketReport, root_planes: usize) -> Self {
        BracketRecord {
            rank: r.rank,
            dim_algebra: r.rank * (2 * r.rank + 1),
            root_planes,
            torus_dim: r.rank,
            pairs_checked: r.pairs_checked,
            asserted_components: r.asserted_components,
            max_residual: r.max_residual,
            min_asserted: r.min_asserted,
            failures: r
                .failures
                .iter()
                .map(|f| {
                    format!("[{}, {}]: residual {:e}, component {:e}", f.alpha, f.beta, f.residual, f.min_component)
                })
                .collect(),
            passed: r.passed(1e-8, 1e-10),
        }
    }
}
