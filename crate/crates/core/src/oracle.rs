//! Randomized numerical checks of the eligibility decision.
//!
//! A tuple is absolutely continuous iff for some `g_i` the spaces
//! `Ad(g_i) sp N_{x_i}` span so(2n+1). [`Oracle::rank_test`] samples Haar
//! conjugators and reports the best rank seen, so a full-rank find is a
//! certificate while a miss is only evidence. Ineligible tuples are also
//! probed for the eigenvalue their products are forced to carry.

use alloc::string::ToString;
use alloc::vec::Vec;

use nalgebra::{Complex, DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::eligibility::{
    decide_eligibility, necessity_certificate, reduce, reduction_coordinates, EligibilityVerdict, NecessityCertificate,
};
use crate::liealg::{
    adjoint, adjoint_matrix, eigenvalues, embed_group, exp_alg, haar_sample, numerical_rank, torus_matrix,
    AlgebraElement, GroupElement, RootFrame, SubspaceBasis, SPAN_TOL,
};
use crate::rootsys::{ElementType, Root, TorusElement};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OracleConfig {
    pub trials: usize,
    pub samples: usize,
    /// Relative singular value threshold for ranks.
    pub tolerance: f64,
    /// Distance at which a computed eigenvalue counts as the forced one.
    pub eigen_tolerance: f64,
    pub seed: u64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig { trials: 50, samples: 100, tolerance: 1e-8, eigen_tolerance: 1e-8, seed: 0 }
    }
}

impl OracleConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidConfig("trials must be positive"));
        }
        if self.samples == 0 {
            return Err(Error::InvalidConfig("samples must be positive"));
        }
        if !(self.tolerance > 0.0 && self.tolerance < 1e-2) {
            return Err(Error::InvalidConfig("tolerance must lie in (0, 1e-2)"));
        }
        if !(self.eigen_tolerance > 0.0 && self.eigen_tolerance < 1e-2) {
            return Err(Error::InvalidConfig("eigenvalue tolerance must lie in (0, 1e-2)"));
        }
        Ok(())
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed for one independent unit of work.
pub fn mix_seed(seed: u64, item: u64, stream: u64) -> u64 {
    splitmix64(splitmix64(splitmix64(seed) ^ item) ^ stream)
}

pub fn rng_for(seed: u64, item: u64, stream: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(mix_seed(seed, item, stream))
}

const PROBE_STREAM: u64 = 1 << 40;
const DISTINCT_STREAM: u64 = 2 << 40;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RankVerdict {
    FullRankFound,
    NeverFullRank,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RankCertificate {
    pub ambient_dim: usize,
    pub best_rank: usize,
    /// Trials actually run; stops early at full rank.
    pub trials: usize,
    pub seed: u64,
    pub tolerance: f64,
    pub verdict: RankVerdict,
    /// Conjugators of the full-rank trial.
    pub witness: Option<Vec<GroupElement>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ForcedEigenvalueReport {
    pub samples: usize,
    pub expected: NecessityCertificate,
    /// Eigenvalues within tolerance of a forced value, minimized over
    /// samples (maximized over the forced values within a sample).
    pub observed_min_multiplicity: usize,
    /// Worst distance of the `bound`-th closest eigenvalue to the forced
    /// value.
    pub max_eigenvalue_distance: f64,
    pub passed: bool,
}

/// Outcome of numerically checking the three conditions of the inductive
/// step, with `Ω` all root planes involving the removed coordinate.
#[derive(Clone, Debug, PartialEq)]
pub struct StrategyReport {
    pub rank: usize,
    /// Rank of the reduced tuple's tangent span under the conjugators, and
    /// whether it is full.
    pub reduced_rank: usize,
    pub reduced_full_rank: bool,
    pub omega_dim: usize,
    /// `sp Ω` contains every `Ω_{x_i}` and is `ad(g_{n-1})`-invariant.
    pub omega_hypotheses: bool,
    pub condition_i: bool,
    pub span_rank_i: usize,
    pub condition_ii: bool,
    pub residual_ii: f64,
    pub krylov_dim_ii: usize,
    pub condition_iii: bool,
    pub min_projection_iii: f64,
    pub complement_dim: usize,
}

impl StrategyReport {
    pub fn passed(&self) -> bool {
        self.reduced_full_rank && self.omega_hypotheses && self.condition_i && self.condition_ii && self.condition_iii
    }
}

fn validate_tuple(tuple: &[TorusElement], n: usize) -> Result<()> {
    if tuple.len() < 2 {
        return Err(Error::TupleTooShort(tuple.len()));
    }
    for (i, x) in tuple.iter().enumerate() {
        if x.rank() != n {
            return Err(Error::RankMismatch(n, x.rank()));
        }
        if x.is_central() {
            return Err(Error::CentralElement(i));
        }
    }
    Ok(())
}

fn product_of_conjugates(xs: &[GroupElement], gs: &[GroupElement]) -> DMatrix<f64> {
    let s = xs[0].matrix().nrows();
    let mut y = DMatrix::identity(s, s);
    for (x, g) in xs.iter().zip(gs) {
        y = y * g.matrix() * x.matrix() * g.matrix().transpose();
    }
    y
}

/// Numerical oracle for one rank.
#[derive(Clone, Debug)]
pub struct Oracle {
    frame: RootFrame,
}

impl Oracle {
    pub fn new(n: usize) -> Result<Self> {
        Ok(Oracle { frame: RootFrame::new(n)? })
    }

    pub fn rank(&self) -> usize {
        self.frame.rank()
    }

    pub fn frame(&self) -> &RootFrame {
        &self.frame
    }

    /// Rank of `Σ Ad(g_i) sp N_{x_i}` for given conjugators.
    pub fn span_rank(&self, spans: &[SubspaceBasis], gs: &[GroupElement], tol: f64) -> usize {
        let cols: Vec<DMatrix<f64>> = spans.iter().zip(gs).map(|(s, g)| adjoint_matrix(g) * s.matrix()).collect();
        let total: usize = cols.iter().map(|c| c.ncols()).sum();
        let mut stacked = DMatrix::zeros(self.frame.ambient_dim(), total);
        let mut at = 0;
        for c in &cols {
            stacked.view_mut((0, at), (c.nrows(), c.ncols())).copy_from(c);
            at += c.ncols();
        }
        numerical_rank(&stacked, tol)
    }

    /// Samples independent Haar conjugators per trial, stopping at the first
    /// full-rank configuration.
    pub fn rank_test(&self, tuple: &[TorusElement], trials: usize, seed: u64, tol: f64) -> Result<RankCertificate> {
        let n = self.rank();
        validate_tuple(tuple, n)?;
        let spans: Vec<SubspaceBasis> =
            tuple.iter().map(|x| self.frame.nonannihilating_span(x)).collect::<Result<_>>()?;
        let d = self.frame.ambient_dim();
        let mut cert = RankCertificate {
            ambient_dim: d,
            best_rank: 0,
            trials: 0,
            seed,
            tolerance: tol,
            verdict: RankVerdict::NeverFullRank,
            witness: None,
        };
        for t in 0..trials {
            let mut rng = rng_for(seed, 0, t as u64);
            let gs: Vec<GroupElement> = tuple.iter().map(|_| haar_sample(n, &mut rng)).collect();
            let r = self.span_rank(&spans, &gs, tol);
            cert.trials = t + 1;
            cert.best_rank = cert.best_rank.max(r);
            if r == d {
                cert.verdict = RankVerdict::FullRankFound;
                cert.witness = Some(gs);
                break;
            }
        }
        Ok(cert)
    }

    /// Eigenvalues of random products `Π g_i x̂_i g_iᵀ` compared with the
    /// forced eigenvalue of an ineligible tuple.
    pub fn forced_eigenvalue_probe(
        &self,
        tuple: &[TorusElement],
        samples: usize,
        seed: u64,
        tol: f64,
    ) -> Result<ForcedEigenvalueReport> {
        let n = self.rank();
        validate_tuple(tuple, n)?;
        let cert = necessity_certificate(tuple)?.ok_or(Error::TupleEligible)?;
        let bound = cert.multiplicity_bound.max(1);
        let targets: Vec<Complex<f64>> = cert
            .forced_eigenvalues
            .iter()
            .map(|a| {
                let t = a.radians();
                Complex::new(libm::cos(t), libm::sin(t))
            })
            .collect();
        let xs: Vec<GroupElement> = tuple.iter().map(torus_matrix).collect();
        let mut min_mult = usize::MAX;
        let mut max_dist: f64 = 0.0;
        for s in 0..samples {
            let mut rng = rng_for(seed, PROBE_STREAM, s as u64);
            let gs: Vec<GroupElement> = tuple.iter().map(|_| haar_sample(n, &mut rng)).collect();
            let eig = eigenvalues(product_of_conjugates(&xs, &gs))?;
            let mut best_mult = 0;
            let mut best_dist = f64::INFINITY;
            for z in &targets {
                let mut dist: Vec<f64> = eig.iter().map(|e| (e - z).norm()).collect();
                dist.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
                let mult = dist.iter().filter(|&&d| d < tol).count();
                best_mult = best_mult.max(mult);
                best_dist = best_dist.min(dist[bound - 1]);
            }
            min_mult = min_mult.min(best_mult);
            max_dist = max_dist.max(best_dist);
        }
        Ok(ForcedEigenvalueReport {
            samples,
            passed: min_mult >= bound,
            expected: cert,
            observed_min_multiplicity: min_mult,
            max_eigenvalue_distance: max_dist,
        })
    }

    /// Whether some sampled product of an eligible tuple has `2n+1`
    /// eigenvalues pairwise further apart than `1e-6`.
    pub fn distinct_eigenvalue_probe(&self, tuple: &[TorusElement], samples: usize, seed: u64) -> Result<bool> {
        let n = self.rank();
        validate_tuple(tuple, n)?;
        if !decide_eligibility(tuple)?.eligible {
            return Err(Error::TupleIneligible);
        }
        let xs: Vec<GroupElement> = tuple.iter().map(torus_matrix).collect();
        for s in 0..samples {
            let mut rng = rng_for(seed, DISTINCT_STREAM, s as u64);
            let gs: Vec<GroupElement> = tuple.iter().map(|_| haar_sample(n, &mut rng)).collect();
            let eig = eigenvalues(product_of_conjugates(&xs, &gs))?;
            let separated = (0..eig.len()).all(|i| (i + 1..eig.len()).all(|j| (eig[i] - eig[j]).norm() > 1e-6));
            if separated {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Checks the inductive-step conditions for `tuple` at rank `n`.
    ///
    /// Every element is placed in coordinates where its removed coordinate
    /// comes first. `conjugators` are rank `n-1` elements for the reduced
    /// tuple: either `L` of them (normalized so the last is the identity) or
    /// `L-1` applied to the first `L-1` elements. `omega0` lists the roots
    /// whose planes form `Ω_0`; they must lie in `Ω_{x_L}`.
    pub fn strategy_check(
        &self,
        tuple: &[TorusElement],
        omega0: &[Root],
        m: &AlgebraElement,
        conjugators: &[GroupElement],
        tol: f64,
    ) -> Result<StrategyReport> {
        let n = self.rank();
        if n < 3 {
            return Err(Error::InvalidRank { rank: n, min: 3, max: RootFrame::MAX_RANK });
        }
        validate_tuple(tuple, n)?;
        let l = tuple.len();
        if m.rank() != n {
            return Err(Error::RankMismatch(n, m.rank()));
        }
        let gs: Vec<GroupElement> = if conjugators.len() == l {
            let last_inv = conjugators[l - 1].inverse();
            conjugators[..l - 1].iter().map(|g| last_inv.mul(g)).collect::<Result<_>>()?
        } else if conjugators.len() == l - 1 {
            conjugators.to_vec()
        } else {
            return Err(Error::InvalidConfig("need L or L-1 conjugators"));
        };
        for g in &gs {
            if g.rank() != n - 1 {
                return Err(Error::RankMismatch(n - 1, g.rank()));
            }
        }
        let frame = &self.frame;
        let d = frame.ambient_dim();
        let coords: Vec<_> = tuple.iter().map(reduction_coordinates).collect::<Result<_>>()?;
        let omega_roots: Vec<Vec<Root>> = coords
            .iter()
            .map(|c| frame.nonannihilating_roots(c).into_iter().filter(|r| r.involves(0)).collect())
            .collect();
        let last_roots = &omega_roots[l - 1];
        for r in omega0 {
            if !last_roots.contains(&r.positive()) {
                return Err(Error::OmegaNotContained(r.to_string()));
            }
        }
        let omega0: Vec<Root> = omega0.iter().map(|r| r.positive()).collect();

        // The reduced tuple at rank n-1 with the given conjugators.
        let small = RootFrame::new(n - 1)?;
        let reduced: Vec<TorusElement> = tuple.iter().map(reduce).collect::<Result<_>>()?;
        let reduced_spans: Vec<SubspaceBasis> =
            reduced.iter().map(|x| small.nonannihilating_span(x)).collect::<Result<_>>()?;
        let mut all_gs = gs.clone();
        all_gs.push(GroupElement::identity(n - 1));
        let small_oracle = Oracle { frame: small };
        let reduced_rank = small_oracle.span_rank(&reduced_spans, &all_gs, tol);
        let reduced_full_rank = reduced_rank == small_oracle.frame.ambient_dim();

        let omega = frame.omega_full();
        let sub = frame.embedded_subalgebra();
        let mut hypotheses = true;
        for roots in &omega_roots {
            hypotheses &= omega.contains(&frame.planes_span(roots)?, 1e-8);
        }
        for k in 0..sub.dim() {
            let h = AlgebraElement::from_coordinates(n, &sub.matrix().column(k).into_owned());
            hypotheses &= omega.contains(&omega.map(&crate::liealg::ad_matrix(&h), SPAN_TOL), 1e-8);
        }

        // (i) sp(Ad(g_i)Ω_{x_i}, Ω_{x_L} \ Ω_0) = sp Ω.
        let mut cols: Vec<DVector<f64>> = Vec::new();
        for (i, g) in gs.iter().enumerate() {
            let a = adjoint_matrix(&embed_group(g));
            for v in frame.planes_span(&omega_roots[i])?.vectors() {
                cols.push(&a * v);
            }
        }
        let rest: Vec<Root> = last_roots.iter().copied().filter(|r| !omega0.contains(r)).collect();
        cols.extend(frame.planes_span(&rest)?.vectors());
        let span_i = SubspaceBasis::from_vectors(d, &cols, tol);
        let condition_i = span_i.dim() == omega.dim() && omega.contains(&span_i, 1e-8);

        // (ii) The ad(M)-closure of N_{x_L} \ Ω_0 stays in sp(Ω, g_{n-1}).
        let big = SubspaceBasis::span_of(&[&omega, &sub], SPAN_TOL);
        let last_n: Vec<Root> =
            frame.nonannihilating_roots(&coords[l - 1]).into_iter().filter(|r| !omega0.contains(r)).collect();
        let adm = crate::liealg::ad_matrix(m);
        let mut krylov = frame.planes_span(&last_n)?;
        loop {
            let image = krylov.map(&adm, SPAN_TOL);
            let next = SubspaceBasis::span_of(&[&krylov, &image], SPAN_TOL);
            if next.dim() == krylov.dim() {
                break;
            }
            krylov = next;
        }
        let residual_ii = big.containment_residual(&krylov);
        let condition_ii = residual_ii < 1e-8;

        // (iii) Ad(exp tM)Ω_0 reaches the complement of sp(Ω, g_{n-1}).
        let complement = big.complement();
        let omega0_span = frame.planes_span(&omega0)?;
        let mut min_projection = f64::INFINITY;
        for t in [-0.1, -0.05, 0.05, 0.1] {
            let g = exp_alg(&m.scale(t));
            let best = omega0_span
                .vectors()
                .iter()
                .map(|v| {
                    let y = adjoint(&g, &AlgebraElement::from_coordinates(n, v)).expect("same rank");
                    complement.project(&y.coordinates()).norm()
                })
                .fold(0.0, f64::max);
            min_projection = min_projection.min(best);
        }
        let condition_iii = complement.dim() == 1 && min_projection > 1e-10;

        Ok(StrategyReport {
            rank: n,
            reduced_rank,
            reduced_full_rank,
            omega_dim: omega.dim(),
            omega_hypotheses: hypotheses,
            condition_i,
            span_rank_i: span_i.dim(),
            condition_ii,
            residual_ii,
            krylov_dim_ii: krylov.dim(),
            condition_iii,
            min_projection_iii: min_projection,
            complement_dim: complement.dim(),
        })
    }

    /// [`Oracle::strategy_check`] with `Ω_0` the plane of `e_1`, `M` its
    /// first basis vector and conjugators from a rank test of the reduced
    /// tuple.
    pub fn default_strategy_check(&self, tuple: &[TorusElement], config: &OracleConfig) -> Result<StrategyReport> {
        let n = self.rank();
        if n < 3 {
            return Err(Error::InvalidRank { rank: n, min: 3, max: RootFrame::MAX_RANK });
        }
        let reduced: Vec<TorusElement> = tuple.iter().map(reduce).collect::<Result<_>>()?;
        let cert = Oracle::new(n - 1)?.rank_test(&reduced, config.trials, config.seed, config.tolerance)?;
        let gs = cert.witness.unwrap_or_else(|| reduced.iter().map(|_| GroupElement::identity(n - 1)).collect());
        let e1 = Root::short(0);
        let m = AlgebraElement::from_coordinates(n, &self.frame.plane(e1)?[0]);
        self.strategy_check(tuple, &[e1], &m, &gs, config.tolerance)
    }
}

/// Unordered tuple of canonical types in a sweep.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepItem {
    pub index: usize,
    pub rank: usize,
    pub types: Vec<ElementType>,
}

impl SweepItem {
    pub fn elements(&self) -> Vec<TorusElement> {
        self.types.iter().map(|t| t.canonical_element()).collect()
    }
}

/// All multisets of non-central canonical types at rank `n` with
/// `l_min <= L <= l_max`, by length and then lexicographically in the
/// enumeration order of types.
pub fn sweep_items(n: usize, l_min: usize, l_max: usize) -> Vec<SweepItem> {
    let types = ElementType::enumerate_non_central(n);
    let mut out = Vec::new();
    for l in l_min.max(1)..=l_max {
        let mut idx = alloc::vec![0usize; l];
        loop {
            out.push(SweepItem { index: out.len(), rank: n, types: idx.iter().map(|&i| types[i].clone()).collect() });
            let Some(p) = (0..l).rev().find(|&p| idx[p] + 1 < types.len()) else { break };
            let next = idx[p] + 1;
            for q in idx.iter_mut().skip(p) {
                *q = next;
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepOutcome {
    pub item: SweepItem,
    pub verdict: EligibilityVerdict,
    pub certificate: RankCertificate,
    pub probe: Option<ForcedEigenvalueReport>,
}

impl SweepOutcome {
    /// Eligible iff a full-rank configuration was found.
    pub fn agrees(&self) -> bool {
        self.verdict.eligible == (self.certificate.verdict == RankVerdict::FullRankFound)
    }

    /// A full-rank find for an ineligible tuple contradicts necessity.
    pub fn soundness_violation(&self) -> bool {
        !self.verdict.eligible && self.certificate.verdict == RankVerdict::FullRankFound
    }

    pub fn probe_passed(&self) -> bool {
        self.probe.as_ref().is_none_or(|p| p.passed)
    }
}

/// Runs the decision, the rank test and (for ineligible tuples) the probe on
/// one item. All randomness derives from `config.seed` and the item index.
pub fn evaluate_item(oracle: &Oracle, item: &SweepItem, config: &OracleConfig) -> Result<SweepOutcome> {
    let tuple = item.elements();
    let verdict = decide_eligibility(&tuple)?;
    let seed = mix_seed(config.seed, item.index as u64, 0);
    let certificate = oracle.rank_test(&tuple, config.trials, seed, config.tolerance)?;
    let probe = if verdict.eligible {
        None
    } else {
        Some(oracle.forced_eigenvalue_probe(&tuple, config.samples, seed, config.eigen_tolerance)?)
    };
    Ok(SweepOutcome { item: item.clone(), verdict, certificate, probe })
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SweepSummary {
    pub rank: usize,
    pub total: usize,
    pub eligible: usize,
    pub agreements: usize,
    pub soundness_violations: usize,
    pub probe_failures: usize,
    /// Indices of items where decision and rank test disagree.
    pub disagreements: Vec<usize>,
}

impl SweepSummary {
    pub fn new(rank: usize) -> Self {
        SweepSummary { rank, ..Default::default() }
    }

    pub fn record(&mut self, o: &SweepOutcome) {
        self.total += 1;
        self.eligible += o.verdict.eligible as usize;
        if o.agrees() {
            self.agreements += 1;
        } else {
            self.disagreements.push(o.item.index);
        }
        self.soundness_violations += o.soundness_violation() as usize;
        self.probe_failures += !o.probe_passed() as usize;
    }

    pub fn all_agree(&self) -> bool {
        self.disagreements.is_empty() && self.probe_failures == 0
    }
}

/// Exhaustive sweep over tuples with `2 <= L <= l_max`, feeding each outcome
/// to `sink` in item order.
pub fn cross_validate<F: FnMut(&SweepOutcome)>(
    n: usize,
    l_max: usize,
    config: &OracleConfig,
    mut sink: F,
) -> Result<SweepSummary> {
    if !(2..=4).contains(&n) {
        return Err(Error::InvalidRank { rank: n, min: 2, max: 4 });
    }
    if l_max < 2 {
        return Err(Error::TupleTooShort(l_max));
    }
    config.validate()?;
    let oracle = Oracle::new(n)?;
    let mut summary = SweepSummary::new(n);
    for item in sweep_items(n, 2, l_max) {
        let outcome = evaluate_item(&oracle, &item, config)?;
        summary.record(&outcome);
        sink(&outcome);
    }
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eligibility::ForcedKind;
    use alloc::vec;

    fn el(u: usize, v: usize, parts: &[usize]) -> TorusElement {
        ElementType::new(u, v, parts.to_vec()).canonical_element()
    }

    #[test]
    fn seeds_are_deterministic_and_spread() {
        assert_eq!(mix_seed(1, 2, 3), mix_seed(1, 2, 3));
        assert_ne!(mix_seed(1, 2, 3), mix_seed(1, 3, 2));
        assert_ne!(mix_seed(0, 0, 0), mix_seed(0, 0, 1));
    }

    #[test]
    fn config_validation() {
        assert!(OracleConfig::default().validate().is_ok());
        assert!(OracleConfig { trials: 0, ..Default::default() }.validate().is_err());
        assert!(OracleConfig { tolerance: 0.5, ..Default::default() }.validate().is_err());
    }

    #[test]
    fn rank_two_examples() {
        let o = Oracle::new(2).unwrap();
        let d2 = el(0, 2, &[]);
        let four = o.rank_test(&vec![d2.clone(); 4], 50, 7, 1e-8).unwrap();
        assert_eq!((four.verdict, four.best_rank), (RankVerdict::FullRankFound, 10));
        assert!(four.witness.is_some());
        let three = o.rank_test(&vec![d2.clone(); 3], 50, 7, 1e-8).unwrap();
        assert_eq!(three.verdict, RankVerdict::NeverFullRank);
        assert!(three.best_rank <= 9);
        assert_eq!(three.trials, 50);
        let reg = el(0, 0, &[1, 1]);
        assert_eq!(o.rank_test(&[d2.clone(), reg], 50, 7, 1e-8).unwrap().verdict, RankVerdict::FullRankFound);
        assert_eq!(o.rank_test(core::slice::from_ref(&d2), 5, 0, 1e-8), Err(Error::TupleTooShort(1)));
        assert_eq!(o.rank_test(&[d2, TorusElement::identity(2)], 5, 0, 1e-8), Err(Error::CentralElement(1)));
    }

    #[test]
    fn probe_examples() {
        let o = Oracle::new(2).unwrap();
        let d2 = el(0, 2, &[]);
        let r = o.forced_eigenvalue_probe(&vec![d2.clone(); 3], 100, 1, 1e-8).unwrap();
        assert!(r.passed && r.observed_min_multiplicity >= 2, "{r:?}");
        let r = o.forced_eigenvalue_probe(&[el(1, 0, &[1]), d2.clone()], 100, 1, 1e-8).unwrap();
        assert!(r.passed, "{r:?}");
        let r = o.forced_eigenvalue_probe(&[el(0, 0, &[2]), d2.clone()], 100, 1, 1e-8).unwrap();
        assert_eq!(r.expected.kind, ForcedKind::Rotation);
        assert!(r.passed, "{r:?}");
        let r = o.forced_eigenvalue_probe(&[d2.clone(), d2.clone()], 100, 1, 1e-8).unwrap();
        assert_eq!(r.expected.kind, ForcedKind::PlusOne);
        assert!(r.passed && r.observed_min_multiplicity >= 3, "{r:?}");
        assert_eq!(o.forced_eigenvalue_probe(&vec![d2; 4], 10, 1, 1e-8), Err(Error::TupleEligible));
    }

    #[test]
    fn distinct_eigenvalues() {
        let o = Oracle::new(2).unwrap();
        let d2 = el(0, 2, &[]);
        let reg = el(0, 0, &[1, 1]);
        assert!(o.distinct_eigenvalue_probe(&[d2.clone(), reg.clone()], 20, 3).unwrap());
        assert!(o.distinct_eigenvalue_probe(&[reg.clone(), reg], 20, 3).unwrap());
        assert_eq!(o.distinct_eigenvalue_probe(&[d2.clone(), d2], 20, 3), Err(Error::TupleIneligible));
    }

    #[test]
    fn strategy_for_d3_pair_and_regular() {
        let o = Oracle::new(3).unwrap();
        let d3 = el(0, 3, &[]);
        let tuple = [d3.clone(), d3, el(0, 0, &[1, 1, 1])];
        let report = o.default_strategy_check(&tuple, &OracleConfig::default()).unwrap();
        assert!(report.passed(), "{report:?}");
        assert_eq!(report.complement_dim, 1);
        assert_eq!(report.omega_dim, 10);
        let m = AlgebraElement::from_coordinates(3, &o.frame().plane(Root::short(0)).unwrap()[0]);
        let gs = vec![GroupElement::identity(2); 3];
        // e_1 - e_2 is annihilated by D_3, so its plane is not in Ω of a D_3 last element.
        let bad = [tuple[2].clone(), tuple[0].clone()];
        assert!(matches!(
            o.strategy_check(&bad, &[Root::diff(0, 1)], &m, &gs[..2], 1e-8),
            Err(Error::OmegaNotContained(_))
        ));
    }

    #[test]
    fn sweep_enumeration_counts() {
        assert_eq!(sweep_items(2, 2, 2).len(), 21);
        assert_eq!(sweep_items(2, 3, 3).len(), 56);
        assert_eq!(sweep_items(2, 4, 4).len(), 126);
        assert_eq!(sweep_items(3, 3, 3).len(), 455);
        let items = sweep_items(2, 2, 3);
        assert!(items.iter().enumerate().all(|(i, it)| it.index == i));
        let mut keys: Vec<Vec<ElementType>> = items.iter().map(|it| it.types.clone()).collect();
        keys.sort();
        keys.dedup();
        assert_eq!(keys.len(), items.len());
    }

    #[test]
    fn rank_two_pairs_agree() {
        let mut violations = 0;
        let summary = cross_validate(2, 2, &OracleConfig { samples: 20, ..Default::default() }, |o| {
            violations += o.soundness_violation() as usize;
        })
        .unwrap();
        assert_eq!(summary.total, 21);
        assert!(summary.all_agree(), "{summary:?}");
        assert_eq!(violations, 0);
    }
}
