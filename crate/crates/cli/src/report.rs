//! Human-readable tables.

use std::fmt::Write;

use crate::records::{
    BracketRecord, CertificateRecord, ClassifyRecord, DecisionRecord, ProbeCommandRecord, ProbeRecord, RankRecord,
    StrategyRecord, SummaryRecord, VerdictRecord, VerifyRecord,
};

fn row(out: &mut String, key: &str, value: impl std::fmt::Display) {
    let _ = writeln!(out, "  {key:<28} {value}");
}

fn inequality(v: &VerdictRecord) -> String {
    if v.case == "i" {
        return "two or more elements of dominant type BD or S".to_string();
    }
    let op = if v.lhs <= v.rhs { "<=" } else { ">" };
    format!("{} {op} {}", v.lhs, v.rhs)
}

fn verdict_rows(out: &mut String, prefix: &str, v: &VerdictRecord) {
    row(out, &format!("{prefix}verdict"), if v.eligible { "eligible" } else { "ineligible" });
    row(out, &format!("{prefix}case"), &v.case);
    row(out, &format!("{prefix}inequality"), inequality(v));
}

fn rank_rows(out: &mut String, r: &RankRecord) {
    let reading = if r.verdict == "FullRankFound" {
        "absolutely continuous (full rank found)"
    } else {
        "singular (numerical evidence)"
    };
    row(out, "rank test", reading);
    row(out, "best rank", format!("{} / {}", r.best_rank, r.ambient_dim));
    row(out, "trials run", r.trials);
    row(out, "seed", r.seed);
    row(out, "tolerance", format!("{:e}", r.tolerance));
}

fn certificate_rows(out: &mut String, c: &CertificateRecord) {
    let values: Vec<String> = c.forced_eigenvalues.iter().map(|a| format!("exp(i·{a})")).collect();
    row(out, "forced eigenvalue", values.join(" or "));
    row(out, "multiplicity bound", c.multiplicity_bound);
    row(out, "deficit", c.deficit);
}

fn probe_rows(out: &mut String, p: &ProbeRecord) {
    certificate_rows(out, &p.certificate);
    row(out, "probe samples", p.samples);
    row(out, "min observed multiplicity", p.observed_min_multiplicity);
    row(out, "max eigenvalue distance", format!("{:e}", p.max_eigenvalue_distance));
    row(out, "probe", if p.passed { "passed" } else { "FAILED" });
}

pub fn classify(records: &[ClassifyRecord]) -> String {
    let mut out = String::new();
    for r in records {
        let _ = writeln!(out, "{} at rank {}", r.type_label, r.rank);
        row(&mut out, "element", &r.element);
        if r.central {
            row(&mut out, "central", format!("yes (type B{})", r.rank));
        }
        row(&mut out, "annihilating roots", format!("{} ({} positive)", r.annihilator, r.annihilating_positive_roots));
        let s: Vec<String> = r.s.iter().map(|s| s.to_string()).collect();
        row(&mut out, "dominant type", format!("{} (S = {})", r.dominant, s.join(", ")));
        row(&mut out, "dim C_x", r.dim_conjugacy_class);
        row(&mut out, "Lie annihilating roots", &r.lie_annihilator);
        row(&mut out, "Lie dominant type", format!("{} (S = {})", r.lie_dominant, r.lie_s));
        row(&mut out, "dim O_X", r.dim_adjoint_orbit);
    }
    out
}

pub fn decision(r: &DecisionRecord) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "({}) at rank {}", r.tuple.join(", "), r.rank);
    verdict_rows(&mut out, "", &r.group);
    row(&mut out, "parity", r.group.parity);
    if let Some(c) = &r.certificate {
        certificate_rows(&mut out, c);
    }
    row(&mut out, "Lie algebra verdict", if r.lie_algebra.eligible { "eligible" } else { "ineligible" });
    row(&mut out, "Lie algebra inequality", inequality(&r.lie_algebra));
    out
}

fn strategy_rows(out: &mut String, s: &StrategyRecord) {
    let mark = |b: bool| if b { "pass" } else { "fail" };
    row(out, "strategy: reduced tuple", format!("rank {} ({})", s.reduced_rank, mark(s.reduced_full_rank)));
    row(out, "strategy: Omega hypotheses", format!("dim {} ({})", s.omega_dim, mark(s.omega_hypotheses)));
    row(out, "strategy: condition (i)", format!("span rank {} ({})", s.span_rank_i, mark(s.condition_i)));
    row(out, "strategy: condition (ii)", format!("residual {:e} ({})", s.residual_ii, mark(s.condition_ii)));
    row(
        out,
        "strategy: condition (iii)",
        format!("projection {:e}, target dim {} ({})", s.min_projection_iii, s.complement_dim, mark(s.condition_iii)),
    );
}

pub fn verify(r: &VerifyRecord) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "({}) at rank {}", r.tuple.join(", "), r.rank);
    verdict_rows(&mut out, "", &r.verdict);
    rank_rows(&mut out, &r.rank_test);
    if let Some(p) = &r.probe {
        probe_rows(&mut out, p);
    }
    if let Some(s) = &r.strategy {
        strategy_rows(&mut out, s);
    }
    row(&mut out, "oracle agrees", if r.agrees { "yes" } else { "NO" });
    out
}

pub fn probe(r: &ProbeCommandRecord) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "({}) at rank {}", r.tuple.join(", "), r.rank);
    row(&mut out, "verdict", if r.eligible { "eligible" } else { "ineligible" });
    if let Some(p) = &r.forced {
        probe_rows(&mut out, p);
    }
    if let Some(found) = r.distinct_eigenvalues_found {
        row(&mut out, "distinct eigenvalues", if found { "found" } else { "not found" });
        row(&mut out, "samples", r.samples);
    }
    row(&mut out, "seed", r.seed);
    out
}

pub fn brackets(r: &BracketRecord) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "root planes of so({})", 2 * r.rank + 1);
    row(&mut out, "dimension audit", format!("2·{} + {} = {}", r.root_planes, r.torus_dim, r.dim_algebra));
    row(&mut out, "pairs checked", r.pairs_checked);
    row(&mut out, "asserted components", r.asserted_components);
    row(&mut out, "max grading residual", format!("{:e}", r.max_residual));
    row(&mut out, "min asserted component", format!("{:e}", r.min_asserted));
    for f in &r.failures {
        row(&mut out, "failure", f);
    }
    row(&mut out, "result", if r.passed { "passed" } else { "FAILED" });
    out
}

pub fn summary(r: &SummaryRecord) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "sweep at rank {}, lengths {} to {}", r.rank, r.min_len, r.max_len);
    row(&mut out, "tuples evaluated", r.total);
    row(&mut out, "already present", r.skipped_existing);
    row(&mut out, "eligible", r.eligible);
    row(&mut out, "agreements", r.agreements);
    row(&mut out, "soundness violations", r.soundness_violations);
    row(&mut out, "probe failures", r.probe_failures);
    let list: Vec<String> = r.disagreements.iter().map(|i| i.to_string()).collect();
    row(&mut out, "disagreements", if list.is_empty() { "none".to_string() } else { list.join(", ") });
    out
}
