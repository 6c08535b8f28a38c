//! Subcommands as library functions returning rendered output and an exit
//! code.

use std::io::Write;
use std::path::PathBuf;

use orbital_ac_core::eligibility::{decide_eligibility, decide_lie_eligibility, necessity_certificate};
use orbital_ac_core::liealg::{weyl_bracket_check, RootFrame};
use orbital_ac_core::oracle::{Oracle, OracleConfig, RankVerdict};
use orbital_ac_core::TorusElement;
use serde::Serialize;

use crate::records::{
    BracketRecord, ClassifyRecord, DecisionRecord, ProbeCommandRecord, ProbeRecord, RankRecord, StrategyRecord,
    SummaryRecord, VerifyRecord,
};
use crate::sweep::{self, SweepOptions};
use crate::tuple_spec::{parse_tuple_arg, ParsedTuple};
use crate::{report, CliError, EXIT_DISAGREEMENT, EXIT_INELIGIBLE, EXIT_OK};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Jsonl,
    Table,
}

#[derive(Clone, Debug)]
pub struct Options {
    pub rank: Option<usize>,
    pub tuple: Option<String>,
    pub config: OracleConfig,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub allow_central: bool,
    pub parallel: bool,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            rank: None,
            tuple: None,
            config: OracleConfig::default(),
            format: Format::Table,
            out: None,
            allow_central: false,
            parallel: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Output {
    pub text: String,
    pub code: i32,
}

impl Options {
    fn tuple(&self) -> Result<ParsedTuple, CliError> {
        let arg = self.tuple.as_deref().ok_or_else(|| CliError::Usage("--tuple is required".into()))?;
        parse_tuple_arg(arg)?.resolve(self.rank, self.allow_central)
    }

    fn render<T: Serialize>(&self, records: &[T], table: impl FnOnce() -> String) -> Result<String, CliError> {
        let json = |e: serde_json::Error| CliError::Io(e.to_string());
        Ok(match self.format {
            Format::Table => table(),
            Format::Json if records.len() == 1 => serde_json::to_string_pretty(&records[0]).map_err(json)? + "\n",
            Format::Json => serde_json::to_string_pretty(records).map_err(json)? + "\n",
            Format::Jsonl => {
                let mut buf = Vec::new();
                for r in records {
                    sweep::write_line(&mut buf, r)?;
                }
                String::from_utf8(buf).expect("JSON is UTF-8")
            }
        })
    }

    fn config(&self) -> Result<OracleConfig, CliError> {
        self.config.validate()?;
        Ok(self.config)
    }
}

/// Numerical checks run on the non-central elements only.
fn non_central(t: &ParsedTuple) -> (Vec<TorusElement>, Vec<String>) {
    t.elements.iter().zip(&t.labels).filter(|(x, _)| !x.is_central()).map(|(x, l)| (x.clone(), l.clone())).unzip()
}

pub fn classify(opts: &Options) -> Result<Output, CliError> {
    let mut o = opts.clone();
    o.allow_central = true;
    let t = o.tuple()?;
    let records: Vec<ClassifyRecord> = t.elements.iter().map(ClassifyRecord::new).collect();
    let text = opts.render(&records, || report::classify(&records))?;
    Ok(Output { text, code: EXIT_OK })
}

pub fn decide(opts: &Options) -> Result<Output, CliError> {
    let t = opts.tuple()?;
    let group = decide_eligibility(&t.elements)?;
    let lie = decide_lie_eligibility(&t.elements)?;
    let record = DecisionRecord {
        rank: t.rank,
        tuple: t.labels.clone(),
        group: (&group).into(),
        lie_algebra: (&lie).into(),
        certificate: necessity_certificate(&t.elements)?.as_ref().map(Into::into),
    };
    let text = opts.render(std::slice::from_ref(&record), || report::decision(&record))?;
    Ok(Output { text, code: if group.eligible { EXIT_OK } else { EXIT_INELIGIBLE } })
}

pub fn verify(opts: &Options, strategy: bool) -> Result<Output, CliError> {
    let cfg = opts.config()?;
    let t = opts.tuple()?;
    let verdict = decide_eligibility(&t.elements)?;
    let (elements, labels) = non_central(&t);
    let oracle = Oracle::new(t.rank)?;
    let cert = oracle.rank_test(&elements, cfg.trials, cfg.seed, cfg.tolerance)?;
    let probe = if verdict.eligible {
        None
    } else {
        Some(oracle.forced_eigenvalue_probe(&elements, cfg.samples, cfg.seed, cfg.eigen_tolerance)?)
    };
    let strategy = if strategy {
        if t.rank < 3 {
            return Err(CliError::Usage("--strategy needs rank at least 3".into()));
        }
        Some(StrategyRecord::from(&oracle.default_strategy_check(&elements, &cfg)?))
    } else {
        None
    };
    let agrees =
        verdict.eligible == (cert.verdict == RankVerdict::FullRankFound) && probe.as_ref().is_none_or(|p| p.passed);
    let record = VerifyRecord {
        rank: t.rank,
        tuple: labels,
        verdict: (&verdict).into(),
        rank_test: RankRecord::from(&cert),
        probe: probe.as_ref().map(ProbeRecord::from),
        strategy,
        agrees,
    };
    let text = opts.render(std::slice::from_ref(&record), || report::verify(&record))?;
    Ok(Output { text, code: if agrees { EXIT_OK } else { EXIT_DISAGREEMENT } })
}

/// Forced-eigenvalue probe for ineligible tuples, distinct-eigenvalue
/// search for eligible ones.
pub fn probe(opts: &Options) -> Result<Output, CliError> {
    let cfg = opts.config()?;
    let t = opts.tuple()?;
    let eligible = decide_eligibility(&t.elements)?.eligible;
    let (elements, labels) = non_central(&t);
    let oracle = Oracle::new(t.rank)?;
    let mut record = ProbeCommandRecord {
        rank: t.rank,
        tuple: labels,
        eligible,
        forced: None,
        distinct_eigenvalues_found: None,
        samples: cfg.samples,
        seed: cfg.seed,
    };
    let ok = if eligible {
        let found = oracle.distinct_eigenvalue_probe(&elements, cfg.samples, cfg.seed)?;
        record.distinct_eigenvalues_found = Some(found);
        found
    } else {
        let r = oracle.forced_eigenvalue_probe(&elements, cfg.samples, cfg.seed, cfg.eigen_tolerance)?;
        record.forced = Some((&r).into());
        r.passed
    };
    let text = opts.render(std::slice::from_ref(&record), || report::probe(&record))?;
    Ok(Output { text, code: if ok { EXIT_OK } else { EXIT_DISAGREEMENT } })
}

pub fn brackets(opts: &Options) -> Result<Output, CliError> {
    let n = opts.rank.ok_or_else(|| CliError::Usage("--rank is required".into()))?;
    let frame = RootFrame::new(n)?;
    let record = BracketRecord::new(&weyl_bracket_check(&frame), frame.roots().len());
    let text = opts.render(std::slice::from_ref(&record), || report::brackets(&record))?;
    Ok(Output { text, code: if record.passed { EXIT_OK } else { EXIT_DISAGREEMENT } })
}

#[derive(Clone, Debug)]
pub struct SweepArgs {
    pub min_len: usize,
    pub max_len: usize,
    pub skip_existing: bool,
    pub timings: bool,
}

/// Records go to `--out` when given, otherwise to `records`. The summary
/// is returned as the output text.
pub fn sweep(opts: &Options, args: &SweepArgs, records: &mut dyn Write) -> Result<Output, CliError> {
    let n = opts.rank.ok_or_else(|| CliError::Usage("--rank is required".into()))?;
    let sweep_opts = SweepOptions {
        rank: n,
        min_len: args.min_len,
        max_len: args.max_len,
        config: opts.config()?,
        parallel: opts.parallel,
        timings: args.timings,
    };
    let summary: SummaryRecord = match &opts.out {
        Some(path) => sweep::run_to_file(&sweep_opts, path, args.skip_existing)?,
        None => {
            if args.skip_existing {
                return Err(CliError::Usage("--skip-existing needs --out".into()));
            }
            let s = sweep::run(&sweep_opts, &Default::default(), |r| sweep::write_line(records, r))?;
            records.flush().map_err(|e| CliError::Io(e.to_string()))?;
            s
        }
    };
    let text = opts.render(std::slice::from_ref(&summary), || report::summary(&summary))?;
    let ok = summary.disagreements.is_empty() && summary.probe_failures == 0;
    Ok(Output { text, code: if ok { EXIT_OK } else { EXIT_DISAGREEMENT } })
}
