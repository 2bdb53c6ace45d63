//! Named sweeps: generate hypothesis-satisfying inputs, run the conclusion
//! checkers, aggregate verdicts into a report.

mod calculators;
mod combinatorics;
mod exact_log;
mod juntas;

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::budget::Budget;
use crate::error::{invalid, Error, Result};
use crate::junta::Verdict;
use crate::oracles::{hash_text, Generated, GeneratorConfig, ManifestEntry, Rng};
use crate::report::{Report, Tally};
use crate::setcore::{KSet, SetFamily};

/// Sweep scale. `None` fields take the per-theorem defaults.
#[derive(Clone, Copy, Debug, Default, Serialize)]
pub struct SweepParams {
    pub seed: u64,
    pub instances: Option<usize>,
    pub nmax: Option<usize>,
    pub xmax: Option<usize>,
    #[serde(skip)]
    pub budget: Budget,
}

type Runner = fn(&SweepParams, &mut Report) -> Result<()>;

const THEOREMS: &[(&str, &str, Runner)] = &[
    (
        "prop2.4",
        "count of k-sets with property t' (grid n <= nmax)",
        combinatorics::prop_walk_count,
    ),
    (
        "prop2.5",
        "dichotomy on shifted cross-t' pairs",
        combinatorics::prop_dichotomy,
    ),
    (
        "lemcross",
        "size bounds for shifted cross-t' pairs, stated and strengthened",
        combinatorics::lemcross,
    ),
    (
        "lemshift",
        "traces of shifted cross-t pairs over [s], s <= 3",
        combinatorics::lemshift,
    ),
    (
        "lemhls",
        "size bound for cross-dependent G_i in (X choose t_i), |X| <= xmax",
        combinatorics::lemhls,
    ),
    (
        "shifting",
        "shift invariants: sizes, cross properties, make_shifted, shift_junta",
        combinatorics::shifting,
    ),
    (
        "bt",
        "upper shadow density inequality",
        combinatorics::bollobas_thomason,
    ),
    (
        "emc-extremal",
        "extremal family: size, cross-dependence, maximality",
        combinatorics::emc_extremal,
    ),
    (
        "thm-emc",
        "min |F_i| bound for cross-dependent k-uniform tuples at admissible n",
        combinatorics::thm_emc,
    ),
    (
        "thm-pair",
        "pair juntas with j = 2r-t-1 and residual bounds",
        juntas::thm_pair,
    ),
    (
        "thm-pair-cor",
        "pair juntas in the constant-free form",
        juntas::thm_pair_cor,
    ),
    (
        "thm-hitting",
        "hitting juntas: inclusion, transversals, residual sizes",
        juntas::thm_hitting,
    ),
    (
        "propsumzero",
        "shifted cross-dependent and cross-union tuples hit",
        juntas::propsumzero,
    ),
    (
        "cross-agreeing",
        "shifted cross-agreeing tuples hit with weights 1/(s-1)",
        juntas::cross_agreeing,
    ),
    (
        "biased",
        "measure normalization and biased junta residuals",
        juntas::biased,
    ),
    (
        "cor111",
        "j < 2(1+alpha)s on a grid of (C, s, alpha)",
        calculators::cor111,
    ),
    (
        "regime-j",
        "regime formulas are upper-rounded and monotone in r",
        calculators::regime_j,
    ),
];

pub fn theorem_names() -> Vec<&'static str> {
    THEOREMS.iter().map(|t| t.0).collect()
}

pub fn theorem_descriptions() -> Vec<(&'static str, &'static str)> {
    THEOREMS.iter().map(|t| (t.0, t.1)).collect()
}

/// Runs the named sweep, appending checks, values and notes to `report`.
pub fn verify_theorem(name: &str, params: &SweepParams, report: &mut Report) -> Result<()> {
    let Some(&(_, _, run)) = THEOREMS.iter().find(|t| t.0 == name) else {
        return invalid(format!(
            "unknown theorem '{name}'; available: {}",
            theorem_names().join(", ")
        ));
    };
    let described = serde_json::to_string(&(name, params)).expect("params serialize");
    report.input(format!("sweep:{name}"), hash_text(&described), Some(params.seed));
    run(params, report)
}

/// One checked fact about one instance.
#[derive(Clone, Debug)]
pub(crate) struct Observation {
    check: String,
    verdict: Verdict,
    witness: Vec<KSet>,
}

impl Observation {
    pub fn new(check: impl Into<String>, verdict: Verdict) -> Self {
        Observation {
            check: check.into(),
            verdict,
            witness: Vec::new(),
        }
    }

    pub fn test(check: impl Into<String>, ok: bool, why: impl FnOnce() -> String) -> Self {
        Observation::new(check, Verdict::from_bool(ok, why))
    }

    pub fn skipped(check: impl Into<String>, why: impl Into<String>) -> Self {
        Observation::new(check, Verdict::Skipped(why.into()))
    }

    pub fn witness(mut self, w: impl IntoIterator<Item = KSet>) -> Self {
        self.witness = w.into_iter().collect();
        self
    }
}

#[derive(Clone, Debug, Default)]
pub(crate) struct Instance {
    context: String,
    observations: Vec<Observation>,
    transcript: Vec<String>,
    corpus: Vec<ManifestEntry>,
}

impl Instance {
    pub fn new(context: impl Into<String>) -> Self {
        Instance {
            context: context.into(),
            ..Default::default()
        }
    }

    pub fn push(&mut self, o: Observation) {
        self.observations.push(o);
    }

    /// Records a generator's output in the corpus and its hypothesis transcript.
    pub fn generated(&mut self, construction: &str, cfg: &GeneratorConfig, g: &Generated) {
        self.transcript.extend_from_slice(&g.transcript);
        self.corpus.push(
            ManifestEntry::new(construction, Some(cfg.seed), &g.families)
                .param("n", cfg.n)
                .param("k", cfg.k)
                .param("s", cfg.s)
                .param("samples", cfg.samples),
        );
    }

    /// Records a deterministic construction.
    pub fn constructed(&mut self, entry: ManifestEntry) {
        self.corpus.push(entry);
    }

    /// Records families drawn directly from instance `index`'s stream of sweep seed `seed`.
    pub fn drawn(&mut self, seed: u64, index: usize, families: &[SetFamily]) {
        self.corpus
            .push(ManifestEntry::new("stream", Some(seed), families).param("instance", index));
    }
}

/// Evaluates `count` instances in parallel, each with its own generator stream.
pub(crate) fn run_instances<F>(count: usize, params: &SweepParams, f: F) -> Vec<Result<Instance>>
where
    F: Fn(usize, &mut Rng) -> Result<Instance> + Sync,
{
    let budget = params.budget;
    (0..count)
        .into_par_iter()
        .map(|i| {
            if budget.expired() {
                return Err(Error::BudgetExceeded);
            }
            let mut rng = Rng::stream(params.seed, i as u64);
            f(i, &mut rng)
        })
        .collect()
}

/// Folds instance results into the report in index order. `declared` fixes
/// the order of checks; `tracked` checks become values, not verdicts.
pub(crate) fn fold(
    report: &mut Report,
    declared: &[&str],
    tracked: &[&str],
    results: Vec<Result<Instance>>,
) -> Result<()> {
    let mut tallies: Vec<Tally> = declared.iter().map(|&d| Tally::new(d)).collect();
    let mut transcript: BTreeMap<String, usize> = BTreeMap::new();
    let count = results.len();
    for (i, result) in results.into_iter().enumerate() {
        match result {
            Ok(inst) => {
                for o in inst.observations {
                    let pos = match tallies.iter().position(|t| t.name == o.check) {
                        Some(p) => p,
                        None => {
                            tallies.push(Tally::new(o.check.clone()));
                            tallies.len() - 1
                        }
                    };
                    tallies[pos].record(&o.verdict, &inst.context, &o.witness);
                }
                for line in inst.transcript {
                    *transcript.entry(line).or_default() += 1;
                }
                report.corpus.extend(inst.corpus);
            }
            Err(Error::BudgetExceeded) => {
                for t in &mut tallies {
                    t.record(&Verdict::Skipped("budget".into()), &format!("instance {i}"), &[]);
                }
            }
            Err(e) => return Err(e),
        }
    }
    report.value("instances", count);
    for (line, n) in transcript {
        report.transcript.push(format!("{line} (x{n})"));
    }
    for t in tallies {
        if tracked.contains(&t.name.as_str()) {
            let name = t.name.clone();
            let rec = t.into_record();
            let counts = rec.counts.unwrap_or_default();
            report.value(format!("{name}.held"), counts.passed);
            report.value(format!("{name}.violated"), counts.failed);
            let failed = rec.is_fail();
            if let Some(d) = rec.detail.filter(|_| failed) {
                report.notes.push(format!("{name} (tracked, not a verdict): {d}"));
            }
        } else {
            report.push(t.into_record());
        }
    }
    Ok(())
}

/// Budget-exhaustion errors become skipped observations; others propagate.
pub(crate) fn or_skip(check: &str, r: Result<Observation>) -> Result<Observation> {
    match r {
        Err(Error::BudgetExceeded) => Ok(Observation::skipped(check, "budget")),
        other => other,
    }
}
