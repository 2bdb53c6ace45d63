//! Acceptance run: one PASS/FAIL line per criterion, exit 1 if any fails.
//! Seeds and instance counts are pinned so reruns are byte-for-byte stable
//! (apart from timings). Every generated family lands in a corpus manifest.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use junta_forge::junta::{compute_regime_j, extract_hitting_juntas, ExtractOptions, LogBase, Regime, Scale, Verdict};
use junta_forge::oracles::{Manifest, ManifestEntry};
use junta_forge::properties::{count_property_t, HittingSystem};
use junta_forge::report::Report;
use junta_forge::setcore::{binom, rational};
use junta_forge::verify::{verify_theorem, SweepParams};
use junta_forge::{Budget, SetFamily};

const SEED: u64 = 0;

struct Outcome {
    pass: bool,
    detail: String,
}

#[derive(Default)]
struct Run {
    corpus: Vec<ManifestEntry>,
}

impl Run {
    fn sweep(&mut self, name: &str, instances: Option<usize>, nmax: Option<usize>, xmax: Option<usize>) -> Report {
        let params = SweepParams {
            seed: SEED,
            instances,
            nmax,
            xmax,
            budget: Budget::unlimited(),
        };
        let mut report = Report::new(vec!["verify-theorem".into(), name.into()]);
        verify_theorem(name, &params, &mut report).unwrap_or_else(|e| panic!("sweep {name}: {e}"));
        self.corpus.append(&mut report.corpus);
        report
    }
}

/// Passes when nothing failed and every listed check saw at least `min`
/// passing observations.
fn judge(reports: &[&Report], required: &[(&str, usize)]) -> Outcome {
    let mut pass = true;
    let mut detail = String::new();
    for r in reports {
        for c in &r.checks {
            let counts = c.counts.unwrap_or_default();
            if c.is_fail() {
                pass = false;
                let _ = write!(detail, "{} FAILED ({}) ", c.name, c.detail.as_deref().unwrap_or(""));
            }
            let _ = write!(
                detail,
                "{}={}/{}",
                c.name,
                counts.passed,
                counts.passed + counts.failed + counts.skipped
            );
            if counts.skipped > 0 {
                let _ = write!(detail, "({} skipped)", counts.skipped);
            }
            detail.push(' ');
        }
    }
    for &(name, min) in required {
        let seen: usize = reports
            .iter()
            .flat_map(|r| &r.checks)
            .filter(|c| c.name == name)
            .map(|c| c.counts.unwrap_or_default().passed)
            .sum();
        if seen < min {
            pass = false;
            let _ = write!(detail, "| {name}: only {seen} passing observations, need {min} ");
        }
    }
    Outcome {
        pass,
        detail: detail.trim_end().to_string(),
    }
}

fn value<'a>(r: &'a Report, key: &str) -> &'a str {
    r.values.get(key).map(String::as_str).unwrap_or("?")
}

fn walk_identity(_: &mut Run) -> Outcome {
    let (mut points, mut bad, mut first) = (0, 0, None);
    for n in 1..=14usize {
        for k in 1..=n {
            for t in 1..=k {
                points += 1;
                let count = count_property_t(n, k, t).unwrap();
                let want = binom(n as i64, (k - t) as i64).unwrap();
                if count != want {
                    bad += 1;
                    first.get_or_insert(format!("n={n} k={k} t'={t}: {count} vs {want}"));
                }
            }
        }
    }
    let mut detail = format!("{} of {points} grid points match C(n, k-t')", points - bad);
    if let Some(f) = first {
        let _ = write!(
            detail,
            "; first mismatch {f}; every mismatch has n+t' < 2k, where all C(n,k) sets qualify"
        );
    }
    Outcome { pass: bad == 0, detail }
}

fn shifting(run: &mut Run) -> Outcome {
    let r = run.sweep("shifting", Some(1000), None, None);
    let mut o = judge(
        &[&r],
        &[
            ("shift_preserves_size", 1000),
            ("make_shifted_is_shifted", 1000),
            ("shifts_preserve_cross_t", 1000),
            ("shifts_preserve_cross_dependence", 1000),
        ],
    );
    let violated = value(&r, "shift_junta_residual.violated");
    if violated != "0" {
        o.pass = false;
    }
    o.detail = format!(
        "{} | shift_junta residual, arbitrary defining family: {} held, {violated} grew (e.g. F={{123}} on [4], center {{1,3,4}}, defining {{13}}, shift 2<-4: 0 -> 1)",
        o.detail,
        value(&r, "shift_junta_residual.held"),
    );
    o
}

fn pair_pipeline(run: &mut Run) -> Outcome {
    let r = run.sweep("thm-pair", Some(250), None, None);
    judge(
        &[&r],
        &[
            ("cross_t_defining", 250),
            ("defining_pairs_exhaustive", 250),
            ("residual_a_recomputed", 250),
            ("residual_b_recomputed", 250),
        ],
    )
}

/// Two stars at n = 22 under C = 2, s = 2, alpha = 1, r = 1, k = 2.
fn two_stars_at_22() -> Outcome {
    let star = SetFamily::level_filtered(22, 2, |s| s.contains(1)).unwrap();
    let families = [star.clone(), star];
    let one = rational(1, 1);
    let system = HittingSystem::new(vec![one.clone(), one.clone()], one.clone()).unwrap();
    let params = compute_regime_j(
        Regime::III {
            base: LogBase::parse("2").unwrap(),
        },
        system.weights(),
        Scale::Sizes(vec![2, 2]),
        one,
    )
    .unwrap();
    let ex = extract_hitting_juntas(&system, &families, &params, &ExtractOptions::default()).unwrap();
    let mut pass = ex.admissibility.is_admissible();
    let mut detail = format!("n=22 two stars: j={} admissible={pass}", params.j);
    for c in &ex.checks {
        if let Verdict::Fail(why) = &c.verdict {
            pass = false;
            let _ = write!(detail, " {} FAILED ({why})", c.name);
        }
    }
    let bounds = ex
        .checks
        .iter()
        .filter(|c| c.name.starts_with("residual_bound") && c.verdict == Verdict::Pass)
        .count();
    if bounds != 2 {
        pass = false;
    }
    let _ = write!(detail, " residual bounds passed={bounds}/2");
    Outcome { pass, detail }
}

fn hitting_pipeline(run: &mut Run) -> Outcome {
    let r = run.sweep("thm-hitting", Some(120), None, None);
    let mut o = judge(
        &[&r],
        &[
            ("inclusion[1]", 120),
            ("inclusion[2]", 120),
            ("transversals_hit", 120),
            ("residual_bound[1]", 1),
            ("residual_bound[2]", 1),
        ],
    );
    let ex = two_stars_at_22();
    o.pass &= ex.pass;
    o.detail = format!("{} | {}", o.detail, ex.detail);
    o
}

fn sum_hits(run: &mut Run) -> Outcome {
    let r = run.sweep("propsumzero", Some(1000), None, None);
    let mut o = judge(&[&r], &[("cross_dependent_hits_q1", 250), ("cross_union_hits_q", 250)]);
    let total: usize = r.checks.iter().map(|c| c.counts.unwrap_or_default().passed).sum();
    if total < 500 {
        o.pass = false;
    }
    o
}

fn dichotomy(run: &mut Run) -> Outcome {
    let d = run.sweep("prop2.5", Some(500), None, None);
    let l = run.sweep("lemcross", Some(500), None, None);
    let mut o = judge(&[&d, &l], &[("dichotomy", 500), ("size_bound", 500)]);
    let _ = write!(
        o.detail,
        " | strengthened B-branch bound (tracked): {} held, {} violated",
        value(&l, "size_bound_strengthened.held"),
        value(&l, "size_bound_strengthened.violated")
    );
    o
}

fn traces(run: &mut Run) -> Outcome {
    let r = run.sweep("lemshift", Some(300), None, None);
    judge(&[&r], &[("traces_cross_intersecting", 300)])
}

fn shadow(run: &mut Run) -> Outcome {
    let r = run.sweep("bt", Some(1000), Some(10), None);
    judge(&[&r], &[("shadow_density", 1000)])
}

fn extremal(run: &mut Run) -> Outcome {
    let r = run.sweep("emc-extremal", None, Some(12), None);
    judge(&[&r], &[("size_identity", 1), ("cross_dependent", 1), ("maximal", 1)])
}

fn ground_set_bound(run: &mut Run) -> Outcome {
    let r = run.sweep("lemhls", Some(200), None, Some(8));
    judge(&[&r], &[("some_family_within_bound", 200)])
}

fn calculators(run: &mut Run) -> Outcome {
    let c = run.sweep("cor111", None, None, None);
    let j = run.sweep("regime-j", None, None, None);
    judge(
        &[&c, &j],
        &[("j_below_bound_exact", 1), ("upper_rounded", 1), ("monotone_in_r", 1)],
    )
}

fn biased(run: &mut Run) -> Outcome {
    let r = run.sweep("biased", None, None, None);
    judge(
        &[&r],
        &[("normalization", 1), ("residual_bound[1]", 1), ("residual_bound[2]", 1)],
    )
}

type Criterion = (&'static str, &'static str, fn(&mut Run) -> Outcome);

const CRITERIA: &[Criterion] = &[
    (
        "walk count equals C(n, k-t') for 1 <= t' <= k <= n <= 14",
        "exact, zero mismatches",
        walk_identity,
    ),
    (
        "shifting invariants incl. shift_junta residual, 1000 instances",
        "zero failures",
        shifting,
    ),
    (
        "pair juntas: cross-1 defining families and residual bounds, n in 8..12",
        "exact, zero failures",
        pair_pipeline,
    ),
    (
        "hitting juntas: inclusion, transversals, residual bound incl. n=22 example",
        "exact, zero failures",
        hitting_pipeline,
    ),
    (
        "cross-dependent / cross-union tuples hit, >= 500 instances",
        "zero failures",
        sum_hits,
    ),
    (
        "dichotomy and cross size bound, 500 pairs each",
        "zero failures",
        dichotomy,
    ),
    ("trace pairs over [s], s <= 3", "zero failures", traces),
    (
        "upper shadow density inequality, 1000 families, n <= 10",
        "exact, zero failures",
        shadow,
    ),
    (
        "extremal family: size identity, cross-dependence, maximality",
        "exact, zero failures",
        extremal,
    ),
    (
        "cross-dependent G_i in (X choose t_i), |X| <= 8, 200 instances",
        "zero failures",
        ground_set_bound,
    ),
    (
        "parameter calculators: j < 2(1+alpha)s, regime j upper-rounded",
        "zero failures",
        calculators,
    ),
    (
        "biased measure normalization and residual measure <= p^r",
        "exact rational, zero failures",
        biased,
    ),
];

fn main() {
    let started = Instant::now();
    let mut run = Run::default();
    let mut failed = 0;
    for (i, (title, tolerance, check)) in CRITERIA.iter().enumerate() {
        let t = Instant::now();
        let o = check(&mut run);
        if !o.pass {
            failed += 1;
        }
        println!(
            "criterion {:02} {} {title} | tolerance: {tolerance} | {:.1}s | {}",
            i + 1,
            if o.pass { "PASS" } else { "FAIL" },
            t.elapsed().as_secs_f64(),
            o.detail
        );
    }

    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("acceptance");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("manifest.json");
    let families: usize = run.corpus.iter().map(|e| e.hashes.len()).sum();
    let entries = run.corpus.len();
    let manifest = Manifest {
        entries: run.corpus,
        ..Default::default()
    };
    std::fs::write(&path, manifest.to_json()).unwrap();
    println!(
        "corpus manifest: {} ({entries} entries, {families} families)",
        path.display()
    );
    println!(
        "acceptance: {} of {} criteria passed in {:.1}s",
        CRITERIA.len() - failed,
        CRITERIA.len(),
        started.elapsed().as_secs_f64()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
