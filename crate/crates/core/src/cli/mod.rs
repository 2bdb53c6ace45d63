//! Command-line front end. [`run`] returns the process exit code:
//! 0 when every verdict passes, 1 when any fails, 2 on usage, IO or parse errors.

mod args;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::Parser;
use num_rational::BigRational;
use num_traits::One;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::junta::{
    compute_regime_j, extract_biased_juntas, extract_hitting_juntas, extract_pair_juntas, extract_pair_juntas_cor,
    Admissibility, Check, ExtractOptions, HittingExtraction, JuntaSpec, LogBase, PairExtraction, PairOptions, Regime,
    Scale, Verdict,
};
use crate::oracles::{
    emc_extremal, gen_cross_agreeing, gen_cross_dependent, gen_cross_t_pair_sized, gen_cross_union,
    gen_hitting_instance, gen_random_cross_dependent, gen_random_shifted, hash_text, threshold_family, GeneratorConfig,
    Manifest, ManifestEntry,
};
use crate::properties::{
    are_cross_t_intersecting, bollobas_thomason_check, check_cross_agreeing_within, check_cross_union_within,
    check_hitting_within, dichotomy_check, is_cross_dependent_within, lemcross_check, lemhls_check, lemshift_check,
    HittingSystem, Outcome,
};
use crate::report::{CheckRecord, Report};
use crate::setcore::{format_rational, parse_any, parse_rational, serialize_family, KSet, SetFamily};
use crate::shifting::first_unshifted;
use crate::verify::{verify_theorem, SweepParams};

pub use args::Cli;
use args::{
    CheckArgs, Command, Construction, ExtractArgs, ExtractMode, GenArgs, HittingArgs, Property, RegimeArg, ReportArgs,
    VerifyArgs,
};

pub const THREADS_ENV: &str = "JUNTA_FORGE_THREADS";

/// Runs the CLI against the process's stdout and stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    if let Err(msg) = configure_threads() {
        let _ = writeln!(err, "error: {msg}");
        return 2;
    }
    let echo = args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    match dispatch(&cli, echo, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

/// Caps the global rayon pool from the environment. Later calls are no-ops.
fn configure_threads() -> std::result::Result<(), String> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| format!("{THREADS_ENV} must be a positive integer, got '{raw}'"))?;
    // already built (repeated in-process runs): keep the existing pool
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

struct Ctx {
    csv: bool,
    out: Option<PathBuf>,
    budget: Budget,
}

fn dispatch(cli: &Cli, echo: Vec<String>, out: &mut dyn Write) -> Result<i32> {
    let budget = match cli.budget {
        None => Budget::unlimited(),
        Some(s) if s.is_finite() && s >= 0.0 => Budget::from_secs_f64(s),
        Some(s) => {
            return Err(Error::InvalidArgument(format!(
                "--budget must be a non-negative number of seconds, got {s}"
            )))
        }
    };
    let ctx = Ctx {
        csv: cli.csv,
        out: cli.out.clone(),
        budget,
    };
    if let Command::Report(a) = &cli.command {
        return cmd_report(a, &ctx, out);
    }
    if let Command::Gen(a) = &cli.command {
        if ctx.out.is_none() {
            return gen_to_stdout(a, out);
        }
    }

    let start = Instant::now();
    let mut report = Report::new(echo);
    match &cli.command {
        Command::Check(a) => cmd_check(a, &ctx, &mut report)?,
        Command::Extract(a) => cmd_extract(a, &ctx, &mut report)?,
        Command::Gen(a) => cmd_gen(a, &ctx, &mut report)?,
        Command::VerifyTheorem(a) => cmd_verify(a, &ctx, &mut report)?,
        Command::Report(_) => unreachable!("handled above"),
    }
    report
        .timings_us
        .insert("total".into(), start.elapsed().as_micros() as u64);
    emit(&report, &ctx, out)?;
    Ok(report.exit_code())
}

fn render(report: &Report, csv: bool) -> String {
    if csv {
        report.to_csv()
    } else {
        report.to_json()
    }
}

fn emit(report: &Report, ctx: &Ctx, out: &mut dyn Write) -> Result<()> {
    let text = render(report, ctx.csv);
    if let Some(dir) = &ctx.out {
        fs::create_dir_all(dir)?;
        let name = if ctx.csv { "report.csv" } else { "report.json" };
        fs::write(dir.join(name), &text)?;
    }
    out.write_all(text.as_bytes())?;
    Ok(())
}

fn with_path(path: &Path, e: Error) -> Error {
    match e {
        Error::Parse { line, message } => Error::Parse {
            line,
            message: format!("{}: {message}", path.display()),
        },
        Error::Io(io) => Error::Io(std::io::Error::new(io.kind(), format!("{}: {io}", path.display()))),
        other => other,
    }
}

/// Reads and parses every file, recording its source and content hash.
fn load_all(files: &[PathBuf], report: &mut Report) -> Result<Vec<SetFamily>> {
    let mut out = Vec::with_capacity(files.len());
    for path in files {
        let text = fs::read_to_string(path).map_err(|e| with_path(path, e.into()))?;
        let family = parse_any(&text).map_err(|e| with_path(path, e))?;
        report.input(path.display().to_string(), hash_text(&text), None);
        out.push(family);
    }
    Ok(out)
}

fn expect_count(families: &[SetFamily], what: &str, ok: impl Fn(usize) -> bool, want: &str) -> Result<()> {
    if ok(families.len()) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "{what} takes {want} family files, got {}",
            families.len()
        )))
    }
}

fn rational_list(text: &str) -> Result<Vec<BigRational>> {
    text.split(',').map(|p| parse_rational(p.trim())).collect()
}

fn usize_list(text: &str, flag: &str) -> Result<Vec<usize>> {
    text.split(',')
        .map(|p| {
            p.trim()
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("{flag}: '{}' is not a non-negative integer", p.trim())))
        })
        .collect()
}

fn hitting_system(h: &HittingArgs, arity: usize) -> Result<HittingSystem> {
    let weights = match &h.alpha {
        Some(a) => rational_list(a)?,
        None => vec![BigRational::one(); arity],
    };
    let q = match &h.q {
        Some(q) => parse_rational(q)?,
        None => BigRational::from_integer(0.into()),
    };
    let system = HittingSystem::new(weights, q)?;
    match &h.levels {
        Some(l) => system.with_levels(usize_list(l, "--levels")?),
        None => Ok(system),
    }
}

fn integer_q(h: &HittingArgs) -> Result<usize> {
    match &h.q {
        None => Ok(1),
        Some(q) => q
            .trim()
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("--q must be a positive integer here, got '{q}'"))),
    }
}

/// Records a search outcome; an exhausted budget becomes `skipped(budget)`.
fn record_outcome<W>(
    report: &mut Report,
    name: &str,
    outcome: Result<Outcome<W>>,
    witness: impl Fn(&W) -> (Vec<KSet>, String),
) -> Result<()> {
    let record = match outcome {
        Ok(Outcome::Holds) => CheckRecord::from_verdict(name, &Verdict::Pass, &[]),
        Ok(Outcome::Fails(w)) => {
            let (sets, why) = witness(&w);
            CheckRecord::from_verdict(name, &Verdict::Fail(why), &sets)
        }
        Err(Error::BudgetExceeded) => CheckRecord::from_verdict(name, &Verdict::Skipped("budget".into()), &[]),
        Err(e) => return Err(e),
    };
    report.push(record);
    Ok(())
}

fn sets_text(sets: &[KSet]) -> String {
    sets.iter().map(KSet::to_string).collect::<Vec<_>>().join(", ")
}

fn transversal(why: &'static str) -> impl Fn(&Vec<KSet>) -> (Vec<KSet>, String) {
    move |w| (w.clone(), format!("{why}: {}", sets_text(w)))
}

fn bool_check(report: &mut Report, name: &str, ok: bool, why: impl FnOnce() -> String) {
    report.push(CheckRecord::from_verdict(name, &Verdict::from_bool(ok, why), &[]));
}

fn cmd_check(a: &CheckArgs, ctx: &Ctx, report: &mut Report) -> Result<()> {
    let fams = load_all(&a.files, report)?;
    let t = a.t.unwrap_or(1);
    let pair = |what: &str| expect_count(&fams, what, |c| c == 2, "exactly 2");
    let tuple = |what: &str| expect_count(&fams, what, |c| c >= 2, "at least 2");
    match a.property {
        Property::Shifted => {
            for (i, f) in fams.iter().enumerate() {
                let name = if fams.len() == 1 {
                    "shifted".to_string()
                } else {
                    format!("shifted[{}]", i + 1)
                };
                let record = match first_unshifted(f) {
                    None => CheckRecord::from_verdict(name, &Verdict::Pass, &[]),
                    Some((set, u, v)) => CheckRecord::from_verdict(
                        name,
                        &Verdict::Fail(format!("S_({u}<-{v}) moves {set} out of the family")),
                        &[set],
                    ),
                };
                report.push(record);
            }
        }
        Property::CrossT => {
            pair("cross-t")?;
            report.value("t", t);
            record_outcome(
                report,
                "cross_t",
                are_cross_t_intersecting(&fams[0], &fams[1], t),
                |(x, y)| (vec![*x, *y], format!("|{x} ∩ {y}| = {} < {t}", x.intersection_len(y))),
            )?;
        }
        Property::CrossDependent => {
            tuple("cross-dependent")?;
            let out = is_cross_dependent_within(&fams, &ctx.budget);
            record_outcome(
                report,
                "cross_dependent",
                out,
                transversal("pairwise disjoint transversal"),
            )?;
        }
        Property::CrossUnion => {
            tuple("cross-union")?;
            let q = integer_q(&a.hitting)?;
            report.value("q", q);
            let out = check_cross_union_within(&fams, q, &ctx.budget);
            record_outcome(
                report,
                "cross_union",
                out,
                transversal("transversal violates the union bound"),
            )?;
        }
        Property::CrossAgreeing => {
            tuple("cross-agreeing")?;
            report.value("t", t);
            let out = check_cross_agreeing_within(&fams, t, &ctx.budget);
            record_outcome(
                report,
                "cross_agreeing",
                out,
                transversal("transversal without t common agreements"),
            )?;
        }
        Property::Hitting => {
            tuple("hitting")?;
            let system = hitting_system(&a.hitting, fams.len())?;
            report.value("q", format_rational(system.offset()));
            report.value(
                "alpha",
                system
                    .weights()
                    .iter()
                    .map(format_rational)
                    .collect::<Vec<_>>()
                    .join(","),
            );
            let out = check_hitting_within(&system, &fams, &ctx.budget);
            record_outcome(report, "hitting", out, transversal("transversal misses every level"))?;
        }
        Property::Dichotomy => {
            pair("dichotomy")?;
            report.value("t", t);
            let ok = dichotomy_check(&fams[0], &fams[1], t)?;
            bool_check(report, "dichotomy", ok, || {
                format!("some A lacks property {t} and some B lacks property {}", t + 1)
            });
        }
        Property::Lemcross => {
            pair("lemcross")?;
            report.value("t", t);
            let outcome = lemcross_check(&fams[0], &fams[1], t)?;
            bool_check(report, "size_bound", outcome.stated, || {
                "both size bounds exceeded".into()
            });
            report.value("size_bound_strengthened", outcome.strengthened);
        }
        Property::Lemshift => {
            pair("lemshift")?;
            let s = a.s.ok_or_else(|| Error::InvalidArgument("lemshift needs --s".into()))?;
            report.value("t", t);
            report.value("s", s);
            record_outcome(report, "lemshift", lemshift_check(&fams[0], &fams[1], t, s), |v| {
                (
                    vec![v.x, v.y, v.pair.0, v.pair.1],
                    format!(
                        "traces at X={}, Y={}: {} and {} meet in fewer than {}",
                        v.x, v.y, v.pair.0, v.pair.1, v.required
                    ),
                )
            })?;
        }
        Property::Lemhls => {
            let ok = lemhls_check(&fams)?;
            bool_check(report, "lemhls", ok, || "every |G_i| exceeds the bound".into());
        }
        Property::Bt => {
            let t =
                a.t.ok_or_else(|| Error::InvalidArgument("bt needs --t (the shadow level)".into()))?;
            report.value("t", t);
            for (i, f) in fams.iter().enumerate() {
                let name = if fams.len() == 1 {
                    "bt".to_string()
                } else {
                    format!("bt[{}]", i + 1)
                };
                let ok = bollobas_thomason_check(f, t)?;
                bool_check(report, &name, ok, || {
                    "upper shadow density below the family density".into()
                });
            }
        }
    }
    Ok(())
}

fn junta_stats(report: &mut Report, tag: &str, junta: &JuntaSpec, residual: &SetFamily) {
    report.value(format!("center_size.{tag}"), junta.center().len());
    report.value(format!("defining_size.{tag}"), junta.defining().len());
    report.value(format!("residual.{tag}"), residual.len());
}

fn write_junta(ctx: &Ctx, tag: &str, junta: &JuntaSpec, residual: &SetFamily) -> Result<()> {
    if let Some(dir) = &ctx.out {
        fs::create_dir_all(dir)?;
        fs::write(dir.join(format!("junta_{tag}.json")), junta.to_json())?;
        fs::write(dir.join(format!("residual_{tag}.fam")), serialize_family(residual))?;
    }
    Ok(())
}

fn push_checks(report: &mut Report, checks: &[Check]) {
    for c in checks {
        report.push_check(c);
    }
}

fn cmd_extract(a: &ExtractArgs, ctx: &Ctx, report: &mut Report) -> Result<()> {
    let fams = load_all(&a.files, report)?;
    let outcome = match a.mode {
        ExtractMode::Pair | ExtractMode::PairCor => extract_pair(a, ctx, &fams, report),
        ExtractMode::Hitting | ExtractMode::Biased => extract_hitting(a, ctx, &fams, report),
    };
    match outcome {
        Err(Error::Hypothesis { what, witness }) => {
            report.push(CheckRecord::from_verdict("hypothesis", &Verdict::Fail(what), &witness));
            Ok(())
        }
        other => other,
    }
}

fn extract_pair(a: &ExtractArgs, ctx: &Ctx, fams: &[SetFamily], report: &mut Report) -> Result<()> {
    expect_count(fams, "pair extraction", |c| c == 2, "exactly 2")?;
    let t = a.t.unwrap_or(1);
    let r: usize = match &a.r {
        Some(r) => r
            .trim()
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("--r must be a positive integer in pair mode, got '{r}'")))?,
        None => return Err(Error::InvalidArgument("pair extraction needs --r".into())),
    };
    let opts = PairOptions {
        check_hypotheses: !a.no_hypothesis_check,
        budget: ctx.budget,
    };
    let ex: PairExtraction = if a.mode == ExtractMode::PairCor {
        let eps = a
            .eps
            .as_deref()
            .ok_or_else(|| Error::InvalidArgument("pair-cor extraction needs --eps".into()))?;
        let eps = parse_rational(eps)?;
        report.value("eps", format_rational(&eps));
        extract_pair_juntas_cor(&fams[0], &fams[1], t, r, &eps, &opts)?
    } else {
        extract_pair_juntas(&fams[0], &fams[1], t, r, &opts)?
    };
    report.push_check(&Check::new(
        "hypothesis",
        if opts.check_hypotheses {
            Verdict::Pass
        } else {
            Verdict::Skipped("disabled".into())
        },
    ));
    push_checks(report, &ex.checks);
    report.value("t", t);
    report.value("r", ex.r);
    report.value("j", ex.j);
    report.value("threshold.a", &ex.threshold_a);
    report.value("threshold.b", &ex.threshold_b);
    junta_stats(report, "a", &ex.junta_a, &ex.residual_a);
    junta_stats(report, "b", &ex.junta_b, &ex.residual_b);
    write_junta(ctx, "a", &ex.junta_a, &ex.residual_a)?;
    write_junta(ctx, "b", &ex.junta_b, &ex.residual_b)?;
    Ok(())
}

fn regime(a: &ExtractArgs) -> Result<Regime> {
    let eps = || -> Result<BigRational> {
        let text = a
            .eps
            .as_deref()
            .ok_or_else(|| Error::InvalidArgument("regimes (i) and (ii) need --eps".into()))?;
        parse_rational(text)
    };
    Ok(match a.regime {
        Some(RegimeArg::I) => Regime::I { eps: eps()? },
        Some(RegimeArg::Ii) => Regime::II { eps: eps()? },
        Some(RegimeArg::Iii) => {
            let c = a
                .bigc
                .as_deref()
                .ok_or_else(|| Error::InvalidArgument("regime (iii) needs --bigc".into()))?;
            Regime::III {
                base: LogBase::parse(c)?,
            }
        }
        None => return Err(Error::InvalidArgument("--regime {i,ii,iii} is required".into())),
    })
}

fn extract_hitting(a: &ExtractArgs, ctx: &Ctx, fams: &[SetFamily], report: &mut Report) -> Result<()> {
    expect_count(fams, "hitting extraction", |c| c >= 2, "at least 2")?;
    let biased = a.mode == ExtractMode::Biased;
    let system = hitting_system(&a.hitting, fams.len())?;
    let r = parse_rational(
        a.r.as_deref()
            .ok_or_else(|| Error::InvalidArgument("extraction needs --r".into()))?,
    )?;
    let scale = if biased {
        let p =
            a.p.as_deref()
                .ok_or_else(|| Error::InvalidArgument("biased extraction needs --p".into()))?;
        Scale::Biases(rational_list(p)?)
    } else {
        let ks = fams
            .iter()
            .enumerate()
            .map(|(i, f)| {
                f.uniformity()
                    .ok_or_else(|| Error::InvalidArgument(format!("family {} must be uniform in hitting mode", i + 1)))
            })
            .collect::<Result<Vec<_>>>()?;
        Scale::Sizes(ks)
    };
    let params = compute_regime_j(regime(a)?, system.weights(), scale, r)?;
    let opts = ExtractOptions {
        check_hypotheses: !a.no_hypothesis_check,
        budget: ctx.budget,
    };
    let ex: HittingExtraction = if biased {
        extract_biased_juntas(&system, fams, &params, &opts)?
    } else {
        extract_hitting_juntas(&system, fams, &params, &opts)?
    };
    push_checks(report, &ex.checks);
    report.value("regime", params.regime.name());
    report.value("r", format_rational(&params.r));
    report.value("sigma", format_rational(&params.sigma));
    report.value("j", params.j);
    report.value("center_size", ex.center_size);
    report.value(
        "admissibility",
        match &ex.admissibility {
            Admissibility::Admissible => "admissible".to_string(),
            Admissibility::Inadmissible(why) => format!("inadmissible: {why}"),
        },
    );
    let xs = params.scale.values();
    for i in 0..fams.len() {
        let tag = (i + 1).to_string();
        report.value(format!("prime.{tag}"), ex.prime[i].len());
        report.value(format!("double_prime.{tag}"), ex.double_prime[i].len());
        junta_stats(report, &tag, &ex.juntas[i], &ex.residuals[i]);
        if biased {
            let p = &xs[i];
            report.value(format!("p.{tag}"), format_rational(p));
            report.value(format!("measure.{tag}"), format_rational(&fams[i].biased_measure(p)?));
            report.value(
                format!("residual_measure.{tag}"),
                format_rational(&ex.residuals[i].biased_measure(p)?),
            );
        }
        write_junta(ctx, &tag, &ex.juntas[i], &ex.residuals[i])?;
    }
    Ok(())
}

fn need(v: Option<usize>, flag: &str, what: &str) -> Result<usize> {
    v.ok_or_else(|| Error::InvalidArgument(format!("{what} needs --{flag}")))
}

fn sizes(g: &GenArgs, what: &str) -> Result<Vec<usize>> {
    match (&g.ks, g.k, g.s) {
        (Some(ks), _, _) => usize_list(ks, "--ks"),
        (None, Some(k), Some(s)) => Ok(vec![k; s]),
        _ => Err(Error::InvalidArgument(format!("{what} needs --ks, or --k with --s"))),
    }
}

/// Builds the construction's families, its manifest entry and the generator transcript.
fn generate(g: &GenArgs) -> Result<(Vec<SetFamily>, ManifestEntry, Vec<String>)> {
    let name = args::construction_name(g.construction);
    let n = need(g.n, "n", name)?;
    let config = |k: usize, s: usize| GeneratorConfig {
        seed: g.seed,
        n,
        k,
        s,
        samples: g.samples,
    };
    let seeded = |fams: &[SetFamily]| {
        ManifestEntry::new(name, Some(g.seed), fams)
            .param("n", n)
            .param("samples", g.samples)
    };
    Ok(match g.construction {
        Construction::EmcExtremal => {
            let (k, s) = (need(g.k, "k", name)?, need(g.s, "s", name)?);
            let f = emc_extremal(n, k, s)?;
            let entry = ManifestEntry::new(name, None, std::slice::from_ref(&f))
                .param("n", n)
                .param("k", k)
                .param("s", s);
            (vec![f], entry, Vec::new())
        }
        Construction::Threshold => {
            let (k, j, m) = (need(g.k, "k", name)?, need(g.j, "j", name)?, need(g.m, "m", name)?);
            let f = threshold_family(n, k, j, m)?;
            let entry = ManifestEntry::new(name, None, std::slice::from_ref(&f))
                .param("n", n)
                .param("k", k)
                .param("j", j)
                .param("m", m);
            (vec![f], entry, Vec::new())
        }
        Construction::RandomShifted => {
            let k = need(g.k, "k", name)?;
            let out = gen_random_shifted(&config(k, 1))?;
            let entry = seeded(&out.families).param("k", k);
            (out.families, entry, out.transcript)
        }
        Construction::CrossTPair => {
            let k = need(g.k, "k", name)?;
            let kb = g.kb.unwrap_or(k);
            let t = g.t.unwrap_or(1);
            let out = gen_cross_t_pair_sized(&config(k, 2), k, kb, t)?;
            let entry = seeded(&out.families).param("a", k).param("b", kb).param("t", t);
            (out.families, entry, out.transcript)
        }
        Construction::CrossDependent | Construction::RandomCrossDependent => {
            let ks = sizes(g, name)?;
            let cfg = config(ks[0], ks.len());
            let out = if g.construction == Construction::CrossDependent {
                gen_cross_dependent(&cfg, &ks)?
            } else {
                gen_random_cross_dependent(&cfg, &ks)?
            };
            let entry = seeded(&out.families).param("ks", ks);
            (out.families, entry, out.transcript)
        }
        Construction::CrossUnion => {
            let ks = sizes(g, name)?;
            let q = integer_q(&g.hitting)?;
            let out = gen_cross_union(&config(ks[0], ks.len()), &ks, q)?;
            let entry = seeded(&out.families).param("ks", ks).param("q", q);
            (out.families, entry, out.transcript)
        }
        Construction::CrossAgreeing => {
            let ks = sizes(g, name)?;
            let t = g.t.unwrap_or(1);
            let out = gen_cross_agreeing(&config(ks[0], ks.len()), &ks, t)?;
            let entry = seeded(&out.families).param("ks", ks).param("t", t);
            (out.families, entry, out.transcript)
        }
        Construction::Hitting => {
            let text =
                g.ks.as_deref()
                    .ok_or_else(|| Error::InvalidArgument("hitting needs --ks (use * for arbitrary sets)".into()))?;
            let sizes: Vec<Option<usize>> = text
                .split(',')
                .map(|p| match p.trim() {
                    "*" => Ok(None),
                    p => p
                        .parse()
                        .map(Some)
                        .map_err(|_| Error::InvalidArgument(format!("--ks: '{p}' is neither an integer nor *"))),
                })
                .collect::<Result<_>>()?;
            let system = hitting_system(&g.hitting, sizes.len())?;
            let k = sizes.iter().flatten().copied().next().unwrap_or(0);
            let out = gen_hitting_instance(&config(k, sizes.len()), &sizes, &system)?;
            let entry = seeded(&out.families)
                .param("ks", text.trim())
                .param(
                    "alpha",
                    system
                        .weights()
                        .iter()
                        .map(format_rational)
                        .collect::<Vec<_>>()
                        .join(","),
                )
                .param("q", format_rational(system.offset()));
            let entry = match system.explicit_levels() {
                Some(l) => entry.param("levels", l.to_vec()),
                None => entry,
            };
            (out.families, entry, out.transcript)
        }
    })
}

fn family_file_name(construction: &str, i: usize, count: usize) -> String {
    if count == 1 {
        format!("{construction}.fam")
    } else {
        format!("{construction}-{}.fam", i + 1)
    }
}

fn gen_to_stdout(g: &GenArgs, out: &mut dyn Write) -> Result<i32> {
    let (fams, _, _) = generate(g)?;
    if fams.len() != 1 {
        return Err(Error::InvalidArgument(format!(
            "{} produces {} families; pass --out <dir> to write them",
            args::construction_name(g.construction),
            fams.len()
        )));
    }
    out.write_all(serialize_family(&fams[0]).as_bytes())?;
    Ok(0)
}

fn cmd_gen(g: &GenArgs, ctx: &Ctx, report: &mut Report) -> Result<()> {
    let dir = ctx.out.as_ref().expect("stdout path handled by the caller");
    let (fams, mut entry, transcript) = generate(g)?;
    fs::create_dir_all(dir)?;
    let name = entry.construction.clone();
    for (i, f) in fams.iter().enumerate() {
        let file = family_file_name(&name, i, fams.len());
        let text = serialize_family(f);
        fs::write(dir.join(&file), &text)?;
        report.input(&file, hash_text(&text), entry.seed);
        report.value(format!("size.{}", i + 1), f.len());
        entry.files.push(file);
    }
    let manifest = Manifest {
        entries: vec![entry],
        ..Default::default()
    };
    fs::write(dir.join("manifest.json"), manifest.to_json())?;
    report.value("families", fams.len());
    report.transcript = transcript;
    Ok(())
}

fn cmd_verify(a: &VerifyArgs, ctx: &Ctx, report: &mut Report) -> Result<()> {
    let params = SweepParams {
        seed: a.seed,
        instances: a.instances,
        nmax: a.nmax,
        xmax: a.xmax,
        budget: ctx.budget,
    };
    verify_theorem(&a.name, &params, report)?;
    report.value(
        "corpus_families",
        report.corpus.iter().map(|e| e.hashes.len()).sum::<usize>(),
    );
    if let Some(dir) = &ctx.out {
        fs::create_dir_all(dir)?;
        let manifest = Manifest {
            entries: std::mem::take(&mut report.corpus),
            ..Default::default()
        };
        fs::write(dir.join("corpus.json"), manifest.to_json())?;
    }
    Ok(())
}

/// Re-renders stored reports in the requested format. Several JSON reports
/// become one array; several CSV reports share one header.
fn cmd_report(a: &ReportArgs, ctx: &Ctx, out: &mut dyn Write) -> Result<i32> {
    let mut reports = Vec::with_capacity(a.files.len());
    for path in &a.files {
        let text = fs::read_to_string(path).map_err(|e| with_path(path, e.into()))?;
        let report = Report::from_json(&text).map_err(|e| match e {
            Error::Json(j) => Error::Parse {
                line: Some(j.line()),
                message: format!("{}: {j}", path.display()),
            },
            other => other,
        })?;
        reports.push(report);
    }
    let code = reports.iter().map(Report::exit_code).max().unwrap_or(0);
    let rendered = match (reports.len(), ctx.csv) {
        (1, csv) => render(&reports[0], csv),
        (_, false) => serde_json::to_string_pretty(&reports)? + "\n",
        (_, true) => {
            let mut text = String::new();
            for (i, r) in reports.iter().enumerate() {
                let csv = r.to_csv();
                let body = if i == 0 {
                    &csv[..]
                } else {
                    csv.split_once('\n').map_or("", |(_, rest)| rest)
                };
                text.push_str(body);
            }
            text
        }
    };
    if let Some(dir) = &ctx.out {
        fs::create_dir_all(dir)?;
        let name = if ctx.csv { "report.csv" } else { "report.json" };
        fs::write(dir.join(name), &rendered)?;
    }
    out.write_all(rendered.as_bytes())?;
    Ok(code)
}
