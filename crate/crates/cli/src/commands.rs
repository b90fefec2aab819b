use std::fmt::Write as _;
use std::path::PathBuf;

use num_rational::BigRational;
use serde_json::{json, Map, Value};

use randtensor::bounds::{critical_z, rainbow_closed_form, sd_bounds_k1, sd_upper_tensor, trace_theorem_bounds, RainbowIter};
use randtensor::moments::ReferenceTable;
use randtensor::sim::{
    concentration_experiment, extreme_stats, format_real, lambda_min, run_trials, stats_json, write_eigen_csv,
    EnsembleKind, EnsembleSpec, MpLaw,
};
use randtensor::{MomentEngine, MomentKind, MomentQuery, ReductionClass};

use crate::args::*;
use crate::checks::{paper_check, run_all};
use crate::{CliError, Output};

type Res = Result<Output, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn need_d(ens: &EnsembleArgs) -> Result<u64, CliError> {
    ens.d.ok_or_else(|| usage(format!("--d is required for the {} ensemble", ens.ensemble.name())))
}

fn need_ab(ens: &EnsembleArgs) -> Result<(u64, u64), CliError> {
    match (ens.d_a, ens.d_b) {
        (Some(a), Some(b)) => Ok((a, b)),
        _ => Err(usage("--d-a and --d-b are required for the partial-trace ensemble")),
    }
}

fn moment_query(ens: &EnsembleArgs, m: usize) -> Result<MomentQuery, CliError> {
    Ok(match ens.ensemble {
        Ensemble::Normalized => MomentQuery::normalized(ens.p, need_d(ens)?, ens.k, m),
        Ensemble::Gaussian => MomentQuery::gaussian(ens.p, need_d(ens)?, ens.k, m),
        Ensemble::Repeated => MomentQuery::repeated(ens.p, need_d(ens)?, ens.k, m),
        Ensemble::PartialTrace => {
            let (a, b) = need_ab(ens)?;
            MomentQuery::partial_trace(ens.p, a, b, ens.k, m)
        }
    })
}

fn kind_of(e: Ensemble, ens: Option<&EnsembleArgs>) -> Result<EnsembleKind, CliError> {
    Ok(match e {
        Ensemble::Normalized => EnsembleKind::Normalized,
        Ensemble::Gaussian => EnsembleKind::Gaussian,
        Ensemble::Repeated => EnsembleKind::Repeated,
        Ensemble::PartialTrace => {
            let ens = ens.ok_or_else(|| usage("partial-trace is not available for this command"))?;
            let (d_a, d_b) = need_ab(ens)?;
            EnsembleKind::PartialTrace { d_a, d_b }
        }
    })
}

fn ensemble_spec(ens: &EnsembleArgs, seed: u64) -> Result<EnsembleSpec, CliError> {
    let kind = kind_of(ens.ensemble, Some(ens))?;
    let d = match kind {
        EnsembleKind::PartialTrace { d_a, .. } => d_a,
        _ => need_d(ens)?,
    };
    Ok(EnsembleSpec::new(kind, ens.p, d, ens.k, seed)?)
}

fn json_bytes(v: &Value) -> Vec<u8> {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s.into_bytes()
}

fn rat(r: &BigRational) -> Value {
    Value::String(r.to_string())
}

pub(crate) fn execute(cli: &Cli) -> Res {
    let seed = cli.seed;
    match &cli.command {
        Command::Moments(c) => moments(c),
        Command::Bounds(c) => bounds(c),
        Command::Gf(c) => gf(c),
        Command::Spectrum(c) => spectrum(c, seed),
        Command::Experiment(c) => experiment(c, seed),
        Command::Check(CheckCmd::All) => check_all(),
    }
}

fn moments(c: &MomentsCmd) -> Res {
    let mut out = Output::default();
    match c {
        MomentsCmd::Exact { ens, m, cap, out: path } => {
            let q = moment_query(ens, *m)?;
            let engine = MomentEngine::with_cap(*cap);
            let mut record = Map::new();
            record.insert("p".into(), json!(q.p));
            record.insert("k".into(), json!(q.k));
            record.insert("m".into(), json!(q.m));
            record.insert("ensemble".into(), json!(ens.ensemble.name()));
            if let MomentKind::PartialTrace { d_a, d_b } = q.kind {
                record.insert("d_a".into(), json!(d_a));
                record.insert("d_b".into(), json!(d_b));
            } else {
                record.insert("d".into(), json!(q.d));
            }
            if q.kind == MomentKind::Repeated {
                let total = engine.repeated_moment(&q)?;
                let e = &total / q.dimension();
                out.line(format!("E = {total}"));
                out.line(format!("e = {e}"));
                record.insert("E".into(), rat(&total));
                record.insert("e".into(), rat(&e));
            } else {
                let r = engine.ensemble_moment(&q)?;
                out.line(format!("E = {}", r.total));
                out.line(format!("e = {}", r.normalized));
                for (l, v) in &r.by_block_count {
                    out.line(format!("blocks[{l}] = {v}"));
                }
                for (class, v) in &r.by_class {
                    out.line(format!("class[{}] = {v}", class.name()));
                }
                record.insert("E".into(), rat(&r.total));
                record.insert("e".into(), rat(&r.normalized));
                record.insert(
                    "by_block_count".into(),
                    Value::Object(r.by_block_count.iter().map(|(l, v)| (l.to_string(), rat(v))).collect()),
                );
                record.insert(
                    "by_class".into(),
                    Value::Object(r.by_class.iter().map(|(c, v)| (c.name().to_owned(), rat(v))).collect()),
                );
            }
            if let Some(path) = path {
                out.write_file(path, &json_bytes(&Value::Object(record)))?;
            }
        }
        MomentsCmd::Table { m, k, d, cap } => {
            let table = MomentEngine::with_cap(*cap).moment_coefficient_table(*m, *k, *d)?;
            out.line(format!("E^{m} = sum_l c_l (p)_l at d={d}, k={k}"));
            for (l, c) in &table {
                out.line(format!("c[{l}] = {c}"));
            }
        }
        MomentsCmd::PaperCheck { max_m, table } => {
            let table = match table {
                Table::Literature => ReferenceTable::Literature,
                Table::Corrected => ReferenceTable::Corrected,
            };
            let rows = paper_check(table, *max_m)?;
            out.line(format!("table: {}", table.name()));
            out.line("m  cases  mismatches");
            for r in &rows {
                out.line(format!("{}  {:5}  {:10}", r.m, r.cases, r.mismatches));
                if let Some(f) = &r.first {
                    out.line(format!("   first mismatch {f}"));
                }
            }
            out.failed = rows.iter().any(|r| r.mismatches > 0);
            out.line(if out.failed { "FAIL" } else { "PASS" });
        }
        MomentsCmd::Class { pdk, m, class, cap } => {
            let q = MomentQuery::normalized(pdk.p, pdk.d, pdk.k, *m);
            let classes: Vec<ReductionClass> = match class {
                ClassArg::All => ReductionClass::ALL.to_vec(),
                ClassArg::CompletelyReducible => vec![ReductionClass::CompletelyReducible],
                ClassArg::Irreducible => vec![ReductionClass::Irreducible],
                ClassArg::Mixed => vec![ReductionClass::Mixed],
            };
            let engine = MomentEngine::with_cap(*cap);
            for c in classes {
                out.line(format!("{} = {}", c.name(), engine.class_sum(&q, c)?));
            }
        }
        MomentsCmd::Repeated { pdk, m } => {
            let q = MomentQuery::repeated(pdk.p, pdk.d, pdk.k, *m);
            let total = MomentEngine::new().repeated_moment(&q)?;
            out.line(format!("E = {total}"));
            out.line(format!("e = {}", &total / q.dimension()));
        }
    }
    Ok(out)
}

fn series_csv(rows: impl Iterator<Item = (usize, String)>, header: &str) -> Vec<u8> {
    let mut s = format!("{header}\n");
    for (m, rest) in rows {
        let _ = writeln!(s, "{m},{rest}");
    }
    s.into_bytes()
}

fn bounds(c: &BoundsCmd) -> Res {
    let mut out = Output::default();
    match c {
        BoundsCmd::Sd { p, d, max_m, out: path } => {
            let s = sd_bounds_k1(*p, *d, *max_m)?;
            out.line("m  lower  upper");
            for (m, (lo, hi)) in s.entries().iter().enumerate() {
                out.line(format!("{m}  {lo}  {hi}"));
            }
            if let Some(path) = path {
                let rows = s.entries().iter().enumerate().map(|(m, (lo, hi))| (m, format!("{lo},{hi}")));
                out.write_file(path, &series_csv(rows, "m,lower,upper"))?;
            }
        }
        BoundsCmd::Tensor { pdk, max_m, out: path } => {
            let s = sd_upper_tensor(pdk.p, pdk.d, pdk.k, *max_m)?;
            out.line("m  upper");
            for (m, (_, hi)) in s.entries().iter().enumerate() {
                out.line(format!("{m}  {hi}"));
            }
            if let Some(path) = path {
                let rows = s.entries().iter().enumerate().map(|(m, (_, hi))| (m, hi.to_string()));
                out.write_file(path, &series_csv(rows, "m,upper"))?;
            }
        }
        BoundsCmd::Theorem { pdk, m } => {
            let b = trace_theorem_bounds(pdk.p, pdk.d, pdk.k, *m)?;
            out.line(format!("lower = {}", b.lower_exact));
            out.line(format!("lower ~ {}", format_real(b.lower)));
            out.line(format!("upper ~ {}", format_real(b.upper)));
            out.line(format!("ln upper ~ {}", format_real(b.ln_upper)));
        }
    }
    Ok(out)
}

fn gf(c: &GfCmd) -> Res {
    let GfCmd::Rainbow { x, z, iters, out: path } = c;
    let mut out = Output::default();
    let z0 = critical_z(*x);
    let z = z.unwrap_or(z0);
    let closed = rainbow_closed_form(*x, z)?;
    let states: Vec<_> = RainbowIter::new(*x, z)?.take(iters + 1).collect();
    let last = states.last().expect("at least the initial state");
    out.line(format!("z0 = {}", format_real(z0)));
    out.line(format!("z = {}", format_real(z)));
    out.line(format!("iterations = {}", last.a));
    out.line(format!("G_s = {}", format_real(last.g_s)));
    out.line(format!("G_d = {}", format_real(last.g_d)));
    out.line(format!("closed form = {}", format_real(closed)));
    out.line(format!("gap = {}", format_real(closed - last.g_s)));
    if let Some(path) = path {
        let mut s = String::from("a,g_s,g_d\n");
        for st in &states {
            let _ = writeln!(s, "{},{},{}", st.a, format_real(st.g_s), format_real(st.g_d));
        }
        out.write_file(path, s.as_bytes())?;
    }
    Ok(out)
}

fn write_csv(out: &mut Output, path: &PathBuf, samples: &[randtensor::sim::SpectralSample]) -> Result<(), CliError> {
    let mut buf = Vec::new();
    write_eigen_csv(&mut buf, samples).map_err(|e| CliError::Io(path.clone(), e))?;
    out.write_file(path, &buf)
}

fn spectrum(c: &SpectrumCmd, seed: u64) -> Res {
    let mut out = Output::default();
    match c {
        SpectrumCmd::Sample { ens, trials, out: path } => {
            let spec = ensemble_spec(ens, seed)?;
            let samples = run_trials(&spec, *trials)?;
            for s in &samples {
                out.line(format!(
                    "trial {}: lambda_max = {}, rank = {}",
                    s.trial_index,
                    format_real(s.lambda_max()),
                    s.rank()
                ));
            }
            match path {
                Some(path) => write_csv(&mut out, path, &samples)?,
                None => {
                    let mut buf = Vec::new();
                    write_eigen_csv(&mut buf, &samples).expect("writing to memory");
                    out.text.push_str(&String::from_utf8(buf).expect("CSV is ASCII"));
                }
            }
        }
        SpectrumCmd::Stats { ens, trials, max_m, out: path } => {
            let spec = ensemble_spec(ens, seed)?;
            let samples = run_trials(&spec, *trials)?;
            let v = stats_json(&spec, &samples, *max_m)?;
            let bytes = json_bytes(&v);
            match path {
                Some(path) => {
                    out.line(format!("lambda_max mean = {}", format_real(v["lambda_max"]["mean"].as_f64().unwrap_or(f64::NAN))));
                    out.line(format!("ks = {}", format_real(v["ks"].as_f64().unwrap_or(f64::NAN))));
                    out.write_file(path, &bytes)?;
                }
                None => out.text.push_str(&String::from_utf8(bytes).expect("JSON is UTF-8")),
            }
        }
        SpectrumCmd::Density { x, points, out: path } => {
            if *points < 2 {
                return Err(usage("--points must be at least 2"));
            }
            let law = MpLaw::new(*x)?;
            out.line(format!("lambda- = {}", format_real(law.lambda_minus())));
            out.line(format!("lambda+ = {}", format_real(law.lambda_plus())));
            out.line(format!("mass = {}", format_real(law.total_mass()?)));
            let mut s = String::from("lambda,density,cdf\n");
            let (lo, hi) = (law.lambda_minus(), law.lambda_plus());
            for i in 0..*points {
                let l = lo + (hi - lo) * i as f64 / (*points - 1) as f64;
                let _ = writeln!(s, "{},{},{}", format_real(l), format_real(law.density(l)), format_real(law.cdf(l)));
            }
            match path {
                Some(path) => out.write_file(path, s.as_bytes())?,
                None => out.text.push_str(&s),
            }
        }
    }
    Ok(out)
}

fn experiment(c: &ExperimentCmd, seed: u64) -> Res {
    let mut out = Output::default();
    match c {
        ExperimentCmd::Concentration { ensemble, x, d_list, k, trials, out: path } => {
            let kind = kind_of(*ensemble, None)?;
            let rows = concentration_experiment(kind, *x, d_list, *k, *trials, seed)?;
            let mut s = String::from("d,p,lambda_max_mean,lambda_max_std\n");
            out.line("d  p  mean(lambda_max)  std(lambda_max)");
            for r in &rows {
                let (mean, std) = (format_real(r.lambda_max.mean), format_real(r.lambda_max.std));
                out.line(format!("{}  {}  {mean}  {std}", r.d, r.p));
                let _ = writeln!(s, "{},{},{mean},{std}", r.d, r.p);
            }
            if let Some(path) = path {
                out.write_file(path, s.as_bytes())?;
            }
        }
        ExperimentCmd::Extremes { ens, trials, out: path } => {
            let spec = ensemble_spec(ens, seed)?;
            let samples = run_trials(&spec, *trials)?;
            let st = extreme_stats(&samples)?;
            let x = spec.x();
            let sx = x.sqrt();
            let min_of_min = samples.iter().map(lambda_min).fold(f64::INFINITY, f64::min);
            let edge_lo = if x > 1.0 { x - 2.0 * sx - 1.0 } else { 1.0 - 2.0 * sx - x };
            let v = json!({
                "spec": spec,
                "trials": samples.len(),
                "x": x,
                "lambda_max": { "mean": st.lambda_max.mean, "std": st.lambda_max.std, "limit": (1.0 + sx).powi(2) },
                "lambda_min": {
                    "mean": st.lambda_min.mean,
                    "std": st.lambda_min.std,
                    "min": min_of_min,
                    "limit": (1.0 - sx).powi(2),
                    "lower_bound": edge_lo,
                },
            });
            out.line(format!("x = {}", format_real(x)));
            out.line(format!(
                "lambda_max: mean {} std {} (limit {})",
                format_real(st.lambda_max.mean),
                format_real(st.lambda_max.std),
                format_real((1.0 + sx).powi(2))
            ));
            out.line(format!(
                "lambda_min: mean {} std {} min {} (limit {}, bound {})",
                format_real(st.lambda_min.mean),
                format_real(st.lambda_min.std),
                format_real(min_of_min),
                format_real((1.0 - sx).powi(2)),
                format_real(edge_lo)
            ));
            if let Some(path) = path {
                out.write_file(path, &json_bytes(&v))?;
            }
        }
    }
    Ok(out)
}

fn check_all() -> Res {
    let mut out = Output::default();
    let results = run_all()?;
    let width = results.iter().map(|r| r.name.len()).max().unwrap_or(0);
    for r in &results {
        out.line(format!(
            "{:width$}  {}  {}",
            r.name,
            if r.passed { "PASS" } else { "FAIL" },
            r.detail
        ));
    }
    let passed = results.iter().filter(|r| r.passed).count();
    out.line(format!("{passed}/{} checks passed", results.len()));
    out.failed = passed < results.len();
    Ok(out)
}
