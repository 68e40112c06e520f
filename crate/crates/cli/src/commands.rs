use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use isac_relay::bounds::{
    appendix_c_assignment, certify, dmin_class_c1, gaussian_dmin_example2, gaussian_dmin_example3, solve,
    tradeoff_curve, upper_bound_cd_seeded, BoundKind, Cardinalities,
};
use isac_relay::channel::json::spec_from_json;
use isac_relay::channel::{
    make_appendix_c_counterexample, make_example1, make_example4, make_example5, make_example6,
    make_sensing_mac, names::SD, RelayChannelSpec,
};
use isac_relay::estimator::{bayes_risk, optimal_estimator};
use isac_relay::montecarlo::{exact_distortion, simulate_distortion, SimConfig};
use isac_relay::optimizer::{CurvePoint, FactoredInput, InputFactor, OptimizerConfig, TradeoffCurve};
use isac_relay::verify::{
    estimator_suite, factory_channels, identity_suite, inclusion_suite, montecarlo_suite, SuiteReport,
};
use isac_relay::Error;

use crate::manifest::{ChannelSource, RunManifest};
use crate::{ChannelArgs, Failure, OutArgs, Outcome};

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn failed(e: impl std::fmt::Display) -> Failure {
    Failure::Failed(e.to_string())
}

/// Library errors raised while setting a run up come from user input.
fn setup(e: Error) -> Failure {
    match e {
        Error::Domain(_) | Error::Spec(_) | Error::Name(_) | Error::Normalization(_) => usage(e),
        _ => failed(e),
    }
}

const FACTORIES: [(&str, &[(&str, f64)]); 6] = [
    ("example1", &[("ps1", 0.9), ("ps2", 0.1), ("ps3", 0.9)]),
    ("example4", &[("ps1", 0.4), ("ps2", 0.2), ("ps3", 0.6)]),
    ("example5", &[("ps", 0.5), ("pn", 0.2)]),
    ("example6", &[("ps1", 0.9), ("ps2", 0.8), ("ps3", 0.5)]),
    ("appendixC", &[]),
    ("sensing-mac", &[("ps1", 0.3), ("ps2", 0.6), ("ps3", 0.2), ("ps4", 0.7)]),
];

pub fn load_channel(args: &ChannelArgs) -> Result<(RelayChannelSpec, ChannelSource), Failure> {
    let given: Vec<(&str, f64)> = [
        ("ps", args.ps),
        ("pn", args.pn),
        ("ps1", args.ps1),
        ("ps2", args.ps2),
        ("ps3", args.ps3),
        ("ps4", args.ps4),
    ]
    .into_iter()
    .filter_map(|(n, v)| v.map(|v| (n, v)))
    .collect();

    if let Some(path) = &args.channel {
        if !given.is_empty() {
            return Err(usage("factory parameters do not apply to --channel"));
        }
        let text = std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
        let spec = spec_from_json(&text).map_err(usage)?;
        let src = ChannelSource {
            json_path: Some(path.display().to_string()),
            ..Default::default()
        };
        return Ok((spec, src));
    }

    let name = args
        .factory
        .as_deref()
        .ok_or_else(|| usage("give --factory <name> or --channel <path>"))?;
    let (fname, defaults) = FACTORIES
        .iter()
        .find(|(n, _)| n.eq_ignore_ascii_case(name))
        .ok_or_else(|| {
            let names: Vec<&str> = FACTORIES.iter().map(|f| f.0).collect();
            usage(format!("unknown factory {name:?}; one of {}", names.join(", ")))
        })?;
    let mut params: BTreeMap<String, f64> = BTreeMap::new();
    for (n, v) in defaults.iter() {
        params.insert(n.to_string(), *v);
    }
    for (n, v) in given {
        if !params.contains_key(n) {
            return Err(usage(format!("{fname} takes no --{n}")));
        }
        params.insert(n.to_string(), v);
    }
    let p = |n: &str| params[n];
    let spec = match *fname {
        "example1" => make_example1(p("ps1"), p("ps2"), p("ps3")),
        "example4" => make_example4(p("ps1"), p("ps2"), p("ps3")),
        "example5" => make_example5(p("ps"), p("pn")),
        "example6" => make_example6(p("ps1"), p("ps2"), p("ps3")),
        "appendixC" => make_appendix_c_counterexample(),
        _ => make_sensing_mac(p("ps1"), p("ps2"), p("ps3"), p("ps4")),
    }
    .map_err(setup)?;
    Ok((
        spec,
        ChannelSource {
            factory: Some(fname.to_string()),
            params,
            json_path: None,
        },
    ))
}

pub fn load_config(path: Option<&Path>) -> Result<OptimizerConfig, Failure> {
    let cfg = match path {
        None => OptimizerConfig::default(),
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| usage(format!("{}: {e}", p.display())))?;
            if p.extension().is_some_and(|e| e == "json") {
                serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", p.display())))?
            } else {
                toml::from_str(&text).map_err(|e| usage(format!("{}: {e}", p.display())))?
            }
        }
    };
    cfg.validate().map_err(usage)?;
    Ok(cfg)
}

/// `start:stop:step` or a comma list; ascending, nonnegative, nonempty.
pub fn parse_grid(s: &str) -> Result<Vec<f64>, Failure> {
    let num = |t: &str| {
        t.trim()
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| usage(format!("bad number {t:?} in distortion grid")))
    };
    let grid: Vec<f64> = if s.contains(':') {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(usage("distortion grid must be start:stop:step"));
        }
        let (a, b, step) = (num(parts[0])?, num(parts[1])?, num(parts[2])?);
        if step <= 0.0 {
            return Err(usage("grid step must be positive"));
        }
        if b < a {
            Vec::new()
        } else {
            let n = ((b - a) / step + 1e-9).floor() as usize;
            (0..=n).map(|i| ((a + i as f64 * step) * 1e12).round() / 1e12).collect()
        }
    } else {
        s.split(',').filter(|t| !t.trim().is_empty()).map(num).collect::<Result<_, _>>()?
    };
    if grid.is_empty() {
        return Err(usage("empty distortion grid"));
    }
    if grid.iter().any(|&d| d < 0.0) || grid.windows(2).any(|w| w[1] < w[0]) {
        return Err(usage("distortion grid must be nonnegative and ascending"));
    }
    Ok(grid)
}

/// Writes `body` behind a manifest comment, to `--out` or stdout, plus the
/// JSON manifest file when one is due.
fn emit(out: &OutArgs, manifest: &mut RunManifest, body: &str, extra: &[PathBuf]) -> Outcome {
    let manifest_path = out
        .manifest
        .clone()
        .or_else(|| out.out.as_ref().map(|o| PathBuf::from(format!("{}.manifest.json", o.display()))));
    if let Some(o) = &out.out {
        manifest.record_output(o);
    }
    for e in extra {
        manifest.record_output(e);
    }
    if let Some(m) = &manifest_path {
        manifest.record_output(m);
    }
    let text = format!("# manifest: {}\n{body}", manifest.line());
    match &out.out {
        Some(o) => std::fs::write(o, text)?,
        None => print!("{text}"),
    }
    if let Some(m) = &manifest_path {
        std::fs::write(m, manifest.pretty() + "\n")?;
    }
    Ok(())
}

/// Outer-bound curve whose points also probe the lifted inner-bound optimum.
fn upper_curve(spec: &RelayChannelSpec, grid: &[f64], cfg: &OptimizerConfig) -> Result<TradeoffCurve, Error> {
    let lower = tradeoff_curve(spec, BoundKind::LowerThm2, grid, cfg)?;
    let mut points: Vec<CurvePoint> = Vec::with_capacity(grid.len());
    for lp in &lower.points {
        let seeds: Vec<FactoredInput> = if lp.feasible {
            vec![lp.certificate.best_input.clone()]
        } else {
            Vec::new()
        };
        let res = upper_bound_cd_seeded(spec, lp.d, cfg, &seeds)?;
        let mut pt = CurvePoint {
            d: lp.d,
            rate: if res.feasible { res.best_value.max(0.0) } else { 0.0 },
            feasible: res.feasible,
            certificate: res,
        };
        // feasible at a smaller D stays feasible here
        if let Some(prev) = points.last() {
            if prev.feasible && (!pt.feasible || prev.rate > pt.rate) {
                pt = CurvePoint { d: lp.d, ..prev.clone() };
            }
        }
        points.push(pt);
    }
    Ok(TradeoffCurve {
        kind: BoundKind::UpperThm1.name().to_string(),
        points,
    })
}

pub fn tradeoff(
    channel: &ChannelArgs,
    kinds: &[String],
    dgrid: &str,
    config: Option<&Path>,
    json: Option<&Path>,
    out: &OutArgs,
) -> Outcome {
    let grid = parse_grid(dgrid)?;
    let kinds: Vec<BoundKind> = kinds
        .iter()
        .map(|k| BoundKind::parse(k).map_err(usage))
        .collect::<Result<_, _>>()?;
    if let Some(k) = kinds.iter().find(|k| k.is_dmin()) {
        return Err(usage(format!("{} is not a rate bound; use the dmin command", k.name())));
    }
    let (spec, source) = load_channel(channel)?;
    let cfg = load_config(config)?;
    // catches class tags the channel lacks before any work starts
    for &k in &kinds {
        let cards = Cardinalities::resolve(&spec, &cfg.cardinalities);
        isac_relay::bounds::BoundProblem::new_unseeded(&spec, k, Some(grid[0]), cards).map_err(setup)?;
    }

    let mut curves = Vec::with_capacity(kinds.len());
    for &k in &kinds {
        let c = match k {
            BoundKind::UpperThm1 => upper_curve(&spec, &grid, &cfg),
            _ => tradeoff_curve(&spec, k, &grid, &cfg),
        }
        .map_err(failed)?;
        curves.push(c);
    }

    let mut manifest = RunManifest::new("tradeoff", source);
    manifest.kinds = kinds.iter().map(|k| k.name().to_string()).collect();
    manifest.d_grid = grid;
    manifest.rng_seeds = vec![cfg.rng_seed];
    manifest.optimizer = Some(cfg);
    if kinds.contains(&BoundKind::UpperThm1) {
        manifest
            .settings
            .insert("upper".into(), BoundKind::UpperThm1.label().into());
    }

    let mut body = String::from("D,rate,kind,feasible\n");
    let mut infeasible = 0;
    for c in &curves {
        for p in &c.points {
            writeln!(body, "{},{},{},{}", p.d, p.rate, c.kind, p.feasible).expect("string write");
            infeasible += usize::from(!p.feasible);
        }
    }
    let extra: Vec<PathBuf> = json.iter().map(|p| p.to_path_buf()).collect();
    emit(out, &mut manifest, &body, &extra)?;
    if let Some(j) = json {
        let doc = serde_json::json!({ "manifest": manifest, "curves": curves });
        std::fs::write(j, serde_json::to_string_pretty(&doc).expect("plain data serializes") + "\n")?;
    }
    if infeasible > 0 {
        return Err(failed(format!("{infeasible} grid points have no feasible input")));
    }
    Ok(())
}

pub fn dmin(channel: &ChannelArgs, kind: &str, config: Option<&Path>, out: &OutArgs) -> Outcome {
    let kind = BoundKind::parse(kind).map_err(usage)?;
    if !kind.is_dmin() {
        return Err(usage(format!("{} is a rate bound; use the tradeoff command", kind.name())));
    }
    let (spec, source) = load_channel(channel)?;
    let cfg = load_config(config)?;
    let mut manifest = RunManifest::new("dmin", source);
    manifest.kinds = vec![kind.name().to_string()];
    let mut body = String::from("kind,D_min\n");
    if kind == BoundKind::DminProp1 {
        let (d, x, x1) = dmin_class_c1(&spec).map_err(setup)?;
        manifest.settings.insert("argmin".into(), format!("x={x},x1={x1}"));
        writeln!(body, "{},{d}", kind.name()).expect("string write");
    } else {
        let res = solve(&spec, kind, None, &cfg).map_err(setup)?;
        manifest.rng_seeds = vec![cfg.rng_seed];
        manifest.optimizer = Some(cfg);
        if !res.feasible {
            return Err(failed("no feasible input"));
        }
        writeln!(body, "{},{}", kind.name(), (-res.best_value).max(0.0)).expect("string write");
    }
    emit(out, &mut manifest, &body, &[])
}

pub fn dmin_gaussian(which: &str, p1: Option<f64>, s1: Option<f64>, s2: Option<f64>, out: &OutArgs) -> Outcome {
    let need = |v: Option<f64>, n: &str| v.ok_or_else(|| usage(format!("--gaussian needs --{n}")));
    let (p1, s1, s2) = (need(p1, "p1")?, need(s1, "s1")?, need(s2, "s2")?);
    let d = match which {
        "example2" => gaussian_dmin_example2(p1, s1, s2),
        "example3" => gaussian_dmin_example3(p1, s1, s2),
        _ => return Err(usage(format!("unknown Gaussian example {which:?}; example2 or example3"))),
    }
    .map_err(setup)?;
    let params = BTreeMap::from([("p1".to_string(), p1), ("s1".to_string(), s1), ("s2".to_string(), s2)]);
    let mut manifest = RunManifest::new(
        "dmin",
        ChannelSource {
            factory: Some(format!("gaussian-{which}")),
            params,
            json_path: None,
        },
    );
    emit(out, &mut manifest, &format!("kind,D_min\ngaussian-{which},{d}\n"), &[])
}

fn print_report(r: &SuiteReport) {
    let tag = if r.passed() { "PASS" } else { "FAIL" };
    println!("{tag} {}: {}/{} checks", r.name, r.checked - r.failures.len(), r.checked);
    for f in r.failures.iter().take(10) {
        println!("  {f}");
    }
}

pub fn verify(
    suite: &str,
    channel: &ChannelArgs,
    fuzz: usize,
    samples: Option<usize>,
    seed: u64,
    config: Option<&Path>,
) -> Outcome {
    let channels: Vec<(&str, RelayChannelSpec)> = if channel.factory.is_some() || channel.channel.is_some() {
        let (spec, src) = load_channel(channel)?;
        let name: &'static str = match src.factory {
            Some(f) => FACTORIES.iter().find(|x| x.0 == f).map_or("channel", |x| x.0),
            None => "channel",
        };
        vec![(name, spec)]
    } else {
        factory_channels().map_err(failed)?
    };
    let cfg = load_config(config)?;
    let mut ok = true;
    let report = match suite {
        "identities" => {
            if fuzz == 0 {
                return Err(usage("--fuzz must be positive"));
            }
            identity_suite(fuzz, seed)
        }
        "estimator" => estimator_suite(&channels, seed),
        "inclusion" => {
            let n = samples.unwrap_or(1000);
            for (name, spec) in channels.iter().filter(|c| c.0 == "appendixC") {
                let cards = Cardinalities::resolve(spec, &cfg.cardinalities);
                let input = appendix_c_assignment(spec, cards).map_err(failed)?;
                let ours = certify(spec, BoundKind::LowerThm2, Some(0.0), &input).map_err(failed)?;
                let cmg = certify(spec, BoundKind::LowerCmg, Some(0.0), &input).map_err(failed)?;
                let d = ours.distortion.unwrap_or(f64::NAN);
                let sep = ours.feasible(cfg.feasibility_slack) && !cmg.feasible(cfg.feasibility_slack);
                ok &= sep;
                println!(
                    "{} {name}: separation point (R, D) = ({:.6}, {d}); joint-decoding slack {:.6}",
                    if sep { "PASS" } else { "FAIL" },
                    ours.objective,
                    cmg.constraints.first().copied().unwrap_or(f64::NAN),
                );
            }
            inclusion_suite(&channels, n, &cfg)
        }
        "montecarlo" => {
            let sim = SimConfig {
                samples: samples.unwrap_or(1_000_000),
                rng_seed: seed,
                batches: 100,
            };
            sim.validate().map_err(usage)?;
            montecarlo_suite(&channels, &sim)
        }
        _ => {
            return Err(usage(format!(
                "unknown suite {suite:?}; identities, estimator, inclusion or montecarlo"
            )))
        }
    }
    .map_err(failed)?;
    print_report(&report);
    if ok && report.passed() {
        Ok(())
    } else {
        Err(failed(format!("{} suite failed", report.name)))
    }
}

fn xx1_input(spec: &RelayChannelSpec, text: Option<&str>) -> Result<FactoredInput, Failure> {
    let k = spec.x().size() * spec.x1().size();
    let theta: Vec<f64> = match text {
        None => vec![1.0 / k as f64; k],
        Some(t) => t
            .split(',')
            .map(|v| v.trim().parse::<f64>().map_err(|_| usage(format!("bad probability {v:?}"))))
            .collect::<Result<_, _>>()?,
    };
    if theta.len() != k {
        return Err(usage(format!("--input needs {k} entries, got {}", theta.len())));
    }
    FactoredInput::new(vec![InputFactor::joint("P_XX1", vec![spec.x().clone(), spec.x1().clone()])])
        .with_theta(theta)
        .map_err(setup)
}

fn observed(s: &str) -> Vec<&str> {
    s.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty()).collect()
}

pub fn estimator_dump(channel: &ChannelArgs, input: Option<&str>, observe: &str, out: &OutArgs) -> Outcome {
    let (spec, source) = load_channel(channel)?;
    let inp = xx1_input(&spec, input)?;
    let cond = observed(observe);
    let joint = spec.assemble_joint(&inp).map_err(setup)?;
    let est = optimal_estimator(&joint, &cond, SD, spec.distortion()).map_err(setup)?;
    let risk = bayes_risk(&joint, &cond, SD, spec.distortion()).map_err(setup)?;
    let mut manifest = RunManifest::new("estimator-dump", source);
    manifest.settings.insert("observe".into(), cond.join(" "));
    manifest.settings.insert("input".into(), format!("{:?}", inp.theta()));
    let doc = serde_json::json!({ "estimator": est, "bayes_risk": risk });
    let body = serde_json::to_string_pretty(&doc).expect("plain data serializes") + "\n";
    emit(out, &mut manifest, &body, &[])
}

pub fn simulate(
    channel: &ChannelArgs,
    input: Option<&str>,
    observe: &str,
    samples: usize,
    batches: usize,
    seed: u64,
    out: &OutArgs,
) -> Outcome {
    let sim = SimConfig {
        samples,
        rng_seed: seed,
        batches,
    };
    sim.validate().map_err(usage)?;
    let (spec, source) = load_channel(channel)?;
    let inp = xx1_input(&spec, input)?;
    let cond = observed(observe);
    let joint = spec.assemble_joint(&inp).map_err(setup)?;
    let est = optimal_estimator(&joint, &cond, SD, spec.distortion()).map_err(setup)?;
    let exact = exact_distortion(&spec, &inp, &est).map_err(failed)?;
    let (mean, ci) = simulate_distortion(&spec, &inp, &est, &sim).map_err(failed)?;
    let mut manifest = RunManifest::new("simulate", source);
    manifest.rng_seeds = vec![seed];
    manifest.settings.insert("observe".into(), cond.join(" "));
    manifest.settings.insert("input".into(), format!("{:?}", inp.theta()));
    manifest.settings.insert("samples".into(), samples.to_string());
    manifest.settings.insert("batches".into(), batches.to_string());
    let within = (mean - exact).abs() <= ci;
    let body = format!("mean,ci_halfwidth,exact,within_ci\n{mean},{ci},{exact},{within}\n");
    emit(out, &mut manifest, &body, &[])
}
