use std::path::{Path, PathBuf};
use std::sync::Arc;

use log::{debug, info};
use serde::{Deserialize, Serialize};

use super::artifact::{export_csv, import_csv, read_artifact, to_json, write_output, Artifact, Provenance, ARTIFACT_SCHEMA};
use super::config::{load_config, GeometryConfig, RunConfig};
use super::{Cli, CliError, Command, Family, EXIT_NOWHERE, EXIT_OK, EXIT_PARTIAL, EXIT_RESIDUAL, EXIT_SCHEMA};
use crate::families::{
    build_affine, build_partially_affine, paper_example, reconstruct_from_profiles, solve_for_g_on_grid, AuxCase,
    AuxProfiles, AuxSpec, PartiallyAffineParams, Regime, SolutionTuple,
};
use crate::func::{Expr, Fn1D};
use crate::geometry::{interval_report, lemma_checks, IntervalSetReport, LemmaCheck, OpenInterval};
use crate::sampling::{random_affine_params, random_interval, random_same_sense_pair, random_subinterval, rng};
use crate::verify::{
    check_const, classify_affine_intervals, peter_triple, residual_main, residual_system, AffinityReport, PeterSpec,
    ResidualReport, Verdict,
};

/// Residual bound for tuples re-ingested from exported samples; covers the
/// interpolation error of the monotone cubic tables.
pub const TABULATED_BOUND: f64 = 1e-3;

/// Bound on both derivative-system residuals of closed-form profiles.
pub const SELFTEST_SYSTEM_BOUND: f64 = 1e-12;

const DEFAULT_CLASSIFY_TOL: f64 = 1e-6;
const DEFAULT_CLASSIFY_N: usize = 4096;

/// Default residual bound of each family: exact closed forms, closed forms
/// joined at breakpoints, quadrature-backed reconstructions, tabulations.
pub fn family_bound(f: Family) -> f64 {
    match f {
        Family::PaperExample | Family::Affine => 1e-12,
        Family::Partial => 1e-10,
        Family::Profiles => 1e-6,
        Family::Tabulated => TABULATED_BOUND,
    }
}

/// Runs one command and returns the process exit code; failures are
/// reported on standard error.
pub fn run(cli: &Cli) -> i32 {
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("pexider-kit {}: {}", cli.command.name(), e.message);
            e.code
        }
    }
}

fn execute(cli: &Cli) -> Result<i32, CliError> {
    let cfg = match &cli.config {
        Some(p) => load_config(p)?,
        None => RunConfig::default(),
    };
    debug!("config: {cfg:?}");
    match cli.command {
        Command::Build => build(cli, &cfg),
        Command::Verify => verify(cli, &cfg),
        Command::Classify => classify(cli, &cfg),
        Command::Export => export(cli, &cfg),
        Command::Geometry => geometry(cli, &cfg),
        Command::Selftest => selftest(cli, &cfg),
    }
}

fn lib<T>(r: crate::Result<T>) -> Result<T, CliError> {
    r.map_err(CliError::from_lib)
}

fn grid(cli: &Cli, cfg: &RunConfig) -> (usize, f64) {
    (cli.n.unwrap_or(cfg.grid.n), cfg.grid.margin)
}

struct Built {
    tuple: SolutionTuple,
    profiles: Option<AuxProfiles>,
    parameters: serde_json::Value,
}

fn to_value<T: Serialize>(v: &T) -> Result<serde_json::Value, CliError> {
    serde_json::to_value(v).map_err(|e| CliError::new(EXIT_SCHEMA, format!("cannot record parameters: {e}")))
}

/// Builds the tuple of `family` from a parsed config, using its `seed` and
/// `case` fields.
pub fn build_tuple(family: Family, cfg: &RunConfig) -> Result<SolutionTuple, CliError> {
    Ok(build_family(family, cfg.seed, cfg.case, cfg)?.tuple)
}

fn build_family(family: Family, seed: Option<u64>, case: Option<AuxCase>, cfg: &RunConfig) -> Result<Built, CliError> {
    match family {
        Family::PaperExample => {
            Ok(Built { tuple: paper_example(), profiles: None, parameters: serde_json::Value::Null })
        }
        Family::Affine => {
            let p = match &cfg.affine {
                Some(p) => p.clone(),
                None => random_affine_params(&mut rng(seed.unwrap_or(0))),
            };
            Ok(Built { tuple: lib(build_affine(&p))?, profiles: None, parameters: to_value(&p)? })
        }
        Family::Partial => {
            let p = cfg.partial.clone().unwrap_or_else(PartiallyAffineParams::example);
            Ok(Built { tuple: lib(build_partially_affine(&p))?, profiles: None, parameters: to_value(&p)? })
        }
        Family::Profiles => {
            let mut pc = cfg.profiles.clone().unwrap_or_default();
            let spec = pc.spec_or_corpus(case);
            pc.spec = Some(spec.clone());
            let profiles = lib(spec.build())?;
            let r = lib(reconstruct_from_profiles(&profiles, &pc.anchors, pc.quad_tol))?;
            let big_g = lib(solve_for_g_on_grid(&r.big_f, &r.f1, &r.f2, &r.g1, &r.g2, 0.0, pc.g_nodes))?;
            let tuple = lib(SolutionTuple::new(
                profiles.interval(),
                r.big_f,
                r.f1,
                r.f2,
                r.g1,
                r.g2,
                Arc::new(big_g),
                Regime::NowhereAffine,
            ))?;
            Ok(Built { tuple, profiles: Some(profiles), parameters: to_value(&pc)? })
        }
        Family::Tabulated => {
            Err(CliError::new(EXIT_SCHEMA, "tabulated tuples come from exported samples; use verify --artifact <file.csv>"))
        }
    }
}

fn residuals(
    tuple: &SolutionTuple,
    profiles: Option<&AuxProfiles>,
    n: usize,
    margin: f64,
) -> Result<(ResidualReport, Option<[ResidualReport; 2]>), CliError> {
    let main = lib(residual_main(tuple, n, margin))?;
    let system = match profiles {
        Some(p) => {
            let (a, b) = lib(residual_system(p, n, margin))?;
            Some([a, b])
        }
        None => None,
    };
    Ok((main, system))
}

fn within(main: &ResidualReport, system: &Option<[ResidualReport; 2]>, bound: f64) -> bool {
    main.max_abs < bound && system.as_ref().is_none_or(|s| s.iter().all(|r| r.max_abs < SELFTEST_SYSTEM_BOUND))
}

fn summary(label: &str, main: &ResidualReport, bound: f64, pass: bool) {
    eprintln!(
        "{label}: residual max {:.3e} mean {:.3e} at (x, y) = ({}, {}), bound {bound:e}: {}",
        main.max_abs,
        main.mean_abs,
        main.worst_point[0],
        main.worst_point[1],
        if pass { "PASS" } else { "FAIL" }
    );
}

fn build(cli: &Cli, cfg: &RunConfig) -> Result<i32, CliError> {
    let family = cli
        .family
        .or(cfg.family)
        .ok_or_else(|| CliError::new(EXIT_SCHEMA, "no family given: pass --family or set \"family\" in the config"))?;
    let (n, margin) = grid(cli, cfg);
    info!("building {family:?} on a {n}×{n} grid");
    let built = build_family(family, cli.seed.or(cfg.seed), cli.case.or(cfg.case), cfg)?;
    let (residual, system) = residuals(&built.tuple, built.profiles.as_ref(), n, margin)?;
    let bound = cli.tol.or(cfg.bound).unwrap_or(family_bound(family));
    let pass = within(&residual, &system, bound);
    let artifact = Artifact {
        schema: ARTIFACT_SCHEMA.into(),
        family,
        regime: built.tuple.regime(),
        bound,
        residual,
        system,
        provenance: Provenance::new("build", n, margin, cli.seed.or(cfg.seed)),
        parameters: built.parameters,
        profiles: built.profiles,
        tuple: built.tuple,
    };
    write_output(cli.out.as_deref(), &to_json(&artifact)?)?;
    summary(&format!("build {}", family_name(family)), &residual, bound, pass);
    Ok(if pass { EXIT_OK } else { EXIT_RESIDUAL })
}

fn family_name(f: Family) -> String {
    serde_json::to_value(f).ok().and_then(|v| v.as_str().map(str::to_owned)).unwrap_or_default()
}

/// A tuple read from a JSON artifact or an exported CSV.
struct Source {
    path: PathBuf,
    family: Family,
    bound: f64,
    tuple: SolutionTuple,
    profiles: Option<AuxProfiles>,
}

fn is_csv(p: &Path) -> bool {
    p.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv"))
}

fn load_source(cli: &Cli, cfg: &RunConfig) -> Result<Source, CliError> {
    let path = cli
        .artifact
        .clone()
        .or_else(|| cfg.artifact.clone())
        .ok_or_else(|| CliError::new(EXIT_SCHEMA, "no input given: pass --artifact or set \"artifact\" in the config"))?;
    if is_csv(&path) {
        let text = std::fs::read_to_string(&path)
            .map_err(|e| CliError::new(EXIT_SCHEMA, format!("cannot read {}: {e}", path.display())))?;
        let provisional = import_csv(&text, Regime::NowhereAffine)?;
        let verdict = lib(classify_affine_intervals(provisional.big_f(), DEFAULT_CLASSIFY_TOL, DEFAULT_CLASSIFY_N))?.verdict;
        let tuple = import_csv(&text, regime_of(verdict))?;
        Ok(Source { path, family: Family::Tabulated, bound: TABULATED_BOUND, tuple, profiles: None })
    } else {
        let a = read_artifact(&path)?;
        Ok(Source { path, family: a.family, bound: a.bound, tuple: a.tuple, profiles: a.profiles })
    }
}

fn regime_of(v: Verdict) -> Regime {
    match v {
        Verdict::GloballyAffine => Regime::Affine,
        Verdict::PartiallyAffine => Regime::PartiallyAffine,
        Verdict::NowhereAffine => Regime::NowhereAffine,
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerifyReport {
    pub source: String,
    pub family: Family,
    pub bound: f64,
    pub residual: ResidualReport,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub system: Option<[ResidualReport; 2]>,
    pub pass: bool,
}

fn verify(cli: &Cli, cfg: &RunConfig) -> Result<i32, CliError> {
    let src = load_source(cli, cfg)?;
    let (n, margin) = grid(cli, cfg);
    let (residual, system) = residuals(&src.tuple, src.profiles.as_ref(), n, margin)?;
    let bound = cli.tol.or(cfg.bound).unwrap_or(src.bound);
    let pass = within(&residual, &system, bound);
    let report = VerifyReport {
        source: src.path.display().to_string(),
        family: src.family,
        bound,
        residual,
        system,
        pass,
    };
    write_output(cli.out.as_deref(), &to_json(&report)?)?;
    summary(&format!("verify {}", src.path.display()), &residual, bound, pass);
    Ok(if pass { EXIT_OK } else { EXIT_RESIDUAL })
}

fn classify(cli: &Cli, cfg: &RunConfig) -> Result<i32, CliError> {
    let src = load_source(cli, cfg)?;
    let tol = cli.tol.or(cfg.tol).unwrap_or(DEFAULT_CLASSIFY_TOL);
    let n = cli.n.or(cfg.classify_n).unwrap_or(DEFAULT_CLASSIFY_N);
    let report: AffinityReport = lib(classify_affine_intervals(src.tuple.big_f(), tol, n))?;
    write_output(cli.out.as_deref(), &to_json(&report)?)?;
    let windows: Vec<String> =
        report.intervals.iter().map(|w| format!("{} (slope {}, intercept {})", w.interval, w.slope, w.intercept)).collect();
    eprintln!("classify: {:?}; affine on [{}]", report.verdict, windows.join(", "));
    Ok(match report.verdict {
        Verdict::GloballyAffine => EXIT_OK,
        Verdict::PartiallyAffine => EXIT_PARTIAL,
        Verdict::NowhereAffine => EXIT_NOWHERE,
    })
}

fn export(cli: &Cli, cfg: &RunConfig) -> Result<i32, CliError> {
    let src = load_source(cli, cfg)?;
    let (n, margin) = grid(cli, cfg);
    let csv = export_csv(&src.tuple, n, margin)?;
    write_output(cli.out.as_deref(), &csv)?;
    info!("exported {n} rows from {}", src.path.display());
    Ok(EXIT_OK)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GeometryReport {
    pub instances: usize,
    pub seed: u64,
    pub slack: f64,
    pub checks: usize,
    /// Descriptions of the failed checks (at most 50).
    pub failures: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub focus: Option<GeometryFocus>,
    pub pass: bool,
}

/// Set constructions for one configured subinterval.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GeometryFocus {
    pub report: IntervalSetReport,
    pub checks: Vec<LemmaCheck>,
}

/// Runs the lemma checks on `instances` random `(g1, g2, H, I)` draws.
fn random_lemma_suite(instances: usize, seed: u64, slack: f64) -> (usize, Vec<String>) {
    let mut r = rng(seed);
    let (mut count, mut failures) = (0, Vec::new());
    for k in 0..instances {
        let i = random_interval(&mut r);
        let (g1, g2) = random_same_sense_pair(&mut r, i);
        let h = random_subinterval(&mut r, i);
        match lemma_checks(h, &g1, &g2, i, slack) {
            Ok(checks) => {
                count += checks.len();
                for c in checks.into_iter().filter(|c| !c.pass) {
                    failures.push(format!("instance {k} (H = {h}, I = {i}): {}: {}", c.name, c.detail));
                }
            }
            Err(e) => {
                count += 1;
                failures.push(format!("instance {k} (H = {h}, I = {i}): {e}"));
            }
        }
    }
    (count, failures)
}

fn geometry(cli: &Cli, cfg: &RunConfig) -> Result<i32, CliError> {
    let g = cfg.geometry.clone().unwrap_or_default();
    let seed = cli.seed.or(cfg.seed).unwrap_or(0);
    let (checks, mut failures) = random_lemma_suite(g.instances, seed, g.slack);
    let focus = match g.h {
        Some(h) => Some(focus(cli, cfg, &g, h)?),
        None => None,
    };
    if let Some(f) = &focus {
        failures.extend(f.checks.iter().filter(|c| !c.pass).map(|c| format!("focus: {}: {}", c.name, c.detail)));
    }
    let pass = failures.is_empty();
    failures.truncate(50);
    let report = GeometryReport { instances: g.instances, seed, slack: g.slack, checks, failures, focus, pass };
    write_output(cli.out.as_deref(), &to_json(&report)?)?;
    eprintln!("geometry: {} instances, {checks} checks: {}", g.instances, if pass { "PASS" } else { "FAIL" });
    Ok(if pass { EXIT_OK } else { EXIT_RESIDUAL })
}

fn focus(cli: &Cli, cfg: &RunConfig, g: &GeometryConfig, h: OpenInterval) -> Result<GeometryFocus, CliError> {
    let tuple = if cli.artifact.is_some() || cfg.artifact.is_some() {
        load_source(cli, cfg)?.tuple
    } else {
        build_family(cli.family.or(cfg.family).unwrap_or(Family::PaperExample), cli.seed.or(cfg.seed), cli.case.or(cfg.case), cfg)?.tuple
    };
    let i = tuple.interval();
    Ok(GeometryFocus {
        report: lib(interval_report(h, tuple.g1(), tuple.g2(), i))?,
        checks: lib(lemma_checks(h, tuple.g1(), tuple.g2(), i, g.slack))?,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SelftestCheck {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SelftestReport {
    pub checks: Vec<SelftestCheck>,
    pub pass: bool,
}

/// The three example triples: `φ ≡ 0` with `sin, cos`; one index constant
/// with a single `U`; and a point `K`.
fn default_peter_specs() -> Vec<PeterSpec> {
    let iv = |a, b| OpenInterval::new(a, b).expect("static interval");
    let i = iv(0.0, 4.0);
    vec![
        PeterSpec::Case1Zero {
            i1: i,
            i2: i,
            psi1: Arc::new(Fn1D::closed_form(i, Expr::x().sin()).expect("sin is valid")),
            psi2: Arc::new(Fn1D::closed_form(i, Expr::x().cos()).expect("cos is valid")),
        },
        PeterSpec::Case2 { i1: i, i2: iv(1.0, 3.0), a: [2.0, 2.0], b: [2.0, 2.0], d: 1.0, e: -1.0, k_values: None, phi_value: 1.0 },
        PeterSpec::Case3 { i1: i, i2: i, j: 1, d: 5.0, u: vec![[0.0, 1.0]], other: Some(7.0), phi_value: 1.0 },
    ]
}

fn selftest(cli: &Cli, cfg: &RunConfig) -> Result<i32, CliError> {
    let mut checks = Vec::new();
    let mut add = |name: String, outcome: crate::Result<(bool, String)>| {
        let (pass, detail) = outcome.unwrap_or_else(|e| (false, e.to_string()));
        checks.push(SelftestCheck { name, pass, detail });
    };

    let example = paper_example();
    add(
        "example residual < 1e-12".into(),
        residual_main(&example, 200, 1e-3).map(|r| (r.max_abs < 1e-12, format!("max {:e}", r.max_abs))),
    );
    let consts = check_const(&PartiallyAffineParams::example());
    add(
        "example constants satisfy every identity".into(),
        Ok((consts.iter().all(|c| c.pass), format!("{} identities", consts.len()))),
    );
    add(
        "example classifies as partially affine".into(),
        classify_affine_intervals(example.big_f(), DEFAULT_CLASSIFY_TOL, DEFAULT_CLASSIFY_N)
            .map(|r| (r.verdict == Verdict::PartiallyAffine, format!("{:?}", r.verdict))),
    );
    for case in AuxCase::ALL {
        add(
            format!("profiles ({}) solve the derivative system", case.label()),
            AuxSpec::corpus(case).build().and_then(|p| residual_system(&p, 100, 1e-3)).map(|(a, b)| {
                let m = a.max_abs.max(b.max_abs);
                (m < SELFTEST_SYSTEM_BOUND, format!("max {m:e}"))
            }),
        );
    }
    for (k, spec) in cfg.peter.clone().unwrap_or_else(default_peter_specs).iter().enumerate() {
        add(
            format!("auxiliary triple {} has zero residual", k + 1),
            peter_triple(spec).and_then(|t| t.residual(200, 1e-3)).map(|r| (r.max_abs == 0.0, format!("max {:e}", r.max_abs))),
        );
    }
    let seed = cli.seed.or(cfg.seed).unwrap_or(0);
    let (count, failures) = random_lemma_suite(10, seed, 1e-9);
    add(
        "extension lemmas on 10 random instances".into(),
        Ok((failures.is_empty(), failures.first().cloned().unwrap_or_else(|| format!("{count} checks")))),
    );

    let pass = checks.iter().all(|c| c.pass);
    for c in &checks {
        eprintln!("{} {}: {}", if c.pass { "PASS" } else { "FAIL" }, c.name, c.detail);
    }
    write_output(cli.out.as_deref(), &to_json(&SelftestReport { checks, pass })?)?;
    Ok(if pass { EXIT_OK } else { EXIT_RESIDUAL })
}
