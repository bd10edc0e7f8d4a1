//! The `verify`, `classify`, `solve` and `crossing` runs. Each returns a
//! report, or an error message for the exit-2 path.

use std::path::PathBuf;

use kmat_core::address::{parse_algebra, FamilyAddress, RAddress};
use kmat_core::classify::{classify_kmatrix, verify_kmatrix, Check};
use kmat_core::io::{format_complex, write_matrix};
use kmat_core::kmatrix::{perturbative_solve, KMatrix, SolveOptions};
use kmat_core::linalg::inverse;
use kmat_core::rmatrix::find_crossing;
use kmat_core::spectral::SpectralSampler;
use kmat_core::DEFAULT_TOL;

use crate::config::{ConfigFile, RunConfig};
use crate::report::RunReport;

pub const DEFAULT_OUT: &str = "kmat-out";
const DEFAULT_SEED: u64 = 1;
const DEFAULT_ORDER: usize = 3;
/// Inconsistency above which an order of the solver is flagged.
const SOLVE_CONSISTENCY_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Verify,
    Classify,
    Solve,
    Crossing,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Verify => "verify",
            Command::Classify => "classify",
            Command::Solve => "solve",
            Command::Crossing => "crossing",
        }
    }

    /// Sample pairs for residual suites; spectral points for kernel problems.
    fn default_samples(self) -> usize {
        match self {
            Command::Classify => 7,
            _ => 20,
        }
    }
}

fn err(e: kmat_core::Error) -> String {
    e.to_string()
}

fn check_numbers(cfg: &ConfigFile) -> Result<(), String> {
    if let Some(t) = cfg.tolerance {
        if !(t.is_finite() && t > 0.0) {
            return Err(format!("tolerance must be positive, got {t}"));
        }
    }
    if cfg.order == Some(0) {
        return Err("order must be at least 1".into());
    }
    if cfg.spectral_samples == Some(0) {
        return Err("spectral_samples must be at least 1".into());
    }
    Ok(())
}

struct Resolved {
    config: RunConfig,
    k: KMatrix,
    r: RAddress,
}

fn resolve(cmd: Command, cfg: &ConfigFile) -> Result<Resolved, String> {
    check_numbers(cfg)?;
    let family = cfg
        .k_family
        .as_deref()
        .ok_or("no K-family given (positional address or k_family in the config)")?;
    let addr: FamilyAddress = family.parse().map_err(err)?;
    let k = addr.build().map_err(err)?;
    if let Some(alg) = &cfg.algebra {
        let n = parse_algebra(alg).map_err(err)?;
        if n != k.d() {
            return Err(format!("algebra {alg} does not match K-family {addr}"));
        }
    }
    let r = match &cfg.r_matrix {
        Some(s) => s.parse().map_err(err)?,
        None => RAddress::default_for(&k),
    };
    let config = RunConfig {
        algebra: format!("sl({})", k.d()),
        k_family: addr.to_string(),
        r_matrix: r.to_string(),
        spectral_samples: cfg.spectral_samples.unwrap_or(cmd.default_samples()),
        seed: cfg.seed.unwrap_or(DEFAULT_SEED),
        tolerance: cfg.tolerance.unwrap_or(DEFAULT_TOL),
        order: cfg.order.unwrap_or(DEFAULT_ORDER),
    };
    Ok(Resolved { config, k, r })
}

pub fn output_dir(cfg: &ConfigFile) -> PathBuf {
    cfg.output_dir
        .clone()
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT))
}

pub fn run(cmd: Command, cfg: &ConfigFile) -> Result<RunReport, String> {
    match cmd {
        Command::Verify => verify(&resolve(cmd, cfg)?),
        Command::Classify => classify(&resolve(cmd, cfg)?),
        Command::Solve => solve(&resolve(cmd, cfg)?),
        Command::Crossing => crossing(cfg),
    }
}

fn describe_k(report: &mut RunReport, res: &Resolved) -> Result<(), String> {
    let kappa = res.k.leading().map_err(err)?;
    report.push("k.dim", res.k.d());
    report.push("k.twisted", res.k.twisted());
    report.push("k.quasi_classical", inverse(&kappa).is_some());
    Ok(())
}

fn verify(res: &Resolved) -> Result<RunReport, String> {
    let c = &res.config;
    let setup = res.r.setup_for(&res.k).map_err(err)?;
    let checks =
        verify_kmatrix(&res.k, &setup, c.spectral_samples, c.seed, c.tolerance).map_err(err)?;
    let mut report = RunReport::new(Command::Verify.name(), c.clone());
    describe_k(&mut report, res)?;
    if let Some(g) = res.r.gamma().map_err(err)? {
        report.push("r.gamma", format_complex(g));
    }
    for check in checks {
        report.check(check);
    }
    Ok(report)
}

fn classify(res: &Resolved) -> Result<RunReport, String> {
    let c = &res.config;
    let cls = classify_kmatrix(&res.k, c.spectral_samples, c.tolerance).map_err(err)?;
    let mut report = RunReport::new(Command::Classify.name(), c.clone());
    for line in cls.summary_lines() {
        let (k, v) = line
            .split_once(" = ")
            .expect("summary lines are 'key = value'");
        report.push(k, v);
    }
    for check in cls.checks.clone() {
        report.check(check);
    }
    report.classification = Some(cls);
    Ok(report)
}

fn solve(res: &Resolved) -> Result<RunReport, String> {
    let c = &res.config;
    let setup = res.r.setup_for(&res.k).map_err(err)?;
    let kappa = res.k.leading().map_err(err)?;
    let opts = SolveOptions {
        order: c.order,
        ..SolveOptions::default()
    };
    let sol = perturbative_solve(&kappa, &setup, &opts).map_err(err)?;
    let mut report = RunReport::new(Command::Solve.name(), c.clone());
    report.push("kappa", write_matrix(&kappa).trim_end().replace('\n', "; "));
    report.push("twisted", setup.twisted);
    if let Some(g) = res.r.gamma().map_err(err)? {
        report.push("r.gamma", format_complex(g));
    }
    let dims: Vec<String> = sol.nullspace_dims().iter().map(|d| d.to_string()).collect();
    report.push("nullspace_dims", format!("[{}]", dims.join(",")));
    report.check(Check::new("seed_cbybe", sol.seed_residual, opts.seed_tol));
    for o in &sol.orders {
        report.push(format!("order.{}.nullspace_dim", o.r), o.nullspace_dim);
        report.push(format!("order.{}.rank", o.r), o.rank);
        report.push(format!("order.{}.equations", o.r), o.equations);
        if let Some(reduced) = o.reduced_nullspace_dim {
            report.push(format!("order.{}.reduced_nullspace_dim", o.r), reduced);
        }
        report.check(Check::new(
            format!("order{}_consistency", o.r),
            o.inconsistency,
            SOLVE_CONSISTENCY_TOL,
        ));
        if let Some(reduced) = o.reduced_nullspace_dim {
            report.check(Check::count(
                format!("order{}_reduced_system", o.r),
                reduced,
                o.nullspace_dim,
            ));
        }
    }
    Ok(report)
}

fn crossing(cfg: &ConfigFile) -> Result<RunReport, String> {
    check_numbers(cfg)?;
    let alg = cfg
        .algebra
        .as_deref()
        .ok_or("no algebra given (positional sl(n) or algebra in the config)")?;
    let n = parse_algebra(alg).map_err(err)?;
    let config = RunConfig {
        algebra: format!("sl({n})"),
        k_family: format!("twist-const:sl({n}):sym"),
        r_matrix: format!("yang-crossed:sl({n}):auto-gamma"),
        spectral_samples: cfg
            .spectral_samples
            .unwrap_or(Command::Crossing.default_samples()),
        seed: cfg.seed.unwrap_or(DEFAULT_SEED),
        tolerance: cfg.tolerance.unwrap_or(DEFAULT_TOL),
        order: cfg.order.unwrap_or(DEFAULT_ORDER),
    };
    let pairs = SpectralSampler::new(config.seed).pairs(config.spectral_samples);
    let found = find_crossing(n, &pairs).map_err(err)?;
    let mut report = RunReport::new(Command::Crossing.name(), config.clone());
    report.push("gamma", format_complex(found.gamma));
    let roots: Vec<String> = found.roots.iter().map(|z| format_complex(*z)).collect();
    report.push("roots", format!("[{}]", roots.join(",")));
    report.push("local_minima", found.local_minima.len());
    report.check(Check::new(
        "crossed_unitarity",
        found.objective,
        config.tolerance,
    ));
    report.check(Check::new(
        "twisted_bybe_kappa_identity",
        found.bybe_residual,
        config.tolerance,
    ));
    Ok(report)
}
