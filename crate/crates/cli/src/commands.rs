use std::env;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use lifshitz_core::atom_plate::default_grid;
use lifshitz_core::config::{load_experiment, load_system, ExperimentPhase, SystemConfig};
use lifshitz_core::{
    au_zero_frequency_check, cd_coefficient, difference_force, CasimirPolder, DifferenceForce,
    MatsubaraGrid, Tolerance, ZeroFrequencyPolicy,
};
use serde_json::json;

use crate::args::{
    AuCheckArgs, CdTableArgs, Command, Common, DiffForceArgs, DiffPolicy, NernstArgs, Quantity,
    Range, SweepArgs,
};
use crate::error::{CliError, Context};
use crate::manifest::{ConfigDigest, RunManifest};

pub const CONFIG_DIR_VAR: &str = "LIFSHITZ_CONFIG_DIR";

const NM: f64 = 1e-9;
const PN: f64 = 1e-12;
const FORCE_CONVENTION: &str =
    "forces signed (attractive negative); dF = |F_bright| - |F_dark|; sphere-plate forces by proximity force approximation";

pub fn run(command: &Command) -> Result<(), CliError> {
    match command {
        Command::CdTable(a) => cd_table(a),
        Command::Nernst(a) => nernst(a),
        Command::DiffForce(a) => diff_force(a),
        Command::Sweep(a) => sweep(a),
        Command::AuCheck(a) => au_check(a),
    }
}

pub fn name(command: &Command) -> &'static str {
    match command {
        Command::CdTable(_) => "cd-table",
        Command::Nernst(_) => "nernst",
        Command::DiffForce(_) => "diff-force",
        Command::Sweep(_) => "sweep",
        Command::AuCheck(_) => "au-check",
    }
}

fn tolerance(common: &Common) -> Result<Tolerance, CliError> {
    Tolerance::default()
        .with_rel(common.tol)
        .map_err(|e| CliError::Usage(e.to_string()))
}

/// Explicit paths win when they exist; otherwise relative paths and the
/// default file name are looked up in `$LIFSHITZ_CONFIG_DIR`.
fn resolve_config(arg: Option<&Path>, default_name: &str) -> Result<PathBuf, CliError> {
    let dir = env::var_os(CONFIG_DIR_VAR).map(PathBuf::from);
    let path = match (arg, dir) {
        (Some(p), _) if p.is_absolute() || p.exists() => p.to_path_buf(),
        (Some(p), Some(d)) => d.join(p),
        (Some(p), None) => p.to_path_buf(),
        (None, Some(d)) => d.join(default_name),
        (None, None) => {
            return Err(CliError::Usage(format!(
                "no --config given and {CONFIG_DIR_VAR} is not set (default file: {default_name})"
            )))
        }
    };
    log::info!("configuration file {}", path.display());
    Ok(path)
}

fn display(path: Option<&Path>) -> String {
    path.map_or_else(|| "stdout".to_string(), |p| p.display().to_string())
}

fn emit(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, text).map_err(|source| CliError::Io {
            path: p.display().to_string(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn parse_list(s: &str) -> Result<Vec<f64>, CliError> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<f64>()
                .map_err(|e| CliError::Usage(format!("--eps entry '{t}': {e}")))
        })
        .collect()
}

fn cd_table(args: &CdTableArgs) -> Result<(), CliError> {
    let tol = tolerance(&args.common)?;
    let eps = parse_list(&args.eps)?;
    let mut m = RunManifest::new("cd-table", tol);
    m.param("eps0", &args.eps);
    m.outputs.push(display(args.common.out.as_deref()));
    let mut body = m.csv_header();
    body.push_str("eps0,C_D\n");
    for (row, &e) in eps.iter().enumerate() {
        let c = cd_coefficient(e).context(|| format!("row {row} (eps0 = {e})"))?;
        let _ = writeln!(body, "{e},{c:e}");
    }
    emit(args.common.out.as_deref(), &body)
}

fn load_system_at(
    config: Option<&Path>,
    separation_nm: Option<f64>,
) -> Result<(PathBuf, SystemConfig, f64), CliError> {
    let path = resolve_config(config, "rb_sio2.toml")?;
    let sys = load_system(&path).context(|| "loading system".to_string())?;
    let a = match separation_nm {
        Some(nm) if nm > 0.0 && nm.is_finite() => nm * NM,
        Some(nm) => {
            return Err(CliError::Usage(format!(
                "separation must be positive, got {nm} nm"
            )))
        }
        None => sys.separation,
    };
    Ok((path, sys, a))
}

fn nernst(args: &NernstArgs) -> Result<(), CliError> {
    let tol = tolerance(&args.common)?;
    let (path, sys, a) = load_system_at(args.config.as_deref(), args.separation)?;
    let atom = sys.atom.at(a).context(|| "atom".to_string())?;
    let grid = match args.grid {
        Some(r) => r.points(),
        None => default_grid(a).context(|| "default grid".to_string())?,
    };
    let t_eff = MatsubaraGrid::effective_temperature(a).context(|| "T_eff".to_string())?;
    let verdict = CasimirPolder::new(atom, &sys.plate, args.policy)
        .with_tolerance(tol)
        .nernst_test(a, &grid)
        .context(|| format!("nernst test at a = {} nm", a / NM))?;

    let csv_path = args
        .csv
        .clone()
        .or_else(|| args.common.out.as_ref().map(|p| p.with_extension("csv")));
    let mut m = RunManifest::new("nernst", tol);
    m.config = Some(ConfigDigest::of(&path, &sys));
    m.param("policy", args.policy)
        .param("separation_nm", a / NM)
        .param("grid_K", grid_label(args.grid));
    m.outputs.push(display(args.common.out.as_deref()));
    if let Some(p) = &csv_path {
        m.outputs.push(p.display().to_string());
    }

    eprintln!(
        "nernst: {:?}, S(0) = {:e} +/- {:e} J/K (predicted {:e})",
        verdict.classification,
        verdict.residual_entropy,
        verdict.extrapolation_error,
        verdict.predicted_residual
    );
    if let Some(p) = &csv_path {
        let mut body = m.csv_header();
        body.push_str("T_K,T_over_T_eff,S_J_per_K,S_err_J_per_K\n");
        for s in &verdict.samples {
            let _ = writeln!(
                body,
                "{:e},{:e},{:e},{:e}",
                s.temperature,
                s.temperature / t_eff,
                s.entropy,
                s.error
            );
        }
        emit(Some(p), &body)?;
    }
    let report = json!({
        "manifest": m,
        "separation_nm": a / NM,
        "policy": args.policy.as_str(),
        "t_eff_K": t_eff,
        "units": {"temperature": "K", "entropy": "J/K"},
        "verdict": verdict,
    });
    let mut text = serde_json::to_string_pretty(&report)?;
    text.push('\n');
    emit(args.common.out.as_deref(), &text)
}

fn grid_label(r: Option<Range>) -> String {
    r.map_or_else(
        || "default (16 geometric points over [1e-4, 1e-1] T_eff)".to_string(),
        |r| r.to_string(),
    )
}

fn load_phases(
    config: Option<&Path>,
    grid: Option<Range>,
) -> Result<(PathBuf, Vec<ExperimentPhase>), CliError> {
    let path = resolve_config(config, "experiment.toml")?;
    let mut phases = load_experiment(&path).context(|| "loading experiment".to_string())?;
    if let Some(r) = grid {
        let separations: Vec<f64> = r.points().iter().map(|nm| nm * NM).collect();
        for p in &mut phases {
            p.config.separations = separations.clone();
        }
    }
    Ok((path, phases))
}

fn diff_force(args: &DiffForceArgs) -> Result<(), CliError> {
    let tol = tolerance(&args.common)?;
    let (path, phases) = load_phases(args.config.as_deref(), args.grid)?;
    let policies: &[ZeroFrequencyPolicy] = match args.policy {
        DiffPolicy::NeglectDc => &[ZeroFrequencyPolicy::NeglectDc],
        DiffPolicy::Screened => &[ZeroFrequencyPolicy::Screened],
        DiffPolicy::Both => &[
            ZeroFrequencyPolicy::NeglectDc,
            ZeroFrequencyPolicy::Screened,
        ],
    };
    // one table per bright phase, each holding one row set per policy
    let mut tables: Vec<Vec<Vec<DifferenceForce>>> = Vec::new();
    for phase in &phases {
        let n_cm3 = phase.excited_density * 1e-6;
        let mut per_policy = Vec::new();
        for &p in policies {
            let rows = difference_force(&phase.config, p, tol)
                .context(|| format!("difference force, {p}, bright density {n_cm3:e} cm^-3"))?;
            per_policy.push(rows);
        }
        tables.push(per_policy);
    }

    let mut m = RunManifest::new("diff-force", tol);
    m.config = Some(ConfigDigest::of(&path, &phases));
    m.param(
        "policy",
        policies
            .iter()
            .map(|p| p.as_str())
            .collect::<Vec<_>>()
            .join(","),
    )
    .param(
        "separations_nm",
        args.grid
            .map_or_else(|| "from config".to_string(), |r| r.to_string()),
    )
    .param("convention", FORCE_CONVENTION);
    m.outputs.push(display(args.common.out.as_deref()));
    let mut body = m.csv_header();
    if policies.len() == 1 {
        body.push_str("a_nm,n_bright_cm3,F_dark_pN,F_bright_pN,dF_pN,policy\n");
    } else {
        body.push_str(
            "a_nm,n_bright_cm3,F_dark_neglect_dc_pN,F_bright_neglect_dc_pN,dF_neglect_dc_pN,\
             F_dark_screened_pN,F_bright_screened_pN,dF_screened_pN,dF_screened_minus_neglect_pN\n",
        );
    }
    for (phase, per_policy) in phases.iter().zip(&tables) {
        let n_cm3 = phase.excited_density * 1e-6;
        for (i, r) in per_policy[0].iter().enumerate() {
            let _ = write!(
                body,
                "{:e},{n_cm3:e},{:e},{:e},{:e}",
                r.separation / NM,
                r.dark / PN,
                r.bright / PN,
                r.delta / PN
            );
            if policies.len() == 1 {
                let _ = writeln!(body, ",{}", policies[0]);
            } else {
                let s = &per_policy[1][i];
                let _ = writeln!(
                    body,
                    ",{:e},{:e},{:e},{:e}",
                    s.dark / PN,
                    s.bright / PN,
                    s.delta / PN,
                    (s.delta - r.delta) / PN
                );
            }
        }
    }
    emit(args.common.out.as_deref(), &body)
}

fn au_check(args: &AuCheckArgs) -> Result<(), CliError> {
    let tol = tolerance(&args.common)?;
    let (path, phases) = load_phases(args.config.as_deref(), args.grid)?;
    let cfg = &phases
        .first()
        .ok_or_else(|| CliError::Usage("experiment has no phases".into()))?
        .config;
    let check = au_zero_frequency_check(cfg, tol).context(|| "zero-frequency check".to_string())?;
    let mut m = RunManifest::new("au-check", tol);
    m.config = Some(ConfigDigest::of(&path, cfg));
    m.param(
        "separations_nm",
        args.grid
            .map_or_else(|| "from config".to_string(), |r| r.to_string()),
    )
    .param("plate", "dark phase, neglect-dc")
    .param("convention", FORCE_CONVENTION);
    m.outputs.push(display(args.common.out.as_deref()));
    let mut body = m.csv_header();
    body.push_str("a_nm,F_standard_pN,F_screened_pN,rel_dev\n");
    for &(a, fs, fr) in &check.rows {
        let dev = if fs == 0.0 {
            0.0
        } else {
            ((fr - fs) / fs).abs()
        };
        let _ = writeln!(body, "{:e},{:e},{:e},{dev:e}", a / NM, fs / PN, fr / PN);
    }
    eprintln!(
        "au-check: max relative deviation {:e}",
        check.max_relative_deviation
    );
    emit(args.common.out.as_deref(), &body)
}

fn sweep(args: &SweepArgs) -> Result<(), CliError> {
    let tol = tolerance(&args.common)?;
    let (path, sys, a0) = load_system_at(args.config.as_deref(), None)?;
    let separations = match args.separations {
        Some(r) => r.points().iter().map(|nm| nm * NM).collect(),
        None => vec![a0],
    };
    if args.quantity == Quantity::Energy0 && args.grid.is_some() {
        log::warn!("--grid is ignored for energy0");
    }

    let mut m = RunManifest::new("sweep", tol);
    m.config = Some(ConfigDigest::of(&path, &sys));
    let quantity = match args.quantity {
        Quantity::FreeEnergy => "free-energy",
        Quantity::Entropy => "entropy",
        Quantity::Energy0 => "energy0",
    };
    m.param("quantity", quantity)
        .param("policy", args.policy)
        .param(
            "separations_nm",
            args.separations
                .map_or_else(|| format!("{} (from config)", a0 / NM), |r| r.to_string()),
        );
    if args.quantity != Quantity::Energy0 {
        m.param("grid_K", grid_label(args.grid));
    }
    m.outputs.push(display(args.common.out.as_deref()));
    let mut body = m.csv_header();
    body.push_str(match args.quantity {
        Quantity::FreeEnergy => "a_nm,T_K,F_J\n",
        Quantity::Entropy => "a_nm,T_K,S_J_per_K,S_err_J_per_K\n",
        Quantity::Energy0 => "a_nm,E0_J\n",
    });

    for &a in &separations {
        let atom = sys
            .atom
            .at(a)
            .context(|| format!("atom at a = {} nm", a / NM))?;
        let cp = CasimirPolder::new(atom, &sys.plate, args.policy).with_tolerance(tol);
        if args.quantity == Quantity::Energy0 {
            let e = cp.energy_t0(a).context(|| format!("a = {} nm", a / NM))?;
            let _ = writeln!(body, "{:e},{e:e}", a / NM);
            continue;
        }
        let temperatures = match args.grid {
            Some(r) => r.points(),
            None => default_grid(a).context(|| "default grid".to_string())?,
        };
        for t in temperatures {
            let at = || format!("a = {} nm, T = {t} K", a / NM);
            match args.quantity {
                Quantity::FreeEnergy => {
                    let f = cp.free_energy(a, t).context(at)?;
                    let _ = writeln!(body, "{:e},{t:e},{f:e}", a / NM);
                }
                _ => {
                    let s = cp.entropy_with_error(a, t).context(at)?;
                    let _ = writeln!(body, "{:e},{t:e},{:e},{:e}", a / NM, s.value, s.error);
                }
            }
        }
    }
    emit(args.common.out.as_deref(), &body)
}
