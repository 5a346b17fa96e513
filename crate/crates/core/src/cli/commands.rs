//! The four subcommands.

use std::path::{Path, PathBuf};

use rayon::prelude::*;

use super::config::{ScenarioConfig, SweepParameter};
use super::output::{number, profile_csv, write_atomic, KeyValues};
use super::suite::{max_deviation, run_suite};
use super::{CliError, CommonArgs, SweepArgs};
use crate::halfspace::{
    closed_form_profile, solve as solve_profile, validate_profile, ClosedFormSolution, ProblemSpec,
    Profile, Track,
};

pub const SWEEP_HEADER: &str =
    "parameter,value,L,x0,delta_rho_s,v_s_boundary,rho_s_boundary,iterations,status";

struct Loaded {
    config: ScenarioConfig,
    spec: ProblemSpec,
    out: PathBuf,
}

fn load(args: &CommonArgs) -> Result<Loaded, CliError> {
    let config = ScenarioConfig::load(&args.config, &args.overrides)?;
    let spec = config.problem_spec()?;
    let out = args
        .out
        .clone()
        .unwrap_or_else(|| config.output.dir.clone());
    Ok(Loaded { config, spec, out })
}

fn solver_failure(e: crate::Error, spec: &ProblemSpec, track: Track) -> CliError {
    match CliError::from(e) {
        CliError::Solver(msg) => CliError::Solver(format!(
            "{msg} (track {}, N = {}, newton_tol = {:e})",
            track.resolve(&spec.material),
            spec.nodes,
            spec.newton_tol
        )),
        other => other,
    }
}

/// Summary lines shared by `solve` and the sweep rows.
pub fn summarize(profile: &Profile) -> KeyValues {
    let report = validate_profile(profile);
    let mut kv = KeyValues::default();
    kv.text("track", profile.track.to_string())
        .num("L", profile.l)
        .num("x0", profile.x0)
        .num("delta_rho_s", profile.delta_rho_s)
        .num("C2", profile.c2)
        .text("iterations", profile.iterations.to_string())
        .text("classical", profile.classical.to_string())
        .text("nodes", profile.len().to_string())
        .num("X", *profile.x.last().unwrap_or(&0.0))
        .num("rho_s_far", profile.far_field.rho_s)
        .num("rho_f_far", profile.far_field.rho_f)
        .num("p_far", profile.far_field.p)
        .num("c", profile.c);
    for check in &report.checks {
        let key = if check.informational {
            format!("residual.{}.info", check.name)
        } else {
            format!("residual.{}", check.name)
        };
        kv.num(key, check.value);
    }
    kv.num("max_residual", report.max_residual());
    kv
}

pub fn solve(args: &CommonArgs) -> Result<(), CliError> {
    let Loaded { config, spec, out } = load(args)?;
    let profile =
        solve_profile(&spec, args.track).map_err(|e| solver_failure(e, &spec, args.track))?;
    let mut summary = summarize(&profile);
    if profile.track == Track::Compressible && spec.material.is_density_preserving() {
        // Same problem through the closed form: report the oracle deviation.
        let cf = closed_form_profile(&spec)?;
        let drop = cf.delta_rho_s.abs();
        let d_rho = max_deviation(&profile.rho_s, &cf.rho_s);
        let d_p = max_deviation(&profile.p, &cf.p);
        summary
            .num("oracle.max_rho_s_deviation", d_rho)
            .num(
                "oracle.max_rho_s_deviation_rel",
                if drop > 0.0 { d_rho / drop } else { d_rho },
            )
            .num("oracle.max_p_deviation", d_p)
            .num(
                "oracle.max_p_deviation_rel",
                if spec.interface.p_i > 0.0 {
                    d_p / spec.interface.p_i
                } else {
                    d_p
                },
            );
    }
    write_atomic(&out.join(&config.output.profile), &profile_csv(&profile))?;
    write_atomic(&out.join(&config.output.summary), &summary.render())?;
    Ok(())
}

pub fn closed_form(args: &CommonArgs) -> Result<(), CliError> {
    let Loaded { spec, .. } = load(args)?;
    let cf = ClosedFormSolution::new(&spec.model(), spec.amplitude)?;
    let mut kv = KeyValues::default();
    kv.num("L", cf.l)
        .num("x0", cf.x0)
        .num("delta_rho_s", cf.delta_rho_s)
        .num("C2", cf.c2);
    print!("{}", kv.render());
    Ok(())
}

pub fn validate(args: &CommonArgs) -> Result<(), CliError> {
    let Loaded { config, spec, out } = load(args)?;
    let entries = run_suite(&spec, args.track);
    let mut kv = KeyValues::default();
    for e in &entries {
        kv.num(e.name, e.value)
            .num(format!("{}.tolerance", e.name), e.tolerance)
            .text(
                format!("{}.status", e.name),
                if e.passed() { "pass" } else { "fail" },
            );
        if !e.detail.is_empty() {
            kv.text(format!("{}.detail", e.name), e.detail.clone());
        }
    }
    let failed: Vec<&str> = entries
        .iter()
        .filter(|e| !e.passed())
        .map(|e| e.name)
        .collect();
    kv.text("status", if failed.is_empty() { "pass" } else { "fail" });
    write_atomic(&out.join(&config.output.report), &kv.render())?;
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Validation(failed.join(", ")))
    }
}

/// One CSV row; failures become a `error: ...` status with empty numbers.
fn sweep_row(base: &ScenarioConfig, param: SweepParameter, value: f64, track: Track) -> String {
    let outcome = (|| {
        let spec = param.apply(base, value).problem_spec()?;
        let p = solve_profile(&spec, track).map_err(|e| solver_failure(e, &spec, track))?;
        Ok::<_, CliError>(p)
    })();
    let cells = match outcome {
        Ok(p) => vec![
            number(p.l),
            number(p.x0),
            number(p.delta_rho_s),
            number(p.v_s[0]),
            number(p.rho_s[0]),
            p.iterations.to_string(),
            "ok".to_string(),
        ],
        Err(e) => {
            let status = format!("error: {e}").replace([',', '\n', '\r'], ";");
            let mut cells = vec![String::new(); 6];
            cells.push(status);
            cells
        }
    };
    format!("{},{},{}\n", param.name(), number(value), cells.join(","))
}

fn rows_dir(sweep_path: &Path) -> PathBuf {
    let name = sweep_path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| "sweep".into());
    sweep_path.with_file_name(format!("{name}.rows"))
}

pub fn sweep(args: &SweepArgs) -> Result<(), CliError> {
    let Loaded { config, out, .. } = load(&args.common)?;
    let (param, values) = match (args.param, &args.values, &config.sweep) {
        (Some(p), Some(v), _) => (p, v.clone()),
        (p, v, Some(block)) => (
            p.unwrap_or(block.parameter),
            v.clone().unwrap_or_else(|| block.values.clone()),
        ),
        _ => {
            return Err(CliError::Config(
                "sweep needs --param and --values or a [sweep] block".into(),
            ))
        }
    };
    if values.is_empty() {
        return Err(CliError::Config("sweep: no values given".into()));
    }
    if let Some(v) = values.iter().find(|v| !v.is_finite()) {
        return Err(CliError::Config(format!("sweep: value {v} is not finite")));
    }
    let sweep_path = out.join(&config.output.sweep);
    let rows_dir = rows_dir(&sweep_path);
    let track = args.common.track;
    let rows: Vec<Result<String, CliError>> = values
        .par_iter()
        .enumerate()
        .map(|(i, &v)| {
            let row = sweep_row(&config, param, v, track);
            write_atomic(&rows_dir.join(format!("row_{i:04}.csv")), &row)?;
            Ok(row)
        })
        .collect();
    let mut table = String::from(SWEEP_HEADER);
    table.push('\n');
    for row in rows {
        table.push_str(&row?);
    }
    write_atomic(&sweep_path, &table)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::halfspace::solve_compressible;

    const BASE: &str = r#"
[reference]
rhat_s0 = 2160.0
rhat_f0 = 1200.0
v_s0 = 0.9

[material]
eps_ss = 5.0
eps_ff = 2.0
eps_sf = 0.5
lambda_s = 0.0125

[interface]
p_i = 1e6
D_coeff = 9.5e-4
"#;

    #[test]
    fn failing_row_is_recorded() {
        let c = ScenarioConfig::parse(BASE, false, &[]).unwrap();
        let row = sweep_row(&c, SweepParameter::LambdaS, -1.0, Track::Auto);
        assert!(
            row.starts_with("lambda_s,-1.0000000000000000e0,,,,,,,error:"),
            "{row}"
        );
        assert_eq!(row.matches(',').count(), SWEEP_HEADER.matches(',').count());
    }

    #[test]
    fn summary_has_the_headline_numbers() {
        let p = solve_profile(&fixtures::salt_brine_spec(), Track::Auto).unwrap();
        let kv = summarize(&p);
        for key in ["L", "x0", "delta_rho_s", "C2", "iterations", "max_residual"] {
            assert!(kv.get(key).is_some(), "{key}");
        }
        assert_eq!(kv.get("track"), Some("closed-form"));
    }

    #[test]
    fn compressible_solver_is_reachable() {
        let mut spec = fixtures::salt_brine_spec();
        spec.material.c_s = 1e-3;
        let p = solve_compressible(&spec).unwrap();
        assert!(p.iterations >= 1);
    }
}
