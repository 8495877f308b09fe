//! The five subcommands: shift, sweep, oracle, rabi, lamb. Each resolves
//! the configuration into library calls, assembles a column-ordered table,
//! and routes it through the emitter.

use std::fs;

use rayon::prelude::*;

use chiral_cavity::fock::{validate_against_perturbation, FockError};
use chiral_cavity::model::{
    coulomb_potential, harmonic2d_potential, CavityParams, Chirality, Dimensionality,
};
use chiral_cavity::rabi::{
    compare_formulas, two_level_from_oscillator, two_level_from_radial, RabiError, SupportedForm,
    TwoLevelConfig,
};
use chiral_cavity::radial::{
    coulomb_default_grid, harmonic2d_default_grid, solve_bound_state, RadialError, RadialGrid,
    RadialState,
};
use chiral_cavity::shifts::{
    cl_shift_transverse, ho2d_shift_closed_form, hydrogen_shift_closed_form, lamb_shift_continuum,
    lamb_shift_hydrogen_closed_form, shift_generic, LambResult, ShiftError, ShiftResult,
};
use chiral_cavity::units::energy_from_hartree;

use crate::cli::{Cli, Command, OracleArgs, PathArg, RabiArgs, ShiftArgs, SweepArgs, UnitArg};
use crate::config::{
    ho2d_state, hydrogen_state, parse_config, resolve, sweep_values, CliError, OracleConfig,
    Resolved, StateConfig, SweepParameter, SystemKind,
};
use crate::emit::{write_file, Emitter};
use crate::table::{format_float, Cell, Table};

const PRESETS: &[(&str, &str)] = &[
    ("hydrogen-2p-0.23mev", include_str!("../presets/hydrogen-2p-0.23mev.toml")),
    ("ho2d-gap", include_str!("../presets/ho2d-gap.toml")),
    ("oracle-default", include_str!("../presets/oracle-default.toml")),
    ("rabi-ho2d", include_str!("../presets/rabi-ho2d.toml")),
    ("lamb-2s", include_str!("../presets/lamb-2s.toml")),
];

pub fn run(cli: &Cli) -> Result<i32, CliError> {
    let text = load_source(cli)?;
    let config = parse_config(&text)?;
    let resolved = resolve(config)?;
    let emitter = Emitter::new(cli, resolved.config.output.as_ref());
    match &cli.command {
        Command::Shift(args) => cmd_shift(args, &resolved, &emitter),
        Command::Sweep(args) => cmd_sweep(cli, args, &resolved, &emitter),
        Command::Oracle(args) => cmd_oracle(args, &resolved, &emitter),
        Command::Rabi(args) => cmd_rabi(args, &resolved, &emitter),
        Command::Lamb => cmd_lamb(&resolved, &emitter),
    }
}

fn load_source(cli: &Cli) -> Result<String, CliError> {
    match (&cli.config, &cli.preset) {
        (Some(path), None) => fs::read_to_string(path)
            .map_err(|e| CliError::config(format!("cannot read {}: {e}", path.display()))),
        (None, Some(name)) => PRESETS
            .iter()
            .find(|(key, _)| key == name)
            .map(|(_, text)| (*text).to_owned())
            .ok_or_else(|| {
                CliError::config(format!(
                    "unknown preset {name:?}; available: {}",
                    preset_names().join(", ")
                ))
            }),
        (None, None) => Err(CliError::config(format!(
            "pass exactly one of --config PATH or --preset NAME (presets: {})",
            preset_names().join(", ")
        ))),
        (Some(_), Some(_)) => unreachable!("clap rejects --config together with --preset"),
    }
}

fn preset_names() -> Vec<&'static str> {
    PRESETS.iter().map(|(name, _)| *name).collect()
}

fn to_unit(v_hartree: f64, unit: UnitArg) -> f64 {
    energy_from_hartree(v_hartree, unit.energy_unit())
}

fn col(name: &str, unit: UnitArg) -> String {
    format!("{name}_{}", unit.suffix())
}

fn chirality_text(c: Chirality) -> &'static str {
    match c {
        Chirality::Plus => "plus",
        Chirality::Minus => "minus",
    }
}

fn map_radial(e: RadialError) -> CliError {
    match e {
        RadialError::InvalidGrid { .. } | RadialError::InvalidQuantumNumbers { .. } => {
            CliError::config(e.to_string())
        }
        _ => CliError::numerical(e.to_string()),
    }
}

fn map_shift(e: ShiftError) -> CliError {
    match e {
        ShiftError::Radial(inner) => map_radial(inner),
        ShiftError::InvalidQuantumNumbers { .. } | ShiftError::NonHydrogenicCutoffs => {
            CliError::config(e.to_string())
        }
    }
}

fn map_rabi(e: RabiError) -> CliError {
    match e {
        RabiError::InvalidRequest { .. } => CliError::config(e.to_string()),
        RabiError::Radial(inner) => map_radial(inner),
        RabiError::Shift(inner) => map_shift(inner),
        _ => CliError::numerical(e.to_string()),
    }
}

fn map_fock(e: FockError) -> CliError {
    CliError::numerical(e.to_string())
}

/// States to evaluate, already expanded and ordered by l_z ascending.
#[derive(Debug, Clone)]
enum StateSpec {
    /// (n, l) with the magnetic substates to emit.
    Radial3d { n: u32, l: u32, l_zs: Vec<i64> },
    /// Radial node count with the planar angular momenta to emit.
    Radial2d { n: u32, l_zs: Vec<i64> },
    /// Oscillator occupation pairs.
    Ho2d { states: Vec<(u32, u32)> },
}

fn state_spec(resolved: &Resolved, state: &StateConfig) -> Result<StateSpec, CliError> {
    match &resolved.system {
        SystemKind::Hydrogen { .. } => {
            let (n, l, l_z) = hydrogen_state("state", state)?;
            let l_zs = match l_z {
                Some(v) => vec![v],
                None => (-(l as i64)..=(l as i64)).collect(),
            };
            Ok(StateSpec::Radial3d { n, l, l_zs })
        }
        SystemKind::Ho2d { .. } => {
            let (n_right, n_left, mirror) = ho2d_state("state", state)?;
            let mut states = vec![(n_right, n_left)];
            if mirror && n_right != n_left {
                states.push((n_left, n_right));
            }
            states.sort_by_key(|&(r, l)| i64::from(r) - i64::from(l));
            Ok(StateSpec::Ho2d { states })
        }
        SystemKind::Custom { potential, .. } => match potential.dimensionality() {
            Dimensionality::Three => {
                let (n, l, l_z) = hydrogen_state("state", state)?;
                let l_zs = match l_z {
                    Some(v) => vec![v],
                    None => (-(l as i64)..=(l as i64)).collect(),
                };
                Ok(StateSpec::Radial3d { n, l, l_zs })
            }
            Dimensionality::Two => {
                let n = state.n.ok_or_else(|| {
                    CliError::config("state.n: required (radial node count in 2D)")
                })?;
                let l_zs = match (state.l, state.l_z) {
                    (_, Some(l_z)) => {
                        if let Some(l) = state.l {
                            if u64::from(l) != l_z.unsigned_abs() {
                                return Err(CliError::config(format!(
                                    "state.l/state.l_z: in 2D l must equal |l_z|, got l = {l}, l_z = {l_z}"
                                )));
                            }
                        }
                        vec![l_z]
                    }
                    (Some(0), None) => vec![0],
                    (Some(l), None) => vec![-(i64::from(l)), i64::from(l)],
                    (None, None) => {
                        return Err(CliError::config(
                            "state.l_z (or state.l): required for a 2D custom potential",
                        ))
                    }
                };
                Ok(StateSpec::Radial2d { n, l_zs })
            }
        },
    }
}

/// Rows for one parameter point, plus cross-path agreement and the solved
/// radial function when the numeric engine ran.
struct RowsBundle {
    rows: Vec<Vec<Cell>>,
    max_rel: Option<f64>,
    radial: Option<RadialState<f64>>,
}

fn shift_columns(system: &SystemKind, unit: UnitArg, transverse: bool) -> Vec<String> {
    let mut columns: Vec<String> = match system {
        SystemKind::Ho2d { .. } => vec!["n_right".into(), "n_left".into()],
        _ => vec!["n".into(), "l".into(), "l_z".into()],
    };
    columns.extend(["path".into(), "g".into(), "omega_c_au".into(), "chirality".into()]);
    columns.extend([
        col("am_shift", unit),
        col("cl_shift", unit),
        col("total", unit),
        col("doublet_gap", unit),
    ]);
    if transverse {
        columns.push(col("cl_transverse", unit));
    }
    columns
}

fn shift_cells(
    label_cells: Vec<Cell>,
    result: &ShiftResult<f64>,
    unit: UnitArg,
    transverse: Option<f64>,
) -> Vec<Cell> {
    let mut row = label_cells;
    row.extend([
        Cell::Text(result.path.to_string()),
        Cell::Float(result.g),
        Cell::Float(result.omega_c),
        Cell::Text(chirality_text(result.chirality).into()),
        Cell::Float(to_unit(result.am_shift, unit)),
        Cell::Float(to_unit(result.cl_shift, unit)),
        Cell::Float(to_unit(result.total, unit)),
        Cell::Float(to_unit(2.0 * result.am_shift, unit)),
    ]);
    if let Some(value) = transverse {
        row.push(Cell::Float(to_unit(value, unit)));
    }
    row
}

/// Relative difference on the shift triple (am, cl, total), largest first.
fn pair_disagreement(a: &ShiftResult<f64>, b: &ShiftResult<f64>) -> f64 {
    [(a.am_shift, b.am_shift), (a.cl_shift, b.cl_shift), (a.total, b.total)]
        .iter()
        .map(|&(x, y)| {
            let scale = x.abs().max(y.abs());
            if scale < 1.0e-30 {
                0.0
            } else {
                (x - y).abs() / scale
            }
        })
        .fold(0.0, f64::max)
}

fn shift_rows_for_params(
    resolved: &Resolved,
    spec: &StateSpec,
    params: &CavityParams<f64>,
    path: PathArg,
    transverse: bool,
    unit: UnitArg,
) -> Result<RowsBundle, CliError> {
    let want_analytic = matches!(path, PathArg::Analytic | PathArg::Both);
    let want_numeric = matches!(path, PathArg::Numeric | PathArg::Both);
    let mut rows = Vec::new();
    let mut max_rel: Option<f64> = None;
    let mut radial: Option<RadialState<f64>> = None;
    let mut track = |analytic: &Option<ShiftResult<f64>>, numeric: &Option<ShiftResult<f64>>| {
        if let (Some(a), Some(n)) = (analytic, numeric) {
            let d = pair_disagreement(a, n);
            max_rel = Some(max_rel.map_or(d, |m: f64| m.max(d)));
        }
    };

    match (spec, &resolved.system) {
        (StateSpec::Radial3d { n, l, l_zs }, SystemKind::Hydrogen { k }) => {
            let potential = coulomb_potential(*k).map_err(|e| CliError::config(e.to_string()))?;
            let base = if want_numeric {
                let m_eff = params.effective_mass();
                let grid = coulomb_default_grid(m_eff, *k, *n).map_err(map_radial)?;
                let state =
                    solve_bound_state(&potential, m_eff, *n, *l, &grid).map_err(map_radial)?;
                Some(state)
            } else {
                None
            };
            radial = base.clone();
            for &l_z in l_zs {
                let analytic = if want_analytic {
                    Some(hydrogen_shift_closed_form(*n, *l, l_z, params, *k).map_err(map_shift)?)
                } else {
                    None
                };
                let numeric = match &base {
                    Some(state) if want_numeric => {
                        let sub = state.clone().with_l_z(l_z).map_err(map_radial)?;
                        let result = shift_generic(&sub, &potential, params).map_err(map_shift)?;
                        let extra = if transverse {
                            Some(cl_shift_transverse(&sub, &potential, params).map_err(map_shift)?)
                        } else {
                            None
                        };
                        Some((result, extra))
                    }
                    _ => None,
                };
                let label =
                    vec![Cell::Int(i64::from(*n)), Cell::Int(i64::from(*l)), Cell::Int(l_z)];
                if let Some(a) = &analytic {
                    rows.push(shift_cells(label.clone(), a, unit, None));
                }
                if let Some((r, extra)) = &numeric {
                    rows.push(shift_cells(label, r, unit, *extra));
                }
                track(&analytic, &numeric.as_ref().map(|(r, _)| r.clone()));
            }
        }
        (
            StateSpec::Radial2d { .. } | StateSpec::Radial3d { .. },
            SystemKind::Custom { potential, r_min, r_max, points },
        ) => {
            if want_analytic {
                return Err(CliError::config(
                    "system.custom-potential has no closed-form path; run with --path numeric",
                ));
            }
            let (n, l, l_zs) = match spec {
                StateSpec::Radial3d { n, l, l_zs } => (*n, *l, l_zs.clone()),
                StateSpec::Radial2d { n, l_zs } => {
                    (*n, l_zs[0].unsigned_abs() as u32, l_zs.clone())
                }
                StateSpec::Ho2d { .. } => unreachable!("matched above"),
            };
            let grid = RadialGrid::logarithmic(*r_min, *r_max, *points).map_err(map_radial)?;
            let m_eff = params.effective_mass();
            let state = solve_bound_state(potential, m_eff, n, l, &grid).map_err(map_radial)?;
            radial = Some(state.clone());
            for &l_z in &l_zs {
                let sub = state.clone().with_l_z(l_z).map_err(map_radial)?;
                let result = shift_generic(&sub, potential, params).map_err(map_shift)?;
                let extra = if transverse {
                    Some(cl_shift_transverse(&sub, potential, params).map_err(map_shift)?)
                } else {
                    None
                };
                let label = vec![Cell::Int(i64::from(n)), Cell::Int(i64::from(l)), Cell::Int(l_z)];
                rows.push(shift_cells(label, &result, unit, extra));
            }
        }
        (StateSpec::Ho2d { states }, SystemKind::Ho2d { omega }) => {
            let mass = resolved.mass;
            let potential =
                harmonic2d_potential(mass, *omega).map_err(|e| CliError::config(e.to_string()))?;
            for &(n_right, n_left) in states {
                let analytic = if want_analytic {
                    Some(ho2d_shift_closed_form(n_right, n_left, params, mass, *omega))
                } else {
                    None
                };
                let numeric = if want_numeric {
                    let l_z = i64::from(n_right) - i64::from(n_left);
                    let n_rad = n_right.min(n_left);
                    let m_eff = params.effective_mass();
                    let omega_s = (mass * omega * omega / m_eff).sqrt();
                    let grid =
                        harmonic2d_default_grid(m_eff, omega_s, n_rad, l_z).map_err(map_radial)?;
                    let state = solve_bound_state(
                        &potential,
                        m_eff,
                        n_rad,
                        l_z.unsigned_abs() as u32,
                        &grid,
                    )
                    .map_err(map_radial)?
                    .with_l_z(l_z)
                    .map_err(map_radial)?;
                    radial = Some(state.clone());
                    let result = shift_generic(&state, &potential, params).map_err(map_shift)?;
                    let extra = if transverse {
                        Some(cl_shift_transverse(&state, &potential, params).map_err(map_shift)?)
                    } else {
                        None
                    };
                    Some((result, extra))
                } else {
                    None
                };
                let label = vec![Cell::Int(i64::from(n_right)), Cell::Int(i64::from(n_left))];
                if let Some(a) = &analytic {
                    rows.push(shift_cells(label.clone(), a, unit, None));
                }
                if let Some((r, extra)) = &numeric {
                    rows.push(shift_cells(label, r, unit, *extra));
                }
                track(&analytic, &numeric.as_ref().map(|(r, _)| r.clone()));
            }
        }
        _ => unreachable!("state spec is derived from the system kind"),
    }
    Ok(RowsBundle { rows, max_rel, radial })
}

fn cmd_shift(args: &ShiftArgs, resolved: &Resolved, emitter: &Emitter) -> Result<i32, CliError> {
    if args.transverse && args.path != PathArg::Numeric {
        return Err(CliError::config(
            "--transverse: the in-plane diagnostic exists only on the numeric path; \
             run with --path numeric",
        ));
    }
    if args.dump_radial.is_some() && args.path == PathArg::Analytic {
        return Err(CliError::config(
            "--dump-radial: needs a numeric solve; run with --path numeric or --path both",
        ));
    }
    let state = resolved
        .config
        .state
        .as_ref()
        .ok_or_else(|| CliError::config("state: block required by the shift command"))?;
    let spec = state_spec(resolved, state)?;
    let bundle = shift_rows_for_params(
        resolved,
        &spec,
        &resolved.params,
        args.path,
        args.transverse,
        emitter.unit,
    )?;
    let mut table = Table::new(shift_columns(&resolved.system, emitter.unit, args.transverse));
    for row in bundle.rows {
        table.push(row);
    }
    if let Some(dump_path) = &args.dump_radial {
        let state = bundle.radial.as_ref().expect("numeric path solved a state");
        let mut dump = Table::new(vec!["r_au".into(), "u_au".into()]);
        for (r, u) in state.samples() {
            dump.push(vec![Cell::Float(r), Cell::Float(u)]);
        }
        write_file(dump_path, dump.render(crate::cli::FormatArg::Csv).as_bytes())?;
    }
    emitter.emit(&table, &resolved.config)?;
    emitter.summarize(&format!(
        "shift: {} row(s) for the {} system, energies in {}",
        table.len(),
        resolved.system.name(),
        emitter.unit.label()
    ));
    if let Some(max_rel) = bundle.max_rel {
        emitter.summarize(&format!(
            "shift: analytic vs numeric max relative difference {}",
            format_float(max_rel)
        ));
    }
    Ok(0)
}

fn cmd_sweep(
    cli: &Cli,
    args: &SweepArgs,
    resolved: &Resolved,
    emitter: &Emitter,
) -> Result<i32, CliError> {
    let state = resolved
        .config
        .state
        .as_ref()
        .ok_or_else(|| CliError::config("state: block required by the sweep command"))?;
    let sweep = resolved
        .config
        .sweep
        .as_ref()
        .ok_or_else(|| CliError::config("sweep: block required by the sweep command"))?;
    let spec = state_spec(resolved, state)?;
    let values = sweep_values(sweep)?;
    let param_sets: Vec<CavityParams<f64>> = values
        .iter()
        .map(|&v| match sweep.parameter {
            SweepParameter::G => resolved
                .params
                .with_g(v)
                .map_err(|e| CliError::config(format!("sweep value {v}: {e}"))),
            SweepParameter::OmegaC => CavityParams::new(
                resolved.params.g(),
                v,
                resolved.params.chirality(),
                resolved.params.mass(),
                resolved.params.charge(),
            )
            .map_err(|e| CliError::config(format!("sweep value {v}: {e}"))),
        })
        .collect::<Result<_, _>>()?;

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads.unwrap_or(0))
        .build()
        .map_err(|e| CliError::config(format!("--threads: {e}")))?;
    let unit = emitter.unit;
    let results: Vec<Result<RowsBundle, CliError>> = pool.install(|| {
        param_sets
            .par_iter()
            .map(|params| shift_rows_for_params(resolved, &spec, params, args.path, false, unit))
            .collect()
    });

    let mut table = Table::new(shift_columns(&resolved.system, unit, false));
    let mut max_rel: Option<f64> = None;
    for bundle in results {
        let bundle = bundle?;
        for row in bundle.rows {
            table.push(row);
        }
        if let Some(d) = bundle.max_rel {
            max_rel = Some(max_rel.map_or(d, |m| m.max(d)));
        }
    }
    emitter.emit(&table, &resolved.config)?;
    let parameter = match sweep.parameter {
        SweepParameter::G => "g",
        SweepParameter::OmegaC => "omega_c",
    };
    emitter.summarize(&format!(
        "sweep: {} over [{}, {}] in {} point(s), {} row(s), energies in {}",
        parameter,
        format_float(sweep.start),
        format_float(sweep.stop),
        values.len(),
        table.len(),
        emitter.unit.label()
    ));
    if let Some(max_rel) = max_rel {
        emitter.summarize(&format!(
            "sweep: analytic vs numeric max relative difference {}",
            format_float(max_rel)
        ));
    }
    Ok(0)
}

fn cmd_oracle(args: &OracleArgs, resolved: &Resolved, emitter: &Emitter) -> Result<i32, CliError> {
    let omega = match &resolved.system {
        SystemKind::Ho2d { omega } => *omega,
        other => {
            return Err(CliError::config(format!(
                "oracle: requires the ho2d system block, got system.{}",
                other.name()
            )))
        }
    };
    let oracle: OracleConfig = resolved.config.oracle.clone().unwrap_or_default();
    let gate = args.gate.unwrap_or(oracle.gate);
    if !(gate > 0.0 && gate.is_finite()) {
        return Err(CliError::config(format!(
            "oracle.gate (or --gate): must be finite and > 0, got {gate}"
        )));
    }
    if oracle.g_values.is_empty() {
        return Err(CliError::config("oracle.g_values: needs at least one coupling"));
    }
    for (i, &g) in oracle.g_values.iter().enumerate() {
        if !(g >= 0.0 && g.is_finite()) {
            return Err(CliError::config(format!(
                "oracle.g_values[{i}]: must be finite and >= 0, got {g}"
            )));
        }
    }

    let report = validate_against_perturbation(
        &resolved.params,
        omega,
        &oracle.g_values,
        oracle.n_mat,
        oracle.n_ph,
    )
    .map_err(map_fock)?;

    let unit = emitter.unit;
    let mut table = Table::new(vec![
        "g".into(),
        "n_mat".into(),
        "n_ph".into(),
        col("gap_exact", unit),
        col("gap_perturbative", unit),
        "relative_error".into(),
        "signs_agree".into(),
    ]);
    for row in &report.rows {
        table.push(vec![
            Cell::Float(row.g),
            Cell::Int(i64::from(row.n_mat)),
            Cell::Int(i64::from(row.n_ph)),
            Cell::Float(to_unit(row.gap_exact, unit)),
            Cell::Float(to_unit(row.gap_perturbative, unit)),
            Cell::Float(row.relative_error),
            Cell::Bool(row.signs_agree),
        ]);
    }
    emitter.emit(&table, &resolved.config)?;

    emitter.summarize(&format!(
        "oracle: exact doublet gap vs the displacement prediction, N_mat = {}, N_ph = {}",
        oracle.n_mat, oracle.n_ph
    ));
    for row in &report.rows {
        emitter.summarize(&format!(
            "oracle: g = {:.4e}: gap_exact = {:+.6e}, gap_perturbative = {:+.6e}, \
             rel_err = {:.4e}, signs_agree = {}",
            row.g, row.gap_exact, row.gap_perturbative, row.relative_error, row.signs_agree
        ));
    }
    if report.error_ratios.is_empty() {
        emitter.summarize("oracle: no consecutive coupling doublings; scaling not assessed");
    } else {
        let ratios: Vec<String> = report.error_ratios.iter().map(|r| format!("{r:.3e}")).collect();
        emitter.summarize(&format!("oracle: error ratios across doublings: {}", ratios.join(", ")));
    }
    emitter.summarize(&format!(
        "oracle: quartic error scaling observed: {}; relative error monotone in g: {}; \
         sign agreement: {}",
        yes_no(report.quartic_scaling_observed),
        yes_no(report.monotone_convergence),
        yes_no(report.sign_agreement)
    ));

    let worst = report.rows.iter().map(|r| r.relative_error).fold(0.0f64, f64::max);
    if report.rows.iter().any(|r| !(r.relative_error <= gate)) {
        emitter.summarize(&format!(
            "oracle: gate {:.4e} exceeded (worst relative error {:.4e}); exit status 3",
            gate, worst
        ));
        Ok(3)
    } else {
        emitter.summarize(&format!(
            "oracle: gate {:.4e} satisfied (worst relative error {:.4e})",
            gate, worst
        ));
        Ok(0)
    }
}

fn yes_no(v: bool) -> &'static str {
    if v {
        "yes"
    } else {
        "no"
    }
}

/// Planar angular momentum difference between the two configured states and
/// the prepared two-level problem.
fn build_two_level(resolved: &Resolved) -> Result<(TwoLevelConfig<f64>, i64), CliError> {
    let rabi = resolved
        .config
        .rabi
        .as_ref()
        .ok_or_else(|| CliError::config("rabi: block required by the rabi command"))?;
    match &resolved.system {
        SystemKind::Hydrogen { k } => {
            let (n_e, l_e, lz_e) = hydrogen_rabi_state("rabi.excited", &rabi.excited)?;
            let (n_g, l_g, lz_g) = hydrogen_rabi_state("rabi.ground", &rabi.ground)?;
            let potential = coulomb_potential(*k).map_err(|e| CliError::config(e.to_string()))?;
            let m_eff = resolved.params.effective_mass();
            let grid = coulomb_default_grid(m_eff, *k, n_e.max(n_g)).map_err(map_radial)?;
            let excited = solve_bound_state(&potential, m_eff, n_e, l_e, &grid)
                .map_err(map_radial)?
                .with_l_z(lz_e)
                .map_err(map_radial)?;
            let ground = solve_bound_state(&potential, m_eff, n_g, l_g, &grid)
                .map_err(map_radial)?
                .with_l_z(lz_g)
                .map_err(map_radial)?;
            let config = two_level_from_radial(&excited, &ground, &potential, &resolved.params)
                .map_err(map_rabi)?;
            Ok((config, lz_e - lz_g))
        }
        SystemKind::Ho2d { omega } => {
            let excited = ho2d_rabi_state("rabi.excited", &rabi.excited)?;
            let ground = ho2d_rabi_state("rabi.ground", &rabi.ground)?;
            let config =
                two_level_from_oscillator(excited, ground, &resolved.params, resolved.mass, *omega);
            let delta = (i64::from(excited.0) - i64::from(excited.1))
                - (i64::from(ground.0) - i64::from(ground.1));
            Ok((config, delta))
        }
        SystemKind::Custom { potential, r_min, r_max, points } => {
            let dim = potential.dimensionality();
            let (n_e, l_e, lz_e) = custom_rabi_state("rabi.excited", &rabi.excited, dim)?;
            let (n_g, l_g, lz_g) = custom_rabi_state("rabi.ground", &rabi.ground, dim)?;
            let grid = RadialGrid::logarithmic(*r_min, *r_max, *points).map_err(map_radial)?;
            let m_eff = resolved.params.effective_mass();
            let excited = solve_bound_state(potential, m_eff, n_e, l_e, &grid)
                .map_err(map_radial)?
                .with_l_z(lz_e)
                .map_err(map_radial)?;
            let ground = solve_bound_state(potential, m_eff, n_g, l_g, &grid)
                .map_err(map_radial)?
                .with_l_z(lz_g)
                .map_err(map_radial)?;
            let config = two_level_from_radial(&excited, &ground, potential, &resolved.params)
                .map_err(map_rabi)?;
            Ok((config, lz_e - lz_g))
        }
    }
}

fn hydrogen_rabi_state(prefix: &str, state: &StateConfig) -> Result<(u32, u32, i64), CliError> {
    let (n, l, l_z) = hydrogen_state(prefix, state)?;
    let l_z = l_z.ok_or_else(|| {
        CliError::config(format!("{prefix}.l_z: required, the coupling is between substates"))
    })?;
    Ok((n, l, l_z))
}

fn ho2d_rabi_state(prefix: &str, state: &StateConfig) -> Result<(u32, u32), CliError> {
    let (n_right, n_left, mirror) = ho2d_state(prefix, state)?;
    if mirror {
        return Err(CliError::config(format!(
            "{prefix}.mirror: not meaningful for the rabi command"
        )));
    }
    Ok((n_right, n_left))
}

fn custom_rabi_state(
    prefix: &str,
    state: &StateConfig,
    dim: Dimensionality,
) -> Result<(u32, u32, i64), CliError> {
    match dim {
        Dimensionality::Three => hydrogen_rabi_state(prefix, state),
        Dimensionality::Two => {
            let n = state.n.ok_or_else(|| {
                CliError::config(format!("{prefix}.n: required (radial node count in 2D)"))
            })?;
            let l_z = state.l_z.ok_or_else(|| {
                CliError::config(format!("{prefix}.l_z: required for a 2D custom potential"))
            })?;
            if let Some(l) = state.l {
                if u64::from(l) != l_z.unsigned_abs() {
                    return Err(CliError::config(format!(
                        "{prefix}.l/{prefix}.l_z: in 2D l must equal |l_z|, got l = {l}, l_z = {l_z}"
                    )));
                }
            }
            Ok((n, l_z.unsigned_abs() as u32, l_z))
        }
    }
}

fn cmd_rabi(args: &RabiArgs, resolved: &Resolved, emitter: &Emitter) -> Result<i32, CliError> {
    let rabi = resolved
        .config
        .rabi
        .as_ref()
        .ok_or_else(|| CliError::config("rabi: block required by the rabi command"))?;
    if !(rabi.t_max_au > 0.0 && rabi.t_max_au.is_finite()) {
        return Err(CliError::config(format!(
            "rabi.t_max_au: must be finite and > 0, got {}",
            rabi.t_max_au
        )));
    }
    if rabi.points < 2 {
        return Err(CliError::config(format!(
            "rabi.points: need at least 2 time samples, got {}",
            rabi.points
        )));
    }

    let (config, delta_l_z) = build_two_level(resolved)?;
    let sign = resolved.params.chirality().sign_i64();
    if delta_l_z != sign {
        if !args.allow_forbidden {
            return Err(CliError::config(format!(
                "rabi: selection rule violated: l_z(excited) - l_z(ground) = {delta_l_z}, but \
                 the {} mode only couples Delta l_z = {sign:+}; pass --allow-forbidden to emit \
                 the flat curves anyway",
                chirality_text(resolved.params.chirality())
            )));
        }
        emitter.summarize(&format!(
            "rabi: selection-rule-forbidden pair (Delta l_z = {delta_l_z}, allowed {sign:+}); \
             gamma12 = 0 and the curves are flat"
        ));
    }

    let steps = (rabi.points - 1) as f64;
    let times: Vec<f64> = (0..rabi.points).map(|i| rabi.t_max_au * i as f64 / steps).collect();
    let comparison = compare_formulas(&config, &times).map_err(map_rabi)?;

    let mut table = Table::new(vec![
        "t_au".into(),
        "p_direct".into(),
        "p_first_order".into(),
        "p_full_angle".into(),
    ]);
    for row in &comparison.rows {
        table.push(vec![
            Cell::Float(row.t),
            Cell::Float(row.p_direct),
            Cell::Float(row.p_first_order),
            Cell::Float(row.p_full_angle),
        ]);
    }
    emitter.emit(&table, &resolved.config)?;

    let ratio = config.coupling_ratio();
    if !(ratio <= 0.1) {
        eprintln!(
            "warning: |gamma12| / |omega_tilde| = {ratio:.3e} exceeds 0.1; the perturbative \
             kernels are outside their regime"
        );
    }
    emitter.summarize(&format!(
        "rabi: {} <- {}, omega_tilde = {:+.6e} hartree, |gamma12| = {:.6e} hartree, \
         coupling ratio = {:.3e}",
        config.state_e(),
        config.state_g(),
        config.omega_tilde(),
        config.gamma12().norm(),
        ratio
    ));
    emitter.summarize(&format!(
        "rabi: max |direct - first-order| = {:.6e}, max |direct - full-angle| = {:.6e}",
        comparison.max_dev_first_order, comparison.max_dev_full_angle
    ));
    emitter.summarize(&format!(
        "rabi: kernel supported by the integration: {}",
        match comparison.supported_form {
            SupportedForm::FirstOrderKernel => "first-order",
            SupportedForm::FullAngleKernel => "full-angle",
            SupportedForm::Inconclusive => "inconclusive",
        }
    ));
    Ok(0)
}

fn cmd_lamb(resolved: &Resolved, emitter: &Emitter) -> Result<i32, CliError> {
    let k = match &resolved.system {
        SystemKind::Hydrogen { k } => *k,
        other => {
            return Err(CliError::config(format!(
                "lamb: the continuum cutoffs are hydrogenic; requires the hydrogen system \
                 block, got system.{}",
                other.name()
            )))
        }
    };
    let state = resolved
        .config
        .state
        .as_ref()
        .ok_or_else(|| CliError::config("state: block required by the lamb command"))?;
    let (n, l, _) = hydrogen_state("state", state)?;
    let mass = resolved.mass;
    let charge = resolved.charge;

    let analytic = lamb_shift_hydrogen_closed_form(n, l, mass, charge, k).map_err(map_shift)?;
    let potential = coulomb_potential(k).map_err(|e| CliError::config(e.to_string()))?;
    let grid = coulomb_default_grid(mass, k, n).map_err(map_radial)?;
    let solved = solve_bound_state(&potential, mass, n, l, &grid).map_err(map_radial)?;
    let numeric = lamb_shift_continuum(&solved, &potential, mass, charge).map_err(map_shift)?;

    let unit = emitter.unit;
    let mut table = Table::new(vec![
        "n".into(),
        "l".into(),
        "path".into(),
        col("shift", unit),
        col("shift_literal", unit),
        "log_factor".into(),
        "omega_min_au".into(),
        "omega_max_au".into(),
        "laplacian_au".into(),
    ]);
    let mut push = |path: &str, r: &LambResult<f64>| {
        table.push(vec![
            Cell::Int(i64::from(n)),
            Cell::Int(i64::from(l)),
            Cell::Text(path.into()),
            Cell::Float(to_unit(r.shift, unit)),
            Cell::Float(to_unit(r.shift_literal, unit)),
            Cell::Float(r.log_factor),
            Cell::Float(r.omega_min),
            Cell::Float(r.omega_max),
            Cell::Float(r.laplacian_expectation),
        ]);
    };
    push("analytic", &analytic);
    push("numeric", &numeric);
    emitter.emit(&table, &resolved.config)?;

    let scale = analytic.shift.abs().max(numeric.shift.abs());
    let agreement = if scale < 1.0e-30 {
        (analytic.shift - numeric.shift).abs()
    } else {
        (analytic.shift - numeric.shift).abs() / scale
    };
    emitter.summarize(&format!(
        "lamb: n = {n}, l = {l}: shift = {:.6e} {}, literal form = {:.6e} {}, \
         log factor = {:.12}",
        to_unit(analytic.shift, unit),
        unit.label(),
        to_unit(analytic.shift_literal, unit),
        unit.label(),
        analytic.log_factor
    ));
    emitter.summarize(&format!(
        "lamb: analytic vs numeric difference {} ({})",
        format_float(agreement),
        if scale < 1.0e-30 { "absolute, both vanish" } else { "relative" }
    ));
    Ok(0)
}
