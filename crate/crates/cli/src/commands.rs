use crate::args::{
    parse_form, parse_list, BoundsArgs, DiagnosticsArgs, FileConfig, Format, IncidenceArgs, SimulateArgs, StateArgs,
    TransferArgs,
};
use crate::error::{CliError, CliResult};
use crate::output::{atomic_write, csv_bytes, emit, json_bytes, table_bytes};
use orbit_transfer::dynamics::{default_dt, simulate, IDENTITY_TOL};
use orbit_transfer::incidence::{growth_exponent, incidence_matrix, incidence_row_at, max_incidence_scan};
use orbit_transfer::lattice::{max_triad_count, shell_radii, total_triads};
use orbit_transfer::spectral::{
    decompose, h_s_norm, random_state, read_state_json, row_sum_report, state_to_json, transfer_matrix, write_matrix_csv,
    ConvolutionKernel,
};
use orbit_transfer::{Lattice, NonlinearForm, OrbitCatalog, OrbitLabel, SimulationConfig, State};
use rayon::prelude::*;
use serde::Serialize;
use std::path::PathBuf;

pub const DIAGNOSTICS_MAX_N: u32 = 16;
const DEFAULT_S_LIST: [f64; 4] = [1.6, 2.0, 2.5, 2.9];

/// Settings shared by every command after merging flags over the config file.
pub struct Context {
    pub out: Option<PathBuf>,
    pub format: Format,
    pub seed: u64,
    pub file: FileConfig,
}

#[derive(Serialize)]
#[allow(non_snake_case)]
struct DiagnosticsRow {
    N: u32,
    modes: usize,
    orbits: usize,
    shells: usize,
    max_triads: u64,
    total_triads: u64,
}

pub fn diagnostics(ctx: &Context, args: &DiagnosticsArgs) -> CliResult<()> {
    let n_max = args.n_max.or(ctx.file.n_max).unwrap_or(8);
    if !(1..=DIAGNOSTICS_MAX_N).contains(&n_max) {
        return Err(CliError::usage(format!(
            "--n-max must lie in 1..={DIAGNOSTICS_MAX_N}, got {n_max}"
        )));
    }
    let rows = (1..=n_max)
        .map(|n| {
            Ok(DiagnosticsRow {
                N: n,
                modes: Lattice::new(n)?.len(),
                orbits: OrbitCatalog::new(n)?.len(),
                shells: shell_radii(n)?.len(),
                max_triads: max_triad_count(n)?,
                total_triads: total_triads(n)?,
            })
        })
        .collect::<orbit_transfer::Result<Vec<_>>>()?;
    emit(ctx.out.as_deref(), &table_bytes(ctx.format, &rows)?)
}

#[derive(Serialize)]
#[allow(non_snake_case)]
struct IncidenceRow {
    N: u32,
    alpha: String,
    beta: String,
    gamma: u64,
}

#[derive(Serialize)]
#[allow(non_snake_case)]
struct IncidenceDoc<'a> {
    N: u32,
    rows: &'a [IncidenceRow],
    max_row_sqrt_sum: f64,
}

pub fn incidence(ctx: &Context, args: &IncidenceArgs) -> CliResult<()> {
    let n = args
        .n
        .or(ctx.file.n)
        .ok_or_else(|| CliError::usage("incidence needs --n"))?;
    if n == 0 {
        return Err(CliError::usage("--n must be at least 1"));
    }
    let catalog = OrbitCatalog::new(n)?;
    let records = match args.alpha.as_deref().or(ctx.file.alpha.as_deref()) {
        Some(text) => {
            let index = text
                .parse::<OrbitLabel>()
                .ok()
                .and_then(|label| catalog.index_of_label(label))
                .ok_or_else(|| {
                    let valid: Vec<String> = catalog.orbits().iter().map(|o| o.label().to_string()).collect();
                    CliError::usage(format!(
                        "unknown orbit `{text}` for N={n}; valid canonical labels: {}",
                        valid.join(" ")
                    ))
                })?;
            vec![incidence_row_at(&catalog, index)]
        }
        None => incidence_matrix(&catalog),
    };
    let rows: Vec<IncidenceRow> = records
        .iter()
        .flat_map(|r| {
            r.per_source.iter().map(move |(beta, gamma)| IncidenceRow {
                N: n,
                alpha: r.target.to_string(),
                beta: beta.to_string(),
                gamma: *gamma,
            })
        })
        .collect();
    let max = records.iter().map(|r| r.row_sqrt_sum).fold(0.0, f64::max);
    let bytes = match ctx.format {
        Format::Csv => csv_bytes(&rows)?,
        Format::Json => json_bytes(&IncidenceDoc {
            N: n,
            rows: &rows,
            max_row_sqrt_sum: max,
        })?,
    };
    emit(ctx.out.as_deref(), &bytes)?;
    eprintln!("N={n} max_row_sqrt_sum={max:e}");
    Ok(())
}

struct LoadedState {
    state: State,
    s: f64,
    form: NonlinearForm,
}

fn load_state(ctx: &Context, args: &StateArgs) -> CliResult<LoadedState> {
    let file = &ctx.file;
    let s = args.s.or(file.s).unwrap_or(2.0);
    if !s.is_finite() {
        return Err(CliError::usage("--s must be finite"));
    }
    let form = parse_form(args.form.as_deref(), file.form.as_deref())?;
    let n = args.n.or(file.n);
    let state = match args.state.as_ref().or(file.state.as_ref()) {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::usage(format!("cannot read state {}: {e}", path.display())))?;
            let state: State = read_state_json(&text)?;
            if let Some(n) = n {
                if n != state.n() {
                    return Err(CliError::usage(format!(
                        "--n {n} conflicts with the state file's N={}",
                        state.n()
                    )));
                }
            }
            state
        }
        None => {
            let n = n.unwrap_or(2);
            let m = args.m.or(file.m).unwrap_or(1.0);
            let state = random_state(n, s, m, ctx.seed)?;
            if let Some(path) = args.save_state.as_ref().or(file.save_state.as_ref()) {
                atomic_write(path, format!("{}\n", state_to_json(&state)).as_bytes())?;
            }
            state
        }
    };
    Ok(LoadedState { state, s, form })
}

#[derive(Serialize)]
struct RowSumRow {
    orbit: String,
    rowsum: f64,
    bound_shape: f64,
    ratio: f64,
    convolution_bound: f64,
}

#[derive(Serialize)]
struct TransferDoc<'a> {
    labels: Vec<String>,
    form: NonlinearForm,
    m: Vec<Vec<f64>>,
    a: Vec<Vec<f64>>,
    v: Vec<Vec<f64>>,
    rowsums: Option<&'a [RowSumRow]>,
}

fn matrix_rows(m: &ndarray::Array2<f64>) -> Vec<Vec<f64>> {
    m.rows().into_iter().map(|r| r.to_vec()).collect()
}

pub fn transfer(ctx: &Context, args: &TransferArgs) -> CliResult<()> {
    let dir = ctx
        .out
        .as_deref()
        .ok_or_else(|| CliError::usage("transfer writes several files and needs --out DIR"))?;
    let report = !args.no_rowsums;
    let s = args.state.s.or(ctx.file.s).unwrap_or(2.0);
    if report && !(s > 1.5 && s < 3.0) {
        return Err(CliError::usage(format!(
            "row-sum bounds need 3/2 < s < 3, got s={s}; pass --no-rowsums to skip them"
        )));
    }
    let loaded = load_state(ctx, &args.state)?;
    let u = &loaded.state;
    let catalog = OrbitCatalog::new(u.n())?;
    let matrix = transfer_matrix(u, &catalog, loaded.form)?;
    let (a, v) = decompose(&matrix.entries)?;
    let rowsums: Option<Vec<RowSumRow>> = if report {
        let norm = h_s_norm(u, loaded.s);
        Some(
            row_sum_report(&matrix, norm, loaded.s, &catalog)?
                .into_iter()
                .map(|r| RowSumRow {
                    orbit: r.label.to_string(),
                    rowsum: r.rowsum,
                    bound_shape: r.bound_shape,
                    ratio: r.ratio,
                    convolution_bound: r.convolution_bound,
                })
                .collect(),
        )
    } else {
        None
    };

    std::fs::create_dir_all(dir)?;
    match ctx.format {
        Format::Csv => {
            for (name, m) in [("M.csv", &matrix.entries), ("A.csv", &a), ("V.csv", &v)] {
                let mut buf = Vec::new();
                write_matrix_csv(&mut buf, &matrix.labels, m)?;
                atomic_write(&dir.join(name), &buf)?;
            }
            if let Some(rows) = &rowsums {
                let bytes = csv_bytes(rows)?;
                atomic_write(&dir.join("rowsums.csv"), &bytes)?;
                emit(None, &bytes)?;
            }
        }
        Format::Json => {
            let doc = TransferDoc {
                labels: matrix.labels.iter().map(ToString::to_string).collect(),
                form: loaded.form,
                m: matrix_rows(&matrix.entries),
                a: matrix_rows(&a),
                v: matrix_rows(&v),
                rowsums: rowsums.as_deref(),
            };
            atomic_write(&dir.join("transfer.json"), &json_bytes(&doc)?)?;
        }
    }
    Ok(())
}

#[derive(Serialize)]
#[allow(non_snake_case)]
struct SimulationRow {
    step: usize,
    time: f64,
    orbit_canonical: String,
    Z_alpha: f64,
    D_alpha: f64,
    dZdt_direct: f64,
    dZdt_matrix: f64,
    residual: f64,
}

pub fn simulate_cmd(ctx: &Context, args: &SimulateArgs) -> CliResult<()> {
    let file = &ctx.file;
    let nu = args.nu.or(file.nu).unwrap_or(0.1);
    let steps = args.steps.or(file.steps).unwrap_or(100);
    let every = args.every.or(file.every).unwrap_or(10);
    if !(nu >= 0.0 && nu.is_finite()) {
        return Err(CliError::usage(format!("--nu must be finite and nonnegative, got {nu}")));
    }
    if steps == 0 || every == 0 {
        return Err(CliError::usage("--steps and --every must be at least 1"));
    }
    if let Some(dt) = args.dt.or(file.dt) {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(CliError::usage(format!("--dt must be positive, got {dt}")));
        }
    }
    let loaded = load_state(ctx, &args.state)?;
    let u0 = &loaded.state;
    let dt = args.dt.or(file.dt).unwrap_or_else(|| default_dt(u0, nu));
    let catalog = OrbitCatalog::new(u0.n())?;
    let config = SimulationConfig {
        nu,
        dt,
        steps,
        diagnostics_every: every,
        form: loaded.form,
    };
    let (_, records) = simulate(u0, &config, &catalog)?;

    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for rec in &records {
        for o in &rec.balance.orbits {
            rows.push(SimulationRow {
                step: rec.step,
                time: rec.time,
                orbit_canonical: o.label.to_string(),
                Z_alpha: o.z,
                D_alpha: o.d,
                dZdt_direct: o.dzdt_direct,
                dZdt_matrix: o.dzdt_matrix,
                residual: o.residual,
            });
            if !(o.relative_residual() <= IDENTITY_TOL) {
                failures.push(format!("step {} orbit {}: {:e}", rec.step, o.label, o.relative_residual()));
            }
        }
        let agg = rec.balance.aggregate_relative_residual();
        if !(agg <= IDENTITY_TOL) {
            failures.push(format!("step {} aggregate: {agg:e}", rec.step));
        }
    }
    emit(ctx.out.as_deref(), &table_bytes(ctx.format, &rows)?)?;
    if failures.is_empty() {
        Ok(())
    } else {
        Err(CliError::Residual(format!(
            "{} residual(s) above {IDENTITY_TOL:e}: {}",
            failures.len(),
            failures.join("; ")
        )))
    }
}

#[derive(Serialize)]
#[allow(non_snake_case)]
struct BoundsRow {
    kind: &'static str,
    s: Option<f64>,
    N: Option<u32>,
    seed: Option<u64>,
    metric: &'static str,
    value: f64,
}

/// `(min, max)` of `Σ_N(k)/(1+|k|^{4−2s})` over orbit representatives.
fn sigma_extremes(n: u32, s: f64) -> CliResult<(f64, f64)> {
    let catalog = OrbitCatalog::new(n)?;
    let kernel = ConvolutionKernel::new(n, s)?;
    let ratios = catalog
        .orbits()
        .par_iter()
        .map(|alpha| {
            let k = alpha.canonical_mode();
            let kn = (alpha.norm_sq() as f64).sqrt();
            Ok(kernel.sigma(k)? / (1.0 + kn.powf(4.0 - 2.0 * s)))
        })
        .collect::<orbit_transfer::Result<Vec<f64>>>()?;
    let min = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    let max = ratios.iter().copied().fold(0.0, f64::max);
    Ok((min, max))
}

pub fn bounds(ctx: &Context, args: &BoundsArgs) -> CliResult<()> {
    let file = &ctx.file;
    let n_max = args.n_max.or(file.n_max).unwrap_or(8);
    let rowsum_n_max = args.rowsum_n_max.or(file.rowsum_n_max).unwrap_or(n_max.min(4));
    let incidence_n_max = args.incidence_n_max.or(file.incidence_n_max).unwrap_or(12);
    let m = args.m.or(file.m).unwrap_or(1.0);
    let form = parse_form(args.form.as_deref(), file.form.as_deref())?;
    let s_list: Vec<f64> = match (&args.s_list, &file.s_list) {
        (Some(text), _) => parse_list("s-list", text)?,
        (None, Some(list)) => list.clone(),
        (None, None) => DEFAULT_S_LIST.to_vec(),
    };
    let seeds: Vec<u64> = match (&args.seeds, &file.seeds) {
        (Some(text), _) => parse_list("seeds", text)?,
        (None, Some(list)) => list.clone(),
        (None, None) => vec![ctx.seed],
    };
    if seeds.is_empty() || s_list.is_empty() {
        return Err(CliError::usage("seed and s lists must be nonempty"));
    }
    if let Some(bad) = s_list.iter().find(|s| !(**s > 1.5 && **s < 3.0)) {
        return Err(CliError::usage(format!("every s must satisfy 3/2 < s < 3, got {bad}")));
    }
    if !(1..=DIAGNOSTICS_MAX_N).contains(&n_max) || !(1..=8).contains(&rowsum_n_max) {
        return Err(CliError::usage(format!(
            "--n-max must lie in 1..={DIAGNOSTICS_MAX_N} and --rowsum-n-max in 1..=8"
        )));
    }
    if !(1..=32).contains(&incidence_n_max) {
        return Err(CliError::usage("--incidence-n-max must lie in 1..=32"));
    }
    if !(m > 0.0 && m.is_finite()) {
        return Err(CliError::usage(format!("--m must be positive, got {m}")));
    }

    let mut rows = Vec::new();
    for &s in &s_list {
        for n in 1..=n_max {
            let (min, max) = sigma_extremes(n, s)?;
            for (metric, value) in [("sigma_ratio_min", min), ("sigma_ratio_max", max)] {
                rows.push(BoundsRow {
                    kind: "sigma",
                    s: Some(s),
                    N: Some(n),
                    seed: None,
                    metric,
                    value,
                });
            }
        }
    }
    for &s in &s_list {
        for &seed in &seeds {
            for n in 1..=rowsum_n_max {
                let catalog = OrbitCatalog::new(n)?;
                let u = random_state(n, s, m, seed)?;
                let matrix = transfer_matrix(&u, &catalog, form)?;
                let report = row_sum_report(&matrix, h_s_norm(&u, s), s, &catalog)?;
                let ratio = report.iter().map(|r| r.ratio).fold(0.0, f64::max);
                let slack = report
                    .iter()
                    .map(|r| r.rowsum / r.convolution_bound)
                    .fold(0.0, f64::max);
                for (metric, value) in [("rowsum_ratio_max", ratio), ("rowsum_over_convolution_max", slack)] {
                    rows.push(BoundsRow {
                        kind: "rowsum",
                        s: Some(s),
                        N: Some(n),
                        seed: Some(seed),
                        metric,
                        value,
                    });
                }
            }
        }
    }
    let scan = max_incidence_scan(incidence_n_max)?;
    for &(n, value) in &scan {
        rows.push(BoundsRow {
            kind: "incidence",
            s: None,
            N: Some(n),
            seed: None,
            metric: "max_row_sqrt_sum",
            value,
        });
    }
    if let Some(slope) = growth_exponent(&scan, 4) {
        rows.push(BoundsRow {
            kind: "incidence",
            s: None,
            N: Some(incidence_n_max),
            seed: None,
            metric: "loglog_slope",
            value: slope,
        });
    }
    emit(ctx.out.as_deref(), &table_bytes(ctx.format, &rows)?)
}
