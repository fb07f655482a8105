//! Time integration of the truncated system and the orbit-level enstrophy
//! balance `dZ_α/dt = −ν D_α + Σ_β M_αβ(u)`.

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::spectral::{
    dot_conj, galerkin_rhs, nonlinear_term, norm_sqr3, transfer_matrix, NonlinearForm, TruncatedState,
};
use crate::symmetry::{Orbit, OrbitCatalog, OrbitLabel};

/// Residual tolerance for the enstrophy identity, relative to
/// `max(1, Σ_β |M_αβ|, ν D_α)`.
pub const IDENTITY_TOL: f64 = 1e-10;

fn weighted_sum<T: Real>(u: &TruncatedState<T>, alpha: &Orbit, power: i32) -> Result<T> {
    alpha.check_truncation(u.n())?;
    let k2 = T::int(alpha.norm_sq() as i64);
    let sum: T = alpha.members().iter().map(|&k| norm_sqr3(u.at(k))).sum();
    Ok(k2.powi(power) * sum)
}

/// `Z_α = (1/(2|α|)) Σ_{k∈α} |k|² |û_k|²`.
pub fn orbit_enstrophy<T: Real>(u: &TruncatedState<T>, alpha: &Orbit) -> Result<T> {
    let size = T::int(alpha.size() as i64);
    Ok(weighted_sum(u, alpha, 1)? / (T::lit(2.0) * size))
}

/// `D_α = (1/|α|) Σ_{k∈α} |k|⁴ |û_k|²`.
pub fn orbit_dissipation<T: Real>(u: &TruncatedState<T>, alpha: &Orbit) -> Result<T> {
    let size = T::int(alpha.size() as i64);
    Ok(weighted_sum(u, alpha, 2)? / size)
}

#[derive(Clone, Debug, PartialEq)]
pub struct OrbitDiagnostics<T> {
    pub label: OrbitLabel,
    pub size: usize,
    pub z: T,
    pub d: T,
    /// `(1/|α|) Σ_{k∈α} |k|² Re(conj(û_k)·rhs_k)` from the Galerkin right side.
    pub dzdt_direct: T,
    /// `−ν D_α + Σ_β M_αβ(u)`.
    pub dzdt_matrix: T,
    pub residual: T,
    /// `max(1, Σ_β |M_αβ|, ν D_α)`.
    pub scale: T,
}

impl<T: Real> OrbitDiagnostics<T> {
    pub fn relative_residual(&self) -> T {
        self.residual / self.scale
    }
}

/// Per-orbit and aggregate enstrophy balance at one instant.
#[derive(Clone, Debug, PartialEq)]
pub struct EnstrophyBalance<T> {
    pub orbits: Vec<OrbitDiagnostics<T>>,
    /// `Σ_α |α| (−ν D_α + Σ_β M_αβ)`.
    pub aggregate_matrix: T,
    /// `−ν Σ_k |k|⁴|û_k|² + Σ_k |k|² Re(conj(û_k)·nonlinear_term(u,k))`.
    pub aggregate_direct: T,
    /// `max(1, Σ_α |α| (Σ_β |M_αβ| + ν D_α))`.
    pub aggregate_scale: T,
}

impl<T: Real> EnstrophyBalance<T> {
    pub fn max_relative_residual(&self) -> T {
        self.orbits
            .iter()
            .map(OrbitDiagnostics::relative_residual)
            .fold(T::zero(), |a, b| a.max(b))
    }

    pub fn aggregate_relative_residual(&self) -> T {
        (self.aggregate_matrix - self.aggregate_direct).abs() / self.aggregate_scale
    }

    pub fn holds(&self, tol: T) -> bool {
        self.max_relative_residual() <= tol && self.aggregate_relative_residual() <= tol
    }

    /// `Z_N = Σ_α |α| Z_α`.
    pub fn total_enstrophy(&self) -> T {
        self.orbits
            .iter()
            .map(|o| T::int(o.size as i64) * o.z)
            .sum()
    }
}

/// Evaluates both sides of the orbit-level enstrophy identity for every
/// orbit, plus the aggregate balance.
pub fn verify_enstrophy_identity<T: Real>(
    u: &TruncatedState<T>,
    nu: T,
    catalog: &OrbitCatalog,
    form: NonlinearForm,
) -> Result<EnstrophyBalance<T>> {
    let rhs = galerkin_rhs(u, nu, form)?;
    let m = transfer_matrix(u, catalog, form)?;
    let one = T::one();
    let mut orbits = Vec::with_capacity(catalog.len());
    let (mut agg_matrix, mut agg_scale) = (T::zero(), T::zero());
    for (i, alpha) in catalog.orbits().iter().enumerate() {
        let size = T::int(alpha.size() as i64);
        let k2 = T::int(alpha.norm_sq() as i64);
        let z = orbit_enstrophy(u, alpha)?;
        let d = orbit_dissipation(u, alpha)?;
        let direct: T = alpha
            .members()
            .iter()
            .map(|&k| dot_conj(u.at(k), rhs.at(k)).re)
            .sum::<T>()
            * k2
            / size;
        let flux = m.row_sum(i);
        let from_matrix = flux - nu * d;
        let abs_flux = m.abs_row_sum(i);
        let scale = one.max(abs_flux).max(nu * d);
        agg_matrix = agg_matrix + size * from_matrix;
        agg_scale = agg_scale + size * (abs_flux + nu * d);
        orbits.push(OrbitDiagnostics {
            label: alpha.label(),
            size: alpha.size(),
            z,
            d,
            dzdt_direct: direct,
            dzdt_matrix: from_matrix,
            residual: (direct - from_matrix).abs(),
            scale,
        });
    }
    let mut aggregate_direct = T::zero();
    for (k, uk) in u.iter() {
        let k2 = T::int(k.norm_sq() as i64);
        let nl = nonlinear_term(u, k, form)?;
        aggregate_direct =
            aggregate_direct - nu * k2 * k2 * norm_sqr3(uk) + k2 * dot_conj(uk, &nl).re;
    }
    Ok(EnstrophyBalance {
        orbits,
        aggregate_matrix: agg_matrix,
        aggregate_direct,
        aggregate_scale: one.max(agg_scale),
    })
}

/// One classical fourth-order Runge–Kutta step. The result is projected
/// onto the divergence-free, conjugate-symmetric subspace.
pub fn step_rk4<T: Real>(u: &TruncatedState<T>, dt: T, nu: T, form: NonlinearForm) -> Result<TruncatedState<T>> {
    if !(dt > T::zero()) || !dt.is_finite() {
        return Err(Error::param("dt", format!("time step must be positive, got {dt}")));
    }
    let half = dt * T::lit(0.5);
    let k1 = galerkin_rhs(u, nu, form)?;
    let k2 = galerkin_rhs(&u.axpy(half, &k1), nu, form)?;
    let k3 = galerkin_rhs(&u.axpy(half, &k2), nu, form)?;
    let k4 = galerkin_rhs(&u.axpy(dt, &k3), nu, form)?;
    let sixth = dt / T::lit(6.0);
    let third = dt / T::lit(3.0);
    let mut next = u
        .axpy(sixth, &k1)
        .axpy(third, &k2)
        .axpy(third, &k3)
        .axpy(sixth, &k4);
    next.enforce_constraints();
    Ok(next)
}

/// Conservative default step: `10⁻³ / (3νN² + N·max|û_k|)`, or `10⁻³` when
/// that denominator vanishes.
pub fn default_dt<T: Real>(u: &TruncatedState<T>, nu: T) -> T {
    let n = T::int(u.n() as i64);
    let denom = nu * T::lit(3.0) * n * n + n * u.max_amplitude();
    if denom > T::zero() {
        T::lit(1e-3) / denom
    } else {
        T::lit(1e-3)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SimulationConfig<T> {
    pub nu: T,
    pub dt: T,
    pub steps: usize,
    /// Record diagnostics every this many steps (and at the first and last).
    pub diagnostics_every: usize,
    pub form: NonlinearForm,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DiagnosticsRecord<T> {
    pub step: usize,
    pub time: T,
    pub balance: EnstrophyBalance<T>,
}

/// Runs `steps` RK4 steps from `u0`, recording the enstrophy balance at the
/// requested cadence.
pub fn simulate<T: Real>(
    u0: &TruncatedState<T>,
    config: &SimulationConfig<T>,
    catalog: &OrbitCatalog,
) -> Result<(TruncatedState<T>, Vec<DiagnosticsRecord<T>>)> {
    if config.steps == 0 {
        return Err(Error::param("steps", "at least one step is required"));
    }
    if config.diagnostics_every == 0 {
        return Err(Error::param("diagnostics_every", "cadence must be at least 1"));
    }
    if !(config.nu >= T::zero()) {
        return Err(Error::param("nu", "viscosity must be nonnegative"));
    }
    if !(config.dt > T::zero()) {
        return Err(Error::param("dt", "time step must be positive"));
    }
    u0.validate()?;
    let record = |step: usize, u: &TruncatedState<T>| -> Result<DiagnosticsRecord<T>> {
        Ok(DiagnosticsRecord {
            step,
            time: config.dt * T::int(step as i64),
            balance: verify_enstrophy_identity(u, config.nu, catalog, config.form)?,
        })
    };
    let mut records = vec![record(0, u0)?];
    let mut u = u0.clone();
    for step in 1..=config.steps {
        u = step_rk4(&u, config.dt, config.nu, config.form)?;
        if !u.is_finite() {
            return Err(Error::Diverged { step });
        }
        if step % config.diagnostics_every == 0 || step == config.steps {
            records.push(record(step, &u)?);
        }
    }
    Ok((u, records))
}
