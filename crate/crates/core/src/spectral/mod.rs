//! Truncated divergence-free Fourier states and the Galerkin nonlinearity.
//!
//! The right-hand side for mode `k` is
//!
//! ```text
//! ∂ₜ û_k = −ν|k|² û_k − i P(k) Σ_{p+q=k; p,q∈Λ_N} B(p, q)
//! ```
//!
//! where `P(k)` is the Leray projector and `B` is the triad coupling chosen
//! by [`NonlinearForm`].

mod io;
mod sobolev;
mod state;
mod transfer;

pub use io::{read_state_json, state_to_json, write_matrix_csv, StateDocument, StateEntry};
pub use sobolev::{
    h_s_norm, random_state, row_sum_check, row_sum_report, sigma_n, weighted_pair_bound, weighted_pair_bounds,
    ConvolutionKernel, RowSumReport,
};
pub use state::{conj3, dot, dot_conj, k_dot, norm3, norm_sqr3, zero3, TruncatedState, Vec3};
pub use transfer::{decompose, transfer_entry, transfer_matrix, TransferMatrix};

use crate::error::{Error, Result};
use crate::lattice::Mode;
use crate::scalar::Real;
use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use state::mode_real;

/// Triad coupling `B(p, q)` inside the projected nonlinearity.
///
/// `Gradient` is `q (û_p · û_q)` with the unconjugated dot product. Summed
/// over the swap-symmetric pairs of a target `k` it equals
/// `(k/2) Σ û_p·û_q`, which `P(k)` annihilates, so the projected
/// nonlinearity vanishes up to rounding while the individual per-triad
/// transfers in [`transfer_matrix`] do not.
///
/// `Convective` is `(q · û_p) û_q`, the Fourier transform of `(u·∇)u`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NonlinearForm {
    #[default]
    Gradient,
    Convective,
}

impl std::str::FromStr for NonlinearForm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gradient" => Ok(NonlinearForm::Gradient),
            "convective" => Ok(NonlinearForm::Convective),
            other => Err(Error::param("form", format!("unknown nonlinear form `{other}`"))),
        }
    }
}

impl std::fmt::Display for NonlinearForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            NonlinearForm::Gradient => "gradient",
            NonlinearForm::Convective => "convective",
        })
    }
}

impl NonlinearForm {
    /// `B(p, q)` for `q = k − p`.
    #[inline]
    pub fn coupling<T: Real>(self, q: Mode, up: &Vec3<T>, uq: &Vec3<T>) -> Vec3<T> {
        let qr = mode_real::<T>(q);
        match self {
            NonlinearForm::Gradient => {
                let s = dot(up, uq);
                [s * qr[0], s * qr[1], s * qr[2]]
            }
            NonlinearForm::Convective => {
                let s = k_dot(q, up);
                [uq[0] * s, uq[1] * s, uq[2] * s]
            }
        }
    }
}

#[inline]
pub(crate) fn leray_unchecked<T: Real>(k: Mode, v: &Vec3<T>) -> Vec3<T> {
    let kr = mode_real::<T>(k);
    let k2 = T::int(k.norm_sq() as i64);
    let s = k_dot(k, v) / k2;
    [v[0] - s * kr[0], v[1] - s * kr[1], v[2] - s * kr[2]]
}

/// `P(k) v = v − k (k·v)/|k|²`.
pub fn leray_project<T: Real>(k: Mode, v: &Vec3<T>) -> Result<Vec3<T>> {
    if k.is_zero() {
        return Err(Error::Domain("Leray projector is undefined at k = 0".into()));
    }
    Ok(leray_unchecked(k, v))
}

/// Multiply by `−i`.
#[inline]
pub(crate) fn times_neg_i<T: Real>(v: &Vec3<T>) -> Vec3<T> {
    v.map(|c| Complex::new(c.im, -c.re))
}

fn nonlinear_unchecked<T: Real>(u: &TruncatedState<T>, k: Mode, form: NonlinearForm) -> Vec3<T> {
    let lattice = u.lattice();
    let mut acc = zero3::<T>();
    for p in lattice.sources(k) {
        let q = k - p;
        let b = form.coupling(q, u.at(p), u.at(q));
        for j in 0..3 {
            acc[j] = acc[j] + b[j];
        }
    }
    times_neg_i(&leray_unchecked(k, &acc))
}

/// `−i P(k) Σ_{p+q=k} B(p, q)` over all admissible triads of `k`.
pub fn nonlinear_term<T: Real>(u: &TruncatedState<T>, k: Mode, form: NonlinearForm) -> Result<Vec3<T>> {
    if !u.lattice().contains(k) {
        return Err(Error::Domain(format!(
            "mode {k} is not in the truncated lattice for N={}",
            u.n()
        )));
    }
    Ok(nonlinear_unchecked(u, k, form))
}

/// Full right-hand side `−ν|k|² û_k + nonlinear_term(u, k)` on every mode.
pub fn galerkin_rhs<T: Real>(u: &TruncatedState<T>, nu: T, form: NonlinearForm) -> Result<TruncatedState<T>> {
    if !(nu >= T::zero()) {
        return Err(Error::param("nu", format!("viscosity must be nonnegative, got {nu}")));
    }
    let lattice = *u.lattice();
    let coeffs: Vec<Vec3<T>> = (0..lattice.len())
        .into_par_iter()
        .map(|i| {
            let k = lattice.mode_at(i);
            let damp = nu * T::int(k.norm_sq() as i64);
            let nl = nonlinear_unchecked(u, k, form);
            let uk = &u.coeffs()[i];
            [0, 1, 2].map(|j| nl[j] - uk[j] * damp)
        })
        .collect();
    Ok(TruncatedState::from_coeffs(lattice, coeffs))
}
