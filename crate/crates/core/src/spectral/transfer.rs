//! Orbit-level transfer matrix `M_αβ(u)`: the enstrophy flux into target
//! orbit `α` carried by triads whose source `p` lies in orbit `β`.

use super::state::{dot_conj, TruncatedState, Vec3};
use super::{leray_unchecked, NonlinearForm};
use crate::error::{Error, Result};
use crate::lattice::Mode;
use crate::scalar::Real;
use crate::symmetry::{Orbit, OrbitCatalog, OrbitLabel};
use ndarray::Array2;
use rayon::prelude::*;

/// Dense `|O_N| × |O_N|` matrix indexed in catalog order.
#[derive(Clone, Debug, PartialEq)]
pub struct TransferMatrix<T> {
    pub labels: Vec<OrbitLabel>,
    pub entries: Array2<T>,
}

impl<T: Real> TransferMatrix<T> {
    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn row_sum(&self, alpha: usize) -> T {
        self.entries.row(alpha).iter().copied().sum()
    }

    pub fn abs_row_sum(&self, alpha: usize) -> T {
        self.entries.row(alpha).iter().map(|v| v.abs()).sum()
    }
}

/// `|k|² Re(conj(û_k) · [−i P(k) B(p,q)])` for one triad.
#[inline]
pub(crate) fn triad_transfer<T: Real>(
    u: &TruncatedState<T>,
    k: Mode,
    uk: &Vec3<T>,
    p: Mode,
    form: NonlinearForm,
) -> T {
    let q = k - p;
    let w = leray_unchecked(k, &form.coupling(q, u.at(p), u.at(q)));
    // Re(−i z) = Im(z)
    T::int(k.norm_sq() as i64) * dot_conj(uk, &w).im
}

fn check_orbit<T: Real>(u: &TruncatedState<T>, orbit: &Orbit) -> Result<()> {
    orbit.check_truncation(u.n())
}

/// One entry `M_αβ(u)`, summing `k` over `α` and `p` over `β` in
/// lexicographic order.
pub fn transfer_entry<T: Real>(
    u: &TruncatedState<T>,
    alpha: &Orbit,
    beta: &Orbit,
    form: NonlinearForm,
) -> Result<T> {
    check_orbit(u, alpha)?;
    check_orbit(u, beta)?;
    let lattice = u.lattice();
    let mut acc = T::zero();
    for &k in alpha.members() {
        let uk = u.at(k);
        for &p in beta.members() {
            if lattice.contains(k - p) {
                acc = acc + triad_transfer(u, k, uk, p, form);
            }
        }
    }
    Ok(acc / T::int(alpha.size() as i64))
}

/// All entries of `M_N(u)`. Rows are filled independently and each entry
/// accumulates in the same order as [`transfer_entry`], so the result is
/// bit-identical to entrywise evaluation at any thread count.
pub fn transfer_matrix<T: Real>(
    u: &TruncatedState<T>,
    catalog: &OrbitCatalog,
    form: NonlinearForm,
) -> Result<TransferMatrix<T>> {
    if catalog.n() != u.n() {
        return Err(Error::Domain(format!(
            "orbit catalog for N={} does not match state with N={}",
            catalog.n(),
            u.n()
        )));
    }
    let dim = catalog.len();
    let rows: Vec<Vec<T>> = catalog
        .orbits()
        .par_iter()
        .map(|alpha| {
            let mut row = vec![T::zero(); dim];
            for &k in alpha.members() {
                let uk = u.at(k);
                for p in u.lattice().sources(k) {
                    let beta = catalog.index_of_mode(p).expect("source in lattice");
                    row[beta] = row[beta] + triad_transfer(u, k, uk, p, form);
                }
            }
            let size = T::int(alpha.size() as i64);
            row.iter_mut().for_each(|v| *v = *v / size);
            row
        })
        .collect();
    let flat: Vec<T> = rows.into_iter().flatten().collect();
    Ok(TransferMatrix {
        labels: catalog.orbits().iter().map(Orbit::label).collect(),
        entries: Array2::from_shape_vec((dim, dim), flat).expect("square shape"),
    })
}

/// Antisymmetric and symmetric parts `A = (M − Mᵀ)/2`, `V = (M + Mᵀ)/2`.
pub fn decompose<T: Real>(m: &Array2<T>) -> Result<(Array2<T>, Array2<T>)> {
    let (rows, cols) = m.dim();
    if rows != cols {
        return Err(Error::Domain(format!("cannot decompose a {rows}×{cols} matrix")));
    }
    let half = T::lit(0.5);
    let a = Array2::from_shape_fn((rows, rows), |(i, j)| (m[[i, j]] - m[[j, i]]) * half);
    let v = Array2::from_shape_fn((rows, rows), |(i, j)| (m[[i, j]] + m[[j, i]]) * half);
    Ok((a, v))
}
