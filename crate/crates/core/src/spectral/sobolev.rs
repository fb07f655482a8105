//! Sobolev-norm quantities and the inequalities that control row sums of
//! the transfer matrix.

use super::state::{norm_sqr3, TruncatedState, Vec3};
use super::transfer::{transfer_matrix, TransferMatrix};
use super::{leray_unchecked, NonlinearForm};
use crate::error::{Error, Result};
use crate::lattice::{check_member, check_n, Lattice, Mode};
use crate::scalar::Real;
use crate::symmetry::{Orbit, OrbitCatalog, OrbitLabel};
use ndarray::Array2;
use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

/// `(Σ_k |k|^{2s} |û_k|²)^{1/2}`.
pub fn h_s_norm<T: Real>(u: &TruncatedState<T>, s: T) -> T {
    u.iter()
        .map(|(k, v)| T::int(k.norm_sq() as i64).powf(s) * norm_sqr3(v))
        .sum::<T>()
        .sqrt()
}

/// Seeded divergence-free real state with `‖u‖_{H^s} = norm`.
///
/// Standard complex Gaussian 3-vectors are drawn on the lexicographically
/// positive half-lattice, projected onto `k^⊥`, mirrored by conjugation and
/// rescaled globally.
pub fn random_state<T: Real>(n: u32, s: T, norm: T, seed: u64) -> Result<TruncatedState<T>> {
    if !(norm > T::zero()) || !norm.is_finite() {
        return Err(Error::param("M", format!("norm must be positive and finite, got {norm}")));
    }
    if !s.is_finite() {
        return Err(Error::param("s", "Sobolev exponent must be finite"));
    }
    let mut u = TruncatedState::<T>::zeros(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let amp = std::f64::consts::FRAC_1_SQRT_2;
    let lattice = *u.lattice();
    for k in lattice.iter().filter(Mode::is_positive) {
        let mut draw = || -> T { { let z: f64 = StandardNormal.sample(&mut rng); T::lit(amp * z) } };
        let v: Vec3<T> = [(); 3].map(|_| {
            let re = draw();
            Complex::new(re, draw())
        });
        u.set_pair(k, leray_unchecked(k, &v))?;
    }
    let current = h_s_norm(&u, s);
    Ok(u.scaled(norm / current))
}

/// Precomputed weights `|p|^{−s}` and `|q|^{1−s}` indexed by `|·|²`.
#[derive(Clone, Debug)]
pub struct ConvolutionKernel<T> {
    lattice: Lattice,
    s: T,
    source_weight: Vec<T>,
    partner_weight: Vec<T>,
}

impl<T: Real> ConvolutionKernel<T> {
    pub fn new(n: u32, s: T) -> Result<Self> {
        check_n(n)?;
        let lattice = Lattice::new(n)?;
        let rmax = 3 * (n as usize).pow(2);
        let half = T::lit(0.5);
        let weights = |exp: T| {
            (0..=rmax)
                .map(|r| T::int(r as i64).powf(exp * half))
                .collect::<Vec<T>>()
        };
        Ok(ConvolutionKernel {
            lattice,
            s,
            source_weight: weights(-s),
            partner_weight: weights(T::one() - s),
        })
    }

    pub fn s(&self) -> T {
        self.s
    }

    /// `|p|^{−s} |q|^{1−s}`.
    #[inline]
    pub fn weight(&self, p: Mode, q: Mode) -> T {
        self.source_weight[p.norm_sq() as usize] * self.partner_weight[q.norm_sq() as usize]
    }

    /// `Σ_N(k) = Σ_{p, k−p ∈ Λ_N} |p|^{−s} |k−p|^{1−s}`.
    pub fn sigma(&self, k: Mode) -> Result<T> {
        check_member(k, self.lattice.n())?;
        Ok(self
            .lattice
            .sources(k)
            .map(|p| self.weight(p, k - p))
            .sum())
    }
}

pub fn sigma_n<T: Real>(k: Mode, s: T, n: u32) -> Result<T> {
    ConvolutionKernel::new(n, s)?.sigma(k)
}

/// `M³ |k_α|^{2−s} (1/|α|) Σ_{(k,p,q) ∈ T_αβ} |p|^{−s} |q|^{1−s}`: the
/// per-pair ceiling on `|M_αβ(u)|` for any divergence-free `u` with
/// `‖u‖_{H^s} ≤ M`.
pub fn weighted_pair_bound<T: Real>(norm: T, alpha: &Orbit, beta: &Orbit, s: T, n: u32) -> Result<T> {
    alpha.check_truncation(n)?;
    beta.check_truncation(n)?;
    let kernel = ConvolutionKernel::new(n, s)?;
    let lattice = Lattice::new(n)?;
    let mut acc = T::zero();
    for &k in alpha.members() {
        for &p in beta.members() {
            let q = k - p;
            if lattice.contains(q) {
                acc = acc + kernel.weight(p, q);
            }
        }
    }
    Ok(prefactor(norm, alpha.norm_sq(), s) * acc / T::int(alpha.size() as i64))
}

/// [`weighted_pair_bound`] for every orbit pair of `catalog`.
pub fn weighted_pair_bounds<T: Real>(norm: T, s: T, catalog: &OrbitCatalog) -> Result<Array2<T>> {
    let kernel = ConvolutionKernel::new(catalog.n(), s)?;
    let dim = catalog.len();
    let rows: Vec<Vec<T>> = catalog
        .orbits()
        .par_iter()
        .map(|alpha| {
            let mut row = vec![T::zero(); dim];
            for &k in alpha.members() {
                for p in catalog.lattice().sources(k) {
                    let b = catalog.index_of_mode(p).expect("source in lattice");
                    row[b] = row[b] + kernel.weight(p, k - p);
                }
            }
            let scale = prefactor(norm, alpha.norm_sq(), s) / T::int(alpha.size() as i64);
            row.iter_mut().for_each(|v| *v = *v * scale);
            row
        })
        .collect();
    Ok(Array2::from_shape_vec((dim, dim), rows.into_iter().flatten().collect()).expect("square"))
}

/// `M³ |k|^{2−s}`.
fn prefactor<T: Real>(norm: T, k_norm_sq: u64, s: T) -> T {
    let kn = T::int(k_norm_sq as i64).sqrt();
    norm * norm * norm * kn.powf(T::lit(2.0) - s)
}

/// Row-sum diagnostics for one target orbit.
#[derive(Clone, Debug, PartialEq)]
pub struct RowSumReport<T> {
    pub label: OrbitLabel,
    /// `Σ_β |M_αβ(u)|`.
    pub rowsum: T,
    /// `‖u‖³_{H^s} (|k_α|^{2−s} + |k_α|^{6−3s})`.
    pub bound_shape: T,
    /// `rowsum / bound_shape` (zero when both vanish).
    pub ratio: T,
    /// `‖u‖³_{H^s} |k_α|^{2−s} Σ_N(k_α)`, a hard ceiling on `rowsum`.
    pub convolution_bound: T,
}

fn check_row_sum_range<T: Real>(s: T) -> Result<()> {
    if !(s > T::lit(1.5) && s < T::lit(3.0)) {
        return Err(Error::param(
            "s",
            format!("row-sum bounds are only available for 3/2 < s < 3, got {s}"),
        ));
    }
    Ok(())
}

/// Row sums of `|M_N(u)|` against their bound shapes, in catalog order.
pub fn row_sum_check<T: Real>(
    u: &TruncatedState<T>,
    s: T,
    catalog: &OrbitCatalog,
    form: NonlinearForm,
) -> Result<Vec<RowSumReport<T>>> {
    check_row_sum_range(s)?;
    let matrix = transfer_matrix(u, catalog, form)?;
    row_sum_report(&matrix, h_s_norm(u, s), s, catalog)
}

/// As [`row_sum_check`], reusing an already assembled matrix.
pub fn row_sum_report<T: Real>(
    matrix: &TransferMatrix<T>,
    norm: T,
    s: T,
    catalog: &OrbitCatalog,
) -> Result<Vec<RowSumReport<T>>> {
    check_row_sum_range(s)?;
    let kernel = ConvolutionKernel::new(catalog.n(), s)?;
    let cube = norm * norm * norm;
    catalog
        .orbits()
        .iter()
        .enumerate()
        .map(|(i, alpha)| {
            let kn = T::int(alpha.norm_sq() as i64).sqrt();
            let rowsum = matrix.abs_row_sum(i);
            let bound_shape = cube
                * (kn.powf(T::lit(2.0) - s) + kn.powf(T::lit(6.0) - T::lit(3.0) * s));
            let ratio = if rowsum == T::zero() {
                T::zero()
            } else {
                rowsum / bound_shape
            };
            let convolution_bound =
                prefactor(norm, alpha.norm_sq(), s) * kernel.sigma(alpha.canonical_mode())?;
            Ok(RowSumReport {
                label: alpha.label(),
                rowsum,
                bound_shape,
                ratio,
                convolution_bound,
            })
        })
        .collect()
}
