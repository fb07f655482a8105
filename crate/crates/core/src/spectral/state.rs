use crate::error::{Error, Invariant, Result};
use crate::lattice::{Lattice, Mode};
use crate::scalar::Real;
use num_complex::Complex;

/// A complex 3-vector: one Fourier velocity amplitude.
pub type Vec3<T> = [Complex<T>; 3];

#[inline]
pub fn zero3<T: Real>() -> Vec3<T> {
    [Complex::new(T::zero(), T::zero()); 3]
}

/// Unconjugated bilinear product `Σ_j a_j b_j`.
#[inline]
pub fn dot<T: Real>(a: &Vec3<T>, b: &Vec3<T>) -> Complex<T> {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Hermitian pairing `Σ_j conj(a_j) b_j`.
#[inline]
pub fn dot_conj<T: Real>(a: &Vec3<T>, b: &Vec3<T>) -> Complex<T> {
    a[0].conj() * b[0] + a[1].conj() * b[1] + a[2].conj() * b[2]
}

#[inline]
pub fn norm3<T: Real>(a: &Vec3<T>) -> T {
    (a[0].norm_sqr() + a[1].norm_sqr() + a[2].norm_sqr()).sqrt()
}

#[inline]
pub fn norm_sqr3<T: Real>(a: &Vec3<T>) -> T {
    a[0].norm_sqr() + a[1].norm_sqr() + a[2].norm_sqr()
}

#[inline]
pub fn conj3<T: Real>(a: &Vec3<T>) -> Vec3<T> {
    [a[0].conj(), a[1].conj(), a[2].conj()]
}

#[inline]
pub(crate) fn mode_real<T: Real>(k: Mode) -> [T; 3] {
    k.0.map(|c| T::int(c as i64))
}

/// `k · v` for an integer wavevector.
#[inline]
pub fn k_dot<T: Real>(k: Mode, v: &Vec3<T>) -> Complex<T> {
    let kr = mode_real::<T>(k);
    v[0] * kr[0] + v[1] * kr[1] + v[2] * kr[2]
}

/// Velocity amplitudes on every mode of `Λ_N`, stored densely in lattice
/// order.
///
/// Construction through [`TruncatedState::from_fn`] does not check the
/// reality and incompressibility invariants; call [`TruncatedState::validate`]
/// on anything that arrives from outside.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedState<T> {
    lattice: Lattice,
    coeffs: Vec<Vec3<T>>,
}

impl<T: Real> TruncatedState<T> {
    pub fn zeros(n: u32) -> Result<Self> {
        let lattice = Lattice::new(n)?;
        Ok(TruncatedState {
            lattice,
            coeffs: vec![zero3(); lattice.len()],
        })
    }

    pub fn from_fn(n: u32, mut f: impl FnMut(Mode) -> Vec3<T>) -> Result<Self> {
        let lattice = Lattice::new(n)?;
        let coeffs = lattice.iter().map(&mut f).collect();
        Ok(TruncatedState { lattice, coeffs })
    }

    pub(crate) fn from_coeffs(lattice: Lattice, coeffs: Vec<Vec3<T>>) -> Self {
        debug_assert_eq!(coeffs.len(), lattice.len());
        TruncatedState { lattice, coeffs }
    }

    pub fn n(&self) -> u32 {
        self.lattice.n()
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    /// Amplitudes in lattice order.
    pub fn coeffs(&self) -> &[Vec3<T>] {
        &self.coeffs
    }

    pub fn coeff(&self, k: Mode) -> Option<&Vec3<T>> {
        self.lattice.index_of(k).map(|i| &self.coeffs[i])
    }

    /// Amplitude of a mode known to be in the lattice.
    #[inline]
    pub(crate) fn at(&self, k: Mode) -> &Vec3<T> {
        &self.coeffs[self.lattice.index_of(k).expect("mode in lattice")]
    }

    /// Sets `û_k = v` and `û_{−k} = conj(v)`.
    pub fn set_pair(&mut self, k: Mode, v: Vec3<T>) -> Result<()> {
        let (Some(i), Some(j)) = (self.lattice.index_of(k), self.lattice.index_of(-k)) else {
            return Err(Error::Domain(format!("mode {k} is not in the truncated lattice")));
        };
        self.coeffs[i] = v;
        self.coeffs[j] = conj3(&v);
        Ok(())
    }

    pub fn iter(&self) -> impl Iterator<Item = (Mode, &Vec3<T>)> {
        self.lattice.iter().zip(self.coeffs.iter())
    }

    pub fn scaled(&self, factor: T) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .map(|v| v.map(|c| c * factor))
            .collect();
        TruncatedState {
            lattice: self.lattice,
            coeffs,
        }
    }

    /// `self + factor · other` over the same lattice.
    pub(crate) fn axpy(&self, factor: T, other: &Self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| [0, 1, 2].map(|j| a[j] + b[j] * factor))
            .collect();
        TruncatedState {
            lattice: self.lattice,
            coeffs,
        }
    }

    pub fn max_amplitude(&self) -> T {
        self.coeffs
            .iter()
            .map(norm3)
            .fold(T::zero(), |a, b| a.max(b))
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs
            .iter()
            .all(|v| v.iter().all(|c| c.re.is_finite() && c.im.is_finite()))
    }

    /// `½ Σ_k |û_k|²`.
    pub fn energy(&self) -> T {
        self.coeffs.iter().map(norm_sqr3).sum::<T>() / T::lit(2.0)
    }

    /// `½ Σ_k |k|² |û_k|²`.
    pub fn enstrophy(&self) -> T {
        self.iter()
            .map(|(k, v)| T::int(k.norm_sq() as i64) * norm_sqr3(v))
            .sum::<T>()
            / T::lit(2.0)
    }

    /// Checks finiteness, reality `û_{−k} = conj(û_k)` and incompressibility
    /// `k·û_k = 0`, both to [`Real::VALIDATION_TOL`] relative.
    pub fn validate(&self) -> Result<()> {
        let tol = T::VALIDATION_TOL;
        for (k, v) in self.iter() {
            if !v.iter().all(|c| c.re.is_finite() && c.im.is_finite()) {
                return Err(Error::Validation {
                    invariant: Invariant::Finite,
                    mode: k,
                    detail: "non-finite amplitude".into(),
                });
            }
        }
        for (k, v) in self.iter() {
            let mag = norm3(v);
            let kn = T::int(k.norm_sq() as i64).sqrt();
            let div = k_dot(k, v).norm();
            if div > tol * kn * mag {
                return Err(Error::Validation {
                    invariant: Invariant::Incompressibility,
                    mode: k,
                    detail: format!("|k·u_k| = {div:e} exceeds {:e}", tol * kn * mag),
                });
            }
            if k.is_positive() {
                let partner = self.at(-k);
                let diff = norm3(&[0, 1, 2].map(|j| partner[j] - v[j].conj()));
                let scale = mag.max(norm3(partner));
                if diff > tol * scale {
                    return Err(Error::Validation {
                        invariant: Invariant::Reality,
                        mode: k,
                        detail: format!("|u_(-k) - conj(u_k)| = {diff:e}"),
                    });
                }
            }
        }
        Ok(())
    }

    /// Projects every amplitude onto `k^⊥` and restores exact conjugate
    /// symmetry by averaging each `±k` pair.
    pub fn enforce_constraints(&mut self) {
        let lattice = self.lattice;
        for i in 0..self.coeffs.len() {
            let k = lattice.mode_at(i);
            if !k.is_positive() {
                continue;
            }
            let j = lattice.index_of(-k).expect("lattice is symmetric");
            let half = T::lit(0.5);
            let (a, b) = (self.coeffs[i], self.coeffs[j]);
            let avg = [0, 1, 2].map(|c| (a[c] + b[c].conj()) * half);
            let projected = super::leray_unchecked(k, &avg);
            self.coeffs[i] = projected;
            self.coeffs[j] = conj3(&projected);
        }
    }

    /// Converts the amplitudes to another float type.
    pub fn cast<U: Real>(&self) -> TruncatedState<U> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|v| v.map(|c| Complex::new(U::lit(c.re.to_f64_lossy()), U::lit(c.im.to_f64_lossy()))))
            .collect();
        TruncatedState {
            lattice: self.lattice,
            coeffs,
        }
    }
}
