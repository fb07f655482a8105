//! The cubic truncation `Λ_N = { k ∈ ℤ³ \ {0} : |k|∞ ≤ N }`, its shells, and
//! exact triad counts.
//!
//! Modes are ordered lexicographically on `(k₁, k₂, k₃)` everywhere in the
//! crate; dense per-mode storage relies on that order (see [`Lattice`]).

use crate::error::{Error, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Add, Neg, RangeInclusive, Sub};

/// Largest truncation parameter accepted anywhere. Keeps `2N+1` and all
/// coordinate differences comfortably inside `i32`.
pub const MAX_N: u32 = 1 << 20;

/// Squared Euclidean norm `|k|²` labelling a shell.
pub type ShellRadius = u64;

/// An integer wavevector.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Mode(pub [i32; 3]);

impl Mode {
    pub const fn new(k1: i32, k2: i32, k3: i32) -> Self {
        Mode([k1, k2, k3])
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.0 == [0, 0, 0]
    }

    #[inline]
    pub fn norm_sq(&self) -> u64 {
        self.0.iter().map(|&c| (c as i64 * c as i64) as u64).sum()
    }

    #[inline]
    pub fn max_abs(&self) -> u32 {
        self.0.iter().map(|c| c.unsigned_abs()).max().unwrap_or(0)
    }

    /// `true` iff `k ≠ 0` and `|k|∞ ≤ N`.
    #[inline]
    pub fn in_lattice(&self, n: u32) -> bool {
        !self.is_zero() && self.max_abs() <= n
    }

    /// Lexicographically positive: the first nonzero coordinate is positive.
    pub fn is_positive(&self) -> bool {
        self.0.iter().find(|&&c| c != 0).is_some_and(|&c| c > 0)
    }

    #[inline]
    pub fn coord(&self, axis: usize) -> i32 {
        self.0[axis]
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.0[0], self.0[1], self.0[2])
    }
}

impl Add for Mode {
    type Output = Mode;
    fn add(self, rhs: Mode) -> Mode {
        Mode([self.0[0] + rhs.0[0], self.0[1] + rhs.0[1], self.0[2] + rhs.0[2]])
    }
}

impl Sub for Mode {
    type Output = Mode;
    fn sub(self, rhs: Mode) -> Mode {
        Mode([self.0[0] - rhs.0[0], self.0[1] - rhs.0[1], self.0[2] - rhs.0[2]])
    }
}

impl Neg for Mode {
    type Output = Mode;
    fn neg(self) -> Mode {
        Mode([-self.0[0], -self.0[1], -self.0[2]])
    }
}

pub(crate) fn check_n(n: u32) -> Result<()> {
    if n == 0 {
        return Err(Error::param("N", "truncation parameter must be at least 1"));
    }
    if n > MAX_N {
        return Err(Error::param("N", format!("truncation parameter exceeds {MAX_N}")));
    }
    Ok(())
}

pub(crate) fn check_member(k: Mode, n: u32) -> Result<()> {
    check_n(n)?;
    if !k.in_lattice(n) {
        return Err(Error::Domain(format!("mode {k} is not in the truncated lattice for N={n}")));
    }
    Ok(())
}

/// Dense indexing of `Λ_N` in lexicographic order.
///
/// The index of `k` is its position in the `(2N+1)³` box with the origin
/// removed, so lookups are arithmetic and need no table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Lattice {
    n: u32,
}

impl Lattice {
    pub fn new(n: u32) -> Result<Self> {
        check_n(n)?;
        Ok(Lattice { n })
    }

    #[inline]
    pub fn n(&self) -> u32 {
        self.n
    }

    #[inline]
    fn side(&self) -> usize {
        2 * self.n as usize + 1
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.side().pow(3) - 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn contains(&self, k: Mode) -> bool {
        k.in_lattice(self.n)
    }

    #[inline]
    pub fn index_of(&self, k: Mode) -> Option<usize> {
        if !self.contains(k) {
            return None;
        }
        let n = self.n as i64;
        let side = self.side();
        let b = ((k.0[0] as i64 + n) as usize * side + (k.0[1] as i64 + n) as usize) * side
            + (k.0[2] as i64 + n) as usize;
        let center = (side.pow(3) - 1) / 2;
        Some(if b > center { b - 1 } else { b })
    }

    #[inline]
    pub fn mode_at(&self, index: usize) -> Mode {
        let side = self.side();
        let center = (side.pow(3) - 1) / 2;
        let b = if index >= center { index + 1 } else { index };
        let n = self.n as i32;
        let k3 = (b % side) as i32 - n;
        let k2 = ((b / side) % side) as i32 - n;
        let k1 = (b / (side * side)) as i32 - n;
        Mode([k1, k2, k3])
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = Mode> + '_ {
        (0..self.len()).map(move |i| self.mode_at(i))
    }

    /// Admissible values of `p_i` for a source `p` with `p, k−p` both in the
    /// box `[-N, N]³`: the intersection `[-N, N] ∩ [k_i − N, k_i + N]`.
    #[inline]
    pub fn source_range(&self, k: Mode, axis: usize) -> RangeInclusive<i32> {
        let n = self.n as i32;
        let c = k.0[axis];
        (c - n).max(-n)..=(c + n).min(n)
    }

    /// All `p` with `p ∈ Λ_N` and `k − p ∈ Λ_N`, lexicographic in `p`.
    pub fn sources(&self, k: Mode) -> impl Iterator<Item = Mode> + '_ {
        let r0 = self.source_range(k, 0);
        let (r1, r2) = (self.source_range(k, 1), self.source_range(k, 2));
        r0.flat_map(move |p1| {
            let r2 = r2.clone();
            r1.clone()
                .flat_map(move |p2| r2.clone().map(move |p3| Mode([p1, p2, p3])))
        })
        .filter(move |&p| !p.is_zero() && p != k)
    }
}

/// Every mode of `Λ_N`, lexicographically ordered.
pub fn enumerate_lattice(n: u32) -> Result<Vec<Mode>> {
    let lattice = Lattice::new(n)?;
    Ok(lattice.iter().collect())
}

/// `T(k,N) = ∏ᵢ (2N+1−|kᵢ|) − 2`: ordered pairs `(p,q) ∈ Λ_N²` with `p+q = k`.
pub fn triad_count_exact(k: Mode, n: u32) -> Result<u64> {
    check_member(k, n)?;
    let side = 2 * n as u64 + 1;
    let product: u64 = k.0.iter().map(|c| side - c.unsigned_abs() as u64).product();
    Ok(product - 2)
}

/// Direct count of the pairs in [`triad_count_exact`], scanning `p` over the
/// coordinate box intersection.
pub fn triad_count_brute(k: Mode, n: u32) -> Result<u64> {
    check_member(k, n)?;
    let lattice = Lattice::new(n)?;
    let mut count = 0u64;
    for p1 in lattice.source_range(k, 0) {
        for p2 in lattice.source_range(k, 1) {
            for p3 in lattice.source_range(k, 2) {
                let p = Mode([p1, p2, p3]);
                if lattice.contains(p) && lattice.contains(k - p) {
                    count += 1;
                }
            }
        }
    }
    Ok(count)
}

/// `Σ_k T(k,N) = (3N²+3N+1)³ − 3(2N+1)³ + 2`.
///
/// Evaluated in 128-bit arithmetic; the result no longer fits `u64` beyond
/// N = 937, which is reported as an invalid parameter.
pub fn total_triads(n: u32) -> Result<u64> {
    check_n(n)?;
    let n = n as u128;
    let a = 3 * n * n + 3 * n + 1;
    let b = 2 * n + 1;
    let total = a * a * a - 3 * b * b * b + 2;
    u64::try_from(total).map_err(|_| Error::param("N", "total triad count overflows 64 bits"))
}

/// `max_k T(k,N) = 2N(2N+1)² − 2`, attained at the six axial unit vectors.
pub fn max_triad_count(n: u32) -> Result<u64> {
    check_n(n)?;
    let n = n as u64;
    Ok(2 * n * (2 * n + 1).pow(2) - 2)
}

/// Sum of [`triad_count_exact`] over the whole lattice, computed mode by mode.
pub fn total_triads_by_summation(n: u32) -> Result<u64> {
    let lattice = Lattice::new(n)?;
    let side = 2 * n as u64 + 1;
    Ok((0..lattice.len())
        .into_par_iter()
        .map(|i| {
            let k = lattice.mode_at(i);
            k.0.iter().map(|c| side - c.unsigned_abs() as u64).product::<u64>() - 2
        })
        .sum())
}

/// Represented shell radii `{ |k|² : k ∈ Λ_N }`, ascending.
pub fn shell_radii(n: u32) -> Result<Vec<ShellRadius>> {
    check_n(n)?;
    let n = n as u64;
    let mut seen = vec![false; (3 * n * n + 1) as usize];
    for a in 0..=n {
        for b in 0..=a {
            for c in 0..=b {
                seen[(a * a + b * b + c * c) as usize] = true;
            }
        }
    }
    Ok(seen
        .iter()
        .enumerate()
        .skip(1)
        .filter_map(|(r, &hit)| hit.then_some(r as u64))
        .collect())
}

/// Modes of `Λ_N` with `|k|² = r`, lexicographic. Empty when `r` is not
/// represented.
pub fn shell(r: ShellRadius, n: u32) -> Result<Vec<Mode>> {
    check_n(n)?;
    let ni = n as i32;
    let mut out = Vec::new();
    for k1 in -ni..=ni {
        let r1 = (k1 as i64).pow(2) as u64;
        if r1 > r {
            continue;
        }
        for k2 in -ni..=ni {
            let r12 = r1 + (k2 as i64).pow(2) as u64;
            if r12 > r {
                continue;
            }
            if let Some(c) = exact_sqrt(r - r12) {
                if c <= n as u64 {
                    let c = c as i32;
                    if c == 0 {
                        out.push(Mode([k1, k2, 0]));
                    } else {
                        out.push(Mode([k1, k2, -c]));
                        out.push(Mode([k1, k2, c]));
                    }
                }
            }
        }
    }
    out.retain(|k| !k.is_zero());
    Ok(out)
}

/// `Some(⌊√v⌋)` when `v` is a perfect square.
pub(crate) fn exact_sqrt(v: u64) -> Option<u64> {
    let s = isqrt(v);
    (s * s == v).then_some(s)
}

pub(crate) fn isqrt(v: u64) -> u64 {
    let mut s = (v as f64).sqrt() as u64;
    while s * s > v {
        s -= 1;
    }
    while (s + 1) * (s + 1) <= v {
        s += 1;
    }
    s
}
