//! Orbit–triad incidence counting.
//!
//! For a target `k` and a shell `r`, the shell slice `A_r(k)` holds the
//! sources `p` on shell `r` whose partner `k − p` is also retained. Each slice
//! point is filed under the face of the translated cube `B(k) = k + [-N,N]³`
//! it sits closest to and a dyadic height scale; the resulting patches are
//! what the two-squares counting works on.

use crate::error::{Error, Result};
use crate::lattice::{check_member, check_n, isqrt, exact_sqrt, Lattice, Mode, ShellRadius};
use crate::symmetry::{canonical_unchecked, Orbit, OrbitCatalog, OrbitLabel};
use rayon::prelude::*;
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

/// Number of ordered pairs `(a,b) ∈ ℤ²` with `a² + b² = n`.
pub fn r2(n: i64) -> Result<u64> {
    if n < 0 {
        return Err(Error::Domain(format!("r2 is undefined for negative argument {n}")));
    }
    let n = n as u64;
    let limit = isqrt(n);
    let mut count = 0;
    for a in 0..=limit {
        if let Some(b) = exact_sqrt(n - a * a) {
            // (±a, ±b), collapsing signs of zero coordinates.
            count += match (a == 0, b == 0) {
                (true, true) => 1,
                (true, false) | (false, true) => 2,
                (false, false) => 4,
            };
        }
    }
    Ok(count)
}

/// Points `p ∈ Λ_N` with `|p|² = r` and `k − p ∈ Λ_N`, lexicographic.
pub fn shell_slice(k: Mode, r: ShellRadius, n: u32) -> Result<Vec<Mode>> {
    check_member(k, n)?;
    let lattice = Lattice::new(n)?;
    let range3 = lattice.source_range(k, 2);
    let mut out = Vec::new();
    for p1 in lattice.source_range(k, 0) {
        let s1 = (p1 as i64).pow(2) as u64;
        if s1 > r {
            continue;
        }
        for p2 in lattice.source_range(k, 1) {
            let s12 = s1 + (p2 as i64).pow(2) as u64;
            if s12 > r {
                continue;
            }
            let Some(c) = exact_sqrt(r - s12) else {
                continue;
            };
            let c = c as i32;
            let candidates: &[i32] = if c == 0 { &[0] } else { &[-c, c] };
            for &p3 in candidates {
                let p = Mode([p1, p2, p3]);
                if range3.contains(&p3) && !p.is_zero() && p != k {
                    out.push(p);
                }
            }
        }
    }
    Ok(out)
}

/// A face `p_j = k_j + σN` of the translated cube `B(k)`.
///
/// Faces are totally ordered `(1,+1) < (1,−1) < (2,+1) < … < (3,−1)`; the
/// minimizing face of a point is the first one in this order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FaceLabel {
    axis: usize,
    positive: bool,
}

impl FaceLabel {
    pub const ALL: [FaceLabel; 6] = [
        FaceLabel { axis: 0, positive: true },
        FaceLabel { axis: 0, positive: false },
        FaceLabel { axis: 1, positive: true },
        FaceLabel { axis: 1, positive: false },
        FaceLabel { axis: 2, positive: true },
        FaceLabel { axis: 2, positive: false },
    ];

    /// `axis` is 1-based, `sign` is `±1`.
    pub fn new(axis: usize, sign: i32) -> Option<Self> {
        if !(1..=3).contains(&axis) || sign.abs() != 1 {
            return None;
        }
        Some(FaceLabel {
            axis: axis - 1,
            positive: sign > 0,
        })
    }

    /// 0-based coordinate index of the distinguished coordinate.
    pub fn axis_index(&self) -> usize {
        self.axis
    }

    pub fn sign(&self) -> i32 {
        if self.positive {
            1
        } else {
            -1
        }
    }

    fn rank(&self) -> usize {
        2 * self.axis + usize::from(!self.positive)
    }
}

impl Ord for FaceLabel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.rank().cmp(&other.rank())
    }
}

impl PartialOrd for FaceLabel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for FaceLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{:+})", self.axis + 1, self.sign())
    }
}

fn check_in_box(p: Mode, k: Mode, n: u32) -> Result<()> {
    let inside = (0..3).all(|j| (p.0[j] as i64 - k.0[j] as i64).unsigned_abs() <= n as u64);
    if inside {
        Ok(())
    } else {
        Err(Error::Domain(format!("{p} lies outside the cube of half-width {n} around {k}")))
    }
}

#[inline]
fn height_unchecked(p: Mode, k: Mode, f: FaceLabel, n: u32) -> u32 {
    let (pj, kj, n) = (p.0[f.axis] as i64, k.0[f.axis] as i64, n as i64);
    let h = if f.positive { kj + n - pj } else { pj - (kj - n) };
    h as u32
}

/// Inward distance from `p` to face `f` of `B(k)`, in `[0, 2N]`.
pub fn face_height(p: Mode, k: Mode, f: FaceLabel, n: u32) -> Result<u32> {
    check_n(n)?;
    check_in_box(p, k, n)?;
    Ok(height_unchecked(p, k, f, n))
}

/// The first face (in [`FaceLabel`] order) attaining the minimal height,
/// together with that height.
pub fn min_face(p: Mode, k: Mode, n: u32) -> Result<(FaceLabel, u32)> {
    check_n(n)?;
    check_in_box(p, k, n)?;
    Ok(min_face_unchecked(p, k, n))
}

fn min_face_unchecked(p: Mode, k: Mode, n: u32) -> (FaceLabel, u32) {
    let mut best = (FaceLabel::ALL[0], height_unchecked(p, k, FaceLabel::ALL[0], n));
    for f in &FaceLabel::ALL[1..] {
        let h = height_unchecked(p, k, *f, n);
        if h < best.1 {
            best = (*f, h);
        }
    }
    best
}

/// `1` for `h = 0`, otherwise the power of two `H` with `H ≤ h < 2H`.
pub fn dyadic_scale(h: u32) -> u32 {
    if h == 0 {
        1
    } else {
        1 << (31 - h.leading_zeros())
    }
}

/// Face and dyadic height scale identifying one normalized patch.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PatchKey {
    pub face: FaceLabel,
    pub scale: u32,
}

impl PatchKey {
    pub fn of(p: Mode, k: Mode, n: u32) -> Result<PatchKey> {
        let (face, h) = min_face(p, k, n)?;
        Ok(PatchKey {
            face,
            scale: dyadic_scale(h),
        })
    }
}

/// Splits the shell slice `A_r(k)` into normalized face patches.
pub fn patch_decompose(k: Mode, r: ShellRadius, n: u32) -> Result<BTreeMap<PatchKey, Vec<Mode>>> {
    let mut patches: BTreeMap<PatchKey, Vec<Mode>> = BTreeMap::new();
    for p in shell_slice(k, r, n)? {
        let (face, h) = min_face_unchecked(p, k, n);
        let key = PatchKey {
            face,
            scale: dyadic_scale(h),
        };
        patches.entry(key).or_default().push(p);
    }
    Ok(patches)
}

/// Per-patch counting data used by the two-squares argument.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatchStats {
    pub key: PatchKey,
    pub size: usize,
    /// Number of integers between the smallest and largest distinguished
    /// coordinate `p_j`, inclusive.
    pub coord_span: u32,
    /// For each distinguished coordinate value `u`: members with `p_j = u`,
    /// and `r₂(r − u²)`.
    pub transverse: Vec<(i32, usize, u64)>,
}

pub fn patch_stats(k: Mode, r: ShellRadius, n: u32) -> Result<Vec<PatchStats>> {
    let patches = patch_decompose(k, r, n)?;
    let mut out = Vec::with_capacity(patches.len());
    for (key, members) in patches {
        let axis = key.face.axis_index();
        let mut by_u: BTreeMap<i32, usize> = BTreeMap::new();
        for p in &members {
            *by_u.entry(p.0[axis]).or_default() += 1;
        }
        let lo = *by_u.keys().next().expect("patches are nonempty");
        let hi = *by_u.keys().next_back().expect("patches are nonempty");
        let transverse = by_u
            .into_iter()
            .map(|(u, count)| Ok((u, count, r2(r as i64 - (u as i64).pow(2))?)))
            .collect::<Result<Vec<_>>>()?;
        out.push(PatchStats {
            key,
            size: members.len(),
            coord_span: (hi - lo + 1) as u32,
            transverse,
        });
    }
    Ok(out)
}

/// `Γ_αβ = |α| · m_r(k, β)` with `k` the canonical representative of `α`.
pub fn gamma(alpha: &Orbit, beta: &Orbit, n: u32) -> Result<u64> {
    check_n(n)?;
    alpha.check_truncation(n)?;
    beta.check_truncation(n)?;
    let k = alpha.canonical_mode();
    let m = shell_slice(k, beta.norm_sq(), n)?
        .into_iter()
        .filter(|&p| canonical_unchecked(p) == beta.canonical())
        .count() as u64;
    Ok(alpha.size() as u64 * m)
}

/// One row `β ↦ Γ_αβ` of the incidence matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct IncidenceRecord {
    pub target: OrbitLabel,
    pub target_size: usize,
    /// `(β, Γ_αβ)` for every source orbit, in catalog order.
    pub per_source: Vec<(OrbitLabel, u64)>,
    /// `Σ_β √Γ_αβ`, accumulated in catalog order.
    pub row_sqrt_sum: f64,
}

impl IncidenceRecord {
    pub fn total(&self) -> u64 {
        self.per_source.iter().map(|&(_, g)| g).sum()
    }
}

/// Row of the incidence matrix for the orbit at `index` in `catalog`.
pub fn incidence_row_at(catalog: &OrbitCatalog, index: usize) -> IncidenceRecord {
    let alpha = &catalog.orbits()[index];
    let k = alpha.canonical_mode();
    let mut counts = vec![0u64; catalog.len()];
    for p in catalog.lattice().sources(k) {
        let beta = catalog.index_of_mode(p).expect("sources lie in the lattice");
        counts[beta] += 1;
    }
    let size = alpha.size() as u64;
    let per_source: Vec<_> = catalog
        .orbits()
        .iter()
        .zip(&counts)
        .map(|(beta, &m)| (beta.label(), size * m))
        .collect();
    let row_sqrt_sum = per_source.iter().map(|&(_, g)| (g as f64).sqrt()).sum();
    IncidenceRecord {
        target: alpha.label(),
        target_size: alpha.size(),
        per_source,
        row_sqrt_sum,
    }
}

pub fn incidence_row(alpha: &Orbit, n: u32) -> Result<IncidenceRecord> {
    let catalog = OrbitCatalog::new(n)?;
    let index = catalog.index_of_orbit(alpha)?;
    Ok(incidence_row_at(&catalog, index))
}

/// All rows, in catalog order.
pub fn incidence_matrix(catalog: &OrbitCatalog) -> Vec<IncidenceRecord> {
    (0..catalog.len())
        .into_par_iter()
        .map(|i| incidence_row_at(catalog, i))
        .collect()
}

/// `max_α Σ_β √Γ_αβ` for every `N` in `1..=n_max`.
pub fn max_incidence_scan(n_max: u32) -> Result<Vec<(u32, f64)>> {
    check_n(n_max)?;
    (1..=n_max)
        .map(|n| {
            let catalog = OrbitCatalog::new(n)?;
            let max = incidence_matrix(&catalog)
                .iter()
                .map(|r| r.row_sqrt_sum)
                .fold(0.0, f64::max);
            Ok((n, max))
        })
        .collect()
}

/// Least-squares slope of `log value` against `log N` over the points with
/// `N ≥ n_min`. `None` with fewer than two such points.
pub fn growth_exponent(scan: &[(u32, f64)], n_min: u32) -> Option<f64> {
    let pts: Vec<(f64, f64)> = scan
        .iter()
        .filter(|(n, v)| *n >= n_min && *v > 0.0)
        .map(|&(n, v)| ((n as f64).ln(), v.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let len = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / len;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / len;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Some(sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{shell_radii, triad_count_exact};
    use crate::symmetry::orbit_of;

    fn r2_scan(n: i64) -> u64 {
        let lim = (n as f64).sqrt() as i64 + 1;
        let mut c = 0;
        for a in -lim..=lim {
            for b in -lim..=lim {
                if a * a + b * b == n {
                    c += 1;
                }
            }
        }
        c
    }

    #[test]
    fn r2_examples() {
        assert_eq!(r2(0).unwrap(), 1);
        assert_eq!(r2(1).unwrap(), 4);
        assert_eq!(r2(25).unwrap(), 12);
        assert_eq!(r2(3).unwrap(), 0);
        assert!(r2(-1).is_err());
    }

    #[test]
    fn r2_matches_square_scan() {
        for n in 0..=2000 {
            assert_eq!(r2(n).unwrap(), r2_scan(n), "n={n}");
        }
    }

    #[test]
    fn shell_slice_examples() {
        let k = Mode::new(1, 0, 0);
        let s1 = shell_slice(k, 1, 1).unwrap();
        assert_eq!(
            s1,
            vec![Mode::new(0, -1, 0), Mode::new(0, 0, -1), Mode::new(0, 0, 1), Mode::new(0, 1, 0)]
        );
        let s3 = shell_slice(k, 3, 1).unwrap();
        assert_eq!(s3.len(), 4);
        assert!(s3.iter().all(|p| p.0[0] == 1));
        assert!(shell_slice(k, 7, 2).unwrap().is_empty());
        assert!(shell_slice(Mode::new(2, 0, 0), 1, 1).is_err());
    }

    #[test]
    fn face_heights() {
        let (p, k) = (Mode::new(0, 1, 0), Mode::new(1, 0, 0));
        assert_eq!(face_height(p, k, FaceLabel::new(1, 1).unwrap(), 1).unwrap(), 2);
        assert_eq!(face_height(Mode::new(1, 1, 1), k, FaceLabel::new(2, -1).unwrap(), 1).unwrap(), 2);
        assert_eq!(face_height(Mode::new(2, 0, 0), k, FaceLabel::new(1, 1).unwrap(), 1).unwrap(), 0);
        assert!(face_height(Mode::new(3, 0, 0), k, FaceLabel::new(1, 1).unwrap(), 1).is_err());
    }

    #[test]
    fn min_face_examples() {
        let k = Mode::new(1, 0, 0);
        let (f, h) = min_face(Mode::new(0, 1, 0), k, 1).unwrap();
        assert_eq!((f, h), (FaceLabel::new(1, -1).unwrap(), 0));
        let (f, h) = min_face(k, k, 3).unwrap();
        assert_eq!((f, h), (FaceLabel::new(1, 1).unwrap(), 3));
        let (f, h) = min_face(Mode::new(2, 1, 0), Mode::new(2, 0, 0), 2).unwrap();
        assert_eq!((f, h), (FaceLabel::new(2, 1).unwrap(), 1));
        assert_eq!(FaceLabel::new(2, 1).unwrap().to_string(), "(2,+1)");
    }

    #[test]
    fn dyadic_scales() {
        assert_eq!(dyadic_scale(0), 1);
        assert_eq!(dyadic_scale(1), 1);
        assert_eq!(dyadic_scale(3), 2);
        assert_eq!(dyadic_scale(5), 4);
        assert_eq!(dyadic_scale(8), 8);
        assert_eq!(dyadic_scale(15), 8);
    }

    #[test]
    fn patch_decomposition_small() {
        let k = Mode::new(1, 0, 0);
        let patches = patch_decompose(k, 1, 1).unwrap();
        assert_eq!(patches.values().map(Vec::len).sum::<usize>(), 4);
        assert!(patch_decompose(k, 7, 2).unwrap().is_empty());
        for stats in patch_stats(Mode::new(2, 1, 0), 6, 3).unwrap() {
            let h = stats.key.scale;
            assert!(stats.coord_span <= 2 * h);
            for (_, count, bound) in &stats.transverse {
                assert!(*count as u64 <= *bound);
            }
        }
    }

    #[test]
    fn gamma_examples() {
        let a = orbit_of(Mode::new(1, 0, 0)).unwrap();
        let b = orbit_of(Mode::new(1, 1, 1)).unwrap();
        let c = orbit_of(Mode::new(1, 1, 0)).unwrap();
        assert_eq!(gamma(&a, &b, 1).unwrap(), 24);
        assert_eq!(gamma(&a, &a, 1).unwrap(), 24);
        assert_eq!(gamma(&a, &c, 1).unwrap(), 48);
        let far = orbit_of(Mode::new(2, 0, 0)).unwrap();
        assert!(matches!(gamma(&a, &far, 1), Err(Error::Domain(_))));
    }

    #[test]
    fn incidence_row_totals() {
        let a = orbit_of(Mode::new(1, 0, 0)).unwrap();
        let row = incidence_row(&a, 1).unwrap();
        assert_eq!(row.per_source.len(), 3);
        assert_eq!(row.total(), 96);
        let expect = 24f64.sqrt() + 48f64.sqrt() + 24f64.sqrt();
        assert!((row.row_sqrt_sum - expect).abs() < 1e-14);

        let cat = OrbitCatalog::new(4).unwrap();
        for rec in incidence_matrix(&cat) {
            let k = Mode(rec.target.0.map(|v| v as i32));
            assert_eq!(rec.total(), rec.target_size as u64 * triad_count_exact(k, 4).unwrap());
        }
    }

    #[test]
    fn zero_incidence_contributes_nothing() {
        // (3,3,3) at N=3 cannot reach the opposite corner.
        let cat = OrbitCatalog::new(3).unwrap();
        let i = cat.index_of_label(OrbitLabel([3, 3, 3])).unwrap();
        let rec = incidence_row_at(&cat, i);
        assert!(rec.per_source.iter().any(|&(_, g)| g == 0));
        let nonzero: f64 = rec.per_source.iter().filter(|e| e.1 > 0).map(|e| (e.1 as f64).sqrt()).sum();
        assert_eq!(rec.row_sqrt_sum, nonzero);
    }

    #[test]
    fn scan_shape() {
        let scan = max_incidence_scan(6).unwrap();
        assert_eq!(scan.len(), 6);
        assert!(scan.windows(2).all(|w| w[1].1 >= w[0].1));
        assert!(growth_exponent(&scan, 4).unwrap() < 4.2);
        assert!(growth_exponent(&scan[..1], 1).is_none());
    }

    #[test]
    fn slices_cover_sources() {
        let n = 3;
        let lattice = Lattice::new(n).unwrap();
        for k in lattice.iter().step_by(7) {
            let total: usize = shell_radii(n)
                .unwrap()
                .into_iter()
                .map(|r| shell_slice(k, r, n).unwrap().len())
                .sum();
            assert_eq!(total as u64, triad_count_exact(k, n).unwrap());
        }
    }
}
