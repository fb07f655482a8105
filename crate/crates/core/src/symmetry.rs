//! The full octahedral group `O_h` acting on `ℤ³` by signed coordinate
//! permutations, and the orbit decomposition of `Λ_N`.

use crate::error::{Error, Result};
use crate::lattice::{check_n, Lattice, Mode};
use std::collections::BTreeSet;
use std::fmt;

/// A signed coordinate permutation: `g·k = (s₁ k_{π(1)}, s₂ k_{π(2)}, s₃ k_{π(3)})`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    perm: [usize; 3],
    signs: [i32; 3],
}

const PERMUTATIONS: [[usize; 3]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];

impl GroupElement {
    pub const IDENTITY: GroupElement = GroupElement {
        perm: [0, 1, 2],
        signs: [1, 1, 1],
    };

    /// `perm` must be a permutation of `{0,1,2}` and `signs` entries `±1`.
    pub fn new(perm: [usize; 3], signs: [i32; 3]) -> Option<Self> {
        let mut seen = [false; 3];
        for &p in &perm {
            if p > 2 || seen[p] {
                return None;
            }
            seen[p] = true;
        }
        signs
            .iter()
            .all(|s| s.abs() == 1)
            .then_some(GroupElement { perm, signs })
    }

    pub fn perm(&self) -> [usize; 3] {
        self.perm
    }

    pub fn signs(&self) -> [i32; 3] {
        self.signs
    }

    #[inline]
    pub fn apply(&self, k: Mode) -> Mode {
        Mode([
            self.signs[0] * k.0[self.perm[0]],
            self.signs[1] * k.0[self.perm[1]],
            self.signs[2] * k.0[self.perm[2]],
        ])
    }

    /// `self ∘ other`, i.e. apply `other` first.
    pub fn compose(&self, other: &GroupElement) -> GroupElement {
        let mut perm = [0; 3];
        let mut signs = [0; 3];
        for i in 0..3 {
            perm[i] = other.perm[self.perm[i]];
            signs[i] = self.signs[i] * other.signs[self.perm[i]];
        }
        GroupElement { perm, signs }
    }
}

/// All 48 elements of `O_h`: 6 permutations times 8 sign patterns.
pub fn group_elements() -> Vec<GroupElement> {
    let mut out = Vec::with_capacity(48);
    for perm in PERMUTATIONS {
        for mask in 0..8u8 {
            let signs = [0, 1, 2].map(|i| if mask >> i & 1 == 1 { -1 } else { 1 });
            out.push(GroupElement { perm, signs });
        }
    }
    out
}

/// Sorted absolute values, largest first: the unique orbit member with
/// `a ≥ b ≥ c ≥ 0`.
pub fn canonical_rep(k: Mode) -> Result<[u32; 3]> {
    if k.is_zero() {
        return Err(Error::Domain("the zero mode has no orbit".into()));
    }
    Ok(canonical_unchecked(k))
}

#[inline]
pub(crate) fn canonical_unchecked(k: Mode) -> [u32; 3] {
    let mut a = k.0.map(|c| c.unsigned_abs());
    a.sort_unstable_by(|x, y| y.cmp(x));
    a
}

/// An `O_h` orbit in `ℤ³ \ {0}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orbit {
    canonical: [u32; 3],
    members: Vec<Mode>,
}

impl Orbit {
    pub fn canonical(&self) -> [u32; 3] {
        self.canonical
    }

    pub fn canonical_mode(&self) -> Mode {
        Mode(self.canonical.map(|c| c as i32))
    }

    /// Lexicographically sorted.
    pub fn members(&self) -> &[Mode] {
        &self.members
    }

    pub fn size(&self) -> usize {
        self.members.len()
    }

    pub fn norm_sq(&self) -> u64 {
        self.canonical.iter().map(|&c| c as u64 * c as u64).sum()
    }

    /// `|k|∞` shared by every member.
    pub fn max_abs(&self) -> u32 {
        self.canonical[0]
    }

    pub fn label(&self) -> OrbitLabel {
        OrbitLabel(self.canonical)
    }

    pub(crate) fn check_truncation(&self, n: u32) -> Result<()> {
        if self.max_abs() > n {
            return Err(Error::Domain(format!(
                "orbit {} does not belong to the truncation N={n}",
                self.label()
            )));
        }
        Ok(())
    }
}

/// Canonical triple printed as `a,b,c`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrbitLabel(pub [u32; 3]);

impl fmt::Display for OrbitLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.0[0], self.0[1], self.0[2])
    }
}

impl std::str::FromStr for OrbitLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<_> = s.split(',').map(str::trim).collect();
        let bad = || Error::param("orbit", format!("`{s}` is not a triple a,b,c"));
        if parts.len() != 3 {
            return Err(bad());
        }
        let mut t = [0u32; 3];
        for (slot, part) in t.iter_mut().zip(&parts) {
            *slot = part.parse().map_err(|_| bad())?;
        }
        Ok(OrbitLabel(t))
    }
}

pub fn orbit_of(k: Mode) -> Result<Orbit> {
    let canonical = canonical_rep(k)?;
    let members: BTreeSet<Mode> = group_elements().iter().map(|g| g.apply(k)).collect();
    Ok(Orbit {
        canonical,
        members: members.into_iter().collect(),
    })
}

/// One orbit per canonical triple with `1 ≤ a ≤ N`, ordered by `|k|²`
/// ascending and then canonical triple descending.
pub fn enumerate_orbits(n: u32) -> Result<Vec<Orbit>> {
    check_n(n)?;
    let mut triples = Vec::new();
    for a in 1..=n {
        for b in 0..=a {
            for c in 0..=b {
                triples.push([a, b, c]);
            }
        }
    }
    triples.sort_by(|x, y| {
        let nx: u64 = x.iter().map(|&v| v as u64 * v as u64).sum();
        let ny: u64 = y.iter().map(|&v| v as u64 * v as u64).sum();
        nx.cmp(&ny).then_with(|| y.cmp(x))
    });
    triples
        .into_iter()
        .map(|t| orbit_of(Mode(t.map(|v| v as i32))))
        .collect()
}

/// The orbit list for one `N` together with a dense mode → orbit lookup.
#[derive(Clone, Debug)]
pub struct OrbitCatalog {
    lattice: Lattice,
    orbits: Vec<Orbit>,
    /// Indexed by `(a·(N+1) + b)·(N+1) + c` over canonical triples.
    by_canonical: Vec<u32>,
}

impl OrbitCatalog {
    pub fn new(n: u32) -> Result<Self> {
        let lattice = Lattice::new(n)?;
        let orbits = enumerate_orbits(n)?;
        let side = n as usize + 1;
        let mut by_canonical = vec![u32::MAX; side.pow(3)];
        for (i, o) in orbits.iter().enumerate() {
            let [a, b, c] = o.canonical.map(|v| v as usize);
            by_canonical[(a * side + b) * side + c] = i as u32;
        }
        Ok(OrbitCatalog {
            lattice,
            orbits,
            by_canonical,
        })
    }

    pub fn n(&self) -> u32 {
        self.lattice.n()
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn orbits(&self) -> &[Orbit] {
        &self.orbits
    }

    pub fn len(&self) -> usize {
        self.orbits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orbits.is_empty()
    }

    /// Position of the orbit containing `k`; `None` outside `Λ_N`.
    #[inline]
    pub fn index_of_mode(&self, k: Mode) -> Option<usize> {
        if !self.lattice.contains(k) {
            return None;
        }
        let [a, b, c] = canonical_unchecked(k).map(|v| v as usize);
        let side = self.n() as usize + 1;
        Some(self.by_canonical[(a * side + b) * side + c] as usize)
    }

    pub fn index_of_label(&self, label: OrbitLabel) -> Option<usize> {
        let [a, b, c] = label.0;
        if a < b || b < c || a == 0 || a > self.n() {
            return None;
        }
        let side = self.n() as usize + 1;
        let [a, b, c] = [a, b, c].map(|v| v as usize);
        Some(self.by_canonical[(a * side + b) * side + c] as usize)
    }

    pub fn find(&self, label: OrbitLabel) -> Option<&Orbit> {
        self.index_of_label(label).map(|i| &self.orbits[i])
    }

    /// Index of `orbit` in this catalog, rejecting orbits from a larger `N`.
    pub fn index_of_orbit(&self, orbit: &Orbit) -> Result<usize> {
        orbit.check_truncation(self.n())?;
        self.index_of_label(orbit.label())
            .ok_or_else(|| Error::Domain(format!("orbit {} not in catalog", orbit.label())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn group_has_48_distinct_elements_and_is_closed() {
        let g = group_elements();
        assert_eq!(g.len(), 48);
        let set: HashSet<_> = g.iter().copied().collect();
        assert_eq!(set.len(), 48);
        assert!(set.contains(&GroupElement::IDENTITY));
        let probe = Mode::new(1, 2, 3);
        assert_eq!(GroupElement::IDENTITY.apply(probe), probe);
        for a in &g {
            for b in &g {
                let ab = a.compose(b);
                assert!(set.contains(&ab));
                assert_eq!(ab.apply(probe), a.apply(b.apply(probe)));
            }
        }
    }

    #[test]
    fn group_preserves_norms() {
        let k = Mode::new(-3, 1, 2);
        for g in group_elements() {
            let gk = g.apply(k);
            assert_eq!(gk.norm_sq(), k.norm_sq());
            assert_eq!(gk.max_abs(), k.max_abs());
        }
    }

    #[test]
    fn canonical_examples() {
        assert_eq!(canonical_rep(Mode::new(-2, 1, 0)).unwrap(), [2, 1, 0]);
        assert_eq!(canonical_rep(Mode::new(1, 1, 1)).unwrap(), [1, 1, 1]);
        assert_eq!(canonical_rep(Mode::new(0, -3, 0)).unwrap(), [3, 0, 0]);
        assert!(canonical_rep(Mode::new(0, 0, 0)).is_err());
        assert!(orbit_of(Mode::new(0, 0, 0)).is_err());
    }

    #[test]
    fn orbit_sizes() {
        let size = |a, b, c| orbit_of(Mode::new(a, b, c)).unwrap().size();
        assert_eq!(size(1, 0, 0), 6);
        assert_eq!(size(1, 1, 0), 12);
        assert_eq!(size(2, 1, 0), 24);
        assert_eq!(size(3, 2, 1), 48);
        assert_eq!(size(1, 1, 1), 8);
        assert_eq!(size(2, 2, 1), 24);
    }

    #[test]
    fn orbit_members_sorted_and_canonical_invariant() {
        let o = orbit_of(Mode::new(2, -1, 1)).unwrap();
        assert!(o.members().windows(2).all(|w| w[0] < w[1]));
        for &m in o.members() {
            assert_eq!(canonical_rep(m).unwrap(), o.canonical());
        }
    }

    #[test]
    fn orbits_for_small_n() {
        let o1 = enumerate_orbits(1).unwrap();
        let canon: Vec<_> = o1.iter().map(|o| o.canonical()).collect();
        assert_eq!(canon, vec![[1, 0, 0], [1, 1, 0], [1, 1, 1]]);
        let sizes: Vec<_> = o1.iter().map(Orbit::size).collect();
        assert_eq!(sizes, vec![6, 12, 8]);
        assert_eq!(enumerate_orbits(5).unwrap().len(), 55);
        assert_eq!(enumerate_orbits(8).unwrap().len(), 164);
        assert!(enumerate_orbits(0).is_err());
    }

    #[test]
    fn orbit_order_breaks_shell_ties_descending() {
        // |k|² = 9 at N=3 holds (3,0,0) and (2,2,1).
        let o = enumerate_orbits(3).unwrap();
        let nine: Vec<_> = o.iter().filter(|o| o.norm_sq() == 9).map(|o| o.canonical()).collect();
        assert_eq!(nine, vec![[3, 0, 0], [2, 2, 1]]);
    }

    #[test]
    fn catalog_lookup() {
        let cat = OrbitCatalog::new(3).unwrap();
        for (i, o) in cat.orbits().iter().enumerate() {
            for &m in o.members() {
                assert_eq!(cat.index_of_mode(m), Some(i));
            }
            assert_eq!(cat.index_of_label(o.label()), Some(i));
        }
        assert_eq!(cat.index_of_label(OrbitLabel([9, 9, 9])), None);
        assert_eq!(cat.index_of_label(OrbitLabel([1, 2, 0])), None);
        let big = orbit_of(Mode::new(4, 0, 0)).unwrap();
        assert!(cat.index_of_orbit(&big).is_err());
    }

    #[test]
    fn label_parsing() {
        assert_eq!("2,1,0".parse::<OrbitLabel>().unwrap(), OrbitLabel([2, 1, 0]));
        assert_eq!(" 1, 1,1".parse::<OrbitLabel>().unwrap(), OrbitLabel([1, 1, 1]));
        assert!("1,1".parse::<OrbitLabel>().is_err());
        assert!("a,b,c".parse::<OrbitLabel>().is_err());
    }
}
