//! JSON state documents and CSV matrix export.
//!
//! State schema: `{"N": n, "modes": [{"k": [k1,k2,k3], "re": [x,y,z], "im": [x,y,z]}, ...]}`
//! with exactly one entry per mode of `Λ_N`.

use super::state::{TruncatedState, Vec3};
use crate::error::{Error, Invariant, Result};
use crate::lattice::{Lattice, Mode};
use crate::scalar::Real;
use crate::symmetry::OrbitLabel;
use ndarray::Array2;
use num_complex::Complex;
use serde::{Deserialize, Serialize};
use std::io::Write;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateEntry {
    pub k: [i32; 3],
    pub re: [f64; 3],
    pub im: [f64; 3],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateDocument {
    #[serde(rename = "N")]
    pub n: u32,
    pub modes: Vec<StateEntry>,
}

impl<T: Real> From<&TruncatedState<T>> for StateDocument {
    fn from(u: &TruncatedState<T>) -> Self {
        let modes = u
            .iter()
            .map(|(k, v)| StateEntry {
                k: k.0,
                re: v.map(|c| c.re.to_f64_lossy()),
                im: v.map(|c| c.im.to_f64_lossy()),
            })
            .collect();
        StateDocument { n: u.n(), modes }
    }
}

impl StateDocument {
    /// Checks coverage of `Λ_N` and every state invariant.
    pub fn into_state<T: Real>(self) -> Result<TruncatedState<T>> {
        let lattice = Lattice::new(self.n)?;
        let mut slots: Vec<Option<Vec3<T>>> = vec![None; lattice.len()];
        for entry in &self.modes {
            let k = Mode(entry.k);
            let Some(i) = lattice.index_of(k) else {
                return Err(Error::Validation {
                    invariant: Invariant::OutOfLattice,
                    mode: k,
                    detail: format!("mode is not in the truncated lattice for N={}", self.n),
                });
            };
            if slots[i].is_some() {
                return Err(Error::Validation {
                    invariant: Invariant::DuplicateMode,
                    mode: k,
                    detail: "mode listed more than once".into(),
                });
            }
            if !entry.re.iter().chain(&entry.im).all(|x| x.is_finite()) {
                return Err(Error::Validation {
                    invariant: Invariant::Finite,
                    mode: k,
                    detail: "non-finite amplitude".into(),
                });
            }
            slots[i] = Some([0, 1, 2].map(|j| Complex::new(T::lit(entry.re[j]), T::lit(entry.im[j]))));
        }
        let mut coeffs = Vec::with_capacity(slots.len());
        for (i, slot) in slots.into_iter().enumerate() {
            match slot {
                Some(v) => coeffs.push(v),
                None => {
                    return Err(Error::Validation {
                        invariant: Invariant::MissingMode,
                        mode: lattice.mode_at(i),
                        detail: "mode absent from state document".into(),
                    })
                }
            }
        }
        let state = TruncatedState::from_coeffs(lattice, coeffs);
        state.validate()?;
        Ok(state)
    }
}

pub fn state_to_json<T: Real>(u: &TruncatedState<T>) -> String {
    serde_json::to_string_pretty(&StateDocument::from(u)).expect("state document serializes")
}

pub fn read_state_json<T: Real>(text: &str) -> Result<TruncatedState<T>> {
    let doc: StateDocument = serde_json::from_str(text)?;
    doc.into_state()
}

/// Square matrix as CSV: a header of orbit labels, then one row per orbit
/// led by its label. Values use shortest round-trip exponent notation.
pub fn write_matrix_csv<T: Real, W: Write>(out: W, labels: &[OrbitLabel], m: &Array2<T>) -> Result<()> {
    if m.dim() != (labels.len(), labels.len()) {
        return Err(Error::Domain(format!(
            "matrix of shape {:?} does not match {} labels",
            m.dim(),
            labels.len()
        )));
    }
    let mut w = csv::Writer::from_writer(out);
    let header = std::iter::once("orbit".to_string()).chain(labels.iter().map(|l| l.to_string()));
    w.write_record(header).map_err(csv_err)?;
    for (label, row) in labels.iter().zip(m.rows()) {
        let rec = std::iter::once(label.to_string()).chain(row.iter().map(|v| format!("{v:e}")));
        w.write_record(rec).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}
