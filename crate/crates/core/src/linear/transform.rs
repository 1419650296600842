use std::collections::{BTreeMap, BTreeSet};

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{Mode, PhotonState, TimeWindow, PRUNE};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Column {
    /// Image of the input mode, sorted by output mode.
    Image(Vec<(Mode, Complex64)>),
    /// The input mode is mapped outside the time window.
    Overflow { path: String, slot: i64, window: u32 },
}

/// Linear, possibly lossy, map on the single-photon mode space.
///
/// Stored column by column: each mode in the domain carries its image.
/// Modes outside the domain pass through unchanged, so an empty transform is
/// the identity. Every optical component and every circuit reduces to one of
/// these.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ModeTransform {
    columns: BTreeMap<Mode, Column>,
    lossless: bool,
}

/// Accumulates entries column by column.
#[derive(Debug, Default)]
pub struct TransformBuilder {
    columns: BTreeMap<Mode, Column>,
    lossless: bool,
}

impl TransformBuilder {
    pub fn new(lossless: bool) -> Self {
        TransformBuilder { columns: BTreeMap::new(), lossless }
    }

    /// Declares `input` as part of the domain even if its image is empty
    /// (the amplitude is fully absorbed).
    pub fn touch(&mut self, input: &Mode) -> &mut Self {
        self.columns.entry(input.clone()).or_insert_with(|| Column::Image(Vec::new()));
        self
    }

    /// Adds `value` to the entry `(output, input)`.
    pub fn add(&mut self, output: Mode, input: &Mode, value: Complex64) -> &mut Self {
        let col = self.columns.entry(input.clone()).or_insert_with(|| Column::Image(Vec::new()));
        if let Column::Image(entries) = col {
            match entries.iter_mut().find(|(m, _)| *m == output) {
                Some((_, v)) => *v += value,
                None => entries.push((output, value)),
            }
        }
        self
    }

    /// Marks `input` as mapped to an out-of-window slot.
    pub fn overflow(&mut self, input: &Mode, slot: i64, window: TimeWindow) -> &mut Self {
        self.columns.insert(input.clone(), Column::Overflow { path: input.path.clone(), slot, window: window.slots() });
        self
    }

    pub fn build(self) -> ModeTransform {
        let columns = self
            .columns
            .into_iter()
            .map(|(m, col)| {
                let col = match col {
                    Column::Image(mut entries) => {
                        entries.retain(|(_, v)| v.norm() >= PRUNE);
                        entries.sort_by(|a, b| a.0.cmp(&b.0));
                        Column::Image(entries)
                    }
                    o => o,
                };
                (m, col)
            })
            .collect();
        ModeTransform { columns, lossless: self.lossless }
    }
}

impl ModeTransform {
    pub fn identity() -> Self {
        ModeTransform { columns: BTreeMap::new(), lossless: true }
    }

    /// Whether the component that produced this map was configured without
    /// loss. Composite maps are lossless only if every factor is.
    pub fn is_lossless(&self) -> bool {
        self.lossless
    }

    /// Input modes with an explicit column.
    pub fn domain(&self) -> impl Iterator<Item = &Mode> {
        self.columns.keys()
    }

    /// Domain plus every mode reached by a column.
    pub fn touched_modes(&self) -> BTreeSet<Mode> {
        let mut out: BTreeSet<Mode> = self.columns.keys().cloned().collect();
        for col in self.columns.values() {
            if let Column::Image(entries) = col {
                out.extend(entries.iter().map(|(m, _)| m.clone()));
            }
        }
        out
    }

    /// Nonzero entries as `(output, input, value)`. Pass-through modes are not
    /// listed.
    pub fn entries(&self) -> impl Iterator<Item = (&Mode, &Mode, Complex64)> {
        self.columns.iter().flat_map(|(input, col)| match col {
            Column::Image(entries) => entries.iter().map(move |(o, v)| (o, input, *v)).collect::<Vec<_>>(),
            Column::Overflow { .. } => Vec::new(),
        })
    }

    /// Matrix element `⟨output|T|input⟩`, including the implicit identity
    /// outside the domain.
    pub fn get(&self, output: &Mode, input: &Mode) -> Complex64 {
        match self.columns.get(input) {
            None => {
                if output == input {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::default()
                }
            }
            Some(Column::Image(entries)) => {
                entries.iter().find(|(m, _)| m == output).map(|(_, v)| *v).unwrap_or_default()
            }
            Some(Column::Overflow { .. }) => Complex64::default(),
        }
    }

    fn column_into(&self, input: &Mode, amp: Complex64, acc: &mut BTreeMap<Mode, Complex64>) -> Result<()> {
        match self.columns.get(input) {
            None => *acc.entry(input.clone()).or_default() += amp,
            Some(Column::Image(entries)) => {
                for (out, v) in entries {
                    *acc.entry(out.clone()).or_default() += v * amp;
                }
            }
            Some(Column::Overflow { path, slot, window }) => {
                return Err(Error::TimeWindowOverflow { path: path.clone(), slot: *slot, window: *window })
            }
        }
        Ok(())
    }

    /// `out[m'] = Σ_m T[m', m] · s[m]`
    pub fn apply(&self, state: &PhotonState) -> Result<PhotonState> {
        let mut acc = BTreeMap::new();
        for (m, a) in state.iter() {
            self.column_into(m, *a, &mut acc)?;
        }
        Ok(PhotonState::from_map(acc))
    }

    /// The map that applies `first`, then `self`.
    pub fn after(&self, first: &ModeTransform) -> ModeTransform {
        let domain: BTreeSet<&Mode> = first.columns.keys().chain(self.columns.keys()).collect();
        let mut columns = BTreeMap::new();
        for input in domain {
            let mid = match first.columns.get(input) {
                None => vec![(input.clone(), Complex64::new(1.0, 0.0))],
                Some(Column::Image(entries)) => entries.clone(),
                Some(o @ Column::Overflow { .. }) => {
                    columns.insert(input.clone(), o.clone());
                    continue;
                }
            };
            let mut acc = BTreeMap::new();
            let mut overflow = None;
            for (m, a) in &mid {
                if let Err(Error::TimeWindowOverflow { path, slot, window }) = self.column_into(m, *a, &mut acc) {
                    overflow = Some(Column::Overflow { path, slot, window });
                    break;
                }
            }
            let col = overflow.unwrap_or_else(|| {
                Column::Image(acc.into_iter().filter(|(_, v)| v.norm() >= PRUNE).collect())
            });
            columns.insert(input.clone(), col);
        }
        ModeTransform { columns, lossless: self.lossless && first.lossless }
    }

    /// Dense matrix `M[j][k] = T[basis[j], basis[k]]`.
    ///
    /// The basis must be closed under the map: every nonzero image of a basis
    /// mode has to be in the basis, otherwise amplitude would be silently
    /// dropped.
    pub fn dense_matrix(&self, basis: &[Mode]) -> Result<DMatrix<Complex64>> {
        self.dense_block(basis, basis)
    }

    /// Rectangular block `M[j][k] = T[rows[j], cols[k]]`. Every image of a
    /// column mode must be listed in `rows`.
    pub fn dense_block(&self, rows: &[Mode], cols: &[Mode]) -> Result<DMatrix<Complex64>> {
        let index: BTreeMap<&Mode, usize> = rows.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let mut mat = DMatrix::<Complex64>::zeros(rows.len(), cols.len());
        for (k, input) in cols.iter().enumerate() {
            for (out, v) in self.image(input)? {
                let j = *index.get(&out).ok_or(Error::BasisIncomplete(out))?;
                mat[(j, k)] = v;
            }
        }
        Ok(mat)
    }

    /// Nonzero entries of the column of `input`.
    pub fn image(&self, input: &Mode) -> Result<Vec<(Mode, Complex64)>> {
        match self.columns.get(input) {
            None => Ok(vec![(input.clone(), Complex64::new(1.0, 0.0))]),
            Some(Column::Image(entries)) => Ok(entries.clone()),
            Some(Column::Overflow { path, slot, window }) => {
                Err(Error::TimeWindowOverflow { path: path.clone(), slot: *slot, window: *window })
            }
        }
    }

    /// Largest singular value over the touched modes (the identity part
    /// contributes 1 when the domain leaves anything untouched). Overflowing
    /// columns are left out.
    pub fn operator_norm(&self) -> f64 {
        let rows: Vec<Mode> = self.touched_modes().into_iter().collect();
        let cols: Vec<Mode> =
            rows.iter().filter(|m| !matches!(self.columns.get(*m), Some(Column::Overflow { .. }))).cloned().collect();
        if cols.is_empty() {
            return 1.0;
        }
        self.dense_block(&rows, &cols).map(|m| m.singular_values().max()).unwrap_or(f64::NAN)
    }

    /// Checks that the nonzero, in-window columns are orthonormal within `tol`:
    /// on the subspace it actually transmits, the map preserves norm.
    pub fn is_isometry_on_support(&self, tol: f64) -> bool {
        let cols: Vec<&Vec<(Mode, Complex64)>> = self
            .columns
            .values()
            .filter_map(|c| match c {
                Column::Image(e) if !e.is_empty() => Some(e),
                _ => None,
            })
            .collect();
        let dot = |a: &Vec<(Mode, Complex64)>, b: &Vec<(Mode, Complex64)>| -> Complex64 {
            a.iter().filter_map(|(m, x)| b.iter().find(|(n, _)| n == m).map(|(_, y)| x.conj() * y)).sum()
        };
        for (i, a) in cols.iter().enumerate() {
            for (j, b) in cols.iter().enumerate().skip(i) {
                let expect = if i == j { 1.0 } else { 0.0 };
                if (dot(a, b) - expect).norm() > tol {
                    return false;
                }
            }
        }
        true
    }

    /// Entrywise comparison, including implicit identity columns.
    pub fn approx_eq(&self, other: &ModeTransform, tol: f64) -> bool {
        let mut modes = self.touched_modes();
        modes.extend(other.touched_modes());
        for input in &modes {
            let ov_a = matches!(self.columns.get(input), Some(Column::Overflow { .. }));
            let ov_b = matches!(other.columns.get(input), Some(Column::Overflow { .. }));
            if ov_a != ov_b {
                return false;
            }
            if ov_a {
                continue;
            }
            for output in &modes {
                if (self.get(output, input) - other.get(output, input)).norm() > tol {
                    return false;
                }
            }
        }
        true
    }
}

/// `t2 ∘ t1`: apply `t1` first.
pub fn compose(t2: &ModeTransform, t1: &ModeTransform) -> ModeTransform {
    t2.after(t1)
}

/// Moves every mode on `from` to `to`, shifting slots by `shift`.
/// Whatever was already on `to` is dropped.
///
/// Used to connect the output fibre of one circuit to the input of the next
/// and to rename shifted output bins back to `(s, l)`.
pub fn relabel(from: &str, to: &str, shift: i64, window: TimeWindow) -> ModeTransform {
    let mut b = TransformBuilder::new(true);
    if from != to {
        for m in window.modes_on(to) {
            b.touch(&m);
        }
    }
    for m in window.modes_on(from) {
        match window.check(to, i64::from(m.slot) + shift) {
            Ok(slot) => {
                b.add(Mode::new(to, slot, m.pol), &m, Complex64::new(1.0, 0.0));
            }
            Err(_) => {
                b.overflow(&m, i64::from(m.slot) + shift, window);
            }
        }
    }
    b.build()
}
