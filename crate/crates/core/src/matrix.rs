//! Column-sparse matrices over `R`.

use serde::Serialize;

use crate::ring::{RingElement, Specialization, UnitMonomial};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RMatrix {
    rows: usize,
    cols: usize,
    /// Per column, `(row, entry)` pairs sorted by row, no zero entries.
    data: Vec<Vec<(usize, RingElement)>>,
}

impl RMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![Vec::new(); cols] }
    }

    pub fn identity(n: usize) -> Self {
        let data = (0..n).map(|i| vec![(i, RingElement::one())]).collect();
        Self { rows: n, cols: n, data }
    }

    /// Builds from `(row, col, entry)` triplets; repeated positions are summed.
    pub fn from_triplets(
        rows: usize,
        cols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, RingElement)>,
    ) -> Self {
        let mut m = Self::zeros(rows, cols);
        for (r, c, e) in triplets {
            assert!(r < rows && c < cols, "triplet out of bounds");
            m.data[c].push((r, e));
        }
        for col in &mut m.data {
            normalize_col(col);
        }
        m
    }

    pub fn from_columns(rows: usize, cols: Vec<Vec<(usize, RingElement)>>) -> Self {
        let mut data = cols;
        for col in &mut data {
            assert!(col.iter().all(|(r, _)| *r < rows), "row out of bounds");
            normalize_col(col);
        }
        Self { rows, cols: data.len(), data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, c: usize) -> &[(usize, RingElement)] {
        &self.data[c]
    }

    pub fn get(&self, r: usize, c: usize) -> RingElement {
        self.data[c]
            .binary_search_by_key(&r, |e| e.0)
            .map(|k| self.data[c][k].1.clone())
            .unwrap_or_default()
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &RingElement)> {
        self.data
            .iter()
            .enumerate()
            .flat_map(|(c, col)| col.iter().map(move |(r, e)| (*r, c, e)))
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Vec::is_empty)
    }

    pub fn scale(&self, u: UnitMonomial) -> Self {
        if u.is_one() {
            return self.clone();
        }
        let data = self
            .data
            .iter()
            .map(|col| col.iter().map(|(r, e)| (*r, e.scale(u))).collect())
            .collect();
        Self { rows: self.rows, cols: self.cols, data }
    }

    /// Scales column `c` by `col_scale[c]` and row `r` by `row_scale[r]`.
    pub fn scale_diag(&self, row_scale: &[UnitMonomial], col_scale: &[UnitMonomial]) -> Self {
        let data = self
            .data
            .iter()
            .enumerate()
            .map(|(c, col)| {
                col.iter().map(|(r, e)| (*r, e.scale(row_scale[*r] * col_scale[c]))).collect()
            })
            .collect();
        Self { rows: self.rows, cols: self.cols, data }
    }

    /// `self ∘ rhs`.
    pub fn compose(&self, rhs: &RMatrix) -> Self {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in composition");
        let data = rhs
            .data
            .iter()
            .map(|col| {
                let mut acc: Vec<(usize, RingElement)> = Vec::new();
                for (k, e) in col {
                    for (r, f) in &self.data[*k] {
                        acc.push((*r, f * e));
                    }
                }
                normalize_col(&mut acc);
                acc
            })
            .collect();
        Self { rows: self.rows, cols: rhs.cols, data }
    }

    pub fn add(&self, rhs: &RMatrix) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "dimension mismatch in sum");
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| {
                let mut col: Vec<_> = a.iter().chain(b.iter()).cloned().collect();
                normalize_col(&mut col);
                col
            })
            .collect();
        Self { rows: self.rows, cols: self.cols, data }
    }

    pub fn neg(&self) -> Self {
        self.scale(UnitMonomial::MINUS_ONE)
    }

    pub fn sub(&self, rhs: &RMatrix) -> Self {
        self.add(&rhs.neg())
    }

    /// Returns `c` with `self = c · other` if such a unit exists.
    pub fn unit_ratio(&self, other: &RMatrix) -> Option<UnitMonomial> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return None;
        }
        let mut ratio = None;
        for (r, c, e) in other.entries() {
            if let Some(u) = e.as_unit() {
                let cand = (&self.get(r, c) * &RingElement::from(u.inv())).as_unit()?;
                ratio = Some(cand);
                break;
            }
        }
        let ratio = match ratio {
            Some(u) => u,
            None if self.is_zero() && other.is_zero() => UnitMonomial::ONE,
            None => return None,
        };
        (*self == other.scale(ratio)).then_some(ratio)
    }

    /// Dense integer image under a specialization.
    pub fn specialize(&self, s: Specialization) -> Vec<Vec<i64>> {
        let mut out = vec![vec![0i64; self.cols]; self.rows];
        for (r, c, e) in self.entries() {
            out[r][c] = e.specialize(s);
        }
        out
    }

    /// Block sum `[[self, 0], [0, other]]`.
    pub fn direct_sum(&self, other: &RMatrix) -> Self {
        let mut data = self.data.clone();
        data.extend(
            other.data.iter().map(|col| col.iter().map(|(r, e)| (r + self.rows, e.clone())).collect()),
        );
        Self { rows: self.rows + other.rows, cols: self.cols + other.cols, data }
    }

    /// Transfers entries into a larger matrix at the given offsets.
    pub fn embed(&self, rows: usize, cols: usize, row_off: usize, col_off: usize) -> Self {
        let mut m = Self::zeros(rows, cols);
        for (c, col) in self.data.iter().enumerate() {
            m.data[c + col_off] = col.iter().map(|(r, e)| (r + row_off, e.clone())).collect();
        }
        m
    }
}

fn normalize_col(col: &mut Vec<(usize, RingElement)>) {
    col.sort_by_key(|e| e.0);
    let mut out: Vec<(usize, RingElement)> = Vec::with_capacity(col.len());
    for (r, e) in col.drain(..) {
        match out.last_mut() {
            Some((lr, le)) if *lr == r => *le += &e,
            _ => out.push((r, e)),
        }
    }
    out.retain(|(_, e)| !e.is_zero());
    *col = out;
}

#[cfg(test)]
mod tests {
    use super::*;

    fn re(s: &str) -> RingElement {
        s.parse().unwrap()
    }

    #[test]
    fn compose_and_ratio() {
        let a = RMatrix::from_triplets(2, 2, [(0, 0, re("1")), (1, 0, re("XY")), (1, 1, re("Z"))]);
        let b = RMatrix::from_triplets(2, 1, [(0, 0, re("-1")), (1, 0, re("Y"))]);
        let ab = a.compose(&b);
        assert_eq!(ab.get(0, 0), re("-1"));
        assert_eq!(ab.get(1, 0), re("-XY+YZ"));
        assert_eq!(a.scale(UnitMonomial::Z).unit_ratio(&a), Some(UnitMonomial::Z));
        assert_eq!(a.unit_ratio(&RMatrix::identity(2)), None);
        assert!(a.sub(&a).is_zero());
    }

    #[test]
    fn duplicate_triplets_sum() {
        let m = RMatrix::from_triplets(1, 1, [(0, 0, re("1")), (0, 0, re("XY"))]);
        assert_eq!(m.get(0, 0), re("1+XY"));
        assert_eq!(m.unit_ratio(&m), None);
    }
}
