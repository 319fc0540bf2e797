//! Integer specialization of `R`-complexes, Smith normal form, bigraded
//! homology, Euler characteristics and the Jones state-sum oracle.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::linkdiag::PdCode;
use crate::polycomplex::ChainComplexR;
use crate::ring::Specialization;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HomologyError {
    #[error("differential entry ({row}, {col}) in degree {t} joins q-degrees {q_from} and {q_to}")]
    NotQHomogeneous { t: i64, row: usize, col: usize, q_from: i64, q_to: i64 },
    #[error("specialized differential does not square to zero in degree {t}, q = {q}")]
    NotComplex { t: i64, q: i64 },
}

/// Laurent polynomial in `q` with integer coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, i64>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(coeff: i64, exp: i64) -> Self {
        let mut p = Self::zero();
        p.add_term(exp, coeff);
        p
    }

    pub fn q_plus_q_inv() -> Self {
        Self::monomial(1, 1) + Self::monomial(1, -1)
    }

    pub fn add_term(&mut self, exp: i64, coeff: i64) {
        if coeff == 0 {
            return;
        }
        let e = self.terms.entry(exp).or_insert(0);
        *e += coeff;
        if *e == 0 {
            self.terms.remove(&exp);
        }
    }

    pub fn coeff(&self, exp: i64) -> i64 {
        self.terms.get(&exp).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        self.terms.iter().map(|(&e, &c)| (e, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::monomial(1, 0), |acc, _| &acc * self)
    }

    pub fn shift(&self, by: i64) -> Self {
        Self { terms: self.terms.iter().map(|(&e, &c)| (e + by, c)).collect() }
    }
}

impl Add for LaurentPoly {
    type Output = LaurentPoly;
    fn add(mut self, rhs: LaurentPoly) -> LaurentPoly {
        for (e, c) in rhs.terms {
            self.add_term(e, c);
        }
        self
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        Self { terms: self.terms.into_iter().map(|(e, c)| (e, -c)).collect() }
    }
}

impl Sub for LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: LaurentPoly) -> LaurentPoly {
        self + (-rhs)
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (&e1, &c1) in &self.terms {
            for (&e2, &c2) in &rhs.terms {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (&e, &c)) in self.terms.iter().enumerate() {
            let sign = if c < 0 { "-" } else if k > 0 { "+" } else { "" };
            let sep = if k > 0 { " " } else { "" };
            let a = c.abs();
            let mono = match e {
                0 => String::new(),
                1 => "q".into(),
                _ => format!("q^{e}"),
            };
            let body = match (a, mono.is_empty()) {
                (_, true) => a.to_string(),
                (1, false) => mono,
                _ => format!("{a}{mono}"),
            };
            if k > 0 {
                write!(f, "{sep}{sign} {body}")?;
            } else {
                write!(f, "{sign}{body}")?;
            }
        }
        Ok(())
    }
}

impl Serialize for LaurentPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let m: BTreeMap<String, i64> = self.terms.iter().map(|(e, c)| (e.to_string(), *c)).collect();
        m.serialize(s)
    }
}

type IMat = Vec<Vec<i128>>;

fn checked(x: Option<i128>) -> i128 {
    x.expect("integer overflow in Smith normal form")
}

/// Full Smith normal form `U M V = D`, `d_1 | d_2 | …`, `U`, `V` unimodular.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Snf {
    pub u: IMat,
    pub d: IMat,
    pub v: IMat,
}

impl Snf {
    pub fn diagonal(&self) -> Vec<i128> {
        (0..self.d.len().min(self.d.first().map_or(0, Vec::len))).map(|i| self.d[i][i]).filter(|&x| x != 0).collect()
    }
}

fn identity(n: usize) -> IMat {
    (0..n).map(|i| (0..n).map(|j| i128::from(i == j)).collect()).collect()
}

/// `U M V = D` with the smallest-pivot rule and divisibility repair.
pub fn smith_normal_form(m: &[Vec<i64>]) -> Snf {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut a: IMat = m.iter().map(|r| r.iter().map(|&x| i128::from(x)).collect()).collect();
    let mut u = identity(rows);
    let mut v = identity(cols);
    let row_sub = |a: &mut IMat, dst: usize, src: usize, q: i128| {
        for c in 0..a[0].len() {
            a[dst][c] = checked(a[dst][c].checked_sub(checked(q.checked_mul(a[src][c]))));
        }
    };
    let col_sub = |a: &mut IMat, dst: usize, src: usize, q: i128| {
        for row in a.iter_mut() {
            row[dst] = checked(row[dst].checked_sub(checked(q.checked_mul(row[src]))));
        }
    };
    let swap_cols = |a: &mut IMat, i: usize, j: usize| {
        for row in a.iter_mut() {
            row.swap(i, j);
        }
    };
    let mut t = 0;
    while t < rows.min(cols) {
        let pivot = (t..rows)
            .flat_map(|i| (t..cols).map(move |j| (i, j)))
            .filter(|&(i, j)| a[i][j] != 0)
            .min_by_key(|&(i, j)| a[i][j].abs());
        let Some((pi, pj)) = pivot else { break };
        a.swap(t, pi);
        u.swap(t, pi);
        swap_cols(&mut a, t, pj);
        swap_cols(&mut v, t, pj);
        loop {
            let p = a[t][t];
            let mut clean = true;
            for i in t + 1..rows {
                let q = a[i][t] / p;
                if q != 0 {
                    row_sub(&mut a, i, t, q);
                    row_sub(&mut u, i, t, q);
                }
                clean &= a[i][t] == 0;
            }
            for j in t + 1..cols {
                let q = a[t][j] / p;
                if q != 0 {
                    col_sub(&mut a, j, t, q);
                    col_sub(&mut v, j, t, q);
                }
                clean &= a[t][j] == 0;
            }
            if clean {
                let bad = (t + 1..rows).flat_map(|i| (t + 1..cols).map(move |j| (i, j))).find(|&(i, j)| a[i][j] % p != 0);
                match bad {
                    None => break,
                    Some((i, _)) => {
                        // row t += row i brings a non-multiple into the pivot row
                        row_sub(&mut a, t, i, -1);
                        row_sub(&mut u, t, i, -1);
                        continue;
                    }
                }
            }
            let next = (t..rows)
                .map(|i| (i, t))
                .chain((t..cols).map(|j| (t, j)))
                .filter(|&(i, j)| a[i][j] != 0)
                .min_by_key(|&(i, j)| a[i][j].abs())
                .expect("pivot row or column is nonzero");
            a.swap(t, next.0);
            u.swap(t, next.0);
            swap_cols(&mut a, t, next.1);
            swap_cols(&mut v, t, next.1);
        }
        if a[t][t] < 0 {
            a[t].iter_mut().for_each(|x| *x = -*x);
            u[t].iter_mut().for_each(|x| *x = -*x);
        }
        t += 1;
    }
    Snf { u, d: a, v }
}

/// Nonzero diagonal of some diagonalization of `m` (absolute values); the
/// cokernel of `m` is `Z^{rows−len} ⊕ ⊕ Z/d_i`.
pub fn diagonal_entries(m: &[Vec<i64>]) -> Vec<i128> {
    let mut a: IMat = m.iter().map(|r| r.iter().map(|&x| i128::from(x)).collect()).collect();
    a.retain(|r| r.iter().any(|&x| x != 0));
    let mut diag = Vec::new();
    loop {
        let ncols = a.first().map_or(0, Vec::len);
        if a.is_empty() || ncols == 0 {
            break;
        }
        let mut best: Option<(usize, usize)> = None;
        'scan: for (i, row) in a.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                if x != 0 && best.is_none_or(|(bi, bj)| x.abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                    if x.abs() == 1 {
                        break 'scan;
                    }
                }
            }
        }
        let Some((mut pi, mut pj)) = best else { break };
        loop {
            let p = a[pi][pj];
            let mut clean = true;
            let prow = a[pi].clone();
            for (i, row) in a.iter_mut().enumerate() {
                if i == pi || row[pj] == 0 {
                    continue;
                }
                let q = row[pj] / p;
                if q != 0 {
                    for (x, &y) in row.iter_mut().zip(&prow) {
                        if y != 0 {
                            *x = checked(x.checked_sub(checked(q.checked_mul(y))));
                        }
                    }
                }
                clean &= row[pj] == 0;
            }
            if p.abs() != 1 {
                for j in 0..a[pi].len() {
                    if j == pj || a[pi][j] == 0 {
                        continue;
                    }
                    let q = a[pi][j] / p;
                    if q != 0 {
                        for row in a.iter_mut() {
                            if row[pj] != 0 {
                                row[j] = checked(row[j].checked_sub(checked(q.checked_mul(row[pj]))));
                            }
                        }
                    }
                    clean &= a[pi][j] == 0;
                }
            }
            if clean {
                break;
            }
            let (ni, nj) = (0..a.len())
                .map(|i| (i, pj))
                .chain((0..a[pi].len()).map(|j| (pi, j)))
                .filter(|&(i, j)| a[i][j] != 0)
                .min_by_key(|&(i, j)| a[i][j].abs())
                .expect("pivot row or column is nonzero");
            pi = ni;
            pj = nj;
        }
        diag.push(a[pi][pj].abs());
        a.swap_remove(pi);
        for row in a.iter_mut() {
            row.swap_remove(pj);
        }
        a.retain(|r| r.iter().any(|&x| x != 0));
    }
    diag
}

/// Prime-power factors of `n`, by increasing prime.
pub fn prime_powers(mut n: u128) -> Vec<u128> {
    let mut out = Vec::new();
    let mut p = 2u128;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut pk = 1;
            while n.is_multiple_of(p) {
                n /= p;
                pk *= p;
            }
            out.push(pk);
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// One q-degree slice of a specialized complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QBlock {
    pub q: i64,
    /// Ranks `dims[k]` of degree `t_min + k`.
    pub dims: Vec<usize>,
    /// `diffs[k]`: dense `dims[k+1] × dims[k]` matrix.
    pub diffs: Vec<Vec<Vec<i64>>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecializedComplex {
    pub t_min: i64,
    pub blocks: Vec<QBlock>,
}

/// Evaluates entries at `s` and splits by q-degree.
pub fn specialize_complex(c: &ChainComplexR, s: Specialization) -> Result<SpecializedComplex, HomologyError> {
    let nt = c.modules.len();
    let mut index: Vec<BTreeMap<i64, usize>> = Vec::with_capacity(nt);
    let mut pos: Vec<Vec<usize>> = Vec::with_capacity(nt);
    let mut qs: BTreeMap<i64, ()> = BTreeMap::new();
    for m in &c.modules {
        let mut counts: BTreeMap<i64, usize> = BTreeMap::new();
        let mut p = Vec::with_capacity(m.len());
        for g in m {
            let e = counts.entry(g.q).or_insert(0);
            p.push(*e);
            *e += 1;
            qs.insert(g.q, ());
        }
        index.push(counts);
        pos.push(p);
    }
    let mut blocks: Vec<QBlock> = qs
        .keys()
        .map(|&q| {
            let dims: Vec<usize> = index.iter().map(|m| m.get(&q).copied().unwrap_or(0)).collect();
            let diffs = (0..nt.saturating_sub(1)).map(|k| vec![vec![0i64; dims[k]]; dims[k + 1]]).collect();
            QBlock { q, dims, diffs }
        })
        .collect();
    let block_of: BTreeMap<i64, usize> = qs.keys().enumerate().map(|(i, &q)| (q, i)).collect();
    for (k, d) in c.diffs.iter().enumerate() {
        for (row, col, e) in d.entries() {
            let (q_from, q_to) = (c.modules[k][col].q, c.modules[k + 1][row].q);
            if q_from != q_to {
                return Err(HomologyError::NotQHomogeneous { t: c.t_min + k as i64, row, col, q_from, q_to });
            }
            let v = e.specialize(s);
            if v != 0 {
                let b = &mut blocks[block_of[&q_from]];
                b.diffs[k][pos[k + 1][row]][pos[k][col]] = v;
            }
        }
    }
    Ok(SpecializedComplex { t_min: c.t_min, blocks })
}

/// Homology at one bidegree.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct HomologyGroup {
    pub free: usize,
    /// Prime-power elementary divisors, increasing.
    pub torsion: Vec<u128>,
}

impl HomologyGroup {
    pub fn is_zero(&self) -> bool {
        self.free == 0 && self.torsion.is_empty()
    }

    pub fn two_torsion(&self) -> usize {
        self.torsion.iter().filter(|&&d| d % 2 == 0).count()
    }
}

impl fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.free > 0 {
            parts.push(if self.free == 1 { "Z".to_string() } else { format!("Z^{}", self.free) });
        }
        let mut counts: BTreeMap<u128, usize> = BTreeMap::new();
        for &d in &self.torsion {
            *counts.entry(d).or_insert(0) += 1;
        }
        for (d, k) in counts {
            parts.push(if k == 1 { format!("Z{d}") } else { format!("Z{d}^{k}") });
        }
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join("+"))
        }
    }
}

/// `(t, q) ↦` homology group, zero groups omitted.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BigradedHomology {
    pub groups: BTreeMap<(i64, i64), HomologyGroup>,
}

impl BigradedHomology {
    pub fn get(&self, t: i64, q: i64) -> HomologyGroup {
        self.groups.get(&(t, q)).cloned().unwrap_or_default()
    }

    pub fn shift_q(&self, by: i64) -> Self {
        Self { groups: self.groups.iter().map(|(&(t, q), g)| ((t, q + by), g.clone())).collect() }
    }

    /// `Σ (−1)^t rank H^{t,q} q^q`.
    pub fn euler(&self) -> LaurentPoly {
        let mut p = LaurentPoly::zero();
        for (&(t, q), g) in &self.groups {
            let sign = if t.rem_euclid(2) == 0 { 1 } else { -1 };
            p.add_term(q, sign * g.free as i64);
        }
        p
    }

    /// `dim H^{t,q}(C ⊗ F_2) = free + #2-torsion(H^{t,q}) + #2-torsion(H^{t+1,q})`.
    pub fn mod2_dims(&self) -> BTreeMap<(i64, i64), usize> {
        let mut out: BTreeMap<(i64, i64), usize> = BTreeMap::new();
        for (&(t, q), g) in &self.groups {
            *out.entry((t, q)).or_insert(0) += g.free + g.two_torsion();
            if g.two_torsion() > 0 {
                *out.entry((t - 1, q)).or_insert(0) += g.two_torsion();
            }
        }
        out.retain(|_, v| *v > 0);
        out
    }

    pub fn to_json(&self, variant: &str) -> Value {
        let homology: Vec<Value> = self
            .groups
            .iter()
            .map(|(&(t, q), g)| json!({ "t": t, "q": q, "free": g.free, "torsion": g.torsion }))
            .collect();
        json!({ "variant": variant, "homology": homology, "euler": self.euler() })
    }

    /// Poincaré table: rows q (descending), columns t.
    pub fn table(&self) -> String {
        if self.groups.is_empty() {
            return "0\n".into();
        }
        let ts: Vec<i64> = {
            let lo = self.groups.keys().map(|k| k.0).min().expect("nonempty");
            let hi = self.groups.keys().map(|k| k.0).max().expect("nonempty");
            (lo..=hi).collect()
        };
        let mut qs: Vec<i64> = self.groups.keys().map(|k| k.1).collect();
        qs.sort_unstable();
        qs.dedup();
        qs.reverse();
        let cell = |t: i64, q: i64| {
            let g = self.get(t, q);
            if g.is_zero() {
                ".".to_string()
            } else {
                g.to_string()
            }
        };
        let width = ts
            .iter()
            .flat_map(|&t| qs.iter().map(move |&q| (t, q)))
            .map(|(t, q)| cell(t, q).chars().count())
            .chain(ts.iter().map(|t| t.to_string().len()))
            .max()
            .unwrap_or(1);
        let mut s = format!("{:>5} |", "q\\t");
        for t in &ts {
            s += &format!(" {:>width$}", t);
        }
        s.push('\n');
        for q in &qs {
            s += &format!("{:>5} |", q);
            for &t in &ts {
                s += &format!(" {:>width$}", cell(t, *q));
            }
            s.push('\n');
        }
        s
    }
}

/// Homology of a specialized complex from diagonalized differentials.
pub fn homology(c: &SpecializedComplex) -> Result<BigradedHomology, HomologyError> {
    type BlockGroups = Vec<((i64, i64), HomologyGroup)>;
    let per_block = crate::par_map(&c.blocks, |b| -> Result<BlockGroups, HomologyError> {
        for k in 1..b.diffs.len() {
            if !is_zero_product(&b.diffs[k], &b.diffs[k - 1], b.dims[k - 1]) {
                return Err(HomologyError::NotComplex { t: c.t_min + k as i64 - 1, q: b.q });
            }
        }
        let diags: Vec<Vec<i128>> = b.diffs.iter().map(|d| diagonal_entries(d)).collect();
        let mut out = Vec::new();
        for k in 0..b.dims.len() {
            let rank_out = if k < diags.len() { diags[k].len() } else { 0 };
            let (rank_in, torsion) = if k > 0 {
                let mut tor: Vec<u128> =
                    diags[k - 1].iter().filter(|&&d| d > 1).flat_map(|&d| prime_powers(d as u128)).collect();
                tor.sort_unstable();
                (diags[k - 1].len(), tor)
            } else {
                (0, Vec::new())
            };
            let g = HomologyGroup { free: b.dims[k] - rank_out - rank_in, torsion };
            if !g.is_zero() {
                out.push(((c.t_min + k as i64, b.q), g));
            }
        }
        Ok(out)
    });
    let mut h = BigradedHomology::default();
    for r in per_block {
        h.groups.extend(r?);
    }
    Ok(h)
}

fn is_zero_product(a: &[Vec<i64>], b: &[Vec<i64>], inner_cols: usize) -> bool {
    a.iter().all(|row| {
        (0..inner_cols).all(|j| row.iter().enumerate().map(|(k, &x)| x as i128 * b[k][j] as i128).sum::<i128>() == 0)
    })
}

/// `H(q^{w} C)` at the specialization `s`.
pub fn link_homology(c: &ChainComplexR, s: Specialization, writhe: i64) -> Result<BigradedHomology, HomologyError> {
    Ok(homology(&specialize_complex(c, s)?)?.shift_q(writhe))
}

/// Euler characteristic `Σ (−1)^t q^q` over the generators of `q^w C`.
pub fn euler_of_complex(c: &ChainComplexR, writhe: i64) -> LaurentPoly {
    let mut p = LaurentPoly::zero();
    for (k, m) in c.modules.iter().enumerate() {
        let sign = if (c.t_min + k as i64).rem_euclid(2) == 0 { 1 } else { -1 };
        for g in m {
            p.add_term(g.q + writhe, sign);
        }
    }
    p
}

/// `(−1)^{N_−} q^{N_+ − 2N_−} Σ_r (−1)^{|r|} q^{|r|} (q + q^{−1})^{n(r)}`.
pub fn jones_oracle(pd: &PdCode) -> LaurentPoly {
    let n = pd.n_crossings();
    let loop_value = LaurentPoly::q_plus_q_inv();
    let mut sum = LaurentPoly::zero();
    for r in 0..1usize << n {
        let w = r.count_ones() as i64;
        let sign = if w % 2 == 0 { 1 } else { -1 };
        sum = sum + (&LaurentPoly::monomial(sign, w) * &loop_value.pow(pd.resolve(r).n_circles as u32));
    }
    let (np, nm) = (pd.n_plus() as i64, pd.n_minus() as i64);
    let sign = if nm % 2 == 0 { 1 } else { -1 };
    &LaurentPoly::monomial(sign, np - 2 * nm) * &sum
}

/// `dim_{F_2} H^{t,q}` computed directly from ranks over `F_2`.
pub fn mod2_dims_direct(c: &SpecializedComplex) -> BTreeMap<(i64, i64), usize> {
    let mut out = BTreeMap::new();
    for b in &c.blocks {
        let ranks: Vec<usize> = b.diffs.iter().map(|d| rank_mod2(d)).collect();
        for k in 0..b.dims.len() {
            let r_out = ranks.get(k).copied().unwrap_or(0);
            let r_in = if k > 0 { ranks[k - 1] } else { 0 };
            let dim = b.dims[k] - r_out - r_in;
            if dim > 0 {
                out.insert((c.t_min + k as i64, b.q), dim);
            }
        }
    }
    out
}

fn rank_mod2(m: &[Vec<i64>]) -> usize {
    let mut rows: Vec<Vec<bool>> = m.iter().map(|r| r.iter().map(|x| x.rem_euclid(2) == 1).collect()).collect();
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&i| rows[i][c]) else { continue };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != rank && row[c] {
                for (x, &y) in row.iter_mut().zip(&pivot) {
                    *x ^= y;
                }
            }
        }
        rank += 1;
    }
    rank
}
