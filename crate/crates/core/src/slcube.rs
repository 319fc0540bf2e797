//! Covering sl2 cube: twisted exterior algebras on resolution circles,
//! merge/split maps, the ψ_sl2 2-cocycle, sign assignments and `Kom_sl2`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::glcube::{crossing_degree, vertex_base_degree};
use crate::linkdiag::{ArcOrientation, PdCode, PdError, ResolvedState, Saddle, SaddleKind, MAX_CUBE_CROSSINGS};
use crate::matrix::RMatrix;
use crate::polycomplex::{
    BoxShape, ChainComplexR, Cochain1, Cochain2, FreeModule, Gen, HomogeneousPolycomplex, PolyError,
};
use crate::ring::{RingElement, UnitMonomial, Z2Degree};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SlError {
    #[error(transparent)]
    Pd(#[from] PdError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("square ({r}; {k}, {l}) has no unit composite and is not a ladybug")]
    Unsolvable { r: usize, k: usize, l: usize },
    #[error("ψ fails the cocycle condition on the 3-cube ({r}; {a}, {b}, {c})")]
    NotCocycle { r: usize, a: usize, b: usize, c: usize },
    #[error("sign assignment fails on square ({r}; {k}, {l})")]
    SignAssignment { r: usize, k: usize, l: usize },
}

/// Ladybug convention: type X or type Y.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Variant {
    X,
    Y,
}

impl Variant {
    pub fn other(self) -> Self {
        match self {
            Variant::X => Variant::Y,
            Variant::Y => Variant::X,
        }
    }
}

/// Spanning-tree choice for [`solve_sign_assignment`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TreeChoice {
    Min,
    Max,
}

/// `∧_R(a_1, …, a_n)` with `a_i a_j = XY a_j a_i`, `a_i² = 0`; basis words
/// `a_δ` indexed by bit masks, letters in decreasing order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TwistedExteriorModule {
    pub n_circles: usize,
}

impl TwistedExteriorModule {
    pub fn new(n_circles: usize) -> Self {
        assert!(n_circles < 31, "too many circles");
        Self { n_circles }
    }

    pub fn rank(&self) -> usize {
        1 << self.n_circles
    }

    /// `n − 2|δ|`.
    pub fn q(&self, delta: usize) -> i64 {
        self.n_circles as i64 - 2 * delta.count_ones() as i64
    }

    /// Word name with 1-based circle ids, e.g. `a3a1`; `1` for the empty word.
    pub fn name(delta: usize) -> String {
        if delta == 0 {
            return "1".into();
        }
        (0..usize::BITS as usize)
            .rev()
            .filter(|&i| delta >> i & 1 == 1)
            .map(|i| format!("a{}", i + 1))
            .collect()
    }

    /// `a_i · a_δ = XY^{#{j ∈ δ : j > i}} a_{δ ∪ i}`, or zero.
    pub fn left_mul(i: usize, delta: usize) -> Option<(UnitMonomial, usize)> {
        if delta >> i & 1 == 1 {
            return None;
        }
        let above = (delta >> (i + 1)).count_ones() as usize;
        Some((UnitMonomial::xy_pow(above), delta | 1 << i))
    }

    /// Substitutes `a_j ↦ a_{map[j]}` in `a_δ` and renormalizes.
    pub fn substitute(delta: usize, map: &[usize]) -> Option<(UnitMonomial, usize)> {
        let seq: Vec<usize> = (0..map.len()).rev().filter(|&j| delta >> j & 1 == 1).map(|j| map[j]).collect();
        let mut out = 0usize;
        let mut inversions = 0usize;
        for (p, &a) in seq.iter().enumerate() {
            if out >> a & 1 == 1 {
                return None;
            }
            out |= 1 << a;
            inversions += seq[p + 1..].iter().filter(|&&b| b > a).count();
        }
        Some((UnitMonomial::xy_pow(inversions), out))
    }
}

/// `m : p ↦ p|_{a_{c1}, a_{c2} ↦ a_c}` on twisted exterior bases.
pub fn merge_matrix(s: &Saddle) -> RMatrix {
    let SaddleKind::Merge { .. } = s.kind else { panic!("merge_matrix on a split") };
    let cols = (0..1usize << s.n_before)
        .map(|d| match TwistedExteriorModule::substitute(d, &s.relabel) {
            Some((u, e)) => vec![(e, RingElement::from(u))],
            None => Vec::new(),
        })
        .collect();
    RMatrix::from_columns(1 << s.n_after, cols)
}

/// `Δ : p ↦ (a_{i1} + XY a_{i2}) · p|_{a_c ↦ a_{i1}}`.
pub fn split_matrix(s: &Saddle) -> RMatrix {
    let SaddleKind::Split { i1, i2, .. } = s.kind else { panic!("split_matrix on a merge") };
    let cols = (0..1usize << s.n_before)
        .map(|d| {
            let (u, e) = TwistedExteriorModule::substitute(d, &s.relabel).expect("split relabel is injective");
            let mut col = Vec::with_capacity(2);
            for (letter, c) in [(i1, UnitMonomial::ONE), (i2, UnitMonomial::XY)] {
                if let Some((v, f)) = TwistedExteriorModule::left_mul(letter, e) {
                    col.push((f, RingElement::from(u * v * c)));
                }
            }
            col
        })
        .collect();
    RMatrix::from_columns(1 << s.n_after, cols)
}

pub fn saddle_matrix(s: &Saddle) -> RMatrix {
    if s.is_split() {
        split_matrix(s)
    } else {
        merge_matrix(s)
    }
}

/// Ladybug value from the chord picture: walk the circle starting along the
/// tail arc of chord `k`; meeting crossing `l` first on its tail arc gives 1,
/// on its head arc `XY` (type X). Type Y multiplies by `XY`.
pub fn ladybug_psi(pd: &PdCode, r: usize, k: usize, l: usize, orient: ArcOrientation, variant: Variant) -> UnitMonomial {
    let ck = pd.chord(k, orient);
    let cl = pd.chord(l, orient);
    let pass = pd
        .walk(r, k, ck.tail.0)
        .into_iter()
        .find(|p| p.crossing == l)
        .expect("ladybug circle passes both crossings");
    let pair = (pass.from.min(pass.to), pass.from.max(pass.to));
    let x = if pair == cl.tail { UnitMonomial::ONE } else { UnitMonomial::XY };
    match variant {
        Variant::X => x,
        Variant::Y => x * UnitMonomial::XY,
    }
}

/// Both crossings split the same circle of resolution `r` and the double
/// resolution has a single circle again.
pub fn is_ladybug(pd: &PdCode, r: usize, k: usize, l: usize) -> bool {
    let before = pd.resolve(r);
    let x = pd.crossings();
    let same = |c: usize| before.circle_of(x[c][0]) == before.circle_of(x[c][2]);
    let one_circle = before.circle_of(x[k][0]) == before.circle_of(x[l][0]);
    same(k) && same(l) && one_circle && pd.resolve(r | 1 << k | 1 << l).n_circles == before.n_circles
}

/// Applies `m` to a sparse column.
pub(crate) fn apply(m: &RMatrix, v: &[(usize, RingElement)]) -> Vec<(usize, RingElement)> {
    let mut acc: Vec<(usize, RingElement)> = Vec::new();
    for (k, e) in v {
        for (r, f) in m.column(*k) {
            acc.push((*r, f * e));
        }
    }
    acc.sort_by_key(|x| x.0);
    let mut out: Vec<(usize, RingElement)> = Vec::new();
    for (r, e) in acc {
        match out.last_mut() {
            Some((lr, le)) if *lr == r => *le += &e,
            _ => out.push((r, e)),
        }
    }
    out.retain(|(_, e)| !e.is_zero());
    out
}

/// `c` with `u = c · w`, determined from a unit entry of `w`.
pub(crate) fn vector_ratio(u: &[(usize, RingElement)], w: &[(usize, RingElement)]) -> Option<UnitMonomial> {
    let (row, unit) = w.iter().find_map(|(r, e)| e.as_unit().map(|x| (*r, x)))?;
    let ue = u.iter().find(|(r, _)| *r == row)?.1.clone();
    let c = (&ue * &RingElement::from(unit.inv())).as_unit()?;
    let ok = u.len() == w.len() && u.iter().zip(w).all(|(a, b)| a.0 == b.0 && a.1 == b.1.scale(c));
    ok.then_some(c)
}

/// ψ on square `(r; k < l)` from the four saddle maps: the inverse of `c` in
/// `F_{r+e_k, l} F_{r, k} = c · F_{r+e_l, k} F_{r, l}`, or the ladybug value.
#[allow(clippy::too_many_arguments)]
fn psi_from_maps(
    pd: &PdCode,
    r: usize,
    k: usize,
    l: usize,
    orient: ArcOrientation,
    variant: Variant,
    maps: [&RMatrix; 4],
) -> Result<UnitMonomial, SlError> {
    let [rk, rkl, rl, rlk] = maps;
    let one = [(0usize, RingElement::one())];
    let kfirst = apply(rkl, &apply(rk, &one));
    let lfirst = apply(rlk, &apply(rl, &one));
    if let Some(c) = vector_ratio(&kfirst, &lfirst) {
        return Ok(c.inv());
    }
    let is_unit_free = kfirst.iter().chain(&lfirst).all(|(_, e)| e.as_unit().is_none());
    if is_unit_free && is_ladybug(pd, r, k, l) {
        Ok(ladybug_psi(pd, r, k, l, orient, variant))
    } else {
        Err(SlError::Unsolvable { r, k, l })
    }
}

/// ψ_sl2 on the square `(r; k, l)` of the cube of `pd`.
pub fn psi_sl2(pd: &PdCode, r: usize, k: usize, l: usize, orient: ArcOrientation, variant: Variant) -> Result<UnitMonomial, SlError> {
    let (k, l) = (k.min(l), k.max(l));
    let m = |v: usize, i: usize| -> Result<RMatrix, SlError> { Ok(saddle_matrix(&pd.saddle(v, i, orient)?)) };
    let (rk, rl) = (r | 1 << k, r | 1 << l);
    let maps = [m(r, k)?, m(rk, l)?, m(r, l)?, m(rl, k)?];
    psi_from_maps(pd, r, k, l, orient, variant, [&maps[0], &maps[1], &maps[2], &maps[3]])
}

/// ε with `∂ε = ψ` by staircase integration. `Min`: `ε(r, i) = 1` when no
/// `j < i` has `r_j = 1`, otherwise peel off the minimal such `j`. `Max`:
/// `ε(r, i) = 1` when no `j > i` has `r_j = 1`, otherwise peel off the
/// maximal such `j`.
pub fn solve_sign_assignment(shape: &BoxShape, psi: &Cochain2, tree: TreeChoice) -> Result<Cochain1, SlError> {
    if let Some((r, a, b, c)) = psi.cocycle_failure(shape) {
        return Err(SlError::NotCocycle { r, a, b, c });
    }
    let n = shape.n();
    let mut eps = Cochain1::ones(shape);
    match tree {
        TreeChoice::Min => {
            for i in 0..n {
                for r in 0..shape.len() {
                    let below = r & ((1 << i) - 1);
                    if r >> i & 1 == 1 || below == 0 {
                        continue;
                    }
                    let k = below.trailing_zeros() as usize;
                    let u = r ^ 1 << k;
                    let val = psi.get(u, k, i) * eps.get(u, i) * eps.get(u | 1 << i, k) * eps.get(u, k).inv();
                    eps.set(shape, r, i, val);
                }
            }
        }
        TreeChoice::Max => {
            for i in (0..n).rev() {
                for r in 0..shape.len() {
                    let above = r >> (i + 1) << (i + 1);
                    if r >> i & 1 == 1 || above == 0 {
                        continue;
                    }
                    let k = (usize::BITS - 1 - above.leading_zeros()) as usize;
                    let u = r ^ 1 << k;
                    let val = eps.get(u, i) * eps.get(u | 1 << i, k) * (eps.get(u, k) * psi.get(u, i, k)).inv();
                    eps.set(shape, r, i, val);
                }
            }
        }
    }
    if let Some((r, k, l)) = shape.squares().find(|&(r, k, l)| eps.coboundary_at(shape, r, k, l) != psi.get(r, k, l)) {
        return Err(SlError::SignAssignment { r, k, l });
    }
    Ok(eps)
}

/// `(−1)^{#{j < i : r_j = 1}}`.
pub fn koszul_sign(r: usize, i: usize) -> UnitMonomial {
    if (r & ((1 << i) - 1)).count_ones() % 2 == 1 {
        UnitMonomial::MINUS_ONE
    } else {
        UnitMonomial::ONE
    }
}

/// Data shared by both pipelines: resolutions and raw saddle maps.
#[derive(Clone, Debug)]
pub struct CubeData {
    pub pd: PdCode,
    pub orient: ArcOrientation,
    pub shape: BoxShape,
    pub states: Vec<ResolvedState>,
    pub saddles: Vec<Option<Saddle>>,
    pub edge_degrees: Vec<Z2Degree>,
}

impl CubeData {
    pub fn new(pd: &PdCode, orient: ArcOrientation) -> Result<Self, SlError> {
        let n = pd.n_crossings();
        if n > MAX_CUBE_CROSSINGS {
            return Err(PdError::TooManyCrossings { n, max: MAX_CUBE_CROSSINGS }.into());
        }
        let shape = BoxShape::cube(n);
        let verts: Vec<usize> = (0..shape.len()).collect();
        let states = crate::par_map(&verts, |&r| pd.resolve(r));
        let edges: Vec<(usize, usize)> = shape.edges().collect();
        let computed = crate::par_map(&edges, |&(v, i)| pd.saddle_between(&states[v], &states[v | 1 << i], i, orient));
        let mut saddles = vec![None; shape.len() * n];
        for (&(v, i), s) in edges.iter().zip(computed) {
            saddles[v * n + i] = Some(s?);
        }
        let edge_degrees = (0..n).map(|i| crossing_degree(pd.sign(i))).collect();
        Ok(Self { pd: pd.clone(), orient, shape, states, saddles, edge_degrees })
    }

    pub fn n(&self) -> usize {
        self.shape.n()
    }

    pub fn saddle(&self, v: usize, i: usize) -> &Saddle {
        self.saddles[v * self.n() + i].as_ref().expect("edge")
    }

    /// Cup-foam / exterior generators at `r`: degree `D_W(r) + |δ|·dot`,
    /// q-degree `n(r) − 2|δ|`.
    pub fn vertex_module(&self, r: usize) -> FreeModule {
        let ext = TwistedExteriorModule::new(self.states[r].n_circles);
        let base = vertex_base_degree(self, r);
        FreeModule::new(
            (0..ext.rank())
                .map(|d| Gen {
                    name: TwistedExteriorModule::name(d),
                    deg: base + Z2Degree::DOT.scale(d.count_ones() as i64),
                    q: ext.q(d),
                })
                .collect(),
        )
    }

    /// `ψ` of the formal cube: the foam degree of crossing `i`.
    pub fn psi_degree(&self, i: usize) -> Z2Degree {
        self.edge_degrees[i]
    }
}

/// The solved sl2 cube.
#[derive(Clone, Debug)]
pub struct SlCube {
    pub data: CubeData,
    pub variant: Variant,
    pub tree: TreeChoice,
    pub psi: Cochain2,
    pub eps: Cochain1,
    pub poly: HomogeneousPolycomplex,
}

impl SlCube {
    pub fn pd(&self) -> &PdCode {
        &self.data.pd
    }

    /// Edge scalar `κ · ε` in front of the raw saddle map.
    pub fn edge_scalar(&self, v: usize, i: usize) -> UnitMonomial {
        koszul_sign(v, i) * self.eps.get(v, i)
    }

    /// Total complex with `t = |r| − N_−` and q-shift `|r| − N_−`.
    pub fn complex(&self) -> Result<ChainComplexR, SlError> {
        Ok(shifted_total(&self.poly, self.data.pd.n_minus())?)
    }
}

/// Totalizes a link cube with the shifts `t^{|r|−N_−} q^{|r|−N_−}`.
pub fn shifted_total(poly: &HomogeneousPolycomplex, n_minus: usize) -> Result<ChainComplexR, PolyError> {
    let mut c = poly.total()?;
    let nm = n_minus as i64;
    c.t_min -= nm;
    for m in &mut c.modules {
        for g in m {
            g.q += poly.shape().weight(g.vertex) - nm;
        }
    }
    Ok(c)
}

/// ψ_sl2 on every square of the cube.
pub fn psi_cochain(data: &CubeData, variant: Variant) -> Result<(Vec<RMatrix>, Cochain2), SlError> {
    let sh = &data.shape;
    let n = sh.n();
    let edges: Vec<(usize, usize)> = sh.edges().collect();
    let mats = crate::par_map(&edges, |&(v, i)| saddle_matrix(data.saddle(v, i)));
    let mut raw = vec![RMatrix::zeros(0, 0); sh.len() * n];
    for (&(v, i), m) in edges.iter().zip(mats) {
        raw[v * n + i] = m;
    }
    let squares: Vec<(usize, usize, usize)> = sh.squares().collect();
    let vals = crate::par_map(&squares, |&(r, k, l)| {
        let maps = [&raw[r * n + k], &raw[(r | 1 << k) * n + l], &raw[r * n + l], &raw[(r | 1 << l) * n + k]];
        psi_from_maps(&data.pd, r, k, l, data.orient, variant, maps)
    });
    let mut psi = Cochain2::ones(sh);
    for (&(r, k, l), v) in squares.iter().zip(vals) {
        psi.set(r, k, l, v?);
    }
    Ok((raw, psi))
}

/// Assembles `Kom_sl2(D)` as a homogeneous polycomplex on `{0,1}^N`.
pub fn build_kom_sl2(pd: &PdCode, orient: ArcOrientation, variant: Variant, tree: TreeChoice) -> Result<SlCube, SlError> {
    let data = CubeData::new(pd, orient)?;
    build_from_data(data, variant, tree)
}

pub fn build_from_data(data: CubeData, variant: Variant, tree: TreeChoice) -> Result<SlCube, SlError> {
    let (raw, psi) = psi_cochain(&data, variant)?;
    let eps = solve_sign_assignment(&data.shape, &psi, tree)?;
    let n = data.n();
    let objects = (0..data.shape.len()).map(|r| data.vertex_module(r)).collect();
    let poly = HomogeneousPolycomplex::new(
        data.shape.clone(),
        objects,
        |v, i| raw[v * n + i].scale(koszul_sign(v, i) * eps.get(v, i)),
        |_, i| data.psi_degree(i),
    )?;
    Ok(SlCube { data, variant, tree, psi, eps, poly })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linkdiag::parse_pd;
    use crate::ring::Specialization;

    const HOPF: &str = "X(1,3,2,4) X(3,1,4,2)";
    const TREFOIL: &str = "X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)";

    fn re(s: &str) -> RingElement {
        s.parse().unwrap()
    }

    /// Applies `a_i a_j = XY a_j a_i` one adjacent swap at a time.
    fn bubble(word: &[usize]) -> Option<(UnitMonomial, usize)> {
        let mut w = word.to_vec();
        let mut c = UnitMonomial::ONE;
        loop {
            let mut swapped = false;
            for p in 0..w.len().saturating_sub(1) {
                if w[p] == w[p + 1] {
                    return None;
                }
                if w[p] < w[p + 1] {
                    w.swap(p, p + 1);
                    c *= UnitMonomial::XY;
                    swapped = true;
                }
            }
            if !swapped {
                return Some((c, w.iter().fold(0, |m, &a| m | 1 << a)));
            }
        }
    }

    #[test]
    fn normalization_matches_step_by_step_oracle() {
        for delta in 0usize..64 {
            for map_seed in 0..20usize {
                let map: Vec<usize> = (0..6).map(|j| (j * 7 + map_seed * 3 + j * map_seed) % 6).collect();
                let word: Vec<usize> = (0..6).rev().filter(|&j| delta >> j & 1 == 1).map(|j| map[j]).collect();
                assert_eq!(TwistedExteriorModule::substitute(delta, &map), bubble(&word));
            }
            for i in 0..6 {
                let mut word = vec![i];
                word.extend((0..6).rev().filter(|&j| delta >> j & 1 == 1));
                assert_eq!(TwistedExteriorModule::left_mul(i, delta), bubble(&word));
            }
        }
    }

    #[test]
    fn merge_and_split_examples() {
        let pd = parse_pd(HOPF).unwrap();
        let o = ArcOrientation::default();
        let s = pd.saddle(0, 0, o).unwrap();
        let SaddleKind::Merge { c1, c2, c } = s.kind else { panic!() };
        let m = merge_matrix(&s);
        assert_eq!(m.get(0, 0), re("1"));
        assert_eq!(m.get(1 << c, 1 << c1), re("1"));
        assert!(m.column((1 << c1) | (1 << c2)).is_empty());
        let s = pd.saddle(1, 1, o).unwrap();
        let SaddleKind::Split { i1, i2, .. } = s.kind else { panic!() };
        let d = split_matrix(&s);
        assert_eq!(d.get(1 << i1, 0), re("1"));
        assert_eq!(d.get(1 << i2, 0), re("XY"));
        // Δ(a_c) = XY a_{i2} a_{i1}, normalized
        let expect = if i2 > i1 { re("XY") } else { re("1") };
        assert_eq!(d.get((1 << i1) | (1 << i2), 1), expect);
    }

    #[test]
    fn even_split_is_classical_coproduct() {
        let pd = parse_pd(HOPF).unwrap();
        let s = pd.saddle(1, 1, ArcOrientation::default()).unwrap();
        let d = split_matrix(&s).specialize(Specialization::EVEN);
        let SaddleKind::Split { i1, i2, .. } = s.kind else { panic!() };
        // Δ(1) = a1 + a2, Δ(a) = a1 a2
        assert_eq!(d[1 << i1][0], 1);
        assert_eq!(d[1 << i2][0], 1);
        assert_eq!(d[(1 << i1) | (1 << i2)][1], 1);
        assert_eq!(d.iter().flatten().filter(|&&x| x != 0).count(), 3);
    }

    #[test]
    fn sign_assignment_trivial_and_trefoil() {
        let sh = BoxShape::cube(3);
        let e = solve_sign_assignment(&sh, &Cochain2::ones(&sh), TreeChoice::Min).unwrap();
        assert_eq!(e, Cochain1::ones(&sh));
        let pd = parse_pd(TREFOIL).unwrap();
        for tree in [TreeChoice::Min, TreeChoice::Max] {
            let cube = build_kom_sl2(&pd, ArcOrientation::default(), Variant::X, tree).unwrap();
            let mut count = 0;
            for (r, k, l) in cube.data.shape.squares() {
                assert_eq!(cube.eps.coboundary_at(&cube.data.shape, r, k, l), cube.psi.get(r, k, l));
                count += 1;
            }
            assert_eq!(count, 6);
        }
    }

    #[test]
    fn non_cocycle_is_reported() {
        let sh = BoxShape::cube(3);
        let mut psi = Cochain2::ones(&sh);
        psi.set(0, 0, 1, UnitMonomial::XY);
        assert!(matches!(solve_sign_assignment(&sh, &psi, TreeChoice::Min), Err(SlError::NotCocycle { .. })));
    }

    #[test]
    fn hopf_ranks_and_q_homogeneity() {
        let pd = parse_pd(HOPF).unwrap();
        let cube = build_kom_sl2(&pd, ArcOrientation::default(), Variant::X, TreeChoice::Min).unwrap();
        let c = cube.complex().unwrap();
        // 2^{#circles} per vertex: 4, 2 + 2, 4
        assert_eq!(c.ranks(), vec![4, 4, 4]);
        for (k, d) in c.diffs.iter().enumerate() {
            for (row, col, _) in d.entries() {
                assert_eq!(c.modules[k + 1][row].q, c.modules[k][col].q);
            }
        }
    }

    #[test]
    fn unknot_cube() {
        let cube = build_kom_sl2(&PdCode::unknot(), ArcOrientation::default(), Variant::X, TreeChoice::Min).unwrap();
        let c = cube.complex().unwrap();
        assert_eq!(c.t_min, 0);
        let mut qs: Vec<i64> = c.modules[0].iter().map(|g| g.q).collect();
        qs.sort();
        assert_eq!(qs, vec![-1, 1]);
    }
}
