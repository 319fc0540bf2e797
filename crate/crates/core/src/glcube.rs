//! gl2 side: crossing brackets with foam degrees, the formal web cube, its
//! algebrization in the cup-foam basis, and the comparison with the sl2 cube.

use serde_json::{json, Value};
use thiserror::Error;

use crate::homology::LaurentPoly;
use crate::linkdiag::{ArcOrientation, PdCode, SaddleKind};
use crate::matrix::RMatrix;
use crate::polycomplex::{
    integrate, BoxShape, ChainComplexR, Cochain0, Cochain1, Cochain2, FormalEdge, FormalObject, FormalPolycomplex,
    HomogeneousPolycomplex, PolyError,
};
use crate::ring::{bil, RingElement, UnitMonomial, Z2Degree};
use crate::slcube::{
    apply, build_from_data, is_ladybug, ladybug_psi, saddle_matrix, shifted_total, solve_sign_assignment,
    vector_ratio, CubeData, SlCube, SlError, TreeChoice, Variant,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GlError {
    #[error(transparent)]
    Sl(#[from] SlError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("the cubes have different underlying diagrams or orientations")]
    Mismatch,
    #[error("edge ({v}, {i}) is not unit-proportional to its sl2 counterpart")]
    NonProportional { v: usize, i: usize },
    #[error("square ({r}; {k}, {l}) has no unit composite and is not a ladybug")]
    Defect { r: usize, k: usize, l: usize },
    #[error("ratio cochain is not closed on {} square(s){}", .squares.len(), if *.ladybug_only { " (ladybugs only, off by XY)" } else { "" })]
    RatioNotClosed { squares: Vec<(usize, usize, usize)>, ladybug_only: bool },
    #[error("rescaled identification fails on edge ({v}, {i})")]
    EdgeMismatch { v: usize, i: usize },
}

/// Foam degree of the saddle of a crossing: zip `(−1,0)` for positive,
/// unzip `(0,−1)` for negative crossings.
pub fn crossing_degree(sign: i8) -> Z2Degree {
    if sign > 0 {
        Z2Degree::ZIP
    } else {
        Z2Degree::UNZIP
    }
}

/// Two-term bracket of crossing `c`: positive `id → qt·H` (zip), negative
/// `q^{−1}t^{−1}·H → id` (unzip).
pub fn crossing_bracket(c: usize, sign: i8) -> FormalPolycomplex {
    let (labels, shift, name) = if sign > 0 {
        (["id", "H"], 0, "zip")
    } else {
        (["H", "id"], -1, "unzip")
    };
    let objects = (0..2)
        .map(|j| FormalObject { label: format!("{}{}", labels[j], c + 1), q: shift + j as i64, t: shift + j as i64 })
        .collect();
    FormalPolycomplex {
        shape: BoxShape::cube(1),
        objects,
        edges: vec![Some(FormalEdge { scalar: UnitMonomial::ONE, name: format!("{name}{}", c + 1) }), None],
        psi: vec![crossing_degree(sign), Z2Degree::ZERO],
    }
}

/// Left-associated graded Koszul tensor product of the crossing brackets.
pub fn build_kom_gl2_formal(pd: &PdCode) -> FormalPolycomplex {
    (0..pd.n_crossings()).fold(FormalPolycomplex::point(""), |acc, c| acc.tensor(&crossing_bracket(c, pd.sign(c))))
}

/// `ψ_gl2(□) = bil(deg of the k-edge, deg of the l-edge)` for `k < l`.
pub fn psi_gl2(dk: Z2Degree, dl: Z2Degree) -> UnitMonomial {
    bil(dk, dl)
}

/// Degree of the cup foam `β_∅` at vertex `r`:
/// `n(0)·cup + |α|(r) + s·(1,1)` with `s = (|r| + n(r) − n(0)) / 2`.
pub fn vertex_base_degree(data: &CubeData, r: usize) -> Z2Degree {
    let n0 = data.states[0].n_circles as i64;
    let nr = data.states[r].n_circles as i64;
    let weight = r.count_ones() as i64;
    let alpha: Z2Degree = (0..data.n()).filter(|&i| r >> i & 1 == 1).map(|i| data.edge_degrees[i]).sum();
    let s = (weight + nr - n0) / 2;
    Z2Degree::CUP.scale(n0) + alpha + Z2Degree::new(s, s)
}

/// Degrees of the cup-foam basis of a web with `n` circles, relative to the
/// empty web: `n·cup + |δ|·dot`.
pub fn cup_basis(n: usize) -> Vec<Z2Degree> {
    (0..1usize << n).map(|d| Z2Degree::CUP.scale(n as i64) + Z2Degree::DOT.scale(d.count_ones() as i64)).collect()
}

/// Graded cardinality of the cup-foam basis equals `(q + q^{−1})^n`.
pub fn cup_basis_rank_check(n: usize) -> bool {
    let card = cup_basis(n).into_iter().fold(LaurentPoly::zero(), |acc, d| acc + LaurentPoly::monomial(1, -d.qdeg()));
    card == LaurentPoly::q_plus_q_inv().pow(n as u32)
}

/// Sorts a dot list into increasing order; `XY` per inversion, zero on repeats.
fn sort_dots(list: &[usize]) -> Option<(UnitMonomial, usize)> {
    let mut mask = 0usize;
    let mut inv = 0;
    for (p, &a) in list.iter().enumerate() {
        if mask >> a & 1 == 1 {
            return None;
        }
        mask |= 1 << a;
        inv += list[p + 1..].iter().filter(|&&b| b < a).count();
    }
    Some((UnitMonomial::xy_pow(inv), mask))
}

/// Action of the saddle foam of edge `(v, i)` on cup-foam stacks (dots listed
/// bottom to top in increasing circle order).
pub fn cup_edge_action(data: &CubeData, v: usize, i: usize) -> RMatrix {
    let s = data.saddle(v, i);
    let d = data.edge_degrees[i];
    let slide = bil(d, Z2Degree::DOT);
    let cols = (0..1usize << s.n_before)
        .map(|delta| {
            let mapped: Vec<usize> = (0..s.n_before).filter(|&c| delta >> c & 1 == 1).map(|c| s.relabel[c]).collect();
            let base = slide.pow(delta.count_ones() as i64);
            let terms: Vec<(UnitMonomial, Vec<usize>)> = match s.kind {
                SaddleKind::Merge { .. } => vec![(UnitMonomial::ONE, mapped)],
                SaddleKind::Split { i1, i2, .. } => {
                    let with = |c: usize| std::iter::once(c).chain(mapped.iter().copied()).collect();
                    vec![(UnitMonomial::ONE, with(i1)), (UnitMonomial::XY, with(i2))]
                }
            };
            terms
                .into_iter()
                .filter_map(|(c, list)| sort_dots(&list).map(|(u, m)| (m, RingElement::from(base * c * u))))
                .collect()
        })
        .collect();
    RMatrix::from_columns(1 << s.n_after, cols)
}

/// Diagonal of `ι_W : β_δ ↦ bil(|δ|·dot, D_W) a_δ`.
pub fn iota_diagonal(data: &CubeData, r: usize) -> Vec<UnitMonomial> {
    let base = vertex_base_degree(data, r);
    (0..1usize << data.states[r].n_circles)
        .map(|d| bil(Z2Degree::DOT.scale(d.count_ones() as i64), base))
        .collect()
}

fn diag_left(m: &RMatrix, d: &[UnitMonomial]) -> RMatrix {
    m.scale_diag(d, &vec![UnitMonomial::ONE; m.cols()])
}

fn diag_right(m: &RMatrix, d: &[UnitMonomial]) -> RMatrix {
    m.scale_diag(&vec![UnitMonomial::ONE; m.rows()], d)
}

/// The algebrized gl2 cube.
#[derive(Clone, Debug)]
pub struct GlCube {
    pub data: CubeData,
    pub formal: FormalPolycomplex,
    /// `ψ_β(e)` with `ι ∘ G(e) = ψ_β(e) · S(e) ∘ ι`.
    pub psi_beta: Cochain1,
    /// Normalization of the cup-foam edge actions.
    pub tau: Cochain1,
    pub poly: HomogeneousPolycomplex,
}

impl GlCube {
    pub fn complex(&self) -> Result<ChainComplexR, GlError> {
        Ok(shifted_total(&self.poly, self.data.pd.n_minus())?)
    }

    /// Same cube in the basis rescaled by `u(v)` at each vertex.
    pub fn rescaled(&self, u: &Cochain0) -> Result<GlCube, GlError> {
        let sh = self.poly.shape().clone();
        let poly = HomogeneousPolycomplex::new(
            sh.clone(),
            self.poly.objects().to_vec(),
            |v, i| {
                let w = sh.step(v, i).expect("edge");
                self.poly.edge(v, i).expect("edge").scale(u.values[w] * u.values[v].inv())
            },
            |v, i| self.poly.psi(v, i),
        )?;
        Ok(GlCube { poly, ..self.clone() })
    }

    pub fn to_json(&self) -> Value {
        json!({ "formal": self.formal.to_json(), "algebrized": self.poly.to_json() })
    }
}

/// Algebrizes the formal cube: edge `(v, i)` is `κ_gl2 · τ · G`, with `κ_gl2`
/// the graded Koszul scalar and `τ` solving `∂τ = ψ_gl2^{−1} c_G^{−1}` where
/// `c_G` compares the two composites of `G` on each square.
pub fn algebrize_gl2(pd: &PdCode, orient: ArcOrientation) -> Result<GlCube, GlError> {
    let data = CubeData::new(pd, orient)?;
    algebrize_from_data(data)
}

pub fn algebrize_from_data(data: CubeData) -> Result<GlCube, GlError> {
    let formal = build_kom_gl2_formal(&data.pd);
    let sh = data.shape.clone();
    let n = sh.n();
    let edges: Vec<(usize, usize)> = sh.edges().collect();
    let iotas: Vec<Vec<UnitMonomial>> = (0..sh.len()).map(|r| iota_diagonal(&data, r)).collect();
    let computed = crate::par_map(&edges, |&(v, i)| {
        let g = cup_edge_action(&data, v, i);
        let s = saddle_matrix(data.saddle(v, i));
        let w = v | 1 << i;
        let lhs = diag_left(&g, &iotas[w]);
        let rhs = diag_right(&s, &iotas[v]);
        (g, lhs.unit_ratio(&rhs).ok_or(GlError::NonProportional { v, i }))
    });
    let mut g_maps = vec![RMatrix::zeros(0, 0); sh.len() * n];
    let mut psi_beta = Cochain1::ones(&sh);
    for (&(v, i), (g, b)) in edges.iter().zip(computed) {
        g_maps[v * n + i] = g;
        psi_beta.set(&sh, v, i, b?);
    }

    let squares: Vec<(usize, usize, usize)> = sh.squares().collect();
    let targets = crate::par_map(&squares, |&(r, k, l)| {
        let one = [(0usize, RingElement::one())];
        let (rk, rl) = (r | 1 << k, r | 1 << l);
        let kfirst = apply(&g_maps[rk * n + l], &apply(&g_maps[r * n + k], &one));
        let lfirst = apply(&g_maps[rl * n + k], &apply(&g_maps[r * n + l], &one));
        let c = match vector_ratio(&kfirst, &lfirst) {
            Some(c) => c,
            None if is_ladybug(&data.pd, r, k, l) => {
                ladybug_psi(&data.pd, r, k, l, data.orient, Variant::X) * psi_beta.coboundary_at(&sh, r, k, l)
            }
            None => return Err(GlError::Defect { r, k, l }),
        };
        Ok((psi_gl2(data.edge_degrees[k], data.edge_degrees[l]) * c).inv())
    });
    let mut target = Cochain2::ones(&sh);
    for (&(r, k, l), t) in squares.iter().zip(targets) {
        target.set(r, k, l, t?);
    }
    let tau = solve_sign_assignment(&sh, &target, TreeChoice::Min)?;
    let objects = (0..sh.len()).map(|r| data.vertex_module(r)).collect();
    let poly = HomogeneousPolycomplex::new(
        sh.clone(),
        objects,
        |v, i| {
            let k = formal.edge(v, i).expect("edge").scalar;
            g_maps[v * n + i].scale(k * tau.get(v, i))
        },
        |_, i| data.edge_degrees[i],
    )?;
    Ok(GlCube { data, formal, psi_beta, tau, poly })
}

/// Outcome of a successful comparison.
#[derive(Clone, Debug)]
pub struct Comparison {
    pub variant: Variant,
    /// Per-edge ratio `ρ` with `ι ∘ gl2 = ρ · sl2 ∘ ι`.
    pub rho: Cochain1,
    /// `φ` with `∂φ = ρ`; `φ(r)^{−1} ι_r` is a chain isomorphism.
    pub phi: Cochain0,
    pub ladybugs: usize,
}

impl Comparison {
    pub fn to_json(&self, shape: &BoxShape) -> Value {
        json!({
            "variant": format!("{:?}", self.variant),
            "ladybug_squares": self.ladybugs,
            "phi": (0..shape.len()).map(|v| json!({ "r": shape.coords(v), "value": self.phi.values[v].to_string() })).collect::<Vec<_>>(),
        })
    }
}

/// Identifies the algebrized gl2 cube with the sl2 cube: extracts the
/// per-edge ratio, checks it is closed, integrates it and verifies the
/// resulting isomorphism on every edge.
pub fn compare_hypercubes(gl: &GlCube, sl: &SlCube) -> Result<Comparison, GlError> {
    if gl.data.pd != sl.data.pd || gl.data.orient != sl.data.orient {
        return Err(GlError::Mismatch);
    }
    let data = &gl.data;
    let sh = &data.shape;
    let iotas: Vec<Vec<UnitMonomial>> = (0..sh.len()).map(|r| iota_diagonal(data, r)).collect();
    let edges: Vec<(usize, usize)> = sh.edges().collect();
    let ratios = crate::par_map(&edges, |&(v, i)| {
        let w = v | 1 << i;
        let lhs = diag_left(gl.poly.edge(v, i).expect("edge"), &iotas[w]);
        let rhs = diag_right(sl.poly.edge(v, i).expect("edge"), &iotas[v]);
        lhs.unit_ratio(&rhs).ok_or(GlError::NonProportional { v, i })
    });
    let mut rho = Cochain1::ones(sh);
    for (&(v, i), u) in edges.iter().zip(ratios) {
        rho.set(sh, v, i, u?);
    }
    let bad: Vec<(usize, usize, usize)> =
        sh.squares().filter(|&(r, k, l)| !rho.coboundary_at(sh, r, k, l).is_one()).collect();
    let ladybugs = sh.squares().filter(|&(r, k, l)| is_ladybug(&data.pd, r, k, l)).count();
    if !bad.is_empty() {
        let ladybug_only = bad
            .iter()
            .all(|&(r, k, l)| is_ladybug(&data.pd, r, k, l) && rho.coboundary_at(sh, r, k, l) == UnitMonomial::XY);
        return Err(GlError::RatioNotClosed { squares: bad, ladybug_only });
    }
    let phi = integrate(sh, &rho)?;
    for &(v, i) in &edges {
        let w = v | 1 << i;
        let left: Vec<UnitMonomial> = iotas[w].iter().map(|&x| x * phi.values[w].inv()).collect();
        let right: Vec<UnitMonomial> = iotas[v].iter().map(|&x| x * phi.values[v].inv()).collect();
        let lhs = diag_left(gl.poly.edge(v, i).expect("edge"), &left);
        let rhs = diag_right(sl.poly.edge(v, i).expect("edge"), &right);
        if lhs != rhs {
            return Err(GlError::EdgeMismatch { v, i });
        }
    }
    Ok(Comparison { variant: sl.variant, rho, phi, ladybugs })
}

/// Compares against the type-X sl2 cube, retrying with type Y when closure
/// fails only on ladybugs.
pub fn compare_with_retry(gl: &GlCube, tree: TreeChoice) -> Result<(Comparison, SlCube), GlError> {
    let sl = build_from_data(gl.data.clone(), Variant::X, tree)?;
    match compare_hypercubes(gl, &sl) {
        Ok(c) => Ok((c, sl)),
        Err(GlError::RatioNotClosed { ladybug_only: true, .. }) => {
            let sl = build_from_data(gl.data.clone(), Variant::Y, tree)?;
            compare_hypercubes(gl, &sl).map(|c| (c, sl))
        }
        Err(e) => Err(e),
    }
}

/// Which variants give a closed ratio cochain against `gl`.
pub fn closing_variants(gl: &GlCube, tree: TreeChoice) -> Result<Vec<Variant>, GlError> {
    let mut out = Vec::new();
    for v in [Variant::X, Variant::Y] {
        let sl = build_from_data(gl.data.clone(), v, tree)?;
        match compare_hypercubes(gl, &sl) {
            Ok(_) => out.push(v),
            Err(GlError::RatioNotClosed { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linkdiag::parse_pd;

    const HOPF: &str = "X(1,3,2,4) X(3,1,4,2)";
    const TREFOIL: &str = "X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)";

    #[test]
    fn brackets() {
        let p = crossing_bracket(0, 1);
        assert_eq!(p.psi(0, 0), Z2Degree::new(-1, 0));
        assert_eq!((p.objects[1].q, p.objects[1].t), (1, 1));
        let n = crossing_bracket(0, -1);
        assert_eq!(n.psi(0, 0), Z2Degree::new(0, -1));
        assert_eq!((n.objects[0].q, n.objects[0].t), (-1, -1));
        assert_eq!(Z2Degree::ZIP.qdeg(), 1);
    }

    #[test]
    fn psi_gl2_values() {
        assert_eq!(psi_gl2(Z2Degree::UNZIP, Z2Degree::UNZIP).inv(), UnitMonomial::Y);
        assert_eq!(psi_gl2(Z2Degree::ZIP, Z2Degree::ZIP), UnitMonomial::X);
        assert_eq!(psi_gl2(Z2Degree::ZIP, Z2Degree::UNZIP), UnitMonomial::Z);
        assert_eq!(psi_gl2(Z2Degree::UNZIP, Z2Degree::ZIP), UnitMonomial::Z.inv());
    }

    #[test]
    fn negative_hopf_has_minus_y() {
        let pd = parse_pd(HOPF).unwrap().mirror();
        let f = build_kom_gl2_formal(&pd);
        assert_eq!(f.edge(1, 1).unwrap().scalar, -UnitMonomial::Y);
        assert_eq!(f.edge(0, 1).unwrap().scalar, UnitMonomial::ONE);
        f.check_anticommute().unwrap();
        assert_eq!(f.abs_alpha_all()[1], Z2Degree::new(0, -1));
    }

    #[test]
    fn formal_trefoil_anticommutes_and_matches_koszul() {
        let pd = parse_pd(TREFOIL).unwrap();
        let f = build_kom_gl2_formal(&pd);
        f.check_anticommute().unwrap();
        let sh = &f.shape;
        for (r, k, l) in sh.squares() {
            let d = f.scalars().coboundary_at(sh, r, k, l);
            assert_eq!(d, -psi_gl2(f.psi(r, k), f.psi(r, l)));
        }
    }

    #[test]
    fn cup_basis_ranks() {
        for n in 0..6 {
            assert!(cup_basis_rank_check(n));
        }
        assert_eq!(cup_basis(0), vec![Z2Degree::ZERO]);
    }

    #[test]
    fn hopf_and_trefoil_compare() {
        for text in [HOPF, TREFOIL] {
            let pd = parse_pd(text).unwrap();
            for o in 0..(1u64 << pd.n_crossings()) {
                let gl = algebrize_gl2(&pd, ArcOrientation(o)).unwrap();
                let (c, _) = compare_with_retry(&gl, TreeChoice::Min).unwrap();
                assert_eq!(c.variant, Variant::X);
            }
        }
    }

    #[test]
    fn unknot_is_trivial() {
        let gl = algebrize_gl2(&PdCode::unknot(), ArcOrientation::default()).unwrap();
        let (c, _) = compare_with_retry(&gl, TreeChoice::Min).unwrap();
        assert_eq!(c.phi.values, vec![UnitMonomial::ONE]);
    }
}
