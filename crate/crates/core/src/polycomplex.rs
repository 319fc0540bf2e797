//! Homogeneous polycomplexes over `R`: `Z^n`-shaped families of free modules
//! with anticommuting, homogeneous edge maps, their total complexes, unit
//! cochains, the graded Koszul tensor product and induced maps.

use std::collections::BTreeMap;

use serde_json::{json, Value};
use thiserror::Error;

use crate::matrix::RMatrix;
use crate::ring::{bil, RingElement, UnitMonomial, Z2Degree};

pub mod random;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("edge ({v}, {i}) has wrong dimensions")]
    Dimension { v: usize, i: usize },
    #[error("edge ({v}, {i}) entry ({row}, {col}) is not homogeneous of degree {expected}")]
    NotHomogeneous { v: usize, i: usize, row: usize, col: usize, expected: Z2Degree },
    #[error("α∘α ≠ 0 along direction {i} at vertex {v}")]
    NotDifferential { v: usize, i: usize },
    #[error("square ({v}; {k}, {l}) does not anticommute")]
    NotAnticommuting { v: usize, k: usize, l: usize },
    #[error("degree cochain ψ is not closed on square ({v}; {k}, {l})")]
    PsiNotCocycle { v: usize, k: usize, l: usize },
    #[error("cochain is incompatible on square ({v}; {k}, {l}): ∂ε = {found}, expected {expected}")]
    IncompatibleCochain {
        v: usize,
        k: usize,
        l: usize,
        expected: UnitMonomial,
        found: UnitMonomial,
    },
    #[error("1-cochain is not closed on {} square(s), first ({}; {}, {})", .0.len(), .0[0].0, .0[0].1, .0[0].2)]
    NotClosed(Vec<(usize, usize, usize)>),
    #[error("d∘d ≠ 0 in total degree {t}")]
    TotalNotComplex { t: i64 },
    #[error("chain-map relation fails from vertex {r} to vertex {s}")]
    ChainMap { r: usize, s: usize },
    #[error("homotopy relation fails from vertex {r} to vertex {s}")]
    Homotopy { r: usize, s: usize },
    #[error("component ({r}, {s}) is not homogeneous of its recorded degree")]
    ComponentDegree { r: usize, s: usize },
}

/// A box `origin + [0, dims)` in `Z^n`; vertex indices are mixed-radix with
/// direction 0 fastest, so for `dims = [2; n]` bit `i` of the index is `r_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoxShape {
    origin: Vec<i64>,
    dims: Vec<usize>,
    strides: Vec<usize>,
    len: usize,
}

impl BoxShape {
    pub fn new(origin: Vec<i64>, dims: Vec<usize>) -> Self {
        assert_eq!(origin.len(), dims.len());
        assert!(dims.iter().all(|&d| d > 0), "box sides must be positive");
        let mut strides = Vec::with_capacity(dims.len());
        let mut len = 1usize;
        for &d in &dims {
            strides.push(len);
            len = len.checked_mul(d).expect("box too large");
        }
        Self { origin, dims, strides, len }
    }

    /// `{0,1}^n`.
    pub fn cube(n: usize) -> Self {
        Self::new(vec![0; n], vec![2; n])
    }

    pub fn point() -> Self {
        Self::new(Vec::new(), Vec::new())
    }

    pub fn n(&self) -> usize {
        self.dims.len()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn origin(&self) -> &[i64] {
        &self.origin
    }

    /// Offset of `v` from the origin along direction `i`.
    pub fn local(&self, v: usize, i: usize) -> usize {
        v / self.strides[i] % self.dims[i]
    }

    pub fn coords(&self, v: usize) -> Vec<i64> {
        (0..self.n()).map(|i| self.origin[i] + self.local(v, i) as i64).collect()
    }

    pub fn index(&self, coords: &[i64]) -> Option<usize> {
        let mut v = 0;
        for (i, &x) in coords.iter().enumerate().take(self.n()) {
            let off = x - self.origin[i];
            if off < 0 || off >= self.dims[i] as i64 {
                return None;
            }
            v += off as usize * self.strides[i];
        }
        Some(v)
    }

    /// `|r|`, the sum of coordinates.
    pub fn weight(&self, v: usize) -> i64 {
        self.coords(v).iter().sum()
    }

    pub fn step(&self, v: usize, i: usize) -> Option<usize> {
        (self.local(v, i) + 1 < self.dims[i]).then(|| v + self.strides[i])
    }

    pub fn back(&self, v: usize, i: usize) -> Option<usize> {
        (self.local(v, i) > 0).then(|| v - self.strides[i])
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.len).flat_map(move |v| {
            (0..self.n()).filter(move |&i| self.step(v, i).is_some()).map(move |i| (v, i))
        })
    }

    /// Squares `(v; k, l)` with `k < l`.
    pub fn squares(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        self.edges().flat_map(move |(v, k)| {
            (k + 1..self.n()).filter(move |&l| self.step(v, l).is_some()).map(move |l| (v, k, l))
        })
    }

    /// Product box; vertex `(a, b)` has index `a + self.len() * b`.
    pub fn concat(&self, other: &BoxShape) -> BoxShape {
        let mut origin = self.origin.clone();
        origin.extend_from_slice(&other.origin);
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        BoxShape::new(origin, dims)
    }

    /// Spanning-tree parent of `v`: step back along the lowest direction
    /// with positive offset.
    pub fn tree_parent(&self, v: usize) -> Option<(usize, usize)> {
        (0..self.n()).find_map(|i| self.back(v, i).map(|u| (u, i)))
    }

    fn edge_slot(&self, v: usize, i: usize) -> usize {
        v * self.n() + i
    }
}

/// Unit-valued 0-cochain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochain0 {
    pub values: Vec<UnitMonomial>,
}

impl Cochain0 {
    pub fn ones(shape: &BoxShape) -> Self {
        Self { values: vec![UnitMonomial::ONE; shape.len()] }
    }

    /// `∂φ(v → v + e_i) = φ(v + e_i) φ(v)^{-1}`.
    pub fn coboundary(&self, shape: &BoxShape) -> Cochain1 {
        let mut c = Cochain1::ones(shape);
        for (v, i) in shape.edges() {
            let w = shape.step(v, i).expect("edge");
            c.set(shape, v, i, self.values[w] * self.values[v].inv());
        }
        c
    }
}

/// Unit-valued 1-cochain on the edges of a box.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochain1 {
    n: usize,
    values: Vec<UnitMonomial>,
}

impl Cochain1 {
    pub fn ones(shape: &BoxShape) -> Self {
        Self { n: shape.n(), values: vec![UnitMonomial::ONE; shape.len() * shape.n()] }
    }

    pub fn from_fn(shape: &BoxShape, mut f: impl FnMut(usize, usize) -> UnitMonomial) -> Self {
        let mut c = Self::ones(shape);
        for (v, i) in shape.edges() {
            c.values[v * c.n + i] = f(v, i);
        }
        c
    }

    pub fn get(&self, v: usize, i: usize) -> UnitMonomial {
        self.values[v * self.n + i]
    }

    pub fn set(&mut self, _shape: &BoxShape, v: usize, i: usize, u: UnitMonomial) {
        self.values[v * self.n + i] = u;
    }

    pub fn mul(&self, other: &Cochain1) -> Cochain1 {
        let values = self.values.iter().zip(&other.values).map(|(a, b)| *a * *b).collect();
        Cochain1 { n: self.n, values }
    }

    pub fn inv(&self) -> Cochain1 {
        Cochain1 { n: self.n, values: self.values.iter().map(|u| u.inv()).collect() }
    }

    /// `∂ε(v; k, l) = ε(v,k) ε(v+e_k,l) ε(v,l)^{-1} ε(v+e_l,k)^{-1}`.
    pub fn coboundary_at(&self, shape: &BoxShape, v: usize, k: usize, l: usize) -> UnitMonomial {
        let vk = shape.step(v, k).expect("square");
        let vl = shape.step(v, l).expect("square");
        self.get(v, k) * self.get(vk, l) * (self.get(v, l) * self.get(vl, k)).inv()
    }

    pub fn coboundary(&self, shape: &BoxShape) -> Cochain2 {
        let mut c = Cochain2::ones(shape);
        for (v, k, l) in shape.squares() {
            c.set(v, k, l, self.coboundary_at(shape, v, k, l));
        }
        c
    }
}

/// Unit-valued 2-cochain on the squares `(v; k < l)` of a box.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochain2 {
    n: usize,
    values: Vec<UnitMonomial>,
}

impl Cochain2 {
    pub fn ones(shape: &BoxShape) -> Self {
        let n = shape.n();
        Self { n, values: vec![UnitMonomial::ONE; shape.len() * n * n] }
    }

    pub fn get(&self, v: usize, k: usize, l: usize) -> UnitMonomial {
        self.values[(v * self.n + k) * self.n + l]
    }

    pub fn set(&mut self, v: usize, k: usize, l: usize, u: UnitMonomial) {
        self.values[(v * self.n + k) * self.n + l] = u;
    }

    /// First 3-cube `(v; a < b < c)` where the cocycle condition
    /// `ψ(v;ab) ψ(v+e_b;ac) ψ(v;bc) = ψ(v+e_c;ab) ψ(v;ac) ψ(v+e_a;bc)` fails.
    pub fn cocycle_failure(&self, shape: &BoxShape) -> Option<(usize, usize, usize, usize)> {
        for (v, a, b) in shape.squares() {
            for c in b + 1..shape.n() {
                let Some(vc) = shape.step(v, c) else { continue };
                let va = shape.step(v, a).expect("square");
                let vb = shape.step(v, b).expect("square");
                let lhs = self.get(v, a, b) * self.get(vb, a, c) * self.get(v, b, c);
                let rhs = self.get(vc, a, b) * self.get(v, a, c) * self.get(va, b, c);
                if lhs != rhs {
                    return Some((v, a, b, c));
                }
            }
        }
        None
    }
}

/// Integrates a closed 1-cochain along the spanning tree of
/// [`BoxShape::tree_parent`] and checks the result on every edge.
pub fn integrate(shape: &BoxShape, rho: &Cochain1) -> Result<Cochain0, PolyError> {
    let bad: Vec<_> = shape
        .squares()
        .filter(|&(v, k, l)| !rho.coboundary_at(shape, v, k, l).is_one())
        .collect();
    if !bad.is_empty() {
        return Err(PolyError::NotClosed(bad));
    }
    let mut phi = Cochain0::ones(shape);
    for v in 0..shape.len() {
        if let Some((u, i)) = shape.tree_parent(v) {
            phi.values[v] = phi.values[u] * rho.get(u, i);
        }
    }
    let check = phi.coboundary(shape);
    if let Some((v, i)) = shape.edges().find(|&(v, i)| check.get(v, i) != rho.get(v, i)) {
        // closed cochains on a box always integrate; reaching here is a bug
        return Err(PolyError::NotClosed(vec![(v, i, i)]));
    }
    Ok(phi)
}

/// A 0-cochain `φ` with `∂φ = ε ε'^{-1}`, giving the isomorphism
/// `φ·id : (A⊗B)(ε') → (A⊗B)(ε)` of total complexes.
pub fn cochain_ratio_iso(
    shape: &BoxShape,
    eps: &Cochain1,
    eps_prime: &Cochain1,
) -> Result<Cochain0, PolyError> {
    integrate(shape, &eps.mul(&eps_prime.inv()))
}

/// A basis element of a free module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gen {
    pub name: String,
    pub deg: Z2Degree,
    pub q: i64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FreeModule {
    pub gens: Vec<Gen>,
}

impl FreeModule {
    pub fn new(gens: Vec<Gen>) -> Self {
        Self { gens }
    }

    pub fn rank(&self) -> usize {
        self.gens.len()
    }

    pub fn degrees(&self) -> Vec<Z2Degree> {
        self.gens.iter().map(|g| g.deg).collect()
    }

    pub fn tensor(&self, other: &FreeModule) -> FreeModule {
        let mut gens = Vec::with_capacity(self.rank() * other.rank());
        for g in &self.gens {
            for h in &other.gens {
                gens.push(Gen {
                    name: format!("{}⊗{}", g.name, h.name),
                    deg: g.deg + h.deg,
                    q: g.q + h.q,
                });
            }
        }
        FreeModule { gens }
    }
}

/// `(f ⊗ g)(v ⊗ w) = bil(deg g, deg v) f(v) ⊗ g(w)`; basis `v ⊗ w` has index
/// `iv · dim W + iw`.
pub fn graded_kron(f: &RMatrix, g: &RMatrix, deg_g: Z2Degree, src_f_degs: &[Z2Degree]) -> RMatrix {
    assert_eq!(src_f_degs.len(), f.cols());
    let mut cols = Vec::with_capacity(f.cols() * g.cols());
    for (cf, &dv) in src_f_degs.iter().enumerate() {
        let s = bil(deg_g, dv);
        for cg in 0..g.cols() {
            let mut col = Vec::with_capacity(f.column(cf).len() * g.column(cg).len());
            for (rf, ef) in f.column(cf) {
                for (rg, eg) in g.column(cg) {
                    col.push((rf * g.rows() + rg, (ef * eg).scale(s)));
                }
            }
            cols.push(col);
        }
    }
    RMatrix::from_columns(f.rows() * g.rows(), cols)
}

/// Total-complex generator: vertex, name and q-degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TGen {
    pub vertex: usize,
    pub name: String,
    pub q: i64,
}

/// Cochain complex of free `R`-modules; `diffs[k] : C^{t_min+k} → C^{t_min+k+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplexR {
    pub t_min: i64,
    pub modules: Vec<Vec<TGen>>,
    pub diffs: Vec<RMatrix>,
}

impl ChainComplexR {
    pub fn t_max(&self) -> i64 {
        self.t_min + self.modules.len() as i64 - 1
    }

    pub fn rank(&self, t: i64) -> usize {
        let k = t - self.t_min;
        if k < 0 || k >= self.modules.len() as i64 {
            0
        } else {
            self.modules[k as usize].len()
        }
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.modules.iter().map(Vec::len).collect()
    }

    /// First degree where `d ∘ d ≠ 0`.
    pub fn check_d2(&self) -> Result<(), PolyError> {
        for k in 1..self.diffs.len() {
            if !self.diffs[k].compose(&self.diffs[k - 1]).is_zero() {
                return Err(PolyError::TotalNotComplex { t: self.t_min + k as i64 - 1 });
            }
        }
        Ok(())
    }

    /// Shifts every q-degree by `dq`.
    pub fn shift_q(&mut self, dq: i64) {
        for m in &mut self.modules {
            for g in m {
                g.q += dq;
            }
        }
    }
}

/// A homogeneous polycomplex of free `R`-modules over a box.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomogeneousPolycomplex {
    shape: BoxShape,
    objects: Vec<FreeModule>,
    edges: Vec<Option<RMatrix>>,
    psi: Vec<Z2Degree>,
}

impl HomogeneousPolycomplex {
    /// Builds and validates. `edge(v, i)` and `psi(v, i)` are queried for
    /// every edge of the box.
    pub fn new(
        shape: BoxShape,
        objects: Vec<FreeModule>,
        edge: impl FnMut(usize, usize) -> RMatrix,
        psi: impl FnMut(usize, usize) -> Z2Degree,
    ) -> Result<Self, PolyError> {
        let p = Self::new_unchecked(shape, objects, edge, psi)?;
        p.validate()?;
        Ok(p)
    }

    /// Builds without checking the polycomplex axioms (dimensions are checked).
    pub fn new_unchecked(
        shape: BoxShape,
        objects: Vec<FreeModule>,
        mut edge: impl FnMut(usize, usize) -> RMatrix,
        mut psi: impl FnMut(usize, usize) -> Z2Degree,
    ) -> Result<Self, PolyError> {
        if objects.len() != shape.len() {
            return Err(PolyError::Shape(format!(
                "{} objects for {} vertices",
                objects.len(),
                shape.len()
            )));
        }
        let n = shape.n();
        let mut edges = vec![None; shape.len() * n];
        let mut degs = vec![Z2Degree::ZERO; shape.len() * n];
        for (v, i) in shape.edges() {
            let w = shape.step(v, i).expect("edge");
            let m = edge(v, i);
            if m.rows() != objects[w].rank() || m.cols() != objects[v].rank() {
                return Err(PolyError::Dimension { v, i });
            }
            edges[v * n + i] = Some(m);
            degs[v * n + i] = psi(v, i);
        }
        Ok(Self { shape, objects, edges, psi: degs })
    }

    pub fn shape(&self) -> &BoxShape {
        &self.shape
    }

    pub fn object(&self, v: usize) -> &FreeModule {
        &self.objects[v]
    }

    pub fn objects(&self) -> &[FreeModule] {
        &self.objects
    }

    pub fn edge(&self, v: usize, i: usize) -> Option<&RMatrix> {
        self.edges[self.shape.edge_slot(v, i)].as_ref()
    }

    pub fn psi(&self, v: usize, i: usize) -> Z2Degree {
        self.psi[self.shape.edge_slot(v, i)]
    }

    /// Checks homogeneity, `α∘α = 0`, anticommuting squares and closedness of ψ.
    pub fn validate(&self) -> Result<(), PolyError> {
        let sh = &self.shape;
        for (v, i) in sh.edges() {
            let w = sh.step(v, i).expect("edge");
            let m = self.edge(v, i).expect("edge");
            let d = self.psi(v, i);
            for (row, col, _) in m.entries() {
                if self.objects[w].gens[row].deg - self.objects[v].gens[col].deg != d {
                    return Err(PolyError::NotHomogeneous { v, i, row, col, expected: d });
                }
            }
            if let Some(m2) = self.edge(w, i) {
                if !m2.compose(m).is_zero() {
                    return Err(PolyError::NotDifferential { v, i });
                }
            }
        }
        let squares: Vec<_> = sh.squares().collect();
        let bad = crate::par_find(&squares, |&(v, k, l)| {
            let vk = sh.step(v, k).expect("square");
            let vl = sh.step(v, l).expect("square");
            let kfirst = self.edge(vk, l).expect("edge").compose(self.edge(v, k).expect("edge"));
            let lfirst = self.edge(vl, k).expect("edge").compose(self.edge(v, l).expect("edge"));
            !kfirst.add(&lfirst).is_zero()
        });
        if let Some(&(v, k, l)) = bad {
            return Err(PolyError::NotAnticommuting { v, k, l });
        }
        for &(v, k, l) in &squares {
            let vk = sh.step(v, k).expect("square");
            let vl = sh.step(v, l).expect("square");
            if self.psi(v, k) + self.psi(vk, l) != self.psi(v, l) + self.psi(vl, k) {
                return Err(PolyError::PsiNotCocycle { v, k, l });
            }
        }
        Ok(())
    }

    /// `|α|(v)`: the integral of ψ from the minimal corner.
    pub fn abs_alpha_all(&self) -> Vec<Z2Degree> {
        let mut out = vec![Z2Degree::ZERO; self.shape.len()];
        for v in 0..self.shape.len() {
            if let Some((u, i)) = self.shape.tree_parent(v) {
                out[v] = out[u] + self.psi(u, i);
            }
        }
        out
    }

    pub fn abs_alpha(&self, v: usize) -> Z2Degree {
        self.abs_alpha_all()[v]
    }

    /// Total complex `Tot_t = ⊕_{|r| = t} A^r`, `d = Σ_i α_i`.
    pub fn total(&self) -> Result<ChainComplexR, PolyError> {
        let sh = &self.shape;
        if sh.is_empty() {
            return Ok(ChainComplexR { t_min: 0, modules: Vec::new(), diffs: Vec::new() });
        }
        let weights: Vec<i64> = (0..sh.len()).map(|v| sh.weight(v)).collect();
        let t_min = *weights.iter().min().expect("nonempty");
        let t_max = *weights.iter().max().expect("nonempty");
        let nt = (t_max - t_min + 1) as usize;
        let mut modules: Vec<Vec<TGen>> = vec![Vec::new(); nt];
        let mut offset = vec![0usize; sh.len()];
        for v in 0..sh.len() {
            let k = (weights[v] - t_min) as usize;
            offset[v] = modules[k].len();
            modules[k].extend(self.objects[v].gens.iter().map(|g| TGen {
                vertex: v,
                name: g.name.clone(),
                q: g.q,
            }));
        }
        let mut diffs: Vec<RMatrix> =
            (0..nt.saturating_sub(1)).map(|k| RMatrix::zeros(modules[k + 1].len(), modules[k].len())).collect();
        let mut cols: Vec<Vec<Vec<(usize, RingElement)>>> =
            diffs.iter().map(|d| vec![Vec::new(); d.cols()]).collect();
        for (v, i) in sh.edges() {
            let w = sh.step(v, i).expect("edge");
            let k = (weights[v] - t_min) as usize;
            for (row, col, e) in self.edge(v, i).expect("edge").entries() {
                cols[k][offset[v] + col].push((offset[w] + row, e.clone()));
            }
        }
        for (k, c) in cols.into_iter().enumerate() {
            diffs[k] = RMatrix::from_columns(modules[k + 1].len(), c);
        }
        let tot = ChainComplexR { t_min, modules, diffs };
        tot.check_d2()?;
        Ok(tot)
    }

    /// The ε-tensor product; `eps` defaults to [`koszul_cochain`].
    pub fn tensor(
        &self,
        other: &HomogeneousPolycomplex,
        eps: Option<&Cochain1>,
    ) -> Result<HomogeneousPolycomplex, PolyError> {
        let na = self.shape.n();
        let shape = self.shape.concat(&other.shape);
        let koszul;
        let eps = match eps {
            Some(e) => {
                check_compatible(self, other, e)?;
                e
            }
            None => {
                koszul = koszul_cochain(self, other);
                &koszul
            }
        };
        let la = self.shape.len();
        let objects: Vec<FreeModule> = (0..shape.len())
            .map(|v| self.objects[v % la].tensor(&other.objects[v / la]))
            .collect();
        let p = Self::new_unchecked(
            shape.clone(),
            objects,
            |v, i| {
                let (r, s) = (v % la, v / la);
                let m = if i < na {
                    let id = RMatrix::identity(other.objects[s].rank());
                    graded_kron(self.edge(r, i).expect("edge"), &id, Z2Degree::ZERO, &self.objects[r].degrees())
                } else {
                    let j = i - na;
                    let id = RMatrix::identity(self.objects[r].rank());
                    graded_kron(&id, other.edge(s, j).expect("edge"), other.psi(s, j), &self.objects[r].degrees())
                };
                m.scale(eps.get(v, i))
            },
            |v, i| if i < na { self.psi(v % la, i) } else { other.psi(v / la, i - na) },
        )?;
        p.validate()?;
        Ok(p)
    }

    /// JSON dump: box, per-vertex basis, per-edge sparse matrices and degrees.
    pub fn to_json(&self) -> Value {
        let sh = &self.shape;
        let vertices: Vec<Value> = (0..sh.len())
            .map(|v| {
                json!({
                    "r": sh.coords(v),
                    "basis": self.objects[v].gens.iter().map(|g| json!({
                        "name": g.name, "q": g.q, "deg": [g.deg.a, g.deg.b]
                    })).collect::<Vec<_>>(),
                })
            })
            .collect();
        let edges: Vec<Value> = sh
            .edges()
            .map(|(v, i)| {
                let m = self.edge(v, i).expect("edge");
                json!({
                    "from": sh.coords(v),
                    "direction": i,
                    "deg": [self.psi(v, i).a, self.psi(v, i).b],
                    "entries": m.entries().map(|(r, c, e)| json!([r, c, e.to_string()])).collect::<Vec<_>>(),
                })
            })
            .collect();
        json!({ "origin": sh.origin(), "dims": sh.dims(), "vertices": vertices, "edges": edges })
    }
}

/// The graded Koszul cochain on `box(A) × box(B)`: 1 on `A`-directions and
/// `(-1)^{|r|} bil(|α|(r), ψ_B(s → s+e_j))` on `B`-directions.
pub fn koszul_cochain(a: &HomogeneousPolycomplex, b: &HomogeneousPolycomplex) -> Cochain1 {
    koszul_from_parts(&a.shape, &a.abs_alpha_all(), &b.shape, |s, j| b.psi(s, j))
}

pub(crate) fn koszul_from_parts(
    sa: &BoxShape,
    abs_a: &[Z2Degree],
    sb: &BoxShape,
    psi_b: impl Fn(usize, usize) -> Z2Degree,
) -> Cochain1 {
    let na = sa.n();
    let la = sa.len();
    let shape = sa.concat(sb);
    Cochain1::from_fn(&shape, |v, i| {
        if i < na {
            UnitMonomial::ONE
        } else {
            let r = v % la;
            let sign = if sa.weight(r).rem_euclid(2) == 1 { UnitMonomial::MINUS_ONE } else { UnitMonomial::ONE };
            sign * bil(abs_a[r], psi_b(v / la, i - na))
        }
    })
}

/// Checks the compatibility condition: `∂ε = 1` on squares inside one
/// factor and `∂ε = -bil(ψ_A, ψ_B)` on mixed squares.
pub fn check_compatible(
    a: &HomogeneousPolycomplex,
    b: &HomogeneousPolycomplex,
    eps: &Cochain1,
) -> Result<(), PolyError> {
    let na = a.shape.n();
    let la = a.shape.len();
    let shape = a.shape.concat(&b.shape);
    for (v, k, l) in shape.squares() {
        let found = eps.coboundary_at(&shape, v, k, l);
        let expected = if k < na && l >= na {
            -bil(a.psi(v % la, k), b.psi(v / la, l - na))
        } else {
            UnitMonomial::ONE
        };
        if found != expected {
            return Err(PolyError::IncompatibleCochain { v, k, l, expected, found });
        }
    }
    Ok(())
}

/// `ε^{r,s}_{λ1,λ2} = bil(λ1 + |α1|(r1) - |β1|(s1), |β2|(s2))^{-1} · bil(|α1|(r1), λ2)`.
pub fn generic_sigma(
    lambda1: Z2Degree,
    lambda2: Z2Degree,
    abs_alpha1: Z2Degree,
    abs_beta1: Z2Degree,
    abs_beta2: Z2Degree,
) -> UnitMonomial {
    bil(lambda1 + abs_alpha1 - abs_beta1, abs_beta2).inv() * bil(abs_alpha1, lambda2)
}

/// One homogeneous component of a map between polycomplexes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub matrix: RMatrix,
    pub deg: Z2Degree,
}

/// A family of components `(r, s) ↦ A^r → B^s`; chain maps use `|r| = |s|`,
/// homotopies `|r| = |s| + 1`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PolyMorphism {
    pub comps: BTreeMap<(usize, usize), Component>,
}

pub type PolyChainMap = PolyMorphism;
pub type PolyHomotopy = PolyMorphism;

impl PolyMorphism {
    pub fn identity(a: &HomogeneousPolycomplex) -> Self {
        let comps = (0..a.shape.len())
            .map(|v| {
                let c = Component { matrix: RMatrix::identity(a.objects[v].rank()), deg: Z2Degree::ZERO };
                ((v, v), c)
            })
            .collect();
        Self { comps }
    }

    /// The component `A^r → B^s`, or the zero matrix.
    pub fn get(&self, r: usize, s: usize, a: &HomogeneousPolycomplex, b: &HomogeneousPolycomplex) -> RMatrix {
        self.comps
            .get(&(r, s))
            .map(|c| c.matrix.clone())
            .unwrap_or_else(|| RMatrix::zeros(b.objects[s].rank(), a.objects[r].rank()))
    }

    /// `self ∘ rhs` for `rhs : A → B`, `self : B → C`.
    pub fn compose(&self, rhs: &PolyMorphism) -> PolyMorphism {
        let mut comps: BTreeMap<(usize, usize), Component> = BTreeMap::new();
        for (&(r, s), c1) in &rhs.comps {
            for (&(s2, t), c2) in self.comps.range((s, 0)..=(s, usize::MAX)) {
                debug_assert_eq!(s2, s);
                let m = c2.matrix.compose(&c1.matrix);
                let deg = c1.deg + c2.deg;
                match comps.get_mut(&(r, t)) {
                    Some(e) => e.matrix = e.matrix.add(&m),
                    None => {
                        comps.insert((r, t), Component { matrix: m, deg });
                    }
                }
            }
        }
        PolyMorphism { comps }
    }

    pub fn sub(&self, rhs: &PolyMorphism) -> PolyMorphism {
        let mut comps = self.comps.clone();
        for (k, c) in &rhs.comps {
            match comps.get_mut(k) {
                Some(e) => e.matrix = e.matrix.sub(&c.matrix),
                None => {
                    comps.insert(*k, Component { matrix: c.matrix.neg(), deg: c.deg });
                }
            }
        }
        PolyMorphism { comps }
    }

    fn check_degrees(&self, a: &HomogeneousPolycomplex, b: &HomogeneousPolycomplex) -> Result<(), PolyError> {
        for (&(r, s), c) in &self.comps {
            if c.matrix.rows() != b.objects[s].rank() || c.matrix.cols() != a.objects[r].rank() {
                return Err(PolyError::ComponentDegree { r, s });
            }
            for (row, col, _) in c.matrix.entries() {
                if b.objects[s].gens[row].deg - a.objects[r].gens[col].deg != c.deg {
                    return Err(PolyError::ComponentDegree { r, s });
                }
            }
        }
        Ok(())
    }
}

/// `Σ_j β_j ∘ M^{r, s - e_j}` for target vertex `s`.
fn post_sum(m: &PolyMorphism, a: &HomogeneousPolycomplex, b: &HomogeneousPolycomplex, r: usize, s: usize) -> RMatrix {
    let mut acc = RMatrix::zeros(b.objects[s].rank(), a.objects[r].rank());
    for j in 0..b.shape.n() {
        if let Some(u) = b.shape.back(s, j) {
            if let Some(c) = m.comps.get(&(r, u)) {
                acc = acc.add(&b.edge(u, j).expect("edge").compose(&c.matrix));
            }
        }
    }
    acc
}

/// `Σ_i M^{r + e_i, s} ∘ α_i^r`.
fn pre_sum(m: &PolyMorphism, a: &HomogeneousPolycomplex, b: &HomogeneousPolycomplex, r: usize, s: usize) -> RMatrix {
    let mut acc = RMatrix::zeros(b.objects[s].rank(), a.objects[r].rank());
    for i in 0..a.shape.n() {
        if let Some(w) = a.shape.step(r, i) {
            if let Some(c) = m.comps.get(&(w, s)) {
                acc = acc.add(&c.matrix.compose(a.edge(r, i).expect("edge")));
            }
        }
    }
    acc
}

/// Checks `Σ_j β ∘ F = Σ_i F ∘ α` between all vertices with `|s| = |r| + 1`.
pub fn verify_chain_map(f: &PolyChainMap, a: &HomogeneousPolycomplex, b: &HomogeneousPolycomplex) -> Result<(), PolyError> {
    f.check_degrees(a, b)?;
    for &(r, s) in f.comps.keys() {
        if a.shape.weight(r) != b.shape.weight(s) {
            return Err(PolyError::ComponentDegree { r, s });
        }
    }
    for r in 0..a.shape.len() {
        for s in 0..b.shape.len() {
            if b.shape.weight(s) != a.shape.weight(r) + 1 {
                continue;
            }
            if post_sum(f, a, b, r, s) != pre_sum(f, a, b, r, s) {
                return Err(PolyError::ChainMap { r, s });
            }
        }
    }
    Ok(())
}

/// Checks `F - G = Σ_i H ∘ α_i + Σ_j β_j ∘ H` between vertices with `|r| = |s|`.
pub fn verify_homotopy(
    h: &PolyHomotopy,
    f: &PolyChainMap,
    g: &PolyChainMap,
    a: &HomogeneousPolycomplex,
    b: &HomogeneousPolycomplex,
) -> Result<(), PolyError> {
    h.check_degrees(a, b)?;
    for &(r, s) in h.comps.keys() {
        if a.shape.weight(r) != b.shape.weight(s) + 1 {
            return Err(PolyError::ComponentDegree { r, s });
        }
    }
    for r in 0..a.shape.len() {
        for s in 0..b.shape.len() {
            if b.shape.weight(s) != a.shape.weight(r) {
                continue;
            }
            let lhs = f.get(r, s, a, b).sub(&g.get(r, s, a, b));
            let rhs = pre_sum(h, a, b, r, s).add(&post_sum(h, a, b, r, s));
            if lhs != rhs {
                return Err(PolyError::Homotopy { r, s });
            }
        }
    }
    Ok(())
}

/// Source and target polycomplexes of a pair of maps `F_k : A_k → B_k`.
pub struct TensorPair<'a> {
    pub a1: &'a HomogeneousPolycomplex,
    pub a2: &'a HomogeneousPolycomplex,
    pub b1: &'a HomogeneousPolycomplex,
    pub b2: &'a HomogeneousPolycomplex,
}

impl TensorPair<'_> {
    /// `Σ_{pairs} sign · ε_{λ1,λ2} · (M1 ⊗ M2)`, with `sign(r1)` from `twist`.
    fn combine(&self, m1: &PolyMorphism, m2: &PolyMorphism, twist: bool, out: &mut PolyMorphism) {
        let (aa1, bb1, bb2) = (self.a1.abs_alpha_all(), self.b1.abs_alpha_all(), self.b2.abs_alpha_all());
        let (la, lb) = (self.a1.shape.len(), self.b1.shape.len());
        for (&(r1, s1), c1) in &m1.comps {
            for (&(r2, s2), c2) in &m2.comps {
                let eps = generic_sigma(c1.deg, c2.deg, aa1[r1], bb1[s1], bb2[s2]);
                let sign = if twist && self.a1.shape.weight(r1).rem_euclid(2) == 1 {
                    UnitMonomial::MINUS_ONE
                } else {
                    UnitMonomial::ONE
                };
                let m = graded_kron(&c1.matrix, &c2.matrix, c2.deg, &self.a1.objects[r1].degrees())
                    .scale(eps * sign);
                let key = (r1 + la * r2, s1 + lb * s2);
                match out.comps.get_mut(&key) {
                    Some(e) => e.matrix = e.matrix.add(&m),
                    None => {
                        out.comps.insert(key, Component { matrix: m, deg: c1.deg + c2.deg });
                    }
                }
            }
        }
    }
}

/// `F = ε_{F1,F2} · F1 ⊗ F2 : A1⊗A2 → B1⊗B2` (Koszul tensor products).
pub fn induced_morphism(p: &TensorPair<'_>, f1: &PolyChainMap, f2: &PolyChainMap) -> Result<PolyChainMap, PolyError> {
    verify_chain_map(f1, p.a1, p.b1)?;
    verify_chain_map(f2, p.a2, p.b2)?;
    let mut out = PolyMorphism::default();
    p.combine(f1, f2, false, &mut out);
    Ok(out)
}

/// `H = ε_{H1,F2} H1⊗F2 + (-1)^{|r1|} ε_{G1,H2} G1⊗H2`, a homotopy between
/// the morphisms induced by `(F1, F2)` and `(G1, G2)`.
pub fn induced_homotopy(
    p: &TensorPair<'_>,
    h1: &PolyHomotopy,
    f2: &PolyChainMap,
    g1: &PolyChainMap,
    h2: &PolyHomotopy,
) -> Result<PolyHomotopy, PolyError> {
    verify_chain_map(f2, p.a2, p.b2)?;
    verify_chain_map(g1, p.a1, p.b1)?;
    let mut out = PolyMorphism::default();
    p.combine(h1, f2, false, &mut out);
    p.combine(g1, h2, true, &mut out);
    Ok(out)
}

/// Web label and (q, t)-shift of a formal vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalObject {
    pub label: String,
    pub q: i64,
    pub t: i64,
}

/// A formal edge: unit scalar times a named foam.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalEdge {
    pub scalar: UnitMonomial,
    pub name: String,
}

/// A polycomplex of formal objects whose directions are distinct tensor
/// factors; composites follow the graded interchange law
/// `(id⊗β)(α⊗id) = bil(β, α) (α⊗id)(id⊗β)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalPolycomplex {
    pub shape: BoxShape,
    pub objects: Vec<FormalObject>,
    pub edges: Vec<Option<FormalEdge>>,
    pub psi: Vec<Z2Degree>,
}

impl FormalPolycomplex {
    pub fn point(label: &str) -> Self {
        Self {
            shape: BoxShape::point(),
            objects: vec![FormalObject { label: label.into(), q: 0, t: 0 }],
            edges: Vec::new(),
            psi: Vec::new(),
        }
    }

    pub fn edge(&self, v: usize, i: usize) -> Option<&FormalEdge> {
        self.edges[self.shape.edge_slot(v, i)].as_ref()
    }

    pub fn psi(&self, v: usize, i: usize) -> Z2Degree {
        self.psi[self.shape.edge_slot(v, i)]
    }

    pub fn abs_alpha_all(&self) -> Vec<Z2Degree> {
        let mut out = vec![Z2Degree::ZERO; self.shape.len()];
        for v in 0..self.shape.len() {
            if let Some((u, i)) = self.shape.tree_parent(v) {
                out[v] = out[u] + self.psi(u, i);
            }
        }
        out
    }

    /// Koszul tensor product.
    pub fn tensor(&self, other: &FormalPolycomplex) -> FormalPolycomplex {
        let na = self.shape.n();
        let la = self.shape.len();
        let shape = self.shape.concat(&other.shape);
        let eps = koszul_from_parts(&self.shape, &self.abs_alpha_all(), &other.shape, |s, j| other.psi(s, j));
        let objects = (0..shape.len())
            .map(|v| {
                let (a, b) = (&self.objects[v % la], &other.objects[v / la]);
                let label = match (a.label.is_empty(), b.label.is_empty()) {
                    (true, _) => b.label.clone(),
                    (_, true) => a.label.clone(),
                    _ => format!("{} {}", a.label, b.label),
                };
                FormalObject { label, q: a.q + b.q, t: a.t + b.t }
            })
            .collect();
        let n = shape.n();
        let mut edges = vec![None; shape.len() * n];
        let mut psi = vec![Z2Degree::ZERO; shape.len() * n];
        for (v, i) in shape.edges() {
            let (r, s) = (v % la, v / la);
            let (e, d) = if i < na {
                (self.edge(r, i).expect("edge"), self.psi(r, i))
            } else {
                (other.edge(s, i - na).expect("edge"), other.psi(s, i - na))
            };
            edges[v * n + i] = Some(FormalEdge { scalar: e.scalar * eps.get(v, i), name: e.name.clone() });
            psi[v * n + i] = d;
        }
        FormalPolycomplex { shape, objects, edges, psi }
    }

    /// Edge scalars as a 1-cochain.
    pub fn scalars(&self) -> Cochain1 {
        Cochain1::from_fn(&self.shape, |v, i| self.edge(v, i).expect("edge").scalar)
    }

    /// Checks `s(v,k) s(v+e_k,l) bil(ψ_l, ψ_k) = -s(v,l) s(v+e_l,k)` on every square.
    pub fn check_anticommute(&self) -> Result<(), PolyError> {
        let sh = &self.shape;
        for (v, k, l) in sh.squares() {
            let vk = sh.step(v, k).expect("square");
            let vl = sh.step(v, l).expect("square");
            let s = |u: usize, i: usize| self.edge(u, i).expect("edge").scalar;
            let kfirst = s(v, k) * s(vk, l) * bil(self.psi(vk, l), self.psi(v, k));
            let lfirst = s(v, l) * s(vl, k);
            if kfirst != -lfirst {
                return Err(PolyError::NotAnticommuting { v, k, l });
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        let sh = &self.shape;
        let vertices: Vec<Value> = (0..sh.len())
            .map(|v| {
                json!({
                    "r": sh.coords(v),
                    "web": self.objects[v].label,
                    "q": self.objects[v].q,
                    "t": self.objects[v].t,
                })
            })
            .collect();
        let edges: Vec<Value> = sh
            .edges()
            .map(|(v, i)| {
                let e = self.edge(v, i).expect("edge");
                json!({
                    "from": sh.coords(v),
                    "direction": i,
                    "saddle": e.name,
                    "deg": [self.psi(v, i).a, self.psi(v, i).b],
                    "scalar": e.scalar.to_string(),
                })
            })
            .collect();
        json!({ "dims": sh.dims(), "origin": sh.origin(), "vertices": vertices, "edges": edges })
    }
}

#[cfg(test)]
mod tests {
    use super::random::*;
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn one_map(deg: Z2Degree, m: RMatrix, src: Vec<Gen>, dst: Vec<Gen>) -> HomogeneousPolycomplex {
        HomogeneousPolycomplex::new(
            BoxShape::new(vec![0], vec![2]),
            vec![FreeModule::new(src), FreeModule::new(dst)],
            |_, _| m.clone(),
            |_, _| deg,
        )
        .unwrap()
    }

    fn g(name: &str, deg: Z2Degree) -> Gen {
        Gen { name: name.into(), deg, q: 0 }
    }

    #[test]
    fn total_of_single_map() {
        let a = one_map(Z2Degree::ZERO, RMatrix::identity(1), vec![g("x", Z2Degree::ZERO)], vec![g("y", Z2Degree::ZERO)]);
        let t = a.total().unwrap();
        assert_eq!((t.t_min, t.ranks()), (0, vec![1, 1]));
        let e = HomogeneousPolycomplex::new(BoxShape::point(), vec![FreeModule::default()], |_, _| unreachable!(), |_, _| unreachable!()).unwrap();
        assert_eq!(e.total().unwrap().ranks(), vec![0]);
    }

    #[test]
    fn hopf_koszul_scalar() {
        let u = Z2Degree::UNZIP;
        let a = one_map(u, RMatrix::identity(1), vec![g("x", Z2Degree::ZERO)], vec![g("y", u)]);
        let k = koszul_cochain(&a, &a);
        let sh = BoxShape::cube(2);
        // J-edge at |r| = 1, i.e. from (1, 0) in direction 1
        assert_eq!(k.get(1, 1), -UnitMonomial::Y);
        assert_eq!(k.get(0, 1), UnitMonomial::ONE);
        assert_eq!(k.get(0, 0), UnitMonomial::ONE);
        let t = a.tensor(&a, None).unwrap();
        assert_eq!(t.total().unwrap().ranks(), vec![1, 2, 1]);
        let _ = sh;
    }

    #[test]
    fn trivial_gradings_give_usual_koszul_rule() {
        let a = one_map(Z2Degree::ZERO, RMatrix::identity(1), vec![g("x", Z2Degree::ZERO)], vec![g("y", Z2Degree::ZERO)]);
        let k = koszul_cochain(&a, &a);
        assert_eq!(k.get(1, 1), UnitMonomial::MINUS_ONE);
        assert_eq!(k.get(0, 1), UnitMonomial::ONE);
    }

    #[test]
    fn unit_object_tensor() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let a = random_complex(&mut rng, &RandomSpec::default()).a;
        let one = HomogeneousPolycomplex::new(
            BoxShape::point(),
            vec![FreeModule::new(vec![g("1", Z2Degree::ZERO)])],
            |_, _| unreachable!(),
            |_, _| unreachable!(),
        )
        .unwrap();
        let t = a.tensor(&one, None).unwrap();
        assert_eq!(t.total().unwrap().diffs, a.total().unwrap().diffs);
    }

    #[test]
    fn non_closed_ratio_is_reported() {
        let sh = BoxShape::cube(2);
        let mut e = Cochain1::ones(&sh);
        e.set(&sh, 0, 0, UnitMonomial::X);
        match cochain_ratio_iso(&sh, &e, &Cochain1::ones(&sh)) {
            Err(PolyError::NotClosed(v)) => assert_eq!(v, vec![(0, 0, 1)]),
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(cochain_ratio_iso(&sh, &e, &e).unwrap(), Cochain0::ones(&sh));
    }

    #[test]
    fn generic_sigma_trivial_cases() {
        let z = Z2Degree::ZERO;
        let d = Z2Degree::new(2, -1);
        assert!(generic_sigma(z, z, d, d, Z2Degree::new(-3, 5)).is_one());
        // identities: λ = 0 and |α_k| = |β_k|
        assert!(generic_sigma(z, z, d, d, d).is_one());
    }

    #[test]
    fn cocycle_condition_holds_for_coboundaries() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 3..=5 {
            let sh = BoxShape::cube(n);
            let e = Cochain1::from_fn(&sh, |_, _| random_unit(&mut rng));
            assert_eq!(e.coboundary(&sh).cocycle_failure(&sh), None);
        }
    }

    #[test]
    fn incompatible_cochain_rejected() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = random_complex(&mut rng, &RandomSpec::default()).a;
        let b = random_complex(&mut rng, &RandomSpec::default()).a;
        let sh = a.shape().concat(b.shape());
        let ones = Cochain1::ones(&sh);
        if sh.squares().next().is_some() {
            assert!(matches!(a.tensor(&b, Some(&ones)), Err(PolyError::IncompatibleCochain { .. })));
        }
    }

    #[test]
    fn json_dump_has_all_edges() {
        let u = Z2Degree::UNZIP;
        let a = one_map(u, RMatrix::identity(1), vec![g("x", Z2Degree::ZERO)], vec![g("y", u)]);
        let t = a.tensor(&a, None).unwrap();
        let j = t.to_json();
        assert_eq!(j["edges"].as_array().unwrap().len(), 4);
        assert_eq!(j["vertices"].as_array().unwrap().len(), 4);
    }
}
