//! Random polycomplexes `A = P(B ⊕ C)` with `C` contractible, together with
//! the Gaussian-elimination data `F : A → B`, `G : B → A` and a homotopy
//! `H : id_A ≃ G∘F`.

use rand::Rng;

use super::*;
use crate::ring::Mono;

/// Size limits for [`random_complex`].
#[derive(Clone, Debug)]
pub struct RandomSpec {
    pub max_dirs: usize,
    pub max_side: usize,
    pub max_pairs: usize,
    pub max_extra: usize,
}

impl Default for RandomSpec {
    fn default() -> Self {
        Self { max_dirs: 3, max_side: 3, max_pairs: 3, max_extra: 2 }
    }
}

/// A random instance and its elimination data.
#[derive(Clone, Debug)]
pub struct RandomInstance {
    pub a: HomogeneousPolycomplex,
    pub b: HomogeneousPolycomplex,
    /// `A → B`, homogeneous of degree `shift`.
    pub f: PolyChainMap,
    /// `B → A`, homogeneous of degree `-shift`.
    pub g: PolyChainMap,
    /// Homotopy `id_A ≃ g ∘ f` on `A`.
    pub h: PolyHomotopy,
    pub shift: Z2Degree,
}

pub fn random_unit<G: Rng>(rng: &mut G) -> UnitMonomial {
    let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
    UnitMonomial::new(sign, rng.gen_range(0..2), rng.gen_range(0..2), rng.gen_range(-2..=2))
}

pub fn random_degree<G: Rng>(rng: &mut G) -> Z2Degree {
    Z2Degree::new(rng.gen_range(-2..=2), rng.gen_range(-2..=2))
}

pub fn random_element<G: Rng>(rng: &mut G) -> RingElement {
    let terms: Vec<(Mono, i64)> = (0..rng.gen_range(1..=3))
        .map(|_| {
            let u = random_unit(rng);
            (u.mono(), i64::from(u.sign()) * rng.gen_range(1..=2))
        })
        .collect();
    RingElement::from_terms(terms)
}

fn gen(name: String, deg: Z2Degree) -> Gen {
    Gen { name, deg, q: -deg.qdeg() }
}

/// One direction: `side` rank-one objects joined by unit or zero maps with
/// consecutive composites zero.
fn random_factor<G: Rng>(rng: &mut G, k: usize, side: usize, d: Z2Degree) -> HomogeneousPolycomplex {
    let base = random_degree(rng);
    let objects = (0..side)
        .map(|j| FreeModule::new(vec![gen(format!("e{k}_{j}"), base + d.scale(j as i64))]))
        .collect();
    let mut nonzero = vec![false; side.saturating_sub(1)];
    let mut prev = false;
    for z in nonzero.iter_mut() {
        *z = !prev && rng.gen_bool(0.6);
        prev = *z;
    }
    let units: Vec<UnitMonomial> = nonzero.iter().map(|_| random_unit(rng)).collect();
    let shape = BoxShape::new(vec![rng.gen_range(-2..=2)], vec![side]);
    HomogeneousPolycomplex::new(
        shape,
        objects,
        |v, _| {
            if nonzero[v] {
                RMatrix::from_triplets(1, 1, [(0, 0, RingElement::from(units[v]))])
            } else {
                RMatrix::zeros(1, 1)
            }
        },
        |_, _| d,
    )
    .expect("random factor is a polycomplex")
}

/// Degree-zero unitriangular change of basis and its inverse.
fn random_unitriangular<G: Rng>(rng: &mut G, degs: &[Z2Degree]) -> (RMatrix, RMatrix) {
    let n = degs.len();
    let mut trip = Vec::new();
    for j in 0..n {
        for i in 0..j {
            if degs[i] == degs[j] && rng.gen_bool(0.7) {
                trip.push((i, j, random_element(rng)));
            }
        }
    }
    let nil = RMatrix::from_triplets(n, n, trip);
    let p = RMatrix::identity(n).add(&nil);
    let mut inv = RMatrix::identity(n);
    let mut term = RMatrix::identity(n);
    for _ in 0..n {
        term = term.compose(&nil).neg();
        if term.is_zero() {
            break;
        }
        inv = inv.add(&term);
    }
    debug_assert_eq!(p.compose(&inv), RMatrix::identity(n));
    (p, inv)
}

struct Pair {
    v: usize,
    i: usize,
    u: UnitMonomial,
    x: usize,
    y: usize,
}

pub fn random_complex<G: Rng>(rng: &mut G, spec: &RandomSpec) -> RandomInstance {
    let n = rng.gen_range(1..=spec.max_dirs.max(1));
    let dirs: Vec<Z2Degree> = (0..n).map(|_| random_degree(rng)).collect();
    let side0 = rng.gen_range(2..=spec.max_side.max(2));
    let mut b0 = random_factor(rng, 0, side0, dirs[0]);
    for (k, &d) in dirs.iter().enumerate().skip(1) {
        let side = rng.gen_range(2..=spec.max_side.max(2));
        b0 = b0.tensor(&random_factor(rng, k, side, d), None).expect("Koszul tensor");
    }
    let shape = b0.shape().clone();
    let nv = shape.len();

    // B = B0 plus isolated generators; C = contractible pairs
    let mut bgens: Vec<Vec<Gen>> = b0.objects().iter().map(|m| m.gens.clone()).collect();
    for (v, gens) in bgens.iter_mut().enumerate() {
        for k in 0..rng.gen_range(0..=spec.max_extra) {
            let deg = if !gens.is_empty() && rng.gen_bool(0.5) {
                gens[rng.gen_range(0..gens.len())].deg
            } else {
                random_degree(rng)
            };
            gens.push(gen(format!("z{v}_{k}"), deg));
        }
    }
    let mut agens = bgens.clone();
    let edges: Vec<(usize, usize)> = shape.edges().collect();
    let mut pairs = Vec::new();
    if !edges.is_empty() {
        for p in 0..rng.gen_range(0..=spec.max_pairs) {
            let (v, i) = edges[rng.gen_range(0..edges.len())];
            let w = shape.step(v, i).expect("edge");
            let deg = if !agens[v].is_empty() && rng.gen_bool(0.5) {
                agens[v][rng.gen_range(0..agens[v].len())].deg
            } else {
                random_degree(rng)
            };
            let x = agens[v].len();
            agens[v].push(gen(format!("x{p}"), deg));
            let y = agens[w].len();
            agens[w].push(gen(format!("y{p}"), deg + dirs[i]));
            pairs.push(Pair { v, i, u: random_unit(rng), x, y });
        }
    }

    let shift = random_degree(rng);
    let nb: Vec<usize> = bgens.iter().map(Vec::len).collect();
    let (ps, pinvs): (Vec<RMatrix>, Vec<RMatrix>) = agens
        .iter()
        .map(|g| random_unitriangular(rng, &g.iter().map(|x| x.deg).collect::<Vec<_>>()))
        .unzip();
    let b0_edge = |v: usize, i: usize| b0.edge(v, i).expect("edge").clone();

    let a = HomogeneousPolycomplex::new(
        shape.clone(),
        agens.iter().cloned().map(FreeModule::new).collect(),
        |v, i| {
            let w = shape.step(v, i).expect("edge");
            let na = agens[v].len();
            let mut m = b0_edge(v, i).embed(agens[w].len(), na, 0, 0);
            let c = pairs
                .iter()
                .filter(|p| p.v == v && p.i == i)
                .map(|p| (p.y, p.x, RingElement::from(p.u)));
            m = m.add(&RMatrix::from_triplets(agens[w].len(), na, c));
            ps[w].compose(&m).compose(&pinvs[v])
        },
        |_, i| dirs[i],
    )
    .expect("conjugated polycomplex");

    let shifted: Vec<FreeModule> = bgens
        .iter()
        .map(|g| {
            FreeModule::new(g.iter().map(|x| gen(x.name.clone(), x.deg + shift)).collect())
        })
        .collect();
    let b = HomogeneousPolycomplex::new(
        shape.clone(),
        shifted,
        |v, i| {
            let w = shape.step(v, i).expect("edge");
            b0_edge(v, i).embed(nb[w], nb[v], 0, 0)
        },
        |_, i| dirs[i],
    )
    .expect("summand polycomplex");

    let mut f = PolyMorphism::default();
    let mut g = PolyMorphism::default();
    for v in 0..nv {
        let na = agens[v].len();
        let proj = RMatrix::identity(nb[v]).embed(nb[v], na, 0, 0);
        let incl = RMatrix::identity(nb[v]).embed(na, nb[v], 0, 0);
        f.comps.insert((v, v), Component { matrix: proj.compose(&pinvs[v]), deg: shift });
        g.comps.insert((v, v), Component { matrix: ps[v].compose(&incl), deg: -shift });
    }
    let mut h = PolyMorphism::default();
    for p in &pairs {
        let w = shape.step(p.v, p.i).expect("edge");
        let raw = RMatrix::from_triplets(
            agens[p.v].len(),
            agens[w].len(),
            [(p.x, p.y, RingElement::from(p.u.inv()))],
        );
        let m = ps[p.v].compose(&raw).compose(&pinvs[w]);
        match h.comps.get_mut(&(w, p.v)) {
            Some(c) => c.matrix = c.matrix.add(&m),
            None => {
                h.comps.insert((w, p.v), Component { matrix: m, deg: -dirs[p.i] });
            }
        }
    }
    RandomInstance { a, b, f, g, h, shift }
}
