//! Property tests across modules.

use covkh::corpus;
use covkh::glcube::{algebrize_gl2, compare_hypercubes};
use covkh::homology::{link_homology, BigradedHomology};
use covkh::linkdiag::ArcOrientation;
use covkh::polycomplex::random::{random_complex, random_unit, RandomSpec};
use covkh::polycomplex::Cochain0;
use covkh::slcube::{build_kom_sl2, TreeChoice, Variant};
use covkh::{parse_pd, PdCode, Specialization};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const SMALL: &[&str] = &["hopf", "trefoil", "figure-eight", "5_1", "5_2", "L4a1"];

fn homology(pd: &PdCode, orient: u64, tree: TreeChoice, s: Specialization) -> BigradedHomology {
    let c = build_kom_sl2(pd, ArcOrientation(orient), Variant::X, tree).unwrap().complex().unwrap();
    link_homology(&c, s, pd.writhe()).unwrap()
}

fn permuted(pd: &PdCode, seed: u64) -> PdCode {
    use rand::seq::SliceRandom;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut xs = pd.crossings().to_vec();
    xs.shuffle(&mut rng);
    PdCode::new(xs, pd.extra_circles()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn homology_ignores_choices(k in 0..SMALL.len(), orient in 0u64..32, seed in 0u64..1000, odd in any::<bool>()) {
        let pd = corpus::get(SMALL[k]).unwrap();
        let s = if odd { Specialization::ODD } else { Specialization::EVEN };
        let base = homology(&pd, 0, TreeChoice::Min, s);
        let mask = (1u64 << pd.n_crossings()) - 1;
        prop_assert_eq!(&homology(&pd, orient & mask, TreeChoice::Max, s), &base);
        prop_assert_eq!(&homology(&permuted(&pd, seed), orient & mask, TreeChoice::Min, s), &base);
    }

    #[test]
    fn comparison_survives_rescaling(k in 0..SMALL.len(), orient in 0u64..32, seed in any::<u64>()) {
        let pd = corpus::get(SMALL[k]).unwrap();
        let o = ArcOrientation(orient & ((1 << pd.n_crossings()) - 1));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = Cochain0 { values: (0..1 << pd.n_crossings()).map(|_| random_unit(&mut rng)).collect() };
        let gl = algebrize_gl2(&pd, o).unwrap().rescaled(&u).unwrap();
        let sl = build_kom_sl2(&pd, o, Variant::X, TreeChoice::Min).unwrap();
        prop_assert!(compare_hypercubes(&gl, &sl).is_ok());
    }

    #[test]
    fn pd_text_round_trip(k in 0..corpus::CORPUS.len()) {
        let pd = parse_pd(corpus::CORPUS[k].1).unwrap();
        prop_assert_eq!(&parse_pd(&pd.to_text()).unwrap(), &pd);
        prop_assert_eq!(&pd.mirror().mirror(), &pd);
        prop_assert_eq!(pd.mirror().writhe(), -pd.writhe());
    }

    #[test]
    fn koszul_tensor_is_associative(seed in any::<u64>()) {
        let spec = RandomSpec { max_dirs: 1, max_side: 2, max_pairs: 1, max_extra: 1 };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b, c) = (random_complex(&mut rng, &spec).a, random_complex(&mut rng, &spec).a, random_complex(&mut rng, &spec).a);
        let left = a.tensor(&b, None).unwrap().tensor(&c, None).unwrap();
        let right = a.tensor(&b.tensor(&c, None).unwrap(), None).unwrap();
        prop_assert_eq!(left.shape(), right.shape());
        for (v, i) in left.shape().edges() {
            prop_assert_eq!(left.edge(v, i), right.edge(v, i));
        }
    }

    #[test]
    fn total_complex_squares_to_zero(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = random_complex(&mut rng, &RandomSpec::default());
        prop_assert!(inst.a.total().is_ok());
        prop_assert!(inst.b.total().is_ok());
    }
}
