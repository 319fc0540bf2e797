//! Homology of small links against published tables.

use std::collections::BTreeMap;

use covkh::corpus;
use covkh::glcube::algebrize_gl2;
use covkh::homology::{link_homology, BigradedHomology};
use covkh::linkdiag::ArcOrientation;
use covkh::slcube::{build_kom_sl2, TreeChoice, Variant};
use covkh::{parse_pd, PdCode, Specialization};

fn sl2_homology(pd: &PdCode, s: Specialization) -> BigradedHomology {
    let c = build_kom_sl2(pd, ArcOrientation(0), Variant::X, TreeChoice::Min).unwrap().complex().unwrap();
    link_homology(&c, s, pd.writhe()).unwrap()
}

fn gl2_homology(pd: &PdCode, s: Specialization) -> BigradedHomology {
    let c = algebrize_gl2(pd, ArcOrientation(0)).unwrap().complex().unwrap();
    link_homology(&c, s, pd.writhe()).unwrap()
}

/// `(t, q) -> (free rank, torsion)` as a compact map.
fn summary(h: &BigradedHomology) -> BTreeMap<(i64, i64), (usize, Vec<u128>)> {
    h.groups.iter().map(|(&k, g)| (k, (g.free, g.torsion.clone()))).collect()
}

fn expect(entries: &[((i64, i64), usize, &[u128])]) -> BTreeMap<(i64, i64), (usize, Vec<u128>)> {
    entries.iter().map(|&(k, f, t)| (k, (f, t.to_vec()))).collect()
}

#[test]
fn left_trefoil_even() {
    let pd = corpus::get("trefoil").unwrap();
    assert_eq!(pd.writhe(), -3);
    let want = expect(&[
        ((-3, -9), 1, &[]),
        ((-2, -7), 0, &[2]),
        ((-2, -5), 1, &[]),
        ((0, -3), 1, &[]),
        ((0, -1), 1, &[]),
    ]);
    assert_eq!(summary(&sl2_homology(&pd, Specialization::EVEN)), want);
    assert_eq!(summary(&gl2_homology(&pd, Specialization::EVEN)), want);
}

#[test]
fn left_trefoil_odd() {
    let pd = corpus::get("trefoil").unwrap();
    let want = expect(&[
        ((-3, -9), 1, &[]),
        ((-3, -7), 1, &[]),
        ((-2, -7), 1, &[]),
        ((-2, -5), 1, &[]),
        ((0, -3), 1, &[]),
        ((0, -1), 1, &[]),
    ]);
    assert_eq!(summary(&sl2_homology(&pd, Specialization::ODD)), want);
    assert_eq!(summary(&gl2_homology(&pd, Specialization::ODD)), want);
}

#[test]
fn right_trefoil_is_the_mirror() {
    let pd = corpus::get("trefoil").unwrap().mirror();
    let h = sl2_homology(&pd, Specialization::EVEN);
    let want = expect(&[((0, 1), 1, &[]), ((0, 3), 1, &[]), ((2, 5), 1, &[]), ((3, 7), 0, &[2]), ((3, 9), 1, &[])]);
    assert_eq!(summary(&h), want);
}

#[test]
fn positive_hopf() {
    let pd = corpus::get("hopf").unwrap();
    assert_eq!(pd.writhe(), 2);
    let want = expect(&[((0, 0), 1, &[]), ((0, 2), 1, &[]), ((2, 4), 1, &[]), ((2, 6), 1, &[])]);
    for s in [Specialization::EVEN, Specialization::ODD] {
        assert_eq!(summary(&sl2_homology(&pd, s)), want);
        assert_eq!(summary(&gl2_homology(&pd, s)), want);
    }
}

#[test]
fn figure_eight() {
    let pd = corpus::get("figure-eight").unwrap();
    let want = expect(&[
        ((-2, -5), 1, &[]),
        ((-1, -3), 0, &[2]),
        ((-1, -1), 1, &[]),
        ((0, -1), 1, &[]),
        ((0, 1), 1, &[]),
        ((1, 1), 1, &[]),
        ((2, 3), 0, &[2]),
        ((2, 5), 1, &[]),
    ]);
    assert_eq!(summary(&sl2_homology(&pd, Specialization::EVEN)), want);
    assert_eq!(summary(&gl2_homology(&pd, Specialization::EVEN)), want);
}

#[test]
fn two_component_unlink() {
    let pd = parse_pd("UNKNOT 2").unwrap();
    for s in [Specialization::EVEN, Specialization::ODD] {
        let h = sl2_homology(&pd, s);
        assert_eq!(h.get(0, 2).free, 1);
        assert_eq!(h.get(0, 0).free, 2);
        assert_eq!(h.get(0, -2).free, 1);
    }
}
