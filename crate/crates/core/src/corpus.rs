//! Bundled diagrams and the enumeration of two-crossing diagrams.

use crate::linkdiag::{parse_pd, PdCode};

/// Name and PD text of the bundled diagrams.
pub const CORPUS: &[(&str, &str)] = &[
    ("unknot", "UNKNOT 1"),
    ("hopf", "X(1,3,2,4) X(3,1,4,2)"),
    ("trefoil", "X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)"),
    ("figure-eight", "X(4,2,5,1) X(8,6,1,5) X(6,3,7,4) X(2,7,3,8)"),
    ("3_1", "X(6,3,1,4) X(4,1,5,2) X(2,5,3,6)"),
    ("4_1", "X(8,5,1,6) X(4,1,5,2) X(2,8,3,7) X(6,4,7,3)"),
    ("5_1", "X(10,5,1,6) X(6,1,7,2) X(2,7,3,8) X(8,3,9,4) X(4,9,5,10)"),
    ("5_2", "X(5,1,6,10) X(1,7,2,6) X(9,3,10,2) X(3,9,4,8) X(7,5,8,4)"),
    ("6_1", "X(7,12,8,1) X(1,6,2,7) X(11,3,12,2) X(3,11,4,10) X(9,5,10,4) X(5,9,6,8)"),
    ("6_2", "X(12,8,1,7) X(8,2,9,1) X(2,10,3,9) X(6,4,7,3) X(4,11,5,12) X(10,5,11,6)"),
    ("6_3", "X(9,12,10,1) X(1,5,2,4) X(7,3,8,2) X(3,9,4,8) X(5,10,6,11) X(11,6,12,7)"),
    ("7_1", "X(14,7,1,8) X(8,1,9,2) X(2,9,3,10) X(10,3,11,4) X(4,11,5,12) X(12,5,13,6) X(6,13,7,14)"),
    ("7_2", "X(14,11,1,12) X(10,1,11,2) X(2,9,3,10) X(8,3,9,4) X(4,7,5,8) X(12,5,13,6) X(6,13,7,14)"),
    ("7_3", "X(14,9,1,10) X(8,1,9,2) X(2,7,3,8) X(10,3,11,4) X(4,11,5,12) X(12,5,13,6) X(6,13,7,14)"),
    ("7_4", "X(14,8,1,7) X(6,2,7,1) X(2,12,3,11) X(10,4,11,3) X(4,10,5,9) X(12,6,13,5) X(8,14,9,13)"),
    ("7_5", "X(14,5,1,6) X(4,1,5,2) X(2,9,3,10) X(10,3,11,4) X(6,11,7,12) X(12,7,13,8) X(8,13,9,14)"),
    ("7_6", "X(9,14,10,1) X(1,8,2,9) X(13,3,14,2) X(3,13,4,12) X(7,4,8,5) X(5,10,6,11) X(11,6,12,7)"),
    ("7_7", "X(7,14,8,1) X(1,6,2,7) X(11,2,12,3) X(3,10,4,11) X(13,5,14,4) X(5,9,6,8) X(9,13,10,12)"),
    ("L2a1", "X(3,2,4,1) X(1,4,2,3)"),
    ("L4a1", "X(5,1,6,4) X(1,7,2,6) X(7,3,8,2) X(3,5,4,8)"),
    ("L5a1", "X(5,1,6,4) X(1,5,2,10) X(7,2,8,3) X(3,8,4,9) X(9,6,10,7)"),
    ("L6a4", "X(5,1,6,4) X(1,9,2,12) X(7,2,8,3) X(3,10,4,11) X(9,5,10,8) X(11,6,12,7)"),
];

/// Parsed bundled diagram by name.
pub fn get(name: &str) -> Option<PdCode> {
    CORPUS.iter().find(|(n, _)| *n == name).map(|(_, t)| parse_pd(t).expect("bundled code is valid"))
}

/// All bundled diagrams, parsed.
pub fn all() -> Vec<(&'static str, PdCode)> {
    CORPUS.iter().map(|(n, t)| (*n, parse_pd(t).expect("bundled code is valid"))).collect()
}

/// Every oriented, planar two-crossing PD code on labels `1..=4`.
pub fn two_crossing_diagrams() -> Vec<PdCode> {
    let mut out = Vec::new();
    let mut slots = [0usize; 8];
    fill(&mut slots, 0, &mut [0; 5], &mut out);
    out
}

fn fill(slots: &mut [usize; 8], k: usize, used: &mut [usize; 5], out: &mut Vec<PdCode>) {
    if k == 8 {
        let xs = vec![[slots[0], slots[1], slots[2], slots[3]], [slots[4], slots[5], slots[6], slots[7]]];
        if let Ok(pd) = PdCode::new(xs, 0) {
            if pd.is_planar() {
                out.push(pd);
            }
        }
        return;
    }
    for l in 1..=4 {
        if used[l] < 2 {
            used[l] += 1;
            slots[k] = l;
            fill(slots, k + 1, used, out);
            used[l] -= 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_is_valid() {
        for (name, pd) in all() {
            assert!(pd.is_planar(), "{name}");
            let comps = match name {
                "L6a4" => 3,
                n if n.starts_with('L') || n == "hopf" => 2,
                _ => 1,
            };
            assert_eq!(pd.n_components(), comps, "{name}");
        }
        assert_eq!(get("7_7").unwrap().n_crossings(), 7);
    }

    #[test]
    fn two_crossing_count() {
        let all = two_crossing_diagrams();
        assert!(!all.is_empty());
        assert!(all.iter().all(|p| p.n_crossings() == 2));
    }
}
