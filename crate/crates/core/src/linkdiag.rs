//! Oriented link diagrams given as planar-diagram (PD) codes, their
//! resolutions, circle tracing and saddle classification.
//!
//! A crossing `X(i,j,k,l)` lists its four arc labels counterclockwise
//! starting from the incoming under-strand: `i` at position 0 (bottom),
//! `j` at 1 (right), `k` at 2 (top), `l` at 3 (left). The 0-smoothing joins
//! positions `0–1` and `2–3`, the 1-smoothing joins `0–3` and `1–2`.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Bit `i` holds `r_i`.
pub type ResolutionVector = usize;

/// Largest number of crossings a hypercube may have.
pub const MAX_CUBE_CROSSINGS: usize = 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PdError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("arc label {label} occurs {count} times (expected exactly 2)")]
    LabelCount { label: usize, count: usize },
    #[error("arc label {label} is missing (labels must be 1..{max})")]
    MissingLabel { label: usize, max: usize },
    #[error("arc labels must be positive")]
    ZeroLabel,
    #[error("inconsistent orientation along arc {label}")]
    Orientation { label: usize },
    #[error("invalid JSON PD input: {0}")]
    Json(String),
    #[error("crossing index {index} out of range for {n} crossings")]
    CrossingIndex { index: usize, n: usize },
    #[error("edge r={r:#b}, i={i} does not exist (r_i = 1)")]
    NoEdge { r: usize, i: usize },
    #[error("saddle at crossing {i} changes circle count from {before} to {after}")]
    SaddleMismatch { i: usize, before: usize, after: usize },
    #[error("{n} crossings exceed the hypercube limit of {max}")]
    TooManyCrossings { n: usize, max: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Occurrence {
    pub crossing: usize,
    pub pos: usize,
}

/// A validated oriented PD code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PdCode {
    crossings: Vec<[usize; 4]>,
    extra_circles: usize,
    /// Per label (index `label - 1`): where the arc starts and where it ends.
    tail: Vec<Occurrence>,
    head: Vec<Occurrence>,
    /// Position (1 or 3) where the over-strand enters.
    over_in: Vec<usize>,
}

#[derive(Deserialize)]
struct PdJson {
    crossings: Vec<[usize; 4]>,
    #[serde(default)]
    extra_circles: usize,
}

impl PdCode {
    pub fn new(crossings: Vec<[usize; 4]>, extra_circles: usize) -> Result<Self, PdError> {
        let n = crossings.len();
        let nl = 2 * n;
        let mut occ: Vec<Vec<Occurrence>> = vec![Vec::new(); nl];
        for (c, x) in crossings.iter().enumerate() {
            for (p, &l) in x.iter().enumerate() {
                if l == 0 {
                    return Err(PdError::ZeroLabel);
                }
                if l > nl {
                    let count = crossings.iter().flatten().filter(|&&m| m == l).count();
                    if count != 2 {
                        return Err(PdError::LabelCount { label: l, count });
                    }
                    let missing = (1..=nl).find(|m| !crossings.iter().flatten().any(|v| v == m));
                    return Err(PdError::MissingLabel { label: missing.unwrap_or(l), max: nl });
                }
                occ[l - 1].push(Occurrence { crossing: c, pos: p });
            }
        }
        for (k, o) in occ.iter().enumerate() {
            if o.len() != 2 {
                return Err(PdError::LabelCount { label: k + 1, count: o.len() });
            }
        }
        let dir = orient(&crossings, &occ)?;
        let node = |o: Occurrence| o.crossing * 4 + o.pos;
        let mut tail = Vec::with_capacity(nl);
        let mut head = Vec::with_capacity(nl);
        for o in &occ {
            let (h, t) = if dir[node(o[0])] { (o[0], o[1]) } else { (o[1], o[0]) };
            head.push(h);
            tail.push(t);
        }
        let over_in = (0..n).map(|c| if dir[c * 4 + 1] { 1 } else { 3 }).collect();
        Ok(Self { crossings, extra_circles, tail, head, over_in })
    }

    pub fn unknot() -> Self {
        Self::new(Vec::new(), 1).expect("valid")
    }

    pub fn crossings(&self) -> &[[usize; 4]] {
        &self.crossings
    }

    pub fn n_crossings(&self) -> usize {
        self.crossings.len()
    }

    pub fn extra_circles(&self) -> usize {
        self.extra_circles
    }

    /// Sign of crossing `c`: the over-strand runs `l → j` on positive crossings.
    pub fn sign(&self, c: usize) -> i8 {
        if self.over_in[c] == 3 {
            1
        } else {
            -1
        }
    }

    pub fn signs(&self) -> CrossingSigns {
        CrossingSigns { signs: (0..self.n_crossings()).map(|c| self.sign(c)).collect() }
    }

    pub fn n_plus(&self) -> usize {
        (0..self.n_crossings()).filter(|&c| self.sign(c) > 0).count()
    }

    pub fn n_minus(&self) -> usize {
        self.n_crossings() - self.n_plus()
    }

    pub fn writhe(&self) -> i64 {
        self.n_plus() as i64 - self.n_minus() as i64
    }

    /// Start and end of the arc with this label.
    pub fn arc_ends(&self, label: usize) -> (Occurrence, Occurrence) {
        (self.tail[label - 1], self.head[label - 1])
    }

    /// The occurrence of `label` other than `o`.
    fn other_end(&self, o: Occurrence) -> Occurrence {
        let l = self.crossings[o.crossing][o.pos];
        let (t, h) = (self.tail[l - 1], self.head[l - 1]);
        if t == o {
            h
        } else {
            t
        }
    }

    /// Number of link components (including crossingless circles).
    pub fn n_components(&self) -> usize {
        let nl = 2 * self.n_crossings();
        let mut seen = vec![false; nl];
        let mut count = 0;
        for start in 0..nl {
            if seen[start] {
                continue;
            }
            count += 1;
            let mut l = start + 1;
            while !seen[l - 1] {
                seen[l - 1] = true;
                let h = self.head[l - 1];
                let out = match h.pos {
                    0 => 2,
                    p => 4 - p,
                };
                l = self.crossings[h.crossing][out];
            }
        }
        count + self.extra_circles
    }

    /// Euler-characteristic planarity test of the underlying 4-valent graph.
    pub fn is_planar(&self) -> bool {
        let n = self.n_crossings();
        if n == 0 {
            return true;
        }
        let mut parent: Vec<usize> = (0..n).collect();
        for l in 0..2 * n {
            union(&mut parent, self.tail[l].crossing, self.head[l].crossing);
        }
        let comps = (0..n).filter(|&c| find(&mut parent, c) == c).count();
        let mut seen = vec![false; 4 * n];
        let mut faces = 0;
        for s in 0..4 * n {
            if seen[s] {
                continue;
            }
            faces += 1;
            let mut cur = s;
            while !seen[cur] {
                seen[cur] = true;
                let o = self.other_end(Occurrence { crossing: cur / 4, pos: cur % 4 });
                cur = o.crossing * 4 + (o.pos + 1) % 4;
            }
        }
        faces == n + 2 * comps
    }

    /// Mirror image: over and under strands exchanged.
    pub fn mirror(&self) -> Self {
        let xs = self.crossings.iter().map(|x| [x[0], x[3], x[2], x[1]]).collect();
        Self::new(xs, self.extra_circles).expect("mirror of a valid code is valid")
    }

    /// Adds a Reidemeister-I kink on the arc `label`; `kind` in `0..4` picks
    /// the local picture `X(e,f,f,e')`, `X(e,e',f,f)`, `X(f,e,e',f)`,
    /// `X(f,f,e',e)`. Labels are renumbered along the orientation.
    pub fn with_kink(&self, label: usize, kind: usize) -> Result<Self, PdError> {
        let nl = 2 * self.n_crossings();
        if label == 0 || label > nl {
            return Err(PdError::MissingLabel { label, max: nl });
        }
        let (e1, f, e2) = (label, nl + 1, nl + 2);
        let mut xs = self.crossings.clone();
        let h = self.head[label - 1];
        xs[h.crossing][h.pos] = e2;
        xs.push(match kind % 4 {
            0 => [e1, f, f, e2],
            1 => [e1, e2, f, f],
            2 => [f, e1, e2, f],
            _ => [f, f, e2, e1],
        });
        Self::new(xs, self.extra_circles)?.relabeled()
    }

    /// Renumbers arcs `1..2N` following each component's orientation.
    pub fn relabeled(&self) -> Result<Self, PdError> {
        let nl = 2 * self.n_crossings();
        let mut new_label = vec![0usize; nl];
        let mut next = 1;
        for start in 0..nl {
            if new_label[start] != 0 {
                continue;
            }
            let mut l = start + 1;
            while new_label[l - 1] == 0 {
                new_label[l - 1] = next;
                next += 1;
                let h = self.head[l - 1];
                let out = match h.pos {
                    0 => 2,
                    p => 4 - p,
                };
                l = self.crossings[h.crossing][out];
            }
        }
        let xs = self.crossings.iter().map(|x| x.map(|l| new_label[l - 1])).collect();
        Self::new(xs, self.extra_circles)
    }

    /// Circles of the resolution `r`.
    pub fn resolve(&self, r: ResolutionVector) -> ResolvedState {
        let nl = 2 * self.n_crossings();
        let mut parent: Vec<usize> = (0..nl).collect();
        for (c, x) in self.crossings.iter().enumerate() {
            if r >> c & 1 == 0 {
                union(&mut parent, x[0] - 1, x[1] - 1);
                union(&mut parent, x[2] - 1, x[3] - 1);
            } else {
                union(&mut parent, x[0] - 1, x[3] - 1);
                union(&mut parent, x[1] - 1, x[2] - 1);
            }
        }
        // Labels are visited in increasing order, so ids follow minimal labels.
        let mut root_id = vec![usize::MAX; nl];
        let mut n = 0;
        let arc_circle: Vec<usize> = (0..nl)
            .map(|l| {
                let root = find(&mut parent, l);
                if root_id[root] == usize::MAX {
                    root_id[root] = n;
                    n += 1;
                }
                root_id[root]
            })
            .collect();
        ResolvedState { r, n_circles: n + self.extra_circles, arc_circle }
    }

    /// Saddle on the edge `r → r + e_i`.
    pub fn saddle(
        &self,
        r: ResolutionVector,
        i: usize,
        orient: ArcOrientation,
    ) -> Result<Saddle, PdError> {
        self.check_edge(r, i)?;
        self.saddle_between(&self.resolve(r), &self.resolve(r | 1 << i), i, orient)
    }

    fn check_edge(&self, r: ResolutionVector, i: usize) -> Result<(), PdError> {
        if i >= self.n_crossings() {
            return Err(PdError::CrossingIndex { index: i, n: self.n_crossings() });
        }
        if r >> i & 1 == 1 {
            return Err(PdError::NoEdge { r, i });
        }
        Ok(())
    }

    /// Saddle between precomputed states `before` (at `r`) and `after` (at `r + e_i`).
    pub fn saddle_between(
        &self,
        before: &ResolvedState,
        after: &ResolvedState,
        i: usize,
        orient: ArcOrientation,
    ) -> Result<Saddle, PdError> {
        self.check_edge(before.r, i)?;
        let x = self.crossings[i];
        let ca = before.circle_of(x[0]);
        let cb = before.circle_of(x[2]);
        let mut relabel = vec![0; before.n_circles];
        for l in 1..=2 * self.n_crossings() {
            relabel[before.circle_of(l)] = after.circle_of(l);
        }
        let extra = self.extra_circles;
        for k in 0..extra {
            relabel[before.n_circles - extra + k] = after.n_circles - extra + k;
        }
        let mismatch = || PdError::SaddleMismatch {
            i,
            before: before.n_circles,
            after: after.n_circles,
        };
        let kind = if ca != cb {
            if after.n_circles + 1 != before.n_circles {
                return Err(mismatch());
            }
            let (c1, c2) = if orient.bit(i) { (cb, ca) } else { (ca, cb) };
            SaddleKind::Merge { c1, c2, c: after.circle_of(x[0]) }
        } else {
            if after.n_circles != before.n_circles + 1 {
                return Err(mismatch());
            }
            let (p, q) = (after.circle_of(x[0]), after.circle_of(x[1]));
            let (i1, i2) = if orient.bit(i) { (q, p) } else { (p, q) };
            relabel[ca] = i1;
            SaddleKind::Split { c: ca, i1, i2 }
        };
        Ok(Saddle { kind, relabel, n_before: before.n_circles, n_after: after.n_circles })
    }

    /// Endpoints of the saddle chord of a 0-resolved crossing `i`: the
    /// smoothing arcs (as the position pair entered first) at its tail and head.
    pub fn chord(&self, i: usize, orient: ArcOrientation) -> ChordEnds {
        if orient.bit(i) {
            ChordEnds { tail: (2, 3), head: (0, 1) }
        } else {
            ChordEnds { tail: (0, 1), head: (2, 3) }
        }
    }

    /// Traverses the circle of resolution `r` that enters crossing `c` at
    /// position `p`, returning every pass through a crossing site.
    pub fn walk(&self, r: ResolutionVector, c: usize, p: usize) -> Vec<Pass> {
        let partner = |c: usize, p: usize| if r >> c & 1 == 0 { p ^ 1 } else { 3 - p };
        let mut out = Vec::new();
        let (mut cc, mut pp) = (c, p);
        loop {
            let q = partner(cc, pp);
            out.push(Pass { crossing: cc, from: pp, to: q });
            let o = self.other_end(Occurrence { crossing: cc, pos: q });
            cc = o.crossing;
            pp = o.pos;
            if (cc, pp) == (c, p) {
                return out;
            }
        }
    }

    pub fn to_text(&self) -> String {
        let mut parts: Vec<String> = self
            .crossings
            .iter()
            .map(|x| format!("X({},{},{},{})", x[0], x[1], x[2], x[3]))
            .collect();
        if self.extra_circles > 0 || self.crossings.is_empty() {
            parts.push(format!("UNKNOT {}", self.extra_circles));
        }
        parts.join(" ")
    }
}

impl fmt::Display for PdCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Per-crossing signs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CrossingSigns {
    pub signs: Vec<i8>,
}

impl CrossingSigns {
    pub fn n_plus(&self) -> usize {
        self.signs.iter().filter(|&&s| s > 0).count()
    }
    pub fn n_minus(&self) -> usize {
        self.signs.len() - self.n_plus()
    }
}

/// One traversal of a smoothing arc at a crossing site.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pass {
    pub crossing: usize,
    pub from: usize,
    pub to: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ChordEnds {
    pub tail: (usize, usize),
    pub head: (usize, usize),
}

/// Per-crossing bit choosing the orientation of the 0-resolution chord.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ArcOrientation(pub u64);

impl ArcOrientation {
    pub fn bit(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn flip(self, i: usize) -> Self {
        Self(self.0 ^ 1 << i)
    }
}

/// Circles of one resolution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResolvedState {
    pub r: ResolutionVector,
    pub n_circles: usize,
    arc_circle: Vec<usize>,
}

impl ResolvedState {
    pub fn circle_of(&self, label: usize) -> usize {
        self.arc_circle[label - 1]
    }

    /// Circles meeting crossing `c`, in position order.
    pub fn circles_at(&self, pd: &PdCode, c: usize) -> [usize; 4] {
        pd.crossings[c].map(|l| self.circle_of(l))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SaddleKind {
    /// `c1` sits at the chord's tail.
    Merge { c1: usize, c2: usize, c: usize },
    /// The 1-resolution chord runs from `i1` to `i2`.
    Split { c: usize, i1: usize, i2: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Saddle {
    pub kind: SaddleKind,
    /// Image of each circle before the saddle; a split circle maps to `i1`.
    pub relabel: Vec<usize>,
    pub n_before: usize,
    pub n_after: usize,
}

impl Saddle {
    pub fn is_split(&self) -> bool {
        matches!(self.kind, SaddleKind::Split { .. })
    }
}

/// Parses whitespace-separated `X(a,b,c,d)` tokens (square brackets also
/// accepted) and `UNKNOT k` tokens, or the JSON form
/// `{"crossings": [[a,b,c,d], ...], "extra_circles": k}`.
pub fn parse_pd(text: &str) -> Result<PdCode, PdError> {
    let t = text.trim();
    if t.starts_with('{') {
        let j: PdJson = serde_json::from_str(t).map_err(|e| PdError::Json(e.to_string()))?;
        return PdCode::new(j.crossings, j.extra_circles);
    }
    let bytes = text.as_bytes();
    let mut crossings = Vec::new();
    let mut extra = 0;
    let mut i = 0;
    let syntax = |pos: usize, msg: &str| PdError::Syntax { pos, msg: msg.to_string() };
    let skip_ws = |i: &mut usize| {
        while *i < bytes.len() && (bytes[*i].is_ascii_whitespace() || bytes[*i] == b',') {
            *i += 1;
        }
    };
    let number = |i: &mut usize| -> Result<usize, PdError> {
        let s = *i;
        while *i < bytes.len() && bytes[*i].is_ascii_digit() {
            *i += 1;
        }
        text[s..*i].parse().map_err(|_| syntax(s, "expected a non-negative integer"))
    };
    loop {
        skip_ws(&mut i);
        if i >= bytes.len() {
            break;
        }
        if text[i..].starts_with("UNKNOT") {
            i += "UNKNOT".len();
            while i < bytes.len() && bytes[i].is_ascii_whitespace() {
                i += 1;
            }
            extra += if i < bytes.len() && bytes[i].is_ascii_digit() { number(&mut i)? } else { 1 };
        } else if bytes[i] == b'X' {
            i += 1;
            let close = match bytes.get(i) {
                Some(b'(') => b')',
                Some(b'[') => b']',
                _ => return Err(syntax(i, "expected '(' after X")),
            };
            i += 1;
            let mut x = [0usize; 4];
            for (k, slot) in x.iter_mut().enumerate() {
                while i < bytes.len() && bytes[i] == b' ' {
                    i += 1;
                }
                *slot = number(&mut i)?;
                while i < bytes.len() && bytes[i] == b' ' {
                    i += 1;
                }
                let want = if k == 3 { close } else { b',' };
                if bytes.get(i) != Some(&want) {
                    return Err(syntax(i, &format!("expected '{}'", want as char)));
                }
                i += 1;
            }
            crossings.push(x);
        } else {
            return Err(syntax(i, "expected 'X(' or 'UNKNOT'"));
        }
    }
    PdCode::new(crossings, extra)
}

/// Assigns `true` (arc ends here) or `false` (arc starts here) to each
/// occurrence node `4c + p`.
fn orient(crossings: &[[usize; 4]], occ: &[Vec<Occurrence>]) -> Result<Vec<bool>, PdError> {
    let n = crossings.len();
    let node = |o: Occurrence| o.crossing * 4 + o.pos;
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); 4 * n];
    let mut link = |a: usize, b: usize| {
        adj[a].push(b);
        adj[b].push(a);
    };
    for c in 0..n {
        link(4 * c, 4 * c + 2);
        link(4 * c + 1, 4 * c + 3);
    }
    for o in occ {
        link(node(o[0]), node(o[1]));
    }
    let mut val: Vec<Option<bool>> = vec![None; 4 * n];
    let propagate = |seed: usize, v: bool, val: &mut Vec<Option<bool>>| -> Result<(), PdError> {
        let mut queue = VecDeque::from([(seed, v)]);
        while let Some((u, v)) = queue.pop_front() {
            match val[u] {
                Some(w) if w == v => continue,
                Some(_) => {
                    return Err(PdError::Orientation { label: crossings[u / 4][u % 4] });
                }
                None => val[u] = Some(v),
            }
            for &w in &adj[u] {
                queue.push_back((w, !v));
            }
        }
        Ok(())
    };
    for c in 0..n {
        propagate(4 * c, true, &mut val)?;
    }
    // Components running only over other strands: orient by increasing labels.
    let nl = 2 * n;
    for u in 0..4 * n {
        if val[u].is_some() {
            continue;
        }
        let (c, p) = (u / 4, u % 4);
        let l = crossings[c][p];
        let partner = crossings[c][p ^ 2];
        let seed_in = partner == l % nl + 1;
        propagate(u, seed_in, &mut val)?;
    }
    Ok(val.into_iter().map(|v| v.expect("all nodes assigned")).collect())
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

fn union(parent: &mut [usize], a: usize, b: usize) {
    let (ra, rb) = (find(parent, a), find(parent, b));
    if ra != rb {
        parent[ra.max(rb)] = ra.min(rb);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const HOPF: &str = "X(1,3,2,4) X(3,1,4,2)";
    const TREFOIL: &str = "X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)";

    /// Independent arc trace: follows strands through crossings by positions.
    fn trace_components(x: &[[usize; 4]]) -> usize {
        let nl = 2 * x.len();
        let mut seen = vec![false; nl + 1];
        let mut comps = 0;
        for start in 1..=nl {
            if seen[start] {
                continue;
            }
            comps += 1;
            let mut cur = start;
            while !seen[cur] {
                seen[cur] = true;
                // straight through: the other end of cur's strand at the next crossing
                let mut next = None;
                for xs in x {
                    for p in 0..4 {
                        if xs[p] == cur && xs[(p + 2) % 4] != cur && !seen[xs[(p + 2) % 4]] {
                            next = Some(xs[(p + 2) % 4]);
                        }
                    }
                }
                match next {
                    Some(n) => cur = n,
                    None => break,
                }
            }
        }
        comps
    }

    /// Independent circle count: graph of smoothing arcs, counted by DFS.
    fn brute_circles(x: &[[usize; 4]], r: usize) -> usize {
        let nl = 2 * x.len();
        let mut adj = vec![Vec::new(); nl + 1];
        for (c, xs) in x.iter().enumerate() {
            let pairs = if r >> c & 1 == 0 { [(0, 1), (2, 3)] } else { [(0, 3), (1, 2)] };
            for (a, b) in pairs {
                adj[xs[a]].push(xs[b]);
                adj[xs[b]].push(xs[a]);
            }
        }
        let mut seen = vec![false; nl + 1];
        let mut count = 0;
        for s in 1..=nl {
            if !seen[s] {
                count += 1;
                let mut stack = vec![s];
                while let Some(u) = stack.pop() {
                    if !std::mem::replace(&mut seen[u], true) {
                        stack.extend(adj[u].iter().copied());
                    }
                }
            }
        }
        count
    }

    #[test]
    fn parse_examples() {
        let h = parse_pd(HOPF).unwrap();
        assert_eq!(h.n_crossings(), 2);
        assert_eq!(h.n_components(), 2);
        assert_eq!(trace_components(h.crossings()), 2);
        let u = parse_pd("UNKNOT 1").unwrap();
        assert_eq!((u.n_crossings(), u.extra_circles()), (0, 1));
        let t = parse_pd(TREFOIL).unwrap();
        assert_eq!((t.n_crossings(), t.n_components()), (3, 1));
        assert_eq!(trace_components(t.crossings()), 1);
        let j = parse_pd(r#"{"crossings": [[1,3,2,4],[3,1,4,2]], "extra_circles": 1}"#).unwrap();
        assert_eq!(j.n_components(), 3);
        assert_eq!(parse_pd("X[1,3,2,4] X[3,1,4,2]").unwrap(), h);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(parse_pd("X(1,2,3,4)"), Err(PdError::MissingLabel { .. } | PdError::LabelCount { .. })));
        assert!(matches!(parse_pd("X(1,1,1,2)"), Err(PdError::LabelCount { label: 1, count: 3 })));
        assert!(matches!(parse_pd("X(1,3,2"), Err(PdError::Syntax { .. })));
        assert!(matches!(parse_pd("Y(1,3,2,4)"), Err(PdError::Syntax { .. })));
        // arc 1 enters both crossings as the under-strand
        assert!(matches!(parse_pd("X(1,3,2,4) X(1,4,2,3)"), Err(PdError::Orientation { .. })));
    }

    #[test]
    fn signs() {
        let t = parse_pd(TREFOIL).unwrap();
        assert_eq!(t.signs().signs, vec![-1, -1, -1]);
        let h = parse_pd(HOPF).unwrap();
        assert_eq!(h.writhe(), 2);
        assert_eq!(h.mirror().writhe(), -2);
        assert!(h.is_planar() && t.is_planar());
    }

    #[test]
    fn resolve_matches_brute_force() {
        let h = parse_pd(HOPF).unwrap();
        assert_eq!(h.resolve(0b00).n_circles, 2);
        assert_eq!(h.resolve(0b01).n_circles, 1);
        let u = parse_pd("UNKNOT 1").unwrap();
        assert_eq!(u.resolve(0).n_circles, 1);
        for text in [HOPF, TREFOIL, "X(4,2,5,1) X(8,6,1,5) X(6,3,7,4) X(2,7,3,8)"] {
            let pd = parse_pd(text).unwrap();
            for r in 0..1 << pd.n_crossings() {
                assert_eq!(pd.resolve(r).n_circles, brute_circles(pd.crossings(), r));
            }
        }
    }

    #[test]
    fn saddles() {
        let h = parse_pd(HOPF).unwrap();
        let o = ArcOrientation::default();
        assert!(matches!(h.saddle(0b00, 0, o).unwrap().kind, SaddleKind::Merge { .. }));
        assert!(matches!(h.saddle(0b01, 1, o).unwrap().kind, SaddleKind::Split { .. }));
        assert!(h.saddle(0b01, 0, o).is_err());
        // every edge changes the circle count by one; merges+splits even for 2-component links
        let mut count = 0;
        for r in 0..4usize {
            for i in 0..2 {
                if r >> i & 1 == 0 {
                    let s = h.saddle(r, i, o).unwrap();
                    let d = s.n_after as i64 - s.n_before as i64;
                    assert_eq!(d, if s.is_split() { 1 } else { -1 });
                    count += 1;
                }
            }
        }
        assert_eq!(count % 2, 0);
    }

    #[test]
    fn split_order_follows_orientation() {
        let h = parse_pd(HOPF).unwrap();
        let a = h.saddle(0b01, 1, ArcOrientation(0)).unwrap().kind;
        let b = h.saddle(0b01, 1, ArcOrientation(0b10)).unwrap().kind;
        match (a, b) {
            (SaddleKind::Split { i1, i2, .. }, SaddleKind::Split { i1: j1, i2: j2, .. }) => {
                assert_eq!((i1, i2), (j2, j1));
                assert_ne!(i1, i2);
            }
            _ => panic!("expected splits"),
        }
    }

    #[test]
    fn kinks_and_relabel() {
        let t = parse_pd(TREFOIL).unwrap();
        for kind in 0..4 {
            let k = t.with_kink(2, kind).unwrap();
            assert_eq!(k.n_crossings(), 4);
            assert_eq!(k.n_components(), 1);
            assert!(k.is_planar());
            assert_eq!(trace_components(k.crossings()), 1);
        }
        // a kink's sign depends on its type
        let s: Vec<i8> = (0..4).map(|k| t.with_kink(1, k).unwrap().writhe() as i8).collect();
        assert!(s.contains(&-2) && s.contains(&-4));
    }

    #[test]
    fn walk_visits_every_site_twice() {
        let t = parse_pd(TREFOIL).unwrap();
        for r in 0..8 {
            let st = t.resolve(r);
            let mut total = 0;
            let mut seen = std::collections::HashSet::new();
            for c in 0..3 {
                for p in 0..4 {
                    let circle = st.circle_of(t.crossings()[c][p]);
                    if seen.insert(circle) {
                        total += t.walk(r, c, p).len();
                    }
                }
            }
            assert_eq!(total, 6);
        }
    }
}
