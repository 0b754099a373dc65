//! Square-tiled surfaces (origamis) as pairs of permutations.
//!
//! Squares are numbered `0..d` internally and `1..=d` in cycle notation.
//! `h(i)` is the square to the right of `i`, `v(i)` the square above `i`.
//!
//! The 1-skeleton has `2d` edges: `h_i` is the bottom edge of square `i`
//! (pointing right, index `i`) and `v_i` its left edge (pointing up, index
//! `d + i`). Every vertex is the bottom-left corner of some square; the
//! squares sharing a corner form one cycle of
//! `j -> v(h(v^-1(h^-1(j))))`, the counterclockwise turn by `2π` around it.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::cover::{Base, CoverSpec};
use crate::error::{Error, Result};
use crate::perm::{orbits, Perm};
use crate::sl2z::{classify, decompose_st, IntMatrix2, Token};

/// A connected square-tiled surface.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "OrigamiRepr", into = "OrigamiRepr")]
pub struct Origami {
    h: Perm,
    v: Perm,
}

#[derive(Serialize, Deserialize)]
struct OrigamiRepr {
    d: usize,
    sigma_h: Perm,
    sigma_v: Perm,
}

impl TryFrom<OrigamiRepr> for Origami {
    type Error = Error;
    fn try_from(r: OrigamiRepr) -> Result<Self> {
        // Cycles in JSON may omit trailing fixed points; pad to d.
        let pad = |p: Perm| -> Result<Perm> {
            if p.len() > r.d {
                return Err(Error::Permutation(format!("point beyond d = {}", r.d)));
            }
            let mut images = p.images().to_vec();
            images.extend(p.len()..r.d);
            Perm::from_images(images)
        };
        Origami::new(pad(r.sigma_h)?, pad(r.sigma_v)?)
    }
}

impl From<Origami> for OrigamiRepr {
    fn from(o: Origami) -> Self {
        OrigamiRepr {
            d: o.degree(),
            sigma_h: o.h,
            sigma_v: o.v,
        }
    }
}

/// Result of [`build`]: the surface with its genus and cone angles.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BuiltOrigami {
    pub origami: Origami,
    pub genus: u32,
    /// Cone angles as multiples of `2π`, sorted descending.
    pub stratum: Vec<u32>,
}

/// Validates a gluing and reports genus and stratum.
pub fn build(sigma_h: Perm, sigma_v: Perm) -> Result<BuiltOrigami> {
    let origami = Origami::new(sigma_h, sigma_v)?;
    Ok(BuiltOrigami {
        genus: origami.genus(),
        stratum: origami.stratum(),
        origami,
    })
}

impl Origami {
    pub fn new(h: Perm, v: Perm) -> Result<Self> {
        if h.len() != v.len() {
            return Err(Error::Permutation(format!(
                "sigma_h acts on {} squares, sigma_v on {}",
                h.len(),
                v.len()
            )));
        }
        if h.is_empty() {
            return Err(Error::Permutation(
                "an origami needs at least one square".into(),
            ));
        }
        let orbs = orbits(h.len(), &[&h, &v]);
        if orbs.len() > 1 {
            let one_based = orbs
                .into_iter()
                .map(|o| o.into_iter().map(|i| i + 1).collect())
                .collect();
            return Err(Error::Disconnected(one_based));
        }
        Ok(Origami { h, v })
    }

    /// Parses two permutations in 1-based cycle notation on `d` squares.
    pub fn from_cycles(d: usize, sigma_h: &str, sigma_v: &str) -> Result<Self> {
        Origami::new(
            Perm::parse_cycles(sigma_h, Some(d))?,
            Perm::parse_cycles(sigma_v, Some(d))?,
        )
    }

    /// The one-square torus.
    pub fn torus() -> Self {
        Origami::new(Perm::identity(1), Perm::identity(1)).expect("valid")
    }

    /// The eight-square surface Σ_4(1,1,1,1): bottom row 1-4, top row 5-8
    /// with square 5 above square 4; the marked edges pair the tops of
    /// 1, 2, 3 with the bottoms of 8, 7, 6 and the tops of 5, 6, 7, 8 with
    /// the bottoms of 2, 1, 4, 3.
    pub fn wollmilchsau() -> Self {
        Origami::from_cycles(8, "(1 2 3 4)(5 6 7 8)", "(1 8 3 6)(2 7 4 5)").expect("valid")
    }

    /// Built-in surfaces by name.
    pub fn named(name: &str) -> Option<Self> {
        match name.to_ascii_lowercase().as_str() {
            "torus" => Some(Self::torus()),
            "wollmilchsau" | "eierlegende-wollmilchsau" => Some(Self::wollmilchsau()),
            _ => None,
        }
    }

    pub fn degree(&self) -> usize {
        self.h.len()
    }

    pub fn sigma_h(&self) -> &Perm {
        &self.h
    }

    pub fn sigma_v(&self) -> &Perm {
        &self.v
    }

    /// `j -> v(h(v^-1(h^-1(j))))`: cycles are the vertices.
    pub fn corner_rotation(&self) -> Perm {
        self.h
            .inverse()
            .then(&self.v.inverse())
            .then(&self.h)
            .then(&self.v)
    }

    /// Squares grouped by their bottom-left corner.
    pub fn vertices(&self) -> Vec<Vec<usize>> {
        self.corner_rotation().cycles()
    }

    /// Vertex index of the bottom-left corner of each square.
    pub fn corner_vertex(&self) -> Vec<usize> {
        let mut out = vec![0; self.degree()];
        for (k, cycle) in self.vertices().iter().enumerate() {
            for &j in cycle {
                out[j] = k;
            }
        }
        out
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices().len()
    }

    pub fn genus(&self) -> u32 {
        let d = self.degree();
        let v = self.vertex_count();
        // chi = V - 2d + d
        debug_assert!((d - v).is_multiple_of(2) || d < v);
        (1 + (d - v) / 2) as u32
    }

    pub fn stratum(&self) -> Vec<u32> {
        let mut s: Vec<u32> = self.vertices().iter().map(|c| c.len() as u32).collect();
        s.sort_unstable_by(|a, b| b.cmp(a));
        s
    }

    pub fn edge_count(&self) -> usize {
        2 * self.degree()
    }

    #[inline]
    pub fn h_edge(&self, i: usize) -> usize {
        i
    }

    #[inline]
    pub fn v_edge(&self, i: usize) -> usize {
        self.degree() + i
    }

    /// Affine action of one generator; the image squares keep their labels.
    ///
    /// `T` shears by `(1 1; 0 1)`, `S` rotates by a quarter turn, `-I` by a half turn.
    pub fn act(&self, token: Token) -> Origami {
        let (h, v) = (&self.h, &self.v);
        let (h2, v2) = match token {
            Token::T => (h.clone(), h.inverse().then(v)),
            Token::TInv => (h.clone(), h.then(v)),
            Token::S => (v.inverse(), h.clone()),
            Token::NegI => (h.inverse(), v.inverse()),
        };
        Origami { h: h2, v: v2 }
    }

    /// Action of a word whose matrix product (left to right) is the derivative:
    /// the last token acts first.
    pub fn act_word(&self, word: &[Token]) -> Origami {
        word.iter().rev().fold(self.clone(), |o, &t| o.act(t))
    }

    /// Images of the edges of `self` under the affine map of `token`, as
    /// signed edge lists in `self.act(token)`.
    pub fn edge_images(&self, token: Token) -> Vec<Vec<(usize, i64)>> {
        let d = self.degree();
        let (h, v) = (&self.h, &self.v);
        let he = |i: usize| i;
        let ve = |i: usize| d + i;
        let mut out = Vec::with_capacity(2 * d);
        for i in 0..d {
            out.push(match token {
                Token::T | Token::TInv => vec![(he(i), 1)],
                Token::S => vec![(ve(v.inverse().apply(i)), 1)],
                Token::NegI => vec![(he(v.inverse().apply(i)), -1)],
            });
        }
        for i in 0..d {
            out.push(match token {
                Token::T => vec![(he(i), 1), (ve(h.apply(i)), 1)],
                Token::TInv => {
                    let j = h.inverse().apply(i);
                    vec![(he(j), -1), (ve(j), 1)]
                }
                Token::S => vec![(he(i), -1)],
                Token::NegI => vec![(ve(h.inverse().apply(i)), -1)],
            });
        }
        out
    }

    /// Pushes a 1-chain through the affine map of `token`.
    pub fn push_chain(&self, token: Token, chain: &[i64]) -> Vec<i64> {
        let images = self.edge_images(token);
        let mut out = vec![0; chain.len()];
        for (e, &c) in chain.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for &(f, s) in &images[e] {
                out[f] += c * s;
            }
        }
        out
    }

    /// Boundary of a 1-chain as a 0-chain on vertices.
    pub fn boundary1(&self, chain: &[i64]) -> Vec<i64> {
        let d = self.degree();
        let corner = self.corner_vertex();
        let mut out = vec![0; self.vertex_count()];
        for i in 0..d {
            let ch = chain[i];
            out[corner[self.h.apply(i)]] += ch;
            out[corner[i]] -= ch;
            let cv = chain[d + i];
            out[corner[self.v.apply(i)]] += cv;
            out[corner[i]] -= cv;
        }
        out
    }

    /// Boundary of square `i`: `h_i + v_{h(i)} - h_{v(i)} - v_i`.
    pub fn face_boundary(&self, i: usize) -> Vec<i64> {
        let d = self.degree();
        let mut out = vec![0; 2 * d];
        out[i] += 1;
        out[d + self.h.apply(i)] += 1;
        out[self.v.apply(i)] -= 1;
        out[d + i] -= 1;
        out
    }

    /// Conjugate by `r`: square `i` of `self` becomes square `r(i)`.
    pub fn relabel(&self, r: &Perm) -> Origami {
        Origami {
            h: self.h.relabel(r),
            v: self.v.relabel(r),
        }
    }

    /// Lexicographically least `(h, v)` image table over all relabelings
    /// obtained by breadth-first numbering from each root square.
    pub fn canonical_form(&self) -> (Vec<usize>, Vec<usize>) {
        (0..self.degree())
            .map(|root| {
                let r = self.bfs_numbering(root);
                let o = self.relabel(&r);
                (o.h.images().to_vec(), o.v.images().to_vec())
            })
            .min()
            .expect("non-empty")
    }

    fn bfs_numbering(&self, root: usize) -> Perm {
        let d = self.degree();
        let mut label = vec![usize::MAX; d];
        let mut queue = vec![root];
        label[root] = 0;
        let mut head = 0;
        while head < queue.len() {
            let i = queue[head];
            head += 1;
            for j in [self.h.apply(i), self.v.apply(i)] {
                if label[j] == usize::MAX {
                    label[j] = queue.len();
                    queue.push(j);
                }
            }
        }
        Perm::from_images(label).expect("connected surfaces are fully numbered")
    }

    pub fn is_isomorphic(&self, other: &Origami) -> bool {
        find_relabeling(self, other).is_some()
    }

    /// The torus cover `m -> sigma_h`, `p -> sigma_v` with one puncture at the corner.
    pub fn to_cover_spec(&self) -> CoverSpec {
        let mut monodromy = BTreeMap::new();
        monodromy.insert("m".to_string(), self.h.clone());
        monodromy.insert("p".to_string(), self.v.clone());
        CoverSpec::new(
            Base::Torus,
            self.degree() as u32,
            vec!["p1".into()],
            monodromy,
        )
        .expect("connected origamis give transitive monodromy")
    }
}

/// A relabeling `r` with `r(from.h(i)) = to.h(r(i))` and likewise for `v`.
///
/// Transitivity pins `r` down by the image of square 0, so `d` candidate
/// roots are tried in increasing order.
pub fn find_relabeling(from: &Origami, to: &Origami) -> Option<Perm> {
    let d = from.degree();
    if d != to.degree() || from.stratum() != to.stratum() {
        return None;
    }
    (0..d).find_map(|target| extend_from_root(from, to, target))
}

fn extend_from_root(from: &Origami, to: &Origami, target: usize) -> Option<Perm> {
    let d = from.degree();
    let mut r = vec![usize::MAX; d];
    let mut used = vec![false; d];
    r[0] = target;
    used[target] = true;
    let mut stack = vec![0];
    while let Some(i) = stack.pop() {
        let moves = [
            (from.h.apply(i), to.h.apply(r[i])),
            (from.v.apply(i), to.v.apply(r[i])),
        ];
        for (j, rj) in moves {
            if r[j] == usize::MAX {
                if used[rj] {
                    return None;
                }
                r[j] = rj;
                used[rj] = true;
                stack.push(j);
            } else if r[j] != rj {
                return None;
            }
        }
    }
    let r = Perm::from_images(r).ok()?;
    (from.relabel(&r) == *to).then_some(r)
}

/// Brute force over all `d!` relabelings, smallest in lexicographic order first.
pub fn find_relabeling_exhaustive(from: &Origami, to: &Origami) -> Option<Perm> {
    let d = from.degree();
    if d != to.degree() {
        return None;
    }
    all_permutations(d)
        .into_iter()
        .find(|r| from.relabel(r) == *to)
}

/// All permutations of `0..n` in lexicographic order.
pub fn all_permutations(n: usize) -> Vec<Perm> {
    let mut cur: Vec<usize> = (0..n).collect();
    let mut out = vec![Perm::from_images(cur.clone()).expect("identity")];
    loop {
        let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
            return out;
        };
        let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).expect("exists");
        cur.swap(i - 1, j);
        cur[i..].reverse();
        out.push(Perm::from_images(cur.clone()).expect("permutation"));
    }
}

/// Every connected origami on `d` labelled squares.
pub fn all_transitive(d: usize) -> Vec<Origami> {
    let perms = all_permutations(d);
    let mut out = Vec::new();
    for h in &perms {
        for v in &perms {
            if let Ok(o) = Origami::new(h.clone(), v.clone()) {
                out.push(o);
            }
        }
    }
    out
}

/// Evidence that an affine map with derivative `word_product(word)` maps the
/// origami to itself: acting by `word` and relabeling returns the input.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LiftWitness {
    pub word: Vec<Token>,
    /// Square `i` of the image surface is square `relabeling(i)` of the input.
    pub relabeling: Perm,
}

impl LiftWitness {
    pub fn verify(&self, o: &Origami) -> bool {
        self.relabeling.len() == o.degree()
            && o.act_word(&self.word).relabel(&self.relabeling) == *o
    }

    /// Pushes a 1-chain of `o` through the lifted map.
    pub fn push_chain(&self, o: &Origami, chain: &[i64]) -> Vec<i64> {
        let mut cur_o = o.clone();
        let mut cur = chain.to_vec();
        for &t in self.word.iter().rev() {
            cur = cur_o.push_chain(t, &cur);
            cur_o = cur_o.act(t);
        }
        let d = o.degree();
        let mut out = vec![0; 2 * d];
        for i in 0..d {
            let j = self.relabeling.apply(i);
            out[j] = cur[i];
            out[d + j] = cur[d + i];
        }
        out
    }
}

/// Largest degree for which a failed search is confirmed over all `d!` relabelings.
pub const EXHAUSTIVE_LIMIT: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LiftOutcome {
    Witness(LiftWitness),
    /// No relabeling exists. `exhaustive` records that all `d!` relabelings were
    /// checked in addition to the rooted search.
    Absent {
        word: Vec<Token>,
        exhaustive: bool,
    },
}

impl LiftOutcome {
    pub fn witness(&self) -> Option<&LiftWitness> {
        match self {
            LiftOutcome::Witness(w) => Some(w),
            LiftOutcome::Absent { .. } => None,
        }
    }

    pub fn into_witness(self) -> Option<LiftWitness> {
        match self {
            LiftOutcome::Witness(w) => Some(w),
            LiftOutcome::Absent { .. } => None,
        }
    }
}

/// Searches for a lift of the Anosov matrix `m` to an affine automorphism of `o`.
pub fn lift_automorphism(m: &IntMatrix2, o: &Origami) -> Result<LiftOutcome> {
    if !classify(m)?.is_anosov() {
        return Err(Error::NotAnosov(m.trace().abs()));
    }
    let word = decompose_st(m)?;
    let image = o.act_word(&word);
    if let Some(relabeling) = find_relabeling(&image, o) {
        return Ok(LiftOutcome::Witness(LiftWitness { word, relabeling }));
    }
    let exhaustive = o.degree() <= EXHAUSTIVE_LIMIT;
    if exhaustive {
        if let Some(relabeling) = find_relabeling_exhaustive(&image, o) {
            // Unreachable for connected surfaces; kept as a safety net.
            return Ok(LiftOutcome::Witness(LiftWitness { word, relabeling }));
        }
    }
    Ok(LiftOutcome::Absent { word, exhaustive })
}

/// Square-tiled model of the translation surface `w^d = prod (z - z_i)^{a_i}`
/// (`d` even, all `a_i` odd) as a `2d`-square origami.
///
/// The flat sphere is a front square `F` and a back square `B`; `F`'s
/// bottom and top meet `B`'s top and bottom by translations, the left and
/// right sides by half turns. Crossing an edge from `F` to `B` shifts the
/// sheet by `c_bottom = 0`, `c_left = -a2`, `c_right = a3`, `c_top = a3 + a4`,
/// so the loop around `z_i` shifts by `a_i`. Squares on odd-parity sheets are
/// turned by a half turn so every gluing becomes a translation.
pub fn pillowcase_origami(d: u32, a: [u32; 4]) -> Result<Origami> {
    let violations = crate::cover::pillowcase_violations(d, a);
    if !violations.is_empty() {
        return Err(Error::Pillowcase(violations));
    }
    if !d.is_multiple_of(2) || a.iter().any(|ai| ai % 2 == 0) {
        return Err(Error::Parameter(
            "a square-tiled model needs d even and every a_i odd".into(),
        ));
    }
    let n = d as i64;
    let a: Vec<i64> = a.iter().map(|&x| i64::from(x)).collect();
    let (c_bottom, c_left, c_right, c_top) = (0, -a[1], a[2], a[2] + a[3]);
    let md = |x: i64| x.rem_euclid(n) as usize;
    // Squares: (F, k) -> k, (B, k) -> d + k.
    let front = |k: i64| md(k);
    let back = |k: i64| d as usize + md(k);
    #[derive(Clone, Copy)]
    enum Side {
        Right,
        Left,
        Top,
        Bottom,
    }
    let neighbour = |sq: usize, side: Side| -> usize {
        let is_back = sq >= d as usize;
        let k = (sq % d as usize) as i64;
        match (is_back, side) {
            (false, Side::Right) => back(k + c_right),
            (false, Side::Left) => back(k + c_left),
            (false, Side::Bottom) => back(k + c_bottom),
            (false, Side::Top) => back(k + c_top),
            (true, Side::Right) => front(k - c_right),
            (true, Side::Left) => front(k - c_left),
            (true, Side::Top) => front(k - c_bottom),
            (true, Side::Bottom) => front(k - c_top),
        }
    };
    let flipped = |sq: usize| -> bool {
        let k = (sq % d as usize) as i64;
        if sq < d as usize {
            k % 2 == 1
        } else {
            (k - c_bottom).rem_euclid(2) == 1
        }
    };
    let total = 2 * d as usize;
    let mut h = Vec::with_capacity(total);
    let mut v = Vec::with_capacity(total);
    for sq in 0..total {
        let (right, up) = if flipped(sq) {
            (Side::Left, Side::Bottom)
        } else {
            (Side::Right, Side::Top)
        };
        h.push(neighbour(sq, right));
        v.push(neighbour(sq, up));
    }
    Origami::new(Perm::from_images(h)?, Perm::from_images(v)?)
}
