//! Integral first homology of an origami and induced actions.
//!
//! Generators come from a tree–cotree split of the square complex: a
//! spanning tree of the 1-skeleton, a spanning tree of the dual graph on the
//! remaining edges, and the `2g` edges left over. Each leftover edge closes
//! a unique cycle through the tree. Everything here is exact.

use std::collections::VecDeque;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{big_to_i64, smith_normal_form, IntMatrix};
use crate::origami::{LiftWitness, Origami};

/// A basis of `H_1` together with the intersection pairing on it.
#[derive(Debug, Clone, Serialize)]
pub struct HomologyBasis {
    pub rank: usize,
    /// Basis cycles as integer vectors over the `2d` edges.
    pub cycles: Vec<Vec<i64>>,
    /// `J[i][j]` is the algebraic intersection of cycle `i` with cycle `j`.
    pub intersection_form: IntMatrix,
    /// Edge closing each basis cycle; its coefficient in a closed chain is
    /// the corresponding coordinate once the cotree is peeled away.
    pub generator_edges: Vec<usize>,
    #[serde(skip)]
    origami: Origami,
    /// Non-root faces in breadth-first order with the cotree edge to their parent.
    #[serde(skip)]
    cotree: Vec<(usize, usize)>,
}

/// `(sigma_h, sigma_v)`-endpoints of each edge as corner vertex indices.
fn edge_ends(o: &Origami) -> Vec<(usize, usize)> {
    let d = o.degree();
    let corner = o.corner_vertex();
    let (h, v) = (o.sigma_h(), o.sigma_v());
    (0..d)
        .map(|i| (corner[i], corner[h.apply(i)]))
        .chain((0..d).map(|i| (corner[i], corner[v.apply(i)])))
        .collect()
}

/// Faces on the two sides of each edge (below/above for `h_i`, left/right for `v_i`).
fn edge_faces(o: &Origami) -> Vec<(usize, usize)> {
    let d = o.degree();
    let (h, v) = (o.sigma_h(), o.sigma_v());
    (0..d)
        .map(|i| (v.inverse().apply(i), i))
        .chain((0..d).map(|i| (h.inverse().apply(i), i)))
        .collect()
}

/// Rank of `H_1` from Smith normal forms of the cellular boundary maps,
/// plus its torsion (always empty for a closed orientable surface).
pub fn smith_rank(o: &Origami) -> (usize, Vec<BigInt>) {
    let d = o.degree();
    let ends = edge_ends(o);
    let nv = o.vertex_count();
    let mut d1 = vec![vec![0i64; 2 * d]; nv];
    for (e, &(a, b)) in ends.iter().enumerate() {
        d1[b][e] += 1;
        d1[a][e] -= 1;
    }
    // Columns of d2 are face boundaries.
    let faces: Vec<Vec<i64>> = (0..d).map(|i| o.face_boundary(i)).collect();
    let d2: Vec<Vec<i64>> = (0..2 * d)
        .map(|e| faces.iter().map(|f| f[e]).collect())
        .collect();
    let r1 = smith_normal_form(&d1).rank();
    let s2 = smith_normal_form(&d2);
    (2 * d - r1 - s2.rank(), s2.torsion())
}

pub fn homology_basis(o: &Origami) -> Result<HomologyBasis> {
    let d = o.degree();
    let ne = 2 * d;
    let ends = edge_ends(o);
    let nv = o.vertex_count();

    // Spanning tree of the 1-skeleton, rooted at vertex 0.
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); nv];
    for (e, &(a, b)) in ends.iter().enumerate() {
        incident[a].push(e);
        if b != a {
            incident[b].push(e);
        }
    }
    let mut parent_edge: Vec<Option<usize>> = vec![None; nv];
    let mut parent: Vec<usize> = vec![usize::MAX; nv];
    let mut in_tree = vec![false; ne];
    parent[0] = 0;
    let mut queue = VecDeque::from([0usize]);
    while let Some(x) = queue.pop_front() {
        for &e in &incident[x] {
            let (a, b) = ends[e];
            let y = if a == x { b } else { a };
            if parent[y] == usize::MAX {
                parent[y] = x;
                parent_edge[y] = Some(e);
                in_tree[e] = true;
                queue.push_back(y);
            }
        }
    }
    if parent.contains(&usize::MAX) {
        return Err(Error::Homology("1-skeleton is disconnected".into()));
    }

    // Spanning tree of the dual graph on non-tree edges, rooted at face 0.
    let sides = edge_faces(o);
    let mut adjacent: Vec<Vec<usize>> = vec![Vec::new(); d];
    for e in (0..ne).filter(|&e| !in_tree[e]) {
        let (f, g) = sides[e];
        if f != g {
            adjacent[f].push(e);
            adjacent[g].push(e);
        }
    }
    let mut seen = vec![false; d];
    let mut in_cotree = vec![false; ne];
    let mut cotree = Vec::with_capacity(d.saturating_sub(1));
    seen[0] = true;
    let mut queue = VecDeque::from([0usize]);
    while let Some(f) = queue.pop_front() {
        for &e in &adjacent[f] {
            let (a, b) = sides[e];
            let g = if a == f { b } else { a };
            if !seen[g] {
                seen[g] = true;
                in_cotree[e] = true;
                cotree.push((g, e));
                queue.push_back(g);
            }
        }
    }
    if seen.contains(&false) {
        return Err(Error::Homology("dual graph is disconnected".into()));
    }

    let generator_edges: Vec<usize> = (0..ne).filter(|&e| !in_tree[e] && !in_cotree[e]).collect();
    let genus = o.genus() as usize;
    if generator_edges.len() != 2 * genus {
        return Err(Error::Homology(format!(
            "{} generators for genus {genus}",
            generator_edges.len()
        )));
    }

    // Signed tree path from the root to each vertex.
    let path_to = |mut x: usize| -> Vec<i64> {
        let mut chain = vec![0i64; ne];
        while let Some(e) = parent_edge[x] {
            let (a, b) = ends[e];
            if b == x {
                chain[e] += 1;
                x = a;
            } else {
                chain[e] -= 1;
                x = b;
            }
        }
        chain
    };
    let cycles: Vec<Vec<i64>> = generator_edges
        .iter()
        .map(|&g| {
            let (a, b) = ends[g];
            let (pa, pb) = (path_to(a), path_to(b));
            let mut z: Vec<i64> = pa.iter().zip(&pb).map(|(x, y)| x - y).collect();
            z[g] += 1;
            z
        })
        .collect();

    let n = cycles.len();
    let mut j = IntMatrix::zeros(n, n);
    let duals: Vec<Vec<i64>> = cycles.iter().map(|z| dual_chain(o, z)).collect();
    for (r, a) in cycles.iter().enumerate() {
        for (c, b) in duals.iter().enumerate() {
            j[(r, c)] = pair_with_dual(o, a, b);
        }
    }
    let basis = HomologyBasis {
        rank: n,
        cycles,
        intersection_form: j,
        generator_edges,
        origami: o.clone(),
        cotree,
    };
    if !basis.intersection_form.is_antisymmetric()
        || basis.intersection_form.determinant()? != BigInt::from(1)
    {
        return Err(Error::Homology(
            "intersection form is not unimodular".into(),
        ));
    }
    Ok(basis)
}

/// Pushes a primal cycle onto the dual graph (indexed like the primal edges:
/// dual edge `h_i` runs from square `i` to `sigma_h(i)`, dual edge `v_i` from
/// `i` to `sigma_v(i)`), detouring around each vertex where consecutive edges
/// are attached to different squares.
fn dual_chain(o: &Origami, z: &[i64]) -> Vec<i64> {
    let d = o.degree();
    let (h, v) = (o.sigma_h(), o.sigma_v());
    let (hi, vi) = (h.inverse(), v.inverse());
    let rho = o.corner_rotation();
    // One counterclockwise step around a vertex, from square j to rho(j).
    let step = |j: usize| -> [(usize, i64); 4] {
        let l = hi.apply(j);
        let ll = vi.apply(l);
        let lr = h.apply(ll);
        [(l, -1), (d + ll, -1), (ll, 1), (d + lr, 1)]
    };
    // Prefix sums of steps along each vertex cycle.
    let mut prefix: Vec<Vec<(usize, i64)>> = vec![Vec::new(); d];
    for cycle in rho.cycles() {
        let mut acc: Vec<(usize, i64)> = Vec::new();
        for &j in &cycle {
            prefix[j] = acc.clone();
            acc.extend(step(j));
        }
    }
    let mut out = vec![0i64; 2 * d];
    let mut add = |terms: &[(usize, i64)], c: i64| {
        for &(e, s) in terms {
            out[e] += c * s;
        }
    };
    for i in 0..d {
        if z[i] != 0 {
            add(&[(i, 1)], z[i]);
            add(&prefix[i], z[i]);
            add(&prefix[h.apply(i)], -z[i]);
        }
        if z[d + i] != 0 {
            add(&[(d + i, 1)], z[d + i]);
            add(&prefix[i], z[d + i]);
            add(&prefix[v.apply(i)], -z[d + i]);
        }
    }
    out
}

/// Dual edge `h_i` crosses `v_{sigma_h(i)}` rightward, dual edge `v_i`
/// crosses `h_{sigma_v(i)}` upward; a rightward edge crossed upward counts +1.
fn pair_with_dual(o: &Origami, a: &[i64], dual: &[i64]) -> i64 {
    let d = o.degree();
    (0..d)
        .map(|i| dual[d + i] * a[o.sigma_v().apply(i)] - dual[i] * a[d + o.sigma_h().apply(i)])
        .sum()
}

impl HomologyBasis {
    pub fn origami(&self) -> &Origami {
        &self.origami
    }

    /// Coordinates of a closed 1-chain in the basis.
    pub fn coordinates(&self, chain: &[i64]) -> Result<Vec<i64>> {
        let o = &self.origami;
        if chain.len() != o.edge_count() {
            return Err(Error::Dimension(format!(
                "chain of length {} on {} edges",
                chain.len(),
                o.edge_count()
            )));
        }
        if o.boundary1(chain).iter().any(|&x| x != 0) {
            return Err(Error::Homology("chain is not closed".into()));
        }
        let mut z = chain.to_vec();
        // Parents before children: later faces never touch an earlier cotree edge.
        for &(face, edge) in &self.cotree {
            let boundary = o.face_boundary(face);
            let c = z[edge];
            if c != 0 {
                let s = boundary[edge];
                debug_assert!(s == 1 || s == -1);
                for (zi, bi) in z.iter_mut().zip(&boundary) {
                    *zi -= c * s * bi;
                }
            }
        }
        Ok(self.generator_edges.iter().map(|&g| z[g]).collect())
    }

    /// Linear combination of basis cycles.
    pub fn chain_of(&self, coords: &[i64]) -> Vec<i64> {
        let mut out = vec![0; self.origami.edge_count()];
        for (c, z) in coords.iter().zip(&self.cycles) {
            for (o, x) in out.iter_mut().zip(z) {
                *o += c * x;
            }
        }
        out
    }

    /// Algebraic intersection number of two closed chains.
    pub fn intersection(&self, a: &[i64], b: &[i64]) -> i64 {
        pair_with_dual(&self.origami, a, &dual_chain(&self.origami, b))
    }
}

/// Total horizontal and vertical displacement of a 1-chain.
pub fn displacement(o: &Origami, chain: &[i64]) -> (i64, i64) {
    let d = o.degree();
    (chain[..d].iter().sum(), chain[d..].iter().sum())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TorelliOrder {
    pub k: usize,
    pub b1: usize,
    pub symplectic: bool,
}

/// `k = dim ker(M - I)`, `b1 = k + 1`, and whether `M^T J M = J`.
pub fn torelli_order(m: &IntMatrix, j: &IntMatrix) -> Result<TorelliOrder> {
    if !m.is_square() || !j.is_square() || m.nrows() != j.nrows() {
        return Err(Error::Dimension(format!(
            "M is {}x{}, J is {}x{}",
            m.nrows(),
            m.ncols(),
            j.nrows(),
            j.ncols()
        )));
    }
    if !j.is_antisymmetric() || j.determinant()? != BigInt::from(1) {
        return Err(Error::Dimension(
            "J must be antisymmetric with determinant 1".into(),
        ));
    }
    let k = m.ncols() - m.minus_identity().rank();
    let symplectic = m.transpose().checked_mul(j)?.checked_mul(m)? == *j;
    Ok(TorelliOrder {
        k,
        b1: k + 1,
        symplectic,
    })
}

/// Action of a lifted automorphism on `H_1`.
#[derive(Debug, Clone, Serialize)]
pub struct HomologyAction {
    /// Column `j` holds the coordinates of the image of basis cycle `j`.
    pub matrix: IntMatrix,
    pub k: usize,
    pub b1: usize,
    pub symplectic: bool,
    /// Primitive integer basis of the fixed subspace, in basis coordinates.
    pub fixed_subspace: Vec<Vec<i64>>,
    /// Every fixed class has zero total displacement.
    pub fixed_in_projection_kernel: bool,
}

pub fn induced_action(w: &LiftWitness, o: &Origami) -> Result<HomologyAction> {
    let basis = homology_basis(o)?;
    induced_action_in(w, &basis)
}

/// As [`induced_action`], reusing an already computed basis.
pub fn induced_action_in(w: &LiftWitness, basis: &HomologyBasis) -> Result<HomologyAction> {
    let o = basis.origami();
    if !w.verify(o) {
        return Err(Error::WitnessMismatch);
    }
    let columns = basis
        .cycles
        .iter()
        .map(|z| basis.coordinates(&w.push_chain(o, z)))
        .collect::<Result<Vec<_>>>()?;
    let matrix = IntMatrix::from_columns(&columns, basis.rank);
    let order = torelli_order(&matrix, &basis.intersection_form)?;
    let fixed_subspace = matrix
        .minus_identity()
        .kernel_basis()
        .iter()
        .map(|v| v.iter().map(big_to_i64).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let fixed_in_projection_kernel = fixed_subspace
        .iter()
        .all(|c| displacement(o, &basis.chain_of(c)) == (0, 0));
    Ok(HomologyAction {
        matrix,
        k: order.k,
        b1: order.b1,
        symplectic: order.symplectic,
        fixed_subspace,
        fixed_in_projection_kernel,
    })
}

/// True if the lift sends every face boundary to a null-homologous cycle.
pub fn respects_boundaries(w: &LiftWitness, basis: &HomologyBasis) -> Result<bool> {
    let o = basis.origami();
    for i in 0..o.degree() {
        let image = w.push_chain(o, &o.face_boundary(i));
        if basis.coordinates(&image)?.iter().any(|x| !x.is_zero()) {
            return Ok(false);
        }
    }
    Ok(true)
}
