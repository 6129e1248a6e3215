//! Finite-volume test for acute-angled polyhedra bounded by `(−2)`-roots.
//!
//! For roots `δᵢ` with `δᵢ² = −2` the normalized Gram matrix is
//! `B = −G/2`: ones on the diagonal and `−δᵢ·δⱼ/2` off it. A pair with
//! `δᵢ·δⱼ = 0, 1` meets at angle π/2, π/3; `2` means parallel walls (an
//! ideal vertex); larger values are ultraparallel.
//!
//! A polyhedron in hyperbolic `d`-space with nondegenerate Gram matrix has
//! finite volume iff it has a vertex (finite or ideal) and every elliptic
//! subdiagram of rank `d−1` extends in exactly two ways to an elliptic
//! subdiagram of rank `d` or a parabolic subdiagram of rank `d−1`.
//! Elliptic = positive definite; parabolic = every connected component
//! positive semidefinite and singular.

use num_rational::Ratio;

use crate::linalg::{self, Matrix};
use crate::scalar::{int, rat, Int};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    Elliptic,
    Parabolic,
    Mixed,
}

struct Subdiagram {
    mask: u64,
    size: usize,
    rank: usize,
    kind: Kind,
}

fn normalized<T: Int>(root_gram: &Matrix<T>) -> Matrix<Ratio<T>> {
    let minus_two = int::<T>(-2);
    root_gram
        .iter()
        .map(|r| r.iter().map(|x| Ratio::new(x.clone(), minus_two.clone())).collect())
        .collect()
}

fn principal<T: Int>(b: &Matrix<Ratio<T>>, idx: &[usize]) -> Matrix<Ratio<T>> {
    idx.iter().map(|&i| idx.iter().map(|&j| b[i][j].clone()).collect()).collect()
}

fn components<T: Int>(b: &Matrix<Ratio<T>>, idx: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; idx.len()];
    let mut out = Vec::new();
    for start in 0..idx.len() {
        if seen[start] {
            continue;
        }
        let mut comp = vec![];
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(p) = stack.pop() {
            comp.push(idx[p]);
            for q in 0..idx.len() {
                if !seen[q] && b[idx[p]][idx[q]] != rat(T::zero()) {
                    seen[q] = true;
                    stack.push(q);
                }
            }
        }
        out.push(comp);
    }
    out
}

/// Semidefinite subdiagrams up to `max_size` nodes (the property is
/// hereditary, so a depth-first search over increasing index sets is complete).
fn semidefinite_subdiagrams<T: Int>(b: &Matrix<Ratio<T>>, max_size: usize) -> Vec<Subdiagram> {
    let mut out = Vec::new();
    let mut idx = Vec::new();
    grow(b, 0, max_size, &mut idx, &mut out);
    out
}

fn grow<T: Int>(b: &Matrix<Ratio<T>>, from: usize, max_size: usize, idx: &mut Vec<usize>, out: &mut Vec<Subdiagram>) {
    if idx.len() == max_size {
        return;
    }
    for j in from..b.len() {
        idx.push(j);
        let (pos, neg, zero) = linalg::inertia(&principal(b, idx));
        if neg == 0 {
            let kind = if zero == 0 {
                Kind::Elliptic
            } else if components(b, idx)
                .iter()
                .all(|c| linalg::inertia(&principal(b, c)).2 > 0)
            {
                Kind::Parabolic
            } else {
                Kind::Mixed
            };
            let mask = idx.iter().fold(0u64, |m, &i| m | (1 << i));
            out.push(Subdiagram { mask, size: idx.len(), rank: pos, kind });
            grow(b, j + 1, max_size, idx, out);
        }
        idx.pop();
    }
}

/// Whether the polyhedron `{x : x·δᵢ ≥ 0}` in the hyperbolic space of a
/// lattice of the given rank has finite volume. Needs at most 64 roots.
pub fn is_finite_volume<T: Int>(root_gram: &Matrix<T>, lattice_rank: usize) -> bool {
    let r = root_gram.len();
    if lattice_rank < 2 || r < lattice_rank || r > 64 {
        return false;
    }
    // the roots must span, otherwise the chamber contains a whole line of directions
    let (p, m, _) = linalg::inertia(&linalg::to_rational(root_gram));
    if p + m != lattice_rank {
        return false;
    }
    let d = lattice_rank - 1;
    let b = normalized(root_gram);
    let max_size = d.max(2 * (d - 1)).max(1);
    let subs = semidefinite_subdiagrams(&b, max_size);

    let edges: Vec<u64> = subs
        .iter()
        .filter(|s| s.kind == Kind::Elliptic && s.size == d - 1)
        .map(|s| s.mask)
        .collect();
    let vertices: Vec<u64> = subs
        .iter()
        .filter(|s| {
            (s.kind == Kind::Elliptic && s.size == d) || (s.kind == Kind::Parabolic && s.rank == d - 1)
        })
        .map(|s| s.mask)
        .collect();
    if vertices.is_empty() {
        return false;
    }
    edges
        .iter()
        .all(|&e| vertices.iter().filter(|&&v| v & e == e).count() == 2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ideal_triangle_with_right_and_third_angles() {
        let g = vec![vec![-2i64, 0, 1], vec![0, -2, 2], vec![1, 2, -2]];
        assert!(is_finite_volume(&g, 3));
    }

    #[test]
    fn two_walls_are_infinite() {
        let g = vec![vec![-2i64, 1], vec![1, -2]];
        assert!(!is_finite_volume(&g, 3));
    }

    #[test]
    fn ultraparallel_triangle_side_is_infinite() {
        // δ₂·δ₃ = 3: walls 2 and 3 never meet, leaving a free boundary arc
        let g = vec![vec![-2i64, 0, 1], vec![0, -2, 3], vec![1, 3, -2]];
        assert!(!is_finite_volume(&g, 3));
    }
}
