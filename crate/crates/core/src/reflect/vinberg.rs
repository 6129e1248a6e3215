//! Vinberg's algorithm for the group generated by reflections in `(−2)`-roots.
//!
//! Roots are inward normals: the chamber is `{x : x·δ ≥ 0}` for every
//! accepted `δ`, and a candidate is accepted iff `δ·δⱼ ≥ 0` against every
//! root accepted before it. Candidates of height `h = δ·v₀` are found
//! exactly: with `δ = p + Σ tᵢkᵢ` (`p` a particular solution of `δ·v₀ = h`,
//! `kᵢ` a basis of `v₀⊥`) the norm condition is an ellipsoid in `t`.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::Zero;
use serde_json::{json, Value};

use super::coxeter;
use crate::error::{Error, Result};
use crate::lattice::{int_to_json, Lattice, LatticeVector};
use crate::linalg::{self, Matrix};
use crate::scalar::{int, rat, Int};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ChamberStatus {
    /// The accepted roots bound a finite-volume polyhedron; the chamber is complete.
    ClosedFiniteArea,
    /// Budget exhausted after scanning heights up to and including this one.
    OpenAtHeight(u64),
    /// No root was accepted within the budget.
    NoRoots,
}

impl ChamberStatus {
    pub fn to_json(&self) -> Value {
        match self {
            ChamberStatus::ClosedFiniteArea => json!({ "kind": "closed_finite_area" }),
            ChamberStatus::OpenAtHeight(h) => json!({ "kind": "open_at_height", "height": h }),
            ChamberStatus::NoRoots => json!({ "kind": "no_roots" }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AcceptedRoot<T: Int = BigInt> {
    pub vector: LatticeVector<T>,
    pub height: T,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChamberReport<T: Int = BigInt> {
    pub controlling_vector: LatticeVector<T>,
    pub roots: Vec<AcceptedRoot<T>>,
    pub root_gram: Matrix<T>,
    pub status: ChamberStatus,
    pub heights_scanned: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VinbergBudget {
    pub max_height: u64,
    pub max_roots: usize,
}

impl Default for VinbergBudget {
    fn default() -> Self {
        VinbergBudget { max_height: 40, max_roots: 64 }
    }
}

impl<T: Int> ChamberReport<T> {
    pub fn root_vectors(&self) -> Vec<LatticeVector<T>> {
        self.roots.iter().map(|r| r.vector.clone()).collect()
    }

    pub fn to_json(&self) -> Value {
        let roots: Vec<Value> = self
            .roots
            .iter()
            .map(|r| json!({ "vector": r.vector.to_json(), "height": int_to_json(&r.height) }))
            .collect();
        let gram: Vec<Value> = self
            .root_gram
            .iter()
            .map(|row| Value::Array(row.iter().map(int_to_json).collect()))
            .collect();
        json!({
            "controlling_vector": self.controlling_vector.to_json(),
            "roots": roots,
            "root_gram": gram,
            "status": self.status.to_json(),
            "heights_scanned": self.heights_scanned,
        })
    }

    /// Coxeter diagram: one node per root, an edge wherever `δᵢ·δⱼ ≠ 0`
    /// labelled by the inner product (1 simple, 2 bold, larger dashed).
    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph coxeter {\n  node [shape=circle];\n");
        for (i, r) in self.roots.iter().enumerate() {
            let _ = writeln!(s, "  r{i} [label=\"{}\"];", r.vector);
        }
        let one = T::one();
        let two = int::<T>(2);
        for i in 0..self.roots.len() {
            for j in i + 1..self.roots.len() {
                let ip = &self.root_gram[i][j];
                if ip.is_zero() {
                    continue;
                }
                let style = if *ip == one {
                    ""
                } else if *ip == two {
                    ", style=bold"
                } else {
                    ", style=dashed"
                };
                let _ = writeln!(s, "  r{i} -- r{j} [label=\"{ip}\"{style}];");
            }
        }
        s.push_str("}\n");
        s
    }
}

fn solve_rational<T: Int>(a: &[Vec<Ratio<T>>], b: &[Ratio<T>]) -> Option<Vec<Ratio<T>>> {
    let n = a.len();
    let mut m: Vec<Vec<Ratio<T>>> =
        a.iter().zip(b).map(|(row, x)| row.iter().cloned().chain([x.clone()]).collect()).collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, piv);
        let p = m[col][col].clone();
        for v in m[col].iter_mut() {
            *v = v.clone() / p.clone();
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in col..=n {
                    let v = m[r][c].clone() - f.clone() * m[col][c].clone();
                    m[r][c] = v;
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n].clone()).collect())
}

/// Every `δ` with `δ² = −2` and `δ·v₀ = height`, lexicographically descending.
pub fn roots_at_height<T: Int>(l: &Lattice<T>, v0: &LatticeVector<T>, height: &T) -> Result<Vec<LatticeVector<T>>> {
    let norm_v0 = l.norm(v0)?;
    if !norm_v0.is_positive() {
        return Err(Error::NonPositiveControl(norm_v0.to_string()));
    }
    let a = l.pairing_row(v0)?;
    let column: Matrix<T> = a.iter().map(|x| vec![x.clone()]).collect();
    let e = linalg::echelon(&column);
    let g = e.h[0][0].clone();
    if !height.is_multiple_of(&g) {
        return Ok(Vec::new());
    }
    let factor = height.clone() / g;
    let p: Vec<T> = e.u[0].iter().map(|x| x.clone() * factor.clone()).collect();
    let kernel: Matrix<T> = e.u[1..].to_vec();
    let gram = l.gram();

    if kernel.is_empty() {
        return Ok(if l.ip(&p, &p) == int(-2) { vec![LatticeVector(p)] } else { Vec::new() });
    }
    // −(p + Kᵀt)² = tᵀNt − 2tᵀb + c0
    let gk: Matrix<T> = kernel.iter().map(|k| linalg::mat_vec(gram, k)).collect();
    let nmat: Matrix<Ratio<T>> = kernel
        .iter()
        .map(|ki| gk.iter().map(|gkj| rat(-linalg::dot(ki, gkj))).collect())
        .collect();
    let b: Vec<Ratio<T>> = gk.iter().map(|gkj| rat(linalg::dot(&p, gkj))).collect();
    let c0 = rat(-l.ip(&p, &p));
    let center = solve_rational(&nmat, &b).expect("v0-perp is negative definite");
    let btc = b.iter().zip(&center).fold(Ratio::zero(), |acc, (x, y)| acc + x.clone() * y.clone());
    let radius = rat(int::<T>(2)) - c0 + btc;

    let ts = linalg::enumerate_ellipsoid(&nmat, &center, &radius).expect("v0-perp is negative definite");
    let minus_two = int::<T>(-2);
    let mut out: Vec<LatticeVector<T>> = ts
        .into_iter()
        .map(|t| {
            let mut v = p.clone();
            for (ti, k) in t.iter().zip(&kernel) {
                for (x, kx) in v.iter_mut().zip(k) {
                    *x = x.clone() + ti.clone() * kx.clone();
                }
            }
            LatticeVector(v)
        })
        .filter(|v| l.ip(&v.0, &v.0) == minus_two)
        .collect();
    debug_assert!(out.iter().all(|v| l.ip(&v.0, &v0.0) == *height));
    out.sort_by(|a, b| b.cmp(a));
    Ok(out)
}

/// Simple roots of the finite root system at height 0: lexicographically
/// positive roots that are not a sum of two positive roots.
fn simple_roots_at_height_zero<T: Int>(roots: &[LatticeVector<T>]) -> Vec<LatticeVector<T>> {
    let positive: Vec<&LatticeVector<T>> = roots.iter().filter(|r| r.is_lex_positive()).collect();
    let set: std::collections::HashSet<&LatticeVector<T>> = positive.iter().copied().collect();
    let mut simple: Vec<LatticeVector<T>> = positive
        .iter()
        .filter(|&&r| !positive.iter().any(|&a| a != r && set.contains(&r.sub(a))))
        .map(|&r| r.clone())
        .collect();
    simple.sort_by(|a, b| b.cmp(a));
    simple
}

pub fn vinberg_enumerate<T: Int>(l: &Lattice<T>, v0: &LatticeVector<T>, max_height: u64) -> Result<ChamberReport<T>> {
    vinberg_enumerate_with_budget(l, v0, VinbergBudget { max_height, max_roots: usize::MAX })
}

pub fn vinberg_enumerate_with_budget<T: Int>(
    l: &Lattice<T>,
    v0: &LatticeVector<T>,
    budget: VinbergBudget,
) -> Result<ChamberReport<T>> {
    let norm_v0 = l.norm(v0)?;
    if !norm_v0.is_positive() {
        return Err(Error::NonPositiveControl(norm_v0.to_string()));
    }
    let sig = l.signature();
    if !sig.is_hyperbolic() {
        return Err(Error::WrongSignature { expected: format!("(1,{})", l.rank() - 1), actual: sig.to_string() });
    }
    let mut accepted: Vec<AcceptedRoot<T>> = Vec::new();
    let mut closed = false;
    let mut scanned = 0u64;
    let mut over_budget = false;

    let zero = T::zero();
    for r in simple_roots_at_height_zero(&roots_at_height(l, v0, &zero)?) {
        accepted.push(AcceptedRoot { vector: r, height: zero.clone() });
    }
    if accepted.len() > budget.max_roots {
        over_budget = true;
    }

    let mut h = 1u64;
    while !over_budget && h <= budget.max_height {
        let height = T::from_u64(h).expect("height fits");
        let mut added = false;
        for cand in roots_at_height(l, v0, &height)? {
            let ok = accepted.iter().all(|a| !l.ip(&cand.0, &a.vector.0).is_negative());
            if ok {
                accepted.push(AcceptedRoot { vector: cand, height: height.clone() });
                added = true;
                if accepted.len() > budget.max_roots {
                    over_budget = true;
                    break;
                }
            }
        }
        scanned = h;
        if added && coxeter::is_finite_volume(&gram_of(l, &accepted), l.rank()) {
            closed = true;
            break;
        }
        h += 1;
    }

    let root_gram = gram_of(l, &accepted);
    let status = if closed {
        ChamberStatus::ClosedFiniteArea
    } else if accepted.is_empty() {
        ChamberStatus::NoRoots
    } else {
        ChamberStatus::OpenAtHeight(scanned)
    };
    Ok(ChamberReport { controlling_vector: v0.clone(), roots: accepted, root_gram, status, heights_scanned: scanned })
}

fn gram_of<T: Int>(l: &Lattice<T>, roots: &[AcceptedRoot<T>]) -> Matrix<T> {
    roots
        .iter()
        .map(|a| roots.iter().map(|b| l.ip(&a.vector.0, &b.vector.0)).collect())
        .collect()
}
