//! 2-reflectivity of hyperbolic lattices: reflections in `(−2)`-roots,
//! exact rank-2 decisions via binary forms, and Vinberg's algorithm with a
//! finite-volume test for rank `≥ 3`.

pub mod binary_form;
pub mod coxeter;
pub mod vinberg;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::lattice::{int_to_json, Lattice, LatticeVector};
use crate::scalar::{exact_sqrt, int, Int};

pub use binary_form::{BinaryForm, BinaryFormCycle, Mat2};
pub use vinberg::{
    roots_at_height, vinberg_enumerate, vinberg_enumerate_with_budget, AcceptedRoot, ChamberReport, ChamberStatus,
    VinbergBudget,
};

/// `s_δ(v) = v + (v·δ)δ` for a root `δ² = −2`.
pub fn reflect<T: Int>(l: &Lattice<T>, delta: &LatticeVector<T>, v: &LatticeVector<T>) -> Result<LatticeVector<T>> {
    let n = l.norm(delta)?;
    if n != int(-2) {
        return Err(Error::NotARoot(n.to_string()));
    }
    let k = l.inner_product(v, delta)?;
    Ok(v.add(&delta.scale(&k)))
}

fn check_rank2<T: Int>(l: &Lattice<T>) -> Result<()> {
    if l.rank() != 2 {
        return Err(Error::WrongRank { expected: 2, actual: l.rank() });
    }
    let sig = l.signature();
    if sig.n_plus != 1 || sig.n_minus != 1 {
        return Err(Error::WrongSignature { expected: "(1,1)".into(), actual: sig.to_string() });
    }
    Ok(())
}

/// A vector of norm `value` in a rank-2 lattice of signature `(1,1)`, or
/// `None` when no such vector exists.
pub fn rank2_represents<T: Int>(l: &Lattice<T>, value: &T) -> Result<Option<LatticeVector<T>>> {
    check_rank2(l)?;
    Ok(BinaryForm::from_lattice(l).represent(value).map(binary_form::to_vector))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RootCount {
    Zero,
    Finite(usize),
    Infinite,
}

impl RootCount {
    pub fn to_json(&self) -> Value {
        match self {
            RootCount::Zero => json!({ "kind": "zero" }),
            RootCount::Finite(k) => json!({ "kind": "finite", "count": k }),
            RootCount::Infinite => json!({ "kind": "infinite" }),
        }
    }
}

/// Number of `(−2)`-vectors (both signs) in a rank-2 lattice of signature `(1,1)`.
pub fn count_minus2_rank2<T: Int>(l: &Lattice<T>) -> Result<RootCount> {
    check_rank2(l)?;
    let f = BinaryForm::from_lattice(l);
    let m = int::<T>(-2);
    if exact_sqrt(&f.discriminant()).is_some() {
        let k = f.solutions_square_disc(&m).len();
        return Ok(if k == 0 { RootCount::Zero } else { RootCount::Finite(k) });
    }
    // the unit group of a non-square discriminant is infinite
    Ok(if f.represent(&m).is_some() { RootCount::Infinite } else { RootCount::Zero })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ReflectivityKind {
    SpecialElliptic,
    Elliptic,
    Parabolic,
    NotTwoReflective,
    UndecidedAtBudget,
}

impl ReflectivityKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ReflectivityKind::SpecialElliptic => "special_elliptic",
            ReflectivityKind::Elliptic => "elliptic",
            ReflectivityKind::Parabolic => "parabolic",
            ReflectivityKind::NotTwoReflective => "not_two_reflective",
            ReflectivityKind::UndecidedAtBudget => "undecided_at_budget",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct BudgetUsed {
    pub heights: u64,
    pub roots: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReflectivityVerdict<T: Int = BigInt> {
    pub kind: ReflectivityKind,
    /// A `(−2)`-vector or an isotropic vector; its norm is `witness_norm`.
    pub witness: Option<LatticeVector<T>>,
    pub witness_norm: Option<T>,
    pub root_count: Option<RootCount>,
    pub chamber: Option<ChamberReport<T>>,
    pub budget_used: BudgetUsed,
}

impl<T: Int> ReflectivityVerdict<T> {
    fn simple(kind: ReflectivityKind) -> Self {
        ReflectivityVerdict {
            kind,
            witness: None,
            witness_norm: None,
            root_count: None,
            chamber: None,
            budget_used: BudgetUsed::default(),
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "kind": self.kind.as_str(),
            "witness": self.witness.as_ref().map(|w| w.to_json()),
            "witness_norm": self.witness_norm.as_ref().map(int_to_json),
            "root_count": self.root_count.map(|c| c.to_json()),
            "chamber": self.chamber.as_ref().map(|c| c.to_json()),
            "budget_used": { "heights": self.budget_used.heights, "roots": self.budget_used.roots },
        })
    }
}

/// Finite-area verdict for a rank-3 chamber.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AreaVerdict {
    Finite,
    Infinite,
    /// The report stopped at its height budget with an open chamber.
    Undecided,
}

pub fn rank3_finite_area<T: Int>(rep: &ChamberReport<T>, l: &Lattice<T>) -> Result<AreaVerdict> {
    if l.rank() != 3 {
        return Err(Error::WrongRank { expected: 3, actual: l.rank() });
    }
    Ok(match rep.status {
        ChamberStatus::NoRoots => AreaVerdict::Infinite,
        _ if coxeter::is_finite_volume(&rep.root_gram, 3) => AreaVerdict::Finite,
        _ => AreaVerdict::Undecided,
    })
}

/// Smallest even integer dividing every norm: `gcd(gᵢᵢ, 2gᵢⱼ)`.
fn norm_gcd<T: Int>(l: &Lattice<T>) -> T {
    let g = l.gram();
    let mut acc = T::zero();
    for i in 0..g.len() {
        acc = acc.gcd(&g[i][i]);
        for j in i + 1..g.len() {
            acc = acc.gcd(&(int::<T>(2) * g[i][j].clone()));
        }
    }
    acc
}

/// A primitive vector of positive norm, preferring small support and
/// small norm; deterministic.
pub fn default_control_vector<T: Int>(l: &Lattice<T>) -> Option<LatticeVector<T>> {
    let n = l.rank();
    let mut best: Option<(T, LatticeVector<T>)> = None;
    let mut consider = |v: Vec<T>| {
        let norm = l.ip(&v, &v);
        if !norm.is_positive() {
            return;
        }
        let v = LatticeVector(v);
        let better = match &best {
            None => true,
            Some((bn, bv)) => norm < *bn || (norm == *bn && v > *bv),
        };
        if better {
            best = Some((norm, v));
        }
    };
    for i in 0..n {
        let mut v = vec![T::zero(); n];
        v[i] = T::one();
        consider(v);
    }
    for i in 0..n {
        for j in i + 1..n {
            for x in 1..=3i64 {
                for y in -3..=3i64 {
                    if y == 0 || x.gcd(&y) != 1 {
                        continue;
                    }
                    let mut v = vec![T::zero(); n];
                    v[i] = int(x);
                    v[j] = int(y);
                    consider(v);
                }
            }
        }
    }
    if let Some((_, v)) = best {
        return Some(v);
    }
    positive_by_diagonalization(l)
}

/// Positive-norm vector from a rational congruence diagonalization.
fn positive_by_diagonalization<T: Int>(l: &Lattice<T>) -> Option<LatticeVector<T>> {
    let n = l.rank();
    let mut m: Vec<Vec<Ratio<T>>> = crate::linalg::to_rational(l.gram());
    // columns of p are the current basis in original coordinates
    let mut p: Vec<Vec<Ratio<T>>> = crate::linalg::to_rational(&crate::linalg::identity::<T>(n));
    let mut done = vec![false; n];
    loop {
        let free: Vec<usize> = (0..n).filter(|&i| !done[i]).collect();
        if free.is_empty() {
            return None;
        }
        if let Some(&i) = free.iter().find(|&&i| m[i][i].is_positive()) {
            let col: Vec<Ratio<T>> = (0..n).map(|r| p[r][i].clone()).collect();
            let den = col.iter().fold(T::one(), |acc, x| acc.lcm(x.denom()));
            let ints: Vec<T> = col.iter().map(|x| (x.clone() * Ratio::from_integer(den.clone())).to_integer()).collect();
            let g = crate::linalg::content(&ints);
            return Some(LatticeVector(ints.into_iter().map(|x| x / g.clone()).collect()));
        }
        let pivot = free.iter().copied().find(|&i| !m[i][i].is_zero());
        match pivot {
            Some(i) => {
                let d = m[i][i].clone();
                for &j in free.iter().filter(|&&j| j != i) {
                    let f = m[j][i].clone() / d.clone();
                    if f.is_zero() {
                        continue;
                    }
                    // e_j <- e_j − f·e_i
                    for k in 0..n {
                        let v = m[j][k].clone() - f.clone() * m[i][k].clone();
                        m[j][k] = v;
                    }
                    for k in 0..n {
                        let v = m[k][j].clone() - f.clone() * m[k][i].clone();
                        m[k][j] = v;
                    }
                    for r in 0..n {
                        let v = p[r][j].clone() - f.clone() * p[r][i].clone();
                        p[r][j] = v;
                    }
                }
                done[i] = true;
            }
            None => {
                let pair = free
                    .iter()
                    .flat_map(|&i| free.iter().map(move |&j| (i, j)))
                    .find(|&(i, j)| i != j && !m[i][j].is_zero())?;
                let (i, j) = pair;
                for k in 0..n {
                    let v = m[i][k].clone() + m[j][k].clone();
                    m[i][k] = v;
                }
                for k in 0..n {
                    let v = m[k][i].clone() + m[k][j].clone();
                    m[k][i] = v;
                }
                for r in 0..n {
                    let v = p[r][i].clone() + p[r][j].clone();
                    p[r][i] = v;
                }
            }
        }
    }
}

/// Classify a hyperbolic lattice. Never guesses: returns
/// `UndecidedAtBudget` when the exact procedures do not conclude.
pub fn classify<T: Int>(l: &Lattice<T>, budget: VinbergBudget) -> Result<ReflectivityVerdict<T>> {
    let sig = l.signature();
    if !sig.is_hyperbolic() {
        let rank = l.rank().max(1);
        return Err(Error::WrongSignature { expected: format!("(1,{})", rank - 1), actual: sig.to_string() });
    }
    match l.rank() {
        1 => Ok(ReflectivityVerdict::simple(ReflectivityKind::SpecialElliptic)),
        2 => classify_rank2(l),
        _ => classify_vinberg(l, budget),
    }
}

fn classify_rank2<T: Int>(l: &Lattice<T>) -> Result<ReflectivityVerdict<T>> {
    let count = count_minus2_rank2(l)?;
    let root = rank2_represents(l, &int(-2))?;
    let isotropic = rank2_represents(l, &T::zero())?;
    let mut v = ReflectivityVerdict::simple(ReflectivityKind::NotTwoReflective);
    v.root_count = Some(count);
    let elliptic = match count {
        RootCount::Infinite => true,
        RootCount::Finite(k) => k >= 4,
        RootCount::Zero => false,
    };
    if elliptic {
        v.kind = ReflectivityKind::Elliptic;
        v.witness_norm = Some(int(-2));
        v.witness = root;
    } else if let Some(w) = isotropic {
        v.kind = ReflectivityKind::Parabolic;
        v.witness_norm = Some(T::zero());
        v.witness = Some(w);
    } else if let Some(w) = root {
        v.kind = ReflectivityKind::Parabolic;
        v.witness_norm = Some(int(-2));
        v.witness = Some(w);
    }
    Ok(v)
}

fn classify_vinberg<T: Int>(l: &Lattice<T>, budget: VinbergBudget) -> Result<ReflectivityVerdict<T>> {
    let v0 = default_control_vector(l).expect("hyperbolic lattice has a positive vector");
    let rep = vinberg_enumerate_with_budget(l, &v0, budget)?;
    let mut v = ReflectivityVerdict::simple(ReflectivityKind::UndecidedAtBudget);
    v.budget_used = BudgetUsed { heights: rep.heights_scanned, roots: rep.roots.len() };
    match rep.status {
        ChamberStatus::ClosedFiniteArea => {
            v.kind = ReflectivityKind::Elliptic;
            v.witness = rep.roots.first().map(|r| r.vector.clone());
            v.witness_norm = v.witness.as_ref().map(|_| int(-2));
        }
        ChamberStatus::NoRoots => {
            let g = norm_gcd(l);
            if !int::<T>(2).is_multiple_of(&g) {
                // no (−2)-vectors at all, while O(S) is infinite in rank ≥ 3
                v.kind = ReflectivityKind::NotTwoReflective;
            }
        }
        ChamberStatus::OpenAtHeight(_) => {
            v.witness = rep.roots.first().map(|r| r.vector.clone());
            v.witness_norm = v.witness.as_ref().map(|_| int(-2));
        }
    }
    v.chamber = Some(rep);
    Ok(v)
}
