//! Even integer lattices given by symmetric Gram matrices.
//!
//! Everything here is exact. The zero-rank lattice (empty Gram matrix) is a
//! legal value so that isotropic quotients of rank-2 lattices stay total.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::scalar::{int, parse_int, rat, ratio_mod, Int};

/// Largest discriminant group whose full value histogram is enumerated by
/// [`invariants_match`]. Larger groups skip the discriminant-form comparison.
pub const DISCRIMINANT_ENUMERATION_LIMIT: u64 = 1 << 16;

/// Integer coordinates relative to a lattice basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeVector<T = BigInt>(pub Vec<T>);

impl<T: Int> LatticeVector<T> {
    pub fn new(coords: Vec<T>) -> Self {
        LatticeVector(coords)
    }

    pub fn from_i64s(coords: &[i64]) -> Self {
        LatticeVector(coords.iter().map(|&c| int(c)).collect())
    }

    pub fn zero(len: usize) -> Self {
        LatticeVector(vec![T::zero(); len])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coords(&self) -> &[T] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|x| x.is_zero())
    }

    pub fn neg(&self) -> Self {
        LatticeVector(self.0.iter().map(|x| -x.clone()).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        LatticeVector(self.0.iter().zip(&other.0).map(|(a, b)| a.clone() + b.clone()).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        LatticeVector(self.0.iter().zip(&other.0).map(|(a, b)| a.clone() - b.clone()).collect())
    }

    pub fn scale(&self, k: &T) -> Self {
        LatticeVector(self.0.iter().map(|a| a.clone() * k.clone()).collect())
    }

    /// First nonzero coordinate is positive.
    pub fn is_lex_positive(&self) -> bool {
        self.0.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_positive())
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.0.iter().map(int_to_json).collect())
    }
}

impl<T: Int> fmt::Display for LatticeVector<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Real inertia of the form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Signature {
    pub n_plus: usize,
    pub n_minus: usize,
    pub n_zero: usize,
}

impl Signature {
    pub fn new(n_plus: usize, n_minus: usize, n_zero: usize) -> Self {
        Signature { n_plus, n_minus, n_zero }
    }

    pub fn rank(&self) -> usize {
        self.n_plus + self.n_minus + self.n_zero
    }

    /// Signature `(1, n−1)` with no radical.
    pub fn is_hyperbolic(&self) -> bool {
        self.n_plus == 1 && self.n_zero == 0
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.n_zero == 0 {
            write!(f, "({},{})", self.n_plus, self.n_minus)
        } else {
            write!(f, "({},{},{})", self.n_plus, self.n_minus, self.n_zero)
        }
    }
}

/// One Smith generator of the discriminant group `L*/L`, written in
/// rational coordinates of the lattice basis, with its order and its value
/// under the discriminant quadratic form (mod 2).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscriminantGenerator<T: Int = BigInt> {
    pub coords: Vec<Ratio<T>>,
    pub order: T,
    pub value: Ratio<T>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscriminantInvariants<T: Int = BigInt> {
    pub determinant: T,
    /// Non-decreasing, each > 1.
    pub elementary_divisors: Vec<T>,
    pub generators: Vec<DiscriminantGenerator<T>>,
    /// `b(gᵢ, gⱼ) mod 1` between generators.
    bilinear: Matrix<Ratio<T>>,
}

impl<T: Int> DiscriminantInvariants<T> {
    pub fn group_order(&self) -> T {
        self.elementary_divisors.iter().fold(T::one(), |acc, d| acc * d.clone())
    }

    /// Multiset of discriminant-form values over every element of `L*/L`,
    /// or `None` when the group exceeds `limit` elements.
    pub fn value_histogram(&self, limit: u64) -> Option<BTreeMap<Ratio<T>, u64>> {
        let order = self.group_order().to_u64()?;
        if order > limit {
            return None;
        }
        let orders: Vec<u64> = self.elementary_divisors.iter().map(|d| d.to_u64().unwrap()).collect();
        let k = orders.len();
        let two = int::<T>(2);
        let mut hist = BTreeMap::new();
        let mut digits = vec![0u64; k];
        loop {
            let mut q = Ratio::zero();
            for i in 0..k {
                if digits[i] == 0 {
                    continue;
                }
                let ai = rat(T::from_u64(digits[i]).unwrap());
                q = q + ai.clone() * ai.clone() * self.generators[i].value.clone();
                for j in i + 1..k {
                    let aj = rat(T::from_u64(digits[j]).unwrap());
                    q = q + rat(two.clone()) * ai.clone() * aj * self.bilinear[i][j].clone();
                }
            }
            *hist.entry(ratio_mod(&q, &two)).or_insert(0) += 1;
            let mut pos = 0;
            loop {
                if pos == k {
                    return Some(hist);
                }
                digits[pos] += 1;
                if digits[pos] < orders[pos] {
                    break;
                }
                digits[pos] = 0;
                pos += 1;
            }
        }
    }
}

/// An even lattice: symmetric integer Gram matrix with even diagonal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Lattice<T = BigInt> {
    gram: Matrix<T>,
    label: Option<String>,
}

impl<T: Int> Lattice<T> {
    pub fn new(gram: Matrix<T>) -> Result<Self> {
        let n = gram.len();
        if gram.iter().any(|r| r.len() != n) {
            return Err(Error::NotSquare);
        }
        for i in 0..n {
            if gram[i][i].is_odd() {
                return Err(Error::OddDiagonal(i));
            }
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::NotSymmetric(i, j));
                }
            }
        }
        Ok(Lattice { gram, label: None })
    }

    pub fn from_i64(gram: &[Vec<i64>]) -> Result<Self> {
        Self::new(gram.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect())
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    /// The zero-rank lattice.
    pub fn zero() -> Self {
        Lattice { gram: Vec::new(), label: Some("0".into()) }
    }

    /// `U`, Gram `[[0,1],[1,0]]`.
    pub fn hyperbolic_plane() -> Self {
        Self::from_i64(&[vec![0, 1], vec![1, 0]]).unwrap().with_label("U")
    }

    /// `⟨d⟩` for even `d`.
    pub fn diagonal(d: T) -> Result<Self> {
        Self::new(vec![vec![d]])
    }

    /// The positive-definite `E8` root lattice: Cartan matrix in Bourbaki
    /// numbering, branch node 4 joined to 2, 3 and 5.
    pub fn e8() -> Self {
        let edges = [(0, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (1, 3)];
        let mut g = vec![vec![0i64; 8]; 8];
        for (i, row) in g.iter_mut().enumerate() {
            row[i] = 2;
        }
        for &(i, j) in &edges {
            g[i][j] = -1;
            g[j][i] = -1;
        }
        Self::from_i64(&g).unwrap().with_label("E8")
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &Matrix<T> {
        &self.gram
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    fn check_len(&self, v: &LatticeVector<T>) -> Result<()> {
        if v.len() != self.rank() {
            return Err(Error::DimensionMismatch { expected: self.rank(), actual: v.len() });
        }
        Ok(())
    }

    /// `uᵀ·G·v`.
    pub fn inner_product(&self, u: &LatticeVector<T>, v: &LatticeVector<T>) -> Result<T> {
        self.check_len(u)?;
        self.check_len(v)?;
        Ok(self.ip(&u.0, &v.0))
    }

    pub(crate) fn ip(&self, u: &[T], v: &[T]) -> T {
        linalg::dot(u, &linalg::mat_vec(&self.gram, v))
    }

    pub fn norm(&self, v: &LatticeVector<T>) -> Result<T> {
        self.inner_product(v, v)
    }

    /// `G·v`, the linear form `x ↦ x·v` as a coefficient row.
    pub fn pairing_row(&self, v: &LatticeVector<T>) -> Result<Vec<T>> {
        self.check_len(v)?;
        Ok(linalg::mat_vec(&self.gram, &v.0))
    }

    pub fn signature(&self) -> Signature {
        let (p, m, z) = linalg::inertia(&linalg::to_rational(&self.gram));
        Signature::new(p, m, z)
    }

    pub fn determinant(&self) -> T {
        linalg::determinant(&self.gram)
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let (a, b) = (self.rank(), other.rank());
        let mut g = vec![vec![T::zero(); a + b]; a + b];
        for i in 0..a {
            for j in 0..a {
                g[i][j] = self.gram[i][j].clone();
            }
        }
        for i in 0..b {
            for j in 0..b {
                g[a + i][a + j] = other.gram[i][j].clone();
            }
        }
        Lattice { gram: g, label: None }
    }

    /// `K(t)`: every inner product multiplied by `t`.
    pub fn rescale(&self, t: &T) -> Result<Self> {
        if t.is_zero() {
            return Err(Error::ZeroScale);
        }
        let gram = self
            .gram
            .iter()
            .map(|r| r.iter().map(|x| x.clone() * t.clone()).collect())
            .collect();
        Ok(Lattice { gram, label: None })
    }

    /// `Pᵀ·G·P` where the columns of `p` are the new basis vectors.
    pub fn change_basis(&self, p: &[Vec<T>]) -> Self {
        Lattice { gram: linalg::congruent(&self.gram, p), label: None }
    }

    /// Lattice spanned by `vectors` (rows) with the induced form.
    pub fn sublattice(&self, vectors: &[LatticeVector<T>]) -> Self {
        let gram = vectors
            .iter()
            .map(|u| vectors.iter().map(|v| self.ip(&u.0, &v.0)).collect())
            .collect();
        Lattice { gram, label: None }
    }

    pub fn discriminant_invariants(&self) -> Result<DiscriminantInvariants<T>> {
        let determinant = self.determinant();
        if determinant.is_zero() {
            return Err(Error::Degenerate);
        }
        let snf = linalg::smith(&self.gram);
        // G⁻¹ = V·D⁻¹·U, so L* = V·D⁻¹·Zⁿ and the generators are vᵢ/dᵢ.
        let mut generators = Vec::new();
        let mut elementary_divisors = Vec::new();
        for (i, d) in snf.diagonal.iter().enumerate() {
            if d.is_one() {
                continue;
            }
            let coords: Vec<Ratio<T>> =
                snf.v.iter().map(|row| Ratio::new(row[i].clone(), d.clone())).collect();
            elementary_divisors.push(d.clone());
            generators.push((coords, d.clone()));
        }
        let q = |a: &[Ratio<T>], b: &[Ratio<T>]| -> Ratio<T> {
            let mut acc = Ratio::zero();
            for i in 0..a.len() {
                for j in 0..b.len() {
                    acc = acc + a[i].clone() * rat(self.gram[i][j].clone()) * b[j].clone();
                }
            }
            acc
        };
        let one = T::one();
        let two = int::<T>(2);
        let bilinear = generators
            .iter()
            .map(|(a, _)| generators.iter().map(|(b, _)| ratio_mod(&q(a, b), &one)).collect())
            .collect();
        let generators = generators
            .into_iter()
            .map(|(coords, order)| {
                let value = ratio_mod(&q(&coords, &coords), &two);
                DiscriminantGenerator { coords, order, value }
            })
            .collect();
        Ok(DiscriminantInvariants { determinant, elementary_divisors, generators, bilinear })
    }

    /// Every nonzero `v` with `v² = norm` and all `|coords| ≤ bound`, in
    /// lexicographic order.
    pub fn vectors_of_norm(&self, norm: &T, bound: u32) -> Vec<LatticeVector<T>> {
        let n = self.rank();
        let b = bound as i64;
        let mut out = Vec::new();
        if n == 0 {
            return out;
        }
        let mut x = vec![-b; n];
        loop {
            let v: Vec<T> = x.iter().map(|&c| int(c)).collect();
            if x.iter().any(|&c| c != 0) && self.ip(&v, &v) == *norm {
                out.push(LatticeVector(v));
            }
            let mut pos = n;
            loop {
                if pos == 0 {
                    return out;
                }
                pos -= 1;
                if x[pos] < b {
                    x[pos] += 1;
                    break;
                }
                x[pos] = -b;
            }
        }
    }

    pub fn is_primitive(&self, v: &LatticeVector<T>) -> Result<bool> {
        self.check_len(v)?;
        if v.is_zero() {
            return Err(Error::ZeroVector);
        }
        Ok(linalg::content(&v.0).is_one())
    }

    /// Saturated basis of `{x : x·c = 0}`, in Hermite normal form.
    pub fn orthogonal_complement(&self, c: &LatticeVector<T>) -> Result<Vec<LatticeVector<T>>> {
        self.check_len(c)?;
        if c.is_zero() {
            return Err(Error::ZeroVector);
        }
        let row = linalg::mat_vec(&self.gram, &c.0);
        if row.iter().all(|x| x.is_zero()) {
            // c lies in the radical
            return Ok(linalg::identity(self.rank()).into_iter().map(LatticeVector).collect());
        }
        Ok(linalg::integer_kernel(&[row], self.rank()).into_iter().map(LatticeVector).collect())
    }

    /// `c⊥/Zc` for primitive isotropic `c`, with the lifts of its basis.
    pub fn isotropic_quotient_with_lifts(&self, c: &LatticeVector<T>) -> Result<IsotropicQuotient<T>> {
        if !self.is_primitive(c)? {
            return Err(Error::NotPrimitive);
        }
        let norm = self.ip(&c.0, &c.0);
        if !norm.is_zero() {
            return Err(Error::NotIsotropic(norm.to_string()));
        }
        let perp: Matrix<T> = self.orthogonal_complement(c)?.into_iter().map(|v| v.0).collect();
        let y = linalg::echelon_coordinates(&perp, &c.0).expect("c lies in its own complement");
        // complete y to a unimodular basis of Z^(n-1); y is primitive since c is
        let column: Matrix<T> = y.iter().map(|v| vec![v.clone()]).collect();
        let e = linalg::echelon(&column);
        let k = perp.len();
        let lifts: Vec<LatticeVector<T>> = (1..k)
            .map(|j| {
                let mut v = vec![T::zero(); self.rank()];
                for (i, b) in perp.iter().enumerate() {
                    let coef = e.u_inv[i][j].clone();
                    if coef.is_zero() {
                        continue;
                    }
                    for (acc, x) in v.iter_mut().zip(b) {
                        *acc = acc.clone() + coef.clone() * x.clone();
                    }
                }
                LatticeVector(v)
            })
            .collect();
        let lattice = if lifts.is_empty() { Lattice::zero() } else { self.sublattice(&lifts) };
        Ok(IsotropicQuotient { lattice, lifts, cusp: c.clone() })
    }

    pub fn isotropic_quotient(&self, c: &LatticeVector<T>) -> Result<Self> {
        Ok(self.isotropic_quotient_with_lifts(c)?.lattice)
    }

    /// `{"rank": n, "gram": [[...]], "label": "..."}` with exact integers.
    pub fn to_json(&self) -> Value {
        let gram: Vec<Value> =
            self.gram.iter().map(|r| Value::Array(r.iter().map(int_to_json).collect())).collect();
        let mut obj = json!({ "rank": self.rank(), "gram": gram });
        if let Some(l) = &self.label {
            obj["label"] = Value::String(l.clone());
        }
        obj
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let gram = value
            .get("gram")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Json("missing \"gram\" array".into()))?;
        let gram: Matrix<T> = gram
            .iter()
            .map(|row| {
                row.as_array()
                    .ok_or_else(|| Error::Json("gram rows must be arrays".into()))?
                    .iter()
                    .map(int_from_json)
                    .collect::<Result<Vec<T>>>()
            })
            .collect::<Result<_>>()?;
        if let Some(rank) = value.get("rank") {
            let rank = rank.as_u64().ok_or_else(|| Error::Json("rank must be an integer".into()))?;
            if rank as usize != gram.len() {
                return Err(Error::Json(format!("rank {rank} disagrees with gram size {}", gram.len())));
            }
        }
        let mut lattice = Lattice::new(gram)?;
        if let Some(label) = value.get("label").and_then(Value::as_str) {
            lattice.label = Some(label.to_string());
        }
        Ok(lattice)
    }
}

impl<T: Int> fmt::Display for Lattice<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.label {
            Some(l) => write!(f, "{l}"),
            None => write!(f, "lattice of rank {}", self.rank()),
        }
    }
}

/// Result of [`Lattice::isotropic_quotient_with_lifts`].
#[derive(Clone, Debug)]
pub struct IsotropicQuotient<T: Int = BigInt> {
    pub lattice: Lattice<T>,
    /// Representatives in `c⊥` of the quotient basis.
    pub lifts: Vec<LatticeVector<T>>,
    pub cusp: LatticeVector<T>,
}

pub fn int_to_json<T: Int>(x: &T) -> Value {
    // arbitrary_precision keeps the literal exact
    Value::Number(x.to_string().parse().expect("integer literal is valid json"))
}

pub fn int_from_json<T: Int>(v: &Value) -> Result<T> {
    match v {
        Value::Number(n) => {
            parse_int(&n.to_string()).ok_or_else(|| Error::Json(format!("not an integer: {n}")))
        }
        Value::String(s) => parse_int(s).ok_or_else(|| Error::Json(format!("not an integer: {s}"))),
        other => Err(Error::Json(format!("expected integer, got {other}"))),
    }
}

/// Genus-level comparison: signature, determinant, elementary divisors and
/// the discriminant-form value multiset.
pub fn invariants_match<T: Int>(a: &Lattice<T>, b: &Lattice<T>) -> bool {
    if a.rank() != b.rank() || a.signature() != b.signature() || a.determinant() != b.determinant() {
        return false;
    }
    let (da, db) = match (a.discriminant_invariants(), b.discriminant_invariants()) {
        (Ok(x), Ok(y)) => (x, y),
        // both degenerate with equal determinant/signature
        _ => return true,
    };
    if da.elementary_divisors != db.elementary_divisors {
        return false;
    }
    match (
        da.value_histogram(DISCRIMINANT_ENUMERATION_LIMIT),
        db.value_histogram(DISCRIMINANT_ENUMERATION_LIMIT),
    ) {
        (Some(x), Some(y)) => x == y,
        _ => true,
    }
}

/// Searches integer matrices `P` with entries in `[−bound, bound]` such that
/// `Pᵀ·G_a·P = G_b`. Entry bounds are widened one step at a time, and
/// candidate columns are tried in order of increasing ℓ¹ size.
pub fn find_basis_change<T: Int>(a: &Lattice<T>, b: &Lattice<T>, bound: u32) -> Option<Matrix<T>> {
    let n = a.rank();
    if n != b.rank() {
        return None;
    }
    if n == 0 {
        return Some(Vec::new());
    }
    if a.gram == b.gram {
        return Some(linalg::identity(n));
    }
    if a.determinant() != b.determinant() || a.signature() != b.signature() {
        return None;
    }
    for level in 1..=bound {
        let mut pools: Vec<Vec<Vec<T>>> = Vec::with_capacity(n);
        for j in 0..n {
            let mut pool: Vec<Vec<T>> =
                a.vectors_of_norm(&b.gram[j][j], level).into_iter().map(|v| v.0).collect();
            if b.gram[j][j].is_zero() && pool.is_empty() {
                return None;
            }
            pool.sort_by(|x, y| {
                let lx = x.iter().fold(T::zero(), |s, c| s + c.abs());
                let ly = y.iter().fold(T::zero(), |s, c| s + c.abs());
                lx.cmp(&ly).then_with(|| y.cmp(x))
            });
            pools.push(pool);
        }
        let mut chosen: Vec<Vec<T>> = Vec::with_capacity(n);
        if search_columns(a, b, &pools, &mut chosen) {
            let p: Matrix<T> = (0..n).map(|i| chosen.iter().map(|c| c[i].clone()).collect()).collect();
            return Some(p);
        }
    }
    None
}

fn search_columns<T: Int>(
    a: &Lattice<T>,
    b: &Lattice<T>,
    pools: &[Vec<Vec<T>>],
    chosen: &mut Vec<Vec<T>>,
) -> bool {
    let j = chosen.len();
    if j == pools.len() {
        return true;
    }
    for cand in &pools[j] {
        let g = linalg::mat_vec(&a.gram, cand);
        if chosen.iter().enumerate().all(|(i, prev)| linalg::dot(prev, &g) == b.gram[i][j]) {
            chosen.push(cand.clone());
            if search_columns(a, b, pools, chosen) {
                return true;
            }
            chosen.pop();
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    type L = Lattice<i64>;
    type V = LatticeVector<i64>;

    fn u() -> L {
        L::hyperbolic_plane()
    }

    fn s_delta1() -> L {
        // U(12) ⊕ ⟨−2⟩ in the basis f₂, f̂₃, f₋₂
        L::from_i64(&[vec![0, 0, 12], vec![0, -2, 0], vec![12, 0, 0]]).unwrap()
    }

    #[test]
    fn inner_products() {
        assert_eq!(u().inner_product(&V::from_i64s(&[1, 0]), &V::from_i64s(&[0, 1])).unwrap(), 1);
        assert_eq!(u().norm(&V::from_i64s(&[1, 0])).unwrap(), 0);
        let s = s_delta1();
        assert_eq!(s.inner_product(&V::from_i64s(&[1, 0, 0]), &V::from_i64s(&[0, 0, 1])).unwrap(), 12);
        assert!(matches!(
            u().inner_product(&V::from_i64s(&[1]), &V::from_i64s(&[1, 0])),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn construction_errors() {
        assert_eq!(L::from_i64(&[vec![1]]).unwrap_err(), Error::OddDiagonal(0));
        assert_eq!(L::from_i64(&[vec![0, 1], vec![2, 0]]).unwrap_err(), Error::NotSymmetric(1, 0));
        assert_eq!(L::from_i64(&[vec![0, 1]]).unwrap_err(), Error::NotSquare);
        assert_eq!(u().rescale(&0).unwrap_err(), Error::ZeroScale);
    }

    #[test]
    fn signatures() {
        assert_eq!(u().signature(), Signature::new(1, 1, 0));
        let t = u().rescale(&12).unwrap().direct_sum(&u().rescale(&12).unwrap());
        let t = t.direct_sum(&L::diagonal(-2).unwrap());
        assert_eq!(t.signature(), Signature::new(2, 3, 0));
        assert_eq!(L::e8().rescale(&-2).unwrap().signature(), Signature::new(0, 8, 0));
        assert_eq!(L::e8().determinant(), 1);
    }

    #[test]
    fn sums_and_rescales() {
        assert_eq!(u().rescale(&12).unwrap().gram(), &vec![vec![0, 12], vec![12, 0]]);
        assert_eq!(u().rescale(&1).unwrap().gram(), u().gram());
        let s = u().direct_sum(&L::diagonal(-2).unwrap());
        assert_eq!(s.gram(), &vec![vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, -2]]);
    }

    #[test]
    fn discriminant_examples() {
        let d = u().discriminant_invariants().unwrap();
        assert_eq!(d.determinant, -1);
        assert!(d.elementary_divisors.is_empty());

        let d = L::diagonal(-6).unwrap().discriminant_invariants().unwrap();
        assert_eq!(d.determinant, -6);
        assert_eq!(d.elementary_divisors, vec![6]);
        // generator 1/6 has value −6/36 = −1/6 ≡ 11/6
        assert_eq!(d.generators[0].value, Ratio::new(11, 6));

        let d = u().rescale(&2).unwrap().discriminant_invariants().unwrap();
        assert_eq!(d.determinant, -4);
        assert_eq!(d.elementary_divisors, vec![2, 2]);

        let degenerate = L::from_i64(&[vec![0, 0], vec![0, 0]]).unwrap();
        assert_eq!(degenerate.discriminant_invariants().unwrap_err(), Error::Degenerate);
    }

    #[test]
    fn norm_enumeration() {
        assert_eq!(u().vectors_of_norm(&-2, 5), vec![V::from_i64s(&[-1, 1]), V::from_i64s(&[1, -1])]);
        let l = L::diagonal(2).unwrap().direct_sum(&L::diagonal(-6).unwrap());
        assert!(l.vectors_of_norm(&-2, 200).is_empty());
        assert!(u().vectors_of_norm(&0, 2).iter().all(|v| !v.is_zero()));
    }

    #[test]
    fn primitivity() {
        assert!(u().is_primitive(&V::from_i64s(&[1, 0])).unwrap());
        assert!(!u().is_primitive(&V::from_i64s(&[2, 0])).unwrap());
        assert_eq!(u().is_primitive(&V::from_i64s(&[0, 0])).unwrap_err(), Error::ZeroVector);
    }

    #[test]
    fn complements() {
        let e = V::from_i64s(&[1, 0]);
        assert_eq!(u().orthogonal_complement(&e).unwrap(), vec![e.clone()]);

        let l = u().direct_sum(&L::diagonal(-2).unwrap());
        let perp = l.orthogonal_complement(&V::from_i64s(&[1, 0, 0])).unwrap();
        assert_eq!(perp, vec![V::from_i64s(&[1, 0, 0]), V::from_i64s(&[0, 0, 1])]);
    }

    #[test]
    fn quotients() {
        let t = u().direct_sum(&u()).direct_sum(&L::diagonal(-4).unwrap());
        let q = t.isotropic_quotient(&V::from_i64s(&[1, 0, 0, 0, 0])).unwrap();
        let expected = u().direct_sum(&L::diagonal(-4).unwrap());
        assert_eq!(q.rank(), 3);
        assert!(invariants_match(&q, &expected));

        let q = u().isotropic_quotient(&V::from_i64s(&[1, 0])).unwrap();
        assert_eq!(q.rank(), 0);

        assert!(matches!(
            u().isotropic_quotient(&V::from_i64s(&[1, 1])),
            Err(Error::NotIsotropic(_))
        ));
        assert_eq!(u().isotropic_quotient(&V::from_i64s(&[2, 0])).unwrap_err(), Error::NotPrimitive);
    }

    #[test]
    fn isometry_search() {
        assert_eq!(find_basis_change(&u(), &u(), 1), Some(linalg::identity(2)));
        let other = L::diagonal(2).unwrap().direct_sum(&L::diagonal(-2).unwrap());
        assert!(!invariants_match(&u(), &other));
        assert_eq!(find_basis_change(&u(), &other, 3), None);

        // U(12) ⊕ ⟨−2⟩ in two orderings
        let a = u().rescale(&12).unwrap().direct_sum(&L::diagonal(-2).unwrap());
        let b = s_delta1();
        let p = find_basis_change(&a, &b, 1).unwrap();
        assert_eq!(a.change_basis(&p).gram(), b.gram());
    }

    #[test]
    fn discriminant_forms_distinguish_same_group() {
        let a = L::diagonal(2).unwrap().direct_sum(&L::diagonal(-6).unwrap());
        let b = L::diagonal(-2).unwrap().direct_sum(&L::diagonal(6).unwrap());
        assert_eq!(a.determinant(), b.determinant());
        assert_eq!(a.signature(), b.signature());
        assert!(!invariants_match(&a, &b));
    }

    #[test]
    fn json_round_trip() {
        let l = s_delta1().with_label("S");
        let v = l.to_json();
        assert_eq!(v["rank"], 3);
        let back = L::from_json(&v).unwrap();
        assert_eq!(back, l);
        let big = Lattice::<BigInt>::from_json(&serde_json::from_str(
            r#"{"rank":1,"gram":[[-200000000000000000000000000000]]}"#,
        ).unwrap())
        .unwrap();
        assert_eq!(big.gram()[0][0].to_string(), "-200000000000000000000000000000");
    }
}
