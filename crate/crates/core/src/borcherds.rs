//! The automorphic form `Δ₁` for `2U(12) ⊕ ⟨−2⟩` as a sum and as a
//! Borcherds product, both expanded exactly.
//!
//! Monomials `q^{n/6} r^{l/2} s^{m/6}` are keyed by the integers
//! `(n, l, m)`; series are truncated at weight `n + m ≤ order`.
//! Product factors `(1 − qᵃrᵇsᶜ)` have key `(6a, 2b, 6c)` and weight
//! `6(a + c)`, so only the factor `1 − r⁻¹` has weight zero and the
//! expansion to a fixed weight involves finitely many factors.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::jacobi::{self, kronecker_12, kronecker_6, kronecker_m4, QrSeries};
use crate::lattice::int_to_json;
use crate::scalar::{int, isqrt, Int};

pub type Monomial = (i64, i64, i64);

pub fn weight(key: &Monomial) -> i64 {
    key.0 + key.2
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QrsSeries<T: Int = BigInt> {
    order: i64,
    coeffs: BTreeMap<Monomial, T>,
}

impl<T: Int> QrsSeries<T> {
    pub fn zero(order: i64) -> Self {
        QrsSeries { order, coeffs: BTreeMap::new() }
    }

    pub fn one(order: i64) -> Self {
        Self::monomial(order, (0, 0, 0), T::one())
    }

    pub fn monomial(order: i64, key: Monomial, c: T) -> Self {
        let mut s = Self::zero(order);
        s.add_term(key, c);
        s
    }

    pub fn order(&self) -> i64 {
        self.order
    }

    pub fn coeff(&self, key: &Monomial) -> T {
        self.coeffs.get(key).cloned().unwrap_or_else(T::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Monomial, &T)> {
        self.coeffs.iter()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add_term(&mut self, key: Monomial, c: T) {
        if weight(&key) > self.order || c.is_zero() {
            return;
        }
        let e = self.coeffs.entry(key).or_insert_with(T::zero);
        *e = e.clone() + c;
        if e.is_zero() {
            self.coeffs.remove(&key);
        }
    }

    /// Nonzero monomials per weight.
    pub fn monomials_per_weight(&self) -> BTreeMap<i64, usize> {
        let mut out = BTreeMap::new();
        for k in self.coeffs.keys() {
            *out.entry(weight(k)).or_insert(0) += 1;
        }
        out
    }

    /// Every failure of `l ↦ −l` antisymmetry, `q ↔ s` symmetry and the
    /// support congruence `n ≡ m ≡ 1 (mod 6)`, `l` odd.
    pub fn structural_violations(&self) -> Vec<StructuralViolation> {
        let mut out = Vec::new();
        for (&(n, l, m), c) in &self.coeffs {
            if n.rem_euclid(6) != 1 || m.rem_euclid(6) != 1 || l.rem_euclid(2) != 1 {
                out.push(StructuralViolation::Support((n, l, m)));
            }
            if self.coeff(&(n, -l, m)) != -c.clone() {
                out.push(StructuralViolation::Antisymmetry((n, l, m)));
            }
            if self.coeff(&(m, l, n)) != *c {
                out.push(StructuralViolation::QsSymmetry((n, l, m)));
            }
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .coeffs
            .iter()
            .map(|(&(n, l, m), c)| json!({ "n": n, "l": l, "m": m, "coeff": int_to_json(c) }))
            .collect();
        json!({ "order": self.order, "units": ["1/6", "1/2", "1/6"], "coeffs": rows })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StructuralViolation {
    Support(Monomial),
    Antisymmetry(Monomial),
    QsSymmetry(Monomial),
}

/// Product truncated at the smaller of the two orders.
pub fn series_multiply<T: Int>(a: &QrsSeries<T>, b: &QrsSeries<T>) -> QrsSeries<T> {
    let mut out = QrsSeries::zero(a.order.min(b.order));
    for (ka, ca) in &a.coeffs {
        let wa = weight(ka);
        for (kb, cb) in &b.coeffs {
            if wa + weight(kb) <= out.order {
                out.add_term((ka.0 + kb.0, ka.1 + kb.1, ka.2 + kb.2), ca.clone() * cb.clone());
            }
        }
    }
    out
}

/// `(1 − X)^e` for the monomial `X = base`, truncated at weight `order`.
/// Negative exponents expand as a binomial series and need `weight(X) > 0`.
pub fn series_pow_factor<T: Int>(base: Monomial, exponent: i64, order: i64) -> Result<QrsSeries<T>> {
    let w = weight(&base);
    if w < 0 {
        return Err(Error::InvalidOrder(w));
    }
    if w == 0 && exponent < 0 {
        return Err(Error::NegativeExponentOnUnit);
    }
    let mut out = QrsSeries::one(order);
    // c_k = C(e, k)·(−1)^k
    let e = int::<T>(exponent);
    let mut c = T::one();
    let mut k = 0i64;
    loop {
        if exponent >= 0 && k == exponent {
            break;
        }
        if w > 0 && (k + 1) * w > order {
            break;
        }
        let kk = int::<T>(k);
        c = -(c * (e.clone() - kk.clone())) / (kk + T::one());
        k += 1;
        out.add_term((base.0 * k, base.1 * k, base.2 * k), c.clone());
    }
    Ok(out)
}

/// Coefficient of `q^{n/6} r^{l/2} s^{m/6}` on the sum side:
/// `(−4/l)(12/M) Σ_{a | (n,l,m)} (6/a)` when `n ≡ m ≡ 1 (mod 6)`, `m > 0`
/// and `4nm − 3l² = M²` with `M > 0`; otherwise zero.
pub fn delta1_sum_coefficient(n: i64, l: i64, m: i64) -> i64 {
    if m <= 0 || n.rem_euclid(6) != 1 || m.rem_euclid(6) != 1 {
        return 0;
    }
    let d = 4 * n * m - 3 * l * l;
    if d <= 0 {
        return 0;
    }
    let root = isqrt(&d);
    if root * root != d {
        return 0;
    }
    let sign = (kronecker_m4(l) * kronecker_12(root)) as i64;
    if sign == 0 {
        return 0;
    }
    let g = n.gcd(&l).gcd(&m);
    let divisor_sum: i64 = (1..=g).filter(|a| g % a == 0).map(|a| kronecker_6(a) as i64).sum();
    sign * divisor_sum
}

pub fn delta1_sum_side<T: Int>(order: i64) -> Result<QrsSeries<T>> {
    if order < 2 {
        return Err(Error::InvalidOrder(order));
    }
    let mut out = QrsSeries::zero(order);
    for n in (1..order).step_by(6) {
        for m in (1..=order - n).step_by(6) {
            let lmax = isqrt(&(4 * n * m / 3));
            for l in -lmax..=lmax {
                let c = delta1_sum_coefficient(n, l, m);
                if c != 0 {
                    out.add_term((n, l, m), int(c));
                }
            }
        }
    }
    Ok(out)
}

/// Largest `n·m` with `6n + 6m ≤ order`: the `φ₀,₃` order the product needs.
pub fn required_f3_order(order: i64) -> i64 {
    let s = order.max(0) / 6;
    (s / 2) * (s - s / 2)
}

/// `(n, l, m) > 0`: `m > 0`, or `m = 0` and `n > 0`, or `n = m = 0` and `l < 0`.
pub fn is_positive_root(n: i64, l: i64, m: i64) -> bool {
    m > 0 || (m == 0 && n > 0) || (n == 0 && m == 0 && l < 0)
}

/// `q^{1/6} r^{1/2} s^{1/6} ∏_{(n,l,m)>0} (1 − qⁿrˡsᵐ)^{f₃(nm,l)}`.
pub fn delta1_product_side<T: Int>(order: i64, f3cache: &QrSeries<T>) -> Result<QrsSeries<T>> {
    if order < 2 {
        return Err(Error::InvalidOrder(order));
    }
    let required = required_f3_order(order);
    if (f3cache.order() as i64) < required {
        return Err(Error::InsufficientOrder { required, available: f3cache.order() as i64 });
    }
    let mut out = QrsSeries::monomial(order, (1, 1, 1), T::one());
    let budget = order - 2;
    for m in 0..=budget / 6 {
        for n in 0..=(budget / 6 - m) {
            for (l, mult) in f3cache.row(n * m) {
                if !is_positive_root(n, l, m) || mult.is_zero() {
                    continue;
                }
                let e = mult.to_i64().ok_or(Error::InvalidOrder(n * m))?;
                let factor = series_pow_factor::<T>((6 * n, 2 * l, 6 * m), e, order)?;
                out = series_multiply(&out, &factor);
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IdentityVerdict<T: Int = BigInt> {
    Equal,
    Mismatch { n: i64, l: i64, m: i64, lhs: T, rhs: T },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityReport<T: Int = BigInt> {
    pub order: i64,
    pub verdict: IdentityVerdict<T>,
    /// Nonzero monomials per weight on the sum side.
    pub monomials_per_weight: BTreeMap<i64, usize>,
}

impl<T: Int> IdentityReport<T> {
    pub fn is_equal(&self) -> bool {
        self.verdict == IdentityVerdict::Equal
    }

    pub fn to_json(&self) -> Value {
        let verdict = match &self.verdict {
            IdentityVerdict::Equal => json!({ "kind": "equal" }),
            IdentityVerdict::Mismatch { n, l, m, lhs, rhs } => json!({
                "kind": "mismatch", "n": n, "l": l, "m": m,
                "lhs": int_to_json(lhs), "rhs": int_to_json(rhs),
            }),
        };
        let per_weight: Vec<Value> =
            self.monomials_per_weight.iter().map(|(w, c)| json!({ "weight": w, "count": c })).collect();
        json!({ "order": self.order, "verdict": verdict, "monomials_per_weight": per_weight })
    }
}

/// `φ₀,₃` to the order [`delta1_product_side`] needs at weight `order`.
pub fn f3_cache<T: Int>(order: i64) -> QrSeries<T> {
    jacobi::product_phi03(required_f3_order(order) as u32)
}

pub fn verify_identity<T: Int>(order: i64) -> Result<IdentityReport<T>> {
    verify_identity_with_cache(order, &f3_cache(order))
}

/// Compare both sides coefficientwise; the first mismatch is the
/// lexicographically smallest differing `(n, l, m)`.
pub fn verify_identity_with_cache<T: Int>(order: i64, f3cache: &QrSeries<T>) -> Result<IdentityReport<T>> {
    let lhs = delta1_sum_side::<T>(order)?;
    let rhs = delta1_product_side(order, f3cache)?;
    let keys: std::collections::BTreeSet<&Monomial> = lhs.coeffs.keys().chain(rhs.coeffs.keys()).collect();
    let mut verdict = IdentityVerdict::Equal;
    for &&(n, l, m) in &keys {
        let (a, b) = (lhs.coeff(&(n, l, m)), rhs.coeff(&(n, l, m)));
        if a != b {
            verdict = IdentityVerdict::Mismatch { n, l, m, lhs: a, rhs: b };
            break;
        }
    }
    Ok(IdentityReport { order, verdict, monomials_per_weight: lhs.monomials_per_weight() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sum_coefficient_examples() {
        assert_eq!(delta1_sum_coefficient(1, 1, 1), 1);
        assert_eq!(delta1_sum_coefficient(1, -1, 1), -1);
        assert_eq!(delta1_sum_coefficient(7, 7, 7), 2);
        assert_eq!(delta1_sum_coefficient(2, 1, 1), 0);
        assert_eq!(delta1_sum_coefficient(7, 5, 1), 0);
    }

    #[test]
    fn lowest_weight() {
        let sum = delta1_sum_side::<i64>(2).unwrap();
        let expect: Vec<(Monomial, i64)> = vec![((1, -1, 1), -1), ((1, 1, 1), 1)];
        assert_eq!(sum.iter().map(|(k, v)| (*k, *v)).collect::<Vec<_>>(), expect);
        let prod = delta1_product_side(2, &f3_cache::<i64>(2)).unwrap();
        assert_eq!(sum, prod);
    }

    #[test]
    fn pow_factor_binomial_series() {
        let s = series_pow_factor::<i64>((6, 0, 0), -2, 20).unwrap();
        let got: Vec<(Monomial, i64)> = s.iter().map(|(k, v)| (*k, *v)).collect();
        assert_eq!(got, vec![((0, 0, 0), 1), ((6, 0, 0), 2), ((12, 0, 0), 3), ((18, 0, 0), 4)]);
        let s = series_pow_factor::<i64>((0, -2, 0), 2, 20).unwrap();
        assert_eq!(s.coeff(&(0, -2, 0)), -2);
        assert_eq!(s.coeff(&(0, -4, 0)), 1);
        assert!(matches!(series_pow_factor::<i64>((0, -2, 0), -1, 20), Err(Error::NegativeExponentOnUnit)));
    }

    #[test]
    fn multiply_by_one() {
        let s = series_pow_factor::<i64>((6, 2, 6), -3, 30).unwrap();
        assert_eq!(series_multiply(&s, &QrsSeries::one(30)), s);
    }

    #[test]
    fn required_order() {
        assert_eq!(required_f3_order(26), 4);
        assert_eq!(required_f3_order(2), 0);
        assert_eq!(required_f3_order(18), 2);
        let short = jacobi::product_phi03::<i64>(1);
        assert!(matches!(delta1_product_side(26, &short), Err(Error::InsufficientOrder { required: 4, .. })));
    }

    #[test]
    fn identity_at_weight_14() {
        assert!(verify_identity::<i64>(14).unwrap().is_equal());
    }
}
