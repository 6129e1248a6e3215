//! Truncated `q, r`-series: the theta function, the weak Jacobi form
//! `φ₀,₃` by two routes, and the quadratic symbols used by `Δ₁`.
//!
//! A series stores integer coefficients at `qⁿ rˡ` for `0 ≤ n ≤ order`,
//! times a global prefactor `q^{a/8} r^{b/2}`.

use std::collections::BTreeMap;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::scalar::{int, Int};

/// `(−4/l)`: `±1` for `l ≡ ±1 (mod 4)`, `0` for even `l`.
pub fn kronecker_m4(l: i64) -> i32 {
    match l.rem_euclid(4) {
        1 => 1,
        3 => -1,
        _ => 0,
    }
}

/// `(12/M)`: `1` for `M ≡ ±1`, `−1` for `M ≡ ±5 (mod 12)`, else `0`.
pub fn kronecker_12(m: i64) -> i32 {
    match m.rem_euclid(12) {
        1 | 11 => 1,
        5 | 7 => -1,
        _ => 0,
    }
}

/// `(6/a)`: `±1` for `a ≡ ±1 (mod 6)`, else `0`.
pub fn kronecker_6(a: i64) -> i32 {
    match a.rem_euclid(6) {
        1 => 1,
        5 => -1,
        _ => 0,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QrSeries<T: Int = BigInt> {
    order: i64,
    coeffs: BTreeMap<(i64, i64), T>,
    q_shift_eighths: i64,
    r_shift_halves: i64,
}

impl<T: Int> QrSeries<T> {
    pub fn one(order: u32) -> Self {
        let mut s = Self::zero(order);
        s.coeffs.insert((0, 0), T::one());
        s
    }

    pub fn zero(order: u32) -> Self {
        QrSeries { order: order as i64, coeffs: BTreeMap::new(), q_shift_eighths: 0, r_shift_halves: 0 }
    }

    pub fn order(&self) -> u32 {
        self.order as u32
    }

    /// Prefactor exponents `(a, b)` of `q^{a/8} r^{b/2}`.
    pub fn prefactor(&self) -> (i64, i64) {
        (self.q_shift_eighths, self.r_shift_halves)
    }

    pub fn coeff(&self, n: i64, l: i64) -> T {
        self.coeffs.get(&(n, l)).cloned().unwrap_or_else(T::zero)
    }

    /// Nonzero coefficients in `(n, l)` order.
    pub fn iter(&self) -> impl Iterator<Item = (&(i64, i64), &T)> {
        self.coeffs.iter()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// The `qⁿ` row as `(l, coefficient)` pairs, ascending in `l`.
    pub fn row(&self, n: i64) -> Vec<(i64, T)> {
        self.coeffs.range((n, i64::MIN)..=(n, i64::MAX)).map(|(&(_, l), c)| (l, c.clone())).collect()
    }

    /// Overwrite one coefficient (zero removes it).
    pub fn set_coeff(&mut self, n: i64, l: i64, c: T) {
        if c.is_zero() {
            self.coeffs.remove(&(n, l));
        } else {
            self.coeffs.insert((n, l), c);
        }
    }

    fn add_term(&mut self, n: i64, l: i64, c: T) {
        if n > self.order || c.is_zero() {
            return;
        }
        let e = self.coeffs.entry((n, l)).or_insert_with(T::zero);
        *e = e.clone() + c;
        if e.is_zero() {
            self.coeffs.remove(&(n, l));
        }
    }

    pub fn truncate(&self, order: u32) -> Self {
        let order = (order as i64).min(self.order);
        QrSeries {
            order,
            coeffs: self.coeffs.range(..(order + 1, i64::MIN)).map(|(k, v)| (*k, v.clone())).collect(),
            ..*self
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let order = self.order.min(other.order);
        let mut out = QrSeries {
            order,
            coeffs: BTreeMap::new(),
            q_shift_eighths: self.q_shift_eighths + other.q_shift_eighths,
            r_shift_halves: self.r_shift_halves + other.r_shift_halves,
        };
        for (&(n1, l1), c1) in &self.coeffs {
            if n1 > order {
                break;
            }
            for (&(n2, l2), c2) in other.coeffs.range(..(order - n1 + 1, i64::MIN)) {
                out.add_term(n1 + n2, l1 + l2, c1.clone() * c2.clone());
            }
        }
        out
    }

    /// Multiply in place by `1 + c·qⁿrˡ`.
    fn mul_binomial(&mut self, n: i64, l: i64, c: &T) {
        if n > self.order {
            return;
        }
        let shifted: Vec<((i64, i64), T)> = self
            .coeffs
            .range(..(self.order - n + 1, i64::MIN))
            .map(|(&(a, b), v)| ((a + n, b + l), v.clone() * c.clone()))
            .collect();
        for ((a, b), v) in shifted {
            self.add_term(a, b, v);
        }
    }

    fn negate(&mut self) {
        for v in self.coeffs.values_mut() {
            *v = -v.clone();
        }
    }

    /// `z ↦ −z`: `rˡ ↦ r⁻ˡ`, including the prefactor.
    pub fn reflect_r(&self) -> Self {
        QrSeries {
            coeffs: self.coeffs.iter().map(|(&(n, l), v)| ((n, -l), v.clone())).collect(),
            r_shift_halves: -self.r_shift_halves,
            ..*self
        }
    }

    /// `z ↦ 2z`: `rˡ ↦ r²ˡ`, including the prefactor.
    pub fn double_r(&self) -> Self {
        QrSeries {
            coeffs: self.coeffs.iter().map(|(&(n, l), v)| ((n, 2 * l), v.clone())).collect(),
            r_shift_halves: 2 * self.r_shift_halves,
            ..*self
        }
    }

    /// Exact quotient `self / other`. The `q⁰` row of `other` must be
    /// nonzero and every row division must be exact in `Z[r, r⁻¹]`.
    pub fn div(&self, other: &Self) -> Result<Self> {
        let order = self.order.min(other.order);
        let b0 = other.row(0);
        if b0.is_empty() {
            return Err(Error::InexactDivision);
        }
        let mut out = QrSeries {
            order,
            coeffs: BTreeMap::new(),
            q_shift_eighths: self.q_shift_eighths - other.q_shift_eighths,
            r_shift_halves: self.r_shift_halves - other.r_shift_halves,
        };
        // `rest` = self − other·(quotient rows solved so far)
        let mut rest = self.truncate(order as u32);
        for n in 0..=order {
            let target = rest.row(n);
            let q = divide_laurent(&target, &b0)?;
            for (l, c) in &q {
                out.coeffs.insert((n, *l), c.clone());
            }
            for (&(k, lb), cb) in other.coeffs.range(..(order - n + 1, i64::MIN)) {
                for (l, c) in &q {
                    rest.add_term(n + k, l + lb, -(c.clone() * cb.clone()));
                }
            }
        }
        Ok(out)
    }

    /// Fold an integral prefactor (`8 | a`, `2 | b`) into the exponents.
    pub fn absorb_prefactor(&self) -> Option<Self> {
        if self.q_shift_eighths % 8 != 0 || self.r_shift_halves % 2 != 0 {
            return None;
        }
        let (dn, dl) = (self.q_shift_eighths / 8, self.r_shift_halves / 2);
        Some(QrSeries {
            order: self.order,
            coeffs: self.coeffs.iter().map(|(&(n, l), v)| ((n + dn, l + dl), v.clone())).collect(),
            q_shift_eighths: 0,
            r_shift_halves: 0,
        })
    }

    /// `(n, l, coeff)` rows in order, prefactor excluded.
    pub fn rows(&self) -> Vec<(i64, i64, T)> {
        self.coeffs.iter().map(|(&(n, l), v)| (n, l, v.clone())).collect()
    }
}

/// Exact division of Laurent polynomials given as ascending `(exponent,
/// coefficient)` lists.
fn divide_laurent<T: Int>(a: &[(i64, T)], b: &[(i64, T)]) -> Result<Vec<(i64, T)>> {
    if a.is_empty() {
        return Ok(Vec::new());
    }
    let (b_lo, b_lead) = b[0].clone();
    let b_hi = b[b.len() - 1].0;
    let a_hi = a[a.len() - 1].0;
    let mut rem: BTreeMap<i64, T> = a.iter().cloned().collect();
    let mut q = Vec::new();
    while let Some((&lo, c)) = rem.iter().next() {
        let e = lo - b_lo;
        if e + b_hi > a_hi || !c.is_multiple_of(&b_lead) {
            return Err(Error::InexactDivision);
        }
        let f = c.clone() / b_lead.clone();
        for (eb, cb) in b {
            let k = e + eb;
            let v = rem.remove(&k).unwrap_or_else(T::zero) - f.clone() * cb.clone();
            if !v.is_zero() {
                rem.insert(k, v);
            }
        }
        q.push((e, f));
    }
    Ok(q)
}

/// `ϑ(τ,z) = −q^{1/8} r^{−1/2} ∏_{n≥1} (1−q^{n−1}r)(1−qⁿr⁻¹)(1−qⁿ)`,
/// truncated at `q^order` past the prefactor.
pub fn theta_expansion<T: Int>(order: u32) -> QrSeries<T> {
    let mut s = QrSeries::<T>::one(order);
    let minus_one = int::<T>(-1);
    for n in 1..=(order as i64 + 1) {
        s.mul_binomial(n - 1, 1, &minus_one);
        s.mul_binomial(n, -1, &minus_one);
        s.mul_binomial(n, 0, &minus_one);
    }
    s.negate();
    s.q_shift_eighths = 1;
    s.r_shift_halves = -1;
    s
}

/// `φ₀,₃ = (ϑ(τ,2z)/ϑ(τ,z))²`; prefactors cancel to `r⁻¹`.
pub fn phi03_quotient<T: Int>(order: u32) -> QrSeries<T> {
    let theta = theta_expansion::<T>(order);
    let ratio = theta.double_r().div(&theta).expect("ϑ(τ,z) divides ϑ(τ,2z)");
    ratio.mul(&ratio).absorb_prefactor().expect("integral prefactor")
}

/// `φ₀,₃ = r⁻¹ (∏_{n≥1} (1+q^{n−1}r)(1+qⁿr⁻¹)(1−q^{2n−1}r²)(1−q^{2n−1}r⁻²))²`.
pub fn product_phi03<T: Int>(order: u32) -> QrSeries<T> {
    let mut s = QrSeries::<T>::one(order);
    let (one, minus_one) = (T::one(), int::<T>(-1));
    for n in 1..=(order as i64 + 1) {
        s.mul_binomial(n - 1, 1, &one);
        s.mul_binomial(n, -1, &one);
        s.mul_binomial(2 * n - 1, 2, &minus_one);
        s.mul_binomial(2 * n - 1, -2, &minus_one);
    }
    let mut sq = s.mul(&s);
    sq.r_shift_halves = -2;
    sq.absorb_prefactor().expect("integral prefactor")
}

/// `f₃(n, l)`, the coefficient of `qⁿrˡ` in `φ₀,₃`; zero for `n < 0`.
pub fn f3<T: Int>(n: i64, l: i64, cache: &QrSeries<T>) -> Result<T> {
    if n < 0 {
        return Ok(T::zero());
    }
    if n > cache.order {
        return Err(Error::InsufficientOrder { required: n, available: cache.order });
    }
    Ok(cache.coeff(n, l))
}
