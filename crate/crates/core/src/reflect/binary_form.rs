//! Indefinite binary quadratic forms `ax² + bxy + cy²`: Gauss reduction,
//! reduction cycles, proper equivalence with explicit transforms, and
//! representation of integers.

use num_bigint::BigInt;

use crate::lattice::{Lattice, LatticeVector};
use crate::scalar::{exact_sqrt, int, isqrt, Int};

/// 2×2 integer matrix acting on column vectors.
pub type Mat2<T> = [[T; 2]; 2];

fn mat2_identity<T: Int>() -> Mat2<T> {
    [[T::one(), T::zero()], [T::zero(), T::one()]]
}

fn mat2_mul<T: Int>(a: &Mat2<T>, b: &Mat2<T>) -> Mat2<T> {
    let e = |i: usize, j: usize| a[i][0].clone() * b[0][j].clone() + a[i][1].clone() * b[1][j].clone();
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

/// Inverse of a determinant-one matrix.
fn mat2_inv_sl2<T: Int>(m: &Mat2<T>) -> Mat2<T> {
    [[m[1][1].clone(), -m[0][1].clone()], [-m[1][0].clone(), m[0][0].clone()]]
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BinaryForm<T: Int = BigInt> {
    pub a: T,
    pub b: T,
    pub c: T,
}

/// The cycle of reduced forms reached by repeated reduction steps, with
/// the step parameter `t` of each transition `[[0,−1],[1,t]]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryFormCycle<T: Int = BigInt> {
    pub forms: Vec<BinaryForm<T>>,
    steps: Vec<T>,
}

impl<T: Int> BinaryFormCycle<T> {
    pub fn len(&self) -> usize {
        self.forms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forms.is_empty()
    }

    /// Transform taking `forms[0]` to `forms[k]`.
    fn transform_to(&self, k: usize) -> Mat2<T> {
        self.steps[..k].iter().fold(mat2_identity(), |acc, t| mat2_mul(&acc, &step_matrix(t)))
    }
}

fn step_matrix<T: Int>(t: &T) -> Mat2<T> {
    [[T::zero(), -T::one()], [T::one(), t.clone()]]
}

impl<T: Int> BinaryForm<T> {
    pub fn new(a: T, b: T, c: T) -> Self {
        BinaryForm { a, b, c }
    }

    /// `v ↦ vᵀ·G·v` for a rank-2 lattice.
    pub fn from_lattice(l: &Lattice<T>) -> Self {
        let g = l.gram();
        BinaryForm::new(g[0][0].clone(), int::<T>(2) * g[0][1].clone(), g[1][1].clone())
    }

    pub fn discriminant(&self) -> T {
        self.b.clone() * self.b.clone() - int::<T>(4) * self.a.clone() * self.c.clone()
    }

    pub fn eval(&self, x: &T, y: &T) -> T {
        self.a.clone() * x.clone() * x.clone()
            + self.b.clone() * x.clone() * y.clone()
            + self.c.clone() * y.clone() * y.clone()
    }

    /// `f∘M`, i.e. `(x, y) ↦ f(M·(x, y))`.
    pub fn act(&self, m: &Mat2<T>) -> Self {
        let (p, q, r, s) = (&m[0][0], &m[0][1], &m[1][0], &m[1][1]);
        let two = int::<T>(2);
        let a = self.eval(p, r);
        let c = self.eval(q, s);
        let b = two * self.a.clone() * p.clone() * q.clone()
            + self.b.clone() * (p.clone() * s.clone() + q.clone() * r.clone())
            + int::<T>(2) * self.c.clone() * r.clone() * s.clone();
        BinaryForm::new(a, b, c)
    }

    /// Reduced in the indefinite sense: `0 < b < √D` and `|√D − 2|a|| < b`.
    /// Only meaningful for positive non-square discriminants.
    pub fn is_reduced(&self) -> bool {
        let s = isqrt(&self.discriminant());
        let two_a = int::<T>(2) * self.a.abs();
        self.b.is_positive()
            && self.b <= s
            && two_a >= s.clone() + T::one() - self.b.clone()
            && two_a <= s + self.b.clone()
    }

    /// One reduction step: returns `f∘[[0,−1],[1,t]]` and `t`.
    fn rho(&self, s: &T) -> (Self, T) {
        let d = self.discriminant();
        let c_abs = self.c.abs();
        let two_c = int::<T>(2) * c_abs.clone();
        let lower = if c_abs > *s {
            T::one() - c_abs
        } else {
            s.clone() + T::one() - two_c.clone()
        };
        let r = lower.clone() + (-self.b.clone() - lower).mod_floor(&two_c);
        let t = (r.clone() + self.b.clone()) / (int::<T>(2) * self.c.clone());
        let next_c = (r.clone() * r.clone() - d) / (int::<T>(4) * self.c.clone());
        (BinaryForm::new(self.c.clone(), r, next_c), t)
    }

    /// A reduced form properly equivalent to `self`, with `M` such that
    /// `self∘M` is that form. Requires a positive non-square discriminant.
    pub fn reduce(&self) -> (Self, Mat2<T>) {
        let s = isqrt(&self.discriminant());
        let mut f = self.clone();
        let mut m = mat2_identity();
        while !f.is_reduced() {
            let (next, t) = f.rho(&s);
            m = mat2_mul(&m, &step_matrix(&t));
            f = next;
        }
        (f, m)
    }

    /// The reduction cycle through the reduced form of `self`.
    pub fn cycle(&self) -> BinaryFormCycle<T> {
        let (start, _) = self.reduce();
        let s = isqrt(&self.discriminant());
        let mut forms = vec![start.clone()];
        let mut steps = Vec::new();
        let mut f = start.clone();
        loop {
            let (next, t) = f.rho(&s);
            steps.push(t);
            if next == start {
                break;
            }
            forms.push(next.clone());
            f = next;
        }
        BinaryFormCycle { forms, steps }
    }

    /// `M ∈ SL₂(Z)` with `self∘M = other`, if the forms are properly
    /// equivalent. Requires equal positive non-square discriminants.
    pub fn equivalence_to(&self, other: &Self) -> Option<Mat2<T>> {
        if self.discriminant() != other.discriminant() {
            return None;
        }
        let (_, m_self) = self.reduce();
        let (other_red, m_other) = other.reduce();
        let cycle = self.cycle();
        let k = cycle.forms.iter().position(|f| *f == other_red)?;
        let m = mat2_mul(&mat2_mul(&m_self, &cycle.transform_to(k)), &mat2_inv_sl2(&m_other));
        Some(m)
    }

    /// A vector `(x, y)` with `f(x, y) = m`, or `None` when `m` is not
    /// represented. Works for every discriminant `D > 0`.
    pub fn represent(&self, m: &T) -> Option<(T, T)> {
        let d = self.discriminant();
        if exact_sqrt(&d).is_some() {
            return if m.is_zero() {
                Some(self.isotropic_vector())
            } else {
                self.solutions_square_disc(m).into_iter().next()
            };
        }
        if m.is_zero() {
            return None;
        }
        let mut k = T::one();
        while k.clone() * k.clone() <= m.abs() {
            let k2 = k.clone() * k.clone();
            if m.is_multiple_of(&k2) {
                if let Some((x, y)) = self.represent_primitive(&(m.clone() / k2)) {
                    return Some((x * k.clone(), y * k.clone()));
                }
            }
            k = k + T::one();
        }
        None
    }

    fn represent_primitive(&self, m: &T) -> Option<(T, T)> {
        let d = self.discriminant();
        let four_m = int::<T>(4) * m.clone();
        let two_m_abs = int::<T>(2) * m.abs();
        let mut b = T::zero();
        while b < two_m_abs {
            let num = b.clone() * b.clone() - d.clone();
            if num.is_multiple_of(&four_m) {
                let g = BinaryForm::new(m.clone(), b.clone(), num / four_m.clone());
                if let Some(mat) = self.equivalence_to(&g) {
                    // g represents m at (1, 0)
                    let (x, y) = (mat[0][0].clone(), mat[1][0].clone());
                    debug_assert!(self.eval(&x, &y) == *m);
                    return Some((x, y));
                }
            }
            b = b + T::one();
        }
        None
    }

    /// A nonzero isotropic vector; requires a square discriminant.
    fn isotropic_vector(&self) -> (T, T) {
        if self.a.is_zero() {
            return (T::one(), T::zero());
        }
        let s = exact_sqrt(&self.discriminant()).expect("square discriminant");
        // 2a·x + (b − s)·y = 0
        let x = s - self.b.clone();
        let y = int::<T>(2) * self.a.clone();
        let g = x.gcd(&y);
        (x / g.clone(), y / g)
    }

    /// Every solution of `f(v) = m`, `m ≠ 0`, for a positive square
    /// discriminant (the set is finite), sorted.
    pub fn solutions_square_disc(&self, m: &T) -> Vec<(T, T)> {
        let s = exact_sqrt(&self.discriminant()).expect("square discriminant");
        let mut out = Vec::new();
        if self.a.is_zero() {
            // y·(b·x + c·y) = m
            for y in signed_divisors(m) {
                let rhs = m.clone() / y.clone() - self.c.clone() * y.clone();
                if rhs.is_multiple_of(&self.b) {
                    out.push((rhs / self.b.clone(), y));
                }
            }
        } else {
            // 4a·f = (2ax + (b−s)y)(2ax + (b+s)y)
            let two_a = int::<T>(2) * self.a.clone();
            let n = int::<T>(4) * self.a.clone() * m.clone();
            for u in signed_divisors(&n) {
                let w = n.clone() / u.clone();
                let diff = w - u.clone();
                let two_s = int::<T>(2) * s.clone();
                if !diff.is_multiple_of(&two_s) {
                    continue;
                }
                let y = diff / two_s;
                let num = u - (self.b.clone() - s.clone()) * y.clone();
                if num.is_multiple_of(&two_a) {
                    out.push((num / two_a.clone(), y));
                }
            }
        }
        out.retain(|(x, y)| self.eval(x, y) == *m);
        out.sort();
        out.dedup();
        out
    }
}

fn signed_divisors<T: Int>(n: &T) -> Vec<T> {
    let n = n.abs();
    let mut out = Vec::new();
    let mut i = T::one();
    while i.clone() * i.clone() <= n {
        if n.is_multiple_of(&i) {
            let j = n.clone() / i.clone();
            for d in [i.clone(), j] {
                out.push(d.clone());
                out.push(-d);
            }
        }
        i = i + T::one();
    }
    out.sort();
    out.dedup();
    out
}

/// Lattice vector from a form solution.
pub(crate) fn to_vector<T: Int>((x, y): (T, T)) -> LatticeVector<T> {
    LatticeVector(vec![x, y])
}
