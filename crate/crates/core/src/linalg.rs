//! Exact integer and rational linear algebra: Bareiss determinants, Hermite
//! and Smith normal forms with unimodular transforms, integer kernels,
//! congruence diagonalization, and Fincke-Pohst ellipsoid enumeration.

use num_rational::Ratio;
use num_traits::Zero;

use crate::scalar::{rat, ratio_to_f64, Int};

pub type Matrix<T> = Vec<Vec<T>>;

pub fn identity<T: Int>(n: usize) -> Matrix<T> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { T::one() } else { T::zero() }).collect())
        .collect()
}

pub fn transpose<T: Clone>(a: &[Vec<T>]) -> Matrix<T> {
    if a.is_empty() {
        return Vec::new();
    }
    let cols = a[0].len();
    (0..cols).map(|j| a.iter().map(|row| row[j].clone()).collect()).collect()
}

pub fn mat_mul<T: Int>(a: &[Vec<T>], b: &[Vec<T>]) -> Matrix<T> {
    let inner = b.len();
    let cols = if inner == 0 { 0 } else { b[0].len() };
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    (0..inner).fold(T::zero(), |acc, k| acc + row[k].clone() * b[k][j].clone())
                })
                .collect()
        })
        .collect()
}

pub fn mat_vec<T: Int>(a: &[Vec<T>], v: &[T]) -> Vec<T> {
    a.iter()
        .map(|row| {
            row.iter().zip(v).fold(T::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
        })
        .collect()
}

pub fn dot<T: Int>(u: &[T], v: &[T]) -> T {
    u.iter().zip(v).fold(T::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

/// `Pᵀ·A·P`.
pub fn congruent<T: Int>(a: &[Vec<T>], p: &[Vec<T>]) -> Matrix<T> {
    mat_mul(&transpose(p), &mat_mul(a, p))
}

/// Fraction-free Gaussian elimination. The empty matrix has determinant 1.
pub fn determinant<T: Int>(a: &[Vec<T>]) -> T {
    let n = a.len();
    if n == 0 {
        return T::one();
    }
    let mut m: Matrix<T> = a.to_vec();
    let mut sign = T::one();
    let mut prev = T::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    sign = -sign;
                }
                None => return T::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m[i][j].clone() * m[k][k].clone() - m[i][k].clone() * m[k][j].clone();
                m[i][j] = num / prev.clone();
            }
        }
        prev = m[k][k].clone();
    }
    sign * m[n - 1][n - 1].clone()
}

/// Row echelon form `h = u·a` with `u` unimodular and `u_inv = u⁻¹`.
///
/// Pivots are positive and entries above each pivot are reduced into
/// `[0, pivot)`, so the nonzero rows of `h` are the Hermite normal form of
/// the row lattice of `a`.
#[derive(Debug, Clone)]
pub struct Echelon<T> {
    pub h: Matrix<T>,
    pub u: Matrix<T>,
    pub u_inv: Matrix<T>,
    pub pivots: Vec<usize>,
}

pub fn echelon<T: Int>(a: &[Vec<T>]) -> Echelon<T> {
    let m = a.len();
    let n = if m == 0 { 0 } else { a[0].len() };
    let mut h = a.to_vec();
    let mut u = identity::<T>(m);
    let mut u_inv = identity::<T>(m);
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..n {
        if row == m {
            break;
        }
        for i in row + 1..m {
            if h[i][col].is_zero() {
                continue;
            }
            let a0 = h[row][col].clone();
            let b0 = h[i][col].clone();
            let eg = a0.extended_gcd(&b0);
            let (g, x, y) = (eg.gcd, eg.x, eg.y);
            let p = -(b0.clone() / g.clone());
            let q = a0.clone() / g.clone();
            // rows: [r; i] <- [[x, y], [p, q]] [r; i], det = 1
            for mat in [&mut h, &mut u] {
                let (r_row, i_row) = (mat[row].clone(), mat[i].clone());
                for c in 0..r_row.len() {
                    mat[row][c] = x.clone() * r_row[c].clone() + y.clone() * i_row[c].clone();
                    mat[i][c] = p.clone() * r_row[c].clone() + q.clone() * i_row[c].clone();
                }
            }
            // inverse acts on columns: [[q, -y], [-p, x]]
            for r in u_inv.iter_mut() {
                let (cr, ci) = (r[row].clone(), r[i].clone());
                r[row] = cr.clone() * q.clone() - ci.clone() * p.clone();
                r[i] = ci * x.clone() - cr * y.clone();
            }
        }
        if h[row][col].is_zero() {
            continue;
        }
        if h[row][col].is_negative() {
            for v in h[row].iter_mut().chain(u[row].iter_mut()) {
                *v = -v.clone();
            }
            for r in u_inv.iter_mut() {
                r[row] = -r[row].clone();
            }
        }
        let piv = h[row][col].clone();
        for k in 0..row {
            let q = h[k][col].div_floor(&piv);
            if q.is_zero() {
                continue;
            }
            for mat in [&mut h, &mut u] {
                let src = mat[row].clone();
                for (dst, s) in mat[k].iter_mut().zip(src) {
                    *dst = dst.clone() - q.clone() * s;
                }
            }
            for r in u_inv.iter_mut() {
                r[row] = r[row].clone() + q.clone() * r[k].clone();
            }
        }
        pivots.push(col);
        row += 1;
    }
    Echelon { h, u, u_inv, pivots }
}

/// Hermite normal form basis of the row lattice spanned by `rows`.
pub fn hnf_rows<T: Int>(rows: &[Vec<T>]) -> Matrix<T> {
    let e = echelon(rows);
    e.h.into_iter().take(e.pivots.len()).collect()
}

/// Saturated basis (in Hermite normal form) of `{x ∈ Zⁿ : a·x = 0}`.
pub fn integer_kernel<T: Int>(a: &[Vec<T>], n: usize) -> Matrix<T> {
    if a.is_empty() {
        return identity(n);
    }
    let e = echelon(&transpose(a));
    let r = e.pivots.len();
    let ker: Matrix<T> = e.u[r..].to_vec();
    hnf_rows(&ker)
}

/// Writes `target` as an integer combination of the rows of an echelon basis.
/// Returns `None` when `target` is not in the row lattice.
pub fn echelon_coordinates<T: Int>(basis: &[Vec<T>], target: &[T]) -> Option<Vec<T>> {
    let mut rest = target.to_vec();
    let mut coords = Vec::with_capacity(basis.len());
    for row in basis {
        let piv = row.iter().position(|x| !x.is_zero())?;
        let (q, r) = rest[piv].div_rem(&row[piv]);
        if !r.is_zero() {
            return None;
        }
        for (x, b) in rest.iter_mut().zip(row) {
            *x = x.clone() - q.clone() * b.clone();
        }
        coords.push(q);
    }
    if rest.iter().all(|x| x.is_zero()) {
        Some(coords)
    } else {
        None
    }
}

/// Smith normal form `u·a·v = diag(d)` with `u`, `v` unimodular and `d`
/// non-negative with `d[i] | d[i+1]`.
#[derive(Debug, Clone)]
pub struct Smith<T> {
    pub diagonal: Vec<T>,
    pub u: Matrix<T>,
    pub v: Matrix<T>,
}

pub fn smith<T: Int>(a: &[Vec<T>]) -> Smith<T> {
    let m = a.len();
    let n = if m == 0 { 0 } else { a[0].len() };
    let mut s = a.to_vec();
    let mut u = identity::<T>(m);
    let mut v = identity::<T>(n);
    let steps = m.min(n);

    fn row_axpy<T: Int>(mat: &mut Matrix<T>, dst: usize, src: usize, q: &T) {
        let src_row = mat[src].clone();
        for (d, x) in mat[dst].iter_mut().zip(src_row) {
            *d = d.clone() - q.clone() * x;
        }
    }
    fn col_axpy<T: Int>(mat: &mut Matrix<T>, dst: usize, src: usize, q: &T) {
        for row in mat.iter_mut() {
            row[dst] = row[dst].clone() - q.clone() * row[src].clone();
        }
    }
    fn col_swap<T>(mat: &mut Matrix<T>, i: usize, j: usize) {
        for row in mat.iter_mut() {
            row.swap(i, j);
        }
    }

    for t in 0..steps {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    if s[i][j].is_zero() {
                        continue;
                    }
                    match best {
                        Some((bi, bj)) if s[bi][bj].abs() <= s[i][j].abs() => {}
                        _ => best = Some((i, j)),
                    }
                }
            }
            let Some((bi, bj)) = best else {
                return finish(s, u, v, steps);
            };
            s.swap(t, bi);
            u.swap(t, bi);
            col_swap(&mut s, t, bj);
            col_swap(&mut v, t, bj);

            let mut clean = true;
            for i in t + 1..m {
                if s[i][t].is_zero() {
                    continue;
                }
                let q = s[i][t].div_floor(&s[t][t]);
                row_axpy(&mut s, i, t, &q);
                row_axpy(&mut u, i, t, &q);
                clean &= s[i][t].is_zero();
            }
            for j in t + 1..n {
                if s[t][j].is_zero() {
                    continue;
                }
                let q = s[t][j].div_floor(&s[t][t]);
                col_axpy(&mut s, j, t, &q);
                col_axpy(&mut v, j, t, &q);
                clean &= s[t][j].is_zero();
            }
            if !clean {
                continue;
            }
            let offender = (t + 1..m).find(|&i| {
                (t + 1..n).any(|j| !s[i][j].is_multiple_of(&s[t][t]))
            });
            match offender {
                Some(i) => {
                    let minus_one = -T::one();
                    row_axpy(&mut s, t, i, &minus_one);
                    row_axpy(&mut u, t, i, &minus_one);
                }
                None => break,
            }
        }
        if s[t][t].is_negative() {
            for x in s[t].iter_mut().chain(u[t].iter_mut()) {
                *x = -x.clone();
            }
        }
    }
    finish(s, u, v, steps)
}

fn finish<T: Int>(s: Matrix<T>, u: Matrix<T>, v: Matrix<T>, steps: usize) -> Smith<T> {
    let diagonal = (0..steps).map(|i| s[i][i].clone()).collect();
    Smith { diagonal, u, v }
}

/// Inertia `(positive, negative, zero)` of a symmetric rational matrix,
/// by congruence diagonalization.
pub fn inertia<T: Int>(a: &[Vec<Ratio<T>>]) -> (usize, usize, usize) {
    let mut m: Matrix<Ratio<T>> = a.to_vec();
    let (mut pos, mut neg) = (0, 0);
    loop {
        let size = m.len();
        if size == 0 {
            return (pos, neg, 0);
        }
        if let Some(i) = (0..size).find(|&i| !m[i][i].is_zero()) {
            let p = m[i][i].clone();
            if p > Ratio::zero() {
                pos += 1;
            } else {
                neg += 1;
            }
            let keep: Vec<usize> = (0..size).filter(|&k| k != i).collect();
            let next: Matrix<Ratio<T>> = keep
                .iter()
                .map(|&j| {
                    keep.iter()
                        .map(|&k| m[j][k].clone() - m[j][i].clone() * m[i][k].clone() / p.clone())
                        .collect()
                })
                .collect();
            m = next;
            continue;
        }
        let off = (0..size).flat_map(|i| (0..size).map(move |j| (i, j))).find(|&(i, j)| !m[i][j].is_zero());
        match off {
            Some((i, j)) => {
                // e_i <- e_i + e_j makes the (i, i) entry 2·m[i][j] != 0
                for k in 0..size {
                    let v = m[i][k].clone() + m[j][k].clone();
                    m[i][k] = v;
                }
                for k in 0..size {
                    let v = m[k][i].clone() + m[k][j].clone();
                    m[k][i] = v;
                }
            }
            None => return (pos, neg, size),
        }
    }
}

pub fn to_rational<T: Int>(a: &[Vec<T>]) -> Matrix<Ratio<T>> {
    a.iter().map(|r| r.iter().cloned().map(rat).collect()).collect()
}

/// `Q(x) = Σ dᵢ (xᵢ + Σ_{j>i} μᵢⱼ xⱼ)²` for a positive-definite rational matrix.
#[derive(Debug, Clone)]
pub struct Ldl<T: Int> {
    pub d: Vec<Ratio<T>>,
    pub mu: Matrix<Ratio<T>>,
}

/// Returns `None` when the matrix is not positive definite.
pub fn ldl<T: Int>(a: &[Vec<Ratio<T>>]) -> Option<Ldl<T>> {
    let k = a.len();
    let mut m = a.to_vec();
    let mut d = Vec::with_capacity(k);
    let mut mu = vec![vec![Ratio::zero(); k]; k];
    for i in 0..k {
        let di = m[i][i].clone();
        if di <= Ratio::zero() {
            return None;
        }
        for j in i + 1..k {
            mu[i][j] = m[i][j].clone() / di.clone();
        }
        for j in i + 1..k {
            for l in i + 1..k {
                let v = m[j][l].clone() - di.clone() * mu[i][j].clone() * mu[i][l].clone();
                m[j][l] = v;
            }
        }
        d.push(di);
    }
    Some(Ldl { d, mu })
}

/// Integers `x` with `d·(x − z)² ≤ rem`, as an inclusive range.
fn integer_interval<T: Int>(d: &Ratio<T>, z: &Ratio<T>, rem: &Ratio<T>) -> Option<(T, T)> {
    if *rem < Ratio::zero() {
        return None;
    }
    let ok = |x: &T| {
        let t = rat(x.clone()) - z.clone();
        d.clone() * t.clone() * t <= *rem
    };
    let fl = z.floor().to_integer();
    let anchor = if ok(&fl) {
        fl
    } else if ok(&(fl.clone() + T::one())) {
        fl + T::one()
    } else {
        return None;
    };
    let radius = (ratio_to_f64(rem) / ratio_to_f64(d)).sqrt();
    let zf = ratio_to_f64(z);
    let guess = |v: f64| T::from_f64(v.floor()).unwrap_or_else(|| anchor.clone());

    let mut lo = guess(zf - radius).min(anchor.clone());
    while !ok(&lo) {
        lo = lo + T::one();
    }
    while ok(&(lo.clone() - T::one())) {
        lo = lo - T::one();
    }
    let mut hi = guess(zf + radius + 1.0).max(anchor);
    while !ok(&hi) {
        hi = hi - T::one();
    }
    while ok(&(hi.clone() + T::one())) {
        hi = hi + T::one();
    }
    Some((lo, hi))
}

/// All integer vectors `x` with `(x − center)ᵀ·a·(x − center) ≤ bound` for a
/// positive-definite rational `a`, in lexicographic order.
///
/// Returns `None` if `a` is not positive definite.
pub fn enumerate_ellipsoid<T: Int>(
    a: &[Vec<Ratio<T>>],
    center: &[Ratio<T>],
    bound: &Ratio<T>,
) -> Option<Vec<Vec<T>>> {
    let k = a.len();
    let ldl = ldl(a)?;
    let mut out = Vec::new();
    if *bound < Ratio::zero() {
        return Some(out);
    }
    let mut x = vec![T::zero(); k];
    descend(&ldl, center, k, Ratio::zero(), bound, &mut x, &mut out);
    out.sort();
    Some(out)
}

fn descend<T: Int>(
    ldl: &Ldl<T>,
    center: &[Ratio<T>],
    level: usize,
    used: Ratio<T>,
    bound: &Ratio<T>,
    x: &mut Vec<T>,
    out: &mut Vec<Vec<T>>,
) {
    if level == 0 {
        out.push(x.clone());
        return;
    }
    let i = level - 1;
    let shift = (i + 1..x.len()).fold(Ratio::zero(), |acc, j| {
        acc + ldl.mu[i][j].clone() * (rat(x[j].clone()) - center[j].clone())
    });
    let z = center[i].clone() - shift;
    let rem = bound.clone() - used.clone();
    let Some((lo, hi)) = integer_interval(&ldl.d[i], &z, &rem) else {
        return;
    };
    let mut xi = lo;
    while xi <= hi {
        let t = rat(xi.clone()) - z.clone();
        let term = ldl.d[i].clone() * t.clone() * t;
        x[i] = xi.clone();
        descend(ldl, center, i, used.clone() + term, bound, x, out);
        xi = xi + T::one();
    }
    x[i] = T::zero();
}

/// Gcd of all entries (non-negative).
pub fn content<T: Int>(v: &[T]) -> T {
    v.iter().fold(T::zero(), |g, x| g.gcd(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn small_identity_check(a: &[Vec<i64>]) -> bool {
        let n = a.len();
        (0..n).all(|i| (0..n).all(|j| a[i][j] == i64::from(i == j)))
    }

    fn m(rows: &[&[i64]]) -> Matrix<i64> {
        rows.iter().map(|r| r.to_vec()).collect()
    }

    #[test]
    fn determinant_small() {
        assert_eq!(determinant(&m(&[&[0, 1], &[1, 0]])), -1);
        assert_eq!(determinant(&m(&[&[0, 0, 12], &[0, -2, 0], &[12, 0, 0]])), 288);
        assert_eq!(determinant(&m(&[&[1, 2], &[2, 4]])), 0);
        assert_eq!(determinant::<i64>(&[]), 1);
    }

    #[test]
    fn echelon_transform_is_consistent() {
        let a = m(&[&[4, 6, 2], &[2, 3, 7], &[6, 9, 9]]);
        let e = echelon(&a);
        assert_eq!(mat_mul(&e.u, &a), e.h);
        assert!(small_identity_check(&mat_mul(&e.u, &e.u_inv)));
        assert_eq!(e.pivots.len(), 2);
    }

    #[test]
    fn kernel_is_saturated() {
        // 2x + 4y + 6z = 0 has kernel of index 1 in Z³ ∩ plane
        let k = integer_kernel(&m(&[&[2, 4, 6]]), 3);
        assert_eq!(k.len(), 2);
        for row in &k {
            assert_eq!(2 * row[0] + 4 * row[1] + 6 * row[2], 0);
        }
        // (−2, 1, 0) must be an integer combination
        assert!(echelon_coordinates(&k, &[-2, 1, 0]).is_some());
        assert!(echelon_coordinates(&k, &[-3, 0, 1]).is_some());
    }

    #[test]
    fn smith_of_scaled_hyperbolic_plane() {
        let a = m(&[&[0, 2], &[2, 0]]);
        let s = smith(&a);
        assert_eq!(s.diagonal, vec![2, 2]);
        let d = mat_mul(&mat_mul(&s.u, &a), &s.v);
        assert_eq!(d, m(&[&[2, 0], &[0, 2]]));
    }

    #[test]
    fn smith_divisibility_chain() {
        let a = m(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
        let s = smith(&a);
        assert_eq!(s.diagonal, vec![2, 6, 12]);
        let d = mat_mul(&mat_mul(&s.u, &a), &s.v);
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(d[i][j], if i == j { s.diagonal[i] } else { 0 });
            }
        }
    }

    #[test]
    fn inertia_without_diagonal_pivot() {
        let u = to_rational(&m(&[&[0, 1], &[1, 0]]));
        assert_eq!(inertia(&u), (1, 1, 0));
        let z = to_rational(&m(&[&[0, 0], &[0, 0]]));
        assert_eq!(inertia(&z), (0, 0, 2));
        let mixed = to_rational(&m(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 0]]));
        assert_eq!(inertia(&mixed), (1, 1, 1));
    }

    #[test]
    fn ellipsoid_matches_box_scan() {
        let a = to_rational(&m(&[&[2, 1], &[1, 3]]));
        let center = vec![Ratio::new(1i64, 3), Ratio::new(-1, 2)];
        let bound = Ratio::from_integer(7);
        let got = enumerate_ellipsoid(&a, &center, &bound).unwrap();
        let mut expect = Vec::new();
        for x in -10..=10i64 {
            for y in -10..=10i64 {
                let dx = Ratio::from_integer(x) - center[0];
                let dy = Ratio::from_integer(y) - center[1];
                let q = a[0][0] * dx * dx + Ratio::from_integer(2) * a[0][1] * dx * dy + a[1][1] * dy * dy;
                if q <= bound {
                    expect.push(vec![x, y]);
                }
            }
        }
        assert_eq!(got, expect);
    }

    #[test]
    fn bigint_determinant() {
        let a: Matrix<BigInt> = m(&[&[0, 12], &[12, 0]])
            .into_iter()
            .map(|r| r.into_iter().map(BigInt::from).collect())
            .collect();
        assert_eq!(determinant(&a), BigInt::from(-144));
    }
}
