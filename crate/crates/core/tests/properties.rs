use arithmirror::borcherds::{self, series_multiply, series_pow_factor, QrsSeries};
use arithmirror::jacobi;
use arithmirror::lattice::{Lattice, LatticeVector};
use arithmirror::linalg::{self, Matrix};
use arithmirror::mirror::mirror_quotient;
use arithmirror::reflect::{self, VinbergBudget};
use arithmirror::{dsl, invariants_match, BigInt};
use proptest::prelude::*;

type L = Lattice<i64>;
type V = LatticeVector<i64>;

/// Product of elementary matrices with small entries; determinant ±1.
fn unimodular(n: usize) -> impl Strategy<Value = Matrix<i64>> {
    prop::collection::vec((0..n, 0..n, -2..=2i64, any::<bool>()), 0..6).prop_map(move |ops| {
        let mut m = linalg::identity::<i64>(n);
        for (i, j, k, swap) in ops {
            if i == j {
                if swap {
                    for row in m.iter_mut() {
                        row[i] = -row[i];
                    }
                }
                continue;
            }
            for row in m.iter_mut() {
                if swap {
                    row.swap(i, j);
                } else {
                    row[i] += k * row[j];
                }
            }
        }
        m
    })
}

fn small_hyperbolic_rank3() -> impl Strategy<Value = L> {
    prop_oneof![
        Just("U+<-2>"),
        Just("U+<-4>"),
        Just("U(2)+<-2>"),
        Just("U(12)+<-6>"),
        Just("U(3)+<-2>"),
    ]
    .prop_map(|s| dsl::parse_lattice::<i64>(s).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reflection_is_an_isometric_involution(x in -20..=20i64, y in -20..=20i64, z in -20..=20i64) {
        let l = dsl::parse_lattice::<i64>("U+<-2>").unwrap();
        let v = V::from_i64s(&[x, y, z]);
        for delta in l.vectors_of_norm(&-2, 2) {
            let w = reflect::reflect(&l, &delta, &v).unwrap();
            prop_assert_eq!(l.norm(&w).unwrap(), l.norm(&v).unwrap());
            prop_assert_eq!(reflect::reflect(&l, &delta, &w).unwrap(), v.clone());
        }
    }

    #[test]
    fn classify_is_basis_independent(l in small_hyperbolic_rank3(), p in unimodular(3)) {
        let budget = VinbergBudget { max_height: 12, max_roots: 32 };
        let a = reflect::classify(&l, budget).unwrap();
        let b = reflect::classify(&l.change_basis(&p), budget).unwrap();
        prop_assert_eq!(a.kind, b.kind);
    }

    #[test]
    fn rank2_classification_is_basis_independent(p in unimodular(2), pick in 0..4usize) {
        let texts = ["U", "<2>+<-4>", "<2>+<-6>", "U(2)"];
        let l = dsl::parse_lattice::<i64>(texts[pick]).unwrap();
        let m = l.change_basis(&p);
        let a = reflect::classify(&l, VinbergBudget::default()).unwrap();
        let b = reflect::classify(&m, VinbergBudget::default()).unwrap();
        prop_assert_eq!(a.kind, b.kind);
        prop_assert_eq!(a.root_count, b.root_count);
        if let Some(w) = &b.witness {
            prop_assert_eq!(Some(m.norm(w).unwrap()), b.witness_norm);
        }
    }

    #[test]
    fn vinberg_roots_are_acute(l in small_hyperbolic_rank3(), h in 0..8u64) {
        let v0 = reflect::default_control_vector(&l).unwrap();
        let rep = reflect::vinberg_enumerate(&l, &v0, h).unwrap();
        for (i, r) in rep.roots.iter().enumerate() {
            prop_assert_eq!(l.norm(&r.vector).unwrap(), -2);
            prop_assert!(l.inner_product(&r.vector, &v0).unwrap() >= 0);
            for j in 0..i {
                prop_assert!(rep.root_gram[i][j] >= 0);
            }
        }
        prop_assert_eq!(rep.clone(), reflect::vinberg_enumerate(&l, &v0, h).unwrap());
    }

    #[test]
    fn quotient_is_independent_of_cusp_sign_and_basis(k in 1..=6i64, p in unimodular(5)) {
        let t = dsl::parse_lattice::<i64>(&format!("2U({k})+<-2>")).unwrap();
        let c = V::from_i64s(&[1, 0, 0, 0, 0]);
        let s = mirror_quotient(&t, &c, None).unwrap().s;
        let s_neg = mirror_quotient(&t, &c.neg(), None).unwrap().s;
        prop_assert!(invariants_match(&s, &s_neg));
        // the same cusp written in another basis of T
        let t2 = t.change_basis(&p);
        let c2 = V::new(linalg::mat_vec(&unimodular_inverse(&p), &c.0));
        prop_assert_eq!(t2.norm(&c2).unwrap(), 0);
        let s2 = mirror_quotient(&t2, &c2, None).unwrap().s;
        prop_assert!(invariants_match(&s, &s2));
        prop_assert_eq!(s2.determinant() * k * k, -t.determinant());
    }

    #[test]
    fn signature_is_additive(a in 0..3usize, b in 0..3usize) {
        let parts = ["U", "<-2>", "E8(-1)"];
        let x = dsl::parse_lattice::<i64>(parts[a]).unwrap();
        let y = dsl::parse_lattice::<i64>(parts[b]).unwrap();
        let s = x.direct_sum(&y).signature();
        prop_assert_eq!(s.n_plus, x.signature().n_plus + y.signature().n_plus);
        prop_assert_eq!(s.n_minus, x.signature().n_minus + y.signature().n_minus);
    }

    #[test]
    fn rescaling_scales_the_determinant(t in prop_oneof![-5..=-1i64, 1..=5i64], pick in 0..3usize) {
        let l = dsl::parse_lattice::<i64>(["U+<-2>", "E8", "2U+<-6>"][pick]).unwrap();
        let n = l.rank() as u32;
        prop_assert_eq!(l.rescale(&t).unwrap().determinant(), t.pow(n) * l.determinant());
    }

    #[test]
    fn qrs_multiplication_is_associative(
        a in prop::collection::vec(((0..3i64), (-3..=3i64), (0..3i64), (-4..=4i64)), 0..6),
        b in prop::collection::vec(((0..3i64), (-3..=3i64), (0..3i64), (-4..=4i64)), 0..6),
        c in prop::collection::vec(((0..3i64), (-3..=3i64), (0..3i64), (-4..=4i64)), 0..6),
    ) {
        let build = |terms: &[(i64, i64, i64, i64)]| {
            let mut s = QrsSeries::<i64>::zero(4);
            for &(n, l, m, v) in terms {
                s.add_term((n, l, m), v);
            }
            s
        };
        let (a, b, c) = (build(&a), build(&b), build(&c));
        prop_assert_eq!(
            series_multiply(&series_multiply(&a, &b), &c),
            series_multiply(&a, &series_multiply(&b, &c))
        );
        // naive convolution oracle
        let mut expect = std::collections::BTreeMap::new();
        for (ka, va) in a.iter() {
            for (kb, vb) in b.iter() {
                let key = (ka.0 + kb.0, ka.1 + kb.1, ka.2 + kb.2);
                if key.0 + key.2 <= 4 {
                    *expect.entry(key).or_insert(0) += va * vb;
                }
            }
        }
        expect.retain(|_, v| *v != 0);
        let got: std::collections::BTreeMap<_, _> = series_multiply(&a, &b).iter().map(|(k, v)| (*k, *v)).collect();
        prop_assert_eq!(got, expect);
    }

    #[test]
    fn pow_factor_inverts(e in 1..5i64, n in 0..3i64, l in -2..=2i64, m in 1..3i64) {
        let base = (6 * n, 2 * l, 6 * m);
        let up = series_pow_factor::<i64>(base, e, 40).unwrap();
        let down = series_pow_factor::<i64>(base, -e, 40).unwrap();
        prop_assert_eq!(series_multiply(&up, &down), QrsSeries::one(40));
    }
}

/// Adjugate divided by the determinant `±1`.
fn unimodular_inverse(p: &Matrix<i64>) -> Matrix<i64> {
    let n = p.len();
    let det = linalg::determinant(p);
    assert!(det.abs() == 1);
    let minor = |r: usize, c: usize| -> Matrix<i64> {
        (0..n).filter(|&i| i != r).map(|i| (0..n).filter(|&j| j != c).map(|j| p[i][j]).collect()).collect()
    };
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
                    sign * linalg::determinant(&minor(j, i)) * det
                })
                .collect()
        })
        .collect()
}

#[test]
fn phi03_is_even_and_index_three_invariant() {
    let phi = jacobi::product_phi03::<BigInt>(12);
    let mut by_class = std::collections::BTreeMap::new();
    for (n, l, c) in phi.rows() {
        assert_eq!(phi.coeff(n, -l), c, "evenness at ({n},{l})");
        let key = (12 * n - l * l, l.rem_euclid(6));
        if let Some(prev) = by_class.insert(key, c.clone()) {
            assert_eq!(prev, c, "class {key:?}");
        }
    }
    // the invariance predicts every coefficient of a class seen at lower order
    for n in 0..=12i64 {
        for l in -20..=20i64 {
            let key = (12 * n - l * l, l.rem_euclid(6));
            if let Some(c) = by_class.get(&key) {
                assert_eq!(&phi.coeff(n, l), c, "({n},{l})");
            }
        }
    }
}

#[test]
fn f3_vanishes_for_strongly_negative_discriminant() {
    let phi = jacobi::product_phi03::<i64>(8);
    for (n, l, _) in phi.rows() {
        assert!(12 * n - l * l >= -9, "weak form bound violated at ({n},{l})");
    }
}

#[test]
fn identity_holds_at_every_low_weight() {
    for w in 2..=20 {
        assert!(borcherds::verify_identity::<i64>(w).unwrap().is_equal(), "weight {w}");
    }
}
