//! Mirror quotients `S = c⊥/Zc` of signature-`(2, n)` lattices at a cusp
//! `c`, the catalog of known families, and the period normalization `ω₀`.

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::Zero;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::dsl;
use crate::error::{Error, Result};
use crate::lattice::{find_basis_change, int_to_json, invariants_match, Lattice, LatticeVector};
use crate::linalg::Matrix;
use crate::scalar::{int, rat, Int};

/// Entry bound for the explicit isometry search.
pub const BASIS_CHANGE_BOUND: u32 = 3;

const CATALOG: &str = include_str!("../assets/mirror_families.json");

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MirrorPair<T: Int = BigInt> {
    pub t: Lattice<T>,
    pub c: LatticeVector<T>,
    pub s: Lattice<T>,
    pub expected: Option<Lattice<T>>,
    /// Columns express a basis of `expected` in the basis of `s`.
    pub basis_change: Option<Matrix<T>>,
    /// `false` when no expected lattice was supplied.
    pub verified: bool,
}

impl<T: Int> MirrorPair<T> {
    pub fn to_json(&self) -> Value {
        let matrix = |m: &Matrix<T>| -> Value {
            Value::Array(m.iter().map(|r| Value::Array(r.iter().map(int_to_json).collect())).collect())
        };
        json!({
            "t": self.t.to_json(),
            "c": self.c.to_json(),
            "s": self.s.to_json(),
            "s_signature": self.s.signature().to_string(),
            "s_determinant": int_to_json(&self.s.determinant()),
            "expected": self.expected.as_ref().map(|e| e.to_json()),
            "basis_change": self.basis_change.as_ref().map(matrix),
            "verified": self.verified,
        })
    }
}

pub fn mirror_quotient<T: Int>(
    t: &Lattice<T>,
    c: &LatticeVector<T>,
    expected: Option<&Lattice<T>>,
) -> Result<MirrorPair<T>> {
    let n = t.rank();
    let sig = t.signature();
    if n < 2 || sig.n_plus != 2 || sig.n_minus != n - 2 {
        return Err(Error::WrongSignature { expected: format!("(2,{})", n.saturating_sub(2)), actual: sig.to_string() });
    }
    let norm = t.norm(c)?;
    if !norm.is_zero() {
        return Err(Error::NotIsotropic(norm.to_string()));
    }
    if !t.is_primitive(c)? {
        return Err(Error::NotPrimitive);
    }
    let s = t.isotropic_quotient(c)?;
    let basis_change = expected
        .filter(|e| invariants_match(&s, e))
        .and_then(|e| find_basis_change(&s, e, BASIS_CHANGE_BOUND));
    Ok(MirrorPair {
        t: t.clone(),
        c: c.clone(),
        verified: basis_change.is_some(),
        s,
        expected: expected.cloned(),
        basis_change,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
pub struct FamilyEntry {
    pub id: String,
    /// Lattice expression for `T`.
    pub lattice: String,
    pub cusp: Vec<i64>,
    /// Lattice expression for the expected `S`.
    pub expected: String,
}

#[derive(Deserialize)]
struct Catalog {
    version: u32,
    families: Vec<FamilyEntry>,
}

/// Parse a catalog document `{"version": 1, "families": [...]}`.
pub fn load_catalog(text: &str) -> Result<Vec<FamilyEntry>> {
    let cat: Catalog = serde_json::from_str(text).map_err(|e| Error::Json(e.to_string()))?;
    if cat.version != 1 {
        return Err(Error::Json(format!("unsupported catalog version {}", cat.version)));
    }
    Ok(cat.families)
}

/// The built-in catalog: `2U ⊕ ⟨−2t⟩` for `t = 1..4`, `2U(k) ⊕ ⟨−2⟩` for
/// `k ∈ {1..8, 10, 12, 16}`, and `U(2) ⊕ U ⊕ E8(−2)`.
pub fn family_catalog() -> Vec<FamilyEntry> {
    load_catalog(CATALOG).expect("built-in catalog is valid")
}

pub fn check_family<T: Int>(entry: &FamilyEntry) -> Result<MirrorPair<T>> {
    let t = dsl::parse_lattice::<T>(&entry.lattice)?;
    let expected = dsl::parse_lattice::<T>(&entry.expected)?;
    let c = LatticeVector(entry.cusp.iter().map(|&x| int(x)).collect());
    mirror_quotient(&t, &c, Some(&expected))
}

/// Verified flag of every built-in catalog entry, in catalog order.
pub fn verify_family() -> Vec<bool> {
    family_catalog().iter().map(|e| check_family::<BigInt>(e).map(|p| p.verified).unwrap_or(false)).collect()
}

/// `ω₀ = (−z²/2)c + (1/k)e + z` in `U(k) ⊕ S`, with `c·e = k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodVector<T: Int = BigInt> {
    pub k: T,
    pub z: Vec<Ratio<T>>,
    /// Coordinates over `(c, e, s₁, …)`.
    pub components: Vec<Ratio<T>>,
    pub norm: Ratio<T>,
    pub pairing_with_c: Ratio<T>,
}

impl<T: Int> PeriodVector<T> {
    /// `ω₀² = 0` and `ω₀·c = 1`.
    pub fn is_normalized(&self) -> bool {
        self.norm.is_zero() && self.pairing_with_c == rat(T::one())
    }
}

pub fn period_vector<T: Int>(s: &Lattice<T>, z: &[Ratio<T>], k: &T) -> Result<PeriodVector<T>> {
    if !k.is_positive() {
        return Err(Error::NonPositiveModulus);
    }
    if z.len() != s.rank() {
        return Err(Error::DimensionMismatch { expected: s.rank(), actual: z.len() });
    }
    let t = Lattice::hyperbolic_plane().rescale(k)?.direct_sum(s);
    let g = t.gram();
    let z2 = quadratic(s.gram(), z);
    let mut components = vec![-z2 / rat(int::<T>(2)), Ratio::new(T::one(), k.clone())];
    components.extend(z.iter().cloned());
    let norm = quadratic(g, &components);
    let mut c = vec![Ratio::zero(); t.rank()];
    c[0] = rat(T::one());
    let pairing_with_c = bilinear(g, &components, &c);
    Ok(PeriodVector { k: k.clone(), z: z.to_vec(), components, norm, pairing_with_c })
}

fn bilinear<T: Int>(g: &Matrix<T>, u: &[Ratio<T>], v: &[Ratio<T>]) -> Ratio<T> {
    let mut acc = Ratio::zero();
    for (i, ui) in u.iter().enumerate() {
        if ui.is_zero() {
            continue;
        }
        for (j, vj) in v.iter().enumerate() {
            acc = acc + ui.clone() * vj.clone() * rat(g[i][j].clone());
        }
    }
    acc
}

fn quadratic<T: Int>(g: &Matrix<T>, v: &[Ratio<T>]) -> Ratio<T> {
    bilinear(g, v, v)
}
