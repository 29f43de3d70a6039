//! The truncated Hilbert–Schmidt algebra extended by the unit.
//!
//! An element is `t·𝟙 + A` with `A` a d×d complex matrix. The unit is an extra
//! orthonormal coordinate 𝔢₀, and the diagonal matrix units are 𝔢₁, …, 𝔢_d.

use nalgebra::DMatrix;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::C64;

#[derive(Clone, Debug, PartialEq)]
pub struct HsElement {
    pub unit: C64,
    pub matrix: DMatrix<C64>,
}

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

impl HsElement {
    pub fn new(unit: C64, matrix: DMatrix<C64>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() || matrix.nrows() == 0 {
            return Err(Error::Dimension(format!(
                "matrix part must be square with d ≥ 1, got {}×{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        Ok(Self { unit, matrix })
    }

    pub fn zero(d: usize) -> Self {
        Self { unit: ZERO, matrix: DMatrix::zeros(d, d) }
    }

    /// The unit 𝟙 = 𝔢₀.
    pub fn one(d: usize) -> Self {
        Self { unit: ONE, matrix: DMatrix::zeros(d, d) }
    }

    /// 𝔢_k, with 𝔢₀ the unit.
    pub fn basis(d: usize, k: usize) -> Self {
        let mut e = Self::zero(d);
        e.set_coord(k, ONE);
        e
    }

    /// Builds `coords[0]·𝟙 + diag(coords[1..])`; `d = coords.len() − 1`.
    pub fn diagonal(coords: &[C64]) -> Self {
        let d = coords.len() - 1;
        let mut m = DMatrix::zeros(d, d);
        for k in 0..d {
            m[(k, k)] = coords[k + 1];
        }
        Self { unit: coords[0], matrix: m }
    }

    pub fn d(&self) -> usize {
        self.matrix.nrows()
    }

    fn set_coord(&mut self, k: usize, v: C64) {
        if k == 0 {
            self.unit = v;
        } else {
            self.matrix[(k - 1, k - 1)] = v;
        }
    }

    pub fn is_diagonal(&self) -> bool {
        let d = self.d();
        (0..d).all(|i| (0..d).all(|j| i == j || self.matrix[(i, j)] == ZERO))
    }

    /// (χ₀, χ₁, …, χ_d); errors if the matrix part has off-diagonal entries.
    pub fn coords(&self) -> Result<Vec<C64>> {
        if !self.is_diagonal() {
            return Err(Error::NonDiagonal);
        }
        Ok((0..=self.d()).map(|k| self.coord(k)).collect())
    }

    fn coord(&self, k: usize) -> C64 {
        if k == 0 {
            self.unit
        } else {
            self.matrix[(k - 1, k - 1)]
        }
    }

    pub fn adjoint(&self) -> Self {
        Self { unit: self.unit.conj(), matrix: self.matrix.adjoint() }
    }

    /// Entries (i, j) and (j, i) are summed as a pair, so ‖a*‖ = ‖a‖ holds bitwise.
    pub fn norm_sqr(&self) -> f64 {
        let m = &self.matrix;
        let mut acc = self.unit.norm_sqr();
        for i in 0..m.nrows() {
            acc += m[(i, i)].norm_sqr();
            for j in 0..i {
                acc += m[(i, j)].norm_sqr() + m[(j, i)].norm_sqr();
            }
        }
        acc
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// w*·A·w on the matrix part; the unit coefficient is fixed.
    pub fn conjugate_by(&self, w: &DMatrix<C64>) -> Result<Self> {
        if w.nrows() != self.d() || w.ncols() != self.d() {
            return Err(Error::Dimension("conjugating matrix size differs from d".into()));
        }
        Ok(Self { unit: self.unit, matrix: w.adjoint() * &self.matrix * w })
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.d() != other.d() {
            return Err(Error::Dimension(format!("d = {} vs d = {}", self.d(), other.d())));
        }
        Ok(())
    }
}

impl Add for &HsElement {
    type Output = HsElement;
    fn add(self, o: &HsElement) -> HsElement {
        HsElement { unit: self.unit + o.unit, matrix: &self.matrix + &o.matrix }
    }
}

impl Sub for &HsElement {
    type Output = HsElement;
    fn sub(self, o: &HsElement) -> HsElement {
        HsElement { unit: self.unit - o.unit, matrix: &self.matrix - &o.matrix }
    }
}

impl Neg for &HsElement {
    type Output = HsElement;
    fn neg(self) -> HsElement {
        HsElement { unit: -self.unit, matrix: -&self.matrix }
    }
}

impl Mul<C64> for &HsElement {
    type Output = HsElement;
    fn mul(self, s: C64) -> HsElement {
        HsElement { unit: self.unit * s, matrix: &self.matrix * s }
    }
}

impl Mul<f64> for &HsElement {
    type Output = HsElement;
    fn mul(self, s: f64) -> HsElement {
        self * C64::new(s, 0.0)
    }
}

/// ⟨a|b⟩ = tr(B*A) + t_a·conj(t_b).
pub fn hs_inner(a: &HsElement, b: &HsElement) -> Result<C64> {
    a.check_dim(b)?;
    let tr: C64 = a.matrix.iter().zip(b.matrix.iter()).map(|(x, y)| x * y.conj()).sum();
    Ok(tr + a.unit * b.unit.conj())
}

/// χ_k(a): the unit coefficient for k = 0, A_kk for 1 ≤ k ≤ d.
pub fn diag_coeff(a: &HsElement, k: usize) -> Result<C64> {
    if k > a.d() {
        return Err(Error::IndexOutOfRange { index: k, max: a.d() });
    }
    Ok(a.coord(k))
}

/// Weight of matrix entry (i, j) (one-based) in the E⁻ pairing: 2^{−(i+j)/2}.
pub fn entry_weight(i: usize, j: usize) -> f64 {
    (-((i + j) as f64) / 2.0).exp2()
}

/// ⟨a|b⟩⁻ with entry weights 2^{−(i+j)/2} and unit weight 1.
pub fn weighted_inner(a: &HsElement, b: &HsElement) -> Result<C64> {
    a.check_dim(b)?;
    let d = a.d();
    let mut acc = a.unit * b.unit.conj();
    for i in 0..d {
        for j in 0..d {
            acc += a.matrix[(i, j)] * b.matrix[(i, j)].conj() * entry_weight(i + 1, j + 1);
        }
    }
    Ok(acc)
}

/// Σ_{m=0..d} (‖𝔢_m‖⁻)² = 2(1 − 2^{−(d+1)}), tending to 2.
pub fn weighted_basis_mass(d: usize) -> f64 {
    (0..=d).map(|m| entry_weight(m, m)).sum()
}

/// p = a + b𝕛.
#[derive(Clone, Debug, PartialEq)]
pub struct QuaternionPair {
    pub a: HsElement,
    pub b: HsElement,
}

impl QuaternionPair {
    pub fn new(a: HsElement, b: HsElement) -> Result<Self> {
        a.check_dim(&b)?;
        Ok(Self { a, b })
    }

    pub fn zero(d: usize) -> Self {
        Self { a: HsElement::zero(d), b: HsElement::zero(d) }
    }

    pub fn d(&self) -> usize {
        self.a.d()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { a: &self.a * s, b: &self.b * s }
    }
}

impl Add for &QuaternionPair {
    type Output = QuaternionPair;
    fn add(self, o: &QuaternionPair) -> QuaternionPair {
        QuaternionPair { a: &self.a + &o.a, b: &self.b + &o.b }
    }
}

/// ℑ⟨p|p′⟩ = ⟨a′|b⟩ − ⟨a|b′⟩.
pub fn im_pairing(p: &QuaternionPair, q: &QuaternionPair) -> Result<C64> {
    Ok(hs_inner(&q.a, &p.b)? - hs_inner(&p.a, &q.b)?)
}

#[derive(Serialize, Deserialize)]
struct HsJson {
    unit: [f64; 2],
    matrix: Vec<[f64; 2]>,
    d: usize,
}

impl Serialize for HsElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let d = self.d();
        let mut matrix = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                let z = self.matrix[(i, j)];
                matrix.push([z.re, z.im]);
            }
        }
        HsJson { unit: [self.unit.re, self.unit.im], matrix, d }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for HsElement {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let j = HsJson::deserialize(de)?;
        if j.d == 0 || j.matrix.len() != j.d * j.d {
            return Err(serde::de::Error::custom("matrix length must equal d² with d ≥ 1"));
        }
        let m = DMatrix::from_row_iterator(j.d, j.d, j.matrix.iter().map(|z| C64::new(z[0], z[1])));
        Ok(HsElement { unit: C64::new(j.unit[0], j.unit[1]), matrix: m })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inner_examples() {
        let e1 = HsElement::basis(2, 1);
        assert_eq!(hs_inner(&e1, &e1).unwrap(), ONE);
        assert_eq!(hs_inner(&HsElement::one(2), &e1).unwrap(), ZERO);
        let a = HsElement::diagonal(&[ZERO, ONE, C64::i()]);
        assert_eq!(hs_inner(&a, &a).unwrap(), C64::new(2.0, 0.0));
        assert!(hs_inner(&a, &HsElement::zero(3)).is_err());
    }

    #[test]
    fn diag_coeff_examples() {
        assert_eq!(diag_coeff(&HsElement::basis(3, 2), 2).unwrap(), ONE);
        assert_eq!(diag_coeff(&HsElement::one(3), 0).unwrap(), ONE);
        let mut a = HsElement::zero(2);
        a.matrix[(0, 0)] = C64::new(3.0, 1.0);
        assert_eq!(diag_coeff(&a, 1).unwrap(), C64::new(3.0, 1.0));
        assert!(diag_coeff(&a, 3).is_err());
    }

    #[test]
    fn weighted_examples() {
        let e1 = HsElement::basis(3, 1);
        assert_eq!(weighted_inner(&e1, &e1).unwrap(), C64::new(0.5, 0.0));
        assert_eq!(weighted_inner(&HsElement::one(3), &e1).unwrap(), ZERO);
        for d in 1..10 {
            let direct: f64 = (0..=d)
                .map(|m| {
                    let e = HsElement::basis(d, m);
                    weighted_inner(&e, &e).unwrap().re
                })
                .sum();
            assert!((direct - 2.0 * (1.0 - (-(d as f64 + 1.0)).exp2())).abs() < 1e-15);
            assert!((weighted_basis_mass(d) - direct).abs() < 1e-15);
        }
    }

    #[test]
    fn im_pairing_examples() {
        let d = 2;
        let (z, e1, e2) = (HsElement::zero(d), HsElement::basis(d, 1), HsElement::basis(d, 2));
        let p = QuaternionPair::new(e1.clone(), z.clone()).unwrap();
        let q = QuaternionPair::new(z, e1.clone()).unwrap();
        assert_eq!(im_pairing(&p, &q).unwrap(), -ONE);
        assert_eq!(im_pairing(&p, &p).unwrap(), ZERO);
        let p = QuaternionPair::new(e1.clone(), e2.clone()).unwrap();
        let q = QuaternionPair::new(e2, e1).unwrap();
        assert_eq!(im_pairing(&p, &q).unwrap(), ZERO);
    }

    #[test]
    fn json_round_trip() {
        let mut a = HsElement::diagonal(&[C64::new(1.0, -2.0), ONE, C64::i()]);
        a.matrix[(0, 1)] = C64::new(0.25, 0.5);
        let s = serde_json::to_string(&a).unwrap();
        assert!(s.contains("\"d\":2"));
        let back: HsElement = serde_json::from_str(&s).unwrap();
        assert_eq!(back, a);
        assert!(serde_json::from_str::<HsElement>(r#"{"unit":[0,0],"matrix":[[1,0]],"d":2}"#).is_err());
    }

    #[test]
    fn coords_require_diagonal() {
        let mut a = HsElement::basis(2, 1);
        assert_eq!(a.coords().unwrap(), vec![ZERO, ONE, ZERO]);
        a.matrix[(1, 0)] = ONE;
        assert_eq!(a.coords(), Err(Error::NonDiagonal));
    }
}
