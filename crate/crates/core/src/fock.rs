//! Truncated symmetric Fock space over the unit-extended Hilbert–Schmidt algebra.
//!
//! Basis vectors are monomials 𝔢₀^{m₀}⊙…⊙𝔢_d^{m_d} keyed by [`FockIndex`]. The
//! inner product is diagonal in this basis with weight w(λ) fixed by
//! [`FockMetric`]. Creation is monomial multiplication and annihilation is its
//! adjoint for the chosen weights.

use num_bigint::BigUint;
use num_rational::Ratio;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::cmp::Ordering;
use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::hs_algebra::HsElement;
use crate::partitions::{factorial, Alphabet, Partition};
use crate::C64;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

pub fn factorial_f64(n: u32) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

/// Exponent multi-index over letters 0..=d; trailing zeros are trimmed so the
/// representation is canonical.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct FockIndex {
    exps: Vec<u32>,
}

impl FockIndex {
    pub fn vacuum() -> Self {
        Self::default()
    }

    pub fn from_exponents(exps: &[u32]) -> Self {
        let mut exps = exps.to_vec();
        while exps.last() == Some(&0) {
            exps.pop();
        }
        Self { exps }
    }

    pub fn letter(k: usize) -> Self {
        Self::vacuum().raise(k)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub fn mult(&self, k: usize) -> u32 {
        self.exps.get(k).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().sum()
    }

    /// Highest letter with nonzero multiplicity, if any.
    pub fn max_letter(&self) -> Option<usize> {
        self.exps.len().checked_sub(1)
    }

    pub fn raise(&self, k: usize) -> Self {
        let mut exps = self.exps.clone();
        if exps.len() <= k {
            exps.resize(k + 1, 0);
        }
        exps[k] += 1;
        Self { exps }
    }

    pub fn lower(&self, k: usize) -> Option<Self> {
        if self.mult(k) == 0 {
            return None;
        }
        let mut exps = self.exps.clone();
        exps[k] -= 1;
        Some(Self::from_exponents(&exps))
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.exps.len().max(other.exps.len());
        let e: Vec<u32> = (0..n).map(|k| self.mult(k) + other.mult(k)).collect();
        Self::from_exponents(&e)
    }

    /// λ as the sorted multiplicities.
    pub fn partition(&self) -> Partition {
        let m: Vec<usize> = self.exps.iter().map(|&e| e as usize).collect();
        Partition::from_multiplicities(&m)
    }

    /// ı as the sorted letters carrying nonzero multiplicity.
    pub fn alphabet(&self) -> Alphabet {
        let letters = self.exps.iter().enumerate().filter(|(_, &e)| e > 0).map(|(k, _)| k).collect();
        Alphabet::new(letters).expect("letters are increasing")
    }

    /// λ! = ∏ m_k!.
    pub fn factorial(&self) -> f64 {
        self.exps.iter().map(|&e| factorial_f64(e)).product()
    }

    pub fn factorial_exact(&self) -> BigUint {
        self.exps.iter().map(|&e| factorial(e as usize)).product()
    }

    /// χ^λ(c) = ∏ c_k^{m_k}.
    pub fn monomial(&self, c: &[C64]) -> C64 {
        self.exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(k, &e)| c.get(k).copied().unwrap_or(ZERO).powu(e))
            .product()
    }
}

impl Ord for FockIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| other.exps.cmp(&self.exps))
    }
}

impl PartialOrd for FockIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Serialize for FockIndex {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let m: BTreeMap<usize, u32> =
            self.exps.iter().enumerate().filter(|(_, &e)| e > 0).map(|(k, &e)| (k, e)).collect();
        m.serialize(s)
    }
}

impl<'de> Deserialize<'de> for FockIndex {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let m = BTreeMap::<usize, u32>::deserialize(de)?;
        let len = m.keys().next_back().map_or(0, |k| k + 1);
        let mut exps = vec![0; len];
        for (k, e) in m {
            exps[k] = e;
        }
        Ok(Self::from_exponents(&exps))
    }
}

/// All indices over `letters` letters with degree ≤ `max_degree`, in index order.
pub fn all_indices(letters: usize, max_degree: u32) -> Vec<FockIndex> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; letters];
    fn rec(k: usize, rem: u32, cur: &mut Vec<u32>, out: &mut Vec<FockIndex>) {
        if k == cur.len() {
            out.push(FockIndex::from_exponents(cur));
            return;
        }
        for e in 0..=rem {
            cur[k] = e;
            rec(k + 1, rem - e, cur, out);
        }
        cur[k] = 0;
    }
    if letters == 0 {
        return vec![FockIndex::vacuum()];
    }
    rec(0, max_degree, &mut cur, &mut out);
    out.sort();
    out
}

/// Basis weights ⟨e^λ|e^λ⟩.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FockMetric {
    /// (λ!/n!)², the weights of the nonstandard tensor norm.
    #[default]
    Weighted,
    /// λ!, the Segal–Bargmann weights.
    Bargmann,
}

impl FockMetric {
    pub fn weight(self, idx: &FockIndex) -> f64 {
        match self {
            FockMetric::Weighted => {
                let r = idx.factorial() / factorial_f64(idx.degree());
                r * r
            }
            FockMetric::Bargmann => idx.factorial(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            FockMetric::Weighted => "weighted",
            FockMetric::Bargmann => "bargmann",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FockVector {
    d: usize,
    degree_cut: u32,
    metric: FockMetric,
    coeffs: BTreeMap<FockIndex, C64>,
}

impl FockVector {
    pub fn zero(d: usize, degree_cut: u32) -> Self {
        Self { d, degree_cut, metric: FockMetric::default(), coeffs: BTreeMap::new() }
    }

    pub fn vacuum(d: usize, degree_cut: u32) -> Self {
        let mut v = Self::zero(d, degree_cut);
        v.coeffs.insert(FockIndex::vacuum(), ONE);
        v
    }

    pub fn basis(d: usize, degree_cut: u32, idx: FockIndex) -> Result<Self> {
        let mut v = Self::zero(d, degree_cut);
        v.set(idx, ONE)?;
        Ok(v)
    }

    /// Standard complex Gaussian coefficients on every index of degree ≤ N.
    pub fn random<R: Rng + ?Sized>(d: usize, degree_cut: u32, rng: &mut R) -> Self {
        let mut v = Self::zero(d, degree_cut);
        for idx in all_indices(d + 1, degree_cut) {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            v.coeffs.insert(idx, C64::new(re, im));
        }
        v
    }

    pub fn with_metric(mut self, metric: FockMetric) -> Self {
        self.metric = metric;
        self
    }

    pub fn with_degree_cut(mut self, n: u32) -> Self {
        self.degree_cut = n;
        self.coeffs.retain(|k, _| k.degree() <= n);
        self
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn degree_cut(&self) -> u32 {
        self.degree_cut
    }

    pub fn metric(&self) -> FockMetric {
        self.metric
    }

    pub fn coeffs(&self) -> &BTreeMap<FockIndex, C64> {
        &self.coeffs
    }

    pub fn get(&self, idx: &FockIndex) -> C64 {
        self.coeffs.get(idx).copied().unwrap_or(ZERO)
    }

    pub fn set(&mut self, idx: FockIndex, c: C64) -> Result<()> {
        self.check_index(&idx)?;
        if c == ZERO {
            self.coeffs.remove(&idx);
        } else {
            self.coeffs.insert(idx, c);
        }
        Ok(())
    }

    fn check_index(&self, idx: &FockIndex) -> Result<()> {
        if idx.degree() > self.degree_cut {
            return Err(Error::InvalidArgument(format!(
                "index degree {} exceeds cut {}",
                idx.degree(),
                self.degree_cut
            )));
        }
        if idx.max_letter().is_some_and(|k| k > self.d) {
            return Err(Error::IndexOutOfRange { index: idx.max_letter().unwrap(), max: self.d });
        }
        Ok(())
    }

    fn accumulate(&mut self, idx: FockIndex, c: C64) {
        *self.coeffs.entry(idx).or_insert(ZERO) += c;
    }

    pub fn scale(&self, s: C64) -> Self {
        let mut v = self.clone();
        v.coeffs.values_mut().for_each(|c| *c *= s);
        v
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut v = self.clone();
        for (k, c) in &other.coeffs {
            v.accumulate(k.clone(), *c);
        }
        v.degree_cut = v.degree_cut.max(other.degree_cut);
        v
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-ONE))
    }

    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|(k, c)| c.norm_sqr() * self.metric.weight(k)).sum::<f64>().sqrt()
    }

    /// max over indices of |c_ψ − c_φ|.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let keys: std::collections::BTreeSet<&FockIndex> =
            self.coeffs.keys().chain(other.coeffs.keys()).collect();
        keys.into_iter().map(|k| (self.get(k) - other.get(k)).norm()).fold(0.0, f64::max)
    }

    pub fn max_degree(&self) -> u32 {
        self.coeffs.keys().map(|k| k.degree()).max().unwrap_or(0)
    }
}

#[derive(Serialize, Deserialize)]
struct FockEntry {
    exponents: FockIndex,
    coeff: [f64; 2],
}

impl Serialize for FockVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let entries: Vec<FockEntry> = self
            .coeffs
            .iter()
            .map(|(k, c)| FockEntry { exponents: k.clone(), coeff: [c.re, c.im] })
            .collect();
        entries.serialize(s)
    }
}

impl FockVector {
    /// Parses the JSON entry list into a vector over letters 0..=d with cut N.
    pub fn from_json(json: &str, d: usize, degree_cut: u32) -> Result<Self> {
        let entries: Vec<FockEntry> =
            serde_json::from_str(json).map_err(|e| Error::InvalidArgument(e.to_string()))?;
        let mut v = Self::zero(d, degree_cut);
        for e in entries {
            v.check_index(&e.exponents)?;
            v.accumulate(e.exponents, C64::new(e.coeff[0], e.coeff[1]));
        }
        Ok(v)
    }
}

/// Result of an operator that may push mass past the degree cut.
#[derive(Clone, Debug, PartialEq)]
pub struct Truncated {
    pub vector: FockVector,
    pub dropped_count: usize,
    /// Σ |c|·w over coefficients pushed past the cut.
    pub dropped_mass: f64,
}

fn check_d(a: &HsElement, psi: &FockVector) -> Result<Vec<C64>> {
    if a.d() != psi.d {
        return Err(Error::Dimension(format!("element d = {} vs Fock d = {}", a.d(), psi.d)));
    }
    a.coords()
}

pub fn fock_inner(psi: &FockVector, phi: &FockVector) -> Result<C64> {
    if psi.d != phi.d {
        return Err(Error::Dimension(format!("d = {} vs d = {}", psi.d, phi.d)));
    }
    if psi.metric != phi.metric {
        return Err(Error::InvalidArgument("vectors live in different Fock metrics".into()));
    }
    let mut acc = ZERO;
    for (k, c) in &psi.coeffs {
        if let Some(e) = phi.coeffs.get(k) {
            acc += c * e.conj() * psi.metric.weight(k);
        }
    }
    Ok(acc)
}

/// exp(a) truncated at degree N: coefficient χ^λ(a)/λ! on every index.
pub fn coherent_state(a: &HsElement, degree_cut: u32) -> Result<FockVector> {
    let chi = a.coords()?;
    let mut v = FockVector::zero(a.d(), degree_cut);
    for idx in all_indices(a.d() + 1, degree_cut) {
        let c = idx.monomial(&chi) / idx.factorial();
        if c != ZERO {
            v.coeffs.insert(idx, c);
        }
    }
    Ok(v)
}

/// δ_a ψ = Σ_k χ_k(a)·raise_k ψ.
pub fn creation_apply(a: &HsElement, psi: &FockVector) -> Result<Truncated> {
    let chi = check_d(a, psi)?;
    let mut out = FockVector { coeffs: BTreeMap::new(), ..psi.clone() };
    let (mut dropped_count, mut dropped_mass) = (0, 0.0);
    for (idx, c) in &psi.coeffs {
        for (k, x) in chi.iter().enumerate() {
            if *x == ZERO {
                continue;
            }
            let up = idx.raise(k);
            let v = c * x;
            if up.degree() > psi.degree_cut {
                dropped_count += 1;
                dropped_mass += v.norm() * psi.metric.weight(&up);
            } else {
                out.accumulate(up, v);
            }
        }
    }
    Ok(Truncated { vector: out, dropped_count, dropped_mass })
}

/// δ*_a ψ = Σ_k conj(χ_k(a))·L_k ψ with L_k e^μ = (w(μ)/w(μ−k))·e^{μ−k}, the
/// adjoint of raise_k for the vector's metric.
pub fn annihilation_apply(a: &HsElement, psi: &FockVector) -> Result<FockVector> {
    let chi = check_d(a, psi)?;
    let mut out = FockVector { coeffs: BTreeMap::new(), ..psi.clone() };
    for (idx, c) in &psi.coeffs {
        let w_mu = psi.metric.weight(idx);
        for (k, x) in chi.iter().enumerate() {
            if *x == ZERO {
                continue;
            }
            if let Some(down) = idx.lower(k) {
                let ratio = w_mu / psi.metric.weight(&down);
                out.accumulate(down, c * x.conj() * ratio);
            }
        }
    }
    Ok(out)
}

/// 𝒯_a ψ = Σ_{m≤N} δ_a^m ψ/m!, truncated at the vector's degree cut.
pub fn exp_creation(a: &HsElement, psi: &FockVector) -> Result<Truncated> {
    check_d(a, psi)?;
    let mut acc = psi.clone();
    let mut term = psi.clone();
    let (mut dropped_count, mut dropped_mass) = (0, 0.0);
    for m in 1..=psi.degree_cut {
        let t = creation_apply(a, &term)?;
        let inv_m = C64::new(1.0 / m as f64, 0.0);
        dropped_count += t.dropped_count;
        dropped_mass += t.dropped_mass / factorial_f64(m);
        term = t.vector.scale(inv_m);
        if term.coeffs.is_empty() {
            break;
        }
        acc = acc.add(&term);
    }
    Ok(Truncated { vector: acc, dropped_count, dropped_mass })
}

/// 𝒯*_a ψ = Σ_m (δ*_a)^m ψ/m!; finite because annihilation lowers degree.
pub fn exp_annihilation(a: &HsElement, psi: &FockVector) -> Result<FockVector> {
    check_d(a, psi)?;
    let mut acc = psi.clone();
    let mut term = psi.clone();
    for m in 1..=psi.max_degree() {
        term = annihilation_apply(a, &term)?.scale(C64::new(1.0 / m as f64, 0.0));
        if term.coeffs.is_empty() {
            break;
        }
        acc = acc.add(&term);
    }
    Ok(acc)
}

/// m!(n−m)!/n!.
pub fn sigma_norm(n: usize, m: usize) -> Result<Ratio<BigUint>> {
    if m > n {
        return Err(Error::InvalidArgument(format!("split m = {m} exceeds degree n = {n}")));
    }
    Ok(Ratio::new(factorial(m) * factorial(n - m), factorial(n)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::unitary::rng_stream;

    fn idx(e: &[u32]) -> FockIndex {
        FockIndex::from_exponents(e)
    }

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn inner_examples() {
        let e = idx(&[0, 2, 1]);
        let v = FockVector::basis(2, 3, e).unwrap();
        assert!((fock_inner(&v, &v).unwrap().re - 1.0 / 9.0).abs() < 1e-15);
        let vac = FockVector::vacuum(2, 3);
        assert_eq!(fock_inner(&vac, &vac).unwrap(), ONE);
        let e1 = FockVector::basis(2, 3, FockIndex::letter(1)).unwrap();
        let e2 = FockVector::basis(2, 3, FockIndex::letter(2)).unwrap();
        assert_eq!(fock_inner(&e1, &e2).unwrap(), ZERO);
        assert!(fock_inner(&e1, &e2.clone().with_metric(FockMetric::Bargmann)).is_err());
    }

    #[test]
    fn coherent_examples() {
        let v = coherent_state(&HsElement::zero(2), 4).unwrap();
        assert_eq!(v.coeffs().len(), 1);
        assert_eq!(v.get(&FockIndex::vacuum()), ONE);
        let v = coherent_state(&HsElement::basis(2, 1), 4).unwrap();
        assert!((v.get(&idx(&[0, 3])) - c(1.0 / 6.0, 0.0)).norm() < 1e-15);
        let a = HsElement::diagonal(&[ZERO, c(2.0, 0.0), c(0.0, 1.0)]);
        let v = coherent_state(&a, 4).unwrap();
        assert!((v.get(&idx(&[0, 2, 1])) - c(0.0, 2.0)).norm() < 1e-15);
        let mut off = HsElement::zero(2);
        off.matrix[(0, 1)] = ONE;
        assert_eq!(coherent_state(&off, 2), Err(Error::NonDiagonal));
    }

    #[test]
    fn creation_examples() {
        let e1 = HsElement::basis(2, 1);
        let out = creation_apply(&e1, &FockVector::vacuum(2, 3)).unwrap();
        assert_eq!(out.vector, FockVector::basis(2, 3, FockIndex::letter(1)).unwrap());
        let out = creation_apply(&e1, &out.vector).unwrap();
        assert_eq!(out.vector, FockVector::basis(2, 3, idx(&[0, 2])).unwrap());
        let sum = &e1 + &HsElement::basis(2, 2);
        let out = creation_apply(&sum, &FockVector::vacuum(2, 3)).unwrap().vector;
        assert_eq!(out.get(&FockIndex::letter(1)), ONE);
        assert_eq!(out.get(&FockIndex::letter(2)), ONE);
        let top = FockVector::basis(2, 1, FockIndex::letter(1)).unwrap();
        let out = creation_apply(&e1, &top).unwrap();
        assert_eq!(out.dropped_count, 1);
        assert!(out.vector.coeffs().is_empty());
    }

    #[test]
    fn annihilation_examples() {
        let e1 = HsElement::basis(2, 1);
        assert!(annihilation_apply(&e1, &FockVector::vacuum(2, 3)).unwrap().coeffs().is_empty());
        for metric in [FockMetric::Weighted, FockMetric::Bargmann] {
            let sq = FockVector::basis(2, 3, idx(&[0, 2])).unwrap().with_metric(metric);
            let single = FockVector::basis(2, 3, FockIndex::letter(1)).unwrap().with_metric(metric);
            let lhs = fock_inner(&single, &annihilation_apply(&e1, &sq).unwrap()).unwrap();
            let rhs = fock_inner(&creation_apply(&e1, &single).unwrap().vector, &sq).unwrap();
            assert!((lhs - rhs).norm() < 1e-12);
        }
    }

    #[test]
    fn adjointness_on_random_vectors() {
        let mut rng = rng_stream(11, 0);
        let a = HsElement::diagonal(&[c(0.3, 0.1), c(-1.0, 0.5), c(0.2, 0.0), c(0.0, 0.7)]);
        for metric in [FockMetric::Weighted, FockMetric::Bargmann] {
            let psi = FockVector::random(3, 5, &mut rng).with_metric(metric);
            let phi = FockVector::random(3, 5, &mut rng).with_metric(metric);
            let lhs = fock_inner(&creation_apply(&a, &psi).unwrap().vector, &phi).unwrap();
            let rhs = fock_inner(&psi, &annihilation_apply(&a, &phi).unwrap()).unwrap();
            assert!((lhs - rhs).norm() < 1e-12 * (1.0 + lhs.norm()));
        }
    }

    #[test]
    fn exp_groups() {
        let d = 2;
        let a = HsElement::diagonal(&[c(0.2, 0.0), c(0.5, -0.3), c(0.0, 0.4)]);
        let b = HsElement::diagonal(&[c(-0.1, 0.3), c(0.2, 0.2), c(0.6, 0.0)]);
        let n = 6;
        let shifted = exp_creation(&b, &coherent_state(&a, n).unwrap()).unwrap().vector;
        let want = coherent_state(&(&a + &b), n).unwrap();
        assert!(shifted.max_abs_diff(&want) < 1e-10);
        let psi = FockVector::random(d, n, &mut rng_stream(12, 0));
        assert_eq!(exp_creation(&HsElement::zero(d), &psi).unwrap().vector, psi);
        let vac = FockVector::vacuum(d, n);
        assert_eq!(exp_annihilation(&a, &vac).unwrap(), vac);
        let lhs = psi.norm();
        assert!(exp_creation(&a, &psi).unwrap().vector.norm() <= a.norm().exp() * lhs);
        assert!(exp_annihilation(&a, &psi).unwrap().norm() <= a.norm().exp() * lhs);
    }

    #[test]
    fn sigma_examples() {
        let r = |a: u32, b: u32| Ratio::new(BigUint::from(a), BigUint::from(b));
        assert_eq!(sigma_norm(2, 1).unwrap(), r(1, 2));
        assert_eq!(sigma_norm(5, 0).unwrap(), r(1, 1));
        assert_eq!(sigma_norm(4, 2).unwrap(), r(1, 6));
        assert!(sigma_norm(2, 3).is_err());
    }

    #[test]
    fn index_bookkeeping() {
        let i = idx(&[1, 0, 2, 0]);
        assert_eq!(i.exponents(), &[1, 0, 2]);
        assert_eq!(i.partition(), Partition::new(vec![2, 1]).unwrap());
        assert_eq!(i.alphabet().indices(), &[0, 2]);
        assert_eq!(i.lower(2).unwrap().lower(2).unwrap(), idx(&[1]));
        assert!(i.lower(1).is_none());
        assert_eq!(all_indices(3, 2).len(), 10);
        let json = serde_json::to_string(&i).unwrap();
        assert_eq!(json, r#"{"0":1,"2":2}"#);
        assert_eq!(serde_json::from_str::<FockIndex>(&json).unwrap(), i);
    }

    #[test]
    fn vector_json_round_trip() {
        let v = FockVector::random(2, 3, &mut rng_stream(13, 0));
        let json = serde_json::to_string(&v).unwrap();
        assert_eq!(FockVector::from_json(&json, 2, 3).unwrap(), v);
        assert!(FockVector::from_json(&json, 2, 2).is_err());
    }
}
