//! Hardy-space functions as exact exponential-polynomial forms, the transforms
//! Î and 𝓕 = Î∘Φ*, and Wiener-space elements represented through Φ.
//!
//! Points `c` are diagonal-plus-unit elements with coordinates χ(c) = (χ₀, …, χ_d),
//! and the pairing with a label v is ⟨c|v⟩ = Σ_k χ_k(c)·conj(χ_k(v)).

use serde::{Serialize, Serializer};
use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::fock::{
    annihilation_apply, creation_apply, exp_annihilation, exp_creation, factorial_f64, FockIndex, FockMetric, FockVector,
};
use crate::hs_algebra::HsElement;
use crate::unitary::VirtualUnitary;
use crate::C64;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

fn pair(c: &[C64], v: &[C64]) -> C64 {
    c.iter().zip(v).map(|(x, y)| x * y.conj()).sum()
}

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64)
}

/// Polynomial in the coordinates y₀, …, y_d.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Poly {
    coeffs: BTreeMap<FockIndex, C64>,
}

impl Poly {
    pub fn constant(c: C64) -> Self {
        let mut p = Self::default();
        p.add_term(FockIndex::vacuum(), c);
        p
    }

    pub fn monomial(idx: FockIndex, c: C64) -> Self {
        let mut p = Self::default();
        p.add_term(idx, c);
        p
    }

    pub fn coeffs(&self) -> &BTreeMap<FockIndex, C64> {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add_term(&mut self, idx: FockIndex, c: C64) {
        if c == ZERO {
            return;
        }
        let e = self.coeffs.entry(idx).or_insert(ZERO);
        *e += c;
    }

    fn prune(&mut self) {
        self.coeffs.retain(|_, c| *c != ZERO);
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut p = self.clone();
        for (k, c) in &other.coeffs {
            p.add_term(k.clone(), *c);
        }
        p.prune();
        p
    }

    pub fn scale(&self, s: C64) -> Self {
        let mut p = self.clone();
        p.coeffs.values_mut().for_each(|c| *c *= s);
        p.prune();
        p
    }

    pub fn eval(&self, y: &[C64]) -> C64 {
        self.coeffs.iter().map(|(k, c)| c * k.monomial(y)).sum()
    }

    /// Product, keeping only monomials of degree ≤ `cut` when given.
    pub fn mul(&self, other: &Self, cut: Option<u32>) -> Self {
        let mut p = Self::default();
        for (k1, c1) in &self.coeffs {
            for (k2, c2) in &other.coeffs {
                if cut.is_some_and(|n| k1.degree() + k2.degree() > n) {
                    continue;
                }
                p.add_term(k1.add(k2), c1 * c2);
            }
        }
        p.prune();
        p
    }

    /// (Σ_k α_k y_k + β)·P.
    pub fn mul_linear(&self, alpha: &[C64], beta: C64) -> Self {
        let mut p = self.scale(beta);
        for (k, a) in alpha.iter().enumerate() {
            if *a == ZERO {
                continue;
            }
            for (idx, c) in &self.coeffs {
                p.add_term(idx.raise(k), c * a);
            }
        }
        p.prune();
        p
    }

    /// Σ_k a_k ∂P/∂y_k.
    pub fn directional(&self, a: &[C64]) -> Self {
        let mut p = Self::default();
        for (idx, c) in &self.coeffs {
            for (k, x) in a.iter().enumerate() {
                let m = idx.mult(k);
                if m == 0 || *x == ZERO {
                    continue;
                }
                p.add_term(idx.lower(k).unwrap(), c * x * m as f64);
            }
        }
        p.prune();
        p
    }

    /// y ↦ P(y + w), expanded exactly by the binomial theorem.
    pub fn translate(&self, w: &[C64]) -> Self {
        let mut out = Self::default();
        for (idx, c) in &self.coeffs {
            let mut partial = Poly::constant(*c);
            for (k, &e) in idx.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let wk = w.get(k).copied().unwrap_or(ZERO);
                let mut factor = Poly::default();
                for j in 0..=e {
                    let mut jdx = FockIndex::vacuum();
                    for _ in 0..j {
                        jdx = jdx.raise(k);
                    }
                    factor.add_term(jdx, wk.powu(e - j) * binomial(e, j));
                }
                partial = partial.mul(&factor, None);
            }
            out = out.add(&partial);
        }
        out
    }

    pub fn truncate(&self, n: u32) -> Self {
        let mut p = self.clone();
        p.coeffs.retain(|k, _| k.degree() <= n);
        p
    }

    pub fn max_letter(&self) -> Option<usize> {
        self.coeffs.keys().filter_map(|k| k.max_letter()).max()
    }
}

/// c ↦ e^{⟨c|v⟩+κ}·P(χ(c) + χ(w)).
#[derive(Clone, Debug, PartialEq)]
pub struct ExpPolyTerm {
    pub kappa: C64,
    pub v: Vec<C64>,
    pub w: Vec<C64>,
    pub poly: Poly,
}

impl ExpPolyTerm {
    fn eval(&self, c: &[C64]) -> C64 {
        let y: Vec<C64> = c.iter().zip(&self.w).map(|(a, b)| a + b).collect();
        (pair(c, &self.v) + self.kappa).exp() * self.poly.eval(&y)
    }

    fn key(&self) -> Vec<u64> {
        let canon = |x: f64| (x + 0.0).to_bits();
        self.v.iter().chain(&self.w).flat_map(|z| [canon(z.re), canon(z.im)]).collect()
    }
}

/// Finite sum of exponential-polynomial terms over coordinates 0..=d.
#[derive(Clone, Debug, PartialEq)]
pub struct ExpPolyForm {
    d: usize,
    terms: Vec<ExpPolyTerm>,
}

impl ExpPolyForm {
    pub fn zero(d: usize) -> Self {
        Self { d, terms: Vec::new() }
    }

    pub fn from_poly(d: usize, poly: Poly) -> Self {
        let mut f = Self::zero(d);
        f.push(ExpPolyTerm { kappa: ZERO, v: vec![ZERO; d + 1], w: vec![ZERO; d + 1], poly });
        f
    }

    pub fn constant(d: usize, c: C64) -> Self {
        Self::from_poly(d, Poly::constant(c))
    }

    /// The coordinate function χ^λ.
    pub fn monomial(d: usize, idx: FockIndex) -> Self {
        Self::from_poly(d, Poly::monomial(idx, ONE))
    }

    /// c ↦ e^{⟨c|v⟩}.
    pub fn exponential(v: &HsElement) -> Result<Self> {
        mult_exp(&Self::constant(v.d(), ONE), v)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn terms(&self) -> &[ExpPolyTerm] {
        &self.terms
    }

    fn push(&mut self, t: ExpPolyTerm) {
        if !t.poly.is_zero() {
            self.terms.push(t);
        }
    }

    /// Merges terms sharing (v, w); later terms are rescaled onto the first κ.
    fn merged(terms: Vec<ExpPolyTerm>, d: usize) -> Self {
        let mut slots: BTreeMap<Vec<u64>, usize> = BTreeMap::new();
        let mut out: Vec<ExpPolyTerm> = Vec::new();
        for t in terms {
            match slots.get(&t.key()) {
                Some(&i) => {
                    let ratio = (t.kappa - out[i].kappa).exp();
                    out[i].poly = out[i].poly.add(&t.poly.scale(ratio));
                }
                None => {
                    slots.insert(t.key(), out.len());
                    out.push(t);
                }
            }
        }
        out.retain(|t| !t.poly.is_zero());
        Self { d, terms: out }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other.d)?;
        Ok(Self::merged(self.terms.iter().chain(&other.terms).cloned().collect(), self.d))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(-ONE))
    }

    pub fn scale(&self, s: C64) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| ExpPolyTerm { poly: t.poly.scale(s), ..t.clone() })
            .collect();
        Self::merged(terms, self.d)
    }

    /// Multiplies by e^{s} through κ, exact for large |s|.
    pub fn scale_exp(&self, s: C64) -> Self {
        let terms = self.terms.iter().map(|t| ExpPolyTerm { kappa: t.kappa + s, ..t.clone() }).collect();
        Self { d: self.d, terms }
    }

    fn check(&self, d: usize) -> Result<()> {
        if d != self.d {
            return Err(Error::Dimension(format!("form d = {} vs d = {d}", self.d)));
        }
        Ok(())
    }

    fn coords_of(&self, a: &HsElement) -> Result<Vec<C64>> {
        self.check(a.d())?;
        a.coords()
    }

    pub fn evaluate_coords(&self, c: &[C64]) -> C64 {
        self.terms.iter().map(|t| t.eval(c)).sum()
    }
}

pub fn evaluate(f: &ExpPolyForm, c: &HsElement) -> Result<C64> {
    let c = f.coords_of(c)?;
    Ok(f.evaluate_coords(&c))
}

/// T_a f(c) = f(c + a).
pub fn shift(f: &ExpPolyForm, a: &HsElement) -> Result<ExpPolyForm> {
    let a = f.coords_of(a)?;
    let terms = f
        .terms
        .iter()
        .map(|t| ExpPolyTerm {
            kappa: t.kappa + pair(&a, &t.v),
            v: t.v.clone(),
            w: t.w.iter().zip(&a).map(|(x, y)| x + y).collect(),
            poly: t.poly.clone(),
        })
        .collect();
    Ok(ExpPolyForm::merged(terms, f.d))
}

/// M_{b♯} f(c) = e^{⟨c|b⟩} f(c).
pub fn mult_exp(f: &ExpPolyForm, b: &HsElement) -> Result<ExpPolyForm> {
    let b = f.coords_of(b)?;
    let terms = f
        .terms
        .iter()
        .map(|t| ExpPolyTerm { v: t.v.iter().zip(&b).map(|(x, y)| x + y).collect(), ..t.clone() })
        .collect();
    Ok(ExpPolyForm::merged(terms, f.d))
}

/// b♯ f(c) = ⟨c|b⟩ f(c).
pub fn mult_linear(f: &ExpPolyForm, b: &HsElement) -> Result<ExpPolyForm> {
    let b = f.coords_of(b)?;
    let alpha: Vec<C64> = b.iter().map(|x| x.conj()).collect();
    let terms = f
        .terms
        .iter()
        .map(|t| {
            let beta = -t.w.iter().zip(&alpha).map(|(w, a)| w * a).sum::<C64>();
            ExpPolyTerm { poly: t.poly.mul_linear(&alpha, beta), ..t.clone() }
        })
        .collect();
    Ok(ExpPolyForm::merged(terms, f.d))
}

/// 𝔡_a f(c) = d/dt f(c + t·a) at t = 0.
pub fn derivative(f: &ExpPolyForm, a: &HsElement) -> Result<ExpPolyForm> {
    let a = f.coords_of(a)?;
    let terms = f
        .terms
        .iter()
        .map(|t| {
            let poly = t.poly.scale(pair(&a, &t.v)).add(&t.poly.directional(&a));
            ExpPolyTerm { poly, ..t.clone() }
        })
        .collect();
    Ok(ExpPolyForm::merged(terms, f.d))
}

/// Taylor coefficients at c = 0 of every monomial χ^λ with |λ| ≤ N.
pub fn taylor_coefficients(f: &ExpPolyForm, up_to: u32) -> BTreeMap<FockIndex, C64> {
    let mut acc = Poly::default();
    for t in &f.terms {
        let shifted = t.poly.translate(&t.w).truncate(up_to);
        let mut series = Poly::constant(t.kappa.exp());
        for (k, vk) in t.v.iter().enumerate() {
            if *vk == ZERO {
                continue;
            }
            let mut e = Poly::default();
            let mut idx = FockIndex::vacuum();
            let mut pw = ONE;
            for j in 0..=up_to {
                e.add_term(idx.clone(), pw / factorial_f64(j));
                idx = idx.raise(k);
                pw *= vk.conj();
            }
            series = series.mul(&e, Some(up_to));
        }
        acc = acc.add(&series.mul(&shifted, Some(up_to)));
    }
    acc.coeffs
}

/// Î(e^λ) = s_λ χ^λ with s_λ = w(λ)/λ!.
fn transport_scale(metric: FockMetric, idx: &FockIndex) -> f64 {
    metric.weight(idx) / idx.factorial()
}

/// ‖χ^λ‖² in the Hardy space carrying the transported Fock inner product.
pub fn hardy_basis_norm_sqr(metric: FockMetric, idx: &FockIndex) -> f64 {
    let s = transport_scale(metric, idx);
    metric.weight(idx) / (s * s)
}

/// Îψ(c) = ⟨exp(c)|ψ⟩ = Σ conj(c_λ)·χ^λ(c)·w(λ)/λ!.
pub fn hardy_from_fock(psi: &FockVector) -> ExpPolyForm {
    let metric = psi.metric();
    let mut poly = Poly::default();
    for (idx, c) in psi.coeffs() {
        poly.add_term(idx.clone(), c.conj() * transport_scale(metric, idx));
    }
    ExpPolyForm::from_poly(psi.d(), poly)
}

/// Inverse of Î on Taylor data: c_λ = conj(h_λ)·λ!/w(λ).
pub fn fock_from_taylor(
    coeffs: &BTreeMap<FockIndex, C64>,
    d: usize,
    degree_cut: u32,
    metric: FockMetric,
) -> Result<FockVector> {
    let mut v = FockVector::zero(d, degree_cut).with_metric(metric);
    for (idx, h) in coeffs {
        if idx.degree() <= degree_cut {
            v.set(idx.clone(), h.conj() / transport_scale(metric, idx))?;
        }
    }
    Ok(v)
}

/// ‖f‖² from the Taylor coefficients of degree ≤ N and the transported basis norms.
pub fn hardy_norm_sqr(f: &ExpPolyForm, up_to: u32, metric: FockMetric) -> f64 {
    taylor_coefficients(f, up_to)
        .iter()
        .map(|(idx, h)| h.norm_sqr() * hardy_basis_norm_sqr(metric, idx))
        .sum()
}

/// An element of the symmetric Wiener space, stored as its Fock preimage under Φ.
#[derive(Clone, Debug, PartialEq)]
pub struct WienerElement {
    pub fock: FockVector,
}

impl WienerElement {
    pub fn new(fock: FockVector) -> Self {
        Self { fock }
    }

    /// ‖f‖_γ := ‖Φ*f‖.
    pub fn norm(&self) -> f64 {
        self.fock.norm()
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(self.fock.add(&other.fock))
    }

    /// Scalar multiple in the Wiener space; Φ is conjugate-linear, so the Fock
    /// preimage is scaled by conj(s).
    pub fn scale(&self, s: C64) -> Self {
        Self::new(self.fock.scale(s.conj()))
    }
}

/// 𝓕 = Î∘Φ*.
pub fn fourier_transform(f: &WienerElement) -> ExpPolyForm {
    hardy_from_fock(&f.fock)
}

/// Φψ(𝔲) = Σ conj(c_λ)·φ^λ(𝔲) with φ₀ ≡ 1 and φ_k(𝔲) = u_kk.
pub fn wiener_evaluate(f: &WienerElement, u: &VirtualUnitary) -> Result<C64> {
    let d = f.fock.d();
    let m = u.level();
    if d > m {
        return Err(Error::Dimension(format!("d = {d} exceeds level m = {m}")));
    }
    let top = u.top().entries();
    let phi: Vec<C64> = (0..=d).map(|k| if k == 0 { ONE } else { top[(k - 1, k - 1)] }).collect();
    Ok(f.fock.coeffs().iter().map(|(idx, c)| c.conj() * idx.monomial(&phi)).sum())
}

/// max over points of |f(c) − g(c)|/max(1, |g(c)|).
fn relative_defect(f: &ExpPolyForm, g: &ExpPolyForm, points: &[HsElement]) -> Result<f64> {
    let mut worst = 0.0f64;
    for c in points {
        let (x, y) = (evaluate(f, c)?, evaluate(g, c)?);
        worst = worst.max((x - y).norm() / y.norm().max(1.0));
    }
    Ok(worst)
}

/// Î(𝒯_b ψ) against M_{b♯}(Îψ). The left side is truncated at ψ's degree cut.
pub fn creation_dictionary_defect(psi: &FockVector, b: &HsElement, points: &[HsElement]) -> Result<f64> {
    let lhs = hardy_from_fock(&exp_creation(b, psi)?.vector);
    let rhs = mult_exp(&hardy_from_fock(psi), b)?;
    relative_defect(&lhs, &rhs, points)
}

/// Î(𝒯*_a ψ) against T_a(Îψ).
pub fn annihilation_dictionary_defect(psi: &FockVector, a: &HsElement, points: &[HsElement]) -> Result<f64> {
    let lhs = hardy_from_fock(&exp_annihilation(a, psi)?);
    let rhs = shift(&hardy_from_fock(psi), a)?;
    relative_defect(&lhs, &rhs, points)
}

/// 𝔡_a^m T_a 𝓕f against 𝓕(φ̄_a^m M†_a f), with M†_a = Φ𝒯*_aΦ* and φ̄_a = Φδ*_aΦ*.
pub fn shift_intertwining_defect(f: &WienerElement, a: &HsElement, order: u32, points: &[HsElement]) -> Result<f64> {
    let mut lhs = shift(&fourier_transform(f), a)?;
    let mut psi = exp_annihilation(a, &f.fock)?;
    for _ in 0..order {
        lhs = derivative(&lhs, a)?;
        psi = annihilation_apply(a, &psi)?;
    }
    relative_defect(&lhs, &hardy_from_fock(&psi), points)
}

/// a♯^m M_{a♯} 𝓕f against 𝓕(δ†_a^m T†_a f), with T†_a = Φ𝒯_aΦ* and δ†_a = Φδ_aΦ*.
pub fn multiplication_intertwining_defect(
    f: &WienerElement,
    a: &HsElement,
    order: u32,
    points: &[HsElement],
) -> Result<f64> {
    let mut lhs = mult_exp(&fourier_transform(f), a)?;
    let mut psi = exp_creation(a, &f.fock)?.vector;
    for _ in 0..order {
        lhs = mult_linear(&lhs, a)?;
        psi = creation_apply(a, &psi)?.vector;
    }
    relative_defect(&lhs, &hardy_from_fock(&psi), points)
}

#[derive(Serialize)]
struct TermJson {
    kappa: [f64; 2],
    v: HsElement,
    w: HsElement,
    poly: Vec<PolyEntry>,
}

#[derive(Serialize)]
struct PolyEntry {
    exponents: FockIndex,
    coeff: [f64; 2],
}

impl Serialize for ExpPolyForm {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let terms: Vec<TermJson> = self
            .terms
            .iter()
            .map(|t| TermJson {
                kappa: [t.kappa.re, t.kappa.im],
                v: HsElement::diagonal(&t.v),
                w: HsElement::diagonal(&t.w),
                poly: t
                    .poly
                    .coeffs
                    .iter()
                    .map(|(k, c)| PolyEntry { exponents: k.clone(), coeff: [c.re, c.im] })
                    .collect(),
            })
            .collect();
        terms.serialize(s)
    }
}
