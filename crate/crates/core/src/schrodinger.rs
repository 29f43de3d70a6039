//! The one-parameter Weyl group along A = Σ_{m≤d} 𝔢_m, its weighted generator
//! 𝔥 = 𝔡_A − i(ΩA)♯ with Ω = diag(2^{−m}), and the Gaussian semigroup
//! 𝔊_r = (4πr)^{−1/2}∫e^{−t²/4r}𝒲_t dt = exp(r𝔥²).

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hardy_wiener::{derivative, mult_exp, mult_linear, shift, ExpPolyForm};
use crate::hs_algebra::{entry_weight, weighted_basis_mass, HsElement};
use crate::quadrature::QuadratureRule;
use crate::C64;

const I: C64 = C64::new(0.0, 1.0);

/// Truncation d together with the E⁻ weights 2^{−m} on the diagonal letters.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedContext {
    d: usize,
    weights: Vec<f64>,
}

impl WeightedContext {
    pub fn new(d: usize) -> Self {
        Self { d, weights: (0..=d).map(|m| entry_weight(m, m)).collect() }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// A = Σ_{m≤d} 𝔢_m.
    pub fn direction(&self) -> HsElement {
        HsElement::diagonal(&vec![C64::new(1.0, 0.0); self.d + 1])
    }

    /// ΩA = Σ 2^{−m}𝔢_m.
    pub fn weighted_direction(&self) -> HsElement {
        let cs: Vec<C64> = self.weights.iter().map(|&w| C64::new(w, 0.0)).collect();
        HsElement::diagonal(&cs)
    }

    /// ‖A‖²₋ = Σ_{m≤d} 2^{−m}; tends to 2 as d grows.
    pub fn mass(&self) -> f64 {
        weighted_basis_mass(self.d)
    }
}

/// 𝒲_t f(c) = e^{−it²‖A‖²₋/2}·e^{⟨c|itΩA⟩}·f(c + tA).
pub fn weyl_group_element(ctx: &WeightedContext, t: f64, f: &ExpPolyForm) -> Result<ExpPolyForm> {
    let a = &ctx.direction() * t;
    let b = &ctx.weighted_direction() * (I * t);
    let g = mult_exp(&shift(f, &a)?, &b)?;
    Ok(g.scale_exp(-I * (t * t * ctx.mass() / 2.0)))
}

/// 𝔥f = 𝔡_A f − i(ΩA)♯ f, or 𝔥²f for `order = 2`.
pub fn hamiltonian_apply(ctx: &WeightedContext, f: &ExpPolyForm, order: u32) -> Result<ExpPolyForm> {
    let once = |g: &ExpPolyForm| -> Result<ExpPolyForm> {
        derivative(g, &ctx.direction())?.add(&mult_linear(g, &ctx.weighted_direction())?.scale(-I))
    };
    match order {
        1 => once(f),
        2 => once(&once(f)?),
        _ => Err(Error::InvalidArgument(format!("order must be 1 or 2, got {order}"))),
    }
}

/// H f = Σ_m (𝔡_m − i·2^{−m}𝔢_m♯) Σ_k (2^{−k}𝔢_k♯ + i𝔡_k) f, assembled letter by letter.
pub fn hamiltonian_h_apply(ctx: &WeightedContext, f: &ExpPolyForm) -> Result<ExpPolyForm> {
    let d = ctx.d;
    let mut inner = ExpPolyForm::zero(d);
    for k in 0..=d {
        let ek = HsElement::basis(d, k);
        inner = inner.add(&mult_linear(f, &(&ek * ctx.weights[k]))?)?;
        inner = inner.add(&derivative(f, &ek)?.scale(I))?;
    }
    let mut outer = ExpPolyForm::zero(d);
    for m in 0..=d {
        let em = HsElement::basis(d, m);
        outer = outer.add(&derivative(&inner, &em)?)?;
        outer = outer.add(&mult_linear(&inner, &(&em * ctx.weights[m]))?.scale(-I))?;
    }
    Ok(outer)
}

/// 𝔊_r f together with the spread between the Q-node and 2Q-node rules.
#[derive(Clone, Debug)]
pub struct SemigroupResult {
    pub form: ExpPolyForm,
    pub quadrature_error: f64,
}

fn quadrature_sum(ctx: &WeightedContext, f: &ExpPolyForm, r: f64, rule: &QuadratureRule) -> Result<ExpPolyForm> {
    let parts: Vec<Result<ExpPolyForm>> = rule
        .scaled(r)
        .into_par_iter()
        .map(|(t, w)| Ok(weyl_group_element(ctx, t, f)?.scale(C64::new(w, 0.0))))
        .collect();
    let mut acc = ExpPolyForm::zero(ctx.d);
    for p in parts {
        acc = acc.add(&p?)?;
    }
    Ok(acc)
}

/// Probe points used for the quadrature-error estimate: 0, ±A/2, iA/2.
pub fn probe_points(ctx: &WeightedContext) -> Vec<HsElement> {
    let a = ctx.direction();
    vec![HsElement::zero(ctx.d), &a * 0.5, &a * -0.5, &a * C64::new(0.0, 0.5)]
}

fn max_spread(f: &ExpPolyForm, g: &ExpPolyForm, points: &[HsElement]) -> Result<f64> {
    let mut worst = 0.0f64;
    for c in points {
        let xs = c.coords()?;
        worst = worst.max((f.evaluate_coords(&xs) - g.evaluate_coords(&xs)).norm());
    }
    Ok(worst)
}

pub fn gaussian_semigroup_apply(
    ctx: &WeightedContext,
    f: &ExpPolyForm,
    r: f64,
    rule: &QuadratureRule,
) -> Result<SemigroupResult> {
    if !(r > 0.0) {
        return Err(Error::InvalidArgument(format!("semigroup parameter must be positive, got {r}")));
    }
    let form = quadrature_sum(ctx, f, r, rule)?;
    let fine = quadrature_sum(ctx, f, r, &QuadratureRule::new(2 * rule.q())?)?;
    let quadrature_error = max_spread(&form, &fine, &probe_points(ctx))?;
    Ok(SemigroupResult { form, quadrature_error })
}

/// Semigroup defect max_c |𝔊_r𝔊_s f − 𝔊_{r+s} f| / max(1, |𝔊_{r+s} f|).
pub fn semigroup_defect(
    ctx: &WeightedContext,
    f: &ExpPolyForm,
    r: f64,
    s: f64,
    rule: &QuadratureRule,
    points: &[HsElement],
) -> Result<f64> {
    let gs = quadrature_sum(ctx, f, s, rule)?;
    let lhs = quadrature_sum(ctx, &gs, r, rule)?;
    let rhs = quadrature_sum(ctx, f, r + s, rule)?;
    crate::weyl_heisenberg::pointwise_defect(&lhs, &rhs, points)
}

#[derive(Clone, Debug, Serialize)]
pub struct Residual {
    /// max_c |(𝔊_{r+ε}f − 𝔊_{r−ε}f)/2ε − 𝔥²𝔊_r f|.
    pub residual: f64,
    /// max_c |𝔥²𝔊_r f|.
    pub scale: f64,
}

pub fn schrodinger_residual(
    ctx: &WeightedContext,
    f: &ExpPolyForm,
    r: f64,
    eps: f64,
    rule: &QuadratureRule,
    points: &[HsElement],
) -> Result<Residual> {
    if !(r > eps && eps > 0.0) {
        return Err(Error::InvalidArgument(format!("need r > ε > 0, got r = {r}, ε = {eps}")));
    }
    let plus = quadrature_sum(ctx, f, r + eps, rule)?;
    let minus = quadrature_sum(ctx, f, r - eps, rule)?;
    let mid = quadrature_sum(ctx, f, r, rule)?;
    let gen = hamiltonian_apply(ctx, &mid, 2)?;
    let (mut residual, mut scale) = (0.0f64, 0.0f64);
    for c in points {
        let xs = c.coords()?;
        let fd = (plus.evaluate_coords(&xs) - minus.evaluate_coords(&xs)) / (2.0 * eps);
        let g = gen.evaluate_coords(&xs);
        residual = residual.max((fd - g).norm());
        scale = scale.max(g.norm());
    }
    Ok(Residual { residual, scale })
}
