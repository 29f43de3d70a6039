//! The Heisenberg group, its Schrödinger representation on Hardy-space forms,
//! Weyl systems and their generators.

use rand::Rng;
use serde::Serialize;

use crate::error::Result;
use crate::fock::FockIndex;
use crate::hardy_wiener::{derivative, mult_exp, mult_linear, shift, taylor_coefficients, ExpPolyForm};
use crate::hs_algebra::{hs_inner, im_pairing, HsElement, QuaternionPair};
use crate::C64;

#[derive(Clone, Debug, PartialEq)]
pub struct HeisenbergElement {
    pub a: HsElement,
    pub b: HsElement,
    pub t: C64,
}

impl HeisenbergElement {
    pub fn identity(d: usize) -> Self {
        Self { a: HsElement::zero(d), b: HsElement::zero(d), t: C64::new(0.0, 0.0) }
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (&self.a - &other.a).norm().max((&self.b - &other.b).norm()).max((self.t - other.t).norm())
    }
}

/// (a + a′, b + b′, t + t′ + ⟨a|b′⟩).
pub fn heisenberg_mul(x: &HeisenbergElement, y: &HeisenbergElement) -> Result<HeisenbergElement> {
    let twist = hs_inner(&x.a, &y.b)?;
    Ok(HeisenbergElement { a: &x.a + &y.a, b: &x.b + &y.b, t: x.t + y.t + twist })
}

/// (−a, −b, −t + ⟨a|b⟩).
pub fn heisenberg_inv(x: &HeisenbergElement) -> Result<HeisenbergElement> {
    Ok(HeisenbergElement { a: -&x.a, b: -&x.b, t: -x.t + hs_inner(&x.a, &x.b)? })
}

#[derive(Clone, Debug, PartialEq)]
pub struct WeylLabel {
    pub p: QuaternionPair,
}

impl WeylLabel {
    pub fn new(a: HsElement, b: HsElement) -> Result<Self> {
        Ok(Self { p: QuaternionPair::new(a, b)? })
    }

    pub fn zero(d: usize) -> Self {
        Self { p: QuaternionPair::zero(d) }
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { p: self.p.scale(s) }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self { p: &self.p + &other.p }
    }
}

/// 𝒲(p) f = e^{½⟨a|b⟩}·M_{b♯}T_a f.
pub fn weyl_apply(p: &WeylLabel, f: &ExpPolyForm) -> Result<ExpPolyForm> {
    let (a, b) = (&p.p.a, &p.p.b);
    let g = mult_exp(&shift(f, a)?, b)?;
    Ok(g.scale_exp(hs_inner(a, b)? * 0.5))
}

/// 𝒮(X(a,b,t)) f = e^t·M_{b♯}T_a f = e^{t − ½⟨a|b⟩}𝒲(p) f.
pub fn schrodinger_rep(x: &HeisenbergElement, f: &ExpPolyForm) -> Result<ExpPolyForm> {
    let g = mult_exp(&shift(f, &x.a)?, &x.b)?;
    Ok(g.scale_exp(x.t))
}

/// h_p f = 𝔡_a f + b♯ f, the generator of t ↦ 𝒲(tp).
pub fn generator_apply(p: &WeylLabel, f: &ExpPolyForm) -> Result<ExpPolyForm> {
    derivative(f, &p.p.a)?.add(&mult_linear(f, &p.p.b)?)
}

/// Scale-relative pointwise defect max_c |L(c) − R(c)| / max(1, |R(c)|).
pub fn pointwise_defect(lhs: &ExpPolyForm, rhs: &ExpPolyForm, points: &[HsElement]) -> Result<f64> {
    let mut worst = 0.0f64;
    for c in points {
        let coords = c.coords()?;
        let l = lhs.evaluate_coords(&coords);
        let r = rhs.evaluate_coords(&coords);
        worst = worst.max((l - r).norm() / r.norm().max(1.0));
    }
    Ok(worst)
}

/// The fixed battery {1, χ₁, χ₁χ₂, e^{⟨c|v⟩}} (χ₁² replaces χ₁χ₂ when d = 1).
pub fn test_battery(d: usize, v: &HsElement) -> Result<Vec<ExpPolyForm>> {
    let second = if d >= 2 { FockIndex::from_exponents(&[0, 1, 1]) } else { FockIndex::from_exponents(&[0, 2]) };
    Ok(vec![
        ExpPolyForm::constant(d, C64::new(1.0, 0.0)),
        ExpPolyForm::monomial(d, FockIndex::letter(1)),
        ExpPolyForm::monomial(d, second),
        ExpPolyForm::exponential(v)?,
    ])
}

/// The standard test function 1 + χ₁ + χ₁χ₂ + e^{⟨c|v₀⟩} with a fixed v₀.
pub fn standard_test_function(d: usize) -> Result<ExpPolyForm> {
    let coords: Vec<C64> = (0..=d).map(|k| C64::new(0.3 / (k + 1) as f64, -0.2 + 0.1 * k as f64)).collect();
    let mut f = ExpPolyForm::zero(d);
    for g in test_battery(d, &HsElement::diagonal(&coords))? {
        f = f.add(&g)?;
    }
    Ok(f)
}

/// e^{−ℑ⟨p|p′⟩}, the phase in 𝒲(p)𝒲(p′) = e^{−ℑ⟨p|p′⟩}𝒲(p′)𝒲(p).
pub fn weyl_phase(p: &WeylLabel, q: &WeylLabel) -> Result<C64> {
    Ok((-im_pairing(&p.p, &q.p)?).exp())
}

/// max defect of 𝒲(p)𝒲(p′)f − e^{−ℑ⟨p|p′⟩}𝒲(p′)𝒲(p)f on the standard test function.
pub fn weyl_commutation_defect(p: &WeylLabel, q: &WeylLabel, points: &[HsElement]) -> Result<f64> {
    let f = standard_test_function(p.p.d())?;
    weyl_commutation_defect_on(p, q, &f, points)
}

pub fn weyl_commutation_defect_on(
    p: &WeylLabel,
    q: &WeylLabel,
    f: &ExpPolyForm,
    points: &[HsElement],
) -> Result<f64> {
    let lhs = weyl_apply(p, &weyl_apply(q, f)?)?;
    let rhs = weyl_apply(q, &weyl_apply(p, f)?)?.scale(weyl_phase(p, q)?);
    pointwise_defect(&lhs, &rhs, points)
}

/// One report row per relation.
#[derive(Clone, Debug, Serialize)]
pub struct RelationRow {
    pub relation: String,
    pub p: String,
    pub p_prime: String,
    pub max_defect: f64,
    pub phase: [f64; 2],
    pub pass: bool,
}

pub const RELATION_TOL: f64 = 1e-10;

fn label(p: &WeylLabel) -> String {
    format!("|a|={:.4},|b|={:.4}", p.p.a.norm(), p.p.b.norm())
}

/// Evaluates every commutation relation for (p, p′) and Heisenberg pair (x, y)
/// on the test battery at the given points.
pub fn relation_rows(
    p: &WeylLabel,
    q: &WeylLabel,
    x: &HeisenbergElement,
    y: &HeisenbergElement,
    battery: &[ExpPolyForm],
    points: &[HsElement],
) -> Result<Vec<RelationRow>> {
    let ip = im_pairing(&p.p, &q.p)?;
    let mut rows = Vec::new();
    let mut push = |relation: &str, defect: f64, phase: C64| {
        rows.push(RelationRow {
            relation: relation.to_string(),
            p: label(p),
            p_prime: label(q),
            max_defect: defect,
            phase: [phase.re, phase.im],
            pass: defect <= RELATION_TOL,
        });
    };

    let mut d_sum = 0.0f64;
    let mut d_comm = 0.0f64;
    let mut d_gen = 0.0f64;
    let mut d_dict = 0.0f64;
    let mut d_ccr = 0.0f64;
    let mut d_hom = 0.0f64;
    let (a, b) = (&p.p.a, &q.p.b);
    let ab = hs_inner(a, b)?;
    let xy = heisenberg_mul(x, y)?;
    for f in battery {
        let lhs = weyl_apply(&p.add(q), f)?;
        let rhs = weyl_apply(p, &weyl_apply(q, f)?)?.scale((ip * 0.5).exp());
        d_sum = d_sum.max(pointwise_defect(&lhs, &rhs, points)?);
        d_comm = d_comm.max(weyl_commutation_defect_on(p, q, f, points)?);

        let hh = generator_apply(p, &generator_apply(q, f)?)?
            .sub(&generator_apply(q, &generator_apply(p, f)?)?)?;
        d_gen = d_gen.max(pointwise_defect(&hh, &f.scale(-ip), points)?);

        let comm = derivative(&mult_linear(f, b)?, a)?.sub(&mult_linear(&derivative(f, a)?, b)?)?;
        d_ccr = d_ccr.max(pointwise_defect(&comm, &f.scale(ab), points)?);

        let tm = shift(&mult_exp(f, b)?, a)?;
        let mt = mult_exp(&shift(f, a)?, b)?.scale_exp(ab);
        d_dict = d_dict.max(pointwise_defect(&tm, &mt, points)?);

        let s_xy = schrodinger_rep(&xy, f)?;
        let s_x_s_y = schrodinger_rep(x, &schrodinger_rep(y, f)?)?;
        d_hom = d_hom.max(pointwise_defect(&s_xy, &s_x_s_y, points)?);
    }
    push("weyl_sum: W(p+p') = exp(Im/2) W(p)W(p')", d_sum, (ip * 0.5).exp());
    push("weyl_comm: W(p)W(p') = exp(-Im) W(p')W(p)", d_comm, (-ip).exp());
    push("generator: [h_p, h_p'] = -Im<p|p'>", d_gen, -ip);
    push("ccr: [d_a, b#] = <a|b'>", d_ccr, ab);
    push("dictionary: T_a M_b = exp(<a|b'>) M_b T_a", d_dict, ab.exp());
    push("heisenberg_hom: S(xy) = S(x)S(y)", d_hom, C64::new(1.0, 0.0));
    Ok(rows)
}

/// For every monomial χ^λ of degree ≤ `max_degree`, checks that 𝒲(p)χ^λ has a
/// Taylor component outside span{χ^λ}.
pub fn irreducibility_spot_check(p: &WeylLabel, max_degree: u32) -> Result<bool> {
    let d = p.p.d();
    for idx in crate::fock::all_indices(d + 1, max_degree) {
        let g = weyl_apply(p, &ExpPolyForm::monomial(d, idx.clone()))?;
        let t = taylor_coefficients(&g, max_degree + 1);
        let escapes = t.iter().any(|(k, c)| *k != idx && c.norm() > 1e-12);
        if !escapes {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Random diagonal element with coordinates uniform in the square [−r, r]².
pub fn random_diagonal<R: Rng + ?Sized>(rng: &mut R, d: usize, r: f64) -> HsElement {
    let cs: Vec<C64> = (0..=d).map(|_| C64::new(rng.random_range(-r..r), rng.random_range(-r..r))).collect();
    HsElement::diagonal(&cs)
}

pub fn random_label<R: Rng + ?Sized>(rng: &mut R, d: usize, r: f64) -> WeylLabel {
    WeylLabel { p: QuaternionPair { a: random_diagonal(rng, d, r), b: random_diagonal(rng, d, r) } }
}

pub fn random_heisenberg<R: Rng + ?Sized>(rng: &mut R, d: usize, r: f64) -> HeisenbergElement {
    HeisenbergElement {
        a: random_diagonal(rng, d, r),
        b: random_diagonal(rng, d, r),
        t: C64::new(rng.random_range(-r..r), rng.random_range(-r..r)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hardy_wiener::evaluate;
    use crate::unitary::rng_stream;

    fn points(d: usize, seed: u64) -> Vec<HsElement> {
        let mut rng = rng_stream(seed, 99);
        (0..20).map(|_| random_diagonal(&mut rng, d, 1.0)).collect()
    }

    #[test]
    fn heisenberg_examples() {
        let d = 2;
        let mut rng = rng_stream(1, 0);
        let x = random_heisenberg(&mut rng, d, 1.0);
        let e = HeisenbergElement::identity(d);
        assert_eq!(heisenberg_mul(&x, &e).unwrap(), x);
        let e1 = HsElement::basis(d, 1);
        let xa = HeisenbergElement { a: e1.clone(), ..e.clone() };
        let xb = HeisenbergElement { b: e1.clone(), ..e.clone() };
        let prod = heisenberg_mul(&xa, &xb).unwrap();
        assert_eq!(prod, HeisenbergElement { a: e1.clone(), b: e1.clone(), t: C64::new(1.0, 0.0) });
        let inv = heisenberg_inv(&x).unwrap();
        assert!(heisenberg_mul(&x, &inv).unwrap().max_abs_diff(&e) < 1e-12);
        assert_eq!(heisenberg_inv(&e).unwrap(), e);
        assert!(heisenberg_inv(&inv).unwrap().max_abs_diff(&x) < 1e-12);
        let both = HeisenbergElement { a: e1.clone(), b: e1, t: C64::new(0.0, 0.0) };
        assert_eq!(heisenberg_inv(&both).unwrap().t, C64::new(1.0, 0.0));
    }

    #[test]
    fn weyl_examples() {
        let d = 2;
        let mut rng = rng_stream(2, 0);
        let f = standard_test_function(d).unwrap();
        let pts = points(d, 2);
        let zero = weyl_apply(&WeylLabel::zero(d), &f).unwrap();
        assert!(pointwise_defect(&zero, &f, &pts).unwrap() < 1e-15);
        let p = random_label(&mut rng, d, 1.0);
        let one = ExpPolyForm::constant(d, C64::new(1.0, 0.0));
        let got = weyl_apply(&p, &one).unwrap();
        let ab = hs_inner(&p.p.a, &p.p.b).unwrap();
        for c in &pts {
            let want = (ab * 0.5 + hs_inner(c, &p.p.b).unwrap()).exp();
            assert!((evaluate(&got, c).unwrap() - want).norm() < 1e-12 * want.norm());
        }
    }

    #[test]
    fn commutation_defect_examples() {
        let d = 2;
        let pts = points(d, 3);
        let mut rng = rng_stream(3, 0);
        let p = random_label(&mut rng, d, 1.0);
        assert!(weyl_commutation_defect(&p, &p, &pts).unwrap() < 1e-14);
        let (z, e1, e2) = (HsElement::zero(d), HsElement::basis(d, 1), HsElement::basis(d, 2));
        let pa = WeylLabel::new(e1.clone(), z.clone()).unwrap();
        let pb = WeylLabel::new(z.clone(), e1.clone()).unwrap();
        assert!(weyl_commutation_defect(&pa, &pb, &pts).unwrap() < 1e-10);
        assert!((weyl_phase(&pa, &pb).unwrap() - C64::new(1f64.exp(), 0.0)).norm() < 1e-15);
        let q = WeylLabel::new(e2, z).unwrap();
        assert!(weyl_commutation_defect(&pa, &q, &pts).unwrap() < 1e-12);
        assert_eq!(weyl_phase(&pa, &q).unwrap(), C64::new(1.0, 0.0));
    }

    #[test]
    fn schrodinger_rep_examples() {
        let d = 2;
        let f = standard_test_function(d).unwrap();
        let pts = points(d, 4);
        let id = schrodinger_rep(&HeisenbergElement::identity(d), &f).unwrap();
        assert!(pointwise_defect(&id, &f, &pts).unwrap() < 1e-15);
        let t = C64::new(0.3, -0.7);
        let central = HeisenbergElement { t, ..HeisenbergElement::identity(d) };
        let got = schrodinger_rep(&central, &f).unwrap();
        assert!(pointwise_defect(&got, &f.scale(t.exp()), &pts).unwrap() < 1e-14);
    }

    #[test]
    fn generator_matches_finite_difference() {
        let d = 2;
        let mut rng = rng_stream(5, 0);
        let f = standard_test_function(d).unwrap();
        let pts = points(d, 5);
        assert!(generator_apply(&WeylLabel::zero(d), &f).unwrap().terms().is_empty());
        let p = random_label(&mut rng, d, 1.0);
        let h = 1e-4;
        let fd = weyl_apply(&p.scale(h), &f)
            .unwrap()
            .sub(&weyl_apply(&p.scale(-h), &f).unwrap())
            .unwrap()
            .scale(C64::new(0.5 / h, 0.0));
        assert!(pointwise_defect(&fd, &generator_apply(&p, &f).unwrap(), &pts).unwrap() < 1e-6);
    }

    #[test]
    fn relations_hold_on_random_labels() {
        for d in 1..=3 {
            let mut rng = rng_stream(6, d as u64);
            let pts = points(d, 6);
            let v = random_diagonal(&mut rng, d, 0.5);
            let battery = test_battery(d, &v).unwrap();
            let (p, q) = (random_label(&mut rng, d, 1.0), random_label(&mut rng, d, 1.0));
            let (x, y) = (random_heisenberg(&mut rng, d, 1.0), random_heisenberg(&mut rng, d, 1.0));
            for row in relation_rows(&p, &q, &x, &y, &battery, &pts).unwrap() {
                assert!(row.pass, "{row:?}");
            }
        }
    }

    #[test]
    fn one_parameter_group() {
        let d = 2;
        let mut rng = rng_stream(7, 0);
        let p = random_label(&mut rng, d, 1.0);
        let f = standard_test_function(d).unwrap();
        let pts = points(d, 7);
        for (t, s) in [(0.3, -0.5), (1.0, 0.3)] {
            let lhs = weyl_apply(&p.scale(t + s), &f).unwrap();
            let rhs = weyl_apply(&p.scale(t), &weyl_apply(&p.scale(s), &f).unwrap()).unwrap();
            assert!(pointwise_defect(&lhs, &rhs, &pts).unwrap() < 1e-10);
        }
    }

    #[test]
    fn irreducibility_spot() {
        let mut rng = rng_stream(8, 0);
        let p = random_label(&mut rng, 2, 1.0);
        assert!(irreducibility_spot_check(&p, 3).unwrap());
        assert!(!irreducibility_spot_check(&WeylLabel::zero(2), 3).unwrap());
    }
}
