//! Seeded Monte-Carlo estimation of integrals over virtual unitary matrices.
//!
//! Samples are split into fixed-size chunks; chunk `c` of a run with stream base
//! `s` draws from `rng_stream(seed, (s << 32) | c)`. Chunks run in parallel and
//! their accumulators are merged in chunk order, so results do not depend on
//! the thread count.

use nalgebra::{DMatrix, Schur};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::hs_algebra::HsElement;
use crate::partitions::{Alphabet, Partition};
use crate::schur::schur_tableau_sum;
use crate::unitary::{haar_sample, livsic_chain, livsic_project, paley_wiener_eval, rng_stream, VirtualUnitary};
use crate::C64;

pub const MIN_SAMPLES: usize = 1000;
pub const CHUNK: usize = 2048;
pub const SIGMA_BAND: f64 = 4.0;
/// Extra levels sampled above m in chain mode.
pub const CHAIN_EXTRA: usize = 3;
pub const STDERR_SCALING_TOL: f64 = 0.2;
/// Differences below this count as exact agreement regardless of σ.
pub const EXACT_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SamplingMode {
    Embed,
    Chain,
    Eigen,
}

impl SamplingMode {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "embed" => Ok(Self::Embed),
            "chain" => Ok(Self::Chain),
            "eigen" => Ok(Self::Eigen),
            _ => Err(Error::InvalidArgument(format!("unknown sampling mode {s:?}"))),
        }
    }
}

/// Streaming mean and variance of a complex quantity (componentwise Welford).
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Accumulator {
    n: u64,
    mean: [f64; 2],
    m2: [f64; 2],
}

impl Accumulator {
    pub fn push(&mut self, x: C64) {
        self.n += 1;
        let n = self.n as f64;
        for (i, v) in [x.re, x.im].into_iter().enumerate() {
            let delta = v - self.mean[i];
            self.mean[i] += delta / n;
            self.m2[i] += delta * (v - self.mean[i]);
        }
    }

    /// Chan et al. pairwise merge.
    pub fn merge(&self, o: &Self) -> Self {
        if self.n == 0 {
            return *o;
        }
        if o.n == 0 {
            return *self;
        }
        let n = self.n + o.n;
        let (na, nb, nf) = (self.n as f64, o.n as f64, n as f64);
        let mut out = Self { n, ..Default::default() };
        for i in 0..2 {
            let delta = o.mean[i] - self.mean[i];
            out.mean[i] = self.mean[i] + delta * nb / nf;
            out.m2[i] = self.m2[i] + o.m2[i] + delta * delta * na * nb / nf;
        }
        out
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn estimate(&self, mode: SamplingMode) -> Estimate {
        let n = self.n as f64;
        let var = |i: usize| if self.n > 1 { self.m2[i] / (n - 1.0) } else { 0.0 };
        let (se_re, se_im) = ((var(0) / n).sqrt(), (var(1) / n).sqrt());
        Estimate {
            mean: C64::new(self.mean[0], self.mean[1]),
            stderr: se_re.hypot(se_im),
            stderr_re: se_re,
            stderr_im: se_im,
            n_samples: self.n,
            mode,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Estimate {
    #[serde(serialize_with = "ser_c64")]
    pub mean: C64,
    /// √(s²_re + s²_im)/√n.
    pub stderr: f64,
    pub stderr_re: f64,
    pub stderr_im: f64,
    pub n_samples: u64,
    pub mode: SamplingMode,
}

pub fn ser_c64<S: serde::Serializer>(z: &C64, s: S) -> std::result::Result<S::Ok, S::Error> {
    [z.re, z.im].serialize(s)
}

fn ser_opt_c64<S: serde::Serializer>(z: &Option<C64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    z.map(|z| [z.re, z.im]).serialize(s)
}

fn component_distance(delta: f64, sigma: f64) -> f64 {
    if delta.abs() <= EXACT_TOL {
        0.0
    } else if sigma > 0.0 {
        delta.abs() / sigma
    } else {
        f64::INFINITY
    }
}

impl Estimate {
    /// Exact value with zero error, used for constant integrands.
    pub fn exact(mean: C64, n: u64, mode: SamplingMode) -> Self {
        Self { mean, stderr: 0.0, stderr_re: 0.0, stderr_im: 0.0, n_samples: n, mode }
    }

    /// max over components of |mean − expected|/stderr.
    pub fn sigma_distance(&self, expected: C64) -> f64 {
        let d = self.mean - expected;
        component_distance(d.re, self.stderr_re).max(component_distance(d.im, self.stderr_im))
    }

    /// Componentwise distance between two independent estimates.
    pub fn sigma_distance_to(&self, other: &Estimate) -> f64 {
        let d = self.mean - other.mean;
        component_distance(d.re, self.stderr_re.hypot(other.stderr_re))
            .max(component_distance(d.im, self.stderr_im.hypot(other.stderr_im)))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Diagnostic,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Self::Pass
        } else {
            Self::Fail
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ExperimentReport {
    pub name: String,
    pub parameters: Value,
    pub estimate: Option<Estimate>,
    #[serde(serialize_with = "ser_opt_c64")]
    pub expected: Option<C64>,
    pub sigma_distance: Option<f64>,
    pub verdict: Verdict,
}

impl ExperimentReport {
    fn banded(name: &str, parameters: Value, est: Estimate, expected: C64, guaranteed: bool) -> Self {
        let dist = est.sigma_distance(expected);
        let verdict = if guaranteed { Verdict::from_bool(dist <= SIGMA_BAND) } else { Verdict::Diagnostic };
        Self {
            name: name.into(),
            parameters,
            estimate: Some(est),
            expected: Some(expected),
            sigma_distance: Some(dist),
            verdict,
        }
    }
}

/// How virtual unitaries are drawn.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sampler {
    pub m: usize,
    pub mode: SamplingMode,
    /// Multiply every sample by an independent uniform phase e^{iθ}.
    pub rotate: bool,
}

impl Sampler {
    pub fn new(m: usize, mode: SamplingMode) -> Self {
        Self { m, mode, rotate: false }
    }

    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<VirtualUnitary> {
        let mut u = match self.mode {
            SamplingMode::Embed | SamplingMode::Eigen => haar_sample(self.m, rng)?,
            SamplingMode::Chain => livsic_chain(&haar_sample(self.m + CHAIN_EXTRA, rng)?, self.m)?,
        };
        if self.rotate {
            let theta: f64 = rng.random_range(-std::f64::consts::PI..std::f64::consts::PI);
            u = u.rotate(C64::from_polar(1.0, theta));
        }
        Ok(VirtualUnitary::new(u))
    }
}

fn chunk_stream(stream: u64, chunk: usize) -> u64 {
    (stream << 32) | chunk as u64
}

/// Estimates E[f_i(𝔲)] for every output of `f` from one set of n samples.
pub fn estimate_many<F>(f: F, k: usize, sampler: Sampler, n: usize, seed: u64, stream: u64) -> Result<Vec<Estimate>>
where
    F: Fn(&VirtualUnitary) -> Vec<C64> + Sync,
{
    if n < MIN_SAMPLES {
        return Err(Error::InvalidArgument(format!("n = {n} below minimum {MIN_SAMPLES}")));
    }
    if sampler.m == 0 {
        return Err(Error::InvalidArgument("level m must be ≥ 1".into()));
    }
    let chunks = n.div_ceil(CHUNK);
    let partial: Vec<Result<Vec<Accumulator>>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = rng_stream(seed, chunk_stream(stream, c));
            let mut accs = vec![Accumulator::default(); k];
            let len = CHUNK.min(n - c * CHUNK);
            for _ in 0..len {
                let u = sampler.draw(&mut rng)?;
                for (acc, v) in accs.iter_mut().zip(f(&u)) {
                    acc.push(v);
                }
            }
            Ok(accs)
        })
        .collect();
    let mut total = vec![Accumulator::default(); k];
    for p in partial {
        for (t, a) in total.iter_mut().zip(p?) {
            *t = t.merge(&a);
        }
    }
    Ok(total.iter().map(|a| a.estimate(sampler.mode)).collect())
}

pub fn estimate_gamma_integral<F>(f: F, m: usize, n: usize, mode: SamplingMode, seed: u64, stream: u64) -> Result<Estimate>
where
    F: Fn(&VirtualUnitary) -> C64 + Sync,
{
    Ok(estimate_many(|u| vec![f(u)], 1, Sampler::new(m, mode), n, seed, stream)?[0])
}

/// Per-sample values in the same order the estimator consumes them.
pub fn sample_values<F>(f: F, sampler: Sampler, n: usize, seed: u64, stream: u64) -> Result<Vec<C64>>
where
    F: Fn(&VirtualUnitary) -> C64 + Sync,
{
    let chunks = n.div_ceil(CHUNK);
    let parts: Vec<Result<Vec<C64>>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = rng_stream(seed, chunk_stream(stream, c));
            let len = CHUNK.min(n - c * CHUNK);
            (0..len).map(|_| Ok(f(&sampler.draw(&mut rng)?))).collect()
        })
        .collect();
    let mut out = Vec::with_capacity(n);
    for p in parts {
        out.extend(p?);
    }
    Ok(out)
}

/// Eigenvalues of a square complex matrix from its complex Schur form.
pub fn eigenvalues(m: &DMatrix<C64>) -> Vec<C64> {
    if m.nrows() == 1 {
        return vec![m[(0, 0)]];
    }
    let (_, t) = Schur::new(m.clone()).unpack();
    (0..t.nrows()).map(|i| t[(i, i)]).collect()
}

/// φ_k(𝔲): 1 for the unit letter, u_kk otherwise.
fn diag_phi(u: &VirtualUnitary, k: usize) -> C64 {
    if k == 0 {
        C64::new(1.0, 0.0)
    } else {
        u.top().entries()[(k - 1, k - 1)]
    }
}

fn check_level(m: usize, alphabet: &Alphabet) -> Result<()> {
    if alphabet.indices().last().is_some_and(|&k| k > m) {
        return Err(Error::Dimension(format!("alphabet letter exceeds level m = {m}")));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SchurMode {
    Diag,
    Eigen,
}

/// ⟨s^λ_ı, s^μ_ı⟩ by Monte Carlo. Eigen mode evaluates at the eigenvalues of a
/// Haar U(l) matrix (pass/fail against δ_λμ); diag mode evaluates at the
/// diagonal entries u_{ı_k ı_k} of a level-m sample (diagnostic).
#[allow(clippy::too_many_arguments)]
pub fn experiment_schur_orthonormality(
    lambda: &Partition,
    mu: &Partition,
    alphabet: &Alphabet,
    m: usize,
    n: usize,
    mode: SchurMode,
    seed: u64,
    stream: u64,
) -> Result<ExperimentReport> {
    let l = alphabet.len();
    if lambda.weight() > 5 || mu.weight() > 5 || l > 3 || l == 0 {
        return Err(Error::Size("Schur orthonormality limited to |λ|,|μ| ≤ 5 and 1 ≤ l ≤ 3".into()));
    }
    let expected = C64::new(if lambda == mu { 1.0 } else { 0.0 }, 0.0);
    let params = json!({
        "lambda": lambda.to_string(), "mu": mu.to_string(),
        "alphabet": alphabet.indices(), "m": m, "n": n,
        "mode": if mode == SchurMode::Eigen { "eigen" } else { "diag" },
    });
    let pair = |t: &[C64]| -> C64 {
        let a = schur_tableau_sum(lambda, t).unwrap_or_default();
        let b = schur_tableau_sum(mu, t).unwrap_or_default();
        a * b.conj()
    };
    match mode {
        SchurMode::Eigen => {
            let est = estimate_many(
                |u| vec![pair(&eigenvalues(u.top().entries()))],
                1,
                Sampler::new(l, SamplingMode::Eigen),
                n,
                seed,
                stream,
            )?[0];
            Ok(ExperimentReport::banded("schur_orthonormality_eigen", params, est, expected, true))
        }
        SchurMode::Diag => {
            check_level(m, alphabet)?;
            let est = estimate_gamma_integral(
                |u| {
                    let t: Vec<C64> = alphabet.indices().iter().map(|&k| diag_phi(u, k)).collect();
                    pair(&t)
                },
                m,
                n,
                SamplingMode::Embed,
                seed,
                stream,
            )?;
            Ok(ExperimentReport::banded("schur_orthonormality_diag", params, est, expected, false))
        }
    }
}

/// ∫|φ_a|² against ‖a‖² (diagnostic) and its invariance under a ↦ w*aw
/// (pass/fail, a consequence of Haar invariance).
pub fn experiment_pw_norm(
    a: &HsElement,
    w: &DMatrix<C64>,
    m: usize,
    n: usize,
    seed: u64,
    stream: u64,
) -> Result<Vec<ExperimentReport>> {
    if a.d() > m {
        return Err(Error::Dimension(format!("d = {} exceeds level m = {m}", a.d())));
    }
    let b = a.conjugate_by(w)?;
    let norm_of = |x: &HsElement, s: u64| {
        estimate_gamma_integral(
            |u| C64::new(paley_wiener_eval(x, u).map(|z| z.norm_sqr()).unwrap_or(f64::NAN), 0.0),
            m,
            n,
            SamplingMode::Embed,
            seed,
            s,
        )
    };
    let ea = norm_of(a, stream)?;
    let eb = norm_of(&b, stream + 1)?;
    let params = json!({"a_norm": a.norm(), "m": m, "n": n});
    let main = ExperimentReport::banded("pw_norm", params.clone(), ea, C64::new(a.norm_sqr(), 0.0), false);
    let dist = ea.sigma_distance_to(&eb);
    let inv = ExperimentReport {
        name: "pw_norm_conjugation_invariance".into(),
        parameters: params,
        estimate: Some(eb),
        expected: Some(ea.mean),
        sigma_distance: Some(dist),
        verdict: Verdict::from_bool(dist <= SIGMA_BAND),
    };
    Ok(vec![main, inv])
}

/// ∫exp(ℜφ_a) against exp(‖a‖²/4) (diagnostic), plus the CLT self-test that
/// doubling n shrinks the stderr by √2 within 20% (pass/fail).
pub fn experiment_ggauss(a: &HsElement, m: usize, n: usize, seed: u64, stream: u64) -> Result<Vec<ExperimentReport>> {
    if a.d() > m {
        return Err(Error::Dimension(format!("d = {} exceeds level m = {m}", a.d())));
    }
    let f = |u: &VirtualUnitary| C64::new(paley_wiener_eval(a, u).map(|z| z.re.exp()).unwrap_or(f64::NAN), 0.0);
    let e1 = estimate_gamma_integral(f, m, n, SamplingMode::Embed, seed, stream)?;
    let e2 = estimate_gamma_integral(f, m, 2 * n, SamplingMode::Embed, seed, stream + 1)?;
    let params = json!({"a_norm": a.norm(), "m": m, "n": n});
    let expected = C64::new((a.norm_sqr() / 4.0).exp(), 0.0);
    let main = ExperimentReport::banded("ggauss", params, e1, expected, false);
    let (ratio, ok) = if e1.stderr == 0.0 && e2.stderr == 0.0 {
        (std::f64::consts::SQRT_2, true)
    } else {
        let r = e1.stderr / e2.stderr;
        (r, (r / std::f64::consts::SQRT_2 - 1.0).abs() <= STDERR_SCALING_TOL)
    };
    let scaling = ExperimentReport {
        name: "stderr_scaling".into(),
        parameters: json!({"n": n, "n2": 2 * n, "stderr_n": e1.stderr, "stderr_2n": e2.stderr}),
        estimate: Some(Estimate::exact(C64::new(ratio, 0.0), (3 * n) as u64, SamplingMode::Embed)),
        expected: Some(C64::new(std::f64::consts::SQRT_2, 0.0)),
        sigma_distance: None,
        verdict: Verdict::from_bool(ok),
    };
    Ok(vec![main, scaling])
}

/// ∫φ_a^k φ̄_b^k against (∫φ_a φ̄_b)^k with propagated errors; k = 1 is a
/// tautology (pass), larger k diagnostic.
pub fn experiment_power_identity(
    a: &HsElement,
    b: &HsElement,
    k: u32,
    m: usize,
    n: usize,
    seed: u64,
    stream: u64,
) -> Result<ExperimentReport> {
    if k == 0 || k > 4 {
        return Err(Error::Size(format!("power k = {k} outside 1..=4")));
    }
    if a.d() > m || b.d() > m {
        return Err(Error::Dimension("element dimension exceeds level".into()));
    }
    let prod = |u: &VirtualUnitary, p: u32| -> C64 {
        match (paley_wiener_eval(a, u), paley_wiener_eval(b, u)) {
            (Ok(x), Ok(y)) => (x * y.conj()).powu(p),
            _ => C64::new(f64::NAN, f64::NAN),
        }
    };
    let lhs = estimate_gamma_integral(|u| prod(u, k), m, n, SamplingMode::Embed, seed, stream)?;
    let base_stream = if k == 1 { stream } else { stream + 1 };
    let base = estimate_gamma_integral(|u| prod(u, 1), m, n, SamplingMode::Embed, seed, base_stream)?;
    let rhs = base.mean.powu(k);
    let prop = k as f64 * base.mean.norm().powi(k as i32 - 1);
    let (sr, si) = (lhs.stderr_re.hypot(prop * base.stderr), lhs.stderr_im.hypot(prop * base.stderr));
    let d = lhs.mean - rhs;
    let dist = component_distance(d.re, sr).max(component_distance(d.im, si));
    let verdict = if k == 1 { Verdict::from_bool(dist <= SIGMA_BAND) } else { Verdict::Diagnostic };
    Ok(ExperimentReport {
        name: "power_identity".into(),
        parameters: json!({"k": k, "a_norm": a.norm(), "b_norm": b.norm(), "m": m, "n": n}),
        estimate: Some(lhs),
        expected: Some(rhs),
        sigma_distance: Some(dist),
        verdict,
    })
}

/// ∫|φ^λ_ı|² against (λ!/|λ|!)² (diagnostic).
pub fn experiment_schur_norms(lambda: &Partition, alphabet: &Alphabet, m: usize, n: usize, seed: u64, stream: u64) -> Result<ExperimentReport> {
    if lambda.len() != alphabet.len() {
        return Err(Error::Dimension("alphabet length must equal partition length".into()));
    }
    if lambda.weight() > 8 {
        return Err(Error::Size("schur norms limited to |λ| ≤ 8".into()));
    }
    check_level(m, alphabet)?;
    let lf: f64 = lambda.factorial().to_string().parse().unwrap();
    let nf: f64 = crate::partitions::factorial(lambda.weight()).to_string().parse().unwrap();
    let expected = C64::new((lf / nf).powi(2), 0.0);
    let est = estimate_gamma_integral(
        |u| {
            let v: C64 = alphabet
                .indices()
                .iter()
                .zip(lambda.parts())
                .map(|(&k, &p)| diag_phi(u, k).powu(p as u32))
                .product();
            C64::new(v.norm_sqr(), 0.0)
        },
        m,
        n,
        SamplingMode::Embed,
        seed,
        stream,
    )?;
    let params = json!({"lambda": lambda.to_string(), "alphabet": alphabet.indices(), "m": m, "n": n});
    Ok(ExperimentReport::banded("schur_norms", params, est, expected, false))
}

/// Haar moments E[u_jk conj(u_j′k′)] = δδ/m (all second moments of row 1 and
/// column 1 plus every E|u_jk|²) and the fourth moments E|u₁₁|⁴, E|u₁₁|²|u₂₂|²,
/// E|u₁₁|²|u₁₂|², each within 4σ.
pub fn haar_moment_rows(m: usize, n: usize, mode: SamplingMode, seed: u64, stream: u64) -> Result<Vec<ExperimentReport>> {
    let mut keys: Vec<(usize, usize, usize, usize)> = Vec::new();
    for j in 0..m {
        for k in 0..m {
            keys.push((j, k, j, k));
        }
    }
    for k in 1..m {
        keys.push((0, 0, 0, k));
        keys.push((0, 0, k, 0));
        keys.push((0, k, k, 0));
    }
    let mf = m as f64;
    let mut fourth: Vec<(&str, f64)> = vec![("|u11|^4", 2.0 / (mf * (mf + 1.0)))];
    if m >= 2 {
        fourth.push(("|u11|^2|u22|^2", 1.0 / (mf * mf - 1.0)));
        fourth.push(("|u11|^2|u12|^2", 1.0 / (mf * (mf + 1.0))));
    }
    let nk = keys.len();
    let ests = estimate_many(
        |u| {
            let e = u.top().entries();
            let mut out: Vec<C64> = keys.iter().map(|&(a, b, c, d)| e[(a, b)] * e[(c, d)].conj()).collect();
            out.push(C64::new(e[(0, 0)].norm_sqr().powi(2), 0.0));
            if m >= 2 {
                out.push(C64::new(e[(0, 0)].norm_sqr() * e[(1, 1)].norm_sqr(), 0.0));
                out.push(C64::new(e[(0, 0)].norm_sqr() * e[(0, 1)].norm_sqr(), 0.0));
            }
            out
        },
        nk + fourth.len(),
        Sampler::new(m, mode),
        n,
        seed,
        stream,
    )?;
    let mut rows = Vec::new();
    for (i, &(a, b, c, d)) in keys.iter().enumerate() {
        let expected = if a == c && b == d { 1.0 / mf } else { 0.0 };
        let name = format!("haar_moment u{}{}*conj(u{}{})", a + 1, b + 1, c + 1, d + 1);
        rows.push(ExperimentReport::banded(&name, json!({"m": m, "n": n}), ests[i], C64::new(expected, 0.0), true));
    }
    for (j, (label, want)) in fourth.iter().enumerate() {
        let name = format!("haar_moment {label}");
        rows.push(ExperimentReport::banded(&name, json!({"m": m, "n": n}), ests[nk + j], C64::new(*want, 0.0), true));
    }
    Ok(rows)
}

/// Entry means and second absolute moments of livsic_project(Haar U(m+1))
/// against Haar U(m), each compared within combined 4σ.
pub fn pushforward_rows(m: usize, n: usize, seed: u64, stream: u64) -> Result<Vec<ExperimentReport>> {
    let k = 2 * m * m;
    let stats = |u: &DMatrix<C64>| -> Vec<C64> {
        let mut out = Vec::with_capacity(k);
        for j in 0..m {
            for l in 0..m {
                out.push(u[(j, l)]);
                out.push(C64::new(u[(j, l)].norm_sqr(), 0.0));
            }
        }
        out
    };
    let direct = estimate_many(|u| stats(u.top().entries()), k, Sampler::new(m, SamplingMode::Embed), n, seed, stream)?;
    let projected = estimate_many(
        |u| match livsic_project(u.top()) {
            Ok(p) => stats(p.entries()),
            Err(_) => vec![C64::new(f64::NAN, 0.0); k],
        },
        k,
        Sampler::new(m + 1, SamplingMode::Embed),
        n,
        seed,
        stream + 1,
    )?;
    let mut rows = Vec::new();
    for j in 0..m {
        for l in 0..m {
            for (o, what) in ["mean", "abs2"].iter().enumerate() {
                let i = 2 * (j * m + l) + o;
                let dist = projected[i].sigma_distance_to(&direct[i]);
                rows.push(ExperimentReport {
                    name: format!("pushforward {what} u{}{}", j + 1, l + 1),
                    parameters: json!({"m": m, "n": n}),
                    estimate: Some(projected[i]),
                    expected: Some(direct[i].mean),
                    sigma_distance: Some(dist),
                    verdict: Verdict::from_bool(dist <= SIGMA_BAND),
                });
            }
        }
    }
    Ok(rows)
}

/// Cylinder integrands used for the chain-vs-embed and rotation comparisons.
fn cylinder_stats(u: &VirtualUnitary) -> Vec<C64> {
    let e = u.top().entries();
    let m = e.nrows();
    let tr: C64 = (0..m).map(|i| e[(i, i)]).sum();
    let mut out = vec![e[(0, 0)], C64::new(e[(0, 0)].norm_sqr(), 0.0), C64::new(e[(0, 0)].norm_sqr().powi(2), 0.0)];
    out.push(C64::new(tr.norm_sqr(), 0.0));
    if m >= 2 {
        out.push(e[(0, 1)] * e[(1, 0)].conj());
        out.push(e[(0, 0)] * e[(1, 1)]);
    }
    out
}

const CYLINDER_NAMES: [&str; 6] = ["u11", "|u11|^2", "|u11|^4", "|tr u|^2", "u12*conj(u21)", "u11*u22"];

fn compare_rows(prefix: &str, a: &[Estimate], b: &[Estimate], params: Value) -> Vec<ExperimentReport> {
    a.iter()
        .zip(b)
        .zip(CYLINDER_NAMES)
        .map(|((x, y), label)| {
            let dist = x.sigma_distance_to(y);
            ExperimentReport {
                name: format!("{prefix} {label}"),
                parameters: params.clone(),
                estimate: Some(*x),
                expected: Some(y.mean),
                sigma_distance: Some(dist),
                verdict: Verdict::from_bool(dist <= SIGMA_BAND),
            }
        })
        .collect()
}

/// Chain mode from level m + 3 against embed mode at level m.
pub fn chain_vs_embed_rows(m: usize, n: usize, seed: u64, stream: u64) -> Result<Vec<ExperimentReport>> {
    let k = if m >= 2 { 6 } else { 4 };
    let chain = estimate_many(cylinder_stats, k, Sampler::new(m, SamplingMode::Chain), n, seed, stream)?;
    let embed = estimate_many(cylinder_stats, k, Sampler::new(m, SamplingMode::Embed), n, seed, stream + 1)?;
    Ok(compare_rows("chain_vs_embed", &chain, &embed, json!({"m": m, "M": m + CHAIN_EXTRA, "n": n})))
}

/// Phase-rotated samples against unrotated samples, restricted to
/// rotation-invariant integrands.
pub fn rotation_rows(m: usize, n: usize, seed: u64, stream: u64) -> Result<Vec<ExperimentReport>> {
    let k = if m >= 2 { 6 } else { 4 };
    let rotated = estimate_many(cylinder_stats, k, Sampler { m, mode: SamplingMode::Embed, rotate: true }, n, seed, stream)?;
    let plain = estimate_many(cylinder_stats, k, Sampler::new(m, SamplingMode::Embed), n, seed, stream + 1)?;
    Ok(compare_rows("rotation_invariance", &rotated, &plain, json!({"m": m, "n": n})))
}
