use num_complex::Complex64 as C64;
use rand::Rng;
use serde_json::json;
use uinf_core::fock::{
    all_indices, annihilation_apply, coherent_state, creation_apply, exp_creation, fock_inner, FockMetric,
    FockVector,
};
use uinf_core::hardy_wiener::{
    annihilation_dictionary_defect, creation_dictionary_defect, fock_from_taylor, hardy_from_fock, hardy_norm_sqr,
    multiplication_intertwining_defect, shift_intertwining_defect, taylor_coefficients, WienerElement,
};
use uinf_core::hs_algebra::HsElement;
use uinf_core::mc_harness::{
    chain_vs_embed_rows, estimate_gamma_integral, experiment_ggauss, experiment_power_identity, experiment_pw_norm,
    experiment_schur_norms, experiment_schur_orthonormality, haar_moment_rows, pushforward_rows, rotation_rows,
    ExperimentReport, SamplingMode, SchurMode, SIGMA_BAND,
};
use uinf_core::partitions::{count_standard_tableaux_bruteforce, enumerate_partitions, hook_dimension, Alphabet, Partition};
use uinf_core::quadrature::{gaussian_even_moment, QuadratureRule};
use uinf_core::schrodinger::{
    hamiltonian_apply, hamiltonian_h_apply, schrodinger_residual, semigroup_defect, WeightedContext,
};
use uinf_core::schur::{frobenius_expansion, schur_bialternant, schur_tableau_sum};
use uinf_core::unitary::{haar_sample, livsic_project, paley_wiener_eval, rng_stream};
use uinf_core::weyl_heisenberg::{
    heisenberg_inv, heisenberg_mul, irreducibility_spot_check, pointwise_defect, random_diagonal, random_heisenberg,
    random_label, relation_rows, standard_test_function, test_battery, weyl_phase, HeisenbergElement, WeylLabel,
    RELATION_TOL,
};

use crate::config::{RunConfig, Suite};
use crate::report::{c, Row};
use crate::CliError;

pub const EXACT_TOL: f64 = 1e-12;
pub const POINTWISE_TOL: f64 = 1e-10;
pub const SCHUR_REL_TOL: f64 = 1e-9;
pub const SEMIGROUP_TOL: f64 = 1e-8;
pub const RESIDUAL_REL_TOL: f64 = 1e-4;
pub const MOMENT_TOL: f64 = 1e-10;

type Rows = Result<Vec<Row>, CliError>;

pub fn run_suite(cfg: &RunConfig) -> Rows {
    match cfg.suite {
        Suite::Combinatorics => combinatorics(cfg),
        Suite::Haar => haar(cfg),
        Suite::Fock => fock(cfg),
        Suite::Weyl => weyl(cfg),
        Suite::Schrodinger => schrodinger(cfg),
        Suite::Mc => mc(cfg),
    }
}

/// Samples of φ_𝔢₁ for the CSV sidecar, in estimator order.
pub fn csv_samples(cfg: &RunConfig) -> Result<Vec<C64>, CliError> {
    let e1 = HsElement::basis(cfg.dim, 1);
    let sampler = uinf_core::mc_harness::Sampler::new(cfg.level, cfg.mode);
    Ok(uinf_core::mc_harness::sample_values(
        |u| paley_wiener_eval(&e1, u).unwrap_or(C64::new(f64::NAN, f64::NAN)),
        sampler,
        cfg.samples,
        cfg.seed,
        900,
    )?)
}

fn unit_point<R: Rng>(rng: &mut R) -> C64 {
    C64::from_polar(rng.random_range(0.5..1.5), rng.random_range(-std::f64::consts::PI..std::f64::consts::PI))
}

fn combinatorics(cfg: &RunConfig) -> Rows {
    let mut rows = Vec::new();
    let max_n = (cfg.degree as usize).min(8);
    for n in 0..=max_n {
        let mut worst = 0usize;
        let parts = enumerate_partitions(n, None);
        for lambda in &parts {
            if hook_dimension(lambda)? != count_standard_tableaux_bruteforce(lambda)? {
                worst += 1;
            }
        }
        rows.push(Row::check(
            format!("hook_formula n={n}"),
            json!({"n": n, "partitions": parts.len()}),
            json!(worst),
            json!(0),
            worst == 0,
        ));
    }

    let mut rng = rng_stream(cfg.seed, 100);
    let max_l = cfg.dim.clamp(1, 4);
    let points = 100;
    for n in 1..=max_n.min(6) {
        for l in 1..=max_l {
            let mut route = 0.0f64;
            let mut frob = 0.0f64;
            let mut fallback = 0usize;
            let expansion = frobenius_expansion(n)?;
            for _ in 0..points {
                let t: Vec<C64> = (0..l).map(|_| unit_point(&mut rng)).collect();
                let abs: Vec<C64> = t.iter().map(|z| C64::new(z.norm(), 0.0)).collect();
                for lambda in enumerate_partitions(n, Some(l)) {
                    let tab = schur_tableau_sum(&lambda, &t)?;
                    let scale = schur_tableau_sum(&lambda, &abs)?.norm().max(f64::MIN_POSITIVE);
                    match schur_bialternant(&lambda, &t) {
                        Ok(b) => route = route.max((b - tab).norm() / scale),
                        Err(_) => fallback += 1,
                    }
                }
                let p1: C64 = t.iter().sum();
                let lhs = p1.powu(n as u32);
                let scale = abs.iter().sum::<C64>().norm().powi(n as i32);
                frob = frob.max((expansion.evaluate(&t)? - lhs).norm() / scale);
            }
            let params = json!({"n": n, "l": l, "points": points, "bialternant_fallbacks": fallback});
            rows.push(Row::bound(format!("schur_routes n={n} l={l}"), params.clone(), route, SCHUR_REL_TOL));
            rows.push(Row::bound(format!("frobenius n={n} l={l}"), params, frob, SCHUR_REL_TOL));
        }
    }
    Ok(rows)
}

fn experiments(rows: &mut Vec<Row>, reports: Vec<ExperimentReport>) {
    rows.extend(reports.iter().map(Row::from_experiment));
}

fn haar(cfg: &RunConfig) -> Rows {
    let (m, n, seed) = (cfg.level, cfg.samples, cfg.seed);
    let mode = if cfg.mode == SamplingMode::Chain { SamplingMode::Chain } else { SamplingMode::Embed };
    let mut rows = Vec::new();
    experiments(&mut rows, haar_moment_rows(m, n, mode, seed, 200)?);

    let checks = n.min(10_000);
    let mut rng = rng_stream(seed, 210);
    let (mut unit, mut livsic_unit, mut involution) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..checks {
        let u = haar_sample(m + 1, &mut rng)?;
        unit = unit.max(u.defect());
        let p = livsic_project(&u)?;
        livsic_unit = livsic_unit.max(p.defect());
        let pa = livsic_project(&u.adjoint())?;
        involution = involution.max((pa.entries() - p.adjoint().entries()).camax());
    }
    let params = json!({"m": m + 1, "samples": checks});
    rows.push(Row::bound("haar_unitarity", params.clone(), unit, POINTWISE_TOL));
    rows.push(Row::bound("livsic_unitarity", params.clone(), livsic_unit, POINTWISE_TOL));
    rows.push(Row::bound("livsic_involution", params, involution, POINTWISE_TOL));

    let small = m.min(3);
    experiments(&mut rows, pushforward_rows(small, n, seed, 220)?);
    experiments(&mut rows, chain_vs_embed_rows(small, n, seed, 230)?);
    experiments(&mut rows, rotation_rows(small, n, seed, 240)?);
    Ok(rows)
}

fn normalized<R: Rng>(rng: &mut R, d: usize, n: u32, metric: FockMetric) -> FockVector {
    let v = FockVector::random(d, n, rng).with_metric(metric);
    let s = 1.0 / v.norm();
    v.scale(C64::new(s, 0.0))
}

fn fock(cfg: &RunConfig) -> Rows {
    let mut rows = Vec::new();
    let metrics = [FockMetric::Weighted, FockMetric::Bargmann];

    let (d, n) = (cfg.dim.min(3), cfg.degree.min(5));
    for metric in metrics {
        let basis = all_indices(d + 1, n);
        let mut worst = 0.0f64;
        for k in 0..=d {
            let a = if k == 0 { HsElement::one(d) } else { HsElement::basis(d, k) };
            let vecs: Vec<FockVector> = basis
                .iter()
                .map(|i| Ok(FockVector::basis(d, n, i.clone())?.with_metric(metric)))
                .collect::<Result<_, CliError>>()?;
            let ups: Vec<FockVector> =
                vecs.iter().map(|v| Ok(creation_apply(&a, v)?.vector)).collect::<Result<_, CliError>>()?;
            let downs: Vec<FockVector> =
                vecs.iter().map(|v| Ok(annihilation_apply(&a, v)?)).collect::<Result<_, CliError>>()?;
            for (el, up) in vecs.iter().zip(&ups) {
                for (em, down) in vecs.iter().zip(&downs) {
                    let lhs = fock_inner(up, em)?;
                    let rhs = fock_inner(el, down)?;
                    worst = worst.max((lhs - rhs).norm() / rhs.norm().max(1.0));
                }
            }
        }
        let params = json!({"d": d, "N": n, "metric": metric.name(), "basis_size": basis.len()});
        rows.push(Row::bound("fock_adjointness", params, worst, EXACT_TOL));
    }

    let mut rng = rng_stream(cfg.seed, 300);
    let n_coh = cfg.degree.max(6);
    let mut coh = 0.0f64;
    for _ in 0..20 {
        let a = random_diagonal(&mut rng, cfg.dim, 0.5);
        let b = random_diagonal(&mut rng, cfg.dim, 0.5);
        let lhs = exp_creation(&b, &coherent_state(&a, n_coh)?)?.vector;
        coh = coh.max(lhs.max_abs_diff(&coherent_state(&(&a + &b), n_coh)?));
    }
    rows.push(Row::bound("coherent_shift", json!({"d": cfg.dim, "N": n_coh, "configs": 20}), coh, POINTWISE_TOL));

    let (dc, nc) = (cfg.dim.min(2), cfg.degree.min(5));
    for metric in metrics {
        let mut ratio = 0.0f64;
        for _ in 0..1000 {
            let psi = normalized(&mut rng, dc, nc, metric);
            let a = random_diagonal(&mut rng, dc, 1.0);
            let a = &a * (rng.random_range(0.0..2.0) / a.norm());
            ratio = ratio.max(exp_creation(&a, &psi)?.vector.norm() / a.norm().exp());
        }
        let params = json!({"d": dc, "N": nc, "metric": metric.name(), "vectors": 1000, "max_norm_a": 2.0});
        if metric == FockMetric::Weighted {
            rows.push(Row::bound("contraction_bound", params, ratio, 1.0));
        } else {
            rows.push(Row::diagnostic("contraction_bound", params, json!(ratio), json!(1.0)));
        }
    }

    let d = cfg.dim;
    let mut iso = 0.0f64;
    let mut round = 0.0f64;
    for metric in metrics {
        for _ in 0..10 {
            let psi = FockVector::random(d, cfg.degree, &mut rng).with_metric(metric);
            let f = hardy_from_fock(&psi);
            let hardy = hardy_norm_sqr(&f, cfg.degree, metric).sqrt();
            iso = iso.max((hardy - psi.norm()).abs() / psi.norm());
            let back = fock_from_taylor(&taylor_coefficients(&f, cfg.degree), d, cfg.degree, metric)?;
            round = round.max(back.max_abs_diff(&psi));
        }
    }
    rows.push(Row::bound("fock_hardy_isometry", json!({"d": d, "N": cfg.degree}), iso, EXACT_TOL));
    rows.push(Row::bound("taylor_round_trip", json!({"d": d, "N": cfg.degree}), round, EXACT_TOL));

    let mut single = 0.0f64;
    let mut general = 0.0f64;
    for _ in 0..10 {
        let x = unit_point(&mut rng) * 0.8;
        let k = rng.random_range(0..=d);
        let mut coords = vec![C64::new(0.0, 0.0); d + 1];
        coords[k] = x;
        let a = HsElement::diagonal(&coords);
        let want: f64 = (0..=cfg.degree).map(|j| x.norm().powi(2 * j as i32) / factorial(j).powi(2)).sum();
        single = single.max((coherent_state(&a, cfg.degree)?.norm().powi(2) - want).abs() / want);
        let g = random_diagonal(&mut rng, d, 0.5);
        let want: f64 = (0..=cfg.degree).map(|j| g.norm().powi(2 * j as i32) / factorial(j).powi(2)).sum();
        general = general.max(coherent_state(&g, cfg.degree)?.norm().powi(2) / want);
    }
    rows.push(Row::bound("coherent_norm single_letter", json!({"d": d, "N": cfg.degree}), single, EXACT_TOL));
    rows.push(Row::diagnostic(
        "coherent_norm general ratio",
        json!({"d": d, "N": cfg.degree}),
        json!(general),
        json!(1.0),
    ));

    rows.extend(intertwining(cfg)?);
    Ok(rows)
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Dictionary and intertwining identities over 20 random (ψ, a, points).
fn intertwining(cfg: &RunConfig) -> Rows {
    let d = cfg.dim.min(2);
    let cut = 20;
    let mut rng = rng_stream(cfg.seed, 310);
    let mut worst = [[0.0f64; 2]; 4];
    for _ in 0..20 {
        let a = random_diagonal(&mut rng, d, 0.4);
        let pts: Vec<HsElement> = (0..10).map(|_| random_diagonal(&mut rng, d, 0.5)).collect();
        for (mi, metric) in [FockMetric::Weighted, FockMetric::Bargmann].into_iter().enumerate() {
            let psi = normalized(&mut rng, d, 3, metric).with_degree_cut(cut);
            let f = WienerElement::new(psi.clone());
            let vals = [
                creation_dictionary_defect(&psi, &a, &pts)?,
                annihilation_dictionary_defect(&psi, &a, &pts)?,
                shift_intertwining_defect(&f, &a, 1, &pts)?,
                multiplication_intertwining_defect(&f, &a, 1, &pts)?,
            ];
            for (w, v) in worst.iter_mut().zip(vals) {
                w[mi] = w[mi].max(v);
            }
        }
    }
    let names = ["dictionary I T_b = M_b I", "dictionary I T*_a = T_a I", "intertwining shift (m=1)", "intertwining multiplication (m=1)"];
    let holds_weighted = [false, true, true, false];
    let mut rows = Vec::new();
    for ((name, w), ok_weighted) in names.iter().zip(worst).zip(holds_weighted) {
        for (mi, metric) in ["weighted", "bargmann"].into_iter().enumerate() {
            let params = json!({"d": d, "degree_cut": cut, "configs": 20, "metric": metric});
            if mi == 1 || ok_weighted {
                rows.push(Row::bound(*name, params, w[mi], POINTWISE_TOL));
            } else {
                rows.push(Row::diagnostic(*name, params, json!(w[mi]), json!(0.0)));
            }
        }
    }
    Ok(rows)
}

fn weyl(cfg: &RunConfig) -> Rows {
    let d = cfg.dim;
    let mut rng = rng_stream(cfg.seed, 400);
    let pts: Vec<HsElement> = (0..20).map(|_| random_diagonal(&mut rng, d, 0.7)).collect();
    let mut worst: Vec<(String, f64)> = Vec::new();
    for _ in 0..20 {
        let p = random_label(&mut rng, d, 0.6);
        let q = random_label(&mut rng, d, 0.6);
        let x = random_heisenberg(&mut rng, d, 0.6);
        let y = random_heisenberg(&mut rng, d, 0.6);
        let battery = test_battery(d, &random_diagonal(&mut rng, d, 0.5))?;
        for (i, r) in relation_rows(&p, &q, &x, &y, &battery, &pts)?.into_iter().enumerate() {
            if worst.len() <= i {
                worst.push((r.relation.clone(), 0.0));
            }
            worst[i].1 = worst[i].1.max(r.max_defect);
        }
    }
    let mut rows: Vec<Row> = worst
        .into_iter()
        .map(|(name, v)| Row::bound(name, json!({"d": d, "configs": 20, "points": pts.len()}), v, RELATION_TOL))
        .collect();

    let e1 = HsElement::basis(d, 1);
    let zero = HsElement::zero(d);
    let phase = weyl_phase(&WeylLabel::new(e1.clone(), zero.clone())?, &WeylLabel::new(zero.clone(), e1.clone())?)?;
    let want = C64::new(1f64.exp(), 0.0);
    rows.push(Row::check(
        "weyl_phase p=e1 p'=e1j",
        json!({"d": d}),
        c(phase),
        c(want),
        (phase - want).norm() <= EXACT_TOL,
    ));

    let mut inv = 0.0f64;
    for _ in 0..20 {
        let x = random_heisenberg(&mut rng, d, 1.0);
        let xi = heisenberg_inv(&x)?;
        inv = inv.max(heisenberg_mul(&x, &xi)?.max_abs_diff(&HeisenbergElement::identity(d)));
        inv = inv.max(heisenberg_inv(&xi)?.max_abs_diff(&x));
    }
    rows.push(Row::bound("heisenberg_inverse", json!({"d": d, "configs": 20}), inv, EXACT_TOL));

    let f = standard_test_function(d)?;
    let step = 1e-4;
    let mut fd = 0.0f64;
    for _ in 0..5 {
        let p = random_label(&mut rng, d, 0.6);
        let plus = uinf_core::weyl_heisenberg::weyl_apply(&p.scale(step), &f)?;
        let minus = uinf_core::weyl_heisenberg::weyl_apply(&p.scale(-step), &f)?;
        let diff = plus.sub(&minus)?.scale(C64::new(0.5 / step, 0.0));
        fd = fd.max(pointwise_defect(&diff, &uinf_core::weyl_heisenberg::generator_apply(&p, &f)?, &pts)?);
    }
    rows.push(Row::bound("generator_finite_difference", json!({"d": d, "step": step}), fd, 1e-6));

    let p = random_label(&mut rng, d, 0.6);
    let irreducible = irreducibility_spot_check(&p, 3)?;
    rows.push(Row::check("irreducibility_spot_check", json!({"d": d, "max_degree": 3}), json!(irreducible), json!(true), irreducible));
    Ok(rows)
}

fn schrodinger(cfg: &RunConfig) -> Rows {
    let d = cfg.dim.min(2);
    let q = cfg.quadrature;
    let ctx = WeightedContext::new(d);
    let rule = QuadratureRule::new(q)?;
    let mut rng = rng_stream(cfg.seed, 500);
    let pts: Vec<HsElement> = (0..8).map(|_| random_diagonal(&mut rng, d, 0.7)).collect();
    let battery = test_battery(d, &random_diagonal(&mut rng, d, 0.5))?;
    let mut rows = Vec::new();

    for r in [0.05, 0.1, 0.2] {
        let mut defect = 0.0f64;
        for f in &battery {
            defect = defect.max(semigroup_defect(&ctx, f, r, r, &rule, &pts)?);
        }
        let f = standard_test_function(d)?;
        let res = schrodinger_residual(&ctx, &f, r, 1e-4, &rule, &pts)?;
        let coarse = schrodinger_residual(&ctx, &f, r, 1e-3, &rule, &pts)?;
        let fine = schrodinger_residual(&ctx, &f, r, 5e-4, &rule, &pts)?;
        let order = (coarse.residual / fine.residual).log2();
        let params = json!({"r": r, "Q": q, "d": d, "residual": res.residual, "semigroup_defect": defect});
        rows.push(Row::bound(format!("semigroup_defect r=s={r}"), params.clone(), defect, SEMIGROUP_TOL));
        rows.push(Row::bound(
            format!("residual r={r} eps=1e-4"),
            params,
            res.residual / res.scale.max(1.0),
            RESIDUAL_REL_TOL,
        ));
        rows.push(Row::check(
            format!("residual_order r={r}"),
            json!({"r": r, "eps": [1e-3, 5e-4]}),
            json!(order),
            json!(2.0),
            (order - 2.0).abs() <= 0.25,
        ));
    }

    let mut worst = 0.0f64;
    for r in [0.1, 0.5, 1.0] {
        for k in 0..=4u32 {
            let got = rule.integrate(r, |t| t.powi(2 * k as i32));
            let want = gaussian_even_moment(k, r);
            worst = worst.max((got - want).abs() / want);
        }
    }
    rows.push(Row::bound("gaussian_moments n<=4", json!({"Q": q}), worst, MOMENT_TOL));

    let ctx1 = WeightedContext::new(1);
    let f1 = standard_test_function(1)?;
    let lhs = hamiltonian_h_apply(&ctx1, &f1)?.scale(C64::new(0.0, -1.0));
    let h_def = pointwise_defect(&lhs, &hamiltonian_apply(&ctx1, &f1, 2)?, &pts_for(1, cfg.seed))?;
    rows.push(Row::bound("hamiltonian_factorization", json!({"d": 1}), h_def, POINTWISE_TOL));
    Ok(rows)
}

fn pts_for(d: usize, seed: u64) -> Vec<HsElement> {
    let mut rng = rng_stream(seed, 510);
    (0..8).map(|_| random_diagonal(&mut rng, d, 0.7)).collect()
}

fn p(v: &[usize]) -> Partition {
    Partition::new(v.to_vec()).expect("valid partition")
}

fn mc(cfg: &RunConfig) -> Rows {
    let (m, n, seed, d) = (cfg.level, cfg.samples, cfg.seed, cfg.dim);
    let mut rows = Vec::new();
    let mut stream = 600u64;
    let mut next = || {
        stream += 2;
        stream
    };

    let e1 = HsElement::basis(d, 1);
    let est = estimate_gamma_integral(|u| paley_wiener_eval(&e1, u).unwrap(), m, n, cfg.mode, seed, next())?;
    let dist = est.sigma_distance(C64::new(0.0, 0.0));
    rows.push(Row::from_experiment(&ExperimentReport {
        name: "gamma_integral phi_e1".into(),
        parameters: json!({"m": m, "n": n}),
        estimate: Some(est),
        expected: Some(C64::new(0.0, 0.0)),
        sigma_distance: Some(dist),
        verdict: uinf_core::mc_harness::Verdict::from_bool(dist <= SIGMA_BAND),
    }));

    let eigen_pairs: [(&[usize], &[usize], usize); 4] =
        [(&[1], &[1], 1), (&[2], &[1, 1], 2), (&[2, 1], &[2, 1], 2), (&[2, 1], &[3], 3)];
    for (lam, mu, l) in eigen_pairs {
        let r = experiment_schur_orthonormality(&p(lam), &p(mu), &Alphabet::first(l), m, n, SchurMode::Eigen, seed, next())?;
        rows.push(Row::from_experiment(&r));
    }
    let r = experiment_schur_orthonormality(&p(&[1]), &p(&[1]), &Alphabet::first(1), m, n, SchurMode::Diag, seed, next())?;
    rows.push(Row::from_experiment(&r));

    let w = haar_sample(d, &mut rng_stream(seed, 690))?.into_entries();
    experiments(&mut rows, experiment_pw_norm(&e1, &w, m, n, seed, next())?);
    experiments(&mut rows, experiment_ggauss(&HsElement::zero(d), m, n, seed, next())?);
    experiments(&mut rows, experiment_ggauss(&e1, m, n, seed, next())?);

    rows.push(Row::from_experiment(&experiment_power_identity(&e1, &e1, 1, m, n, seed, next())?));
    rows.push(Row::from_experiment(&experiment_power_identity(&e1, &e1, 2, m, n, seed, next())?));
    if d >= 2 {
        let e2 = HsElement::basis(d, 2);
        rows.push(Row::from_experiment(&experiment_power_identity(&e1, &e2, 2, m, n, seed, next())?));
    }

    let norms: [(&[usize], Vec<usize>); 3] = [(&[], vec![]), (&[1], vec![1]), (&[2, 1], vec![1, 2])];
    for (lam, alpha) in norms {
        let lambda = if lam.is_empty() { Partition::empty() } else { p(lam) };
        let r = experiment_schur_norms(&lambda, &Alphabet::new(alpha)?, m, n, seed, next())?;
        rows.push(Row::from_experiment(&r));
    }
    Ok(rows)
}
