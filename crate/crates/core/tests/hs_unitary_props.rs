use nalgebra::DMatrix;
use proptest::prelude::*;
use uinf_core::hs_algebra::{hs_inner, im_pairing, HsElement, QuaternionPair};
use uinf_core::unitary::{
    haar_sample, livsic_chain, livsic_project, paley_wiener_eval, right_action, rng_stream, UnitaryMatrix, VirtualUnitary,
};
use uinf_core::C64;

fn element(d: usize) -> impl Strategy<Value = HsElement> {
    (prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), d * d + 1)).prop_map(move |v| {
        let unit = C64::new(v[0].0, v[0].1);
        let m = DMatrix::from_iterator(d, d, v[1..].iter().map(|&(re, im)| C64::new(re, im)));
        HsElement::new(unit, m).unwrap()
    })
}

fn scalar() -> impl Strategy<Value = C64> {
    (-2.0f64..2.0, -2.0f64..2.0).prop_map(|(re, im)| C64::new(re, im))
}

fn close(a: C64, b: C64, tol: f64) -> bool {
    (a - b).norm() <= tol * (1.0 + b.norm())
}

proptest! {
    #[test]
    fn conjugation_preserves_norm(a in element(3), seed in any::<u64>()) {
        let w = haar_sample(3, &mut rng_stream(seed, 0)).unwrap().into_entries();
        prop_assert!((a.conjugate_by(&w).unwrap().norm() - a.norm()).abs() <= 1e-12 * (1.0 + a.norm()));
        prop_assert_eq!(a.adjoint().norm(), a.norm());
    }

    #[test]
    fn inner_product_sesquilinearity(a in element(2), b in element(2), c in element(2), x in scalar(), y in scalar()) {
        let lhs = hs_inner(&(&(&a * x) + &(&b * y)), &c).unwrap();
        let rhs = x * hs_inner(&a, &c).unwrap() + y * hs_inner(&b, &c).unwrap();
        prop_assert!(close(lhs, rhs, 1e-12));
        let lhs = hs_inner(&c, &(&(&a * x) + &(&b * y))).unwrap();
        let rhs = x.conj() * hs_inner(&c, &a).unwrap() + y.conj() * hs_inner(&c, &b).unwrap();
        prop_assert!(close(lhs, rhs, 1e-12));
        prop_assert!(close(hs_inner(&a, &a).unwrap(), C64::new(a.norm_sqr(), 0.0), 1e-12));
    }

    #[test]
    fn im_pairing_is_real_bilinear_and_antisymmetric(
        a in element(2), b in element(2), a2 in element(2), b2 in element(2), a3 in element(2), b3 in element(2),
        s in -2.0f64..2.0, t in -2.0f64..2.0,
    ) {
        let p = QuaternionPair::new(a, b).unwrap();
        let q = QuaternionPair::new(a2, b2).unwrap();
        let r = QuaternionPair::new(a3, b3).unwrap();
        let pq = im_pairing(&p, &q).unwrap();
        prop_assert!(close(im_pairing(&q, &p).unwrap(), -pq, 1e-12));
        let combo = &p.scale(s) + &q.scale(t);
        let lhs = im_pairing(&combo, &r).unwrap();
        let rhs = im_pairing(&p, &r).unwrap() * s + im_pairing(&q, &r).unwrap() * t;
        prop_assert!(close(lhs, rhs, 1e-12));
        prop_assert!(im_pairing(&p, &p).unwrap().norm() <= 1e-12 * (1.0 + p.a.norm_sqr() + p.b.norm_sqr()));
    }

    #[test]
    fn livsic_preserves_unitarity_and_commutes_with_adjoint(m in 1usize..=6, seed in any::<u64>()) {
        let u = haar_sample(m + 1, &mut rng_stream(seed, 1)).unwrap();
        let p = livsic_project(&u).unwrap();
        prop_assert_eq!(p.m(), m);
        prop_assert!(p.defect() <= 1e-10);
        let pa = livsic_project(&u.adjoint()).unwrap();
        prop_assert!((pa.entries() - p.adjoint().entries()).camax() <= 1e-10);
    }

    #[test]
    fn descent_is_consistent(m in 2usize..=6, seed in any::<u64>()) {
        let u = haar_sample(m, &mut rng_stream(seed, 2)).unwrap();
        let v = VirtualUnitary::new(u.clone());
        for k in 1..=m {
            let direct = livsic_chain(&u, k).unwrap();
            prop_assert!((v.descent(k).unwrap().entries() - direct.entries()).camax() <= 1e-13);
        }
    }

    #[test]
    fn paley_wiener_is_conjugate_linear(a in element(2), b in element(2), x in scalar(), seed in any::<u64>()) {
        let u = VirtualUnitary::new(haar_sample(3, &mut rng_stream(seed, 3)).unwrap());
        let lhs = paley_wiener_eval(&(&(&a * x) + &b), &u).unwrap();
        let rhs = x.conj() * paley_wiener_eval(&a, &u).unwrap() + paley_wiener_eval(&b, &u).unwrap();
        prop_assert!(close(lhs, rhs, 1e-12));
    }

    #[test]
    fn right_action_stays_unitary(seed in any::<u64>()) {
        let mut rng = rng_stream(seed, 4);
        let u = VirtualUnitary::new(haar_sample(4, &mut rng).unwrap());
        let v = haar_sample(2, &mut rng).unwrap();
        let w = haar_sample(3, &mut rng).unwrap();
        let g = right_action(&u, &v, &w).unwrap();
        prop_assert!(g.top().defect() <= 1e-10);
        let id = right_action(&u, &UnitaryMatrix::identity(4), &UnitaryMatrix::identity(1)).unwrap();
        prop_assert!((id.top().entries() - u.top().entries()).camax() <= 1e-15);
    }
}

#[test]
fn unitarity_over_many_samples() {
    let mut rng = rng_stream(5, 0);
    for m in 1..=6 {
        let mut worst = 0.0f64;
        for _ in 0..10_000 {
            let u = haar_sample(m + 1, &mut rng).unwrap();
            worst = worst.max(livsic_project(&u).unwrap().defect());
        }
        assert!(worst <= 1e-10, "m={m}: {worst}");
    }
}

#[test]
fn livsic_branch_at_minus_one_corner() {
    let mut e = DMatrix::identity(3, 3).map(|x: f64| C64::new(x, 0.0));
    e[(2, 2)] = C64::new(-1.0, 0.0);
    let u = UnitaryMatrix::new(e).unwrap();
    let p = livsic_project(&u).unwrap();
    assert_eq!(p.entries(), &DMatrix::identity(2, 2).map(|x: f64| C64::new(x, 0.0)));
}
