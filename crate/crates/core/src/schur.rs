//! Schur polynomials by the bialternant and by semistandard tableaux, and the
//! Frobenius expansion of p₁ⁿ.

use num_bigint::BigUint;
use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::partitions::{enumerate_partitions, hook_dimension, semistandard_tableaux, Partition};
use crate::C64;

pub const COINCIDENCE_THRESHOLD: f64 = 1e-6;
pub const FROBENIUS_MAX_DEGREE: usize = 8;

#[derive(Clone, Debug, PartialEq)]
pub struct SchurEvaluation {
    pub shape: Partition,
    pub point: Vec<C64>,
    pub value: C64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrobeniusExpansion {
    pub degree: usize,
    pub terms: BTreeMap<Partition, BigUint>,
}

/// Determinant by Gaussian elimination with partial pivoting.
pub fn determinant(mut a: Vec<Vec<C64>>) -> C64 {
    let n = a.len();
    let mut det = C64::new(1.0, 0.0);
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| a[i][col].norm().total_cmp(&a[j][col].norm()))
            .unwrap();
        if a[piv][col].norm() == 0.0 {
            return C64::new(0.0, 0.0);
        }
        if piv != col {
            a.swap(piv, col);
            det = -det;
        }
        let p = a[col][col];
        det *= p;
        for r in col + 1..n {
            let f = a[r][col] / p;
            if f.norm() == 0.0 {
                continue;
            }
            for c in col..n {
                let sub = f * a[col][c];
                a[r][c] -= sub;
            }
        }
    }
    det
}

/// s_λ(t) = det[tᵢ^{λⱼ+l−j}] / ∏_{i<j}(tᵢ − tⱼ).
pub fn schur_bialternant(lambda: &Partition, t: &[C64]) -> Result<C64> {
    let l = t.len();
    if l < lambda.len() {
        return Err(Error::Dimension(format!("point length {l} < partition length {}", lambda.len())));
    }
    if l == 0 {
        return Ok(C64::new(1.0, 0.0));
    }
    let scale = t.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let mut sep = f64::INFINITY;
    for i in 0..l {
        for j in i + 1..l {
            sep = sep.min((t[i] - t[j]).norm());
        }
    }
    let threshold = COINCIDENCE_THRESHOLD * scale;
    if l > 1 && sep < threshold {
        return Err(Error::NearCoincident { separation: sep, threshold });
    }
    let alt = |exps: &dyn Fn(usize) -> usize| -> Vec<Vec<C64>> {
        (0..l).map(|i| (0..l).map(|j| t[i].powu(exps(j) as u32)).collect()).collect()
    };
    let num = determinant(alt(&|j| lambda.part(j) + l - 1 - j));
    let mut vander = C64::new(1.0, 0.0);
    for i in 0..l {
        for j in i + 1..l {
            vander *= t[i] - t[j];
        }
    }
    Ok(num / vander)
}

/// Σ over semistandard tableaux of ∏ t^{content}.
pub fn schur_tableau_sum(lambda: &Partition, t: &[C64]) -> Result<C64> {
    let l = t.len();
    let tabs = semistandard_tableaux(lambda, l)?;
    let mut acc = C64::new(0.0, 0.0);
    for tab in &tabs {
        let c = tab.content(l);
        acc += c
            .iter()
            .zip(t)
            .fold(C64::new(1.0, 0.0), |m, (&k, z)| m * z.powu(k as u32));
    }
    Ok(acc)
}

pub fn evaluate(lambda: &Partition, t: &[C64]) -> Result<SchurEvaluation> {
    let value = match schur_bialternant(lambda, t) {
        Ok(v) => v,
        Err(Error::NearCoincident { .. }) => schur_tableau_sum(lambda, t)?,
        Err(e) => return Err(e),
    };
    Ok(SchurEvaluation { shape: lambda.clone(), point: t.to_vec(), value })
}

/// p₁ⁿ = Σ_{λ⊢n} ħ_λ s_λ.
pub fn frobenius_expansion(n: usize) -> Result<FrobeniusExpansion> {
    if n > FROBENIUS_MAX_DEGREE {
        return Err(Error::Size(format!("degree {n} > {FROBENIUS_MAX_DEGREE}")));
    }
    let mut terms = BTreeMap::new();
    for lambda in enumerate_partitions(n, None) {
        let h = hook_dimension(&lambda)?;
        terms.insert(lambda, h);
    }
    Ok(FrobeniusExpansion { degree: n, terms })
}

impl FrobeniusExpansion {
    /// Σ ħ_λ s_λ(t) via the tableau route.
    pub fn evaluate(&self, t: &[C64]) -> Result<C64> {
        let mut acc = C64::new(0.0, 0.0);
        for (lambda, h) in &self.terms {
            let h: f64 = h.to_string().parse().unwrap();
            acc += schur_tableau_sum(lambda, t)? * h;
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[usize]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn bialternant_examples() {
        let z = c(0.3, -1.2);
        assert!((schur_bialternant(&p(&[1]), &[z]).unwrap() - z).norm() < 1e-15);
        let v = schur_bialternant(&p(&[2, 1]), &[c(2.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert!((v - c(6.0, 0.0)).norm() < 1e-12);
        let e = schur_bialternant(&p(&[2]), &[c(1.0, 0.0), c(1.0 + 1e-14, 0.0)]);
        assert!(matches!(e, Err(Error::NearCoincident { .. })));
    }

    #[test]
    fn tableau_sum_examples() {
        let (a, b) = (c(1.5, 0.5), c(-0.7, 2.0));
        assert!((schur_tableau_sum(&p(&[1, 1]), &[a, b]).unwrap() - a * b).norm() < 1e-14);
        let ones = [c(1.0, 0.0), c(1.0, 0.0)];
        assert_eq!(schur_tableau_sum(&p(&[2]), &ones).unwrap(), c(3.0, 0.0));
        assert_eq!(schur_tableau_sum(&p(&[2, 1]), &ones).unwrap(), c(2.0, 0.0));
    }

    #[test]
    fn frobenius_examples() {
        let two = frobenius_expansion(2).unwrap();
        assert_eq!(two.terms.len(), 2);
        assert_eq!(two.terms[&p(&[2])], BigUint::from(1u8));
        assert_eq!(two.terms[&p(&[1, 1])], BigUint::from(1u8));
        let three = frobenius_expansion(3).unwrap();
        assert_eq!(three.terms[&p(&[3])], BigUint::from(1u8));
        assert_eq!(three.terms[&p(&[2, 1])], BigUint::from(2u8));
        assert_eq!(three.terms[&p(&[1, 1, 1])], BigUint::from(1u8));
        let zero = frobenius_expansion(0).unwrap();
        assert_eq!(zero.terms[&Partition::empty()], BigUint::from(1u8));
        assert!(frobenius_expansion(9).is_err());
    }

    #[test]
    fn determinant_matches_cofactor_expansion() {
        let m = vec![
            vec![c(1.0, 2.0), c(0.0, 1.0), c(3.0, 0.0)],
            vec![c(-1.0, 0.5), c(2.0, 0.0), c(0.0, -1.0)],
            vec![c(0.5, 0.5), c(1.0, 1.0), c(-2.0, 0.0)],
        ];
        let cof = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
        assert!((determinant(m) - cof).norm() < 1e-12);
    }
}
