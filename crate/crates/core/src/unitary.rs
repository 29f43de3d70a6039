//! Haar sampling, the Livšic projection U(m+1) → U(m), virtual unitary chains
//! and Paley–Wiener evaluation.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::hs_algebra::HsElement;
use crate::C64;

pub const UNITARITY_TOL: f64 = 1e-10;
pub const LIVSIC_BRANCH_TOL: f64 = 1e-12;

/// Deterministic generator for `(seed, stream)`. Streams with distinct ids are
/// independent ChaCha8 keystreams under the same key.
pub fn rng_stream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

#[derive(Clone, Debug, PartialEq)]
pub struct UnitaryMatrix {
    entries: DMatrix<C64>,
}

/// max |(U*U − I)_ij|.
pub fn unitarity_defect(u: &DMatrix<C64>) -> f64 {
    let g = u.adjoint() * u;
    let n = g.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((g[(i, j)] - target).norm());
        }
    }
    worst
}

impl UnitaryMatrix {
    pub fn new(entries: DMatrix<C64>) -> Result<Self> {
        if entries.nrows() != entries.ncols() || entries.nrows() == 0 {
            return Err(Error::Dimension("unitary must be square with m ≥ 1".into()));
        }
        let defect = unitarity_defect(&entries);
        if !(defect <= UNITARITY_TOL) {
            return Err(Error::NotUnitary(defect));
        }
        Ok(Self { entries })
    }

    pub fn identity(m: usize) -> Self {
        Self { entries: DMatrix::identity(m, m) }
    }

    pub fn m(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<C64> {
        &self.entries
    }

    pub fn into_entries(self) -> DMatrix<C64> {
        self.entries
    }

    pub fn adjoint(&self) -> Self {
        Self { entries: self.entries.adjoint() }
    }

    pub fn defect(&self) -> f64 {
        unitarity_defect(&self.entries)
    }

    /// Block-diagonal embedding diag(U, I) at size `k ≥ m`.
    pub fn pad_to(&self, k: usize) -> Self {
        let m = self.m();
        if k <= m {
            return self.clone();
        }
        let mut e = DMatrix::identity(k, k);
        e.view_mut((0, 0), (m, m)).copy_from(&self.entries);
        Self { entries: e }
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self { entries: &self.entries * &other.entries }
    }

    /// Multiplies every entry by a unit-modulus phase.
    pub fn rotate(&self, phase: C64) -> Self {
        Self { entries: &self.entries * phase }
    }
}

/// Haar-distributed U(m): complex Ginibre draw, QR, then the diagonal phase
/// correction Q·diag(r_ii/|r_ii|).
pub fn haar_sample<R: Rng + ?Sized>(m: usize, rng: &mut R) -> Result<UnitaryMatrix> {
    if m == 0 {
        return Err(Error::InvalidArgument("Haar sampling needs m ≥ 1".into()));
    }
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let z = DMatrix::from_fn(m, m, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        C64::new(re * s, im * s)
    });
    let qr = z.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..m {
        let rjj = r[(j, j)];
        let n = rjj.norm();
        let ph = if n > 0.0 { rjj / n } else { C64::new(1.0, 0.0) };
        for i in 0..m {
            q[(i, j)] *= ph;
        }
    }
    Ok(UnitaryMatrix { entries: q })
}

/// u = [[z, α], [β, t]] ↦ z − α(1+t)⁻¹β, or z when |1+t| < 10⁻¹².
pub fn livsic_project(u: &UnitaryMatrix) -> Result<UnitaryMatrix> {
    let n = u.m();
    if n < 2 {
        return Err(Error::InvalidArgument("Livšic projection needs size ≥ 2".into()));
    }
    let m = n - 1;
    let e = &u.entries;
    let t = e[(m, m)];
    let mut z = e.view((0, 0), (m, m)).into_owned();
    let denom = C64::new(1.0, 0.0) + t;
    if denom.norm() >= LIVSIC_BRANCH_TOL {
        let inv = denom.inv();
        for i in 0..m {
            let ai = e[(i, m)] * inv;
            for j in 0..m {
                z[(i, j)] -= ai * e[(m, j)];
            }
        }
    }
    Ok(UnitaryMatrix { entries: z })
}

/// π^M_k: repeated single-step projections; identity when k ≥ M.
pub fn livsic_chain(u: &UnitaryMatrix, k: usize) -> Result<UnitaryMatrix> {
    if k == 0 {
        return Err(Error::InvalidArgument("target level must be ≥ 1".into()));
    }
    let mut cur = u.clone();
    while cur.m() > k {
        cur = livsic_project(&cur)?;
    }
    Ok(cur)
}

/// A point of the projective limit represented by its level-m top and the
/// lazily materialised Livšic descents below it.
#[derive(Clone, Debug)]
pub struct VirtualUnitary {
    top: UnitaryMatrix,
    chain: Vec<OnceLock<UnitaryMatrix>>,
}

impl VirtualUnitary {
    pub fn new(top: UnitaryMatrix) -> Self {
        let m = top.m();
        Self { top, chain: (0..m).map(|_| OnceLock::new()).collect() }
    }

    pub fn level(&self) -> usize {
        self.top.m()
    }

    pub fn top(&self) -> &UnitaryMatrix {
        &self.top
    }

    /// u_k: the cached descent for k < m, the top itself at k = m.
    pub fn descent(&self, k: usize) -> Result<&UnitaryMatrix> {
        let m = self.level();
        if k == 0 || k > m {
            return Err(Error::IndexOutOfRange { index: k, max: m });
        }
        if k == m {
            return Ok(&self.top);
        }
        if let Some(u) = self.chain[k].get() {
            return Ok(u);
        }
        let above = self.descent(k + 1)?;
        let u = livsic_project(above)?;
        Ok(self.chain[k].get_or_init(|| u))
    }

    /// u_k at any level ≥ 1; levels above m are identity-padded.
    pub fn at(&self, k: usize) -> Result<UnitaryMatrix> {
        if k > self.level() {
            Ok(self.top.pad_to(k))
        } else {
            self.descent(k).cloned()
        }
    }

    pub fn adjoint(&self) -> Self {
        Self::new(self.top.adjoint())
    }
}

/// 𝔲.g with g = (v, w): top ↦ w*·top·v, with v and w identity-padded to level m.
pub fn right_action(u: &VirtualUnitary, v: &UnitaryMatrix, w: &UnitaryMatrix) -> Result<VirtualUnitary> {
    let m = u.level();
    if v.m() > m || w.m() > m {
        return Err(Error::Dimension(format!("action of size {}/{} exceeds level {m}", v.m(), w.m())));
    }
    let (v, w) = (v.pad_to(m), w.pad_to(m));
    let top = w.adjoint().mul(u.top()).mul(&v);
    Ok(VirtualUnitary::new(top))
}

/// φ_a(𝔲) = conj(t_a) + tr(A*·U_d), with U_d the leading d×d block of the top.
pub fn paley_wiener_eval(a: &HsElement, u: &VirtualUnitary) -> Result<C64> {
    let d = a.d();
    let m = u.level();
    if d > m {
        return Err(Error::Dimension(format!("d = {d} exceeds level m = {m}")));
    }
    let top = u.top().entries();
    let mut acc = a.unit.conj();
    for i in 0..d {
        for j in 0..d {
            acc += a.matrix[(i, j)].conj() * top[(i, j)];
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn haar_small_cases() {
        let mut rng = rng_stream(1, 0);
        let u = haar_sample(1, &mut rng).unwrap();
        assert!((u.entries()[(0, 0)].norm() - 1.0).abs() < 1e-14);
        assert!(haar_sample(0, &mut rng).is_err());
        for m in 1..=6 {
            assert!(haar_sample(m, &mut rng).unwrap().defect() < 1e-12);
        }
    }

    #[test]
    fn haar_is_deterministic_per_stream() {
        let a = haar_sample(3, &mut rng_stream(9, 4)).unwrap();
        let b = haar_sample(3, &mut rng_stream(9, 4)).unwrap();
        let c = haar_sample(3, &mut rng_stream(9, 5)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn livsic_examples() {
        let id = livsic_project(&UnitaryMatrix::identity(4)).unwrap();
        assert_eq!(id, UnitaryMatrix::identity(3));
        let swap = UnitaryMatrix::new(DMatrix::from_row_slice(
            2,
            2,
            &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
        ))
        .unwrap();
        let out = livsic_project(&swap).unwrap();
        assert_eq!(out.entries()[(0, 0)], c(-1.0, 0.0));
        let w = haar_sample(3, &mut rng_stream(2, 0)).unwrap();
        let mut e = DMatrix::identity(4, 4);
        e.view_mut((0, 0), (3, 3)).copy_from(w.entries());
        e[(3, 3)] = c(-1.0, 0.0);
        let out = livsic_project(&UnitaryMatrix::new(e).unwrap()).unwrap();
        assert_eq!(out, w);
        assert!(livsic_project(&UnitaryMatrix::identity(1)).is_err());
    }

    #[test]
    fn chain_examples() {
        let u = haar_sample(4, &mut rng_stream(3, 0)).unwrap();
        assert_eq!(livsic_chain(&u, 4).unwrap(), u);
        assert_eq!(livsic_chain(&u, 7).unwrap(), u);
        assert_eq!(livsic_chain(&UnitaryMatrix::identity(5), 1).unwrap(), UnitaryMatrix::identity(1));
        let two = livsic_chain(&u, 2).unwrap();
        assert_eq!(two.m(), 2);
        assert!(two.defect() < 1e-10);
        assert!(livsic_chain(&u, 0).is_err());
    }

    #[test]
    fn virtual_descent_matches_chain() {
        let u = haar_sample(5, &mut rng_stream(4, 0)).unwrap();
        let v = VirtualUnitary::new(u.clone());
        for k in 1..=5 {
            assert_eq!(v.descent(k).unwrap(), &livsic_chain(&u, k).unwrap());
        }
        assert_eq!(v.at(7).unwrap(), u.pad_to(7));
        assert!(v.descent(0).is_err());
    }

    #[test]
    fn right_action_examples() {
        let mut rng = rng_stream(5, 0);
        let u = VirtualUnitary::new(haar_sample(4, &mut rng).unwrap());
        let id = UnitaryMatrix::identity(4);
        assert_eq!(right_action(&u, &id, &id).unwrap().top(), u.top());
        let v = haar_sample(3, &mut rng).unwrap();
        let acted = right_action(&u, &v, &UnitaryMatrix::identity(2)).unwrap();
        assert!((acted.top().entries() - u.top().entries() * v.pad_to(4).entries()).camax() < 1e-14);
        let w = haar_sample(4, &mut rng).unwrap();
        let there = right_action(&u, &v, &w).unwrap();
        let back = right_action(&there, &v.adjoint(), &w.adjoint()).unwrap();
        assert!((back.top().entries() - u.top().entries()).camax() < 1e-12);
        assert!(right_action(&u, &UnitaryMatrix::identity(5), &id).is_err());
    }

    #[test]
    fn paley_wiener_examples() {
        let u = VirtualUnitary::new(haar_sample(4, &mut rng_stream(6, 0)).unwrap());
        let top = u.top().entries().clone();
        assert_eq!(paley_wiener_eval(&HsElement::one(3), &u).unwrap(), c(1.0, 0.0));
        assert_eq!(paley_wiener_eval(&HsElement::basis(3, 1), &u).unwrap(), top[(0, 0)]);
        let cs = [c(0.0, 0.0), c(1.0, 2.0), c(-0.5, 0.1), c(0.0, -1.0)];
        let a = HsElement::diagonal(&cs);
        let want: C64 = (1..4).map(|k| cs[k].conj() * top[(k - 1, k - 1)]).sum();
        assert!((paley_wiener_eval(&a, &u).unwrap() - want).norm() < 1e-14);
        let lhs = paley_wiener_eval(&a, &u).unwrap().conj();
        let rhs = paley_wiener_eval(&a.adjoint(), &u.adjoint()).unwrap();
        assert!((lhs - rhs).norm() < 1e-14);
        assert!(paley_wiener_eval(&HsElement::one(5), &u).is_err());
    }
}
