//! Integer partitions and Young tableaux.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::{Error, Result};

pub const BRUTEFORCE_MAX_WEIGHT: usize = 10;
pub const SSYT_MAX_WEIGHT: usize = 8;
pub const SSYT_MAX_ALPHABET: usize = 6;

/// A partition λ₁ ≥ λ₂ ≥ … ≥ λ_l > 0. The empty sequence is λ = ∅.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::InvalidArgument("partition parts must be positive".into()));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidArgument("partition parts must be non-increasing".into()));
        }
        Ok(Self { parts })
    }

    pub fn empty() -> Self {
        Self { parts: Vec::new() }
    }

    /// Sorts arbitrary non-negative multiplicities into a partition, dropping zeros.
    pub fn from_multiplicities(mults: &[usize]) -> Self {
        let mut parts: Vec<usize> = mults.iter().copied().filter(|&m| m > 0).collect();
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Self { parts }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn weight(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// λ_j with the zero-padding convention λ_j = 0 for j ≥ l.
    pub fn part(&self, j: usize) -> usize {
        self.parts.get(j).copied().unwrap_or(0)
    }

    /// λ! = ∏ λᵢ!.
    pub fn factorial(&self) -> BigUint {
        self.parts.iter().fold(BigUint::one(), |acc, &p| acc * factorial(p))
    }

    /// Hook length arm + leg + 1 of cell (i, j), zero-based.
    pub fn hook(&self, i: usize, j: usize) -> usize {
        let arm = self.parts[i] - j - 1;
        let leg = self.parts[i + 1..].iter().take_while(|&&p| p > j).count();
        arm + leg + 1
    }
}

impl TryFrom<Vec<usize>> for Partition {
    type Error = Error;
    fn try_from(parts: Vec<usize>) -> Result<Self> {
        Self::new(parts)
    }
}

impl From<Partition> for Vec<usize> {
    fn from(p: Partition) -> Self {
        p.parts
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "()");
        }
        let s: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", s.join(","))
    }
}

/// Strictly increasing letters ı₁ < … < ı_l.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Alphabet {
    indices: Vec<usize>,
}

impl Alphabet {
    pub fn new(indices: Vec<usize>) -> Result<Self> {
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument("alphabet must be strictly increasing".into()));
        }
        Ok(Self { indices })
    }

    /// The alphabet 1, 2, …, l.
    pub fn first(l: usize) -> Self {
        Self { indices: (1..=l).collect() }
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
}

impl TryFrom<Vec<usize>> for Alphabet {
    type Error = Error;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<Alphabet> for Vec<usize> {
    fn from(a: Alphabet) -> Self {
        a.indices
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tableau {
    pub shape: Partition,
    pub entries: Vec<Vec<usize>>,
}

impl Tableau {
    pub fn is_standard(&self) -> bool {
        let rows_ok = self.entries.iter().all(|r| r.windows(2).all(|w| w[0] < w[1]));
        rows_ok && self.columns_strict()
    }

    pub fn is_semistandard(&self) -> bool {
        let rows_ok = self.entries.iter().all(|r| r.windows(2).all(|w| w[0] <= w[1]));
        rows_ok && self.columns_strict()
    }

    fn columns_strict(&self) -> bool {
        self.entries.windows(2).all(|pair| {
            pair[1].iter().zip(&pair[0]).all(|(below, above)| below > above)
        })
    }

    /// Multiplicity of each entry value 1..=l.
    pub fn content(&self, l: usize) -> Vec<usize> {
        let mut c = vec![0; l];
        for &e in self.entries.iter().flatten() {
            c[e - 1] += 1;
        }
        c
    }
}

pub fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * BigUint::from(k))
}

/// All partitions of `n` with at most `max_len` parts, reverse-lexicographic.
pub fn enumerate_partitions(n: usize, max_len: Option<usize>) -> Vec<Partition> {
    let max_len = max_len.unwrap_or(n.max(1));
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(rem: usize, cap: usize, max_len: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if rem == 0 {
            out.push(Partition { parts: cur.clone() });
            return;
        }
        if cur.len() == max_len {
            return;
        }
        for p in (1..=rem.min(cap)).rev() {
            cur.push(p);
            rec(rem - p, p, max_len, cur, out);
            cur.pop();
        }
    }
    rec(n, n, max_len, &mut cur, &mut out);
    out
}

/// ħ_λ = n!/∏h(i,j) as an exact integer.
pub fn hook_dimension(lambda: &Partition) -> Result<BigUint> {
    let mut prod = BigUint::one();
    for (i, &row) in lambda.parts.iter().enumerate() {
        for j in 0..row {
            prod *= BigUint::from(lambda.hook(i, j));
        }
    }
    let nfact = factorial(lambda.weight());
    if !(&nfact % &prod).is_zero() {
        return Err(Error::Internal(format!("hook product does not divide n! for {lambda}")));
    }
    Ok(nfact / prod)
}

/// Counts standard tableaux by testing every filling of the diagram with 1..n.
pub fn count_standard_tableaux_bruteforce(lambda: &Partition) -> Result<BigUint> {
    let n = lambda.weight();
    if n > BRUTEFORCE_MAX_WEIGHT {
        return Err(Error::Size(format!("|λ| = {n} > {BRUTEFORCE_MAX_WEIGHT}")));
    }
    let cells: Vec<(usize, usize)> = lambda
        .parts
        .iter()
        .enumerate()
        .flat_map(|(i, &r)| (0..r).map(move |j| (i, j)))
        .collect();
    let mut pos = vec![[0usize; 16]; 16];
    for (k, &(i, j)) in cells.iter().enumerate() {
        pos[i][j] = k;
    }
    let valid = |perm: &[usize]| {
        cells.iter().all(|&(i, j)| {
            let v = perm[pos[i][j]];
            (j == 0 || perm[pos[i][j - 1]] < v) && (i == 0 || perm[pos[i - 1][j]] < v)
        })
    };
    // Heap's algorithm over all n! fillings.
    let mut perm: Vec<usize> = (1..=n).collect();
    let mut count: u64 = u64::from(valid(&perm));
    let mut c = vec![0usize; n];
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            count += u64::from(valid(&perm));
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    Ok(BigUint::from(count))
}

pub fn conjugate(lambda: &Partition) -> Partition {
    let cols = lambda.part(0);
    let parts = (0..cols)
        .map(|j| lambda.parts.iter().take_while(|&&p| p > j).count())
        .collect();
    Partition { parts }
}

/// n!/λ!.
pub fn multinomial_dim(lambda: &Partition) -> BigUint {
    factorial(lambda.weight()) / lambda.factorial()
}

/// All semistandard fillings of λ with entries in 1..=l, in lexicographic row-reading order.
pub fn semistandard_tableaux(lambda: &Partition, l: usize) -> Result<Vec<Tableau>> {
    if lambda.weight() > SSYT_MAX_WEIGHT || l > SSYT_MAX_ALPHABET {
        return Err(Error::Size(format!(
            "semistandard enumeration limited to |λ| ≤ {SSYT_MAX_WEIGHT}, l ≤ {SSYT_MAX_ALPHABET}"
        )));
    }
    let mut out = Vec::new();
    if lambda.len() > l {
        return Ok(out);
    }
    let mut entries: Vec<Vec<usize>> = lambda.parts.iter().map(|&r| vec![0; r]).collect();
    let cells: Vec<(usize, usize)> = lambda
        .parts
        .iter()
        .enumerate()
        .flat_map(|(i, &r)| (0..r).map(move |j| (i, j)))
        .collect();
    fn rec(
        k: usize,
        cells: &[(usize, usize)],
        l: usize,
        entries: &mut Vec<Vec<usize>>,
        shape: &Partition,
        out: &mut Vec<Tableau>,
    ) {
        if k == cells.len() {
            out.push(Tableau { shape: shape.clone(), entries: entries.clone() });
            return;
        }
        let (i, j) = cells[k];
        let mut lo = 1;
        if j > 0 {
            lo = lo.max(entries[i][j - 1]);
        }
        if i > 0 {
            lo = lo.max(entries[i - 1][j] + 1);
        }
        for v in lo..=l {
            entries[i][j] = v;
            rec(k + 1, cells, l, entries, shape, out);
        }
    }
    rec(0, &cells, l, &mut entries, lambda, &mut out);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[usize]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    /// p(n) from Euler's pentagonal recurrence.
    fn pentagonal(n: usize) -> u64 {
        let mut table = vec![0i64; n + 1];
        table[0] = 1;
        for m in 1..=n {
            let mut s = 0i64;
            for k in 1.. {
                let k = k as i64;
                let sign = if k % 2 == 1 { 1 } else { -1 };
                let g1 = (k * (3 * k - 1) / 2) as usize;
                let g2 = (k * (3 * k + 1) / 2) as usize;
                if g1 > m {
                    break;
                }
                s += sign * table[m - g1];
                if g2 <= m {
                    s += sign * table[m - g2];
                }
            }
            table[m] = s;
        }
        table[n] as u64
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(enumerate_partitions(0, None), vec![Partition::empty()]);
        let four = enumerate_partitions(4, None);
        assert_eq!(four, vec![p(&[4]), p(&[3, 1]), p(&[2, 2]), p(&[2, 1, 1]), p(&[1, 1, 1, 1])]);
        assert_eq!(enumerate_partitions(3, Some(2)), vec![p(&[3]), p(&[2, 1])]);
        for n in 0..=15 {
            assert_eq!(enumerate_partitions(n, None).len() as u64, pentagonal(n), "n={n}");
        }
    }

    #[test]
    fn hook_examples() {
        assert_eq!(hook_dimension(&p(&[1])).unwrap(), BigUint::from(1u8));
        assert_eq!(hook_dimension(&p(&[2, 1])).unwrap(), BigUint::from(2u8));
        assert_eq!(hook_dimension(&p(&[2, 2])).unwrap(), BigUint::from(2u8));
        assert_eq!(hook_dimension(&Partition::empty()).unwrap(), BigUint::from(1u8));
    }

    #[test]
    fn bruteforce_examples() {
        assert_eq!(count_standard_tableaux_bruteforce(&p(&[4])).unwrap(), BigUint::from(1u8));
        assert_eq!(count_standard_tableaux_bruteforce(&p(&[2, 1])).unwrap(), BigUint::from(2u8));
        assert_eq!(count_standard_tableaux_bruteforce(&p(&[3, 2])).unwrap(), BigUint::from(5u8));
        assert!(matches!(
            count_standard_tableaux_bruteforce(&p(&[11])),
            Err(Error::Size(_))
        ));
    }

    #[test]
    fn conjugate_examples() {
        assert_eq!(conjugate(&p(&[2, 1])), p(&[2, 1]));
        assert_eq!(conjugate(&p(&[3, 1])), p(&[2, 1, 1]));
        assert_eq!(conjugate(&Partition::empty()), Partition::empty());
    }

    #[test]
    fn multinomial_examples() {
        assert_eq!(multinomial_dim(&p(&[2, 1])), BigUint::from(3u8));
        assert_eq!(multinomial_dim(&p(&[1, 1])), BigUint::from(2u8));
        assert_eq!(multinomial_dim(&p(&[5])), BigUint::from(1u8));
    }

    #[test]
    fn semistandard_examples() {
        assert_eq!(semistandard_tableaux(&p(&[1]), 2).unwrap().len(), 2);
        assert_eq!(semistandard_tableaux(&p(&[2, 1]), 2).unwrap().len(), 2);
        assert_eq!(semistandard_tableaux(&p(&[1, 1, 1]), 2).unwrap().len(), 0);
        assert!(semistandard_tableaux(&p(&[9]), 2).is_err());
        for t in semistandard_tableaux(&p(&[3, 2, 1]), 4).unwrap() {
            assert!(t.is_semistandard());
        }
    }

    #[test]
    fn invalid_partitions_rejected() {
        assert!(Partition::new(vec![1, 2]).is_err());
        assert!(Partition::new(vec![2, 0]).is_err());
        assert!(Alphabet::new(vec![1, 1]).is_err());
    }

    #[test]
    fn hook_squares_sum_to_factorial() {
        for n in 0..=8 {
            let s: BigUint = enumerate_partitions(n, None)
                .iter()
                .map(|l| {
                    let h = hook_dimension(l).unwrap();
                    &h * &h
                })
                .sum();
            assert_eq!(s, factorial(n));
        }
    }

    #[test]
    fn conjugation_is_involutive() {
        for n in 0..=10 {
            for l in enumerate_partitions(n, None) {
                assert_eq!(conjugate(&conjugate(&l)), l);
            }
        }
    }
}
